"""The canonical distance map and its derived objects.

Each point x of a finite metric-measure space maps to the function
d(x, .), realised as a vector in a discrete weighted L2. Weight-scaled
coordinates W[x][z] = d(x, z) * sqrt(weights[z]) make every L2 inner
product a plain Euclidean dot product, so one representation serves the
induced metrics, the kernel, projections, and spectral tests.
"""

from dataclasses import dataclass

import numpy as np

from .spaces import MetricMeasureSpace, _rho_matrix

_TOL = 1e-12


def l2_inner(space: MetricMeasureSpace, f, g) -> float:
    """Weighted inner product sum_z f(z) g(z) w_z."""
    return float(np.dot(np.asarray(f) * space.weights, np.asarray(g)))


def l2_norm(space: MetricMeasureSpace, f) -> float:
    f = np.asarray(f, dtype=float)
    return float(np.sqrt(np.dot(f * space.weights, f)))


@dataclass(frozen=True)
class CanonicalImage:
    """Function values V[x][z] = d(x, z), weight-scaled coordinates W,
    and the L2 norms of the image points."""
    V: np.ndarray
    W: np.ndarray
    norms: np.ndarray
    norms_sq: np.ndarray


def canonical_image(space: MetricMeasureSpace) -> CanonicalImage:
    V = np.array(space.D)
    W = V * np.sqrt(space.weights)[None, :]
    norms_sq = np.einsum("ij,ij->i", W, W)
    return CanonicalImage(V=V, W=W, norms=np.sqrt(norms_sq), norms_sq=norms_sq)


def _td_matvec(V: np.ndarray, weights: np.ndarray, f: np.ndarray) -> np.ndarray:
    # Single code path for the integral operator: gram_delta builds its rows
    # through this exact call so the operator/kernel diagram commutes
    # bit-for-bit.
    return V @ (weights * f)


@dataclass(frozen=True)
class KernelMatrix:
    """Weighted row Gram G[x][y] = <d(x,.), d(.,y)> with its minimum."""
    G: np.ndarray
    s_min: float
    s_min_witness: tuple


def gram_delta(space: MetricMeasureSpace) -> KernelMatrix:
    V = space.D
    n = space.n
    G = np.empty((n, n))
    for x in range(n):
        G[x] = _td_matvec(V, space.weights, V[x])
    i, j = np.unravel_index(int(np.argmin(G)), G.shape)
    return KernelMatrix(G=G, s_min=float(G[i, j]), s_min_witness=(int(i), int(j)))


def interval_delta_closed_form(x: float, y: float) -> float:
    """Two-branch cubic for the kernel of the unit interval with Lebesgue
    measure; symmetric in (x, y)."""
    if not (0 <= x <= 1 and 0 <= y <= 1):
        raise ValueError(f"arguments must lie in [0, 1], got ({x!r}, {y!r})")
    if y > x:
        x, y = y, x
    return y * y * (x - y / 3.0) + x * x * (x / 3.0 - y) + x * y - (x + y) / 2.0 + 1.0 / 3.0


@dataclass(frozen=True)
class SandwichChecks:
    """Worst signed margins of the two chains relating the induced metrics
    (negative margin = violation beyond tolerance)."""
    theta_below_rho: float   # min of rho - (2 sqrt(s)/pi) theta
    rho_below_d: float       # min of sqrt(mass) d - rho
    theta_below_kappa: float  # min of kappa - (2/pi) theta
    kappa_below_theta: float  # min of theta - kappa


@dataclass(frozen=True)
class SphereMetrics:
    rho: np.ndarray
    theta: np.ndarray
    kappa: np.ndarray
    sandwich: SandwichChecks


def sphere_metrics(space: MetricMeasureSpace) -> SphereMetrics:
    """Induced L2 metric rho, spherical arc-length theta after radial
    projection, and chordal distance kappa = 2 sin(theta/2).

    Cosines are clamped to [-1, 1]: they are provably in (0, 1] for three
    or more points but rounding can exceed 1 by ulps.
    """
    if space.n < 2:
        raise ValueError("projection to the sphere needs at least 2 points "
                         "(a single image point has norm 0)")
    img = canonical_image(space)
    ker = gram_delta(space)
    rho = _rho_matrix(space.D, space.weights)
    cos = ker.G / np.outer(img.norms, img.norms)
    theta = np.arccos(np.clip(cos, -1.0, 1.0))
    np.fill_diagonal(theta, 0.0)
    kappa = 2.0 * np.sin(theta / 2.0)

    s = max(ker.s_min, 0.0)
    off = ~np.eye(space.n, dtype=bool)
    sandwich = SandwichChecks(
        theta_below_rho=float((rho - (2.0 * np.sqrt(s) / np.pi) * theta)[off].min()),
        rho_below_d=float((np.sqrt(space.total_mass) * space.D - rho)[off].min()),
        theta_below_kappa=float((kappa - (2.0 / np.pi) * theta)[off].min()),
        kappa_below_theta=float((theta - kappa)[off].min()),
    )
    return SphereMetrics(rho=rho, theta=theta, kappa=kappa, sandwich=sandwich)


def radial_projection(u) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    nrm = np.linalg.norm(u)
    if nrm == 0:
        raise ValueError("radial projection is undefined at the origin")
    return u / nrm


def radial_derivative(u, v) -> np.ndarray:
    """Derivative of the radial projection at u in direction v:
    (v - <u,v> u / |u|^2) / |u|."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    nrm2 = float(np.dot(u, u))
    if nrm2 == 0:
        raise ValueError("radial projection is undefined at the origin")
    return (v - (np.dot(u, v) / nrm2) * u) / np.sqrt(nrm2)


def apply_Td(space: MetricMeasureSpace, f) -> np.ndarray:
    """Integral operator (T f)(x) = sum_z d(x, z) f(z) w_z."""
    f = np.asarray(f, dtype=float)
    if f.shape != (space.n,):
        raise ValueError(f"function vector has length {f.shape}, expected ({space.n},)")
    return _td_matvec(space.D, space.weights, f)


def lip_norm(space: MetricMeasureSpace, f, s: float = 1.0) -> float:
    """max{sup |f|, brute-force Lipschitz factor of f} with respect to the
    snowflaked metric d^s."""
    if not 0 < s <= 1:
        raise ValueError(f"snowflake exponent must lie in (0, 1], got {s!r}")
    f = np.asarray(f, dtype=float)
    sup = float(np.abs(f).max())
    n = space.n
    iu = np.triu_indices(n, k=1)
    if iu[0].size == 0:
        return sup
    den = space.D[iu] ** s if s != 1.0 else space.D[iu]
    lip = float(np.max(np.abs(f[iu[0]] - f[iu[1]]) / den))
    return max(sup, lip)


def apply_Jd(space: MetricMeasureSpace, f) -> tuple[np.ndarray, float]:
    """Same values as apply_Td, viewed in the Lipschitz-norm codomain.

    Returns (values, lip_norm) and asserts the operator bound
    lip_norm <= max{1, diam} * mass * |f|_2.
    """
    values = apply_Td(space, f)
    norm = lip_norm(space, values)
    bound = max(1.0, space.diameter) * space.total_mass * l2_norm(space, f)
    if norm > bound + _TOL * max(1.0, bound):
        raise AssertionError(
            f"Lipschitz-norm bound violated: {norm!r} > {bound!r}")
    return values, norm


def lambda_lip_distance(space: MetricMeasureSpace, x: int, y: int) -> float:
    """Lipschitz norm of d(x,.) - d(y,.), asserted equal to max{2, d(x,y)}."""
    if x == y:
        return 0.0
    value = lip_norm(space, space.D[x] - space.D[y])
    expected = max(2.0, float(space.D[x, y]))
    if abs(value - expected) > _TOL * max(1.0, expected):
        raise AssertionError(
            f"lift distance identity failed at ({x}, {y}): {value!r} != {expected!r}")
    return value


def snowflake_lift_lip(space: MetricMeasureSpace, s: float) -> tuple[float, float]:
    """Brute-force Lipschitz constant of the lift x -> d(x,.) from the
    s-snowflake into the (1-s)-Lipschitz norm, with its theoretical bound
    max{2, diam^(1-s)}."""
    if not 0 < s < 1:
        raise ValueError(f"snowflake exponent must lie in (0, 1), got {s!r}")
    n = space.n
    lip = 0.0
    for x in range(n):
        for y in range(x + 1, n):
            num = lip_norm(space, space.D[x] - space.D[y], s=1.0 - s)
            lip = max(lip, num / space.D[x, y] ** s)
    bound = max(2.0, space.diameter ** (1.0 - s))
    if lip > bound + _TOL * max(1.0, bound):
        raise AssertionError(f"snowflake lift bound violated: {lip!r} > {bound!r}")
    return lip, bound


def delta_lip_bound(space: MetricMeasureSpace) -> tuple[float, float]:
    """Worst expansion ratio of the kernel-row map x -> G[x] in L2 against
    d, with the bound diam * mass^(3/2); also asserts row injectivity."""
    ker = gram_delta(space)
    n = space.n
    worst = 0.0
    for x in range(n):
        for y in range(x + 1, n):
            dist = l2_norm(space, ker.G[x] - ker.G[y])
            if dist == 0.0:
                raise AssertionError(f"kernel rows {x} and {y} coincide")
            worst = max(worst, dist / space.D[x, y])
    bound = space.diameter * space.total_mass ** 1.5
    if worst > bound + _TOL * max(1.0, bound):
        raise AssertionError(f"kernel-row Lipschitz bound violated: {worst!r} > {bound!r}")
    return worst, bound


@dataclass(frozen=True)
class KappaGramReport:
    """Both readings of the chordal-kernel identity, side by side.

    cos_theta is the Gram of the radially projected image; kappa_gram is
    the literal weighted row Gram of the chordal-distance matrix. The two
    differ in general; the worst off-diagonal discrepancy is reported, not
    resolved. The pseudometric check applies to 1 - cos_theta.
    """
    cos_theta: np.ndarray
    kappa_gram: np.ndarray
    max_discrepancy: float
    pseudometric_violations: tuple


def kappa_gram_comparison(space: MetricMeasureSpace) -> KappaGramReport:
    if space.n < 3:
        raise ValueError("comparison needs at least 3 points")
    img = canonical_image(space)
    sph = sphere_metrics(space)
    U = img.W / img.norms[:, None]
    cos = U @ U.T
    kg = np.empty_like(cos)
    for x in range(space.n):
        kg[x] = _td_matvec(sph.kappa, space.weights, sph.kappa[x])
    pseudo = 1.0 - cos
    violations = []
    sym = float(np.abs(pseudo - pseudo.T).max())
    if sym > _TOL:
        violations.append(("symmetry", sym))
    dg = float(np.abs(np.diag(pseudo)).max())
    if dg > _TOL:
        violations.append(("zero_diagonal", dg))
    worst = -np.inf
    for j in range(space.n):
        worst = max(worst, float((pseudo - (pseudo[:, j][:, None] + pseudo[j, :][None, :])).max()))
    if worst > _TOL:
        violations.append(("triangle", worst))
    off = ~np.eye(space.n, dtype=bool)
    return KappaGramReport(
        cos_theta=cos, kappa_gram=kg,
        max_discrepancy=float(np.abs(cos - kg)[off].max()),
        pseudometric_violations=tuple(violations))
