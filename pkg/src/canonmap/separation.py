"""Uniform point separation: E-sets, certificates, and the quantitative
bridges between separation and the extremal constants of the canonical map.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ContainmentError
from .spaces import MetricMeasureSpace, _rho_matrix, as_distance_matrix, build_interval_grid
from .canonical import canonical_image, gram_delta

_TOL = 1e-12


@dataclass(frozen=True)
class SeparationCertificate:
    """(epsilon, c) with mass of E(x, y, epsilon) >= c for every pair;
    witness_pair attains the minimum mass."""
    epsilon: float
    c: float
    witness_pair: tuple


@dataclass(frozen=True)
class SeparationProfile:
    """c(eps) = min over pairs of the E-set mass, evaluated at every exact
    breakpoint (the pairwise distance-difference ratios); best maximises
    the figure of merit eps^2 * c, the exact lower bound on the squared
    lower Lipschitz constant of the canonical map."""
    breakpoints: tuple          # ((eps, c), ...) sorted by eps
    best: SeparationCertificate


def e_set_mass(space: MetricMeasureSpace, x: int, y: int, eps: float):
    """Members and mass of E(x, y, eps) = {z : |d(x,z) - d(y,z)| >= eps d(x,y)}."""
    if x == y:
        raise ValueError("E-set is undefined for a degenerate pair (x == y)")
    if eps <= 0:
        raise ValueError(f"separation scale must be positive, got {eps!r}")
    diffs = np.abs(space.D[x] - space.D[y])
    members = np.flatnonzero(diffs >= eps * space.D[x, y])
    return members, float(space.weights[members].sum())


def separation_profile(space: MetricMeasureSpace) -> SeparationProfile:
    if space.n < 2:
        raise ValueError("profile needs at least 2 points")
    D, w = space.D, space.weights
    pairs = [(x, y) for x in range(space.n) for y in range(x + 1, space.n)]
    # per pair, the mass of E(x, y, eps) is a right-continuous step function
    # of eps with jumps exactly at the ratios |d(x,z) - d(y,z)| / d(x,y);
    # z = x always contributes ratio 1, so every pair reaches eps = 1
    ratio_rows = []
    suffix_rows = []
    all_eps = []
    for x, y in pairs:
        r = np.abs(D[x] - D[y]) / D[x, y]
        order = np.argsort(r, kind="stable")
        r_sorted = r[order]
        # suffix sums: mass of {z : ratio >= eps} for eps just above r_sorted[i-1]
        suffix = np.concatenate([np.cumsum(w[order][::-1])[::-1], [0.0]])
        ratio_rows.append(r_sorted)
        suffix_rows.append(suffix)
        all_eps.append(r_sorted[r_sorted > 0])
    eps_values = np.unique(np.concatenate(all_eps))

    c_values = np.full(eps_values.shape, np.inf)
    witnesses = [None] * len(eps_values)
    for (x, y), r_sorted, suffix in zip(pairs, ratio_rows, suffix_rows):
        idx = np.searchsorted(r_sorted, eps_values, side="left")
        masses = suffix[idx]
        better = masses < c_values
        c_values[better] = masses[better]
        for k in np.flatnonzero(better):
            witnesses[k] = (x, y)

    breakpoints = tuple((float(e), float(c)) for e, c in zip(eps_values, c_values))
    merits = eps_values * eps_values * c_values
    k = int(np.argmax(merits))
    best = SeparationCertificate(epsilon=float(eps_values[k]), c=float(c_values[k]),
                                 witness_pair=witnesses[k])
    return SeparationProfile(breakpoints=breakpoints, best=best)


@dataclass(frozen=True)
class LipschitzReport:
    """Extremal distance ratios of a correspondence of two metrics on one
    point set; lower/upper are attained at the recorded witness pairs."""
    lower: float
    upper: float
    lower_witness: tuple
    upper_witness: tuple

    @property
    def distortion(self) -> float:
        return self.upper / self.lower


def lipschitz_constants(src_D, dst_D) -> LipschitzReport:
    src = as_distance_matrix(src_D)
    dst = as_distance_matrix(dst_D)
    if src.shape != dst.shape:
        raise ValueError(f"point sets differ: {src.shape} vs {dst.shape}")
    iu = np.triu_indices(src.shape[0], k=1)
    ratios = dst[iu] / src[iu]
    lo, hi = int(np.argmin(ratios)), int(np.argmax(ratios))
    return LipschitzReport(
        lower=float(ratios[lo]), upper=float(ratios[hi]),
        lower_witness=(int(iu[0][lo]), int(iu[1][lo])),
        upper_witness=(int(iu[0][hi]), int(iu[1][hi])))


def _pairwise_l2(rows: np.ndarray, weights: np.ndarray) -> np.ndarray:
    scaled = rows * np.sqrt(weights)[None, :]
    n = rows.shape[0]
    out = np.zeros((n, n))
    for i in range(n):
        diff = scaled[i + 1:] - scaled[i]
        r = np.sqrt(np.einsum("ij,ij->i", diff, diff))
        out[i, i + 1:] = r
        out[i + 1:, i] = r
    return out


@dataclass(frozen=True)
class CanonicalConstants:
    """Extremal constants of the canonical map, of its iterate on the
    pushed-forward space, and of the kernel-row map, plus the chained
    lower-constant inequality relating the latter to the former."""
    iota_d: LipschitzReport
    iota_rho: LipschitzReport
    iota_delta: LipschitzReport
    min_norm: float
    lower_chain_ok: bool


def canonical_constants(space: MetricMeasureSpace) -> CanonicalConstants:
    rho = _rho_matrix(space.D, space.weights)
    rho_of_rho = _rho_matrix(rho, space.weights)
    delta_rows = gram_delta(space).G
    delta_dist = _pairwise_l2(delta_rows, space.weights)

    iota_d = lipschitz_constants(space.D, rho)
    iota_rho = lipschitz_constants(space.D, rho_of_rho)
    iota_delta = lipschitz_constants(space.D, delta_dist)
    min_norm = float(canonical_image(space).norms.min())
    ok = iota_delta.lower * min_norm <= iota_d.lower + _TOL
    return CanonicalConstants(iota_d=iota_d, iota_rho=iota_rho, iota_delta=iota_delta,
                              min_norm=min_norm, lower_chain_ok=bool(ok))


def snowflake_canonical_trend(n_values, s: float):
    """Lower Lipschitz constant of the canonical map viewed from the
    s-snowflaked interval grid, for each grid size. For s < 1 the sequence
    decays toward 0 as the grid refines (the snowflaked map cannot stay
    bi-Lipschitz on a non-discrete limit); s = 1 gives the plain canonical
    constant."""
    if not 0 < s <= 1:
        raise ValueError(f"snowflake exponent must lie in (0, 1], got {s!r}")
    out = []
    for n in n_values:
        grid = build_interval_grid(n)
        rho = _rho_matrix(grid.D, grid.weights)
        report = lipschitz_constants(grid.D ** s, rho)
        out.append((int(n), report.lower))
    return out


def transfer_separation(space: MetricMeasureSpace, d1, d2, k: float,
                        certificate: SeparationCertificate) -> SeparationCertificate:
    """Carry a separation certificate from d1 to a comparable metric d2.

    Preconditions (all verified exhaustively): ell*d1 <= d2 <= d1 for some
    ell in (0, 1]; |delta(x,z) - delta(y,z)| <= k*delta(x,y) for all
    triples, delta = d1 - d2; the certificate holds for d1. Returns
    (eps/k, c) for d2 after exhaustively checking the E-set containment
    E(x,y,eps; d1) within E(x,y,eps/k; d2) for every pair.
    """
    d1 = as_distance_matrix(d1)
    d2 = as_distance_matrix(d2)
    if d1.shape != d2.shape or d1.shape[0] != space.n:
        raise ValueError("metrics must live on the space's point set")
    n = space.n
    iu = np.triu_indices(n, k=1)
    scale = max(1.0, float(d1.max()))
    if (d2[iu] > d1[iu] + _TOL * scale).any() or (d2[iu] <= 0).any():
        bad = int(np.argmax(d2[iu] - d1[iu]))
        raise ValueError(
            f"domination d2 <= d1 fails at pair ({iu[0][bad]}, {iu[1][bad]})")

    delta = d1 - d2
    eps, c = certificate.epsilon, certificate.c
    if not (np.abs(delta) <= _TOL * scale).all():
        if k == 0:
            raise ValueError("k = 0 requires d1 == d2")
        for x in range(n):
            for y in range(n):
                lhs = np.abs(delta[x] - delta[y])
                bad = lhs > k * delta[x, y] + _TOL * scale
                if bad.any():
                    z = int(np.flatnonzero(bad)[0])
                    raise ValueError(
                        f"difference-regularity hypothesis fails at triple "
                        f"({x}, {y}, {z}): {lhs[z]!r} > k*delta = {k * delta[x, y]!r}")
        new_eps = eps / k
    else:
        new_eps = eps  # identical metrics: certificate carries over as is

    # re-verify the input certificate, then the containment, pair by pair
    new_c = np.inf
    witness = None
    for x in range(n):
        for y in range(x + 1, n):
            in1 = np.abs(d1[x] - d1[y]) >= eps * d1[x, y]
            if float(space.weights[in1].sum()) < c - _TOL:
                raise ValueError(f"input certificate fails at pair ({x}, {y})")
            in2 = np.abs(d2[x] - d2[y]) >= new_eps * d2[x, y]
            if (in1 & ~in2).any():
                z = int(np.flatnonzero(in1 & ~in2)[0])
                raise ContainmentError(
                    f"E-set containment fails at ({x}, {y}) for z = {z}")
            mass2 = float(space.weights[in2].sum())
            if mass2 < new_c:
                new_c, witness = mass2, (x, y)
    return SeparationCertificate(epsilon=new_eps, c=min(c, new_c), witness_pair=witness)


@dataclass(frozen=True)
class ConjectureHypotheses:
    """Numeric status of the two embedding-conjecture hypotheses: a positive
    lower constant, and the strict norm inequality for the half-snowflake
    image at every point. The conjecture's conclusion is not evaluated."""
    ell: float
    h1_ok: bool
    h2_ok: bool
    worst_x: int
    worst_margin: float


def conjecture_hypotheses(space: MetricMeasureSpace) -> ConjectureHypotheses:
    img = canonical_image(space)
    rho = _rho_matrix(space.D, space.weights)
    ell = lipschitz_constants(space.D, rho).lower
    half = canonical_image(space.with_distances(space.D ** 0.5))
    margins = ell * img.norms - half.norms_sq
    worst = int(np.argmin(margins))
    # strictness with zero margin: an exact equality case counts as failure
    h2 = bool((half.norms_sq < ell * img.norms).all())
    return ConjectureHypotheses(ell=float(ell), h1_ok=bool(ell > 0), h2_ok=h2,
                                worst_x=worst, worst_margin=float(margins[worst]))
