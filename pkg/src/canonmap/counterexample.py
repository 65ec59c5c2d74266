"""The non-doubling counterexample model: Hadamard codes, hat-function
bumps, and the truncated mixed space grid + bumps + zero.

Every sup-norm distance between bumps is computed from the exact
piecewise-linear representation (breakpoint scan), never by sampling;
L2 quantities come from exact segment integration of piecewise-quadratic
integrands. The model is a finite-scale refutation instrument: the
canonical map's bi-Lipschitz constants stay tame while packing counts in
small balls around the zero function blow up.
"""

from dataclasses import dataclass

import numpy as np

from .spaces import MetricMeasureSpace
from .errors import DegenerateScaleError

_MAX_CODE_LEVEL = 12


@dataclass(frozen=True)
class HadamardCode:
    """2^n sign vectors of length 2^n, pairwise Hamming distance 2^(n-1)."""
    n: int
    codewords: np.ndarray


def hadamard_code(n: int) -> HadamardCode:
    if not 1 <= n <= _MAX_CODE_LEVEL:
        raise ValueError(f"code level must lie in [1, {_MAX_CODE_LEVEL}], got {n}")
    H = np.array([[1]], dtype=np.int8)
    for _ in range(n):
        H = np.block([[H, H], [H, -H]]).astype(np.int8)
    H.setflags(write=False)
    return HadamardCode(n=n, codewords=H)


def hat(t):
    """The unit hat: max{0, 1/2 - |t - 1/2|}, zero outside [0, 1]."""
    t = np.asarray(t, dtype=float)
    out = np.maximum(0.0, 0.5 - np.abs(t - 0.5))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class BumpFunction:
    """Level-n signed sum of scaled hats: cell i of width 2^-n carries a
    hat of height alpha[i] * 2^-(n+1). Piecewise linear with slopes +-1,
    breakpoints at multiples of 2^-(n+1)."""
    n: int
    alpha: tuple

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        t = np.atleast_1d(t)
        out = np.zeros_like(t)
        inside = (t >= 0.0) & (t <= 1.0)
        u = t[inside] * 2 ** self.n
        cell = np.minimum(u.astype(int), 2 ** self.n - 1)
        a = np.asarray(self.alpha, dtype=float)
        out[inside] = a[cell] * 2.0 ** (-self.n) * hat(u - cell)
        return float(out[0]) if scalar else out

    def breakpoint_values(self, level: int) -> np.ndarray:
        """Exact values on the dyadic grid j/2^level, j = 0..2^level
        (level >= n+1 so the grid contains every breakpoint)."""
        if level < self.n + 1:
            raise ValueError("grid must refine the bump's breakpoints")
        vals = np.zeros(2 ** level + 1)
        step = 2 ** (level - self.n - 1)
        peaks = np.arange(1, 2 ** (self.n + 1), 2)
        vals_at = np.asarray(self.alpha, dtype=float) * 2.0 ** (-(self.n + 1))
        vals[peaks * step] = vals_at
        if step > 1:
            # linear fill between consecutive bump breakpoints
            base = vals[::step].copy()
            frac = np.arange(step) / step
            seg = base[:-1, None] * (1 - frac) + base[1:, None] * frac
            vals[:-1] = seg.ravel()
            vals[-1] = base[-1]
        return vals


def bump_eval(b: BumpFunction, t):
    return b(t)


def _l2sq_piecewise_linear(vals: np.ndarray, level: int) -> float:
    # integral of the square of a piecewise-linear function: each segment
    # of width h with endpoint values A, B contributes h (A^2 + AB + B^2)/3
    h = 2.0 ** (-level)
    A, B = vals[:-1], vals[1:]
    return float(np.sum(h * (A * A + A * B + B * B) / 3.0))


def bump_norms(b: BumpFunction) -> tuple[float, float]:
    """Closed-form (sup, L2) norms, cross-checked against Simpson
    integration of the pointwise definition on a dyadic grid (exact for
    the piecewise-quadratic integrand up to rounding)."""
    sup = 2.0 ** (-(b.n + 1))
    l2 = 1.0 / (np.sqrt(3.0) * 2 ** (b.n + 1))
    m = 2 ** (b.n + 4)
    t = np.arange(m + 1) / m
    f2 = b(t) ** 2
    simpson = (f2[0] + f2[-1] + 4 * f2[1:-1:2].sum() + 2 * f2[2:-1:2].sum()) / (3.0 * m)
    l2_num = float(np.sqrt(simpson))
    sup_num = float(np.abs(b(t)).max())
    if abs(l2_num - l2) > 1e-6 or abs(sup_num - sup) > 1e-6:
        raise AssertionError(
            f"bump norm cross-check failed at level {b.n}: "
            f"analytic ({sup!r}, {l2!r}) vs numeric ({sup_num!r}, {l2_num!r})")
    return sup, l2


@dataclass(frozen=True)
class CounterexampleSpace:
    """Grid points, bump functions, and the zero function under the mixed
    metric, with the half-and-half measure. Bookkeeping maps indices to
    point kinds."""
    space: MetricMeasureSpace
    n_max: int
    N_g: int
    M: float
    grid_indices: tuple
    bump_indices: tuple        # aligned with `bumps`
    zero_index: int
    bumps: tuple               # BumpFunction, levels ascending
    grid_t: np.ndarray
    inftwo_ratio_range: tuple  # (min, max) of sup/L2 over distinct pairs


def build_counterexample(n_max: int, N_g: int | None = None, M: float = 2.0) -> CounterexampleSpace:
    """Assemble the truncated model.

    Grid atoms carry mass 1/(2 N_g); the level-n bumps carry 2^-2n / 2; the
    zero function carries the truncation remainder 2^-n_max / 2 (the mass
    of the discarded levels), keeping total mass exactly 1. N_g defaults to
    2^(n_max+1) + 1 so the grid contains every bump peak.
    """
    if n_max < 1:
        raise ValueError("need at least one bump level")
    if M < 2:
        raise ValueError(f"separation constant must satisfy M >= 2, got {M!r}")
    if N_g is None:
        N_g = 2 ** (n_max + 1) + 1
    if N_g < 2:
        raise ValueError("grid needs at least 2 points")

    level = n_max + 1
    bumps = []
    for n in range(1, n_max + 1):
        for row in hadamard_code(n).codewords:
            bumps.append(BumpFunction(n=n, alpha=tuple(int(v) for v in row)))
    vals = [b.breakpoint_values(level) for b in bumps]
    vals.append(np.zeros(2 ** level + 1))          # the zero function
    nb = len(vals)

    t = np.arange(N_g) / (N_g - 1)
    n_pts = N_g + nb
    D = np.zeros((n_pts, n_pts))
    D[:N_g, :N_g] = np.abs(t[:, None] - t[None, :])

    ratios = []
    for i in range(nb):
        for j in range(i + 1, nb):
            diff = vals[i] - vals[j]
            sup = float(np.abs(diff).max())
            l2 = float(np.sqrt(_l2sq_piecewise_linear(diff, level)))
            D[N_g + i, N_g + j] = D[N_g + j, N_g + i] = sup
            ratios.append(sup / l2)
    ratio_range = (min(ratios), max(ratios)) if ratios else (1.0, 1.0)
    bound = 2.0 * np.sqrt(3.0)
    if ratio_range[0] < 1.0 or ratio_range[1] > bound:
        raise AssertionError(
            f"sup/L2 comparability fails: ratios in {ratio_range} not within [1, {bound}]")

    for i, b in enumerate(bumps):
        mixed = 2.0 * M + b(t)
        D[:N_g, N_g + i] = mixed
        D[N_g + i, :N_g] = mixed
    D[:N_g, N_g + nb - 1] = 2.0 * M
    D[N_g + nb - 1, :N_g] = 2.0 * M

    w = np.empty(n_pts)
    w[:N_g] = 1.0 / (2 * N_g)
    k = N_g
    for n in range(1, n_max + 1):
        w[k:k + 2 ** n] = 2.0 ** (-2 * n) / 2.0
        k += 2 ** n
    w[k] = 2.0 ** (-n_max) / 2.0

    labels = [f"t{i}" for i in range(N_g)]
    labels += [f"b{b.n}.{i - sum(2 ** m for m in range(1, b.n))}"
               for i, b in enumerate(bumps)]
    labels.append("zero")

    space = MetricMeasureSpace(tuple(labels), D, w)   # exhaustive validation
    return CounterexampleSpace(
        space=space, n_max=n_max, N_g=N_g, M=float(M),
        grid_indices=tuple(range(N_g)),
        bump_indices=tuple(range(N_g, N_g + len(bumps))),
        zero_index=n_pts - 1,
        bumps=tuple(bumps), grid_t=t,
        inftwo_ratio_range=ratio_range)


def _ball(space: MetricMeasureSpace, x: int, r: float) -> np.ndarray:
    return np.flatnonzero(space.D[x] <= r)


def greedy_cover_count(space: MetricMeasureSpace, x: int, r: float) -> int:
    """Greedy cover of the closed ball B(x, r) by closed r/2-balls with
    centers inside B(x, r); an upper bound on the covering number."""
    ball = _ball(space, x, r)
    sub = space.D[np.ix_(ball, ball)]
    uncovered = np.ones(len(ball), dtype=bool)
    count = 0
    while uncovered.any():
        coverage = (sub[:, uncovered] <= r / 2.0).sum(axis=1)
        center = int(np.argmax(coverage))   # ties: lowest index
        uncovered &= ~(sub[center] <= r / 2.0)
        count += 1
    return count


def packing_lower_count(space: MetricMeasureSpace, x: int, r: float) -> int:
    """Cardinality of a maximal subset of B(x, r) with pairwise distances
    strictly greater than r/2 (greedy in index order; any maximal such set
    certifies the same doubling-style lower bound)."""
    ball = _ball(space, x, r)
    chosen: list[int] = []
    for p in ball:
        if all(space.D[p, q] > r / 2.0 for q in chosen):
            chosen.append(int(p))
    return len(chosen)


@dataclass(frozen=True)
class DoublingRow:
    center: int
    center_label: str
    radius: float
    ball_size: int
    greedy_cover: int
    packing_lower: int


def doubling_profile(space: MetricMeasureSpace, centers, radii) -> tuple:
    rows = []
    for x in centers:
        for r in radii:
            if r <= 0:
                raise ValueError(f"radius must be positive, got {r!r}")
            rows.append(DoublingRow(
                center=int(x), center_label=space.labels[x], radius=float(r),
                ball_size=int(len(_ball(space, x, r))),
                greedy_cover=greedy_cover_count(space, x, r),
                packing_lower=packing_lower_count(space, x, r)))
    return tuple(rows)


def _dyadic_radii(space: MetricMeasureSpace, x: int | None = None):
    diam = space.diameter
    if x is None:
        min_pos = float(space.D[space.D > 0].min())
    else:
        row = space.D[x]
        min_pos = float(row[row > 0].min())
    radii = []
    r = diam
    while r >= min_pos and len(radii) < 60:
        radii.append(r)
        r /= 2.0
    return radii


def kal_doubling_profile(space: MetricMeasureSpace, p: float, radii=None) -> tuple:
    """Table (r, C(r), r^p C(r)) over dyadic radii, where C(r) is the worst
    greedy cover count over all centers. The weighted column supports trend
    inspection only; no limit is asserted at finite scale."""
    if p < 1:
        raise ValueError(f"exponent must satisfy p >= 1, got {p!r}")
    if radii is None:
        radii = _dyadic_radii(space)
    rows = []
    for r in radii:
        C = max(greedy_cover_count(space, x, r) for x in range(space.n))
        rows.append((float(r), int(C), float(r ** p * C)))
    return tuple(rows)


@dataclass(frozen=True)
class MassScalingReport:
    """Log-log regression of ball mass against radius over dyadic scales,
    with min/max consecutive-ratio slopes as finite surrogates for the
    lower/upper scaling dimensions."""
    x: int
    slope: float
    lower_est: float
    upper_est: float
    radii_used: tuple


def mass_scaling_dimension(space: MetricMeasureSpace, x: int) -> MassScalingReport:
    radii = _dyadic_radii(space, x)
    if len(radii) < 4:
        raise DegenerateScaleError(
            f"only {len(radii)} usable dyadic radii at point {x}; need at least 4")
    masses = np.array([float(space.weights[_ball(space, x, r)].sum()) for r in radii])
    logs_r = np.log(radii)
    logs_m = np.log(masses)
    slope = float(np.polyfit(logs_r, logs_m, 1)[0])
    steps = np.diff(logs_m) / np.diff(logs_r)
    return MassScalingReport(x=int(x), slope=slope,
                             lower_est=float(steps.min()),
                             upper_est=float(steps.max()),
                             radii_used=tuple(float(r) for r in radii))


@dataclass(frozen=True)
class SuiteRow:
    n_max: int
    n_points: int
    ell_iota_d: float
    lip_iota_d: float
    packing: tuple            # ((n, packing_lower at radius 2^-n), ...)


@dataclass(frozen=True)
class SuiteReport:
    rows: tuple
    control: tuple            # grid-only packing counts at the same radii
    M: float


def counterexample_suite(n_max_values, M: float = 2.0, N_g_rule=None) -> SuiteReport:
    """Contrast table: for each truncation level the canonical-map constants
    stay bounded away from 0 while the packing count at the zero function
    doubles per level. A grid-only control row shows the packing column
    staying bounded on a doubling space."""
    from .spaces import build_interval_grid
    from .separation import canonical_constants

    if N_g_rule is None:
        N_g_rule = lambda n_max: 2 ** (n_max + 1) + 1
    rows = []
    max_level = max(n_max_values)
    for n_max in n_max_values:
        model = build_counterexample(n_max, N_g_rule(n_max), M)
        cc = canonical_constants(model.space)
        packing = tuple(
            (n, packing_lower_count(model.space, model.zero_index, 2.0 ** (-n)))
            for n in range(2, n_max + 1))
        rows.append(SuiteRow(n_max=n_max, n_points=model.space.n,
                             ell_iota_d=cc.iota_d.lower, lip_iota_d=cc.iota_d.upper,
                             packing=packing))
    grid = build_interval_grid(N_g_rule(max_level))
    control = tuple(
        (n, packing_lower_count(grid, 0, 2.0 ** (-n)))
        for n in range(2, max_level + 1))
    return SuiteReport(rows=tuple(rows), control=control, M=float(M))
