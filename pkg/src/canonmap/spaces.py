"""Finite metric-measure spaces: validation, transforms, and generators.

A space is a finite labelled point set with a symmetric distance matrix and
strictly positive atom weights. Weights are per-atom masses; total mass is
not normalised to 1 (constants that depend on it are reported, not hidden).
"""

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import MetricAxiomError, StructuralError

# Relative slack for the triangle inequality: exact metrics pushed through
# floating-point powers can violate axioms at machine precision.
TRIANGLE_RTOL = 1e-12

DEFAULT_EXHAUSTIVE_CAP = 1500


def exhaustive_cap() -> int:
    """Point-count cap for exhaustive O(n^3) validation (env CEL_MAX_N)."""
    return int(os.environ.get("CEL_MAX_N", DEFAULT_EXHAUSTIVE_CAP))


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple
    magnitude: float


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    violations: tuple
    mode: str
    triples_checked: int

    def __post_init__(self):
        assert self.passed == (len(self.violations) == 0)


def as_distance_matrix(D) -> np.ndarray:
    """Coerce to a float matrix, rejecting structurally impossible input."""
    D = np.asarray(D, dtype=float)
    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise StructuralError(f"distance matrix must be square, got shape {D.shape}")
    if not np.all(np.isfinite(D)):
        raise StructuralError("distance matrix contains non-finite entries")
    if D.size and D.min() < 0:
        i, j = np.unravel_index(int(np.argmin(D)), D.shape)
        raise StructuralError(f"negative distance {D[i, j]!r} at ({i}, {j})")
    return D


def validate_metric(D, mode: str = "exhaustive", samples: int | None = None,
                    seed: int | None = None) -> ValidationReport:
    """Check the metric axioms, reporting each violated axiom with its worst
    witness.

    Exhaustive mode scans all O(n^3) triples. Sampled mode draws `samples`
    triples with a fixed-seed generator (both required); it is meant for
    spaces above the exhaustive cap.
    """
    D = as_distance_matrix(D)
    n = D.shape[0]
    violations = []

    asym = np.abs(D - D.T)
    if asym.size and asym.max() > 0:
        i, j = np.unravel_index(int(np.argmax(asym)), asym.shape)
        violations.append(Violation("symmetry", (int(i), int(j)), float(asym[i, j])))

    diag = np.abs(np.diag(D))
    if diag.size and diag.max() > 0:
        i = int(np.argmax(diag))
        violations.append(Violation("zero_diagonal", (i,), float(diag[i])))

    off = D + np.diag(np.full(n, np.inf))
    if n > 1 and off.min() <= 0:
        i, j = np.unravel_index(int(np.argmin(off)), off.shape)
        violations.append(Violation("positivity", (int(i), int(j)), float(-D[i, j])))

    diam = float(D.max()) if D.size else 0.0
    tol = TRIANGLE_RTOL * diam
    worst_exc = -np.inf
    worst_triple = None
    triples = 0
    if mode == "exhaustive":
        for j in range(n):
            # excess[i, k] = D[i, k] - (D[i, j] + D[j, k])
            excess = D - (D[:, j][:, None] + D[j, :][None, :])
            triples += n * n
            m = float(excess.max())
            if m > worst_exc:
                i, k = np.unravel_index(int(np.argmax(excess)), excess.shape)
                worst_exc, worst_triple = m, (int(i), int(k), int(j))
    elif mode == "sampled":
        if samples is None or seed is None:
            raise ValueError("sampled validation requires a sample count and a seed")
        rng = np.random.default_rng(seed)
        idx = rng.integers(0, n, size=(samples, 3))
        exc = D[idx[:, 0], idx[:, 2]] - (D[idx[:, 0], idx[:, 1]] + D[idx[:, 1], idx[:, 2]])
        triples = samples
        k = int(np.argmax(exc))
        worst_exc, worst_triple = float(exc[k]), tuple(int(v) for v in idx[k][[0, 2, 1]])
    else:
        raise ValueError(f"unknown validation mode {mode!r}")

    if worst_triple is not None and worst_exc > tol:
        violations.append(Violation("triangle", worst_triple, worst_exc))

    return ValidationReport(passed=not violations, violations=tuple(violations),
                            mode=mode, triples_checked=triples)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class MetricMeasureSpace:
    """Labelled points, symmetric distance matrix, strictly positive weights.

    Immutable after construction; the arrays are write-protected so the
    space can be shared freely across concurrent analyses.
    """

    labels: tuple
    D: np.ndarray
    weights: np.ndarray
    validation: ValidationReport = field(repr=False, default=None)

    def __post_init__(self):
        D = as_distance_matrix(self.D)
        weights = np.asarray(self.weights, dtype=float)
        n = D.shape[0]
        labels = tuple(str(l) for l in self.labels)
        if len(labels) != n or weights.shape != (n,):
            raise StructuralError(
                f"inconsistent sizes: {len(labels)} labels, {weights.shape} weights, "
                f"{D.shape} distances")
        if n and (not np.all(np.isfinite(weights)) or weights.min() <= 0):
            i = int(np.argmin(weights))
            raise StructuralError(f"weight {weights[i]!r} at atom {i} is not strictly positive")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "D", _frozen(D))
        object.__setattr__(self, "weights", _frozen(weights))
        if self.validation is None:
            if n <= exhaustive_cap():
                report = validate_metric(D)
            else:
                report = validate_metric(D, mode="sampled", samples=10 * n, seed=0)
            object.__setattr__(self, "validation", report)
        if not self.validation.passed:
            v = self.validation.violations[0]
            raise MetricAxiomError(
                f"metric axiom {v.axiom!r} violated at {v.witness} "
                f"(magnitude {v.magnitude:.3e})", report=self.validation)

    @property
    def n(self) -> int:
        return self.D.shape[0]

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum())

    @property
    def diameter(self) -> float:
        return float(self.D.max()) if self.D.size else 0.0

    def with_distances(self, D, labels=None) -> "MetricMeasureSpace":
        """Same atoms and weights, different (validated) metric."""
        return MetricMeasureSpace(labels or self.labels, D, self.weights)

    def normalized(self) -> "MetricMeasureSpace":
        """Scale weights to total mass 1."""
        return MetricMeasureSpace(self.labels, self.D, self.weights / self.total_mass,
                                  validation=self.validation)


def snowflake(D, s: float, validate: bool = False) -> np.ndarray:
    """Entrywise power D**s for 0 < s <= 1; preserves the metric axioms."""
    if not 0 < s <= 1:
        raise ValueError(f"snowflake exponent must lie in (0, 1], got {s!r}")
    D = as_distance_matrix(D)
    out = D ** s
    np.fill_diagonal(out, 0.0)
    if validate:
        report = validate_metric(out)
        if not report.passed:
            raise MetricAxiomError("snowflake result failed validation", report=report)
    return out


@dataclass(frozen=True)
class GaugeConstants:
    """Extremal ratio constants ell*sigma <= phi <= L*sigma with witnesses."""
    ell: float
    L: float
    ell_witness: tuple
    L_witness: tuple


def gauge_constants(sigma, phi) -> GaugeConstants:
    """Smallest and largest off-diagonal ratio phi/sigma, with witnesses."""
    sigma = as_distance_matrix(sigma)
    phi = as_distance_matrix(phi)
    if sigma.shape != phi.shape:
        raise ValueError(f"metrics live on different point sets: {sigma.shape} vs {phi.shape}")
    n = sigma.shape[0]
    iu = np.triu_indices(n, k=1)
    ratios = phi[iu] / sigma[iu]
    lo, hi = int(np.argmin(ratios)), int(np.argmax(ratios))
    return GaugeConstants(
        ell=float(ratios[lo]), L=float(ratios[hi]),
        ell_witness=(int(iu[0][lo]), int(iu[1][lo])),
        L_witness=(int(iu[0][hi]), int(iu[1][hi])))


def build_interval_grid(n: int) -> MetricMeasureSpace:
    """Uniform n-point grid on [0, 1] with the standard distance and atom
    weight 1/n each (a Lebesgue surrogate of total mass 1)."""
    if n < 2:
        raise ValueError(f"interval grid needs at least 2 points, got {n}")
    t = np.arange(n) / (n - 1)
    D = np.abs(t[:, None] - t[None, :])
    labels = tuple(f"t{i}" for i in range(n))
    return MetricMeasureSpace(labels, D, np.full(n, 1.0 / n))


def _rho_matrix(D: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Pairwise distances of the rows d(x, .) in the weighted L2 norm."""
    W = D * np.sqrt(weights)[None, :]
    n = D.shape[0]
    rho = np.zeros((n, n))
    for i in range(n):
        diff = W[i + 1:] - W[i]
        r = np.sqrt(np.einsum("ij,ij->i", diff, diff))
        rho[i, i + 1:] = r
        rho[i + 1:, i] = r
    return rho


def pushforward_along_canonical(space: MetricMeasureSpace) -> MetricMeasureSpace:
    """The image of the canonical distance map with the pushed-forward
    measure: same labels and weights (the map is injective), distances
    replaced by the induced L2 metric."""
    rho = _rho_matrix(space.D, space.weights)
    return MetricMeasureSpace(space.labels, rho, space.weights)


def shortest_path_closure(M) -> np.ndarray:
    """Floyd-Warshall closure restoring the triangle inequality of a
    symmetric nonnegative zero-diagonal matrix."""
    D = np.array(M, dtype=float)
    n = D.shape[0]
    for k in range(n):
        np.minimum(D, D[:, k][:, None] + D[k, :][None, :], out=D)
    return D


def random_space(n: int, seed: int, total_mass: float | None = 1.0) -> MetricMeasureSpace:
    """Random valid space: i.i.d. uniform symmetric entries pushed through
    shortest-path closure, weights i.i.d. uniform in [0.5, 1.5].

    Weights are rescaled to `total_mass` (pass None to keep the raw draws);
    the default keeps mass 1 so that mass-sensitive bounds such as the
    contraction property of the canonical map apply directly.
    """
    rng = np.random.default_rng(seed)
    M = rng.uniform(0.2, 1.0, size=(n, n))
    M = (M + M.T) / 2.0
    np.fill_diagonal(M, 0.0)
    D = shortest_path_closure(M)
    w = rng.uniform(0.5, 1.5, size=n)
    if total_mass is not None:
        w = w * (total_mass / w.sum())
    return MetricMeasureSpace(tuple(f"p{i}" for i in range(n)), D, w)
