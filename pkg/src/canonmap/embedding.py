"""Euclidean-side machinery: exact isometric-embeddability testing,
distortion-minimising finite-dimensional projections, the full
space -> L2 -> R^N pipeline, and the quadruple inequalities.

`CanonicalEmbedding` wraps the pipeline in a scikit-learn compatible
transformer so the embedding composes with the wider ecosystem.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .errors import StructuralError
from .spaces import MetricMeasureSpace, as_distance_matrix
from .canonical import canonical_image, gram_delta
from .separation import lipschitz_constants

_TOL = 1e-12


@dataclass(frozen=True)
class PointConfiguration:
    """Points in Euclidean space, one per row, tagged with where they came
    from (raw | canonical-image | projected)."""
    coords: np.ndarray
    provenance: str = "raw"

    def distances(self) -> np.ndarray:
        X = self.coords
        sq = np.sum(X * X, axis=1)
        D2 = np.maximum(sq[:, None] + sq[None, :] - 2.0 * (X @ X.T), 0.0)
        D = np.sqrt(D2)
        np.fill_diagonal(D, 0.0)
        return D


@dataclass(frozen=True)
class GramSpectrum:
    """Eigenvalues of the double-centered squared-distance matrix; the
    space embeds isometrically in Euclidean space iff they are all
    nonnegative (up to a spread-scaled tolerance)."""
    eigenvalues: np.ndarray   # ascending
    embeddable: bool
    min_dimension: int
    tol: float


def schoenberg_test(D) -> GramSpectrum:
    D = as_distance_matrix(D)
    n = D.shape[0]
    J = np.eye(n) - np.full((n, n), 1.0 / n)
    B = -0.5 * J @ (D * D) @ J
    evals = np.linalg.eigvalsh(B)
    spread = float(evals[-1] - evals[0]) if n else 0.0
    tol = 1e-9 * max(1.0, spread)
    return GramSpectrum(eigenvalues=evals,
                        embeddable=bool(evals[0] >= -tol),
                        min_dimension=int((evals > tol).sum()),
                        tol=tol)


def centered_gram(D) -> np.ndarray:
    """The double-centered matrix itself, for entry-level inspection."""
    D = as_distance_matrix(D)
    n = D.shape[0]
    J = np.eye(n) - np.full((n, n), 1.0 / n)
    return -0.5 * J @ (D * D) @ J


@dataclass(frozen=True)
class EmbeddingReport:
    N: int
    method: str
    trials: int
    seed: int | None
    lower: float
    upper: float
    distortion: float
    lower_witness: tuple
    upper_witness: tuple
    # retained so the winning map can be reapplied (transform, audits)
    projection: np.ndarray = field(repr=False, default=None)
    offset: np.ndarray = field(repr=False, default=None)
    coords: np.ndarray = field(repr=False, default=None)


def _trial_seeds(seed: int, trials: int):
    """Independent per-trial streams derived from one master seed."""
    return np.random.SeedSequence(seed).spawn(trials)


def project_search(points: PointConfiguration, N: int, trials: int = 1,
                   seed: int = 0, method: str = "gaussian",
                   weights=None, reference_D=None) -> EmbeddingReport:
    """Search for a low-distortion linear map of the configuration into R^N.

    gaussian: i.i.d. standard normal maps scaled by 1/sqrt(N); the best
    distortion over `trials` seeded draws is kept (first best wins ties,
    so fixed seeds are bit-reproducible). pca: deterministic projection
    onto the top-N principal directions about the weighted mean.

    Extremal constants are measured against `reference_D` when given,
    otherwise against the configuration's own distances.
    """
    X = np.asarray(points.coords, dtype=float)
    n, dim = X.shape
    if N < 1:
        raise ValueError(f"target dimension must be >= 1, got {N}")
    ref = as_distance_matrix(reference_D) if reference_D is not None else points.distances()

    def evaluate(Y):
        proj = PointConfiguration(Y, provenance="projected")
        return lipschitz_constants(ref, proj.distances())

    if method == "pca":
        w = np.full(n, 1.0 / n) if weights is None else np.asarray(weights, dtype=float) / np.sum(weights)
        mean = w @ X
        Xc = X - mean
        cov = (Xc * w[:, None]).T @ Xc
        evals, evecs = np.linalg.eigh(cov)
        k = min(N, dim)
        if k < N:
            warnings.warn(f"pca target dimension {N} clamped to ambient {dim}")
        P = evecs[:, ::-1][:, :k]
        Y = Xc @ P
        rep = evaluate(Y)
        return EmbeddingReport(N=k, method="pca", trials=1, seed=None,
                               lower=rep.lower, upper=rep.upper,
                               distortion=rep.distortion,
                               lower_witness=rep.lower_witness,
                               upper_witness=rep.upper_witness,
                               projection=P, offset=mean, coords=Y)
    if method != "gaussian":
        raise ValueError(f"unknown projection method {method!r}")
    if trials < 1:
        raise ValueError("gaussian search needs at least one trial")

    best = None
    for ss in _trial_seeds(seed, trials):
        rng = np.random.default_rng(ss)
        P = rng.standard_normal((dim, N)) / np.sqrt(N)
        Y = X @ P
        rep = evaluate(Y)
        if best is None or rep.distortion < best[0].distortion:
            best = (rep, P, Y)
    rep, P, Y = best
    return EmbeddingReport(N=N, method="gaussian", trials=trials, seed=seed,
                           lower=rep.lower, upper=rep.upper,
                           distortion=rep.distortion,
                           lower_witness=rep.lower_witness,
                           upper_witness=rep.upper_witness,
                           projection=P, offset=None, coords=Y)


def embed_pipeline(space: MetricMeasureSpace, N: int, method: str = "gaussian",
                   trials: int = 20, seed: int = 0,
                   via_kernel: bool = False) -> EmbeddingReport:
    """Canonical image -> (optional kernel-row step) -> projection search.

    Extremal constants in the report are measured against the ORIGINAL
    metric of the space, so lower/upper are the bi-Lipschitz constants of
    the whole composite x -> R^N.
    """
    if via_kernel:
        rows = gram_delta(space).G
        coords = rows * np.sqrt(space.weights)[None, :]
    else:
        coords = canonical_image(space).W
    points = PointConfiguration(coords, provenance="canonical-image")
    return project_search(points, N, trials=trials, seed=seed, method=method,
                          weights=space.weights, reference_D=space.D)


@dataclass(frozen=True)
class DirectionSetReport:
    """Size of the normalized-difference direction set plus an exploratory
    proxy for the weak-closure question (finite sets always pass; the gap
    value is diagnostic only)."""
    count: int
    n_clusters: int
    min_norm_of_mean_gap: float


def direction_set(points: PointConfiguration, angle_tol: float = 1e-9) -> DirectionSetReport:
    X = np.asarray(points.coords, dtype=float)
    n = X.shape[0]
    if n < 2:
        raise ValueError("need at least 2 points")
    dirs = []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            diff = X[i] - X[j]
            nrm = np.linalg.norm(diff)
            if nrm == 0:
                raise ValueError(f"duplicate points at indices ({i}, {j})")
            dirs.append(diff / nrm)
    dirs = np.array(dirs)

    # canonicalise sign (directions matter only up to antipody here), then
    # cluster near-identical directions and look at each cluster's mean
    canon = []
    for u in dirs:
        k = np.flatnonzero(np.abs(u) > 0)[0]
        canon.append(u if u[k] > 0 else -u)
    clusters: list[list[np.ndarray]] = []
    reps: list[np.ndarray] = []
    cos_tol = np.cos(angle_tol)
    for u in canon:
        for rep, members in zip(reps, clusters):
            if float(np.dot(u, rep)) >= cos_tol:
                members.append(u)
                break
        else:
            reps.append(u)
            clusters.append([u])
    gap = min(float(np.linalg.norm(np.mean(members, axis=0))) for members in clusters)
    return DirectionSetReport(count=len(dirs), n_clusters=len(clusters),
                              min_norm_of_mean_gap=gap)


@dataclass(frozen=True)
class QuadrupleReport:
    p: float
    q: float
    sob2_max_violation: float
    sob1_best_L: float | None
    mode: str
    quadruples_checked: int


def quadruple_inequalities(space: MetricMeasureSpace | None = None,
                           points: PointConfiguration | None = None,
                           p: float = 2.0, seed: int = 0,
                           exhaustive_cap: int = 60,
                           samples: int = 1_000_000) -> QuadrupleReport:
    """Scan quadruples (x, y, u, v) for the two difference inequalities.

    The metric branch checks the Hoelder-split bound
    |d(x,u)-d(y,u)-d(x,v)+d(y,v)| <= 2 d(x,y)^(1/p) d(u,v)^(1/q), which
    holds for every metric (the left side is at most 2 min of the two
    distances); the worst violation is asserted nonpositive up to 1e-12.
    The configuration branch reports the smallest empirical L fitting
    |..| <= L |x-y| |u-v| with no assertion. Beyond `exhaustive_cap`
    points the scan switches to seeded sampling.
    """
    if p <= 1:
        raise ValueError(f"exponent must satisfy p > 1, got {p!r}")
    if (space is None) == (points is None):
        raise ValueError("pass exactly one of a space or a point configuration")
    q = p / (p - 1.0)
    D = space.D if space is not None else points.distances()
    n = D.shape[0]
    want_l = points is not None

    viol = -np.inf
    best_l = 0.0 if want_l else None
    if n <= exhaustive_cap:
        # per pair (x, y) the scan over (u, v) is a dense matrix op,
        # keeping memory at O(n^2) instead of materialising all n^4 tuples
        Dq = D ** (1.0 / q)
        off = D > 0
        for x in range(n):
            for y in range(n):
                g = D[x] - D[y]
                lhs = np.abs(g[:, None] - g[None, :])
                viol = max(viol, float((lhs - 2.0 * D[x, y] ** (1.0 / p) * Dq).max()))
                if want_l and D[x, y] > 0:
                    best_l = max(best_l, float((lhs[off] / D[off]).max()) / D[x, y])
        mode, count = "exhaustive", n ** 4
    else:
        rng = np.random.default_rng(seed)
        ix, iy, iu, iv = rng.integers(0, n, size=(4, samples))
        lhs = np.abs(D[ix, iu] - D[iy, iu] - D[ix, iv] + D[iy, iv])
        rhs = 2.0 * D[ix, iy] ** (1.0 / p) * D[iu, iv] ** (1.0 / q)
        viol = float((lhs - rhs).max())
        if want_l:
            den = D[ix, iy] * D[iu, iv]
            ok = den > 0
            best_l = float((lhs[ok] / den[ok]).max()) if ok.any() else 0.0
        mode, count = "sampled", samples
    if viol > _TOL:
        raise AssertionError(f"quadruple inequality violated by {viol!r}")
    return QuadrupleReport(p=p, q=q, sob2_max_violation=viol, sob1_best_L=best_l,
                           mode=mode, quadruples_checked=count)


class CanonicalEmbedding(BaseEstimator, TransformerMixin):
    """Embed a finite metric space into R^N through its distance-function
    image, scikit-learn style.

    fit() takes a square distance matrix (atom weights optional) and runs
    the full pipeline; the fitted linear map extends to new points given
    their distances to the training points.

    Parameters
    ----------
    n_components : target dimension N.
    method : "gaussian" (randomized search) or "pca" (deterministic).
    trials : number of seeded gaussian draws to search over.
    via_kernel : route through the kernel rows instead of raw distances.
    random_state : master seed for the gaussian search.
    """

    def __init__(self, n_components=2, method="pca", trials=20,
                 via_kernel=False, random_state=0):
        self.n_components = n_components
        self.method = method
        self.trials = trials
        self.via_kernel = via_kernel
        self.random_state = random_state

    def fit(self, X, y=None, weights=None):
        X = as_distance_matrix(X)
        n = X.shape[0]
        w = np.full(n, 1.0 / n) if weights is None else np.asarray(weights, dtype=float)
        space = MetricMeasureSpace(tuple(str(i) for i in range(n)), X, w)
        self.space_ = space
        self.report_ = embed_pipeline(space, self.n_components,
                                      method=self.method, trials=self.trials,
                                      seed=self.random_state,
                                      via_kernel=self.via_kernel)
        self.embedding_ = self.report_.coords
        return self

    def transform(self, X):
        """Map rows of distances-to-training-points through the fitted
        linear map. Passing the training matrix reproduces the fitted
        embedding."""
        check_is_fitted(self, "report_")
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.space_.n:
            raise StructuralError(
                f"expected rows of length {self.space_.n}, got {X.shape}")
        if self.via_kernel:
            rows = np.stack([self.space_.D @ (self.space_.weights * row) for row in X])
        else:
            rows = X
        coords = rows * np.sqrt(self.space_.weights)[None, :]
        if self.report_.offset is not None:
            coords = coords - self.report_.offset
        return coords @ self.report_.projection

    def fit_transform(self, X, y=None, **fit_params):
        return self.fit(X, y, **fit_params).embedding_
