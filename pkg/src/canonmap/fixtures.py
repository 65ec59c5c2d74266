"""Named analytic fixtures used across the test suite and the docs.

All closed-form example values in the tests refer to these spaces.
"""

import numpy as np

from .spaces import MetricMeasureSpace, build_interval_grid
from .counterexample import CounterexampleSpace, build_counterexample


def p2() -> MetricMeasureSpace:
    """Two points at distance 1, weights 1/2."""
    return MetricMeasureSpace(("a", "b"), np.array([[0.0, 1.0], [1.0, 0.0]]),
                              np.full(2, 0.5))


def p3() -> MetricMeasureSpace:
    """Equilateral triple at distance 1, weights 1/3."""
    D = np.ones((3, 3)) - np.eye(3)
    return MetricMeasureSpace(("a", "b", "c"), D, np.full(3, 1.0 / 3.0))


def t4() -> MetricMeasureSpace:
    """Hub-and-spokes four-point space: center at distance 1 from three
    points that are pairwise at distance 2. Admits no isometric Euclidean
    embedding. Uniform weights (the construction itself needs no measure).
    """
    D = np.full((4, 4), 2.0)
    D[0, :] = D[:, 0] = 1.0
    np.fill_diagonal(D, 0.0)
    return MetricMeasureSpace(("z", "x1", "x2", "x3"), D, np.full(4, 0.25))


def interval(n: int) -> MetricMeasureSpace:
    """Alias for the uniform grid on [0, 1]."""
    return build_interval_grid(n)


def a2(n_max: int, N_g: int | None = None, M: float = 2.0) -> CounterexampleSpace:
    """The truncated counterexample model (grid + bumps + zero)."""
    return build_counterexample(n_max, N_g, M)
