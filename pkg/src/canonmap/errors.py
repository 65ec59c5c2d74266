"""Exception types shared across the toolkit."""


class StructuralError(ValueError):
    """Input is not even a candidate distance matrix (non-square, negative,
    or non-finite entries). Distinct from a metric-axiom violation."""


class MetricAxiomError(ValueError):
    """A candidate matrix failed metric validation. Carries the report."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class SpaceFileError(ValueError):
    """A space file could not be parsed; message is position-annotated."""


class DegenerateScaleError(ValueError):
    """Too few usable radii between the smallest positive distance and the
    diameter for a scaling estimate."""


class GaugeRadiusError(ValueError):
    """Perturbed metric lies outside the certificate-transfer radius.
    Carries the measured distance and the required radius."""

    def __init__(self, message, measured, radius):
        super().__init__(message)
        self.measured = measured
        self.radius = radius


class ContainmentError(RuntimeError):
    """An exhaustively checked set containment failed after its
    preconditions passed; this signals a numerical falsification or an
    implementation bug, never bad user input."""
