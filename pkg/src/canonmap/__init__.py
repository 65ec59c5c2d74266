"""canonmap: analyses of finite metric-measure spaces through the map
sending each point to its distance function.

A space is a finite labelled point set with a symmetric distance matrix
and positive atom weights. The library computes the distance-function
image in a discrete weighted L2, the metrics and kernels it induces,
uniform point-separation certificates, a pseudometric on the gauge of
equivalent metrics, Euclidean embedding pipelines, and the non-doubling
counterexample model built from Hadamard codes and hat-function bumps.
"""

from .spaces import (MetricMeasureSpace, ValidationReport, Violation,
                     GaugeConstants, build_interval_grid, gauge_constants,
                     pushforward_along_canonical, random_space,
                     shortest_path_closure, snowflake, validate_metric)
from .canonical import (CanonicalImage, KernelMatrix, SphereMetrics,
                        apply_Jd, apply_Td, canonical_image, delta_lip_bound,
                        gram_delta, interval_delta_closed_form,
                        kappa_gram_comparison, l2_inner, l2_norm,
                        lambda_lip_distance, lip_norm, radial_derivative,
                        radial_projection, snowflake_lift_lip, sphere_metrics)
from .separation import (CanonicalConstants, ConjectureHypotheses,
                         LipschitzReport, SeparationCertificate,
                         SeparationProfile, canonical_constants,
                         conjecture_hypotheses, e_set_mass,
                         lipschitz_constants, separation_profile,
                         snowflake_canonical_trend, transfer_separation)
from .gauge import (NearIsometryReport, WdReport, near_isometry_report,
                    openness_transfer, perturb_metric_to_wd, wd_distance)
from .embedding import (CanonicalEmbedding, EmbeddingReport, GramSpectrum,
                        PointConfiguration, QuadrupleReport, centered_gram,
                        direction_set, embed_pipeline, project_search,
                        quadruple_inequalities, schoenberg_test)
from .counterexample import (BumpFunction, CounterexampleSpace, HadamardCode,
                             build_counterexample, bump_eval, bump_norms,
                             counterexample_suite, doubling_profile,
                             greedy_cover_count, hadamard_code, hat,
                             kal_doubling_profile, mass_scaling_dimension,
                             packing_lower_count)
from .spacefile import parse_space, write_space
from .reports import derive_seed
from .errors import (ContainmentError, DegenerateScaleError, GaugeRadiusError,
                     MetricAxiomError, SpaceFileError, StructuralError)
from . import fixtures

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
