"""Dunkl transform toolchain and Riesz transforms on (R^N, m_k)."""

from ._backend import BACKEND_NAME
from .config import LoadedSetup, load_setup, parse_setup_text
from .grids import Grid, GridFunction, GridSpec
from .kernel import (DunklKernelEvaluator, IntertwiningMeasure, dunkl_kernel,
                     intertwining_measure)
from .rootsys import (DerivedConstants, ReflectionSetup, compute_constants,
                      orbit_distance, weight_density)
from .transform import (dunkl_transform, grid_dunkl_op,
                        inverse_dunkl_transform, inversion_defect,
                        multiplier_identity_defect, plancherel_defect)
from .translate import (RadialProfile, check_duality, check_op_commutation,
                        check_symmetry, contraction_ratio, translate_radial,
                        translate_spectral)
from .riesz import (HormanderEstimate, KernelField, SeparationGeometry,
                    TruncatedRiesz, hormander_estimate, kernel_full,
                    kernel_K1, kernel_Kalpha, metric_A, riesz_kernel_route,
                    riesz_multiplier, riesz_potential, riesz_truncated)
from .czd import (CZDecomposition, ball_mass, box_mass, cz_decompose,
                  doubling_ratio, weak11_probe)
from .harness import (LpScanReport, deterministic_corpus, lp_ratio_scan,
                      potential_identity_defect, radial_corpus, random_corpus,
                      riesz_inequality_check, sobolev_inequality_check)

__version__ = "0.1.0"
