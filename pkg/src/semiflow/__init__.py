"""semiflow: desk-scale numerical checks for strongly-continuous-in-windows
semigroups, their generators, and transport flows on metric graphs.

The package provides uniform-grid function spaces with compact-window
seminorm families, concrete first- and second-order model generators with
exact resolvents, semigroup builders (exact translation flows, Euler powers
of resolvents, Laplace-transform cross-checks), certificate-style generation
checks of Lumer-Phillips type, and weighted directed graph transport flows
with vertex redistribution solved both by characteristics and by an upwind
scheme.

Hot kernels are JIT-compiled with numba when available; set the environment
variable ``SEMIFLOW_NO_NUMBA=1`` to force the pure numpy/scipy fallbacks.
"""

from ._kernels import NUMBA_ENABLED, damped_cumulative_integral, warmup
from .grid import (Grid, GridFunction, differentiate, integrate, read_csv,
                   supnorm, window_sup, write_csv)
from .seminorms import (CompactSeminormFamily, MixedSeminorm,
                        WindowOrientation, eval_mixed, eval_pn,
                        norming_residual)
from .operators import (Generator, ResolventUnavailableError, UpwindMatrix,
                        laplacian_generator, left_shift_generator,
                        resolvent_shift, right_translation_generator,
                        right_translation_resolvent, upwind_discretize,
                        zero_generator)
from .samples import (plateau_ramp, probe_functions, sample_functions,
                      smooth_bump)
from .semigroups import (LaplaceResult, Semigroup, euler_apply,
                         laplace_resolvent, orbit_integral_residual,
                         right_translation_semigroup, shift_semigroup)
from .generation import (CheckReport, PointFunctional, Witness,
                         check_bi_dissipative, check_dissipative,
                         check_hy_powers, check_resolvent_contraction,
                         lumer_phillips_verdict, resolvent_defect,
                         subdifferential_test)
from .network import (Edge, EdgeState, Network, ValidationError,
                      build_adjacency, defect_budget, initial_state,
                      load_network,
                      make_network, network_generation_verdict,
                      network_resolvent, network_semigroup,
                      random_flow_network, resolvent_defect_norm,
                      sample_states, simulate_flow, step_characteristics,
                      step_upwind, supnorm_l1, supnorm_l1_weighted,
                      total_mass, velocity_fixed_vector_residual, weighted_bc)

__version__ = "0.1.0"

__all__ = [
    "NUMBA_ENABLED", "damped_cumulative_integral", "warmup",
    "Grid", "GridFunction", "differentiate", "integrate", "read_csv",
    "supnorm", "window_sup", "write_csv",
    "CompactSeminormFamily", "MixedSeminorm", "WindowOrientation",
    "eval_mixed", "eval_pn", "norming_residual",
    "Generator", "ResolventUnavailableError", "UpwindMatrix",
    "laplacian_generator", "left_shift_generator", "resolvent_shift",
    "right_translation_generator", "right_translation_resolvent",
    "upwind_discretize", "zero_generator",
    "plateau_ramp", "probe_functions", "sample_functions", "smooth_bump",
    "LaplaceResult", "Semigroup", "euler_apply", "laplace_resolvent",
    "orbit_integral_residual", "right_translation_semigroup",
    "shift_semigroup",
    "CheckReport", "PointFunctional", "Witness", "check_bi_dissipative",
    "check_dissipative", "check_hy_powers", "check_resolvent_contraction",
    "lumer_phillips_verdict", "resolvent_defect", "subdifferential_test",
    "Edge", "EdgeState", "Network", "ValidationError", "build_adjacency",
    "defect_budget", "initial_state", "load_network", "make_network",
    "network_generation_verdict", "network_resolvent", "network_semigroup",
    "random_flow_network", "resolvent_defect_norm", "sample_states",
    "simulate_flow", "step_characteristics", "step_upwind", "supnorm_l1",
    "supnorm_l1_weighted", "total_mass", "velocity_fixed_vector_residual",
    "weighted_bc",
    "__version__",
]
