"""Splitting integrators for spectrally discretized Hamiltonian PDEs.

Highlights: exact-substep Lie/Strang splitting for NLS on the torus and the
wave equation on the circle, small-divisor resonance diagnostics, long-run
action-conservation verification, and a tiny-dimension normalization engine
for the splitting map.
"""
from .errors import (BlowUpError, BudgetExceededError, ResonanceError,
                     SubstepFailureError, UnsupportedSetError)
from .indices import (IndexSet, Mode, MultiIndex, SignedIndex, as_mode,
                      build_index_set, is_action_class, momentum_of, omega_of,
                      sup_norm)
from .spectral import (PhysicalField, State, alias_project, conj_from_physical,
                       conj_to_physical, from_physical, is_real_state,
                       to_physical)
from .models import (FrequencyModel, NonlinearSpec, apply_mollifier,
                     general_nonlinear_substep, nls_model, nls_nonlinear_flow,
                     paper_potential, wave_model, wave_state_to_uv,
                     wave_uv_to_state)
from .integrator import (DiagnosticsRecord, RunResult, SchemeSpec, lie_step,
                         one_step, run, strang_step, symplectic_J,
                         symplecticity_defect)
from .resonance import (DivisorReport, OmegaClassTable, ScanReport,
                        build_omega_classes, certify_hypothesis1,
                        find_resonant_h, iter_multiindices, scan_h,
                        small_divisor)
from .poly import Polynomial, multiply, poisson_bracket
from .normalform import (NormalFormResult, conjugated_map, flow_of, normalize,
                         solve_homological, splitting_map, taylor_P,
                         verify_order)

__version__ = "0.1.0"

__all__ = [
    "BlowUpError", "BudgetExceededError", "ResonanceError",
    "SubstepFailureError", "UnsupportedSetError",
    "IndexSet", "Mode", "MultiIndex", "SignedIndex", "as_mode",
    "build_index_set", "is_action_class", "momentum_of", "omega_of",
    "sup_norm",
    "PhysicalField", "State", "alias_project", "conj_from_physical",
    "conj_to_physical", "from_physical", "is_real_state", "to_physical",
    "FrequencyModel", "NonlinearSpec", "apply_mollifier",
    "general_nonlinear_substep", "nls_model", "nls_nonlinear_flow",
    "paper_potential", "wave_model", "wave_state_to_uv", "wave_uv_to_state",
    "DiagnosticsRecord", "RunResult", "SchemeSpec", "lie_step", "one_step",
    "run", "strang_step", "symplectic_J", "symplecticity_defect",
    "DivisorReport", "OmegaClassTable", "ScanReport", "build_omega_classes",
    "certify_hypothesis1", "find_resonant_h", "iter_multiindices", "scan_h",
    "small_divisor",
    "Polynomial", "multiply", "poisson_bracket",
    "NormalFormResult", "conjugated_map", "flow_of", "normalize",
    "solve_homological", "splitting_map", "taylor_P", "verify_order",
]
