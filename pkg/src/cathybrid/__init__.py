"""Even/odd displaced-number-state superpositions and heralded hybrid entanglement."""
from .closed_form import (closed_form, closed_form_amplitudes, closed_form_B, closed_form_probability,
                          superposition_closed_form)
from .displacement import build_table, coeff, displaced_number_state
from .entangler import (BeamSplitterParams, ConditionalResult, DelocalizedPhoton,
                        beam_splitter_unitary, evolve_and_condition)
from .errors import (CatHybridError, ConditioningError, ConfigError, DegenerateStateError,
                     DimensionError, NormalizationError, OutcomeError, RangeError, TruncationError,
                     UndefinedMomentError)
from .fock import FockVector, TwoModeState, inner_product, parity_masses, project_mode2
from .negativity import BipartiteState, max_negativity_condition, negativity_closed, negativity_ppt
from .nonclassicality import fano, quadrature_distribution, quadrature_sigma, wigner
from .states import NormalizedState, StateSpec, build, overlap_closed_form, sdlps_norm_factor
from .sweep import RunConfig, SweepGrid, search_max, sweep

__version__ = "0.1.0"
