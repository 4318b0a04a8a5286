"""Classical simulation of Fourier-based quantum interpolation and secret sharing."""

from .finite_field import FieldElement, FieldParams, character, field_new, trace
from .polynomial import (MonomialBasis, Polynomial, evaluate, monomial_basis, query_count,
                         random_polynomial, z_map)
from .qudit_sim import (RegisterLayout, StateVector, basis_state, iqft, measure, oracle_phase,
                        oracle_shift, qft)
from .bernstein_vazirani import BvInstance, bv_circuit, bv_run
from .interpolation import (ProtocolParams, TransversalTable, build_image,
                            run_protocol_analytic, run_protocol_circuit, success_probability,
                            trials)
from .secret_sharing import (AdversaryStructure, ambiguity_count, deal_and_reconstruct, dual,
                             is_downward_closed, is_q2, is_q2_star, is_self_dual,
                             threshold_structure)

__version__ = "0.1.0"
