"""Dry-friction damping of a vibrating string: exact flows, reachable sets and spectra."""

from .duals import DualProfile, DualVector, TrigLine, boundary_trace, random_dual, zeta_profile
from .energy import (EnergyReport, contraction_series, energy_first_order,
                     energy_second_order, laplacian_pairings)
from .friction import (DecayReport, PhiTrack, apply_control, control_of, decay_report,
                       field_at, flow_map, flow_trace, pw_resolvent, random_control,
                       random_field, reconstruct, scalar_resolvent, solve_track)
from .pwlin import TWO_PI, PiecewiseLinear, integrate, sup_norm
from .reach import (PROBLEMS, ReachQuery, StringState, extremal_state, field_rho,
                    l1_parts_symmetric, limit_support_full, limit_support_reduced,
                    membership_margin, pairing, rho_norm, support_full,
                    support_normalized, support_reduced)
from .spectral import (SpectralSet, admissibility, eisenstein_kernel, limit_roots,
                       modes_from_spectral, secular_roots, singular_field_check)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
