"""cjkit: Choi-Jamiolkowski states relative to a faithful reference state.

Channels are stored in the Heisenberg picture through Kraus operators.  The
package converts between Kraus and Choi form, builds transposed channels,
and decides and enforces group covariance.
"""
from .channel import (
    Channel,
    amplitude_damping,
    apply_heisenberg,
    apply_schrodinger,
    completely_depolarizing,
    compose,
    dephasing,
    depolarizing,
    identity_channel,
    is_minimal_kraus,
    is_unital,
    kraus_gram,
    unitary_channel,
)
from .choi import ChoiState, channel_from_choi, choi_from_channel, recover_heisenberg, validate_choi
from .errors import CJKitError
from .phase_covariant import TauFamily, build_channel, extract_tau, sector_decompose
from .rotation import OrbitalSpace, check_rotation_covariance, rotation_invariant_state, spin_rep
from .states import ReferenceState, make_reference, maximally_mixed
from .symmetry import (
    Representation,
    check_covariance,
    check_modular_covariance,
    conjugate_rep,
    finite_representation,
    invariantize_state,
    phase_representation,
    spin_representation,
    twirl,
)
from .transpose import commutant_dual, transpose_channel

__all__ = [
    "CJKitError",
    "Channel",
    "ChoiState",
    "OrbitalSpace",
    "ReferenceState",
    "Representation",
    "TauFamily",
    "amplitude_damping",
    "apply_heisenberg",
    "apply_schrodinger",
    "build_channel",
    "channel_from_choi",
    "check_covariance",
    "check_modular_covariance",
    "check_rotation_covariance",
    "choi_from_channel",
    "commutant_dual",
    "completely_depolarizing",
    "compose",
    "conjugate_rep",
    "dephasing",
    "depolarizing",
    "extract_tau",
    "finite_representation",
    "identity_channel",
    "invariantize_state",
    "is_minimal_kraus",
    "is_unital",
    "kraus_gram",
    "make_reference",
    "maximally_mixed",
    "phase_representation",
    "recover_heisenberg",
    "rotation_invariant_state",
    "sector_decompose",
    "spin_rep",
    "spin_representation",
    "transpose_channel",
    "twirl",
    "unitary_channel",
    "validate_choi",
]

__version__ = "0.1.0"
