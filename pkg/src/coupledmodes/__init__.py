"""Coherent-state dynamics of linearly coupled bosonic modes."""
from .bath import (
    DecayFit,
    StarBathSpec,
    build_star_bath,
    estimate_recurrence_time,
    fit_decay_rate,
    markov_reference,
    predicted_amplitude_rate,
)
from .core import ModeSystem, coherent_overlap, compose_displacements
from .errors import (
    CoupledModesError,
    DimensionError,
    EmptyGrid,
    InsufficientData,
    NonConvergence,
    TruncationError,
)
from .linalg import EigenDecomposition, SymmetricMatrix, jacobi_eigh, reconstruct
from .modespace import (
    NormalModeDecomposition,
    Trajectory,
    TwoModeCoefficients,
    build_coupling_matrix,
    decompose,
    evolve,
    evolve_two_mode,
    trajectory,
    two_mode_coefficients,
)
from .oracle import (
    FockBasisSpec,
    FockState,
    build_fock_hamiltonian,
    coherence_check,
    evolve_fock,
    fidelity,
    truncated_coherent_vector,
)

__version__ = "0.1.0"
