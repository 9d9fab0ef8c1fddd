"""Brute-force check of coherent-state preservation in a truncated Fock basis.

Basis states are indexed by mixed-radix digits ``(n_1, ..., n_k)`` with the
last mode running fastest.  The Hamiltonian is real symmetric in this basis,
so the propagator comes from the same Jacobi solver as the closed form.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .core import ModeSystem, as_amplitudes
from .errors import DimensionError, TruncationError
from .linalg import EigenDecomposition, SymmetricMatrix, jacobi_eigh
from .modespace import decompose, evolve

MAX_MODES = 3
MAX_DIMENSION = 4096
# Poisson weight a single mode may lose above n_max
MAX_TRUNCATION_LOSS = 1e-7


@dataclass(frozen=True)
class FockBasisSpec:
    n_modes: int
    n_max: int

    def __post_init__(self):
        if not 1 <= self.n_modes <= MAX_MODES:
            raise ValueError(f"n_modes must be in 1..{MAX_MODES}, got {self.n_modes}")
        if self.n_max < 0:
            raise ValueError("n_max must be non-negative")
        if self.dimension > MAX_DIMENSION:
            raise ValueError(f"basis dimension {self.dimension} exceeds {MAX_DIMENSION}")

    @property
    def dimension(self) -> int:
        return (self.n_max + 1) ** self.n_modes

    def occupations(self) -> np.ndarray:
        """Occupation numbers of every basis state, shape ``(dimension, n_modes)``."""
        levels = range(self.n_max + 1)
        return np.array(list(itertools.product(levels, repeat=self.n_modes)), dtype=int)

    def index(self, occupation) -> int:
        idx = 0
        for n_j in occupation:
            idx = idx * (self.n_max + 1) + int(n_j)
        return idx


@dataclass(frozen=True, eq=False)
class FockState:
    spec: FockBasisSpec
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.complex128).reshape(-1)
        if c.shape[0] != self.spec.dimension:
            raise DimensionError(f"expected {self.spec.dimension} coefficients, got {c.shape[0]}")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def mean_photon_numbers(self) -> np.ndarray:
        """``<n_j>`` for every mode, normalized by the state norm."""
        p = np.abs(self.coeffs) ** 2
        return p @ self.spec.occupations() / p.sum()


def poisson_weight(alpha: complex, n_max: int) -> float:
    """Probability that a coherent state of amplitude ``alpha`` has at most ``n_max`` photons."""
    x = abs(alpha) ** 2
    term = math.exp(-x)
    total = term
    for n in range(1, n_max + 1):
        term *= x / n
        total += term
    return total


def single_mode_coefficients(alpha: complex, n_max: int) -> np.ndarray:
    """Unnormalized ``exp(-|alpha|^2/2) alpha^n / sqrt(n!)`` for ``n = 0..n_max``."""
    c = np.empty(n_max + 1, dtype=complex)
    c[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, n_max + 1):
        c[n] = c[n - 1] * alpha / math.sqrt(n)
    return c


def truncated_coherent_vector(alpha_vec, spec: FockBasisSpec) -> FockState:
    """Product coherent state expanded on the truncated basis and renormalized.

    Raises:
        TruncationError: some mode loses more than ``1e-7`` of its photon-number
            distribution above ``n_max``.
    """
    alpha_vec = as_amplitudes(alpha_vec, spec.n_modes)
    psi = np.ones(1, dtype=complex)
    for j, alpha in enumerate(alpha_vec):
        kept = poisson_weight(alpha, spec.n_max)
        if 1.0 - kept > MAX_TRUNCATION_LOSS:
            raise TruncationError(
                f"mode {j}: |alpha|={abs(alpha):.4g} is too large for n_max={spec.n_max} "
                f"(kept weight {kept:.12f})"
            )
        psi = np.kron(psi, single_mode_coefficients(alpha, spec.n_max))
    return FockState(spec, psi / np.linalg.norm(psi))


def build_fock_hamiltonian(sys: ModeSystem, spec: FockBasisSpec) -> SymmetricMatrix:
    """Matrix of ``sum omega_j n_j + sum_{i != j} lambda_ij a_i^dag a_j`` on the truncated basis."""
    if sys.n != spec.n_modes:
        raise DimensionError(f"system has {sys.n} modes but the basis has {spec.n_modes}")
    occ = spec.occupations()
    h = np.diag(occ @ sys.omega).astype(float)
    for i in range(sys.n):
        for j in range(sys.n):
            lam = sys.coupling[i, j]
            if i == j or lam == 0.0:
                continue
            # a_i^dag a_j moves one quantum from mode j to mode i
            for src, n in enumerate(occ):
                if n[j] == 0 or n[i] == spec.n_max:
                    continue
                dst = n.copy()
                dst[i] += 1
                dst[j] -= 1
                h[spec.index(dst), src] += lam * math.sqrt((n[i] + 1) * n[j])
    return SymmetricMatrix.symmetrized(h)


def evolve_fock(h, psi0: FockState, t: float, eig: EigenDecomposition | None = None) -> FockState:
    """Apply ``exp(-i H t)`` through the eigendecomposition of ``H``.

    Pass a precomputed ``eig`` to reuse one diagonalization across times.
    """
    if eig is None:
        eig = jacobi_eigh(h)
    if eig.r.shape[0] != psi0.spec.dimension:
        raise DimensionError(f"Hamiltonian dimension {eig.r.shape[0]} != state dimension {psi0.spec.dimension}")
    # rows of eig.r are eigenvectors: psi(t) = R^T exp(-i E t) R psi0
    coeffs = eig.r.T @ (np.exp(-1j * eig.mu * t) * (eig.r @ psi0.coeffs))
    return FockState(psi0.spec, coeffs)


def fidelity(a: FockState, b: FockState) -> float:
    if a.spec != b.spec:
        raise DimensionError(f"basis mismatch: {a.spec} vs {b.spec}")
    return float(abs(np.vdot(a.coeffs, b.coeffs)) ** 2)


def coherence_check(sys: ModeSystem, a0, t: float, spec: FockBasisSpec) -> float:
    """Fidelity between the exactly evolved Fock state and the predicted coherent product."""
    return coherence_scan(sys, a0, [t], spec)[0]


def coherence_scan(sys: ModeSystem, a0, times, spec: FockBasisSpec) -> list[float]:
    """``coherence_check`` at several times sharing one diagonalization."""
    eig = jacobi_eigh(build_fock_hamiltonian(sys, spec))
    d = decompose(sys)
    psi0 = truncated_coherent_vector(a0, spec)
    out = []
    for t in times:
        exact = evolve_fock(None, psi0, t, eig=eig)
        predicted = truncated_coherent_vector(evolve(d, a0, t), spec)
        out.append(fidelity(exact, predicted))
    return out
