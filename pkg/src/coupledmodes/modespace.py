"""Normal-mode decomposition and exact coherent-amplitude evolution.

A product of coherent states stays a product of coherent states under any
number-conserving quadratic Hamiltonian, so evolving the state reduces to
evolving the amplitude vector: ``alpha(t) = R^T exp(-i D t) R alpha(0)``
with ``R D R^T`` the eigendecomposition of the coupling matrix.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .core import ModeSystem, as_amplitude, as_amplitudes
from .errors import EmptyGrid
from .linalg import EigenDecomposition, SymmetricMatrix, jacobi_eigh, reconstruct


@dataclass(frozen=True)
class TwoModeCoefficients:
    """Beam-splitter coefficients of the pair ``A1 = delta a + gamma_c b``, ``A2 = gamma_c a - delta b``."""

    delta: float
    gamma_c: float
    Omega: float
    mu1: float
    mu2: float


@dataclass(frozen=True, eq=False)
class NormalModeDecomposition:
    system: ModeSystem
    eig: EigenDecomposition

    @property
    def mu(self) -> np.ndarray:
        return self.eig.mu

    @property
    def r(self) -> np.ndarray:
        return self.eig.r

    def normal_amplitudes(self, a0) -> np.ndarray:
        """Project bare amplitudes onto the normal modes, ``r_m . alpha``."""
        return self.eig.r @ as_amplitudes(a0, self.system.n)

    def energy(self, a) -> float:
        """Mean energy ``sum_m mu_m |r_m . alpha|^2`` of a coherent product state."""
        return float(np.dot(self.eig.mu, np.abs(self.normal_amplitudes(a)) ** 2))


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Amplitudes sampled on a time grid; row ``i`` of ``amplitudes`` belongs to ``times[i]``."""

    times: np.ndarray
    amplitudes: np.ndarray

    @property
    def photon_numbers(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @property
    def moduli(self) -> np.ndarray:
        return np.abs(self.amplitudes)

    @property
    def n_modes(self) -> int:
        return self.amplitudes.shape[1]

    def __len__(self) -> int:
        return self.times.shape[0]


def build_coupling_matrix(sys: ModeSystem) -> SymmetricMatrix:
    """Frequencies on the diagonal, couplings off it."""
    return SymmetricMatrix(sys.coupling + np.diag(sys.omega))


def two_mode_coefficients(Delta: float, lam: float) -> TwoModeCoefficients:
    """Transformation coefficients and normal-mode frequencies of a coupled pair.

    ``delta = 2 lam / sqrt(2 Omega (Omega - Delta))`` and
    ``gamma_c = sqrt((Omega - Delta) / (2 Omega))`` are evaluated in the
    equivalent forms ``sqrt((Omega +- Delta) / (2 Omega))``, with whichever of
    ``Omega +- Delta`` would cancel rewritten as ``4 lam^2 / (Omega -+ Delta)``.

    For ``lam == 0`` with ``Delta >= 0`` the generic expression is 0/0; the
    limit ``lam -> 0+`` (``delta=1, gamma_c=0, mu2=0``) is returned instead.
    """
    Delta = float(Delta)
    lam = float(lam)
    if lam < 0.0:
        raise ValueError("lam must be non-negative; flip the sign of the second mode instead")
    Omega = math.hypot(Delta, 2.0 * lam)
    if Omega == 0.0 or (lam == 0.0 and Delta >= 0.0):
        return TwoModeCoefficients(delta=1.0, gamma_c=0.0, Omega=Omega, mu1=Delta, mu2=0.0)
    if Delta >= 0.0:
        plus = Omega + Delta
        minus = 2.0 * lam * (2.0 * lam / plus)
    else:
        minus = Omega - Delta
        plus = 2.0 * lam * (2.0 * lam / minus)
    delta = math.sqrt(plus / (2.0 * Omega))
    gamma_c = math.sqrt(minus / (2.0 * Omega))
    return TwoModeCoefficients(delta=delta, gamma_c=gamma_c, Omega=Omega, mu1=0.5 * plus, mu2=-0.5 * minus)


def evolve_two_mode(alpha: complex, beta: complex, Delta: float, lam: float, t: float) -> tuple[complex, complex]:
    """Closed-form evolution of two coherent amplitudes under ``Delta a^dag a + lam (a^dag b + b^dag a)``.

    Negative ``lam`` is handled by the substitution ``b -> -b``.
    """
    alpha = as_amplitude(alpha)
    beta = as_amplitude(beta)
    flip = -1.0 if lam < 0.0 else 1.0
    beta *= flip
    c = two_mode_coefficients(Delta, abs(lam))
    d, g = c.delta, c.gamma_c
    n1 = (alpha * d + beta * g) * cmath.exp(-1j * c.mu1 * t)
    n2 = (alpha * g - beta * d) * cmath.exp(-1j * c.mu2 * t)
    return d * n1 + g * n2, flip * (g * n1 - d * n2)


def decompose(sys: ModeSystem) -> NormalModeDecomposition:
    return NormalModeDecomposition(system=sys, eig=jacobi_eigh(build_coupling_matrix(sys)))


def _propagate(d: NormalModeDecomposition, a0: np.ndarray, times: np.ndarray) -> np.ndarray:
    """Amplitudes at each time, shape ``(len(times), n)``."""
    b0 = d.eig.r @ a0
    phases = np.exp(-1j * np.outer(times, d.eig.mu))
    return (phases * b0) @ d.eig.r


def evolve(d: NormalModeDecomposition, a0, t: float) -> np.ndarray:
    """Bare-mode amplitudes at time ``t``; the norm of ``a0`` is conserved.

    Raises:
        DimensionError: ``a0`` has the wrong length.
    """
    a0 = as_amplitudes(a0, d.system.n)
    out = _propagate(d, a0, np.array([float(t)]))[0]
    out.flags.writeable = False
    return out


def trajectory(d: NormalModeDecomposition, a0, times) -> Trajectory:
    a0 = as_amplitudes(a0, d.system.n)
    times = np.array(times, dtype=float).reshape(-1)
    if times.size == 0:
        raise EmptyGrid("time grid is empty")
    if not np.all(np.isfinite(times)):
        raise ValueError("time grid must be finite")
    if np.any(np.diff(times) <= 0.0):
        raise ValueError("time grid must be strictly increasing")
    amps = _propagate(d, a0, times)
    times.flags.writeable = False
    amps.flags.writeable = False
    return Trajectory(times=times, amplitudes=amps)


def check_decomposition(d: NormalModeDecomposition, tol: float = 1e-10) -> float:
    """Max deviation between the reassembled and the original coupling matrix."""
    m = build_coupling_matrix(d.system).entries
    err = float(np.max(np.abs(reconstruct(d.eig).entries - m)))
    if err > tol * (1.0 + float(np.linalg.norm(m))):
        raise AssertionError(f"decomposition does not reproduce the coupling matrix (error {err:.3e})")
    return err
