"""Shared vocabulary: mode systems, amplitude vectors and coherent-state helpers.

Complex amplitudes are plain Python ``complex`` values; vectors of them are
one-dimensional ``numpy.complex128`` arrays.  Global phases of many-mode
states are never tracked, only amplitudes.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError


def as_amplitude(value) -> complex:
    """Coerce to ``complex`` and reject NaN or infinite parts."""
    z = complex(value)
    if not cmath.isfinite(z):
        raise ValueError(f"amplitude must be finite, got {z!r}")
    return z


def as_amplitudes(values, n: int | None = None) -> np.ndarray:
    """Return a read-only complex vector, optionally checking its length."""
    a = np.array(values, dtype=np.complex128).reshape(-1)
    if not np.all(np.isfinite(a)):
        raise ValueError("amplitudes must be finite")
    if n is not None and a.shape[0] != n:
        raise DimensionError(f"expected {n} amplitudes, got {a.shape[0]}")
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class ModeSystem:
    """Bare frequencies ``omega`` and a symmetric, zero-diagonal coupling matrix.

    The Hamiltonian is ``sum_j omega_j n_j + sum_{i != j} coupling_ij a_i^dag a_j``.
    """

    omega: np.ndarray
    coupling: np.ndarray

    def __post_init__(self):
        omega = np.array(self.omega, dtype=float).reshape(-1)
        n = omega.shape[0]
        if n < 1:
            raise ValueError("a mode system needs at least one mode")
        coupling = np.array(self.coupling, dtype=float)
        if coupling.shape != (n, n):
            raise DimensionError(f"coupling matrix must be {n}x{n}, got {coupling.shape}")
        if not (np.all(np.isfinite(omega)) and np.all(np.isfinite(coupling))):
            raise ValueError("frequencies and couplings must be finite")
        if np.any(np.diag(coupling) != 0.0):
            raise ValueError("coupling matrix must have a zero diagonal")
        bad = np.argwhere(coupling != coupling.T)
        if bad.size:
            i, j = bad[0]
            raise ValueError(
                f"coupling matrix is not symmetric: [{i}][{j}]={coupling[i, j]!r} "
                f"but [{j}][{i}]={coupling[j, i]!r}"
            )
        omega.flags.writeable = False
        coupling.flags.writeable = False
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "coupling", coupling)

    @property
    def n(self) -> int:
        return self.omega.shape[0]

    @classmethod
    def two_mode(cls, detuning: float, lam: float) -> "ModeSystem":
        """Interaction-picture pair: frequencies (detuning, 0) and one coupling."""
        return cls([detuning, 0.0], [[0.0, lam], [lam, 0.0]])

    @classmethod
    def from_couplings(cls, omega, couplings) -> "ModeSystem":
        """Build from ``(i, j, value)`` triples; each pair is mirrored."""
        omega = np.asarray(omega, dtype=float).reshape(-1)
        c = np.zeros((omega.shape[0], omega.shape[0]))
        for i, j, value in couplings:
            c[i, j] = c[j, i] = value
        return cls(omega, c)


def coherent_overlap(a: complex, b: complex) -> complex:
    """Inner product <b|a> of two single-mode coherent states."""
    a = as_amplitude(a)
    b = as_amplitude(b)
    return cmath.exp(-0.5 * abs(a) ** 2 - 0.5 * abs(b) ** 2 + b.conjugate() * a)


def compose_displacements(e1: complex, e2: complex) -> tuple[complex, complex]:
    """Combine D(e1) D(e2) into ``phase * D(e1 + e2)``.

    Returns ``(e1 + e2, phase)``; the phase has unit modulus.
    """
    e1 = as_amplitude(e1)
    e2 = as_amplitude(e2)
    # the exponent is purely imaginary: i * Im(e1 * conj(e2))
    exponent = 1j * (e1 * e2.conjugate()).imag
    return e1 + e2, cmath.exp(exponent)
