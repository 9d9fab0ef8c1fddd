"""One system mode star-coupled to a flat, equally spaced bosonic bath.

The bath is a picket fence of ``n_bath`` modes spread evenly over
``[omega_sys - bandwidth/2, omega_sys + bandwidth/2]``, each coupled to the
system mode with the same strength.  Bath modes do not talk to each other.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ModeSystem, as_amplitude, as_amplitudes
from .errors import InsufficientData
from .modespace import Trajectory

LOG_FLOOR = 1e-9
WINDOW_FLOOR = 1e-3


@dataclass(frozen=True)
class StarBathSpec:
    omega_sys: float
    n_bath: int
    bandwidth: float
    coupling: float
    alpha0: complex = 1.0

    def __post_init__(self):
        if int(self.n_bath) != self.n_bath or self.n_bath < 2:
            raise ValueError(f"n_bath must be an integer >= 2, got {self.n_bath!r}")
        if not self.bandwidth > 0.0:
            raise ValueError(f"bandwidth must be positive, got {self.bandwidth!r}")
        if not self.coupling >= 0.0:
            raise ValueError(f"coupling must be non-negative, got {self.coupling!r}")
        if not math.isfinite(self.omega_sys) or not math.isfinite(self.bandwidth):
            raise ValueError("frequencies must be finite")
        object.__setattr__(self, "n_bath", int(self.n_bath))
        object.__setattr__(self, "alpha0", as_amplitude(self.alpha0))

    @property
    def spacing(self) -> float:
        return self.bandwidth / (self.n_bath - 1)

    @property
    def density_of_states(self) -> float:
        return (self.n_bath - 1) / self.bandwidth

    def bath_frequencies(self) -> np.ndarray:
        half = 0.5 * self.bandwidth
        return np.linspace(self.omega_sys - half, self.omega_sys + half, self.n_bath)


@dataclass(frozen=True)
class DecayFit:
    rate: float
    r2: float
    window_end: float
    intercept: float = 0.0
    n_samples: int = 0


def build_star_bath(spec: StarBathSpec) -> tuple[ModeSystem, np.ndarray]:
    """System mode 0 plus ``n_bath`` bath modes; all bath modes start in vacuum."""
    n = spec.n_bath + 1
    omega = np.concatenate([[spec.omega_sys], spec.bath_frequencies()])
    coupling = np.zeros((n, n))
    coupling[0, 1:] = spec.coupling
    coupling[1:, 0] = spec.coupling
    a0 = np.zeros(n, dtype=complex)
    a0[0] = spec.alpha0
    return ModeSystem(omega, coupling), as_amplitudes(a0)


def markov_reference(alpha0: complex, gamma_rate: float, times) -> np.ndarray:
    """Modulus ``|alpha0| exp(-gamma_rate t)`` of a coherent state in a memoryless lossy cavity."""
    if gamma_rate < 0.0:
        raise ValueError("gamma_rate must be non-negative")
    return abs(as_amplitude(alpha0)) * np.exp(-gamma_rate * np.asarray(times, dtype=float))


def predicted_amplitude_rate(spec: StarBathSpec) -> float:
    """Golden-rule amplitude decay rate ``pi g^2 rho`` for the flat band."""
    return math.pi * spec.coupling ** 2 * spec.density_of_states


def estimate_recurrence_time(spec: StarBathSpec) -> float:
    """Revival time ``2 pi / spacing`` of the equally spaced bath spectrum."""
    return 2.0 * math.pi / spec.spacing


def fit_decay_rate(traj: Trajectory, mode: int, window_end: float) -> DecayFit:
    """Least-squares fit of ``log|alpha_mode(t)| = c - rate * t`` on ``[0, window_end]``.

    Samples below ``1e-9`` in modulus are dropped.  A target with zero
    variance gets ``r2 = 1``.

    Raises:
        InsufficientData: fewer than three usable samples in the window.
    """
    t = np.asarray(traj.times)
    y = np.abs(traj.amplitudes[:, mode])
    keep = (t >= 0.0) & (t <= window_end) & (y >= LOG_FLOOR)
    if np.count_nonzero(keep) < 3:
        raise InsufficientData(
            f"need at least 3 samples with |alpha| >= {LOG_FLOOR:g} in [0, {window_end:g}], "
            f"got {np.count_nonzero(keep)}"
        )
    t, logy = t[keep], np.log(y[keep])
    design = np.column_stack([np.ones_like(t), t])
    (intercept, slope), *_ = np.linalg.lstsq(design, logy, rcond=None)
    ss_tot = float(np.sum((logy - logy.mean()) ** 2))
    ss_res = float(np.sum((logy - intercept - slope * t) ** 2))
    if ss_tot == 0.0 or ss_tot < 1e-300:
        r2 = 1.0
    else:
        r2 = min(1.0, 1.0 - ss_res / ss_tot)
    rate = max(0.0, -float(slope))
    return DecayFit(rate=rate, r2=r2, window_end=float(window_end), intercept=float(intercept), n_samples=t.size)


def default_fit_window(spec: StarBathSpec, traj: Trajectory, mode: int = 0) -> float:
    """``min(T_rec / 2, first time |alpha| drops below 1e-3 |alpha0|)``."""
    end = 0.5 * estimate_recurrence_time(spec)
    y = np.abs(traj.amplitudes[:, mode])
    below = np.flatnonzero(y < WINDOW_FLOOR * abs(spec.alpha0))
    if below.size:
        end = min(end, float(traj.times[below[0]]))
    return end


def find_revival(traj: Trajectory, mode: int = 0, after: float = 0.0, threshold: float = 0.5) -> float | None:
    """Time of the first local maximum of ``|alpha_mode|`` above ``threshold`` past ``after``."""
    y = np.abs(traj.amplitudes[:, mode])
    t = traj.times
    for i in range(1, len(t) - 1):
        if t[i] > after and y[i] > threshold and y[i] >= y[i - 1] and y[i] >= y[i + 1]:
            return float(t[i])
    return None
