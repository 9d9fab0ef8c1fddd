"""Real symmetric eigendecomposition by cyclic Jacobi rotations.

Rotations are scheduled in round-robin order: each step of a sweep
annihilates ``n // 2`` disjoint pivot pairs at once.  Disjoint rotations
commute, so a step is the same as applying them one after another, and
each sweep still visits every off-diagonal pair exactly once.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonConvergence

MAX_SWEEPS = 100
OFF_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class SymmetricMatrix:
    entries: np.ndarray

    def __post_init__(self):
        a = np.array(self.entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("matrix entries must be finite")
        if not np.array_equal(a, a.T):
            raise ValueError("matrix is not exactly symmetric")
        a.flags.writeable = False
        object.__setattr__(self, "entries", a)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def symmetrized(cls, a) -> "SymmetricMatrix":
        a = np.asarray(a, dtype=float)
        return cls(0.5 * (a + a.T))


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Ascending eigenvalues ``mu``; row ``k`` of ``r`` is the unit eigenvector for ``mu[k]``."""

    mu: np.ndarray
    r: np.ndarray
    sweeps: int = 0


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Pivot schedule: ``m - 1`` rounds of disjoint pairs covering every pair once."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        p, q = [], []
        for k in range(m // 2):
            i, j = players[k], players[m - 1 - k]
            if i < n and j < n:
                p.append(min(i, j))
                q.append(max(i, j))
        rounds.append((np.array(p, dtype=int), np.array(q, dtype=int)))
        players = [players[0], players[-1], *players[1:-1]]
    return rounds


def _off_norm(a: np.ndarray) -> float:
    # summed directly: ||a||^2 - sum(diag^2) cancels catastrophically
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def jacobi_eigh(m) -> EigenDecomposition:
    """Diagonalize a real symmetric matrix so that ``R^T diag(mu) R == m``.

    Eigenvalues come back in ascending order.  Each eigenvector row is
    flipped so its largest-magnitude component is non-negative.

    Raises:
        NonConvergence: off-diagonal Frobenius norm still above
            ``1e-12 * ||m||_F`` after 100 sweeps.
    """
    if not isinstance(m, SymmetricMatrix):
        m = SymmetricMatrix(m)
    a = np.array(m.entries, dtype=float)
    n = a.shape[0]
    if n < 1:
        raise ValueError("matrix must be at least 1x1")
    v = np.eye(n)
    threshold = OFF_TOLERANCE * float(np.linalg.norm(a))
    schedule = _round_robin(n)

    sweeps = 0
    while _off_norm(a) > threshold:
        if sweeps == MAX_SWEEPS:
            raise NonConvergence(
                f"Jacobi did not converge in {MAX_SWEEPS} sweeps "
                f"(off-diagonal norm {_off_norm(a):.3e} > {threshold:.3e})"
            )
        for p, q in schedule:
            apq = a[p, q]
            active = apq != 0.0
            if not np.any(active):
                continue
            p, q, apq = p[active], q[active], apq[active]
            app, aqq = a[p, p], a[q, q]
            with np.errstate(over="ignore"):
                # theta may overflow for tiny pivots; t then becomes 0
                theta = (aqq - app) / (2.0 * apq)
                t = np.sign(theta) / (np.abs(theta) + np.hypot(theta, 1.0))
            t[theta == 0.0] = 1.0
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            # A <- J^T A J with J[p,p]=J[q,q]=c, J[p,q]=s, J[q,p]=-s
            ap, aq = a[:, p].copy(), a[:, q].copy()
            a[:, p] = c * ap - s * aq
            a[:, q] = s * ap + c * aq
            ap, aq = a[p, :].copy(), a[q, :].copy()
            a[p, :] = c[:, None] * ap - s[:, None] * aq
            a[q, :] = s[:, None] * ap + c[:, None] * aq
            a[p, p] = app - t * apq
            a[q, q] = aqq + t * apq
            a[p, q] = 0.0
            a[q, p] = 0.0
            vp, vq = v[:, p].copy(), v[:, q].copy()
            v[:, p] = c * vp - s * vq
            v[:, q] = s * vp + c * vq
        sweeps += 1

    mu = np.diag(a).copy()
    order = np.argsort(mu, kind="stable")
    mu = mu[order]
    r = v[:, order].T.copy()
    lead = np.argmax(np.abs(r), axis=1)
    signs = np.where(r[np.arange(n), lead] < 0.0, -1.0, 1.0)
    r *= signs[:, None]
    mu.flags.writeable = False
    r.flags.writeable = False
    return EigenDecomposition(mu=mu, r=r, sweeps=sweeps)


def reconstruct(d: EigenDecomposition) -> SymmetricMatrix:
    """Return ``sum_m mu[m] * outer(r_m, r_m)`` (symmetrized)."""
    return SymmetricMatrix.symmetrized((d.r.T * d.mu) @ d.r)
