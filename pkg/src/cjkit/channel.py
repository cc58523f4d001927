"""Quantum channels in Kraus form.

A :class:`Channel` is stored in the Heisenberg picture,
``Phi(B) = sum_l K_l^dagger B K_l`` with ``K_l : C^d_in -> C^d_out``; the
Schrodinger (pre-dual) action is ``Phi_*(T) = sum_l K_l T K_l^dagger``.
Heisenberg unitality is the same condition as Schrodinger trace preservation.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch
from .linalg import as_matrix, as_square, dag, fro
from .states import ReferenceState

UNITAL_TOL = 1e-8
RANK_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class Channel:
    d_in: int
    d_out: int
    kraus: tuple

    def __post_init__(self):
        ks = tuple(as_matrix(k, "Kraus operator") for k in self.kraus)
        if not ks:
            raise DimensionMismatch("a channel needs at least one Kraus operator")
        for k in ks:
            if k.shape != (self.d_out, self.d_in):
                raise DimensionMismatch(
                    f"Kraus operator of shape {k.shape}, expected {(self.d_out, self.d_in)}"
                )
        object.__setattr__(self, "kraus", ks)

    @classmethod
    def from_kraus(cls, kraus: Sequence) -> "Channel":
        ks = [as_matrix(k, "Kraus operator") for k in kraus]
        if not ks:
            raise DimensionMismatch("a channel needs at least one Kraus operator")
        d_out, d_in = ks[0].shape
        return cls(d_in, d_out, tuple(ks))

    @property
    def stacked(self) -> np.ndarray:
        """Kraus operators as an array of shape ``(n, d_out, d_in)``."""
        return np.stack(self.kraus)

    def __len__(self) -> int:
        return len(self.kraus)


def apply_heisenberg(c: Channel, b) -> np.ndarray:
    b = as_square(b, c.d_out, "observable")
    k = c.stacked
    return np.einsum("lji,jk,lkm->im", k.conj(), b, k)


def apply_schrodinger(c: Channel, t) -> np.ndarray:
    t = as_square(t, c.d_in, "state")
    k = c.stacked
    return np.einsum("lij,jk,lmk->im", k, t, k.conj())


def compose(outer: Channel, inner: Channel) -> Channel:
    """Channel whose Schrodinger action is ``outer_* o inner_*``.

    In the Heisenberg picture this is ``B -> inner(outer(B))``.
    """
    if inner.d_out != outer.d_in:
        raise DimensionMismatch(
            f"cannot compose: inner outputs dimension {inner.d_out}, outer expects {outer.d_in}"
        )
    return Channel(inner.d_in, outer.d_out, tuple(ko @ ki for ko in outer.kraus for ki in inner.kraus))


def unitality_residual(c: Channel) -> float:
    k = c.stacked
    return fro(np.einsum("lji,ljk->ik", k.conj(), k) - np.eye(c.d_in))


def is_unital(c: Channel, tol: float = UNITAL_TOL) -> tuple[bool, float]:
    """``(passed, ||sum K^dagger K - I||_F)``."""
    res = unitality_residual(c)
    return res <= tol, res


def kraus_gram(c: Channel, r: ReferenceState) -> np.ndarray:
    """``G[l, m] = tr[rho0 K_l^dagger K_m]``."""
    if r.dim != c.d_in:
        raise DimensionMismatch(f"reference state on dimension {r.dim}, channel input {c.d_in}")
    return _gram(c.stacked, r.matrix)


def _gram(k: np.ndarray, rho: np.ndarray) -> np.ndarray:
    # tr[rho K_l^dag K_m] = sum_{a,i,j} conj(K_l[a,i]) K_m[a,j] rho[j,i]
    return np.einsum("lai,maj,ji->lm", k.conj(), k, rho)


def is_minimal_kraus(c: Channel, r: ReferenceState | None = None) -> bool:
    """Linear independence of the Kraus set.

    In finite dimension weak independence is plain linear independence, so the
    test uses the uniform weight regardless of ``r`` (accepted for interface
    symmetry only); a badly conditioned reference must not hide a dependence.
    """
    k = c.stacked
    g = _gram(k, np.eye(c.d_in) / c.d_in)
    s = np.linalg.svd(g, compute_uv=False)
    return bool(s[0] > 0 and s[-1] > RANK_RTOL * s[0])


def schrodinger_superop(c: Channel) -> np.ndarray:
    """Matrix ``M`` with ``vec(Phi_*(T)) = M vec(T)`` (row-major vec)."""
    return sum(np.kron(k, k.conj()) for k in c.kraus)


def heisenberg_superop(c: Channel) -> np.ndarray:
    return dag(schrodinger_superop(c))


# --- standard channels -------------------------------------------------------


def identity_channel(d: int) -> Channel:
    return Channel(d, d, (np.eye(d, dtype=complex),))


def unitary_channel(u) -> Channel:
    """``Phi(B) = U^dagger B U`` (Schrodinger action ``T -> U T U^dagger``)."""
    u = as_square(u, name="unitary")
    return Channel(u.shape[0], u.shape[0], (u,))


def completely_depolarizing(d_in: int, d_out: int | None = None) -> Channel:
    """Replacement channel ``T -> tr(T) I/d_out``; Kraus ``|i><j| / sqrt(d_out)``."""
    d_out = d_in if d_out is None else d_out
    ks = []
    for i in range(d_out):
        for j in range(d_in):
            k = np.zeros((d_out, d_in), dtype=complex)
            k[i, j] = 1.0 / np.sqrt(d_out)
            ks.append(k)
    return Channel(d_in, d_out, tuple(ks))


def amplitude_damping(gamma: float) -> Channel:
    a0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - gamma)]], dtype=complex)
    a1 = np.array([[0.0, np.sqrt(gamma)], [0.0, 0.0]], dtype=complex)
    return Channel(2, 2, (a0, a1))


def dephasing(p: float, d: int = 2) -> Channel:
    """Keep the state with probability ``1-p``, otherwise erase off-diagonals."""
    ks = [np.sqrt(1.0 - p) * np.eye(d, dtype=complex)]
    for i in range(d):
        k = np.zeros((d, d), dtype=complex)
        k[i, i] = np.sqrt(p)
        ks.append(k)
    return Channel(d, d, tuple(ks))


def depolarizing(p: float, d: int = 2) -> Channel:
    """``T -> (1-p) T + p tr(T) I/d``."""
    dep = completely_depolarizing(d)
    ks = [np.sqrt(1.0 - p) * np.eye(d, dtype=complex)] + [np.sqrt(p) * k for k in dep.kraus]
    return Channel(d, d, tuple(ks))


def mixture(channels: Sequence[Channel], probs: Sequence[float]) -> Channel:
    """Convex combination of channels with equal dimensions."""
    first = channels[0]
    ks = []
    for ch, p in zip(channels, probs):
        if (ch.d_in, ch.d_out) != (first.d_in, first.d_out):
            raise DimensionMismatch("mixed channels must share dimensions")
        ks.extend(np.sqrt(p) * k for k in ch.kraus)
    return Channel(first.d_in, first.d_out, tuple(ks))
