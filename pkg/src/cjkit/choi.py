"""Choi-Jamiolkowski isomorphism relative to a faithful reference state.

The Choi state of a channel ``Phi`` relative to ``rho0`` lives on
``H (x) K`` (input factor first) and is

    S = sum_l |w_l><w_l|,   w_l = (1 (x) K_l) Omega,

with ``Omega = sum_k sqrt(t_k) xi_k (x) xi_k``.  Its first margin
``tr_K S`` equals ``rho0`` exactly when ``Phi`` is unital, and ``Phi`` is
recovered entrywise in the reference basis by

    <zeta|Phi(B)|xi> = tr[S (|zeta><xi| (x) B)] / sqrt(t_zeta t_xi).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .channel import Channel
from .errors import DimensionMismatch, MarginViolation, NotPSD, RefMismatch
from .linalg import as_square, dag, fro, herm_eig, partial_trace, phase_fix
from .states import ReferenceState, gns_vector, transpose_in_basis

PSD_TOL = 1e-9
TRACE_TOL = 1e-9
MARGIN_TOL = 1e-8
RANK_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class ChoiState:
    d_in: int
    d_out: int
    ref: ReferenceState
    matrix: np.ndarray

    def __post_init__(self):
        m = as_square(self.matrix, self.d_in * self.d_out, "Choi matrix")
        if self.ref.dim != self.d_in:
            raise DimensionMismatch(f"reference on dimension {self.ref.dim}, Choi input {self.d_in}")
        object.__setattr__(self, "matrix", m)

    @property
    def margin(self) -> np.ndarray:
        return partial_trace(self.matrix, "second", (self.d_in, self.d_out))

    @property
    def margin_residual(self) -> float:
        return fro(self.margin - self.ref.matrix)

    @property
    def margin_ok(self) -> bool:
        return self.margin_residual <= MARGIN_TOL

    def pairing(self, a_prime, b) -> complex:
        """``tr[S (A' (x) B)]``."""
        a_prime = as_square(a_prime, self.d_in)
        b = as_square(b, self.d_out)
        t = self.matrix.reshape(self.d_in, self.d_out, self.d_in, self.d_out)
        return complex(np.einsum("iajb,ji,ba->", t, a_prime, b))


def validate_choi(s: ChoiState, psd_tol: float = PSD_TOL, margin_tol: float = MARGIN_TOL) -> None:
    """Raise if ``s`` is not a positive, trace-one operator with margin ``rho0``."""
    m = s.matrix
    if fro(m - dag(m)) > psd_tol * max(1.0, fro(m)):
        raise NotPSD("Choi matrix is not Hermitian")
    w = np.linalg.eigvalsh(0.5 * (m + dag(m)))
    if w[0] < -psd_tol:
        raise NotPSD(f"Choi matrix has eigenvalue {w[0]:.3e} < 0")
    tr = np.trace(m).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise MarginViolation(f"Choi matrix has trace {tr!r}, expected 1")
    res = s.margin_residual
    if res > margin_tol:
        raise MarginViolation(f"first margin differs from rho0 by {res:.3e} (Frobenius)")


def choi_from_channel(c: Channel, r: ReferenceState) -> ChoiState:
    """Choi state of ``c`` relative to ``r``.

    Non-unital channels are accepted; check ``margin_ok`` on the result.
    """
    if r.dim != c.d_in:
        raise DimensionMismatch(f"reference on dimension {r.dim}, channel input {c.d_in}")
    omega = gns_vector(r).reshape(c.d_in, c.d_in)
    # (1 (x) K) vec(X) = vec(X K^T)
    w = np.stack([(omega @ k.T).reshape(-1) for k in c.kraus], axis=1)
    return ChoiState(c.d_in, c.d_out, r, w @ dag(w))


def choi_from_vector(c: Channel, omega) -> np.ndarray:
    """Choi matrix of ``c`` at an arbitrary unit vector ``omega`` of ``H (x) H``.

    The algebra acts on the first factor of ``omega`` and the commutant on the
    second, so the vector is swapped before the Kraus operators act:
    ``S = sum_l (1 (x) K_l) |swap omega><swap omega| (1 (x) K_l)^dagger``.
    """
    d = c.d_in
    omega = np.asarray(omega, dtype=complex).reshape(-1)
    if omega.size != d * d:
        raise DimensionMismatch(f"vector of length {omega.size}, expected {d * d}")
    if abs(np.linalg.norm(omega) - 1.0) > 1e-10:
        raise ValueError("omega must be a unit vector")
    x = omega.reshape(d, d).T
    w = np.stack([(x @ k.T).reshape(-1) for k in c.kraus], axis=1)
    return w @ dag(w)


def choi_from_schrodinger(
    fn: Callable[[np.ndarray], np.ndarray], d_in: int, d_out: int, r: ReferenceState
) -> ChoiState:
    """Choi state of a linear map given only through its Schrodinger action.

    ``S = sum_{k,l} sqrt(t_k t_l) |xi_k><xi_l| (x) Phi_*(|xi_k><xi_l|)``.
    """
    if r.dim != d_in:
        raise DimensionMismatch(f"reference on dimension {r.dim}, map input {d_in}")
    s = np.zeros((d_in * d_out, d_in * d_out), dtype=complex)
    b, st = r.basis, np.sqrt(r.weights)
    for k in range(d_in):
        for l in range(d_in):
            unit = np.outer(b[:, k], b[:, l].conj())
            s += st[k] * st[l] * np.kron(unit, fn(unit))
    return ChoiState(d_in, d_out, r, s)


def recover_heisenberg(s: ChoiState, b) -> np.ndarray:
    """Heisenberg action from the Choi state by the matrix-element formula."""
    b = as_square(b, s.d_out)
    t = s.matrix.reshape(s.d_in, s.d_out, s.d_in, s.d_out)
    # R[i, j] = tr[S (|e_i><e_j| (x) B)] = sum_{a,c} S[(j,a),(i,c)] B[c,a]
    raw = np.einsum("jaic,ca->ij", t, b)
    bas = s.ref.basis
    in_basis = bas.T @ raw @ bas.conj()
    st = np.sqrt(s.ref.weights)
    return bas @ (in_basis / np.outer(st, st)) @ dag(bas)


def recovery_pairing(c_heisenberg: Callable[[np.ndarray], np.ndarray], r: ReferenceState, a_prime, b) -> complex:
    """``tr[rho0^{1/2} (A')^T rho0^{1/2} Phi(B)]`` computed from the Heisenberg action."""
    at = transpose_in_basis(r, a_prime)
    return complex(np.trace(r.sqrt @ at @ r.sqrt @ c_heisenberg(b)))


def _pure_components(s: ChoiState) -> list[np.ndarray]:
    """Orthogonal vectors ``w`` with ``S = sum |w><w|``, ordered by decreasing norm."""
    w, v = herm_eig(s.matrix, rtol=PSD_TOL)
    top = w[-1] if w.size else 0.0
    keep = np.flatnonzero(w > RANK_RTOL * top)[::-1]
    v = phase_fix(v[:, keep])
    return [np.sqrt(w[i]) * v[:, n] for n, i in enumerate(keep)]


def kraus_from_vector(w: np.ndarray, r: ReferenceState, d_out: int) -> np.ndarray:
    """The unique ``K`` with ``(1 (x) K) Omega = w``."""
    d_in = r.dim
    m = np.asarray(w).reshape(d_in, d_out)
    b = r.basis
    # psi_xi = (<xi| (x) 1) w ; K xi = psi_xi / sqrt(t_xi)
    psi = (dag(b) @ m).T
    return (psi / np.sqrt(r.weights)) @ dag(b)


def channel_from_choi(s: ChoiState, margin_tol: float = MARGIN_TOL) -> Channel:
    """Minimal, ``rho0``-orthogonal Kraus decomposition read off the spectrum of ``S``.

    Every eigenvector ``v`` with eigenvalue ``mu`` above the relative cutoff
    gives ``w = sqrt(mu) v`` and one Kraus operator.
    """
    validate_choi(s, margin_tol=margin_tol)
    return extract_kraus(s)


def extract_kraus(s: ChoiState) -> Channel:
    """Kraus operators of ``s`` without the margin check (the map may be non-unital)."""
    ks = tuple(kraus_from_vector(w, s.ref, s.d_out) for w in _pure_components(s))
    return Channel(s.d_in, s.d_out, ks)


def mix(s1: ChoiState, s2: ChoiState, t: float) -> ChoiState:
    """``t S1 + (1-t) S2``: the Choi state of the mixed channel."""
    if (s1.d_in, s1.d_out) != (s2.d_in, s2.d_out):
        raise DimensionMismatch("Choi states of different dimensions")
    if s1.ref is not s2.ref and not (
        np.allclose(s1.ref.basis, s2.ref.basis, atol=1e-12)
        and np.allclose(s1.ref.weights, s2.ref.weights, atol=1e-12)
    ):
        raise RefMismatch("Choi states relative to different reference states")
    if not 0.0 <= t <= 1.0:
        raise ValueError("mixing weight must lie in [0, 1]")
    return ChoiState(s1.d_in, s1.d_out, s1.ref, t * s1.matrix + (1.0 - t) * s2.matrix)


def choi_rank(s: ChoiState) -> int:
    w = np.linalg.eigvalsh(0.5 * (s.matrix + dag(s.matrix)))
    return int(np.sum(w > RANK_RTOL * w[-1]))


def choi_distance(s1, s2) -> float:
    a = s1.matrix if isinstance(s1, ChoiState) else s1
    b = s2.matrix if isinstance(s2, ChoiState) else s2
    return fro(a - b)
