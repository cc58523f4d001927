"""Density matrices, faithful reference states and their modular data.

A :class:`ReferenceState` stores a faithful state through its spectral data
``rho0 = sum_k t_k |xi_k><xi_k|``.  The eigenbasis is pinned once, at
construction, because the purification ``Omega = sum_k sqrt(t_k) xi_k (x) xi_k``,
the transpose and the entrywise conjugation all depend on it.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DimensionMismatch, NotFaithful, NotPSD
from .linalg import as_square, dag, herm_eig, is_hermitian, phase_fix

DENSITY_TOL = 1e-10
FAITHFUL_FLOOR = 1e-12
DEGENERACY_TOL = 1e-11


def density_matrix(rho, tol: float = DENSITY_TOL) -> np.ndarray:
    """Validate a density matrix and return its Hermitian part."""
    rho = as_square(rho, name="density matrix")
    if not is_hermitian(rho, tol):
        raise NotPSD("density matrix is not Hermitian")
    rho = 0.5 * (rho + dag(rho))
    w = np.linalg.eigvalsh(rho)
    if w[0] < -tol:
        raise NotPSD(f"density matrix has eigenvalue {w[0]:.3e} < 0")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > tol:
        raise NotPSD(f"density matrix has trace {tr!r}, expected 1")
    return rho


def _pinned_basis(w: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic eigenbasis: clusters of equal eigenvalues are re-spanned by
    Gram-Schmidt on the projected standard basis vectors, then phase-fixed."""
    d = w.size
    weights = np.empty(d)
    basis = np.empty((d, d), dtype=complex)
    start = 0
    while start < d:
        stop = start + 1
        while stop < d and w[stop] - w[start] <= DEGENERACY_TOL:
            stop += 1
        block = v[:, start:stop]
        size = stop - start
        weights[start:stop] = w[start:stop].mean()
        if size == 1:
            basis[:, start:stop] = block
        else:
            proj = block @ dag(block)
            vecs: list[np.ndarray] = []
            for i in range(d):
                x = proj[:, i].copy()
                for u in vecs:
                    x -= (u.conj() @ x) * u
                nx = np.linalg.norm(x)
                if nx > 1e-6:
                    vecs.append(x / nx)
                if len(vecs) == size:
                    break
            basis[:, start:stop] = np.column_stack(vecs)
        start = stop
    return weights, phase_fix(basis)


@dataclass(frozen=True, eq=False)
class ReferenceState:
    """Faithful state ``rho0`` together with its pinned eigenbasis.

    ``basis[:, k]`` is the eigenvector carrying the weight ``weights[k]``;
    weights are ascending.
    """

    basis: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=complex)
        t = np.asarray(self.weights, dtype=float)
        if b.ndim != 2 or b.shape[0] != b.shape[1] or b.shape[0] != t.size:
            raise DimensionMismatch("basis must be square with one weight per column")
        if np.any(t <= FAITHFUL_FLOOR):
            raise NotFaithful(f"reference weight {t.min():.3e} below faithfulness floor")
        if abs(t.sum() - 1.0) > 1e-12:
            raise NotFaithful(f"reference weights sum to {t.sum()!r}")
        if np.linalg.norm(dag(b) @ b - np.eye(t.size)) > 1e-10:
            raise ValueError("reference basis is not unitary")
        object.__setattr__(self, "basis", b)
        object.__setattr__(self, "weights", t)

    @property
    def dim(self) -> int:
        return self.weights.size

    def _spectral(self, values: np.ndarray) -> np.ndarray:
        b = self.basis
        return (b * values) @ dag(b)

    @cached_property
    def matrix(self) -> np.ndarray:
        return self._spectral(self.weights)

    @cached_property
    def sqrt(self) -> np.ndarray:
        return self._spectral(np.sqrt(self.weights))

    @cached_property
    def inv_sqrt(self) -> np.ndarray:
        return self._spectral(1.0 / np.sqrt(self.weights))

    @cached_property
    def inv(self) -> np.ndarray:
        return self._spectral(1.0 / self.weights)

    @cached_property
    def log(self) -> np.ndarray:
        return self._spectral(np.log(self.weights))

    def power_it(self, t: float) -> np.ndarray:
        """``rho0 ** (i t)``."""
        return self._spectral(np.exp(1j * t * np.log(self.weights)))

    def is_diagonal(self, atol: float = 1e-12) -> bool:
        m = self.matrix
        return bool(np.abs(m - np.diag(np.diag(m))).max() <= atol)


def make_reference(rho) -> ReferenceState:
    """Build a :class:`ReferenceState` from a faithful density matrix.

    Raises :class:`NotFaithful` when an eigenvalue falls below ``1e-12``.
    """
    rho = density_matrix(rho)
    w, v = herm_eig(rho)
    if w[0] < FAITHFUL_FLOOR:
        raise NotFaithful(f"state has eigenvalue {w[0]:.3e}; a faithful state is required")
    weights, basis = _pinned_basis(w, v)
    return ReferenceState(basis, weights / weights.sum())


def maximally_mixed(d: int) -> ReferenceState:
    return ReferenceState(np.eye(d, dtype=complex), np.full(d, 1.0 / d))


def gns_vector(r: ReferenceState) -> np.ndarray:
    """The purification ``Omega = sum_k sqrt(t_k) xi_k (x) xi_k`` as a flat vector."""
    b = r.basis
    # sum_k sqrt(t_k) xi_k xi_k^T, read row-major
    return ((b * np.sqrt(r.weights)) @ b.T).reshape(-1)


def _in_basis(r: ReferenceState, a) -> np.ndarray:
    a = as_square(a, r.dim)
    return dag(r.basis) @ a @ r.basis


def _from_basis(r: ReferenceState, c: np.ndarray) -> np.ndarray:
    return r.basis @ c @ dag(r.basis)


def transpose_in_basis(r: ReferenceState, a) -> np.ndarray:
    """Transpose with respect to the reference eigenbasis: ``<xi|A^T zeta> = <zeta|A xi>``."""
    return _from_basis(r, _in_basis(r, a).T)


def conj_in_basis(r: ReferenceState, a) -> np.ndarray:
    """Entrywise complex conjugation in the reference eigenbasis."""
    return _from_basis(r, _in_basis(r, a).conj())


def modular_flow(r: ReferenceState, a, t: float) -> np.ndarray:
    """``rho0^{it} a rho0^{-it}``."""
    a = as_square(a, r.dim)
    u = r.power_it(t)
    return u @ a @ dag(u)


@dataclass(frozen=True)
class ModularData:
    """Tomita-Takesaki data of ``(L(H) (x) 1, Omega)`` for a reference state.

    Vectors of ``H (x) H`` are flat arrays; the algebra acts on the first
    factor and its commutant on the second.
    """

    owner: ReferenceState

    def _coords(self, eta: np.ndarray) -> np.ndarray:
        d, b = self.owner.dim, self.owner.basis
        x = np.asarray(eta, dtype=complex).reshape(d, d)
        return dag(b) @ x @ b.conj()

    def _vector(self, x: np.ndarray) -> np.ndarray:
        b = self.owner.basis
        return (b @ x @ b.T).reshape(-1)

    def delta_it(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        """``Delta^{it} = rho0^{it} (x) rho0^{-it}`` as its two tensor factors."""
        return self.owner.power_it(t), self.owner.power_it(-t)

    def apply_delta(self, eta: np.ndarray, power: float = 1.0) -> np.ndarray:
        """``Delta^power eta`` with ``Delta = rho0 (x) rho0^{-1}``."""
        t = self.owner.weights
        x = self._coords(eta)
        return self._vector((t[:, None] ** power) * x * (t[None, :] ** -power))

    def apply_J(self, eta: np.ndarray) -> np.ndarray:
        """Modular conjugation: in eigenbasis coordinates ``J vec(X) = vec(X^dagger)``."""
        return self._vector(dag(self._coords(eta)))

    def j(self, a, a_prime) -> tuple[np.ndarray, np.ndarray]:
        """``j(A (x) A') = conj(A') (x) conj(A)`` returned as the pair of factors."""
        return conj_in_basis(self.owner, a_prime), conj_in_basis(self.owner, a)
