"""Dense complex matrix kernel.

All matrices are plain ``numpy`` arrays of dtype ``complex128``.  Tensor
products use numpy's row-major convention: for ``a`` acting on the first
factor and ``b`` on the second, ``kron(a, b)[i*rb + k, j*cb + l] = a[i, j] * b[k, l]``.
Vectorisation (``vec``) is row-major as well, so ``vec(A X B) = kron(A, B.T) vec(X)``.
"""
from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np

from .errors import DimensionMismatch, NonHermitianInput, NotPSD, SingularInput

HERMITIAN_RTOL = 1e-8
PSD_FLOOR = 1e-12
SINGULAR_FLOOR = 1e-14


class HermitianEig(NamedTuple):
    """Eigenvalues in ascending order and the unitary of column eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce to a 2-d complex array, rejecting NaN/Inf entries."""
    m = np.asarray(a, dtype=complex)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-dimensional, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


def as_square(a, dim: int | None = None, name: str = "matrix") -> np.ndarray:
    m = as_matrix(a, name)
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {m.shape}")
    if dim is not None and m.shape[0] != dim:
        raise DimensionMismatch(f"{name} must be {dim}x{dim}, got {m.shape}")
    return m


def dag(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def fro(a) -> float:
    return float(np.linalg.norm(a))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a, "a"), as_matrix(b, "b"))


def partial_trace(m, side: str, dims: tuple[int, int]) -> np.ndarray:
    """Trace out one factor of an operator on ``C^d1 (x) C^d2``.

    ``side="second"`` returns the operator on the first factor and
    ``side="first"`` the operator on the second one.
    """
    d1, d2 = dims
    m = as_square(m, name="m")
    if m.shape[0] != d1 * d2:
        raise DimensionMismatch(f"operator of size {m.shape[0]} is not on a {d1}x{d2} product")
    t = m.reshape(d1, d2, d1, d2)
    if side == "second":
        return np.einsum("ikjk->ij", t)
    if side == "first":
        return np.einsum("kikj->ij", t)
    raise ValueError(f"side must be 'first' or 'second', not {side!r}")


def swap_operator(d1: int, d2: int) -> np.ndarray:
    """Permutation unitary mapping ``x (x) y`` in ``C^d1 (x) C^d2`` to ``y (x) x``."""
    p = np.zeros((d1 * d2, d1 * d2))
    for i in range(d1):
        for k in range(d2):
            p[k * d1 + i, i * d2 + k] = 1.0
    return p


def swap_factors(m: np.ndarray, d1: int, d2: int) -> np.ndarray:
    """Conjugate an operator on ``C^d1 (x) C^d2`` by the swap; result lives on ``C^d2 (x) C^d1``."""
    t = np.asarray(m).reshape(d1, d2, d1, d2)
    return t.transpose(1, 0, 3, 2).reshape(d1 * d2, d1 * d2)


def vec(m: np.ndarray) -> np.ndarray:
    return np.asarray(m).reshape(-1)


def unvec(v: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    return np.asarray(v).reshape(shape)


def is_hermitian(a: np.ndarray, rtol: float = HERMITIAN_RTOL) -> bool:
    return fro(a - dag(a)) <= rtol * max(1.0, fro(a))


def hermitize(a, rtol: float = HERMITIAN_RTOL) -> np.ndarray:
    """Return ``(a + a^dagger)/2`` after checking ``a`` is Hermitian up to ``rtol``."""
    a = as_square(a)
    if not is_hermitian(a, rtol):
        raise NonHermitianInput(
            f"matrix is not Hermitian: |a - a^dag|_F = {fro(a - dag(a)):.3e}"
        )
    return 0.5 * (a + dag(a))


def herm_eig(a, rtol: float = HERMITIAN_RTOL) -> HermitianEig:
    w, v = np.linalg.eigh(hermitize(a, rtol))
    return HermitianEig(w, v)


def phase_fix(v: np.ndarray, atol: float = 1e-12) -> np.ndarray:
    """Rotate each column so its first non-negligible entry is real and positive."""
    v = np.array(v, dtype=complex, copy=True)
    for c in range(v.shape[1]):
        col = v[:, c]
        cut = atol * max(1.0, np.abs(col).max())
        nz = np.flatnonzero(np.abs(col) > cut)
        if nz.size:
            z = col[nz[0]]
            v[:, c] = col * (abs(z) / z)
    return v


def _scalar_map(f: str, p: float | None) -> tuple[Callable[[np.ndarray], np.ndarray], bool]:
    """Return (scalar function, needs strictly positive spectrum)."""
    if f == "sqrt":
        return np.sqrt, False
    if f == "inv_sqrt":
        return lambda x: 1.0 / np.sqrt(x), True
    if f == "log":
        return np.log, True
    if f == "pow_it":
        if p is None:
            raise ValueError("pow_it needs the real parameter t")
        return lambda x: np.exp(1j * p * np.log(x)), True
    if f == "pow_p":
        if p is None:
            raise ValueError("pow_p needs the exponent p")
        return (lambda x: np.power(x, p)), p < 0
    raise ValueError(f"unknown matrix function {f!r}")


def matrix_function(a, f: str, p: float | None = None) -> np.ndarray:
    """Apply a scalar function to the spectrum of a positive semidefinite matrix.

    ``f`` is one of ``"sqrt"``, ``"inv_sqrt"``, ``"log"``, ``"pow_it"``
    (``x -> x**(i p)``) and ``"pow_p"`` (``x -> x**p``).  Eigenvalues in
    ``[-1e-12 |a|, 0)`` are clamped to zero; functions that are singular at
    zero reject spectra below ``1e-14 |a|``.
    """
    fn, strict = _scalar_map(f, p)
    w, v = herm_eig(a)
    scale = max(float(np.abs(w).max(initial=0.0)), np.finfo(float).tiny)
    if w.size and w[0] < -PSD_FLOOR * scale:
        raise NotPSD(f"smallest eigenvalue {w[0]:.3e} is negative beyond the clamp floor")
    if strict and w.size and w[0] < SINGULAR_FLOOR * scale:
        raise SingularInput(f"{f} of a matrix with eigenvalue {w[0]:.3e}")
    w = np.clip(w, 0.0, None)
    return (v * fn(w)) @ dag(v)


def psd_sqrt(a) -> np.ndarray:
    return matrix_function(a, "sqrt")


def expm_hermitian(h, t: float) -> np.ndarray:
    """``exp(-i t h)`` for Hermitian ``h`` via its eigendecomposition."""
    w, v = herm_eig(h)
    return (v * np.exp(-1j * t * w)) @ dag(v)


def nullspace(m: np.ndarray, rtol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis (columns) of the numerical nullspace of ``m``."""
    _, s, vh = np.linalg.svd(m)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > rtol * smax)) if smax > 0 else 0
    return dag(vh[rank:])
