"""Spin representations and rotation-invariant reference states.

The truncated one-particle space is ``H = (+)_{l <= L} C^{2l+1} (x) C^{n_rad}``
with rotations acting as ``(+)_l D^l(R) (x) 1``.  Basis vectors are ordered by
``l`` ascending, then ``m = l, ..., -l``, then the radial index ``n``.
Position-space wavefunctions never enter: only this block structure matters
for covariance.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy.linalg import block_diag

from .channel import Channel
from .errors import InvalidRepresentation, NotFaithful
from .linalg import expm_hermitian
from .states import ReferenceState, density_matrix, make_reference
from .symmetry import CovarianceReport, Representation, check_covariance, lie_representation, spin_generators


@dataclass(frozen=True, eq=False)
class SpinRep:
    j: float
    jx: np.ndarray
    jy: np.ndarray
    jz: np.ndarray

    @property
    def dim(self) -> int:
        return self.jz.shape[0]

    @property
    def generators(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.jx, self.jy, self.jz

    def casimir(self) -> np.ndarray:
        return self.jx @ self.jx + self.jy @ self.jy + self.jz @ self.jz

    def rotation(self, axis, angle: float) -> np.ndarray:
        """``exp(-i angle n.J)``."""
        n = np.asarray(axis, dtype=float)
        n = n / np.linalg.norm(n)
        return expm_hermitian(n[0] * self.jx + n[1] * self.jy + n[2] * self.jz, angle)

    def representation(self) -> Representation:
        return lie_representation(self.generators, j=self.j)


def spin_rep(j: float) -> SpinRep:
    jx, jy, jz = spin_generators(j)
    return SpinRep(float(j), jx, jy, jz)


@dataclass(frozen=True)
class OrbitalSpace:
    l_max: int
    n_rad: int

    def __post_init__(self):
        if self.l_max < 0 or self.n_rad < 1:
            raise InvalidRepresentation("need l_max >= 0 and n_rad >= 1")

    @property
    def dim(self) -> int:
        return sum(self.block_dims)

    @property
    def block_dims(self) -> list[int]:
        return [(2 * l + 1) * self.n_rad for l in range(self.l_max + 1)]

    @property
    def layout(self) -> list[tuple[int, int, int]]:
        return [(l, m, n) for l in range(self.l_max + 1) for m in range(l, -l - 1, -1) for n in range(self.n_rad)]

    @cached_property
    def generators(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        eye = np.eye(self.n_rad)
        per_l = [spin_generators(l) for l in range(self.l_max + 1)]
        return tuple(block_diag(*[np.kron(g[k], eye) for g in per_l]) for k in range(3))

    def representation(self) -> Representation:
        return lie_representation(self.generators)

    def rotation(self, axis, angle: float) -> np.ndarray:
        n = np.asarray(axis, dtype=float)
        n = n / np.linalg.norm(n)
        return expm_hermitian(sum(nk * g for nk, g in zip(n, self.generators)), angle)


def rotation_invariant_state(weights: Sequence[float], radial_states: Sequence) -> ReferenceState:
    """``rho0 = (+)_l t_l/(2l+1) 1 (x) sigma_l``; faithful when every ``t_l > 0`` and every ``sigma_l`` is."""
    t = np.asarray(weights, dtype=float)
    if t.ndim != 1 or len(radial_states) != t.size:
        raise ValueError("need one radial state per orbital weight")
    if np.any(t <= 0):
        raise NotFaithful("orbital weights must be strictly positive")
    if abs(t.sum() - 1.0) > 1e-12:
        raise NotFaithful(f"orbital weights sum to {t.sum()!r}, expected 1")
    blocks = []
    for l, (tl, sigma) in enumerate(zip(t, radial_states)):
        sigma = density_matrix(sigma)
        if np.linalg.eigvalsh(sigma)[0] <= 1e-12:
            raise NotFaithful(f"radial state for l={l} is not faithful")
        blocks.append(np.kron(np.eye(2 * l + 1) * tl / (2 * l + 1), sigma))
    return make_reference(block_diag(*blocks))


def haar_quaternions(n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` uniform unit quaternions ``(w, x, y, z)``, i.e. Haar-random SU(2) elements."""
    q = rng.normal(size=(n, 4))
    return q / np.linalg.norm(q, axis=1, keepdims=True)


def quaternion_axis_angle(q) -> tuple[np.ndarray, float]:
    """``q = (cos(a/2), sin(a/2) n)`` -> ``(n, a)`` with ``a`` in ``[0, 2 pi]``."""
    q = np.asarray(q, dtype=float)
    v = q[1:]
    s = np.linalg.norm(v)
    if s < 1e-15:
        return np.array([0.0, 0.0, 1.0]), 0.0 if q[0] > 0 else 2 * np.pi
    return v / s, 2.0 * np.arctan2(s, q[0])


def haar_rotations(space: OrbitalSpace, n: int, rng: np.random.Generator) -> list[np.ndarray]:
    """Block rotations ``(+)_l D^l(R) (x) 1`` for ``n`` Haar-random ``R``."""
    return [space.rotation(*quaternion_axis_angle(q)) for q in haar_quaternions(n, rng)]


def check_rotation_covariance(
    c: Channel, rep_a: Representation, rep_b: Representation, r: ReferenceState
) -> CovarianceReport:
    """Rotation covariance decided on the three generators of ``conj(U) (x) V``."""
    if rep_a.kind != "spin" or rep_b.kind != "spin":
        raise InvalidRepresentation("rotation covariance needs spin representations on both sides")
    return check_covariance(c, rep_a, rep_b, r)
