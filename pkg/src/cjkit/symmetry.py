"""Group representations, covariance tests and twirls.

A channel ``Phi`` is covariant for unitary families ``U(g)`` on the input
and ``V(g)`` on the output when ``Phi(V B V^dagger) = U Phi(B) U^dagger``.
Relative to a reference ``rho0`` this is equivalent to

    (conj(U) (x) V)^dagger S (conj(U) (x) V) = S_{Omega'}, Omega' = (U (x) conj(U))^dagger Omega,

with ``conj`` taken entrywise in the ``rho0`` eigenbasis.  If ``rho0`` is
invariant then ``Omega' = Omega`` and the test reduces to commutation of
``S`` with ``conj(U) (x) V``; the twirl is the orthogonal projection onto
that commutant.

Three kinds of representation are supported: a finite list of unitaries,
a U(1) phase representation with integer weights and a Lie-algebra (spin)
representation given by three Hermitian generators.  Projective phases
cancel in conjugation, so no multiplier bookkeeping is kept.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channel import Channel
from .choi import ChoiState, channel_from_choi, choi_from_channel, choi_from_vector
from .errors import DimensionMismatch, InvalidJ, InvalidRepresentation, NonInvariantReference, NotFaithful
from .linalg import as_square, commutator, dag, expm_hermitian, fro, hermitize, nullspace
from .states import ReferenceState, conj_in_basis, density_matrix, gns_vector, make_reference

COVARIANCE_TOL = 1e-9
INVARIANCE_TOL = 1e-10
UNITARY_TOL = 1e-10
NULLSPACE_RTOL = 1e-10
# exp(-i J_k) for the three generators: theta = 1 is an irrational multiple of
# pi, so each closure is a full one-parameter subgroup and together they are dense.
SPIN_PROBE_ANGLE = 1.0


@dataclass(frozen=True, eq=False)
class Representation:
    kind: str
    dim: int
    elements: tuple = ()
    weights: tuple = ()
    basis: np.ndarray | None = None
    generators: tuple = ()
    j: float | None = None

    def phase_unitary(self, theta: float) -> np.ndarray:
        b = self.weight_basis
        return (b * np.exp(1j * theta * np.asarray(self.weights))) @ dag(b)

    @property
    def weight_basis(self) -> np.ndarray:
        return np.eye(self.dim, dtype=complex) if self.basis is None else self.basis

    @property
    def weight_operator(self) -> np.ndarray:
        b = self.weight_basis
        return (b * np.asarray(self.weights, dtype=float)) @ dag(b)

    def spin_unitary(self, axis, angle: float) -> np.ndarray:
        """``exp(-i angle n.J)``."""
        n = np.asarray(axis, dtype=float)
        n = n / np.linalg.norm(n)
        h = sum(nk * g for nk, g in zip(n, self.generators))
        return expm_hermitian(h, angle)


def finite_representation(elements: Sequence) -> Representation:
    """Finite group given by its list of unitaries (must contain the identity)."""
    els = tuple(as_square(u, name="group element") for u in elements)
    if not els:
        raise InvalidRepresentation("empty element list")
    d = els[0].shape[0]
    eye = np.eye(d)
    for u in els:
        if u.shape != (d, d):
            raise InvalidRepresentation("group elements of different sizes")
        if fro(dag(u) @ u - eye) > UNITARY_TOL:
            raise InvalidRepresentation("group element is not unitary")
    if not any(fro(u - eye) <= UNITARY_TOL for u in els):
        raise InvalidRepresentation("element list does not contain the identity")
    return Representation("finite", d, elements=els)


def phase_representation(weights: Sequence[int], basis=None) -> Representation:
    """``U(theta) = B diag(exp(i n_k theta)) B^dagger`` with integer weights ``n``."""
    w = np.asarray(weights)
    if w.ndim != 1 or w.size == 0:
        raise InvalidRepresentation("weights must be a non-empty vector")
    if not np.all(np.isclose(w, np.round(w), atol=0)):
        raise InvalidRepresentation("phase weights must be integers")
    if basis is not None:
        basis = as_square(basis, w.size, "weight basis")
        if fro(dag(basis) @ basis - np.eye(w.size)) > UNITARY_TOL:
            raise InvalidRepresentation("weight basis is not unitary")
    return Representation("phase", int(w.size), weights=tuple(int(x) for x in np.round(w)), basis=basis)


def spin_generators(j: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Standard ``(J_x, J_y, J_z)`` of spin ``j`` in the basis ``m = j, j-1, ..., -j``."""
    two_j = 2 * j
    if two_j < 0 or abs(two_j - round(two_j)) > 1e-12:
        raise InvalidJ(f"spin must be a non-negative half-integer, got {j!r}")
    n = int(round(two_j)) + 1
    m = j - np.arange(n)
    jz = np.diag(m).astype(complex)
    # <m+1| J_+ |m> = sqrt(j(j+1) - m(m+1))
    jp = np.zeros((n, n), dtype=complex)
    for k in range(1, n):
        jp[k - 1, k] = np.sqrt(j * (j + 1) - m[k] * (m[k] + 1))
    jx = 0.5 * (jp + dag(jp))
    jy = -0.5j * (jp - dag(jp))
    return jx, jy, jz


def lie_representation(generators: Sequence, j: float | None = None) -> Representation:
    """Representation of SU(2) through Hermitian generators obeying ``[J_x, J_y] = i J_z``."""
    gs = tuple(hermitize(g) for g in generators)
    if len(gs) != 3:
        raise InvalidRepresentation("need exactly three generators")
    d = gs[0].shape[0]
    for a, b, c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        if fro(commutator(gs[a], gs[b]) - 1j * gs[c]) > 1e-10:
            raise InvalidRepresentation("generators violate the su(2) commutation relations")
    return Representation("spin", d, generators=gs, j=j)


def spin_representation(j: float) -> Representation:
    return lie_representation(spin_generators(j), j=j)


def conjugate_rep(rep: Representation, r: ReferenceState) -> Representation:
    """``g -> conj(U(g))``, conjugation entrywise in the eigenbasis of ``r``."""
    if rep.dim != r.dim:
        raise DimensionMismatch(f"representation on dimension {rep.dim}, reference on {r.dim}")
    if rep.kind == "finite":
        return Representation("finite", rep.dim, elements=tuple(conj_in_basis(r, u) for u in rep.elements))
    if rep.kind == "phase":
        b = r.basis
        new_basis = b @ (dag(b) @ rep.weight_basis).conj()
        if fro(new_basis - np.eye(rep.dim)) <= 1e-12:
            new_basis = None
        return Representation("phase", rep.dim, weights=tuple(-w for w in rep.weights), basis=new_basis)
    if rep.kind == "spin":
        gens = tuple(-conj_in_basis(r, g) for g in rep.generators)
        return Representation("spin", rep.dim, generators=gens, j=rep.j)
    raise InvalidRepresentation(f"unknown representation kind {rep.kind!r}")


@dataclass(frozen=True)
class CovarianceReport:
    residual: float
    covariant: bool
    elements_tested: int
    invariant_reference: bool = True

    def as_dict(self) -> dict:
        return {"pass": self.covariant, "residual": self.residual, "elements_tested": self.elements_tested}


def _same_group(a: Representation, b: Representation) -> None:
    if a.kind != b.kind:
        raise InvalidRepresentation(f"representations of different kinds: {a.kind} vs {b.kind}")
    if a.kind == "finite" and len(a.elements) != len(b.elements):
        raise InvalidRepresentation("finite representations must list the same number of elements")


def joint_weight_spread(rep_a: Representation, rep_b: Representation) -> int:
    """Spread of the weights ``b - a`` carried by ``conj(U) (x) V``."""
    return (max(rep_a.weights) - min(rep_a.weights)) + (max(rep_b.weights) - min(rep_b.weights))


def phase_angles(rep_a: Representation, rep_b: Representation, n: int | None = None) -> np.ndarray:
    """``2 pi k / N``, by default with ``N = spread + 1``.

    Conjugation by ``conj(U) (x) V`` multiplies each matrix entry by a single
    frequency ``|f| <= spread``; no such nonzero frequency is a multiple of
    ``N``, so the average over these angles is the exact Haar average and a
    commutator vanishing at all of them vanishes identically.
    """
    if n is None:
        n = joint_weight_spread(rep_a, rep_b) + 1
    return 2 * np.pi * np.arange(n) / n


def _paired_unitaries(rep_a: Representation, rep_b: Representation, n: int | None = None):
    if rep_a.kind == "finite":
        return list(zip(rep_a.elements, rep_b.elements))
    if rep_a.kind == "phase":
        return [(rep_a.phase_unitary(t), rep_b.phase_unitary(t)) for t in phase_angles(rep_a, rep_b, n)]
    axes = np.eye(3)
    return [
        (rep_a.spin_unitary(ax, SPIN_PROBE_ANGLE), rep_b.spin_unitary(ax, SPIN_PROBE_ANGLE))
        for ax in axes
    ]


def joint_generators(conj_a: Representation, rep_b: Representation) -> list[np.ndarray]:
    """Generators of ``conj(U) (x) V`` for spin representations."""
    ia, ib = np.eye(conj_a.dim), np.eye(rep_b.dim)
    return [np.kron(ga, ib) + np.kron(ia, gb) for ga, gb in zip(conj_a.generators, rep_b.generators)]


def invariance_residual(rep: Representation, rho) -> float:
    """How far ``rho`` is from being invariant under ``rep`` (max Frobenius over tested elements)."""
    rho = np.asarray(rho.matrix if isinstance(rho, ReferenceState) else rho)
    if rep.kind == "spin":
        return max(fro(commutator(g, rho)) for g in rep.generators)
    if rep.kind == "finite":
        us = rep.elements
    else:
        us = [rep.phase_unitary(t) for t in phase_angles(rep, rep)]
    return max(fro(u @ rho @ dag(u) - rho) for u in us)


def _check_dims(c: Channel, rep_a: Representation, rep_b: Representation, r: ReferenceState) -> None:
    if rep_a.dim != c.d_in or r.dim != c.d_in:
        raise DimensionMismatch("input representation/reference do not match the channel input")
    if rep_b.dim != c.d_out:
        raise DimensionMismatch("output representation does not match the channel output")


def check_covariance(
    c: Channel, rep_a: Representation, rep_b: Representation, r: ReferenceState, tol: float = COVARIANCE_TOL
) -> CovarianceReport:
    """Decide covariance of ``c`` from its Choi state relative to ``r``."""
    _check_dims(c, rep_a, rep_b, r)
    _same_group(rep_a, rep_b)
    s = choi_from_channel(c, r).matrix
    conj_a = conjugate_rep(rep_a, r)
    invariant = invariance_residual(rep_a, r.matrix) <= INVARIANCE_TOL

    if invariant and rep_a.kind == "spin":
        gens = joint_generators(conj_a, rep_b)
        res = max(fro(commutator(g, s)) for g in gens)
        return CovarianceReport(res, res <= tol, len(gens), True)

    n = None
    if rep_a.kind == "phase" and not invariant:
        # both sides are trigonometric polynomials; the displaced vector adds
        # frequencies up to twice the input spread
        f = max(joint_weight_spread(rep_a, rep_b), 2 * (max(rep_a.weights) - min(rep_a.weights)))
        n = 2 * f + 1
    pairs = _paired_unitaries(rep_a, rep_b, n)
    conj_pairs = _paired_unitaries(conj_a, rep_b, n)
    omega = gns_vector(r)
    res = 0.0
    for (u, _), (ubar, v) in zip(pairs, conj_pairs):
        w = np.kron(ubar, v)
        if invariant:
            res = max(res, fro(w @ s - s @ w))
        else:
            displaced = dag(np.kron(u, ubar)) @ omega
            res = max(res, fro(dag(w) @ s @ w - choi_from_vector(c, displaced)))
    return CovarianceReport(res, res <= tol, len(pairs), invariant)


def commutant_projector(gens: Sequence[np.ndarray]) -> np.ndarray:
    """Orthonormal basis (columns, row-major vec) of ``{X : [G, X] = 0 for all G}``."""
    d = gens[0].shape[0]
    eye = np.eye(d)
    m = np.vstack([np.kron(g, eye) - np.kron(eye, g.T) for g in gens])
    return nullspace(m, NULLSPACE_RTOL)


def _project(q: np.ndarray, x: np.ndarray) -> np.ndarray:
    d = x.shape[0]
    y = (q @ (dag(q) @ x.reshape(-1))).reshape(d, d)
    return 0.5 * (y + dag(y))


def _group_average(x: np.ndarray, unitaries: Sequence[np.ndarray]) -> np.ndarray:
    acc = np.zeros_like(x, dtype=complex)
    for w in unitaries:
        acc += dag(w) @ x @ w
    acc /= len(unitaries)
    return 0.5 * (acc + dag(acc))


def twirl_matrix(s: np.ndarray, conj_a: Representation, rep_b: Representation) -> np.ndarray:
    """Project an operator on ``H (x) K`` onto the commutant of ``conj(U) (x) V``."""
    if conj_a.kind == "spin":
        return _project(commutant_projector(joint_generators(conj_a, rep_b)), s)
    return _group_average(s, [np.kron(ua, vb) for ua, vb in _paired_unitaries(conj_a, rep_b)])


def twirl(obj, rep_a: Representation, rep_b: Representation, r: ReferenceState | None = None):
    """Group-average a channel or a Choi state; returns the same kind of object.

    ``rho0`` must be invariant under ``rep_a``, otherwise the average would
    leave the set of Choi states with margin ``rho0``.
    """
    if isinstance(obj, ChoiState):
        s = obj
        r = s.ref if r is None else r
        if r is not s.ref and fro(r.matrix - s.ref.matrix) > 1e-12:
            raise DimensionMismatch("reference state differs from the Choi state's reference")
    elif isinstance(obj, Channel):
        if r is None:
            raise ValueError("twirling a channel needs a reference state")
        s = choi_from_channel(obj, r)
    else:
        raise TypeError(f"cannot twirl {type(obj).__name__}")
    if rep_a.dim != s.d_in or rep_b.dim != s.d_out:
        raise DimensionMismatch("representation dimensions do not match the channel")
    _same_group(rep_a, rep_b)
    inv = invariance_residual(rep_a, r.matrix)
    if inv > INVARIANCE_TOL:
        raise NonInvariantReference(f"reference state is not invariant (residual {inv:.3e})")
    out = ChoiState(s.d_in, s.d_out, s.ref, twirl_matrix(s.matrix, conjugate_rep(rep_a, r), rep_b))
    return channel_from_choi(out) if isinstance(obj, Channel) else out


def invariantize_state(rho, rep: Representation) -> ReferenceState:
    """Group-averaged version of a faithful state, as a reference state."""
    rho = density_matrix(rho)
    if np.linalg.eigvalsh(rho)[0] < 1e-12:
        raise NotFaithful("invariantize_state needs a faithful state")
    if rep.dim != rho.shape[0]:
        raise DimensionMismatch("representation and state dimensions differ")
    if rep.kind == "spin":
        avg = _project(commutant_projector(list(rep.generators)), rho)
    else:
        us = rep.elements if rep.kind == "finite" else [rep.phase_unitary(t) for t in phase_angles(rep, rep)]
        avg = _group_average(rho, [dag(u) for u in us])
    return make_reference(avg / np.trace(avg).real)


def check_modular_covariance(
    c: Channel,
    r: ReferenceState,
    h=None,
    sigma0=None,
    tol: float = COVARIANCE_TOL,
    times: Sequence[float] = (0.1, 1.0, np.pi),
) -> CovarianceReport:
    """Covariance under the modular flow of ``rho0`` on the input side.

    The output flow is ``beta_t(B) = exp(-itH) B exp(itH)``, so ``H = -log sigma0``
    is the modular flow of a faithful ``sigma0`` (pass ``sigma0`` directly for
    that case).  The test is ``[log rho0 (x) 1 + 1 (x) H, S] = 0`` plus
    finite-time spot checks of ``(rho0^{-it} (x) e^{-itH}) S = S (rho0^{-it} (x) e^{-itH})``.
    """
    if r.dim != c.d_in:
        raise DimensionMismatch("reference does not match channel input")
    if sigma0 is not None:
        sigma = make_reference(sigma0)
        if sigma.dim != c.d_out:
            raise DimensionMismatch("sigma0 does not match channel output")
        h = -sigma.log
    if h is None:
        raise ValueError("either h or sigma0 is required")
    h = hermitize(as_square(h, c.d_out, "H"))
    s = choi_from_channel(c, r).matrix
    gen = np.kron(r.log, np.eye(c.d_out)) + np.kron(np.eye(c.d_in), h)
    res = fro(commutator(gen, s))
    for t in times:
        w = expm_hermitian(gen, t)
        res = max(res, fro(w @ s - s @ w))
    if sigma0 is not None:
        x = np.kron(r.inv, sigma.matrix)
        res = max(res, fro(x @ s - s @ x))
    return CovarianceReport(res, res <= tol, len(times) + 1, True)
