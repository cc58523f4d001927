"""Transposed (Petz-type) channels and commutant duals.

For a unital channel ``Phi`` and a faithful ``rho0`` with output state
``rho1 = Phi_*(rho0)``, the transpose ``Phi^T`` is the unital CP map fixed by

    rho1^{1/2} Phi^T(A) rho1^{1/2} = Phi_*(rho0^{1/2} A rho0^{1/2}).

When ``rho1`` is not faithful the channel is first compressed to the support
of ``rho1``; the compression loses nothing since every Kraus operator already
maps into that support.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import Channel, apply_heisenberg, apply_schrodinger, is_unital
from .choi import channel_from_choi, choi_from_channel, choi_from_schrodinger
from .errors import DimensionMismatch, NonUnitalInput
from .linalg import dag, fro, herm_eig, phase_fix
from .states import ReferenceState, make_reference, transpose_in_basis

SUPPORT_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class TransposePair:
    """A channel, its transpose, and the reference states tying them together.

    ``original`` is the support-compressed channel; ``isometry`` embeds the
    compressed output space into the original one (identity when nothing
    was removed).  ``transposed`` maps observables on ``C^d_in`` to
    observables on the compressed output space.
    """

    original: Channel
    transposed: Channel
    rho0: ReferenceState
    rho1: ReferenceState
    isometry: np.ndarray

    @property
    def residual(self) -> float:
        return defining_relation_residual(self.original, self.transposed, self.rho0, self.rho1)


def output_state(c: Channel, r: ReferenceState) -> np.ndarray:
    """``rho1 = Phi_*(rho0)``."""
    return apply_schrodinger(c, r.matrix)


def restrict_to_support(c: Channel, r: ReferenceState) -> tuple[Channel, np.ndarray]:
    """Compress the output of ``c`` to the support of ``Phi_*(rho0)``.

    Returns the compressed channel and the isometry ``P`` (``d_out x rank``)
    with ``K_l = P P^dagger K_l``.
    """
    if r.dim != c.d_in:
        raise DimensionMismatch(f"reference on dimension {r.dim}, channel input {c.d_in}")
    w, v = herm_eig(output_state(c, r))
    keep = w > SUPPORT_FLOOR
    if keep.all():
        return c, np.eye(c.d_out, dtype=complex)
    p = phase_fix(v[:, keep])
    return Channel(c.d_in, p.shape[1], tuple(dag(p) @ k for k in c.kraus)), p


def _checked(c: Channel, r: ReferenceState) -> tuple[Channel, np.ndarray, ReferenceState]:
    ok, res = is_unital(c)
    if not ok:
        raise NonUnitalInput(f"transpose needs a unital channel (residual {res:.3e})")
    cp, p = restrict_to_support(c, r)
    rho1 = make_reference(output_state(cp, r))
    return cp, p, rho1


def transpose_channel(c: Channel, r: ReferenceState) -> TransposePair:
    """``rho0``-transpose of a unital channel.

    The Kraus operators ``rho0^{1/2} K_l^dagger rho1^{-1/2}`` realise the
    defining relation directly; a minimal set is then read off their Choi
    state relative to ``rho1``.
    """
    cp, p, rho1 = _checked(c, r)
    raw = Channel(cp.d_out, cp.d_in, tuple(r.sqrt @ dag(k) @ rho1.inv_sqrt for k in cp.kraus))
    transposed = channel_from_choi(choi_from_channel(raw, rho1))
    return TransposePair(cp, transposed, r, rho1, p)


def commutant_dual(c: Channel, r: ReferenceState) -> Channel:
    """``Phi^#(A) = (Phi^T(A^T))^T'`` with ``T`` in the ``rho0`` and ``T'`` in the ``rho1`` eigenbasis."""
    pair = transpose_channel(c, r)
    rho0, rho1, tr = pair.rho0, pair.rho1, pair.transposed

    def heisenberg(a):
        return transpose_in_basis(rho1, apply_heisenberg(tr, transpose_in_basis(rho0, a)))

    # Schrodinger action is the Hilbert-Schmidt adjoint of the Heisenberg one
    d_in, d_out = tr.d_in, tr.d_out
    sup = np.zeros((d_in * d_in, d_out * d_out), dtype=complex)
    for i in range(d_out):
        for j in range(d_out):
            unit = np.zeros((d_out, d_out), dtype=complex)
            unit[i, j] = 1.0
            sup[:, i * d_out + j] = heisenberg(unit).reshape(-1)
    schro = dag(sup)

    def schrodinger(t):
        return (schro @ t.reshape(-1)).reshape(d_out, d_out)

    return channel_from_choi(choi_from_schrodinger(schrodinger, d_in, d_out, rho1))


def defining_relation_residual(
    original: Channel, transposed: Channel, rho0: ReferenceState, rho1: ReferenceState
) -> float:
    """Largest Frobenius violation of the defining relation over all matrix units ``A``."""
    d = original.d_in
    worst = 0.0
    for i in range(d):
        for j in range(d):
            a = np.zeros((d, d), dtype=complex)
            a[i, j] = 1.0
            lhs = rho1.sqrt @ apply_heisenberg(transposed, a) @ rho1.sqrt
            rhs = apply_schrodinger(original, rho0.sqrt @ a @ rho0.sqrt)
            worst = max(worst, fro(lhs - rhs))
    return worst
