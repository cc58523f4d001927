"""Phase-shift covariant channels on a truncated oscillator.

With ``U(theta) = diag(exp(i m theta))`` on ``C^d`` every channel covariant
under ``U`` on both sides has Kraus operators that shift the number basis by
a fixed amount,

    K_{l,j} |m> = tau_{l,j,m} |m + l>,

and is unital exactly when ``sum_{l,j} |tau_{l,j,m}|^2 = 1`` for every ``m``.
Relative to a number-diagonal reference the Choi state splits into sectors
spanned by ``|m, m+l>``; each sector block factorises as ``sum_j |w_j><w_j|``
with ``w_j[m] = sqrt(t_m) tau_{l,j,m}``.

Shifts of both signs are allowed.  Lowering channels such as amplitude
damping live in the negative sectors.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .channel import Channel
from .choi import ChoiState, RANK_RTOL, choi_from_channel
from .errors import DimensionMismatch, NonDiagonalReference, NormalizationViolation, NotCovariant, TruncationViolation
from .linalg import herm_eig, phase_fix
from .states import ReferenceState
from .symmetry import COVARIANCE_TOL, check_covariance, phase_representation

NORM_TOL = 1e-10
DROP_FLOOR = 1e-14


@dataclass(frozen=True, eq=False)
class TauFamily:
    """Coefficients ``tau[(l, j, m)]`` of a phase-covariant channel on ``C^d``."""

    d: int
    taus: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise DimensionMismatch(f"truncation dimension must be a positive integer, got {self.d!r}")
        clean = {}
        for key, val in self.taus.items():
            l, j, m = (int(x) for x in key)
            if (l, j, m) != tuple(key):
                raise TruncationViolation(f"non-integer index {key!r}")
            if j < 0 or not 0 <= m < self.d:
                raise TruncationViolation(f"index (l={l}, j={j}, m={m}) outside 0 <= m < {self.d}, j >= 0")
            if not 0 <= m + l < self.d:
                raise TruncationViolation(f"tau_(l={l}, j={j}, m={m}) maps |{m}> to |{m + l}>, outside the truncation")
            clean[(l, j, m)] = complex(val)
        norms = self.column_norms(clean, self.d)
        bad = np.flatnonzero(np.abs(norms - 1.0) > NORM_TOL)
        if bad.size:
            m = int(bad[0])
            raise NormalizationViolation(f"sum_(l,j) |tau_(l,j,{m})|^2 = {norms[m]!r}, expected 1")
        object.__setattr__(self, "taus", dict(sorted(clean.items())))

    @staticmethod
    def column_norms(taus: Mapping, d: int) -> np.ndarray:
        out = np.zeros(d)
        for (_, _, m), v in taus.items():
            out[m] += abs(v) ** 2
        return out

    @property
    def labels(self) -> list[tuple[int, int]]:
        """Distinct ``(l, j)`` pairs, one per Kraus operator."""
        return sorted({(l, j) for l, j, _ in self.taus})

    def kraus(self, l: int, j: int) -> np.ndarray:
        k = np.zeros((self.d, self.d), dtype=complex)
        for (ll, jj, m), v in self.taus.items():
            if (ll, jj) == (l, j):
                k[m + l, m] = v
        return k


def rotation_family(d: int, theta0: float) -> TauFamily:
    """``tau_{0,0,m} = exp(i m theta0)``: the channel ``B -> U(theta0)^dagger B U(theta0)``."""
    return TauFamily(d, {(0, 0, m): np.exp(1j * m * theta0) for m in range(d)})


def random_tau_family(d: int, rng: np.random.Generator, max_mult: int = 2, density: float = 0.6) -> TauFamily:
    """A random valid family: random multiplicities per sector, Gaussian coefficients normalised per ``m``."""
    mult = {l: int(rng.integers(0, max_mult + 1)) for l in range(-d + 1, d)}
    mult[0] = max(mult[0], 1)
    taus = {}
    for m in range(d):
        slots = [(l, j) for l in range(-m, d - m) for j in range(mult[l])]
        keep = [s for s in slots if rng.random() < density] or [(0, 0)]
        z = rng.normal(size=len(keep)) + 1j * rng.normal(size=len(keep))
        z /= np.linalg.norm(z)
        for (l, j), v in zip(keep, z):
            taus[(l, j, m)] = v
    return TauFamily(d, taus)


def build_channel(tf: TauFamily) -> Channel:
    return Channel(tf.d, tf.d, tuple(tf.kraus(l, j) for l, j in tf.labels))


def number_phase_rep(d: int):
    return phase_representation(list(range(d)))


def sector_indices(d: int, l: int) -> tuple[np.ndarray, np.ndarray]:
    """Admissible ``m`` for shift ``l`` and the flat indices of ``|m, m+l>``."""
    m = np.arange(max(0, -l), d - max(0, l))
    return m, m * d + (m + l)


@dataclass(frozen=True)
class SectorBlocks:
    d: int
    blocks: dict
    off_sector_mass: float

    def total_trace(self) -> float:
        return float(sum(np.trace(b).real for b in self.blocks.values()))

    def margin_weights(self) -> np.ndarray:
        """``t_m = sum_l <m, m+l| S_l |m, m+l>``."""
        t = np.zeros(self.d)
        for l, b in self.blocks.items():
            m, _ = sector_indices(self.d, l)
            t[m] += np.diag(b).real
        return t


def _require_number_diagonal(r: ReferenceState) -> None:
    if not r.is_diagonal():
        raise NonDiagonalReference("reference state must be diagonal in the number basis")


def sector_decompose(s: ChoiState) -> SectorBlocks:
    if s.d_in != s.d_out:
        raise DimensionMismatch("sector decomposition needs d_in = d_out")
    _require_number_diagonal(s.ref)
    d, m = s.d_in, s.matrix
    blocks = {}
    mask = np.ones(m.shape, dtype=bool)
    for l in range(-d + 1, d):
        _, idx = sector_indices(d, l)
        blocks[l] = m[np.ix_(idx, idx)].copy()
        mask[np.ix_(idx, idx)] = False
    off = float(np.linalg.norm(m[mask]))
    return SectorBlocks(d, blocks, off)


def extract_tau(c: Channel, r: ReferenceState, tol: float = COVARIANCE_TOL) -> TauFamily:
    """Recover a canonical ``tau`` table from a phase-covariant unital channel.

    Within each sector the ``j`` index enumerates block eigenvectors by
    descending eigenvalue, each with its first nonzero component real positive.
    """
    if c.d_in != c.d_out:
        raise DimensionMismatch("phase-covariant channels act on one space")
    _require_number_diagonal(r)
    rep = number_phase_rep(c.d_in)
    report = check_covariance(c, rep, rep, r, tol=tol)
    if not report.covariant:
        raise NotCovariant(f"channel is not phase covariant (residual {report.residual:.3e})")
    sb = sector_decompose(choi_from_channel(c, r))
    d = c.d_in
    t = np.real(np.diag(r.matrix))
    top = max(float(np.linalg.eigvalsh(b)[-1]) for b in sb.blocks.values())
    taus = {}
    for l, block in sb.blocks.items():
        ms, _ = sector_indices(d, l)
        w, v = herm_eig(block)
        keep = np.flatnonzero(w > RANK_RTOL * top)[::-1]
        if keep.size == 0:
            continue
        v = phase_fix(v[:, keep])
        for j, i in enumerate(keep):
            vec = np.sqrt(w[i]) * v[:, j] / np.sqrt(t[ms])
            for m, val in zip(ms, vec):
                if abs(val) > DROP_FLOOR:
                    taus[(l, j, int(m))] = val
    return _renormalised(d, taus)


def _renormalised(d: int, taus: dict) -> TauFamily:
    # rounding in the eigensolver can leave the per-m norms off by ~1e-15;
    # larger defects are real violations and are left for the validator
    norms = TauFamily.column_norms(taus, d)
    scale = np.where(np.abs(norms - 1.0) <= NORM_TOL, 1.0 / np.sqrt(np.where(norms > 0, norms, 1.0)), 1.0)
    return TauFamily(d, {k: v * scale[k[2]] for k, v in taus.items()})
