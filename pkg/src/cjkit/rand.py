"""Seeded random states, unitaries and unital channels for tests and demos."""
from __future__ import annotations

import numpy as np
from scipy.stats import unitary_group

from .channel import Channel
from .linalg import dag
from .states import ReferenceState, make_reference


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    return unitary_group.rvs(d, random_state=rng) if d > 1 else np.exp(2j * np.pi * rng.random()) * np.ones((1, 1))


def random_density(d: int, rng: np.random.Generator, floor: float = 0.05) -> np.ndarray:
    """Ginibre state mixed with ``floor * I/d`` so the smallest eigenvalue stays away from zero."""
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = g @ dag(g)
    rho = rho / np.trace(rho).real
    return (1.0 - floor) * rho + floor * np.eye(d) / d


def random_reference(d: int, rng: np.random.Generator, floor: float = 0.05) -> ReferenceState:
    return make_reference(random_density(d, rng, floor))


def random_channel(d_in: int, d_out: int, rng: np.random.Generator, n_kraus: int | None = None) -> Channel:
    """Random unital channel: an isometry ``C^d_in -> C^n (x) C^d_out`` cut into Kraus blocks."""
    n = int(rng.integers(1, d_in * d_out + 1)) if n_kraus is None else n_kraus
    n = max(n, -(-d_in // d_out))  # an isometry needs n * d_out >= d_in
    g = rng.normal(size=(n * d_out, d_in)) + 1j * rng.normal(size=(n * d_out, d_in))
    q, _ = np.linalg.qr(g)
    return Channel(d_in, d_out, tuple(q[i * d_out:(i + 1) * d_out] for i in range(n)))
