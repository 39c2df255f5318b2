"""Seeded random instances for tests, examples and the CLI."""
from __future__ import annotations

import numpy as np

from .gkls import GklsGenerator


def rng_from(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def ginibre(rng, shape) -> np.ndarray:
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def random_hermitian(d: int, rng) -> np.ndarray:
    g = ginibre(rng, (d, d))
    return (g + g.conj().T) / 2


def random_unitary(d: int, rng) -> np.ndarray:
    """Haar unitary via QR of a complex Gaussian matrix with phase fixing."""
    q, r = np.linalg.qr(ginibre(rng, (d, d)))
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_density(d: int, rng, rank: int | None = None) -> np.ndarray:
    g = ginibre(rng, (d, rank or d))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def random_generator(d: int, rng, n_ops: int = 2, scale: float = 0.5) -> GklsGenerator:
    h = random_hermitian(d, rng)
    ops = tuple(scale * ginibre(rng, (d, d)) for _ in range(n_ops))
    return GklsGenerator(h, ops)
