"""Purifying sets and non-selective measurement maps.

A set of generators is purified by attaching an ``n``-level auxiliary system and
tagging generator ``j`` with the projector ``|j><j|`` (auxiliary indices run
``0..n-1``).  The tagged generators act on orthogonal auxiliary sectors and
therefore commute.  Measuring the auxiliary system non-selectively in a basis
mutually unbiased to ``{|j>}`` recovers any single original generator.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .gkls import GklsGenerator, assemble
from .linalg import (
    DEFAULT_TOL,
    as_operator,
    commutator,
    expm,
    fro,
    is_hermitian,
    kron,
    sandwich,
)

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def ket(n: int, j: int) -> np.ndarray:
    v = np.zeros(n, dtype=complex)
    v[j] = 1.0
    return v


def proj(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


# ------------------------------------------------------------- Hamiltonians


def purify_hamiltonian_pair(h1, h2):
    """Commuting qubit-extended pair ``(h1~, h2~)`` and the projector back onto the system.

        h1~ = h1 (x) 1 + h2 (x) sigma_x
        h2~ = h2 (x) 1 + h1 (x) sigma_x
        P   = 1 (x) (1 + sigma_z) / 2
    """
    h1, h2 = as_operator(h1), as_operator(h2)
    if h1.shape != h2.shape:
        raise ValueError(f"dimension mismatch: {h1.shape} vs {h2.shape}")
    if not (is_hermitian(h1) and is_hermitian(h2)):
        raise ValueError("Hamiltonians must be Hermitian")
    i2 = np.eye(2)
    ht1 = kron(h1, i2) + kron(h2, SIGMA_X)
    ht2 = kron(h2, i2) + kron(h1, SIGMA_X)
    p = kron(np.eye(h1.shape[0]), (i2 + SIGMA_Z) / 2)
    return ht1, ht2, p


def hamiltonian_zeno(ht, p, t: float, n_steps: int) -> np.ndarray:
    """``(P exp(-i ht t/N) P)^N`` for ``N = n_steps`` projective measurements."""
    ht, p = as_operator(ht), as_operator(p)
    step = p @ expm(-1j * ht, t / n_steps) @ p
    return np.linalg.matrix_power(step, n_steps)


# -------------------------------------------------------------- Lindbladians


@dataclass(frozen=True, eq=False)
class PurifiedSet:
    generators: tuple[GklsGenerator, ...]
    system_dim: int
    aux_dim: int

    def superops(self) -> list[np.ndarray]:
        return [assemble(g) for g in self.generators]

    def commutator_norms(self) -> dict[tuple[int, int], float]:
        """Frobenius norms of all pairwise superoperator commutators."""
        ss = self.superops()
        return {(i, j): fro(commutator(ss[i], ss[j])) for i, j in combinations(range(len(ss)), 2)}

    def max_commutator_norm(self) -> float:
        return max(self.commutator_norms().values(), default=0.0)


def purify_lindbladians(gens) -> PurifiedSet:
    """Mutually commuting extensions ``H~_j = n H_j (x) |j><j|``, ``L~ = sqrt(n) L (x) |j><j|``."""
    gens = list(gens)
    if not gens:
        raise ValueError("at least one generator is required")
    d = gens[0].dim
    if any(g.dim != d for g in gens):
        raise ValueError("all generators must act on the same system dimension")
    n = len(gens)
    out = []
    for j, g in enumerate(gens):
        tag = proj(ket(n, j))
        out.append(
            GklsGenerator(
                n * kron(g.hamiltonian, tag),
                tuple(np.sqrt(n) * kron(l, tag) for l in g.lindblad_ops),
            )
        )
    return PurifiedSet(tuple(out), d, n)


# ------------------------------------------------------ measurement bases


def fourier_mub(n: int) -> list[np.ndarray]:
    """Discrete Fourier basis ``|phi_k> = n^-1/2 sum_j exp(2 pi i j k / n) |j>``.

    Unbiased with respect to the computational basis.
    """
    if n < 1:
        raise ValueError("basis size must be at least 1")
    j = np.arange(n)
    return [np.exp(2j * np.pi * j * k / n) / np.sqrt(n) for k in range(n)]


@dataclass(frozen=True, eq=False)
class Superprojector:
    """Non-selective measurement ``X -> sum_k P_k X P_k``."""

    projectors: tuple[np.ndarray, ...]
    superop: np.ndarray

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]

    def __call__(self, x) -> np.ndarray:
        x = as_operator(x)
        return sum(p @ x @ p for p in self.projectors)


def superprojector_from_projectors(projectors, tol: float = DEFAULT_TOL) -> Superprojector:
    projectors = tuple(as_operator(p) for p in projectors)
    if not projectors:
        raise ValueError("empty projector family")
    dim = projectors[0].shape[0]
    for a, p in enumerate(projectors):
        if p.shape != (dim, dim) or not is_hermitian(p, tol):
            raise ValueError("projectors must be Hermitian and of equal dimension")
        for b, q in enumerate(projectors):
            target = p if a == b else np.zeros_like(p)
            if np.abs(p @ q - target).max() > tol:
                raise ValueError("projectors are not mutually orthogonal idempotents")
    if np.abs(sum(projectors) - np.eye(dim)).max() > tol:
        raise ValueError("projectors do not resolve the identity")
    superop = sum(sandwich(p, p) for p in projectors)
    return Superprojector(projectors, superop)


def superprojector_from_basis(d_sys: int, basis, tol: float = DEFAULT_TOL) -> Superprojector:
    """Measure the auxiliary factor in ``basis``: ``P_k = 1_sys (x) |phi_k><phi_k|``."""
    basis = [np.asarray(v, dtype=complex).ravel() for v in basis]
    n = len(basis)
    if n == 0 or any(v.size != n for v in basis):
        raise ValueError("basis must contain n vectors of length n")
    gram = np.array([[np.vdot(a, b) for b in basis] for a in basis])
    if np.abs(gram - np.eye(n)).max() > tol:
        raise ValueError("basis is not orthonormal")
    return superprojector_from_projectors(
        [kron(np.eye(d_sys), proj(v)) for v in basis], tol
    )


def mub_superprojector(d_sys: int, d_aux: int) -> Superprojector:
    return superprojector_from_basis(d_sys, fourier_mub(d_aux))


def identity_superprojector(dim: int) -> Superprojector:
    return superprojector_from_projectors([np.eye(dim)])


def lift_generator(g: GklsGenerator, d_aux: int) -> GklsGenerator:
    """The same generator acting as ``G (x) id`` on system (x) auxiliary."""
    eye = np.eye(d_aux)
    return GklsGenerator(kron(g.hamiltonian, eye), tuple(kron(l, eye) for l in g.lindblad_ops))
