"""Dynamical Lie algebras of superoperator generators over the reals.

The algebra generated by a set ``S`` is spanned by left-nested brackets
``[s1, [s2, [..., sk]]]`` with every ``s_i`` in ``S``.  :func:`lie_closure` grows
an orthonormal basis breadth first by bracketing each newly accepted element
with the generators only, which is enough to reach the full algebra.
:func:`closure_defect` checks closure under all pairwise brackets a posteriori.
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np

from .gkls import (
    GklsGenerator,
    assemble,
    dissipator_superop,
    generalized_dissipator,
    hamiltonian_superop,
)
from .linalg import (
    RANK_TOL,
    orth_residual,
    commutator,
    fro,
    realify,
    real_span_rank,
    span_residual,
    superop_dim,
)
from .purification import PurifiedSet, purify_lindbladians
from .rand import ginibre, rng_from

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class LieBasis:
    """Basis of a dynamical Lie algebra over the reals.

    ``elements`` are the normalized brackets that entered the span (the
    pre-images); ``basis`` holds their Gram-Schmidt orthonormalization as
    realified rows of length ``2 d**4``.  ``generation_log[i]`` is either
    ``("generator", k)`` or ``("bracket", k, m)`` for ``[generator k, element m]``;
    ``levels[i]`` is the bracket depth.

    ``min_accepted`` and ``max_rejected`` bracket the rank decisions: a wide gap
    between them around ``tol`` means the reported dimension is trustworthy.
    """

    dim_operator: int
    elements: list[np.ndarray] = field(default_factory=list)
    basis: np.ndarray | None = None
    generation_log: list[tuple] = field(default_factory=list)
    levels: list[int] = field(default_factory=list)
    converged: bool = True
    tol: float = RANK_TOL
    min_accepted: float = np.inf
    max_rejected: float = 0.0

    @property
    def dimension(self) -> int:
        return len(self.elements)

    def level_counts(self) -> dict[int, int]:
        return dict(sorted(Counter(self.levels).items()))

    def summary(self) -> dict:
        return {
            "dimension": self.dimension,
            "converged": self.converged,
            "levels": {str(k): v for k, v in self.level_counts().items()},
            "min_accepted_residual": float(self.min_accepted),
            "max_rejected_residual": float(self.max_rejected),
        }


def _screen(rows: np.ndarray, cands, tol: float) -> tuple[list[int], float]:
    """Candidates that may be independent of ``rows`` (batched, loose threshold).

    Also returns the largest residual among the candidates screened out.
    """
    mat = np.array([realify(c) for c in cands])
    norms = np.linalg.norm(mat, axis=1)
    keep = norms > tol
    mat[keep] /= norms[keep, None]
    if rows.shape[0]:
        mat = mat - (mat @ rows.T) @ rows
    res = np.where(keep, np.linalg.norm(mat, axis=1), 0.0)
    passed = res > 0.1 * tol
    dropped = float(res[~passed].max()) if (~passed).any() else 0.0
    return [int(k) for k in np.flatnonzero(passed)], dropped


def lie_closure(generators, tol: float = RANK_TOL, max_dim: int | None = None) -> LieBasis:
    """Real Lie algebra generated by superoperators.

    Generators are normalized to unit Frobenius norm.  Each accepted element
    is bracketed with the independent generators, breadth first; a bracket
    joins the basis when its normalized residual against the current span
    exceeds ``tol``.  Brackets are taken between the raw normalized elements,
    not their orthogonalized residuals, so rounding noise is never amplified
    by renormalization.

    Stops when a level adds nothing (``converged=True``) or when an
    independent candidate would exceed ``max_dim`` (``converged=False``).
    ``max_dim`` defaults to ``d**4``.
    """
    gens = [np.asarray(g, dtype=complex) for g in generators]
    if not gens:
        raise ValueError("at least one generator is required")
    d = superop_dim(gens[0])
    if any(g.shape != gens[0].shape for g in gens):
        raise ValueError("generators must share one dimension")
    if max_dim is None:
        max_dim = d**4

    out = LieBasis(d, basis=np.zeros((0, 2 * gens[0].size)), tol=tol)

    def add(c, origin, level) -> bool:
        nc = fro(c)
        if nc <= tol:
            return False
        r = orth_residual(out.basis, realify(c / nc))
        nr = float(np.linalg.norm(r))
        if nr <= tol:
            out.max_rejected = max(out.max_rejected, nr)
            return False
        if out.dimension >= max_dim:
            out.converged = False
            return False
        out.basis = np.vstack([out.basis, r / nr])
        out.elements.append(c / nc)
        out.generation_log.append(origin)
        out.levels.append(level)
        out.min_accepted = min(out.min_accepted, nr)
        return True

    for k, g in enumerate(gens):
        add(g, ("generator", k), 0)
    # brackets with a spanning subset of the generators reach the same algebra
    active = [(origin[1], out.elements[i]) for i, origin in enumerate(out.generation_log)]
    frontier = list(range(out.dimension))
    level = 0
    while frontier and out.converged:
        level += 1
        new = []
        for m in frontier:
            brackets = [commutator(g, out.elements[m]) for _, g in active]
            survivors, dropped = _screen(out.basis, brackets, tol)
            out.max_rejected = max(out.max_rejected, dropped)
            for i in survivors:
                if add(brackets[i], ("bracket", active[i][0], m), level):
                    new.append(out.dimension - 1)
                if not out.converged:
                    break
            if not out.converged:
                break
        frontier = new
        logger.debug("closure level %d: +%d (dim %d)", level, len(new), out.dimension)
    return out


def closure_defect(lb: LieBasis) -> float:
    """Largest relative residual of any pairwise bracket of basis elements."""
    rows = lb.basis
    worst = 0.0
    if rows is None:
        return worst
    for a, b in combinations(lb.elements, 2):
        c = commutator(a, b)
        if fro(c) > lb.tol:
            worst = max(worst, span_residual(rows, c))
    return worst


# ------------------------------------------------------- the accessible pair


def chain_hamiltonian(d: int) -> np.ndarray:
    """Nearest-neighbour hopping ``sum_j |j><j+1| + h.c.``."""
    h = np.zeros((d, d), dtype=complex)
    idx = np.arange(d - 1)
    h[idx, idx + 1] = 1.0
    h[idx + 1, idx] = 1.0
    return h


def unit(d: int, i: int, j: int) -> np.ndarray:
    e = np.zeros((d, d), dtype=complex)
    e[i, j] = 1.0
    return e


def accessible_pair(d: int) -> tuple[GklsGenerator, GklsGenerator]:
    """Drift ``-i ad_H0 + D_{|0><1|}`` and control ``-i ad_{|0><0|}`` on ``d`` levels."""
    if d < 2:
        raise ValueError("the accessible pair needs d >= 2")
    l0 = GklsGenerator(chain_hamiltonian(d), (unit(d, 0, 1),))
    k = GklsGenerator(unit(d, 0, 0))
    return l0, k


def purified_pair(d: int) -> PurifiedSet:
    """Purification of the accessible pair, control on auxiliary level 0, drift on level 1."""
    l0, k = accessible_pair(d)
    return purify_lindbladians([k, l0])


def gkls_spanning_set(d: int) -> list[np.ndarray]:
    """Hamiltonian parts for a Hermitian basis plus dissipators whose polarizations reach every Kossakowski term."""
    out = []
    for i in range(d):
        for j in range(i, d):
            e = unit(d, i, j)
            out.append(hamiltonian_superop(e + e.conj().T))
            if i != j:
                out.append(hamiltonian_superop(1j * (e - e.conj().T)))
    units = [unit(d, i, j) for i in range(d) for j in range(d)]
    out += [dissipator_superop(e) for e in units]
    for a, b in combinations(units, 2):
        out.append(dissipator_superop(a + b))
        out.append(dissipator_superop(a + 1j * b))
    return out


@lru_cache(maxsize=None)
def full_gkls_dim(d: int, tol: float = RANK_TOL) -> int:
    """Dimension of the Lie algebra generated by all Lindbladians on ``d`` levels."""
    if d < 2:
        raise ValueError("d must be at least 2")
    return lie_closure(gkls_spanning_set(d), tol).dimension


# ------------------------------------------------------ quartet construction


def quartet_operators(d: int, quartet) -> list[tuple[tuple[int, ...], str, np.ndarray]]:
    """Symmetric and antisymmetric pairs of elementary dissipators on a four-level subset.

    Returns ``((i, j, k, l), kind, superop)`` with ``kind`` ``"+"`` for
    ``D_{ij,kl} + D_{kl,ij}`` and ``"-"`` for ``i (D_{ij,kl} - D_{kl,ij})``, where
    ``D_{ij,kl}`` is the generalized dissipator of ``|i><j|`` and ``|k><l|``.
    Identically vanishing operators are skipped.
    """
    out = []
    q = list(quartet)
    for i in q:
        for j in q:
            for k in q:
                for l in q:
                    a, b = unit(d, i, j), unit(d, k, l)
                    dab = generalized_dissipator(a, b)
                    dba = generalized_dissipator(b, a)
                    for kind, s in (("+", dab + dba), ("-", 1j * (dab - dba))):
                        if fro(s) > 0:
                            out.append(((i, j, k, l), kind, s))
    return out


def quartet_unitary_columns(d: int, quartet, rng) -> tuple[np.ndarray, np.ndarray]:
    """Images ``U|0>``, ``U|1>`` of a random unitary supported on ``quartet``."""
    q = list(quartet)
    z, _ = np.linalg.qr(ginibre(rng, (len(q), 2)))
    u = np.zeros(d, dtype=complex)
    v = np.zeros(d, dtype=complex)
    u[q] = z[:, 0]
    v[q] = z[:, 1]
    return u, v


@dataclass
class QuartetReport:
    d: int
    quartet: tuple[int, ...]
    n_unitaries: int
    seed: int
    span_rank: int
    target_rank: int
    n_operators: int
    max_residual: float
    n_failing: int
    worst: tuple | None
    kossakowski_error: float | None
    passed: bool
    tol: float


def quartet_generators(d: int, quartet, n_unitaries: int, rng) -> list[np.ndarray]:
    q = list(quartet)
    gens = []
    for a in q:
        for b in q:
            if a <= b:
                e = unit(d, a, b)
                gens.append(hamiltonian_superop(e + e.conj().T))
                if a != b:
                    gens.append(hamiltonian_superop(1j * (e - e.conj().T)))
    for _ in range(n_unitaries):
        u, v = quartet_unitary_columns(d, quartet, rng)
        gens.append(dissipator_superop(np.outer(u, v.conj())))
    return gens


def kossakowski_fit(target: np.ndarray, ops) -> tuple[np.ndarray, float]:
    """Real least-squares coefficients of ``target`` over ``ops`` and the relative reconstruction error."""
    a = np.array([realify(s) for s in ops]).T
    b = realify(target)
    coef, *_ = np.linalg.lstsq(a, b, rcond=None)
    err = np.linalg.norm(a @ coef - b) / np.linalg.norm(b)
    return coef, float(err)


def random_lindbladian_on(d: int, quartet, rng, n_ops: int = 3) -> np.ndarray:
    """Random GKLS generator whose Hamiltonian and jump operators live on ``quartet``."""
    q = list(quartet)
    m = len(q)
    sub = np.ix_(q, q)
    h = np.zeros((d, d), dtype=complex)
    g = ginibre(rng, (m, m))
    h[sub] = (g + g.conj().T) / 2
    ops = []
    for _ in range(n_ops):
        l = np.zeros((d, d), dtype=complex)
        l[sub] = ginibre(rng, (m, m))
        ops.append(l)
    return assemble(GklsGenerator(h, tuple(ops)))


def quartet_span_check(
    d: int,
    n_unitaries: int = 256,
    seed: int = 0,
    quartet=None,
    tol: float = RANK_TOL,
) -> QuartetReport:
    """Check that conjugated dissipators plus quartet Hamiltonians span the quartet dissipator family.

    Spans ``D_{U|0><1|U^dag}`` for ``n_unitaries`` random unitaries acting on
    the quartet together with ``-i ad_H`` over a Hermitian basis on the quartet,
    then projects each operator from :func:`quartet_operators` onto that span.
    A random Lindbladian on the quartet is also fitted by those operators.
    """
    if d < 4:
        raise ValueError("a quartet needs d >= 4")
    quartet = tuple(range(4)) if quartet is None else tuple(int(i) for i in quartet)
    if len(set(quartet)) != 4 or not all(0 <= i < d for i in quartet):
        raise ValueError(f"invalid quartet {quartet} for d = {d}")
    rng = rng_from(seed)
    rank, basis = real_span_rank(quartet_generators(d, quartet, n_unitaries, rng), tol)
    ops = quartet_operators(d, quartet)
    target_rank, _ = real_span_rank([s for *_, s in ops], tol)

    residuals = [span_residual(basis, s) for *_, s in ops]
    worst_i = int(np.argmax(residuals))
    max_res = float(residuals[worst_i])
    failing = sum(r >= tol for r in residuals)

    lind = random_lindbladian_on(d, quartet, rng)
    _, kerr = kossakowski_fit(lind, [s for *_, s in ops])

    return QuartetReport(
        d=d,
        quartet=quartet,
        n_unitaries=n_unitaries,
        seed=int(seed) if seed is not None else 0,
        span_rank=rank,
        target_rank=target_rank,
        n_operators=len(ops),
        max_residual=max_res,
        n_failing=failing,
        worst=(ops[worst_i][0], ops[worst_i][1]) if max_res >= tol else None,
        kossakowski_error=kerr,
        passed=max_res < tol and kerr < tol,
        tol=tol,
    )


def commutation_identity_check(h, a) -> float:
    """Residual of ``[-i ad_h, D_a] = (D_{a - i[h,a]} - D_{a + i[h,a]}) / 2``."""
    k = hamiltonian_superop(h)
    da = dissipator_superop(a)
    ha = commutator(h, a)
    lhs = commutator(k, da)
    rhs = 0.5 * dissipator_superop(a - 1j * ha) - 0.5 * dissipator_superop(a + 1j * ha)
    return fro(lhs - rhs)
