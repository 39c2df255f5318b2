"""Frequent non-selective measurements interleaved with semigroup dynamics.

``Phi(t, N) = (P o exp(L t/N) o P)^N`` converges to
``Phi(t, inf) = exp((P o L o P) t) o P`` as ``N -> inf``.  The projected
generator ``P o L o P`` is generally *not* of GKLS form; only the composition
with a leading ``P`` is a channel.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .gkls import GklsGenerator, assemble, choi_min_eigenvalue, is_cptp
from .linalg import (
    apply,
    as_operator,
    dagger,
    expm,
    fro,
    is_density,
    kron,
    partial_trace_aux,
    sandwich,
    vec,
    unvec,
)
from .purification import (
    Superprojector,
    lift_generator,
    mub_superprojector,
    proj,
    purify_lindbladians,
    superprojector_from_projectors,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ZenoResult:
    finite_n_map: np.ndarray
    limit_map: np.ndarray
    error: float
    n_steps: int
    t: float


def _check_dims(l: np.ndarray, p: Superprojector):
    if l.shape != p.superop.shape:
        raise ValueError(f"generator shape {l.shape} does not match superprojector {p.superop.shape}")


def projected_generator(l: np.ndarray, p: Superprojector) -> np.ndarray:
    _check_dims(l, p)
    return p.superop @ l @ p.superop


def projected_generator_closed_form(g: GklsGenerator, p: Superprojector) -> np.ndarray:
    """``P o L o P`` assembled block by block from ``P_k H P_k`` and ``P_k L P_k'``.

    Independent of the matrix product in :func:`projected_generator`.
    """
    if g.dim != p.dim:
        raise ValueError(f"generator dim {g.dim} does not match superprojector dim {p.dim}")
    ps = p.projectors
    out = np.zeros_like(p.superop)
    for pk in ps:
        hk = pk @ g.hamiltonian @ pk
        # -i [H_k, P_k X P_k]
        out += -1j * (sandwich(hk @ pk, pk) - sandwich(pk, pk @ hk))
    for l in g.lindblad_ops:
        for pk in ps:
            for pk2 in ps:
                lkk = pk @ l @ pk2
                ldl = dagger(lkk) @ lkk
                out += 2 * sandwich(lkk, dagger(lkk))
                out -= sandwich(ldl, pk2) + sandwich(pk2, ldl)
    return out


def zeno_limit(l: np.ndarray, p: Superprojector, t: float) -> np.ndarray:
    if t < 0:
        raise ValueError("t must be non-negative")
    return expm(projected_generator(l, p), t) @ p.superop


def zeno_product(l: np.ndarray, p: Superprojector, t: float, n_steps: int) -> ZenoResult:
    if t < 0 or n_steps < 1:
        raise ValueError("need t >= 0 and n_steps >= 1")
    _check_dims(l, p)
    step = p.superop @ expm(l, t / n_steps) @ p.superop
    finite = np.linalg.matrix_power(step, n_steps)
    limit = zeno_limit(l, p, t)
    return ZenoResult(finite, limit, fro(finite - limit), n_steps, t)


def loglog_slope(ns, errors, last: int = 4) -> float | None:
    """Least-squares slope of ``log(error)`` against ``log(N)`` over the ``last`` largest ``N``.

    ``None`` when fewer than two usable points remain.
    """
    pts = sorted((n, e) for n, e in zip(ns, errors) if e > 0)[-last:]
    if len(pts) < 2:
        return None
    x = np.log([n for n, _ in pts])
    y = np.log([e for _, e in pts])
    return float(np.polyfit(x, y, 1)[0])


@dataclass(frozen=True)
class ZenoSweep:
    n_steps: tuple[int, ...]
    errors: tuple[float, ...]
    choi_min_eigs: tuple[float, ...]
    slope: float | None

    @property
    def all_cptp(self) -> bool:
        return all(e >= -1e-9 for e in self.choi_min_eigs)


def zeno_sweep(l, p: Superprojector, t: float, n_list, workers: int = 1) -> ZenoSweep:
    """Evaluate ``zeno_product`` over several ``N``; results are ordered by input order."""

    def one(n):
        r = zeno_product(l, p, t, n)
        return r.error, choi_min_eigenvalue(r.finite_n_map)

    n_list = [int(n) for n in n_list]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            res = list(pool.map(one, n_list))
    else:
        res = [one(n) for n in n_list]
    errs = tuple(e for e, _ in res)
    eigs = tuple(m for _, m in res)
    slope = loglog_slope(n_list, errs) if len(n_list) > 1 else None
    return ZenoSweep(tuple(n_list), errs, eigs, slope)


# ------------------------------------------------- recovery of the originals


def defect_superop(d_sys: int, d_aux: int, p: Superprojector) -> np.ndarray:
    """``T(X) = Tr_A(X) (x) 1_A / d_A - P(X)`` as a superoperator."""
    n = d_sys * d_aux
    t = np.zeros((n * n, n * n), dtype=complex)
    eye_a = np.eye(d_aux) / d_aux
    for col in range(n * n):
        e = np.zeros(n * n, dtype=complex)
        e[col] = 1.0
        x = unvec(e, n)
        t[:, col] = vec(kron(partial_trace_aux(x, d_sys, d_aux), eye_a))
    return t - p.superop


def key_identity_rhs(g: GklsGenerator, d_aux: int, p: Superprojector) -> np.ndarray:
    """``L o P + 2 sum_a L_a T(.) L_a^dag`` on the joint space (``L`` acting on the system)."""
    lifted = lift_generator(g, d_aux)
    t = defect_superop(g.dim, d_aux, p)
    out = assemble(lifted) @ p.superop
    for l in lifted.lindblad_ops:
        out = out + 2 * sandwich(l, dagger(l)) @ t
    return out


def key_identity_residual(gens, j: int) -> float:
    """Frobenius defect of the projected purified generator ``j`` against its closed form."""
    pset = purify_lindbladians(gens)
    p = mub_superprojector(pset.system_dim, pset.aux_dim)
    lhs = projected_generator(assemble(pset.generators[j]), p)
    rhs = key_identity_rhs(gens[j], pset.aux_dim, p)
    return fro(lhs - rhs)


def reduced_dynamics(gens, j: int, rho0, t: float):
    """System state after the measured purified evolution versus the original evolution.

    Returns ``(rho_measured, rho_direct)`` where ``rho_measured`` is
    ``Tr_A[Phi(t, inf) rho0]`` for purified generator ``j`` under Fourier-basis
    measurements and ``rho_direct`` is ``exp(L_j t) Tr_A[rho0]``.
    """
    gens = list(gens)
    if not 0 <= j < len(gens):
        raise IndexError(f"generator index {j} out of range for {len(gens)} generators")
    pset = purify_lindbladians(gens)
    d, n = pset.system_dim, pset.aux_dim
    rho0 = as_operator(rho0)
    if rho0.shape != (d * n, d * n):
        raise ValueError(f"initial state must act on dimension {d * n}")
    if not is_density(rho0, 1e-8):
        raise ValueError("initial operator is not a density matrix")
    p = mub_superprojector(d, n)
    phi = zeno_limit(assemble(pset.generators[j]), p, t)
    measured = partial_trace_aux(apply(phi, rho0), d, n)
    direct = apply(expm(assemble(gens[j]), t), partial_trace_aux(rho0, d, n))
    return measured, direct


# ------------------------------------------------- projected generator is not CPTP


@dataclass(frozen=True)
class ProjectedDampingReport:
    t_long: float
    leading_projection_error: float
    closed_form_error: float
    plus_limit: list
    plus_limit_min_eigenvalue: float
    closed_form_min_eigenvalue: float
    doubling_change: float
    cptp_at_t1: bool
    choi_min_eigenvalue_at_t1: float
    passed: bool


def amplitude_damping_example():
    """Qubit amplitude damping ``L = |0><1|`` with ``H = 0`` and the computational dephasing map."""
    l = np.array([[0, 1], [0, 0]], dtype=complex)
    gen = GklsGenerator(np.zeros((2, 2)), (l,))
    p = superprojector_from_projectors([proj([1, 0]), proj([0, 1])])
    return gen, p


def appendix_a_demo(t_long: float = 50.0, seed=0, tol: float = 1e-8) -> ProjectedDampingReport:
    """Show that ``exp(P L P t)`` without a leading ``P`` leaves the state space."""
    from .rand import random_density, rng_from

    rng = rng_from(seed)
    gen, p = amplitude_damping_example()
    ppp = projected_generator(assemble(gen), p)
    ground = proj([1, 0])

    rho = random_density(2, rng)
    with_p = expm(ppp, t_long) @ p.superop
    lead_err = fro(apply(with_p, rho) - ground)

    # limit is |0><0| plus the untouched off-diagonal part
    closed = ground + (rho - p(rho))
    closed_err = fro(apply(expm(ppp, t_long), rho) - closed)

    plus = proj(np.array([1, 1]) / np.sqrt(2))
    plus_lim = apply(expm(ppp, t_long), plus)
    doubling = fro(apply(expm(ppp, 2 * t_long), plus) - plus_lim)
    min_eig = float(np.linalg.eigvalsh((plus_lim + dagger(plus_lim)) / 2).min())
    closed_plus = ground + (plus - p(plus))
    closed_eig = float(np.linalg.eigvalsh(closed_plus).min())

    m1 = expm(ppp, 1.0)
    cptp1 = is_cptp(m1)
    choi1 = choi_min_eigenvalue(m1)

    passed = (
        lead_err < tol
        and closed_err < tol
        and fro(plus_lim - np.array([[1, 0.5], [0.5, 0]])) < tol
        and doubling < 1e-10
        and not cptp1
    )
    logger.debug("projected damping: lead=%.3g closed=%.3g doubling=%.3g", lead_err, closed_err, doubling)
    return ProjectedDampingReport(
        t_long=t_long,
        leading_projection_error=lead_err,
        closed_form_error=closed_err,
        plus_limit=[[complex(z) for z in row] for row in plus_lim],
        plus_limit_min_eigenvalue=min_eig,
        closed_form_min_eigenvalue=closed_eig,
        doubling_change=doubling,
        cptp_at_t1=cptp1,
        choi_min_eigenvalue_at_t1=choi1,
        passed=passed,
    )
