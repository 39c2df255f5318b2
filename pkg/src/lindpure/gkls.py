"""GKLS generators in the Liouville (column-stacked) representation.

The dissipator uses the normalization

    D_L(X) = 2 L X L^dag - L^dag L X - X L^dag L

i.e. a factor 2 on the sandwich term and no 1/2 on the anticommutator.  This is
twice the rate of the convention found in most simulation libraries; all rates
are absorbed into the Lindblad operators.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    apply,
    as_operator,
    dagger,
    expm,
    is_hermitian,
    is_trace_preserving,
    is_unitary,
    left,
    matrix_units,
    right,
    sandwich,
    superop_dim,
)

CPTP_EIG_TOL = 1e-9
TP_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class GklsGenerator:
    """A Hamiltonian together with its Lindblad operators."""

    hamiltonian: np.ndarray
    lindblad_ops: tuple[np.ndarray, ...] = field(default_factory=tuple)

    def __post_init__(self):
        h = as_operator(self.hamiltonian)
        ops = tuple(as_operator(l) for l in self.lindblad_ops)
        if not is_hermitian(h, DEFAULT_TOL):
            raise ValueError("GKLS Hamiltonian is not Hermitian")
        for l in ops:
            if l.shape != h.shape:
                raise ValueError(
                    f"Lindblad operator of shape {l.shape} does not match Hamiltonian {h.shape}"
                )
        object.__setattr__(self, "hamiltonian", h)
        object.__setattr__(self, "lindblad_ops", ops)

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]

    def superop(self) -> np.ndarray:
        return assemble(self)


@dataclass(frozen=True)
class ControlSchedule:
    """Piecewise-constant control amplitudes.

    ``segments`` is a sequence of ``(duration, controls)`` pairs; segment ``i``
    applies ``H_0 + sum_k controls[k] H_k`` for ``duration`` time units.
    """

    segments: tuple[tuple[float, tuple[float, ...]], ...]

    def __post_init__(self):
        segs = tuple((float(t), tuple(float(u) for u in us)) for t, us in self.segments)
        counts = {len(us) for _, us in segs}
        if len(counts) > 1:
            raise ValueError("all schedule segments must carry the same number of controls")
        if any(t < 0 for t, _ in segs):
            raise ValueError("segment durations must be non-negative")
        object.__setattr__(self, "segments", segs)

    @property
    def n_controls(self) -> int:
        return len(self.segments[0][1]) if self.segments else 0

    @property
    def total_time(self) -> float:
        return sum(t for t, _ in self.segments)


def hamiltonian_superop(h, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Superoperator of ``X -> -i [h, X]``."""
    h = as_operator(h)
    if not is_hermitian(h, tol):
        raise ValueError("Hamiltonian is not Hermitian")
    return -1j * (left(h) - right(h))


def generalized_dissipator(a, b) -> np.ndarray:
    """Superoperator of ``X -> 2 b X a^dag - a^dag b X - X a^dag b``."""
    a, b = as_operator(a), as_operator(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    ab = dagger(a) @ b
    return 2 * sandwich(b, dagger(a)) - left(ab) - right(ab)


def dissipator_superop(l) -> np.ndarray:
    return generalized_dissipator(l, l)


def ad_unitary(u, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Superoperator of ``X -> u X u^dag``."""
    u = as_operator(u)
    if not is_unitary(u, tol):
        raise ValueError("operator is not unitary")
    return sandwich(u, dagger(u))


def assemble(g: GklsGenerator) -> np.ndarray:
    s = hamiltonian_superop(g.hamiltonian)
    for l in g.lindblad_ops:
        s = s + dissipator_superop(l)
    return s


def choi(m: np.ndarray) -> np.ndarray:
    """Choi matrix ``sum_ij E_ij (x) m(E_ij)`` (input factor first)."""
    d = superop_dim(m)
    out = np.zeros((d * d, d * d), dtype=complex)
    for e in matrix_units(d):
        out += np.kron(e, apply(m, e))
    return out


def choi_min_eigenvalue(m: np.ndarray) -> float:
    c = choi(m)
    return float(np.linalg.eigvalsh((c + dagger(c)) / 2).min())


def is_cptp(m: np.ndarray, tol: float = CPTP_EIG_TOL, tp_tol: float = TP_TOL) -> bool:
    return choi_min_eigenvalue(m) >= -tol and is_trace_preserving(m, tp_tol)


def propagate_piecewise(
    drift: GklsGenerator, controls, schedule: ControlSchedule
) -> np.ndarray:
    """Propagator of the controlled master equation under a piecewise schedule.

    Later segments are composed on the left.
    """
    controls = [as_operator(h) for h in controls]
    if schedule.segments and schedule.n_controls != len(controls):
        raise ValueError(
            f"schedule carries {schedule.n_controls} controls, {len(controls)} Hamiltonians given"
        )
    for h in controls:
        if h.shape != drift.hamiltonian.shape:
            raise ValueError("control Hamiltonian dimension does not match the drift")
    base = assemble(drift)
    ctrl = [hamiltonian_superop(h) for h in controls]
    out = np.eye(base.shape[0], dtype=complex)
    for duration, us in schedule.segments:
        gen = base + sum((u * k for u, k in zip(us, ctrl)), np.zeros_like(base))
        out = expm(gen, duration) @ out
    return out
