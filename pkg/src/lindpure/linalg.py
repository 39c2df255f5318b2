"""Dense complex linear algebra used throughout the package.

Conventions, fixed once for every module:

* Operators are ``(d, d)`` complex numpy arrays.
* Superoperators are ``(d**2, d**2)`` complex arrays acting on column-stacked
  operators, so that ``vec(A @ X @ B) == kron(B.T, A) @ vec(X)``.
* In tensor products the system factor comes first and the auxiliary factor
  second.
"""
from __future__ import annotations

import numpy as np
import scipy.linalg

DEFAULT_TOL = 1e-10
RANK_TOL = 1e-8


def as_operator(x) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {x.shape}")
    return x


def superop_dim(s: np.ndarray) -> int:
    """Underlying operator dimension ``d`` of a ``d**2 x d**2`` superoperator."""
    n = s.shape[0]
    d = int(round(np.sqrt(n)))
    if s.ndim != 2 or s.shape[1] != n or d * d != n:
        raise ValueError(f"shape {s.shape} is not that of a superoperator")
    return d


def dagger(x: np.ndarray) -> np.ndarray:
    return x.conj().T


def kron(a, b) -> np.ndarray:
    """Tensor product with the first factor as the slow (system) index."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def vec(x: np.ndarray) -> np.ndarray:
    return np.asarray(x, dtype=complex).reshape(-1, order="F")


def unvec(v: np.ndarray, d: int | None = None) -> np.ndarray:
    v = np.asarray(v, dtype=complex).ravel()
    if d is None:
        d = int(round(np.sqrt(v.size)))
    if v.size != d * d:
        raise ValueError(f"vector of length {v.size} cannot be reshaped to {d}x{d}")
    return v.reshape(d, d, order="F")


def apply(s: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Apply a superoperator to an operator."""
    x = as_operator(x)
    return unvec(s @ vec(x), x.shape[0])


def left(a: np.ndarray) -> np.ndarray:
    """Superoperator of ``X -> a @ X``."""
    return np.kron(np.eye(a.shape[0]), a)


def right(b: np.ndarray) -> np.ndarray:
    """Superoperator of ``X -> X @ b``."""
    return np.kron(b.T, np.eye(b.shape[0]))


def sandwich(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Superoperator of ``X -> a @ X @ b``."""
    return np.kron(b.T, a)


def expm(s, t: float = 1.0) -> np.ndarray:
    """Matrix exponential ``exp(t * s)`` of an operator or superoperator."""
    s = np.asarray(s, dtype=complex)
    if not np.all(np.isfinite(s)) or not np.isfinite(t):
        raise ValueError("expm requires finite input")
    return scipy.linalg.expm(t * s)


def partial_trace_aux(x: np.ndarray, d_sys: int, d_aux: int) -> np.ndarray:
    """Trace out the second (auxiliary) tensor factor."""
    x = as_operator(x)
    if x.shape[0] != d_sys * d_aux:
        raise ValueError(f"operator of dim {x.shape[0]} is not {d_sys}x{d_aux}")
    return np.einsum("iaja->ij", x.reshape(d_sys, d_aux, d_sys, d_aux))


def fro(x) -> float:
    return float(np.linalg.norm(x))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def realify(s: np.ndarray) -> np.ndarray:
    """Real vector ``[Re(s), Im(s)]`` of length ``2 * s.size``."""
    s = np.asarray(s, dtype=complex).ravel()
    return np.concatenate([s.real, s.imag])



def real_span_rank(vectors, tol: float = RANK_TOL) -> tuple[int, np.ndarray]:
    """Rank and orthonormal basis of the real span of complex arrays.

    Each array is realified and inserted in order by classical Gram-Schmidt
    with one reorthogonalization pass.  A vector joins the basis when its
    residual exceeds ``tol`` times the largest input norm.  The basis is
    returned as rows of a ``(rank, 2 * size)`` real array.
    """
    vectors = [realify(v) for v in vectors]
    if not vectors:
        return 0, np.zeros((0, 0))
    scale = max(np.linalg.norm(v) for v in vectors)
    basis = np.zeros((0, vectors[0].size))
    if scale == 0.0:
        return 0, basis
    rows = []
    for v in vectors:
        r = orth_residual(basis, v)
        nr = np.linalg.norm(r)
        if nr > tol * scale:
            rows.append(r / nr)
            basis = np.vstack([basis, rows[-1]])
    return len(rows), basis


def orth_residual(basis: np.ndarray, v: np.ndarray) -> np.ndarray:
    r = v
    for _ in range(2):
        if basis.shape[0]:
            r = r - basis.T @ (basis @ r)
    return r


def span_residual(basis: np.ndarray, v) -> float:
    """Relative distance of ``v`` (complex array) from the span of ``basis`` rows."""
    w = realify(v)
    n = np.linalg.norm(w)
    if n == 0.0:
        return 0.0
    return float(np.linalg.norm(orth_residual(basis, w)) / n)


# ---------------------------------------------------------------- predicates


def is_hermitian(x, tol: float = DEFAULT_TOL) -> bool:
    x = np.asarray(x)
    return bool(np.allclose(x, dagger(x), rtol=0.0, atol=tol))


def is_unitary(x, tol: float = DEFAULT_TOL) -> bool:
    x = as_operator(x)
    return bool(np.allclose(x @ dagger(x), np.eye(x.shape[0]), rtol=0.0, atol=tol))


def is_density(x, tol: float = DEFAULT_TOL) -> bool:
    x = as_operator(x)
    if not is_hermitian(x, tol) or abs(np.trace(x) - 1.0) > tol:
        return False
    return bool(np.linalg.eigvalsh((x + dagger(x)) / 2).min() >= -tol)


def matrix_units(d: int):
    for j in range(d):
        for i in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = 1.0
            yield e


def is_trace_preserving_generator(s: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    """``Tr(s(X)) == 0`` for every ``X``."""
    d = superop_dim(s)
    return bool(np.abs(vec(np.eye(d)) @ s).max() <= tol)


def is_trace_preserving(s: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    """``Tr(s(X)) == Tr(X)`` for every ``X``."""
    d = superop_dim(s)
    row = vec(np.eye(d))
    return bool(np.abs(row @ s - row).max() <= tol)


def is_hermiticity_preserving(s: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    d = superop_dim(s)
    for e in matrix_units(d):
        if np.abs(apply(s, dagger(e)) - dagger(apply(s, e))).max() > tol:
            return False
    return True
