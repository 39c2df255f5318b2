import numpy as np
import pytest

from lindpure.accessibility import (
    accessible_pair,
    closure_defect,
    commutation_identity_check,
    full_gkls_dim,
    gkls_spanning_set,
    kossakowski_fit,
    lie_closure,
    purified_pair,
    quartet_operators,
    quartet_span_check,
    unit,
)
from lindpure.gkls import assemble, dissipator_superop, hamiltonian_superop
from lindpure.rand import random_hermitian

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]])
SZ = np.diag([1.0, -1.0]).astype(complex)


def brute_force_closure_dim(gens, tol=1e-9):
    """All pairwise brackets of the whole span until the SVD rank stops growing."""
    real = lambda m: np.concatenate([m.ravel().real, m.ravel().imag])
    elems = [g / np.linalg.norm(g) for g in gens]

    def rank(ms):
        s = np.linalg.svd(np.array([real(m) for m in ms]), compute_uv=False)
        return int((s > tol * s[0]).sum()), s

    r, _ = rank(elems)
    while True:
        # reduce to an orthonormal set of real combinations before bracketing
        mat = np.array([real(m) for m in elems])
        _, s, vt = np.linalg.svd(mat, full_matrices=False)
        k = int((s > tol * s[0]).sum())
        n = elems[0].size
        basis = [(v[:n] + 1j * v[n:]).reshape(elems[0].shape) for v in vt[:k]]
        new = basis + [a @ b - b @ a for a in basis for b in basis]
        new = [m for m in new if np.linalg.norm(m) > 1e-12]
        new = [m / np.linalg.norm(m) for m in new]
        r2, _ = rank(new)
        elems = new
        if r2 == r:
            return r
        r = r2


def test_brute_force_oracle_su2():
    gens = [-1j * hamiltonian_superop(SX), -1j * hamiltonian_superop(SZ)]
    assert brute_force_closure_dim(gens) == 3


def test_closure_su2_adjoint():
    lb = lie_closure([hamiltonian_superop(SX), hamiltonian_superop(SZ)])
    assert lb.dimension == 3
    assert lb.converged
    assert closure_defect(lb) < 1e-10


def test_closure_abelian():
    lb = lie_closure([hamiltonian_superop(SZ), dissipator_superop(SZ)])
    assert lb.dimension == 2


@pytest.mark.parametrize("d", [2, 3])
def test_closure_matches_brute_force(d):
    l0, k = accessible_pair(d)
    gens = [assemble(l0), assemble(k)]
    assert lie_closure(gens).dimension == brute_force_closure_dim(gens)


def test_closure_random_hamiltonians_give_su_d(rng):
    # two random Hamiltonians generate su(3), seen through ad as an 8-dim algebra
    gens = [hamiltonian_superop(random_hermitian(3, rng)) for _ in range(2)]
    assert lie_closure(gens).dimension == 8


def test_closure_bookkeeping():
    l0, k = accessible_pair(2)
    lb = lie_closure([assemble(l0), assemble(k)])
    assert lb.dimension == len(lb.generation_log) == len(lb.levels) == lb.basis.shape[0]
    assert lb.generation_log[0] == ("generator", 0)
    assert sum(lb.level_counts().values()) == lb.dimension
    assert np.allclose(lb.basis @ lb.basis.T, np.eye(lb.dimension), atol=1e-10)
    assert lb.min_accepted > 1e3 * lb.tol > lb.max_rejected
    s = lb.summary()
    assert s["dimension"] == 12 and s["converged"]


def test_closure_max_dim_cap():
    l0, k = accessible_pair(2)
    lb = lie_closure([assemble(l0), assemble(k)], max_dim=5)
    assert not lb.converged
    assert lb.dimension == 5


def test_closure_drops_dependent_generators():
    h = hamiltonian_superop(SZ)
    lb = lie_closure([h, 2 * h, 0 * h])
    assert lb.dimension == 1


def test_closure_rejects():
    with pytest.raises(ValueError):
        lie_closure([])
    with pytest.raises(ValueError):
        lie_closure([np.eye(4), np.eye(9)])


@pytest.mark.parametrize("d,expected", [(2, 12), (3, 72)])
def test_full_gkls_dim_formula(d, expected):
    assert full_gkls_dim(d) == expected == d**4 - d**2


def test_full_gkls_oracle_independent_count():
    # hermiticity preserving, trace annihilating maps form a real space of dim d^4 - d^2;
    # the spanning set alone already fills it, so the closure adds nothing
    from lindpure.linalg import real_span_rank

    assert real_span_rank(gkls_spanning_set(2))[0] == 12
    with pytest.raises(ValueError):
        full_gkls_dim(1)


def test_accessible_pair_shape():
    l0, k = accessible_pair(3)
    assert np.allclose(k.hamiltonian, unit(3, 0, 0))
    assert len(l0.lindblad_ops) == 1
    with pytest.raises(ValueError):
        accessible_pair(1)


@pytest.mark.parametrize("d", [2, 3])
def test_purified_pair_is_abelian(d):
    pset = purified_pair(d)
    assert pset.max_commutator_norm() < 1e-12
    assert lie_closure(pset.superops()).dimension == 2


def test_quartet_operator_count():
    ops = quartet_operators(4, range(4))
    assert len(ops) == 496
    assert {kind for _, kind, _ in ops} == {"+", "-"}


def test_quartet_span_default_passes():
    r = quartet_span_check(4, 256, seed=7)
    assert r.passed
    assert r.span_rank == r.target_rank == 240
    assert r.kossakowski_error < 1e-8


def test_quartet_span_with_64_unitaries_is_rank_deficient():
    # 64 dissipators plus 15 Hamiltonian directions cannot span 240 dimensions
    r = quartet_span_check(4, 64, seed=7)
    assert r.span_rank == 79
    assert not r.passed
    assert r.n_failing == r.n_operators


def test_shifted_quartet_in_larger_space_is_not_spanned():
    # on a proper subset the quartet identity is not the global identity,
    # so some dissipator combinations have no Hamiltonian counterpart
    r = quartet_span_check(5, 256, seed=0, quartet=(1, 2, 3, 4))
    assert r.target_rank == 256
    assert r.span_rank == 241
    assert not r.passed


def test_quartet_rejects():
    with pytest.raises(ValueError):
        quartet_span_check(3)
    with pytest.raises(ValueError):
        quartet_span_check(5, quartet=(0, 1, 2, 2))
    with pytest.raises(ValueError):
        quartet_span_check(4, quartet=(1, 2, 3, 4))


def test_kossakowski_fit_exact_member():
    ops = [dissipator_superop(SX), dissipator_superop(SZ)]
    coef, err = kossakowski_fit(3 * ops[0] - ops[1], ops)
    assert err < 1e-14
    assert np.allclose(coef, [3, -1])


def test_commutation_identity_random(rng):
    for d in (2, 3, 5):
        h = random_hermitian(d, rng)
        a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        assert commutation_identity_check(h, a) < 1e-11


def test_commutation_identity_fails_for_wrong_sign(rng):
    h = random_hermitian(3, rng)
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    k = hamiltonian_superop(h)
    lhs = k @ dissipator_superop(a) - dissipator_superop(a) @ k
    ha = h @ a - a @ h
    wrong = 0.5 * dissipator_superop(a + 1j * ha) - 0.5 * dissipator_superop(a - 1j * ha)
    assert np.linalg.norm(lhs - wrong) > 1e-3


@pytest.mark.parametrize("j", range(4))
def test_level_projector_commutes_with_decay(j):
    d = 4
    k = hamiltonian_superop(unit(d, j, j))
    dl = dissipator_superop(unit(d, 1, 2))
    assert np.linalg.norm(k @ dl - dl @ k) < 1e-14
