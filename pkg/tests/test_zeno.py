import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lindpure.gkls import GklsGenerator, assemble, is_cptp
from lindpure.linalg import apply, expm, fro, kron, partial_trace_aux
from lindpure.purification import (
    identity_superprojector,
    mub_superprojector,
    purify_lindbladians,
    superprojector_from_projectors,
)
from lindpure.rand import random_density, random_generator
from lindpure.zeno import (
    amplitude_damping_example,
    appendix_a_demo,
    defect_superop,
    key_identity_residual,
    loglog_slope,
    projected_generator,
    projected_generator_closed_form,
    reduced_dynamics,
    zeno_limit,
    zeno_product,
    zeno_sweep,
)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_projected_generator_closed_form(d, n, seed):
    rng = np.random.default_rng(seed)
    g = random_generator(d * n, rng)
    p = mub_superprojector(d, n)
    direct = projected_generator(assemble(g), p)
    assert fro(direct - projected_generator_closed_form(g, p)) < 1e-11


def test_identity_projection_is_trivial(rng):
    g = random_generator(3, rng)
    l = assemble(g)
    p = identity_superprojector(3)
    assert np.allclose(zeno_limit(l, p, 0.7), expm(l, 0.7))
    assert zeno_product(l, p, 0.7, 5).error < 1e-12


def test_zeno_product_error_decays_like_one_over_n(rng):
    g = random_generator(4, rng)
    p = mub_superprojector(2, 2)
    sweep = zeno_sweep(assemble(g), p, 1.0, [16, 64, 256, 1024, 4096])
    assert sweep.all_cptp
    assert sweep.slope == pytest.approx(-1.0, abs=0.1)
    assert list(sweep.errors) == sorted(sweep.errors, reverse=True)


def test_sweep_parallel_matches_serial(rng):
    g = random_generator(4, rng)
    p = mub_superprojector(2, 2)
    ns = [8, 32, 128]
    a = zeno_sweep(assemble(g), p, 1.0, ns)
    b = zeno_sweep(assemble(g), p, 1.0, ns, workers=3)
    assert a == b


def test_single_n_has_no_slope(rng):
    g = random_generator(2, rng)
    sweep = zeno_sweep(assemble(g), mub_superprojector(1, 2), 1.0, [32])
    assert sweep.slope is None


def test_loglog_slope():
    ns = [10, 100, 1000, 10000]
    assert loglog_slope(ns, [3.0 / n**2 for n in ns]) == pytest.approx(-2.0)
    assert loglog_slope([1, 2], [0.0, 0.0]) is None
    # only the four largest N enter the fit
    errs = [1.0, 1.0] + [1.0 / n for n in (100, 200, 400, 800)]
    assert loglog_slope([1, 2, 100, 200, 400, 800], errs) == pytest.approx(-1.0)


def test_zeno_argument_checks(rng):
    l = assemble(random_generator(2, rng))
    p = identity_superprojector(2)
    with pytest.raises(ValueError):
        zeno_product(l, p, 1.0, 0)
    with pytest.raises(ValueError):
        zeno_limit(l, p, -1.0)
    with pytest.raises(ValueError):
        zeno_product(l, identity_superprojector(3), 1.0, 4)


def test_defect_annihilates_system_identity_products(rng):
    # T(rho (x) 1/n) = 0 because P leaves rho (x) 1/n invariant
    p = mub_superprojector(2, 3)
    t = defect_superop(2, 3, p)
    rho = random_density(2, rng)
    assert fro(apply(t, kron(rho, np.eye(3) / 3))) < 1e-13


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 3), st.integers(2, 3), st.integers(0, 2**32 - 1))
def test_key_identity(d, n, seed):
    rng = np.random.default_rng(seed)
    gens = [random_generator(d, rng) for _ in range(n)]
    for j in range(n):
        assert key_identity_residual(gens, j) < 1e-11


def test_key_identity_detects_a_wrong_factor(rng):
    # dropping the sqrt(n) on the purified jump operators breaks the identity
    gens = [random_generator(2, rng) for _ in range(2)]
    pset = purify_lindbladians(gens)
    g = pset.generators[0]
    broken = GklsGenerator(g.hamiltonian, tuple(l / np.sqrt(2) for l in g.lindblad_ops))
    p = mub_superprojector(2, 2)
    from lindpure.zeno import key_identity_rhs

    assert fro(projected_generator(assemble(broken), p) - key_identity_rhs(gens[0], 2, p)) > 1e-3


def test_recovery_of_original_dynamics(rng):
    gens = [random_generator(2, rng) for _ in range(3)]
    for j in range(3):
        rho0 = kron(random_density(2, rng), random_density(3, rng))
        measured, direct = reduced_dynamics(gens, j, rho0, 1.0)
        assert fro(measured - direct) < 1e-10


def test_recovery_against_finite_measurements(rng):
    # many finite-N measurement rounds approach the same reduced state
    gens = [random_generator(2, rng) for _ in range(2)]
    pset = purify_lindbladians(gens)
    p = mub_superprojector(2, 2)
    rho0 = kron(random_density(2, rng), random_density(2, rng))
    _, direct = reduced_dynamics(gens, 1, rho0, 1.0)
    finite = zeno_product(assemble(pset.generators[1]), p, 1.0, 4096).finite_n_map
    assert fro(partial_trace_aux(apply(finite, rho0), 2, 2) - direct) < 1e-2


def test_reduced_dynamics_rejects(rng):
    gens = [random_generator(2, rng) for _ in range(2)]
    with pytest.raises(IndexError):
        reduced_dynamics(gens, 2, np.eye(4) / 4, 1.0)
    with pytest.raises(ValueError):
        reduced_dynamics(gens, 0, np.eye(4), 1.0)
    with pytest.raises(ValueError):
        reduced_dynamics(gens, 0, np.eye(2) / 2, 1.0)


def test_projected_damping_not_cptp():
    gen, p = amplitude_damping_example()
    ppp = projected_generator(assemble(gen), p)
    assert not is_cptp(expm(ppp, 1.0))
    assert is_cptp(expm(ppp, 1.0) @ p.superop)


def test_projected_damping_demo_values():
    r = appendix_a_demo()
    assert r.passed
    assert r.plus_limit_min_eigenvalue == pytest.approx((1 - np.sqrt(2)) / 2, abs=1e-8)
    assert r.closed_form_min_eigenvalue == pytest.approx((1 - np.sqrt(2)) / 2, abs=1e-12)
    assert r.leading_projection_error < 1e-8
    assert not r.cptp_at_t1


def test_dephasing_projectors_are_computational():
    _, p = amplitude_damping_example()
    ref = superprojector_from_projectors([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])
    assert np.allclose(p.superop, ref.superop)
    assert np.allclose(p.superop, np.diag([1, 0, 0, 1]))
