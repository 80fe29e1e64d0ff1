import math

import numpy as np
import pytest

from nehari_orbits.action import Cone, DirectActionContext, DualActionContext
from nehari_orbits.fiber import make_fiber, envelope_derivative, ray_maximum
from nehari_orbits.models import builtin_hamiltonian, builtin_potential, fenchel_transform
from nehari_orbits.nehari import (
    SolverConfig,
    SolverError,
    direct_orbit,
    minimize_sphere,
    newton_refine,
    random_direction,
    recover_orbit,
)
from nehari_orbits.symfun import Symmetry, make_space

from conftest import quartic_action


@pytest.fixture(scope="module")
def direct_ctx():
    return DirectActionContext(make_space(1.0, 1, Symmetry.E1, 8), builtin_potential("power", {"beta": 4}))


@pytest.fixture(scope="module")
def direct_cand(direct_ctx):
    return minimize_sphere(direct_ctx)


@pytest.fixture(scope="module")
def dual_ctx():
    sp = make_space(math.pi / 2, 2, Symmetry.FULL_MEANZERO, 8)
    return DualActionContext(sp, fenchel_transform(builtin_hamiltonian("power", {"beta": 4})))


@pytest.fixture(scope="module")
def dual_cand(dual_ctx):
    cand = minimize_sphere(dual_ctx, SolverConfig(restarts=2))
    return newton_refine(dual_ctx, cand)


@pytest.mark.parametrize("kwargs", [
    {"restarts": 0}, {"max_outer_iters": 0}, {"initial_step": 0.0}, {"grad_tol": -1.0},
    {"shrink": 1.5}, {"growth": 0.9}, {"gradient_mode": "newton"}, {"newton_tol": 0.0},
])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        SolverConfig(**kwargs)


def test_newton_tolerance_defaults():
    cfg = SolverConfig()
    assert cfg.newton_tolerance("direct") == 1e-10
    assert cfg.newton_tolerance("dual") == 1e-8
    assert SolverConfig(newton_tol=1e-6).newton_tolerance("direct") == 1e-6


def test_direct_candidate_matches_oracle(direct_cand):
    assert direct_cand.status == "converged"
    assert direct_cand.value == pytest.approx(quartic_action(1.0), rel=1e-9)
    assert direct_cand.fiber.ok and not direct_cand.fiber.plateau
    assert len(direct_cand.diagnostics["restart_values"]) == 4


def test_infmax_is_below_random_rays(direct_ctx, direct_cand):
    rng = np.random.default_rng(3)
    for _ in range(50):
        prof, _ = ray_maximum(direct_ctx, rng.standard_normal(direct_ctx.space.shape))
        assert prof.value >= direct_cand.value * (1 - 1e-10)


def test_envelope_derivative_vanishes(direct_ctx, direct_cand):
    fib = make_fiber(direct_ctx, direct_cand.direction)
    rng = np.random.default_rng(8)
    for _ in range(5):
        v = rng.standard_normal(direct_ctx.space.shape)
        v /= direct_ctx.norm(v)
        assert abs(envelope_derivative(fib, direct_cand.fiber, v)) < 1e-6 * direct_cand.value


def test_deterministic(direct_ctx, direct_cand):
    again = minimize_sphere(direct_ctx)
    np.testing.assert_array_equal(again.point.coeffs, direct_cand.point.coeffs)
    assert again.restart == direct_cand.restart


def test_workers_do_not_change_the_answer(direct_ctx, direct_cand):
    par = minimize_sphere(direct_ctx, SolverConfig(workers=3))
    np.testing.assert_array_equal(par.point.coeffs, direct_cand.point.coeffs)
    assert par.diagnostics["restart_values"] == direct_cand.diagnostics["restart_values"]


def test_sampling_gradient_mode(direct_ctx):
    cand = minimize_sphere(direct_ctx, SolverConfig(gradient_mode="sampling", restarts=1, grad_tol=1e-6))
    assert cand.value == pytest.approx(quartic_action(1.0), rel=1e-5)


def test_newton_on_critical_point_is_a_no_op(direct_ctx, direct_cand):
    ref = newton_refine(direct_ctx, direct_cand)
    assert ref.refined
    again = newton_refine(direct_ctx, ref)
    assert again.refined and again.newton_iterations == 0
    np.testing.assert_array_equal(again.point.coeffs, ref.point.coeffs)
    assert ref.diagnostics["action_shift"] < 1e-9


def test_coarse_descent_refines_to_the_same_point(direct_ctx, direct_cand):
    coarse = minimize_sphere(direct_ctx, SolverConfig(grad_tol=1e-2))
    fine = newton_refine(direct_ctx, direct_cand)
    ref = newton_refine(direct_ctx, coarse)
    assert ref.refined and ref.residual_norm < 1e-10
    # the E1 orbit is unique up to the reflection x -> -x
    sign = np.sign(ref.point.coeffs[0, 0] * fine.point.coeffs[0, 0])
    np.testing.assert_allclose(sign * ref.point.coeffs, fine.point.coeffs, atol=1e-8)


def test_newton_failure_returns_unrefined(direct_ctx, direct_cand):
    ref = newton_refine(direct_ctx, direct_cand, tol=1e-300, max_iter=3)
    assert not ref.refined
    assert ref.diagnostics["newton"] == "no convergence"


def test_quadratic_potential_is_rejected():
    ctx = DirectActionContext(make_space(1.0, 1, Symmetry.E1, 4), builtin_potential("quadratic"))
    with pytest.raises(SolverError) as info:
        minimize_sphere(ctx, SolverConfig(restarts=2))
    assert info.value.code == "ALL_FIBERS_UNBOUNDED"


def test_random_direction_in_negative_cone(dual_ctx):
    rng = np.random.default_rng(0)
    for _ in range(10):
        e = random_direction(dual_ctx, rng)
        assert dual_ctx.cone(e) is Cone.P_MINUS
        assert dual_ctx.norm(e) == pytest.approx(1.0)


def test_dual_candidate(dual_ctx, dual_cand):
    assert dual_cand.refined and dual_cand.residual_norm < 1e-8
    assert dual_ctx.cone(dual_cand.point.coeffs) is Cone.P_MINUS
    orbit = recover_orbit(dual_ctx, dual_cand)
    assert orbit.accepted
    r = np.linalg.norm(orbit.x, axis=1)
    np.testing.assert_allclose(r, 2.0, atol=1e-8)


def test_recover_rejects_zero_field(dual_ctx):
    with pytest.raises(ValueError):
        recover_orbit(dual_ctx, dual_ctx.wrap(np.zeros(dual_ctx.space.shape)))


def test_direct_orbit_sampling(direct_ctx, direct_cand):
    orb = direct_orbit(direct_cand)
    assert orb.x.shape == (direct_ctx.space.grid_points, 1)
    # x'' = -x^3 up to truncation of the 8-mode expansion
    assert np.max(np.abs(orb.xddot + orb.x**3)) < 1e-5 * np.max(np.abs(orb.x)) ** 3
    assert orb.amplitude == pytest.approx(7.4162987092, rel=1e-6)
