import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nehari_orbits.models import (
    FenchelError,
    FenchelPair,
    PotentialModel,
    builtin_hamiltonian,
    builtin_potential,
    circular_orbit_radius,
    fd_hessian,
    fenchel_transform,
    fit_growth_exponent,
    gradient_check,
    quadratic_hamiltonian,
)

POTENTIALS = [
    ("power", {"beta": 4}, 1),
    ("power", {"beta": 3.5}, 3),
    ("log_quadratic", {"p": 1, "q": 1}, 1),
    ("log_quadratic", {"p": 2, "q": 0.5}, 2),
    ("quadratic", {"omega": 1.3}, 2),
    ("anisotropic_power", {"beta": 4, "lambdas": [1, 2]}, 2),
]
HAMILTONIANS = [
    ("power", {"beta": 4}, 2),
    ("power", {"beta": 3}, 4),
    ("anisotropic_power", {"beta": 4, "lambdas": [1, 2]}, 2),
]


def test_power_potential_values():
    m = builtin_potential("power", {"beta": 4})
    x = np.array([2.0])
    assert m.V(x) == pytest.approx(4.0)
    assert m.grad(x) == pytest.approx([8.0])
    assert x @ m.hess(x) @ x == pytest.approx(48.0)
    assert m.grad(x) @ x == pytest.approx(16.0)
    # finite-difference re-check of the hand values
    np.testing.assert_allclose(fd_hessian(m.grad, x), m.hess(x), rtol=1e-7)


@pytest.mark.parametrize("x", [np.array([0.3, -1.0]), np.array([5.0, 2.0])])
def test_quadratic_identities(x):
    m = builtin_potential("quadratic", {"omega": 1.0}, dim=2)
    assert m.grad(x) @ x == pytest.approx(x @ m.hess(x) @ x, rel=1e-14)
    assert m.V(x) / (x @ x) == pytest.approx(0.5)


def test_log_quadratic_vanishes_at_origin():
    m = builtin_potential("log_quadratic", {"p": 1, "q": 1})
    r = np.geomspace(1e-8, 1e-2, 7)
    ratio = m.V(r[:, None]) / r**2
    assert np.all(np.diff(ratio) > 0)
    assert ratio[0] < 1e-7


@pytest.mark.parametrize("name,params", [("nope", {}), ("power", {"beta": 2}),
                                         ("log_quadratic", {"p": 0}), ("quadratic", {"omega": -1}),
                                         ("anisotropic_power", {"lambdas": [1]})])
def test_potential_errors(name, params):
    with pytest.raises(ValueError):
        builtin_potential(name, params, dim=2)


def test_potential_is_normalized_at_origin():
    m = PotentialModel("shifted", {}, lambda x: 5.0 + np.sum(x**4, axis=-1), lambda x: 4 * x**3, 1)
    assert m.V(np.zeros(1)) == 0.0
    assert m.V(np.ones(1)) == pytest.approx(1.0)


@pytest.mark.parametrize("name,params,dim", POTENTIALS)
def test_potential_gradients(name, params, dim):
    m = builtin_potential(name, params, dim=dim)
    assert gradient_check(m.V, m.grad, dim) < 1e-6
    rng = np.random.default_rng(1)
    for x in rng.uniform(-3, 3, (5, dim)):
        H = m.hess(x)
        np.testing.assert_allclose(H, fd_hessian(m.grad, x), rtol=1e-5, atol=1e-6 * (1 + abs(H).max()))


@pytest.mark.parametrize("name,params,dim", HAMILTONIANS)
def test_hamiltonian_gradients(name, params, dim):
    m = builtin_hamiltonian(name, params, dim=dim)
    assert gradient_check(m.H, m.grad, dim) < 1e-6


def test_power_hamiltonian_values():
    m = builtin_hamiltonian("power", {"beta": 4})
    assert m.H(np.array([1.0, 0.0])) == pytest.approx(0.25)
    np.testing.assert_allclose(m.grad(np.array([1.0, 0.0])), [1.0, 0.0])
    assert m.H(np.zeros(2)) == 0.0
    assert not m.grad(np.zeros(2)).any()
    with pytest.raises(ValueError):
        builtin_hamiltonian("power", {"beta": 2})
    with pytest.raises(ValueError):
        builtin_hamiltonian("power", dim=3)


@pytest.fixture(scope="module")
def quartic_pair():
    return fenchel_transform(builtin_hamiltonian("power", {"beta": 4}))


def test_conjugate_of_quartic(quartic_pair):
    y = np.array([[0.6, 0.8]])
    assert quartic_pair.G(y)[0] == pytest.approx(0.75, rel=1e-12)
    assert quartic_pair.G(np.zeros((1, 2)))[0] == 0.0
    assert not quartic_pair.Gprime(np.zeros((1, 2))).any()
    assert 1 / quartic_pair.alpha + 1 / 4 == 1


def test_conjugate_matches_closed_form(quartic_pair):
    rng = np.random.default_rng(7)
    d = rng.standard_normal((200, 2))
    y = d / np.linalg.norm(d, axis=1, keepdims=True) * np.geomspace(1e-2, 1e2, 200)[:, None]
    G, Gc = quartic_pair.G(y), quartic_pair.closed_form[0](y)
    assert np.max(np.abs(G - Gc) / Gc) < 1e-8
    oracle = 0.75 * np.linalg.norm(y, axis=1) ** (4 / 3)
    assert np.max(np.abs(G - oracle) / oracle) < 1e-8
    gp = y * np.linalg.norm(y, axis=1, keepdims=True) ** (-2 / 3)
    np.testing.assert_allclose(quartic_pair.Gprime(y), gp, rtol=1e-8)


@pytest.mark.parametrize("name,params,dim", HAMILTONIANS)
def test_young_and_inversion(name, params, dim):
    m = builtin_hamiltonian(name, params, dim=dim)
    pair = fenchel_transform(m)
    rng = np.random.default_rng(3)
    x = rng.uniform(-10, 10, (100, dim))
    g = m.grad(x)
    young = pair.G(g) + m.H(x) - np.sum(x * g, axis=1)
    assert np.max(np.abs(young) / (1 + np.abs(np.sum(x * g, axis=1)))) < 1e-8
    y = rng.uniform(-10, 10, (100, dim))
    np.testing.assert_allclose(m.grad(pair.Gprime(y)), y, rtol=1e-8, atol=1e-8)


@given(st.floats(2.2, 6.0), st.floats(-2, 2), st.floats(-2, 2))
def test_power_conjugate_exponent(beta, a, b):
    pair = fenchel_transform(builtin_hamiltonian("power", {"beta": beta}))
    assert 1 / pair.alpha + 1 / beta == pytest.approx(1.0, abs=1e-15)
    y = np.array([[10.0**a, 10.0**b]])
    r = np.linalg.norm(y)
    assert pair.G(y)[0] == pytest.approx(r**pair.alpha / pair.alpha, rel=1e-8)


def test_fenchel_failure_reports_witness():
    m = builtin_hamiltonian("power", {"beta": 4})
    # a badly fitted exponent spoils the radial guess; one iteration is not enough
    pair = FenchelPair(m, 2.05, 4 / 3, max_iter=1)
    with pytest.raises(FenchelError) as info:
        pair.G(np.array([[1e6, -3e5]]))
    assert info.value.witness is not None


def test_growth_fits():
    H = builtin_hamiltonian("power", {"beta": 4})
    fit = fit_growth_exponent(H.H, 2)
    assert fit.exponent == pytest.approx(4.0, abs=1e-3)
    assert fit.lower == pytest.approx(0.25) and fit.upper == pytest.approx(0.25)
    G = fenchel_transform(H)
    assert fit_growth_exponent(G.G, 2).exponent == pytest.approx(4 / 3, abs=1e-3)
    q = builtin_potential("quadratic")
    fq = fit_growth_exponent(q.V, 1)
    assert fq.exponent == pytest.approx(2.0, abs=1e-9)
    assert not fq.superquadratic
    with pytest.raises(ValueError):
        fit_growth_exponent(lambda x: np.full(x.shape[:-1], np.nan), 1)


def test_quadratic_hamiltonian_control():
    m = quadratic_hamiltonian(2)
    assert m.growth_beta == 2.0
    assert fit_growth_exponent(m.H, 2).exponent == pytest.approx(2.0, abs=1e-9)


def test_circular_orbit_radius():
    assert circular_orbit_radius(2 * math.pi) == pytest.approx(1.0)
    assert circular_orbit_radius(math.pi / 2) == pytest.approx(2.0)
