import numpy as np
import pytest

from sl2cqsp.algebra import I2, X, Z, dagger, det2, expm_traceless, generators
from sl2cqsp.errors import DegenerateChannelError
from sl2cqsp.lorentz import (
    METRIC,
    bloch_image,
    bloch_rows,
    conjugate_action,
    fibonacci_sphere,
    fourvector_from_omega,
    fourvector_residual,
    is_density_matrix,
    lorentz_matrix,
    metric_residual,
    minkowski_norm,
    omega_from_fourvector,
    physical_channel,
)

from conftest import random_sl2c

PAULI = [I2, X, np.array([[0, -1j], [1j, 0]]), Z]


def trace_formula(v):
    # entry-by-entry evaluation of 2 Lambda = Tr(sigma_mu V sigma_nu V^dagger)
    lam = np.empty((4, 4))
    for mu in range(4):
        for nu in range(4):
            lam[mu, nu] = 0.5 * np.trace(PAULI[mu] @ v @ PAULI[nu] @ dagger(v)).real
    return lam


def random_pure(rng):
    psi = rng.normal(size=2) + 1j * rng.normal(size=2)
    psi /= np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def test_omega_examples():
    assert np.allclose(omega_from_fourvector([1, 0, 0, 1]), np.diag([1, 0]))
    assert np.allclose(omega_from_fourvector([1, 0, 0, 0]), I2 / 2)
    assert abs(det2(omega_from_fourvector([1, 0.6, 0, 0.8]))) < 1e-15
    with pytest.raises(ValueError):
        omega_from_fourvector([1, 2, 3])


def test_fourvector_roundtrip(rng):
    assert np.allclose(fourvector_from_omega(np.diag([1, 0])), [1, 0, 0, 1])
    assert np.allclose(fourvector_from_omega(I2 / 2), [1, 0, 0, 0])
    for _ in range(50):
        x = rng.normal(size=4)
        om = omega_from_fourvector(x)
        assert np.allclose(om, dagger(om), atol=1e-15)
        assert abs(det2(om).real - minkowski_norm(x) / 4) < 1e-12
        assert np.abs(fourvector_from_omega(om) - x).max() < 1e-12
    with pytest.raises(ValueError, match="Hermitian"):
        fourvector_from_omega(np.array([[0, 1], [0, 0]]))


def test_conjugate_action_examples(rng):
    om = omega_from_fourvector(rng.normal(size=4))
    assert np.allclose(conjugate_action(I2, om), om)
    pure0 = np.diag([1, 0]).astype(complex)
    assert np.allclose(conjugate_action(expm_traceless(0.3j * Z), pure0), pure0)
    boosted = conjugate_action(expm_traceless(-0.15 * X), I2 / 2)
    assert abs(np.trace(boosted) - 1) > 1e-3
    assert abs(det2(boosted) - 0.25) < 1e-12


def test_lorentz_identity():
    assert np.allclose(lorentz_matrix(I2), np.eye(4), atol=1e-15)


def test_lorentz_rotation():
    phi = 0.4
    lam = lorentz_matrix(expm_traceless(1j * phi * Z))
    c, s = np.cos(2 * phi), np.sin(2 * phi)
    expected = np.array([[1, 0, 0, 0], [0, c, s, 0], [0, -s, c, 0], [0, 0, 0, 1]])
    assert np.abs(lam - trace_formula(expm_traceless(1j * phi * Z))).max() < 1e-14
    assert np.abs(lam - expected).max() < 1e-14


def test_lorentz_boost():
    eta = 0.5
    v = expm_traceless(1j * eta * generators()["K1"])
    assert np.allclose(v, expm_traceless(-eta * X / 2))
    lam = lorentz_matrix(v)
    ch, sh = np.cosh(eta), np.sinh(eta)
    # sign s = -1 for exp(-eta X / 2)
    assert np.abs(lam[:2, :2] - [[ch, -sh], [-sh, ch]]).max() < 1e-14
    assert np.abs(lam[2:, 2:] - np.eye(2)).max() < 1e-14
    assert np.abs(lam - trace_formula(v)).max() < 1e-14


def test_lorentz_random(rng):
    for _ in range(200):
        v1, v2 = random_sl2c(rng, 1.5), random_sl2c(rng, 1.5)
        l1, l2 = lorentz_matrix(v1), lorentz_matrix(v2)
        assert np.abs(l1 - trace_formula(v1)).max() < 1e-12
        assert metric_residual(l1) < 1e-9
        assert abs(np.linalg.det(l1) - 1) < 1e-9
        assert l1[0, 0] >= 1 - 1e-9
        assert np.abs(lorentz_matrix(v1 @ v2) - l1 @ l2).max() < 1e-9
        assert fourvector_residual(v1, rng.normal(size=4)) < 1e-10


def test_lorentz_real_for_any_matrix(rng):
    # Tr(s_mu M s_nu M^dagger) is its own conjugate, so the residue check is a pure guard
    m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    lam = lorentz_matrix(m)
    assert lam.dtype == float
    assert np.allclose(lam, trace_formula(m))


def test_metric_constant():
    assert np.array_equal(METRIC, np.diag([1, -1, -1, -1]))


def test_channel_examples():
    pure0 = np.diag([1.0, 0.0]).astype(complex)
    assert np.allclose(physical_channel(expm_traceless(0.3j * Z), pure0), pure0)
    assert np.allclose(physical_channel(expm_traceless(-0.4 * Z), pure0), pure0)


def test_channel_pure_to_pure(rng):
    for _ in range(200):
        rho = physical_channel(random_sl2c(rng, 1.5), random_pure(rng))
        assert np.allclose(np.sort(np.linalg.eigvalsh(rho)), [0, 1], atol=1e-9)
        assert is_density_matrix(rho)


def test_channel_preconditions():
    with pytest.raises(ValueError, match="trace"):
        physical_channel(I2, I2)
    with pytest.raises(ValueError, match="Hermitian"):
        physical_channel(I2, np.array([[0.5, 0.5], [0, 0.5]]))
    with pytest.raises(ValueError, match="positive"):
        physical_channel(I2, np.diag([1.5, -0.5]))


def test_channel_degenerate_weight():
    # the unnormalized image of |1> under diag(1, 1e-7) has trace 1e-14
    v = np.diag([1e7, 1e-7])
    with pytest.raises(DegenerateChannelError, match="normalization"):
        physical_channel(v, np.diag([0.0, 1.0]))


def test_fibonacci_sphere():
    pts = fibonacci_sphere(100)
    assert pts.shape == (100, 3)
    assert np.allclose(np.linalg.norm(pts, axis=1), 1)
    assert np.abs(pts.mean(axis=0)).max() < 0.02
    with pytest.raises(ValueError):
        fibonacci_sphere(0)


def test_bloch_identity_and_rotation():
    pin, pout, weights = bloch_image(I2, 50)
    assert np.allclose(pin, pout) and np.allclose(weights, 1)
    v = expm_traceless(0.35j * Z)
    pin, pout, weights = bloch_image(v, 50)
    rot = lorentz_matrix(v)[1:, 1:]
    assert np.allclose(pout, pin @ rot.T, atol=1e-12)
    assert np.allclose(weights, 1)


def test_bloch_boost_squeezes():
    v = expm_traceless(-0.6 * X / 2)
    pin, pout, weights = bloch_image(v, 200)
    assert np.allclose(np.linalg.norm(pout, axis=1), 1, atol=1e-9)
    assert weights.max() - weights.min() > 0.5
    # weight is the time component of Lambda x
    lam = lorentz_matrix(v)
    assert np.allclose(weights, lam[0, 0] + pin @ lam[0, 1:])
    assert bloch_rows(pin, pout, weights).shape == (200, 7)
