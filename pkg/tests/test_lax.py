import numpy as np
import pytest
from scipy.integrate import solve_ivp

from sl2cqsp.algebra import I2, X, Z, dagger, det2
from sl2cqsp.lax import (
    AknsOperator,
    WaveSamples,
    akns_matrix,
    convergence_table,
    gauge_rotate,
    gauge_rotate_direct,
    kdv_residual,
    kdv_soliton,
    load_wave_csv,
    nls_residual,
    nls_soliton,
    propagate,
    residual_convergence,
    zero_curvature_residual_nls,
)
from sl2cqsp.nlft import zs_discrete_propagate


def window_wave(x):
    return 0.8j / np.cosh(x)


def lab_frame_oracle(op, x0, x1):
    """Integrate d psi/dx = A psi in the lab frame and move to the rotating frame."""

    def rhs(x, y):
        r, s = op.coefficients(x)
        a = np.array([[1j * op.lam, r], [s, -1j * op.lam]])
        return (a @ y.reshape(2, 2)).ravel()

    sol = solve_ivp(rhs, (x0, x1), I2.ravel(), rtol=1e-12, atol=1e-12, method="DOP853")
    lab = sol.y[:, -1].reshape(2, 2)
    g = lambda x: np.diag([np.exp(1j * op.lam * x), np.exp(-1j * op.lam * x)])
    return np.linalg.inv(g(x1)) @ lab @ g(x0)


def test_wave_validation():
    x = np.linspace(0, 1, 6)
    WaveSamples(x, np.zeros(6))
    with pytest.raises(ValueError, match="uniform"):
        WaveSamples(np.array([0, 0.1, 0.3, 0.4, 0.5]), np.zeros(5))
    with pytest.raises(ValueError, match="at least"):
        WaveSamples(np.linspace(0, 1, 4), np.zeros(4))
    with pytest.raises(ValueError, match="shape"):
        WaveSamples(x, np.zeros((3, 6)), np.linspace(0, 1, 5))
    with pytest.raises(ValueError, match="increasing"):
        WaveSamples(x[::-1], np.zeros(6))


def test_wave_csv_roundtrip(tmp_path):
    x, t = np.linspace(-1, 1, 5), np.linspace(0, 0.4, 5)
    wave = WaveSamples.from_function(nls_soliton(), x, t)
    path = tmp_path / "wave.csv"
    lines = ["x,t,re_f,im_f"]
    for i, tv in enumerate(t):
        for j, xv in enumerate(x):
            lines.append(",".join(repr(float(v)) for v in (xv, tv, wave.f[i, j].real, wave.f[i, j].imag)))
    path.write_text("\n".join(lines) + "\n")
    back = load_wave_csv(path)
    assert np.array_equal(back.f, wave.f) and np.array_equal(back.x, x)
    path.write_text("\n".join(lines[:-1]) + "\n")
    with pytest.raises(ValueError, match="grid"):
        load_wave_csv(path)
    path.write_text("x,t,re_f\n0,0,1\n")
    with pytest.raises(ValueError, match="columns"):
        load_wave_csv(path)


def test_akns_matrix_examples():
    x = np.linspace(0, 1, 5)
    op = AknsOperator(0.3, x, np.zeros(5), np.zeros(5))
    assert np.allclose(akns_matrix(op, 2), 0.3j * Z)
    op = AknsOperator(0.0, x, np.ones(5), -np.ones(5))
    assert np.array_equal(akns_matrix(op, 0), [[0, 1], [-1, 0]])
    with pytest.raises(IndexError):
        akns_matrix(op, 5)


def test_zakharov_shabat_is_su2(rng):
    x = np.linspace(-1, 1, 9)
    f = rng.normal(size=9) + 1j * rng.normal(size=9)
    op = AknsOperator.from_wave(0.4, x, f)
    for i in range(9):
        a = akns_matrix(op, i)
        assert np.allclose(a, -dagger(a)) and np.trace(a) == 0
        assert np.allclose(a - 0.4j * Z, -dagger(a - 0.4j * Z))


def test_gauge_examples():
    x = np.linspace(0, 2, 9)
    zero = AknsOperator(0.7, x, np.zeros(9), np.zeros(9))
    assert np.array_equal(gauge_rotate(zero, 1.1), np.zeros((2, 2)))
    op = AknsOperator(0.0, x, np.full(9, 0.3 + 0.1j), np.full(9, -0.2j))
    a = akns_matrix(op, 3)
    assert np.allclose(gauge_rotate(op, x[3]), a - np.diag(np.diag(a)))


def test_gauge_matches_expansion(rng):
    x = np.linspace(0, 2, 9)
    op = AknsOperator(0.7, x, np.full(9, 0.3 + 0.1j), np.full(9, -0.2j))
    for xv in rng.uniform(0, 2, 5):
        assert np.abs(gauge_rotate(op, xv) - gauge_rotate_direct(op, xv)).max() < 1e-15


def test_gauge_phase_rate():
    x = np.linspace(0, 2, 9)
    lam = 0.7
    op = AknsOperator(lam, x, np.full(9, 0.3), np.full(9, 0.3))
    phase = lambda xv, half_rate: np.angle(gauge_rotate(op, xv, half_rate)[0, 1])
    assert np.isclose(phase(0.5, False) - phase(0.4, False), -2 * lam * 0.1)
    assert np.isclose(phase(0.5, True) - phase(0.4, True), -lam * 0.1)


def test_derived_rate_matches_lab_frame():
    x = np.linspace(-1.5, 1.5, 61)
    op = AknsOperator.from_wave(0.6, x, window_wave(x))
    oracle = lab_frame_oracle(op, -1.5, 1.5)
    assert np.abs(propagate(op, -1.5, 1.5, 0.005) - oracle).max() < 1e-5
    assert np.abs(propagate(op, -1.5, 1.5, 0.005, half_rate=True) - oracle).max() > 1e-2


def test_propagate_zero_wave():
    x = np.linspace(0, 3, 7)
    op = AknsOperator(1.3, x, np.zeros(7), np.zeros(7))
    assert np.allclose(propagate(op, 0, 3, 0.1), I2)


def test_propagate_constant():
    x = np.linspace(0, 2, 11)
    c, length = 0.4, 2.0
    op = AknsOperator(0.0, x, np.full(11, c), np.full(11, c))
    g = propagate(op, 0, length, 0.2)
    assert np.abs(g - (np.cosh(c * length) * I2 + np.sinh(c * length) * X)).max() < 1e-14


def test_propagate_errors():
    x = np.linspace(0, 1, 11)
    op = AknsOperator(0.0, x, np.zeros(11), np.zeros(11))
    with pytest.raises(ValueError, match="spacing"):
        propagate(op, 0, 1, 0.2)
    with pytest.raises(ValueError, match="positive"):
        propagate(op, 0, 1, 0.0)
    with pytest.raises(ValueError, match="outside"):
        propagate(op, 0, 2, 0.1)


def test_propagate_second_order():
    x = np.linspace(-1.5, 1.5, 31)
    op = AknsOperator.from_wave(0.6, x, window_wave(x))
    ref = propagate(op, -1.5, 1.5, 1e-3)
    assert abs(det2(ref) - 1) < 1e-10
    errs = [np.abs(propagate(op, -1.5, 1.5, h) - ref).max() for h in (0.1, 0.05, 0.025)]
    for a, b in zip(errs, errs[1:]):
        assert 3.5 <= a / b <= 4.5


def test_discrete_converges_first_order():
    lam, half = 0.6, 1.5
    x = np.linspace(-half, half, 601)
    op = AknsOperator.from_wave(lam, x, window_wave(x))
    ref = propagate(op, -half, half, 1e-3, half_rate=True)
    errs = []
    for d in (15, 30, 60):
        step = half / d
        samples = step * window_wave(np.arange(-d, d + 1) * step)
        errs.append(np.abs(zs_discrete_propagate(samples, 2 * lam * step, 0.0) - ref).max())
    for a, b in zip(errs, errs[1:]):
        assert 1.7 <= a / b <= 2.3


def test_nls_zero_wave_exact():
    x, t = np.linspace(-1, 1, 9), np.linspace(0, 1, 5)
    wave = WaveSamples(x, np.zeros((5, 9), dtype=complex), t)
    for lam in (0.0, 0.7):
        assert zero_curvature_residual_nls(wave, lam) == 0.0


def test_soliton_solves_nls():
    res = []
    for nx, nt in ((201, 11), (401, 21)):
        wave = WaveSamples.from_function(nls_soliton(), np.linspace(-10, 10, nx), np.linspace(0, 0.5, nt))
        res.append(nls_residual(wave))
    assert 3.5 < res[0] / res[1] < 4.5


def test_nls_curvature_second_order():
    table = residual_convergence(nls_soliton(), "nls", (-10, 10), (0, 0.5), 201, 11, levels=3, lam=0.7)
    for _, _, ratio in table[1:]:
        assert 3.5 < ratio < 4.5


def test_nls_non_solution_has_limit():
    wrong = lambda x, t: np.exp(-(x**2)) * np.exp(-1j * t)
    table = residual_convergence(wrong, "nls", (-10, 10), (0, 0.5), 201, 11, levels=3, lam=0.3)
    res = [r for _, r, _ in table]
    assert min(res) > 0.5
    assert abs(res[-1] - res[-2]) < 0.05 * res[-1]


def test_nls_needs_time_grid():
    wave = WaveSamples(np.linspace(0, 1, 5), np.zeros(5))
    with pytest.raises(ValueError, match="grid"):
        zero_curvature_residual_nls(wave, 0.1)


def test_kdv_trivial_waves():
    x, t = np.linspace(-2, 2, 9), np.linspace(0, 1, 5)
    assert kdv_residual(WaveSamples(x, np.zeros((5, 9)), t)) == 0.0
    assert kdv_residual(WaveSamples(x, np.full((5, 9), 3.7), t)) == 0.0


def test_kdv_soliton_second_order():
    table = residual_convergence(kdv_soliton(0.5), "kdv", (-20, 20), (0, 0.5), 201, 11, levels=3)
    for _, _, ratio in table[1:]:
        assert 3.5 < ratio < 4.5


def test_kdv_wrong_amplitude_fails():
    # amplitude 6k^2 (the other common normalization) is not a solution here
    wrong = lambda x, t: 0.5 * kdv_soliton(0.5)(x, t)
    table = residual_convergence(wrong, "kdv", (-20, 20), (0, 0.5), 201, 11, levels=2)
    assert table[-1][1] > 1e-2


def test_kdv_rejects_complex():
    x, t = np.linspace(-2, 2, 9), np.linspace(0, 1, 5)
    with pytest.raises(ValueError, match="real"):
        kdv_residual(WaveSamples(x, np.full((5, 9), 1j), t))


def test_convergence_table():
    rows = convergence_table([0.1, 0.05], [4.0, 1.0])
    assert rows[0][:2] == (0.1, 4.0) and np.isnan(rows[0][2])
    assert rows[1] == (0.05, 1.0, 4.0)
    with pytest.raises(ValueError):
        residual_convergence(nls_soliton(), "heat", (-1, 1), (0, 1), 9, 9)
