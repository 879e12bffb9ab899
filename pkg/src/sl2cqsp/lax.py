"""AKNS operators, the rotating-frame propagator and Lax-pair residual checks.

``A = [[i lam, r], [s, -i lam]]``. The gauge ``g = e^{i lam Z x}`` removes the
diagonal and leaves

    A_g = [[0, r e^{-2 i lam x}], [s e^{2 i lam x}, 0]]

(rate ``2 lam``; the half-rate variant ``e^{-+ i lam x}`` is available through
``half_rate=True``). The propagator ``dG/dx = A_g G`` is integrated with the
exponential midpoint rule.
"""

import csv
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .algebra import I2, expm_traceless

MIN_POINTS = 5


def _uniform_spacing(values, name):
    values = np.asarray(values, dtype=float).ravel()
    if values.size < MIN_POINTS:
        raise ValueError(f"{name} needs at least {MIN_POINTS} points, got {values.size}")
    steps = np.diff(values)
    h = steps.mean()
    if h <= 0:
        raise ValueError(f"{name} must be increasing")
    if np.abs(steps - h).max() > 1e-12 * max(1.0, np.abs(values).max()):
        raise ValueError(f"{name} grid is not uniform")
    return values, float(h)


@dataclass(frozen=True)
class WaveSamples:
    """``f[i, j] = f(x_j, t_i)``; ``t`` may be omitted for a single time slice."""

    x: np.ndarray
    f: np.ndarray
    t: np.ndarray = None

    def __post_init__(self):
        x, hx = _uniform_spacing(self.x, "x")
        f = np.asarray(self.f)
        if self.t is None:
            f = f.reshape(1, -1) if f.ndim == 1 else f
            if f.shape[0] != 1:
                raise ValueError("2-D samples need t values")
        else:
            t, ht = _uniform_spacing(self.t, "t")
            object.__setattr__(self, "t", t)
            object.__setattr__(self, "ht", ht)
            if f.shape != (t.size, x.size):
                raise ValueError(f"samples must have shape (len(t), len(x)) = {(t.size, x.size)}, got {f.shape}")
        if f.shape[-1] != x.size:
            raise ValueError("sample count does not match the x grid")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "hx", hx)
        object.__setattr__(self, "f", f)

    @classmethod
    def from_function(cls, func, x, t):
        xx, tt = np.meshgrid(x, t)
        return cls(np.asarray(x, dtype=float), func(xx, tt), np.asarray(t, dtype=float))


def load_wave_csv(path):
    """Read ``x, t, re_f, im_f`` rows into :class:`WaveSamples` (full grid required)."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        needed = {"x", "t", "re_f", "im_f"}
        if reader.fieldnames is None or not needed <= set(reader.fieldnames):
            raise ValueError(f"wave CSV needs columns {sorted(needed)}")
        extra = set(reader.fieldnames) - needed
        if extra:
            raise ValueError(f"unknown wave CSV columns: {sorted(extra)}")
        rows = [(float(r["x"]), float(r["t"]), complex(float(r["re_f"]), float(r["im_f"]))) for r in reader]
    if not rows:
        raise ValueError("wave CSV is empty")
    xs = np.unique([r[0] for r in rows])
    ts = np.unique([r[1] for r in rows])
    if len(rows) != xs.size * ts.size:
        raise ValueError("wave CSV does not cover a full (x, t) grid")
    f = np.full((ts.size, xs.size), np.nan, dtype=complex)
    for x, t, v in rows:
        f[np.searchsorted(ts, t), np.searchsorted(xs, x)] = v
    if np.isnan(f).any():
        raise ValueError("wave CSV has duplicate or missing grid points")
    return WaveSamples(xs, f, ts)


class AknsOperator:
    """``A(x) = i lam Z + r(x) sigma^+ + s(x) sigma^-`` on a uniform x grid."""

    def __init__(self, lam, x, r, s):
        self.lam = float(lam)
        self.x, self.h = _uniform_spacing(x, "x")
        self.r = np.asarray(r, dtype=complex).ravel()
        self.s = np.asarray(s, dtype=complex).ravel()
        if self.r.size != self.x.size or self.s.size != self.x.size:
            raise ValueError("r and s must be sampled on the x grid")
        self._r = CubicSpline(self.x, self.r)
        self._s = CubicSpline(self.x, self.s)

    @classmethod
    def from_wave(cls, lam, x, f):
        """Zakharov-Shabat choice ``r = f``, ``s = -conj(f)``."""
        f = np.asarray(f, dtype=complex)
        return cls(lam, x, f, -f.conj())

    def coefficients(self, x):
        x = float(x)
        if not self.x[0] - 1e-12 <= x <= self.x[-1] + 1e-12:
            raise ValueError(f"x = {x} outside the sampled range [{self.x[0]}, {self.x[-1]}]")
        return complex(self._r(x)), complex(self._s(x))


def akns_matrix(op, index):
    """``[[i lam, r_i], [s_i, -i lam]]`` at grid index ``index``."""
    if not -op.x.size <= index < op.x.size:
        raise IndexError(f"grid index {index} out of range for {op.x.size} points")
    return np.array([[1j * op.lam, op.r[index]], [op.s[index], -1j * op.lam]])


def gauge_rotate(op, x, half_rate=False):
    """Rotating-frame operator at coordinate ``x``.

    ``half_rate=True`` uses the phase rate ``lam`` instead of the rate ``2 lam``
    that follows from ``g = e^{i lam Z x}``.
    """
    r, s = op.coefficients(x)
    rate = op.lam if half_rate else 2 * op.lam
    phase = np.exp(1j * rate * x)
    return np.array([[0, r / phase], [s * phase, 0]])


def gauge_rotate_direct(op, x):
    """``g^{-1} A g - g^{-1} dg/dx`` evaluated as matrices (oracle for :func:`gauge_rotate`)."""
    r, s = op.coefficients(x)
    a = np.array([[1j * op.lam, r], [s, -1j * op.lam]])
    g = np.diag([np.exp(1j * op.lam * x), np.exp(-1j * op.lam * x)])
    ginv = np.diag([np.exp(-1j * op.lam * x), np.exp(1j * op.lam * x)])
    dg = 1j * op.lam * np.diag([1.0, -1.0]) @ g
    return ginv @ a @ g - ginv @ dg


def propagate(op, x0, x1, h, half_rate=False):
    """``G(x1)`` from ``G(x0) = 1`` via ``G <- expm(h A_g(x_mid)) G``.

    The interval is split into ``round((x1 - x0) / h)`` equal steps; ``h`` may
    not exceed the sample spacing.
    """
    if h <= 0:
        raise ValueError("step h must be positive")
    if h > op.h * (1 + 1e-12):
        raise ValueError(f"step {h} exceeds the sample spacing {op.h}")
    length = x1 - x0
    n = max(1, int(round(abs(length) / h)))
    step = length / n
    g = I2.copy()
    for k in range(n):
        mid = x0 + (k + 0.5) * step
        g = expm_traceless(step * gauge_rotate(op, mid, half_rate)) @ g
    return g


# ------------------------------------------------------------ residual checks


def _central(f, h, axis):
    return (np.roll(f, -1, axis) - np.roll(f, 1, axis)) / (2 * h)


def nls_lax_pair(f, fx, lam):
    """``A`` and ``P`` of the Zakharov-Shabat/NLS Lax pair as ``(..., 2, 2)`` arrays."""
    f = np.asarray(f, dtype=complex)
    a = np.empty(f.shape + (2, 2), dtype=complex)
    a[..., 0, 0] = 1j * lam
    a[..., 0, 1] = f
    a[..., 1, 0] = -f.conj()
    a[..., 1, 1] = -1j * lam
    diag = 1j * (2 * lam**2 - np.abs(f) ** 2)
    p = np.empty_like(a)
    p[..., 0, 0] = diag
    p[..., 0, 1] = 2 * lam * f - 1j * fx
    p[..., 1, 0] = -2 * lam * f.conj() - 1j * fx.conj()
    p[..., 1, 1] = -diag
    return a, p


def zero_curvature_residual_nls(wave, lam):
    """Max interior ``|dA/dt - dP/dx + [A, P]|_F`` for the Zakharov-Shabat operator.

    ``dx f`` inside ``P`` and then ``dx P`` both use central differences, so the
    stencil reaches two points in x; those and the first/last time slice are
    excluded.
    """
    if wave.t is None:
        raise ValueError("zero-curvature check needs samples on an (x, t) grid")
    f = wave.f.astype(complex)
    fx = _central(f, wave.hx, 1)
    a, p = nls_lax_pair(f, fx, lam)
    dta = _central(a, wave.ht, 0)
    dxp = _central(p, wave.hx, 1)
    curv = dta - dxp + a @ p - p @ a
    interior = curv[1:-1, 2:-2]
    return float(np.linalg.norm(interior, axis=(-2, -1)).max())


def nls_residual(wave):
    """Max interior ``|i f_t - f_xx - 2 |f|^2 f|`` (direct check of the wave equation)."""
    f = wave.f.astype(complex)
    ft = _central(f, wave.ht, 0)
    fxx = (np.roll(f, -1, 1) - 2 * f + np.roll(f, 1, 1)) / wave.hx**2
    res = 1j * ft - fxx - 2 * np.abs(f) ** 2 * f
    return float(np.abs(res[1:-1, 1:-1]).max())


def kdv_residual(wave):
    """Max interior ``|f_t - f_xxx - f f_x|`` with second-order central stencils."""
    if wave.t is None:
        raise ValueError("KdV check needs samples on an (x, t) grid")
    f = np.asarray(wave.f)
    if np.iscomplexobj(f):
        if np.abs(f.imag).max() > 0:
            raise ValueError("KdV residual needs real-valued samples")
        f = f.real
    h = wave.hx
    ft = _central(f, wave.ht, 0)
    fx = _central(f, h, 1)
    fxxx = (np.roll(f, -2, 1) - 2 * np.roll(f, -1, 1) + 2 * np.roll(f, 1, 1) - np.roll(f, 2, 1)) / (2 * h**3)
    res = ft - fxxx - f * fx
    return float(np.abs(res[1:-1, 2:-2]).max())


def nls_soliton(a=1.0):
    return lambda x, t: a / np.cosh(a * x) * np.exp(-1j * a * a * t)


def kdv_soliton(k=0.5):
    return lambda x, t: 12 * k * k / np.cosh(k * (x + 4 * k * k * t)) ** 2


def convergence_table(steps, residuals):
    """Rows ``(h, residual, ratio)`` with ``ratio = previous residual / residual``."""
    rows = []
    prev = None
    for h, r in zip(steps, residuals):
        ratio = prev / r if prev is not None and r != 0 else float("nan")
        rows.append((float(h), float(r), float(ratio)))
        prev = r
    return rows


def residual_convergence(func, kind, x_range, t_range, nx, nt, levels=3, lam=0.0):
    """Residual under repeated halving of both spacings.

    ``kind`` is ``"nls"`` or ``"kdv"``; grid point counts go ``n -> 2n - 1``.
    """
    checks = {"nls": lambda w: zero_curvature_residual_nls(w, lam), "kdv": kdv_residual}
    if kind not in checks:
        raise ValueError(f"unknown residual kind {kind!r}")
    steps, res = [], []
    for _ in range(levels):
        x = np.linspace(*x_range, nx)
        t = np.linspace(*t_range, nt)
        wave = WaveSamples.from_function(func, x, t)
        steps.append(wave.hx)
        res.append(checks[kind](wave))
        nx, nt = 2 * nx - 1, 2 * nt - 1
    return convergence_table(steps, res)
