"""SL(2,C) as fractional-linear maps ``z -> (a z + b) / (c z + d)`` on the Riemann sphere.

Points are complex numbers or the sentinel :data:`INFINITY`. A spinor
``(psi_1, psi_2)`` corresponds to ``z = psi_1 / psi_2``, so ``V psi`` maps to
``apply(from_sl2c(V), z)``.
"""

from dataclasses import dataclass

import numpy as np

from .algebra import as_sl2c
from .qsp import as_phases, phase_factor, rotation_factor, signal_value

POLE_FLOOR = 1e-300


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()


def is_infinite(z):
    return z is INFINITY


def as_point(z):
    """Normalize to a finite complex or :data:`INFINITY`; NaN is rejected."""
    if z is INFINITY:
        return z
    z = complex(z)
    if np.isnan(z.real) or np.isnan(z.imag):
        raise ValueError("NaN is not a point of the extended plane")
    if np.isinf(z.real) or np.isinf(z.imag):
        return INFINITY
    return z


def _ratio(num, den):
    if abs(den) < POLE_FLOOR:
        return INFINITY
    q = num / den
    return INFINITY if not np.isfinite(q) else complex(q)


@dataclass(frozen=True)
class MobiusMap:
    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        for k in "abcd":
            object.__setattr__(self, k, complex(getattr(self, k)))
        det = self.a * self.d - self.b * self.c
        if abs(det - 1) > 1e-10 * max(1.0, abs(self.a * self.d), abs(self.b * self.c)):
            raise ValueError(f"Moebius coefficients need ad - bc = 1, got {det}")

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    @classmethod
    def from_matrix(cls, m):
        m = as_sl2c(m)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    def matrix(self):
        return np.array([[self.a, self.b], [self.c, self.d]])

    def inverse(self):
        return MobiusMap(self.d, -self.b, -self.c, self.a)

    def __call__(self, z):
        return apply(self, z)


def from_sl2c(v):
    """``a, b, c, d`` are the entries of ``V``."""
    return MobiusMap.from_matrix(v)


def apply(m, z):
    z = as_point(z)
    if z is INFINITY:
        return _ratio(m.a, m.c)
    return _ratio(m.a * z + m.b, m.c * z + m.d)


def compose(m1, m2):
    """``m1 . m2``, i.e. ``z -> m1(m2(z))``."""
    prod = m1.matrix() @ m2.matrix()
    return MobiusMap(*prod.ravel())


def chordal_distance(z1, z2):
    """Distance on the unit-diameter Riemann sphere; handles :data:`INFINITY`."""
    z1, z2 = as_point(z1), as_point(z2)
    if z1 is INFINITY and z2 is INFINITY:
        return 0.0
    if z1 is INFINITY:
        return 1 / np.sqrt(1 + abs(z2) ** 2)
    if z2 is INFINITY:
        return 1 / np.sqrt(1 + abs(z1) ** 2)
    return abs(z1 - z2) / (np.sqrt(1 + abs(z1) ** 2) * np.sqrt(1 + abs(z2) ** 2))


def sequence_maps(schedule, signal):
    """Per-factor maps of ``e^{i phi_0 Z} prod e^{i w X} e^{i phi_r Z}``, left to right."""
    phases = as_phases(schedule)
    w = complex(signal_value(signal))
    rot = from_sl2c(rotation_factor(w))
    maps = [from_sl2c(phase_factor(phases[0]))]
    for phi in phases[1:]:
        maps += [rot, from_sl2c(phase_factor(phi))]
    return maps


def qsp_scale_flow(schedule, signal, z0):
    """Trajectory of ``z0`` as the factors act right to left; starts with ``z0``."""
    z = as_point(z0)
    trajectory = [z]
    for m in reversed(sequence_maps(schedule, signal)):
        z = apply(m, z)
        trajectory.append(z)
    return trajectory


@dataclass(frozen=True)
class Affine:
    """``z -> e z + f``."""

    e: complex
    f: complex

    def __call__(self, z):
        z = as_point(z)
        return INFINITY if z is INFINITY else complex(self.e * z + self.f)


@dataclass(frozen=True)
class Inversion:
    """``z -> 1 / z``."""

    def __call__(self, z):
        z = as_point(z)
        if z is INFINITY:
            return 0j
        return _ratio(1, z)


SMALL_C = 1e-3


def decompose_elementary(m):
    """Affine and inversion steps, in the order applied, whose composition is ``m``.

    For ``c != 0``: ``u = c z + d``, ``v = 1/u``, ``z' = -v/c + a/c`` (using
    ``ad - bc = 1``). For ``c = 0`` a single step ``z -> (a/d) z + b/d``.

    The three-step chain cancels terms of size ``1/c``, so when ``|c|`` is below
    ``SMALL_C`` times the largest entry the mirrored chain for
    ``z -> (b u + a) / (d u + c)`` with ``u = 1/z`` is used instead:
    inversion, ``t = d u + c``, inversion, ``z' = v/d + b/d``.
    """
    if m.c == 0:
        return [Affine(m.a / m.d, m.b / m.d)]
    scale = max(abs(m.a), abs(m.b), abs(m.c), abs(m.d))
    if abs(m.c) < SMALL_C * scale and abs(m.d) > abs(m.c):
        return [Inversion(), Affine(m.d, m.c), Inversion(), Affine(1 / m.d, m.b / m.d)]
    return [Affine(m.c, m.d), Inversion(), Affine(-1 / m.c, m.a / m.c)]


def apply_steps(steps, z):
    for step in steps:
        z = step(z)
    return z


def point_to_json(z):
    return None if z is INFINITY else [z.real, z.imag]
