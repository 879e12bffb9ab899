"""Complexified QSP sequences with a complex signal ``w = (delta + i eta)/2``.

A phase schedule ``(phi_0, ..., phi_m)`` defines

    V(w) = e^{i phi_0 Z} prod_{r=1}^{m} e^{i w X} e^{i phi_r Z}

so a schedule of length ``m + 1`` carries exactly ``m`` signal factors.
``V`` is unimodular for every complex ``w``; it is unitary for real ``w``
(``eta = 0``) and lies in SU(1,1) for imaginary ``w`` (``delta = 0``).
"""

from dataclasses import dataclass, field

import mpmath
import numpy as np
from numpy.polynomial import chebyshev as cheb
from numpy.polynomial import polynomial as poly

from .algebra import I2, expm_traceless, generators

CANONICAL = "canonical"
PHASE_SIGNAL = "phase-signal"
ORDERINGS = (CANONICAL, PHASE_SIGNAL)


@dataclass(frozen=True)
class ComplexSignal:
    """Signal angle ``w = (delta + i eta) / 2``; ``eta`` plays the role of a rapidity."""

    delta: float
    eta: float

    def __post_init__(self):
        if not (np.isfinite(self.delta) and np.isfinite(self.eta)):
            raise ValueError("delta and eta must be finite")

    @property
    def w(self):
        return complex(self.delta, self.eta) / 2

    @classmethod
    def from_w(cls, w):
        w = complex(w)
        return cls(2 * w.real, 2 * w.imag)


def as_phases(schedule):
    phases = np.asarray(schedule, dtype=float).ravel()
    if phases.size < 1:
        raise ValueError("a phase schedule needs at least one phase")
    if not np.all(np.isfinite(phases)):
        raise ValueError("phase schedule has non-finite entries")
    return phases


def signal_value(signal):
    """Accept a ComplexSignal, a complex number or an array of complex w."""
    if isinstance(signal, ComplexSignal):
        return signal.w
    return np.asarray(signal, dtype=complex) if np.ndim(signal) else complex(signal)


def phase_factor(phi):
    """``e^{i phi Z}``."""
    return np.diag([np.exp(1j * phi), np.exp(-1j * phi)])


def rotation_factor(w, dtype=complex):
    """``e^{i w X}`` for scalar or array ``w``; shape ``w.shape + (2, 2)``."""
    w = np.asarray(w, dtype=dtype)
    c = np.cos(w)
    s = dtype(1j) * np.sin(w)
    out = np.empty(w.shape + (2, 2), dtype=dtype)
    out[..., 0, 0] = c
    out[..., 1, 1] = c
    out[..., 0, 1] = s
    out[..., 1, 0] = s
    return out


def signal_factor(signal):
    """``exp(i delta J1 + i eta K1)``, which equals ``e^{i w X}``."""
    if not isinstance(signal, ComplexSignal):
        signal = ComplexSignal.from_w(signal)
    g = generators()
    return expm_traceless(1j * signal.delta * g["J1"] + 1j * signal.eta * g["K1"])


def _scale_columns(v, phi):
    # right-multiplication by the diagonal e^{i phi Z}
    e = np.exp(v.dtype.type(1j) * phi)
    v[..., :, 0] *= e
    v[..., :, 1] /= e
    return v


def evaluate(schedule, signal, ordering=CANONICAL, dtype=complex):
    """Evaluate the sequence matrix.

    Parameters
    ----------
    schedule : sequence of float
        Phases ``phi_0 .. phi_m``.
    signal : ComplexSignal, complex or array of complex
        The signal ``w``. Arrays broadcast; the result has shape
        ``w.shape + (2, 2)``.
    ordering : {"canonical", "phase-signal"}
        ``canonical`` is ``e^{i phi_0 Z} prod e^{i w X} e^{i phi_r Z}``.
        ``phase-signal`` is ``prod_r e^{i phi_r Z} e^{i w X}`` over all phases
        (one signal factor per phase, trailing), the generator-product form
        ``prod e^{2 i phi_r J3} e^{i delta J1 + i eta K1}``.
    dtype : complex or numpy.clongdouble
        Accumulation precision. Rounding limits ``det V`` to about
        ``eps * |V|**2``; strongly boosted long sequences need
        ``numpy.clongdouble`` to hold the determinant to 1e-10.
    """
    phases = as_phases(schedule)
    if dtype is not complex:
        phases = phases.astype(np.longdouble)
    w = signal_value(signal)
    rot = rotation_factor(w, dtype=dtype)
    if ordering == CANONICAL:
        v = _scale_columns(np.broadcast_to(I2, rot.shape).copy(), phases[0])
        for phi in phases[1:]:
            v = _scale_columns(v @ rot, phi)
    elif ordering == PHASE_SIGNAL:
        v = np.broadcast_to(I2, rot.shape).copy()
        for phi in phases:
            v = _scale_columns(v, phi) @ rot
    else:
        raise ValueError(f"unknown ordering {ordering!r}; expected one of {ORDERINGS}")
    return v


# Separate context so results keep their precision outside any workdps block.
MP = mpmath.MPContext()
MP.dps = 50


def evaluate_mp(schedule, signal, ordering=CANONICAL):
    """Sequence matrix in 50-digit arithmetic as a 2x2 object array of ``MP.mpc``.

    Inputs are converted exactly, so the only error is the working precision.
    Only a scalar signal is supported.
    """
    phases = as_phases(schedule)
    w = signal_value(signal)
    if np.ndim(w):
        raise ValueError("evaluate_mp takes a single signal value")
    w = MP.mpc(w.real, w.imag)
    c, s = MP.cos(w), MP.j * MP.sin(w)
    rot = MP.matrix([[c, s], [s, c]])

    def phase(phi):
        e = MP.expj(MP.mpf(float(phi)))
        return MP.matrix([[e, 0], [0, MP.conj(e)]])

    if ordering == CANONICAL:
        v = phase(phases[0])
        for phi in phases[1:]:
            v = v * rot * phase(phi)
    elif ordering == PHASE_SIGNAL:
        v = MP.eye(2)
        for phi in phases:
            v = v * phase(phi) * rot
    else:
        raise ValueError(f"unknown ordering {ordering!r}; expected one of {ORDERINGS}")
    return np.array(v.tolist(), dtype=object)


def evaluate_accurate(schedule, signal, ordering=CANONICAL, tol=1e-12):
    """Evaluate with the cheapest precision whose rounding floor is below ``tol``.

    Quadratic quantities such as ``det V`` or ``|a|^2 - |b|^2`` carry an error
    of roughly ``m eps |V|^2`` for ``m`` factors, which for boosted sequences
    exceeds double (and even extended) precision. The precision is raised from
    ``complex128`` to ``clongdouble`` to :func:`evaluate_mp` until that bound
    drops below ``tol``; the return type follows.
    """
    phases = as_phases(schedule)
    for dtype in (complex, np.clongdouble):
        v = evaluate(phases, signal, ordering=ordering, dtype=dtype)
        eps = np.finfo(np.longdouble if dtype is not complex else float).eps
        if phases.size * eps * float(np.sum(np.abs(v) ** 2)) <= tol:
            return v
    return evaluate_mp(phases, signal, ordering=ordering)


def concat_schedules(first, second):
    """Schedule whose sequence is ``evaluate(first) @ evaluate(second)``.

    Adjacent Z phases merge, so the result has ``len(first) + len(second) - 1``
    entries.
    """
    a, b = as_phases(first), as_phases(second)
    return np.concatenate([a[:-1], [a[-1] + b[0]], b[1:]])


def su11_structure_check(v):
    """Distance of ``v`` from the SU(1,1) form ``[[a, b], [b*, a*]]``, ``|a|^2 - |b|^2 = 1``."""
    v = np.asarray(v)
    return max(
        abs(v[1, 1] - np.conj(v[0, 0])),
        abs(v[1, 0] - np.conj(v[0, 1])),
        abs(abs(v[0, 0]) ** 2 - abs(v[0, 1]) ** 2 - 1),
    )


def _parity(coeffs, tol=1e-9):
    coeffs = np.asarray(coeffs)
    scale = max(np.abs(coeffs).max(), 1e-300)
    even = np.all(np.abs(coeffs[1::2]) <= tol * scale)
    odd = np.all(np.abs(coeffs[0::2]) <= tol * scale)
    if even and odd:
        return "zero"
    return "even" if even else "odd" if odd else "mixed"


@dataclass
class EntryPolynomials:
    """P, Q, R, S as power-series coefficients in ``a = cos w`` (ascending)."""

    P: np.ndarray
    Q: np.ndarray
    R: np.ndarray
    S: np.ndarray
    degree: int
    residual: float
    parity: dict = field(default_factory=dict)

    def evaluate(self, w):
        """Reassemble ``[[P, i Q sin w], [i R sin w, S]]`` at (complex) ``w``."""
        w = np.asarray(w, dtype=complex)
        a = np.cos(w)
        s = np.sin(w)
        out = np.empty(w.shape + (2, 2), dtype=complex)
        out[..., 0, 0] = poly.polyval(a, self.P)
        out[..., 0, 1] = 1j * s * poly.polyval(a, self.Q)
        out[..., 1, 0] = 1j * s * poly.polyval(a, self.R)
        out[..., 1, 1] = poly.polyval(a, self.S)
        return out

    def determinant_identity_residual(self):
        """Max coefficient of ``P S + Q R (1 - a^2) - 1``."""
        lhs = poly.polyadd(
            poly.polymul(self.P, self.S),
            poly.polymul(poly.polymul(self.Q, self.R), [1.0, 0.0, -1.0]),
        )
        lhs = poly.polysub(lhs, [1.0])
        return float(np.abs(lhs).max())

    def to_json(self):
        pairs = lambda c: [[float(z.real), float(z.imag)] for z in np.asarray(c, dtype=complex)]
        return {
            "P": pairs(self.P),
            "Q": pairs(self.Q),
            "R": pairs(self.R),
            "S": pairs(self.S),
            "degree": int(self.degree),
            "residual": float(self.residual),
            "parity": dict(self.parity),
        }


def chebyshev_signal_nodes(n, shift=1e-3):
    """Real signal angles whose cosines are Chebyshev nodes pulled in from +-1."""
    k = np.arange(n)
    a = np.cos((2 * k + 1) * np.pi / (2 * n)) * (1 - shift)
    return np.arccos(a)


def fit_entry_polynomials(schedule, n_samples=None, ordering=CANONICAL):
    """Least-squares fit of the entry polynomials from real-``w`` samples.

    The off-diagonal entries are divided by ``i sin w`` before fitting. The
    default sample count is ``2 (m + 2)`` for ``m`` signal factors, and any
    count below ``m + 2`` is rejected.
    """
    phases = as_phases(schedule)
    m = phases.size - 1 if ordering == CANONICAL else phases.size
    if n_samples is None:
        n_samples = 2 * (m + 2)
    if n_samples < m + 2:
        raise ValueError(f"need at least m + 2 = {m + 2} samples for {m} signal factors, got {n_samples}")
    w = chebyshev_signal_nodes(n_samples)
    w = w[np.abs(np.sin(w)) >= 1e-6]
    if w.size < m + 2:
        raise ValueError("too few usable sample nodes after discarding sin(w) ~ 0")
    a = np.cos(w)
    sin_w = np.sin(w)
    v = evaluate(phases, w, ordering=ordering)
    targets = {
        "P": v[:, 0, 0],
        "Q": v[:, 0, 1] / (1j * sin_w),
        "R": v[:, 1, 0] / (1j * sin_w),
        "S": v[:, 1, 1],
    }
    coeffs = {}
    for name, y in targets.items():
        c = cheb.chebfit(a, y, m)
        coeffs[name] = cheb.cheb2poly(c)
    fitted = EntryPolynomials(degree=0, residual=0.0, **coeffs)
    fitted.residual = float(np.abs(fitted.evaluate(w) - v).max())
    scale = max(np.abs(np.concatenate(list(coeffs.values()))).max(), 1e-300)
    nonzero = [k for name in coeffs for k, c in enumerate(coeffs[name]) if abs(c) > 1e-10 * scale]
    fitted.degree = max(nonzero, default=0)
    fitted.parity = {name: _parity(c) for name, c in coeffs.items()}
    return fitted


SCHEDULE_KEYS = {"phases", "delta", "eta"}


def parse_schedule_document(doc):
    """Validate ``{"phases": [...], "delta": .., "eta": ..}``; delta/eta optional."""
    if not isinstance(doc, dict):
        raise ValueError("schedule document must be a JSON object")
    unknown = set(doc) - SCHEDULE_KEYS
    if unknown:
        raise ValueError(f"unknown keys in schedule document: {sorted(unknown)}")
    if "phases" not in doc:
        raise ValueError("schedule document needs a 'phases' list")
    phases = as_phases(doc["phases"])
    signal = None
    if "delta" in doc or "eta" in doc:
        signal = ComplexSignal(float(doc.get("delta", 0.0)), float(doc.get("eta", 0.0)))
    return phases, signal
