"""Palindromic QSP sequences and the SL(2,C) nonlinear Fourier transform.

A palindromic schedule ``(psi_d, ..., psi_1, psi_0, psi_1, ..., psi_d)`` obeys
the two-sided recurrence

    U^k = e^{i psi_k Z} e^{i w X} U^{k-1} e^{i w X} e^{i psi_k Z},  U^0 = e^{i psi_0 Z}

and is tied to the truncated NLFT of ``F_n = i tan(psi_|n|)``. Several
conventions for that correspondence are plausible (index range, phase rate,
outer factors, Hadamard placement, global sign); :func:`calibrate_convention`
enumerates them by brute force. The resolved one is pinned as
:data:`RESOLVED_CONVENTION`:

    U^d = sign(cos psi_0) e^{i d w X} H G_d(2w) H e^{i d w X}

with ``G_d`` the symmetric two-sided NLFT over ``-d <= n <= d``.
"""

import itertools
from dataclasses import asdict, dataclass

import numpy as np

from .algebra import I2, X, det2
from .errors import CalibrationError, PoleError
from .qsp import evaluate, phase_factor, rotation_factor

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
POLE_TOL = 1e-9


def palindromic_schedule(psi):
    """``(psi_0, ..., psi_d) -> (psi_d, ..., psi_0, ..., psi_d)``."""
    psi = np.asarray(psi, dtype=float).ravel()
    if psi.size < 1:
        raise ValueError("need at least psi_0")
    return np.concatenate([psi[:0:-1], psi])


def qsp_recurrence(psi, w):
    """Build ``U^d`` from the centre outwards."""
    psi = np.asarray(psi, dtype=float).ravel()
    rot = rotation_factor(complex(w))
    u = phase_factor(psi[0])
    for p in psi[1:]:
        ph = phase_factor(p)
        u = ph @ rot @ u @ rot @ ph
    return u


class ImaginaryEvenSequence:
    """``F_n`` for ``-d <= n <= d`` with ``F_n = F_{-n} = -conj(F_n)``.

    Only ``F_0 .. F_d`` are stored; indexing with negative ``n`` reflects.
    """

    def __init__(self, values, tol=1e-12):
        values = np.asarray(values, dtype=complex).ravel()
        if values.size < 1:
            raise ValueError("need at least F_0")
        if not np.all(np.isfinite(values)):
            raise PoleError("sequence has infinite entries")
        if np.abs(values.real).max() > tol:
            raise ValueError(f"F must be purely imaginary (max |Re F| = {np.abs(values.real).max():.3e})")
        self._values = 1j * values.imag

    @classmethod
    def from_angles(cls, psi):
        """``F_n = i tan(psi_|n|)``; angles within 1e-9 of a pole are rejected."""
        psi = np.asarray(psi, dtype=float).ravel()
        bad = np.abs(np.cos(psi)) < POLE_TOL
        if np.any(bad):
            raise PoleError(f"psi = {psi[bad][0]!r} is within {POLE_TOL:g} of +-pi/2 (F infinite)")
        return cls(1j * np.tan(psi))

    @property
    def d(self):
        return self._values.size - 1

    def __getitem__(self, n):
        return self._values[abs(n)]

    def __len__(self):
        return 2 * self.d + 1

    def full(self):
        """Values for ``n = -d .. d``."""
        return np.concatenate([self._values[:0:-1], self._values])

    def symmetry_residual(self):
        f = self.full()
        return float(max(np.abs(f - f[::-1]).max(), np.abs(f + f.conj()).max()))


@dataclass(frozen=True)
class NlftMatrix:
    G: np.ndarray
    w: complex

    @property
    def z(self):
        return np.exp(2j * self.w)

    A = property(lambda self: self.G[0, 0])
    B = property(lambda self: self.G[0, 1])
    C = property(lambda self: self.G[1, 0])
    D = property(lambda self: self.G[1, 1])

    def det_residual(self):
        return float(abs(det2(self.G) - 1))


def _pair_factor(f, phase):
    # [[1, F e^{-i phase}], [F e^{i phase}, 1]]
    return np.array([[1, f * np.exp(-1j * phase)], [f * np.exp(1j * phase), 1]], dtype=complex)


def _radicand(f):
    r = 1 - f * f
    if abs(r) < 1e-300 or not np.isfinite(r):
        raise PoleError(f"1 - F^2 = {r} is singular")
    return r


def nlft_forward(F, w, d=None):
    """Two-sided NLFT recurrence.

    ``G_0 = [[1, F_0], [F_0, 1]] / sqrt(1 - F_0^2)`` and
    ``G_k = L_k G_{k-1} R_k / (1 - F_k^2)`` where ``L_k`` carries
    ``F_k e^{-+ i k w}`` and ``R_k`` the mirrored phases.
    """
    if not isinstance(F, ImaginaryEvenSequence):
        F = ImaginaryEvenSequence(F)
    d = F.d if d is None else int(d)
    if d > F.d or d < 0:
        raise ValueError(f"d = {d} outside the stored range 0..{F.d}")
    w = complex(w)
    f0 = F[0]
    g = np.array([[1, f0], [f0, 1]], dtype=complex) / np.sqrt(_radicand(f0))
    for k in range(1, d + 1):
        fk = F[k]
        g = _pair_factor(fk, k * w) @ g @ _pair_factor(fk, -k * w) / _radicand(fk)
    return NlftMatrix(g, w)


def nlft_steps(values, w, start):
    """Per-step product ``G <- M_n G`` with ``M_n = [[1, F_n e^{-inw}], [F_n e^{inw}, 1]] / sqrt(1 - F_n^2)``.

    ``values[k]`` is ``F_n`` for ``n = start + k``; also returns every
    intermediate matrix.
    """
    g = I2.copy()
    history = [g]
    for k, f in enumerate(values):
        n = start + k
        g = _pair_factor(f, n * w) @ g / np.sqrt(_radicand(f))
        history.append(g)
    return g, history


def zs_discrete_propagate(F, delta, eta, d=None, return_history=False):
    """Discretized rotating-frame Zakharov-Shabat recurrence from ``n = -d`` to ``n = d``.

    Uses ``Delta r_n = F_n e^{eta n / 2}``, ``Delta s_n = F_n e^{-eta n / 2}``
    and ``lambda Delta = delta / 2`` with ``G_{-d} = 1``; every step is
    normalized by ``1 / sqrt(1 - F_n^2)``. ``F`` is an
    :class:`ImaginaryEvenSequence` or any array of ``2d + 1`` samples for
    ``n = -d .. d`` (no symmetry required).
    """
    if isinstance(F, ImaginaryEvenSequence):
        d = F.d if d is None else int(d)
        samples = np.array([F[n] for n in range(-d, d + 1)])
    else:
        samples = np.asarray(F, dtype=complex).ravel()
        if samples.size % 2 != 1:
            raise ValueError("need an odd number of samples for n = -d .. d")
        d = (samples.size - 1) // 2
    lam_delta = delta / 2
    g = I2.copy()
    history = [g]
    for k, f in enumerate(samples):
        n = k - d
        dr = f * np.exp(eta * n / 2)
        ds = f * np.exp(-eta * n / 2)
        step = np.array(
            [[1, dr * np.exp(-1j * lam_delta * n)], [ds * np.exp(1j * lam_delta * n), 1]], dtype=complex
        )
        g = step @ g / np.sqrt(_radicand(f))
        history.append(g)
    return (g, history) if return_history else g


# ------------------------------------------------------------ correspondence


@dataclass(frozen=True)
class Convention:
    """One reading of the QSP/NLFT correspondence.

    index_range : "symmetric" (-d..d, two-sided) or "half-open" (-d..d-1, per step)
    phase_rate  : NLFT evaluated at ``phase_rate * w``
    outer       : outer X rotation, "signal" (e^{iwX}), "scaled" (e^{idwX}) or "none"
    hadamard    : "inside" (e^{..X} H G H e^{..X}) or "outside" (H e^{..X} G e^{..X} H)
    sign        : "none" or "cos-psi0" (global factor sign(cos psi_0))
    """

    index_range: str
    phase_rate: int
    outer: str
    hadamard: str
    sign: str

    def as_dict(self):
        return asdict(self)


CANDIDATE_AXES = {
    "index_range": ("symmetric", "half-open"),
    "phase_rate": (1, 2),
    "outer": ("signal", "scaled", "none"),
    "hadamard": ("inside", "outside"),
    "sign": ("none", "cos-psi0"),
}

NAIVE_CONVENTION = Convention("half-open", 1, "signal", "inside", "none")
RESOLVED_CONVENTION = Convention("symmetric", 2, "scaled", "inside", "cos-psi0")


def candidate_conventions():
    keys = list(CANDIDATE_AXES)
    return [Convention(**dict(zip(keys, combo))) for combo in itertools.product(*CANDIDATE_AXES.values())]


def nlft_side(psi, w, convention):
    """Right-hand side of the correspondence under ``convention``."""
    psi = np.asarray(psi, dtype=float).ravel()
    d = psi.size - 1
    F = ImaginaryEvenSequence.from_angles(psi)
    wn = convention.phase_rate * complex(w)
    if convention.index_range == "symmetric":
        g = nlft_forward(F, wn, d).G
    elif convention.index_range == "half-open":
        g, _ = nlft_steps([F[n] for n in range(-d, d)], wn, -d)
    else:
        raise ValueError(f"unknown index range {convention.index_range!r}")
    if convention.outer == "signal":
        outer = rotation_factor(complex(w))
    elif convention.outer == "scaled":
        outer = rotation_factor(d * complex(w))
    elif convention.outer == "none":
        outer = I2
    else:
        raise ValueError(f"unknown outer factor {convention.outer!r}")
    if convention.hadamard == "inside":
        rhs = outer @ HADAMARD @ g @ HADAMARD @ outer
    elif convention.hadamard == "outside":
        rhs = HADAMARD @ outer @ g @ outer @ HADAMARD
    else:
        raise ValueError(f"unknown Hadamard placement {convention.hadamard!r}")
    if convention.sign == "cos-psi0":
        rhs = np.sign(np.cos(psi[0])) * rhs
    return rhs


def verify_correspondence(psi, w, convention=RESOLVED_CONVENTION):
    """Frobenius distance between ``U^d`` and its NLFT expression."""
    psi = np.asarray(psi, dtype=float).ravel()
    bad = np.abs(np.abs(psi) - np.pi / 2) < 1e-6
    if np.any(bad):
        raise PoleError(f"psi = {psi[bad][0]!r} is within 1e-6 of +-pi/2")
    lhs = qsp_recurrence(psi, w)
    return float(np.linalg.norm(lhs - nlft_side(psi, w, convention)))


def _calibration_draws(max_d, trials_per_d, seed):
    rng = np.random.default_rng(seed)
    draws = []
    for d in range(max_d + 1):
        for _ in range(trials_per_d):
            psi = rng.uniform(-np.pi, np.pi, d + 1)
            # keep away from the tan poles; the wide range exercises sign(cos psi_0)
            psi = np.where(np.abs(np.cos(psi)) < 0.05, psi / 2, psi)
            w = complex(rng.uniform(-np.pi, np.pi), rng.uniform(-0.5, 0.5))
            draws.append((psi, w))
    return draws


def calibrate_convention(max_d=4, trials_per_d=4, seed=0, tol=1e-9):
    """Brute-force the correspondence convention.

    Every candidate is evaluated on random palindromic sequences of half-length
    ``0 .. max_d``. Returns ``(convention, table)`` where ``table`` lists the
    worst residual per candidate. Raises :class:`CalibrationError` unless exactly
    one candidate stays below ``tol``.
    """
    if max_d < 2:
        raise ValueError("max_d must be at least 2 to separate the outer-factor candidates")
    draws = _calibration_draws(max_d, trials_per_d, seed)
    # both d = 0 signs must be present or the sign axis is not identifiable
    lhs = [qsp_recurrence(psi, w) for psi, w in draws]
    table = []
    for conv in candidate_conventions():
        worst = max(float(np.linalg.norm(u - nlft_side(psi, w, conv))) for u, (psi, w) in zip(lhs, draws))
        table.append({**conv.as_dict(), "residual": worst})
    passing = [row for row in table if row["residual"] < tol]
    if len(passing) != 1:
        raise CalibrationError(f"{len(passing)} conventions reach residual < {tol:g}; expected exactly one", table)
    row = passing[0]
    return Convention(**{k: row[k] for k in CANDIDATE_AXES}), table


def nlft_grid(psi, w_values, convention=RESOLVED_CONVENTION):
    """``A, B, C, D`` of ``G_d`` for ``F_n = i tan psi_|n|`` at each signal value.

    The NLFT argument follows ``convention.phase_rate``.
    """
    F = ImaginaryEvenSequence.from_angles(psi)
    rows = []
    for w in np.asarray(w_values, dtype=complex).ravel():
        g = nlft_forward(F, convention.phase_rate * w).G
        rows.append((w, g[0, 0], g[0, 1], g[1, 0], g[1, 1]))
    return rows


def flat_palindrome(psi, w):
    """Same sequence as :func:`qsp_recurrence` built as a flat product."""
    return evaluate(palindromic_schedule(psi), complex(w))


__all__ = [
    "Convention",
    "ImaginaryEvenSequence",
    "NlftMatrix",
    "NAIVE_CONVENTION",
    "RESOLVED_CONVENTION",
    "calibrate_convention",
    "candidate_conventions",
    "flat_palindrome",
    "nlft_forward",
    "nlft_grid",
    "nlft_side",
    "nlft_steps",
    "palindromic_schedule",
    "qsp_recurrence",
    "verify_correspondence",
    "zs_discrete_propagate",
]
