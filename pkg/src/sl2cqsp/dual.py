"""Kicked-Ising Floquet circuit and its single-qubit space-time dual.

The width-``N`` depth-1 circuit

    U_F = exp(i sum_j alpha_j X_j) exp(i sum_j (theta Z_j Z_{j+1} + phi_j Z_j))

is dual to the depth-``N`` single-qubit sequence
``prod_r e^{i theta~ X} e^{i phi_r Z}`` with ``tan theta~ = -i e^{-2 i theta}``.
"""

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .algebra import I2, X, as_sl2c
from .errors import DegenerateParameterError, ResourceLimitError
from .qsp import ComplexSignal, evaluate

MAX_SITES = 12
POLE_GAP = 1e-6
BOUNDARIES = ("periodic", "open")


@dataclass(frozen=True)
class FloquetParams:
    theta: float
    alphas: tuple
    phis: tuple
    boundary: str = "periodic"

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        object.__setattr__(self, "phis", tuple(float(p) for p in self.phis))
        if len(self.alphas) != len(self.phis):
            raise ValueError(
                f"alphas and phis must have equal length, got {len(self.alphas)} and {len(self.phis)}"
            )
        if not self.alphas:
            raise ValueError("need at least one site")
        if self.boundary not in BOUNDARIES:
            raise ValueError(f"boundary must be one of {BOUNDARIES}, got {self.boundary!r}")
        values = (self.theta,) + self.alphas + self.phis
        if not np.all(np.isfinite(values)):
            raise ValueError("Floquet angles must be finite")

    @property
    def n_sites(self):
        return len(self.alphas)

    @classmethod
    def from_document(cls, doc):
        allowed = {"N", "theta", "alphas", "phis", "boundary"}
        unknown = set(doc) - allowed
        if unknown:
            raise ValueError(f"unknown keys in Floquet document: {sorted(unknown)}")
        missing = {"theta", "alphas", "phis"} - set(doc)
        if missing:
            raise ValueError(f"Floquet document missing keys: {sorted(missing)}")
        params = cls(doc["theta"], doc["alphas"], doc["phis"], doc.get("boundary", "periodic"))
        if "N" in doc and int(doc["N"]) != params.n_sites:
            raise ValueError(f"N = {doc['N']} does not match {params.n_sites} angle entries")
        return params


def _bonds(n, boundary):
    # j = 1..N with Z_{N+1} = Z_1 when periodic; for N = 1 the bond is Z_1 Z_1 = 1
    if boundary == "periodic":
        return [(j, (j + 1) % n) for j in range(n)]
    return [(j, j + 1) for j in range(n - 1)]


def floquet_operator(params):
    """Dense ``2^N x 2^N`` Floquet unitary; site 1 is the most significant qubit."""
    n = params.n_sites
    if n > MAX_SITES:
        raise ResourceLimitError(f"dense Floquet operator limited to N <= {MAX_SITES}, got N = {n}")
    # z[b, j] = +-1 eigenvalue of Z_j on basis state b
    bits = (np.arange(2**n)[:, None] >> np.arange(n - 1, -1, -1)[None, :]) & 1
    z = 1 - 2 * bits
    energy = z @ np.asarray(params.phis)
    for i, j in _bonds(n, params.boundary):
        energy = energy + params.theta * z[:, i] * z[:, j]
    kicks = [np.cos(a) * I2 + 1j * np.sin(a) * X for a in params.alphas]
    mixer = reduce(np.kron, kicks)
    return mixer * np.exp(1j * energy)[None, :]


def _near_pole(theta):
    k = np.round(theta / (np.pi / 2))
    return abs(theta - k * np.pi / 2) < POLE_GAP


def dual_angle(theta):
    """Complex angle ``theta~`` with ``tan theta~ = -i e^{-2 i theta}`` (principal branch)."""
    theta = float(theta)
    if _near_pole(theta):
        raise DegenerateParameterError(
            f"theta = {theta!r} is within {POLE_GAP:g} of a multiple of pi/2: "
            "arctan(-i e^{-2i theta}) hits the logarithm pole at +-i"
        )
    z = -1j * np.exp(-2j * theta)
    return complex(np.log((1 + 1j * z) / (1 - 1j * z)) / 2j)


def dual_signal(theta):
    """The dual angle packaged as a signal with ``w = theta~``."""
    return ComplexSignal.from_w(dual_angle(theta))


def dual_sequence(theta, phis):
    """``prod_{r=1}^N e^{i theta~ X} e^{i phi_r Z}``, renormalized onto SL(2,C)."""
    w = dual_angle(theta)
    phases = np.concatenate([[0.0], np.asarray(phis, dtype=float)])
    v = evaluate(phases, w, dtype=np.clongdouble)
    v = v / np.sqrt(v[0, 0] * v[1, 1] - v[0, 1] * v[1, 0])
    return as_sl2c(v.astype(complex))
