"""Closed-form 2x2 complex linear algebra for SL(2,C).

Everything here works on plain ``numpy`` arrays of shape ``(..., 2, 2)``.
Group elements are ordinary arrays whose determinant has been checked (and
renormalized) by :func:`as_sl2c`.
"""

import numpy as np

from .errors import DomainError

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (I2, X, Y, Z)

GENERATOR_LABELS = ("J1", "J2", "J3", "K1", "K2", "K3")

# accepted at construction; long products are renormalized back onto the group
DET_TOL = 1e-8


def pauli(index):
    """Return sigma_index for index in {0, 1, 2, 3} (identity, X, Y, Z)."""
    if isinstance(index, bool) or index not in (0, 1, 2, 3):
        raise ValueError(f"Pauli index must be 0, 1, 2 or 3, got {index!r}")
    return PAULI[index].copy()


def generators():
    """The six sl(2,C) generators as a dict label -> 2x2 matrix.

    Rotations ``J_k = sigma_k / 2`` are Hermitian, boosts ``K_k = i sigma_k / 2``
    anti-Hermitian.
    """
    out = {}
    for k in (1, 2, 3):
        out[f"J{k}"] = PAULI[k] / 2
        out[f"K{k}"] = 1j * PAULI[k] / 2
    return {label: out[label] for label in GENERATOR_LABELS}


def commutator(a, b):
    return a @ b - b @ a


def det2(m):
    m = np.asarray(m)
    return m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]


def dagger(m):
    return np.conj(np.swapaxes(m, -1, -2))


def as_sl2c(m, tol=DET_TOL):
    """Validate a 2x2 matrix as an SL(2,C) element.

    A determinant within ``tol`` of one is divided out (principal square root)
    so that the returned matrix has unit determinant to rounding.
    """
    m = np.array(m, dtype=complex)
    if m.shape[-2:] != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    det = det2(m)
    if np.any(np.abs(det - 1) > tol):
        worst = np.max(np.abs(det - 1))
        raise ValueError(f"|det - 1| = {worst:.3e} exceeds tolerance {tol:.1e}")
    return m / np.sqrt(det)[..., None, None]


def expm_traceless(m):
    """Exponential of a traceless 2x2 matrix (or a stack of them).

    Uses ``exp(M) = cosh(mu) I + sinh(mu)/mu M`` with ``mu**2 = -det M``; both
    functions are even in ``mu`` so the square-root branch does not matter.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape[-2:] != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
    tr = m[..., 0, 0] + m[..., 1, 1]
    scale = np.maximum(1.0, np.abs(m).max(axis=(-1, -2)))
    if np.any(np.abs(tr) > 1e-12 * scale):
        raise ValueError(f"matrix is not traceless (|trace| = {np.max(np.abs(tr)):.3e})")
    mu2 = -det2(m)
    mu = np.sqrt(mu2)
    small = np.abs(mu) < 1e-6
    with np.errstate(divide="ignore", invalid="ignore"):
        c = np.where(small, 1 + mu2 / 2 + mu2**2 / 24 + mu2**3 / 720, np.cosh(mu))
        s = np.where(small, 1 + mu2 / 6 + mu2**2 / 120 + mu2**3 / 5040, np.sinh(mu) / mu)
    return c[..., None, None] * I2 + s[..., None, None] * m


def polar_decompose(v):
    """Split ``V = P U`` with P positive definite and U unitary, both unimodular.

    For unimodular ``V``, Cayley-Hamilton gives ``V + adj(V)^dagger = tr(P) U``;
    that sum already has the SU(2) pattern ``[[a, b], [-b*, a*]]``, so
    normalizing it yields a unitary factor good to rounding even when ``V`` is
    strongly boosted. ``P = V U^dagger`` is then symmetrized.
    """
    v = np.asarray(v, dtype=complex)
    det = det2(v)
    if abs(det) < 1e-12:
        raise DomainError(f"polar decomposition of a singular matrix (det = {det:.3e})")
    v = v / np.sqrt(det)
    n = v + dagger(np.array([[v[1, 1], -v[0, 1]], [-v[1, 0], v[0, 0]]]))
    u = n / np.sqrt(abs(n[0, 0]) ** 2 + abs(n[0, 1]) ** 2)
    p = v @ dagger(u)
    return (p + dagger(p)) / 2, u


def polar_parameters(v):
    """Return ``(gamma, m, lam, n)`` with ``V = exp(gamma m.sigma) exp(i lam n.sigma)``.

    ``m`` and ``n`` are real unit vectors; for a trivial factor the axis is
    returned as (0, 0, 1).
    """
    p, u = polar_decompose(v)
    gamma = float(np.arccosh(max(np.real(np.trace(p)) / 2, 1.0)))
    if gamma > 1e-12:
        m = np.array([np.real(np.trace(p @ PAULI[k])) for k in (1, 2, 3)]) / (2 * np.sinh(gamma))
    else:
        m = np.array([0.0, 0.0, 1.0])
    # U = cos(lam) I + i sin(lam) n.sigma
    cos_l = np.real(np.trace(u)) / 2
    sin_n = np.array([np.imag(np.trace(u @ PAULI[k])) for k in (1, 2, 3)]) / 2
    sin_l = np.linalg.norm(sin_n)
    lam = float(np.arctan2(sin_l, cos_l))
    n = sin_n / sin_l if sin_l > 1e-12 else np.array([0.0, 0.0, 1.0])
    return gamma, m, lam, n
