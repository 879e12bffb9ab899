"""SL(2,C) acting on Hermitian 2x2 matrices as the Lorentz group.

A four-vector ``x`` is encoded as ``Omega = (1/2) sum_nu x_nu sigma_nu``, so that
``det Omega`` is a quarter of the Minkowski norm. Conjugation ``V Omega V^dagger``
realizes ``x -> Lambda x`` with ``2 Lambda_{mu nu} = Tr(sigma_mu V sigma_nu V^dagger)``.
"""

import numpy as np

from .algebra import PAULI, dagger
from .errors import ConsistencyError, DegenerateChannelError

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])
_SIGMA = np.stack(PAULI)


def minkowski_norm(x):
    x = np.asarray(x, dtype=float)
    return x[..., 0] ** 2 - x[..., 1] ** 2 - x[..., 2] ** 2 - x[..., 3] ** 2


def omega_from_fourvector(x):
    """``(1/2) sum_nu x_nu sigma_nu`` for a real four-vector (or a stack of them)."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != 4:
        raise ValueError(f"four-vector must have 4 components, got shape {x.shape}")
    return 0.5 * np.tensordot(x, _SIGMA, axes=([-1], [0]))


def fourvector_from_omega(omega, tol=1e-8):
    """``x_nu = Tr(sigma_nu Omega)`` for a Hermitian ``Omega``."""
    omega = np.asarray(omega, dtype=complex)
    herm = np.abs(omega - dagger(omega)).max()
    if herm > tol * max(1.0, np.abs(omega).max()):
        raise ValueError(f"Omega is not Hermitian (deviation {herm:.3e} > {tol:.1e})")
    x = np.einsum("kij,...ji->...k", _SIGMA, omega)
    return np.real(x)


def conjugate_action(v, omega):
    """``V Omega V^dagger``: preserves ``det Omega`` but in general not the trace."""
    v = np.asarray(v, dtype=complex)
    return v @ omega @ dagger(v)


def lorentz_matrix(v, tol=1e-8):
    """Real 4x4 matrix ``Lambda_{mu nu} = Tr(sigma_mu V sigma_nu V^dagger) / 2``."""
    v = np.asarray(v, dtype=complex)
    moved = v @ _SIGMA @ dagger(v)
    lam = 0.5 * np.einsum("mij,nji->mn", _SIGMA, moved)
    imag = np.abs(lam.imag).max()
    if imag > tol * max(1.0, np.abs(lam.real).max()):
        raise ConsistencyError(f"Lorentz matrix has imaginary residue {imag:.3e}")
    return lam.real


def metric_residual(lam):
    return float(np.linalg.norm(lam.T @ METRIC @ lam - METRIC))


def physical_channel(v, omega0, tol=1e-10):
    """Trace-normalized conjugation ``V Omega0 V^dagger / Tr(V Omega0 V^dagger)``.

    ``omega0`` must be a density matrix. A normalization trace below 1e-12 means
    the post-selected branch has vanishing probability and raises
    :class:`DegenerateChannelError`.
    """
    omega0 = np.asarray(omega0, dtype=complex)
    if abs(np.trace(omega0) - 1) > tol:
        raise ValueError(f"input must have unit trace, got {np.trace(omega0):.12g}")
    if np.abs(omega0 - dagger(omega0)).max() > 1e-8:
        raise ValueError("input density matrix is not Hermitian")
    if np.linalg.eigvalsh((omega0 + dagger(omega0)) / 2).min() < -tol:
        raise ValueError("input density matrix is not positive semidefinite")
    out = conjugate_action(v, omega0)
    weight = float(np.real(np.trace(out)))
    if weight <= 1e-12:
        raise DegenerateChannelError(
            f"normalization trace {weight:.3e} vanishes; the channel outcome has probability ~0"
        )
    rho = out / weight
    return (rho + dagger(rho)) / 2


def fibonacci_sphere(n):
    """``n`` near-uniform deterministic points on the unit sphere."""
    if n < 1:
        raise ValueError("need at least one sample point")
    k = np.arange(n) + 0.5
    z = 1 - 2 * k / n
    r = np.sqrt(1 - z**2)
    phi = np.pi * (3 - np.sqrt(5)) * k
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def bloch_image(v, n):
    """Push ``n`` pure states through the channel.

    Returns ``(inputs, outputs, weights)``: Bloch vectors before and after, and
    the unnormalized trace ``x'_0`` of each image.
    """
    pts = fibonacci_sphere(n)
    omegas = omega_from_fourvector(np.column_stack([np.ones(n), pts]))
    moved = conjugate_action(v, omegas)
    weights = np.real(np.trace(moved, axis1=-2, axis2=-1))
    if np.any(weights <= 1e-12):
        raise DegenerateChannelError("a sampled state has vanishing normalization trace")
    rho = moved / weights[:, None, None]
    outputs = fourvector_from_omega((rho + dagger(rho)) / 2)[:, 1:]
    return pts, outputs, weights


def bloch_rows(inputs, outputs, weights):
    """Rows ``in_x, in_y, in_z, out_x, out_y, out_z, weight``."""
    return np.column_stack([inputs, outputs, weights])


def fourvector_residual(v, x):
    """Spinor-path vs Lambda-path discrepancy for four-vector ``x``."""
    spinor = fourvector_from_omega(conjugate_action(v, omega_from_fourvector(x)))
    return float(np.abs(spinor - lorentz_matrix(v) @ np.asarray(x)).max())


def is_density_matrix(rho, tol=1e-10):
    rho = np.asarray(rho)
    return (
        abs(np.trace(rho) - 1) <= tol
        and np.abs(rho - dagger(rho)).max() <= tol
        and np.linalg.eigvalsh(rho).min() >= -tol
    )
