"""Two-mode bosonic (Heisenberg-picture) representation of SL(2,C) sequences.

The six Lorentz generators are realized as quadratic forms in
``Psi = (a1, a2, a1^dag, a2^dag)``: beam splitters and phase shifters for the
rotations, single- and two-mode squeezing for the boosts. A quadratic
Hermitian ``G`` acts linearly on ``Psi`` through ``i[G, Psi_k] = sum_l M_kl Psi_l``,
so the unitary ``e^{i t G}`` sends ``Psi -> expm(t M) Psi`` under
``U Psi U^dagger``.

Convention: ``i[G, .]`` is anchored by the phase shifter, ``e^{i phi n1}`` maps
``a1 -> e^{-i phi} a1``. With it the matrices ``i M_G`` close exactly on the
Lorentz commutator table. Heisenberg matrices compose in reverse: for
``U = U_0 U_1 ... U_m`` the sequence matrix is ``S_m ... S_1 S_0``.
"""

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from .algebra import GENERATOR_LABELS
from .qsp import CANONICAL, PHASE_SIGNAL, ComplexSignal, as_phases

MODES = ("a1", "a2", "a1^dag", "a2^dag")
A1, A2, A1D, A2D = range(4)

# [Psi_p, Psi_q]
CANONICAL_COMMUTATOR = np.zeros((4, 4))
for _i in range(2):
    CANONICAL_COMMUTATOR[_i, _i + 2] = 1.0
    CANONICAL_COMMUTATOR[_i + 2, _i] = -1.0

COMMUTATION_FORM = np.diag([1.0, 1.0, -1.0, -1.0])
PARTICLE_HOLE = np.block([[np.zeros((2, 2)), np.eye(2)], [np.eye(2), np.zeros((2, 2))]])

# G = sum c Psi_p Psi_q, listed as (c, p, q)
_QUADRATIC_TERMS = {
    "J1": [(0.5, A1D, A2), (0.5, A2D, A1)],
    "J2": [(0.5 / 1j, A1D, A2), (-0.5 / 1j, A2D, A1)],
    "J3": [(0.5, A1D, A1), (-0.5, A2D, A2)],
    "K1": [(-0.25, A1D, A1D), (-0.25, A1, A1), (0.25, A2D, A2D), (0.25, A2, A2)],
    "K2": [(0.25j, A1D, A1D), (-0.25j, A1, A1), (0.25j, A2D, A2D), (-0.25j, A2, A2)],
    "K3": [(0.5, A1D, A2D), (0.5, A1, A2)],
}


def quadratic_form(label):
    """Coefficient matrix ``g`` with ``G = sum_pq g_pq Psi_p Psi_q``."""
    if label not in _QUADRATIC_TERMS:
        raise ValueError(f"unknown generator {label!r}; expected one of {GENERATOR_LABELS}")
    g = np.zeros((4, 4), dtype=complex)
    for c, p, q in _QUADRATIC_TERMS[label]:
        g[p, q] += c
    return g


def heisenberg_generator(label):
    """``M_G`` defined by ``i[G, Psi_k] = sum_l (M_G)_kl Psi_l``.

    From ``[Psi_p Psi_q, Psi_k] = Psi_p C_qk + C_pk Psi_q`` one gets
    ``M_G = i C^T (g + g^T)``.
    """
    g = quadratic_form(label)
    return 1j * CANONICAL_COMMUTATOR.T @ (g + g.T)


def lie_matrix(label):
    """``i M_G``; these six matrices obey the Lorentz commutation relations exactly."""
    return 1j * heisenberg_generator(label)


def factor_matrix(coeffs):
    """``sum_G c_G M_G`` for a factor ``exp(i sum_G c_G G)``."""
    out = np.zeros((4, 4), dtype=complex)
    for label, c in coeffs.items():
        out += c * heisenberg_generator(label)
    return out


def sequence_factors(schedule, signal, ordering=CANONICAL):
    """Unitary factors of the bosonic sequence, left to right, as ``{label: coeff}``.

    ``e^{i phi Z}`` becomes ``e^{2 i phi J3}`` and ``e^{i w X}`` becomes
    ``e^{i delta J1 + i eta K1}``.
    """
    phases = as_phases(schedule)
    if not isinstance(signal, ComplexSignal):
        signal = ComplexSignal.from_w(signal)
    sig = {"J1": signal.delta, "K1": signal.eta}
    if ordering == CANONICAL:
        factors = [{"J3": 2 * phases[0]}]
        for phi in phases[1:]:
            factors += [dict(sig), {"J3": 2 * phi}]
    elif ordering == PHASE_SIGNAL:
        factors = []
        for phi in phases:
            factors += [{"J3": 2 * phi}, dict(sig)]
    else:
        raise ValueError(f"unknown ordering {ordering!r}")
    return factors


def symplectic_from_factors(factors):
    """Heisenberg matrix of ``U_0 U_1 ... U_m``, i.e. ``S_m ... S_0``."""
    s = np.eye(4, dtype=complex)
    cache = {}
    for f in factors:
        key = tuple(sorted(f.items()))
        if key not in cache:
            cache[key] = scipy.linalg.expm(factor_matrix(f))
        s = cache[key] @ s
    return s


def sequence_symplectic(schedule, signal, ordering=CANONICAL):
    """4x4 input-output matrix ``V`` with ``U Psi U^dagger = V Psi``."""
    return symplectic_from_factors(sequence_factors(schedule, signal, ordering))


# rows of the intertwiner onto (V^T) + conj(V^{-1}); T / sqrt(2) is unitary
INTERTWINER = np.array([[0, -1j, 1, 0], [1j, 0, 0, 1], [0, 1, -1j, 0], [-1, 0, 0, -1j]])


def symplectic_from_sl2c(v):
    """4x4 Heisenberg matrix of the SL(2,C) element ``v`` in closed form.

    ``S = T^dagger diag(V^T, conj(V^{-1})) T / 2``. Both blocks reverse products,
    matching the Heisenberg order. Works for object arrays (e.g. mpmath).
    """
    v = np.asarray(v)
    a, b, c, d = v[0, 0], v[0, 1], v[1, 0], v[1, 1]
    zero = 0 * a
    block = np.array(
        [
            [a, c, zero, zero],
            [b, d, zero, zero],
            [zero, zero, np.conj(d), -np.conj(b)],
            [zero, zero, -np.conj(c), np.conj(a)],
        ],
        dtype=v.dtype,
    )
    t = INTERTWINER.astype(v.dtype)
    return np.conj(t.T) @ block @ t / 2


def bogoliubov_residual(s):
    """``|V K V^dagger - K|_F`` with ``K = diag(1, 1, -1, -1)``."""
    s = np.asarray(s)
    k = COMMUTATION_FORM.astype(s.dtype)
    r = s @ k @ np.conj(s.T) - k
    return float(sum(abs(x) ** 2 for x in r.ravel()) ** 0.5)


def particle_hole_residual(s):
    return float(np.abs(s - PARTICLE_HOLE @ s.conj() @ PARTICLE_HOLE).max())


def mixing_block_norm(s):
    """Size of the annihilation/creation mixing blocks (zero for number-conserving V)."""
    return float(max(np.abs(s[:2, 2:]).max(), np.abs(s[2:, :2]).max()))


# ---------------------------------------------------------------- Fock oracle


def _check_n_max(n_max):
    if not 4 <= n_max <= 60:
        raise ValueError(f"n_max must lie in [4, 60], got {n_max}")


def fock_modes(n_max):
    """Truncated ``(a1, a2, a1^dag, a2^dag)`` on the two-mode space of dimension ``(n_max+1)^2``."""
    _check_n_max(n_max)
    a = sp.diags(np.sqrt(np.arange(1, n_max + 1)), 1, format="csr", dtype=complex)
    eye = sp.identity(n_max + 1, format="csr", dtype=complex)
    a1 = sp.kron(a, eye, format="csr")
    a2 = sp.kron(eye, a, format="csr")
    return [a1, a2, a1.conj().T.tocsr(), a2.conj().T.tocsr()]


def fock_generator(label, modes):
    g = quadratic_form(label)
    out = sp.csr_matrix(modes[0].shape, dtype=complex)
    for p, q in zip(*np.nonzero(g)):
        out = out + g[p, q] * (modes[p] @ modes[q])
    return out


def _window_basis(n_max, window):
    n1, n2 = np.divmod(np.arange((n_max + 1) ** 2), n_max + 1)
    return np.flatnonzero(n1 + n2 <= window)


def fock_oracle(factors, n_max=40, window=None):
    """Max deviation between ``U Psi_j U^dagger`` in truncated Fock space and the 4x4 prediction.

    ``factors`` is a list of ``{label: coeff}`` dicts (see
    :func:`sequence_factors`). Matrix elements are compared between number
    states with total occupation ``<= window`` (default ``n_max // 2``); the
    residual shrinks as ``n_max`` grows for fixed parameters.
    """
    _check_n_max(n_max)
    if window is None:
        window = n_max // 2
    if not 0 <= window <= n_max - 1:
        raise ValueError(f"window must lie in [0, n_max - 1], got {window}")
    modes = fock_modes(n_max)
    idx = _window_basis(n_max, window)
    dim = modes[0].shape[0]
    basis = np.zeros((dim, idx.size), dtype=complex)
    basis[idx, np.arange(idx.size)] = 1.0
    # U^dagger |n> for U = U_0 ... U_m: apply U_0^dagger first
    evolved = basis
    for f in factors:
        if not f or all(c == 0 for c in f.values()):
            continue
        h = sum(c * fock_generator(label, modes) for label, c in f.items())
        evolved = expm_multiply(-1j * h, evolved)
    predicted = symplectic_from_factors(factors)
    window_ops = [(m[idx][:, idx]).toarray() for m in modes]
    worst = 0.0
    for j in range(4):
        direct = evolved.conj().T @ (modes[j] @ evolved)
        model = sum(predicted[j, l] * window_ops[l] for l in range(4))
        worst = max(worst, float(np.abs(direct - model).max()))
    return worst


def fock_commutator_residual(label, n_max=20):
    """Compare ``i[G, Psi_k]`` built from truncated operators against ``M_G Psi``."""
    modes = fock_modes(n_max)
    gen = fock_generator(label, modes)
    m = heisenberg_generator(label)
    # quadratic G moves occupation by at most 2 and Psi_k by 1
    idx = _window_basis(n_max, n_max - 3)
    worst = 0.0
    for k in range(4):
        comm = (1j * (gen @ modes[k] - modes[k] @ gen))[idx][:, idx]
        model = sum(m[k, l] * modes[l] for l in range(4))[idx][:, idx]
        worst = max(worst, float(np.abs((comm - model).toarray()).max()))
    return worst
