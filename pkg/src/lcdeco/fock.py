"""Truncated-Fock-space linear algebra.

Operators, coherent states, tensor products with a two-level system, and
exact time evolution of time-independent Hermitian generators via a cached
eigendecomposition.  Everything here is dimensionless and O(1)-scaled; SI
inputs are converted at the package boundary (see circuit / runner).

Basis ordering for joint qubit+oscillator vectors is fixed as
qubit-slow / oscillator-fast: amplitude of |k⟩⊗|n⟩ sits at index k*dim + n.
"""

import numpy as np
from scipy.special import gammainc, gammaln

from .errors import TruncationError

# tail mass above the truncation edge that we still accept when building
# a coherent state
COHERENT_TAIL_TOL = 1e-12

# evolution leakage guard: population allowed in the top LEAK_LEVELS
# oscillator levels of an accepted run
LEAK_LEVELS = 5
LEAK_TOL = 1e-8


# ---------------------------------------------------------------------------
# operators

def annihilation_op(dim):
    """Boson annihilation operator a on a dim-level truncated Fock space."""
    dim = _check_dim(dim)
    return np.diag(np.sqrt(np.arange(1.0, dim)), 1).astype(complex)


def number_op(dim):
    """Number operator a†a."""
    dim = _check_dim(dim)
    return np.diag(np.arange(dim, dtype=float)).astype(complex)


def position_quad(dim):
    """Hermitian combination i(a − a†) used as the coupling quadrature."""
    a = annihilation_op(dim)
    return 1j * (a - a.conj().T)


_QUBIT_OPS = {
    # qubit basis {|0>, |1>} with sigma_z = |0><0| − |1><1|
    "sigma_x": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "sigma_y": np.array([[0.0, 1.0j], [-1.0j, 0.0]], dtype=complex),
    "sigma_z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
    "projector_0": np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex),
    "projector_1": np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex),
}


def qubit_op(which):
    """2x2 qubit operator by name.

    Conventions: sigma_z = |0⟩⟨0| − |1⟩⟨1| (so |0⟩ is the low-energy
    eigenstate of −(ω_a/2)σ_z), sigma_y = −i(|1⟩⟨0| − |0⟩⟨1|),
    sigma_x = |1⟩⟨0| + |0⟩⟨1|.
    """
    try:
        return _QUBIT_OPS[which].copy()
    except KeyError:
        raise ValueError(
            "unknown qubit operator %r (valid: %s)"
            % (which, ", ".join(sorted(_QUBIT_OPS))))


def tensor(qubit_part, osc_part):
    """Kronecker product, qubit factor slow: (2x2) ⊗ (dim x dim)."""
    q = np.asarray(qubit_part, dtype=complex)
    o = np.asarray(osc_part, dtype=complex)
    if q.shape != (2, 2):
        raise ValueError("qubit factor must be 2x2, got %r" % (q.shape,))
    if o.ndim != 2 or o.shape[0] != o.shape[1]:
        raise ValueError("oscillator factor must be square, got %r" % (o.shape,))
    return np.kron(q, o)


def check_hermitian(M, tol=1e-12):
    """Return the hermiticity defect max|M − M†|; raise if above tol
    (scaled by max(1, max|M|) so O(10) dimensionless matrices are not
    penalized for representation rounding)."""
    M = np.asarray(M)
    defect = float(np.max(np.abs(M - M.conj().T))) if M.size else 0.0
    scale = max(1.0, float(np.max(np.abs(M)))) if M.size else 1.0
    if defect > tol * scale:
        raise ValueError("matrix is not Hermitian (defect %.3e)" % defect)
    return defect


def hermitian_eig(M, tol=1e-12):
    """Eigendecomposition of a certified-Hermitian matrix.

    Returns (eigenvalues ascending, eigenvector columns).
    """
    check_hermitian(M, tol)
    return np.linalg.eigh(np.asarray(M, dtype=complex))


# ---------------------------------------------------------------------------
# states

def fock_state(n, dim):
    dim = _check_dim(dim)
    if not 0 <= n < dim:
        raise ValueError("Fock level %d outside [0, %d)" % (n, dim))
    v = np.zeros(dim, dtype=complex)
    v[n] = 1.0
    return v


def coherent_tail_mass(alpha, dim):
    """Poisson mass of the untruncated coherent state above level dim−1.

    For mean photon number |α|² the tail P(n ≥ dim) is the regularized
    lower incomplete gamma gammainc(dim, |α|²).
    """
    lam = abs(alpha) ** 2
    if lam == 0.0:
        return 0.0
    return float(gammainc(dim, lam))


def min_adequate_dim(alpha, tol=COHERENT_TAIL_TOL):
    """Smallest truncation with coherent tail mass below tol."""
    lo = 2
    hi = max(4, int(abs(alpha) ** 2) + 2)
    while coherent_tail_mass(alpha, hi) >= tol:
        lo = hi
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if coherent_tail_mass(alpha, mid) < tol:
            hi = mid
        else:
            lo = mid + 1
    return max(hi, 2)


def coherent_state(alpha, dim):
    """Coherent state |α⟩ truncated to dim levels, renormalized.

    Amplitudes are built in the log domain so large |α| does not overflow.
    Raises TruncationError (with a suggested dimension) when the analytic
    tail mass at the requested truncation is not below COHERENT_TAIL_TOL.
    """
    dim = _check_dim(dim)
    tail = coherent_tail_mass(alpha, dim)
    if tail >= COHERENT_TAIL_TOL:
        raise TruncationError(
            "coherent state alpha=%r needs a larger Fock space "
            "(tail mass %.3e at dim=%d)" % (alpha, tail, dim),
            suggested_dim=min_adequate_dim(alpha))
    if alpha == 0:
        return fock_state(0, dim)
    n = np.arange(dim)
    mag = np.exp(n * np.log(abs(alpha)) - 0.5 * gammaln(n + 1.0)
                 - 0.5 * abs(alpha) ** 2)
    phase = np.exp(1j * n * np.angle(alpha))
    v = mag * phase
    return v / np.linalg.norm(v)


def joint_state(c0, c1, osc, dim=None):
    """(c0|0⟩ + c1|1⟩) ⊗ |osc⟩ in qubit-slow ordering, normalized."""
    osc = np.asarray(osc, dtype=complex)
    v = np.concatenate([c0 * osc, c1 * osc])
    nrm = np.linalg.norm(v)
    if nrm == 0.0:
        raise ValueError("joint state has zero norm")
    return v / nrm


def overlap(s1, s2):
    """Inner product ⟨s1|s2⟩."""
    s1 = np.asarray(s1)
    s2 = np.asarray(s2)
    if s1.shape != s2.shape:
        raise ValueError("state shapes differ: %r vs %r" % (s1.shape, s2.shape))
    return complex(np.vdot(s1, s2))


def partial_trace_qubit(psi, dim):
    """Reduced 2x2 qubit density matrix of a joint pure state."""
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (2 * dim,):
        raise ValueError("joint state of length %d expected, got %r"
                         % (2 * dim, psi.shape))
    block = psi.reshape(2, dim)
    return block @ block.conj().T


def top_level_population(states, osc_dim=None, levels=LEAK_LEVELS):
    """Population in the top `levels` oscillator levels.

    `states` is one state vector or a (N, nt) array of column states.
    For joint states pass osc_dim; both qubit branches are summed.
    """
    arr = np.asarray(states)
    vecs = arr[:, None] if arr.ndim == 1 else arr
    n = vecs.shape[0]
    d = n if osc_dim is None else osc_dim
    if osc_dim is not None and n != 2 * osc_dim:
        raise ValueError("joint states of length %d expected" % (2 * osc_dim))
    prob = np.abs(vecs) ** 2
    if osc_dim is None:
        out = prob[d - levels:d].sum(axis=0)
    else:
        out = prob[d - levels:d].sum(axis=0) + prob[2 * d - levels:].sum(axis=0)
    return float(out[0]) if arr.ndim == 1 else out


def assert_leakage(states, osc_dim=None, levels=LEAK_LEVELS, tol=LEAK_TOL):
    """Raise TruncationError when the leakage guard trips."""
    leak = np.max(top_level_population(states, osc_dim, levels))
    if leak >= tol:
        arr = np.asarray(states)
        d = arr.shape[0] if osc_dim is None else osc_dim
        raise TruncationError(
            "leakage guard tripped: top-%d-level population %.3e >= %.1e"
            % (levels, float(leak), tol),
            suggested_dim=2 * d)
    return float(leak)


# ---------------------------------------------------------------------------
# evolution

class SpectralPropagator:
    """exp(−iHt) applied through a one-time eigendecomposition of H.

    The spectral data is computed once at construction and only read
    afterwards, so a single instance may be shared across threads.
    """

    def __init__(self, H, tol=1e-12):
        w, V = hermitian_eig(H, tol)
        self.eigenvalues = w
        self._V = V
        self._Vh = V.conj().T

    def evolve(self, psi, t):
        """State at time t (t scalar)."""
        c = self._Vh @ np.asarray(psi, dtype=complex)
        return self._V @ (np.exp(-1j * self.eigenvalues * t) * c)

    def evolve_grid(self, psi, ts):
        """Column-per-time array of states at each t in ts."""
        ts = np.asarray(ts, dtype=float)
        c = self._Vh @ np.asarray(psi, dtype=complex)
        phases = np.exp(-1j * np.outer(self.eigenvalues, ts))
        return self._V @ (phases * c[:, None])


def evolve(H, psi, t):
    """One-shot exp(−iHt)|psi⟩ (builds a propagator; prefer
    SpectralPropagator for repeated use of the same H)."""
    return SpectralPropagator(H).evolve(psi, t)


def evolve_grid(H, psi, ts):
    return SpectralPropagator(H).evolve_grid(psi, ts)


def _check_dim(dim):
    d = int(dim)
    if d != dim or d < 2:
        raise ValueError("Fock truncation dim must be an integer >= 2, got %r"
                         % (dim,))
    return d
