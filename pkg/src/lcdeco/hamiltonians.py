"""Model Hamiltonians and squeeze algebra.

The full two-branch model on the joint space,

    H = ω a†a − (ω_a/2) σ_z + g σ_y · i(a − a†),

its qubit-conditioned effective oscillator Hamiltonians,

    H_k = ω̃ a†a + (−1)^k λ (a² + a†²) + ε_k ,

and the analytic Bogoliubov (squeeze) coefficients of the conditioned
evolution.  A numerical effective-block extraction (direct-rotation
block diagonalization of the full H) is provided to quantify how well
the dispersive effective model approximates the full one.
"""

import math
from dataclasses import dataclass

import numpy as np

from .circuit import ModelParams
from .errors import RegimeError
from .fock import (annihilation_op, hermitian_eig, number_op, position_quad,
                   qubit_op, tensor)


def branch_sign(k):
    if k not in (0, 1):
        raise ValueError("branch index must be 0 or 1, got %r" % (k,))
    return 1.0 if k == 0 else -1.0


def build_full_hamiltonian(m: ModelParams, dim):
    """Joint-space H (qubit-slow ordering); exactly Hermitian."""
    ident = np.eye(dim, dtype=complex)
    return (m.omega * tensor(np.eye(2), number_op(dim))
            - 0.5 * m.omega_a * tensor(qubit_op("sigma_z"), ident)
            + m.g * tensor(qubit_op("sigma_y"), position_quad(dim)))


def build_effective_hamiltonian(k, m: ModelParams, dim):
    """Oscillator-space H_k for qubit branch k."""
    a = annihilation_op(dim)
    eps = m.eps0 if k == 0 else m.eps1
    return (m.omega_tilde * number_op(dim)
            + branch_sign(k) * m.lam * (a @ a + a.conj().T @ a.conj().T)
            + eps * np.eye(dim, dtype=complex))


# ---------------------------------------------------------------------------
# Bogoliubov / squeeze coefficients

@dataclass(frozen=True)
class BogoliubovCoeffs:
    mu: complex
    nu: complex
    k: int
    t: float

    @property
    def defect(self):
        """|mu|² − |nu|² − 1 (zero for a canonical pair)."""
        return abs(self.mu) ** 2 - abs(self.nu) ** 2 - 1.0


def squeeze_ratio(k, m: ModelParams):
    """N_k with N_0 = 1/N_1 = √(ωΔ/(ωΔ + 4g²))."""
    return m.n0 if k == 0 else m.n1


def squeeze_coefficients(k, m: ModelParams, t):
    """μ_k(t) = ½(√N_k + 1/√N_k)e^{+iΩt}, ν_k(t) = ½(√N_k − 1/√N_k)e^{−iΩt}.

    Scalar t → BogoliubovCoeffs; array t → (mu, nu) arrays.
    """
    nk = squeeze_ratio(k, m)
    rt = math.sqrt(nk)
    mu_mag = 0.5 * (rt + 1.0 / rt)
    nu_mag = 0.5 * (rt - 1.0 / rt)
    tt = np.asarray(t, dtype=float)
    mu = mu_mag * np.exp(1j * m.Omega * tt)
    nu = nu_mag * np.exp(-1j * m.Omega * tt)
    if np.ndim(t) == 0:
        return BogoliubovCoeffs(mu=complex(mu), nu=complex(nu), k=k,
                                t=float(t))
    return mu, nu


def evolution_coefficients(k, m: ModelParams, t):
    """Heisenberg coefficients (u, v) with a(t) = u·a(0) + v·a†(0)
    under H_k, composed from the squeeze pair at times 0 and t.

    u(0) = 1, v(0) = 0, and |u|² − |v|² = 1 for all t.
    Accepts scalar or array t.
    """
    nk = squeeze_ratio(k, m)
    rt = math.sqrt(nk)
    mu0 = 0.5 * (rt + 1.0 / rt)   # real at t = 0
    nu0 = 0.5 * (rt - 1.0 / rt)
    tt = np.asarray(t, dtype=float)
    mut = mu0 * np.exp(1j * m.Omega * tt)
    nut = nu0 * np.exp(-1j * m.Omega * tt)
    u = mu0 * np.conj(mut) - nu0 * np.conj(nut)
    v = nu0 * mut - mu0 * nut
    if np.ndim(t) == 0:
        return complex(u), complex(v)
    return u, v


def predicted_moments(k, m: ModelParams, alpha, t):
    """Gaussian-predicted ⟨a⟩, ⟨a²⟩, ⟨a†a⟩ of the evolved coherent state.

    Built from the (u, v) evolution coefficients; this is the
    operationally testable content of the squeeze-coefficient formulas.
    """
    u, v = evolution_coefficients(k, m, t)
    al = complex(alpha)
    alc = np.conj(al)
    mean_a = u * al + v * alc
    mean_a2 = u * u * al * al + v * v * alc * alc \
        + u * v * (2.0 * abs(al) ** 2 + 1.0)
    mean_n = (abs(u) ** 2 * abs(al) ** 2
              + 2.0 * np.real(np.conj(u) * v * alc * alc)
              + abs(v) ** 2 * (1.0 + abs(al) ** 2))
    return mean_a, mean_a2, mean_n


def second_order_coefficients(m: ModelParams):
    """True second-order effective coefficients of each branch.

    Per branch k: frequency ω − (−1)^k·2g²ω_a/(ΔΣ), squeeze coefficient
    (−1)^k·g²ω_a/(ΔΣ), constant −(−1)^k ω_a/2 − branch-dependent shift,
    with Σ = ω_a + ω.  These keep the 1/(ω_a+ω) denominators that the
    modeled H_k folds into 1/Δ, so they differ from (ω̃, λ) at order
    ω/ω_a; the difference is what schrieffer_wolff_check measures.
    """
    sig = m.omega_a + m.omega
    shift = 2.0 * m.g ** 2 * m.omega_a / (m.delta * sig)
    lam_true = m.g ** 2 * m.omega_a / (m.delta * sig)
    out = []
    for k in (0, 1):
        s = branch_sign(k)
        const = -s * 0.5 * m.omega_a + (
            -m.g ** 2 / sig if k == 0 else m.g ** 2 / m.delta)
        out.append({"k": k, "omega_eff": m.omega - s * shift,
                    "lam_eff": s * lam_true, "const": const})
    return tuple(out)


# ---------------------------------------------------------------------------
# numerical effective-block extraction

@dataclass(frozen=True)
class BranchFit:
    k: int
    omega_fit: float
    lam_fit: float
    omega_ref: float
    lam_ref: float

    @property
    def omega_dev(self):
        return abs(self.omega_fit - self.omega_ref) / abs(self.omega_ref)

    @property
    def lam_dev(self):
        return abs(self.lam_fit - self.lam_ref) / abs(self.lam_ref) \
            if self.lam_ref != 0 else abs(self.lam_fit)


@dataclass(frozen=True)
class SWReport:
    gamma: float
    dim: int
    n_levels: int
    n_fit: int
    branches: tuple

    @property
    def max_omega_dev(self):
        return max(b.omega_dev for b in self.branches)

    @property
    def max_lam_dev(self):
        return max(b.lam_dev for b in self.branches)


def effective_block(m: ModelParams, dim, k, n_levels):
    """Direct-rotation effective Hamiltonian of branch k.

    Diagonalizes the full H, classifies eigenvectors by qubit population,
    takes the n_levels lowest of branch k, and rotates them onto the bare
    |k, n⟩ subspace with the polar (least-distortion) unitary of the
    overlap matrix.  Returns an (n_levels × n_levels) Hermitian block
    whose spectrum is exactly the selected eigenvalues.
    """
    H = build_full_hamiltonian(m, dim)
    w, V = hermitian_eig(H)
    pop0 = np.sum(np.abs(V[:dim, :]) ** 2, axis=0)
    sel = np.flatnonzero(pop0 > 0.5 if k == 0 else pop0 <= 0.5)
    if len(sel) < n_levels:
        raise RegimeError("branch %d classification found only %d states "
                          "(%d requested): branches too strongly mixed"
                          % (k, len(sel), n_levels))
    sel = sel[:n_levels]   # eigh is ascending, so these are the lowest
    # overlap of selected eigenvectors with bare |k, n⟩, n < n_levels
    T = V[k * dim:k * dim + n_levels, sel]
    wm, s, qh = np.linalg.svd(T)
    if s[-1] < 1e-6:
        raise RegimeError("effective block extraction ill-conditioned "
                          "(smallest overlap singular value %.2e)" % s[-1])
    rot = wm @ qh
    return rot @ np.diag(w[sel]) @ rot.conj().T


def fit_branch_coefficients(block, n_fit):
    """Least-structure fit of (frequency, squeeze coefficient) from an
    effective oscillator block: mean adjacent-diagonal spacing and mean
    normalized two-off-diagonal element over the lowest n_fit levels."""
    d = np.real(np.diag(block))
    omega_fit = float(np.mean(d[1:n_fit + 1] - d[:n_fit]))
    n = np.arange(n_fit)
    offd = np.real(np.diag(block, 2))[:n_fit]
    lam_fit = float(np.mean(offd / np.sqrt((n + 1.0) * (n + 2.0))))
    return omega_fit, lam_fit


def schrieffer_wolff_check(m: ModelParams, dim=64, n_levels=24, n_fit=10):
    """Compare numerically extracted branch coefficients against the
    modeled (ω̃, (−1)^k λ).  Report-only; see SWReport."""
    if m.gamma > 0.15:
        raise RegimeError("gamma = %.3g above 0.15: effective-model check "
                          "not meaningful" % m.gamma)
    branches = []
    for k in (0, 1):
        block = effective_block(m, dim, k, n_levels)
        omega_fit, lam_fit = fit_branch_coefficients(block, n_fit)
        branches.append(BranchFit(
            k=k, omega_fit=omega_fit, lam_fit=lam_fit,
            omega_ref=m.omega_tilde,
            lam_ref=branch_sign(k) * m.lam))
    return SWReport(gamma=m.gamma, dim=dim, n_levels=n_levels, n_fit=n_fit,
                    branches=tuple(branches))
