"""Exact lab-frame evolution of a small discretized bath.

Brute-force validation path: build the full lab-frame Hamiltonian on a
truncated Fock space, propagate the correlated initial state exactly via
eigendecomposition, and read off the survival probability without any
perturbation theory.  Zero temperature only.
"""

from dataclasses import dataclass

import numpy as np

from .bath import DiscreteBath
from .errors import DimensionBudgetError, DomainError, TruncationError
from .polaron import SIGMA_X, SIGMA_Z

DEFAULT_DIM_BUDGET = 4096


@dataclass(frozen=True)
class TruncatedBathSpec:
    """Discrete bath plus per-mode Fock truncation (levels 0..n_max-1)."""

    bath: DiscreteBath
    n_max: int
    dim_budget: int = DEFAULT_DIM_BUDGET

    def __post_init__(self):
        if self.n_max < 3:
            raise DomainError("n_max must be at least 3")
        if self.dimension > self.dim_budget:
            raise DimensionBudgetError(
                f"total dimension {self.dimension} exceeds budget "
                f"{self.dim_budget}")

    @property
    def dimension(self):
        return 2 * self.n_max ** len(self.bath.modes)


def discretize_bath(J, K, omega_max):
    """Midpoint-rule discretization of a continuous spectral density.

    omega_k = (k - 1/2) d_omega with d_omega = omega_max / K and
    g_k = sqrt(J(omega_k) d_omega), so sum g_k^2/omega_k^2 cos(omega_k t)
    approximates phi_R(t) at zero temperature.
    """
    if K < 1:
        raise DomainError("mode count K must be at least 1")
    if omega_max <= 0.0:
        raise DomainError("omega_max must be positive")
    d_omega = omega_max / K
    omegas = (np.arange(K) + 0.5) * d_omega
    gs = np.sqrt(J.eval(omegas) * d_omega)
    return DiscreteBath(tuple(zip(omegas, gs)))


def _ladder(n_max):
    return np.diag(np.sqrt(np.arange(1, n_max)), 1)


def _mode_operator(op, mode_index, n_max, n_modes):
    """Embed a single-mode operator into the full bath tensor product."""
    out = np.eye(1)
    for k in range(n_modes):
        out = np.kron(out, op if k == mode_index else np.eye(n_max))
    return out


def build_lab_hamiltonian(sys, spec):
    """Dense Hermitian lab-frame Hamiltonian on the truncated space."""
    bath = spec.bath
    n_modes = len(bath.modes)
    n_max = spec.n_max
    dim_b = n_max ** n_modes
    eye_b = np.eye(dim_b)
    h = np.kron(0.5 * sys.epsilon * SIGMA_Z + 0.5 * sys.delta * SIGMA_X,
                eye_b).astype(complex)
    a = _ladder(n_max)
    for k, (omega, g) in enumerate(bath.modes):
        ak = _mode_operator(a, k, n_max, n_modes)
        h += np.kron(np.eye(2), omega * (ak.conj().T @ ak))
        h += np.kron(0.5 * SIGMA_Z, g * (ak + ak.conj().T))
    return h


def _coherent_vector(alpha, n_max, tol=1e-6):
    n = np.arange(n_max)
    if alpha == 0:
        coeff = np.zeros(n_max, dtype=complex)
        coeff[0] = 1.0
    else:
        log_fact = np.cumsum(np.log(np.maximum(n, 1)))  # log(n!)
        coeff = np.exp(-0.5 * abs(alpha) ** 2 + n * np.log(complex(alpha))
                       - 0.5 * log_fact)
    loss = 1.0 - np.sum(np.abs(coeff) ** 2)
    if loss > tol:
        raise TruncationError(
            f"coherent state |alpha|={abs(alpha):.3g} loses weight "
            f"{loss:.3g} > {tol:g} at n_max={n_max}")
    return coeff


def initial_state_lab(sys, spec, truncation_tol=1e-6):
    """Lab-frame density matrix of |up> x polaron vacuum at T = 0.

    The polaron-frame product state maps to |up> times coherent
    displacements -alpha_k/2 in the lab frame (normalized after
    truncation).
    """
    vec = np.array([1.0], dtype=complex)
    for alpha in spec.bath.alphas:
        vec = np.kron(vec, _coherent_vector(-0.5 * alpha, spec.n_max,
                                            truncation_tol))
    full = np.kron(np.array([1.0, 0.0], dtype=complex), vec)
    full /= np.linalg.norm(full)
    return np.outer(full, full.conj())


class ExactEvolution:
    """Reusable eigendecomposition of the lab Hamiltonian.

    Multiple tau evaluations reuse the decomposition read-only.
    """

    def __init__(self, sys, spec):
        self.sys = sys
        self.spec = spec
        self.h = build_lab_hamiltonian(sys, spec)
        self.evals, self.evecs = np.linalg.eigh(self.h)
        self.rho0 = initial_state_lab(sys, spec)
        dim_b = spec.n_max ** len(spec.bath.modes)
        self._proj_up = np.kron(np.diag([1.0, 0.0]), np.eye(dim_b))
        h_s = 0.5 * sys.epsilon * SIGMA_Z + 0.5 * sys.delta * SIGMA_X
        self._hs_evals, self._hs_evecs = np.linalg.eigh(h_s)
        self._dim_b = dim_b

    def _propagator(self, tau):
        phase = np.exp(-1j * self.evals * tau)
        return (self.evecs * phase) @ self.evecs.conj().T

    def survival(self, tau, removed=False):
        u = self._propagator(tau)
        rho = u @ self.rho0 @ u.conj().T
        if removed:
            phase = np.exp(1j * self._hs_evals * tau)
            u_s = (self._hs_evecs * phase) @ self._hs_evecs.conj().T
            u_rm = np.kron(u_s, np.eye(self._dim_b))
            rho = u_rm @ rho @ u_rm.conj().T
        return float(np.real(np.trace(self._proj_up @ rho)))


def exact_survival(sys, spec, tau, removed=False):
    """One-shot exact survival probability (see ExactEvolution for sweeps)."""
    return ExactEvolution(sys, spec).survival(tau, removed=removed)
