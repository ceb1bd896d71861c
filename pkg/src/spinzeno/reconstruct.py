"""Slow matrix reconstruction of the second-order survival probability.

This path rebuilds the survival expressions directly from the operator
expansion (explicit 2x2 propagators, operator products, bath correlation
functions) without using the closed-form scalar integrands.  It exists to
arbitrate between the closed-form integrand variants and as a
cross-check in the test suite; production code uses survival.survival_prob.
"""

import numpy as np

from .bath import DiscreteBath
from .polaron import SIGMA_X, SIGMA_Y, SIGMA_Z, renormalize
from .quadrature import _gl_nodes
from .survival import SurvivalMode, _coeff_params

UP = np.array([1.0, 0.0], dtype=complex)
DOWN = np.array([0.0, 1.0], dtype=complex)


class _FreeEvolution:
    """U_S(t) via eigendecomposition of H_S = eps/2 sz + delta_r/2 sx."""

    def __init__(self, epsilon, delta_r):
        h = 0.5 * epsilon * SIGMA_Z + 0.5 * delta_r * SIGMA_X
        self.evals, self.evecs = np.linalg.eigh(h)

    def u(self, t):
        phase = np.exp(-1j * self.evals * t)
        return (self.evecs * phase) @ self.evecs.conj().T

    def heisenberg(self, op, t):
        u = self.u(t)
        return u.conj().T @ op @ u


def reconstruct_survival(mode, sys, kernel, tau, order=96, table=None):
    """Survival probability by direct operator assembly (reference path)."""
    mode = SurvivalMode(mode)
    pc = _coeff_params(mode, sys, kernel)
    evo = _FreeEvolution(pc.epsilon, pc.delta_r)
    half_delta = 0.5 * sys.delta
    rho0 = np.outer(UP, UP.conj())

    x, w = _gl_nodes(order)
    t1 = 0.5 * tau * (x + 1.0)
    w1 = 0.5 * tau * w

    if table is None and not isinstance(kernel.source, DiscreteBath):
        table = kernel.tabulate(tau)

    def corr(idx, t):
        return complex(kernel.correlation(idx, t, table=table))

    f_ops = {}

    def f_tilde(mu, t):
        key = (mu, float(t))
        if key not in f_ops:
            op = SIGMA_X if mu == 0 else SIGMA_Y
            f_ops[key] = half_delta * evo.heisenberg(op, t)
        return f_ops[key]

    if not mode.removed:
        u_tau = evo.u(tau)
        u_state = u_tau.conj().T @ DOWN
        acc = np.zeros((2, 2), dtype=complex)
        for i, ti in enumerate(t1):
            t2 = 0.5 * ti * (x + 1.0)
            w2 = 0.5 * ti * w
            for j, tj in enumerate(t2):
                for mu, idx in ((0, 11), (1, 22)):
                    c = corr(idx, ti - tj)
                    fi = f_tilde(mu, ti)
                    fj = f_tilde(mu, tj)
                    term = c * (fj @ rho0 @ fi - fi @ fj @ rho0)
                    acc += w1[i] * w2[j] * (term + term.conj().T)
        deficit = u_state.conj() @ (rho0 + acc) @ u_state
        if mode.small_delta:
            # oscillation term of the reduction: true delta_r amplitude,
            # frequency collapsed to |epsilon|
            p_full = renormalize(sys, kernel)
            deficit = deficit + (p_full.delta_r / pc.omega_r) ** 2 \
                * np.sin(0.5 * pc.omega_r * tau) ** 2
        return float(1.0 - np.real(deficit))

    # Removed evolution: only the sandwich terms reach <down| X |down>;
    # the non-sandwich terms carry rho0 adjacent to the projector and
    # vanish identically.
    def element(mu, t):
        return DOWN.conj() @ f_tilde(mu, t) @ UP

    total = 0.0 + 0.0j
    for i, ti in enumerate(t1):
        for j, tj in enumerate(t1):
            for mu, idx in ((0, 11), (1, 22)):
                c = (corr(idx, tj - ti) + corr(idx, 0.0)
                     - corr(idx, tj - tau) - corr(idx, tau - ti))
                total += w1[i] * w1[j] * element(mu, ti) \
                    * np.conj(element(mu, tj)) * c
    return float(1.0 - np.real(total))
