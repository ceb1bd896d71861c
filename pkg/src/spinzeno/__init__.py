"""Survival probability and Zeno/anti-Zeno decay rates of a repeatedly
measured spin-boson system, computed with a polaron-frame second-order
perturbative method plus an exact-diagonalization validation oracle."""

from .bath import (BathKernel, DiscreteBath, KernelTable, SpectralDensity,
                   ZERO_TEMPERATURE, coherence_B, correlation_C, eval_J, phi)
from .config import RunConfig, apply_sweep, parse_config
from .tables import ResultTable, emit_csv, emit_json, parse_json
from .errors import (ConfigError, DegenerateSystemError, DimensionBudgetError,
                     DivergentKernelError, DomainError, OutOfRegimeError,
                     QuadratureError, SpinZenoError, TruncationError)
from .oracle import (ExactEvolution, TruncatedBathSpec, build_lab_hamiltonian,
                     discretize_bath, exact_survival, initial_state_lab)
from .polaron import (PolaronParams, SystemParams, fgh, renormalize,
                      rot_coeffs, u_s_matrix)
from .quadrature import integrate_semiinfinite, integrate_triangle
from .reconstruct import reconstruct_survival
from .regimes import (DecayCurve, RegimeLabel, RegimeReport, classify,
                      sample_curve, validity_metric)
from .survival import (SurvivalMode, SurvivalResult, decay_rate,
                       survival_after_N, survival_prob)

__version__ = "0.1.0"
