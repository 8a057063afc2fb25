"""High-precision numerics for criteria equivalent to the Riemann Hypothesis."""
from .errors import (CacheError, CapacityError, ConditioningError, DomainError, PoleError,
                     PrecisionBudgetError, RHLabError, ZeroTableError)
from .mp_kernel import (ZetaEvenTable, bernoulli, gamma_complex, shared_zeta_table,
                        zeta_continued, zeta_dirichlet, zeta_even_table, zeta_maslanka)
from .baez_duarte import alternating_sum_closed, alternating_sum_direct, ck, ck_range
from .riesz import approx_relation_check, bridge_check, riesz_R, series_identity_check
from .classical import koch_check, lagarias_scan, sigma_sieve
from .li_coefficients import ZeroTable, li_lambda, li_lambdas, load_zeros
from .debruijn import h_lambda, phi, real_zero_scan, xi_on_line

__version__ = "0.1.0"
