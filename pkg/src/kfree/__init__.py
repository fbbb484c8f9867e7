"""Maximum k-free sets in Z/nZ and smallest maximal k-free subsets of [1, n]."""

from .arith import Factorization, divisors, euler_phi, factorize, multiplicative_order
from .closed_form import (
    InconsistencyError,
    RkValue,
    density_identity_check,
    mersenne_rk,
    rk_coprime,
    rk_k2m,
    rk_km,
    rk_theorem5,
    sidon_bound,
)
from .forest import (
    build_forest,
    construct_max_kfree,
    forest_to_dot,
    rk,
    rk_general,
    root_valuation,
    select_optimal,
)
from .interval import construct_min_maximal, h_value, is_maximal_kfree_interval, min_pattern, tilde_rk
from .strata import ModulusContext, is_kfree, make_context

__version__ = "0.1.0"
