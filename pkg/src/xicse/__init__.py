"""Kernels on sublevel sets, singularity exponents, jumping numbers, and
Newton bodies for toric weights on the unit polydisc, with a verification
suite driving every exact formula against independent oracles.

The Monte Carlo inner loop runs on a compiled extension when available and
falls back to numpy otherwise; ``xicse.MC_BACKEND`` names the active one.
"""

from ._backend import MC_BACKEND
from .core import (
    DimensionMismatchError,
    Functional,
    Germ,
    InfiniteTailError,
    MultiIndex,
    RestrictionMinusInfinityError,
    TropicalWeight,
    WeightPair,
    combine_product,
    lift_functional,
    max_weight,
    pair,
    product_functional,
    product_germ,
    restrict_diagonal,
    restrict_weight,
    scale_weight,
    translate_weight,
    weight_eval_log,
)
from .exponents import (
    ExtendedExponent,
    Valuation,
    computing_functional,
    cse,
    ell_I_membership,
    gamma,
    gamma_numeric,
    jumping_number,
    kiselman,
    monomial_jumping_number,
    thinness,
    valuation_of_functional,
    valuation_of_germ,
)
from .integrals import (
    MassResult,
    McIndeterminateError,
    classify_route,
    d_alpha,
    d_alpha_product,
    hypoexp_tail,
    hypoexp_tail_log,
    mc_mass,
)
from .kernels import ExtremalGerm, KernelCurve, KernelValue, extremal_function, kernel, kernel_curve
from .lp import (
    LinearForm,
    NewtonBody,
    SimplexLPResult,
    ideal_membership,
    min_of_max_on_simplex,
    newton_membership,
)
from .verify import run_mc_check, run_verification, slope_report

__version__ = "0.1.0"

__all__ = [
    "MC_BACKEND",
    "__version__",
    # core
    "DimensionMismatchError",
    "Functional",
    "Germ",
    "InfiniteTailError",
    "MultiIndex",
    "RestrictionMinusInfinityError",
    "TropicalWeight",
    "WeightPair",
    "combine_product",
    "lift_functional",
    "max_weight",
    "pair",
    "product_functional",
    "product_germ",
    "restrict_diagonal",
    "restrict_weight",
    "scale_weight",
    "translate_weight",
    "weight_eval_log",
    # lp
    "LinearForm",
    "NewtonBody",
    "SimplexLPResult",
    "ideal_membership",
    "min_of_max_on_simplex",
    "newton_membership",
    # integrals
    "MassResult",
    "McIndeterminateError",
    "classify_route",
    "d_alpha",
    "d_alpha_product",
    "hypoexp_tail",
    "hypoexp_tail_log",
    "mc_mass",
    # kernels
    "ExtremalGerm",
    "KernelCurve",
    "KernelValue",
    "extremal_function",
    "kernel",
    "kernel_curve",
    # exponents
    "ExtendedExponent",
    "Valuation",
    "computing_functional",
    "cse",
    "ell_I_membership",
    "gamma",
    "gamma_numeric",
    "jumping_number",
    "kiselman",
    "monomial_jumping_number",
    "thinness",
    "valuation_of_functional",
    "valuation_of_germ",
    # harness
    "run_mc_check",
    "run_verification",
    "slope_report",
]
