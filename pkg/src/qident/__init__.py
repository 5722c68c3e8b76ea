"""Exact q-series verification of a family of sum--product identities.

Everything is integer arithmetic on a half-exponent grid: series carry
a truncation order and comparisons certify equality of every
coefficient strictly below the order actually reached.
"""

from .series import (
    INF,
    CompareResult,
    HalfInt,
    IllPosedError,
    Mismatch,
    NonInvertibleError,
    Order,
    OrderExceededError,
    QidentError,
    QSeries,
    SpecError,
    ZLaurent,
    he,
    qe,
)
from .qobjects import (
    Monomial,
    binom,
    euler_series,
    partition_series,
    poch_finite,
    poch_finite_scalar,
    poch_infinite,
    qbinom,
    qbinom_poly,
)
from .multisum import (
    SummandSpec,
    SumStats,
    TailEven,
    TailH,
    TailOdd,
    TailOver,
    TailOverOdd,
    eval_multisum,
    prune_bound,
    tail_min_num,
)
from .products import (
    TripleProductSpec,
    eval_product_sum,
    negative_arg_product,
    theta_triple_sum,
)
from .hfamily import (
    FSpec,
    HSpec,
    f_func,
    f_limit_sum,
    h_limit_product,
    h_poly,
    stabilized_f_value,
    stabilized_h_value,
)
from .catalog import (
    EdgeSet,
    IdentityCase,
    VerificationReport,
    edge_weight,
    enumerate_edge_sets,
    make_case,
    registered_ids,
    validate_case,
    verify,
    verify_andrews_answer,
    verify_chu_collapse,
    verify_edge_lemma,
    verify_even_fact,
)

__version__ = "0.1.0"

__all__ = [
    "INF",
    "CompareResult",
    "HalfInt",
    "IllPosedError",
    "Mismatch",
    "NonInvertibleError",
    "Order",
    "OrderExceededError",
    "QidentError",
    "QSeries",
    "SpecError",
    "ZLaurent",
    "he",
    "qe",
    "Monomial",
    "binom",
    "euler_series",
    "partition_series",
    "poch_finite",
    "poch_finite_scalar",
    "poch_infinite",
    "qbinom",
    "qbinom_poly",
    "SummandSpec",
    "SumStats",
    "TailEven",
    "TailH",
    "TailOdd",
    "TailOver",
    "TailOverOdd",
    "eval_multisum",
    "prune_bound",
    "tail_min_num",
    "TripleProductSpec",
    "eval_product_sum",
    "negative_arg_product",
    "theta_triple_sum",
    "FSpec",
    "HSpec",
    "f_func",
    "f_limit_sum",
    "h_limit_product",
    "h_poly",
    "stabilized_f_value",
    "stabilized_h_value",
    "EdgeSet",
    "IdentityCase",
    "VerificationReport",
    "edge_weight",
    "enumerate_edge_sets",
    "make_case",
    "registered_ids",
    "validate_case",
    "verify",
    "verify_andrews_answer",
    "verify_chu_collapse",
    "verify_edge_lemma",
    "verify_even_fact",
]
