"""Exact sum-of-squares decompositions and SOS-rank certificates for biquadratic forms."""

from .algebra import (
    BilinearForm,
    BiquadForm,
    SosDecomposition,
    SupportPattern,
    expand_squares,
    is_perfect_square,
    support,
    verify_decomposition,
)
from .certify import RankCertificate, check_rectangle_compat, lower_bound
from .scalar import Scalar, parse_scalar, scalar_sqrt

__version__ = "0.1.0"

__all__ = [
    "BilinearForm",
    "BiquadForm",
    "RankCertificate",
    "Scalar",
    "SosDecomposition",
    "SupportPattern",
    "check_rectangle_compat",
    "expand_squares",
    "is_perfect_square",
    "lower_bound",
    "parse_scalar",
    "scalar_sqrt",
    "support",
    "verify_decomposition",
]
