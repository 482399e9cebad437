"""Extended-precision kernel: double-double arrays, error balls, li(x)."""

from .dd import DD
from .functions import (
    EULER_GAMMA,
    helper_h_g_c,
    li,
    li_square,
    li_truncation,
    li_truncation_coefficients,
)
from .xreal import XReal, xexp, xlog

__all__ = [
    "DD",
    "EULER_GAMMA",
    "XReal",
    "helper_h_g_c",
    "li",
    "li_square",
    "li_truncation",
    "li_truncation_coefficients",
    "xexp",
    "xlog",
]
