"""Exact q-series for indefinite theta sums, mock theta corrections and their
modular transformation checks."""
from .series import (INF, ComplexBall, CyclotomicNumber, NotAUnit, QSeries, TailBound,
                     ZetaPolynomial, divide_by_unit, eval_complex, monomial, render, twist_T)
from .theta import (ThetaBlock, eta_pow, eta_q, theta_eval, theta_q, vartheta11_eval)
from .indefinite import IndefSumSpec, enumeration_bound, indef_eval, indef_sum
from .mockforms import (G_star, f_series, g_canonical, g_S_matrix, g_star, g_T_phase, h_series,
                        phi_add, phi_add_special)

__all__ = [
    "INF", "ComplexBall", "CyclotomicNumber", "NotAUnit", "QSeries", "TailBound", "ZetaPolynomial",
    "divide_by_unit", "eval_complex", "monomial", "render", "twist_T",
    "ThetaBlock", "eta_pow", "eta_q", "theta_eval", "theta_q", "vartheta11_eval",
    "IndefSumSpec", "enumeration_bound", "indef_eval", "indef_sum",
    "G_star", "f_series", "g_canonical", "g_S_matrix", "g_star", "g_T_phase", "h_series",
    "phi_add", "phi_add_special",
]

__version__ = "0.1.0"
