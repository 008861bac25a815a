import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from indefq import theta as th
from indefq.catalog import _v11_shift
from indefq.series import DomainError, QSeries, eval_complex, first_mismatch, monomial
from indefq.theta import (LevelMismatch, ThetaBlock, eta3_jacobi, eta_eval, eta_pentagonal, eta_pow,
                          eta_q, eta_tail, theta_eval, theta_q, theta_tail, vartheta11_eval)
from oracles import euler_product_ints, theta_partial


def test_theta_examples():
    assert theta_q(0, 3, False, 4).terms() == {F(0): 1, F(3): 2}
    assert theta_q(3, 3, False, 1).terms() == {F(3, 4): 2}
    assert theta_q(1, 3, False, F(1, 2)).terms() == {F(1, 12): 1}


def test_theta_rejects_bad_level():
    with pytest.raises(ValueError):
        theta_q(0, 0, False, 4)
    with pytest.raises(ValueError):
        theta_q(0, -1, False, 4)


def test_eta_examples():
    assert eta_q(2).terms() == {F(1, 24): 1, F(25, 24): -1}
    assert eta_pow(5, 3).leading() == (F(1, 8), 1)
    assert (eta_q(5) * theta_q(1, 3, False, 5)).leading() == (F(1, 8), 1)


def test_eta_against_naive_product():
    coeffs = euler_product_ints(60)
    expect = {F(1, 24) + n: c for n, c in enumerate(coeffs) if c}
    assert eta_q(F(1, 24) + 60).terms() == expect


def test_eta_euler_vs_pentagonal():
    assert eta_q(200) == eta_pentagonal(200)


def test_eta_cube_vs_jacobi():
    assert eta_pow(100, 3) == eta3_jacobi(100)


@pytest.mark.parametrize("j,m", [(0, 3), (1, 3), (2, F(5, 2)), (F(1, 2), F(3, 2)), (5, 2)])
@pytest.mark.parametrize("signed", [False, True])
def test_periodicity_and_evenness(j, m, signed):
    base = theta_q(j, m, signed, 12)
    # the coset shift moves n by one, which flips the alternating sign
    shifted = theta_q(F(j) + 2 * F(m), m, signed, 12)
    assert shifted == (-base if signed else base)
    assert theta_q(-F(j), m, signed, 12) == base


@settings(max_examples=30, deadline=None)
@given(st.integers(-8, 8), st.integers(1, 8))
def test_periodicity_property(j, m):
    assert theta_q(j + 2 * m, m, False, 15) == theta_q(j, m, False, 15)
    assert theta_q(-j, m, False, 15) == theta_q(j, m, False, 15)


def test_theta_numeric_example():
    v, e = theta_eval(0, 3, False, 1j, 0, 50)
    assert abs(v - (1 + 2 * math.exp(-6 * math.pi))) < 1e-12
    assert e < 1e-12


@pytest.mark.parametrize("j,m,signed", [(1, 3, False), (0, 3, False), (F(1, 2), F(3, 2), True),
                                        (F(5, 2), F(5, 2), True)])
def test_numeric_exact_coherence(j, m, signed):
    for tau in (0.1 + 1.1j, -0.3 + 0.9j, 0.45 + 1.7j):
        v, e = theta_eval(j, m, signed, tau, 0)
        s = theta_q(j, m, signed, 12)
        w, f = eval_complex(s, tau, theta_tail(j, m, 12))
        assert abs(v - w) <= e + f + 1e-15
        assert abs(v - theta_partial(j, m, signed, tau)) < 1e-12


def test_eta_numeric_coherence():
    for tau in (0.1 + 1.1j, -0.3 + 0.9j, 0.45 + 1.7j):
        v, e = eta_eval(tau)
        w, f = eval_complex(eta_q(30), tau, eta_tail(30))
        assert abs(v - w) <= e + f + 1e-15


def test_vartheta11_odd():
    for tau in (1j, 0.2 + 0.9j):
        v, e = vartheta11_eval(tau, 0)
        assert abs(v) <= e + 1e-15
        a, _ = vartheta11_eval(tau, 0.13 + 0.02j)
        b, _ = vartheta11_eval(tau, -0.13 - 0.02j)
        assert abs(a + b) < 1e-12


def _shift_residual(variant, p, tau, z):
    lhs = _v11_shift("lhs", tau, z, variant, p)
    rhs = _v11_shift("rhs", tau, z, variant, p)
    scale = max(1.0, abs(lhs.value), abs(rhs.value))
    return abs(lhs.value - rhs.value) / scale


def test_vartheta11_half_period_first():
    assert _shift_residual(1, 0, 1.3j, 0.2) < 1e-9


def test_vartheta11_half_period_signed():
    assert _shift_residual(3, 1, 0.05 + 0.9j, 0.3) < 1e-9


@pytest.mark.parametrize("variant", [1, 2, 3, 4])
@pytest.mark.parametrize("p", [0, 1, 2])
def test_vartheta11_all_shifts(variant, p):
    assert _shift_residual(variant, p, 0.1 + 1.2j, 0.17 - 0.05j) < 1e-9


def test_flipped_prefactor_is_detected(monkeypatch):
    monkeypatch.setattr(th, "VARTHETA11_PREFACTOR", -1j)
    assert _shift_residual(1, 0, 1.3j, 0.2) > 1e-3
    assert _shift_residual(3, 1, 0.05 + 0.9j, 0.3) > 1e-3


def test_eval_domain():
    with pytest.raises(DomainError):
        theta_eval(0, 3, False, 0.2)
    with pytest.raises(DomainError):
        vartheta11_eval(-1j)


# ---------------------------------------------------------------- blocks

def test_block_roundtrip():
    c = {0: monomial(1, 0, 5), 2: QSeries({F(1, 3): 2, 1: -1}, 5)}
    b = ThetaBlock.assemble(2, c)
    assert b.coefficient(0) == c[0] and b.coefficient(2) == c[2]
    assert not b.coefficient(1)
    assert b.cutoff == 5


def test_block_fold_example():
    # -(theta_0 + q^{1/4} theta_1 + theta_2) at level 1, with theta_2 = theta_0
    terms = [(j, QSeries({F(-j * (j - 2), 4): -1}, 10)) for j in range(3)]
    b = ThetaBlock.from_theta_terms(1, terms)
    assert b.theta_coefficient(0).terms() == {F(0): -2}
    assert b.theta_coefficient(1).terms() == {F(1, 4): -1}


def test_block_negation_and_mismatch():
    b = ThetaBlock(2, {0: monomial(1, 0, 5), 1: monomial(3, F(1, 2), 5)})
    z = b + (-b)
    assert z.keys() == [] and z == ThetaBlock(2, {}, 5)
    other = ThetaBlock(2, {0: monomial(1, 0, 5), 1: monomial(4, F(1, 2), 5)})
    assert b.first_mismatch(other) == (1, F(1, 2), F(3), F(4))
    with pytest.raises(LevelMismatch):
        b + ThetaBlock(3, {}, 5)


def test_block_scale_by_series():
    b = ThetaBlock(1, {0: monomial(1, 0, 10), 1: monomial(2, 1, 10)})
    s = b.scale(eta_q(10))
    assert s.coefficient(0) == eta_q(10)
    assert first_mismatch(s.coefficient(1), eta_q(10).shift(1).scale(2)) is None


def test_block_rejects_asymmetric_fold():
    with pytest.raises(ValueError):
        ThetaBlock.from_theta_terms(3, [(1, monomial(1, 0, 5))])
