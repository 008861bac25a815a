import math
from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from indefq.indefinite import (REGIONS, WHITELIST, IndefSumSpec, SpecError, enumeration_bound,
                               indef_eval, indef_sum, indef_tail, line_sum)
from indefq.series import QSeries, ZetaPolynomial, eval_complex
from indefq.theta import eta_q, eta_tail, theta_q, theta_tail
from oracles import REGION_PREDICATES, brute_indef

H = F(1, 2)
# level one sums whose values are eta times a level 3 theta constant
PROP_I = IndefSumSpec("integers", "V2", F(3, 2), 1, H, H)
PROP_II = IndefSumSpec("integers", "V2", F(3, 2), 1, H, 0)
PROP_III = IndefSumSpec("integers", "V1", F(3, 2), 1, F(1, 6), H)


def _as_dict(s: QSeries):
    out = {}
    for e, c in s.items():
        if isinstance(c, ZetaPolynomial):
            for a, v in c.terms().items():
                out[(e, a)] = v
        else:
            out[e] = c
    return out


def _sampled_specs():
    params = [(F(3, 2), F(1), H, H), (F(3, 2), F(1), F(1, 6), F(5, 6)),
              (F(5, 2), F(2), F(4, 5), F(-1, 4)), (F(2), F(1), F(0), F(1, 3)),
              (F(7, 2), F(3), F(-2, 7), F(1, 6))]
    for (lat, reg), (A, B, a, b), so in product(sorted(WHITELIST), params, (0, 1)):
        yield IndefSumSpec(lat, reg, A, B, a, b, so)


SPECS = list(_sampled_specs())


def test_region_table_matches_oracle_predicates():
    # the data-encoded regions agree pointwise with the literal inequalities
    from indefq.indefinite import _r_interval
    for reg in REGIONS:
        for jp, h in product(range(-6, 7), (F(0), H)):
            j = jp + h
            for half, pred in zip(REGIONS[reg], REGION_PREDICATES[reg]):
                lo, hi = _r_interval(half, jp, h)
                got = {rp + h for rp in range(lo, hi + 1)}
                want = {rp + h for rp in range(-10, 11) if pred(j, rp + h)}
                assert got == want, (reg, j)


def test_empty_range_below_minimum():
    # the minorant of this spec is bounded below, so a very negative cutoff has no points
    assert len(enumeration_bound(PROP_I, -1000)) == 0
    assert indef_sum(PROP_I, -1000).terms() == {}


def test_range_contains_all_points():
    rng = enumeration_bound(PROP_I, 10)
    h = PROP_I.h
    for a, b in product(range(-50, 51), repeat=2):
        j, r = a + h, b + h
        plus, minus = REGION_PREDICATES["V2"]
        if (plus(j, r) or minus(j, r)) and PROP_I.exponent(j, r) < 10:
            assert a in rng


@pytest.mark.parametrize("spec", SPECS[::7])
def test_range_monotone_in_cutoff(spec):
    for n in (1, 3, 7, 20):
        lo, hi = enumeration_bound(spec, n), enumeration_bound(spec, 2 * n)
        assert set(lo) <= set(hi)


def test_leading_terms():
    assert indef_sum(PROP_I, 2).leading() == (F(1, 8), 1)
    assert indef_sum(PROP_II, 2).leading() == (F(3, 8), 1)
    # the third sum is half of eta * theta_{3,3}, whose leading term is 2 q^{19/24}
    assert indef_sum(PROP_III, 2).leading() == (F(19, 24), 1)


def test_indef_eval_matches_eta_theta():
    tau = 1.1j
    v, e = indef_eval(PROP_I, tau, 10)
    # evaluate the factors separately, each with its own tail bound
    ev, ee = eval_complex(eta_q(10), tau, eta_tail(10))
    tv, te = eval_complex(theta_q(1, 3, False, 10), tau, theta_tail(1, 3, 10))
    exact = ev * tv
    assert abs(v - exact) < 1e-9
    assert abs(v - exact) <= e + abs(ev) * te + abs(tv) * ee + ee * te + 1e-14


def test_error_bound_decreases_with_cutoff():
    absq = math.exp(-2 * math.pi * 1.1)
    cuts = (2, 4, 6, 10, 16, 24)
    tails = [indef_tail(PROP_I, n).bound(absq) for n in cuts]
    assert all(a > b for a, b in zip(tails, tails[1:]))
    # the reported bound also carries rounding slack, which grows slowly with the term count
    bounds = [indef_eval(PROP_I, 1.1j, n)[1] for n in cuts]
    assert all(b <= a + 1e-15 for a, b in zip(bounds, bounds[1:]))


def test_tail_dominates_omitted_terms():
    absq = math.exp(-2 * math.pi * 0.9)
    for spec in SPECS[::5]:
        big = indef_sum(spec, 40)
        for n in (2, 5, 9):
            omitted = sum(abs(float(c)) * absq ** float(e) for e, c in big.items() if e >= n)
            assert omitted <= indef_tail(spec, n).bound(absq) * (1 + 1e-12)


@pytest.mark.parametrize("spec", SPECS)
def test_cutoff_stability(spec):
    hi = indef_sum(spec, 9)
    for n in (F(1, 3), 2, F(9, 2), 7):
        assert indef_sum(spec, n) == hi.truncate(n)


@pytest.mark.parametrize("spec", SPECS)
def test_brute_force_equivalence(spec):
    got = indef_sum(spec, 6)
    want = brute_indef(spec.lattice, spec.region, spec.A, spec.B, spec.alpha, spec.beta, 6,
                       sign_offset=spec.sign_offset)
    assert _as_dict(got) == want


@pytest.mark.parametrize("lat,reg", sorted(WHITELIST))
def test_brute_force_with_zeta(lat, reg):
    spec = IndefSumSpec(lat, reg, F(5, 2), 2, F(1, 10), F(-1, 4), 1, zeta=(4, -4, F(1, 3)))
    got = indef_sum(spec, 6)
    want = brute_indef(lat, reg, spec.A, spec.B, spec.alpha, spec.beta, 6, sign_offset=1,
                       zeta=spec.zeta)
    assert _as_dict(got) == want


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(sorted(WHITELIST)), st.fractions(F(7, 6), F(4), max_denominator=6),
       st.fractions(F(1, 2), F(3), max_denominator=6), st.fractions(-1, 1, max_denominator=8),
       st.fractions(-1, 1, max_denominator=8), st.integers(0, 1))
def test_brute_force_property(lr, ratio, B, alpha, beta, so):
    A = B * ratio
    spec = IndefSumSpec(lr[0], lr[1], A, B, alpha, beta, so)
    want = brute_indef(lr[0], lr[1], A, B, alpha, beta, 4, radius=40, sign_offset=so)
    assert _as_dict(indef_sum(spec, 4)) == want


@settings(max_examples=20, deadline=None)
@given(st.fractions(F(7, 6), F(3), max_denominator=6), st.fractions(F(1, 2), F(2), max_denominator=4),
       st.fractions(-1, 1, max_denominator=6), st.fractions(-1, 1, max_denominator=6))
def test_region_bookkeeping(ratio, B, alpha, beta):
    # V3 = V2 minus the r = 0 line, on the integer lattice
    A = B * ratio
    v3 = indef_sum(IndefSumSpec("integers", "V3", A, B, alpha, beta), 8)
    v2 = indef_sum(IndefSumSpec("integers", "V2", A, B, alpha, beta), 8)
    line = line_sum(IndefSumSpec("integers", "V2", A, B, alpha, beta), 8)
    assert v3 == v2 - line


def test_spec_errors():
    with pytest.raises(SpecError):
        IndefSumSpec("half_odd", "V2", 1, 1)
    with pytest.raises(SpecError):
        IndefSumSpec("half_odd", "V2", 1, 2)
    with pytest.raises(SpecError):
        IndefSumSpec("half_odd", "V3", 2, 1)
    with pytest.raises(SpecError):
        IndefSumSpec("integers", "V4", 2, 1)
    with pytest.raises(SpecError):
        IndefSumSpec("rationals", "V1", 2, 1)
    with pytest.raises(SpecError):
        indef_eval(IndefSumSpec("integers", "V1", 2, 1, zeta=(1, 0, 0)), 1j, 3)
    with pytest.raises(SpecError):
        line_sum(IndefSumSpec("half_odd", "V2", 2, 1), 3)


def test_serialization_roundtrip():
    for spec in SPECS[:10] + [IndefSumSpec("integers", "V3", F(5, 2), 2, F(1, 10), F(-1, 4),
                                           zeta=(4, -4, F(1, 3)))]:
        d = spec.to_dict()
        assert IndefSumSpec.from_dict(d) == spec
        assert all(isinstance(v, (str, int, list, type(None))) for v in d.values())


def test_empty_range_eval_is_sound():
    # nothing is summed, so the bound has to cover the whole value
    v, e = indef_eval(PROP_I, 1j, -1000)
    full, _ = indef_eval(PROP_I, 1j, 20)
    assert v == 0 and e >= abs(full)
