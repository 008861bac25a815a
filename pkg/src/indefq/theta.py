"""Theta functions, Dedekind eta and theta blocks.

Conventions::

    theta_{j,m}(tau, z)     = sum_{n in Z + j/2m} q^{m n^2} e^{2 pi i m n z}
    theta^{(-)}_{j,m}       inserts (-1)^{n - j/2m}
    vartheta_11(tau, z)     = VARTHETA11_PREFACTOR * sum_n (-1)^n q^{(n+1/2)^2/2} e^{(2n+1) pi i z}
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction as F
from typing import Iterable, Mapping

from .series import (EPS, INF, ComplexBall, QSeries, TailBound, as_cutoff, as_exponent,
                     check_upper, first_mismatch, render)

# Sign of the vartheta_11 normalisation; +1j reproduces the half-period shift
# formulas it is used in (the opposite sign fails them by a global -1).
VARTHETA11_PREFACTOR = 1j


def _level(m) -> F:
    m = as_exponent(m)
    if m <= 0:
        raise ValueError(f"theta level must be positive, got {m}")
    if (2 * m).denominator != 1:
        raise ValueError(f"need 2m integral, got m = {m}")
    return m


def _gaussian_tail(a: float, b: float, x0: float) -> float:
    """Bound for sum_{k>=0} exp(-a (x0+k)^2 + b (x0+k)), with x0 > 0.

    Uses (x0+k)^2 >= x0^2 + 2 x0 k, giving a geometric series.
    """
    rate = 2 * a * x0 - b
    if rate <= 0:
        return math.inf
    lead = -a * x0 * x0 + b * x0
    if lead < -745:
        return 0.0
    return math.exp(lead) / -math.expm1(-rate)


def theta_q(j, m, signed: bool = False, cutoff=10) -> QSeries:
    """theta_{j,m}(tau, 0) (or the signed variant) below the cutoff."""
    m = _level(m)
    j = as_exponent(j)
    cutoff = as_cutoff(cutoff)
    if cutoff == INF:
        raise ValueError("theta series are infinite; give a finite cutoff")
    a = j / (2 * m)
    if cutoff <= 0:
        return QSeries.zero(cutoff)
    # m (n+a)^2 < N  <=>  |n + a| < sqrt(N/m)
    r = math.sqrt(float(cutoff / m)) + 1
    terms = {}
    for n in range(math.floor(-r - a), math.ceil(r - a) + 1):
        x = n + a
        e = m * x * x
        if e < cutoff:
            c = F(-1 if (signed and n % 2) else 1)
            terms[e] = terms.get(e, 0) + c
    return QSeries(terms, cutoff)


def _first_outside(a: F, m: F, cutoff) -> float:
    """Smallest x > 0 in Z + a with m x^2 >= cutoff."""
    n = math.floor(math.sqrt(max(float(cutoff / m), 0.0)) - a) - 1
    while n + a <= 0 or m * (n + a) ** 2 < cutoff:
        n += 1
    return float(n + a)


def theta_tail(j, m, cutoff, shift=0) -> TailBound:
    """Majorant of sum |q|^{m x^2 + shift} over x in Z + j/2m with m x^2 >= cutoff."""
    m = _level(m)
    a = as_exponent(j) / (2 * m)
    cutoff = as_cutoff(cutoff)
    shift = float(as_exponent(shift))
    xs = [_first_outside(a, m, cutoff), _first_outside(-a, m, cutoff)]
    at_zero = a.denominator == 1 and cutoff <= 0
    mf = float(m)

    def fn(absq):
        if absq == 0:
            return 0.0
        lam = -math.log(absq)
        total = sum(_gaussian_tail(lam * mf, 0.0, x) for x in xs) + (1.0 if at_zero else 0.0)
        return math.exp(-lam * shift) * total

    return TailBound(fn)


def theta_eval(j, m, signed: bool, tau, z=0, precision_terms: int = 60):
    """Numeric theta_{j,m}(tau, z) from |n| <= precision_terms, with error bound."""
    tau = check_upper(tau)
    m = float(_level(m))
    a = float(as_exponent(j)) / (2 * m)
    z = complex(z)
    acc = ComplexBall()
    for n in range(-precision_terms, precision_terms + 1):
        x = n + a
        arg = 2j * math.pi * (m * x * x * tau + m * x * z)
        t = cmath.exp(arg)
        if signed and n % 2:
            t = -t
        acc = acc + ComplexBall(t, 4 * EPS * (1 + abs(arg)) * abs(t))
    lam = 2 * math.pi * tau.imag
    b = 2 * math.pi * m * abs(z.imag)
    tail = (_gaussian_tail(lam * m, b, precision_terms + 1 + a)
            + _gaussian_tail(lam * m, b, precision_terms + 1 - a))
    if math.isinf(tail):
        raise ValueError("precision_terms too small for this z")
    return acc.value, acc.rad + tail


def vartheta11_eval(tau, z=0, precision_terms: int = 60):
    """Numeric vartheta_11(tau, z)."""
    tau = check_upper(tau)
    z = complex(z)
    acc = ComplexBall()
    for n in range(-precision_terms - 1, precision_terms + 1):
        x = n + 0.5
        arg = 1j * math.pi * (x * x * tau + 2 * x * z)
        t = cmath.exp(arg)
        if n % 2:
            t = -t
        acc = acc + ComplexBall(t, 4 * EPS * (1 + abs(arg)) * abs(t))
    lam = 2 * math.pi * tau.imag
    b = 2 * math.pi * abs(z.imag)
    tail = 2 * _gaussian_tail(lam / 2, b, precision_terms + 1.5)
    v = VARTHETA11_PREFACTOR * acc.value
    return v, acc.rad + tail


def eta_q(cutoff) -> QSeries:
    """q^{1/24} prod_{n>=1} (1 - q^n) expanded exactly below the cutoff."""
    cutoff = as_cutoff(cutoff)
    top = math.ceil(cutoff - F(1, 24))
    coeffs = [0] * max(top, 1)
    coeffs[0] = 1
    for n in range(1, top):
        for k in range(top - 1, n - 1, -1):
            coeffs[k] -= coeffs[k - n]
    return QSeries({F(1, 24) + k: F(c) for k, c in enumerate(coeffs) if c}, cutoff)


def eta_pentagonal(cutoff) -> QSeries:
    """Euler's pentagonal form sum_k (-1)^k q^{1/24 + k(3k-1)/2}."""
    cutoff = as_cutoff(cutoff)
    terms = {}
    k = 0
    while True:
        done = True
        for kk in {k, -k}:
            e = F(1, 24) + F(kk * (3 * kk - 1), 2)
            if e < cutoff:
                terms[e] = F((-1) ** (kk % 2))
                done = False
        if done and k > 0:
            break
        k += 1
    return QSeries(terms, cutoff)


def eta_pow(cutoff, k: int) -> QSeries:
    if k < 1:
        raise ValueError("k must be a positive integer")
    e = eta_q(cutoff)
    out = e
    for _ in range(k - 1):
        out = out * e
    return out


def eta3_jacobi(cutoff) -> QSeries:
    """Jacobi's sum_{n>=0} (-1)^n (2n+1) q^{(2n+1)^2/8}."""
    cutoff = as_cutoff(cutoff)
    terms = {}
    n = 0
    while F((2 * n + 1) ** 2, 8) < cutoff:
        terms[F((2 * n + 1) ** 2, 8)] = F((-1) ** n * (2 * n + 1))
        n += 1
    return QSeries(terms, cutoff)


def eta_tail(cutoff) -> TailBound:
    """Majorant for the pentagonal terms of eta at or above the cutoff."""
    # 1/24 + k(3k-1)/2 = (3/2)(k - 1/6)^2: the lattice of theta_{-1/2, 3/2}
    return theta_tail(F(-1, 2), F(3, 2), cutoff)


def eta_eval(tau, precision_terms: int = 40):
    """Numeric eta(tau) via the pentagonal sum over |k| <= precision_terms."""
    tau = check_upper(tau)
    acc = ComplexBall()
    for k in range(-precision_terms, precision_terms + 1):
        e = 1 / 24 + k * (3 * k - 1) / 2
        arg = 2j * math.pi * tau * e
        t = cmath.exp(arg)
        if k % 2:
            t = -t
        acc = acc + ComplexBall(t, 4 * EPS * (1 + abs(arg)) * abs(t))
    lam = 2 * math.pi * tau.imag
    tail = (_gaussian_tail(1.5 * lam, 0.0, precision_terms + 1 - 1 / 6)
            + _gaussian_tail(1.5 * lam, 0.0, precision_terms + 1 + 1 / 6))
    return acc.value, acc.rad + tail


# ---------------------------------------------------------------- blocks

class LevelMismatch(ValueError):
    pass


class ThetaBlock:
    """sum_{0<=k<=m} c_k [theta_{k,m} + theta_{-k,m}] with series coefficients c_k.

    ``coefficient(k)`` is c_k.  Since theta_{-k,m} = theta_{k,m} for k in {0, m},
    the coefficient of theta_{k,m} itself is 2 c_k there; ``theta_coefficient``
    returns that.
    """

    __slots__ = ("m", "_c", "_cutoff")

    def __init__(self, m: int, coeffs: Mapping[int, QSeries], cutoff=None):
        if int(m) != m or m < 1:
            raise ValueError("block level must be a positive integer")
        self.m = int(m)
        for k in coeffs:
            if not (0 <= k <= self.m):
                raise ValueError(f"index {k} outside 0..{self.m}")
        cuts = [s.cutoff for s in coeffs.values()]
        if cutoff is None:
            cutoff = min(cuts) if cuts else INF
        cutoff = as_cutoff(cutoff)
        self._cutoff = cutoff
        self._c = {k: s.truncate(cutoff) for k, s in sorted(coeffs.items()) if s.truncate(cutoff)}

    @classmethod
    def assemble(cls, m, coeffs, cutoff=None):
        return cls(m, coeffs, cutoff)

    @classmethod
    def from_theta_terms(cls, m: int, terms: Iterable, cutoff=None):
        """Fold sum_j s_j theta_{j,m} (j any integer) into the pair basis.

        The input must be symmetric under j -> -j mod 2m, as every block built
        from [theta_j + theta_{-j}] pieces is.
        """
        m = int(m)
        acc: dict[int, QSeries] = {}
        for j, s in terms:
            k = int(j) % (2 * m)
            acc[k] = acc[k] + s if k in acc else s
        coeffs = {}
        for k in range(m + 1):
            s = acc.get(k)
            if k in (0, m):
                if s is not None:
                    coeffs[k] = s.scale(F(1, 2))
                continue
            t = acc.get(2 * m - k)
            if s is None and t is None:
                continue
            if s is None or t is None or first_mismatch(s, t) is not None:
                raise ValueError(f"theta_{k} and theta_{-k} coefficients differ")
            coeffs[k] = s if s.cutoff <= t.cutoff else t
        cuts = [s.cutoff for s in acc.values()]
        if cutoff is None:
            cutoff = min(cuts) if cuts else INF
        return cls(m, coeffs, cutoff)

    @property
    def cutoff(self):
        return self._cutoff

    def keys(self):
        return list(self._c)

    def coefficient(self, k: int) -> QSeries:
        if not (0 <= k <= self.m):
            raise ValueError(f"index {k} outside 0..{self.m}")
        return self._c.get(k, QSeries.zero(self._cutoff))

    def theta_coefficient(self, k: int) -> QSeries:
        c = self.coefficient(k)
        return c.scale(F(2)) if k in (0, self.m) else c

    def _check(self, other):
        if not isinstance(other, ThetaBlock):
            raise TypeError("expected a ThetaBlock")
        if other.m != self.m:
            raise LevelMismatch(f"levels {self.m} and {other.m} differ")

    def __add__(self, other):
        self._check(other)
        cut = min(self._cutoff, other._cutoff)
        return ThetaBlock(self.m, {k: self.coefficient(k).truncate(cut) + other.coefficient(k).truncate(cut)
                                   for k in range(self.m + 1)}, cut)

    def __neg__(self):
        return ThetaBlock(self.m, {k: -s for k, s in self._c.items()}, self._cutoff)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        """Multiply every coefficient by a scalar or a QSeries."""
        out = {k: s * c for k, s in self._c.items()}
        cut = self._cutoff
        if isinstance(c, QSeries):
            cut = min([cut, c.cutoff] + [s.cutoff for s in out.values()])
        return ThetaBlock(self.m, out, cut)

    def truncate(self, cutoff):
        return ThetaBlock(self.m, self._c, cutoff)

    def first_mismatch(self, other):
        """(k, exponent, lhs, rhs) for the first differing coefficient, or None."""
        self._check(other)
        cut = min(self._cutoff, other._cutoff)
        for k in range(self.m + 1):
            d = first_mismatch(self.coefficient(k).truncate(cut), other.coefficient(k).truncate(cut))
            if d is not None:
                return (k,) + d
        return None

    def __eq__(self, other):
        if not isinstance(other, ThetaBlock):
            return NotImplemented
        return (self.m == other.m and self._cutoff == other._cutoff
                and self.first_mismatch(other) is None)

    __hash__ = None

    def __repr__(self):
        return f"ThetaBlock(m={self.m}, {self._c!r})"

    def render(self) -> str:
        out = []
        for k in range(self.m + 1):
            out.append(f"[theta_{k},{self.m} + theta_-{k},{self.m}]:")
            body = render(self.coefficient(k))
            out.append(body if body else "0")
        return "\n".join(out)


def theta_pair_eval(k, m, tau, z=0, precision_terms: int = 60):
    """Numeric [theta_k + theta_{-k}](tau, z) as a ComplexBall."""
    a = theta_eval(k, m, False, tau, z, precision_terms)
    b = theta_eval(-k, m, False, tau, z, precision_terms)
    return ComplexBall(a[0], a[1]) + ComplexBall(b[0], b[1])
