"""Exact truncated Puiseux q-series and the coefficient rings they carry.

A ``QSeries`` is a finite map from rational exponents to coefficients together
with an exclusive ``cutoff``: every coefficient below the cutoff is final, and
nothing at or above it is stored.  A cutoff of ``INF`` marks a finite
polynomial that is known exactly.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction as F
from functools import lru_cache
from numbers import Rational
from typing import Callable, Iterable, Mapping

INF = math.inf
EPS = 2.0 ** -52


class DomainError(ValueError):
    pass


class NotAUnit(ArithmeticError):
    def __init__(self, msg="not a unit"):
        super().__init__(msg)


def as_exponent(x) -> F:
    """Coerce ints, Fractions and strings like ``"21/2"`` to a Fraction."""
    if isinstance(x, F):
        return x
    if isinstance(x, (int, Rational)):
        return F(x)
    if isinstance(x, str):
        return F(x.strip())
    if isinstance(x, float):
        if math.isinf(x):
            raise ValueError("use INF only as a cutoff")
        return F(x).limit_denominator(10 ** 9)
    raise TypeError(f"cannot use {x!r} as an exponent")


def as_cutoff(x):
    if isinstance(x, float) and math.isinf(x) and x > 0:
        return INF
    return as_exponent(x)


def fmt_rational(x) -> str:
    x = F(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fmt_cutoff(c) -> str:
    return "inf" if c == INF else fmt_rational(c)


# ---------------------------------------------------------------- rings

class ZetaPolynomial:
    """Finite sum of c_a * zeta^a with rational a and rational c."""

    __slots__ = ("_t",)

    def __init__(self, terms: Mapping | None = None):
        t = {}
        for a, c in (terms or {}).items():
            c = F(c)
            if c:
                a = as_exponent(a)
                t[a] = t.get(a, 0) + c
                if not t[a]:
                    del t[a]
        self._t = t

    @classmethod
    def monomial(cls, a, c=1):
        return cls({a: c})

    def terms(self):
        return dict(self._t)

    def _coerce(self, other):
        if isinstance(other, ZetaPolynomial):
            return other
        if isinstance(other, (int, Rational)):
            return ZetaPolynomial({0: other})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self._t)
        for a, c in other._t.items():
            t[a] = t.get(a, 0) + c
        return ZetaPolynomial(t)

    __radd__ = __add__

    def __neg__(self):
        return ZetaPolynomial({a: -c for a, c in self._t.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = {}
        for a1, c1 in self._t.items():
            for a2, c2 in other._t.items():
                t[a1 + a2] = t.get(a1 + a2, 0) + c1 * c2
        return ZetaPolynomial(t)

    __rmul__ = __mul__

    def inverse(self):
        if len(self._t) != 1:
            raise NotAUnit()
        (a, c), = self._t.items()
        return ZetaPolynomial({-a: 1 / c})

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self._t == other._t

    __hash__ = None

    def __bool__(self):
        return bool(self._t)

    def __repr__(self):
        return f"ZetaPolynomial({self})"

    def __str__(self):
        if not self._t:
            return "0"
        return " + ".join(f"{fmt_rational(c)}*zeta^({fmt_rational(a)})"
                          for a, c in sorted(self._t.items()))


@lru_cache(maxsize=None)
def _cyclotomic(n: int):
    import sympy
    x = sympy.Symbol("x")
    return sympy.Poly(sympy.cyclotomic_poly(n, x), x, domain="QQ")


class CyclotomicNumber:
    """Exact element of Q(e^{2 pi i r} : r rational), stored as sum c_r e^{2 pi i r}.

    Phases are reduced mod 1.  Distinct representations of the same number
    compare equal: the zero test reduces modulo the relevant cyclotomic
    polynomial.
    """

    __slots__ = ("_t",)

    def __init__(self, terms: Mapping | None = None):
        t = {}
        for r, c in (terms or {}).items():
            c = F(c)
            if c:
                r = as_exponent(r) % 1
                t[r] = t.get(r, 0) + c
                if not t[r]:
                    del t[r]
        self._t = t

    @classmethod
    def phase(cls, r, c=1):
        return cls({r: c})

    def terms(self):
        return dict(self._t)

    def _coerce(self, other):
        if isinstance(other, CyclotomicNumber):
            return other
        if isinstance(other, (int, Rational)):
            return CyclotomicNumber({0: other})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self._t)
        for r, c in other._t.items():
            t[r] = t.get(r, 0) + c
        return CyclotomicNumber(t)

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber({r: -c for r, c in self._t.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = {}
        for r1, c1 in self._t.items():
            for r2, c2 in other._t.items():
                r = (r1 + r2) % 1
                t[r] = t.get(r, 0) + c1 * c2
        return CyclotomicNumber(t)

    __rmul__ = __mul__

    def times_phase(self, r):
        r = as_exponent(r)
        return CyclotomicNumber({s + r: c for s, c in self._t.items()})

    def inverse(self):
        if len(self._t) != 1:
            raise NotAUnit()
        (r, c), = self._t.items()
        return CyclotomicNumber({-r: 1 / c})

    def is_zero(self) -> bool:
        if not self._t:
            return True
        if len(self._t) == 1:
            return False
        n = math.lcm(*(r.denominator for r in self._t))
        import sympy
        x = sympy.Symbol("x")
        p = sympy.Poly(sum(sympy.Rational(c.numerator, c.denominator) * x ** int(r * n)
                           for r, c in self._t.items()), x, domain="QQ")
        return p.rem(_cyclotomic(n)).is_zero

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        if self._t == other._t:
            return True
        return (self - other).is_zero()

    __hash__ = None

    def __complex__(self):
        return sum((float(c) * cmath.exp(2j * math.pi * float(r)) for r, c in self._t.items()),
                   0j)

    def __repr__(self):
        return f"CyclotomicNumber({self})"

    def __str__(self):
        if not self._t:
            return "0"
        return " + ".join(f"{fmt_rational(c)}*e(2pi i*{fmt_rational(r)})"
                          for r, c in sorted(self._t.items()))


class ComplexBall:
    """Complex double with a running absolute error radius."""

    __slots__ = ("value", "rad")

    def __init__(self, value=0j, rad=0.0):
        self.value = complex(value)
        self.rad = float(rad)

    @classmethod
    def of(cls, x):
        if isinstance(x, ComplexBall):
            return x
        if isinstance(x, CyclotomicNumber):
            t = x.terms()
            v = complex(x)
            return cls(v, 4 * EPS * sum(abs(float(c)) for c in t.values()))
        if isinstance(x, F):
            v = float(x)
            return cls(v, EPS * abs(v))
        return cls(complex(x), 0.0)

    def _coerce(self, other):
        if isinstance(other, ComplexBall):
            return other
        if isinstance(other, (int, float, complex, F, CyclotomicNumber)):
            return ComplexBall.of(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        v = self.value + other.value
        return ComplexBall(v, self.rad + other.rad + EPS * abs(v))

    __radd__ = __add__

    def __neg__(self):
        return ComplexBall(-self.value, self.rad)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        v = self.value * other.value
        rad = (abs(self.value) * other.rad + abs(other.value) * self.rad
               + self.rad * other.rad + 2 * EPS * abs(v))
        return ComplexBall(v, rad)

    __rmul__ = __mul__

    def times_phase(self, r):
        return self * ComplexBall(cmath.exp(2j * math.pi * float(r)), 2 * EPS)

    def inverse(self):
        a = abs(self.value)
        if a <= self.rad:
            raise NotAUnit()
        v = 1 / self.value
        return ComplexBall(v, self.rad / (a * (a - self.rad)) + 2 * EPS * abs(v))

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.value == other.value and self.rad == other.rad

    __hash__ = None

    def contains(self, z, slack=0.0) -> bool:
        return abs(complex(z) - self.value) <= self.rad + slack

    def __bool__(self):
        return self.value != 0 or self.rad != 0

    def __repr__(self):
        return f"ComplexBall({self.value!r} +/- {self.rad:.3g})"


def times_phase(c, r):
    """c * e^{2 pi i r}, promoting exact rationals to the cyclotomic ring."""
    if hasattr(c, "times_phase"):
        return c.times_phase(r)
    if isinstance(c, (int, Rational)):
        return CyclotomicNumber({r: c})
    if isinstance(c, (float, complex)):
        return c * cmath.exp(2j * math.pi * float(r))
    raise TypeError(f"ring of {type(c).__name__} has no root-of-unity action")


def _inverse(c):
    if isinstance(c, (int, Rational)):
        if not c:
            raise NotAUnit()
        return 1 / F(c)
    if isinstance(c, (float, complex)):
        if not c:
            raise NotAUnit()
        return 1 / c
    if hasattr(c, "inverse"):
        return c.inverse()
    raise NotAUnit()


# ---------------------------------------------------------------- series

class QSeries:
    """Immutable truncated series sum c_e q^e with exclusive cutoff."""

    __slots__ = ("_t", "_cutoff")

    def __init__(self, terms: Mapping | Iterable = (), cutoff=INF):
        cutoff = as_cutoff(cutoff)
        items = terms.items() if isinstance(terms, Mapping) else terms
        t = {}
        for e, c in items:
            e = as_exponent(e)
            if e >= cutoff:
                continue
            if isinstance(c, int):
                c = F(c)
            t[e] = t[e] + c if e in t else c
        self._t = {e: c for e, c in sorted(t.items()) if c}
        self._cutoff = cutoff

    @property
    def cutoff(self):
        return self._cutoff

    @classmethod
    def zero(cls, cutoff=INF):
        return cls({}, cutoff)

    def terms(self) -> dict:
        return dict(self._t)

    def items(self):
        return self._t.items()

    def exponents(self):
        return list(self._t)

    def coefficient(self, e, default=F(0)):
        e = as_exponent(e)
        if e >= self._cutoff:
            raise ValueError(f"q^{e} is beyond the cutoff {fmt_cutoff(self._cutoff)}")
        return self._t.get(e, default)

    def leading(self):
        """(exponent, coefficient) of the lowest term, or None when empty."""
        for e, c in self._t.items():
            return e, c
        return None

    def valuation(self):
        lead = self.leading()
        return self._cutoff if lead is None else lead[0]

    def __len__(self):
        return len(self._t)

    def __bool__(self):
        return bool(self._t)

    def truncate(self, cutoff) -> "QSeries":
        cutoff = as_cutoff(cutoff)
        if cutoff > self._cutoff:
            raise ValueError("cannot raise the cutoff of a truncated series")
        return QSeries(self._t, cutoff)

    def map_coefficients(self, fn: Callable) -> "QSeries":
        return QSeries({e: fn(c) for e, c in self._t.items()}, self._cutoff)

    def shift(self, e) -> "QSeries":
        """Multiply by q^e."""
        e = as_exponent(e)
        return QSeries({x + e: c for x, c in self._t.items()}, self._cutoff + e)

    # arithmetic
    def __add__(self, other):
        if not isinstance(other, QSeries):
            other = QSeries({0: other}) if other else QSeries.zero()
        cut = min(self._cutoff, other._cutoff)
        t = {e: c for e, c in self._t.items() if e < cut}
        for e, c in other._t.items():
            if e < cut:
                t[e] = t[e] + c if e in t else c
        return QSeries(t, cut)

    __radd__ = __add__

    def __neg__(self):
        return QSeries({e: -c for e, c in self._t.items()}, self._cutoff)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "QSeries":
        return QSeries({e: c * v for e, v in self._t.items()}, self._cutoff)

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return self.scale(other)
        # known exactly below min(Na + vb, Nb + va); capped at min(Na, Nb)
        cut = min(self._cutoff, other._cutoff,
                  self._cutoff + other.valuation(), other._cutoff + self.valuation())
        t = {}
        b = list(other._t.items())
        for e1, c1 in self._t.items():
            for e2, c2 in b:
                e = e1 + e2
                if e >= cut:
                    break
                v = c1 * c2
                t[e] = t[e] + v if e in t else v
        return QSeries(t, cut)

    def __rmul__(self, other):
        return QSeries({e: other * v for e, v in self._t.items()}, self._cutoff)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers: use divide_by_unit")
        out = QSeries({0: F(1)})
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self._cutoff == other._cutoff and self._t.keys() == other._t.keys() and all(
            self._t[e] == other._t[e] for e in self._t)

    __hash__ = None

    def __repr__(self):
        body = " + ".join(f"({c})q^{fmt_rational(e)}" for e, c in list(self._t.items())[:6])
        more = " + ..." if len(self._t) > 6 else ""
        return f"QSeries({body or '0'}{more}; cutoff {fmt_cutoff(self._cutoff)})"

    def render(self) -> str:
        return render(self)


def monomial(c, e, cutoff=INF) -> QSeries:
    return QSeries({as_exponent(e): c}, cutoff)


def first_mismatch(a: QSeries, b: QSeries):
    """Lowest exponent below the common cutoff where a and b differ, as (e, ca, cb)."""
    cut = min(a.cutoff, b.cutoff)
    for e in sorted(set(a.terms()) | set(b.terms())):
        if e >= cut:
            break
        ca = a.terms().get(e, F(0))
        cb = b.terms().get(e, F(0))
        if not ca == cb:
            return e, ca, cb
    return None


def agree(a: QSeries, b: QSeries) -> bool:
    return first_mismatch(a, b) is None


def divide_by_unit(num: QSeries, den: QSeries) -> QSeries:
    """Exact quotient num/den; den's lowest coefficient must be invertible."""
    lead = den.leading()
    if lead is None:
        raise NotAUnit()
    d0, c0 = lead
    inv = _inverse(c0)
    n0 = num.valuation()
    cut = min(num.cutoff - d0, den.cutoff - 2 * d0 + n0)
    rest = [(e - d0, c) for e, c in den.items()][1:]
    rem = dict(num.items())
    out = {}
    while rem:
        e = min(rem)
        if e - d0 >= cut:
            break
        c = rem.pop(e)
        if not c:
            continue
        t = c * inv
        x = e - d0
        out[x] = t
        for de, dc in rest:
            y = e + de
            if y - d0 >= cut:
                break
            v = t * dc
            rem[y] = rem[y] - v if y in rem else -v
    return QSeries(out, cut)


def twist_T(s: QSeries) -> QSeries:
    """tau -> tau+1: each c q^e becomes c e^{2 pi i e} q^e."""
    return QSeries({e: times_phase(c, e) for e, c in s.items()}, s.cutoff)


def check_upper(tau) -> complex:
    tau = complex(tau)
    if not tau.imag > 0:
        raise DomainError(f"need Im tau > 0, got {tau}")
    return tau


def abs_q(tau) -> float:
    return math.exp(-2 * math.pi * check_upper(tau).imag)


class TailBound:
    """Majorant for the discarded part of a series, as a function of |q|."""

    __slots__ = ("_fn",)

    def __init__(self, fn: Callable[[float], float] | None = None):
        self._fn = fn

    @classmethod
    def zero(cls):
        return cls(None)

    def bound(self, absq: float) -> float:
        return 0.0 if self._fn is None else float(self._fn(absq))

    def __add__(self, other):
        if other is None or other._fn is None:
            return self
        if self._fn is None:
            return other
        f, g = self._fn, other._fn
        return TailBound(lambda x: f(x) + g(x))

    def scaled(self, c: float):
        if self._fn is None or c == 0:
            return TailBound.zero()
        f, c = self._fn, abs(float(c))
        return TailBound(lambda x: c * f(x))


def eval_complex(s: QSeries, tau, tail: TailBound | None = None):
    """Value of s at tau with an error bound covering rounding and the tail."""
    tau = check_upper(tau)
    acc = ComplexBall()
    for e, c in s.items():
        x = 2j * math.pi * tau * float(e)
        acc = acc + ComplexBall.of(c) * ComplexBall(cmath.exp(x), 4 * EPS * (1 + abs(x)) * math.exp(x.real))
    err = acc.rad + (tail.bound(abs_q(tau)) if tail is not None else 0.0)
    return acc.value, err


def render(s: QSeries) -> str:
    """Text form: one "q^(e): c" line per stored term, increasing exponent."""
    return "\n".join(f"q^({fmt_rational(e)}): {fmt_coefficient(c)}" for e, c in s.items())


def fmt_coefficient(c) -> str:
    if isinstance(c, (int, Rational)):
        return fmt_rational(c)
    return str(c)


def to_json(s: QSeries) -> list:
    return [{"exponent": fmt_rational(e), "coefficient": fmt_coefficient(c)} for e, c in s.items()]
