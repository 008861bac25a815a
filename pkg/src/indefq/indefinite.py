"""Bracketed indefinite double sums over cones in the (j, r) plane.

    [sum_{region+} - sum_{region-}] (-1)^{sigma(j)+c} q^{A (j+alpha)^2 - B (r+beta)^2} zeta^{lam j + mu r + nu}

with sigma(j) = j on the integer lattice and j - 1/2 on the half-odd lattice.
Every lattice point is written j = j' + h, r = r' + h with integers j', r'
and h in {0, 1/2}, so a single integer enumerator handles both lattices.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction as F

from .series import (INF, QSeries, TailBound, ZetaPolynomial, as_cutoff, as_exponent,
                     eval_complex, fmt_rational)

LATTICES = {"integers": F(0), "half_odd": F(1, 2)}

# (lower ref, lower strict, upper ref, upper strict) for r, refs being 0 or j
REGIONS = {
    "V1": (("0", False, "j", True), ("j", False, "0", True)),
    "V2": (("0", False, "j", False), ("j", True, "0", True)),
    "V3": (("0", True, "j", False), ("j", True, "0", False)),
    "V4": (("0", True, "j", False), ("j", True, "0", True)),
}

WHITELIST = {
    ("half_odd", "V1"), ("half_odd", "V2"), ("half_odd", "V4"),
    ("integers", "V1"), ("integers", "V2"), ("integers", "V3"),
}


class SpecError(ValueError):
    pass


@dataclass(frozen=True)
class IndefSumSpec:
    lattice: str
    region: str
    A: F
    B: F
    alpha: F = F(0)
    beta: F = F(0)
    sign_offset: int = 0
    zeta: tuple | None = None

    def __post_init__(self):
        for name in ("A", "B", "alpha", "beta"):
            object.__setattr__(self, name, as_exponent(getattr(self, name)))
        if self.zeta is not None:
            z = tuple(as_exponent(x) for x in self.zeta)
            if len(z) != 3:
                raise SpecError("zeta rule is (lam, mu, nu)")
            object.__setattr__(self, "zeta", z)
        if self.lattice not in LATTICES or self.region not in REGIONS:
            raise SpecError(f"unknown lattice/region {self.lattice}/{self.region}")
        if (self.lattice, self.region) not in WHITELIST:
            raise SpecError(f"{self.region} on the {self.lattice} lattice is not a supported sum")
        if self.sign_offset not in (0, 1):
            raise SpecError("sign offset must be 0 or 1")
        if not (self.B > 0 and self.A > self.B):
            raise SpecError(f"need A > B > 0, got A={self.A}, B={self.B}")

    @property
    def h(self) -> F:
        return LATTICES[self.lattice]

    def exponent(self, j, r) -> F:
        return self.A * (j + self.alpha) ** 2 - self.B * (r + self.beta) ** 2

    def to_dict(self) -> dict:
        d = {"lattice": self.lattice, "region": self.region,
             "A": fmt_rational(self.A), "B": fmt_rational(self.B),
             "alpha": fmt_rational(self.alpha), "beta": fmt_rational(self.beta),
             "sign_offset": self.sign_offset}
        d["zeta"] = None if self.zeta is None else [fmt_rational(x) for x in self.zeta]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "IndefSumSpec":
        z = d.get("zeta")
        return cls(d["lattice"], d["region"], F(d["A"]), F(d["B"]),
                   F(d.get("alpha", 0)), F(d.get("beta", 0)), int(d.get("sign_offset", 0)),
                   None if z is None else tuple(F(x) for x in z))


def _minorant_root(spec: IndefSumSpec, cutoff) -> float | None:
    """Largest t with A(t-|a|)^2 - B(t+c0)^2 < cutoff, or None if there is none."""
    A, B = float(spec.A), float(spec.B)
    a = abs(float(spec.alpha))
    c0 = max(abs(float(spec.beta)), a) + 1
    # (A-B) t^2 - 2(A a + B c0) t + (A a^2 - B c0^2 - N) < 0
    qa = A - B
    qb = -2 * (A * a + B * c0)
    qc = A * a * a - B * c0 * c0 - float(cutoff)
    disc = qb * qb - 4 * qa * qc
    if disc < 0:
        return None
    t2 = (-qb + math.sqrt(disc)) / (2 * qa)
    if t2 < 0:
        return None
    return t2 * (1 + 1e-12) + 1e-9


def enumeration_bound(spec: IndefSumSpec, cutoff) -> range:
    """Integer offsets j' (j = j' + h) covering every point with exponent below cutoff."""
    cutoff = as_cutoff(cutoff)
    if cutoff == INF:
        raise ValueError("indefinite sums need a finite cutoff")
    t = _minorant_root(spec, cutoff)
    if t is None:
        return range(0)
    h = float(spec.h)
    return range(math.ceil(-t - h), math.floor(t - h) + 1)


def _bound(ref, strict, lower, jp, h):
    v = jp if ref == "j" else -h
    if lower:
        return math.floor(v) + 1 if strict else math.ceil(v)
    return math.ceil(v) - 1 if strict else math.floor(v)


def _r_interval(half, jp, h):
    lo_ref, lo_s, hi_ref, hi_s = half
    return _bound(lo_ref, lo_s, True, jp, h), _bound(hi_ref, hi_s, False, jp, h)


def _points(spec: IndefSumSpec, cutoff):
    """Yield (sign, j, r) for region points with exponent below cutoff."""
    h = spec.h
    A, B = spec.A, spec.B
    plus, minus = REGIONS[spec.region]
    for jp in enumeration_bound(spec, cutoff):
        j = jp + h
        sgn = -1 if (jp + spec.sign_offset) % 2 else 1
        D = float((A * (j + spec.alpha) ** 2 - cutoff) / B)
        for half, hs in ((plus, 1), (minus, -1)):
            lo, hi = _r_interval(half, jp, h)
            if lo > hi:
                continue
            if D < 0 or hi - lo < 16:
                cand = range(lo, hi + 1)
            else:
                s = math.sqrt(D)
                shift = float(h + spec.beta)
                left = range(lo, min(hi, math.floor(-s - shift) + 2) + 1)
                right = range(max(lo, math.ceil(s - shift) - 2), hi + 1)
                cand = sorted(set(left) | set(right))
            for rp in cand:
                r = rp + h
                if spec.exponent(j, r) < cutoff:
                    yield hs * sgn, j, r


def indef_sum(spec: IndefSumSpec, cutoff) -> QSeries:
    """Exact truncated series of the bracketed sum."""
    cutoff = as_cutoff(cutoff)
    terms: dict = {}
    for s, j, r in _points(spec, cutoff):
        e = spec.exponent(j, r)
        if spec.zeta is None:
            c = F(s)
        else:
            lam, mu, nu = spec.zeta
            c = ZetaPolynomial({lam * j + mu * r + nu: s})
        terms[e] = terms[e] + c if e in terms else c
    return QSeries(terms, cutoff)


def line_sum(spec: IndefSumSpec, cutoff) -> QSeries:
    """sum over j with r = 0 of the same summand (integer lattice only)."""
    if spec.lattice != "integers":
        raise SpecError("the r = 0 line only exists on the integer lattice")
    cutoff = as_cutoff(cutoff)
    width = math.sqrt(max(float((cutoff + spec.B * spec.beta ** 2) / spec.A), 0.0)) + 1
    a = float(spec.alpha)
    terms: dict = {}
    for j in range(math.floor(-width - a), math.ceil(width - a) + 1):
        e = spec.exponent(j, 0)
        if e >= cutoff:
            continue
        s = -1 if (j + spec.sign_offset) % 2 else 1
        if spec.zeta is None:
            c = F(s)
        else:
            lam, mu, nu = spec.zeta
            c = ZetaPolynomial({lam * j + nu: s})
        terms[e] = terms[e] + c if e in terms else c
    return QSeries(terms, cutoff)


def indef_tail(spec: IndefSumSpec, cutoff) -> TailBound:
    """Majorant of |omitted terms| of indef_sum(spec, cutoff) at a given |q|."""
    cutoff = as_cutoff(cutoff)
    A, B = float(spec.A), float(spec.B)
    a = abs(float(spec.alpha))
    c0 = max(abs(float(spec.beta)), a) + 1
    h = float(spec.h)
    js = enumeration_bound(spec, cutoff)
    if len(js):
        starts = [js.stop + h, abs(js.start - 1 + h)]
        inside = sum(abs(jp + h) + 1 for jp in js)
    else:
        t = h
        starts = [t, t] if h else [0.0, 1.0]
        inside = 0.0

    def qmin(t):
        return A * (t - a) ** 2 - B * (t + c0) ** 2

    def fn(absq):
        if absq == 0:
            return 0.0
        lam = -math.log(absq)
        total = inside * math.exp(-lam * float(cutoff)) if inside else 0.0
        for ts in starts:
            # explicit terms until the convex minorant starts increasing
            while qmin(ts + 1) - qmin(ts) <= 0:
                total += (2 * ts + 2) * math.exp(-lam * qmin(ts))
                ts += 1
            delta = qmin(ts + 1) - qmin(ts)
            y = math.exp(-lam * delta)
            total += math.exp(-lam * qmin(ts)) * ((2 * ts + 2) / (1 - y) + 2 * y / (1 - y) ** 2)
        return total

    return TailBound(fn)


def indef_eval(spec: IndefSumSpec, tau, cutoff):
    """(value, error bound) of the full sum at tau."""
    if spec.zeta is not None:
        raise SpecError("numeric evaluation needs a sum without zeta factors")
    return eval_complex(indef_sum(spec, cutoff), tau, indef_tail(spec, cutoff))
