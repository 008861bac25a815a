"""Named mock theta functions: the additive correction block Phi_add, the
indefinite q-series g^{(i)[m,p]}_k with their blocks, and the level one
families f_i and h_j.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction as F
from functools import lru_cache

import numpy as np

from .indefinite import IndefSumSpec, indef_sum, indef_tail
from .series import (CyclotomicNumber, QSeries, TailBound, ZetaPolynomial, as_cutoff,
                     as_exponent, divide_by_unit)
from .theta import ThetaBlock, eta_pow, eta_q, theta_q, theta_tail

HALF = F(1, 2)


# ---------------------------------------------------------------- Phi_add

@dataclass(frozen=True)
class PhiAddParams:
    m: int
    a: F
    b: F

    def __post_init__(self):
        object.__setattr__(self, "a", as_exponent(self.a))
        object.__setattr__(self, "b", as_exponent(self.b))
        if int(self.m) != self.m or self.m < 1:
            raise ValueError("m must be a positive integer")
        if (2 * self.a).denominator != 1 or (2 * self.b).denominator != 1 or self.a < 0:
            raise ValueError("need 2a, 2b integers with a >= 0")


def _sign_of_phase(x: F):
    """e^{2 pi i x} for x in Z/2, as +-1."""
    if (2 * x).denominator != 1:
        return None
    return 1 if x.denominator == 1 else -1


def r_special_pair(j: int, m: int, a, b) -> QSeries:
    """2 e^{2 pi i j b} sum_{1<=k<=2a} q^{-(j+2m(2a-k))(j-2mk)/4m}."""
    a, b = as_exponent(a), as_exponent(b)
    n = int(2 * a)
    terms: dict = {}
    for k in range(1, n + 1):
        e = F(-(j + 2 * m * (n - k)) * (j - 2 * m * k), 4 * m)
        terms[e] = terms.get(e, 0) + 2
    s = _sign_of_phase(j * b)
    if s is None:
        return QSeries({e: CyclotomicNumber({j * b: c}) for e, c in terms.items()})
    return QSeries({e: s * c for e, c in terms.items()})


def r_special_zero(m: int, a) -> QSeries:
    """sum_{0<=k<=2a} q^{m k (2a-k)}."""
    n = int(2 * as_exponent(a))
    terms: dict = {}
    for k in range(n + 1):
        e = F(m * k * (n - k))
        terms[e] = terms.get(e, 0) + 1
    return QSeries(terms)


def phi_add(m: int, a, b, cutoff=10) -> ThetaBlock:
    """Correction block for z1 - z2 = 2a tau + 2b."""
    prm = PhiAddParams(m, a, b)
    cutoff = as_cutoff(cutoff)
    parts = [(0, -r_special_zero(m, prm.a).truncate(cutoff))]
    for j in range(1, 2 * m):
        # -1/2 e^{2 pi i j b} sum_k q^(...) [theta_j + theta_{-j}]; the pair sum carries a factor 2
        c = r_special_pair(j, m, prm.a, prm.b).truncate(cutoff).scale(F(-1, 4))
        parts += [(j, c), (-j, c)]
    return ThetaBlock.from_theta_terms(m, parts, cutoff)


def phi_add_special(m: int, variant: str, cutoff=10) -> ThetaBlock:
    """-sum_{0<=j<=2m} s^j q^{-j(j-2m)/4m} theta_{j,m}, s = -1 (shifted) or 1 (unshifted)."""
    if variant not in ("shifted", "unshifted"):
        raise ValueError("variant is 'shifted' or 'unshifted'")
    cutoff = as_cutoff(cutoff)
    parts = []
    for j in range(2 * m + 1):
        s = -1 if variant == "shifted" and j % 2 else 1
        parts.append((j, QSeries({F(-j * (j - 2 * m), 4 * m): -s}, cutoff)))
    return ThetaBlock.from_theta_terms(m, parts, cutoff)


# ---------------------------------------------------------------- g series

@dataclass(frozen=True)
class GIndex:
    i: int
    m: int
    p: int
    k: int

    def __post_init__(self):
        if self.i not in (1, 2):
            raise ValueError("i must be 1 or 2")
        if self.m < 1 or not (0 <= self.p <= 2 * self.m) or not (0 <= self.k <= self.m):
            raise ValueError(f"need m >= 1, 0 <= p <= 2m, 0 <= k <= m; got {self}")


def _theta_minus_index(m, p):
    return 2 * m * p + m + HALF, m + HALF


def _int_range(lo, lo_strict, hi, hi_strict):
    return range(lo + 1 if lo_strict else lo, (hi - 1 if hi_strict else hi) + 1)


def g_terms(idx: GIndex):
    """Pieces of g as ([(scale, IndefSumSpec)], [(scale, {exponent: count})]).

    Each polynomial in the second list multiplies theta^{(-)}_{2mp+m+1/2, m+1/2}(tau, 0).
    The k = 0 and k = m cases are halved relative to their usual display.
    """
    i, m, p, k = idx.i, idx.m, idx.p, idx.k
    A = m + HALF
    alpha = F(2 * p * m, 2 * m + 1)

    def spec(region, beta):
        return IndefSumSpec("half_odd", region, A, F(m), alpha, beta)

    def poly(rng, fn):
        out: dict = {}
        for r in rng:
            e = fn(r)
            out[e] = out.get(e, 0) + 1
        return out

    sp = (-1) ** p
    if 0 < k < m:
        s = -((-1) ** k) if i == 1 else -sp
        sums = [(s, spec("V1", F(k, 2 * m) + p)), (s, spec("V2", F(-k, 2 * m) + p))]
        fin = poly(_int_range(-p, True, p, False), lambda r: -F((m * (2 * r - 1) + k) ** 2, 4 * m))
        return sums, [(s, fin)]
    if k == 0:
        s = -1 if i == 1 else -sp
        sums = [(s, spec("V4" if i == 1 else "V2", F(p)))]
        fin = poly(_int_range(0, False, p - 1, False), lambda r: -m * (r + HALF) ** 2)
        return sums, [(s, fin)]
    # k == m; the theta sum runs over -p < r < p, the wider -p <= r <= p
    # leaves uncancelled negative powers of q
    s = -((-1) ** m) if i == 1 else -sp
    sums = [(s, spec("V4" if i == 1 else "V2", p - HALF))]
    fin = poly(_int_range(-p, True, p, True), lambda r: F(-m * r * r))
    return sums, [(s * HALF, fin)]


@lru_cache(maxsize=None)
def _g_cached(i, m, p, k, cutoff) -> QSeries:
    sums, thetas = g_terms(GIndex(i, m, p, k))
    out = QSeries.zero(cutoff)
    for s, sp in sums:
        out = out + indef_sum(sp, cutoff).scale(F(s))
    j, lev = _theta_minus_index(m, p)
    for s, fin in thetas:
        if not fin:
            continue
        low = min(fin)
        th = theta_q(j, lev, True, cutoff - low)
        out = out + (th * QSeries(fin)).truncate(cutoff).scale(F(s))
    return out


def g_star(i: int, m: int, p: int, k: int, cutoff=10) -> QSeries:
    """g^{(i)[m,p]}_k(tau) below the cutoff."""
    GIndex(i, m, p, k)
    return _g_cached(i, m, p, k, as_cutoff(cutoff))


def g_canonical(m: int, p: int, k: int, cutoff=10) -> QSeries:
    return g_star(1, m, p, k, cutoff)


def g_tail(i: int, m: int, p: int, k: int, cutoff=10) -> TailBound:
    """Majorant for the part of g^{(i)[m,p]}_k discarded by g_star at this cutoff."""
    cutoff = as_cutoff(cutoff)
    sums, thetas = g_terms(GIndex(i, m, p, k))
    tail = TailBound.zero()
    for s, sp in sums:
        tail = tail + indef_tail(sp, cutoff).scaled(s)
    j, lev = _theta_minus_index(m, p)
    for s, fin in thetas:
        for e, c in fin.items():
            tail = tail + theta_tail(j, lev, cutoff - e, shift=e).scaled(float(s * c))
    return tail


def G_star(i: int, m: int, p: int, cutoff=10) -> ThetaBlock:
    cutoff = as_cutoff(cutoff)
    return ThetaBlock(m, {k: g_star(i, m, p, k, cutoff) for k in range(m + 1)}, cutoff)


# ---------------------------------------------------------------- transformations

def g_T_phase(m: int, p: int, j: int) -> F:
    """r in [0, 1) with g^{[m,p]}_j(tau+1) = e^{2 pi i r} g^{[m,p]}_j(tau)."""
    GIndex(1, m, p, j)
    n = 2 * m + 1
    r = (F(2 * p + n, 2) ** 2 / n - F((j + m) ** 2, 2 * m)) / 2
    return r % 1


@dataclass(frozen=True)
class SMatrix:
    """g_{p,j}(-1/tau) = (-i tau) sum M[(p,j),(p',k)] g_{p',k}(tau).

    Entry = entries[row][col] / sqrt(scale[row]) with exact cyclotomic entries.
    """
    m: int
    index: tuple
    scale: dict
    entries: dict

    def numeric(self) -> np.ndarray:
        n = len(self.index)
        out = np.zeros((n, n), dtype=complex)
        for a, row in enumerate(self.index):
            f = 1 / math.sqrt(self.scale[row])
            for b, col in enumerate(self.index):
                c = self.entries[row].get(col)
                if c is not None:
                    out[a, b] = complex(c) * f
        return out


def g_S_matrix(m: int) -> SMatrix:
    if m < 1:
        raise ValueError("m must be positive")
    n = 2 * m + 1
    index = tuple((p, j) for p in range(n) for j in range(m + 1))
    scale, entries = {}, {}
    for p, j in index:
        scale[(p, j)] = F(m * (2 * m + 1), 2) if 0 < j < m else F(2 * m * (2 * m + 1))
        row = {}
        for pp, k in index:
            if 0 < j < m:
                if 0 < k < m:
                    # cos(pi j k / m) = (e^{i pi jk/m} + e^{-i pi jk/m}) / 2
                    w = CyclotomicNumber({F(j * k, 2 * m): HALF, F(-j * k, 2 * m): HALF})
                else:
                    w = CyclotomicNumber({0: 1 if k == 0 else (-1) ** j})
            elif j == 0:
                w = CyclotomicNumber({0: 1})
            else:
                w = CyclotomicNumber({0: (-1) ** k if 0 < k < m else (1 if k == 0 else (-1) ** m)})
            row[(pp, k)] = w.times_phase(F(p * pp, n))
        entries[(p, j)] = row
    return SMatrix(m, index, scale, entries)


# ---------------------------------------------------------------- level one families

_F_DEF = {0: (-2, 1, 1), 1: (-1, 0, 0), 2: (1, 0, 1), 3: (2, 1, 0)}


def f_series(i: int, cutoff=8) -> QSeries:
    """f_i = c g^{[1,p]}_k / eta^2."""
    if i not in _F_DEF:
        raise ValueError("i must be in 0..3")
    cutoff = as_cutoff(cutoff)
    c, p, k = _F_DEF[i]
    num = g_star(1, 1, p, k, cutoff + F(1, 12)).scale(F(c))
    den = eta_pow(cutoff + F(1, 4), 2)
    return divide_by_unit(num, den).truncate(cutoff)


def h_series(j: int, cutoff=8) -> QSeries:
    """h_j = theta_{j,3}(tau, 0) / eta."""
    if j not in range(4):
        raise ValueError("j must be in 0..3")
    cutoff = as_cutoff(cutoff)
    return divide_by_unit(theta_q(j, 3, False, cutoff + F(1, 24)), eta_q(cutoff + F(1, 12))).truncate(cutoff)


# ---------------------------------------------------------------- two-variable reshuffle

def reshuffle_lhs(m: int, cutoff=8) -> ThetaBlock:
    """[sum_{0<k<=2mj} - sum_{2mj<k<=0}] (-1)^j q^{(m+1/2)(j+c)^2 - k^2/4m}
    zeta^{2m(j+c)-k} [theta_k + theta_{-k}], c = 1/(4m+2), by direct enumeration.
    """
    cutoff = as_cutoff(cutoff)
    A = m + HALF
    c = F(1, 4 * m + 2)
    parts: dict = {}
    jmax = int(math.isqrt(int(2 * max(cutoff, 0)) + 1)) + 3
    for j in range(-jmax, jmax + 1):
        sgn = -1 if j % 2 else 1
        if j > 0:
            ks, s = range(1, 2 * m * j + 1), sgn
        else:
            ks, s = range(2 * m * j + 1, 1), -sgn
        for k in ks:
            e = A * (j + c) ** 2 - F(k * k, 4 * m)
            if e >= cutoff:
                continue
            coef = ZetaPolynomial({2 * m * (j + c) - k: s})
            key = (k, e)
            parts[key] = parts[key] + coef if key in parts else coef
    by_k: dict = {}
    for (k, e), coef in parts.items():
        by_k.setdefault(k, {})
        by_k[k][e] = coef
    terms = []
    for k, t in by_k.items():
        s = QSeries(t, cutoff)
        terms += [(k, s), (-k, s)]
    return ThetaBlock.from_theta_terms(m, terms, cutoff)


def reshuffle_specs(m: int):
    """Indefinite-sum specs for the folded form: (s, spec) pairs per block index."""
    A = m + HALF
    c = F(1, 4 * m + 2)
    out = {}
    for s in range(m + 1):
        # k = 2mr - s folds to residue -s: exponent -m(r - s/2m)^2
        sp = IndefSumSpec("integers", "V3", A, F(m), c, F(-s, 2 * m),
                          zeta=(2 * m, -2 * m, 2 * m * c + s))
        out.setdefault(s, []).append(sp)
        if 0 < s < m:
            sp = IndefSumSpec("integers", "V1", A, F(m), c, F(s, 2 * m),
                              zeta=(2 * m, -2 * m, 2 * m * c - s))
            out[s].append(sp)
    return out


def reshuffle_rhs(m: int, cutoff=8) -> ThetaBlock:
    cutoff = as_cutoff(cutoff)
    coeffs = {}
    for s, specs in reshuffle_specs(m).items():
        tot = QSeries.zero(cutoff)
        for sp in specs:
            tot = tot + indef_sum(sp, cutoff)
        coeffs[s] = tot
    return ThetaBlock(m, coeffs, cutoff)
