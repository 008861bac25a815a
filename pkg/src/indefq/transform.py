"""Modular transformation checks producing ``CheckReport`` records.

T-checks are exact, carried out in the cyclotomic coefficient ring.  S-checks
are numeric: each side is evaluated with an error bound and the residual is
compared against a tolerance.
"""
from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass
from fractions import Fraction as F

import numpy as np

from .mockforms import g_canonical, g_S_matrix, g_tail, g_T_phase
from .series import (ComplexBall, CyclotomicNumber, abs_q, as_cutoff, check_upper, eval_complex,
                     first_mismatch, fmt_coefficient, fmt_cutoff, fmt_rational, twist_T)
from .theta import eta_eval, theta_eval, theta_pair_eval, theta_q

DEFAULT_TOL = 1e-8
S_CUTOFF = 20


@dataclass
class CheckReport:
    id: str
    status: str
    mode: str
    cutoff: object = None
    max_abs_residual: float | None = None
    first_mismatch: dict | None = None
    seconds: float = 0.0
    taus: list | None = None
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        mm = self.first_mismatch
        if self.status == "error":
            mm = {"error": self.message}
        cut = self.cutoff
        if cut is not None and not isinstance(cut, str):
            cut = fmt_cutoff(cut)
        return {"id": self.id, "status": self.status, "mode": self.mode, "cutoff": cut,
                "max_abs_residual": self.max_abs_residual, "first_mismatch": mm,
                "seconds": round(self.seconds, 6)}

    def line(self) -> str:
        extra = ""
        if self.max_abs_residual is not None:
            extra = f" residual={self.max_abs_residual:.3e}"
        if self.first_mismatch:
            extra += f" mismatch={self.first_mismatch}"
        if self.message:
            extra += f" ({self.message})"
        return f"{self.status.upper():5s} {self.id} [{self.mode}]{extra}"


def mismatch_record(d):
    """JSON-friendly form of a series or block mismatch tuple."""
    if d is None:
        return None
    if len(d) == 4:
        k, e, a, b = d
        return {"k": k, "exponent": fmt_rational(e), "lhs": fmt_coefficient(a), "rhs": fmt_coefficient(b)}
    e, a, b = d
    return {"exponent": fmt_rational(e), "lhs": fmt_coefficient(a), "rhs": fmt_coefficient(b)}


def sample_taus(seed: int = 0, n: int = 5) -> list[complex]:
    """Deterministic tau samples with Re in [-1/2, 1/2] and Im in [0.8, 2]."""
    rng = np.random.default_rng(seed)
    re = rng.uniform(-0.5, 0.5, n)
    im = rng.uniform(0.8, 2.0, n)
    return [complex(round(a, 12), round(b, 12)) for a, b in zip(re, im)]


def fmt_tau(t: complex) -> str:
    return f"{t.real:+.6f}{t.imag:+.6f}i"


# ---------------------------------------------------------------- T

def check_T_g(m: int, p: int, j: int, cutoff=8) -> CheckReport:
    t0 = time.perf_counter()
    cutoff = as_cutoff(cutoff)
    g = g_canonical(m, p, j, cutoff)
    r = g_T_phase(m, p, j)
    lhs = twist_T(g)
    rhs = g.map_coefficients(lambda c: CyclotomicNumber({r: c}))
    d = first_mismatch(lhs, rhs)
    return CheckReport(f"T-g-m{m}-p{p}-j{j}", "pass" if d is None else "fail", "exact_series",
                       cutoff, None, mismatch_record(d), time.perf_counter() - t0)


def check_T_theta(m, cutoff=8) -> CheckReport:
    """theta_{k,m}(tau+1, 0) = e^{pi i k^2/2m} theta_{k,m}(tau, 0) for 0 <= k <= m."""
    t0 = time.perf_counter()
    if int(m) != m or m < 1:
        raise ValueError("the T-phase of theta_{k,m} needs an integer level")
    m = F(m)
    cutoff = as_cutoff(cutoff)
    for k in range(int(m) + 1):
        th = theta_q(k, m, False, cutoff)
        r = F(k * k, 1) / (4 * m)
        d = first_mismatch(twist_T(th), th.map_coefficients(lambda c: CyclotomicNumber({r: c})))
        if d is not None:
            rec = mismatch_record(d)
            rec["k"] = k
            return CheckReport(f"T-theta-m{fmt_rational(m)}", "fail", "exact_series", cutoff, None,
                               rec, time.perf_counter() - t0)
    return CheckReport(f"T-theta-m{fmt_rational(m)}", "pass", "exact_series", cutoff, None, None,
                       time.perf_counter() - t0)


# ---------------------------------------------------------------- S

def _suggest_cutoff(tail_at, cutoff, tol):
    c = cutoff
    for _ in range(12):
        c = c * 2
        if tail_at(c) <= tol:
            return c
    return c


def check_S_g(m: int, taus=None, cutoff=S_CUTOFF, tol=DEFAULT_TOL) -> CheckReport:
    """Numeric S-relation for the whole family g^{[m,p]}_j, 0 <= p <= 2m, 0 <= j <= m."""
    t0 = time.perf_counter()
    cutoff = as_cutoff(cutoff)
    taus = [check_upper(t) for t in (taus or sample_taus())]
    S = g_S_matrix(m)
    idx = S.index
    series = {pj: g_canonical(m, pj[0], pj[1], cutoff) for pj in idx}
    tails = {pj: g_tail(1, m, pj[0], pj[1], cutoff) for pj in idx}
    M = S.numeric()
    rid = f"S-g-m{m}"
    worst = 0.0
    for tau in taus:
        tp = -1 / tau
        worst_tail = max(max(t.bound(abs_q(tau)), t.bound(abs_q(tp))) for t in tails.values())
        if worst_tail > tol:
            def tail_at(c):
                return max(g_tail(1, m, p, j, c).bound(x) for p, j in idx
                           for x in (abs_q(tau), abs_q(tp)))
            sug = _suggest_cutoff(tail_at, cutoff, tol)
            return CheckReport(rid, "error", "numeric", cutoff, None, None, time.perf_counter() - t0,
                               [fmt_tau(t) for t in taus],
                               f"insufficient cutoff; suggested cutoff {fmt_cutoff(sug)}")
        here = {pj: ComplexBall(*eval_complex(series[pj], tau, tails[pj])) for pj in idx}
        there = {pj: ComplexBall(*eval_complex(series[pj], tp, tails[pj])) for pj in idx}
        pref = ComplexBall(-1j * tau, 2 * abs(tau) * 2.0 ** -52)
        for a, row in enumerate(idx):
            acc = ComplexBall()
            for b, col in enumerate(idx):
                if M[a, b] != 0:
                    acc = acc + ComplexBall(M[a, b], 8 * 2.0 ** -52 * abs(M[a, b])) * here[col]
            rhs = pref * acc
            lhs = there[row]
            res = abs(lhs.value - rhs.value)
            worst = max(worst, res)
            if res > tol + lhs.rad + rhs.rad:
                return CheckReport(rid, "fail", "numeric", cutoff, worst,
                                   {"row": list(row), "tau": fmt_tau(tau)}, time.perf_counter() - t0,
                                   [fmt_tau(t) for t in taus])
    status = "pass" if worst <= tol else "fail"
    return CheckReport(rid, status, "numeric", cutoff, worst, None, time.perf_counter() - t0,
                       [fmt_tau(t) for t in taus])


def _sqrt_minus_i_tau(tau):
    # principal branch; Re(-i tau) > 0 on the upper half plane
    return cmath.sqrt(-1j * tau)


def _ball(v):
    return ComplexBall(v[0], v[1])


def _theta_km_rows(m: int, tau, z, terms):
    """(lhs, rhs) balls for the pair S-formula at each 0 <= k <= m."""
    tp, zp = -1 / tau, z / tau
    pre = ComplexBall(_sqrt_minus_i_tau(tau) * math.sqrt(2 / m) * cmath.exp(1j * math.pi * m * z * z / (2 * tau)),
                      1e-15)
    here = {j: theta_pair_eval(j, m, tau, z, terms) for j in range(m + 1)}
    out = []
    for k in range(m + 1):
        lhs = theta_pair_eval(k, m, tp, zp, terms)
        acc = here[0] * 0.5 + here[m] * (0.5 * (-1) ** k)
        for j in range(1, m):
            acc = acc + here[j] * math.cos(math.pi * j * k / m)
        out.append((lhs, pre * acc))
    return out


def _theta_mhalf_rows(m: int, tau, terms):
    """theta^{(-)}_{p-m-1/2, m+1/2}(-1/tau, 0) against its finite S-expansion."""
    lev = F(2 * m + 1, 2)
    n = 2 * m + 1
    tp = -1 / tau
    here = {p: _ball(theta_eval(F(2 * p - 2 * m - 1, 2), lev, True, tau, 0, terms)) for p in range(n)}
    out = []
    for p in range(n):
        lhs = _ball(theta_eval(F(2 * p - 2 * m - 1, 2), lev, True, tp, 0, terms))
        pre = ComplexBall(-1j * (-1) ** (m + p) * _sqrt_minus_i_tau(tau) / math.sqrt(n), 1e-15)
        acc = ComplexBall()
        for pp in range(n):
            acc = acc + here[pp] * ComplexBall((-1) ** pp * cmath.exp(-2j * math.pi * p * pp / n), 1e-15)
        out.append((lhs, pre * acc))
    return out


H_S_MATRIX = ((1, 2, 2, 1), (1, 1, -1, -1), (1, -1, -1, 1), (1, -2, 2, -1))


def h_eval(j: int, tau, terms=60):
    th = _ball(theta_eval(j, 3, False, tau, 0, terms))
    eta = _ball(eta_eval(tau, terms))
    return th * eta.inverse()


def _h_rows(tau, terms):
    here = [h_eval(k, tau, terms) for k in range(4)]
    out = []
    for j in range(4):
        acc = ComplexBall()
        for k in range(4):
            acc = acc + here[k] * H_S_MATRIX[j][k]
        out.append((h_eval(j, -1 / tau, terms), acc * ComplexBall(1 / math.sqrt(6), 1e-16)))
    return out


THETA_KINDS = ("theta_km_family", "theta_mhalf_family", "h_family")
Z_SAMPLES = (0j, 0.21 - 0.13j)


def check_S_theta(kind: str, m: int = 3, taus=None, tol=1e-9, terms: int = 60) -> CheckReport:
    t0 = time.perf_counter()
    if kind not in THETA_KINDS:
        raise ValueError(f"kind must be one of {THETA_KINDS}")
    taus = [check_upper(t) for t in (taus or sample_taus())]
    rid = f"S-{kind}-m{m}" if kind != "h_family" else "S-h_family"
    worst = 0.0
    for tau in taus:
        if kind == "theta_km_family":
            rows = [r for z in Z_SAMPLES for r in _theta_km_rows(m, tau, z, terms)]
        elif kind == "theta_mhalf_family":
            rows = _theta_mhalf_rows(m, tau, terms)
        else:
            rows = _h_rows(tau, terms)
        for lhs, rhs in rows:
            bound = lhs.rad + rhs.rad
            if bound > tol:
                return CheckReport(rid, "error", "numeric", None, None, None, time.perf_counter() - t0,
                                   [fmt_tau(t) for t in taus],
                                   f"insufficient terms; suggested {2 * terms}")
            worst = max(worst, abs(lhs.value - rhs.value))
    status = "pass" if worst <= tol else "fail"
    return CheckReport(rid, status, "numeric", None, worst, None, time.perf_counter() - t0,
                       [fmt_tau(t) for t in taus])
