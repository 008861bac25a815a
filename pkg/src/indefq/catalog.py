"""Identity catalog: records pairing two expressions, and the runner that checks them.

Expressions are JSON-friendly nested lists, for example::

    ["mul", ["eta"], ["theta", 1, 3]]
    ["indef", {"lattice": "integers", "region": "V2", "A": "3/2", "B": "1", ...}]
    ["scale", "1/2", ["add", a, b]]

Numeric records use ``["num", name, params]`` leaves evaluated at sample points.
"""
from __future__ import annotations

import cmath
import fnmatch
import json
import math
import time
from dataclasses import dataclass
from fractions import Fraction as F

from .indefinite import IndefSumSpec, indef_sum, line_sum
from .mockforms import (G_star, f_series, g_star, h_series, phi_add, phi_add_special,
                        reshuffle_lhs, reshuffle_rhs)
from .series import (ComplexBall, NotAUnit, QSeries, as_cutoff, divide_by_unit, first_mismatch,
                     fmt_rational)
from .theta import (ThetaBlock, eta3_jacobi, eta_pentagonal, eta_pow, eta_q, theta_eval, theta_q,
                    vartheta11_eval)
from .transform import CheckReport, DEFAULT_TOL, fmt_tau, mismatch_record, sample_taus

MODES = ("exact_series", "exact_block", "numeric")


class RegistryError(KeyError):
    pass


def _flag(x):
    return x in (True, "signed", "true", 1)


# producers take the cutoff first, then the expression arguments
PRODUCERS = {
    "theta": lambda N, j, m, signed=False: theta_q(F(j), F(m), _flag(signed), N),
    "eta": lambda N: eta_q(N),
    "eta_pentagonal": lambda N: eta_pentagonal(N),
    "eta_pow": lambda N, k: eta_pow(N, int(k)),
    "eta3": lambda N: eta_pow(N, 3),
    "eta3_jacobi": lambda N: eta3_jacobi(N),
    "g": lambda N, i, m, p, k: g_star(int(i), int(m), int(p), int(k), N),
    "G": lambda N, i, m, p: G_star(int(i), int(m), int(p), N),
    "phi_add": lambda N, m, a2, b2: phi_add(int(m), F(a2) / 2, F(b2) / 2, N),
    "phi_add_special": lambda N, m, variant: phi_add_special(int(m), variant, N),
    "f": lambda N, i: f_series(int(i), N),
    "h": lambda N, j: h_series(int(j), N),
    "indef": lambda N, spec: indef_sum(IndefSumSpec.from_dict(spec), N),
    "line": lambda N, spec: line_sum(IndefSumSpec.from_dict(spec), N),
    "reshuffle_lhs": lambda N, m: reshuffle_lhs(int(m), N),
    "reshuffle_rhs": lambda N, m: reshuffle_rhs(int(m), N),
    "const": lambda N, c: QSeries({0: F(c)}, N),
}


def evaluate(expr, cutoff):
    """Evaluate an expression tree to a QSeries or ThetaBlock below the cutoff."""
    cutoff = as_cutoff(cutoff)
    if not isinstance(expr, (list, tuple)) or not expr:
        raise RegistryError(f"malformed expression {expr!r}")
    head, args = expr[0], list(expr[1:])
    if head == "add":
        vals = [evaluate(a, cutoff) for a in args]
        out = vals[0]
        for v in vals[1:]:
            out = out + v
        return out
    if head == "sub":
        return evaluate(args[0], cutoff) - evaluate(args[1], cutoff)
    if head == "neg":
        return -evaluate(args[0], cutoff)
    if head == "scale":
        return _scale(evaluate(args[1], cutoff), F(args[0]))
    if head == "mul":
        a, b = evaluate(args[0], cutoff), evaluate(args[1], cutoff)
        if isinstance(a, ThetaBlock):
            return a.scale(b)
        if isinstance(b, ThetaBlock):
            return b.scale(a)
        return a * b
    if head == "div":
        a, b = evaluate(args[0], cutoff + 1), evaluate(args[1], cutoff + 1)
        out = divide_by_unit(a, b)
        if out.cutoff < cutoff:
            raise NotAUnit(f"quotient only known below q^{fmt_rational(out.cutoff)}")
        return out.truncate(cutoff)
    if head == "block":
        m = int(args[0])
        return ThetaBlock(m, {int(k): evaluate(e, cutoff) for k, e in args[1]}, cutoff)
    if head == "perturb":
        e, d = F(args[0]), F(args[1])
        v = evaluate(args[2], cutoff)
        if isinstance(v, ThetaBlock):
            c0 = v.coefficient(0) + QSeries({e: d}, v.cutoff)
            coeffs = {k: v.coefficient(k) for k in range(v.m + 1)}
            coeffs[0] = c0
            return ThetaBlock(v.m, coeffs, v.cutoff)
        return v + QSeries({e: d}, v.cutoff)
    if head not in PRODUCERS:
        raise RegistryError(f"unknown function {head!r}")
    return PRODUCERS[head](cutoff, *args)


def _scale(v, c):
    return v.scale(c)


# ---------------------------------------------------------------- numeric leaves

def _e(x: complex) -> ComplexBall:
    v = cmath.exp(x)
    return ComplexBall(v, 4 * 2.0 ** -52 * (1 + abs(x)) * abs(v))


def _qpow(tau, e) -> ComplexBall:
    return _e(2j * math.pi * tau * float(e))


def _th(j, m, signed, tau, z) -> ComplexBall:
    return ComplexBall(*theta_eval(F(j), F(m), signed, tau, z))


def _v11(tau, z) -> ComplexBall:
    return ComplexBall(*vartheta11_eval(tau, z))


def _v11_shift(side, tau, z, variant, p):
    """Half-period shifts of vartheta_11, four variants."""
    p = int(p)
    n = 2 * p + 1
    qf = _qpow(tau, F(-n * n, 8))
    if variant == 1:
        lhs = _v11(tau, z / 2 + (n * tau - 1) / 2)
        rhs = qf * _e(-1j * math.pi * n * z / 2) * _th(0, F(1, 2), False, tau, z)
    elif variant == 2:
        lhs = _v11(tau, z / 2 - (n * tau - 1) / 2)
        rhs = -(qf * _e(1j * math.pi * n * z / 2) * _th(0, F(1, 2), False, tau, z))
    elif variant == 3:
        lhs = _v11(tau, z / 2 + n * tau / 2)
        rhs = qf * _e(-1j * math.pi * n * z / 2) * _th(0, F(1, 2), True, tau, z) * (-1j * (-1) ** p)
    else:
        lhs = _v11(tau, z / 2 - n * tau / 2)
        rhs = qf * _e(1j * math.pi * n * z / 2) * _th(0, F(1, 2), True, tau, z) * (1j * (-1) ** p)
    return lhs if side == "lhs" else rhs


def _half_level_shift(side, tau, z, variant, m, p):
    """theta^{(-)}_{1/2, m+1/2} at m(2p+1)(tau - [variant a]) / (m+1/2) against the
    constant term theta^{(-)}_{2mp+m+1/2, m+1/2}(tau, 0)."""
    m, p = int(m), int(p)
    M = F(2 * m + 1, 2)
    n = 2 * p + 1
    qf = _qpow(tau, F(-m * m * n * n, 2 * (2 * m + 1)))
    if variant == "a":
        lhs = _th(F(1, 2), M, True, tau, (m * n * tau - m) / float(M))
        rhs = _e(-1j * math.pi * m / (2 * m + 1)) * qf * _th(2 * m * p + M, M, True, tau, 0)
    else:
        lhs = _th(F(1, 2), M, True, tau, m * n * tau / float(M))
        rhs = qf * _th(2 * m * p + M, M, True, tau, 0)
    return lhs if side == "lhs" else rhs


def _theta_shift(side, tau, z, variant, m, p):
    """Shifts of theta^{(-)}_{+-1/2, m+1/2} by ((2p+1) tau - 1)/(2m+1) and (2p+1) tau/(2m+1)."""
    m, p = F(m), int(p)
    M = m + F(1, 2)
    n = 2 * p + 1
    w = float(2 * m + 1)
    base = _qpow(tau, F(-n * n, 1) / (16 * M))
    a = _e(1j * math.pi / (2 * w)) * base
    if variant == 1:
        lhs = _th(F(-1, 2), M, True, tau, z + (n * tau - 1) / w)
        rhs = a * _e(-1j * math.pi * n * z / 2) * _th(p, M, False, tau, z)
    elif variant == 2:
        lhs = _th(F(1, 2), M, True, tau, z - (n * tau - 1) / w)
        rhs = a * _e(1j * math.pi * n * z / 2) * _th(-p, M, False, tau, z)
    elif variant == 3:
        lhs = _th(F(-1, 2), M, True, tau, z + n * tau / w)
        rhs = base * _e(-1j * math.pi * n * z / 2) * _th(p, M, True, tau, z)
    else:
        lhs = _th(F(1, 2), M, True, tau, z - n * tau / w)
        rhs = base * _e(1j * math.pi * n * z / 2) * _th(-p, M, True, tau, z)
    return lhs if side == "lhs" else rhs


NUMERIC = {
    "v11_shift": _v11_shift,
    "half_level_shift": _half_level_shift,
    "theta_shift": _theta_shift,
}

Z_SAMPLES = (0.3 + 0j, 0.17 - 0.11j)


def evaluate_numeric(expr, tau, z) -> ComplexBall:
    head = expr[0]
    if head != "num" or expr[1] not in NUMERIC:
        raise RegistryError(f"unknown numeric function {expr!r}")
    side, params = expr[2], dict(expr[3])
    return NUMERIC[expr[1]](side, tau, z, **params)


# ---------------------------------------------------------------- records

@dataclass
class IdentityRecord:
    id: str
    mode: str
    lhs: list
    rhs: list
    cutoff: str = "10"
    anchor: str = ""

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")

    def to_json(self) -> dict:
        return {"id": self.id, "mode": self.mode, "lhs": self.lhs, "rhs": self.rhs,
                "cutoff": self.cutoff, "anchor": self.anchor}

    @classmethod
    def from_json(cls, d: dict) -> "IdentityRecord":
        return cls(d["id"], d["mode"], d["lhs"], d["rhs"], str(d.get("cutoff", "10")), d.get("anchor", ""))


def perturbed(rec: IdentityRecord, exponent="1", delta="1") -> IdentityRecord:
    """Copy of an exact record whose right side gains delta * q^exponent."""
    if rec.mode == "numeric":
        raise ValueError("only exact records can be perturbed")
    return IdentityRecord(rec.id + "-perturbed", rec.mode, rec.lhs,
                          ["perturb", str(exponent), str(delta), rec.rhs], rec.cutoff, rec.anchor)


def check_identity(rec: IdentityRecord, overrides: dict | None = None) -> CheckReport:
    o = overrides or {}
    t0 = time.perf_counter()
    try:
        if rec.mode == "numeric":
            return _check_numeric(rec, o, t0)
        cutoff = as_cutoff(o.get("cutoff") or rec.cutoff)
        a, b = evaluate(rec.lhs, cutoff), evaluate(rec.rhs, cutoff)
        if rec.mode == "exact_block":
            if not (isinstance(a, ThetaBlock) and isinstance(b, ThetaBlock)):
                raise TypeError("exact_block records need blocks on both sides")
            d = a.first_mismatch(b)
        else:
            if not (isinstance(a, QSeries) and isinstance(b, QSeries)):
                raise TypeError("exact_series records need series on both sides")
            d = first_mismatch(a, b)
        if min(a.cutoff, b.cutoff) < cutoff:
            raise NotAUnit("a side lost precision below the requested cutoff")
        return CheckReport(rec.id, "pass" if d is None else "fail", rec.mode, cutoff, None,
                           mismatch_record(d), time.perf_counter() - t0)
    except (RegistryError, NotAUnit, ValueError, TypeError) as exc:
        return CheckReport(rec.id, "error", rec.mode, o.get("cutoff") or rec.cutoff, None, None,
                           time.perf_counter() - t0, message=str(exc))


def _check_numeric(rec, o, t0):
    tol = float(o.get("tol") or DEFAULT_TOL)
    taus = o.get("taus") or sample_taus(int(o.get("seed") or 0))
    worst = 0.0
    for tau in taus:
        for z in Z_SAMPLES:
            lhs = evaluate_numeric(rec.lhs, tau, z)
            rhs = evaluate_numeric(rec.rhs, tau, z)
            # residuals are measured relative to the size of the values
            scale = max(1.0, abs(lhs.value), abs(rhs.value))
            bound = (lhs.rad + rhs.rad) / scale
            if bound > tol:
                return CheckReport(rec.id, "error", "numeric", None, None, None, time.perf_counter() - t0,
                                   [fmt_tau(t) for t in taus], "error bounds exceed the tolerance")
            res = abs(lhs.value - rhs.value) / scale
            worst = max(worst, res)
            if res > tol + bound:
                return CheckReport(rec.id, "fail", "numeric", None, worst,
                                   {"tau": fmt_tau(tau), "z": str(z)}, time.perf_counter() - t0,
                                   [fmt_tau(t) for t in taus])
    return CheckReport(rec.id, "pass", "numeric", None, worst, None, time.perf_counter() - t0,
                       [fmt_tau(t) for t in taus])


def _spec(lattice, region, A, B, alpha, beta, zeta=None):
    return IndefSumSpec(lattice, region, F(A), F(B), F(alpha), F(beta), 0, zeta).to_dict()


def _prod(a, b):
    return ["mul", a, b]


ETA = ["eta"]


def build_catalog() -> list[IdentityRecord]:
    R: list[IdentityRecord] = []
    h = F(1, 2)
    # level one indefinite sums against eta * theta
    prop = {
        "i": (_spec("integers", "V2", "3/2", 1, h, h), _prod(ETA, ["theta", 1, 3])),
        "ii": (_spec("integers", "V2", "3/2", 1, h, 0), _prod(ETA, ["theta", 2, 3])),
        "iii": (_spec("integers", "V1", "3/2", 1, F(1, 6), h),
                ["scale", "1/2", _prod(ETA, ["theta", 3, 3])]),
        "iv": (_spec("integers", "V1", "3/2", 1, F(1, 6), 0),
               ["scale", "1/2", ["add", _prod(ETA, ["theta", 0, 3]), ["theta", "1/2", "3/2", True]]]),
    }
    for tag, (spec, rhs) in prop.items():
        R.append(IdentityRecord(f"m1-prop-{tag}", "exact_series", ["indef", spec], rhs, "10",
                                f"level one indefinite sum identity ({tag})"))
    g_eta = {
        (0, 0): ["neg", _prod(ETA, ["theta", 1, 3])],
        (0, 1): _prod(ETA, ["theta", 2, 3]),
        (1, 0): ["scale", "1/2", _prod(ETA, ["theta", 3, 3])],
        (1, 1): ["scale", "-1/2", _prod(ETA, ["theta", 0, 3])],
    }
    for (p, k), rhs in g_eta.items():
        R.append(IdentityRecord(f"m1-g-p{p}-k{k}-eta-theta", "exact_series", ["g", 1, 1, p, k], rhs, "10",
                                "g^{[1,p]}_k as eta times a level 3 theta constant"))
    R.append(IdentityRecord("m1-G-block", "exact_block", ["G", 1, 1, 0],
                            ["block", 1, [[0, g_eta[(0, 0)]], [1, g_eta[(0, 1)]]]], "10",
                            "G^{(1)[1,0]} in terms of eta times theta"))
    for k in range(2):
        R.append(IdentityRecord(f"m1-degeneracy-k{k}", "exact_series", ["g", 1, 1, 1, k], ["g", 1, 1, 2, k],
                                "10", "g^{[1,1]}_k = g^{[1,2]}_k"))
    for i in range(4):
        R.append(IdentityRecord(f"m1-f-eq-h-{i}", "exact_series", ["f", i], ["h", i], "8",
                                "f_i = h_i"))
    # sign relation between the two g families
    for m in (1, 2, 3):
        for p in range(2 * m + 1):
            for k in range(m + 1):
                s = "1" if (k + p) % 2 == 0 else "-1"
                R.append(IdentityRecord(f"g2-vs-g1-m{m}-p{p}-k{k}", "exact_series", ["g", 2, m, p, k],
                                        ["scale", s, ["g", 1, m, p, k]], "10",
                                        "g^{(2)} = (-1)^{k+p} g^{(1)}"))
    # reflection p -> 2m+1-p
    for m in (1, 2, 3):
        for p in range(1, m + 1):
            for k in range(m + 1):
                R.append(IdentityRecord(f"g-reflect-m{m}-p{p}-k{k}", "exact_series", ["g", 1, m, p, k],
                                        ["g", 1, m, 2 * m + 1 - p, k], "10",
                                        "derived: g^{[m,p]} = g^{[m,2m+1-p]}"))
    for m in (1, 2, 3, 4):
        R.append(IdentityRecord(f"phi-add-shifted-m{m}", "exact_block", ["phi_add", m, 1, -1],
                                ["phi_add_special", m, "shifted"], "12", "z1-z2 = tau - 1"))
        R.append(IdentityRecord(f"phi-add-unshifted-m{m}", "exact_block", ["phi_add", m, 1, 0],
                                ["phi_add_special", m, "unshifted"], "12", "z1-z2 = tau"))
    for m in (1, 2):
        R.append(IdentityRecord(f"reshuffle-m{m}", "exact_block", ["reshuffle_lhs", m], ["reshuffle_rhs", m],
                                "8", "two-variable k = 2mr -+ s regrouping"))
    params = [("3/2", 1, h, h), ("3/2", 1, F(1, 6), 0), ("5/2", 2, F(1, 5), F(-1, 4)),
              ("7/2", 3, F(2, 7), F(1, 3))]
    for n, (A, B, al, be) in enumerate(params):
        v3 = _spec("integers", "V3", A, B, al, be)
        v2 = _spec("integers", "V2", A, B, al, be)
        R.append(IdentityRecord(f"region-bookkeeping-{n}", "exact_series", ["indef", v3],
                                ["sub", ["indef", v2], ["line", v2]], "10",
                                "strict/weak boundary regrouping"))
    R.append(IdentityRecord("eta-euler-vs-pentagonal", "exact_series", ["eta"], ["eta_pentagonal"], "200",
                            "Euler product against pentagonal numbers"))
    R.append(IdentityRecord("eta3-vs-jacobi", "exact_series", ["eta3"], ["eta3_jacobi"], "100",
                            "eta^3 against the odd-square series"))
    # numeric shift formulas
    for v in (1, 2, 3, 4):
        for p in (0, 1, 2):
            R.append(IdentityRecord(f"num-v11-shift-{v}-p{p}", "numeric",
                                    ["num", "v11_shift", "lhs", {"variant": v, "p": p}],
                                    ["num", "v11_shift", "rhs", {"variant": v, "p": p}], "10",
                                    "half-period shifts of vartheta_11"))
    for v in ("a", "b"):
        for m in (1, 2):
            for p in (-1, 0, 1):
                R.append(IdentityRecord(f"num-half-level-{v}-m{m}-p{p}", "numeric",
                                        ["num", "half_level_shift", "lhs", {"variant": v, "m": m, "p": p}],
                                        ["num", "half_level_shift", "rhs", {"variant": v, "m": m, "p": p}],
                                        "10", "signed theta at m+1/2 shifted to a constant"))
    for v in (1, 2, 3, 4):
        for m in ("1/2", "1", "3/2", "2"):
            for p in (-1, 0, 1):
                tag = m.replace("/", "_")
                R.append(IdentityRecord(f"num-theta-shift-{v}-m{tag}-p{p}", "numeric",
                                        ["num", "theta_shift", "lhs", {"variant": v, "m": m, "p": p}],
                                        ["num", "theta_shift", "rhs", {"variant": v, "m": m, "p": p}],
                                        "10", "shifts of signed theta at half-integer level"))
    return sorted(R, key=lambda r: r.id)


def select(records, pattern: str | None):
    if not pattern:
        return list(records)
    return [r for r in records if fnmatch.fnmatchcase(r.id, pattern)]


def run_catalog(records, overrides=None) -> list[CheckReport]:
    reports = [check_identity(r, overrides) for r in records]
    return sorted(reports, key=lambda r: r.id)


def load_catalog(path) -> list[IdentityRecord]:
    with open(path) as fh:
        return [IdentityRecord.from_json(d) for d in json.load(fh)]


def dump_catalog(records) -> str:
    return json.dumps([r.to_json() for r in records], indent=1, sort_keys=True)
