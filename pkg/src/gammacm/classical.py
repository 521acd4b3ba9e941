"""The classical case q = 1: the kernel Q(u) and l.c.m. conditions for

    V(x) = theta^{-x} prod_i Gamma^{alpha_i}(A_i x + a_i) / prod_j Gamma^{beta_j}(B_j x + b_j).

(log V)'' is completely monotonic iff Q(u) >= 0 for u > 0, and V is l.c.m.
iff additionally sum alpha_i A_i = sum beta_j B_j and theta >= rho.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import specfun
from .errors import DomainError, SpecError
from .exact import coerce_number, compare, is_exact, rational_gcd
from .model import RatioSpec, Status, Verdict, conjunction

REL_TOL = 1e-12
HALF = Fraction(1, 2)
# the kernel reduction splits each scale into scale/G pieces; keep it small
_MAX_SPLIT = 4096
# bit budget for the exact theta >= rho comparison
_MAX_BITS = 200_000


def _sum(values):
    values = list(values)
    if all(is_exact(v) for v in values):
        return sum(values, Fraction(0))
    return math.fsum(float(v) for v in values)


def _div(x, y):
    if is_exact(x, y):
        return Fraction(x) / Fraction(y)
    return float(x) / float(y)


def _require_classical(spec: RatioSpec):
    if not spec.classical:
        raise SpecError("this check needs a classical spec (q = \"classical\")")


def _holds(lhs, rhs, scale=0.0) -> bool:
    """lhs >= rhs, decided exactly or beyond rounding; ties in floats do not count."""
    c = compare(lhs, rhs, rel=REL_TOL, scale=scale)
    return c is not None and c >= 0


def _terms(spec: RatioSpec):
    """(sign, weight, scale, shift) as floats, factors with equal (scale, shift) merged."""
    net: dict = {}
    for sign, factors in ((1, spec.numerator), (-1, spec.denominator)):
        for f in factors:
            key = (f.scale, f.shift)
            net[key] = net.get(key, 0) + sign * f.weight
    out = [(1.0 if w > 0 else -1.0, abs(float(w)), float(A), float(a)) for (A, a), w in net.items() if w != 0]
    return out or [(1.0, 0.0, float(spec.numerator[0].scale if spec.numerator else spec.denominator[0].scale), 0.0)]


# --- the kernel ------------------------------------------------------------


def q_kernel(spec: RatioSpec, u, magnitude=False):
    """Q(u) = sum alpha_i e^{-a_i u/A_i}/(1-e^{-u/A_i}) - sum beta_j e^{-b_j u/B_j}/(1-e^{-u/B_j}).

    Near u = 0 the 1/u poles cancel under balance, so there Q is assembled as
    (sum +-w A expm1(g) + (sum alpha A - sum beta B)) / u with
    g = log(z/(1-e^{-z})) - (shift/scale) u, z = u/scale.
    """
    scalar = np.ndim(u) == 0
    ua = np.atleast_1d(np.asarray(u, dtype=float))
    if np.any(~(ua > 0)):
        raise DomainError("Q(u) needs u > 0")
    terms = _terms(spec)
    lead = math.fsum(s * w * A for s, w, A, _ in terms)
    largest = max(A for _, _, A, _ in terms)
    direct = ua > largest
    out = np.empty_like(ua)
    mag = np.zeros_like(ua)

    ud = ua[direct]
    acc = np.zeros_like(ud)
    for s, w, A, a in terms:
        z = ud / A
        t = w * np.exp(-a * z) / -np.expm1(-z)
        acc += s * t
        mag[direct] += t
    out[direct] = acc

    us = ua[~direct]
    acc = np.full_like(us, lead)
    for s, w, A, a in terms:
        g = specfun.log_bernoulli_gf(us / A) - (a / A) * us
        acc += s * w * A * np.expm1(g)
        mag[~direct] += w * A * np.exp(g) / us
    out[~direct] = acc / us
    if scalar:
        out, mag = float(out[0]), float(mag[0])
    return (out, mag) if magnitude else out


@dataclass(frozen=True)
class KernelAsymptotics:
    """u Q(u) -> leading_coeff_at_0 and Q(u) - leading/u -> const_at_0 as u -> 0;
    Q(u) ~ net_coeff_at_inf * e^{-decay u} as u -> infinity."""

    leading_coeff_at_0: object
    const_at_0: object
    num_decay: object
    den_decay: object
    net_coeff_at_inf: object
    dominant_at_inf: str

    def to_dict(self) -> dict:
        from .model import jsonable

        return jsonable(self.__dict__)


def kernel_asymptotics(spec: RatioSpec) -> KernelAsymptotics:
    _require_classical(spec)
    lead = _sum([f.weight * f.scale for f in spec.numerator] + [-f.weight * f.scale for f in spec.denominator])
    const = _sum(
        [f.weight * (HALF - f.shift) for f in spec.numerator]
        + [-f.weight * (HALF - f.shift) for f in spec.denominator]
    )
    nd = min((f.decay for f in spec.numerator), default=None)
    dd = min((f.decay for f in spec.denominator), default=None)
    if dd is None:
        return KernelAsymptotics(lead, const, nd, dd, _sum(f.weight for f in spec.numerator if f.decay == nd), "numerator")
    if nd is None:
        return KernelAsymptotics(lead, const, nd, dd, -_sum(f.weight for f in spec.denominator if f.decay == dd), "denominator")
    c = compare(nd, dd, rel=REL_TOL)
    if c is not None and c < 0:
        net = _sum(f.weight for f in spec.numerator if f.decay == nd)
        return KernelAsymptotics(lead, const, nd, dd, net, "numerator")
    if c is not None and c > 0:
        net = -_sum(f.weight for f in spec.denominator if f.decay == dd)
        return KernelAsymptotics(lead, const, nd, dd, net, "denominator")
    I, J = _argmin_sets(spec)
    net = _sum([spec.numerator[i].weight for i in I] + [-spec.denominator[j].weight for j in J])
    cn = compare(net, 0, rel=REL_TOL, scale=float(_sum(spec.numerator[i].weight for i in I)))
    side = "tie" if not cn else ("numerator" if cn > 0 else "denominator")
    return KernelAsymptotics(lead, const, nd, dd, net, side)


def _argmin_sets(spec: RatioSpec):
    """Index sets where min a_i/A_i and min b_j/B_j are attained (ties included wholesale)."""

    def argmin(factors):
        m = min(f.decay for f in factors)
        return [k for k, f in enumerate(factors) if compare(f.decay, m, rel=REL_TOL) in (0, None)]

    return argmin(spec.numerator), argmin(spec.denominator)


# --- balance, necessary conditions, entropy --------------------------------


def balance(spec: RatioSpec) -> Verdict:
    lhs = _sum(f.weight * f.scale for f in spec.numerator)
    rhs = _sum(f.weight * f.scale for f in spec.denominator)
    c = compare(lhs, rhs, rel=REL_TOL)
    if c is None:
        return Verdict.inconclusive("balance sums agree only to within rounding", lhs=lhs, rhs=rhs)
    if c != 0:
        return Verdict.false("balance fails: sum alpha_i A_i != sum beta_j B_j", lhs=lhs, rhs=rhs)
    return Verdict.true("sum alpha_i A_i = sum beta_j B_j", lhs=lhs, rhs=rhs)


def necessary_conditions(spec: RatioSpec) -> Verdict:
    """Balance and the two necessary conditions. CertifiedTrue only means nothing is violated."""
    _require_classical(spec)
    parts = [("balance", balance(spec))]

    # (a): sum beta_j (b_j - 1/2) - sum alpha_i (a_i - 1/2) >= 0
    vals = [f.weight * (f.shift - HALF) for f in spec.denominator] + [
        -f.weight * (f.shift - HALF) for f in spec.numerator
    ]
    val = _sum(vals)
    c = compare(val, 0, rel=REL_TOL, scale=float(_sum(abs(v) for v in vals)))
    if c is None:
        parts.append(("(a)", Verdict.inconclusive("(a) is a tie within rounding", value=val)))
    elif c < 0:
        parts.append(("(a)", Verdict.false("(a) fails: constant term of Q at u=0 is negative", value=val)))
    else:
        parts.append(("(a)", Verdict.true("(a) holds", value=val)))

    # (b): min a_i/A_i <= min b_j/B_j, with the weight condition on equality
    if not spec.denominator:
        parts.append(("(b)", Verdict.true("no denominator factors")))
    elif not spec.numerator:
        parts.append(("(b)", Verdict.false("(b) fails: no numerator factors, Q < 0 for large u")))
    else:
        nmin = min(f.decay for f in spec.numerator)
        dmin = min(f.decay for f in spec.denominator)
        c = compare(nmin, dmin, rel=REL_TOL)
        if c is not None and c > 0:
            parts.append(("(b)", Verdict.false("(b) fails: min a_i/A_i > min b_j/B_j", num_min=nmin, den_min=dmin)))
        elif c is not None and c < 0:
            parts.append(("(b)", Verdict.true("(b) holds strictly", num_min=nmin, den_min=dmin)))
        else:
            I, J = _argmin_sets(spec)
            sI = _sum(spec.numerator[i].weight for i in I)
            sJ = _sum(spec.denominator[j].weight for j in J)
            w = dict(num_min=nmin, den_min=dmin, I=[i + 1 for i in I], J=[j + 1 for j in J], sum_I=sI, sum_J=sJ)
            cw = compare(sI, sJ, rel=REL_TOL)
            if cw is None:
                parts.append(("(b)", Verdict.inconclusive("(b) equality case is a tie within rounding", **w)))
            elif cw < 0:
                if c is None:
                    parts.append(("(b)", Verdict.inconclusive("minima agree only to within rounding", **w)))
                else:
                    parts.append(("(b)", Verdict.false("(b) fails in the equality case: sum_I alpha < sum_J beta", **w)))
            else:
                parts.append(("(b)", Verdict.true("(b) holds with equality of minima", **w)))
    v = conjunction(parts)
    if v.is_true:
        return Verdict.true("no necessary condition violated", **v.witness)
    return v


def log_entropy_rho(spec: RatioSpec) -> float:
    _require_classical(spec)
    terms = [float(f.weight * f.scale) * math.log(float(f.scale)) for f in spec.numerator]
    terms += [-float(f.weight * f.scale) * math.log(float(f.scale)) for f in spec.denominator]
    return math.fsum(terms)


def _exact_rho_parts(spec: RatioSpec):
    """(L, num, den) with rho^L = num/den exactly, or None when too big or inexact."""
    factors = spec.numerator + spec.denominator
    if not all(is_exact(f.weight, f.scale) for f in factors):
        return None
    exps = [Fraction(f.weight) * Fraction(f.scale) for f in factors]
    L = 1
    for e in exps:
        L = L * e.denominator // math.gcd(L, e.denominator)
    bits = 0
    for e, f in zip(exps, factors):
        s = Fraction(f.scale)
        bits += int(e * L) * (s.numerator.bit_length() + s.denominator.bit_length())
    if bits > _MAX_BITS:
        return None
    num = Fraction(1)
    den = Fraction(1)
    for f in spec.numerator:
        num *= Fraction(f.scale) ** int(Fraction(f.weight) * Fraction(f.scale) * L)
    for f in spec.denominator:
        den *= Fraction(f.scale) ** int(Fraction(f.weight) * Fraction(f.scale) * L)
    return L, num, den


def entropy_rho(spec: RatioSpec) -> float:
    """rho = prod A_i^{alpha_i A_i} / prod B_j^{beta_j B_j}."""
    parts = _exact_rho_parts(spec)
    if parts is not None and parts[0] == 1:
        return float(parts[1] / parts[2])
    return math.exp(log_entropy_rho(spec))


def theta_vs_rho(spec: RatioSpec) -> Verdict:
    """theta >= rho, exactly when every quantity is rational."""
    _require_classical(spec)
    theta = spec.theta
    rho = entropy_rho(spec)
    parts = _exact_rho_parts(spec) if is_exact(theta) else None
    if parts is not None:
        L, num, den = parts
        bits = L * (Fraction(theta).numerator.bit_length() + Fraction(theta).denominator.bit_length())
        if bits <= _MAX_BITS:
            c = (Fraction(theta) ** L * den > num) - (Fraction(theta) ** L * den < num)
            w = dict(theta=theta, rho=rho, exact=True)
            if c < 0:
                return Verdict.false("theta < rho", **w)
            return Verdict.true("theta >= rho", **w)
    lt = math.log(float(theta))
    lr = log_entropy_rho(spec)
    scale = abs(lt) + math.fsum(abs(float(f.weight * f.scale) * math.log(float(f.scale))) for f in spec.numerator + spec.denominator)
    c = compare(lt, lr, rel=REL_TOL, scale=scale)
    w = dict(theta=theta, rho=rho, exact=False)
    if c is None:
        return Verdict.inconclusive("theta and rho agree only to within rounding", **w)
    if c < 0:
        return Verdict.false("theta < rho", **w)
    return Verdict.true("theta >= rho", **w)


# --- exact kernel reduction ---------------------------------------------------


def kernel_reduction(spec: RatioSpec) -> Verdict:
    """Rewrite Q on a common scale G and read off a sign certificate.

    With 1/(1-e^{-u/S}) = sum_{r<n} e^{-r u/S} / (1-e^{-u/G}) for S = nG, every
    factor becomes terms w e^{-s u/G}/(1-e^{-u/G}). If the net weights, sorted by
    exponent s, have nonnegative prefix sums, then Q >= 0 (Abel summation);
    if all net weights vanish, Q is identically zero.
    """
    _require_classical(spec)
    factors = [(1, f) for f in spec.numerator] + [(-1, f) for f in spec.denominator]
    scales = [f.scale for _, f in factors]
    if all(is_exact(s) for s in scales):
        G = rational_gcd([Fraction(s) for s in scales])
        ns = [int(Fraction(s) / G) for s in scales]
    elif len({float(s) for s in scales}) == 1:
        G = scales[0]
        ns = [1] * len(scales)
    else:
        return Verdict.inconclusive("scales are not rationally related")
    if sum(ns) > _MAX_SPLIT:
        return Verdict.inconclusive("common scale too fine for the reduction", pieces=sum(ns))
    acc: dict = {}
    for (sign, f), n in zip(factors, ns):
        for r in range(n):
            s = (f.shift + r) / n if is_exact(f.shift) else (float(f.shift) + r) / n
            if is_exact(s):
                s = Fraction(s)
            acc[s] = acc.get(s, 0) + sign * f.weight
    net = sorted((s, w) for s, w in acc.items() if w != 0)
    w = dict(scale=G, terms=[[s, wt] for s, wt in net])
    if not net:
        return Verdict.true("Q vanishes identically", **w)
    exact = all(is_exact(wt) for _, wt in net)
    prefix = Fraction(0) if exact else 0.0
    total = 0.0
    for _, wt in net:
        prefix = prefix + (wt if exact else float(wt))
        total += abs(float(wt))
        if exact and prefix < 0:
            return Verdict.inconclusive("a prefix sum of net weights is negative", **w)
        if not exact and not _holds(prefix, 0.0, scale=total):
            return Verdict.inconclusive("a prefix sum of net weights is negative or tied", **w)
    return Verdict.true("prefix sums of net weights are nonnegative, so Q >= 0", **w)


# --- sufficient families ---------------------------------------------------------


def sufficient_old(spec: RatioSpec) -> Verdict:
    """Two older sufficient condition sets for Q >= 0 (checked as printed)."""
    _require_classical(spec)
    bal = balance(spec)
    if not bal.is_true:
        return Verdict.inconclusive("balance not certified", balance=bal)
    if not spec.numerator or not spec.denominator:
        return Verdict.inconclusive("needs factors on both sides")
    lo = max(f.decay for f in spec.numerator)
    hi = min(_div(f.shift - 1, f.scale) for f in spec.denominator)
    if _holds(hi, lo):
        return Verdict.true("(a): max a_i/A_i <= min (b_j - 1)/B_j", max_decay=lo, min_bound=hi)
    if spec.p == spec.s:
        p = spec.p
        num, den = spec.numerator, spec.denominator
        ok = all(_holds(num[i].weight * num[i].scale, den[i].weight * den[i].scale) for i in range(p - 1))
        if ok and p > 1:
            ok = _holds(_div(den[-1].shift - 1, den[-1].scale), max(den[j].decay for j in range(p - 1)))
        ok = ok and all(_holds(_div(den[i].shift - 1, den[i].scale), num[i].decay) for i in range(p))
        if ok:
            return Verdict.true("(b): paired weight and shift conditions hold")
    return Verdict.inconclusive("neither condition set holds", max_decay=lo, min_bound=hi)


class StochasticMatrix:
    """Nonnegative s x p matrix with unit row sums."""

    def __init__(self, rows):
        rows = [[coerce_number(v) for v in row] for row in rows]
        if not rows or not rows[0]:
            raise SpecError("matrix must be nonempty")
        p = len(rows[0])
        for j, row in enumerate(rows):
            if len(row) != p:
                raise SpecError(f"row {j + 1} has {len(row)} entries, expected {p}")
            if any(v < 0 for v in row):
                raise SpecError(f"row {j + 1} has a negative entry")
            total = _sum(row)
            if abs(float(total) - 1.0) > 1e-12:
                raise SpecError(f"row {j + 1} sums to {float(total)!r}, not 1")
        self.rows = rows

    @property
    def shape(self):
        return len(self.rows), len(self.rows[0])

    def __getitem__(self, ji):
        j, i = ji
        return self.rows[j][i]

    def to_list(self):
        return [[float(v) for v in row] for row in self.rows]


def sherman_simplified_matrix(c: Sequence, d: Sequence) -> StochasticMatrix:
    """h_{ji} = c_i / D, valid when sum c = sum d = D."""
    c = [coerce_number(v) for v in c]
    d = [coerce_number(v) for v in d]
    D = _sum(c)
    if compare(D, _sum(d), rel=REL_TOL) != 0:
        raise SpecError("sum c must equal sum d")
    return StochasticMatrix([[_div(ci, D) for ci in c] for _ in d])


def sherman_inequality(x, y, c, d, H, probes=(0.01, 0.1, 1.0, 10.0)) -> Verdict:
    """Conditions under which sum d_j f(y_j) <= sum c_i f(x_i) for convex decreasing f >= 0."""
    if not isinstance(H, StochasticMatrix):
        H = StochasticMatrix(H)
    x, y, c, d = ([coerce_number(v) for v in seq] for seq in (x, y, c, d))
    s, p = H.shape
    if len(x) != p or len(c) != p or len(y) != s or len(d) != s:
        raise SpecError(f"dimension mismatch: H is {s}x{p}, x/c have {len(x)}/{len(c)}, y/d have {len(y)}/{len(d)}")
    if any(v < 0 for v in c + d):
        raise SpecError("c and d must be nonnegative")
    failed = []
    for j in range(s):
        rhs = _sum(x[i] * H[j, i] for i in range(p))
        if not _holds(y[j], rhs):
            failed.append(f"y_{j + 1}")
    for i in range(p):
        rhs = _sum(d[j] * H[j, i] for j in range(s))
        if not _holds(c[i], rhs):
            failed.append(f"c_{i + 1}")
    if failed:
        return Verdict.inconclusive("conditions fail at " + ", ".join(failed), failed=failed)
    checks = {}
    for u in probes:
        lhs = math.fsum(float(dj) * math.exp(-u * float(yj)) for dj, yj in zip(d, y))
        rhs = math.fsum(float(ci) * math.exp(-u * float(xi)) for ci, xi in zip(c, x))
        checks[str(u)] = lhs <= rhs * (1 + 1e-12) + 1e-300
    return Verdict.true("Sherman conditions hold", probes=checks, probes_ok=all(checks.values()))


def _sherman_vectors(spec: RatioSpec):
    x = [f.decay for f in spec.numerator]
    y = [_div(f.shift - 1, f.scale) for f in spec.denominator]
    c = [f.weight * f.scale for f in spec.numerator]
    d = [f.weight * f.scale for f in spec.denominator]
    return x, y, c, d


def sherman_sufficient(spec: RatioSpec, H) -> Verdict:
    """Q >= 0 if alpha_i A_i >= sum_j beta_j B_j h_ji and b_j >= B_j sum_i (a_i/A_i) h_ji + 1."""
    _require_classical(spec)
    if not isinstance(H, StochasticMatrix):
        H = StochasticMatrix(H)
    if H.shape != (spec.s, spec.p):
        raise SpecError(f"H must be {spec.s}x{spec.p}, got {H.shape[0]}x{H.shape[1]}")
    v = sherman_inequality(*_sherman_vectors(spec), H)
    if v.is_true:
        return Verdict.true("Sherman conditions hold, so Q >= 0", matrix=H.to_list(), **v.witness)
    return v


def sherman_sufficient_auto(spec: RatioSpec) -> Verdict:
    """Canonical matrix h_ji = alpha_i A_i / sum alpha A: (b_j - 1) sum beta B >= B_j sum alpha_i a_i."""
    _require_classical(spec)
    if not spec.numerator or not spec.denominator:
        return Verdict.inconclusive("needs factors on both sides")
    bal = balance(spec)
    if not bal.is_true:
        return Verdict.inconclusive("balance not certified", balance=bal)
    D = _sum(f.weight * f.scale for f in spec.denominator)
    S = _sum(f.weight * f.shift for f in spec.numerator)
    failed = [j + 1 for j, f in enumerate(spec.denominator) if not _holds((f.shift - 1) * D, f.scale * S)]
    if failed:
        return Verdict.inconclusive("simplified Sherman condition fails", failed=failed)
    return Verdict.true("(b_j - 1) sum beta B >= B_j sum alpha_i a_i for all j")


@dataclass(frozen=True)
class VhatSpec:
    """prod_j Gamma^{alpha_j}(x/alpha_j + a) alpha_j^x / (Gamma^{beta_j}(x/beta_j + a) beta_j^x)."""

    a: object
    alphas: tuple
    betas: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", coerce_number(self.a))
        object.__setattr__(self, "alphas", tuple(coerce_number(v) for v in self.alphas))
        object.__setattr__(self, "betas", tuple(coerce_number(v) for v in self.betas))
        if len(self.alphas) != len(self.betas):
            raise SpecError("alphas and betas must have the same length")
        if not self.alphas:
            raise SpecError("need at least one pair")
        if any(not v > 0 for v in self.alphas + self.betas):
            raise SpecError("alphas and betas must be positive")
        if self.a < 0:
            raise SpecError("a must be nonnegative")

    def to_ratio_spec(self, geometric: bool = True) -> RatioSpec:
        """V-hat, or W-hat (theta = 1) with ``geometric=False``."""
        A = [_div(1, v) for v in self.alphas]
        B = [_div(1, v) for v in self.betas]
        theta = Fraction(1)
        for al, be in zip(self.alphas, self.betas) if geometric else ():
            theta = theta * _div(be, al) if is_exact(theta, al, be) else float(theta) * float(be) / float(al)
        n = len(A)
        return RatioSpec.build(A, [self.a] * n, self.alphas, B, [self.a] * n, self.betas, theta=theta)


def as_vhat(spec: RatioSpec) -> Optional[VhatSpec]:
    """Recognise the V-hat structure: p = s, common shift, alpha_j A_j = beta_j B_j = 1."""
    if spec.p != spec.s or spec.p == 0:
        return None
    factors = spec.numerator + spec.denominator
    a = factors[0].shift
    if any(compare(f.shift, a, rel=REL_TOL) != 0 for f in factors):
        return None
    if any(compare(f.weight * f.scale, 1, rel=REL_TOL) != 0 for f in factors):
        return None
    return VhatSpec(a, [f.weight for f in spec.numerator], [f.weight for f in spec.denominator])


def vhat_check(spec) -> Verdict:
    """a >= 1 and ascending partial sums of alpha dominated by those of beta."""
    if isinstance(spec, RatioSpec):
        v = as_vhat(spec)
        if v is None:
            return Verdict.inconclusive("spec does not have the V-hat structure")
        spec = v
    al = sorted(spec.alphas)
    be = sorted(spec.betas)
    if not _holds(spec.a, 1):
        return Verdict.inconclusive("needs a >= 1", a=spec.a)
    pa = pb = 0
    for k, (x, y) in enumerate(zip(al, be), start=1):
        pa, pb = pa + x, pb + y
        if not _holds(pb, pa):
            return Verdict.inconclusive(f"partial sum {k} of alpha exceeds that of beta", k=k, alpha_sum=pa, beta_sum=pb)
    return Verdict.true("majorization conditions hold", alphas=al, betas=be)


def leblanc_johnson_check(spec: RatioSpec, require_theta: bool = True) -> Verdict:
    """Ordered scales and weighted scales with a common shift a >= 1/2.

    Factors are sorted (numerators by A descending, then alpha A descending;
    denominators by B descending, then beta B ascending) since the product
    does not depend on their order.
    """
    _require_classical(spec)
    factors = spec.numerator + spec.denominator
    a = factors[0].shift
    if any(f.shift != a for f in factors):
        raise SpecError("Leblanc-Johnson check needs a common shift for all factors")
    bal = balance(spec)
    if not bal.is_true:
        return Verdict.inconclusive("balance not certified", balance=bal)
    if require_theta:
        tr = theta_vs_rho(spec)
        if not tr.is_true:
            return Verdict.inconclusive("theta >= rho not certified", theta_rho=tr)
    if not _holds(a, HALF):
        return Verdict.inconclusive("needs a >= 1/2", a=a)
    num = sorted(spec.numerator, key=lambda f: (-float(f.scale), -float(f.weight * f.scale)))
    den = sorted(spec.denominator, key=lambda f: (-float(f.scale), float(f.weight * f.scale)))
    chain = [f.scale for f in num] + [f.scale for f in den]
    if not all(_holds(x, y) for x, y in zip(chain, chain[1:])):
        return Verdict.inconclusive("(a) scale chain fails")
    wa = [f.weight * f.scale for f in num]
    if not all(_holds(x, y) for x, y in zip(wa, wa[1:])):
        return Verdict.inconclusive("(b) alpha_i A_i not decreasing")
    wb = [f.weight * f.scale for f in den]
    if not all(_holds(y, x) for x, y in zip(wb, wb[1:])):
        return Verdict.inconclusive("(c) beta_j B_j not increasing")
    return Verdict.true("Leblanc-Johnson conditions hold")


def p1_exact(alpha, beta, a) -> Verdict:
    """One pair: V-hat_1 is l.c.m. and (log W-hat_1)' is Bernstein iff alpha <= beta and (alpha = beta or a >= 1/2)."""
    alpha, beta, a = coerce_number(alpha), coerce_number(beta), coerce_number(a)
    if not (alpha > 0 and beta > 0 and a >= 0):
        raise SpecError("need alpha, beta > 0 and a >= 0")
    c = compare(alpha, beta, rel=REL_TOL)
    ca = compare(a, HALF, rel=REL_TOL)
    w = dict(alpha=alpha, beta=beta, a=a)
    if c is None or (c < 0 and ca is None):
        return Verdict.inconclusive("parameters sit on the boundary within rounding", **w)
    if c > 0:
        return Verdict.false("alpha > beta", **w)
    if c == 0:
        return Verdict.true("alpha = beta", **w)
    if ca < 0:
        return Verdict.false("alpha < beta needs a >= 1/2", **w)
    return Verdict.true("alpha < beta and a >= 1/2", **w)


def sufficient_families(spec: RatioSpec) -> dict:
    """Every closed-form sufficient condition for Q >= 0 that applies to ``spec``."""
    _require_classical(spec)
    out = {
        "kernel_reduction": kernel_reduction(spec),
        "sufficient_old": sufficient_old(spec),
        "sherman_auto": sherman_sufficient_auto(spec),
    }
    if as_vhat(spec) is not None:
        out["vhat"] = vhat_check(spec)
    factors = spec.numerator + spec.denominator
    if spec.numerator and spec.denominator and all(f.shift == factors[0].shift for f in factors):
        # Q does not involve theta, so the theta condition is irrelevant here
        out["leblanc_johnson"] = leblanc_johnson_check(spec, require_theta=False)
    return out


# --- grid scan --------------------------------------------------------------------


@dataclass(frozen=True)
class GridConfig:
    points: int = 2000
    u_min: float = 1e-6
    u_max: Optional[float] = None
    abs_tol: float = 1e-10

    def __post_init__(self):
        if self.points < 2:
            raise SpecError("grid needs at least 2 points")
        if not self.u_min > 0 or (self.u_max is not None and not self.u_max > self.u_min):
            raise SpecError("grid bounds must satisfy 0 < u_min < u_max")


def default_u_max(spec: RatioSpec) -> float:
    decays = [float(f.decay) for f in spec.numerator + spec.denominator if f.decay > 0]
    if not decays:
        return 50.0
    return max(50.0, 50.0 / min(decays))


def q_grid(spec: RatioSpec, grid: GridConfig = GridConfig()):
    u_max = grid.u_max if grid.u_max is not None else default_u_max(spec)
    u = np.geomspace(grid.u_min, u_max, grid.points)
    return u, q_kernel(spec, u)


def _asymptotic_search(spec: RatioSpec, asym: KernelAsymptotics, u_lo: float, u_hi: float):
    """Look for a concrete negative value where the asymptotics predict one."""
    cands = []
    c0 = compare(asym.leading_coeff_at_0, 0, rel=REL_TOL)
    if c0 is not None and (c0 < 0 or (c0 == 0 and compare(asym.const_at_0, 0, rel=REL_TOL) == -1)):
        cands += [u_lo * 10.0**-j for j in range(1, 10)]
    if asym.dominant_at_inf == "denominator":
        cands += [u_hi * 2.0**j for j in range(1, 40)]
    for u in cands:
        val, mag = q_kernel(spec, u, magnitude=True)
        if val < -1e-12 * mag and val < 0:
            return u, val
    return None


def q_nonneg(spec: RatioSpec, grid: GridConfig = GridConfig()) -> Verdict:
    """Numerical scan of Q(u) >= 0. Never certifies; can refute."""
    _require_classical(spec)
    u, vals = q_grid(spec, grid)
    k = int(np.argmin(vals))
    asym = kernel_asymptotics(spec)
    w = dict(u_min=float(u[0]), u_max=float(u[-1]), points=len(u), min_value=float(vals[k]), argmin_u=float(u[k]))
    if vals[k] < -grid.abs_tol:
        return Verdict.false(f"Q({u[k]:.6g}) = {vals[k]:.6g} < 0", u=float(u[k]), value=float(vals[k]), **w)
    found = _asymptotic_search(spec, asym, float(u[0]), float(u[-1]))
    if found is not None:
        return Verdict.false(f"Q({found[0]:.6g}) = {found[1]:.6g} < 0", u=found[0], value=found[1], **w)
    w["asymptotics"] = asym.to_dict()
    c0 = compare(asym.leading_coeff_at_0, 0, rel=REL_TOL)
    at0 = c0 is not None and (c0 > 0 or (c0 == 0 and compare(asym.const_at_0, 0, rel=REL_TOL) in (0, 1)))
    at_inf = asym.dominant_at_inf != "denominator"
    if at0 and at_inf:
        return Verdict.supported("no negative value of Q on the grid", **w)
    return Verdict.inconclusive("grid is nonnegative but asymptotics predict a sign change", **w)


def certify_q(spec: RatioSpec, grid: GridConfig = GridConfig()) -> Verdict:
    """Q >= 0 via a closed-form family if possible, otherwise grid evidence."""
    fams = sufficient_families(spec)
    for name, v in fams.items():
        if v.is_true:
            return Verdict.true(f"certified by {name}", family=name, **{name: v})
    g = q_nonneg(spec, grid)
    return Verdict(g.status, g.reason, {**g.witness, "families": {k: v.status.value for k, v in fams.items()}})


def check_log2_cm_classical(spec: RatioSpec, grid: GridConfig = GridConfig()) -> Verdict:
    """(log V)'' is completely monotonic iff Q >= 0."""
    _require_classical(spec)
    return certify_q(spec, grid)


def check_lcm_classical(spec: RatioSpec, grid: GridConfig = GridConfig()) -> Verdict:
    """V is l.c.m. iff balance, theta >= rho and Q >= 0."""
    _require_classical(spec)
    nec = necessary_conditions(spec)
    if nec.is_false:
        return Verdict.false(f"necessary: {nec.reason}", failed="necessary", necessary=nec)
    tr = theta_vs_rho(spec)
    if tr.is_false:
        return Verdict.false(f"theta_rho: {tr.reason}", failed="theta_rho", theta_rho=tr, necessary=nec)
    return conjunction([("necessary", nec), ("theta_rho", tr), ("q_nonneg", certify_q(spec, grid))])


def legendre_spec(theta=Fraction(1, 4)) -> RatioSpec:
    """Gamma(x) Gamma(x + 1/2) / Gamma(2x) = 2^{1-2x} sqrt(pi), times theta^{-x}."""
    return RatioSpec.build([1, 1], [0, HALF], [1, 1], [2], [0], [1], theta=theta)


def p1_spec(alpha, beta, a) -> RatioSpec:
    return VhatSpec(a, [alpha], [beta]).to_ratio_spec()


__all__ = [
    "GridConfig",
    "KernelAsymptotics",
    "Status",
    "StochasticMatrix",
    "VhatSpec",
    "as_vhat",
    "balance",
    "certify_q",
    "check_lcm_classical",
    "check_log2_cm_classical",
    "entropy_rho",
    "kernel_asymptotics",
    "kernel_reduction",
    "leblanc_johnson_check",
    "legendre_spec",
    "log_entropy_rho",
    "necessary_conditions",
    "p1_exact",
    "p1_spec",
    "q_grid",
    "q_kernel",
    "q_nonneg",
    "sherman_inequality",
    "sherman_simplified_matrix",
    "sherman_sufficient",
    "sherman_sufficient_auto",
    "sufficient_families",
    "sufficient_old",
    "theta_vs_rho",
    "vhat_check",
]
