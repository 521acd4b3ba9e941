"""Decisions for ratios of q-gamma functions (0 < q < 1)."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional

import numpy as np

from . import specfun
from .errors import DomainError, SpecError
from .exact import compare, exact_pow, is_exact
from .model import RatioSpec, Verdict, conjunction
from .qlattice import mass_condition, support_inclusion

# relative margin below which the boundary inequalities count as ties
TIE_REL = 1e-10


def _require_q(spec: RatioSpec):
    if spec.classical:
        raise SpecError("this check needs a q-case spec (0 < q < 1)")


def net_factors(spec: RatioSpec) -> list:
    """Cancel identical (class, scale, shift) factors across the fraction bar.

    Returns ``(factor, net_weight)`` pairs with nonzero net weight; positive
    weights act as numerator factors.
    """
    acc: dict = {}
    order = []
    for sign, factors in ((1, spec.numerator), (-1, spec.denominator)):
        for f in factors:
            key = (f.irr_class, f.scale, f.shift)
            if key not in acc:
                acc[key] = (f, 0)
                order.append(key)
            g, w = acc[key]
            acc[key] = (g, w + sign * f.weight)
    out = []
    for key in order:
        f, w = acc[key]
        if w != 0:
            out.append((f, w))
    return out


def check_log2_cm(spec: RatioSpec, k_max: Optional[int] = None) -> Verdict:
    """(log W_q)'' is completely monotonic iff tau = mu - sigma >= 0."""
    _require_q(spec)
    support = support_inclusion(spec)
    if support.is_false:
        return Verdict.false(f"support: {support.reason}", failed="support_inclusion", support_inclusion=support)
    mass = mass_condition(spec, k_max)
    return conjunction([("support_inclusion", support), ("mass_condition", mass)])


def lcm_sums(spec: RatioSpec):
    """(sum alpha_i A_i, sum beta_j B_j) after cancelling identical factors."""
    left, right = [], []
    for f, w in net_factors(spec):
        (left if w > 0 else right).append(abs(w) * f.scale)
    exact = all(is_exact(v) for v in left + right)
    if exact:
        return sum(left, Fraction(0)), sum(right, Fraction(0))
    return math.fsum(map(float, left)), math.fsum(map(float, right))


def lcm_condition(spec: RatioSpec) -> Verdict:
    lhs, rhs = lcm_sums(spec)
    c = compare(lhs, rhs, rel=TIE_REL)
    if c is None:
        return Verdict.inconclusive("sums agree to within rounding", lhs=lhs, rhs=rhs)
    if c > 0:
        return Verdict.false("sum alpha_i A_i exceeds sum beta_j B_j", lhs=lhs, rhs=rhs)
    return Verdict.true("sum alpha_i A_i <= sum beta_j B_j", lhs=lhs, rhs=rhs)


def check_lcm(spec: RatioSpec, k_max: Optional[int] = None) -> Verdict:
    """W_q is logarithmically completely monotonic."""
    _require_q(spec)
    return conjunction([("log2_cm", check_log2_cm(spec, k_max)), ("lcm_condition", lcm_condition(spec))])


def bernstein_condition(spec: RatioSpec, cfg=specfun.DEFAULT) -> Verdict:
    """sum alpha_i A_i psi_q(a_i) >= sum beta_j B_j psi_q(b_j)."""
    _require_q(spec)
    for side, factors in (("numerator", spec.numerator), ("denominator", spec.denominator)):
        for n, f in enumerate(factors):
            if f.shift == 0:
                raise DomainError(
                    f"{side} factor {n + 1} has zero shift; psi_q diverges at 0"
                )
    terms = [
        float(w) * float(f.scale) * specfun.digamma_q(float(f.shift), spec.q, cfg)
        for f, w in net_factors(spec)
    ]
    if not terms:
        return Verdict.true("identical factor lists, both sides equal", lhs=0.0, rhs=0.0)
    lhs = math.fsum(t for t in terms if t > 0)
    rhs = -math.fsum(t for t in terms if t < 0)
    scale = math.fsum(abs(t) for t in terms)
    c = compare(lhs, rhs, rel=TIE_REL, scale=scale)
    if c is None:
        return Verdict.inconclusive("boundary values agree to within rounding", lhs=lhs, rhs=rhs)
    if c < 0:
        return Verdict.false("(log W_q)' is negative near x = 0", lhs=lhs, rhs=rhs)
    return Verdict.true("(log W_q)'(0+) >= 0", lhs=lhs, rhs=rhs)


def check_bernstein(spec: RatioSpec, k_max: Optional[int] = None, cfg=specfun.DEFAULT) -> Verdict:
    """(log W_q)' is a Bernstein function."""
    _require_q(spec)
    boundary = bernstein_condition(spec, cfg)
    return conjunction([("log2_cm", check_log2_cm(spec, k_max)), ("boundary", boundary)])


def _net_exponent_terms(spec: RatioSpec) -> dict:
    """shift -> net weight, for all-scales-one specs."""
    acc: dict = {}
    for sign, factors in ((1, spec.numerator), (-1, spec.denominator)):
        for f in factors:
            acc[f.shift] = acc.get(f.shift, 0) + sign * f.weight
    return acc


def _v_value(spec: RatioSpec, n: int):
    """v(q^n) = sum alpha_i q^{n a_i} - sum beta_j q^{n b_j}; Fraction when exact."""
    parts = []
    for sign, factors in ((1, spec.numerator), (-1, spec.denominator)):
        for f in factors:
            p = exact_pow(spec.q, n * f.shift) if is_exact(f.shift) else None
            if p is not None and is_exact(f.weight):
                parts.append(sign * f.weight * p)
            else:
                parts.append(sign * float(f.weight) * float(spec.q) ** (n * float(f.shift)))
    if all(isinstance(v, Fraction) for v in parts):
        return sum(parts, Fraction(0)), 0.0
    return math.fsum(map(float, parts)), math.fsum(abs(float(v)) for v in parts)


def _v_sign_log(spec: RatioSpec, n: int) -> Optional[int]:
    lq = math.log(float(spec.q))
    pos, neg = [], []
    for e, w in _net_exponent_terms(spec).items():
        if w != 0:
            (pos if w > 0 else neg).append(math.log(abs(float(w))) + n * float(e) * lq)
    if not neg:
        return 1
    if not pos:
        return -1
    mp, mn = max(pos), max(neg)
    lp = mp + math.log(math.fsum(math.exp(v - mp) for v in pos))
    ln = mn + math.log(math.fsum(math.exp(v - mn) for v in neg))
    if ln - lp > 1e-12:
        return -1
    return 1


def _v_tail(spec: RatioSpec, N: int):
    """Bound v(x) >= 0 for x <= q^N, x = q^n. Returns "certified"/"negative"/"open"."""
    terms = [(e, w) for e, w in _net_exponent_terms(spec).items() if w != 0]
    pos = [(e, w) for e, w in terms if w > 0]
    neg = [(e, w) for e, w in terms if w < 0]
    if not neg:
        return "certified", {"reason": "no net negative terms"}
    if not pos:
        return "negative", {"reason": "only negative terms"}
    e_star = min(e for e, _ in pos)
    if any(e < e_star for e, _ in neg):
        return "negative", {"reason": "denominator exponent below numerator exponent"}
    lead = sum(w for e, w in pos if e == e_star)
    q = spec.q
    if is_exact(q) and all(is_exact(e, w) for e, w in terms):
        q = Fraction(q)
        rhs = sum((-w * q ** math.floor(N * (e - e_star)) for e, w in neg), Fraction(0))
        ok = lead >= rhs
    else:
        rhs = math.fsum(-float(w) * float(q) ** (N * (float(e) - float(e_star))) for e, w in neg)
        ok = float(lead) > rhs * (1 + 1e-9)
    info = {"N": N, "lead": float(lead), "bound": float(rhs), "exponent": e_star}
    return ("certified" if ok else "open"), info


def check_fq_example1(spec: RatioSpec, n_max: int = 256, samples: int = 200) -> Verdict:
    """All scales equal to one: v(q^n) >= 0 for every n and sum alpha <= sum beta."""
    _require_q(spec)
    if any(f.scale != 1 for f in spec.numerator + spec.denominator):
        raise SpecError("check_fq_example1 requires every scale to equal 1")
    if n_max < 1:
        raise SpecError("n_max must be >= 1")
    # stronger sufficient condition, sampled: v(t) >= 0 on (0, q)
    t = np.linspace(0.0, float(spec.q), samples + 1)[1:]
    v_t = sum(float(f.weight) * t ** float(f.shift) for f in spec.numerator) - sum(
        float(f.weight) * t ** float(f.shift) for f in spec.denominator
    )
    sampled = bool(np.all(v_t >= -1e-12 * np.maximum(1.0, np.abs(v_t))))

    masses = None
    for n in range(1, n_max + 1):
        v, scale = _v_value(spec, n)
        c = compare(v, 0, scale=scale)
        if c is not None and c < 0:
            masses = Verdict.false(f"v(q^{n}) < 0", n=n, v=v)
            break
    if masses is None:
        N = n_max + 1
        while True:
            outcome, info = _v_tail(spec, N)
            if outcome == "certified":
                masses = Verdict.true("v(q^n) >= 0 for all n", checked_up_to=n_max, tail=info)
                break
            if outcome == "negative":
                found = None
                for j in range(64):
                    n = N << j
                    if _v_sign_log(spec, n) < 0:
                        found = n
                        break
                if found is not None:
                    masses = Verdict.false(f"v(q^{found}) < 0 (tail)", n=found)
                else:
                    masses = Verdict.inconclusive("tail not certified", checked_up_to=n_max, tail=info)
                break
            if 4 * N > (1 << 14):
                masses = Verdict.inconclusive("tail not certified", checked_up_to=N - 1, tail=info)
                break
            for n in range(N, 4 * N):
                if _v_sign_log(spec, n) < 0:
                    masses = Verdict.false(f"v(q^{n}) < 0", n=n)
                    break
            if masses is not None:
                break
            N *= 4
    lhs = sum((f.weight for f in spec.numerator), Fraction(0)) if all(is_exact(f.weight) for f in spec.numerator) else math.fsum(float(f.weight) for f in spec.numerator)
    rhs = sum((f.weight for f in spec.denominator), Fraction(0)) if all(is_exact(f.weight) for f in spec.denominator) else math.fsum(float(f.weight) for f in spec.denominator)
    # identical factor lists cancel exactly
    if not any(w != 0 for w in _net_exponent_terms(spec).values()):
        weights = Verdict.true("identical factor lists", lhs=lhs, rhs=rhs)
    else:
        c = compare(lhs, rhs, rel=TIE_REL)
        if c is None:
            weights = Verdict.inconclusive("weight sums tie within rounding", lhs=lhs, rhs=rhs)
        elif c > 0:
            weights = Verdict.false("sum alpha > sum beta", lhs=lhs, rhs=rhs)
        else:
            weights = Verdict.true("sum alpha <= sum beta", lhs=lhs, rhs=rhs)
    out = conjunction([("v_nonneg", masses), ("weight_sum", weights)])
    return type(out)(out.status, out.reason, {**out.witness, "v_nonneg_on_(0,q)_sampled": sampled})


def limit_minus_log_derivative(spec: RatioSpec):
    """lim_{x->inf} -(log W_q)'(x) = (sum beta B - sum alpha A) log(1/(1-q))."""
    lhs, rhs = lcm_sums(spec)
    return (float(rhs) - float(lhs)) * -math.log1p(-float(spec.q))
