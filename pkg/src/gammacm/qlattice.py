"""Point-mass measures on the q-lattice and the mass conditions built on them.

For q in (0, 1) the second logarithmic derivative of W_q is the Laplace
transform of tau = mu - sigma, a signed measure with atoms at the points
``n A_i log(1/q)`` (positive) and ``m B_j log(1/q)`` (negative). Within one
irrationality class all scales are integer multiples of a common step ``g``,
so every atom sits at ``k g log(1/q)`` for an integer lattice index ``k``.

Nonnegativity of tau is decided by an exhaustive check up to ``k_max`` plus
a tail certificate: beyond the checked range the masses in each residue class
modulo the period are generalized polynomials in ``x = q^k`` whose sign is
bounded explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Optional

import numpy as np

from .errors import SpecError
from .exact import (
    Number,
    compare,
    exact_pow,
    integer_multiple_of,
    is_exact,
    pow_upper,
    rational_gcd,
)
from .model import GammaFactor, RatioSpec, Verdict

NUM, DEN = 1, -1
# relative tolerance on the log-mass ratio in the floating point path
LOG_TOL = 1e-12
# extended search never goes beyond this many periods
_TAIL_CAP_PERIODS = 1 << 14


@dataclass(frozen=True)
class LatticeTerm:
    side: int  # NUM or DEN
    index: int  # 0-based position within its side of the spec
    d: int  # scale = d * step * unit
    shift: Number
    weight: Number  # alpha * A^2 (or beta * B^2)

    @property
    def label(self) -> str:
        return ("A" if self.side == NUM else "B") + str(self.index + 1)


def _flog(v) -> float:
    if isinstance(v, Fraction):
        return math.log(v.numerator) - math.log(v.denominator)
    return math.log(v)


def _logsumexp(xs):
    m = max(xs)
    return m + math.log(math.fsum(math.exp(x - m) for x in xs))


@dataclass(frozen=True)
class LatticeMeasure:
    """tau restricted to one irrationality class."""

    irr_class: Optional[str]
    q: Number
    unit: Number
    step: Fraction
    period: int
    terms: tuple

    # --- geometry ------------------------------------------------------

    def point(self, k: int) -> float:
        """Physical location t = k g log(1/q) of lattice index k."""
        return k * float(self.step) * float(self.unit) * -math.log(float(self.q))

    def contributing(self, k: int) -> list:
        return [t for t in self.terms if k % t.d == 0]

    def contributing_indices(self, k: int) -> frozenset:
        return frozenset((t.side, t.index) for t in self.contributing(k))

    @property
    def has_denominator(self) -> bool:
        return any(t.side == DEN for t in self.terms)

    # --- masses ----------------------------------------------------------

    def _exact_term(self, t: LatticeTerm, n: int):
        p = exact_pow(self.q, n * t.shift) if is_exact(t.shift) else None
        if p is None or not is_exact(t.weight):
            return None
        return Fraction(n) / (1 - Fraction(self.q) ** n) * Fraction(t.weight) * p

    def _log_term(self, t: LatticeTerm, n: int) -> float:
        lq = math.log(float(self.q))
        return (
            math.log(n)
            - math.log(-math.expm1(n * lq))
            + _flog(t.weight)
            + n * float(t.shift) * lq
        )

    def mass(self, k: int):
        """Signed mass of tau at lattice index k (Fraction when exact)."""
        parts = []
        for t in self.contributing(k):
            n = k // t.d
            v = self._exact_term(t, n)
            parts.append((t.side, v if v is not None else math.exp(self._log_term(t, n))))
        if all(isinstance(v, Fraction) for _, v in parts):
            return sum((s * v for s, v in parts), Fraction(0))
        return math.fsum(s * float(v) for s, v in parts)

    def sign(self, k: int, *, exact: bool = True):
        """Decide the sign of the mass at k.

        Returns ``(sign, margin)`` where margin is log(mu-mass) - log(sigma-mass)
        (``inf`` without denominator terms). ``sign`` is ``None`` when the
        floating point comparison is within tolerance, which counts as
        nonnegative.
        """
        contrib = self.contributing(k)
        pos = [t for t in contrib if t.side == NUM]
        neg = [t for t in contrib if t.side == DEN]
        if not neg:
            return (1 if pos else 0), math.inf
        if not pos:
            return -1, -math.inf
        if exact:
            pe = [self._exact_term(t, k // t.d) for t in pos]
            ne = [self._exact_term(t, k // t.d) for t in neg]
            if all(v is not None for v in pe + ne):
                P, N = sum(pe), sum(ne)
                margin = _flog(P) - _flog(N)
                return (P > N) - (P < N), margin
        lp = _logsumexp([self._log_term(t, k // t.d) for t in pos])
        ln = _logsumexp([self._log_term(t, k // t.d) for t in neg])
        margin = lp - ln
        if margin < -LOG_TOL:
            return -1, margin
        if margin > LOG_TOL:
            return 1, margin
        return None, margin

    # --- tail analysis ---------------------------------------------------

    def residue_terms(self, r: int) -> list:
        """Merged (d, shift) terms active for k = r (mod period), k >= 1.

        Each entry is ``(coef, exponent, d)`` meaning the mass at k equals
        sum coef * k * x^exponent / (1 - q^{k/d}) with x = q^k.
        """
        rr = r % self.period
        merged: dict = {}
        for t in self.terms:
            if rr % t.d:
                continue
            key = (t.d, t.shift)
            merged[key] = merged.get(key, 0) + t.side * t.weight
        out = []
        scale = max((abs(float(v)) for v in merged.values()), default=0.0)
        for (d, shift), w in merged.items():
            if isinstance(w, Fraction) and w == 0:
                continue
            if not isinstance(w, Fraction) and abs(w) <= 1e-15 * scale:
                continue
            coef = w / d
            expo = Fraction(shift) / d if is_exact(shift) else float(shift) / d
            out.append((coef, expo, d))
        return out

    def tail_exponents(self) -> dict:
        """residue -> list of (decay exponent, leading coefficient, d)."""
        return {r: sorted(self.residue_terms(r), key=lambda e: float(e[1])) for r in range(self.period)}

    def tail_bound(self, r: int, K: int) -> tuple[str, dict]:
        """Try to prove mass(k) >= 0 for every k >= K with k = r (mod period).

        Outcomes: ``"certified"``, ``"negative"`` (a negative term dominates as
        k grows, so the condition fails eventually) or ``"open"``.
        """
        terms = self.residue_terms(r)
        pos = [e for e in terms if e[0] > 0]
        neg = [e for e in terms if e[0] < 0]
        if not neg:
            return "certified", {"reason": "no net negative terms"}
        if not pos:
            return "negative", {"reason": "only negative terms"}
        e_star = min(e[1] for e in pos)
        if any(e[1] < e_star for e in neg):
            return "negative", {"reason": "denominator decays slower", "exponent": e_star}
        same_d = len({e[2] for e in terms}) == 1
        lead = sum(e[0] for e in pos if e[1] == e_star)
        q = self.q
        exact = is_exact(q) and all(is_exact(e[0], e[1]) for e in terms)
        if exact:
            q = Fraction(q)
            rhs = Fraction(0)
            for c, e, d in neg:
                f = Fraction(1) if same_d else 1 / (1 - q ** (K // d))
                rhs += -c * pow_upper(q, K * (e - e_star)) * f
            ok = lead >= rhs
            info = {"K": K, "lead": float(lead), "bound": float(rhs), "exact": True}
        else:
            qf = float(q)
            lq = math.log(qf)
            rhs = 0.0
            for c, e, d in neg:
                f = 1.0 if same_d else 1.0 / -math.expm1((K / d) * lq)
                rhs += -float(c) * math.exp(K * (float(e) - float(e_star)) * lq) * f
            ok = float(lead) > rhs * (1 + 1e-9)
            info = {"K": K, "lead": float(lead), "bound": rhs, "exact": False}
        info["exponent"] = e_star
        return ("certified" if ok else "open"), info


def _class_key(f: GammaFactor):
    return f.irr_class


def build_lattices(spec: RatioSpec) -> dict:
    """Group the factors of a q-case spec by irrationality class."""
    if spec.classical:
        raise SpecError("lattice measures are defined only for q in (0, 1)")
    groups: dict = {}
    for side, factors in ((NUM, spec.numerator), (DEN, spec.denominator)):
        for i, f in enumerate(factors):
            groups.setdefault(_class_key(f), []).append((side, i, f))
    out = {}
    for cls, members in groups.items():
        scales = [f.scale for _, _, f in members]
        if all(is_exact(s) for s in scales):
            unit: Number = Fraction(1)
            coefs = [Fraction(s) for s in scales]
        else:
            if cls is None:
                raise SpecError(
                    "floating point scales in the q-case need an irr_class declaration"
                )
            unit = float(scales[0])
            coefs = []
            for s in scales:
                ratio = float(s) / unit
                c = Fraction(ratio).limit_denominator(10**6)
                if abs(float(c) - ratio) > 1e-12 * max(1.0, ratio):
                    raise SpecError(
                        f"scales in irr_class {cls!r} are not rational multiples of each other"
                    )
                coefs.append(c)
        g = rational_gcd(coefs)
        terms = []
        for (side, i, f), c in zip(members, coefs):
            d = integer_multiple_of(c, g)
            assert d is not None
            A = f.scale if is_exact(f.scale) else float(f.scale)
            w = f.weight * A * A if is_exact(f.weight, A) else float(f.weight) * float(A) ** 2
            terms.append(LatticeTerm(side, i, d, f.shift, w))
        period = reduce(math.lcm, (t.d for t in terms))
        out[cls] = LatticeMeasure(cls, spec.q, unit, g, period, tuple(terms))
    return out


def _single_lattice(spec: RatioSpec, irr_class=None) -> LatticeMeasure:
    lats = build_lattices(spec)
    if irr_class is None and len(lats) == 1:
        return next(iter(lats.values()))
    if irr_class not in lats:
        raise SpecError(f"no factors in irr_class {irr_class!r}")
    return lats[irr_class]


def tau_mass(spec: RatioSpec, k: int, irr_class=None):
    """Signed mass of tau at t = k g log(1/q) in the given class."""
    if k < 1:
        raise SpecError("lattice index k must be >= 1")
    return _single_lattice(spec, irr_class).mass(k)


def support_inclusion(spec: RatioSpec) -> Verdict:
    """Every B_j must be an integer multiple of some A_i of the same class."""
    lats = build_lattices(spec)
    ns, idx = [], []
    for j, f in enumerate(spec.denominator):
        lat = lats[_class_key(f)]
        dj = next(t.d for t in lat.terms if t.side == DEN and t.index == j)
        found = None
        for t in lat.terms:
            if t.side == NUM and dj % t.d == 0:
                found = (dj // t.d, t.index)
                break
        if found is None:
            return Verdict.false(
                f"B{j + 1} is not an integer multiple of any numerator scale in its class",
                denominator=j + 1,
                irr_class=f.irr_class,
            )
        ns.append(found[0])
        idx.append(found[1] + 1)
    return Verdict.true("denominator lattice contained in numerator lattice", n=ns, i=idx)


def _family_label(lat: LatticeMeasure, r: int) -> tuple:
    rr = r if r else lat.period
    return tuple(sorted(t.index + 1 for t in lat.contributing(rr) if t.side == DEN))


def _search_violation(lat: LatticeMeasure, r: int, K: int) -> Optional[tuple]:
    P = lat.period
    base = r if r else P
    m0 = max(0, -(-(K - base) // P))
    for j in range(64):
        k = base + P * (m0 << j)
        s, margin = lat.sign(k, exact=False)
        if s == -1:
            return k, margin
    return None


def _check_class(lat: LatticeMeasure, k_max: int) -> Verdict:
    P = lat.period
    if k_max < P:
        raise SpecError(f"k_max={k_max} must cover one full period ({P})")
    families: dict = {}
    for r in range(P):
        label = _family_label(lat, r)
        if label:
            fam = families.setdefault(label, {"denominators": list(label), "residues": []})
            fam["residues"].append(r)
    for k in range(1, k_max + 1):
        contrib = lat.contributing(k)
        if not any(t.side == DEN for t in contrib):
            continue
        s, margin = lat.sign(k)
        fam = families[_family_label(lat, k % P)]
        if fam.get("binding_margin") is None or margin < fam["binding_margin"]:
            fam["binding_margin"] = margin
            fam["binding_k"] = k
        if s == -1:
            fam["status"] = "violated"
            return Verdict.false(
                f"negative mass at lattice index {k}",
                k=k,
                t=lat.point(k),
                mass=lat.mass(k),
                irr_class=lat.irr_class,
                families=list(families.values()),
            )
    open_res = []
    for label, fam in families.items():
        fam["checked_up_to"] = k_max
        fam["tail"] = []
        for r in fam["residues"]:
            K = k_max + 1
            while True:
                outcome, info = lat.tail_bound(r, K)
                if outcome == "certified":
                    fam["tail"].append({"residue": r, "certified": True, **info})
                    break
                if outcome == "negative":
                    hit = _search_violation(lat, r, K)
                    if hit is not None:
                        fam["status"] = "violated"
                        return Verdict.false(
                            f"negative mass at lattice index {hit[0]} (tail)",
                            k=hit[0],
                            t=lat.point(hit[0]),
                            log_margin=hit[1],
                            irr_class=lat.irr_class,
                            families=list(families.values()),
                        )
                    fam["tail"].append({"residue": r, "certified": False, **info})
                    open_res.append(r)
                    break
                # open: extend the exhaustive range and retry with a larger K
                K_new = 4 * K
                if K_new > _TAIL_CAP_PERIODS * P:
                    fam["tail"].append({"residue": r, "certified": False, **info})
                    open_res.append(r)
                    break
                base = r if r else P
                start = base + P * max(0, -(-(K - base) // P))
                for k in range(start, K_new, P):
                    s, margin = lat.sign(k, exact=False)
                    if s == -1:
                        fam["status"] = "violated"
                        return Verdict.false(
                            f"negative mass at lattice index {k}",
                            k=k,
                            t=lat.point(k),
                            log_margin=margin,
                            irr_class=lat.irr_class,
                            families=list(families.values()),
                        )
                K = K_new
        fam["status"] = "certified" if all(t["certified"] for t in fam["tail"]) else "open"
    fams = list(families.values())
    if open_res:
        return Verdict.inconclusive(
            f"finite check passed up to k={k_max} but the tail is not certified",
            irr_class=lat.irr_class,
            open_residues=open_res,
            families=fams,
        )
    return Verdict.true(
        "finite check and tail certificate", irr_class=lat.irr_class, families=fams
    )


def mass_condition(spec: RatioSpec, k_max: Optional[int] = None) -> Verdict:
    """Nonnegativity of tau, class by class."""
    lats = build_lattices(spec)
    results = {}
    for cls, lat in lats.items():
        if not lat.has_denominator:
            continue
        km = k_max if k_max is not None else 64 * lat.period
        results[str(cls) if cls is not None else "rational"] = _check_class(lat, km)
    for name, v in results.items():
        if v.is_false:
            return Verdict.false(v.reason, failed_class=name, **v.witness)
    if all(v.is_true for v in results.values()):
        return Verdict.true("tau is nonnegative", classes=results)
    return Verdict.inconclusive("tail certificate missing", classes=results)


def abprime_sufficient(spec: RatioSpec) -> Verdict:
    """Closed-form check for pairwise-irrational denominators, each over one A_j."""
    if spec.classical:
        raise SpecError("abprime_sufficient applies to the q-case only")
    lats = build_lattices(spec)
    pairs = []
    for j, fb in enumerate(spec.denominator):
        lat = lats[_class_key(fb)]
        if any(t.side == DEN and t.index != j for t in lat.terms):
            return Verdict.inconclusive("denominator scales are not pairwise irrational")
        nums = [t for t in lat.terms if t.side == NUM]
        if len(nums) != 1:
            return Verdict.inconclusive(
                f"class of B{j + 1} must contain exactly one numerator scale"
            )
        tb = next(t for t in lat.terms if t.side == DEN)
        n = integer_multiple_of(Fraction(tb.d), Fraction(nums[0].d))
        if n is None:
            return Verdict.inconclusive(f"B{j + 1} is not an integer multiple of its A")
        pairs.append((j, nums[0].index, n))
    q = spec.q
    detail = []
    undecided = False
    for j, i, n in pairs:
        fa, fb = spec.numerator[i], spec.denominator[j]
        gap = fb.shift - n * fa.shift
        if gap < 0:
            return Verdict.false(
                f"b{j + 1} < n{j + 1} a{i + 1}: the mass inequality fails for large m",
                j=j + 1,
                i=i + 1,
                n=n,
            )
        ratio = Fraction(fa.weight) / Fraction(fb.weight) if is_exact(fa.weight, fb.weight) else float(fa.weight) / float(fb.weight)
        geo = sum(Fraction(q) ** r for r in range(n)) if is_exact(q) else sum(float(q) ** r for r in range(n))
        p = exact_pow(q, gap)
        if p is None:
            p = float(q) ** float(gap)
        rhs = n * geo * p
        c = compare(ratio, rhs)
        detail.append({"j": j + 1, "i": i + 1, "n": n, "lhs": ratio, "rhs": rhs})
        if c is None:
            undecided = True
        elif c < 0:
            return Verdict.false(
                f"alpha/beta below the m=1 bound for pair B{j + 1}/A{i + 1}",
                j=j + 1,
                i=i + 1,
                n=n,
                lhs=ratio,
                rhs=rhs,
            )
    if undecided:
        return Verdict.inconclusive("equality within rounding", pairs=detail)
    return Verdict.true("all pair inequalities hold", pairs=detail)


def laplace_log2(spec: RatioSpec, x: float, tol: float = 1e-14) -> float:
    """(log q)^2 sum_k e^{-x t_k} tau({t_k}), truncated once the tail is below tol."""
    qf = float(spec.q)
    lq = math.log(qf)
    total = 0.0
    for lat in build_lattices(spec).values():
        spacing = float(lat.step) * float(lat.unit)  # t_k = k * spacing * log(1/q)
        rate = x * spacing * -lq  # e^{-x t_k} = e^{-rate k}
        # n = k/d >= 1 at every atom, so mass(k) <= k * wmax
        wmax = sum(abs(float(t.weight)) / t.d for t in lat.terms) / (1.0 - qf)
        # tail sum_{k>K} k e^{-rate k} <= (K+1) e^{-rate (K+1)} / (1-e^{-rate})^2
        K = 1
        while (K + 1) * math.exp(-rate * (K + 1)) * wmax / (-math.expm1(-rate)) ** 2 > tol:
            K *= 2
        k = np.arange(1, K + 1)
        mass = np.zeros(K)
        for t in lat.terms:
            sel = k % t.d == 0
            n = (k[sel] // t.d).astype(float)
            mass[sel] += (
                t.side * n / -np.expm1(n * lq) * float(t.weight) * np.exp(n * float(t.shift) * lq - rate * k[sel])
            )
        total += math.fsum(mass)
    return lq * lq * total
