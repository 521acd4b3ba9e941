"""Golden corpus of worked examples with their expected l.c.m. verdicts."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exact import coerce_number
from .classical import VhatSpec, legendre_spec
from .model import RatioSpec, Status

T, F, I, S = Status.CERTIFIED_TRUE, Status.CERTIFIED_FALSE, Status.INCONCLUSIVE, Status.SUPPORTED


@dataclass(frozen=True)
class Entry:
    name: str
    spec: RatioSpec
    expected: Status
    note: str = ""


def example2(a=0, b=3, c=2, q="1/2") -> RatioSpec:
    """Gamma_q^5(x/6 + a) / (Gamma_q(x/3 + b) Gamma_q(x/2 + c))."""
    return RatioSpec.build(["1/6"], [a], [5], ["1/3", "1/2"], [b, c], [1, 1], q=q)


def example3(a=(0, 0, 0, 0), beta1=2, beta2=2, q="1/2") -> RatioSpec:
    """Four numerator scales in four irrationality classes, two denominators."""
    s2, s3 = math.sqrt(2), math.sqrt(3)
    a1, a2, a3, a4 = (coerce_number(v) for v in a)
    return RatioSpec.build(
        [s2 / 2, s3 / 5, math.pi, 1],
        [a1, a2, a3, a4],
        [1, 1, 1, 1],
        [s2, s3],
        [2 * a1 + 3, 5 * a2 + 5],
        [beta1, beta2],
        q=q,
        num_classes=["u", "v", "w", "z"],
        den_classes=["u", "v"],
    )


def single_pair(alpha, beta, a, b, q) -> RatioSpec:
    """Gamma_q^alpha(x + a) / Gamma_q^beta(x + b)."""
    return RatioSpec.build([1], [a], [alpha], [1], [b], [beta], q=q)


def tied_tail() -> RatioSpec:
    """All masses are nonnegative, but one residue class ties at leading order."""
    return RatioSpec.build([1, 1], [0, "1/4"], [1, 2], [2, 1], [0, "1/2"], ["1/2", 2], q="1/4")


def entries() -> list:
    out = [
        Entry("example1_q05", single_pair(1, 2, 0, 1, "1/2"), T, "alpha/beta = q^(b-a)"),
        Entry("example1_q06", single_pair(1, 2, 0, 1, "0.6"), F, "v(q) < 0"),
        Entry("example1_identical", single_pair(1, 1, "1/2", "1/2", "0.3"), T, "v = 0"),
        Entry("example2", example2(), T, "exact balance, three inequality families"),
        Entry("example2_b0c0", example2(0, 0, 0), F, "negative mass"),
        Entry("example2_a1", example2(1, 0, 0), F, "b - 2a < 0"),
        Entry("example3", example3(), T, "irrational scale classes"),
        Entry("example3_shifted", example3((0.7, 0.7, 0.7, 0.7)), T, "irrational scale classes"),
        Entry("example3_beta1_0.4", example3(beta1="0.4"), F, "sum alpha A > sum beta B"),
        Entry("support_fail", RatioSpec.build(["1/3"], [0], [1], ["1/2"], [0], [1], q="1/2"), F, "1/2 not a multiple of 1/3"),
        Entry("tied_tail", tied_tail(), I, "tail tie at leading order"),
        Entry("legendre_0.25", legendre_spec(Fraction(1, 4)), T, "Q vanishes identically"),
        Entry("legendre_0.2499", legendre_spec("0.2499"), F, "theta < rho"),
        Entry("unbalanced", RatioSpec.build([1], [0], [2], [1], [0], [1]), F, "balance"),
        Entry("p1_a0.5", VhatSpec("0.5", [1], [2]).to_ratio_spec(), T, "alpha < beta, a = 1/2"),
        Entry("p1_a0.3", VhatSpec("0.3", [1], [2]).to_ratio_spec(), F, "Q < 0 near u = 0"),
        Entry("sherman", RatioSpec.build([1, 1], [0, 1], [1, 1], [1], [2], [2]), T, "canonical Sherman matrix"),
        Entry("vhat", VhatSpec(1, [1, 2], ["1.5", "1.5"]).to_ratio_spec(), T, "majorization"),
        Entry("old_b", RatioSpec.build([1, 1], [0, 0], [2, 1], [1, 1], [1, 2], [1, 2]), T, "paired conditions"),
        Entry(
            "leblanc_johnson",
            RatioSpec.build([3, 2], ["1/2"] * 2, [1, 1], [1, 1], ["1/2"] * 2, [2, 3], theta=108),
            T,
            "ordered scales, rho = 108",
        ),
    ]
    return out


def by_name(name: str) -> Entry:
    for e in entries():
        if e.name == name:
            return e
    raise KeyError(name)
