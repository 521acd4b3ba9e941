"""Problem instances and three-valued verdicts.

A :class:`RatioSpec` describes

    W(x) = theta^{-x} prod_i Gamma_q^{alpha_i}(A_i x + a_i) / prod_j Gamma_q^{beta_j}(B_j x + b_j)

with ``q`` in (0, 1) or ``q = None`` for the classical gamma function.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence

import numpy as np

from .errors import SpecError
from .exact import Number, coerce_number, is_exact, to_str


class Status(str, enum.Enum):
    CERTIFIED_TRUE = "CertifiedTrue"
    CERTIFIED_FALSE = "CertifiedFalse"
    SUPPORTED = "NumericallySupported"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self) -> str:
        return self.value


EXIT_CODES = {
    Status.CERTIFIED_TRUE: 0,
    Status.CERTIFIED_FALSE: 1,
    Status.SUPPORTED: 2,
    Status.INCONCLUSIVE: 2,
}


def jsonable(obj: Any) -> Any:
    """Convert witness payloads to JSON-native values."""
    if isinstance(obj, Verdict):
        return obj.to_dict()
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, Fraction):
        return to_str(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        if math.isnan(f):
            return "nan"
        if math.isinf(f):
            return "inf" if f > 0 else "-inf"
        return f
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [jsonable(v) for v in obj]
    return str(obj)


@dataclass(frozen=True)
class Verdict:
    status: Status
    reason: str = ""
    witness: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "status", Status(self.status))
        object.__setattr__(self, "witness", jsonable(dict(self.witness)))

    @classmethod
    def true(cls, reason: str = "", **witness) -> "Verdict":
        return cls(Status.CERTIFIED_TRUE, reason, witness)

    @classmethod
    def false(cls, reason: str = "", **witness) -> "Verdict":
        return cls(Status.CERTIFIED_FALSE, reason, witness)

    @classmethod
    def supported(cls, reason: str = "", **witness) -> "Verdict":
        return cls(Status.SUPPORTED, reason, witness)

    @classmethod
    def inconclusive(cls, reason: str = "", **witness) -> "Verdict":
        return cls(Status.INCONCLUSIVE, reason, witness)

    @property
    def is_true(self) -> bool:
        return self.status is Status.CERTIFIED_TRUE

    @property
    def is_false(self) -> bool:
        return self.status is Status.CERTIFIED_FALSE

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def to_dict(self) -> dict:
        return {"status": self.status.value, "reason": self.reason, "witness": self.witness}

    @classmethod
    def from_dict(cls, d: dict) -> "Verdict":
        return cls(Status(d["status"]), d.get("reason", ""), d.get("witness", {}))


def conjunction(parts: Sequence[tuple[str, Verdict]]) -> Verdict:
    """Combine verdicts of jointly necessary-and-sufficient conditions."""
    for name, v in parts:
        if v.is_false:
            return Verdict.false(f"{name}: {v.reason}", failed=name, **{name: v})
    witness = {name: v for name, v in parts}
    if all(v.is_true for _, v in parts):
        return Verdict.true("all conditions certified", **witness)
    if any(v.status is Status.INCONCLUSIVE for _, v in parts):
        weak = [n for n, v in parts if v.status is Status.INCONCLUSIVE]
        return Verdict.inconclusive(f"undecided: {', '.join(weak)}", **witness)
    weak = [n for n, v in parts if v.status is Status.SUPPORTED]
    return Verdict.supported(f"numerical evidence only: {', '.join(weak)}", **witness)


@dataclass(frozen=True)
class GammaFactor:
    """One factor Gamma^{weight}(scale * x + shift).

    ``irr_class`` groups factors whose scales are rational multiples of each
    other; scales in different classes are declared mutually irrational.
    Factors without a class form the default rational class and must have
    exact rational scales in the q-case.
    """

    scale: Number
    shift: Number = Fraction(0)
    weight: Number = Fraction(1)
    irr_class: Optional[str] = None

    def __post_init__(self):
        for name in ("scale", "shift", "weight"):
            object.__setattr__(self, name, coerce_number(getattr(self, name)))
        if not self.scale > 0:
            raise SpecError(f"scale must be positive, got {self.scale}")
        if not self.weight > 0:
            raise SpecError(f"weight must be positive, got {self.weight}")
        if self.shift < 0:
            raise SpecError(f"shift must be nonnegative, got {self.shift}")

    @property
    def decay(self) -> Number:
        """shift / scale, the exponential decay rate of the factor's kernel term."""
        if is_exact(self.shift, self.scale):
            return Fraction(self.shift) / Fraction(self.scale)
        return float(self.shift) / float(self.scale)

    def to_dict(self, *, scale_key="A", shift_key="a", weight_key="alpha") -> dict:
        d = {
            scale_key: _num_out(self.scale),
            shift_key: _num_out(self.shift),
            weight_key: _num_out(self.weight),
        }
        if self.irr_class is not None:
            d["irr_class"] = self.irr_class
        return d


def _num_out(v: Number):
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else to_str(v)
    return float(v)


@dataclass(frozen=True)
class RatioSpec:
    """Full problem instance. ``q is None`` selects the classical case."""

    numerator: tuple = ()
    denominator: tuple = ()
    q: Optional[Number] = None
    theta: Number = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "numerator", tuple(self.numerator))
        object.__setattr__(self, "denominator", tuple(self.denominator))
        if not self.numerator and not self.denominator:
            raise SpecError("spec needs at least one factor")
        for f in self.numerator + self.denominator:
            if not isinstance(f, GammaFactor):
                raise SpecError(f"factors must be GammaFactor instances, got {f!r}")
        if self.q is not None:
            q = coerce_number(self.q)
            if not 0 < q < 1:
                raise SpecError(f"q must lie in (0, 1), got {self.q}")
            object.__setattr__(self, "q", q)
        theta = coerce_number(self.theta)
        if not theta > 0:
            raise SpecError(f"theta must be positive, got {self.theta}")
        object.__setattr__(self, "theta", theta)

    @property
    def classical(self) -> bool:
        return self.q is None

    @property
    def p(self) -> int:
        return len(self.numerator)

    @property
    def s(self) -> int:
        return len(self.denominator)

    @classmethod
    def build(
        cls,
        A=(),
        a=None,
        alpha=None,
        B=(),
        b=None,
        beta=None,
        *,
        q=None,
        theta=1,
        num_classes=None,
        den_classes=None,
    ) -> "RatioSpec":
        """Convenience constructor from parallel parameter lists."""
        A, B = list(A), list(B)
        a = list(a) if a is not None else [0] * len(A)
        b = list(b) if b is not None else [0] * len(B)
        alpha = list(alpha) if alpha is not None else [1] * len(A)
        beta = list(beta) if beta is not None else [1] * len(B)
        nc = list(num_classes) if num_classes is not None else [None] * len(A)
        dc = list(den_classes) if den_classes is not None else [None] * len(B)
        if not (len(A) == len(a) == len(alpha) == len(nc)):
            raise SpecError("numerator parameter lists differ in length")
        if not (len(B) == len(b) == len(beta) == len(dc)):
            raise SpecError("denominator parameter lists differ in length")
        num = tuple(GammaFactor(*t) for t in zip(A, a, alpha, nc))
        den = tuple(GammaFactor(*t) for t in zip(B, b, beta, dc))
        return cls(num, den, q=q, theta=theta)

    def with_theta(self, theta) -> "RatioSpec":
        return RatioSpec(self.numerator, self.denominator, self.q, theta)

    # --- serialization -------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "q": "classical" if self.q is None else _num_out(self.q),
            "theta": _num_out(self.theta),
            "numerator": [f.to_dict() for f in self.numerator],
            "denominator": [f.to_dict() for f in self.denominator],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "RatioSpec":
        if not isinstance(d, dict):
            raise SpecError("spec must be a JSON object")
        unknown = set(d) - {"q", "theta", "numerator", "denominator", "name", "comment"}
        if unknown:
            raise SpecError(f"unknown top-level field(s): {sorted(unknown)}")
        if "q" not in d:
            raise SpecError("missing field 'q' (number in (0,1) or \"classical\")")
        q = None if d["q"] == "classical" else d["q"]
        classical = q is None

        def factors(key):
            items = d.get(key, [])
            if not isinstance(items, list):
                raise SpecError(f"'{key}' must be a list")
            out = []
            for n, item in enumerate(items):
                where = f"{key}[{n}]"
                if not isinstance(item, dict):
                    raise SpecError(f"{where}: factor must be an object")
                extra = set(item) - {"A", "a", "alpha", "irr_class"}
                if extra:
                    raise SpecError(f"{where}: unknown field(s) {sorted(extra)}")
                if "A" not in item:
                    raise SpecError(f"{where}: missing scale 'A'")
                try:
                    f = GammaFactor(
                        item["A"], item.get("a", 0), item.get("alpha", 1), item.get("irr_class")
                    )
                except SpecError as exc:
                    raise SpecError(f"{where}: {exc}") from None
                if not classical and f.irr_class is None and not is_exact(f.scale):
                    raise SpecError(
                        f"{where}: q-case scale {item['A']!r} must be an exact rational "
                        "(\"p/q\" or short decimal) unless an irr_class is declared"
                    )
                out.append(f)
            return out

        try:
            return cls(factors("numerator"), factors("denominator"), q=q, theta=d.get("theta", 1))
        except SpecError as exc:
            raise SpecError(str(exc)) from None

    @classmethod
    def from_json(cls, text: str) -> "RatioSpec":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
        return cls.from_dict(data)
