"""Numerical falsifiers: alternating finite differences and monotonicity scans.

Nothing here proves complete monotonicity. A violation that clears the
rounding budget is reported as a counterexample; otherwise the verdict is
NumericallySupported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import specfun
from .errors import SpecError
from .exact import coerce_number, compare
from .model import RatioSpec, Verdict, conjunction
from .ratio import log_derivative

EPS = np.finfo(float).eps


def _default_grid():
    return tuple(np.geomspace(0.05, 50.0, 60))


@dataclass(frozen=True)
class DiffTestConfig:
    max_order: int = 8
    steps: tuple = (0.05, 0.1, 0.25, 0.5)
    x_grid: tuple = field(default_factory=_default_grid)
    viol_tol: float = 1e-9
    # relative accuracy of the function values being differenced
    noise_rel: float = 1e-13

    def __post_init__(self):
        if not 1 <= self.max_order <= 12:
            raise SpecError("max_order must lie in 1..12")
        if not self.steps or any(not h > 0 for h in self.steps):
            raise SpecError("steps must be positive")
        if not self.x_grid or any(not x > 0 for x in self.x_grid):
            raise SpecError("x_grid must be positive")
        object.__setattr__(self, "steps", tuple(float(h) for h in self.steps))
        object.__setattr__(self, "x_grid", tuple(float(x) for x in self.x_grid))


DEFAULT = DiffTestConfig()


def _evaluate(f, pts):
    try:
        out = np.asarray(f(pts), dtype=float)
        if out.shape == pts.shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.vectorize(lambda t: float(f(t)))(pts)


def cm_test(f: Callable, cfg: DiffTestConfig = DEFAULT, magnitude: Optional[Callable] = None, min_order: int = 0) -> Verdict:
    """Check (-1)^k Delta_h^k f(x) >= 0 for k = min_order..max_order on the grid.

    ``magnitude(x)`` may return a scale for the rounding error of f(x), for
    instance the sum of absolute values of the terms that make up f. The
    rounding budget at order k is 2^k * noise * max magnitude on the stencil.
    """
    x = np.asarray(cfg.x_grid, dtype=float)
    K = cfg.max_order
    noise = max(cfg.noise_rel, EPS)
    checked = 0
    for h in cfg.steps:
        pts = x[:, None] + h * np.arange(K + 1)[None, :]
        vals = _evaluate(f, pts)
        mags = np.abs(vals) if magnitude is None else np.maximum(np.abs(vals), _evaluate(magnitude, pts))
        if not np.all(np.isfinite(vals)):
            bad = np.argwhere(~np.isfinite(vals))[0]
            raise ArithmeticError(f"f is not finite at x = {pts[tuple(bad)]!r}")
        diff = vals
        for k in range(K + 1):
            if k >= min_order:
                M = np.max(mags[:, : k + 1], axis=1)
                budget = (2.0**k * noise + cfg.viol_tol) * np.maximum(M, 1e-300)
                signed = (-1) ** k * diff[:, 0]
                viol = signed < -budget
                checked += len(x)
                if np.any(viol):
                    i = int(np.argmax(viol))
                    return Verdict.false(
                        f"alternating difference of order {k} is negative",
                        x=float(x[i]),
                        h=float(h),
                        k=k,
                        value=float(signed[i]),
                        budget=float(budget[i]),
                    )
            diff = np.diff(diff, axis=1)
    return Verdict.supported(
        "no sign violation found",
        max_order=K,
        steps=list(cfg.steps),
        x_range=[float(x[0]), float(x[-1])],
        stencils=checked,
    )


def _minus_log_derivative(spec: RatioSpec, cfg_eval=specfun.DEFAULT):
    def g(x):
        return -log_derivative(spec, x, 1, cfg_eval)

    def mag(x):
        return log_derivative(spec, x, 1, cfg_eval, magnitude=True)[1]

    return g, mag


def lcm_oracle(spec: RatioSpec, cfg: DiffTestConfig = DEFAULT) -> Verdict:
    """-(log f)' must be nonnegative and completely monotonic."""
    g, mag = _minus_log_derivative(spec)
    return cm_test(g, cfg, magnitude=mag)


def bernstein_oracle(spec: RatioSpec, cfg: DiffTestConfig = DEFAULT) -> Verdict:
    """(log f)' must be nonnegative with completely monotonic derivative."""
    g, mag = _minus_log_derivative(spec)
    x = np.asarray(cfg.x_grid, dtype=float)
    vals = -np.asarray(g(x))
    budget = (cfg.noise_rel + cfg.viol_tol) * np.maximum(np.asarray(mag(x)), 1e-300)
    neg = vals < -budget
    if np.any(neg):
        i = int(np.argmax(neg))
        return Verdict.false("(log f)' is negative", x=float(x[i]), k=0, value=float(vals[i]))
    # (-1)^k Delta^k (-(log f)') >= 0 for k >= 1 is the c.m. test for (log f)''
    return cm_test(g, cfg, magnitude=mag, min_order=1)


# --- monotonicity applications ---------------------------------------------------


def _lgamma(x):
    return np.vectorize(math.lgamma)(np.asarray(x, dtype=float))


def gamma_ratio_F(a, X, Y, alphas, betas):
    """prod_i Gamma(A_i X + a) Gamma(B_i Y + a) / (Gamma(A_i Y + a) Gamma(B_i X + a)), A = 1/alpha, B = 1/beta."""
    return np.exp(log_gamma_ratio_F(a, X, Y, alphas, betas))


def log_gamma_ratio_F(a, X, Y, alphas, betas):
    scalar = np.ndim(a) == 0
    aa = np.asarray(a, dtype=float)
    total = np.zeros_like(aa)
    for al, be in zip(alphas, betas):
        A, B = 1.0 / float(al), 1.0 / float(be)
        total += _lgamma(A * X + aa) + _lgamma(B * Y + aa) - _lgamma(A * Y + aa) - _lgamma(B * X + aa)
    return float(total) if scalar else total


def majorization_hypotheses(alphas, betas) -> Optional[str]:
    """None if sorted alpha, beta satisfy the partial-sum conditions, else a message."""
    if len(alphas) != len(betas) or not alphas:
        return "alphas and betas must be nonempty and of equal length"
    if any(not coerce_number(v) > 0 for v in list(alphas) + list(betas)):
        return "alphas and betas must be positive"
    al = sorted(coerce_number(v) for v in alphas)
    be = sorted(coerce_number(v) for v in betas)
    sa = sb = 0
    for k, (x, y) in enumerate(zip(al, be), start=1):
        sa, sb = sa + x, sb + y
        c = compare(sb, sa)
        if c is not None and c < 0:
            return f"partial sum {k}: sum alpha = {float(sa)} > sum beta = {float(sb)}"
    return None


def _decrease_verdict(a, dlog, mag, strict_rel, what):
    tol = strict_rel * np.maximum(mag, 1e-300)
    up = dlog > tol
    if np.any(up):
        i = int(np.argmax(up))
        return Verdict.false(f"{what} increases at a = {a[i]:.6g}", a=float(a[i]), derivative=float(dlog[i]))
    strict = bool(np.all(dlog < -tol))
    const = bool(np.all(np.abs(dlog) <= tol))
    reason = "strictly decreasing on the grid" if strict else ("constant on the grid" if const else "nonincreasing on the grid")
    return Verdict.supported(
        reason, strict=strict, constant=const, a_range=[float(a[0]), float(a[-1])], points=len(a),
        max_derivative=float(np.max(dlog)),
    )


def gamma_ratio_decrease(X, Y, alphas, betas, a_grid=None, strict_rel: float = 1e-12) -> Verdict:
    """Sample d/da log F < 0 on a in [1, 10]; the hypotheses are enforced."""
    X, Y = float(X), float(Y)
    if not Y > X > 0:
        raise SpecError("need Y > X > 0")
    msg = majorization_hypotheses(alphas, betas)
    if msg:
        raise SpecError(f"majorization hypotheses fail: {msg}")
    a = np.linspace(1.0, 10.0, 64) if a_grid is None else np.asarray(a_grid, dtype=float)
    d = np.zeros_like(a)
    mag = np.zeros_like(a)
    for al, be in zip(alphas, betas):
        A, B = 1.0 / float(al), 1.0 / float(be)
        for s, arg in ((1, A * X), (-1, B * X), (-1, A * Y), (1, B * Y)):
            t = specfun.digamma(arg + a)
            d += s * t
            mag += np.abs(t)
    return _decrease_verdict(a, d, mag, strict_rel, "F")


def rising_factorial_F(a, delta, m: int, n: int):
    """(a + delta m)_m / (a + delta n)_n."""
    _check_rising(delta, m, n)
    aa = np.asarray(a, dtype=float)
    num = np.ones_like(aa)
    den = np.ones_like(aa)
    for k in range(m):
        num = num * (aa + delta * m + k)
    for k in range(n):
        den = den * (aa + delta * n + k)
    out = num / den
    return float(out) if np.ndim(a) == 0 else out


def _check_rising(delta, m, n):
    if not (isinstance(m, (int, np.integer)) and isinstance(n, (int, np.integer))):
        raise SpecError("m and n must be integers")
    if not n > m >= 1:
        raise SpecError("need integers n > m >= 1")
    if not delta > 0:
        raise SpecError("delta must be positive")


def rising_factorial_decrease(delta, m: int, n: int, a_grid=None, strict_rel: float = 1e-12) -> Verdict:
    _check_rising(delta, m, n)
    a = np.linspace(0.5, 10.0, 64) if a_grid is None else np.asarray(a_grid, dtype=float)
    d = np.zeros_like(a)
    mag = np.zeros_like(a)
    for k in range(m):
        t = 1.0 / (a + delta * m + k)
        d += t
        mag += t
    for k in range(n):
        t = 1.0 / (a + delta * n + k)
        d -= t
        mag += t
    return _decrease_verdict(a, d, mag, strict_rel, "F")


def p2_conditions(mu: Sequence, nu: Sequence) -> Verdict:
    """Conditions (a)-(d) for the eight-gamma ratio in mu, nu to decrease on [1, inf)."""
    mu = [coerce_number(v) for v in mu]
    nu = [coerce_number(v) for v in nu]
    if len(mu) != 4 or len(nu) != 4:
        raise SpecError("mu and nu must have four entries each")
    if any(not v > 0 for v in mu + nu):
        return Verdict.inconclusive("(a) fails: entries must be positive", failed="(a)")
    ratios = [mu[2] / mu[0], mu[3] / mu[1], nu[0] / nu[2], nu[1] / nu[3]]
    r = ratios[0]
    if any(compare(t, r) not in (0, None) for t in ratios[1:]):
        return Verdict.inconclusive("(b) fails: ratios differ", failed="(b)", ratios=ratios)
    if not compare(r, 1) == 1:
        return Verdict.inconclusive("(b) fails: common ratio must exceed 1", failed="(b)", ratios=ratios)
    if mu[1] > mu[0] or nu[1] > nu[0]:
        return Verdict.inconclusive("(c) fails", failed="(c)")
    inv = 1 / mu[0] + 1 / mu[1] - 1 / nu[2] - 1 / nu[3]
    if nu[0] > mu[2] or compare(inv, 0, scale=float(1 / nu[2] + 1 / nu[3])) == 1:
        return Verdict.inconclusive("(d) fails", failed="(d)")
    X, Y = 1, r
    A = [mu[0] / X, mu[1] / X]
    B = [nu[2] / X, nu[3] / X]
    return Verdict.true(
        "conditions (a)-(d) hold",
        X=X, Y=Y, A=A, B=B, alphas=[1 / v for v in A], betas=[1 / v for v in B],
    )


def cross_validate(certificate: Verdict, oracle: Verdict) -> Optional[str]:
    """Describe a contradiction between an exact certificate and the oracle, if any."""
    if certificate.is_true and oracle.is_false:
        return "certificate says true, oracle found a violation"
    return None


__all__ = [
    "DEFAULT",
    "DiffTestConfig",
    "bernstein_oracle",
    "cm_test",
    "conjunction",
    "cross_validate",
    "gamma_ratio_F",
    "gamma_ratio_decrease",
    "lcm_oracle",
    "log_gamma_ratio_F",
    "majorization_hypotheses",
    "p2_conditions",
    "rising_factorial_F",
    "rising_factorial_decrease",
]
