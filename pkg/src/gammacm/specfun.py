"""Classical and q-deformed gamma, digamma and polygamma functions.

All functions accept scalars or numpy arrays and return the same shape
(a Python float for scalar input). Series are truncated using explicit
geometric tail bounds rather than a "term is small" heuristic.

The q-functions are summed in the shifted form

    sum_{m>=0} Li_{-k}(q^{x+m}),   Li_{-k}(z) = sum_{n>=1} n^k z^n,

which equals the Lambert series ``sum_n n^k q^{nx} / (1 - q^n)`` but converges
like ``q^m`` regardless of ``x``. The Lambert form is kept as an independent
route (``*_lambert``) for cross-checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainError, PrecisionError


@dataclass(frozen=True)
class EvalConfig:
    rel_tol: float = 1e-14
    max_terms: int = 10**6

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")


DEFAULT = EvalConfig()

# element budget for one vectorized chunk of series terms
_CHUNK_ELEMS = 1 << 21


def _check_q(q) -> float:
    qf = float(q)
    if not 0.0 < qf < 1.0:
        raise DomainError(f"q must lie in (0, 1), got {q!r}")
    return qf


def _positive_array(x, name="x"):
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError(f"{name} must be positive")
    return arr


def _out(arr, scalar):
    return float(arr) if scalar else arr


@lru_cache(maxsize=None)
def _eulerian(k: int) -> tuple:
    """Coefficients of the Eulerian polynomial E_k (ascending powers)."""
    row = [1]
    for n in range(1, k + 1):
        new = [0] * n
        for m in range(n):
            left = (n - m) * row[m - 1] if m >= 1 else 0
            right = (m + 1) * row[m] if m < len(row) else 0
            new[m] = left + right
        row = new
    return tuple(row)


def _li_neg(k: int, z, omz):
    """Li_{-k}(z) = z E_k(z) / (1-z)^{k+1}, with ``omz`` = 1 - z computed accurately."""
    coeffs = _eulerian(k)
    poly = np.polyval(coeffs[::-1], z)
    return z * poly / omz ** (k + 1)


def _shifted_series(k: int, x: np.ndarray, q: float, cfg: EvalConfig) -> np.ndarray:
    """sum_{m>=0} Li_{-k}(q^{x+m}) with the tail bound term*q/(1-q)."""
    logq = math.log(q)
    flat = x.reshape(-1)
    total = np.zeros_like(flat)
    done = np.zeros(flat.shape, dtype=bool)
    tail_factor = q / (1.0 - q)
    m0 = 0
    chunk = 64
    while not done.all():
        idx = np.nonzero(~done)[0]
        xs = flat[idx]
        m = np.arange(m0, m0 + chunk, dtype=float)
        y = (xs[:, None] + m[None, :]) * logq
        terms = _li_neg(k, np.exp(y), -np.expm1(y))
        total[idx] += terms.sum(axis=1)
        tail = terms[:, -1] * tail_factor
        finished = tail <= cfg.rel_tol * np.abs(total[idx])
        done[idx[finished]] = True
        m0 += chunk
        if m0 >= cfg.max_terms and not done.all():
            raise PrecisionError(
                f"q-series did not converge within {cfg.max_terms} terms (q={q})"
            )
        chunk = int(min(max(64, 2 * chunk), max(64, _CHUNK_ELEMS // max(1, len(idx)))))
    return total.reshape(x.shape)


def log_gamma_q(x, q, cfg: EvalConfig = DEFAULT):
    """log Gamma_q(x) from the infinite product definition."""
    scalar = np.ndim(x) == 0
    qf = _check_q(q)
    xa = _positive_array(x)
    logq = math.log(qf)
    flat = xa.reshape(-1)
    total = np.zeros_like(flat)
    done = np.zeros(flat.shape, dtype=bool)
    m0 = 0
    chunk = 64
    while not done.all():
        idx = np.nonzero(~done)[0]
        xs = flat[idx]
        n = np.arange(m0, m0 + chunk, dtype=float)
        # same formula on both sides so that integer x cancels exactly
        terms = np.log(-np.expm1((n[None, :] + 1.0) * logq)) - np.log(
            -np.expm1((xs[:, None] + n[None, :]) * logq)
        )
        total[idx] += terms.sum(axis=1)
        # |term_n| <= q^n |q - q^x| / (1 - q^{n + min(1,x)}) for all later n
        big_n = m0 + chunk
        lo = np.minimum(1.0, xs)
        tail = (
            qf**big_n
            * np.abs(qf - np.exp(xs * logq))
            / ((1.0 - qf) * -np.expm1((big_n + lo) * logq))
        )
        finished = tail <= cfg.rel_tol
        done[idx[finished]] = True
        m0 = big_n
        if m0 >= cfg.max_terms and not done.all():
            raise PrecisionError(f"q-gamma product did not converge (q={q})")
        chunk = int(min(max(64, 2 * chunk), max(64, _CHUNK_ELEMS // max(1, len(idx)))))
    out = (1.0 - xa) * math.log1p(-qf) + total.reshape(xa.shape)
    return _out(out, scalar)


def gamma_q(x, q, cfg: EvalConfig = DEFAULT):
    """Gamma_q(x) = (1-q)^{1-x} prod_{n>=0} (1-q^{n+1})/(1-q^{x+n})."""
    scalar = np.ndim(x) == 0
    out = np.exp(log_gamma_q(x, q, cfg))
    return _out(out, scalar)


def digamma_q(x, q, cfg: EvalConfig = DEFAULT):
    """psi_q(x) = -log(1-q) + log(q) sum_{n>=1} q^{nx}/(1-q^n)."""
    scalar = np.ndim(x) == 0
    qf = _check_q(q)
    xa = _positive_array(x)
    s = _shifted_series(0, xa, qf, cfg)
    return _out(-math.log1p(-qf) + math.log(qf) * s, scalar)


def polygamma_q(k: int, x, q, cfg: EvalConfig = DEFAULT):
    """k-th derivative of psi_q: (log q)^{k+1} sum_{n>=1} n^k q^{nx}/(1-q^n)."""
    if k == 0:
        return digamma_q(x, q, cfg)
    if int(k) != k or k < 0:
        raise DomainError(f"order k must be a nonnegative integer, got {k!r}")
    scalar = np.ndim(x) == 0
    qf = _check_q(q)
    xa = _positive_array(x)
    s = _shifted_series(int(k), xa, qf, cfg)
    return _out(math.log(qf) ** (k + 1) * s, scalar)


def _lambert(k: int, x: float, q: float, cfg: EvalConfig) -> float:
    terms = []
    rough = 0.0
    logq = math.log(q)
    n = 1
    while True:
        t = n**k * math.exp(n * x * logq) / -math.expm1(n * logq)
        terms.append(t)
        rough += t
        # for n' > n: term ratio <= ((n+1)/n)^k q^x
        r = ((n + 1) / n) ** k * math.exp(x * logq)
        if r < 1.0 and t * r / (1.0 - r) <= 0.5 * cfg.rel_tol * abs(rough):
            s = math.fsum(terms)
            if t * r / (1.0 - r) <= cfg.rel_tol * abs(s):
                return s
        n += 1
        if n > cfg.max_terms:
            raise PrecisionError(f"Lambert series did not converge (x={x}, q={q})")


def digamma_q_lambert(x: float, q, cfg: EvalConfig = DEFAULT) -> float:
    """psi_q via the second (Lambert) series, summed term by term."""
    qf = _check_q(q)
    if not x > 0:
        raise DomainError("x must be positive")
    return -math.log1p(-qf) + math.log(qf) * _lambert(0, float(x), qf, cfg)


def digamma_q_first_series(x: float, q, cfg: EvalConfig = DEFAULT) -> float:
    """psi_q via -log(1-q) + log(q) sum_{n>=0} q^{n+x}/(1-q^{n+x}), term by term."""
    qf = _check_q(q)
    if not x > 0:
        raise DomainError("x must be positive")
    logq = math.log(qf)
    terms = []
    rough = 0.0
    n = 0
    while True:
        y = (n + x) * logq
        t = math.exp(y) / -math.expm1(y)
        terms.append(t)
        rough += t
        if t * qf / (1 - qf) <= 0.5 * cfg.rel_tol * rough and t * qf / (1 - qf) <= cfg.rel_tol * math.fsum(terms):
            break
        n += 1
        if n > cfg.max_terms:
            raise PrecisionError("first q-digamma series did not converge")
    return -math.log1p(-qf) + logq * math.fsum(terms)


def polygamma_q_lambert(k: int, x: float, q, cfg: EvalConfig = DEFAULT) -> float:
    qf = _check_q(q)
    if not x > 0:
        raise DomainError("x must be positive")
    return math.log(qf) ** (k + 1) * _lambert(int(k), float(x), qf, cfg)


# --- classical functions -------------------------------------------------


@lru_cache(maxsize=None)
def _bernoulli_even(count: int) -> tuple:
    """B_2, B_4, ..., B_{2*count} as floats (exact recurrence in Fractions)."""
    b = [Fraction(1)]
    for m in range(1, 2 * count + 1):
        b.append(-sum(math.comb(m + 1, j) * b[j] for j in range(m)) / Fraction(m + 1))
    return tuple(float(b[2 * j]) for j in range(1, count + 1))


_N_BERN = 14


def digamma(x):
    """Classical psi(x) for x > 0: upward recurrence to x >= 10, then asymptotics."""
    scalar = np.ndim(x) == 0
    xa = _positive_array(x).astype(float)
    y = xa.copy()
    acc = np.zeros_like(y)
    while True:
        low = y < 10.0
        if not low.any():
            break
        acc[low] -= 1.0 / y[low]
        y[low] += 1.0
    inv2 = 1.0 / (y * y)
    series = np.zeros_like(y)
    power = np.ones_like(y)
    for j, b2j in enumerate(_bernoulli_even(_N_BERN), start=1):
        power = power * inv2
        series += b2j / (2 * j) * power
    out = acc + np.log(y) - 0.5 / y - series
    return _out(out, scalar)


def polygamma(k: int, x):
    """Classical psi^{(k)}(x) for integer k >= 0 and x > 0."""
    if k == 0:
        return digamma(x)
    if int(k) != k or k < 0:
        raise DomainError(f"order k must be a nonnegative integer, got {k!r}")
    k = int(k)
    scalar = np.ndim(x) == 0
    xa = _positive_array(x).astype(float)
    threshold = 12.0 + 2.0 * k
    sign = -1.0 if k % 2 == 0 else 1.0  # (-1)^{k+1}
    kfact = math.factorial(k)
    y = xa.copy()
    acc = np.zeros_like(y)
    while True:
        low = y < threshold
        if not low.any():
            break
        # psi^(k)(y) = psi^(k)(y+1) - (-1)^k k! / y^{k+1}
        acc[low] += sign * kfact / y[low] ** (k + 1)
        y[low] += 1.0
    series = math.factorial(k - 1) / y**k + kfact / (2.0 * y ** (k + 1))
    for j, b2j in enumerate(_bernoulli_even(_N_BERN), start=1):
        coef = b2j * math.factorial(2 * j + k - 1) / math.factorial(2 * j)
        series = series + coef / y ** (2 * j + k)
    return _out(acc + sign * series, scalar)


def phi(delta, gamma, t):
    """t e^{-delta t} / (1 - e^{-gamma t}), equal to 1/gamma at t = 0."""
    if not (delta > 0 and gamma > 0):
        raise DomainError("delta and gamma must be positive")
    scalar = np.ndim(t) == 0
    ta = np.asarray(t, dtype=float)
    if np.any(ta < 0):
        raise DomainError("t must be nonnegative")
    z = gamma * ta
    small = z < 1e-4
    out = np.empty_like(ta)
    zs = z[small]
    # t/(1-e^{-z}) = (1/gamma)(1 + z/2 + z^2/12 - z^4/720 + ...)
    out[small] = (1.0 + zs / 2 + zs * zs / 12 - zs**4 / 720) / gamma * np.exp(-delta * ta[small])
    tl = ta[~small]
    out[~small] = tl * np.exp(-delta * tl) / -np.expm1(-gamma * tl)
    return _out(out, scalar)


def log_bernoulli_gf(z):
    """log(z / (1 - e^{-z})) for z >= 0, accurate near z = 0."""
    scalar = np.ndim(z) == 0
    za = np.asarray(z, dtype=float)
    out = np.empty_like(za)
    small = za < 0.05
    s = za[small]
    s2 = s * s
    out[small] = s / 2 - s2 / 24 + s2 * s2 / 2880 - s2**3 / 181440 + s2**4 / 9676800
    big = za[~small]
    out[~small] = np.log(big) - np.log(-np.expm1(-big))
    return _out(out, scalar)
