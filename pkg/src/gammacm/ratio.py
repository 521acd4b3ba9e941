"""Analytic derivatives of log W for a RatioSpec, built from (q-)polygamma sums."""

from __future__ import annotations

import math

import numpy as np

from . import specfun
from .model import RatioSpec


def _poly(spec: RatioSpec, k: int, y, cfg):
    if spec.classical:
        return specfun.polygamma(k, y)
    return specfun.polygamma_q(k, y, spec.q, cfg)


def log_derivative(spec: RatioSpec, x, order: int = 1, cfg=specfun.DEFAULT, magnitude=False):
    """d^order/dx^order log W(x), including the theta^{-x} factor.

    With ``magnitude=True`` also return the sum of absolute values of the
    individual terms, a scale for the rounding error of the result.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    scalar = np.ndim(x) == 0
    xa = np.asarray(x, dtype=float)
    total = np.zeros_like(xa)
    mag = np.zeros_like(xa)
    for sign, factors in ((1.0, spec.numerator), (-1.0, spec.denominator)):
        for f in factors:
            A = float(f.scale)
            term = float(f.weight) * A**order * _poly(spec, order - 1, A * xa + float(f.shift), cfg)
            total += sign * term
            mag += np.abs(term)
    if order == 1 and spec.classical:
        lt = math.log(float(spec.theta))
        total -= lt
        mag += abs(lt)
    if scalar:
        total, mag = float(total), float(mag)
    return (total, mag) if magnitude else total


def log_value(spec: RatioSpec, x, cfg=specfun.DEFAULT):
    """log W(x)."""
    scalar = np.ndim(x) == 0
    xa = np.asarray(x, dtype=float)
    total = np.zeros_like(xa)
    for sign, factors in ((1.0, spec.numerator), (-1.0, spec.denominator)):
        for f in factors:
            y = float(f.scale) * xa + float(f.shift)
            if spec.classical:
                lg = np.vectorize(math.lgamma)(y)
            else:
                lg = specfun.log_gamma_q(y, spec.q, cfg)
            total += sign * float(f.weight) * lg
    if spec.classical:
        total -= xa * math.log(float(spec.theta))
    return float(total) if scalar else total
