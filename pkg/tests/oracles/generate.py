"""Regenerate frozen.json from independent high-precision references.

Run from the repository root: python3 tests/oracles/generate.py
Nothing in here imports gammacm.
"""

import json
from pathlib import Path

import mpmath as mp

mp.mp.dps = 50


def qpsi_series(x, q):
    # psi_q(x) = -log(1-q) + log(q) sum_{n>=1} q^{nx}/(1-q^n)
    if q < 0.99:
        return -mp.log(1 - q) + mp.log(q) * mp.nsum(lambda n: q ** (n * x) / (1 - q**n), [1, mp.inf])
    # nsum extrapolation is unreliable this close to 1, so add terms directly
    with mp.workdps(30):
        s, qn, n = mp.mpf(0), mp.mpf(1), 0
        while True:
            n += 1
            qn *= q
            t = qn**x / (1 - qn)
            s += t
            if t < mp.mpf(10) ** -28:
                return -mp.log(1 - q) + mp.log(q) * s


def qpoly(k, x, q):
    return mp.log(q) ** (k + 1) * mp.nsum(lambda n: n**k * q ** (n * x) / (1 - q**n), [1, mp.inf])


def log_qgamma(x, q):
    return mp.log(mp.qgamma(x, q))


def f(v):
    return float(v)


out = {}
out["gamma_q"] = [[x, q, f(mp.qgamma(x, q))] for x, q in [(1, 0.5), (2, 0.5), (3, 0.5), (0.5, 0.3), (2.7, 0.9), (0.1, 0.05), (7.5, 0.6)]]
out["digamma_q"] = [
    [x, q, f(qpsi_series(mp.mpf(x), mp.mpf(q)))]
    for x, q in [(1.7, 0.3), (2, 0.5), (3, 0.5), (0.2, 0.8), (5, 0.95), (2, 0.9999)]
]
# the logarithmic derivative of mpmath's qgamma, an unrelated route
out["digamma_q_from_qgamma"] = [[x, q, f(mp.diff(lambda t: log_qgamma(t, q), x))] for x, q in [(1.7, 0.3), (0.6, 0.7)]]
out["polygamma_q"] = [
    [k, x, q, f(qpoly(k, mp.mpf(x), mp.mpf(q)))] for k, x, q in [(1, 2, 0.5), (1, 1.3, 0.4), (2, 1.3, 0.4), (3, 0.7, 0.9)]
]
out["digamma"] = [[x, f(mp.digamma(x))] for x in [1, 2, 0.5, 0.01, 3.3, 25, 1000]]
out["polygamma"] = [[k, x, f(mp.polygamma(k, x))] for k, x in [(1, 1), (1, 0.3), (2, 1.5), (3, 7), (5, 0.9), (1, 40)]]
# trigamma(1) by quadrature of t e^{-t}/(1-e^{-t})
out["trigamma_1_quadrature"] = f(mp.quad(lambda t: t * mp.exp(-t) / (1 - mp.exp(-t)), [0, mp.inf]))
out["phi"] = [[d, g, t, f(t * mp.exp(-d * t) / (1 - mp.exp(-g * t)) if t else 1 / mp.mpf(g))] for d, g, t in [(1, 1, 1), (1, 1, 0), (2, 1, 0), (3, 2, 1e-6), (0.5, 0.25, 10)]]


def Q(A, a, al, B, b, be, u):
    u = mp.mpf(u)
    s = sum(w * mp.exp(-s_ * u / S) / (1 - mp.exp(-u / S)) for S, s_, w in zip(A, a, al))
    return s - sum(w * mp.exp(-s_ * u / S) / (1 - mp.exp(-u / S)) for S, s_, w in zip(B, b, be))


out["Q"] = [
    ["pair_a0_b1", u, f(Q([1], [0], [1], [1], [1], [1], u))] for u in (0.1, 1, 10)
] + [
    ["p1_1_2_0.3", u, f(Q([1], [mp.mpf("0.3")], [1], [mp.mpf(1) / 2], [mp.mpf("0.3")], [2], u))] for u in (1e-3, 0.5, 3, 30)
] + [
    ["mixed", u, f(Q([1, 3], [mp.mpf("0.2"), 2], [2, 1], [2, 1], [1, mp.mpf("1.5")], [1, 3], u))] for u in (1e-5, 0.7, 4, 60)
]
# rising factorial ratio (a + m)_m / (a + 2)_2 with delta = 1, m = 1, n = 2
out["rising"] = [[a, f(mp.rf(a + 1, 1) / mp.rf(a + 2, 2))] for a in (0.5, 1, 2.5)]
# Laplace check for Example 2: (log W_q)'' at x in {1, 2, 5} straight from the q-polygamma series
q = mp.mpf(1) / 2


def logW2(x):
    return (5 * qpoly(1, x / 6, q) / 36 - qpoly(1, x / 3 + 3, q) / 9 - qpoly(1, x / 2 + 2, q) / 4)


out["example2_logW2"] = [[x, f(logW2(mp.mpf(x)))] for x in (1, 2, 5)]
# Legendre duplication: Gamma(x)Gamma(x+1/2)/Gamma(2x) = 2^{1-2x} sqrt(pi)
out["legendre_log_value"] = [[x, f(mp.log(mp.gamma(x) * mp.gamma(x + 0.5) / mp.gamma(2 * x)))] for x in (0.5, 1, 3)]

path = Path(__file__).with_name("frozen.json")
path.write_text(json.dumps(out, indent=1) + "\n")
print(f"wrote {path}")
