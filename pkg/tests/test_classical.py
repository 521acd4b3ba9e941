import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gammacm import classical, corpus, ratio
from gammacm.classical import VhatSpec
from gammacm.errors import DomainError, SpecError
from gammacm.model import RatioSpec, Status

quad = pytest.importorskip("scipy.integrate").quad

Q_SPECS = {
    "pair_a0_b1": RatioSpec.build([1], [0], [1], [1], [1], [1]),
    "p1_1_2_0.3": classical.p1_spec(1, 2, "0.3").with_theta(1),
    "mixed": RatioSpec.build([1, 3], ["0.2", 2], [2, 1], [2, 1], [1, "1.5"], [1, 3]),
}


def test_kernel_matches_reference(frozen):
    for name, u, want in frozen["Q"]:
        got = classical.q_kernel(Q_SPECS[name], u)
        assert got == pytest.approx(want, rel=1e-11, abs=1e-14), (name, u)


def test_kernel_of_unit_pair_is_one():
    u = np.geomspace(1e-6, 100, 50)
    np.testing.assert_allclose(classical.q_kernel(Q_SPECS["pair_a0_b1"], u), 1.0, rtol=1e-12)


def test_kernel_rejects_nonpositive_u():
    with pytest.raises(DomainError):
        classical.q_kernel(Q_SPECS["mixed"], 0.0)


def test_legendre_entropy_is_exactly_a_quarter():
    spec = classical.legendre_spec()
    assert classical.entropy_rho(spec) == 0.25
    assert abs(classical.log_entropy_rho(spec) - math.log(0.25)) < 1e-14
    assert classical.check_lcm_classical(spec).is_true
    assert classical.check_lcm_classical(classical.legendre_spec("0.2499")).is_false
    red = classical.kernel_reduction(spec)
    assert red.is_true and red.witness["terms"] == []


def test_legendre_log_value(frozen):
    spec = classical.legendre_spec(1)
    for x, want in frozen["legendre_log_value"]:
        assert ratio.log_value(spec, x) == pytest.approx(want, abs=1e-13)


def test_necessary_conditions_report_parts():
    v = classical.necessary_conditions(corpus.by_name("unbalanced").spec)
    assert v.is_false and v.witness["failed"] == "balance"
    # (a): numerator shift too large
    v = classical.necessary_conditions(RatioSpec.build([1], [2], [1], [1], [1], [1]))
    assert v.is_false and v.witness["failed"] == "(a)"
    # (b): denominator decays more slowly than the numerator
    v = classical.necessary_conditions(RatioSpec.build([1, 1], [1, 1], [1, 1], [1, 1], ["0.5", 5], [1, 1]))
    assert v.is_false and v.witness["failed"] == "(b)"


def test_sufficient_families_on_corpus():
    assert classical.sufficient_old(corpus.by_name("old_b").spec).is_true
    assert classical.sherman_sufficient_auto(corpus.by_name("sherman").spec).is_true
    assert classical.vhat_check(corpus.by_name("vhat").spec).is_true
    lj = corpus.by_name("leblanc_johnson").spec
    assert classical.entropy_rho(lj) == 108.0
    assert classical.leblanc_johnson_check(lj).is_true
    assert classical.leblanc_johnson_check(lj.with_theta(107)).status is Status.INCONCLUSIVE


def test_stochastic_matrix_validation():
    with pytest.raises(SpecError):
        classical.StochasticMatrix([[0.5, 0.4]])
    with pytest.raises(SpecError):
        classical.StochasticMatrix([[1.5, -0.5]])
    H = classical.sherman_simplified_matrix([1, 3], [2, 2])
    assert H.to_list() == [[0.25, 0.75], [0.25, 0.75]]


def test_sherman_with_explicit_matrix():
    spec = corpus.by_name("sherman").spec
    v = classical.sherman_sufficient(spec, [[Fraction(1, 2), Fraction(1, 2)]])
    assert v.is_true and v.witness["probes_ok"]
    with pytest.raises(SpecError):
        classical.sherman_sufficient(spec, [[1]])


def test_p1_exact_table():
    assert classical.p1_exact(1, 2, "0.5").is_true
    assert classical.p1_exact(1, 2, "0.3").is_false
    assert classical.p1_exact(2, 2, 0).is_true
    assert classical.p1_exact(2, 1, 1).is_false


def test_p1_at_zero_shift_is_stricter_than_the_kernel():
    """With a = 0 and alpha > beta, Q_1 stays positive but the Bernstein part fails."""
    assert classical.p1_exact(1, "0.5", 0).is_false
    u, vals = classical.q_grid(classical.p1_spec(1, "0.5", 0))
    assert vals.min() > 0


def test_vhat_theta():
    v = VhatSpec(1, [1, 2], ["1.5", "1.5"])
    assert v.to_ratio_spec().theta == Fraction(9, 8)
    assert v.to_ratio_spec(geometric=False).theta == 1


def test_lj_needs_common_shift():
    with pytest.raises(SpecError):
        classical.leblanc_johnson_check(RatioSpec.build([1], [0], [1], [1], [1], [1]))


def test_grid_scan_never_certifies():
    v = classical.q_nonneg(Q_SPECS["pair_a0_b1"])
    assert v.status is Status.SUPPORTED


def test_asymptotics_at_zero():
    spec = Q_SPECS["mixed"]
    lead = float(sum(f.weight * f.scale for f in spec.numerator) - sum(f.weight * f.scale for f in spec.denominator))
    u = 1e-6
    assert u * classical.q_kernel(spec, u) == pytest.approx(lead, abs=1e-4 * max(1.0, abs(lead)))


def laplace(fun, x):
    """int_0^inf e^{-x u} fun(u) du, split so quad sees the decay."""
    f = lambda u: math.exp(-x * u) * fun(u)
    return quad(f, 0, 1, limit=200, epsabs=1e-13, epsrel=1e-12)[0] + quad(f, 1, np.inf, limit=200, epsabs=1e-13, epsrel=1e-12)[0]


CERTIFIED = ["legendre_0.25", "p1_a0.5", "sherman", "vhat", "old_b", "leblanc_johnson"]


@pytest.mark.parametrize("name", CERTIFIED)
def test_representations_by_quadrature(name):
    spec = corpus.by_name(name).spec
    assert classical.check_lcm_classical(spec).is_true
    kern = lambda u: classical.q_kernel(spec, u) if u > 0 else classical.q_kernel(spec, 1e-300)
    shift = math.log(float(spec.theta) / classical.entropy_rho(spec))
    for x in (0.5, 1.0, 3.0):
        first = laplace(kern, x) + shift
        assert first == pytest.approx(-ratio.log_derivative(spec, x, 1), abs=1e-7)
        second = laplace(lambda u: u * kern(u), x)
        assert second == pytest.approx(ratio.log_derivative(spec, x, 2), abs=1e-7)


def random_spec(draw, classical_weights=True):
    p = draw(st.integers(1, 3))
    s = draw(st.integers(1, 3))
    scale = st.sampled_from([Fraction(1, 3), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(3)])
    shift = st.sampled_from([Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(3)])
    weight = st.sampled_from([Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2)])
    A = [draw(scale) for _ in range(p)]
    a = [draw(shift) for _ in range(p)]
    al = [draw(weight) for _ in range(p)]
    B = [draw(scale) for _ in range(s)]
    b = [draw(shift) for _ in range(s)]
    be = [draw(weight) for _ in range(s)]
    # rescale the last denominator weight so that balance holds
    rest = sum(x * y for x, y in zip(al, A)) - sum(x * y for x, y in zip(be[:-1], B[:-1]))
    if rest <= 0:
        be = be[:-1] + [Fraction(1)]
        al = [x * (sum(y * z for y, z in zip(be, B)) / sum(y * z for y, z in zip(al, A))) for x in al]
    else:
        be[-1] = rest / B[-1]
    return RatioSpec.build(A, a, al, B, b, be)


@st.composite
def balanced_specs(draw):
    return random_spec(draw)


@given(balanced_specs())
def test_hierarchy_soundness(spec):
    fams = classical.sufficient_families(spec)
    if any(v.is_true for v in fams.values()):
        assert not classical.necessary_conditions(spec).is_false
        u, vals = classical.q_grid(spec)
        assert vals.min() >= -1e-10


frac = st.fractions(min_value=0, max_value=5, max_denominator=8)


@given(
    st.lists(frac, min_size=1, max_size=3),
    st.lists(frac.filter(lambda v: v > 0), min_size=1, max_size=3),
    st.lists(frac, min_size=1, max_size=3),
)
def test_sherman_probes_never_violated(x, c, lift):
    p = min(len(x), len(c))
    x, c = x[:p], c[:p]
    D = sum(c)
    s = len(lift)
    d = [D / s] * s
    H = classical.sherman_simplified_matrix(c, d)
    # y_j at or above the H-weighted mean of x satisfies the first condition
    mean = sum(xi * ci for xi, ci in zip(x, c)) / D
    y = [mean + t for t in lift]
    v = classical.sherman_inequality(x, y, c, d, H)
    assert v.is_true
    assert v.witness["probes_ok"]


@given(st.floats(0.1, 3.0), st.floats(0.1, 3.0), st.floats(0.01, 2.0))
def test_p1_agrees_with_grid_away_from_zero_shift(alpha, beta, a):
    """The a = 0, alpha > beta corner is excluded: see test_p1_at_zero_shift_is_stricter_than_the_kernel."""
    exact = classical.p1_exact(alpha, beta, a)
    if exact.status is Status.INCONCLUSIVE:
        return
    vals = classical.q_grid(classical.p1_spec(alpha, beta, a))[1]
    assert bool(vals.min() < -1e-10) == exact.is_false
