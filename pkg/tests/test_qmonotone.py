import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gammacm import corpus, oracle, qmonotone, ratio
from gammacm.errors import DomainError, SpecError
from gammacm.model import RatioSpec, Status


def test_example2_lcm_true():
    v = qmonotone.check_lcm(corpus.example2())
    assert v.is_true


def test_example2_lcm_sums_are_exact():
    lhs, rhs = qmonotone.lcm_sums(corpus.example2())
    assert lhs == Fraction(5, 6) and rhs == Fraction(5, 6)


def test_example3_true_for_every_shift_pattern():
    for pattern in range(16):
        a = [0.7 if pattern >> i & 1 else 0 for i in range(4)]
        assert qmonotone.check_lcm(corpus.example3(a)).is_true, a


def test_example3_broken_weight_names_the_sum_condition():
    v = qmonotone.check_lcm(corpus.example3(beta1="0.4"))
    assert v.is_false
    assert v.witness["failed"] == "lcm_condition"
    lhs, rhs = qmonotone.lcm_sums(corpus.example3(beta1="0.4"))
    assert float(lhs) == pytest.approx(5.195, abs=1e-3)
    assert float(rhs) == pytest.approx(4.030, abs=1e-3)


def test_example1_threshold():
    assert qmonotone.check_fq_example1(corpus.single_pair(1, 2, 0, 1, "1/2")).is_true
    v = qmonotone.check_fq_example1(corpus.single_pair(1, 2, 0, 1, "0.6"))
    assert v.is_false
    assert v.witness["failed"] == "v_nonneg"
    assert v.witness["v_nonneg"]["witness"] == {"n": 1, "v": "-1/5"}


def test_fq_example1_rejects_other_scales():
    with pytest.raises(SpecError):
        qmonotone.check_fq_example1(corpus.example2())


def test_bernstein_examples():
    q = "1/2"
    assert qmonotone.check_bernstein(corpus.single_pair(1, "1/2", 2, 3, q)).is_true
    assert qmonotone.check_bernstein(corpus.single_pair(2, 1, 1, 1, q)).is_false
    v = qmonotone.check_bernstein(corpus.single_pair(1, 1, 1, 2, q))
    assert v.is_false and v.witness["failed"] == "boundary"
    with pytest.raises(DomainError):
        qmonotone.bernstein_condition(corpus.single_pair(1, 1, 0, 1, q))


def test_identical_lists_cancel():
    spec = corpus.single_pair(1, 1, "1/2", "1/2", "0.3")
    assert qmonotone.net_factors(spec) == []
    assert qmonotone.check_lcm(spec).is_true
    assert qmonotone.check_fq_example1(spec).is_true
    assert qmonotone.bernstein_condition(spec).is_true


def test_classical_spec_rejected():
    with pytest.raises(SpecError):
        qmonotone.check_lcm(RatioSpec.build([1], [0], [1], [1], [1], [1]))


@st.composite
def unit_scale_specs(draw):
    p = draw(st.integers(1, 3))
    s = draw(st.integers(1, 3))
    shift = st.sampled_from([Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3)])
    weight = st.sampled_from([Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3)])
    return RatioSpec.build(
        [1] * p,
        [draw(shift) for _ in range(p)],
        [draw(weight) for _ in range(p)],
        [1] * s,
        [draw(shift) for _ in range(s)],
        [draw(weight) for _ in range(s)],
        q=draw(st.sampled_from(["0.3", "1/2", "0.8"])),
    )


@settings(max_examples=200)
@given(unit_scale_specs())
def test_specialization_agrees_with_general_check(spec):
    a = qmonotone.check_fq_example1(spec)
    b = qmonotone.check_lcm(spec)
    if a.status is not Status.INCONCLUSIVE and b.status is not Status.INCONCLUSIVE:
        assert a.status is b.status


@given(unit_scale_specs())
def test_monotone_limit(spec):
    q = float(spec.q)
    x = 1e3 / math.log(1 / q)
    got = -ratio.log_derivative(spec, x, 1)
    assert got == pytest.approx(qmonotone.limit_minus_log_derivative(spec), abs=1e-6)


def test_certificates_agree_with_oracle_on_random_specs():
    rng = random.Random(7)
    shifts = [0, Fraction(1, 2), 1, 2]
    for _ in range(25):
        spec = RatioSpec.build(
            [1, 1], [rng.choice(shifts) for _ in range(2)], [rng.choice([1, 2]) for _ in range(2)],
            [1], [rng.choice(shifts)], [rng.choice([1, 2, 3])], q="1/2",
        )
        cert = qmonotone.check_lcm(spec)
        orc = oracle.lcm_oracle(spec)
        assert oracle.cross_validate(cert, orc) is None
