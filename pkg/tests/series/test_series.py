from fractions import Fraction
from math import factorial
import itertools
import random

import pytest

from latticesums.errors import NonDivisible
from latticesums.scalar import ExactRing, NumericRing
from latticesums.series import LinearForm, RationalForm, TruncatedSeries, \
    choose_caps, divide_exact, dump_series, exp_linear, invert_unit, \
    load_series, sum_rational_forms


@ pytest.fixture()
def generate_ring():
    return ExactRing(4)


def _variables(ring, nvars, order):
    return [TruncatedSeries.variable(ring, nvars, order, i)
            for i in range(nvars)]


def test_truncation(generate_ring):
    t0, t1 = _variables(generate_ring, 2, 3)
    s = (t0 + t1) * (t0 + t1) * (t0 + t1) * (t0 + t1)
    assert len(s) == 0
    capped = TruncatedSeries(generate_ring, 2, 3,
                             {(2, 0): generate_ring.one(),
                              (1, 1): generate_ring.one()}, caps=(1, None))
    assert list(capped.terms) == [(1, 1)]


def test_invert_unit(generate_ring):
    t0, = _variables(generate_ring, 1, 5)
    inverse = invert_unit(-t0 + 1)
    assert all(inverse.coefficient((n,)) == 1 for n in range(6))
    with pytest.raises(ZeroDivisionError):
        invert_unit(t0)


def test_exp_linear(generate_ring):
    s = exp_linear(generate_ring, 1, 4, {0: generate_ring.from_rational(2)})
    assert s.coefficient((3,)) == Fraction(4, 3)
    assert s.coefficient((4,)) == Fraction(2, 3)


def test_mul_linear(generate_ring):
    t0, t1 = _variables(generate_ring, 2, 3)
    s = (t0 + 1).mul_linear(LinearForm((1, -1)))
    assert s.order == 4
    assert s.coefficient((2, 0)) == 1
    assert s.coefficient((1, 1)) == -1
    assert s.coefficient((0, 1)) == -1


def test_divide_exact(generate_ring):
    t0, t1 = _variables(generate_ring, 2, 4)
    s = (t0 + t1) * (t0 - t1.scale(2))
    q = divide_exact(s, LinearForm((1, 1)))
    assert q.order == 3
    assert q.equals(t0 - t1.scale(2))
    with pytest.raises(NonDivisible):
        divide_exact(t0 + t1.scale(3), LinearForm((0, 1)))


def test_sum_rational_forms(generate_ring):
    t0, t1 = _variables(generate_ring, 2, 4)
    form = LinearForm((1, -1))
    total = sum_rational_forms([RationalForm(t0, [form]),
                                RationalForm(-t1, [form])])
    assert total.coefficient((0, 0)) == 1
    assert len(total) == 1
    with pytest.raises(ValueError):
        RationalForm(t0, [LinearForm((1, 1), generate_ring.one())])


def test_rational_form_equals(generate_ring):
    t0, t1 = _variables(generate_ring, 2, 4)
    left = RationalForm(t0 * t0 - t1 * t1, [LinearForm((1, 1))])
    right = RationalForm(t0 - t1)
    assert left.equals(right)


def test_choose_caps():
    caps = choose_caps(3, [LinearForm((0, 2, 1))], (1, 2, 3))
    assert caps == (1, None, 3)


def test_numeric_series():
    ring = NumericRing(64)
    t0, t1 = _variables(ring, 2, 4)
    s = (t0 + t1) * (t0 - t1)
    q = divide_exact(s, LinearForm((1, 1)))
    assert q.max_discrepancy(t0 - t1) < 1e-15
    assert abs(invert_unit(-t0 + 1).coefficient((4, 0)) - 1) < 1e-15


def test_dump_series(generate_ring):
    t0, t1 = _variables(generate_ring, 2, 3)
    s = (t0 + t1.scale(Fraction(1, 2))) * (t0 + 1)
    text = dump_series(s)
    assert text.splitlines()[0] == "(0, 1) : 1/2"
    assert load_series(text, generate_ring, 2, 3).equals(s)


@ pytest.fixture()
def generate_random_quotients():
    rng = random.Random(11)
    ring = ExactRing(4)
    res = []
    for _ in range(8):
        terms = {}
        for _ in range(6):
            e = tuple(rng.randint(0, 2) for _ in range(3))
            terms[e] = ring.from_rational(
                Fraction(rng.randint(-9, 9), rng.randint(1, 5)))
        q = TruncatedSeries(ring, 3, 4, terms)
        coefficients = [rng.randint(-3, 3) for _ in range(3)]
        if not any(coefficients):
            coefficients[0] = 1
        res.append((q, LinearForm(coefficients)))
    return res


@ pytest.fixture()
def generate_partial_fractions(generate_ring):
    ring = generate_ring
    t0, t1, t2 = _variables(ring, 3, 6)
    l01, l02, l12 = LinearForm((1, -1, 0)), LinearForm((1, 0, -1)), \
        LinearForm((0, 1, -1))
    extra = TruncatedSeries(ring, 3, 4, {(1, 0, 2): ring.from_rational(3),
                                         (0, 2, 0): ring.one()})
    # sum_i t_i^2 / prod_{j != i} (t_i - t_j) = 1
    return [RationalForm(t0 * t0, [l01, l02]),
            RationalForm(-(t1 * t1), [l01, l12]),
            RationalForm(t2 * t2, [l02, l12]),
            RationalForm(extra)], extra


def test_divide_exact_round_trip(generate_random_quotients):
    for q, form in generate_random_quotients:
        s = q.mul_linear(form)
        back = divide_exact(s, form)
        assert back.order == q.order
        assert back.equals(q), str(form)


def test_divide_exact_odd_symmetry(generate_ring):
    t0, t1 = _variables(generate_ring, 2, 3)
    with pytest.raises(NonDivisible) as e:
        divide_exact(t0 + t1, LinearForm((1, -1)))
    assert e.value.residual


def test_sum_rational_forms_permutations(generate_partial_fractions):
    forms, extra = generate_partial_fractions
    expected = extra + 1
    for order in itertools.permutations(range(len(forms))):
        total = sum_rational_forms([forms[i] for i in order])
        assert total.order == 4
        assert total.equals(expected), order


def test_exp_linear_product(generate_ring):
    ring = generate_ring
    a, b = ring.from_rational(2), ring.from_rational(Fraction(-1, 3))
    joint = exp_linear(ring, 2, 5, {0: a, 1: b})
    left = exp_linear(ring, 2, 5, {0: a})
    right = exp_linear(ring, 2, 5, {1: b})
    assert joint.equals(left * right)
    for i in range(6):
        for j in range(6 - i):
            assert joint.coefficient((i, j)) == \
                Fraction(2) ** i * Fraction(-1, 3) ** j / \
                (factorial(i) * factorial(j))
    inverse = exp_linear(ring, 2, 5, {0: -a, 1: -b})
    assert invert_unit(joint).equals(inverse)
