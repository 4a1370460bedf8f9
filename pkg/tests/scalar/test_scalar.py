from fractions import Fraction

import mpmath
import pytest

from latticesums import guts
from latticesums.scalar import ExactRing, NumericRing, cyclotomic_order, \
    embed, format_exact, parse_exact


@ pytest.fixture()
def generate_exact_values():
    texts = ["pi^2/2 - 39/8", "2*pi^6/945",
             "pi^4/40 + 35*pi^2/16 - 3075/128", "-pi^2/24"]
    res = []
    for text in texts:
        res.append((text, parse_exact(text)))
    return res


def test_format_exact(generate_exact_values):
    for text, value in generate_exact_values:
        assert format_exact(value) == text


def test_exact_arithmetic():
    ring = ExactRing(4)
    assert ring.two_pi_i() ** 2 == parse_exact("-4*pi^2")
    assert ring.exp_two_pi_i(Fraction(1, 4)) ** 2 == -1
    assert ring.exp_two_pi_i(Fraction(1, 2)) == -1
    x = parse_exact("pi^2/2 - 39/8")
    assert (x * x.inverse()) == 1
    assert (x - x).is_zero()
    with pytest.raises(ZeroDivisionError):
        ring.zero().inverse()


def test_equality_across_fields():
    # the same value written in Q(zeta_4) and Q(zeta_60)
    assert parse_exact("pi^2/2 - 39/8", 4) == parse_exact("pi^2/2 - 39/8", 60)
    assert parse_exact("z*pi", 4) != parse_exact("pi", 60)


def test_embed():
    ctx = mpmath.MPContext()
    ctx.prec = 128
    value = embed(parse_exact("pi^2/2 - 39/8"))
    assert abs(value - (ctx.pi ** 2 / 2 - ctx.mpf(39) / 8)) < 1e-30
    assert abs(embed(parse_exact("z*pi/2")) - ctx.mpc(0, ctx.pi / 2)) < 1e-30
    assert embed(Fraction(1, 4)) == 0.25


def test_exact_ring_order():
    with pytest.raises(ValueError):
        ExactRing(6)
    with pytest.raises(TypeError):
        ExactRing(4).from_rational(0.5)


def test_numeric_ring():
    ring = NumericRing(64)
    assert ring.ctx.prec == 64
    assert abs(ring.exp_two_pi_i(Fraction(1, 4)) - 1j) < 1e-15
    assert ring.magnitude(ring.from_rational(Fraction(-3, 4))) == 0.75


def test_cyclotomic_order():
    arr = guts.get_fixture_arrangement("a1_alpha1")
    assert cyclotomic_order(arr, (Fraction(0),)) == 4
    shifted = guts.get_fixture_arrangement("a2_shifted")
    n = cyclotomic_order(shifted, (Fraction(1, 7), Fraction(1, 11)))
    assert n % 60 == 0
    assert n % 7 == 0
    with pytest.raises(TypeError):
        cyclotomic_order(arr, (0.5,))
