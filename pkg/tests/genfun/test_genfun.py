from fractions import Fraction
import itertools

import pytest

from latticesums import genfun, guts, lattice
from latticesums.errors import ArrangementError, ExcludedPoint, UnknownFamily
from latticesums.lattice import Arrangement, Functional
from latticesums.parse_utils import broadcast_y
from latticesums.scalar import embed, parse_exact
from latticesums.series import RationalForm, sum_rational_forms


def _value(row):
    arr = guts.get_fixture_arrangement(row['arrangement'])
    if row['quantity'] == 'zeta':
        return genfun.zeta_from_S(arr, row['k'])
    return genfun.lattice_sum_value(arr, broadcast_y(row['y'], arr.rank),
                                    row['k'])


@ pytest.fixture()
def generate_published_values():
    df = guts.get_examples_table(include_slow=False)
    res = []
    for _, row in df.iterrows():
        value = _value(row)
        res.append((row['label'], value,
                    parse_exact(row['expected'], value.field.order)))
    return res


@ pytest.fixture()
def generate_single_functional():
    return Arrangement(1, (Functional((1,), Fraction(0), 'f'),))


@ pytest.fixture()
def generate_coordinate_pair():
    return Arrangement(2, (Functional((1, 0), Fraction(1, 2), 'f1'),
                           Functional((0, 1), Fraction(1, 3), 'f2')))


@ pytest.fixture()
def generate_half_slopes():
    return Arrangement(2, tuple(
        Functional(d, Fraction(1, 2), name)
        for d, name in [((1, 0), "f1"), ((0, 1), "f2"), ((1, 1), "g"),
                        ((1, 2), "h")]))


def test_published_values(generate_published_values):
    for label, value, expected in generate_published_values:
        assert value == expected, label


@ pytest.mark.slow
def test_published_values_slow():
    df = guts.get_examples_table()
    for _, row in df.loc[df.slow].iterrows():
        value = _value(row)
        assert value == parse_exact(row['expected'], value.field.order), \
            row['label']


def test_periodic_zeta(generate_single_functional):
    arr = generate_single_functional
    assert genfun.lattice_sum_value(arr, (0,), (2,)) == parse_exact("pi^2/3")
    assert genfun.lattice_sum_value(arr, (Fraction(1, 4),), (2,)) == \
        parse_exact("-pi^2/24")
    assert genfun.lattice_sum_value(arr, (Fraction(1, 4),), (1,)) == \
        parse_exact("z*pi/2", 4)


def test_hurwitz_value():
    arr = Arrangement(1, (Functional((1,), Fraction(1, 2), 'f'),))
    assert genfun.lattice_sum_value(arr, (0,), (2,)) == parse_exact("pi^2")


def test_evaluate_report():
    arr = guts.get_fixture_arrangement("a1_alpha1")
    report = genfun.evaluate(arr, (0,), (2, 2, 2))
    record = report.to_record()
    assert record['S'] == "pi^2/2 - 39/8"
    assert record['mode'] == 'exact'
    assert record['basis_count'] == 3
    assert record['N_cyclotomic'] == 4
    assert report.value == genfun.prefactor((2, 2, 2), genfun.make_ring_for(
        arr, (Fraction(0),), 'exact')) * report.C


def test_numeric_mode():
    arr = guts.get_fixture_arrangement("a1_alpha1")
    exact = genfun.lattice_sum_value(arr, (0,), (4, 4, 4))
    numeric = genfun.lattice_sum_value(arr, (0,), (4, 4, 4), mode='numeric',
                                       precision=128)
    assert abs(numeric - embed(exact)) < 1e-25


def test_numeric_complex_constants():
    # f(v) = v + 1/2 + i/4: the sum is symmetric under v -> -1 - v
    arr = Arrangement(1, (Functional((1,), complex(0.5, 0.25), 'f'),))
    value = genfun.lattice_sum_value(arr, (0,), (2,), mode='numeric')
    assert abs(value.imag) < 1e-20


def test_excluded_point(generate_coordinate_pair):
    arr = generate_coordinate_pair
    y = (Fraction(0), Fraction(1, 5))
    with pytest.raises(ExcludedPoint):
        genfun.evaluate(arr, y, (1, 2))
    # weight 2 on f1 keeps the point admissible
    genfun.evaluate(arr, y, (2, 2))


def test_degenerate_weights():
    alpha0 = guts.get_fixture_arrangement("a2_alpha0")
    pair = guts.get_fixture_arrangement("hurwitz_pair")
    y = (Fraction(1, 3), Fraction(1, 4))
    left = genfun.lattice_sum_value(alpha0, y, (0, 1, 2))
    right = genfun.lattice_sum_value(pair, (Fraction(1, 4),), (1, 2))
    assert left == -right
    # f1(v) = v_1 + 1/2 never vanishes on Z^2
    shifted = guts.get_fixture_arrangement("a2_shifted")
    assert genfun.lattice_sum_value(shifted, y, (0, 1, 2)).is_zero()


def test_input_errors():
    arr = guts.get_fixture_arrangement("a1_alpha1")
    with pytest.raises(ArrangementError):
        genfun.evaluate(arr, (0,), (2, 2))
    with pytest.raises(ArrangementError):
        genfun.evaluate(arr, (0.5,), (2, 2, 2))
    with pytest.raises(ArrangementError):
        genfun.evaluate(arr, (0,), (2, 2, 2), order=3)
    with pytest.raises(ArrangementError):
        genfun.evaluate(arr, (0,), (2, 2, 2), mode='symbolic')


def test_coefficient_table():
    arr = guts.get_fixture_arrangement("a1_alpha1")
    table = genfun.coefficient_table(arr, (0,), [(2, 2, 2), (4, 4, 4)])
    assert list(table['S_text']) == [
        "pi^2/2 - 39/8", "pi^4/40 + 35*pi^2/16 - 3075/128"]
    C = genfun.coefficient(arr, (0,), (2, 2, 2))
    assert table['C'].iloc[0] == C


def test_generating_function_constant_term():
    arr = guts.get_fixture_arrangement("a2_shifted")
    y = (Fraction(1, 4), Fraction(1, 2))
    series = genfun.generating_function(arr, y, order=2)
    assert series.nvars == 3
    # with every t_f = 0 only the k = 0 coefficient survives
    assert series.constant_term() == genfun.coefficient(arr, y, (0, 0, 0))


def test_zeta_from_S():
    assert genfun.zeta_from_S(guts.get_fixture_arrangement("a2"),
                              (2, 2, 2)) == parse_exact("pi^6/2835")
    with pytest.raises(UnknownFamily):
        genfun.zeta_from_S(guts.get_fixture_arrangement("a2_shifted"),
                           (2, 2, 2))
    with pytest.raises(UnknownFamily):
        genfun.zeta_from_S(guts.get_fixture_arrangement("a1_alpha1"),
                           (3, 3, 3))
    with pytest.raises(UnknownFamily):
        genfun.zeta_from_S(guts.get_fixture_arrangement("a1_alpha1"),
                           (2, 2, 2), symmetry_factor=6)


def _summed_basis_forms(arr, y, order):
    phi = lattice.choose_phi(arr)
    ring = genfun.make_ring_for(arr, y, 'exact', phi=phi)
    forms = []
    for basis, w, form in genfun.basis_summands(arr, y, phi, order, ring):
        forms.append(RationalForm(
            form.numerator.scale(Fraction(1, basis.index)),
            form.denominators))
    direct = genfun.generating_function(arr, y, phi=phi, order=order,
                                        ring=ring)
    return forms, direct


def test_basis_summands(generate_half_slopes):
    y = (Fraction(1, 3), Fraction(1, 4))
    forms, direct = _summed_basis_forms(generate_half_slopes, y, 3)
    # six bases, one of index 2
    assert len(forms) == 7
    assert sum_rational_forms(forms).equals(direct)


@ pytest.mark.slow
def test_basis_summands_slopes():
    arr = guts.get_fixture_arrangement("a2_slopes")
    y = (Fraction(1, 7), Fraction(1, 11))
    forms, direct = _summed_basis_forms(arr, y, 3)
    assert len(forms) == 7
    assert sum_rational_forms(forms).equals(direct)


def test_permutation_invariance():
    cases = [(guts.get_fixture_arrangement("a2"),
              (Fraction(1, 3), Fraction(1, 4)), (2, 1, 1)),
             (guts.get_fixture_arrangement("a2_shifted"),
              (Fraction(1, 4), Fraction(1, 2)), (1, 1, 2)),
             (guts.get_fixture_arrangement("hurwitz_pair"),
              (Fraction(1, 4),), (1, 2))]
    for arr, y, k in cases:
        value = genfun.lattice_sum_value(arr, y, k)
        for order in itertools.permutations(range(len(arr))):
            moved = arr.permuted(order)
            assert moved.names == [arr.names[i] for i in order]
            assert genfun.lattice_sum_value(
                moved, y, tuple(k[i] for i in order)) == value, order


def test_phi_invariance():
    cases = [(guts.get_fixture_arrangement("a2"),
              (Fraction(1, 3), Fraction(1, 4)), (2, 1, 1)),
             (guts.get_fixture_arrangement("a2_shifted"),
              (Fraction(1, 4), Fraction(1, 2)), (1, 1, 2))]
    for arr, y, k in cases:
        value = genfun.lattice_sum_value(arr, y, k)
        for phi in [(1, 3), (2, -1), (-1, -2)]:
            direction = lattice.GenericDirection(phi)
            assert lattice.is_generic(direction, arr)
            assert genfun.lattice_sum_value(arr, y, k, phi=direction) == \
                value, phi


def test_workers_identical():
    arr = guts.get_fixture_arrangement("a2_shifted")
    y = (Fraction(1, 4), Fraction(1, 2))
    serial = genfun.generating_function(arr, y, order=4)
    threaded = genfun.generating_function(arr, y, order=4, workers=3)
    assert serial.terms == threaded.terms
    serial = genfun.generating_function(arr, y, order=4, mode='numeric')
    threaded = genfun.generating_function(arr, y, order=4, mode='numeric',
                                          workers=3)
    assert serial.terms == threaded.terms
