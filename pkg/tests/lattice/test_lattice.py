from fractions import Fraction
import itertools
import random

import pytest

from latticesums import guts
from latticesums.errors import ArrangementError, RankDrop
from latticesums.lattice import Arrangement, Functional, choose_phi, \
    coset_character_sum, excluded_functionals, frac_part, in_lattice, \
    nudge_off_walls, on_walls


@ pytest.fixture()
def generate_fixtures():
    res = {}
    for name in ['a1_alpha1', 'a2', 'a2_shifted', 'a2_slopes']:
        res[name] = guts.get_fixture_arrangement(name)
    return res


@ pytest.fixture()
def generate_coordinate_pair():
    return Arrangement(2, (Functional((1, 0), Fraction(1, 2), 'f1'),
                           Functional((0, 1), Fraction(1, 3), 'f2')))


def test_bases(generate_fixtures):
    a2 = generate_fixtures['a2']
    assert [b.members for b in a2.bases] == [(0, 1), (0, 2), (1, 2)]
    assert all(b.index == 1 for b in a2.bases)
    slopes = generate_fixtures['a2_slopes']
    assert len(slopes.bases) == 6
    wide = next(b for b in slopes.bases if b.members == (0, 3))
    assert wide.index == 2
    assert len(wide.coset_reps) == 2
    assert wide.coset_reps[0] == (0, 0)


def test_dual_vectors(generate_fixtures):
    for arr in generate_fixtures.values():
        for basis in arr.bases:
            for f, d in zip(basis.members, basis.dual):
                for g in basis.members:
                    pairing = sum(a * b for a, b in zip(arr[g].direction, d))
                    assert pairing == (1 if f == g else 0)


def test_indispensable(generate_fixtures, generate_coordinate_pair):
    assert generate_fixtures['a1_alpha1'].indispensable == []
    assert generate_fixtures['a2'].indispensable == []
    assert generate_coordinate_pair.indispensable == [0, 1]


def test_without(generate_fixtures):
    a2 = generate_fixtures['a2_shifted']
    sub = a2.without(['f3'])
    assert sub.names == ['f1', 'f2']
    with pytest.raises(RankDrop):
        a2.without(['f1', 'f3'])
    with pytest.raises(ArrangementError):
        a2.without(['f9'])


def test_invalid_arrangements():
    with pytest.raises(ArrangementError):
        Functional((0, 0), Fraction(0), 'f1')
    with pytest.raises(ArrangementError):
        Arrangement(2, (Functional((1, 1)), Functional((2, 2))))
    with pytest.raises(ArrangementError):
        Arrangement.from_json({'rank': 1, 'functionals': [{'constant': 1}]})


def test_json(generate_fixtures):
    arr = generate_fixtures['a2_shifted']
    again = Arrangement.from_json(arr.to_json())
    assert again == arr
    assert arr.to_json()['functionals'][2]['constant'] == '1/5'


def test_choose_phi(generate_fixtures):
    assert choose_phi(generate_fixtures['a1_alpha1']).phi == (1,)
    # phi = (1, 1) is orthogonal to a dual vector of {f1, f3}
    assert choose_phi(generate_fixtures['a2']).phi == (1, 2)


def test_frac_part(generate_fixtures):
    arr = generate_fixtures['a1_alpha1']
    basis = arr.bases[1]
    assert frac_part((Fraction(5, 4),), (0,), basis, 1, (1,)) == \
        Fraction(1, 4)
    assert frac_part((Fraction(0),), (0,), basis, 1, (1,)) == 0
    # the branch along -phi takes the value 1 on the lattice
    assert frac_part((Fraction(0),), (0,), basis, 1, (-1,)) == 1
    assert frac_part((Fraction(5, 4),), (1,), basis, 1, (-1,)) == \
        Fraction(1, 4)


def test_walls(generate_fixtures):
    arr = generate_fixtures['a1_alpha1']
    assert on_walls((Fraction(0),), arr)
    assert not on_walls((Fraction(1, 3),), arr)
    assert nudge_off_walls((Fraction(0),), arr) == (Fraction(1, 2),)
    a2 = generate_fixtures['a2']
    z = nudge_off_walls((Fraction(0), Fraction(0)), a2)
    assert not on_walls(z, a2)
    assert z[1] == 2 * z[0]


def test_excluded_functionals(generate_coordinate_pair):
    arr = generate_coordinate_pair
    assert excluded_functionals((Fraction(0), Fraction(1, 5)), arr) == [0]
    assert excluded_functionals((Fraction(1, 3), Fraction(1, 5)), arr) == []
    assert excluded_functionals((Fraction(0), Fraction(0)), arr,
                                ['f2']) == [1]


def test_coset_character_sum(generate_fixtures):
    wide = next(b for b in generate_fixtures['a2_slopes'].bases
                if b.members == (0, 3))
    assert coset_character_sum(wide, (0, Fraction(1, 2))) == 0
    assert coset_character_sum(wide, (0, 1)) == 1
    with pytest.raises(ArrangementError):
        coset_character_sum(wide, (0, Fraction(1, 4)))


def test_in_lattice():
    generators = [(1, 0), (1, 2)]
    assert in_lattice((0, 2), generators)
    assert in_lattice((3, 4), generators)
    assert not in_lattice((0, 1), generators)


@ pytest.fixture()
def generate_skew():
    # bases of index 5, 5, 1, 5, 8 and 7
    return Arrangement(2, (Functional((2, 1)), Functional((1, 3)),
                           Functional((1, -2)), Functional((3, 1))))


def test_coset_reps_complete(generate_skew, generate_fixtures):
    rng = random.Random(3)
    arrangements = [generate_skew, generate_fixtures['a2_slopes']]
    for arr in arrangements:
        for basis in arr.bases:
            reps = basis.coset_reps
            assert len(reps) == basis.index
            for w, u in itertools.combinations(reps, 2):
                diff = tuple(a - b for a, b in zip(w, u))
                assert not in_lattice(diff, basis.matrix)
                assert not basis.contains(diff)
            for _ in range(10):
                v = tuple(rng.randint(-20, 20) for _ in range(arr.rank))
                hits = [w for w in reps if in_lattice(
                    tuple(a - b for a, b in zip(v, w)), basis.matrix)]
                assert len(hits) == 1


def test_coset_character_orthogonality(generate_skew, generate_fixtures):
    rng = random.Random(5)
    for arr in [generate_skew, generate_fixtures['a2_slopes']]:
        for basis in arr.bases:
            for _ in range(6):
                n = [rng.randint(-6, 6) for _ in basis.dual]
                lam = tuple(sum((c * d[i] for c, d in zip(n, basis.dual)),
                                Fraction(0)) for i in range(arr.rank))
                expected = 1 if all(x.denominator == 1 for x in lam) else 0
                assert coset_character_sum(basis, lam) == expected, \
                    (basis.members, lam)


def test_choose_phi_skips_parallel_directions():
    arr = Arrangement(2, (Functional((1, 0)), Functional((0, 1)),
                          Functional((1, 1)), Functional((1, -1))))
    assert choose_phi(arr).phi == (1, 2)


def test_nudge_is_one_sided_limit(generate_skew, generate_fixtures):
    for arr in [generate_skew, generate_fixtures['a2']]:
        phi = choose_phi(arr)
        y = (Fraction(0), Fraction(0))
        z = nudge_off_walls(y, arr, phi)
        assert not on_walls(z, arr)
        c = (z[0] - y[0]) / phi.phi[0]
        assert c > 0
        for step in (c, c / 2, c / 4):
            point = tuple(a + step * p for a, p in zip(y, phi.phi))
            assert not on_walls(point, arr)
            for basis in arr.bases:
                for w in basis.coset_reps:
                    for f in basis.members:
                        slope = sum(p * d for p, d in
                                    zip(phi.phi, basis.dual_of(f)))
                        assert frac_part(point, w, basis, f, phi) == \
                            frac_part(y, w, basis, f, phi) + step * slope
