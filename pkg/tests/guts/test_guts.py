from latticesums import guts
from latticesums.errors import ArrangementError
import pytest


@ pytest.fixture()
def generate_get_fixture_arrangement():
    res = []
    for name in guts.list_fixtures():
        res.append(guts.get_fixture_arrangement(name))
    return res


def test_list_fixtures():
    names = guts.list_fixtures()
    assert 'a1_alpha1' in names
    assert 'hurwitz_pair' in names
    assert names == sorted(names)


def test_get_fixture_arrangement(generate_get_fixture_arrangement):
    for arr in generate_get_fixture_arrangement:
        assert arr.rank in (1, 2)
        assert arr.is_rational
        assert len(arr.bases) >= 1


def test_get_fixture_path():
    assert str(guts.get_fixture_path('a2')).endswith('a2.json')
    with pytest.raises(ArrangementError):
        guts.get_fixture_path('a4')


def test_get_examples_table():
    df = guts.get_examples_table()
    fast = guts.get_examples_table(include_slow=False)
    assert len(fast) < len(df)
    assert not fast['slow'].any()
    assert set(df['arrangement']) <= set(guts.list_fixtures())
    assert all(isinstance(k, tuple) for k in df['k'])
    for _, row in df.iterrows():
        arr = guts.get_fixture_arrangement(row['arrangement'])
        assert len(row['k']) == len(arr)
