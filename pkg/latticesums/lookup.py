"""
lookup

lookup functions for latticesums: bundled arrangements, published values
and the symmetric families with a known zeta normalisation
"""
from fractions import Fraction
from collections import Counter
import json
import os

from latticesums import guts
from latticesums.errors import ArrangementError
from latticesums.lattice import Arrangement

_FAMILY_FACTORS = {'A1_alpha': 2, 'A2': 6, 'A2_alpha': 6}


def lookup_arrangement(name):
    """
    A function that resolves a bundled fixture name or a JSON file path

    Args:
        name (str): e.g. "a1_alpha1", or a path ending in .json

    Returns:
        Arrangement
    """
    if os.path.exists(str(name)):
        try:
            with open(name) as f:
                return Arrangement.from_json(json.load(f))
        except json.JSONDecodeError as e:
            raise ArrangementError(f"{name} is not valid JSON: {e}") from e
    stem = os.path.basename(str(name))
    if stem.endswith('.json'):
        stem = stem[:-5]
    return guts.get_fixture_arrangement(stem)


def lookup_example(label):
    """
    A function that finds one row of the table of published values

    Args:
        label (str): e.g. "a1_alpha1_k2"

    Returns:
        dict with keys example, label, arrangement, quantity, k, y,
        expected, slow
    """
    df = guts.get_examples_table()
    row = df.loc[df['label'] == label]
    if row.empty:
        raise ArrangementError(f"no published value labelled {label!r}")
    return row.iloc[0].to_dict()


def _signature(arr):
    return Counter((f.direction, f.constant) for f in arr)


def _a1_alpha(alpha):
    return Counter({((-1,), alpha): 1, ((1,), Fraction(0)): 1,
                    ((1,), alpha): 1})


def _a2_alpha(alpha):
    out = Counter()
    for d in [(1, 0), (0, 1), (1, 1)]:
        minus = tuple(-x for x in d)
        out.update([(minus, alpha), (d, Fraction(0)), (d, alpha)])
    return out


def lookup_family(arr):
    """
    A function that names the documented symmetric family of an
    arrangement, if any

    Args:
        arr (Arrangement)

    Returns:
        (name, symmetry factor) or None
    """
    if not arr.is_rational:
        return None
    signature = _signature(arr)
    alphas = {f.constant for f in arr if f.constant != 0}
    if arr.rank == 1 and len(alphas) == 1:
        alpha = alphas.pop()
        if signature == _a1_alpha(alpha):
            return 'A1_alpha', _FAMILY_FACTORS['A1_alpha']
    if arr.rank == 2:
        if signature == Counter({((1, 0), Fraction(0)): 1,
                                 ((0, 1), Fraction(0)): 1,
                                 ((1, 1), Fraction(0)): 1}):
            return 'A2', _FAMILY_FACTORS['A2']
        if len(alphas) == 1 and signature == _a2_alpha(alphas.pop()):
            return 'A2_alpha', _FAMILY_FACTORS['A2_alpha']
    return None
