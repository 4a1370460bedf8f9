"""
guts

A module to provide convenient read-access to the arrangements and the
table of known values bundled with latticesums
"""
from importlib import resources
import json

import pandas as pd

from latticesums.errors import ArrangementError
from latticesums.lattice import Arrangement
from latticesums.parse_utils import parse_int_list, parse_vector


def list_fixtures():
    """
    Names of the bundled arrangements, without the .json suffix.
    """
    return sorted(p.name[:-5] for p in
                  resources.files("latticesums.data").iterdir()
                  if p.name.endswith('.json'))


def get_fixture_path(name):
    """
    Args:
        name (str): fixture name, e.g. "a1_alpha1"

    Returns:
        path of the JSON file
    """
    if name not in list_fixtures():
        raise ArrangementError(
            f"no bundled arrangement {name!r}; have {list_fixtures()}")
    with resources.path("latticesums.data", f"{name}.json") as f:
        data_file_path = f
    return data_file_path


def get_fixture_arrangement(name):
    """
    """
    with open(get_fixture_path(name)) as f:
        return Arrangement.from_json(json.load(f))


def get_examples_path():
    """

    """
    with resources.path("latticesums.data", "examples.csv") as f:
        data_file_path = f
    return data_file_path


def get_examples_table(include_slow=True):
    """
    The table of published values, one row per value, with k and y
    parsed into tuples.

    Args:
        include_slow (bool): keep the rows flagged slow

    Returns:
        pd.DataFrame with columns example, label, arrangement, quantity,
        k, y, expected, slow
    """
    df = pd.read_csv(get_examples_path(), dtype={'k': str, 'y': str})
    df['k'] = df['k'].map(parse_int_list)
    df['y'] = df['y'].map(parse_vector)
    df['slow'] = df['slow'].astype(bool)
    if not include_slow:
        df = df.loc[~df.slow].reset_index(drop=True)
    return df
