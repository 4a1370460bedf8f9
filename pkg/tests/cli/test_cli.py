import json

import pytest

from latticesums import cli


@ pytest.fixture()
def generate_coordinate_pair(tmp_path):
    path = tmp_path / "pair.json"
    path.write_text(json.dumps({
        'rank': 2,
        'functionals': [{'name': 'f1', 'direction': [1, 0], 'constant': '1/2'},
                        {'name': 'f2', 'direction': [0, 1], 'constant': '1/3'}]
    }))
    return str(path)


def test_eval(tmp_path):
    out = tmp_path / "value.json"
    code = cli.main(['eval', '--arrangement', 'a1_alpha1', '--k', '2,2,2',
                     '--y', '0', '--no-progress', '--out', str(out)])
    assert code == cli.EXIT_OK
    record = json.loads(out.read_text())
    assert record['S'] == "pi^2/2 - 39/8"
    assert record['field'] == {'N': 4}


def test_eval_csv(tmp_path):
    out = tmp_path / "value.csv"
    code = cli.main(['eval', '--arrangement', 'a2', '--k', '2,2,2',
                     '--format', 'csv', '--out', str(out)])
    assert code == cli.EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0].startswith('S,C,mode')
    assert lines[1].startswith('2*pi^6/945,')


def test_excluded_point(generate_coordinate_pair):
    code = cli.main(['eval', '--arrangement', generate_coordinate_pair,
                     '--k', '1,2', '--y', '0,1/5'])
    assert code == cli.EXIT_EXCLUDED


def test_input_errors(capsys):
    assert cli.main(['eval', '--arrangement', 'a9', '--k', '2']) == \
        cli.EXIT_INPUT
    assert cli.main(['eval', '--arrangement', 'a1_alpha1']) == cli.EXIT_INPUT
    assert cli.main(['verify', 'hierarchy', '--arrangement', 'a2']) == \
        cli.EXIT_INPUT
    assert cli.main(['eval', '--arrangement', 'a1_alpha1', '--k', '2,2,2',
                     '--N', '500,250']) == cli.EXIT_INPUT
    assert cli.main(['frobnicate']) == cli.EXIT_INPUT
    assert "error" in capsys.readouterr().err


def test_reproduce_examples(capsys):
    code = cli.main(['reproduce-examples', '--label', 'a1_alpha1_k2',
                     '--label', 'a2_zeta2', '--no-progress'])
    assert code == cli.EXIT_OK
    text = capsys.readouterr().out
    assert 'a1_alpha1_k2' in text
    assert 'fail' not in text


def test_reproduce_examples_table():
    table = cli.reproduce_examples(labels=('a1_alpha2_k2', 'a1_alpha3_k2'))
    assert list(table['status']) == ['pass', 'pass']
    assert list(table['computed']) == list(table['expected'])


def test_verify_oracle(capsys):
    code = cli.main(['verify', 'oracle', '--arrangement', 'a1_alpha1',
                     '--k', '2,2,2', '--N', '25,50,100', '--no-progress'])
    assert code == cli.EXIT_OK
    assert 'monotone' in capsys.readouterr().out


def test_verify_polytope(capsys):
    code = cli.main(['verify', 'polytope', '--arrangement', 'a2_shifted',
                     '--y', '1/4,1/2', '--order', '3'])
    assert code == cli.EXIT_OK
    assert "max discrepancy: 0 (exact)" in capsys.readouterr().out


def test_verify_hierarchy(capsys):
    code = cli.main(['verify', 'hierarchy', '--arrangement', 'a1_alpha1',
                     '--remove', 'f_0', '--order', '4'])
    assert code == cli.EXIT_OK
    out = capsys.readouterr().out
    assert "removed: f_0" in out
    assert "max discrepancy: 0 (exact)" in out


def test_job_config():
    config = cli.JobConfig(command='eval', arrangement='a2', k=(2, 2, 2))
    assert config.validate() is config
    parser = cli.build_parser()
    args = parser.parse_args(['verify', 'hierarchy', '--arrangement', 'a2',
                              '--remove', 'f1', '--remove', 'f2'])
    config = cli.config_from_args(args)
    assert config.remove == ('f1', 'f2')
    assert config.suite == 'hierarchy'
    assert config.progress
