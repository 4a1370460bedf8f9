"""
cli

The latticesums command line: evaluation of single values, reproduction of
the table of published values and the verification suites
"""
from dataclasses import dataclass
import argparse
import json
import sys

import pandas as pd
from tqdm import tqdm

from latticesums import genfun, guts, hierarchy, lookup, oracle, polytope
from latticesums.errors import ArrangementError, ExcludedPoint, \
    LatticeSumError, NonDivisible, NotSimple, VerificationFailure
from latticesums.parse_utils import broadcast_y, parse_int_list, \
    parse_vector, parse_weights
from latticesums.scalar import DEFAULT_PRECISION, format_exact, parse_exact

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_EXCLUDED = 2
EXIT_NON_DIVISIBLE = 3
EXIT_VERIFICATION = 4

_DEFAULT_NS = (250, 500, 1000, 2000)


@dataclass(frozen=True)
class JobConfig:
    """
    One invocation of the command line, built from the parsed flags.
    """
    command: str
    arrangement: str = None
    k: tuple = None
    y: tuple = None
    mode: str = 'exact'
    precision: int = DEFAULT_PRECISION
    order: int = None
    Ns: tuple = _DEFAULT_NS
    out: str = None
    fmt: str = 'json'
    suite: str = None
    remove: tuple = ()
    target: str = None
    include_slow: bool = False
    labels: tuple = ()
    workers: int = None
    progress: bool = True

    def validate(self):
        """Raises ArrangementError on inconsistent flags."""
        if self.mode not in ('exact', 'numeric'):
            raise ArrangementError(f"unknown mode {self.mode!r}")
        if self.precision < 16:
            raise ArrangementError(f"precision too small: {self.precision}")
        if self.order is not None and self.order < 0:
            raise ArrangementError(f"order must be >= 0: {self.order}")
        if any(b <= a for a, b in zip(self.Ns, self.Ns[1:])):
            raise ArrangementError(f"--N must be increasing: {self.Ns}")
        if self.command in ('eval', 'verify') and self.arrangement is None:
            raise ArrangementError("--arrangement is required")
        if self.command == 'eval' and self.k is None:
            raise ArrangementError("--k is required")
        if self.suite == 'hierarchy' and not self.remove:
            raise ArrangementError("verify hierarchy needs --remove")
        return self


def _target_point(config, arr):
    if config.y is None:
        return (0,) * arr.rank
    return broadcast_y(config.y, arr.rank)


def _emit(record, config):
    if config.fmt == 'csv':
        frame = record if isinstance(record, pd.DataFrame) else \
            pd.DataFrame([record])
        text = frame.to_csv(index=False)
    else:
        if isinstance(record, pd.DataFrame):
            record = record.to_dict(orient='records')
        text = json.dumps(record, indent=2, default=str)
    if config.out:
        with open(config.out, 'w') as f:
            f.write(text)
    else:
        print(text)


def cmd_eval(config):
    """
    Evaluates S(k,y;Λ) and C(k,y;Λ) and writes the result record.

    Returns:
        dict, the record
    """
    arr = lookup.lookup_arrangement(config.arrangement)
    y = _target_point(config, arr)
    report = genfun.evaluate(arr, y, config.k, mode=config.mode,
                             precision=config.precision, order=config.order,
                             workers=config.workers)
    record = report.to_record()
    _emit(record, config)
    return record


def _row_value(row, arr):
    if row['quantity'] == 'zeta':
        return genfun.zeta_from_S(arr, row['k'])
    y = broadcast_y(row['y'], arr.rank)
    return genfun.lattice_sum_value(arr, y, row['k'])


def reproduce_examples(include_slow=False, labels=(), progress=False):
    """
    Evaluates every published value of the bundled table in exact mode.

    Returns:
        pd.DataFrame with columns label, quantity, k, expected, computed,
        status ('pass', 'fail' or the error message)
    """
    df = guts.get_examples_table(include_slow=include_slow or bool(labels))
    if labels:
        df = df.loc[df['label'].isin(labels)]
    rows = []
    for _, row in tqdm(df.iterrows(), total=len(df), disable=not progress,
                       desc="published values"):
        record = {'label': row['label'], 'quantity': row['quantity'],
                  'k': ','.join(str(x) for x in row['k']),
                  'expected': row['expected'], 'computed': None}
        try:
            arr = lookup.lookup_arrangement(row['arrangement'])
            value = _row_value(row, arr)
            record['computed'] = format_exact(value)
            expected = parse_exact(row['expected'], value.field.order)
            record['status'] = 'pass' if value == expected else 'fail'
        except LatticeSumError as e:
            record['status'] = f"error: {e}"
        rows.append(record)
    return pd.DataFrame(rows)


def cmd_reproduce_examples(config):
    """
    Prints the pass/fail table of the published values.

    Returns:
        pd.DataFrame
    """
    table = reproduce_examples(config.include_slow, config.labels,
                               config.progress)
    print(table.to_string(index=False))
    if config.out:
        table.to_csv(config.out, index=False)
    return table


def _discrepancy_text(value, mode):
    if mode == 'exact' and value == 0:
        return "max discrepancy: 0 (exact)"
    return f"max discrepancy: {value:.3e}"


def _verify_oracle(config, arr):
    y = _target_point(config, arr)
    k = config.k
    if config.target is not None:
        target = parse_exact(config.target)
    else:
        target = genfun.lattice_sum_value(arr, y, k, mode='exact')
    table = oracle.convergence_scan(arr, k, y, config.Ns, target=target,
                                    precision=config.precision,
                                    progress=config.progress)
    print(table.to_string(index=False))
    if config.out:
        table.to_csv(config.out, index=False)
    return bool(table['monotone'].iloc[-1]), table


def _verify_polytope(config, arr):
    y = _target_point(config, arr)
    report = polytope.polytope_report(arr, y, order=config.order or 4,
                                      mode=config.mode,
                                      precision=config.precision)
    print(report['polytopes'].to_string(index=False))
    print(_discrepancy_text(report['max_discrepancy'], config.mode))
    record = {'y': [str(v) for v in report['y']],
              'basis': report['basis'],
              'polytopes': report['polytopes'].to_dict(orient='records'),
              'max_discrepancy': report['max_discrepancy'],
              'equal': report['equal']}
    if config.out:
        _emit(record, config)
    return report['equal'], record


def _verify_hierarchy(config, arr):
    y = _target_point(config, arr)
    report = hierarchy.check_hierarchy(arr, config.remove, y,
                                       order=config.order or 4,
                                       mode=config.mode,
                                       precision=config.precision)
    print(f"removed: {', '.join(report.removed)}; y = "
          f"{tuple(str(v) for v in report.y)}")
    print(_discrepancy_text(report.max_discrepancy, config.mode))
    return report.equal, report


def cmd_verify(config):
    """
    Runs one verification suite.

    Returns:
        (passed, report)
    """
    arr = lookup.lookup_arrangement(config.arrangement)
    suites = {'oracle': _verify_oracle, 'polytope': _verify_polytope,
              'hierarchy': _verify_hierarchy}
    if config.suite not in suites:
        raise ArrangementError(f"unknown suite {config.suite!r}")
    if config.suite == 'oracle' and config.k is None:
        raise ArrangementError("verify oracle needs --k")
    return suites[config.suite](config, arr)


def build_parser():
    """Builds the parser for eval, reproduce-examples and verify."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--arrangement", help="fixture name or JSON path")
    common.add_argument("--k", type=parse_weights, help="weights, e.g. 2,2,2")
    common.add_argument("--y", type=parse_vector, help="target, e.g. 1/3,0")
    common.add_argument("--mode", choices=['exact', 'numeric'],
                        default='exact')
    common.add_argument("--precision", type=int, default=DEFAULT_PRECISION,
                        help="mantissa bits in numeric mode")
    common.add_argument("--order", type=int, help="series order K")
    common.add_argument("--N", dest='Ns', type=parse_int_list,
                        default=_DEFAULT_NS, help="oracle box half-widths")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--format", dest='fmt', choices=['json', 'csv'],
                        default='json')
    common.add_argument("--workers", type=int)
    common.add_argument("--no-progress", action='store_true')

    parser = argparse.ArgumentParser(
        prog='latticesums',
        description="Special values of lattice sums over hyperplane "
                    "arrangements.")
    sub = parser.add_subparsers(dest='command', required=True)
    sub.add_parser('eval', parents=[common], help="evaluate S(k,y)")
    rep = sub.add_parser('reproduce-examples', parents=[common],
                         help="check the table of published values")
    rep.add_argument("--include-slow", action='store_true')
    rep.add_argument("--label", dest='labels', action='append', default=[])
    ver = sub.add_parser('verify', parents=[common],
                         help="run a verification suite")
    ver.add_argument("suite", choices=['oracle', 'polytope', 'hierarchy'])
    ver.add_argument("--remove", action='append', default=[],
                     help="functional to remove (repeatable)")
    ver.add_argument("--target", help="exact limit, e.g. 'pi^2/2 - 39/8'")
    return parser


def config_from_args(args):
    """Converts parsed arguments into a validated JobConfig."""
    values = vars(args).copy()
    values['progress'] = not values.pop('no_progress')
    values['Ns'] = tuple(values['Ns'])
    values['remove'] = tuple(values.get('remove', ()))
    values['labels'] = tuple(values.get('labels', ()))
    known = {f for f in JobConfig.__dataclass_fields__}
    return JobConfig(**{k: v for k, v in values.items() if k in known})


def main(argv=None):
    """
    Entry point of the latticesums command. Returns the exit code.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        config = config_from_args(args).validate()
        if config.command == 'eval':
            cmd_eval(config)
            return EXIT_OK
        if config.command == 'reproduce-examples':
            table = cmd_reproduce_examples(config)
            passed = bool((table['status'] == 'pass').all())
            return EXIT_OK if passed else EXIT_VERIFICATION
        passed, _ = cmd_verify(config)
        return EXIT_OK if passed else EXIT_VERIFICATION
    except ExcludedPoint as e:
        print(f"excluded point: {e}", file=sys.stderr)
        return EXIT_EXCLUDED
    except NonDivisible as e:
        print(f"holomorphy failure: {e}", file=sys.stderr)
        return EXIT_NON_DIVISIBLE
    except (VerificationFailure, NotSimple) as e:
        print(f"verification failed: {e}", file=sys.stderr)
        return EXIT_VERIFICATION
    except (LatticeSumError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
