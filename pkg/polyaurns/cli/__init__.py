"""
Command line front end.

    polyaurns compose product classic.json friedman.json --out fxf.json
    polyaurns report fxf.json --pretty
    polyaurns simulate fxf.json --steps 1000000 --replicas 8 --seed 7 --out runs/
    polyaurns verify semiring --trials 100 --seed 7
    polyaurns walk c5.json --start 0

JSON goes to stdout (or --out), logging to stderr. Exit codes: 0 success,
1 failed verification, 2 bad input.
"""
import argparse
import csv
import logging
import os
import sys
from dataclasses import dataclass
from functools import reduce
from typing import Optional, Tuple

import numpy as np

from .. import api
from .. import fields as f
from ..algebra import (ISOMORPHISM_CAP, check_semiring_laws, disjoint_union,
                       product)
from ..analysis import (AssumptionReport, check_assumption_preservation,
                        check_assumptions, dominance_partition, product_limit)
from ..documents import SpectrumEntry, dump_urn, law_report_to_document, read_urn
from ..errors import (AssumptionsFail, DegenerateNormalization, PolyaError,
                      SizeCapExceeded, ZeroSteps)
from ..graphs import check_walk_products, read_graph, walk_urn
from ..intensity import (PERMUTATION_CAP, check_matrix_semiring_laws,
                         check_phi_morphism, intensity_matrix)
from ..simulator import (RNG_NAME, composition_series, export_trace,
                         normalized_composition, run_replicas, urn_hash)
from ..spectra import DEFAULT_TOL, check_sigma_morphism, spectrum, spectrum_to_document
from ..strictbase import StrictRecord
from ..validators import ValidationError

log = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2


@dataclass(frozen=True)
class CommandConfig:
    command: str
    inputs: Tuple[str, ...] = ()
    op: Optional[str] = None
    suite: Optional[str] = None
    seed: int = 0
    tol: float = DEFAULT_TOL
    steps: int = 0
    replicas: int = 1
    trials: int = 100
    cap: Optional[int] = None
    workers: int = 1
    stride: int = 1
    start: int = 0
    out: Optional[str] = None
    csv: Optional[str] = None
    pretty: bool = False
    msg_pack: bool = False

    @classmethod
    def from_args(cls, args):
        config = cls(
            command=args.command,
            inputs=tuple(getattr(args, 'inputs', ()) or ()),
            op=getattr(args, 'op', None),
            suite=getattr(args, 'suite', None),
            seed=args.seed, tol=args.tol,
            steps=getattr(args, 'steps', 0),
            replicas=getattr(args, 'replicas', 1),
            trials=getattr(args, 'trials', 100),
            cap=args.cap,
            workers=getattr(args, 'workers', 1),
            stride=getattr(args, 'stride', 1),
            start=getattr(args, 'start', 0),
            out=args.out, csv=getattr(args, 'csv', None),
            pretty=args.pretty, msg_pack=getattr(args, 'msgpack', False))
        config.check()
        return config

    def check(self):
        if not self.tol > 0:
            raise ValidationError('tolerance must be positive', path=['tol'], value=self.tol)
        for name in ('steps', 'replicas', 'trials', 'workers', 'start'):
            if getattr(self, name) < 0:
                raise ValidationError('must not be negative', path=[name],
                                      value=getattr(self, name))
        if self.stride < 1:
            raise ValidationError('must be positive', path=['stride'], value=self.stride)
        if self.cap is not None and self.cap < 0:
            raise ValidationError('must not be negative', path=['cap'], value=self.cap)

    def cap_or(self, default):
        return default if self.cap is None else self.cap


def default_seed():
    raw = os.environ.get('POLYA_SEED')
    if raw is None or raw == '':
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ValidationError('POLYA_SEED is not an integer', value=raw)


class UrnReport(StrictRecord):
    colours = api.slist(f.String)
    intensity = api.slist(f.ListField, api.ref(f.Rational))
    spectrum = api.slist(SpectrumEntry)
    classes = api.slist(f.ListField, api.ref(f.String))
    dominating_class = api.opt(f.Int)
    assumptions = api.ref(AssumptionReport)


class SimulationSummary(StrictRecord):
    seed = api.ref(f.Int)
    rng = api.ref(f.String)
    urn_hash = api.ref(f.String)
    steps = api.ref(f.NonNegativeInt)
    replicas = api.ref(f.NonNegativeInt)
    zero_steps = api.ref(f.Bool)
    extinct_replicas = api.slist(f.Int)
    mean_composition = api.optlist(f.Float)
    predicted_limit = api.optlist(f.Float)
    relative_error = api.optlist(f.Float)
    prediction_note = api.opt(f.String)


def _write(config, text):
    if config.out:
        with open(config.out, 'w') as fh:
            fh.write(text + '\n')
    else:
        sys.stdout.write(text + '\n')


def _emit(config, record, pretty=None):
    if config.pretty and pretty is not None:
        _write(config, pretty(record))
    else:
        _write(config, record.to_string(indent=2 if config.pretty else None))


def cmd_compose(config):
    urns = [read_urn(path) for path in config.inputs]
    op = product if config.op == 'product' else disjoint_union
    composed = reduce(op, urns)
    log.info('%s of %d urns: %d colours', config.op, len(urns), composed.colour_count)
    _write(config, dump_urn(composed, indent=2))
    return EXIT_OK


def _pretty_report(report):
    lines = ['colours: ' + ' '.join(report.colours), 'intensity:']
    lines += ['  ' + ' '.join('{0:>8}'.format(str(x)) for x in row) for row in report.intensity]
    lines.append('spectrum:')
    lines += ['  {0:.6g}{1:+.6g}i  x{2}'.format(e.re, e.im, e.mult) for e in report.spectrum]
    lines.append('classes: ' + ' | '.join(','.join(c) for c in report.classes))
    assumptions = report.assumptions
    for name in ('a1', 'a2', 'a3', 'a4', 'a5', 'a6'):
        check = assumptions[name]
        lines.append('{0}: {1:<5} {2}'.format(name.upper(), str(check.holds), check.detail))
    if assumptions.lambda1 is not None:
        lines.append('lambda1 = {0:.6g}'.format(assumptions.lambda1))
    return '\n'.join(lines)


def cmd_report(config):
    urn = read_urn(config.inputs[0])
    labels = urn.colour_labels()
    A = intensity_matrix(urn)
    partition = dominance_partition(urn)
    report = UrnReport(
        colours=labels,
        intensity=[list(row) for row in A],
        spectrum=spectrum_to_document(spectrum(A, config.tol)),
        classes=[[labels[i] for i in sorted(c)] for c in partition.classes],
        dominating_class=partition.dominating_class,
        assumptions=check_assumptions(urn, config.tol))
    _emit(config, report, _pretty_report)
    return EXIT_OK


def _prediction(urn, tol):
    try:
        return product_limit(urn, tol), None
    except (AssumptionsFail, DegenerateNormalization) as exc:
        return None, str(exc)


def cmd_simulate(config):
    urn = read_urn(config.inputs[0])
    traces = run_replicas(urn, config.steps, config.seed, config.replicas,
                          workers=config.workers, snapshot_stride=config.stride)
    data = dict(seed=config.seed, rng=RNG_NAME, urn_hash=urn_hash(urn),
                steps=config.steps, replicas=config.replicas,
                extinct_replicas=[k for k, t in enumerate(traces) if t.final.extinct])
    try:
        compositions = [normalized_composition(t) for t in traces]
    except ZeroSteps:
        compositions = None
    data['zero_steps'] = compositions is None or not compositions
    if compositions:
        mean = np.mean(compositions, axis=0)
        data['mean_composition'] = [float(x) for x in mean]
        predicted, note = _prediction(urn, config.tol)
        if predicted is not None:
            limit = np.array(predicted.limit)
            scale = np.where(limit != 0, np.abs(limit), 1.0)
            data['predicted_limit'] = list(predicted.limit)
            data['relative_error'] = [float(x) for x in np.abs(mean - limit) / scale]
        if note:
            data['prediction_note'] = note
    summary = SimulationSummary(**data)
    if config.out:
        _write_replicas(config, traces, summary)
    else:
        _write(config, summary.to_string(indent=2 if config.pretty else None))
    if config.csv and traces:
        _write_csv(config.csv, traces[0])
    return EXIT_OK


def _write_replicas(config, traces, summary):
    os.makedirs(config.out, exist_ok=True)
    suffix, mode = ('msgpack', 'wb') if config.msg_pack else ('jsonl', 'w')
    for k, trace in enumerate(traces):
        with open(os.path.join(config.out, 'replica-{0}.{1}'.format(k, suffix)), mode) as fh:
            export_trace(trace, fh, msg_pack=config.msg_pack)
    with open(os.path.join(config.out, 'summary.json'), 'w') as fh:
        fh.write(summary.to_string(indent=2) + '\n')


def _write_csv(path, trace):
    with open(path, 'w', newline='') as fh:
        writer = csv.writer(fh)
        writer.writerow(['step'] + ['x{0}'.format(i) for i in range(len(trace.final.counts))])
        for step, composition in composition_series(trace):
            writer.writerow([step] + ['{0:.10g}'.format(x) for x in composition])


SUITES = {
    'semiring': lambda c: check_semiring_laws(
        trials=c.trials, seed=c.seed, cap=c.cap_or(ISOMORPHISM_CAP)),
    'phi': lambda c: check_phi_morphism(
        trials=c.trials, seed=c.seed, cap=c.cap_or(PERMUTATION_CAP)),
    'sigma': lambda c: check_sigma_morphism(trials=c.trials, seed=c.seed, tol=c.tol),
    'matrix-laws': lambda c: check_matrix_semiring_laws(
        trials=c.trials, seed=c.seed, cap=c.cap_or(PERMUTATION_CAP)),
    'graph': lambda c: check_walk_products(cap=c.cap_or(ISOMORPHISM_CAP)),
    'assumptions': lambda c: check_assumption_preservation(
        trials=c.trials, seed=c.seed, tol=c.tol),
}


def _pretty_laws(doc):
    lines = []
    for name, outcome in sorted(doc.laws.items()):
        status = 'ok' if outcome['pass'] else 'FAILED in trial {0}'.format(outcome.trial)
        lines.append('{0:<28} {1}'.format(name, status))
    lines.append('{0} trials, {1}'.format(doc.trials, 'passed' if doc.passed else 'FAILED'))
    return '\n'.join(lines)


def cmd_verify(config):
    report = SUITES[config.suite](config)
    _emit(config, law_report_to_document(report), _pretty_laws)
    if not report.passed:
        log.warning('%s: failing laws %s', config.suite, ', '.join(report.failures()))
        return EXIT_FAILED
    return EXIT_OK


def cmd_walk(config):
    graph = read_graph(config.inputs[0])
    _write(config, dump_urn(walk_urn(graph, config.start), indent=2))
    return EXIT_OK


COMMANDS = {
    'compose': cmd_compose,
    'report': cmd_report,
    'simulate': cmd_simulate,
    'verify': cmd_verify,
    'walk': cmd_walk,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=None,
                        help='64-bit seed (default: $POLYA_SEED, then 0)')
    common.add_argument('--tol', type=float, default=DEFAULT_TOL)
    common.add_argument('--cap', type=int, default=None,
                        help='isomorphism / permutation search cap')
    common.add_argument('--out', default=None)
    common.add_argument('--pretty', action='store_true')
    common.add_argument('-v', '--verbose', action='count', default=0)

    parser = argparse.ArgumentParser(prog='polyaurns', description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest='command', required=True)

    compose = sub.add_parser('compose', parents=[common], help='disjoint union or product of urn files')
    compose.add_argument('op', choices=['union', 'product'])
    compose.add_argument('inputs', nargs='+')

    report = sub.add_parser('report', parents=[common], help='intensity, spectrum, classes, assumptions')
    report.add_argument('inputs', nargs=1)

    simulate = sub.add_parser('simulate', parents=[common], help='Monte Carlo replicas')
    simulate.add_argument('inputs', nargs=1)
    simulate.add_argument('--steps', type=int, default=1000)
    simulate.add_argument('--replicas', type=int, default=1)
    simulate.add_argument('--workers', type=int, default=1)
    simulate.add_argument('--stride', type=int, default=1)
    simulate.add_argument('--csv', default=None, help='composition vs n of replica 0')
    simulate.add_argument('--msgpack', action='store_true', help='msgpack traces under --out')

    verify = sub.add_parser('verify', parents=[common], help='randomized law checks')
    verify.add_argument('suite', choices=sorted(SUITES))
    verify.add_argument('--trials', type=int, default=100)

    walk = sub.add_parser('walk', parents=[common], help='walk urn of a graph file')
    walk.add_argument('inputs', nargs=1)
    walk.add_argument('--start', type=int, default=0)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, stream=sys.stderr,
                        format='%(levelname)s %(name)s: %(message)s')
    try:
        if args.seed is None:
            args.seed = default_seed()
        config = CommandConfig.from_args(args)
        return COMMANDS[config.command](config)
    except (ValidationError, SizeCapExceeded, ValueError, OSError) as exc:
        # json.JSONDecodeError is a ValueError
        log.error('%s', exc)
        sys.stderr.write('error: {0}\n'.format(exc))
        return EXIT_INPUT
    except PolyaError as exc:
        log.error('%s', exc)
        return EXIT_FAILED
