"""
Seeded realisations of the urn chain.

Every step draws colour i with probability a_i X_i / <a, X>, then an atom
of mu_i, and adds its increment. The chain stops once <a, X> = 0.

Generator: numpy PCG64, seeded with a 64-bit integer. Replicas get their
seeds from ``numpy.random.SeedSequence(seed).spawn(replicas)``, one child
per replica. Each step consumes three uniforms (colour, mixture component,
atom) drawn in batches, so a trace depends only on (urn, seed, n_steps).

For product urns the draw log records which factor's measure the atom
came from: 0 for the left factor, 1 for the right, -1 when the urn is not
a product.
"""
import hashlib
import json
import logging
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Optional, Tuple

import msgpack
import numpy as np
from scipy.stats import chi2_contingency

from .. import api
from .. import fields as f
from ..algebra import product
from ..documents import urn_to_document
from ..errors import (AlreadyExtinct, ConvergenceFailure, NotASlowedProduct,
                      ZeroSteps)
from ..strictbase import StrictRecord
from ..urn import scalar_urn

log = logging.getLogger(__name__)

RNG_NAME = 'numpy.random.PCG64'
BATCH = 4096

LEFT, RIGHT, NO_COMPONENT = 0, 1, -1


@dataclass(frozen=True)
class UrnState:
    counts: Tuple[int, ...]
    step: int
    extinct: bool


@dataclass(frozen=True)
class SimulationTrace:
    """
    ``states`` are snapshots every ``stride`` steps plus the last state;
    ``draws`` has one row (colour, atom, component) per step taken, or is
    None when the draw log was not kept.
    """
    seed: int
    rng: str
    urn_hash: str
    stride: int
    states: Tuple[UrnState, ...]
    draws: Optional[np.ndarray] = field(default=None, compare=False)

    @property
    def final(self):
        return self.states[-1]


def urn_hash(urn):
    data = json.dumps(urn_to_document(urn).simplify(), sort_keys=True)
    return hashlib.sha256(data.encode('utf-8')).hexdigest()


def _atom_table(measure, position):
    """Cumulative probabilities paired with the atom's index in ``position``."""
    table, acc = [], 0.0
    for inc, p in measure.atoms:
        acc += float(p)
        table.append((acc, position[inc]))
    return table


class CompiledUrn(object):
    """
    The urn in a form cheap to step: integer colour weights (activities
    scaled by a common denominator), per-colour cumulative atom tables and
    sparse increments.
    """

    def __init__(self, urn):
        self.urn = urn
        scale = math.lcm(*(a.denominator for a in urn.activities)) if urn.activities else 1
        self.weights = [int(a * scale) for a in urn.activities]
        self.increments = []
        self.tables = []
        self.components = []
        for i, measure in enumerate(urn.measures):
            position = {inc: k for k, (inc, _) in enumerate(measure.atoms)}
            self.increments.append([
                ([(j, x) for j, x in enumerate(inc) if x],
                 sum(self.weights[j] * x for j, x in enumerate(inc)))
                for inc, _ in measure.atoms])
            self.tables.append(_atom_table(measure, position))
            mixture = urn.mixtures[i] if urn.mixtures is not None else None
            if mixture is None:
                self.components.append(None)
            else:
                # a component with weight 0 contributes no atoms to the measure
                (w_left, left), (w_right, right) = mixture
                self.components.append((float(w_left),
                                        _atom_table(left, position) if w_left else [],
                                        _atom_table(right, position) if w_right else []))

    def weight(self, counts):
        return sum(w * x for w, x in zip(self.weights, counts))

    def _pick_colour(self, counts, total, u):
        target = u * total
        acc = 0
        last = None
        for i, w in enumerate(self.weights):
            if w and counts[i]:
                acc += w * counts[i]
                last = i
                if target < acc:
                    return i
        return last

    @staticmethod
    def _pick_atom(table, u):
        for acc, k in table:
            if u < acc:
                return k
        return table[-1][1]

    def draw(self, counts, total, u1, u2, u3):
        """
        Apply one draw to ``counts`` in place; returns (colour, atom,
        component, change of total weight).
        """
        i = self._pick_colour(counts, total, u1)
        split = self.components[i]
        if split is None:
            component = NO_COMPONENT
            k = self._pick_atom(self.tables[i], u3)
        elif u2 < split[0]:
            component = LEFT
            k = self._pick_atom(split[1], u3)
        else:
            component = RIGHT
            k = self._pick_atom(split[2], u3)
        sparse, delta = self.increments[i][k]
        for j, x in sparse:
            counts[j] += x
        return i, k, component, delta


def step(urn, state, rng):
    """One transition from ``state``: (new state, drawn colour, atom index)."""
    compiled = CompiledUrn(urn)
    counts = list(state.counts)
    total = compiled.weight(counts)
    if state.extinct or total == 0:
        raise AlreadyExtinct('no ball with positive activity left at step {0}'.format(state.step))
    u1, u2, u3 = rng.random(3).tolist()
    colour, atom, _, delta = compiled.draw(counts, total, u1, u2, u3)
    return UrnState(tuple(counts), state.step + 1, total + delta == 0), colour, atom


def run(urn, n_steps, seed, snapshot_stride=1, record_draws=True, left_draws=None):
    """
    Simulate up to ``n_steps`` draws. With ``left_draws`` the run also
    stops right after the given number of left-factor draws.
    """
    if n_steps < 0:
        raise ValueError('negative step count {0}'.format(n_steps))
    if snapshot_stride < 1:
        raise ValueError('snapshot stride must be positive')
    rng = np.random.Generator(np.random.PCG64(seed))
    compiled = CompiledUrn(urn)
    counts = list(urn.initial)
    total = compiled.weight(counts)
    states = [UrnState(tuple(counts), 0, total == 0)]
    draws = []
    done = 0
    left = 0
    stopped = total == 0 or (left_draws is not None and left_draws <= 0)
    while done < n_steps and not stopped:
        for u1, u2, u3 in rng.random((min(BATCH, n_steps - done), 3)).tolist():
            colour, atom, component, delta = compiled.draw(counts, total, u1, u2, u3)
            total += delta
            done += 1
            if record_draws:
                draws.append((colour, atom, component))
            if component == LEFT:
                left += 1
            stopped = total == 0 or (left_draws is not None and left >= left_draws)
            if stopped or done % snapshot_stride == 0 or done == n_steps:
                states.append(UrnState(tuple(counts), done, total == 0))
            if stopped:
                break
    if total == 0 and done:
        log.warning('seed %d: urn essentially extinct after %d steps', seed, done)
    log.debug('seed %d: %d steps, %d left draws', seed, done, left)
    return SimulationTrace(
        seed=seed, rng=RNG_NAME, urn_hash=urn_hash(urn), stride=snapshot_stride,
        states=tuple(states),
        draws=np.array(draws, dtype=np.int64).reshape(-1, 3) if record_draws else None)


def replica_seeds(seed, replicas):
    children = np.random.SeedSequence(seed).spawn(replicas)
    return [int(child.generate_state(1, np.uint64)[0]) for child in children]


def run_replicas(urn, n_steps, seed, replicas, workers=None, snapshot_stride=1,
                 record_draws=False):
    """
    Independent replicas, one child stream each; results are in replica
    order whatever the number of workers.
    """
    seeds = replica_seeds(seed, replicas)
    job = partial(run, urn, n_steps, snapshot_stride=snapshot_stride,
                  record_draws=record_draws)
    log.info('running %d replicas of %d steps', replicas, n_steps)
    if workers and workers > 1 and replicas > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            traces = list(pool.map(job, seeds))
    else:
        traces = [job(s) for s in seeds]
    log.info('finished %d replicas', replicas)
    return traces


def normalized_composition(trace):
    final = trace.final
    if final.step == 0:
        raise ZeroSteps('trace with seed {0} took no steps'.format(trace.seed))
    return np.array(final.counts, dtype=float) / final.step


def composition_series(trace):
    """(step, counts / step) for every snapshot past step 0."""
    return [(s.step, np.array(s.counts, dtype=float) / s.step)
            for s in trace.states if s.step]


def _slowed_factor(urn):
    if urn.factors is None:
        raise NotASlowedProduct('urn is not a product')
    scalar = urn.factors[1]
    if scalar.colour_count != 1 or not scalar.measures[0].is_dirac_zero() \
            or scalar.initial != (1,):
        raise NotASlowedProduct('right factor is not a scalar urn')
    return urn.factors[0]


def slowed_embedding(trace, urn):
    """
    For ``urn`` = product(u, scalar_urn(alpha)): the steps tau(1), tau(2),
    ... at which the drawn ball evolved according to u, and the trace
    states at 0, tau(1), tau(2), ... Between those steps the state does not
    change.
    """
    _slowed_factor(urn)
    if trace.draws is None or trace.stride != 1:
        raise NotASlowedProduct('need a full trace with its draw log')
    components = trace.draws[:, 2]
    tau = tuple(int(t) + 1 for t in np.flatnonzero(components == LEFT))
    left = set(tau)
    for s in trace.states[1:]:
        if s.step not in left and s.counts != trace.states[s.step - 1].counts:
            raise NotASlowedProduct('state changed on a scalar draw at step {0}'.format(s.step))
    sampled = (trace.states[0],) + tuple(trace.states[t] for t in tau)
    return tau, sampled


class EmbeddedLawResult(StrictRecord):
    p_value = api.ref(f.Float)
    categories = api.ref(f.NonNegativeInt)
    replicas = api.ref(f.NonNegativeInt)
    extinct_slowed = api.ref(f.NonNegativeInt)
    extinct_direct = api.ref(f.NonNegativeInt)


def _pooled_table(left, right, min_count):
    totals = left + right
    common = [key for key, n in totals.items() if n >= min_count]
    rare = [key for key in totals if key not in common]
    table = [[left[key] for key in common], [right[key] for key in common]]
    if rare:
        table[0].append(sum(left[key] for key in rare))
        table[1].append(sum(right[key] for key in rare))
    return np.array(table)


def embedded_law_test(u, alpha, n, replicas, seed, min_count=10, budget=None):
    """
    Compare the law of X(tau(n)) in product(u, scalar_urn(alpha)) with the
    law of X(n) in u: two-sample chi-square on the final count vectors
    (categories seen fewer than ``min_count`` times are pooled).
    """
    slowed = product(u, scalar_urn(alpha))
    budget = budget or 100 * (n + 10)
    slowed_seeds = replica_seeds(seed, replicas)
    direct_seeds = replica_seeds(seed + 1, replicas)
    embedded, direct = Counter(), Counter()
    extinct = [0, 0]
    for s in slowed_seeds:
        trace = run(slowed, budget, s, snapshot_stride=budget, left_draws=n)
        final = trace.final
        if final.extinct:
            extinct[0] += 1
        elif int(np.sum(trace.draws[:, 2] == LEFT)) < n:
            raise ConvergenceFailure('slowed run used {0} steps without {1} u-draws'.format(budget, n))
        embedded[final.counts] += 1
    for s in direct_seeds:
        final = run(u, n, s, record_draws=False).final
        extinct[1] += final.extinct
        direct[final.counts] += 1
    table = _pooled_table(embedded, direct, min_count)
    if table.shape[1] < 2:
        p_value = 1.0
    else:
        p_value = float(chi2_contingency(table)[1])
    log.info('embedded law test: %d categories, p = %.4g', table.shape[1], p_value)
    return EmbeddedLawResult(p_value=p_value, categories=int(table.shape[1]),
                             replicas=replicas, extinct_slowed=extinct[0],
                             extinct_direct=int(extinct[1]))


class TraceHeader(StrictRecord):
    seed = api.ref(f.Int)
    rng = api.ref(f.String)
    urn_hash = api.ref(f.String)
    stride = api.ref(f.Int)
    steps = api.ref(f.NonNegativeInt)
    extinct = api.ref(f.Bool)


class Snapshot(StrictRecord):
    step = api.ref(f.NonNegativeInt)
    counts = api.slist(f.NonNegativeInt)


def trace_records(trace):
    header = TraceHeader(seed=trace.seed, rng=trace.rng, urn_hash=trace.urn_hash,
                         stride=trace.stride, steps=trace.final.step,
                         extinct=trace.final.extinct)
    return header, [Snapshot(step=s.step, counts=s.counts) for s in trace.states]


def export_trace(trace, fh, msg_pack=False):
    """
    Header then one snapshot per record: JSON lines on a text file, or a
    stream of msgpack maps on a binary one.
    """
    header, snapshots = trace_records(trace)
    for record in [header] + snapshots:
        if msg_pack:
            fh.write(record.to_string(msg_pack=True))
        else:
            fh.write(record.to_string() + '\n')


def read_trace(fh, msg_pack=False):
    if msg_pack:
        items = list(msgpack.Unpacker(fh, raw=False))
    else:
        items = [json.loads(line) for line in fh if line.strip()]
    if not items:
        raise ValueError('empty trace file')
    return TraceHeader(**items[0]), [Snapshot(**item) for item in items[1:]]
