import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.strategies import integers

from polyaurns.algebra import product
from polyaurns.errors import (AlreadyExtinct, ConvergenceFailure, NotASlowedProduct,
                             ZeroSteps)
from polyaurns.simulator import (LEFT, RIGHT, RNG_NAME, UrnState, composition_series,
                                 embedded_law_test, export_trace, normalized_composition,
                                 read_trace, replica_seeds, run, run_replicas,
                                 slowed_embedding, step, urn_hash)
from polyaurns.urn import make_urn, scalar_urn

from .strategies import urns


@pytest.fixture
def draining():
    """Every draw removes the drawn ball."""
    return make_urn(1, [[((-1,), 1)]], [1], [3])


def test_scalar_step():
    state, colour, atom = step(scalar_urn(1), UrnState((1,), 0, False), np.random.default_rng(0))
    assert state == UrnState((1,), 1, False)
    assert (colour, atom) == (0, 0)


def test_classic_first_step(classic):
    for seed in range(5):
        state, colour, _ = step(classic, UrnState((1, 1), 0, False), np.random.default_rng(seed))
        assert state.counts in {(2, 1), (1, 2)}
        assert state.counts[colour] == 2


def test_draining_urn_goes_extinct(draining):
    trace = run(draining, 10, seed=0)
    assert trace.final == UrnState((0,), 3, True)
    assert len(trace.draws) == 3
    with pytest.raises(AlreadyExtinct):
        step(draining, trace.final, np.random.default_rng(0))


def test_zero_weight_start_is_extinct():
    frozen = make_urn(1, [[((0,), 1)]], [0], [4])
    trace = run(frozen, 5, seed=1)
    assert trace.states == (UrnState((4,), 0, True),)
    with pytest.raises(ZeroSteps):
        normalized_composition(trace)


def test_zero_steps(classic):
    trace = run(classic, 0, seed=3)
    assert trace.states == (UrnState((1, 1), 0, False),)
    assert len(trace.draws) == 0
    with pytest.raises(ZeroSteps):
        normalized_composition(trace)


def test_bad_arguments(classic):
    with pytest.raises(ValueError):
        run(classic, -1, seed=0)
    with pytest.raises(ValueError):
        run(classic, 5, seed=0, snapshot_stride=0)


def test_runs_are_deterministic(classic):
    first, second = run(classic, 500, seed=5), run(classic, 500, seed=5)
    assert first == second
    assert np.array_equal(first.draws, second.draws)
    assert first.rng == RNG_NAME
    assert run(classic, 500, seed=6).states != first.states


def test_classic_grows_by_one(classic):
    trace = run(classic, 250, seed=11)
    assert sum(trace.final.counts) == 252
    assert normalized_composition(trace).sum() == pytest.approx(252 / 250)


def test_snapshot_stride(classic):
    trace = run(classic, 95, seed=2, snapshot_stride=10, record_draws=False)
    assert [s.step for s in trace.states] == list(range(0, 100, 10)) + [95]
    assert trace.draws is None
    series = composition_series(trace)
    assert len(series) == 10
    assert series[-1][0] == 95


def test_unscaled_embedding_takes_every_step(classic):
    urn = product(classic, scalar_urn(0))
    trace = run(urn, 50, seed=4)
    tau, sampled = slowed_embedding(trace, urn)
    assert tau == tuple(range(1, 51))
    assert sampled == trace.states


def test_slowed_embedding(classic):
    urn = product(classic, scalar_urn(1))
    trace = run(urn, 200, seed=9)
    tau, sampled = slowed_embedding(trace, urn)
    components = trace.draws[:, 2]
    assert len(tau) == int(np.sum(components == LEFT))
    assert len(tau) + int(np.sum(components == RIGHT)) == 200
    assert [sum(s.counts) for s in sampled] == [2 + k for k in range(len(tau) + 1)]


def test_left_draw_limit(classic):
    trace = run(product(classic, scalar_urn(3)), 1000, seed=0, left_draws=7)
    assert int(np.sum(trace.draws[:, 2] == LEFT)) == 7
    assert trace.draws[-1, 2] == LEFT


@given(urns(max_colours=2), urns(max_colours=2), integers(0, 2 ** 32))
@settings(max_examples=30, deadline=None)
def test_counts_follow_the_drawn_atoms(u, u2, seed):
    for urn in (u, product(u, u2)):
        trace = run(urn, 60, seed)
        assert len(trace.draws) == trace.final.step
        for k, (colour, atom, _) in enumerate(trace.draws.tolist()):
            before, after = trace.states[k].counts, trace.states[k + 1].counts
            assert before[colour] > 0 and urn.activities[colour] > 0
            increment = urn.measures[colour].atoms[atom][0]
            assert tuple(x + d for x, d in zip(before, increment)) == after
            assert min(after) >= 0


def test_embedding_needs_a_slowed_product(classic, friedman):
    with pytest.raises(NotASlowedProduct):
        slowed_embedding(run(classic, 5, seed=0), classic)
    urn = product(classic, friedman)
    with pytest.raises(NotASlowedProduct):
        slowed_embedding(run(urn, 5, seed=0), urn)
    slowed = product(classic, scalar_urn(1))
    with pytest.raises(NotASlowedProduct):
        slowed_embedding(run(slowed, 5, seed=0, record_draws=False), slowed)


def test_replica_seeds():
    seeds = replica_seeds(42, 6)
    assert seeds == replica_seeds(42, 6)
    assert len(set(seeds)) == 6
    assert replica_seeds(42, 3) == seeds[:3]


def test_replicas_do_not_depend_on_workers(friedman):
    serial = run_replicas(friedman, 300, seed=8, replicas=3)
    pooled = run_replicas(friedman, 300, seed=8, replicas=3, workers=2)
    assert [t.final for t in serial] == [t.final for t in pooled]
    assert [t.seed for t in serial] == replica_seeds(8, 3)


def test_urn_hash(classic, friedman):
    assert urn_hash(classic) != urn_hash(friedman)
    assert len(urn_hash(classic)) == 64


def test_json_trace_export(friedman):
    trace = run(friedman, 40, seed=1, snapshot_stride=8)
    fh = io.StringIO()
    export_trace(trace, fh)
    fh.seek(0)
    header, snapshots = read_trace(fh)
    assert header.seed == 1
    assert header.rng == RNG_NAME
    assert header.urn_hash == urn_hash(friedman)
    assert header.steps == 40
    assert [s.step for s in snapshots] == [s.step for s in trace.states]
    assert snapshots[-1].counts == trace.final.counts


def test_msgpack_trace_export(draining):
    trace = run(draining, 10, seed=2)
    fh = io.BytesIO()
    export_trace(trace, fh, msg_pack=True)
    fh.seek(0)
    header, snapshots = read_trace(fh, msg_pack=True)
    assert header.extinct
    assert header.steps == 3
    assert [tuple(s.counts) for s in snapshots] == [(3,), (2,), (1,), (0,)]


def test_empty_trace_file():
    with pytest.raises(ValueError):
        read_trace(io.StringIO(''))


def test_friedman_square_composition(friedman):
    urn = product(friedman, friedman)
    for trace in run_replicas(urn, 20000, seed=0, replicas=4):
        assert normalized_composition(trace) == pytest.approx(np.full(4, 0.25), rel=0.05)


@pytest.mark.slow
def test_friedman_square_composition_long(friedman):
    urn = product(friedman, friedman)
    for trace in run_replicas(urn, 10 ** 6, seed=0, replicas=8, record_draws=False):
        assert normalized_composition(trace) == pytest.approx(np.full(4, 0.25), rel=0.02)


def test_embedded_law(friedman):
    result = embedded_law_test(friedman, 1, n=15, replicas=300, seed=0)
    assert result.p_value > 0.001
    assert result.replicas == 300
    assert result.extinct_slowed == result.extinct_direct == 0


def test_embedded_law_budget_exactly_spent(classic):
    # with a zero-activity slow factor every draw is a u-draw
    result = embedded_law_test(classic, 0, n=5, replicas=40, seed=0, budget=5)
    assert result.replicas == 40
    assert result.extinct_slowed == 0
    with pytest.raises(ConvergenceFailure):
        embedded_law_test(classic, 0, n=5, replicas=4, seed=0, budget=4)


def test_slowed_friedman_splits_draws_evenly(friedman):
    trace = run(product(friedman, scalar_urn(1)), 10 ** 5, seed=3)
    components = trace.draws[:, 2]
    assert 0.49 <= float(np.mean(components == LEFT)) <= 0.51
    for k in np.flatnonzero(components == RIGHT)[:1000]:
        assert trace.states[k + 1].counts == trace.states[k].counts


@pytest.mark.slow
def test_embedded_law_long(classic):
    result = embedded_law_test(classic, 2, n=50, replicas=10 ** 4, seed=1)
    assert result.p_value > 0.001
