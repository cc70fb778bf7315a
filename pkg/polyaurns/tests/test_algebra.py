from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.strategies import just, tuples

from polyaurns.algebra import (SEMIRING_LAWS, ColourBijection, UrnSampler,
                               check_semiring_laws, disjoint_union,
                               distributive_map, is_strict_embedding, product,
                               product_swap, pushforward, relabel,
                               strict_embedding, strict_isomorphic, union_swap,
                               witnessed_isomorphic)
from polyaurns.errors import NotInjective, SizeCapExceeded
from polyaurns.urn import (ReplacementMeasure, make_urn, scalar_urn, unit_urn,
                           zero_urn)

from .strategies import bijections, urns


def skewed_product(u, u2):
    """product() with the two mixture weights exchanged."""
    q, q2 = u.colour_count, u2.colour_count
    n = q * q2
    measures, activities, initial = [], [], []
    for i in range(q):
        for j in range(q2):
            a, b = u.activities[i], u2.activities[j]
            activities.append(a + b)
            initial.append(u.initial[i] * u2.initial[j])
            if a + b == 0:
                measures.append(ReplacementMeasure.zero(n))
                continue
            left = pushforward(u.measures[i], [k * q2 + j for k in range(q)], n)
            right = pushforward(u2.measures[j], [i * q2 + k for k in range(q2)], n)
            measures.append(ReplacementMeasure.mixture(
                ((b / (a + b), left), (a / (a + b), right))))
    return make_urn(n, measures, activities, initial)


def inflated_product(u, u2):
    """product() with the initial balls scaled by 2 ** ((q - 1) * (q2 - 1))."""
    urn = product(u, u2)
    if not urn.colour_count:
        return urn
    scale = 2 ** ((u.colour_count - 1) * (u2.colour_count - 1))
    return make_urn(urn.colour_count, urn.measures, urn.activities,
                    [x * scale for x in urn.initial])


def test_pushforward_identity(classic):
    measure = classic.measures[0]
    assert pushforward(measure, (0, 1), 2) == measure


def test_pushforward_into_larger_space():
    measure = ReplacementMeasure.dirac((1,))
    assert pushforward(measure, (3,), 5) == ReplacementMeasure.dirac((0, 0, 0, 1, 0))


def test_pushforward_transposition():
    measure = ReplacementMeasure.from_atoms([((2, -1), Fraction(1, 2)), ((0, 1), Fraction(1, 2))])
    swapped = pushforward(measure, (1, 0), 2)
    assert swapped == ReplacementMeasure.from_atoms(
        [((-1, 2), Fraction(1, 2)), ((1, 0), Fraction(1, 2))])


def test_pushforward_requires_injection():
    with pytest.raises(NotInjective):
        pushforward(ReplacementMeasure.dirac((1, 1)), (0, 0), 2)
    with pytest.raises(NotInjective):
        pushforward(ReplacementMeasure.dirac((1,)), (2,), 2)


def test_union_with_zero_urn(classic):
    assert disjoint_union(zero_urn(), classic) == classic
    assert disjoint_union(classic, zero_urn()) == classic


def test_union_of_two_classic_urns(classic):
    union = disjoint_union(classic, classic)
    assert union.colour_count == 4
    assert union.activities == (1, 1, 1, 1)
    assert union.initial == (1, 1, 1, 1)
    for i in range(4):
        e = [0] * 4
        e[i] = 1
        assert union.measures[i] == ReplacementMeasure.dirac(e)


def test_union_labels(classic, friedman):
    assert disjoint_union(classic, friedman).colour_labels() == (
        'red.0', 'blue.0', 'red.1', 'blue.1')
    assert disjoint_union(classic, friedman.with_labels(['x', 'y'])).colour_labels() == (
        'red', 'blue', 'x', 'y')
    assert disjoint_union(classic.with_labels(None), classic.with_labels(None)).labels is None


def test_union_commutes_by_block_swap(classic, friedman):
    forward = union_swap(2, 2)
    assert is_strict_embedding(disjoint_union(classic, friedman),
                               disjoint_union(friedman, classic), forward)


def test_product_with_unit_urn(classic):
    assert product(unit_urn(), classic) == classic
    assert product(classic, unit_urn()) == classic


def test_product_of_growing_single_colour_urns():
    grow = make_urn(1, [[((1,), 1)]], [1], [1])
    prod = product(grow, grow)
    assert prod.colour_count == 1
    assert prod.activities == (2,)
    assert prod.measures[0] == ReplacementMeasure.dirac((1,))
    assert prod.initial == (1,)


def test_product_of_scalar_urns():
    prod = product(scalar_urn(Fraction(1, 2)), scalar_urn(3))
    assert prod == scalar_urn(Fraction(7, 2))


def test_product_records_factors_and_mixtures(classic, friedman):
    prod = product(classic, friedman)
    assert prod.factors == (classic, friedman)
    assert len(prod.mixtures) == 4
    (w_left, left), (w_right, right) = prod.mixtures[0]
    assert w_left == w_right == Fraction(1, 2)
    assert prod.measures[0] == ReplacementMeasure.mixture(prod.mixtures[0])


def test_product_labels(classic, friedman):
    assert product(classic, friedman).colour_labels()[1] == '(red,blue)'


def test_product_zero_activity_pair_is_dirac_zero():
    frozen = make_urn(2, [ReplacementMeasure.zero(2), [((1, 0), 1)]], [0, 1], [1, 1])
    prod = product(frozen, unit_urn())
    assert prod.activities == (0, 1)
    assert prod.measures[0].is_dirac_zero()
    assert prod.mixtures[0] is None


def test_strict_isomorphic_to_itself(friedman):
    assert strict_isomorphic(friedman, friedman).forward in {(0, 1), (1, 0)}
    assert strict_isomorphic(zero_urn(), zero_urn()) == ColourBijection(())


def test_strict_isomorphic_finds_swap():
    urn = make_urn(2, [[((1, 0), 1)], [((0, 2), 1)]], [1, 2], [1, 3])
    swapped = relabel(urn, (1, 0))
    assert swapped.initial == (3, 1)
    assert strict_isomorphic(urn, swapped) == ColourBijection((1, 0))


def test_classic_and_friedman_not_isomorphic(classic, friedman):
    assert strict_isomorphic(classic, friedman) is None


def test_strict_embedding_into_union(classic, friedman):
    union = disjoint_union(friedman, classic)
    found = strict_embedding(classic, union)
    assert found is not None
    assert is_strict_embedding(classic, union, found)
    assert sorted(found.forward) == [2, 3]


def test_search_cap(classic):
    big = disjoint_union(classic, disjoint_union(classic, classic))
    with pytest.raises(SizeCapExceeded):
        strict_isomorphic(big, big, cap=4)


def test_witness_beyond_cap_is_still_checked(classic):
    big = disjoint_union(classic, disjoint_union(classic, classic))
    assert witnessed_isomorphic(big, big, tuple(range(6)), cap=2)


def test_bijection_helpers():
    phi = ColourBijection((2, 0, 1))
    assert phi.then(phi.inverse()) == ColourBijection.identity(3)
    assert phi.is_bijective(3)
    assert not ColourBijection((0, 0)).is_bijective(2)


def test_canonical_witnesses():
    assert union_swap(1, 2) == (2, 0, 1)
    assert product_swap(2, 3) == (0, 2, 4, 1, 3, 5)
    assert distributive_map(1, 1, 1) == (0, 1)
    assert distributive_map(2, 1, 1) == (0, 2, 1, 3)


@given(urns(), urns())
@settings(max_examples=40, deadline=None)
def test_product_commutes(u, u2):
    forward = product_swap(u.colour_count, u2.colour_count)
    assert is_strict_embedding(product(u, u2), product(u2, u), forward)


@given(urns(), urns(), urns(max_colours=2))
@settings(max_examples=25, deadline=None)
def test_product_distributes_over_union(u, u2, u3):
    q, q2, q3 = u.colour_count, u2.colour_count, u3.colour_count
    assert is_strict_embedding(product(u, disjoint_union(u2, u3)),
                               disjoint_union(product(u, u2), product(u, u3)),
                               distributive_map(q, q2, q3))


@given(urns().flatmap(lambda u: bijections(u.colour_count).map(lambda b: (u, b))))
@settings(max_examples=40, deadline=None)
def test_relabelling_is_an_isomorphism(pair):
    urn, forward = pair
    relabelled = relabel(urn, forward)
    assert is_strict_embedding(urn, relabelled, forward)
    back = ColourBijection(forward).inverse()
    assert relabel(relabelled, back) == urn


@given(urns().flatmap(lambda u: tuples(just(u), bijections(u.colour_count),
                                       bijections(u.colour_count))))
@settings(max_examples=40, deadline=None)
def test_isomorphism_is_symmetric_and_transitive(triple):
    urn, f, g = triple
    middle = relabel(urn, f)
    last = relabel(middle, g)
    there = strict_isomorphic(urn, middle)
    back = strict_isomorphic(middle, urn)
    assert there is not None and back is not None
    assert is_strict_embedding(middle, urn, back)
    assert is_strict_embedding(middle, urn, there.inverse())
    onward = strict_isomorphic(middle, last)
    assert onward is not None
    assert is_strict_embedding(urn, last, there.then(onward))
    assert strict_isomorphic(urn, last) is not None


def test_semiring_laws_hold():
    report = check_semiring_laws(trials=30, seed=7)
    assert report.passed, report.failures()
    assert set(report.laws) == set(SEMIRING_LAWS)


def test_zero_urn_sampler_passes_trivially():
    class EmptySampler(UrnSampler):
        def sample(self, rng):
            return zero_urn()

    assert check_semiring_laws(EmptySampler(), trials=5).passed


def test_skewed_product_is_caught():
    report = check_semiring_laws(trials=40, seed=3, times=skewed_product)
    assert not report.passed
    assert 'product_neutrality' in report.failures()
    outcome = report.laws['product_neutrality']
    assert outcome.counterexample is not None
    assert outcome.trial is not None


def test_inflated_product_breaks_distributivity():
    report = check_semiring_laws(trials=40, seed=3, times=inflated_product)
    failures = report.failures()
    assert 'left_distributivity' in failures
    assert 'right_distributivity' in failures
    for law in ('product_associativity', 'product_commutativity', 'product_neutrality',
                'product_annihilation', 'product_well_defined'):
        assert law not in failures
    assert len(report.laws['left_distributivity'].counterexample) == 3


def test_sampler_is_reproducible():
    sampler = UrnSampler()
    first = [sampler.sample(np.random.default_rng(5)) for _ in range(3)]
    second = [sampler.sample(np.random.default_rng(5)) for _ in range(3)]
    assert first == second


@pytest.mark.slow
def test_semiring_laws_hold_long():
    assert check_semiring_laws(trials=100, seed=7).passed
