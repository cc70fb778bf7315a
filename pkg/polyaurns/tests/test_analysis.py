from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings

from polyaurns.algebra import product
from polyaurns.analysis import (ASSUMPTIONS, aggregate_B, assumption_preservation,
                                check_assumption_preservation, check_assumptions,
                                dominance_partition, largest_real_eigenvalue,
                                limit_prediction, normalized_eigenvector,
                                partition_from_matrix, power_entry_positivity,
                                product_B_identities, product_colour_moment,
                                product_eigen_check, product_limit,
                                product_partition_check)
from polyaurns.errors import AssumptionsFail, DegenerateNormalization
from polyaurns.exact import fraction_matrix, identity_matrix, matrices_equal
from polyaurns.intensity import intensity_matrix, matrix_power
from polyaurns.urn import make_urn, scalar_urn, second_moment_matrix, unit_urn, zero_urn

from .strategies import urns


@pytest.fixture
def feeder():
    """Colour 0 adds a ball of colour 1, colour 1 adds one of its own."""
    return make_urn(2, [[((0, 1), 1)], [((0, 1), 1)]], [1, 1], [1, 1])


@pytest.fixture
def doubling_friedman():
    return make_urn(2, [[((0, 2), 1)], [((2, 0), 1)]], [1, 1], [1, 1])


def test_classic_partition(classic):
    partition = dominance_partition(classic)
    assert partition.classes == (frozenset([0]), frozenset([1]))
    assert not partition.dominates(0, 1) and not partition.dominates(1, 0)
    assert partition.dominating_class is None
    assert partition.dominating_colours() == frozenset()


def test_friedman_partition(friedman):
    partition = dominance_partition(friedman)
    assert partition.irreducible
    assert partition.dominating_class == 0
    assert partition.dominating_colours() == frozenset([0, 1])


def test_feeder_partition(feeder):
    partition = dominance_partition(feeder)
    assert partition.classes == (frozenset([0]), frozenset([1]))
    assert partition.dominates(0, 1)
    assert not partition.dominates(1, 0)
    assert partition.dominates(1, 1)
    assert partition.dominating_class == 0
    assert partition.class_of(1) == 1


def test_partition_of_empty_matrix():
    partition = partition_from_matrix(intensity_matrix(zero_urn()))
    assert partition.classes == ()
    assert partition.dominating_class is None


@given(urns(max_colours=5))
@settings(max_examples=40, deadline=None)
def test_partition_matches_power_reachability(urn):
    q = urn.colour_count
    A = intensity_matrix(urn)
    # a positive diagonal turns "some power has a positive entry" into reachability
    shifted = A.copy()
    for i in range(q):
        shifted[i, i] += 1 + max(0, -A[i, i])
    powers = [matrix_power(shifted, n) for n in range(q + 1)]

    def reaches(i, j):
        return any(P[j, i] > 0 for P in powers)

    partition = dominance_partition(urn)
    for i in range(q):
        for j in range(q):
            s, t = partition.class_of(i), partition.class_of(j)
            assert partition.dominates(s, t) == reaches(i, j)
            assert (s == t) == (reaches(i, j) and reaches(j, i))
    top = frozenset(i for i in range(q) if all(reaches(i, j) for j in range(q)))
    assert partition.dominating_colours() == top


@pytest.mark.parametrize('pair', [
    ('friedman', 'friedman'),
    ('classic', 'friedman'),
    ('feeder', 'classic'),
    ('feeder', 'friedman'),
])
def test_product_partition(request, pair):
    u, u2 = (request.getfixturevalue(name) for name in pair)
    assert product_partition_check(u, u2)
    assert product_partition_check(u, unit_urn())


def test_friedman_square_is_irreducible(friedman):
    assert dominance_partition(product(friedman, friedman)).irreducible


def test_classic_times_friedman_classes(classic, friedman):
    partition = dominance_partition(product(classic, friedman))
    assert set(partition.classes) == {frozenset([0, 1]), frozenset([2, 3])}


def test_power_entry_positivity(friedman, feeder):
    A, A2 = intensity_matrix(friedman), intensity_matrix(feeder)
    assert power_entry_positivity(A, A2, 1, 0, (0, 0), (1, 0)) == (True, True)
    assert power_entry_positivity(A, A2, 1, 1, (0, 1), (1, 0)) == (False, False)


def test_largest_real_eigenvalue():
    value, mult, v = largest_real_eigenvalue(identity_matrix(2))
    assert value == pytest.approx(1) and mult == 2
    assert np.linalg.norm(v) == pytest.approx(1)

    value, mult, v = largest_real_eigenvalue(fraction_matrix([[0, 1], [1, 0]]))
    assert value == pytest.approx(1) and mult == 1
    assert v == pytest.approx(np.array([1, 1]) / np.sqrt(2))

    value, mult, v = largest_real_eigenvalue(fraction_matrix([[1, 1], [0, 1]]))
    assert value == pytest.approx(1) and mult == 2
    assert np.abs(v) == pytest.approx(np.array([1.0, 0.0]), abs=1e-6)


def test_eigenvector_signed_on_dominating_class():
    # colour 0 dominates 1 and 2; the vector's largest entry is colour 2's and negative
    A = np.array([[2.0, 0.0, 0.0], [1.0, 1.0, 0.0], [-10.0, 1.0, 1.0]])
    assert partition_from_matrix(A).dominating_colours() == frozenset({0})
    value, mult, v = largest_real_eigenvalue(A)
    assert value == pytest.approx(2) and mult == 1
    assert v == pytest.approx(np.array([1.0, 1.0, -9.0]) / np.sqrt(83))


def test_friedman_satisfies_assumptions(friedman):
    report = check_assumptions(friedman)
    assert report.all_hold
    assert report.lambda1 == pytest.approx(1)
    assert report.multiplicity_lambda1 == 1
    assert report.lambda2_real == pytest.approx(-1)
    assert report.gap == pytest.approx(3)


def test_classic_fails_simplicity(classic):
    report = check_assumptions(classic)
    assert report.a1.holds and report.a2.holds and report.a3.holds
    assert not report.a4.holds
    assert not report.a6.holds
    assert report.multiplicity_lambda1 == 2


def test_unit_urn_fails_growth():
    report = check_assumptions(unit_urn())
    assert not report.a3.holds
    assert report.lambda1 == pytest.approx(0)


def test_empty_urn_assumptions():
    report = check_assumptions(zero_urn())
    assert report.failed() == ['a3', 'a4', 'a5', 'a6']
    assert report.lambda1 is None
    assert report.a3.detail == 'no colours'


def test_unseeded_dominating_class(friedman):
    cold = make_urn(2, friedman.measures, friedman.activities, [0, 0])
    assert check_assumptions(cold).failed() == ['a5']


def test_assumption_report_carries_second_moments(classic):
    report = check_assumptions(classic)
    assert report.second_moments[0] == ((1, 0), (0, 0))
    assert report.to_string()


def test_assumption_preservation(friedman, classic):
    assert assumption_preservation(friedman, friedman)['a4'] == (True, True, True)
    assert assumption_preservation(classic, friedman)['a4'] == (False, True, False)
    assert set(assumption_preservation(friedman, classic)) == set(ASSUMPTIONS)


def test_normalized_eigenvector(friedman):
    lambda1, v1 = normalized_eigenvector(friedman)
    assert lambda1 == pytest.approx(1)
    assert v1 == pytest.approx(np.array([0.5, 0.5]))


def test_degenerate_normalization():
    # the top eigenvector sits on the frozen colour
    leaking = make_urn(2, [[((0, 0), 1)], [((0, -1), 1)]], [0, 1], [1, 1])
    with pytest.raises(DegenerateNormalization):
        normalized_eigenvector(leaking)


def test_friedman_square_limit(friedman):
    prediction = limit_prediction(friedman, friedman)
    assert prediction.lambda1_sum == pytest.approx(2)
    assert prediction.S == pytest.approx(2)
    assert list(prediction.limit) == pytest.approx([0.25] * 4)


def test_asymmetric_limit(doubling_friedman, friedman):
    prediction = limit_prediction(doubling_friedman, friedman)
    assert prediction.lambda1_sum == pytest.approx(3)
    assert list(prediction.limit) == pytest.approx([0.375] * 4)
    activities = np.array([float(a) for a in product(doubling_friedman, friedman).activities])
    assert activities @ np.array(prediction.v) == pytest.approx(prediction.S)


def test_limit_needs_assumptions(classic, friedman):
    with pytest.raises(AssumptionsFail) as info:
        limit_prediction(classic, friedman)
    assert info.value.which == 'left'
    assert 'a4' in info.value.assumptions


def test_product_limit(friedman):
    assert product_limit(friedman) is None
    assert list(product_limit(product(friedman, friedman)).limit) == pytest.approx([0.25] * 4)


def test_aggregate_B(classic, friedman):
    assert aggregate_B(scalar_urn(1), [1.0]) == pytest.approx(np.zeros((1, 1)))
    assert aggregate_B(classic, [0.5, 0.5]) == pytest.approx(np.diag([0.5, 0.5]))
    assert aggregate_B(friedman, [0.5, 0.5]) == pytest.approx(np.diag([0.5, 0.5]))
    with pytest.raises(ValueError):
        aggregate_B(friedman, [1.0])


def test_product_moment_with_unit(classic):
    for i in range(2):
        assert matrices_equal(product_colour_moment(classic, unit_urn(), i, 0),
                              second_moment_matrix(classic, i))
    assert product_B_identities(classic, unit_urn(), aggregate=False).per_colour_exact


def test_friedman_square_moments(friedman):
    report = product_B_identities(friedman, friedman, tol=1e-9)
    assert report.per_colour_exact
    assert report.aggregate_ok
    assert report.aggregate_error <= 1e-9


def test_product_moment_of_frozen_pair():
    moment = product_colour_moment(unit_urn(), unit_urn(), 0, 0)
    assert moment.shape == (1, 1) and moment[0, 0] == 0


def test_product_eigenvalues(friedman, classic, doubling_friedman):
    check = product_eigen_check(friedman, friedman)
    assert check.lambda1_ok and check.lambda2_ok
    assert check.lambda1_product == pytest.approx(2)
    assert check.lambda2_predicted == pytest.approx(0)
    assert product_eigen_check(classic, doubling_friedman).lambda2_ok
    assert product_eigen_check(scalar_urn(Fraction(1, 2)), scalar_urn(1)).lambda2_predicted is None


def test_product_rules_suite():
    report = check_assumption_preservation(trials=50, seed=0)
    assert report.passed, report.failures()
    assert report.trials >= 50
    assert set(report.qualifying) == {name + '_preserved' for name in ASSUMPTIONS}
    assert all(count >= 20 for count in report.qualifying.values())


def test_product_rules_need_qualifying_pairs():
    report = check_assumption_preservation(trials=3, seed=0, qualifying=20, max_trials=3)
    assert report.trials == 3
    short = [name for name, count in report.qualifying.items() if count < 20]
    assert short
    assert set(short) <= set(report.failures())
    assert all(report.laws[name].counterexample == () for name in short)
