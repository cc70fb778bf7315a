"""
Dominance structure, the assumptions (A1)-(A6), the top of the spectrum,
the almost-sure limit of a product urn and the second-moment identities of
products.

Colour i dominates colour j when drawing i eventually produces j: (A^n)[j, i]
> 0 for some n >= 0. It is computed as reachability in the digraph with an
arc i -> j whenever A[j, i] > 0, which is the same relation for matrices
with nonnegative off-diagonal entries.
"""
import logging
import math
from dataclasses import dataclass
from typing import FrozenSet, Optional, Tuple

import networkx as nx
import numpy as np
import scipy.linalg

from .. import api
from .. import fields as f
from ..algebra import ProductColourIndexing, UrnSampler, product
from ..errors import AssumptionsFail, DegenerateNormalization, NonRealTop
from ..exact import matrices_equal, to_float, unit_matrix, zero_matrix
from ..intensity import intensity_matrix, kronecker_product, matrix_power
from ..laws import LawReport, trial_stream
from ..spectra import DEFAULT_TOL, spectrum
from ..strictbase import StrictRecord
from ..urn import second_moment_matrix

log = logging.getLogger(__name__)

ASSUMPTIONS = ('a1', 'a2', 'a3', 'a4', 'a5', 'a6')
EIGEN_CLUSTER_TOL = 1e-4

PRODUCT_LAWS = tuple(name + '_preserved' for name in ASSUMPTIONS) + (
    'product_partition', 'product_eigenvalues', 'b_identities')


@dataclass(frozen=True)
class DominancePartition:
    """
    Classes in order of their smallest colour; ``order`` holds (s, t) when
    class s dominates class t, reflexive pairs included.
    """
    classes: Tuple[FrozenSet[int], ...]
    order: FrozenSet[Tuple[int, int]]
    dominating_class: Optional[int]

    def class_of(self, colour):
        for s, members in enumerate(self.classes):
            if colour in members:
                return s
        raise KeyError(colour)

    def dominates(self, s, t):
        return (s, t) in self.order

    @property
    def irreducible(self):
        return len(self.classes) == 1

    def dominating_colours(self):
        if self.dominating_class is None:
            return frozenset()
        return self.classes[self.dominating_class]


def dominance_digraph(A):
    q = A.shape[0]
    graph = nx.DiGraph()
    graph.add_nodes_from(range(q))
    graph.add_edges_from((i, j) for i in range(q) for j in range(q)
                         if i != j and A[j, i] > 0)
    return graph


def partition_from_matrix(A):
    graph = dominance_digraph(A)
    condensed = nx.condensation(graph)
    members = {node: frozenset(data['members']) for node, data in condensed.nodes(data=True)}
    ranked = sorted(members, key=lambda node: min(members[node]))
    position = {node: s for s, node in enumerate(ranked)}
    closure = nx.transitive_closure(condensed, reflexive=True)
    order = frozenset((position[a], position[b]) for a, b in closure.edges())
    classes = tuple(members[node] for node in ranked)
    maxima = [s for s in range(len(classes))
              if all((s, t) in order for t in range(len(classes)))]
    return DominancePartition(classes, order, maxima[0] if maxima else None)


def dominance_partition(urn):
    return partition_from_matrix(intensity_matrix(urn))


def _as_sets(partition):
    classes = partition.classes
    order = frozenset((classes[s], classes[t]) for s, t in partition.order)
    top = classes[partition.dominating_class] if partition.dominating_class is not None else None
    return frozenset(classes), order, top


def product_partition_check(u, u2):
    """
    The product's classes are the products of factor classes, ordered
    componentwise, and dominating exactly when both factors are.
    """
    direct = dominance_partition(product(u, u2))
    left, right = dominance_partition(u), dominance_partition(u2)
    idx = ProductColourIndexing(u.colour_count, u2.colour_count)
    pairs = [(s, t) for s in range(len(left.classes)) for t in range(len(right.classes))]
    block = {(s, t): frozenset(idx.flat(i, j) for i in left.classes[s] for j in right.classes[t])
             for s, t in pairs}
    classes = frozenset(block.values())
    order = frozenset((block[a], block[b]) for a in pairs for b in pairs
                      if left.dominates(a[0], b[0]) and right.dominates(a[1], b[1]))
    top = None
    if left.dominating_class is not None and right.dominating_class is not None:
        top = block[(left.dominating_class, right.dominating_class)]
    return _as_sets(direct) == (classes, order, top)


def power_entry_positivity(A, A2, n, n2, source, target):
    """
    One term of the binomial expansion of (A boxplus A')^(n + n'):
    binom(n + n', n') (A^n)[k, i] (A'^n')[l, j] for source (i, j) and
    target (k, l). Returns (term > 0, both factors > 0).
    """
    (i, j), (k, l) = source, target
    left = matrix_power(A, n)[k, i]
    right = matrix_power(A2, n2)[l, j]
    term = math.comb(n + n2, n2) * left * right
    return term > 0, (left > 0 and right > 0)


def largest_real_eigenvalue(A, tol=DEFAULT_TOL):
    """
    (lambda1, algebraic multiplicity, right eigenvector). The eigenvector has
    unit length and is signed so that its entries on the dominating class
    are nonnegative; without a dominating class, or when the vector vanishes
    there, its largest entry in absolute value is positive.
    """
    M = np.asarray(to_float(A) if A.dtype == object else A, dtype=float)
    if M.shape[0] == 0:
        raise ValueError('an empty matrix has no eigenvalues')
    top, mult = spectrum(M, tol).top()
    if abs(top.imag) > tol:
        raise NonRealTop(top, tol)
    values, vectors = scipy.linalg.eig(M)
    k = int(np.argmin(np.abs(values - top.real)))
    v = np.real(vectors[:, k])
    v = v / np.linalg.norm(v)
    colours = np.array(sorted(partition_from_matrix(M).dominating_colours()), dtype=int)
    dominating = v[colours]
    pivot = dominating if dominating.size and np.max(np.abs(dominating)) > tol else v
    if pivot[np.argmax(np.abs(pivot))] < 0:
        v = -v
    return float(top.real), mult, v


def second_real_part(m):
    """Re lambda2, counting multiplicity; None below two eigenvalues."""
    parts = sorted((z.real for z in m.expanded()), reverse=True)
    return parts[1] if len(parts) > 1 else None


class AssumptionCheck(StrictRecord):
    holds = api.ref(f.Bool)
    detail = api.ref(f.String)


class AssumptionReport(StrictRecord):
    a1 = api.ref(AssumptionCheck)
    a2 = api.ref(AssumptionCheck)
    a3 = api.ref(AssumptionCheck)
    a4 = api.ref(AssumptionCheck)
    a5 = api.ref(AssumptionCheck)
    a6 = api.ref(AssumptionCheck)
    lambda1 = api.opt(f.Float)
    lambda2_real = api.opt(f.Float)
    multiplicity_lambda1 = api.ref(f.NonNegativeInt)
    gap = api.opt(f.Float)
    second_moments = api.slist(f.ListField, api.ref(f.ListField, api.ref(f.Rational)))

    def failed(self):
        return [name for name in ASSUMPTIONS if not self[name].holds]

    @property
    def all_hold(self):
        return not self.failed()


def _check(holds, detail):
    return {'holds': bool(holds), 'detail': detail}


def check_assumptions(urn, tol=DEFAULT_TOL):
    moments = [[list(row) for row in second_moment_matrix(urn, i)]
               for i in range(urn.colour_count)]
    data = dict(a1=_check(True, 'structural'),
                a2=_check(True, 'finite support'),
                second_moments=moments)
    if urn.colour_count == 0:
        for name in ASSUMPTIONS[2:]:
            data[name] = _check(False, 'no colours')
        return AssumptionReport(multiplicity_lambda1=0, **data)

    A = intensity_matrix(urn)
    eigenvalues = spectrum(to_float(A), tol)
    lambda1, mult, _ = largest_real_eigenvalue(A, tol)
    lambda2 = second_real_part(eigenvalues)
    partition = partition_from_matrix(A)
    dominating = sorted(partition.dominating_colours())

    data['a3'] = _check(lambda1 > tol, 'lambda1 = {0:.6g}'.format(lambda1))
    data['a4'] = _check(mult == 1, 'multiplicity {0}'.format(mult))
    if not dominating:
        data['a5'] = _check(False, 'no dominating class')
        data['a6'] = _check(False, 'no dominating class')
    else:
        seeded = [i for i in dominating if urn.initial[i] > 0]
        data['a5'] = _check(seeded, 'dominating colours {0}, seeded {1}'.format(dominating, seeded))
        restricted = to_float(A)[np.ix_(dominating, dominating)]
        top = spectrum(restricted, tol).top()[0].real
        data['a6'] = _check(abs(top - lambda1) <= tol,
                            'top eigenvalue on dominating class {0:.6g}'.format(top))
    data.update(lambda1=lambda1, multiplicity_lambda1=mult)
    if lambda2 is not None:
        data.update(lambda2_real=lambda2, gap=lambda1 - 2 * lambda2)
    report = AssumptionReport(**data)
    log.debug('assumptions on %d colours, failing: %s', urn.colour_count, report.failed())
    return report


def assumption_preservation(u, u2, tol=DEFAULT_TOL):
    """name -> (holds for u, holds for u2, holds for the product)."""
    reports = [check_assumptions(urn, tol) for urn in (u, u2, product(u, u2))]
    return {name: tuple(r[name].holds for r in reports) for name in ASSUMPTIONS}


def _require(urn, which, tol):
    report = check_assumptions(urn, tol)
    if not report.all_hold:
        raise AssumptionsFail(which, report.failed())
    return report


def normalized_eigenvector(urn, tol=DEFAULT_TOL):
    """(lambda1, v1) with <a, v1> = 1."""
    lambda1, _, v = largest_real_eigenvalue(intensity_matrix(urn), tol)
    a = np.array([float(x) for x in urn.activities])
    norm = float(a @ v)
    if abs(norm) <= tol:
        raise DegenerateNormalization('<a, v1> = {0:.3g}'.format(norm))
    return lambda1, v / norm


class LimitPrediction(StrictRecord):
    lambda1_sum = api.ref(f.Float)
    v = api.slist(f.Float)
    S = api.ref(f.Float)
    limit = api.slist(f.Float)


def limit_prediction(u, u2, tol=DEFAULT_TOL):
    """
    Almost-sure limit of n^-1 X(n) for product(u, u2), conditioned on
    essential non-extinction: S^-1 (lambda1 + lambda1') (v1 (x) v1').
    """
    _require(u, 'left', tol)
    _require(u2, 'right', tol)
    lambda1, v1 = normalized_eigenvector(u, tol)
    lambda2, v2 = normalized_eigenvector(u2, tol)
    v = np.kron(v1, v2)
    S = float(v1.sum() + v2.sum())
    total = lambda1 + lambda2
    return LimitPrediction(lambda1_sum=total, v=[float(x) for x in v], S=S,
                           limit=[float(x) for x in total * v / S])


def product_limit(urn, tol=DEFAULT_TOL):
    """Prediction for a urn built by product(), else None."""
    if urn.factors is None:
        return None
    return limit_prediction(*urn.factors, tol=tol)


class ProductEigenCheck(StrictRecord):
    lambda1_product = api.opt(f.Float)
    lambda1_sum = api.opt(f.Float)
    lambda2_product = api.opt(f.Float)
    lambda2_predicted = api.opt(f.Float)
    lambda1_ok = api.ref(f.Bool)
    lambda2_ok = api.ref(f.Bool)


def product_eigen_check(u, u2, tol=DEFAULT_TOL, cluster_tol=EIGEN_CLUSTER_TOL):
    """
    lambda1 of the product is lambda1 + lambda1'; Re lambda2 of the product
    is the larger of Re(lambda1 + lambda2') and Re(lambda2 + lambda1') over
    the candidates that exist. Eigenvalues are grouped with the wider
    ``cluster_tol`` first: the computed eigenvalues of a Jordan block of
    size k scatter like eps^(1/k), their mean does not.
    """
    if u.colour_count == 0 or u2.colour_count == 0:
        return ProductEigenCheck(lambda1_ok=True, lambda2_ok=True)
    sx = spectrum(intensity_matrix(product(u, u2)), cluster_tol)
    s1 = spectrum(intensity_matrix(u), cluster_tol)
    s2 = spectrum(intensity_matrix(u2), cluster_tol)
    l1x, l1, l1p = sx.top()[0].real, s1.top()[0].real, s2.top()[0].real
    l2x = second_real_part(sx)
    candidates = []
    if second_real_part(s2) is not None:
        candidates.append(l1 + second_real_part(s2))
    if second_real_part(s1) is not None:
        candidates.append(second_real_part(s1) + l1p)
    predicted = max(candidates) if candidates else None
    if l2x is None or predicted is None:
        lambda2_ok = l2x is None and predicted is None
    else:
        lambda2_ok = abs(l2x - predicted) <= tol
    return ProductEigenCheck(lambda1_product=l1x, lambda1_sum=l1 + l1p,
                             lambda2_product=l2x, lambda2_predicted=predicted,
                             lambda1_ok=abs(l1x - (l1 + l1p)) <= tol,
                             lambda2_ok=lambda2_ok)


def aggregate_B(urn, v1):
    """B = sum_i v1_i a_i B_i in doubles."""
    q = urn.colour_count
    if len(v1) != q:
        raise ValueError('v1 has {0} entries for {1} colours'.format(len(v1), q))
    B = np.zeros((q, q))
    for i in range(q):
        weight = float(v1[i]) * float(urn.activities[i])
        if weight:
            B += weight * to_float(second_moment_matrix(urn, i))
    return B


class BIdentityReport(StrictRecord):
    per_colour_exact = api.ref(f.Bool)
    aggregate_ok = api.opt(f.Bool)
    aggregate_error = api.opt(f.Float)


def product_colour_moment(u, u2, i, j):
    """
    (a_i / (a_i + a'_j)) B_i (x) E_jj + (a'_j / (a_i + a'_j)) E_ii (x) B'_j,
    the zero matrix when a_i + a'_j = 0.
    """
    q, q2 = u.colour_count, u2.colour_count
    a, b = u.activities[i], u2.activities[j]
    total = a + b
    if total == 0:
        return zero_matrix(q * q2)
    return (a / total) * kronecker_product(second_moment_matrix(u, i), unit_matrix(q2, q2, j, j)) + \
        (b / total) * kronecker_product(unit_matrix(q, q, i, i), second_moment_matrix(u2, j))


def product_B_identities(u, u2, tol=DEFAULT_TOL, aggregate=True):
    """
    Per product colour, the second moment of the product measure against
    the factor formula, exactly. With ``aggregate`` the weighted sum
    B_x = sum v_x a_x B_x is also compared with
    S^-1 (B (x) diag(v1') + diag(v1) (x) B') within tol; that needs both
    factors to satisfy (A1)-(A6).
    """
    prod = product(u, u2)
    idx = ProductColourIndexing(u.colour_count, u2.colour_count)
    exact = all(matrices_equal(second_moment_matrix(prod, idx.flat(i, j)),
                               product_colour_moment(u, u2, i, j))
                for i, j in idx.pairs())
    if not aggregate:
        return BIdentityReport(per_colour_exact=exact)
    _require(u, 'left', tol)
    _require(u2, 'right', tol)
    _, v1 = normalized_eigenvector(u, tol)
    _, v2 = normalized_eigenvector(u2, tol)
    S = float(v1.sum() + v2.sum())
    direct = aggregate_B(prod, np.kron(v1, v2) / S)
    formula = (np.kron(aggregate_B(u, v1), np.diag(v2)) +
               np.kron(np.diag(v1), aggregate_B(u2, v2))) / S
    error = float(np.max(np.abs(direct - formula))) if direct.size else 0.0
    return BIdentityReport(per_colour_exact=exact, aggregate_ok=error <= tol,
                           aggregate_error=error)


def check_assumption_preservation(sampler=None, trials=50, seed=0, tol=DEFAULT_TOL,
                                  qualifying=20, max_trials=2000):
    """
    Randomized check of the product rules: each assumption holding for both
    factors holds for the product, the product's dominance partition is the
    product of the factors' partitions, the top of the spectrum adds up and
    the per-colour second moments follow the factor formula.

    Runs at least ``trials`` pairs and keeps sampling, up to ``max_trials``,
    until every assumption held for both factors in ``qualifying`` pairs.
    A preservation law whose hypotheses were met fewer times than that fails.
    """
    sampler = sampler or UrnSampler()
    report = LawReport.for_laws(PRODUCT_LAWS, trials)
    counts = dict.fromkeys(ASSUMPTIONS, 0)
    for trial, rng in enumerate(trial_stream(seed)):
        if trial >= max_trials or (trial >= trials and min(counts.values()) >= qualifying):
            break
        u, u2 = sampler.sample(rng), sampler.sample(rng)
        for name, (left, right, prod) in assumption_preservation(u, u2, tol).items():
            if left and right:
                counts[name] += 1
                report.record(name + '_preserved', prod, trial, (u, u2))
        report.record('product_partition', product_partition_check(u, u2), trial, (u, u2))
        eigen = product_eigen_check(u, u2, tol)
        report.record('product_eigenvalues', eigen.lambda1_ok and eigen.lambda2_ok,
                      trial, (u, u2))
        moments = product_B_identities(u, u2, tol, aggregate=False)
        report.record('b_identities', moments.per_colour_exact, trial, (u, u2))
    report.trials = trial
    for name, count in counts.items():
        report.qualifying[name + '_preserved'] = count
        if count < qualifying:
            log.warning('only %d of %d pairs satisfied %s on both sides',
                        count, trial, name)
            report.record(name + '_preserved', False, trial, ())
    return report
