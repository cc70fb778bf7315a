"""
Strict embeddings and isomorphisms of urns, disjoint union and product.

Colours of a product are pairs (i, j) flattened lexicographically to
i * q' + j; colours of a disjoint union list the left urn's colours first.
"""
import dataclasses
import logging
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from ..errors import NotInjective, SizeCapExceeded
from ..laws import LawReport, trial_generators
from ..urn import PolyaUrn, ReplacementMeasure, make_urn, unit_urn, zero_urn

log = logging.getLogger(__name__)

ISOMORPHISM_CAP = 12

SEMIRING_LAWS = (
    'union_associativity', 'union_commutativity', 'union_neutrality',
    'product_associativity', 'product_commutativity', 'product_neutrality',
    'left_distributivity', 'right_distributivity',
    'product_annihilation', 'union_well_defined', 'product_well_defined',
)


@dataclass(frozen=True)
class ColourBijection:
    """Colour map i -> forward[i]; injective, a bijection for isomorphisms."""
    forward: Tuple[int, ...]

    @classmethod
    def identity(cls, n):
        return cls(tuple(range(n)))

    def __call__(self, i):
        return self.forward[i]

    def __len__(self):
        return len(self.forward)

    def is_bijective(self, target_colour_count):
        return sorted(self.forward) == list(range(target_colour_count))

    def inverse(self):
        inv = [0] * len(self.forward)
        for i, t in enumerate(self.forward):
            inv[t] = i
        return ColourBijection(tuple(inv))

    def then(self, other):
        """First self, then other."""
        return ColourBijection(tuple(other(t) for t in self.forward))


@dataclass(frozen=True)
class ProductColourIndexing:
    q: int
    q_prime: int

    def __len__(self):
        return self.q * self.q_prime

    def flat(self, i, j):
        return i * self.q_prime + j

    def pair(self, k):
        return divmod(k, self.q_prime)

    def pairs(self):
        return ((i, j) for i in range(self.q) for j in range(self.q_prime))


def _check_injective(mapping, target_colour_count):
    if len(set(mapping)) != len(mapping) or \
            any(not 0 <= t < target_colour_count for t in mapping):
        raise NotInjective(mapping, target_colour_count)


def pushforward(measure, mapping, target_colour_count):
    """Relabel every atom's increment through ``mapping``."""
    mapping = tuple(mapping)
    _check_injective(mapping, target_colour_count)
    if measure.colour_count != len(mapping):
        raise NotInjective(mapping, target_colour_count)
    atoms = []
    for inc, p in measure.atoms:
        vector = [0] * target_colour_count
        for k, x in enumerate(inc):
            if x:
                vector[mapping[k]] += x
        atoms.append((vector, p))
    return ReplacementMeasure.from_atoms(atoms)


def relabel(urn, bijection):
    """The urn in which colour bijection(i) plays the role of colour i."""
    q = urn.colour_count
    forward = tuple(bijection.forward if isinstance(bijection, ColourBijection)
                    else bijection)
    _check_injective(forward, q)
    if len(forward) != q:
        raise NotInjective(forward, q)
    measures = [None] * q
    activities = [None] * q
    initial = [None] * q
    labels = [None] * q
    for i, t in enumerate(forward):
        measures[t] = pushforward(urn.measures[i], forward, q)
        activities[t] = urn.activities[i]
        initial[t] = urn.initial[i]
        labels[t] = urn.label(i)
    return PolyaUrn(tuple(measures), tuple(activities), tuple(initial),
                    tuple(labels) if urn.labels is not None else None)


def disjoint_union(u, u2):
    q, q2 = u.colour_count, u2.colour_count
    n = q + q2
    left = range(q)
    right = range(q, n)
    measures = [pushforward(m, left, n) for m in u.measures] + \
               [pushforward(m, right, n) for m in u2.measures]
    labels = None
    if u.labels is not None or u2.labels is not None:
        labels = u.colour_labels() + u2.colour_labels()
        if len(set(labels)) < n:
            # tag each side when the two label sets overlap
            labels = ['{0}.{1}'.format(label, side)
                      for side, part in enumerate((u, u2)) for label in part.colour_labels()]
    return make_urn(n, measures, u.activities + u2.activities,
                    u.initial + u2.initial, labels)


def product(u, u2):
    """
    Colour (i, j) has activity a_i + a'_j, starts with X_i(0) X'_j(0) balls
    and evolves like i in u with probability a_i / (a_i + a'_j), like j in
    u2 otherwise. Colours with a_i + a'_j = 0 get the Dirac measure at 0.
    """
    idx = ProductColourIndexing(u.colour_count, u2.colour_count)
    n = len(idx)
    measures, activities, initial, mixtures = [], [], [], []
    for i, j in idx.pairs():
        a, b = u.activities[i], u2.activities[j]
        total = a + b
        activities.append(total)
        initial.append(u.initial[i] * u2.initial[j])
        if total == 0:
            measures.append(ReplacementMeasure.zero(n))
            mixtures.append(None)
            continue
        left = pushforward(u.measures[i], [idx.flat(k, j) for k in range(idx.q)], n)
        right = pushforward(u2.measures[j], [idx.flat(i, k) for k in range(idx.q_prime)], n)
        components = ((a / total, left), (b / total, right))
        measures.append(ReplacementMeasure.mixture(components))
        mixtures.append(components)
    labels = None
    if u.labels is not None or u2.labels is not None:
        labels = ['({0},{1})'.format(u.label(i), u2.label(j)) for i, j in idx.pairs()]
    urn = make_urn(n, measures, activities, initial, labels)
    return dataclasses.replace(urn, factors=(u, u2), mixtures=tuple(mixtures))


def is_strict_embedding(u, u2, bijection):
    """Exact check of conditions (i)-(iii) for a candidate colour map."""
    forward = tuple(bijection.forward if isinstance(bijection, ColourBijection)
                    else bijection)
    q2 = u2.colour_count
    if len(forward) != u.colour_count:
        return False
    try:
        _check_injective(forward, q2)
    except NotInjective:
        return False
    for i, t in enumerate(forward):
        if u2.activities[t] != u.activities[i] or u2.initial[t] != u.initial[i]:
            return False
        if pushforward(u.measures[i], forward, q2) != u2.measures[t]:
            return False
    return True


def _fingerprint(urn, i):
    measure = urn.measures[i]
    return (urn.activities[i], urn.initial[i], len(measure.atoms),
            tuple(sorted(p for _, p in measure.atoms)))


def _projection(measure, coordinates):
    projected = defaultdict(Fraction)
    for inc, p in measure.atoms:
        projected[tuple(inc[k] for k in coordinates)] += p
    return projected


def strict_embedding(u, u2, cap=ISOMORPHISM_CAP):
    """
    Search an injection u -> u2 satisfying the strict embedding conditions.
    Backtracking over candidates with matching fingerprints, pruned by
    comparing the measures projected onto the colours placed so far.
    """
    q, q2 = u.colour_count, u2.colour_count
    if q > q2:
        return None
    if q2 > cap:
        raise SizeCapExceeded('urn', q2, cap)
    candidates = []
    for i in range(q):
        fp = _fingerprint(u, i)
        candidates.append([t for t in range(q2) if _fingerprint(u2, t) == fp])
        if not candidates[-1]:
            return None
    order = sorted(range(q), key=lambda i: len(candidates[i]))
    assigned = {}

    def consistent():
        sources = list(assigned)
        targets = [assigned[s] for s in sources]
        for s in sources:
            if _projection(u.measures[s], sources) != \
                    _projection(u2.measures[assigned[s]], targets):
                return False
        return True

    def search(pos):
        if pos == q:
            forward = tuple(assigned[i] for i in range(q))
            return forward if is_strict_embedding(u, u2, forward) else None
        i = order[pos]
        used = set(assigned.values())
        for t in candidates[i]:
            if t in used:
                continue
            assigned[i] = t
            if consistent():
                found = search(pos + 1)
                if found is not None:
                    return found
            del assigned[i]
        return None

    found = search(0)
    log.debug('embedding search %d -> %d colours: %s', q, q2,
              'found' if found is not None else 'none')
    return ColourBijection(found) if found is not None else None


def strict_isomorphic(u, u2, cap=ISOMORPHISM_CAP):
    if u.colour_count != u2.colour_count:
        return None
    return strict_embedding(u, u2, cap)


def witnessed_isomorphic(u, u2, forward, cap=ISOMORPHISM_CAP):
    """
    True when ``forward`` is a strict isomorphism, or, failing that, when
    the search finds one (only attempted within the cap).
    """
    if u.colour_count != u2.colour_count:
        return False
    if is_strict_embedding(u, u2, forward):
        return True
    if u.colour_count > cap:
        return False
    return strict_isomorphic(u, u2, cap) is not None


@dataclass(frozen=True)
class UrnSampler:
    """
    Random small urns. Rationals (activities, probabilities) have
    numerators and denominators at most ``max_value``; a quarter of the
    colours get activity 0.
    """
    max_colours: int = 3
    max_atoms: int = 3
    max_value: int = 9
    max_increment: int = 2
    max_initial: int = 3

    def sample(self, rng):
        q = int(rng.integers(0, self.max_colours + 1))
        measures, activities = [], []
        for i in range(q):
            if rng.random() < 0.25:
                activities.append(Fraction(0))
                measures.append(ReplacementMeasure.zero(q))
                continue
            activities.append(Fraction(int(rng.integers(1, self.max_value + 1)),
                                       int(rng.integers(1, self.max_value + 1))))
            measures.append(self._measure(rng, i, q))
        initial = [int(rng.integers(0, self.max_initial + 1)) for _ in range(q)]
        return make_urn(q, measures, activities, initial)

    def _measure(self, rng, i, q):
        k = int(rng.integers(1, self.max_atoms + 1))
        denominator = int(rng.integers(k, max(k, self.max_value) + 1))
        cuts = sorted(rng.choice(range(1, denominator), size=k - 1, replace=False)) \
            if k > 1 else []
        bounds = [0] + [int(c) for c in cuts] + [denominator]
        atoms = []
        for lo, hi in zip(bounds, bounds[1:]):
            increment = [int(rng.integers(-1 if j == i else 0, self.max_increment + 1))
                         for j in range(q)]
            atoms.append((increment, Fraction(hi - lo, denominator)))
        return ReplacementMeasure.from_atoms(atoms)

    def relabelling(self, rng, n):
        return ColourBijection(tuple(int(t) for t in rng.permutation(n)))


def union_swap(q, q2):
    """Colour map U + U' -> U' + U."""
    return tuple(q2 + k for k in range(q)) + tuple(range(q2))


def product_swap(q, q2):
    """Colour map U x U' -> U' x U."""
    return tuple(j * q + i for i in range(q) for j in range(q2))


def distributive_map(q, q2, q3):
    """Colour map U x (U' + U'') -> (U x U') + (U x U'')."""
    forward = []
    for i in range(q):
        for m in range(q2 + q3):
            if m < q2:
                forward.append(i * q2 + m)
            else:
                forward.append(q * q2 + i * q3 + (m - q2))
    return tuple(forward)


def check_semiring_laws(sampler=None, trials=100, seed=0, cap=ISOMORPHISM_CAP,
                        union=disjoint_union, times=product):
    """
    Randomized check of the commutative semiring laws for urns, each law
    confirmed by an exact strict isomorphism. ``union`` and ``times`` can be
    swapped out to make sure broken operations get caught.
    """
    sampler = sampler or UrnSampler()
    report = LawReport.for_laws(SEMIRING_LAWS, trials)
    empty, one = zero_urn(), unit_urn()
    for trial, rng in enumerate(trial_generators(seed, trials)):
        U, V, W = sampler.sample(rng), sampler.sample(rng), sampler.sample(rng)
        q, q2, q3 = U.colour_count, V.colour_count, W.colour_count

        def check(name, lhs, rhs, forward, operands):
            ok = witnessed_isomorphic(lhs, rhs, forward, cap)
            report.record(name, ok, trial, operands)

        UV = union(U, V)
        check('union_associativity', union(UV, W), union(U, union(V, W)),
              tuple(range(q + q2 + q3)), (U, V, W))
        check('union_commutativity', UV, union(V, U), union_swap(q, q2), (U, V))
        check('union_neutrality', union(empty, U), U, tuple(range(q)), (U,))

        UxV = times(U, V)
        check('product_associativity', times(UxV, W), times(U, times(V, W)),
              tuple(range(q * q2 * q3)), (U, V, W))
        check('product_commutativity', UxV, times(V, U), product_swap(q, q2), (U, V))
        check('product_neutrality', times(one, U), U, tuple(range(q)), (U,))
        check('left_distributivity', times(U, union(V, W)),
              union(UxV, times(U, W)), distributive_map(q, q2, q3), (U, V, W))
        check('right_distributivity', times(union(V, W), U),
              union(times(V, U), times(W, U)), tuple(range((q2 + q3) * q)), (V, W, U))
        check('product_annihilation', times(empty, U), empty, (), (U,))

        phi, psi = sampler.relabelling(rng, q), sampler.relabelling(rng, q2)
        shifted = phi.forward + tuple(q + t for t in psi.forward)
        check('union_well_defined', union(relabel(U, phi), relabel(V, psi)),
              relabel(UV, shifted), tuple(range(q + q2)), (U, V))
        paired = tuple(phi(i) * q2 + psi(j) for i in range(q) for j in range(q2))
        check('product_well_defined', times(relabel(U, phi), relabel(V, psi)),
              relabel(UxV, paired), tuple(range(q * q2)), (U, V))
    return report
