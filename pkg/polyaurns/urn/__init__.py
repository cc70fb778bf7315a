"""
Generalised Polya urns: colours 0..q-1, one finitely supported replacement
measure per colour, activities and an initial configuration.

An atom of the measure of colour i is an increment vector x with
x_j >= -delta_ij: only the drawn ball itself may be taken out again.
"""
import collections.abc
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple

from ..errors import (NegativeActivity, NegativeInitial, ProbabilityMass,
                      ShapeMismatch, SupportViolation, ZeroActivityRule)
from ..exact import zero_matrix
from ..validators import (IntValidator, RationalValidator, ValidationError)

__all__ = ['ReplacementMeasure', 'PolyaUrn', 'make_urn', 'zero_urn',
           'unit_urn', 'scalar_urn', 'expected_replacement',
           'second_moment_matrix']

Increment = Tuple[int, ...]


@dataclass(frozen=True)
class ReplacementMeasure:
    """
    Finite-support probability measure on increment vectors. Atoms are kept
    sorted by increment with distinct increments, so two measures are equal
    exactly when their atom tuples are.
    """
    atoms: Tuple[Tuple[Increment, Fraction], ...]

    @classmethod
    def from_atoms(cls, atoms):
        merged = defaultdict(Fraction)
        for increment, prob in atoms:
            merged[tuple(int(x) for x in increment)] += Fraction(prob)
        return cls(tuple(sorted((inc, p) for inc, p in merged.items() if p)))

    @classmethod
    def dirac(cls, increment):
        return cls(((tuple(int(x) for x in increment), Fraction(1)),))

    @classmethod
    def zero(cls, colour_count):
        return cls.dirac((0,) * colour_count)

    @classmethod
    def mixture(cls, components):
        """Weighted sum of measures over the same colour space; equal increments merge."""
        return cls.from_atoms(
            (inc, weight * p)
            for weight, measure in components if weight
            for inc, p in measure.atoms)

    @property
    def colour_count(self):
        return len(self.atoms[0][0]) if self.atoms else 0

    @property
    def total_mass(self):
        return sum((p for _, p in self.atoms), Fraction(0))

    def is_dirac_zero(self):
        return len(self.atoms) == 1 and not any(self.atoms[0][0])

    def mean(self):
        q = self.colour_count
        out = [Fraction(0)] * q
        for inc, p in self.atoms:
            for j, x in enumerate(inc):
                if x:
                    out[j] += p * x
        return tuple(out)

    def second_moment(self):
        q = self.colour_count
        out = zero_matrix(q)
        for inc, p in self.atoms:
            support = [j for j, x in enumerate(inc) if x]
            for j in support:
                for k in support:
                    out[j, k] += p * inc[j] * inc[k]
        return out


@dataclass(frozen=True)
class PolyaUrn:
    """
    The data (Q, mu, a, X(0)) with Q = {0, ..., q-1} in list order.

    ``labels`` are display metadata. ``factors`` and ``mixtures`` are set by
    product(): the two factor urns and, per colour, the weighted components
    (left factor, right factor) that make up the replacement measure. None of
    the three take part in equality.
    """
    measures: Tuple[ReplacementMeasure, ...]
    activities: Tuple[Fraction, ...]
    initial: Tuple[int, ...]
    labels: Optional[Tuple[str, ...]] = field(default=None, compare=False)
    factors: Optional[Tuple['PolyaUrn', 'PolyaUrn']] = field(
        default=None, compare=False, repr=False)
    mixtures: Optional[tuple] = field(default=None, compare=False, repr=False)

    @property
    def colour_count(self):
        return len(self.activities)

    def label(self, i):
        if self.labels is not None:
            return self.labels[i]
        return str(i)

    def colour_labels(self):
        return tuple(self.label(i) for i in range(self.colour_count))

    def weight(self, counts):
        """<a, X> for a count vector X."""
        return sum((a * x for a, x in zip(self.activities, counts)), Fraction(0))

    def with_labels(self, labels):
        return PolyaUrn(self.measures, self.activities, self.initial,
                        tuple(labels) if labels is not None else None,
                        self.factors, self.mixtures)


def make_urn(colour_count, measures, activities, initial, labels=None):
    """
    Build a validated urn. ``measures[i]`` is a ReplacementMeasure or a list
    of (increment, probability) atoms, where an increment is a length-q
    sequence or a sparse {colour: delta} mapping.
    """
    q = IntValidator(colour_count)
    if q < 0:
        raise ShapeMismatch('negative colour count {0}'.format(q))
    for name, values in (('replacements', measures), ('activities', activities),
                         ('initial', initial)):
        if len(values) != q:
            raise ShapeMismatch('{0} has {1} entries for {2} colours'.format(
                name, len(values), q), path=[name])
    if labels is not None:
        labels = tuple(str(label) for label in labels)
        if len(labels) != q:
            raise ShapeMismatch('{0} labels for {1} colours'.format(len(labels), q),
                                path=['colours'])
        if len(set(labels)) != q:
            raise ShapeMismatch('colour labels are not distinct', path=['colours'])

    acts = tuple(_activity(i, a) for i, a in enumerate(activities))
    init = tuple(_initial(i, x) for i, x in enumerate(initial))
    built = tuple(_measure(i, m, q) for i, m in enumerate(measures))
    for i, (a, measure) in enumerate(zip(acts, built)):
        if a == 0 and not measure.is_dirac_zero():
            raise ZeroActivityRule(
                'colour {0} has activity 0 but a replacement other than the '
                'Dirac measure at 0'.format(i), path=[i, 'replacements'])
    return PolyaUrn(built, acts, init, labels)


def _activity(i, value):
    try:
        a = RationalValidator(value)
    except ValidationError as exc:
        exc.path.extend([i, 'activities'])
        raise
    if a < 0:
        raise NegativeActivity('colour {0} has negative activity {1}'.format(i, a),
                               path=[i, 'activities'], value=a)
    return a


def _initial(i, value):
    try:
        x = IntValidator(value)
    except ValidationError as exc:
        exc.path.extend([i, 'initial'])
        raise
    if x < 0:
        raise NegativeInitial('colour {0} starts with {1} balls'.format(i, x),
                              path=[i, 'initial'], value=x)
    return x


def _measure(i, measure, q):
    if isinstance(measure, ReplacementMeasure):
        atoms = measure.atoms
    else:
        atoms = list(measure)
    if not atoms:
        raise ProbabilityMass('colour {0} has no atoms'.format(i),
                              path=[i, 'replacements'])
    checked = []
    total = Fraction(0)
    for k, atom in enumerate(atoms):
        path = [k, i, 'replacements']
        try:
            increment, prob = atom
        except (TypeError, ValueError):
            raise ShapeMismatch('atom is not an (increment, probability) pair',
                                path=path, value=atom)
        vector = _increment(increment, q, path)
        try:
            p = RationalValidator(prob)
        except ValidationError as exc:
            exc.path.extend(path)
            raise
        if not 0 < p <= 1:
            raise ProbabilityMass(
                'colour {0} atom {1} has probability {2} outside (0, 1]'.format(i, k, p),
                path=path, value=p)
        for j, x in enumerate(vector):
            if x < -(1 if i == j else 0):
                raise SupportViolation(
                    'colour {0} atom {1} removes {2} balls of colour {3}'.format(i, k, -x, j),
                    path=path, value=vector)
        total += p
        checked.append((vector, p))
    if total != 1:
        raise ProbabilityMass('colour {0} atom probabilities sum to {1}'.format(i, total),
                              path=[i, 'replacements'], value=total)
    return ReplacementMeasure.from_atoms(checked)


def _increment(increment, q, path):
    if isinstance(increment, collections.abc.Mapping):
        vector = [0] * q
        for key, delta in increment.items():
            j = IntValidator(key)
            if not 0 <= j < q:
                raise ShapeMismatch('unknown colour {0}'.format(key), path=path)
            vector[j] = IntValidator(delta)
        return tuple(vector)
    vector = tuple(IntValidator(x) for x in increment)
    if len(vector) != q:
        raise ShapeMismatch('increment has {0} entries for {1} colours'.format(len(vector), q),
                            path=path, value=vector)
    return vector


def zero_urn():
    return PolyaUrn((), (), ())


def scalar_urn(alpha):
    """One colour of activity alpha whose draws return the ball unchanged."""
    return make_urn(1, [ReplacementMeasure.zero(1)], [alpha], [1])


def unit_urn():
    return scalar_urn(0)


def expected_replacement(urn, i):
    """E xi_i, componentwise."""
    return urn.measures[i].mean()


def second_moment_matrix(urn, i):
    """B_i = E[xi_i xi_i^T] as an exact matrix."""
    return urn.measures[i].second_moment()
