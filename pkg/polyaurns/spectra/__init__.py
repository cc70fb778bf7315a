"""
Spectra as finite multisets of complex numbers.

Eigenvalues come from a dense double-precision eigensolve and are grouped
into multiplicities by single-linkage clustering with radius ``tol``.
Only algebraic multiplicity is tracked.
"""
import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.cluster.hierarchy import fcluster, linkage
from scipy.optimize import linear_sum_assignment

from .. import api
from .. import fields as f
from ..documents import SpectrumEntry
from ..errors import ConvergenceFailure, SizeCapExceeded
from ..intensity import MatrixSampler, direct_sum, kronecker_sum
from ..laws import LawReport, trial_generators
from ..strictbase import StrictRecord

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-6
SIGMA_SIZE_CAP = 8


@dataclass(frozen=True)
class SpectrumMultiset:
    """(value, multiplicity) pairs sorted by (real, imaginary) part."""
    elements: Tuple[Tuple[complex, int], ...] = ()

    @property
    def total_multiplicity(self):
        return sum(mult for _, mult in self.elements)

    def expanded(self):
        return [z for z, mult in self.elements for _ in range(mult)]

    def conjugate(self):
        return _canonical((z.conjugate(), mult) for z, mult in self.elements)

    def top(self):
        """Element of maximal real part, ties broken by imaginary part closest to 0."""
        if not self.elements:
            return None
        return max(self.elements, key=lambda e: (e[0].real, -abs(e[0].imag)))


def _canonical(pairs):
    merged = {}
    for z, mult in pairs:
        z = complex(z)
        merged[z] = merged.get(z, 0) + mult
    return SpectrumMultiset(tuple(sorted(merged.items(), key=lambda e: (e[0].real, e[0].imag))))


def _cluster(pairs, tol):
    pairs = [(complex(z), int(mult)) for z, mult in pairs if mult]
    if len(pairs) < 2:
        return _canonical(pairs)
    points = np.array([[z.real, z.imag] for z, _ in pairs])
    labels = fcluster(linkage(points, method='single'), t=tol, criterion='distance')
    groups = {}
    for label, (z, mult) in zip(labels, pairs):
        groups.setdefault(label, []).append((z, mult))
    clustered = []
    for members in groups.values():
        weight = sum(mult for _, mult in members)
        centre = sum(z * mult for z, mult in members) / weight
        if abs(centre.imag) <= tol:
            centre = complex(centre.real, 0.0)
        clustered.append((centre, weight))
    return _canonical(clustered)


def spectrum(A, tol=DEFAULT_TOL):
    M = np.asarray(A, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError('spectrum of a non-square {0} matrix'.format(M.shape))
    if M.shape[0] == 0:
        return SpectrumMultiset()
    try:
        values = np.linalg.eigvals(M)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc))
    return _cluster(((z, 1) for z in values), tol)


def multiset_union(m, m2, tol=DEFAULT_TOL):
    return _cluster(m.elements + m2.elements, tol)


def minkowski_sum(m, m2, tol=DEFAULT_TOL):
    return _cluster(((z + w, a * b) for z, a in m.elements for w, b in m2.elements), tol)


def multiset_approx_equal(m, m2, tol=DEFAULT_TOL):
    """A perfect matching pairing elements at distance at most tol exists."""
    xs, ys = m.expanded(), m2.expanded()
    if len(xs) != len(ys):
        return False
    if all(abs(x - y) <= tol for x, y in zip(xs, ys)):
        return True
    far = np.array([[abs(x - y) > tol for y in ys] for x in xs], dtype=float)
    rows, cols = linear_sum_assignment(far)
    return far[rows, cols].sum() == 0


def is_conjugate_closed(m, tol=DEFAULT_TOL):
    return multiset_approx_equal(m, m.conjugate(), tol)


class SigmaReport(StrictRecord):
    union_ok = api.ref(f.Bool)
    minkowski_ok = api.ref(f.Bool)

    @property
    def passed(self):
        return self.union_ok and self.minkowski_ok


def verify_sigma_morphism(A, B, tol=DEFAULT_TOL, cap=SIGMA_SIZE_CAP):
    for M in (A, B):
        if M.shape[0] > cap:
            raise SizeCapExceeded('matrix', M.shape[0], cap)
    sA, sB = spectrum(A, tol), spectrum(B, tol)
    union_ok = multiset_approx_equal(spectrum(direct_sum(A, B), tol),
                                     multiset_union(sA, sB, tol), tol)
    minkowski_ok = multiset_approx_equal(spectrum(kronecker_sum(A, B), tol),
                                         minkowski_sum(sA, sB, tol), tol)
    return SigmaReport(union_ok=union_ok, minkowski_ok=minkowski_ok)


def check_sigma_morphism(sampler=None, trials=50, seed=0, tol=DEFAULT_TOL):
    # dense samples keep nilpotent blocks, whose eigenvalues scatter, out
    sampler = sampler or MatrixSampler(max_size=4, sparsity=0.0)
    report = LawReport.for_laws(('spectrum_union', 'spectrum_minkowski'), trials)
    for trial, rng in enumerate(trial_generators(seed, trials)):
        A, B = sampler.sample(rng), sampler.sample(rng)
        sigma = verify_sigma_morphism(A, B, tol)
        report.record('spectrum_union', sigma.union_ok, trial, (A, B))
        report.record('spectrum_minkowski', sigma.minkowski_ok, trial, (A, B))
    return report


def spectrum_to_document(m):
    return [SpectrumEntry(re=z.real, im=z.imag, mult=mult) for z, mult in m.elements]


def spectrum_from_document(entries):
    entries = [e if isinstance(e, SpectrumEntry) else SpectrumEntry(**e) for e in entries]
    return _canonical((complex(e.re, e.im), e.mult) for e in entries)
