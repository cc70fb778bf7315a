"""
Intensity matrices and the matrix semiring with direct sum and Kronecker
sum.

A[i, j] = a_j * E xi_{j,i}: columns index the drawn colour, rows the
colour whose count changes. Entries are exact (see polyaurns.exact).

Permutation witnesses are index arrays: ``perm`` witnesses B ~ C when
C[i, j] == B[perm[i], perm[j]] for all i, j, i.e. C = P^-1 B P with
P[perm[i], i] = 1.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .. import api
from .. import fields as f
from ..algebra import UrnSampler, disjoint_union, product, relabel
from ..errors import SizeCapExceeded
from ..exact import identity_matrix, matmul, matrices_equal, zero_matrix
from ..laws import LawReport, trial_generators
from ..strictbase import StrictRecord

log = logging.getLogger(__name__)

PERMUTATION_CAP = 16

MATRIX_LAWS = (
    'oplus_associativity', 'oplus_commutativity', 'oplus_neutrality',
    'boxplus_associativity', 'boxplus_commutativity', 'boxplus_neutrality',
    'left_distributivity', 'right_distributivity', 'boxplus_annihilation',
    'oplus_well_defined', 'boxplus_well_defined', 'conjugation_search',
    'intmat_closure',
)

PHI_LAWS = ('union_intensity', 'product_intensity', 'entry_formula',
            'relabelled_similarity')


def intensity_matrix(urn):
    q = urn.colour_count
    A = zero_matrix(q)
    for j in range(q):
        a = urn.activities[j]
        if not a:
            continue
        for i, m in enumerate(urn.measures[j].mean()):
            A[i, j] = a * m
    return A


def is_intmat(A):
    n = A.shape[0]
    return all(A[i, j] >= 0 for i in range(n) for j in range(n) if i != j)


def direct_sum(A, B):
    n, m = A.shape[0], B.shape[0]
    out = zero_matrix(n + m)
    out[:n, :n] = A
    out[n:, n:] = B
    return out


def kronecker_product(A, B):
    (n, m), (p, r) = A.shape, B.shape
    out = zero_matrix(n * p, m * r)
    for i in range(n):
        for j in range(m):
            if A[i, j]:
                out[i * p:(i + 1) * p, j * r:(j + 1) * r] = A[i, j] * B
    return out


def kronecker_sum(A, B):
    """A (+) B := A (x) I_m + I_n (x) B."""
    n, m = A.shape[0], B.shape[0]
    return kronecker_product(A, identity_matrix(m)) + \
        kronecker_product(identity_matrix(n), B)


def vector_boxplus(a, b):
    return tuple(x + y for x in a for y in b)


def matrix_power(A, n):
    result = identity_matrix(A.shape[0])
    base = A
    while n:
        if n & 1:
            result = matmul(result, base)
        n >>= 1
        if n:
            base = matmul(base, base)
    return result


def matrix_power_identity(A, B, n):
    """(A boxplus B)^n == sum_k binom(n, k) A^(n-k) (x) B^k, exactly."""
    lhs = matrix_power(kronecker_sum(A, B), n)
    rhs = zero_matrix(A.shape[0] * B.shape[0])
    for k in range(n + 1):
        rhs = rhs + math.comb(n, k) * kronecker_product(
            matrix_power(A, n - k), matrix_power(B, k))
    return matrices_equal(lhs, rhs)


def permutation_matrix(perm):
    n = len(perm)
    P = zero_matrix(n)
    for i, t in enumerate(perm):
        P[t, i] = Fraction(1)
    return P


def conjugate(B, perm):
    idx = np.asarray(perm, dtype=int)
    return B[np.ix_(idx, idx)]


def is_witness(B, C, perm):
    n = B.shape[0]
    if C.shape != B.shape or sorted(perm) != list(range(n)):
        return False
    return matrices_equal(conjugate(B, perm), C)


def inverse_permutation(perm):
    inv = [0] * len(perm)
    for i, t in enumerate(perm):
        inv[t] = i
    return tuple(inv)


def oplus_swap(n, m):
    """Witness A (+) B ~ B (+) A for sizes n, m."""
    return tuple(n + i for i in range(m)) + tuple(range(n))


def boxplus_commutation(n, m):
    """Witness A boxplus B ~ B boxplus A; depends only on the sizes."""
    perm = [0] * (n * m)
    for k in range(m):
        for i in range(n):
            perm[k * n + i] = i * m + k
    return tuple(perm)


def distributive_interleave(n, m, p):
    """Witness A boxplus (B (+) C) ~ (A boxplus B) (+) (A boxplus C)."""
    perm = [0] * (n * (m + p))
    for i in range(n):
        for r in range(m):
            perm[i * m + r] = i * (m + p) + r
        for s in range(p):
            perm[n * m + i * p + s] = i * (m + p) + m + s
    return tuple(perm)


def _fingerprint(M, i):
    return (M[i, i], tuple(sorted(M[i, :])), tuple(sorted(M[:, i])))


def permutation_similar(B, C, cap=PERMUTATION_CAP):
    """
    Backtracking search for a witness ``perm`` with C = P^-1 B P. Indices
    are only paired when diagonal value, row multiset and column multiset
    agree.
    """
    if B.shape != C.shape:
        return None
    n = B.shape[0]
    if n > cap:
        raise SizeCapExceeded('matrix', n, cap)
    b_prints = [_fingerprint(B, b) for b in range(n)]
    candidates = []
    for i in range(n):
        fp = _fingerprint(C, i)
        candidates.append([b for b in range(n) if b_prints[b] == fp])
        if not candidates[i]:
            return None
    perm = [None] * n
    used = set()
    order = sorted(range(n), key=lambda i: len(candidates[i]))

    def fits(i, b):
        for i2, b2 in enumerate(perm):
            if b2 is None:
                continue
            if C[i, i2] != B[b, b2] or C[i2, i] != B[b2, b]:
                return False
        return True

    def search(pos):
        if pos == n:
            return True
        i = order[pos]
        for b in candidates[i]:
            if b in used or not fits(i, b):
                continue
            perm[i] = b
            used.add(b)
            if search(pos + 1):
                return True
            perm[i] = None
            used.discard(b)
        return False

    found = search(0)
    log.debug('permutation search on %d indices: %s', n, 'found' if found else 'none')
    return tuple(perm) if found else None


def _similar(left, right, perm, cap):
    if is_witness(left, right, perm):
        return True
    if left.shape != right.shape or left.shape[0] > cap:
        return False
    return permutation_similar(left, right, cap) is not None


def product_intensity_entry(u, u2, source, target, matrices=None):
    """
    Entry of the product's intensity matrix at row ``target`` = (k, l),
    column ``source`` = (i, j), from the factors' matrices alone:
    1{j = l} A[k, i] + 1{i = k} A'[l, j].
    """
    A, A2 = matrices if matrices is not None else (intensity_matrix(u), intensity_matrix(u2))
    (i, j), (k, l) = source, target
    value = Fraction(0)
    if j == l:
        value += A[k, i]
    if i == k:
        value += A2[l, j]
    return value


class PhiReport(StrictRecord):
    union_exact = api.ref(f.Bool)
    product_exact = api.ref(f.Bool)
    entry_formula = api.ref(f.Bool)
    relabelled_similar = api.opt(f.Bool)

    @property
    def passed(self):
        return all(v for k, v in self.items())


def verify_phi_morphism(u, u2, cap=PERMUTATION_CAP, rng=None):
    """
    Intensity of the union is the direct sum and intensity of the product
    is the Kronecker sum, both exactly. With ``rng``, the product is also
    relabelled at random and permutation_similar must recover the match
    (skipped past the cap).
    """
    A, A2 = intensity_matrix(u), intensity_matrix(u2)
    union_exact = matrices_equal(intensity_matrix(disjoint_union(u, u2)), direct_sum(A, A2))
    prod = product(u, u2)
    Ax = intensity_matrix(prod)
    product_exact = matrices_equal(Ax, kronecker_sum(A, A2))
    q, q2 = u.colour_count, u2.colour_count
    entry_formula = all(
        Ax[k * q2 + l, i * q2 + j] ==
        product_intensity_entry(u, u2, (i, j), (k, l), matrices=(A, A2))
        for i in range(q) for j in range(q2) for k in range(q) for l in range(q2))
    data = dict(union_exact=union_exact, product_exact=product_exact,
                entry_formula=entry_formula)
    if rng is not None and q * q2 <= cap:
        phi = tuple(int(t) for t in rng.permutation(q * q2))
        relabelled = intensity_matrix(relabel(prod, phi))
        data['relabelled_similar'] = permutation_similar(kronecker_sum(A, A2),
                                                         relabelled, cap) is not None
    return PhiReport(**data)


def check_phi_morphism(sampler=None, trials=100, seed=0, cap=PERMUTATION_CAP):
    sampler = sampler or UrnSampler()
    report = LawReport.for_laws(PHI_LAWS, trials)
    for trial, rng in enumerate(trial_generators(seed, trials)):
        u, u2 = sampler.sample(rng), sampler.sample(rng)
        phi = verify_phi_morphism(u, u2, cap, rng)
        report.record('union_intensity', phi.union_exact, trial, (u, u2))
        report.record('product_intensity', phi.product_exact, trial, (u, u2))
        report.record('entry_formula', phi.entry_formula, trial, (u, u2))
        report.record('relabelled_similarity', phi.relabelled_similar is not False,
                      trial, (u, u2))
    return report


@dataclass(frozen=True)
class MatrixSampler:
    """
    Random square rational matrices of size 0..max_size, each entry zero
    with probability ``sparsity``. With ``intmat`` off-diagonal entries are
    nonnegative, otherwise any sign (Mat).
    """
    max_size: int = 3
    max_value: int = 9
    intmat: bool = True
    sparsity: float = 0.3

    def sample(self, rng, size=None):
        n = int(rng.integers(0, self.max_size + 1)) if size is None else size
        M = zero_matrix(n)
        for i in range(n):
            for j in range(n):
                if rng.random() < self.sparsity:
                    continue
                low = 0 if (self.intmat and i != j) else -self.max_value
                M[i, j] = Fraction(int(rng.integers(low, self.max_value + 1)),
                                   int(rng.integers(1, self.max_value + 1)))
        return M

    def permutation(self, rng, n):
        return tuple(int(t) for t in rng.permutation(n))


def check_matrix_semiring_laws(sampler=None, trials=100, seed=0, cap=PERMUTATION_CAP):
    """
    Randomized check of the commutative semiring laws of (+) and boxplus,
    each confirmed by its size-only witness (search as fallback within the
    cap), plus IntMat closure when sampling IntMat.
    """
    sampler = sampler or MatrixSampler()
    report = LawReport.for_laws(MATRIX_LAWS, trials)
    empty, zero = zero_matrix(0), zero_matrix(1)
    for trial, rng in enumerate(trial_generators(seed, trials)):
        A, B, C = sampler.sample(rng), sampler.sample(rng), sampler.sample(rng)
        n, m, p = A.shape[0], B.shape[0], C.shape[0]

        def check(name, left, right, perm, operands):
            report.record(name, _similar(left, right, perm, cap), trial, operands)

        check('oplus_associativity', direct_sum(direct_sum(A, B), C),
              direct_sum(A, direct_sum(B, C)), tuple(range(n + m + p)), (A, B, C))
        check('oplus_commutativity', direct_sum(A, B), direct_sum(B, A),
              oplus_swap(n, m), (A, B))
        check('oplus_neutrality', direct_sum(empty, A), A, tuple(range(n)), (A,))
        AB = kronecker_sum(A, B)
        check('boxplus_associativity', kronecker_sum(AB, C),
              kronecker_sum(A, kronecker_sum(B, C)), tuple(range(n * m * p)), (A, B, C))
        check('boxplus_commutativity', AB, kronecker_sum(B, A),
              boxplus_commutation(n, m), (A, B))
        check('boxplus_neutrality', kronecker_sum(zero, A), A, tuple(range(n)), (A,))
        check('left_distributivity', kronecker_sum(A, direct_sum(B, C)),
              direct_sum(AB, kronecker_sum(A, C)), distributive_interleave(n, m, p),
              (A, B, C))
        check('right_distributivity', kronecker_sum(direct_sum(B, C), A),
              direct_sum(kronecker_sum(B, A), kronecker_sum(C, A)),
              tuple(range((m + p) * n)), (B, C, A))
        check('boxplus_annihilation', kronecker_sum(empty, A), empty, (), (A,))

        pa, pb = sampler.permutation(rng, n), sampler.permutation(rng, m)
        Ac, Bc = conjugate(A, pa), conjugate(B, pb)
        shifted = pa + tuple(n + t for t in pb)
        check('oplus_well_defined', direct_sum(A, B), direct_sum(Ac, Bc), shifted, (A, B))
        paired = tuple(pa[i] * m + pb[k] for i in range(n) for k in range(m))
        check('boxplus_well_defined', AB, kronecker_sum(Ac, Bc), paired, (A, B))
        report.record('conjugation_search',
                      n > cap or permutation_similar(A, Ac, cap) is not None,
                      trial, (A,))
        if sampler.intmat:
            closed = is_intmat(direct_sum(A, B)) and is_intmat(AB)
            report.record('intmat_closure', closed, trial, (A, B))
    return report
