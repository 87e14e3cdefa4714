"""Permanent evaluation.

Three engines share one contract: `per_naive` (the defining sum, used as an
oracle), `per_ryser` (inclusion-exclusion over column subsets in Gray-code
order) and `per_glynn` (the +-1 vector formula).  Exact fields give exact
values; float matrices return ApproxComplex values whose radius bounds the
error.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DimensionError, SizeGuardError
from .matrix import Matrix, PartitionedView, one_of, submatrix_delete, zero_of
from .numeric import ApproxComplex, mp_context, unit_roundoff

NAIVE_MAX_N = 9
RYSER_MAX_N = 32


@dataclass(frozen=True)
class PermanentResult:
    value: object
    algorithm: str
    exact: bool
    error_radius: float = 0.0


def _result(value, algorithm):
    if isinstance(value, ApproxComplex):
        return PermanentResult(value, algorithm, False, value.radius)
    return PermanentResult(value, algorithm, True, 0.0)


def _approx_sum(terms, prec):
    """Correctly rounded sum of ApproxComplex terms (fsum on each part)."""
    ctx = mp_context(prec)
    re = ctx.fsum(t.value.real for t in terms)
    im = ctx.fsum(t.value.imag for t in terms)
    v = ctx.mpc(re, im)
    r = (math.fsum(t.radius for t in terms) + 2 * unit_roundoff(prec) * float(abs(v))) * (1 + 2.0**-50)
    return ApproxComplex._make(v, r, prec)


def _sum_terms(terms, A):
    if A.field == "float":
        return _approx_sum(terms, A.prec) if terms else zero_of("float", A.prec)
    acc = zero_of(A.field)
    for t in terms:
        acc = acc + t
    return acc


def per_naive(A):
    """Sum over all n! permutations; guarded at n <= 9."""
    n = A.n
    if n > NAIVE_MAX_N:
        raise SizeGuardError(f"per_naive is limited to n <= {NAIVE_MAX_N}")
    if n == 0:
        return _result(one_of(A.field, A.prec), "naive")
    rows = A.rows
    terms = []
    for sigma in itertools.permutations(range(n)):
        t = rows[0][sigma[0]]
        for i in range(1, n):
            t = t * rows[i][sigma[i]]
        terms.append(t)
    return _result(_sum_terms(terms, A), "naive")


def _ryser_chunk(cols, n, start, stop):
    """Signed Ryser terms for Gray-code indices k in [start, stop).

    Row sums are initialised directly from gray(start) so chunks are
    independent.
    """
    g = start ^ (start >> 1)
    rowsum = None
    for j in range(n):
        if g >> j & 1:
            rowsum = list(cols[j]) if rowsum is None else [a + b for a, b in zip(rowsum, cols[j])]
    terms = []
    k = start
    while k < stop:
        if k != start:
            j = (k & -k).bit_length() - 1
            g ^= 1 << j
            if rowsum is None:
                rowsum = list(cols[j])
            elif g >> j & 1:
                rowsum = [a + b for a, b in zip(rowsum, cols[j])]
            else:
                rowsum = [a - b for a, b in zip(rowsum, cols[j])]
        if g:
            t = rowsum[0]
            for x in rowsum[1:]:
                t = t * x
            terms.append(t if (bin(g).count("1") - n) % 2 == 0 else -t)
        k += 1
    return terms


def _chunk_bounds(total, chunks):
    step = -(-total // chunks)
    return [(s, min(s + step, total)) for s in range(0, total, step)]


def per_ryser(A, workers=1, chunks=None):
    """Ryser's formula, O(2^n n) with Gray-code updates.

    The subset range may be split into chunks evaluated by a process pool;
    chunk results are combined in chunk order so the outcome does not
    depend on `workers`.
    """
    n = A.n
    if n > RYSER_MAX_N:
        raise SizeGuardError(f"per_ryser is limited to n <= {RYSER_MAX_N}")
    if n == 0:
        return _result(one_of(A.field, A.prec), "ryser")
    cols = [list(c) for c in zip(*A.rows)]
    total = 1 << n
    chunks = chunks or (workers if workers > 1 else 1)
    bounds = _chunk_bounds(total, chunks)
    if workers > 1 and len(bounds) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_ryser_chunk, *zip(*[(cols, n, s, e) for s, e in bounds])))
    else:
        parts = [_ryser_chunk(cols, n, s, e) for s, e in bounds]
    terms = [t for p in parts for t in p]
    return _result(_sum_terms(terms, A), "ryser")


def per_glynn(A):
    """Glynn's formula with Gray-code sign flips; exact halving at the end."""
    n = A.n
    if n > RYSER_MAX_N:
        raise SizeGuardError(f"per_glynn is limited to n <= {RYSER_MAX_N}")
    if n == 0:
        return _result(one_of(A.field, A.prec), "glynn")
    rows = A.rows
    colsum = list(rows[0])
    for r in rows[1:]:
        colsum = [a + b for a, b in zip(colsum, r)]
    delta = [1] * n
    sign = 1
    terms = []
    g = 0
    for k in range(1 << (n - 1)):
        if k:
            j = (k & -k).bit_length() - 1
            g ^= 1 << j
            i = j + 1
            row = rows[i]
            if delta[i] > 0:
                colsum = [a - b - b for a, b in zip(colsum, row)]
            else:
                colsum = [a + b + b for a, b in zip(colsum, row)]
            delta[i] = -delta[i]
            sign = -sign
        t = colsum[0]
        for x in colsum[1:]:
            t = t * x
        terms.append(t if sign > 0 else -t)
    total = _sum_terms(terms, A)
    scale = Fraction(1, 1 << (n - 1))
    return _result(total * scale, "glynn")


def permanent(A, workers=1):
    """Value of per A via Ryser."""
    return per_ryser(A, workers=workers).value


def per_minor_matrix(A):
    """Matrix with (i, j) entry a_ij * per A(i, j)."""
    n = A.n
    if n < 2:
        raise DimensionError("per_minor_matrix needs n >= 2")
    rows = [[A[i, j] * permanent(submatrix_delete(A, i + 1, j + 1)) for j in range(n)] for i in range(n)]
    return Matrix._trusted(rows, A.field, A.prec)


def per_partition(P):
    """outer x outer matrix whose (i, j) entry is per of block (i, j)."""
    if not isinstance(P, PartitionedView):
        raise TypeError("per_partition expects a PartitionedView")
    m = P.outer
    rows = [[permanent(P.block(i, j)) for j in range(m)] for i in range(m)]
    return Matrix._trusted(rows, P.base.field, P.base.prec)


# ---------------------------------------------------------------------------
# complex128 fast path
# ---------------------------------------------------------------------------

_SUBSET_CACHE = {}


def _subset_table(n):
    tab = _SUBSET_CACHE.get(n)
    if tab is None:
        masks = np.arange(1, 1 << n, dtype=np.int64)
        bits = ((masks[:, None] >> np.arange(n)) & 1).astype(float)
        signs = np.where((bits.sum(1) - n) % 2 == 0, 1.0, -1.0)
        tab = (bits, signs)
        _SUBSET_CACHE[n] = tab
    return tab


def per_complex(M):
    """Permanent of a complex128 array and an absolute error bound.

    Ryser terms are formed in double precision and summed with math.fsum on
    each part; the bound is gamma_{2n} times the Ryser sum of absolute
    values plus the final rounding.
    """
    M = np.asarray(M, dtype=complex)
    n = M.shape[0]
    if n == 0:
        return 1.0 + 0j, 0.0
    if n > 20:
        raise SizeGuardError("per_complex is limited to n <= 20")
    bits, signs = _subset_table(n)
    rs = bits @ M.T
    terms = np.prod(rs, axis=1) * signs
    mags = np.prod(bits @ np.abs(M).T, axis=1)
    re = math.fsum(terms.real)
    im = math.fsum(terms.imag)
    u = 1.12e-16
    gamma = (2 * n + 2) * u / (1 - (2 * n + 2) * u)
    bound = gamma * float(mags.sum()) + 2 * u * abs(complex(re, im))
    return complex(re, im), bound


def per_complex_batch(Ms):
    """per_complex over a stack of equally sized matrices."""
    Ms = np.asarray(Ms, dtype=complex)
    n = Ms.shape[-1]
    bits, signs = _subset_table(n)
    rs = np.einsum("sj,bij->bsi", bits, Ms)
    vals = (np.prod(rs, axis=2) * signs).sum(axis=1)
    mags = np.prod(np.einsum("sj,bij->bsi", bits, np.abs(Ms)), axis=2).sum(axis=1)
    u = 1.12e-16
    gamma = (2 * n + 2 + n) * u
    return vals, gamma * mags + 2 * u * np.abs(vals)
