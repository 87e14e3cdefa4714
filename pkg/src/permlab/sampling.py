"""Seeded random matrices with exact lifts.

Gram factors are drawn in floating point and rounded to dyadic rationals
before the Gram matrix is formed, so every sampled PSD or correlation
matrix exists exactly and float screening can always be re-checked.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import DimensionError
from .matrix import CorrelationMatrix, Matrix, gram_from_rows
from .numeric import GaussianRational

DEFAULT_BITS = 6
DEFICIENT_RANK = 3
DEFICIENT_PROBABILITY = 0.75


def rng_for(seed, *keys):
    """Independent generator for (seed, keys...); keys index sub-streams."""
    return np.random.default_rng([int(seed), *[int(k) for k in keys]])


def dyadic(x, bits=DEFAULT_BITS):
    return Fraction(int(round(float(x) * (1 << bits))), 1 << bits)


def choose_rank(rng, n, rank=None, enforce_deficient=False):
    """Rank for a sampled n x n matrix.

    By default rank <= 3 is preferred (drawn with probability 3/4) and full
    rank is used otherwise; `enforce_deficient` always returns rank < n.
    """
    if rank is not None:
        if not 1 <= rank <= n:
            raise DimensionError(f"rank {rank} out of range for n = {n}")
        return int(rank)
    cap = min(DEFICIENT_RANK, n - 1) if n > 1 else 1
    if enforce_deficient or rng.random() < DEFICIENT_PROBABILITY:
        return int(rng.integers(1, cap + 1))
    return n


def dyadic_array(shape, rng, bits=DEFAULT_BITS, scale=1.0):
    """Gaussian samples rounded to multiples of 2^-bits (exact as floats)."""
    return np.round(rng.standard_normal(shape) * scale * (1 << bits)) / (1 << bits)


def _exact(x):
    return Fraction(float(x))


def psd_factor(rng, n, rank, complex_field=True, bits=DEFAULT_BITS):
    """rank x n dyadic factor G; the sample is G* G."""
    G = dyadic_array((rank, n), rng, bits)
    if complex_field:
        G = G + 1j * dyadic_array((rank, n), rng, bits)
    return G


def psd_from_factor(G):
    """Exact G* G for a dyadic float factor."""
    cplx = np.iscomplexobj(G)
    rows = [[GaussianRational(_exact(z.real), _exact(z.imag)) if cplx else _exact(z) for z in r] for r in G]
    A = gram_from_rows(rows)
    tag = "gaussian" if cplx else "rational"
    return A if A.field == tag else A.with_field(tag)


def random_psd_exact(rng, n, rank=None, field="gaussian", bits=DEFAULT_BITS, enforce_deficient=False):
    """Gram matrix of `rank` dyadic Gaussian vectors in C^n (or R^n)."""
    r = choose_rank(rng, n, rank, enforce_deficient)
    return psd_from_factor(psd_factor(rng, n, r, field != "rational", bits))


def sphere_parameters(rng, n, rank, complex_field=True, bits=DEFAULT_BITS):
    """Stereographic coordinates of n points on the unit sphere of C^rank
    (or R^rank), rounded to dyadics.

    Uniform points are projected from the north pole, rounded, and later
    lifted back with the exact inverse map, so each point has rational
    coordinates.  Returns an (n, dim - 1) array, dim = 2 rank or rank;
    for dim = 1 the single column holds the sign of the point.
    """
    dim = 2 * rank if complex_field else rank
    if dim == 1:
        return rng.choice((-1.0, 1.0), size=(n, 1))
    Y = np.empty((n, dim - 1))
    for j in range(n):
        while True:
            z = rng.standard_normal(dim)
            z /= np.linalg.norm(z)
            if z[-1] < 1 - 1e-6:
                break
        Y[j] = np.round(z[:-1] / (1 - z[-1]) * (1 << bits)) / (1 << bits)
    return Y


def _lift_point(y, dim, exact):
    if dim == 1:
        return [Fraction(int(y[0]))] if exact else [float(y[0])]
    c = [_exact(v) for v in y] if exact else [float(v) for v in y]
    s = sum(v * v for v in c)
    d = s + 1
    return [2 * v / d for v in c] + [(s - 1) / d]


def correlation_from_parameters(Y, rank, complex_field=True, exact=True):
    """Correlation matrix whose columns are the lifted unit vectors.

    With exact=False a complex128 array is returned instead of a Matrix.
    """
    dim = 2 * rank if complex_field else rank
    cols = []
    for y in Y:
        p = _lift_point(y, dim, exact)
        if complex_field:
            mk = GaussianRational if exact else complex
            cols.append([mk(p[2 * k], p[2 * k + 1]) for k in range(rank)])
        else:
            cols.append(p)
    n = len(cols)
    if not exact:
        V = np.array(cols, dtype=complex).T
        X = V.conj().T @ V
        np.fill_diagonal(X, 1.0)
        return X
    factor = [[cols[j][k] for j in range(n)] for k in range(rank)]
    A = gram_from_rows(factor)
    tag = "gaussian" if complex_field else "rational"
    A = A if A.field == tag else A.with_field(tag)
    return CorrelationMatrix.of(A, check=False)


def random_correlation_exact(rng, n, rank=None, field="gaussian", bits=DEFAULT_BITS, enforce_deficient=False):
    """Exact correlation matrix: Gram matrix of n rational unit vectors."""
    r = choose_rank(rng, n, rank, enforce_deficient)
    cplx = field != "rational"
    return correlation_from_parameters(sphere_parameters(rng, n, r, cplx, bits), r, cplx, exact=True)


def random_psd_float(rng, n, rank=None, enforce_deficient=False, complex_field=True):
    r = choose_rank(rng, n, rank, enforce_deficient)
    G = rng.standard_normal((r, n))
    if complex_field:
        G = G + 1j * rng.standard_normal((r, n))
    return G.conj().T @ G


def random_correlation_float(rng, n, rank=None, enforce_deficient=False, complex_field=True):
    r = choose_rank(rng, n, rank, enforce_deficient)
    G = rng.standard_normal((r, n)) + (1j * rng.standard_normal((r, n)) if complex_field else 0)
    G = G / np.linalg.norm(G, axis=0)
    X = G.conj().T @ G
    np.fill_diagonal(X, 1.0)
    return X


def random_unitary(rng, n):
    """Haar-distributed unitary from the QR factorisation of a complex Ginibre matrix."""
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))


def sinkhorn(M, tol=1e-13, max_iter=10000):
    """Alternately normalise rows and columns of a positive matrix."""
    M = np.array(M, dtype=float)
    for _ in range(max_iter):
        M /= M.sum(1, keepdims=True)
        M /= M.sum(0, keepdims=True)
        if np.abs(M.sum(1) - 1).max() < tol:
            break
    return M


def rationalize_doubly_stochastic(M, bits=16):
    """Exact doubly stochastic matrix near M.

    The leading (n-1) x (n-1) block is rounded to dyadics; the last column
    and row absorb the residues, and the corner is fixed by the last row.
    Returns None when rounding makes an entry negative.
    """
    n = M.shape[0]
    B = [[dyadic(M[i, j], bits) for j in range(n - 1)] for i in range(n - 1)]
    for i in range(n - 1):
        B[i].append(1 - sum(B[i]))
    last = [1 - sum(B[i][j] for i in range(n - 1)) for j in range(n - 1)]
    last.append(1 - sum(last))
    B.append(last)
    if any(x < 0 for r in B for x in r):
        return None
    return Matrix(B, "rational")


def random_doubly_stochastic_exact(rng, n, bits=16):
    if n == 1:
        return Matrix([[1]], "rational")
    while True:
        M = sinkhorn(rng.random((n, n)) + 0.05)
        B = rationalize_doubly_stochastic(M, bits)
        if B is not None:
            return B
