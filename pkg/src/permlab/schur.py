"""The Schur power matrix pi(A) and its spectrum.

pi(A) is indexed by S_n in lexicographic order and has entries
``s[a, b] = prod_t A[a(t), b(t)]``.  It is the principal submatrix of the
n-fold Kronecker power of A on the multi-indices (a(1), ..., a(n)), which
gives a cheap matrix-free product: scatter x into an n^n tensor, apply A
along every mode, gather back.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, DimensionError, NotHermitianError, SizeGuardError
from .matrix import Matrix, det, hermitian_eigh, numeric_rank, rank
from .numeric import ApproxComplex, to_complex
from .permanent import permanent
from .reports import compare, inputs_of

DENSE_MAX_N = 5
OPERATOR_MAX_N = 7
EXACT_RANK_MAX_N = 4
U = 1.12e-16


@lru_cache(maxsize=None)
def lex_permutations(n):
    """S_n as an (n!, n) array of 0-based images, lexicographic order."""
    return np.array(list(itertools.permutations(range(n))), dtype=np.intp).reshape(-1, n)


@lru_cache(maxsize=None)
def _flat_index(n):
    P = lex_permutations(n)
    return np.ravel_multi_index(P.T, (n,) * n) if n else np.zeros(1, dtype=np.intp)


def pi_array(M):
    """Dense complex128 pi(M) for a square array M (n <= 6)."""
    M = np.asarray(M)
    P = lex_permutations(M.shape[0])
    return np.prod(M[P[:, None, :], P[None, :, :]], axis=2)


class SchurPower:
    """pi(A), dense for n <= 5, matrix-free for n <= 7."""

    def __init__(self, A, form=None):
        n = A.n
        if n > OPERATOR_MAX_N:
            raise SizeGuardError(f"Schur power is limited to n <= {OPERATOR_MAX_N}")
        if form is None:
            form = "dense" if n <= DENSE_MAX_N else "operator"
        if form not in ("dense", "operator"):
            raise ValueError(f"unknown form {form!r}")
        if form == "dense" and n > DENSE_MAX_N:
            raise SizeGuardError(f"dense Schur power is limited to n <= {DENSE_MAX_N}")
        self.A = A
        self.n = n
        self.size = math.factorial(n)
        self.form = form
        self.perms = lex_permutations(n)
        self._M, self._err = A.to_numpy()
        self._absM = np.abs(self._M)
        self._dense_np = None
        self._dense_exact = None

    @property
    def shape(self):
        return (self.size, self.size)

    def entry(self, a, b):
        """Exact (or ApproxComplex) entry at lexicographic indices a, b."""
        pa, pb = self.perms[a], self.perms[b]
        rows = self.A.rows
        t = rows[pa[0]][pb[0]]
        for k in range(1, self.n):
            t = t * rows[pa[k]][pb[k]]
        return t

    def is_hermitian(self):
        return self.A.is_hermitian()

    # dense forms ---------------------------------------------------------

    def dense(self):
        """pi(A) as a Matrix over the field of A."""
        if self.n > DENSE_MAX_N:
            raise SizeGuardError(f"dense Schur power is limited to n <= {DENSE_MAX_N}")
        if self._dense_exact is None:
            rows = self.A.rows
            P = [tuple(p) for p in self.perms.tolist()]
            n = self.n
            out = []
            for pa in P:
                r = []
                for pb in P:
                    t = rows[pa[0]][pb[0]]
                    for k in range(1, n):
                        t = t * rows[pa[k]][pb[k]]
                    r.append(t)
                out.append(r)
            self._dense_exact = Matrix._trusted(out, self.A.field, self.A.prec)
        return self._dense_exact

    def dense_numpy(self):
        """complex128 pi(A) and a Frobenius bound on its error."""
        if self.n > DENSE_MAX_N + 1:
            raise SizeGuardError("complex128 dense form is limited to n <= 6")
        if self._dense_np is None:
            P = self.perms
            idx_a, idx_b = P[:, None, :], P[None, :, :]
            D = np.prod(self._M[idx_a, idx_b], axis=2)
            Dabs = np.prod(self._absM[idx_a, idx_b], axis=2)
            err = (2 * self.n + 2) * U * float(np.linalg.norm(Dabs))
            if self._err:
                e = self._err / max(self.n, 1)
                # |prod(a + e) - prod(a)| <= prod(|a| + e) - prod(|a|)
                Dup = np.prod(self._absM[idx_a, idx_b] + e, axis=2)
                err += float(np.linalg.norm(Dup - Dabs))
            self._dense_np = (D, err)
        return self._dense_np

    # matrix-free products -----------------------------------------------

    def matvec(self, x):
        """y = pi(A) x via mode products on the n^n tensor."""
        x = np.asarray(x, dtype=complex)
        if x.shape != (self.size,):
            raise DimensionError(f"vector of length {x.shape} for operator of size {self.size}")
        n = self.n
        if n == 0:
            return x.copy()
        if self.form == "dense" and self._dense_np is not None:
            return self._dense_np[0] @ x
        flat = _flat_index(n)
        T = np.zeros(n**n, dtype=complex)
        T[flat] = x
        T = T.reshape((n,) * n)
        for ax in range(n):
            T = np.moveaxis(np.tensordot(self._M, T, axes=([1], [ax])), 0, ax)
        return T.reshape(-1)[flat]

    def matvec_entrywise(self, x, chunk=256):
        """Same product with every entry formed on the fly; reference path."""
        x = np.asarray(x, dtype=complex)
        P = self.perms
        y = np.empty(self.size, dtype=complex)
        for s in range(0, self.size, chunk):
            a = P[s:s + chunk]
            blk = self._M[a[:, 0][:, None], P[:, 0][None, :]].copy()
            for t in range(1, self.n):
                blk *= self._M[a[:, t][:, None], P[:, t][None, :]]
            y[s:s + chunk] = blk @ x
        return y

    def matvec_error(self, x_norm=1.0):
        """Bound on ||fl(pi(A) x) - pi(A) x|| for ||x|| = x_norm."""
        n = self.n
        nrm = float(np.linalg.norm(self._absM, 2)) if n else 1.0
        bound = (n * n + 2) * U * nrm**n
        if self._err:
            full = float(np.linalg.norm(self._absM, 2)) + self._err
            bound += full**n - nrm**n
        return bound * x_norm


def schur_power(A, form=None):
    return SchurPower(A, form)


# ---------------------------------------------------------------------------
# row sums
# ---------------------------------------------------------------------------


def row_sums(S):
    """All n! row sums of pi(A), each equal to per A.

    Dense exact forms are summed directly.  For n > 5 every row of pi(A)
    is a rearrangement of the values prod_u a_{u, s(u)} (the entry at
    (a, b) only depends on s = b a^-1), so the exact sums come from that
    single table; a complex128 pass over pi(A) 1 cross-checks all rows.
    """
    if S.n <= DENSE_MAX_N:
        D = S.dense()
        out = []
        for r in D.rows:
            acc = r[0]
            for x in r[1:]:
                acc = acc + x
            out.append(acc)
        return out
    rows = S.A.rows
    acc = None
    for p in S.perms.tolist():
        t = rows[0][p[0]]
        for k in range(1, S.n):
            t = t * rows[k][p[k]]
        acc = t if acc is None else acc + t
    y = S.matvec(np.ones(S.size))
    ref = to_complex(acc)
    tol = S.matvec_error(math.sqrt(S.size)) + 1e-12 * max(abs(ref), 1.0) + getattr(acc, "radius", 0.0)
    bad = np.nonzero(np.abs(y - ref) > tol)[0]
    if bad.size:
        raise ArithmeticError(f"row {int(bad[0])} of pi(A) does not sum to per A")
    return [acc] * S.size


# ---------------------------------------------------------------------------
# spectrum
# ---------------------------------------------------------------------------


@dataclass
class LanczosResult:
    value: float
    vector: np.ndarray
    residual: float
    iterations: int
    bracket: tuple


def lanczos_extreme(matvec, size, which="max", tol=1e-9, max_iter=400, seed=0, start=None, check_every=5, scale=0.0):
    """Extreme eigenpair of a Hermitian operator by Lanczos with full
    reorthogonalisation.

    Stops when the residual of the Ritz pair is below
    tol * max(|theta|, scale); the Ritz value theta is then within the
    residual of an eigenvalue.  `scale` (an operator-norm estimate) keeps
    the test meaningful for eigenvalues near zero.
    """
    sign = 1.0 if which == "max" else -1.0
    rng = np.random.default_rng(seed)
    if start is None:
        q = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    else:
        q = np.asarray(start, dtype=complex).copy()
    q /= np.linalg.norm(q)
    m = min(max_iter, size)
    Q = np.zeros((m + 1, size), dtype=complex)
    Q[0] = q
    alpha, beta = [], []
    best = None
    for j in range(m):
        w = sign * matvec(Q[j])
        a = float(np.vdot(Q[j], w).real)
        w -= a * Q[j]
        if j:
            w -= beta[-1] * Q[j - 1]
        # two passes of classical Gram-Schmidt keep the basis orthonormal
        for _ in range(2):
            w -= Q[: j + 1].T @ (Q[: j + 1].conj() @ w)
        b = float(np.linalg.norm(w))
        alpha.append(a)
        last = j + 1 == m or b < 1e-14 * max(abs(a), 1.0)
        if (j + 1) % check_every == 0 or last:
            T = np.diag(alpha) + np.diag(beta, 1) + np.diag(beta, -1)
            th, Y = np.linalg.eigh(T)
            theta, y = th[-1], Y[:, -1]
            est = abs(b * y[-1])
            if est <= tol * max(abs(theta), scale, 1e-300) or last:
                v = Q[: j + 1].T @ y
                v /= np.linalg.norm(v)
                r = float(np.linalg.norm(sign * matvec(v) - theta * v))
                best = (theta, v, r, j + 1)
                if r <= tol * max(abs(theta), scale, 1e-300) or last:
                    break
        if b < 1e-14 * max(abs(a), 1.0):
            break
        beta.append(b)
        Q[j + 1] = w / b
    if best is None:
        raise ConvergenceError("Lanczos produced no Ritz pair", None)
    theta, v, r, it = best
    val = sign * theta
    bracket = (val - r, val + r)
    if r > max(tol * max(abs(theta), scale), 1e-12) * 1e3:
        raise ConvergenceError(f"Lanczos did not converge in {it} steps", bracket)
    return LanczosResult(val, v, r, it, bracket)


@dataclass
class SpectralSummary:
    lambda_max: ApproxComplex
    lambda_min: ApproxComplex
    rank: int | None
    per_value: object
    pot_margin: ApproxComplex
    method: str
    top_vector: np.ndarray | None = field(default=None, repr=False)
    diagnostics: dict = field(default_factory=dict)

    def to_json(self):
        from .reports import _jsonable

        return {
            "lambda_max": _jsonable(self.lambda_max),
            "lambda_min": _jsonable(self.lambda_min),
            "rank": self.rank,
            "per": _jsonable(self.per_value),
            "pot_margin": _jsonable(self.pot_margin),
            "pot_violated": self.pot_margin.certainly_negative(),
            "method": self.method,
            "diagnostics": _jsonable(self.diagnostics),
        }


def _real(v, r):
    return ApproxComplex(float(v), 0.0, float(r), 53)


def extreme_eigenvalues(S, seed=0, tol=1e-9):
    """(lambda_max, lambda_min, top eigenvector, method, diagnostics)."""
    if not S.is_hermitian():
        raise NotHermitianError("spectral analysis needs a Hermitian A")
    if S.form == "dense" or S.n <= DENSE_MAX_N:
        D, err = S.dense_numpy()
        w, V, radii = hermitian_eigh(D, err)
        return _real(w[-1], radii[-1]), _real(w[0], radii[0]), V[:, -1], "dense-eigh", {"error_bound": err}
    e = S.matvec_error()
    hi = lanczos_extreme(S.matvec, S.size, "max", tol=tol, seed=seed)
    lo = lanczos_extreme(S.matvec, S.size, "min", tol=tol, seed=seed + 1, scale=abs(hi.value))
    diag = {
        "iterations_max": hi.iterations,
        "iterations_min": lo.iterations,
        "residual_max": hi.residual,
        "residual_min": lo.residual,
        "matvec_error": e,
    }
    return _real(hi.value, hi.residual + e), _real(lo.value, lo.residual + e), hi.vector, "lanczos", diag


def schur_rank(S):
    """Exact rank for exact A when n <= 4, singular-value count otherwise;
    None for the operator form."""
    if S.n <= EXACT_RANK_MAX_N and S.A.is_exact():
        return rank(S.dense())
    if S.n <= DENSE_MAX_N:
        return numeric_rank(S.dense_numpy()[0])
    return None


def spectral_summary(S, seed=0):
    lmax, lmin, v, method, diag = extreme_eigenvalues(S, seed)
    per = permanent(S.A)
    margin = (-(lmax - per)).real_part()
    return SpectralSummary(lmax, lmin, schur_rank(S), per, margin, method, v, diag)


def smallest_eigen_is_det(A, seed=0):
    """Report comparing lambda_min(pi(A)) with det A."""
    S = SchurPower(A)
    _, lmin, _, method, _ = extreme_eigenvalues(S, seed)
    d = det(A)
    return compare("det_smallest_eigenvalue", lmin, d, inputs_of(A), relation="==",
                   diagnostics={"method": method})


# ---------------------------------------------------------------------------
# numerical range sampling
# ---------------------------------------------------------------------------


@dataclass
class NumericalRangeSample:
    points: np.ndarray
    radius: float
    hull: dict


def _as_operator(M):
    if isinstance(M, SchurPower):
        return M.matvec, M.size, M.matvec_error()
    if isinstance(M, Matrix):
        arr, err = M.to_numpy()
    else:
        arr, err = np.asarray(M, dtype=complex), 0.0
    n = arr.shape[0]
    e = err + 4 * n * U * float(np.linalg.norm(arr))
    return (lambda x: arr @ x), n, e


def numerical_range_sample(M, k, seed=0, extra_vectors=()):
    """Rayleigh quotients x*Mx / x*x for k seeded random x and any extra vectors."""
    if k < 1:
        raise ValueError("k must be at least 1")
    mv, n, e = _as_operator(M)
    rng = np.random.default_rng(seed)
    pts = []
    vecs = [rng.standard_normal(n) + 1j * rng.standard_normal(n) for _ in range(k)]
    vecs += [np.asarray(v, dtype=complex) for v in extra_vectors]
    for x in vecs:
        x = x / np.linalg.norm(x)
        pts.append(complex(np.vdot(x, mv(x))))
    pts = np.array(pts)
    radius = e + 4 * n * U * float(np.abs(pts).max(initial=0.0))
    hull = {
        "re_min": float(pts.real.min()),
        "re_max": float(pts.real.max()),
        "im_min": float(pts.imag.min()),
        "im_max": float(pts.imag.max()),
    }
    return NumericalRangeSample(pts, radius, hull)


def is_principal_kron_submatrix(A):
    """Check pi(A) against the rows/columns of the Kronecker power it sits in."""
    from .matrix import kronecker

    n = A.n
    K = A
    for _ in range(n - 1):
        K = kronecker(K, A)
    idx = [int(i) for i in _flat_index(n)]
    D = SchurPower(A, "dense").dense()
    return all(D[a, b] == K[idx[a], idx[b]] for a in range(len(idx)) for b in range(len(idx)))


__all__ = [
    "SchurPower",
    "SpectralSummary",
    "LanczosResult",
    "NumericalRangeSample",
    "schur_power",
    "row_sums",
    "spectral_summary",
    "extreme_eigenvalues",
    "schur_rank",
    "lanczos_extreme",
    "smallest_eigen_is_det",
    "numerical_range_sample",
    "lex_permutations",
    "is_principal_kron_submatrix",
]
