"""Dense square matrices over the scalar fields of :mod:`permlab.numeric`."""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ConvergenceError, DimensionError, DomainError, NotHermitianError
from .numeric import (
    DEFAULT_PRECISION,
    ApproxComplex,
    CyclotomicNumber,
    coerce_to_field,
    conj,
    embed,
    exact_real_value,
    field_tag,
    format_scalar,
    join_tags,
    normalize_field_tag,
    real_sign,
)

PSD_FLOAT_TOL = 1e-10
RANK_TOL = 1e-8


class Matrix:
    """Immutable n x n matrix; all entries share one field."""

    __slots__ = ("_rows", "n", "field", "prec")

    def __init__(self, rows, field=None, prec=DEFAULT_PRECISION):
        rows = [list(r) for r in rows]
        n = len(rows)
        for i, r in enumerate(rows):
            if len(r) != n:
                raise DimensionError(f"row {i + 1} has {len(r)} entries, expected {n}")
        if field is None:
            tag = "rational"
            for r in rows:
                for x in r:
                    tag = join_tags(tag, field_tag(x))
        else:
            tag = normalize_field_tag(field)
        self._rows = tuple(tuple(coerce_to_field(x, tag, prec) for x in r) for r in rows)
        self.n = n
        self.field = tag
        self.prec = prec

    @classmethod
    def _trusted(cls, rows, field, prec=DEFAULT_PRECISION):
        obj = object.__new__(cls)
        obj._rows = tuple(tuple(r) for r in rows)
        obj.n = len(obj._rows)
        obj.field = field
        obj.prec = prec
        return obj

    # construction helpers ---------------------------------------------
    @classmethod
    def identity(cls, n, field="rational"):
        return cls([[Fraction(int(i == j)) for j in range(n)] for i in range(n)], field)

    @classmethod
    def ones(cls, n, field="rational"):
        return cls([[Fraction(1)] * n for _ in range(n)], field)

    @classmethod
    def zeros(cls, n, field="rational"):
        return cls([[Fraction(0)] * n for _ in range(n)], field)

    @classmethod
    def diag(cls, values, field=None):
        n = len(values)
        return cls([[values[i] if i == j else Fraction(0) for j in range(n)] for i in range(n)], field)

    @classmethod
    def from_numpy(cls, arr, prec=53):
        arr = np.asarray(arr, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionError("expected a square array")
        rows = [[ApproxComplex(z.real, z.imag, 0.0, prec) for z in r] for r in arr]
        return cls._trusted(rows, "float", prec)

    # access --------------------------------------------------------------
    @property
    def rows(self):
        return self._rows

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def __iter__(self):
        return iter(self._rows)

    def __len__(self):
        return self.n

    def is_exact(self):
        return self.field != "float"

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.n == other.n and all(a == b for ra, rb in zip(self._rows, other._rows) for a, b in zip(ra, rb))

    def __hash__(self):
        return hash(self._rows)

    def __repr__(self):
        return f"Matrix(n={self.n}, field={self.field})"

    def to_text(self):
        from .matrix_io import format_matrix

        return format_matrix(self)

    def digest(self):
        return hashlib.sha256(self.to_text().encode()).hexdigest()

    def with_field(self, tag, prec=None):
        return Matrix(self._rows, tag, prec or self.prec)

    def to_float(self, prec=None):
        return Matrix(self._rows, "float", prec or self.prec)

    def to_numpy(self):
        """complex128 image and a bound on the Frobenius norm of the rounding."""
        out = np.empty((self.n, self.n), dtype=complex)
        err = 0.0
        for i, r in enumerate(self._rows):
            for j, x in enumerate(r):
                if isinstance(x, ApproxComplex):
                    z = complex(x.value)
                    e = x.radius
                else:
                    z = complex(embed(x, 64).value) if isinstance(x, CyclotomicNumber) else _fast_complex(x)
                    e = 0.0
                out[i, j] = z
                err += (e + 2.2e-16 * abs(z)) ** 2
        return out, math.sqrt(err)

    def as_numpy(self):
        return self.to_numpy()[0]

    # structure -----------------------------------------------------------
    def transpose(self):
        return Matrix._trusted(zip(*self._rows), self.field, self.prec)

    @property
    def T(self):
        return self.transpose()

    def conjugate(self):
        return Matrix._trusted([[conj(x) for x in r] for r in self._rows], self.field, self.prec)

    def adjoint(self):
        return self.conjugate().transpose()

    H = property(adjoint)

    def is_hermitian(self):
        if self.field == "float":
            for i in range(self.n):
                for j in range(i, self.n):
                    d = self[i, j] - conj(self[j, i])
                    if d.mag() > d.radius:
                        return False
            return True
        return all(self[i, j] == conj(self[j, i]) for i in range(self.n) for j in range(i, self.n))

    def diagonal(self):
        return [self._rows[i][i] for i in range(self.n)]

    def trace(self):
        return _sum(self.diagonal(), self.field, self.prec)

    def permuted(self, row_perm, col_perm=None):
        """Matrix with (i, j) entry a[row_perm[i], col_perm[j]]."""
        col_perm = row_perm if col_perm is None else col_perm
        return Matrix._trusted([[self._rows[p][q] for q in col_perm] for p in row_perm], self.field, self.prec)

    def submatrix(self, rows, cols=None):
        cols = rows if cols is None else cols
        return Matrix._trusted([[self._rows[i][j] for j in cols] for i in rows], self.field, self.prec)

    def map(self, fn, field=None):
        return Matrix([[fn(x) for x in r] for r in self._rows], field, self.prec)

    # arithmetic ----------------------------------------------------------
    def _unify(self, other):
        if not isinstance(other, Matrix):
            raise TypeError("expected a Matrix")
        if other.n != self.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")
        tag = join_tags(self.field, other.field)
        prec = max(self.prec, other.prec)
        a = self if self.field == tag else self.with_field(tag, prec)
        b = other if other.field == tag else other.with_field(tag, prec)
        return a, b, tag, prec

    def __add__(self, other):
        a, b, tag, prec = self._unify(other)
        return Matrix._trusted([[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a._rows, b._rows)], tag, prec)

    def __sub__(self, other):
        a, b, tag, prec = self._unify(other)
        return Matrix._trusted([[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a._rows, b._rows)], tag, prec)

    def __neg__(self):
        return Matrix._trusted([[-x for x in r] for r in self._rows], self.field, self.prec)

    def scale(self, c):
        tag = join_tags(self.field, field_tag(c))
        a = self if tag == self.field else self.with_field(tag)
        c = coerce_to_field(c, tag, self.prec)
        return Matrix._trusted([[c * x for x in r] for r in a._rows], tag, self.prec)

    def __matmul__(self, other):
        a, b, tag, prec = self._unify(other)
        cols = list(zip(*b._rows))
        n = self.n
        out = []
        for r in a._rows:
            out.append([_dot(r, c, tag, prec) for c in cols])
        return Matrix._trusted(out, tag, prec)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            return self @ other
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = Matrix.identity(self.n, self.field)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result


def _fast_complex(x):
    if isinstance(x, (int, Fraction)):
        return complex(float(x))
    return complex(x)


def zero_of(tag, prec=DEFAULT_PRECISION):
    return coerce_to_field(Fraction(0), tag, prec)


def one_of(tag, prec=DEFAULT_PRECISION):
    return coerce_to_field(Fraction(1), tag, prec)


def _sum(values, tag, prec=DEFAULT_PRECISION):
    values = list(values)
    if not values:
        return zero_of(tag, prec)
    acc = values[0]
    for v in values[1:]:
        acc = acc + v
    return acc


def _dot(r, c, tag, prec):
    acc = None
    for x, y in zip(r, c):
        t = x * y
        acc = t if acc is None else acc + t
    return acc if acc is not None else zero_of(tag, prec)


# ---------------------------------------------------------------------------
# products and constructions
# ---------------------------------------------------------------------------


def hadamard(A, B):
    """Entrywise product."""
    a, b, tag, prec = A._unify(B)
    return Matrix._trusted([[x * y for x, y in zip(ra, rb)] for ra, rb in zip(a.rows, b.rows)], tag, prec)


def kronecker(A, B):
    tag = join_tags(A.field, B.field)
    prec = max(A.prec, B.prec)
    a = A if A.field == tag else A.with_field(tag, prec)
    b = B if B.field == tag else B.with_field(tag, prec)
    n, m = a.n, b.n
    rows = []
    for i in range(n):
        for k in range(m):
            rows.append([a[i, j] * b[k, l] for j in range(n) for l in range(m)])
    return Matrix._trusted(rows, tag, prec)


def hadamard_power(A, k):
    if not isinstance(k, int) or k < 1:
        raise DomainError("Hadamard power needs an integer k >= 1")
    return Matrix._trusted([[x**k for x in r] for r in A.rows], A.field, A.prec)


def entrywise_abs(A):
    """Matrix of moduli; exact when every modulus is rational."""
    if A.is_exact():
        out = []
        for r in A.rows:
            row = []
            for x in r:
                q = _rational_modulus(x)
                if q is None:
                    return _float_abs(A)
                row.append(q)
            out.append(row)
        return Matrix._trusted(out, "rational", A.prec)
    return _float_abs(A)


def _float_abs(A):
    F = A if A.field == "float" else A.to_float()
    return Matrix._trusted([[x.modulus() for x in r] for r in F.rows], "float", F.prec)


def _rational_modulus(x):
    q = exact_real_value(x)
    if q is not None:
        return abs(q)
    sq = x.abs_squared()
    sq = exact_real_value(sq)
    if sq is None:
        return None
    return rational_sqrt(sq)


def rational_sqrt(q):
    """Exact square root of a nonnegative rational, or None."""
    q = Fraction(q)
    if q < 0:
        return None
    a, b = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def gram_from_rows(rows):
    """Sum over rows u of u* u, the n x n Gram-type matrix."""
    rows = [list(r) for r in rows]
    if not rows:
        raise DimensionError("gram_from_rows needs at least one vector")
    n = len(rows[0])
    if any(len(r) != n for r in rows):
        raise DimensionError("vectors of unequal length")
    tag = "rational"
    for r in rows:
        for x in r:
            tag = join_tags(tag, field_tag(x))
    rows = [[coerce_to_field(x, tag) for x in r] for r in rows]
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = None
            for u in rows:
                t = conj(u[i]) * u[j]
                acc = t if acc is None else acc + t
            row.append(acc)
        out.append(row)
    return Matrix._trusted(out, tag)


def submatrix_delete(A, i, j):
    """A(i, j): delete row i and column j (1-based)."""
    n = A.n
    if n < 2:
        raise DimensionError("submatrix_delete needs n >= 2")
    if not (1 <= i <= n and 1 <= j <= n):
        raise DimensionError(f"index ({i}, {j}) out of range for n = {n}")
    rows = [k for k in range(n) if k != i - 1]
    cols = [k for k in range(n) if k != j - 1]
    return A.submatrix(rows, cols)


class PartitionedView:
    """A matrix of size outer*inner seen as an outer x outer grid of
    inner x inner blocks."""

    def __init__(self, base, outer, inner):
        if outer < 1 or inner < 1 or outer * inner != base.n:
            raise DimensionError(f"{outer} x {inner} blocks do not tile a {base.n} x {base.n} matrix")
        self.base = base
        self.outer = outer
        self.inner = inner

    def block(self, i, j):
        """Block (i, j), 0-based."""
        m = self.inner
        return self.base.submatrix(range(i * m, (i + 1) * m), range(j * m, (j + 1) * m))


# ---------------------------------------------------------------------------
# special families
# ---------------------------------------------------------------------------


class CorrelationMatrix(Matrix):
    """Hermitian PSD matrix with unit diagonal; validated on construction."""

    __slots__ = ()

    def __init__(self, rows, field=None, prec=DEFAULT_PRECISION, check=True):
        super().__init__(rows, field, prec)
        if check:
            _validate_correlation(self)

    @classmethod
    def of(cls, A, check=True):
        if check:
            _validate_correlation(A)
        obj = object.__new__(cls)
        obj._rows, obj.n, obj.field, obj.prec = A.rows, A.n, A.field, A.prec
        return obj


def _validate_correlation(A):
    if not A.is_hermitian():
        raise NotHermitianError("correlation matrix must be Hermitian")
    for x in A.diagonal():
        if isinstance(x, ApproxComplex):
            if not (x - 1).mag() <= x.radius + 1e-12:
                raise DomainError("correlation matrix needs a unit diagonal")
        elif x != 1:
            raise DomainError("correlation matrix needs a unit diagonal")
    if not is_psd(A):
        raise DomainError("correlation matrix must be positive semidefinite")


def is_correlation(A):
    try:
        _validate_correlation(A)
    except (DomainError, NotHermitianError):
        return False
    return True


def is_doubly_stochastic(A, tol=1e-12):
    """Nonnegative real entries with unit row and column sums.  Exact fields
    are checked exactly, float matrices within `tol`."""
    n = A.n
    if A.is_exact():
        vals = [[exact_real_value(x) for x in r] for r in A.rows]
        if any(v is None or v < 0 for r in vals for v in r):
            return False
        return all(sum(r) == 1 for r in vals) and all(sum(vals[i][j] for i in range(n)) == 1 for j in range(n))
    M, _ = A.to_numpy()
    if np.abs(M.imag).max(initial=0) > tol or (M.real < -tol).any():
        return False
    return bool(np.all(np.abs(M.real.sum(1) - 1) <= tol) and np.all(np.abs(M.real.sum(0) - 1) <= tol))


def constant_correlation(n, t):
    """C_t: unit diagonal, every off-diagonal entry t."""
    if n < 1:
        raise DimensionError("n must be positive")
    if isinstance(t, (float, ApproxComplex)):
        tv = float(t)
        ok = n == 1 or (-1.0 / (n - 1) - 1e-15 <= tv <= 1.0 + 1e-15)
        tag = "float"
        t = embed(t)
    else:
        tq = exact_real_value(t)
        if tq is None:
            raise DomainError("constant_correlation needs a real t")
        ok = n == 1 or Fraction(-1, n - 1) <= tq <= 1
        t = tq
        tag = "rational"
    if not ok:
        raise DomainError(f"t = {format_scalar(t)} outside the PSD range for n = {n}")
    one = one_of(tag)
    rows = [[one if i == j else t for j in range(n)] for i in range(n)]
    return CorrelationMatrix.of(Matrix(rows, tag), check=False)


def normalize_to_correlation(A):
    """D^(-1/2) A D^(-1/2); exact when every diagonal entry is a rational square."""
    d = A.diagonal()
    roots = []
    exact = A.is_exact()
    for x in d:
        if isinstance(x, ApproxComplex):
            if not x.certainly_positive():
                raise DomainError("normalize_to_correlation needs a strictly positive diagonal")
            roots.append(None)
            continue
        q = exact_real_value(x)
        if q is None or q <= 0:
            raise DomainError("normalize_to_correlation needs a strictly positive diagonal")
        r = rational_sqrt(q)
        if r is None:
            exact = False
        roots.append(r)
    if exact:
        inv = [1 / r for r in roots]
        rows = [[A[i, j] * inv[i] * inv[j] for j in range(A.n)] for i in range(A.n)]
        return CorrelationMatrix.of(Matrix(rows, A.field), check=False)
    F = A if A.field == "float" else A.to_float()
    s = [F[i, i].real_part().sqrt() for i in range(A.n)]
    rows = [[F[i, j] / (s[i] * s[j]) for j in range(A.n)] for i in range(A.n)]
    for i in range(A.n):
        rows[i][i] = embed(1, F.prec)
    return CorrelationMatrix.of(Matrix._trusted(rows, "float", F.prec), check=False)


# ---------------------------------------------------------------------------
# determinant, rank, PSD test, eigenvalues
# ---------------------------------------------------------------------------


def det(A):
    """Determinant by fraction-free (Bareiss) elimination."""
    n = A.n
    if n == 0:
        return one_of(A.field, A.prec)
    M = [list(r) for r in A.rows]
    sign = 1
    prev = one_of(A.field, A.prec)
    for k in range(n - 1):
        if _is_zero(M[k][k]):
            swap = next((i for i in range(k + 1, n) if not _is_zero(M[i][k])), None)
            if swap is None:
                return zero_of(A.field, A.prec)
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        pk = M[k][k]
        for i in range(k + 1, n):
            mik = M[i][k]
            row_i, row_k = M[i], M[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pk - mik * row_k[j]) / prev
        prev = pk
    d = M[n - 1][n - 1]
    return d if sign > 0 else -d


def _is_zero(x):
    if isinstance(x, ApproxComplex):
        return x.mag() <= x.radius
    return x == 0


def rank(A, tol=RANK_TOL):
    """Exact rank by elimination, or the count of singular values above
    tol * sigma_max for float matrices."""
    if A.is_exact():
        M = [list(r) for r in A.rows]
        n = A.n
        r = 0
        for c in range(n):
            piv = next((i for i in range(r, n) if M[i][c] != 0), None)
            if piv is None:
                continue
            M[r], M[piv] = M[piv], M[r]
            p = M[r][c]
            for i in range(r + 1, n):
                if M[i][c] != 0:
                    f = M[i][c] / p
                    M[i] = [a - f * b for a, b in zip(M[i], M[r])]
            r += 1
        return r
    return numeric_rank(A.as_numpy(), tol)


def numeric_rank(M, tol=RANK_TOL):
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int((s > tol * s[0]).sum())


@dataclass
class PSDResult:
    """Outcome of a PSD test together with the evidence for it."""

    is_psd: bool
    method: str
    pivots: list = field(default_factory=list)
    min_eigenvalue: float | None = None
    reason: str = ""

    def __bool__(self):
        return self.is_psd


def is_psd(A, tol=PSD_FLOAT_TOL):
    """Decide A >= 0.

    Exact fields use diagonally pivoted LDL* elimination, which tolerates
    singular input: a zero pivot forces its whole row to vanish.  Float
    matrices compare the smallest eigenvalue against -tol * ||A||_inf.
    """
    if not A.is_hermitian():
        raise NotHermitianError("is_psd needs a Hermitian matrix")
    if A.is_exact():
        return _ldl_psd(A)
    M, err = A.to_numpy()
    w = np.linalg.eigvalsh(M)
    lo = float(w[0]) if w.size else 0.0
    norm = float(np.abs(M).sum(1).max(initial=0.0))
    ok = lo >= -(tol * norm + err)
    return PSDResult(ok, "eigenvalue", min_eigenvalue=lo, reason="" if ok else "negative eigenvalue")


def _ldl_psd(A):
    n = A.n
    S = [list(r) for r in A.rows]
    idx = list(range(n))
    pivots = []
    while S:
        signs = [real_sign(S[k][k]) for k in range(len(S))]
        if any(s < 0 for s in signs):
            k = signs.index(-1)
            return PSDResult(False, "ldl", pivots, reason=f"negative pivot at index {idx[k] + 1}")
        p = next((k for k, s in enumerate(signs) if s > 0), None)
        if p is None:
            if any(x != 0 for r in S for x in r):
                return PSDResult(False, "ldl", pivots, reason="nonzero row with zero diagonal")
            break
        d = S[p][p]
        pivots.append((idx[p] + 1, d))
        col = [S[i][p] for i in range(len(S))]
        inv = 1 / d
        keep = [i for i in range(len(S)) if i != p]
        S = [[S[i][j] - col[i] * conj(col[j]) * inv for j in keep] for i in keep]
        idx = [idx[i] for i in keep]
    return PSDResult(True, "ldl", pivots)


def hermitian_eigh(M, err=0.0):
    """Eigen-decomposition of a Hermitian complex128 array with radii.

    Each radius combines the residual norm of the computed pair, a
    backward-error term 8 n u ||M||_F and the input perturbation `err`.
    """
    M = np.asarray(M)
    n = M.shape[0]
    w, V = np.linalg.eigh(M)
    fro = float(np.linalg.norm(M))
    res = np.linalg.norm(M @ V - V * w, axis=0)
    radii = res + 8 * max(n, 1) * 1.12e-16 * fro + err
    return w, V, radii


def eigenvalues_hermitian(A):
    """All eigenvalues, ascending, as real ApproxComplex values."""
    if not A.is_hermitian():
        raise NotHermitianError("eigenvalues_hermitian needs a Hermitian matrix")
    M, err = A.to_numpy()
    try:
        w, _, radii = hermitian_eigh(M, err)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(str(exc)) from exc
    return [ApproxComplex(float(x), 0.0, float(r), 53) for x, r in zip(w, radii)]


def lambda_max(A):
    return eigenvalues_hermitian(A)[-1]


def lambda_min(A):
    return eigenvalues_hermitian(A)[0]


def float_det_bound(M, err=0.0, hermitian=False):
    """Determinant of a complex128 array with an error bound.

    Hermitian input uses the eigenvalue product with Weyl-type radii;
    general input uses LU with a first-order bound.
    """
    n = M.shape[0]
    if n == 0:
        return 1.0 + 0j, 0.0
    if hermitian:
        w, _, radii = hermitian_eigh(M, err)
        d = float(np.prod(w))
        hi = float(np.prod(np.abs(w) + radii))
        lo = float(np.prod(np.abs(w)))
        return complex(d), (hi - lo) + 4 * n * 1.12e-16 * lo
    d = complex(np.linalg.det(M))
    fro = float(np.linalg.norm(M)) + err
    s = np.linalg.svd(M, compute_uv=False)
    # |det(M+E) - det(M)| <= prod(s + e) - prod(s), e = n u ||M|| + err
    e = 8 * n * 1.12e-16 * fro + err
    bound = float(np.prod(s + e) - np.prod(s))
    return d, bound + 4 * n * 1.12e-16 * abs(d)


__all__ = [
    "Matrix",
    "CorrelationMatrix",
    "PartitionedView",
    "PSDResult",
    "hadamard",
    "kronecker",
    "hadamard_power",
    "entrywise_abs",
    "gram_from_rows",
    "submatrix_delete",
    "constant_correlation",
    "normalize_to_correlation",
    "is_correlation",
    "is_doubly_stochastic",
    "is_psd",
    "det",
    "rank",
    "numeric_rank",
    "eigenvalues_hermitian",
    "hermitian_eigh",
    "lambda_max",
    "lambda_min",
    "float_det_bound",
    "rational_sqrt",
    "zero_of",
    "one_of",
]
