"""Checkers for permanent inequalities on positive semidefinite matrices.

Each checker returns one or more `ConjectureReport`s (see `reports`).
Exact inputs are decided exactly; float inputs carry error radii and may
come back inconclusive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DimensionError, DomainError, NotHermitianError, NotPSDError, SizeGuardError
from .gmf import normalized_gmf
from .matrix import (
    CorrelationMatrix,
    Matrix,
    PartitionedView,
    constant_correlation,
    det,
    eigenvalues_hermitian,
    entrywise_abs,
    hadamard,
    hadamard_power,
    hermitian_eigh,
    is_correlation,
    is_doubly_stochastic,
    is_psd,
    kronecker,
)
from .numeric import ApproxComplex, embed, exact_real_value, is_exact
from .permanent import per_complex, per_minor_matrix, permanent
from .reports import HOLDS, VIOLATED, ConjectureReport, compare, inputs_of
from .sampling import random_correlation_float, random_unitary, rng_for
from .schur import SchurPower, extreme_eigenvalues

EXACT_POT_MAX_N = 4
TENSOR_MAX_SIZE = 12


def _require_psd(*mats):
    for A in mats:
        if not A.is_hermitian():
            raise NotHermitianError("input must be Hermitian")
        if not is_psd(A):
            raise NotPSDError("input must be positive semidefinite")


def _same_size(A, B):
    if A.n != B.n:
        raise DimensionError(f"dimension mismatch: {A.n} vs {B.n}")


def _prod(values):
    it = iter(values)
    acc = next(it)
    for x in it:
        acc = acc * x
    return acc


def _diag_product(A):
    return _prod(A.diagonal()) if A.n else 1


def _real_float(x):
    if isinstance(x, ApproxComplex):
        return float(x.value.real)
    q = exact_real_value(x)
    return float(q) if q is not None else float(embed(x, 64).value.real)


# ---------------------------------------------------------------------------
# classical inequalities
# ---------------------------------------------------------------------------


def classical_suite(A, split, B=None):
    """Hadamard, Fischer, Schur, Marcus and Lieb inequalities at the given
    split, the chain 0 <= det <= prod a_ii <= per, and superadditivity of
    det and per on (A, B) when B is supplied."""
    _require_psd(A)
    n = A.n
    if not 0 < split < n:
        raise DimensionError(f"split must lie in 1..{n - 1}")
    inp = inputs_of(A, split=split)
    A11 = A.submatrix(range(split))
    A22 = A.submatrix(range(split, n))
    d, h, p = det(A), _diag_product(A), permanent(A)
    out = [
        compare("det_nonnegative", 0, d, inp),
        compare("hadamard", d, h, inp),
        compare("fischer", d, det(A11) * det(A22), inp),
        compare("schur", d, p, inp),
        compare("marcus", h, p, inp),
        compare("lieb", permanent(A11) * permanent(A22), p, inp),
    ]
    if B is not None:
        _require_psd(B)
        _same_size(A, B)
        inp2 = inputs_of(A, B)
        S = A + B
        out.append(compare("per_superadditive", p + permanent(B), permanent(S), inp2))
        out.append(compare("det_superadditive", d + det(B), det(S), inp2))
    return out


def permanent_dominance(A, H, chi):
    """normalized d^H_chi(A) <= per A."""
    _require_psd(A)
    return compare("permanent_dominance", normalized_gmf(A, H, chi), permanent(A),
                   inputs_of(A, group_order=len(H), character=chi.name))


def schur_inequality(A, H, chi):
    """det A <= normalized d^H_chi(A)."""
    _require_psd(A)
    return compare("schur", det(A), normalized_gmf(A, H, chi), inputs_of(A, group_order=len(H), character=chi.name))


def merris_bound(A, H, chi):
    """normalized gmf <= (prod (A^n)_ii)^(1/n) <= (1/n) sum lambda_i^n.

    Both sides are nonnegative, so the chain is compared after raising to
    the n-th power: g^n <= prod (A^n)_ii <= (tr(A^n) / n)^n, all exact for
    exact input.
    """
    _require_psd(A)
    n = A.n
    g = normalized_gmf(A, H, chi)
    An = A**n
    pd = _diag_product(An)
    tr = An.trace()
    inp = inputs_of(A, group_order=len(H), character=chi.name)
    first = compare("merris_gmf", g**n, pd, inp, diagnostics={"compared": "n-th powers"})
    second = compare("merris_eigen", pd, (tr * Fraction(1, n)) ** n, inp, diagnostics={"compared": "n-th powers"})
    return [first, second]


# ---------------------------------------------------------------------------
# permanent-on-top and its relatives
# ---------------------------------------------------------------------------


def _exact_top_certificate(A, target, M):
    """True iff target * I - M is PSD, decided exactly."""
    shifted = Matrix.identity(M.n, M.field).scale(target) - M
    return bool(is_psd(shifted))


def pot_check(A, seed=0, exact_max_n=EXACT_POT_MAX_N):
    """lambda_max(pi(A)) <= per A.

    For exact A with n <= exact_max_n the verdict comes from an exact LDL
    test of per(A) I - pi(A); otherwise from the certified float margin.
    """
    if A.n > 7:
        raise SizeGuardError("pot_check is limited to n <= 7")
    _require_psd(A)
    S = SchurPower(A)
    lmax, lmin, v, method, diag = extreme_eigenvalues(S, seed)
    p = permanent(A)
    diag = dict(diag, method=method)
    rep = compare("pot", lmax, p, inputs_of(A), diagnostics=diag)
    if A.is_exact() and A.n <= min(exact_max_n, 5):
        ok = _exact_top_certificate(A, p, S.dense())
        rep.verdict = HOLDS if ok else VIOLATED
        rep.diagnostics["certificate"] = "exact LDL of per(A) I - pi(A)"
    if rep.violated:
        rep.witness = {"eigenvector": v, "rayleigh_quotient": _real_float(lmax)}
    return rep


def bapat_sunder_per_max(A):
    """lambda_max of (a_ij per A(i, j)) <= per A."""
    _require_psd(A)
    M = per_minor_matrix(A)
    if not M.is_hermitian():
        raise NotHermitianError("minor matrix is not Hermitian")
    lmax = eigenvalues_hermitian(M)[-1]
    p = permanent(A)
    rep = compare("bapat_sunder_per_max", lmax, p, inputs_of(A))
    if A.is_exact():
        ok = _exact_top_certificate(A, p, M)
        rep.verdict = HOLDS if ok else VIOLATED
        rep.diagnostics["certificate"] = "exact LDL of per(A) I - M"
    return rep


def bapat_sunder(A, B):
    """per(A o B) <= per A * prod b_ii."""
    _same_size(A, B)
    _require_psd(A, B)
    lhs = permanent(hadamard(A, B))
    pa = permanent(A)
    rhs = pa * _diag_product(B)
    diag = {}
    rep = compare("bapat_sunder", lhs, rhs, inputs_of(A, B), diagnostics=diag)
    if is_correlation(A) and is_correlation(B):
        corr = compare("bapat_sunder_correlation", lhs, pa, inputs_of(A, B))
        diag["correlation_form"] = {"verdict": corr.verdict, "margin": corr.margin}
    r = rep.ratio()
    if r is not None:
        diag["ratio"] = r
    return rep


def chollet(A, B):
    """per(A o B) <= per A * per B, with the Cauchy-Schwarz chain
    per(A o B) <= per(|A| o |B|) <= sqrt(per(A o conj A) per(B o conj B))."""
    _same_size(A, B)
    _require_psd(A, B)
    lhs = permanent(hadamard(A, B))
    pa, pb = permanent(A), permanent(B)
    rhs = pa * pb
    abs_prod = permanent(hadamard(entrywise_abs(A), entrywise_abs(B)))
    saa = permanent(hadamard(A, A.conjugate()))
    sbb = permanent(hadamard(B, B.conjugate()))
    cs = math.sqrt(max(_real_float(saa) * _real_float(sbb), 0.0))
    chain = [_real_float(lhs), _real_float(abs_prod), cs, _real_float(rhs)]
    diag = {
        "chain": chain,
        "chain_labels": ["per(A o B)", "per(|A| o |B|)", "sqrt(per(A o conj A) per(B o conj B))", "per A per B"],
        "per_A_conjA": saa,
        "per_B_conjB": sbb,
    }
    return compare("chollet", lhs, rhs, inputs_of(A, B), diagnostics=diag)


def chollet_self(A):
    """per(A o conj A) <= (per A)^2."""
    rep = chollet(A, A.conjugate())
    rep.name = "chollet_self"
    return rep


def real_chollet(A):
    """per((a_ij^2)) <= (per A)^2 for real A."""
    _require_psd(A)
    if A.is_exact():
        if any(exact_real_value(x) is None for r in A.rows for x in r):
            raise DomainError("real_chollet needs a real matrix")
    lhs = permanent(hadamard(A, A))
    p = permanent(A)
    return compare("real_chollet", lhs, p * p, inputs_of(A))


# ---------------------------------------------------------------------------
# correlation matrices and Hadamard products
# ---------------------------------------------------------------------------


@dataclass
class MaximizerResult:
    matrix: CorrelationMatrix
    value: float
    per_A: object
    trajectory: list
    exceeds_per: bool
    evaluations: int
    diagnostics: dict = field(default_factory=dict)

    @property
    def compression(self):
        """True when the best value found does not exceed per A."""
        return not self.exceeds_per

    def to_json(self):
        from .reports import _jsonable

        return {
            "name": "maximizer_search",
            "value": self.value,
            "per_A": _jsonable(self.per_A),
            "exceeds_per": self.exceeds_per,
            "compression": self.compression,
            "evaluations": self.evaluations,
            "trajectory": self.trajectory,
            "matrix": _jsonable(self.matrix),
            "diagnostics": _jsonable(self.diagnostics),
        }


def _gram_factor(X, rank):
    w, V = np.linalg.eigh(X)
    w = np.clip(w, 0, None)
    idx = np.argsort(w)[::-1][:rank]
    G = (V[:, idx] * np.sqrt(w[idx])).conj().T
    return G / np.linalg.norm(G, axis=0)


def _corr_from_factor(G):
    X = G.conj().T @ G
    np.fill_diagonal(X, 1.0)
    return X


def maximizer_search(A, budget, seed=0, rank=None, starts=(), min_step=1e-8):
    """Seeded multi-start hill climbing of X -> per(A o X) over correlation
    matrices, parameterised by unit Gram columns of the given rank.

    Each restart perturbs the factor, keeps improvements, and halves the
    step after a run of failures until it falls below `min_step`.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    if not is_correlation(A):
        raise DomainError("maximizer_search needs a correlation matrix")
    n = A.n
    if n > 7:
        raise SizeGuardError("maximizer_search is limited to n <= 7")
    M, _ = A.to_numpy()
    r = rank or n
    rng = rng_for(seed, 0)

    def f(X):
        return per_complex(M * X)[0].real

    starts = [s.as_numpy() if isinstance(s, Matrix) else np.asarray(s, dtype=complex) for s in starts]
    used = 0
    best_val, best_X = -math.inf, None
    trajectory = []
    restart = 0
    while used < budget:
        if restart < len(starts):
            G = _gram_factor(starts[restart], max(r, np.linalg.matrix_rank(starts[restart], 1e-10)))
        else:
            G = rng.standard_normal((r, n)) + 1j * rng.standard_normal((r, n))
            G /= np.linalg.norm(G, axis=0)
        X = _corr_from_factor(G)
        val = f(X)
        used += 1
        path = [val]
        step, fails = 0.5, 0
        while used < budget and step >= min_step:
            D = rng.standard_normal(G.shape) + 1j * rng.standard_normal(G.shape)
            G2 = G + step * D
            G2 /= np.linalg.norm(G2, axis=0)
            X2 = _corr_from_factor(G2)
            v2 = f(X2)
            used += 1
            if v2 > val:
                G, X, val = G2, X2, v2
                path.append(val)
                fails = 0
            else:
                fails += 1
                if fails >= 4 * n:
                    step /= 2
                    fails = 0
        trajectory.append({"restart": restart, "start": path[0], "best": val, "improvements": len(path) - 1})
        if val > best_val:
            best_val, best_X = val, X
        restart += 1
    p = permanent(A)
    Xm = CorrelationMatrix.of(Matrix.from_numpy(best_X), check=False)
    _, bound = per_complex(M * best_X)
    exceeds = best_val - bound > _real_float(p) + (p.radius if isinstance(p, ApproxComplex) else 0.0)
    return MaximizerResult(Xm, float(best_val), p, trajectory, bool(exceeds), used, {"rank": r, "error_bound": bound})


@dataclass
class SeriesResult:
    name: str
    values: list
    reference: object
    first_k: int | None
    diagnostics: dict = field(default_factory=dict)
    reports: list = field(default_factory=list)

    def to_json(self):
        from .reports import _jsonable

        return {
            "name": self.name,
            "values": _jsonable(self.values),
            "reference": _jsonable(self.reference),
            "first_k": self.first_k,
            "diagnostics": _jsonable(self.diagnostics),
            "reports": [r.to_json() for r in self.reports],
        }


def _le(a, b):
    if is_exact(a) and is_exact(b):
        from .numeric import real_sign

        return real_sign(b - a) >= 0
    return _real_float(a) <= _real_float(b)


def hadamard_power_probe(A, kmax):
    """per(A^[k]) for k = 1..kmax and the first k >= 2 with per(A^[k]) <= per A."""
    if kmax < 1:
        raise ValueError("kmax must be at least 1")
    p = permanent(A)
    values = [p] + [permanent(hadamard_power(A, k)) for k in range(2, kmax + 1)]
    first = next((k for k in range(2, kmax + 1) if _le(values[k - 1], p)), None)
    floats = [_real_float(v) for v in values]
    diag = {
        "monotone_nonincreasing": all(floats[i + 1] <= floats[i] + 1e-12 * abs(floats[i]) for i in range(len(floats) - 1)),
        "real_input": all(exact_real_value(x) is not None for r in A.rows for x in r) if A.is_exact() else None,
    }
    return SeriesResult("hadamard_power", values, p, first, diag)


def _lambda_min(A):
    return eigenvalues_hermitian(A)[0]


def zfz_result5(A, B):
    """per(A o B) <= per C_t for t = 1 - lambda_min of A, B and A o B."""
    _same_size(A, B)
    if not (is_correlation(A) and is_correlation(B)):
        raise DomainError("zfz_result5 needs two correlation matrices")
    n = A.n
    AB = hadamard(A, B)
    lhs = permanent(AB)
    out = []
    skipped = []
    for label, M in (("A", A), ("B", B), ("A o B", AB)):
        lm = _lambda_min(M)
        t = ApproxComplex(1 - float(lm.value.real), 0, lm.radius, 53)
        try:
            C = constant_correlation(n, t)
        except DomainError:
            skipped.append(label)
            continue
        rhs = permanent(C)
        out.append(compare("zfz_result5", lhs, rhs, inputs_of(A, B), diagnostics={"t_from": label, "t": float(t)}))
    for r in out:
        r.diagnostics["skipped"] = skipped
    return out


def hadamard_compression_probe(A, samples, seed=0, rank=None):
    """Sample X in C_n and test per(A o X) <= per A, with the Oppenheim
    control det(A o X) >= max(det A, det X)."""
    if samples < 1:
        raise ValueError("samples must be at least 1")
    if not is_correlation(A):
        raise DomainError("hadamard_compression_probe needs a correlation matrix")
    n = A.n
    if n > 7:
        raise SizeGuardError("hadamard_compression_probe is limited to n <= 7")
    M, merr = A.to_numpy()
    pA = permanent(A)
    pf = _real_float(pA)
    dA = _real_float(det(A))
    worst = None
    violations, control_failures = 0, 0
    worst_control = math.inf
    for i in range(samples):
        X = random_correlation_float(rng_for(seed, i), n, rank)
        P = M * X
        v, bound = per_complex(P)
        bound += merr * n * 2.0**n
        if v.real - bound > pf:
            violations += 1
        if worst is None or v.real > worst[0]:
            worst = (v.real, bound, X)
        slack = _oppenheim_slack(P, X, dA, merr)
        worst_control = min(worst_control, slack)
        if slack < 0:
            control_failures += 1
    val, bound, Xw = worst
    comp = compare("hadamard_compression", ApproxComplex(val, 0, bound, 53), pA, inputs_of(A),
                   witness={"X": Matrix.from_numpy(Xw)} if violations else None,
                   diagnostics={"samples": samples, "violations": violations, "worst_ratio": val / pf if pf else None})
    control = compare("oppenheim", 0, ApproxComplex(worst_control, 0, 0, 53), inputs_of(A),
                      diagnostics={"samples": samples, "failures": control_failures})
    return [comp, control]


def _oppenheim_slack(P, X, dA, merr):
    """Certified lower bound on det(A o X) - max(det A, det X) (negative
    only if the bound itself fails)."""
    from .matrix import float_det_bound

    dP, eP = float_det_bound(P, merr, hermitian=True)
    dX, eX = float_det_bound(X, 0.0, hermitian=True)
    return (dP.real + eP) - max(dA, dX.real - eX)


# ---------------------------------------------------------------------------
# block and tensor inequalities
# ---------------------------------------------------------------------------


def per_in_per(A, m, n):
    """per P <= per A where P = (per A_ij) over m x m blocks of size n."""
    _require_psd(A)
    P = _block_function(A, m, n, permanent)
    return compare("per_in_per", permanent(P), permanent(A), inputs_of(A, m=m, n=n))


def per_in_per_weak(A, m, n):
    """per P / n! <= per A."""
    _require_psd(A)
    P = _block_function(A, m, n, permanent)
    return compare("per_in_per_weak", permanent(P) * Fraction(1, math.factorial(n)), permanent(A),
                   inputs_of(A, m=m, n=n))


def det_in_det(A, m, n):
    """det A <= det D where D = (det A_ij)."""
    _require_psd(A)
    D = _block_function(A, m, n, det)
    return compare("det_in_det", det(A), det(D), inputs_of(A, m=m, n=n))


def _block_function(A, m, n, fn):
    if m * n != A.n:
        raise DimensionError(f"{m} blocks of size {n} do not tile n = {A.n}")
    view = PartitionedView(A, m, n)
    rows = [[fn(view.block(i, j)) for j in range(m)] for i in range(m)]
    return Matrix._trusted(rows, A.field, A.prec)


def tensor_suite(A, B):
    """Per-tensor inequalities for A (n x n) and B (m x m)."""
    n, m = A.n, B.n
    if n * m > TENSOR_MAX_SIZE:
        raise SizeGuardError(f"tensor_suite needs nm <= {TENSOR_MAX_SIZE}")
    _require_psd(A, B)
    K = kronecker(A, B)
    pK = permanent(K)
    pa, pb = permanent(A), permanent(B)
    base = pa**m * pb**n
    inp = inputs_of(A, B)
    nonneg = _nonnegative(A) and _nonnegative(B)
    fn, fm = math.factorial(n), math.factorial(m)
    out = [
        compare("liang_so_zhang", base, pK, inp),
        compare("brualdi", base, pK, inp, diagnostics={"nonnegative_entries": nonneg, "applicable": nonneg}),
        compare("ando", base * max(Fraction(1, fn**m), Fraction(1, fm**n)), pK, inp),
        compare("marcus_tensor", base * Fraction(1, fn**m * fm**n), pK, inp),
    ]
    if n == m:
        out.append(compare("hadamard_kronecker", permanent(hadamard(A, B)) ** n, pK, inp))
    return out


def _nonnegative(A):
    for r in A.rows:
        for x in r:
            q = exact_real_value(x)
            if q is None:
                if isinstance(x, ApproxComplex) and x.is_real_within() and float(x.value.real) >= -x.radius:
                    continue
                return False
            if q < 0:
                return False
    return True


def pate(M, k):
    """(k!)^m (per M)^k <= per(J_k (x) M)."""
    _require_psd(M)
    m = M.n
    if k * m > TENSOR_MAX_SIZE:
        raise SizeGuardError(f"pate needs k m <= {TENSOR_MAX_SIZE}")
    K = kronecker(Matrix.ones(k, "rational"), M)
    return compare("pate", math.factorial(k) ** m * permanent(M) ** k, permanent(K), inputs_of(M, k=k))


def drury_inequalities(A):
    """(a11 per B)^2 + (sum_k |a_1k|^2 per B_kk)^2 <= (per A)^2 and the
    linear form sum_k |a_1k|^2 per B_kk <= per A.

    B deletes row and column 1; B_kk further deletes the row and column of
    A's index k, so B_kk is A with rows/columns 1 and k removed.
    """
    n = A.n
    if n < 3:
        raise DimensionError("drury_inequalities needs n >= 3")
    _require_psd(A)
    p = permanent(A)
    Bm = A.submatrix(range(1, n))
    first = A[0, 0] * permanent(Bm)
    s = None
    for k in range(1, n):
        keep = [i for i in range(1, n) if i != k]
        a = A[0, k]
        t = a * a.conjugate() if hasattr(a, "conjugate") else a * a
        t = t * permanent(A.submatrix(keep))
        s = t if s is None else s + t
    inp = inputs_of(A)
    known = compare("drury_known", first, p, inp)
    main = compare("drury", first * first + s * s, p * p, inp,
                   diagnostics={"a11_perB": first, "sum_term": s, "a11_perB_le_perA": known.verdict})
    linear = compare("drury_linear", s, p, inp)
    return [main, linear]


# ---------------------------------------------------------------------------
# doubly stochastic and unitary problems
# ---------------------------------------------------------------------------


def foregger(A, kmax):
    """per(A^k) <= per A for k = 2..kmax; flags the regime 1/2 < per A < 1."""
    if kmax < 2:
        raise ValueError("kmax must be at least 2")
    if not is_doubly_stochastic(A):
        raise DomainError("foregger needs a doubly stochastic matrix")
    p = permanent(A)
    reports, values = [], []
    Ak = A
    for k in range(2, kmax + 1):
        Ak = Ak @ A
        v = permanent(Ak)
        values.append(v)
        reports.append(compare("foregger", v, p, inputs_of(A, k=k)))
    pf = _real_float(p)
    if is_exact(p):
        chang = Fraction(1, 2) < exact_real_value(p) < 1
    else:
        chang = 0.5 < pf < 1
    first = next((k for k, r in zip(range(2, kmax + 1), reports) if r.holds), None)
    return SeriesResult("foregger", values, p, first, {"chang_regime": chang}, reports)


@dataclass
class UnitaryOptResult:
    value: float
    unitary: np.ndarray
    diagonal: list
    bound: float
    report: ConjectureReport
    evaluations: int

    def to_json(self):
        return {
            "name": "max_per_unitary",
            "value": self.value,
            "bound": self.bound,
            "diagonal": self.diagonal,
            "equal_diagonal": bool(np.ptp(self.diagonal) < 1e-6) if self.diagonal else True,
            "evaluations": self.evaluations,
            "report": self.report.to_json(),
        }


def _cayley(S):
    n = S.shape[0]
    eye = np.eye(n)
    return np.linalg.solve(eye - S / 2, eye + S / 2)


def max_per_unitary(A, budget, seed=0, min_step=1e-8):
    """Best per(U* A U) over seeded random unitaries, refined along
    skew-Hermitian directions, against the bound (1/n) sum lambda_i^n."""
    if budget < 1:
        raise ValueError("budget must be at least 1")
    _require_psd(A)
    n = A.n
    M, err = A.to_numpy()
    w, _, radii = hermitian_eigh(M, err)
    lam = np.clip(w, 0, None)
    bound = float(np.sum(lam**n) / n)
    bound_rad = float(np.sum((lam + radii) ** n - lam**n) / n) + 4 * n * 1.12e-16 * bound
    rng = rng_for(seed, 1)

    def f(U):
        return per_complex(U.conj().T @ M @ U)[0].real

    used = 0
    best_val, best_U = -math.inf, None
    restarts = max(1, budget // 50)
    per_restart = -(-budget // restarts)
    for _ in range(restarts):
        stop = min(budget, used + per_restart)
        U = random_unitary(rng, n)
        val = f(U)
        used += 1
        step, fails = 0.5, 0
        while used < stop and step >= min_step:
            Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            U2 = U @ _cayley(step * (Z - Z.conj().T) / 2)
            v2 = f(U2)
            used += 1
            if v2 > val:
                U, val, fails = U2, v2, 0
            else:
                fails += 1
                if fails >= 2 * n:
                    step, fails = step / 2, 0
        if val > best_val:
            best_val, best_U = val, U
    C = best_U.conj().T @ M @ best_U
    _, eb = per_complex(C)
    rep = compare("max_per_unitary_bound", ApproxComplex(best_val, 0, eb + 1e-12 * abs(best_val), 53),
                  ApproxComplex(bound, 0, bound_rad, 53), inputs_of(A))
    return UnitaryOptResult(float(best_val), best_U, [float(x) for x in np.diagonal(C).real], bound, rep, used)
