"""Built-in counterexample instances and the checks that pin their values.

Two matrices ship with the library:

* ``shchesnovich``: a 5 x 5 rank-2 Gaussian-rational PSD matrix H = u*u + v*v
  whose Schur power has top eigenvalue above per H.
* ``drury``: a 7 x 7 rank-2 correlation matrix over Q(zeta_40) for which
  per(A o conj A) exceeds per A.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath

from .conjectures import bapat_sunder, chollet, pot_check
from .errors import PermlabError, VerificationError
from .matrix import Matrix, eigenvalues_hermitian, gram_from_rows, hadamard, is_correlation, rank
from .numeric import GaussianRational, cyclo_make, exact_real_value, format_scalar
from .permanent import per_ryser
from .reports import _jsonable
from .schur import SchurPower, row_sums, spectral_summary

G = GaussianRational


@dataclass(frozen=True)
class Expectation:
    quantity: str
    value: object
    tolerance: float = 0.0
    relative: bool = False


@dataclass
class NamedInstance:
    name: str
    matrix: Matrix
    provenance: str
    expected: list = field(default_factory=list)
    partner: Matrix | None = None


# ---------------------------------------------------------------------------
# H = u*u + v*v
# ---------------------------------------------------------------------------

_U = [G(4, 2), G(2, -3), G(-4, -4), G(-3, 4), G(1, 0)]
_V = [G(2, -4), G(0, -3), G(2, -4), G(0, -3), G(-5, -7)]

_H_DISPLAY = [
    [G(40), G(14, -22), G(-4, -8), G(8, 16), G(22, -36)],
    [G(14, 22), G(22), G(16, -14), G(-9, -1), G(23, -12)],
    [G(-4, 8), G(16, 14), G(52), G(8, -34), G(14, -30)],
    [G(8, -16), G(-9, 1), G(8, 34), G(34), G(18, -19)],
    [G(22, 36), G(23, 12), G(14, 30), G(18, 19), G(75)],
]


def shchesnovich_lambda_max(dps=40):
    """320 (2185775 + sqrt(160600333345)) to `dps` digits."""
    with mpmath.workdps(dps):
        return 320 * (2185775 + mpmath.sqrt(160600333345))


@lru_cache(maxsize=None)
def builtin_shchesnovich():
    H = gram_from_rows([_U, _V])
    display = Matrix(_H_DISPLAY, "gaussian")
    if H != display:
        raise VerificationError("H construction", "displayed matrix", "u*u + v*v differs")
    expected = [
        Expectation("per", 814016640),
        Expectation("eigenvalues", [0, 0, 0, 91, 132], 1e-8),
        Expectation("rank", 2),
        Expectation("schur_size", 120),
        Expectation("schur_row_sums", 814016640),
        Expectation("schur_rank", 27),
        Expectation("schur_lambda_max", shchesnovich_lambda_max(), 1e-6, relative=True),
        Expectation("pot_violated", True),
    ]
    return NamedInstance("shchesnovich", H, "rank-2 Gram matrix of u and v; POT counterexample", expected)


# ---------------------------------------------------------------------------
# Drury's 7 x 7 correlation matrix
# ---------------------------------------------------------------------------

# token kinds: r = 1/sqrt(2), c1 = cos(pi/5), c2 = cos(2 pi/5); the number is
# k in the phase e^(k i pi / 5)
_DRURY_TABLE = """
1     0     r0    r0    r0    r0    r0
0     1     r4    r2    r0    r-2   r-4
r0    r-4   1     c1-1  c2-2  c22   c11
r0    r-2   c11   1     c1-1  c2-2  c22
r0    r0    c22   c11   1     c1-1  c2-2
r0    r2    c2-2  c22   c11   1     c1-1
r0    r4    c1-1  c2-2  c22   c11   1
"""

CONDUCTOR = 40


def _zeta(k):
    return cyclo_make(CONDUCTOR, k)


def _drury_entry(tok):
    half = Fraction(1, 2)
    if tok == "1":
        return _zeta(0)
    if tok == "0":
        return _zeta(0) * 0
    if tok.startswith("r"):
        base, k = (_zeta(5) + _zeta(-5)) * half, int(tok[1:])
    else:
        j = int(tok[1])
        base, k = (_zeta(4 * j) + _zeta(-4 * j)) * half, int(tok[2:])
    # e^(k i pi / 5) = zeta_40^(4k)
    return base * _zeta(4 * k)


@lru_cache(maxsize=None)
def builtin_drury():
    rows = [[_drury_entry(t) for t in line.split()] for line in _DRURY_TABLE.strip().splitlines()]
    A = Matrix(rows, f"cycN:{CONDUCTOR}")
    B = A.conjugate()
    if B != A.transpose():
        raise VerificationError("B = A^t = conj A", "equal", "differ")
    expected = [
        Expectation("per", 45),
        Expectation("per_hadamard_conj", Fraction(6185, 128)),
        Expectation("bapat_sunder_ratio", Fraction(1237, 1152)),
        Expectation("rank", 2),
        Expectation("lambda_max", Fraction(7, 2), 1e-9),
        Expectation("schur_row_sums", 45),
        Expectation("schur_lambda_max", Fraction(525, 8), 1e-6, relative=True),
        Expectation("chollet_holds", True),
        Expectation("correlation", True),
    ]
    return NamedInstance("drury", A, "rank-2 complex correlation matrix; Bapat-Sunder counterexample", expected, B)


BUILTINS = {"shchesnovich": builtin_shchesnovich, "drury": builtin_drury}


def builtin_instance(name):
    try:
        return BUILTINS[name.strip().lower()]()
    except KeyError:
        raise PermlabError(f"unknown builtin {name!r}; choose from {sorted(BUILTINS)}") from None


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


@dataclass
class CheckOutcome:
    instance: str
    quantity: str
    expected: object
    observed: object
    ok: bool
    seconds: float

    def to_json(self):
        return {
            "instance": self.instance,
            "quantity": self.quantity,
            "expected": _fmt(self.expected),
            "observed": _fmt(self.observed),
            "ok": self.ok,
            "seconds": round(self.seconds, 4),
        }


def _fmt(x):
    if isinstance(x, (list, tuple)):
        return [_fmt(v) for v in x]
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, mpmath.mpf):
        return mpmath.nstr(x, 20)
    if isinstance(x, float):
        return x
    try:
        return format_scalar(x)
    except TypeError:
        return _jsonable(x)


def _mp(x):
    if isinstance(x, mpmath.mpf):
        return x
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(float(x))


def _close(observed, exp):
    if exp.tolerance == 0:
        return observed == exp.value
    if isinstance(exp.value, list):
        return len(observed) == len(exp.value) and all(
            abs(float(o) - float(e)) <= exp.tolerance for o, e in zip(observed, exp.value))
    o, e = _mp(observed), _mp(exp.value)
    tol = exp.tolerance * (abs(e) if exp.relative else 1)
    return abs(o - e) <= tol


def _observe(inst, quantity, cache):
    A = inst.matrix
    if quantity == "per":
        return per_ryser(A).value
    if quantity == "eigenvalues":
        return [float(e) for e in eigenvalues_hermitian(A)]
    if quantity == "rank":
        return rank(A)
    if quantity == "lambda_max":
        return float(eigenvalues_hermitian(A)[-1])
    if quantity == "per_hadamard_conj":
        return exact_real_value(per_ryser(hadamard(A, A.conjugate())).value)
    if quantity == "bapat_sunder_ratio":
        return bapat_sunder(A, inst.partner).ratio()
    if quantity == "chollet_holds":
        return chollet(A, inst.partner).holds
    if quantity == "correlation":
        return is_correlation(A)
    S = cache.get("schur")
    if S is None:
        S = cache["schur"] = SchurPower(A)
    if quantity == "schur_size":
        return S.size
    if quantity == "schur_row_sums":
        sums = row_sums(S)
        vals = {format_scalar(s) for s in sums}
        return exact_real_value(sums[0]) if len(vals) == 1 and len(sums) == S.size else sorted(vals)
    summary = cache.get("summary")
    if summary is None:
        summary = cache["summary"] = spectral_summary(S)
    if quantity == "schur_rank":
        return summary.rank
    if quantity == "schur_lambda_max":
        return summary.lambda_max.value.real
    if quantity == "pot_violated":
        return summary.pot_margin.certainly_negative()
    raise KeyError(quantity)


def verify_instance(inst, raise_on_mismatch=True):
    cache = {}
    out = []
    for exp in inst.expected:
        t0 = time.perf_counter()
        obs = _observe(inst, exp.quantity, cache)
        ok = bool(_close(obs, exp))
        out.append(CheckOutcome(inst.name, exp.quantity, exp.value, obs, ok, time.perf_counter() - t0))
        if not ok and raise_on_mismatch:
            raise VerificationError(f"{inst.name}.{exp.quantity}", _fmt(exp.value), _fmt(obs))
    return out, cache


@dataclass
class PaperReport:
    checks: list
    reports: list
    seconds: float

    @property
    def ok(self):
        return all(c.ok for c in self.checks)

    def to_json(self):
        return {
            "ok": self.ok,
            "checks": [c.to_json() for c in self.checks],
            "reports": [r.to_json() for r in self.reports],
            "seconds": round(self.seconds, 3),
        }


def verify_paper(raise_on_mismatch=True):
    """Re-derive every stored value of both instances, then run the POT,
    Bapat-Sunder and Chollet checkers on them."""
    t0 = time.perf_counter()
    checks, reports = [], []
    H = builtin_shchesnovich()
    c, _ = verify_instance(H, raise_on_mismatch)
    checks += c
    D = builtin_drury()
    c, _ = verify_instance(D, raise_on_mismatch)
    checks += c
    expected_verdicts = [
        (pot_check(H.matrix), "violated"),
        (pot_check(D.matrix), "violated"),
        (bapat_sunder(D.matrix, D.partner), "violated"),
        (chollet(D.matrix, D.partner), "holds"),
    ]
    for rep, want in expected_verdicts:
        reports.append(rep)
        t = time.perf_counter()
        ok = rep.verdict == want
        checks.append(CheckOutcome(rep.inputs["matrices"][0]["digest"][:12], f"{rep.name} verdict", want, rep.verdict,
                                   ok, time.perf_counter() - t))
        if not ok and raise_on_mismatch:
            raise VerificationError(f"{rep.name} verdict", want, rep.verdict)
    return PaperReport(checks, reports, time.perf_counter() - t0)

