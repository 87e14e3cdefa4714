"""Uniform result record for inequality checks.

Every checker compares two quantities, `lhs` and `rhs`, with the
orientation chosen so that ``margin = rhs - lhs >= 0`` means the claim
holds.  Equality claims (relation ``"=="``) use ``margin = -|rhs - lhs|``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .numeric import ApproxComplex, embed, exact_real_value, format_scalar, is_exact, real_sign, scalar_to_json

HOLDS = "holds"
VIOLATED = "violated"
INCONCLUSIVE = "inconclusive-within-error"


@dataclass
class ConjectureReport:
    name: str
    inputs: dict
    lhs: object
    rhs: object
    margin: object
    verdict: str
    relation: str = "<="
    witness: dict | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def exact(self):
        return is_exact(self.margin)

    @property
    def holds(self):
        return self.verdict == HOLDS

    @property
    def violated(self):
        return self.verdict == VIOLATED

    @property
    def radius(self):
        return self.margin.radius if isinstance(self.margin, ApproxComplex) else 0.0

    def ratio(self):
        """lhs / rhs for positive real sides, exact when both are exact."""
        lq, rq = exact_real_value(self.lhs), exact_real_value(self.rhs)
        if lq is not None and rq is not None:
            return lq / rq if rq != 0 else None
        r = _as_float(self.rhs)
        return _as_float(self.lhs) / r if r else None

    def to_json(self, include_witness=False):
        out = {
            "name": self.name,
            "relation": self.relation,
            "inputs": self.inputs,
            "lhs": scalar_to_json(self.lhs),
            "rhs": scalar_to_json(self.rhs),
            "margin": scalar_to_json(self.margin),
            "verdict": self.verdict,
            "exact": self.exact,
            "diagnostics": _jsonable(self.diagnostics),
        }
        r = self.ratio()
        if r is not None:
            out["ratio"] = format_scalar(r) if isinstance(r, Fraction) else float(r)
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness if include_witness else _witness_summary(self.witness))
        return out


def _as_float(x):
    if isinstance(x, ApproxComplex):
        return float(x.value.real)
    q = exact_real_value(x)
    if q is not None:
        return float(q)
    return float(embed(x, 64).value.real)


def _witness_summary(w):
    out = {}
    for k, v in w.items():
        if isinstance(v, np.ndarray) and v.size > 64:
            out[k] = {"shape": list(v.shape), "norm": float(np.linalg.norm(v))}
        else:
            out[k] = v
    return out


def _jsonable(x):
    from .matrix import Matrix

    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        if np.iscomplexobj(x):
            return [[float(z.real), float(z.imag)] for z in x.ravel()]
        return x.tolist()
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, Matrix):
        return {"n": x.n, "field": x.field, "rows": [[format_scalar(v) for v in r] for r in x.rows]}
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    if isinstance(x, complex):
        return [x.real, x.imag]
    try:
        return scalar_to_json(simplify(x))
    except TypeError:
        return str(x)


def inputs_of(*matrices, **extra):
    out = {"matrices": [{"n": A.n, "field": A.field, "digest": A.digest()} for A in matrices]}
    out.update(extra)
    return out


def _approx_real(x, prec):
    if isinstance(x, ApproxComplex):
        return x if x.prec == prec else embed(x, prec)
    return embed(x, prec)


def margin_and_verdict(lhs, rhs, relation="<="):
    """Margin (rhs - lhs, or -|rhs - lhs| for equalities) and its verdict."""
    if is_exact(lhs) and is_exact(rhs):
        d = rhs - lhs
        if relation == "==":
            return (Fraction(0) if d == 0 else None), (HOLDS if d == 0 else VIOLATED)
        s = real_sign(d)
        return d, (HOLDS if s >= 0 else VIOLATED)
    prec = max(getattr(lhs, "prec", 53), getattr(rhs, "prec", 53))
    d = _approx_real(rhs, prec) - _approx_real(lhs, prec)
    if relation == "==":
        mag = float(abs(d.value))
        m = ApproxComplex(-mag, 0, d.radius, prec)
        return m, (HOLDS if mag <= d.radius else VIOLATED)
    m = d.real_part()
    if m.certainly_positive():
        v = HOLDS
    elif m.certainly_negative():
        v = VIOLATED
    else:
        v = INCONCLUSIVE
    return m, v


def simplify(x):
    """Rational values held in a larger exact field become Fractions."""
    if is_exact(x) and not isinstance(x, (int, Fraction)):
        q = exact_real_value(x)
        if q is not None:
            return q
    return x


def compare(name, lhs, rhs, inputs=None, relation="<=", witness=None, diagnostics=None):
    lhs, rhs = simplify(lhs), simplify(rhs)
    margin, verdict = margin_and_verdict(lhs, rhs, relation)
    if margin is None:
        # exact equality failed: report the signed gap size
        d = rhs - lhs
        margin = -_exact_abs(d)
    return ConjectureReport(name, inputs if inputs is not None else {}, lhs, rhs, margin, verdict, relation, witness,
                            diagnostics if diagnostics is not None else {})


def _exact_abs(d):
    q = exact_real_value(d)
    if q is not None:
        return abs(q)
    # modulus of a non-rational exact value, as a certified float
    return embed(d, 128).modulus()


def worst(reports):
    """The report with the smallest margin (as a float)."""
    return min(reports, key=lambda r: _as_float(r.margin))
