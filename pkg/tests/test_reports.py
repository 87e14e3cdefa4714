import json
from fractions import Fraction

import numpy as np

from permlab import GaussianRational as G
from permlab import Matrix
from permlab.numeric import ApproxComplex, cyclo_make
from permlab.reports import HOLDS, INCONCLUSIVE, VIOLATED, compare, inputs_of, margin_and_verdict, simplify, worst


def test_exact_orientation():
    r = compare("x", Fraction(1), Fraction(2))
    assert r.verdict == HOLDS and r.margin == 1 and r.exact
    r = compare("x", 3, 2)
    assert r.violated and r.margin == -1
    assert compare("tie", 2, 2).holds


def test_equality_relation():
    assert compare("eq", 2, 2, relation="==").holds
    r = compare("eq", 2, Fraction(5, 2), relation="==")
    assert r.violated and r.margin == Fraction(-1, 2)


def test_float_verdicts():
    a = ApproxComplex(1.0, 0, 1e-3, 53)
    assert compare("f", a, 2).holds
    assert compare("f", a, Fraction(1, 2)).violated
    assert compare("f", a, Fraction(10001, 10000)).verdict == INCONCLUSIVE


def test_simplify_and_ratio():
    c = cyclo_make(40, 0) * 45
    assert simplify(c) == 45 and isinstance(simplify(c), Fraction)
    assert simplify(G(3)) == 3
    r = compare("r", G(Fraction(1237, 128)), 9)
    assert r.ratio() == Fraction(1237, 1152)


def test_irrational_exact_margin_keeps_field():
    c = cyclo_make(40, 4) + cyclo_make(40, -4)
    m, v = margin_and_verdict(c, 2)
    assert v == HOLDS
    m, v = margin_and_verdict(2, c)
    assert v == VIOLATED


def test_json_is_strings_for_exact_values():
    A = Matrix([[1, 0], [0, 1]], "rational")
    r = compare("j", Fraction(1, 3), Fraction(1, 2), inputs_of(A, split=1),
                witness={"v": np.arange(100.0)}, diagnostics={"q": Fraction(2, 3), "z": 1j})
    js = r.to_json()
    text = json.dumps(js)
    assert js["lhs"] == {"value": "1/3", "exact": True, "radius": 0.0}
    assert js["ratio"] == "2/3"
    assert js["witness"]["v"]["shape"] == [100]
    assert js["inputs"]["matrices"][0]["digest"] == A.digest()
    assert json.loads(text)["diagnostics"]["q"]["value"] == "2/3"
    assert len(r.to_json(include_witness=True)["witness"]["v"]) == 100


def test_worst():
    reps = [compare("a", 1, 3), compare("b", 1, 2), compare("c", 5, 9)]
    assert worst(reps).name == "b"
