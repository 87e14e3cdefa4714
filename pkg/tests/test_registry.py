from fractions import Fraction

import mpmath
import pytest

from permlab import GaussianRational as G
from permlab.errors import PermlabError, VerificationError
from permlab.registry import (
    Expectation,
    NamedInstance,
    builtin_drury,
    builtin_instance,
    builtin_shchesnovich,
    shchesnovich_lambda_max,
    verify_instance,
    verify_paper,
)


def test_shchesnovich_entries():
    H = builtin_shchesnovich().matrix
    assert H[0, 1] == G(14, -22)
    assert H[4, 4] == 75
    assert H.is_hermitian()


def test_lambda_max_closed_form():
    v = shchesnovich_lambda_max(30)
    assert mpmath.almosteq(v, 827687908.50951, rel_eps=1e-12)


def test_drury_structure():
    D = builtin_drury()
    A = D.matrix
    assert A.n == 7 and A.field == "cycN:40"
    assert D.partner == A.transpose() == A.conjugate()
    assert all(A[i, i] == 1 for i in range(7))
    assert A[0, 1] == 0


def test_instances_verify():
    for name in ("shchesnovich", "drury"):
        inst = builtin_instance(name)
        checks, _ = verify_instance(inst)
        assert all(c.ok for c in checks)


def test_mismatch_raises():
    inst = builtin_shchesnovich()
    bad = NamedInstance("bad", inst.matrix, "", [Expectation("per", 814016641)])
    with pytest.raises(VerificationError) as exc:
        verify_instance(bad)
    assert exc.value.quantity == "bad.per"
    checks, _ = verify_instance(bad, raise_on_mismatch=False)
    assert not checks[0].ok


def test_tolerance_comparison():
    inst = builtin_drury()
    ok = NamedInstance("d", inst.matrix, "", [Expectation("lambda_max", Fraction(7, 2), 1e-9)])
    assert verify_instance(ok)[0][0].ok


def test_unknown_builtin():
    with pytest.raises(PermlabError):
        builtin_instance("nope")


@pytest.fixture(scope="module")
def paper_report():
    return verify_paper()


def test_verify_paper(paper_report):
    assert paper_report.ok
    verdicts = {c.quantity: c.observed for c in paper_report.checks if c.quantity.endswith("verdict")}
    assert verdicts == {"pot verdict": "violated", "bapat_sunder verdict": "violated", "chollet verdict": "holds"}
    js = paper_report.to_json()
    assert js["ok"] and len(js["checks"]) == len(paper_report.checks)
