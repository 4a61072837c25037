import pytest

import potsym

FP = """
param alpha(t, x) with alpha_t = x*alpha_x - alpha_xx;
system FP { u_t = u_xx + x*u_x + u; }
cv FP1 = (u, -u_x - x*u) on FP;
cv FPFAM = (alpha*u, (alpha_x - x*alpha)*u - alpha*u_x) on FP;
"""


@pytest.fixture
def session():
    return potsym.Session(FP)


def test_family_verifies(session):
    r = session.run("verify-cl", cv="FPFAM")
    assert r["status"] == "verified"
    assert r["residuals"] == ["0"]
    assert r["error"] is None


def test_characteristic(session):
    r = session.run("char", cv="FP1")
    assert r["status"] == "verified"
    assert session.expr("1") in str(r["result"])


def test_canonical_forms(session):
    assert session.expr("(x + u)*(x - u)") == session.expr("x^2 - u^2")
    assert session.expr("exp(t)*exp(-t)") == "1"
    assert session.names()["conserved_vectors"] == ["FP1", "FPFAM"]


def test_errors_are_reported_not_raised(session):
    r = session.run("verify-cl", cv="NOPE")
    assert r["status"] == "error"
    assert r["error"]["kind"] == "UnknownSymbol"
    r = session.run("no-such-operation")
    assert r["status"] == "error"


def test_bad_declarations_raise():
    with pytest.raises(potsym.PotsymError, match="SyntaxError"):
        potsym.Session("system S { u_t = ; }")


def test_operations_listed():
    names = {op["name"] for op in potsym.operations()}
    assert {"reduce", "verify-cl", "verify-sym", "closure", "pushforward"} <= names


def test_catalog():
    cases = dict(potsym.list_cases())
    assert "fp-to-heat-map" in cases
    r = potsym.run_case("heat-basics")
    assert r["passed"], r
    reports = potsym.run_all(jobs=4)
    assert len(reports) == len(cases)
    assert all(r["passed"] for r in reports)
