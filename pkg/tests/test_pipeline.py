import pytest

from strictfhs.errors import UnknownFamily, ValidationFailed
from strictfhs.fhs import fhs_to_bncdp
from strictfhs.packing import compute_di, verify_nested, verify_partition_type
from strictfhs.pipeline import (
    FamilyRequest,
    assemble,
    emit_parameter_table,
    predicted_parameters,
    validate,
)

from oracles import di_brute


def test_validate_ok():
    assert validate(FamilyRequest("d3", dict(q=3, m=3, d=2, w=5))) == []


def test_validate_lpf():
    v = validate(FamilyRequest("d3", dict(q=3, m=3, d=2, w=9)))
    assert len(v) == 1 and "least prime factor 3" in v[0]


def test_validate_uv3_violations():
    v = validate(FamilyRequest("uv3", dict(v=5, e=2, q=7)))
    assert any("e^3 f^2 = 32" in s for s in v)
    assert any("2e+5 = 9" in s for s in v)


def test_validate_unknown_and_missing():
    with pytest.raises(UnknownFamily):
        validate(FamilyRequest("zz", {}))
    assert validate(FamilyRequest("uv2", dict(p=2)))[0].startswith("missing")


@pytest.mark.parametrize("family,params", [
    ("d4", dict(q=3, m=4, d=2, qprime=8)),
    ("uv4", dict(p=2, m=2, q=5)),
    ("euv", dict(v=7, p=3, m=1)),
    ("uv5", dict(v=7, e=3, w=5)),
    ("p4", dict(p=2, u=[2, 2])),
    ("p5", dict(p=3, m=1, u=[2, 9, 9])),
])
def test_validate_rejects(family, params):
    assert validate(FamilyRequest(family, params))


@pytest.mark.parametrize("family,params,expected", [
    ("d3", dict(q=3, m=3, d=2, w=5), (65, 2, 1, 45)),
    ("uv2", dict(p=2, m=2, w=5), (30, 2, 2, 20)),
    ("euv", dict(v=7, p=3, m=2), (168, 2, 3, 63)),
    ("uv5", dict(v=5, e=2, w=5), (50, 2, 2, 30)),
    ("d4", dict(q=4, m=4, d=3, qprime=7), (510, 3, 1, 448)),
    ("uv4", dict(p=2, m=3, q=8), (98, 4, 2, 64)),
    ("uv3", dict(v=35, e=2, q=16), (1050, 2, 2, 576)),
])
def test_assemble_strict(family, params, expected):
    S, R, trace = assemble(FamilyRequest(family, params))
    assert S.params == expected == predicted_parameters(family, params)
    assert R.strictly_optimal and R.direct_verdict is True and R.char_verdict
    assert R.lambda_formula == S.lam
    assert any(line.startswith("stage=") for line in trace)
    assert trace[-1].startswith("verdict strict=yes")


def test_assemble_strict_refuses_violations():
    with pytest.raises(ValidationFailed) as exc:
        assemble(FamilyRequest("uv3", dict(v=5, e=2, q=7)))
    assert len(exc.value.violations) == 3


def test_assemble_names_failing_stage():
    with pytest.raises(Exception) as exc:
        assemble(FamilyRequest("uv3", dict(v=5, e=2, q=7), strict=False))
    assert "stage expand_by_log_cdp" in str(exc.value)


@pytest.mark.parametrize("us", [[2, 2], [2, 2, 2]])
def test_p4_permissive_structure(us):
    S, R, trace = assemble(FamilyRequest("p4", dict(p=2, u=us), strict=False))
    n, M, lam, l = predicted_parameters("p4", dict(p=2, u=us))
    assert S.params == (n, M, lam, l)
    F = fhs_to_bncdp(S).with_(lam=lam)
    assert verify_partition_type(F, allow_empty=True)
    assert verify_nested(F).ok
    y = n // 2
    assert all(d >= i * y for i, d in enumerate(compute_di(F), 1))
    if not R.strictly_optimal:
        assert R.first_gap() is not None
    assert any("permissive" in line for line in trace)


def test_p5_permissive_truncates():
    S, R, trace = assemble(FamilyRequest("p5", dict(p=2, m=1, u=[2, 2]), strict=False))
    assert (S.n, S.M, S.l) == (54, 1, 83)
    assert any("keeping 1 of 2" in line for line in trace)
    assert R.index_ok and R.di_ok


def test_catalog_examples():
    d3 = emit_parameter_table("d3", 100)
    assert (dict(q=3, m=3, d=2, w=5), (65, 2, 1, 45)) in d3
    uv2 = emit_parameter_table("uv2", 50)
    assert (dict(p=2, m=2, w=5), (30, 2, 2, 20)) in uv2
    assert emit_parameter_table("p4", 10) == []
    for P, pred in d3 + uv2:
        assert pred[0] <= 100


@pytest.mark.parametrize("family,cap", [("d3", 80), ("uv2", 60), ("uv5", 60), ("euv", 120), ("uv4", 100)])
def test_catalog_instances_are_strictly_optimal(family, cap):
    for P, pred in emit_parameter_table(family, cap):
        S, R, _ = assemble(FamilyRequest(family, P))
        assert S.params == pred
        assert R.strictly_optimal, (family, P, R.first_gap())


def test_di_pipeline_matches_oracle():
    S, R, _ = assemble(FamilyRequest("uv2", dict(p=2, m=2, w=5)))
    assert R.di == di_brute([list(s) for s in S.sequences], S.lam)


def test_catalog_unknown():
    with pytest.raises(UnknownFamily):
        emit_parameter_table("nope", 10)
