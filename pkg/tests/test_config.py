import json

import pytest
from pydantic import ValidationError

from relhom.core.config import FieldConfig, ResolutionConfig, Settings, settings
from relhom.core.logger import get_logger
from relhom.models.schemas import AlgebraSchema, CheckReport, RunReport


def test_defaults():
    assert settings.field.p == 2
    assert settings.resolution.strategy == "classical_first"
    assert settings.gorenstein.window_extra == 4


def test_field_from_environment(monkeypatch):
    monkeypatch.setenv("RELHOM_FIELD_P", "5")
    assert FieldConfig().p == 5


def test_field_must_be_a_small_prime():
    with pytest.raises(ValidationError):
        FieldConfig(p=4)
    with pytest.raises(ValidationError):
        FieldConfig(p=101)


def test_unknown_strategy_is_rejected():
    with pytest.raises(ValidationError):
        ResolutionConfig(strategy="greedy")


def test_ext_bound():
    assert Settings().ext_bound_for(3, 2) == 8
    assert Settings(ext_bound=5).ext_bound_for(3, 2) == 5


def test_soft_checks_do_not_decide_the_verdict():
    report = CheckReport()
    assert report.add("dur", "vrai", True)
    assert not report.add("souple", "faux", False, hard=False)
    assert report.passed
    report.add("dur", "faux", False, detail=1)
    assert not report.passed
    assert [c.details for c in report.failures()] == [{"detail": 1}]


def test_extend_prefixes_names():
    inner = CheckReport()
    inner.add("a", "vrai", True)
    outer = CheckReport()
    outer.extend(inner, prefix="x.")
    assert outer.checks[0].name == "x.a"
    assert inner.checks[0].name == "a"


def test_run_report_verdict():
    run = RunReport(command=["demo"], seed=0, field=2)
    ok, failing = CheckReport(), CheckReport()
    ok.add("a", "vrai", True)
    failing.add("b", "faux", False)
    run.attach(ok)
    assert run.verdict
    run.attach(failing)
    assert not run.verdict
    assert run.reports[1]["passed"] is False
    assert json.loads(run.model_dump_json(by_alias=True))["schema"] == 1


def test_algebra_schema_accepts_aliases():
    schema = AlgebraSchema.model_validate({
        "schema": 1,
        "quiver": {"vertex-count": 1},
        "nilpotency-bound": 2,
    })
    assert schema.quiver.vertex_count == 1
    assert schema.field is None


def test_logger_writes_to_stderr(capsys):
    logger = get_logger("relhom.test")
    logger.warning("Message de test", check="config")
    captured = capsys.readouterr()
    assert captured.out == ""
