import json

import pandas as pd
import pytest

from core.config_manager import XkitSettings
from core.double_groupoid import LawReport, LawResult
from core.errors import PreconditionFailed, UnknownSuite
from modules.acceptance import REPORT_COLUMNS, SUITES, AcceptanceRunner


@pytest.fixture
def runner(catalogue, bound):
    return AcceptanceRunner(catalogue, XkitSettings(bound=bound))


def test_unknown_suite(runner):
    with pytest.raises(UnknownSuite):
        runner.run("nosuch")


def test_pushout_suite(runner):
    frame = runner.run("pushout")
    assert list(frame.columns) == REPORT_COLUMNS
    assert list(frame["criterion"]) == ["circle_free_rank_1", "triangle_simply_connected"]
    assert frame["passed"].all()


def test_collapse_suite(runner):
    frame = runner.run("collapse")
    assert frame["passed"].all(), frame[~frame["passed"]].to_dict("records")
    cases = dict(zip(frame["criterion"], frame["cases"]))
    assert cases["to_vertex_n3"] == 13
    assert cases["product_collapse"] == 5


def test_fox_suite(runner):
    frame = runner.run("fox")
    assert frame["passed"].all(), frame[~frame["passed"]].to_dict("records")
    assert {f"identities_rank_c{n}" for n in range(2, 6)} <= set(frame["criterion"])


def test_suite_names_are_methods(runner):
    for name in SUITES:
        assert callable(getattr(runner, f"suite_{name}"))


def test_export_formats(tmp_path):
    frame = pd.DataFrame([["pushout", "circle", True, 1, 0.01, ""]], columns=REPORT_COLUMNS)
    csv = AcceptanceRunner.export(frame, tmp_path / "out" / "report.csv")
    assert pd.read_csv(csv)["criterion"].tolist() == ["circle"]
    records = json.loads(AcceptanceRunner.export(frame, tmp_path / "report.json").read_text(encoding="utf-8"))
    assert records[0]["passed"] is True
    with pytest.raises(PreconditionFailed):
        AcceptanceRunner.export(frame, tmp_path / "report.txt")


def test_dg_suite_fails_sampled_laws(runner, monkeypatch):
    def fake_suite(dg, *args):
        return LawReport("x", [LawResult("interchange", True, 300, False),
                               LawResult("quintuple", True, 648, True)])

    monkeypatch.setattr("modules.acceptance.law_suite", fake_suite)
    frame = runner.run("dg")
    rows = dict(zip(frame["criterion"], frame["passed"]))
    assert not rows["a3s3:interchange"]
    assert rows["a3s3:quintuple"]
    assert rows["a3s3:time"]
    detail = frame.loc[frame["criterion"] == "c2c2:interchange", "detail"].item()
    assert detail.startswith("muestreo")
