import io

import pytest

from main import EXIT_INPUT, EXIT_OK, build_parser, run


@pytest.fixture(autouse=True)
def _isolated_cwd(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)


def cli(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def test_group_enum_machine_output():
    code, text = cli("--machine", "group", "enum", "cyclic3")
    assert code == EXIT_OK
    assert "order=3" in text
    assert "abelian=True" in text


def test_dg_laws_on_catalogue_module():
    code, text = cli("--machine", "dg", "laws", "c2c2")
    assert code == EXIT_OK
    assert "check=interchange" in text
    assert "passed=False" not in text


def test_xmod_validate():
    assert cli("--machine", "xmod", "validate", "c3s3")[0] == EXIT_OK


def test_cube_collapse_writes_certificate(tmp_path):
    out = tmp_path / "i2.cert"
    code, _ = cli("cube", "collapse", "--n", "2", "--to-vertex", "00", "--out", str(out))
    assert code == EXIT_OK
    assert len(out.read_text(encoding="utf-8").splitlines()) == 4
    code, _ = cli("cube", "replay", str(out), "--n", "2")
    assert code == EXIT_OK


def test_input_errors_exit_with_two():
    assert cli("acceptance", "nosuch")[0] == EXIT_INPUT
    assert cli("group", "enum", "nosuch")[0] == EXIT_INPUT
    assert cli("frobnicate")[0] == EXIT_INPUT
    assert cli("--bound", "0", "group", "enum", "cyclic3")[0] == EXIT_INPUT


def test_machine_errors_are_records():
    code, text = cli("--machine", "group", "enum", "nosuch")
    assert code == EXIT_INPUT
    assert text.startswith("error=ObjectNotFound")
    assert "exit=2" in text


def test_consequences_of_catalogue_module():
    code, text = cli("--machine", "xmod", "consequences", "zero_c2c3")
    assert code == EXIT_OK
    assert "passed=True" in text


def test_parser_has_every_family():
    ap = build_parser()
    for argv in (["group", "snf", "x"], ["crs", "pi1", "x"], ["catalogue", "check"], ["acceptance"]):
        assert ap.parse_args(argv).handler.startswith("cmd_")
