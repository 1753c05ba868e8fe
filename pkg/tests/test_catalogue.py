import pytest

from core.crossed_module import CrossedModule
from core.errors import ObjectNotFound
from modules.catalogue import Catalogue


def test_every_entry_is_valid_and_round_trips(catalogue):
    results = catalogue.check()
    assert len(results) == len(catalogue.entries())
    failing = [(r.name, r.detail) for r in results if not r.ok]
    assert not failing
    kinds = {r.name: r for r in results}
    assert kinds["circle"].round_trip is None
    assert kinds["c3s3"].round_trip is True


def test_lookup_by_name(catalogue):
    assert catalogue.entry("c2c2").kind == "xmod"
    assert catalogue.entry("c2c2.xmod").name == "c2c2"
    assert catalogue.path("lshape").suffix == ".cells"
    with pytest.raises(ObjectNotFound):
        catalogue.entry("nosuch")


def test_load_is_cached(catalogue):
    assert catalogue.load("c3s3") is catalogue.load("c3s3")
    assert isinstance(catalogue.load("c3s3"), CrossedModule)


def test_kinds_are_indexed(catalogue):
    assert len(catalogue.entries("xmod")) >= 10
    assert {name for name, _ in catalogue.presentations()} >= {"cyclic2", "cyclic6", "quaternion", "free2"}
    assert all(e.kind == "crs" for e in catalogue.entries("crs"))


def test_custom_root_reports_bad_files(tmp_path):
    (tmp_path / "good.pres").write_text("name: C3\ngens: x\nrels: x^3\n", encoding="utf-8")
    (tmp_path / "bad.xmod").write_text("M: C2\nP: C3\nmu: x -> x\n", encoding="utf-8")
    (tmp_path / "notes.txt").write_text("ignorado\n", encoding="utf-8")
    cat = Catalogue(tmp_path, bound=64)
    assert [e.name for e in cat.entries()] == ["bad", "good"]
    results = {r.name: r for r in cat.check()}
    assert results["good"].ok and results["good"].round_trip
    assert not results["bad"].valid
    assert results["bad"].round_trip is None
    assert results["bad"].detail
