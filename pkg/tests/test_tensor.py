import dataclasses

import pytest

from core.algebra import FreeWord, GroupPresentation
from core.crossed_complex import interval, make_example, point, validate_complex
from core.errors import ObjectNotFound, PreconditionFailed
from core.groupoids import EdgePath
from core.tensor import (
    HomotopyData,
    check_homotopy,
    cylinder,
    embed_second_factor,
    pair_name,
    symmetry,
    tensor_boundary,
    tensor_complex,
    theta,
)


@pytest.fixture
def square():
    return tensor_complex(interval(), interval(), 4)


def test_pair_names():
    assert pair_name("x", "iota") == "x__iota"


def test_square_of_intervals(square, bound):
    assert len(square.objects) == 4
    assert len(square.c1.edges) == 4
    assert square.basis(2) == ["iota__iota"]
    assert square.top_degree == 2
    assert square.factors("iota__iota") == ("iota", "iota")
    assert square.factors("i0__i1") == ("i0", "i1")
    assert square.boundary("iota__iota").is_loop
    assert validate_complex(square, bound).ok


def test_theta_on_objects_and_edges(square):
    assert theta(square, "i0", "i1") == "i0__i1"
    assert theta(square, "i0", EdgePath.of(interval().c1.graph.edge("iota"))) == \
        EdgePath("i0__i0", "i0__i1", (("i0__iota", 1),))


def test_boundary_needs_degree_two():
    I = interval()
    with pytest.raises(PreconditionFailed):
        tensor_boundary(I, I, "i0", "iota")


def test_presentation_complex_times_interval(catalogue, bound):
    T = tensor_complex(catalogue.load("c3_complex"), catalogue.load("interval"), 4)
    assert T.basis(1) == ["x__i0", "x__i1", "o__iota"]
    assert T.basis(2) == ["x__iota", "r__i0", "r__i1"]
    assert T.basis(3) == ["r__iota"]
    assert T.degree_of("r__iota") == 3
    report = validate_complex(T, bound)
    assert report.checks["delta_delta"]
    assert report.checks["crossed_module"]


def test_symmetry_is_a_morphism(catalogue, bound):
    A, B = catalogue.load("c3_complex"), catalogue.load("interval")
    T, S = tensor_complex(A, B, 4), tensor_complex(B, A, 4)
    swap = symmetry(T, S)
    assert swap.object_map["o__i1"] == "i1__o"
    assert swap.check(bound).ok
    with pytest.raises(PreconditionFailed):
        symmetry(T, T)


def test_embedding_of_second_factor(catalogue, bound):
    T = tensor_complex(catalogue.load("c3_complex"), catalogue.load("interval"), 4)
    e = embed_second_factor("o", T)
    assert e.object_map == {"i0": "o__i0", "i1": "o__i1"}
    assert e.check(bound).ok
    with pytest.raises(ObjectNotFound):
        embed_second_factor("nowhere", T)


def test_tensor_of_presented_complex_uses_free_cover(bound):
    x = FreeWord.generator(0)
    C = make_example("CGn", bound, group=GroupPresentation(("x",), (x ** 6,), name="C6"), n=3)
    T = tensor_complex(C, interval(), 4)
    assert T.notes
    assert T.is_free
    assert T.basis(4) == ["x__iota"]


def test_cylinder_of_point_is_interval():
    cyl = cylinder(point())
    assert cyl.name == "Cyl(point)"
    assert len(cyl.objects) == 2
    assert len(cyl.c1.edges) == 1
    assert cyl.top_degree == 1


def test_contraction_of_interval_is_a_homotopy(catalogue, bound):
    h = catalogue.load("contract_interval")
    assert isinstance(h, HomotopyData)
    report = check_homotopy(h, bound)
    assert report.ok, report.witnesses


def test_broken_homotopies_are_rejected(catalogue, bound):
    h = catalogue.load("contract_interval")
    missing = check_homotopy(dataclasses.replace(h, H0={}), bound)
    assert not missing.ok
    assert missing.witnesses == ["H0 sin valor en i0"]
    constant = {"i0": EdgePath.identity("i0"), "i1": EdgePath.identity("i1")}
    wrong = check_homotopy(dataclasses.replace(h, H0=constant), bound)
    assert not wrong.ok
    assert any(w.startswith("degree_1") for w in wrong.witnesses)
