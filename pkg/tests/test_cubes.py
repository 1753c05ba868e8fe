import pytest

from core.cubes import (
    CubeCell,
    CubeComplex,
    PartialBox,
    all_partial_boxes,
    box_chain,
    cells_of_cube,
    chain_collapses,
    closure,
    collapse_cell_onto,
    collapse_to_vertex,
    compose_check,
    elementary_collapse,
    faces,
    format_certificate,
    opposite,
    parse_cells,
    parse_certificate,
    product_collapse,
    replay,
    subdivide,
    verify_chain,
)
from core.errors import (
    IncidenceMismatch,
    NotContained,
    NotFace,
    NotFree,
    NotPartialBox,
    NotSubcomplex,
    ParseError,
    PreconditionFailed,
)


def cells(*specs):
    return [CubeCell(s) for s in specs]


def test_cells_and_faces():
    c = CubeCell("*0*")
    assert (c.n, c.dimension, c.free_coordinates) == (3, 2, [0, 2])
    assert sorted(map(str, faces(c))) == ["*00", "*01", "00*", "10*"]
    assert c.contains(CubeCell("100"))
    assert not c.contains(CubeCell("110"))
    assert opposite(c, CubeCell("00*")) == CubeCell("10*")
    with pytest.raises(NotFace):
        opposite(c, CubeCell("000"))
    with pytest.raises(ParseError):
        CubeCell("0*2")


def test_cube_sizes():
    for n in range(1, 5):
        assert len(cells_of_cube(n)) == 3 ** n
    assert len(closure([CubeCell("**")])) == 9
    with pytest.raises(PreconditionFailed):
        cells_of_cube(0)
    with pytest.raises(PreconditionFailed):
        cells_of_cube(7)


def test_subcomplexes_are_closed():
    with pytest.raises(NotSubcomplex):
        CubeComplex(2, cells("*0"))
    with pytest.raises(PreconditionFailed):
        CubeComplex(2, cells("0"))
    L = CubeComplex.generated(cells("*0", "1*"))
    assert len(L) == 5
    assert L.issubset(CubeComplex.cube(2))
    assert sorted(map(str, CubeComplex.cube(2).cofaces(CubeCell("10")))) == ["**", "*0", "1*"]


def test_elementary_collapse_rules():
    square = CubeComplex.cube(2)
    smaller = elementary_collapse(square, CubeCell("**"), CubeCell("1*"))
    assert len(smaller) == 7
    with pytest.raises(NotFree):
        elementary_collapse(square, CubeCell("*0"), CubeCell("10"))
    with pytest.raises(NotFace):
        elementary_collapse(square, CubeCell("*0"), CubeCell("01"))
    with pytest.raises(NotFace):
        elementary_collapse(smaller, CubeCell("**"), CubeCell("0*"))


def test_replay_reports_failing_step():
    sequence = [(CubeCell("**"), CubeCell("1*")), (CubeCell("*0"), CubeCell("00"))]
    with pytest.raises(NotFree) as info:
        replay(CubeComplex.cube(2), sequence)
    assert info.value.context["step"] == 1


def test_collapse_to_vertex():
    for n, v in ((1, "1"), (2, "00"), (3, "010"), (4, "1101")):
        sequence = collapse_to_vertex(n, v)
        assert len(sequence) == (3 ** n - 1) // 2
        assert replay(CubeComplex.cube(n), sequence).cells == frozenset({CubeCell(v)})
    assert len(collapse_to_vertex(3, "000")) == 13
    for bad in ("0", "0a", "012"):
        with pytest.raises(PreconditionFailed):
            collapse_to_vertex(2, bad)


def test_product_collapse_onto_lshape(catalogue):
    L = CubeComplex.generated(catalogue.load("lshape"))
    result = product_collapse(CubeComplex.cube(2), L)
    assert len(result.start) == 27
    assert len(result.target) == 19
    assert len(result.sequence) == 4
    assert replay(result.start, result.sequence) == result.target


def test_product_collapse_requires_subcomplex():
    with pytest.raises(NotSubcomplex):
        product_collapse(CubeComplex.generated(cells("0")), CubeComplex.cube(1))


def test_partial_boxes():
    square = CubeCell("**")
    box = PartialBox(square, CubeCell("*0"), frozenset(cells("0*", "1*")))
    assert box.is_box
    assert len(box.complex()) == 7
    assert not PartialBox(square, CubeCell("*0")).is_box
    with pytest.raises(NotPartialBox):
        PartialBox(square, CubeCell("*0"), frozenset(cells("*1")))
    with pytest.raises(NotPartialBox):
        PartialBox(square, CubeCell("00"))
    assert PartialBox.from_facets(square, cells("*1", "1*")).base == CubeCell("*1")
    with pytest.raises(NotPartialBox):
        PartialBox.from_facets(square, cells("*0", "*1"))
    assert len(all_partial_boxes(square)) == 16


def test_collapse_cell_onto_box():
    a = CubeCell("0*")
    box = PartialBox(a, CubeCell("00"))
    assert collapse_cell_onto(a, box) == [(CubeCell("0*"), CubeCell("01"))]
    with pytest.raises(NotContained):
        collapse_cell_onto(CubeCell("1*"), box)


def test_box_chain_in_square():
    square = CubeCell("**")
    big = PartialBox(square, CubeCell("*0"), frozenset(cells("0*", "1*")))
    small = PartialBox(square, CubeCell("*0"))
    chain = box_chain(big, small)
    assert [str(step.added) for step in chain] == ["0*", "1*"]
    assert chain_collapses(chain) == [(CubeCell("0*"), CubeCell("01")), (CubeCell("1*"), CubeCell("11"))]
    assert verify_chain(big, small, chain)
    assert box_chain(small, small) == []


def test_box_chains_in_three_cube():
    cube = CubeCell("***")
    for box in all_partial_boxes(cube):
        if not box.sides:
            continue
        target = PartialBox(cube, box.base)
        assert verify_chain(box, target, box_chain(box, target)), str(box)


def test_box_chain_preconditions():
    square = CubeCell("**")
    big = PartialBox(square, CubeCell("*0"), frozenset(cells("0*")))
    with pytest.raises(NotContained):
        box_chain(big, PartialBox(square, CubeCell("*1")))
    with pytest.raises(NotContained):
        box_chain(big, PartialBox(CubeCell("***"), CubeCell("**0")))


def test_subdivisions():
    s = subdivide((2, 3))
    assert len(s.parts) == 6
    assert len(s.adjacent_pairs()) == 7
    assert s.part((2, 3)).domain == ((1, 2), (2, 3))
    with pytest.raises(PreconditionFailed):
        s.part((3, 1))
    for bad in ((0,), (), (2, -1)):
        with pytest.raises(PreconditionFailed):
            subdivide(bad)


def test_compose_check():
    s = subdivide((2,))
    labels = {(1,): {(0, -1): "a", (0, 1): "b"}, (2,): {(0, -1): "b", (0, 1): "c"}}
    report = compose_check(s, labels)
    assert (report.pairs_checked, report.parts) == (1, 2)
    labels[(2,)][(0, -1)] = "z"
    with pytest.raises(IncidenceMismatch) as info:
        compose_check(s, labels)
    assert info.value.pair == ((1,), (2,))
    with pytest.raises(PreconditionFailed):
        compose_check(s, {(1,): labels[(1,)]})


def test_cells_and_certificates_text():
    assert parse_cells("# L\n*0\n\n1*  # derecha\n") == cells("*0", "1*")
    with pytest.raises(ParseError) as info:
        parse_cells("*0\n2*\n")
    assert info.value.context["line"] == 2
    sequence = collapse_to_vertex(1, "0")
    assert format_certificate(sequence) == "* 1\n"
    assert parse_certificate("# I\n* 1\n") == sequence
    with pytest.raises(ParseError):
        parse_certificate("* 1 0\n")
