import pytest

from core.algebra import FreeWord
from core.crossed_complex import Degree2Element, ModuleElement, validate_complex
from core.double_groupoid import Square, from_crossed_module
from core.errors import NotComposable, ParseError, PreconditionFailed
from core.groupoids import EdgePath, GroupoidMorphism
from core.cubes import CubeCell

x, y = FreeWord.generator(0), FreeWord.generator(1)

TRIANGLE = "name: triangle\nobjects: p, q, r\nedges: e: p->q, f: q->r, g: p->r\nrels: e*f = g\n"


def test_words(parser):
    gens = ("x", "y")
    assert parser.parse_word("x^2*y^-1", gens) == x * x * y.inverse()
    assert parser.parse_word("[x,y]", gens) == x.inverse() * y.inverse() * x * y
    assert parser.parse_word("x@y", gens) == y.inverse() * x * y
    assert parser.parse_word("1", gens).is_identity
    for bad in ("z", "x+y", "x^y", "x^"):
        with pytest.raises(ParseError):
            parser.parse_word(bad, gens)


def test_presentations(parser):
    text = "name: S3\ngens: s, t\nrels: s^2, t^3, s*t*s*t\n"
    p = parser.parse_presentation(text)
    assert p.generators == ("s", "t")
    assert len(p.relators) == 3
    assert parser.format_presentation(p) == text
    for bad in ("rels: x^2\ngens: x\n", "name: empty\n", "gens: x\nfoo: 1\n", "gens x\n"):
        with pytest.raises(ParseError):
            parser.parse_presentation(bad)


def test_paths_and_groupoids(parser):
    p = parser.parse_groupoid(TRIANGLE)
    assert p.objects == ("p", "q", "r")
    assert len(p.relations) == 1
    assert parser.format_groupoid(p) == TRIANGLE
    graph = p.graph
    assert parser.parse_path("e*f", graph) == EdgePath("p", "r", (("e", 1), ("f", 1)))
    assert parser.parse_path("id_q", graph).is_identity
    assert parser.parse_path("g*f^-1", graph).target == "q"
    with pytest.raises(ParseError):
        parser.parse_path("h", graph)
    with pytest.raises(NotComposable):
        parser.parse_path("f*e", graph)
    with pytest.raises(ParseError):
        parser.parse_groupoid("objects: p\nrels: id_p\n")


def test_pushout_sections(catalogue, parser):
    i, j = parser.parse_file(catalogue.path("circle"))
    assert isinstance(i, GroupoidMorphism) and isinstance(j, GroupoidMorphism)
    assert i.source.objects == ("m1", "p1")
    with pytest.raises(ParseError):
        parser.parse_pushout("[W]\nobjects: a\n[U]\nobjects: a\n")
    with pytest.raises(ParseError):
        parser.parse_pushout("objects: a\n[W]\n")


def test_group_specs(parser):
    orders = {"C4": 4, "S3": 6, "A4": 12, "D8": 8, "Q8": 8, "1": 1, "C2xC2": 4, "C2xS3": 12}
    for text, order in orders.items():
        assert parser.parse_group_spec(text).order == order, text
    for bad in ("D3", "Z", "C"):
        with pytest.raises(ParseError):
            parser.parse_group_spec(bad)


def test_crossed_module_files(catalogue, parser):
    xm = parser.parse_file(catalogue.path("c3s3"))
    assert (xm.M.order, xm.P.order) == (3, 6)
    again = parser.parse_xmod(parser.format_xmod(xm))
    assert (again.M.order, again.P.order) == (3, 6)
    assert list(again.mu) == list(xm.mu)
    for bad in ("standard: mystery\nM: C2\n", "M: C2\nP: C2\nwhat: 1\n", "standard: inner_automorphism\n"):
        with pytest.raises(ParseError):
            parser.parse_xmod(bad)
    with pytest.raises(PreconditionFailed):
        parser.parse_xmod("M: C2\nP: C3\nmu: x -> x\n")


def test_elements_of_complexes(catalogue, parser):
    C = catalogue.load("rp_infinity")
    loop = EdgePath.of(C.c1.graph.edge("x"))
    r = parser.parse_element("r@x * r^-1", C, 2)
    assert isinstance(r, Degree2Element)
    assert r.terms == (("r", 1, loop), ("r", -1, EdgePath.identity("o")))
    c = parser.parse_element("2*c@x - c", C, 3)
    assert isinstance(c, ModuleElement)
    assert dict(((n, p), k) for n, p, k in c.terms) == {("c", loop): 2, ("c", EdgePath.identity("o")): -1}
    assert parser.parse_element("0_o", C, 4).is_zero
    assert parser.parse_element("id_o", C, 2).is_identity
    assert parser.parse_element("o", C, 0) == "o"
    for text, degree in (("q", 2), ("r", 3), ("c + r", 3), ("nowhere", 0)):
        with pytest.raises(ParseError):
            parser.parse_element(text, C, degree)


def test_complex_round_trip(catalogue, parser, bound):
    for name in ("rp_infinity", "c3_complex", "k_c6_3", "interval"):
        C = catalogue.load(name)
        again = parser.parse_crossed_complex(parser.format_crossed_complex(C))
        assert again.all_cells() == C.all_cells(), name
        assert again.relations == C.relations, name
        assert validate_complex(again, bound).ok


def test_complex_errors_carry_line(parser):
    with pytest.raises(ParseError) as info:
        parser.parse_crossed_complex("objects: o\ndeg1: x: o->o\ndeg2: r@o = y^2\n")
    assert info.value.context["line"] == 3
    with pytest.raises(ParseError):
        parser.parse_crossed_complex("objects: o\ndeg2: r = id_o\n")


def test_squares_and_shells(catalogue, parser, tmp_path):
    dg = from_crossed_module(catalogue.load("c2c2"))
    assert parser.parse_square("(1; x,x,x,x)", dg) == Square(0, 1, 1, 1, 1)
    for bad in ("1; x,x,x,x", "(1; x,x)", "(1, x, x, x, x)", "(1; x,x,x,q)"):
        with pytest.raises(ParseError):
            parser.parse_square(bad, dg)
    shell_dg, sh = catalogue.load("c2c2_thin")
    text = parser.format_shell(shell_dg, sh, "c2c2.xmod")
    copy = tmp_path / "copy.shell"
    copy.write_text(text, encoding="utf-8")
    (tmp_path / "c2c2.xmod").write_text(catalogue.path("c2c2").read_text(encoding="utf-8"), encoding="utf-8")
    assert parser.parse_file(copy)[1] == sh


def test_file_dispatch(catalogue, parser, tmp_path):
    cert = tmp_path / "edge.cert"
    cert.write_text("* 1\n", encoding="utf-8")
    assert parser.parse_file(cert) == [(CubeCell("*"), CubeCell("1"))]
    assert parser.parse_file(catalogue.path("lshape")) == [CubeCell("*0"), CubeCell("1*")]
    with pytest.raises(ParseError):
        parser.parse_file(tmp_path / "notes.txt")
    with pytest.raises(ParseError):
        parser.parse_file(tmp_path / "missing.pres")


def test_parse_result_never_raises(catalogue, parser, tmp_path):
    result = parser.parse(catalogue.path("circle"))
    assert result.success and result.kind == "pushout"
    bad = tmp_path / "bad.pres"
    bad.write_text("gens: x\nrels: x^q\n", encoding="utf-8")
    result = parser.parse(bad)
    assert not result.success
    assert result.kind == "presentation"
    assert result.value is None
    assert result.error_message
