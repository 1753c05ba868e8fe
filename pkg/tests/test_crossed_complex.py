import pytest

from core.algebra import FreeWord, GroupPresentation
from core.crossed_complex import (
    Cell,
    CrossedComplex,
    CrossedComplexMorphism,
    Degree2Element,
    ModuleElement,
    free_cover,
    fundamental_groupoid,
    homology,
    interval,
    make_example,
    point,
    validate_complex,
)
from core.errors import NotComposable, ObjectNotFound, PreconditionFailed
from core.groupoids import EdgePath
from core.linalg import AbelianInvariants

x, y = FreeWord.generator(0), FreeWord.generator(1)


def cyclic(n):
    return GroupPresentation(("x",), (x ** n,), name=f"C{n}")


def test_catalogue_complexes_are_valid(catalogue, bound):
    complexes = catalogue.complexes()
    assert {name for name, _ in complexes} >= {"c3_complex", "interval", "k_c6_3", "rp_infinity"}
    for name, C in complexes:
        report = validate_complex(C, bound)
        assert report.ok, (name, report.witnesses)


def test_structure_of_rp_infinity(catalogue):
    C = catalogue.load("rp_infinity")
    assert C.top_degree == 4
    assert [C.basis(n) for n in range(5)] == [["o"], ["x"], ["r"], ["c"], ["d"]]
    assert C.degree_of("c") == 3
    assert C.base_of("x") == "o"
    assert C.is_free
    with pytest.raises(ObjectNotFound):
        C.cell("nosuch")


def test_fundamental_groupoid_of_c3_complex(catalogue, bound):
    C = catalogue.load("c3_complex")
    assert len(C.pi1_carrier(bound).hom("o", "o")) == 3
    assert not fundamental_groupoid(C).is_free


def test_homology_of_c3_complex(catalogue, bound):
    C = catalogue.load("c3_complex")
    assert homology(C, 1, "o", bound) == AbelianInvariants(0, (3,))
    # núcleo de la multiplicación por la norma en Z[C3]
    assert homology(C, 2, "o", bound) == AbelianInvariants(2)


def test_homology_of_eilenberg_maclane_complex(catalogue, bound):
    C = catalogue.load("k_c6_3")
    assert str(homology(C, 3, "o", bound)) == "C_6"
    assert homology(C, 1, "o", bound).is_trivial


def test_rp_infinity_is_acyclic_in_low_degrees(catalogue, bound):
    C = catalogue.load("rp_infinity")
    assert homology(C, 1, "o", bound) == AbelianInvariants(0, (2,))
    assert homology(C, 2, "o", bound).is_trivial
    assert homology(C, 3, "o", bound).is_trivial


def test_homology_preconditions(catalogue, bound):
    C = catalogue.load("c3_complex")
    with pytest.raises(PreconditionFailed):
        homology(C, 0, "o", bound)
    with pytest.raises(ObjectNotFound):
        homology(C, 1, "nowhere", bound)


def test_degree_two_arithmetic(catalogue, bound):
    C = catalogue.load("c3_complex")
    r = C.generator("r")
    loop = EdgePath.of(C.c1.graph.edge("x"))
    assert (r * r.inverse()).is_identity
    assert len(r ** 3) == 3
    assert C.equal(r.act(loop * loop * loop), r, 2, bound)
    assert C.equal(r ** 2, r, 2, bound) is False
    assert C.delta(r, 2) == loop * loop * loop
    with pytest.raises(NotComposable):
        r * Degree2Element.identity("elsewhere")


def test_module_elements_combine_terms():
    base = EdgePath.identity("o")
    c = ModuleElement("o", 3, (("c", base, 1),))
    assert (c + c - c.scale(2)).is_zero
    assert (2 * c).terms == (("c", base, 2),)
    with pytest.raises(NotComposable):
        c + ModuleElement.zero("o", 4)


def test_point_and_interval():
    P = point()
    assert P.objects == ("o",) and P.top_degree == 0
    I = interval()
    assert I.objects == ("i0", "i1")
    assert I.basis(1) == ["iota"]
    assert I.top_degree == 1
    assert homology(I, 1, "i0", 16).is_trivial


def test_cells_must_be_well_formed(catalogue):
    C = catalogue.load("c3_complex")
    with pytest.raises(PreconditionFailed):
        CrossedComplex("bad", C.c1, [Cell("r", 1, "o", None)])
    with pytest.raises(ObjectNotFound):
        CrossedComplex("bad", C.c1, [Cell("r", 2, "q", EdgePath.identity("q"))])
    with pytest.raises(PreconditionFailed):
        CrossedComplex("bad", C.c1, [Cell("s", 3, "o", EdgePath.identity("o"))])


def test_from_presentation_builds_free_complex(bound):
    S3 = GroupPresentation(("s", "t"), (x ** 2, y ** 3, (x * y) ** 2), name="S3")
    for C in (make_example("from_presentation", bound, presentation=S3),):
        assert C.basis(1) == ["s", "t"]
        assert C.basis(2) == ["r0", "r1", "r2"]
        assert validate_complex(C, bound).ok
        assert homology(C, 1, "o", bound) == AbelianInvariants(0, (2,))


def test_cgn_examples(bound):
    C = make_example("CGn", bound, group=cyclic(6), n=3)
    assert homology(C, 3, "o", bound) == AbelianInvariants(0, (6,))
    assert make_example("CGn", bound, group=cyclic(4), n=1).top_degree == 1
    with pytest.raises(PreconditionFailed):
        make_example("CGn", bound, group=cyclic(4), n=0)
    S3 = GroupPresentation(("s", "t"), (x ** 2, y ** 3, (x * y) ** 2), name="S3")
    with pytest.raises(PreconditionFailed):
        make_example("CGn", bound, group=S3, n=2)


def test_cg1mn_with_trivial_module(bound):
    C = make_example("CG1Mn", bound, group=cyclic(2), n=3)
    assert validate_complex(C, bound).ok
    assert homology(C, 3, "o", bound) == AbelianInvariants(1)
    assert homology(C, 1, "o", bound) == AbelianInvariants(0, (2,))
    with pytest.raises(PreconditionFailed):
        make_example("CG1Mn", bound, group=cyclic(2), n=1)
    with pytest.raises(PreconditionFailed):
        make_example("sphere", bound)


def test_free_cover_drops_relations(bound):
    C = make_example("CGn", bound, group=cyclic(6), n=3)
    assert not C.is_free
    cover = free_cover(C)
    assert cover.is_free
    assert cover.basis(3) == C.basis(3)
    assert homology(cover, 3, "o", bound) == AbelianInvariants(1)


def test_identity_morphism_checks(catalogue, bound):
    for name in ("c3_complex", "rp_infinity", "interval"):
        C = catalogue.load(name)
        assert CrossedComplexMorphism.identity(C).check(bound).ok


def test_morphism_with_wrong_boundary_fails(catalogue, bound):
    C = catalogue.load("c3_complex")
    images = {"x": C.generator("x"), "r": C.generator("r").inverse()}
    report = CrossedComplexMorphism(C, C, {"o": "o"}, images, name="flip").check(bound)
    assert not report.ok
    assert report.checks["boundary_2"] is False
    assert report.witnesses == ["boundary_2: r"]


def test_morphism_composition(catalogue, bound):
    C = catalogue.load("rp_infinity")
    ident = CrossedComplexMorphism.identity(C)
    composite = ident.then(ident)
    assert composite.object_map == {"o": "o"}
    assert composite.check(bound).ok
    with pytest.raises(PreconditionFailed):
        CrossedComplexMorphism(C, C, {}, {})
