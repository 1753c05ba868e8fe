import pytest

from core.errors import NotComposable, ObjectNotFound, PreconditionFailed
from core.groupoids import (
    DirectedGraph,
    Edge,
    EdgePath,
    EnumeratedGroupoid,
    FreeGroupoidCarrier,
    GroupoidMorphism,
    GroupoidPresentation,
    commutative_squares,
    discrete_groupoid,
    format_path,
    groupoid_carrier,
    maximal_tree,
    pushout,
    vertex_group,
)

E = Edge("e", "p", "q")
F = Edge("f", "q", "r")
G = Edge("g", "p", "r")


def triangle(with_relation=True):
    graph = DirectedGraph(["p", "q", "r"], [E, F, G])
    relations = ((EdgePath.of(E) * EdgePath.of(F), EdgePath.of(G)),) if with_relation else ()
    return GroupoidPresentation(graph, relations, name="triangle")


def loop_presentation(power):
    loop = Edge("x", "o", "o")
    graph = DirectedGraph(["o"], [loop])
    return GroupoidPresentation(graph, ((EdgePath.of(loop) ** power, EdgePath.identity("o")),), name=f"C{power}")


def test_path_composition():
    e, f = EdgePath.of(E), EdgePath.of(F)
    assert (e * f).target == "r"
    assert (e * e.inverse()).is_identity
    assert format_path(e * f) == "e*f"
    assert format_path(EdgePath.identity("p")) == "id_p"
    with pytest.raises(NotComposable):
        f * e


def test_powers_only_for_loops():
    x = EdgePath.of(Edge("x", "o", "o"))
    assert format_path(x ** 3) == "x^3"
    assert format_path(x ** -2) == "x^-2"
    with pytest.raises(NotComposable):
        EdgePath.of(E) ** 2


def test_graph_validation():
    with pytest.raises(ObjectNotFound):
        DirectedGraph(["p"], [E])
    with pytest.raises(PreconditionFailed):
        DirectedGraph(["p", "q"], [E, Edge("e", "q", "p")])
    graph = triangle().graph
    with pytest.raises(NotComposable):
        graph.path([("f", 1), ("e", 1)])


def test_components_and_trees():
    graph = DirectedGraph(["a", "b", "c", "d"], [Edge("u", "a", "b"), Edge("v", "c", "d"), Edge("w", "d", "c")])
    assert graph.components() == [["a", "b"], ["c", "d"]]
    assert not graph.is_forest()
    tree = maximal_tree(graph)
    assert len(tree) == 2
    assert "u" in tree


def test_non_parallel_relation_is_rejected():
    graph = triangle().graph
    with pytest.raises(PreconditionFailed):
        GroupoidPresentation(graph, ((EdgePath.of(E), EdgePath.of(G)),))


def test_vertex_group_of_triangle_is_trivial():
    vg = vertex_group(triangle(), "p")
    assert vg.rank == 1
    assert len(vg.relators) == 1
    assert vertex_group(triangle(False), "p").relators == ()
    with pytest.raises(ObjectNotFound):
        vertex_group(triangle(), "z")


def test_circle_pushout_is_free_of_rank_one():
    W = discrete_groupoid(["m1", "p1"], name="ends")
    U = GroupoidPresentation(DirectedGraph(["m1", "p1"], [Edge("a", "m1", "p1")]), name="upper")
    V = GroupoidPresentation(DirectedGraph(["m1", "p1"], [Edge("b", "m1", "p1")]), name="lower")
    ident = {"m1": "m1", "p1": "p1"}
    po = pushout(GroupoidMorphism(W, U, ident, {}), GroupoidMorphism(W, V, ident, {}))
    assert sorted(po.presentation.objects) == ["m1", "p1"]
    vg = vertex_group(po.presentation, "m1")
    assert vg.rank == 1
    assert vg.relators == ()


def test_pushout_identifies_objects_and_renames_edges():
    W = discrete_groupoid(["w"])
    U = GroupoidPresentation(DirectedGraph(["u"], [Edge("a", "u", "u")]))
    V = GroupoidPresentation(DirectedGraph(["v", "v2"], [Edge("a", "v", "v2")]))
    po = pushout(GroupoidMorphism(W, U, {"w": "u"}, {}), GroupoidMorphism(W, V, {"w": "v"}, {}))
    assert len(po.presentation.objects) == 2
    assert sorted(e.name for e in po.presentation.edges) == ["a", "a_v"]
    assert po.from_v.apply(EdgePath.of(V.graph.edge("a"))).letters == (("a_v", 1),)


def test_morphism_relation_status():
    free = triangle(False)
    related = triangle()
    assert GroupoidMorphism.identity(related).relation_status() == ["unverified"]
    e, f = EdgePath.of(E), EdgePath.of(F)
    collapse = GroupoidMorphism(related, free, {o: o for o in "pqr"}, {"e": e, "f": f, "g": e * f})
    assert collapse.relation_status() == ["verified"]
    onto_free = GroupoidMorphism(related, free, {o: o for o in "pqr"},
                                 {e.name: EdgePath.of(e) for e in free.edges})
    assert onto_free.relation_status() == ["violated"]


def test_morphism_must_respect_ends():
    free = triangle(False)
    with pytest.raises(PreconditionFailed):
        GroupoidMorphism(free, free, {o: o for o in "pqr"},
                         {"e": EdgePath.of(G), "f": EdgePath.of(F), "g": EdgePath.of(G)})


def test_carriers():
    assert isinstance(groupoid_carrier(triangle(False), 100), FreeGroupoidCarrier)
    carrier = groupoid_carrier(triangle(), 100)
    assert isinstance(carrier, EnumeratedGroupoid)
    assert len(carrier.hom("p", "r")) == 1
    assert carrier.evaluate(EdgePath.of(E) * EdgePath.of(F)) == carrier.evaluate(EdgePath.of(G))
    cyclic = EnumeratedGroupoid(loop_presentation(4), 100)
    assert cyclic.group_of("o").order == 4
    assert len(cyclic.arrows()) == 4


def test_free_forest_carrier_is_finite():
    forest = GroupoidPresentation(DirectedGraph(["p", "q"], [E]))
    carrier = FreeGroupoidCarrier(forest.graph)
    assert carrier.finite
    assert carrier.hom("q", "p") == [EdgePath.of(E).inverse()]
    assert not FreeGroupoidCarrier(triangle(False).graph).finite


def test_commutative_squares_close_under_composition():
    report = commutative_squares(EnumeratedGroupoid(loop_presentation(2), 100))
    assert report.squares == 8
    assert report.ok
    report = commutative_squares(EnumeratedGroupoid(triangle(), 100))
    assert report.ok


def test_pushout_requires_every_component_to_be_reached():
    W = discrete_groupoid(["w"])
    U = GroupoidPresentation(DirectedGraph(["u", "island"], [Edge("a", "u", "u")]))
    V = discrete_groupoid(["v"])
    with pytest.raises(PreconditionFailed) as info:
        pushout(GroupoidMorphism(W, U, {"w": "u"}, {}), GroupoidMorphism(W, V, {"w": "v"}, {}))
    assert info.value.context["witness"] == "island"
    joined = GroupoidPresentation(DirectedGraph(["u", "island"], [Edge("a", "u", "island")]))
    po = pushout(GroupoidMorphism(W, joined, {"w": "u"}, {}), GroupoidMorphism(W, V, {"w": "v"}, {}))
    assert po.presentation.objects == ("u", "island")
