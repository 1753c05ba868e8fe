import numpy as np
import pytest

from core.algebra import FiniteGroup
from core.crossed_module import CrossedModule
from core.double_groupoid import (
    EDGE_LABELS,
    FACE_NAMES,
    GAUGE_TREE,
    ShellCensus,
    Shell3,
    Square,
    from_crossed_module,
    law_suite,
    shell_census,
)
from core.errors import IncidenceMismatch, InvalidCrossedModule, MalformedShell, NotComposable, \
    PreconditionFailed

X = 1


@pytest.fixture
def dg(catalogue):
    return from_crossed_module(catalogue.load("c2c2"))


@pytest.fixture
def thin_shell(catalogue):
    return catalogue.load("c2c2_thin")[1]


def test_squares_of_identity_module(dg):
    squares = dg.squares
    assert len(squares) == dg.M.order * dg.P.order ** 3 == 16
    assert all(dg.is_square(s) for s in squares)
    assert dg.square(0, X, X, 0, 0) == Square(0, X, X, 0, 0)
    with pytest.raises(PreconditionFailed):
        dg.square(0, X, 0, 0, 0)
    assert dg.solutions(X, 0, 0, 0) == [X]


def test_compositions_and_identities(dg):
    s = Square(X, X, 0, 0, 0)
    t = Square(0, 0, 0, X, X)
    assert dg.is_square(s) and dg.is_square(t)
    h = dg.compose_h(s, t)
    assert (h.c, h.a, h.d, h.b) == (X, 0, X, X)
    assert dg.is_square(h)
    assert dg.compose_v(dg.vid(s.c), s) == s
    assert dg.compose_h(s, dg.hid(s.d)) == s
    assert dg.compose_v(s, dg.vinv(s)) == dg.vid(s.c)
    assert dg.compose_h(dg.hinv(s), s) == dg.hid(s.d)
    assert dg.transpose(dg.transpose(s)) == s
    with pytest.raises(NotComposable):
        dg.compose_h(t, s)
    with pytest.raises(NotComposable):
        dg.compose_v(t, t)


def test_connections_and_thin_squares(dg):
    for a in dg.P.elements():
        plus, minus = dg.connection(a, 1), dg.connection(a, -1)
        assert dg.compose_v(plus, minus) == dg.hid(a)
        assert dg.compose_h(plus, minus) == dg.vid(a)
        for s in (plus, minus, dg.corner(a), dg.elbow(a)):
            assert dg.is_square(s) and dg.is_thin(s)
    filler = dg.thin_filler(X, X, 0)
    assert dg.is_thin(filler) and dg.is_square(filler)
    assert filler.b == 0


def test_compose_array(dg):
    s = Square(X, X, 0, 0, 0)
    assert dg.compose_array([[s, dg.hid(0)], [dg.vid(0), dg.hid(0)]]) == s
    with pytest.raises(PreconditionFailed):
        dg.compose_array([[s], [s, s]])
    with pytest.raises(IncidenceMismatch):
        dg.compose_array([[s, Square(0, 0, X, X, 0)]])


def test_thin_shell_is_commutative(dg, thin_shell):
    assert thin_shell.face("a2-") == Square(0, X, X, X, X)
    assert set(dg.check_shell(thin_shell).values()) == {X}
    assert dg.hcl_commutative(thin_shell)
    assert dg.c1_commutative(thin_shell)
    assert dg.commutative_completion(thin_shell) == thin_shell
    assert dg.format_shell(thin_shell).count("\n") == 6


def test_malformed_shells(dg, thin_shell):
    with pytest.raises(MalformedShell):
        Shell3(thin_shell.faces[:5])
    broken = thin_shell.replace(a1m=Square(0, 0, 0, 0, 0))
    with pytest.raises(MalformedShell):
        broken.edges()
    with pytest.raises(MalformedShell):
        dg.check_shell(thin_shell.replace(a3p=Square(0, X, 0, X, X)))
    with pytest.raises(MalformedShell):
        dg.shell_from_faces({name: thin_shell.face(name) for name in FACE_NAMES[:4]})


def test_shell_composition(dg, thin_shell):
    for direction in (1, 2, 3):
        unit = dg.degenerate_shell(thin_shell.face(f"a{direction}+"), direction)
        assert dg.hcl_commutative(unit)
        composed = dg.compose_shells(thin_shell, unit, direction)
        assert composed == thin_shell
    with pytest.raises(NotComposable):
        dg.compose_shells(thin_shell, dg.degenerate_shell(), 1)
    with pytest.raises(PreconditionFailed):
        dg.compose_shells(thin_shell, thin_shell, 4)
    with pytest.raises(PreconditionFailed):
        dg.degenerate_shell(direction=0)


def test_shell_enumeration(dg):
    assert dg.shell_count() == 4096
    census = shell_census(dg)
    assert census == ShellCensus(4096, 4096, True)
    sample = dg.sample_shells(5, np.random.default_rng(7))
    assert len(sample) == 5
    for sh in sample:
        dg.check_shell(sh)


def test_law_suite_on_identity_module(dg):
    report = law_suite(dg, max_shells=200)
    assert report.ok, [r for r in report.results if not r.passed]
    names = [r.name for r in report.results]
    assert names[:3] == ["vertical_associativity", "horizontal_associativity", "quintuple"]
    assert names[-3:] == ["shell_composition_1", "shell_composition_2", "shell_composition_3"]
    agreement = report.result("hcl_c1_agreement")
    assert agreement.exhaustive and agreement.cases == 4096


def test_law_suite_is_exhaustive_on_small_modules(catalogue):
    dg = from_crossed_module(catalogue.load("a3s3"))
    report = law_suite(dg, max_cases=300, seed=3, max_shells=10)
    assert report.ok, [r for r in report.results if not r.passed]
    assert [r.name for r in report.results if not r.exhaustive] == []
    assert len(dg.squares) == 3 * 6 ** 3
    assert report.result("quintuple").cases == 648
    assert report.result("vertical_associativity").cases == 648 * 108 * 108
    assert report.result("interchange").cases == 648 * 108 * 108 * 18
    # las cinco aristas fuera del árbol recorren A₃
    assert report.result("hcl_c1_agreement").cases == 3 ** 5


def test_law_suite_samples_beyond_exhaustive_orders(catalogue):
    dg = from_crossed_module(catalogue.load("c4d8"))
    report = law_suite(dg, max_cases=300, seed=3, max_shells=10)
    assert report.ok, [r for r in report.results if not r.passed]
    assert not report.result("interchange").exhaustive
    assert report.result("quintuple").cases == 300
    assert report.result("hcl_c1_agreement").cases == 10


def test_gauge_representatives(dg, catalogue):
    shells = list(dg.gauge_shells())
    assert len(shells) == 2 ** 5
    for sh in shells:
        edges = dg.check_shell(sh)
        assert all(edges[label] == 0 for label in GAUGE_TREE)
    a3s3 = from_crossed_module(catalogue.load("a3s3"))
    first = next(a3s3.gauge_shells())
    for direction in (1, 2, 3):
        glued = list(a3s3.glued_shells(first, direction))
        assert len(glued) == 3 ** 4
        for other in glued:
            assert other.face(f"a{direction}-") == first.face(f"a{direction}+")
            edges = a3s3.check_shell(other)
            assert all(edges[label] == 0 for label in EDGE_LABELS if label[0] == "ABC"[direction - 1])


def test_double_groupoid_requires_crossed_module():
    M, P = FiniteGroup.symmetric(3), FiniteGroup.trivial()
    broken = CrossedModule(M, P, np.zeros(6, dtype=np.int64), np.arange(6).reshape(6, 1), name="broken")
    with pytest.raises(InvalidCrossedModule):
        from_crossed_module(broken)
