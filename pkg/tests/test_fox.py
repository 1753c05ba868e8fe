import pytest

from core.algebra import FreeWord, GroupPresentation, GroupRingElement, apply_matrix, format_group_ring
from core.crossed_module import FreeCrossedModuleElement, action_on_fcm
from core.errors import PreconditionFailed
from core.fox import (
    GroupMap,
    boundary_one,
    derived_diagram_check,
    fox_derivative,
    fox_jacobian,
    h0,
    h1,
    h2,
    identities_module,
    nabla,
    words_up_to,
)

x, X = FreeWord.generator(0), FreeWord.generator(0, -1)
y = FreeWord.generator(1)

S3 = GroupPresentation(("s", "t"), (x ** 2, y ** 3, (x * y) ** 2), name="S3")


def cyclic(n):
    return GroupPresentation(("x",), (x ** n,), name=f"C{n}")


def test_derivative_of_power_in_c3():
    phi = GroupMap.for_presentation(cyclic(3), 100)
    derivative = fox_derivative(x ** 3, 0, phi)
    assert derivative == GroupRingElement(phi.carrier, {0: 1, 1: 1, 2: 1})
    assert derivative.augmentation() == 3
    assert format_group_ring(fox_derivative(x ** 2, 0, phi)) == "1 + x"


def test_free_derivatives():
    phi = GroupMap(("x", "y"))
    assert fox_derivative(y, 0, phi).is_zero
    assert fox_derivative(x, 0, phi) == 1
    assert fox_derivative(X, 0, phi) == -GroupRingElement.of(phi.carrier, X)
    assert fox_derivative(x * y * X, 0, phi) == \
        GroupRingElement.of(phi.carrier, y * X) - GroupRingElement.of(phi.carrier, X)


def test_product_rule():
    phi = GroupMap.for_presentation(S3, 4096)
    words = words_up_to(2, 2)
    for u in words:
        for v in words:
            for k in range(2):
                expected = fox_derivative(u, k, phi).right_act(phi(v)) + fox_derivative(v, k, phi)
                assert fox_derivative(u * v, k, phi) == expected


def test_fundamental_formula():
    phi = GroupMap.for_presentation(S3, 4096)
    d1 = boundary_one(phi)
    for w in words_up_to(2, 3):
        assert apply_matrix(h1(w, phi), d1)[0] == h0(phi(w), phi)


def test_words_up_to():
    assert len(words_up_to(1, 2)) == 5
    assert len(words_up_to(2, 1)) == 5
    assert len(words_up_to(2, 2)) == 17


def test_jacobian_shape_and_format():
    jac = fox_jacobian(S3, 4096)
    assert len(jac.matrix) == 3
    assert all(len(row) == 2 for row in jac.matrix)
    assert len(jac.format()) == 3
    assert jac.matrix[1][0].is_zero


def test_h2_linearizes_conjugates():
    phi = GroupMap.for_presentation(cyclic(2), 100)
    r = FreeCrossedModuleElement.generator(0)
    row = h2(action_on_fcm(r, x) * r.inverse(), phi, 1)
    assert row == [GroupRingElement(phi.carrier, {1: 1, 0: -1})]


def test_derived_diagram_commutes():
    for p in (cyclic(3), S3, GroupPresentation(("x", "y"), (x ** 2, y ** 2, X * y.inverse() * x * y))):
        report = derived_diagram_check(p, 4096, max_length=1, max_conjugator=1, max_word=2)
        assert report.ok, report.witnesses
        assert report.exact_at_derived
        assert report.cases > 0


def test_identities_rank_of_cyclic_groups():
    for n in range(2, 6):
        module = identities_module(cyclic(n), 100)
        assert module.rank == n - 1
        assert not module.is_zero
        assert len(module.format()) == n - 1


def test_identities_of_trivial_presentation():
    module = identities_module(cyclic(1), 100)
    assert module.rank == 0
    assert module.is_zero


def test_nabla_of_catalogue_complexes(catalogue):
    for name in ("c3_complex", "rp_infinity"):
        complex_ = nabla(catalogue.load(name), 4096)
        assert complex_.failing_degrees() == [], name
        assert complex_.rank(0) == 1
        assert complex_.rank(1) == 1
    assert nabla(catalogue.load("rp_infinity"), 4096).top_degree >= 3


def test_nabla_rejects_several_objects(catalogue):
    with pytest.raises(PreconditionFailed):
        nabla(catalogue.load("interval"), 4096)
