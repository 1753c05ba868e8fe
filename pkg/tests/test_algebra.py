import pytest

from core.algebra import (
    FiniteGroup,
    FreeGroup,
    FreeWord,
    GroupPresentation,
    GroupRingElement,
    abelian_invariants,
    are_isomorphic,
    automorphism_group,
    enumerate_fp_group,
    format_group_ring,
    format_word,
    free_reduce,
    group_ring_op,
    isomorphism_test,
    kernel_coinvariants,
    module_kernel,
    presentation_from_group,
)
from core.errors import PreconditionFailed, Unbounded
from core.linalg import AbelianInvariants

x, X = FreeWord.generator(0), FreeWord.generator(0, -1)
y = FreeWord.generator(1)


def cyclic_presentation(n):
    return GroupPresentation(("x",), (x ** n,), name=f"C{n}")


# ---------------------------------------------------------------------------
# Palabras libres
# ---------------------------------------------------------------------------

def test_free_reduction():
    assert (x * X).is_identity
    assert free_reduce([(0, 1), (1, 1), (1, -1), (0, -1)]).is_identity
    assert len(x * y * y.inverse() * x) == 2
    assert (x * y).inverse() == y.inverse() * X


def test_word_powers_and_conjugates():
    assert format_word(x ** 2 * y ** -1, ("x", "y")) == "x^2*y^-1"
    assert format_word(FreeWord(), ("x",)) == "1"
    assert x.conjugate(y) == y.inverse() * x * y
    assert (x ** 3 * y * X).exponent_sum(0) == 2


def test_presentation_generator_index():
    p = GroupPresentation(("a", "b"), ())
    assert p.rank == 2
    assert p.generator_index("b") == 1
    with pytest.raises(PreconditionFailed):
        p.generator_index("c")


def test_free_group_arithmetic():
    F = FreeGroup(("x", "y"))
    assert F.op(x, X) == F.identity
    assert F.inverse(x * y) == y.inverse() * X


# ---------------------------------------------------------------------------
# Grupos finitos
# ---------------------------------------------------------------------------

def test_standard_groups():
    table = [
        (FiniteGroup.trivial(), 1, True),
        (FiniteGroup.cyclic(6), 6, True),
        (FiniteGroup.symmetric(3), 6, False),
        (FiniteGroup.alternating(4), 12, False),
        (FiniteGroup.dihedral(4), 8, False),
        (FiniteGroup.quaternion(), 8, False),
        (FiniteGroup.direct_product(FiniteGroup.cyclic(2), FiniteGroup.cyclic(2)), 4, True),
    ]
    for G, order, abelian in table:
        assert G.order == order, G
        assert G.is_abelian() == abelian, G
        assert G.validate() == []
        assert G.subgroup_generated(G.generating_set()) == list(G.elements())


def test_element_arithmetic():
    G = FiniteGroup.symmetric(3)
    for a in G.elements():
        assert G.op(a, G.inverse(a)) == G.identity
        assert G.power(a, G.element_order(a)) == G.identity
    assert sorted(G.element_orders().tolist()) == [1, 2, 2, 2, 3, 3]
    assert G.center() == [0]
    assert len(FiniteGroup.quaternion().center()) == 2


def test_normal_subgroups():
    S3 = FiniteGroup.symmetric(3)
    rotations = [a for a in S3.elements() if S3.element_order(a) in (1, 3)]
    assert S3.is_normal(rotations)
    transposition = next(a for a in S3.elements() if S3.element_order(a) == 2)
    assert not S3.is_normal([0, transposition])


def test_broken_table_is_rejected():
    with pytest.raises(PreconditionFailed):
        FiniteGroup([[0, 1], [1, 1]])


def test_isomorphism():
    C2 = FiniteGroup.cyclic(2)
    klein = FiniteGroup.direct_product(C2, C2)
    assert not are_isomorphic(klein, FiniteGroup.cyclic(4))
    assert are_isomorphic(FiniteGroup.cyclic(6), FiniteGroup.direct_product(C2, FiniteGroup.cyclic(3)))
    assert isomorphism_test(FiniteGroup.dihedral(4), FiniteGroup.quaternion()) == (False, "element-orders")
    assert isomorphism_test(FiniteGroup.symmetric(3), FiniteGroup.dihedral(3)) == (True, "search")


def test_automorphism_group_orders():
    for G, order in [(FiniteGroup.cyclic(3), 2), (FiniteGroup.cyclic(5), 4), (FiniteGroup.symmetric(3), 6)]:
        assert automorphism_group(G).group.order == order


# ---------------------------------------------------------------------------
# Enumeración de presentaciones
# ---------------------------------------------------------------------------

def test_enumerate_cyclic_three():
    E = enumerate_fp_group(cyclic_presentation(3), 10)
    assert E.order == 3
    assert E.evaluate(x ** 4) == E.evaluate(x)
    assert E.normal_form(X) == x ** 2 or E.normal_form(X) == X


def test_enumerate_known_orders():
    klein = GroupPresentation(("x", "y"), (x ** 2, y ** 2, X * y.inverse() * x * y))
    s3 = GroupPresentation(("s", "t"), (x ** 2, y ** 3, (x * y) ** 2))
    for p, order in [(klein, 4), (s3, 6), (cyclic_presentation(1), 1), (cyclic_presentation(12), 12)]:
        assert enumerate_fp_group(p, 4096).order == order


def test_enumerated_table_is_a_group():
    E = enumerate_fp_group(GroupPresentation(("s", "t"), (x ** 2, y ** 3, (x * y) ** 2)), 4096)
    assert E.group.validate() == []
    assert are_isomorphic(E.group, FiniteGroup.symmetric(3))


def test_enumeration_bound():
    with pytest.raises(Unbounded) as info:
        enumerate_fp_group(GroupPresentation(("x",), ()), 10)
    assert info.value.bound == 10
    with pytest.raises(PreconditionFailed):
        enumerate_fp_group(cyclic_presentation(3), 0)


def test_bound_limits_the_order_of_the_group():
    a5 = GroupPresentation(("a", "b"), (x ** 2, y ** 3, (x * y) ** 5), name="A5")
    for bound in (60, 61, 80):
        E = enumerate_fp_group(a5, bound)
        assert E.order == 60
        assert E.group.validate() == []
    with pytest.raises(Unbounded) as info:
        enumerate_fp_group(a5, 59)
    assert info.value.bound == 59
    trivial = GroupPresentation(("x", "y"), (x, y * x), name="1")
    assert enumerate_fp_group(trivial, 1).order == 1
    assert enumerate_fp_group(trivial, 2).order == 1
    assert enumerate_fp_group(cyclic_presentation(7), 7).order == 7


def test_infinite_presentations_are_rejected_early():
    z2 = GroupPresentation(("x", "y"), (X * y.inverse() * x * y,), name="Z2")
    with pytest.raises(Unbounded):
        enumerate_fp_group(z2, 4096)


def test_presentation_from_group_round_trip():
    for G in (FiniteGroup.cyclic(4), FiniteGroup.symmetric(3), FiniteGroup.quaternion()):
        E = enumerate_fp_group(presentation_from_group(G), 4096)
        assert are_isomorphic(E.group, G)


def test_abelianization():
    assert abelian_invariants(cyclic_presentation(6)) == AbelianInvariants(0, (6,))
    assert abelian_invariants(GroupPresentation(("x", "y"), ())) == AbelianInvariants(2)
    s3 = GroupPresentation(("s", "t"), (x ** 2, y ** 3, (x * y) ** 2))
    assert str(abelian_invariants(s3)) == "C_2"


# ---------------------------------------------------------------------------
# Anillo de grupo
# ---------------------------------------------------------------------------

def test_group_ring_product_in_c2():
    C2 = FiniteGroup.cyclic(2)
    one, g = GroupRingElement.one(C2), GroupRingElement.of(C2, 1)
    assert ((one + g) * (one - g)).is_zero
    assert (one + g) * (one + g) == 2 * (one + g)
    assert (one + g).augmentation() == 2
    assert one == 1


def test_group_ring_formatting():
    C3 = FiniteGroup.cyclic(3)
    e = GroupRingElement(C3, {0: 1, 1: -2, 2: 1})
    assert format_group_ring(e) == "1 - 2*x + x^2"
    assert format_group_ring(GroupRingElement.zero(C3)) == "0"


def test_group_ring_actions():
    C3 = FiniteGroup.cyclic(3)
    e = GroupRingElement(C3, {0: 1, 1: 1})
    assert e.right_act(1) == GroupRingElement(C3, {1: 1, 2: 1})
    assert e.left_act(2) == GroupRingElement(C3, {2: 1, 0: 1})


def test_group_ring_op_checks_carrier():
    C2, C3 = FiniteGroup.cyclic(2), FiniteGroup.cyclic(3)
    a = GroupRingElement.one(C2)
    assert group_ring_op(a, a, "add", C2) == 2
    with pytest.raises(TypeError):
        group_ring_op(a, GroupRingElement.one(C3), "mul", C2)
    with pytest.raises(TypeError):
        a + GroupRingElement.one(C3)


def test_module_kernel_of_one_plus_x():
    C2 = FiniteGroup.cyclic(2)
    m = [[GroupRingElement(C2, {0: 1, 1: 1})]]
    kernel = module_kernel(m, C2)
    assert kernel == [[GroupRingElement(C2, {0: 1, 1: -1})]]


def test_kernel_of_x_minus_one_is_the_norm():
    C3 = FiniteGroup.cyclic(3)
    m = [[GroupRingElement(C3, {1: 1, 0: -1})]]
    kernel = module_kernel(m, C3)
    assert kernel == [[GroupRingElement(C3, {0: 1, 1: 1, 2: 1})]]
    assert kernel_coinvariants(kernel, C3) == AbelianInvariants(1)
