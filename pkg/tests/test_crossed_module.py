import numpy as np
import pytest

from core.algebra import FiniteGroup, FreeWord, GroupPresentation
from core.crossed_module import (
    CrossedModule,
    FreeCrossedModule,
    FreeCrossedModuleElement,
    action_on_fcm,
    consequences,
    fcm_boundary,
    format_fcm,
    kernel_and_image,
    make_standard,
    peiffer_swap,
    second_homotopy_crossed_module,
    validate,
)
from core.errors import PreconditionFailed

x = FreeWord.generator(0)
y = FreeWord.generator(1)
r0 = FreeCrossedModuleElement.generator(0)


def broken_s3():
    """μ trivial y acción trivial sobre un M no abeliano: falla CM2"""
    M, P = FiniteGroup.symmetric(3), FiniteGroup.trivial()
    return CrossedModule(M, P, np.zeros(6, dtype=np.int64), np.arange(6).reshape(6, 1), name="broken")


def test_catalogue_crossed_modules_are_valid(catalogue):
    modules = catalogue.crossed_modules()
    assert len(modules) >= 10
    for name, xm in modules:
        report = validate(xm)
        assert report.ok, (name, report.counterexamples)
        assert all(consequences(xm).values()), name


def test_broken_module_reports_cm2():
    report = validate(broken_s3())
    assert report.cm1_ok
    assert not report.cm2_ok
    assert "cm2" in report.counterexamples
    assert len(report.counterexamples["cm2"]) <= 5
    assert not consequences(broken_s3())["ker_central"]


def test_normal_inclusion():
    S3 = FiniteGroup.symmetric(3)
    rotation = next(a for a in S3.elements() if S3.element_order(a) == 3)
    xm = make_standard("normal_inclusion", P=S3, subgroup=[rotation])
    assert xm.M.order == 3
    assert validate(xm).ok
    info = kernel_and_image(xm)
    assert info.kernel == [0]
    assert info.coker_order == 2
    reflection = next(a for a in S3.elements() if S3.element_order(a) == 2)
    with pytest.raises(PreconditionFailed):
        make_standard("normal_inclusion", P=S3, subgroup=[reflection])


def test_inner_automorphisms():
    for M, kernel_size, coker in [(FiniteGroup.cyclic(3), 3, 2), (FiniteGroup.symmetric(3), 1, 1),
                                  (FiniteGroup.quaternion(), 2, 6)]:
        xm = make_standard("inner_automorphism", M=M)
        assert validate(xm).ok
        info = kernel_and_image(xm)
        assert len(info.kernel) == kernel_size
        assert info.coker_order == coker


def test_zero_module_requires_abelian_module():
    S3, C2 = FiniteGroup.symmetric(3), FiniteGroup.cyclic(2)
    with pytest.raises(PreconditionFailed):
        make_standard("zero_module", M=S3, P=C2, action=np.tile(np.arange(6)[:, None], (1, 2)))
    C3 = FiniteGroup.cyclic(3)
    inversion = np.array([[0, 0], [1, 2], [2, 1]])
    xm = make_standard("zero_module", M=C3, P=C2, action=inversion)
    assert validate(xm).ok
    with pytest.raises(PreconditionFailed):
        make_standard("zero_module", M=C3, P=C2, action=np.array([[0, 0], [1, 1], [2, 1]]))


def test_central_extension():
    C4, C2 = FiniteGroup.cyclic(4), FiniteGroup.cyclic(2)
    xm = make_standard("central_epi", M=C4, P=C2, mu=[0, 1, 0, 1])
    assert validate(xm).ok
    assert kernel_and_image(xm).kernel == [0, 2]
    with pytest.raises(PreconditionFailed):
        make_standard("central_epi", M=C4, P=C4, mu=[0, 2, 0, 2])


def test_unknown_constructor():
    with pytest.raises(PreconditionFailed):
        make_standard("nonsense")


# ---------------------------------------------------------------------------
# Módulo cruzado libre
# ---------------------------------------------------------------------------

def test_fcm_boundary_and_action():
    relators = (x ** 2,)
    e = action_on_fcm(r0, y)
    assert fcm_boundary(e, relators) == y.inverse() * x ** 2 * y
    assert fcm_boundary(r0 * r0.inverse(), relators).is_identity
    with pytest.raises(PreconditionFailed):
        fcm_boundary(FreeCrossedModuleElement.generator(3), relators)


def test_identity_among_relations_in_c2():
    C = FreeCrossedModule(GroupPresentation(("x",), (x ** 2,)))
    identity = action_on_fcm(r0, x) * r0.inverse()
    assert C.boundary(identity).is_identity
    assert C.is_identity_among_relations(identity, 100)
    assert not C.is_identity_among_relations(r0 * r0.inverse(), 100)


def test_second_homotopy_module_of_c3():
    C = second_homotopy_crossed_module(GroupPresentation(("x",), (x ** 3,), name="C3"))
    assert C.relator_names == ("r0",)
    assert C.boundary(r0) == x ** 3
    assert C.identities(100).rank == 2


def test_peiffer_pairs_are_equal():
    p = GroupPresentation(("x", "y"), (x ** 2, y ** 3, (x * y) ** 2))
    C = FreeCrossedModule(p)
    words = [FreeWord(), x, y, x * y.inverse()]
    for r in range(3):
        for s in range(3):
            for u in words:
                for v in words:
                    left, right = peiffer_swap(r, u, s, v, p.relators)
                    assert C.equal(left, right, 4096)


def test_fcm_formatting():
    p = GroupPresentation(("x", "y"), (x ** 2, y ** 3))
    e = action_on_fcm(r0, x) * FreeCrossedModuleElement.generator(1, -1, x * y)
    assert format_fcm(e, p) == "r0@x*(r1@(x*y))^-1"
    assert format_fcm(FreeCrossedModuleElement(), p) == "1"
    assert format_fcm(r0.inverse(), p) == "r0^-1"
