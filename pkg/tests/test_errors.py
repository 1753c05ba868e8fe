import pytest

from core.errors import (
    IncidenceMismatch,
    InputError,
    MathFailure,
    NotFree,
    ParseError,
    Unbounded,
    UnknownSuite,
    XkitError,
)


def test_exit_codes():
    assert ParseError("x").exit_code == 2
    assert UnknownSuite("x").exit_code == 2
    assert IncidenceMismatch("x").exit_code == 1
    assert Unbounded("x", bound=5).exit_code == 3


def test_hierarchy():
    assert issubclass(NotFree, InputError)
    assert issubclass(IncidenceMismatch, MathFailure)
    for cls in (InputError, MathFailure, Unbounded):
        assert issubclass(cls, XkitError)


def test_context_is_reachable_as_attributes():
    exc = NotFree("cara ocupada", witness=("0*", "00"))
    assert exc.witness == ("0*", "00")
    assert exc.context == {"witness": ("0*", "00")}
    with pytest.raises(AttributeError):
        exc.missing


def test_unbounded_carries_bound():
    exc = Unbounded("sin estabilizar", bound=10)
    assert exc.bound == 10
    assert str(exc) == "sin estabilizar"


def test_incidence_mismatch_pair():
    exc = IncidenceMismatch("no encaja", pair=((1, 1), (1, 2)))
    assert exc.pair == ((1, 1), (1, 2))
