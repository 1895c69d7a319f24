import pytest

from quartic import IDENTITY_IDS, load_identity, poly_ring, verify_identity
from quartic.base import NotDivisibleError
from quartic.fields import ArtinSchreierError, GaloisField, solve_artin_schreier


@pytest.fixture
def gf16():
    return GaloisField(2, 4)


def test_frobenius_is_additive_in_char_2():
    x, y = poly_ring("x,y", 2)
    assert (x + y) ** 2 == x**2 + y**2
    assert x.characteristic == 2
    assert x.variables == ["x", "y"]


def test_divide_exact_in_char_3():
    x, y = poly_ring("x,y", 3)
    assert (x**2 - y**2).divide_exact(x - y) == x + y
    with pytest.raises(NotDivisibleError) as info:
        (x**2 + y).divide_exact(x)
    assert info.value.remainder == y


def test_only_characteristics_2_and_3():
    with pytest.raises(ValueError, match="2 or 3"):
        poly_ring("x", 5)


def test_rings_do_not_mix():
    (x2,) = poly_ring("x", 2)
    (x3,) = poly_ring("x", 3)
    with pytest.raises(ValueError, match="different rings"):
        x2 + x3


def test_substitute_is_simultaneous():
    x, y = poly_ring("x,y", 2)
    assert (x**2 + y).substitute({x: y, y: 1}) == y**2 + 1
    assert (x * y).substitute({x: y, y: x}) == x * y


def test_diff_drops_vanishing_terms():
    x, y = poly_ring("x,y", 2)
    assert (x**3 + x * y).diff(x) == x**2 + y
    assert not (x**2).diff(x)


def test_evaluate(gf16):
    x, y = poly_ring("x,y", 2)
    a = gf16.from_int(2)
    assert not (x * y + 1).evaluate({"x": a, "y": a.inverse()}, gf16)
    assert (x + y).evaluate({"x": a, "y": gf16.zero}, gf16) == a


def test_field_arithmetic(gf16):
    a = gf16.from_int(2)
    assert a * a.inverse() == gf16.one
    assert a**15 == gf16.one
    assert a.root().frobenius() == a
    assert str(gf16.from_int(10)) == "0xa"
    with pytest.raises(ZeroDivisionError):
        gf16.zero.inverse()
    with pytest.raises(ValueError, match="does not encode"):
        gf16.from_int(16)


def test_char_3_field():
    gf9 = GaloisField(3, 2)
    x = gf9.from_int(3)
    assert x * x == gf9.constant(-1)
    assert gf9.one.trace() == 2


def test_fields_do_not_mix(gf16):
    with pytest.raises(ValueError, match="Cannot mix"):
        gf16.one + GaloisField(2, 3).one


def test_extension_degree_is_bounded():
    with pytest.raises(ValueError, match="outside"):
        GaloisField(2, 17)


def test_artin_schreier(gf16):
    assert gf16.one.trace() == 0
    y = solve_artin_schreier(gf16.one)
    assert y * y + y == gf16.one
    tau = gf16.trace_one()
    assert tau.trace() == 1
    with pytest.raises(ArtinSchreierError):
        solve_artin_schreier(tau)


def test_artin_schreier_needs_trace_zero():
    gf8 = GaloisField(2, 3)
    assert gf8.one.trace() == 1
    with pytest.raises(ArtinSchreierError):
        solve_artin_schreier(gf8.one)
    with pytest.raises(ValueError, match="characteristic 2"):
        solve_artin_schreier(GaloisField(3, 2).one)


@pytest.mark.parametrize("name", IDENTITY_IDS)
def test_identities_verify(name):
    result = verify_identity(name, points=10)
    assert result.id == name
    assert result.screened == 10
    assert result.cofactors


def test_identities_carry_anchors():
    for name in IDENTITY_IDS:
        identity = load_identity(name)
        assert identity.characteristic in (2, 3)
        assert identity.anchor


def test_unknown_identity():
    with pytest.raises(ValueError, match="Unknown identity"):
        load_identity("kummer_supersingular")
