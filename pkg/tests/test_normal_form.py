import numpy as np
import pytest

from quartic.fields import GaloisField
from quartic.normal_form import (
    NotOrdinaryError,
    igusa_curve,
    igusa_roundtrip,
    igusa_to_normal,
    normal_form,
    normal_form_roundtrip,
    random_curve,
)


@pytest.fixture
def gf16():
    return GaloisField(2, 4)


def test_square_of_normal_polynomial_is_already_normal(gf16):
    # (x^3 + x + 1)^2, lowest degree first
    nf = normal_form([1, 0, 1, 0, 0, 0, 1], gf16)
    assert nf.constants == (gf16.one, gf16.one, gf16.one)
    assert nf.b_tilde == gf16.one
    assert nf.shift == ()
    assert not nf.extension


def test_random_curves_recover_their_constants(gf16):
    rng = np.random.default_rng(7)
    for _ in range(25):
        f, wanted = random_curve(gf16, rng)
        assert normal_form(f, gf16).constants == wanted


def test_normal_form_roundtrip_over_gf256():
    rng = np.random.default_rng(11)
    assert normal_form_roundtrip(GaloisField(2, 8), 50, rng) == []


def test_igusa_to_normal(gf16):
    one = gf16.one
    assert igusa_curve(one, one, one) == [gf16.zero, one, one, one, gf16.zero, one]
    nf = igusa_to_normal(one, one, one)
    assert nf.constants == (one, one, one)
    assert not nf.extension


def test_igusa_with_trace_one_gamma_needs_the_extension(gf16):
    one, tau = gf16.one, gf16.trace_one()
    nf = igusa_to_normal(one, one, tau)
    assert nf.constants == (tau, tau, one)
    assert nf.extension


def test_igusa_roundtrip(gf16):
    failures, extended = igusa_roundtrip(gf16, 50, np.random.default_rng(3))
    assert failures == []
    assert 0 <= extended <= 50


def test_singular_curves_are_rejected(gf16):
    # (x^3 + x)^2: c = 0
    with pytest.raises(NotOrdinaryError, match="c = 0"):
        normal_form([0, 0, 1, 0, 0, 0, 1], gf16)
    # (x + 1)^2: a = 0
    with pytest.raises(NotOrdinaryError, match="a = 0"):
        normal_form([1, 0, 1], gf16)
    with pytest.raises(NotOrdinaryError, match="degree 7"):
        normal_form([1] * 8, gf16)


def test_coefficients_need_a_field_of_characteristic_2():
    with pytest.raises(ValueError, match="field="):
        normal_form([1, 0, 1])
    with pytest.raises(ValueError, match="characteristic 2"):
        normal_form([1], GaloisField(3, 2))
