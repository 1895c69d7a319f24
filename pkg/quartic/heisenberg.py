"""Heisenberg-invariant quartics reduced to characteristic 2."""

from __future__ import annotations

from .base import Substitution, SubstitutionIdentity, poly_ring

QUOTIENT_VARS = "x,y,z,w,A,B,C,D"


def frobenius_quotient() -> SubstitutionIdentity:
    """With E = 0 the Goepel quotient, pulled back along squaring, is the square of S."""
    x, y, z, w, A, B, C, D = poly_ring(QUOTIENT_VARS, 2)
    pairs = A * (x * y + z * w) + B * (x * z + y * w) + C * (x * w + y * z)
    quotient = pairs**2 - D**2 * x * y * z * w
    surface = (
        A * (x**2 * y**2 + z**2 * w**2)
        + B * (x**2 * z**2 + y**2 * w**2)
        + C * (x**2 * w**2 + y**2 * z**2)
        + D * x * y * z * w
    )
    squaring = {x: x**2, y: y**2, z: z**2, w: w**2}
    case = Substitution("(x^2, y^2, z^2, w^2)", quotient, squaring, surface**2)
    return SubstitutionIdentity(
        "frobenius_quotient", 2, "the quotient map to S/F is the Frobenius map", [case]
    )


def delta0_mod2() -> SubstitutionIdentity:
    A, B, C, D, E = poly_ring("A,B,C,D,E", 2)
    delta0 = (4 * A**2 + 4 * B**2 + 4 * C**2 - D**2 - 16 * E**2) * E - 4 * A * B * C
    case = Substitution("reduction mod 2", delta0, {}, D**2 * E)
    return SubstitutionIdentity(
        "delta0_mod2", 2, "the invariant Delta_0 reduces to D^2 E", [case]
    )
