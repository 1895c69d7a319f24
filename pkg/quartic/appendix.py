"""Plane and normal-form models of the ordinary Kummer quartic in characteristic 2."""

from __future__ import annotations

from .base import CharPoly, Substitution, SubstitutionIdentity, poly_ring

DOUBLE_COVER_VARS = "x,y,z,w,t,a,bt,c"
PLANE_VARS = "x,y,z,t,x1,x2,a,bt,b,c"


def _double_cover(x, y, z, t, a, bt, c) -> CharPoly:
    """t^2 + xyz t + (x+y+z)^2 (a xy + bt xz + c yz)^2."""
    return t**2 + x * y * z * t + (x + y + z) ** 2 * (a * x * y + bt * x * z + c * y * z) ** 2


def appendix_substitution() -> SubstitutionIdentity:
    x, y, z, w, t, a, bt, c = poly_ring(DOUBLE_COVER_VARS, 2)
    source = _double_cover(x, y, z, t, a, bt, c)
    target = ((x * w + c * y * z) + (y * w + bt * x * z) + (z * w + a * x * y)) ** 2 + x * y * z * w
    case = Substitution(
        "t = (x+y+z)^2 w", source, {t: (x + y + z) ** 2 * w}, target, (x + y + z) ** 2, "(x+y+z)^2"
    )
    return SubstitutionIdentity(
        "appendix_substitution", 2, "the double plane becomes the quartic in normal form", [case]
    )


def appendix_plane_model() -> SubstitutionIdentity:
    x, y, z, t, x1, x2, a, bt, b, c = poly_ring(PLANE_VARS, 2)
    source = _double_cover(x, y, z, t, a, bt, c)
    chart = {x: x1 * x2, y: (x1 + 1) * (x2 + 1), z: 1, bt: a + b + c}
    inner = a * x1 * x2 * (x1 + x2 + x1 * x2) + b * x1 * x2 + c * (x1 + x2 + 1)
    target = t**2 + (x1**2 + x1) * (x2**2 + x2) * t + (x1 + x2) ** 2 * inner**2
    case = Substitution("(x1 x2, (x1+1)(x2+1), 1), bt = a+b+c", source, chart, target)
    return SubstitutionIdentity(
        "appendix_plane_model", 2, "affine model as a quotient of the product of two curves", [case]
    )


def corollary_scaling() -> SubstitutionIdentity:
    """Rescaling by square roots of the parameters identifies both quartic normal forms."""
    x, y, z, w, sa, sb, sc = poly_ring("x,y,z,w,sa,sb,sc", 2)
    # (a, bt, c) = (gamma, beta, alpha)
    source = (
        (x * w + sa**2 * y * z) + (y * w + sb**2 * x * z) + (z * w + sc**2 * x * y)
    ) ** 2 + x * y * z * w
    scaling = {x: sa * x, y: sb * y, z: sc * z, w: sa * sb * sc * w}
    target = (
        sa**2 * (x * w + y * z) ** 2
        + sb**2 * (y * w + x * z) ** 2
        + sc**2 * (z * w + x * y) ** 2
        + x * y * z * w
    )
    case = Substitution(
        "(sa x, sb y, sc z, sa sb sc w)",
        source,
        scaling,
        target,
        (sa * sb * sc) ** 2,
        "alpha beta gamma",
    )
    return SubstitutionIdentity(
        "corollary_scaling", 2, "normal-form quartic is projectively the Kummer quartic", [case]
    )


def igusa_chain() -> SubstitutionIdentity:
    """An Igusa-form genus-2 curve is a change of y away from the ordinary normal form."""
    x, y, al, be, e = poly_ring("x,y,al,be,e", 2)
    gamma = e**2 + e
    s = al + be + gamma
    h = x**2 + x
    curve = (
        y**2
        + h * y
        + gamma * x**3 * (x + 1) ** 2
        + al * x * (x + 1) ** 2
        + be * x**2 * (x + 1)
    )
    shift = {y: y + gamma * x**3 + s * x + al + e * h}
    target = y**2 + h * y + (gamma * x**3 + s * x + al) ** 2
    case = Substitution("y + gamma x^3 + s x + alpha + e(x^2+x)", curve, shift, target)
    return SubstitutionIdentity(
        "igusa_chain", 2, "Igusa form to the curve y^2 + (x^2+x)y = (a x^3 + b x + c)^2", [case]
    )
