"""Involutions and singular points of the Kummer quartics of genus-2 Jacobians in char 2.

Square roots of the curve parameters are adjoined as variables: alpha = sa^2 and so on.
"""

from __future__ import annotations

from .base import (
    CharPoly,
    SingularPointsIdentity,
    Substitution,
    SubstitutionIdentity,
    poly_ring,
)

ORDINARY_VARS = "x,y,z,w,sa,sb,sc"
PRANK1_VARS = "x,y,z,w,alpha,beta"


def ordinary_quartic() -> CharPoly:
    x, y, z, w, sa, sb, sc = poly_ring(ORDINARY_VARS, 2)
    return (sa * (x * y + z * w) + sb * (x * z + y * w) + sc * (x * w + y * z)) ** 2 + x * y * z * w


def prank1_quartic() -> CharPoly:
    x, y, z, w, alpha, beta = poly_ring(PRANK1_VARS, 2)
    return (
        beta**2 * x**4
        + alpha**2 * x**2 * z**2
        + x**2 * z * w
        + x * y * z**2
        + y**2 * w**2
        + z**4
    )


def cremona_ordinary() -> SubstitutionIdentity:
    x, y, z, w, *_ = poly_ring(ORDINARY_VARS, 2)
    f = ordinary_quartic()
    cremona = {x: y * z * w, y: x * z * w, z: x * y * w, w: x * y * z}
    case = Substitution("(yzw, xzw, xyw, xyz)", f, cremona, f, (x * y * z * w) ** 2, "(xyzw)^2")
    return SubstitutionIdentity(
        "cremona_ordinary", 2, "Cremona involution preserving the ordinary Kummer quartic", [case]
    )


def transl_phi1_phi2() -> SubstitutionIdentity:
    x, y, z, w, *_ = poly_ring(ORDINARY_VARS, 2)
    f = ordinary_quartic()
    cases = [
        Substitution("phi1 = (y, x, w, z)", f, {x: y, y: x, z: w, w: z}, f),
        Substitution("phi2 = (z, w, x, y)", f, {x: z, y: w, z: x, w: y}, f),
    ]
    return SubstitutionIdentity(
        "transl_phi1_phi2", 2, "translations generating (Z/2)^2 on the ordinary quartic", cases
    )


def psi_equal_params() -> SubstitutionIdentity:
    x, y, z, w, sa, sb, sc = poly_ring(ORDINARY_VARS, 2)
    f = ordinary_quartic()
    cases = []
    for label, params, swap in (
        ("sb = sa, (x, z, y, w)", {sb: sa}, {y: z, z: y}),
        ("sc = sb, (x, y, w, z)", {sc: sb}, {z: w, w: z}),
        ("sc = sa, (x, w, z, y)", {sc: sa}, {y: w, w: y}),
    ):
        special = f.substitute(params)
        cases.append(Substitution(label, special, swap, special))
    return SubstitutionIdentity(
        "psi_equal_params", 2, "coordinate swaps acting when two parameters coincide", cases
    )


def singular_points_ordinary() -> SingularPointsIdentity:
    x, y, z, w, *_ = poly_ring(ORDINARY_VARS, 2)
    points = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]
    return SingularPointsIdentity(
        "singular_points_ordinary",
        2,
        "four rational double points at the coordinate points",
        ordinary_quartic(),
        (x, y, z, w),
        points,
    )


def prank1_sigma() -> SubstitutionIdentity:
    x, y, z, w, _alpha, beta = poly_ring(PRANK1_VARS, 2)
    f = prank1_quartic()
    sigma = {x: x * z**2, y: y * z**2, z: beta * x**2 * z, w: beta * x**2 * w}
    cofactor = beta**2 * x**4 * z**4
    label = "(xz^2, yz^2, beta x^2 z, beta x^2 w)"
    case = Substitution(label, f, sigma, f, cofactor, "beta^2 x^4 z^4")
    return SubstitutionIdentity(
        "prank1_sigma", 2, "Cremona involution of the p-rank one quartic", [case]
    )


def prank1_phi() -> SubstitutionIdentity:
    x, y, z, w, _alpha, beta = poly_ring(PRANK1_VARS, 2)
    f = prank1_quartic()
    phi = {x: z, y: w, z: beta * x, w: beta * y}
    case = Substitution("(z, w, beta x, beta y)", f, phi, f, beta**2, "beta^2")
    return SubstitutionIdentity(
        "prank1_phi", 2, "projective involution of the p-rank one quartic", [case]
    )


def prank1_singular_points() -> SingularPointsIdentity:
    x, y, z, w, *_ = poly_ring(PRANK1_VARS, 2)
    return SingularPointsIdentity(
        "prank1_singular_points",
        2,
        "two singular points of the p-rank one quartic",
        prank1_quartic(),
        (x, y, z, w),
        [(0, 0, 0, 1), (0, 1, 0, 0)],
    )
