"""Dual curves of the plane models appearing in characteristic 3."""

from __future__ import annotations

from .base import Substitution, SubstitutionIdentity, poly_ring


def kkm_ordinary_dual() -> SubstitutionIdentity:
    X, Y, Z, x, y, z, lam = poly_ring("X,Y,Z,x,y,z,lam", 3)
    source = (Y * Z + Z * X + X * Y) ** 3 - lam * X**2 * Y**2 * Z**2
    target = (x + y + z) ** 3 - lam * x * y * z
    cremona = {X: y * z, Y: z * x, Z: x * y}
    case = Substitution("(yz, zx, xy)", source, cremona, target, (x * y * z) ** 3, "(xyz)^3")
    return SubstitutionIdentity(
        "kkm_ordinary_dual", 3, "dual of the ordinary plane cubic under the Cremona map", [case]
    )


def kkm_supersingular_dual() -> SubstitutionIdentity:
    X, Y, Z, x, y, z = poly_ring("X,Y,Z,x,y,z", 3)
    conic = Y**2 - X * Z
    source = X**4 * Y**2 - conic**3 + conic * X**4
    target = y**2 * z - x**3 + x * z**2
    mapping = {X: z**2, Y: -y * z, Z: y**2 - x * z}
    case = Substitution("(z^2, -yz, y^2 - xz)", source, mapping, target, z**9, "z^9")
    return SubstitutionIdentity(
        "kkm_supersingular_dual", 3, "sextic pulled back to the supersingular cubic", [case]
    )
