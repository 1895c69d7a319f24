"""Normal form y^2 + (x^2+x)y + (a x^3 + b x + c)^2 = 0 of ordinary genus-2 curves in char 2.

Polynomials in x are dense coefficient lists, lowest degree first.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass

from tqdm import tqdm

from .fields import (
    MAX_DEGREE,
    ArtinSchreierError,
    FiniteFieldElem,
    GaloisField,
    solve_artin_schreier,
)

logger = logging.getLogger(__name__)

Dense = list[FiniteFieldElem]


class NotOrdinaryError(ValueError):
    def __init__(self, coefficients, reason: str) -> None:
        self.coefficients = coefficients
        self.reason = reason
        super().__init__(f"Not an ordinary curve y^2 + (x^2+x)y = f: {reason}")


@dataclass(frozen=True)
class NormalForm:
    a: FiniteFieldElem
    b: FiniteFieldElem
    c: FiniteFieldElem
    # y -> y + shift(x), then y -> y + e(x^2+x); e is None when it needs the quadratic extension
    shift: tuple[FiniteFieldElem, ...]
    e: FiniteFieldElem | None

    @property
    def constants(self) -> tuple[FiniteFieldElem, FiniteFieldElem, FiniteFieldElem]:
        return self.a, self.b, self.c

    @property
    def b_tilde(self) -> FiniteFieldElem:
        return self.a + self.b + self.c

    @property
    def extension(self) -> bool:
        return self.e is None


def _trim(p: Dense) -> Dense:
    while p and not p[-1]:
        p = p[:-1]
    return p


def _add(*polys: Dense) -> Dense:
    polys = tuple(p for p in polys if p)
    if not polys:
        return []
    out = [polys[0][0].field.zero] * max(len(p) for p in polys)
    for p in polys:
        for i, c in enumerate(p):
            out[i] = out[i] + c
    return _trim(out)


def _mul(p: Dense, q: Dense) -> Dense:
    if not p or not q:
        return []
    out = [p[0].field.zero] * (len(p) + len(q) - 1)
    for i, u in enumerate(p):
        for j, v in enumerate(q):
            out[i + j] = out[i + j] + u * v
    return _trim(out)


def _square(p: Dense) -> Dense:
    """Frobenius on coefficients; cross terms vanish in characteristic 2."""
    if not p:
        return []
    zero = p[0].field.zero
    out = [zero] * (2 * len(p) - 1)
    for i, u in enumerate(p):
        out[2 * i] = u * u
    return _trim(out)


def _scale(p: Dense, s: FiniteFieldElem) -> Dense:
    return _trim([s * c for c in p])


def _coefficients(f6: Sequence[FiniteFieldElem | int], field: GaloisField | None) -> Dense:
    if field is None:
        elems = [c for c in f6 if isinstance(c, FiniteFieldElem)]
        if not elems:
            raise ValueError("Pass field= when all coefficients are plain integers")
        field = elems[0].field
    if field.p != 2:
        raise ValueError(f"Normal forms are computed in characteristic 2, not {field.p}")
    coeffs = [c if isinstance(c, FiniteFieldElem) else field.constant(c) for c in f6]
    return _trim(coeffs) or [field.zero]


def normal_form(
    f6: Sequence[FiniteFieldElem | int], field: GaloisField | None = None
) -> NormalForm:
    """Reduce y^2 + (x^2+x)y + f6(x) = 0, f6 given lowest degree first."""
    f = _coefficients(f6, field)
    field = f[0].field
    zero = field.zero
    if len(f) > 7:
        raise NotOrdinaryError(f, f"degree {len(f) - 1} exceeds 6")
    f = f + [zero] * (7 - len(f))
    h = [zero, field.one, field.one]

    # y -> y + d(x) clears x^5, x^3, x; the x^2 coefficient of d is fixed to 0
    d = _trim([f[1], f[3], zero, f[5]])
    even = _add(f, _square(d), _mul(h, d))
    even = even + [zero] * (7 - len(even))
    if any(even[1::2]):
        raise ArithmeticError(f"odd part survived the first substitution: {even}")
    g = [even[2 * i].root() for i in range(4)]

    # y -> y + e(x^2+x) with e^2 + e = g2^2 moves g2^2 x^4 onto x^2
    try:
        e = solve_artin_schreier(g[2] * g[2])
    except ArtinSchreierError:
        logger.debug("Tr(%s) = 1: e lies in the quadratic extension of %s", g[2], field)
        e = None
    a, b, c = g[3], g[1] + g[2], g[0]
    nf = _trim([c, b, zero, a])
    if _add(even, _scale(_square(h), g[2] * g[2])) != _square(nf):
        raise ArithmeticError(f"normal form check failed for {f}")

    if not c:
        raise NotOrdinaryError(f, "c = 0: singular over x = 0")
    if not a:
        raise NotOrdinaryError(f, "a = 0: singular over x = infinity")
    if not a + b + c:
        raise NotOrdinaryError(f, "a + b + c = 0: singular over x = 1")
    return NormalForm(a, b, c, tuple(d), e)


def igusa_curve(alpha: FiniteFieldElem, beta: FiniteFieldElem, gamma: FiniteFieldElem) -> Dense:
    """f6 of y^2 + (x^2+x)y + gamma x^3(x+1)^2 + alpha x(x+1)^2 + beta x^2(x+1) = 0."""
    zero = alpha.field.zero
    return _trim([zero, alpha, beta, alpha + beta + gamma, zero, gamma])


def igusa_to_normal(
    alpha: FiniteFieldElem, beta: FiniteFieldElem, gamma: FiniteFieldElem
) -> NormalForm:
    """Normal form (gamma, alpha + beta + gamma, alpha), checked through y -> y + P + eps(x^2+x)."""
    field = alpha.field
    zero = field.zero
    f = igusa_curve(alpha, beta, gamma)
    s = alpha + beta + gamma
    p = _trim([alpha, s, zero, gamma])
    h = [zero, field.one, field.one]

    try:
        eps = solve_artin_schreier(gamma)
    except ArtinSchreierError:
        if 2 * field.k > MAX_DEGREE:
            raise
        eps = None
        logger.debug("Tr(gamma) = 1: eps adjoined by eps^2 = eps + gamma over %s", field)

    if eps is not None:
        u = _add(p, _scale(h, eps))
        shifted = _add(_square(u), _mul(h, u), f)
    else:
        # u = P + eps h, eps^2 = eps + gamma: u^2 + hu = P^2 + hP + gamma h^2 + 2 eps h^2
        shifted = _add(_square(p), _scale(_square(h), gamma), _mul(h, p), f)
    if shifted != _square(p):
        raise ArithmeticError(f"Igusa substitution failed for ({alpha}, {beta}, {gamma})")

    result = normal_form(f, field)
    if result.constants != (gamma, s, alpha):
        raise ArithmeticError(
            f"normal form {result.constants} differs from ({gamma}, {s}, {alpha})"
        )
    return result


# --- round trips ----------------------------------------------------------------------


def random_ordinary(field: GaloisField, rng) -> tuple[FiniteFieldElem, ...]:
    """Random (a, b, c) with a, c and a + b + c all nonzero."""
    while True:
        a, b, c = (field.random(rng) for _ in range(3))
        if a and c and a + b + c:
            return a, b, c


def random_curve(field: GaloisField, rng) -> tuple[Dense, tuple[FiniteFieldElem, ...]]:
    """f6 = N^2 + D^2 + hD for a random ordinary N = a x^3 + b x + c and a random D of degree 3."""
    a, b, c = random_ordinary(field, rng)
    zero = field.zero
    h = [zero, field.one, field.one]
    shift = [field.random(rng) for _ in range(4)]
    f = _add(_square(_trim([c, b, zero, a])), _square(shift), _mul(h, shift))
    return f or [zero], (a, b, c)


def normal_form_roundtrip(
    field: GaloisField, count: int, rng, progress: bool = False
) -> list[str]:
    """Mismatches between normal_form and the constants a random curve was built from."""
    failures = []
    for _ in tqdm(range(count), desc=f"normal_form {field}", leave=False, disable=not progress):
        f, wanted = random_curve(field, rng)
        got = normal_form(f, field).constants
        if got != wanted:
            failures.append(f"{[str(x) for x in f]}: {[str(x) for x in got]}")
    return failures


def igusa_roundtrip(
    field: GaloisField, count: int, rng, progress: bool = False
) -> tuple[list[str], int]:
    """Mismatches over random ordinary Igusa forms, and how many needed the extension."""
    failures, extended = [], 0
    for _ in tqdm(range(count), desc=f"igusa {field}", leave=False, disable=not progress):
        gamma, s, alpha = random_ordinary(field, rng)
        beta = alpha + s + gamma
        try:
            result = igusa_to_normal(alpha, beta, gamma)
        except (ArithmeticError, NotOrdinaryError) as e:
            failures.append(f"({alpha}, {beta}, {gamma}): {e}")
            continue
        extended += result.extension
    return failures, extended
