"""Polynomials over F_2 / F_3 and the identity-check interface of the catalog."""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from sympy.polys.domains import GF
from sympy.polys.rings import PolyElement, ring

from .fields import SCREENING_FIELDS, FiniteFieldElem, GaloisField

logger = logging.getLogger(__name__)


class NotDivisibleError(ArithmeticError):
    def __init__(self, remainder: CharPoly) -> None:
        self.remainder = remainder
        super().__init__(f"Division leaves remainder {remainder}")


class IdentityFailedError(AssertionError):
    def __init__(self, identity_id: str, witness) -> None:
        self.identity_id = identity_id
        self.witness = witness
        super().__init__(f"Identity {identity_id} fails: {witness}")


@lru_cache(maxsize=None)
def _ring(names: str, p: int):
    if p not in (2, 3):
        raise ValueError(f"Characteristic must be 2 or 3, got {p}")
    return ring(names, GF(p))


def poly_ring(names: str, p: int) -> tuple[CharPoly, ...]:
    """Generators of F_p[names]; the same names and p always give the same ring."""
    _r, *gens = _ring(names, p)
    return tuple(CharPoly(g) for g in gens)


class CharPoly:
    """A polynomial over F_p, wrapping a sympy PolyElement."""

    __slots__ = ("element",)

    def __init__(self, element: PolyElement) -> None:
        self.element = element

    @property
    def characteristic(self) -> int:
        return int(self.element.ring.domain.mod)

    @property
    def variables(self) -> list[str]:
        return [str(s) for s in self.element.ring.symbols]

    def _lift(self, other) -> PolyElement:
        if isinstance(other, CharPoly):
            if other.element.ring != self.element.ring:
                raise ValueError("Polynomials live in different rings")
            return other.element
        return self.element.ring(other)

    def __add__(self, other) -> CharPoly:
        return CharPoly(self.element + self._lift(other))

    __radd__ = __add__

    def __sub__(self, other) -> CharPoly:
        return CharPoly(self.element - self._lift(other))

    def __rsub__(self, other) -> CharPoly:
        return CharPoly(self._lift(other) - self.element)

    def __neg__(self) -> CharPoly:
        return CharPoly(-self.element)

    def __mul__(self, other) -> CharPoly:
        return CharPoly(self.element * self._lift(other))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> CharPoly:
        return CharPoly(self.element**n)

    def __eq__(self, other) -> bool:
        if isinstance(other, (CharPoly, int)):
            return not any((self.element - self._lift(other)).values())
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.element)

    def __bool__(self) -> bool:
        return any(self.element.values())

    def __str__(self) -> str:
        return str(self.element.as_expr()) if self else "0"

    def __repr__(self) -> str:
        return f"CharPoly({self}, p={self.characteristic})"

    def substitute(self, mapping: dict[CharPoly, CharPoly | int]) -> CharPoly:
        """Simultaneous substitution of generators by polynomials."""
        pairs = [(gen.element, self._lift(value)) for gen, value in mapping.items()]
        return CharPoly(self.element.compose(pairs)) if pairs else self

    def divide_exact(self, other: CharPoly) -> CharPoly:
        quotient, remainder = self.element.div(self._lift(other))
        if any(remainder.values()):
            raise NotDivisibleError(CharPoly(remainder))
        return CharPoly(quotient)

    def diff(self, gen: CharPoly) -> CharPoly:
        d = self.element.diff(gen.element)
        return CharPoly(d.ring.from_dict({m: c for m, c in d.items() if c}))

    def evaluate(self, point: dict[str, FiniteFieldElem], gf: GaloisField) -> FiniteFieldElem:
        names = self.variables
        powers: dict[tuple[int, int], FiniteFieldElem] = {}
        total = gf.zero
        for monom, coeff in self.element.terms():
            term = gf.constant(int(coeff) % self.characteristic)
            for i, e in enumerate(monom):
                if e:
                    if (i, e) not in powers:
                        powers[(i, e)] = point[names[i]] ** e
                    term = term * powers[(i, e)]
            total = total + term
        return total


# --- catalog entries ----------------------------------------------------------------


@dataclass
class IdentityResult:
    id: str
    cofactors: list[str]
    screened: int


class IdentityCheck(ABC):
    id: str
    characteristic: int
    anchor: str

    @abstractmethod
    def screen(self, gf: GaloisField, rng: np.random.Generator, count: int) -> None:
        """Evaluate both sides at random points; raise IdentityFailedError on a mismatch."""

    @abstractmethod
    def verify_exact(self) -> list[str]:
        """Exact polynomial verification; returns the cofactor labels."""

    def verify(self, points: int = 100, seed: int = 0) -> IdentityResult:
        gf = SCREENING_FIELDS[self.characteristic]
        rng = np.random.default_rng(seed)
        self.screen(gf, rng, points)
        logger.debug("%s: %d random points over %s agree", self.id, points, gf)
        return IdentityResult(self.id, self.verify_exact(), points)


def _random_point(names: list[str], gf: GaloisField, rng) -> dict[str, FiniteFieldElem]:
    return {n: gf.random(rng) for n in names}


def _witness(case: str, point: dict[str, FiniteFieldElem]) -> dict:
    return {"case": case, "point": {k: str(v) for k, v in point.items()}}


@dataclass
class Substitution:
    """source(mapping) = cofactor * target; reports print the cofactor as cofactor_label."""

    label: str
    source: CharPoly
    mapping: dict[CharPoly, CharPoly | int]
    target: CharPoly
    cofactor: CharPoly | int = 1
    cofactor_label: str = "1"


class SubstitutionIdentity(IdentityCheck):
    def __init__(self, id: str, characteristic: int, anchor: str, cases: list[Substitution]):
        self.id = id
        self.characteristic = characteristic
        self.anchor = anchor
        self.cases = cases

    def screen(self, gf: GaloisField, rng: np.random.Generator, count: int) -> None:
        for _ in range(count):
            for case in self.cases:
                point = _random_point(case.source.variables, gf, rng)
                image = dict(point)
                for gen, value in case.mapping.items():
                    image[str(gen)] = _value_at(value, point, gf)
                lhs = case.source.evaluate(image, gf)
                cofactor = _value_at(case.cofactor, point, gf)
                if lhs != cofactor * case.target.evaluate(point, gf):
                    raise IdentityFailedError(self.id, _witness(case.label, point))

    def verify_exact(self) -> list[str]:
        labels = []
        for case in self.cases:
            lhs = case.source.substitute(case.mapping)
            try:
                quotient = lhs.divide_exact(case.target)
            except NotDivisibleError as e:
                raise IdentityFailedError(self.id, f"{case.label}: remainder {e.remainder}") from e
            if quotient != case.cofactor:
                raise IdentityFailedError(self.id, f"{case.label}: cofactor {quotient}")
            labels.append(case.cofactor_label)
        return labels


def _value_at(value, point, gf: GaloisField) -> FiniteFieldElem:
    if isinstance(value, int):
        return gf.constant(value)
    return value.evaluate(point, gf)


class SingularPointsIdentity(IdentityCheck):
    """The polynomial and all its partials in the coordinates vanish at each point."""

    def __init__(
        self,
        id: str,
        characteristic: int,
        anchor: str,
        poly: CharPoly,
        coordinates: tuple[CharPoly, ...],
        points: list[tuple[int, ...]],
    ):
        self.id = id
        self.characteristic = characteristic
        self.anchor = anchor
        self.poly = poly
        self.coordinates = coordinates
        self.points = points

    def _conditions(self) -> list[CharPoly]:
        return [self.poly, *(self.poly.diff(v) for v in self.coordinates)]

    def screen(self, gf: GaloisField, rng: np.random.Generator, count: int) -> None:
        conditions = self._conditions()
        for _ in range(count):
            params = _random_point(self.poly.variables, gf, rng)
            for pt in self.points:
                point = {**params, **{str(v): gf.constant(c) for v, c in zip(self.coordinates, pt)}}
                if any(f.evaluate(point, gf) for f in conditions):
                    raise IdentityFailedError(self.id, _witness(str(pt), point))

    def verify_exact(self) -> list[str]:
        conditions = self._conditions()
        for pt in self.points:
            mapping = dict(zip(self.coordinates, pt))
            values = [f.substitute(mapping) for f in conditions]
            if any(values):
                raise IdentityFailedError(self.id, f"{pt}: {[str(v) for v in values]}")
        return [f"{len(self.points)} singular points"]
