"""Finite fields F_{p^k} in a polynomial basis, on top of sympy's galoistools."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

from sympy.polys.domains import ZZ
from sympy.polys.galoistools import (
    gf_add,
    gf_irreducible_p,
    gf_mul,
    gf_neg,
    gf_pow_mod,
    gf_rem,
    gf_strip,
    gf_sub,
)

MAX_DEGREE = 16


class ArtinSchreierError(ArithmeticError):
    def __init__(self, value: FiniteFieldElem) -> None:
        self.value = value
        super().__init__(f"y^2 + y = {value} has no root in {value.field} (trace 1)")


def _digits(n: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        n, r = divmod(n, p)
        out.append(r)
    return out[::-1]


@lru_cache(maxsize=None)
def first_irreducible(p: int, k: int) -> tuple[int, ...]:
    """The monic irreducible of degree k whose lower coefficients, read high to low, are least."""
    for n in range(p**k):
        f = [1, *_digits(n, p, k)]
        if gf_irreducible_p(f, p, ZZ):
            return tuple(f)
    raise ArithmeticError(f"No irreducible polynomial of degree {k} over F_{p}")


@dataclass(frozen=True)
class GaloisField:
    p: int
    k: int

    def __post_init__(self) -> None:
        if not 1 <= self.k <= MAX_DEGREE:
            raise ValueError(f"Extension degree {self.k} outside 1..{MAX_DEGREE}")

    def __str__(self) -> str:
        return f"GF({self.p}^{self.k})"

    @cached_property
    def modulus(self) -> list[int]:
        return list(first_irreducible(self.p, self.k))

    @property
    def order(self) -> int:
        return self.p**self.k

    def element(self, coeffs) -> FiniteFieldElem:
        stripped = gf_strip([int(c) % self.p for c in coeffs])
        reduced = gf_rem(stripped, self.modulus, self.p, ZZ)
        return FiniteFieldElem(self, tuple(int(c) for c in gf_strip(reduced)))

    def from_int(self, n: int) -> FiniteFieldElem:
        """Base-p digits of n as coefficients, highest power first."""
        if not 0 <= n < self.order:
            raise ValueError(f"{n} does not encode an element of {self}")
        return self.element(_digits(n, self.p, self.k))

    def constant(self, c: int) -> FiniteFieldElem:
        return self.element([c])

    @property
    def zero(self) -> FiniteFieldElem:
        return FiniteFieldElem(self, ())

    @property
    def one(self) -> FiniteFieldElem:
        return self.constant(1)

    def random(self, rng) -> FiniteFieldElem:
        return self.from_int(int(rng.integers(self.order)))

    def trace_one(self) -> FiniteFieldElem:
        n = 1
        while (tau := self.from_int(n)).trace() != 1:
            n += 1
        return tau


@dataclass(frozen=True)
class FiniteFieldElem:
    field: GaloisField
    coeffs: tuple[int, ...]

    def _coerce(self, other) -> FiniteFieldElem:
        if isinstance(other, FiniteFieldElem):
            if other.field != self.field:
                raise ValueError(f"Cannot mix {self.field} and {other.field}")
            return other
        if isinstance(other, int):
            return self.field.constant(other)
        return NotImplemented

    def _new(self, coeffs) -> FiniteFieldElem:
        return FiniteFieldElem(self.field, tuple(int(c) for c in gf_strip(coeffs)))

    def __add__(self, other) -> FiniteFieldElem:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._new(gf_add(list(self.coeffs), list(other.coeffs), self.field.p, ZZ))

    __radd__ = __add__

    def __sub__(self, other) -> FiniteFieldElem:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._new(gf_sub(list(self.coeffs), list(other.coeffs), self.field.p, ZZ))

    def __rsub__(self, other) -> FiniteFieldElem:
        return -self + other

    def __neg__(self) -> FiniteFieldElem:
        return self._new(gf_neg(list(self.coeffs), self.field.p, ZZ))

    def __mul__(self, other) -> FiniteFieldElem:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        product = gf_mul(list(self.coeffs), list(other.coeffs), p, ZZ)
        return self._new(gf_rem(product, self.field.modulus, p, ZZ))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> FiniteFieldElem:
        if n < 0:
            return self.inverse() ** -n
        if not self and n:
            return self
        return self._new(gf_pow_mod(list(self.coeffs), n, self.field.modulus, self.field.p, ZZ))

    def __truediv__(self, other) -> FiniteFieldElem:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __int__(self) -> int:
        n = 0
        for c in self.coeffs:
            n = n * self.field.p + c
        return n

    def __str__(self) -> str:
        return f"{int(self):#x}" if self.field.p == 2 else str(int(self))

    def inverse(self) -> FiniteFieldElem:
        if not self:
            raise ZeroDivisionError(f"zero has no inverse in {self.field}")
        return self ** (self.field.order - 2)

    def frobenius(self) -> FiniteFieldElem:
        return self**self.field.p

    def root(self) -> FiniteFieldElem:
        """Inverse Frobenius: the unique p-th root, x^(p^(k-1))."""
        return self ** (self.field.p ** (self.field.k - 1))

    def trace(self) -> int:
        """Absolute trace to the prime field."""
        total, x = self.field.zero, self
        for _ in range(self.field.k):
            total, x = total + x, x.frobenius()
        if len(total.coeffs) > 1:
            raise ArithmeticError(f"trace of {self} is not in the prime field")
        return total.coeffs[0] if total.coeffs else 0


def solve_artin_schreier(c: FiniteFieldElem) -> FiniteFieldElem:
    """A root of y^2 + y = c in characteristic 2; raises when Tr(c) = 1."""
    field = c.field
    if field.p != 2:
        raise ValueError(f"Artin-Schreier roots are computed in characteristic 2, not {field.p}")
    if c.trace():
        raise ArtinSchreierError(c)
    tau = field.trace_one()
    conj_tau = [tau]
    for _ in range(field.k - 1):
        conj_tau.append(conj_tau[-1].frobenius())
    y, c_i = field.zero, c
    for i in range(field.k - 1):
        tail = field.zero
        for t in conj_tau[i + 1 :]:
            tail = tail + t
        y = y + c_i * tail
        c_i = c_i.frobenius()
    if y * y + y != c:
        raise ArithmeticError(f"Artin-Schreier root of {c} failed to verify")
    return y


SCREENING_FIELDS = {2: GaloisField(2, 16), 3: GaloisField(3, 8)}
