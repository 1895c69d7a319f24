"""Exact arithmetic in II_{1,25} = U + Leech, root bases and their Dynkin types."""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

import networkx as nx
from sympy import ZZ, Matrix, Rational, diag
from sympy.matrices.normalforms import invariant_factors, smith_normal_decomp

import leech
from leech import LeechVector

logger = logging.getLogger(__name__)

Number = int | Fraction


class NotNegativeDefiniteError(ValueError):
    def __init__(self, gram: Matrix) -> None:
        self.gram = gram
        super().__init__(f"Gram matrix of size {gram.rows} is not negative definite")


class NotADEError(ValueError):
    def __init__(self, vertices, reason: str) -> None:
        self.vertices = list(vertices)
        self.reason = reason
        super().__init__(f"Not an ADE diagram on vertices {self.vertices}: {reason}")


class FiberShapeError(ValueError):
    def __init__(self, claimed: str | None, found: str | None, reason: str) -> None:
        self.claimed = claimed
        self.found = found
        self.reason = reason
        super().__init__(f"Fiber shape mismatch (claimed {claimed}, found {found}): {reason}")


class DiscriminantMismatchError(ArithmeticError):
    def __init__(self, ade: str, expected: int, actual: int) -> None:
        self.ade = ade
        self.expected = expected
        self.actual = actual
        super().__init__(f"|det| of {ade} Gram matrix is {actual}, expected {expected}")


class SingularGramError(ArithmeticError):
    pass


@dataclass(frozen=True)
class LorentzVector:
    """m f + n g + lambda with f^2 = g^2 = 0 and f.g = 1; entries may be rational."""

    m: Number
    n: Number
    coords: tuple[Number, ...]

    @classmethod
    def of(cls, m, n, coords) -> LorentzVector:
        return cls(_num(m), _num(n), tuple(_num(c) for c in coords))

    @property
    def leech(self) -> LeechVector:
        return LeechVector.of(self.coords)

    def __add__(self, other: LorentzVector) -> LorentzVector:
        return LorentzVector(
            self.m + other.m,
            self.n + other.n,
            tuple(a + b for a, b in zip(self.coords, other.coords)),
        )

    def __sub__(self, other: LorentzVector) -> LorentzVector:
        return self + other.scale(-1)

    def __neg__(self) -> LorentzVector:
        return self.scale(-1)

    def scale(self, k: Number) -> LorentzVector:
        return LorentzVector(
            _num(self.m * k), _num(self.n * k), tuple(_num(c * k) for c in self.coords)
        )

    @property
    def norm(self) -> Fraction:
        return pair(self, self)

    def is_integral(self) -> bool:
        entries = (self.m, self.n, *self.coords)
        if any(Fraction(e).denominator != 1 for e in entries):
            return False
        return leech.contains(self.coords)

    def sort_key(self) -> tuple:
        return (self.m, self.n, self.coords)


LeechRoot = LorentzVector

ZERO = LorentzVector(0, 0, (0,) * 24)


def _num(x) -> Number:
    f = Fraction(x)
    return int(f) if f.denominator == 1 else f


def combine(terms) -> LorentzVector:
    """Sum of k * v over (v, k) pairs."""
    return reduce(lambda acc, t: acc + t[0].scale(t[1]), terms, ZERO)


def pair(x: LorentzVector, y: LorentzVector) -> Fraction:
    dot = sum(a * b for a, b in zip(x.coords, y.coords))
    return Fraction(x.m * y.n + x.n * y.m) - Fraction(dot) / 8


def leech_root(lam: LeechVector) -> LorentzVector:
    """(-1 - <lam,lam>/2, 1, lam), a vector of norm -2."""
    norm = leech.inner(lam, lam)
    if norm.denominator != 1 or norm % 2:
        raise leech.NotInLatticeError(lam.coords)
    return LorentzVector(int(-1 - norm / 2), 1, lam.coords)


def _rational(x) -> Rational:
    f = Fraction(x)
    return Rational(f.numerator, f.denominator)


def gram(vectors) -> Matrix:
    vectors = list(vectors)
    return Matrix(len(vectors), len(vectors), lambda i, j: _rational(pair(vectors[i], vectors[j])))


def det(g: Matrix) -> int:
    value = g.det()
    if not value.is_integer:
        raise ValueError(f"Gram determinant {value} is not an integer")
    return int(value)


def smith(g: Matrix) -> list[int]:
    """Elementary divisors d1 | d2 | ... of an integer matrix (zeros for the null part)."""
    return [abs(int(d)) for d in invariant_factors(g, domain=ZZ)]


def integer_kernel(m: Matrix) -> Matrix:
    """Columns form a Z-basis of {x in Z^n : m x = 0} for an integer matrix of full row rank."""
    snf, _s, t = smith_normal_decomp(m, domain=ZZ)
    rank = sum(1 for i in range(min(snf.shape)) if snf[i, i] != 0)
    return t[:, rank:]


def signature(g: Matrix) -> tuple[int, int, int]:
    """(positive, negative, zero) counts by exact congruence diagonalisation."""
    n = g.rows
    a = [[Fraction(int(g[i, j].p), int(g[i, j].q)) for j in range(n)] for i in range(n)]
    pos = neg = 0
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][i] != 0), None)
        if piv is None:
            hit = next(
                ((i, j) for i in range(k, n) for j in range(i + 1, n) if a[i][j] != 0), None
            )
            if hit is None:
                break
            i, j = hit
            for c in range(k, n):
                a[i][c] += a[j][c]
            for r in range(k, n):
                a[r][i] += a[r][j]
            piv = i
        a[k], a[piv] = a[piv], a[k]
        for row in a:
            row[k], row[piv] = row[piv], row[k]
        p = a[k][k]
        pos += p > 0
        neg += p < 0
        for i in range(k + 1, n):
            f = a[i][k] / p
            if f:
                for c in range(k, n):
                    a[i][c] -= f * a[k][c]
    return pos, neg, n - pos - neg


# --- ADE types ------------------------------------------------------------------

_DET = {"A": lambda n: n + 1, "D": lambda n: 4, "E": lambda n: 9 - n}


@dataclass(frozen=True)
class ADEType:
    components: tuple[tuple[str, int], ...]

    @classmethod
    def of(cls, components) -> ADEType:
        return cls(tuple(sorted(components)))

    @classmethod
    def parse(cls, text: str) -> ADEType:
        if text in ("", "0"):
            return cls(())
        parts = []
        for token in text.split("+"):
            m = re.fullmatch(r"([ADE])(\d+)", token.strip())
            if not m:
                raise ValueError(f"Unknown root type: {token!r}")
            parts.append((m.group(1), int(m.group(2))))
        return cls.of(parts)

    def __str__(self) -> str:
        return "+".join(f"{x}{n}" for x, n in self.components) or "0"

    @property
    def rank(self) -> int:
        return sum(n for _, n in self.components)

    @property
    def det(self) -> int:
        return math.prod(_DET[x](n) for x, n in self.components)


def _arms(tree: nx.Graph, centre) -> list[int]:
    lengths = []
    for nb in tree.neighbors(centre):
        pruned = tree.copy()
        pruned.remove_node(centre)
        lengths.append(len(nx.node_connected_component(pruned, nb)))
    return sorted(lengths)


def _component_type(graph: nx.Graph) -> tuple[str, int]:
    nodes = sorted(graph.nodes)
    n = len(nodes)
    if not nx.is_tree(graph):
        raise NotADEError(nodes, "diagram contains a cycle")
    degrees = dict(graph.degree)
    if max(degrees.values(), default=0) >= 4:
        raise NotADEError(nodes, "vertex of valence >= 4")
    branches = [v for v, d in degrees.items() if d == 3]
    if not branches:
        return ("A", n)
    if len(branches) > 1:
        raise NotADEError(nodes, "two branch vertices")
    arms = _arms(graph, branches[0])
    if arms[0] == 1 and arms[1] == 1:
        return ("D", n)
    if arms[0] == 1 and arms[1] == 2 and arms[2] in (2, 3, 4):
        return ("E", n)
    raise NotADEError(nodes, f"branch arms {arms}")


def ade_type_of_gram(g: Matrix) -> ADEType:
    n = g.rows
    if any(g[i, i] != -2 for i in range(n)):
        raise NotADEError(range(n), "diagonal entries must be -2")
    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    for i in range(n):
        for j in range(i + 1, n):
            if g[i, j] not in (0, 1):
                raise NotADEError([i, j], f"pairing {g[i, j]} outside {{0, 1}}")
            if g[i, j] == 1:
                graph.add_edge(i, j)
    if signature(g)[1] != n:
        raise NotNegativeDefiniteError(g)
    components = [_component_type(graph.subgraph(c)) for c in nx.connected_components(graph)]
    ade = ADEType.of(components)
    actual = abs(det(g))
    if actual != ade.det:
        raise DiscriminantMismatchError(str(ade), ade.det, actual)
    return ade


def ade_type(roots) -> ADEType:
    return ade_type_of_gram(gram(roots))


def _dynkin_edges(letter: str, n: int) -> list[tuple[int, int]]:
    if letter == "A":
        return [(i, i + 1) for i in range(n - 1)]
    path = [(i, i + 1) for i in range(n - 2)]
    if letter == "D":
        return path + [(n - 3, n - 1)]
    if letter == "E":
        return path + [(2, n - 1)]
    raise ValueError(f"Unknown Dynkin letter: {letter!r}")


def cartan_block(type_string: str) -> Matrix:
    """Gram matrix of an orthogonal sum such as "U+E8+D4+A3" (root blocks negative)."""
    blocks = []
    for token in type_string.split("+"):
        token = token.strip()
        if token == "U":
            blocks.append(Matrix([[0, 1], [1, 0]]))
            continue
        ((letter, n),) = ADEType.parse(token).components
        block = -2 * Matrix.eye(n)
        for i, j in _dynkin_edges(letter, n):
            block[i, j] = block[j, i] = 1
        blocks.append(block)
    return diag(*blocks)


# --- extended diagrams and fibers -------------------------------------------------


def _fiber_symbol(graph: nx.MultiGraph | nx.Graph, g: Matrix) -> str:
    n = g.rows
    if n == 1:
        raise FiberShapeError(None, None, "a single component is not a reducible fiber")
    if n == 2:
        if g[0, 1] == 2:
            return "~A1"
        raise FiberShapeError(None, None, f"two components meeting with {g[0, 1]}")
    for i in range(n):
        for j in range(i + 1, n):
            if g[i, j] not in (0, 1):
                raise FiberShapeError(None, None, f"pairing {g[i, j]} between {i} and {j}")
    if not nx.is_connected(graph):
        raise FiberShapeError(None, None, "components are not connected")
    degrees = dict(graph.degree)
    if all(d == 2 for d in degrees.values()):
        return f"~A{n - 1}"
    if not nx.is_tree(graph):
        raise FiberShapeError(None, None, "diagram has a cycle and a branch")
    high = [v for v, d in degrees.items() if d >= 3]
    if len(high) == 1 and degrees[high[0]] == 4 and n == 5:
        return "~D4"
    if len(high) == 2 and all(degrees[v] == 3 for v in high):
        leaves = [sum(1 for u in graph.neighbors(v) if degrees[u] == 1) for v in high]
        if leaves == [2, 2]:
            return f"~D{n - 1}"
    if len(high) == 1 and degrees[high[0]] == 3:
        arms = _arms(graph, high[0])
        symbol = {(2, 2, 2): "~E6", (1, 3, 3): "~E7", (1, 2, 5): "~E8"}.get(tuple(arms))
        if symbol:
            return symbol
        raise FiberShapeError(None, None, f"branch arms {arms}")
    raise FiberShapeError(None, None, f"valences {sorted(degrees.values())}")


def null_vector(g: Matrix) -> list[int]:
    """Primitive positive generator of the kernel of a semidefinite affine Cartan matrix."""
    kernel = g.nullspace()
    if len(kernel) != 1:
        raise FiberShapeError(None, None, f"kernel of rank {len(kernel)}")
    v = kernel[0]
    lcm = math.lcm(*(int(Rational(x).q) for x in v))
    ints = [int(x * lcm) for x in v]
    content = math.gcd(*ints)
    ints = [x // content for x in ints]
    return ints if ints[0] > 0 else [-x for x in ints]


def extended_fiber_type(components, claimed: str | None = None) -> str:
    """Validate (class, multiplicity) pairs as a Kodaira fiber; returns e.g. "~D6"."""
    classes = [c for c, _ in components]
    mults = [int(k) for _, k in components]
    g = gram(classes)
    if any(g[i, i] != -2 for i in range(g.rows)):
        raise FiberShapeError(claimed, None, "components must have norm -2")
    graph = nx.Graph()
    graph.add_nodes_from(range(g.rows))
    graph.add_edges_from(
        (i, j) for i in range(g.rows) for j in range(i + 1, g.rows) if g[i, j] != 0
    )
    found = _fiber_symbol(graph, g)
    if claimed is not None and claimed != found:
        raise FiberShapeError(claimed, found, "diagram does not match the claimed type")
    expected = null_vector(g)
    if mults != expected:
        raise FiberShapeError(claimed, found, f"multiplicities {mults}, expected {expected}")
    fiber = combine(zip(classes, mults))
    if fiber.norm != 0 or any(pair(fiber, c) != 0 for c in classes):
        raise FiberShapeError(claimed, found, "fiber class is not isotropic")
    return found


# --- root bases and projections ---------------------------------------------------


@dataclass(frozen=True)
class RootBasis:
    roots: tuple[LorentzVector, ...]
    names: tuple[str, ...]
    gram: Matrix
    ade: ADEType


def root_basis(roots, names=None) -> RootBasis:
    roots = tuple(roots)
    names = tuple(names) if names is not None else tuple(f"a{i}" for i in range(len(roots)))
    g = gram(roots)
    return RootBasis(roots, names, g, ade_type_of_gram(g))


@dataclass(frozen=True)
class RationalClass:
    vector: LorentzVector
    coefficients: tuple[Fraction, ...]
    norm: Fraction
    multiplier: int


def least_multiplier(v: LorentzVector, bound: int = 1024) -> int:
    for k in range(1, bound + 1):
        if v.scale(k).is_integral():
            return k
    raise ArithmeticError(f"No integral multiple of {v} up to {bound}")


def project(r: LorentzVector, basis: RootBasis) -> RationalClass:
    """Orthogonal projection of r into the complement of the span of the basis."""
    if not basis.roots:
        return RationalClass(r, (), r.norm, least_multiplier(r))
    g = basis.gram
    if g.det() == 0:
        raise SingularGramError("root basis Gram matrix is singular")
    b = Matrix([_rational(pair(r, a)) for a in basis.roots])
    c = g.LUsolve(b)
    coeffs = tuple(Fraction(int(x.p), int(x.q)) for x in c)
    delta = r - combine(zip(basis.roots, coeffs))
    if any(pair(delta, a) != 0 for a in basis.roots):
        raise SingularGramError("projection is not orthogonal to the basis")
    norm = r.norm - sum(Fraction(int(x.p), int(x.q)) for x in (b.T * c))
    if norm != delta.norm:
        raise ArithmeticError(f"projection norm {norm} disagrees with {delta.norm}")
    return RationalClass(delta, coeffs, norm, least_multiplier(delta))
