"""Neron-Severi models R-perp with named curve classes, and the lattice-level checks on them."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from pathlib import Path

import networkx as nx
import numpy as np
from networkx.algorithms.isomorphism import GraphMatcher
from sympy import Matrix

import leech
from chamber import (
    FaceReport,
    case_fixture,
    counts_key,
    e6_embeddings_from_d5,
    face_report,
    incidence_graph,
    parity_split,
    root_graph,
)
from fixtures import CaseFixture, FibrationSpec, as_fraction
from lorentz import (
    ADEType,
    FiberShapeError,
    LorentzVector,
    cartan_block,
    combine,
    det,
    extended_fiber_type,
    gram,
    integer_kernel,
    pair,
    root_basis,
    signature,
    smith,
)

logger = logging.getLogger(__name__)


class CheckFailure(Exception):
    def __init__(self, name: str, expected, actual, detail: str = "") -> None:
        self.name = name
        self.expected = expected
        self.actual = actual
        self.detail = detail
        message = f"{name}: expected {expected}, got {actual}"
        super().__init__(f"{message} ({detail})" if detail else message)


def expect(name: str, expected, actual, detail: str = "") -> None:
    if expected != actual:
        raise CheckFailure(name, expected, actual, detail)


@dataclass(frozen=True)
class DerivedClass:
    name: str
    terms: tuple[tuple[str, int], ...]
    vector: LorentzVector

    @property
    def norm(self) -> Fraction:
        return self.vector.norm


@dataclass
class SurfaceModel:
    case: str
    fixture: CaseFixture
    report: FaceReport
    curves: dict[str, LorentzVector]
    faces: dict[str, LorentzVector]
    derived: dict[str, DerivedClass]
    ns_gram: Matrix

    @property
    def ns_rank(self) -> int:
        return self.ns_gram.rows

    @property
    def ns_det(self) -> int:
        return det(self.ns_gram)

    @property
    def ns_divisors(self) -> list[int]:
        return smith(self.ns_gram)

    def vector(self, name: str) -> LorentzVector:
        if name in self.curves:
            return self.curves[name]
        if name in self.faces:
            return self.faces[name]
        if name in self.derived:
            return self.derived[name].vector
        raise KeyError(f"Unknown class {name!r} in case {self.case}")


# --- loading ----------------------------------------------------------------------


def _frame() -> list[LorentzVector]:
    """f, g and the Leech basis rows: a Z-basis of II_{1,25}."""
    zero = (0,) * 24
    rows = [LorentzVector.of(0, 0, row.tolist()) for row in leech.lattice_basis()]
    return [LorentzVector(1, 0, zero), LorentzVector(0, 1, zero), *rows]


def ns_lattice(roots) -> Matrix:
    """Gram matrix of a Z-basis of the orthogonal complement of the roots."""
    frame = _frame()
    roots = list(roots)
    m = Matrix(len(roots), len(frame), lambda i, j: int(pair(roots[i], frame[j])))
    kernel = integer_kernel(m)
    vectors = [
        combine(zip(frame, (int(x) for x in kernel[:, k]), strict=True))
        for k in range(kernel.cols)
    ]
    return gram(vectors)


def _resolve_curves(fixture: CaseFixture, report: FaceReport) -> dict[str, LorentzVector]:
    curves = {}
    for name, spec in fixture.curve_map.items():
        v = spec.resolve()
        if v.norm != -2 or any(pair(v, a) for a in report.basis.roots):
            raise CheckFailure(f"curve {name}", "a root orthogonal to the basis", v.norm)
        curves[name] = v
    if curves and set(curves.values()) != set(report.orthogonal):
        raise CheckFailure(
            "curve_map",
            f"{len(report.orthogonal)} orthogonal roots",
            f"{len(set(curves.values()) & set(report.orthogonal))} matched of {len(curves)}",
        )
    return curves


def _resolve_faces(fixture: CaseFixture, report: FaceReport) -> dict[str, LorentzVector]:
    by_root = {ext.root: ext for exts in report.extensions.values() for ext in exts}
    faces = {}
    for name, spec in fixture.faces.items():
        ext = by_root.get(spec.root.resolve())
        if ext is None:
            raise CheckFailure(f"face {name}", "an extension root", "no such face")
        faces[name] = ext.delta.vector.scale(spec.scale)
    return faces


def _derive(fixture: CaseFixture, curves: dict[str, LorentzVector]) -> dict[str, DerivedClass]:
    derived: dict[str, DerivedClass] = {}
    for spec in fixture.derived:
        known = {**curves, **{d.name: d.vector for d in derived.values()}}
        missing = [n for n in spec.terms if n not in known]
        if missing:
            raise CheckFailure(f"derived {spec.name}", "terms over known classes", missing)
        vector = combine((known[n], k) for n, k in spec.terms.items())
        cls = DerivedClass(spec.name, tuple(spec.terms.items()), vector)
        if spec.norm is not None:
            expect(f"{spec.name}^2", as_fraction(spec.norm), cls.norm)
        for name, c in curves.items():
            if pair(vector, c).denominator != 1:
                raise CheckFailure(f"{spec.name}.{name}", "an integer", pair(vector, c))
        derived[spec.name] = cls
    return derived


def load_case(
    case: str,
    shell: np.ndarray | None = None,
    shell6: bool = False,
    cases_dir: Path | None = None,
) -> SurfaceModel:
    fixture = case_fixture(case, cases_dir)
    report = face_report(case, shell, shell6, cases_dir)
    curves = _resolve_curves(fixture, report)
    faces = _resolve_faces(fixture, report)
    derived = _derive(fixture, curves)
    ns = ns_lattice(report.basis.roots)
    model = SurfaceModel(case, fixture, report, curves, faces, derived, ns)
    expect("ns rank", 26 - len(report.basis.roots), model.ns_rank)
    logger.debug(
        "%s: %d curves, %d faces, %d derived classes", case, len(curves), len(faces), len(derived)
    )
    return model


# --- face counts -------------------------------------------------------------------


def check_faces(report: FaceReport, fixture: CaseFixture) -> dict:
    """Orthogonal roots, faces by norm, extension types, multipliers and parity split."""
    actual: dict = {"orthogonal": len(report.orthogonal)}
    if fixture.expected_orthogonal is not None:
        expect("orthogonal roots", fixture.expected_orthogonal, actual["orthogonal"])
    if fixture.expected_counts:
        actual["counts"] = {counts_key(n): c for n, c in report.counts_by_norm.items()}
        expect("faces by norm", fixture.expected_counts, actual["counts"])
    if fixture.expected_extensions:
        actual["extensions"] = report.extension_counts()
        expect("extension types", fixture.expected_extensions, actual["extensions"])
    if fixture.expected_multipliers:
        actual["multipliers"] = report.multipliers()
        wanted = {t: [m] for t, m in fixture.expected_multipliers.items()}
        expect("face multipliers", wanted, actual["multipliers"])
    if fixture.expected_parity:
        exts = [e for group in report.extensions.values() for e in group]
        actual["parity"] = parity_split(exts)
        expect("parity split", fixture.expected_parity, actual["parity"])
    return actual


# --- lattice invariants -----------------------------------------------------------


def check_ns_invariants(model: SurfaceModel) -> dict:
    """Rank, signature, |det| and Smith divisors of R-perp against the claimed orthogonal sum."""
    claimed = model.fixture.claimed_lattice
    if claimed is None:
        raise CheckFailure("claimed lattice", "a claim in the fixture", None)
    block = cartan_block(claimed)
    actual = {
        "rank": model.ns_rank,
        "det": abs(model.ns_det),
        "divisors": model.ns_divisors,
        "signature": list(signature(model.ns_gram)),
    }
    expected = {
        "rank": block.rows,
        "det": abs(det(block)),
        "divisors": smith(block),
        "signature": list(signature(block)),
    }
    expect(f"NS({model.case}) against {claimed}", expected, actual)
    expect("hyperbolic signature", [1, model.ns_rank - 1, 0], actual["signature"])
    return actual


# --- fibrations -------------------------------------------------------------------


def check_fibration(model: SurfaceModel, fib: FibrationSpec) -> dict:
    """Fiber classes agree, each fiber has its claimed Kodaira type, sections meet F once,
    the attached face class is orthogonal to F and the sections, and the Mordell-Weil rank
    follows from the Shioda-Tate count."""
    fiber_class = None
    trivial_rank = 0
    for k, fiber in enumerate(fib.fibers):
        components = [(model.vector(n), m) for n, m in fiber.components.items()]
        try:
            extended_fiber_type(components, fiber.type)
        except FiberShapeError as e:
            raise CheckFailure(f"{fib.id} fiber {k}", e.claimed, e.found, e.reason) from e
        cls = combine(components)
        if fiber_class is None:
            fiber_class = cls
        elif cls != fiber_class:
            raise CheckFailure(f"{fib.id} fiber {k}", "the class of fiber 0", "a different class")
        trivial_rank += len(components) - 1

    for partial in fib.partial_fibers:
        for name in partial.known:
            expect(f"{fib.id} F.{name}", 0, pair(fiber_class, model.vector(name)))
        trivial_rank += ADEType.parse(partial.type.removeprefix("~")).rank

    for name in fib.sections:
        s = model.vector(name)
        expect(f"{fib.id} section {name}^2", -2, s.norm)
        expect(f"{fib.id} F.{name}", 1, pair(fiber_class, s))

    if fib.delta is not None:
        delta = model.vector(fib.delta)
        expect(f"{fib.id} F.{fib.delta}", 0, pair(fiber_class, delta))
        for name in fib.sections:
            expect(f"{fib.id} {fib.delta}.{name}", 0, pair(delta, model.vector(name)))

    mw_rank = model.ns_rank - 2 - trivial_rank
    if mw_rank < 0:
        bound = f"rank <= {model.ns_rank - 2}"
        raise CheckFailure(f"{fib.id} trivial lattice", bound, trivial_rank)
    if fib.mw_rank is not None:
        expect(f"{fib.id} Mordell-Weil rank", fib.mw_rank, mw_rank)
    return {
        "fibers": [f.type for f in fib.fibers] + [p.type for p in fib.partial_fibers],
        "sections": fib.sections,
        "mw_rank": mw_rank,
    }


def check_derived_pairings(model: SurfaceModel) -> dict:
    values = {}
    for spec in model.fixture.pairings:
        key = f"{spec.left}.{spec.right}"
        value = pair(model.vector(spec.left), model.vector(spec.right))
        expect(key, as_fraction(spec.value), value, spec.anchor)
        values[key] = str(value)
    return values


# --- jacobian-ordinary: H4, face formulas and the (16_6) configuration -------------

_IDX = range(1, 5)


def _n_class(model: SurfaceModel, i: int) -> LorentzVector:
    """2 E_i + sum_j E_ji: the pullback of the i-th singular point's exceptional divisor."""
    terms = [(model.curves[f"E{i}"], 2)]
    terms += [(model.curves[f"E{j}{i}"], 1) for j in _IDX if j != i]
    return combine(terms)


def hyperplane_class(model: SurfaceModel) -> LorentzVector:
    """The unique rational H4 with H4.E = 0 on exceptional curves and H4.T = 2 on tropes."""
    names = list(model.curves)
    vectors = [model.curves[n] for n in names]
    g = gram(vectors)
    target = Matrix([2 if n.startswith("T") else 0 for n in names])
    try:
        solution, params = g.gauss_jordan_solve(target)
    except ValueError as e:
        raise CheckFailure("H4", "a solution of H4.T = 2, H4.E = 0", "inconsistent") from e
    if g.rank() != model.ns_rank:
        raise CheckFailure("H4 uniqueness", f"curves of rank {model.ns_rank}", g.rank())
    solution = solution.subs({p: 0 for p in params})
    coeffs = [Fraction(int(x.p), int(x.q)) for x in solution]
    h4 = combine(zip(vectors, coeffs, strict=True))
    expect("H4^2", 4, h4.norm)
    return h4


def _met(model: SurfaceModel, face: LorentzVector) -> set[str]:
    return {n for n, c in model.curves.items() if pair(face, c)}


def check_delta_formulas(model: SurfaceModel) -> dict:
    h4 = hyperplane_class(model)
    n = {i: _n_class(model, i) for i in _IDX}
    counts = {"b": 0, "c": 0, "d": 0}
    for name, delta in model.faces.items():
        met = _met(model, delta)
        pairs = sorted(tuple(int(ch) for ch in m[1:]) for m in met)
        if len(met) == 2 and {m[0] for m in met} == {"T", "E"} and len(pairs[0]) == 1:
            (i,) = pairs[0]
            kind, lhs, rhs = "b", delta.scale(2), h4 - n[i].scale(2)
        elif len(met) == 2 and all(len(p) == 2 for p in pairs) and pairs[0] == pairs[1][::-1]:
            i, j = pairs[0]
            curves = combine((model.curves[m], 1) for m in met)
            kind, lhs, rhs = "c", delta.scale(2), h4 - n[i] - n[j] - curves
        elif len(met) == 3 and all(len(p) == 2 for p in pairs):
            index = {p[0] for p in pairs}
            terms = [(n[i], 1) for i in sorted(index)]
            inner = combine(terms + [(model.curves[m], 1) for m in met])
            kind, lhs, rhs = "d", delta.scale(4), h4.scale(3) - inner.scale(2)
        else:
            raise CheckFailure(f"face {name}", "a face of type (b), (c) or (d)", sorted(met))
        if lhs != rhs:
            raise CheckFailure(f"face {name} ({kind})", "formula in H4", "a different class")
        counts[kind] += 1
    expect("faces by type", {"b": 4, "c": 6, "d": 8}, counts)
    return {"H4.H4": 4, **counts}


def sixteen_six_families(model: SurfaceModel) -> tuple[list, list]:
    c = model.curves
    first = [c[f"E{i}{j}"] for i, j in permutations(_IDX, 2)]
    first += [_n_class(model, i) for i in _IDX]
    second = [c[f"T{k}"] for k in _IDX]
    for k in _IDX:
        for a, b in combinations([i for i in _IDX if i != k], 2):
            second.append(
                combine((c[x], 1) for x in (f"T{k}", f"E{k}{a}", f"E{a}", f"E{k}{b}", f"E{b}"))
            )
    return first, second


def check_16_6(model: SurfaceModel) -> dict:
    first, second = sixteen_six_families(model)
    expect("family sizes", [16, 16], [len(first), len(second)])
    for label, family in (("first", first), ("second", second)):
        expect(f"{label} family norms", {Fraction(-2)}, {v.norm for v in family})
        products = {pair(u, v) for u, v in combinations(family, 2)}
        expect(f"{label} family pairings", {Fraction(0)}, products)
    rows = [sum(1 for v in second if pair(u, v) > 0) for u in first]
    cols = [sum(1 for u in first if pair(u, v) > 0) for v in second]
    expect("meetings per member", {6}, set(rows) | set(cols))
    return {"families": [16, 16], "meetings": 6}


# --- graphs -----------------------------------------------------------------------


def _same_kind(a: dict, b: dict) -> bool:
    return a.get("kind", "curve") == b.get("kind", "curve")


def _same_weight(a: dict, b: dict) -> bool:
    return a["weight"] == b["weight"]


def graphs_isomorphic(g1: nx.Graph, g2: nx.Graph) -> dict | None:
    """A vertex bijection preserving vertex kind and edge weight, or None."""
    if (g1.number_of_nodes(), g1.number_of_edges()) != (g2.number_of_nodes(), g2.number_of_edges()):
        return None
    matcher = GraphMatcher(g1, g2, node_match=_same_kind, edge_match=_same_weight)
    return next(matcher.isomorphisms_iter(), None)


def automorphism_count(graph: nx.Graph) -> int:
    matcher = GraphMatcher(graph, graph, node_match=_same_kind, edge_match=_same_weight)
    return sum(1 for _ in matcher.isomorphisms_iter())


def expected_graph(fixture: CaseFixture) -> nx.Graph:
    graph = nx.Graph()
    spec = fixture.expected_graph
    if spec is None:
        return graph
    for v in spec.vertices:
        graph.add_node(v, kind="face" if v in fixture.faces else "curve")
    for u, v, w in spec.edges:
        graph.add_edge(u, v, weight=as_fraction(w))
    return graph


def computed_graph(model: SurfaceModel) -> nx.Graph:
    """Named curves and faces from the incidence graph, or every orthogonal root if unnamed."""
    if not model.curves:
        return root_graph(model.report.orthogonal)
    graph = incidence_graph(model.report, model.fixture)
    return graph.subgraph([*model.curves, *model.faces]).copy()


def _edge_table(graph: nx.Graph) -> dict[frozenset, Fraction]:
    return {frozenset((u, v)): Fraction(w) for u, v, w in graph.edges(data="weight")}


def check_graph(model: SurfaceModel) -> dict:
    fixture = model.fixture
    computed = computed_graph(model)
    actual: dict = {"vertices": computed.number_of_nodes(), "edges": computed.number_of_edges()}
    if fixture.expected_graph is not None:
        expected = expected_graph(fixture)
        if graphs_isomorphic(computed, expected) is None:
            raise CheckFailure(
                "graph isomorphism",
                f"{expected.number_of_nodes()} vertices, {expected.number_of_edges()} edges",
                f"{actual['vertices']} vertices, {actual['edges']} edges, no isomorphism",
            )
        if model.curves:
            expect("labelled edges", _edge_table(expected), _edge_table(computed))

    curve_graph = computed.subgraph(
        [v for v, kind in computed.nodes(data="kind") if kind == "curve"]
    ).copy()
    if fixture.trivalent is not None:
        actual["trivalent"] = sum(1 for _, d in curve_graph.degree() if d == 3)
        expect("trivalent vertices", fixture.trivalent, actual["trivalent"])
    if fixture.automorphisms is not None:
        actual["automorphisms"] = automorphism_count(curve_graph)
        expect("graph automorphisms", fixture.automorphisms, actual["automorphisms"])
    return actual


def check_e6_embeddings(model: SurfaceModel) -> dict:
    """The D5 under the E6 basis extends to E6 with the shape recorded in the fixture."""
    basis = model.report.basis
    d5 = root_basis(basis.roots[:5], basis.names[:5])
    shapes = e6_embeddings_from_d5(d5)
    found = [(c.orthogonal, c.trivalent) for c in shapes]
    wanted = (model.fixture.expected_orthogonal, model.fixture.trivalent)
    if wanted not in found:
        raise CheckFailure("E6 embeddings", wanted, found)
    return {"shapes": [list(s) for s in found]}
