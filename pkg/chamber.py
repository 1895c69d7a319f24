"""Faces of Conway's chamber restricted to R-perp for each surface case."""

from __future__ import annotations

import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path

import networkx as nx
import numpy as np
from sympy import Matrix
from sympy.combinatorics import Permutation

import leech
import mog
from config import Settings
from fixtures import CaseFixture, FixtureError, fixture_path, load_fixture
from lorentz import (
    ADEType,
    LorentzVector,
    NotADEError,
    NotNegativeDefiniteError,
    RationalClass,
    RootBasis,
    ade_type_of_gram,
    pair,
    project,
    root_basis,
)

logger = logging.getLogger(__name__)

ALPHA0 = LorentzVector(-1, 1, (0,) * 24)


class CaseId(str, Enum):
    JACOBIAN_ORDINARY = "jacobian-ordinary"
    JACOBIAN_PRANK1 = "jacobian-prank1"
    PRODUCT_EF_ORDINARY = "product-EF-ordinary"
    PRODUCT_EE_ORDINARY = "product-EE-ordinary"
    PRODUCT_EF_MIXED = "product-EF-mixed"
    KKM_E6 = "kkm-e6"
    KKM_E6A1 = "kkm-e6a1"
    GENERIC_D4 = "generic-d4"
    GENERIC_D4D4 = "generic-d4d4"


CASE_IDS = [c.value for c in CaseId]


class UnknownCaseError(ValueError):
    def __init__(self, case: str) -> None:
        self.case = case
        super().__init__(f"Unknown case: {case!r}. Available: {', '.join(CASE_IDS)}")


class SearchSpaceError(ValueError):
    """The minimal shell does not provably contain every extension root."""


def case_fixture(case: str, cases_dir: Path | None = None) -> CaseFixture:
    if case not in CASE_IDS:
        raise UnknownCaseError(case)
    cases_dir = Settings().CASES_DIR if cases_dir is None else cases_dir
    fixture = load_fixture(fixture_path(case, cases_dir))
    if fixture.case_id != case:
        raise FixtureError(fixture_path(case, cases_dir), f"case_id is {fixture.case_id!r}")
    return fixture


def standard_basis(
    case: str, cases_dir: Path | None = None, system: mog.SteinerSystem | None = None
) -> RootBasis:
    fixture = case_fixture(case, cases_dir)
    roots = [spec.resolve(system) for spec in fixture.generators.values()]
    basis = root_basis(roots, list(fixture.generators))
    claimed = ADEType.parse(fixture.root_type)
    if basis.ade != claimed:
        raise FixtureError(case, f"generators span {basis.ade}, fixture claims {claimed}")
    logger.debug("Basis for %s: %s on %d roots", case, basis.ade, len(roots))
    return basis


# --- shell scans ------------------------------------------------------------------


def shell_pairings(shell: np.ndarray, basis: RootBasis, m_shell: int = 1) -> np.ndarray:
    """Pairings of the Leech roots (m_shell, 1, lam) for lam in the shell with each basis root."""
    coords = np.array([[int(c) for c in a.coords] for a in basis.roots], dtype=np.int64)
    dots = shell.astype(np.int64, copy=False) @ coords.T
    if np.any(dots % 8):
        raise ArithmeticError("basis roots are not integral against the shell")
    offsets = np.array([int(a.m) + int(a.n) * m_shell for a in basis.roots], dtype=np.int64)
    return offsets - dots // 8


def _roots_from_rows(rows: np.ndarray, m_shell: int) -> list[LorentzVector]:
    roots = [LorentzVector.of(m_shell, 1, row.tolist()) for row in rows]
    return sorted(roots, key=LorentzVector.sort_key)


def orthogonal_roots(basis: RootBasis, shell: np.ndarray | None = None) -> list[LorentzVector]:
    """Minimal-shell Leech roots orthogonal to every root of the basis."""
    if ALPHA0 not in basis.roots:
        raise SearchSpaceError("orthogonal roots are only complete for bases containing alpha0")
    shell = leech.minimal_shell() if shell is None else shell
    pairings = shell_pairings(shell, basis)
    hits = shell[np.all(pairings == 0, axis=1)]
    return _roots_from_rows(hits, 1)


def alpha0_valence(basis: RootBasis) -> int:
    i = basis.roots.index(ALPHA0)
    return sum(1 for j in range(len(basis.roots)) if basis.gram[i, j] == 1)


@dataclass(frozen=True)
class Extension:
    root: LorentzVector
    ade: ADEType
    delta: RationalClass


def _bordered(basis: RootBasis, pattern: tuple[int, ...]) -> Matrix:
    k = len(pattern)
    g = basis.gram.row_join(Matrix(k, 1, list(pattern)))
    return g.col_join(Matrix(1, k + 1, [*pattern, -2]))


def _extension_type(basis: RootBasis, pattern: tuple[int, ...]) -> ADEType | None:
    try:
        return ade_type_of_gram(_bordered(basis, pattern))
    except (NotADEError, NotNegativeDefiniteError):
        return None


def _scan_extensions(
    basis: RootBasis, rows: np.ndarray, pairings: np.ndarray, m_shell: int, types: dict
) -> list[Extension]:
    mask = np.all((pairings == 0) | (pairings == 1), axis=1) & np.any(pairings == 1, axis=1)
    found = []
    for row, pattern in zip(rows[mask], pairings[mask]):
        key = tuple(int(p) for p in pattern)
        if key not in types:
            types[key] = _extension_type(basis, key)
        ade = types[key]
        if ade is None:
            continue
        root = LorentzVector.of(m_shell, 1, row.tolist())
        found.append(Extension(root, ade, project(root, basis)))
    return found


def extension_roots(
    basis: RootBasis, shell: np.ndarray | None = None, shell6: bool = False
) -> dict[str, list[Extension]]:
    """Roots r with pairings in {0, 1} against the basis spanning a larger ADE lattice,
    grouped by the type of R + r."""
    if ALPHA0 not in basis.roots:
        raise SearchSpaceError("extension search needs alpha0 in the basis")
    valence = alpha0_valence(basis)
    if valence < 3 and not shell6:
        raise SearchSpaceError(
            f"alpha0 has valence {valence}; roots outside the minimal shell may extend the basis"
        )
    shell = leech.minimal_shell() if shell is None else shell
    types: dict[tuple[int, ...], ADEType | None] = {}
    found = _scan_extensions(basis, shell, shell_pairings(shell, basis), 1, types)
    if shell6:
        for chunk in leech.iter_shell6(progress=True):
            found.extend(_scan_extensions(basis, chunk, shell_pairings(chunk, basis, 2), 2, types))

    groups: dict[str, list[Extension]] = defaultdict(list)
    for ext in found:
        groups[str(ext.ade)].append(ext)
    for exts in groups.values():
        exts.sort(key=lambda e: e.root.sort_key())
    return dict(sorted(groups.items()))


# --- reports ----------------------------------------------------------------------


@dataclass
class FaceReport:
    case: str
    basis: RootBasis
    orthogonal: list[LorentzVector]
    extensions: dict[str, list[Extension]] = field(default_factory=dict)

    @property
    def counts_by_norm(self) -> dict[Fraction, int]:
        counts = Counter({Fraction(-2): len(self.orthogonal)} if self.orthogonal else {})
        for exts in self.extensions.values():
            counts.update(e.delta.norm for e in exts)
        return dict(sorted(counts.items(), reverse=True))

    @property
    def total_faces(self) -> int:
        return sum(self.counts_by_norm.values())

    def extension_counts(self) -> dict[str, int]:
        return {t: len(exts) for t, exts in self.extensions.items()}

    def multipliers(self) -> dict[str, list[int]]:
        return {
            t: sorted({e.delta.multiplier for e in exts}) for t, exts in self.extensions.items()
        }


def face_report(
    case: str,
    shell: np.ndarray | None = None,
    shell6: bool = False,
    cases_dir: Path | None = None,
) -> FaceReport:
    basis = standard_basis(case, cases_dir)
    shell = leech.minimal_shell() if shell is None else shell
    orthogonal = orthogonal_roots(basis, shell)
    extensions = {}
    if alpha0_valence(basis) >= 3 or shell6:
        extensions = extension_roots(basis, shell, shell6)
    report = FaceReport(case, basis, orthogonal, extensions)
    logger.info(
        "%s: %d orthogonal roots, extensions %s",
        case,
        len(orthogonal),
        report.extension_counts() or "none",
    )
    return report


def counts_key(norm: Fraction) -> str:
    return str(norm)


def parity_split(exts: list[Extension]) -> dict[str, int]:
    """Tally extension roots as even-line / odd-oval by the permutation a -> b they induce."""
    out: Counter[str] = Counter()
    for e in exts:
        octad = mog.mask_of(i for i, c in enumerate(e.root.coords) if c == 2)
        shape = {"3+5": "line", "2+6": "oval"}.get(mog.classify_octad(octad).tag, "other")
        out[("even" if affine_permutation(e.root).is_even else "odd") + "-" + shape] += 1
    return dict(sorted(out.items()))


def affine_permutation(root: LorentzVector) -> Permutation:
    """The permutation a -> b read off the affine points (a, b) where the root carries 2."""
    points = [
        mog.POSITIONS[i].point
        for i, c in enumerate(root.coords)
        if c == 2 and mog.POSITIONS[i].kind == "affine"
    ]
    mapping = dict(points)
    if len(mapping) != 4 or sorted(mapping.values()) != list(mog.F4):
        raise ValueError(f"Root does not meet the affine plane in a permutation: {points}")
    return Permutation([mapping[a] for a in mog.F4])


# --- incidence graphs -------------------------------------------------------------


def root_graph(roots, names=None) -> nx.Graph:
    """Dual graph of a set of (-2)-classes: nonzero pairings become weighted edges."""
    roots = list(roots)
    names = list(names) if names is not None else [f"r{i}" for i in range(len(roots))]
    graph = nx.Graph()
    for name, r in zip(names, roots):
        graph.add_node(name, kind="curve", norm=r.norm, vector=r)
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            w = pair(roots[i], roots[j])
            if w:
                graph.add_edge(names[i], names[j], weight=w)
    return graph


def curve_names(fixture: CaseFixture, system: mog.SteinerSystem | None = None) -> dict:
    return {spec.resolve(system): name for name, spec in fixture.curve_map.items()}


def face_names(fixture: CaseFixture, system: mog.SteinerSystem | None = None) -> dict:
    return {spec.root.resolve(system): (name, spec.scale) for name, spec in fixture.faces.items()}


def incidence_graph(report: FaceReport, fixture: CaseFixture | None = None) -> nx.Graph:
    """Curves and face classes; curve-curve and face-curve pairings become edges."""
    curves = curve_names(fixture) if fixture else {}
    faces = face_names(fixture) if fixture else {}
    names = [curves.get(r, f"r{i}") for i, r in enumerate(report.orthogonal)]
    graph = root_graph(report.orthogonal, names)

    for ade, exts in report.extensions.items():
        for k, ext in enumerate(exts):
            name, scale = faces.get(ext.root, (f"{ade}:{k}", 1))
            cls = ext.delta.vector.scale(scale)
            graph.add_node(name, kind="face", norm=cls.norm, vector=cls, ade=ade)
            for curve, r in zip(names, report.orthogonal):
                w = pair(cls, r)
                if w:
                    graph.add_edge(name, curve, weight=w)
    return graph


def _dot_id(name: str) -> str:
    return '"' + name.replace('"', '\\"') + '"'


def to_dot(graph: nx.Graph, title: str = "chamber") -> str:
    """Curves filled, face classes as open circles; weight 2 drawn as a double edge."""
    lines = [f"graph {_dot_id(title)} {{", "  node [shape=circle, label=\"\"];"]
    for node, data in sorted(graph.nodes(data=True)):
        style = "style=filled, fillcolor=black" if data.get("kind") == "curve" else "style=solid"
        lines.append(f"  {_dot_id(node)} [{style}, xlabel={_dot_id(node)}];")
    for u, v, data in sorted(graph.edges(data=True), key=lambda e: (min(e[:2]), max(e[:2]))):
        u, v = sorted((u, v))
        w = data["weight"]
        if w == 1:
            lines.append(f"  {_dot_id(u)} -- {_dot_id(v)};")
        elif w == 2:
            lines.extend([f"  {_dot_id(u)} -- {_dot_id(v)};"] * 2)
        else:
            lines.append(f"  {_dot_id(u)} -- {_dot_id(v)} [style=dashed, label={_dot_id(str(w))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# --- E6 embeddings ------------------------------------------------------------------


@dataclass(frozen=True)
class EmbeddingClass:
    orthogonal: int
    degrees: tuple[int, ...]
    roots: tuple[LorentzVector, ...]

    @property
    def trivalent(self) -> int:
        return sum(1 for d in self.degrees if d == 3)


def e6_embeddings_from_d5(
    d5: RootBasis, shell: np.ndarray | None = None
) -> list[EmbeddingClass]:
    """Extend a D5 basis to E6 in every possible way and group the results by the
    shape of the orthogonal root graph."""
    if str(d5.ade) != "D5":
        raise NotADEError(d5.names, f"expected a D5 basis, got {d5.ade}")
    shell = leech.minimal_shell() if shell is None else shell
    around = orthogonal_roots(d5, shell)
    classes: dict[tuple, list[LorentzVector]] = defaultdict(list)
    for ext in extension_roots(d5, shell).get("E6", []):
        orth = [r for r in around if pair(r, ext.root) == 0]
        degrees = tuple(sorted(d for _, d in root_graph(orth).degree()))
        classes[(len(orth), degrees)].append(ext.root)
    found = [
        EmbeddingClass(count, degrees, tuple(roots))
        for (count, degrees), roots in sorted(classes.items())
    ]
    if len(found) > 1:
        logger.warning(
            "D5 extends to E6 in %d shapes: %s",
            len(found),
            ", ".join(f"{c.orthogonal} roots/{c.trivalent} trivalent" for c in found),
        )
    return found
