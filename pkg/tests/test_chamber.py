from fractions import Fraction

import networkx as nx
import pytest

import leech
import mog
from chamber import (
    ALPHA0,
    CASE_IDS,
    SearchSpaceError,
    affine_permutation,
    case_fixture,
    extension_roots,
    face_report,
    incidence_graph,
    orthogonal_roots,
    root_graph,
    standard_basis,
    to_dot,
)
from lorentz import ADEType, leech_root, root_basis
from surface import check_faces

ORTHOGONAL = {
    "generic-d4": 42,
    "generic-d4d4": 24,
    "jacobian-ordinary": 20,
    "jacobian-prank1": 18,
    "product-EF-ordinary": 20,
    "product-EE-ordinary": 22,
    "product-EF-mixed": 19,
    "kkm-e6": 24,
    "kkm-e6a1": 20,
}


@pytest.fixture(scope="module")
def report_for(minimal_shell):
    reports = {}

    def build(case):
        if case not in reports:
            reports[case] = face_report(case, minimal_shell)
        return reports[case]

    return build


@pytest.mark.parametrize("case", CASE_IDS)
def test_standard_basis_has_the_fixture_root_type(case):
    basis = standard_basis(case)
    assert basis.ade == ADEType.parse(case_fixture(case).root_type)
    assert ALPHA0 in basis.roots


@pytest.mark.parametrize("case", CASE_IDS)
def test_orthogonal_root_counts(case, report_for):
    report = report_for(case)
    assert len(report.orthogonal) == ORTHOGONAL[case]
    assert all(r.norm == -2 for r in report.orthogonal)
    keys = [r.sort_key() for r in report.orthogonal]
    assert keys == sorted(keys)


@pytest.mark.parametrize("case", CASE_IDS)
def test_faces_match_fixture(case, report_for):
    report = report_for(case)
    check_faces(report, case_fixture(case))


def test_generic_d4_roots_are_lines_and_points(report_for, steiner):
    report = report_for("generic-d4")
    lines = {leech.named_vector("L", line.label, steiner).coords for line in mog.LINES}
    points = {
        leech.named_vector("P", p.label, steiner).coords
        for p in mog.POSITIONS
        if p.kind != "roman"
    }
    assert len(lines) == len(points) == 21
    assert {r.coords for r in report.orthogonal} == lines | points
    assert all((r.m, r.n) == (1, 1) for r in report.orthogonal)


def test_jacobian_ordinary_faces(report_for, steiner):
    report = report_for("jacobian-ordinary")
    assert report.total_faces == 38
    assert report.counts_by_norm == {
        Fraction(-2): 20,
        Fraction(-1): 10,
        Fraction(-3, 4): 8,
    }
    assert report.extension_counts() == {"D4+D6": 4, "D4+E6": 8, "D5+D5": 6}
    assert report.multipliers() == {"D4+D6": [2], "D4+E6": [4], "D5+D5": [2]}

    diagonal = {
        leech.named_vector("P", f"({a},{a})", steiner).coords for a in mog.F4_NAMES
    }
    assert {e.root.coords for e in report.extensions["D4+D6"]} == diagonal


def test_prank1_d10_roots(report_for, steiner):
    report = report_for("jacobian-prank1")
    found = {e.root.coords for e in report.extensions["D10"]}
    wanted = {leech.named_vector("P", p, steiner).coords for p in ("i2.03.14", "i3.02.14")}
    assert found == wanted
    assert {e.delta.norm for e in report.extensions["D10"]} == {-1}


def test_product_ee_faces(report_for):
    report = report_for("product-EE-ordinary")
    assert report.counts_by_norm == {Fraction(-2): 22, Fraction(-1): 3, Fraction(-1, 4): 12}


def test_mixed_product_has_only_curve_faces(report_for):
    report = report_for("product-EF-mixed")
    assert report.counts_by_norm == {Fraction(-2): 19}


def test_extension_norms_lie_strictly_between_minus_two_and_zero(report_for):
    for case in ("generic-d4", "jacobian-ordinary", "product-EE-ordinary"):
        report = report_for(case)
        for exts in report.extensions.values():
            for e in exts:
                assert -2 < e.delta.norm < 0
                assert e.delta.multiplier in (2, 4)


def test_search_needs_alpha0(minimal_shell, steiner):
    alpha1 = leech_root(leech.named_vector("Phat", "I", steiner))
    with pytest.raises(SearchSpaceError):
        orthogonal_roots(root_basis([alpha1]), minimal_shell)
    with pytest.raises(SearchSpaceError):
        extension_roots(root_basis([alpha1]), minimal_shell)


def test_low_valence_needs_the_norm_six_shell(minimal_shell, steiner):
    alpha1 = leech_root(leech.named_vector("Phat", "I", steiner))
    basis = root_basis([ALPHA0, alpha1])
    with pytest.raises(SearchSpaceError, match="valence 1"):
        extension_roots(basis, minimal_shell)


def test_affine_permutation_of_a_line(steiner):
    root = leech_root(leech.named_vector("L", "y=x", steiner))
    perm = affine_permutation(root)
    assert perm.array_form == [0, 1, 2, 3]
    assert perm.is_even


def test_incidence_graph_of_jacobian_ordinary(report_for):
    report = report_for("jacobian-ordinary")
    graph = incidence_graph(report, case_fixture("jacobian-ordinary"))
    curves = [v for v, kind in graph.nodes(data="kind") if kind == "curve"]
    faces = [v for v, kind in graph.nodes(data="kind") if kind == "face"]
    assert len(curves) == 20
    assert len(faces) == 18
    assert {"T1", "E1", "E12"} <= set(curves)


def test_root_graph_and_dot(steiner):
    roots = [ALPHA0] + [
        leech_root(leech.named_vector("Phat", r, steiner)) for r in ("I", "II", "III")
    ]
    graph = root_graph(roots, ["a0", "a1", "a2", "a3"])
    assert sorted(d for _, d in graph.degree()) == [1, 1, 1, 3]
    dot = to_dot(graph, "D4")
    assert dot.startswith('graph "D4" {')
    assert '  "a0" -- "a1";' in dot
    assert dot.count("--") == 3


def test_dot_edge_styles():
    graph = nx.Graph()
    graph.add_node("C", kind="curve")
    graph.add_node("d", kind="face")
    graph.add_node("E", kind="curve")
    graph.add_edge("C", "E", weight=2)
    graph.add_edge("C", "d", weight=Fraction(-1))
    dot = to_dot(graph)
    assert dot.count('"C" -- "E";') == 2
    assert '"C" -- "d" [style=dashed, label="-1"];' in dot
    assert '"d" [style=solid' in dot
    assert '"C" [style=filled' in dot


def test_product_ee_d8_roots_are_the_synthemes_through_i0(report_for, steiner):
    report = report_for("product-EE-ordinary")
    found = {e.root.coords for e in report.extensions["D8"]}
    labels = ("i0.12.34", "i0.13.24", "i0.14.23")
    assert found == {leech.named_vector("P", p, steiner).coords for p in labels}
