from fractions import Fraction

import networkx as nx
import pytest

from chamber import case_fixture
from lorentz import pair, project
from surface import (
    CheckFailure,
    automorphism_count,
    check_16_6,
    check_delta_formulas,
    check_derived_pairings,
    check_e6_embeddings,
    check_fibration,
    check_graph,
    check_ns_invariants,
    expect,
    graphs_isomorphic,
    hyperplane_class,
)

CLAIMED = [
    "jacobian-ordinary",
    "jacobian-prank1",
    "product-EF-ordinary",
    "product-EE-ordinary",
    "product-EF-mixed",
]

FIBRATIONS = [
    pytest.param(case, fib.id, id=fib.id)
    for case in CLAIMED
    for fib in case_fixture(case).fibrations
]

FIBRATION_DELTAS = [
    pytest.param(case, fib.delta, id=f"{fib.id}-{fib.delta}")
    for case in CLAIMED
    for fib in case_fixture(case).fibrations
    if fib.delta is not None
]


def _weighted(graph):
    nx.set_edge_attributes(graph, 1, "weight")
    return graph


@pytest.mark.parametrize("case", CLAIMED)
def test_ns_invariants_match_claimed_lattice(case, model_for):
    model = model_for(case)
    actual = check_ns_invariants(model)
    assert actual["rank"] == 26 - len(model.report.basis.roots)
    assert actual["signature"] == [1, actual["rank"] - 1, 0]


def test_jacobian_ordinary_discriminant(ordinary_model):
    actual = check_ns_invariants(ordinary_model)
    assert actual["rank"] == 17
    assert actual["det"] == 16
    assert actual["divisors"] == [1] * 14 + [2, 2, 4]


def test_mixed_product_is_unimodular(model_for):
    actual = check_ns_invariants(model_for("product-EF-mixed"))
    assert actual["det"] == 1
    assert actual["divisors"] == [1] * 18


@pytest.mark.parametrize("case, fib_id", FIBRATIONS)
def test_fibrations(case, fib_id, model_for):
    model = model_for(case)
    fib = next(f for f in model.fixture.fibrations if f.id == fib_id)
    result = check_fibration(model, fib)
    if fib.mw_rank is not None:
        assert result["mw_rank"] == fib.mw_rank
    assert len(result["fibers"]) == len(fib.fibers) + len(fib.partial_fibers)


@pytest.mark.parametrize("case, delta", FIBRATION_DELTAS)
def test_fibration_face_class_is_fixed_by_projection(case, delta, model_for):
    model = model_for(case)
    vec = model.vector(delta)
    cls = project(vec, model.report.basis)
    assert cls.vector == vec
    assert all(c == 0 for c in cls.coefficients)
    assert cls.norm == vec.norm


def test_projecting_a_face_twice_changes_nothing(ordinary_model):
    basis = ordinary_model.report.basis
    for exts in ordinary_model.report.extensions.values():
        for ext in exts:
            again = project(ext.delta.vector, basis)
            assert again.vector == ext.delta.vector
            assert again.multiplier == ext.delta.multiplier


def test_jacobian_ordinary_face_fibrations_have_rank_one(ordinary_model):
    ranks = {
        fib.id: check_fibration(ordinary_model, fib)["mw_rank"]
        for fib in ordinary_model.fixture.fibrations
        if fib.delta is not None
    }
    assert ranks == {"ordinary-b": 1, "ordinary-c": 1, "ordinary-d": 1}


def test_fibration_with_wrong_fiber_type_fails(ordinary_model):
    fib = ordinary_model.fixture.fibrations[0]
    broken = fib.model_copy(
        update={"fibers": [fib.fibers[0].model_copy(update={"type": "~A3"}), *fib.fibers[1:]]}
    )
    with pytest.raises(CheckFailure, match=fib.id):
        check_fibration(ordinary_model, broken)


def test_hyperplane_class(ordinary_model):
    h4 = hyperplane_class(ordinary_model)
    assert h4.norm == 4
    curves = ordinary_model.curves
    assert {pair(h4, curves[f"T{k}"]) for k in range(1, 5)} == {2}
    assert {pair(h4, curves[f"E{k}"]) for k in range(1, 5)} == {0}


def test_delta_formulas(ordinary_model):
    assert check_delta_formulas(ordinary_model) == {"H4.H4": 4, "b": 4, "c": 6, "d": 8}


def test_sixteen_six_configuration(ordinary_model):
    assert check_16_6(ordinary_model) == {"families": [16, 16], "meetings": 6}


@pytest.mark.parametrize(
    "case, automorphisms",
    [
        ("jacobian-ordinary", 48),
        ("jacobian-prank1", 4),
        ("product-EF-ordinary", 8),
        ("product-EE-ordinary", 24),
        ("product-EF-mixed", 2),
    ],
)
def test_named_graphs(case, automorphisms, model_for):
    actual = check_graph(model_for(case))
    assert actual["automorphisms"] == automorphisms


@pytest.mark.parametrize(
    "case, trivalent, automorphisms", [("kkm-e6", 6, 72), ("kkm-e6a1", 5, 12)]
)
def test_unnamed_graphs(case, trivalent, automorphisms, model_for):
    actual = check_graph(model_for(case))
    assert actual["trivalent"] == trivalent
    assert actual["automorphisms"] == automorphisms


def test_e6_embedding_shape(model_for):
    actual = check_e6_embeddings(model_for("kkm-e6"))
    assert [24, 6] in actual["shapes"]


def test_derived_pairings_prank1(model_for):
    model = model_for("jacobian-prank1")
    assert model.derived["D2"].norm == -2
    assert model.derived["D2'"].norm == -2
    values = check_derived_pairings(model)
    assert values["D2.D2'"] == "4"
    assert values["delta1.delta2"] == "1"


def test_derived_pairings_ef_ordinary(model_for):
    model = model_for("product-EF-ordinary")
    values = check_derived_pairings(model)
    assert values == {"delta1.delta1": "-4", "delta2.delta2": "-4", "delta1.delta2": "4"}


def test_derived_pairings_ee_ordinary(model_for):
    values = check_derived_pairings(model_for("product-EE-ordinary"))
    assert values["D.D'''"] == "2"
    assert values["dD1.D'"] == "-1"


def test_unknown_class_name(ordinary_model):
    with pytest.raises(KeyError, match="Unknown class"):
        ordinary_model.vector("T9")


def test_expect_reports_both_sides():
    with pytest.raises(CheckFailure, match="faces: expected 1, got 2") as info:
        expect("faces", 1, 2)
    assert (info.value.expected, info.value.actual) == (1, 2)


def test_graphs_isomorphic():
    square = _weighted(nx.cycle_graph(4))
    paw = _weighted(nx.Graph([(0, 1), (1, 2), (2, 0), (2, 3)]))
    assert graphs_isomorphic(square, paw) is None
    relabelled = nx.relabel_nodes(square, {0: "a", 1: "b", 2: "c", 3: "d"})
    assert graphs_isomorphic(square, relabelled) is not None


def test_edge_weights_matter_for_isomorphism():
    single = _weighted(nx.path_graph(3))
    double = _weighted(nx.path_graph(3))
    double[0][1]["weight"] = Fraction(2)
    assert graphs_isomorphic(single, double) is None
    assert automorphism_count(single) == 2
    assert automorphism_count(_weighted(nx.cycle_graph(4))) == 8
