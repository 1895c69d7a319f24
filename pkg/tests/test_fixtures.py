import json
from fractions import Fraction

import pytest
from pydantic import ValidationError

from chamber import CASE_IDS, UnknownCaseError, case_fixture
from config import Settings
from fixtures import (
    FIXTURE_VERSION,
    CaseFixture,
    FixtureError,
    VectorSpec,
    as_fraction,
    fixture_path,
    load_fixture,
    render_fixture,
    skeleton,
)


@pytest.mark.parametrize("case", CASE_IDS)
def test_shipped_fixtures_are_canonical(case):
    path = fixture_path(case, Settings().CASES_DIR)
    fixture = load_fixture(path)
    assert fixture.case_id == case
    assert render_fixture(fixture) == path.read_text(encoding="utf-8")


def test_render_is_stable():
    fixture = case_fixture("jacobian-ordinary")
    text = render_fixture(fixture)
    again = CaseFixture.model_validate_json(text)
    assert again == fixture
    assert render_fixture(again) == text


def test_skeleton():
    fixture = skeleton("new-case", "D4", 2)
    assert fixture.version == FIXTURE_VERSION
    assert list(fixture.generators) == ["a0", "a1"]
    assert fixture.generators["a0"].tag == "raw"
    data = json.loads(render_fixture(fixture))
    assert data["root_type"] == "D4"
    assert data["generators"]["a1"]["coords"] == [0] * 24


@pytest.mark.parametrize("case", ["", "../../etc/x", "no such case!", "-leading"])
def test_invalid_case_ids_are_rejected(case):
    with pytest.raises(FixtureError, match="case ids are"):
        fixture_path(case, Settings().CASES_DIR)
    with pytest.raises(ValidationError):
        skeleton(case, "D4")


def test_vector_spec_validation():
    with pytest.raises(ValidationError, match="raw vectors"):
        VectorSpec(tag="raw", m=1, n=1, coords=[0] * 3)
    with pytest.raises(ValidationError, match="needs a payload"):
        VectorSpec(tag="P")
    with pytest.raises(ValidationError):
        VectorSpec(tag="empty", colour="red")


def test_vector_spec_resolves_to_leech_roots():
    alpha0 = VectorSpec(tag="empty").resolve()
    assert (alpha0.m, alpha0.n) == (-1, 1)
    root = VectorSpec(tag="L", payload="y=x").resolve()
    assert (root.m, root.n) == (1, 1)
    raw = VectorSpec(tag="raw", m=3, n=2, coords=[0] * 24).resolve()
    assert raw.norm == 12


def test_as_fraction():
    assert as_fraction("-3/4") == Fraction(-3, 4)
    assert as_fraction(-2) == -2


def test_load_fixture_errors(tmp_path):
    bad_json = tmp_path / "bad.json"
    bad_json.write_text("{not json", encoding="utf-8")
    with pytest.raises(FixtureError):
        load_fixture(bad_json)

    with pytest.raises(FixtureError):
        load_fixture(tmp_path / "missing.json")

    future = skeleton("generic-d4", "D4").model_copy(update={"version": FIXTURE_VERSION + 1})
    path = tmp_path / "future.json"
    path.write_text(render_fixture(future), encoding="utf-8")
    with pytest.raises(FixtureError, match="version"):
        load_fixture(path)


def test_case_fixture_checks_case_id(tmp_path):
    text = fixture_path("generic-d4", Settings().CASES_DIR).read_text(encoding="utf-8")
    (tmp_path / "generic-d4.json").write_text(
        text.replace('"case_id": "generic-d4"', '"case_id": "generic-d4d4"'), encoding="utf-8"
    )
    with pytest.raises(FixtureError, match="case_id"):
        case_fixture("generic-d4", tmp_path)


def test_unknown_case():
    with pytest.raises(UnknownCaseError, match="Unknown case"):
        case_fixture("jacobian-supersingular")
