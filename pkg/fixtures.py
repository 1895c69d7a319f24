"""Case fixtures: schema, vector-spec resolution and canonical JSON rendering."""

from __future__ import annotations

import json
import logging
import re
from fractions import Fraction
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

import leech
import mog
from lorentz import LorentzVector, leech_root

logger = logging.getLogger(__name__)

FIXTURE_VERSION = 1
CASE_ID_PATTERN = r"^[A-Za-z0-9][A-Za-z0-9-]*$"


class FixtureError(Exception):
    def __init__(self, path: Path | str, cause: Exception | str) -> None:
        self.path = path
        self.cause = cause
        super().__init__(f"Invalid case fixture {path}: {cause}")


class VectorSpec(BaseModel):
    """A named Leech vector lifted to its Leech root, or a raw (m, n, coords) vector."""

    model_config = ConfigDict(extra="forbid")

    tag: Literal["empty", "P", "Phat", "L", "Q", "raw"]
    payload: str | list[str] | None = None
    m: int | None = None
    n: int | None = None
    coords: list[int] | None = None

    @model_validator(mode="after")
    def _check_shape(self) -> VectorSpec:
        if self.tag == "raw":
            if self.m is None or self.n is None or self.coords is None or len(self.coords) != 24:
                raise ValueError("raw vectors need m, n and 24 coords")
        elif self.tag != "empty" and self.payload is None:
            raise ValueError(f"tag {self.tag} needs a payload")
        return self

    def resolve(self, system: mog.SteinerSystem | None = None) -> LorentzVector:
        if self.tag == "raw":
            return LorentzVector.of(self.m, self.n, self.coords)
        return leech_root(leech.named_vector(self.tag, self.payload, system))


class FaceSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    root: VectorSpec
    scale: int = 1


class GraphSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    vertices: list[str]
    edges: list[tuple[str, str, int | str]]


class FiberSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    type: str
    components: dict[str, int]


class PartialFiberSpec(BaseModel):
    """A reducible fiber of which only some components are named curves."""

    model_config = ConfigDict(extra="forbid")

    type: str
    known: list[str]


class FibrationSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str
    anchor: str
    fibers: list[FiberSpec]
    partial_fibers: list[PartialFiberSpec] = []
    sections: list[str] = []
    delta: str | None = None
    mw_rank: int | None = None


class DerivedSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    terms: dict[str, int]
    norm: int | str | None = None


class PairingSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    left: str
    right: str
    value: int | str
    anchor: str


class CaseFixture(BaseModel):
    model_config = ConfigDict(extra="forbid")

    version: int
    case_id: str = Field(pattern=CASE_ID_PATTERN)
    anchor: str
    root_type: str
    generators: dict[str, VectorSpec]
    claimed_lattice: str | None = None
    expected_orthogonal: int | None = None
    expected_counts: dict[str, int] = {}
    expected_extensions: dict[str, int] = {}
    expected_multipliers: dict[str, int] = {}
    expected_parity: dict[str, int] = {}
    automorphisms: int | None = None
    trivalent: int | None = None
    curve_map: dict[str, VectorSpec] = {}
    faces: dict[str, FaceSpec] = {}
    expected_graph: GraphSpec | None = None
    derived: list[DerivedSpec] = []
    pairings: list[PairingSpec] = []
    fibrations: list[FibrationSpec] = []
    notes: list[str] = []


def as_fraction(value: int | str) -> Fraction:
    return Fraction(str(value))


# --- rendering ------------------------------------------------------------------


def _scalar(value) -> bool:
    return not isinstance(value, (list, dict))


def _flat(value) -> bool:
    if isinstance(value, list):
        return all(_scalar(v) for v in value)
    if isinstance(value, dict):
        return all(_scalar(v) or (isinstance(v, list) and _flat(v)) for v in value.values())
    return True


def _inline(value) -> str:
    if isinstance(value, list):
        return "[" + ", ".join(json.dumps(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {json.dumps(v)}" for k, v in value.items()) + "}"
    return json.dumps(value)


def _render(value, indent: int) -> str:
    if _flat(value):
        return _inline(value)
    pad = "  " * (indent + 1)
    if isinstance(value, list):
        items = [pad + _render(v, indent + 1) for v in value]
        return "[\n" + ",\n".join(items) + "\n" + "  " * indent + "]"
    items = [f"{pad}{json.dumps(k)}: {_render(v, indent + 1)}" for k, v in value.items()]
    return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"


def render_fixture(fixture: CaseFixture) -> str:
    """Canonical text: leaf lists and leaf objects inline, everything else one item per line."""
    data = fixture.model_dump(mode="json", exclude_defaults=True)
    return _render(data, 0) + "\n"


# --- loading --------------------------------------------------------------------


def fixture_path(case_id: str, cases_dir: Path) -> Path:
    if not re.fullmatch(CASE_ID_PATTERN, case_id):
        raise FixtureError(repr(case_id), "case ids are letters, digits and hyphens")
    return cases_dir / f"{case_id}.json"


def load_fixture(path: Path) -> CaseFixture:
    try:
        fixture = CaseFixture.model_validate_json(path.read_text(encoding="utf-8"))
    except (OSError, ValidationError, json.JSONDecodeError) as e:
        raise FixtureError(path, e) from e
    if fixture.version != FIXTURE_VERSION:
        raise FixtureError(path, f"version {fixture.version}, expected {FIXTURE_VERSION}")
    logger.debug("Loaded fixture %s (%s)", fixture.case_id, path)
    return fixture


def skeleton(case_id: str, root_type: str = "", generators: int = 0) -> CaseFixture:
    """An empty fixture with raw generator slots to be filled in."""
    slots = {
        f"a{i}": VectorSpec(tag="raw", m=0, n=0, coords=[0] * 24) for i in range(generators)
    }
    return CaseFixture(
        version=FIXTURE_VERSION,
        case_id=case_id,
        anchor="",
        root_type=root_type,
        generators=slots,
    )
