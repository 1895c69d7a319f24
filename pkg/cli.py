"""CLI for the chamber and Kummer quartic verification suite."""

from __future__ import annotations

import json
import logging
import threading
from collections import Counter
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Literal

import numpy as np
import typer
from pydantic import BaseModel, Field, ValidationError, field_validator
from tqdm import tqdm

import leech
import mog
import surface
from chamber import (
    CASE_IDS,
    UnknownCaseError,
    case_fixture,
    counts_key,
    face_report,
    incidence_graph,
    to_dot,
)
from config import Settings
from fixtures import FixtureError, fixture_path, load_fixture, render_fixture, skeleton
from journal import CheckJournal, CheckRecord, render_report, to_jsonable
from lorentz import det
from quartic import IDENTITY_IDS, IdentityCheck, IdentityFailedError, load_identity
from quartic.fields import GaloisField
from quartic.normal_form import igusa_roundtrip, normal_form_roundtrip

app = typer.Typer(help="Exact checks of Leech-lattice chambers and Kummer quartics.")

CHECKS = (
    "steiner",
    "minimal",
    "faces",
    "graphs",
    "ns",
    "fibrations",
    "deltas",
    "sixteen-six",
    "identities",
)
ORDINARY_CASE = "jacobian-ordinary"
OCTAD_CLASSES = {"3+5": 21, "2+6": 168, "1+7": 360, "0+8": 210}
ROUNDTRIP_FIELDS = (GaloisField(2, 4), GaloisField(2, 8))
ROUNDTRIP_INPUTS = 1000

logger = logging.getLogger("cli")


def _setup_logging(log_file: Path) -> logging.Logger:
    root = logging.getLogger()
    root.setLevel(logging.DEBUG)
    for handler in [h for h in root.handlers if getattr(h, "kummer_chamber", False)]:
        root.removeHandler(handler)
        handler.close()

    # Console handler: human-readable
    console = logging.StreamHandler()
    console.setLevel(logging.INFO)
    console.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    console.kummer_chamber = True
    root.addHandler(console)

    # File handler: JSON lines
    from pythonjsonlogger.json import JsonFormatter

    fh = logging.FileHandler(log_file, encoding="utf-8")
    fh.setLevel(logging.DEBUG)
    fh.setFormatter(JsonFormatter(timestamp=True))
    fh.kummer_chamber = True
    root.addHandler(fh)

    return logger


def _split(value: str | None) -> list[str] | None:
    return [v.strip() for v in value.split(",") if v.strip()] if value else None


def _settings(**overrides) -> Settings:
    given = {k: v for k, v in overrides.items() if v is not None}
    return Settings(**given) if given else Settings()


class RunConfig(BaseModel):
    cases: list[str] = Field(default_factory=lambda: list(CASE_IDS))
    checks: list[str] = Field(default_factory=lambda: list(CHECKS))
    output: Path = Path("report.json")
    format: Literal["json", "md"] = "json"
    shell6: bool = False
    threads: int = Field(1, ge=1)
    resume: bool = False

    @field_validator("cases")
    @classmethod
    def _known_cases(cls, cases: list[str]) -> list[str]:
        unknown = [c for c in cases if c not in CASE_IDS]
        if unknown:
            raise ValueError(f"Unknown case(s): {unknown}. Available: {', '.join(CASE_IDS)}")
        return cases

    @field_validator("checks")
    @classmethod
    def _known_checks(cls, checks: list[str]) -> list[str]:
        unknown = [c for c in checks if c not in CHECKS]
        if unknown:
            raise ValueError(f"Unknown check(s): {unknown}. Available: {', '.join(CHECKS)}")
        return checks


# --- check bodies -------------------------------------------------------------------


def check_steiner() -> dict:
    system = mog.build_steiner()
    classes = dict(Counter(mog.classify_octad(o, system).tag for o in system.octads))
    surface.expect("octad classes", OCTAD_CLASSES, classes)
    sizes = sorted({(a & b).bit_count() for a, b in combinations(system.octads, 2)})
    surface.expect("octad intersections", [0, 2, 4], sizes)
    secants, external = mog.lines_meeting_oval(mog.Q0_MASK)
    surface.expect("lines meeting Q0", [15, 6], [len(secants), len(external)])
    return {
        "codewords": len(system.codewords),
        "octads": len(system.octads),
        "classes": classes,
        "intersections": sizes,
    }


def check_minimal(shell: np.ndarray) -> dict:
    surface.expect("minimal vectors", leech.MINIMAL_COUNT, len(shell))
    squares = np.unique((shell.astype(np.int64) ** 2).sum(axis=1)).tolist()
    surface.expect("x.x of minimal vectors", [32], squares)
    system = mog.steiner_system()
    outside = sum(1 for row in shell.tolist() if not leech.contains(row, system))
    surface.expect("minimal vectors outside the lattice", 0, outside)
    surface.expect("det of the basis Gram matrix", 1, det(leech.basis_gram()))
    return {"minimal": len(shell), "members": len(shell) - outside, "det": 1}


def check_identity(identity: IdentityCheck, points: int, seed: int) -> dict:
    result = identity.verify(points=points, seed=seed)
    return {"cofactors": result.cofactors, "screened": result.screened}


def check_normal_forms(seed: int) -> dict:
    rng = np.random.default_rng(seed)
    actual = {}
    for field in ROUNDTRIP_FIELDS:
        failures = normal_form_roundtrip(field, ROUNDTRIP_INPUTS, rng, progress=True)
        surface.expect(f"normal_form round trip over {field}", [], failures[:5])
        actual[str(field)] = ROUNDTRIP_INPUTS
    return actual


def check_igusa(seed: int) -> dict:
    rng = np.random.default_rng(seed)
    actual = {}
    for field in ROUNDTRIP_FIELDS:
        failures, extended = igusa_roundtrip(field, ROUNDTRIP_INPUTS, rng, progress=True)
        surface.expect(f"igusa_to_normal over {field}", [], failures[:5])
        actual[str(field)] = {"inputs": ROUNDTRIP_INPUTS, "extended": extended}
    return actual


def check_graphs(model: surface.SurfaceModel) -> dict:
    actual = surface.check_graph(model)
    if model.fixture.pairings:
        actual["pairings"] = surface.check_derived_pairings(model)
    if model.fixture.root_type == "E6":
        actual["e6"] = surface.check_e6_embeddings(model)
    return actual


# --- orchestration ------------------------------------------------------------------


class ModelCache:
    """One SurfaceModel per case, built on first use and shared between worker threads."""

    def __init__(self, settings: Settings, shell6: bool) -> None:
        self.settings = settings
        self.shell6 = shell6
        self._lock = threading.Lock()
        self._case_locks: dict[str, threading.Lock] = {}
        self._models: dict[str, surface.SurfaceModel] = {}
        self._shell: np.ndarray | None = None

    def shell(self) -> np.ndarray:
        with self._lock:
            if self._shell is None:
                self._shell = leech.minimal_shell(self.settings.SHELL_CACHE)
            return self._shell

    def model(self, case: str) -> surface.SurfaceModel:
        with self._lock:
            case_lock = self._case_locks.setdefault(case, threading.Lock())
        with case_lock:
            if case not in self._models:
                self._models[case] = surface.load_case(
                    case, self.shell(), self.shell6, self.settings.CASES_DIR
                )
            return self._models[case]


@dataclass(frozen=True)
class PlannedCheck:
    id: str
    case: str | None
    anchor: str
    run: Callable[[], object]


def plan_checks(config: RunConfig, settings: Settings, cache: ModelCache) -> list[PlannedCheck]:
    """Every selected check, in report order; raises FixtureError for a broken fixture."""
    wanted = set(config.checks)
    planned = []
    if "steiner" in wanted:
        anchor = "Steiner system S(5,8,24) from the MOG"
        planned.append(PlannedCheck("steiner", None, anchor, check_steiner))
    if "minimal" in wanted:
        anchor = "minimal vectors of the Leech lattice"
        planned.append(PlannedCheck("minimal", None, anchor, lambda: check_minimal(cache.shell())))

    for case in config.cases:
        fixture = case_fixture(case, settings.CASES_DIR)

        def model(case: str = case) -> surface.SurfaceModel:
            return cache.model(case)

        if "faces" in wanted:
            planned.append(
                PlannedCheck(
                    f"faces:{case}",
                    case,
                    f"faces of the chamber of {fixture.root_type}",
                    lambda model=model: surface.check_faces(model().report, model().fixture),
                )
            )
        if "graphs" in wanted:
            planned.append(
                PlannedCheck(
                    f"graphs:{case}",
                    case,
                    fixture.anchor,
                    lambda model=model: check_graphs(model()),
                )
            )
        if "ns" in wanted and fixture.claimed_lattice:
            planned.append(
                PlannedCheck(
                    f"ns:{case}",
                    case,
                    f"orthogonal complement of {fixture.root_type} is {fixture.claimed_lattice}",
                    lambda model=model: surface.check_ns_invariants(model()),
                )
            )
        if "fibrations" in wanted:
            for fib in fixture.fibrations:
                planned.append(
                    PlannedCheck(
                        f"fibration:{case}:{fib.id}",
                        case,
                        fib.anchor,
                        lambda model=model, fib=fib: surface.check_fibration(model(), fib),
                    )
                )
        if case == ORDINARY_CASE and "deltas" in wanted:
            planned.append(
                PlannedCheck(
                    f"deltas:{case}",
                    case,
                    "face classes in terms of H4, the tropes and the nodes",
                    lambda model=model: surface.check_delta_formulas(model()),
                )
            )
        if case == ORDINARY_CASE and "sixteen-six" in wanted:
            planned.append(
                PlannedCheck(
                    f"sixteen-six:{case}",
                    case,
                    "(16_6) configuration of tropes and nodes",
                    lambda model=model: surface.check_16_6(model()),
                )
            )

    if "identities" in wanted:
        points, seed = settings.SCREEN_POINTS, settings.RANDOM_SEED
        for name in IDENTITY_IDS:
            identity = load_identity(name)
            planned.append(
                PlannedCheck(
                    f"identity:{name}",
                    None,
                    identity.anchor,
                    lambda identity=identity: check_identity(identity, points, seed),
                )
            )
        planned.append(
            PlannedCheck(
                "identity:normal_form",
                None,
                "normal form y^2 + (x^2+x)y + (ax^3+bx+c)^2 of ordinary curves",
                lambda: check_normal_forms(seed),
            )
        )
        planned.append(
            PlannedCheck(
                "identity:igusa_to_normal",
                None,
                "Igusa form to normal form, (a, b, c) = (gamma, alpha+beta+gamma, alpha)",
                lambda: check_igusa(seed),
            )
        )
    return planned


def _record(check: PlannedCheck, status: str, expected=None, actual=None, detail="") -> CheckRecord:
    return CheckRecord(
        id=check.id,
        case=check.case,
        anchor=check.anchor,
        status=status,
        expected=expected,
        actual=actual,
        detail=detail,
    )


def run_check(check: PlannedCheck, journal: CheckJournal) -> CheckRecord:
    try:
        actual = check.run()
        record = _record(check, "pass", actual, actual)
    except surface.CheckFailure as e:
        record = _record(check, "fail", e.expected, e.actual, str(e))
    except IdentityFailedError as e:
        record = _record(check, "fail", "exact identity", e.witness, str(e))
    except Exception as e:
        logger.debug("Check %s raised", check.id, exc_info=True)
        record = _record(check, "error", detail=f"{type(e).__name__}: {e}")
    journal.write(record)
    return record


@app.command()
def verify(
    cases: str | None = typer.Option(None, help="Comma-separated case ids (default: all)"),
    checks: str | None = typer.Option(None, help="Comma-separated checks (default: all)"),
    out: Path = typer.Option(Path("report.json"), help="Report file"),
    fmt: str = typer.Option("json", "--format", help="Report format: json or md"),
    shell6: bool | None = typer.Option(
        None, "--shell6/--no-shell6", help="Also scan the norm -6 shell"
    ),
    threads: int | None = typer.Option(None, help="Concurrent checks"),
    cache: Path | None = typer.Option(None, help="Minimal-shell .npz cache"),
    cases_dir: Path | None = typer.Option(None, help="Directory of case fixtures"),
    resume: bool = typer.Option(False, help="Skip checks that already passed in the journal"),
) -> None:
    """Run the verification suite and write a report."""
    out.parent.mkdir(parents=True, exist_ok=True)
    logger = _setup_logging(out.parent / "verify.log")
    settings = _settings(SHELL_CACHE=cache, THREADS=threads, SHELL6=shell6, CASES_DIR=cases_dir)

    try:
        config = RunConfig(
            cases=_split(cases) or list(CASE_IDS),
            checks=_split(checks) or list(CHECKS),
            output=out,
            format=fmt,
            shell6=settings.SHELL6,
            threads=settings.THREADS,
            resume=resume,
        )
    except ValidationError as e:
        logger.error("Invalid run configuration: %s", e)
        raise typer.Exit(2) from None

    models = ModelCache(settings, config.shell6)
    try:
        planned = plan_checks(config, settings, models)
    except (FixtureError, UnknownCaseError) as e:
        logger.error("%s", e)
        raise typer.Exit(2) from None

    journal = CheckJournal(out.with_suffix(".jsonl"))
    if resume:
        journal.load()
        if journal.records:
            logger.info(journal.summary())
    pending = [c for c in planned if not journal.is_done(c.id)]
    logger.info(
        "%d of %d checks to run on %d thread(s).", len(pending), len(planned), config.threads
    )

    with tqdm(total=len(pending), desc="Checks", unit="check", disable=None) as pbar:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            futures = {pool.submit(run_check, c, journal): c for c in pending}
            for future in as_completed(futures):
                record = future.result()
                if record.status != "pass":
                    logger.warning("%s %s: %s", record.status, record.id, record.detail)
                pbar.update(1)
    journal.close()

    planned_ids = {c.id for c in planned}
    records = [r for r in journal.records if r.id in planned_ids]
    out.write_text(render_report(records, config.format), encoding="utf-8")
    counts = Counter(r.status for r in records)
    passed, failed, errors = counts["pass"], counts["fail"], counts["error"]
    logger.info("Wrote %s: %d pass, %d fail, %d error.", out, passed, failed, errors)
    if failed or errors:
        raise typer.Exit(1)


# --- inspection verbs -----------------------------------------------------------------


def _case_or_exit(case: str, settings: Settings):
    try:
        return case_fixture(case, settings.CASES_DIR)
    except (UnknownCaseError, FixtureError) as e:
        typer.echo(str(e), err=True)
        raise typer.Exit(2) from None


@app.command()
def faces(
    case: str = typer.Option(..., help="Case id"),
    dot: Path | None = typer.Option(None, help="Write the incidence graph as DOT"),
    shell6: bool = typer.Option(False, help="Also scan the norm -6 shell"),
    cache: Path | None = typer.Option(None, help="Minimal-shell .npz cache"),
    cases_dir: Path | None = typer.Option(None, help="Directory of case fixtures"),
) -> None:
    """Print the face counts of a case."""
    settings = _settings(SHELL_CACHE=cache, CASES_DIR=cases_dir)
    fixture = _case_or_exit(case, settings)
    shell = leech.minimal_shell(settings.SHELL_CACHE)
    report = face_report(case, shell, shell6, settings.CASES_DIR)

    typer.echo(f"{case}: {report.basis.ade}, {len(report.orthogonal)} orthogonal roots")
    for norm, count in report.counts_by_norm.items():
        typer.echo(f"  norm {counts_key(norm)}: {count}")
    multipliers = report.multipliers()
    for ade, count in report.extension_counts().items():
        typer.echo(f"  {ade}: {count} extension roots, multipliers {multipliers[ade]}")
    if dot is not None:
        dot.write_text(to_dot(incidence_graph(report, fixture), case), encoding="utf-8")
        typer.echo(f"Wrote {dot}")


@app.command()
def graph(
    case: str = typer.Option(..., help="Case id"),
    out: Path | None = typer.Option(None, help="DOT file (default: stdout)"),
    cache: Path | None = typer.Option(None, help="Minimal-shell .npz cache"),
    cases_dir: Path | None = typer.Option(None, help="Directory of case fixtures"),
) -> None:
    """Emit the named curve and face graph of a case as DOT."""
    settings = _settings(SHELL_CACHE=cache, CASES_DIR=cases_dir)
    _case_or_exit(case, settings)
    model = surface.load_case(
        case, leech.minimal_shell(settings.SHELL_CACHE), cases_dir=settings.CASES_DIR
    )
    text = to_dot(surface.computed_graph(model), case)
    if out is None:
        typer.echo(text, nl=False)
    else:
        out.write_text(text, encoding="utf-8")
        typer.echo(f"Wrote {out}")


@app.command()
def octads(
    unicode: bool = typer.Option(False, help="Unicode labels instead of ASCII"),
    ovals: bool = typer.Option(False, help="Dump the ovals with their Roman pairs instead"),
) -> None:
    """Dump the 759 octads (or the 168 ovals) as JSON label lists."""
    system = mog.steiner_system()
    dump = mog.dump_ovals if ovals else mog.dump_octads
    data = dump(system, ascii=not unicode)
    typer.echo(json.dumps(data, ensure_ascii=False))


@app.command()
def minvec(
    cache: Path | None = typer.Option(None, help="Read or write this .npz cache"),
    shell6: bool = typer.Option(False, help="Also count the norm -6 shell (minutes)"),
) -> None:
    """Enumerate the minimal shell and report its size."""
    settings = _settings(SHELL_CACHE=cache)
    shell = leech.minimal_shell(settings.SHELL_CACHE)
    typer.echo(f"norm -4: {len(shell)} vectors")
    if shell6:
        total = sum(len(chunk) for chunk in leech.iter_shell6(progress=True))
        typer.echo(f"norm -6: {total} vectors")


@app.command()
def fibration(
    case: str = typer.Option(..., help="Case id"),
    fib_id: str | None = typer.Option(None, "--id", help="Fibration id (default: all)"),
    cache: Path | None = typer.Option(None, help="Minimal-shell .npz cache"),
    cases_dir: Path | None = typer.Option(None, help="Directory of case fixtures"),
) -> None:
    """Check the elliptic fibrations recorded for a case."""
    settings = _settings(SHELL_CACHE=cache, CASES_DIR=cases_dir)
    fixture = _case_or_exit(case, settings)
    selected = [f for f in fixture.fibrations if fib_id is None or f.id == fib_id]
    if not selected:
        known = ", ".join(f.id for f in fixture.fibrations) or "none"
        typer.echo(f"Unknown fibration: {fib_id!r}. Available: {known}", err=True)
        raise typer.Exit(2)

    model = surface.load_case(
        case, leech.minimal_shell(settings.SHELL_CACHE), cases_dir=settings.CASES_DIR
    )
    failed = False
    for fib in selected:
        try:
            result = surface.check_fibration(model, fib)
        except surface.CheckFailure as e:
            typer.echo(f"{fib.id}: FAIL {e}")
            failed = True
            continue
        typer.echo(f"{fib.id}: {json.dumps(to_jsonable(result))}")
    if failed:
        raise typer.Exit(1)


@app.command()
def poly(
    identity: list[str] | None = typer.Option(None, help="Identity id, repeatable (default: all)"),
    points: int | None = typer.Option(None, help="Random points screened before exact division"),
    seed: int | None = typer.Option(None, help="Screening seed"),
) -> None:
    """Verify polynomial identities of the catalog."""
    settings = _settings(SCREEN_POINTS=points, RANDOM_SEED=seed)
    names = identity or list(IDENTITY_IDS)
    try:
        checks = [load_identity(n) for n in names]
    except ValueError as e:
        typer.echo(str(e), err=True)
        raise typer.Exit(2) from None

    failed = False
    for check in checks:
        try:
            result = check.verify(points=settings.SCREEN_POINTS, seed=settings.RANDOM_SEED)
        except IdentityFailedError as e:
            typer.echo(f"{check.id}: FAIL {e}")
            failed = True
            continue
        typer.echo(f"{check.id}: pass, cofactors {', '.join(result.cofactors)}")
    if failed:
        raise typer.Exit(1)


def emit_fixture_template(
    case: str, cases_dir: Path, root_type: str = "", generators: int = 0
) -> str:
    """The canonical text of an existing fixture, or an empty skeleton for a new case."""
    path = fixture_path(case, cases_dir)
    if path.exists():
        return render_fixture(load_fixture(path))
    return render_fixture(skeleton(case, root_type, generators))


@app.command()
def fixture(
    case: str = typer.Option(..., help="Case id"),
    out: Path | None = typer.Option(None, help="Output file (default: stdout)"),
    root_type: str = typer.Option("", help="Root type of a new skeleton"),
    generators: int = typer.Option(0, help="Generator slots of a new skeleton"),
    cases_dir: Path | None = typer.Option(None, help="Directory of case fixtures"),
) -> None:
    """Emit a case fixture in canonical form."""
    settings = _settings(CASES_DIR=cases_dir)
    try:
        text = emit_fixture_template(case, settings.CASES_DIR, root_type, generators)
    except FixtureError as e:
        typer.echo(str(e), err=True)
        raise typer.Exit(2) from None
    if out is None:
        typer.echo(text, nl=False)
    else:
        out.write_text(text, encoding="utf-8")


if __name__ == "__main__":
    app()
