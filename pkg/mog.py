"""MOG coordinates, PG(2,4) incidence and the Steiner system S(5,8,24).

Positions are the 24 cells of the 4x6 MOG box, numbered row-major from 0.
Column 1 holds the point at infinity of vertical lines and the three Romans,
column 2 the remaining points at infinity, columns 3..6 the affine plane
over F4 with x running along the columns and y down the rows.
"""

from __future__ import annotations

import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations, product
from typing import Literal

logger = logging.getLogger(__name__)

# F4 = {0, 1, w, wb} encoded as 0..3; addition is XOR.
F4 = (0, 1, 2, 3)
F4_NAMES = ("0", "1", "w", "wb")
F4_UNICODE = ("0", "1", "ω", "ω̄")
INF = 4  # slope of vertical lines in P^1(F4)
_EXP = (1, 2, 3)
_LOG = {1: 0, 2: 1, 3: 2}


def f4_mul(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return _EXP[(_LOG[a] + _LOG[b]) % 3]


def f4_parse(token: str) -> int:
    token = token.replace("ω̄", "wb").replace("ω", "w")
    if token not in F4_NAMES:
        raise UnknownLabelError(token)
    return F4_NAMES.index(token)


class UnknownLabelError(ValueError):
    def __init__(self, label: str) -> None:
        self.label = label
        super().__init__(f"Unknown MOG label: {label!r}")


class NotAnOctadError(ValueError):
    def __init__(self, mask: int) -> None:
        self.mask = mask
        super().__init__(f"Not an octad of the Steiner system: {format_mask(mask)}")


class SteinerCheckError(RuntimeError):
    def __init__(self, detail: str) -> None:
        self.detail = detail
        super().__init__(f"Steiner system self-check failed: {detail}")


# --- positions -------------------------------------------------------------

ROMAN_INDEX = {"I": 6, "II": 12, "III": 18}
INFINITY_INDEX = {INF: 0, 0: 1, 1: 7, 2: 13, 3: 19}
ROMANS_MASK = sum(1 << i for i in ROMAN_INDEX.values())
FULL_MASK = (1 << 24) - 1


def affine_index(x: int, y: int) -> int:
    return 6 * y + 2 + x


@dataclass(frozen=True)
class Position:
    index: int
    kind: Literal["roman", "infinity", "affine"]
    roman: str | None = None
    slope: int | None = None
    point: tuple[int, int] | None = None

    @property
    def label(self) -> str:
        if self.kind == "roman":
            return self.roman
        if self.kind == "infinity":
            return "inf_inf" if self.slope == INF else f"inf_{F4_NAMES[self.slope]}"
        x, y = self.point
        return f"({F4_NAMES[x]},{F4_NAMES[y]})"


def _build_positions() -> tuple[Position, ...]:
    cells: dict[int, Position] = {}
    for roman, idx in ROMAN_INDEX.items():
        cells[idx] = Position(idx, "roman", roman=roman)
    for slope, idx in INFINITY_INDEX.items():
        cells[idx] = Position(idx, "infinity", slope=slope)
    for x, y in product(F4, F4):
        idx = affine_index(x, y)
        cells[idx] = Position(idx, "affine", point=(x, y))
    return tuple(cells[i] for i in range(24))


POSITIONS = _build_positions()
POINTS_MASK = FULL_MASK ^ ROMANS_MASK


def bits(mask: int) -> list[int]:
    return [i for i in range(24) if mask >> i & 1]


def mask_of(indices) -> int:
    out = 0
    for i in indices:
        out |= 1 << i
    return out


def format_mask(mask: int) -> str:
    return "{" + ", ".join(POSITIONS[i].label for i in bits(mask)) + "}"


# --- lines of PG(2,4) --------------------------------------------------------


@dataclass(frozen=True)
class Line:
    """y = a*x + b for kind "y", x = a for kind "x", the line at infinity for "inf"."""

    kind: Literal["y", "x", "inf"]
    a: int = 0
    b: int = 0

    @property
    def mask(self) -> int:
        if self.kind == "inf":
            return mask_of(INFINITY_INDEX.values())
        if self.kind == "x":
            return mask_of([INFINITY_INDEX[INF]] + [affine_index(self.a, y) for y in F4])
        pts = [affine_index(x, f4_mul(self.a, x) ^ self.b) for x in F4]
        return mask_of([INFINITY_INDEX[self.a]] + pts)

    @property
    def label(self) -> str:
        if self.kind == "inf":
            return "L_inf"
        if self.kind == "x":
            return f"x={F4_NAMES[self.a]}"
        slope = {0: "", 1: "x"}.get(self.a, f"{F4_NAMES[self.a]}x")
        if not slope:
            return f"y={F4_NAMES[self.b]}"
        return f"y={slope}" if self.b == 0 else f"y={slope}+{F4_NAMES[self.b]}"


LINES: tuple[Line, ...] = (
    tuple(Line("y", m, b) for m in F4 for b in F4)
    + tuple(Line("x", c) for c in F4)
    + (Line("inf"),)
)
L_INF = LINES[-1]


def is_arc(mask: int) -> bool:
    return all((line.mask & mask).bit_count() < 3 for line in LINES)


# --- Sylvester labels relative to Q0 = {inf, 0, 1, 2, 3, 4} ---------------------

SYMBOLS = ("i", "0", "1", "2", "3", "4")
_SYMBOL_RANK = {s: k for k, s in enumerate(SYMBOLS)}

_SYLVESTER_ROWS = (
    ("i0.14.23", "i0.13.24", "i4.03.12", "i2.01.34", "i3.02.14", "i1.04.23"),
    ("I", "i0.12.34", "i1.02.34", "i3.04.12", "i2.03.14", "i4.01.23"),
    ("II", "i", "i2.04.13", "i4.02.13", "1", "3"),
    ("III", "0", "i3.01.24", "i1.03.24", "4", "2"),
)
SYLVESTER = {6 * r + c: lab for r, row in enumerate(_SYLVESTER_ROWS) for c, lab in enumerate(row)}
_BY_SYLVESTER = {lab: idx for idx, lab in SYLVESTER.items()}

Q0_MASK = mask_of(_BY_SYLVESTER[s] for s in SYMBOLS)


def _ascii(label: str) -> str:
    return label.replace("∞", "i").replace("ω̄", "wb").replace("ω", "w").replace(" ", "")


def to_unicode(label: str) -> str:
    if label in ROMAN_INDEX or label.startswith(("inf", "(", "y=", "x=", "L_")):
        return label
    return label.replace("i", "∞")


def duad(pair) -> str:
    a, b = sorted(pair, key=_SYMBOL_RANK.__getitem__)
    return a + b


def syntheme(duads) -> str:
    return ".".join(sorted((duad(d) for d in duads), key=lambda d: _SYMBOL_RANK[d[0]]))


def parse_syntheme(label: str) -> frozenset[str]:
    parts = _ascii(label).split(".")
    if len(parts) != 3 or any(len(p) != 2 for p in parts) or set("".join(parts)) != set(SYMBOLS):
        raise UnknownLabelError(label)
    return frozenset(duad(p) for p in parts)


def expand_total(label: str) -> tuple[str, ...]:
    """'a|bcdef' stands for ad.ce.bf, ae.bc.df, af.be.cd, ab.cf.de, ac.bd.ef."""
    text = _ascii(label)
    if not re.fullmatch(r"[i0-4]\|[i0-4]{5}", text) or len(set(text) - {"|"}) != 6:
        raise UnknownLabelError(label)
    a, b, c, d, e, f = text.replace("|", "")
    pattern = ((a + d, c + e, b + f), (a + e, b + c, d + f), (a + f, b + e, c + d),
               (a + b, c + f, d + e), (a + c, b + d, e + f))
    return tuple(syntheme(s) for s in pattern)


def sylvester_label(index: int, ascii: bool = True) -> str:
    label = SYLVESTER[index]
    return label if ascii else to_unicode(label)


def position_label(index: int, style: Literal["sylvester", "coords"] = "sylvester") -> str:
    return SYLVESTER[index] if style == "sylvester" else POSITIONS[index].label


def parse_position(label: str) -> int:
    """Accepts coordinates "(w,wb)", "inf_0".."inf_inf", Romans and Sylvester labels."""
    text = _ascii(label)
    if text in ROMAN_INDEX:
        return ROMAN_INDEX[text]
    if text in ("inf", "∞"):
        return _BY_SYLVESTER["i"]
    if text.startswith("inf_") or text.startswith("i_"):
        slope = text.split("_", 1)[1]
        return INFINITY_INDEX[INF if slope in ("inf", "i") else f4_parse(slope)]
    if m := re.fullmatch(r"\((\w+),(\w+)\)", text):
        return affine_index(f4_parse(m.group(1)), f4_parse(m.group(2)))
    if text in _BY_SYLVESTER:
        return _BY_SYLVESTER[text]
    if "." in text:
        target = parse_syntheme(text)
        for idx, lab in SYLVESTER.items():
            if "." in lab and parse_syntheme(lab) == target:
                return idx
    raise UnknownLabelError(label)


def duad_line(label: str) -> Line:
    text = _ascii(label)
    if len(text) != 2 or text[0] == text[1] or not set(text) <= set(SYMBOLS):
        raise UnknownLabelError(label)
    through = mask_of(_BY_SYLVESTER[s] for s in text)
    return next(line for line in LINES if line.mask & through == through)


def parse_line(label: str) -> Line:
    """Equations "y=wx+1", "x=0", "L_inf" or a duad such as "14" / "i0"."""
    text = _ascii(label)
    if text in ("L_inf", "L_i", "Linf", "Li"):
        return L_INF
    if text.startswith("x="):
        return Line("x", f4_parse(text[2:]))
    if text.startswith("y="):
        rhs = text[2:]
        if "x" in rhs:
            coef, _, rest = rhs.partition("x")
            slope = f4_parse(coef) if coef else 1
            intercept = f4_parse(rest.removeprefix("+")) if rest else 0
        else:
            slope, intercept = 0, f4_parse(rhs)
        return Line("y", slope, intercept)
    return duad_line(text)


def lines_meeting_oval(oval_mask: int) -> tuple[list[Line], list[Line]]:
    """Split the 21 lines into secants (2 points of the oval) and external lines."""
    secants = [line for line in LINES if (line.mask & oval_mask).bit_count() == 2]
    external = [line for line in LINES if not line.mask & oval_mask]
    if len(secants) + len(external) != len(LINES):
        raise UnknownLabelError(format_mask(oval_mask))
    return secants, external


def line_duad(line: Line) -> str:
    meet = line.mask & Q0_MASK
    if meet.bit_count() != 2:
        raise UnknownLabelError(line.label)
    return duad(SYLVESTER[i] for i in bits(meet))


def total_of_axis(line: Line) -> str:
    if line.mask & Q0_MASK:
        raise UnknownLabelError(line.label)
    synthemes = {frozenset(parse_syntheme(SYLVESTER[i])) for i in bits(line.mask)}
    for a in SYMBOLS:
        rest = [s for s in SYMBOLS if s != a]
        for perm in permutations(rest):
            label = a + "|" + "".join(perm)
            if {parse_syntheme(s) for s in expand_total(label)} == synthemes:
                return label
    raise UnknownLabelError(line.label)


def duad_lines() -> dict[str, Line]:
    secants, _ = lines_meeting_oval(Q0_MASK)
    return dict(sorted((line_duad(line), line) for line in secants))


def total_axes() -> dict[str, Line]:
    _, external = lines_meeting_oval(Q0_MASK)
    return dict(sorted((total_of_axis(line), line) for line in external))


def parse_line_or_total(label: str) -> Line:
    if "|" in label:
        target = {parse_syntheme(s) for s in expand_total(label)}
        for line in total_axes().values():
            if {parse_syntheme(SYLVESTER[i]) for i in bits(line.mask)} == target:
                return line
        raise UnknownLabelError(label)
    return parse_line(label)


def incidence(line_or_total: str, point: str) -> bool:
    return bool(parse_line_or_total(line_or_total).mask >> parse_position(point) & 1)


# --- hexacode and Golay code ---------------------------------------------------


def hexacode() -> list[tuple[int, ...]]:
    """Words (a, b, c, p(1), p(w), p(wb)) for p(x) = a x^2 + b x + c."""
    words = []
    for a, b, c in product(F4, F4, F4):
        values = [f4_mul(a, f4_mul(x, x)) ^ f4_mul(b, x) ^ c for x in (1, 2, 3)]
        words.append((a, b, c, *values))
    return words


def _column_choices() -> dict[tuple[int, int], list[int]]:
    # rows carry the labels 0, 1, w, wb; a column subset scores the sum of its labels
    choices: dict[tuple[int, int], list[int]] = {}
    for subset in range(16):
        rows = [r for r in range(4) if subset >> r & 1]
        score = 0
        for r in rows:
            score ^= r
        choices.setdefault((score, len(rows) % 2), []).append(subset)
    return choices


def golay_codewords() -> list[int]:
    choices = _column_choices()
    words = []
    for word in hexacode():
        for parity in (0, 1):
            options = [choices[(digit, parity)] for digit in word]
            for pick in product(*options):
                if sum(col & 1 for col in pick) % 2 != parity:
                    continue
                mask = 0
                for c, col in enumerate(pick):
                    for r in range(4):
                        if col >> r & 1:
                            mask |= 1 << (6 * r + c)
                words.append(mask)
    return words


def gf2_rank(words) -> int:
    pivots: dict[int, int] = {}
    for w in words:
        while w:
            top = w.bit_length() - 1
            if top not in pivots:
                pivots[top] = w
                break
            w ^= pivots[top]
    return len(pivots)


# --- Steiner system ------------------------------------------------------------


@dataclass(frozen=True)
class Oval:
    mask: int
    romans: int = 0

    @property
    def octad(self) -> int:
        return self.mask | self.romans

    def labels(self, ascii: bool = True) -> list[str]:
        return [sylvester_label(i, ascii) for i in bits(self.mask)]


@dataclass(frozen=True)
class OctadClass:
    tag: Literal["3+5", "2+6", "1+7", "0+8"]
    octad: int
    payload: Line | Oval | int | tuple[Line, Line]


@dataclass(frozen=True)
class SteinerSystem:
    codewords: frozenset[int]
    octads: tuple[int, ...]
    _five_sets: dict[int, int] = field(repr=False, compare=False, default_factory=dict)

    def octad_containing(self, five: int) -> int:
        if five.bit_count() != 5:
            raise ValueError(f"Expected a 5-set, got {format_mask(five)}")
        return self._five_sets[five]

    def octad_through(self, mask: int) -> int:
        """The unique octad containing a set of at least five positions."""
        first_five = mask_of(bits(mask)[:5])
        octad = self.octad_containing(first_five)
        if octad & mask != mask:
            raise NotAnOctadError(mask)
        return octad

    def is_octad(self, mask: int) -> bool:
        return mask.bit_count() == 8 and mask in self.codewords

    def ovals(self) -> list[Oval]:
        out = []
        for o in self.octads:
            if (o & ROMANS_MASK).bit_count() == 2:
                out.append(Oval(o & POINTS_MASK, o & ROMANS_MASK))
        return out

    def oval(self, points_mask: int) -> Oval:
        if points_mask.bit_count() != 6 or points_mask & ROMANS_MASK or not is_arc(points_mask):
            raise NotAnOctadError(points_mask)
        octad = self.octad_through(points_mask)
        return Oval(points_mask, octad & ROMANS_MASK)


def build_steiner() -> SteinerSystem:
    words = golay_codewords()
    codewords = frozenset(words)
    weights = Counter(w.bit_count() for w in codewords)
    if len(codewords) != 4096 or len(words) != 4096:
        raise SteinerCheckError(f"expected 4096 codewords, got {len(codewords)}")
    if weights != Counter({0: 1, 8: 759, 12: 2576, 16: 759, 24: 1}):
        raise SteinerCheckError(f"weight enumerator {dict(sorted(weights.items()))}")
    if gf2_rank(codewords) != 12:
        raise SteinerCheckError("code is not closed under symmetric difference")

    octads = tuple(sorted(w for w in codewords if w.bit_count() == 8))
    five_sets: dict[int, int] = {}
    for octad in octads:
        for five in combinations(bits(octad), 5):
            key = mask_of(five)
            if key in five_sets:
                raise SteinerCheckError(f"5-set {format_mask(key)} lies in two octads")
            five_sets[key] = octad
    if len(five_sets) != 42504:
        raise SteinerCheckError(f"octads cover {len(five_sets)} of 42504 5-sets")

    logger.debug("Built Steiner system: %d octads", len(octads))
    return SteinerSystem(codewords, octads, five_sets)


@lru_cache(maxsize=1)
def steiner_system() -> SteinerSystem:
    return build_steiner()


def _is_fano_subplane(points: int) -> bool:
    meets = Counter((line.mask & points).bit_count() for line in LINES)
    return set(meets) <= {1, 3} and meets[3] == 7


def classify_octad(octad: int, system: SteinerSystem | None = None) -> OctadClass:
    system = system or steiner_system()
    if not system.is_octad(octad):
        raise NotAnOctadError(octad)
    points = octad & POINTS_MASK
    romans = (octad & ROMANS_MASK).bit_count()
    if romans == 3:
        line = next((ln for ln in LINES if ln.mask == points), None)
        if line is not None:
            return OctadClass("3+5", octad, line)
    elif romans == 2:
        if is_arc(points):
            return OctadClass("2+6", octad, Oval(points, octad & ROMANS_MASK))
    elif romans == 1:
        if _is_fano_subplane(points):
            return OctadClass("1+7", octad, points)
    else:
        pair = [ln for ln in LINES if (ln.mask & points).bit_count() == 4]
        if len(pair) == 2 and pair[0].mask ^ pair[1].mask == points:
            return OctadClass("0+8", octad, (pair[0], pair[1]))
    raise SteinerCheckError(f"octad {format_mask(octad)} has no valid PG(2,4) payload")


def ovals_through_triple(triple: list[str], system: SteinerSystem | None = None) -> list[Oval]:
    """The two ovals meeting Q0 in exactly the given three of its points, ordered by
    their Roman-pair bitmask (so {I, II} precedes {I, III})."""
    system = system or steiner_system()
    t_mask = mask_of(parse_position(p) for p in triple)
    if t_mask.bit_count() != 3 or t_mask & ~Q0_MASK:
        raise ValueError(f"Expected three points of Q0, got {triple!r}")
    found = [q for q in system.ovals() if q.mask & Q0_MASK == t_mask]
    return sorted(found, key=lambda q: q.romans)


def roman_names(mask: int) -> list[str]:
    return [r for r, idx in ROMAN_INDEX.items() if mask >> idx & 1]


def dump_octads(system: SteinerSystem | None = None, ascii: bool = True) -> list[list[str]]:
    system = system or steiner_system()
    return [[sylvester_label(i, ascii) for i in bits(o)] for o in system.octads]


def dump_ovals(system: SteinerSystem | None = None, ascii: bool = True) -> list[dict]:
    system = system or steiner_system()
    return [
        {"points": q.labels(ascii), "romans": roman_names(q.romans)}
        for q in sorted(system.ovals(), key=lambda q: q.mask)
    ]
