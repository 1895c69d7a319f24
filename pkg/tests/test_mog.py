from collections import Counter
from itertools import combinations

import pytest

import mog


def test_steiner_system_has_759_octads(steiner):
    assert len(steiner.codewords) == 4096
    assert len(steiner.octads) == 759
    weights = Counter(w.bit_count() for w in steiner.codewords)
    assert weights == {0: 1, 8: 759, 12: 2576, 16: 759, 24: 1}


def test_octads_meet_in_0_2_or_4_points(steiner):
    sizes = {(a & b).bit_count() for a, b in combinations(steiner.octads, 2)}
    assert sizes == {0, 2, 4}


def test_five_set_determines_octad(steiner):
    five = mog.mask_of(
        [mog.ROMAN_INDEX["I"], mog.ROMAN_INDEX["II"], mog.ROMAN_INDEX["III"]]
        + [mog.parse_position("inf_0"), mog.parse_position("inf_1")]
    )
    octad = steiner.octad_containing(five)
    assert octad == mog.ROMANS_MASK | mog.L_INF.mask


def test_octad_containing_rejects_other_sizes(steiner):
    with pytest.raises(ValueError, match="Expected a 5-set"):
        steiner.octad_containing(mog.mask_of(range(4)))


def test_octad_class_histogram(steiner):
    tags = Counter(mog.classify_octad(o, steiner).tag for o in steiner.octads)
    assert tags == {"3+5": 21, "2+6": 168, "1+7": 360, "0+8": 210}


def test_romans_plus_line_at_infinity_is_3_plus_5(steiner):
    cls = mog.classify_octad(mog.ROMANS_MASK | mog.L_INF.mask, steiner)
    assert cls.tag == "3+5"
    assert cls.payload == mog.L_INF


def test_every_2_plus_6_payload_is_an_arc(steiner):
    ovals = [c.payload for c in map(mog.classify_octad, steiner.octads) if c.tag == "2+6"]
    assert len(ovals) == 168
    assert all(mog.is_arc(q.mask) for q in ovals)


def test_classify_rejects_non_octads(steiner):
    with pytest.raises(mog.NotAnOctadError):
        mog.classify_octad(mog.mask_of(range(8)), steiner)


def test_q0_completes_with_romans_ii_and_iii(steiner):
    oval = steiner.oval(mog.Q0_MASK)
    assert mog.roman_names(oval.romans) == ["II", "III"]
    assert sorted(oval.labels()) == sorted(mog.SYMBOLS)


def test_two_ovals_through_each_triple_of_q0(steiner):
    for triple in combinations(mog.SYMBOLS, 3):
        found = mog.ovals_through_triple(list(triple), steiner)
        assert len(found) == 2
        assert [mog.roman_names(q.romans) for q in found] == [["I", "II"], ["I", "III"]]


def test_ovals_through_triple_needs_points_of_q0(steiner):
    with pytest.raises(ValueError, match="three points of Q0"):
        mog.ovals_through_triple(["0", "1", "I"], steiner)


def test_lines_meeting_q0():
    secants, external = mog.lines_meeting_oval(mog.Q0_MASK)
    assert (len(secants), len(external)) == (15, 6)
    assert len(mog.duad_lines()) == 15
    assert len(mog.total_axes()) == 6


def test_duad_line_i0_is_the_line_at_infinity():
    line = mog.duad_line("∞0")
    labels = {mog.SYLVESTER[i] for i in mog.bits(line.mask)}
    assert labels == {"i", "0", "i0.12.34", "i0.13.24", "i0.14.23"}
    assert line == mog.L_INF


def test_incidence():
    assert mog.incidence("i0", "i0.13.24")
    assert mog.incidence("i0", "∞")
    assert not mog.incidence("i0", "1")


def test_total_expands_to_five_disjoint_synthemes():
    synthemes = mog.expand_total("i|01234")
    assert len(synthemes) == 5
    duads = [d for s in synthemes for d in mog.parse_syntheme(s)]
    assert len(set(duads)) == 15


def test_every_total_axis_round_trips_through_its_label():
    for label, line in mog.total_axes().items():
        assert mog.parse_line_or_total(label) == line


@pytest.mark.parametrize(
    "label, index",
    [
        ("I", 6),
        ("III", 18),
        ("inf_inf", 0),
        ("inf_1", 7),
        ("(w,wb)", 22),
        ("(ω,ω̄)", 22),
        ("∞", 13),
        ("i0.12.34", 7),
        ("i0.34.12", 7),
    ],
)
def test_parse_position(label, index):
    assert mog.parse_position(label) == index


def test_parse_line_equations():
    assert mog.parse_line("y=x").mask == mog.Line("y", 1, 0).mask
    assert mog.parse_line("y=wx+1") == mog.Line("y", 2, 1)
    assert mog.parse_line("x=wb") == mog.Line("x", 3)
    assert mog.parse_line("L_inf") == mog.L_INF


@pytest.mark.parametrize("label", ["zz", "(0,5)", "ii", "i0.12", "i|0123"])
def test_unknown_labels(label):
    parse = mog.parse_line_or_total if "|" in label else mog.parse_position
    with pytest.raises(mog.UnknownLabelError):
        parse(label)


def test_dump_ovals_lists_roman_pairs(steiner):
    dump = mog.dump_ovals(steiner)
    assert len(dump) == 168
    assert Counter(tuple(d["romans"]) for d in dump) == {
        ("I", "II"): 56,
        ("I", "III"): 56,
        ("II", "III"): 56,
    }
