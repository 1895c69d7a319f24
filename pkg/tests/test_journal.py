import json
import threading
from fractions import Fraction

import pytest

from journal import CheckJournal, CheckRecord, render_report, report_timestamp


def _record(check_id, status="pass", **kwargs):
    return CheckRecord(id=check_id, anchor="anchor text", status=status, **kwargs)


def test_write_and_read_roundtrip(tmp_journal):
    journal = CheckJournal(tmp_journal)
    journal.load()
    journal.write(_record("faces:generic-d4", case="generic-d4", expected=42, actual=42))
    journal.write(_record("identity:prank1_phi", "fail", expected="0", actual="x"))
    journal.close()

    # Reload from disk
    journal2 = CheckJournal(tmp_journal)
    records = journal2.load()
    assert len(records) == 2
    assert records["faces:generic-d4"].case == "generic-d4"
    assert records["faces:generic-d4"].actual == 42
    assert records["identity:prank1_phi"].status == "fail"


def test_is_done_after_write(tmp_journal):
    journal = CheckJournal(tmp_journal)
    journal.load()
    assert not journal.is_done("steiner")
    journal.write(_record("steiner"))
    assert journal.is_done("steiner")
    journal.close()


def test_failures_are_not_done(tmp_journal):
    j1 = CheckJournal(tmp_journal)
    j1.load()
    j1.write(_record("a"))
    j1.write(_record("b", "fail"))
    j1.write(_record("c", "error"))
    j1.close()

    j2 = CheckJournal(tmp_journal)
    j2.load()
    assert j2.is_done("a")
    assert not j2.is_done("b")
    assert not j2.is_done("c")
    j2.close()


def test_malformed_line_tolerance(tmp_journal):
    good = _record("a").model_dump_json()
    with open(tmp_journal, "w", encoding="utf-8") as f:
        f.write(good + "\n")
        f.write("THIS IS NOT JSON\n")
        f.write(json.dumps({"id": "b", "status": "maybe"}) + "\n")
        f.write(_record("c").model_dump_json() + "\n")

    journal = CheckJournal(tmp_journal)
    records = journal.load()
    assert sorted(records) == ["a", "c"]


def test_last_record_wins(tmp_journal):
    with open(tmp_journal, "w", encoding="utf-8") as f:
        f.write(_record("a", "error", detail="boom").model_dump_json() + "\n")
        f.write(_record("a").model_dump_json() + "\n")

    journal = CheckJournal(tmp_journal)
    records = journal.load()
    assert len(records) == 1
    assert records["a"].status == "pass"
    assert journal.is_done("a")


def test_fractions_are_stored_as_strings(tmp_journal):
    rec = _record("x", expected={Fraction(-3, 4): 8, "-1": Fraction(2)})
    assert rec.expected == {"-3/4": 8, "-1": 2}

    journal = CheckJournal(tmp_journal)
    journal.load()
    journal.write(rec)
    journal.close()
    assert CheckJournal(tmp_journal).load()["x"].expected == {"-3/4": 8, "-1": 2}


def test_concurrent_writes_no_interleave(tmp_journal):
    journal = CheckJournal(tmp_journal)
    journal.load()

    def write_batch(start):
        for i in range(50):
            journal.write(_record(f"check_{start + i}", detail="x" * 200))

    t1 = threading.Thread(target=write_batch, args=(0,))
    t2 = threading.Thread(target=write_batch, args=(50,))
    t1.start()
    t2.start()
    t1.join()
    t2.join()
    journal.close()

    with open(tmp_journal, encoding="utf-8") as f:
        lines = [line.strip() for line in f if line.strip()]
    assert len(lines) == 100
    for line in lines:
        assert "id" in json.loads(line)


def test_summary(tmp_journal):
    journal = CheckJournal(tmp_journal)
    journal.load()
    journal.write(_record("a"))
    journal.write(_record("b", "fail"))
    journal.write(_record("c"))
    s = journal.summary()
    journal.close()
    assert "3 check(s)" in s
    assert "2 pass" in s
    assert "1 fail" in s


def test_timestamp_honours_source_date_epoch(monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "0")
    assert report_timestamp() == "1970-01-01T00:00:00Z"


def test_json_report_is_sorted_and_stable(monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "1700000000")
    records = [_record("b", case="generic-d4"), _record("a", "fail", expected=1, actual=2)]
    first = render_report(records, "json")
    assert first == render_report(list(reversed(records)), "json")

    report = json.loads(first)
    assert report["version"] == 1
    assert [c["id"] for c in report["checks"]] == ["a", "b"]
    assert report["checks"][0]["paper_anchor"] == "anchor text"
    assert report["checks"][0]["expected"] == 1


def test_markdown_report_groups_by_case():
    records = [
        _record("faces:generic-d4", case="generic-d4"),
        _record("identity:delta0_mod2", "fail", expected="D^2 E", actual="a|b"),
    ]
    md = render_report(records, "md")
    assert "## generic-d4" in md
    assert "## global" in md
    assert "1 pass, 1 fail, 0 error" in md
    assert "a\\|b" in md


def test_unknown_report_format():
    with pytest.raises(ValueError, match="Unknown report format"):
        render_report([], "html")
