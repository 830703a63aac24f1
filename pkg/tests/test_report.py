import json

import jsonschema

from jacobi_racah.report import CSV_HEADER, REPORT_SCHEMA, Report, reports_to_csv


def _sample():
    r = Report("demo", ["1/2", "3/2"], {"N": 2}, seed=3)
    r.add("ok", True, "ignored")
    r.add("bad", False, "l=0: 1 vs 2")
    return r


def test_witness_present_iff_fail():
    d = _sample().to_dict()
    assert "witness" not in d["checks"][0]
    assert d["checks"][1]["witness"] == "l=0: 1 vs 2"


def test_json_validates():
    jsonschema.validate(json.loads(_sample().to_json()), REPORT_SCHEMA)


def test_passed_and_failures():
    r = _sample()
    assert not r.passed and [c.name for c in r.failures()] == ["bad"]


def test_text_and_csv_forms():
    r = _sample()
    text = r.to_text()
    assert "[PASS] ok" in text and "[FAIL] bad" in text and "1/2 checks passed" in text
    lines = reports_to_csv([r]).splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert lines[2].endswith("fail,l=0: 1 vs 2")


def test_extend_prefixes_names():
    r = Report("outer", [], {})
    r.extend(_sample(), "inner: ")
    assert [c.name for c in r.checks] == ["inner: ok", "inner: bad"]
