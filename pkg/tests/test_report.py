import csv
import io
import json

from mcflab.report import CSV_FIELDS, SCHEMA, Record, ReportDocument


def make():
    doc = ReportDocument(["mcf-lab", "measure"], 42)
    with doc.timed("run"):
        doc.add(Record("cylinder-measure", {"system": "gs", "n": 2, "digits": ["1"]},
                       [{"digits": ["1"], "value": 0.5, "stderr": 0.01, "samples": 10, "seed": 42, "method": "x"}]))
        doc.add(Record("note", {"system": "gauss"}, [], "pass", 'a "quoted", note'))
    return doc


def test_json_schema_and_determinism():
    a, b = make(), make()
    d = json.loads(a.to_json())
    assert d["schema"] == SCHEMA and "timings" in d
    assert a.to_json(strip_timings=True) == b.to_json(strip_timings=True)
    assert "timings" not in json.loads(a.to_json(strip_timings=True))


def test_csv_mirrors_records():
    text = make().to_csv()
    assert text.endswith("\r\n")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert list(rows[0]) == CSV_FIELDS
    assert rows[0]["value"] == "0.5" and rows[1]["verdict"] == "pass"
