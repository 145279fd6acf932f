from fractions import Fraction

import pytest

from pygqe.gqe.mode import Mode
from pygqe.gqe.verdict import Verdict
from pygqe.scan import (
    ScanSpec,
    ScanSpecError,
    readValues,
    runScan
)

def lineSpec(**extra) -> dict:
    spec = {
        "d0": 0,
        "dinf": 0,
        "factors": [
            {"d": 1, "s": "-2", "x": {"start": "0.05", "stop": "0.95", "steps": 19}},
            {"d": 1, "s": "2", "x": {"follows": 0, "scale": "-1"}}
        ]
    }
    spec.update(extra)
    return spec

def test_read_values():
    assert readValues(["0.1", "1/3"], "x") == (Fraction(1, 10), Fraction(1, 3))
    assert readValues({"values": [1]}, "x") == (Fraction(1), )
    values = readValues({"start": "-10", "stop": "10", "steps": 81}, "b")
    assert len(values) == 81
    assert (values[0], values[-1]) == (-10, 10)
    assert values[1] - values[0] == Fraction(1, 4)

@pytest.mark.parametrize("payload", [
    [],
    {"start": "0", "stop": "1"},
    {"start": "0", "stop": "1", "steps": 0},
    ["a half"],
    "0.5"
])
def test_read_values_rejects_bad_axes(payload):
    with pytest.raises(ScanSpecError):
        readValues(payload, "x")

def test_from_dict_rejects_bad_specs():
    with pytest.raises(ScanSpecError):
        ScanSpec.fromDict([])
    with pytest.raises(ScanSpecError):
        ScanSpec.fromDict(lineSpec(mode = "extremal"))
    with pytest.raises(ScanSpecError):
        ScanSpec.fromDict(lineSpec(b = [1, 2]))
    with pytest.raises(ScanSpecError):
        ScanSpec.fromDict(lineSpec(d0 = -1))

    spec = lineSpec()
    spec["factors"][1]["x"] = {"follows": 1}
    with pytest.raises(ScanSpecError, match = "free factor"):
        ScanSpec.fromDict(spec)

def test_tied_axes_and_header():
    spec = ScanSpec.fromDict(lineSpec())
    points = spec.points()
    assert len(points) == 19
    assert points[0] == ((Fraction(1, 20), Fraction(-1, 20)), None)
    assert points[-1] == ((Fraction(19, 20), Fraction(-19, 20)), None)
    assert spec.header() == ["x_1", "x_2", "verdict", "k", "margin", "root_count", "futaki_k", "millis"]

def test_generalized_points_put_b_innermost():
    spec = ScanSpec.fromDict(lineSpec(mode = "generalized", b = ["-1", "1"]))
    assert spec.mode is Mode.Generalized
    assert [b for (_, b) in spec.points()[:4]] == [-1, 1, -1, 1]
    assert "b" in spec.header()
    assert ScanSpec.fromDict(lineSpec(mode = "generalized")).bValues == (0, )

def test_scan_along_the_line_finds_the_transition():
    result = runScan(ScanSpec.fromDict(lineSpec()), timing = False)
    verdicts = {record.xs[0]: record.verdict for record in result.records}
    assert verdicts[Fraction(1, 20)] is Verdict.Exists
    assert verdicts[Fraction(3, 4)] is Verdict.Exists
    assert verdicts[Fraction(4, 5)] is Verdict.FailsPositivity

    summary = result.summary
    assert summary["points"] == summary["evaluated"] == 19
    assert summary["skipped"] == 0
    assert summary["counts"]["exists"] == 15
    assert summary["all_exist_threshold"] == "0.75"

    first = summary["transitions"][0]
    assert first["from"] == {"x_1": "0.75", "x_2": "-0.75"}
    assert first["to"] == {"x_1": "0.8", "x_2": "-0.8"}
    assert (first["from_verdict"], first["to_verdict"]) == ("exists", "fails_positivity")

    rows = result.rows()
    assert rows[0]["verdict"] == "exists"
    assert rows[0]["futaki_k"] == "0"
    assert all(row["millis"] == 0 for row in rows)

def test_points_outside_the_cone_are_skipped():
    spec = lineSpec()
    spec["factors"][0]["x"] = ["0.5", "1", "1.5"]
    result = runScan(ScanSpec.fromDict(spec), timing = False)
    assert [record.xs[0] for record in result.records] == [Fraction(1, 2)]
    assert len(result.skipped) == 2
    assert result.summary["points"] == 3
    assert result.summary["skipped"] == 2

def test_parallel_scan_is_deterministic():
    spec = lineSpec()
    spec["factors"][0]["x"] = {"start": "0.1", "stop": "0.9", "steps": 9}
    spec["factors"][1]["x"] = {"values": ["-0.75", "-0.5"]}
    scanSpec = ScanSpec.fromDict(spec)
    serial = runScan(scanSpec, jobs = 1, timing = False)
    parallel = runScan(scanSpec, jobs = 2, timing = False)
    assert serial.rows() == parallel.rows()
    assert serial.summary == parallel.summary
    assert len(serial.records) == 18

def test_generalized_scan_of_the_failing_class():
    spec = ScanSpec.fromDict({
        "d0": 0,
        "dinf": 0,
        "mode": "generalized",
        "b": {"start": "-10", "stop": "10", "steps": 81},
        "factors": [
            {"d": 1, "s": "-2", "x": ["0.8"]},
            {"d": 1, "s": "2", "x": ["-0.8"]}
        ]
    })
    result = runScan(spec, timing = False)
    assert len(result.records) == 81

    byB = {record.b: record.verdict for record in result.records}
    assert byB[Fraction(0)] is Verdict.FailsPositivity
    assert any(verdict is Verdict.Exists for (b, verdict) in byB.items() if b != 0)
    assert result.summary["exists_bounding_box"]["x_1"] == ["0.8", "0.8"]
