import csv
import io
import json

import numpy as np
import pytest

from relbound.cli import run_eig, run_sharp, run_sv
from relbound.harness.generators import InstanceSpec, Signed, gen_hermitian, gen_perturbation
from relbound.harness.report import SCHEMA_VERSION, RunReport, rows_to_csv, to_record
from relbound.sharpness import Condition


@pytest.fixture
def pair():
    A = gen_hermitian(InstanceSpec(n=6, rank=4, spectrum=Signed(0.1, 10), seed=1))
    return A, gen_perturbation(A, 0.4, seed=2)


def test_to_record_values():
    rec = to_record({"a": (1, np.float64(2.5)), "b": np.array([1 + 2j]), "c": Condition.EQ28, "d": np.bool_(True)})
    assert rec == {"a": [1, 2.5], "b": [{"re": 1.0, "im": 2.0}], "c": Condition.EQ28.value, "d": True}
    with pytest.raises(TypeError):
        to_record(object())


def test_json_round_trip(pair):
    A, E = pair
    for report in (run_eig(A, E), run_sharp(A, E), run_sv(A, E, polar_k=True)):
        text = report.to_json()
        assert json.loads(text)["schema_version"] == SCHEMA_VERSION
        back = RunReport.from_json(text)
        assert back == report
        assert back.to_json() == text


def test_round_trip_is_lossless_for_floats():
    r = RunReport("eig", k_estimates={"x": {"value": 0.1 + 0.2}}, timing={"s": 1 / 3})
    assert RunReport.from_json(r.to_json()).k_estimates["x"]["value"] == 0.1 + 0.2


def test_schema_version_checked():
    data = json.loads(RunReport("eig").to_json())
    data["schema_version"] = "relbound.run/0"
    with pytest.raises(ValueError):
        RunReport.from_json(json.dumps(data))


def test_verdict_view_drops_timing(pair):
    A, E = pair
    a, b = run_eig(A, E), run_eig(A, E)
    assert a.timing != {} and "timing" not in a.verdict_view()
    assert a.verdict_view() == b.verdict_view()


def test_csv_export(pair):
    A, E = pair
    report = run_eig(A, E)
    rows = list(csv.DictReader(io.StringIO(rows_to_csv(report.per_index_rows()))))
    assert [int(r["index"]) for r in rows] == [1, 2, 3, 4]
    for row, entry in zip(rows, report.bounds["entries"]):
        assert float(row["lower"]) == entry["lower"]
        assert float(row["upper"]) == entry["upper"]
    sharp = list(csv.DictReader(io.StringIO(rows_to_csv(run_sharp(A, E).per_index_rows()))))
    assert {r["table"] for r in sharp} == {"sharp"} and len(sharp) == 4


def test_csv_union_header():
    text = rows_to_csv([{"a": 1}, {"b": [1, 2], "a": 0.5}])
    assert text.splitlines() == ["a,b", "1,", '0.5,"[1, 2]"']
