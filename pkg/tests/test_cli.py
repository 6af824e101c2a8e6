import csv
import io
import json
from pathlib import Path

import jsonschema
import pytest
import yaml

from slicepressure.cli import SUMMARY_COLUMNS, main

SCHEMA = json.loads((Path(__file__).parents[1] / "docs" / "dimension_report.schema.json").read_text())


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_count_all_methods_agree(capsys):
    code, out, _ = run(capsys, "count", "--p", "1", "--q", "2", "--n", "8", "--method", "all")
    assert code == 0
    table = rows(out)
    assert table[0] == ["n", "oracle", "paths", "cocycle"]
    assert all(r[1] == r[2] == r[3] for r in table[1:])
    assert table[-1] == ["8", "116461", "116461", "116461"]


def test_count_json(capsys):
    code, out, _ = run(capsys, "count", "--p", "1", "--q", "2", "--n", "2", "--format", "json")
    assert code == 0
    assert json.loads(out)["rows"][-1] == {"n": 2, "paths": "13"}


def test_not_coprime_is_usage_error(capsys):
    code, _, err = run(capsys, "count", "--p", "2", "--q", "4", "--n", "3")
    assert code == 2 and "NotCoprime" in err


def test_bad_flag_is_usage_error(capsys):
    code, _, _ = run(capsys, "count", "--p", "1")
    assert code == 2


def test_cap_is_computation_error(capsys):
    code, _, err = run(capsys, "count", "--p", "1", "--q", "2", "--n", "12", "--method", "oracle")
    assert code == 1 and "CapExceeded" in err


def test_dimension_report_schema(capsys):
    code, out, _ = run(capsys, "dimension", "--p", "1", "--q", "1")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    assert doc["dim_lower"] == pytest.approx(0.848002, abs=1e-5)


def test_growth_fourier_contraction(capsys):
    code, out, _ = run(capsys, "growth", "--p", "1", "--q", "2")
    assert code == 0 and json.loads(out)
    code, out, _ = run(capsys, "fourier", "--p", "1", "--q", "2", "--n-max", "5")
    assert code == 0 and json.loads(out)
    code, out, _ = run(capsys, "contraction", "--samples", "1000")
    assert code == 0 and json.loads(out)


def test_pressure_entropy_gibbs_tables(capsys):
    for argv, header in [
        (("pressure", "--p", "1", "--q", "2", "--n", "5"), ["n", "L_n", "S_n"]),
        (("entropy", "--p", "1", "--q", "2", "--n", "4"), ["n", "H_n", "H_n_over_n", "increment", "jensen_rhs", "jensen_ok"]),
        (("gibbs", "--p", "1", "--q", "2", "--n", "6"), ["n", "log_C_n_over_n"]),
        (("gibbs", "--p", "1", "--q", "2", "--masses", "2"), ["word", "mass", "mass_float"]),
    ]:
        code, out, _ = run(capsys, *argv)
        assert code == 0
        assert rows(out)[0] == header


def test_export_dot(capsys, tmp_path):
    target = tmp_path / "a.dot"
    code, _, _ = run(capsys, "automaton-export", "--p", "1", "--q", "2", "--out", str(target))
    assert code == 0 and target.read_text().startswith("digraph")
    code, out, _ = run(capsys, "automaton-export", "--p", "1", "--q", "2", "--kind", "subshift")
    assert code == 0 and "->" in out


def test_repeat_runs_byte_identical(capsys):
    argv = ("contraction", "--samples", "2000", "--seed", "4")
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_cache_dir_used(capsys, tmp_path):
    argv = ("count", "--p", "1", "--q", "3", "--n", "6", "--cache-dir", str(tmp_path))
    first = run(capsys, *argv)[1]
    assert list(tmp_path.glob("*.json"))
    assert run(capsys, *argv)[1] == first


def test_batch_empty(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"slopes": []}))
    code, out, _ = run(capsys, "batch", "--config", str(cfg), "--out-dir", str(tmp_path / "o"))
    assert code == 0
    assert rows(out) == [list(SUMMARY_COLUMNS)]


def test_batch_cap_errors(capsys, tmp_path):
    cfg = tmp_path / "c.yaml"
    cfg.write_text(yaml.safe_dump({"slopes": [[1, 2]], "computations": ["count"], "n": {"count": 12}}))
    code, out, err = run(capsys, "batch", "--config", str(cfg), "--out-dir", str(tmp_path / "o"))
    assert code == 1 and "1/2" in err
    doc = json.loads((tmp_path / "o" / "slope_1_2.json").read_text())
    assert "CapExceeded" in doc["errors"]["count"]


def test_batch_bad_config(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"slopes": [[2, 4]]}))
    assert run(capsys, "batch", "--config", str(cfg), "--out-dir", str(tmp_path))[0] == 2
    cfg.write_text(json.dumps({"bogus": 1}))
    assert run(capsys, "batch", "--config", str(cfg), "--out-dir", str(tmp_path))[0] == 2


@pytest.mark.slow
def test_batch_sweep_q12(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"max_q": 12, "computations": ["entropy"], "n": {"entropy": 6}, "workers": 2}))
    out_dir = tmp_path / "o"
    code, out, _ = run(capsys, "batch", "--config", str(cfg), "--out-dir", str(out_dir))
    assert code == 0
    table = rows(out)
    assert table[0] == list(SUMMARY_COLUMNS) and len(table) == 47
    assert all(r[5] == "true" and r[6] == "ok" for r in table[1:])
    for path in out_dir.glob("slope_*.json"):
        jsonschema.validate(json.loads(path.read_text())["dimension"], SCHEMA)
    assert (out_dir / "summary.csv").read_text() == out
