import io
import json
import subprocess
import sys

import pytest

from hypersplit.fault_model import load_model, save_model
from hypersplit.generators import gen_repetition, gen_surface_perfect
from hypersplit.harness.cli import main
from hypersplit.harness.sampling import WORKERS_ENV


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out)
    return code, out.getvalue()


@pytest.fixture
def rep5_files(tmp_path):
    model = tmp_path / "rep5.fm"
    split = tmp_path / "rep5s.fm"
    report = tmp_path / "rep5.json"
    assert run("gen", "repetition", "--n", 5, "--p", 0.05, "-o", model)[0] == 0
    assert run("split", "-i", model, "--method", "decoder", "-o", split,
               "--report", report)[0] == 0
    return model, split, report


def test_gen_then_recursive_split(tmp_path):
    a, b = tmp_path / "rep5.fm", tmp_path / "rep5s.fm"
    assert run("gen", "repetition", "--n", 5, "--p", 0.05, "-o", a)[0] == 0
    code, text = run("split", "-i", a, "--method", "recursive", "-o", b)
    assert code == 0 and "0 unsplittable" in text
    assert load_model(b).equivalent(load_model(a))
    assert load_model(a) == gen_repetition(5, 0.05)


def test_gen_families(tmp_path):
    cases = [
        ("surface_perfect", "--d", 3, "--p", 0.01),
        ("surface_perfect", "--d", 3, "--p-x", 0.01, "--p-y", 0.02, "--p-z", 0.03),
        ("surface_phenom", "--d", 3, "--T", 2, "--p", 0.01),
        ("honeycomb", "--Lx", 3, "--Ly", 3, "--T", 6, "--p", 0.01),
        ("three_check", "--m", 4),
        ("expander_petersen", "--p", 0.05),
    ]
    for i, (family, *params) in enumerate(cases):
        assert run("gen", family, *params, "-o", tmp_path / f"m{i}.fm")[0] == 0, family


def test_report_schema(rep5_files):
    model, split, report = rep5_files
    doc = json.loads(report.read_text())
    assert set(doc) == {"method", "decoder", "split_model_path", "split_fault_count",
                        "decomposition", "unsplittable", "warnings"}
    assert doc["split_model_path"] == "rep5s.fm"
    assert doc["decomposition"] == {str(i): [i] for i in range(5)}


def test_decode(rep5_files):
    model, split, _ = rep5_files
    code, text = run("decode", "-i", model, "--split", split, "--syndrome", "D1 D2", "--json")
    assert code == 0
    doc = json.loads(text)
    assert doc["correction"] == [2] and doc["predicted_observables"] == [0]
    code, text = run("decode", "-i", model, "--split", split, "--syndrome", "D0")
    assert code == 0 and "correction: f0" in text


def test_sample_json(rep5_files):
    model, _, report = rep5_files
    code, text = run("sample", "-i", model, "--report", report, "--shots", 3000,
                     "--seed", 7, "--json")
    assert code == 0
    doc = json.loads(text)
    assert doc["shots"] == 3000 and doc["seed"] == 7 and "wall_time" not in doc
    assert set(doc) >= {"failures", "failure_rate", "wilson_95", "failures_per_observable",
                        "undecodable", "leaked", "decoder"}
    code, text = run("sample", "-i", model, "--report", report, "--shots", 100)
    assert code == 0 and "wall_time" in text


def test_sample_byte_identical_across_workers(rep5_files, monkeypatch):
    model, _, report = rep5_files
    outputs = []
    for workers in ("1", "8"):
        monkeypatch.setenv(WORKERS_ENV, workers)
        code, text = run("sample", "-i", model, "--report", report, "--shots", 5000,
                         "--seed", 3, "--json")
        assert code == 0
        outputs.append(text.encode())
    assert outputs[0] == outputs[1]


def test_distance(rep5_files):
    model, _, _ = rep5_files
    code, text = run("distance", "-i", model, "--max-weight", 5, "--json")
    doc = json.loads(text)
    assert code == 0 and doc["model_distance"] == 5 and doc["model_witness"] == [0, 1, 2, 3, 4]
    code, text = run("distance", "-i", model, "--max-weight", 3)
    assert code == 0 and "exceeds search bound" in text


def test_effective_distance_repetition(rep5_files):
    model, _, report = rep5_files
    code, text = run("effective-distance", "-i", model, "--report", report,
                     "--max-weight", 3, "--json")
    doc = json.loads(text)
    assert code == 0
    assert doc["effective_distance"] == 3 and doc["model_distance"] == 5
    assert doc["achieves_full_distance"] is True


def test_effective_distance_surface3(tmp_path):
    model, split, report = tmp_path / "s3.fm", tmp_path / "s3s.fm", tmp_path / "s3.json"
    save_model(gen_surface_perfect(3, 0.01, 0.01, 0.01), model)
    assert run("split", "-i", model, "-o", split, "--report", report)[0] == 0
    code, text = run("effective-distance", "-i", model, "--report", report,
                     "--max-weight", 2, "--json")
    assert code == 0
    doc = json.loads(text)
    assert doc["model_distance"] == 3
    assert doc["effective_distance"] == 2
    assert doc["achieves_full_distance"] is True


def test_strict_unsplittable_exit_code(tmp_path):
    model = tmp_path / "tc.fm"
    assert run("gen", "three_check", "--m", 3, "-o", model)[0] == 0
    assert run("split", "-i", model, "-o", tmp_path / "o.fm", "--strict")[0] == 3
    assert run("split", "-i", model, "-o", tmp_path / "o.fm")[0] == 0


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["gen", "toric", "-o", "x.fm"],
    ["split", "-i", "x.fm"],
    ["sample", "-i", "x", "--report", "y", "--shots", "many"],
    ["split", "-i", "x", "-o", "y", "--method", "magic"],
])
def test_usage_errors(argv):
    assert run(*argv)[0] == 1


def test_model_errors(tmp_path):
    bad = tmp_path / "bad.fm"
    bad.write_text("checks 1\nobservables 0\nerror(0.7) D0\n")
    assert run("split", "-i", bad, "-o", tmp_path / "o.fm")[0] == 2
    assert run("split", "-i", tmp_path / "missing.fm", "-o", tmp_path / "o.fm")[0] == 2
    bad.write_text("checks 1\nobservables 0\nerror(0.1) Q0\n")
    assert run("distance", "-i", bad, "--max-weight", 2)[0] == 2
    assert run("gen", "repetition", "--n", 1, "--p", 0.1, "-o", tmp_path / "r.fm")[0] == 2


def test_report_errors(rep5_files, tmp_path):
    model, _, _ = rep5_files
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert run("sample", "-i", model, "--report", broken, "--shots", 10)[0] == 2
    broken.write_text("{}")
    assert run("sample", "-i", model, "--report", broken, "--shots", 10)[0] == 2


def test_decode_bad_syndrome(rep5_files):
    model, split, _ = rep5_files
    assert run("decode", "-i", model, "--split", split, "--syndrome", "D9")[0] == 2
    assert run("decode", "-i", model, "--split", split, "--syndrome", "X1")[0] == 1


def test_module_entry_point(tmp_path):
    out = tmp_path / "r.fm"
    proc = subprocess.run([sys.executable, "-m", "hypersplit", "gen", "repetition",
                           "--n", "3", "--p", "0.1", "-o", str(out)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and out.exists()
    proc = subprocess.run([sys.executable, "-m", "hypersplit", "nope"],
                          capture_output=True, text=True)
    assert proc.returncode == 1 and "error" in proc.stderr
