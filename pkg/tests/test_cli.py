import csv
import json

import pytest

from qvirt import (
    deserialize,
    dump_aiem_coefficients,
    dump_target_distribution,
    mcvqe_execution_count,
    mcvqe_parameter_count,
    random_aiem_coefficients,
    random_target_distribution,
)
from qvirt.cli import CSV_FIELDS, main


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_verify_counts_reports_all_rows_ok(capsys):
    assert main(["verify-counts"]) == 0
    out = capsys.readouterr().out
    assert out.count(" ok") == 8
    assert "MISMATCH" not in out
    assert "all 8 rows match" in out


def test_mcvqe_sweep_appends_csv_rows(tmp_path, capsys):
    out = tmp_path / "bench.csv"
    argv = ["mcvqe-grad", "--qubits", "4", "--reps", "2",
            "--n-virtual-qpus", "1,2", "--out", str(out)]
    assert main(argv) == 0
    rows = read_rows(out)
    assert len(rows) == 4
    assert tuple(rows[0]) == CSV_FIELDS
    for row in rows:
        assert row["algorithm"] == "mcvqe"
        assert row["n_qubits"] == "4"
        assert row["n_layers"] == "0"
        assert int(row["n_circuits"]) == mcvqe_execution_count(4) == 640
        assert float(row["wall_time_s"]) > 0
    assert [r["n_vqpus"] for r in rows] == ["1", "1", "2", "2"]
    assert [r["repetition"] for r in rows] == ["0", "1", "0", "1"]
    assert "mean" in capsys.readouterr().out

    assert main(argv) == 0  # appending keeps a single header
    assert len(read_rows(out)) == 8
    assert out.read_text().count("algorithm") == 1


def test_ddcl_sweep_appends_csv_rows(tmp_path):
    out = tmp_path / "bench.csv"
    assert main(["ddcl-grad", "--qubits", "2", "--layers", "1", "--reps", "1",
                 "--shots", "64", "--out", str(out)]) == 0
    rows = read_rows(out)
    assert len(rows) == 1
    assert rows[0]["algorithm"] == "ddcl"
    assert rows[0]["n_layers"] == "1"
    assert rows[0]["n_circuits"] == "24"


def test_out_dir_env_var_sets_default_csv_location(tmp_path, monkeypatch):
    monkeypatch.setenv("QVIRT_OUT_DIR", str(tmp_path))
    assert main(["mcvqe-grad", "--qubits", "2", "--reps", "1"]) == 0
    assert (tmp_path / "bench.csv").exists()


def test_gradient_dump_is_reproducible_json(tmp_path):
    dumps = []
    for name in ("a.json", "b.json"):
        path = tmp_path / name
        assert main(["mcvqe-grad", "--qubits", "4", "--seed", "7", "--reps", "1",
                     "--out", str(tmp_path / "bench.csv"),
                     "--dump-gradient", str(path)]) == 0
        dumps.append(json.loads(path.read_text()))
    first, second = dumps
    assert first["gradient"] == second["gradient"]
    assert len(first["gradient"]) == mcvqe_parameter_count(4)
    assert first["n_circuit_executions"] == 640
    assert first["algorithm"] == "mcvqe"
    assert first["seed"] == 7


def test_buffer_dump_round_trips(tmp_path):
    path = tmp_path / "buffer.txt"
    assert main(["mcvqe-grad", "--qubits", "3", "--reps", "1",
                 "--out", str(tmp_path / "bench.csv"), "--dump-buffer", str(path)]) == 0
    buffer = deserialize(path.read_text())
    assert buffer.n_qubits == 3
    assert len(buffer.children) == mcvqe_execution_count(3)


def test_coefficient_file_input(tmp_path):
    coeffs = tmp_path / "coeffs.txt"
    coeffs.write_text(dump_aiem_coefficients(random_aiem_coefficients(3, 1)))
    base = ["mcvqe-grad", "--reps", "1", "--out", str(tmp_path / "bench.csv"),
            "--coefficients", str(coeffs)]
    assert main(base + ["--qubits", "3"]) == 0
    assert main(base + ["--qubits", "4"]) == 2  # site count mismatch


def test_target_file_input(tmp_path):
    target = tmp_path / "target.txt"
    target.write_text(dump_target_distribution(random_target_distribution(2, 3)))
    assert main(["ddcl-grad", "--qubits", "2", "--layers", "1", "--reps", "1",
                 "--shots", "32", "--out", str(tmp_path / "bench.csv"),
                 "--target", str(target)]) == 0


def test_invalid_workload_shapes_exit_2(tmp_path):
    out = ["--out", str(tmp_path / "bench.csv")]
    assert main(["mcvqe-grad", "--qubits", "1"] + out) == 2
    assert main(["ddcl-grad", "--qubits", "3"] + out) == 2  # odd register
    assert main(["ddcl-grad", "--qubits", "4", "--layers", "0"] + out) == 2


def test_argparse_rejects_missing_and_malformed_flags():
    with pytest.raises(SystemExit) as info:
        main(["mcvqe-grad"])  # --qubits is required
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["mcvqe-grad", "--qubits", "4", "--n-virtual-qpus", "two"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["mcvqe-grad", "--qubits", "4", "--n-virtual-qpus", "0"])
    assert info.value.code == 2
    with pytest.raises(SystemExit):
        main([])  # a subcommand is required
