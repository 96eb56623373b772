import csv
import io
import json

import numpy as np
import pytest

from conftest import TOY_A, TOY_B, write_inputs
from controversy import load_dataset, load_predictions, measure_baseline
from controversy.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def mine_args(data, schema, preds, *extra):
    return ("mine", "--data", str(data), "--schema", str(schema),
            "--predictions", str(preds), *extra)


@pytest.fixture
def toy_b_files(tmp_path):
    return write_inputs(tmp_path, TOY_B)


@pytest.fixture
def truth_files(tmp_path):
    truth = [1, 1, 1, 1, 0, 0, 0, 0]
    return write_inputs(tmp_path, TOY_B, truth=truth)


class TestMine:
    def test_table_output(self, capsys, toy_b_files):
        code, out, err = run(capsys, *mine_args(*toy_b_files, "--measure", "ccl",
                                                "--min-support", "0.25"))
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "ccl(DS)=-0.196"
        assert lines[1].startswith("description")
        assert "#cases" in lines[1]
        assert any("0.811" in line for line in lines)

    def test_csv_output_full_precision(self, capsys, toy_b_files):
        code, out, _ = run(capsys, *mine_args(*toy_b_files, "--measure", "ccl",
                                              "--min-support", "0.25",
                                              "--format", "csv"))
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["rank", "description", "cases", "quality", "baseline", "measure"]
        assert rows[1][0] == "1"
        assert float(rows[1][3]) == 0.8112781244591328
        assert float(rows[1][4]) == -0.19607755076405642
        assert rows[1][5] == "ccl"
        assert [r[0] for r in rows[1:]] == [str(i) for i in range(1, len(rows))]

    def test_json_output(self, capsys, toy_b_files):
        code, out, _ = run(capsys, *mine_args(*toy_b_files, "--measure", "ccl",
                                              "--min-support", "0.25",
                                              "--format", "json"))
        assert code == 0
        doc = json.loads(out)
        assert doc["measure"] == "ccl"
        assert doc["config"]["beam_width"] == 25
        assert doc["baseline"] == -0.19607755076405642
        assert doc["results"][0]["rank"] == 1
        assert doc["results"][0]["quality"] == 0.8112781244591328
        assert doc["inputs"]["data"]["cases"] == 8
        assert "duration_seconds" in doc

    def test_out_file_and_byte_identical_reruns(self, capsys, tmp_path, toy_b_files):
        out1, out2 = tmp_path / "r1.csv", tmp_path / "r2.csv"
        args = mine_args(*toy_b_files, "--measure", "ccl", "--min-support", "0.25",
                         "--format", "csv")
        assert main(list(args) + ["--out", str(out1)]) == 0
        assert main(list(args) + ["--out", str(out2), "--jobs", "4"]) == 0
        capsys.readouterr()
        assert out1.read_bytes() == out2.read_bytes()

    def test_missing_predictions_file(self, capsys, toy_b_files):
        data, schema, _ = toy_b_files
        code, _, err = run(capsys, *mine_args(data, schema, "nope.csv"))
        assert code == 2
        assert "cannot open predictions file" in err

    def test_missing_data_file(self, capsys, toy_b_files):
        _, schema, preds = toy_b_files
        code, _, err = run(capsys, *mine_args("nope.csv", schema, preds))
        assert code == 2

    def test_rasl_needs_binary_target(self, capsys, tmp_path):
        rows = [(0, 1), (1, 2), (2, 0), (0, 0)]
        files = write_inputs(tmp_path, rows, truth=[0, 1, 2, 0])
        code, _, err = run(capsys, *mine_args(*files, "--measure", "rasl"))
        assert code == 2
        assert "measure requires binary target" in err

    def test_truth_needing_measure_without_target(self, capsys, toy_b_files):
        code, _, err = run(capsys, *mine_args(*toy_b_files, "--measure", "cco"))
        assert code == 2
        assert "ground truth" in err

    def test_bad_min_support(self, capsys, toy_b_files):
        code, _, err = run(capsys, *mine_args(*toy_b_files, "--min-support", "2.0"))
        assert code == 2

    def test_unknown_measure_is_usage_error(self, toy_b_files):
        with pytest.raises(SystemExit) as exc:
            main(list(mine_args(*toy_b_files, "--measure", "banana")))
        assert exc.value.code == 2

    def test_malformed_data_is_runtime_error(self, capsys, tmp_path):
        data, schema, preds = write_inputs(tmp_path, TOY_B)
        # blank out one prediction cell
        text = preds.read_text().splitlines()
        text[3] = "0,,0,1"
        preds.write_text("\n".join(text) + "\n")
        code, _, err = run(capsys, *mine_args(data, schema, preds))
        assert code == 1
        assert "matrix must be full" in err

    def test_rasl_end_to_end_with_truth(self, capsys, truth_files):
        code, out, _ = run(capsys, *mine_args(*truth_files, "--measure", "rasl",
                                              "--min-support", "0.25",
                                              "--positive", "1"))
        assert code == 0
        assert out.splitlines()[0].startswith("rasl(DS)=")

    def test_unknown_positive_label(self, capsys, truth_files):
        code, _, err = run(capsys, *mine_args(*truth_files, "--measure", "rasl",
                                              "--positive", "maybe"))
        assert code == 2

    def test_description_column_quality_agrees_with_library(self, capsys, toy_b_files):
        data, schema, preds = toy_b_files
        code, out, _ = run(capsys, *mine_args(data, schema, preds, "--measure", "ccl",
                                              "--min-support", "0.25",
                                              "--format", "csv"))
        rows = list(csv.reader(io.StringIO(out)))[1:]
        ds = load_dataset(str(data), str(schema))
        matrix = load_predictions(str(preds), ds)
        from controversy import SearchConfig, beam_search
        res = beam_search(ds, matrix, SearchConfig(measure="ccl", min_support=0.25))
        assert [(r[1], int(r[2]), float(r[3])) for r in rows] == [
            (e.text, e.count, e.quality) for e in res
        ]


class TestExportMatrix:
    def export_args(self, files, out, *extra):
        data, schema, preds = files
        return ("export-matrix", "--data", str(data), "--schema", str(schema),
                "--predictions", str(preds), "--out", str(out), *extra)

    def test_files_and_ordering(self, capsys, tmp_path, truth_files):
        out = tmp_path / "matrix"
        code, _, _ = run(capsys, *self.export_args(truth_files, out))
        assert code == 0
        rows = list(csv.reader((tmp_path / "matrix.csv").open()))
        header, body = rows[0], rows[1:]
        assert header == ["sorted_pos", "original_index", "c1", "c2", "c3", "c4",
                          "truth", "member"]
        assert sorted(int(r[1]) for r in body) == list(range(8))
        assert [int(r[0]) for r in body] == list(range(8))
        # lexicographic by predicted label codes, per the shared dictionary
        data, schema, _ = truth_files
        ds = load_dataset(str(data), str(schema))
        codes = [tuple(ds.classes.code(v) for v in r[2:6]) for r in body]
        assert codes == sorted(codes)
        # without --description, nothing is a member
        assert all(r[-1] == "0" for r in body)

    def test_ppm_dimensions_without_band(self, capsys, tmp_path, truth_files):
        out = tmp_path / "matrix"
        run(capsys, *self.export_args(truth_files, out))
        blob = (tmp_path / "matrix.ppm").read_bytes()
        assert blob.startswith(b"P6\n4 8\n255\n")
        header_len = len(b"P6\n4 8\n255\n")
        assert len(blob) == header_len + 8 * 4 * 3

    def test_member_band_with_description(self, capsys, tmp_path, truth_files):
        out = tmp_path / "banded"
        code, _, _ = run(capsys, *self.export_args(
            truth_files, out, "--description", "I1 = 0"))
        assert code == 0
        rows = list(csv.reader((tmp_path / "banded.csv").open()))[1:]
        for r in rows:
            assert r[-1] == ("0" if r[1] == "0" else "1")
        blob = (tmp_path / "banded.ppm").read_bytes()
        # three band columns plus one separator column
        assert blob.startswith(b"P6\n8 8\n255\n")

    def test_unknown_column_in_description(self, capsys, tmp_path, truth_files):
        out = tmp_path / "x"
        code, _, err = run(capsys, *self.export_args(
            truth_files, out, "--description", "Nope = 0"))
        assert code == 2
        assert "unknown column" in err

    def test_no_truth_column_without_target(self, capsys, tmp_path, toy_b_files):
        out = tmp_path / "plain"
        run(capsys, *self.export_args(toy_b_files, out))
        header = (tmp_path / "plain.csv").read_text().splitlines()[0]
        assert "truth" not in header


class TestBaseline:
    def test_all_measures_with_truth(self, capsys, truth_files):
        data, schema, preds = truth_files
        code, out, err = run(capsys, "baseline", "--data", str(data),
                             "--schema", str(schema), "--predictions", str(preds))
        assert code == 0
        lines = out.splitlines()
        tokens = [line.split("(")[0] for line in lines]
        assert tokens == sorted(["row", "ccl", "cac", "cco", "gt-yac", "gt-yac2", "rasl"])
        ds = load_dataset(str(data), str(schema))
        matrix = load_predictions(str(preds), ds)
        want = measure_baseline("row", ds, matrix)
        assert f"row(DS)={want:.3f}" in lines

    def test_skips_unavailable_measures_without_truth(self, capsys, toy_b_files):
        data, schema, preds = toy_b_files
        code, out, err = run(capsys, "baseline", "--data", str(data),
                             "--schema", str(schema), "--predictions", str(preds))
        assert code == 0
        tokens = {line.split("(")[0] for line in out.splitlines()}
        assert tokens == {"row", "ccl", "cac"}
        assert "skipping" in err

    def test_explicit_unavailable_measure_fails(self, capsys, toy_b_files):
        data, schema, preds = toy_b_files
        code, _, err = run(capsys, "baseline", "--data", str(data),
                           "--schema", str(schema), "--predictions", str(preds),
                           "--measure", "cco")
        assert code == 2

    def test_explicit_measure_list(self, capsys, truth_files):
        data, schema, preds = truth_files
        code, out, _ = run(capsys, "baseline", "--data", str(data),
                           "--schema", str(schema), "--predictions", str(preds),
                           "--measure", "row", "--measure", "ccl")
        assert code == 0
        assert [line.split("(")[0] for line in out.splitlines()] == ["row", "ccl"]
