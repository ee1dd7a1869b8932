import json
import os

import numpy as np
from click.testing import CliRunner

from genshift.cli import main

runner = CliRunner()


class TestCorpusAndCompute:
    def test_corpus_list(self):
        res = runner.invoke(main, ["corpus", "list"])
        assert res.exit_code == 0
        assert "abs_power" in res.output and "user_csv" in res.output

    def test_translate_poly(self, tmp_path):
        res = runner.invoke(
            main,
            [
                "translate", "--fn", "poly", "--coeffs", "0,1", "--basis", "1,1",
                "--mu", "1.0", "--t", "0.7", "--x", "0.5", "--out", str(tmp_path),
            ],
        )
        assert res.exit_code == 0, res.output
        text = (tmp_path / "translate.csv").read_text()
        assert text.startswith("t,x,value")

    def test_modulus_command(self, tmp_path):
        res = runner.invoke(
            main,
            [
                "modulus", "--fn", "poly", "--coeffs", "0,1", "--basis", "1,1",
                "--mu", "1.0", "--p", "inf", "--alpha", "0.5",
                "--delta-grid", "0.5", "--out", str(tmp_path),
            ],
        )
        assert res.exit_code == 0, res.output
        assert "omega=" in res.output

    def test_bestapprox_command(self, tmp_path):
        res = runner.invoke(
            main,
            [
                "bestapprox", "--fn", "poly", "--coeffs", "0,0,1", "--basis", "0,0",
                "--p", "inf", "--alpha", "0", "--mu", "0", "--n-max", "4",
                "--out", str(tmp_path),
            ],
        )
        assert res.exit_code == 0, res.output
        rows = (tmp_path / "bestapprox.csv").read_text().strip().split("\n")
        assert rows[0] == "n,E_n,S_n"
        assert len(rows) == 5

    def test_csv_input(self, tmp_path):
        csv_file = tmp_path / "data.csv"
        xs = np.linspace(-1, 1, 21)
        csv_file.write_text("\n".join(f"{x},{x*x}" for x in xs) + "\n")
        res = runner.invoke(
            main,
            [
                "translate", "--csv", str(csv_file), "--mu", "0.0",
                "--t", "0.0", "--x", "0.5", "--out", str(tmp_path / "out"),
            ],
        )
        assert res.exit_code == 0, res.output
        assert "0.25" in res.output


class TestVerifyCommands:
    def test_lemma1_pass_exit_zero(self, tmp_path):
        res = runner.invoke(
            main,
            [
                "verify", "lemma1", "--mu", "1", "--n-max", "4",
                "--grid-points", "9", "--out", str(tmp_path),
            ],
        )
        assert res.exit_code == 0, res.output
        summary = json.loads((tmp_path / "summary.json").read_text())
        assert summary["all_passed"] and summary["n_controls"] == 2

    def test_forced_failure_exit_nonzero(self, tmp_path):
        res = runner.invoke(
            main,
            [
                "verify", "lemma1", "--mu", "1", "--n-max", "4", "--grid-points", "9",
                "--tol", "1e-30", "--out", str(tmp_path),
            ],
        )
        assert res.exit_code == 1
        summary = json.loads((tmp_path / "summary.json").read_text())
        assert not summary["all_passed"]

    def test_markov_command(self, tmp_path):
        res = runner.invoke(
            main,
            [
                "verify", "markov", "--mu", "1.0", "--p", "inf", "--alpha", "0.5",
                "--degrees", "8,16", "--draws", "10", "--out", str(tmp_path),
            ],
        )
        assert res.exit_code == 0, res.output
        assert (tmp_path / "markov_bernstein.csv").exists()

    def test_config_file_defaults(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"mu": "1", "n_max": 4, "grid_points": 9, "out": str(tmp_path / "o")}))
        res = runner.invoke(main, ["verify", "lemma1", "--config", str(cfg)])
        assert res.exit_code == 0, res.output
        assert (tmp_path / "o" / "summary.json").exists()

    def test_flag_overrides_config(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"mu": "1", "n_max": 4, "grid_points": 9, "tol": 1e-30}))
        res = runner.invoke(
            main,
            ["verify", "lemma1", "--config", str(cfg), "--tol", "1e-10", "--out", str(tmp_path / "o2")],
        )
        assert res.exit_code == 0, res.output


class TestExperimentCommands:
    def test_equivalence_command(self, tmp_path):
        res = runner.invoke(
            main,
            [
                "experiment", "equivalence", "--fn", "abs_power", "--fn-param", "gamma=1",
                "--mu", "1.0", "--p", "1", "--delta-grid", "0.785,0.393",
                "--out", str(tmp_path),
            ],
        )
        assert res.exit_code == 0, res.output
        files = os.listdir(tmp_path)
        assert any(f.startswith("equivalence_") for f in files)

    def test_jackson_command(self, tmp_path):
        res = runner.invoke(
            main,
            [
                "experiment", "jackson", "--fn", "bump", "--fn-param", "s=1",
                "--mu", "1.0", "--p", "inf", "--n-max", "8", "--out", str(tmp_path),
            ],
        )
        assert res.exit_code == 0, res.output
        summary = json.loads((tmp_path / "summary.json").read_text())
        assert summary["all_passed"]


class TestReproducibility:
    def test_identical_outputs_same_seed(self, tmp_path):
        args = [
            "verify", "markov", "--mu", "1.0", "--p", "inf", "--alpha", "0.5",
            "--degrees", "8", "--draws", "12", "--seed", "777",
        ]
        d1, d2 = tmp_path / "r1", tmp_path / "r2"
        for d in (d1, d2):
            res = runner.invoke(main, args + ["--out", str(d)])
            assert res.exit_code == 0, res.output
        assert (d1 / "markov_bernstein.csv").read_bytes() == (d2 / "markov_bernstein.csv").read_bytes()
        assert (d1 / "summary.json").read_bytes() == (d2 / "summary.json").read_bytes()
