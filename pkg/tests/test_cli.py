from __future__ import annotations

import json
import os
import signal
import socket
import subprocess
import sys
import time
import urllib.request
from pathlib import Path

import pytest
from click.testing import CliRunner

from storyrec.cli import main


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    """A synthetic dataset directory plus its preprocessed snapshot."""
    root = tmp_path_factory.mktemp("cli")
    data_dir = root / "data"
    snapshot = root / "model.npz"
    runner = CliRunner()
    result = runner.invoke(
        main,
        [
            "make-dataset",
            "--out",
            str(data_dir),
            "--users",
            "40",
            "--movies",
            "100",
            "--ratings",
            "1600",
            "--seed",
            "5",
        ],
    )
    assert result.exit_code == 0, result.output
    result = runner.invoke(
        main,
        ["preprocess", "--data-dir", str(data_dir), "--snapshot", str(snapshot), "--k", "12"],
    )
    assert result.exit_code == 0, result.output
    return root


class TestPreprocess:
    def test_snapshot_written(self, workspace):
        assert (workspace / "model.npz").is_file()

    def test_echoes_config_and_counts(self, workspace, tmp_path):
        runner = CliRunner()
        result = runner.invoke(
            main,
            [
                "preprocess",
                "--data-dir",
                str(workspace / "data"),
                "--snapshot",
                str(tmp_path / "again.npz"),
                "--k",
                "6",
            ],
        )
        assert result.exit_code == 0
        assert "effective configuration" in result.output
        assert "k = 6" in result.output
        assert "40 users" in result.output

    def test_missing_directory_exit_code(self, tmp_path):
        command = [
            sys.executable,
            "-m",
            "storyrec.cli",
            "preprocess",
            "--data-dir",
            str(tmp_path / "absent"),
            "--snapshot",
            str(tmp_path / "x.npz"),
        ]
        proc = subprocess.run(command, capture_output=True, text=True)
        assert proc.returncode == 1
        assert "absent" in proc.stderr

    def test_env_var_config(self, workspace, tmp_path):
        runner = CliRunner()
        result = runner.invoke(
            main,
            [
                "preprocess",
                "--data-dir",
                str(workspace / "data"),
                "--snapshot",
                str(tmp_path / "env.npz"),
            ],
            env={"STORYREC_K": "7"},
        )
        assert result.exit_code == 0
        assert "k = 7" in result.output

    def test_flag_beats_env(self, workspace, tmp_path):
        runner = CliRunner()
        result = runner.invoke(
            main,
            [
                "preprocess",
                "--data-dir",
                str(workspace / "data"),
                "--snapshot",
                str(tmp_path / "flag.npz"),
                "--k",
                "9",
            ],
            env={"STORYREC_K": "7"},
        )
        assert result.exit_code == 0
        assert "k = 9" in result.output


class TestValidate:
    def test_csv_summary_figures(self, workspace, tmp_path):
        report_dir = tmp_path / "report"
        runner = CliRunner()
        result = runner.invoke(
            main,
            [
                "validate",
                "--snapshot",
                str(workspace / "model.npz"),
                "--report-dir",
                str(report_dir),
            ],
        )
        assert result.exit_code == 0, result.output
        assert "model validation summary" in result.output
        csv_path = report_dir / "validation.csv"
        assert csv_path.is_file()
        lines = csv_path.read_text().splitlines()
        assert lines[0].startswith("user_id,best_dim,case")
        assert len(lines) == 41
        assert (report_dir / "validation_degree_sums.png").is_file()
        assert (report_dir / "validation_cases.png").is_file()

    def test_no_figures_flag(self, workspace, tmp_path):
        report_dir = tmp_path / "bare"
        runner = CliRunner()
        result = runner.invoke(
            main,
            [
                "validate",
                "--snapshot",
                str(workspace / "model.npz"),
                "--report-dir",
                str(report_dir),
                "--no-figures",
            ],
        )
        assert result.exit_code == 0
        assert not (report_dir / "validation_degree_sums.png").exists()

    def test_missing_snapshot(self, tmp_path):
        command = [
            sys.executable,
            "-m",
            "storyrec.cli",
            "validate",
            "--snapshot",
            str(tmp_path / "absent.npz"),
        ]
        proc = subprocess.run(command, capture_output=True, text=True)
        assert proc.returncode == 1
        assert "preprocess" in proc.stderr


class TestRecommend:
    def test_json_lines_shape(self, workspace):
        runner = CliRunner()
        result = runner.invoke(
            main,
            [
                "recommend",
                "--snapshot",
                str(workspace / "model.npz"),
                "--user",
                "1",
                "--stories",
                "3",
                "--seed",
                "4",
            ],
        )
        assert result.exit_code == 0, result.output
        stories = [
            json.loads(line) for line in result.output.splitlines() if line.startswith("{")
        ]
        assert len(stories) == 3
        for story in stories:
            assert len(story["events"]) == 5
            assert "anchors" in story

    def test_deterministic_output(self, workspace, tmp_path):
        runner = CliRunner()
        outputs = []
        for run in range(2):
            out = tmp_path / f"run{run}.jsonl"
            result = runner.invoke(
                main,
                [
                    "recommend",
                    "--snapshot",
                    str(workspace / "model.npz"),
                    "--user",
                    "2",
                    "--stories",
                    "2",
                    "--seed",
                    "99",
                    "--out",
                    str(out),
                ],
            )
            assert result.exit_code == 0, result.output
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1]

    def test_full_familiarity_flag(self, workspace):
        runner = CliRunner()
        result = runner.invoke(
            main,
            [
                "recommend",
                "--snapshot",
                str(workspace / "model.npz"),
                "--user",
                "1",
                "--stories",
                "2",
                "--seed",
                "4",
                "--f",
                "1.0",
            ],
        )
        assert result.exit_code == 0, result.output
        for line in result.output.splitlines():
            if not line.startswith("{"):
                continue
            story = json.loads(line)
            familiar = story["zones"]["layout"]["familiar"]
            for event in story["events"]:
                assert familiar[0] - 1e-6 <= event["projection"] <= familiar[1] + 1e-6

    def test_unknown_user_exit_code(self, workspace):
        command = [
            sys.executable,
            "-m",
            "storyrec.cli",
            "recommend",
            "--snapshot",
            str(workspace / "model.npz"),
            "--user",
            "5000",
        ]
        proc = subprocess.run(command, capture_output=True, text=True)
        assert proc.returncode == 1

    def test_story_figures(self, workspace, tmp_path):
        figures = tmp_path / "figs"
        runner = CliRunner()
        result = runner.invoke(
            main,
            [
                "recommend",
                "--snapshot",
                str(workspace / "model.npz"),
                "--user",
                "1",
                "--stories",
                "2",
                "--seed",
                "4",
                "--figures-dir",
                str(figures),
            ],
        )
        assert result.exit_code == 0, result.output
        assert (figures / "story_000.png").is_file()
        assert (figures / "story_001.png").is_file()


def _free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


class TestServe:
    def test_serve_and_sigterm(self, workspace):
        port = _free_port()
        command = [
            sys.executable,
            "-m",
            "storyrec.cli",
            "serve",
            "--snapshot",
            str(workspace / "model.npz"),
            "--listen",
            f"127.0.0.1:{port}",
        ]
        proc = subprocess.Popen(
            command, stdout=subprocess.PIPE, stderr=subprocess.STDOUT, text=True
        )
        try:
            deadline = time.monotonic() + 30
            body = None
            while time.monotonic() < deadline:
                try:
                    with urllib.request.urlopen(
                        f"http://127.0.0.1:{port}/movies/1", timeout=2
                    ) as response:
                        assert response.status == 200
                        body = json.loads(response.read())
                        break
                except OSError:
                    if proc.poll() is not None:
                        pytest.fail(f"server exited early: {proc.stdout.read()}")
                    time.sleep(0.3)
            assert body is not None, "server did not come up in time"
            assert body["movie_id"] == 1
        finally:
            proc.send_signal(signal.SIGTERM)
            try:
                code = proc.wait(timeout=5)
            except subprocess.TimeoutExpired:
                proc.kill()
                pytest.fail("server did not exit within 5s of SIGTERM")
        assert code == 0
