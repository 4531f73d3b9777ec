"""Test the lanestyle command line."""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.cli import run
from src.features.io import read_dataset_csv


@pytest.fixture(scope="module")
def dataset(tmp_path_factory) -> Path:
    path = tmp_path_factory.mktemp("data") / "features.csv"
    assert run(["generate", "--n", "600", "--seed", "3", "--out", str(path)]) == 0
    return path


def test_usage_errors():
    """Usage problems exit with status 1."""
    assert run([]) == 1
    assert run(["bogus"]) == 1
    assert run(["train", "--data", "features.csv"]) == 1
    assert run(["generate", "--out", "x.csv", "--n", "many"]) == 1


def test_missing_input(tmp_path):
    """A missing input file exits with status 2."""
    status = run(
        [
            "cluster",
            "--data",
            str(tmp_path / "absent.csv"),
            "--out",
            str(tmp_path / "clusters.csv"),
            "--labels-out",
            str(tmp_path / "labeled.csv"),
        ]
    )
    assert status == 2


def test_generate(dataset):
    """generate writes a labeled dataset."""
    data = read_dataset_csv(dataset)
    assert len(data) == 600
    assert data.labels is not None
    assert dataset.read_text().splitlines()[0] == "dd,dv,da,label"


def test_generate_is_seeded(tmp_path, dataset):
    """The same seed reproduces the file byte for byte."""
    again = tmp_path / "again.csv"
    assert run(["generate", "--n", "600", "--seed", "3", "--out", str(again)]) == 0
    assert again.read_text() == dataset.read_text()


def test_trajectories_need_scenario_mode(tmp_path):
    """--trajectories only applies to scenario generation."""
    status = run(
        ["generate", "--n", "5", "--trajectories", str(tmp_path), "--out", str(tmp_path / "f.csv")]
    )
    assert status == 1


def test_clustering_failure_leaves_no_files(tmp_path, dataset):
    """A numeric failure exits with status 3 and writes nothing."""
    out, labels = tmp_path / "clusters.csv", tmp_path / "labeled.csv"
    status = run(
        [
            "cluster",
            "--data",
            str(dataset),
            "--noise-fraction",
            "0.49",
            "--out",
            str(out),
            "--labels-out",
            str(labels),
        ]
    )
    assert status == 3
    assert not out.exists() and not labels.exists()


def test_kernel_too_large(tmp_path, dataset):
    """A kernel wider than the quantized volume is a usage error."""
    status = run(
        [
            "cluster",
            "--data",
            str(dataset),
            "--q",
            "10",
            "--r",
            "5",
            "--out",
            str(tmp_path / "c.csv"),
            "--labels-out",
            str(tmp_path / "l.csv"),
        ]
    )
    assert status == 1


def test_single_subcluster_model_matches_knn(tmp_path, dataset):
    """kMC-KNN with k = 1 labels queries exactly like plain KNN."""
    outputs = {}
    for method, k in (("knn", "1"), ("kmcknn", "1")):
        model = tmp_path / f"{method}.model"
        labels = tmp_path / f"{method}.csv"
        train = ["train", "--data", str(dataset), "--method", method, "--k", k]
        assert run(train + ["--out", str(model)]) == 0
        recognize = ["recognize", "--model", str(model), "--data", str(dataset)]
        assert run(recognize + ["--out", str(labels)]) == 0
        outputs[method] = labels.read_text()

    assert outputs["knn"] == outputs["kmcknn"]
    recognized = read_dataset_csv(tmp_path / "knn.csv")
    truth = read_dataset_csv(dataset)
    assert np.mean(recognized.labels == truth.labels) > 0.9


def test_config_file_overrides_flags(tmp_path, dataset):
    """Values in --config win over command-line flags."""
    config = tmp_path / "run.yaml"
    config.write_text("recognizer:\n  k: 1\n  vote: count\n")
    model = tmp_path / "model.txt"
    status = run(
        ["train", "--data", str(dataset), "--k", "3", "--config", str(config), "--out", str(model)]
    )
    assert status == 0
    lines = model.read_text().splitlines()
    assert "k = 1" in lines
    assert "vote = count" in lines


def test_crossval(tmp_path, dataset, capsys):
    """crossval writes per-fold rows and prints the summary table."""
    out, table = tmp_path / "cv.csv", tmp_path / "cv.txt"
    status = run(
        ["crossval", "--data", str(dataset), "--p", "3", "--out", str(out), "--table", str(table)]
    )
    assert status == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 1 + 3 + 1
    assert lines[-1].startswith("kmcknn,2,mean,")
    assert "kmcknn(k=2)" in capsys.readouterr().out
    assert table.read_text().startswith("p=3 folds")


def test_bench(tmp_path, dataset):
    """bench compares several k against the plain KNN baseline."""
    out, table = tmp_path / "bench.csv", tmp_path / "bench.txt"
    status = run(
        [
            "bench",
            "--data",
            str(dataset),
            "--k-values",
            "2",
            "3",
            "--repeats",
            "1",
            "--out",
            str(out),
            "--table",
            str(table),
        ]
    )
    assert status == 0
    methods = [line.split(",")[0] for line in out.read_text().splitlines()[1:]]
    assert methods.count("knn") == 5
    assert methods.count("kmcknn") == 10
    assert "speedup" in table.read_text()


def test_scenario_generation_and_extraction(tmp_path):
    """Trajectory files extract back to the generated decision points."""
    trajectories = tmp_path / "trajectories"
    generated = tmp_path / "scenario.csv"
    status = run(
        [
            "generate",
            "--mode",
            "scenario",
            "--n",
            "3",
            "--trajectories",
            str(trajectories),
            "--out",
            str(generated),
        ]
    )
    assert status == 0
    files = sorted(trajectories.glob("trajectory_*.csv"))
    assert len(files) == 3

    extracted = tmp_path / "extracted.csv"
    status = run(["extract", *map(str, files), "--label", "moderate", "--out", str(extracted)])
    assert status == 0
    a, b = read_dataset_csv(generated), read_dataset_csv(extracted)
    assert np.allclose(a.features, b.features, atol=1e-9)
    assert b.style_labels[0].value == "moderate"
