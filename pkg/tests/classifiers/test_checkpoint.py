"""
Tests for the checkpoint file format.
"""
import json

import numpy as np
import pytest

from src.classifiers.checkpoint import load_checkpoint, save_checkpoint
from src.classifiers.gcn import GcnParams, init_gcn_params
from src.classifiers.logreg import LogRegParams


def test_gcn_checkpoint_reloads_exactly(tmp_path):
    params = init_gcn_params(6, 4, 3, np.random.default_rng(0))
    path = tmp_path / "ckpt" / "seed-0.ckpt"
    save_checkpoint(path, params, {"seed": 0, "epoch": 12})

    loaded, metadata = load_checkpoint(path)
    assert isinstance(loaded, GcnParams)
    assert np.array_equal(loaded.theta0, params.theta0)
    assert np.array_equal(loaded.theta1, params.theta1)
    assert metadata == {"seed": 0, "epoch": 12}


def test_logreg_checkpoint_keeps_l2(tmp_path):
    params = LogRegParams(weights=np.arange(6.0).reshape(3, 2), bias=np.array([0.5, -0.5]), l2=0.01)
    path = tmp_path / "logreg.ckpt"
    save_checkpoint(path, params)

    loaded, metadata = load_checkpoint(path)
    assert isinstance(loaded, LogRegParams)
    assert np.array_equal(loaded.weights, params.weights)
    assert loaded.l2 == 0.01
    assert metadata == {}


def test_header_is_json_line(tmp_path):
    path = tmp_path / "a.ckpt"
    save_checkpoint(path, init_gcn_params(2, 2, 2, np.random.default_rng(1)))
    header = json.loads(path.read_bytes().split(b"\n", 1)[0])
    assert header["kind"] == "gcn"
    assert [entry["name"] for entry in header["arrays"]] == ["theta0", "theta1"]


def test_truncated_buffer(tmp_path):
    path = tmp_path / "a.ckpt"
    save_checkpoint(path, init_gcn_params(3, 2, 2, np.random.default_rng(0)))
    path.write_bytes(path.read_bytes()[:-8])
    with pytest.raises(ValueError, match="truncated"):
        load_checkpoint(path)


def test_bad_header(tmp_path):
    path = tmp_path / "a.ckpt"
    path.write_bytes(b"not json\n")
    with pytest.raises(ValueError, match="header"):
        load_checkpoint(path)


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_checkpoint(tmp_path / "missing.ckpt")
