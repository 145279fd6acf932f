import json

import pytest

from pygqe.config import (
    ConfigError,
    SolverConfig
)

def test_defaults():
    config = SolverConfig()
    assert config.kMax == 50.0
    assert config.tol == 1e-12
    assert config.kSwitch == 1.0
    assert config.samples == 200

def test_from_dict_casts_numbers():
    config = SolverConfig.fromDict({"kMax": 80, "gridPoints": "2001", "tol": "1e-11"})
    assert config.kMax == 80.0
    assert config.gridPoints == 2001
    assert config.tol == 1e-11

def test_unknown_keys_are_rejected():
    with pytest.raises(ConfigError, match = "kmax"):
        SolverConfig.fromDict({"kmax": 10})

@pytest.mark.parametrize("payload", [
    {"kMax": -1},
    {"kMax": True},
    {"tol": "tight"},
    {"gridPoints": 2},
    {"sampleClip": 1.5},
    [1, 2]
])
def test_invalid_values_are_rejected(payload):
    with pytest.raises(ConfigError):
        SolverConfig.fromDict(payload)

def test_merged_skips_missing_overrides():
    config = SolverConfig(kMax = 20.0).merged(kMax = None, tol = 1e-10)
    assert config.kMax == 20.0
    assert config.tol == 1e-10

def test_from_file(tmp_path):
    path = tmp_path / "tight.json"
    path.write_text(json.dumps({"kMax": 30, "residualTol": 1e-11}))
    config = SolverConfig.fromFile(path)
    assert config.kMax == 30.0
    assert config.residualTol == 1e-11
    assert SolverConfig.fromDict(config.toDict()) == config

def test_from_file_reports_unreadable_input(tmp_path):
    with pytest.raises(ConfigError):
        SolverConfig.fromFile(tmp_path / "missing.json")

    path = tmp_path / "broken.json"
    path.write_text("{kMax: 3")
    with pytest.raises(ConfigError, match = "not valid JSON"):
        SolverConfig.fromFile(path)
