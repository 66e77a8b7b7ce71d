"""The invariant suite: structure, determinism, and a clean short run."""

import json

import pytest

from gaplab import InvalidInput, run_suite
from gaplab.suite import _PROPERTY_NAMES


def test_short_run_is_clean():
    report = run_suite(seed=7, trials=12, dim_max=4)
    assert report["failures"] == 0
    assert report["failure_details"] == []
    assert report["schema"] == 1
    assert report["generator"] == "pcg64"
    assert (report["seed"], report["trials"], report["dim_max"]) == (7, 12, 4)
    assert set(report["properties"]) == set(_PROPERTY_NAMES)
    for name, entry in report["properties"].items():
        assert entry["failures"] == 0, name
        assert entry["passes"] > 0, name


def test_reports_are_deterministic():
    a = run_suite(seed=42, trials=6, dim_max=3)
    b = run_suite(seed=42, trials=6, dim_max=3)
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    c = run_suite(seed=43, trials=6, dim_max=3)
    assert json.dumps(a, sort_keys=True) != json.dumps(c, sort_keys=True)


def test_equivalence_ratio_is_tracked():
    report = run_suite(seed=1, trials=8, dim_max=3)
    entry = report["properties"]["norm_gap_equivalence"]
    assert 0.0 < entry["max_ratio_upper"] <= 1.0


def test_input_validation():
    with pytest.raises(InvalidInput):
        run_suite(seed=1, trials=0, dim_max=4)
    with pytest.raises(InvalidInput):
        run_suite(seed=1, trials=5, dim_max=0)
