"""Shared fixtures: generate the simulation suite's default outputs once.

The renderers are exercised against real files produced by the `epdrive`
command-line tool (no import of its internals), matching how the two
packages are used together.
"""

import subprocess

import pytest

EXPERIMENTS = {
    "encircle": "Encircle",
    "period_sweep": "PeriodSweep",
    "topology": "TopologyScan",
    "apollonius": "ApolloniusDeviation",
    "adiabaticity": "AdiabaticitySweep",
}


@pytest.fixture(scope="session")
def primary_outputs(tmp_path_factory):
    """Directory per experiment, populated by the primary suite's defaults."""
    dirs = {}
    for key, name in EXPERIMENTS.items():
        out = tmp_path_factory.mktemp(key)
        result = subprocess.run(
            ["epdrive", "--experiment", name, "--out", str(out)],
            capture_output=True, text=True,
        )
        assert result.returncode == 0, f"{name} failed: {result.stderr}"
        dirs[key] = out
    return dirs
