"""Shared fixtures: real CSV inputs produced by the crmid CLI."""

from __future__ import annotations

import subprocess
import sys
from pathlib import Path

import pytest


def run_crmid(args: list[str], output: Path) -> Path:
    cmd = [sys.executable, "-m", "crmid", "run", *args, "--output", str(output)]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    assert proc.returncode == 0, f"{cmd} failed:\n{proc.stderr}"
    assert output.exists()
    return output


@pytest.fixture(scope="session")
def fig1_csv(tmp_path_factory: pytest.TempPathFactory) -> Path:
    out = tmp_path_factory.mktemp("figdata") / "fig1.csv"
    args = ["--preset", "fig1", "--users", "1,4,16", "--samples", "300", "--seed", "5"]
    return run_crmid(args, out)


@pytest.fixture(scope="session")
def fig2_csv(tmp_path_factory: pytest.TempPathFactory) -> Path:
    out = tmp_path_factory.mktemp("figdata") / "fig2.csv"
    args = ["--preset", "fig2", "--users", "1000,10000", "--samples", "200", "--seed", "5"]
    return run_crmid(args, out)


@pytest.fixture(scope="session")
def theorem_csv(tmp_path_factory: pytest.TempPathFactory) -> Path:
    out = tmp_path_factory.mktemp("figdata") / "theorem.csv"
    args = ["--preset", "theorem-suite", "--users", "2,4", "--samples", "100", "--seed", "5"]
    return run_crmid(args, out)
