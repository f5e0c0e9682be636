"""CLI behaviour for crmid-figures."""

from __future__ import annotations

import subprocess
import sys

import pytest

from crmid_figures.cli import main

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def test_render_fig1(fig1_csv, tmp_path, capsys):
    out = tmp_path / "fig1.png"
    rc = main(["render", "--input", str(fig1_csv), "--figure", "fig1", "--output", str(out)])
    assert rc == 0
    assert out.read_bytes()[:8] == PNG_MAGIC
    assert capsys.readouterr().out.strip() == str(out)


def test_render_fig2(fig2_csv, tmp_path):
    out = tmp_path / "fig2.png"
    rc = main(["render", "--input", str(fig2_csv), "--figure", "fig2", "--output", str(out)])
    assert rc == 0
    assert out.read_bytes()[:8] == PNG_MAGIC


def test_schema_mismatch_exits_1(fig1_csv, tmp_path, capsys):
    out = tmp_path / "fig2.png"
    rc = main(["render", "--input", str(fig1_csv), "--figure", "fig2", "--output", str(out)])
    assert rc == 1
    err = capsys.readouterr().err
    assert err.startswith("error:")
    assert "normalized_throughput" in err
    assert not out.exists()


def test_missing_input_exits_1(tmp_path, capsys):
    rc = main(
        [
            "render",
            "--input",
            str(tmp_path / "nope.csv"),
            "--figure",
            "fig1",
            "--output",
            str(tmp_path / "x.png"),
        ]
    )
    assert rc == 1
    assert "cannot read" in capsys.readouterr().err


def test_unwritable_output_exits_2(fig1_csv, tmp_path, capsys):
    out = tmp_path / "no-such-dir" / "fig1.png"
    rc = main(["render", "--input", str(fig1_csv), "--figure", "fig1", "--output", str(out)])
    assert rc == 2
    assert "cannot write" in capsys.readouterr().err


def test_unknown_figure_rejected(fig1_csv, tmp_path):
    with pytest.raises(SystemExit) as excinfo:
        main(["render", "--input", str(fig1_csv), "--figure", "fig3", "--output", "x.png"])
    assert excinfo.value.code == 2


def test_missing_required_flag_rejected():
    with pytest.raises(SystemExit) as excinfo:
        main(["render", "--figure", "fig1", "--output", "x.png"])
    assert excinfo.value.code == 2


def test_module_entry_point(fig1_csv, tmp_path):
    out = tmp_path / "fig1.png"
    proc = subprocess.run(
        [
            sys.executable,
            "-m",
            "crmid_figures",
            "render",
            "--input",
            str(fig1_csv),
            "--figure",
            "fig1",
            "--output",
            str(out),
        ],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert out.read_bytes()[:8] == PNG_MAGIC
