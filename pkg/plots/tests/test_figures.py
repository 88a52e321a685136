"""Rendering from the primary suite's default outputs.

Checks that each figure renders to a valid image, that rendering never
mutates its inputs, that output bytes are deterministic, and that schema
violations fail cleanly through the CLI.
"""

import hashlib

import pytest

from epfigures import FigureId, FigureSpec, render_figure
from epfigures.cli import main

CASES = {
    FigureId.F1: "adiabaticity",
    FigureId.F3: "encircle",
    FigureId.F4: "period_sweep",
    FigureId.F5: "topology",
    FigureId.F6: "apollonius",
}


def checksums(directory):
    return {
        p.name: hashlib.sha256(p.read_bytes()).hexdigest()
        for p in sorted(directory.iterdir())
    }


def assert_valid_image(path):
    data = path.read_bytes()
    assert len(data) > 1000
    if path.suffix == ".svg":
        assert b"<svg" in data[:500]
    else:
        assert data[:8] == b"\x89PNG\r\n\x1a\n"


@pytest.mark.parametrize("fig_id", list(CASES))
def test_renders_and_leaves_inputs_unchanged(fig_id, primary_outputs, tmp_path):
    src = primary_outputs[CASES[fig_id]]
    before = checksums(src)
    out = tmp_path / f"{fig_id.value.lower()}.svg"
    style = {"ep_markers": 0.21} if fig_id is FigureId.F5 else {}
    result = render_figure(FigureSpec(fig_id, src, out, style))
    assert result == out
    assert_valid_image(out)
    assert checksums(src) == before


def test_png_output(primary_outputs, tmp_path):
    out = tmp_path / "f5.png"
    render_figure(FigureSpec(FigureId.F5, primary_outputs["topology"], out, {}))
    assert_valid_image(out)


def test_deterministic_bytes(primary_outputs, tmp_path):
    src = primary_outputs["topology"]
    outs = []
    for name in ("a.svg", "b.svg"):
        out = tmp_path / name
        render_figure(FigureSpec(FigureId.F5, src, out, {"ep_markers": 0.21}))
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


class TestCli:
    def test_success(self, primary_outputs, tmp_path, capsys):
        out = tmp_path / "fig5.svg"
        code = main(["--figure", "F5", "--in", str(primary_outputs["topology"]),
                     "--out", str(out), "--ep-marker", "0.21"])
        assert code == 0
        assert_valid_image(out)
        assert str(out) in capsys.readouterr().out

    def test_missing_input_dir(self, tmp_path, capsys):
        code = main(["--figure", "F4", "--in", str(tmp_path / "nope"),
                     "--out", str(tmp_path / "f.svg")])
        assert code == 2
        assert "schema error" in capsys.readouterr().err
        assert not (tmp_path / "f.svg").exists()

    def test_empty_trajectory_file(self, tmp_path, capsys):
        for d in ("cw", "ccw"):
            for m in ("none", "hermitian", "full"):
                (tmp_path / f"encircle_{d}_{m}.csv").write_text("")
        code = main(["--figure", "F3", "--in", str(tmp_path),
                     "--out", str(tmp_path / "f3.svg")])
        assert code == 2
        assert "schema error" in capsys.readouterr().err

    def test_wrong_header(self, tmp_path, capsys):
        (tmp_path / "topology_scan.csv").write_text("jMin,xT\n0,1\n")
        code = main(["--figure", "F5", "--in", str(tmp_path),
                     "--out", str(tmp_path / "f5.svg")])
        assert code == 2

    def test_no_output_written_on_failure(self, tmp_path):
        (tmp_path / "period_sweep.csv").write_text("T,direction\n0.1,cw\n")
        out = tmp_path / "f4.svg"
        assert main(["--figure", "F4", "--in", str(tmp_path), "--out", str(out)]) == 2
        assert not out.exists()
