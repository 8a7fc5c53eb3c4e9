import pathlib

import numpy as np
import pytest

from pwdg_plots import (
    GridMismatchError,
    SchemaError,
    compare_figure,
    convergence_figure,
    field_figure,
    read_field_component,
    read_profile,
    read_sweep_csv,
    save_figure,
)
from pwdg_plots.cli import main as cli_main

DATA = pathlib.Path(__file__).resolve().parent.parent / "sample_data"
PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


class TestReaders:
    def test_sweep_csv(self):
        data = read_sweep_csv(DATA / "p_sweep.csv")
        assert list(data["sweep"]) == list(range(3, 16))
        assert np.all(data["l2_rel"] > 0)

    def test_field_component(self):
        xs, ys, values = read_field_component(DATA / "two_layer_p12_abs.dat")
        assert values.shape == (48, 96)
        assert xs[0] == pytest.approx(-2 * np.pi)
        assert xs[-1] == pytest.approx(4 * np.pi)
        assert np.all(np.isfinite(values))

    def test_profile(self):
        polylines = read_profile(DATA / "two_layer_profile.dat")
        assert len(polylines) == 1
        assert polylines[0].shape == (2, 2)

    def test_wrong_header_rejected(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(SchemaError):
            read_sweep_csv(bad)

    def test_empty_csv_rejected_and_no_output(self, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text("sweep,N,l2_rel,h1_rel,residual,cond,seconds\n")
        out = tmp_path / "out.png"
        rc = cli_main(["convergence", str(empty), str(out)])
        assert rc == 1
        assert not out.exists()

    def test_grid_mismatch(self, tmp_path):
        small = tmp_path / "small.dat"
        with open(small, "w") as fh:
            fh.write("# grid 2 2\n")
            for y in (0.0, 1.0):
                for x in (0.0, 1.0):
                    fh.write(f"{x} {y} 0.0\n")
        with pytest.raises(GridMismatchError):
            from pwdg_plots import read_field_components

            read_field_components([DATA / "two_layer_p12_re.dat", small])


class TestFigures:
    def test_convergence_two_curves(self, tmp_path):
        fig = convergence_figure(DATA / "p_sweep.csv", kind="p")
        ax = fig.axes[0]
        assert len(ax.lines) == 2
        out = save_figure(fig, tmp_path / "conv.png")
        data = pathlib.Path(out).read_bytes()
        assert data.startswith(PNG_MAGIC) and len(data) > 1000

    def test_h_sweep_has_guide_line(self, tmp_path):
        fig = convergence_figure(DATA / "h_sweep.csv", kind="h")
        ax = fig.axes[0]
        labels = [line.get_label() for line in ax.lines]
        assert any("h^2" in label for label in labels)
        assert len(ax.lines) == 3
        save_figure(fig, tmp_path / "h.png")

    def test_compare_figure(self, tmp_path):
        fig = compare_figure(DATA / "compare.csv")
        assert len(fig.axes[0].lines) == 2
        save_figure(fig, tmp_path / "cmp.png")

    def test_field_single_panel(self, tmp_path):
        fig = field_figure([DATA / "two_layer_p12_abs.dat"])
        assert len([ax for ax in fig.axes if ax.get_images()]) == 1
        save_figure(fig, tmp_path / "one.png")

    def test_field_three_panels_with_profile(self, tmp_path):
        components = [DATA / f"two_layer_p12_{c}.dat"
                      for c in ("re", "im", "abs")]
        fig = field_figure(components, profile_path=DATA / "two_layer_profile.dat")
        panels = [ax for ax in fig.axes if ax.get_images()]
        assert len(panels) == 3
        # profile polyline drawn in every panel
        assert all(len(ax.lines) >= 1 for ax in panels)
        # extended-domain dump spans [-2*pi, 4*pi]
        assert panels[0].get_xlim()[0] == pytest.approx(-2 * np.pi)
        assert panels[0].get_xlim()[1] == pytest.approx(4 * np.pi)
        out = save_figure(fig, tmp_path / "three.png")
        assert pathlib.Path(out).stat().st_size > 10000


class TestCliAndDeterminism:
    def test_secondary_acceptance(self, tmp_path):
        """[SECONDARY] regenerate a convergence figure and a three-panel
        field figure from the shipped samples; non-empty, deterministic."""
        import time

        start = time.time()
        conv1 = tmp_path / "conv1.png"
        conv2 = tmp_path / "conv2.png"
        assert cli_main(["convergence", str(DATA / "p_sweep.csv"),
                         str(conv1), "--kind", "p"]) == 0
        assert cli_main(["convergence", str(DATA / "p_sweep.csv"),
                         str(conv2), "--kind", "p"]) == 0
        field1 = tmp_path / "field1.png"
        field2 = tmp_path / "field2.png"
        components = [str(DATA / f"two_layer_p12_{c}.dat")
                      for c in ("re", "im", "abs")]
        assert cli_main(["field", *components, str(field1),
                         "--profile", str(DATA / "two_layer_profile.dat")]) == 0
        assert cli_main(["field", *components, str(field2),
                         "--profile", str(DATA / "two_layer_profile.dat")]) == 0
        elapsed = time.time() - start
        for path in (conv1, field1):
            blob = path.read_bytes()
            assert blob.startswith(PNG_MAGIC) and len(blob) > 1000
        assert conv1.read_bytes() == conv2.read_bytes()
        assert field1.read_bytes() == field2.read_bytes()
        ok = elapsed < 10
        print(f"[{'PASS' if ok else 'FAIL'}] secondary plot regeneration: "
              f"deterministic, {elapsed:.1f}s")
        assert ok

    def test_missing_file_exit_code(self, tmp_path):
        rc = cli_main(["convergence", str(tmp_path / "nope.csv"),
                       str(tmp_path / "out.png")])
        assert rc == 1
