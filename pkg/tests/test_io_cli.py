"""Dataset round-trips, manifests, SVG determinism, and the CLI surface."""

import json
import math
import os

import numpy as np
import pytest

from heatbayes.cli import EXIT_CONFIG, EXIT_IO, EXIT_OK, main
from heatbayes.io import RunManifest, read_dataset, write_dataset


class TestWriteDataset:
    def test_round_trip_bit_exact(self, tmp_path):
        rng = np.random.default_rng(0)
        rows = [tuple(rng.standard_normal(3) * 10.0**rng.integers(-200, 200))
                for _ in range(50)]
        rows.append((math.pi, 1.0 / 3.0, 5e-324))
        path = tmp_path / "data.csv"
        write_dataset((("a", "b", "c"), rows), path)
        cols, back = read_dataset(path)
        assert cols == ["a", "b", "c"]
        for row, orig in zip(back, rows):
            for v, o in zip(row, orig):
                assert v == o  # exact, including subnormals

    def test_empty_report_header_only(self, tmp_path):
        path = tmp_path / "empty.csv"
        write_dataset((("x", "y"), []), path)
        assert path.read_bytes() == b"x,y\n"

    def test_identical_inputs_identical_checksums(self, tmp_path):
        table = (("u",), [(1.2345678901234567,), (float("nan"),)])
        c1 = write_dataset(table, tmp_path / "a.csv")
        c2 = write_dataset(table, tmp_path / "b.csv")
        assert c1 == c2
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_lf_and_utf8(self, tmp_path):
        path = tmp_path / "d.csv"
        write_dataset((("name",), [("value",)]), path)
        raw = path.read_bytes()
        assert b"\r" not in raw
        raw.decode("utf-8")

    def test_unwritable_path_raises_oserror(self, tmp_path):
        with pytest.raises(OSError):
            write_dataset((("a",), []), tmp_path / "no_dir" / "x.csv")


class TestManifest:
    def test_records_outputs_and_digest(self, tmp_path):
        man = RunManifest(config={"n": 100.0, "prior": "exp"}, seed=9)
        csum = write_dataset((("a",), [(1.0,)]), tmp_path / "out.csv")
        man.record(tmp_path / "out.csv", csum)
        man.write(tmp_path / "manifest.json")
        payload = json.loads((tmp_path / "manifest.json").read_text())
        assert payload["seed"] == 9
        assert payload["outputs"][0]["sha256"] == csum
        assert len(payload["config_digest"]) == 64
        assert payload["wall_clock_s"] >= 0


class TestSvg:
    def _panel(self, draws=2):
        from heatbayes import ExperimentConfig, PanelSpec, PriorSpec, render_panel
        cfg = ExperimentConfig(prior=PriorSpec.exponential(1.0), n_grid=(1e4,),
                               seed=1, x_grid_points=41)
        return render_panel(cfg, PanelSpec(prior=cfg.prior, n=1e4,
                                           data_stream=0, draws=draws))

    def test_deterministic_bytes(self, tmp_path):
        from heatbayes.svg import render_static_plot
        panel = self._panel()
        c1 = render_static_plot(panel, tmp_path / "a.svg")
        c2 = render_static_plot(panel, tmp_path / "b.svg")
        assert c1 == c2
        assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes()

    def test_legend_conventions_present(self, tmp_path):
        from heatbayes.svg import render_static_plot
        render_static_plot(self._panel(), tmp_path / "p.svg")
        body = (tmp_path / "p.svg").read_text()
        assert body.startswith("<?xml")
        assert "#000000" in body and "#cc2222" in body and "#117733" in body
        assert "stroke-dasharray" in body

    def test_no_dashes_without_draws(self, tmp_path):
        from heatbayes.svg import render_static_plot
        render_static_plot(self._panel(draws=0), tmp_path / "p.svg")
        assert "stroke-dasharray" not in (tmp_path / "p.svg").read_text()

    def test_empty_panel_rejected(self, tmp_path):
        from heatbayes.experiments import PanelData
        from heatbayes.svg import render_static_plot
        empty = PanelData(label="", x=np.array([]), truth=np.array([]),
                          post_mean=np.array([]), lower=np.array([]),
                          upper=np.array([]), draw_curves=np.zeros((0, 0)))
        with pytest.raises(ValueError):
            render_static_plot(empty, tmp_path / "e.svg")


class TestCli:
    def test_unknown_subcommand_fails_with_usage(self, capsys):
        assert main(["frobnicate"]) == EXIT_CONFIG
        assert "usage" in capsys.readouterr().err.lower()

    def test_no_subcommand_fails(self):
        assert main([]) == EXIT_CONFIG

    def test_simulate_writes_files(self, tmp_path):
        out = str(tmp_path / "obs.csv")
        code = main(["simulate", "--n", "1e4", "--seed", "3", "--out", out])
        assert code == EXIT_OK
        assert os.path.exists(out)
        assert os.path.exists(str(tmp_path / "obs.manifest.json"))
        cols, rows = read_dataset(out)
        assert cols == ["i", "kappa", "mu0", "y"]
        assert len(rows) == 100

    def test_simulate_deterministic(self, tmp_path):
        a, b = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
        main(["simulate", "--n", "100", "--seed", "5", "--out", a])
        main(["simulate", "--n", "100", "--seed", "5", "--out", b])
        assert open(a, "rb").read() == open(b, "rb").read()

    def test_posterior_writes_summary_and_mean(self, tmp_path):
        out = str(tmp_path / "post.csv")
        code = main(["posterior", "--n", "1e4", "--prior", "exp", "--alpha",
                     "1", "--seed", "2", "--out", out])
        assert code == EXIT_OK
        cols, rows = read_dataset(out)
        assert cols == ["i", "y", "mean", "variance", "shrink_var"]
        fn_cols, fn_rows = read_dataset(str(tmp_path / "post_mean.csv"))
        assert fn_cols == ["x", "post_mean"]
        assert len(fn_rows) == 201

    def test_bands_dataset_schema(self, tmp_path):
        out = str(tmp_path / "bands.csv")
        code = main(["bands", "--n", "1e4", "--prior", "exp", "--alpha", "1",
                     "--seed", "7", "--out", out])
        assert code == EXIT_OK
        cols, rows = read_dataset(out)
        assert cols[:5] == ["x", "truth", "post_mean", "lower", "upper"]
        assert cols[5] == "draw_01" and cols[-1] == "draw_20"
        assert len(rows) == 201

    def test_coverage_runs_small(self, tmp_path, capsys):
        out = str(tmp_path / "cov.csv")
        code = main(["coverage", "--prior", "exp", "--alpha", "1", "--n",
                     "1e3", "--reps", "40", "--seed", "1", "--draws", "20000",
                     "--out", out])
        assert code == EXIT_OK
        assert "coverage" in capsys.readouterr().out
        cols, rows = read_dataset(out)
        assert "coverage" in cols and len(rows) == 1

    def test_risk_multi_n(self, capsys):
        code = main(["risk", "--prior", "exp", "--alpha", "1", "--n",
                     "1e2,1e4", "--reps", "30", "--seed", "1"])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert "risk_exact" in out

    def test_lemmas_small_grid(self, tmp_path, capsys):
        out = str(tmp_path / "lemmas.csv")
        code = main(["lemmas", "--grid", "1e4,1e6", "--out", out])
        assert code == EXIT_OK
        assert "series-damped" in capsys.readouterr().out
        cols, rows = read_dataset(out)
        assert "ratio" in cols

    def test_config_file_with_flag_override(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"n": "1e3", "seed": 4, "prior": "exp",
                                   "alpha": 1.0}))
        out = str(tmp_path / "o.csv")
        code = main(["simulate", "--config", str(cfg), "--seed", "9",
                     "--out", out])
        assert code == EXIT_OK
        # flag wins over config: seed 9, not 4
        ref = str(tmp_path / "ref.csv")
        main(["simulate", "--n", "1e3", "--seed", "9", "--out", ref])
        assert open(out, "rb").read() == open(ref, "rb").read()

    def test_malformed_config_reports_location(self, tmp_path, capsys):
        cfg = tmp_path / "bad.json"
        cfg.write_text("{ not json")
        assert main(["simulate", "--config", str(cfg)]) == EXIT_CONFIG
        err = capsys.readouterr().err
        assert "line" in err

    def test_unknown_config_field_rejected(self, tmp_path):
        cfg = tmp_path / "bad.json"
        cfg.write_text(json.dumps({"nonsense_field": 1}))
        assert main(["simulate", "--config", str(cfg)]) == EXIT_CONFIG

    def test_bad_flag_value_is_config_error(self):
        assert main(["coverage", "--prior", "exp", "--alpha", "-2",
                     "--n", "1e3", "--reps", "5"]) == EXIT_CONFIG
        assert main(["simulate", "--n", "0"]) == EXIT_CONFIG

    def test_io_error_exit_code(self, tmp_path):
        target = str(tmp_path / "missing_dir" / "x.csv")
        assert main(["simulate", "--n", "1e3", "--out", target]) == EXIT_IO

    def test_figures_single_protocol(self, tmp_path, capsys):
        out = str(tmp_path / "figs")
        code = main(["figures", "--fig", "fig2", "--seed", "1",
                     "--grid", "41", "--out", out])
        assert code == EXIT_OK
        files = sorted(os.listdir(out))
        csvs = [f for f in files if f.endswith(".csv")]
        svgs = [f for f in files if f.endswith(".svg")]
        assert len(csvs) == 10 and len(svgs) == 10
        assert "manifest.json" in files
        manifest = json.loads(open(os.path.join(out, "manifest.json")).read())
        assert len(manifest["outputs"]) == 20


class TestEnsureFinite:
    def test_rejects_hidden_nonfinite(self):
        from heatbayes.cli import NumericFailure, _ensure_finite
        with pytest.raises(NumericFailure):
            _ensure_finite(("a", "b"), [(1.0, float("inf"))])
        # allowed-missing columns pass
        _ensure_finite(("radius_freq",), [(float("nan"),)])
