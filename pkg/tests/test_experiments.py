import json

import numpy as np
import pytest

import oracle
from chmetric.errors import UnknownFigure
from chmetric.experiments import (FIGURE_IDS, FigureConfig, InvariantsConfig, LipschitzConfig, ResidualConfig,
                                  emit_figures, figure_tables, load_config, parse_config, report_json,
                                  report_text, run_invariants, run_lipschitz, run_residual)


def test_parse_config_types():
    cfg = parse_config(InvariantsConfig, "energies = 1, 3\n# comment\nN = 512  # inline\ntol=1e-5\n")
    assert cfg.energies == (1.0, 3.0) and cfg.N == 512 and cfg.tol == 1e-5
    cfg = parse_config(LipschitzConfig, "lagrangian = false\npairs = 1:2:3:4\n")
    assert cfg.lagrangian is False and cfg.pairs == ("1:2:3:4",)


@pytest.mark.parametrize("text", ["bogus = 1", "N 12", "lagrangian = maybe"])
def test_parse_config_errors(text):
    cls = LipschitzConfig if "lagrangian" in text else InvariantsConfig
    with pytest.raises(ValueError):
        parse_config(cls, text)


def test_load_default_and_file(tmp_path):
    assert load_config(ResidualConfig, "default") == ResidualConfig()
    path = tmp_path / "r.cfg"
    path.write_text("E = 1\nsizes = 256, 512\n")
    assert load_config(ResidualConfig, str(path)).sizes == (256, 512)


def test_small_invariant_run_passes():
    report = run_invariants(InvariantsConfig(energies=(1.0,), offsets=(0.5,), N=512))
    assert report["passed"]
    json.loads(report_json(report))
    assert report_text(report).startswith("invariants: PASS")


def test_small_residual_run():
    report = run_residual(ResidualConfig(offsets=(1.0,), sizes=(512, 1024)))
    assert report["passed"]
    assert report["rows"][0]["ratios"][0] > 1.5
    assert report["rows"][-1]["name"] == "centre_at_rest"


def test_small_lipschitz_run():
    cfg = LipschitzConfig(pairs=("2:2:2:2.1",), N=512, lagrangian=False)
    report = run_lipschitz(cfg)
    assert report["passed"]
    names = [r["name"] for r in report["rows"]]
    assert names == ["identical_pair", "lipschitz_pair", "zero_contrast"]


def test_unknown_figure():
    with pytest.raises(UnknownFigure):
        figure_tables("nope")


def test_every_figure_has_panels():
    cfg = FigureConfig(x_points=21, eta_points=16)
    for fid in FIGURE_IDS:
        tables = figure_tables(fid, cfg)
        assert len(tables) == (9 if fid == "resc" else 4)
        for text in tables.values():
            assert text.splitlines()[0] == "coord,value,branch"


def test_collision_panels_mark_the_atom(tmp_path):
    paths = emit_figures("u", str(tmp_path), FigureConfig(x_points=41))
    assert len(paths) == 4
    lines = (tmp_path / "u_t2.csv").read_text().splitlines()
    assert lines[-1] == "0,4,atom"
    values = np.array([float(l.split(",")[1]) for l in lines[1:-1]])
    assert np.all(values == 0.0)


def test_breaking_panel_of_G_has_full_jump():
    text = figure_tables("G", FigureConfig(x_points=41))["G_t2.csv"]
    rows = [l.split(",") for l in text.splitlines()[1:]]
    at_zero = [float(v) for x, v, b in rows if float(x) == 0.0 and b != "atom"]
    assert at_zero == [2.0]
    assert oracle.G(2.0, 2.0, 2.0, np.array([1e-14]))[0] - at_zero[0] == pytest.approx(4.0)
