import json
import math
from dataclasses import replace

import numpy as np
import pytest

from ircrates.channel import capacity
from ircrates.scenario import (
    DEFAULT_NODES,
    PROTOCOL_ORDER,
    ConfigError,
    ScenarioConfig,
    default_config,
    dominance_map,
    evaluate_cell,
    load_config,
    map_to_csv,
    parse_map_csv,
    save_config,
    sl_vs_bl_map,
    slmap_to_csv,
    sum_rate_slice,
)


def small_config(**overrides):
    base = dict(x_min=-0.5, x_max=0.5, y_min=0.25, y_max=0.75, resolution=0.5)
    base.update(overrides)
    return replace(default_config(), **base)


class TestConfig:
    def test_default_values(self):
        cfg = default_config()
        assert cfg.layout.d0 == 5.0
        assert cfg.layout.gamma == 2.0
        assert (cfg.P1, cfg.P2, cfg.Pr) == (10.0, 10.0, 10.0)
        assert (cfg.N1, cfg.N2, cfg.Nr) == (1.0, 1.0, 1.0)
        assert cfg.pa_policy == "uniform"
        assert cfg.protocols == PROTOCOL_ORDER

    def test_default_geometry_distances(self):
        lay = default_config().layout
        d = lay.distances()
        assert d["h11"] == pytest.approx(11.5)
        assert d["h22"] == pytest.approx(10.0)
        assert d["h12"] == pytest.approx(11.0)  # S1 -> D2
        assert d["h21"] == pytest.approx(14.0)  # S2 -> D1

    def test_asymmetric_variant(self):
        cfg = default_config(symmetric=False)
        assert cfg.P1 == 3.0 and cfg.P2 == 10.0

    def test_round_trip(self, tmp_path):
        cfg = small_config(resolution=0.25, r0_exponent=1,
                           protocols=("af", "ef_sl"))
        path = tmp_path / "cfg.json"
        save_config(cfg, path)
        loaded = load_config(path)
        assert loaded == cfg

    def test_rejects_bad_fields(self, tmp_path):
        with pytest.raises(ConfigError, match="pa_policy"):
            small_config(pa_policy="greedy")
        with pytest.raises(ConfigError, match="resolution"):
            small_config(resolution=-1.0)
        with pytest.raises(ConfigError, match="r0_exponent"):
            small_config(r0_exponent=3)
        with pytest.raises(ConfigError, match="protocols"):
            small_config(protocols=("af", "cf"))
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError, match="JSON"):
            load_config(path)
        path.write_text(json.dumps({"powers": {}}))
        with pytest.raises(ConfigError, match="layout"):
            load_config(path)

    def test_grid_endpoints(self):
        cfg = default_config()
        gx, gy = cfg.grid_x(), cfg.grid_y()
        assert gx[0] == -4.0 and gx[-1] == 4.0
        assert gy[0] == -3.0 and gy[-1] == 4.0
        assert len(gx) == 33 and len(gy) == 29
        assert np.allclose(np.diff(gx), 0.25)

    def test_channel_at_gain_oracle(self):
        cfg = default_config()
        ch = cfg.channel_at(1.0, 0.5)
        relay = (1.0 * 5.0, 0.5 * 5.0)
        eps = cfg.layout.epsilon
        for name, (node, h) in {
            "h1r": (DEFAULT_NODES["s1"], ch.h1r),
            "h2r": (DEFAULT_NODES["s2"], ch.h2r),
        }.items():
            dist = math.hypot(relay[0] - node[0], relay[1] - node[1], eps)
            assert abs(h) == pytest.approx((dist / 5.0) ** -1.0, rel=1e-12)
        for name, (node, h) in {
            "hr1": (DEFAULT_NODES["d1"], ch.hr1),
            "hr2": (DEFAULT_NODES["d2"], ch.hr2),
        }.items():
            dist = math.hypot(relay[0] - node[0], relay[1] - node[1], eps)
            assert abs(h) == pytest.approx((dist / 5.0) ** -1.0, rel=1e-12)


class TestEvaluateCell:
    def test_rates_consistent_with_modules(self):
        from ircrates import af, df, ef

        cfg = small_config()
        cell = evaluate_cell(cfg, 0.5, 0.75)
        ch = cfg.channel_at(0.5, 0.75)
        _, af_pair = af.af_sum_rate_gain(ch, tolerance=cfg.af_tolerance,
                                         grid_points=cfg.af_grid)
        assert cell.rates["af"] == pytest.approx(af_pair.sum, abs=1e-12)
        _, df_pair = df.df_sum_rate_search(ch, grid_points=cfg.df_grid,
                                           nu=(0.5, 0.5))
        assert cell.rates["df"] == pytest.approx(df_pair.sum, abs=1e-12)
        _, scenario, bl_pair = ef.ef_bi_eval(ch, 0.5, 0.5)
        assert cell.rates["ef_bl"] == pytest.approx(bl_pair.sum, abs=1e-12)
        assert cell.bl_scenario == scenario.value
        sl_pair = ef.ef_sl_rate(ch, ef.ef_sl_min_noise(ch))
        assert cell.rates["ef_sl"] == pytest.approx(sl_pair.sum, abs=1e-12)

    def test_winner_is_argmax(self):
        cfg = small_config()
        for x, y in ((-0.5, 0.25), (0.5, 0.75)):
            cell = evaluate_cell(cfg, x, y)
            best = max(cell.rates.values())
            assert cell.rates[cell.winner] == pytest.approx(best, abs=0)
            # Among ties the earliest protocol in the fixed order wins.
            for p in PROTOCOL_ORDER:
                if cell.rates[p] == best:
                    assert cell.winner == p
                    break

    def test_af_gain_in_range(self):
        from ircrates.af import saturation_gain

        cfg = small_config()
        cell = evaluate_cell(cfg, 0.0, 0.5)
        ch = cfg.channel_at(0.0, 0.5)
        assert 0.0 <= cell.af_gain <= saturation_gain(ch) * (1 + 1e-12)

    def test_far_relay_approaches_no_relay_baseline(self):
        # A relay 500 reference distances away contributes (and hears)
        # essentially nothing; every protocol should sit at the plain
        # interference-channel sum rate.
        cfg = small_config(protocols=("af", "ef_sl"))
        cell = evaluate_cell(cfg, 500.0, 0.75)
        ch = cfg.channel_at(500.0, 0.75)
        base = sum(
            capacity(abs(ch.h_direct(i)) ** 2 * ch.P(i)
                     / (abs(ch.h_cross(i)) ** 2 * ch.P(3 - i) + ch.N(i)))
            for i in (1, 2)
        )
        assert cell.rates["af"] == pytest.approx(base, abs=1e-4)
        assert cell.rates["ef_sl"] == pytest.approx(base, abs=1e-4)

    def test_protocol_subset(self):
        cfg = small_config(protocols=("df",))
        cell = evaluate_cell(cfg, 0.0, 0.5)
        assert set(cell.rates) == {"df"}
        assert cell.winner == "df"


class TestMaps:
    def test_row_major_order(self):
        cfg = small_config()
        cells = dominance_map(cfg)
        coords = [(c.xr, c.yr) for c in cells]
        expected = [(float(x), float(y)) for y in cfg.grid_y() for x in cfg.grid_x()]
        assert coords == expected

    def test_deterministic(self):
        cfg = small_config()
        a = map_to_csv(dominance_map(cfg))
        b = map_to_csv(dominance_map(cfg))
        assert a == b

    def test_slice_matches_map_row(self):
        cfg = small_config()
        cells = dominance_map(cfg)
        row = [c for c in cells if c.yr == 0.75]
        sl = sum_rate_slice(cfg, 0.75)
        assert map_to_csv(row) == map_to_csv(sl)

    def test_csv_round_trip(self):
        cfg = small_config()
        cells = dominance_map(cfg)
        text = map_to_csv(cells)
        parsed = parse_map_csv(text)
        assert len(parsed) == len(cells)
        for orig, back in zip(cells, parsed):
            assert back.xr == orig.xr and back.yr == orig.yr
            assert back.winner == orig.winner
            assert back.bl_scenario == orig.bl_scenario
            for p in PROTOCOL_ORDER:
                assert back.rates[p] == pytest.approx(orig.rates[p], rel=1e-11)

    def test_csv_header_checked(self):
        with pytest.raises(ValueError):
            parse_map_csv("bogus,header\n1,2\n")

    def test_mirrored_layout_symmetry(self):
        # Reflect the whole node set across the x-axis: rates at (x, y) in
        # the original geometry must equal rates at (x, -y) in the mirror.
        cfg = small_config(protocols=("af", "ef_sl"))
        lay = cfg.layout
        mirrored = replace(
            lay,
            s1=(lay.s1[0], -lay.s1[1]), s2=(lay.s2[0], -lay.s2[1]),
            d1=(lay.d1[0], -lay.d1[1]), d2=(lay.d2[0], -lay.d2[1]),
        )
        mcfg = replace(cfg, layout=mirrored)
        for x, y in ((0.5, 0.75), (-0.5, 0.25)):
            orig = evaluate_cell(cfg, x, y)
            mirr = evaluate_cell(mcfg, x, -y)
            for p in orig.rates:
                assert mirr.rates[p] == pytest.approx(orig.rates[p], rel=1e-10)


class TestSlMap:
    def test_cells_and_winner(self):
        cfg = small_config()
        cells = sl_vs_bl_map(cfg)
        assert len(cells) == len(cfg.grid_x()) * len(cfg.grid_y())
        for c in cells:
            if c.bl_sum >= c.sl_sum:
                assert c.winner == "bl"
            else:
                assert c.winner == "sl"

    def test_frontier_flags(self):
        cfg = small_config(x_min=-1.0, x_max=1.0, y_min=0.25, y_max=1.25,
                           resolution=0.25)
        cells = sl_vs_bl_map(cfg)
        nx = len(cfg.grid_x())
        tags = [c.bl_scenario for c in cells]
        for idx, c in enumerate(cells):
            ix, iy = idx % nx, idx // nx
            expect = (ix > 0 and tags[idx - 1] != c.bl_scenario) or (
                iy > 0 and tags[idx - nx] != c.bl_scenario)
            assert c.frontier == expect

    def test_csv_shape(self):
        cfg = small_config()
        text = slmap_to_csv(sl_vs_bl_map(cfg))
        lines = text.strip().split("\n")
        assert lines[0] == "xr,yr,ef_sl,ef_bl,bl_scenario,winner,frontier"
        assert len(lines) == 1 + len(cfg.grid_x()) * len(cfg.grid_y())
        for line in lines[1:]:
            assert line.split(",")[6] in ("0", "1")
