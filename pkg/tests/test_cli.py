import math
import os

import pytest
import yaml

from thermoprobe.cli import main
from thermoprobe.config import (
    ConfigError,
    config_hash,
    parse_channel,
    parse_kernel_scan,
    parse_timeopt,
)

DEPH_CONFIG = {
    "spectral": {"s": 1.0, "omega_c": 1.0, "cutoff": "exponential"},
    "probe": {"coupling": 1.0},
    "temperatures": [0.2, 1.0],
    "times": {"start": 1e-3, "stop": 1e2, "points": 25, "spacing": "log"},
    "method": "auto",
}

TOPT_CONFIG = {
    "grid": {
        "s": [0.5],
        "cutoff": ["exponential"],
        "temperature": [1.0],
        "coupling": [1.0, 20.0],
    },
    "omega_c": 1.0,
    "bracket": {"lo": 1e-4, "hi": 1e3},
}


def write_config(tmp_path, data, name="config.yaml"):
    path = tmp_path / name
    path.write_text(yaml.safe_dump(data))
    return str(path)


def read_csv(path):
    header, rows, meta = None, [], {}
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("# "):
                key, _, value = line[2:].partition(": ")
                meta[key] = value
            elif header is None:
                header = line.split(",")
            else:
                rows.append(line.split(","))
    return meta, header, rows


def test_unknown_keys_rejected_with_path():
    bad = dict(DEPH_CONFIG)
    bad["typo_key"] = 1
    with pytest.raises(ConfigError, match="typo_key"):
        parse_kernel_scan(bad)
    bad2 = {**TOPT_CONFIG, "grid": {**TOPT_CONFIG["grid"], "couplingz": [1.0]}}
    with pytest.raises(ConfigError, match="grid.couplingz"):
        parse_timeopt(bad2)


def test_field_validation_messages():
    bad = {**DEPH_CONFIG, "temperatures": [0.0, 1.0]}
    with pytest.raises(ConfigError, match=r"temperatures\[0\]"):
        parse_kernel_scan(bad)
    with pytest.raises(ConfigError, match="spins"):
        parse_channel(
            {
                "spectral": {"s": 1.0},
                "temperature": 1.0,
                "spins": [0.7],
                "couplings": [1.0],
            }
        )


def test_config_hash_sensitivity():
    base = config_hash(DEPH_CONFIG)
    assert config_hash(DEPH_CONFIG) == base
    changed = {**DEPH_CONFIG, "temperatures": [0.2, 1.5]}
    assert config_hash(changed) != base
    assert config_hash(DEPH_CONFIG, {"seed": 7}) != base


def test_dephasing_roundtrip_and_determinism(tmp_path):
    cfg = write_config(tmp_path, DEPH_CONFIG)
    out1 = str(tmp_path / "a.csv")
    out2 = str(tmp_path / "b.csv")
    assert main(["dephasing", "--config", cfg, "--out", out1]) == 0
    assert main(["dephasing", "--config", cfg, "--out", out2]) == 0
    assert open(out1).read() == open(out2).read()
    meta, header, rows = read_csv(out1)
    assert meta["subcommand"] == "dephasing"
    assert header[0] == "T_tilde"
    assert len(rows) == 2 * 25
    # floats round-trip exactly through 17 significant digits
    for token in rows[3]:
        float(token)
    # first row of each temperature block starts at t = 1e-3 with Delta > 0
    assert float(rows[0][2]) > 0.0


def test_zero_time_row(tmp_path):
    cfg_data = {
        **DEPH_CONFIG,
        "times": {"start": 0.0, "stop": 2.0, "points": 5, "spacing": "linear"},
    }
    cfg = write_config(tmp_path, cfg_data)
    out = str(tmp_path / "z.csv")
    assert main(["dephasing", "--config", cfg, "--out", out]) == 0
    _, header, rows = read_csv(out)
    first = dict(zip(header, rows[0]))
    assert float(first["t_tilde"]) == 0.0
    assert float(first["delta"]) == 0.0
    assert float(first["q_kernel_wc"]) == 0.0
    assert float(first["qfi_wc2"]) == 0.0


def test_bad_config_exit_code(tmp_path):
    cfg = write_config(tmp_path, {**DEPH_CONFIG, "bogus": True})
    assert main(["dephasing", "--config", cfg, "--out", str(tmp_path / "x.csv")]) == 2
    assert main(["dephasing", "--config", str(tmp_path / "missing.yaml"), "--out", "x"]) == 2


def test_timeopt_parallel_matches_serial(tmp_path):
    cfg = write_config(tmp_path, TOPT_CONFIG)
    out1 = str(tmp_path / "serial.csv")
    out2 = str(tmp_path / "parallel.csv")
    assert main(["timeopt", "--config", cfg, "--out", out1]) == 0
    assert main(["timeopt", "--config", cfg, "--out", out2, "--threads", "2"]) == 0
    _, h1, r1 = read_csv(out1)
    _, h2, r2 = read_csv(out2)
    assert h1 == h2
    for a, b in zip(r1, r2):
        assert a == b  # identical serializations -> within 1e-12 trivially


def test_timeopt_partial_sweep_exit_code(tmp_path):
    bad = {
        "grid": {
            "s": [1.0],
            "cutoff": ["exponential"],
            "temperature": [1.0],
            "coupling": [1e6, 1.0],
        },
        "bracket": {"lo": 10.0, "hi": 1e3},
    }
    cfg = write_config(tmp_path, bad)
    out = str(tmp_path / "partial.csv")
    assert main(["timeopt", "--config", cfg, "--out", out]) == 4
    _, header, rows = read_csv(out)
    err_idx = header.index("error")
    assert rows[0][err_idx] != ""
    assert rows[1][err_idx] == ""


def test_plot_files_created(tmp_path):
    cfg = write_config(tmp_path, DEPH_CONFIG)
    out = str(tmp_path / "plotted.csv")
    assert main(["dephasing", "--config", cfg, "--out", out, "--plot"]) == 0
    png = str(tmp_path / "plotted.png")
    assert os.path.exists(png) and os.path.getsize(png) > 1000
    cfg2 = write_config(tmp_path, TOPT_CONFIG, "topt.yaml")
    out2 = str(tmp_path / "topt.csv")
    assert main(["timeopt", "--config", cfg2, "--out", out2, "--plot"]) == 0
    assert os.path.getsize(str(tmp_path / "topt.png")) > 1000


def test_tradeoff_columns(tmp_path):
    cfg = write_config(tmp_path, DEPH_CONFIG)
    out = str(tmp_path / "trade.csv")
    assert main(["tradeoff", "--config", cfg, "--out", out]) == 0
    _, header, rows = read_csv(out)
    assert header == ["T_tilde", "t_tilde", "heat_wc", "inv_qsnr"]
    assert all(len(r) == 4 for r in rows)


def test_channel_subcommand(tmp_path):
    cfg = write_config(
        tmp_path,
        {
            "spectral": {"s": 0.5, "omega_c": 1.0, "cutoff": "exponential"},
            "temperature": 1.0,
            "spins": [0.5],
            "couplings": [1.0],
            "grid_points": 24,
        },
    )
    out = str(tmp_path / "chan.csv")
    assert main(["channel", "--config", cfg, "--out", out, "--plot"]) == 0
    _, header, rows = read_csv(out)
    row = dict(zip(header, rows[0]))
    assert float(row["ratio"]) == pytest.approx(1.0, abs=1e-6)
    assert os.path.getsize(str(tmp_path / "chan.png")) > 1000


def test_selfcheck():
    assert main(["selfcheck"]) == 0


def test_seed_and_threads_overrides(tmp_path):
    cfg = write_config(tmp_path, DEPH_CONFIG)
    out = str(tmp_path / "s.csv")
    assert main(["dephasing", "--config", cfg, "--out", out, "--seed", "99"]) == 0
    meta, _, _ = read_csv(out)
    assert meta["seed"] == "99"
