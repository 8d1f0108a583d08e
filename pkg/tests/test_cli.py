import json
import math
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gchs import cli, integrate, presets
from gchs.expr import field_from_expression

PI_2 = repr(math.pi / 2)


def test_geodesic_straight_line(tmp_path, capsys):
    out = tmp_path / "line.csv"
    code = cli.main(["geodesic", "--manifold", "euclidean", "--dim", "2", "--x0", "0,0", "--v0", "1,2",
                     "--t1", "1", "--dt", "1e-3", "--output", str(out)])
    assert code == 0
    header, rows = cli.read_csv(out)
    assert header == ["t", "x1", "x2", "v1", "v2", "speed2"]
    np.testing.assert_allclose(rows[-1, 1:3], [1.0, 2.0], atol=1e-10)


def test_geodesic_equator(tmp_path):
    out = tmp_path / "eq.csv"
    assert cli.main(["geodesic", "--manifold", "sphere2", "--x0", f"{PI_2},0", "--v0", "0,1",
                     "--t1", "1", "--dt", "1e-3", "--output", str(out)]) == 0
    _, rows = cli.read_csv(out)
    assert np.max(np.abs(rows[:, 1] - math.pi / 2)) <= 1e-9


def test_missing_velocity_is_config_error(capsys):
    code = cli.main(["geodesic", "--manifold", "sphere2", "--x0", "1.5,0"])
    err = capsys.readouterr().err
    assert code == 2 and "usage:" in err and "--v0" in err


def test_chart_exit_reports_last_state(capsys):
    code = cli.main(["geodesic", "--manifold", "sphere2", "--x0", "0.2,0", "--v0=-1,0", "--t1", "1"])
    err = capsys.readouterr().err
    assert code == 3 and "last valid state" in err


def test_blow_up_exit(tmp_path, capsys):
    path = tmp_path / "blow.sys"
    path.write_text("dim = 2\ncanonical = true\nH = x2*x1^2\n")
    code = cli.main(["gchs", "--system", str(path), "--x0", "1,0", "--t1", "5", "--dt", "1e-2"])
    assert code == 3 and "last valid state" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["geodesic", "--manifold", "torus", "--x0", "0,0", "--v0", "1,0"],
    ["geodesic", "--manifold", "euclidean", "--x0", "0,0,0", "--v0", "1,0"],
    ["gchs", "--system", "oscillator", "--dt", "-1"],
    ["gchs", "--system", "oscillator", "--t0", "2", "--t1", "1"],
    ["gchs", "--system", "oscillator", "--x0", "a,b"],
    ["gchs", "--system", "oscillator", "--track", "x9"],
    ["check", "--samples", "0"],
])
def test_config_errors_exit_2(argv, capsys):
    assert cli.main(argv) == 2
    assert "usage:" in capsys.readouterr().err


def test_bad_format_rejected_by_parser(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["gchs", "--format", "xml"])
    assert exc.value.code == 2


def test_gchs_oscillator_energy(tmp_path):
    out = tmp_path / "osc.csv"
    assert cli.main(["gchs", "--system", "oscillator", "--t1", repr(2 * math.pi), "--track", "H",
                     "--output", str(out)]) == 0
    header, rows = cli.read_csv(out)
    assert header == ["t", "x1", "x2", "H", "w", "f[H]", "D[H]"]
    assert np.max(np.abs(rows[:, 3] - rows[0, 3])) < 1e-8
    assert np.max(np.abs(rows[:, 6])) < 1e-10


def test_gchs_sgq_first_row(tmp_path):
    out = tmp_path / "sgq.json"
    assert cli.main(["gchs", "--system", "sgq", "--t1", "0.01", "--format", "json", "--output", str(out)]) == 0
    records = json.loads(out.read_text())
    assert records[0]["x1"] == 1.0 and records[0]["x2"] == 2.0
    assert records[0]["w"] == pytest.approx(2.0)


def test_csv_round_trip_is_exact(tmp_path):
    out = tmp_path / "sgq.csv"
    assert cli.main(["gchs", "--system", "sgq", "--t1", "0.2", "--track", "s,H", "--output", str(out)]) == 0
    sys_ = presets.sgq()
    extra = {"H": sys_.H, "s": sys_.s}
    track = {name: field_from_expression(name, 2, name, extra) for name in ("s", "H")}
    traj = integrate(sys_, [1.0, 2.0], 0.0, 0.2, 1e-3, track)
    header, rows = cli.read_csv(out)
    assert header == traj.columns()
    assert np.array_equal(rows, traj.rows())


def test_check_writes_reports(tmp_path, capsys):
    out = tmp_path / "report.json"
    assert cli.main(["check", "--manifold", "euclidean", "--samples", "20", "--output", str(out)]) == 0
    entries = json.loads(out.read_text())
    assert all(e["pass"] for e in entries)
    assert all(e["max_residual"] < 1e-12 for e in entries)
    assert (tmp_path / "report.txt").read_text() == capsys.readouterr().out


def test_check_corrupted_matrix_exit_1(tmp_path, capsys):
    path = tmp_path / "bad.sys"
    path.write_text("dim = 2\ncanonical = true\ns = x1\nH = x2^2/2\nJ[1,2] = 1 + 0.001\nJ[2,1] = -1 + 0.001\n")
    out = tmp_path / "bad.json"
    assert cli.main(["check", "--system", str(path), "--samples", "20", "--output", str(out)]) == 1
    entries = json.loads(out.read_text())
    assert [e["identity"] for e in entries if not e["pass"]] == ["J_antisymmetry"]


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# scenario\nmanifold = sphere2\nx0 = 1.0,0.5\nv0 = 0.1,0.2\nt1 = 0.5\ndt = 0.01\ntrack = H,s\n")
    assert cli.main(["geodesic", "--config", str(cfg), "--t1", "0.25", "--dump-config"]) == 0
    dumped = capsys.readouterr().out
    values = cli.parse_config_text(dumped)
    assert values["t1"] == 0.25 and values["manifold"] == "sphere2" and values["track"] == ("H", "s")
    assert cli.main(["geodesic", "--config", str(tmp_path / "missing.cfg")]) == 2
    cfg.write_text("colour = blue\n")
    assert cli.main(["geodesic", "--config", str(cfg)]) == 2


finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


@settings(max_examples=60, deadline=None)
@given(
    x0=st.one_of(st.none(), st.lists(finite, min_size=1, max_size=4).map(tuple)),
    t0=finite,
    span=st.floats(1e-6, 1e3),
    dt=st.floats(1e-9, 10),
    track=st.lists(st.sampled_from(["H", "s", "x1", "H*s", "sin(x1)"]), max_size=3).map(tuple),
    fmt=st.sampled_from(["csv", "json"]),
    samples=st.integers(1, 500),
)
def test_dump_config_round_trip(x0, t0, span, dt, track, fmt, samples):
    config = cli.ScenarioConfig(manifold="sphere2", system="sgq", x0=x0, t0=t0, t1=t0 + span, dt=dt,
                                track=track, format=fmt, samples=samples)
    assert cli.ScenarioConfig(**cli.parse_config_text(config.dump())) == config


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "gchs", "gchs", "--system", "free", "--t1", "0.002"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "t,x1,x2,H,w"
