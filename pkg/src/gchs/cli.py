"""Command-line driver: ``gchs geodesic | gchs | check``.

Exit codes: 0 success, 1 identity failure (check), 2 configuration error,
3 integration blow-up or chart exit.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

import numpy as np

from . import analogy, dynamics, presets
from .errors import BlowUp, ExpressionError, GCHSError, OutOfChart, SingularMetric
from .expr import field_from_expression
from .fields import FD_STEP

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_INTEGRATION = 0, 1, 2, 3


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class ScenarioConfig:
    manifold: str = "euclidean"
    system: Optional[str] = None
    dim: Optional[int] = None
    x0: Optional[tuple] = None
    v0: Optional[tuple] = None
    t0: float = 0.0
    t1: float = 1.0
    dt: float = 1e-3
    track: tuple = ()
    fd_step: float = FD_STEP
    samples: int = 100
    output: Optional[str] = None
    format: str = "csv"

    def validate(self) -> None:
        if not self.dt > 0:
            raise ConfigError(f"dt must be positive, got {self.dt}")
        if not self.t1 > self.t0:
            raise ConfigError(f"need t1 > t0, got t0={self.t0}, t1={self.t1}")
        if not self.fd_step > 0:
            raise ConfigError(f"fd-step must be positive, got {self.fd_step}")
        if self.samples < 1:
            raise ConfigError(f"samples must be at least 1, got {self.samples}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if self.dim is not None and self.dim < 1:
            raise ConfigError(f"dim must be positive, got {self.dim}")

    def dump(self) -> str:
        """key=value lines that :func:`parse_config_text` maps back to an equal config."""
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            if value is None:
                continue
            if f.name in ("x0", "v0"):
                text = ",".join(repr(float(v)) for v in value)
            elif f.name == "track":
                if not value:
                    continue
                text = ",".join(value)
            elif isinstance(value, float):
                text = repr(value)
            else:
                text = str(value)
            lines.append(f"{f.name.replace('_', '-')}={text}")
        return "\n".join(lines) + "\n"


def _vector(text: str, key: str) -> tuple:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise ConfigError(f"{key}: expected comma-separated numbers, got {text!r}") from None


def _coerce(key: str, value: str):
    try:
        if key in ("x0", "v0"):
            return _vector(value, key)
        if key == "track":
            return tuple(v.strip() for v in value.split(",") if v.strip())
        if key in ("t0", "t1", "dt", "fd_step"):
            return float(value)
        if key in ("dim", "samples"):
            return int(value)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {value!r}") from None
    return value


_KEYS = {f.name for f in fields(ScenarioConfig)}


def parse_config_text(text: str) -> dict:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected key=value, got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _KEYS:
            raise ConfigError(f"config line {lineno}: unknown key {key!r}")
        values[key] = _coerce(key, value)
    return values


def build_config(args: argparse.Namespace) -> ScenarioConfig:
    values = {}
    if args.config:
        try:
            values.update(parse_config_text(Path(args.config).read_text()))
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
    for key in _KEYS:
        raw = getattr(args, key, None)
        if raw is None:
            continue
        if key == "track":
            raw = ",".join(raw)
        values[key] = _coerce(key, raw) if isinstance(raw, str) else raw
    config = ScenarioConfig(**values)
    config.validate()
    return config


# -- output -------------------------------------------------------------------


def _fmt(v: float) -> str:
    return "%.17g" % v


def write_table(columns: list, rows: np.ndarray, fmt: str, path: Optional[str]) -> None:
    """CSV (17 significant digits) or JSON records with the given column order."""
    buf = io.StringIO()
    if fmt == "csv":
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    else:
        records = [{c: float(v) for c, v in zip(columns, row)} for row in rows]
        json.dump(records, buf, indent=1)
        buf.write("\n")
    if path:
        Path(path).write_text(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())


def read_csv(path) -> tuple:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = np.array([[float(v) for v in row] for row in reader])
    return header, rows


# -- commands -----------------------------------------------------------------


def _metric(config: ScenarioConfig):
    try:
        metric = presets.resolve_metric(config.manifold, config.dim)
    except (KeyError, ExpressionError, GCHSError) as exc:
        raise ConfigError(str(exc).strip("'\"")) from None
    return dataclasses.replace(metric, fd_step=config.fd_step)


def _system(config: ScenarioConfig, metric):
    try:
        system = presets.resolve_system(config.system, metric)
    except (KeyError, ExpressionError, GCHSError) as exc:
        raise ConfigError(str(exc).strip("'\"")) from None
    return dataclasses.replace(system, fd_step=config.fd_step)


def _need(vec, name: str, dim: int) -> np.ndarray:
    if vec is None:
        raise ConfigError(f"--{name} is required")
    if len(vec) != dim:
        raise ConfigError(f"--{name} has {len(vec)} components, expected {dim}")
    return np.array(vec, dtype=float)


def cmd_geodesic(config: ScenarioConfig) -> int:
    metric = _metric(config)
    x0 = _need(config.x0, "x0", metric.dim)
    v0 = _need(config.v0, "v0", metric.dim)
    try:
        path = analogy.integrate_geodesic(metric, x0, v0, config.t0, config.t1, config.dt)
    except (OutOfChart, BlowUp, SingularMetric) as exc:
        _report_last(exc)
        return EXIT_INTEGRATION
    write_table(path.columns(), path.rows(), config.format, config.output)
    return EXIT_OK


def cmd_gchs(config: ScenarioConfig) -> int:
    metric = _metric(config) if config.system is None else None
    system = _system(config, metric)
    x0 = config.x0
    if x0 is None:
        x0 = presets.default_point(config.system, metric, system)
    x0 = _need(None if x0 is None else tuple(x0), "x0", system.dim)
    extra = {"H": system.H, "s": system.s}
    try:
        track = {name: field_from_expression(name, system.dim, name, extra) for name in config.track}
    except ExpressionError as exc:
        raise ConfigError(f"--track: {exc}") from None
    try:
        traj = dynamics.integrate(system, x0, config.t0, config.t1, config.dt, track)
    except (OutOfChart, BlowUp, SingularMetric) as exc:
        _report_last(exc)
        return EXIT_INTEGRATION
    write_table(traj.columns(), traj.rows(), config.format, config.output)
    return EXIT_OK


def cmd_check(config: ScenarioConfig) -> int:
    metric = _metric(config)
    system = None if config.system is None else _system(config, None)
    report = analogy.run_identity_suite(metric, system, samples=config.samples)
    text = report.to_text()
    sys.stdout.write(text)
    if config.output:
        out = Path(config.output)
        out.write_text(report.to_json() + "\n")
        out.with_suffix(".txt").write_text(text)
    if not report.all_passed:
        sys.stderr.write("failed identities: " + ", ".join(report.failures) + "\n")
        return EXIT_FAIL
    return EXIT_OK


def _report_last(exc: Exception) -> None:
    state = getattr(exc, "last_state", None)
    msg = f"error: {exc}"
    if state is not None:
        parts = [f"t={state.t!r}", "x=" + ",".join(_fmt(v) for v in state.x)]
        if hasattr(state, "v"):
            parts.append("v=" + ",".join(_fmt(v) for v in state.v))
        msg += "\nlast valid state: " + " ".join(parts)
    sys.stderr.write(msg + "\n")


COMMANDS = {"geodesic": cmd_geodesic, "gchs": cmd_gchs, "check": cmd_check}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gchs", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("geodesic", "integrate a geodesic in geospin form"),
        ("gchs", "integrate the TGHS flow with H, w and tracked GCHS rates"),
        ("check", "run the identity suite"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="key=value file mirroring the flags; flags override it")
        p.add_argument("--manifold", help="euclidean | sphere2 | halfplane | metric file")
        p.add_argument("--system", help="free | oscillator | sgq | system file (default: metric-induced)")
        p.add_argument("--dim", type=int)
        p.add_argument("--x0", help="comma-separated initial point")
        p.add_argument("--v0", help="comma-separated initial velocity")
        p.add_argument("--t0", type=float)
        p.add_argument("--t1", type=float)
        p.add_argument("--dt", type=float)
        p.add_argument("--track", action="append", help="field expression(s) to track, comma-separated")
        p.add_argument("--fd-step", dest="fd_step", type=float)
        p.add_argument("--samples", type=int)
        p.add_argument("--output", help="output path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"))
        p.add_argument("--dump-config", action="store_true", help="print the resolved config and exit")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = build_config(args)
        if args.dump_config:
            sys.stdout.write(config.dump())
            return EXIT_OK
        return COMMANDS[args.command](config)
    except ConfigError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"gchs {args.command}: error: {exc}\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
