"""Command-line front end.

Usage::

    franson-swap franson --scan alpha --steps 64 --out-dir out
    franson-swap swap --delta-small-t equal
    franson-swap hom --scan dt --from 0 --to 5tau
    franson-swap mismatch --config run.cfg
    franson-swap oracle-check

Configuration files are flat ``key = value`` text; see ``CONFIG_KEYS``.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import logging
import math
import re
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import experiments
from .experiments import RegimeError, ScanResult, ScanSpec, Setup

log = logging.getLogger("franson_swap")

FORMATS = ("csv", "json", "svg")
CSV_COLUMNS = ("swept_value", "P_00_sim", "P_01_sim", "P_10_sim", "P_11_sim",
               "P_side_total", "other", "total", "visibility")
TOTAL_TOL = 1e-4
SCAN_ALIASES = {
    "alpha": "alpha",
    "beta": "beta",
    "phase_diff": "phase_diff",
    "alpha_minus_beta": "phase_diff",
    "dt": "delta_small_t",
    "delta_small_t": "delta_small_t",
    "delay_over_tau": "delay_over_tau",
}
DEFAULT_SCANS = {
    "franson": ("alpha", "0", "2pi", 64),
    "swap": ("phase_diff", "0", "2pi", 64),
    "hom": ("delta_small_t", "-5tau", "5tau", 41),
    "mismatch": ("delta_small_t", "10tau", "50tau", 41),
}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    scenario: str
    omega: float = Setup.omega
    bandwidth: float = Setup.bandwidth
    t_short: float = Setup.t_short
    t_long: float = Setup.t_long
    alpha: float = 0.0
    beta: float = 0.0
    delta_small_t: float = Setup.delta_small_t
    t_click: float = 0.0
    scan: str = ""
    start: float = 0.0
    stop: float = 0.0
    steps: int = 0
    grid_points: int = Setup.grid_points
    time_step: float = Setup.time_step
    jobs: int = 1
    out_dir: str = "out"
    formats: tuple = ("csv",)

    def setup(self) -> Setup:
        return Setup(self.omega, self.bandwidth, self.t_short, self.t_long, self.alpha,
                     self.beta, self.delta_small_t, self.grid_points, self.time_step, self.t_click)

    def scan_values(self) -> np.ndarray:
        # phase scans leave out the endpoint so a full period has no duplicate
        endpoint = self.scan not in experiments.PHASE_PARAMETERS
        return np.linspace(self.start, self.stop, self.steps, endpoint=endpoint)

    def to_text(self) -> str:
        lines = []
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                v = ",".join(v)
            elif isinstance(v, float):
                v = repr(v)
            lines.append(f"{f.name} = {v}")
        return "\n".join(lines) + "\n"


CONFIG_KEYS = tuple(f.name for f in dataclasses.fields(RunConfig))
_FLOAT_KEYS = ("omega", "bandwidth", "t_short", "t_long", "alpha", "beta", "delta_small_t",
               "t_click", "start", "stop", "time_step")
_INT_KEYS = ("steps", "grid_points", "jobs")

_QUANTITY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)?\s*(tau|pi)?\s*$")


def parse_quantity(text: str, tau: float) -> float:
    """Number with an optional ``tau`` or ``pi`` suffix: ``5tau``, ``2pi``, ``-pi``."""
    text = str(text).strip()
    sign = 1.0
    if text.startswith("-") and text[1:].strip() in ("tau", "pi"):
        sign, text = -1.0, text[1:]
    m = _QUANTITY.match(text)
    if not m or (m.group(1) is None and m.group(2) is None):
        raise ValueError(f"cannot parse {text!r} as a number")
    value = float(m.group(1)) if m.group(1) is not None else 1.0
    unit = {"tau": tau, "pi": math.pi, None: 1.0}[m.group(2)]
    return sign * value * unit


def read_config_text(text: str, source: str = "<config>") -> dict:
    """Parse flat ``key = value`` lines; ``#`` starts a comment."""
    raw = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        raw[key] = (value, f"{source}:{lineno}")
    return raw


def build_config(raw: dict) -> RunConfig:
    """Resolve raw strings (file values overlaid with flags) into a
    :class:`RunConfig` and run the regime checks."""
    def get(key):
        return raw[key][0] if key in raw else None

    def where(key):
        return raw[key][1] if key in raw else "default"

    scenario = get("scenario")
    if scenario not in experiments.SCENARIOS:
        raise ConfigError(f"{where('scenario')}: scenario must be one of {experiments.SCENARIOS}, got {scenario!r}")
    cfg = RunConfig(scenario)
    try:
        bw = float(get("bandwidth")) if get("bandwidth") is not None else cfg.bandwidth
    except ValueError as exc:
        raise ConfigError(f"{where('bandwidth')}: {exc}") from None
    tau = 1.0 / bw
    scan_name, start, stop, steps = DEFAULT_SCANS[scenario]
    defaults = {"scan": scan_name, "start": start, "stop": stop, "steps": str(steps)}
    for key in CONFIG_KEYS:
        if key == "scenario":
            continue
        value = get(key)
        if value is None and key in defaults:
            value = defaults[key]
        if value is None:
            continue
        try:
            if key == "delta_small_t" and value == "equal":
                continue  # resolved below once t_short/t_long are known
            if key in _FLOAT_KEYS:
                setattr(cfg, key, parse_quantity(value, tau))
            elif key in _INT_KEYS:
                setattr(cfg, key, int(value))
            elif key == "formats":
                fmts = tuple(s.strip() for s in value.split(",") if s.strip())
                bad = [f for f in fmts if f not in FORMATS]
                if bad or not fmts:
                    raise ValueError(f"formats must be a subset of {FORMATS}, got {value!r}")
                cfg.formats = fmts
            elif key == "scan":
                if value not in SCAN_ALIASES:
                    raise ValueError(f"unknown scan parameter {value!r}; choose from {sorted(SCAN_ALIASES)}")
                cfg.scan = SCAN_ALIASES[value]
            else:
                setattr(cfg, key, value)
        except ValueError as exc:
            raise ConfigError(f"{where(key)}: {key}: {exc}") from None
    if get("delta_small_t") == "equal" or (scenario == "swap" and get("delta_small_t") is None):
        cfg.delta_small_t = cfg.t_long - cfg.t_short
    if cfg.steps < 1:
        raise ConfigError(f"{where('steps')}: steps must be positive")
    validate(cfg)
    return cfg


def validate(cfg: RunConfig) -> None:
    try:
        setups = ScanSpec(cfg.scenario, cfg.scan, tuple(cfg.scan_values()), cfg.setup()).setups()
        for s in setups:
            experiments.check_regime(s, cfg.scenario)
    except RegimeError as exc:
        raise ConfigError(str(exc)) from None
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def parse_config(path: str | None = None, overrides: dict | None = None) -> RunConfig:
    """Load ``path`` (if given) and overlay ``overrides``; flags win."""
    raw = {}
    if path is not None:
        p = Path(path)
        raw = read_config_text(p.read_text(encoding="utf-8"), str(p))
    for key, value in (overrides or {}).items():
        if key not in CONFIG_KEYS:
            raise ConfigError(f"unknown key {key!r}")
        raw[key] = (str(value), f"--{key.replace('_', '-')}")
    return build_config(raw)


def _fmt(x) -> str:
    if x is None:
        return ""
    return format(float(x), ".12g")


def csv_text(result: ScanResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(CSV_COLUMNS)
    for value, row in zip(result.values, result.rows):
        w.writerow([
            _fmt(value),
            _fmt(row[(0, 0, "zero")]), _fmt(row[(0, 1, "zero")]),
            _fmt(row[(1, 0, "zero")]), _fmt(row[(1, 1, "zero")]),
            _fmt(row.side_total()), _fmt(row.other_total()), _fmt(row.total()),
            _fmt(row.visibility),
        ])
    return buf.getvalue()


def json_text(result: ScanResult, cfg: RunConfig, label: str) -> str:
    rows = []
    for value, row in zip(result.values, result.rows):
        rows.append({
            "swept_value": value,
            "entries": {f"{i}{j}_{b}": p for (i, j, b), p in sorted(row.entries.items())},
            "total": row.total(),
            "visibility": row.visibility,
            "meta": {k: v for k, v in sorted(row.meta.items())},
        })
    doc = {
        "scenario": label,
        "parameter": result.spec.parameter,
        "entry": list(result.spec.entry),
        "visibility": result.visibility,
        "regime": result.regime,
        "config": {k: (list(v) if isinstance(v, tuple) else v) for k, v in dataclasses.asdict(cfg).items()},
        "rows": rows,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _analytic(label: str, result: ScanResult, cfg: RunConfig):
    """Ideal curve for the plotted quantity, or ``None``."""
    rows = result.rows
    if label == "franson":
        ph = np.array([r.meta["analytic_phase"] for r in rows])
        return "P_00 = (1 + cos(2ΩΔt + α + β)) / 8", (1 + np.cos(ph)) / 8
    if label in ("swap_same", "swap_different"):
        ph = np.array([r.meta["analytic_phase"] for r in rows])
        sign = 1 if label == "swap_same" else -1
        return f"P_00 = (1 {'+' if sign > 0 else '-'} cos(α - β)) / 16", (1 + sign * np.cos(ph)) / 16
    if label == "hom":
        d = np.asarray(result.values)
        return "(1 - exp(-(Δω δt)^2)) / 2", (1 - np.exp(-(cfg.bandwidth * d) ** 2)) / 2
    if label == "mismatch":
        d = np.array([r.meta["mismatch_over_tau"] for r in rows])
        return "exp(-((δt - Δt)/τ)^2)", np.exp(-(d ** 2))
    return None


def svg_plot(result: ScanResult, cfg: RunConfig, label: str, path: Path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    matplotlib.rcParams["svg.hashsalt"] = "franson-swap"
    x = np.asarray(result.values)
    if label == "hom":
        y = np.array([r.meta["cross"] for r in result.rows])
        ylabel = "cross-detector probability"
    elif label == "mismatch":
        y = np.array([r.visibility for r in result.rows])
        ylabel = "swapped-fringe visibility"
    else:
        y = result.column(result.spec.entry)
        ylabel = "P_{}{} ({} bin)".format(*result.spec.entry)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(x, y, "o", ms=3, label="simulation")
    analytic = _analytic(label, result, cfg)
    if analytic is not None:
        ax.plot(x, analytic[1], "-", lw=1, label=analytic[0])
    ax.set_xlabel(result.spec.parameter)
    ax.set_ylabel(ylabel)
    ax.set_title(label)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _check_totals(label: str, result: ScanResult) -> None:
    for value, row in zip(result.values, result.rows):
        total = row.total()
        if abs(total - 1.0) > TOTAL_TOL:
            raise ArithmeticError(
                f"{label}: probability total {total:.8f} at swept value {value:.6g} "
                f"drifts beyond {TOTAL_TOL:g}"
            )


def execute(cfg: RunConfig) -> int:
    """Run the configured scan and write its artifacts; returns an exit status."""
    spec = ScanSpec(cfg.scenario, cfg.scan, tuple(cfg.scan_values()), cfg.setup())
    result = experiments.run(spec, n_jobs=cfg.jobs)
    if cfg.scenario == "swap":
        results = {"swap_same": result[0], "swap_different": result[1]}
    else:
        results = {cfg.scenario: result}
    try:
        for label, res in results.items():
            _check_totals(label, res)
    except ArithmeticError as exc:
        log.error("%s", exc)
        return 2
    out = Path(cfg.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{cfg.scenario}.cfg").write_text(cfg.to_text(), encoding="utf-8")
        for label, res in results.items():
            if "csv" in cfg.formats:
                (out / f"{label}.csv").write_bytes(csv_text(res).encode("utf-8"))
            if "json" in cfg.formats:
                (out / f"{label}.json").write_text(json_text(res, cfg, label), encoding="utf-8")
            if "svg" in cfg.formats:
                svg_plot(res, cfg, label, out / f"{label}.svg")
            log.info("%s: %d rows, visibility %s", label, len(res.rows), _fmt(res.visibility) or "n/a")
    except OSError as exc:
        log.error("cannot write results: %s", exc)
        return 3
    return 0


def run_oracle_check(grid_points: int | None = None) -> int:
    setup = experiments.oracle_setup()
    if grid_points:
        setup = dataclasses.replace(setup, grid_points=grid_points)
    diffs = experiments.oracle_check(setup)
    status = 0
    for name, d in diffs.items():
        ok = d <= 1e-8
        status |= 0 if ok else 1
        print(f"{'PASS' if ok else 'FAIL'} {name}: max |fast - oracle| = {d:.3e}")
    return status


def _common_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", help="flat key = value configuration file")
    p.add_argument("--out-dir", dest="out_dir")
    p.add_argument("--format", dest="formats", action="append",
                   help="output format (csv, json, svg); repeat or comma-separate")
    p.add_argument("--grid-points", dest="grid_points")
    p.add_argument("--seedless", action="store_true",
                   help="reserved: the simulator uses no randomness; setting it is an error")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _scenario_flags(p: argparse.ArgumentParser) -> None:
    for flag in ("omega", "bandwidth", "t-short", "t-long", "alpha", "beta", "delta-small-t",
                 "t-click", "time-step", "scan", "steps", "jobs"):
        p.add_argument(f"--{flag}", dest=flag.replace("-", "_"))
    p.add_argument("--from", dest="start")
    p.add_argument("--to", dest="stop")


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(prog="franson-swap", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in experiments.SCENARIOS:
        _scenario_flags(sub.add_parser(name, parents=[common]))
    sub.add_parser("oracle-check", parents=[common])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    if args.seedless:
        print("error: --seedless is reserved; the simulator is deterministic and uses no RNG",
              file=sys.stderr)
        return 2
    if args.command == "oracle-check":
        return run_oracle_check(int(args.grid_points) if args.grid_points else None)
    overrides = {"scenario": args.command}
    for key in CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is None or key == "scenario":
            continue
        if key == "formats":
            value = ",".join(value)
        overrides[key] = value
    try:
        cfg = parse_config(args.config, overrides)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return execute(cfg)


if __name__ == "__main__":
    sys.exit(main())
