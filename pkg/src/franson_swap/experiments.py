"""Scenario builders and parameter scans.

Four scenarios are supported: ``franson`` (one source, two unbalanced
interferometers), ``swap`` (two sources, conditioned on a click pair, one
scan per postselection class), ``hom`` (cross-detector coincidences against
click separation) and ``mismatch`` (swapped-fringe visibility as the click
separation drifts away from the arm imbalance).
"""
from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .network import MachZehnderParams
from .spectral import MIN_SPAN_FACTOR, FrequencyGrid
from . import oracle
from .swap import (
    DETECTORS,
    EDGE_MARGIN,
    DetectionEvent,
    beam_split,
    postselection_weight,
    swapped_fringe_probabilities,
)
from .twophoton import (
    BIN_HALF_WIDTH,
    BINS,
    MIN_SEPARATION,
    CoincidenceTable,
    franson_table,
    make_pair_state,
)

SCENARIOS = ("franson", "swap", "hom", "mismatch")
PHASE_PARAMETERS = ("alpha", "beta", "phase_diff")
PARAMETERS = PHASE_PARAMETERS + ("delta_small_t", "delay_over_tau")


class RegimeError(ValueError):
    """Parameters fall outside the regime a scenario can resolve."""


class VisibilityError(ValueError):
    pass


@dataclass(frozen=True)
class Setup:
    """One full parameter assignment, in dimensionless units (time in units
    of the coherence time when ``bandwidth`` is one)."""

    omega: float = 40.0
    bandwidth: float = 1.0
    t_short: float = 5.0
    t_long: float = 35.0
    alpha: float = 0.0
    beta: float = 0.0
    delta_small_t: float = 30.0
    grid_points: int = 2**14
    time_step: float = 0.25
    t_click: float = 0.0

    @property
    def tau(self) -> float:
        return 1.0 / self.bandwidth

    @property
    def delay(self) -> float:
        return self.t_long - self.t_short

    def grid(self) -> FrequencyGrid:
        return FrequencyGrid.for_time_step(self.omega, self.time_step, self.grid_points)

    def pair(self):
        return make_pair_state(self.omega, self.bandwidth, self.grid())

    def mz_a(self) -> MachZehnderParams:
        return MachZehnderParams(self.t_short, self.t_long, self.alpha)

    def mz_b(self) -> MachZehnderParams:
        return MachZehnderParams(self.t_short, self.t_long, self.beta)

    def with_value(self, parameter: str, value: float) -> "Setup":
        if parameter == "phase_diff":
            return dataclasses.replace(self, alpha=self.beta + value)
        if parameter == "delay_over_tau":
            return dataclasses.replace(self, t_long=self.t_short + value * self.tau)
        if parameter in ("alpha", "beta", "delta_small_t"):
            return dataclasses.replace(self, **{parameter: value})
        raise ValueError(f"unknown scan parameter {parameter!r}; expected one of {PARAMETERS}")


def check_regime(setup: Setup, scenario: str) -> None:
    """Raise :class:`RegimeError` naming the first violated constraint."""
    if scenario not in SCENARIOS:
        raise ValueError(f"unknown scenario {scenario!r}")
    tau = setup.tau
    span = 2.0 * math.pi / setup.time_step
    if span < MIN_SPAN_FACTOR * setup.bandwidth:
        raise RegimeError(
            f"time_step={setup.time_step:g} gives a spectral span of "
            f"{span / setup.bandwidth:.3g} bandwidths; need >= {MIN_SPAN_FACTOR:g} "
            f"(time_step <= {2 * math.pi / (MIN_SPAN_FACTOR * setup.bandwidth):.4g})"
        )
    if scenario != "hom":
        if not setup.t_long > setup.t_short:
            raise RegimeError("t_long must exceed t_short")
        ratio = setup.delay / tau
        if ratio < MIN_SEPARATION:
            raise RegimeError(
                f"Δt={ratio:.3g}τ violates Δt ≥ {MIN_SEPARATION:g}τ "
                f"for scenario {scenario}"
            )
        for name in ("t_short", "t_long"):
            steps = getattr(setup, name) / setup.time_step
            if abs(steps - round(steps)) > 1e-9 * max(1.0, abs(steps)):
                raise RegimeError(
                    f"{name}={getattr(setup, name):g} is not a multiple of time_step={setup.time_step:g}"
                )
    window = setup.grid_points * setup.time_step
    half = window / 2
    margin = EDGE_MARGIN * tau
    low = setup.t_click + min(0.0, setup.delta_small_t)
    high = setup.t_click + max(0.0, setup.delta_small_t)
    if scenario in ("swap", "mismatch"):
        low += min(setup.t_short, 0.0)
        high += max(setup.t_long, 0.0)
    if scenario != "franson" and (low - margin < -half or high + margin > half - setup.time_step):
        raise RegimeError(
            f"time window [{-half:g}, {half:g}) cannot hold clicks at {setup.t_click:g} and "
            f"{setup.t_click + setup.delta_small_t:g} plus delays with a {EDGE_MARGIN:g}τ margin; "
            "raise grid_points"
        )
    if scenario == "franson" and 2 * (setup.delay + BIN_HALF_WIDTH * tau) > window:
        raise RegimeError("relative-time window too short for the side peaks; raise grid_points")


@dataclass(frozen=True)
class ScanSpec:
    scenario: str
    parameter: str
    values: tuple
    fixed: Setup = field(default_factory=Setup)
    entry: tuple | None = None

    def __post_init__(self):
        if self.entry is None:
            default = (0, 1, "zero") if self.scenario == "hom" else (0, 0, "zero")
            object.__setattr__(self, "entry", default)
        values = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if self.scenario not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.scenario!r}")
        if self.parameter not in PARAMETERS:
            raise ValueError(f"unknown scan parameter {self.parameter!r}")
        if not values:
            raise ValueError("scan needs at least one value")
        diffs = np.diff(values)
        if len(values) > 1 and not (np.all(diffs > 0) or np.all(diffs < 0)):
            raise ValueError("scan values must be strictly monotone")
        if self.entry[2] not in BINS:
            raise ValueError(f"unknown bin {self.entry[2]!r}")

    def setups(self) -> list[Setup]:
        return [self.fixed.with_value(self.parameter, v) for v in self.values]


@dataclass
class ScanResult:
    spec: ScanSpec
    rows: list
    visibility: float | None
    regime: dict = field(default_factory=dict)

    @property
    def values(self) -> tuple:
        return self.spec.values

    def column(self, key) -> np.ndarray:
        return np.array([row[key] for row in self.rows])


def fringe_visibility(values: Sequence[float], rows: Sequence[CoincidenceTable], entry=(0, 0, "zero"),
                      periodic: bool = True) -> float:
    """``(max - min) / (max + min)`` of one table entry across a scan.

    With ``periodic`` the scan must hold at least eight points covering a
    full 2 pi period (counting the last step).
    """
    values = np.asarray(values, dtype=float)
    if len(values) < 8:
        raise VisibilityError(f"need at least 8 scan points, got {len(values)}")
    if periodic:
        step = abs(values[1] - values[0])
        if abs(values[-1] - values[0]) + step < 2 * math.pi * (1 - 1e-9):
            raise VisibilityError("phase scan does not cover a full period")
    p = np.array([row[entry] for row in rows])
    hi, lo = float(p.max()), float(p.min())
    if hi + lo <= 0.0:
        raise VisibilityError(f"entry {entry} is identically zero; visibility undefined")
    return min(max((hi - lo) / (hi + lo), 0.0), 1.0)


def _map(fn: Callable, items: Sequence, n_jobs: int) -> list:
    if n_jobs <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(fn, items))


def _regime(setup: Setup) -> dict:
    return {
        "delay_over_tau": setup.delay / setup.tau,
        "time_step": setup.time_step,
        "grid_points": setup.grid_points,
        "frequency_spacing": setup.grid().spacing,
    }


def _result(spec: ScanSpec, rows: list, periodic: bool) -> ScanResult:
    try:
        vis = fringe_visibility(spec.values, rows, spec.entry, periodic=periodic)
    except VisibilityError:
        vis = None
    for row in rows:
        if row.visibility is None:
            row.visibility = vis
    return ScanResult(spec, rows, vis, _regime(spec.fixed))


def _periodic(spec: ScanSpec) -> bool:
    return spec.parameter in PHASE_PARAMETERS


def _require(spec: ScanSpec, scenario: str):
    if spec.scenario != scenario:
        raise ValueError(f"expected a {scenario} scan, got {spec.scenario}")
    for s in spec.setups():
        check_regime(s, scenario)


def run_franson(spec: ScanSpec, n_jobs: int = 1) -> ScanResult:
    _require(spec, "franson")
    pair = spec.fixed.pair()

    def row(s: Setup):
        table = franson_table(pair if s.grid() == pair.grid else s.pair(), s.mz_a(), s.mz_b())
        table.meta["analytic_phase"] = 2 * s.omega * s.delay + s.alpha + s.beta
        return table

    return _result(spec, _map(row, spec.setups(), n_jobs), _periodic(spec))


def _swap_row(pair, s: Setup, detector: str) -> CoincidenceTable:
    e1 = DetectionEvent("c", s.t_click)
    e2 = DetectionEvent(detector, s.t_click + s.delta_small_t)
    table = swapped_fringe_probabilities(pair, pair, s.mz_a(), s.mz_b(), e1, e2)
    table.meta["analytic_phase"] = s.alpha - s.beta
    return table


def run_swap(spec: ScanSpec, n_jobs: int = 1) -> tuple[ScanResult, ScanResult]:
    """Scan both postselection classes: clicks on one detector (``c, c``)
    and on different detectors (``c, c'``)."""
    _require(spec, "swap")
    pair = spec.fixed.pair()
    setups = spec.setups()
    same = _map(lambda s: _swap_row(pair, s, "c"), setups, n_jobs)
    diff = _map(lambda s: _swap_row(pair, s, "c'"), setups, n_jobs)
    return _result(spec, same, _periodic(spec)), _result(spec, diff, _periodic(spec))


def hom_table(four, setup: Setup) -> CoincidenceTable:
    """Detector-pattern probabilities for clicks at ``t_click`` and
    ``t_click + delta_small_t``; ports index detectors ``c, c'``."""
    t1 = setup.t_click
    t2 = t1 + setup.delta_small_t
    entries = {(i, j, b): 0.0 for i in (0, 1) for j in (0, 1) for b in BINS}
    for i, d1 in enumerate(DETECTORS):
        for j, d2 in enumerate(DETECTORS):
            w = postselection_weight(four, DetectionEvent(d1, t1), DetectionEvent(d2, t2))
            entries[(i, j, "zero")] = w / 2.0
    table = CoincidenceTable(entries, 0.0)
    table.meta["cross"] = entries[(0, 1, "zero")] + entries[(1, 0, "zero")]
    return table


def run_hom(spec: ScanSpec, n_jobs: int = 1) -> ScanResult:
    """Sweep the click separation.  The default fringe entry is the
    cross-detector pattern ``(c, c')``, so the scan visibility is the dip
    visibility."""
    _require(spec, "hom")
    pair = spec.fixed.pair()
    four = beam_split(pair, pair)
    rows = _map(lambda s: hom_table(four, s), spec.setups(), n_jobs)
    return _result(spec, rows, periodic=False)


def run_mismatch(spec: ScanSpec, n_phase: int = 16, n_jobs: int = 1) -> ScanResult:
    """Sweep the click separation around the arm imbalance; each row carries
    the swapped-fringe visibility from an inner scan of ``alpha - beta``
    over ``n_phase`` points."""
    _require(spec, "mismatch")
    pair = spec.fixed.pair()
    phases = 2 * math.pi * np.arange(n_phase) / n_phase

    def row(s: Setup):
        inner = [_swap_row(pair, s.with_value("phase_diff", p), "c") for p in phases]
        table = _swap_row(pair, s, "c")
        table.visibility = fringe_visibility(phases, inner, spec.entry)
        table.meta["mismatch_over_tau"] = (abs(s.delta_small_t) - s.delay) / s.tau
        return table

    return _result(spec, _map(row, spec.setups(), n_jobs), periodic=False)


def run(spec: ScanSpec, n_jobs: int = 1):
    """Dispatch on ``spec.scenario``; swap scans return a (same, different) pair."""
    return {
        "franson": run_franson,
        "swap": run_swap,
        "hom": run_hom,
        "mismatch": run_mismatch,
    }[spec.scenario](spec, n_jobs=n_jobs)


def oracle_setup() -> Setup:
    """Downscaled instance small enough for the dense reference path."""
    return Setup(omega=40.0, bandwidth=1.0, t_short=1.0, t_long=11.0, delta_small_t=10.0,
                 grid_points=512, time_step=0.125, t_click=-16.0)


def oracle_check(setup: Setup | None = None, phases: Sequence[float] = (0.0, 0.9, 2.3, math.pi)) -> dict:
    """Largest absolute difference between fast-path and dense-oracle binned
    probabilities, per scenario."""
    setup = setup or oracle_setup()
    pair = setup.pair()
    four = beam_split(pair, pair)
    cases = {
        "franson": None,
        "swap_same": ("c", setup.delta_small_t),
        "swap_different": ("c'", setup.delta_small_t),
        "mismatch": ("c", setup.delta_small_t + 3.0 * setup.tau),
    }
    out = {}
    for name, case in cases.items():
        worst = 0.0
        for p in phases:
            s = dataclasses.replace(setup, alpha=p, beta=0.4)
            if case is None:
                check_regime(s, "franson")
                fast = franson_table(pair, s.mz_a(), s.mz_b())
                ref = oracle.brute_franson_table(pair, s.mz_a(), s.mz_b(), BIN_HALF_WIDTH)
            else:
                detector, dts = case
                s = dataclasses.replace(s, delta_small_t=dts)
                check_regime(s, "swap")
                fast = _swap_row(pair, s, detector)
                e1 = DetectionEvent("c", s.t_click)
                e2 = DetectionEvent(detector, s.t_click + dts)
                ref, _ = oracle.brute_swap_table(four, s.mz_a(), s.mz_b(), e1, e2, BIN_HALF_WIDTH)
            worst = max(worst, max(abs(fast[k] - ref[k]) for k in ref))
        out[name] = worst
    return out
