"""Command-line front end.

Three subcommands, all emitting deterministic CSV (12 significant digits):

* ``evolve``   -- coefficient and measure trajectory on a time grid
* ``sweep``    -- end time as a function of switch time, plus located features
* ``critical`` -- the critical times of a scenario in one small table

A scenario lives in a JSON config (see ``ScenarioConfig``); every flag
overrides its config field.  Times in the config and flags are dimensionless
(tau = gamma * t) unless ``time_unit`` is ``"physical"``; output time columns
named ``tau`` are always dimensionless, and ``critical`` also reports
physical times t = tau / gamma.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field, fields

import numpy as np

from .channel import evolve_xstate_closed  # noqa: F401  (re-exported for scripts)
from .deathclock import (
    DEFAULT_TOL,
    Fate,
    NoCrossingError,
    BracketError,
    find_ad_crossing,
    find_aversion_threshold,
    find_end_time,
    state_at,
    sweep_switch_times,
)
from .intervention import Schedule, Switch, SwitchEvent
from .qstate import (
    XState,
    concurrence,
    negativity_xstate,
    to_density_matrix,
    von_neumann_entropy,
)

_SWITCH_CHOICES = ("both", "alice", "bob", "none")


def _fmt(x: float) -> str:
    return f"{x:.11e}"


@dataclass
class GridSpec:
    """Evenly spaced grid; ``count`` points from ``start`` to ``stop``."""

    start: float
    stop: float
    count: int

    def __post_init__(self) -> None:
        if not (math.isfinite(self.start) and self.start >= 0.0):
            raise ValueError(
                f"config field 'grid.start': must be finite and >= 0, got {self.start!r}"
            )
        if not math.isfinite(self.stop) or self.stop < self.start:
            raise ValueError(
                f"config field 'grid.stop': must be >= grid.start, got {self.stop!r}"
            )
        if not (isinstance(self.count, int) and self.count >= 1):
            raise ValueError(
                f"config field 'grid.count': must be an integer >= 1, got {self.count!r}"
            )
        if self.count > 1 and self.stop == self.start:
            raise ValueError(
                "config field 'grid.stop': must exceed grid.start for count > 1"
            )

    def points(self) -> list[float]:
        return np.linspace(self.start, self.stop, self.count).tolist()


@dataclass
class ScenarioConfig:
    """One scenario: initial X state, decay rate, switches, grid, tolerance.

    ``switch`` + ``t_sw`` describe the common single-switch case; an explicit
    ``schedule`` (list of ``{"time": ..., "switch": ...}``) covers multi-switch
    runs and excludes the single-switch fields.  ``grid`` defaults per
    subcommand (evolve: 121 points on [0, 1.2]; sweep: 400 switch times below
    the unswitched end time).
    """

    a: float = 1.0
    b: float = 1.0
    c: float = 1.0
    d: float = 0.0
    z_inner: float = 1.0
    z_corner: float = 0.0
    gamma: float = 1.0
    time_unit: str = "tau"
    switch: str = "none"
    t_sw: float | None = None
    schedule: list[dict] = field(default_factory=list)
    grid: GridSpec | None = None
    tol: float = DEFAULT_TOL

    def __post_init__(self) -> None:
        for name in ("a", "b", "c", "d", "z_inner", "z_corner", "gamma", "tol"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ValueError(f"config field '{name}': must be a finite number")
        if self.gamma <= 0.0:
            raise ValueError(f"config field 'gamma': must be positive, got {self.gamma!r}")
        if self.tol <= 0.0:
            raise ValueError(f"config field 'tol': must be positive, got {self.tol!r}")
        if self.time_unit not in ("tau", "physical"):
            raise ValueError(
                f"config field 'time_unit': must be 'tau' or 'physical', got {self.time_unit!r}"
            )
        if self.switch not in _SWITCH_CHOICES:
            raise ValueError(
                f"config field 'switch': must be one of {_SWITCH_CHOICES}, got {self.switch!r}"
            )
        if self.t_sw is not None:
            if not (isinstance(self.t_sw, (int, float)) and math.isfinite(self.t_sw)
                    and self.t_sw >= 0.0):
                raise ValueError(
                    f"config field 't_sw': must be a finite number >= 0, got {self.t_sw!r}"
                )
        if self.schedule and self.switch != "none":
            raise ValueError(
                "config field 'schedule': excludes 'switch'; use one or the other"
            )
        if self.t_sw is not None and self.switch == "none":
            raise ValueError("config field 't_sw': set without a 'switch' kind")
        for i, entry in enumerate(self.schedule):
            if not isinstance(entry, dict) or set(entry) != {"time", "switch"}:
                raise ValueError(
                    f"config field 'schedule[{i}]': must be {{'time', 'switch'}}"
                )
            if entry["switch"] not in ("both", "alice", "bob"):
                raise ValueError(
                    f"config field 'schedule[{i}].switch': got {entry['switch']!r}"
                )
            t = entry["time"]
            if not (isinstance(t, (int, float)) and math.isfinite(t) and t >= 0.0):
                raise ValueError(
                    f"config field 'schedule[{i}].time': must be finite and >= 0"
                )

    # -- conversions ------------------------------------------------------

    def initial_state(self) -> XState:
        return XState(self.a, self.b, self.c, self.d, self.z_inner, self.z_corner)

    def to_tau(self, t: float) -> float:
        return t * self.gamma if self.time_unit == "physical" else t

    def resolved_schedule(self) -> Schedule:
        if self.switch != "none":
            if self.t_sw is None:
                raise ValueError("config field 't_sw': required when 'switch' is set")
            entries = [(self.t_sw, self.switch)]
        else:
            entries = [(e["time"], e["switch"]) for e in self.schedule]
        events = tuple(
            SwitchEvent(self.to_tau(t), Switch(kind)) for t, kind in entries
        )
        return Schedule(events)


def config_to_dict(cfg: ScenarioConfig) -> dict:
    out: dict = {}
    for f in fields(cfg):
        value = getattr(cfg, f.name)
        if f.name == "grid":
            value = (
                None
                if value is None
                else {"start": value.start, "stop": value.stop, "count": value.count}
            )
        out[f.name] = value
    return out


def config_from_dict(data: dict) -> ScenarioConfig:
    if not isinstance(data, dict):
        raise ValueError("config must be a JSON object")
    known = {f.name for f in fields(ScenarioConfig)}
    for key in data:
        if key not in known:
            raise ValueError(f"config field {key!r}: unknown field")
    kwargs = dict(data)
    if "grid" in kwargs and kwargs["grid"] is not None:
        g = kwargs["grid"]
        if not isinstance(g, dict) or set(g) != {"start", "stop", "count"}:
            raise ValueError("config field 'grid': must be {'start', 'stop', 'count'}")
        kwargs["grid"] = GridSpec(g["start"], g["stop"], g["count"])
    return ScenarioConfig(**kwargs)


def _load_config(path: str | None) -> ScenarioConfig:
    if path is None:
        return ScenarioConfig()
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ValueError(f"config file {path!r}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"config file {path!r}: invalid JSON ({exc})") from exc
    return config_from_dict(data)


def _apply_overrides(cfg: ScenarioConfig, args: argparse.Namespace) -> ScenarioConfig:
    data = config_to_dict(cfg)
    if args.switch is not None:
        data["switch"] = args.switch
        data["schedule"] = []
        if args.switch == "none":
            data["t_sw"] = None
    if args.t_sw is not None:
        data["t_sw"] = args.t_sw
    if args.gamma is not None:
        data["gamma"] = args.gamma
    if args.tol is not None:
        data["tol"] = args.tol
    if args.grid is not None:
        data["grid"] = {
            "start": args.grid[0],
            "stop": args.grid[1],
            "count": args.grid[2],
        }
    return config_from_dict(data)


def _parse_grid(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"grid must look like START:STOP:COUNT, got {text!r}"
        )
    try:
        return float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}: {exc}") from exc


def _emit(lines: list[str], out_path: str | None) -> None:
    text = "\n".join(lines) + "\n"
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


# -- subcommands ----------------------------------------------------------


def cmd_evolve(cfg: ScenarioConfig, out_path: str | None) -> int:
    state = cfg.initial_state()
    schedule = cfg.resolved_schedule()
    grid = cfg.grid if cfg.grid is not None else GridSpec(0.0, 1.2, 121)
    lines = ["tau,a,b,c,d,z_inner,z_corner,negativity,concurrence,entropy"]
    for point in grid.points():
        tau = cfg.to_tau(point)
        s = state_at(state, schedule, tau)
        m = to_density_matrix(s)
        row = (
            tau, s.a, s.b, s.c, s.d, s.z_inner, s.z_corner,
            negativity_xstate(s), concurrence(m), von_neumann_entropy(m),
        )
        lines.append(",".join(_fmt(v) for v in row))
    _emit(lines, out_path)
    return 0


def cmd_sweep(cfg: ScenarioConfig, out_path: str | None) -> int:
    if cfg.switch == "none":
        raise ValueError("config field 'switch': sweep needs 'both', 'alice' or 'bob'")
    state = cfg.initial_state()
    kind = Switch(cfg.switch)
    if cfg.grid is None:
        taus = None
    else:
        if cfg.grid.count < 2:
            raise ValueError(
                f"config field 'grid.count': sweeps need >= 2 points, got {cfg.grid.count}"
            )
        taus = [cfg.to_tau(t) for t in cfg.grid.points()]
    curve = sweep_switch_times(state, kind, taus, cfg.tol)
    lines = ["tau_sw,fate,tau_end"]
    for row in curve.rows:
        end = _fmt(row.tau_end) if row.fate is Fate.FINITE_END else ""
        lines.append(f"{_fmt(row.tau_sw)},{int(row.fate)},{end}")
    if curve.baseline_end is not None:
        lines.append(f"# baseline_end = {_fmt(curve.baseline_end)}")
    if curve.ad_crossing is not None:
        lines.append(f"# ad_crossing = {_fmt(curve.ad_crossing)}")
    if curve.aversion_threshold is not None:
        lines.append(f"# aversion_threshold = {_fmt(curve.aversion_threshold)}")
    if curve.min_tau_sw is not None:
        lines.append(
            f"# min_end: tau_sw = {_fmt(curve.min_tau_sw)}, "
            f"tau_end = {_fmt(curve.min_tau_end)}"
        )
    if curve.curve_max_dev is not None:
        lines.append(f"# curve_max_abs_dev = {_fmt(curve.curve_max_dev)}")
    _emit(lines, out_path)
    return 0


def cmd_critical(cfg: ScenarioConfig, out_path: str | None) -> int:
    state = cfg.initial_state()
    kind = Switch(cfg.switch) if cfg.switch != "none" else Switch.BOTH
    lines = ["quantity,status,tau,time"]

    def row(name: str, status: str, tau: float | None) -> str:
        if tau is None:
            return f"{name},{status},,"
        return f"{name},{status},{_fmt(tau)},{_fmt(tau / cfg.gamma)}"

    baseline = find_end_time(state, Schedule(), cfg.tol)
    status = {
        Fate.FINITE_END: "finite",
        Fate.AVERTED: "averted",
        Fate.NEVER_ENTANGLED: "never_entangled",
    }[baseline.fate]
    lines.append(row("baseline_end", status, baseline.tau_end))

    try:
        lines.append(row("ad_crossing", "found", find_ad_crossing(state)))
    except NoCrossingError:
        lines.append(row("ad_crossing", "undefined", None))

    try:
        threshold = find_aversion_threshold(state, kind, cfg.tol)
        lines.append(row(f"aversion_threshold_{kind.value}", "found", threshold))
    except (BracketError, NoCrossingError):
        lines.append(row(f"aversion_threshold_{kind.value}", "undefined", None))

    min_tau_sw = min_tau_end = None
    if baseline.fate is Fate.FINITE_END:
        curve = sweep_switch_times(state, kind, None, cfg.tol)
        min_tau_sw, min_tau_end = curve.min_tau_sw, curve.min_tau_end
    if min_tau_sw is None:
        lines.append(row(f"min_end_switch_time_{kind.value}", "undefined", None))
        lines.append(row(f"min_end_time_{kind.value}", "undefined", None))
    else:
        lines.append(row(f"min_end_switch_time_{kind.value}", "found", min_tau_sw))
        lines.append(row(f"min_end_time_{kind.value}", "found", min_tau_end))

    _emit(lines, out_path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="esdsim",
        description="Two decaying qubits: negativity trajectories, switch "
        "sweeps and critical times of entanglement sudden death.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("evolve", "trajectory of coefficients and measures on a time grid"),
        ("sweep", "end time versus switch time for one switch kind"),
        ("critical", "critical times of the scenario in one table"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", metavar="PATH", help="JSON scenario config")
        p.add_argument("--out", metavar="PATH", help="write CSV here instead of stdout")
        p.add_argument("--switch", choices=_SWITCH_CHOICES,
                       help="override the switch kind")
        p.add_argument("--t-sw", dest="t_sw", type=float, metavar="FLOAT",
                       help="override the switch time")
        p.add_argument("--grid", type=_parse_grid, metavar="START:STOP:COUNT",
                       help="override the grid")
        p.add_argument("--tol", type=float, metavar="FLOAT",
                       help="override the root-finding tolerance")
        p.add_argument("--gamma", type=float, metavar="FLOAT",
                       help="override the decay rate")
        p.add_argument("--dump-config", action="store_true",
                       help="print the effective config as JSON and exit")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _apply_overrides(_load_config(args.config), args)
        if args.dump_config:
            _emit([json.dumps(config_to_dict(cfg), indent=2)], args.out)
            return 0
        handler = {"evolve": cmd_evolve, "sweep": cmd_sweep, "critical": cmd_critical}
        return handler[args.command](cfg, args.out)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
