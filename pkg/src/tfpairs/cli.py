"""Command-line front end: ``sim evolve|spectrum|schmidt|sweep|benchmark``.

Configs are INI files with sections ``[system]``, ``[grid]``, ``[run]``,
``[sweep]`` and ``[benchmark]``; every frequency is in MHz and every time in
µs. A ``manifest.json`` written by an earlier run is also accepted as a
config. Exit codes: 0 ok, 2 bad config or usage, 3 numerical failure,
4 completion never reached.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import hashlib
import itertools
import json
import logging
import math
import os
import platform
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib import metadata
from pathlib import Path

import numpy as np
import scipy

from . import benchmark2le, observables, schmidt
from .dynamics import FrequencyGrid, evolve_field, grid_covering
from .errors import (
    ConfigError,
    ConvergenceError,
    SimulationError,
)
from .params import TWO_PI, SystemConfig, effective_params

log = logging.getLogger("tfpairs")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_CONVERGENCE = 0, 2, 3, 4
MANIFEST_NAME = "manifest.json"
BENCHMARK_TOL = 1e-6
RANK_ONE_TOL = 1e-6

SYSTEM_KEYS = {
    "g1a_mhz": "g_1a",
    "g1b_mhz": "g_1b",
    "g2b_mhz": "g_2b",
    "kappa_a_mhz": "kappa_a",
    "kappa_b_mhz": "kappa_b",
    "omega_a_mhz": "omega_a",
    "omega_b_mhz": "omega_b",
    "omega1_ge_mhz": "omega1_ge",
    "omega1_ef_mhz": "omega1_ef",
    "omega2_ge_mhz": "omega2_ge",
    "omega2_ef_mhz": "omega2_ef",
}
SYSTEM_EXTRA = {"kappa_mhz", "anharmonicity_mhz", "allow_detuning"}
GRID_DEFAULTS = {"points": "201", "width_factor": "8", "auto_refine": "true",
                 "max_points": "1601"}
RUN_DEFAULTS = {
    "times_us": "0, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.75, 1.0",
    "t_us": "0.5",
    "t_step_us": "0.05",
    "t_max_us": "20",
    "schmidt_points": "100",
    "theta": "0.99",
    "time_domain": "false",
    "time_points": "",
}
SWEEP_KEYS = ("g1a_mhz", "g1b_mhz", "g2b_mhz", "kappa_mhz", "kappa_a_mhz", "kappa_b_mhz")
BENCHMARK_DEFAULTS = {
    "g2_mhz": "10",
    "kappa_mhz": "2",
    "ratios": "0, 0.5, 1, 2, 4, 5",
    "t_max_us": "3",
    "t_points": "61",
}

_G1B_RANGE = ", ".join(f"{v:g}" for v in np.arange(0.0, 50.01, 5.0))
FULL_PRESETS = {
    "coupling-kappa": {
        "g1a_mhz": "5, 7, 10, 15, 20, 30",
        "kappa_mhz": "10, 15, 20, 25, 30, 40, 50",
        "g1b_mhz": _G1B_RANGE,
    },
    "split-kappa": {
        "g1a_mhz": "5, 10, 20",
        "kappa_a_mhz": "10, 25, 50",
        "kappa_b_mhz": "10, 15, 20, 25, 30, 40, 50",
        "g1b_mhz": _G1B_RANGE,
    },
}


# ------------------------------------------------------------------ config

def _parse_bool(raw: str, key: str) -> bool:
    value = raw.strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {raw!r}")


def _parse_float(raw: str, key: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {raw!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"{key}: must be finite")
    return value


def _parse_int(raw: str, key: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {raw!r}") from None


def _parse_list(raw: str, key: str) -> list[float]:
    parts = [p for p in raw.replace(",", " ").split() if p]
    return [_parse_float(p, key) for p in parts]


@dataclass
class RunConfig:
    """Resolved settings plus the flat string echo they came from."""

    sections: dict
    system: SystemConfig = field(init=False)
    allow_detuning: bool = field(init=False)

    def __post_init__(self):
        self.system, self.allow_detuning = _system_from(self.sections["system"])
        # touch every typed accessor so bad values fail before any work starts
        for name in ("grid_points", "width_factor", "auto_refine", "max_points", "times",
                     "t", "t_step", "t_max", "schmidt_points", "theta", "time_domain",
                     "time_points"):
            getattr(self, name)
        self.sweep_axes()

    def get(self, section: str, key: str) -> str:
        return self.sections[section][key]

    @property
    def grid_points(self) -> int:
        return _parse_int(self.get("grid", "points"), "grid.points")

    @property
    def width_factor(self) -> float:
        return _parse_float(self.get("grid", "width_factor"), "grid.width_factor")

    @property
    def auto_refine(self) -> bool:
        return _parse_bool(self.get("grid", "auto_refine"), "grid.auto_refine")

    @property
    def max_points(self) -> int:
        return _parse_int(self.get("grid", "max_points"), "grid.max_points")

    @property
    def times(self) -> list[float]:
        return _parse_list(self.get("run", "times_us"), "run.times_us")

    @property
    def t(self) -> float:
        return _parse_float(self.get("run", "t_us"), "run.t_us")

    @property
    def t_step(self) -> float:
        return _parse_float(self.get("run", "t_step_us"), "run.t_step_us")

    @property
    def t_max(self) -> float:
        return _parse_float(self.get("run", "t_max_us"), "run.t_max_us")

    @property
    def schmidt_points(self) -> int:
        return _parse_int(self.get("run", "schmidt_points"), "run.schmidt_points")

    @property
    def theta(self) -> float:
        return _parse_float(self.get("run", "theta"), "run.theta")

    @property
    def time_domain(self) -> bool:
        return _parse_bool(self.get("run", "time_domain"), "run.time_domain")

    @property
    def time_points(self) -> int | None:
        raw = self.get("run", "time_points").strip()
        return _parse_int(raw, "run.time_points") if raw else None

    def sweep_axes(self) -> list[tuple[str, list[float]]]:
        axes = []
        for key, raw in self.sections["sweep"].items():
            values = sorted(set(_parse_list(raw, f"sweep.{key}")))
            if not values:
                raise ConfigError(f"sweep.{key} lists no values")
            axes.append((key, values))
        return axes

    def digest(self) -> str:
        blob = json.dumps(self.sections, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def _system_from(sec: dict) -> tuple[SystemConfig, bool]:
    values = {k: _parse_float(v, f"system.{k}") for k, v in sec.items()
              if k != "allow_detuning"}
    allow = _parse_bool(sec.get("allow_detuning", "false"), "system.allow_detuning")
    kappa = values.pop("kappa_mhz", None)
    anharm = values.pop("anharmonicity_mhz", 400.0)
    kw = {
        "g_1a": values.get("g1a_mhz", 5.0),
        "g_1b": values.get("g1b_mhz", 25.0),
        "g_2b": values.get("g2b_mhz", 10.0),
        "kappa_a": values.get("kappa_a_mhz", 25.0 if kappa is None else kappa),
        "kappa_b": values.get("kappa_b_mhz", 25.0 if kappa is None else kappa),
        "anharmonicity": anharm,
        "omega_b": values.get("omega_b_mhz", 0.0),
    }
    cfg = SystemConfig.resonant(**kw)
    overrides = {SYSTEM_KEYS[k]: v for k, v in values.items()
                 if k.startswith("omega") and k != "omega_b_mhz"}
    if overrides:
        cfg = cfg.replace(**overrides)
    return cfg, allow


def _normalize_sections(raw: dict) -> dict:
    known = {
        "system": set(SYSTEM_KEYS) | SYSTEM_EXTRA,
        "grid": set(GRID_DEFAULTS),
        "run": set(RUN_DEFAULTS),
        "sweep": set(SWEEP_KEYS),
        "benchmark": set(BENCHMARK_DEFAULTS),
    }
    for name, sec in raw.items():
        if name not in known:
            raise ConfigError(f"unknown config section [{name}]")
        for key in sec:
            if key not in known[name]:
                raise ConfigError(f"unknown key {name}.{key}")
    return {
        "system": dict(raw.get("system", {})),
        "grid": {**GRID_DEFAULTS, **raw.get("grid", {})},
        "run": {**RUN_DEFAULTS, **raw.get("run", {})},
        "sweep": dict(raw.get("sweep", {})),
        "benchmark": {**BENCHMARK_DEFAULTS, **raw.get("benchmark", {})},
    }


def load_config(path: str | os.PathLike | None) -> RunConfig:
    if path is None:
        return RunConfig(_normalize_sections({}))
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file {path} not found")
    if path.suffix == ".json":
        try:
            data = json.loads(path.read_text(encoding="utf-8"))["config"]
        except (ValueError, KeyError) as exc:
            raise ConfigError(f"{path} is not a run manifest: {exc}") from None
        raw = {s: {k: str(v) for k, v in sec.items()} for s, sec in data.items()}
        return RunConfig(_normalize_sections(raw))
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read(path, encoding="utf-8")
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from None
    raw = {s: dict(parser.items(s)) for s in parser.sections()}
    return RunConfig(_normalize_sections(raw))


# ------------------------------------------------------------------ output

def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.12e" % float(value)
    return str(value)


class OutputWriter:
    """Single funnel for every file a run produces."""

    def __init__(self, out_dir: Path, cfg: RunConfig, command: str):
        self.out_dir = out_dir
        self.cfg = cfg
        self.command = command
        self.files: list[str] = []
        self.notes: list[str] = []
        self.extra: dict = {}
        self.started = time.time()
        out_dir.mkdir(parents=True, exist_ok=True)

    def csv(self, name: str, header, rows) -> Path:
        path = self.out_dir / name
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(f"# manifest={MANIFEST_NAME} config_sha256={self.cfg.digest()}\n")
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_fmt(v) for v in row])
        self.files.append(name)
        return path

    def manifest(self, ep=None, grid: FrequencyGrid | None = None) -> Path:
        doc = {
            "command": self.command,
            "config": self.cfg.sections,
            "config_sha256": self.cfg.digest(),
            "system_mhz": self.cfg.system.as_dict(),
            "effective_params_mhz": ep.to_mhz() if ep is not None else None,
            "grid": grid.metadata() if grid is not None else None,
            "outputs": self.files,
            "notes": self.notes,
            **self.extra,
            "created_utc": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "wall_seconds": round(time.time() - self.started, 3),
            "versions": {
                "tfpairs": _version(),
                "numpy": np.__version__,
                "scipy": scipy.__version__,
                "python": platform.python_version(),
            },
        }
        path = self.out_dir / MANIFEST_NAME
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return path


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "unknown"


def _workers() -> int:
    raw = os.environ.get("SIM_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError(f"SIM_THREADS must be an integer, got {raw!r}") from None


def _map(func, items: list) -> list:
    """Ordered map, fanned out over SIM_THREADS worker processes."""
    n = min(_workers(), len(items))
    if n <= 1:
        return [func(item) for item in items]
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(func, items))


# ---------------------------------------------------------------- commands

def _base_grid(cfg: RunConfig, ep) -> FrequencyGrid:
    grid = FrequencyGrid.for_params(ep, cfg.grid_points, cfg.width_factor)
    grid.check_width(ep)
    return grid


def _grid_for(cfg: RunConfig, grid: FrequencyGrid, t: float) -> FrequencyGrid:
    return grid_covering(grid, t, cfg.max_points) if cfg.auto_refine else grid


def _evolve_one(job):
    system, allow, grid, t = job
    ep = effective_params(system, allow_detuning=allow)
    fld = evolve_field(ep, grid, t)
    return observables.populations(fld), grid.points


def cmd_evolve(cfg: RunConfig, args, out: OutputWriter) -> int:
    times = list(args.times) if args.times is not None else cfg.times
    if not times:
        raise ConfigError("no evolution times given")
    if any(t < 0 for t in times):
        raise ConfigError("evolution times must be non-negative")
    if times != sorted(times):
        out.notes.append("requested times were sorted ascending")
    times = sorted(times)
    ep = effective_params(cfg.system, allow_detuning=cfg.allow_detuning)
    grid = _base_grid(cfg, ep)
    jobs = [(cfg.system, cfg.allow_detuning, _grid_for(cfg, grid, t), t) for t in times]
    results = _map(_evolve_one, jobs)
    out.csv("populations.csv", observables.ObservableRecord.COLUMNS + ("grid_points",),
            [rec.as_row() + (m,) for rec, m in results])
    out.extra["times_us"] = times
    out.manifest(ep, grid)
    return EXIT_OK


def cmd_spectrum(cfg: RunConfig, args, out: OutputWriter) -> int:
    t = args.t if args.t is not None else cfg.t
    if t < 0:
        raise ConfigError("spectrum time must be non-negative")
    ep = effective_params(cfg.system, allow_detuning=cfg.allow_detuning)
    grid = _grid_for(cfg, _base_grid(cfg, ep), t)
    fld = evolve_field(ep, grid, t)
    spec = observables.joint_spectrum(fld)
    to_mhz = 1.0 / TWO_PI
    nu, nu_p = grid.nu * to_mhz, grid.nu_prime * to_mhz
    # density per MHz² so that the double sum over MHz axes gives p_ab
    dens = spec.density * TWO_PI ** 2
    m = grid.points
    out.csv("joint_spectrum.csv", ("nu_mhz", "nu_prime_mhz", "S"),
            ((nu[i], nu_p[j], dens[i, j]) for i in range(m) for j in range(m)))

    p_ab = observables.pair_probability(spec)
    residual = observables.rank_one_residual(fld.phi)
    summary = {
        "t": t,
        "p_ab": p_ab,
        "norm": observables.norm(fld),
        "sum_frequency_variance_mhz2": (observables.sum_frequency_variance(spec)
                                        if p_ab > 0 else float("nan")) * to_mhz ** 2,
        "rank_one_residual": residual,
        "rank_one": residual <= RANK_ONE_TOL,
        "delay_mean_us": float("nan"),
        "delay_ridge_us": float("nan"),
        "mass_beta_later": float("nan"),
        "mass_beta_earlier": float("nan"),
    }
    if (args.time_domain or cfg.time_domain) and t > 0:
        td = observables.time_domain(fld, points=cfg.time_points)
        k = td.tau.size
        out.csv("time_domain.csv", ("tau_us", "tau_prime_us", "A"),
                ((td.tau[i], td.tau_prime[j], td.density[i, j])
                 for i in range(k) for j in range(k)))
        later, earlier = observables.ordering_masses(td)
        summary.update(
            delay_mean_us=observables.emission_delay(td),
            delay_ridge_us=observables.ridge_delay(td),
            mass_beta_later=later,
            mass_beta_earlier=earlier,
        )
    out.csv("spectrum_summary.csv", tuple(summary), [tuple(summary.values())])
    out.manifest(ep, grid)
    return EXIT_OK


def _schmidt_point(job) -> dict:
    system, allow, points, width, max_points, t_step, t_max, theta, n = job
    ep = effective_params(system, allow_detuning=allow)
    grid = FrequencyGrid.for_params(ep, points, width)
    grid.check_width(ep)
    fld = schmidt.final_state(ep, grid, t_step, t_max=t_max, max_points=max_points)
    dom = schmidt.select_domain(fld, theta, n)
    res = schmidt.decompose_amplitude(dom.phi, dom.spacing)
    return {
        "t_final_us": fld.t,
        "delta_omega_mhz": dom.half_width / TWO_PI,
        "normalization": res.normalization,
        "captured_fraction": dom.fraction,
        "S_ent": res.entropy,
        "grid_points": fld.grid.points,
        "coefficients": res.coefficients,
    }


def _schmidt_job(cfg: RunConfig, system: SystemConfig):
    return (system, cfg.allow_detuning, cfg.grid_points, cfg.width_factor, cfg.max_points,
            cfg.t_step, cfg.t_max, cfg.theta, cfg.schmidt_points)


def cmd_schmidt(cfg: RunConfig, args, out: OutputWriter) -> int:
    ep = effective_params(cfg.system, allow_detuning=cfg.allow_detuning)
    grid = _base_grid(cfg, ep)
    row = _schmidt_point(_schmidt_job(cfg, cfg.system))
    lam = row.pop("coefficients")
    out.csv("schmidt.csv", ("j", "lambda"), ((j, v) for j, v in enumerate(lam)))
    out.csv("summary.csv",
            ("t_final_us", "delta_omega_mhz", "normalization", "S_ent",
             "captured_fraction", "theta", "N", "grid_points"),
            [(row["t_final_us"], row["delta_omega_mhz"], row["normalization"], row["S_ent"],
              row["captured_fraction"], cfg.theta, cfg.schmidt_points, row["grid_points"])])
    out.manifest(ep, grid)
    return EXIT_OK


_SWEEP_FIELDS = {
    "g1a_mhz": "g_1a",
    "g1b_mhz": "g_1b",
    "g2b_mhz": "g_2b",
    "kappa_a_mhz": "kappa_a",
    "kappa_b_mhz": "kappa_b",
}


def _apply_point(system: SystemConfig, point: dict) -> SystemConfig:
    changes = {}
    for key, value in point.items():
        if key == "kappa_mhz":
            changes.update(kappa_a=value, kappa_b=value)
        else:
            changes[_SWEEP_FIELDS[key]] = value
    return system.replace(**changes)


def _safe_schmidt_point(job):
    try:
        return _schmidt_point(job), None
    except SimulationError as exc:
        return None, exc


def cmd_sweep(cfg: RunConfig, args, out: OutputWriter) -> int:
    if args.full:
        cfg = RunConfig({**cfg.sections, "sweep": dict(FULL_PRESETS[args.full])})
        out.cfg = cfg
        out.notes.append(f"full preset {args.full}")
    axes = cfg.sweep_axes()
    names = [k for k, _ in axes]
    points = [dict(zip(names, combo)) for combo in itertools.product(*(v for _, v in axes))]
    points.sort(key=lambda p: tuple(p[k] for k in names))
    if not points:
        points = [{}]
    jobs = [_schmidt_job(cfg, _apply_point(cfg.system, p)) for p in points]
    results = _map(_safe_schmidt_point, jobs)

    group_keys = [k for k in names if k != "g1b_mhz"]
    best: dict = {}
    for p, (row, _) in zip(points, results):
        if row is not None:
            key = tuple(p[k] for k in group_keys)
            best[key] = max(best.get(key, -math.inf), row["S_ent"])

    failures = []
    rows = []
    nan = float("nan")
    for p, (row, exc) in zip(points, results):
        key = tuple(p[k] for k in group_keys)
        coords = tuple(p[k] for k in names)
        smax = best.get(key, nan)
        if row is None:
            failures.append(exc)
            rows.append(coords + (nan,) * 6 + (smax, "failed", f"{type(exc).__name__}: {exc}"))
        else:
            rows.append(coords + (row["t_final_us"], row["delta_omega_mhz"],
                                  row["normalization"], row["captured_fraction"],
                                  row["S_ent"], row["grid_points"], smax, "ok", ""))
    out.csv("sweep.csv", tuple(names) + ("t_final_us", "delta_omega_mhz", "normalization",
                                         "captured_fraction", "S_ent", "grid_points",
                                         "S_ent_max", "status", "error"), rows)
    out.extra["sweep_points"] = len(points)
    out.extra["sweep_failures"] = len(failures)
    ep = effective_params(cfg.system, allow_detuning=cfg.allow_detuning)
    out.manifest(ep, _base_grid(cfg, ep))
    if failures:
        log.warning("%d of %d sweep points failed", len(failures), len(points))
        if args.strict:
            return _exit_code(failures[0])
    return EXIT_OK


def cmd_benchmark(cfg: RunConfig, args, out: OutputWriter) -> int:
    sec = cfg.sections["benchmark"]
    g2 = _parse_float(sec["g2_mhz"], "benchmark.g2_mhz")
    kappa = _parse_float(sec["kappa_mhz"], "benchmark.kappa_mhz")
    ratios = _parse_list(sec["ratios"], "benchmark.ratios")
    t_end = _parse_float(sec["t_max_us"], "benchmark.t_max_us")
    n_t = _parse_int(sec["t_points"], "benchmark.t_points")
    if n_t < 2 or t_end <= 0 or not ratios:
        raise ConfigError("benchmark needs t_points >= 2, t_max_us > 0 and some ratios")
    times = np.linspace(0.0, t_end, n_t)
    rows, summary = [], []
    worst = 0.0
    for k in (kappa, 0.0):
        for r in ratios:
            bc = benchmark2le.TwoEmitterConfig(g1=r * g2, g2=g2, kappa=k)
            exact = benchmark2le.analytic_waveguide_population(bc, times)
            ode = benchmark2le.ode_waveguide_population(bc, times)
            diff = np.abs(exact - ode)
            worst = max(worst, float(diff.max()))
            rows.extend((r, k, t, a, b, d) for t, a, b, d in zip(times, exact, ode, diff))
            late = (benchmark2le.analytic_waveguide_population(bc, 50.0 / (TWO_PI * k))
                    if k > 0 else 0.0)
            summary.append((r, k, bc.trapped_limit(), late, float(diff.max())))
    out.csv("benchmark_2le.csv",
            ("g1_over_g2", "kappa_mhz", "t", "P_w_analytic", "P_w_ode", "abs_diff"), rows)
    out.csv("benchmark_summary.csv",
            ("g1_over_g2", "kappa_mhz", "P_w_limit", "P_w_at_50_over_kappa", "max_abs_diff"),
            summary)
    out.extra["max_abs_diff"] = worst
    out.manifest()
    log.info("benchmark max |analytic - ode| = %.3e", worst)
    if worst > BENCHMARK_TOL:
        log.error("closed form and integration disagree by %.3e", worst)
        return EXIT_NUMERIC
    return EXIT_OK


COMMANDS = {
    "evolve": cmd_evolve,
    "spectrum": cmd_spectrum,
    "schmidt": cmd_schmidt,
    "sweep": cmd_sweep,
    "benchmark": cmd_benchmark,
}


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, ConfigError):
        return EXIT_CONFIG
    if isinstance(exc, ConvergenceError):
        return EXIT_CONVERGENCE
    return EXIT_NUMERIC


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sim", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", help="INI config or an earlier manifest.json")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--times", type=float, nargs="*", help="evolution times in us")
    parser.add_argument("--t", type=float, help="snapshot time in us (spectrum)")
    parser.add_argument("--time-domain", action="store_true",
                        help="also write the joint temporal density (spectrum)")
    parser.add_argument("--strict", action="store_true",
                        help="fail the sweep if any point fails")
    parser.add_argument("--full", choices=sorted(FULL_PRESETS),
                        help="run a large preset sweep grid (slow)")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
    )
    if args.full and args.command != "sweep":
        parser.error("--full applies to the sweep command only")
    try:
        cfg = load_config(args.config)
        writer = OutputWriter(Path(args.out), cfg, args.command)
        return COMMANDS[args.command](cfg, args, writer)
    except SimulationError as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        return _exit_code(exc)
    except (ValueError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
