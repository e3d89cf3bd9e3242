"""Configuration, per-channel reports, sweeps and table output."""
from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from .bsm import (bsm_fidelity_and_error, bsm_herald_probability, bsm_heralding_efficiency,
                  bsm_kernels, bsm_purity)
from .errors import DegenerateInputError, ZalmError
from .grid import DEFAULT_K_SIGMA, DEFAULT_POINTS, TWO_PI
from .linkbudget import (PAIR_MODELS, EfficiencyBudget, channel_rate, guard_band_channels,
                         interference_ratio, total_rate, two_pair_probability)
from .memory import (MemoryParams, ModeConversionParams, cavity_efficiency,
                     class_fidelities, ideal_loading_fidelity, mode_convert_phi,
                     narrowband_fidelities)
from .metrics import phi_kernel
from .schmidt import DEFAULT_CUTOFF, decompose, purity_from_schmidt
from .source import Biphoton, ChannelPlan, SourceParams, channelize

UNDEFINED = "undefined"
DRIFT_TOL = 1e-3
# probabilities below this are tail mass; their relative drift is rounding noise
DRIFT_FLOOR = 1e-12
MEMORY_MODES = ("ideal", "narrowband", "broadband")

COLUMNS = (
    "n", "pr_I", "pr_S_given_I", "pr_SI", "purity_single", "pr_herald", "bsm_efficiency",
    "bsm_purity", "pr_c", "pr_e", "F_a", "F_b", "eta_cavity", "R_n", "chi_1", "chi_2", "chi_3",
)
DRIFT_COLUMNS = ("grid_drift", "grid_warning")
FOOTER_COLUMNS = ("R_total", "pr_two_pair")

PLOTDATA = {
    "fig6_heralding": ("pr_I",),
    "fig7_efficiency": ("pr_S_given_I",),
    "fig8_purity": ("purity_single",),
    "fig9_bsm_heralding": ("pr_herald",),
    "fig10_bsm_efficiency": ("bsm_efficiency",),
    "fig11_bsm_purity": ("bsm_purity",),
    "fig12_bsm_error": ("pr_e",),
    "fig13_chi1": ("chi_1",),
    "fig14_chi23": ("chi_2", "chi_3"),
}


class ConfigError(ZalmError, ValueError):
    """Malformed or inconsistent run configuration."""


@dataclass(frozen=True)
class GridConfig:
    points_per_channel: int = DEFAULT_POINTS
    k_sigma: float = DEFAULT_K_SIGMA
    svd_cutoff: float = DEFAULT_CUTOFF


@dataclass(frozen=True)
class MemoryConfig:
    """Memory operation plus illustrative SiV-like rates (rad/s).

    Any rate may be overridden; ``g = None`` means "choose g for C_pi".
    """

    mode: str = "ideal"
    gamma: float = TWO_PI * 0.05e9
    kappa: float = TWO_PI * 10e9
    kappa_J: float = TWO_PI * 0.5e9
    Delta_12: float = TWO_PI * 5e9
    g: float | None = None
    T: float = 0.0
    delta_B_tilde: float = 600e6

    def params(self) -> MemoryParams:
        p = MemoryParams(self.gamma, self.kappa, self.kappa_J, self.g or 0.0, self.Delta_12, self.T)
        return p.at_cooperativity_pi() if self.g is None else p


@dataclass(frozen=True)
class OutputConfig:
    channels: tuple | None = None  # None means every channel
    guard_stride: int = 1
    metrics: tuple | None = None
    pair_model: str = "poisson"
    verify_grid: bool = False
    workers: int | None = None


@dataclass(frozen=True)
class RunConfig:
    source: SourceParams
    plan: ChannelPlan
    grid: GridConfig = field(default_factory=GridConfig)
    memory: MemoryConfig = field(default_factory=MemoryConfig)
    budget: EfficiencyBudget = field(default_factory=EfficiencyBudget)
    outputs: OutputConfig = field(default_factory=OutputConfig)


def _plan() -> ChannelPlan:
    return ChannelPlan(delta_B=25e9, Delta_B=30e9, N=81)


PRESETS = {
    "case1": lambda: RunConfig(SourceParams(sigma_P=160e-12, omega_PM=TWO_PI * 6.37e12), _plan()),
    "case2": lambda: RunConfig(SourceParams(sigma_P=16e-12, omega_PM=TWO_PI * 6.37e12), _plan()),
}

_SECTIONS = {
    "source": SourceParams, "plan": ChannelPlan, "grid": GridConfig,
    "memory": MemoryConfig, "budget": EfficiencyBudget, "outputs": OutputConfig,
}


def preset(name: str) -> RunConfig:
    try:
        return PRESETS[name]()
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None


def config_from_dict(data: dict, base: RunConfig | None = None) -> RunConfig:
    """Build a config from nested sections, rejecting unknown keys.

    A ``preset`` key at top level selects the base; other sections override it.
    """
    data = dict(data)
    name = data.pop("preset", None)
    if base is None:
        base = preset(name) if name is not None else None
    unknown = set(data) - set(_SECTIONS)
    if unknown:
        raise ConfigError(f"unknown config section(s): {sorted(unknown)}")
    parts = {}
    for sec, cls in _SECTIONS.items():
        given = data.get(sec, {})
        if not isinstance(given, dict):
            raise ConfigError(f"section [{sec}] must be a table")
        allowed = {f.name for f in fields(cls)}
        bad = set(given) - allowed
        if bad:
            raise ConfigError(f"unknown key(s) in [{sec}]: {sorted(bad)}")
        given = {k: tuple(v) if isinstance(v, list) else v for k, v in given.items()}
        current = getattr(base, sec) if base is not None else None
        try:
            parts[sec] = replace(current, **given) if current is not None else cls(**given)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"[{sec}]: {exc}") from None
    cfg = RunConfig(**parts)
    validate(cfg)
    return cfg


def load_config(path) -> RunConfig:
    with open(path, "rb") as fh:
        try:
            data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from None
    return config_from_dict(data)


def validate(cfg: RunConfig) -> None:
    m, o, g = cfg.memory, cfg.outputs, cfg.grid
    if m.mode not in MEMORY_MODES:
        raise ConfigError(f"memory.mode must be one of {MEMORY_MODES}")
    if not m.delta_B_tilde > 0 or m.delta_B_tilde > cfg.plan.delta_B:
        raise ConfigError("memory.delta_B_tilde must lie in (0, delta_B]")
    if o.pair_model not in PAIR_MODELS:
        raise ConfigError(f"outputs.pair_model must be one of {PAIR_MODELS}")
    if int(o.guard_stride) != o.guard_stride or o.guard_stride < 1:
        raise ConfigError("outputs.guard_stride must be a positive integer")
    if g.points_per_channel < 2:
        raise ConfigError("grid.points_per_channel must be >= 2")
    if not g.k_sigma > 0 or not 0 <= g.svd_cutoff < 1:
        raise ConfigError("grid.k_sigma must be positive and 0 <= svd_cutoff < 1")
    bound = (cfg.plan.N - 1) // 2
    for n in o.channels or ():
        if int(n) != n or abs(n) > bound:
            raise ConfigError(f"channel {n} outside [-{bound}, {bound}]")
    if o.metrics is not None:
        bad = set(o.metrics) - set(COLUMNS)
        if bad:
            raise ConfigError(f"unknown metric(s): {sorted(bad)}")
    if m.mode != "ideal":
        try:
            m.params()
        except ZalmError as exc:
            raise ConfigError(f"[memory]: {exc}") from None


def selected_channels(cfg: RunConfig) -> list[int]:
    keep = set(guard_band_channels(cfg.plan, cfg.outputs.guard_stride))
    chans = cfg.plan.channels if cfg.outputs.channels is None else sorted(set(cfg.outputs.channels))
    return [n for n in chans if n in keep]


@dataclass
class Table:
    """Ordered rows plus an optional footer; ``None`` cells are undefined."""

    columns: list
    rows: list
    footer: dict | None = None

    def column(self, name: str) -> list:
        return [r[name] for r in self.rows]


def _undefined_on_degenerate(fn, *args):
    try:
        return fn(*args)
    except DegenerateInputError:
        return None


def _fidelities(cfg: RunConfig, amp_both):
    m = cfg.memory
    if m.mode == "ideal":
        kernels = bsm_kernels(phi_kernel(amp_both))
        f = _undefined_on_degenerate(ideal_loading_fidelity, kernels)
        return f, f, 1.0
    params = m.params()
    mc = ModeConversionParams.from_plan(cfg.plan, m.delta_B_tilde)
    kernels = bsm_kernels(mode_convert_phi(phi_kernel(amp_both), mc))
    eta = cavity_efficiency(params)
    if m.mode == "narrowband":
        pair = _undefined_on_degenerate(narrowband_fidelities, kernels, params.r1(0.0))
    else:
        pair = _undefined_on_degenerate(class_fidelities, kernels, params)
    fa, fb = pair if pair is not None else (None, None)
    return fa, fb, eta


def channel_report(cfg: RunConfig, n: int, points: int | None = None) -> dict:
    """All per-channel metrics for idler channel ``n``."""
    psi = Biphoton.gaussian(cfg.source)
    pts = points or cfg.grid.points_per_channel
    plan = cfg.plan
    amp_i = channelize(psi, n, plan, "idler_only", pts, cfg.grid.k_sigma)
    amp_both = channelize(psi, n, plan, "both", pts)
    pr_i = amp_i.probability()
    pr_si = amp_both.probability()
    row = dict.fromkeys(COLUMNS)
    row.update(n=n, pr_I=pr_i, pr_SI=pr_si)
    if pr_i > 0:
        row["pr_S_given_I"] = pr_si / pr_i
        row["pr_herald"] = bsm_herald_probability(pr_i)
        row["bsm_efficiency"] = bsm_heralding_efficiency(pr_si, pr_i)
    if pr_si > 0:
        p = purity_from_schmidt(decompose(amp_both, cfg.grid.svd_cutoff))
        row["purity_single"] = p
        row["bsm_purity"] = bsm_purity(p)
        row["pr_c"], row["pr_e"] = bsm_fidelity_and_error(row["bsm_purity"])
        row["F_a"], row["F_b"], row["eta_cavity"] = _fidelities(cfg, amp_both)
    if None not in (row["pr_herald"], row["bsm_efficiency"], row["F_a"], row["F_b"]):
        row["R_n"] = channel_rate(cfg.budget, row["pr_herald"], row["bsm_efficiency"],
                                  row["eta_cavity"], row["F_a"], row["F_b"])
    bound = (plan.N - 1) // 2
    for k in (1, 2, 3):
        if abs(n + k) <= bound:
            row[f"chi_{k}"] = _undefined_on_degenerate(interference_ratio, psi, n, k, plan, pts)
    return row


def _drift(a: dict, b: dict) -> float:
    worst = 0.0
    for c in COLUMNS[1:]:
        x, y = a[c], b[c]
        if x is None or y is None:
            continue
        worst = max(worst, abs(x - y) / max(abs(x), abs(y), DRIFT_FLOOR))
    return worst


def run(cfg: RunConfig) -> Table:
    """One row per selected channel, ordered by ``n``, plus a totals footer."""
    chans = selected_channels(cfg)
    workers = cfg.outputs.workers or min(8, os.cpu_count() or 1)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        rows = list(pool.map(lambda n: channel_report(cfg, n), chans))
        if cfg.outputs.verify_grid:
            fine_pts = 2 * cfg.grid.points_per_channel
            fine = list(pool.map(lambda n: channel_report(cfg, n, fine_pts), chans))
            for r, f in zip(rows, fine):
                r["grid_drift"] = _drift(r, f)
                r["grid_warning"] = r["grid_drift"] > DRIFT_TOL
    columns = list(COLUMNS)
    if cfg.outputs.metrics is not None:
        columns = ["n"] + [c for c in COLUMNS[1:] if c in cfg.outputs.metrics]
    if cfg.outputs.verify_grid:
        columns += list(DRIFT_COLUMNS)
    footer = None
    if rows:
        rates = [r["R_n"] for r in rows if r["R_n"] is not None]
        footer = {"R_total": total_rate(rates),
                  "pr_two_pair": two_pair_probability(cfg.budget.E_Np, cfg.outputs.pair_model)}
    return Table(columns, rows, footer)


SWEEPABLE = {
    "sigma_P": "source", "omega_PM": "source",
    "delta_B": "plan", "Delta_B": "plan", "N": "plan",
    "guard_stride": "outputs",
    "gamma": "memory", "kappa": "memory", "kappa_J": "memory", "g": "memory",
    "Delta_12": "memory", "T": "memory", "delta_B_tilde": "memory",
    "eta_qtx": "budget", "eta_prop": "budget", "eta_qrx": "budget", "E_Np": "budget",
}


def with_value(cfg: RunConfig, parameter: str, value) -> RunConfig:
    if parameter not in SWEEPABLE:
        raise ConfigError(f"unknown sweep parameter {parameter!r}; choose from {sorted(SWEEPABLE)}")
    sec = SWEEPABLE[parameter]
    if parameter in ("guard_stride", "N"):
        value = int(value)
    try:
        new = replace(cfg, **{sec: replace(getattr(cfg, sec), **{parameter: value})})
    except ValueError as exc:
        raise ConfigError(f"{parameter}={value}: {exc}") from None
    validate(new)
    return new


def sweep(cfg: RunConfig, parameter: str, values) -> Table:
    """Long-format table: the swept value prepended to every run row and footer."""
    configs = [with_value(cfg, parameter, v) for v in values]
    rows = []
    columns = None
    for v, c in zip(values, configs):
        t = run(c)
        columns = columns or ["param", "value"] + t.columns
        for r in t.rows:
            rows.append({"param": parameter, "value": v, **r})
        if t.footer is not None:
            rows.append({"param": parameter, "value": v, "n": "total", **t.footer})
    columns = (columns or ["param", "value"] + list(COLUMNS)) + list(FOOTER_COLUMNS)
    return Table(columns, rows, None)


def format_cell(v) -> str:
    if v is None:
        return UNDEFINED
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if not math.isfinite(v):
            return UNDEFINED
        return f"{v:.9e}"
    return str(v)


def to_csv(table: Table) -> str:
    buf = io.StringIO()
    cols = list(table.columns)
    if table.footer is not None:
        cols += [c for c in FOOTER_COLUMNS if c not in cols]
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(cols)
    for r in table.rows:
        w.writerow([format_cell(r[c]) if c in r else "" for c in cols])
    if table.footer is not None:
        foot = {"n": "total", **table.footer}
        w.writerow([format_cell(foot[c]) if c in foot else "" for c in cols])
    return buf.getvalue()


def parse_csv(text: str) -> list[dict]:
    """Inverse of :func:`to_csv` for numeric cells; blanks and ``undefined`` map to None."""
    out = []
    for rec in csv.DictReader(io.StringIO(text)):
        row = {}
        for k, v in rec.items():
            if v in ("", UNDEFINED):
                row[k] = None
            elif v in ("true", "false"):
                row[k] = v == "true"
            else:
                try:
                    row[k] = int(v)
                except ValueError:
                    try:
                        row[k] = float(v)
                    except ValueError:
                        row[k] = v
        out.append(row)
    return out


def emit(table: Table, fmt: str, path) -> list[Path]:
    """Write ``csv`` (single file) or ``plotdata`` (one file per figure in a directory)."""
    if fmt == "csv":
        p = Path(path)
        if p.is_dir():
            p = p / "report.csv"
        p.write_text(to_csv(table), newline="")
        return [p]
    if fmt == "plotdata":
        d = Path(path)
        d.mkdir(parents=True, exist_ok=True)
        written = []
        for name, cols in PLOTDATA.items():
            sub = Table(["n", *cols], [r for r in table.rows if isinstance(r.get("n"), int)])
            p = d / f"{name}.csv"
            p.write_text(to_csv(sub), newline="")
            written.append(p)
        return written
    raise ConfigError(f"unknown output format {fmt!r}; use csv or plotdata")
