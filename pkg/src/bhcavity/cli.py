"""Command-line runner: presets, end-to-end runs, and report files.

Subcommands
    run        integrate a trajectory ensemble and write CSV/markdown reports
    compare    diff two run directories in units of combined standard error
    meanfield  classical (noiseless) series with the analytic reference
    oracle     exact master-equation run for small cutoffs, same CSV schema

A run directory contains populations.csv, moments.csv, criteria.csv,
tables.md, classification.json, and manifest.json; every file regenerates
bit-identically from the manifest with the same package version.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analytic import steady_loss_at_pumped, steady_numbers_loss_at_second
from .correlations import CorrelationReport, evaluate_report, optimize_angle, trimer_criteria
from .dynamics import IntegratorConfig, run_meanfield
from .ensemble import (
    EnsembleDivergenceError,
    MomentAccumulator,
    estimate_error,
    moments_at,
    population_series,
    replica_moments_at,
    run_ensemble,
)
from .model import ParameterError, SystemSpec, make_trimer
from .oracle import FockConfig, run_oracle

__all__ = ["ConfigError", "PRESETS", "load_config", "resolve_config", "main"]

EXIT_CONFIG = 2
EXIT_DIVERGENT = 3


class ConfigError(ValueError):
    """Invalid run configuration; the message names the offending path."""


#: named parameter sets: trimer with eps=10, gamma=J=1, loss and chi per name
#: ("chi2" means chi=1e-2, "chi3" chi=1e-3)
PRESETS: dict[str, dict] = {
    "loss_at_2_chi2": {
        "trimer": {"J": 1.0, "chi": 1e-2, "epsilon": 10.0, "gamma": 1.0, "damped_well": "other_well"},
        "t_final": 100.0,
        "eval_times": [100.0],
    },
    "loss_at_2_chi3": {
        "trimer": {"J": 1.0, "chi": 1e-3, "epsilon": 10.0, "gamma": 1.0, "damped_well": "other_well"},
        "t_final": 100.0,
        "eval_times": [100.0],
    },
    "loss_at_1_chi2": {
        "trimer": {"J": 1.0, "chi": 1e-2, "epsilon": 10.0, "gamma": 1.0, "damped_well": "pumped_well"},
        "t_final": 40.0,
        "eval_times": [40.0],
    },
    "loss_at_1_chi3": {
        "trimer": {"J": 1.0, "chi": 1e-3, "epsilon": 10.0, "gamma": 1.0, "damped_well": "pumped_well"},
        "t_final": 60.0,
        "eval_times": [60.0],
    },
}

_DEFAULTS = {
    "integrator": {"dt": 1e-3, "t_final": 100.0, "sample_every": 100, "scheme": "heun_additive"},
    "ensemble": {"n_traj": 100_000, "seed": 2024, "workers": None, "replicas": 10},
    "analysis": {"eval_times": None, "angle_step_deg": 1.0, "band": 1.0},
    "outputs": {"directory": "out"},
    "oracle": {"n_max": 4, "dt": 2e-3, "t_final": 10.0, "sample_every": 50},
}


def load_config(path: str | Path) -> dict:
    try:
        with open(path) as f:
            return json.load(f)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}")


def _require(cond: bool, path: str, msg: str) -> None:
    if not cond:
        raise ConfigError(f"{path}: {msg}")


def _section(raw: dict, name: str) -> dict:
    sec = raw.get(name, {})
    _require(isinstance(sec, dict), name, "must be an object")
    merged = dict(_DEFAULTS.get(name, {}))
    merged.update(sec)
    return merged


def resolve_config(raw: dict, preset: str | None = None) -> dict:
    """Expand preset and defaults into a fully explicit configuration dict."""
    raw = dict(raw or {})
    system = raw.get("system", {})
    _require(isinstance(system, dict), "system", "must be an object")
    preset = preset or system.get("preset")

    resolved: dict = {"version": __version__}
    integ = _section(raw, "integrator")
    ens = _section(raw, "ensemble")
    ana = _section(raw, "analysis")
    out = _section(raw, "outputs")
    orc = _section(raw, "oracle")

    if preset is not None:
        _require(preset in PRESETS, "system.preset", f"unknown preset {preset!r}; "
                 f"choose from {sorted(PRESETS)}")
        p = PRESETS[preset]
        spec = make_trimer(**{k: v for k, v in p["trimer"].items() if k != "damped_well"},
                           config=p["trimer"]["damped_well"])
        if "integrator" not in raw or "t_final" not in raw.get("integrator", {}):
            integ["t_final"] = p["t_final"]
        if ana["eval_times"] is None:
            ana["eval_times"] = list(p["eval_times"])
        resolved["preset"] = preset
    else:
        _require(bool(system) and "coupling" in system, "system",
                 "give either a preset name or an inline system")
        try:
            spec = SystemSpec.from_dict(system)
        except (ParameterError, KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"system: {exc}")
        resolved["preset"] = None

    if ana["eval_times"] is None:
        ana["eval_times"] = [integ["t_final"]]

    _require(int(ens["n_traj"]) >= 1, "ensemble.n_traj", "must be >= 1")
    _require(int(ens["replicas"]) >= 2, "ensemble.replicas", "must be >= 2")
    _require(float(ana["angle_step_deg"]) > 0, "analysis.angle_step_deg", "must be > 0")

    try:
        icfg = IntegratorConfig(
            dt=float(integ["dt"]),
            t_final=float(integ["t_final"]),
            sample_every=int(integ["sample_every"]),
            scheme=str(integ["scheme"]),
        )
    except ParameterError as exc:
        raise ConfigError(f"integrator: {exc}")

    grid = icfg.times()
    for t in ana["eval_times"]:
        _require(
            bool(np.any(np.isclose(grid, t, rtol=0.0, atol=1e-9))),
            "analysis.eval_times",
            f"t={t} is not on the sample grid (spacing {icfg.sample_dt:g})",
        )

    resolved["system"] = spec.to_dict()
    resolved["integrator"] = {
        "dt": icfg.dt, "t_final": icfg.t_final,
        "sample_every": icfg.sample_every, "scheme": icfg.scheme,
    }
    resolved["ensemble"] = {
        "n_traj": int(ens["n_traj"]),
        "seed": int(ens["seed"]),
        "workers": ens["workers"] if ens["workers"] is None else int(ens["workers"]),
        "replicas": int(ens["replicas"]),
    }
    resolved["analysis"] = {
        "eval_times": [float(t) for t in ana["eval_times"]],
        "angle_step_deg": float(ana["angle_step_deg"]),
        "band": float(ana["band"]),
    }
    resolved["outputs"] = {"directory": str(out["directory"])}
    resolved["oracle"] = {
        "n_max": int(orc["n_max"]), "dt": float(orc["dt"]),
        "t_final": float(orc["t_final"]), "sample_every": int(orc["sample_every"]),
    }
    return resolved


def _spec_from_resolved(cfg: dict) -> SystemSpec:
    return SystemSpec.from_dict(cfg["system"])


def _integrator_from_resolved(cfg: dict) -> IntegratorConfig:
    i = cfg["integrator"]
    return IntegratorConfig(dt=i["dt"], t_final=i["t_final"],
                            sample_every=i["sample_every"], scheme=i["scheme"])


def _write_populations_csv(path: Path, acc: MomentAccumulator) -> None:
    times, N, SE = population_series(acc)
    n = N.shape[1]
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["t"] + [f"N_{i + 1}" for i in range(n)] + [f"SE_{i + 1}" for i in range(n)])
        for s, t in enumerate(times):
            w.writerow([repr(float(t))] + [repr(x) for x in N[s]] + [repr(x) for x in SE[s]])


def _write_moments_csv(path: Path, acc: MomentAccumulator) -> None:
    n = acc.n_wells
    header = ["t"]
    for i in range(n):
        header += [f"m_{i + 1}_re", f"m_{i + 1}_im"]
    for i in range(n):
        for j in range(i, n):
            header += [f"S_{i + 1}{j + 1}_re", f"S_{i + 1}{j + 1}_im"]
    for i in range(n):
        for j in range(i, n):
            header += [f"C_{i + 1}{j + 1}_re", f"C_{i + 1}{j + 1}_im"]
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(header)
        for t in acc.times:
            g = moments_at(acc, t)
            row = [repr(float(t))]
            for i in range(n):
                row += [repr(g.m[i].real), repr(g.m[i].imag)]
            for i in range(n):
                for j in range(i, n):
                    row += [repr(g.S[i, j].real), repr(g.S[i, j].imag)]
            for i in range(n):
                for j in range(i, n):
                    row += [repr(g.C[i, j].real), repr(g.C[i, j].imag)]
            w.writerow(row)


def _indices_label(indices: tuple[int, ...]) -> str:
    return "".join(str(i + 1) for i in indices)


def _write_criteria_csv(path: Path, acc: MomentAccumulator, cfg: dict,
                        reports: dict[float, CorrelationReport]) -> None:
    """Long-format criterion values with replica standard errors per angle."""
    from .correlations import CRITERION_FUNCS, _value_of

    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["t", "theta_deg", "criterion", "indices", "value", "std_error"])
        for t, report in reports.items():
            reps = replica_moments_at(acc, t)
            for (name, idx), curve in report.curves.items():
                fn = CRITERION_FUNCS[name][0]
                for a, theta_deg in enumerate(curve.theta_deg):
                    th = np.deg2rad(theta_deg)
                    rep_vals = [_value_of(fn(gr, *idx, th)) for gr in reps]
                    se = float(np.std(rep_vals, ddof=1) / np.sqrt(len(rep_vals)))
                    w.writerow([
                        repr(float(t)), repr(float(theta_deg)), name,
                        _indices_label(idx), repr(float(curve.values[a])), repr(se),
                    ])


def _band_minmax(acc: MomentAccumulator, cfg: dict, name: str, idx: tuple[int, ...],
                 t: float) -> tuple[float, float]:
    """Min and max of the angle-optimized value over grid times within +-band."""
    band = cfg["analysis"]["band"]
    ts = acc.times[(acc.times >= t - band - 1e-9) & (acc.times <= t + band + 1e-9)]
    vals = []
    for tb in ts:
        g = moments_at(acc, tb)
        _, v = optimize_angle(g, name, idx, coarse_step_deg=cfg["analysis"]["angle_step_deg"])
        vals.append(v)
    return (float(min(vals)), float(max(vals))) if vals else (float("nan"), float("nan"))


def _fmt_entry(curve) -> str:
    return f"{curve.value_opt:.2f}@{curve.theta_opt_deg:.0f}°"


def _write_tables_md(path: Path, acc: MomentAccumulator, cfg: dict,
                     reports: dict[float, CorrelationReport]) -> None:
    spec = _spec_from_resolved(cfg)
    n = spec.n_wells
    lines = [f"# Correlation tables", ""]
    lines.append(f"chi = {spec.chi:g}; values are minima over the quadrature angle,")
    lines.append(f"reported as value@angle with the min-max band over ±{cfg['analysis']['band']:g}")
    lines.append("time units alongside.")
    for t, report in reports.items():
        lines += ["", f"## t = {t:g}", ""]

        def table(title: str, entries: list[tuple[str, tuple[int, ...]]]) -> None:
            labels = [report.curve(name, idx).label for name, idx in entries]
            cells = [_fmt_entry(report.curve(name, idx)) for name, idx in entries]
            bands = []
            for name, idx in entries:
                lo, hi = _band_minmax(acc, cfg, name, idx, t)
                bands.append(f"{lo:.2f}..{hi:.2f}")
            lines.append(f"### {title}")
            lines.append("| " + " | ".join([" "] + labels) + " |")
            lines.append("|" + "---|" * (len(labels) + 1))
            lines.append("| value | " + " | ".join(cells) + " |")
            lines.append("| ±band | " + " | ".join(bands) + " |")
            lines.append("")

        table("Single-mode variances and Duan-Simon",
              [("variance_x", (i,)) for i in range(n)]
              + [("duan_simon", (i, j)) for i in range(n) for j in range(i + 1, n)])
        table("EPR steering (Reid products)",
              [("reid_epr", (i, j)) for i in range(n) for j in range(n) if i != j])
        if n == 3:
            table("Tripartite van Loock-Furusawa",
                  [("vlf_pair", (0, 1, 2)), ("vlf_pair", (0, 2, 1)), ("vlf_pair", (1, 2, 0)),
                   ("vlf_triple", (0, 1, 2)), ("vlf_triple", (1, 2, 0)), ("vlf_triple", (2, 0, 1))])
            table("Tripartite EPR steering (OBR products)",
                  [("obr", (0, 1, 2)), ("obr", (1, 2, 0)), ("obr", (2, 0, 1))])
    path.write_text("\n".join(lines))


def _json_default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serializable: {type(o)}")


def cmd_run(args) -> int:
    raw = load_config(args.config) if args.config else {}
    cfg = resolve_config(raw, preset=args.preset)
    if args.n_traj is not None:
        cfg["ensemble"]["n_traj"] = args.n_traj
    if args.seed is not None:
        cfg["ensemble"]["seed"] = args.seed
    if args.workers is not None:
        cfg["ensemble"]["workers"] = args.workers
    if args.out is not None:
        cfg["outputs"]["directory"] = args.out

    spec = _spec_from_resolved(cfg)
    icfg = _integrator_from_resolved(cfg)
    ens = cfg["ensemble"]
    acc = run_ensemble(spec, icfg, n_traj=ens["n_traj"], seed=ens["seed"],
                       workers=ens["workers"], replicas=ens["replicas"])

    out_dir = Path(cfg["outputs"]["directory"])
    out_dir.mkdir(parents=True, exist_ok=True)

    reports: dict[float, CorrelationReport] = {}
    classification = []
    for t in cfg["analysis"]["eval_times"]:
        g = moments_at(acc, t)
        report = evaluate_report(g, angle_step_deg=cfg["analysis"]["angle_step_deg"])
        reports[t] = report
        classification.append({"t": t, "flags": report.flags})

    _write_populations_csv(out_dir / "populations.csv", acc)
    _write_moments_csv(out_dir / "moments.csv", acc)
    _write_criteria_csv(out_dir / "criteria.csv", acc, cfg, reports)
    _write_tables_md(out_dir / "tables.md", acc, cfg, reports)
    (out_dir / "classification.json").write_text(
        json.dumps(classification, indent=2, default=_json_default))
    manifest = dict(cfg)
    manifest["divergent_trajectories"] = acc.divergent_count
    manifest["divergent_fraction"] = acc.divergent_fraction
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2, default=_json_default))
    print(f"run complete: {acc.count} trajectories "
          f"({acc.divergent_count} divergent) -> {out_dir}")
    return 0


def _read_csv(path: Path) -> tuple[list[str], list[list[str]]]:
    with open(path) as f:
        rows = list(csv.reader(f))
    return rows[0], rows[1:]


def cmd_compare(args) -> int:
    dir_a, dir_b = Path(args.dir_a), Path(args.dir_b)
    for d in (dir_a, dir_b):
        if not (d / "manifest.json").exists():
            raise ConfigError(f"no manifest.json in {d}")

    report: dict = {"dir_a": str(dir_a), "dir_b": str(dir_b), "files": {}}

    def compare_table(name: str, key_cols: int, val_col: int, err_col: int | None):
        head_a, rows_a = _read_csv(dir_a / name)
        head_b, rows_b = _read_csv(dir_b / name)
        if head_a != head_b:
            raise ConfigError(f"{name}: column headers differ")
        keys_a = [tuple(r[:key_cols]) for r in rows_a]
        keys_b = [tuple(r[:key_cols]) for r in rows_b]
        if keys_a != keys_b:
            raise ConfigError(f"{name}: sample grids differ")
        max_sig = 0.0
        max_abs = 0.0
        n_beyond = 0
        for ra, rb in zip(rows_a, rows_b):
            va, vb = float(ra[val_col]), float(rb[val_col])
            diff = abs(va - vb)
            max_abs = max(max_abs, diff)
            if err_col is not None:
                sig = np.hypot(float(ra[err_col]), float(rb[err_col]))
                rel = diff / sig if sig > 0 else (0.0 if diff == 0 else float("inf"))
                max_sig = max(max_sig, rel)
                if rel > 3.0:
                    n_beyond += 1
        report["files"][name] = {
            "max_abs_diff": max_abs,
            "max_sigma": max_sig if err_col is not None else None,
            "rows_beyond_3sigma": n_beyond if err_col is not None else None,
            "rows": len(rows_a),
        }

    head, _ = _read_csv(dir_a / "populations.csv")
    n = sum(1 for h in head if h.startswith("N_"))
    for i in range(n):
        compare_table("populations.csv", 1, 1 + i, 1 + n + i)
    # merge per-well entries into one summary
    if (dir_a / "criteria.csv").exists() and (dir_b / "criteria.csv").exists():
        compare_table("criteria.csv", 4, 4, 5)

    worst = max((v["max_sigma"] or 0.0) for v in report["files"].values())
    report["max_sigma"] = worst
    out = json.dumps(report, indent=2, default=_json_default)
    print(out)
    if args.out:
        Path(args.out).write_text(out)
    return 0


_LINESTYLES = ["solid", "dashdot", "dashed", "loosely dashed", "densely dashed"]


def _detect_trimer(spec: SystemSpec):
    """Return (J, gamma, eps, loss_index) when spec is a standard trimer."""
    if spec.n_wells != 3:
        return None
    J = spec.coupling[0, 1]
    if J <= 0 or not np.allclose(spec.coupling, J * (np.ones((3, 3)) - np.eye(3))):
        return None
    pumped = np.nonzero(spec.pump != 0)[0]
    damped = np.nonzero(spec.loss > 0)[0]
    if len(pumped) != 1 or pumped[0] != 0 or len(damped) != 1:
        return None
    return float(J), float(spec.loss[damped[0]]), complex(spec.pump[0]), int(damped[0])


def cmd_meanfield(args) -> int:
    raw = load_config(args.config) if args.config else {}
    cfg = resolve_config(raw, preset=args.preset)
    if args.out is not None:
        cfg["outputs"]["directory"] = args.out
    spec = _spec_from_resolved(cfg)
    icfg = _integrator_from_resolved(cfg)
    out_dir = Path(cfg["outputs"]["directory"])
    out_dir.mkdir(parents=True, exist_ok=True)

    times, series = run_meanfield(spec, None, icfg)
    pops = np.abs(series) ** 2
    total = pops.sum(axis=1)

    analytic_total = None
    trimer = _detect_trimer(spec)
    if trimer is not None and spec.chi == 0.0:
        J, gamma, eps, loss_idx = trimer
        if loss_idx == 0:
            analytic_total = float(steady_loss_at_pumped(J, gamma, eps).populations.sum())
        else:
            analytic_total = float(steady_numbers_loss_at_second(J, gamma, eps).sum())

    n = spec.n_wells
    with open(out_dir / "meanfield.csv", "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["t", "series", "value", "linestyle"])
        for s, t in enumerate(times):
            for i in range(n):
                w.writerow([repr(float(t)), f"N_{i + 1}", repr(float(pops[s, i])),
                            _LINESTYLES[i % len(_LINESTYLES)]])
            w.writerow([repr(float(t)), "total", repr(float(total[s])), "solid"])
            if analytic_total is not None:
                w.writerow([repr(float(t)), "analytic_total", repr(analytic_total), "dotted"])

    if args.with_ensemble:
        ens = cfg["ensemble"]
        acc = run_ensemble(spec, icfg, n_traj=ens["n_traj"], seed=ens["seed"],
                           workers=ens["workers"], replicas=ens["replicas"])
        t2, N, SE = population_series(acc)
        with open(out_dir / "tw_populations.csv", "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["t", "series", "value", "std_error", "linestyle"])
            for s, t in enumerate(t2):
                for i in range(n):
                    w.writerow([repr(float(t)), f"N_{i + 1}", repr(float(N[s, i])),
                                repr(float(SE[s, i])), _LINESTYLES[i % len(_LINESTYLES)]])
    print(f"mean-field series written to {out_dir}")
    return 0


def cmd_oracle(args) -> int:
    raw = load_config(args.config) if args.config else {}
    cfg = resolve_config(raw, preset=args.preset)
    if args.out is not None:
        cfg["outputs"]["directory"] = args.out
    spec = _spec_from_resolved(cfg)
    o = cfg["oracle"]
    fcfg = FockConfig(n_max=o["n_max"], dt=o["dt"], t_final=o["t_final"],
                      sample_every=o["sample_every"])
    out_dir = Path(cfg["outputs"]["directory"])
    out_dir.mkdir(parents=True, exist_ok=True)

    times, moms = run_oracle(spec, fcfg)
    n = spec.n_wells
    from .ensemble import population as pop_of

    with open(out_dir / "populations.csv", "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["t"] + [f"N_{i + 1}" for i in range(n)] + [f"SE_{i + 1}" for i in range(n)])
        for t, g in zip(times, moms):
            w.writerow([repr(float(t))] + [repr(pop_of(g, i)) for i in range(n)]
                       + ["0.0"] * n)
    header = ["t"]
    for i in range(n):
        header += [f"m_{i + 1}_re", f"m_{i + 1}_im"]
    for i in range(n):
        for j in range(i, n):
            header += [f"S_{i + 1}{j + 1}_re", f"S_{i + 1}{j + 1}_im"]
    for i in range(n):
        for j in range(i, n):
            header += [f"C_{i + 1}{j + 1}_re", f"C_{i + 1}{j + 1}_im"]
    with open(out_dir / "moments.csv", "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(header)
        for t, g in zip(times, moms):
            row = [repr(float(t))]
            for i in range(n):
                row += [repr(g.m[i].real), repr(g.m[i].imag)]
            for i in range(n):
                for j in range(i, n):
                    row += [repr(g.S[i, j].real), repr(g.S[i, j].imag)]
            for i in range(n):
                for j in range(i, n):
                    row += [repr(g.C[i, j].real), repr(g.C[i, j].imag)]
            w.writerow(row)
    manifest = dict(cfg)
    manifest["engine"] = "fock_lindblad"
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2, default=_json_default))
    print(f"oracle run written to {out_dir}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="bhcavity",
        description="Pumped, damped Bose-Hubbard network simulator "
                    "(phase-space trajectories + exact small-system oracle)",
    )
    parser.add_argument("--version", action="version", version=f"bhcavity {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="ensemble run with full report files")
    p_run.add_argument("--config", help="JSON config file")
    p_run.add_argument("--preset", choices=sorted(PRESETS), help="named parameter set")
    p_run.add_argument("--n-traj", type=int, dest="n_traj")
    p_run.add_argument("--seed", type=int)
    p_run.add_argument("--workers", type=int)
    p_run.add_argument("--out", help="output directory")
    p_run.set_defaults(func=cmd_run)

    p_cmp = sub.add_parser("compare", help="diff two run directories")
    p_cmp.add_argument("dir_a")
    p_cmp.add_argument("dir_b")
    p_cmp.add_argument("--out", help="write the JSON diff report here")
    p_cmp.set_defaults(func=cmd_compare)

    p_mf = sub.add_parser("meanfield", help="classical series with analytic reference")
    p_mf.add_argument("--config")
    p_mf.add_argument("--preset", choices=sorted(PRESETS))
    p_mf.add_argument("--out")
    p_mf.add_argument("--with-ensemble", action="store_true",
                      help="also run the stochastic ensemble and write tw_populations.csv")
    p_mf.set_defaults(func=cmd_meanfield)

    p_or = sub.add_parser("oracle", help="exact master-equation run (small systems)")
    p_or.add_argument("--config")
    p_or.add_argument("--preset", choices=sorted(PRESETS))
    p_or.add_argument("--out")
    p_or.set_defaults(func=cmd_oracle)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except EnsembleDivergenceError as exc:
        print(f"error: run invalid, {exc}", file=sys.stderr)
        return EXIT_DIVERGENT
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
