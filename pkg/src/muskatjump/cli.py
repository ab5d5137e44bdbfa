"""Command-line front end: runs, certificates, dispersion tables, oracle checks, sweeps.

Configs are strict JSON (unknown keys rejected).  All numeric output is
written with round-trip precision so identical config + seed produces
byte-identical artifacts; wall-clock timestamps live in a separate metadata
field excluded from reproducibility comparisons.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, certify, oracle
from .errors import (BlowUpError, ConfigurationError, GeometryError,
                     PicardDivergenceError, StepSizeError)
from .evolution import (InterfaceField, Schedule, SolverOptions, linear_symbol,
                        load_checkpoint, rhs, run, save_checkpoint, step)
from .spectral import GridSpec, SpectralField, inverse
from .vorticity import FluidConfig, solve_vorticity

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_GEOMETRY = 3
EXIT_DIVERGENCE = 4
EXIT_BUDGET = 5
EXIT_INADMISSIBLE = 6
EXIT_ORACLE = 7

_CSV_COLUMNS = ["t", "F01", "F11", "F21", "F3half", "L2nu", "strip_radius",
                "budget_s0_lhs", "budget_s0_rhs", "budget_s1_lhs", "budget_s1_rhs",
                "leakage"]

_SCHEMA = {
    "version": int,
    "fluid": {"a_kappa": float, "a_mu": float, "a_rho": float, "h2": float},
    "grid": {"n_points": int, "domain_length": float},
    "initial_data": dict,
    "schedule": {"t_end": float, "dt": float, "snapshot_every": int},
    "solver?": {"picard_tol?": float, "picard_max_iter?": int, "series_tol?": float,
                "leakage_threshold?": float, "cfl_bound?": float, "order?": int},
    "output?": {"directory?": str},
    "seed?": int,
}

_INITIAL_DATA_SCHEMAS = {
    "gaussian_bump": {"preset": str, "amplitude": float, "width": float},
    "single_mode": {"preset": str, "k": int, "amplitude": float},
    "from_file": {"preset": str, "path": str},
}


def _validate(schema: dict, obj, path: str = "config"):
    if not isinstance(obj, dict):
        raise ConfigurationError(f"{path} must be an object")
    required = {k.rstrip("?"): v for k, v in schema.items() if not k.endswith("?")}
    optional = {k.rstrip("?"): v for k, v in schema.items() if k.endswith("?")}
    for key in obj:
        if key not in required and key not in optional:
            raise ConfigurationError(f"unknown key {path}.{key}")
    for key, sub in required.items():
        if key not in obj:
            raise ConfigurationError(f"missing key {path}.{key}")
    for key, sub in {**required, **optional}.items():
        if key not in obj:
            continue
        val = obj[key]
        if isinstance(sub, dict) and sub is not dict:
            _validate(sub, val, f"{path}.{key}")
        elif sub is float:
            if not isinstance(val, (int, float)) or isinstance(val, bool):
                raise ConfigurationError(f"{path}.{key} must be a number")
        elif sub is int:
            if not isinstance(val, int) or isinstance(val, bool):
                raise ConfigurationError(f"{path}.{key} must be an integer")
        elif sub is str:
            if not isinstance(val, str):
                raise ConfigurationError(f"{path}.{key} must be a string")


def load_config(path) -> dict:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    _validate({k: (dict if k in ("initial_data",) else v) for k, v in _SCHEMA.items()}, raw)
    if raw["version"] != 1:
        raise ConfigurationError(f"unsupported config version {raw['version']!r}")
    preset = raw["initial_data"].get("preset")
    if preset not in _INITIAL_DATA_SCHEMAS:
        raise ConfigurationError(f"unknown initial_data.preset {preset!r}")
    _validate(_INITIAL_DATA_SCHEMAS[preset], raw["initial_data"], "config.initial_data")
    return raw


def fluid_config(raw: dict) -> FluidConfig:
    f = raw["fluid"]
    return FluidConfig(f["a_kappa"], f["a_mu"], f["a_rho"], f["h2"])


def grid_spec(raw: dict) -> GridSpec:
    g = raw["grid"]
    return GridSpec(int(g["n_points"]), float(g["domain_length"]))


def solver_options(raw: dict, overrides: dict | None = None) -> SolverOptions:
    s = dict(raw.get("solver", {}))
    s.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return SolverOptions(
        picard_tol=s.get("picard_tol", 1e-11),
        picard_max_iter=int(s.get("picard_max_iter", 80)),
        series_tol=s.get("series_tol", 1e-10),
        leakage_threshold=s.get("leakage_threshold", 1e-4),
        cfl_bound=s.get("cfl_bound", 1.0),
        order=int(s.get("order", 2)),
    )


def build_initial_data(raw: dict, grid: GridSpec) -> InterfaceField:
    spec = raw["initial_data"]
    L = grid.domain_length
    x = grid.nodes()
    preset = spec["preset"]
    if preset == "gaussian_bump":
        F = spec["amplitude"] * np.exp(-((x - L / 2.0) ** 2) / (2.0 * spec["width"] ** 2))
        return InterfaceField.from_samples(F, grid)
    if preset == "single_mode":
        F = spec["amplitude"] * np.cos(2.0 * np.pi * spec["k"] * x / L)
        return InterfaceField.from_samples(F, grid)
    if preset == "from_file":
        state, _, _, _ = load_checkpoint(spec["path"])
        if state.f.grid != grid:
            raise ConfigurationError("initial-data file grid does not match config grid")
        return InterfaceField(SpectralField(grid, state.f.coefficients, 0.0), 0.0)
    raise ConfigurationError(f"unknown preset {preset!r}")


def _fmt(v) -> str:
    return repr(float(v))


def _write_metadata(outdir: Path, raw: dict, cfg: FluidConfig, cert, status: dict,
                    started: float, finished: float) -> None:
    meta = {
        "schema_version": 1,
        "config": raw,
        "config_hash": cfg.hash(),
        "nu": None if cert is None or cert.nu is None else cert.nu,
        "certificate": None if cert is None else cert.to_dict(),
        "status": status,
        "versions": {"muskatjump": __version__, "numpy": np.__version__,
                     "python": ".".join(map(str, sys.version_info[:3]))},
    }
    body = json.dumps(meta, sort_keys=True, indent=1)
    meta_ts = json.loads(body)
    meta_ts["timestamps"] = {"started": started, "finished": finished}
    with open(outdir / "metadata.json", "w") as fh:
        json.dump(meta_ts, fh, sort_keys=True, indent=1)


def cmd_run(args) -> int:
    raw = load_config(args.config)
    cfg = fluid_config(raw)
    grid = grid_spec(raw)
    opts = solver_options(raw, {"picard_tol": args.picard_tol, "series_tol": args.series_tol,
                                "leakage_threshold": args.leakage_threshold})
    sched_raw = raw["schedule"]
    schedule = Schedule(float(sched_raw["t_end"]), float(sched_raw["dt"]),
                        int(sched_raw["snapshot_every"]))
    outdir = Path(args.output_dir
                  or raw.get("output", {}).get("directory")
                  or os.environ.get("MUSKATJUMP_OUTPUT_DIR")
                  or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    ckptdir = outdir / "checkpoints"
    ckptdir.mkdir(exist_ok=True)
    started = time.time()

    monitor = None
    start_step = 0
    if args.resume:
        f0, start_step, dt_saved, monitor = load_checkpoint(args.resume, cfg)
        if abs(dt_saved - schedule.dt) > 0:
            raise ConfigurationError("checkpoint dt differs from config dt")
        cert = None
    else:
        f0 = build_initial_data(raw, grid)
        cert = certify.certify_datum(f0, cfg)
        if args.require_certificate and cert.verdict != "admissible":
            print(f"datum is {cert.verdict}; refusing to run", file=sys.stderr)
            _write_metadata(outdir, raw, cfg, cert,
                            {"exit": EXIT_INADMISSIBLE, "reason": cert.verdict},
                            started, time.time())
            return EXIT_INADMISSIBLE

    csv_path = outdir / "trajectory.csv"
    csv_fh = open(csv_path, "w")
    csv_fh.write(",".join(_CSV_COLUMNS) + "\n")
    last_step = int(round(schedule.t_end / schedule.dt))

    def on_snapshot(step_index, state, rec, mon):
        row = rec.snapshot_rows()[-1]
        csv_fh.write(",".join(_fmt(row[c]) for c in _CSV_COLUMNS) + "\n")
        csv_fh.flush()
        if step_index % (schedule.snapshot_every * max(1, args.checkpoint_every)) == 0 \
                or step_index == last_step:
            save_checkpoint(ckptdir / f"ckpt_{step_index:08d}.json", state, cfg,
                            step_index, schedule.dt, mon)

    status = {"exit": EXIT_OK}
    rec = None
    try:
        rec = run(f0, cfg, schedule, opts, certificate=cert,
                  on_snapshot=on_snapshot, start_step=start_step, monitor=monitor)
    except GeometryError as exc:
        status = {"exit": EXIT_GEOMETRY, "reason": str(exc)}
    except (PicardDivergenceError, StepSizeError, BlowUpError) as exc:
        status = {"exit": EXIT_DIVERGENCE, "reason": str(exc)}
    finally:
        csv_fh.close()
    if status["exit"] == EXIT_OK and rec is not None and rec.budget_violated:
        status = {"exit": EXIT_BUDGET, "reason": "decay budget inequality violated"}
    _write_metadata(outdir, raw, cfg, cert if not args.resume else None, status,
                    started, time.time())
    if status["exit"] != EXIT_OK:
        print(status["reason"], file=sys.stderr)
    return status["exit"]


def cmd_certify(args) -> int:
    raw = load_config(args.config)
    cfg = fluid_config(raw)
    grid = grid_spec(raw)
    f0 = build_initial_data(raw, grid)
    cert = certify.certify_datum(f0, cfg)
    print(cert.to_json())
    print(f"{'quantity':<14}{'value':>18}", file=sys.stderr)
    rows = [("theta", cert.theta), ("a0", cert.a0), ("a1", cert.a1),
            ("k0", cert.k0), ("k1", cert.k1), ("nu", cert.nu)]
    rows += [(f"margin_s{s}", cert.margins[s]) for s in (0, 1, 2)]
    for name, val in rows:
        sval = "n/a" if val is None else f"{val:.12g}"
        print(f"{name:<14}{sval:>18}", file=sys.stderr)
    print(f"verdict: {cert.verdict}", file=sys.stderr)
    return EXIT_OK if cert.verdict == "admissible" else EXIT_INADMISSIBLE


def cmd_linear(args) -> int:
    raw = load_config(args.config)
    cfg = fluid_config(raw)
    grid = grid_spec(raw)
    modes = range(1, args.max_mode + 1)
    lines = ["k,xi,m_exact,m_measured,rel_err"]
    for k in modes:
        xi = 2.0 * np.pi * k / grid.domain_length
        m_exact = float(linear_symbol(xi, cfg))
        m_meas, rel = float("nan"), float("nan")
        if args.measure:
            m_meas = _measure_mode_rate(k, grid, cfg, args.amplitude)
            rel = abs(m_meas - m_exact) / abs(m_exact)
        lines.append(",".join([str(k), _fmt(xi), _fmt(m_exact), _fmt(m_meas), _fmt(rel)]))
    text = "\n".join(lines) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _measure_mode_rate(k: int, grid: GridSpec, cfg: FluidConfig, amplitude: float,
                       t_end: float = 0.2, dt: float = 0.01) -> float:
    x = grid.nodes()
    state = InterfaceField.from_samples(amplitude * np.cos(2.0 * np.pi * k * x / grid.domain_length), grid)
    c0 = abs(state.f.coefficients[k])
    opts = SolverOptions()
    n = int(round(t_end / dt))
    for _ in range(n):
        state = step(state, dt, cfg, opts)
    c1 = abs(state.f.coefficients[k])
    return float(-(np.log(c1) - np.log(c0)) / (n * dt))


def cmd_oracle_check(args) -> int:
    raw = load_config(args.config)
    cfg = fluid_config(raw)
    grid = grid_spec(raw)
    f0 = build_initial_data(raw, grid)
    F = f0.samples()
    L = grid.domain_length
    pair = solve_vorticity(f0, cfg)
    w1 = inverse(pair.omega1)
    w2 = inverse(pair.omega2)

    def rel(a, b):
        scale = max(np.max(np.abs(b)), 1e-300)
        return float(np.max(np.abs(a - b)) / scale)

    w2_oracle = oracle.quad_omega2(F, w1, cfg, L)
    t_fast = time.perf_counter()
    breakdown = rhs(f0, cfg)
    t_fast = time.perf_counter() - t_fast
    fast = sum(inverse(part) for part in
               (breakdown.i1, breakdown.i2, breakdown.i3, breakdown.i4)) / (2.0 * np.pi)
    if args.corrupt_fast:
        fast = fast * (1.0 + 1e-3)
    t_oracle = time.perf_counter()
    rhs_oracle = oracle.quad_rhs(F, w1, w2, cfg, L)
    t_oracle = time.perf_counter() - t_oracle

    u1f, u2f = oracle.quad_BR_trace(F, w1, w2, cfg, L, "fluid_curve")
    dF = inverse(f0.f.with_coefficients(
        f0.f.coefficients * 1j * grid.wavenumbers()))
    if cfg.a_mu != 0.0:
        tang = u1f + u2f * dF
        ident = w1 / (2.0 * cfg.a_mu) + cfg.a_rho * dF / cfg.a_mu
        br_res = float(np.max(np.abs(tang - ident)))
    else:
        br_res = 0.0
    u1s, _ = oracle.quad_BR_trace(F, w1, w2, cfg, L, "soil_curve")
    soil_res = float(np.max(np.abs(w2 - (-2.0 * cfg.a_kappa * u1s))))

    checks = {
        "omega2_rel": rel(w2, w2_oracle),
        "rhs_rel": rel(fast, rhs_oracle),
        "br_tangential_abs": br_res,
        "br_soil_abs": soil_res,
    }
    worst = max(checks.values())
    for name, val in checks.items():
        print(f"{name}: {val:.6e}")
    print(f"bound: {args.bound:.6e}  worst: {worst:.6e}")
    print(f"timing: fast path incl. strength solve {t_fast * 1e3:.1f} ms, "
          f"oracle quadrature given strengths {t_oracle * 1e3:.1f} ms")
    return EXIT_OK if worst <= args.bound else EXIT_ORACLE


def _sweep_worker(payload):
    config_path, outdir = payload
    args = argparse.Namespace(config=config_path, output_dir=outdir, resume=None,
                              require_certificate=False, checkpoint_every=1,
                              picard_tol=None, series_tol=None, leakage_threshold=None)
    return config_path, cmd_run(args)


def cmd_sweep(args) -> int:
    base = Path(args.output_dir)
    base.mkdir(parents=True, exist_ok=True)
    jobs = [(p, str(base / Path(p).stem)) for p in args.configs]
    worst = EXIT_OK
    with concurrent.futures.ProcessPoolExecutor(max_workers=args.threads) as pool:
        for cfg_path, code in pool.map(_sweep_worker, jobs):
            print(f"{cfg_path}: exit {code}")
            worst = max(worst, code)
    return worst


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="muskatjump",
                                description="interface evolution over a permeability jump")
    sub = p.add_subparsers(dest="command", required=True)

    pr = sub.add_parser("run", help="advance a trajectory and write CSV/metadata/checkpoints")
    pr.add_argument("--config", required=True)
    pr.add_argument("--output-dir", default=None)
    pr.add_argument("--require-certificate", action="store_true")
    pr.add_argument("--resume", default=None, help="checkpoint file to continue from")
    pr.add_argument("--checkpoint-every", type=int, default=1,
                    help="write a checkpoint every k-th snapshot")
    pr.add_argument("--picard-tol", type=float, default=None)
    pr.add_argument("--series-tol", type=float, default=None)
    pr.add_argument("--leakage-threshold", type=float, default=None)
    pr.set_defaults(func=cmd_run)

    pc = sub.add_parser("certify", help="print the admissibility certificate as JSON")
    pc.add_argument("--config", required=True)
    pc.set_defaults(func=cmd_certify)

    pl = sub.add_parser("linear", help="tabulate the exact dispersion relation")
    pl.add_argument("--config", required=True)
    pl.add_argument("--measure", action="store_true",
                    help="also measure modal decay rates from tiny-amplitude runs")
    pl.add_argument("--max-mode", type=int, default=8)
    pl.add_argument("--amplitude", type=float, default=1e-6)
    pl.add_argument("--output", default=None)
    pl.set_defaults(func=cmd_linear)

    po = sub.add_parser("oracle-check", help="compare fast paths against brute-force quadrature")
    po.add_argument("--config", required=True)
    po.add_argument("--bound", type=float, default=1e-6)
    po.add_argument("--corrupt-fast", action="store_true", help=argparse.SUPPRESS)
    po.set_defaults(func=cmd_oracle_check)

    ps = sub.add_parser("sweep", help="run several configs in parallel workers")
    ps.add_argument("configs", nargs="+")
    ps.add_argument("--output-dir", required=True)
    ps.add_argument("--threads", type=int, default=2)
    ps.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GeometryError as exc:
        print(f"geometry error: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY
    except (PicardDivergenceError, StepSizeError, BlowUpError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE


if __name__ == "__main__":
    sys.exit(main())
