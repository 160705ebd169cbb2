"""Command-line front end: sweeps, overhead tables, and a single demo run.

Config files are plain ``key = value`` lines with ``#`` comments and
comma-separated lists. Exit codes: 0 success, 1 config or I/O error,
2 infeasible scenario (demo only).
"""

from __future__ import annotations

import argparse
import io
import sys
from dataclasses import replace

import numpy as np

from . import estimators as est
from .channel import RisConfig, draw_channels, effective_channel
from .experiments import ESTIMATORS, ExperimentConfig, run_sweep
from .metrics import SCHEMES, aligned_nmse_columns, aligned_nmse_rows, nmse, overhead
from .pilots import build_pilot, ris_schedule, subgroup_plan

CSV_HEADER = "nt,nr,n,snr_db,estimator,trials,slots,nmse_total,nmse_h_aligned,nmse_g_aligned,wall_s"

_CONFIG_KEYS = {
    "nt": int,
    "nr": int,
    "n": int,
    "snr_db_list": "float_list",
    "trials": int,
    "estimators": "str_list",
    "master_seed": int,
    "pilot_power": float,
}


class ConfigError(ValueError):
    pass


def _parse_value(key, raw):
    kind = _CONFIG_KEYS[key]
    try:
        if kind == "float_list":
            return tuple(float(v.strip()) for v in raw.split(",") if v.strip())
        if kind == "str_list":
            return tuple(v.strip() for v in raw.split(",") if v.strip())
        return kind(raw)
    except ValueError as exc:
        raise ConfigError(f"bad value for key '{key}': {raw!r}") from exc


def parse_config_file(path) -> dict:
    """Read ``key = value`` lines; unknown keys are an error naming the key."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    values = {}
    for lineno, line in enumerate(lines, start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line.strip()!r}")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key '{key}'")
        values[key] = _parse_value(key, raw)
    return values


def _format_value(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)  # shortest round-trip decimal
    return str(value)


def _echo_lines(cfg: ExperimentConfig):
    return [
        f"# nt={cfg.nt}",
        f"# nr={cfg.nr}",
        f"# n={cfg.n}",
        "# snr_db_list=" + ",".join(repr(s) for s in cfg.snr_db_list),
        f"# trials={cfg.trials}",
        "# estimators=" + ",".join(cfg.estimators),
        f"# master_seed={cfg.master_seed}",
        f"# pilot_power={cfg.pilot_power!r}",
    ]


def write_records(records, path, config: ExperimentConfig | None = None):
    """Emit records as CSV (path '-' streams to standard output)."""
    buf = io.StringIO()
    if config is not None:
        for line in _echo_lines(config):
            buf.write(line + "\n")
    buf.write(CSV_HEADER + "\n")
    for rec in records:
        fields = (
            rec.nt, rec.nr, rec.n, rec.snr_db, rec.estimator, rec.trials,
            rec.slots, rec.nmse_total, rec.nmse_h_aligned, rec.nmse_g_aligned,
            rec.wall_s,
        )
        buf.write(",".join(_format_value(f) for f in fields) + "\n")
    text = buf.getvalue()
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _cmd_sweep(args) -> int:
    values = parse_config_file(args.config)
    for key in ("nt", "nr", "n", "snr_db_list"):
        if key not in values:
            raise ConfigError(f"config file {args.config} is missing key '{key}'")
    if args.seed is not None:
        values["master_seed"] = args.seed
    if args.trials is not None:
        values["trials"] = args.trials
    if args.svg and args.out == "-":
        raise ConfigError("--svg needs a file output path, not '-'")
    try:
        cfg = ExperimentConfig(**values)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    records = run_sweep(cfg)
    if not args.timing:
        # Measured wall time varies run to run; zero it so identical
        # config + seed gives byte-identical output.
        records = [replace(r, wall_s=0.0) for r in records]
    write_records(records, args.out, config=cfg)
    if args.svg:
        from .plotting import save_nmse_figure

        svg_path = _sibling_svg_path(args.out)
        save_nmse_figure(records, svg_path)
        print(f"figure written to {svg_path}", file=sys.stderr)
    return 0


def _sibling_svg_path(out_path: str) -> str:
    stem = out_path[: -len(".csv")] if out_path.endswith(".csv") else out_path
    return stem + ".svg"


def _cmd_overhead(args) -> int:
    reports = [overhead(scheme, args.nt, args.nr, args.n) for scheme in SCHEMES]
    width = max(len(s) for s in SCHEMES)
    print(f"pilot overhead for nt={args.nt} nr={args.nr} n={args.n}")
    for rep in reports:
        print(
            f"  {rep.scheme:<{width}}  slots={rep.slots:<6d} "
            f"reduction_vs_lskrf={100.0 * rep.reduction_vs_lskrf:6.2f}%"
        )
    lines = ["scheme,nt,nr,n,slots,reduction_vs_lskrf"]
    for rep in reports:
        lines.append(
            f"{rep.scheme},{rep.nt},{rep.nr},{rep.n},{rep.slots},{rep.reduction_vs_lskrf!r}"
        )
    text = "\n".join(lines) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return 0


def _cmd_demo(args) -> int:
    nt, nr, n = args.nt, args.nr, args.n
    pilot = build_pilot(nt)
    plan = subgroup_plan(n, nt, nr, subgroup_size=args.subgroup_size)
    configs = ris_schedule(plan)
    realization = draw_channels(nt, nr, n, args.seed)
    truth_cfg = RisConfig.all_on(n)
    h_t_true = effective_channel(realization, truth_cfg)

    # Noise-free pass: the estimator should reproduce the channel exactly.
    clean = [
        (est.simulate_rx(effective_channel(realization, cfg), pilot, 0.0), cfg)
        for cfg in configs
    ]
    result = est.estimate_separate(clean, pilot, plan)
    clean_err = np.linalg.norm(result.H_T_hat - h_t_true) / np.linalg.norm(h_t_true)
    print(f"scenario nt={nt} nr={nr} n={n}, {plan.num_groups} subgroups of <= {plan.subgroup_size}")
    print(f"noise-free reconstruction: relative error {clean_err:.3e}")

    sigma2 = 1.0 / 10.0 ** (args.snr / 10.0)
    rng = np.random.default_rng(args.seed)
    noisy = [
        (est.simulate_rx(effective_channel(realization, cfg), pilot, sigma2, rng), cfg)
        for cfg in configs
    ]
    noisy_result = est.estimate_separate(noisy, pilot, plan)
    print(f"snr {args.snr:.1f} dB: total-channel NMSE {nmse(noisy_result.H_T_hat, h_t_true):.3e}")
    print(f"  rx-side links, phase-aligned NMSE {aligned_nmse_columns(noisy_result.H_hat, realization.H):.3e}")
    print(f"  tx-side links, phase-aligned NMSE {aligned_nmse_rows(noisy_result.G_hat, realization.G):.3e}")
    print(f"  training slots used: {noisy_result.slots_used}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="riscade",
        description="Separate cascaded-channel estimation experiments for RIS-assisted MIMO",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="run a Monte Carlo sweep from a config file")
    p_sweep.add_argument("--config", required=True, help="key = value config file")
    p_sweep.add_argument("--seed", type=int, default=None, help="override master seed")
    p_sweep.add_argument("--trials", type=int, default=None, help="override trial count")
    p_sweep.add_argument("--out", default="sweep.csv", help="CSV path ('-' for stdout)")
    p_sweep.add_argument("--svg", action="store_true", help="render a sibling SVG figure")
    p_sweep.add_argument(
        "--timing", action="store_true",
        help="emit measured wall seconds (breaks byte-reproducible output)",
    )

    p_over = sub.add_parser("overhead", help="slot counts for every scheme")
    p_over.add_argument("--nt", type=int, required=True)
    p_over.add_argument("--nr", type=int, required=True)
    p_over.add_argument("--n", type=int, required=True)
    p_over.add_argument("--out", default="overhead.csv", help="CSV path ('-' for stdout)")

    p_demo = sub.add_parser("demo", help="single-scenario sanity run")
    p_demo.add_argument("--nt", type=int, required=True)
    p_demo.add_argument("--nr", type=int, required=True)
    p_demo.add_argument("--n", type=int, required=True)
    p_demo.add_argument("--snr", type=float, required=True, help="SNR in dB")
    p_demo.add_argument("--seed", type=int, default=0)
    p_demo.add_argument(
        "--subgroup-size", type=int, default=None,
        help="override the min(Nt, Nr) subgroup size",
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "overhead":
            return _cmd_overhead(args)
        return _cmd_demo(args)
    except est.FeasibilityError as exc:
        print(f"error: infeasible scenario: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
