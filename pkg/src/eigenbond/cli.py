"""Command-line front end: price bonds, reproduce benchmarks, time runs.

Subcommands
-----------
price       value a bond from a JSON config or the built-in preset
reproduce   recompute a published benchmark table with abs-diff columns
bench       wall-time statistics per full bond pricing at three tolerances

Exit codes: 0 success, 2 invalid input/config, 3 numerical failure.
``EIGENBOND_THREADS`` caps the worker fan-out across independent table
columns; output order is deterministic regardless.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import statistics
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from . import __version__, benchmark
from .errors import EigenbondError, ValidationError
from .models import DiffusionModel, make_model
from .pricer import BondSchedule, PricingResult, price_bond
from .subordinators import SubordinatorSpec, invert_short_rate

_TABLE_IDS = ("T3", "T4", "T5", "T6", "T7", "T9", "T10")

_EPS_VALUES = 1e-7  # value tables (criterion tolerance is stated at this eps)
_EPS_VALUES_SUB = 1e-8  # subordinated/putable value tables
_EPS_ROOTS = 1e-10  # break-even tables


# ---------------------------------------------------------------------------
# Config handling
# ---------------------------------------------------------------------------

_MODEL_KEYS = {"kind", "kappa", "theta", "sigma"}
_SUB_KEYS = {"family", "drift", "mu", "nu_var", "c", "p", "eta"}
_SCHEDULE_KEYS = {
    "coupon",
    "coupon_times",
    "protection_index",
    "notice_delta",
    "call_prices",
    "put_prices",
}
_RUN_KEYS = {"rates", "eps", "output", "format", "seed"}
_TOP_KEYS = {"model", "subordinator", "schedule", "run"}


def _reject_unknown(block: dict, allowed: set, where: str) -> None:
    unknown = set(block) - allowed
    if unknown:
        raise ValidationError(f"unknown keys in {where}: {sorted(unknown)}")


def parse_config(doc: dict) -> dict:
    """Validate the four-block config document and build typed objects."""
    if not isinstance(doc, dict):
        raise ValidationError("config must be a JSON object")
    _reject_unknown(doc, _TOP_KEYS, "config")
    for block in ("model", "schedule", "run"):
        if block not in doc:
            raise ValidationError(f"config missing required block {block!r}")

    model_block = doc["model"]
    _reject_unknown(model_block, _MODEL_KEYS, "model block")
    for key in ("kind", "kappa", "theta", "sigma"):
        if key not in model_block:
            raise ValidationError(f"model block missing {key!r}")
    model = make_model(
        model_block["kind"],
        float(model_block["kappa"]),
        float(model_block["theta"]),
        float(model_block["sigma"]),
    )

    sub_block = doc.get("subordinator") or {"family": "none"}
    _reject_unknown(sub_block, _SUB_KEYS, "subordinator block")
    sub = SubordinatorSpec(
        family=sub_block.get("family", "none"),
        drift=float(sub_block.get("drift", 0.0)),
        mu=sub_block.get("mu"),
        nu_var=sub_block.get("nu_var"),
        c=sub_block.get("c"),
        p=sub_block.get("p"),
        eta=sub_block.get("eta"),
    )

    sched_block = doc["schedule"]
    _reject_unknown(sched_block, _SCHEDULE_KEYS, "schedule block")
    for key in ("coupon", "coupon_times", "protection_index", "notice_delta"):
        if key not in sched_block:
            raise ValidationError(f"schedule block missing {key!r}")
    schedule = BondSchedule(
        coupon=float(sched_block["coupon"]),
        coupon_times=tuple(sched_block["coupon_times"]),
        protection_index=int(sched_block["protection_index"]),
        notice_delta=float(sched_block["notice_delta"]),
        call_prices=tuple(sched_block["call_prices"])
        if sched_block.get("call_prices") is not None
        else None,
        put_prices=tuple(sched_block["put_prices"])
        if sched_block.get("put_prices") is not None
        else None,
    )

    run_block = doc["run"]
    _reject_unknown(run_block, _RUN_KEYS, "run block")
    rates = [float(r) for r in run_block.get("rates", [])]
    if not rates:
        raise ValidationError("run block must list at least one initial rate")
    eps = float(run_block.get("eps", 1e-7))
    fmt = run_block.get("format", "table")
    if fmt not in ("csv", "table"):
        raise ValidationError(f"format must be 'csv' or 'table', got {fmt!r}")
    return {
        "model": model,
        "sub": sub,
        "schedule": schedule,
        "rates": rates,
        "eps": eps,
        "output": run_block.get("output"),
        "format": fmt,
        "seed": run_block.get("seed"),
    }


def preset_config(
    name: str,
    model_name: str,
    include_put: bool = False,
    rates=None,
    eps: float = 1e-7,
) -> dict:
    """Config document for a built-in preset (currently 'swiss1987')."""
    if name != "swiss1987":
        raise ValidationError(f"unknown preset {name!r}")
    if model_name not in benchmark.BENCHMARK_CONFIGS:
        raise ValidationError(
            f"unknown benchmark model {model_name!r}; expected one of "
            f"{benchmark.BENCHMARK_CONFIGS}"
        )
    model = benchmark.benchmark_model(model_name)
    sub = benchmark.benchmark_subordinator(model_name)
    sched = benchmark.swiss1987_schedule(include_put=include_put)
    doc = {
        "model": {
            "kind": model.kind,
            "kappa": model.kappa,
            "theta": model.theta,
            "sigma": model.sigma,
        },
        "subordinator": {"family": sub.family}
        if sub.is_trivial
        else {
            "family": sub.family,
            "drift": sub.drift,
            "mu": sub.mu,
            "nu_var": sub.nu_var,
        },
        "schedule": {
            "coupon": sched.coupon,
            "coupon_times": list(sched.coupon_times),
            "protection_index": sched.protection_index,
            "notice_delta": sched.notice_delta,
            "call_prices": list(sched.call_prices) if sched.call_prices else None,
            "put_prices": list(sched.put_prices) if sched.put_prices else None,
        },
        "run": {
            "rates": list(rates) if rates is not None else [0.01 * i for i in range(1, 11)],
            "eps": eps,
            "format": "table",
        },
    }
    return doc


def _worker_count() -> int:
    raw = os.environ.get("EIGENBOND_THREADS", "")
    try:
        n = int(raw) if raw else 1
    except ValueError:
        raise ValidationError(f"EIGENBOND_THREADS must be an integer, got {raw!r}")
    return max(1, n)


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------


def _fmt(value, digits=8) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "n.a."
    return f"{value:.{digits}f}"


def _emit(lines: list[str], output: str | None) -> None:
    text = "\n".join(lines) + "\n"
    if output:
        with open(output, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _csv_header(title: str, eps: float) -> str:
    return f"# eigenbond {__version__} {title} eps={eps:.1e}"


# ---------------------------------------------------------------------------
# price
# ---------------------------------------------------------------------------


def _initial_states(model: DiffusionModel, sub: SubordinatorSpec, rates) -> list[float]:
    """Map quoted short rates to states; inverts r_phi for jump models."""
    if sub.is_trivial:
        return [float(r) for r in rates]
    return [invert_short_rate(model, sub, float(r)) for r in rates]


def _price_lines(cfg: dict) -> list[str]:
    model, sub, sched = cfg["model"], cfg["sub"], cfg["schedule"]
    states = _initial_states(model, sub, cfg["rates"])
    result = price_bond(model, sub, sched, states, eps=cfg["eps"])
    recs = sorted(result.dates, key=lambda d: -d.index)
    if cfg["format"] == "csv":
        header = ["rate", "value", "issue_level"]
        for rec in recs:
            header += [f"call_rate_{rec.index}", f"put_rate_{rec.index}"]
        lines = [_csv_header(f"price model={model.kind} sub={sub.family}", cfg["eps"])]
        lines.append(",".join(header))
        for rate, value, lvl in zip(cfg["rates"], result.values, result.value_levels):
            row = [f"{rate:.6f}", f"{value:.6f}", str(lvl)]
            for rec in recs:
                row += [_fmt(rec.call_rate), _fmt(rec.put_rate)]
            lines.append(",".join(row))
        return lines
    lines = [f"bond values (model={model.kind}, subordinator={sub.family}, eps={cfg['eps']:.1e})"]
    lines.append(f"{'rate':>8}  {'value':>10}")
    for rate, value in zip(cfg["rates"], result.values):
        lines.append(f"{rate:8.4f}  {value:10.6f}")
    if recs:
        lines.append("")
        lines.append("break-even short rates per decision date")
        lines.append(f"{'date':>6} {'tau':>9} {'call':>12} {'put':>12} {'avg N':>7} {'max N':>6}")
        for rec in recs:
            lines.append(
                f"{rec.index:>6} {rec.decision_time:9.4f} {_fmt(rec.call_rate):>12} "
                f"{_fmt(rec.put_rate):>12} {rec.average_level:7.1f} {rec.max_level:>6}"
            )
    return lines


def cmd_price(args) -> int:
    if args.config:
        with open(args.config) as handle:
            doc = json.load(handle)
    else:
        doc = preset_config(args.preset, args.model, include_put=args.include_put)
    if args.rates is not None:
        doc["run"]["rates"] = [float(tok) for tok in args.rates.split(",") if tok]
    if args.eps is not None:
        doc["run"]["eps"] = args.eps
    if args.format:
        doc["run"]["format"] = args.format
    if args.output:
        doc["run"]["output"] = args.output
    if args.seed is not None:
        doc["run"]["seed"] = args.seed
    cfg = parse_config(doc)
    _emit(_price_lines(cfg), cfg["output"])
    return 0


# ---------------------------------------------------------------------------
# reproduce
# ---------------------------------------------------------------------------


def _reference_column(table: str, config: str, block: str | None = None):
    """Golden values with documented errata substituted."""
    if table in ("callable_values", "callable_putable_values"):
        ref = list(benchmark.REFERENCE[table][config])
        err = benchmark.ERRATA.get(table, {}).get(config)
        if err is not None:
            ref = list(err)
        return ref
    if table == "callable_break_even":
        ref = list(benchmark.REFERENCE[table][config])
        for pos, fixed in benchmark.ERRATA.get(table, {}).get(config, {}).items():
            ref[pos] = fixed
        return ref
    if table == "callable_putable_break_even":
        ref = list(benchmark.REFERENCE[table][config][block])
        err = benchmark.ERRATA.get(table, {}).get(config)
        if err is not None:
            ref = list(err[block])
        return ref
    raise KeyError(table)


def _run_config(config: str, include_put: bool, rates, eps: float) -> PricingResult:
    model = benchmark.benchmark_model(config)
    sub = benchmark.benchmark_subordinator(config)
    sched = benchmark.swiss1987_schedule(include_put=include_put)
    states = _initial_states(model, sub, rates)
    return price_bond(model, sub, sched, states, eps=eps)


def _map_columns(fn, configs):
    workers = _worker_count()
    if workers == 1:
        return [fn(c) for c in configs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, configs))


def _value_table_lines(table_id: str) -> list[str]:
    include_put = table_id == "T10"
    ref_key = "callable_putable_values" if include_put else "callable_values"
    configs = {
        "T5": ("cir",),
        "T6": ("vasicek",),
        "T7": ("subcir_jd", "subcir_pj", "subvasicek_jd", "subvasicek_pj"),
        "T10": benchmark.BENCHMARK_CONFIGS,
    }[table_id]
    eps = _EPS_VALUES if table_id in ("T5", "T6") else _EPS_VALUES_SUB
    rates = list(benchmark.RATES)
    results = _map_columns(
        lambda c: _run_config(c, include_put, rates, eps).values, configs
    )
    lines = [_csv_header(f"reproduce {table_id}", eps)]
    header = ["rate"]
    for config in configs:
        header += [config, f"{config}_absdiff"]
    lines.append(",".join(header))
    for i, rate in enumerate(rates):
        row = [f"{rate:.2f}"]
        for config, values in zip(configs, results):
            ref = _reference_column(ref_key, config)[i]
            row += [f"{values[i]:.6f}", f"{abs(values[i] - ref):.2e}"]
        lines.append(",".join(row))
    return lines


def _break_even_lines(table_id: str) -> list[str]:
    include_put = table_id == "T9"
    configs = benchmark.BENCHMARK_CONFIGS
    results = _map_columns(
        lambda c: _run_config(c, include_put, [0.05], _EPS_ROOTS), configs
    )
    lines = [_csv_header(f"reproduce {table_id}", _EPS_ROOTS)]
    blocks = ("call", "put") if include_put else ("call",)
    for block in blocks:
        header = ["date"]
        for config in configs:
            header += [f"{config}_{block}", f"{config}_{block}_absdiff"]
        lines.append(",".join(header))
        for pos in range(10):
            index = 20 - pos
            row = [f"tau_{index}"]
            for config, res in zip(configs, results):
                rec = next(d for d in res.dates if d.index == index)
                mine = rec.call_rate if block == "call" else rec.put_rate
                if include_put:
                    ref = _reference_column(
                        "callable_putable_break_even", config, block
                    )[pos]
                else:
                    ref = _reference_column("callable_break_even", config)[pos]
                if mine is None and (ref is None or math.isnan(ref)):
                    row += ["n.a.", "0"]
                elif mine is None or ref is None or math.isnan(ref):
                    row += [_fmt(mine), "mismatch"]
                else:
                    row += [f"{mine:.8f}", f"{abs(mine - ref):.2e}"]
            lines.append(",".join(row))
    return lines


def _profile_lines() -> list[str]:
    lines = [f"# eigenbond {__version__} reproduce T4 (eps per row)"]
    lines.append(
        "# avg_N is bracket-dependent and matched in order of magnitude only"
    )
    lines.append("config,eps,pricing_error_est,max_N_per_date,avg_N_per_date,ms")
    for config in benchmark.BENCHMARK_CONFIGS:
        model = benchmark.benchmark_model(config)
        sub = benchmark.benchmark_subordinator(config)
        sched = benchmark.swiss1987_schedule()
        states = _initial_states(model, sub, [0.05])
        prev_value = None
        for eps in (1e-5, 1e-6, 1e-7, 1e-8):
            start = time.perf_counter()
            res = price_bond(model, sub, sched, states, eps=eps)
            elapsed = 1e3 * (time.perf_counter() - start)
            if prev_value is not None:
                err = abs(prev_value - res.values[0])
                recs = sorted(prev_res.dates, key=lambda d: -d.index)
                max_n = [r.max_level for r in recs] + [prev_res.value_levels[0]]
                avg_n = [round(r.average_level, 1) for r in recs] + [
                    prev_res.value_levels[0]
                ]
                lines.append(
                    ",".join(
                        [
                            config,
                            f"{prev_eps:.0e}",
                            f"{err:.1e}",
                            ";".join(str(v) for v in max_n),
                            ";".join(str(v) for v in avg_n),
                            f"{prev_ms:.1f}",
                        ]
                    )
                )
            prev_value, prev_res, prev_eps, prev_ms = res.values[0], res, eps, elapsed
    return lines


def cmd_reproduce(args) -> int:
    table_id = args.table.upper()
    if table_id not in _TABLE_IDS:
        raise ValidationError(f"unknown table {args.table!r}; expected one of {_TABLE_IDS}")
    if table_id in ("T5", "T6", "T7", "T10"):
        lines = _value_table_lines(table_id)
    elif table_id in ("T3", "T9"):
        lines = _break_even_lines(table_id)
    else:
        lines = _profile_lines()
    _emit(lines, args.output)
    return 0


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------


def cmd_bench(args) -> int:
    if args.repetitions < 10:
        raise ValidationError("bench needs at least 10 repetitions")
    if args.config:
        with open(args.config) as handle:
            cfg = parse_config(json.load(handle))
        model, sub, sched = cfg["model"], cfg["sub"], cfg["schedule"]
        rates = cfg["rates"][:1]
    else:
        model = benchmark.benchmark_model(args.model)
        sub = benchmark.benchmark_subordinator(args.model)
        sched = benchmark.swiss1987_schedule(include_put=args.include_put)
        rates = [0.05]
    states = _initial_states(model, sub, rates)
    lines = [f"bench model={model.kind} sub={sub.family} reps={args.repetitions}"]
    lines.append(f"{'eps':>8} {'median ms':>10} {'p95 ms':>10}")
    for eps in (1e-5, 1e-6, 1e-7):
        times = []
        for _ in range(args.repetitions):
            start = time.perf_counter()
            price_bond(model, sub, sched, states, eps=eps)
            times.append(1e3 * (time.perf_counter() - start))
        times.sort()
        median = statistics.median(times)
        p95 = times[min(len(times) - 1, int(round(0.95 * (len(times) - 1))))]
        lines.append(f"{eps:8.0e} {median:10.2f} {p95:10.2f}")
    _emit(lines, args.output)
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eigenbond",
        description="Callable/putable bond pricing by eigenfunction expansions",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_price = sub.add_parser("price", help="value a bond")
    p_price.add_argument("--config", help="JSON config path")
    p_price.add_argument("--preset", default="swiss1987", help="built-in preset name")
    p_price.add_argument(
        "--model",
        default="cir",
        help="benchmark model for preset runs "
        f"({', '.join(benchmark.BENCHMARK_CONFIGS)})",
    )
    p_price.add_argument("--include-put", action="store_true", help="add the put ladder")
    p_price.add_argument("--rates", help="comma-separated initial short rates")
    p_price.add_argument("--eps", type=float, help="relative series tolerance")
    p_price.add_argument("--format", choices=("csv", "table"))
    p_price.add_argument("--output", help="write to file instead of stdout")
    p_price.add_argument("--seed", type=int, help="seed for oracle-backed runs")
    p_price.set_defaults(func=cmd_price)

    p_rep = sub.add_parser("reproduce", help="recompute a published table as CSV")
    p_rep.add_argument("--table", required=True, help=f"one of {', '.join(_TABLE_IDS)}")
    p_rep.add_argument("--output", help="write CSV to file instead of stdout")
    p_rep.set_defaults(func=cmd_reproduce)

    p_bench = sub.add_parser("bench", help="time full bond pricings")
    p_bench.add_argument("--config", help="JSON config path")
    p_bench.add_argument("--model", default="cir")
    p_bench.add_argument("--include-put", action="store_true")
    p_bench.add_argument("--repetitions", type=int, default=20)
    p_bench.add_argument("--output")
    p_bench.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EigenbondError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
