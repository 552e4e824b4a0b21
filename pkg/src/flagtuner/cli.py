"""Command-line campaign runner.

Subcommands: ric, ce, suite-ce, oracle, report, xval, predict-1nn.

Campaigns are described by a JSON config file (paths to the flag space,
suite or synthetic model, cache file, plus seed and algorithm parameters)
and write their artifacts into an output directory: trace file, final
configuration, resume checkpoint and a summary. Artifact files are
byte-reproducible for identical inputs and seed; timestamps go only to
run.log.

Exit codes: 0 success, 1 usage/parse error, 2 campaign failure,
3 interrupted with a valid checkpoint.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from statistics import fmean

from flagtuner.analysis import (
    compare_to_baseline,
    floored_best_so_far,
    load_features,
    make_folds,
    performance_table,
    predict_1nn,
    run_xval,
)
from flagtuner.artifacts import (
    file_digest,
    read_checkpoint,
    read_trace,
    write_checkpoint,
    write_compare,
    write_final_config,
    write_series,
    write_trace,
)
from flagtuner.evaluator import (
    CacheLockedError,
    CommandEvaluator,
    EvalCache,
    SyntheticEvaluator,
    load_suite,
    load_synthetic_model,
)
from flagtuner.flagspace import FlagSpaceError, load_flag_space, render_args
from flagtuner.oracle import (
    DEFAULT_MAX_FLAGS,
    per_benchmark_optimum,
    suite_constrained_optimum,
)
from flagtuner.search import (
    BudgetedEvaluator,
    CampaignError,
    CampaignInterrupted,
    CampaignTrace,
    CEState,
    SuiteCEParams,
    best_known_record,
    run_ce,
    run_ric,
    run_suite_ce,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CAMPAIGN = 2
EXIT_INTERRUPTED = 3


class ConfigError(ValueError):
    """Bad campaign config file or inconsistent resume request."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors are exit code 1, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class CampaignConfig:
    path: Path
    flag_space: Path
    mode: str
    model: Path | None
    suite: Path | None
    cache: str
    out_dir: Path | None
    seed: int
    n_configs: int
    threshold_t: float
    aggregate: str
    k: int
    benchmark: str | None
    benchmarks: list[str] | None


def load_campaign_config(path: str | Path, seed_override: int | None = None) -> CampaignConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    base = path.parent

    def resolve(key: str, required: bool) -> Path | None:
        value = data.get(key)
        if value is None:
            if required:
                raise ConfigError(f"{path}: missing required field {key!r}")
            return None
        p = Path(value)
        if not p.is_absolute():
            p = base / p
        if not p.exists():
            raise ConfigError(f"{path}: {key} file not found: {p}")
        return p

    mode = data.get("mode", "synthetic")
    if mode not in ("synthetic", "external"):
        raise ConfigError(f"{path}: mode must be 'synthetic' or 'external'")
    cfg = CampaignConfig(
        path=path,
        flag_space=resolve("flag_space", required=True),
        mode=mode,
        model=resolve("model", required=(mode == "synthetic")),
        suite=resolve("suite", required=(mode == "external")),
        cache=str(data.get("cache", "cache.jsonl")),
        out_dir=(base / data["out_dir"]) if "out_dir" in data else None,
        seed=int(data.get("seed", 0)) if seed_override is None else seed_override,
        n_configs=int(data.get("n_configs", 100)),
        threshold_t=float(data.get("threshold_t", 0.0)),
        aggregate=str(data.get("aggregate", "mean")),
        k=int(data.get("k", 10)),
        benchmark=data.get("benchmark"),
        benchmarks=list(data["benchmarks"]) if data.get("benchmarks") else None,
    )
    return cfg


def input_digests(cfg: CampaignConfig) -> dict[str, str]:
    return {
        "flag_space": file_digest(cfg.flag_space),
        "model": file_digest(cfg.model) if cfg.model else "",
        "suite": file_digest(cfg.suite) if cfg.suite else "",
    }


@dataclass
class Campaign:
    cfg: CampaignConfig
    out: Path
    space: object
    evaluator: object
    counters: object  # the concrete evaluator carrying executions/cache_hits
    benchmarks: list[str]
    cache: EvalCache


def build_campaign(cfg: CampaignConfig, out: Path, max_evals: int | None = None) -> Campaign:
    out.mkdir(parents=True, exist_ok=True)
    try:
        space = load_flag_space(cfg.flag_space)
    except (FlagSpaceError, json.JSONDecodeError) as exc:
        raise ConfigError(f"{cfg.flag_space}: {exc}") from exc
    cache_path = Path(cfg.cache)
    if not cache_path.is_absolute():
        cache_path = out / cache_path
    cache = EvalCache(cache_path)
    if cfg.mode == "synthetic":
        try:
            model = load_synthetic_model(cfg.model)
            evaluator = SyntheticEvaluator(space, model, cache)
        except (ValueError, KeyError) as exc:
            cache.close()
            raise ConfigError(f"{cfg.model}: {exc}") from exc
        available = evaluator.benchmarks
    else:
        try:
            suite = load_suite(cfg.suite)
        except (ValueError, KeyError) as exc:
            cache.close()
            raise ConfigError(f"{cfg.suite}: {exc}") from exc
        evaluator = CommandEvaluator(
            space, suite, cache, workdir=cfg.suite.parent, build_dir=out / "build"
        )
        available = evaluator.benchmarks
    benchmarks = available
    if cfg.benchmarks is not None:
        missing = [b for b in cfg.benchmarks if b not in available]
        if missing:
            cache.close()
            raise ConfigError(f"unknown benchmarks in config: {missing}")
        benchmarks = list(cfg.benchmarks)
    counters = evaluator
    if max_evals is not None:
        evaluator = BudgetedEvaluator(evaluator, max_evals)
    return Campaign(cfg, out, space, evaluator, counters, benchmarks, cache)


def _log(out: Path, message: str) -> None:
    with open(out / "run.log", "a", encoding="utf-8") as fh:
        fh.write(f"{datetime.now().isoformat()} {message}\n")


def _write_summary(out: Path, lines: list[str]) -> None:
    (out / "summary.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    for line in lines:
        print(line)


def _check_resume(resume: str, command: str, cfg: CampaignConfig) -> None:
    ck = read_checkpoint(resume)
    if ck.get("command") != command:
        raise ConfigError(f"checkpoint is for {ck.get('command')!r}, not {command!r}")
    if ck.get("seed") != cfg.seed:
        raise ConfigError(f"checkpoint seed {ck.get('seed')} != requested seed {cfg.seed}")
    if ck.get("inputs") != input_digests(cfg):
        raise ConfigError("checkpoint input files differ from the current config")


def _interrupted(
    camp: Campaign,
    command: str,
    trace: CampaignTrace,
    trace_path: Path,
    params: dict,
    state: CEState | None,
    progress: dict | None = None,
) -> int:
    write_trace(trace_path, trace)
    write_checkpoint(
        camp.out / "checkpoint.json",
        command=command,
        status="interrupted",
        seed=camp.cfg.seed,
        input_digests=input_digests(camp.cfg),
        params=params,
        state=state,
        progress={"records": len(trace), **(progress or {})},
    )
    _log(camp.out, f"{command} interrupted after {len(trace)} trace records")
    print(
        f"{command}: interrupted; checkpoint written to {camp.out / 'checkpoint.json'}",
        file=sys.stderr,
    )
    return EXIT_INTERRUPTED


def _baseline_reference(trace: CampaignTrace) -> dict[str, float]:
    rec = trace.records[0]
    if rec.annotation != "baseline":
        raise ValueError("trace does not start with a baseline record")
    refs = {b: m.time for b, m in rec.measurements.items() if m.ok}
    if not refs:
        raise ValueError("baseline record has no ok measurements")
    return refs


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_ric(args) -> int:
    cfg = load_campaign_config(args.config, args.seed)
    out = Path(args.out) if args.out else (cfg.out_dir or Path("out"))
    camp = build_campaign(cfg, out, args.max_evals)
    if args.resume:
        _check_resume(args.resume, "ric", cfg)
    params = {"n_configs": cfg.n_configs}
    trace = CampaignTrace()
    trace_path = out / "ric.trace"
    _log(out, f"ric start seed={cfg.seed} n_configs={cfg.n_configs}")
    try:
        run_ric(camp.space, camp.benchmarks, camp.evaluator, cfg.n_configs, cfg.seed, trace=trace)
    except (CampaignInterrupted, KeyboardInterrupt):
        return _interrupted(camp, "ric", trace, trace_path, params, None)
    finally:
        camp.cache.close()
    write_trace(trace_path, trace)

    best = {}
    for bench in camp.benchmarks:
        try:
            _, rec, meas = best_known_record([trace], bench)
        except CampaignError:
            best[bench] = {"error": "no ok measurement"}
            continue
        best[bench] = {
            "base_level": rec.config.base_level,
            "bitstring": rec.config.bitstring,
            "time": meas.time,
            "args": render_args(camp.space, rec.config),
        }
    (out / "ric.best.json").write_text(json.dumps(best, indent=2) + "\n", encoding="utf-8")
    write_checkpoint(
        out / "checkpoint.json",
        command="ric",
        status="complete",
        seed=cfg.seed,
        input_digests=input_digests(cfg),
        params=params,
        progress={"records": len(trace)},
    )
    try:
        final = floored_best_so_far(trace, _baseline_reference(trace)).points[-1][1]
        ratio_text = f"{final:.6g}"
    except ValueError:
        ratio_text = "n/a"
    _write_summary(
        out,
        [
            f"ric: evaluations={camp.counters.executions} cache_hits={camp.counters.cache_hits} "
            f"configs_tested={len(trace)} floored_best_ratio={ratio_text}"
        ],
    )
    _log(out, "ric complete")
    return EXIT_OK


def cmd_ce(args) -> int:
    cfg = load_campaign_config(args.config, args.seed)
    out = Path(args.out) if args.out else (cfg.out_dir or Path("out"))
    camp = build_campaign(cfg, out, args.max_evals)
    if args.resume:
        _check_resume(args.resume, "ce", cfg)
    targets = [cfg.benchmark] if cfg.benchmark else camp.benchmarks
    unknown = [b for b in targets if b not in camp.benchmarks]
    if unknown:
        camp.cache.close()
        raise ConfigError(f"unknown benchmark: {unknown}")
    params = {"benchmarks": targets}
    summary = []
    completed: list[str] = []
    _log(out, f"ce start targets={targets}")
    try:
        for bench in targets:
            trace = CampaignTrace()
            state = CEState()
            trace_path = out / f"ce_{bench}.trace"
            try:
                config, _ = run_ce(camp.space, bench, camp.evaluator, trace=trace, state=state)
            except (CampaignInterrupted, KeyboardInterrupt):
                return _interrupted(
                    camp, "ce", trace, trace_path, params, state,
                    progress={"completed": completed, "current": bench},
                )
            write_trace(trace_path, trace)
            write_final_config(out / f"ce_{bench}.config.json", camp.space, config)
            base_time = trace.records[0].measurements[bench].time
            final_time = best_known_record([trace], bench)[2].time
            summary.append(
                f"ce {bench}: configs_tested={len(trace)} final_ratio={final_time / base_time:.6g}"
            )
            completed.append(bench)
    finally:
        camp.cache.close()
    write_checkpoint(
        out / "checkpoint.json",
        command="ce",
        status="complete",
        seed=cfg.seed,
        input_digests=input_digests(cfg),
        params=params,
        progress={"completed": completed},
    )
    summary.append(
        f"ce: evaluations={camp.counters.executions} cache_hits={camp.counters.cache_hits}"
    )
    _write_summary(out, summary)
    _log(out, "ce complete")
    return EXIT_OK


def cmd_suite_ce(args) -> int:
    cfg = load_campaign_config(args.config, args.seed)
    out = Path(args.out) if args.out else (cfg.out_dir or Path("out"))
    camp = build_campaign(cfg, out, args.max_evals)
    if args.resume:
        _check_resume(args.resume, "suite-ce", cfg)
    threshold = cfg.threshold_t if args.threshold is None else args.threshold
    params = {"threshold_t": threshold, "aggregate": cfg.aggregate}
    suite_params = SuiteCEParams(threshold_t=threshold, aggregate=cfg.aggregate)
    trace = CampaignTrace()
    state = CEState()
    trace_path = out / "suite_ce.trace"
    _log(out, f"suite-ce start t={threshold}")
    try:
        config, _ = run_suite_ce(
            camp.space, camp.benchmarks, camp.evaluator, suite_params, trace=trace, state=state
        )
    except (CampaignInterrupted, KeyboardInterrupt):
        return _interrupted(camp, "suite-ce", trace, trace_path, params, state)
    finally:
        camp.cache.close()
    write_trace(trace_path, trace)
    write_final_config(out / "suite_ce.config.json", camp.space, config)
    write_checkpoint(
        out / "checkpoint.json",
        command="suite-ce",
        status="complete",
        seed=cfg.seed,
        input_digests=input_digests(cfg),
        params=params,
        state=state,
        progress={"records": len(trace)},
    )
    refs = _baseline_reference(trace)
    final_times = None
    for rec in reversed(trace.records):
        if rec.config == config and all(
            b in rec.measurements and rec.measurements[b].ok for b in camp.benchmarks
        ):
            final_times = {b: rec.measurements[b].time for b in camp.benchmarks}
            break
    if final_times is None:
        raise CampaignError("final configuration has no full measurement record")
    aggregate = fmean(final_times[b] / refs[b] for b in camp.benchmarks)
    _write_summary(
        out,
        [
            f"suite-ce: evaluations={camp.counters.executions} "
            f"cache_hits={camp.counters.cache_hits} configs_tested={len(trace)} "
            f"final_aggregate={aggregate:.6g}"
        ],
    )
    _log(out, "suite-ce complete")
    return EXIT_OK


def cmd_oracle(args) -> int:
    cfg = load_campaign_config(args.config, args.seed)
    out = Path(args.out) if args.out else (cfg.out_dir or Path("out"))
    if cfg.mode != "synthetic":
        raise ConfigError("oracle requires a synthetic-mode config")
    out.mkdir(parents=True, exist_ok=True)
    try:
        space = load_flag_space(cfg.flag_space)
        model = load_synthetic_model(cfg.model)
    except (FlagSpaceError, ValueError, KeyError) as exc:
        raise ConfigError(str(exc)) from exc
    if len(space) > args.max_flags:
        raise ConfigError(
            f"flag space has {len(space)} flags, above --max-flags {args.max_flags}"
        )
    benchmarks = cfg.benchmarks or model.benchmark_names
    stock = space.stock_config()
    reference = {b: model.time_for(space, stock, b) for b in benchmarks}

    import csv as _csv

    with open(out / "oracle_per_benchmark.csv", "w", newline="", encoding="utf-8") as fh:
        writer = _csv.writer(fh, lineterminator="\n")
        writer.writerow(["benchmark", "best_time", "ref_time", "ratio", "base_level", "bitstring"])
        for b in benchmarks:
            t, config = per_benchmark_optimum(space, model, b, max_flags=args.max_flags)
            writer.writerow(
                [b, repr(t), repr(reference[b]), repr(t / reference[b]),
                 config.base_level, config.bitstring]
            )

    constrained = suite_constrained_optimum(
        space, model, benchmarks, cfg.threshold_t if args.threshold is None else args.threshold,
        reference, base_level=stock.base_level, max_flags=args.max_flags,
    )
    if constrained is None:
        raise CampaignError("no feasible configuration under the threshold")
    agg, config = constrained
    data = {
        "threshold_t": cfg.threshold_t if args.threshold is None else args.threshold,
        "aggregate_ratio": agg,
        "base_level": config.base_level,
        "bitstring": config.bitstring,
        "args": render_args(space, config),
    }
    (out / "oracle_constrained.json").write_text(
        json.dumps(data, indent=2) + "\n", encoding="utf-8"
    )
    _write_summary(
        out,
        [f"oracle: benchmarks={len(benchmarks)} constrained_aggregate={agg:.6g}"],
    )
    return EXIT_OK


def cmd_report(args) -> int:
    out = Path(args.out) if args.out else Path("out")
    out.mkdir(parents=True, exist_ok=True)
    try:
        space = load_flag_space(args.space)
    except FlagSpaceError as exc:
        raise ConfigError(str(exc)) from exc
    named = []
    for p in args.traces:
        path = Path(p)
        if not path.exists():
            raise ConfigError(f"trace not found: {path}")
        named.append((path.stem, read_trace(path, space)))
    ref_trace = named[0][1]
    if args.reference:
        ref_trace = read_trace(args.reference, space)
    reference = _baseline_reference(ref_trace)

    table = compare_to_baseline(named, reference)
    write_compare(out / "compare.csv", table)
    for name, trace in named:
        write_series(out / f"{name}.series.csv", floored_best_so_far(trace, reference))
    _write_summary(
        out,
        [
            f"report: benchmarks={len(table.rows)} mean_ratio={table.mean_ratio:.6g} "
            f"mean_ratio_floored={table.mean_ratio_floored:.6g}"
        ],
    )
    return EXIT_OK


def cmd_xval(args) -> int:
    cfg = load_campaign_config(args.config, args.seed)
    out = Path(args.out) if args.out else (cfg.out_dir or Path("out"))
    camp = build_campaign(cfg, out, args.max_evals)
    if args.resume:
        _check_resume(args.resume, "xval", cfg)
    threshold = cfg.threshold_t if args.threshold is None else args.threshold
    params = {"k": cfg.k, "threshold_t": threshold, "aggregate": cfg.aggregate}
    suite_params = SuiteCEParams(threshold_t=threshold, aggregate=cfg.aggregate)
    plan = make_folds(camp.benchmarks, cfg.k, cfg.seed)
    (out / "folds.json").write_text(
        json.dumps({"k": plan.k, "seed": cfg.seed, "assignment": plan.assignment}, indent=2)
        + "\n",
        encoding="utf-8",
    )
    _log(out, f"xval start k={cfg.k} t={threshold}")
    try:
        results = run_xval(camp.space, camp.benchmarks, camp.evaluator, suite_params, plan)
    except (CampaignInterrupted, KeyboardInterrupt):
        write_checkpoint(
            out / "checkpoint.json",
            command="xval",
            status="interrupted",
            seed=cfg.seed,
            input_digests=input_digests(cfg),
            params=params,
        )
        print("xval: interrupted; checkpoint written", file=sys.stderr)
        return EXIT_INTERRUPTED
    finally:
        camp.cache.close()

    import csv as _csv

    all_ratios = []
    with open(out / "xval_report.csv", "w", newline="", encoding="utf-8") as fh:
        writer = _csv.writer(fh, lineterminator="\n")
        writer.writerow(["program", "fold", "ratio", "error"])
        for res in results:
            if res.error is not None:
                writer.writerow(["", res.fold, "", res.error])
                continue
            write_trace(out / f"fold_{res.fold}.trace", res.trace)
            write_final_config(out / f"fold_{res.fold}.config.json", camp.space, res.config)
            for program, ratio in res.test_ratios.items():
                writer.writerow([program, res.fold, repr(ratio), ""])
                all_ratios.append(ratio)
        if all_ratios:
            writer.writerow(["overall_mean", "", repr(fmean(all_ratios)), ""])
    write_checkpoint(
        out / "checkpoint.json",
        command="xval",
        status="complete",
        seed=cfg.seed,
        input_digests=input_digests(cfg),
        params=params,
        progress={"folds": plan.k},
    )
    mean_text = f"{fmean(all_ratios):.6g}" if all_ratios else "n/a"
    _write_summary(
        out,
        [
            f"xval: folds={plan.k} evaluations={camp.counters.executions} "
            f"cache_hits={camp.counters.cache_hits} mean_test_ratio={mean_text}"
        ],
    )
    _log(out, "xval complete")
    return EXIT_OK


def cmd_predict_1nn(args) -> int:
    out = Path(args.out) if args.out else Path("out")
    out.mkdir(parents=True, exist_ok=True)
    try:
        space = load_flag_space(args.space)
    except FlagSpaceError as exc:
        raise ConfigError(str(exc)) from exc
    features = {fv.name: fv for fv in load_features(args.features)}
    if args.query not in features:
        raise ConfigError(f"query program {args.query!r} not in the feature table")
    manifest_path = Path(args.training)
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"{manifest_path}: {exc}") from exc
    training = []
    for rec in manifest:
        program = rec["program"]
        if program == args.query:
            continue
        if program not in features:
            raise ConfigError(f"training program {program!r} not in the feature table")
        trace_path = Path(rec["trace"])
        if not trace_path.is_absolute():
            trace_path = manifest_path.parent / trace_path
        trace = read_trace(trace_path, space)
        table = performance_table(trace, rec.get("benchmark", program))
        training.append((features[program], table))
    config = predict_1nn(features[args.query], training)
    write_final_config(out / "predicted.config.json", space, config)
    _write_summary(
        out,
        [f"predict-1nn {args.query}: {' '.join(render_args(space, config))}"],
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> _Parser:
    parser = _Parser(prog="flagtuner", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    campaign_opts = _Parser(add_help=False)
    campaign_opts.add_argument("--config", required=True, help="campaign config JSON")
    campaign_opts.add_argument("--seed", type=int, default=None, help="override config seed")
    campaign_opts.add_argument("--out", default=None, help="output directory")
    campaign_opts.add_argument("--resume", default=None, help="resume from a checkpoint file")
    campaign_opts.add_argument(
        "--max-evals", type=int, default=None,
        help="interrupt after this many fresh evaluations (writes a checkpoint)",
    )

    p = sub.add_parser("ric", parents=[campaign_opts], help="random iterative compilation")
    p.set_defaults(handler=cmd_ric)

    p = sub.add_parser("ce", parents=[campaign_opts], help="per-benchmark combined elimination")
    p.set_defaults(handler=cmd_ce)

    p = sub.add_parser("suite-ce", parents=[campaign_opts], help="suite-wide combined elimination")
    p.add_argument("--threshold", type=float, default=None, help="override threshold t percent")
    p.set_defaults(handler=cmd_suite_ce)

    p = sub.add_parser("oracle", parents=[campaign_opts], help="brute-force optimum (synthetic only)")
    p.add_argument("--max-flags", type=int, default=DEFAULT_MAX_FLAGS)
    p.add_argument("--threshold", type=float, default=None, help="override threshold t percent")
    p.set_defaults(handler=cmd_oracle)

    p = sub.add_parser("report", help="comparison table and progress series from traces")
    p.add_argument("traces", nargs="+", help="trace files")
    p.add_argument("--space", required=True, help="flag-space JSON the traces were produced with")
    p.add_argument("--reference", default=None, help="trace whose baseline supplies reference times")
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_report)

    p = sub.add_parser("xval", parents=[campaign_opts], help="k-fold cross-validation of suite-ce")
    p.add_argument("--threshold", type=float, default=None, help="override threshold t percent")
    p.set_defaults(handler=cmd_xval)

    p = sub.add_parser("predict-1nn", help="nearest-neighbor configuration prediction")
    p.add_argument("features", help="feature table CSV")
    p.add_argument("training", help="training manifest JSON: [{program, trace, benchmark?}]")
    p.add_argument("query", help="program to predict for")
    p.add_argument("--space", required=True, help="flag-space JSON")
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_predict_1nn)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"flagtuner: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"flagtuner: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CacheLockedError as exc:
        print(f"flagtuner: {exc}", file=sys.stderr)
        return EXIT_CAMPAIGN
    except CampaignError as exc:
        print(f"flagtuner: campaign failed: {exc}", file=sys.stderr)
        return EXIT_CAMPAIGN


if __name__ == "__main__":
    sys.exit(main())
