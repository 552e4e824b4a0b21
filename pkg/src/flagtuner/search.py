"""Search strategies over the flag space.

Three campaign styles:

* random iterative compilation (``run_ric``): evaluate many randomly
  sampled configurations;
* combined elimination (``run_ce``): start from all flags enabled and
  greedily disable the flag with the most negative relative improvement
  percentage, re-probing survivors against the updated baseline;
* suite-wide combined elimination (``run_suite_ce``): tune one
  configuration against a whole benchmark suite, toggling flags in either
  direction from a stock baseline, under a per-benchmark degradation
  threshold with early skipping of doomed candidates.

Every tested configuration is logged to a CampaignTrace, the input to all
downstream analysis.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from statistics import fmean
from typing import Iterable, Protocol, Sequence

from flagtuner.evaluator import Measurement
from flagtuner.flagspace import Configuration, FlagSpace, _check_member, toggle


class CampaignError(RuntimeError):
    """The campaign cannot produce a valid result (e.g. baseline failed)."""


class CampaignInterrupted(RuntimeError):
    """Raised by a budgeted evaluator when the evaluation budget is spent."""


class Evaluator(Protocol):
    def evaluate(self, config: Configuration, bench_name: str) -> Measurement: ...


@dataclass
class TraceRecord:
    """One tested configuration with its per-benchmark measurements."""

    seq: int
    config: Configuration
    measurements: dict[str, Measurement]
    annotation: str


@dataclass
class CampaignTrace:
    """Ordered log of every configuration tested; sequence numbers run from 1."""

    records: list[TraceRecord] = field(default_factory=list)

    def append(
        self, config: Configuration, measurements: dict[str, Measurement], annotation: str
    ) -> TraceRecord:
        rec = TraceRecord(len(self.records) + 1, config, dict(measurements), annotation)
        self.records.append(rec)
        return rec

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)


@dataclass
class CEState:
    """Live elimination state: remaining search space, baseline, candidates."""

    S: list[int] = field(default_factory=list)
    B: Configuration | None = None
    X: list[int] = field(default_factory=list)

    def capture(self, S: Iterable[int], B: Configuration, X: Iterable[int]) -> None:
        self.S = list(S)
        self.B = B
        self.X = list(X)


def _geomean(values: Sequence[float]) -> float:
    return math.exp(fmean(math.log(v) for v in values))


AGGREGATES = {"mean": fmean, "geomean": _geomean}


@dataclass
class SuiteCEParams:
    """Knobs for suite-wide elimination.

    ``threshold_t`` is the maximum tolerated slowdown, in percent, of any
    single benchmark relative to the stock baseline; a benchmark exactly at
    the bound passes. ``baseline`` defaults to the stock configuration of
    the space. ``aggregate`` picks the suite objective over per-benchmark
    time ratios.
    """

    threshold_t: float = 0.0
    baseline: Configuration | None = None
    aggregate: str = "mean"

    def __post_init__(self) -> None:
        if self.threshold_t < 0:
            raise ValueError("threshold_t must be >= 0")
        if self.aggregate not in AGGREGATES:
            raise ValueError(f"unknown aggregate {self.aggregate!r}")


def rip(t_toggled: float, t_base: float) -> float:
    """Relative improvement percentage: (t_toggled - t_base) / t_base * 100.

    Negative values mean the toggled configuration is faster.
    """
    if t_base <= 0:
        raise ValueError("t_base must be > 0")
    return (t_toggled - t_base) / t_base * 100.0


def rip_of(toggled: Measurement, base: Measurement) -> float:
    """RIP of two measurements; +inf when either side is not ok."""
    if not toggled.ok or not base.ok:
        return math.inf
    return rip(toggled.time, base.time)


def sample_ric(space: FlagSpace, rng: int | random.Random) -> Configuration:
    """Draw one random configuration: uniform base level, each flag on with p=1/2.

    Passing an int seeds a fresh generator; passing a Random advances it,
    which is how a campaign draws a reproducible sequence.
    """
    r = random.Random(rng) if isinstance(rng, int) else rng
    level = space.base_levels[r.randrange(len(space.base_levels))]
    assignment = tuple(r.random() < 0.5 for _ in space.flags)
    return Configuration(level, assignment)


def _as_bench_list(benchmarks: str | Sequence[str]) -> list[str]:
    if isinstance(benchmarks, str):
        return [benchmarks]
    benches = list(benchmarks)
    if not benches:
        raise ValueError("need at least one benchmark")
    return benches


def run_ric(
    space: FlagSpace,
    benchmarks: str | Sequence[str],
    evaluator: Evaluator,
    n_configs: int,
    seed: int,
    *,
    baseline: Configuration | None = None,
    trace: CampaignTrace | None = None,
) -> CampaignTrace:
    """Random iterative compilation: the stock baseline plus n sampled configs.

    Per-configuration failures are recorded in the trace, not fatal.
    """
    if n_configs < 1:
        raise ValueError("n_configs must be >= 1")
    benches = _as_bench_list(benchmarks)
    trace = trace if trace is not None else CampaignTrace()
    base = baseline if baseline is not None else space.stock_config()
    _check_member(space, base)
    trace.append(base, {b: evaluator.evaluate(base, b) for b in benches}, "baseline")
    rng = random.Random(seed)
    for _ in range(n_configs):
        cfg = sample_ric(space, rng)
        trace.append(cfg, {b: evaluator.evaluate(cfg, b) for b in benches}, "sample")
    return trace


def run_ce(
    space: FlagSpace,
    benchmark: str,
    evaluator: Evaluator,
    *,
    trace: CampaignTrace | None = None,
    state: CEState | None = None,
) -> tuple[Configuration, CampaignTrace]:
    """Combined elimination against a single benchmark.

    Starts with every flag enabled, probes each remaining flag against the
    current baseline, then repeatedly disables the flag with the most
    negative RIP, re-probing the other negative candidates against the
    updated baseline before the next full round. Equal RIPs are resolved in
    favor of the lowest flag index.
    """
    trace = trace if trace is not None else CampaignTrace()
    B = space.all_enabled()
    base_meas = evaluator.evaluate(B, benchmark)
    trace.append(B, {benchmark: base_meas}, "baseline")
    if not base_meas.ok:
        raise CampaignError(
            f"baseline configuration failed on {benchmark}: {base_meas.status}"
        )
    S = list(range(len(space)))
    if state is not None:
        state.capture(S, B, [])

    while True:
        probes: dict[int, tuple[float, Measurement, TraceRecord]] = {}
        for i in S:
            cand = toggle(B, i)
            meas = evaluator.evaluate(cand, benchmark)
            rec = trace.append(cand, {benchmark: meas}, f"probe {space.flags[i].name}")
            probes[i] = (rip_of(meas, base_meas), meas, rec)
        X = [i for _, i in sorted((r, i) for i, (r, _, _) in probes.items() if r < 0)]
        if state is not None:
            state.capture(S, B, X)
        if not X:
            break

        first = X[0]
        _, meas, rec = probes[first]
        B = toggle(B, first)
        base_meas = meas
        rec.annotation = f"accepted toggle {space.flags[first].name}"
        S.remove(first)
        for i in X[1:]:
            cand = toggle(B, i)
            meas = evaluator.evaluate(cand, benchmark)
            rec = trace.append(cand, {benchmark: meas}, f"probe {space.flags[i].name}")
            if rip_of(meas, base_meas) < 0:
                B = cand
                base_meas = meas
                rec.annotation = f"accepted toggle {space.flags[i].name}"
                S.remove(i)
        if state is not None:
            state.capture(S, B, [])

    return B, trace


def run_suite_ce(
    space: FlagSpace,
    benchmarks: Sequence[str],
    evaluator: Evaluator,
    params: SuiteCEParams,
    *,
    trace: CampaignTrace | None = None,
    state: CEState | None = None,
) -> tuple[Configuration, CampaignTrace]:
    """Suite-wide combined elimination building a platform optimization level.

    Each round toggles every remaining flag away from its current state and
    evaluates the candidate across the suite in order, aborting it the
    moment any benchmark exceeds (1 + t/100) x its stock-baseline time.
    Candidates that survive the whole suite compete on aggregate RIP; the
    rest stay in the search space for later rounds. The returned
    configuration satisfies the threshold bound on every benchmark.
    """
    benches = _as_bench_list(benchmarks)
    trace = trace if trace is not None else CampaignTrace()
    agg_fn = AGGREGATES[params.aggregate]

    B = params.baseline if params.baseline is not None else space.stock_config()
    _check_member(space, B)
    ref_meas = {b: evaluator.evaluate(B, b) for b in benches}
    trace.append(B, ref_meas, "baseline")
    failed = [b for b in benches if not ref_meas[b].ok]
    if failed:
        raise CampaignError(f"baseline configuration failed on: {', '.join(failed)}")
    t_ref = {b: ref_meas[b].time for b in benches}
    bound = {b: (1.0 + params.threshold_t / 100.0) * t_ref[b] for b in benches}
    agg_b = agg_fn([ref_meas[b].time / t_ref[b] for b in benches])

    def probe(cand: Configuration, flag_name: str) -> tuple[float | None, TraceRecord]:
        measurements: dict[str, Measurement] = {}
        aborted_at = None
        for b in benches:
            m = evaluator.evaluate(cand, b)
            measurements[b] = m
            if not m.ok or m.time > bound[b]:
                aborted_at = b
                break
        if aborted_at is not None:
            rec = trace.append(
                cand, measurements, f"probe {flag_name} (skipped at {aborted_at})"
            )
            return None, rec
        rec = trace.append(cand, measurements, f"probe {flag_name}")
        return agg_fn([measurements[b].time / t_ref[b] for b in benches]), rec

    S = list(range(len(space)))
    if state is not None:
        state.capture(S, B, [])

    while True:
        candidates: dict[int, tuple[float, TraceRecord]] = {}
        for i in S:
            cand = toggle(B, i)
            agg_c, rec = probe(cand, space.flags[i].name)
            if agg_c is not None and (agg_c - agg_b) / agg_b * 100.0 < 0:
                candidates[i] = (agg_c, rec)
        X = [i for _, i in sorted((agg, i) for i, (agg, _) in candidates.items())]
        if state is not None:
            state.capture(S, B, X)
        if not X:
            break

        first = X[0]
        agg_b, rec = candidates[first]
        B = toggle(B, first)
        rec.annotation = f"accepted toggle {space.flags[first].name}"
        S.remove(first)
        for i in X[1:]:
            cand = toggle(B, i)
            agg_c, rec = probe(cand, space.flags[i].name)
            if agg_c is not None and agg_c < agg_b:
                B = cand
                agg_b = agg_c
                rec.annotation = f"accepted toggle {space.flags[i].name}"
                S.remove(i)
        if state is not None:
            state.capture(S, B, [])

    return B, trace


def best_known_record(
    traces: Sequence[CampaignTrace], benchmark: str
) -> tuple[int, TraceRecord, Measurement]:
    """Locate the minimum-time ok measurement for a benchmark across traces.

    Ties go to the earliest trace, then the earliest sequence number.
    """
    best: tuple[int, TraceRecord, Measurement] | None = None
    for ti, tr in enumerate(traces):
        for rec in tr.records:
            m = rec.measurements.get(benchmark)
            if m is None or not m.ok:
                continue
            if best is None or m.time < best[2].time:
                best = (ti, rec, m)
    if best is None:
        raise CampaignError(f"no ok measurement for benchmark {benchmark!r}")
    return best


def best_known(traces: Sequence[CampaignTrace], benchmark: str) -> Measurement:
    """Best-known measurement for a benchmark across all supplied traces."""
    return best_known_record(traces, benchmark)[2]


class BudgetedEvaluator:
    """Interrupt a campaign after a fixed number of fresh evaluations.

    Cache replays are free; only measurements that actually execute count
    against the budget. The interruption is raised at the start of the
    first call after the budget is spent, so a campaign that finishes
    exactly on budget completes normally.
    """

    def __init__(self, inner: Evaluator, max_evals: int):
        if max_evals < 1:
            raise ValueError("max_evals must be >= 1")
        self.inner = inner
        self.max_evals = max_evals
        self.used = 0

    @property
    def benchmarks(self):
        return self.inner.benchmarks

    def evaluate(self, config: Configuration, bench_name: str) -> Measurement:
        if self.used >= self.max_evals:
            raise CampaignInterrupted(
                f"evaluation budget of {self.max_evals} fresh measurements spent"
            )
        meas = self.inner.evaluate(config, bench_name)
        if not meas.cached:
            self.used += 1
        return meas
