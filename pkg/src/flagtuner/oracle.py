"""Exhaustive brute-force optima over small flag spaces.

Enumerates every base level x 2^n flag assignment against a synthetic
model. This is the independent ground truth that heuristic searches are
checked against; it never goes near the search code paths.
"""

from __future__ import annotations

from typing import Iterator, Sequence

from flagtuner.evaluator import SyntheticModel
from flagtuner.flagspace import Configuration, FlagSpace

DEFAULT_MAX_FLAGS = 16


def enumerate_configurations(
    space: FlagSpace, base_level: str | None = None
) -> Iterator[Configuration]:
    """All configurations of the space, levels in order, assignments by bitmask.

    Bit j of the mask drives flag j, so the all-disabled assignment comes
    first; enumeration order is the tie-breaking order everywhere below.
    """
    levels = space.base_levels if base_level is None else (base_level,)
    n = len(space)
    for level in levels:
        for mask in range(2**n):
            yield Configuration(level, tuple(bool((mask >> j) & 1) for j in range(n)))


def _check_cap(space: FlagSpace, max_flags: int) -> None:
    if len(space) > max_flags:
        raise ValueError(
            f"flag space has {len(space)} flags, above the brute-force cap of {max_flags}"
        )


def per_benchmark_optimum(
    space: FlagSpace,
    model: SyntheticModel,
    bench_name: str,
    *,
    base_level: str | None = None,
    max_flags: int = DEFAULT_MAX_FLAGS,
) -> tuple[float, Configuration]:
    """Exact minimum time and its configuration for one benchmark."""
    _check_cap(space, max_flags)
    best_time = None
    best_config = None
    for config in enumerate_configurations(space, base_level):
        t = model.time_for(space, config, bench_name)
        if best_time is None or t < best_time:
            best_time = t
            best_config = config
    assert best_time is not None and best_config is not None
    return best_time, best_config


def suite_constrained_optimum(
    space: FlagSpace,
    model: SyntheticModel,
    benchmarks: Sequence[str],
    threshold_t: float,
    reference: dict[str, float],
    *,
    base_level: str | None = None,
    aggregate_fn=None,
    max_flags: int = DEFAULT_MAX_FLAGS,
) -> tuple[float, Configuration] | None:
    """Best aggregate ratio subject to the per-benchmark threshold bound.

    A configuration is feasible when every benchmark's time stays at or
    below (1 + t/100) x its reference time. Returns None when nothing is
    feasible (possible only if the reference itself is excluded by
    ``base_level``).
    """
    _check_cap(space, max_flags)
    if aggregate_fn is None:
        from statistics import fmean

        aggregate_fn = fmean
    bound = {b: (1.0 + threshold_t / 100.0) * reference[b] for b in benchmarks}
    best = None
    for config in enumerate_configurations(space, base_level):
        times = {}
        feasible = True
        for b in benchmarks:
            t = model.time_for(space, config, b)
            if t > bound[b]:
                feasible = False
                break
            times[b] = t
        if not feasible:
            continue
        agg = aggregate_fn([times[b] / reference[b] for b in benchmarks])
        if best is None or agg < best[0]:
            best = (agg, config)
    return best
