"""Execution-time measurement for (configuration, benchmark) pairs.

Two interchangeable backends produce Measurements: an external
compile-and-run pipeline driven by command templates, and a deterministic
synthetic cost model (base time + per-flag deltas + pairwise interaction
terms) that stands in for real hardware at desk scale.

Results are cached by content digest of the compiled binary: if a future
compilation hashes the same, the cached measurement is returned instead of
re-executing the binary. Failed configurations are cached by configuration
identity so they are never retried.
"""

from __future__ import annotations

import fcntl
import hashlib
import json
import math
import shlex
import subprocess
import tempfile
import time as _time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

from flagtuner.flagspace import Configuration, FlagSpace, _check_member, render_args

STATUS_OK = "ok"
STATUS_COMPILE_ERROR = "compile_error"
STATUS_RUN_ERROR = "run_error"
STATUS_TIMEOUT = "timeout"
STATUSES = (STATUS_OK, STATUS_COMPILE_ERROR, STATUS_RUN_ERROR, STATUS_TIMEOUT)

TIMING_REPORTED = "reported"
TIMING_EXTERNAL = "external"


class CacheLockedError(RuntimeError):
    """Another process holds the advisory lock on the cache file."""


@dataclass(frozen=True)
class Benchmark:
    """One benchmark: command templates plus measurement policy.

    ``compile_command`` may use the placeholders ``{flags}`` (the rendered
    argument list, space-joined) and ``{out}`` (output binary path);
    ``run_command`` may use ``{bin}``. With ``timing="reported"`` the run
    command must print a single floating-point time in seconds on its last
    output line; with ``timing="external"`` the harness wall-clocks the
    process instead.
    """

    name: str
    compile_command: str
    run_command: str
    timeout: float = 60.0
    repeat_runs: int = 1
    timing: str = TIMING_REPORTED

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("benchmark name must be non-empty")
        if self.timeout <= 0:
            raise ValueError(f"benchmark {self.name}: timeout must be > 0")
        if self.repeat_runs < 1:
            raise ValueError(f"benchmark {self.name}: repeat_runs must be >= 1")
        if self.timing not in (TIMING_REPORTED, TIMING_EXTERNAL):
            raise ValueError(f"benchmark {self.name}: bad timing {self.timing!r}")


@dataclass(frozen=True)
class Measurement:
    """One evaluated (configuration, benchmark) result.

    ``time`` is the minimum over the repeat runs and is present iff the
    status is ok; ``digest`` is present iff compilation succeeded.
    """

    status: str
    time: float | None = None
    digest: str | None = None
    digest_algo: str = "md5"
    cached: bool = False
    detail: str = ""

    def __post_init__(self) -> None:
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")
        if self.status == STATUS_OK:
            if self.time is None or not math.isfinite(self.time) or self.time <= 0:
                raise ValueError(f"ok measurement needs finite positive time, got {self.time}")
        elif self.time is not None:
            raise ValueError(f"{self.status} measurement must not carry a time")

    @property
    def ok(self) -> bool:
        return self.status == STATUS_OK


def _digest_bytes(data: bytes, algo: str = "md5") -> str:
    return hashlib.new(algo, data).hexdigest()


_FAILURE_PREFIX = "cfg:"


def _failure_key(config: Configuration) -> str:
    return _FAILURE_PREFIX + config.key()


class EvalCache:
    """Digest-keyed measurement cache with an append-only backing file.

    Ok measurements are keyed by (benchmark, binary digest); failed ones by
    (benchmark, configuration identity) so broken flag combinations are not
    retried. Every put is appended and flushed immediately, which makes the
    cache kill-safe. When backed by a file, an exclusive advisory lock is
    held so concurrent campaigns cannot share one cache file.
    """

    def __init__(self, path: str | Path | None = None, lock: bool = True):
        self.path = Path(path) if path is not None else None
        self.entries: dict[tuple[str, str], Measurement] = {}
        self._handle = None
        if self.path is not None:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            if self.path.exists():
                self._load()
            self._handle = open(self.path, "a", encoding="utf-8")
            if lock:
                try:
                    fcntl.flock(self._handle.fileno(), fcntl.LOCK_EX | fcntl.LOCK_NB)
                except BlockingIOError as exc:
                    self._handle.close()
                    self._handle = None
                    raise CacheLockedError(f"cache file {self.path} is locked") from exc

    def _load(self) -> None:
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                rec = json.loads(line)
                meas = Measurement(
                    status=rec["status"],
                    time=rec["time"],
                    digest=rec["digest"],
                    digest_algo=rec.get("digest_algo", "md5"),
                )
                self.entries[(rec["benchmark"], rec["key"])] = meas

    def _key_for(self, config: Configuration, measurement: Measurement) -> str:
        if measurement.ok:
            assert measurement.digest is not None
            return measurement.digest
        return _failure_key(config)

    def get(self, benchmark: str, digest: str) -> Measurement | None:
        return self.entries.get((benchmark, digest))

    def get_failure(self, benchmark: str, config: Configuration) -> Measurement | None:
        return self.entries.get((benchmark, _failure_key(config)))

    def put(self, benchmark: str, config: Configuration, measurement: Measurement) -> None:
        stored = replace(measurement, cached=False)
        key = self._key_for(config, measurement)
        self.entries[(benchmark, key)] = stored
        if self._handle is not None:
            rec = {
                "benchmark": benchmark,
                "key": key,
                "digest_algo": stored.digest_algo,
                "digest": stored.digest,
                "status": stored.status,
                "time": stored.time,
                "config_bitstring": config.bitstring,
                "base_level": config.base_level,
            }
            self._handle.write(json.dumps(rec) + "\n")
            self._handle.flush()

    def __len__(self) -> int:
        return len(self.entries)

    def close(self) -> None:
        if self._handle is not None:
            self._handle.close()
            self._handle = None

    def __enter__(self) -> EvalCache:
        return self

    def __exit__(self, *exc) -> None:
        self.close()


# ---------------------------------------------------------------------------
# External compile-and-run pipeline
# ---------------------------------------------------------------------------

def _run_command(cmd: str, timeout: float, cwd: Path | None):
    return subprocess.run(
        shlex.split(cmd),
        capture_output=True,
        text=True,
        timeout=timeout,
        cwd=cwd,
    )


def _parse_reported_time(stdout: str) -> float | None:
    lines = [ln for ln in stdout.splitlines() if ln.strip()]
    if not lines:
        return None
    try:
        return float(lines[-1].strip())
    except ValueError:
        return None


def evaluate(
    space: FlagSpace,
    config: Configuration,
    bench: Benchmark,
    cache: EvalCache,
    *,
    workdir: str | Path | None = None,
    build_dir: str | Path | None = None,
    digest_algo: str = "md5",
) -> Measurement:
    """Compile, digest and (if the digest is unseen) run one configuration.

    Cache hits return the stored measurement with ``cached=True`` and spawn
    no run process. The measured time is the minimum over
    ``bench.repeat_runs`` timed executions.
    """
    _check_member(space, config)
    cwd = Path(workdir) if workdir is not None else None

    hit = cache.get_failure(bench.name, config)
    if hit is not None:
        return replace(hit, cached=True)

    if build_dir is None:
        build_dir = Path(tempfile.mkdtemp(prefix="flagtuner-build-"))
    else:
        build_dir = Path(build_dir)
        build_dir.mkdir(parents=True, exist_ok=True)
    # commands may run with a different cwd, so the binary path must be absolute
    build_dir = build_dir.resolve()
    out_path = build_dir / f"{bench.name}-{config.base_level}-{config.bitstring}.bin"

    flags = " ".join(render_args(space, config))
    compile_cmd = bench.compile_command.format(flags=flags, out=out_path)
    try:
        proc = _run_command(compile_cmd, bench.timeout, cwd)
    except subprocess.TimeoutExpired:
        meas = Measurement(STATUS_COMPILE_ERROR, detail="compile timed out")
        cache.put(bench.name, config, meas)
        return meas
    if proc.returncode != 0 or not out_path.exists():
        detail = proc.stderr.strip().splitlines()[-1] if proc.stderr.strip() else "compile failed"
        meas = Measurement(STATUS_COMPILE_ERROR, detail=detail)
        cache.put(bench.name, config, meas)
        return meas

    digest = _digest_bytes(out_path.read_bytes(), digest_algo)
    hit = cache.get(bench.name, digest)
    if hit is not None:
        return replace(hit, cached=True)

    run_cmd = bench.run_command.format(bin=out_path)
    times = []
    for _ in range(bench.repeat_runs):
        started = _time.perf_counter()
        try:
            proc = _run_command(run_cmd, bench.timeout, cwd)
        except subprocess.TimeoutExpired:
            meas = Measurement(STATUS_TIMEOUT, digest=digest, digest_algo=digest_algo)
            cache.put(bench.name, config, meas)
            return meas
        elapsed = _time.perf_counter() - started
        if proc.returncode != 0:
            meas = Measurement(
                STATUS_RUN_ERROR,
                digest=digest,
                digest_algo=digest_algo,
                detail=f"exit status {proc.returncode}",
            )
            cache.put(bench.name, config, meas)
            return meas
        if bench.timing == TIMING_EXTERNAL:
            times.append(elapsed)
        else:
            reported = _parse_reported_time(proc.stdout)
            if reported is None or reported <= 0:
                meas = Measurement(
                    STATUS_RUN_ERROR,
                    digest=digest,
                    digest_algo=digest_algo,
                    detail="run command did not report a positive time",
                )
                cache.put(bench.name, config, meas)
                return meas
            times.append(reported)

    meas = Measurement(STATUS_OK, time=min(times), digest=digest, digest_algo=digest_algo)
    cache.put(bench.name, config, meas)
    return meas


class CommandEvaluator:
    """Evaluator backed by external compile/run commands, with counters.

    ``executions`` counts measurement events that actually ran the binary
    (cache hits perform none); ``compilations`` counts compiler invocations.
    Timed executions are strictly serialized in submission order.
    """

    def __init__(
        self,
        space: FlagSpace,
        suite: Sequence[Benchmark],
        cache: EvalCache | None = None,
        *,
        workdir: str | Path | None = None,
        build_dir: str | Path | None = None,
    ):
        names = [b.name for b in suite]
        if len(set(names)) != len(names):
            raise ValueError("benchmark names must be unique within a suite")
        self.space = space
        self.suite = {b.name: b for b in suite}
        self.cache = cache if cache is not None else EvalCache()
        self.workdir = workdir
        self._tmp = None
        if build_dir is None:
            self._tmp = tempfile.TemporaryDirectory(prefix="flagtuner-build-")
            build_dir = self._tmp.name
        self.build_dir = Path(build_dir)
        self.executions = 0
        self.compilations = 0
        self.cache_hits = 0

    @property
    def benchmarks(self) -> list[str]:
        return list(self.suite)

    def evaluate(self, config: Configuration, bench_name: str) -> Measurement:
        if bench_name not in self.suite:
            raise ValueError(f"unknown benchmark {bench_name!r}")
        bench = self.suite[bench_name]
        meas = evaluate(
            self.space,
            config,
            bench,
            self.cache,
            workdir=self.workdir,
            build_dir=self.build_dir,
        )
        if meas.cached:
            self.cache_hits += 1
            if meas.ok:
                # digest hit: this call still compiled to learn the digest
                self.compilations += 1
        else:
            self.compilations += 1
            if meas.status in (STATUS_OK, STATUS_RUN_ERROR, STATUS_TIMEOUT):
                self.executions += 1
        return meas


# ---------------------------------------------------------------------------
# Synthetic model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PairDelta:
    """Additive term applied when two flags are jointly in the given states."""

    flag_a: str
    flag_b: str
    state_a: bool
    state_b: bool
    delta: float


@dataclass(frozen=True)
class BenchmarkModel:
    base_time: float
    level_multiplier: dict[str, float] = field(default_factory=dict)
    flag_delta: dict[str, float] = field(default_factory=dict)
    pair_delta: tuple[PairDelta, ...] = ()

    def flag_names(self) -> set[str]:
        names = set(self.flag_delta)
        for p in self.pair_delta:
            names.add(p.flag_a)
            names.add(p.flag_b)
        return names


@dataclass(frozen=True)
class SyntheticModel:
    """Deterministic cost model: base time x level multiplier + flag terms.

    time(config) = base_time * level_multiplier[base_level]
                 + sum of flag_delta[f] over enabled flags f
                 + sum of pair deltas whose joint state matches.

    Multipliers and deltas absent from the mappings default to 1.0 and 0.0.
    """

    benchmarks: dict[str, BenchmarkModel]

    @property
    def benchmark_names(self) -> list[str]:
        return list(self.benchmarks)

    def time_for(self, space: FlagSpace, config: Configuration, bench_name: str) -> float:
        if bench_name not in self.benchmarks:
            raise ValueError(f"benchmark {bench_name!r} not modeled")
        _check_member(space, config)
        bm = self.benchmarks[bench_name]
        state = {f.name: on for f, on in zip(space.flags, config.assignment)}
        t = bm.base_time * bm.level_multiplier.get(config.base_level, 1.0)
        for name, on in state.items():
            if on:
                t += bm.flag_delta.get(name, 0.0)
        for p in bm.pair_delta:
            if state.get(p.flag_a) == p.state_a and state.get(p.flag_b) == p.state_b:
                t += p.delta
        return t

    def validate_positive(self, levels: Sequence[str]) -> None:
        """Interval-bound check that no configuration can reach a time <= 0."""
        for name, bm in self.benchmarks.items():
            worst_flags = sum(min(0.0, d) for d in bm.flag_delta.values())
            worst_pairs = sum(min(0.0, p.delta) for p in bm.pair_delta)
            for level in levels:
                mult = bm.level_multiplier.get(level, 1.0)
                if mult <= 0:
                    raise ValueError(f"{name}: multiplier for {level} must be > 0")
                lower = bm.base_time * mult + worst_flags + worst_pairs
                if lower <= 0:
                    raise ValueError(
                        f"{name}: model can reach non-positive time at {level} "
                        f"(lower bound {lower})"
                    )


def load_synthetic_model(path: str | Path) -> SyntheticModel:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    benches = {}
    for name, raw in data["benchmarks"].items():
        pairs = []
        for rec in raw.get("pair_delta", []):
            a, b = rec["flags"]
            sa, sb = rec["when"]
            pairs.append(PairDelta(str(a), str(b), bool(sa), bool(sb), float(rec["delta"])))
        benches[name] = BenchmarkModel(
            base_time=float(raw["base_time"]),
            level_multiplier={k: float(v) for k, v in raw.get("level_multiplier", {}).items()},
            flag_delta={k: float(v) for k, v in raw.get("flag_delta", {}).items()},
            pair_delta=tuple(pairs),
        )
    model = SyntheticModel(benches)
    for bm in benches.values():
        model.validate_positive(list(bm.level_multiplier) or ["default"])
    return model


def evaluate_synthetic(
    config: Configuration,
    bench_name: str,
    model: SyntheticModel,
    space: FlagSpace,
) -> Measurement:
    """Deterministic model evaluation; the digest is that of the configuration."""
    t = model.time_for(space, config, bench_name)
    return Measurement(
        STATUS_OK,
        time=t,
        digest=_digest_bytes(config.key().encode()),
    )


class SyntheticEvaluator:
    """Evaluator backed by a SyntheticModel, optionally cache-fronted.

    Model computations stand in for timed executions, so ``executions``
    counts fresh model evaluations and cache replays count none.
    """

    def __init__(self, space: FlagSpace, model: SyntheticModel, cache: EvalCache | None = None):
        unknown = set()
        space_names = {f.name for f in space.flags}
        for bm in model.benchmarks.values():
            unknown |= bm.flag_names() - space_names
        if unknown:
            raise ValueError(f"model references flags not in the space: {sorted(unknown)}")
        model.validate_positive(space.base_levels)
        self.space = space
        self.model = model
        self.cache = cache if cache is not None else EvalCache()
        self.executions = 0
        self.cache_hits = 0

    @property
    def benchmarks(self) -> list[str]:
        return self.model.benchmark_names

    def evaluate(self, config: Configuration, bench_name: str) -> Measurement:
        digest = _digest_bytes(config.key().encode())
        hit = self.cache.get(bench_name, digest)
        if hit is not None:
            self.cache_hits += 1
            return replace(hit, cached=True)
        meas = evaluate_synthetic(config, bench_name, self.model, self.space)
        self.executions += 1
        self.cache.put(bench_name, config, meas)
        return meas


def load_suite(path: str | Path) -> list[Benchmark]:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    benches = []
    for rec in data["benchmarks"]:
        benches.append(
            Benchmark(
                name=str(rec["name"]),
                compile_command=str(rec["compile_command"]),
                run_command=str(rec["run_command"]),
                timeout=float(rec.get("timeout", 60.0)),
                repeat_runs=int(rec.get("repeat_runs", 1)),
                timing=str(rec.get("timing", TIMING_REPORTED)),
            )
        )
    names = [b.name for b in benches]
    if len(set(names)) != len(names):
        raise ValueError("duplicate benchmark names in suite")
    return benches
