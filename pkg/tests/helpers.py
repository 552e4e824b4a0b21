"""Builders for synthetic spaces, models and suites used across the tests."""

from __future__ import annotations

import random

from flagtuner.evaluator import BenchmarkModel, PairDelta, SyntheticModel
from flagtuner.flagspace import Flag, FlagSpace


def space_of(
    n: int,
    levels: tuple[str, ...] = ("O3",),
    default: str | None = None,
    stock: tuple[bool, ...] | None = None,
) -> FlagSpace:
    """Flag space with n generic flags f0..f{n-1}."""
    if stock is None:
        stock = (True,) * n
    flags = tuple(
        Flag(name=f"f{i}", on=f"-ff{i}", off=f"-fno-f{i}", stock=stock[i])
        for i in range(n)
    )
    return FlagSpace(flags, levels, default or levels[-1])


def model_of(
    benchmarks: dict[str, dict],
) -> SyntheticModel:
    """Model from {bench: {base, deltas, multipliers, pairs}} shorthand.

    ``pairs`` entries are (flag_a, flag_b, state_a, state_b, delta).
    """
    out = {}
    for name, recipe in benchmarks.items():
        out[name] = BenchmarkModel(
            base_time=recipe.get("base", 100.0),
            level_multiplier=recipe.get("multipliers", {}),
            flag_delta=recipe.get("deltas", {}),
            pair_delta=tuple(PairDelta(*p) for p in recipe.get("pairs", ())),
        )
    return SyntheticModel(out)


def pair_dependency_model() -> tuple[FlagSpace, SyntheticModel]:
    """Two flags whose joint disabling is a win while each alone is a loss.

    Times: all-enabled 100, either flag disabled alone 105, both disabled 90,
    identical across base levels.
    """
    space = space_of(2, levels=("O1", "O2", "O3"))
    model = model_of(
        {
            "cover": {
                "base": 110.0,
                "deltas": {"f0": -5.0, "f1": -5.0},
                "pairs": [("f0", "f1", False, False, -20.0)],
            }
        }
    )
    return space, model


def random_additive_instance(
    rng: random.Random, max_flags: int = 12
) -> tuple[FlagSpace, SyntheticModel]:
    """Purely additive single-benchmark model with nonzero per-flag deltas."""
    n = rng.randint(1, max_flags)
    space = space_of(n)
    deltas = {}
    for i in range(n):
        d = 0.0
        while d == 0.0:
            d = rng.uniform(-5.0, 5.0)
        deltas[f"f{i}"] = d
    base = rng.uniform(80.0, 150.0)
    return space, model_of({"bench": {"base": base, "deltas": deltas}})


def random_suite_instance(
    rng: random.Random, max_benches: int = 6, max_flags: int = 10
) -> tuple[FlagSpace, SyntheticModel, list[str]]:
    """Multi-benchmark model with mixed stock states and some pair terms."""
    n = rng.randint(1, max_flags)
    stock = tuple(rng.random() < 0.5 for _ in range(n))
    space = space_of(n, stock=stock)
    n_benches = rng.randint(1, max_benches)
    benches = {}
    names = [f"b{j}" for j in range(n_benches)]
    for name in names:
        deltas = {
            f"f{i}": rng.uniform(-4.0, 4.0) for i in range(n) if rng.random() < 0.6
        }
        pairs = []
        if n >= 2 and rng.random() < 0.5:
            i, j = rng.sample(range(n), 2)
            pairs.append(
                (f"f{i}", f"f{j}", rng.random() < 0.5, rng.random() < 0.5, rng.uniform(-6.0, 6.0))
            )
        benches[name] = {"base": 100.0, "deltas": deltas, "pairs": pairs}
    return space, model_of(benches), names
