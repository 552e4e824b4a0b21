"""Optimization search space: flags, configurations and argument rendering.

A flag space is the ordered universe of binary compiler flags under search
plus the allowed base optimization levels. A configuration picks one base
level and an explicit on/off state for every flag; rendering always emits
every flag explicitly so the compiled binary is a pure function of the
configuration, never of a level's implicit defaults.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


class FlagSpaceError(ValueError):
    """Structural problem with a flag space, configuration or their files."""


@dataclass(frozen=True)
class Flag:
    """One binary compiler flag with its literal argument spellings.

    The enabled/disabled argument forms are data, not derived by string
    rules, so irregular spellings stay representable. ``stock`` records
    whether the stock baseline level turns the flag on.
    """

    name: str
    on: str
    off: str
    stock: bool = True
    note: str = ""


@dataclass(frozen=True)
class FlagSpace:
    flags: tuple[Flag, ...]
    base_levels: tuple[str, ...]
    default_baseline: str

    def __post_init__(self) -> None:
        names = [f.name for f in self.flags]
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise FlagSpaceError(f"duplicate flag names: {dupes}")
        if any(not n for n in names):
            raise FlagSpaceError("flag names must be non-empty")
        for f in self.flags:
            if f.on == f.off:
                raise FlagSpaceError(
                    f"flag {f.name!r}: enabled and disabled forms must differ"
                )
        if not self.base_levels:
            raise FlagSpaceError("base_levels must be non-empty")
        if len(set(self.base_levels)) != len(self.base_levels):
            raise FlagSpaceError("base_levels must be unique")
        if self.default_baseline not in self.base_levels:
            raise FlagSpaceError(
                f"default_baseline {self.default_baseline!r} not in base_levels"
            )

    def __len__(self) -> int:
        return len(self.flags)

    def index_of(self, flag_name: str) -> int:
        for i, f in enumerate(self.flags):
            if f.name == flag_name:
                return i
        raise FlagSpaceError(f"unknown flag {flag_name!r}")

    def level_arg(self, level: str) -> str:
        if level not in self.base_levels:
            raise FlagSpaceError(f"unknown base level {level!r}")
        return f"-{level}"

    def all_enabled(self, base_level: str | None = None) -> Configuration:
        """Configuration with every flag on (the classic elimination start)."""
        level = base_level if base_level is not None else self.default_baseline
        return Configuration(level, (True,) * len(self.flags))

    def stock_config(self, base_level: str | None = None) -> Configuration:
        """Configuration matching what the stock baseline level enables."""
        level = base_level if base_level is not None else self.default_baseline
        return Configuration(level, tuple(f.stock for f in self.flags))


@dataclass(frozen=True)
class Configuration:
    """A base level plus an explicit on/off assignment for every flag."""

    base_level: str
    assignment: tuple[bool, ...] = field(default=())

    @property
    def bitstring(self) -> str:
        return "".join("1" if b else "0" for b in self.assignment)

    @classmethod
    def from_bitstring(cls, base_level: str, bits: str) -> Configuration:
        if any(c not in "01" for c in bits):
            raise FlagSpaceError(f"bad bitstring {bits!r}")
        return cls(base_level, tuple(c == "1" for c in bits))

    def belongs_to(self, space: FlagSpace) -> bool:
        return (
            len(self.assignment) == len(space.flags)
            and self.base_level in space.base_levels
        )

    def key(self) -> str:
        """Stable identity string (level + bitstring) used for cache keys."""
        return f"{self.base_level}:{self.bitstring}"


def _check_member(space: FlagSpace, config: Configuration) -> None:
    if len(config.assignment) != len(space.flags):
        raise FlagSpaceError(
            f"configuration has {len(config.assignment)} flags, "
            f"space has {len(space.flags)}"
        )
    if config.base_level not in space.base_levels:
        raise FlagSpaceError(f"unknown base level {config.base_level!r}")


def render_args(space: FlagSpace, config: Configuration) -> list[str]:
    """Render a configuration as compiler arguments, base level first.

    Every flag is emitted explicitly in its enabled or disabled form, in
    flag order, so distinct assignments never render identically.
    """
    _check_member(space, config)
    args = [space.level_arg(config.base_level)]
    for flag, enabled in zip(space.flags, config.assignment):
        args.append(flag.on if enabled else flag.off)
    return args


def toggle(config: Configuration, flag_index: int) -> Configuration:
    """Return a copy of ``config`` with one flag flipped; the input is untouched."""
    if not 0 <= flag_index < len(config.assignment):
        raise IndexError(
            f"flag index {flag_index} out of range for {len(config.assignment)} flags"
        )
    assignment = list(config.assignment)
    assignment[flag_index] = not assignment[flag_index]
    return Configuration(config.base_level, tuple(assignment))


def parse_flag_space(document: str) -> FlagSpace:
    """Parse the JSON flag-space format into a FlagSpace, preserving file order.

    Expected shape::

        {"base_levels": ["O1", "O2", "O3"],
         "default_baseline": "O3",
         "flags": [{"name": ..., "on": ..., "off": ..., "stock": true, "note": ...}, ...]}
    """
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise FlagSpaceError(f"malformed flag-space document: {exc}") from exc
    if not isinstance(data, dict):
        raise FlagSpaceError("flag-space document must be a JSON object")
    try:
        base_levels = data["base_levels"]
        default_baseline = data["default_baseline"]
        raw_flags = data.get("flags", [])
    except KeyError as exc:
        raise FlagSpaceError(f"flag-space document missing field {exc}") from exc
    if not isinstance(base_levels, list) or not all(
        isinstance(x, str) for x in base_levels
    ):
        raise FlagSpaceError("base_levels must be a list of strings")
    flags = []
    for i, rec in enumerate(raw_flags):
        if not isinstance(rec, dict) or not {"name", "on", "off"} <= rec.keys():
            raise FlagSpaceError(f"flags[{i}] must have name/on/off fields")
        flags.append(
            Flag(
                name=str(rec["name"]),
                on=str(rec["on"]),
                off=str(rec["off"]),
                stock=bool(rec.get("stock", True)),
                note=str(rec.get("note", "")),
            )
        )
    return FlagSpace(tuple(flags), tuple(base_levels), str(default_baseline))


def serialize_flag_space(space: FlagSpace) -> str:
    """Inverse of parse_flag_space; round-trips flag order and names exactly."""
    data = {
        "base_levels": list(space.base_levels),
        "default_baseline": space.default_baseline,
        "flags": [
            {"name": f.name, "on": f.on, "off": f.off, "stock": f.stock, "note": f.note}
            for f in space.flags
        ],
    }
    return json.dumps(data, indent=2) + "\n"


def load_flag_space(path) -> FlagSpace:
    with open(path, encoding="utf-8") as fh:
        return parse_flag_space(fh.read())
