#!/usr/bin/env python3
"""Stand-in compiler: records the effective arguments in the output file.

Arguments mentioning "prefetch" are dropped, the way a real compiler
silently ignores flags that do not apply to a target; configurations that
differ only in ignored flags therefore produce identical binaries.
"""
import sys


def main() -> None:
    argv = sys.argv[1:]
    cut = argv.index("--out")
    out = argv[cut + 1]
    flags = [a for a in argv[:cut] if "prefetch" not in a]
    with open(out, "w") as fh:
        fh.write("\n".join(flags) + "\n")


if __name__ == "__main__":
    main()
