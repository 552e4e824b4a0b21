#!/usr/bin/env python3
"""Stand-in benchmark runner: prints a deterministic pseudo execution time.

The time is a pure function of the binary content and the benchmark salt,
so repeated runs of one binary always report the same value.
"""
import hashlib
import sys


def main() -> None:
    data = open(sys.argv[1], "rb").read()
    salt = sys.argv[2].encode() if len(sys.argv) > 2 else b""
    base = 0.8 if b"-O3" in data else 1.0
    jitter = int(hashlib.md5(data + salt).hexdigest(), 16) % 1000 / 10000.0
    print(base + jitter)


if __name__ == "__main__":
    main()
