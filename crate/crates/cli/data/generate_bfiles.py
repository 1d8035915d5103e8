#!/usr/bin/env python3
"""Regenerate the bundled b-files in this directory.

Each sequence is produced from its OEIS-listed definition, using a route
different from the Rust implementation:

  A007814  a(2n) = a(n) + 1, a(2n+1) = 0            (offset 1)
  A096268  fixed point of 0 -> 01, 1 -> 00           (offset 0)
  A005811  a(0) = 0, a(n) = a(n // 2) + [n % 4 in {1, 2}]   (offset 0)
"""

from pathlib import Path

TERMS = 10000
HERE = Path(__file__).resolve().parent


def a007814(count):
    a = {1: 0}
    for n in range(2, count + 1):
        a[n] = a[n // 2] + 1 if n % 2 == 0 else 0
    return [(n, a[n]) for n in range(1, count + 1)]


def a096268(count):
    word = "0"
    while len(word) < count:
        word = "".join("01" if ch == "0" else "00" for ch in word)
    return [(n, int(word[n])) for n in range(count)]


def a005811(count):
    a = [0]
    for n in range(1, count):
        a.append(a[n // 2] + (1 if n % 4 in (1, 2) else 0))
    return list(enumerate(a))


def write(name, title, rows):
    path = HERE / f"b{name[1:]}.txt"
    with path.open("w") as f:
        f.write(f"# {name}: {title}\n")
        f.write(f"# {len(rows)} terms, generated by generate_bfiles.py\n")
        for n, v in rows:
            f.write(f"{n} {v}\n")


write("A007814", "exponent of highest power of 2 dividing n", a007814(TERMS))
write("A096268", "period-doubling sequence", a096268(TERMS))
write("A005811", "number of runs in binary expansion of n", a005811(TERMS + 1))
