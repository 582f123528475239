"""Golden vectors for the fixed-point primitives, computed with plain Python
integers so they do not share code with the Rust implementation.

Rules: saturating two's complement; shifts and product rescaling round half
away from zero.

    python3 scripts/gen_golden.py > crates/core/tests/data/fixedpoint_golden.csv
"""

import random
import sys

FORMATS = [(8, 5), (16, 12), (32, 28), (16, 14), (16, 13)]


def name(word, frac):
    return f"Q{word - 1 - frac}.{frac}"


def sat(v, word):
    hi = (1 << (word - 1)) - 1
    lo = -(1 << (word - 1))
    if v > hi:
        return hi, 1
    if v < lo:
        return lo, 1
    return v, 0


def shr(v, s):
    if s == 0:
        return v
    mag = (abs(v) + (1 << (s - 1))) >> s
    return -mag if v < 0 else mag


def rows(rng):
    out = []
    for word, frac in FORMATS:
        hi = (1 << (word - 1)) - 1
        lo = -(1 << (word - 1))
        edges = [0, 1, -1, hi, lo, hi // 2, lo // 2, 1 << frac, -(1 << frac), 3, -3]
        vals = edges + [rng.randint(lo, hi) for _ in range(40)]
        small = [rng.randint(-(1 << frac), 1 << frac) for _ in range(20)]
        pairs = [(a, b) for a, b in zip(vals, reversed(vals))]
        pairs += [(a, b) for a, b in zip(small, reversed(small))]
        for a, b in pairs:
            out.append(("add", word, frac, a, b) + sat(a + b, word))
            out.append(("sub", word, frac, a, b) + sat(a - b, word))
            out.append(("mul", word, frac, a, b) + sat(shr(a * b, frac), word))
        for a in vals:
            for s in sorted({0, 1, 2, rng.randrange(word), word - 1}):
                out.append(("shr", word, frac, a, s, shr(a, s), 0))
    return out


def main():
    rng = random.Random(20240611)
    w = sys.stdout.write
    w("op,format,raw_in_a,raw_in_b,raw_out,sat_flag\n")
    for op, word, frac, a, b, r, f in rows(rng):
        w(f"{op},{name(word, frac)},{a},{b},{r},{f}\n")


if __name__ == "__main__":
    main()
