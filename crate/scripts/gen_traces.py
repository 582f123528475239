"""Per-iteration CORDIC traces on Q5.16 (the FXP16 engine format), 14
iterations, from an integer-only reimplementation of the recurrence.

    python3 scripts/gen_traces.py crates/core/tests/data
"""

import math
import os
import sys

WORD, FRAC, N = 22, 16, 14

# (mode, m, drive, x0, y0, z0); None for x0 means the engine's 1/K
CASES = [
    ("linear", 0, "rotation", 0.5, 0.1, 0.25),
    ("linear", 0, "vectoring", 0.8, 0.3, 0.0),
    ("circular", 1, "rotation", None, 0.0, 0.6),
    ("circular", 1, "vectoring", 0.7, -0.9, 0.0),
    ("hyperbolic", -1, "rotation", None, 0.0, 0.5),
    ("hyperbolic", -1, "vectoring", 1.2, 0.4, 0.0),
]


def q(x):
    return sat(round(x * (1 << FRAC)))


def sat(v):
    hi = (1 << (WORD - 1)) - 1
    return max(-hi - 1, min(hi, v))


def shr(v, s):
    if s == 0:
        return v
    mag = (abs(v) + (1 << (s - 1))) >> s
    return -mag if v < 0 else mag


def schedule(m):
    if m != -1:
        return list(range(N))
    out, i, rep = [], 1, 4
    while len(out) < N:
        out.append(i)
        if i == rep and len(out) < N:
            out.append(i)
            rep = 3 * rep + 1
        i += 1
    return out


def angle(m, i):
    t = 2.0 ** -i
    if m == 0:
        return t
    return math.atan(t) if m == 1 else math.atanh(t)


def inv_gain(m, sched):
    k = 1.0
    for i in sched:
        k *= math.sqrt(1.0 + m * 2.0 ** (-2 * i))
    return 1.0 / k


def trace(m, drive, x, y, z):
    rows = []
    sched = schedule(m)
    for it, i in enumerate(sched):
        e = q(angle(m, i))
        if drive == "rotation":
            d = 1 if z >= 0 else -1
        else:
            d = -1 if y >= 0 else 1
        xs, ys = shr(x, i), shr(y, i)
        x, y, z = sat(x - m * d * ys), sat(y + d * xs), sat(z - d * e)
        rows.append((it, d, x, y, z))
    return rows


def main(out_dir):
    for mode, m, drive, x0, y0, z0 in CASES:
        if x0 is None:
            x0 = inv_gain(m, schedule(m))
        rows = trace(m, drive, q(x0), q(y0), q(z0))
        with open(os.path.join(out_dir, f"trace_{mode}_{drive}.csv"), "w") as f:
            f.write("iter,d,x_raw,y_raw,z_raw\n")
            for r in rows:
                f.write(",".join(map(str, r)) + "\n")


if __name__ == "__main__":
    main(sys.argv[1])
