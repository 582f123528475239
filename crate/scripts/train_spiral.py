"""Trains the 2-16-2 spiral classifier shipped in
crates/cli/tests/data/spiral_mlp.json (tanh hidden layer, softmax output).

Weights are kept small (L2 penalty, clipping to [-4, 4]) so output logits stay
inside the +-5.5 activation domain.

    python3 scripts/train_spiral.py crates/cli/tests/data/spiral_mlp.json
"""

import json
import sys

import numpy as np

HIDDEN = 16


def spiral(rng, n_per_class, noise=0.04):
    xs, ys = [], []
    for c in range(2):
        t = rng.uniform(0.0, 1.0, n_per_class)
        r = 0.1 + 0.9 * t
        a = 3.0 * np.pi * t + c * np.pi
        pts = np.stack([r * np.cos(a), r * np.sin(a)], axis=1)
        pts += rng.normal(0.0, noise, pts.shape)
        xs.append(pts)
        ys.append(np.full(n_per_class, c))
    x = np.concatenate(xs)
    y = np.concatenate(ys)
    perm = rng.permutation(len(y))
    return x[perm], y[perm]


def forward(p, x):
    h = np.tanh(x @ p["w1"].T + p["b1"])
    z = h @ p["w2"].T + p["b2"]
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return h, e / e.sum(axis=1, keepdims=True)


def train(rng, x, y, steps=6000, lr=0.02, l2=3e-4):
    p = {
        "w1": rng.normal(0.0, 1.0, (HIDDEN, 2)),
        "b1": np.zeros(HIDDEN),
        "w2": rng.normal(0.0, 0.5, (2, HIDDEN)),
        "b2": np.zeros(2),
    }
    m = {k: np.zeros_like(v) for k, v in p.items()}
    v = {k: np.zeros_like(val) for k, val in p.items()}
    onehot = np.eye(2)[y]
    for step in range(1, steps + 1):
        h, prob = forward(p, x)
        dz = (prob - onehot) / len(y)
        g = {"w2": dz.T @ h, "b2": dz.sum(0)}
        dh = (dz @ p["w2"]) * (1.0 - h * h)
        g["w1"] = dh.T @ x
        g["b1"] = dh.sum(0)
        for k in p:
            if k.startswith("w"):
                g[k] = g[k] + l2 * p[k]
            m[k] = 0.9 * m[k] + 0.1 * g[k]
            v[k] = 0.999 * v[k] + 0.001 * g[k] ** 2
            mh = m[k] / (1 - 0.9**step)
            vh = v[k] / (1 - 0.999**step)
            p[k] = np.clip(p[k] - lr * mh / (np.sqrt(vh) + 1e-8), -4.0, 4.0)
    return p


def main(path):
    rng = np.random.default_rng(1234)
    x_train, y_train = spiral(rng, 1000)
    x_test, y_test = spiral(rng, 250)
    p = train(rng, x_train, y_train)
    _, prob = forward(p, x_test)
    acc = float((prob.argmax(1) == y_test).mean())
    r = lambda a: np.round(a, 6).tolist()
    doc = {
        "hidden": {"weights": r(p["w1"]), "bias": r(p["b1"])},
        "output": {"weights": r(p["w2"]), "bias": r(p["b2"])},
        "test": {"x": r(x_test), "y": y_test.tolist()},
        "float_accuracy": acc,
    }
    with open(path, "w") as f:
        json.dump(doc, f)
        f.write("\n")
    print(f"float test accuracy {acc:.4f}", file=sys.stderr)


if __name__ == "__main__":
    main(sys.argv[1])
