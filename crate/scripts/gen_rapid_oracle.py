"""Regenerates crates/core/tests/fixtures/rapid_oracle.json.

Evaluates the four-stage logit cascade literally (sigmoid, then logit of
each intermediate) at 60 significant digits with mpmath.
"""

import json
import random
from pathlib import Path

from mpmath import mp, mpf, log, exp

mp.dps = 60

STAGES = [
    ((0.50, 0.35, 0.15), ("g4", "siglip", "srm")),
    ((0.80, 0.20), ("s1a", "eva02")),
    ((0.85, 0.15), ("b", "eva02_fixed")),
    ((0.89, 0.11), ("s2", "g4v2")),
]
ROLES = ["g4", "siglip", "srm", "eva02", "eva02_fixed", "g4v2"]


def logit(p):
    return log(p / (1 - p))


def sigmoid(x):
    return 1 / (1 + exp(-x))


def cascade(inputs):
    vals = {k: mpf(v) for k, v in zip(ROLES, inputs)}
    names = ["s1a", "b", "s2", "f"]
    for (weights, args), name in zip(STAGES, names):
        # Weights are the decimal constants, not their binary approximations.
        z = sum(mpf(repr(w)) * logit(vals[a]) for w, a in zip(weights, args))
        vals[name] = sigmoid(z)
    return {n: mp.nstr(vals[n], 40) for n in names}


def main():
    rng = random.Random(20260417)
    cases = [[0.9, 0.8, 0.7, 0.6, 0.55, 0.65], [0.5] * 6]
    while len(cases) < 1000:
        if rng.random() < 0.1:
            # Confident branches, still inside the clamp.
            cases.append([rng.choice([rng.uniform(1e-6, 1e-3), rng.uniform(1 - 1e-3, 1 - 1e-6)]) for _ in ROLES])
        else:
            cases.append([rng.uniform(1e-6, 1 - 1e-6) for _ in ROLES])
    out = [{"inputs": [repr(v) for v in c], **cascade(c)} for c in cases]
    path = Path(__file__).resolve().parent.parent / "crates/core/tests/fixtures/rapid_oracle.json"
    lines = ",\n".join(json.dumps(c) for c in out)
    path.write_text("[\n" + lines + "\n]\n")


if __name__ == "__main__":
    main()
