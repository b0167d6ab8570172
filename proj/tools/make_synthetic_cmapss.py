#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Generate a CMAPSS-format stand-in for the FD001 training file.

The NASA file is not redistributed here. This script writes a deterministic
run-to-failure fleet in the same 26-column layout (engine id, cycle, three
operational settings, 21 sensors) with FD001-like magnitudes, noise and
degradation trends. Drop the real train_FD001.txt into data/ to use it
instead.
"""
import argparse
import random

# (base, end-of-life shift, noise std, decimals)
SENSORS = [
    (518.67, 0.0, 0.0, 2),
    (642.15, 1.45, 0.45, 2),
    (1584.0, 18.0, 5.5, 2),
    (1398.5, 30.0, 8.0, 2),
    (14.62, 0.0, 0.0, 2),
    (21.61, 0.0, 0.0, 2),
    (554.0, -3.0, 0.8, 2),
    (2388.04, 0.25, 0.06, 2),
    (9050.0, 40.0, 18.0, 2),
    (1.30, 0.0, 0.0, 2),
    (47.30, 0.95, 0.25, 2),
    (521.70, -2.3, 0.65, 2),
    (2388.04, 0.25, 0.06, 2),
    (8135.0, 35.0, 15.0, 2),
    (8.4200, 0.10, 0.033, 4),
    (0.03, 0.0, 0.0, 2),
    (392.0, 6.0, 1.4, 0),
    (2388.0, 0.0, 0.0, 0),
    (100.00, 0.0, 0.0, 2),
    (38.90, -0.6, 0.17, 2),
    (23.340, -0.40, 0.10, 4),
]

FIRST_LIFETIMES = [192, 287, 179, 189, 269, 188, 259, 150, 201, 222,
                   240, 170, 163, 180, 207, 209, 276, 195, 158, 234]


def fmt(value, decimals):
    if decimals == 0:
        return str(int(round(value)))
    return f"{value:.{decimals}f}"


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--engines", type=int, default=100)
    parser.add_argument("--seed", type=int, default=20250001)
    parser.add_argument("--out", default="data/synthetic_FD001.txt")
    args = parser.parse_args()

    rng = random.Random(args.seed)
    lifetimes = list(FIRST_LIFETIMES)
    while len(lifetimes) < args.engines:
        lifetimes.append(rng.randint(128, 362))
    lifetimes = lifetimes[: args.engines]

    lines = []
    for engine, life in enumerate(lifetimes, start=1):
        exponent = rng.uniform(2.0, 4.0)
        scale = rng.uniform(0.8, 1.2)
        for cycle in range(1, life + 1):
            health = scale * (cycle / life) ** exponent
            settings = [
                fmt(rng.gauss(0.0, 0.0022), 4),
                fmt(rng.gauss(0.0, 0.00029), 4),
                "100.0",
            ]
            sensors = []
            for base, shift, noise, decimals in SENSORS:
                value = base + shift * health
                if noise > 0.0:
                    value += rng.gauss(0.0, noise)
                sensors.append(fmt(value, decimals))
            lines.append(" ".join([str(engine), str(cycle)] + settings + sensors) + " ")

    with open(args.out, "w", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
