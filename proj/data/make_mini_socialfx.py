#!/usr/bin/env python3
"""Writes socialfx_mini.csv, the 60-row stand-in for the SocialFX export.

The rows are drawn from a fixed seed, so rerunning reproduces the file byte
for byte. Clusters are laid out so that each filtering stage has a known
outcome: merge rules fold synonyms, the term-frequency threshold (5) removes
rare words, and the linear probe removes words whose examples are spread
evenly over other words' clusters.
"""

import random
import sys
from pathlib import Path

EQ_BANDS = 40
REVERB_BANDS = 12

rng = random.Random(20240917)


def ramp(lo, hi, noise):
    return [lo + (hi - lo) * i / (EQ_BANDS - 1) + rng.gauss(0.0, noise) for i in range(EQ_BANDS)]


def bump(center, width, height, noise):
    return [height * max(0.0, 1.0 - abs(i - center) / width) + rng.gauss(0.0, noise) for i in range(EQ_BANDS)]


EQ_SHAPES = {
    "warm": lambda: ramp(6.0, -6.0, 1.0),
    "bright": lambda: ramp(-5.0, 8.0, 1.0),
    "thin": lambda: ramp(-9.0, 3.0, 1.0),
    "tinny": lambda: bump(30, 6, 9.0, 1.0),
    "boxy": lambda: bump(14, 5, 8.0, 1.0),
}


def reverb(gain, decay, mix):
    gains = [min(1.0, max(0.0, gain + rng.gauss(0.0, 0.05))) for _ in range(REVERB_BANDS)]
    decays = [max(0.05, decay * (1.0 - 0.4 * b / (REVERB_BANDS - 1)) * (1.0 + rng.gauss(0.0, 0.08)))
              for b in range(REVERB_BANDS)]
    return gains + decays + [min(1.0, max(0.0, mix + rng.gauss(0.0, 0.03)))]


REVERB_SHAPES = {
    "echo": lambda: reverb(0.45, 1.2, 0.45),
    "church": lambda: reverb(0.8, 4.5, 0.75),
    "hall": lambda: reverb(0.65, 2.5, 0.55),
}

# (fx, descriptors, shape, count)
PLAN = [
    ("eq", "warm", "warm", 4),
    ("eq", "heat", "warm", 3),
    ("eq", "toasty", "warm", 3),
    ("eq", "bright", "bright", 10),
    ("eq", "happy", "warm", 5),
    ("eq", "happy", "bright", 5),
    ("eq", "thin", "thin", 3),
    ("eq", "tinny", "tinny", 2),
    ("eq", "boxy", "boxy", 1),
    ("reverb", "echo", "echo", 6),
    ("reverb", "echo;airy", "echo", 2),
    ("reverb", "church", "church", 5),
    ("reverb", "cathedral", "church", 3),
    ("reverb", "cool", "echo", 3),
    ("reverb", "cool", "church", 3),
    ("reverb", "hall", "hall", 2),
]


def fmt(v):
    return repr(round(v, 3))


def main(out_path):
    lines = ["source_id,fx_type,descriptors,params"]
    counters = {"eq": 0, "reverb": 0}
    for fx, descriptors, shape, count in PLAN:
        table = EQ_SHAPES if fx == "eq" else REVERB_SHAPES
        for _ in range(count):
            counters[fx] += 1
            values = " ".join(fmt(v) for v in table[shape]())
            lines.append(f"mini-{fx}-{counters[fx]:03d},{fx},{descriptors},{values}")
    Path(out_path).write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).with_name("socialfx_mini.csv"))
