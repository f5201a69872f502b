#!/usr/bin/env python3
"""Regenerates the bundled demo series (2018-05-01 .. 2018-06-30, hourly UTC).

Four synthetic bidding areas with different price/intensity relationships:
  SX-1  both signals driven by the same demand cycle (strong positive link),
        plus a wind-farm generation profile
  SX-2  intensity moves against price (negative link)
  SX-3  intensity follows its own cycle (roughly independent)
  SX-4  shared wind driver, windy nights push prices below zero

Everything is seeded, so rerunning this script reproduces the files byte for
byte. Run from the repository root:  python3 data/sample/generate.py
"""

import math
import random
from datetime import datetime, timedelta
from pathlib import Path

START = datetime(2018, 5, 1)
HOURS = 61 * 24
OUT = Path(__file__).resolve().parent

rng = random.Random(42)


def price_shape(hod: int) -> float:
    morning = math.exp(-((hod - 8.5) / 2.5) ** 2)
    evening = math.exp(-((hod - 18.5) / 3.0) ** 2)
    return 10.0 * (morning + 0.8 * evening)


def timestamps():
    for h in range(HOURS):
        yield START + timedelta(hours=h)


def write_series(name: str, values) -> None:
    path = OUT / name
    with path.open("w", newline="") as out:
        out.write("timestamp,value\n")
        for ts, v in zip(timestamps(), values):
            out.write(f"{ts:%Y-%m-%dT%H}:00:00Z,{v:.2f}\n")
    print(f"wrote {path} ({HOURS} rows)")


def weekend(ts: datetime) -> bool:
    return ts.weekday() >= 5


# smooth wind process shared by SX-4 and the SX-1 generation profile
wind = []
level = 0.45
for _ in range(HOURS):
    level += rng.gauss(0.0, 0.035)
    level = min(max(level, 0.0), 1.0)
    level += (0.45 - level) * 0.01
    wind.append(level)

prices = {code: [] for code in ("SX-1", "SX-2", "SX-3", "SX-4")}
intensities = {code: [] for code in ("SX-1", "SX-2", "SX-3", "SX-4")}
generation = []

for h, ts in enumerate(timestamps()):
    hod = ts.hour
    drift = -0.004 * h  # spring-to-summer easing of both signals
    shape = price_shape(hod)
    dip = -6.0 if weekend(ts) else 0.0

    p1 = 45.0 + shape + dip + drift + rng.gauss(0.0, 3.0)
    prices["SX-1"].append(p1)
    intensities["SX-1"].append(max(20.0, 250.0 + 4.2 * (p1 - 45.0) + 2.0 * drift + rng.gauss(0.0, 18.0)))

    p2 = 48.0 + 0.9 * shape + dip + drift + rng.gauss(0.0, 3.0)
    prices["SX-2"].append(p2)
    intensities["SX-2"].append(max(20.0, 300.0 - 3.5 * (p2 - 48.0) + rng.gauss(0.0, 18.0)))

    p3 = 42.0 + shape + dip + drift + rng.gauss(0.0, 3.5)
    prices["SX-3"].append(p3)
    own_cycle = 60.0 * math.sin(2.0 * math.pi * (hod - 3) / 24.0)
    intensities["SX-3"].append(max(20.0, 280.0 + own_cycle + 1.5 * drift + rng.gauss(0.0, 22.0)))

    w = wind[h]
    p4 = 35.0 + 0.8 * shape + dip + drift - 42.0 * w + rng.gauss(0.0, 4.0)
    prices["SX-4"].append(p4)
    intensities["SX-4"].append(max(20.0, 430.0 - 300.0 * w + 0.4 * shape + rng.gauss(0.0, 20.0)))

    generation.append(max(0.0, 110.0 * w + 6.0 * math.sin(2.0 * math.pi * hod / 24.0) + rng.gauss(0.0, 5.0)))

for code in prices:
    write_series(f"{code}_price.csv", prices[code])
    write_series(f"{code}_co2_intensity.csv", intensities[code])
write_series("SX-1_generation.csv", generation)

below_zero = sum(1 for v in prices["SX-4"] if v < 0.0)
print(f"SX-4 hours below zero: {below_zero}")
