#!/usr/bin/env python3
"""Regenerates the bundled hospitalization fixture.

The series is synthetic: a smooth occupancy-style curve for calendar year
2022 (winter wave declining through spring, small summer bump, autumn rise)
with mild observation noise, rounded to integer bed counts. It stands in for
the public regional dataset so the test suite never touches the network; see
extract_emilia_romagna.py for the real-data extraction this mimics.

Deterministic: fixed RNG seed, stable float ops. Output is UTF-8, LF, header
`date,hospitalized`.
"""

import csv
import datetime as dt

import numpy as np

N = 365
SEED = 20220101


def trend(t: np.ndarray) -> np.ndarray:
    """Smooth occupancy level for day-of-year t in [0, 364]."""
    # Winter wave: high in January, decaying through spring.
    winter = 2400.0 * np.exp(-0.5 * ((t - 25.0) / 55.0) ** 2)
    # Summer resurgence, wider and lower.
    summer = 900.0 * np.exp(-0.5 * ((t - 195.0) / 40.0) ** 2)
    # Autumn rise into December.
    autumn = 650.0 * np.exp(-0.5 * ((t - 345.0) / 45.0) ** 2)
    base = 320.0
    return base + winter + summer + autumn


def main() -> None:
    rng = np.random.default_rng(SEED)
    t = np.arange(N, dtype=float)
    level = trend(t)
    # Mild heteroscedastic observation noise (~1.5% of level), then integer
    # bed counts.
    noise = rng.normal(0.0, 0.015 * level)
    counts = np.rint(level + noise).astype(int)
    assert (counts > 0).all()

    start = dt.date(2022, 1, 1)
    with open("emilia_romagna_2022_hospitalizations.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["date", "hospitalized"])
        for day, c in enumerate(counts):
            w.writerow([(start + dt.timedelta(days=day)).isoformat(), int(c)])
    print(f"wrote {N} rows")


if __name__ == "__main__":
    main()
