#!/usr/bin/env python3
"""Documents the real-data extraction the bundled fixture mimics.

The public Italian civil-protection COVID-19 repository publishes one CSV
per day and region ("dati-regioni"). This script shows exactly which rows
and which column would be pulled for the Emilia-Romagna 2022 daily series:
`ricoverati_con_sintomi` (patients currently hospitalized with symptoms,
i.e. occupancy, not new admissions — the dataset offers both and the choice
must be explicit).

It is intentionally not wired into the build or tests: the test suite runs
offline against the synthetic stand-in produced by make_fixture.py. Run this
only if you want to regenerate the fixture from the real data; the grouping
outcome is expected to match qualitatively, not byte-for-byte.
"""

import csv
import io
import urllib.request

URL = (
    "https://raw.githubusercontent.com/pcm-dpc/COVID-19/master/"
    "dati-regioni/dpc-covid19-ita-regioni.csv"
)
REGION = "Emilia-Romagna"
YEAR = "2022"
COLUMN = "ricoverati_con_sintomi"


def main() -> None:
    with urllib.request.urlopen(URL) as resp:
        text = resp.read().decode("utf-8")
    rows = []
    for rec in csv.DictReader(io.StringIO(text)):
        if rec["denominazione_regione"] != REGION:
            continue
        date = rec["data"][:10]
        if not date.startswith(YEAR):
            continue
        rows.append((date, int(rec[COLUMN])))
    rows.sort()
    assert len(rows) == 365, f"expected 365 days, got {len(rows)}"
    with open("emilia_romagna_2022_hospitalizations.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["date", "hospitalized"])
        w.writerows(rows)
    print(f"wrote {len(rows)} rows from {URL}")


if __name__ == "__main__":
    main()
