#!/usr/bin/env python3
"""Writes the bundled 14-economy fixture under crates/core/fixtures/global/.

Population paths are rounded UN-style projections. Per-capita floorspace
anchors are set so the non-renovation projection lands on reference 2070
totals, and 2021 residential anchors for US/CHN/IND equal the reference
per-capita emissions divided by the reference emissions per m². Lifetimes,
eligibility and renovation ramps are calibration values chosen to land the
banded checks (US BAU new construction, developed TEP multiple, sweep), not
survey data.

    python3 scripts/make_global_fixture.py [out_dir]
"""

import csv
import sys
import json
import os

OUT = os.path.join(os.path.dirname(__file__), "..", "crates", "core", "fixtures", "global")

POP_YEARS = [2000, 2010, 2020, 2021, 2030, 2040, 2050, 2060, 2070]

# code, name, population in millions at POP_YEARS
ECONOMIES = [
    ("AFR", "Africa", [811, 1040, 1360, 1395, 1710, 2080, 2480, 2880, 3270]),
    ("AUS", "Australia", [19.0, 22.0, 25.7, 25.9, 28.5, 31.0, 33.5, 35.5, 37.0]),
    ("CAN", "Canada", [30.7, 34.0, 38.0, 38.2, 41.0, 43.5, 45.5, 47.0, 48.0]),
    ("CHN", "China", [1264, 1341, 1412, 1412.6, 1400, 1370, 1310, 1230, 1140]),
    ("EU27", "European Union (27)", [429, 441, 447, 447, 446, 441, 432, 422, 412]),
    ("GBR", "United Kingdom", [58.9, 62.8, 67.1, 67.3, 69.5, 71.0, 72.0, 72.5, 72.5]),
    ("IDN", "Indonesia", [214, 242, 274, 276, 292, 305, 317, 320, 320]),
    ("IND", "India", [1057, 1234, 1396, 1408, 1515, 1590, 1640, 1660, 1660]),
    ("JPN", "Japan", [126.8, 128.1, 125.8, 125.5, 119.0, 112.0, 104.9, 97.0, 90.0]),
    ("KOR", "South Korea", [47.4, 49.6, 51.8, 51.7, 51.3, 49.8, 47.0, 42.0, 36.0]),
    ("LAC", "Latin America and the Caribbean", [526, 594, 654, 658, 700, 730, 750, 755, 750]),
    ("MEA", "Middle East", [170, 210, 260, 265, 300, 335, 365, 390, 410]),
    ("RUS", "Russia", [146.6, 143.0, 145.6, 145.0, 141.0, 137.0, 133.0, 128.0, 124.0]),
    ("USA", "United States", [282, 309, 331, 332, 350, 365, 375, 385, 392]),
]

# Reference 2021 residential ratios (kgCO2/person, kgCO2/m2).
CARBON_2021 = {"USA": (2797.3, 45.2), "CHN": (566.6, 14.5), "IND": (275.7, 18.5)}

# 2070 non-renovation targets in Mm2 with residential share.
TOTAL_2070 = {"IND": (89_400.0, 0.923), "AFR": (91_900.0, 0.900), "CHN": (81_000.0, None)}


def pop_2070(code):
    return next(p for c, _, p in ECONOMIES if c == code)[-1] * 1e6


def pf_2021_res(code):
    per_capita, per_m2 = CARBON_2021[code]
    return per_capita / per_m2


# (economy, btype) -> list of (year, m2/person)
PF = {
    ("USA", "residential"): [(2000, 56.0), (2021, pf_2021_res("USA")), (2070, 82.8)],
    ("USA", "non_residential"): [(2000, 22.0), (2021, 26.0), (2070, 32.0)],
    ("EU27", "residential"): [(2000, 36.0), (2021, 40.0), (2070, 67.0)],
    ("EU27", "non_residential"): [(2000, 13.0), (2021, 15.0), (2070, 22.0)],
    ("CAN", "residential"): [(2000, 55.0), (2021, 62.0), (2070, 75.0)],
    ("CAN", "non_residential"): [(2000, 14.0), (2021, 16.0), (2070, 18.0)],
    ("JPN", "residential"): [(2000, 38.0), (2021, 42.0), (2070, 56.8)],
    ("JPN", "non_residential"): [(2000, 16.0), (2021, 17.0), (2070, 22.0)],
    ("KOR", "residential"): [(2000, 25.0), (2021, 35.0), (2070, 52.4)],
    ("KOR", "non_residential"): [(2000, 20.0), (2021, 30.0), (2070, 47.2)],
    ("GBR", "residential"): [(2000, 36.0), (2021, 38.0), (2070, 45.0)],
    ("GBR", "non_residential"): [(2000, 10.0), (2021, 11.0), (2070, 13.0)],
    ("AUS", "residential"): [(2000, 70.0), (2021, 75.0), (2070, 85.0)],
    ("AUS", "non_residential"): [(2000, 20.0), (2021, 21.0), (2070, 24.0)],
    ("RUS", "residential"): [(2000, 19.0), (2021, 27.0), (2070, 35.0)],
    ("RUS", "non_residential"): [(2000, 6.0), (2021, 8.0), (2070, 10.0)],
    ("CHN", "residential"): [(2000, 22.0), (2021, pf_2021_res("CHN")), (2070, 52.6)],
    ("CHN", "non_residential"): [(2000, 6.0), (2021, 10.3), (2070, TOTAL_2070["CHN"][0] * 1e6 / pop_2070("CHN") - 52.6)],
    ("IND", "residential"): [(2000, 9.8), (2021, pf_2021_res("IND")), (2070, TOTAL_2070["IND"][0] * TOTAL_2070["IND"][1] * 1e6 / pop_2070("IND"))],
    ("IND", "non_residential"): [(2000, 0.7), (2021, 1.1), (2070, TOTAL_2070["IND"][0] * (1 - TOTAL_2070["IND"][1]) * 1e6 / pop_2070("IND"))],
    ("AFR", "residential"): [(2000, 13.2), (2021, 15.5), (2070, TOTAL_2070["AFR"][0] * TOTAL_2070["AFR"][1] * 1e6 / pop_2070("AFR"))],
    ("AFR", "non_residential"): [(2000, 1.1), (2021, 1.4), (2070, TOTAL_2070["AFR"][0] * (1 - TOTAL_2070["AFR"][1]) * 1e6 / pop_2070("AFR"))],
    ("LAC", "residential"): [(2000, 20.0), (2021, 25.0), (2070, 40.0)],
    ("LAC", "non_residential"): [(2000, 4.5), (2021, 6.0), (2070, 9.0)],
    ("IDN", "residential"): [(2000, 16.0), (2021, 21.0), (2070, 37.0)],
    ("IDN", "non_residential"): [(2000, 2.5), (2021, 3.5), (2070, 6.6)],
    ("MEA", "residential"): [(2000, 20.0), (2021, 25.0), (2070, 35.0)],
    ("MEA", "non_residential"): [(2000, 4.0), (2021, 5.5), (2070, 8.0)],
}

# economy -> (res mean, nonres mean); shape and extension are shared.
LIFETIMES = {
    "USA": (30, 30), "EU27": (80, 60), "CAN": (65, 50), "JPN": (40, 35), "KOR": (40, 35),
    "GBR": (90, 60), "AUS": (60, 50), "RUS": (60, 45), "CHN": (40, 30), "IND": (50, 40),
    "AFR": (50, 40), "LAC": (55, 45), "IDN": (50, 40), "MEA": (50, 40),
}
SHAPE = 4.0
EXTENSION = 50.0
# share of mean lifetime before stock becomes renovatable
ELIGIBILITY_FRAC = {"*": 0.9, "USA": 0.7, "EU27": 0.7, "CAN": 0.7}


def eligibility(code, mean):
    frac = ELIGIBILITY_FRAC.get(code, ELIGIBILITY_FRAC["*"])
    return round(mean * frac, 1)


# Renovation ramps: (first projected year, rate then, rate in 2070)
RAMPS = {"BAU": (2022, 0.04, 0.08), "TEP": (2022, 0.08, 0.24)}
# (scenario, economy) -> ramp, overriding RAMPS
RAMP_OVERRIDES = {("BAU", "USA"): (2022, 0.01, 0.025)}

GROUPS = {
    "developed": ["USA", "EU27", "CAN", "JPN", "KOR"],
    "developing": ["CHN", "IND", "AFR", "LAC", "IDN"],
}


def fmt(v):
    return repr(round(v, 6)) if isinstance(v, float) else str(v)


def write(name, header, rows):
    with open(os.path.join(OUT, name), "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([fmt(x) for x in r])


def main():
    global OUT
    if len(sys.argv) > 1:
        OUT = sys.argv[1]
    os.makedirs(OUT, exist_ok=True)
    write(
        "population.csv",
        ["economy", "year", "population_persons"],
        [(c, y, int(round(p * 1e6))) for c, _, ps in ECONOMIES for y, p in zip(POP_YEARS, ps)],
    )
    write(
        "per_capita_floorspace.csv",
        ["economy", "building_type", "year", "m2_per_capita"],
        [(c, bt, y, float(v)) for (c, bt), pts in sorted(PF.items()) for y, v in pts],
    )
    write(
        "lifetime_params.csv",
        ["economy", "building_type", "mean_lifetime_years", "weibull_shape",
         "renovation_extension_years", "eligibility_age_years"],
        [
            (c, bt, float(LIFETIMES[c][i]), SHAPE, EXTENSION, eligibility(c, LIFETIMES[c][i]))
            for c, _, _ in ECONOMIES
            for i, bt in enumerate(["residential", "non_residential"])
        ],
    )
    rows = []
    for scen in RAMPS:
        for c, _, _ in ECONOMIES:
            first, lo, hi = RAMP_OVERRIDES.get((scen, c), RAMPS[scen])
            for bt in ["residential", "non_residential"]:
                rows.append((scen, c, bt, 2000, 0.0))
                for y in range(first, 2071):
                    rows.append((scen, c, bt, y, lo + (hi - lo) * (y - first) / (2070 - first)))
    write("renovation_schedule.csv",
          ["scenario", "economy", "building_type", "year", "renovation_rate"], rows)

    pops = {c: dict(zip(POP_YEARS, ps)) for c, _, ps in ECONOMIES}
    write(
        "emissions.csv",
        ["economy", "building_type", "year", "mtco2"],
        [
            (c, "residential", 2021, CARBON_2021[c][0] * pops[c][2021] * 1e6 / 1e9)
            for c in sorted(CARBON_2021)
        ],
    )

    config = {
        "horizon": {"start_year": 2000, "end_year": 2070},
        "economies": [{"code": c, "name": n} for c, n, _ in ECONOMIES],
        "files": {
            "population": "population.csv",
            "per_capita_floorspace": "per_capita_floorspace.csv",
            "lifetime_params": "lifetime_params.csv",
            "renovation_schedule": "renovation_schedule.csv",
            "emissions": "emissions.csv",
        },
        "scenarios": ["NR", "BAU", "TEP"],
        "options": {"clamp_mode": "retire_oldest", "pf_easing": "linear", "seed_mode": "uniform_prehistory"},
        "groups": GROUPS,
        "metrics": {"base_year": 2020},
        "sweep": {"base_scenario": "BAU", "start_year": 2022},
    }
    with open(os.path.join(OUT, "config.json"), "w") as f:
        json.dump(config, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main()
