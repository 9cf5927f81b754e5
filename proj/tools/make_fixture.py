#!/usr/bin/env python3
"""Regenerates data/fixture: a synthetic 75-country flow network with a
two-stage arrival-day column. Output is fully determined by SEED."""

import csv
import math
import random
import sys
from pathlib import Path

SEED = 20200131

# code, name, continent, capital lon, capital lat
COUNTRIES = [
    ("USA", "United States", "North America", -77.04, 38.90),
    ("GBR", "United Kingdom", "Europe", -0.13, 51.51),
    ("DEU", "Germany", "Europe", 13.40, 52.52),
    ("FRA", "France", "Europe", 2.35, 48.86),
    ("RUS", "Russia", "Europe", 37.62, 55.76),
    ("CHN", "China", "Asia", 116.40, 39.90),
    ("ITA", "Italy", "Europe", 12.50, 41.90),
    ("ESP", "Spain", "Europe", -3.70, 40.42),
    ("JPN", "Japan", "Asia", 139.69, 35.69),
    ("CAN", "Canada", "North America", -75.70, 45.42),
    ("AUS", "Australia", "Oceania", 149.13, -35.28),
    ("KOR", "South Korea", "Asia", 126.98, 37.57),
    ("NLD", "Netherlands", "Europe", 4.90, 52.37),
    ("BEL", "Belgium", "Europe", 4.35, 50.85),
    ("CHE", "Switzerland", "Europe", 7.45, 46.95),
    ("AUT", "Austria", "Europe", 16.37, 48.21),
    ("SWE", "Sweden", "Europe", 18.07, 59.33),
    ("NOR", "Norway", "Europe", 10.75, 59.91),
    ("DNK", "Denmark", "Europe", 12.57, 55.68),
    ("FIN", "Finland", "Europe", 24.94, 60.17),
    ("POL", "Poland", "Europe", 21.01, 52.23),
    ("CZE", "Czechia", "Europe", 14.42, 50.08),
    ("HUN", "Hungary", "Europe", 19.04, 47.50),
    ("PRT", "Portugal", "Europe", -9.14, 38.72),
    ("GRC", "Greece", "Europe", 23.73, 37.98),
    ("IRL", "Ireland", "Europe", -6.26, 53.35),
    ("TUR", "Turkey", "Asia", 32.86, 39.93),
    ("ISR", "Israel", "Asia", 35.22, 31.77),
    ("MEX", "Mexico", "North America", -99.13, 19.43),
    ("CHL", "Chile", "South America", -70.65, -33.45),
    ("NZL", "New Zealand", "Oceania", 174.78, -41.29),
    ("SVK", "Slovakia", "Europe", 17.11, 48.15),
    ("SVN", "Slovenia", "Europe", 14.51, 46.06),
    ("EST", "Estonia", "Europe", 24.75, 59.44),
    ("LVA", "Latvia", "Europe", 24.11, 56.95),
    ("LTU", "Lithuania", "Europe", 25.28, 54.69),
    ("ISL", "Iceland", "Europe", -21.94, 64.15),
    ("LUX", "Luxembourg", "Europe", 6.13, 49.61),
    ("IND", "India", "Asia", 77.21, 28.61),
    ("THA", "Thailand", "Asia", 100.50, 13.76),
    ("SGP", "Singapore", "Asia", 103.82, 1.35),
    ("MYS", "Malaysia", "Asia", 101.69, 3.14),
    ("VNM", "Vietnam", "Asia", 105.85, 21.03),
    ("PHL", "Philippines", "Asia", 120.98, 14.60),
    ("IDN", "Indonesia", "Asia", 106.85, -6.21),
    ("ARE", "United Arab Emirates", "Asia", 54.37, 24.45),
    ("SAU", "Saudi Arabia", "Asia", 46.68, 24.71),
    ("IRN", "Iran", "Asia", 51.39, 35.69),
    ("PAK", "Pakistan", "Asia", 73.05, 33.68),
    ("KAZ", "Kazakhstan", "Asia", 71.45, 51.17),
    ("UKR", "Ukraine", "Europe", 30.52, 50.45),
    ("BLR", "Belarus", "Europe", 27.56, 53.90),
    ("ROU", "Romania", "Europe", 26.10, 44.43),
    ("BGR", "Bulgaria", "Europe", 23.32, 42.70),
    ("HRV", "Croatia", "Europe", 15.98, 45.81),
    ("SRB", "Serbia", "Europe", 20.46, 44.79),
    ("EGY", "Egypt", "Africa", 31.24, 30.04),
    ("MAR", "Morocco", "Africa", -6.84, 34.02),
    ("TUN", "Tunisia", "Africa", 10.18, 36.81),
    ("DZA", "Algeria", "Africa", 3.06, 36.75),
    ("ZAF", "South Africa", "Africa", 28.19, -25.75),
    ("NGA", "Nigeria", "Africa", 7.49, 9.06),
    ("KEN", "Kenya", "Africa", 36.82, -1.29),
    ("ETH", "Ethiopia", "Africa", 38.75, 9.03),
    ("BRA", "Brazil", "South America", -47.88, -15.79),
    ("ARG", "Argentina", "South America", -58.38, -34.60),
    ("COL", "Colombia", "South America", -74.07, 4.71),
    ("PER", "Peru", "South America", -77.04, -12.05),
    ("URY", "Uruguay", "South America", -56.16, -34.90),
    ("CUB", "Cuba", "North America", -82.37, 23.11),
    ("DOM", "Dominican Republic", "North America", -69.93, 18.49),
    ("CRI", "Costa Rica", "North America", -84.09, 9.93),
    ("JAM", "Jamaica", "North America", -76.79, 18.01),
    ("FJI", "Fiji", "Oceania", 178.44, -18.14),
    ("MNG", "Mongolia", "Asia", 106.91, 47.89),
]

HUBS = ["USA", "GBR", "DEU", "FRA", "RUS", "CHN", "ITA", "ESP"]
TARGET_EDGES = 179
# countries reached only through another non-hub country
PARENT = {"NZL": "AUS", "FJI": "NZL", "KAZ": "UKR", "MNG": "KAZ", "CUB": "MEX", "JAM": "CUB",
          "URY": "ARG", "ETH": "KEN", "ISL": "NOR"}
LANDLOCKED = {"CHE", "AUT", "CZE", "HUN", "SVK", "LUX", "KAZ", "BLR", "SRB", "ETH", "MNG"}


def haversine_km(a, b):
    lon1, lat1, lon2, lat2 = map(math.radians, (a[0], a[1], b[0], b[1]))
    h = math.sin((lat2 - lat1) / 2) ** 2 + math.cos(lat1) * math.cos(lat2) * math.sin((lon2 - lon1) / 2) ** 2
    return 2 * 6371.0 * math.asin(math.sqrt(h))


def build_edges(rng):
    codes = [c[0] for c in COUNTRIES]
    pairs = set()

    def add(o, d):
        if o != d and (o, d) not in pairs:
            pairs.add((o, d))
            return True
        return False

    # hubs form a ring plus a few chords so the core is strongly tied
    for i, h in enumerate(HUBS):
        add(h, HUBS[(i + 1) % len(HUBS)])
        add(HUBS[(i + 2) % len(HUBS)], h)
    # every other country sends to or receives from at least one hub
    weights = [8, 7, 6, 5, 4, 3, 2, 2]
    for c in codes:
        if c in HUBS:
            continue
        h = PARENT.get(c) or rng.choices(HUBS, weights=weights)[0]
        if rng.random() < 0.5:
            add(c, h)
        else:
            add(h, c)
    # preferential extra flows until the target size
    while len(pairs) < TARGET_EDGES:
        if rng.random() < 0.7:
            a = rng.choices(HUBS, weights=weights)[0]
        else:
            a = rng.choice(codes)
        b = rng.choice(codes)
        if a in PARENT or b in PARENT:
            continue
        if rng.random() < 0.5:
            a, b = b, a
        add(a, b)
    edges = []
    for o, d in sorted(pairs):
        edges.append((o, d, rng.randint(20, 4000) * 1000))
    return edges


def main(out_dir):
    rng = random.Random(SEED)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    edges = build_edges(rng)

    deg = {c[0]: 0 for c in COUNTRIES}
    nbrs = {c[0]: set() for c in COUNTRIES}
    for o, d, _ in edges:
        nbrs[o].add(d)
        nbrs[d].add(o)
    for c in deg:
        deg[c] = len(nbrs[c])

    # the best-connected half of the countries is infected early
    by_deg = sorted(deg, key=lambda c: (-deg[c], c))
    early = set(by_deg[:38])
    pos = {c[0]: (c[3], c[4]) for c in COUNTRIES}

    rows = []
    for code, name, cont, lon, lat in COUNTRIES:
        first = code in early
        if code == "CHN":
            dfw = 0
        else:
            dfw = max(1, round(rng.gauss(30 if first else 60, 5)))
        gdp = math.exp(rng.gauss(27.5 if first else 25.8, 0.9))
        pop = math.exp(rng.gauss(17.2, 1.1))
        hc = rng.gauss(3.2 if first else 2.6, 0.3)
        tfp = rng.gauss(0.85 if first else 0.6, 0.12)
        gi = rng.gauss(55 if first else 45, 8)
        dist = haversine_km(pos[code], pos["CHN"])
        rows.append({
            "code": code,
            "DFW": str(dfw),
            "GI": f"{gi:.3f}",
            "GDP": f"{gdp:.6e}",
            "TFP": f"{tfp:.4f}",
            "POP": f"{pop:.6e}",
            "HC": f"{hc:.4f}",
            "GDP.pc": f"{gdp / pop:.4f}",
            "TFP.pc": f"{tfp / math.log(pop):.6f}",
            "CST": "0" if code in LANDLOCKED else "1",
            "DSTFC": f"{dist:.1f}",
            "RDL": f"{rng.gauss(0.9 if first else 0.4, 0.35):.4f}",
            "RLL": f"{rng.gauss(0.8 if first else 0.3, 0.4):.4f}",
            "PRT": f"{rng.gauss(40 if first else 25, 12):.3f}",
            "APRT": f"{rng.uniform(0.0, 100.0):.3f}",
        })
    # one country without a reported first case
    for r in rows:
        if r["code"] == "FJI":
            r["DFW"] = ""

    with open(out / "nodes.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["code", "name", "continent", "lon", "lat"])
        for c in COUNTRIES:
            w.writerow(c)
    with open(out / "edges.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["origin", "dest", "weight"])
        w.writerows(edges)
    with open(out / "variables.csv", "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=list(rows[0].keys()), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data" / "fixture")
