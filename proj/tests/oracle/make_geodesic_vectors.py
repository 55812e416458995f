#!/usr/bin/env python3
"""Freeze WGS84 direct-problem vectors from GeographicLib (Karney's series,
accurate to ~15 nm) into tests/data/geodesic_vectors.csv.

    pip install geographiclib==2.1
    python3 tests/oracle/make_geodesic_vectors.py
"""
import csv
import math
import pathlib
import random

from geographiclib.geodesic import Geodesic

OUT = pathlib.Path(__file__).resolve().parent.parent / "data" / "geodesic_vectors.csv"
G = Geodesic.WGS84


def main():
    rng = random.Random(20240607)
    cases = [
        (0.0, 0.0, 90.0, G.a * math.pi / 180.0),   # one degree along the equator
        (0.0, 0.0, 0.0, 1000.0),
        (42.3469, -71.0237, 95.0, 5000.0),
        (42.3469, -71.0237, 0.0, 1000.0),
        (-33.9, 18.4, 250.0, 12.0e6),
        (89.0, 10.0, 45.0, 200.0e3),
        (-60.0, 170.0, 120.0, 3.0e6),             # crosses the antimeridian
        (10.0, -179.9, 270.0, 50.0e3),
    ]
    for _ in range(240):
        lat = math.degrees(math.asin(2.0 * rng.random() - 1.0))
        lon = 360.0 * rng.random() - 180.0
        azi = 360.0 * rng.random()
        s = math.exp(math.log(1.0) + (math.log(15.0e6) - math.log(1.0)) * rng.random())
        cases.append((lat, lon, azi, s))

    with OUT.open("w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["lat1", "lon1", "azi1", "s12", "lat2", "lon2", "azi2"])
        for lat1, lon1, azi1, s12 in cases:
            r = G.Direct(lat1, lon1, azi1, s12)
            w.writerow([repr(lat1), repr(lon1), repr(azi1), repr(s12),
                        repr(r["lat2"]), repr(r["lon2"]), repr(r["azi2"] % 360.0)])
    print(f"{len(cases)} vectors -> {OUT}")


if __name__ == "__main__":
    main()
