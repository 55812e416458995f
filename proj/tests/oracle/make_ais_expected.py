#!/usr/bin/env python3
"""Freeze reference decodes of tests/data/ais_corpus.nm4 using pyais.

Writes tests/data/ais_corpus_expected.csv. Values are pyais' own (raw
sentinels included, speed in knots); the C++ test applies unit conversion
and the not-available mapping itself.

    pip install pyais==3.3.1
    python3 tests/oracle/make_ais_expected.py
"""
import csv
import pathlib
import re

import pyais
from pyais.messages import NMEAMessage

HERE = pathlib.Path(__file__).resolve().parent
CORPUS = HERE.parent / "data" / "ais_corpus.nm4"
OUT = HERE.parent / "data" / "ais_corpus_expected.csv"

TAG_BLOCK = re.compile(r"^\\[^\\]*\\")
SUPPORTED = {1, 2, 3, 5, 18}

COLUMNS = ["line", "msg_type", "mmsi", "lon", "lat", "speed_kn", "course", "heading", "second",
           "imo", "callsign", "shipname", "ship_type", "to_bow", "to_stern", "to_port",
           "to_starboard", "epfd", "draught", "payload", "fill_bits"]


def main():
    rows = []
    pending = {}
    for lineno, raw in enumerate(CORPUS.read_text().split("\n"), start=1):
        text = TAG_BLOCK.sub("", raw.strip())
        if not text:
            continue
        try:
            msg = NMEAMessage(text.encode())
        except Exception:
            continue
        if not msg.is_valid:
            continue
        if msg.frag_cnt == 1:
            group = [msg]
        else:
            key = (msg.seq_id, msg.channel)
            if msg.frag_num == 1:
                pending[key] = [msg]
                continue
            if key not in pending:
                continue
            pending[key].append(msg)
            if len(pending[key]) < msg.frag_cnt:
                continue
            group = pending.pop(key)
        whole = NMEAMessage.assemble_from_iterable(group) if len(group) > 1 else group[0]
        try:
            decoded = whole.decode()
        except Exception:
            continue
        if decoded.msg_type not in SUPPORTED:
            continue
        d = decoded.asdict()
        payload = "".join(m.payload.decode() for m in group)
        row = {"line": lineno, "msg_type": d["msg_type"], "mmsi": d["mmsi"],
               "payload": payload, "fill_bits": group[-1].fill_bits}
        if decoded.msg_type == 5:
            for k in ("imo", "callsign", "shipname", "ship_type", "to_bow", "to_stern",
                      "to_port", "to_starboard", "epfd", "draught"):
                v = d.get(k)
                row[k] = int(v) if hasattr(v, "value") else v
        else:
            row.update(lon=d["lon"], lat=d["lat"], speed_kn=d["speed"], course=d["course"],
                       heading=d["heading"], second=d["second"])
        rows.append(row)

    with OUT.open("w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: ("" if r.get(k) is None else r.get(k)) for k in COLUMNS})
    print(f"pyais {pyais.__version__}: {len(rows)} reports -> {OUT}")


if __name__ == "__main__":
    main()
