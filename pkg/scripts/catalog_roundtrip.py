"""Reconstruct every catalog entry from its Iwasawa subalgebra and print a table.

Usage: python scripts/catalog_roundtrip.py [--seeds N] [--json]
"""

import argparse
import json
import time

from iwasawa import catalog
from iwasawa.reconstruct import reconstruct_from_iwasawa
from iwasawa.satake import render


def _summary(d) -> str:
    lines = render(d, "text").splitlines()
    return " ".join(line.split(": ", 1)[1] for line in lines if line.startswith(("nodes", "arrows")))


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seeds", type=int, default=2)
    p.add_argument("--json", action="store_true")
    args = p.parse_args()
    rows = []
    for label in catalog.CATALOG_LABELS:
        S = catalog.iwasawa_of(catalog.entry(label))
        t0 = time.perf_counter()
        rep = reconstruct_from_iwasawa(S, seeds=tuple(range(args.seeds)))
        rows.append(
            {
                "label": label,
                "reconstructed": rep.label,
                "dim_s": S.dim,
                "dim_m": rep.m.space.dim,
                "dynkin": rep.cartan.type,
                "satake": _summary(rep.satake),
                "seconds": round(time.perf_counter() - t0, 2),
            }
        )
    if args.json:
        print(json.dumps(rows, indent=2))
        return
    for r in rows:
        mark = "ok " if r["label"] == r["reconstructed"] else "BAD"
        print(f"{mark} {r['label']:<9} -> {r['reconstructed']!s:<9} dim s={r['dim_s']:<2} dim m={r['dim_m']} {r['dynkin']:<6} {r['satake']}  {r['seconds']}s")


if __name__ == "__main__":
    main()
