#!/usr/bin/env python3
# Copyright 2026 The cvsteer Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Plot a sweep.csv or regimes.csv written by `cvsteer sweep` / `cvsteer regimes`.

Usage: plot_sweep.py sweep.csv [-o out.png] [--columns S_A_B,S_A_C,S_A_BC]
Without --columns the per-rail steering numbers S2_* that have data are drawn.
"""

import argparse
import csv

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("csv")
    ap.add_argument("-o", "--output", default="sweep.png")
    ap.add_argument("--columns", default="")
    args = ap.parse_args()

    with open(args.csv, newline="") as f:
        rows = list(csv.DictReader(f))
    if not rows:
        raise SystemExit("no rows")
    columns = [c for c in args.columns.split(",") if c] or [
        c for c in rows[0] if c.startswith("S2_") and any(r[c] for r in rows)
    ]
    x = [float(r["parameter"]) for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    for c in columns:
        pts = [(xi, float(r[c])) for xi, r in zip(x, rows) if r[c]]
        ax.plot([p[0] for p in pts], [p[1] for p in pts], label=c)
    ax.axhline(1.0, color="grey", linestyle="--", linewidth=0.8)
    ax.set_xlabel("parameter")
    ax.legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(args.output, dpi=150)


if __name__ == "__main__":
    main()
