#!/usr/bin/env python3
"""Pilot calibration of the LIL running-maximum bands.

Runs `hull_lil lil` for each pilot seed and records the merged running maximum
at n_max. The band is mean +- 4 standard deviations of the pilot values.
"""

import argparse
import json
import statistics
import subprocess
import tempfile
from pathlib import Path

CASES = {
    "drift_area": ["--functional", "area", "--drift", "1,0", "--sigma", "I"],
    "zero_drift_area": ["--functional", "area", "--zero-drift", "--sigma", "I"],
}


def merged_at_nmax(cli, args, n_max, replicas, seed, threads):
    with tempfile.TemporaryDirectory() as tmp:
        cmd = [cli, "lil", *args, "--nmax", str(n_max), "--replicas", str(replicas),
               "--seed", str(seed), "--threads", str(threads), "--out-dir", tmp]
        subprocess.run(cmd, check=True, stdout=subprocess.DEVNULL)
        summary = json.loads((Path(tmp) / "lil_summary.json").read_text())
    return summary["merged_max_at"][-1]["value"], summary["constant_theoretical"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cli", required=True)
    ap.add_argument("--out", required=True)
    ap.add_argument("--n-max", type=int, default=1000000)
    ap.add_argument("--replicas", type=int, default=50)
    ap.add_argument("--seeds", default="101,102,103,104,105,106,107,108,109,110")
    ap.add_argument("--threads", type=int, default=1)
    opt = ap.parse_args()
    seeds = [int(s) for s in opt.seeds.split(",")]

    doc = {"n_max": opt.n_max, "replicas": opt.replicas, "pilot_seeds": seeds, "bands": {}}
    for name, args in CASES.items():
        values = []
        constant = None
        for seed in seeds:
            v, constant = merged_at_nmax(opt.cli, args, opt.n_max, opt.replicas, seed, opt.threads)
            values.append(v)
        mean = statistics.fmean(values)
        sd = statistics.stdev(values)
        doc["bands"][name] = {
            "args": args,
            "constant_theoretical": constant,
            "pilot_values": values,
            "mean": mean,
            "sd": sd,
            "lower": mean - 4.0 * sd,
            "upper": mean + 4.0 * sd,
        }
    Path(opt.out).write_text(json.dumps(doc, indent=2) + "\n")


if __name__ == "__main__":
    main()
