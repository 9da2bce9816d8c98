"""Compare the numba kernels with the uncompiled fallback (FORGE_NO_NUMBA=1).

    python benchmarks/bench_kernels.py [--words N] [--length L]

The fallback runs in a subprocess because the switch is read at import time.
"""

import argparse
import json
import os
import subprocess
import sys
import time

WORKER = r"""
import json, sys, time
import numpy as np
from forge import _accel, kernels
from forge.words import SurfaceGroup

n, length = int(sys.argv[1]), int(sys.argv[2])
G = SurfaceGroup(2)
words = kernels.enumerate_reduced(4, length)[:n]
lengths = np.full(len(words), length)
kernels.dehn_trivial_batch(words[:8], lengths[:8], G.succ, G.rlen)  # compile outside the timer
t0 = time.perf_counter()
mask = kernels.dehn_trivial_batch(words, lengths, G.succ, G.rlen)
dt = time.perf_counter() - t0
print(json.dumps({"numba": _accel.HAVE_NUMBA, "words": len(words), "trivial": int(mask.sum()), "seconds": dt}))
"""


def run(n: int, length: int, fallback: bool) -> dict:
    env = dict(os.environ)
    if fallback:
        env["FORGE_NO_NUMBA"] = "1"
    out = subprocess.run([sys.executable, "-c", WORKER, str(n), str(length)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--words", type=int, default=50_000)
    p.add_argument("--length", type=int, default=8)
    args = p.parse_args()
    rows = [run(args.words, args.length, fb) for fb in (False, True)]
    for r in rows:
        rate = r["words"] / r["seconds"] if r["seconds"] else float("inf")
        label = "numba" if r["numba"] else "fallback"
        print(f"{label:<9} {r['words']:>9} words  {r['seconds']:8.3f} s  {rate:12.0f} words/s  trivial={r['trivial']}")
    if rows[0]["trivial"] != rows[1]["trivial"]:
        sys.exit("paths disagree")
    print(f"speedup {rows[1]['seconds'] / rows[0]['seconds']:.0f}x")


if __name__ == "__main__":
    main()
