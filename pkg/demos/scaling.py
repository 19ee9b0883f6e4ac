"""Timing the quadratic res1 form against the factorisation-based baseline.

Run: python3 demos/scaling.py
"""

from arithid.bench import bench, loglog_slope

grid = [250, 500, 1000, 2000]
for target in ("I3", "phi_factored"):
    recs = bench([target], grid, reps=5)
    print(target)
    for r in recs:
        print(f"  n={r.n:5d}  median {r.median_ns / 1e3:9.1f} us  checksum {r.checksum}")
    print(f"  log-log slope {loglog_slope(recs):.2f}")
