"""Four ways to write phi(n), side by side with a plain count.

The exact forms (res1, res3) divide an integer floor sum and refuse any
remainder. The cosine forms (fourier, res2) come back as ApproxInteger: a
raw float, the integer it snaps to, and the distance between them.

Run: python3 demos/totient_formulas.py
"""

from arithid.evaluators import phi_paper
from arithid.errors import DegenerateDomain
from arithid.reference import phi_definition

print(f"{'n':>5} {'count':>6} {'res1':>6} {'res3':>6} {'fourier':>8} {'res2':>6}  worst residual")
for n in (3, 4, 10, 36, 97, 210, 512, 1000):
    row = {}
    worst = 0.0
    for method in ("res1", "res3", "fourier", "res2"):
        try:
            v = phi_paper(n, method)
        except DegenerateDomain:
            row[method] = "-"
            continue
        if hasattr(v, "nearest"):
            worst = max(worst, v.residual)
            v = v.nearest
        row[method] = v
    print(
        f"{n:5d} {phi_definition(n):6d} {row['res1']!s:>6} {row['res3']!s:>6} "
        f"{row['fourier']!s:>8} {row['res2']!s:>6}  {worst:.1e}"
    )

# Small n falls outside some formulas' domains and says so
for n, method in [(2, "res1"), (3, "res3"), (1, "res2")]:
    try:
        phi_paper(n, method)
    except DegenerateDomain as exc:
        print("refused:", exc)

raw = phi_paper(30, "fourier")
print(f"\nfourier at n=30: raw={raw.raw!r} -> {raw.nearest} (residual {raw.residual:.1e})")
