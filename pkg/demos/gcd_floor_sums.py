"""gcd(k, n) recovered from a floor double sum, and floor reciprocity.

Run: python3 demos/gcd_floor_sums.py
"""

import math

import numpy as np

from arithid.evaluators import floor_reciprocity_sides, gcd_via_floor, gcd_via_floor_many

# A single value: 2 * sum_{j<n} floor(jk/n) + k + n - kn
print("gcd via floor sums, n = 12")
for k in (1, 8, 9, 12, 30):
    print(f"  k={k:2d}: {gcd_via_floor(k, 12):2d}   (math.gcd says {math.gcd(k, 12)})")

# k larger than n works too, and the table is symmetric
n = 60
table = np.array([gcd_via_floor_many(np.arange(1, n + 1), m) for m in range(1, n + 1)])
print("\n60x60 table symmetric:", bool(np.array_equal(table, table.T)))
print("agrees with np.gcd:", bool(np.array_equal(table, np.gcd.outer(np.arange(1, n + 1), np.arange(1, n + 1)))))

print("\nfloor reciprocity: both sides for a few pairs")
for m, n in [(4, 6), (7, 7), (9, 15), (13, 21)]:
    lhs, rhs = floor_reciprocity_sides(m, n)
    print(f"  (m, n) = ({m}, {n}): {lhs} = {rhs}")
