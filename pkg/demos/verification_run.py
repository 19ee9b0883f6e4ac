"""Sweep a few identities, then show what a failure looks like.

Run: python3 demos/verification_run.py
"""

import dataclasses
import json

from arithid import registry
from arithid.verify import RangeConfig, report_to_dict, report_to_text, verify_all

cfg = RangeConfig(max_n=300, max_pair=40, max_kn_n=40)
report = verify_all(cfg, ids=["I1", "I3", "I6", "I9", "I10", "I22"])
print(report_to_text(report))

# A deliberately broken evaluator: Menon's right side off by one at n = 97
menon = registry.get("I6")


def broken(a, n):
    lhs, rhs, res = menon.check(a, n)
    return lhs, rhs + (n == 97), res


bad = verify_all(RangeConfig(max_n=120), descriptors=[dataclasses.replace(menon, check=broken)])
print("\nwith a planted bug:", bad.verdict)
print(json.dumps(report_to_dict(bad)["identities"][0]["failures"], indent=2))
