"""Menon's identity and the four gcd-sum forms against brute force.

Run: python3 demos/gcd_sums_and_menon.py
"""

from arithid.evaluators import PILLAI_FORMS, menon_rhs, pillai_paper, tau_paper
from arithid.reference import phi_definition, pillai_definition, tau_definition

print("Menon: sum of gcd(k-1, n) over units k equals phi(n) * tau(n)")
for n in (1, 4, 12, 30, 64, 360, 1001):
    print(f"  n={n:5d}: {menon_rhs(n):7d} = {phi_definition(n)} * {tau_definition(n)}")

print("\ngcd-sum P(n) = sum_k gcd(k, n), four closed forms")
for n in (12, 100, 720, 9973):
    forms = {f: pillai_paper(n, f) for f in PILLAI_FORMS}
    print(f"  n={n}: brute force {pillai_definition(n)}; " + ", ".join(f"{f}={v}" for f, v in forms.items()))

print("\ndivisor count from totient-style sums")
for n in (6, 12, 30, 128):
    print(
        f"  tau({n}) = {tau_definition(n)}: res1_form={tau_paper(n, 'res1_form')}, "
        f"res3_form={tau_paper(n, 'res3_form')}, toto={tau_paper(n, 'toto').nearest}"
    )
