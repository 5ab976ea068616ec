"""A regular F plus a Lipschitz G whose sum is not regular near the origin.

Run: python3 demos/sum_failure.py
"""
from fractions import Fraction as Q

from metreg import PerturbInstance, check_aubin, check_sum_stable, find_violation, gallery, run_experiment

gi = gallery.sum_failure(5, Q(1, 100))
F, G, H = gi["F"], gi["G"], gi["H"]
zero = Q(0)

print("G has the Aubin property for every ell:",
      all(check_aubin(G, gi.X.enumerate(), None, ell) for ell in (Q(1, 1000), Q(1, 10), Q(1))))

hit = find_violation(H, gi.constants["kappa_hat"], list(gi.windows.values()), (zero, zero))
print(f"violation at x={hit['x']}, y={hit['y']}: dist(x, H^-1 y) = {hit['lhs']} > kappa_hat * dist = {hit['rhs']}")
for name, s in zip(gi.windows, hit["scales"]):
    print(f"    window {name}: {s['pairs']} pairs, violated={s['violated']}")

print("sum-stable at level 1/2:", bool(check_sum_stable(F, G, (zero, zero, zero), [(Q(1, 2), Q(1, 2))])))

report = run_experiment("acn", PerturbInstance(F, gi.center, gi.constants, G=G))
print("stability statement: hypotheses failing ->", report.failed_hypotheses())
print("conclusion holds:", report.conclusion.holds, "| report consistent:", report.consistent)
