"""Regularity modulus of F(x) = {x, -1} on shrinking and growing windows.

Run: python3 demos/two_lines.py
"""
from fractions import Fraction as Q

from metreg import gallery
from metreg.regularity import modulus_with_witness

for alpha, beta, h in [(Q(1, 4), Q(1, 4), Q(1, 20)), (Q(1), Q(1, 2), Q(1, 50)), (Q(1), Q(3, 4), Q(1, 100))]:
    gi = gallery.two_lines(alpha, beta, h)
    mod, where = modulus_with_witness(gi["F"], gi.windows["W"])
    print(f"alpha={alpha} beta={beta} h={h}: modulus {mod} (~{float(mod):.4f}) attained at ({where[0]}, {where[1]})")
    if "modulus_lower_bound" in gi.expected:
        print(f"    grid lower bound {gi.expected['modulus_lower_bound']}")

# Near y = -1 the second branch takes over and the constant blows up as the grid refines.
for h in (Q(1, 10), Q(1, 20), Q(1, 40)):
    gi = gallery.two_lines(Q(3, 2), Q(3, 2), h)
    mod, where = modulus_with_witness(gi["F"], gi.windows["W"])
    print(f"beta=3/2 h={h}: modulus {mod} at ({where[0]}, {where[1]})")
