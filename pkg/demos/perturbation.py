"""Perturbing the identity by g(x) = +-ell*x and comparing with the bound kappa/(1 - kappa*ell).

Run: python3 demos/perturbation.py
"""
from fractions import Fraction as Q

from metreg import PerturbInstance, Window, gallery, kappa_hat_lower, regularity_modulus, run_experiment
from metreg.maps import add_single

half = Q(1, 2)
for ell in (Q(1, 8), Q(1, 4)):
    bound = kappa_hat_lower(1, ell)
    for sign in (1, -1):
        gi = gallery.linear_perturbation(ell, Q(1, 20), sign=sign)
        H = add_single(gi["F"], gi["g"])
        W = Window.product([x for x in gi.X.enumerate() if abs(x) < half], [y for y in H.rge if abs(y) < half])
        mod = regularity_modulus(H, W)
        consts = {"a": half, "b": half, "r": half, "c": 0, "kappa": 1, "kappa_hat": bound + Q(1, 100), "ell": ell}
        inst = PerturbInstance(gi["F"], gi.center, consts, g=gi["g"], q_candidates=gi.Y.enumerate())
        report = run_experiment("susvp", inst)
        print(f"ell={ell} sign={sign:+d}: modulus {mod} vs bound {bound}; experiment holds={report.holds}")
