# Looking for return times along a set that avoids small ||n^3 alpha||.
from fractions import Fraction

from weylkit import FullRange, StandardWeylSystem, ThresholdSet, cross_check, generate_set, probe_kronecker, realize
from weylkit import weyl_polynomials

alpha = realize("sqrt2")
R = ThresholdSet.far_from_zero("n^3", alpha, Fraction(1, 4), horizon=10**4)
members = generate_set(R)
print(len(members), "elements below 10^4; first few:", members[:12])

for fam in ("n, 2n, 3n", "n, 2n, n^2"):
    W = weyl_polynomials(fam)
    rep = probe_kronecker(R, W, [alpha], Fraction(1, 5))
    print(f"\nbasis {W}: {rep.verdict.value}")
    if rep.witnesses:
        print("  first witness", rep.first, rep.witnesses[0].residuals)
    if rep.certificate:
        print("  ", rep.certificate)

# Kronecker and topological witnesses for a rotation
S = StandardWeylSystem.single(1, "alpha", alpha)
cc = cross_check(FullRange(1000), "n", S, Fraction(1, 10))
print(f"\nrotation: {len(cc.overlap)} shared witnesses, "
      f"{len(cc.topological_only)} topological only, observed factor {cc.observed_factor:.3f}")
