# Weyl complexity and Weyl polynomial spaces for a few small families.
from weylkit import PolyFamily, complexity_with_trace, scheme_compare, weyl_polynomials, weyl_space

families = ["n", "n, 2n", "n, 2n, 3n", "n, 2n, n^2", "n, 2n, 3n^2", "n, n^2, n^3", "n^2, n^3 + n"]

for text in families:
    P = PolyFamily.parse(text)
    W, trace = complexity_with_trace(P)
    print(f"P = {P}")
    print(f"  W(P) = {W}   dims of span(Lambda_k): {trace}")
    for k in range(1, W + 1):
        print(f"  WP_{k} = {weyl_space(P, k)}")
    print()

# The space only depends on the recurrence scheme, so comparing spaces
# compares schemes.
pairs = [("n, 2n", "n^2"), ("n, 2n, 3n", "n, 2n, 3n^3"), ("n, 2n, 3n", "n, 2n, 3n^2")]
for a, b in pairs:
    cmp = scheme_compare(a, b)
    print(f"{{{a}}} vs {{{b}}}: {cmp.relation.value}")
    for c in cmp.certificates():
        print("   witness polynomial:", c)

# the n^4 coefficient of the third generator grows with c
for c in (1, 2, 3, 4):
    basis = weyl_polynomials(f"n, 2n, {c}n^2").basis_polynomials
    print(f"c = {c}:", [str(p) for p in basis])
