# Character multicorrelations on a 2-step system, exactly and in closed form.
from weylkit import CharacterSum, StandardWeylSystem, correlate_closed_form, correlate_exact, expansion

S = StandardWeylSystem.single(2, "alpha")
P = "n, 2n"

chars = [(-1, -1), (1, 2), (0, -1)]
cf = correlate_closed_form(S, chars, P)
print("closed form:", cf.kind, [str(q) for q in cf.polys])
for n in range(6):
    print(n, correlate_exact(S, chars, P, n), cf.value_at(n))

# this one vanishes except where every pushed frequency is zero
chars = [(0, -1), (0, 1)]
cf = correlate_closed_form(S, chars, "n")
print("\nzero closed form, exceptional n:", cf.exceptional_set)
print([correlate_exact(S, chars, "n", n) for n in range(4)])

# trigonometric polynomials: a finite expansion in polynomial phases
f0 = CharacterSum.parse("1:-1,-1; 1/2:0,0")
f1 = CharacterSum.parse("1:1,2; i:0,1")
f2 = CharacterSum.parse("1:0,-1; -1/3:1,0")
exp = expansion(S, [f0, f1, f2], P)
print(f"\n{len(exp.terms)} phase terms")
for t in exp.terms:
    print(f"  {str(t.coeff):>6}  e(({t.polys[0]}) alpha)   from {t.chars}")
print("sum |c|^2 =", exp.l2_squared(), " bound:", exp.l2_bound_squared())
print("exceptional n:", exp.exceptional_set)
