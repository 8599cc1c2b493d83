# Cesaro averages of polynomial phases at alpha = sqrt(2).
from weylkit import PhaseSequence, realize, running_averages

alpha = realize("sqrt2")  # a convergent with denominator >= 2^256
print("alpha ~", float(alpha), " denominator bits:", alpha.denominator.bit_length())

N = 10**5
checkpoints = [10**3, 10**4, 3 * 10**4, 10**5]

seqs = {
    "e(n^2 a)": PhaseSequence.phase("n^2", alpha),
    "e(n^3 a) e((n - n^2) a)": PhaseSequence.phase("n^3", alpha) * PhaseSequence.phase("n - n^2", alpha),
    "e(n^4 a) e((2n^3 - n^4) a)": PhaseSequence.phase("n^4", alpha) * PhaseSequence.phase("2n^3 - n^4", alpha),
    "e((n^2 - n) a) e((n - n^2) a)": PhaseSequence.phase("n^2 - n", alpha) * PhaseSequence.phase("n - n^2", alpha),
}

for name, seq in seqs.items():
    _, partial = running_averages(seq, N, checkpoints)
    row = "  ".join(f"{abs(partial[c]):.2e}" for c in checkpoints)
    print(f"{name:<32} {row}")
