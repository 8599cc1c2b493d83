import random
from fractions import Fraction

import numpy as np
import pytest

from families import correlation_instance, expansion_instance
from weylkit.dynamics import (
    CharacterSum,
    Factor,
    GaussianRational,
    Phase,
    PhaseSequence,
    StandardWeylSystem,
    correlate_closed_form,
    correlate_exact,
    correlate_exact_sum,
    ergodic_average,
    expansion,
    integer_roots,
    orbit,
    pushforward,
    running_averages,
    step,
)
from weylkit.polynomial import parse_poly
from weylkit.realization import MissingRealization, convergent, frac, realize
from weylkit.weyl import PolyFamily, contains_poly, weyl_space

F = Fraction
SQRT2 = realize("sqrt2")


def sys1(d, value=None):
    return StandardWeylSystem.single(d, "alpha", value)


# -- pushforward ---------------------------------------------------------

@pytest.mark.parametrize("d,v,m,freq,phase", [
    (2, (0, 1), 1, (1, 1), 0),
    (1, (3,), 5, (3,), 15),
    (3, (0, 0, 1), 2, (1, 2, 1), 0),
])
def test_pushforward_examples(d, v, m, freq, phase):
    assert pushforward(sys1(d), v, m) == ((phase,), freq)


def test_pushforward_cocycle():
    rng = random.Random(5)
    for _ in range(300):
        S = StandardWeylSystem((Factor(rng.randint(1, 3), "a"), Factor(rng.randint(1, 3), "b")))
        v = tuple(rng.randint(-4, 4) for _ in range(S.dim))
        m, m2 = rng.randint(-20, 20), rng.randint(-20, 20)
        ph, fr = pushforward(S, v, m + m2)
        ph1, fr1 = pushforward(S, v, m)
        ph2, fr2 = pushforward(S, fr1, m2)
        assert fr == fr2 and ph == tuple(a + b for a, b in zip(ph1, ph2))


def test_pushforward_matches_orbit_numerically():
    S = sys1(3, SQRT2)
    x = (F(1, 3), F(2, 7), F(5, 11))
    v = (2, -1, 3)
    for m in (1, 4, 9):
        (ph,), fr = pushforward(S, v, m)
        lhs = frac(sum(a * b for a, b in zip(v, orbit(S, x, m))))
        rhs = frac(ph * SQRT2 + sum(a * b for a, b in zip(fr, x)))
        assert lhs == rhs


# -- exact correlations --------------------------------------------------

def test_correlate_exact_examples():
    assert correlate_exact(sys1(1), [(-1,), (1,)], "n^2", 3) == Phase((9,))
    assert correlate_exact(sys1(2), [(-1, -1), (1, 2), (0, -1)], "n,2n", 2) == Phase((-2,))
    assert correlate_exact(sys1(2), [(0, -1), (0, 1)], "n", 1) == 0


def test_closed_form_examples():
    cf = correlate_closed_form(sys1(2), [(-1, -1), (1, 2), (0, -1)], "n,2n")
    assert cf.kind == "phase" and cf.polys == (parse_poly("n - n^2"),)
    cf = correlate_closed_form(sys1(1), [(-1,), (1,)], "n^2")
    assert cf.kind == "phase" and cf.polys == (parse_poly("n^2"),)
    cf = correlate_closed_form(sys1(2), [(0, -1), (0, 1)], "n")
    assert cf.kind == "zero" and cf.exceptional_set == (0,)
    assert cf.value_at(0) == correlate_exact(sys1(2), [(0, -1), (0, 1)], "n", 0)


def test_closed_form_matches_exact_on_random_instances():
    rng = random.Random(17)
    for _ in range(150):
        P, d, chars = correlation_instance(rng)
        S = sys1(d)
        cf = correlate_closed_form(S, chars, P)
        for n in range(-5, 60):
            if cf.kind == "zero" and n in cf.exceptional_set:
                continue
            assert cf.value_at(n) == correlate_exact(S, chars, P, n)
        if cf.kind == "phase":
            assert contains_poly(weyl_space(P, d), cf.polys[0])


def test_exceptional_set_is_exact():
    rng = random.Random(23)
    for _ in range(150):
        P, d, chars = correlation_instance(rng)
        S = sys1(d)
        cf = correlate_closed_form(S, chars, P)
        if cf.kind != "zero":
            continue
        for n in cf.exceptional_set:
            assert correlate_exact(S, chars, P, n) != 0
            assert cf.value_at(n) == correlate_exact(S, chars, P, n)


def test_family_with_constant_terms():
    S = sys1(2)
    P = PolyFamily.parse("n+1, 2n")
    for chars in ([(-1, 0), (1, 0), (0, 0)], [(1, -1), (-1, 1), (0, 0)], [(0, 0), (1, 1), (-1, -1)]):
        cf = correlate_closed_form(S, chars, P)
        for n in range(-4, 20):
            if cf.kind == "zero" and n in cf.exceptional_set:
                assert correlate_exact(S, chars, P, n) != 0
            else:
                assert cf.value_at(n) == correlate_exact(S, chars, P, n)


def test_product_system_closed_form():
    S = StandardWeylSystem((Factor(2, "a"), Factor(1, "b")))
    chars = [(-1, -1, -1), (1, 2, 0), (0, -1, 1)]
    cf = correlate_closed_form(S, chars, "n,2n")
    assert cf.kind == "phase" and cf.polys == (parse_poly("n - n^2"), parse_poly("2n"))
    for n in range(10):
        assert cf.value_at(n) == correlate_exact(S, chars, "n,2n", n)


def test_integer_roots():
    assert integer_roots(parse_poly("n^3 - 7n + 6")) == [-3, 1, 2]
    assert integer_roots(parse_poly("binom(n,3)")) == [0, 1, 2]
    assert integer_roots(parse_poly("n^2 + 1")) == []


# -- expansion -----------------------------------------------------------

def test_single_character_expansion():
    S = sys1(2)
    fs = [CharacterSum.character(v) for v in [(-1, -1), (1, 2), (0, -1)]]
    exp = expansion(S, fs, "n,2n")
    assert len(exp.terms) == 1
    t = exp.terms[0]
    assert t.coeff == GaussianRational(1) and t.polys == (parse_poly("n - n^2"),)


def test_expansion_bound_and_evaluation():
    rng = random.Random(31)
    for _ in range(40):
        S, fs, P = expansion_instance(rng)
        exp = expansion(S, fs, P)
        assert exp.terms
        assert exp.l2_squared() <= exp.l2_bound_squared()
        for n in range(1, 40):
            full = correlate_exact_sum(S, fs, P, n)
            assert exp.evaluate_exact(n, complete=True) == full
            if n not in exp.exceptional_set:
                assert exp.evaluate_exact(n) == full
        for t in exp.terms:
            for q, f in zip(t.polys, S.factors):
                assert contains_poly(weyl_space(P, f.d), q)


def test_collected_merges_equal_phases():
    S = sys1(1)
    f0 = CharacterSum.parse("1:-1; 1:1")
    f1 = CharacterSum.parse("1:1; 1:-1")
    exp = expansion(S, [f0, f1], "n")
    assert len(exp.terms) == 2
    assert exp.collected() == {(parse_poly("n"),): GaussianRational(1), (parse_poly("-n"),): GaussianRational(1)}


def test_gaussian_rational_parsing():
    assert GaussianRational.parse("1/2-1/3i") == GaussianRational(F(1, 2), F(-1, 3))
    assert GaussianRational.parse("-i") == GaussianRational(0, -1)
    assert GaussianRational.parse("2i") == GaussianRational(0, 2)
    assert str(GaussianRational(F(1, 2), -1)) == "1/2-i"
    with pytest.raises(ValueError):
        GaussianRational.parse("x")


def test_character_sum_norm():
    f = CharacterSum.parse("1:0,1; 1/2i:1,0; 1/2:1,0")
    assert f.norm2() == 1 + F(1, 2)


# -- numerics ------------------------------------------------------------

def test_constant_average():
    assert ergodic_average(PhaseSequence.one(), 17) == 1


def test_quadratic_phase_average_small():
    assert abs(ergodic_average(PhaseSequence.phase("n^2", SQRT2), 10**5)) < 0.05


def test_non_weyl_product_average_small():
    seq = PhaseSequence.phase("n^3", SQRT2) * PhaseSequence.phase("n - n^2", SQRT2)
    assert abs(ergodic_average(seq, 10**5)) < 0.05


def test_conjugate_phases_cancel_exactly():
    seq = PhaseSequence.phase("n^3 - n^4/2", SQRT2) * PhaseSequence.phase("n^4/2 - n^3", SQRT2)
    assert seq.terms[0].phases == ()
    assert ergodic_average(seq, 1000) == 1


def test_sharding_matches_sequential():
    seq = PhaseSequence.phase("n^2", SQRT2)
    a, cps = running_averages(seq, 5000, [500, 2500])
    b, cps2 = running_averages(seq, 5000, [500, 2500], shards=7)
    assert abs(a - b) < 1e-15
    assert all(abs(cps[c] - cps2[c]) < 1e-15 for c in cps)


def test_phase_values_use_exact_reduction():
    # huge multipliers: compare with exact fractional parts
    seq = PhaseSequence.phase("n^4", SQRT2)
    vals = seq.values(10**6, 10**6 + 5)
    for k, n in enumerate(range(10**6, 10**6 + 5)):
        t = float(frac(n**4 * SQRT2))
        assert abs(complex(vals[k]) - np.exp(2j * np.pi * t)) < 1e-12


def test_extended_precision_available():
    assert np.finfo(np.longdouble).nmant >= 52


def test_closed_form_sequence_matches_phase_numeric():
    S = sys1(2, SQRT2)
    cf = correlate_closed_form(S, [(-1, -1), (1, 2), (0, -1)], "n,2n")
    seq = PhaseSequence.from_closed_form(cf, S)
    for n in (1, 2, 50):
        assert abs(seq.value(n) - cf.value_at(n).numeric(S)) < 1e-12


def test_missing_realization():
    S = sys1(2)
    with pytest.raises(MissingRealization):
        orbit(S, (0, 0), 3)
    with pytest.raises(MissingRealization):
        Phase((1,)).numeric(S)


# -- orbits --------------------------------------------------------------

def test_orbit_examples():
    S = sys1(2, SQRT2)
    assert orbit(S, (0, 0), 1) == (frac(SQRT2), 0)
    assert orbit(S, (0, 0), 2) == (frac(2 * SQRT2), frac(SQRT2))
    S3 = sys1(3, SQRT2)
    for n in (0, 5, 1234):
        assert orbit(S3, (0, 0, 0), n) == tuple(frac(c * SQRT2) for c in (n, n * (n - 1) // 2, n * (n - 1) * (n - 2) // 6))


def test_orbit_matches_iteration():
    S = StandardWeylSystem((Factor(3, "a", SQRT2), Factor(2, "b", convergent("golden"))))
    x = (F(1, 3), F(1, 5), F(1, 7), F(2, 9), F(3, 11))
    y = x
    for n in range(1, 1001):
        y = step(S, y)
        if n % 97 == 0 or n == 1000:
            assert orbit(S, x, n) == y


def test_negative_iterate_inverts():
    S = sys1(3, SQRT2)
    x = (F(1, 4), F(1, 3), F(1, 2))
    assert orbit(S, orbit(S, x, 37), -37) == x


def test_system_text_round_trip():
    text = "factor d=2 alpha=a=1/3\n# comment\nfactor d=1 alpha=sqrt2\n"
    S = StandardWeylSystem.parse(text)
    assert S.dim == 3 and S.factors[0].value == F(1, 3) and S.factors[1].value == SQRT2
    assert StandardWeylSystem.parse(S.to_text()) == S
    with pytest.raises(ValueError):
        StandardWeylSystem.parse("factor d=x alpha=a")
