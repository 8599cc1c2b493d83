import json
from fractions import Fraction

import pytest

from weylkit.dynamics import Factor, StandardWeylSystem
from weylkit.polynomial import parse_poly
from weylkit.realization import MissingRealization, convergent, realize, torus_norm
from weylkit.recurrence import (
    ExplicitList,
    FullRange,
    ProbeReport,
    ThresholdSet,
    Verdict,
    cross_check,
    generate_set,
    probe_kronecker,
    probe_topological,
    validate_report,
)
from weylkit.weyl import weyl_polynomials

SQRT2 = realize("sqrt2")


@pytest.fixture(scope="module")
def cubic_set():
    return ThresholdSet.far_from_zero("n^3", SQRT2, horizon=10**4)


def test_sqrt2_realization_precision():
    assert SQRT2.denominator >= 2**256
    assert abs(SQRT2**2 - 2) < Fraction(1, 2**500)


def test_named_convergents():
    assert convergent("golden", depth=10) == Fraction(89, 55)
    assert convergent("e", depth=5) == Fraction(19, 7)
    assert convergent("e", depth=6) == Fraction(87, 32)
    assert realize("3/7") == Fraction(3, 7)
    with pytest.raises(MissingRealization):
        realize("pi")


def test_simple_sets():
    assert generate_set(FullRange(10)) == list(range(1, 11))
    assert generate_set(ExplicitList((7, 5, 5))) == [5, 7]
    assert generate_set(ExplicitList((5, 7, 12), horizon=10)) == [5, 7]


def test_threshold_set_membership(cubic_set):
    R = generate_set(cubic_set)
    assert R and all(1 <= n <= 100 or n > 100 for n in R)
    members = set(R)
    for n in range(1, 101):
        assert (n in members) == (torus_norm(n**3 * SQRT2) > Fraction(1, 4))


def test_threshold_set_needs_realization():
    T = ThresholdSet.far_from_zero("n^3", None, horizon=5)
    with pytest.raises(MissingRealization):
        generate_set(T)


def test_kronecker_no_witness_on_threshold_set(cubic_set):
    rep = probe_kronecker(cubic_set, weyl_polynomials("n,2n,3n"), [SQRT2], Fraction(1, 10))
    assert rep.verdict is Verdict.NO_WITNESS
    assert rep.certificate is not None
    assert rep.near_miss is not None and max(rep.near_miss.residuals) > 0.25


def test_kronecker_witness_on_full_range():
    rep = probe_kronecker(FullRange(1000), weyl_polynomials("n,2n,3n"), [SQRT2], Fraction(1, 4))
    assert rep.verdict is Verdict.WITNESS_FOUND
    w = rep.witnesses[0]
    assert all(r < 0.25 for r in w.residuals)
    # it is the first one
    basis = [parse_poly(t) for t in ("n", "n^2", "n^3")]
    for n in range(1, w.n):
        assert max(torus_norm(q(n) * SQRT2) for q in basis) >= Fraction(1, 4)


def test_kronecker_threshold_set_against_the_other_family(cubic_set):
    rep = probe_kronecker(cubic_set, weyl_polynomials("n,2n,n^2"), [SQRT2], Fraction(1, 5))
    assert rep.certificate is None
    assert validate_report(rep)
    # frozen search outcome
    assert rep.verdict is Verdict.WITNESS_FOUND and rep.first == 39


def test_monotone_in_epsilon():
    W = weyl_polynomials("n,2n")
    small = probe_kronecker(FullRange(2000), W, [SQRT2], Fraction(1, 20), max_witnesses=None)
    big = probe_kronecker(FullRange(2000), W, [SQRT2], Fraction(1, 8), max_witnesses=None)
    assert {w.n for w in small.witnesses} <= {w.n for w in big.witnesses}


def test_report_round_trip():
    rep = probe_kronecker(FullRange(1000), weyl_polynomials("n,2n"), [SQRT2], Fraction(1, 4), max_witnesses=5)
    again = ProbeReport.from_json(rep.to_json())
    assert again == rep
    assert validate_report(again)
    d = json.loads(rep.to_json())
    assert d["schema"] == "weylkit/1"
    assert set(d) >= {"verdict", "epsilon", "horizon", "witnesses", "near_miss", "search_params"}


def test_tampered_report_fails_validation():
    rep = probe_kronecker(FullRange(1000), weyl_polynomials("n,2n"), [SQRT2], Fraction(1, 4))
    d = rep.to_dict()
    d["witnesses"][0]["n"] += 1
    assert not validate_report(ProbeReport.from_dict(d))


def test_determinism():
    a = probe_topological(FullRange(300), StandardWeylSystem.single(2, "a", SQRT2), "n,2n", Fraction(1, 20),
                          max_witnesses=None)
    b = probe_topological(FullRange(300), StandardWeylSystem.single(2, "a", SQRT2), "n,2n", Fraction(1, 20),
                          max_witnesses=None)
    assert a.to_json() == b.to_json()


def test_topological_rotation():
    rep = probe_topological(FullRange(1000), StandardWeylSystem.single(1, "a", SQRT2), "n", Fraction(3, 10))
    assert rep.verdict is Verdict.WITNESS_FOUND and validate_report(rep)


def test_topological_two_step():
    rep = probe_topological(FullRange(10**4), StandardWeylSystem.single(2, "a", SQRT2), "n,2n", Fraction(1, 4))
    assert rep.verdict is Verdict.WITNESS_FOUND
    assert rep.search_params["grid_points"] == 1000
    assert validate_report(ProbeReport.from_json(rep.to_json()))


def test_topological_whole_torus_ball():
    S = StandardWeylSystem((Factor(2, "a", SQRT2), Factor(1, "b", convergent("golden"))))
    rep = probe_topological(ExplicitList((4, 9)), S, "n^2,n^3", Fraction(6, 10))
    assert rep.first == 4


def test_topological_needs_realization():
    with pytest.raises(MissingRealization):
        probe_topological(FullRange(5), StandardWeylSystem.single(1), "n", Fraction(1, 4))


def test_cross_check_rotation():
    S = StandardWeylSystem.single(1, "a", SQRT2)
    cc = cross_check(FullRange(1000), "n", S, Fraction(1, 10))
    assert cc.overlap
    assert not cc.kronecker_only
    assert cc.observed_factor is not None and cc.observed_factor < 2.0 + 1e-9


def test_cross_check_threshold_set(cubic_set):
    S = StandardWeylSystem.single(2, "alpha", SQRT2)
    small = ThresholdSet.far_from_zero("n^3", SQRT2, horizon=2000)
    cc = cross_check(small, "n,2n", S, Fraction(1, 10), grid_points=200)
    assert cc.to_dict()["schema"] == "weylkit/1"
    assert isinstance(cc.notes, tuple)


def test_cross_check_empty():
    S = StandardWeylSystem.single(1, "a", SQRT2)
    cc = cross_check([], "n", S, Fraction(1, 10))
    assert cc.kronecker.verdict is Verdict.NO_WITNESS and cc.topological.verdict is Verdict.NO_WITNESS
    assert cc.agree


def test_epsilon_range_checked():
    with pytest.raises(ValueError):
        probe_kronecker(FullRange(5), ["n"], [SQRT2], Fraction(1, 2))
