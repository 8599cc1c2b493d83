"""Candidate recurrence sets and witness searches.

Both probes are semi-decision procedures.  ``WitnessFound`` comes with
residuals that are recomputed exactly; ``NoWitnessUpToHorizon`` only says
that nothing turned up below the horizon, unless the report also carries an
analytic certificate.

Distances on the torus are ``||x|| = distance to the nearest integer``,
combined over coordinates with the maximum.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.stats import qmc

from .dynamics import StandardWeylSystem, orbit
from .polynomial import IntegralPolynomial, binom, parse_poly
from .realization import MissingRealization, frac, torus_norm
from .weyl import PolyFamily, WeylSpace, _family, integral_basis, weyl_space

__all__ = [
    "SCHEMA",
    "Verdict",
    "ThresholdSet",
    "ExplicitList",
    "FullRange",
    "RecurrenceSetSpec",
    "generate_set",
    "Witness",
    "ProbeReport",
    "probe_kronecker",
    "probe_topological",
    "validate_report",
    "CrossCheck",
    "cross_check",
]

SCHEMA = "weylkit/1"
GRID_POINTS = 1000
DYADIC_BITS = 30


class Verdict(enum.Enum):
    WITNESS_FOUND = "WitnessFound"
    NO_WITNESS = "NoWitnessUpToHorizon"


# ---------------------------------------------------------------------------
# sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ThresholdSet:
    """``{1 <= n <= horizon : frac(q(n) alpha) in interval}``.

    The interval is ``[lo, hi]`` with either end optionally open.
    :meth:`far_from_zero` builds ``{n : ||q(n) alpha|| > t}``.
    """

    q: IntegralPolynomial
    alpha: Fraction | None
    lo: Fraction
    hi: Fraction
    horizon: int
    lo_open: bool = False
    hi_open: bool = False
    symbol: str = "alpha"

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if not (0 <= self.lo <= self.hi < 1):
            raise ValueError("interval endpoints must satisfy 0 <= lo <= hi < 1")
        if self.horizon < 1:
            raise ValueError("horizon must be at least 1")

    @classmethod
    def far_from_zero(cls, q, alpha, threshold=Fraction(1, 4), horizon: int = 10**4,
                      symbol: str = "alpha") -> "ThresholdSet":
        t = Fraction(threshold)
        if not (0 <= t < Fraction(1, 2)):
            raise ValueError("threshold must lie in [0, 1/2)")
        if isinstance(q, str):
            q = parse_poly(q)
        return cls(q, Fraction(alpha) if alpha is not None else None, t, 1 - t, horizon,
                   lo_open=True, hi_open=True, symbol=symbol)

    def member(self, n: int) -> bool:
        if self.alpha is None:
            raise MissingRealization(f"rotation {self.symbol!r} has no numeric realization")
        x = frac(self.q(n) * self.alpha)
        above = x > self.lo if self.lo_open else x >= self.lo
        below = x < self.hi if self.hi_open else x <= self.hi
        return above and below

    def min_distance(self) -> tuple[Fraction, bool]:
        """Lower bound ``t`` on ``||q(n) alpha||`` over the set, and whether it is strict."""
        if self.lo <= 1 - self.hi:
            return self.lo, self.lo_open
        return 1 - self.hi, self.hi_open


@dataclass(frozen=True)
class ExplicitList:
    values: tuple[int, ...]
    horizon: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(sorted(set(int(v) for v in self.values))))


@dataclass(frozen=True)
class FullRange:
    horizon: int

    def __post_init__(self):
        if self.horizon < 1:
            raise ValueError("horizon must be at least 1")


RecurrenceSetSpec = ThresholdSet | ExplicitList | FullRange


def generate_set(spec: RecurrenceSetSpec) -> list[int]:
    if isinstance(spec, FullRange):
        return list(range(1, spec.horizon + 1))
    if isinstance(spec, ExplicitList):
        if spec.horizon is None:
            return list(spec.values)
        return [v for v in spec.values if v <= spec.horizon]
    if isinstance(spec, ThresholdSet):
        return [n for n in range(1, spec.horizon + 1) if spec.member(n)]
    raise TypeError(f"not a recurrence set spec: {spec!r}")


def _elements(R) -> tuple[list[int], RecurrenceSetSpec | None]:
    if isinstance(R, (ThresholdSet, ExplicitList, FullRange)):
        return generate_set(R), R
    return sorted(set(int(n) for n in R)), None


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Witness:
    n: int
    residuals: tuple[float, ...]
    point: tuple[str, ...] | None = None

    def to_dict(self) -> dict:
        d = {"n": self.n, "residuals": list(self.residuals)}
        if self.point is not None:
            d["point"] = list(self.point)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Witness":
        pt = d.get("point")
        return cls(int(d["n"]), tuple(float(x) for x in d["residuals"]),
                   tuple(pt) if pt is not None else None)


@dataclass(frozen=True)
class ProbeReport:
    kind: str
    verdict: Verdict
    epsilon: float
    horizon: int
    witnesses: tuple[Witness, ...]
    near_miss: Witness | None
    search_params: dict = field(default_factory=dict)
    certificate: str | None = None

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "kind": self.kind,
            "verdict": self.verdict.value,
            "epsilon": self.epsilon,
            "horizon": self.horizon,
            "witnesses": [w.to_dict() for w in self.witnesses],
            "near_miss": self.near_miss.to_dict() if self.near_miss else None,
            "search_params": self.search_params,
            "certificate": self.certificate,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, d: dict) -> "ProbeReport":
        if d.get("schema") != SCHEMA:
            raise ValueError(f"unsupported schema {d.get('schema')!r}")
        nm = d.get("near_miss")
        return cls(
            kind=d["kind"],
            verdict=Verdict(d["verdict"]),
            epsilon=d["epsilon"],
            horizon=int(d["horizon"]),
            witnesses=tuple(Witness.from_dict(w) for w in d["witnesses"]),
            near_miss=Witness.from_dict(nm) if nm else None,
            search_params=d.get("search_params", {}),
            certificate=d.get("certificate"),
        )

    @classmethod
    def from_json(cls, text: str) -> "ProbeReport":
        return cls.from_dict(json.loads(text))

    @property
    def first(self) -> int | None:
        return self.witnesses[0].n if self.witnesses else None


def _fr_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# Kronecker probe
# ---------------------------------------------------------------------------

def _basis(W) -> list[IntegralPolynomial]:
    if isinstance(W, WeylSpace):
        return integral_basis(W)
    return [parse_poly(q) if isinstance(q, str) else q for q in W]


def _kron_residuals(basis, beta, n: int) -> list[Fraction]:
    out = []
    for q in basis:
        v = q(n)
        for b in beta:
            r = (v * b.numerator) % b.denominator
            out.append(Fraction(min(r, b.denominator - r), b.denominator))
    return out


def _threshold_certificate(spec, basis, beta, eps: Fraction) -> str | None:
    if not isinstance(spec, ThresholdSet) or spec.alpha is None:
        return None
    if spec.alpha not in beta:
        return None
    if not any(q == spec.q or q == -spec.q for q in basis):
        return None
    t, strict = spec.min_distance()
    if eps > t:
        return None
    rel = ">" if strict else ">="
    return (f"basis contains +-({spec.q}) and beta contains the set's rotation, so every n "
            f"in the set has ||q(n) alpha|| {rel} {t} >= epsilon = {eps}")


def probe_kronecker(R, W, beta: Sequence, epsilon, horizon: int | None = None,
                    max_witnesses: int | None = 1) -> ProbeReport:
    """Search ``n`` in ``R`` with ``||q_i(n) beta_j|| < epsilon`` for all ``i, j``.

    ``W`` is a :class:`WeylSpace` (its integral basis is used) or an explicit
    list of integral polynomials.  ``beta`` holds rational realizations.
    Witnesses are listed in increasing ``n``; ``max_witnesses=None`` keeps
    all of them.
    """
    eps = Fraction(epsilon).limit_denominator(10**12) if isinstance(epsilon, float) else Fraction(epsilon)
    if not (0 < eps < Fraction(1, 2)):
        raise ValueError("epsilon must lie in (0, 1/2)")
    basis = _basis(W)
    if not basis:
        raise ValueError("the basis is empty")
    beta = [Fraction(b) for b in beta]
    elems, spec = _elements(R)
    if horizon is None:
        horizon = getattr(spec, "horizon", None) or (elems[-1] if elems else 1)
    witnesses, best, best_val = [], None, None
    for n in elems:
        if n > horizon:
            break
        res = _kron_residuals(basis, beta, n)
        worst = max(res)
        if best_val is None or worst < best_val:
            best, best_val = (n, res), worst
        if worst < eps:
            witnesses.append(Witness(n, tuple(float(x) for x in res)))
            if max_witnesses is not None and len(witnesses) >= max_witnesses:
                break
    cert = _threshold_certificate(spec, basis, beta, eps)
    if cert is not None and witnesses:
        raise AssertionError("analytic certificate contradicted by a witness")
    near = Witness(best[0], tuple(float(x) for x in best[1])) if best else None
    params = {
        "basis": [str(q) for q in basis],
        "beta": [_fr_str(b) for b in beta],
        "epsilon_exact": _fr_str(eps),
        "candidates": len([n for n in elems if n <= horizon]),
    }
    return ProbeReport(
        kind="kronecker",
        verdict=Verdict.WITNESS_FOUND if witnesses else Verdict.NO_WITNESS,
        epsilon=float(eps),
        horizon=horizon,
        witnesses=tuple(witnesses),
        near_miss=near,
        search_params=params,
        certificate=cert,
    )


# ---------------------------------------------------------------------------
# topological probe
# ---------------------------------------------------------------------------

def _grid(dim: int, eps: Fraction, count: int) -> list[tuple[Fraction, ...]]:
    """Deterministic Halton points inside the open ``eps``-ball at 0, on a dyadic lattice."""
    if count <= 0:
        return []
    u = qmc.Halton(d=dim, scramble=False).random(count + 1)[1:]
    scale = 1 << DYADIC_BITS
    lim = math.floor(eps * scale)
    if eps * scale == lim:
        lim -= 1
    ks = np.rint((2 * u - 1) * lim).astype(np.int64)
    return [tuple(Fraction(int(k), scale) for k in row) for row in ks]


def _iterate_exact(system, x, m):
    return orbit(system, x, m)


def _ball_radius(x: Sequence[Fraction]) -> Fraction:
    return max(torus_norm(c) for c in x) if x else Fraction(0)


def _topo_check_exact(system, P: PolyFamily, n: int, x, eps: Fraction):
    res = [_ball_radius(x)]
    for p in P.polys:
        res.append(_ball_radius(_iterate_exact(system, x, p(n))))
    return all(r < eps for r in res), res


class _FloatImages:
    """Vectorised ``T^m x`` for the dyadic grid, used only to shortlist points."""

    def __init__(self, system: StandardWeylSystem, points):
        self.system = system
        self.scale = 1 << DYADIC_BITS
        self.k = np.array([[int(c * self.scale) for c in p] for p in points], dtype=np.int64) % self.scale

    def norms(self, m: int) -> np.ndarray:
        S = self.scale
        cols, pos = [], 0
        for f in self.system.factors:
            a = f.require_value()
            c = [binom(m, j) for j in range(f.d + 1)]
            for i in range(f.d):
                acc = self.k[:, pos + i].copy()
                for j in range(1, i + 1):
                    acc = (acc + (c[j] % S) * self.k[:, pos + i - j]) % S
                shift = float(frac(c[i + 1] * a))
                y = (acc.astype(np.float64) / S + shift) % 1.0
                cols.append(np.minimum(y, 1.0 - y))
            pos += f.d
        return np.max(np.stack(cols, axis=1), axis=1)


def probe_topological(R, system: StandardWeylSystem, P, epsilon, horizon: int | None = None,
                      grid_points: int = GRID_POINTS, max_witnesses: int | None = 1) -> ProbeReport:
    """Search ``n`` in ``R`` with ``U cap T^-p_1(n) U cap ... cap T^-p_r(n) U`` nonempty.

    ``U`` is the open max-norm ``epsilon``-ball at 0.  The base point ``x = 0``
    is tried first, then ``grid_points`` deterministic Halton points of ``U``
    rounded to a dyadic lattice.  Any hit is confirmed exactly.
    """
    eps = Fraction(epsilon).limit_denominator(10**12) if isinstance(epsilon, float) else Fraction(epsilon)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    P = _family(P)
    for f in system.factors:
        f.require_value()
    elems, spec = _elements(R)
    if horizon is None:
        horizon = getattr(spec, "horizon", None) or (elems[-1] if elems else 1)
    zero = (Fraction(0),) * system.dim
    grid = _grid(system.dim, eps, grid_points) if eps <= Fraction(1, 2) else []
    images = _FloatImages(system, grid) if grid else None
    base_ok = None
    witnesses, best, best_val = [], None, None
    for n in elems:
        if n > horizon:
            break
        ok, res = _topo_check_exact(system, P, n, zero, eps)
        hit = (zero, res) if ok else None
        worst = max(res)
        if best_val is None or worst < best_val:
            best, best_val = (n, res, zero), worst
        if hit is None and images is not None:
            if base_ok is None:
                base_ok = np.ones(len(grid), dtype=bool)  # every grid point lies in U
            mask = base_ok.copy()
            for p in P.polys:
                mask &= images.norms(p(n)) < float(eps) + 1e-12
                if not mask.any():
                    break
            for idx in np.flatnonzero(mask):
                ok, res = _topo_check_exact(system, P, n, grid[idx], eps)
                if ok:
                    hit = (grid[idx], res)
                    break
        if hit is not None:
            witnesses.append(Witness(n, tuple(float(x) for x in hit[1]),
                                     tuple(_fr_str(c) for c in hit[0])))
            if max_witnesses is not None and len(witnesses) >= max_witnesses:
                break
    near = None
    if best is not None:
        near = Witness(best[0], tuple(float(x) for x in best[1]), tuple(_fr_str(c) for c in best[2]))
    params = {
        "system": system.to_text(),
        "family": [str(p) for p in P.polys],
        "epsilon_exact": _fr_str(eps),
        "base_points": "zero, then Halton (unscrambled)",
        "grid_points": len(grid),
        "dyadic_bits": DYADIC_BITS,
        "norm": "max over coordinates of distance to nearest integer",
        "candidates": len([n for n in elems if n <= horizon]),
    }
    return ProbeReport(
        kind="topological",
        verdict=Verdict.WITNESS_FOUND if witnesses else Verdict.NO_WITNESS,
        epsilon=float(eps),
        horizon=horizon,
        witnesses=tuple(witnesses),
        near_miss=near,
        search_params=params,
    )


def validate_report(report: ProbeReport) -> bool:
    """Recompute every witness from the data stored in the report itself."""
    p = report.search_params
    eps = Fraction(p["epsilon_exact"])
    if report.verdict is Verdict.WITNESS_FOUND and not report.witnesses:
        return False
    if report.kind == "kronecker":
        basis = [parse_poly(q) for q in p["basis"]]
        beta = [Fraction(b) for b in p["beta"]]
        for w in report.witnesses:
            res = _kron_residuals(basis, beta, w.n)
            if tuple(float(x) for x in res) != w.residuals or not all(r < eps for r in res):
                return False
        return True
    if report.kind == "topological":
        system = StandardWeylSystem.parse(p["system"])
        P = PolyFamily.of(*p["family"])
        for w in report.witnesses:
            x = tuple(Fraction(c) for c in w.point)
            ok, res = _topo_check_exact(system, P, w.n, x, eps)
            if not ok or tuple(float(r) for r in res) != w.residuals:
                return False
        return True
    raise ValueError(f"unknown report kind {report.kind!r}")


# ---------------------------------------------------------------------------
# cross check
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CrossCheck:
    kronecker: ProbeReport
    topological: ProbeReport
    overlap: tuple[int, ...]
    kronecker_only: tuple[int, ...]
    topological_only: tuple[int, ...]
    observed_factor: float | None
    notes: tuple[str, ...] = ()

    @property
    def agree(self) -> bool:
        return self.kronecker.verdict == self.topological.verdict

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "kronecker": self.kronecker.to_dict(),
            "topological": self.topological.to_dict(),
            "overlap": list(self.overlap),
            "kronecker_only": list(self.kronecker_only),
            "topological_only": list(self.topological_only),
            "observed_factor": self.observed_factor,
            "notes": list(self.notes),
        }


def cross_check(R, P, system: StandardWeylSystem, epsilon, horizon: int | None = None,
                grid_points: int = GRID_POINTS) -> CrossCheck:
    """Run both probes over the whole set and compare their witness sets.

    The Kronecker side uses the integral basis of ``WP_d(P)`` with ``d`` the
    step of ``system`` and ``beta`` the factor rotations.  ``observed_factor``
    is the largest ratio ``max_i,j ||q_i(n) beta_j|| / epsilon`` over the
    topological witnesses.  Discrepancies are reported, never raised.
    """
    P = _family(P)
    beta = [f.require_value() for f in system.factors]
    basis = integral_basis(weyl_space(P, system.step))
    elems, spec = _elements(R)
    R_in = spec if spec is not None else elems
    kr = probe_kronecker(R_in, basis, beta, epsilon, horizon, max_witnesses=None)
    tp = probe_topological(R_in, system, P, epsilon, horizon, grid_points, max_witnesses=None)
    ks = {w.n for w in kr.witnesses}
    ts = {w.n for w in tp.witnesses}
    factor = None
    if tp.witnesses:
        factor = max(max(_kron_residuals(basis, beta, w.n)) for w in tp.witnesses) / Fraction(epsilon)
        factor = float(factor)
    notes = []
    if ks - ts:
        notes.append(f"{len(ks - ts)} Kronecker witnesses without a topological witness")
    if ts - ks:
        notes.append(f"{len(ts - ks)} topological witnesses without a Kronecker witness at the same epsilon")
    if kr.verdict != tp.verdict:
        notes.append("verdicts differ")
    return CrossCheck(kr, tp, tuple(sorted(ks & ts)), tuple(sorted(ks - ts)),
                      tuple(sorted(ts - ks)), factor, tuple(notes))
