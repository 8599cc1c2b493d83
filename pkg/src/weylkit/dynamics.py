"""Characters, multicorrelations and averages on standard Weyl systems.

A ``d``-step standard Weyl system is the map
``(x_1, ..., x_d) -> (x_1 + a, x_2 + x_1, ..., x_d + x_{d-1})`` on the
``d``-torus; its ``m``-th iterate is
``x_i + sum_{j<i} C(m, j) x_{i-j} + C(m, i) a``.  Products of such
factors are handled block by block.

Exact operations keep rotations symbolic: a phase is a vector of integer
multipliers, one per factor.  Only :func:`ergodic_average` and
:func:`orbit` need numbers, and they take them from each factor's rational
realization.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .linalg import Subspace
from .polynomial import (
    IntegralPolynomial,
    RationalPolynomial,
    binom,
    binomial_transform,
)
from .realization import DEFAULT_BITS, MissingRealization, frac, realize
from .weyl import PolyFamily, _family, _rspan

__all__ = [
    "Factor",
    "StandardWeylSystem",
    "Phase",
    "GaussianRational",
    "CharacterSum",
    "CorrelationClosedForm",
    "ExpansionTerm",
    "CorrelationExpansion",
    "PhaseSequence",
    "pushforward",
    "correlate_exact",
    "correlate_closed_form",
    "frequency_polynomials",
    "integer_roots",
    "expansion",
    "ergodic_average",
    "running_averages",
    "orbit",
    "step",
]

Character = tuple[int, ...]


# ---------------------------------------------------------------------------
# systems
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Factor:
    d: int
    symbol: str = "alpha"
    value: Fraction | None = None

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("a factor needs d >= 1")

    def require_value(self) -> Fraction:
        if self.value is None:
            raise MissingRealization(f"rotation {self.symbol!r} has no numeric realization")
        return self.value


@dataclass(frozen=True)
class StandardWeylSystem:
    factors: tuple[Factor, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise ValueError("a system needs at least one factor")

    @classmethod
    def single(cls, d: int, symbol: str = "alpha", value=None) -> "StandardWeylSystem":
        if isinstance(value, str):
            value = realize(value)
        return cls((Factor(d, symbol, value),))

    @classmethod
    def product(cls, *factors: Factor) -> "StandardWeylSystem":
        return cls(factors)

    @classmethod
    def parse(cls, text: str, realizations: Mapping[str, str] | None = None,
              bits: int = DEFAULT_BITS) -> "StandardWeylSystem":
        """Read ``factor d=<int> alpha=<symbol>[=<realization>]`` lines.

        Blank lines and ``#`` comments are ignored.  ``realizations`` fills
        in symbols without an inline value.
        """
        realizations = dict(realizations or {})
        factors = []
        pat = re.compile(r"^factor\s+d=(\d+)\s+alpha=([A-Za-z_][\w]*)(?:=(\S+))?$")
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            m = pat.match(line)
            if not m:
                raise ValueError(f"line {lineno}: cannot parse {raw!r}")
            d, sym, val = int(m.group(1)), m.group(2), m.group(3)
            if val is None:
                val = realizations.get(sym)
            if val is None and sym in ("sqrt2", "golden", "e", "sqrt3"):
                val = sym
            factors.append(Factor(d, sym, realize(val, bits) if val is not None else None))
        return cls(tuple(factors))

    def to_text(self) -> str:
        lines = []
        for f in self.factors:
            val = f"={f.value.numerator}/{f.value.denominator}" if f.value is not None else ""
            lines.append(f"factor d={f.d} alpha={f.symbol}{val}")
        return "\n".join(lines) + "\n"

    def realized(self, values: Mapping[str, Fraction | str]) -> "StandardWeylSystem":
        out = []
        for f in self.factors:
            v = values.get(f.symbol, f.value)
            out.append(Factor(f.d, f.symbol, realize(v) if v is not None else None))
        return StandardWeylSystem(tuple(out))

    @property
    def s(self) -> int:
        return len(self.factors)

    @property
    def dim(self) -> int:
        return sum(f.d for f in self.factors)

    @property
    def step(self) -> int:
        return max(f.d for f in self.factors)

    def blocks(self, v: Sequence[int]) -> list[tuple[int, ...]]:
        if len(v) != self.dim:
            raise ValueError(f"character of length {len(v)} on a {self.dim}-torus")
        out, pos = [], 0
        for f in self.factors:
            out.append(tuple(v[pos:pos + f.d]))
            pos += f.d
        return out


@dataclass(frozen=True)
class Phase:
    """The exact value ``e(sum_j m_j alpha_j)``."""

    multipliers: tuple[int, ...]

    def __mul__(self, other: "Phase") -> "Phase":
        return Phase(tuple(a + b for a, b in zip(self.multipliers, other.multipliers)))

    def angle(self, system: StandardWeylSystem) -> Fraction:
        return frac(sum(
            (m * f.require_value() for m, f in zip(self.multipliers, system.factors)),
            Fraction(0),
        ))

    def numeric(self, system: StandardWeylSystem) -> complex:
        t = float(self.angle(system))
        return complex(math.cos(2 * math.pi * t), math.sin(2 * math.pi * t))


# ---------------------------------------------------------------------------
# exact characters
# ---------------------------------------------------------------------------

def _push_block(v: Sequence[int], m: int) -> tuple[int, tuple[int, ...]]:
    d = len(v)
    c = [binom(m, j) for j in range(d + 1)]
    freq = tuple(sum(v[i] * c[i - l] for i in range(l, d)) for l in range(d))
    phase = sum(v[i] * c[i + 1] for i in range(d))
    return phase, freq


def pushforward(system: StandardWeylSystem, v: Sequence[int], m: int):
    """``psi_v o T^m = e(sum_j phase_j alpha_j) * psi_freq``.

    Returns ``(phase multipliers per factor, freq)``.
    """
    phases, freq = [], []
    for block in system.blocks(v):
        ph, fr = _push_block(block, m)
        phases.append(ph)
        freq.extend(fr)
    return tuple(phases), tuple(freq)


def correlate_exact(system: StandardWeylSystem, chars: Sequence[Sequence[int]], P, n: int):
    """``int psi_{v^0} T^{p_1(n)} psi_{v^1} ... T^{p_r(n)} psi_{v^r}``.

    Each ``v^k`` is pushed through ``T^{p_k(n)}``; the integral is 0 unless
    the frequencies cancel, in which case it is the accumulated phase.
    Returns ``0`` or a :class:`Phase`.
    """
    P = _family(P)
    if len(chars) != P.r + 1:
        raise ValueError(f"need {P.r + 1} characters, got {len(chars)}")
    total = list(chars[0])
    phase = [0] * system.s
    for p, v in zip(P.polys, chars[1:]):
        ph, fr = pushforward(system, v, p(n))
        total = [a + b for a, b in zip(total, fr)]
        phase = [a + b for a, b in zip(phase, ph)]
    if any(total):
        return 0
    return Phase(tuple(phase))


# ---------------------------------------------------------------------------
# closed form
# ---------------------------------------------------------------------------

def frequency_polynomials(chars: Sequence[Sequence[int]], P: PolyFamily) -> list[IntegralPolynomial]:
    """Total pushed frequency, coordinate by coordinate, as polynomials in n.

    For a single block of length ``d``:
    ``F_l = v^0_l + sum_k sum_{i >= l} v^k_i p_k^[i-l]``.
    """
    d = len(chars[0])
    out = []
    for l in range(d):
        F = IntegralPolynomial.constant(chars[0][l])
        for p, v in zip(P.polys, chars[1:]):
            for i in range(l, d):
                if v[i]:
                    F = F + binomial_transform(p, i - l) * v[i]
        out.append(F)
    return out


def _divisors(a: int) -> list[int]:
    a = abs(a)
    small, large = [], []
    i = 1
    while i * i <= a:
        if a % i == 0:
            small.append(i)
            if i * i != a:
                large.append(a // i)
        i += 1
    return small + large[::-1]


def integer_roots(p: IntegralPolynomial) -> list[int]:
    """All integer roots of a nonzero polynomial (rational root test)."""
    if p.is_zero():
        raise ValueError("the zero polynomial vanishes everywhere")
    coeffs = p.to_monomial().mono_coeffs
    den = math.lcm(*(c.denominator for c in coeffs))
    ints = [int(c * den) for c in coeffs]
    t = next(j for j, c in enumerate(ints) if c)
    roots = [0] if t > 0 else []
    for q in _divisors(ints[t]):
        for cand in (q, -q):
            if p(cand) == 0:
                roots.append(cand)
    return sorted(set(roots))


def _common_roots(polys: Iterable[IntegralPolynomial]) -> tuple[int, ...]:
    nonzero = [F for F in polys if not F.is_zero()]
    if not nonzero:
        raise ValueError("all frequency polynomials vanish identically")
    if any(F.is_constant() for F in nonzero):
        return ()
    F0 = min(nonzero, key=lambda F: F.degree)
    return tuple(x for x in integer_roots(F0) if all(F(x) == 0 for F in nonzero))


def _phase_poly(chars: Sequence[Sequence[int]], P: PolyFamily) -> IntegralPolynomial:
    # q = sum_k sum_i v^k_i p_k^[i]  (= v^T Lambda_d e_1)
    d = len(chars[0])
    q = IntegralPolynomial()
    for p, v in zip(P.polys, chars[1:]):
        for i in range(d):
            if v[i]:
                q = q + binomial_transform(p, i + 1) * v[i]
    return q


def _in_weyl_orthocomplement(chars, P: PolyFamily) -> bool:
    # stacked v = (v^1_1..v^r_1, ..., v^1_d..v^r_d); the tail must be
    # orthogonal to span Lambda_{d-1}, and v^0 + sum v^k = 0
    d = len(chars[0])
    if any(sum(c[l] for c in chars) for l in range(d)):
        return False
    if d == 1:
        return True
    tail = [chars[k][b] for b in range(1, d) for k in range(1, P.r + 1)]
    orth: Subspace = _rspan(P, d - 1).orthocomplement()
    return orth.contains(tail)


@dataclass(frozen=True)
class CorrelationClosedForm:
    """``n -> int psi_{v^0} T^{p_1(n)} psi_{v^1} ... d mu`` in closed form.

    ``kind == "phase"``: the value is ``e(sum_j q_j(n) alpha_j)`` for every n.
    ``kind == "zero"``: the value is 0 except on ``exceptional_set``, where
    it is again ``e(sum_j q_j(n) alpha_j)``.  ``polys`` always holds the
    ``q_j``, one per factor.
    """

    kind: str
    polys: tuple[IntegralPolynomial, ...]
    exceptional_set: tuple[int, ...] = ()

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero"

    def value_at(self, n: int):
        if self.kind == "zero" and n not in self.exceptional_set:
            return 0
        return Phase(tuple(q(n) for q in self.polys))


def _closed_form_block(chars, P: PolyFamily):
    q = _phase_poly(chars, P)
    F = frequency_polynomials(chars, P)
    vanishes = all(f.is_zero() for f in F)
    if P.zero_constant_term:
        nonzero = _in_weyl_orthocomplement(chars, P)
        if nonzero != vanishes:
            raise AssertionError("orthogonality test disagrees with frequency polynomials")
    else:
        # with constant terms the orthogonality test is only sufficient
        nonzero = vanishes
    if nonzero:
        return q, None
    return q, _common_roots(F)


def correlate_closed_form(system: StandardWeylSystem, chars: Sequence[Sequence[int]], P) -> CorrelationClosedForm:
    """Closed form of the character multicorrelation, factor by factor."""
    P = _family(P)
    if len(chars) != P.r + 1:
        raise ValueError(f"need {P.r + 1} characters, got {len(chars)}")
    per_block = [system.blocks(v) for v in chars]
    polys, exceptional = [], None
    for j in range(system.s):
        q, roots = _closed_form_block([b[j] for b in per_block], P)
        polys.append(q)
        if roots is not None:
            exceptional = set(roots) if exceptional is None else exceptional & set(roots)
    if exceptional is None:
        return CorrelationClosedForm("phase", tuple(polys))
    return CorrelationClosedForm("zero", tuple(polys), tuple(sorted(exceptional)))


# ---------------------------------------------------------------------------
# trigonometric polynomials and the expansion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GaussianRational:
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, str):
            return cls.parse(x)
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        return cls(Fraction(x))

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        """``"1/2"``, ``"-3i"``, ``"1/2-1/3i"``; ``"1/2i"`` is ``i/2``."""
        t = text.replace(" ", "")
        try:
            if not t.endswith("i"):
                return cls(Fraction(t))
            body = t[:-1]
            k = max(body.rfind("+"), body.rfind("-"))
            re_txt, im_txt = (body[:k], body[k:]) if k > 0 else ("", body)
            if im_txt in ("", "+", "-"):
                im_txt += "1"
            return cls(Fraction(re_txt) if re_txt else Fraction(0), Fraction(im_txt))
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"not a Gaussian rational: {text!r}") from None

    def __add__(self, o):
        o = GaussianRational.coerce(o)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __mul__(self, o):
        o = GaussianRational.coerce(o)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __bool__(self):
        return bool(self.re or self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __str__(self):
        if not self.im:
            return str(self.re)
        mag = "" if abs(self.im) == 1 else str(abs(self.im))
        sign = "+" if self.im > 0 else "-"
        if not self.re:
            return f"{'-' if self.im < 0 else ''}{mag}i"
        return f"{self.re}{sign}{mag}i"


@dataclass(frozen=True)
class CharacterSum:
    """A trigonometric polynomial ``sum c_v psi_v`` with Gaussian-rational ``c_v``."""

    items: tuple[tuple[Character, GaussianRational], ...]

    def __post_init__(self):
        merged: dict[Character, GaussianRational] = {}
        for v, c in self.items:
            v = tuple(int(x) for x in v)
            merged[v] = merged.get(v, GaussianRational()) + GaussianRational.coerce(c)
        object.__setattr__(
            self, "items", tuple(sorted((v, c) for v, c in merged.items() if c))
        )

    @classmethod
    def character(cls, v: Sequence[int], coeff=1) -> "CharacterSum":
        return cls(((tuple(v), GaussianRational.coerce(coeff)),))

    @classmethod
    def parse(cls, text: str) -> "CharacterSum":
        """``"1:0,1; 1/2-i:1,0"``: coefficient, colon, frequency vector."""
        items = []
        for chunk in text.split(";"):
            if not chunk.strip():
                continue
            if ":" in chunk:
                c, v = chunk.split(":", 1)
            else:
                c, v = "1", chunk
            items.append((tuple(int(x) for x in v.split(",")), GaussianRational.parse(c)))
        return cls(tuple(items))

    def norm2(self) -> Fraction:
        """``||f||_2^2 = sum |c_v|^2``."""
        return sum((c.abs2() for _, c in self.items), Fraction(0))


@dataclass(frozen=True)
class ExpansionTerm:
    coeff: GaussianRational
    polys: tuple[IntegralPolynomial, ...]
    chars: tuple[Character, ...]


@dataclass(frozen=True)
class CorrelationExpansion:
    """Finite polynomial Fourier expansion of a multicorrelation.

    ``terms`` has one entry per character tuple with a nonzero closed form
    (not merged, so the l2 bound is the one for the tuple-indexed sequence).
    ``dropped`` keeps the zero tuples whose exceptional sets are nonempty.
    """

    terms: tuple[ExpansionTerm, ...]
    dropped: tuple[tuple[GaussianRational, CorrelationClosedForm], ...]
    sources: tuple[CharacterSum, ...]

    @property
    def exceptional_set(self) -> tuple[int, ...]:
        s = set()
        for _, cf in self.dropped:
            s.update(cf.exceptional_set)
        return tuple(sorted(s))

    def l2_squared(self) -> Fraction:
        return sum((t.coeff.abs2() for t in self.terms), Fraction(0))

    def l2_bound_squared(self) -> Fraction:
        return math.prod((f.norm2() for f in self.sources), start=Fraction(1))

    def collected(self) -> dict[tuple[IntegralPolynomial, ...], GaussianRational]:
        out: dict = {}
        for t in self.terms:
            out[t.polys] = out.get(t.polys, GaussianRational()) + t.coeff
        return {k: v for k, v in out.items() if v}

    def evaluate_exact(self, n: int, complete: bool = False) -> dict[Phase, GaussianRational]:
        """Value at ``n`` as ``{phase: coefficient}``.

        With ``complete=True`` the dropped tuples are included, which makes
        the result exact on the exceptional set as well.
        """
        out: dict[Phase, GaussianRational] = {}
        for t in self.terms:
            ph = Phase(tuple(q(n) for q in t.polys))
            out[ph] = out.get(ph, GaussianRational()) + t.coeff
        if complete:
            for c, cf in self.dropped:
                val = cf.value_at(n)
                if val != 0:
                    out[val] = out.get(val, GaussianRational()) + c
        return {k: v for k, v in out.items() if v}


def expansion(system: StandardWeylSystem, fs: Sequence[CharacterSum], P) -> CorrelationExpansion:
    """Expand ``int f_0 T^{p_1(n)} f_1 ... T^{p_r(n)} f_r`` over character tuples."""
    P = _family(P)
    if len(fs) != P.r + 1:
        raise ValueError(f"need {P.r + 1} functions, got {len(fs)}")
    terms, dropped = [], []
    for combo in itertools.product(*(f.items for f in fs)):
        chars = tuple(v for v, _ in combo)
        coeff = GaussianRational(1)
        for _, c in combo:
            coeff = coeff * c
        cf = correlate_closed_form(system, chars, P)
        if cf.kind == "phase":
            terms.append(ExpansionTerm(coeff, cf.polys, chars))
        elif cf.exceptional_set:
            dropped.append((coeff, cf))
    return CorrelationExpansion(tuple(terms), tuple(dropped), tuple(fs))


def correlate_exact_sum(system: StandardWeylSystem, fs: Sequence[CharacterSum], P, n: int):
    """Tuple-by-tuple exact oracle for a trigonometric multicorrelation."""
    P = _family(P)
    out: dict[Phase, GaussianRational] = {}
    for combo in itertools.product(*(f.items for f in fs)):
        val = correlate_exact(system, [v for v, _ in combo], P, n)
        if val == 0:
            continue
        coeff = GaussianRational(1)
        for _, c in combo:
            coeff = coeff * c
        out[val] = out.get(val, GaussianRational()) + coeff
    return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------------------------
# numerical sequences and averages
# ---------------------------------------------------------------------------

_FIX = 64
_PI = np.longdouble("3.14159265358979323846264338327950288")


def _scaled(q) -> tuple[list[int], int]:
    """``q = M / L`` with integer monomial coefficients ``M``."""
    if isinstance(q, IntegralPolynomial):
        q = q.to_monomial()
    coeffs = q.mono_coeffs
    L = math.lcm(*(c.denominator for c in coeffs)) if coeffs else 1
    return [int(c * L) for c in coeffs], L


@dataclass(frozen=True)
class PhaseTerm:
    coeff: complex
    #: ((q, alpha), ...) with distinct alphas; value e(sum q(n) alpha)
    phases: tuple[tuple[RationalPolynomial, Fraction], ...] = ()

    def fixed_point(self, n: int) -> int:
        """``frac(sum q(n) alpha) * 2^64``, truncated."""
        acc = 0
        mask = (1 << _FIX) - 1
        for q, a in self.phases:
            M, L = _scaled(q)
            mod = L * a.denominator
            v = 0
            for c in reversed(M):
                v = (v * n + c) % mod
            r = (v * a.numerator) % mod
            acc += (r << _FIX) // mod
        return acc & mask


def _merge(phases: Iterable[tuple[RationalPolynomial, Fraction]]):
    by_alpha: dict[Fraction, RationalPolynomial] = {}
    for q, a in phases:
        if isinstance(q, IntegralPolynomial):
            q = q.to_monomial()
        by_alpha[a] = by_alpha.get(a, RationalPolynomial()) + q
    return tuple(sorted(((q, a) for a, q in by_alpha.items() if not q.is_zero()),
                        key=lambda t: t[1]))


@dataclass(frozen=True)
class PhaseSequence:
    """A finite sum of ``c * e(sum_t q_t(n) alpha_t)``.

    Closed under ``+`` and ``*``; phases with the same rotation merge, so
    ``e(h alpha) e(-h alpha)`` is the constant 1.
    """

    terms: tuple[PhaseTerm, ...]

    @classmethod
    def one(cls) -> "PhaseSequence":
        return cls((PhaseTerm(1 + 0j),))

    @classmethod
    def phase(cls, q, alpha, coeff: complex = 1) -> "PhaseSequence":
        alpha = realize(alpha) if isinstance(alpha, str) else Fraction(alpha)
        if isinstance(q, str):
            from .polynomial import parse_rational_poly

            q = parse_rational_poly(q)
        return cls((PhaseTerm(complex(coeff), _merge([(q, alpha)])),))

    @classmethod
    def from_closed_form(cls, cf: CorrelationClosedForm, system: StandardWeylSystem) -> "PhaseSequence":
        """Valid away from ``cf.exceptional_set``; a zero form gives the empty sum."""
        if cf.kind == "zero":
            return cls(())
        phases = [(q, f.require_value()) for q, f in zip(cf.polys, system.factors)]
        return cls((PhaseTerm(1 + 0j, _merge(phases)),))

    @classmethod
    def from_expansion(cls, exp: CorrelationExpansion, system: StandardWeylSystem) -> "PhaseSequence":
        terms = []
        for t in exp.terms:
            phases = [(q, f.require_value()) for q, f in zip(t.polys, system.factors)]
            terms.append(PhaseTerm(complex(t.coeff), _merge(phases)))
        return cls(tuple(terms))

    def __add__(self, other: "PhaseSequence") -> "PhaseSequence":
        return PhaseSequence(self.terms + other.terms)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return PhaseSequence(tuple(PhaseTerm(t.coeff * other, t.phases) for t in self.terms))
        return PhaseSequence(tuple(
            PhaseTerm(a.coeff * b.coeff, _merge(a.phases + b.phases))
            for a in self.terms for b in other.terms
        ))

    __rmul__ = __mul__

    def values(self, start: int, stop: int) -> np.ndarray:
        """Values at ``n = start, ..., stop - 1`` in extended precision."""
        out = np.zeros(stop - start, dtype=np.clongdouble)
        scale = np.longdouble(2) ** _FIX
        for t in self.terms:
            if not t.phases:
                out += np.clongdouble(t.coeff)
                continue
            fx = np.array([t.fixed_point(n) for n in range(start, stop)], dtype=np.uint64)
            ang = 2 * _PI * (fx.astype(np.longdouble) / scale)
            out += np.clongdouble(t.coeff) * (np.cos(ang) + 1j * np.sin(ang))
        return out

    def value(self, n: int) -> complex:
        return complex(self.values(n, n + 1)[0])


def running_averages(seq: PhaseSequence, N: int, checkpoints: Sequence[int] = (),
                     shards: int = 1) -> tuple[complex, dict[int, complex]]:
    """Cesaro mean over ``n = 1..N`` plus the means at ``checkpoints``.

    Summation is sequential in ``n``.  With ``shards > 1`` the range is
    evaluated in consecutive pieces whose sums are accumulated in order.
    """
    if N < 1:
        raise ValueError("N must be positive")
    bounds = np.linspace(1, N + 1, shards + 1).astype(int)
    total = np.clongdouble(0)
    partial: dict[int, complex] = {}
    wanted = sorted(set(c for c in checkpoints if 1 <= c <= N))
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        if hi <= lo:
            continue
        cs = np.cumsum(seq.values(int(lo), int(hi))) + total
        for c in wanted:
            if lo <= c < hi:
                partial[c] = complex(cs[c - lo] / c)
        total = cs[-1]
    return complex(total / N), partial


def ergodic_average(seq: PhaseSequence, N: int, shards: int = 1) -> complex:
    """``(1/N) sum_{n=1}^N seq(n)``."""
    return running_averages(seq, N, shards=shards)[0]


# ---------------------------------------------------------------------------
# orbits
# ---------------------------------------------------------------------------

def _as_point(system: StandardWeylSystem, x0) -> list[Fraction]:
    pt = [Fraction(x) for x in x0]
    if len(pt) != system.dim:
        raise ValueError(f"point of length {len(pt)} on a {system.dim}-torus")
    return pt


def orbit(system: StandardWeylSystem, x0: Sequence, n: int) -> tuple[Fraction, ...]:
    """``T^n x0`` mod 1 by the closed formula, exactly."""
    x = _as_point(system, x0)
    out, pos = [], 0
    for f in system.factors:
        a = f.require_value()
        blk = x[pos:pos + f.d]
        c = [binom(n, j) for j in range(f.d + 1)]
        for i in range(f.d):
            v = blk[i] + sum((c[j] * blk[i - j] for j in range(1, i + 1)), Fraction(0))
            out.append(frac(v + c[i + 1] * a))
        pos += f.d
    return tuple(out)


def step(system: StandardWeylSystem, x: Sequence) -> tuple[Fraction, ...]:
    """One application of ``T``."""
    x = _as_point(system, x)
    out, pos = [], 0
    for f in system.factors:
        a = f.require_value()
        blk = x[pos:pos + f.d]
        out.append(frac(blk[0] + a))
        out.extend(frac(blk[i] + blk[i - 1]) for i in range(1, f.d))
        pos += f.d
    return tuple(out)
