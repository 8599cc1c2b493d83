"""Integer-valued polynomials in one variable ``n``.

An :class:`IntegralPolynomial` is stored in the binomial basis,
``p(n) = sum_j c_j * C(n, j)`` with integer ``c_j``.  In that basis
"integer valued on the integers" is the same as "all coefficients are
integers", so integrality is a property of the representation rather
than something that has to be checked by sampling.

:class:`RationalPolynomial` is the monomial view with exact rational
coefficients.  It is what the linear algebra works with.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

__all__ = [
    "ZERO_DEGREE",
    "PolynomialSyntaxError",
    "IntegralityError",
    "binom",
    "RationalPolynomial",
    "IntegralPolynomial",
    "parse_poly",
    "parse_rational_poly",
    "parse_family",
    "binomial_transform",
    "compose",
    "is_essentially_distinct",
    "to_monomial",
    "from_monomial",
]

#: Degree of the zero polynomial.  Compares below every integer.
ZERO_DEGREE = -math.inf


class PolynomialSyntaxError(ValueError):
    """Malformed polynomial expression.  ``pos`` is a 0-based offset."""

    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        pointer = " " * pos + "^"
        super().__init__(f"{message} at position {pos}\n  {text}\n  {pointer}")


class IntegralityError(ValueError):
    """A polynomial does not map the integers into the integers."""

    def __init__(self, index: int, coeff: Fraction):
        self.index = index
        self.coeff = coeff
        super().__init__(
            f"not integer valued: coefficient of binom(n,{index}) is {coeff}"
        )


def binom(n: int, k: int) -> int:
    """``C(n, k)`` for any integer ``n``, via the falling factorial.

    >>> binom(-3, 2)
    6
    """
    if k < 0:
        return 0
    if n >= 0:
        return math.comb(n, k)
    # C(-m, k) = (-1)^k C(m + k - 1, k)
    v = math.comb(k - n - 1, k)
    return -v if k & 1 else v


def _trim(coeffs: Iterable) -> tuple:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


# ---------------------------------------------------------------------------
# monomial form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RationalPolynomial:
    """``sum_j a_j n^j`` with exact rational ``a_j`` (ascending degree)."""

    mono_coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self):
        object.__setattr__(
            self, "mono_coeffs", _trim(Fraction(a) for a in self.mono_coeffs)
        )

    @classmethod
    def constant(cls, c) -> "RationalPolynomial":
        return cls((Fraction(c),))

    @classmethod
    def monomial(cls, j: int, c=1) -> "RationalPolynomial":
        return cls((0,) * j + (Fraction(c),))

    @property
    def degree(self):
        return len(self.mono_coeffs) - 1 if self.mono_coeffs else ZERO_DEGREE

    def is_zero(self) -> bool:
        return not self.mono_coeffs

    def is_constant(self) -> bool:
        return len(self.mono_coeffs) <= 1

    def coeff(self, j: int) -> Fraction:
        if 0 <= j < len(self.mono_coeffs):
            return self.mono_coeffs[j]
        return Fraction(0)

    def padded(self, length: int) -> tuple[Fraction, ...]:
        """Coefficient vector of the given length (zeros appended)."""
        if len(self.mono_coeffs) > length:
            raise ValueError(f"degree {self.degree} does not fit in {length} slots")
        return self.mono_coeffs + (Fraction(0),) * (length - len(self.mono_coeffs))

    def __call__(self, n) -> Fraction:
        acc = Fraction(0)
        for a in reversed(self.mono_coeffs):
            acc = acc * n + a
        return acc

    def __add__(self, other):
        other = _as_rational(other)
        if other is NotImplemented:
            return other
        a, b = self.mono_coeffs, other.mono_coeffs
        if len(a) < len(b):
            a, b = b, a
        return RationalPolynomial(
            tuple(x + (b[i] if i < len(b) else 0) for i, x in enumerate(a))
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalPolynomial(tuple(-a for a in self.mono_coeffs))

    def __sub__(self, other):
        other = _as_rational(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RationalPolynomial(tuple(a * other for a in self.mono_coeffs))
        other = _as_rational(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return RationalPolynomial()
        out = [Fraction(0)] * (len(self.mono_coeffs) + len(other.mono_coeffs) - 1)
        for i, a in enumerate(self.mono_coeffs):
            if a:
                for j, b in enumerate(other.mono_coeffs):
                    out[i + j] += a * b
        return RationalPolynomial(out)

    __rmul__ = __mul__

    def __truediv__(self, c):
        c = Fraction(c)
        return RationalPolynomial(tuple(a / c for a in self.mono_coeffs))

    def __pow__(self, e: int):
        out = RationalPolynomial.constant(1)
        for _ in range(e):
            out = out * self
        return out

    def compose(self, q: "RationalPolynomial") -> "RationalPolynomial":
        """``self(q(n))`` by Horner's rule."""
        q = _as_rational(q)
        acc = RationalPolynomial()
        for a in reversed(self.mono_coeffs):
            acc = acc * q + a
        return acc

    def to_integral(self) -> "IntegralPolynomial":
        return from_monomial(self)

    def __str__(self) -> str:
        return _format_monomial(self.mono_coeffs)

    def __repr__(self) -> str:
        return f"RationalPolynomial({self})"


def _as_rational(x):
    if isinstance(x, RationalPolynomial):
        return x
    if isinstance(x, IntegralPolynomial):
        return x.to_monomial()
    if isinstance(x, (int, Fraction)):
        return RationalPolynomial.constant(x)
    return NotImplemented


def _format_monomial(coeffs: Sequence[Fraction]) -> str:
    parts = []
    for j in range(len(coeffs) - 1, -1, -1):
        a = coeffs[j]
        if a == 0:
            continue
        sign = "-" if a < 0 else "+"
        mag = abs(a)
        if j == 0:
            body = str(mag)
        else:
            var = "n" if j == 1 else f"n^{j}"
            body = var if mag == 1 else f"{mag}*{var}"
        parts.append((sign, body))
    if not parts:
        return "0"
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# ---------------------------------------------------------------------------
# binomial-basis form
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _binomial_basis_monomial(j: int) -> RationalPolynomial:
    """Monomial expansion of ``C(n, j)``."""
    p = RationalPolynomial.constant(1)
    for i in range(j):
        p = p * RationalPolynomial((Fraction(-i), Fraction(1)))
    return p / math.factorial(j)


@dataclass(frozen=True)
class IntegralPolynomial:
    """``sum_j c_j C(n, j)`` with integer ``c_j``; the zero polynomial is ``()``."""

    binom_coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        coeffs = []
        for c in self.binom_coeffs:
            if isinstance(c, Fraction):
                if c.denominator != 1:
                    raise TypeError("binomial coefficients must be integers")
                c = c.numerator
            coeffs.append(int(c))
        object.__setattr__(self, "binom_coeffs", _trim(coeffs))

    @classmethod
    def constant(cls, c: int) -> "IntegralPolynomial":
        return cls((c,))

    @classmethod
    def identity(cls) -> "IntegralPolynomial":
        return cls((0, 1))

    @classmethod
    def binomial(cls, j: int) -> "IntegralPolynomial":
        """The basis element ``C(n, j)``."""
        return cls((0,) * j + (1,))

    @property
    def degree(self):
        return len(self.binom_coeffs) - 1 if self.binom_coeffs else ZERO_DEGREE

    def is_zero(self) -> bool:
        return not self.binom_coeffs

    def is_constant(self) -> bool:
        return len(self.binom_coeffs) <= 1

    def content(self) -> int:
        return math.gcd(*self.binom_coeffs) if self.binom_coeffs else 0

    def __call__(self, n: int) -> int:
        return eval_poly(self, n)

    def to_monomial(self) -> RationalPolynomial:
        return to_monomial(self)

    def __add__(self, other):
        if isinstance(other, int):
            other = IntegralPolynomial.constant(other)
        if not isinstance(other, IntegralPolynomial):
            return NotImplemented
        a, b = self.binom_coeffs, other.binom_coeffs
        if len(a) < len(b):
            a, b = b, a
        return IntegralPolynomial(
            tuple(x + (b[i] if i < len(b) else 0) for i, x in enumerate(a))
        )

    __radd__ = __add__

    def __neg__(self):
        return IntegralPolynomial(tuple(-c for c in self.binom_coeffs))

    def __sub__(self, other):
        if isinstance(other, int):
            other = IntegralPolynomial.constant(other)
        if not isinstance(other, IntegralPolynomial):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return IntegralPolynomial(tuple(c * other for c in self.binom_coeffs))
        if not isinstance(other, IntegralPolynomial):
            return NotImplemented
        # products of integer-valued polynomials are integer valued
        return from_monomial(self.to_monomial() * other.to_monomial())

    __rmul__ = __mul__

    def compose(self, q: "IntegralPolynomial") -> "IntegralPolynomial":
        return compose(self, q)

    def __str__(self) -> str:
        return str(self.to_monomial())

    def __repr__(self) -> str:
        return f"IntegralPolynomial({self})"


def eval_poly(p: IntegralPolynomial, n: int) -> int:
    """Exact value ``sum_j c_j C(n, j)``.

    Uses ``C(n, j+1) = C(n, j) * (n - j) / (j + 1)``, which stays exact for
    negative ``n`` as well.
    """
    total = 0
    b = 1
    for j, c in enumerate(p.binom_coeffs):
        if j:
            b = b * (n - j + 1) // j
        total += c * b
    return total


@lru_cache(maxsize=4096)
def to_monomial(p: IntegralPolynomial) -> RationalPolynomial:
    """Change of basis binomial -> monomial."""
    out = RationalPolynomial()
    for j, c in enumerate(p.binom_coeffs):
        if c:
            out = out + _binomial_basis_monomial(j) * c
    return out


def from_monomial(p: RationalPolynomial) -> IntegralPolynomial:
    """Inverse of :func:`to_monomial`.

    The binomial coefficients are the forward differences of ``p`` at 0,
    ``c_j = (Delta^j p)(0)``.  Raises :class:`IntegralityError` naming the
    first non-integer one.
    """
    p = _as_rational(p)
    if p.is_zero():
        return IntegralPolynomial()
    vals = [p(i) for i in range(len(p.mono_coeffs))]
    coeffs = []
    while vals:
        coeffs.append(vals[0])
        vals = [b - a for a, b in zip(vals, vals[1:])]
    for j, c in enumerate(coeffs):
        if c.denominator != 1:
            raise IntegralityError(j, c)
    return IntegralPolynomial(tuple(c.numerator for c in coeffs))


def binomial_coordinates(p: RationalPolynomial) -> tuple[Fraction, ...]:
    """Binomial-basis coordinates of an arbitrary rational polynomial."""
    if p.is_zero():
        return ()
    vals = [p(i) for i in range(len(p.mono_coeffs))]
    coeffs = []
    while vals:
        coeffs.append(vals[0])
        vals = [b - a for a, b in zip(vals, vals[1:])]
    return _trim(coeffs)


@lru_cache(maxsize=4096)
def binomial_transform(p: IntegralPolynomial, k: int) -> IntegralPolynomial:
    """``n -> C(p(n), k)``.  ``k = 0`` gives the constant 1."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return from_monomial(_binomial_basis_monomial(k).compose(p.to_monomial()))


def compose(p: IntegralPolynomial, q: IntegralPolynomial) -> IntegralPolynomial:
    """``p(q(n)) = sum_j c_j C(q(n), j)``."""
    out = IntegralPolynomial()
    for j, c in enumerate(p.binom_coeffs):
        if c:
            out = out + binomial_transform(q, j) * c
    return out


def is_essentially_distinct(polys: Sequence[IntegralPolynomial]) -> bool:
    if any(p.is_constant() for p in polys):
        return False
    for i in range(len(polys)):
        for j in range(i + 1, len(polys)):
            if (polys[i] - polys[j]).is_constant():
                return False
    return True


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

class _Parser:
    # poly   := ['+'|'-'] term (('+'|'-') term)*
    # term   := factor (('*'? factor) | '/' UINT)*
    # factor := INT ['/' INT] | 'n' ['^' UINT] | 'binom' '(' poly ',' UINT ')'
    #         | '(' poly ')'

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str, pos: int | None = None):
        raise PolynomialSyntaxError(msg, self.text, self.pos if pos is None else pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def uint(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected an integer")
        return int(self.text[start:self.pos])

    def parse(self) -> RationalPolynomial:
        if not self.text.strip():
            self.error("empty expression")
        p = self.poly()
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        return p

    def poly(self) -> RationalPolynomial:
        sign = 1
        if self.peek() in "+-" and self.peek():
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
        acc = self.term() * sign
        while self.peek() and self.peek() in "+-":
            op = self.text[self.pos]
            self.pos += 1
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> RationalPolynomial:
        acc = self.factor()
        while True:
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                acc = acc * self.factor()
            elif ch == "/":
                self.pos += 1
                den_pos = self.pos
                den = self.uint()
                if den == 0:
                    self.error("division by zero", den_pos)
                acc = acc / den
            elif ch and (ch.isdigit() or ch in "n(b"):
                acc = acc * self.factor()
            else:
                return acc

    def factor(self) -> RationalPolynomial:
        ch = self.peek()
        if ch.isdigit():
            num = self.uint()
            if self.peek() == "/":
                self.pos += 1
                den_pos = self.pos
                den = self.uint()
                if den == 0:
                    self.error("division by zero", den_pos)
                return RationalPolynomial.constant(Fraction(num, den))
            return RationalPolynomial.constant(num)
        if self.text.startswith("binom", self.pos):
            self.pos += len("binom")
            self.expect("(")
            inner = self.poly()
            self.expect(",")
            k = self.uint()
            self.expect(")")
            return _binomial_basis_monomial(k).compose(inner)
        if ch == "n":
            self.pos += 1
            e = 1
            if self.peek() == "^":
                self.pos += 1
                e = self.uint()
            return RationalPolynomial.monomial(e)
        if ch == "(":
            self.pos += 1
            inner = self.poly()
            self.expect(")")
            return inner
        if not ch:
            self.error("unexpected end of expression")
        self.error(f"unexpected {ch!r}")


def parse_rational_poly(text: str) -> RationalPolynomial:
    """Parse without the integrality requirement."""
    return _Parser(text).parse()


def parse_poly(text: str) -> IntegralPolynomial:
    """Parse an expression such as ``"n^2 + binom(n,3) - 2*n"``.

    Juxtaposition multiplies (``2n`` is ``2*n``).  Raises
    :class:`PolynomialSyntaxError` or :class:`IntegralityError`.
    """
    return from_monomial(parse_rational_poly(text))


def split_top_level(text: str, sep: str = ",") -> list[str]:
    """Split on ``sep`` outside parentheses."""
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == sep and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return parts


def parse_family(text: str) -> list[IntegralPolynomial]:
    """Comma separated list of polynomials, optionally wrapped in braces."""
    t = text.strip()
    if t.startswith("{") and t.endswith("}"):
        t = t[1:-1]
    parts = [s for s in split_top_level(t) if s.strip()]
    if not parts:
        raise PolynomialSyntaxError("empty family", text, 0)
    return [parse_poly(s) for s in parts]


Polynomialish = Union[IntegralPolynomial, RationalPolynomial]
