"""High-precision rational stand-ins for irrational rotation numbers.

A realization is a :class:`~fractions.Fraction` with a large denominator,
normally a continued-fraction convergent of a named constant.  Products of
huge integers with it can be reduced mod 1 exactly.
"""
from __future__ import annotations

import itertools
import re
from fractions import Fraction
from typing import Iterator

__all__ = [
    "DEFAULT_BITS",
    "MissingRealization",
    "NAMED_CONSTANTS",
    "convergent",
    "realize",
    "frac",
    "torus_norm",
]

DEFAULT_BITS = 256


class MissingRealization(LookupError):
    """A rotation symbol has no numeric value where one is required."""


def _sqrt2() -> Iterator[int]:
    yield 1
    yield from itertools.repeat(2)


def _golden() -> Iterator[int]:
    yield from itertools.repeat(1)


def _e() -> Iterator[int]:
    yield 2
    for k in itertools.count(1):
        yield 1
        yield 2 * k
        yield 1


def _sqrt3() -> Iterator[int]:
    yield 1
    yield from itertools.cycle((1, 2))


NAMED_CONSTANTS = {
    "sqrt2": _sqrt2,
    "golden": _golden,
    "e": _e,
    "sqrt3": _sqrt3,
}


def convergent(name: str, depth: int | None = None, bits: int = DEFAULT_BITS) -> Fraction:
    """Continued-fraction convergent of a named constant.

    With ``depth`` given, the convergent after that many partial quotients;
    otherwise the first one whose denominator is at least ``2**bits``.
    """
    try:
        quotients = NAMED_CONSTANTS[name]()
    except KeyError:
        raise MissingRealization(f"unknown constant {name!r}") from None
    h0, h1 = 1, next(quotients)
    k0, k1 = 0, 1
    used = 1
    target = 1 << bits
    while (depth is None and k1 < target) or (depth is not None and used < depth):
        a = next(quotients)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        used += 1
    return Fraction(h1, k1)


_RATIONAL = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+))?\s*$")


def realize(spec: str | Fraction | int, bits: int = DEFAULT_BITS) -> Fraction:
    """``"sqrt2"``, ``"golden@40"`` (convergent depth) or ``"p/q"``."""
    if isinstance(spec, (Fraction, int)):
        return Fraction(spec)
    spec = spec.strip()
    m = _RATIONAL.match(spec)
    if m:
        return Fraction(int(m.group(1)), int(m.group(2) or 1))
    name, _, depth = spec.partition("@")
    return convergent(name.strip(), int(depth) if depth else None, bits)


def frac(x: Fraction) -> Fraction:
    """Fractional part in ``[0, 1)``."""
    return x - (x.numerator // x.denominator)


def torus_norm(x: Fraction) -> Fraction:
    """Distance to the nearest integer."""
    f = frac(x)
    return min(f, 1 - f)
