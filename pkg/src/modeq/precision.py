"""Working-precision plumbing.

Every numeric routine takes its precision as an argument and evaluates in a
private :class:`mpmath.MPContext`.  Contexts are cached per thread and never
have their precision changed after creation, so concurrent callers that ask
for different precisions cannot interfere with each other.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from typing import Union

import mpmath
from mpmath.libmp import repr_dps, to_str

MIN_PRECISION = 53
#: bits carried on top of the requested precision inside summation loops
GUARD_BITS = 20

RealLike = Union[int, float, str, Fraction, "mpmath.mpf"]

_local = threading.local()


def context(bits: int) -> mpmath.MPContext:
    """Return this thread's context with ``prec == bits``."""
    cache = getattr(_local, "contexts", None)
    if cache is None:
        cache = _local.contexts = {}
    ctx = cache.get(bits)
    if ctx is None:
        ctx = mpmath.MPContext()
        ctx.prec = bits
        cache[bits] = ctx
    return ctx


def check_precision(bits: int) -> int:
    if int(bits) != bits or bits < MIN_PRECISION:
        raise ValueError(f"precision_bits must be an integer >= {MIN_PRECISION}, got {bits!r}")
    return int(bits)


def to_real(x: RealLike, ctx: mpmath.MPContext):
    """Convert ``x`` to an mpf of ``ctx``, rounding once at ``ctx.prec``.

    Fractions and decimal strings are rounded from their exact value, so
    ``"0.1"`` and ``Fraction(1, 10)`` give the correctly rounded 0.1 rather
    than the binary double nearest to it.
    """
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return ctx.mpf(x.numerator)
        return ctx.mpf(x.numerator) / x.denominator
    if isinstance(x, str):
        s = x.strip()
        if "/" in s:
            return to_real(Fraction(s), ctx)
        return ctx.mpf(s)
    return ctx.convert(x)


def parse_real(text: str, bits: int):
    """Parse a decimal or ``n/d`` literal at ``bits`` of precision."""
    return to_real(text, context(bits))


def format_real(x, bits: int) -> str:
    """Decimal string with enough digits to round-trip at ``bits``."""
    ctx = context(bits)
    return to_str(ctx.convert(x)._mpf_, repr_dps(bits))


def to_fraction(x) -> Fraction:
    """Exact rational value of a finite mpf."""
    sign, man, exp, _ = x._mpf_
    man, exp = int(man), int(exp)
    if not man and exp:
        raise ValueError(f"cannot convert {x} to a fraction")
    if sign:
        man = -man
    if exp >= 0:
        return Fraction(man << exp)
    return Fraction(man, 1 << -exp)
