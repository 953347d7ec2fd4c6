"""Extended-precision ``2F1(t, 1-t; 1; z)`` on the unit interval.

For the one-parameter family ``F_t(z) = 2F1(t, 1-t; 1; z)`` the direct power
series converges like ``z**n``, which is useless near ``z = 1``.  Since
``c = a + b`` the z <-> 1-z connection formula is logarithmic:

    F_t(z) = sin(pi t)/pi * sum_n  u_n(w) * (h_n - log w),   w = 1 - z,

with ``u_n(w) = (t)_n (1-t)_n / (n!)^2 * w**n`` the terms of ``F_t(w)`` and
``h_n = 2 psi(n+1) - psi(t+n) - psi(1-t+n)``.  One pass over the series in
``w = min(z, 1-z)`` therefore yields both ``F_t(w)`` and ``F_t(1-w)``, which is
all the ratio ``R_t`` needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import ConvergenceError, DomainError
from .precision import GUARD_BITS, RealLike, check_precision, context, to_real

#: signatures whose Hecke group is arithmetic, keyed by t
LAMBDA_SQ = {Fraction(1, 2): 4, Fraction(1, 3): 3, Fraction(1, 4): 2}


@dataclass(frozen=True)
class SignatureParams:
    """Theory parameter ``t`` (signature ``1/t``) plus the working precision."""

    t: Fraction
    precision_bits: int = 128

    def __post_init__(self):
        t = self.t if isinstance(self.t, Fraction) else Fraction(str(self.t))
        if not 0 < t <= Fraction(1, 2):
            raise DomainError(f"t must lie in (0, 1/2], got {t}")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "precision_bits", check_precision(self.precision_bits))

    @classmethod
    def from_signature(cls, signature, precision_bits: int = 128) -> "SignatureParams":
        return cls(1 / Fraction(signature), precision_bits)

    @property
    def signature(self) -> Fraction:
        return 1 / self.t

    @property
    def lambda_sq(self) -> Optional[int]:
        """``lambda_t**2`` for the arithmetic cases t in {1/2, 1/3, 1/4}, else None."""
        return LAMBDA_SQ.get(self.t)

    @property
    def is_arithmetic(self) -> bool:
        return self.t in LAMBDA_SQ

    def with_precision(self, bits: int) -> "SignatureParams":
        return SignatureParams(self.t, bits)

    def theta(self):
        """Vertex angle ``(1 - 2t) pi`` of the image triangle."""
        ctx = context(self.precision_bits)
        return (1 - 2 * to_real(self.t, ctx)) * ctx.pi

    def lambda_t(self):
        """``2 cos((1 - 2t) pi / 2)`` at working precision."""
        ctx = context(self.precision_bits)
        return 2 * ctx.cos(self.theta() / 2)


@dataclass(frozen=True)
class TriangleVertices:
    """Images of 0, 1 and infinity under the Schwarz map (boundary metadata only)."""

    at_zero: str
    at_one: object
    at_infinity: object
    angle_at_infinity: object


def default_term_cap(precision_bits: int) -> int:
    return 100 * precision_bits


def _series_pair(t: Fraction, w, ctx, max_terms: int):
    """Sum ``F_t(w)`` and ``sum u_n(w) h_n`` together, at the precision of ``ctx``.

    Both series have positive terms for 0 < w <= 1/2 after the first few, so
    the relative stopping rule is safe.
    """
    P, Q = t.numerator, t.denominator
    eps = ctx.ldexp(1, -ctx.prec - 8)
    h = -2 * ctx.euler - ctx.digamma(ctx.mpf(P) / Q) - ctx.digamma(ctx.mpf(Q - P) / Q)
    log_w = ctx.ln(w)
    term = ctx.mpf(1)
    f_sum = ctx.mpf(0)
    g_sum = ctx.mpf(0)
    n = 0
    while True:
        f_sum += term
        g_sum += term * h
        if n > 0 and term < eps * f_sum and abs(term * (h - log_w)) < eps * abs(g_sum - log_w * f_sum):
            return f_sum, g_sum
        if n >= max_terms:
            raise ConvergenceError(f"hypergeometric series did not converge in {max_terms} terms")
        a_n = P + n * Q  # Q * (t + n)
        b_n = Q - P + n * Q  # Q * (1 - t + n)
        term = term * (a_n * b_n) / (Q * Q * (n + 1) ** 2) * w
        # psi(m+1) - psi(m) = 1/m
        h += ctx.mpf(2) / (n + 1) - ctx.mpf(Q) / a_n - ctx.mpf(Q) / b_n
        n += 1


def _both_sides(params: SignatureParams, z, max_terms: Optional[int] = None):
    """Return ``(F_t(z), F_t(1-z))`` at guard precision for 0 < z < 1."""
    bits = params.precision_bits
    cap = default_term_cap(bits) if max_terms is None else max_terms
    ctx = context(bits + GUARD_BITS)
    z = ctx.convert(z)
    flipped = z > 0.5
    w = 1 - z if flipped else z
    f_w, g_w = _series_pair(params.t, w, ctx, cap)
    f_other = ctx.sinpi(to_real(params.t, ctx)) / ctx.pi * (g_w - ctx.ln(w) * f_w)
    if flipped:
        return f_other, f_w
    return f_w, f_other


def _check_open_unit(name: str, x) -> None:
    if not 0 < x < 1:
        raise DomainError(f"{name} must lie in (0, 1), got {x}")


def gauss_2f1_unit(params: SignatureParams, z: RealLike, method: str = "auto",
                   max_terms: Optional[int] = None):
    """``2F1(t, 1-t; 1; z)`` for ``0 <= z < 1``.

    ``method`` selects the evaluation branch: ``"series"`` sums the power
    series in ``z``, ``"connection"`` uses the logarithmic expansion about 1,
    and ``"auto"`` picks the series for ``z <= 1/2``.
    """
    bits = params.precision_bits
    ctx = context(bits)
    hi = context(bits + GUARD_BITS)
    z = to_real(z, ctx)
    if not 0 <= z < 1:
        raise DomainError(f"z must lie in [0, 1), got {z}")
    if method == "auto":
        method = "series" if z <= 0.5 else "connection"
    cap = default_term_cap(bits) if max_terms is None else max_terms
    if z == 0:
        return ctx.mpf(1)
    if method == "series":
        value, _ = _series_pair(params.t, hi.convert(z), hi, cap)
    elif method == "connection":
        w = 1 - hi.convert(z)
        f_w, g_w = _series_pair(params.t, w, hi, cap)
        value = hi.sinpi(to_real(params.t, hi)) / hi.pi * (g_w - hi.ln(w) * f_w)
    else:
        raise ValueError(f"unknown method {method!r}")
    return +ctx.convert(value)


def ratio_R(params: SignatureParams, z: RealLike):
    """``F_t(1-z) / F_t(z)``: strictly decreasing from +inf at 0 to 0 at 1."""
    ctx = context(params.precision_bits)
    z = to_real(z, ctx)
    _check_open_unit("z", z)
    f_z, f_1mz = _both_sides(params, z)
    return +ctx.convert(f_1mz / f_z)


def ratio_R_derivative(params: SignatureParams, z: RealLike):
    """``dR_t/dz`` from the Wronskian of the two hypergeometric solutions.

    ``F(z) * d/dz F(1-z) - F(1-z) * F'(z) = -sin(pi t) / (pi z (1-z))``, hence
    ``R'(z) = -sin(pi t) / (pi z (1-z) F(z)**2)``.
    """
    ctx = context(params.precision_bits)
    z = to_real(z, ctx)
    _check_open_unit("z", z)
    hi = context(params.precision_bits + GUARD_BITS)
    f_z, _ = _both_sides(params, z)
    zz = hi.convert(z)
    value = -hi.sinpi(to_real(params.t, hi)) / (hi.pi * zz * (1 - zz) * f_z ** 2)
    return +ctx.convert(value)


def schwarz_map(params: SignatureParams, z: RealLike):
    """``f_t(z) = i R_t(z)``; purely imaginary on (0, 1)."""
    ctx = context(params.precision_bits)
    return ctx.mpc(0, ratio_R(params, z))


def schwarz_vertices(params: SignatureParams) -> TriangleVertices:
    """Boundary values of the Schwarz map.  These are recorded, not computed
    from the map: ``f(0) = i*inf``, ``f(1) = 0``, ``f(inf) = exp(i theta/2)``."""
    ctx = context(params.precision_bits)
    theta = params.theta()
    return TriangleVertices(
        at_zero="i*inf",
        at_one=ctx.mpc(0),
        at_infinity=ctx.expj(theta / 2),
        angle_at_infinity=theta,
    )


def multiplier(params: SignatureParams, alpha: RealLike, beta: RealLike):
    """``m = F_t(alpha) / F_t(beta)``."""
    bits = params.precision_bits
    ctx = context(bits)
    alpha = to_real(alpha, ctx)
    beta = to_real(beta, ctx)
    _check_open_unit("alpha", alpha)
    _check_open_unit("beta", beta)
    f_a, _ = _both_sides(params, alpha)
    f_b, _ = _both_sides(params, beta)
    return +ctx.convert(f_a / f_b)
