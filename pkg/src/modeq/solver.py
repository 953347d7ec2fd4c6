"""Solve the generalized modular equation ``R_t(beta) = p * R_t(alpha)`` for beta."""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

from .errors import ConvergenceError, DomainError, PrecisionExhaustedError
from .hypergeom import SignatureParams, multiplier, ratio_R, ratio_R_derivative
from .precision import RealLike, context, format_real, parse_real, to_real

#: bisection stops (and Newton takes over) once the bracket is this tight, relatively
_BISECT_BITS = 10
_MAX_BRACKET_STEPS = 64
_MAX_NEWTON_STEPS = 60


def default_tol(precision_bits: int):
    return context(precision_bits).ldexp(1, -precision_bits + 16)


@dataclass(frozen=True)
class ModulusPair:
    """A solution record: beta has order ``p`` over alpha in signature ``1/t``."""

    t: Fraction
    p: int
    alpha: object
    beta: object
    m: object
    residual: object
    precision_bits: int

    @property
    def params(self) -> SignatureParams:
        return SignatureParams(self.t, self.precision_bits)

    def to_json(self) -> dict:
        fmt = lambda x: format_real(x, self.precision_bits)  # noqa: E731
        return {
            "t": str(self.t),
            "p": self.p,
            "alpha": fmt(self.alpha),
            "beta": fmt(self.beta),
            "m": fmt(self.m),
            "residual": fmt(self.residual),
            "precision_bits": self.precision_bits,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ModulusPair":
        bits = int(data["precision_bits"])
        return cls(
            t=Fraction(data["t"]),
            p=int(data["p"]),
            alpha=parse_real(data["alpha"], bits),
            beta=parse_real(data["beta"], bits),
            m=parse_real(data["m"], bits),
            residual=parse_real(data["residual"], bits),
            precision_bits=bits,
        )


def verify_solution(params: SignatureParams, pair: ModulusPair, tol: Optional[RealLike] = None):
    """Return ``(residual, ok)`` with ``residual = |R(beta) - p R(alpha)|``."""
    ctx = context(params.precision_bits)
    residual = abs(ratio_R(params, pair.beta) - pair.p * ratio_R(params, pair.alpha))
    tol = default_tol(params.precision_bits) if tol is None else to_real(tol, ctx)
    return residual, residual <= tol


def _make_pair(params, alpha, beta, p, residual) -> ModulusPair:
    return ModulusPair(
        t=params.t,
        p=p,
        alpha=alpha,
        beta=beta,
        m=multiplier(params, alpha, beta),
        residual=residual,
        precision_bits=params.precision_bits,
    )


def solve_order_p(params: SignatureParams, alpha: RealLike, p: int,
                  tol: Optional[RealLike] = None, polish: bool = True) -> ModulusPair:
    """Find beta in (0, alpha] with ``R_t(beta) = p R_t(alpha)``.

    The bracket ``(eps, alpha]`` is widened by squaring ``eps`` until the
    decreasing function ``g(b) = R(b) - p R(alpha)`` changes sign, then halved
    geometrically (the root can sit many decades below alpha) until 10 bits
    are known.  Newton steps, safeguarded by the bracket, finish the job.
    """
    bits = params.precision_bits
    ctx = context(bits)
    alpha = to_real(alpha, ctx)
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    if int(p) != p or p < 1:
        raise DomainError(f"order p must be a positive integer, got {p!r}")
    p = int(p)
    tol = default_tol(bits) if tol is None else to_real(tol, ctx)
    if tol <= 0:
        raise DomainError("tol must be positive")

    target = p * ratio_R(params, alpha)
    if p == 1:
        return _make_pair(params, alpha, alpha, 1, ctx.mpf(0))

    def g(b):
        return ratio_R(params, b) - target

    hi, g_hi = alpha, target / p - target
    lo = alpha / 2
    g_lo = g(lo)
    steps = 0
    while g_lo <= 0:
        steps += 1
        if steps > _MAX_BRACKET_STEPS or lo == 0:
            raise PrecisionExhaustedError(
                f"could not bracket beta below alpha={alpha}; increase precision_bits"
            )
        hi, g_hi = lo, g_lo
        lo = lo * lo
        g_lo = g(lo)

    rel = ctx.ldexp(1, -_BISECT_BITS)
    while hi - lo > rel * lo:
        mid = ctx.sqrt(lo * hi)
        if mid <= lo or mid >= hi:
            break
        g_mid = g(mid)
        if g_mid > 0:
            lo, g_lo = mid, g_mid
        else:
            hi, g_hi = mid, g_mid

    beta = lo if abs(g_lo) < abs(g_hi) else hi
    g_beta = g_lo if beta is lo else g_hi
    if polish:
        stop = ctx.ldexp(1, -bits + 2)
        for _ in range(_MAX_NEWTON_STEPS):
            if g_beta == 0:
                break
            step = g_beta / ratio_R_derivative(params, beta)
            candidate = beta - step
            if not lo < candidate < hi:
                candidate = ctx.sqrt(lo * hi)
            beta = candidate
            g_beta = g(beta)
            if g_beta > 0:
                lo = beta
            else:
                hi = beta
            if abs(step) <= stop * beta or abs(g_beta) <= tol / 64:
                break
    else:
        while abs(g_beta) > tol:
            mid = (lo + hi) / 2
            if mid <= lo or mid >= hi:
                break
            g_mid = g(mid)
            if g_mid > 0:
                lo = mid
            else:
                hi = mid
            beta, g_beta = mid, g_mid

    residual = abs(g_beta)
    if residual > tol:
        raise ConvergenceError(
            f"residual {ctx.nstr(residual, 5)} exceeds tol {ctx.nstr(tol, 5)} at {bits} bits"
        )
    return _make_pair(params, alpha, beta, p, residual)


def swap_solution(pair: ModulusPair) -> ModulusPair:
    """Fricke image ``(alpha, beta) -> (1 - beta, 1 - alpha)`` with refreshed m and residual.

    A small beta loses its low bits in ``1 - beta`` at the record's precision,
    so the swapped record is widened until both complements are exact.  This
    also makes the swap an exact involution.
    """
    bits = pair.precision_bits
    ctx = context(bits)
    extra = max(0, -ctx.mag(pair.alpha), -ctx.mag(pair.beta)) + 1
    params = pair.params.with_precision(bits + extra)
    wide = context(params.precision_bits)
    alpha = 1 - wide.convert(pair.beta)
    beta = 1 - wide.convert(pair.alpha)
    swapped = replace(pair, alpha=alpha, beta=beta, precision_bits=params.precision_bits)
    residual, _ = verify_solution(params, swapped)
    return replace(swapped, m=multiplier(params, alpha, beta), residual=residual)
