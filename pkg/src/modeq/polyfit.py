"""Numerical reconstruction of the modular polynomial ``P(alpha, beta)``.

Solved pairs are pushed through the monomial map ``(a, b) -> (a^j b^k)``;
the polynomial is the (unique, up to scale) kernel vector of the resulting
matrix.  The kernel vector is recovered from the SVD at high precision and
rounded to integers with continued fractions.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Optional, Sequence, Tuple

from .degrees import degree_mu
from .errors import AmbiguousNullspaceError, DomainError, RoundingFailureError
from .hypergeom import SignatureParams
from .precision import context, format_real, parse_real, to_fraction, to_real
from .solver import solve_order_p

DENOMINATOR_BOUND = 10**6
MAX_MU = 8
DEFAULT_RANGE = ("0.1", "0.9")

Grid = Tuple[Tuple[int, ...], ...]


def _graded_order(mu: int):
    """Monomials (j, k) by total degree descending, then j descending."""
    return sorted(((j, k) for j in range(mu + 1) for k in range(mu + 1)),
                  key=lambda jk: (-(jk[0] + jk[1]), -jk[0]))


def normalize_grid(coeffs) -> Grid:
    """Divide out the content and make the graded-lex leading coefficient positive."""
    g = reduce(math.gcd, (abs(c) for row in coeffs for c in row), 0)
    if g == 0:
        raise DomainError("the zero polynomial has no normalization")
    mu = len(coeffs) - 1
    lead = next(coeffs[j][k] for j, k in _graded_order(mu) if coeffs[j][k])
    s = g if lead > 0 else -g
    return tuple(tuple(c // s for c in row) for row in coeffs)


@dataclass(frozen=True)
class BivariatePolynomial:
    """``sum coeffs[j][k] * alpha**j * beta**k`` of degree exactly ``mu`` in each variable."""

    mu: int
    coeffs: Grid

    def __post_init__(self):
        n = self.mu + 1
        if self.mu < 1 or len(self.coeffs) != n or any(len(row) != n for row in self.coeffs):
            raise DomainError(f"coefficient grid must be {n}x{n}")
        grid = tuple(tuple(int(c) for c in row) for row in self.coeffs)
        if not any(grid[self.mu]):
            raise DomainError(f"degree in alpha is below {self.mu}")
        if not any(row[self.mu] for row in grid):
            raise DomainError(f"degree in beta is below {self.mu}")
        object.__setattr__(self, "coeffs", normalize_grid(grid))

    def max_abs_coeff(self) -> int:
        return max(abs(c) for row in self.coeffs for c in row)

    def to_json(self) -> dict:
        return {"mu": self.mu, "coeffs": [[str(c) for c in row] for row in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "BivariatePolynomial":
        return cls(int(data["mu"]), tuple(tuple(int(c) for c in row) for row in data["coeffs"]))

    def pretty(self, x: str = "α", y: str = "β") -> str:
        parts = []
        for j, k in _graded_order(self.mu):
            c = self.coeffs[j][k]
            if not c:
                continue
            mono = " ".join(
                f"{v}^{e}" if e > 1 else v for v, e in ((x, j), (y, k)) if e
            )
            mag = abs(c)
            body = mono if mag == 1 and mono else (f"{mag} {mono}" if mono else str(mag))
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self) -> str:
        return self.pretty()


def eval_poly(P: BivariatePolynomial, alpha, beta, precision_bits: int = 128):
    """Horner in beta with Horner-evaluated coefficient polynomials in alpha."""
    ctx = context(precision_bits)
    alpha = to_real(alpha, ctx)
    beta = to_real(beta, ctx)
    acc = ctx.mpf(0)
    for k in range(P.mu, -1, -1):
        ck = ctx.mpf(0)
        for j in range(P.mu, -1, -1):
            ck = ck * alpha + P.coeffs[j][k]
        acc = acc * beta + ck
    return acc


def fricke_transform(coeffs) -> Grid:
    """Exact integer coefficients of ``P(1 - y, 1 - x)``.

    The coefficient of ``x^j y^k`` in ``P(1-y, 1-x)`` collects
    ``c[r][s] * C(s, j) (-1)^j * C(r, k) (-1)^k`` over ``r >= k, s >= j``.
    """
    n = len(coeffs)
    out = [[0] * n for _ in range(n)]
    for r in range(n):
        for s in range(n):
            c = coeffs[r][s]
            if not c:
                continue
            for j in range(s + 1):
                for k in range(r + 1):
                    out[j][k] += c * math.comb(s, j) * math.comb(r, k) * (-1) ** (j + k)
    return tuple(tuple(row) for row in out)


def _spread(lo, hi, count: int, spacing: str, ctx):
    if spacing == "uniform":
        step = (hi - lo) / (count - 1)
        return [lo + i * step for i in range(count)]
    if spacing == "chebyshev":
        mid, half = (lo + hi) / 2, (hi - lo) / 2
        return [mid - half * ctx.cospi(ctx.mpf(2 * i + 1) / (2 * count)) for i in range(count)]
    raise ValueError(f"unknown spacing {spacing!r}")


def _solve_one(args):
    t, bits, alpha_text, p = args
    pair = solve_order_p(SignatureParams(Fraction(t), bits), parse_real(alpha_text, bits), p)
    return format_real(pair.alpha, bits), format_real(pair.beta, bits)


def sample_pairs(params: SignatureParams, p: int, count: int,
                 lo="0.2", hi="0.8", spacing: str = "uniform", jobs: int = 1):
    """``count`` solved pairs ``(alpha, beta)`` with alpha spread over ``[lo, hi]``.

    ``jobs > 1`` solves in worker processes; output order is the alpha order
    either way.
    """
    bits = params.precision_bits
    ctx = context(bits)
    lo, hi = to_real(lo, ctx), to_real(hi, ctx)
    if count < 2:
        raise DomainError(f"count must be >= 2, got {count}")
    if not 0 < lo < hi < 1:
        raise DomainError(f"need 0 < lo < hi < 1, got lo={lo}, hi={hi}")
    alphas = _spread(lo, hi, count, spacing, ctx)
    if jobs <= 1:
        return [(a, solve_order_p(params, a, p).beta) for a in alphas]
    tasks = [(str(params.t), bits, format_real(a, bits), p) for a in alphas]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        done = list(pool.map(_solve_one, tasks))
    return [(parse_real(a, bits), parse_real(b, bits)) for a, b in done]


@dataclass
class FitDiagnostics:
    """Singular-value information from the last fit."""

    smallest: object = None
    second_smallest: object = None
    gap: object = None
    required_gap: object = None


def min_samples(mu: int) -> int:
    return (mu + 1) ** 2 + 8


def default_fit_precision(mu: int) -> int:
    return 256 if mu <= 6 else 512


def _kernel_vector(samples, mu: int, bits: int, diag: FitDiagnostics):
    ctx = context(bits)
    rows = []
    for a, b in samples:
        a, b = to_real(a, ctx), to_real(b, ctx)
        apow = [ctx.mpf(1)]
        bpow = [ctx.mpf(1)]
        for _ in range(mu):
            apow.append(apow[-1] * a)
            bpow.append(bpow[-1] * b)
        row = [apow[j] * bpow[k] for j in range(mu + 1) for k in range(mu + 1)]
        scale = max(abs(v) for v in row)
        rows.append([v / scale for v in row])
    _, S, V = ctx.svd_r(ctx.matrix(rows), compute_uv=True)
    n = (mu + 1) ** 2
    smallest, second = S[n - 1], S[n - 2]
    diag.smallest, diag.second_smallest = smallest, second
    diag.required_gap = ctx.ldexp(1, bits // 4)
    diag.gap = ctx.inf if smallest == 0 else second / smallest
    if diag.gap < diag.required_gap:
        raise AmbiguousNullspaceError(
            f"singular value gap {ctx.nstr(diag.gap, 5)} below 2^{bits // 4} for mu={mu}: "
            "the kernel is not one-dimensional (wrong mu or too little precision)"
        )
    return [V[n - 1, i] for i in range(n)]


def fit_modular_polynomial(samples: Sequence, mu: int, precision_bits: int = 256,
                           denominator_bound: int = DENOMINATOR_BOUND,
                           diagnostics: Optional[FitDiagnostics] = None) -> BivariatePolynomial:
    """Recover the integer polynomial of bidegree ``(mu, mu)`` vanishing on ``samples``."""
    if not 1 <= mu <= MAX_MU:
        raise DomainError(f"mu must lie in [1, {MAX_MU}], got {mu}")
    if len(samples) < min_samples(mu):
        raise DomainError(f"need at least {min_samples(mu)} samples for mu={mu}, got {len(samples)}")
    alphas = [to_fraction(context(precision_bits).convert(a)) for a, _ in samples]
    if len(set(alphas)) != len(alphas):
        raise DomainError("sample alphas must be pairwise distinct")
    diag = diagnostics if diagnostics is not None else FitDiagnostics()
    ctx = context(precision_bits)
    v = _kernel_vector(samples, mu, precision_bits, diag)
    pivot = max(v, key=abs)
    tol = ctx.ldexp(1, -(precision_bits // 2))
    rationals = []
    for x in v:
        w = x / pivot
        r = to_fraction(w).limit_denominator(denominator_bound)
        if abs(w - ctx.mpf(r.numerator) / r.denominator) > tol:
            raise RoundingFailureError(
                f"kernel entry {ctx.nstr(w, 20)} has no rational with denominator <= "
                f"{denominator_bound} within 2^-{precision_bits // 2}"
            )
        rationals.append(r)
    lcm = reduce(lambda x, y: x * y // math.gcd(x, y), (r.denominator for r in rationals), 1)
    ints = [int(r * lcm) for r in rationals]
    n = mu + 1
    grid = tuple(tuple(ints[j * n + k] for k in range(n)) for j in range(n))
    return BivariatePolynomial(mu, grid)


def residual_bound(P: BivariatePolynomial, precision_bits: int):
    """``2^(-bits/2) * max|coeff|``: what a genuine zero of ``P`` must beat."""
    ctx = context(precision_bits)
    return ctx.ldexp(P.max_abs_coeff(), -(precision_bits // 2))


@dataclass
class SymmetryReport:
    bound: object
    residuals: list = field(default_factory=list)
    sample_ok: list = field(default_factory=list)
    #: +1 or -1 when ``P(1-y, 1-x) = sign * P`` exactly, else None
    coefficient_sign: Optional[int] = None

    @property
    def samples_pass(self) -> bool:
        return all(self.sample_ok)

    @property
    def coefficients_pass(self) -> bool:
        return self.coefficient_sign is not None

    @property
    def passed(self) -> bool:
        return self.samples_pass and self.coefficients_pass


def verify_symmetry(P: BivariatePolynomial, samples: Sequence,
                    precision_bits: int = 256) -> SymmetryReport:
    """Check ``P(1 - beta, 1 - alpha) = 0`` on samples and ``P(1-y, 1-x) = +-P`` exactly."""
    ctx = context(precision_bits)
    report = SymmetryReport(bound=residual_bound(P, precision_bits))
    for a, b in samples:
        a, b = to_real(a, ctx), to_real(b, ctx)
        r = abs(eval_poly(P, 1 - b, 1 - a, precision_bits))
        report.residuals.append(r)
        report.sample_ok.append(r < report.bound)
    image = fricke_transform(P.coeffs)
    if image == P.coeffs:
        report.coefficient_sign = 1
    elif image == tuple(tuple(-c for c in row) for row in P.coeffs):
        report.coefficient_sign = -1
    return report


@dataclass
class Reconstruction:
    params: SignatureParams
    p: int
    mu: int
    polynomial: BivariatePolynomial
    diagnostics: FitDiagnostics
    held_out: list
    held_out_residual: object
    bound: object
    symmetry: SymmetryReport

    @property
    def passed(self) -> bool:
        return self.held_out_residual < self.bound and self.symmetry.passed


def reconstruct(params: SignatureParams, p: int, mu: Optional[int] = None,
                count: Optional[int] = None, held_out: int = 50,
                lo=DEFAULT_RANGE[0], hi=DEFAULT_RANGE[1], jobs: int = 1) -> Reconstruction:
    """Sample, fit and cross-check the modular polynomial of order ``p``.

    ``mu`` defaults to the index-theoretic degree for the signature.  Fit
    samples use a Chebyshev spread of alpha; held-out samples are uniform, so
    the two sets do not share points.
    """
    if mu is None:
        if not params.is_arithmetic:
            raise DomainError("mu must be given for non-arithmetic t")
        mu = degree_mu(p, int(params.signature))
    count = min_samples(mu) if count is None else count
    fit_samples = sample_pairs(params, p, count, lo, hi, spacing="chebyshev", jobs=jobs)
    diag = FitDiagnostics()
    P = fit_modular_polynomial(fit_samples, mu, params.precision_bits, diagnostics=diag)
    check = sample_pairs(params, p, held_out, lo, hi, spacing="uniform", jobs=jobs) if held_out >= 2 else []
    ctx = context(params.precision_bits)
    worst = max((abs(eval_poly(P, a, b, params.precision_bits)) for a, b in check), default=ctx.mpf(0))
    return Reconstruction(
        params=params,
        p=p,
        mu=mu,
        polynomial=P,
        diagnostics=diag,
        held_out=check,
        held_out_residual=worst,
        bound=residual_bound(P, params.precision_bits),
        symmetry=verify_symmetry(P, check, params.precision_bits),
    )
