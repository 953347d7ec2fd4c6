"""Exact arithmetic in the even Hecke subgroup ``H_e(lambda)`` and in ``PSL(2, Z)``.

A :class:`HeckeMatrix` ``(a, b, c, d)`` stands for ``[[a, b*lam], [c*lam, d]]``
with ``lam = sqrt(lambda_sq)``; keeping lambda implicit keeps everything in Z.
Elements are projective: the sign is fixed so that the first nonzero of the
top row is positive.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import gcd
from typing import Iterable

from .errors import DomainError

ARITHMETIC_LAMBDA_SQ = (2, 3, 4)
COSET_INDEX_MAX = 10000


def _normalize_sign(a, b, c, d):
    lead = a if a != 0 else b
    if lead < 0:
        return -a, -b, -c, -d
    return a, b, c, d


@dataclass(frozen=True)
class HeckeMatrix:
    a: int
    b: int
    c: int
    d: int
    lambda_sq: int

    def __post_init__(self):
        if self.lambda_sq not in ARITHMETIC_LAMBDA_SQ:
            raise DomainError(f"lambda_sq must be one of {ARITHMETIC_LAMBDA_SQ}, got {self.lambda_sq}")
        if self.a * self.d - self.b * self.c * self.lambda_sq != 1:
            raise DomainError(f"not in H_e: a*d - b*c*lambda^2 != 1 for {self}")
        a, b, c, d = _normalize_sign(self.a, self.b, self.c, self.d)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    @classmethod
    def identity(cls, lambda_sq: int) -> "HeckeMatrix":
        return cls(1, 0, 0, 1, lambda_sq)

    @classmethod
    def translation(cls, lambda_sq: int, n: int = 1) -> "HeckeMatrix":
        """``z -> z + n*lambda``, i.e. ``B**n``."""
        return cls(1, n, 0, 1, lambda_sq)

    @classmethod
    def lower(cls, lambda_sq: int, n: int = 1) -> "HeckeMatrix":
        """``[[1, 0], [n*lambda, 1]]``; for n = -1 this is ``A B A^-1``."""
        return cls(1, 0, n, 1, lambda_sq)

    def __matmul__(self, other: "HeckeMatrix") -> "HeckeMatrix":
        return multiply(self, other)

    def __str__(self) -> str:
        return f"[{self.a} {self.b}; {self.c} {self.d}] lambda2={self.lambda_sq}"

    def entries(self) -> tuple:
        return self.a, self.b, self.c, self.d

    @classmethod
    def parse(cls, text: str) -> "HeckeMatrix":
        """Inverse of ``str``: ``"[a b; c d] lambda2=n"``."""
        m = _HECKE_RE.fullmatch(text.strip())
        if m is None:
            raise DomainError(f"cannot parse Hecke matrix literal {text!r}")
        a, b, c, d, n = (int(g) for g in m.groups())
        return cls(a, b, c, d, n)


_INT = r"([+-]?\d+)"
_HECKE_RE = re.compile(
    rf"\[\s*{_INT}\s+{_INT}\s*;\s*{_INT}\s+{_INT}\s*\]\s*lambda2\s*=\s*{_INT}"
)
_INT_RE = re.compile(rf"\[\s*{_INT}\s+{_INT}\s*;\s*{_INT}\s+{_INT}\s*\]")


@dataclass(frozen=True)
class IntMatrix:
    """An element of PSL(2, Z), sign-normalized like :class:`HeckeMatrix`."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise DomainError(f"determinant is not 1 for {self}")
        a, b, c, d = _normalize_sign(self.a, self.b, self.c, self.d)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        return IntMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __str__(self) -> str:
        return f"[{self.a} {self.b}; {self.c} {self.d}]"

    @classmethod
    def parse(cls, text: str) -> "IntMatrix":
        m = _INT_RE.fullmatch(text.strip())
        if m is None:
            raise DomainError(f"cannot parse integer matrix literal {text!r}")
        return cls(*(int(g) for g in m.groups()))


def multiply(x: HeckeMatrix, y: HeckeMatrix) -> HeckeMatrix:
    if x.lambda_sq != y.lambda_sq:
        raise DomainError(f"lambda mismatch: {x.lambda_sq} vs {y.lambda_sq}")
    L = x.lambda_sq
    return HeckeMatrix(
        x.a * y.a + x.b * y.c * L,
        x.a * y.b + x.b * y.d,
        x.c * y.a + x.d * y.c,
        x.c * y.b * L + x.d * y.d,
        L,
    )


def inverse(x: HeckeMatrix) -> HeckeMatrix:
    return HeckeMatrix(x.d, -x.b, -x.c, x.a, x.lambda_sq)


def word(letters: Iterable[HeckeMatrix], lambda_sq: int) -> HeckeMatrix:
    out = HeckeMatrix.identity(lambda_sq)
    for g in letters:
        out = multiply(out, g)
    return out


def in_HMp(x: HeckeMatrix, p: int) -> bool:
    """Membership in ``H_{M_p}``: the H_e form (enforced on construction) and ``p | c``."""
    if p < 2:
        raise DomainError(f"p must be >= 2, got {p}")
    return x.c % p == 0


def theta_iso(x: HeckeMatrix) -> IntMatrix:
    """Conjugate by ``diag(lambda, 1)``: ``(a, b; c*lambda^2, d)`` in Gamma_0(lambda^2)."""
    return IntMatrix(x.a, x.b, x.c * x.lambda_sq, x.d)


def theta_inverse(m: IntMatrix, lambda_sq: int) -> HeckeMatrix:
    if m.c % lambda_sq:
        raise DomainError(f"{m} is not in Gamma_0({lambda_sq})")
    return HeckeMatrix(m.a, m.b, m.c // lambda_sq, m.d, lambda_sq)


def fricke_conj(x: HeckeMatrix, p: int) -> HeckeMatrix:
    """``W_p^-1 X W_p = (d, -(c/p) lambda; -p b lambda, a)`` with ``W_p = [[0, -1], [p, 0]]``."""
    if p < 1:
        raise DomainError(f"p must be positive, got {p}")
    if x.c % p:
        raise DomainError(f"p={p} does not divide c={x.c}; matrix is not in H_M{p}")
    return HeckeMatrix(x.d, -(x.c // p), -p * x.b, x.a, x.lambda_sq)


def gamma0_member(m: IntMatrix, n: int) -> bool:
    if n < 1:
        raise DomainError(f"level must be >= 1, got {n}")
    return m.c % n == 0


def coset_index_bruteforce(n: int) -> int:
    """Count ``P^1(Z/nZ)``, i.e. ``|PSL(2,Z) : Gamma_0(n)|``, by enumeration.

    Pairs ``(c, d)`` with ``gcd(c, d, n) = 1`` are scanned in lexicographic
    order.  The first unvisited pair of each orbit under unit scaling is the
    orbit's lexicographically smallest member; it is counted and its whole
    orbit is marked.
    """
    if not 1 <= n <= COSET_INDEX_MAX:
        raise DomainError(f"n must lie in [1, {COSET_INDEX_MAX}], got {n}")
    if n == 1:
        return 1
    units = [u for u in range(1, n) if gcd(u, n) == 1]
    seen = bytearray(n * n)
    count = 0
    for c in range(n):
        g = gcd(c, n)
        row = c * n
        for d in range(n):
            if seen[row + d] or gcd(g, d) != 1:
                continue
            count += 1
            for u in units:
                seen[(u * c % n) * n + u * d % n] = 1
    return count
