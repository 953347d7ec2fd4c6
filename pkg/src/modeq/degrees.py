"""Degrees of the modular polynomials for signatures 2, 3 and 4.

The degree in each variable equals ``|H_e : H_{M_p}|``, which under conjugation
by ``diag(lambda, 1)`` becomes ``Psi(lambda^2 p) / Psi(lambda^2)``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Tuple

from .errors import DomainError, InvariantError

SIGNATURES = (2, 3, 4)
#: lambda_t^2 for each signature 1/t
SIGNATURE_LAMBDA_SQ = {2: 4, 3: 3, 4: 2}
TABLE_P_MAX = 10**6


class Relation(str, Enum):
    MU_EQ_M = "mu_eq_m"
    MU_EQ_3M = "mu_eq_3m"
    NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class DegreeRecord:
    p: int
    signature: int
    mu: int
    russell_m: Optional[int] = None
    russell_l: Optional[int] = None
    relation: Relation = Relation.NOT_APPLICABLE

    def to_json(self) -> dict:
        out = asdict(self)
        out["relation"] = self.relation.value
        return out

    @classmethod
    def from_json(cls, data: dict) -> "DegreeRecord":
        return cls(**{**data, "relation": Relation(data["relation"])})


def prime_factors(n: int) -> List[int]:
    """Distinct prime factors of ``n`` by trial division."""
    out = []
    q = 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1 if q == 2 else 2
    if n > 1:
        out.append(n)
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and prime_factors(n) == [n]


def dedekind_psi(n: int) -> int:
    """``n * prod_{q | n} (1 + 1/q)`` as ``n / prod q * prod (q + 1)``."""
    if n < 1:
        raise DomainError(f"Psi is defined for n >= 1, got {n}")
    primes = prime_factors(n)
    out = n
    for q in primes:
        out = out // q * (q + 1)
    return out


def _check_signature(signature) -> int:
    if signature not in SIGNATURES:
        raise DomainError(f"signature must be one of {SIGNATURES}, got {signature}")
    return int(signature)


def degree_mu(p: int, signature: int) -> int:
    """Degree ``mu(p, 1/t)`` of the modular polynomial of order ``p``."""
    signature = _check_signature(signature)
    if p < 2:
        raise DomainError(f"order p must be >= 2, got {p}")
    if signature == 3:
        num, den = dedekind_psi(3 * p), 4
    else:
        psi2p = dedekind_psi(2 * p)
        if dedekind_psi(4 * p) != 2 * psi2p:
            raise InvariantError(f"Psi(4p) != 2 Psi(2p) for p={p}")
        num, den = psi2p, 3
    if num % den:
        raise InvariantError(f"Psi value {num} not divisible by {den} (p={p}, signature={signature})")
    mu = num // den
    lam2 = SIGNATURE_LAMBDA_SQ[signature]
    if dedekind_psi(lam2 * p) != mu * dedekind_psi(lam2):
        raise InvariantError(f"index ratio disagrees with mu={mu} (p={p}, signature={signature})")
    return mu


def russell_degree(p: int, signature: int) -> Tuple[int, int]:
    """``(m, l)`` with ``(p + 1)/8 = m/l`` (signature 2) or ``(p + 1)/3 = m/l`` (signature 3)."""
    if signature == 2:
        if not (p > 2 and is_prime(p)):
            raise DomainError(f"signature 2 Russell degrees need a prime p > 2, got {p}")
        r = Fraction(p + 1, 8)
    elif signature == 3:
        if not (p > 3 and is_prime(p)):
            raise DomainError(f"signature 3 Russell degrees need a prime p > 3, got {p}")
        r = Fraction(p + 1, 3)
    else:
        raise DomainError(f"Russell degrees are defined for signatures 2 and 3, got {signature}")
    return r.numerator, r.denominator


def degree_record(p: int, signature: int) -> DegreeRecord:
    mu = degree_mu(p, signature)
    m = l = None
    relation = Relation.NOT_APPLICABLE
    if signature in (2, 3) and is_prime(p) and p > signature:
        m, l = russell_degree(p, signature)
        if signature == 3:
            if p % 3 == 2:
                relation, expected = Relation.MU_EQ_3M, 3 * m
            else:
                relation, expected = Relation.MU_EQ_M, m
            if mu != expected:
                raise InvariantError(f"mu={mu} but {relation.value} gives {expected} for p={p}")
    return DegreeRecord(p, signature, mu, m, l, relation)


def degree_table(p_max: int) -> List[DegreeRecord]:
    """Records for ``p = 2..p_max`` and every signature, ordered by p then signature."""
    if not 2 <= p_max <= TABLE_P_MAX:
        raise DomainError(f"p_max must lie in [2, {TABLE_P_MAX}], got {p_max}")
    return [degree_record(p, s) for p in range(2, p_max + 1) for s in SIGNATURES]


def table_rows(records: List[DegreeRecord]) -> List[Tuple[int, int, int]]:
    """Collapse records to ``(p, mu(p,2) = mu(p,4), mu(p,3))`` rows."""
    by_p = {}
    for r in records:
        by_p.setdefault(r.p, {})[r.signature] = r.mu
    rows = []
    for p in sorted(by_p):
        mus = by_p[p]
        if mus[2] != mus[4]:
            raise InvariantError(f"mu(p,2) != mu(p,4) for p={p}")
        rows.append((p, mus[2], mus[3]))
    return rows


def table_csv(records: List[DegreeRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(["p", "mu_sig2_and_4", "mu_sig3"])
    writer.writerows(table_rows(records))
    return buf.getvalue()
