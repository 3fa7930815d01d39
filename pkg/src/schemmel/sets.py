"""The sets S_m and T_m, built by two unrelated algorithms.

Q_m collects the primes whose L_m-iteration dies at 0, and S_m is every
integer with no prime factor in Q_m.  T_m is defined recursively: 1 is a
member, a prime p is a member exactly when p - m is, and a composite is
a member exactly when all of its prime factors are.  The two
constructions provably coincide; this module builds both independently
so that agreement can be checked rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arith import SieveTable, build_spf_sieve, factorize
from .dynamics import DynamicsTable, build_tables


@dataclass(frozen=True)
class SetTables:
    """Membership bitmaps for T_m and S_m over [1, limit].

    Index 0 of each bitmap is unused and False.  q_primes and p_primes
    split the primes up to limit by terminal value (0 and 1).
    """

    m: int
    limit: int
    t_member: np.ndarray
    s_member: np.ndarray
    q_primes: tuple[int, ...]
    p_primes: tuple[int, ...]


@dataclass(frozen=True)
class AgreementReport:
    m: int
    limit: int
    t_count: int
    s_count: int
    disagreements: tuple[int, ...]

    @property
    def agree(self) -> bool:
        return not self.disagreements


def build_T(m: int, limit: int, sieve: SieveTable | None = None) -> np.ndarray:
    """T_m membership bitmap by one bottom-up pass.

    The composite rule used here is "every prime factor is a member",
    which is equivalent to the two-part product criterion because
    membership is closed under divisors.
    """
    if m < 1:
        raise ValueError("m must be a positive integer")
    if limit < 1:
        raise ValueError("limit must be >= 1")
    if sieve is None or sieve.limit < limit:
        sieve = build_spf_sieve(limit)
    spf = sieve.spf
    t = np.zeros(limit + 1, dtype=bool)
    t[1] = True
    for n in range(2, limit + 1):
        p = int(spf[n])
        if p == n:
            t[n] = n - m >= 1 and t[n - m]
        else:
            t[n] = t[p] and t[n // p]
    return t


def build_S(m: int, limit: int, q_primes) -> np.ndarray:
    """S_m membership bitmap: strike out every multiple of each q."""
    if limit < 1:
        raise ValueError("limit must be >= 1")
    s = np.ones(limit + 1, dtype=bool)
    s[0] = False
    for q in q_primes:
        q = int(q)
        if q <= limit:
            s[q::q] = False
    return s


def build_Q(m: int, limit: int, table: DynamicsTable) -> tuple[int, ...]:
    """Primes q <= limit with terminal value 0."""
    if limit > table.limit:
        raise ValueError(f"limit {limit} exceeds table limit {table.limit}")
    primes = table.sieve.primes()
    primes = primes[primes <= limit]
    return tuple(int(q) for q in primes[~table.H[primes]])


def build_P(m: int, limit: int, table: DynamicsTable) -> tuple[int, ...]:
    """Primes p <= limit with terminal value 1."""
    if limit > table.limit:
        raise ValueError(f"limit {limit} exceeds table limit {table.limit}")
    primes = table.sieve.primes()
    primes = primes[primes <= limit]
    return tuple(int(p) for p in primes[table.H[primes]])


def in_S(m: int, n: int, q_primes, coverage_limit: int | None = None) -> bool:
    """Whether no prime in q_primes divides n.

    The verdict is only meaningful when every prime factor of n lies
    within the range q_primes was built from.  Pass that range as
    coverage_limit to have the precondition checked (at the cost of
    factoring n); without it the caller vouches for coverage.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if coverage_limit is not None:
        worst = max((p for p, _ in factorize(n).factors), default=1)
        if worst > coverage_limit:
            raise ValueError(
                f"prime factor {worst} of {n} is above coverage limit "
                f"{coverage_limit}"
            )
    return all(n % int(q) for q in q_primes)


def build_set_tables(
    m: int,
    limit: int,
    table: DynamicsTable | None = None,
) -> SetTables:
    if table is None or table.m != m or table.limit < limit:
        table = build_tables(m, limit)
    q = build_Q(m, limit, table)
    p = build_P(m, limit, table)
    return SetTables(
        m=m,
        limit=limit,
        t_member=build_T(m, limit, table.sieve),
        s_member=build_S(m, limit, q),
        q_primes=q,
        p_primes=p,
    )


def check_S_equals_T(
    m: int,
    limit: int,
    table: DynamicsTable | None = None,
) -> AgreementReport:
    """Build both bitmaps independently and diff them."""
    tables = build_set_tables(m, limit, table)
    diff = np.flatnonzero(tables.t_member != tables.s_member)
    return AgreementReport(
        m=m,
        limit=limit,
        t_count=int(np.count_nonzero(tables.t_member)),
        s_count=int(np.count_nonzero(tables.s_member)),
        disagreements=tuple(int(x) for x in diff),
    )
