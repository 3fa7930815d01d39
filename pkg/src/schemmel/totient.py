"""Schemmel totient functions L_m.

For m >= 1 and n >= 2 with factorization n = prod p_i^a_i:

    L_m(n) = 0                                   if some p_i <= m
    L_m(n) = prod p_i^(a_i - 1) * (p_i - m)      otherwise

with the conventions L_m(0) = 0 and L_m(1) = 1.  L_1 is the Euler
totient.  Two independent evaluation routes are provided: the factored
product formula and a literal count over residues, so each can check
the other.
"""

from __future__ import annotations

from collections.abc import Iterable

import numpy as np

from .arith import Factorization, ResourceLimitError, SieveTable, factorize

# The counting route walks every residue class mod n and is only meant
# for spot checks, so it gets a hard ceiling.
DEFINITION_COUNT_CAP = 10**6


def schemmel_totient(m: int, n: int, sieve: SieveTable | None = None) -> int:
    """L_m(n) via the product over prime factors.

    A sieve covering n makes repeated calls cheap; without one the value
    is factored from scratch.
    """
    if m < 1:
        raise ValueError("m must be a positive integer")
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n <= 1:
        return n
    return schemmel_from_factorization(m, factorize(n, sieve))


def schemmel_from_factorization(
    m: int,
    fact: Factorization | Iterable[tuple[int, int]],
) -> int:
    """L_m applied to an already-factored argument.

    Accepts a Factorization or bare (prime, exponent) pairs.  An empty
    pair list denotes 1.
    """
    if m < 1:
        raise ValueError("m must be a positive integer")
    if isinstance(fact, Factorization):
        if fact.is_zero:
            return 0
        pairs: Iterable[tuple[int, int]] = fact.factors
    else:
        pairs = tuple(fact)
    out = 1
    for p, a in pairs:
        if p <= m:
            return 0
        out *= p ** (a - 1) * (p - m)
    return out


def schemmel_totient_definition(m: int, n: int) -> int:
    """L_m(n) counted directly from the definition.

    Counts k in [1, n] such that gcd(k + s, n) = 1 for every
    s in [0, m - 1].  Refuses n above DEFINITION_COUNT_CAP since the
    scan is linear in n with an m-wide window.
    """
    if m < 1:
        raise ValueError("m must be a positive integer")
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n <= 1:
        return n
    if n > DEFINITION_COUNT_CAP:
        raise ResourceLimitError(
            f"definition count capped at n <= {DEFINITION_COUNT_CAP}, got {n}"
        )
    # coprime[i] says whether gcd(i + 1, n) = 1 for i in [0, n + m - 2];
    # entry k - 1 of the AND of m shifted views covers the window at k.
    values = np.arange(1, n + m, dtype=np.int64)
    coprime = np.gcd(values, n) == 1
    window = coprime[:n].copy()
    for s in range(1, m):
        window &= coprime[s : s + n]
    return int(np.count_nonzero(window))
