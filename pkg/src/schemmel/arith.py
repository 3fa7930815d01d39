"""Prime sieving, primality testing, and integer factorization.

Everything downstream (totient evaluation, iterate dynamics, set
construction) factors integers through this module.  Range scans use a
smallest-prime-factor table; one-off integers of any size go through
deterministic Miller-Rabin plus Brent's cycle-finding variant of the rho
method.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import gcd, isqrt

import numpy as np


class ResourceLimitError(RuntimeError):
    """A configured memory or work budget would be exceeded."""


#: Default cap on the number of table entries a single build may allocate.
MAX_TABLE_ENTRIES = 10**8

#: Below this bound the 13 smallest primes are a proven-complete witness set
#: for the strong probable-prime test (Sorenson & Webster).
MR_DETERMINISTIC_BOUND = 3_317_044_064_679_887_385_961_981
MR_DETERMINISTIC_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)

#: Above the deterministic bound, this many extra fixed-seed rounds run on
#: top of the deterministic bases.  The answer is then a probable prime.
MR_EXTRA_ROUNDS = 64
MR_SEED = 0x5EED_1729

_TRIAL_LIMIT = 10**6
_RHO_BUDGET = 2_000_000


@dataclass(frozen=True)
class SieveTable:
    """Smallest-prime-factor table over [0, limit].

    spf[n] is the least prime dividing n for n >= 2; spf[0] = 0 and
    spf[1] = 1.  n is prime exactly when spf[n] == n.  Immutable after
    construction and safe to share across threads and forked workers.
    """

    limit: int
    spf: np.ndarray

    def smallest_factor(self, n: int) -> int:
        if not 2 <= n <= self.limit:
            raise ValueError(f"{n} outside sieve range [2, {self.limit}]")
        return int(self.spf[n])

    def is_prime(self, n: int) -> bool:
        if not 0 <= n <= self.limit:
            raise ValueError(f"{n} outside sieve range [0, {self.limit}]")
        return n >= 2 and int(self.spf[n]) == n

    def primes(self) -> np.ndarray:
        """All primes <= limit, ascending."""
        idx = np.arange(self.limit + 1, dtype=self.spf.dtype)
        hits = np.flatnonzero(self.spf == idx)  # 0, 1, then every prime
        return hits[2:].astype(np.int64)


@dataclass(frozen=True)
class Factorization:
    """Canonical prime factorization of a nonnegative integer.

    factors is a tuple of (prime, exponent) pairs with strictly increasing
    primes; it is empty exactly for n in {0, 1}, and n = 0 is flagged by
    is_zero rather than by any factor content.
    """

    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("negative integers have no canonical factorization here")
        prev = 1
        prod = 1
        for p, a in self.factors:
            if p <= prev:
                raise ValueError("factor primes must be strictly increasing")
            if a < 1:
                raise ValueError("factor exponents must be >= 1")
            prev = p
            prod *= p**a
        if self.n == 0:
            if self.factors:
                raise ValueError("zero carries no factors")
        elif prod != self.n:
            raise ValueError(f"factors multiply to {prod}, not {self.n}")

    @property
    def is_zero(self) -> bool:
        return self.n == 0

    def exponent_sum(self) -> int:
        return sum(a for _, a in self.factors)


def build_spf_sieve(limit: int, max_entries: int = MAX_TABLE_ENTRIES) -> SieveTable:
    """Fill the smallest-prime-factor table for [0, limit].

    Eratosthenes-style masked strikes: for each prime p the still-unset
    entries among p*p, p*p+p, ... receive p, so every composite keeps the
    first (smallest) prime that reaches it.
    """
    if limit < 1:
        raise ValueError("sieve limit must be >= 1")
    if limit + 1 > max_entries:
        raise ResourceLimitError(
            f"sieve of {limit + 1} entries exceeds cap of {max_entries}"
        )
    dtype = np.int32 if limit < 2**31 else np.int64
    spf = np.zeros(limit + 1, dtype=dtype)
    spf[1] = 1
    for i in range(2, isqrt(limit) + 1):
        if spf[i] == 0:
            block = spf[i * i :: i]
            block[block == 0] = i
    untouched = np.flatnonzero(spf == 0)  # 0 itself plus all primes > sqrt(limit)
    spf[untouched] = untouched
    spf[0] = 0
    return SieveTable(limit=limit, spf=spf)


def prime_array(limit: int) -> np.ndarray:
    """Primes <= limit as an int64 array (plain boolean sieve)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for i in range(2, isqrt(limit) + 1):
        if mask[i]:
            mask[i * i :: i] = False
    return np.flatnonzero(mask).astype(np.int64)


def _mr_witness(a: int, d: int, s: int, n: int) -> bool:
    """True if base a proves n composite (n-1 = d * 2^s with d odd)."""
    a %= n
    if a <= 1:
        return False
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return False
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return False
    return True


def is_prime(n: int) -> bool:
    """Primality of an arbitrary nonnegative integer.

    Deterministic (complete witness set) below MR_DETERMINISTIC_BOUND,
    which covers all 64-bit inputs.  Larger inputs get the same bases plus
    MR_EXTRA_ROUNDS fixed-seed random bases and the answer is "probable
    prime"; use probable_prime_only() to tell which regime applied.
    """
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if any(_mr_witness(a, d, s, n) for a in MR_DETERMINISTIC_BASES):
        return False
    if n < MR_DETERMINISTIC_BOUND:
        return True
    rng = random.Random(MR_SEED ^ (n & 0xFFFFFFFF))
    bases = (rng.randrange(2, n - 1) for _ in range(MR_EXTRA_ROUNDS))
    return not any(_mr_witness(a, d, s, n) for a in bases)


def probable_prime_only(n: int) -> bool:
    """True when is_prime(n) relied on probabilistic rounds."""
    return n >= MR_DETERMINISTIC_BOUND


def _rho_brent(n: int, budget: int) -> int:
    """A nontrivial factor of composite n, or 0 if the budget ran out.

    Brent's variant with deterministic parameters (x0 = 2, c = 1, 2, ...)
    so repeated runs split identically.
    """
    if n % 2 == 0:
        return 2
    spent = 0
    for c in range(1, 64):
        y, r, q = 2, 1, 1
        g = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                spent += min(128, r - k)
                g = gcd(q, n)
                k += 128
            r *= 2
            if spent > budget:
                return 0
        if g == n:
            # backtrack one step at a time
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
                spent += 1
                if spent > budget:
                    return 0
        if g != n:
            return g
    return 0


def factorize(
    n: int,
    sieve: SieveTable | None = None,
    rho_budget: int = _RHO_BUDGET,
) -> Factorization:
    """Canonical prime factorization of n >= 1.

    Sieve lookups when n is covered; otherwise trial division by primes up
    to 10^6 followed by rho splitting with primality certification of every
    cofactor.  Deterministic.  Raises ResourceLimitError naming the stuck
    cofactor if the rho budget is exhausted.
    """
    if n < 1:
        raise ValueError("factorize requires n >= 1")
    if n == 1:
        return Factorization(1, ())
    if sieve is not None and n <= sieve.limit:
        return Factorization(n, tuple(_factor_with_sieve(n, sieve)))

    pairs: dict[int, int] = {}
    rest = n
    for p in _small_primes():
        if p * p > rest:
            break
        while rest % p == 0:
            pairs[p] = pairs.get(p, 0) + 1
            rest //= p
        if rest == 1:
            break
    if rest > 1:
        if rest < _TRIAL_LIMIT * _TRIAL_LIMIT or is_prime(rest):
            # below the square of the trial bound any survivor is prime
            pairs[rest] = pairs.get(rest, 0) + 1
        else:
            for q in _split_completely(rest, rho_budget):
                pairs[q] = pairs.get(q, 0) + 1
    return Factorization(n, tuple(sorted(pairs.items())))


def _factor_with_sieve(n: int, sieve: SieveTable):
    spf = sieve.spf
    while n > 1:
        p = int(spf[n])
        a = 0
        while n % p == 0:
            n //= p
            a += 1
        yield (p, a)


_SMALL_PRIMES: list[int] | None = None


def _small_primes() -> list[int]:
    # Python ints, not int64: trial division must work on arbitrary-size n.
    global _SMALL_PRIMES
    if _SMALL_PRIMES is None:
        _SMALL_PRIMES = prime_array(_TRIAL_LIMIT).tolist()
    return _SMALL_PRIMES


def _split_completely(n: int, budget: int) -> list[int]:
    """All prime factors of n (with multiplicity); n has no factor <= 10^6."""
    stack = [n]
    out: list[int] = []
    while stack:
        v = stack.pop()
        if is_prime(v):
            out.append(v)
            continue
        d = _rho_brent(v, budget)
        if d in (0, v):
            raise ResourceLimitError(f"factorization budget exhausted on cofactor {v}")
        stack.append(d)
        stack.append(v // d)
    return out


def smallest_prime_factor(n: int, sieve: SieveTable | None = None) -> int:
    """p(n): the least prime dividing n, for n >= 2."""
    if n < 2:
        raise ValueError("smallest prime factor needs n >= 2")
    if sieve is not None and n <= sieve.limit:
        return sieve.smallest_factor(n)
    for p in (2, 3, 5):
        if n % p == 0:
            return p
    return factorize(n, sieve).factors[0][0]


def valuation(p: int, n: int) -> int:
    """Largest k with p^k dividing n (p prime, n >= 1)."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n < 1:
        raise ValueError("valuation requires n >= 1")
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def big_omega(n: int) -> int:
    """Number of prime factors of n counted with multiplicity; 1 maps to 0."""
    if n < 1:
        raise ValueError("big_omega requires n >= 1")
    return factorize(n).exponent_sum()
