"""Constructive searches and exact verifications around the dynamics.

Four independent pieces live here:

  * a congruence system whose solutions are the candidate primes p_0 in
    the abundant-prime-power construction, plus the search and witness
    verification for the inequality that construction rests on;
  * a sweep confirming the conjectured lower bound
    R_2(x) >= log(49x/15)/log 7 on a range;
  * a sweep confirming the upper bound R_2(x) <= 3 log(x+2)/log 3 - 3
    together with its unique equality point, and the single large x
    disproving the naive lower bound 3 + log x/log 3;
  * a verifier for the chain p_1 = 306167, p_{i+1} = 4 + p_i^2 showing
    5 p_5 is D_4-abundant, done in exact unbounded arithmetic.

Every pass/fail decision here is an integer comparison.  Powers with
fractional exponents are compared by cross-powering, never by floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import (
    MR_EXTRA_ROUNDS,
    Factorization,
    factorize,
    is_prime,
    prime_array,
    probable_prime_only,
)
from .dynamics import DynamicsTable, Trajectory, build_tables, trajectory
from .totient import schemmel_from_factorization

FOLK_BOUND_X = 480314203

M4_CHAIN_START = 306167


@dataclass(frozen=True)
class CrtSystem:
    """x == 1 at primes dividing m, x == sigma at the other primes < m.

    sigma is -1 exactly when m == 1 (mod q).  Any prime solution p_0 of
    the system has both p_0 and p_0 - m coprime to every prime <= m.
    """

    m: int
    congruences: tuple[tuple[int, int], ...]
    modulus_M: int
    solution: int


@dataclass(frozen=True)
class AbundantWitness:
    m: int
    a: Fraction
    delta: Fraction
    p0: int
    lhs: int
    crt: CrtSystem
    p0_minus_m: Factorization


@dataclass(frozen=True)
class SearchExhausted:
    """No qualifying prime up to search_limit; says nothing beyond it."""

    m: int
    a: Fraction
    delta: Fraction
    search_limit: int
    scanned: int


@dataclass(frozen=True)
class AlphaCheck:
    alpha: int
    l1: int
    l2: int
    ok: bool


@dataclass(frozen=True)
class UpperBoundReport:
    start: int
    end: int
    equality_points: tuple[int, ...]
    violations: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class FolkBoundReport:
    x: int
    r: int
    r_expected: int
    lower_power: int
    upper_power: int
    trajectory: Trajectory

    @property
    def ok(self) -> bool:
        return (
            self.r == self.r_expected
            and self.lower_power < self.x < self.upper_power
        )


@dataclass(frozen=True)
class RemarkChain:
    """p_1..p_5, their certifications, and the L_4 trajectory of 5 p_5."""

    primes_chain: tuple[int, ...]
    probable: tuple[bool, ...]
    mr_rounds: int
    primes_ok: bool
    target: int
    d_value: int
    trajectory: tuple[tuple[int, tuple[tuple[int, int], ...]], ...]

    @property
    def abundant(self) -> bool:
        return self.d_value > self.target

    @property
    def ok(self) -> bool:
        return self.primes_ok and self.abundant


def solve_crt_system(m: int) -> CrtSystem:
    """Solve the candidate-prime congruence system for even m <= 40."""
    if m < 2 or m % 2:
        raise ValueError("the construction needs even m >= 2")
    if m > 40:
        raise ValueError("m above 40 pushes the modulus past 64 bits")
    congruences: list[tuple[int, int]] = []
    for p in (int(q) for q in prime_array(m)):
        if m % p == 0:
            congruences.append((p, 1))
        elif m % p == 1:
            congruences.append((p, p - 1))  # sigma = -1
        else:
            congruences.append((p, 1))  # sigma = +1

    x, mod = 0, 1
    for p, r in congruences:
        k = ((r - x) * pow(mod, -1, p)) % p
        x += mod * k
        mod *= p
    solution = x % mod

    assert math.gcd(solution, mod) == 1
    assert math.gcd(solution - m, mod) == 1
    return CrtSystem(
        m=m,
        congruences=tuple(congruences),
        modulus_M=mod,
        solution=solution,
    )


def _exceeds_power_bound(
    excess: int,
    coeff: Fraction,
    base: int,
    exponent: Fraction,
) -> bool:
    """Exact test of excess > coeff * base**exponent for rational data.

    Both sides are raised to the exponent's denominator so the whole
    comparison happens in integers.
    """
    if excess <= 0:
        return False
    a, b = coeff.numerator, coeff.denominator
    u, v = exponent.numerator, exponent.denominator
    lhs = (excess * b) ** v
    if u >= 0:
        return lhs > a**v * base**u
    return lhs * base ** (-u) > a**v


def find_abundant_prime(
    m: int,
    a: int | str | Fraction = 1,
    delta: int | str | Fraction = 1,
    search_limit: int = 10**6,
) -> AbundantWitness | SearchExhausted:
    """Least prime p_0 in the candidate progression satisfying

        (p_0 - m) * L_m(p_0 - m) > A * p_0**(2 - delta) + m * p_0.

    Exhausting search_limit returns a SearchExhausted value rather than
    an error; the witness is guaranteed to exist but not to be small.
    """
    coeff = Fraction(a)
    dlt = Fraction(delta)
    if coeff <= 0 or dlt <= 0:
        raise ValueError("A and delta must be positive")
    system = solve_crt_system(m)

    first = system.solution
    while first <= m:
        first += system.modulus_M
    scanned = 0
    for p0 in range(first, search_limit + 1, system.modulus_M):
        if not is_prime(p0):
            continue
        scanned += 1
        fact = factorize(p0 - m)
        lhs = (p0 - m) * schemmel_from_factorization(m, fact)
        if _exceeds_power_bound(lhs - m * p0, coeff, p0, 2 - dlt):
            return AbundantWitness(
                m=m,
                a=coeff,
                delta=dlt,
                p0=p0,
                lhs=lhs,
                crt=system,
                p0_minus_m=fact,
            )
    return SearchExhausted(
        m=m, a=coeff, delta=dlt, search_limit=search_limit, scanned=scanned
    )


def alpha_checks(w: AbundantWitness, alpha_max: int) -> tuple[AlphaCheck, ...]:
    """Exact per-alpha data behind verify_abundant_witness.

    l1 = L_m(p0**alpha) and l2 = L_m applied twice; the check is
    l1 + l2 > p0**alpha + A * p0**(alpha - delta).  Passing certifies
    p0**alpha as D_m-abundant, since D_m dominates l1 + l2.
    """
    if alpha_max < 1:
        raise ValueError("alpha_max must be >= 1")
    out = []
    for alpha in range(1, alpha_max + 1):
        l1 = w.p0 ** (alpha - 1) * (w.p0 - w.m)
        pairs = list(w.p0_minus_m.factors)
        if alpha >= 2:
            pairs.append((w.p0, alpha - 1))  # p0 exceeds every factor of p0 - m
        l2 = schemmel_from_factorization(w.m, pairs)
        excess = l1 + l2 - w.p0**alpha
        ok = _exceeds_power_bound(excess, w.a, w.p0, alpha - w.delta)
        out.append(AlphaCheck(alpha=alpha, l1=l1, l2=l2, ok=ok))
    return tuple(out)


def verify_abundant_witness(w: AbundantWitness, alpha_max: int) -> bool:
    return all(c.ok for c in alpha_checks(w, alpha_max))


def _r2_table(end: int, table: DynamicsTable | None) -> DynamicsTable:
    if table is not None and table.m == 2 and table.limit >= end:
        return table
    return build_tables(2, end)


def check_r2_lower_conjecture(
    start: int,
    end: int,
    table: DynamicsTable | None = None,
) -> tuple[int, ...]:
    """Odd x in [start, end] with R_2(x) < log(49x/15)/log 7.

    The bound fails exactly when 15 * 7**R < 49 * x, so each distinct R
    value contributes one integer threshold and the sweep is a few
    vector comparisons.  Expected empty; nonempty output is a finding
    against the conjecture, not a computation error.
    """
    if not 3 < start <= end:
        raise ValueError("need 3 < start <= end")
    table = _r2_table(end, table)
    x = np.arange(start, end + 1, dtype=np.int64)
    rvals = table.R[start : end + 1]
    violations: list[int] = []
    for r in np.unique(rvals):
        threshold = 15 * 7 ** int(r) // 49 + 1  # least x with 49x > 15*7^r
        if threshold > end:
            continue
        mask = (rvals == r) & (x >= threshold) & (x % 2 == 1)
        violations.extend(int(v) for v in x[mask])
    return tuple(sorted(violations))


def _icbrt(n: int) -> int:
    """Floor cube root, exact for any nonnegative integer."""
    c = round(n ** (1 / 3))
    while c**3 > n:
        c -= 1
    while (c + 1) ** 3 <= n:
        c += 1
    return c


def check_r2_upper_bound(
    start: int,
    end: int,
    table: DynamicsTable | None = None,
) -> UpperBoundReport:
    """Sweep of R_2(x) <= 3 log(x+2)/log 3 - 3, i.e. 3**(R+3) <= (x+2)**3.

    Returns the equality points (the bound predicts exactly x = 7) and
    any violations (expected none).
    """
    if not 1 < start <= end:
        raise ValueError("need 1 < start <= end")
    table = _r2_table(end, table)
    x = np.arange(start, end + 1, dtype=np.int64)
    rvals = table.R[start : end + 1]
    equality: list[int] = []
    violations: list[int] = []
    for r in np.unique(rvals):
        power = 3 ** (int(r) + 3)
        c = _icbrt(power)
        if c**3 == power:
            xeq = c - 2
            if start <= xeq <= end and int(table.R[xeq]) == int(r):
                equality.append(xeq)
            c -= 1  # largest integer whose cube is strictly below power
        # violation: (x+2)^3 < power, i.e. x <= c - 2
        hi = min(c - 2, end)
        if hi >= start:
            mask = (rvals == r) & (x <= hi)
            violations.extend(int(v) for v in x[mask])
    return UpperBoundReport(
        start=start,
        end=end,
        equality_points=tuple(sorted(equality)),
        violations=tuple(sorted(violations)),
    )


def check_folk_bound_counterexample(sieve=None) -> FolkBoundReport:
    """The single x where R_2 drops below 3 + log x/log 3.

    R_2(480314203) = 22 while 3^18 < x < 3^19 pins log x/log 3 strictly
    between 18 and 19, so 3 + log x/log 3 < 22 without touching floats.
    """
    traj = trajectory(2, FOLK_BOUND_X, sieve)
    return FolkBoundReport(
        x=FOLK_BOUND_X,
        r=traj.r,
        r_expected=22,
        lower_power=3**18,
        upper_power=3**19,
        trajectory=traj,
    )


def verify_m4_remark() -> RemarkChain:
    """Certify the chain p_{i+1} = 4 + p_i**2 and that 5 p_5 is D_4-abundant.

    The trajectory of 5 p_5 is walked symbolically: each iterate's
    factorization is assembled from the previous one, using
    p_i - 4 = p_{i-1}**2 for the chain primes and ordinary factorization
    for the small cofactors that appear.  All arithmetic is exact.
    """
    chain = [M4_CHAIN_START]
    for _ in range(4):
        chain.append(4 + chain[-1] ** 2)
    probable = tuple(probable_prime_only(p) for p in chain)
    primes_ok = all(is_prime(p) for p in chain)
    target = 5 * chain[-1]

    hints = {chain[i]: ((chain[i - 1], 2),) for i in range(1, 5)}

    def minus4_factors(p: int) -> tuple[tuple[int, int], ...]:
        if p in hints:
            return hints[p]
        return factorize(p - 4).factors

    cur: tuple[tuple[int, int], ...] = ((5, 1), (chain[-1], 1))
    iterates: list[tuple[int, tuple[tuple[int, int], ...]]] = []
    d_value = 0
    for _ in range(64):
        if any(p <= 4 for p, _ in cur):
            iterates.append((0, ()))
            break
        nxt: dict[int, int] = {}
        for p, a in cur:
            pieces = minus4_factors(p)
            got = math.prod(q**b for q, b in pieces)
            if got != p - 4:
                raise RuntimeError(f"bad factorization of {p} - 4")
            if a >= 2:
                nxt[p] = nxt.get(p, 0) + a - 1
            for q, b in pieces:
                nxt[q] = nxt.get(q, 0) + b
        nxt_pairs = tuple(sorted(nxt.items()))
        value = math.prod(p**a for p, a in nxt_pairs)
        if value != schemmel_from_factorization(4, cur):
            raise RuntimeError("symbolic trajectory step mismatch")
        iterates.append((value, nxt_pairs))
        d_value += value
        if value <= 1:
            break
        cur = nxt_pairs
    else:
        raise RuntimeError("trajectory did not terminate within 64 steps")

    return RemarkChain(
        primes_chain=tuple(chain),
        probable=probable,
        mr_rounds=MR_EXTRA_ROUNDS,
        primes_ok=primes_ok,
        target=target,
        d_value=d_value,
        trajectory=tuple(iterates),
    )
