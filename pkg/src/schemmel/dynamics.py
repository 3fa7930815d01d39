"""Iterate dynamics of the Schemmel totients.

Starting from n and applying L_m repeatedly always reaches 0 or 1,
because each iterate of an argument above 1 is strictly smaller.  This
module derives the three quantities attached to that process:

    R_m(n)  number of steps until the trajectory hits {0, 1}
    H_m(n)  the terminal value itself (0 or 1)
    D_m(n)  sum of all iterates, with D_m(1) defined as 0

and classifies n by comparing D_m(n) with n (deficient, perfect,
abundant, plus a stagnant flag for D_m(n) = 0).  Dense tables over
[0, limit] support bulk scans; above the table limit a scan descends
per-n until iterates fall into the table.
"""

from __future__ import annotations

import multiprocessing
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .arith import (
    MAX_TABLE_ENTRIES,
    ResourceLimitError,
    SieveTable,
    build_spf_sieve,
)
from .totient import schemmel_totient

KIND_DEFICIENT = "deficient"
KIND_PERFECT = "perfect"
KIND_ABUNDANT = "abundant"

# Iterates are strictly decreasing positive terms, so D_m(n) < n^2 / 2;
# keeping table limits below this bound makes signed 64-bit sums safe.
D_SAFE_LIMIT = 3 * 10**9

DEFAULT_TABLE_LIMIT = 10**7

DEFAULT_ABUNDANT_CAP = 1000


@dataclass(frozen=True)
class Trajectory:
    """The iterate sequence L_m(n), L_m^(2)(n), ... down to 0 or 1."""

    m: int
    n: int
    iterates: tuple[int, ...]

    @property
    def r(self) -> int:
        """R_m(n): number of iterations performed."""
        return len(self.iterates)

    @property
    def h(self) -> int:
        """H_m(n): the terminal iterate, 0 or 1."""
        return self.iterates[-1]

    @property
    def d(self) -> int:
        """D_m(n): sum of the iterates, 0 by convention for n = 1."""
        if self.n == 1:
            return 0
        return sum(self.iterates)


@dataclass(frozen=True)
class Classification:
    kind: str
    stagnant: bool


@dataclass(frozen=True)
class DynamicsTable:
    """Dense per-n arrays of L_m, R_m, H_m, D_m over [0, limit].

    Index 0 is a placeholder row (the dynamics are defined for n >= 1).
    H[n] is True exactly when the trajectory of n terminates at 1.
    """

    m: int
    limit: int
    L: np.ndarray
    R: np.ndarray
    H: np.ndarray
    D: np.ndarray
    sieve: SieveTable

    def classification(self, n: int) -> Classification:
        if not 1 <= n <= self.limit:
            raise ValueError(f"n={n} outside table range [1, {self.limit}]")
        return _classify_value(int(self.D[n]), n)


@dataclass(frozen=True)
class ScanReport:
    """Classification counts over [start, end].

    perfect is always exact; abundant_sample holds at most abundant_cap
    of the smallest abundant n found.  elapsed_ms is wall time and is
    the one field that varies between otherwise identical runs.
    """

    m: int
    start: int
    end: int
    deficient: int
    abundant: int
    stagnant: int
    perfect: tuple[int, ...]
    abundant_sample: tuple[int, ...]
    abundant_cap: int
    elapsed_ms: int

    @property
    def perfect_count(self) -> int:
        return len(self.perfect)


def _classify_value(d: int, n: int) -> Classification:
    if d < n:
        return Classification(KIND_DEFICIENT, d == 0)
    if d == n:
        return Classification(KIND_PERFECT, False)
    return Classification(KIND_ABUNDANT, False)


def trajectory(m: int, n: int, sieve: SieveTable | None = None) -> Trajectory:
    """Iterate L_m from n until the value drops into {0, 1}."""
    if m < 1:
        raise ValueError("m must be a positive integer")
    if n < 1:
        raise ValueError("trajectories are defined for n >= 1")
    iterates: list[int] = []
    v = n
    while True:
        try:
            v = schemmel_totient(m, v, sieve)
        except ResourceLimitError as exc:
            raise ResourceLimitError(
                f"trajectory of {n} stuck at iterate {v}: {exc}"
            ) from exc
        iterates.append(v)
        if v <= 1:
            return Trajectory(m, n, tuple(iterates))


def iteration_count(m: int, n: int, sieve: SieveTable | None = None) -> int:
    """R_m(n)."""
    return trajectory(m, n, sieve).r


def terminal(m: int, n: int, sieve: SieveTable | None = None) -> int:
    """H_m(n)."""
    return trajectory(m, n, sieve).h


def iterate_sum(m: int, n: int, sieve: SieveTable | None = None) -> int:
    """D_m(n)."""
    return trajectory(m, n, sieve).d


def classify(m: int, n: int, sieve: SieveTable | None = None) -> Classification:
    """Compare D_m(n) against n; stagnant means D_m(n) = 0."""
    return _classify_value(iterate_sum(m, n, sieve), n)


def build_tables(
    m: int,
    limit: int,
    sieve: SieveTable | None = None,
    max_entries: int = MAX_TABLE_ENTRIES,
) -> DynamicsTable:
    """Dense L/R/H/D tables over [0, limit].

    L is filled by one multiplicative strike pass per prime; R, H, D
    follow by iterating the whole range in lockstep (each round maps
    every still-running n one step further, so the loop depth is the
    maximum R_m over the range, not the range size).
    """
    if m < 1:
        raise ValueError("m must be a positive integer")
    if limit < 1:
        raise ValueError("limit must be >= 1")
    if limit >= D_SAFE_LIMIT:
        raise ResourceLimitError(
            f"table limit {limit} exceeds {D_SAFE_LIMIT}; 64-bit iterate sums "
            "are only guaranteed below that bound"
        )
    if sieve is None or sieve.limit < limit:
        sieve = build_spf_sieve(limit, max_entries=max_entries)

    L = np.arange(limit + 1, dtype=np.int64)
    for p in sieve.primes():
        p = int(p)
        if p > limit:
            break
        if p <= m:
            L[p::p] = 0
        else:
            # at this point every struck entry is still divisible by p,
            # so the integer division is exact
            L[p::p] = L[p::p] // p * (p - m)

    R = np.zeros(limit + 1, dtype=np.int16)
    H = np.zeros(limit + 1, dtype=bool)
    D = np.zeros(limit + 1, dtype=np.int64)
    if limit >= 1:
        R[1] = 1
        H[1] = True

    origin = np.arange(2, limit + 1, dtype=np.int64)
    cur = L[2 : limit + 1].copy()
    while origin.size:
        R[origin] += 1
        D[origin] += cur
        keep = cur >= 2
        done = origin[~keep]
        H[done] = cur[~keep] == 1
        origin = origin[keep]
        cur = L[cur[keep]]

    return DynamicsTable(m=m, limit=limit, L=L, R=R, H=H, D=D, sieve=sieve)


def descend_d(m: int, n: int, table: DynamicsTable) -> int:
    """D_m(n) for n possibly above the table.

    Iterates down until the value lands in the table, then finishes
    with the precomputed sum.
    """
    total = 0
    v = n
    while v > table.limit:
        v = schemmel_totient(m, v, table.sieve)
        total += v
    if v >= 2:
        total += int(table.D[v])
    return total


def descend_r(m: int, n: int, table: DynamicsTable) -> int:
    """R_m(n) for n possibly above the table."""
    steps = 0
    v = n
    while v > table.limit:
        v = schemmel_totient(m, v, table.sieve)
        steps += 1
    if v >= 2:
        steps += int(table.R[v])
    return steps


def _scan_segment(
    m: int,
    lo: int,
    hi: int,
    table: DynamicsTable,
    abundant_cap: int,
) -> tuple[int, int, int, list[int], list[int]]:
    """Counts and witness lists over [lo, hi], ascending."""
    deficient = abundant = stagnant = 0
    perfect: list[int] = []
    abundant_sample: list[int] = []

    table_hi = min(hi, table.limit)
    if lo <= table_hi:
        ns = np.arange(lo, table_hi + 1, dtype=np.int64)
        ds = table.D[lo : table_hi + 1]
        deficient += int(np.count_nonzero(ds < ns))
        stagnant += int(np.count_nonzero(ds == 0))
        perfect.extend(int(x) for x in ns[ds == ns])
        ab = ns[ds > ns]
        abundant += int(ab.size)
        abundant_sample.extend(int(x) for x in ab[:abundant_cap])

    for n in range(max(lo, table.limit + 1), hi + 1):
        d = descend_d(m, n, table)
        if d < n:
            deficient += 1
            if d == 0:
                stagnant += 1
        elif d == n:
            perfect.append(n)
        else:
            abundant += 1
            if len(abundant_sample) < abundant_cap:
                abundant_sample.append(n)

    return deficient, abundant, stagnant, perfect, abundant_sample


_WORKER_STATE: dict = {}


def _scan_worker(bounds: tuple[int, int]) -> tuple:
    lo, hi = bounds
    return _scan_segment(
        _WORKER_STATE["m"],
        lo,
        hi,
        _WORKER_STATE["table"],
        _WORKER_STATE["cap"],
    )


def scan_classify(
    m: int,
    start: int,
    end: int,
    table: DynamicsTable | None = None,
    workers: int = 1,
    abundant_cap: int = DEFAULT_ABUNDANT_CAP,
    table_limit: int = DEFAULT_TABLE_LIMIT,
) -> ScanReport:
    """Classify every n in [start, end].

    The report is identical for any worker count: the range is split
    into contiguous segments whose partial results are merged in order.
    """
    if m < 1:
        raise ValueError("m must be a positive integer")
    if not 1 <= start <= end:
        raise ValueError("need 1 <= start <= end")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    t0 = time.perf_counter()

    if table is None:
        table = build_tables(m, min(end, max(table_limit, 2)))
    elif table.m != m:
        raise ValueError(f"table was built for m={table.m}, not m={m}")

    total = end - start + 1
    segments = _split_range(start, end, workers)
    if len(segments) == 1:
        partials = [_scan_segment(m, start, end, table, abundant_cap)]
    else:
        # fork inherits the table through module state, so workers never
        # pickle the arrays
        _WORKER_STATE.update(m=m, table=table, cap=abundant_cap)
        try:
            ctx = multiprocessing.get_context("fork")
            with ProcessPoolExecutor(len(segments), mp_context=ctx) as pool:
                partials = list(pool.map(_scan_worker, segments))
        except ResourceLimitError:
            raise
        except Exception as exc:
            raise RuntimeError(f"scan worker failed: {exc}") from exc
        finally:
            _WORKER_STATE.clear()

    deficient = abundant = stagnant = 0
    perfect: list[int] = []
    abundant_sample: list[int] = []
    for dcount, acount, scount, plist, alist in partials:
        deficient += dcount
        abundant += acount
        stagnant += scount
        perfect.extend(plist)
        if len(abundant_sample) < abundant_cap:
            abundant_sample.extend(alist[: abundant_cap - len(abundant_sample)])

    perfect_count = len(perfect)
    assert deficient + perfect_count + abundant == total
    elapsed_ms = int((time.perf_counter() - t0) * 1000)
    return ScanReport(
        m=m,
        start=start,
        end=end,
        deficient=deficient,
        abundant=abundant,
        stagnant=stagnant,
        perfect=tuple(perfect),
        abundant_sample=tuple(abundant_sample),
        abundant_cap=abundant_cap,
        elapsed_ms=elapsed_ms,
    )


def _split_range(start: int, end: int, parts: int) -> list[tuple[int, int]]:
    total = end - start + 1
    parts = max(1, min(parts, total))
    step, extra = divmod(total, parts)
    out = []
    lo = start
    for i in range(parts):
        hi = lo + step - 1 + (1 if i < extra else 0)
        out.append((lo, hi))
        lo = hi + 1
    return out
