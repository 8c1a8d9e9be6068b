"""Desk-scale search: perfect-number range scans and shape pipelines."""

from __future__ import annotations

import itertools
import math
import time
from collections.abc import Callable, Iterable, Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .criteria import CRITERIA, FilterVerdict, ShapeSpec, apply_criterion
from .errors import DomainError, UsageError
from .factor import DEFAULT_BUDGET, is_prime

SCAN_CEILING = 10**8
BLOCK_SIZE = 1 << 22
SURVIVOR_CAP = 10**4
DEFAULT_CRITERIA = tuple(CRITERIA)

ABUNDANCY_EDGES = np.linspace(0.0, 6.0, 241)
"""Histogram bin edges for sigma(n)/n; every n below 10^8 has abundancy < 6."""


def divisor_sums(lo: int, hi: int) -> np.ndarray:
    """sigma(n) for lo <= n < hi, as int64.

    Each divisor pair (d, n/d) with d <= sqrt(n) is added once, so only
    d <= sqrt(hi) has to be visited and no number is factored.
    """
    if lo < 1 or hi < lo:
        raise DomainError(f"bad block [{lo}, {hi})")
    s = np.zeros(hi - lo, dtype=np.int64)
    for d in range(1, math.isqrt(hi - 1) + 1):
        first = max(d * d, -(-lo // d) * d)
        if first >= hi:
            continue
        count = (hi - 1 - first) // d + 1
        start = first // d
        s[first - lo :: d] += d + np.arange(start, start + count, dtype=np.int64)
        if lo <= d * d < hi:
            s[d * d - lo] -= d
    return s


@dataclass
class ScanReport:
    start: int
    end: int
    odd_only: bool
    perfect_found: list[int]
    odd_perfect_found: list[int]
    elapsed: float
    histogram: dict[str, list[int]] | None = None

    @property
    def scanned(self) -> int:
        n = self.end - self.start + 1
        if self.odd_only:
            n = (self.end + 1) // 2 - self.start // 2
        return n

    @property
    def throughput(self) -> float:
        return self.scanned / self.elapsed if self.elapsed > 0 else float("inf")


def _scan_block(args):
    lo, hi, odd_only, with_hist = args
    s = divisor_sums(lo, hi)
    n = np.arange(lo, hi, dtype=np.int64)
    odd = (n & 1) == 1
    hit = s == 2 * n
    if odd_only:
        hit &= odd
    perfect = n[hit].tolist()
    hist = None
    if with_hist:
        ab = s / n
        hist = (
            np.histogram(ab[odd], ABUNDANCY_EDGES)[0],
            np.histogram(ab[~odd], ABUNDANCY_EDGES)[0] if not odd_only else None,
        )
    return perfect, hist


def scan_perfect(
    start: int,
    end: int,
    odd_only: bool = False,
    *,
    jobs: int = 1,
    block_size: int = BLOCK_SIZE,
    ceiling: int = SCAN_CEILING,
    histogram: bool = False,
) -> ScanReport:
    """Find every n in [start, end] with sigma(n) = 2n using a blocked sieve.

    Blocks are independent; with ``jobs > 1`` they run in worker processes
    and are merged back in block order.  ``histogram`` additionally bins
    the abundancy sigma(n)/n of odd and even n over ABUNDANCY_EDGES.
    """
    if start < 2 or end < start:
        raise UsageError(f"need 2 <= start <= end, got [{start}, {end}]")
    if end > ceiling:
        raise UsageError(f"end {end} exceeds the scan ceiling {ceiling}")
    t0 = time.perf_counter()
    blocks = [
        (lo, min(lo + block_size, end + 1), odd_only, histogram)
        for lo in range(start, end + 1, block_size)
    ]
    if jobs > 1 and len(blocks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_scan_block, blocks))
    else:
        results = [_scan_block(b) for b in blocks]

    perfect = [n for found, _ in results for n in found]
    hist = None
    if histogram:
        nbins = len(ABUNDANCY_EDGES) - 1
        odd_counts = sum((h[0] for _, h in results), np.zeros(nbins, dtype=np.int64))
        hist = {"edges": ABUNDANCY_EDGES.tolist(), "odd": odd_counts.tolist()}
        if not odd_only:
            even_counts = sum((h[1] for _, h in results), np.zeros(nbins, dtype=np.int64))
            hist["even"] = even_counts.tolist()
    return ScanReport(
        start,
        end,
        odd_only,
        perfect,
        [n for n in perfect if n % 2],
        time.perf_counter() - t0,
        hist,
    )


def _check_pool(pool: Sequence[int]) -> list[int]:
    pool = list(pool)
    for p in pool:
        if p < 3 or p % 2 == 0 or not is_prime(p):
            raise DomainError(f"pool must contain odd primes only, got {p}")
    if len(set(pool)) != len(pool):
        raise DomainError(f"pool contains duplicates: {pool}")
    return sorted(pool)


def enumerate_shapes(
    pool: Sequence[int],
    max_k: int = 3,
    parity_only: bool = True,
    max_exponent: int = 4,
) -> Iterator[ShapeSpec]:
    """Yield candidate shapes over ``pool`` in lexicographic order.

    For each special prime q (ascending) and each even-part size k from 2
    to ``max_k``, every k-subset of the remaining primes is used.  Without
    ``parity_only`` each support is expanded with every even exponent in
    [2, max_exponent] and odd exponent in [1, max_exponent].
    """
    primes = _check_pool(pool)
    if max_k < 2:
        raise UsageError(f"max_k must be >= 2, got {max_k}")
    evens = range(2, max_exponent + 1, 2)
    odds = range(1, max_exponent + 1, 2)
    for q in primes:
        rest = [p for p in primes if p != q]
        for k in range(2, max_k + 1):
            for even_part in itertools.combinations(rest, k):
                if parity_only:
                    yield ShapeSpec(even_part, q)
                    continue
                for exps in itertools.product(evens, repeat=k):
                    for b in odds:
                        yield ShapeSpec(even_part, q, exps, b)


@dataclass(frozen=True)
class ShapeResult:
    shape: ShapeSpec
    verdicts: tuple[FilterVerdict, ...]

    @property
    def rejected_by(self) -> str | None:
        for v in self.verdicts:
            if v.rejected:
                return v.criterion
        return None

    @property
    def status(self) -> str:
        if self.rejected_by:
            return "rejected"
        if any(v.undecided for v in self.verdicts):
            return "inconclusive"
        return "survivor"


@dataclass
class PipelineStats:
    """Aggregate pipeline outcome.

    shapes_in == sum(rejected_by.values()) + inconclusive + survivor_count;
    ``survivors`` holds at most ``survivor_cap`` of the surviving shapes.
    """

    criteria: tuple[str, ...]
    shapes_in: int = 0
    rejected_by: dict[str, int] = field(default_factory=dict)
    inconclusive: int = 0
    survivor_count: int = 0
    survivors: list[ShapeSpec] = field(default_factory=list)
    elapsed: float = 0.0


def evaluate_shape(
    shape: ShapeSpec,
    criteria: Sequence[str] = DEFAULT_CRITERIA,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
) -> ShapeResult:
    """Apply criteria in order, stopping at the first rejection."""
    verdicts = []
    for name in criteria:
        v = apply_criterion(name, shape, budget, seed)
        verdicts.append(v)
        if v.rejected:
            break
    return ShapeResult(shape, tuple(verdicts))


def _evaluate_task(args):
    return evaluate_shape(*args)


def _validate_criteria(criteria: Sequence[str]) -> tuple[str, ...]:
    criteria = tuple(criteria)
    unknown = [c for c in criteria if c not in CRITERIA]
    if unknown:
        raise UsageError(
            f"unknown criterion {unknown[0]!r}; expected one of {', '.join(CRITERIA)}"
        )
    return criteria


def iter_pipeline(
    shapes: Iterable[ShapeSpec],
    criteria: Sequence[str] = DEFAULT_CRITERIA,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    jobs: int = 1,
) -> Iterator[ShapeResult]:
    """Stream one ShapeResult per input shape, in input order."""
    criteria = _validate_criteria(criteria)
    if jobs <= 1:
        for shape in shapes:
            yield evaluate_shape(shape, criteria, budget, seed)
        return
    tasks = ((s, criteria, budget, seed) for s in shapes)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield from pool.map(_evaluate_task, tasks, chunksize=64)


def run_pipeline(
    shapes: Iterable[ShapeSpec],
    criteria: Sequence[str] = DEFAULT_CRITERIA,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    *,
    survivor_cap: int = SURVIVOR_CAP,
    jobs: int = 1,
    on_result: Callable[[ShapeResult], None] | None = None,
) -> PipelineStats:
    criteria = _validate_criteria(criteria)
    stats = PipelineStats(criteria, rejected_by={c: 0 for c in criteria})
    t0 = time.perf_counter()
    for res in iter_pipeline(shapes, criteria, budget, seed, jobs):
        stats.shapes_in += 1
        if on_result is not None:
            on_result(res)
        status = res.status
        if status == "rejected":
            stats.rejected_by[res.rejected_by] += 1
        elif status == "inconclusive":
            stats.inconclusive += 1
        else:
            stats.survivor_count += 1
            if len(stats.survivors) < survivor_cap:
                stats.survivors.append(res.shape)
    stats.elapsed = time.perf_counter() - t0
    return stats
