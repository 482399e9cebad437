"""Segmented sieve with exact prime prefix sums and checkpoints.

Primes are produced by an odd-only segmented sieve of Eratosthenes.  Each
segment carries running totals, so every prime p_n comes with its index n
and the exact prefix sum  sum_{k<=n} p_k.  Prefix sums live in int64
arrays while they provably fit below 2**62 and fall back to Python
integers (object arrays) beyond that; checkpoint sums are always Python
integers.
"""

from __future__ import annotations

import bisect
import json
import math
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

import numpy as np

from .errors import DomainError, ResourceError

DEFAULT_SEGMENT = 1 << 22  # odd candidates per segment
DEFAULT_CHECKPOINT_EVERY = 1 << 20  # primes between checkpoints
DEFAULT_MEMORY_BUDGET = 1 << 30  # bytes, for streams and the in-memory table
_INT64_SAFE = 1 << 62


# ---------------------------------------------------------------------------
# raw sieving
# ---------------------------------------------------------------------------


def small_primes(limit: int) -> np.ndarray:
    """All primes <= limit by a plain sieve (for base primes and oracles)."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if flags[p]:
            flags[p * p::2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


_base_lock = threading.Lock()
_base = {"limit": 0, "primes": np.zeros(0, dtype=np.int64)}


def _odd_base_primes(upto: int) -> np.ndarray:
    """Odd primes <= upto, from a cache grown geometrically."""
    with _base_lock:
        if _base["limit"] < upto:
            new_limit = max(upto, 2 * _base["limit"], 1 << 16)
            _base["primes"] = small_primes(new_limit)[1:]
            _base["limit"] = new_limit
        primes = _base["primes"]
    return primes[: np.searchsorted(primes, upto, side="right")]


def _sieve_window(start: int, end: int) -> np.ndarray:
    """Odd primes in [start, end) for odd start; int64 array."""
    count = (end - start + 1) // 2
    if count <= 0:
        return np.zeros(0, dtype=np.int64)
    mask = np.ones(count, dtype=bool)
    for p in _odd_base_primes(math.isqrt(end - 1)).tolist():
        first = max(p * p, -(-start // p) * p)
        if first % 2 == 0:
            first += p
        if first >= end:
            continue
        mask[(first - start) // 2::p] = False
    out = start + 2 * np.flatnonzero(mask).astype(np.int64)
    if start == 1:
        out = out[1:]  # 1 is not prime
    return out


def iter_prime_segments(lo: int, hi: int | None = None,
                        segment_size: int = DEFAULT_SEGMENT) -> Iterator[np.ndarray]:
    """Yield int64 arrays of the primes in [lo, hi] in order (hi=None: unbounded)."""
    if segment_size < 1:
        raise DomainError("segment_size must be positive")
    lo = max(lo, 0)
    if lo <= 2 and (hi is None or hi >= 2):
        yield np.array([2], dtype=np.int64)
    start = max(lo, 1) | 1
    while hi is None or start <= hi:
        end = start + 2 * segment_size
        if hi is not None:
            end = min(end, hi + 1)
        seg = _sieve_window(start, end)
        if seg.size:
            yield seg
        start = end if end % 2 else end + 1


def primes_in_range(lo: int, hi: int, segment_size: int = DEFAULT_SEGMENT) -> np.ndarray:
    parts = list(iter_prime_segments(lo, hi, segment_size))
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


# ---------------------------------------------------------------------------
# blocks and checkpoints
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Checkpoint:
    """State after the n-th prime: p_n and sum_{k<=n} p_k (n=0 is the origin)."""

    n: int
    p_n: int
    sum: int

    def to_json(self) -> dict:
        return {"n": self.n, "p_n": self.p_n, "sum": self.sum}


ORIGIN = Checkpoint(0, 0, 0)


def _running_sums(primes: np.ndarray, base: int) -> np.ndarray:
    """base + cumulative sums; int64 when safe, Python ints otherwise."""
    if primes.size == 0:
        return np.zeros(0, dtype=np.int64)
    if base + int(primes[-1]) * primes.size < _INT64_SAFE:
        return np.cumsum(primes) + base
    return np.cumsum(primes.astype(object)) + base


@dataclass(frozen=True)
class PrimeBlock:
    """Consecutive primes p_{first}, ..., with their exact prefix sums."""

    first: int
    primes: np.ndarray
    sums: np.ndarray

    def __len__(self) -> int:
        return int(self.primes.size)

    @property
    def last(self) -> int:
        return self.first + len(self) - 1

    def indices(self) -> np.ndarray:
        return np.arange(self.first, self.first + len(self), dtype=np.int64)

    def twoB(self) -> np.ndarray:
        """n p_n - 2 sum_{k<=n} p_k for every prime in the block."""
        n = self.indices()
        if self.sums.dtype == object or self.last * int(self.primes[-1]) >= _INT64_SAFE:
            return n.astype(object) * self.primes.astype(object) - 2 * self.sums.astype(object)
        return n * self.primes - 2 * self.sums

    def checkpoint(self, k: int) -> Checkpoint:
        """Checkpoint after the k-th prime of this block (0-based)."""
        return Checkpoint(self.first + k, int(self.primes[k]), int(self.sums[k]))

    def slice(self, a: int, b: int) -> "PrimeBlock":
        return PrimeBlock(self.first + a, self.primes[a:b], self.sums[a:b])


def iter_blocks_from(resume: Checkpoint, x_hi: int | None = None, n_hi: int | None = None,
                     segment_size: int = DEFAULT_SEGMENT) -> Iterator[PrimeBlock]:
    """Sieve onward from a checkpoint, stopping at x_hi and/or index n_hi."""
    n, total = resume.n, resume.sum
    for seg in iter_prime_segments(resume.p_n + 1, x_hi, segment_size):
        if n_hi is not None and n + seg.size > n_hi:
            seg = seg[: n_hi - n]
        if seg.size == 0:
            return
        sums = _running_sums(seg, total)
        yield PrimeBlock(n + 1, seg, sums)
        n += seg.size
        total = int(sums[-1])
        if n_hi is not None and n >= n_hi:
            return


def _estimate_bytes(limit_x: int, segment_size: int, checkpoint_every: int) -> int:
    seg_bytes = segment_size * (1 + 8 + 8)  # mask, prime array, running sums (worst case)
    base_bytes = 8 * (math.isqrt(limit_x) + 1)
    n_checkpoints = int(limit_x / max(math.log(max(limit_x, 3)), 1)) // max(checkpoint_every, 1) + 2
    return seg_bytes + base_bytes + 120 * n_checkpoints


@dataclass
class PrimeCheckpointStream:
    """Result of one sequential sieve pass: periodic exact (n, p_n, sum) states."""

    limit: int
    segment_size: int = DEFAULT_SEGMENT
    checkpoint_every: int = DEFAULT_CHECKPOINT_EVERY
    checkpoints: list[Checkpoint] = field(default_factory=list)
    final: Checkpoint = ORIGIN

    # lookup

    def resume_for_index(self, n: int) -> Checkpoint:
        """Latest stored state strictly before index n."""
        keys = [c.n for c in self.checkpoints]
        k = bisect.bisect_left(keys, n) - 1
        return self.checkpoints[k] if k >= 0 else ORIGIN

    def resume_for_x(self, x: int) -> Checkpoint:
        """Latest stored state with p_n < x."""
        keys = [c.p_n for c in self.checkpoints]
        k = bisect.bisect_left(keys, x) - 1
        return self.checkpoints[k] if k >= 0 else ORIGIN

    def blocks(self, n_lo: int, n_hi: int) -> Iterator[PrimeBlock]:
        """Re-sieve the primes with index in [n_lo, n_hi] starting from a checkpoint."""
        if n_hi > self.final.n:
            raise DomainError(f"index {n_hi} beyond stream (last n = {self.final.n})")
        for blk in iter_blocks_from(self.resume_for_index(n_lo), n_hi=n_hi,
                                    segment_size=self.segment_size):
            if blk.last < n_lo:
                continue
            yield blk.slice(max(n_lo - blk.first, 0), len(blk))

    # validation and i/o

    def validate(self, prefix_check: int = 1000) -> None:
        prev = ORIGIN
        for c in self.checkpoints + ([self.final] if self.final.n else []):
            if c == prev:
                continue
            if not (c.n > prev.n and c.p_n > prev.p_n and c.sum > prev.sum):
                raise AssertionError(f"checkpoints not increasing at {c}")
            prev = c
        small = small_primes(max(prefix_check * 12, 100))
        for c in self.checkpoints:
            if c.n <= small.size:
                if int(small[c.n - 1]) != c.p_n or sum(int(p) for p in small[: c.n]) != c.sum:
                    raise AssertionError(f"checkpoint {c} disagrees with direct summation")

    def to_jsonl(self, path: str | Path) -> None:
        with open(path, "w") as fh:
            fh.write(json.dumps({"kind": "header", "limit": self.limit,
                                 "segment_size": self.segment_size,
                                 "checkpoint_every": self.checkpoint_every}) + "\n")
            for c in self.checkpoints:
                fh.write(json.dumps(c.to_json()) + "\n")
            fh.write(json.dumps({"kind": "final", **self.final.to_json()}) + "\n")

    @classmethod
    def from_jsonl(cls, path: str | Path) -> "PrimeCheckpointStream":
        stream = None
        with open(path) as fh:
            for line in fh:
                rec = json.loads(line)
                kind = rec.get("kind")
                if kind == "header":
                    stream = cls(int(rec["limit"]), int(rec["segment_size"]), int(rec["checkpoint_every"]))
                elif stream is None:
                    raise ValueError(f"{path}: checkpoint file lacks a header line")
                elif kind == "final":
                    stream.final = Checkpoint(int(rec["n"]), int(rec["p_n"]), int(rec["sum"]))
                else:
                    stream.checkpoints.append(Checkpoint(int(rec["n"]), int(rec["p_n"]), int(rec["sum"])))
        if stream is None:
            raise ValueError(f"{path}: empty checkpoint file")
        return stream


def sieve_stream(limit_x: int, checkpoint_every: int = DEFAULT_CHECKPOINT_EVERY,
                 segment_size: int = DEFAULT_SEGMENT, memory_budget: int = DEFAULT_MEMORY_BUDGET,
                 on_block=None) -> PrimeCheckpointStream:
    """One sequential pass over the primes <= limit_x, recording checkpoints.

    ``on_block`` (optional) receives every PrimeBlock as it is produced, so
    callers can consume (n, p_n, sum) triples without storing them.
    """
    if limit_x < 2:
        raise DomainError("sieve_stream needs limit_x >= 2")
    if checkpoint_every < 1:
        raise DomainError("checkpoint_every must be positive")
    if limit_x >= _INT64_SAFE:
        raise ResourceError(f"limit {limit_x} exceeds the 62-bit sieve range")
    need = _estimate_bytes(limit_x, segment_size, checkpoint_every)
    if need > memory_budget:
        raise ResourceError(f"sieving to {limit_x} needs ~{need} bytes, budget is {memory_budget}")
    stream = PrimeCheckpointStream(limit_x, segment_size, checkpoint_every)
    last = ORIGIN
    for blk in iter_blocks_from(ORIGIN, x_hi=limit_x, segment_size=segment_size):
        if on_block is not None:
            on_block(blk)
        first_cp = -(-blk.first // checkpoint_every) * checkpoint_every
        for n in range(first_cp, blk.last + 1, checkpoint_every):
            stream.checkpoints.append(blk.checkpoint(n - blk.first))
        last = blk.checkpoint(len(blk) - 1)
    stream.final = last
    return stream


# ---------------------------------------------------------------------------
# in-memory table for desk-scale ranges
# ---------------------------------------------------------------------------


class PrimeTable:
    """All primes up to ``limit`` with prefix sums, grown on demand."""

    def __init__(self, memory_budget: int = DEFAULT_MEMORY_BUDGET):
        self.memory_budget = memory_budget
        self.limit = 1
        self.primes = np.zeros(0, dtype=np.int64)
        self.sums = np.zeros(0, dtype=np.int64)
        self._integral = None
        self._lock = threading.Lock()

    @staticmethod
    def bytes_for(limit_x: int) -> int:
        return int(24 * limit_x / max(math.log(max(limit_x, 3)) - 1.1, 1))

    def fits(self, limit_x: int) -> bool:
        return self.bytes_for(limit_x) <= self.memory_budget

    def ensure_x(self, limit_x: int) -> "PrimeTable":
        if limit_x <= self.limit:
            return self
        with self._lock:
            if limit_x <= self.limit:
                return self
            target = max(limit_x, int(self.limit * 1.5), 1 << 16)
            if not self.fits(target):
                target = limit_x
            if not self.fits(target):
                raise ResourceError(f"prime table to {limit_x} exceeds the memory budget "
                                    f"({self.memory_budget} bytes); use a checkpoint stream")
            resume = Checkpoint(self.primes.size, int(self.primes[-1]) if self.primes.size else 0,
                                int(self.sums[-1]) if self.sums.size else 0)
            new_p = [self.primes]
            new_s = [self.sums]
            for blk in iter_blocks_from(resume, x_hi=target):
                new_p.append(blk.primes)
                new_s.append(blk.sums)
            primes = np.concatenate(new_p)
            sums = np.concatenate([s.astype(object) for s in new_s]) if any(
                s.dtype == object for s in new_s) else np.concatenate(new_s)
            self.primes, self.sums, self.limit = primes, sums, target
            self._integral = None
        return self

    def ensure_n(self, n: int) -> "PrimeTable":
        while self.primes.size < n:
            self.ensure_x(max(nth_prime_upper_bound(n), self.limit + 1))
        return self

    def block(self, n_lo: int, n_hi: int) -> PrimeBlock:
        """Primes with index in [n_lo, n_hi]."""
        self.ensure_n(n_hi)
        return PrimeBlock(n_lo, self.primes[n_lo - 1:n_hi], self.sums[n_lo - 1:n_hi])

    def pi(self, x: int) -> int:
        self.ensure_x(x)
        return int(np.searchsorted(self.primes, x, side="right"))

    def interval_integral(self) -> np.ndarray:
        """I[k] = integral from 1 to p_{k+1} of pi(t) dt, summed over constancy intervals."""
        if self._integral is None or self._integral.size != self.primes.size:
            gaps = np.diff(self.primes)
            steps = np.arange(1, self.primes.size, dtype=np.int64) * gaps
            self._integral = np.concatenate([[0], np.cumsum(steps)]).astype(np.int64)
        return self._integral


_TABLE = PrimeTable()


def prime_table() -> PrimeTable:
    """The process-wide table shared by the convenience functions."""
    return _TABLE


def nth_prime_upper_bound(n: int) -> int:
    """p_n < n (log n + log log n) for n >= 6; small cases tabulated."""
    if n < 6:
        return 13
    L = math.log(n)
    return int(n * (L + math.log(L))) + 1


# ---------------------------------------------------------------------------
# scalar queries
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MandlResidual:
    """twoB = n p_n - 2 sum_{k<=n} p_k, i.e. twice the Mandl residual B_n."""

    n: int
    twoB: int

    @property
    def B(self):
        from fractions import Fraction

        return Fraction(self.twoB, 2)


def _stream_to_index(n: int) -> Checkpoint:
    state = ORIGIN
    for blk in iter_blocks_from(ORIGIN, n_hi=n):
        state = blk.checkpoint(len(blk) - 1)
    return state


def _stream_to_x(x: int) -> Checkpoint:
    state = ORIGIN
    for blk in iter_blocks_from(ORIGIN, x_hi=x):
        state = blk.checkpoint(len(blk) - 1)
    return state


def state_at_index(n: int) -> Checkpoint:
    """(n, p_n, sum_{k<=n} p_k)."""
    if n < 1:
        raise DomainError("prime index must be >= 1")
    if _TABLE.fits(nth_prime_upper_bound(n)):
        _TABLE.ensure_n(n)
        return Checkpoint(n, int(_TABLE.primes[n - 1]), int(_TABLE.sums[n - 1]))
    return _stream_to_index(n)


def state_at_x(x: int) -> Checkpoint:
    """(pi(x), largest prime <= x, S(x)); the origin for x < 2."""
    if x < 2:
        return ORIGIN
    if _TABLE.fits(x):
        k = _TABLE.pi(x)
        return Checkpoint(k, int(_TABLE.primes[k - 1]), int(_TABLE.sums[k - 1]))
    return _stream_to_x(x)


def nth_prime(n: int) -> int:
    return state_at_index(n).p_n


def pi_of(x: int) -> int:
    if x < 0:
        raise DomainError("pi_of needs x >= 0")
    return state_at_x(int(x)).n


def S_of(x: int) -> int:
    if x < 0:
        raise DomainError("S_of needs x >= 0")
    return state_at_x(int(x)).sum


def sum_first(n: int) -> int:
    return state_at_index(n).sum


def mandl_residual(n: int) -> MandlResidual:
    st = state_at_index(n)
    return MandlResidual(n, n * st.p_n - 2 * st.sum)


@dataclass(frozen=True)
class AbelCheck:
    x: int
    S: int
    pi: int
    integral: int  # integral from 1 to x of pi(t) dt
    holds: bool


def abel_integral_check(x: int) -> AbelCheck:
    """Check S(x) = x pi(x) - int_1^x pi(t) dt exactly.

    The integral is accumulated over the constancy intervals [p_k, p_{k+1})
    of pi, on which pi equals k, plus the final piece [p_pi(x), x].
    """
    if x < 2:
        raise DomainError("abel_integral_check needs x >= 2")
    x = int(x)
    _TABLE.ensure_x(x)
    k = _TABLE.pi(x)
    full = int(_TABLE.interval_integral()[k - 1])
    integral = full + k * (x - int(_TABLE.primes[k - 1]))
    S = int(_TABLE.sums[k - 1])
    return AbelCheck(x, S, k, integral, S == x * k - integral)
