"""Range verification of catalog inequalities.

Every point of a window is classified as holds / fails / indeterminate.
Points are prime indices n for "n" entries and integers x for the other
kinds.  For step-function entries an integer x stands for the unit cell
[x, x+1), on which S(x) and pi(x) are constant; the continuous side is
compared at the worst end of each cell, so a cell that holds holds for
every real x in it.  Consecutive cells between two primes share the step
value, and on a monotone stretch of the continuous side only the worst
cell of the run needs checking; runs that do not hold are resolved cell
by cell by bisection.

Evaluation is tiered: a float64 screen, double-double for points the
screen cannot decide, and mpmath big floats for the rest.  A point is
only indeterminate if the big-float margin still straddles zero.
"""

from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import mpmath
import numpy as np

from . import primes
from .analytic.backends import BIGFLOAT, DOUBLE_DOUBLE, FLOAT
from .analytic.dd import DD
from .bounds import InequalityEntry, Shape, get_entry, shape, sides
from .errors import DomainError

FAILURE_CAP = 1000
N_CHUNK = 1 << 18
X_CHUNK = 1 << 24

HOLD, INDET, FAIL = 1, 0, -1
TIERS = ("exact", "float64", "double-double", "bigfloat")


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


@dataclass
class VerificationReport:
    inequality_id: str
    range_from: int
    range_to: int
    holds_count: int = 0
    fails_count: int = 0
    indeterminate_count: int = 0
    failures: list = field(default_factory=list)
    indeterminate_points: list = field(default_factory=list)
    onset: int | None = None
    elapsed_seconds: float = 0.0
    precision_mode: str = "dd"
    variable: str = "n"
    claimed_threshold: str | None = None
    # checks settled per evaluation tier; a work count, so it depends on the
    # chunk plan (fixed per window, independent of the thread count)
    tier_counts: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    failure_cap: int = FAILURE_CAP

    @property
    def points(self) -> int:
        return self.holds_count + self.fails_count + self.indeterminate_count

    @property
    def clean(self) -> bool:
        """No failures and no unresolved points in the window."""
        return self.fails_count == 0 and self.indeterminate_count == 0

    @property
    def reproduces_claim(self) -> bool:
        """Every point of the window at or above the claimed threshold holds.

        Points below the claimed threshold are outside the claim; without a
        threshold the whole window must hold.
        """
        if self.claimed_threshold is None:
            return self.clean
        if self.onset is None:
            return False
        return self.onset <= max(math.ceil(Fraction(self.claimed_threshold)), self.range_from)

    def to_json(self, include_elapsed: bool = True) -> dict:
        d = asdict(self)
        if not include_elapsed:
            d.pop("elapsed_seconds")
        return d

    def dumps(self, include_elapsed: bool = True) -> str:
        return json.dumps(self.to_json(include_elapsed), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, d: dict) -> "VerificationReport":
        return cls(**d)

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps() + "\n")

    @classmethod
    def read(cls, path: str | Path) -> "VerificationReport":
        return cls.from_json(json.loads(Path(path).read_text()))

    def write_failures_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["inequality_id", "point", "status"])
            for p in self.failures:
                w.writerow([self.inequality_id, p, "fails"])
            for p in self.indeterminate_points:
                w.writerow([self.inequality_id, p, "indeterminate"])

    def summary(self) -> str:
        var = "n" if self.variable == "n" else "x"
        lines = [
            f"{self.inequality_id}: {var} in [{self.range_from}, {self.range_to}] ({self.precision_mode})",
            f"  holds {self.holds_count}, fails {self.fails_count}, indeterminate {self.indeterminate_count}",
            f"  onset on window: {self.onset if self.onset is not None else 'none'}"
            + (f" (claimed {self.claimed_threshold})" if self.claimed_threshold is not None else ""),
        ]
        if self.failures:
            shown = ", ".join(str(p) for p in self.failures[:10])
            more = self.fails_count - min(len(self.failures), 10)
            lines.append(f"  failures: {shown}" + (f" ... (+{more})" if more > 0 else ""))
        return "\n".join(lines)


@dataclass
class _ChunkResult:
    holds: int = 0
    fails: int = 0
    indet: int = 0
    failures: list = field(default_factory=list)
    indeterminate_points: list = field(default_factory=list)
    last_bad: int | None = None
    tiers: dict = field(default_factory=lambda: dict.fromkeys(TIERS, 0))

    def note_range(self, status: int, lo: int, hi: int, cap: int) -> None:
        """Record cells lo..hi (inclusive) with a common status."""
        count = hi - lo + 1
        if count <= 0:
            return
        if status == HOLD:
            self.holds += count
            return
        if status == FAIL:
            self.fails += count
            target = self.failures
        else:
            self.indet += count
            target = self.indeterminate_points
        room = cap - len(target)
        if room > 0:
            target.extend(range(lo, lo + min(room, count)))
        self.last_bad = hi if self.last_bad is None else max(self.last_bad, hi)


# ---------------------------------------------------------------------------
# tiered classification
# ---------------------------------------------------------------------------


def _status_from(m, err, strict):
    hold = (m - err > 0) | (~strict & (m - err >= 0))
    fail = (m + err < 0) | (strict & (m + err <= 0))
    out = np.zeros(m.shape, dtype=np.int8)
    out[hold] = HOLD
    out[fail & ~hold] = FAIL
    return out


def _subset(data: dict, idx) -> dict:
    return {k: v[idx] for k, v in data.items()}


def _mp_status(entry, point, data, strict) -> int:
    with mpmath.workdps(BIGFLOAT.dps):
        lhs, rhs = sides(entry, BIGFLOAT, point, data)
        m = entry.oriented(lhs, rhs)
        err = BIGFLOAT.rel_tol * (abs(lhs) + abs(rhs))
        if m - err > 0 or (not strict and m - err >= 0):
            return HOLD
        if m + err < 0 or (strict and m + err <= 0):
            return FAIL
        return INDET


def classify_points(entry: InequalityEntry, points: np.ndarray, data: dict, strict: np.ndarray,
                    precision: str, tiers: dict) -> np.ndarray:
    """Status (HOLD/FAIL/INDET) of each check; ``strict`` may vary per check."""
    size = len(points)
    if size == 0:
        return np.zeros(0, dtype=np.int8)
    if entry.exact is not None:
        m = np.asarray(entry.exact(data["n"], data["p"], data["S"], data["twoB"]))
        status = np.where((m > 0) | (~strict & (m == 0)), HOLD, FAIL).astype(np.int8)
        tiers["exact"] += size
        return status
    status = np.zeros(size, dtype=np.int8)
    todo = np.arange(size)
    if precision == "dd":
        with np.errstate(all="ignore"):
            lhs, rhs = sides(entry, FLOAT, points, data)
            lhs = np.broadcast_to(np.asarray(lhs, dtype=np.float64), (size,))
            rhs = np.broadcast_to(np.asarray(rhs, dtype=np.float64), (size,))
            m = entry.oriented(lhs, rhs)
            err = FLOAT.rel_tol * (np.abs(lhs) + np.abs(rhs))
            st = _status_from(m, err, strict)
            st[~(np.isfinite(m) & np.isfinite(err))] = INDET
        status[:] = st
        tiers["float64"] += int(np.count_nonzero(st))
        todo = np.flatnonzero(st == INDET)
        if todo.size:
            sub = _subset(data, todo)
            lhs, rhs = sides(entry, DOUBLE_DOUBLE, points[todo], sub)
            lhs = DD.coerce(lhs)
            rhs = DD.coerce(rhs)
            m = DD.coerce(entry.oriented(lhs, rhs))
            with np.errstate(all="ignore"):
                mv = np.broadcast_to(m.hi + m.lo, todo.shape)
                err = DOUBLE_DOUBLE.rel_tol * (np.abs(np.broadcast_to(lhs.hi, todo.shape))
                                               + np.abs(np.broadcast_to(rhs.hi, todo.shape)))
                st = _status_from(mv, err, strict[todo])
                st[~(np.isfinite(mv) & np.isfinite(err))] = INDET
            status[todo] = st
            tiers["double-double"] += int(np.count_nonzero(st))
            todo = todo[st == INDET]
    for i in todo.tolist():
        pt = points[i]
        pt = int(pt) if isinstance(pt, (int, np.integer)) else pt
        st = _mp_status(entry, pt, {k: _py(v[i]) for k, v in data.items()}, bool(strict[i]))
        status[i] = st
        if st != INDET:
            tiers["bigfloat"] += 1
    return status


def _py(v):
    return int(v) if isinstance(v, (np.integer, int)) else v


# ---------------------------------------------------------------------------
# prime data for chunks
# ---------------------------------------------------------------------------


def _concat(blocks) -> primes.PrimeBlock | None:
    blocks = [b for b in blocks if len(b)]
    if not blocks:
        return None
    first = blocks[0].first
    ps = np.concatenate([b.primes for b in blocks])
    if any(b.sums.dtype == object for b in blocks):
        ss = np.concatenate([b.sums.astype(object) for b in blocks])
    else:
        ss = np.concatenate([b.sums for b in blocks])
    return primes.PrimeBlock(first, ps, ss)


def _n_block(a: int, b: int, resume: primes.Checkpoint | None) -> primes.PrimeBlock:
    table = primes.prime_table()
    if resume is None and table.fits(primes.nth_prime_upper_bound(b)):
        return table.block(a, b)
    start = resume if resume is not None else primes.ORIGIN
    blocks = []
    for blk in primes.iter_blocks_from(start, n_hi=b):
        if blk.last < a:
            continue
        blocks.append(blk.slice(max(a - blk.first, 0), len(blk)))
    return _concat(blocks)


def _x_block(a: int, b: int, resume: primes.Checkpoint | None):
    """(state at a, block of primes in (a, b])."""
    table = primes.prime_table()
    if resume is None and table.fits(b):
        table.ensure_x(b)
        k0 = table.pi(a)
        k1 = table.pi(b)
        state = primes.Checkpoint(k0, int(table.primes[k0 - 1]), int(table.sums[k0 - 1])) if k0 else primes.ORIGIN
        blk = primes.PrimeBlock(k0 + 1, table.primes[k0:k1], table.sums[k0:k1])
        return state, blk
    state = resume if resume is not None else primes.ORIGIN
    blocks = []
    for blk in primes.iter_blocks_from(state, x_hi=b):
        cut = int(np.searchsorted(blk.primes, a, side="right"))
        if cut:
            state = blk.checkpoint(cut - 1)
        if cut < len(blk):
            blocks.append(blk.slice(cut, len(blk)))
    blk = _concat(blocks)
    if blk is None:
        blk = primes.PrimeBlock(state.n + 1, np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64))
    return state, blk


# ---------------------------------------------------------------------------
# chunk workers
# ---------------------------------------------------------------------------


def _run_n_chunk(entry, a, b, resume, precision, cap) -> _ChunkResult:
    res = _ChunkResult()
    blk = _n_block(a, b, resume)
    n = blk.indices()
    data = {"n": n, "p": blk.primes, "S": blk.sums, "twoB": blk.twoB()}
    strict = np.full(len(blk), entry.strict)
    st = classify_points(entry, n, data, strict, precision, res.tiers)
    _record_points(res, n, st, cap)
    return res


def _run_real_chunk(entry, a, b, precision, cap) -> _ChunkResult:
    res = _ChunkResult()
    xs = np.arange(a, b + 1, dtype=np.int64)
    st = classify_points(entry, xs, {}, np.full(xs.size, entry.strict), precision, res.tiers)
    _record_points(res, xs, st, cap)
    return res


def _record_points(res: _ChunkResult, pts: np.ndarray, st: np.ndarray, cap: int) -> None:
    res.holds += int(np.count_nonzero(st == HOLD))
    bad = np.flatnonzero(st != HOLD)
    if bad.size == 0:
        return
    fails = pts[st == FAIL]
    ind = pts[st == INDET]
    res.fails += int(fails.size)
    res.indet += int(ind.size)
    res.failures.extend(int(p) for p in fails[: max(cap - len(res.failures), 0)])
    res.indeterminate_points.extend(int(p) for p in ind[: max(cap - len(res.indeterminate_points), 0)])
    res.last_bad = int(pts[bad[-1]])


# x-entries: runs of cells [l, r] sharing a step value T.  kind is
# "inc" (continuous side increasing on the run), "dec" or "turn" (the
# single cell containing the turning point).


def _cell_checks(entry: InequalityEntry, kind: str, l: int, r: int, turn: Fraction):
    """Worst-case checks (point, strict) for the run of cells [l, r+1)."""
    upper = not entry.is_lower
    s = entry.strict
    if kind == "inc":
        return [(l, s)] if upper else [(r + 1, False)]
    if kind == "dec":
        return [(r + 1, False)] if upper else [(l, s)]
    return [(turn, s)] if upper else [(l, s), (l + 1, False)]


def _runs(entry: InequalityEntry, a: int, b: int, state, blk, shp: Shape):
    """Constancy runs of the window [a, b] split at the turning point."""
    T0 = state.sum if entry.step == "S" else state.n
    lefts = np.concatenate([[a], blk.primes]).astype(np.int64)
    rights = np.concatenate([blk.primes - 1, [b]]).astype(np.int64)
    if entry.step == "S":
        Ts = np.concatenate([np.asarray([T0], dtype=blk.sums.dtype), blk.sums])
    else:
        Ts = np.concatenate([[T0], blk.indices()]).astype(np.int64)
    keep = rights >= lefts
    lefts, rights, Ts = lefts[keep], rights[keep], Ts[keep]
    turn = shp.turn
    if a >= turn:
        return lefts, rights, Ts, None
    # split the (few) runs below the turning point in Python
    special = []
    tf = math.floor(turn)
    boundary = int(np.searchsorted(lefts, tf + 1, side="left"))  # runs starting after tf are all inc
    for j in range(boundary):
        l, r, T = int(lefts[j]), int(rights[j]), Ts[j]
        pieces = []
        if turn == tf:  # integral turning point: cells < tf dec, >= tf inc
            if l < tf:
                pieces.append(("dec", l, min(r, tf - 1)))
            if r >= tf:
                pieces.append(("inc", max(l, tf), r))
        else:
            if l < tf:
                pieces.append(("dec", l, min(r, tf - 1)))
            if l <= tf <= r:
                pieces.append(("turn", tf, tf))
            if r > tf:
                pieces.append(("inc", max(l, tf + 1), r))
        special.extend((k, pl, pr, T) for k, pl, pr in pieces)
    return lefts[boundary:], rights[boundary:], Ts[boundary:], special


def _run_x_chunk(entry, a, b, resume, precision, cap) -> _ChunkResult:
    res = _ChunkResult()
    shp = shape(entry)
    state, blk = _x_block(a, b, resume)
    lefts, rights, Ts, special = _runs(entry, a, b, state, blk, shp)
    runs = [("inc", int(l), int(r), T) for l, r, T in zip(lefts.tolist(), rights.tolist(), Ts.tolist())] \
        if special is not None else None
    if special is not None:
        runs = special + runs
        _classify_runs_list(entry, runs, shp, precision, res, cap)
        return res
    # fast path: all runs increasing, vectorised worst-case checks
    if entry.is_lower:
        pts = rights + 1
        strict = np.zeros(pts.size, dtype=bool)
    else:
        pts = lefts
        strict = np.full(pts.size, entry.strict)
    st = classify_points(entry, pts, {"T": Ts}, strict, precision, res.tiers)
    good = st == HOLD
    res.holds += int(np.sum(rights[good] - lefts[good] + 1))
    for j in np.flatnonzero(~good).tolist():
        _resolve_run(entry, "inc", int(lefts[j]), int(rights[j]), Ts[j], shp, precision, res, cap)
    _sort_lists(res)
    return res


def _classify_runs_list(entry, runs, shp, precision, res, cap):
    for kind, l, r, T in runs:
        checks = _cell_checks(entry, kind, l, r, shp.turn)
        st = _check_status(entry, checks, T, precision, res.tiers)
        if st == HOLD:
            res.holds += r - l + 1
        else:
            _resolve_run(entry, kind, l, r, T, shp, precision, res, cap)
    _sort_lists(res)


def _check_status(entry, checks, T, precision, tiers) -> int:
    pts = np.empty(len(checks), dtype=object)
    pts[:] = [c[0] for c in checks]
    if all(isinstance(p, int) for p in pts):
        pts = pts.astype(np.int64)
    strict = np.array([c[1] for c in checks], dtype=bool)
    Tarr = np.empty(len(checks), dtype=object)
    Tarr[:] = [int(T)] * len(checks)
    if all(abs(int(T)) < (1 << 62) for _ in checks):
        Tarr = Tarr.astype(np.int64)
    st = classify_points(entry, pts, {"T": Tarr}, strict, precision, tiers)
    return int(st.min())


def _resolve_run(entry, kind, l, r, T, shp, precision, res, cap):
    """Classify each cell of a run that did not hold as a whole."""
    def cell(x):
        return _check_status(entry, _cell_checks(entry, kind, x, x, shp.turn), T, precision, res.tiers)

    if kind == "turn" or l == r:
        res.note_range(cell(l), l, r, cap)
        return
    # cell statuses are monotone along a monotone run
    nondecreasing = (kind == "inc") != entry.is_lower
    s_l, s_r = cell(l), cell(r)
    if s_l == s_r:
        res.note_range(s_l, l, r, cap)
        return

    def first_at_least(level, lo, hi):
        # smallest x in [lo, hi] with status >= level (nondecreasing) / <= -level mirrored
        while lo < hi:
            mid = (lo + hi) // 2
            s = cell(mid)
            ok = s >= level if nondecreasing else s < level
            if ok:
                hi = mid
            else:
                lo = mid + 1
        return lo

    if nondecreasing:
        i0 = first_at_least(INDET, l, r) if s_l == FAIL else l
        i1 = first_at_least(HOLD, i0, r) if s_r == HOLD else r + 1
        res.note_range(FAIL, l, i0 - 1, cap)
        res.note_range(INDET, i0, i1 - 1, cap)
        res.note_range(HOLD, i1, r, cap)
    else:
        # statuses go HOLD ... INDET ... FAIL
        j0 = first_at_least(HOLD, l, r) if s_l == HOLD else l
        j1 = first_at_least(INDET, j0, r) if s_r == FAIL else r + 1
        res.note_range(HOLD, l, j0 - 1, cap)
        res.note_range(INDET, j0, j1 - 1, cap)
        res.note_range(FAIL, j1, r, cap)


def _sort_lists(res: _ChunkResult) -> None:
    res.failures.sort()
    res.indeterminate_points.sort()


@dataclass(frozen=True)
class _Task:
    ident: str
    params: tuple
    a: int
    b: int
    resume: primes.Checkpoint | None
    precision: str
    cap: int


def _run_task(task: _Task) -> _ChunkResult:
    entry = get_entry(task.ident, **dict(task.params))
    if entry.variable == "n":
        return _run_n_chunk(entry, task.a, task.b, task.resume, task.precision, task.cap)
    if entry.variable == "x":
        return _run_x_chunk(entry, task.a, task.b, task.resume, task.precision, task.cap)
    return _run_real_chunk(entry, task.a, task.b, task.precision, task.cap)


# ---------------------------------------------------------------------------
# public API
# ---------------------------------------------------------------------------


def verification_floor(entry: InequalityEntry) -> int:
    """Smallest integer point from which verify_range accepts a window."""
    lo = Fraction(entry.eval_domain_min)
    if entry.variable == "x":
        lo = max(lo, shape(entry).unimodal_from)
    return math.ceil(lo)


def _plan(a: int, b: int, size: int) -> list[tuple[int, int]]:
    out = []
    start = a
    while start <= b:
        # chunk edges on multiples of size keep plans independent of the window start
        end = min(b, (start // size + 1) * size - 1)
        out.append((start, end))
        start = end + 1
    return out


def _resume_points(entry, plan, use_stream: bool, checkpoint_every: int = primes.DEFAULT_CHECKPOINT_EVERY,
                   segment_size=primes.DEFAULT_SEGMENT):
    """Exact sieve state just before each chunk (for workers that re-sieve)."""
    if not use_stream:
        if entry.variable == "n":
            return [primes.state_at_index(a - 1) if a > 1 else primes.ORIGIN for a, _ in plan]
        return [primes.state_at_x(a - 1) for a, _ in plan]
    limit = plan[-1][1] if entry.variable == "x" else primes.nth_prime_upper_bound(plan[-1][1])
    stream = primes.sieve_stream(limit, checkpoint_every=checkpoint_every, segment_size=segment_size)
    if entry.variable == "n":
        return [stream.resume_for_index(a) for a, _ in plan]
    return [stream.resume_for_x(a) for a, _ in plan]


def verify_range(ident: str, start: int, stop: int, precision: str = "dd", threads: int = 1,
                 report_path: str | Path | None = None, csv_path: str | Path | None = None,
                 chunk_size: int | None = None, failure_cap: int = FAILURE_CAP,
                 params: dict | None = None) -> VerificationReport:
    """Classify every point of [start, stop] for catalog entry ``ident``."""
    if precision not in ("dd", "bigfloat"):
        raise ValueError(f"precision must be 'dd' or 'bigfloat', got {precision!r}")
    params = dict(params or {})
    entry = get_entry(ident, **params)
    start, stop = int(start), int(stop)
    if stop < start:
        raise DomainError(f"empty range [{start}, {stop}]")
    floor = verification_floor(entry)
    if start < floor:
        raise DomainError(f"{ident}: range starts below {floor}, where the entry is defined"
                          + (" and its bound is unimodal" if entry.variable == "x" else ""))
    t0 = time.perf_counter()
    size = chunk_size or (N_CHUNK if entry.variable == "n" else X_CHUNK)
    plan = _plan(start, stop, size)
    ptuple = tuple(sorted((k, str(v)) for k, v in params.items()))
    if entry.variable == "x":
        shape(entry)  # computed once in the parent, inherited by forked workers

    table = primes.prime_table()
    top = stop if entry.variable != "n" else primes.nth_prime_upper_bound(stop)
    streamed = entry.variable != "real" and not table.fits(top)
    if not streamed:
        if entry.variable == "x":
            table.ensure_x(stop)
        elif entry.variable == "n":
            table.ensure_n(stop)
        resumes = [None] * len(plan)  # chunks read the in-memory table (inherited by forked workers)
    else:
        # one checkpointed pass; every chunk then re-sieves only its own stretch
        every = size if entry.variable == "n" else max(size // 32, 1)
        resumes = _resume_points(entry, plan, use_stream=streamed, checkpoint_every=every)
    tasks = [_Task(ident, ptuple, a, b, r, precision, failure_cap) for (a, b), r in zip(plan, resumes)]
    if threads <= 1 or len(plan) == 1:
        results = [_run_task(t) for t in tasks]
    else:
        import multiprocessing as mp

        with ProcessPoolExecutor(max_workers=threads, mp_context=mp.get_context("fork")) as pool:
            results = list(pool.map(_run_task, tasks))

    rep = VerificationReport(ident, start, stop, precision_mode=precision, variable=entry.variable,
                             claimed_threshold=None if entry.claimed_threshold is None
                             else str(entry.claimed_threshold),
                             tier_counts=dict.fromkeys(TIERS, 0), params={k: str(v) for k, v in params.items()},
                             failure_cap=failure_cap)
    last_bad = None
    for r in results:  # merge in chunk order
        rep.holds_count += r.holds
        rep.fails_count += r.fails
        rep.indeterminate_count += r.indet
        rep.failures.extend(r.failures[: max(failure_cap - len(rep.failures), 0)])
        rep.indeterminate_points.extend(
            r.indeterminate_points[: max(failure_cap - len(rep.indeterminate_points), 0)])
        for k, v in r.tiers.items():
            rep.tier_counts[k] += v
        if r.last_bad is not None:
            last_bad = r.last_bad if last_bad is None else max(last_bad, r.last_bad)
    if last_bad is None:
        rep.onset = start
    elif last_bad < stop:
        rep.onset = last_bad + 1
    else:
        rep.onset = None
    rep.elapsed_seconds = time.perf_counter() - t0
    if report_path:
        rep.write(report_path)
    if csv_path:
        rep.write_failures_csv(csv_path)
    return rep


@dataclass
class Crossover:
    inequality_id: str
    onset: int | None
    window: tuple[int, int]
    status_before: str | None  # verdict at onset - 1, if inside the window
    claimed_threshold: str | None
    report: VerificationReport

    @property
    def label(self) -> str:
        lo, hi = self.window
        if self.onset is None:
            return f"does not hold at the end of the window [{lo}, {hi}]"
        return f"holds on [{self.onset}, {hi}] (verified on window [{lo}, {hi}], not proved beyond)"

    @property
    def matches_claim(self) -> bool:
        return self.claimed_threshold is not None and self.onset is not None \
            and Fraction(self.claimed_threshold) > self.onset - 1 and self.onset <= math.ceil(
                Fraction(self.claimed_threshold))

    def to_json(self) -> dict:
        return {"inequality_id": self.inequality_id, "onset": self.onset, "window": list(self.window),
                "status_before": self.status_before, "claimed_threshold": self.claimed_threshold,
                "label": self.label, "report": self.report.to_json()}


def find_crossover(ident: str, search_max: int, search_min: int | None = None, precision: str = "dd",
                   threads: int = 1, params: dict | None = None) -> Crossover:
    """Smallest v in the window with the inequality holding on [v, search_max]."""
    entry = get_entry(ident, **(params or {}))
    lo = verification_floor(entry) if search_min is None else int(search_min)
    rep = verify_range(ident, lo, search_max, precision=precision, threads=threads, params=params)
    before = None
    if rep.onset is not None and rep.onset > lo:
        before = "fails" if rep.onset - 1 in rep.failures or (
            rep.onset - 1 not in rep.indeterminate_points) else "indeterminate"
    return Crossover(ident, rep.onset, (lo, search_max), before,
                     None if entry.claimed_threshold is None else str(entry.claimed_threshold), rep)


# ---------------------------------------------------------------------------
# residual diagnostics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ResidualRow:
    n: int
    residual: float
    prediction: float

    @property
    def gap(self) -> float:
        return self.residual - self.prediction


def residual_table(m: int, family: str, n_grid, table=None) -> list[ResidualRow]:
    """Scaled remainders of the sum / B_n expansions against T_m or V_m.

    For T:  residual(n) = (-1)^(m+1) m log^m n [ 2 sum_{k<=n} p_k / n^2
            - (log n + log log n - 3/2 + sum_{s<m} (-1)^(s+1) T_s(log log n) / (s log^s n)) ]
    For V:  residual(n) = (-1)^(m+1) m log^m n [ 2 B_n / n^2 - 1/2 - 1/(2 log n)
            - sum_{2<=s<m} (-1)^(s+1) V_s(log log n) / (s log^s n) ]
    Both tend to the polynomial evaluated at log log n.
    """
    from .coeffs import CIPOLLA_M2, assemble_T, assemble_V

    family = family.upper()
    if family not in ("T", "V"):
        raise ValueError("family must be 'T' or 'V'")
    if table is None:
        table = CIPOLLA_M2
    polys = assemble_T(table, m=m) if family == "T" else assemble_V(table, m=m)
    rows = []
    with mpmath.workdps(50):
        for n in n_grid:
            n = int(n)
            st = primes.state_at_index(n)
            N = mpmath.mpf(n)
            L = mpmath.log(N)
            LL = mpmath.log(L)

            def P(s):
                return polys[s].horner(LL, const=lambda c: mpmath.mpf(c.numerator) / c.denominator)

            if family == "T":
                base = L + LL - mpmath.mpf(3) / 2
                for s in range(1, m):
                    base += (-1) ** (s + 1) * P(s) / (s * L ** s)
                rem = 2 * mpmath.mpf(st.sum) / N ** 2 - base
            else:
                twoB = n * st.p_n - 2 * st.sum
                base = mpmath.mpf(1) / 2 + 1 / (2 * L)
                for s in range(2, m):
                    base += (-1) ** (s + 1) * P(s) / (s * L ** s)
                rem = mpmath.mpf(twoB) / N ** 2 - base
            scaled = (-1) ** (m + 1) * m * L ** m * rem
            rows.append(ResidualRow(n, float(scaled), float(P(m))))
    return rows
