"""Explicit state-space enumeration and exact max-rank / average-rank."""

from __future__ import annotations

import struct
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import OutputError, ResourceError, StabilizationError, UsageError
from .parallel import parallel_map
from .program import StabilizingProgram

MAX = "max"
AVERAGE = "average"
RANK_KINDS = (MAX, AVERAGE)

DEFAULT_MEMORY_BUDGET = 8 * 1024**3


def estimate_bytes(program: StabilizingProgram) -> int:
    """Rough peak footprint of a full analysis (state tuples, transitions, cvfs, ranks)."""
    return program.state_count * (400 + 120 * program.n)


@dataclass
class StateSpace:
    program: StabilizingProgram
    state_count: int
    invariant: np.ndarray  # bool per state
    offsets: np.ndarray  # CSR over distinct successor states, self-loops included
    targets: np.ndarray
    processes: np.ndarray

    def successors(self, idx: int) -> np.ndarray:
        return self.targets[self.offsets[idx]:self.offsets[idx + 1]]

    def transitions(self, include_self_loops: bool = False):
        """(source, target, process) arrays of program transitions."""
        src = np.repeat(np.arange(self.state_count, dtype=np.int64), np.diff(self.offsets))
        tgt, proc = self.targets, self.processes
        if not include_self_loops:
            keep = src != tgt
            src, tgt, proc = src[keep], tgt[keep], proc[keep]
        return src, tgt, proc

    def reverse(self):
        """CSR of predecessors over non-self-loop transitions."""
        src, tgt, _ = self.transitions()
        order = np.argsort(tgt, kind="stable")
        counts = np.bincount(tgt, minlength=self.state_count)
        offsets = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
        return offsets, src[order]

    @property
    def transition_count(self) -> int:
        return len(self.targets)


def _enumerate_range(program: StabilizingProgram, start: int, stop: int):
    inv, counts, tgts, procs = [], [], [], []
    strides = program.strides
    digit = program._digit
    for idx in range(start, stop):
        s = program.state(idx)
        seen = {}
        for j, _, t in program.moves(s):
            tgt = idx + (digit[j][t[j]] - digit[j][s[j]]) * strides[j]
            seen.setdefault(tgt, j)
        if not seen:
            seen[idx] = program.n
        keys = sorted(seen)
        counts.append(len(keys))
        tgts.extend(keys)
        procs.extend(seen[k] for k in keys)
        inv.append(program.in_invariant(s))
    return inv, counts, tgts, procs


def enumerate_space(program: StabilizingProgram, memory_budget: int | None = DEFAULT_MEMORY_BUDGET,
                    workers: int = 1) -> StateSpace:
    """Enumerate every state with its distinct program successors."""
    need = estimate_bytes(program)
    if memory_budget is not None and need > memory_budget:
        raise ResourceError(
            f"full analysis of {program!r} needs about {need / 2**30:.2f} GiB for "
            f"{program.state_count} states; budget is {memory_budget / 2**30:.2f} GiB"
        )
    total = program.state_count
    chunks = max(1, min(workers * 4, total // 2048 + 1))
    bounds = np.linspace(0, total, chunks + 1).astype(np.int64)
    tasks = [(program, int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    inv, counts, tgts, procs = [], [], [], []
    for part in parallel_map(_enumerate_task, tasks, workers):
        inv.extend(part[0])
        counts.extend(part[1])
        tgts.extend(part[2])
        procs.extend(part[3])
    offsets = np.zeros(total + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    return StateSpace(program, total, np.array(inv, dtype=bool), offsets,
                      np.array(tgts, dtype=np.int64), np.array(procs, dtype=np.int64))


def _enumerate_task(args):
    return _enumerate_range(*args)


@dataclass
class RankTable:
    kind: str
    rank: np.ndarray  # float64; exact integers for max-rank
    path_count: list[int] | None = None
    total_path_length: list[int] | None = None

    def exact(self, idx: int):
        if self.kind == MAX:
            return int(self.rank[idx])
        return Fraction(self.total_path_length[idx], self.path_count[idx])

    def exact_ranks(self) -> list:
        return [self.exact(i) for i in range(len(self.rank))]


def _rank_order(space: StateSpace):
    """Yield (state, distinct non-self successors) in an order where successors come first.

    Kahn-style layering seeded with the invariant. Raises StabilizationError if
    some illegitimate state can never be ranked.
    """
    n_states = space.state_count
    inv = space.invariant
    succ = []
    remaining = np.zeros(n_states, dtype=np.int64)
    for i in range(n_states):
        ts = space.successors(i)
        ts = ts[ts != i]
        succ.append(ts)
        remaining[i] = len(ts)
    rev_off, rev_src = space.reverse()
    queue = deque(np.flatnonzero(inv).tolist())
    done = inv.copy()
    order = []
    while queue:
        t = queue.popleft()
        for s in rev_src[rev_off[t]:rev_off[t + 1]].tolist():
            if done[s]:
                continue
            remaining[s] -= 1
            if remaining[s] == 0:
                done[s] = True
                order.append(s)
                queue.append(s)
    if not done.all():
        raise StabilizationError(
            f"{space.program!r} does not stabilize: state "
            f"{space.program.state(_find_stuck(succ, done))} lies on a cycle or dead end outside the invariant",
            state=_find_stuck(succ, done),
        )
    return order, succ


def _find_stuck(succ, done) -> int:
    start = int(np.flatnonzero(~done)[0])
    seen = []
    pos = {}
    s = start
    while s not in pos:
        pos[s] = len(seen)
        seen.append(s)
        nxt = [t for t in succ[s].tolist() if not done[t]]
        if not nxt:
            return s
        s = nxt[0]
    return s


def compute_max_rank(space: StateSpace) -> RankTable:
    order, succ = _rank_order(space)
    rank = np.zeros(space.state_count, dtype=np.int64)
    for s in order:
        rank[s] = 1 + rank[succ[s]].max()
    return RankTable(MAX, rank.astype(np.float64))


def compute_average_rank(space: StateSpace, literal_recurrence: bool = False) -> RankTable:
    """Exact path counts and summed path lengths to the invariant.

    ``totalPathLength(s) = sum over successors t of (pathCount(t) + totalPathLength(t))``,
    which is the summed length of every path. With ``literal_recurrence`` the
    first term is the number of successors instead; that variant agrees with
    the exact rule only when every successor has a single path.
    """
    order, succ = _rank_order(space)
    n_states = space.state_count
    pc = [1] * n_states
    tpl = [0] * n_states
    for s in order:
        ts = succ[s].tolist()
        c = 0
        total = 0
        for t in ts:
            c += pc[t]
            total += tpl[t] + (0 if literal_recurrence else pc[t])
        if literal_recurrence:
            total += len(ts)
        pc[s] = c
        tpl[s] = total
    rank = np.array([t / c for t, c in zip(tpl, pc)], dtype=np.float64)
    return RankTable(AVERAGE, rank, pc, tpl)


def compute_ranks(space: StateSpace, kind: str) -> RankTable:
    if kind == MAX:
        return compute_max_rank(space)
    if kind == AVERAGE:
        return compute_average_rank(space)
    raise UsageError(f"unknown rank kind {kind!r}")


def rank_effect(table: RankTable, s0: int, s1: int):
    """rank(s1) - rank(s0), exact (int for max-rank, Fraction for average-rank)."""
    n_states = len(table.rank)
    if not (0 <= s0 < n_states and 0 <= s1 < n_states):
        raise UsageError("state index out of range")
    return table.exact(s1) - table.exact(s0)


_MAGIC = b"CVFR"
_HEADER = struct.Struct("<4sIBQ")


def dump_ranks(table: RankTable, path) -> None:
    kind = RANK_KINDS.index(table.kind)
    try:
        with open(path, "wb") as fh:
            fh.write(_HEADER.pack(_MAGIC, 1, kind, len(table.rank)))
            fh.write(np.asarray(table.rank, dtype="<f8").tobytes())
    except OSError as exc:
        raise OutputError(f"cannot write rank dump {path}: {exc}") from exc


def load_ranks(path) -> RankTable:
    data = Path(path).read_bytes()
    magic, version, kind, count = _HEADER.unpack_from(data)
    if magic != _MAGIC or version != 1:
        raise UsageError(f"{path} is not a version-1 rank dump")
    rank = np.frombuffer(data, dtype="<f8", count=count, offset=_HEADER.size).copy()
    return RankTable(RANK_KINDS[kind], rank)
