"""Guarded-command model of a distributed program.

A program state is a tuple holding one local value per process. Local values
are program specific (an int for the token ring and coloring, a ``(p, m)``
pair for matching). States are densely indexed in mixed radix with process 0
as the most significant digit, so index order equals lexicographic order of
``itertools.product(*domains)``.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Any, Callable, Iterator, Sequence

from .errors import ContractViolation, UsageError

State = tuple
SILENT = "silent"
SINGLE_TOKEN = "single-token"
INVARIANT_KINDS = (SILENT, SINGLE_TOKEN)


@dataclass(frozen=True)
class CommGraph:
    n: int
    adj: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n < 1:
            raise UsageError(f"graph needs at least one node, got n={self.n}")
        if len(self.adj) != self.n:
            raise UsageError("adjacency length must equal node count")
        for j, nb in enumerate(self.adj):
            if list(nb) != sorted(set(nb)):
                raise UsageError(f"neighbors of {j} must be sorted and unique")
            for k in nb:
                if not 0 <= k < self.n:
                    raise UsageError(f"neighbor id {k} of {j} out of range")
                if k == j:
                    raise UsageError(f"self-loop at {j}")
                if j not in self.adj[k]:
                    raise UsageError(f"asymmetric edge {j}-{k}")

    @classmethod
    def from_edges(cls, n: int, edges) -> "CommGraph":
        nbs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise UsageError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise UsageError(f"edge ({u}, {v}) outside 0..{n - 1}")
            nbs[u].add(v)
            nbs[v].add(u)
        return cls(n, tuple(tuple(sorted(s)) for s in nbs))

    @classmethod
    def ring(cls, n: int) -> "CommGraph":
        if n < 3:
            raise UsageError(f"ring needs n >= 3, got {n}")
        return cls.from_edges(n, [(j, (j + 1) % n) for j in range(n)])

    @classmethod
    def path(cls, n: int) -> "CommGraph":
        return cls.from_edges(n, [(j, j + 1) for j in range(n - 1)])

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def degree(self, j: int) -> int:
        return len(self.adj[j])

    @property
    def max_degree(self) -> int:
        return max((len(nb) for nb in self.adj), default=0)

    def is_connected(self) -> bool:
        seen = {0}
        todo = deque([0])
        while todo:
            u = todo.popleft()
            for v in self.adj[u]:
                if v not in seen:
                    seen.add(v)
                    todo.append(v)
        return len(seen) == self.n


@dataclass(frozen=True)
class Action:
    """``guard`` and ``statement`` take (state-like sequence, process id).

    ``statement`` returns the candidate new local values of the process, one
    per binding of the action's bound variables (usually exactly one). An
    empty list means the statement is undefined for those reads.
    """

    name: str
    guard: Callable[[Sequence[Any], int], bool]
    statement: Callable[[Sequence[Any], int], list]


@dataclass(frozen=True)
class Transition:
    source: int
    target: int
    process: int
    kind: str = "program"


class StabilizingProgram:
    name = "program"

    def __init__(self, graph: CommGraph, domains, actions, invariant_kind: str):
        if invariant_kind not in INVARIANT_KINDS:
            raise UsageError(f"unknown invariant kind {invariant_kind!r}")
        if len(domains) != graph.n or len(actions) != graph.n:
            raise UsageError("need one domain and one action list per process")
        self.graph = graph
        self.domains = tuple(tuple(d) for d in domains)
        self.actions = tuple(tuple(a) for a in actions)
        self.invariant_kind = invariant_kind
        self._digit = [{v: i for i, v in enumerate(d)} for d in self.domains]
        self.radices = tuple(len(d) for d in self.domains)
        strides = [1] * graph.n
        for j in range(graph.n - 2, -1, -1):
            strides[j] = strides[j + 1] * self.radices[j + 1]
        self.strides = tuple(strides)

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n})"

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def state_count(self) -> int:
        count = 1
        for r in self.radices:
            count *= r
        return count

    # -- indexing ---------------------------------------------------------

    def index(self, s: Sequence[Any]) -> int:
        idx = 0
        for j, v in enumerate(s):
            idx = idx * self.radices[j] + self._digit[j][v]
        return idx

    def state(self, idx: int) -> State:
        if not 0 <= idx < self.state_count:
            raise UsageError(f"state index {idx} out of range")
        values = []
        for j in range(self.n - 1, -1, -1):
            idx, d = divmod(idx, self.radices[j])
            values.append(self.domains[j][d])
        return tuple(reversed(values))

    def states(self) -> Iterator[State]:
        return itertools.product(*self.domains)

    def validate(self, s: Sequence[Any]) -> None:
        if len(s) != self.n:
            raise UsageError(f"state has {len(s)} components, expected {self.n}")
        for j, v in enumerate(s):
            if v not in self._digit[j]:
                raise UsageError(f"value {v!r} of process {j} outside its domain")

    def _check_process(self, j: int) -> None:
        if not 0 <= j < self.n:
            raise UsageError(f"process id {j} out of range 0..{self.n - 1}")

    # -- program transitions ----------------------------------------------

    def enabled_actions(self, s: State, j: int) -> list[int]:
        self._check_process(j)
        return [a for a, act in enumerate(self.actions[j]) if act.guard(s, j)]

    def is_enabled(self, s: State, j: int) -> bool:
        return any(act.guard(s, j) for act in self.actions[j])

    def apply_action(self, s: State, j: int, action: int) -> State:
        """Fire one action; bound variables take their first (smallest) binding."""
        self._check_process(j)
        act = self.actions[j][action]
        if not act.guard(s, j):
            raise ContractViolation(f"action {act.name!r} of process {j} is not enabled in {s}")
        return _replace(s, j, act.statement(s, j)[0])

    def moves(self, s: State) -> list[tuple[int, int, State]]:
        """Every enabled (process, action, binding) as (process, action, next state)."""
        out = []
        for j in range(self.n):
            for a, act in enumerate(self.actions[j]):
                if act.guard(s, j):
                    for value in act.statement(s, j):
                        out.append((j, a, _replace(s, j, value)))
        return out

    def successors(self, s: State) -> list[tuple[Transition, State]]:
        src = self.index(s)
        seen: dict[int, tuple[Transition, State]] = {}
        for j, _, t in self.moves(s):
            tgt = self.index(t)
            if tgt not in seen:
                seen[tgt] = (Transition(src, tgt, j), t)
        if not seen:
            return [(Transition(src, src, self.n), s)]
        return [seen[k] for k in sorted(seen)]

    def step_options(self, s: State) -> tuple[bool, list[State]]:
        """``(in_invariant(s), next states)`` for random schedulers, from one guard pass.

        Next states hold one entry per enabled (process, action, binding) and
        skip moves that leave the state unchanged.
        """
        moves = self.moves(s)
        procs = {j for j, _, _ in moves}
        if self.invariant_kind == SILENT:
            legit = not procs
        else:
            legit = len(procs) == 1
        return legit, [t for _, _, t in moves if t != s]

    def enabled_count(self, s: State) -> int:
        return sum(1 for j in range(self.n) if self.is_enabled(s, j))

    def in_invariant(self, s: State) -> bool:
        if self.invariant_kind == SILENT:
            return not any(self.is_enabled(s, j) for j in range(self.n))
        return self.enabled_count(s) == 1

    # -- perturbations ----------------------------------------------------

    def perturbation_values(self, s: State, j: int) -> set:
        """New local values of ``j`` reachable by any statement under arbitrary neighbor reads."""
        return self.generic_perturbation_values(s, j)

    def generic_perturbation_values(self, s: State, j: int) -> set:
        # brute force over every combination of neighbor values
        nb = self.graph.adj[j]
        view = list(s)
        values = set()
        for reads in itertools.product(*(self.domains[k] for k in nb)):
            for k, v in zip(nb, reads):
                view[k] = v
            for act in self.actions[j]:
                values.update(act.statement(view, j))
        return values

    def feasible_perturbations(self, s: State, j: int) -> list[State]:
        self._check_process(j)
        values = self.perturbation_values(s, j)
        values.discard(s[j])
        return sorted((_replace(s, j, v) for v in values), key=self.index)

    def maxcvf(self, s: State, j: int) -> list[State]:
        self._check_process(j)
        return [_replace(s, j, v) for v in self.domains[j] if v != s[j]]


def _replace(s: Sequence[Any], j: int, value) -> State:
    return tuple(s[:j]) + (value,) + tuple(s[j + 1:])
