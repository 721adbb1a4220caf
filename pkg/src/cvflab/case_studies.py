"""The three stabilizing programs analyzed by the toolkit.

* Dijkstra's 3-state token ring (``x.j`` in {0, 1, 2}),
* Gradinariu-Tixeuil coloring with Delta+1 colors (``c.j`` in 0..Delta),
* Manne et al. maximal matching (``(p.j, m.j)`` with ``p.j`` None or a neighbor).
"""

from __future__ import annotations

from .errors import UsageError
from .program import SILENT, SINGLE_TOKEN, Action, CommGraph, StabilizingProgram

PROGRAMS = ("token-ring", "coloring", "matching")


class TokenRingProgram(StabilizingProgram):
    """Dijkstra's 3-state ring.

    ``last_rule="dijkstra"`` (default) makes process n-1 set ``x.(n-1) = x.(n-2) + 1``,
    Dijkstra's original statement. ``last_rule="copy"`` uses ``x.(n-1) = x.(n-2)``,
    which leaves the top action enabled as a no-op once it fires.
    """

    name = "token-ring"

    def __init__(self, n: int, last_rule: str = "dijkstra"):
        if n < 3:
            raise UsageError(f"token ring needs n >= 3, got {n}")
        if last_rule not in ("dijkstra", "copy"):
            raise UsageError(f"unknown last_rule {last_rule!r}")
        self.last_rule = last_rule
        bump = 1 if last_rule == "dijkstra" else 0
        last = n - 1
        actions = []
        for j in range(n):
            if j == 0:
                acts = [Action(
                    "decrement",
                    lambda x, j: (x[0] + 1) % 3 == x[1],
                    lambda x, j: [(x[0] - 1) % 3],
                )]
            elif j == last:
                acts = [Action(
                    "copy-if",
                    lambda x, j: x[0] == x[j - 1] and (x[j - 1] + 1) % 3 != x[j],
                    lambda x, j: [(x[j - 1] + bump) % 3],
                )]
            else:
                acts = [
                    Action("copy-left",
                           lambda x, j: (x[j] + 1) % 3 == x[j - 1],
                           lambda x, j: [x[j - 1]]),
                    Action("copy-right",
                           lambda x, j: (x[j] + 1) % 3 == x[j + 1],
                           lambda x, j: [x[j + 1]]),
                ]
            actions.append(acts)
        super().__init__(CommGraph.ring(n), [(0, 1, 2)] * n, actions, SINGLE_TOKEN)

    def __reduce__(self):
        return (TokenRingProgram, (self.n, self.last_rule))

    def perturbation_values(self, s, j):
        if j == 0:
            return {(s[0] - 1) % 3}
        # every other statement copies (a shift of) a neighbor read
        return {0, 1, 2}


def _min_free_color(x, j, nb):
    used = {x[k] for k in nb}
    c = 0
    while c in used:
        c += 1
    return c


class ColoringProgram(StabilizingProgram):
    name = "coloring"

    def __init__(self, graph: CommGraph):
        self.delta = graph.max_degree
        colors = tuple(range(self.delta + 1))
        actions = []
        for j in range(graph.n):
            nb = graph.adj[j]
            actions.append([Action(
                "recolor",
                lambda x, j, nb=nb: any(x[k] == x[j] for k in nb),
                lambda x, j, nb=nb: [_min_free_color(x, j, nb)],
            )])
        super().__init__(graph, [colors] * graph.n, actions, SILENT)

    def __reduce__(self):
        return (ColoringProgram, (self.graph,))

    def perturbation_values(self, s, j):
        # the minimum excluded value of deg(j) arbitrary colors ranges over 0..deg(j)
        return set(range(self.graph.degree(j) + 1))

    def is_proper(self, s) -> bool:
        return all(s[u] != s[v] for u, v in self.graph.edges())


class MatchingProgram(StabilizingProgram):
    """Local value of process j is the pair ``(p.j, m.j)``; ``p.j is None`` means null."""

    name = "matching"

    def __init__(self, graph: CommGraph):
        domains = []
        actions = []
        for j in range(graph.n):
            nb = graph.adj[j]
            domains.append([(p, m) for p in (None, *nb) for m in (False, True)])
            actions.append(self._actions(j, nb))
        super().__init__(graph, domains, actions, SILENT)

    @staticmethod
    def _actions(j, nb):
        def married(x, j):
            p = x[j][0]
            return p is not None and x[p][0] == j

        def consistent(x, j):
            return x[j][1] == married(x, j)

        def proposers(x, j):
            return [i for i in nb if x[i][0] == j]

        def free_smaller(x, j):
            return [k for k in nb if x[k][0] is None and k < j and not x[k][1]]

        def cancel_guard(x, j):
            i = x[j][0]
            return (consistent(x, j) and i is not None and x[i][0] != j
                    and (x[i][1] or j <= i))

        return [
            Action("update-m",
                   lambda x, j: not consistent(x, j),
                   lambda x, j: [(x[j][0], married(x, j))]),
            Action("accept",
                   lambda x, j: consistent(x, j) and x[j][0] is None and bool(proposers(x, j)),
                   lambda x, j: [(i, x[j][1]) for i in proposers(x, j)]),
            Action("propose",
                   lambda x, j: (consistent(x, j) and x[j][0] is None and not proposers(x, j)
                                 and bool(free_smaller(x, j))),
                   lambda x, j: [(max(f), x[j][1])] if (f := free_smaller(x, j)) else []),
            Action("cancel",
                   cancel_guard,
                   lambda x, j: [(None, x[j][1])]),
        ]

    def __reduce__(self):
        return (MatchingProgram, (self.graph,))

    def perturbation_values(self, s, j):
        p, m = s[j]
        nb = self.graph.adj[j]
        values = {(p, False), (None, m)}
        if p is not None:
            values.add((p, True))
        values.update((i, m) for i in nb)
        return values

    def is_maximal_matching(self, s) -> bool:
        """True iff p encodes a maximal matching with consistent m flags."""
        partner = {}
        for j, (p, m) in enumerate(s):
            married = p is not None and s[p][0] == j
            if m != married:
                return False
            if p is not None and not married:
                return False
            if married:
                partner[j] = p
        return all(u in partner or v in partner for u, v in self.graph.edges())


def token_ring_actions(n: int) -> TokenRingProgram:
    return TokenRingProgram(n)


def coloring_actions(graph: CommGraph) -> ColoringProgram:
    return ColoringProgram(graph)


def matching_actions(graph: CommGraph) -> MatchingProgram:
    return MatchingProgram(graph)


def make_program(name: str, graph: CommGraph | None = None, n: int | None = None,
                 last_rule: str = "dijkstra"):
    """Build a case study by CLI name. The token ring ignores ``graph`` and needs ``n``."""
    if name == "token-ring":
        if graph is not None and n is None:
            n = graph.n
        if n is None:
            raise UsageError("token ring needs n")
        return TokenRingProgram(n, last_rule)
    if name not in PROGRAMS:
        raise UsageError(f"unknown program {name!r}; choose from {', '.join(PROGRAMS)}")
    if graph is None:
        if n is None:
            raise UsageError(f"{name} needs a graph or n")
        graph = CommGraph.ring(n)
    return ColoringProgram(graph) if name == "coloring" else MatchingProgram(graph)
