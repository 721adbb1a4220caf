"""Seeded generators for ring, power-law and random-regular communication graphs."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import GenerationError, OutputError, UsageError
from .program import CommGraph

RING = "ring"
POWER_LAW = "power-law"
RANDOM_REGULAR = "random-regular"
TOPOLOGIES = (RING, POWER_LAW, RANDOM_REGULAR)
MAX_ATTEMPTS = 1000


@dataclass(frozen=True)
class GraphSpec:
    topology: str
    n: int
    degree: int | None = None  # random-regular only
    attach: int | None = None  # power-law only
    seed: int = 0

    def __post_init__(self):
        if self.topology not in TOPOLOGIES:
            raise UsageError(f"unknown topology {self.topology!r}; expected one of {TOPOLOGIES}")
        if self.n < 3:
            raise UsageError(f"graph needs n >= 3, got {self.n}")
        if not 0 <= self.seed < 2 ** 64:
            raise UsageError("seed must fit in 64 unsigned bits")
        if self.topology == RANDOM_REGULAR:
            d = self.degree
            if d is None:
                raise UsageError("random-regular needs --degree")
            if not 2 <= d < self.n:
                raise UsageError(f"degree must satisfy 2 <= d < n, got d={d}, n={self.n}")
            if (self.n * d) % 2:
                raise UsageError(f"n*d must be even, got n={self.n}, d={d}")
        if self.topology == POWER_LAW:
            m = self.attach
            if m is None:
                raise UsageError("power-law needs --attach")
            if not 1 <= m < self.n:
                raise UsageError(f"attach must satisfy 1 <= m < n, got m={m}, n={self.n}")


def generate(spec: GraphSpec) -> CommGraph:
    if spec.topology == RING:
        return CommGraph.ring(spec.n)
    if spec.topology == POWER_LAW:
        return _preferential_attachment(spec.n, spec.attach, spec.seed)
    return _random_regular(spec.n, spec.degree, spec.seed)


def _preferential_attachment(n: int, m: int, seed: int) -> CommGraph:
    # always connected: every new node links into the existing component
    rng = np.random.default_rng(seed)
    edges = [(u, v) for u in range(m + 1) for v in range(u + 1, m + 1)]
    deg = np.zeros(n, dtype=np.float64)
    deg[:m + 1] = m
    for new in range(m + 1, n):
        p = deg[:new] / deg[:new].sum()
        for old in sorted(rng.choice(new, size=m, replace=False, p=p).tolist()):
            edges.append((old, new))
            deg[old] += 1
        deg[new] = m
    return CommGraph.from_edges(n, edges)


def _pairing(n: int, d: int, rng) -> list[tuple[int, int]] | None:
    """One pairing attempt: join random stub pairs, rejecting loops and repeats pair by pair.

    Returns None when the leftover stubs admit no valid pair.
    """
    stubs = np.repeat(np.arange(n), d).tolist()
    seen: set[tuple[int, int]] = set()
    while stubs:
        r = len(stubs)
        for _ in range(4 * r):
            a, b = (int(i) for i in rng.choice(r, size=2, replace=False))
            u, v = stubs[a], stubs[b]
            e = (min(u, v), max(u, v))
            if u != v and e not in seen:
                break
        else:
            nodes = sorted(set(stubs))
            if not any((u, v) not in seen for i, u in enumerate(nodes) for v in nodes[i + 1:]):
                return None
            continue
        seen.add(e)
        for i in sorted((a, b), reverse=True):
            stubs.pop(i)
    return sorted(seen)


def _random_regular(n: int, d: int, seed: int) -> CommGraph:
    if d == n - 1:
        return CommGraph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])
    # dense degrees almost never survive rejection; draw the sparse complement instead
    complement = d > (n - 1) // 2
    k = n - 1 - d if complement else d
    for attempt in range(MAX_ATTEMPTS):
        rng = np.random.default_rng([seed, attempt])
        edges = _pairing(n, k, rng)
        if edges is None:
            continue
        if complement:
            present = set(edges)
            edges = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in present]
        graph = CommGraph.from_edges(n, edges)
        if graph.is_connected():
            return graph
    raise GenerationError(f"no connected {d}-regular graph on {n} nodes after {MAX_ATTEMPTS} attempts")


def write_edge_list(graph: CommGraph, path) -> Path:
    path = Path(path)
    text = "".join(f"{u} {v}\n" for u, v in graph.edges())
    try:
        path.write_bytes(text.encode("ascii"))
    except OSError as exc:
        raise OutputError(f"cannot write edge list {path}: {exc.strerror or exc}") from exc
    return path


def parse_edge_list(text: str, n: int | None = None) -> CommGraph:
    """``u v`` per line; blank lines and ``#`` comments are skipped.

    Node count defaults to the largest id plus one.
    """
    edges = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise UsageError(f"line {lineno}: expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise UsageError(f"line {lineno}: node ids must be integers") from None
        if u < 0 or v < 0:
            raise UsageError(f"line {lineno}: negative node id")
        edges.append((u, v))
    if not edges:
        raise UsageError("edge list is empty")
    if n is None:
        n = 1 + max(max(e) for e in edges)
    graph = CommGraph.from_edges(n, edges)
    if not graph.is_connected():
        raise UsageError("communication graph must be connected")
    return graph


def read_edge_list(path, n: int | None = None) -> CommGraph:
    path = Path(path)
    try:
        text = path.read_text(encoding="ascii")
    except OSError as exc:
        raise OutputError(f"cannot read edge list {path}: {exc.strerror or exc}") from exc
    return parse_edge_list(text, n)
