"""Growing multigraph generator: shifted preferential attachment plus an
edge-copy triangle step.

Each new vertex places m edges through k = floor(m/2) pair-slots and
r = m - 2k single slots.  A pair-slot is, with probability beta, an
edge-copy: both endpoints of a uniformly random existing edge get an edge
to the new vertex (closing at least one triangle through the copied edge).
Otherwise the slot makes two independent shifted-PA draws, where a vertex
is hit with probability (deg(v)+c)/(2E+cn).  Edge-copy is used rather than
copying a neighbor of the PA target because its per-vertex marginal is
exactly degree-proportional, which keeps the single-step increment
probability at A*d/n + B/n with no order-d/n bias.

All draws within one step read a frozen snapshot of the pre-step state;
degree updates are applied only after every slot of the step is drawn.
Multi-edges are kept (degrees count multiplicity) and self-loops cannot
occur, since a new vertex only connects to older vertices.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .params import GeneratorParams

__all__ = [
    "Multigraph",
    "StepSnapshot",
    "seed_graph",
    "sample_shifted_pa",
    "sample_uniform_edge",
    "add_vertex_step",
    "generate",
    "export_edge_list",
    "import_edge_list",
    "child_seed",
]


class Multigraph:
    """Append-only multigraph with a token array for O(1) degree sampling.

    tokens holds each edge endpoint once, so a uniform token is a
    degree-proportional vertex draw.
    """

    def __init__(self):
        self.n = 0
        self.m = None  # edges per vertex, set by seed_graph / import
        self.edges_u: list[int] = []
        self.edges_v: list[int] = []
        self.degrees: list[int] = []
        self.tokens: list[int] = []

    @property
    def num_edges(self) -> int:
        return len(self.edges_u)

    def add_vertex(self) -> int:
        self.degrees.append(0)
        self.n += 1
        return self.n - 1

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        self.edges_u.append(u)
        self.edges_v.append(v)
        self.tokens.append(u)
        self.tokens.append(v)
        self.degrees[u] += 1
        self.degrees[v] += 1

    def edge_list(self) -> list[tuple[int, int]]:
        return list(zip(self.edges_u, self.edges_v))

    def degree_array(self) -> np.ndarray:
        return np.asarray(self.degrees, dtype=np.int64)

    def adjacency(self) -> list[list[int]]:
        """Neighbor lists with multiplicity."""
        adj = [[] for _ in range(self.n)]
        for u, v in zip(self.edges_u, self.edges_v):
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def simple_adjacency(self) -> list[set[int]]:
        """Neighbor sets of the simple projection (parallel edges collapsed)."""
        adj = [set() for _ in range(self.n)]
        for u, v in zip(self.edges_u, self.edges_v):
            adj[u].add(v)
            adj[v].add(u)
        return adj


@dataclass(frozen=True)
class StepSnapshot:
    """Frozen view of the graph state before a growth step.

    Samplers index only the first num_edges edges / 2*num_edges tokens and
    the first n degrees, so appends made later in the same step are
    invisible to them.
    """

    graph: Multigraph
    n: int
    num_edges: int

    @staticmethod
    def of(g: Multigraph) -> "StepSnapshot":
        return StepSnapshot(graph=g, n=g.n, num_edges=g.num_edges)


def seed_graph(m: int) -> Multigraph:
    """Doubled complete graph on m+1 vertices: every pair joined by two
    parallel edges, so each degree is 2m and there are m(m+1) edges."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    g = Multigraph()
    g.m = m
    for _ in range(m + 1):
        g.add_vertex()
    for u in range(m + 1):
        for v in range(u + 1, m + 1):
            g.add_edge(u, v)
            g.add_edge(u, v)
    return g


def sample_shifted_pa(snapshot: StepSnapshot, c: float, rng: random.Random) -> int:
    """Draw a vertex with probability (deg(v)+c)/(2E+cn) from the snapshot.

    c >= 0 uses a token/uniform mixture; -m < c < 0 uses rejection against
    uniform tokens, accepting with probability (deg(v)+c)/deg(v) (the
    acceptance rate is at least (m+c)/m, so termination is geometric).
    """
    n = snapshot.n
    two_e = 2 * snapshot.num_edges
    if n == 0 or two_e == 0:
        raise ValueError("cannot sample from an empty snapshot")
    tokens = snapshot.graph.tokens
    if c == 0.0:
        return tokens[rng.randrange(two_e)]
    if c > 0.0:
        if rng.random() * (two_e + c * n) < two_e:
            return tokens[rng.randrange(two_e)]
        return rng.randrange(n)
    degrees = snapshot.graph.degrees
    while True:
        v = tokens[rng.randrange(two_e)]
        d = degrees[v]
        if d + c <= 0:
            continue
        if rng.random() * d < d + c:
            return v


def sample_uniform_edge(
    snapshot: StepSnapshot, rng: random.Random
) -> tuple[int, int]:
    """Uniform draw from the edge multiset of the snapshot."""
    if snapshot.num_edges == 0:
        raise ValueError("cannot sample an edge from an empty snapshot")
    e = rng.randrange(snapshot.num_edges)
    return snapshot.graph.edges_u[e], snapshot.graph.edges_v[e]


def add_vertex_step(g: Multigraph, gp: GeneratorParams, rng: random.Random) -> Multigraph:
    """Add one vertex and m edges, sampling every slot from the pre-step
    snapshot and applying all mutations afterwards."""
    snap = StepSnapshot.of(g)
    targets: list[int] = []
    for _ in range(gp.k):
        if rng.random() < gp.beta:
            u, v = sample_uniform_edge(snap, rng)
            targets.append(u)
            targets.append(v)
        else:
            targets.append(sample_shifted_pa(snap, gp.c, rng))
            targets.append(sample_shifted_pa(snap, gp.c, rng))
    for _ in range(gp.r):
        targets.append(sample_shifted_pa(snap, gp.c, rng))
    new = g.add_vertex()
    for t in targets:
        g.add_edge(new, t)
    return g


def generate(gp: GeneratorParams, n: int, seed) -> Multigraph:
    """Grow a graph to n vertices; a fixed (gp, n, seed) gives a
    bit-identical edge list."""
    m = gp.m
    if n < m + 1:
        raise ValueError(f"n must be >= seed size m+1 = {m + 1}, got {n}")
    rng = random.Random(seed)
    g = seed_graph(m)

    # Hot loop: inlined sampling with local bindings; mirrors
    # add_vertex_step exactly (single-writer, snapshot-disciplined).
    k, r, beta, c = gp.k, gp.r, gp.beta, gp.c
    edges_u = g.edges_u
    edges_v = g.edges_v
    tokens = g.tokens
    degrees = g.degrees
    rnd = rng.random
    randrange = rng.randrange
    c_zero = c == 0.0
    c_pos = c > 0.0
    targets: list[int] = []
    for new in range(m + 1, n):
        n_old = new
        two_e = 2 * len(edges_u)
        num_e = len(edges_u)
        total = two_e + c * n_old
        targets.clear()
        pa_draws = r
        for _ in range(k):
            if rnd() < beta:
                e = randrange(num_e)
                targets.append(edges_u[e])
                targets.append(edges_v[e])
            else:
                pa_draws += 2
        if c_zero:
            for _ in range(pa_draws):
                targets.append(tokens[randrange(two_e)])
        elif c_pos:
            for _ in range(pa_draws):
                if rnd() * total < two_e:
                    targets.append(tokens[randrange(two_e)])
                else:
                    targets.append(randrange(n_old))
        else:
            for _ in range(pa_draws):
                while True:
                    v = tokens[randrange(two_e)]
                    d = degrees[v]
                    if d + c > 0 and rnd() * d < d + c:
                        targets.append(v)
                        break
        degrees.append(m)
        g.n += 1
        for t in targets:
            edges_u.append(new)
            edges_v.append(t)
            tokens.append(new)
            tokens.append(t)
            degrees[t] += 1
    return g


def export_edge_list(g: Multigraph, sink) -> None:
    """Write one "u v" line per edge (0-based ids, repeats = multiplicity)."""
    close = False
    if isinstance(sink, str):
        sink = open(sink, "w")
        close = True
    try:
        for u, v in zip(g.edges_u, g.edges_v):
            sink.write(f"{u} {v}\n")
    finally:
        if close:
            sink.close()


def import_edge_list(source) -> Multigraph:
    """Read an edge list written by export_edge_list.

    Rejects malformed lines, self-loops, negative ids and empty inputs.
    """
    close = False
    if isinstance(source, str):
        source = open(source)
        close = True
    try:
        pairs: list[tuple[int, int]] = []
        max_id = -1
        for lineno, line in enumerate(source, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: expected 'u v', got {line!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise ValueError(f"line {lineno}: non-integer id in {line!r}")
            if u < 0 or v < 0:
                raise ValueError(f"line {lineno}: negative vertex id")
            if u == v:
                raise ValueError(f"line {lineno}: self-loop at {u}")
            pairs.append((u, v))
            max_id = max(max_id, u, v)
    finally:
        if close:
            source.close()
    if not pairs:
        raise ValueError("empty edge list")
    g = Multigraph()
    for _ in range(max_id + 1):
        g.add_vertex()
    for u, v in pairs:
        g.add_edge(u, v)
    if len(pairs) % g.n == 0:
        g.m = len(pairs) // g.n
    return g


def child_seed(root_seed: int, *key: int) -> int:
    """Deterministic per-run seed derived from a root seed and an index key.

    Uses a seed sequence so independent (n, seed-index) runs get
    statistically independent, platform-stable streams.
    """
    ss = np.random.SeedSequence([int(root_seed), *[int(x) for x in key]])
    return int(ss.generate_state(2, dtype=np.uint64)[0])
