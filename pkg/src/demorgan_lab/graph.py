"""Finite symmetric graphs with loops: homomorphism and coloring search,
plus the pair-rewriting steps that mirror submatrix closure on the matrix
side."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

__all__ = [
    "Graph", "GraphPair", "GraphError",
    "hom_search", "is_n_colorable", "weak_n_coloring",
    "disjoint_union", "contract_isolated_edge", "has_loop", "components",
    "homomorphic_images", "s_star_step", "s_star_reachable",
    "graph_isomorphic",
    "complete", "cycle", "point", "loop_graph", "g2", "empty_graph",
    "all_graphs",
]


class GraphError(ValueError):
    pass


class Graph:
    """Immutable symmetric graph; vertices 0..n-1 with labels, loops allowed."""

    def __init__(self, labels: Sequence[str], edges: Iterable[tuple[int, int]]):
        self.labels = tuple(labels)
        self.n = len(self.labels)
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError("edge out of range")
            adj[u].add(v)
            adj[v].add(u)
        self.adj = tuple(frozenset(s) for s in adj)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u <= v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def is_loop(self, u: int) -> bool:
        return u in self.adj[u]

    def is_isolated(self, u: int) -> bool:
        return not self.adj[u]

    def has_isolated_vertex(self) -> bool:
        return any(self.is_isolated(u) for u in range(self.n))

    def relabel(self, labels: Sequence[str]) -> "Graph":
        return Graph(labels, self.edges())

    def canonical_key(self) -> tuple:
        """Iso-invariant key: minimum edge bitmask over all permutations,
        preceded by the vertex count.  Exponential; for desk-scale graphs."""
        if self.n > 8:
            raise GraphError("canonical form guard: more than 8 vertices")
        pairs = [(i, j) for i in range(self.n) for j in range(i, self.n)]
        pos = {p: k for k, p in enumerate(pairs)}
        best = None
        for perm in itertools.permutations(range(self.n)):
            mask = 0
            for u, v in self.edges():
                a, b = perm[u], perm[v]
                mask |= 1 << pos[(min(a, b), max(a, b))]
            if best is None or mask < best:
                best = mask
        return (self.n, best)

    def to_json(self) -> str:
        return json.dumps({
            "vertices": list(self.labels),
            "edges": [[self.labels[u], self.labels[v]] for u, v in self.edges()],
        })

    @staticmethod
    def from_json(text: str) -> "Graph":
        d = json.loads(text)
        labels = [str(x) for x in d["vertices"]]
        pos = {l: i for i, l in enumerate(labels)}
        if len(pos) != len(labels):
            raise GraphError("duplicate vertex labels")
        try:
            edges = [(pos[str(a)], pos[str(b)]) for a, b in d["edges"]]
        except KeyError as e:
            raise GraphError(f"edge mentions unknown vertex {e}")
        return Graph(labels, edges)

    def __repr__(self) -> str:
        return f"<Graph n={self.n} edges={self.edges()}>"


@dataclass(frozen=True)
class GraphPair:
    """A graph with a designated-singleton counter, rewritten by s_star_step."""

    graph: Graph
    counter: int

    def __post_init__(self):
        if self.counter < 0:
            raise GraphError("counter must be non-negative")

    def key(self) -> tuple:
        return (*self.graph.canonical_key(), self.counter)


# -- named graphs --------------------------------------------------------------


def empty_graph() -> Graph:
    return Graph([], [])


def point() -> Graph:
    return Graph(["u"], [])


def loop_graph() -> Graph:
    return Graph(["u"], [(0, 0)])


def complete(n: int) -> Graph:
    if n < 1:
        raise GraphError("complete graph needs n >= 1")
    return Graph([f"v{i}" for i in range(n)],
                 [(i, j) for i in range(n) for j in range(i + 1, n)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    return Graph([f"v{i}" for i in range(n)], [(i, (i + 1) % n) for i in range(n)])


def g2() -> Graph:
    """A reflexive vertex adjacent to an irreflexive one."""
    return Graph(["u", "v"], [(0, 0), (0, 1)])


def disjoint_union(gs: Sequence[Graph]) -> Graph:
    labels: list[str] = []
    edges: list[tuple[int, int]] = []
    off = 0
    for k, g in enumerate(gs):
        suffix = "" if len(gs) == 1 else f".{k}"
        labels.extend(l + suffix for l in g.labels)
        edges.extend((u + off, v + off) for u, v in g.edges())
        off += g.n
    return Graph(labels, edges)


def has_loop(g: Graph) -> bool:
    return any(g.is_loop(u) for u in range(g.n))


def components(g: Graph) -> list[Graph]:
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edges():
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
    groups: dict[int, list[int]] = {}
    for u in range(g.n):
        groups.setdefault(find(u), []).append(u)
    out = []
    for _, vs in sorted(groups.items()):
        pos = {v: i for i, v in enumerate(vs)}
        out.append(Graph([g.labels[v] for v in vs],
                         [(pos[u], pos[v]) for u, v in g.edges() if u in pos]))
    return out


def contract_isolated_edge(g: Graph) -> Optional[Graph]:
    """Replace one isolated two-vertex loopless component by a single
    isolated vertex; None when no such component exists."""
    for u in range(g.n):
        for v in g.adj[u]:
            if v <= u:
                continue
            if g.adj[u] == {v} and g.adj[v] == {u}:
                keep = [w for w in range(g.n) if w != v]
                pos = {w: i for i, w in enumerate(keep)}
                edges = [(pos[a], pos[b]) for a, b in g.edges() if a != v and b != v]
                return Graph([g.labels[w] for w in keep], edges)
    return None


# -- homomorphisms and colorings ----------------------------------------------


def hom_search(g: Graph, h: Graph) -> Optional[dict[int, int]]:
    """Some edge-preserving map g -> h, found by backtracking, or None."""
    if g.n == 0:
        return {}
    if h.n == 0:
        return None
    order = sorted(range(g.n), key=lambda u: -len(g.adj[u]))
    assign: dict[int, int] = {}

    def ok(u: int, x: int) -> bool:
        if g.is_loop(u) and not h.is_loop(x):
            return False
        for w in g.adj[u]:
            if w in assign and not h.has_edge(x, assign[w]):
                return False
        return True

    def extend(i: int) -> bool:
        if i == g.n:
            return True
        u = order[i]
        for x in range(h.n):
            if ok(u, x):
                assign[u] = x
                if extend(i + 1):
                    return True
                del assign[u]
        return False

    return dict(assign) if extend(0) else None


def is_n_colorable(g: Graph, n: int) -> bool:
    if n < 1:
        raise GraphError("colorings need n >= 1")
    return hom_search(g, complete(n)) is not None


def weak_n_coloring(g: Graph, n: int) -> Optional[dict[int, int]]:
    """A partial homomorphism to the n-clique defined on all neighbors of
    at least one vertex, or None.

    It suffices to try, for each vertex u, the induced subgraph on exactly
    the neighbors of u: any larger domain restricts to this one.
    """
    if n < 1:
        raise GraphError("colorings need n >= 1")
    for u in range(g.n):
        dom = sorted(g.adj[u])
        pos = {v: i for i, v in enumerate(dom)}
        sub = Graph([g.labels[v] for v in dom],
                    [(pos[a], pos[b]) for a, b in g.edges() if a in pos and b in pos])
        f = hom_search(sub, complete(n))
        if f is not None:
            return {dom[i]: f[i] for i in range(len(dom))}
    return None


def graph_isomorphic(g: Graph, h: Graph) -> bool:
    if g.n != h.n or len(g.edges()) != len(h.edges()):
        return False
    deg = sorted((len(g.adj[u]), g.is_loop(u)) for u in range(g.n))
    if deg != sorted((len(h.adj[u]), h.is_loop(u)) for u in range(h.n)):
        return False
    return g.canonical_key() == h.canonical_key()


# -- surjective images and the pair rewriting ---------------------------------


HOM_IMAGE_GUARD = 5


def _partitions(n: int) -> Iterator[list[int]]:
    """All set partitions of range(n) as restricted-growth block ids."""
    ids = [0] * n

    def rec(i: int, m: int):
        if i == n:
            yield list(ids)
            return
        for b in range(m + 1):
            ids[i] = b
            yield from rec(i + 1, max(m, b + 1))

    yield from rec(0, 0)


def homomorphic_images(g: Graph, guard: int = HOM_IMAGE_GUARD) -> list[Graph]:
    """All images of surjective homomorphisms, up to isomorphism: collapse
    vertices by a partition, then add any set of extra edges."""
    if g.n > guard:
        raise GraphError(f"homomorphic_images guard exceeded ({g.n} > {guard})")
    seen: dict[tuple, Graph] = {}
    for ids in _partitions(g.n):
        k = max(ids) + 1 if ids else 0
        base = {(min(ids[u], ids[v]), max(ids[u], ids[v])) for u, v in g.edges()}
        pairs = [(i, j) for i in range(k) for j in range(i, k)]
        extra = [p for p in pairs if p not in base]
        for bits in range(1 << len(extra)):
            edges = set(base)
            for t, p in enumerate(extra):
                if bits >> t & 1:
                    edges.add(p)
            h = Graph([f"w{i}" for i in range(k)], edges)
            key = h.canonical_key()
            if key not in seen:
                seen[key] = h
    return [seen[k] for k in sorted(seen)]


def s_star_step(pair: GraphPair) -> list[GraphPair]:
    """All pairs reachable by one rewriting step.

    The five moves: (1) replace the graph by a homomorphic image; (2)
    contract an isolated edge; (3) drop a non-empty group of components and
    bump the counter; (4) decrement a counter that stays >= 1; (5) drop the
    last counter when the graph has a loop.
    """
    g, i = pair.graph, pair.counter
    out: dict[tuple, GraphPair] = {}

    def add(p: GraphPair):
        out.setdefault(p.key(), p)

    for h in homomorphic_images(g):
        add(GraphPair(h, i))
    c = contract_isolated_edge(g)
    if c is not None:
        add(GraphPair(c, i))
    comps = components(g)
    for r in range(1, len(comps) + 1):
        for drop in itertools.combinations(range(len(comps)), r):
            keep = [comps[k] for k in range(len(comps)) if k not in drop]
            add(GraphPair(disjoint_union(keep) if keep else empty_graph(), i + 1))
    if i >= 2:
        add(GraphPair(g, i - 1))
    if i == 1 and has_loop(g):
        add(GraphPair(g, 0))
    return [out[k] for k in sorted(out)]


def s_star_reachable(pair: GraphPair, max_counter: Optional[int] = None) -> list[GraphPair]:
    """Closure of the pair under the rewriting steps, up to isomorphism.

    The counter is bounded by the start counter plus the component count,
    and graphs never grow, so the closure is finite.
    """
    start = GraphPair(pair.graph, pair.counter)
    seen = {start.key(): start}
    frontier = [start]
    while frontier:
        p = frontier.pop()
        for q in s_star_step(p):
            if max_counter is not None and q.counter > max_counter:
                continue
            if q.key() not in seen:
                seen[q.key()] = q
                frontier.append(q)
    return [seen[k] for k in sorted(seen)]


def all_graphs(max_vertices: int, allow_isolated: bool = True,
               allow_empty: bool = False) -> list[Graph]:
    """All graphs with at most max_vertices, up to isomorphism; deterministic
    order.  Loops count as edges, so a reflexive vertex is not isolated."""
    out: dict[tuple, Graph] = {}
    if allow_empty:
        out[empty_graph().canonical_key()] = empty_graph()
    for n in range(1, max_vertices + 1):
        pairs = [(i, j) for i in range(n) for j in range(i, n)]
        for bits in range(1 << len(pairs)):
            edges = [p for t, p in enumerate(pairs) if bits >> t & 1]
            g = Graph([f"v{i}" for i in range(n)], edges)
            if not allow_isolated and g.has_isolated_vertex():
                continue
            key = g.canonical_key()
            if key not in out:
                out[key] = g
    return [out[k] for k in sorted(out)]
