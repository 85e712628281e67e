"""Mixed graphs, their symmetric arcs, and the graph families used in experiments.

A mixed graph keeps its edges in build order.  Each edge {u, v} carries an
orientation class relative to the stored pair (u, v): bidirected, forward
(the single arc u -> v) or backward (the single arc v -> u).
"""

from __future__ import annotations

import enum
import itertools
import json
import random
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError


class GraphError(InputError):
    pass


class SelfLoop(GraphError):
    pass


class DuplicatePair(GraphError):
    pass


class Disconnected(GraphError):
    pass


class TooFewVertices(GraphError):
    pass


class VertexOutOfRange(GraphError):
    pass


class BadParameters(GraphError):
    pass


class Orientation(enum.IntEnum):
    """Orientation class of a stored edge (u, v); values are the base-3 digits."""

    BIDIRECTED = 0
    FORWARD = 1   # only u -> v
    BACKWARD = 2  # only v -> u

    @classmethod
    def coerce(cls, value) -> "Orientation":
        if isinstance(value, cls):
            return value
        if isinstance(value, int):
            return cls(value)
        key = str(value).strip().lower()
        aliases = {"undirected": cls.BIDIRECTED, "bidirected": cls.BIDIRECTED, "b": cls.BIDIRECTED,
                   "forward": cls.FORWARD, "f": cls.FORWARD, "backward": cls.BACKWARD}
        if key not in aliases:
            raise GraphError(f"unknown orientation class {value!r}")
        return aliases[key]

    @property
    def sign(self) -> int:
        return (0, 1, -1)[self]


@dataclass(frozen=True)
class Arc:
    """A symmetric arc with sign +1 (a in A only), -1 (reverse only) or 0 (both)."""

    origin: int
    terminus: int
    sign: int

    def reverse(self) -> "Arc":
        return Arc(self.terminus, self.origin, -self.sign)


class ArcOrdering(Sequence[Arc]):
    """All 2m symmetric arcs: stored edge directions in build order, then their reverses.

    Arc j (j < m) is edge j read as u -> v and arc m + j is its reverse.
    """

    def __init__(self, arcs: Iterable[Arc]):
        self._arcs = tuple(arcs)
        self._index = {(a.origin, a.terminus): i for i, a in enumerate(self._arcs)}
        if len(self._index) != len(self._arcs):
            raise ValueError("arc listed twice")
        self.reverse_index = tuple(self._index[(a.terminus, a.origin)] for a in self._arcs)

    def __getitem__(self, i):
        return self._arcs[i]

    def __len__(self):
        return len(self._arcs)

    def __eq__(self, other):
        return isinstance(other, ArcOrdering) and self._arcs == other._arcs

    def __hash__(self):
        return hash(self._arcs)

    def index(self, arc) -> int:
        if isinstance(arc, Arc):
            arc = (arc.origin, arc.terminus)
        return self._index[tuple(arc)]

    def __repr__(self):
        return f"ArcOrdering({[(a.origin, a.terminus, a.sign) for a in self._arcs]})"


class MixedGraph:
    """Immutable weakly connected mixed graph on vertices 0..n-1."""

    def __init__(self, n: int, edges: Iterable[tuple[int, int, object]]):
        if not isinstance(n, int) or n < 2:
            raise TooFewVertices(f"need at least 2 vertices, got {n}")
        stored = []
        seen: dict[frozenset, int] = {}
        for idx, (u, v, cls) in enumerate(edges):
            for x in (u, v):
                if not isinstance(x, int) or not 0 <= x < n:
                    raise VertexOutOfRange(f"edge {idx}: vertex {x!r} not in 0..{n - 1}")
            if u == v:
                raise SelfLoop(f"edge {idx}: self-loop at vertex {u}")
            key = frozenset((u, v))
            if key in seen:
                raise DuplicatePair(f"edge {idx}: pair {{{u}, {v}}} already given as edge {seen[key]}")
            seen[key] = idx
            stored.append((u, v, Orientation.coerce(cls)))
        self.n = n
        self.edges: tuple[tuple[int, int, Orientation], ...] = tuple(stored)
        self._pair = seen
        if not self._connected():
            raise Disconnected(f"underlying graph on {n} vertices is not connected")

    def _connected(self) -> bool:
        adj = self.neighbors
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == self.n

    @property
    def m(self) -> int:
        """Number of edges of the underlying graph."""
        return len(self.edges)

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v, _ in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.neighbors)

    def degree(self, x: int) -> int:
        if not 0 <= x < self.n:
            raise VertexOutOfRange(f"vertex {x} not in 0..{self.n - 1}")
        return self.degrees[x]

    def is_regular(self) -> int | None:
        """The common degree k if the graph is k-regular, else None."""
        ds = set(self.degrees)
        return ds.pop() if len(ds) == 1 else None

    @property
    def is_undirected(self) -> bool:
        return all(cls is Orientation.BIDIRECTED for _, _, cls in self.edges)

    def arc_sign(self, x: int, y: int) -> int | None:
        """theta(x, y) / eta: +1, -1 or 0 for an arc of A^{+-}, None for non-adjacent."""
        idx = self._pair.get(frozenset((x, y)))
        if idx is None:
            return None
        u, _, cls = self.edges[idx]
        return cls.sign if x == u else -cls.sign

    @cached_property
    def arcs(self) -> ArcOrdering:
        first = [Arc(u, v, cls.sign) for u, v, cls in self.edges]
        return ArcOrdering(first + [a.reverse() for a in first])

    def underlying(self) -> "MixedGraph":
        return MixedGraph(self.n, [(u, v, Orientation.BIDIRECTED) for u, v, _ in self.edges])

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v, _ in self.edges:
            a[u, v] = a[v, u] = 1
        return a

    def orientation_code(self) -> tuple[int, ...]:
        return tuple(int(cls) for _, _, cls in self.edges)

    def __eq__(self, other):
        return isinstance(other, MixedGraph) and self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"MixedGraph(n={self.n}, edges={[(u, v, c.name.lower()) for u, v, c in self.edges]})"

    # serialization

    def to_dict(self) -> dict:
        arcs = []
        for u, v, cls in self.edges:
            if cls is Orientation.BIDIRECTED:
                arcs.append({"u": u, "v": v, "class": "undirected"})
            elif cls is Orientation.FORWARD:
                arcs.append({"u": u, "v": v, "class": "forward"})
            else:
                arcs.append({"u": v, "v": u, "class": "forward"})
        return {"n": self.n, "arcs": arcs}


def build(n: int, arcs: Iterable[tuple[int, int, object]]) -> MixedGraph:
    return MixedGraph(n, arcs)


def triangle_count(g: MixedGraph) -> int:
    """Triangles of the underlying graph, Tr(A^3) / 6."""
    a = g.adjacency()
    return int(np.trace(a @ a @ a)) // 6


# --- JSON graph files -----------------------------------------------------

def graph_from_dict(data) -> MixedGraph:
    if not isinstance(data, dict) or "n" not in data or "arcs" not in data:
        raise GraphError('graph JSON must be an object with keys "n" and "arcs"')
    edges = []
    for i, arc in enumerate(data["arcs"]):
        try:
            u, v, cls = arc["u"], arc["v"], arc["class"]
        except (TypeError, KeyError) as exc:
            raise GraphError(f"arcs[{i}]: expected keys u, v, class") from exc
        if cls not in ("undirected", "forward"):
            raise GraphError(f'arcs[{i}]: class must be "undirected" or "forward", got {cls!r}')
        edges.append((u, v, cls))
    return MixedGraph(data["n"], edges)


def load_graph(path) -> MixedGraph:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        line = text.splitlines()[exc.lineno - 1] if exc.lineno <= len(text.splitlines()) else ""
        raise GraphError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}\n    {line}") from None
    try:
        return graph_from_dict(data)
    except GraphError as exc:
        raise type(exc)(f"{path}: {exc}") from None


def save_graph(g: MixedGraph, path) -> None:
    Path(path).write_text(json.dumps(g.to_dict(), indent=1) + "\n")


# --- families -------------------------------------------------------------

def _pattern(pattern, count: int) -> list[Orientation]:
    if pattern is None:
        return [Orientation.BIDIRECTED] * count
    out = [Orientation.coerce(p) for p in pattern]
    if len(out) != count:
        raise BadParameters(f"orientation pattern needs {count} entries, got {len(out)}")
    return out


def cycle(n: int, pattern=None) -> MixedGraph:
    """C_n with edges (0,1), (1,2), ..., (n-1,0)."""
    if n < 3:
        raise BadParameters(f"cycle needs n >= 3, got {n}")
    pairs = [(i, (i + 1) % n) for i in range(n)]
    return MixedGraph(n, [(u, v, c) for (u, v), c in zip(pairs, _pattern(pattern, n))])


def path(n: int, pattern=None) -> MixedGraph:
    if n < 2:
        raise BadParameters(f"path needs n >= 2, got {n}")
    pairs = [(i, i + 1) for i in range(n - 1)]
    return MixedGraph(n, [(u, v, c) for (u, v), c in zip(pairs, _pattern(pattern, n - 1))])


def complete(n: int, assignment=None) -> MixedGraph:
    """K_n with pairs (i, j), i < j, in lexicographic order."""
    if n < 2:
        raise BadParameters(f"complete graph needs n >= 2, got {n}")
    pairs = list(itertools.combinations(range(n), 2))
    return MixedGraph(n, [(u, v, c) for (u, v), c in zip(pairs, _pattern(assignment, len(pairs)))])


def complete_multipartite(*sizes: int) -> MixedGraph:
    if len(sizes) < 2 or any(s < 1 for s in sizes):
        raise BadParameters(f"complete multipartite graph needs >= 2 positive part sizes, got {sizes}")
    part = [i for i, s in enumerate(sizes) for _ in range(s)]
    n = len(part)
    edges = [(u, v, 0) for u, v in itertools.combinations(range(n), 2) if part[u] != part[v]]
    return MixedGraph(n, edges)


def complete_bipartite(a: int, b: int) -> MixedGraph:
    return complete_multipartite(a, b)


def hamming(d: int, q: int) -> MixedGraph:
    """H(d, q): words of length d over q letters, adjacent at Hamming distance 1."""
    if d < 1 or q < 2:
        raise BadParameters(f"hamming graph needs d >= 1 and q >= 2, got d={d}, q={q}")
    words = list(itertools.product(range(q), repeat=d))
    edges = [(i, j, 0) for i, j in itertools.combinations(range(len(words)), 2)
             if sum(x != y for x, y in zip(words[i], words[j])) == 1]
    return MixedGraph(len(words), edges)


def random_orientation(g: MixedGraph, rng: random.Random, directed_prob: float = 0.5) -> MixedGraph:
    """Same underlying graph; each edge one-directional with probability ``directed_prob``."""
    edges = []
    for u, v, _ in g.edges:
        cls = rng.choice((1, 2)) if rng.random() < directed_prob else 0
        edges.append((u, v, cls))
    return MixedGraph(g.n, edges)


def random_connected(n: int, rng: random.Random, edge_prob: float = 0.3,
                     directed_prob: float = 0.5) -> MixedGraph:
    """Random spanning tree plus independent extra edges, randomly oriented."""
    if n < 2:
        raise BadParameters(f"need n >= 2, got {n}")
    order = list(range(n))
    rng.shuffle(order)
    pairs = {tuple(sorted((order[i], order[rng.randrange(i)]))) for i in range(1, n)}
    for u, v in itertools.combinations(range(n), 2):
        if (u, v) not in pairs and rng.random() < edge_prob:
            pairs.add((u, v))
    skeleton = MixedGraph(n, [(u, v, 0) for u, v in sorted(pairs)])
    return random_orientation(skeleton, rng, directed_prob)


def random_regular(n: int, k: int, rng: random.Random, directed_prob: float = 0.5,
                   max_tries: int = 100) -> MixedGraph:
    """Random connected k-regular graph on n vertices with random orientations."""
    import networkx as nx

    if not 0 < k < n or (n * k) % 2:
        raise BadParameters(f"no {k}-regular graph on {n} vertices")
    for _ in range(max_tries):
        h = nx.random_regular_graph(k, n, seed=rng.randrange(2**32))
        if nx.is_connected(h):
            skeleton = MixedGraph(n, [(min(e), max(e), 0) for e in sorted(map(sorted, h.edges()))])
            return random_orientation(skeleton, rng, directed_prob)
    raise BadParameters(f"could not sample a connected {k}-regular graph on {n} vertices")
