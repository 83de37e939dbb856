"""Graphs, twin classes, and the compressed type-graph representation.

Two vertices u, v are twins when N(u) \\ {v} = N(v) \\ {u}.  Twin-ness is an
equivalence; its classes are each a clique or an independent set, and the
number of classes is the neighborhood diversity of the graph.  A graph is
compressed into its type graph: one weighted vertex per twin class, an edge
{i, j} when the two classes are fully adjacent, and a loop on every clique
class of size >= 2.

For capacitated instances each class additionally keeps its vertices sorted
by non-increasing capacity, so that "the first l vertices of class i" is a
well-defined prefix.  The domination capacity f_i(l) is the total capacity
of that prefix; it is concave piecewise-linear in l.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

CLIQUE = "clique"
INDEPENDENT = "independent"


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices 0..n-1, optional vertex capacities."""

    n: int
    edges: frozenset
    capacity: tuple | None = None

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        for e in self.edges:
            u, v = e
            if not (0 <= u < v < self.n):
                raise ValueError(f"bad edge {e!r} for n={self.n}")
        if self.capacity is not None:
            if len(self.capacity) != self.n:
                raise ValueError("capacity must be defined on all vertices or none")
            if any(c < 0 for c in self.capacity):
                raise ValueError("capacities must be non-negative")

    @classmethod
    def from_edges(cls, n, edges, capacity=None):
        """Build a graph, normalizing each edge to a sorted pair."""
        norm = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            norm.add((min(u, v), max(u, v)))
        cap = None if capacity is None else tuple(capacity)
        return cls(n, frozenset(norm), cap)

    @cached_property
    def adj(self):
        """Neighbor sets, indexed by vertex."""
        nbr = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nbr[u].add(v)
            nbr[v].add(u)
        return tuple(frozenset(s) for s in nbr)

    def has_edge(self, u, v):
        return u != v and (min(u, v), max(u, v)) in self.edges

    @property
    def m(self):
        return len(self.edges)


def are_twins(g: Graph, u: int, v: int) -> bool:
    """True when u and v have identical neighborhoods outside {u, v}."""
    return (g.adj[u] - {v}) == (g.adj[v] - {u})


@dataclass(frozen=True)
class TypePartition:
    """The twin-equivalence classes of a graph, in order of smallest member.

    Each class is homogeneous: either a clique or an independent set.
    Singletons are canonically labeled independent.
    """

    classes: tuple
    kinds: tuple

    @property
    def k(self):
        return len(self.classes)


def twin_partition(g: Graph) -> TypePartition:
    """Compute the coarsest twin partition; class count equals nd(g)."""
    reps = []        # one representative vertex per class
    classes = []
    for v in range(g.n):
        for idx, r in enumerate(reps):
            if are_twins(g, r, v):
                classes[idx].append(v)
                break
        else:
            reps.append(v)
            classes.append([v])
    kinds = []
    for cls in classes:
        if len(cls) >= 2 and g.has_edge(cls[0], cls[1]):
            kinds.append(CLIQUE)
        else:
            kinds.append(INDEPENDENT)
    return TypePartition(tuple(tuple(c) for c in classes), tuple(kinds))


@dataclass(frozen=True)
class TypeGraph:
    """Type graph: k classes with weights, kinds, edges (loops included).

    ``classes[i]`` lists the vertices of class i; for capacitated inputs the
    list is sorted by (-capacity, vertex), so prefixes realize "the l
    highest-capacity vertices".  ``edges`` holds pairs (i, j) with i <= j;
    (i, i) is the loop marking a clique class of size >= 2.
    """

    k: int
    classes: tuple
    weights: tuple
    kinds: tuple
    edges: frozenset
    sorted_capacities: tuple | None = None

    @property
    def n(self):
        return sum(self.weights)

    def loop_at(self, i):
        return (i, i) in self.edges

    def has_edge(self, i, j):
        return (min(i, j), max(i, j)) in self.edges

    @cached_property
    def neighbor_sets(self):
        """N(i) in the type graph; contains i itself iff i carries a loop."""
        nbr = [set() for _ in range(self.k)]
        for i, j in self.edges:
            nbr[i].add(j)
            nbr[j].add(i)
        return tuple(frozenset(s) for s in nbr)

    def neighbors(self, i):
        return self.neighbor_sets[i]


def build_type_graph(g: Graph, p: TypePartition) -> TypeGraph:
    """Compress g along its twin partition p.

    Rejects any p that is not the twin partition of g (wrong classes or
    wrong kinds).
    """
    expected = twin_partition(g)
    if frozenset(map(frozenset, p.classes)) != frozenset(map(frozenset, expected.classes)):
        raise ValueError("partition classes are not the twin classes of the graph")
    canon_kind = {frozenset(c): knd for c, knd in zip(expected.classes, expected.kinds)}
    for c, knd in zip(p.classes, p.kinds):
        if canon_kind[frozenset(c)] != knd:
            raise ValueError(f"class {c!r} has kind {knd!r}, expected {canon_kind[frozenset(c)]!r}")

    k = p.k
    if g.capacity is not None:
        classes = tuple(tuple(sorted(c, key=lambda v: (-g.capacity[v], v))) for c in p.classes)
        caps = tuple(tuple(g.capacity[v] for v in c) for c in classes)
    else:
        classes = tuple(tuple(sorted(c)) for c in p.classes)
        caps = None

    edges = set()
    for i in range(k):
        if p.kinds[i] == CLIQUE:
            edges.add((i, i))
        for j in range(i + 1, k):
            u, v = classes[i][0], classes[j][0]
            if g.has_edge(u, v):
                edges.add((i, j))

    return TypeGraph(
        k=k,
        classes=classes,
        weights=tuple(len(c) for c in classes),
        kinds=tuple(p.kinds),
        edges=frozenset(edges),
        sorted_capacities=caps,
    )


def type_graph(g: Graph) -> TypeGraph:
    """Shorthand for build_type_graph(g, twin_partition(g))."""
    return build_type_graph(g, twin_partition(g))


def domination_capacity(t: TypeGraph, i: int, ell: int) -> int:
    """f_i(ell): total capacity of the ell highest-capacity vertices of class i.

    Clamped at ell = |V_i| for larger ell.  The increments are the sorted
    capacities themselves, so f_i is concave.
    """
    if t.sorted_capacities is None:
        raise ValueError("type graph carries no capacities")
    if not 0 <= i < t.k:
        raise ValueError(f"unknown class index {i}")
    if ell < 0:
        raise ValueError("prefix length must be non-negative")
    caps = t.sorted_capacities[i]
    return sum(caps[: min(ell, len(caps))])
