"""Instance files and blow-up generators.

The on-disk format is line oriented and canonical (so write . read is the
identity on bytes):

    p <problem> <n> <m>
    c <vertex> <capacity>        # cds only, one line per vertex, ascending
    e <u> <v>                    # m lines, u < v, sorted
    q <parts>                    # maxqcut only

Vertices are 1-indexed in files, 0-indexed in memory.  Parsing is strict:
unknown or out-of-order lines are errors carrying their line number.

Blow-up templates prescribe a type graph (weights, kinds, cross edges,
optional per-class capacities); realizing one yields a graph whose twin
partition has at most as many classes.  Vertex labels are shuffled by the
seed so class structure does not align with index order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .graphs import CLIQUE, INDEPENDENT, Graph

PROBLEMS = ("cds", "sumcol", "maxqcut")


class ParseError(ValueError):
    def __init__(self, line_no, message):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class Instance:
    graph: Graph
    problem: str
    q: int | None = None


def parse_instance(text: str) -> Instance:
    lines = text.splitlines()
    if not lines:
        raise ParseError(1, "empty file")

    def fields(line_no, expect_tag, n_fields):
        if line_no > len(lines):
            raise ParseError(line_no, f"unexpected end of file, wanted a '{expect_tag}' line")
        parts = lines[line_no - 1].split(" ")
        if parts[0] != expect_tag or len(parts) != n_fields:
            raise ParseError(line_no, f"expected '{expect_tag}' line with {n_fields} fields")
        return parts[1:]

    def integer(line_no, text_value, what):
        try:
            return int(text_value)
        except ValueError:
            raise ParseError(line_no, f"bad {what}: {text_value!r}") from None

    head = lines[0].split(" ")
    if len(head) != 4 or head[0] != "p":
        raise ParseError(1, "expected header 'p <problem> <n> <m>'")
    problem = head[1]
    if problem not in PROBLEMS:
        raise ParseError(1, f"unknown problem {problem!r}")
    n = integer(1, head[2], "vertex count")
    m = integer(1, head[3], "edge count")
    if n < 0 or m < 0:
        raise ParseError(1, "negative counts")

    at = 2
    capacity = None
    if problem == "cds":
        capacity = []
        for v in range(1, n + 1):
            got = fields(at, "c", 3)
            if integer(at, got[0], "vertex") != v:
                raise ParseError(at, f"capacity lines must cover vertices in order; wanted {v}")
            cap = integer(at, got[1], "capacity")
            if cap < 0:
                raise ParseError(at, "negative capacity")
            capacity.append(cap)
            at += 1

    edges = []
    for _ in range(m):
        got = fields(at, "e", 3)
        u = integer(at, got[0], "endpoint")
        v = integer(at, got[1], "endpoint")
        if not (1 <= u < v <= n):
            raise ParseError(at, f"edge ({u},{v}) not sorted or out of range")
        if edges and (u, v) <= edges[-1]:
            raise ParseError(at, "edges must be strictly sorted (duplicates forbidden)")
        edges.append((u, v))
        at += 1

    q = None
    if problem == "maxqcut":
        got = fields(at, "q", 2)
        q = integer(at, got[0], "part count")
        if q < 2:
            raise ParseError(at, "need at least two parts")
        at += 1

    if at - 1 != len(lines):
        raise ParseError(at, f"unexpected trailing line {lines[at - 1]!r}")

    graph = Graph.from_edges(n, [(u - 1, v - 1) for u, v in edges], capacity)
    return Instance(graph, problem, q)


def format_instance(inst: Instance) -> str:
    g = inst.graph
    out = [f"p {inst.problem} {g.n} {g.m}"]
    if inst.problem == "cds":
        if g.capacity is None:
            raise ValueError("cds instance without capacities")
        out += [f"c {v + 1} {g.capacity[v]}" for v in range(g.n)]
    out += [f"e {u + 1} {v + 1}" for u, v in sorted(g.edges)]
    if inst.problem == "maxqcut":
        if inst.q is None:
            raise ValueError("maxqcut instance without part count")
        out.append(f"q {inst.q}")
    return "\n".join(out) + "\n"


def read_instance(path) -> Instance:
    with open(path, "r", encoding="ascii") as fh:
        return parse_instance(fh.read())


def write_instance(inst: Instance, path):
    with open(path, "w", encoding="ascii") as fh:
        fh.write(format_instance(inst))


# ---------------------------------------------------------------------------
# blow-up generation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BlowupTemplate:
    """A prescribed type graph: class weights, kinds, cross edges, and
    (optionally) the capacity multiset of each class."""

    weights: tuple
    kinds: tuple
    cross_edges: frozenset
    capacities: tuple | None = None

    @property
    def k(self):
        return len(self.weights)

    def validate(self):
        if len(self.kinds) != self.k:
            raise ValueError("kinds and weights differ in length")
        if any(w < 1 for w in self.weights):
            raise ValueError("class weights must be at least 1")
        if any(kind not in (CLIQUE, INDEPENDENT) for kind in self.kinds):
            raise ValueError("unknown class kind")
        for i, j in self.cross_edges:
            if not 0 <= i < j < self.k:
                raise ValueError(f"bad template edge ({i},{j})")
        if self.capacities is not None:
            if len(self.capacities) != self.k:
                raise ValueError("capacities and weights differ in length")
            for caps, w in zip(self.capacities, self.weights):
                if len(caps) != w:
                    raise ValueError("class capacity tuple does not match its weight")
                if any(c < 0 for c in caps):
                    raise ValueError("negative capacity")
        return self


def generate_blowup(template: BlowupTemplate, seed: int) -> Graph:
    """Realize the template; the seed shuffles vertex labels only.

    The result's twin partition never has more classes than the template
    (classes with identical outside-neighborhoods may merge, so it can have
    fewer).
    """
    template.validate()
    n = sum(template.weights)
    rng = random.Random(seed)
    labels = list(range(n))
    rng.shuffle(labels)

    blocks = []
    at = 0
    for w in template.weights:
        blocks.append([labels[at + i] for i in range(w)])
        at += w

    edges = []
    for i, block in enumerate(blocks):
        if template.kinds[i] == CLIQUE:
            edges += [(u, v) for x, u in enumerate(block) for v in block[x + 1 :]]
    for i, j in template.cross_edges:
        edges += [(u, v) for u in blocks[i] for v in blocks[j]]

    capacity = None
    if template.capacities is not None:
        capacity = [0] * n
        for block, caps in zip(blocks, template.capacities):
            for v, c in zip(block, caps):
                capacity[v] = c
    return Graph.from_edges(n, edges, capacity)


def random_template(
    rng: random.Random,
    max_k: int = 4,
    max_n: int = 8,
    with_capacities: bool = False,
    max_capacity: int = 4,
) -> BlowupTemplate:
    """Draw a template with k <= max_k classes and at most max_n vertices."""
    k = rng.randint(1, max_k)
    weights = [1] * k
    for _ in range(max_n - k):
        if rng.random() < 0.6:
            weights[rng.randrange(k)] += 1
    kinds = tuple(rng.choice((CLIQUE, INDEPENDENT)) for _ in range(k))
    cross = frozenset(
        (i, j) for i in range(k) for j in range(i + 1, k) if rng.random() < 0.5
    )
    caps = None
    if with_capacities:
        caps = tuple(
            tuple(rng.randint(0, max_capacity) for _ in range(w)) for w in weights
        )
    return BlowupTemplate(tuple(weights), kinds, cross, caps).validate()
