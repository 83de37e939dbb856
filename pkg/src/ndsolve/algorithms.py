"""Problem-level algorithms and the brute-force oracles that arbitrate them.

The oracles are assumption-free: the domination oracle checks arbitrary
vertex subsets by bipartite matching (it does not restrict itself to
capacity-ordered solutions, so exchange arguments can be tested against it),
the coloring oracle enumerates proper colorings directly on the graph, and
the cut oracle enumerates partitions.  All three refuse graphs above a size
guard.

On top of the LP relaxation of the linear domination model sit the
polynomial-time routines: a proximity search that enumerates the integer
points around the fractional optimum (each coordinate within k^2, clamped
to the class size) and keeps the best decodable one, and a rounding scheme
that rounds the served-counts up, takes per class the cheapest prefix with
enough capacity, pins a class to its full size whenever its capacity cannot
keep up, and re-solves; after at most k pins the rounding succeeds.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .graphs import Graph, TypeGraph, domination_capacity, twin_partition
from .ipmodel import Linear
from .lp import LpProblem, solve_lp
from .matching import max_bipartite_matching
from .models import CdsSolution, build_cds_ilp, cds_pairs, decode_cds

CDS_SIZE_GUARD = 10
COLORING_SIZE_GUARD = 9
CUT_SIZE_GUARD = 10

__all__ = [
    "ProximityBox",
    "capacity_reorder",
    "cds_brute",
    "cds_proximity_solve",
    "cds_rounding_approx",
    "check_cds",
    "check_coloring",
    "cut_value",
    "max_bipartite_matching",
    "maxqcut_brute",
    "proximity_box",
    "relax_model",
    "sumcol_brute",
]


# ---------------------------------------------------------------------------
# witness checkers (always on the original graph)
# ---------------------------------------------------------------------------

def check_cds(g: Graph, sol: CdsSolution) -> bool:
    """Valid iff the assignment covers exactly V minus D, maps along edges
    into D, and respects every dominator's capacity."""
    if g.capacity is None:
        raise ValueError("graph carries no capacities")
    dom = sol.dominators
    if not all(0 <= v < g.n for v in dom):
        return False
    delta = dict(sol.assignment)
    if set(delta) != set(range(g.n)) - dom:
        return False
    if not all(y in dom and g.has_edge(x, y) for x, y in delta.items()):
        return False
    loads = Counter(delta.values())
    return all(loads[y] <= g.capacity[y] for y in loads)


def check_coloring(g: Graph, coloring) -> bool:
    if set(coloring) != set(range(g.n)):
        return False
    if any(c < 1 for c in coloring.values()):
        return False
    return all(coloring[u] != coloring[v] for u, v in g.edges)


def cut_value(g: Graph, partition) -> int:
    """Number of edges whose endpoints land in distinct parts."""
    return sum(1 for u, v in g.edges if partition[u] != partition[v])


def coloring_cost(coloring) -> int:
    return sum(coloring.values())


# ---------------------------------------------------------------------------
# brute-force oracles
# ---------------------------------------------------------------------------

def _guard(g, limit, what):
    if g.n > limit:
        raise ValueError(f"{what} oracle guard: {g.n} > {limit}")


def _match_subset(g: Graph, dominators):
    """Assignment for an explicit dominator set, or None."""
    outside = [v for v in range(g.n) if v not in dominators]
    adj = {v: sorted(set(g.adj[v]) & dominators) for v in outside}
    cap = {v: g.capacity[v] for v in dominators}
    size, assignment = max_bipartite_matching(outside, adj, cap)
    return assignment if size == len(outside) else None


def cds_brute(g: Graph, max_n: int = CDS_SIZE_GUARD) -> CdsSolution:
    """Smallest capacitated dominating set by subset enumeration."""
    _guard(g, max_n, "domination")
    for size in range(g.n + 1):
        for d in itertools.combinations(range(g.n), size):
            assignment = _match_subset(g, set(d))
            if assignment is not None:
                return CdsSolution.make(d, assignment)
    raise AssertionError("the full vertex set always dominates")


def sumcol_brute(g: Graph, max_n: int = COLORING_SIZE_GUARD) -> dict:
    """Minimum-sum proper coloring by exhaustive search.

    Colors range over 1..n; restricting early vertices to low colors would
    be wrong here, since color values carry cost (the cheapest coloring may
    give its first vertex a high color when a larger class takes color 1).
    Branches are cut by the trivial remaining-cost bound.
    """
    _guard(g, max_n, "coloring")
    n = g.n
    below = [sorted(u for u in g.adj[v] if u < v) for v in range(n)]
    colors = [0] * n
    best_cost = [n * (n + 1) // 2 + 1]
    best = [None]

    def rec(d, cost):
        if cost + (n - d) >= best_cost[0]:
            return
        if d == n:
            best_cost[0] = cost
            best[0] = dict(enumerate(colors))
            return
        for c in range(1, n + 1):
            if all(colors[u] != c for u in below[d]):
                colors[d] = c
                rec(d + 1, cost + c)
        colors[d] = 0

    rec(0, 0)
    return dict(best[0]) if n else {}


def maxqcut_brute(g: Graph, q: int, max_n: int = CUT_SIZE_GUARD) -> dict:
    """Partition into q parts maximizing cross edges, by exhaustive search."""
    _guard(g, max_n, "cut")
    if q < 2:
        raise ValueError("need at least two parts")
    n = g.n
    below = [sorted(u for u in g.adj[v] if u < v) for v in range(n)]
    open_above = [0] * (n + 1)  # edges whose larger endpoint is >= d
    for v in range(n - 1, -1, -1):
        open_above[v] = open_above[v + 1] + len(below[v])
    parts = [0] * n
    best_val = [-1]
    best = [None]

    def rec(d, cut):
        if cut + open_above[d] <= best_val[0]:
            return
        if d == n:
            best_val[0] = cut
            best[0] = dict(enumerate(parts))
            return
        for p in range(1, q + 1):
            parts[d] = p
            rec(d + 1, cut + sum(1 for u in below[d] if parts[u] != p))
        parts[d] = 0

    rec(0, 0)
    return best[0] if n else {}


# ---------------------------------------------------------------------------
# capacity-ordered exchange
# ---------------------------------------------------------------------------

def _capacity_order(g: Graph):
    classes = twin_partition(g).classes
    return [sorted(c, key=lambda v: (-g.capacity[v], v)) for c in classes]


def capacity_reorder(g: Graph, sol: CdsSolution) -> CdsSolution:
    """Exchange dominators until each class holds a capacity-ordered prefix.

    One exchange swaps a chosen vertex v for an unchosen higher-capacity
    twin u; u inherits v's load and v inherits u's old dominator (or u
    itself when u was served by v).  Size is preserved and the number of
    out-of-prefix picks strictly drops, so this terminates.
    """
    if not check_cds(g, sol):
        raise ValueError("input is not a valid solution")
    classes = _capacity_order(g)
    dom = set(sol.dominators)
    delta = dict(sol.assignment)

    def mismatch():
        score = 0
        for cls in classes:
            inside = set(v for v in cls if v in dom)
            prefix = set(cls[: len(inside)])
            score += len(prefix.symmetric_difference(inside))
        return score

    while True:
        swap = None
        for cls in classes:
            inside = [v for v in cls if v in dom]
            prefix = cls[: len(inside)]
            extra = [v for v in inside if v not in set(prefix)]
            missing = [u for u in prefix if u not in dom]
            if extra:
                swap = (missing[0], extra[0])
                break
        if swap is None:
            break
        u, v = swap
        before = mismatch()
        new_delta = {}
        for x, y in delta.items():
            if x == u:
                continue
            new_delta[x] = u if y == v else y
        y0 = delta[u]
        new_delta[v] = u if y0 == v else y0
        dom.discard(v)
        dom.add(u)
        delta = new_delta
        assert mismatch() < before
    out = CdsSolution.make(dom, delta)
    assert check_cds(g, out) and out.size == sol.size
    return out


def is_capacity_ordered(g: Graph, dominators) -> bool:
    dom = set(dominators)
    return all(
        set(cls[: len([v for v in cls if v in dom])]) == {v for v in cls if v in dom}
        for cls in _capacity_order(g)
    )


# ---------------------------------------------------------------------------
# LP relaxation plumbing
# ---------------------------------------------------------------------------

def relax_model(model, pins=None) -> LpProblem:
    """Continuous relaxation of a linear model; pins fix chosen variables."""
    if model.convex_rows:
        raise ValueError("relaxation needs a fully linear model")
    if not isinstance(model.objective, Linear):
        raise ValueError("relaxation needs a linear objective")
    n = model.n_vars
    cons = []
    for row in model.rows:
        dense = [0] * n
        for i, c in row.coeffs:
            dense[i] = c
        cons.append((dense, row.rel, row.rhs))
    lower = list(model.lower)
    upper = list(model.upper)
    for i, v in (pins or {}).items():
        lower[i] = upper[i] = v
    return LpProblem.make(model.sense, model.objective.coeffs, cons, lower, upper)


@dataclass(frozen=True)
class ProximityBox:
    """Per-coordinate integer ranges around the fractional class sizes."""

    center: tuple
    lo: tuple
    hi: tuple

    def ranges(self):
        return [range(l, h + 1) for l, h in zip(self.lo, self.hi)]


def proximity_box(t: TypeGraph, lp_point) -> ProximityBox:
    ksq = t.k * t.k
    center = tuple(Fraction(lp_point[i]) for i in range(t.k))
    lo = tuple(max(0, math.floor(center[i]) - ksq) for i in range(t.k))
    hi = tuple(min(t.weights[i], math.ceil(center[i]) + ksq) for i in range(t.k))
    return ProximityBox(center, lo, hi)


def cds_proximity_solve(t: TypeGraph, g: Graph) -> CdsSolution:
    """Enumerate capacity-ordered candidates inside the proximity box around
    the relaxation optimum; keep the smallest decodable one."""
    res = solve_lp(relax_model(build_cds_ilp(t)))
    if not res.optimal:
        raise RuntimeError("domination relaxation must be feasible and bounded")
    box = proximity_box(t, res.point)
    best = [None]

    def rec(i, prefix, total):
        if best[0] is not None and total >= best[0].size:
            return
        if i == t.k:
            sol = decode_cds(t, g, tuple(prefix))
            if sol is not None and (best[0] is None or sol.size < best[0].size):
                best[0] = sol
            return
        for v in range(box.lo[i], box.hi[i] + 1):
            prefix.append(v)
            rec(i + 1, prefix, total + v)
            prefix.pop()

    rec(0, [], 0)
    if best[0] is None:
        raise RuntimeError("no valid point inside the proximity box")
    return best[0]


def cds_rounding_approx(t: TypeGraph, g: Graph) -> CdsSolution:
    """Round the relaxation: served counts go up, class sizes follow.

    x_hat_i is the smallest prefix whose capacity covers the rounded-up
    demand served by class i, then raised so every class is fully covered.
    A class whose total capacity cannot cover its rounded demand is pinned
    to full size and the relaxation is re-solved (at most k times).
    """
    model = build_cds_ilp(t)
    pairs = cds_pairs(t)
    k = t.k
    pins = set()
    while True:
        res = solve_lp(relax_model(model, pins={i: t.weights[i] for i in pins}))
        if not res.optimal:
            raise RuntimeError("domination relaxation must be feasible and bounded")
        y_hat = {p: math.ceil(res.point[k + idx]) for idx, p in enumerate(pairs)}
        need = [sum(y_hat[(i, j)] for j in sorted(t.neighbors(i))) for i in range(k)]
        fails = {
            i
            for i in range(k)
            if domination_capacity(t, i, t.weights[i]) < need[i]
        }
        new_pins = pins | fails
        if fails and new_pins != pins and len(pins) < k:
            pins = new_pins
            continue
        x_hat = []
        for i in range(k):
            ell = next(
                (
                    l
                    for l in range(t.weights[i] + 1)
                    if domination_capacity(t, i, l) >= need[i]
                ),
                t.weights[i],
            )
            x_hat.append(ell)
        for j in range(k):
            cover = sum(y_hat[(i, j)] for i in sorted(t.neighbors(j)))
            x_hat[j] = max(x_hat[j], t.weights[j] - cover)
        sol = decode_cds(t, g, tuple(x_hat))
        if sol is None:
            # unreachable for model-feasible roundings; take the full set
            sol = decode_cds(t, g, tuple(t.weights))
        return sol
