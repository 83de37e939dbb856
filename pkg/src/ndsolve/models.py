"""IP models over type graphs, and decoders back to combinatorial witnesses.

Capacitated domination comes in two equivalent flavors: a convex model whose
capacity rows bound the demand served by class i by the concave function
f_i(x_i), and a fully linear model where each concave bound is replaced by
its tangents, one per vertex of the class.

Sum coloring comes in three.  The color-indexed model has one 0/1 variable
per (class, color) pair and an n-fold row layout (bricks = colors).  The
catalog models instead count how many color classes realize each independent
set I of the type graph: the size sigma(I) of such a color class is fixed,
so sorting classes by decreasing size makes the total cost sum_j cc(y_j)
over columns j of the size histogram, where y_j counts classes of size >= j
and cc(y) = y(y+1)/2 is the cost of a column of height y.  Only the sizes in
Gamma = {sigma(I)} matter; chaining counters z_i over consecutive critical
sizes i keeps every row short, which is what the stacked (F over L) variant
exploits.

Max-q-cut counts, per class pair and part pair, the product of how many
vertices land in each side; the objective is an indefinite quadratic and the
sense is MAXIMIZE (cross edges are being counted, not avoided).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .graphs import CLIQUE, Graph, TypeGraph, domination_capacity
from .ipmodel import (
    EQ,
    GE,
    MAX,
    MIN,
    ConvexRow,
    GeneralConvex,
    IpModel,
    Linear,
    LinearRow,
    NFoldBlocks,
    Quadratic,
    SeparableConvex,
    StackedBlocks,
    dump_model,
)
from .matching import max_bipartite_matching
from .matrices import IntMatrix

__all__ = [
    "CdsSolution",
    "ColorClassCatalog",
    "DecodeError",
    "build_catalog",
    "build_cds_convex",
    "build_cds_ilp",
    "build_maxqcut",
    "build_sumcol_convex",
    "build_sumcol_graver",
    "build_sumcol_nfold",
    "column_cost",
    "decode_cds",
    "decode_coloring",
    "decode_partition",
    "dump_model",
    "split_stacked_blocks",
]


class DecodeError(ValueError):
    """A model point could not be materialized into a valid witness."""


# ---------------------------------------------------------------------------
# capacitated dominating set (models "cds")
# ---------------------------------------------------------------------------

def cds_pairs(t: TypeGraph):
    """Ordered (i, j) with j in N(i): y_ij counts vertices of class j served
    by dominators in class i."""
    return [(i, j) for i in range(t.k) for j in sorted(t.neighbors(i))]


def _cds_frame(t: TypeGraph):
    if t.sorted_capacities is None:
        raise ValueError("domination models need vertex capacities")
    k = t.k
    pairs = cds_pairs(t)
    pos = {p: k + idx for idx, p in enumerate(pairs)}
    names = [f"x_{i}" for i in range(k)] + [f"y_{i}_{j}" for i, j in pairs]
    lower = [0] * (k + len(pairs))
    upper = list(t.weights) + [
        min(t.weights[j], domination_capacity(t, i, t.weights[i])) for i, j in pairs
    ]
    rows = []
    for j in range(t.k):
        coeffs = {pos[(i, j)]: 1 for i in sorted(t.neighbors(j))}
        coeffs[j] = 1  # x_j: vertices inside the set need no dominator
        rows.append(LinearRow.make(coeffs, GE, t.weights[j]))
    return k, pairs, pos, names, lower, upper, rows


def build_cds_convex(t: TypeGraph) -> IpModel:
    """Linear objective |D|, domination rows, and one concave capacity bound
    per class kept as a convex feasibility rule."""
    k, pairs, pos, names, lower, upper, rows = _cds_frame(t)
    convex_rows = []
    for i in range(k):
        served = tuple(pos[(i, j)] for j in sorted(t.neighbors(i)))

        def fn(point, i=i, served=served):
            return sum(point[p] for p in served) - domination_capacity(t, i, point[i])

        def box_min(lo, hi, i=i, served=served):
            return sum(lo[p] for p in served) - domination_capacity(t, i, hi[i])

        convex_rows.append(ConvexRow(fn, box_min, name=f"cap_{i}"))
    return IpModel(
        sense=MIN,
        objective=Linear(tuple([1] * k + [0] * len(pairs))),
        n_vars=k + len(pairs),
        lower=tuple(lower),
        upper=tuple(upper),
        rows=tuple(rows),
        convex_rows=tuple(convex_rows),
        tag="cds",
        var_names=tuple(names),
    ).validate()


def build_cds_ilp(t: TypeGraph) -> IpModel:
    """Same variables; each concave capacity bound becomes its tangents.

    For class i with capacities c_1 >= c_2 >= ... the tangent at prefix
    length l is  sum_j y_ij <= f_i(l-1) + c_l * (x_i - l + 1),  one row per
    vertex of the class, |G| rows in total.
    """
    k, pairs, pos, names, lower, upper, rows = _cds_frame(t)
    rows = list(rows)
    for i in range(k):
        caps = t.sorted_capacities[i]
        served = [pos[(i, j)] for j in sorted(t.neighbors(i))]
        for ell in range(1, t.weights[i] + 1):
            c_l = caps[ell - 1]
            coeffs = {p: 1 for p in served}
            coeffs[i] = coeffs.get(i, 0) - c_l
            rhs = domination_capacity(t, i, ell - 1) - c_l * (ell - 1)
            rows.append(LinearRow.make(coeffs, "<=", rhs))
    return IpModel(
        sense=MIN,
        objective=Linear(tuple([1] * k + [0] * len(pairs))),
        n_vars=k + len(pairs),
        lower=tuple(lower),
        upper=tuple(upper),
        rows=tuple(rows),
        tag="cds",
        var_names=tuple(names),
    ).validate()


@dataclass(frozen=True)
class CdsSolution:
    """A dominating set plus the assignment of each outside vertex to its
    dominator; stored as a sorted tuple of (vertex, dominator) pairs."""

    dominators: frozenset
    assignment: tuple

    @property
    def size(self):
        return len(self.dominators)

    def delta(self):
        return dict(self.assignment)

    @classmethod
    def make(cls, dominators, assignment):
        return cls(frozenset(dominators), tuple(sorted(assignment.items())))


def decode_cds(t: TypeGraph, g: Graph, point) -> CdsSolution | None:
    """Materialize x into capacity-ordered prefixes and check by matching.

    Every vertex outside D must be matched to an adjacent dominator, each
    dominator v absorbing at most c(v).  Returns None when that fails.
    """
    if t.sorted_capacities is None:
        raise ValueError("decode_cds needs capacities")
    dominators = set()
    for i in range(t.k):
        x_i = point[i]
        if not 0 <= x_i <= t.weights[i]:
            raise DecodeError(f"x_{i}={x_i} outside class bounds")
        dominators.update(t.classes[i][:x_i])
    outside = sorted(v for v in range(g.n) if v not in dominators)
    adj = {v: sorted(set(g.adj[v]) & dominators) for v in outside}
    cap = {v: g.capacity[v] for v in dominators}
    size, assignment = max_bipartite_matching(outside, adj, cap)
    if size < len(outside):
        return None
    return CdsSolution.make(dominators, assignment)


# ---------------------------------------------------------------------------
# sum coloring (models "sumcol")
# ---------------------------------------------------------------------------

def column_cost(y: int) -> int:
    """Cost of one histogram column of height y: the classes crossing it
    occupy colors 1..y, contributing 1 + 2 + ... + y."""
    if y < 0:
        raise ValueError("column height must be non-negative")
    return y * (y + 1) // 2


def class_slots(t: TypeGraph, i: int) -> int:
    """How many color classes touch class i: all |V_i| for a clique, one for
    an independent class."""
    return t.weights[i] if t.kinds[i] == CLIQUE else 1


@dataclass(frozen=True)
class ColorClassCatalog:
    """Independent sets of the type graph with their color-class sizes.

    sigma[i] is the number of vertices a color class of shape sets[i]
    contains.  gamma lists the distinct sizes ("critical sizes"); succ/zeta
    follow the successor convention succ(max) = max.  gap_below[i] is
    gamma[i] - gamma[i-1] (gamma[0] for i = 0): the number of histogram
    columns whose height equals the counter of critical size gamma[i], which
    is the weight the separable objective puts on that counter.
    """

    sets: tuple
    sigma: tuple
    gamma: tuple
    succ: tuple
    zeta: tuple
    gap_below: tuple

    @property
    def size(self):
        return len(self.sets)


def build_catalog(t: TypeGraph) -> ColorClassCatalog:
    """Enumerate independent sets of the type graph (loops ignored: a clique
    class may appear, contributing a single vertex per color class)."""
    sets = []
    for members in itertools.chain.from_iterable(
        itertools.combinations(range(t.k), sz) for sz in range(1, t.k + 1)
    ):
        if all(not t.has_edge(i, j) for i, j in itertools.combinations(members, 2)):
            sets.append(members)
    sets.sort()
    sigma = tuple(sum(1 if t.kinds[i] == CLIQUE else t.weights[i] for i in s) for s in sets)
    gamma = tuple(sorted(set(sigma)))
    succ = tuple(
        gamma[idx + 1] if idx + 1 < len(gamma) else gamma[idx]
        for idx in range(len(gamma))
    )
    zeta = tuple(s - g for s, g in zip(succ, gamma))
    gap_below = tuple(
        gamma[idx] - (gamma[idx - 1] if idx else 0) for idx in range(len(gamma))
    )
    return ColorClassCatalog(tuple(sets), sigma, gamma, succ, zeta, gap_below)


def _catalog_upper_bounds(t, cat):
    return [min(class_slots(t, i) for i in s) for s in cat.sets]


def _catalog_rows(t, cat):
    rows = []
    for i in range(t.k):
        coeffs = {idx: 1 for idx, s in enumerate(cat.sets) if i in s}
        rows.append(LinearRow.make(coeffs, EQ, class_slots(t, i)))
    return rows


def build_sumcol_convex(t: TypeGraph) -> IpModel:
    """One variable per catalog entry; the cost is evaluated through the at
    most 2^k distinct column heights."""
    cat = build_catalog(t)
    n = cat.size
    rows = _catalog_rows(t, cat)
    by_size = [
        tuple(idx for idx, s in enumerate(cat.sigma) if s >= gval) for gval in cat.gamma
    ]

    def s_convex(x):
        total = 0
        for gi, members in enumerate(by_size):
            total += cat.gap_below[gi] * column_cost(sum(x[idx] for idx in members))
        return total

    return IpModel(
        sense=MIN,
        objective=GeneralConvex(s_convex, name="sumcol-column-cost"),
        n_vars=n,
        lower=tuple([0] * n),
        upper=tuple(_catalog_upper_bounds(t, cat)),
        rows=tuple(rows),
        tag="sumcol_convex",
        var_names=tuple("x_" + "".join(map(str, s)) for s in cat.sets),
    ).validate()


def build_sumcol_graver(t: TypeGraph) -> IpModel:
    """The catalog model with chained size counters z_i, i in Gamma.

    Row block F holds the covering rows (zero columns for z); block L holds
    the counter recurrence z_i = z_succ(i) + sum of x_I with sigma(I) = i,
    one row per critical size in increasing order.  The z columns are laid
    out in decreasing critical size, so each one is pinned as soon as it is
    reached in the fixed branching order.
    """
    cat = build_catalog(t)
    nx = cat.size
    gamma = cat.gamma
    kgam = len(gamma)
    zpos = {gval: nx + (kgam - 1 - gi) for gi, gval in enumerate(gamma)}
    n = nx + kgam

    rows = _catalog_rows(t, cat)  # F block
    for gi, gval in enumerate(gamma):  # L block, increasing critical size
        coeffs = {zpos[gval]: 1}
        if gi + 1 < kgam:
            coeffs[zpos[gamma[gi + 1]]] = -1
        for idx, s in enumerate(cat.sigma):
            if s == gval:
                coeffs[idx] = coeffs.get(idx, 0) - 1
        rows.append(LinearRow.make(coeffs, EQ, 0))

    ub_x = _catalog_upper_bounds(t, cat)
    ub_z = [0] * kgam
    for gi, gval in enumerate(gamma):
        ub_z[kgam - 1 - gi] = sum(
            ub_x[idx] for idx, s in enumerate(cat.sigma) if s >= gval
        )
    weight_of = {zpos[gval]: cat.gap_below[gi] for gi, gval in enumerate(gamma)}
    terms = []
    for j in range(n):
        if j < nx:
            terms.append(lambda v: 0)
        else:
            w = weight_of[j]
            terms.append(lambda v, w=w: w * column_cost(v))

    # canonical start: every class keeps to itself, one singleton color
    # class per slot
    x0 = [0] * n
    for idx, s in enumerate(cat.sets):
        if len(s) == 1:
            x0[idx] = class_slots(t, s[0])
    for gi, gval in enumerate(gamma):
        x0[zpos[gval]] = sum(
            x0[idx] for idx, s in enumerate(cat.sigma) if s >= gval
        )

    names = ["x_" + "".join(map(str, s)) for s in cat.sets]
    names += [f"z_{gval}" for gval in sorted(gamma, reverse=True)]
    return IpModel(
        sense=MIN,
        objective=SeparableConvex(tuple(terms)),
        n_vars=n,
        lower=tuple([0] * n),
        upper=tuple(ub_x + ub_z),
        rows=tuple(rows),
        stacked=StackedBlocks(f_rows=t.k, l_rows=kgam),
        tag="sumcol_graver",
        var_names=tuple(names),
        initial_point=tuple(x0),
    ).validate()


def split_stacked_blocks(model: IpModel):
    """Split a stacked sum-coloring model into its (F, L) matrices."""
    if model.stacked is None:
        raise ValueError("model carries no stacked annotation")
    full = model.matrix()
    f_rows = model.stacked.f_rows
    d_f, d_l = {}, {}
    for (r, c), v in full.entries:
        if r < f_rows:
            d_f[(r, c)] = v
        else:
            d_l[(r - f_rows, c)] = v
    return (
        IntMatrix.from_dict(f_rows, full.n, d_f),
        IntMatrix.from_dict(full.m - f_rows, full.n, d_l),
    )


def build_sumcol_nfold(t: TypeGraph, color_count: int | None = None) -> IpModel:
    """Color-indexed model: bricks are colors, each with a 0/1 variable per
    class and a slack per non-loop type edge.

    The loop rows x_i + x_i <= 1 are dropped: 0/1 bounds already say that a
    color meets a clique class at most once.
    """
    n_colors = color_count if color_count is not None else t.n
    if n_colors < 1:
        raise ValueError("need at least one color")
    k = t.k
    edges_nl = sorted(e for e in t.edges if e[0] != e[1])
    s = len(edges_nl)
    tt = k + s
    a1 = IntMatrix.from_dict(k, tt, {(i, i): 1 for i in range(k)})
    a2 = IntMatrix.from_dict(
        s,
        tt,
        {
            **{(e_idx, i): 1 for e_idx, (i, j) in enumerate(edges_nl)},
            **{(e_idx, j): 1 for e_idx, (i, j) in enumerate(edges_nl)},
            **{(e_idx, k + e_idx): 1 for e_idx in range(s)},
        },
    )
    n = n_colors * tt

    rows = []
    slots = [class_slots(t, i) for i in range(k)]
    for i in range(k):
        coeffs = {b * tt + i: 1 for b in range(n_colors)}
        rows.append(LinearRow.make(coeffs, EQ, slots[i]))
    for b in range(n_colors):
        for e_idx, (i, j) in enumerate(edges_nl):
            coeffs = {b * tt + i: 1, b * tt + j: 1, b * tt + k + e_idx: 1}
            rows.append(LinearRow.make(coeffs, EQ, 1))

    cost = [0] * n
    per_class = [1 if t.kinds[i] == CLIQUE else t.weights[i] for i in range(k)]
    for b in range(n_colors):
        for i in range(k):
            cost[b * tt + i] = (b + 1) * per_class[i]

    initial = None
    if sum(slots) <= n_colors:
        point = [0] * n
        cursor = 0
        for i in range(k):
            for _ in range(slots[i]):
                point[cursor * tt + i] = 1
                cursor += 1
        for b in range(n_colors):
            for e_idx, (i, j) in enumerate(edges_nl):
                point[b * tt + k + e_idx] = 1 - point[b * tt + i] - point[b * tt + j]
        initial = tuple(point)

    def remainder_bound(point, depth, tt=tt, k=k, per_class=per_class, slots=slots):
        # cheapest completion: each class takes its remaining colors
        # consecutively starting at the first brick still open for it
        done = [0] * k
        for p in range(depth):
            j = p % tt
            if j < k and point[p]:
                done[j] += 1
        total = 0
        for i in range(k):
            need = slots[i] - done[i]
            if need <= 0:
                continue
            first = (depth - i + tt - 1) // tt  # first brick with position >= depth
            total += per_class[i] * (need * first + need * (need + 1) // 2)
        return total

    names = []
    for b in range(n_colors):
        names += [f"x_{i}_c{b + 1}" for i in range(k)]
        names += [f"s_{i}_{j}_c{b + 1}" for (i, j) in edges_nl]
    return IpModel(
        sense=MIN,
        objective=Linear(tuple(cost)),
        n_vars=n,
        lower=tuple([0] * n),
        upper=tuple([1] * n),
        rows=tuple(rows),
        nfold=NFoldBlocks(r=k, s=s, t=tt, n=n_colors, a1=a1, a2=a2),
        tag="sumcol_nfold",
        var_names=tuple(names),
        initial_point=initial,
        remainder_bound=remainder_bound,
    ).validate()


# ---------------------------------------------------------------------------
# max-q-cut (model "maxqcut")
# ---------------------------------------------------------------------------

def build_maxqcut(t: TypeGraph, q: int) -> IpModel:
    """x_{i,a} = how many vertices of class i land in part a; maximize the
    cross products over type edges.

    A loop edge contributes x_{i,a} * x_{i,b} once per unordered part pair;
    a proper edge {i, j} contributes both orientations.
    """
    if q < 2:
        raise ValueError("need at least two parts")
    k = t.k
    n = k * q
    rows = [
        LinearRow.make({i * q + a: 1 for a in range(q)}, EQ, t.weights[i])
        for i in range(k)
    ]
    terms = []
    for a, b in itertools.combinations(range(q), 2):
        for i, j in sorted(t.edges):
            if i == j:
                terms.append((i * q + a, i * q + b, 1))
            else:
                terms.append((i * q + a, j * q + b, 1))
                terms.append((i * q + b, j * q + a, 1))
    return IpModel(
        sense=MAX,
        objective=Quadratic(tuple(sorted(terms))),
        n_vars=n,
        lower=tuple([0] * n),
        upper=tuple(t.weights[i] for i in range(k) for _ in range(q)),
        rows=tuple(rows),
        tag="maxqcut",
        var_names=tuple(f"x_{i}_p{a + 1}" for i in range(k) for a in range(q)),
    ).validate()


# ---------------------------------------------------------------------------
# decoders
# ---------------------------------------------------------------------------

def _is_proper(g: Graph, coloring) -> bool:
    return all(v in coloring and coloring[v] >= 1 for v in range(g.n)) and all(
        coloring[u] != coloring[v] for u, v in g.edges
    )


def decode_coloring(t: TypeGraph, g: Graph, point, model_tag: str) -> dict:
    """Materialize a model point into a proper coloring of g.

    Catalog points order their color classes by decreasing size before
    assigning color numbers; within a clique class, vertices are consumed in
    class order.  The result is re-checked against g.
    """
    coloring = {}
    cursors = [0] * t.k  # next unused vertex per clique class

    def give(i, color):
        if t.kinds[i] == CLIQUE:
            if cursors[i] >= t.weights[i]:
                raise DecodeError(f"class {i} used more colors than vertices")
            coloring[t.classes[i][cursors[i]]] = color
            cursors[i] += 1
        else:
            for v in t.classes[i]:
                if v in coloring:
                    raise DecodeError(f"independent class {i} colored twice")
                coloring[v] = color

    if model_tag == "sumcol_nfold":
        edges_nl = sorted(e for e in t.edges if e[0] != e[1])
        tt = t.k + len(edges_nl)
        n_colors = len(point) // tt
        for b in range(n_colors):
            for i in range(t.k):
                if point[b * tt + i]:
                    give(i, b + 1)
    elif model_tag in ("sumcol_convex", "sumcol_graver"):
        cat = build_catalog(t)
        classes = []
        for idx, s in enumerate(cat.sets):
            mult = point[idx]
            if mult < 0:
                raise DecodeError("negative multiplicity")
            classes += [(cat.sigma[idx], s)] * mult
        classes.sort(key=lambda it: (-it[0], it[1]))
        for color, (_, members) in enumerate(classes, start=1):
            for i in members:
                give(i, color)
    else:
        raise DecodeError(f"unknown sum-coloring model tag {model_tag!r}")

    if not _is_proper(g, coloring):
        raise DecodeError("decoded point is not a proper coloring")
    return coloring


def decode_partition(t: TypeGraph, g: Graph, point) -> dict:
    """Materialize a max-q-cut point: the first x_{i,1} vertices of class i
    go to part 1, and so on."""
    q = len(point) // t.k if t.k else 0
    partition = {}
    for i in range(t.k):
        counts = point[i * q : (i + 1) * q]
        if sum(counts) != t.weights[i] or any(c < 0 for c in counts):
            raise DecodeError(f"counts for class {i} do not partition it")
        at = 0
        for part, c in enumerate(counts, start=1):
            for v in t.classes[i][at : at + c]:
                partition[v] = part
            at += c
    return partition
