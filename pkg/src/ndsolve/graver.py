"""Conformal order, Graver bases, and Graver-best iterative augmentation.

The Graver basis of an integer matrix A is the set of conformally minimal
non-zero integer kernel vectors: x is conformal to y when they lie in the
same orthant and |x_i| <= |y_i| coordinatewise.  Two computation routes are
provided:

* a bounded enumeration (all kernel vectors with infinity-norm <= cap,
  filtered to minimal ones), certified complete by a decomposition pass one
  norm level above the cap;
* a completion procedure in the style of Pottier's normal-form algorithm,
  which starts from a lattice basis of the kernel and closes the set under
  conformal reduction of pairwise sums; this one is always complete.

Optimization over a fixed matrix proceeds by iterative augmentation: from a
feasible point, repeatedly apply the best improving step lambda * g with g a
basis element; absence of such a step certifies global optimality for
linear and separable convex objectives.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .errors import BudgetError, IncompleteBasisError
from .matrices import IntMatrix


def conformal(x, y) -> bool:
    """True when x and y lie in the same orthant and |x| <= |y| coordinatewise."""
    if len(x) != len(y):
        raise ValueError("vector lengths differ")
    return all(a * b >= 0 and abs(a) <= abs(b) for a, b in zip(x, y))


def _l1(v):
    return sum(abs(a) for a in v)


def _neg(v):
    return tuple(-a for a in v)


def _add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


# ---------------------------------------------------------------------------
# kernel lattice
# ---------------------------------------------------------------------------

def kernel_lattice_basis(a: IntMatrix):
    """Integer lattice basis of {x : Ax = 0}, by unimodular column reduction.

    Column operations are mirrored on an identity matrix; once every row has
    at most one non-zero among the still-active columns, the active columns
    of the transform are a basis of the kernel lattice.
    """
    m, n = a.m, a.n
    work = a.to_rows()
    trans = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    active = list(range(n))
    for r in range(m):
        while True:
            nz = [j for j in active if work[r][j] != 0]
            if len(nz) <= 1:
                break
            j0 = min(nz, key=lambda j: (abs(work[r][j]), j))
            for j in nz:
                if j == j0:
                    continue
                q = work[r][j] // work[r][j0]
                if q:
                    for i in range(m):
                        work[i][j] -= q * work[i][j0]
                    for i in range(n):
                        trans[i][j] -= q * trans[i][j0]
        nz = [j for j in active if work[r][j] != 0]
        if nz:
            active.remove(nz[0])
    return [tuple(trans[i][j] for i in range(n)) for j in active]


# ---------------------------------------------------------------------------
# basis computation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GraverBasis:
    """A set of kernel vectors closed under negation, minimal among themselves.

    ``complete`` records whether the set is certified to be the whole Graver
    basis; norm queries refuse to answer for uncertified sets.
    """

    matrix: IntMatrix
    elements: frozenset
    complete: bool

    def __len__(self):
        return len(self.elements)

    def validate(self):
        """Re-check the definitional invariants (used by tests)."""
        for v in self.elements:
            if any(self.matrix.mul_vec(list(v))) or not any(v):
                raise AssertionError("element not a non-zero kernel vector")
            if _neg(v) not in self.elements:
                raise AssertionError("not closed under negation")
        for v in self.elements:
            for u in self.elements:
                if u != v and conformal(u, v):
                    raise AssertionError("stored element dominated by another")


def _minimal_filter(vectors):
    """Keep the conformally minimal vectors (dominators have smaller l1)."""
    out = []
    for v in sorted(set(vectors), key=lambda v: (_l1(v), v)):
        if not any(conformal(u, v) for u in out):
            out.append(v)
    return out


def _kernel_vectors_within(a: IntMatrix, cap: int, max_nodes: int):
    """All non-zero kernel vectors with infinity-norm <= cap (DFS per column)."""
    m, n = a.m, a.n
    rows = a.to_rows()
    # slack[r][d]: largest |contribution| columns d.. can still make to row r
    slack = [[0] * (n + 1) for _ in range(m)]
    for r in range(m):
        for d in range(n - 1, -1, -1):
            slack[r][d] = slack[r][d + 1] + abs(rows[r][d]) * cap
    partial = [0] * m
    vec = [0] * n
    out = []
    nodes = 0

    def dfs(d):
        nonlocal nodes
        nodes += 1
        if nodes > max_nodes:
            raise BudgetError("kernel enumeration budget exceeded")
        if any(abs(partial[r]) > slack[r][d] for r in range(m)):
            return
        if d == n:
            if any(vec):
                out.append(tuple(vec))
            return
        for val in range(-cap, cap + 1):
            vec[d] = val
            for r in range(m):
                partial[r] += rows[r][d] * val
            dfs(d + 1)
            for r in range(m):
                partial[r] -= rows[r][d] * val
        vec[d] = 0

    dfs(0)
    return out


def _conformal_normal_form(s, basis_list):
    """Greedily subtract conformal elements; the remainder is the normal form."""
    while any(s):
        for g in basis_list:
            if conformal(g, s):
                s = _sub(s, g)
                break
        else:
            return s
    return s


def _pottier_completion(a: IntMatrix, max_elements: int):
    """Close a kernel lattice basis under conformal reduction of sums."""
    gens = [v for v in kernel_lattice_basis(a) if any(v)]
    basis = []
    seen = set()

    def push(v):
        if v not in seen:
            basis.append(v)
            seen.add(v)
            if len(basis) > max_elements:
                raise BudgetError("Graver completion budget exceeded")

    for v in gens:
        push(v)
        push(_neg(v))

    queue = []  # pairwise sums, smallest l1 first
    in_queue = set()

    def enqueue_sums(v):
        for g in list(basis):
            s = _add(v, g)
            if not any(s) or s in in_queue:
                continue
            # reducible by an addend means normal form 0; skip early
            if conformal(v, s) or conformal(g, s):
                continue
            in_queue.add(s)
            heapq.heappush(queue, (_l1(s), s))

    for v in list(basis):
        enqueue_sums(v)

    while queue:
        _, s = heapq.heappop(queue)
        r = _conformal_normal_form(s, basis)
        if any(r):
            push(r)
            push(_neg(r))
            enqueue_sums(r)
            enqueue_sums(_neg(r))

    return _minimal_filter(basis)


def _closure_certificate(a: IntMatrix, elems) -> bool:
    """Conclusive completeness check for a candidate symmetric minimal set.

    The set is the whole Graver basis iff every kernel lattice generator and
    every pairwise sum of elements conformally reduces to zero over it (the
    termination criterion of the completion procedure).
    """
    elems = sorted(elems)
    for gen in kernel_lattice_basis(a):
        if any(_conformal_normal_form(gen, elems)):
            return False
    for f in elems:
        for g in elems:
            s = _add(f, g)
            if any(s) and any(_conformal_normal_form(s, elems)):
                return False
    return True


def graver_basis(
    a: IntMatrix,
    norm_cap: int | None = None,
    max_elements: int = 200_000,
    max_nodes: int = 20_000_000,
) -> GraverBasis:
    """Compute the Graver basis of a.

    With ``norm_cap`` the basis is found by exhaustive enumeration up to the
    cap, then certified: every kernel vector one norm level above the cap
    must conformally decompose over it, and the closure certificate must
    hold (the decomposition pass alone is vacuous when the enlarged box
    contains no kernel vectors at all).  A failed certificate yields
    ``complete=False`` rather than a silently truncated basis.  Without a
    cap the completion procedure runs, which is always complete.  Exceeding
    ``max_elements``/``max_nodes`` raises BudgetError.
    """
    if a.n == 0:
        return GraverBasis(a, frozenset(), True)
    if norm_cap is None:
        elems = _pottier_completion(a, max_elements)
        return GraverBasis(a, frozenset(elems), True)
    if norm_cap < 1:
        raise ValueError("norm_cap must be at least 1")
    vecs = _kernel_vectors_within(a, norm_cap, max_nodes)
    elems = _minimal_filter(vecs)
    if len(elems) > max_elements:
        raise BudgetError("Graver basis size budget exceeded")
    complete = all(
        not any(_conformal_normal_form(v, elems))
        for v in _kernel_vectors_within(a, norm_cap + 1, max_nodes)
    ) and _closure_certificate(a, elems)
    return GraverBasis(a, frozenset(elems), complete)


def _require_complete(b: GraverBasis):
    if not b.complete:
        raise IncompleteBasisError("operation requires a certified-complete basis")


def g1_norm(b: GraverBasis) -> int:
    """Largest l1-norm over the basis (0 for a trivial kernel)."""
    _require_complete(b)
    return max((_l1(v) for v in b.elements), default=0)


def g_inf_norm(b: GraverBasis) -> int:
    """Largest infinity-norm over the basis."""
    _require_complete(b)
    return max((max(abs(x) for x in v) for v in b.elements), default=0)


# ---------------------------------------------------------------------------
# augmentation
# ---------------------------------------------------------------------------

def _smallest_minimizer(phi, lam_max: int) -> int:
    """Smallest integer minimizer of a convex phi on [1, lam_max].

    Doubling brackets the minimizer, bisection on the discrete slope pins it.
    """
    hi = 1
    while hi < lam_max and phi(min(2 * hi, lam_max)) < phi(hi):
        hi = min(2 * hi, lam_max)
    lo = 1
    while lo < hi:
        mid = (lo + hi) // 2
        if phi(mid + 1) >= phi(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def graver_best_step(a: IntMatrix, basis: GraverBasis, x, f, bounds):
    """Best augmenting pair (g, lambda), or None when x is Graver-optimal.

    f must be linear or separable convex so that f(x + lambda*g) is convex
    in lambda.  Ties on improvement go to the lexicographically smallest g
    (and then the smallest lambda).
    """
    lower, upper = bounds
    if any(not lower[i] <= x[i] <= upper[i] for i in range(len(x))):
        raise ValueError("point violates variable bounds")
    fx = f(x)
    best = None  # (improvement, g, lam)
    for g in sorted(basis.elements):
        lam_max = None
        for i, gi in enumerate(g):
            if gi > 0:
                room = (upper[i] - x[i]) // gi
            elif gi < 0:
                room = (x[i] - lower[i]) // (-gi)
            else:
                continue
            lam_max = room if lam_max is None else min(lam_max, room)
        if lam_max is None or lam_max < 1:
            continue
        cache = {}

        def phi(lam, g=g):
            if lam not in cache:
                cache[lam] = f(tuple(xi + lam * gi for xi, gi in zip(x, g)))
            return cache[lam]

        lam = _smallest_minimizer(phi, lam_max)
        gain = fx - phi(lam)
        if gain > 0 and (best is None or gain > best[0]):
            best = (gain, g, lam)
    if best is None:
        return None
    return best[1], best[2]


@dataclass(frozen=True)
class AugmentResult:
    point: tuple
    value: object
    steps: int


def augment_to_optimum(a: IntMatrix, x0, f, bounds, basis=None, max_steps=100_000) -> AugmentResult:
    """Apply Graver-best steps until none improves; the fixpoint is optimal."""
    if basis is None:
        basis = graver_basis(a)
    _require_complete(basis)
    x = tuple(x0)
    steps = 0
    while True:
        move = graver_best_step(a, basis, x, f, bounds)
        if move is None:
            return AugmentResult(x, f(x), steps)
        g, lam = move
        x = tuple(xi + lam * gi for xi, gi in zip(x, g))
        steps += 1
        if steps > max_steps:
            raise BudgetError("augmentation step budget exceeded")


# ---------------------------------------------------------------------------
# stacked matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StackingReport:
    g1_stack: int
    g1_lower: int
    g1_projected: int
    bound: int
    holds: bool


def stacking_check(f: IntMatrix, l: IntMatrix, max_elements: int = 200_000) -> StackingReport:
    """Compare g1(stack(F, L)) against the product bound g1(F.G(L)) * g1(L).

    F.G(L) is the matrix whose columns are F applied to the Graver basis
    elements of L (duplicates collapsed).
    """
    if f.n != l.n:
        raise ValueError("column counts differ")
    basis_stack = graver_basis(f.stack(l), max_elements=max_elements)
    basis_l = graver_basis(l, max_elements=max_elements)
    cols = sorted(set(tuple(f.mul_vec(list(g))) for g in basis_l.elements))
    projected = IntMatrix.from_dict(
        f.m, len(cols), {(r, j): col[r] for j, col in enumerate(cols) for r in range(f.m) if col[r]}
    )
    basis_projected = graver_basis(projected, max_elements=max_elements)
    g1_stack = g1_norm(basis_stack)
    g1_l = g1_norm(basis_l)
    g1_p = g1_norm(basis_projected)
    bound = g1_p * g1_l
    return StackingReport(g1_stack, g1_l, g1_p, bound, g1_stack <= bound)
