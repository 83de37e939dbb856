"""Exact finite-domain IP backends.

solve_boxed is a depth-first branch-and-bound over the variable boxes in
index order with ascending values, so the first point attaining the optimal
value is the lexicographically smallest optimum.  Feasibility pruning uses
per-row interval arithmetic over the unassigned suffix (precomputed, since
the assignment order is fixed).  Objective pruning depends on the form:
suffix minima for linear and separable convex objectives, an optional exact
LP bound for linear objectives, and nothing at all (pure enumeration) for
quadratic and general convex objectives.

solve_nfold runs iterative augmentation on models with an n-fold block
annotation.  Each step is found by dynamic programming over bricks: the
per-brick candidate moves are the A2-kernel vectors with infinity-norm at
most g_inf(A2), the DP state is the running partial sum of A1 times the
chosen moves, and a step is accepted only when the total A1-sum is zero,
bounds hold, and the objective strictly decreases.  Step lengths are scaled
by doubling, as in the Graver-best search.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetError
from .graver import augment_to_optimum, g_inf_norm, graver_basis, _kernel_vectors_within
from .ipmodel import EQ, GE, LE, MIN, IpModel, Linear, SeparableConvex
from .lp import LpProblem, solve_lp


@dataclass(frozen=True)
class Budget:
    max_nodes: int = 50_000_000
    max_dp_states: int = 2_000_000
    max_steps: int = 100_000


@dataclass(frozen=True)
class SolveResult:
    status: str  # "optimal" | "infeasible"
    point: tuple | None
    value: object
    nodes: int

    @property
    def optimal(self):
        return self.status == "optimal"


def _floor_div(a, b):
    return a // b


def _ceil_div(a, b):
    return -((-a) // b)


def _unary_min(f, lo, hi):
    """Minimum of a convex integer function on [lo, hi] by slope bisection."""
    a, b = lo, hi
    while a < b:
        mid = (a + b) // 2
        if f(mid + 1) >= f(mid):
            b = mid
        else:
            a = mid + 1
    return f(a)


def solve_boxed(model: IpModel, budget: Budget | None = None, lp_prune="auto") -> SolveResult:
    """Exact optimum over the box by depth-first branch-and-bound.

    Returns the lexicographically smallest optimal point; raises BudgetError
    when the node budget runs out.
    """
    model.validate()
    budget = budget or Budget()
    n = model.n_vars
    lower, upper = model.lower, model.upper
    obj = model.objective
    minimize = model.sense == MIN

    # Incremental objective machinery, in minimize orientation.
    if isinstance(obj, Linear):
        coeffs = obj.coeffs if minimize else tuple(-c for c in obj.coeffs)
        contrib = [None] * n
        for j in range(n):
            c = coeffs[j]
            contrib[j] = (lambda v, c=c: c * v)
        has_partial = True
    elif isinstance(obj, SeparableConvex):
        if minimize:
            contrib = list(obj.terms)
        else:
            contrib = [(lambda v, f=f: -f(v)) for f in obj.terms]
        has_partial = True
    else:
        contrib = None
        has_partial = False

    if has_partial:
        suffix_min = [0] * (n + 1)
        for j in range(n - 1, -1, -1):
            suffix_min[j] = suffix_min[j + 1] + _unary_min(contrib[j], lower[j], upper[j])
    else:
        suffix_min = None

    # Row machinery: activity plus precomputed suffix ranges per depth.
    rows = model.rows
    for row in rows:
        if not row.coeffs:  # constant row, never reached by interval checks
            lhs = 0
            ok = (
                (row.rel == LE and lhs <= row.rhs)
                or (row.rel == GE and lhs >= row.rhs)
                or (row.rel == EQ and lhs == row.rhs)
            )
            if not ok:
                return SolveResult("infeasible", None, None, 0)
    m = len(rows)
    rows_by_var = [[] for _ in range(n)]
    for r, row in enumerate(rows):
        for i, c in row.coeffs:
            rows_by_var[i].append((r, c))
    rmin = [[0] * (n + 1) for _ in range(m)]
    rmax = [[0] * (n + 1) for _ in range(m)]
    for r, row in enumerate(rows):
        cmap = dict(row.coeffs)
        for j in range(n - 1, -1, -1):
            c = cmap.get(j, 0)
            alo = min(c * lower[j], c * upper[j])
            ahi = max(c * lower[j], c * upper[j])
            rmin[r][j] = rmin[r][j + 1] + alo
            rmax[r][j] = rmax[r][j + 1] + ahi

    use_lp = isinstance(obj, Linear) and (
        lp_prune is True or (lp_prune == "auto" and 0 < n <= 30 and m > 0)
    )
    lp_depth = max(1, min(6, n // 3)) if use_lp else 0
    if use_lp:
        lp_cons = tuple(
            (
                tuple(dict(row.coeffs).get(j, 0) for j in range(n)),
                row.rel,
                row.rhs,
            )
            for row in rows
        )
        lp_obj = coeffs

    def lp_bound(lo, hi):
        res = solve_lp(LpProblem.make(MIN, lp_obj, lp_cons, lower=lo, upper=hi))
        if res.status == "infeasible":
            return None
        # integer objective on integer points: round the bound up
        v = res.value
        return -((-v.numerator) // v.denominator) if isinstance(v, Fraction) else v

    acts = [0] * m
    point = [0] * n
    lo_box = list(lower)
    hi_box = list(upper)
    nodes = 0
    best_val = None
    best_pt = None

    def rec(depth, partial):
        nonlocal nodes, best_val, best_pt
        nodes += 1
        if nodes > budget.max_nodes:
            raise BudgetError("branch-and-bound node budget exceeded")
        if depth == n:
            for cr in model.convex_rows:
                if cr.fn(point) > 0:
                    return
            if has_partial:
                val = partial
            else:
                val = obj.value(point) if minimize else -obj.value(point)
            if best_val is None or val < best_val:
                best_val = val
                best_pt = tuple(point)
            return

        vlo, vhi = lower[depth], upper[depth]
        for r, c in rows_by_var[depth]:
            row = rows[r]
            rest_lo = rmin[r][depth + 1]
            rest_hi = rmax[r][depth + 1]
            base = row.rhs - acts[r]
            if row.rel != GE:  # upper side: c*v <= base - rest_lo
                room = base - rest_lo
                if c > 0:
                    vhi = min(vhi, _floor_div(room, c))
                else:
                    vlo = max(vlo, _ceil_div(room, c))
            if row.rel != LE:  # lower side: c*v >= base - rest_hi
                need = base - rest_hi
                if c > 0:
                    vlo = max(vlo, _ceil_div(need, c))
                else:
                    vhi = min(vhi, _floor_div(need, c))
        if vlo > vhi:
            return

        if use_lp and 1 <= depth <= lp_depth and best_val is not None:
            b = lp_bound(lo_box, hi_box)
            if b is None or b >= best_val:
                return

        for v in range(vlo, vhi + 1):
            for r, c in rows_by_var[depth]:
                acts[r] += c * v
            point[depth] = v
            lo_box[depth] = hi_box[depth] = v
            ok = True
            if has_partial:
                newpartial = partial + contrib[depth](v)
                bound = newpartial + suffix_min[depth + 1]
                if model.remainder_bound is not None:
                    # hook: admissible bound on the minimize-oriented suffix,
                    # reading only point[:depth+1]
                    bound = max(bound, newpartial + model.remainder_bound(point, depth + 1))
                if best_val is not None and bound >= best_val:
                    ok = False
            else:
                newpartial = partial
            if ok:
                for cr in model.convex_rows:
                    if cr.box_min(lo_box, hi_box) > 0:
                        ok = False
                        break
            if ok:
                rec(depth + 1, newpartial)
            for r, c in rows_by_var[depth]:
                acts[r] -= c * v
            lo_box[depth] = lower[depth]
            hi_box[depth] = upper[depth]

    rec(0, 0)
    if best_val is None:
        return SolveResult("infeasible", None, None, nodes)
    value = best_val if minimize else -best_val
    return SolveResult("optimal", best_pt, value, nodes)


# ---------------------------------------------------------------------------
# n-fold augmentation backend
# ---------------------------------------------------------------------------

def _brick_objective(model: IpModel):
    """Per-variable evaluation rules in minimize orientation."""
    obj = model.objective
    minimize = model.sense == MIN
    if isinstance(obj, Linear):
        fns = [(lambda v, c=c: c * v) for c in obj.coeffs]
    elif isinstance(obj, SeparableConvex):
        fns = list(obj.terms)
    else:
        raise ValueError("n-fold backend needs a linear or separable convex objective")
    if not minimize:
        fns = [(lambda v, f=f: -f(v)) for f in fns]
    return fns


def _initial_point(model: IpModel, budget: Budget):
    if model.initial_point is not None:
        return model.initial_point
    # fall back to a feasibility search; desk-scale but explicit
    feas = IpModel(
        sense=MIN,
        objective=Linear(tuple([0] * model.n_vars)),
        n_vars=model.n_vars,
        lower=model.lower,
        upper=model.upper,
        rows=model.rows,
        convex_rows=model.convex_rows,
    )
    res = solve_boxed(feas, budget=budget, lp_prune=False)
    return res.point if res.optimal else None


def solve_nfold(model: IpModel, budget: Budget | None = None) -> SolveResult:
    """Augmentation over the n-fold block structure.

    The candidate per-brick moves are all h with A2 h = 0 and
    ||h||_inf <= g_inf(A2); the DP accepts a combined step only when the
    A1-contributions cancel.  Acceptance needs a strict objective decrease,
    so the loop terminates; the fixpoint is returned as the optimum.
    """
    model.validate()
    if model.nfold is None:
        raise ValueError("model carries no n-fold annotation")
    budget = budget or Budget()
    nf = model.nfold
    fns = _brick_objective(model)
    lower, upper = model.lower, model.upper

    x = _initial_point(model, budget)
    if x is None:
        return SolveResult("infeasible", None, None, 0)
    x = list(x)

    basis2 = graver_basis(nf.a2)
    cap = g_inf_norm(basis2)
    moves = [tuple([0] * nf.t)]
    if cap > 0:
        moves += _kernel_vectors_within(nf.a2, cap, 50_000_000)
    moves.sort()
    a1_rows = nf.a1.to_rows()
    a1h = {h: tuple(sum(r[j] * h[j] for j in range(nf.t)) for r in a1_rows) for h in moves}
    state_cap = nf.r * nf.n * max(cap, 1) * max(nf.a1.max_abs(), 1)
    lam_top = max((upper[j] - lower[j] for j in range(model.n_vars)), default=0)

    def brick_candidates(lam):
        """Per brick: projected move -> (delta, move), keeping the best delta."""
        per_brick = []
        for b in range(nf.n):
            base = b * nf.t
            cands = {}
            for h in moves:
                delta = 0
                ok = True
                for j in range(nf.t):
                    if h[j]:
                        v = x[base + j] + lam * h[j]
                        if not lower[base + j] <= v <= upper[base + j]:
                            ok = False
                            break
                        delta += fns[base + j](v) - fns[base + j](x[base + j])
                if not ok:
                    continue
                key = a1h[h]
                if key not in cands or delta < cands[key][0]:
                    cands[key] = (delta, h)
            per_brick.append(cands)
        return per_brick

    def best_step(lam):
        """DP over bricks; best strict improvement reaching total A1-sum zero."""
        per_brick = brick_candidates(lam)
        if all(
            len(c) == 1 and next(iter(c.values()))[0] >= 0 for c in per_brick
        ):
            return None  # every brick is pinned to a non-improving move
        zero = tuple([0] * nf.r)
        layers = []
        states = {zero: 0}
        for b in range(nf.n):
            nxt = {}
            back = {}
            for sigma in sorted(states):
                sdelta = states[sigma]
                for key in sorted(per_brick[b]):
                    delta, h = per_brick[b][key]
                    new = tuple(a + d for a, d in zip(sigma, key))
                    if any(abs(v) > state_cap for v in new):
                        continue
                    cand = sdelta + delta
                    if new not in nxt or cand < nxt[new]:
                        nxt[new] = cand
                        back[new] = (sigma, h)
            if len(nxt) > budget.max_dp_states:
                raise BudgetError("n-fold DP state budget exceeded")
            layers.append(back)
            states = nxt
        if zero not in states or states[zero] >= 0:
            return None
        movesback = []
        sigma = zero
        for b in range(nf.n - 1, -1, -1):
            prev, h = layers[b][sigma]
            movesback.append(h)
            sigma = prev
        movesback.reverse()
        return states[zero], movesback

    steps = 0
    while True:
        best = None
        lam = 1
        while lam <= max(lam_top, 1):
            found = best_step(lam)
            if found is not None and (best is None or found[0] < best[0]):
                best = (found[0], lam, found[1])
            lam *= 2
            if lam_top == 0:
                break
        if best is None:
            break
        _, lam, bricks = best
        for b, h in enumerate(bricks):
            base = b * nf.t
            for j in range(nf.t):
                if h[j]:
                    x[base + j] += lam * h[j]
        steps += 1
        if steps > budget.max_steps:
            raise BudgetError("n-fold augmentation step budget exceeded")

    value = model.objective_value(tuple(x))
    return SolveResult("optimal", tuple(x), value, steps)


# ---------------------------------------------------------------------------
# explicit Graver augmentation backend
# ---------------------------------------------------------------------------

_BASIS_CACHE = {}


def cached_graver_basis(matrix, max_elements=200_000):
    """Completion-computed basis, memoized on the exact matrix."""
    key = (matrix.m, matrix.n, matrix.entries)
    hit = _BASIS_CACHE.get(key)
    if hit is None:
        hit = _BASIS_CACHE[key] = graver_basis(matrix, max_elements=max_elements)
    return hit


def clear_graver_cache():
    _BASIS_CACHE.clear()


def solve_augment(model: IpModel, budget: Budget | None = None) -> SolveResult:
    """Graver-best augmentation over the model's full constraint matrix.

    Needs equality rows only and a linear or separable convex objective.
    The basis is computed by the completion procedure (and cached: models
    built from the same type-graph shape share their matrix).
    """
    model.validate()
    budget = budget or Budget()
    if any(row.rel != EQ for row in model.rows) or model.convex_rows:
        raise ValueError("augmentation needs a pure equality standard form")
    obj = model.objective
    minimize = model.sense == MIN
    if isinstance(obj, (Linear, SeparableConvex)):
        f = obj.value if minimize else (lambda p: -obj.value(p))
    else:
        raise ValueError("augmentation needs a linear or separable convex objective")

    x0 = _initial_point(model, budget)
    if x0 is None:
        return SolveResult("infeasible", None, None, 0)
    matrix = model.matrix()
    basis = cached_graver_basis(matrix)
    res = augment_to_optimum(
        matrix, x0, f, (model.lower, model.upper), basis=basis, max_steps=budget.max_steps
    )
    value = res.value if minimize else -res.value
    return SolveResult("optimal", res.point, value, res.steps)
