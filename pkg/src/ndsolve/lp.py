"""Exact rational linear programming via two-phase simplex with Bland's rule.

All arithmetic is over fractions.Fraction, so reported optima are exact and
the three outcomes (optimal / infeasible / unbounded) are decided without
tolerances.  Bland's pivoting rule (smallest eligible index enters, ties on
the ratio test broken by smallest basic variable) guarantees termination.
Deliberately dense-tableau and unoptimized: these LPs have tens of rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

LE, EQ, GE = "<=", "=", ">="


@dataclass(frozen=True)
class LpConstraint:
    coeffs: tuple
    rel: str
    rhs: Fraction

    @classmethod
    def make(cls, coeffs, rel, rhs):
        if rel not in (LE, EQ, GE):
            raise ValueError(f"unknown relation {rel!r}")
        return cls(tuple(Fraction(c) for c in coeffs), rel, Fraction(rhs))


@dataclass(frozen=True)
class LpProblem:
    """min/max objective . x subject to rows and per-variable bounds.

    Bounds may be None for unbounded-in-that-direction variables.
    """

    sense: str
    objective: tuple
    constraints: tuple
    lower: tuple
    upper: tuple

    @classmethod
    def make(cls, sense, objective, constraints, lower=None, upper=None):
        n = len(objective)
        if sense not in ("min", "max"):
            raise ValueError("sense must be 'min' or 'max'")
        obj = tuple(Fraction(c) for c in objective)
        cons = tuple(
            c if isinstance(c, LpConstraint) else LpConstraint.make(*c)
            for c in constraints
        )
        for c in cons:
            if len(c.coeffs) != n:
                raise ValueError("constraint dimension mismatch")
        lo = tuple((None if l is None else Fraction(l)) for l in (lower or [0] * n))
        hi = tuple((None if u is None else Fraction(u)) for u in (upper or [None] * n))
        if len(lo) != n or len(hi) != n:
            raise ValueError("bound dimension mismatch")
        return cls(sense, obj, cons, lo, hi)

    @property
    def n(self):
        return len(self.objective)


@dataclass(frozen=True)
class LpResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    point: tuple | None = None
    value: Fraction | None = None

    @property
    def optimal(self):
        return self.status == "optimal"


INFEASIBLE = LpResult("infeasible")
UNBOUNDED = LpResult("unbounded")


def _pivot(tab, basis, r, c):
    """Row-reduce the tableau so column c becomes the unit vector of row r."""
    prow = tab[r]
    piv = prow[c]
    inv = Fraction(1) / piv
    tab[r] = [x * inv for x in prow]
    prow = tab[r]
    for i, row in enumerate(tab):
        if i != r and row[c]:
            f = row[c]
            tab[i] = [a - f * b for a, b in zip(row, prow)]
    basis[r] = c


def _bland_min(tab, basis, cost, ncols):
    """Minimize cost (a mutable reduced-cost row, rhs last) over the tableau.

    Returns "optimal" or "unbounded"; tab/basis/cost are updated in place.
    """
    m = len(tab)
    while True:
        enter = next((j for j in range(ncols) if cost[j] < 0), None)
        if enter is None:
            return "optimal"
        leave, best = None, None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:
            return "unbounded"
        _pivot(tab, basis, leave, enter)
        f = cost[enter]
        cost[:] = [a - f * b for a, b in zip(cost, tab[leave])]


def solve_lp(p: LpProblem) -> LpResult:
    """Solve exactly; the returned point is re-substituted as a self-check."""
    n = p.n
    minimize = p.sense == "min"
    obj = list(p.objective) if minimize else [-c for c in p.objective]

    # Substitute variables so everything is >= 0:
    #   finite lower l:        x = l + z          (upper becomes a row)
    #   upper only:            x = u - z
    #   free:                  x = z+ - z-
    cols = []      # per structural variable: ("shift", j, l) | ("flip", j, u) | ("split", j, j2)
    col_cost = []
    const = Fraction(0)
    extra_rows = []  # (dense-coeffs-over-z, rel, rhs) for finite upper bounds
    for j in range(n):
        l, u = p.lower[j], p.upper[j]
        if l is not None:
            cols.append(("shift", len(col_cost), l))
            col_cost.append(obj[j])
            const += obj[j] * l
            if u is not None:
                extra_rows.append((len(col_cost) - 1, u - l))
        elif u is not None:
            cols.append(("flip", len(col_cost), u))
            col_cost.append(-obj[j])
            const += obj[j] * u
        else:
            cols.append(("split", len(col_cost), len(col_cost) + 1))
            col_cost.append(obj[j])
            col_cost.append(-obj[j])

    rows = []
    for con in p.constraints:
        dense = [Fraction(0)] * len(col_cost)
        rhs = con.rhs
        for j, a in enumerate(con.coeffs):
            if not a:
                continue
            kind, z1, arg = cols[j]
            if kind == "shift":
                dense[z1] += a
                rhs -= a * arg
            elif kind == "flip":
                dense[z1] -= a
                rhs -= a * arg
            else:
                dense[z1] += a
                dense[arg] -= a
        rows.append((dense, con.rel, rhs))
    for z, ub in extra_rows:
        dense = [Fraction(0)] * len(col_cost)
        dense[z] = Fraction(1)
        rows.append((dense, LE, ub))

    # Slack variables, then one artificial per row (rhs made non-negative).
    nz = len(col_cost)
    nslack = sum(1 for _, rel, _ in rows if rel != EQ)
    m = len(rows)
    ncols = nz + nslack + m
    tab = []
    s = 0
    for i, (dense, rel, rhs) in enumerate(rows):
        row = dense + [Fraction(0)] * (nslack + m) + [rhs]
        if rel == LE:
            row[nz + s] = Fraction(1)
            s += 1
        elif rel == GE:
            row[nz + s] = Fraction(-1)
            s += 1
        if row[-1] < 0:
            row = [-x for x in row]
        row[nz + nslack + i] = Fraction(1)
        tab.append(row)
    basis = [nz + nslack + i for i in range(m)]

    # Phase 1: minimize the sum of artificials.
    cost1 = [Fraction(0)] * (ncols + 1)
    for i in range(m):
        cost1 = [a - b for a, b in zip(cost1, tab[i])]
    for j in range(nz + nslack, ncols):
        cost1[j] = Fraction(0)
    if _bland_min(tab, basis, cost1, ncols) != "optimal" or -cost1[-1] != 0:
        return INFEASIBLE

    # Drive leftover artificials out of the basis; drop redundant rows.
    keep = []
    for i in range(m):
        if basis[i] >= nz + nslack:
            c = next((j for j in range(nz + nslack) if tab[i][j] != 0), None)
            if c is None:
                continue  # redundant row
            _pivot(tab, basis, i, c)
        keep.append(i)
    tab = [tab[i] for i in keep]
    basis = [basis[i] for i in keep]
    ncols = nz + nslack
    tab = [row[:ncols] + [row[-1]] for row in tab]

    # Phase 2.
    cost2 = [Fraction(c) for c in col_cost] + [Fraction(0)] * (nslack + 1)
    for i, b in enumerate(basis):
        if cost2[b]:
            f = cost2[b]
            cost2 = [a - f * v for a, v in zip(cost2, tab[i])]
    if _bland_min(tab, basis, cost2, ncols) == "unbounded":
        return UNBOUNDED

    z = [Fraction(0)] * ncols
    for i, b in enumerate(basis):
        z[b] = tab[i][-1]
    point = []
    for j in range(n):
        kind, z1, arg = cols[j]
        if kind == "shift":
            point.append(arg + z[z1])
        elif kind == "flip":
            point.append(arg - z[z1])
        else:
            point.append(z[z1] - z[arg])
    value = -cost2[-1] + const
    if not minimize:
        value = -value

    result = LpResult("optimal", tuple(point), value)
    _check_result(p, result)
    return result


def _check_result(p: LpProblem, res: LpResult):
    """Exact re-substitution of the reported optimum (internal guard)."""
    x = res.point
    ok = all(
        (p.lower[j] is None or x[j] >= p.lower[j])
        and (p.upper[j] is None or x[j] <= p.upper[j])
        for j in range(p.n)
    )
    for con in p.constraints:
        lhs = sum(a * v for a, v in zip(con.coeffs, x))
        ok = ok and (
            (con.rel == LE and lhs <= con.rhs)
            or (con.rel == GE and lhs >= con.rhs)
            or (con.rel == EQ and lhs == con.rhs)
        )
    obj = sum(c * v for c, v in zip(p.objective, x))
    if not ok or obj != res.value:
        raise AssertionError("simplex returned an invalid optimum")
