"""Command-line entry points.

Subcommands:
  nd FILE        print the neighborhood-diversity decomposition
  solve FILE     build a model for the instance's problem and solve it
  verify FILE    solve with every applicable model/backend plus the
                 brute-force oracle and check they agree
  graver FILE    Graver diagnostics of the stacked sum-coloring matrix
  bench          generate seeded blow-up instances and solve them in bulk

Exit codes: 0 ok, 1 infeasible (or verify mismatch), 2 budget exhausted,
3 input error.  CSV reports use the fixed schema
instance,problem,model,backend,value,nodes,millis (header written once);
pass --no-timing to zero the millis column when byte-identical output
matters more than timing.
"""

from __future__ import annotations

import argparse
import csv
import os
import random
import sys
import time

from .algorithms import (
    cds_brute,
    cds_proximity_solve,
    cds_rounding_approx,
    check_cds,
    coloring_cost,
    cut_value,
    maxqcut_brute,
    sumcol_brute,
)
from .backends import Budget, solve_augment, solve_boxed, solve_nfold
from .errors import BudgetError, IncompleteBasisError
from .graphs import type_graph
from .graver import g1_norm, graver_basis, stacking_check
from .instances import Instance, ParseError, generate_blowup, random_template, read_instance, write_instance
from .models import (
    build_catalog,
    build_cds_convex,
    build_cds_ilp,
    build_maxqcut,
    build_sumcol_convex,
    build_sumcol_graver,
    build_sumcol_nfold,
    decode_cds,
    decode_coloring,
    decode_partition,
    split_stacked_blocks,
)

OK, INFEASIBLE, BUDGET, INPUT_ERROR = 0, 1, 2, 3
PROBLEM_CHOICES = ("cds", "sumcol", "maxqcut")

MODELS = {
    "cds": ("convex", "ilp"),
    "sumcol": ("nfold", "convexfd", "graver"),
    "maxqcut": ("quadratic",),
}
DEFAULT_MODEL = {"cds": "ilp", "sumcol": "nfold", "maxqcut": "quadratic"}
BACKENDS = {
    ("cds", "convex"): ("boxed",),
    ("cds", "ilp"): ("boxed",),
    ("sumcol", "nfold"): ("boxed", "nfold"),
    ("sumcol", "convexfd"): ("boxed",),
    ("sumcol", "graver"): ("boxed", "augment"),
    ("maxqcut", "quadratic"): ("boxed",),
}
BUILDERS = {
    ("cds", "convex"): lambda t, q: build_cds_convex(t),
    ("cds", "ilp"): lambda t, q: build_cds_ilp(t),
    ("sumcol", "nfold"): lambda t, q: build_sumcol_nfold(t),
    ("sumcol", "convexfd"): lambda t, q: build_sumcol_convex(t),
    ("sumcol", "graver"): lambda t, q: build_sumcol_graver(t),
    ("maxqcut", "quadratic"): lambda t, q: build_maxqcut(t, q),
}
SOLVERS = {"boxed": solve_boxed, "nfold": solve_nfold, "augment": solve_augment}


def _print_stats(inst: Instance, t):
    g = inst.graph
    kinds = ", ".join(f"{w}x{kind}" for w, kind in zip(t.weights, t.kinds))
    print(f"instance: {inst.problem} n={g.n} m={g.m}")
    print(f"nd: {t.k} [{kinds}]")


def _witness(inst, t, res, model_name):
    g = inst.graph
    if res.point is None:
        return "none"
    if inst.problem == "cds":
        sol = decode_cds(t, g, res.point)
        if sol is None:
            return "undecodable"
        dom = ",".join(str(v + 1) for v in sorted(sol.dominators))
        pairs = " ".join(f"{x + 1}->{y + 1}" for x, y in sol.assignment)
        return f"D={{{dom}}} {pairs}"
    if inst.problem == "sumcol":
        tag = {"nfold": "sumcol_nfold", "convexfd": "sumcol_convex", "graver": "sumcol_graver"}[
            model_name
        ]
        coloring = decode_coloring(t, g, res.point, tag)
        return " ".join(f"{v + 1}:{coloring[v]}" for v in range(g.n))
    partition = decode_partition(t, g, res.point)
    return " ".join(f"{v + 1}:{partition[v]}" for v in range(g.n))


def _csv_row(path, row):
    header = ["instance", "problem", "model", "backend", "value", "nodes", "millis"]
    fresh = not os.path.exists(path) or os.path.getsize(path) == 0
    with open(path, "a", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh)
        if fresh:
            writer.writerow(header)
        writer.writerow(row)


def _brute_value(inst: Instance):
    g = inst.graph
    if inst.problem == "cds":
        return cds_brute(g).size
    if inst.problem == "sumcol":
        return coloring_cost(sumcol_brute(g))
    return cut_value(g, maxqcut_brute(g, inst.q))


def cmd_nd(args) -> int:
    inst = read_instance(args.file)
    t = type_graph(inst.graph)
    _print_stats(inst, t)
    for i in range(t.k):
        members = ",".join(str(v + 1) for v in sorted(t.classes[i]))
        print(f"class {i + 1}: weight={t.weights[i]} kind={t.kinds[i]} vertices={{{members}}}")
    return OK


def run_solve(args) -> int:
    """Solve one instance; prints the report and appends a CSV row on request."""
    inst = read_instance(args.file)
    if args.problem and args.problem != inst.problem:
        print(f"file holds a {inst.problem!r} instance, not {args.problem!r}", file=sys.stderr)
        return INPUT_ERROR
    if args.q is not None:
        inst = Instance(inst.graph, inst.problem, args.q)
    g = inst.graph
    t = type_graph(g)
    _print_stats(inst, t)
    budget = Budget(max_nodes=args.budget, max_dp_states=args.budget) if args.budget else Budget()

    started = time.perf_counter()
    if args.algo:
        if inst.problem != "cds" and args.algo != "brute":
            print(f"algo {args.algo!r} applies to cds only", file=sys.stderr)
            return INPUT_ERROR
        label_model, label_backend = "-", args.algo
        if args.algo == "brute":
            value = _brute_value(inst)
            nodes = 0
            print(f"algo: brute value: {value}")
        else:
            solver = cds_proximity_solve if args.algo == "proximity" else cds_rounding_approx
            sol = solver(t, g)
            assert check_cds(g, sol)
            value, nodes = sol.size, 0
            dom = ",".join(str(v + 1) for v in sorted(sol.dominators))
            print(f"algo: {args.algo} value: {value} witness: D={{{dom}}}")
    else:
        model_name = args.model or DEFAULT_MODEL[inst.problem]
        if model_name not in MODELS[inst.problem]:
            print(f"model {model_name!r} does not fit problem {inst.problem!r}", file=sys.stderr)
            return INPUT_ERROR
        backend = args.backend or "boxed"
        if backend not in BACKENDS[(inst.problem, model_name)]:
            print(f"backend {backend!r} does not fit model {model_name!r}", file=sys.stderr)
            return INPUT_ERROR
        label_model, label_backend = model_name, backend
        model = BUILDERS[(inst.problem, model_name)](t, inst.q)
        res = SOLVERS[backend](model, budget=budget)
        if res.status == "infeasible":
            print("infeasible")
            return INFEASIBLE
        value, nodes = res.value, res.nodes
        print(f"model: {inst.problem}/{model_name} backend: {backend}")
        print(f"value: {value}")
        print(f"witness: {_witness(inst, t, res, model_name)}")
    millis = 0 if args.no_timing else int((time.perf_counter() - started) * 1000)
    print(f"nodes: {nodes} millis: {millis}")
    if args.csv:
        _csv_row(args.csv, [args.file, inst.problem, label_model, label_backend, value, nodes, millis])
    return OK


def cmd_verify(args) -> int:
    """Cross-check every applicable model/backend against the oracle."""
    inst = read_instance(args.file)
    g = inst.graph
    t = type_graph(g)
    _print_stats(inst, t)
    expected = _brute_value(inst)
    print(f"oracle: {expected}")
    ok = True
    for model_name in MODELS[inst.problem]:
        model = BUILDERS[(inst.problem, model_name)](t, inst.q)
        for backend in BACKENDS[(inst.problem, model_name)]:
            res = SOLVERS[backend](model)
            agree = res.optimal and res.value == expected
            ok = ok and agree
            print(f"{model_name}/{backend}: {res.value} {'ok' if agree else 'MISMATCH'}")
    if inst.problem == "cds":
        for name, fn in (("proximity", cds_proximity_solve), ("rounding", cds_rounding_approx)):
            sol = fn(t, g)
            if name == "proximity":
                agree = sol.size == expected
            else:
                agree = 0 <= sol.size - expected <= t.k * t.k
            ok = ok and agree
            print(f"{name}: {sol.size} {'ok' if agree else 'MISMATCH'}")
    print("verdict:", "ok" if ok else "MISMATCH")
    return OK if ok else INFEASIBLE


def cmd_graver(args) -> int:
    """Norm diagnostics of the stacked sum-coloring matrix of the instance."""
    inst = read_instance(args.file)
    t = type_graph(inst.graph)
    model = build_sumcol_graver(t)
    cat = build_catalog(t)
    f_block, l_block = split_stacked_blocks(model)
    basis = graver_basis(l_block, max_elements=args.max_elements)
    nx = cat.size
    g1 = g1_norm(basis)
    xmax = max((sum(abs(v) for v in g[:nx]) for g in basis.elements), default=0)
    print(f"critical sizes: {list(cat.gamma)}")
    print(f"lower block: {l_block.m} rows, {l_block.n} cols, basis size {len(basis)}")
    print(f"g1(L) = {g1} (bound {len(cat.gamma) + 1})")
    print(f"max l1 of x-part = {xmax} (bound 2)")
    if args.stacking:
        rep = stacking_check(f_block, l_block, max_elements=args.max_elements)
        print(
            f"stacking: g1(stack)={rep.g1_stack} bound={rep.bound} "
            f"({'holds' if rep.holds else 'VIOLATED'})"
        )
    return OK


def cmd_bench(args) -> int:
    """Seeded bulk run; one CSV row per (instance, model, backend).

    Rows are emitted in instance order (solves could run in parallel, the
    report order would not change).
    """
    rng_master = random.Random(args.seed)
    rows = []
    for idx in range(args.count):
        template = random_template(
            rng_master,
            max_k=args.max_k,
            max_n=args.max_n,
            with_capacities=args.problem == "cds",
        )
        g = generate_blowup(template, seed=rng_master.randrange(2**30))
        q = 2 if args.problem == "maxqcut" else None
        inst = Instance(g, args.problem, q)
        t = type_graph(g)
        name = f"blowup-{args.seed}-{idx}"
        for model_name in MODELS[args.problem]:
            model = BUILDERS[(args.problem, model_name)](t, q)
            for backend in BACKENDS[(args.problem, model_name)]:
                started = time.perf_counter()
                res = SOLVERS[backend](model)
                millis = 0 if args.no_timing else int((time.perf_counter() - started) * 1000)
                rows.append(
                    [name, args.problem, model_name, backend, res.value, res.nodes, millis]
                )
        if args.out_dir:
            write_instance(inst, os.path.join(args.out_dir, f"{name}.txt"))
    for row in rows:
        if args.csv:
            _csv_row(args.csv, row)
        print(" ".join(str(x) for x in row))
    return OK


def build_parser():
    parser = argparse.ArgumentParser(prog="ndsolve")
    sub = parser.add_subparsers(dest="command", required=True)

    p_nd = sub.add_parser("nd", help="print the twin-class decomposition")
    p_nd.add_argument("file")

    p_solve = sub.add_parser("solve", help="solve one instance")
    p_solve.add_argument("file")
    p_solve.add_argument("--problem", choices=PROBLEM_CHOICES, help="must match the file header")
    p_solve.add_argument("--model", choices=["convex", "ilp", "nfold", "convexfd", "graver", "quadratic"])
    p_solve.add_argument("--backend", choices=["boxed", "nfold", "augment"])
    p_solve.add_argument("--algo", choices=["proximity", "rounding", "brute"])
    p_solve.add_argument("--q", type=int, help="override part count (maxqcut)")
    p_solve.add_argument("--seed", type=int, default=0)
    p_solve.add_argument("--budget", type=int)
    p_solve.add_argument("--csv")
    p_solve.add_argument("--no-timing", action="store_true")

    p_verify = sub.add_parser("verify", help="cross-check models against the oracle")
    p_verify.add_argument("file")

    p_graver = sub.add_parser("graver", help="Graver diagnostics for the stacked matrix")
    p_graver.add_argument("file")
    p_graver.add_argument("--stacking", action="store_true")
    p_graver.add_argument("--max-elements", type=int, default=200_000)

    p_bench = sub.add_parser("bench", help="bulk seeded run")
    p_bench.add_argument("--problem", choices=PROBLEM_CHOICES, required=True)
    p_bench.add_argument("--count", type=int, default=10)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--max-n", type=int, default=8)
    p_bench.add_argument("--max-k", type=int, default=4)
    p_bench.add_argument("--csv")
    p_bench.add_argument("--out-dir")
    p_bench.add_argument("--no-timing", action="store_true")
    return parser


COMMANDS = {
    "nd": cmd_nd,
    "solve": run_solve,
    "verify": cmd_verify,
    "graver": cmd_graver,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ParseError, FileNotFoundError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except (BudgetError, IncompleteBasisError) as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return BUDGET


if __name__ == "__main__":
    sys.exit(main())
