"""Command line front end: ``python -m cocycle_forge <group> <command> [flags]``.

Outputs are TSV (header row), JSON (format "cocycle-forge/1") or DOT.  All
numbers are exact.  Exit codes: 0 success, 2 precision or bound failure,
3 finding (a JSON finding report goes to stderr), 64 usage error.
"""
from __future__ import annotations

import argparse
import json
import random
import sys

from .algebra import PolyMatrix, field_from_q
from .cocycles import (dimension_table, invariant_space, parse_ring, ring_name, space_json,
                       verify_space)
from .errors import (DegreeBoundTooSmall, DepthTooSmall, ForgeError, InvarianceViolation,
                     OutOfExploredRegion, PrecisionExhausted, TooLarge)
from .quotient import ArithmeticGroup, quotient_graph, verify_quotient

EXIT_OK, EXIT_BOUND, EXIT_FINDING, EXIT_USAGE = 0, 2, 3, 64
MAX_DEPTH = 8
MIN_PRECISION = 8


class UsageError(Exception):
    pass


class Finding(Exception):
    def __init__(self, message, data=None):
        super().__init__(message)
        self.data = data or {}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_USAGE)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _scalar(x):
    if isinstance(x, bool):
        return x
    if isinstance(x, int):
        return x
    if hasattr(x, "num"):
        return {"num": list(x.num.c), "den": list(x.den.c)}
    return str(x)


# -- config --------------------------------------------------------------------------

def read_config(path):
    """key=value lines; blank lines and '#' comments are ignored."""
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"bad config line {line!r}")
            k, v = (s.strip() for s in line.split("=", 1))
            out[k.replace("-", "_")] = v
    return out


def _field(args, quotient=False):
    try:
        F = field_from_q(args.q)
    except (ValueError, KeyError) as exc:
        raise UsageError(f"q={args.q}: {exc}")
    if quotient and args.q > 4:
        raise UsageError("quotient commands support q <= 4")
    return F


def _depth(args):
    if not 1 <= args.depth <= MAX_DEPTH:
        raise UsageError(f"depth must lie in 1..{MAX_DEPTH}")
    return args.depth


def _radius(args):
    from .tree import DEFAULT_MAX_RADIUS
    if not 0 <= args.radius <= DEFAULT_MAX_RADIUS:
        raise UsageError(f"radius must lie in 0..{DEFAULT_MAX_RADIUS}")
    return args.radius


def _group(args, F):
    try:
        return ArithmeticGroup.parse(F, args.gamma)
    except (ValueError, KeyError) as exc:
        raise UsageError(f"bad --gamma {args.gamma!r}: {exc}")


def _ring(args, F):
    try:
        return parse_ring(args.ring, F)
    except (ValueError, StopIteration, ForgeError) as exc:
        raise UsageError(f"bad --ring {args.ring!r}: {exc}")


# -- tree ------------------------------------------------------------------------------

def cmd_tree_ball(args, out):
    from .tree import ball, ball_to_dot, standard_vertex
    F = _field(args)
    _radius(args)
    verts, edges = ball(standard_vertex(F), args.radius)
    if args.format == "dot":
        out.write(ball_to_dot(verts, edges))
    elif args.format == "json":
        und = sorted({e.canonical()[0] for e in edges})
        out.write(_dumps({"format": "cocycle-forge/1", "kind": "ball", "q": args.q, "radius": args.radius,
                          "vertices": [v.node_id() for v in sorted(verts)],
                          "edges": [[e.origin.node_id(), e.terminus.node_id()] for e in und]}))
    else:
        out.write("vertex\tlevel\n")
        for v in sorted(verts):
            out.write(f"{v.node_id()}\t{v.level}\n")


def cmd_tree_act(args, out):
    from .tree import act_vertex, ball, random_group_element, standard_vertex
    F = _field(args)
    if args.matrix:
        try:
            g = PolyMatrix.parse(F, args.matrix)
        except (ValueError, KeyError) as exc:
            raise UsageError(f"bad --matrix: {exc}")
        if g.det().degree != 0:
            raise UsageError("--matrix must be invertible over F_q[t]")
        g2, label = g.to_matrix2(), g.format()
    else:
        g2 = random_group_element(F, random.Random(args.seed), prec=args.precision)
        label = f"random(seed={args.seed})"
    verts, _ = ball(standard_vertex(F), _radius(args))
    out.write(f"# g = {label}\n")
    out.write("vertex\timage\n")
    for v in sorted(verts):
        out.write(f"{v.node_id()}\t{act_vertex(g2, v).node_id()}\n")


# -- representations ---------------------------------------------------------------------

def _prime(p):
    from .algebra.rings import is_prime
    if not is_prime(p):
        raise UsageError(f"p={p} is not prime")
    return p


def cmd_rep_dee(args, out):
    from .representations import dee_table
    out.write("n\tin_D\n")
    for n, inside in dee_table(_prime(args.p), args.max_n):
        out.write(f"{n}\t{int(inside)}\n")


def cmd_rep_alpha(args, out):
    from .representations import alpha
    p = _prime(args.p)
    out.write("n\tp\talpha\n")
    for n in range(1, args.max_n + 1):
        out.write(f"{n}\t{p}\t{alpha(n, p)}\n")


def cmd_rep_cyclicity(args, out):
    from .representations import cyclicity_closure
    p = _prime(args.p)
    out.write("n\tp\tf\talpha\tclosure_dim\tcomplete\n")
    bad = []
    for n in range(1, args.max_n + 1):
        cl = cyclicity_closure(p, args.f, n)
        out.write(f"{n}\t{p}\t{args.f}\t{cl.alpha}\t{cl.dimension}\t{int(cl.complete)}\n")
        if not cl.complete:
            bad.append(n)
    if bad:
        raise Finding("closure incomplete", {"n": bad, "p": p, "f": args.f})


def cmd_rep_probe(args, out):
    from .errors import NotApplicable
    from .representations import irreducibility_probe, subrep_probe
    F = _field(args)
    out.write("n\tq\tirreducible\tgroup_order\tp_divides_n\tsubrep_stable\n")
    for n in range(1, args.max_n + 1):
        v = irreducibility_probe(F, n)
        try:
            stable, _ = subrep_probe(F.p, n, F.f)
            sub = str(int(stable))
        except NotApplicable:
            sub = "-"
        out.write(f"{n}\t{F.q}\t{int(v.irreducible)}\t{v.group_order}\t{int(n % F.p == 0)}\t{sub}\n")


# -- quotient and cocycles -----------------------------------------------------------------

def _quotient(args):
    F = _field(args, quotient=True)
    G = _group(args, F)
    QG = quotient_graph(G, _depth(args))
    return G, QG


def cmd_quotient_build(args, out):
    G, QG = _quotient(args)
    problems = verify_quotient(QG)
    if args.format == "dot":
        out.write(QG.to_dot())
    elif args.format == "json":
        out.write(_dumps(QG.to_json()))
    else:
        out.write("orbit\ttype\tstabilizer_order\tcusp\n")
        for v in QG.vertices:
            out.write(f"{v.id}\t{v.type}\t{v.stabilizer_order}\t{'-' if v.cusp is None else v.cusp}\n")
    if problems:
        raise Finding("quotient witnesses fail re-verification", {"problems": problems})


def _space(args):
    G, QG = _quotient(args)
    ring = _ring(args, G.F)
    space = invariant_space(QG, args.weight, ring, support=args.support)
    problems = verify_space(space)
    return G, QG, ring, space, problems


def cmd_cocycles_dim(args, out):
    G, QG, ring, space, problems = _space(args)
    if args.format == "json":
        out.write(_dumps({"format": "cocycle-forge/1", "kind": "cocycles", "gamma": G.name,
                          "q": G.F.q, "weight": args.weight, "ring": ring_name(ring),
                          "depth": QG.depth, "support": args.support, "dimension": space.dimension,
                          "basis": []}))
    else:
        out.write(dimension_table([(G.F.q, G.name, args.weight, ring_name(ring), args.support,
                                    space.dimension)]))
    if problems:
        raise Finding("basis fails independent re-check", {"problems": problems})


def cmd_cocycles_basis(args, out):
    G, QG, ring, space, problems = _space(args)
    out.write(space_json(space) + "\n")
    if problems:
        raise Finding("basis fails independent re-check", {"problems": problems})


# -- pairing and correspondence ------------------------------------------------------------

def cmd_pairing_demo(args, out):
    from .correspondence import basis_cocycles, evaluator, random_step
    from .special_rep import pairing, refine
    G, QG, ring, space, problems = _space(args)
    rng = random.Random(args.seed)
    rows = []
    for i, gc in enumerate(basis_cocycles(space)):
        phi = gc[gc.classes.labels[0]]
        h = random_step(G.F, ring, space.n, rng)
        v1 = pairing(phi, h)
        v2 = pairing(phi, refine(h, h.terms[0][0]))
        rows.append({"basis": i, "value": _scalar(v1), "refined_value": _scalar(v2),
                     "edges": [[e.origin.node_id(), e.terminus.node_id()] for e in h.edges()]})
        if v1 != v2:
            problems.append(f"basis {i}: pairing changes under refinement")
    out.write(_dumps({"format": "cocycle-forge/1", "kind": "pairing", "gamma": G.name,
                      "weight": args.weight, "seed": args.seed, "rows": rows}))
    if problems:
        raise Finding("pairing check failed", {"problems": problems})


def cmd_corr_roundtrip(args, out):
    from .correspondence import (basis_cocycles, check_equivariance, evaluator, hom_to_cocycle,
                                 phi_compose, phi_decompose, same_cocycle)
    G, QG, ring, space, problems = _space(args)
    rows = []
    for i, gc in enumerate(basis_cocycles(space)):
        x = gc.classes.labels[0]
        try:
            gc = phi_decompose(gc.classes, phi_compose(gc))
        except InvarianceViolation as exc:
            problems.append(f"basis {i}: {exc}")
        W = evaluator(gc)
        ok = same_cocycle(hom_to_cocycle(W)[x], gc[x])
        rep = check_equivariance(W, trials=args.trials, seed=args.seed + i)
        rows.append({"basis": i, "roundtrip": ok, "equivariance_checks": rep.checks,
                     "equivariance_failures": len(rep.failures), "skipped": rep.skipped})
        if not ok:
            problems.append(f"basis {i}: round trip is not the identity")
        if rep.failures:
            problems.append(f"basis {i}: {len(rep.failures)} equivariance failures")
    out.write(_dumps({"format": "cocycle-forge/1", "kind": "roundtrip", "gamma": G.name,
                      "weight": args.weight, "ring": ring_name(ring), "seed": args.seed, "rows": rows}))
    if problems:
        raise Finding("correspondence round trip failed", {"problems": problems})


def cmd_corr_lift(args, out):
    from .correspondence import lift_cocycle
    args.weight = 2
    G, QG, ring, space, problems = _space(args)
    if not 1 <= args.k <= 8:
        raise UsageError("k must lie in 1..8")
    rng = random.Random(args.seed)
    rows = []
    for i, vec in enumerate(space.basis):
        rep = lift_cocycle(space, vec, args.k, rng)
        rows.append({"basis": i, "ring": rep.ring, "reduces_exactly": rep.reduces_exactly,
                     "residual_zero": rep.residual_zero,
                     "lifted": {str(o): [_scalar(c) for c in v] for o, v in sorted(rep.lifted.items())}})
        if not rep.reduces_exactly:
            problems.append(f"basis {i}: lift does not reduce back")
    out.write(_dumps({"format": "cocycle-forge/1", "kind": "lift", "gamma": G.name, "k": args.k,
                      "seed": args.seed, "rows": rows}))
    if problems:
        raise Finding("lift check failed", {"problems": problems})


def cmd_corr_weight2(args, out):
    from .correspondence import weight2_integral
    G, QG = _quotient(args)
    rep = weight2_integral(G, QG.depth, support=args.support, QG=QG)
    out.write(_dumps(rep.to_json()))
    if not rep.reduction_surjective:
        raise Finding(f"reduction not surjective under the {args.support} convention",
                      {"invariant_factors": rep.invariant_factors, "free_rank": rep.free_rank,
                       "fp_dimension": rep.fp_dimension})


# -- parser -----------------------------------------------------------------------------------

COMMANDS = {
    ("tree", "ball"): cmd_tree_ball, ("tree", "act"): cmd_tree_act,
    ("rep", "dee"): cmd_rep_dee, ("rep", "alpha"): cmd_rep_alpha,
    ("rep", "cyclicity"): cmd_rep_cyclicity, ("rep", "probe"): cmd_rep_probe,
    ("quotient", "build"): cmd_quotient_build,
    ("cocycles", "dim"): cmd_cocycles_dim, ("cocycles", "basis"): cmd_cocycles_basis,
    ("pairing", "demo"): cmd_pairing_demo,
    ("corr", "roundtrip"): cmd_corr_roundtrip, ("corr", "lift"): cmd_corr_lift,
    ("corr", "weight2"): cmd_corr_weight2,
}


def _common(p, formats=None):
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--precision", type=int, default=MIN_PRECISION)
    p.add_argument("--config", default=None, help="key=value file; flags win")
    if formats:
        p.add_argument("--format", choices=formats, default=formats[0])


def _group_args(p, weight=True, ring=True, support="H!"):
    p.add_argument("--gamma", default="full")
    p.add_argument("--depth", type=int, default=5)
    if weight:
        p.add_argument("--weight", type=int, default=2)
    if ring:
        p.add_argument("--ring", default="f2")
    p.add_argument("--support", choices=("H", "H!", "H!!"), default=support)


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="cocycle-forge", description=__doc__.splitlines()[0])
    groups = top.add_subparsers(dest="group", required=True, parser_class=_Parser)

    tree = groups.add_parser("tree").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = tree.add_parser("ball")
    _common(p, ["tsv", "dot", "json"])
    p.add_argument("--radius", type=int, default=2)
    p = tree.add_parser("act")
    _common(p)
    p.add_argument("--radius", type=int, default=1)
    p.add_argument("--matrix", default=None, help='e.g. "[[t,1],[1,0]]"; random when omitted')

    rep = groups.add_parser("rep").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    for name in ("dee", "alpha", "cyclicity"):
        p = rep.add_parser(name)
        _common(p)
        p.add_argument("--p", type=int, default=2)
        p.add_argument("--f", type=int, default=1)
        p.add_argument("--max-n", type=int, default=20 if name != "cyclicity" else 10)
    p = rep.add_parser("probe")
    _common(p)
    p.add_argument("--max-n", type=int, default=4)

    quo = groups.add_parser("quotient").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = quo.add_parser("build")
    _common(p, ["json", "dot", "tsv"])
    _group_args(p, weight=False, ring=False)

    coc = groups.add_parser("cocycles").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = coc.add_parser("dim")
    _common(p, ["tsv", "json"])
    _group_args(p)
    p = coc.add_parser("basis")
    _common(p)
    _group_args(p)

    pai = groups.add_parser("pairing").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = pai.add_parser("demo")
    _common(p)
    _group_args(p)

    cor = groups.add_parser("corr").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = cor.add_parser("roundtrip")
    _common(p)
    _group_args(p)
    p.add_argument("--trials", type=int, default=100)
    p = cor.add_parser("lift")
    _common(p)
    _group_args(p, weight=False)
    p.add_argument("--k", type=int, default=2)
    p = cor.add_parser("weight2")
    _common(p)
    _group_args(p, weight=False, ring=False, support="H")
    return top


def _apply_config(parser, argv, args):
    """Config values fill in flags that were not given on the command line."""
    if not getattr(args, "config", None):
        return args
    cfg = read_config(args.config)
    given = {a.split("=", 1)[0].lstrip("-").replace("-", "_") for a in argv if a.startswith("--")}
    for k, v in cfg.items():
        if k in given or not hasattr(args, k):
            continue
        cur = getattr(args, k)
        setattr(args, k, type(cur)(v) if isinstance(cur, int) and not isinstance(cur, bool) else v)
    return args


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _apply_config(parser, argv, args)
        if args.precision < MIN_PRECISION:
            raise UsageError(f"precision must be >= {MIN_PRECISION}")
        COMMANDS[(args.group, args.cmd)](args, out)
    except (UsageError, ValueError) as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except (PrecisionExhausted, DegreeBoundTooSmall, DepthTooSmall, OutOfExploredRegion, TooLarge) as exc:
        err.write(f"{type(exc).__name__}: {exc}\n")
        return EXIT_BOUND
    except Finding as exc:
        err.write(_dumps({"format": "cocycle-forge/1", "kind": "finding",
                          "command": f"{args.group} {args.cmd}", "message": str(exc),
                          "data": json.loads(json.dumps(exc.data, default=str))}))
        return EXIT_FINDING
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
