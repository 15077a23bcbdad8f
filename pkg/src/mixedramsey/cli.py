"""Batch command-line front end.

Exit codes: 0 success, 1 a domain outcome (nothing found, precondition
failed, budget exhausted), 2 a usage or input-format error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import cyclefind, extremal, matchfind, ramsey, regularity, stability
from .decompose import decompose as decompose_graph
from .errors import BudgetExceeded, GraphFormatError, PreconditionError, RamseyToolkitError, SizeCapError
from .graphcore import Colour, MultiColouredGraph, read_graph, write_graph

COLOUR_NAMES = {"r": "red", "b": "blue", "g": "green"}


class UsageError(Exception):
    pass


class Result:
    """What a subcommand produced: exit code, text lines and the JSON mirror."""

    def __init__(self, code=0):
        self.code = code
        self.lines = []
        self.data = {}

    def put(self, key, value, text=None):
        self.data[key] = value
        self.lines.append(text if text is not None else f"{key}: {value}")


# -- argument helpers -------------------------------------------------------

def _fraction(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _colour(text):
    try:
        return Colour.parse(text)
    except GraphFormatError:
        raise argparse.ArgumentTypeError(f"unknown colour {text!r}") from None


def parse_forbid(text: str) -> tuple:
    """``r:4,b:4,g:3`` -> (4, 4, 3); every colour must be named once."""
    out = {}
    for item in text.split(","):
        try:
            name, length = item.split(":")
            c = Colour.parse(name)
            out[c] = int(length)
        except (ValueError, GraphFormatError):
            raise UsageError(f"bad --forbid item {item!r}") from None
    if len(out) != 3:
        raise UsageError("--forbid must give a length for each of r, b and g")
    return tuple(out[c] for c in (Colour.RED, Colour.BLUE, Colour.GREEN))


def parse_pairs(text: str) -> list:
    """``0-1,2-3`` -> [(0, 1), (2, 3)]."""
    pairs = []
    for item in filter(None, text.split(",")):
        try:
            u, v = (int(x) for x in item.split("-"))
        except ValueError:
            raise UsageError(f"bad pair {item!r}") from None
        pairs.append((u, v))
    return pairs


def parse_params(text: str) -> dict:
    """``x1=6,x2=3,c1=0`` -> dict with fractions (colours kept as names)."""
    out = {}
    for item in filter(None, (text or "").split(",")):
        if "=" not in item:
            raise UsageError(f"bad parameter {item!r}")
        key, value = item.split("=", 1)
        key = key.strip()
        if key.startswith("gamma"):
            out[key] = _colour(value)
        else:
            out[key] = _fraction(value)
    return out


def _seed(args) -> int:
    env = os.environ.get("RAMSEY_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"RAMSEY_SEED is not an integer: {env!r}") from None
    return args.seed


def _load_graph(path) -> MultiColouredGraph:
    try:
        return read_graph(Path(path).read_bytes())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_partition(path):
    try:
        return regularity.read_partition(Path(path).read_bytes())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _emit_graph(res: Result, g: MultiColouredGraph, out, key="graph"):
    text = write_graph(g)
    if out:
        Path(out).write_bytes(text)
        res.put("written", str(out), f"wrote {g.n_vertices}-vertex graph to {out}")
    else:
        res.data[key] = text.decode()
        res.lines.append(text.decode().rstrip("\n"))


def _figure(args, g, highlight=None, groups=None, title=None):
    if getattr(args, "figure", None):
        from .plotting import draw_colouring

        draw_colouring(g, args.figure, highlight=highlight, groups=groups, title=title)


# -- subcommands ------------------------------------------------------------

def cmd_construct(args) -> Result:
    res = Result()
    kind = args.kind
    groups = None
    if kind in ("lb1", "lb2"):
        if None in (args.red, args.blue, args.green):
            raise UsageError(f"construct {kind} needs --red, --blue and --green")
        spec = extremal.LowerBoundSpec(args.red, args.blue, args.green)
        if kind == "lb1":
            g = extremal.build_construction_1(spec, args.policy)
            parts = extremal.construction_1_parts(spec)
        else:
            g = extremal.build_construction_2(spec)
            parts = extremal.construction_2_parts(spec)
        groups = {v: i for i, block in enumerate(parts) for v in block}
        res.put("parts", [len(p) for p in parts], "parts: " + " ".join(str(len(p)) for p in parts))
    else:
        p = parse_params(args.params)
        gen = {"genH": extremal.gen_H, "genK": extremal.gen_K, "genKstar": extremal.gen_Kstar}[kind]
        try:
            g, w = gen(**p, seed=_seed(args), deletions=args.deletions)
        except TypeError as exc:
            raise UsageError(f"bad parameters for {kind}: {exc}") from None
        labels = w.params.labels
        groups = {v: labels.index(lab) for lab, vs in w.parts.items() for v in vs}
        res.put("partition", {lab: sorted(vs) for lab, vs in w.parts.items()},
                "partition: " + "; ".join(f"{lab}={' '.join(map(str, sorted(vs)))}" for lab, vs in w.parts.items()))
    res.put("vertices", g.n_vertices)
    _emit_graph(res, g, args.output)
    _figure(args, g, groups=groups, title=kind)
    return res


def cmd_verify(args) -> Result:
    g = _load_graph(args.graph)
    lengths = parse_forbid(args.forbid)
    found = ramsey.forbidden_cycles(g, lengths)
    res = Result(1 if found else 0)
    res.data["complete"] = g.is_complete()
    res.data["found"] = [{"colour": c.name.lower(), "cycle": list(cyc.vertices)} for c, cyc in found]
    if not found:
        res.lines.append("no forbidden cycles")
    for c, cyc in found:
        res.lines.append(f"{c.name.lower()} C{cyc.length}: {' '.join(map(str, cyc.vertices))}")
    _figure(args, g, highlight=found[0][1].vertices if found else None)
    return res


def cmd_search(args) -> Result:
    t = ramsey.CycleTriple(args.red, args.blue, args.green)
    try:
        out = ramsey.search_ramsey(t, args.N, args.budget, symmetry=not args.no_symmetry,
                                   threads=args.threads)
    except BudgetExceeded as exc:
        res = Result(1)
        res.data.update({"result": "budget-exceeded", "stats": exc.stats})
        res.lines.append("result=budget-exceeded")
        res.lines += [f"{k}={v}" for k, v in sorted(exc.stats.items())]
        return res
    res = Result(0)
    res.data.update(out.as_dict())
    res.lines.append(out.stats_text().rstrip("\n"))
    if out.witness is not None:
        if args.output:
            Path(args.output).write_bytes(write_graph(out.witness))
        _figure(args, out.witness, title=f"N={args.N}")
    return res


def cmd_find(args) -> Result:
    g = _load_graph(args.graph)
    res = Result()
    if args.what == "cycle":
        if args.length is None:
            raise UsageError("find cycle needs --length")
        view = g.slice(args.colour) if args.colour else g
        cyc = cyclefind.find_cycle_exact(view, args.length)
        if cyc is None:
            res.code = 1
            res.put("cycle", None, "not found")
        else:
            res.put("cycle", list(cyc.vertices), "cycle: " + " ".join(map(str, cyc.vertices)))
            _figure(args, g, highlight=cyc.vertices)
    elif args.what == "matching":
        view = g.slice(args.colour) if args.colour else g
        m = matchfind.max_connected_matching(view, require_odd=args.odd)
        if m is None:
            res.code = 1
            res.put("matching", None, "not found")
        else:
            res.put("matching", [list(e) for e in m.edges],
                    "matching: " + " ".join(f"{u}-{v}" for u, v in m.edges))
            res.put("vertices", m.n_vertices)
            res.put("odd", m.odd)
    else:
        if args.eta is None:
            raise UsageError("find component needs --eta")
        colour, comp = matchfind.largest_mono_component(g, args.eta)
        res.put("colour", colour.name.lower())
        res.put("component", sorted(comp), "component: " + " ".join(map(str, sorted(comp))))
    return res


def cmd_decompose(args) -> Result:
    g = _load_graph(args.graph)
    view = g.slice(args.colour) if args.colour else g
    d = decompose_graph(view, args.m)
    res = Result()
    res.put("v_prime", sorted(d.v_prime), "V': " + " ".join(map(str, sorted(d.v_prime))))
    res.put("v_dprime", sorted(d.v_dprime), "V'': " + " ".join(map(str, sorted(d.v_dprime))))
    return res


def cmd_detect(args) -> Result:
    g = _load_graph(args.graph)
    params = stability.make_params(args.cls, **parse_params(args.params))
    w = stability.detect_structure(g, args.cls, params, seed=_seed(args))
    res = Result()
    if w is None:
        res.code = 1
        res.put("witness", None, "no witness found")
        return res
    res.put("witness", {lab: sorted(vs) for lab, vs in w.parts.items()},
            "\n".join(f"{lab}: {' '.join(map(str, sorted(vs)))}" for lab, vs in w.parts.items()))
    labels = params.labels
    _figure(args, g, groups={v: labels.index(lab) for lab, vs in w.parts.items() for v in vs})
    return res


def cmd_reduce(args) -> Result:
    g = _load_graph(args.graph)
    p = _load_partition(args.partition)
    red = regularity.build_reduced_graph(g, p, args.eps, args.xi, args.mode, seed=_seed(args))
    res = Result()
    res.put("clusters", p.k)
    res.put("tentative", red.tentative)
    res.data["graph"] = write_graph(red.graph).decode()
    res.lines.append(write_graph(red.graph).decode().rstrip("\n"))
    res.data["densities"] = {c.name.lower(): [[str(x) for x in row] for row in m] for c, m in red.densities.items()}
    if args.output:
        Path(args.output).write_bytes(write_graph(red.graph))
    if args.figure:
        from .plotting import draw_densities

        draw_densities(red, args.figure)
    return res


def cmd_blowup(args) -> Result:
    g = _load_graph(args.graph)
    p = _load_partition(args.partition)
    red = regularity.build_reduced_graph(g, p, args.eps, args.xi, args.mode, seed=_seed(args))
    pairs = parse_pairs(args.matching)
    comps = matchfind.components(red.graph.slice(args.colour))
    comp = next((c for c in comps if pairs and pairs[0][0] in c.vertices), None)
    if comp is None:
        raise UsageError("matching is empty or names no cluster")
    m = matchfind.ConnectedMatching(args.colour, pairs, comp.vertices, comp.odd)
    cyc = regularity.blow_up_cycle(g, red, m, args.length, args.parity)
    res = Result()
    res.put("cycle", list(cyc.vertices), "cycle: " + " ".join(map(str, cyc.vertices)))
    res.put("length", cyc.length)
    _figure(args, g, highlight=cyc.vertices)
    return res


def cmd_formula(args) -> Result:
    t = ramsey.CycleTriple(args.red, args.blue, args.green)
    value = ramsey.theorem_A_value(t) if args.which == "A" else ramsey.theorem_C_value(t)
    res = Result()
    res.put("value", value, str(value))
    return res


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mixedramsey", description="Mixed-parity cycle Ramsey toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, figure=True, seed=False):
        p.add_argument("--json", action="store_true", help="machine-readable output")
        if figure:
            p.add_argument("--figure", metavar="PATH", help="also render a figure to PATH")
        if seed:
            p.add_argument("--seed", type=int, default=0, help="RNG seed (RAMSEY_SEED overrides)")

    def lengths(p):
        p.add_argument("--red", type=int)
        p.add_argument("--blue", type=int)
        p.add_argument("--green", type=int)

    p = sub.add_parser("construct", help="build an extremal colouring or a planted class member")
    p.add_argument("kind", choices=["lb1", "lb2", "genH", "genK", "genKstar"])
    lengths(p)
    p.add_argument("--policy", choices=[x.value for x in extremal.POLICIES], default="all-red")
    p.add_argument("--params", default="", help="generator parameters, e.g. x1=6,x2=3,c1=0,c2=0")
    p.add_argument("--deletions", type=int, default=0)
    p.add_argument("-o", "--output")
    common(p, seed=True)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="check a colouring for forbidden monochromatic cycles")
    p.add_argument("--graph", required=True)
    p.add_argument("--forbid", required=True, help="e.g. r:4,b:4,g:3")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", help="exhaustive small-N Ramsey search")
    p.add_argument("target", choices=["ramsey"])
    lengths(p)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--budget", type=int, default=10 ** 7)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--no-symmetry", action="store_true")
    p.add_argument("-o", "--output")
    common(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("find", help="cycles, connected matchings and components")
    p.add_argument("what", choices=["cycle", "matching", "component"])
    p.add_argument("--graph", required=True)
    p.add_argument("--colour", type=_colour)
    p.add_argument("--length", type=int)
    p.add_argument("--odd", action="store_true")
    p.add_argument("--eta", type=_fraction)
    common(p)
    p.set_defaults(func=cmd_find)

    p = sub.add_parser("decompose", help="bipartite / odd-component decomposition")
    p.add_argument("--graph", required=True)
    p.add_argument("--colour", type=_colour)
    p.add_argument("--m", type=int, required=True)
    common(p, figure=False)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("detect", help="search for a structure-class witness")
    p.add_argument("cls", choices=["H", "K", "Kstar"])
    p.add_argument("--graph", required=True)
    p.add_argument("--params", required=True)
    common(p, seed=True)
    p.set_defaults(func=cmd_detect)

    for name, func, helptext in (("reduce", cmd_reduce, "build the reduced graph of a partition"),
                                 ("blowup", cmd_blowup, "blow a reduced connected matching up to a cycle")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--graph", required=True)
        p.add_argument("--partition", required=True)
        p.add_argument("--eps", type=_fraction, required=True)
        p.add_argument("--xi", type=_fraction, required=True)
        p.add_argument("--mode", choices=["exhaustive", "heuristic"], default="exhaustive")
        if name == "reduce":
            p.add_argument("-o", "--output")
        else:
            p.add_argument("--colour", type=_colour, required=True)
            p.add_argument("--matching", required=True, help="cluster pairs, e.g. 0-1")
            p.add_argument("--length", type=int, required=True)
            p.add_argument("--parity", choices=["even", "odd"])
        common(p, seed=True)
        p.set_defaults(func=func)

    p = sub.add_parser("formula", help="closed-form Ramsey value")
    p.add_argument("which", choices=["A", "C"])
    lengths(p)
    common(p, figure=False)
    p.set_defaults(func=cmd_formula)
    return ap


def _json_default(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    return str(x)


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        res = args.func(args)
    except (UsageError, GraphFormatError, SizeCapError) as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    except (PreconditionError, BudgetExceeded) as exc:
        print(f"precondition: {exc}", file=stderr)
        return 1
    except RamseyToolkitError as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    if args.json:
        payload = dict(res.data)
        payload["exit_code"] = res.code
        print(json.dumps(payload, default=_json_default, sort_keys=True), file=stdout)
    else:
        for line in res.lines:
            print(line, file=stdout)
    return res.code


def main():
    sys.exit(run())
