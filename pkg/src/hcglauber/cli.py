"""``hcglauber`` command line.

Exit codes: 0 success, 2 invalid input, 3 budget exceeded.  Errors are one
line on stderr: ``error: <kind>: <message>``.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .chain import (
    ChainConfig,
    complete_bipartite_partition,
    complete_bipartite_reference,
    conductance_exact,
    estimate_activation,
    exact_mixing_time,
    hkt_partition,
    mixing_csv,
    partition_lower_bound,
    spectral_mixing_bounds,
    spectrum,
    transition_matrix,
)
from .decomp import (
    PathDecomposition,
    SeparatorTree,
    brute_force_tree_decomposition,
    build_separator_tree,
    decomposition_stats,
    elimination_tree_decomposition,
    format_decomposition,
    parse_decomposition,
    path_decomposition_from_order,
    tree_to_path_decomposition,
    validate_decomposition,
    validate_separator_tree,
)
from .errors import BudgetExceeded, InvalidInput
from .families import FAMILY_KINDS, FamilySpec, format_geometric, generate, geometric_graph, parse_geometric, random_balls
from .graph import Graph, StateSpace, format_graph, parse_graph
from .hardcore import activation_csv, activation_table, parse_fugacity, partition_function, stationary_distribution
from .paths import PathFamily, congestion, mixing_upper_bound_from_congestion, theoretical_congestion_bound


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InvalidInput(message.replace("\n", " "))


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return repr(float(x)) if isinstance(x, float) else str(x)


def _numeric_row(name, value) -> list:
    if isinstance(value, Fraction):
        return [name, repr(float(value)), value.numerator, value.denominator]
    if isinstance(value, int) and not isinstance(value, bool):
        return [name, repr(float(value)), value, 1]
    return [name, repr(float(value)) if isinstance(value, float) else value, "", ""]


def _report_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["quantity", "value", "num", "den"])
    for name, value in rows:
        w.writerow(_numeric_row(name, value))
    return buf.getvalue()


class _Run:
    """Collects inputs, writes outputs and the manifest sidecar."""

    def __init__(self, args):
        self.args = args
        self.started = time.perf_counter()
        self.inputs: dict[str, str] = {}

    def read(self, path: str) -> str:
        try:
            data = Path(path).read_bytes()
        except OSError as exc:
            raise InvalidInput(f"cannot read {path}: {exc.strerror}") from None
        self.inputs[path] = hashlib.sha256(data).hexdigest()
        try:
            return data.decode()
        except UnicodeDecodeError:
            raise InvalidInput(f"{path} is not UTF-8 text") from None

    def graph(self) -> Graph:
        G = parse_graph(self.read(self.args.graph))
        limit = getattr(self.args, "max_n", None)
        if limit is not None and G.n > limit:
            raise BudgetExceeded(f"graph has {G.n} vertices, --max-n is {limit}")
        return G

    def emit(self, text: str, path: str | None = None):
        path = path if path is not None else self.args.out
        if path in (None, "-"):
            sys.stdout.write(text)
            return
        Path(path).write_text(text)
        Path(path + ".manifest").write_text(self.manifest())

    def manifest(self) -> str:
        params = {k: v for k, v in sorted(vars(self.args).items()) if k not in ("func",)}
        lines = [
            "# hcglauber run manifest",
            f"command: {self.args.command}",
            f"version: {__version__}",
            f"seed: {params.get('seed', '')}",
        ]
        lines += [f"param.{k}: {v}" for k, v in params.items()]
        lines += [f"input.{p}: sha256 {d}" for p, d in sorted(self.inputs.items())]
        lines.append(f"wall_seconds: {time.perf_counter() - self.started:.6f}")
        return "\n".join(lines) + "\n"


def _lam(args):
    lam = parse_fugacity(args.lam)
    return float(lam) if getattr(args, "double", False) else lam


# ---------------------------------------------------------------------------
# subcommands


def graph_dot(G: Graph) -> str:
    lines = ["graph G {"]
    lines += [f"  {v};" for v in range(G.n)]
    lines += [f"  {u} -- {v};" for u, v in G.edges]
    lines.append("}")
    return "\n".join(lines) + "\n"


def reconfiguration_dot(G: Graph, lam=None, cap: int = 4096) -> str:
    space = StateSpace(G, cap)
    P = transition_matrix(G, lam, space=space) if lam is not None else None
    lines = ["graph R {"]
    for i in range(len(space)):
        lines.append(f'  s{i} [label="{{{",".join(map(str, space.set_at(i)))}}}"];')
    for i in range(len(space)):
        for j, _ in space.neighbors(i):
            if j > i:
                label = f' [label="{_fmt(P[i, j])}"]' if P is not None else ""
                lines.append(f"  s{i} -- s{j}{label};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_gen(run: _Run):
    a = run.args
    if a.random_balls is not None:
        if a.geometric:
            raise InvalidInput("--random-balls and --geometric are mutually exclusive")
        inst = random_balls(a.random_balls, a.dim, a.radius, a.box, a.seed)
        G = geometric_graph(inst)
        if a.geometric_out:
            Path(a.geometric_out).write_text(format_geometric(inst))
        comment = f"intersection graph of {a.random_balls} random balls"
    elif a.geometric:
        inst = parse_geometric(run.read(a.geometric))
        G = geometric_graph(inst)
        comment = f"intersection graph of {a.geometric}"
    elif a.family:
        spec = FamilySpec(a.family, t=a.t, p=a.p, k=a.k, L=a.L, d=a.d)
        G = generate(spec, a.max_n if a.max_n is not None else 200_000).graph
        comment = f"{a.family} t={a.t} p={a.p} k={a.k} L={a.L} d={a.d}"
    else:
        raise InvalidInput("one of --family, --geometric or --random-balls is required")
    run.emit(format_graph(G, comment))
    if a.dot:
        Path(a.dot).write_text(graph_dot(G))
    if a.reconfig_dot:
        Path(a.reconfig_dot).write_text(reconfiguration_dot(G, parse_fugacity(a.lam) if a.lam else None, a.max_states))


def cmd_z(run: _Run):
    a = run.args
    G = run.graph()
    lam = _lam(a)
    D = None
    if a.method == "tree_dp":
        if a.decomposition:
            D = parse_decomposition(run.read(a.decomposition), G.n)
            if isinstance(D, SeparatorTree):
                raise InvalidInput("tree_dp needs a path or tree decomposition")
        else:
            D = elimination_tree_decomposition(G)
    elif a.decomposition:
        raise InvalidInput("--decomposition only applies to --method tree_dp")
    Z = partition_function(G, lam, a.method, D, cap=a.max_states)
    run.emit(_fmt(Z) + "\n")


def cmd_pv(run: _Run):
    a = run.args
    G = run.graph()
    run.emit(activation_csv(activation_table(G, _lam(a), cap=a.max_states)))


def cmd_sample(run: _Run):
    a = run.args
    G = run.graph()
    initial = a.initial
    if initial not in ("empty", "greedy"):
        try:
            initial = tuple(int(x) for x in initial.split(",") if x.strip())
        except ValueError:
            raise InvalidInput("--initial must be empty, greedy or a comma-separated vertex list") from None
    cfg = ChainConfig(parse_fugacity(a.lam), a.seed, a.steps, a.chains, a.burn_in, initial, a.batches)
    est = estimate_activation(G, cfg, workers=a.workers)
    run.emit(est.to_csv())


def cmd_mix(run: _Run):
    a = run.args
    G = run.graph()
    lam = _lam(a)
    eps = Fraction(a.eps)
    space = StateSpace(G, a.max_states)
    res = exact_mixing_time(G, lam, eps, cap=a.max_states, space=space)
    pi = stationary_distribution(G, lam, space=space)
    rows = [("tau", res.tau), ("states", len(space)), ("mode", res.mode)]
    if len(space) > 1:
        sp = spectrum(G, lam, cap=max(a.max_states, len(space)), space=space)
        pmin = float(pi.min())
        lo, hi = spectral_mixing_bounds(sp.lambda_max, pmin, float(eps))
        lo1, hi1 = spectral_mixing_bounds(max(sp.lambda1, 0.0), pmin, float(eps))
        rows += [
            ("lambda1", sp.lambda1),
            ("lambdaN-1", sp.lambda_last),
            ("lambda_max", sp.lambda_max),
            ("gap", sp.gap),
            ("pi_min", pi.min()),
            ("lower_bound", lo),
            ("upper_bound", hi),
            ("lower_bound_lambda1", lo1),
            ("upper_bound_lambda1", hi1),
        ]
        if len(space) <= a.conductance_cap:
            c = conductance_exact(G, lam, cap=a.conductance_cap, space=space)
            rows += [("phi", c.phi), ("phi_lower_lambda1", 1 - 2 * float(c.phi)), ("phi_upper_lambda1", 1 - float(c.phi) ** 2 / 2)]
    run.emit(f"tau={res.tau}\n" + _report_csv(rows))
    if a.series:
        Path(a.series).write_text(mixing_csv(res))


def cmd_congestion(run: _Run):
    a = run.args
    G = run.graph()
    lam = _lam(a)
    D = parse_decomposition(run.read(a.decomposition), G.n)
    want = {"septree": SeparatorTree, "pathdecomp": PathDecomposition}[a.kind]
    if not isinstance(D, want):
        raise InvalidInput(f"decomposition file does not hold a {a.kind}")
    fam = PathFamily(G, D)
    space = StateSpace(G, a.max_states)
    table = congestion(G, lam, fam, cap=a.max_states, space=space)
    bound = theoretical_congestion_bound(G, lam, fam)
    pi = stationary_distribution(G, lam, space=space)
    extra = {
        "bound": bound.bound,
        "bound_alpha": bound.alpha,
        "bound_max_count": bound.max_count,
        "tau_upper": mixing_upper_bound_from_congestion(table.rho_max, pi.min()),
    }
    if a.with_tau:
        extra["tau_exact"] = exact_mixing_time(G, lam, cap=a.max_states, space=space).tau
    run.emit(table.to_csv(extra))


def cmd_lowerbound(run: _Run):
    a = run.args
    lam = _lam(a)
    if a.family == "complete_bipartite":
        spec = FamilySpec("complete_bipartite", t=a.t)
        G = generate(spec).graph
        space = StateSpace(G, a.max_states)
        lb = partition_lower_bound(G, lam, complete_bipartite_partition(space, a.t), space=space)
        rows = [
            ("bound", lb.bound),
            ("ratio", lb.ratio),
            ("reference_(lambda+1)^t", complete_bipartite_reference(a.t, lam)),
            ("pi_S", lb.masses["S"]),
            ("pi_one", lb.masses["one"]),
            ("pi_two", lb.masses["two"]),
        ]
    elif a.family == "blowup_doubling":
        if a.s is None:
            raise InvalidInput("--s is required for blowup_doubling")
        h = hkt_partition(a.k, a.t, lam, a.s, cap=a.max_states)
        G, space = h.graph, h.space
        lb = partition_lower_bound(G, lam, h.as_partition(), space=space)
        rows = [
            ("bound", lb.bound),
            ("ratio", lb.ratio),
            ("w_S", h.weights["S"]),
            ("w_I", h.weights["I"]),
            ("w_J", h.weights["J"]),
            ("claim_lower", h.claim_lower),
            ("claim_I_holds", int(h.claim_ok["I"])),
            ("claim_J_holds", int(h.claim_ok["J"])),
            ("S_upper_expr", h.upper_expr),
            ("S_count_upper_expr", h.count_upper_expr),
            ("S_upper_holds", int(h.upper_ok)),
        ]
    else:
        raise InvalidInput(f"lower bounds are available for complete_bipartite and blowup_doubling, not {a.family!r}")
    rows.append(("bound_eps_form", lb.bound_eps_form))
    if a.with_tau:
        rows.append(("tau_exact", exact_mixing_time(G, lam, cap=a.max_states, space=space).tau))
    run.emit(_report_csv(rows))


def cmd_decomp(run: _Run):
    a = run.args
    G = run.graph()
    if a.kind == "septree":
        inst = parse_geometric(run.read(a.geometric)) if a.geometric else None
        D = build_separator_tree(G, "geometric" if inst else "brute_force", inst=inst)
        rep = validate_separator_tree(G, D)
        w = rep.details.get("w", {})
        stats = {"nodes": len(D.bags), "valid": rep.valid, "max_bag": max(map(len, D.bags)), "max_w": max(w.values()) if w else 0.0}
    else:
        if a.geometric:
            raise InvalidInput("--geometric only applies to --kind septree")
        T = brute_force_tree_decomposition(G, a.exact_max_n) if G.n <= a.exact_max_n else elimination_tree_decomposition(G)
        if a.kind == "tree":
            D = T
        elif a.kind == "path":
            D = tree_to_path_decomposition(G, T)[0]
        else:
            D = path_decomposition_from_order(G)
        rep = validate_decomposition(G, D)
        stats = dict(decomposition_stats(G, D))
        stats["valid"] = rep.valid
    header = "".join(f"# {k}: {v}\n" for k, v in stats.items())
    run.emit(header + format_decomposition(D))


# ---------------------------------------------------------------------------
# parser


def _graph_args(p, states=4096):
    p.add_argument("--graph", required=True, help="edge-list graph file")
    p.add_argument("--max-n", type=int, default=24, help="refuse graphs with more vertices")
    p.add_argument("--max-states", type=int, default=states, help="cap on enumerated independent sets")


def _lam_args(p, required=True):
    p.add_argument("--lambda", dest="lam", required=required, help="fugacity, decimal or p/q")
    p.add_argument("--double", action="store_true", help="use floating point instead of exact rationals")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hcglauber", description="Hard-core Glauber dynamics toolkit", allow_abbrev=False)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="generate a graph file", allow_abbrev=False)
    p.add_argument("--family", choices=FAMILY_KINDS)
    for name in ("t", "p", "k", "d"):
        p.add_argument(f"--{name}", type=int, default=0 if name == "k" else 1)
    p.add_argument("--L", type=int, default=2)
    p.add_argument("--geometric", help="geometric instance file")
    p.add_argument("--random-balls", type=int, help="draw this many random balls")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--box", type=float, default=10.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--geometric-out", help="write the drawn balls here")
    p.add_argument("--dot", help="also write the graph as DOT")
    p.add_argument("--reconfig-dot", help="also write the reconfiguration graph as DOT")
    p.add_argument("--lambda", dest="lam", help="label reconfiguration edges with transition probabilities")
    p.add_argument("--max-n", type=int, default=None)
    p.add_argument("--max-states", type=int, default=4096)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("z", help="partition function", allow_abbrev=False)
    _graph_args(p, 1 << 22)
    _lam_args(p)
    p.add_argument("--method", choices=("brute", "tree_dp"), default="brute")
    p.add_argument("--decomposition", help="path or tree decomposition file for tree_dp")
    p.add_argument("--out")
    p.set_defaults(func=cmd_z)

    p = sub.add_parser("pv", help="exact activation probabilities (CSV)", allow_abbrev=False)
    _graph_args(p, 1 << 22)
    _lam_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_pv)

    p = sub.add_parser("sample", help="occupancy estimates from simulated chains (CSV)", allow_abbrev=False)
    p.add_argument("--graph", required=True)
    p.add_argument("--max-n", type=int, default=1_000_000)
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--burn-in", type=int, default=0)
    p.add_argument("--chains", type=int, default=1)
    p.add_argument("--batches", type=int, default=20)
    p.add_argument("--initial", default="empty", help="empty, greedy or a comma-separated vertex list")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("mix", help="exact mixing time and spectral report", allow_abbrev=False)
    _graph_args(p)
    _lam_args(p)
    p.add_argument("--eps", default="1/4")
    p.add_argument("--conductance-cap", type=int, default=20)
    p.add_argument("--series", help="write the (t, maxTV) series as CSV")
    p.add_argument("--out")
    p.set_defaults(func=cmd_mix)

    p = sub.add_parser("congestion", help="canonical-path congestion (CSV)", allow_abbrev=False)
    _graph_args(p)
    _lam_args(p)
    p.add_argument("--decomposition", required=True)
    p.add_argument("--kind", choices=("septree", "pathdecomp"), required=True)
    p.add_argument("--with-tau", action="store_true", help="also compute the exact mixing time")
    p.add_argument("--out")
    p.set_defaults(func=cmd_congestion)

    p = sub.add_parser("lowerbound", help="partition lower bound on the mixing time", allow_abbrev=False)
    p.add_argument("--family", required=True, choices=("complete_bipartite", "blowup_doubling"))
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--s", type=int)
    _lam_args(p)
    p.add_argument("--max-states", type=int, default=1 << 20)
    p.add_argument("--with-tau", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_lowerbound)

    p = sub.add_parser("decomp", help="build a decomposition file", allow_abbrev=False)
    p.add_argument("--graph", required=True)
    p.add_argument("--max-n", type=int, default=64)
    p.add_argument("--kind", choices=("path", "tree", "septree", "order"), default="tree")
    p.add_argument("--geometric", help="geometric instance for the geometric separator strategy")
    p.add_argument("--exact-max-n", type=int, default=14, help="optimal elimination order up to this size")
    p.add_argument("--out")
    p.set_defaults(func=cmd_decomp)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "double", False) and getattr(args, "lam", None) is None:
            raise InvalidInput("--double needs --lambda")
        args.func(_Run(args))
        return 0
    except InvalidInput as exc:
        print(f"error: invalid-input: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"error: budget-exceeded: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
