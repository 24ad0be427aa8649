"""Command-line entry point.

Every subcommand prints a plain-text report (``--json`` for a machine
readable one).  Exit codes: 0 a verdict was produced, even a negative one;
1 bad input; 2 instance too large; 3 an internal invariant failed.
"""

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import generators, matroids, oracles, solvers
from .errors import (
    CapacityError,
    DomainError,
    InputError,
    InternalInvariantError,
    VerdictError,
)
from .graph import (
    arc_connectivity,
    dijoin_deficit,
    flip,
    members,
)
from .instance_io import Instance, format_instance, parse_vector, read_instance
from .lp import fmt, is_integral
from .setfam import restrict
from .transshipment import TransshipmentInstance, net_outflow, solve_transshipment

EXIT_OK, EXIT_INPUT, EXIT_CAPACITY, EXIT_INTERNAL = 0, 1, 2, 3


@dataclass
class CertificateReport:
    command: str
    verdict: str
    witness: list = field(default_factory=list)  # (label, value) pairs
    checks: list = field(default_factory=list)  # (property, passed) pairs

    def add(self, label, value):
        self.witness.append((label, value))
        return self

    def check(self, name, passed):
        self.checks.append((name, bool(passed)))
        return self

    def text(self):
        lines = [f"command: {self.command}", f"verdict: {self.verdict}"]
        lines += [f"{label}: {_show(value)}" for label, value in self.witness]
        lines += [f"check {name}: {'pass' if ok else 'fail'}" for name, ok in self.checks]
        return "\n".join(lines) + "\n"

    def json(self):
        return json.dumps({
            "command": self.command,
            "verdict": self.verdict,
            "witness": {label: _plain(value) for label, value in self.witness},
            "checks": {name: ok for name, ok in self.checks},
        }, sort_keys=True) + "\n"


def _show(value):
    if isinstance(value, (list, tuple, frozenset, set)):
        return " ".join(_show(v) for v in value) if value else "-"
    if isinstance(value, Fraction):
        return fmt(value)
    if isinstance(value, float):
        return "inf" if value > 0 else "-inf"
    return str(value)


def _plain(value):
    if isinstance(value, (list, tuple, frozenset, set)):
        return [_plain(v) for v in value]
    if isinstance(value, Fraction):
        return fmt(value)
    if isinstance(value, float):
        return str(value)
    return value


def vertex_list(U):
    return list(members(U))


def arc_list(J):
    return sorted(J)


# -- helpers -------------------------------------------------------------------------

def _load(path):
    try:
        return read_instance(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _read_text(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _bounds(text, m, default):
    if text is None:
        return None if default is None else (default,) * m
    return parse_vector(text, m, allow_inf=True)


def _arc_ids(text):
    if text is None:
        return frozenset()
    return frozenset(parse_vector(text))


def _verdict_report(command, exc):
    rep = CertificateReport(command, type(exc).__name__)
    rep.add("reason", str(exc))
    if exc.witness is not None:
        w = exc.witness
        rep.add("witness", vertex_list(w) if isinstance(w, int) else w)
    if exc.slack is not None:
        rep.add("slack", exc.slack)
    return rep


# -- subcommands ---------------------------------------------------------------------

def cmd_verify_hypothesis(args):
    inst = _load(args.infile)
    rep = solvers.verify_hypothesis(inst.d, args.tau, args.k)
    out = CertificateReport("verify-hypothesis", "ok" if rep.ok else "violated")
    if not rep.ok:
        out.add("violating set", vertex_list(rep.violating_set)).add("slack", rep.slack)
    return out


def _flip_report(command, d, cert):
    out = CertificateReport(command, "flip found")
    out.add("flip", arc_list(cert.J)).add("k", cert.k).add("tau", cert.tau)
    out.check(f"{cert.k}-arc-connected after flip", cert.k_flip)
    out.check("family constraints", cert.family_ok)
    out.check(f"flip is a {cert.k}-dijoin", dijoin_deficit(d, cert.J, cert.k) is None)
    if cert.near_eulerian is not None:
        out.check("near-Eulerian", cert.near_eulerian)
    return out


def cmd_find_flip(args):
    inst = _load(args.infile)
    tau = 2 * args.k if args.tau is None else args.tau
    f = None
    if args.fn is not None:
        f = inst.oracle(args.fn)
        if args.family is not None:
            f = restrict(f, inst.family(args.family))
    elif args.family is not None:
        raise InputError("--family needs --fn")
    cert = solvers.find_k_flip(inst.d, tau, args.k, f)
    return _flip_report("find-flip", inst.d, cert)


def cmd_orient(args):
    inst = _load(args.infile)
    cert = solvers.near_eulerian_flip(inst.d, args.k)
    out = _flip_report("orient", inst.d, cert)
    out.add("orientation", [f"{t}>{h}" for t, h in flip(inst.d, cert.J).arcs])
    return out


def _decomp_report(command, res):
    out = CertificateReport(command, "verified" if res.verified else "failed")
    for role, part in zip(res.roles, (res.part1, res.part2)):
        out.add(role, arc_list(part))
    for name, ok in res.checks:
        out.check(name, ok)
    return out


def cmd_decompose(args):
    inst = _load(args.infile)
    if args.weighted:
        res = solvers.weighted_decompose(inst.d, inst.d.weights, args.tau, args.k)
    else:
        res = solvers.decompose_flip_dijoin(inst.d, args.tau, args.k)
    return _decomp_report("decompose", res)


def cmd_dijoin_pair(args):
    inst = _load(args.infile)
    return _decomp_report("dijoin-pair", solvers.dijoin_pair_decompose(inst.d, args.tau, args.k))


def cmd_solve(args):
    inst = _load(args.infile)
    d = inst.d
    objective = None
    if args.objective is not None:
        objective = parse_vector(_read_text(args.objective), d.m)
    tsi = solvers.TwoSystemInstance(
        d, inst.oracle(args.sys1), inst.oracle(args.sys2),
        _bounds(args.lower, d.m, None), _bounds(args.upper, d.m, None), objective)
    res = solvers.solve_two_systems(tsi)
    out = CertificateReport("solve", res.status)
    if res.base_point is not None:
        out.add("base point", list(res.base_point))
    if res.status == solvers.INTEGRAL:
        out.add("y", list(res.y))
        out.check("both systems", solvers.check_two_systems(d, tsi.f1, tsi.f2, res.y) is None)
        out.check("bounds", all(lo <= v <= hi for v, lo, hi in zip(res.y, tsi.lower, tsi.upper)))
    elif res.status == solvers.VIOLATING_SET:
        out.add("violating set", vertex_list(res.violating_set)).add("excess", res.excess)
    return out


def cmd_transship(args):
    inst = _load(args.infile)
    d = inst.d
    b = parse_vector(_read_text(args.b), d.n)
    tsi = TransshipmentInstance(d, b, _bounds(args.lower, d.m, None), _bounds(args.upper, d.m, None))
    res = solve_transshipment(tsi)
    if res.feasible:
        out = CertificateReport("transship", "feasible").add("flow", list(res.flow))
        out.check("net outflow equals b", tuple(net_outflow(d, res.flow)) == tuple(b))
        out.check("bounds", all(lo <= v <= hi for v, lo, hi in zip(res.flow, tsi.lower, tsi.upper)))
        return out
    out = CertificateReport("transship", "infeasible")
    out.add("violating set", vertex_list(res.violating_set)).add("excess", res.excess)
    return out


def cmd_check(args):
    inst = _load(args.infile)
    d = inst.d
    J = _arc_ids(args.set)
    if args.what == "dijoin":
        bad = dijoin_deficit(d, J, args.k)
        out = CertificateReport("check", "true" if bad is None else "false")
        if bad is not None:
            out.add("short dicut", vertex_list(bad))
        return out
    target = flip(d, J) if args.what == "flip" else d
    if d.n == 1:
        return CertificateReport("check", "true")
    value, cut = arc_connectivity(target, limit=args.k)
    out = CertificateReport("check", "true" if value >= args.k else "false")
    out.add("arc connectivity", value if value < args.k else f">={args.k}")
    if value < args.k:
        out.add("cut", vertex_list(cut))
    return out


def cmd_repro(args):
    inst = oracles.pairwise_sum_system()
    lp = solvers.arc_lp(inst)
    out = CertificateReport("repro bad-example", "fractional vertex")
    for row in lp.rows:
        if isinstance(row.tag[0], int):
            terms = " + ".join(f"y{a}" if c == 1 else f"{c}*y{a}" for a, c in row.coeffs)
            out.add(f"row {row.tag[0]} {{{' '.join(map(str, members(row.tag[1])))}}}",
                    f"{terms} <= {row.rhs}")
    hits = oracles.fractional_vertex_search(inst)
    for hit in hits:
        out.add("vertex", list(hit.point.values)).add("tight rank", hit.tight_rank)
    out.check("vertex found", bool(hits))
    return out


def cmd_search_fractional(args):
    inst = _load(args.infile)
    lo, hi = args.box
    d = inst.d
    tsi = solvers.TwoSystemInstance(d, inst.oracle(args.sys1), inst.oracle(args.sys2),
                                    (lo,) * d.m, (hi,) * d.m)
    hits = oracles.fractional_vertex_search(tsi)
    out = CertificateReport("search-fractional", f"{len(hits)} fractional vertices")
    for hit in hits:
        out.add("vertex", list(hit.point.values)).add("tight rank", hit.tight_rank)
        out.check("rank equals dimension", hit.tight_rank == d.m)
        out.check("fractional", not is_integral(hit.point))
    return out


def cmd_reduce_matroids(args):
    cat, triples = matroids.catalogue_triples()
    if args.catalog != "tiny":
        wanted = args.catalog.split("/")
        if len(wanted) != 3 or any(w not in cat for w in wanted):
            raise InputError("--catalog is 'tiny' or three catalogue names joined by '/'")
        triples = [tuple(wanted)]
    agree = 0
    with_basis = 0
    for names in triples:
        has_basis, has_solution, _ = oracles.reduction_equivalence(*(cat[x] for x in names))
        agree += has_basis == has_solution
        with_basis += has_basis
    out = CertificateReport("reduce-matroids", "agree" if agree == len(triples) else "disagree")
    out.add("triples", len(triples)).add("with common basis", with_basis).add("agreeing", agree)
    out.check("equivalence", agree == len(triples))
    return out


def cmd_gen(args):
    rng = generators.make_rng(args.seed)
    if args.model == "cycle":
        d = generators.cycle(args.n)
    elif args.model == "bidirected":
        d = generators.bidirected(args.n)
    else:
        if args.target_ec is None:
            raise InputError("random-ec needs --target-ec")
        d = generators.random_ec(args.n, args.target_ec, rng, simple=not args.multigraph)
    return format_instance(Instance(d))


def cmd_conjecture_search(args):
    checked, hits = oracles.conjecture_search(args.tau, args.n, args.trials, args.seed)
    out = CertificateReport("conjecture-search", "counterexample" if hits else "no counterexample")
    out.add("digraphs checked", checked)
    for hit in hits:
        out.add("hit", [f"k={hit.k}"] + [f"{t}>{h}" for t, h in hit.d.arcs])
    return out


# -- parser ----------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="subflow", description=__doc__.splitlines()[0])
    p.add_argument("--json", action="store_true", help="machine readable report")
    sub = p.add_subparsers(dest="command", required=True)

    def cmd(name, func, help_text):
        s = sub.add_parser(name, help=help_text)
        s.set_defaults(func=func)
        return s

    def with_in(s):
        s.add_argument("--in", dest="infile", required=True, help="instance file")
        return s

    s = with_in(cmd("verify-hypothesis", cmd_verify_hypothesis, "check the cut inequality"))
    s.add_argument("--tau", type=int, required=True)
    s.add_argument("--k", type=int, required=True)

    s = with_in(cmd("find-flip", cmd_find_flip, "find a k-arc-connected flip"))
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--tau", type=int)
    s.add_argument("--family")
    s.add_argument("--fn")

    s = with_in(cmd("decompose", cmd_decompose, "flip plus dijoin decomposition"))
    s.add_argument("--tau", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--weighted", action="store_true", help="use arc weights w=0|1")

    s = with_in(cmd("orient", cmd_orient, "near-Eulerian k-arc-connected flip"))
    s.add_argument("--k", type=int, required=True)

    s = with_in(cmd("dijoin-pair", cmd_dijoin_pair, "split into two dijoins"))
    s.add_argument("--tau", type=int, required=True)
    s.add_argument("--k", type=int, required=True)

    s = with_in(cmd("solve", cmd_solve, "integral point of two flow systems"))
    s.add_argument("--sys1", required=True)
    s.add_argument("--sys2", required=True)
    s.add_argument("--lower", help="one value or one per arc; inf allowed")
    s.add_argument("--upper", help="one value or one per arc; inf allowed")
    s.add_argument("--objective", help="file with one integer per arc")

    s = with_in(cmd("transship", cmd_transship, "b-transshipment within bounds"))
    s.add_argument("--b", required=True, help="file with one integer per vertex")
    s.add_argument("--lower")
    s.add_argument("--upper")

    s = with_in(cmd("check", cmd_check, "check a flip, dijoin or connectivity"))
    s.add_argument("--what", choices=("flip", "dijoin", "connectivity"), required=True)
    s.add_argument("--set", help="arc ids, comma or space separated")
    s.add_argument("--k", type=int, required=True)

    s = cmd("repro", cmd_repro, "reproduce a known example")
    s.add_argument("example", choices=("bad-example",))

    s = with_in(cmd("search-fractional", cmd_search_fractional, "enumerate fractional vertices"))
    s.add_argument("--sys1", required=True)
    s.add_argument("--sys2", required=True)
    s.add_argument("--box", type=int, nargs=2, default=(0, 1), metavar=("LO", "HI"))

    s = cmd("reduce-matroids", cmd_reduce_matroids, "three matroids as two flow systems")
    s.add_argument("--catalog", default="tiny", help="'tiny' or NAME/NAME/NAME")

    s = cmd("gen", cmd_gen, "write a generated instance")
    s.add_argument("--model", choices=("cycle", "bidirected", "random-ec"), required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--target-ec", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--multigraph", action="store_true", help="allow parallel edges")

    s = cmd("conjecture-search", cmd_conjecture_search, "look for dijoin-pair counterexamples")
    s.add_argument("--tau", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--trials", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    return p


def run(argv, out=sys.stdout, err=sys.stderr):
    args = build_parser().parse_args(argv)
    try:
        result = args.func(args)
    except VerdictError as exc:
        result = _verdict_report(args.command, exc)
    except (InputError, DomainError) as exc:
        err.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except CapacityError as exc:
        err.write(f"capacity: {exc}\n")
        return EXIT_CAPACITY
    except InternalInvariantError as exc:
        err.write(f"internal invariant failed: {exc}\n")
        return EXIT_INTERNAL
    if isinstance(result, str):
        out.write(result)
    else:
        out.write(result.json() if args.json else result.text())
    return EXIT_OK


def main(argv=None):
    try:
        return run(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:  # argparse usage errors count as bad input
        return EXIT_INPUT if exc.code else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
