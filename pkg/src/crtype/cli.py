"""Command line interface: ``crtype <command> [file]``.

The defining function is read from a file or from stdin (``-``) and every
command prints one JSON report.  Exit codes: 0 success, 2 parse error,
3 precondition error, 4 inconclusive.
"""
from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction

from . import __version__
from .algebra import INF, ExactScalar
from .catlin import commutator_multitype
from .curves import one_type_search, q_type_estimate
from .errors import InconclusiveError, ParseError, PreconditionError
from .forms import levi_coefficients, levi_rank_at
from .kohn import run as kohn_run
from .parser import parse_polynomial
from .report import dumps, envelope
from .verify import lowest_stratum_scan, main_bound_check
from .weights import Weight, is_admissible_weight, is_distinguished, multitype_lower_bound

EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_INCONCLUSIVE = 0, 2, 3, 4
TOOL = "crtype"


def _scalar(text: str) -> ExactScalar:
    p = parse_polynomial(text, 1)
    if p.degree() > 0:
        raise PreconditionError(f"{text!r} is not a constant")
    return p.constant_term()


def _scalars(text: str | None):
    if text is None:
        return None
    return tuple(_scalar(part) for part in text.split(","))


def _point(text, n):
    pt = _scalars(text)
    if pt is not None and len(pt) != n:
        raise PreconditionError(f"--point has {len(pt)} coordinates, expected {n}")
    return pt


def cmd_levi(r, args):
    pt = _point(args.point, r.n)
    base = r if pt is None else r.shift_origin(pt)
    coeffs = levi_coefficients(base, args.q)
    orders = [c.vanishing_order() for c in coeffs]
    out = {
        "n": r.n,
        "q": args.q,
        "point": pt,
        "coefficients": coeffs,
        "orders": orders,
        "order": min(orders, default=INF),
    }
    try:
        out["levi_rank"] = levi_rank_at(r, pt)
    except PreconditionError as exc:
        out["levi_rank"] = None
        out["levi_rank_note"] = str(exc)
    return out, None


def cmd_type(r, args):
    coeffs = _scalars(args.coeffs) or (1,)
    res = one_type_search(r, _point(args.point, r.n), args.degree_bound, args.support, coeffs)
    return {
        "value": res.value,
        "witness": res.witness,
        "curves_examined": res.curves_examined,
        "working_degree": res.working_degree,
        "bound_kind": "lower",
    }, None


def cmd_qtype(r, args):
    coeffs = _scalars(args.coeffs) or (1,)
    res = q_type_estimate(r, args.q, _point(args.point, r.n), args.trials, args.seed,
                          args.degree_bound, args.support, coeffs)
    return {
        "value": res.value,
        "trials": res.trials,
        "redraws": res.redraws,
        "per_trial": res.per_trial,
        "embeddings": res.embeddings,
        "bound_kind": "heuristic",
    }, None


def cmd_weights(r, args):
    out = {}
    if args.weight:
        w = Weight(tuple(x.strip() for x in args.weight.split(",")))
        adm = is_admissible_weight(w, strict=args.strict)
        out["weight"] = w.entries
        out["admissible"] = {"valid": adm.valid, "certificates": adm.certificates,
                             "failing_k": adm.failing_k, "reason": adm.reason}
        if len(w) == r.n:
            dist = is_distinguished(r, w)
            out["distinguished"] = {"distinguished": dist.distinguished,
                                    "alpha": dist.witness_alpha, "beta": dist.witness_beta}
    cap = Fraction(args.cap) if args.cap is not None else None
    try:
        mb = multitype_lower_bound(r, cap, strict=args.strict)
    except ValueError as exc:
        # expected under --strict: no weight starting with 1 has a positive certificate for k=2
        out["multitype_lower_bound"] = {"weight": None, "reason": str(exc)}
    else:
        out["multitype_lower_bound"] = {"weight": mb.weight.entries, "capped": list(mb.capped),
                                        "entry_cap": mb.entry_cap}
    return out, None


def cmd_ctype(r, args):
    res = commutator_multitype(r, args.q, _point(args.point, r.n), args.length_cap, args.ansatz_degree)
    if res.status != "ok":
        raise InconclusiveError(res.reason, res.trace)
    out = {
        "ctype": res.prefix,
        "q": args.q,
        "levi_rank": res.rank,
        "boundary_system": res.boundary_system,
        "length_cap": res.length_cap,
        "ansatz_degree": res.ansatz_degree,
    }
    return out, (res.trace if args.trace else None)


def cmd_kohn(r, args):
    rep = kohn_run(r, args.q, _point(args.point, r.n), args.max_steps)
    gens = rep.final
    return {
        "q": rep.q,
        "terminated": rep.terminated,
        "terminated_at": rep.terminated_at,
        "witness": rep.witness,
        "steps": rep.steps,
        "generators": [
            {"polynomial": g, "provenance": tag} for g, tag in zip(gens.generators, gens.provenance)
        ],
    }, None


def cmd_check_bound(r, args):
    rep = main_bound_check(r, args.q, _point(args.point, r.n), args.t, args.t_source)
    return {
        "n": rep.n,
        "q": rep.q,
        "t": rep.t,
        "t_source": rep.t_source,
        "roundup": rep.roundup,
        "order": rep.order,
        "coefficient_orders": rep.coefficient_orders,
        "bound": rep.bound,
        "verdict": rep.verdict,
        "certification": rep.certification,
    }, (rep.trace or None)


def cmd_scan(r, args):
    rep = lowest_stratum_scan(r, args.q, args.samples, args.seed, _point(args.point, r.n))
    return rep, None


COMMANDS = {
    "levi": cmd_levi,
    "type": cmd_type,
    "qtype": cmd_qtype,
    "weights": cmd_weights,
    "ctype": cmd_ctype,
    "kohn": cmd_kohn,
    "check-bound": cmd_check_bound,
    "scan": cmd_scan,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=TOOL, description="Finite-type invariants of real hypersurfaces.")
    parser.add_argument("--version", action="version", version=f"{TOOL} {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("input", nargs="?", default="-", help="file with the defining function, or - for stdin")
        p.add_argument("--n", type=int, default=None, help="ambient dimension (default: largest variable index)")
        p.add_argument("--point", default=None, help="comma-separated base point; use --point=-1/2,1,0 for negative values")
        p.add_argument("--timing", action="store_true", help="include wall-clock time in the report")
        return p

    p = add("levi", "Levi-determinant coefficients and vanishing order")
    p.add_argument("--q", type=int, default=1)

    for name, help_text in (("type", "curve-contact search for the 1-type"),
                            ("qtype", "randomized embedding estimate of the q-type")):
        p = add(name, help_text)
        p.add_argument("--degree-bound", type=int, default=3)
        p.add_argument("--support", type=int, default=1)
        p.add_argument("--coeffs", default=None, help="comma-separated coefficient set")
        if name == "qtype":
            p.add_argument("--q", type=int, default=1)
            p.add_argument("--trials", type=int, default=8)
            p.add_argument("--seed", type=int, default=0)

    p = add("weights", "weight validity and multitype lower bound")
    p.add_argument("--cap", default=None, help="largest finite entry tried")
    p.add_argument("--weight", default=None, help="comma-separated weight to check")
    p.add_argument("--strict", action="store_true", help="require positive certificate integers")

    p = add("ctype", "commutator multitype")
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--length-cap", type=int, default=None)
    p.add_argument("--ansatz-degree", type=int, default=None)
    p.add_argument("--trace", action="store_true")

    p = add("kohn", "pre-radical Kohn algorithm")
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--max-steps", type=int, default=3)

    p = add("check-bound", "Levi order against the type bound")
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--t", default=None, help="type value (rational or inf)")
    p.add_argument("--t-source", choices=("model", "asserted", "searched"), default=None,
                   help="provenance of t (default: asserted when --t is given, else searched)")

    p = add("scan", "lowest-stratum scan over sampled boundary points")
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    return parser


def _read(path: str, stdin) -> str:
    if path == "-":
        return stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _flags(args) -> dict:
    skip = {"input", "command", "timing"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def main(argv=None, stdin=None, stdout=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    if args.command == "check-bound" and args.t_source is None:
        args.t_source = "asserted" if args.t is not None else "searched"
    flags = _flags(args)
    r = None
    start = time.perf_counter()
    try:
        r = parse_polynomial(_read(args.input, stdin), args.n)
        result, trace = COMMANDS[args.command](r, args)
    except ParseError as exc:
        err = {"kind": "parse", "message": exc.message, "line": exc.line, "column": exc.column}
        stdout.write(dumps(envelope(TOOL, __version__, args.command, flags, r, error=err)))
        return EXIT_PARSE
    except InconclusiveError as exc:
        err = {"kind": "inconclusive", "message": str(exc)}
        doc = envelope(TOOL, __version__, args.command, flags, r, error=err, trace=exc.trace or None)
        stdout.write(dumps(doc))
        return EXIT_INCONCLUSIVE
    except (PreconditionError, ValueError, OSError) as exc:
        err = {"kind": "precondition", "message": str(exc)}
        stdout.write(dumps(envelope(TOOL, __version__, args.command, flags, r, error=err)))
        return EXIT_PRECONDITION
    timing = f"{time.perf_counter() - start:.3f}s" if args.timing else None
    stdout.write(dumps(envelope(TOOL, __version__, args.command, flags, r, result, trace, timing)))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
