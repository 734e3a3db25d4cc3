"""Command-line entry point.

Every subcommand prints a JSON certificate on stdout (``bound`` prints CSV by
default) and can also write it to ``--cert``.  Exit codes:

  0   success
  2   falsification: a re-validated witness was found where freeness is claimed
  3   inconclusive: a search or count ran out of budget
  64  usage error (bad flag combination)
  1   any other failure
"""
from __future__ import annotations

import argparse
import csv
import io as _io
import sys
import time
from pathlib import Path

from . import bounds, counting, freeness, geometry, pipeline, product
from . import io as fmt

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_FALSIFIED = 2
EXIT_INCONCLUSIVE = 3
EXIT_USAGE = 64

EPILOG = """\
flag combinations
  polarity, certify-spectrum, check-hs      need --t and --q
  product, check-ts, orient, witness,
  multicolor, count --mode fwi               need --t --q (pair source) or --source f2 --s
  check-ts, orient, witness, multicolor      need --s
  count --mode bad-tuples                    needs --p and --k (p <= 8, k <= 6)
  count --mode rank-formula                  needs --s and --k
  count --mode spectral                      needs --t --q --k, with k >= w
  bound                                      needs --name; parameters per formula
  lll                                        needs --s >= 3 and --a >= 0
  --format dimacs|edges                      only with polarity, orient, witness, and needs --out
  --format csv                               only with bound

exit codes: 0 ok, 2 falsification, 3 inconclusive, 64 usage, 1 other failure
"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("parameters")
    for flag in ("--t", "--q", "--s", "--k", "--a", "--ell", "--n", "--p", "--seed"):
        g.add_argument(flag, type=int)
    g.add_argument("--C", type=float)
    g.add_argument("--delta", type=float)
    g.add_argument("--c-s", dest="c_s", type=float)
    g.add_argument("--attempts", type=int, default=1)
    g.add_argument("--prob", type=float, help="vertex sampling probability for witness (default: chosen from i_k)")
    o = common.add_argument_group("output")
    o.add_argument("--out", type=Path, help="graph / arc-list output file")
    o.add_argument("--cert", type=Path, help="also write the certificate here")
    o.add_argument("--format", choices=["dimacs", "edges", "json", "csv"])
    o.add_argument("--budget-seconds", type=float, default=freeness.DEFAULT_BUDGET_SECONDS)
    o.add_argument("--deterministic", action="store_true", help="omit timings so output is byte-stable")
    o.add_argument("--threads", type=int, default=1, help="accepted for compatibility; work runs in one process")

    parser = _Parser(prog="polarity-ramsey", description="Polarity-graph Ramsey witnesses and bounds.",
                     epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_, epilog=EPILOG,
                              formatter_class=argparse.RawDescriptionHelpFormatter)

    p = add("polarity", "build G(t, q) and certify its parameters")
    p.add_argument("--complement", action="store_true")
    p = add("certify-spectrum", "check A^2 = aJ + (d-a)I")
    p.add_argument("--complement", action="store_true")
    p.add_argument("--graph", type=Path, help="DIMACS file instead of G(t, q)")
    add("check-hs", "search for H_s in (complement G(t,q), G(t,q))")
    for name, help_ in (("product", "build the pair digraph"),
                        ("check-ts", "search for a transitive tournament T_s"),
                        ("orient", "random orientation of the pair digraph"),
                        ("witness", "certified K_s-free graph with exact independence number"),
                        ("multicolor", "random ell-colouring from the pair digraph")):
        p = add(name, help_)
        p.add_argument("--source", choices=["pair", "f2"], default="pair")
    p = add("count", "forward-independent tuple counts and bounds")
    p.add_argument("--mode", choices=["fwi", "bad-tuples", "rank-formula", "spectral"], required=True)
    p.add_argument("--source", choices=["pair", "f2"], default="pair")
    p.add_argument("--method", help="fwi: dfs|enumerate; bad-tuples: dfs|rank-recursion")
    p = add("bound", "closed-form bound evaluators")
    p.add_argument("--name", required=True, action="append",
                   choices=list(bounds.FORMULAS) + ["erdos-szekeres", "thm-pair"])
    add("lll", "local lemma optimiser")
    return parser


# -- helpers ----------------------------------------------------------------------

def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.command} needs " + ", ".join("--" + m.replace("_", "-") for m in missing))


def _polarity(args):
    _need(args, "t", "q")
    return geometry.build_polarity_graph(args.t, args.q)


def _pair(args):
    G = _polarity(args)
    return product.pair_params(G.complement(), G)


def _digraph(args):
    if args.source == "f2":
        _need(args, "s")
        return product.build_f2_digraph(args.s)
    _need(args, "t", "q")
    G = geometry.build_polarity_graph(args.t, args.q)
    return product.build_pair_digraph(G.complement(), G)


def _report_code(report: freeness.SearchReport, expect_free: bool) -> int:
    if not report.conclusive:
        return EXIT_INCONCLUSIVE
    if report.found and expect_free:
        return EXIT_FALSIFIED
    return EXIT_OK


def _write_graph(args, G) -> None:
    if args.out is None:
        return
    if args.format == "edges":
        fmt.write_edge_list(G, args.out)
    else:
        fmt.write_dimacs(G, args.out)


def _digraph_summary(D) -> dict:
    out = {"vertices": D.n, "arcs": D.arc_count(), "loops": len(D.loops())}
    meta = getattr(D, "meta", {})
    if meta.get("construction") == "f2":
        s = meta["s"]
        out.update({
            "stated_vertex_count": meta["stated_vertex_count"],
            "defined_vertex_count": meta["defined_vertex_count"],
            "reference_size": 2 ** (2 * s - 3),
        })
    return out


def _notes(D) -> list[str]:
    note = getattr(D, "meta", {}).get("discrepancy")
    return [note] if note else []


# -- subcommands ------------------------------------------------------------------

def cmd_polarity(args):
    G = _polarity(args)
    if args.complement:
        G = G.complement()
    n, d, a = geometry.polarity_counts(args.t, args.q)
    cert = geometry.certify_spectrum(G)
    results = {
        "n": G.n, "d": G.degree, "loops": G.loop_count, "edges": G.edge_count,
        "expected": {"n": n, "d": d, "a": a} if not args.complement else None,
        "spectrum": cert.as_dict(),
        "field": G.meta.get("field"),
    }
    _write_graph(args, G)
    code = EXIT_OK if cert.verified else EXIT_FAIL
    return code, results, []


def cmd_certify_spectrum(args):
    if args.graph is not None:
        G = fmt.read_dimacs(args.graph)
    else:
        G = _polarity(args)
    if args.complement:
        G = G.complement()
    try:
        cert = geometry.certify_spectrum(G)
    except geometry.SpectralError as exc:
        return EXIT_FAIL, {"verified": False, "reason": str(exc)}, []
    return (EXIT_OK if cert.verified else EXIT_FAIL), {"spectrum": cert.as_dict()}, []


def cmd_check_hs(args):
    _need(args, "t", "q", "s")
    G = _polarity(args)
    report = freeness.find_Hs_witness(G.complement(), G, args.s, args.budget_seconds)
    expect_free = args.s >= args.t + 2
    if report.found:
        report_valid = freeness.validate_hs_witness(G.complement(), G, report.witness)
    else:
        report_valid = None
    results = {
        "property": f"H_{args.s}-free",
        "expected_free": expect_free,
        "report": report.as_dict(not args.deterministic),
        "witness_revalidated": report_valid,
    }
    code = _report_code(report, expect_free and bool(report_valid))
    return code, results, []


def cmd_product(args):
    D = _digraph(args)
    results = {"digraph": _digraph_summary(D)}
    if args.source == "pair":
        results["pair"] = _pair(args).as_dict()
    if args.out is not None:
        fmt.write_arc_list(D, args.out)
    return EXIT_OK, results, _notes(D)


def _ts_expected_free(args) -> bool:
    if args.source == "f2":
        return True
    return args.s >= args.t + 2


def cmd_check_ts(args):
    _need(args, "s")
    D = _digraph(args)
    report = freeness.find_Ts_witness(D, args.s, args.budget_seconds)
    valid = freeness.validate_ts_witness(D, report.witness) if report.found else None
    expect_free = _ts_expected_free(args)
    results = {
        "property": f"T_{args.s}-free",
        "expected_free": expect_free,
        "digraph": _digraph_summary(D),
        "report": report.as_dict(not args.deterministic),
        "witness_revalidated": valid,
    }
    return _report_code(report, expect_free and bool(valid)), results, _notes(D)


def cmd_count(args):
    mode = args.mode
    if mode == "fwi":
        _need(args, "k")
        D = _digraph(args)
        res = counting.fwi_count(D, args.k, method=args.method or "dfs")
        return EXIT_OK, {"count": res.as_dict(), "digraph": _digraph_summary(D)}, _notes(D)
    if mode == "bad-tuples":
        _need(args, "p", "k")
        res = counting.bad_tuple_count(args.p, args.k, method=args.method or "dfs")
        return EXIT_OK, {"count": res.as_dict()}, []
    if mode == "rank-formula":
        _need(args, "s", "k")
        res = counting.rank_formula_bound(args.s, args.k)
        return EXIT_OK, {"count": res.as_dict(), "summands": counting.rank_formula_summands(args.s, args.k)}, []
    _need(args, "t", "q", "k")
    pair = _pair(args)
    res = counting.spectral_fwi_bound(pair, args.k)
    return EXIT_OK, {"count": res.as_dict(), "pair": pair.as_dict()}, []


def cmd_orient(args):
    _need(args, "s", "seed")
    D = _digraph(args)
    o = pipeline.orient(D, args.seed)
    report = freeness.find_clique(o.graph, args.s, args.budget_seconds)
    valid = freeness.validate_clique(o.graph, report.witness) if report.found else None
    results = {
        "n": o.graph.n, "edges": o.graph.edge_count,
        "pi": [int(x) for x in o.pi],
        "clique_report": report.as_dict(not args.deterministic),
    }
    _write_graph(args, o.graph)
    return _report_code(report, _ts_expected_free(args) and bool(valid)), results, _notes(D)


def cmd_witness(args):
    _need(args, "s", "seed")
    D = _digraph(args)
    o = pipeline.orient(D, args.seed)
    gamma_report = freeness.find_clique(o.graph, args.s, args.budget_seconds)
    if gamma_report.found and freeness.validate_clique(o.graph, gamma_report.witness):
        if _ts_expected_free(args):
            return EXIT_FALSIFIED, {"clique_report": gamma_report.as_dict(not args.deterministic)}, []
    if not gamma_report.conclusive:
        return EXIT_INCONCLUSIVE, {"clique_report": gamma_report.as_dict(not args.deterministic)}, []
    try:
        w = pipeline.witness_from_digraph(D, args.s, args.seed, k=args.k, p=args.prob,
                                          attempts=args.attempts, certify_digraph=False,
                                          budget_seconds=args.budget_seconds)
    except pipeline.PipelineError as exc:
        return EXIT_INCONCLUSIVE, {"error": str(exc)}, []
    _write_graph(args, w.graph)
    code = EXIT_OK if w.certified else EXIT_INCONCLUSIVE
    return code, {"witness": w.as_dict(not args.deterministic)}, _notes(D)


def cmd_multicolor(args):
    _need(args, "ell", "n", "s", "seed")
    D = _digraph(args)
    col = pipeline.multicolor_build(D, args.ell, args.n, args.seed)
    counts = pipeline.monochromatic_counts(col, args.s)
    expected = pipeline.multicolor_expected(D, args.ell, args.n, args.s)
    bad = [c for c in range(1, args.ell) if counts[c] > 0]
    results = {
        "coloring": col.as_dict(),
        "monochromatic_counts": counts,
        "expected_last_color": {"exact": f"{expected.numerator}/{expected.denominator}",
                                "float": float(expected)},
        "falsified_colors": bad,
    }
    code = EXIT_FALSIFIED if bad and _ts_expected_free(args) else EXIT_OK
    return code, results, _notes(D)


def _bound_reports(args) -> list[bounds.BoundReport]:
    out = []
    for name in args.name:
        if name == "erdos-szekeres":
            _need(args, "s", "k")
            out.append(bounds.erdos_szekeres_upper(args.s, args.k))
        elif name == "thm-pair":
            _need(args, "t", "q", "k")
            out.append(bounds.thm28_eval(_pair(args), args.k))
        else:
            _need(args, "s")
            params = {"s": args.s}
            for key in ("k", "a", "C", "ell", "delta", "c_s"):
                if getattr(args, key) is not None:
                    params[key] = getattr(args, key)
            try:
                out.append(bounds.lower_bound_formula(name, **params))
            except KeyError as exc:
                raise UsageError(f"bound {name} needs --{exc.args[0].replace('_', '-')}") from None
    return out


def cmd_bound(args):
    reports = _bound_reports(args)
    return EXIT_OK, {"bounds": [r.as_dict() for r in reports]}, []


def cmd_lll(args):
    _need(args, "s", "a")
    return EXIT_OK, {"lll": bounds.spencer_lll(args.s, args.a).as_dict()}, []


COMMANDS = {
    "polarity": cmd_polarity,
    "certify-spectrum": cmd_certify_spectrum,
    "check-hs": cmd_check_hs,
    "product": cmd_product,
    "check-ts": cmd_check_ts,
    "count": cmd_count,
    "orient": cmd_orient,
    "witness": cmd_witness,
    "multicolor": cmd_multicolor,
    "bound": cmd_bound,
    "lll": cmd_lll,
}

GRAPH_COMMANDS = {"polarity", "orient", "witness"}


def _check_format(args) -> str:
    default = "csv" if args.command == "bound" else "json"
    f = args.format or default
    if f == "csv" and args.command != "bound":
        raise UsageError("--format csv is only valid with bound")
    if f in ("dimacs", "edges"):
        if args.command not in GRAPH_COMMANDS:
            raise UsageError(f"--format {f} is only valid with polarity, orient, witness")
        if args.out is None:
            raise UsageError(f"--format {f} needs --out")
    return f


def _bounds_csv(args) -> str:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(bounds.CSV_HEADER)
    for r in _bound_reports(args):
        writer.writerow(r.csv_row())
    return buf.getvalue()


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        f = _check_format(args)
        if f == "csv":
            text = _bounds_csv(args)
            sys.stdout.write(text)
            if args.out is not None:
                args.out.write_text(text)
            return EXIT_OK
        code, results, notes = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"polarity-ramsey: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except counting.BudgetExceeded as exc:
        print(f"polarity-ramsey: inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (ValueError, OSError) as exc:
        print(f"polarity-ramsey: error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    inputs = {k: v for k, v in vars(args).items()
              if k not in ("command", "out", "cert", "format", "deterministic", "budget_seconds", "threads")
              and v is not None and not isinstance(v, Path)}
    timings = None if args.deterministic else {"total_seconds": time.perf_counter() - start}
    if args.threads != 1:
        notes = notes + [f"--threads {args.threads} requested; work ran in a single process"]
    cert = fmt.make_certificate([args.command] + argv[1:], results, seed=args.seed, inputs=inputs,
                                notes=notes, timings=timings)
    cert["exit_code"] = code
    text = fmt.dumps_certificate(cert)
    sys.stdout.write(text)
    cert_path = args.cert
    if cert_path is None and args.out is not None and args.command in GRAPH_COMMANDS:
        cert_path = Path(str(args.out) + ".cert.json")
    if cert_path is not None:
        cert_path.write_text(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
