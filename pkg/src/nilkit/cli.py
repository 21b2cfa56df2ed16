"""``nilkit`` command-line front end.

Output is plain ``key=value`` lines (or tab-separated rows) so it can be
diffed and piped.  Exit codes: 0 success, 1 verification failure, 2 usage
error, 3 resource limit.
"""
from __future__ import annotations

import argparse
import sys

from . import __version__
from .backends import CyclicBackend, GroupHomomorphism, NormalSubgroup, Subset
from .errors import NilkitError, ResourceLimitError, UnsupportedBackendError
from .parsing import parse_commutator, parse_generator_words, parse_group, parse_lengths, parse_word, read_set_file

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _bool(v) -> str:
    return "true" if v else "false"


def _emit(lines, out):
    for line in lines:
        print(line, file=out)


# -- collect / basics / decompose --------------------------------------------


def cmd_collect(args, out):
    from .collection import collect

    w = parse_word(args.word, args.rank, args.step)
    if w.rank != args.rank:
        raise UsageError("word uses letters beyond --rank")
    form, trace = collect(w, trace=args.trace, budget=args.budget)
    if args.trace:
        for st in trace.steps:
            print(str(st), file=out)
        print("--", file=out)
    for c, e in form.items():
        print(f"{c}\t{e}", file=out)
    return EXIT_OK


def cmd_basics(args, out):
    from .commutators import enumerate_basic

    table = enumerate_basic(args.rank, args.step)
    bounds = table.bounds(parse_lengths(args.lengths)) if args.lengths else None
    for i, c in enumerate(table, start=1):
        row = f"{i}\t{c}\t{c.weight}"
        if bounds is not None:
            row += f"\t{bounds[i - 1]}"
        print(row, file=out)
    print(f"count={len(table)}", file=out)
    return EXIT_OK


def _form(text):
    from .commutators import CommutatorForm

    return CommutatorForm(parse_commutator(text.replace("#", "x")))


def cmd_decompose(args, out):
    from .decomposition import ball_factor_bound, decompose_power_commutator, decompose_product_commutator, power_in_ball

    form = _form(args.form)
    if args.kind == "product":
        lists, nxt = [], 1
        for n in parse_lengths(args.lengths):
            lists.append(list(range(nxt, nxt + n)))
            nxt += n
        res = decompose_product_commutator(form, lists, args.step)
        for c, e in res.factors:
            print(f"{c}\t{e}", file=out)
        print(f"count={len(res)}", file=out)
    elif args.kind == "power":
        res = decompose_power_commutator(form, parse_lengths(args.lengths), args.step)
        for c, e in res.factors:
            print(f"{c}\t{e}", file=out)
        print(f"leading_exponent={res.leading_exponent}", file=out)
    else:
        if args.m is None:
            raise UsageError("ball needs --m")
        L = parse_lengths(args.lengths)
        bw = power_in_ball(form, L, args.m, args.step)
        print(f"word={bw}", file=out)
        print(f"factors={bw.count}", file=out)
        print(f"bound={ball_factor_bound(form, L, args.step)}", file=out)
    return EXIT_OK


# -- prog -----------------------------------------------------------------


def _spec(args):
    from .progressions import ProgressionSpec

    G = parse_group(args.group)
    gens = parse_generator_words(G, args.gens)
    return ProgressionSpec(G, gens, parse_lengths(args.lens))


def cmd_prog_enum(args, out):
    from .progressions import enumerate_ball, enumerate_nilpotent_progression, enumerate_nilprogression, enumerate_ordered

    spec = _spec(args)
    fn = {
        "ordered": enumerate_ordered,
        "star": lambda s: enumerate_nilprogression(s, args.budget),
        "nilpotent": enumerate_nilpotent_progression,
        "ball": enumerate_ball,
    }[args.kind]
    S = fn(spec)
    print(f"kind={args.kind}", file=out)
    print(f"size={len(S)}", file=out)
    print(f"symmetric={_bool(S.is_symmetric)}", file=out)
    if not args.count_only:
        for g in S:
            print(spec.backend.format_element(g), file=out)
    return EXIT_OK


def cmd_prog_chain(args, out):
    from .progressions import check_chain

    rep = check_chain(_spec(args), cap=args.cap, budget=args.budget)
    _emit(rep.lines(), out)
    return EXIT_OK if rep.ok else EXIT_FAIL


# -- approx ---------------------------------------------------------------


def _set(G, path):
    return Subset(G, read_set_file(G, path))


def _witness(A):
    from .approximate import minimal_witness

    return minimal_witness(A)


def _witness_lines(w, G):
    yield f"K={w.K}"
    yield f"exact={_bool(w.exact)}"
    yield f"lower_bound={w.lower_bound}"
    yield f"valid={_bool(w.verify())}"
    for x in sorted(w.X, key=G.canonical_key):
        yield f"x={G.format_element(x)}"


def cmd_approx(args, out):
    from . import approximate as ap

    G = parse_group(args.group)
    sub = args.approx_cmd
    if sub == "converse":
        from .acceptance import converse_corpus

        fails = 0
        for i, inst in enumerate(converse_corpus(), start=1):
            rep = ap.verify_splitting_converse(*inst)
            fails += not rep.consistent
            hyp = "".join("1" if h else "0" for h in rep.hypotheses)
            print(f"instance={i}\thypotheses={hyp}\tconclusion={_bool(rep.conclusion)}\tlhs={rep.lhs}\trhs={rep.rhs}", file=out)
        print(f"violations={fails}", file=out)
        return EXIT_FAIL if fails else EXIT_OK
    if args.set is None:
        raise UsageError(f"approx {sub} needs --set")
    A = _set(G, args.set)
    if sub == "doubling":
        d = ap.doubling_constant(A)
        print(f"size={len(A)}", file=out)
        print(f"product_size={d * len(A)}", file=out)
        print(f"doubling={d}", file=out)
        return EXIT_OK
    if sub == "witness":
        w = _witness(A)
        _emit(_witness_lines(w, G), out)
        return EXIT_OK if w.verify() else EXIT_FAIL
    if sub == "growth":
        w = _witness(A)
        ok = True
        for n in range(1, args.n + 1):
            good = ap.verify_growth(w, n)
            ok &= good
            print(f"n={n}\tsize={len(A.power(n))}\tbound={w.K ** (n - 1) * len(A)}\tok={_bool(good)}", file=out)
        return EXIT_OK if ok else EXIT_FAIL
    if sub == "chang":
        w = _witness(A)
        B = _set(G, args.bset) if args.bset else A
        res = ap.chang_cover(A, w, B, args.M, args.Mp)
        print(f"K={w.K}", file=out)
        print(f"t={res.t}", file=out)
        print(f"bound={ap.chang_bound(args.M, args.Mp, w.K):.4f}", file=out)
        print(f"covers={_bool(res.verify())}", file=out)
        print(f"within_bound={_bool(res.within_bound())}", file=out)
        return EXIT_OK if res.verify() and res.within_bound() else EXIT_FAIL
    if sub == "split":
        N = _normal(G, args)
        phi = ap.build_splitting(G, N, A, r_max=args.rmax)
        checks = phi.verify()
        for k, v in checks.items():
            print(f"{k}={_bool(v)}", file=out)
        print(f"size_of_B={_bool(ap.size_of_B_holds(A, N))}", file=out)
        for c in sorted(phi.table, key=N.quotient.canonical_key):
            print(f"phi\t{N.quotient.format_element(c)}\t{G.format_element(phi(c))}", file=out)
        return EXIT_OK if all(checks.values()) else EXIT_FAIL
    if sub == "pullback":
        if args.source is None:
            raise UsageError("pullback needs --source (a cyclic group mapping onto --group)")
        S = parse_group(args.source)
        if not (isinstance(S, CyclicBackend) and isinstance(G, CyclicBackend) and G.n and S.n % G.n == 0):
            raise UsageError("pullback supports reduction maps cyclic:N -> cyclic:M with M dividing N")
        rho = GroupHomomorphism(S, G, lambda a: a % G.n)
        w = _witness(A)
        pw = ap.pullback_witness(rho, w)
        print(f"preimage_size={len(pw.A)}", file=out)
        _emit(_witness_lines(pw, S), out)
        return EXIT_OK if pw.verify() else EXIT_FAIL
    if sub == "freiman-search":
        res = ap.brute_coset_progression(A, rank_cap=args.rank_cap)
        print(f"found={_bool(res.found)}", file=out)
        print(f"complete={_bool(res.complete)}", file=out)
        if res.found:
            print(f"subgroup_order={len(res.H)}", file=out)
            print(f"rank={res.rank}", file=out)
            print("generators=" + ",".join(G.format_element(g) for g in res.generators), file=out)
            print("lengths=" + ",".join(str(L) for L in res.lengths), file=out)
            print(f"size={res.size}", file=out)
            print(f"ratio={res.ratio}", file=out)
        return EXIT_OK
    raise UsageError(f"unknown approx command {sub!r}")


def _normal(G, args):
    if args.normal_index is not None:
        if not (isinstance(G, CyclicBackend) and G.n == 0):
            raise UsageError("--normal-index is for cyclic:0 only")
        k = args.normal_index
        rho = GroupHomomorphism(G, CyclicBackend(k), lambda a: a % k, check=False)
        return NormalSubgroup.kernel_of(rho)
    if args.normal is None:
        raise UsageError("split needs --normal FILE or --normal-index K")
    return NormalSubgroup.from_elements(G, read_set_file(G, args.normal))


# -- pgroup ---------------------------------------------------------------


def cmd_pgroup(args, out):
    from . import pgroups as pg
    from .groups import lower_central_series, sylow_decomposition

    G = parse_group(args.group)
    if not G.is_finite():
        raise UnsupportedBackendError(f"{G!r} is not finite")
    fmt = lambda S: sorted(S, key=G.canonical_key)
    sub = args.pgroup_cmd
    if sub == "rank":
        print(f"order={G.order()}", file=out)
        print(f"rank={pg.abelian_rank(G)}", file=out)
        print("invariant_factors=" + ",".join(str(q) for q in pg.invariant_factors(G)), file=out)
        return EXIT_OK
    if sub == "frattini":
        Phi = pg.frattini(G)
        print(f"order={len(Phi)}", file=out)
        print(f"quotient_rank={pg.frattini_rank(G, Phi)}", file=out)
        for g in fmt(Phi):
            print(G.format_element(g), file=out)
        return EXIT_OK
    if sub == "basis":
        S = read_set_file(G, args.set) if args.set else G.elements()
        for g in pg.burnside_basis(G, S):
            print(G.format_element(g), file=out)
        return EXIT_OK
    if sub == "lcs":
        chain = lower_central_series(G)
        print("sizes=" + ",".join(str(n) for n in chain.sizes()), file=out)
        print(f"step={chain.step if chain.step is not None else 'not-nilpotent'}", file=out)
        return EXIT_OK
    if sub == "sylow":
        for p, P in sylow_decomposition(G):
            print(f"p={p}\torder={len(P)}", file=out)
        return EXIT_OK
    if sub == "span":
        if not args.set:
            raise UsageError("span needs --set")
        rep = pg.union_subgroups_span(G, read_set_file(G, args.set))
        _emit(rep.lines(), out)
        return EXIT_OK if rep.holds else EXIT_FAIL
    raise UsageError(f"unknown pgroup command {sub!r}")


# -- accept ---------------------------------------------------------------


def cmd_accept(args, out):
    from .acceptance import SUITES, run_suite

    if args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    results = run_suite(args.suite)
    for r in results:
        print(r.line(), file=out)
    passed = sum(r.passed for r in results)
    print(f"passed={passed}/{len(results)}", file=out)
    return EXIT_OK if passed == len(results) else EXIT_FAIL


# -- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nilkit", description="Exact computations with commutators, nilprogressions and approximate groups.")
    p.add_argument("--version", action="version", version=f"nilkit {__version__}")
    sub = p.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("collect", help="collect a word into basic commutators")
    c.add_argument("--rank", type=int, required=True)
    c.add_argument("--step", type=int, required=True)
    c.add_argument("--trace", action="store_true", help="print each transformation before the result")
    c.add_argument("--budget", type=int, default=1_000_000, help="maximum number of collecting steps")
    c.add_argument("word")
    c.set_defaults(func=cmd_collect)

    b = sub.add_parser("basics", help="list basic commutators")
    b.add_argument("--rank", type=int, required=True)
    b.add_argument("--step", type=int, required=True)
    b.add_argument("--lengths", help="side lengths; adds the column L^chi(c)")
    b.set_defaults(func=cmd_basics)

    d = sub.add_parser("decompose", help="expand a commutator form of products or powers")
    d.add_argument("kind", choices=("product", "power", "ball"))
    d.add_argument("--form", required=True, help="e.g. '[#1,[#2,#3]]'")
    d.add_argument("--lengths", required=True, help="list lengths (product), exponents (power) or side lengths (ball)")
    d.add_argument("--step", type=int, required=True)
    d.add_argument("--m", type=int, help="power of form(x) to place in the ball")
    d.set_defaults(func=cmd_decompose)

    pr = sub.add_parser("prog", help="progressions")
    psub = pr.add_subparsers(dest="prog_cmd", required=True)
    for name in ("enum", "chain"):
        q = psub.add_parser(name)
        q.add_argument("--group", required=True)
        q.add_argument("--gens", required=True, help="generator words over the group's standard generators, ';'-separated")
        q.add_argument("--lens", required=True)
        q.add_argument("--budget", type=int, default=12, help="letter budget for P*")
        if name == "enum":
            q.add_argument("--kind", choices=("ordered", "star", "nilpotent", "ball"), default="ordered")
            q.add_argument("--count-only", action="store_true")
            q.set_defaults(func=cmd_prog_enum)
        else:
            q.add_argument("--cap", type=int, default=8)
            q.set_defaults(func=cmd_prog_chain)

    ap = sub.add_parser("approx", help="approximate groups")
    ap.add_argument(
        "approx_cmd",
        choices=("doubling", "witness", "growth", "chang", "split", "converse", "pullback", "freiman-search"),
    )
    ap.add_argument("--group", default="cyclic:0")
    ap.add_argument("--set", help="set file, one element per line")
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--bset", help="set file for B (chang)")
    ap.add_argument("--M", type=int, default=1)
    ap.add_argument("--Mp", type=int, default=1)
    ap.add_argument("--normal", help="set file listing a finite normal subgroup (split)")
    ap.add_argument("--normal-index", type=int, help="use kZ inside cyclic:0 (split)")
    ap.add_argument("--rmax", type=int, default=3)
    ap.add_argument("--source", help="source group of the reduction map (pullback)")
    ap.add_argument("--rank-cap", type=int, default=2)
    ap.set_defaults(func=cmd_approx)

    pg = sub.add_parser("pgroup", help="ranks, Frattini subgroups, bases and spans")
    pg.add_argument("pgroup_cmd", choices=("rank", "frattini", "basis", "lcs", "sylow", "span"))
    pg.add_argument("--group", required=True)
    pg.add_argument("--set")
    pg.set_defaults(func=cmd_pgroup)

    ac = sub.add_parser("accept", help="run the acceptance suite")
    ac.add_argument("suite", nargs="?", default="all")
    ac.set_defaults(func=cmd_accept)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"nilkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"nilkit: resource limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (NilkitError, OSError) as exc:
        print(f"nilkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
