"""Command-line interface: ``carlitz <command> [flags]``.

Exit codes: 0 all ok, 1 at least one mismatch, 2 usage error, 3 precision
failure after the automatic window enlargement.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .classmod import mn_matrix, pn_poly, fitting_data, reduced_matrix
from .ff import ff_make, is_prime
from .motcoh import en_compute, epsilon_computed, epsilon_formula, epsilon_root_degrees, ext_structure, gn_compute, root_locus
from .tate import TwistParams
from .zeta import DEFAULT_WORK_LIMIT, WorkLimitExceeded, Z_direct, Z_goss, zeta_star_neg
from . import sweep as sw

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_PRECISION = 0, 1, 2, 3


def _common(parser: argparse.ArgumentParser, ranged: bool = True, default_format: str = "text") -> None:
    parser.add_argument("--p", type=int, required=True, help="characteristic")
    parser.add_argument("--s", type=int, default=1, help="q = p^s (default 1)")
    parser.add_argument("--n", type=int, help="twist")
    if ranged:
        parser.add_argument("--n-min", type=int, help="first twist of a range")
        parser.add_argument("--n-max", type=int, help="last twist of a range")
    parser.add_argument("--format", choices=("text", "json", "csv"), default=default_format)
    parser.add_argument("--out", help="write output here instead of stdout")


def _precision(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--t-prec", type=int, help="t-precision T of series windows")
    parser.add_argument("--theta-floor", type=int, help="theta-precision floor of series windows")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="carlitz", description="Exact invariants of Carlitz twists over F_q[t].")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("zeta", help="Z(x,-n) by recursion and by enumeration, h_n, zeta*(-n), zeta(-n)")
    _common(p, ranged=False)
    p.add_argument("--work-limit", type=int, default=DEFAULT_WORK_LIMIT)

    p = sub.add_parser("goss", help="Z(x,-n) by recursion")
    _common(p)

    p = sub.add_parser("pn", help="P_n(x) = det(I - x M_n) and its expansion at x = 1")
    _common(p)
    p.add_argument("--method", choices=("reduced", "direct"), default="reduced")
    p.add_argument("--show-matrix", action="store_true")

    for name, text in (("gn", "polynomial part g_n of omega^n"), ("en", "e_n = (t-theta)^n g_n - g_n^(1)"), ("epsilon", "torsion polynomial eps_n")):
        p = sub.add_parser(name, help=text)
        _common(p, ranged=False)

    for name, text in (("check-epsilon", "compare computed eps_n with the closed form"), ("check-conjecture", "compare P_n(x) with Z(x,-n)")):
        p = sub.add_parser(name, help=text)
        _common(p, default_format="json")
        p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("roots", help="zeros of eps_n over F_(q^r) by exact degree")
    _common(p, ranged=False)
    p.add_argument("--r-max", type=int, default=4)

    p = sub.add_parser("ext-structure", help="shape of the extension module of the twist n (any sign)")
    _common(p, ranged=False)

    p = sub.add_parser("gamma", help="series-side matrix of id - gamma and its det(I - xN)")
    _common(p, ranged=False)
    _precision(p)

    p = sub.add_parser("sweep", help="run checks over a range of n with caching and workers")
    _common(p, default_format="json")
    _precision(p)
    p.add_argument("--checks", default=",".join(sw.DEFAULT_CHECKS), help=f"comma list from {','.join(sw.CHECKS)}")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--work-limit", type=int, default=DEFAULT_WORK_LIMIT)
    p.add_argument("--r-max", type=int, default=4)
    p.add_argument("--cache", help=f"JSONL cache path (default: $CARLITZ_CACHE or {sw.DEFAULT_CACHE})")
    p.add_argument("--no-cache", action="store_true")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings in the written reports")

    sub.add_parser("selftest", help="quick consistency checks on small cases")
    return ap


def _field(args, parser):
    if not is_prime(args.p):
        parser.error(f"--p must be prime, got {args.p}")
    if args.s < 1:
        parser.error("--s must be >= 1")
    try:
        return ff_make(args.p, args.s)
    except ValueError as exc:
        parser.error(str(exc))


def _n_values(args, parser, allow_negative: bool = False) -> list[int]:
    n_min = getattr(args, "n_min", None)
    n_max = getattr(args, "n_max", None)
    if args.n is not None:
        if n_min is not None or n_max is not None:
            parser.error("give either --n or --n-min/--n-max")
        ns = [args.n]
    elif n_min is not None or n_max is not None:
        lo = 0 if n_min is None else n_min
        hi = lo if n_max is None else n_max
        if lo > hi:
            parser.error(f"--n-min {lo} > --n-max {hi}")
        ns = list(range(lo, hi + 1))
    else:
        parser.error("--n (or --n-min/--n-max) is required")
    if not allow_negative and min(ns) < 0:
        parser.error("n must be >= 0 for this command")
    return ns


def _emit(args, records: list[dict], timings: bool = False) -> None:
    if args.format == "json":
        text = sw.to_json(records, timings)
    elif args.format == "csv":
        text = sw.to_csv(records, timings)
    else:
        text = "\n\n".join(_text_block(r) for r in records) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _text_block(rec: dict) -> str:
    lines = []
    for k, v in rec.items():
        if k == "timings_ms":
            continue
        if isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{k}:")
            lines.extend("  " + json.dumps(x) for x in v)
        else:
            lines.append(f"{k}: {v}")
    return "\n".join(lines)


def _xpoly_record(P) -> dict:
    return {"text": str(P), "coeffs": [str(c) for c in P.coeff_list()]}


def _divisible_params(field, n, parser):
    params = TwistParams.of(n, field.q, field.p)
    if n < 1 or not params.divisible:
        parser.error(f"this command needs n >= 1 with (q-1) = {field.q - 1} dividing n, got n = {n}")
    return params


def cmd_zeta(args, parser) -> int:
    F = _field(args, parser)
    n = _n_values(args, parser)[0]
    Zg = Z_goss(n, F)
    rec = {"p": F.p, "s": F.s, "q": F.q, "n": n, "Z_goss": _xpoly_record(Zg)}
    status = "ok"
    try:
        Zd = Z_direct(n, F, args.work_limit)
        rec["Z_direct"] = _xpoly_record(Zd)
        rec["equal"] = Zd == Zg
        status = "ok" if rec["equal"] else "mismatch"
    except WorkLimitExceeded as exc:
        rec["Z_direct"] = None
        rec["direct_skipped"] = str(exc)
    h_n, zstar, z1 = zeta_star_neg(n, F)
    rec.update(h_n=h_n, zeta_star=str(zstar), zeta_value=str(z1), status=status)
    _emit(args, [rec])
    return EXIT_MISMATCH if status == "mismatch" else EXIT_OK


def cmd_goss(args, parser) -> int:
    F = _field(args, parser)
    recs = [{"q": F.q, "n": n, "Z": _xpoly_record(Z_goss(n, F))} for n in _n_values(args, parser)]
    _emit(args, recs)
    return EXIT_OK


def cmd_pn(args, parser) -> int:
    F = _field(args, parser)
    recs = []
    for n in _n_values(args, parser):
        params = TwistParams.of(n, F.q, F.p)
        P = pn_poly(params, F, args.method)
        rank, lam = fitting_data(params, F, P)
        rec = {"q": F.q, "n": n, "h": params.h, "delta": params.delta, "P": _xpoly_record(P), "rank": rank, "lambda": str(lam)}
        if args.show_matrix:
            M = mn_matrix(params, F) if args.method == "direct" else reduced_matrix(params, F)
            rec["matrix"] = [[str(e) for e in row] for row in M.rows]
        recs.append(rec)
    _emit(args, recs)
    return EXIT_OK


def cmd_gn(args, parser) -> int:
    F = _field(args, parser)
    n = _n_values(args, parser)[0]
    params = _divisible_params(F, n, parser)
    g = gn_compute(params, F)
    _emit(args, [{"q": F.q, "n": n, "m": params.m, "g_n": str(g), "deg_theta": g.deg_theta, "deg_t": g.deg_t}])
    return EXIT_OK


def cmd_en(args, parser) -> int:
    F = _field(args, parser)
    n = _n_values(args, parser)[0]
    params = _divisible_params(F, n, parser)
    e = en_compute(params, F)
    _emit(args, [{"q": F.q, "n": n, "e_n": str(e), "deg_theta": e.deg_theta}])
    return EXIT_OK


def cmd_epsilon(args, parser) -> int:
    F = _field(args, parser)
    n = _n_values(args, parser)[0]
    params = _divisible_params(F, n, parser)
    eps = epsilon_computed(params, F)
    formula = epsilon_formula(params, F)
    rec = {
        "q": F.q,
        "n": n,
        "m": params.m,
        "c": params.c,
        "ell": params.ell,
        "epsilon_computed": str(eps),
        "epsilon_formula": str(formula),
        "epsilon_root_degrees": str(epsilon_root_degrees(params, F)),
        "match": eps == formula,
    }
    _emit(args, [rec])
    return EXIT_OK if rec["match"] else EXIT_MISMATCH


def _run_checks(args, parser, checks: tuple[str, ...]) -> int:
    F = _field(args, parser)
    ns = _n_values(args, parser)
    if args.jobs < 1:
        parser.error("--jobs must be >= 1")
    cfg = sw.SweepConfig(p=F.p, s=F.s, n_min=min(ns), n_max=max(ns), checks=checks, jobs=args.jobs)
    records, _ = sw.run_sweep(cfg, cache_path=None)
    if args.format == "text":
        out = sw.to_text(records)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(out)
        else:
            sys.stdout.write(out)
    else:
        _emit(args, records)
    return sw.exit_code(records)


def cmd_check_epsilon(args, parser) -> int:
    return _run_checks(args, parser, ("epsilon",))


def cmd_check_conjecture(args, parser) -> int:
    return _run_checks(args, parser, ("conjecture",))


def cmd_roots(args, parser) -> int:
    F = _field(args, parser)
    n = _n_values(args, parser)[0]
    params = _divisible_params(F, n, parser)
    if args.r_max < 1:
        parser.error("--r-max must be >= 1")
    try:
        rows = root_locus(params, F, args.r_max, sw.ROOT_BUDGET)
    except ValueError as exc:
        parser.error(str(exc))
    ok = all(r.consistent and r.all_simple for r in rows)
    _emit(args, [{"q": F.q, "n": n, "epsilon": str(epsilon_computed(params, F)), "rows": [r.to_dict() for r in rows], "status": "ok" if ok else "mismatch"}])
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_ext_structure(args, parser) -> int:
    F = _field(args, parser)
    n = _n_values(args, parser, allow_negative=True)[0]
    rec = ext_structure(n, F)
    _emit(args, [rec])
    return EXIT_MISMATCH if rec.get("match") is False else EXIT_OK


def cmd_gamma(args, parser) -> int:
    F = _field(args, parser)
    n = _n_values(args, parser)[0]
    rec = sw.run_cell(F.p, F.s, n, "gamma", args.t_prec, args.theta_floor)
    _emit(args, [rec])
    return sw.exit_code([rec])


def cmd_sweep(args, parser) -> int:
    F = _field(args, parser)
    ns = _n_values(args, parser)
    checks = tuple(c.strip() for c in args.checks.split(",") if c.strip())
    try:
        cfg = sw.SweepConfig(
            p=F.p,
            s=F.s,
            n_min=min(ns),
            n_max=max(ns),
            checks=checks,
            jobs=args.jobs,
            t_prec=args.t_prec,
            theta_floor=args.theta_floor,
            work_limit=args.work_limit,
            r_max=args.r_max,
            timings=args.timings,
        )
    except ValueError as exc:
        parser.error(str(exc))
    cache = None if args.no_cache else (args.cache or os.environ.get("CARLITZ_CACHE") or sw.DEFAULT_CACHE)
    records, summary = sw.run_sweep(cfg, cache_path=cache)
    if args.format == "text":
        text = sw.to_text(records)
    elif args.format == "csv":
        text = sw.to_csv(records, args.timings)
    else:
        text = sw.to_json(records, args.timings)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    line = " ".join(f"{k}={summary[k]}" for k in ("cells", *sw.STATUSES, "computed", "cached"))
    print(f"summary: {line}", file=sys.stderr)
    return sw.exit_code(records)


def cmd_selftest(args, parser) -> int:
    from .selftest import run_selftest

    return EXIT_OK if run_selftest(print) else EXIT_MISMATCH


COMMANDS = {
    "zeta": cmd_zeta,
    "goss": cmd_goss,
    "pn": cmd_pn,
    "gn": cmd_gn,
    "en": cmd_en,
    "epsilon": cmd_epsilon,
    "check-epsilon": cmd_check_epsilon,
    "check-conjecture": cmd_check_conjecture,
    "roots": cmd_roots,
    "ext-structure": cmd_ext_structure,
    "gamma": cmd_gamma,
    "sweep": cmd_sweep,
    "selftest": cmd_selftest,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    sub = parser._subparsers._group_actions[0].choices[args.command]
    return COMMANDS[args.command](args, sub)


if __name__ == "__main__":
    sys.exit(main())
