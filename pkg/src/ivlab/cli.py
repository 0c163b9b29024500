"""Command-line front end: ``ivlab iterate|verify|search|report``.

Every report echoes the effective configuration, the package version and
the seed.  Apart from the ``timestamp`` field, the same command line gives
byte-identical JSON.  The exit status is 0 iff every verdict passed.

Environment overrides for work budgets:

``IVLAB_MAX_TERMS``   largest numerator/denominator (terms) of a symbolic iterate
``IVLAB_MAX_SPOLYS``  S-polynomials reduced by one Gröbner basis computation
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from datetime import datetime, timezone

import mpmath

from . import __version__
from .dynamics import degree_growth, entropy_estimate, iterate_symbolic, newton_periodic_search
from .invariants import (build_lax, check_charpoly_structure, extract_invariants,
                         invariance_report, invariant_count, verify_bridge, verify_conjugation,
                         verify_lax_equation)
from .mapcat import map_from_descriptor
from .polycore import BudgetExceeded, ParseError
from .varieties import (gamma_catalog, locate_point, special_loci_catalog, uncorrelated_scan,
                        verify_membership, verify_variety_sampled, with_generators)

DEFAULT_MAX_TERMS = 2_000_000
DEFAULT_MAX_SPOLYS = 2000


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"ivlab: {name} must be an integer, got {raw!r}")


def budgets() -> dict:
    return {"max_terms": _env_int("IVLAB_MAX_TERMS", DEFAULT_MAX_TERMS),
            "max_spolys": _env_int("IVLAB_MAX_SPOLYS", DEFAULT_MAX_SPOLYS)}


def _config(args) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "output", "format")}
    cfg["budgets"] = budgets()
    return cfg


def _report(args, verdicts: list[dict], body: dict) -> dict:
    return {
        "artifact": "ivlab",
        "version": __version__,
        "command": args.command,
        "config": _config(args),
        "passed": all(v["passed"] for v in verdicts),
        "verdicts": verdicts,
        "result": body,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


# -- iterate -------------------------------------------------------------------------------


def cmd_iterate(args) -> tuple[list[dict], dict, list[dict] | None]:
    m = map_from_descriptor(args.map)
    b = budgets()
    var = args.watch or m.variables[0]
    if var not in m.variables:
        raise SystemExit(f"ivlab: --watch {var!r} is not a coordinate of {m.descriptor}")
    comp = m.variables.index(var) if args.component is None else args.component
    body: dict = {"map": m.descriptor, "watch": var, "component": m.variables[comp]}
    try:
        seq = degree_growth(m, args.n, var, max_terms=b["max_terms"], component=comp,
                            counts=not args.no_counts)
    except BudgetExceeded as exc:
        body["error"] = str(exc)
        partial = getattr(exc, "partial", None)
        body["table"] = partial.rows() if partial is not None else []
        return [{"name": "iterate", "passed": False, "detail": str(exc)}], body, body["table"]
    body["table"] = seq.rows()
    body["degrees"] = seq.D
    if not args.no_counts:
        body["term_counts"] = seq.term_counts
    if len(seq.D) >= 3:
        e = entropy_estimate(seq)
        body["entropy"] = {"slope": round(e.slope, 12), "window": list(e.window),
                           "ratios": [round(r, 12) for r in e.ratios]}
    if args.n == 1 or args.serialize:
        its = iterate_symbolic(m, args.n, b["max_terms"])
        body["iterates"] = [[str(f) for f in it] for it in its] if args.serialize \
            else [str(f) for f in its[0]]
    return [{"name": "iterate", "passed": True, "detail": f"{args.n} iterates"}], body, seq.rows()


# -- verify ------------------------------------------------------------------------------------


def cmd_verify(args) -> tuple[list[dict], dict, None]:
    b = budgets()
    target = args.target
    verdicts: list[dict] = []
    body: dict = {"target": target}
    if target == "lax":
        d = args.d
        lax = verify_lax_equation(d)
        conj = verify_conjugation(d)
        sys_ = build_lax(d)
        H = extract_invariants(sys_)
        st = check_charpoly_structure(sys_)
        verdicts.append({"name": f"lax_equation(d={d})", "passed": lax.ok,
                         "detail": "zero residual" if lax.ok else f"nonzero entry {lax.first_nonzero}"})
        verdicts.append({"name": f"conjugation(d={d})", "passed": conj.ok, "detail": ""})
        verdicts.append({"name": f"charpoly_structure(d={d})", "passed": all(st.values()),
                         "detail": json.dumps(st, sort_keys=True)})
        verdicts.append({"name": f"invariant_count(d={d})",
                         "passed": invariant_count(sys_) == d // 2 + 1,
                         "detail": f"{invariant_count(sys_)}"})
        body["invariants"] = {k: str(v) for k, v in H.items()}
        if d % 2 == 0 and d == 6:
            br = verify_bridge(d)
            verdicts.append({"name": "lv_toda_bridge(d=6)", "passed": br.ok,
                             "detail": ",".join(br.mismatches)})
    elif target == "invariants":
        m = map_from_descriptor(args.map)
        rep = invariance_report(m)
        if not rep:
            raise SystemExit(f"ivlab: no invariants cataloged for {m.descriptor}")
        for k, ok in rep.items():
            verdicts.append({"name": f"{k} o F = {k}", "passed": ok, "detail": str(m.invariants[k])})
    elif target == "variety":
        m = map_from_descriptor(args.map)
        spec = gamma_catalog(m, args.period)
        if args.generator:
            spec = with_generators(spec, args.generator)
        body["variety"] = spec.to_json()
        if args.evidence in ("exact", "both"):
            v = verify_membership(m, spec, max_terms=b["max_terms"], max_spolys=b["max_spolys"],
                                  fallback_samples=args.samples, seed=args.seed)
            verdicts.append({"name": "membership", "passed": v.ok,
                             "detail": f"evidence {v.evidence}"})
            body["membership"] = v.to_json()
        if args.evidence in ("sampled", "both"):
            with mpmath.workprec(args.precision):
                pv = verify_variety_sampled(m, spec, args.samples, seed=args.seed,
                                            precision=args.precision)
            verdicts.append({"name": "sampled_period", "passed": pv.ok,
                             "detail": json.dumps(pv.counts, sort_keys=True)})
            body["samples"] = pv.to_json()
    elif target == "special-loci":
        from fractions import Fraction
        t = Fraction(args.t)
        for loc in special_loci_catalog():
            res = loc.verify(t, args.precision)
            verdicts.append({"name": loc.description, "passed": all(res),
                             "detail": f"t={t}: {res}"})
        body["loci"] = [loc.to_json() for loc in special_loci_catalog()]
    else:  # pragma: no cover - argparse restricts choices
        raise SystemExit(f"ivlab: unknown target {target!r}")
    return verdicts, body, None


# -- search ---------------------------------------------------------------------------------------


def cmd_search(args) -> tuple[list[dict], dict, list[dict]]:
    m = map_from_descriptor(args.map)
    body: dict = {"map": m.descriptor, "period": args.period}
    verdicts = []
    with mpmath.workprec(args.precision):
        if args.uncorrelated:
            u = uncorrelated_scan(m, args.period, samples=args.samples, seed=args.seed,
                                  precision=args.precision)
            body["uncorrelated_scan"] = u.to_json()
            verdicts.append({"name": "uncorrelated_scan", "passed": u.isolated,
                             "detail": f"{u.failures}/{u.total} surrogate points not periodic"})
            return verdicts, body, []
        res = newton_periodic_search(m, args.period, starts=args.starts, precision=args.precision,
                                     seed=args.seed, scale=args.scale)
        body["stats"] = res.stats
        body["points"] = [r.to_json(args.digits) for r in res.reports]
        verdicts.append({"name": "search", "passed": all(r.verified is not False for r in res.reports),
                         "detail": f"{len(res.reports)} distinct points"})
        try:
            spec = gamma_catalog(m, args.period)
        except KeyError:
            spec = None
        if spec is not None:
            where = [locate_point(spec, r.start, args.locus_tol) for r in res.reports]
            for pt, w in zip(body["points"], where):
                pt["locus"] = w
            counts = {k: where.count(k) for k in ("variety", "special", "off")}
            body["loci"] = counts
            verdicts.append({"name": "no_isolated_points", "passed": counts["off"] == 0,
                             "detail": json.dumps(counts, sort_keys=True)})
    rows = [{"index": i, **{f"x{j + 1}": p for j, p in enumerate(pt["start"])},
             "residual": pt["residual"], "minimal_period": pt["minimal_period"],
             "classification": " ".join(pt["classification"]), "locus": pt.get("locus", "")}
            for i, pt in enumerate(body["points"])]
    return verdicts, body, rows


# -- report --------------------------------------------------------------------------------------


def cmd_report(args) -> tuple[list[dict], dict, list[dict]]:
    from .acceptance import CRITERIA
    only = sorted({int(k) for k in args.only.split(",")}) if args.only else sorted(CRITERIA)
    verdicts, body = [], {"criteria": []}
    for k in only:
        c = CRITERIA[k]()
        if not args.quiet:
            print(c.line(), file=sys.stderr)
        verdicts.append({"name": f"criterion {k}", "passed": c.passed, "detail": c.title})
        body["criteria"].append(c.to_json())
    rows = [{"criterion": c["number"], "title": c["title"], "passed": c["passed"]}
            for c in body["criteria"]]
    return verdicts, body, rows


# -- output ----------------------------------------------------------------------------------


def _text(report: dict) -> str:
    lines = [f"ivlab {report['version']} {report['command']}"]
    for v in report["verdicts"]:
        lines.append(f"{'PASS' if v['passed'] else 'FAIL'}  {v['name']}  {v.get('detail', '')}".rstrip())
    res = report["result"]
    if "table" in res:
        lines.append("n  degree  terms")
        lines += [f"{r['n']}  {r['degree']}  {r['terms']}" for r in res["table"]]
    if "iterates" in res and res["iterates"] and isinstance(res["iterates"][0], str):
        lines += [f"{v} -> {f}" for v, f in zip(("X", "Y", "Z", "W", "V", "U"), res["iterates"])]
    if "points" in res:
        for p in res["points"]:
            where = f"  [{p['locus']}]" if "locus" in p else ""
            lines.append(f"({', '.join(p['start'])})  period {p['minimal_period']}  "
                         f"residual {p['residual']}  {' '.join(p['classification'])}{where}")
    lines.append(f"overall: {'PASS' if report['passed'] else 'FAIL'}")
    return "\n".join(lines) + "\n"


def _csv(rows: list[dict] | None) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ivlab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"ivlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt=("json", "text")):
        sp.add_argument("--format", choices=fmt, default="json")
        sp.add_argument("--output", "-o", help="write the report here instead of stdout")

    it = sub.add_parser("iterate", help="symbolic iterates, degree and term-count tables")
    it.add_argument("--map", required=True, help='map descriptor, e.g. "lv3(a=0)"')
    it.add_argument("--n", type=int, default=5)
    it.add_argument("--watch", help="variable whose degree is tracked (default: first)")
    it.add_argument("--component", type=int, help="component index (default: the watched one)")
    it.add_argument("--no-counts", action="store_true", help="skip term counts")
    it.add_argument("--serialize", action="store_true", help="include all iterates")
    common(it, ("json", "csv", "text"))
    it.set_defaults(func=cmd_iterate)

    ve = sub.add_parser("verify", help="invariants, Lax suite, varieties, special loci")
    ve.add_argument("--target", required=True,
                    choices=("invariants", "lax", "variety", "special-loci"))
    ve.add_argument("--map", default="lv3(a=0)")
    ve.add_argument("--period", type=int, default=2)
    ve.add_argument("--generator", action="append",
                    help="replace the cataloged generators (repeatable)")
    ve.add_argument("--d", type=int, default=5)
    ve.add_argument("--evidence", choices=("exact", "sampled", "both"), default="exact")
    ve.add_argument("--samples", type=int, default=100)
    ve.add_argument("--seed", type=int, default=0)
    ve.add_argument("--precision", type=int, default=256, help="bits")
    ve.add_argument("--t", default="7", help="line parameter for special loci")
    common(ve)
    ve.set_defaults(func=cmd_verify)

    se = sub.add_parser("search", help="Newton search for periodic points")
    se.add_argument("--map", required=True)
    se.add_argument("--period", type=int, default=1)
    se.add_argument("--starts", type=int, default=1000)
    se.add_argument("--seed", type=int, default=0)
    se.add_argument("--precision", type=int, default=256, help="bits")
    se.add_argument("--scale", type=float, default=2.0, help="spread of random complex starts")
    se.add_argument("--digits", type=int, default=30)
    se.add_argument("--locus-tol", type=float, default=1e-12,
                    help="relative residual for placing a point on the cataloged variety")
    se.add_argument("--uncorrelated", action="store_true",
                    help="test points of the a=0 variety for periodicity under this map")
    se.add_argument("--samples", type=int, default=100)
    common(se, ("json", "csv", "text"))
    se.set_defaults(func=cmd_search)

    re_ = sub.add_parser("report", help="run the acceptance suite")
    re_.add_argument("--only", help="comma-separated criterion numbers")
    re_.add_argument("--quiet", action="store_true")
    common(re_, ("json", "csv", "text"))
    re_.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        verdicts, body, rows = args.func(args)
    except ParseError as exc:
        print(f"ivlab: {exc}", file=sys.stderr)
        return 2
    except KeyError as exc:
        print(f"ivlab: {exc.args[0] if exc.args else exc}", file=sys.stderr)
        return 2
    report = _report(args, verdicts, body)
    if args.format == "json":
        out = json.dumps(report, indent=2, sort_keys=True, default=str) + "\n"
    elif args.format == "csv":
        out = _csv(rows)
    else:
        out = _text(report)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return 0 if report["passed"] else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
