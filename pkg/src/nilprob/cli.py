"""Command line interface.

Verbs: nu, nu-coset, nu-tilde, tau, pi, mc, alt-bound, verify-tables,
solvable-check.  Output formats: text (default), json, csv.  Exit codes:
0 success/consistent, 1 mismatch or inconsistency, 2 usage error,
3 budget refusal.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction

from . import constants
from .catalog import almost_simple_pair, group_from_spec, AlmostSimplePair
from .engine import (
    CosetContext,
    NuReport,
    alt_bound,
    extension_context,
    monte_carlo_nu,
    nu_coset,
    nu_exact,
    nu_tilde,
    pi_coset,
    plan_extensions,
    solvability_threshold_check,
    tau,
)
from .errors import BudgetExceededError, GroupFormatError, VerificationError
from .group import FiniteGroup
from .perm import Permutation

Z_99 = 2.5758293035489004


def frac_str(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


def dec_str(x: float) -> str:
    return f"{x:.4g}"


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a fraction: {text!r}") from exc


def _parse_perm(text: str, degree: int) -> Permutation:
    text = text.strip()
    if text.startswith("(") or text == "()":
        return Permutation.from_cycles(text, degree)
    p = Permutation.from_image_text(text)
    if p.degree > degree:
        raise ValueError(
            f"permutation degree {p.degree} exceeds group degree {degree}"
        )
    if p.degree < degree:
        p = Permutation(tuple(p.images) + tuple(range(p.degree, degree)))
    return p


def _resolve_pair(spec: str) -> AlmostSimplePair:
    return almost_simple_pair(spec)


def _context_from_args(args) -> CosetContext:
    """Context from --normal/--normal-gens/--g1/--g2 against the main spec."""
    if getattr(args, "normal", None) == "socle" or (
        getattr(args, "normal", None) is None
        and getattr(args, "normal_gens", None) is None
        and args.verb in ("nu-coset", "pi")
    ):
        pair = _resolve_pair(args.spec)
        ambient, normal = pair.ambient, pair.socle
    else:
        ambient = group_from_spec(args.spec)
        if getattr(args, "normal_gens", None):
            gens = [
                _parse_perm(t, ambient.degree)
                for t in args.normal_gens.split(";")
                if t.strip()
            ]
            normal = FiniteGroup(gens)
        elif getattr(args, "normal", None):
            normal = group_from_spec(args.normal)
            if normal.degree != ambient.degree:
                raise GroupFormatError("normal subgroup degree mismatch")
        else:
            normal = ambient
    ident = ambient.identity()
    g1 = _parse_perm(args.g1, ambient.degree) if args.g1 else ident
    g2 = _parse_perm(args.g2, ambient.degree) if args.g2 else ident
    return CosetContext(ambient, normal, g1, g2)


# -- report rendering ---------------------------------------------------------


def report_payload(report: NuReport, deterministic: bool) -> dict:
    payload: dict = {
        "group": report.description,
        "order": report.order,
        "method": report.method,
        "value": {
            "num": report.value.numerator,
            "den": report.value.denominator,
        },
        "decimal": float(report.value),
    }
    if report.ci is not None:
        payload["ci"] = {"lo": report.ci[0], "hi": report.ci[1]}
    if report.samples is not None:
        payload["samples"] = report.samples
    if report.witness:
        payload["witness"] = report.witness
    if not deterministic:
        payload["elapsed_ms"] = round(report.elapsed_s * 1000.0, 3)
        payload["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%S")
    return payload


def emit_report(report: NuReport, args, out) -> None:
    fmt = args.format
    if fmt == "json":
        print(json.dumps(report_payload(report, args.deterministic),
                         sort_keys=True), file=out)
        return
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["group", "method", "num", "den", "decimal", "status"])
        w.writerow([
            report.description,
            report.method,
            report.value.numerator,
            report.value.denominator,
            dec_str(float(report.value)),
            "ok",
        ])
        return
    print(f"group:  {report.description}", file=out)
    print(f"order:  {report.order}", file=out)
    print(f"method: {report.method}", file=out)
    print(
        f"value:  {frac_str(report.value)} ≈ {dec_str(float(report.value))}",
        file=out,
    )
    if report.ci is not None:
        lo, hi = report.ci
        print(f"ci95:   [{dec_str(lo)}, {dec_str(hi)}]", file=out)
    if report.samples is not None:
        print(f"samples: {report.samples}", file=out)
    if report.witness:
        print(f"witness: {report.witness}", file=out)
    for note in report.notes:
        print(f"note:   {note}", file=out)
    if not args.deterministic:
        print(f"elapsed: {report.elapsed_s * 1000.0:.1f} ms", file=out)


# -- verbs --------------------------------------------------------------------


def cmd_nu(args, out) -> int:
    G = group_from_spec(args.spec)
    report = nu_exact(G, method=args.method, budget=args.budget)
    emit_report(report, args, out)
    return 0


def cmd_nu_coset(args, out) -> int:
    ctx = _context_from_args(args)
    report = nu_coset(ctx, method=args.method, budget=args.budget)
    emit_report(report, args, out)
    return 0


def cmd_pi(args, out) -> int:
    ctx = _context_from_args(args)
    report = pi_coset(ctx, budget=args.budget)
    emit_report(report, args, out)
    return 0


def cmd_nu_tilde(args, out) -> int:
    pair = _resolve_pair(args.spec)
    result = nu_tilde(pair.ambient, pair.socle, budget=args.budget)
    if args.format == "json":
        payload = report_payload(result.best, args.deterministic)
        payload["rows"] = [
            {
                "label": r.label,
                "quotient": r.quotient_desc,
                "order": r.extension_order,
                "value": {"num": r.value.numerator, "den": r.value.denominator},
                "decimal": float(r.value),
                "invariants": r.invariants,
            }
            for r in result.rows
        ]
        payload["skipped"] = result.skipped
        print(json.dumps(payload, sort_keys=True), file=out)
        return 0
    if args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["group", "method", "num", "den", "decimal", "status"])
        for r in result.rows:
            w.writerow([
                f"{pair.name}.{r.label}" if r.label != "1" else pair.name,
                "exact-classes",
                r.value.numerator,
                r.value.denominator,
                dec_str(float(r.value)),
                "ok",
            ])
        w.writerow([
            f"max({pair.name})",
            "exact-classes",
            result.best.value.numerator,
            result.best.value.denominator,
            dec_str(float(result.best.value)),
            "ok",
        ])
        return 0
    emit_report(result.best, args, out)
    print("rows:", file=out)
    for r in result.rows:
        print(
            f"  {r.label:5s} quotient {r.quotient_desc:4s} "
            f"order {r.extension_order:9d}  "
            f"{frac_str(r.value)} ≈ {dec_str(float(r.value))}",
            file=out,
        )
    for s in result.skipped:
        print(f"  skipped: {s}", file=out)
    return 0


def cmd_tau(args, out) -> int:
    pair = _resolve_pair(args.spec)
    if args.row is None:
        report = tau(pair.ambient, pair.socle, budget=args.budget)
    else:
        ctx, _ = extension_context(pair.ambient, pair.socle, args.row)
        report = tau(ctx.ambient, pair.socle, budget=args.budget)
    emit_report(report, args, out)
    return 0


def cmd_mc(args, out) -> int:
    if args.row is not None:
        pair = _resolve_pair(args.spec)
        ctx, _ = extension_context(pair.ambient, pair.socle, args.row)
        target: FiniteGroup | CosetContext = ctx
    elif args.socle:
        pair = _resolve_pair(args.spec)
        target = pair.socle
    elif args.normal or args.normal_gens or args.g1 or args.g2:
        target = _context_from_args(args)
    else:
        target = group_from_spec(args.spec)
    report = monte_carlo_nu(
        target, samples=args.samples, seed=args.seed, workers=args.workers
    )
    emit_report(report, args, out)
    return 0


def cmd_alt_bound(args, out) -> int:
    value = alt_bound(args.pi_n, args.pi_n_1, args.n)
    if args.format == "json":
        payload = {
            "group": f"alternating degree {args.n}",
            "method": "alt-bound",
            "value": {"num": value.numerator, "den": value.denominator},
            "decimal": float(value),
        }
        if not args.deterministic:
            payload["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%S")
        print(json.dumps(payload, sort_keys=True), file=out)
    elif args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["group", "method", "num", "den", "decimal", "status"])
        w.writerow([
            f"alternating degree {args.n}", "alt-bound",
            value.numerator, value.denominator,
            dec_str(float(value)), "ok",
        ])
    else:
        print(f"{frac_str(value)} ≈ {dec_str(float(value))}", file=out)
    return 0


def cmd_solvable_check(args, out) -> int:
    G = group_from_spec(args.spec)
    verdict = solvability_threshold_check(G, budget=args.budget)
    if args.format == "json":
        payload = {
            "group": verdict.description,
            "order": verdict.order,
            "method": "solvable-check",
            "value": {"num": verdict.nu.numerator, "den": verdict.nu.denominator},
            "decimal": float(verdict.nu),
            "exceeds_threshold": verdict.exceeds,
            "solvable": verdict.solvable,
            "consistent": verdict.consistent,
        }
        if not args.deterministic:
            payload["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%S")
        print(json.dumps(payload, sort_keys=True), file=out)
    else:
        print(f"group:  {verdict.description}", file=out)
        print(f"nu:     {frac_str(verdict.nu)} ≈ {dec_str(float(verdict.nu))}",
              file=out)
        print(f"nu > {frac_str(verdict.threshold)}: {verdict.exceeds}", file=out)
        print(f"solvable: {verdict.solvable}", file=out)
        print(f"consistent: {verdict.consistent}", file=out)
    return 0 if verdict.consistent else 1


# -- verify-tables ------------------------------------------------------------


def _verify_row_mc(
    pair: AlmostSimplePair,
    witness_row: str,
    expected: Fraction,
    samples: int,
    seed: int,
) -> tuple[str, Fraction | None, NuReport]:
    """Monte Carlo fallback: sample the witness context at 99% confidence."""
    ctx, _ = extension_context(pair.ambient, pair.socle, witness_row)
    report = monte_carlo_nu(ctx, samples=samples, seed=seed, z=Z_99)
    lo, hi = report.ci
    status = "ci-consistent" if lo <= float(expected) <= hi else "mismatch"
    return status, report.value, report

def _estimated_exact_seconds(ambient_order: int) -> float:
    # calibrated on this class of hardware: full scan of the PSL(3,4) pair
    # (ambient 241920) takes about 20 s
    return ambient_order / 12000.0


def verify_table1(args, out) -> int:
    rows_out = []
    all_ok = True
    for row in constants.TABLE1:
        started = time.perf_counter()
        try:
            pair = almost_simple_pair(row.spec)
        except (OSError, GroupFormatError) as exc:
            rows_out.append((row.label, row.expected, None, "missing-asset",
                             str(exc), 0.0))
            all_ok = False
            continue
        try:
            if _estimated_exact_seconds(pair.ambient.order) <= args.budget:
                result = nu_tilde(pair.ambient, pair.socle)
                computed: Fraction | None = result.best.value
                status = "exact-match" if computed == row.expected else "mismatch"
            elif row.witness_row is not None:
                status, computed, _ = _verify_row_mc(
                    pair, row.witness_row, row.expected,
                    args.mc_samples, args.seed,
                )
            else:
                status, computed = "skipped-budget", None
        except BudgetExceededError as exc:
            rows_out.append((row.label, row.expected, None, "skipped-budget",
                             str(exc), time.perf_counter() - started))
            continue
        note = row.note
        rows_out.append((row.label, row.expected, computed, status, note,
                         time.perf_counter() - started))
        if status not in ("exact-match", "ci-consistent"):
            all_ok = False
    return _emit_table(1, rows_out, all_ok, args, out)


def verify_table2(args, out) -> int:
    rows_out = []
    all_ok = True
    try:
        pair = almost_simple_pair(constants.TABLE2_SPEC)
    except (OSError, GroupFormatError) as exc:
        for row in constants.TABLE2:
            rows_out.append((row.label, row.expected, None, "missing-asset",
                             str(exc), 0.0))
        return _emit_table(2, rows_out, False, args, out)
    started = time.perf_counter()
    if _estimated_exact_seconds(pair.ambient.order) <= args.budget:
        result = nu_tilde(pair.ambient, pair.socle)
        elapsed = time.perf_counter() - started
        for row in constants.TABLE2:
            match = [
                r for r in result.rows
                if all(r.invariants.get(k) == v for k, v in row.selector.items())
            ]
            if len(match) != 1:
                rows_out.append((row.label, row.expected, None, "mismatch",
                                 f"{len(match)} rows match the invariants",
                                 elapsed))
                all_ok = False
                continue
            computed = match[0].value
            status = "exact-match" if computed == row.expected else "mismatch"
            note = row.note
            rows_out.append((row.label, row.expected, computed, status, note,
                             elapsed))
            if status != "exact-match":
                all_ok = False
        max_val = result.best.value
        status = "exact-match" if max_val == constants.TABLE2_MAX else "mismatch"
        rows_out.append(("max (= extension maximum)", constants.TABLE2_MAX,
                         max_val, status, "", elapsed))
        if status != "exact-match":
            all_ok = False
    else:
        # per-row Monte Carlo against each labelled context
        planned, _ = plan_extensions(pair.ambient, pair.socle)
        label_by_selector = {}
        for plan in planned:
            label_by_selector[plan.label] = plan
        for row in constants.TABLE2:
            match = [
                p for p in planned
                if all(p.invariants.get(k) == v for k, v in row.selector.items())
            ]
            if len(match) != 1:
                rows_out.append((row.label, row.expected, None, "mismatch",
                                 f"{len(match)} planned rows match", 0.0))
                all_ok = False
                continue
            status, computed, _ = _verify_row_mc(
                pair, match[0].label, row.expected, args.mc_samples, args.seed
            )
            rows_out.append((row.label, row.expected, computed, status,
                             row.note, 0.0))
            if status != "ci-consistent":
                all_ok = False
    return _emit_table(2, rows_out, all_ok, args, out)


def _emit_table(table_id: int, rows, all_ok: bool, args, out) -> int:
    if args.format == "json":
        payload: dict = {
            "table": table_id,
            "rows": [
                {
                    "label": label,
                    "expected": {"num": exp.numerator, "den": exp.denominator},
                    "computed": (
                        None

                        if comp is None
                        else {"num": comp.numerator, "den": comp.denominator}
                    ),
                    "status": status,
                    "note": note,
                }
                for label, exp, comp, status, note, _ in rows
            ],
            "all_ok": all_ok,
        }
        if not args.deterministic:
            payload["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%S")
        print(json.dumps(payload, sort_keys=True), file=out)
    elif args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["group", "method", "num", "den", "decimal", "status"])
        for label, exp, comp, status, note, _ in rows:
            v = comp if comp is not None else exp
            w.writerow([
                label, "verify",
                v.numerator if comp is not None else "",
                v.denominator if comp is not None else "",
                dec_str(float(v)) if comp is not None else "",
                status,
            ])
    else:
        print(f"table {table_id}:", file=out)
        for label, exp, comp, status, note, elapsed in rows:
            comp_s = frac_str(comp) if comp is not None else "-"
            line = (
                f"  {label:28s} expected {frac_str(exp):12s} "
                f"computed {comp_s:12s} {status}"
            )
            if note:
                line += f"  ({note})"
            if not args.deterministic:
                line += f"  [{elapsed:.1f}s]"
            print(line, file=out)
        print(f"result: {'all rows consistent' if all_ok else 'MISMATCH'}",
              file=out)
    return 0 if all_ok else 1


def cmd_verify_tables(args, out) -> int:
    if args.table == 1:
        return verify_table1(args, out)
    return verify_table2(args, out)


# -- argument parsing ----------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--deterministic", action="store_true",
                   help="suppress timestamps and timings in output")
    p.add_argument("--budget", type=int, default=100_000_000,
                   help="maximum exact pair evaluations")


def _add_context(p: argparse.ArgumentParser) -> None:
    p.add_argument("spec", help="group or pair spec, e.g. alt:5 or file:PATH")
    p.add_argument("--normal", default=None,
                   help="normal subgroup spec, or 'socle' for pair specs")
    p.add_argument("--normal-gens", default=None,
                   help="semicolon-separated generator permutations")
    p.add_argument("--g1", default=None, help="first coset representative")
    p.add_argument("--g2", default=None, help="second coset representative")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="nilprob",
        description="Exact nilpotency probabilities of finite permutation groups",
    )
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("nu", help="exact nu(G)")
    p.add_argument("spec")
    p.add_argument("--method", choices=("classes", "full"), default="classes")
    _add_common(p)

    p = sub.add_parser("nu-coset", help="exact coset-relative value")
    _add_context(p)
    p.add_argument("--method", choices=("classes", "full"), default="classes")
    _add_common(p)

    p = sub.add_parser("pi", help="generation probability over cosets")
    _add_context(p)
    _add_common(p)

    p = sub.add_parser("nu-tilde", help="extension maximum over a pair")
    p.add_argument("spec")
    _add_common(p)

    p = sub.add_parser("tau", help="coset value of one extension row")
    p.add_argument("spec")
    p.add_argument("--row", default=None,
                   help="extension row label from nu-tilde (default: full ambient)")
    _add_common(p)

    p = sub.add_parser("mc", help="Monte Carlo estimate")
    _add_context(p)
    p.add_argument("--socle", action="store_true",
                   help="sample the socle of a pair spec")
    p.add_argument("--row", default=None,
                   help="sample the labelled extension context of a pair spec")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=20260818)
    p.add_argument("--workers", type=int, default=1)
    _add_common(p)

    p = sub.add_parser("alt-bound", help="upper bound from generation probabilities")
    p.add_argument("--pi-n", type=_parse_fraction, required=True, dest="pi_n")
    p.add_argument("--pi-n-1", type=_parse_fraction, required=True, dest="pi_n_1")
    p.add_argument("--n", type=int, required=True)
    _add_common(p)

    p = sub.add_parser("verify-tables", help="recompute the published tables")
    p.add_argument("--table", type=int, choices=(1, 2), required=True)
    p.add_argument("--budget", type=float, default=60.0,
                   help="seconds per row before falling back to sampling")
    p.add_argument("--mc-samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=20260818)
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--deterministic", action="store_true")

    p = sub.add_parser("solvable-check", help="nu against the 1/12 threshold")
    p.add_argument("spec")
    _add_common(p)

    return ap


HANDLERS = {
    "nu": cmd_nu,
    "nu-coset": cmd_nu_coset,
    "pi": cmd_pi,
    "nu-tilde": cmd_nu_tilde,
    "tau": cmd_tau,
    "mc": cmd_mc,
    "alt-bound": cmd_alt_bound,
    "verify-tables": cmd_verify_tables,
    "solvable-check": cmd_solvable_check,
}


def run(argv: list[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return HANDLERS[args.verb](args, out)
    except BudgetExceededError as exc:
        print(f"budget refused: {exc}", file=sys.stderr)
        return 3
    except (GroupFormatError, KeyError, ValueError, OSError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except VerificationError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
