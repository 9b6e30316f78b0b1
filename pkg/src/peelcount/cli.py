"""Command-line surface: count, construct, verify, search, curve.

Exit codes are part of the interface: 0 success, 1 a mathematical claim
failed (refuted item, failed certification, oracle mismatch), 2 usage
error, 3 unreadable or invalid input data.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass

from peelcount import __version__
from peelcount.bounds import (
    CheckItem,
    PowerProduct,
    VerificationReport,
    coef_lemma_check,
    compare,
    divide_lemma_check,
    entropy_bound_check,
    floor_ceil_check,
    floor_value,
    lower_bound,
    merge_reports,
    proof_constants_check,
    upper_bound,
)
from peelcount.constructions import (
    CertificationError,
    build_simplex,
    build_ternary,
    build_threeblock,
    verify_invariant,
)
from peelcount.geometry import CapacityError, DegeneracyError
from peelcount.peeling import count, count_bruteforce, MAX_BRUTEFORCE_POINTS
from peelcount.ptsio import (
    ParseError,
    dump_pts,
    format_rational,
    load_blocks,
    load_pts,
    write_blocks,
    write_pts,
)
from peelcount.search import (
    SearchConfig,
    embedded_small_configs,
    perturb_search,
    random_point_set,
)

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_USAGE = 2
EXIT_INPUT = 3

SMALL_MINIMA = {3: 6, 4: 18, 5: 60, 6: 180}


def _fail_usage(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_USAGE


# ---- count ----


def cmd_count(args: argparse.Namespace) -> int:
    ps = load_pts(args.file)
    value = count(ps)
    oracle_checked = False
    if args.oracle:
        if ps.n > MAX_BRUTEFORCE_POINTS:
            return _fail_usage(
                f"--oracle supports at most {MAX_BRUTEFORCE_POINTS} points, file has {ps.n}"
            )
        reference = count_bruteforce(ps)
        oracle_checked = True
        if reference != value:
            print(
                f"oracle mismatch: engine {value}, brute force {reference}",
                file=sys.stderr,
            )
            return EXIT_REFUTED
    if args.json:
        payload = {
            "command": "count",
            "n": ps.n,
            "dim": ps.dim,
            "count": str(value),
            "oracle_checked": oracle_checked,
        }
        print(json.dumps(payload, indent=2))
    else:
        print(value)
    return EXIT_OK


# ---- construct ----


def _serialize_certification(construction) -> dict:
    spec = construction.spec
    report = construction.certification
    return {
        "command": "construct",
        "kind": spec.kind,
        "k": spec.k,
        "n": spec.n,
        "d": spec.d,
        "eps_schedule": [str(e) for e in spec.eps_schedule],
        "certified": report.passed,
        "mode": report.mode,
        "arity": report.arity,
        "states_checked": report.states_checked,
        "samples_run": report.samples_run,
        "centers": [
            {
                "labels": list(labels),
                "center": [format_rational(c) for c in center],
            }
            for labels, center in construction.centers
        ],
    }


def cmd_construct(args: argparse.Namespace) -> int:
    kind = args.kind
    if kind == "ternary":
        if args.k is None:
            return _fail_usage("construct ternary requires --k")
        construction = build_ternary(args.k)
    elif kind == "threeblock":
        if args.n is None:
            return _fail_usage("construct threeblock requires --n")
        construction = build_threeblock(args.n)
    elif kind == "simplex":
        if args.d is None or args.k is None:
            return _fail_usage("construct simplex requires --d and --k")
        construction = build_simplex(args.d, args.k)
    else:  # argparse choices make this unreachable
        return _fail_usage(f"unknown kind {kind!r}")

    base = args.out
    if base.endswith(".pts"):
        base = base[: -len(".pts")]
    pts_path = base + ".pts"
    blocks_path = base + ".blocks"
    cert_path = base + ".cert.json"
    write_pts(construction.points, pts_path)
    write_blocks(construction.blocks, blocks_path)
    payload = _serialize_certification(construction)
    with open(cert_path, "w", encoding="ascii") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        spec = construction.spec
        schedule = ", ".join(str(e) for e in spec.eps_schedule)
        print(f"wrote {pts_path}, {blocks_path}, {cert_path}")
        print(
            f"{spec.kind}: n={spec.n}, d={spec.d}, certified "
            f"({construction.certification.mode}, squash schedule [{schedule}])"
        )
    return EXIT_OK


# ---- verify ----


def _report_to_payload(target: str, report: VerificationReport) -> dict:
    return {
        "command": "verify",
        "target": target,
        "passed": report.passed,
        "items": [
            {
                "id": item.item_id,
                "statement": item.statement,
                "verdict": item.verdict,
                "witness": item.witness,
                "lhs_bits": item.lhs_bits,
                "rhs_bits": item.rhs_bits,
            }
            for item in report.items
        ],
    }


_TABLE_LIMIT = 60


def _print_report(report: VerificationReport) -> None:
    items = report.items
    refuted = report.refuted()
    if len(items) > _TABLE_LIMIT:
        shown = list(refuted)
        print(
            f"{len(items)} items, {len(items) - len(refuted)} proved; "
            + ("refuted items follow" if refuted else "all proved")
        )
    else:
        shown = list(items)
    for item in shown:
        print(f"{item.item_id:<24} {item.verdict:<8} {item.statement}")
        if item.verdict == "refuted":
            print(f"{'':<24} witness: {item.witness}")
    print("PASS" if report.passed else f"FAIL ({len(refuted)} refuted)")


def _lemma_report(args: argparse.Namespace) -> VerificationReport:
    reports = []
    for n in range(1, args.entropy_n_max + 1):
        for p, q in ((1, 4), (1, 3), (2, 5), (1, 2)):
            if (p * n) % q == 0:
                reports.append(entropy_bound_check(n, p, q))
    reports.append(floor_ceil_check(args.step_n_max))
    reports.append(coef_lemma_check(args.coef_lo, args.coef_hi))
    for i in range(args.divide_samples):
        cfg = SearchConfig(n=4 + i % 7, seed=(args.seed + 7919 * i) % 2**64)
        ps = random_point_set(cfg)
        # deterministic split: roughly half the labels
        part = list(ps.labels)[: ps.n // 2 + i % 2]
        reports.append(divide_lemma_check(ps, part))
    return merge_reports("lemmas", reports)


def _small_values_report() -> VerificationReport:
    items = []
    for n, want in sorted(SMALL_MINIMA.items()):
        ps = embedded_small_configs(n)[0]
        got = count(ps)
        reference = count_bruteforce(ps)
        ok = got == want == reference
        items.append(
            CheckItem(
                item_id=f"small-{n}",
                statement=f"embedded n={n} counts {want} (engine and brute force)",
                verdict="proved" if ok else "refuted",
                witness=f"engine {got}, brute force {reference}, expected {want}",
                lhs_bits=got.bit_length(),
                rhs_bits=want.bit_length(),
            )
        )
    return VerificationReport("small-values", tuple(items))


def _invariant_report(args: argparse.Namespace) -> tuple[VerificationReport, int]:
    if not args.file or not args.blocks:
        return VerificationReport("invariant", ()), _fail_usage(
            "verify invariant requires --file and --blocks"
        )
    if not args.exhaustive and args.seed is None:
        return VerificationReport("invariant", ()), _fail_usage(
            "sampled verification requires --seed (or pass --exhaustive)"
        )
    ps = load_pts(args.file)
    tree = load_blocks(args.blocks)
    mode = "exhaustive" if args.exhaustive else "sampled"
    report = verify_invariant(
        ps, tree, mode=mode, samples=args.samples, seed=args.seed or 0
    )
    detail = (
        f"{report.states_checked} states"
        if mode == "exhaustive"
        else f"{report.samples_run} samples, {report.states_checked} states"
    )
    if report.passed:
        witness = detail
    else:
        v = report.violations[0]
        witness = f"{detail}; remaining {v.remaining}: {v.reason}"
    item = CheckItem(
        item_id=f"invariant-{mode}",
        statement=f"one extreme point per top block throughout peeling ({ps.n} points)",
        verdict="proved" if report.passed else "refuted",
        witness=witness,
        lhs_bits=0,
        rhs_bits=0,
    )
    return VerificationReport("invariant", (item,)), EXIT_OK


def _chain_sets(chain_n_max: int):
    for n in sorted(SMALL_MINIMA):
        yield f"embedded-{n}", embedded_small_configs(n)[0], 2
    for n in range(3, chain_n_max + 1):
        yield f"threeblock-{n}", build_threeblock(n).points, 2
    for k in (1, 2):
        yield f"ternary-{k}", build_ternary(k).points, 2
    yield "simplex-3-1", build_simplex(3, 1).points, 3


def _bounds_chain_report(args: argparse.Namespace) -> VerificationReport:
    items = []
    for name, ps, d in _chain_sets(args.chain_n_max):
        n = ps.n
        c = count(ps)
        floor = lower_bound(n, d)
        uppers: list[tuple[str, PowerProduct]] = []
        if d == 2:
            uppers.append(("cor1", upper_bound(n, 2, "cor1")))
            if n >= 3:
                uppers.append(("thm2", upper_bound(n, 2, "thm2")))
            k = n
            while k % 3 == 0:
                k //= 3
            if k == 1:
                uppers.append(("thm1", upper_bound(n, 2, "thm1")))
        else:
            uppers.append(("cor2", upper_bound(n, d, "cor2")))
            k = n
            while k % (d + 1) == 0:
                k //= d + 1
            if k == 1:
                uppers.append(("thm3", upper_bound(n, d, "thm3")))
        ok = floor <= c
        bad_upper = None
        for which, pp in uppers:
            if compare(c, pp) > 0:
                ok = False
                bad_upper = which
                break
        witness = f"{floor} <= {c} <= " + ", ".join(
            f"{which}:{pp}" for which, pp in uppers
        )
        if bad_upper:
            witness += f" VIOLATED at {bad_upper}"
        items.append(
            CheckItem(
                item_id=f"chain-{name}",
                statement=f"lower bound <= exact count <= upper bounds for {name} (n={n}, d={d})",
                verdict="proved" if ok else "refuted",
                witness=witness,
                lhs_bits=floor.bit_length(),
                rhs_bits=c.bit_length(),
            )
        )
    return VerificationReport("bounds-chain", tuple(items))


def cmd_verify(args: argparse.Namespace) -> int:
    target = args.target
    if target == "constants":
        report = proof_constants_check()
    elif target == "lemmas":
        if args.seed is None and args.divide_samples > 0:
            return _fail_usage(
                "verify lemmas draws random instances; pass --seed "
                "(or --divide-samples 0)"
            )
        report = _lemma_report(args)
    elif target == "small-values":
        report = _small_values_report()
    elif target == "invariant":
        report, code = _invariant_report(args)
        if code != EXIT_OK:
            return code
    elif target == "bounds-chain":
        report = _bounds_chain_report(args)
    else:  # unreachable through argparse choices
        return _fail_usage(f"unknown verify target {target!r}")

    if args.json:
        print(json.dumps(_report_to_payload(target, report), indent=2))
    else:
        _print_report(report)
    return EXIT_OK if report.passed else EXIT_REFUTED


# ---- search ----


def cmd_search(args: argparse.Namespace) -> int:
    cfg = SearchConfig(
        n=args.n,
        seed=args.seed,
        iterations=args.iterations,
        coordinate_resolution=args.resolution,
        threads=args.threads,
    )
    ps, best = perturb_search(cfg)
    if args.json:
        payload = {
            "command": "search",
            "n": cfg.n,
            "seed": cfg.seed,
            "count": str(best),
            "points": [
                {"label": lab, "coords": [format_rational(c) for c in pt]}
                for lab, pt in ps.pairs()
            ],
        }
        print(json.dumps(payload, indent=2))
    else:
        print(f"# count {best}")
        dump_pts(ps, sys.stdout)
    return EXIT_OK


# ---- curve ----


@dataclass(frozen=True)
class CurveRow:
    n: int
    lower: int
    exact: int | None
    upper_floor: int | None
    layer: int | None
    log10_lower: float
    log10_upper: float | None


def curve_rows(n_max: int, exact_cap: int) -> list[CurveRow]:
    rows = []
    for n in range(1, n_max + 1):
        lower = lower_bound(n, 2)
        exact = count(build_threeblock(n).points) if n <= exact_cap else None
        if n >= 3:
            bound = upper_bound(n, 2, "thm2")
            upper_floor = floor_value(bound)
            value = bound.as_fraction()
            log10_upper = math.log10(value.numerator) - math.log10(value.denominator)
        else:
            upper_floor = None
            log10_upper = None
        layer = 6 ** (n // 3) if n % 3 == 0 else None
        rows.append(
            CurveRow(
                n=n,
                lower=lower,
                exact=exact,
                upper_floor=upper_floor,
                layer=layer,
                log10_lower=math.log10(lower) if lower > 0 else 0.0,
                log10_upper=log10_upper,
            )
        )
    return rows


CURVE_HEADER = (
    "n",
    "lower_bound",
    "exact_count",
    "upper_bound_floor",
    "layer_count",
    "log10_lower",
    "log10_upper",
)


def _write_curve_csv(rows: list[CurveRow], fh) -> None:
    writer = csv.writer(fh)
    writer.writerow(CURVE_HEADER)
    for r in rows:
        writer.writerow(
            [
                r.n,
                r.lower,
                "" if r.exact is None else r.exact,
                "" if r.upper_floor is None else r.upper_floor,
                "" if r.layer is None else r.layer,
                f"{r.log10_lower:.6f}",
                "" if r.log10_upper is None else f"{r.log10_upper:.6f}",
            ]
        )


MAX_CURVE_N = 64


def cmd_curve(args: argparse.Namespace) -> int:
    if args.n_max > MAX_CURVE_N:
        return _fail_usage(f"--n-max is capped at {MAX_CURVE_N}")
    if args.n_max < 1:
        return _fail_usage("--n-max must be positive")
    rows = curve_rows(args.n_max, args.exact_cap)
    if args.out:
        with open(args.out, "w", encoding="ascii", newline="") as fh:
            _write_curve_csv(rows, fh)
        print(f"wrote {args.out} ({len(rows)} rows)")
    else:
        _write_curve_csv(rows, sys.stdout)
    if args.plot:
        from peelcount.plotting import render_curve

        render_curve(rows, args.plot)
        print(f"wrote {args.plot}")
    return EXIT_OK


# ---- parser ----


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="peelcount",
        description="Exact counting, construction, and verification of "
        "convex-hull peeling sequences.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="count peeling sequences of a .pts file")
    p.add_argument("file")
    p.add_argument("--threads", type=int, default=1,
                   help="accepted for interface parity; counting is deterministic")
    p.add_argument("--oracle", action="store_true",
                   help="cross-check against the brute-force counter (n <= 12)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("construct", help="build and certify a construction")
    p.add_argument("kind", choices=("ternary", "threeblock", "simplex"))
    p.add_argument("--k", type=int, help="recursion depth (ternary, simplex)")
    p.add_argument("--n", type=int, help="point count (threeblock)")
    p.add_argument("--d", type=int, help="dimension (simplex)")
    p.add_argument("--out", required=True,
                   help="output base path; writes .pts, .blocks, .cert.json")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument(
        "target",
        choices=("constants", "lemmas", "small-values", "invariant", "bounds-chain"),
    )
    p.add_argument("--entropy-n-max", type=int, default=200)
    p.add_argument("--step-n-max", type=int, default=500)
    p.add_argument("--coef-lo", type=int, default=24)
    p.add_argument("--coef-hi", type=int, default=1000)
    p.add_argument("--divide-samples", type=int, default=50)
    p.add_argument("--chain-n-max", type=int, default=9)
    p.add_argument("--file", help="point set for invariant verification")
    p.add_argument("--blocks", help="block tree for invariant verification")
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", help="hill descent toward low-count sets")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--iterations", type=int, default=10_000)
    p.add_argument("--resolution", type=int, default=16)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("curve", help="emit the bound-chain table as CSV")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--out", help="CSV path (default: standard output)")
    p.add_argument("--exact-cap", type=int, default=12,
                   help="largest n for which the exact count column is filled")
    p.add_argument("--plot", help="also render the chart to this image file")
    p.set_defaults(func=cmd_curve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DegeneracyError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CapacityError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CertificationError as exc:
        print(f"certification failed: {exc}", file=sys.stderr)
        return EXIT_REFUTED
    except ValueError as exc:
        return _fail_usage(str(exc))


if __name__ == "__main__":
    sys.exit(main())
