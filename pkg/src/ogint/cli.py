"""Command-line surface: exact values, verification batteries, and reports.

Output is exact "p/q" strings, CSV, or JSON only; stochastic subcommands take
explicit seeds so identical command lines produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import weingarten as wg
from .exactnum import format_rational
from .integrals import (
    elementary_expansion,
    j_normalization_factor,
    j_value,
    integral_value,
)
from .matrices import ExponentMatrix, parse_matrix_spec
from .normalization import (
    gamma_balanced_check,
    phi_property_battery,
    rational_transmutation_check,
    solve_normalization_exponents,
    construction_exponents,
)
from .threerow import conjecture73, diagonal_moments, j3_closed, j3_recurrence, prop64_check, ThreeRowConfig
from .weingarten import GramSingularError

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_SINGULAR = 3


def _parse_range(spec: str) -> list[int]:
    """Parse "3..10" (inclusive) or a single integer or "3,5,7"."""
    spec = spec.strip()
    if ".." in spec:
        lo, hi = spec.split("..")
        return list(range(int(lo), int(hi) + 1))
    if "," in spec:
        return [int(v) for v in spec.split(",")]
    return [int(spec)]


def cmd_integral(args) -> int:
    try:
        a = parse_matrix_spec(args.matrix)
    except (ValueError, OSError) as exc:
        print(f"error: bad matrix spec: {exc}", file=sys.stderr)
        return EXIT_PARSE
    n_values = _parse_range(args.n_range) if args.n_range else [args.n]
    if any(n is None for n in n_values):
        print("error: provide -n or --n-range", file=sys.stderr)
        return EXIT_PARSE
    rows_out = []
    for n in n_values:
        try:
            if args.trace and a.total > 0 and not any(s % 2 for s in a.col_sums()):
                for term in elementary_expansion(a, compressed=True):
                    print(
                        json.dumps(
                            {
                                "n": n,
                                "types": [list(map(list, t)) for t in term.types],
                                "kprime": format_rational(term.coefficient),
                                "matrix": str(term.matrix),
                                "term": format_rational(
                                    term.coefficient * j_value(term.matrix, n)
                                ),
                            }
                        )
                    )
            if args.normalized:
                val = j_value(a, n, method=args.method)
            else:
                val = integral_value(a, n, method=args.method)
                if val == 0 and a.is_admissible() and a.total > 0:
                    print(
                        f"note: admissible matrix with vanishing integral at n={n}",
                        file=sys.stderr,
                    )
        except GramSingularError as exc:
            print(
                f"error: {exc}\nhint: --normalized with the two-row or closed-form "
                f"path covers one/two-row, cross and spark shapes",
                file=sys.stderr,
            )
            return EXIT_SINGULAR
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_PARSE
        rows_out.append((n, val))
    if args.n_range:
        for n, val in rows_out:
            print(f"{n},{format_rational(val)}")
    else:
        print(format_rational(rows_out[0][1]))
    return EXIT_OK


def cmd_weingarten_table(args) -> int:
    try:
        tab = wg.weingarten_table(args.k, args.n)
    except GramSingularError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    ps = tab.pairings
    print("# pairings: " + " ".join(str(p) for p in ps))
    full = tab.full_matrix()
    for row in full:
        print(",".join(format_rational(v) for v in row))
    return EXIT_OK


def cmd_expand(args) -> int:
    try:
        a = parse_matrix_spec(args.matrix)
    except (ValueError, OSError) as exc:
        print(f"error: bad matrix spec: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        terms = elementary_expansion(a, compressed=not args.plain)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    for term in terms:
        print(
            json.dumps(
                {
                    "types": [list(map(list, t)) for t in term.types],
                    "coefficient": format_rational(term.coefficient),
                    "matrix": str(term.matrix),
                }
            )
        )
    return EXIT_OK


def cmd_check_normalization(args) -> int:
    n_values = _parse_range(args.n)
    report = phi_property_battery(
        q_max=args.q, max_entry=args.max_entry, n_values=n_values
    )
    failures = {k: v for k, v in report.items() if not v["pass"]}
    exps = {}
    for q in (2, 3):
        sol = solve_normalization_exponents(q)
        match = sol["exponents"] == construction_exponents(q)
        exps[f"q{q}"] = {
            "exponents": [str(e) for e in sol["exponents"]],
            "matches_construction": match,
            "raw_nullity": sol["raw_nullity"],
        }
        if not match:
            failures[f"exponents_q{q}"] = exps[f"q{q}"]
    out = {
        "properties": {
            k: {"pass": v["pass"], "checked": v["checked"],
                "counterexamples": v["counterexamples"]}
            for k, v in report.items()
        },
        "exponent_systems": exps,
        "pass": not failures,
    }
    print(json.dumps(out, indent=2, default=str))
    return EXIT_OK if not failures else EXIT_FAIL


def cmd_check_conjecture(args) -> int:
    n_values = _parse_range(args.n)
    print("a,b,c,n,value,is_integer")
    flagged = 0
    for a in range(0, args.max + 1, 2):
        for b in range(0, a + 1, 2):
            for c in range(0, b + 1, 2):
                for n in n_values:
                    val, isint = conjecture73(a, b, c, n)
                    print(f"{a},{b},{c},{n},{format_rational(val)},{str(isint).lower()}")
                    if not isint:
                        flagged += 1
    if flagged:
        print(f"note: {flagged} non-integer values flagged for investigation", file=sys.stderr)
    return EXIT_OK


def cmd_model_compare(args) -> int:
    from .spheremodel import model_battery

    report = model_battery(args.n, max_degree=args.max_degree)
    printable = {
        "n": report["n"],
        "checks": {k: bool(v) for k, v in report["checks"].items()},
        "pass": report["pass"],
    }
    if "first_mismatch" in report:
        printable["first_mismatch"] = report["first_mismatch"]
    print(json.dumps(printable, indent=2))
    return EXIT_OK if report["pass"] else EXIT_FAIL


def cmd_haar_sample(args) -> int:
    from .montecarlo import haar_moment_check, monomial_estimate, haar_sample

    try:
        a = parse_matrix_spec(args.monomial)
    except (ValueError, OSError) as exc:
        print(f"error: bad monomial spec: {exc}", file=sys.stderr)
        return EXIT_PARSE
    exact = None
    try:
        exact = wg.integral(a, args.n)
    except (GramSingularError, ValueError):
        pass
    if exact is not None:
        chk = haar_moment_check(args.n, a, exact, count=args.count, seed=args.seed,
                                special=args.special)
        print(f"estimate {chk.estimate:.8f} +- {chk.stderr:.8f}")
        print(f"exact {format_rational(exact)} ({float(exact):.8f})")
        print(f"sigmas {chk.sigmas:.2f} verdict {'pass' if chk.ok else 'FAIL'}")
        return EXIT_OK if chk.ok else EXIT_FAIL
    batch = haar_sample(args.n, args.count, args.seed, args.special)
    chk = monomial_estimate(batch, a)
    print(f"estimate {chk.estimate:.8f} +- {chk.stderr:.8f}")
    print("exact value unavailable (singular Gram matrix or out-of-range shape)")
    return EXIT_OK


def _run_named_check(item):
    name, fn = item
    try:
        ok, detail = fn()
    except Exception as exc:  # surfaced in the report, not swallowed
        return name, False, repr(exc)
    return name, ok, detail


def _identity_suite(max_sum: int, n_values: list[int]) -> list:
    import itertools
    from .integrals import (
        two_row_j,
        one_row,
        n2_closed,
        flip_f,
        transmutation_check,
        compression_check,
        cross_j,
        spark_j,
        j_from_integral,
    )

    checks = []

    def add(name, fn):
        checks.append((name, fn))

    def one_row_vs_weingarten():
        for q in (1, 2, 3):
            for a in itertools.product(range(0, max_sum + 1, 2), repeat=q):
                if sum(a) > max_sum or sum(a) == 0:
                    continue
                for n in n_values:
                    if n < max(q, 1):
                        continue
                    m = ExponentMatrix([list(a)])
                    if m.strip_zeros().q > n:
                        continue
                    try:
                        ref = wg.integral(m, n)
                    except GramSingularError:
                        continue
                    if one_row(a, n) != ref:
                        return False, {"a": a, "n": n}
        return True, None

    add("one_row_vs_weingarten", one_row_vs_weingarten)

    def two_row_vs_weingarten():
        for a, b, c, d in itertools.product(range(5), repeat=4):
            m = ExponentMatrix([[a, c], [b, d]])
            if not m.is_admissible() or not 0 < m.total <= max_sum:
                continue
            for n in n_values:
                if n < 2:
                    continue
                try:
                    ref = j_from_integral(m, n, wg.integral(m, n))
                except GramSingularError:
                    continue
                if two_row_j(m, n) != ref:
                    return False, {"matrix": [[a, c], [b, d]], "n": n}
        return True, None

    add("two_row_vs_weingarten", two_row_vs_weingarten)

    def n2_vs_weingarten():
        for a, b, c, d in itertools.product(range(3), repeat=4):
            if (a + b + c + d) > 4:
                continue
            m = ExponentMatrix([[a, c], [b, d]])
            try:
                ref = wg.integral(m, 2)
            except GramSingularError:
                continue
            if n2_closed(a, b, c, d) != ref:
                return False, {"matrix": [[a, c], [b, d]]}
        return True, None

    add("n2_vs_weingarten", n2_vs_weingarten)

    def flipping():
        for q in (2, 3):
            for cols in itertools.product(
                itertools.product(range(5), repeat=2), repeat=q
            ):
                rows = [[c[0] for c in cols], [c[1] for c in cols]]
                for n in n_values:
                    if n < 2:
                        continue
                    base = flip_f(rows, n)
                    for j in range(q):
                        flipped = [list(rows[0]), list(rows[1])]
                        flipped[0][j], flipped[1][j] = flipped[1][j], flipped[0][j]
                        if flip_f(flipped, n) != base:
                            return False, {"matrix": rows, "n": n, "col": j}
        return True, None

    add("flipping", flipping)

    def transmutation():
        for q in (1, 2):
            for a in itertools.product(range(5), repeat=q):
                for b in itertools.product(range(5), repeat=q):
                    for c in [(2,), (4,), (2, 2), (2, 4)]:
                        for n in n_values:
                            if n < 2:
                                continue
                            if not transmutation_check(a, b, c, n):
                                return False, {"a": a, "b": b, "c": c, "n": n}
        return True, None

    add("transmutation", transmutation)

    def cross_and_spark_vs_two_row():
        for a, b in itertools.product(range(0, 5), repeat=2):
            for c in [(2,), (4,), (2, 2), (4, 2)]:
                for n in n_values:
                    if n < 2:
                        continue
                    rows = [[a] + list(c), [b] + [0] * len(c)]
                    if cross_j(a, b, c, n) != two_row_j(rows, n):
                        return False, {"kind": "cross", "a": a, "b": b, "c": c, "n": n}
        for x, y, a, b in itertools.product(range(0, 5), repeat=4):
            for n in n_values:
                if n < 2:
                    continue
                rows = [[x, a, 0], [y, 0, b]]
                if spark_j(x, y, a, b, n) != two_row_j(rows, n):
                    return False, {"kind": "spark", "xyab": (x, y, a, b), "n": n}
        return True, None

    add("cross_spark_vs_two_row", cross_and_spark_vs_two_row)

    def compression():
        cases = [
            ((2,), (2, 2), [[2]]),
            ((2,), (4,), [[2]]),
            ((0,), (2, 2), [[4]]),
            ((2, 0), (2,), [[0, 2]]),
        ]
        for a, c, b in cases:
            for n in n_values:
                total = sum(a) + sum(c) + sum(sum(r) for r in b)
                if n < 2 or total > max_sum:
                    continue
                try:
                    if not compression_check(a, c, b, n):
                        return False, {"a": a, "c": c, "b": b, "n": n}
                except GramSingularError:
                    continue
        return True, None

    add("compression", compression)

    def gram_inverse():
        for k in (1, 2, 3, 4):
            for n in n_values:
                if n < 1:
                    continue
                try:
                    tab = wg.weingarten_table(k, n)
                except GramSingularError:
                    continue
                if not tab.verify_inverse():
                    return False, {"k": k, "n": n}
        return True, None

    add("gram_inverse", gram_inverse)

    return checks


def cmd_verify(args) -> int:
    n_values = _parse_range(args.n) if args.n else list(range(2, 9))
    results = []
    suites = (
        ["identities", "normalization", "threerow", "models", "conjecture", "asymptotics"]
        if args.suite == "all"
        else [args.suite]
    )
    checks: list = []
    report_only = set()

    if "identities" in suites:
        checks.extend(_identity_suite(args.max_sum, n_values))
    if "normalization" in suites:

        def normalization_battery():
            rep = phi_property_battery(q_max=3, max_entry=args.max_entry, n_values=[n for n in n_values if n >= 3][:4] or [3])
            bad = {k: v["counterexamples"] for k, v in rep.items() if not v["pass"]}
            return not bad, bad or None

        def balancedness():
            import itertools
            for q in (1, 2, 3):
                for cols in itertools.combinations_with_replacement(
                    itertools.product(range(3), repeat=2), q
                ):
                    rows = [[c[0] for c in cols], [c[1] for c in cols]]
                    if not gamma_balanced_check(rows):
                        return False, {"matrix": rows}
            return True, None

        def rational_transmutation():
            for c in [(2,), (1,), (2, 2), (3,)]:
                for n in [v for v in n_values if v >= 2]:
                    if not rational_transmutation_check((2, 1), (1, 2), c, n):
                        return False, {"c": c, "n": n}
            return True, None

        def exponent_systems():
            for q in (2, 3):
                sol = solve_normalization_exponents(q)
                if sol["exponents"] != construction_exponents(q):
                    return False, {"q": q, "got": [str(e) for e in sol["exponents"]]}
            return True, None

        checks.extend(
            [
                ("phi_properties", normalization_battery),
                ("gamma_balanced", balancedness),
                ("rational_transmutation", rational_transmutation),
                ("exponent_systems", exponent_systems),
            ]
        )
    if "threerow" in suites:

        def threerow_equalities():
            import itertools
            for a, b, c, x, y in itertools.product((0, 2, 4), repeat=5):
                for n in [v for v in n_values if v >= 3]:
                    cfg = ThreeRowConfig(a, b, c, x, y)
                    if j3_recurrence(cfg, n) != j3_closed(a, b, c, x, y, n):
                        return False, {"cfg": (a, b, c, x, y), "n": n}
                    if x == 0 and y == 0 and j3_closed(a, b, c, 0, 0, n) != diagonal_moments(a, b, c, n):
                        return False, {"cfg": (a, b, c), "n": n, "which": "diagonal"}
            return True, None

        def threerow_prop64():
            for a in range(0, 7, 2):
                for b in range(0, 7, 2):
                    for n in [v for v in n_values if v >= 3]:
                        if not prop64_check(a, b, n):
                            return False, {"a": a, "b": b, "n": n}
            return True, None

        def threerow_so3():
            from .spheremodel import integrate_so3
            import itertools
            for a, b, c in itertools.product((0, 2, 4), repeat=3):
                lhs = diagonal_moments(a, b, c, 3) * j_normalization_factor(
                    ExponentMatrix([[a, 0, 0], [0, b, 0], [0, 0, c]]), 3
                )
                if lhs != integrate_so3([[a, 0, 0], [0, b, 0], [0, 0, c]]):
                    return False, {"abc": (a, b, c)}
            return True, None

        checks.extend(
            [
                ("threerow_recurrence_closed_diagonal", threerow_equalities),
                ("threerow_tail2", threerow_prop64),
                ("threerow_rotation_oracle", threerow_so3),
            ]
        )
    if "models" in suites:

        def models_exact():
            from .spheremodel import model_battery
            for nn in (1, 2):
                rep = model_battery(nn, max_degree=min(args.max_sum, 6))
                if not rep["pass"]:
                    return False, rep["checks"]
            return True, None

        def models_sampled():
            from .montecarlo import law_compare_81
            for nn in (2, 3, 4):
                rep = law_compare_81(nn, count=args.count, seed=args.seed)
                if not rep["pass"]:
                    bad = [c.name for c in rep["checks"] if not c.ok]
                    return False, {"n": nn, "bad": bad}
            return True, None

        checks.extend([("models_exact", models_exact), ("models_sampled", models_sampled)])
    if "conjecture" in suites:

        def conjecture_scan():
            bad = []
            for a in range(0, args.max_sum + 1, 2):
                for b in range(0, a + 1, 2):
                    for c in range(0, b + 1, 2):
                        for n in [v for v in n_values if v >= 3]:
                            val, isint = conjecture73(a, b, c, n)
                            if not isint:
                                bad.append({"abc": (a, b, c), "n": n, "value": str(val)})
            return not bad, bad or None

        report_only.add("conjecture_integrality")
        checks.append(("conjecture_integrality", conjecture_scan))
    if "asymptotics" in suites:

        def asymptotics():
            from .integrals import integral_value
            for rows in ([[2]], [[4]], [[1, 1], [1, 1]], [[2, 2], [2, 2]]):
                rep = wg.asymptotic_check(
                    rows, n_list=list(range(10, 51, 5)), evaluator=integral_value
                )
                if not rep.ok:
                    return False, {"matrix": rows}
            return True, None

        checks.append(("asymptotics", asymptotics))

    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_named_check, checks))
    else:
        results = [_run_named_check(c) for c in checks]
    results.sort(key=lambda r: r[0])

    hard_fail = any(not ok for name, ok, _ in results if name not in report_only)
    out = {
        "suite": args.suite,
        "results": [
            {"name": name, "pass": ok, **({"detail": detail} if detail else {})}
            for name, ok, detail in results
        ],
        "pass": not hard_fail,
    }
    print(json.dumps(out, indent=2, default=str))
    return EXIT_OK if not hard_fail else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ogint",
        description="Exact polynomial integrals over the orthogonal group",
    )
    ap.add_argument("--no-cache", action="store_true", help="disable the on-disk table cache")
    ap.add_argument("--cache-size", type=int, default=64, help="in-memory table cache bound")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("integral", help="exact I(a) or J(a)")
    p.add_argument("-m", "--matrix", required=True, help='row-colon spec "4,0:0,0" or @file.json')
    p.add_argument("-n", type=int, help="dimension")
    p.add_argument("--n-range", help='dimension range "3..10" (CSV output)')
    p.add_argument("--normalized", action="store_true", help="print J(a) instead of I(a)")
    p.add_argument(
        "--method",
        choices=["auto", "weingarten", "two_row", "closed_form"],
        default="auto",
    )
    p.add_argument("--trace", action="store_true", help="print expansion terms as JSON lines")
    p.set_defaults(func=cmd_integral)

    p = sub.add_parser("weingarten-table", help="full inverse Gram table as CSV")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_weingarten_table)

    p = sub.add_parser("expand", help="elementary expansion terms as JSON lines")
    p.add_argument("-m", "--matrix", required=True)
    p.add_argument("--plain", action="store_true", help="uncompressed expansion of I")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("check-normalization", help="nine-property battery + exponent systems")
    p.add_argument("--q", type=int, default=3)
    p.add_argument("--max-entry", type=int, default=4)
    p.add_argument("--n", default="3..6")
    p.set_defaults(func=cmd_check_normalization)

    p = sub.add_parser("check-conjecture", help="integrality scan of normalized diagonal values")
    p.add_argument("--max", type=int, default=8)
    p.add_argument("--n", default="3..8")
    p.set_defaults(func=cmd_check_conjecture)

    p = sub.add_parser("model-compare", help="exact modelling battery")
    p.add_argument("--n", type=int, default=2, choices=(1, 2))
    p.add_argument("--max-degree", type=int, default=6)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_model_compare)

    p = sub.add_parser("haar-sample", help="Monte Carlo monomial estimate")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--monomial", required=True)
    p.add_argument("--special", action="store_true", help="rotation subgroup")
    p.set_defaults(func=cmd_haar_sample)

    p = sub.add_parser("verify", help="verification suites")
    p.add_argument(
        "--suite",
        choices=["identities", "normalization", "threerow", "models", "conjecture", "asymptotics", "all"],
        default="all",
    )
    p.add_argument("--max-sum", type=int, default=8)
    p.add_argument("--max-entry", type=int, default=4)
    p.add_argument("--n", help='dimension grid "2..10"')
    p.add_argument("--count", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.no_cache:
        wg.set_disk_cache(False)
    wg.set_cache_limit(args.cache_size)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
