"""Command line front end.

Commands
--------
table       inclusion checks over a (g, r, d) grid, emitted as JSON or CSV
verify-g    the isotropic-vanishing submodule versus the pairing span
bogomolov   intersected restriction kernels over a bicyclic family
components  covering-side component counts and exponents
selftest    deterministic property suites, seeded

Exit codes: 0 every checked flag holds, 1 some inclusion flag failed,
2 unusable configuration, 3 the enumeration cap cut off at least one
record (such records are marked skipped).

The enumeration cap can also be set through the environment variable
BRAUERKIT_CAP; an explicit --cap wins.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product
from math import gcd

import numpy as np

from .brauer import (
    MODE_ALL_PAIRS,
    MODE_PRIMITIVE_PAIRS,
    FormSubmodule,
    all_bicyclics,
    bogomolov_intersection,
    compute_G,
    isotropic_bicyclics,
    restriction_kernel,
    verify_main_inclusions,
)
from .covers import (
    CoverModel,
    picard_quotient_order,
    prym_component_count,
    quotient_component_count,
    twisted_norm_exponent,
)
from .finab import (
    CapExceededError,
    DEFAULT_ENUMERATION_CAP,
    FinAbGroup,
    is_bicyclic_rr,
    subgroup_from_generators,
)
from .sympl import AltForm, SymplecticSpace, eval_form, radical, upper_index_pairs, weil_form
from .zmodlinalg import (
    det_int,
    enumerate_row_span,
    howell_form,
    smith_normal_form,
    solve_mod,
)

CAP_ENV_VAR = "BRAUERKIT_CAP"
REPORT_SCHEMA = "brauerkit.report.v1"

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_CONFIG = 2
EXIT_CAP = 3

CSV_COLUMNS = [
    "g",
    "r",
    "d",
    "status",
    "form_rank",
    "weil_span_order",
    "g_order_all_pairs",
    "g_order_primitive_pairs",
    "gprime_order",
    "e_in_gprime",
    "gprime_subset_g_all",
    "gprime_subset_g_primitive",
    "g_all_equals_weil_span",
    "g_primitive_equals_weil_span",
    "gprime_equals_weil_span",
    "prym_components",
    "quotient_components",
    "l",
    "twist_exponent",
    "cfg_mode",
    "cfg_cap",
    "cfg_seed",
    "timing_ms",
]

GATING_FLAGS = [
    "e_in_gprime",
    "gprime_subset_g_all",
    "gprime_subset_g_primitive",
    "g_all_equals_weil_span",
    "g_primitive_equals_weil_span",
]


def parse_range(text: str) -> tuple[int, ...]:
    """Inclusive integer range: "a" or "a..b"."""
    text = text.strip()
    try:
        if ".." in text:
            lo_s, hi_s = text.split("..", 1)
            lo, hi = int(lo_s), int(hi_s)
        else:
            lo = hi = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad range {text!r}, want N or N..M") from exc
    if hi < lo:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return tuple(range(lo, hi + 1))


@dataclass(frozen=True)
class RunConfig:
    """Everything a table run depends on; echoed verbatim into the report."""

    g_values: tuple[int, ...]
    r_values: tuple[int, ...]
    d_values: tuple[int, ...]
    mode: str
    cap: int
    seed: int
    fmt: str
    out: str | None
    jobs: int
    timings: bool

    def public_dict(self) -> dict:
        return {
            "g": list(self.g_values),
            "r": list(self.r_values),
            "d": list(self.d_values),
            "mode": self.mode,
            "cap": self.cap,
            "seed": self.seed,
            "format": self.fmt,
        }


def _verify_pair(args: tuple[int, int, int, str]):
    g, r, cap, mode = args
    try:
        report = verify_main_inclusions(SymplecticSpace(g=g, r=r), cap=cap, mode=mode)
        return g, r, report.as_dict()
    except CapExceededError as exc:
        return g, r, {"cap_exceeded": str(exc)}


def _cover_fields(g: int, r: int, d: int) -> dict:
    tau = FinAbGroup((r,) * (2 * g)).element([1] + [0] * (2 * g - 1))
    model = CoverModel.from_tau(tau, d)
    return {
        "prym_components": prym_component_count(model),
        "quotient_components": quotient_component_count(model),
        "l": picard_quotient_order(r, d),
        "twist_exponent": twisted_norm_exponent(r),
    }


def _build_records(cfg: RunConfig) -> tuple[list[dict], int]:
    pair_args = [
        (g, r, cfg.cap, cfg.mode)
        for g, r in sorted(set(product(cfg.g_values, cfg.r_values)))
    ]
    timings: dict[tuple[int, int], float] = {}
    results: dict[tuple[int, int], dict] = {}
    if cfg.jobs > 1 and len(pair_args) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            for g, r, payload in pool.map(_verify_pair, pair_args):
                results[(g, r)] = payload
    else:
        for args in pair_args:
            t0 = time.perf_counter()
            g, r, payload = _verify_pair(args)
            timings[(g, r)] = (time.perf_counter() - t0) * 1000.0
            results[(g, r)] = payload

    verify_keys = [
        "form_rank",
        "weil_span_order",
        "g_order_all_pairs",
        "g_order_primitive_pairs",
        "gprime_order",
        "e_in_gprime",
        "gprime_subset_g_all",
        "gprime_subset_g_primitive",
        "g_all_equals_weil_span",
        "g_primitive_equals_weil_span",
        "gprime_equals_weil_span",
    ]
    records = []
    exit_code = EXIT_OK
    first_violation: str | None = None
    any_skipped = False
    for g, r, d in sorted(product(cfg.g_values, cfg.r_values, cfg.d_values)):
        payload = results[(g, r)]
        record: dict = {"g": g, "r": r, "d": d}
        if "cap_exceeded" in payload:
            any_skipped = True
            record["status"] = "skipped-cap"
            record.update({key: None for key in verify_keys})
        else:
            record["status"] = "ok"
            record.update({key: payload[key] for key in verify_keys})
            for flag in GATING_FLAGS:
                if record.get(flag) is False and first_violation is None:
                    first_violation = f"{flag} at g={g} r={r} d={d}"
        record.update(_cover_fields(g, r, d))
        record["timing_ms"] = (
            round(timings.get((g, r)), 3)
            if cfg.timings and (g, r) in timings
            else None
        )
        records.append(record)
    if first_violation is not None:
        print(f"violation: {first_violation}", file=sys.stderr)
        exit_code = EXIT_VIOLATION
    elif any_skipped:
        exit_code = EXIT_CAP
    return records, exit_code


def _render_json(cfg: RunConfig, records: list[dict]) -> str:
    doc = {"schema": REPORT_SCHEMA, "config": cfg.public_dict(), "records": records}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _render_csv(cfg: RunConfig, records: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for record in records:
        row = []
        for col in CSV_COLUMNS:
            if col == "cfg_mode":
                value = cfg.mode
            elif col == "cfg_cap":
                value = cfg.cap
            elif col == "cfg_seed":
                value = cfg.seed
            else:
                value = record.get(col)
            if value is None:
                row.append("")
            elif isinstance(value, bool):
                row.append("true" if value else "false")
            else:
                row.append(value)
        writer.writerow(row)
    return buf.getvalue()


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def load_report(path: str) -> dict:
    """Re-read a JSON report; unknown fields are preserved as-is."""
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("schema") != REPORT_SCHEMA:
        raise ValueError(f"unrecognized report schema {doc.get('schema')!r}")
    return doc


def cmd_table(cfg: RunConfig) -> int:
    records, exit_code = _build_records(cfg)
    text = (
        _render_csv(cfg, records) if cfg.fmt == "csv" else _render_json(cfg, records)
    )
    _emit(text, cfg.out)
    return exit_code


def cmd_verify_g(g_values, r_values, mode: str, cap: int) -> int:
    modes = [MODE_ALL_PAIRS, MODE_PRIMITIVE_PAIRS] if mode == "both" else [mode]
    ok = True
    for g, r in sorted(product(g_values, r_values)):
        space = SymplecticSpace(g=g, r=r)
        expected = FormSubmodule.weil_span(space)
        for m in modes:
            try:
                G = compute_G(space, m, cap)
            except CapExceededError as exc:
                print(f"g={g} r={r} mode={m} skipped: {exc}")
                return EXIT_CAP
            equal = G == expected
            ok &= equal
            print(
                f"g={g} r={r} mode={m} |G|={G.order} rank={G.rank} "
                f"equals-pairing-span={'yes' if equal else 'no'}"
            )
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_bogomolov(g_values, r_values, family: str, explicit: bool, cap: int) -> int:
    ok = True
    for g, r in sorted(product(g_values, r_values)):
        space = SymplecticSpace(g=g, r=r)
        try:
            if family == "all":
                fam = all_bicyclics(space, cap)
                gprime = bogomolov_intersection(space, fam, cap)
                print(
                    f"g={g} r={r} family=all members={len(fam)} "
                    f"|G'|={gprime.order} rank={gprime.rank}"
                )
                continue
            if explicit:
                fam = isotropic_bicyclics(space, cap)
                gprime = bogomolov_intersection(space, fam, cap)
                members = str(len(fam))
            else:
                gprime = bogomolov_intersection(space, None, cap)
                members = "streamed"
        except CapExceededError as exc:
            print(f"g={g} r={r} skipped: {exc}")
            return EXIT_CAP
        e_vec = weil_form(space).vector()
        g_prim = compute_G(space, MODE_PRIMITIVE_PAIRS, cap)
        e_in = gprime.contains_vector(e_vec)
        subset = gprime.is_submodule_of(g_prim)
        ok &= e_in and subset
        print(
            f"g={g} r={r} family=isotropic members={members} |G'|={gprime.order} "
            f"e-in-G'={'yes' if e_in else 'no'} "
            f"G'-in-G={'yes' if subset else 'no'} "
            f"equals-pairing-span={'yes' if gprime.order == r and e_in else 'no'}"
        )
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_components(r_values, d_values) -> int:
    ok = True
    print("r d prym quotient l twist")
    for r, d in sorted(product(r_values, d_values)):
        tau = FinAbGroup((r, r)).element([1, 0])
        model = CoverModel.from_tau(tau, d)
        prym = prym_component_count(model)
        quot = quotient_component_count(model)
        pic = picard_quotient_order(r, d)
        twist = twisted_norm_exponent(r)
        ok &= quot == pic == gcd(r, d) and prym == r
        print(f"{r} {d} {prym} {quot} {pic} {twist}")
    return EXIT_OK if ok else EXIT_VIOLATION


# ---------------------------------------------------------------------------
# selftest


def _suite_smith(rng: np.random.Generator):
    cases = 200
    for _ in range(cases):
        m = int(rng.integers(1, 7))
        k = int(rng.integers(1, 7))
        M = rng.integers(-50, 51, size=(m, k))
        U, D, V = smith_normal_form(M)
        if not np.array_equal(U @ M.astype(object) @ V, D):
            return False, "product mismatch"
        diag = [int(D[i, i]) for i in range(min(m, k))]
        for i in range(m):
            for j in range(k):
                if i != j and D[i, j]:
                    return False, "off-diagonal entry"
        for a, b in zip(diag, diag[1:]):
            if a < 0 or (a and b % a) or (a == 0 and b != 0):
                return False, "broken divisibility chain"
        if abs(det_int(U)) != 1 or abs(det_int(V)) != 1:
            return False, "transform not unimodular"
    return True, f"{cases} cases"


def _suite_howell(rng: np.random.Generator):
    cases = 0
    for n in (2, 3, 4, 6, 8):
        for _ in range(24):
            rows = int(rng.integers(1, 4))
            cols = int(rng.integers(1, 5))
            M = rng.integers(0, n, size=(rows, cols))
            H = howell_form(M, n)
            if enumerate_row_span(M, n) != enumerate_row_span(H, n):
                return False, f"span changed (n={n})"
            if not np.array_equal(howell_form(H, n), H):
                return False, f"not idempotent (n={n})"
            span = sorted(enumerate_row_span(M, n))
            extra = span[int(rng.integers(0, len(span)))]
            M2 = np.vstack([M[::-1], np.array(extra, dtype=np.int64)])
            if not np.array_equal(howell_form(M2, n), H):
                return False, f"same span, different form (n={n})"
            cases += 1
    return True, f"{cases} cases"


def _suite_solve(rng: np.random.Generator):
    n = 6
    cases = 12
    for _ in range(cases):
        m = int(rng.integers(1, 4))
        k = int(rng.integers(1, 5))
        A = rng.integers(0, n, size=(m, k))
        c = rng.integers(0, n, size=m)
        brute = set()
        for idx in range(n**k):
            x = np.array([(idx // n**j) % n for j in range(k)], dtype=np.int64)
            if not ((A @ x - c) % n).any():
                brute.add(tuple(x.tolist()))
        res = solve_mod(A, c, n)
        if res is None:
            if brute:
                return False, "missed a solvable system"
            continue
        x0, kernel = res
        if tuple(x0.tolist()) not in brute:
            return False, "particular solution wrong"
        shifted = {
            tuple(((np.array(v) + x0) % n).tolist())
            for v in enumerate_row_span(kernel, n)
        }
        if shifted != brute:
            return False, "kernel span wrong"
    return True, f"{cases} cases"


def _suite_bilinearity(rng: np.random.Generator):
    cases = 0
    for r in range(2, 9):
        for g in (1, 2, 3):
            space = SymplecticSpace(g=g, r=r)
            group = space.group
            for _ in range(4):
                form = AltForm.from_vector(
                    space, rng.integers(0, r, size=space.form_rank)
                )
                x = group.element(rng.integers(0, r, size=space.dim))
                y = group.element(rng.integers(0, r, size=space.dim))
                z = group.element(rng.integers(0, r, size=space.dim))
                if eval_form(form, x + y, z) != (
                    eval_form(form, x, z) + eval_form(form, y, z)
                ) % r:
                    return False, "not bilinear"
                if (eval_form(form, x, y) + eval_form(form, y, x)) % r:
                    return False, "not antisymmetric"
                if eval_form(form, x, x):
                    return False, "not alternating"
                cases += 1
    return True, f"{cases} cases"


def _suite_nondegeneracy(_: np.random.Generator, fault: str | None = None):
    cases = 0
    for g in (1, 2, 3):
        for r in (2, 3, 4, 5, 6):
            space = SymplecticSpace(g=g, r=r)
            form = weil_form(space)
            if fault == "weil-a1b1":
                vec = list(form.vector())
                vec[0] = 0  # drop the a1-b1 coefficient
                form = AltForm.from_vector(space, vec)
            if radical(form).order != 1:
                return False, f"degenerate pairing at g={g} r={r}"
            cases += 1
    return True, f"{cases} cases"


def _brute_vanishing_vectors(space: SymplecticSpace, require_bicyclic: bool):
    """Filter every coefficient vector against every constraint pair directly."""
    r = space.r
    X = space.group.coordinate_table()
    pairs = upper_index_pairs(space.dim)
    e = weil_form(space)
    rows = []
    n = X.shape[0]
    for i in range(n):
        for j in range(i + 1, n):
            x, y = X[i], X[j]
            if (sum(e.coeffs[a][b] * (x[a] * y[b] - x[b] * y[a]) for a, b in pairs)) % r:
                continue
            if require_bicyclic and not is_bicyclic_rr(
                space.group.element(x), space.group.element(y), r
            ):
                continue
            rows.append([(x[a] * y[b] - x[b] * y[a]) % r for a, b in pairs])
    R = np.array(rows, dtype=np.int64).reshape(-1, space.form_rank)
    F = FinAbGroup((r,) * space.form_rank).coordinate_table()
    good = ~((F @ R.T) % r).any(axis=1)
    return {tuple(v.tolist()) for v in F[good]}


def _suite_submodules(_: np.random.Generator):
    for r in (2, 3):
        space = SymplecticSpace(g=2, r=r)
        brute_all = _brute_vanishing_vectors(space, require_bicyclic=False)
        brute_prim = _brute_vanishing_vectors(space, require_bicyclic=True)
        if set(compute_G(space, MODE_ALL_PAIRS).vectors()) != brute_all:
            return False, f"all-pairs mismatch at r={r}"
        if set(compute_G(space, MODE_PRIMITIVE_PAIRS).vectors()) != brute_prim:
            return False, f"primitive-pairs mismatch at r={r}"
        if set(bogomolov_intersection(space).vectors()) != brute_prim:
            return False, f"streamed intersection mismatch at r={r}"
        span = subgroup_from_generators(space.group, [space.a(1), space.a(2)])
        sub = restriction_kernel(space, span)
        if sub.order != r ** (space.form_rank - 1):
            return False, f"restriction kernel order at r={r}"
    return True, "r=2,3 at g=2"


def cmd_selftest(seed: int, inject_fault: str | None) -> int:
    rng = np.random.default_rng(seed)
    suites = [
        ("smith-normal-form", lambda: _suite_smith(rng)),
        ("howell-span-oracle", lambda: _suite_howell(rng)),
        ("solve-mod-exhaustive", lambda: _suite_solve(rng)),
        ("form-bilinearity", lambda: _suite_bilinearity(rng)),
        ("weil-nondegeneracy", lambda: _suite_nondegeneracy(rng, inject_fault)),
        ("brute-force-submodules", lambda: _suite_submodules(rng)),
    ]
    failed = []
    for name, run in suites:
        ok, detail = run()
        print(f"suite {name}: {'PASS' if ok else 'FAIL'} ({detail})")
        if not ok:
            failed.append(name)
    if failed:
        print(f"selftest: FAIL ({', '.join(failed)})")
        return EXIT_VIOLATION
    print("selftest: PASS")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def _default_cap() -> int:
    raw = os.environ.get(CAP_ENV_VAR)
    if raw is None:
        return DEFAULT_ENUMERATION_CAP
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"bad {CAP_ENV_VAR}={raw!r}, want an integer") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="brauerkit",
        description="Exact verification of vanishing submodules of alternating "
        "forms on (Z/r)^(2g) and the attached covering-side counts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    table = sub.add_parser("table", help="inclusion checks over a (g, r, d) grid")
    table.add_argument("--g", type=parse_range, default=parse_range("2..3"))
    table.add_argument("--r", type=parse_range, default=parse_range("2..5"))
    table.add_argument("--d", type=parse_range, default=parse_range("0..2"))
    table.add_argument(
        "--mode",
        choices=[MODE_ALL_PAIRS, MODE_PRIMITIVE_PAIRS, "both"],
        default="both",
    )
    table.add_argument("--cap", type=int, default=None)
    table.add_argument("--seed", type=int, default=0)
    table.add_argument("--format", choices=["json", "csv"], default="json")
    table.add_argument("--out", default=None)
    table.add_argument("--jobs", type=int, default=1)
    table.add_argument(
        "--timings",
        action="store_true",
        help="fill timing_ms (off by default so identical configs give "
        "byte-identical reports)",
    )

    vg = sub.add_parser("verify-g", help="isotropic-vanishing submodule checks")
    vg.add_argument("--g", type=parse_range, default=parse_range("2"))
    vg.add_argument("--r", type=parse_range, default=parse_range("2..5"))
    vg.add_argument(
        "--mode",
        choices=[MODE_ALL_PAIRS, MODE_PRIMITIVE_PAIRS, "both"],
        default="both",
    )
    vg.add_argument("--cap", type=int, default=None)

    bg = sub.add_parser("bogomolov", help="intersected restriction kernels")
    bg.add_argument("--g", type=parse_range, default=parse_range("2"))
    bg.add_argument("--r", type=parse_range, default=parse_range("2..3"))
    bg.add_argument("--family", choices=["isotropic", "all"], default="isotropic")
    bg.add_argument(
        "--explicit",
        action="store_true",
        help="materialize the family instead of streaming it",
    )
    bg.add_argument("--cap", type=int, default=None)

    comp = sub.add_parser("components", help="covering-side component counts")
    comp.add_argument("--r", type=parse_range, default=parse_range("2..12"))
    comp.add_argument("--d", type=parse_range, default=parse_range("0..11"))

    st = sub.add_parser("selftest", help="deterministic property suites")
    st.add_argument("--seed", type=int, default=0)
    st.add_argument(
        "--inject-fault",
        choices=["weil-a1b1"],
        default=None,
        help="debug: corrupt one pairing coefficient to prove the "
        "nondegeneracy suite can fail",
    )

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cap = getattr(args, "cap", None)
    if cap is None:
        try:
            cap = _default_cap()
        except ValueError as exc:
            print(f"brauerkit: {exc}", file=sys.stderr)
            return EXIT_CONFIG
    if cap < 1:
        print(f"brauerkit: cap must be positive, got {cap}", file=sys.stderr)
        return EXIT_CONFIG

    if args.command == "table":
        if args.jobs < 1:
            print(f"brauerkit: jobs must be positive, got {args.jobs}", file=sys.stderr)
            return EXIT_CONFIG
        cfg = RunConfig(
            g_values=args.g,
            r_values=args.r,
            d_values=args.d,
            mode=args.mode,
            cap=cap,
            seed=args.seed,
            fmt=args.format,
            out=args.out,
            jobs=args.jobs,
            timings=args.timings,
        )
        return cmd_table(cfg)
    if args.command == "verify-g":
        return cmd_verify_g(args.g, args.r, args.mode, cap)
    if args.command == "bogomolov":
        return cmd_bogomolov(args.g, args.r, args.family, args.explicit, cap)
    if args.command == "components":
        return cmd_components(args.r, args.d)
    if args.command == "selftest":
        return cmd_selftest(args.seed, args.inject_fault)
    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
