"""Acceptance criteria, one PASS/FAIL line each, at the pinned tolerances.

Run with ``pytest tests/test_acceptance.py -v``; the lines are repeated in
the terminal summary.  ``python3 tests/test_acceptance.py`` runs the same
checks without pytest.
"""

import random
import time

import pytest

from qlag import (
    PolySpec,
    Verdict,
    a_n,
    bounds,
    c_n,
    check_common_zero,
    eval_hypergeometric,
    eval_recurrence,
    evaluate_relation,
    find_common_zero_delta,
    make_params,
    moments,
    relation_holds,
    run_check,
    to_decimal_string,
    zeros,
)
from qlag.checks import CHECK_MIN_DEGREE, CHECKS, PATTERNS, perturb_zero
from qlag.qlaguerre import RELATIONS
from qlag.table import REFERENCE_ROWS, compare, compute_rows
from qlag.zero_engine import companion_oracle

GRID_Q = ("0.23", "0.5", "0.89", "0.94", "0.997")
GRID_DELTA = ("-1.9", "-1.5", "-1.1")
GRID = [(q, d) for q in GRID_Q for d in GRID_DELTA]
MOMENT_GRID = [(q, d) for q in ("0.23", "0.5", "0.89") for d in GRID_DELTA]

RESULTS = []


def report(name, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
    RESULTS.append(line)
    print(line)
    return ok


def test_table_reproduction():
    start = time.perf_counter()
    rows = compare(compute_rows())
    elapsed = time.perf_counter() - start
    worst = max(max(r.rel_diff.values()) for r in rows)
    ok = len(rows) == 12 and all(r.within for r in rows) and elapsed < 10
    assert report("table-1", ok, f"12 rows, worst relative difference {worst:.2e} (limit 1e-4), {elapsed:.2f} s (limit 10 s)")


def test_bound_chain():
    bad = []
    for q, n, d, *_ in REFERENCE_ROWS:
        if not bounds(make_params(q, d), n, strict=False).holds:
            bad.append((q, d, n))
    for q, d in GRID:
        p = make_params(q, d)
        for n in range(2, 21):
            if not bounds(p, n, strict=False).holds:
                bad.append((q, d, n))
    count = len(REFERENCE_ROWS) + len(GRID) * 19
    assert report("bound-chain", not bad, f"-c_(n-1) < B_n < z_1n < A_n < 0 on {count} cases, {len(bad)} violations {bad[:3]}")


def _round_trip(name, kind, q, n, bracket, delta_ref, point_ref, point_fn):
    delta = find_common_zero_delta(kind, q, n, bracket)
    params = make_params(q, to_decimal_string(delta))
    point = point_fn(n, params)
    rep = check_common_zero(kind, params, n)
    d_err = float(abs(delta - params.ctx.mpf(delta_ref)))
    p_err = float(abs(point - params.ctx.mpf(point_ref)))
    parts = [
        f"delta*={to_decimal_string(delta, 12)} (|err| {d_err:.2e}, limit 1e-5)",
        f"point={to_decimal_string(point, 9)} (|err| {p_err:.2e}, limit 5e-6)",
        f"common zero number {rep.common_index}, verdict {rep.verdict.value}",
    ]
    ok = d_err <= 1e-5 and p_err <= 5e-6 and rep.is_common and rep.verdict == Verdict.HOLDS
    return report(name, ok, "; ".join(parts))


def test_common_zero_example_a():
    assert _round_trip("example-a26", "a", "0.997", 26, ("-1.2", "-1.05"), "-1.121695", "0.167473", a_n)


def test_common_zero_example_c():
    assert _round_trip("example-c26", "c", "0.94", 26, ("-1.99", "-1.85"), "-1.92598", "0.278236", c_n)


def test_identity_suite():
    rng = random.Random(20240601)
    checked, failed = 0, []
    for q, d in GRID:
        p = make_params(q, d)
        zs = [p.ctx.mpf(rng.uniform(-1, 5)) for _ in range(50)]
        for rid, rel in RELATIONS.items():
            for n in range(rel.min_degree, 13):
                for z in zs:
                    checked += 1
                    if not relation_holds(evaluate_relation(rid, z, n, p), p):
                        failed.append((rid, q, d, n, float(z)))
    assert report("identity-suite", not failed, f"{len(RELATIONS)} relations, {checked} residuals at 2^(-P+24) max(|LHS|,|RHS|,1), {len(failed)} failures {failed[:3]}")


def test_interlacing_suite():
    expected = {cid: Verdict.NOT_APPLICABLE if cid.startswith("common-zero") else Verdict.HOLDS for cid in CHECKS}
    runs, silent = 0, []
    for q, d in GRID:
        p = make_params(q, d)
        for cid in CHECKS:
            for n in range(CHECK_MIN_DEGREE[cid], 21):
                r = run_check(cid, p, n)
                runs += 1
                notes = [x for x in getattr(r, "notes", []) if "disagree" in x or "form gives" in x]
                if r.verdict != expected[cid] or notes:
                    silent.append((cid, q, d, n, r.verdict.value))
    rng = random.Random(7)
    lists = {
        "shift1-same-degree": ["z[n]", "y[n]"], "shift1-lower-degree": ["z[n+1]", "y[n]"],
        "shift-ladder": ["y[n]", "x[n]"], "consecutive-degree": ["z[n]", "z[n+1]"],
        "shift2-lower-degree": ["z[n]", "x[n-1]"], "shift2-two-lower": ["z[n]", "x[n-2]"],
        "stieltjes-failure": ["z[n]", "w[n-2]"], "bn-augmented": ["z[n]", "y[n-2]"],
        "shift2-same-degree": ["z[n]", "x[n]"],
    }
    controls, missed = 0, []
    for q, d in GRID:
        p = make_params(q, d)
        for cid, labels in lists.items():
            n = rng.randint(5, 20)
            label = rng.choice(labels)
            size = {"n": n, "n+1": n + 1, "n-1": n - 1, "n-2": n - 2}[label[2:-1]]
            index = rng.randint(1, size)
            controls += 1
            if run_check(cid, p, n, tamper=perturb_zero(label, index)).verdict != Verdict.FAILS:
                missed.append((cid, q, d, n, label, index))
    ok = not silent and not missed
    assert report(
        "interlacing-suite", ok,
        f"{len(CHECKS)} checks, {runs} runs, {len(silent)} unexpected {silent[:3]}; "
        f"{controls} perturbed controls, {len(missed)} not flipped {missed[:3]}",
    )


def test_dual_path_and_oracle():
    rng = random.Random(99)
    worst, evaluations, bad = 0.0, 0, []
    for q, d in GRID:
        p = make_params(q, d)
        tol = p.ctx.ldexp(1, -p.precision + 16)
        zs = [p.ctx.mpf(rng.uniform(-1, 5)) for _ in range(20)]
        for t in range(5):
            for n in range(31):
                spec = PolySpec(p, t, n)
                for z in zs:
                    r, h = eval_recurrence(spec, z), eval_hypergeometric(spec, z)
                    rel = abs(r - h) / max(1, abs(r))
                    evaluations += 1
                    worst = max(worst, float(rel / tol))
                    if rel > tol:
                        bad.append((q, d, t, n))
    oracle_worst, oracle_bad = 0.0, []
    for q, d in GRID:
        p = make_params(q, d)
        for t in (0, 1, 2):
            for n in range(1, 11):
                spec = PolySpec(p, t, n)
                got, ref = zeros(spec), companion_oracle(spec)
                diff = max(float(abs(a - b)) for a, b in zip(got, ref)) if len(got) == len(ref) else float("inf")
                oracle_worst = max(oracle_worst, diff)
                if diff > 1e-20:
                    oracle_bad.append((q, d, t, n))
    ok = not bad and not oracle_bad
    assert report(
        "dual-path-and-oracle", ok,
        f"{evaluations} evaluations, worst |rec-hyp| {worst:.2e} x 2^(-P+16); "
        f"zeros vs oracle worst {oracle_worst:.1e} (limit 1e-20), {len(bad) + len(oracle_bad)} failures",
    )


def test_moments():
    bad, worst_ratio, count = [], 0.0, 0
    for q, d in MOMENT_GRID:
        p = make_params(q, d)
        for n in range(2, 9):
            for r in moments(PolySpec(p, 0, n), list(range(n))):
                count += 1
                want = "vanishes" if r.order <= n - 2 else "nonzero"
                ratio = float(r.truncation_bound / (r.tolerance * r.abs_sum))
                worst_ratio = max(worst_ratio, ratio)
                if r.verdict != want or ratio >= 1:
                    bad.append((q, d, n, r.order, r.verdict))
    assert report(
        "moments", not bad,
        f"{count} moments on q in (0.23, 0.5, 0.89) x 3 deltas, n = 2..8; "
        f"worst truncation bound / tolerance {worst_ratio:.1e}; {len(bad)} wrong {bad[:3]}",
    )


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            try:
                fn()
            except AssertionError:
                pass
