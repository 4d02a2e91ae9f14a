import random

import pytest
from hypothesis import given, strategies as st

from qlag import (
    ChainViolationError,
    DomainError,
    NoSignChangeError,
    PolySpec,
    RegimeError,
    TruncationError,
    Verdict,
    a_n,
    b_n,
    bounds,
    check_bn_pattern,
    check_common_zero,
    check_interlace,
    check_same_degree_shift2,
    check_stieltjes_failure,
    find_common_zero_delta,
    make_params,
    moment,
    moments,
    run_check,
)
from qlag import checks
from qlag.checks import BoundsRecord, Point, check_chain, interlace, perturb_zero
from qlag.table import REFERENCE_ROWS, compare, compute_rows

from conftest import GRID

P = 256


def pts(prefix, values, ctx):
    return [Point(f"{prefix}{i}", ctx.mpf(v)) for i, v in enumerate(values)]


CTX = make_params("0.5", "-1.5").ctx


# Chain and interlacing predicates.


def test_chain_verdicts():
    assert check_chain(pts("a", [1, 2, 3], CTX)).verdict == Verdict.HOLDS
    res = check_chain(pts("a", [1, 3, 2], CTX))
    assert res.verdict == Verdict.FAILS and res.violations[0].index == 1
    tie = [Point("a", CTX.mpf(1)), Point("b", CTX.mpf(1) + CTX.ldexp(1, -200))]
    assert check_chain(tie).verdict == Verdict.DEGENERATE


def test_interlace_size_rules():
    assert interlace(pts("u", [1, 3], CTX), pts("v", [2], CTX)).verdict == Verdict.HOLDS
    assert interlace(pts("u", [2], CTX), pts("v", [1, 3], CTX)).verdict == Verdict.HOLDS
    assert interlace(pts("u", [1, 3], CTX), pts("v", [2, 4], CTX)).verdict == Verdict.HOLDS
    assert interlace(pts("u", [2, 4], CTX), pts("v", [1, 3], CTX)).verdict == Verdict.HOLDS
    assert interlace(pts("u", [1, 2, 5], CTX), pts("v", [4], CTX)).verdict == Verdict.FAILS
    assert interlace(pts("u", [1, 3, 5, 7], CTX), pts("v", [2, 4], CTX)).verdict == Verdict.FAILS


@given(st.lists(st.integers(-10**6, 10**6), min_size=4, max_size=30, unique=True), st.data())
def test_interlace_property(values, data):
    values.sort()
    u = pts("u", values[0::2], CTX)
    v = pts("v", values[1::2], CTX)
    assert interlace(u, v).verdict == Verdict.HOLDS
    # Swapping an interior neighbour pair puts two points of one list side by side.
    i = data.draw(st.integers(1, len(values) - 3))
    bad = list(values)
    bad[i], bad[i + 1] = bad[i + 1], bad[i]
    u2 = pts("u", bad[0::2], CTX)
    v2 = pts("v", bad[1::2], CTX)
    assert interlace(u2, v2).verdict == Verdict.FAILS


# Zero-ordering checks.


def test_shift1_same_degree_example():
    r = check_interlace("shift1-same-degree", make_params("0.89", "-1.5"), 5)
    assert r.verdict == Verdict.HOLDS
    assert r.pattern == r.expected


def test_consecutive_degree_example():
    r = check_interlace("consecutive-degree", make_params("0.23", "-1.1"), 2)
    assert r.verdict == Verdict.HOLDS
    assert r.pattern[:5] == ["z1,n", "z1,n+1", "0", "z2,n+1", "z2,n"]


def test_consecutive_degree_smallest_case():
    r = check_interlace("consecutive-degree", make_params("0.5", "-1.5"), 1)
    assert r.verdict == Verdict.HOLDS
    assert r.pattern == ["z1,n", "z1,n+1", "0", "z2,n+1"]


@pytest.mark.parametrize("pattern_id", sorted(checks.PATTERNS))
def test_patterns_hold_on_sample(pattern_id):
    lowest = checks.PATTERNS[pattern_id][0]
    for q, d in [("0.23", "-1.9"), ("0.94", "-1.1"), ("0.997", "-1.5")]:
        for n in (lowest, 6, 11):
            r = check_interlace(pattern_id, make_params(q, d), n)
            assert r.verdict == Verdict.HOLDS, (q, d, n, r.violations)
            assert r.notes == []


def test_pattern_preconditions():
    with pytest.raises(DomainError):
        check_interlace("nope", make_params("0.5", "-1.5"), 4)
    with pytest.raises(DomainError):
        check_interlace("shift2-two-lower", make_params("0.5", "-1.5"), 2)
    with pytest.raises(RegimeError):
        check_interlace("shift1-same-degree", make_params("0.5", "-0.5"), 4)


def test_stieltjes_failure_examples():
    r = check_stieltjes_failure(make_params("0.89", "-1.5"), 5)
    assert r.verdict == Verdict.HOLDS
    assert r.pattern.index("w1,n-2") < r.pattern.index("z1,n")
    r3 = check_stieltjes_failure(make_params("0.89", "-1.5"), 3)
    assert r3.verdict == Verdict.HOLDS
    assert set(r3.pattern) == {"z1,n", "z2,n", "z3,n", "w1,n-2", "0", "a[n]"}


@pytest.mark.parametrize("q,d,n", [("0.23", "-1.5", 4), ("0.89", "-1.9", 9), ("0.997", "-1.1", 14)])
def test_bn_pattern_instances(q, d, n):
    p = make_params(q, d)
    assert b_n(n, p) > 0
    assert check_bn_pattern(p, n).verdict == Verdict.HOLDS
    bad = check_bn_pattern(p, n, tamper=perturb_zero("y[n-2]", 1))
    assert bad.verdict == Verdict.FAILS


def test_same_degree_shift2_branches():
    a = check_same_degree_shift2(make_params("0.89", "-1.1"), 5)
    assert a.branch.startswith("A") and a.verdict == Verdict.HOLDS
    b = check_same_degree_shift2(make_params("0.89", "-1.9"), 5)
    assert b.branch.startswith("B") and b.verdict == Verdict.HOLDS
    assert "c[n]" in b.pattern


# Common zeros and the delta search.

EXAMPLES = {
    "a": ("0.997", 26, ("-1.2", "-1.05"), "0.167473"),
    "c": ("0.94", 26, ("-1.99", "-1.85"), "0.278236"),
}


@pytest.fixture(scope="module")
def tuned():
    out = {}
    for kind, (q, n, bracket, _) in EXAMPLES.items():
        delta = find_common_zero_delta(kind, q, n, bracket)
        out[kind] = make_params(q, checks.to_decimal_string(delta))
    return out


@pytest.mark.parametrize("kind", ["a", "c"])
def test_common_zero_round_trip(tuned, kind):
    q, n, _, point = EXAMPLES[kind]
    r = check_common_zero(kind, tuned[kind], n)
    assert r.is_common
    assert abs(r.point - r.point.context.mpf(point)) <= 5e-6
    assert r.verdict == Verdict.HOLDS
    lo, hi = r.expected_index_range
    assert lo <= r.common_index <= hi and r.notes == []


def test_common_zero_routes_other_checks(tuned):
    assert check_stieltjes_failure(tuned["a"], 26).verdict == Verdict.NOT_APPLICABLE
    r = check_same_degree_shift2(tuned["c"], 26)
    assert r.verdict == Verdict.NOT_APPLICABLE and r.branch == "common"


def test_tuned_delta_second_example(tuned):
    assert abs(tuned["c"].delta - tuned["c"].ctx.mpf("-1.92598")) <= 1e-5


def test_printed_parameters_need_a_looser_tolerance():
    p = make_params("0.997", "-1.121695")
    assert not check_common_zero("a", p, 26).is_common
    loose = check_common_zero("a", p, 26, common_tol=p.ctx.mpf("1e-6"))
    assert loose.is_common and loose.verdict == Verdict.HOLDS


@pytest.mark.parametrize("q,d", GRID[::4])
def test_generic_points_are_not_common(q, d):
    p = make_params(q, d)
    assert not check_common_zero("a", p, 7).is_common
    assert not check_common_zero("c", p, 7).is_common


def test_delta_search_errors():
    with pytest.raises(NoSignChangeError) as info:
        find_common_zero_delta("a", "0.997", 26, ("-1.2", "-1.15"), samples=8)
    assert len(info.value.signs) == 9 and all(s == 1 for _, s in info.value.signs)
    with pytest.raises(DomainError):
        find_common_zero_delta("a", "0.997", 26, ("-2.5", "-1.15"))
    with pytest.raises(DomainError):
        find_common_zero_delta("b", "0.997", 26, ("-1.2", "-1.05"))


# Moments.


def test_moment_pattern_degree_three():
    spec = PolySpec(make_params("0.5", "-1.5"), 0, 3)
    verdicts = [moment(i, spec).verdict for i in range(4)]
    assert verdicts == ["vanishes", "vanishes", "nonzero", "nonzero"]


@pytest.mark.parametrize("q,d", [("0.23", "-1.1"), ("0.89", "-1.5")])
def test_moment_reports_are_bounded(q, d):
    for r in moments(PolySpec(make_params(q, d), 0, 5)):
        assert r.truncation_bound <= r.tolerance * r.abs_sum
        assert r.j_min < 0 < r.j_max


def test_moment_errors():
    spec = PolySpec(make_params("0.5", "-1.5"), 0, 3)
    with pytest.raises(TruncationError):
        moment(0, spec, truncation=(-2, 5))
    with pytest.raises(DomainError):
        moment(0, PolySpec(make_params("0.5", "-1.5"), 1, 3))
    with pytest.raises(RegimeError):
        moment(0, PolySpec(make_params("0.5", "-0.5"), 0, 3))


# Bounds.


@pytest.mark.parametrize(
    "q,n,d,want",
    [("0.23", 2, "-1.1", ("-0.11032", "-0.110294", "-0.10681")), ("0.89", 7, "-1.81", ("-0.0114906", "-0.00913766", "-0.0038382"))],
)
def test_bounds_examples(q, n, d, want):
    rec = bounds(make_params(q, d), n)
    assert rec.holds
    for got, ref in zip((rec.B, rec.z1n, rec.A), want):
        assert abs(got / got.context.mpf(ref) - 1) <= 1e-4


def test_reference_rows_reproduce():
    rows = compare(compute_rows())
    assert len(rows) == 12
    assert all(r.within and r.record.holds for r in rows)


def test_broken_chain_is_reported(monkeypatch):
    monkeypatch.setattr(checks, "B_n", lambda n, p: p.ctx.mpf(-1) / 1000000)
    with pytest.raises(ChainViolationError) as info:
        bounds(make_params("0.5", "-1.5"), 4)
    assert info.value.record is not None and not info.value.record.holds
    rec = BoundsRecord(CTX.mpf(1) / 2, 3, CTX.mpf(-1.5), CTX.mpf(-1), CTX.mpf(-2), CTX.mpf(-0.5), CTX.mpf(-0.1))
    assert not rec.holds


# Negative controls: moving one zero by ten gaps must flip every ordering check.

LISTS = {
    "shift1-same-degree": ["z[n]", "y[n]"],
    "shift1-lower-degree": ["z[n+1]", "y[n]"],
    "shift-ladder": ["y[n]", "x[n]"],
    "consecutive-degree": ["z[n]", "z[n+1]"],
    "shift2-lower-degree": ["z[n]", "x[n-1]"],
    "shift2-two-lower": ["z[n]", "x[n-2]"],
    "stieltjes-failure": ["z[n]", "w[n-2]"],
    "bn-augmented": ["z[n]", "y[n-2]"],
    "shift2-same-degree": ["z[n]", "x[n]"],
}


@given(st.sampled_from(GRID), st.sampled_from(sorted(LISTS)), st.integers(5, 12), st.data())
def test_perturbation_flips_verdict(qd, check_id, n, data):
    label = data.draw(st.sampled_from(LISTS[check_id]))
    size = {"n": n, "n+1": n + 1, "n-1": n - 1, "n-2": n - 2}[label[2:-1]]
    index = data.draw(st.integers(1, size))
    p = make_params(*qd)
    assert run_check(check_id, p, n).verdict == Verdict.HOLDS
    r = run_check(check_id, p, n, tamper=perturb_zero(label, index))
    assert r.verdict == Verdict.FAILS, (check_id, label, index)


def test_perturbation_needs_two_zeros():
    with pytest.raises(DomainError):
        run_check("shift1-same-degree", make_params("0.5", "-1.5"), 1, tamper=perturb_zero("y[n]", 1))
