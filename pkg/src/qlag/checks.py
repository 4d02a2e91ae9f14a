"""Executable checks of zero orderings, common zeros, moments and bounds.

Every ordering claim is reduced to a *chain*: a list of labelled points
that must be strictly increasing.  Two adjacent points closer than
2^{-P/2} (1 + |value|) count as a tie, which yields a ``degenerate``
verdict instead of holds/fails because all the claims are strict.

Zero lists come from :func:`qlag.zeros.zeros`.  Each checker accepts an
optional ``tamper`` hook, ``tamper(label, zeros) -> zeros``, applied to
every zero list before the ordering test; negative controls use it to
inject perturbations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

from .errors import ChainViolationError, DomainError, NoSignChangeError, RegimeError, TruncationError
from .precision import pow_real, qpoch, to_decimal_string
from .qlaguerre import (
    B_n,
    FamilyParams,
    PolySpec,
    a_n,
    b_n,
    c_n,
    coefficients,
    constant_A,
    eval_recurrence,
    eval_with_derivative,
    make_params,
)
from .zero_engine import zeros

Tamper = Callable[[str, tuple], Sequence]


class Verdict(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    NOT_APPLICABLE = "not-applicable"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class Point:
    label: str
    value: object


@dataclass(frozen=True)
class Violation:
    index: int
    relation: str
    left: Point
    right: Point

    def to_dict(self, digits=None):
        return {
            "index": self.index,
            "relation": self.relation,
            "left": [self.left.label, to_decimal_string(self.left.value, digits)],
            "right": [self.right.label, to_decimal_string(self.right.value, digits)],
        }


@dataclass
class ChainResult:
    chain: list
    violations: list = field(default_factory=list)
    ties: list = field(default_factory=list)

    @property
    def verdict(self) -> Verdict:
        if self.violations:
            return Verdict.FAILS
        if self.ties:
            return Verdict.DEGENERATE
        return Verdict.HOLDS


def tie_tolerance(ctx):
    return ctx.ldexp(1, -(ctx.prec // 2))


def check_chain(chain: Sequence[Point]) -> ChainResult:
    """Test that the chain values are strictly increasing."""
    result = ChainResult(list(chain))
    for i in range(len(chain) - 1):
        u, v = chain[i], chain[i + 1]
        ctx = u.value.context if hasattr(u.value, "context") else v.value.context
        tol = tie_tolerance(ctx) * (1 + max(abs(u.value), abs(v.value)))
        if abs(v.value - u.value) <= tol:
            result.ties.append(Violation(i, "<", u, v))
        elif v.value < u.value:
            result.violations.append(Violation(i, "<", u, v))
    return result


def alternate(first: Sequence[Point], second: Sequence[Point]) -> list:
    """first[0], second[0], first[1], ... ; ``first`` may be one longer."""
    out = []
    for i, p in enumerate(first):
        out.append(p)
        if i < len(second):
            out.append(second[i])
    return out


def interlace(u: Sequence[Point], v: Sequence[Point]) -> ChainResult:
    """Strict interlacing of two point sets.

    Sets are taken in the order given (index order for zero lists), so a
    zero that has left its slot shows up as a violation rather than being
    silently re-sorted.  Sizes must differ by at most one; the larger set
    supplies both extreme points.  For equal sizes the set whose first
    point is smaller goes first.
    """
    u, v = list(u), list(v)
    if len(v) > len(u):
        u, v = v, u
    if len(u) - len(v) > 1:
        res = ChainResult(u + v)
        res.violations.append(
            Violation(-1, f"size {len(u)} vs {len(v)} cannot interlace", u[0], v[0] if v else u[-1])
        )
        return res
    if len(u) == len(v) and v and v[0].value < u[0].value:
        u, v = v, u
    return check_chain(alternate(u, v))


def with_points(zeros: Sequence[Point], extra: Sequence[Point]) -> list:
    """Insert computed points into an index-ordered zero list by value."""
    out = list(zeros)
    for done, p in enumerate(sorted(extra, key=lambda p: p.value)):
        out.insert(done + sum(1 for z in zeros if z.value < p.value), p)
    return out


def realized_order(points: Sequence[Point]) -> list:
    """Labels of all points sorted by value."""
    return [p.label for p in sorted(points, key=lambda p: p.value)]


@dataclass
class InterlacingReport:
    theorem_id: str
    params: FamilyParams
    n: int
    m: int | None
    t: int | None
    verdict: Verdict
    pattern: list
    expected: list
    violations: list = field(default_factory=list)
    ties: list = field(default_factory=list)
    branch: str | None = None
    notes: list = field(default_factory=list)

    def to_dict(self, digits=None) -> dict:
        p = self.params
        return {
            "kind": "interlacing",
            "theorem_id": self.theorem_id,
            "params": {
                "q": to_decimal_string(p.q, digits),
                "delta": to_decimal_string(p.delta, digits),
                "n": self.n,
                "m": self.m,
                "t": self.t,
                "precision_bits": p.precision,
            },
            "verdict": self.verdict.value,
            "branch": self.branch,
            "pattern": self.pattern,
            "expected": self.expected,
            "violations": [v.to_dict(digits) for v in self.violations],
            "ties": [v.to_dict(digits) for v in self.ties],
            "notes": self.notes,
        }


def perturb_zero(label: str, index: int, factor=10) -> Tamper:
    """Tamper hook moving zero ``index`` (1-based) of list ``label`` by ``factor`` gaps.

    The zero moves up by ``factor`` times its gap to the next zero, or
    down by ``factor`` times the gap to the previous one when it is the
    largest.  ``label`` names a list as in report patterns, e.g. "z[n]".
    """

    def tamper(name, zl):
        if name != label:
            return zl
        zl = list(zl)
        if len(zl) < 2 or not 1 <= index <= len(zl):
            raise DomainError(f"cannot perturb zero {index} of {label} with {len(zl)} zeros")
        i = index - 1
        if i + 1 < len(zl):
            zl[i] += factor * (zl[i + 1] - zl[i])
        else:
            zl[i] -= factor * (zl[i] - zl[i - 1])
        return zl

    return tamper


class _Zeros:
    """Labelled zero lists for one family, with the tamper hook applied."""

    def __init__(self, params: FamilyParams, tamper: Tamper | None):
        self.params = params
        self.tamper = tamper

    def get(self, n: int, t: int, letter: str, suffix: str | None = None) -> list:
        suffix = suffix or "n"
        label = f"{letter}[{suffix}]"
        zl = zeros(PolySpec(self.params, t, n)).zeros
        if self.tamper is not None:
            zl = tuple(self.tamper(label, zl))
        return [Point(f"{letter}{i + 1},{suffix}", z) for i, z in enumerate(zl)]


def _zero_point(params):
    return Point("0", params.ctx.zero)


def _positive_part(points, params, res: ChainResult | None = None) -> list:
    """Drop the leading negative zero and check the rest lie above 0.

    Selecting by position rather than by sign keeps a zero that has moved
    across the origin visible to the check.  Sign violations are appended
    to ``res`` when given.
    """
    rest = list(points[1:])
    if res is not None and rest:
        sign = check_chain([points[0], _zero_point(params), min(rest, key=lambda p: p.value)])
        res.violations.extend(sign.violations)
        res.ties.extend(sign.ties)
    return rest


def _merge(res: ChainResult, extra: ChainResult) -> ChainResult:
    res.violations.extend(extra.violations)
    res.ties.extend(extra.ties)
    return res


def _report(theorem_id, params, n, m, t, res: ChainResult, all_points, **kw) -> InterlacingReport:
    return InterlacingReport(
        theorem_id=theorem_id,
        params=params,
        n=n,
        m=m,
        t=t,
        verdict=res.verdict,
        pattern=realized_order(all_points),
        expected=[p.label for p in res.chain],
        violations=res.violations,
        ties=res.ties,
        **kw,
    )


def _require(params: FamilyParams, n: int, lowest: int, check_id: str):
    if not params.quasi_regime:
        raise RegimeError(f"{check_id} requires -2 < delta < -1")
    if n < lowest:
        raise DomainError(f"{check_id} requires n >= {lowest}, got {n}")


# Ordering patterns with a fixed stated chain.


def _pattern_shift1_same_degree(zs: _Zeros, n):
    """z1 < 0 < y1 < z2 < y2 < ... < zn < yn."""
    z = zs.get(n, 0, "z")
    y = zs.get(n, 1, "y")
    chain = [z[0], _zero_point(zs.params)] + alternate(y, z[1:])
    return chain, z + y, n, 1


def _pattern_shift1_lower_degree(zs: _Zeros, n):
    """z1,n+1 < 0 < y1,n < z2,n+1 < ... < yn,n < zn+1,n+1."""
    z = zs.get(n + 1, 0, "z", "n+1")
    y = zs.get(n, 1, "y")
    chain = [z[0], _zero_point(zs.params)] + alternate(y, z[1:])
    return chain, z + y, n, 1


def _pattern_shift_ladder(zs: _Zeros, n):
    """0 < y1 < x1 < y2 < ... < yn < xn."""
    y = zs.get(n, 1, "y")
    x = zs.get(n, 2, "x")
    chain = [_zero_point(zs.params)] + alternate(y, x)
    return chain, y + x, n, 2


def _pattern_consecutive_degree(zs: _Zeros, n):
    """z1,n < z1,n+1 < 0 < z2,n+1 < z2,n < ... < zn,n < zn+1,n+1."""
    lo = zs.get(n, 0, "z")
    hi = zs.get(n + 1, 0, "z", "n+1")
    chain = [lo[0], hi[0], _zero_point(zs.params)] + alternate(hi[1:], lo[1:])
    return chain, lo + hi, n + 1, 0


def _pattern_shift2_lower_degree(zs: _Zeros, n):
    """z1 < 0 < z2 < x1,n-1 < z3 < ... < zn < x(n-1),n-1."""
    z = zs.get(n, 0, "z")
    x = zs.get(n - 1, 2, "x", "n-1")
    chain = [z[0], _zero_point(zs.params)] + alternate(z[1:], x)
    return chain, z + x, n - 1, 2


def _pattern_shift2_two_lower(zs: _Zeros, n):
    """-c_{n-1} < z1 < 0 < z2 < x1,n-2 < z3 < ... < x(n-2),n-2 < zn."""
    params = zs.params
    z = zs.get(n, 0, "z")
    x = zs.get(n - 2, 2, "x", "n-2")
    neg_c = Point("-c[n-1]", -c_n(n - 1, params))
    chain = [neg_c, z[0], _zero_point(params)] + alternate(z[1:], x)
    return chain, z + x + [neg_c], n - 2, 2


PATTERNS = {
    "shift1-same-degree": (1, _pattern_shift1_same_degree),
    "shift1-lower-degree": (1, _pattern_shift1_lower_degree),
    "shift-ladder": (1, _pattern_shift_ladder),
    "consecutive-degree": (1, _pattern_consecutive_degree),
    "shift2-lower-degree": (2, _pattern_shift2_lower_degree),
    "shift2-two-lower": (3, _pattern_shift2_two_lower),
}


def check_interlace(pattern_id: str, params: FamilyParams, n: int, tamper: Tamper | None = None) -> InterlacingReport:
    """Verify one stated zero ordering at (params, n)."""
    try:
        lowest, builder = PATTERNS[pattern_id]
    except KeyError:
        raise DomainError(f"unknown pattern {pattern_id!r}; expected one of {sorted(PATTERNS)}") from None
    _require(params, n, lowest, pattern_id)
    zs = _Zeros(params, tamper)
    chain, points, m, t = builder(zs, n)
    res = check_chain(chain)
    report = _report(pattern_id, params, n, m, t, res, points + [_zero_point(params)])
    if pattern_id == "shift2-two-lower":
        # The weaker statement: zeros of z (z + c_{n-1}) L_{n-2}^{(d+2)} interlace with L_n.
        z = [p for p in points if p.label.startswith("z")]
        x = [p for p in points if p.label.startswith("x")]
        aug = with_points(x, [p for p in points if p.label.startswith("-c")] + [_zero_point(params)])
        weak = interlace(aug, z)
        if weak.verdict != res.verdict:
            report.notes.append(
                f"augmented-interlacing form gives {weak.verdict.value}, explicit chain gives {res.verdict.value}"
            )
    return report


# Common-zero detection.


def common_tolerance(ctx):
    """Default 2^{-P/3}: relative Newton distance below which a point is a zero."""
    return ctx.ldexp(1, -(ctx.prec // 3))


def newton_distance(spec: PolySpec, point):
    """|p(point) / p'(point)|, a first-order distance to the nearest zero."""
    p, dp = eval_with_derivative(spec, point)
    if dp == 0:
        return abs(p) * math.inf if p != 0 else abs(p)
    return abs(p / dp)


def is_zero_of(spec: PolySpec, point, tol=None) -> bool:
    ctx = spec.ctx
    tol = common_tolerance(ctx) if tol is None else tol
    return newton_distance(spec, point) <= tol * (1 + abs(point))


def check_stieltjes_failure(params: FamilyParams, n: int, tamper: Tamper | None = None, common_tol=None) -> InterlacingReport:
    """Degree gap two: the smallest zero of L_{n-2} escapes (z1,n, zn,n).

    Also tests that zeros of z (z - a_n) L_{n-2} interlace with those of
    L_n.  Not applicable when a_n is a common zero of L_n and L_{n-2}.
    """
    check_id = "stieltjes-failure"
    _require(params, n, 3, check_id)
    point = a_n(n, params)
    if is_zero_of(PolySpec(params, 0, n), point, common_tol):
        return InterlacingReport(
            check_id, params, n, n - 2, 0, Verdict.NOT_APPLICABLE, [], [],
            notes=[f"a_n = {to_decimal_string(point, 12)} is a common zero of L_n and L_(n-2); use the common-zero check"],
        )
    zs = _Zeros(params, tamper)
    z = zs.get(n, 0, "z")
    w = zs.get(n - 2, 0, "w", "n-2")
    witness = check_chain([w[0], z[0]])
    aug = with_points(w, [_zero_point(params), Point("a[n]", point)])
    inter = interlace(aug, z)
    verdict = _combine(witness.verdict, inter.verdict)
    notes = []
    if witness.verdict == Verdict.HOLDS:
        notes.append("smallest zero of L_(n-2) lies below z1,n: Stieltjes interlacing fails")
    return InterlacingReport(
        check_id, params, n, n - 2, 0, verdict,
        realized_order(z + aug), [p.label for p in witness.chain] + ["|"] + [p.label for p in inter.chain],
        witness.violations + inter.violations, witness.ties + inter.ties, notes=notes,
    )


def check_bn_pattern(params: FamilyParams, n: int, tamper: Tamper | None = None, common_tol=None) -> InterlacingReport:
    """Zeros of (z - b_n) L_{n-2}^{(d+1)} interlace with the positive zeros of L_n."""
    check_id = "bn-augmented"
    _require(params, n, 3, check_id)
    point = b_n(n, params)
    notes = [] if point > 0 else ["b_n is not positive"]
    if is_zero_of(PolySpec(params, 0, n), point, common_tol):
        return InterlacingReport(
            check_id, params, n, n - 2, 1, Verdict.NOT_APPLICABLE, [], [],
            notes=notes + ["b_n is a common zero of L_n and L_(n-2)^(d+1)"],
        )
    zs = _Zeros(params, tamper)
    z_all = zs.get(n, 0, "z")
    z = _positive_part(z_all, params)
    y = zs.get(n - 2, 1, "y", "n-2")
    aug = with_points(y, [Point("b[n]", point)])
    res = interlace(aug, z)
    _positive_part(z_all, params, res)
    report = _report(check_id, params, n, n - 2, 1, res, z_all + aug, notes=notes)
    if not point > 0:
        report.verdict = Verdict.FAILS
    return report


def check_same_degree_shift2(params: FamilyParams, n: int, tamper: Tamper | None = None, common_tol=None) -> InterlacingReport:
    """Same-degree L_n and L_n^{(d+2)}: interlacing happens iff z2,n > c_n.

    Branch A (z2,n > c_n) must interlace.  Branch B must not; there the
    c_n-augmented pattern applies when c_n falls between two x-zeros, and
    the chain z1 < 0 < x1 < z2 < ... < zn < xn < c_n otherwise.
    """
    check_id = "shift2-same-degree"
    _require(params, n, 2, check_id)
    cn = c_n(n, params)
    if is_zero_of(PolySpec(params, 0, n), cn, common_tol):
        return InterlacingReport(
            check_id, params, n, n, 2, Verdict.NOT_APPLICABLE, [], [], branch="common",
            notes=[f"c_n = {to_decimal_string(cn, 12)} is a common zero of L_n and L_n^(d+2); use the common-zero check"],
        )
    zs = _Zeros(params, tamper)
    z = zs.get(n, 0, "z")
    x = zs.get(n, 2, "x")
    c_pt = Point("c[n]", cn)
    branch_test = check_chain([c_pt, z[1]])
    if branch_test.ties:
        return InterlacingReport(
            check_id, params, n, n, 2, Verdict.DEGENERATE, realized_order(z + x + [c_pt]), [],
            ties=branch_test.ties, branch="z2=c_n", notes=["z2,n coincides with c_n"],
        )
    plain = interlace(z, x)
    everything = z + x + [c_pt, _zero_point(params)]
    if branch_test.verdict == Verdict.HOLDS:
        return _report(check_id, params, n, n, 2, plain, everything, branch="A: z2 > c_n")
    notes = []
    if plain.verdict == Verdict.HOLDS:
        notes.append("z2,n < c_n yet the zeros interlace")
    inside = any(x[i].value < cn < x[i + 1].value for i in range(len(x) - 1))
    if inside:
        sub = interlace(with_points(z, [c_pt]), with_points(x, [_zero_point(params)]))
        branch = "B: z2 < c_n, c_n between x-zeros"
    else:
        sub = check_chain([z[0], _zero_point(params)] + [p for pair in zip(x, z[1:]) for p in pair] + [x[-1], c_pt])
        branch = "B: z2 < c_n, c_n outside the x-gaps"
    verdict = sub.verdict
    if plain.verdict == Verdict.HOLDS:
        verdict = Verdict.FAILS
    return InterlacingReport(
        check_id, params, n, n, 2, verdict, realized_order(everything), [p.label for p in sub.chain],
        sub.violations, sub.ties + plain.ties, branch=branch, notes=notes,
    )


def _combine(*verdicts: Verdict) -> Verdict:
    if Verdict.FAILS in verdicts:
        return Verdict.FAILS
    if Verdict.DEGENERATE in verdicts:
        return Verdict.DEGENERATE
    if Verdict.NOT_APPLICABLE in verdicts:
        return Verdict.NOT_APPLICABLE
    return Verdict.HOLDS


@dataclass
class CommonZeroReport:
    theorem_id: str
    kind: str
    params: FamilyParams
    n: int
    point: object
    residual: object
    distance: object
    is_common: bool
    common_index: int | None = None
    expected_index_range: tuple | None = None
    non_common: dict = field(default_factory=dict)
    interlace_verdict: Verdict = Verdict.NOT_APPLICABLE
    violations: list = field(default_factory=list)
    ties: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def verdict(self) -> Verdict:
        return self.interlace_verdict

    def to_dict(self, digits=None) -> dict:
        p = self.params
        fmt = lambda v: to_decimal_string(v, digits)  # noqa: E731
        return {
            "kind": "common-zero",
            "theorem_id": self.theorem_id,
            "common_kind": self.kind,
            "params": {
                "q": fmt(p.q),
                "delta": fmt(p.delta),
                "n": self.n,
                "precision_bits": p.precision,
            },
            "point": fmt(self.point),
            "residual": fmt(self.residual),
            "distance": fmt(self.distance),
            "is_common": self.is_common,
            "common_index": self.common_index,
            "expected_index_range": list(self.expected_index_range) if self.expected_index_range else None,
            "non_common": {k: [fmt(v) for v in vals] for k, vals in self.non_common.items()},
            "verdict": self.interlace_verdict.value,
            "violations": [v.to_dict(digits) for v in self.violations],
            "ties": [v.to_dict(digits) for v in self.ties],
            "notes": self.notes,
        }


COMMON_KINDS = {
    # kind: (lowest n, point, other polynomial (degree offset, shift), allowed index range)
    "a": (3, a_n, (-2, 0), lambda n: (3, n - 1)),
    "c": (2, c_n, (0, 2), lambda n: (2, n - 1)),
}


def _remove_nearest(points: list, value) -> tuple:
    idx = min(range(len(points)), key=lambda i: abs(points[i].value - value))
    return idx, points[:idx] + points[idx + 1:]


def check_common_zero(kind: str, params: FamilyParams, n: int, tamper: Tamper | None = None, common_tol=None) -> CommonZeroReport:
    """Decide whether a_n (kind "a") or c_n (kind "c") is a common zero.

    Kind "a" pairs L_n with L_{n-2}; kind "c" pairs L_n with L_n^{(d+2)}.
    When the point is common it is removed from the appropriate list and
    the remaining zeros are tested for the stated interlacing.
    """
    try:
        lowest, point_fn, (offset, shift), index_range = COMMON_KINDS[kind]
    except KeyError:
        raise DomainError(f"unknown common-zero kind {kind!r}; expected 'a' or 'c'") from None
    check_id = f"common-zero-{kind}"
    _require(params, n, lowest, check_id)
    point = point_fn(n, params)
    main = PolySpec(params, 0, n)
    other = PolySpec(params, shift, n + offset)
    residual = eval_recurrence(main, point)
    distance = newton_distance(main, point)
    common = is_zero_of(main, point, common_tol) and is_zero_of(other, point, common_tol)
    report = CommonZeroReport(check_id, kind, params, n, point, residual, distance, common)
    if not common:
        report.notes.append("point is not a common zero at the common-zero tolerance")
        return report
    zs = _Zeros(params, tamper)
    z = zs.get(n, 0, "z")
    lo, hi = index_range(n)
    report.expected_index_range = (lo, hi)
    if kind == "a":
        w = zs.get(n - 2, 0, "w", "n-2")
        j, z_rest = _remove_nearest(z, point)
        report.common_index = j + 1
        sign = ChainResult([])
        z_nc = _positive_part(z_rest, params, sign) if j > 0 else list(z_rest)
        w_pos = _positive_part(w, params, sign)
        res = _merge(interlace(z_nc, w_pos), sign)
        report.non_common = {"z'": [p.value for p in z_nc], "w": [p.value for p in w_pos]}
    else:
        x = zs.get(n, 2, "x")
        j, x_nc = _remove_nearest(x, point)
        report.common_index = j + 1
        sign = ChainResult([])
        z_pos = _positive_part(z, params, sign)
        res = _merge(interlace(z_pos, x_nc), sign)
        report.non_common = {"z+": [p.value for p in z_pos], "x'": [p.value for p in x_nc]}
        if not z[1].value < point:
            report.notes.append("z2,n < c_n does not hold")
    if not (lo <= report.common_index <= hi):
        report.notes.append(f"common zero is zero number {report.common_index}, outside the expected {lo}..{hi}")
    report.interlace_verdict = res.verdict
    report.violations = res.violations
    report.ties = res.ties
    return report


def common_zero_function(kind: str, q, n: int, precision: int):
    """delta -> L_n^{(delta)}(point(delta)), the scalar whose root is the tuned delta."""
    _, point_fn, _, _ = COMMON_KINDS[kind]
    base = make_params(q, "-1.5", precision)

    def f(delta):
        p = base.with_delta(delta)
        return eval_recurrence(PolySpec(p, 0, n), point_fn(n, p))

    return f, base.ctx


def find_common_zero_delta(kind: str, q, n: int, bracket, precision: int | None = None, samples: int = 64):
    """The delta in ``bracket`` at which the kind's point becomes a common zero.

    Scans ``samples`` subintervals for a sign change of
    delta -> L_n^{(delta)}(point(delta)) and solves to full working
    precision by safeguarded regula falsi (Illinois variant).
    """
    if kind not in COMMON_KINDS:
        raise DomainError(f"unknown common-zero kind {kind!r}; expected 'a' or 'c'")
    precision = make_params(q, "-1.5", precision).precision
    f, ctx = common_zero_function(kind, q, n, precision)
    lo, hi = (ctx.mpf(b) for b in bracket)
    if not (-2 < lo < hi < -1):
        raise DomainError(f"bracket must satisfy -2 < lo < hi < -1, got ({lo}, {hi})")
    grid = [lo + (hi - lo) * k / samples for k in range(samples + 1)]
    vals = [f(d) for d in grid]
    signs = [(x > 0) - (x < 0) for x in vals]
    for k in range(samples):
        if signs[k] == 0:
            return grid[k]
        if signs[k] * signs[k + 1] < 0:
            return _illinois(f, grid[k], grid[k + 1], vals[k], vals[k + 1])
    if signs[-1] == 0:
        return grid[-1]
    raise NoSignChangeError(
        f"L_{n}(point(delta)) keeps one sign on ({lo}, {hi})",
        signs=[(to_decimal_string(d, 10), s) for d, s in zip(grid, signs)],
    )


def _illinois(f, a, b, fa, fb):
    ctx = a.context
    side = 0
    for _ in range(4 * ctx.prec):
        if b - a <= ctx.ldexp(1, -ctx.prec + 8) * (1 + abs(a)):
            break
        c = (a * fb - b * fa) / (fb - fa)
        if not (a < c < b):
            c = (a + b) / 2
        fc = f(c)
        if fc == 0:
            return c
        if (fc > 0) == (fb > 0):
            b, fb = c, fc
            if side == 1:
                fa /= 2
            side = 1
        else:
            a, fa = c, fc
            if side == -1:
                fb /= 2
            side = -1
    return a if abs(fa) < abs(fb) else b


# Jackson-integral moments.


@dataclass
class MomentReport:
    order: int
    value: object
    abs_sum: object
    truncation_bound: object
    tolerance: object
    j_min: int
    j_max: int
    verdict: str

    def to_dict(self, digits=None) -> dict:
        fmt = lambda v: to_decimal_string(v, digits)  # noqa: E731
        return {
            "order": self.order,
            "value": fmt(self.value),
            "abs_sum": fmt(self.abs_sum),
            "truncation_bound": fmt(self.truncation_bound),
            "tolerance": fmt(self.tolerance),
            "j_min": self.j_min,
            "j_max": self.j_max,
            "verdict": self.verdict,
        }


def moment_tolerance(ctx):
    return ctx.ldexp(1, -(ctx.prec // 3))


def moments(spec: PolySpec, orders: Sequence[int] | None = None, truncation=None) -> list:
    """Jackson-integral moments mu_i = int_0^inf z^i L_n(z) z^{d+1} / (-z; q)_inf d_q z.

    The bilateral sum runs over z = q^j.  By default j_max is the first j
    with q^{j(d+2)} < 2^{-P/2}; the sum continues to negative j until the
    super-geometrically decaying terms drop below 2^{-P} of the
    accumulated absolute sum.  Both tails are bounded and reported.
    """
    params = spec.params
    if spec.shift != 0:
        raise DomainError("moments are defined for the shift-0 family")
    if not params.quasi_regime:
        raise RegimeError("moments require -2 < delta < -1")
    n = spec.degree
    orders = list(range(n)) if orders is None else list(orders)
    if any(i < 0 for i in orders):
        raise DomainError("moment orders must be non-negative")
    ctx = spec.ctx
    q, d = params.q, params.delta
    expo = d + 2
    if truncation is None:
        j_max = int(ctx.ceil((ctx.prec // 2) * ctx.ln(2) / (expo * -ctx.ln(q))))
        j_min = None
    else:
        j_min, j_max = truncation
    if j_max < 0:
        raise DomainError("j_max must be >= 0")

    one_minus_q = 1 - q
    sums = {i: ctx.zero for i in orders}
    abs_sums = {i: ctx.zero for i in orders}
    zj = pow_real(q, j_max)
    prod = qpoch(-zj, q)  # (-q^j; q)_inf at j = j_max
    scale = pow_real(q, j_max * expo)  # q^{j (d+2)}
    q_inv, step_scale = 1 / q, pow_real(q, -expo)
    j = j_max
    prev = None
    ratio = ctx.zero
    last = ctx.zero
    floor = ctx.ldexp(1, -ctx.prec)
    limit = -100000 if j_min is None else j_min
    while j >= limit:
        base = one_minus_q * scale * eval_recurrence(spec, zj) / prod
        cur = ctx.zero
        negligible = True
        for i in orders:
            term = base * zj**i
            sums[i] += term
            abs_sums[i] += abs(term)
            cur = max(cur, abs(term))
            negligible = negligible and abs(term) < floor * abs_sums[i]
        if prev:
            ratio = cur / prev
        prev = last = cur
        if j_min is None and j < 0 and ratio < 1 and negligible:
            j_min = j
            break
        j -= 1
        zj *= q_inv
        scale *= step_scale
        prod *= 1 + zj  # (-q^{j-1}; q)_inf = (1 + q^{j-1}) (-q^j; q)_inf
    else:
        if j_min is None:
            raise TruncationError("lower tail did not decay within 100000 terms")
    j_min = j if j_min is None else j_min

    # Upper tail: for z <= q^{j_max+1}, |L_n(z)| <= sum |c_k| z^k and 1/(-z; q)_inf <= 1.
    z_cut = pow_real(q, j_max + 1)
    poly_bound = sum(abs(c) * z_cut**k for k, c in enumerate(coefficients(spec)))
    # Lower tail: the terms decay faster than geometrically once the ratio is below 1.
    lower_tail = last * ratio / (1 - ratio) if ratio < 1 else ctx.inf
    tol = moment_tolerance(ctx)
    reports = []
    for i in orders:
        upper_tail = one_minus_q * poly_bound * pow_real(q, (j_max + 1) * (expo + i)) / (1 - pow_real(q, expo + i))
        bound = upper_tail + lower_tail
        if bound > tol * abs_sums[i] / 256:
            raise TruncationError(
                f"moment {i}: truncation bound {to_decimal_string(bound, 5)} exceeds tolerance for j in [{j_min}, {j_max}]"
            )
        verdict = "vanishes" if abs(sums[i]) <= tol * abs_sums[i] else "nonzero"
        reports.append(MomentReport(i, sums[i], abs_sums[i], bound, tol, j_min, j_max, verdict))
    return reports


def moment(i: int, spec: PolySpec, truncation=None) -> MomentReport:
    """Single Jackson-integral moment; see :func:`moments`."""
    return moments(spec, [i], truncation)[0]


# Bounds for the negative zero.


@dataclass(frozen=True)
class BoundsRecord:
    q: object
    n: int
    delta: object
    neg_c: object
    B: object
    z1n: object
    A: object

    @property
    def chain(self) -> list:
        zero = self.z1n.context.zero
        return [
            Point("-c[n-1]", self.neg_c),
            Point("B[n]", self.B),
            Point("z1,n", self.z1n),
            Point("A[n]", self.A),
            Point("0", zero),
        ]

    @property
    def holds(self) -> bool:
        return check_chain(self.chain).verdict == Verdict.HOLDS

    def to_dict(self, digits=None) -> dict:
        fmt = lambda v: to_decimal_string(v, digits)  # noqa: E731
        return {
            "q": fmt(self.q),
            "n": self.n,
            "delta": fmt(self.delta),
            "neg_c": fmt(self.neg_c),
            "B_n": fmt(self.B),
            "z_1n": fmt(self.z1n),
            "A_n": fmt(self.A),
            "chain_holds": self.holds,
        }


def bounds(params: FamilyParams, n: int, strict: bool = True) -> BoundsRecord:
    """-c_{n-1}, B_n, z1,n and A_n; raises ChainViolationError if the chain is not strictly increasing."""
    _require(params, n, 2, "bounds")
    z1 = zeros(PolySpec(params, 0, n))[0]
    rec = BoundsRecord(params.q, n, params.delta, -c_n(n - 1, params), B_n(n, params), z1, constant_A(n, params))
    if strict:
        res = check_chain(rec.chain)
        if res.verdict != Verdict.HOLDS:
            bad = ", ".join(f"{v.left.label} < {v.right.label}" for v in res.violations + res.ties)
            raise ChainViolationError(f"bound chain broken at q={params.q}, delta={params.delta}, n={n}: {bad}", rec)
    return rec


CHECKS = {
    **{pid: (lambda pid: lambda p, n, **kw: check_interlace(pid, p, n, **_only(kw, "tamper")))(pid) for pid in PATTERNS},
    "stieltjes-failure": check_stieltjes_failure,
    "bn-augmented": check_bn_pattern,
    "shift2-same-degree": check_same_degree_shift2,
    "common-zero-a": lambda p, n, **kw: check_common_zero("a", p, n, **kw),
    "common-zero-c": lambda p, n, **kw: check_common_zero("c", p, n, **kw),
}

CHECK_MIN_DEGREE = {
    **{pid: lowest for pid, (lowest, _) in PATTERNS.items()},
    "stieltjes-failure": 3,
    "bn-augmented": 3,
    "shift2-same-degree": 2,
    "common-zero-a": 3,
    "common-zero-c": 2,
}


def _only(kw: dict, *names) -> dict:
    return {k: v for k, v in kw.items() if k in names}


def run_check(check_id: str, params: FamilyParams, n: int, **kw):
    """Dispatch a check by id; returns an InterlacingReport or CommonZeroReport."""
    try:
        fn = CHECKS[check_id]
    except KeyError:
        raise DomainError(f"unknown check {check_id!r}; expected one of {sorted(CHECKS)}") from None
    return fn(params, n, **kw)
