"""Monic q-Laguerre polynomials L_n^{(d)}(z; q).

Two evaluation routes are provided: the three-term recurrence (canonical,
valid for every real d) and the terminating 1phi1 hypergeometric sum
(undefined when d = -1 - j for an integer 0 <= j < n).  The module also
carries the closed-form constants a_n, b_n, c_n, A(x), B_n and residual
evaluators for the mixed contiguous relations between neighbouring degrees
and parameter shifts.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

from .errors import DegenerateParameterError, DomainError
from .precision import check_precision, context, default_precision, pow_real, qpoch, real

MAX_SHIFT = 4
# Extra bits carried inside the evaluators; results are rounded back to P.
GUARD_BITS = 64


@dataclass(frozen=True)
class FamilyParams:
    """Base q, parameter delta and working precision of one family."""

    q: object
    delta: object
    precision: int
    # Decimal source text, when known; used to re-parse at other precisions.
    q_text: str | None = field(default=None, compare=False, repr=False)
    delta_text: str | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not (0 < self.q < 1):
            raise DomainError(f"q must lie in (0, 1), got {self.q}")

    @property
    def ctx(self):
        return context(self.precision)

    @property
    def quasi_regime(self) -> bool:
        return -2 < self.delta < -1

    def with_delta(self, delta) -> "FamilyParams":
        if isinstance(delta, str):
            return FamilyParams(self.q, real(delta, self.precision), self.precision, self.q_text, delta.strip())
        return FamilyParams(self.q, self.ctx.mpf(delta), self.precision, self.q_text)

    def with_precision(self, bits: int) -> "FamilyParams":
        # Re-parse the decimal source so a precision change does not inherit
        # the rounding of the coarser binary value.
        q = real(self.q_text if self.q_text is not None else self.q, bits)
        delta = real(self.delta_text if self.delta_text is not None else self.delta, bits)
        return FamilyParams(q, delta, bits, self.q_text, self.delta_text)

    def poly(self, n: int, shift: int = 0) -> "PolySpec":
        return PolySpec(self, shift, n)


def make_params(q, delta, precision: int | None = None) -> FamilyParams:
    """Build FamilyParams from strings, ints or mpf values.

    Strings are kept around as decimals so that later precision changes
    re-parse the same decimal number.
    """
    bits = check_precision(precision if precision is not None else default_precision())
    return _make_params(_as_key(q), _as_key(delta), bits)


def _as_key(value):
    if isinstance(value, str):
        return value.strip()
    return value


@functools.lru_cache(maxsize=4096)
def _make_params(q, delta, bits):
    return FamilyParams(
        real(q, bits),
        real(delta, bits),
        bits,
        q if isinstance(q, str) else None,
        delta if isinstance(delta, str) else None,
    )


@dataclass(frozen=True)
class PolySpec:
    """The monic polynomial L_n^{(delta + shift)}(z; q)."""

    params: FamilyParams
    shift: int
    degree: int

    def __post_init__(self):
        if not (0 <= self.shift <= MAX_SHIFT):
            raise DomainError(f"shift must be in 0..{MAX_SHIFT}, got {self.shift}")
        if self.degree < 0:
            raise DomainError(f"degree must be >= 0, got {self.degree}")

    @property
    def delta(self):
        """The effective parameter delta + shift."""
        return self.params.delta + self.shift

    @property
    def ctx(self):
        return self.params.ctx


# Closed-form constants.  The raw helpers take (q, d, k) so the recurrence
# can use them at any shifted parameter.


def _a(q, d, k):
    return (1 - pow_real(q, k) + q * (1 - pow_real(q, d + k - 1))) / pow_real(q, d + 2 * k - 1)


def _beta(q, d, k):
    return (1 - pow_real(q, k - 1)) * (1 - pow_real(q, d + k - 1)) / pow_real(q, 2 * d + 4 * k - 5)


def a_n(n: int, params: FamilyParams):
    """Diagonal recurrence coefficient a_n."""
    _need_degree(n, 1)
    return _a(params.q, params.delta, n)


def b_n(n: int, params: FamilyParams):
    """b_n = (1 - q^{d+n}) / q^{d+2n-1}."""
    _need_degree(n, 1)
    q, d = params.q, params.delta
    return (1 - pow_real(q, d + n)) / pow_real(q, d + 2 * n - 1)


def c_n(n: int, params: FamilyParams):
    """c_n = -(1 - q^{d+1}) / q^{d+n+1}; positive throughout -2 < d < -1."""
    _need_degree(n, 0)
    q, d = params.q, params.delta
    return -(1 - pow_real(q, d + 1)) / pow_real(q, d + n + 1)


def constant_A(x, params: FamilyParams):
    """A(x) = (1-q^{d+1})(1-q^{d+2}) / (q^{d+1} (1 - q^{d+x+1})) for real x."""
    q, d = params.q, params.delta
    den = 1 - pow_real(q, d + x + 1)
    if den == 0:
        raise DomainError(f"A({x}) is undefined: 1 - q^(d+x+1) vanishes")
    return (1 - pow_real(q, d + 1)) * (1 - pow_real(q, d + 2)) / (pow_real(q, d + 1) * den)


def B_n(n: int, params: FamilyParams):
    _need_degree(n, 1)
    q, d = params.q, params.delta
    den = (1 - pow_real(q, n)) + q * (1 - pow_real(q, d + n + 1))
    if den == 0:
        raise DomainError(f"B_{n} is undefined for these parameters")
    return (1 - pow_real(q, d + 1)) * (1 - pow_real(q, d + 3)) / (pow_real(q, d + 1) * den)


_CONSTANTS = {"a": a_n, "b": b_n, "c": c_n, "B": B_n}


def constant(name: str, n: int, params: FamilyParams):
    """Look up one of the named constants a, b, c, B at index n."""
    try:
        fn = _CONSTANTS[name]
    except KeyError:
        raise DomainError(f"unknown constant {name!r}; expected one of {sorted(_CONSTANTS)}") from None
    return fn(n, params)


def _need_degree(n, lowest):
    if n < lowest:
        raise DomainError(f"index must be >= {lowest}, got {n}")


def recurrence_coefficients(q, d, n: int):
    """(a_k, beta_k) for k = 1..n at parameter d; beta_1 is reported as 0."""
    return _recurrence_coefficients(q, d, n, q.context.prec)


@functools.lru_cache(maxsize=2048)
def _recurrence_coefficients(q, d, n, prec):
    # prec is part of the key: equal mpf values from different contexts hash alike.
    return tuple((_a(q, d, k), _beta(q, d, k) if k >= 2 else q.context.zero) for k in range(1, n + 1))


def _guarded(spec: PolySpec, extra: int = GUARD_BITS):
    """(ctx, q, d') at P + extra bits; q and delta are P-bit values, hence exact there."""
    wctx = context(spec.params.precision + extra)
    return wctx, wctx.mpf(spec.params.q), wctx.mpf(spec.params.delta) + spec.shift


def eval_recurrence(spec: PolySpec, z):
    """L_n^{(d')}(z) by upward three-term recurrence."""
    return eval_with_derivative(spec, z)[0]


def eval_with_derivative(spec: PolySpec, z):
    """Value and z-derivative of L_n^{(d')} at z, both from the recurrence.

    The recurrence runs with GUARD_BITS extra bits and the results are
    rounded to the working precision.
    """
    ctx = spec.ctx
    wctx, q, d = _guarded(spec)
    z = wctx.mpf(z)
    p_prev, p = wctx.zero, wctx.one
    dp_prev, dp = wctx.zero, wctx.zero
    for a_k, beta_k in recurrence_coefficients(q, d, spec.degree):
        p_new = (z - a_k) * p - beta_k * p_prev
        dp_new = p + (z - a_k) * dp - beta_k * dp_prev
        p_prev, p = p, p_new
        dp_prev, dp = dp, dp_new
    return ctx.mpf(p), ctx.mpf(dp)


def eval_hypergeometric(spec: PolySpec, z):
    """L_n^{(d')}(z) from its terminating 1phi1 representation.

    Uses the r = s = 1 normalisation with the extra (-1)^k q^{k(k-1)/2}
    factor; without it the prefactor does not reproduce the monic L_1.
    The sum is formed with GUARD_BITS extra bits; when cancellation eats
    more than half of them it is recomputed with enough additional bits.
    """
    d = spec.delta
    for j in range(spec.degree):
        if d + 1 + j == 0:
            raise DegenerateParameterError(
                f"(q^(d+1); q)_{spec.degree} vanishes for d = {d}: hypergeometric form undefined"
            )
    extra = GUARD_BITS
    for _ in range(4):
        value, lost = _hypergeometric_sum(spec, z, extra)
        if lost <= extra - GUARD_BITS // 2:
            break
        extra = int(lost) + GUARD_BITS
    return spec.ctx.mpf(value)


def _hypergeometric_sum(spec: PolySpec, z, extra: int):
    wctx, q, d = _guarded(spec, extra)
    n = spec.degree
    z = wctx.mpf(z)
    qn_inv = pow_real(q, -n)
    qd1 = pow_real(q, d + 1)
    arg = -pow_real(q, d + n + 1) * z
    total = wctx.zero
    size = wctx.zero
    term = wctx.one  # (q^-n;q)_k / ((q^{d+1};q)_k (q;q)_k) * (-1)^k q^{k(k-1)/2} * arg^k
    for k in range(n + 1):
        total += term
        size += abs(term)
        if k == n:
            break
        qk = pow_real(q, k)
        term *= (1 - qn_inv * qk) / ((1 - qd1 * qk) * (1 - q * qk)) * (-qk) * arg
    prefactor = (-1) ** n * qpoch(qd1, q, n) / pow_real(q, n * (d + n))
    # Bits lost to cancellation in the sum.
    lost = float(wctx.log(size / abs(total), 2)) if total else float(wctx.prec)
    return prefactor * total, lost


def coefficients(spec: PolySpec) -> list:
    """Monomial coefficients, lowest degree first; the last entry is exactly 1."""
    ctx = spec.ctx
    prev: list = []
    cur = [ctx.one]
    for a_k, beta_k in recurrence_coefficients(spec.params.q, spec.delta, spec.degree):
        new = [ctx.zero] + cur  # z * cur
        for i, c in enumerate(cur):
            new[i] -= a_k * c
        for i, c in enumerate(prev):
            new[i] -= beta_k * c
        prev, cur = cur, new
    return cur


def eval_coefficients(coeffs, z):
    """Horner evaluation of a lowest-first coefficient list."""
    acc = coeffs[-1] * 0
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


# Mixed contiguous relations.  Each evaluator returns the left-hand side and
# the list of right-hand-side terms; the residual is LHS - sum(terms).


class RelationValue(NamedTuple):
    lhs: object
    rhs: object
    residual: object
    scale: object


@dataclass(frozen=True)
class Relation:
    name: str
    min_degree: int
    description: str
    evaluate: Callable


def _L(params, n, shift, z):
    return eval_recurrence(PolySpec(params, shift, n), z)


def _rel_recurrence(z, n, p):
    q, d = p.q, p.delta
    beta = _beta(q, d, n)
    return _L(p, n, 0, z), [(z - a_n(n, p)) * _L(p, n - 1, 0, z), -beta * _L(p, n - 2, 0, z)]


def _rel_degree_raise(z, n, p):
    q, d = p.q, p.delta
    k = (1 - pow_real(q, d + n + 1)) / pow_real(q, d + 2 * n + 1)
    return _L(p, n + 1, 0, z), [-k * _L(p, n, 0, z), z * _L(p, n, 1, z)]


def _rel_b(z, n, p):
    q, d = p.q, p.delta
    k = (1 - pow_real(q, n - 1)) / pow_real(q, d + 2 * n - 2)
    return _L(p, n, 0, z), [(z - b_n(n, p)) * _L(p, n - 1, 0, z), -k * z * _L(p, n - 2, 1, z)]


def _rel_c(z, n, p):
    q, d = p.q, p.delta
    k = (1 - pow_real(q, d + n + 1)) / pow_real(q, d + 2 * n + 1)
    return z * _L(p, n, 2, z), [(z - c_n(n, p)) * _L(p, n, 1, z), -k * _L(p, n, 0, z)]


def _rel_shift2_drop1(z, n, p):
    q, d = p.q, p.delta
    one_qn = 1 - pow_real(q, n)
    lhs = (1 - pow_real(q, d + n + 1)) / one_qn * _L(p, n, 0, z)
    return lhs, [pow_real(q, n) * (1 - pow_real(q, d + 1)) / one_qn * _L(p, n, 1, z), z * _L(p, n - 1, 2, z)]


def _rel_shift2_drop2(z, n, p):
    q, d = p.q, p.delta
    den = 1 - pow_real(q, d + n)
    lhs = (1 - pow_real(q, n - 1)) / den * z**2 * _L(p, n - 2, 2, z)
    return lhs, [
        pow_real(q, d + 2 * n) / den * c_n(n, p) * _L(p, n, 0, z),
        (z + c_n(n - 1, p)) * _L(p, n - 1, 0, z),
    ]


def _rel_shift3(z, n, p):
    q, d = p.q, p.delta
    k = (1 - pow_real(q, d + n + 1)) / (1 - pow_real(q, n - 1)) * b_n(n, p)
    A_shift = constant_A(n - d - 2, p)
    return z**3 * _L(p, n - 2, 3, z), [
        k * (z - constant_A(n, p)) * _L(p, n - 1, 0, z),
        (z - A_shift) * _L(p, n, 0, z),
    ]


def _rel_shift4(z, n, p):
    q, d = p.q, p.delta
    A_shift = constant_A(n - d - 2, p)
    s = (1 - pow_real(q, n)) + q * (1 - pow_real(q, d + n + 1))
    k = A_shift * b_n(n, p) * s / (pow_real(q, n) * (1 - pow_real(q, d + 1)))
    qd = pow_real(q, d + n + 1)
    quad = z**2 + (1 + q) * (1 - pow_real(q, d + 2)) / qd * z - A_shift * (1 - pow_real(q, d + 3)) / qd
    return z**4 * _L(p, n - 2, 4, z), [k * (z - B_n(n, p)) * _L(p, n - 1, 0, z), quad * _L(p, n, 0, z)]


RELATIONS: dict[str, Relation] = {
    r.name: r
    for r in (
        Relation("recurrence", 2, "L_n = (z - a_n) L_{n-1} - beta_n L_{n-2}", _rel_recurrence),
        Relation("degree-raise", 0, "L_{n+1} = -k L_n + z L_n^{(d+1)}", _rel_degree_raise),
        Relation("b-relation", 2, "L_n = (z - b_n) L_{n-1} - k z L_{n-2}^{(d+1)}", _rel_b),
        Relation("c-relation", 0, "z L_n^{(d+2)} = (z - c_n) L_n^{(d+1)} - k L_n", _rel_c),
        Relation("shift2-drop1", 1, "k L_n = k' L_n^{(d+1)} + z L_{n-1}^{(d+2)}", _rel_shift2_drop1),
        Relation("shift2-drop2", 3, "k z^2 L_{n-2}^{(d+2)} = k' c_n L_n + (z + c_{n-1}) L_{n-1}", _rel_shift2_drop2),
        Relation("shift3", 2, "z^3 L_{n-2}^{(d+3)} = k (z - A_n) L_{n-1} + (z - A_{n-d-2}) L_n", _rel_shift3),
        Relation("shift4", 2, "z^4 L_{n-2}^{(d+4)} = k (z - B_n) L_{n-1} + Q(z) L_n", _rel_shift4),
    )
}


def evaluate_relation(relation_id: str, z, n: int, params: FamilyParams) -> RelationValue:
    """LHS, RHS, residual and scale max(|LHS|, |RHS|, 1) of one relation at z.

    The terms are formed with guard bits from the exact working-precision
    values of q, delta and z.  When the terms cancel by more bits than the
    guard covers, the evaluation is repeated with enough extra bits.
    """
    try:
        rel = RELATIONS[relation_id]
    except KeyError:
        raise DomainError(f"unknown relation {relation_id!r}; expected one of {sorted(RELATIONS)}") from None
    if n < rel.min_degree:
        raise DomainError(f"relation {relation_id!r} needs n >= {rel.min_degree}, got {n}")
    ctx = params.ctx
    z = ctx.mpf(z)
    extra = GUARD_BITS
    for _ in range(4):
        wctx = context(params.precision + extra)
        wide = FamilyParams(wctx.mpf(params.q), wctx.mpf(params.delta), wctx.prec)
        lhs, terms = rel.evaluate(wctx.mpf(z), n, wide)
        rhs = sum(terms[1:], terms[0])
        scale = max(abs(lhs), abs(rhs), wctx.one)
        lost = int(wctx.mag(max([abs(lhs)] + [abs(t) for t in terms]) / scale))
        if lost <= extra - 32:
            break
        extra = lost + GUARD_BITS
    lhs, rhs, residual = ctx.mpf(lhs), ctx.mpf(rhs), ctx.mpf(lhs - rhs)
    return RelationValue(lhs, rhs, residual, max(abs(lhs), abs(rhs), ctx.one))


def identity_residual(relation_id: str, z, n: int, params: FamilyParams):
    """LHS - RHS of a contiguous relation at z."""
    return evaluate_relation(relation_id, z, n, params).residual


def relation_tolerance(params: FamilyParams, guard_bits: int = 24):
    return params.ctx.ldexp(1, -params.precision + guard_bits)


def relation_holds(value: RelationValue, params: FamilyParams) -> bool:
    return abs(value.residual) <= relation_tolerance(params) * value.scale
