"""Real zeros of L_n^{(delta + t)}.

Orthogonal shifts (t >= 1) use Sturm-sequence bisection on the Jacobi
matrix followed by Newton polishing against the recurrence.  The
quasi-orthogonal family (t = 0, -2 < delta < -1) has one negative zero,
located inside [B_n, A_n], and n - 1 positive zeros, each bracketed by two
consecutive zeros of the t = 1 polynomial of the same degree.  Every
bracket is sign-checked before it is refined.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

from .errors import BracketError, ConvergenceError, DegeneracyError, DomainError, RegimeError
from .qlaguerre import (
    B_n,
    FamilyParams,
    PolySpec,
    coefficients,
    constant_A,
    eval_coefficients,
    eval_recurrence,
    eval_with_derivative,
    recurrence_coefficients,
)


@dataclass(frozen=True)
class ZeroList:
    """Sorted simple real zeros of one polynomial.

    ``tol`` is relative: zero ``z`` is certified to within
    ``tol * (1 + |z|)``, i.e. the polynomial changes sign across that
    interval.
    """

    spec: PolySpec
    zeros: tuple
    neg_count: int
    tol: object

    def __len__(self):
        return len(self.zeros)

    def __iter__(self):
        return iter(self.zeros)

    def __getitem__(self, i):
        return self.zeros[i]

    def halfwidth(self, i: int):
        return self.tol * (1 + abs(self.zeros[i]))

    @property
    def positive(self) -> tuple:
        return tuple(z for z in self.zeros if z > 0)

    @property
    def negative(self) -> tuple:
        return tuple(z for z in self.zeros if z < 0)


@dataclass(frozen=True)
class Tridiagonal:
    """Symmetric tridiagonal matrix: diagonal d_1..d_n, squared off-diagonals e_2..e_n."""

    diag: tuple
    offdiag_sq: tuple

    @property
    def size(self) -> int:
        return len(self.diag)

    def gershgorin(self):
        ctx = self.diag[0].context
        off = [ctx.sqrt(e) for e in self.offdiag_sq]
        lo = hi = None
        for i, d in enumerate(self.diag):
            r = (off[i - 1] if i > 0 else 0) + (off[i] if i < len(off) else 0)
            lo = d - r if lo is None else min(lo, d - r)
            hi = d + r if hi is None else max(hi, d + r)
        return lo, hi


def zero_tolerance(ctx):
    """Relative half-width 2^{-P/2} used for certification and tie detection."""
    return ctx.ldexp(1, -(ctx.prec // 2))


def jacobi_matrix(spec: PolySpec) -> Tridiagonal:
    """Jacobi matrix whose eigenvalues are the zeros of ``spec``.

    Raises RegimeError if some squared off-diagonal is not positive, which
    happens exactly when the parameters are not in the orthogonal regime.
    """
    n = spec.degree
    if n < 1:
        raise DomainError("Jacobi matrix needs degree >= 1")
    coeffs = recurrence_coefficients(spec.params.q, spec.delta, n)
    diag = tuple(a for a, _ in coeffs)
    off = tuple(beta for _, beta in coeffs[1:])
    bad = [k + 2 for k, beta in enumerate(off) if not beta > 0]
    if bad:
        raise RegimeError(f"beta_k <= 0 at k = {bad}: parameters are not in the orthogonal regime")
    return Tridiagonal(diag, off)


def sturm_count(tri: Tridiagonal, x) -> int:
    """Number of eigenvalues strictly below x (LDL^T inertia count)."""
    ctx = x.context
    tiny = ctx.ldexp(1, -ctx.prec) * (1 + abs(x))
    count = 0
    d = None
    for i, a in enumerate(tri.diag):
        d = a - x if i == 0 else a - x - tri.offdiag_sq[i - 1] / d
        if d == 0:
            d = -tiny
        if d < 0:
            count += 1
    return count


def eigen_bisect(tri: Tridiagonal, index: int, tol=None, rtol=None, max_iter: int | None = None):
    """The ``index``-th smallest eigenvalue (0-based) by Sturm bisection.

    Stops once the bracket is narrower than ``tol`` (default 2^{-P/2}), or
    narrower than ``rtol`` times its smaller endpoint magnitude when the
    bracket does not straddle 0.
    """
    if not (0 <= index < tri.size):
        raise DomainError(f"eigenvalue index {index} out of range for size {tri.size}")
    lo, hi = tri.gershgorin()
    ctx = lo.context
    if tri.size == 1:
        return tri.diag[0]
    tol = zero_tolerance(ctx) if tol is None else tol
    if max_iter is None:
        span = max(hi - lo, tol)
        max_iter = int(ctx.log(span / tol, 2)) + 2 * ctx.prec
    def narrow(lo, hi):
        if hi - lo <= tol:
            return True
        return rtol is not None and lo * hi > 0 and hi - lo <= rtol * min(abs(lo), abs(hi))

    for _ in range(max_iter):
        if narrow(lo, hi):
            return (lo + hi) / 2
        mid = (lo + hi) / 2
        if mid == lo or mid == hi:
            break
        if sturm_count(tri, mid) > index:
            hi = mid
        else:
            lo = mid
    if hi - lo <= tol:
        return (lo + hi) / 2
    raise ConvergenceError(f"bisection for eigenvalue {index} stalled at width {hi - lo}")


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def refine_root(f, lo, hi, flo=None, fhi=None, newton=None):
    """Root of f in a sign-changing bracket [lo, hi].

    Bisects until the bracket has shrunk by 2^10, then runs Newton steps
    (if ``newton`` returns (f, f') at a point) kept inside the bracket.
    Stops when a step falls below 2^{-P/2} (1 + |x|), after one final step.
    """
    ctx = lo.context
    flo = f(lo) if flo is None else flo
    fhi = f(hi) if fhi is None else fhi
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if _sign(flo) == _sign(fhi):
        raise BracketError(f"no sign change on [{lo}, {hi}]")
    slo = _sign(flo)
    width0 = hi - lo
    eps = zero_tolerance(ctx)

    def bisect_once(lo, hi):
        mid = (lo + hi) / 2
        fm = f(mid)
        if fm == 0:
            return mid, mid
        if _sign(fm) == slo:
            return mid, hi
        return lo, mid

    while hi - lo > ctx.ldexp(width0, -10):
        lo, hi = bisect_once(lo, hi)
        if lo == hi:
            return lo
    if newton is None:
        while hi - lo > ctx.ldexp(1, -ctx.prec + 4) * (1 + abs(lo)):
            mid = (lo + hi) / 2
            if mid in (lo, hi):
                break
            lo, hi = bisect_once(lo, hi)
            if lo == hi:
                return lo
        return (lo + hi) / 2

    x = (lo + hi) / 2
    step_old = hi - lo
    for _ in range(4 * ctx.prec):
        fx, dfx = newton(x)
        if fx == 0:
            return x
        if _sign(fx) == slo:
            lo = x
        else:
            hi = x
        x_new = x - fx / dfx if dfx != 0 else None
        # Bisect when Newton leaves the bracket or fails to halve the last step.
        if x_new is None or not (lo < x_new < hi) or 2 * abs(x_new - x) > abs(step_old):
            x_new = (lo + hi) / 2
        step = x_new - x
        step_old = step
        converged = abs(step) < eps * (1 + abs(x))
        x = x_new
        if converged:
            fx, dfx = newton(x)
            if dfx != 0:
                x_final = x - fx / dfx
                if lo <= x_final <= hi:
                    x = x_final
            return x
    raise ConvergenceError(f"Newton refinement did not converge in [{lo}, {hi}]")


def certify(spec: PolySpec, zeros, tol) -> list:
    """Indices of zeros across whose certification interval no sign change occurs."""
    bad = []
    for i, z in enumerate(zeros):
        h = tol * (1 + abs(z))
        if _sign(eval_recurrence(spec, z - h)) * _sign(eval_recurrence(spec, z + h)) >= 0:
            bad.append(i)
    return bad


def _newton_fn(spec):
    return lambda x: eval_with_derivative(spec, x)


def _f(spec):
    return lambda x: eval_recurrence(spec, x)


def _polish_eigen(spec: PolySpec) -> list:
    tri = jacobi_matrix(spec)
    ctx = spec.ctx
    # Coarse eigenvalues suffice as Newton seeds; polishing supplies the digits.
    rtol = ctx.ldexp(1, -60)
    tol = zero_tolerance(ctx)
    f = _f(spec)
    out = []
    for k in range(spec.degree):
        lam = eigen_bisect(tri, k, tol=tol, rtol=rtol)
        h = max(tol, rtol * abs(lam))
        for _ in range(16):
            lo, hi = lam - h, lam + h
            flo, fhi = f(lo), f(hi)
            if _sign(flo) != _sign(fhi) or flo == 0 or fhi == 0:
                break
            h *= 2
        else:
            raise BracketError(f"{_describe(spec)}: no sign change around eigenvalue {k} = {lam}")
        out.append(refine_root(f, lo, hi, flo, fhi, newton=_newton_fn(spec)))
    return out


def _cauchy_bound(spec: PolySpec):
    coeffs = coefficients(spec)
    return 1 + max(abs(c) for c in coeffs[:-1])


def _brackets_from(spec: PolySpec, inner, lo_end, hi_end) -> list:
    f = _f(spec)
    nwt = _newton_fn(spec)
    points = [lo_end, *inner, hi_end]
    out = []
    for i in range(len(points) - 1):
        lo, hi = points[i], points[i + 1]
        flo, fhi = f(lo), f(hi)
        if flo != 0 and fhi != 0 and _sign(flo) == _sign(fhi):
            raise BracketError(
                f"{_describe(spec)}: no sign change on bracket {i} = ({lo}, {hi})"
            )
        out.append(refine_root(f, lo, hi, flo, fhi, newton=nwt))
    return out


def _outer_end(spec: PolySpec, anchor, direction: int, limit):
    """Point beyond ``anchor`` (towards ``direction``) where the sign differs from f(anchor).

    The step doubles from 2^{-20} (1 + |anchor|); the search stops at
    ``limit``, a root bound, which is returned if no earlier change shows.
    """
    f = _f(spec)
    s0 = _sign(f(anchor))
    h = spec.ctx.ldexp(1 + abs(anchor), -20)
    while True:
        x = anchor + direction * h
        if direction * (x - limit) >= 0:
            return limit
        if _sign(f(x)) != s0:
            return x
        h *= 2


def _bracket_orthogonal(spec: PolySpec) -> list:
    """Zeros via interlacing with the degree n-1 zeros of the same family."""
    n = spec.degree
    if n == 1:
        return [recurrence_coefficients(spec.params.q, spec.delta, 1)[0][0]]
    lower = _bracket_orthogonal(PolySpec(spec.params, spec.shift, n - 1))
    r = _cauchy_bound(spec)
    lo_end = _outer_end(spec, lower[0], -1, -r)
    hi_end = _outer_end(spec, lower[-1], 1, r)
    return _brackets_from(spec, lower, lo_end, hi_end)


def _quasi_zeros(spec: PolySpec) -> list:
    params = spec.params
    n = spec.degree
    if n == 1:
        return [recurrence_coefficients(params.q, params.delta, 1)[0][0]]
    f = _f(spec)
    lo, hi = B_n(n, params), constant_A(n, params)
    flo, fhi = f(lo), f(hi)
    if flo != 0 and fhi != 0 and _sign(flo) == _sign(fhi):
        raise BracketError(f"{_describe(spec)}: no sign change on the negative-zero bracket [B_n, A_n]")
    negative = refine_root(f, lo, hi, flo, fhi, newton=_newton_fn(spec))
    y = zeros(PolySpec(params, 1, n)).zeros
    # z_{i+1} lies between y_i and y_{i+1}, i = 1..n-1.
    positive = _brackets_from(spec, list(y[1:-1]), y[0], y[-1]) if n > 1 else []
    return [negative, *positive]


def _describe(spec: PolySpec) -> str:
    p = spec.params
    return f"L_{spec.degree}^(delta+{spec.shift}) at q={p.q}, delta={p.delta}"


def _compute(spec: PolySpec, method: str) -> list:
    if spec.shift == 0:
        if not spec.params.quasi_regime:
            raise RegimeError("t = 0 zeros require -2 < delta < -1")
        return _quasi_zeros(spec)
    if method == "bracket":
        return _bracket_orthogonal(spec)
    try:
        return _polish_eigen(spec)
    except RegimeError:
        if method == "eigen":
            raise
        return _bracket_orthogonal(spec)


def zeros(spec: PolySpec, method: str = "auto") -> ZeroList:
    """All n real zeros of ``spec``, sorted and sign-certified.

    ``method`` selects the t >= 1 route: "eigen" (Jacobi matrix), "bracket"
    (interlacing with degree n-1) or "auto" (eigen, falling back to bracket
    outside the orthogonal regime).  Results are memoised per
    (q, delta, t, n, precision, method).
    """
    if spec.degree < 1:
        raise DomainError("zeros() needs degree >= 1")
    if method not in ("auto", "eigen", "bracket"):
        raise DomainError(f"unknown method {method!r}")
    p = spec.params
    return _zeros_cached(p.q, p.delta, p.precision, p.q_text, p.delta_text, spec.shift, spec.degree, method)


@functools.lru_cache(maxsize=1024)
def _zeros_cached(q, delta, precision, q_text, delta_text, shift, degree, method) -> ZeroList:
    params = FamilyParams(q, delta, precision, q_text, delta_text)
    spec = PolySpec(params, shift, degree)
    zs = sorted(_compute(spec, method))
    if _clustered(zs, zero_tolerance(spec.ctx)):
        # Recompute once at doubled precision; the result stays at 2P.
        spec = PolySpec(params.with_precision(2 * precision), shift, degree)
        zs = sorted(_compute(spec, method))
        if _clustered(zs, zero_tolerance(spec.ctx)):
            raise DegeneracyError(f"{_describe(spec)}: zeros closer than 2^(-P/2) even at doubled precision")
    tol = zero_tolerance(spec.ctx)
    if len(zs) != degree:
        raise BracketError(f"{_describe(spec)}: found {len(zs)} zeros, expected {degree}")
    bad = certify(spec, zs, tol)
    if bad:
        raise BracketError(f"{_describe(spec)}: zeros {bad} fail sign certification")
    neg = sum(1 for z in zs if z < 0)
    return ZeroList(spec, tuple(zs), neg, tol)


def _clustered(zs, tol) -> bool:
    return any(zs[i + 1] - zs[i] <= tol * (1 + abs(zs[i])) for i in range(len(zs) - 1))


def companion_oracle(spec: PolySpec, ratio: float = 1.25, max_refinements: int = 6) -> ZeroList:
    """Independent zero finder for tests: log-grid sign scan plus bisection.

    Works only from the monomial coefficients.  Root magnitudes lie in
    [r_min, R] by the Cauchy bounds of the polynomial and its reversal; the
    scan uses geometrically spaced points on both sides of 0 and densifies
    the grid until all n sign changes are found.
    """
    n = spec.degree
    if n < 1 or n > 15:
        raise DomainError("companion_oracle is a desk-scale oracle: 1 <= n <= 15")
    ctx = spec.ctx
    coeffs = coefficients(spec)
    if coeffs[0] == 0:
        raise DomainError("zero constant coefficient: deflate before using the oracle")
    big = max(abs(c) for c in coeffs[1:])
    r_max = 1 + max(abs(c) for c in coeffs[:-1])
    r_min = abs(coeffs[0]) / (abs(coeffs[0]) + big)

    def f(x):
        return eval_coefficients(coeffs, x)

    ratio = ctx.mpf(ratio)
    for _ in range(max_refinements + 1):
        count = int(math.ceil(float(ctx.log(r_max / r_min) / ctx.log(ratio)))) + 1
        mags = [r_min * ratio**k for k in range(count + 1)]
        found = []
        for sign in (-1, 1):
            pts = [sign * m for m in mags]
            if sign < 0:
                pts.reverse()
            vals = [f(x) for x in pts]
            for i in range(len(pts) - 1):
                if vals[i] == 0:
                    found.append(pts[i])
                elif _sign(vals[i]) * _sign(vals[i + 1]) < 0:
                    found.append(refine_root(f, pts[i], pts[i + 1], vals[i], vals[i + 1]))
            if vals[-1] == 0:
                found.append(pts[-1])
        if len(found) == n:
            found.sort()
            return ZeroList(spec, tuple(found), sum(1 for z in found if z < 0), zero_tolerance(ctx))
        ratio = ctx.sqrt(ratio)
    raise ConvergenceError(f"oracle found {len(found)} of {n} zeros")
