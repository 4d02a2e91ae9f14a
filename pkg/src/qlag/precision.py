"""Arbitrary-precision scalars and q-elementary functions.

Every real number in the package is an ``mpf`` owned by an mpmath context
fixed at one precision.  Contexts are cached per precision and never
mutated after creation, so values can be shared across threads without
touching mpmath's global ``mp`` state.
"""

from __future__ import annotations

import math
import os
import threading
from numbers import Integral

from mpmath.ctx_mp import MPContext

from .errors import DomainError

DEFAULT_PRECISION = 256
MIN_PRECISION = 64

_contexts: dict[int, MPContext] = {}
_contexts_lock = threading.Lock()


def default_precision() -> int:
    """Precision in bits, honouring ``QLAG_PRECISION_BITS`` when set."""
    raw = os.environ.get("QLAG_PRECISION_BITS")
    if not raw:
        return DEFAULT_PRECISION
    try:
        bits = int(raw)
    except ValueError:
        raise DomainError(f"QLAG_PRECISION_BITS={raw!r} is not an integer") from None
    check_precision(bits)
    return bits


def check_precision(bits: int) -> int:
    if not isinstance(bits, Integral) or bits < MIN_PRECISION:
        raise DomainError(f"precision must be an integer >= {MIN_PRECISION} bits, got {bits!r}")
    return int(bits)


def context(bits: int) -> MPContext:
    """Return the shared mpmath context working at ``bits`` of significand."""
    bits = check_precision(bits)
    ctx = _contexts.get(bits)
    if ctx is None:
        with _contexts_lock:
            ctx = _contexts.get(bits)
            if ctx is None:
                ctx = MPContext()
                ctx.prec = bits
                _contexts[bits] = ctx
    return ctx


def real(value, bits: int):
    """Convert ``value`` to a ``bits``-precision real.

    Strings are parsed as decimals directly at the target precision, so
    ``"0.997"`` never passes through a binary double.
    """
    ctx = context(bits)
    if isinstance(value, str):
        try:
            return ctx.mpf(value.strip())
        except (ValueError, TypeError):
            raise DomainError(f"cannot parse {value!r} as a real number") from None
    return ctx.mpf(value)


def precision_of(x) -> int:
    return x.context.prec


def to_decimal_string(x, digits: int | None = None) -> str:
    """Format ``x`` in decimal.

    Without ``digits`` the output carries enough digits to round-trip at
    the precision of ``x``.
    """
    ctx = x.context
    if digits is None:
        digits = int(math.ceil(ctx.prec * math.log10(2))) + 2
    return ctx.nstr(x, digits, strip_zeros=False, min_fixed=-6, max_fixed=15)


def _check_base(q):
    if not (0 < q < 1):
        raise DomainError(f"q must lie in (0, 1), got {q}")


def pow_real(q, x):
    """q**x for 0 < q < 1.

    Integer exponents go through binary exponentiation (exact signs, no
    logarithm); everything else is exp(x ln q), formed with 32 guard bits
    so the rounding of x ln q does not leak into the result.
    """
    _check_base(q)
    ctx = q.context
    if isinstance(x, Integral):
        n = int(x)
    elif ctx.isint(x):
        n = int(x)
    else:
        wctx = context(ctx.prec + 32)
        return ctx.mpf(wctx.exp(wctx.mpf(x) * wctx.ln(wctx.mpf(q))))
    if n >= 0:
        return q**n
    return 1 / q ** (-n)


def qpoch(a, q, k=math.inf):
    """The q-Pochhammer symbol (a; q)_k, with k a non-negative integer or inf.

    The infinite product stops once |a q^j| < 2^{-P-8}, after which the
    remaining factors equal 1 to working precision.  It is accumulated
    with 32 guard bits (enough for 2^24 factors) and rounded once, so the
    result stays within a few ulp even for q close to 1.  The finite
    product is formed at working precision, factor by factor.
    """
    _check_base(q)
    ctx = q.context
    a = ctx.mpf(a)
    if k == math.inf:
        wctx = context(ctx.prec + 32)
        cutoff = ctx.ldexp(1, -ctx.prec - 8)
        prod = wctx.one
        term = wctx.mpf(a)
        qw = wctx.mpf(q)
        while abs(term) >= cutoff:
            prod *= 1 - term
            term *= qw
        return ctx.mpf(prod)
    if not isinstance(k, Integral) or k < 0:
        raise DomainError(f"qpoch length must be a non-negative integer or inf, got {k!r}")
    prod = ctx.mpf(1)
    for j in range(int(k)):
        prod *= 1 - a * q**j
    return prod
