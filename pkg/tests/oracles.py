"""Independent reference implementations used only by the tests.

None of these touch mpmath: they use Decimal (its own exp/ln), exact
Fractions and hand-derived closed forms.
"""

from decimal import Decimal, localcontext
from fractions import Fraction


def decimal_pow(q: str, x: str, digits: int = 100) -> Decimal:
    """q**x = exp(x ln q) with the decimal module's own exp and ln."""
    with localcontext() as c:
        c.prec = digits
        return (Decimal(x) * Decimal(q).ln()).exp()


def decimal_qpoch_inf(a: str, q: str, digits: int = 160) -> Decimal:
    """(a; q)_inf by brute-force multiplication until factors equal 1."""
    with localcontext() as c:
        c.prec = digits
        a, q = Decimal(a), Decimal(q)
        eps = Decimal(10) ** (-digits - 5)
        prod, term = Decimal(1), a
        while abs(term) > eps:
            prod *= 1 - term
            term *= q
        return prod


def _qpow(q: Fraction, k: int) -> Fraction:
    return q**k


def fraction_recurrence_coefficients(q: Fraction, d: int, n: int) -> list:
    """Exact monomial coefficients (lowest first) for integer parameter d.

    Expands L_0 = 1, L_1 = z - (1 - q^{d+1})/q^{d+1} and
    L_k = (z - a_k) L_{k-1} - beta_k L_{k-2} over the rationals.
    """

    def a(k):
        return (1 - _qpow(q, k) + q * (1 - _qpow(q, d + k - 1))) / _qpow(q, d + 2 * k - 1)

    def beta(k):
        return (1 - _qpow(q, k - 1)) * (1 - _qpow(q, d + k - 1)) / _qpow(q, 2 * d + 4 * k - 5)

    prev, cur = [], [Fraction(1)]
    for k in range(1, n + 1):
        ak = a(k)
        bk = beta(k) if k >= 2 else Fraction(0)
        new = [Fraction(0)] + cur
        for i, c in enumerate(cur):
            new[i] -= ak * c
        for i, c in enumerate(prev):
            new[i] -= bk * c
        prev, cur = cur, new
    return cur


def fraction_eval(coeffs: list, z: Fraction) -> Fraction:
    return sum(c * z**i for i, c in enumerate(coeffs))


def quadratic_roots(c0: Fraction, c1: Fraction, digits: int = 100) -> tuple:
    """Real roots of z^2 + c1 z + c0, ascending, as Decimals."""
    with localcontext() as c:
        c.prec = digits
        b, k = Decimal(c1.numerator) / Decimal(c1.denominator), Decimal(c0.numerator) / Decimal(c0.denominator)
        disc = (b * b - 4 * k).sqrt()
        return ((-b - disc) / 2, (-b + disc) / 2)


def closed_form_constants(q: float, d: float, n: int) -> dict:
    """Double-precision closed forms of a_n, b_n, c_n, B_n and A_n."""
    a = (1 - q**n + q * (1 - q ** (d + n - 1))) / q ** (d + 2 * n - 1)
    b = (1 - q ** (d + n)) / q ** (d + 2 * n - 1)
    c = -(1 - q ** (d + 1)) / q ** (d + n + 1)
    B = (1 - q ** (d + 1)) * (1 - q ** (d + 3)) / (q ** (d + 1) * ((1 - q**n) + q * (1 - q ** (d + n + 1))))
    A = (1 - q ** (d + 1)) * (1 - q ** (d + 2)) / (q ** (d + 1) * (1 - q ** (d + n + 1)))
    return {"a": a, "b": b, "c": c, "B": B, "A": A}
