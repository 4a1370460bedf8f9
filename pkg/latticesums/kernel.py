"""
kernel

A module to compute the one-dimensional generating kernel
F(t,y;b) = t e^((t - 2 pi i b) y) / (e^(t - 2 pi i b) - 1) and its Taylor
coefficients C(k,y;b), both in closed form and as truncated series
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from latticesums.scalar import GaussianRational
from latticesums.series import TruncatedSeries, invert_unit

_EPSILON = 1e-9


@lru_cache(maxsize=None)
def _bernoulli_table(n):
    table = [Fraction(1)]
    for m in range(1, n + 1):
        s = sum((comb(m + 1, j) * table[j] for j in range(m)), Fraction(0))
        table.append(-s / (m + 1))
    return tuple(table)


def bernoulli_numbers(n):
    """
    Bernoulli numbers B_0..B_n as exact Fractions, with B_1 = -1/2, from
    the recurrence sum_{j<=m} binom(m+1, j) B_j = 0.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    return list(_bernoulli_table(n))


def bernoulli_polynomial(k, y):
    """
    B_k(y) = sum_j binom(k, j) B_(k-j) y^j, exact for rational y.
    """
    table = _bernoulli_table(k)
    y = Fraction(y) if not isinstance(y, float) else y
    return sum((comb(k, j) * table[k - j] * y ** j for j in range(k + 1)),
               Fraction(0) if not isinstance(y, float) else 0.0)


def is_integral(b):
    """True iff the constant b is an integer (within 1e-9 for floats)."""
    if isinstance(b, Fraction):
        return b.denominator == 1
    if isinstance(b, int):
        return True
    if isinstance(b, GaussianRational):
        return b.im == 0 and b.re.denominator == 1
    b = complex(b)
    return abs(b.imag) < _EPSILON and abs(b.real - round(b.real)) < _EPSILON


@dataclass(frozen=True)
class KernelParams:
    """
    Parameters of F(t,y;b): the constant b = c_f and a fractional-part
    value y in [0, 1].
    """
    b: object
    y: object

    def __post_init__(self):
        if not 0 <= self.y <= 1:
            raise ValueError(f"kernel needs 0 <= y <= 1, got {self.y}")

    @property
    def integral(self):
        return is_integral(self.b)


def _scalar(ring, x):
    return ring.from_rational(x) if not ring.exact else \
        ring.from_rational(Fraction(x))


def phase(ring, b, y):
    """e^(-2 pi i b y) in the given ring."""
    if ring.exact:
        return ring.exp_two_pi_i(-Fraction(b) * Fraction(y))
    return ring.ctx.exp(-ring.two_pi_i() * _scalar(ring, b) * _scalar(ring, y))


def _rho(ring, b):
    if ring.exact:
        return ring.exp_two_pi_i(-Fraction(b))
    return ring.ctx.exp(-ring.two_pi_i() * _scalar(ring, b))


def kernel_series(p, order, ring):
    """
    The Taylor series of F(t,y;b) in one variable through degree order.

    Args:
        p (KernelParams)
        order (int): K
        ring (ExactRing or NumericRing)

    Returns:
        TruncatedSeries in one variable
    """
    if p.integral:
        terms = {}
        scale = phase(ring, p.b, p.y)
        for n in range(order + 1):
            c = bernoulli_polynomial(n, p.y) / factorial(n)
            terms[(n,)] = scale * _scalar(ring, c)
        return TruncatedSeries(ring, 1, order, terms)
    rho = _rho(ring, p.b)
    numerator = {}
    denominator = {(0,): rho - ring.one()}
    for n in range(order + 1):
        inv = _scalar(ring, Fraction(1, factorial(n)))
        if n:
            denominator[(n,)] = rho * inv
        if n < order:
            numerator[(n + 1,)] = _scalar(ring, p.y ** n / factorial(n))
    num = TruncatedSeries(ring, 1, order, numerator)
    den = TruncatedSeries(ring, 1, order, denominator)
    return (num * invert_unit(den)).scale(phase(ring, p.b, p.y))


def place(series, nvars, var, caps=None):
    """
    Embeds a one-variable series as a series in variable var of nvars.
    """
    terms = {}
    for (n,), c in series.terms.items():
        e = [0] * nvars
        e[var] = n
        terms[tuple(e)] = c
    return TruncatedSeries(series.ring, nvars, series.order, terms, caps)


def _g_coefficients(ring, b, n):
    # t / (rho e^t - 1) = sum g_j t^j / j!
    rho = _rho(ring, b)
    factor = -rho * ring.inverse(rho - ring.one())
    h = [ring.inverse(rho - ring.one())]
    for m in range(1, n):
        acc = ring.zero()
        for j in range(1, m + 1):
            acc = acc + h[m - j] * _scalar(ring, Fraction(1, factorial(j)))
        h.append(factor * acc)
    g = [ring.zero()]
    for j in range(1, n + 1):
        g.append(h[j - 1] * _scalar(ring, factorial(j - 1) * j))
    return g


def kernel_polynomial(k, b, ring):
    """
    Coefficients p_0..p_k of the polynomial P with
    C(k,x;b) = e^(-2 pi i b x) P(x).
    """
    if is_integral(b):
        table = _bernoulli_table(k)
        return [_scalar(ring, comb(k, j) * table[k - j]) for j in range(k + 1)]
    g = _g_coefficients(ring, b, k)
    return [g[k - j] * _scalar(ring, comb(k, j)) for j in range(k + 1)]


def kernel_coefficient(k, y, b, ring):
    """
    The closed form of C(k,y;b): e^(-2 pi i b y) B_k(y) for integral b,
    e^(-2 pi i b y) sum_j binom(k,j) y^j g_(k-j) otherwise, where g_n are
    the Taylor coefficients of t/(e^(t - 2 pi i b) - 1).
    """
    poly = kernel_polynomial(k, b, ring)
    total = ring.zero()
    for j, c in enumerate(poly):
        total = total + c * _scalar(ring, y ** j)
    return total * phase(ring, b, y)


def kernel_moment(k, m, b):
    """
    -((2 pi i)^k / k!) * int_0^1 C(k,x;b) e^(-2 pi i m x) dx by the case
    table: -1 if m+b = 0 and k = 0, 0 if exactly one of m+b and k vanishes,
    1/(m+b)^k otherwise.
    """
    s = m + b
    vanishes = s == 0 if isinstance(s, (int, Fraction)) else \
        abs(complex(s)) < _EPSILON
    if k == 0:
        return -1 if vanishes else 0
    if vanishes:
        return 0
    if isinstance(s, (int, Fraction)):
        return Fraction(1) / Fraction(s) ** k
    return 1 / complex(s) ** k


def moment_integral(k, m, b, ring):
    """
    Integrates -((2 pi i)^k / k!) C(k,x;b) e^(-2 pi i m x) over [0, 1]
    term by term in the given ring, using
    int_0^1 x^j e^(lx) dx = e^l sum_i (-1)^i j!/(j-i)! / l^(i+1)
    - (-1)^j j! / l^(j+1) with l = -2 pi i (m+b).
    """
    poly = kernel_polynomial(k, b, ring)
    s = m + b
    if kernel_moment(0, m, b) == -1:
        integral = ring.zero()
        for j, c in enumerate(poly):
            integral = integral + c * _scalar(ring, Fraction(1, j + 1))
    else:
        lam = -ring.two_pi_i() * _scalar(ring, s)
        inv = ring.inverse(lam)
        e_lam = _rho(ring, s)
        integral = ring.zero()
        for j, c in enumerate(poly):
            upper = ring.zero()
            inv_power = inv
            for i in range(j + 1):
                term = inv_power * _scalar(
                    ring, (-1) ** i * (factorial(j) // factorial(j - i)))
                upper = upper + term
                inv_power = inv_power * inv
            value = e_lam * upper - inv ** (j + 1) * _scalar(
                ring, (-1) ** j * factorial(j))
            integral = integral + c * value
    prefactor = -(ring.two_pi_i() ** k) * _scalar(
        ring, Fraction(1, factorial(k)))
    return prefactor * integral
