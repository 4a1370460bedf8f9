"""
scalar

A module to provide the two coefficient rings used by latticesums: the
exact field Q(zeta_N)(pi), with pi treated as a transcendental symbol, and
arbitrary precision complex floats from mpmath.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
import numbers

import mpmath
import sympy
from sympy.polys.domains import QQ

DEFAULT_PRECISION = 128

_X = sympy.Symbol('x')
_PI = sympy.Symbol('pi')
_Z = sympy.Symbol('z')


def rational(q):
    """
    Converts an int, Fraction, sympy Rational or numeric string into an
    element of sympy's QQ domain.
    """
    if isinstance(q, str):
        q = Fraction(q)
    if isinstance(q, sympy.Rational):
        return QQ(int(q.p), int(q.q))
    if hasattr(q, 'numerator'):
        return QQ(int(q.numerator), int(q.denominator))
    return QQ(int(q))


def as_fraction(q):
    """Converts a sympy rational to a Fraction."""
    return Fraction(int(q.numerator), int(q.denominator))


@dataclass(frozen=True)
class GaussianRational:
    """A complex constant re + i*im with rational parts."""
    re: Fraction
    im: Fraction

    def __str__(self):
        return f"{self.re}+{self.im}i"


class CyclotomicField:
    """
    The field Q(zeta_N) in coordinates on the power basis
    1, z, ..., z^(d-1) modulo the N-th cyclotomic polynomial.

    Args:
        order (int): N
    """

    def __init__(self, order):
        if order < 1:
            raise ValueError(f"cyclotomic order must be positive: {order}")
        self.order = order
        self.modulus = sympy.Poly(sympy.cyclotomic_poly(order, _X), _X,
                                  domain=QQ)
        self.degree = self.modulus.degree()
        # low-to-high, monic
        phi = [QQ.from_sympy(c) for c in reversed(self.modulus.all_coeffs())]
        powers = []
        current = [QQ(1)] + [QQ(0)] * (self.degree - 1)
        for _ in range(order):
            powers.append(tuple(current))
            shifted = [QQ(0)] + current
            top = shifted.pop()
            if top:
                shifted = [s - top * p for s, p in zip(shifted, phi)]
            current = shifted
        self._powers = powers

    def __repr__(self):
        return f"CyclotomicField({self.order})"

    def power(self, j):
        """Coordinates of z^j."""
        return self._powers[j % self.order]

    def element(self, coords):
        return CyclotomicNumber(self, tuple(coords))

    def rational(self, q):
        """The rational q as an element of the field."""
        return CyclotomicNumber(
            self, (rational(q),) + (QQ(0),) * (self.degree - 1))

    def zero(self):
        return self.rational(0)

    def one(self):
        return self.rational(1)

    def root(self, q):
        """
        Returns e^(2 pi i q) for rational q whose denominator divides N.
        """
        q = Fraction(q)
        if self.order % q.denominator:
            raise ValueError(
                f"e^(2 pi i {q}) does not lie in Q(zeta_{self.order})")
        return CyclotomicNumber(
            self, self.power(q.numerator * (self.order // q.denominator)))

    def imaginary_unit(self):
        return self.root(Fraction(1, 4))

    def reduce(self, raw):
        """Reduces a coefficient list of any length modulo the modulus."""
        d = self.degree
        if len(raw) <= d:
            return tuple(raw) + (QQ(0),) * (d - len(raw))
        out = list(raw[:d])
        for j in range(d, len(raw)):
            c = raw[j]
            if c:
                for i, p in enumerate(self.power(j)):
                    if p:
                        out[i] += c * p
        return tuple(out)


@lru_cache(maxsize=None)
def cyclotomic_field(order):
    """Cached CyclotomicField factory."""
    return CyclotomicField(order)


class CyclotomicNumber:
    """
    An element of Q(zeta_N), immutable.
    """
    __slots__ = ('field', 'coords')

    def __init__(self, field, coords):
        self.field = field
        self.coords = coords

    def is_zero(self):
        return not any(self.coords)

    def is_rational(self):
        return not any(self.coords[1:])

    def rational_value(self):
        """The value as a Fraction; ValueError when self is not rational."""
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return as_fraction(self.coords[0])

    def lift(self, field):
        """Embeds self into Q(zeta_M) for M a multiple of N."""
        if field is self.field:
            return self
        if field.order % self.field.order:
            raise ValueError(f"cannot embed {self.field} into {field}")
        step = field.order // self.field.order
        raw = [QQ(0)] * field.degree
        for j, c in enumerate(self.coords):
            if c:
                for i, p in enumerate(field.power(j * step)):
                    if p:
                        raw[i] += c * p
        return CyclotomicNumber(field, tuple(raw))

    def __add__(self, other):
        return CyclotomicNumber(
            self.field, tuple(a + b for a, b in zip(self.coords,
                                                    other.coords)))

    def __sub__(self, other):
        return CyclotomicNumber(
            self.field, tuple(a - b for a, b in zip(self.coords,
                                                    other.coords)))

    def __neg__(self):
        return CyclotomicNumber(self.field, tuple(-a for a in self.coords))

    def scale(self, q):
        """Multiplies every coordinate by the rational q."""
        return CyclotomicNumber(self.field, tuple(q * a for a in self.coords))

    def __mul__(self, other):
        if other.is_rational():
            return self.scale(other.coords[0])
        if self.is_rational():
            return other.scale(self.coords[0])
        a, b = self.coords, other.coords
        raw = [QQ(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        raw[i + j] += x * y
        return CyclotomicNumber(self.field, self.field.reduce(raw))

    def inverse(self):
        """
        Multiplicative inverse, via the extended Euclidean algorithm
        against the cyclotomic polynomial.
        """
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_N)")
        if self.is_rational():
            return self.field.rational(1 / self.coords[0])
        f = sympy.Poly(list(reversed([QQ.to_sympy(c) for c in self.coords])),
                       _X, domain=QQ)
        inv = sympy.invert(f, self.field.modulus)
        coeffs = [QQ.from_sympy(c) for c in reversed(inv.all_coeffs())]
        return CyclotomicNumber(self.field, self.field.reduce(coeffs))

    def __eq__(self, other):
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        if other.field is not self.field:
            order = lcm(self.field.order, other.field.order)
            field = cyclotomic_field(order)
            return self.lift(field).coords == other.lift(field).coords
        return self.coords == other.coords

    def __hash__(self):
        return hash((self.field.order, self.coords))

    def to_complex(self, ctx):
        """Evaluates at z = e^(2 pi i / N) in an mpmath context."""
        zeta = ctx.expjpi(ctx.mpf(2) / self.field.order)
        total = ctx.mpc(0)
        power = ctx.mpc(1)
        for c in self.coords:
            if c:
                total += power * (ctx.mpf(int(c.numerator)) /
                                  int(c.denominator))
            power *= zeta
        return total

    def __str__(self):
        return _format_cyclotomic(self)

    def __repr__(self):
        return f"CyclotomicNumber({self}, N={self.field.order})"


def _format_fraction(q):
    q = as_fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _format_cyclotomic(c):
    parts = []
    for j, q in enumerate(c.coords):
        if not q:
            continue
        body = _format_fraction(abs(q))
        if j == 1:
            body = "z" if abs(q) == 1 else f"{body}*z"
        elif j > 1:
            body = f"z^{j}" if abs(q) == 1 else f"{body}*z^{j}"
        sign = "-" if q < 0 else "+"
        if not parts:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts) if parts else "0"


class ExactScalar:
    """
    An element of Q(zeta_N)(pi), stored as a Laurent polynomial in pi over
    Q(zeta_N) divided by a polynomial in pi whose constant term is 1.

    The denominator is None whenever it equals 1, which is the case for
    every value produced by the generating-function evaluator.
    """
    __slots__ = ('field', 'terms', 'den')

    def __init__(self, field, terms, den=None):
        self.field = field
        self.terms = {e: c for e, c in terms.items() if not c.is_zero()}
        self.den = den

    @classmethod
    def constant(cls, field, q):
        c = q if isinstance(q, CyclotomicNumber) else field.rational(q)
        return cls(field, {0: c})

    @classmethod
    def monomial(cls, field, coefficient, exponent):
        c = (coefficient if isinstance(coefficient, CyclotomicNumber)
             else field.rational(coefficient))
        return cls(field, {exponent: c})

    def is_zero(self):
        return not self.terms

    def is_rational(self):
        """True iff self is a rational constant (no pi, no roots of unity)."""
        return (self.den is None and set(self.terms) <= {0}
                and all(c.is_rational() for c in self.terms.values()))

    def rational_value(self):
        if not self.is_rational():
            raise ValueError(f"{self} is not a rational number")
        if not self.terms:
            return Fraction(0)
        return self.terms[0].rational_value()

    def coefficient(self, exponent):
        """Coefficient of pi^exponent in the numerator."""
        c = self.terms.get(exponent)
        return c if c is not None else self.field.zero()

    def lift(self, field):
        """Embeds self into Q(zeta_M)(pi) for M a multiple of N."""
        if field is self.field:
            return self
        den = None if self.den is None else tuple(c.lift(field)
                                                  for c in self.den)
        return ExactScalar(field, {e: c.lift(field)
                                   for e, c in self.terms.items()}, den)

    def _coerce(self, other):
        if isinstance(other, ExactScalar):
            if other.field is self.field:
                return self, other
            field = cyclotomic_field(lcm(self.field.order, other.field.order))
            return self.lift(field), other.lift(field)
        if isinstance(other, CyclotomicNumber):
            return self._coerce(ExactScalar(other.field, {0: other}))
        if isinstance(other, (int, Fraction)) or hasattr(other, 'numerator'):
            return self, ExactScalar.constant(self.field, other)
        return None, None

    def __add__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        if a.den is None and b.den is None:
            terms = dict(a.terms)
            for e, c in b.terms.items():
                terms[e] = terms[e] + c if e in terms else c
            return ExactScalar(a.field, terms)
        if a.den == b.den:
            return ExactScalar(a.field, _laurent_add(a.terms, b.terms),
                               a.den)._reduced()
        num = _laurent_add(_laurent_mul(a.terms, _as_laurent(b.den)),
                           _laurent_mul(b.terms, _as_laurent(a.den)))
        return ExactScalar(a.field, num,
                           _poly_mul(_den(a), _den(b)))._reduced()

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar(self.field, {e: -c for e, c in self.terms.items()},
                           self.den)

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        if len(b.terms) == 1 and b.den is None and 0 in b.terms \
                and b.terms[0].is_rational():
            q = b.terms[0].coords[0]
            if not q:
                return ExactScalar(a.field, {})
            return ExactScalar(a.field, {e: c.scale(q)
                                         for e, c in a.terms.items()}, a.den)
        num = _laurent_mul(a.terms, b.terms)
        if a.den is None and b.den is None:
            return ExactScalar(a.field, num)
        return ExactScalar(a.field, num,
                           _poly_mul(_den(a), _den(b)))._reduced()

    __rmul__ = __mul__

    def inverse(self):
        """The multiplicative inverse, for monomials and Laurent sums."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of an exact zero")
        if len(self.terms) == 1:
            (e, c), = self.terms.items()
            inv = c.inverse()
            num = _laurent_mul({-e: inv}, _as_laurent(_den(self)))
            return ExactScalar(self.field, num)
        shift = min(self.terms)
        lead = self.terms[shift].inverse()
        poly = _poly_from_laurent(self.terms, shift)
        poly = tuple(c * lead for c in poly)
        num = _laurent_mul({-shift: lead}, _as_laurent(_den(self)))
        return ExactScalar(self.field, num, poly)._reduced()

    def __truediv__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = ExactScalar.constant(self.field, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return (a - b).is_zero()

    __hash__ = None

    def _reduced(self):
        if self.den is None or not self.terms:
            return ExactScalar(self.field, self.terms)
        shift = min(self.terms)
        num = _poly_from_laurent(self.terms, shift)
        g = _poly_gcd(num, self.den)
        if len(g) > 1:
            num = _poly_divmod(num, g)[0]
            den = _poly_divmod(self.den, g)[0]
        else:
            den = self.den
        scale = den[0].inverse()
        den = tuple(c * scale for c in den)
        num = tuple(c * scale for c in num)
        terms = {shift + i: c for i, c in enumerate(num)}
        if len(den) == 1:
            return ExactScalar(self.field, terms)
        return ExactScalar(self.field, terms, den)

    def to_complex(self, ctx):
        """Numeric value in an mpmath context."""
        total = ctx.mpc(0)
        for e, c in self.terms.items():
            total += c.to_complex(ctx) * ctx.pi ** e
        if self.den is not None:
            total /= sum((c.to_complex(ctx) * ctx.pi ** j
                          for j, c in enumerate(self.den)), ctx.mpc(0))
        return total

    def __str__(self):
        return format_exact(self)

    def __repr__(self):
        return f"ExactScalar({format_exact(self)!r}, N={self.field.order})"


def _den(x):
    return x.den if x.den is not None else (x.field.one(),)


def _as_laurent(poly):
    return {j: c for j, c in enumerate(poly) if not c.is_zero()}


def _laurent_add(a, b):
    out = dict(a)
    for e, c in b.items():
        out[e] = out[e] + c if e in out else c
    return out


def _laurent_mul(a, b):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            p = ca * cb
            out[e] = out[e] + p if e in out else p
    return out


def _poly_from_laurent(terms, shift):
    top = max(terms)
    field = next(iter(terms.values())).field
    return tuple(terms.get(shift + j, field.zero())
                 for j in range(top - shift + 1))


def _poly_trim(p):
    p = list(p)
    while len(p) > 1 and p[-1].is_zero():
        p.pop()
    return tuple(p)


def _poly_mul(a, b):
    field = a[0].field
    out = [field.zero() for _ in range(len(a) + len(b) - 1)]
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _poly_trim(out)


def _poly_divmod(a, b):
    a, b = list(_poly_trim(a)), _poly_trim(b)
    field = b[0].field
    if len(a) < len(b):
        return (field.zero(),), tuple(a)
    lead = b[-1].inverse()
    q = [field.zero() for _ in range(len(a) - len(b) + 1)]
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] * lead
        q[i] = c
        if not c.is_zero():
            for j, y in enumerate(b):
                a[i + j] = a[i + j] - c * y
    rem = _poly_trim(a[:len(b) - 1] or [field.zero()])
    return _poly_trim(q), rem


def _poly_gcd(a, b):
    a, b = _poly_trim(a), _poly_trim(b)
    while not (len(b) == 1 and b[0].is_zero()):
        a, b = b, _poly_divmod(a, b)[1]
    return a


def format_exact(x):
    """
    Renders an ExactScalar in descending powers of pi, e.g.
    "pi^2/2 - 39/8" or "11*pi^6/20643840 + 21*pi^4/2097152".
    """
    if x.is_zero():
        return "0"
    pieces = []
    for e in sorted(x.terms, reverse=True):
        c = x.terms[e]
        if c.is_rational():
            q = as_fraction(c.coords[0])
            negative = q < 0
            body = _format_rational_term(abs(q), e)
        else:
            negative = False
            body = f"({_format_cyclotomic(c)})"
            if e:
                body += "*" + _pi_power(e)
        if not pieces:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f"- {body}" if negative else f"+ {body}")
    text = " ".join(pieces)
    if x.den is not None:
        den = ExactScalar(x.field, _as_laurent(x.den))
        text = f"({text})/({format_exact(den)})"
    return text


def _pi_power(e):
    return "pi" if e == 1 else f"pi^{e}"


def _format_rational_term(q, e):
    if e == 0:
        return _format_fraction(q)
    head = _pi_power(e)
    if q.numerator != 1:
        head = f"{q.numerator}*{head}"
    if q.denominator != 1:
        head = f"{head}/{q.denominator}"
    return head


def parse_exact(text, order=4):
    """
    Parses the output syntax of format_exact back into an ExactScalar.

    Args:
        text (str): e.g. "pi^2/2 - 39/8" or "(1 + z)*pi^-1"
        order (int): N of the field Q(zeta_N) that z denotes

    Returns:
        ExactScalar
    """
    field = cyclotomic_field(order)
    expr = sympy.sympify(text, locals={'pi': _PI, 'z': _Z})
    num, den = sympy.fraction(sympy.together(expr))
    return _expr_to_exact(num, field) / _expr_to_exact(den, field)


def _expr_to_exact(expr, field):
    poly = sympy.Poly(sympy.expand(expr), _PI, _Z, domain=QQ)
    terms = {}
    for (e, j), c in poly.terms():
        value = CyclotomicNumber(field, field.power(j)).scale(rational(c))
        terms[e] = terms[e] + value if e in terms else value
    return ExactScalar(field, terms)


def embed(x, precision=DEFAULT_PRECISION):
    """
    Evaluates an exact scalar numerically.

    Args:
        x (ExactScalar, CyclotomicNumber or rational)
        precision (int): mantissa bits

    Returns:
        mpmath mpc at the requested precision
    """
    ctx = mpmath.MPContext()
    ctx.prec = precision
    if isinstance(x, (ExactScalar, CyclotomicNumber)):
        return x.to_complex(ctx)
    if isinstance(x, Fraction):
        return ctx.mpc(ctx.mpf(x.numerator) / x.denominator)
    return ctx.mpc(x)


class ExactRing:
    """
    Q(zeta_N)(pi) behind the ring interface shared with NumericRing.

    Args:
        order (int): cyclotomic order N, a multiple of 4
    """
    exact = True

    def __init__(self, order=4):
        if order % 4:
            raise ValueError(f"exact ring needs 4 | N, got N = {order}")
        self.field = cyclotomic_field(order)
        self.order = order

    def __repr__(self):
        return f"ExactRing(N={self.order})"

    def zero(self):
        return ExactScalar(self.field, {})

    def one(self):
        return ExactScalar.constant(self.field, 1)

    def from_rational(self, q):
        """Rational q as a constant of the ring; rejects floats."""
        if not (isinstance(q, int) or hasattr(q, 'numerator')):
            raise TypeError(f"exact mode needs rational scalars, got {q!r}")
        return ExactScalar.constant(self.field, q)

    def two_pi_i(self):
        return ExactScalar.monomial(self.field, self.field.imaginary_unit()
                                    .scale(QQ(2)), 1)

    def exp_two_pi_i(self, q):
        """e^(2 pi i q) for rational q."""
        return ExactScalar.constant(self.field, self.field.root(q))

    def is_zero(self, x):
        return x.is_zero()

    def magnitude(self, x):
        return float(abs(x.to_complex(mpmath.mp)))

    def inverse(self, x):
        return x.inverse()


class NumericRing:
    """
    Complex floats at a fixed mantissa precision.

    Args:
        precision (int): bits, default 128
    """
    exact = False

    def __init__(self, precision=DEFAULT_PRECISION):
        self.ctx = mpmath.MPContext()
        self.ctx.prec = precision
        self.precision = precision

    def __repr__(self):
        return f"NumericRing(precision={self.precision})"

    def zero(self):
        return self.ctx.mpc(0)

    def one(self):
        return self.ctx.mpc(1)

    def from_rational(self, q):
        """Accepts Fractions, GaussianRational pairs and plain numbers."""
        ctx = self.ctx
        if isinstance(q, Fraction):
            return ctx.mpc(ctx.mpf(q.numerator) / q.denominator)
        if hasattr(q, 're') and isinstance(q.re, Fraction):
            return ctx.mpc(ctx.mpf(q.re.numerator) / q.re.denominator,
                           ctx.mpf(q.im.numerator) / q.im.denominator)
        if isinstance(q, numbers.Number) or isinstance(q, (ctx.mpf, ctx.mpc)):
            return ctx.mpc(q)
        return ctx.mpc(ctx.convert(q))

    def two_pi_i(self):
        return self.ctx.mpc(0, 2 * self.ctx.pi)

    def exp_two_pi_i(self, q):
        return self.ctx.exp(self.two_pi_i() * self.from_rational(q))

    def is_zero(self, x):
        return x == 0

    def magnitude(self, x):
        return float(abs(x))

    def inverse(self, x):
        return 1 / x


def make_ring(mode, order=4, precision=DEFAULT_PRECISION):
    """ExactRing for mode 'exact', NumericRing for mode 'numeric'."""
    if mode == 'exact':
        return ExactRing(order)
    if mode == 'numeric':
        return NumericRing(precision)
    raise ValueError(f"mode must be 'exact' or 'numeric', got {mode!r}")


def cyclotomic_order(arr, y, k=None, phi=None):
    """
    Returns the smallest N such that every root of unity met while
    evaluating the generating function of arr at y lies in Q(zeta_N).

    N = lcm(4, denominators of every c_f, of every {y+w}_{B,f}, and of every
    product c_f * {y+w}_{B,f}).

    Args:
        arr (Arrangement)
        y (sequence of Fraction)
        k (sequence of int): accepted for symmetry with the evaluators
        phi (GenericDirection): defaults to lattice.choose_phi(arr)

    Returns:
        int
    """
    from latticesums import lattice
    n = 4
    for f in arr.functionals:
        if not isinstance(f.constant, Fraction):
            raise TypeError(
                f"exact mode needs rational constants, {f.name} has "
                f"{f.constant!r}")
        n = lcm(n, f.constant.denominator)
    if any(not isinstance(v, (int, Fraction)) for v in y):
        raise TypeError(f"exact mode needs a rational y, got {y!r}")
    if phi is None:
        phi = lattice.choose_phi(arr)
    for basis in arr.bases:
        for w in basis.coset_reps:
            for f in basis.members:
                x = lattice.frac_part(y, w, basis, f, phi)
                c = arr[f].constant
                n = lcm(n, x.denominator, (c * x).denominator)
    return n
