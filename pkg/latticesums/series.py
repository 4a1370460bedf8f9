"""
series

A module to provide truncated multivariate power series over either
scalar ring, constant-free linear forms, rational forms with linear-form
denominators, and exact division by a linear form
"""
from collections import defaultdict
from fractions import Fraction
from math import factorial
import warnings

import mpmath

from latticesums.errors import NonDivisible, LatticeSumWarning
from latticesums.scalar import ExactScalar, format_exact, parse_exact


class TruncatedSeries:
    """
    A polynomial in nvars variables known modulo the monomials of total
    degree above order and, optionally, of degree above caps[i] in
    variable i.

    Args:
        ring (ExactRing or NumericRing)
        nvars (int)
        order (int): total-degree cutoff K
        terms (dict): exponent tuple -> scalar
        caps (tuple): per-variable cutoffs, None for uncapped
    """
    __slots__ = ('ring', 'nvars', 'order', 'caps', 'terms')

    def __init__(self, ring, nvars, order, terms=None, caps=None):
        self.ring = ring
        self.nvars = nvars
        self.order = order
        self.caps = tuple(caps) if caps is not None else (None,) * nvars
        self.terms = {}
        if terms:
            for e, c in terms.items():
                if self.admits(e) and not ring.is_zero(c):
                    self.terms[e] = c

    def admits(self, e):
        """True iff the monomial t^e survives the truncation."""
        if sum(e) > self.order:
            return False
        for a, cap in zip(e, self.caps):
            if cap is not None and a > cap:
                return False
        return True

    @classmethod
    def constant(cls, ring, nvars, order, c, caps=None):
        """The constant series c."""
        if isinstance(c, (int, Fraction)):
            c = ring.from_rational(Fraction(c))
        return cls(ring, nvars, order, {(0,) * nvars: c}, caps)

    @classmethod
    def variable(cls, ring, nvars, order, i, caps=None):
        e = [0] * nvars
        e[i] = 1
        return cls(ring, nvars, order, {tuple(e): ring.one()}, caps)

    def _like(self, terms, order=None):
        out = TruncatedSeries.__new__(TruncatedSeries)
        out.ring = self.ring
        out.nvars = self.nvars
        out.order = self.order if order is None else order
        out.caps = self.caps
        out.terms = terms
        return out

    def _check(self, other):
        if other.nvars != self.nvars:
            raise ValueError(
                f"series in {self.nvars} and {other.nvars} variables")

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self + TruncatedSeries.constant(
                self.ring, self.nvars, self.order, other, self.caps)
        self._check(other)
        order = min(self.order, other.order)
        caps = _merge_caps(self.caps, other.caps)
        out = self._like({}, order)
        out.caps = caps
        admits = out.admits
        terms = {e: c for e, c in self.terms.items() if admits(e)}
        is_zero = self.ring.is_zero
        for e, c in other.terms.items():
            if not admits(e):
                continue
            if e in terms:
                v = terms[e] + c
                if is_zero(v):
                    del terms[e]
                else:
                    terms[e] = v
            else:
                terms[e] = c
        out.terms = terms
        return out

    __radd__ = __add__

    def __neg__(self):
        return self._like({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        """Multiplies every coefficient by the scalar c."""
        if isinstance(c, (int, Fraction)):
            c = self.ring.from_rational(Fraction(c))
        if self.ring.is_zero(c):
            return self._like({})
        return self._like({e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        self._check(other)
        order = min(self.order, other.order)
        caps = _merge_caps(self.caps, other.caps)
        acc = {}
        right = sorted(other.terms.items(), key=lambda kv: sum(kv[0]))
        for ea, ca in self.terms.items():
            da = sum(ea)
            for eb, cb in right:
                if da + sum(eb) > order:
                    break
                e = tuple(x + y for x, y in zip(ea, eb))
                if any(cap is not None and x > cap
                       for x, cap in zip(e, caps)):
                    continue
                p = ca * cb
                acc[e] = acc[e] + p if e in acc else p
        is_zero = self.ring.is_zero
        out = TruncatedSeries.__new__(TruncatedSeries)
        out.ring, out.nvars, out.order, out.caps = \
            self.ring, self.nvars, order, caps
        out.terms = {e: c for e, c in acc.items() if not is_zero(c)}
        return out

    __rmul__ = __mul__

    def mul_linear(self, form):
        """
        Multiplies by a constant-free linear form. The product is known one
        degree further than self, so the order rises by one.
        """
        acc = {}
        coefficients = [(i, self.ring.from_rational(a))
                        for i, a in enumerate(form.coefficients) if a]
        for e, c in self.terms.items():
            for i, a in coefficients:
                x = list(e)
                x[i] += 1
                x = tuple(x)
                cap = self.caps[i]
                if cap is not None and x[i] > cap:
                    continue
                p = c * a
                acc[x] = acc[x] + p if x in acc else p
        is_zero = self.ring.is_zero
        return self._like({e: c for e, c in acc.items() if not is_zero(c)},
                          self.order + 1)

    def coefficient(self, e):
        c = self.terms.get(tuple(e))
        return c if c is not None else self.ring.zero()

    def constant_term(self):
        return self.coefficient((0,) * self.nvars)

    def drop_variable(self, i):
        """
        Removes variable i, which must not occur in any term.
        """
        if any(e[i] for e in self.terms):
            raise ValueError(f"variable {i} still occurs in the series")
        caps = self.caps[:i] + self.caps[i + 1:]
        out = TruncatedSeries(self.ring, self.nvars - 1, self.order, None,
                              caps)
        out.terms = {e[:i] + e[i + 1:]: c for e, c in self.terms.items()}
        return out

    def max_discrepancy(self, other):
        """
        Largest |coefficient difference| over the common truncation region;
        0 exactly when the series agree in exact mode.
        """
        order = min(self.order, other.order)
        keys = {e for e in list(self.terms) + list(other.terms)
                if sum(e) <= order}
        worst = 0.0
        for e in keys:
            d = self.coefficient(e) - other.coefficient(e)
            if not self.ring.is_zero(d):
                worst = max(worst, self.ring.magnitude(d))
        return worst

    def equals(self, other):
        """Exact equality, or equality up to the precision tolerance."""
        if self.ring.exact:
            return self.max_discrepancy(other) == 0
        return self.max_discrepancy(other) <= _numeric_tolerance(self.ring) \
            * max(1.0, self.norm(), other.norm())

    def norm(self):
        """Largest coefficient magnitude."""
        return max((self.ring.magnitude(c) for c in self.terms.values()),
                   default=0.0)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return (f"TruncatedSeries(nvars={self.nvars}, order={self.order}, "
                f"terms={len(self.terms)})")


def _merge_caps(a, b):
    return tuple(x if y is None else (y if x is None else min(x, y))
                 for x, y in zip(a, b))


def _numeric_tolerance(ring):
    return 2.0 ** (-ring.precision / 2)


class LinearForm:
    """
    sum_i coefficients[i] * t_i + constant, with rational coefficients.

    Args:
        coefficients (tuple of Fraction)
        constant (scalar or None): None for a constant-free form
    """
    __slots__ = ('coefficients', 'constant')

    def __init__(self, coefficients, constant=None):
        self.coefficients = tuple(Fraction(a) for a in coefficients)
        if not any(self.coefficients):
            raise ValueError("linear form with zero linear part")
        self.constant = constant

    def normalised(self):
        """
        Returns (scale, form) with form = self / scale and the first nonzero
        coefficient of form equal to 1. Only for constant-free forms.
        """
        lead = next(a for a in self.coefficients if a)
        return lead, LinearForm(tuple(a / lead for a in self.coefficients))

    def pivot(self, allowed=None):
        """
        The variable with the largest |coefficient|, ties broken by variable
        order, among the allowed variables.
        """
        best = None
        for i, a in enumerate(self.coefficients):
            if not a or (allowed is not None and i not in allowed):
                continue
            if best is None or abs(a) > abs(self.coefficients[best]):
                best = i
        if best is None:
            raise ValueError(f"{self} has no admissible pivot")
        return best

    def series(self, ring, order, caps=None):
        """The form as a truncated series (constant included)."""
        n = len(self.coefficients)
        terms = {}
        if self.constant is not None:
            terms[(0,) * n] = self.constant
        for i, a in enumerate(self.coefficients):
            if a:
                e = [0] * n
                e[i] = 1
                terms[tuple(e)] = ring.from_rational(a)
        return TruncatedSeries(ring, n, order, terms, caps)

    def __eq__(self, other):
        return (isinstance(other, LinearForm)
                and self.coefficients == other.coefficients
                and self.constant is None and other.constant is None)

    def __hash__(self):
        return hash(self.coefficients)

    def __str__(self):
        parts = []
        for i, a in enumerate(self.coefficients):
            if a:
                parts.append(f"{a}*t{i}")
        if self.constant is not None:
            parts.append(f"({self.constant})")
        return " + ".join(parts)

    __repr__ = __str__


class RationalForm:
    """
    numerator / prod(denominators), the denominators being normalised
    constant-free linear forms and the numerator known to order K + d.
    """
    __slots__ = ('numerator', 'denominators')

    def __init__(self, numerator, denominators=()):
        for form in denominators:
            if form.constant is not None:
                raise ValueError(f"denominator {form} has a constant term")
        self.numerator = numerator
        self.denominators = tuple(denominators)

    @property
    def degree(self):
        return len(self.denominators)

    def equals(self, other):
        """Equality by cross multiplication."""
        left = self.numerator
        for form in other.denominators:
            left = left.mul_linear(form)
        right = other.numerator
        for form in self.denominators:
            right = right.mul_linear(form)
        return left.equals(right)

    def to_series(self):
        return sum_rational_forms([self])

    def __repr__(self):
        return (f"RationalForm({self.numerator!r}, "
                f"{len(self.denominators)} denominators)")


def invert_unit(s):
    """
    Inverse of a series with nonzero constant term, modulo truncation.
    """
    c0 = s.constant_term()
    if s.ring.is_zero(c0):
        raise ZeroDivisionError("series has zero constant term")
    inv0 = s.ring.inverse(c0)
    rest = s - TruncatedSeries.constant(s.ring, s.nvars, s.order, c0, s.caps)
    step = rest.scale(-inv0)
    result = TruncatedSeries.constant(s.ring, s.nvars, s.order,
                                      s.ring.one(), s.caps)
    power = result
    for _ in range(s.order):
        power = power * step
        if not power.terms:
            break
        result = result + power
    return result.scale(inv0)


def exp_linear(ring, nvars, order, coefficients, caps=None):
    """
    exp(sum_i a_i t_i) for scalar coefficients a_i given as a dict
    variable -> scalar, built as a product of univariate exponentials.
    """
    caps = tuple(caps) if caps is not None else (None,) * nvars
    result = TruncatedSeries.constant(ring, nvars, order, ring.one(), caps)
    for i, a in sorted(coefficients.items()):
        top = order if caps[i] is None else min(order, caps[i])
        terms = {}
        power = ring.one()
        for n in range(top + 1):
            e = [0] * nvars
            e[i] = n
            terms[tuple(e)] = power * ring.from_rational(
                Fraction(1, factorial(n)))
            power = power * a
        result = result * TruncatedSeries(ring, nvars, order, terms, caps)
    return result


def divide_exact(s, form):
    """
    Divides s by a constant-free linear form l, returning q with q*l = s
    modulo truncation; q is known to order s.order - 1.

    The quotient is computed through the coefficient recursion of the
    change of variables u = l(t) with the pivot variable p:
    q_a = (s_{a+e_p} - sum_{i != p} l_i q_{a+e_p-e_i}) / l_p.

    Raises:
        NonDivisible: if q*l differs from s, carrying the residual terms
    """
    ring = s.ring
    allowed = {i for i, c in enumerate(s.caps) if c is None}
    p = form.pivot(allowed)
    lp = form.coefficients[p]
    inv_lp = ring.from_rational(1 / lp)
    others = [(i, ring.from_rational(a))
              for i, a in enumerate(form.coefficients) if a and i != p]
    order = s.order - 1
    buckets = defaultdict(set)
    for e in s.terms:
        if e[p] >= 1 and sum(e) - 1 <= order:
            a = list(e)
            a[p] -= 1
            buckets[a[p]].add(tuple(a))
    q = {}
    level = max(buckets, default=-1)
    while level >= 0:
        for a in sorted(buckets.pop(level, ())):
            up = list(a)
            up[p] += 1
            value = s.terms.get(tuple(up))
            acc = value if value is not None else ring.zero()
            for i, coef in others:
                if a[i] == 0:
                    continue
                b = list(up)
                b[i] -= 1
                qb = q.get(tuple(b))
                if qb is not None:
                    acc = acc - qb * coef
            if ring.is_zero(acc):
                continue
            qa = acc * inv_lp
            q[a] = qa
            if level == 0:
                continue
            for i, _ in others:
                nxt = list(a)
                nxt[p] -= 1
                nxt[i] += 1
                cap = s.caps[i]
                if cap is not None and nxt[i] > cap:
                    continue
                buckets[level - 1].add(tuple(nxt))
        level -= 1
    quotient = TruncatedSeries(ring, s.nvars, order, None, s.caps)
    quotient.terms = q
    _check_division(s, quotient, form)
    return quotient


def _check_division(s, q, form):
    back = q.mul_linear(form)
    residual = {}
    for e in set(s.terms) | set(back.terms):
        d = s.coefficient(e) - back.coefficient(e)
        if not s.ring.is_zero(d):
            residual[e] = d
    if not residual:
        return
    ring = s.ring
    if ring.exact:
        raise NonDivisible(residual, divisor=form)
    norm = max(ring.magnitude(c) for c in residual.values())
    if norm > _numeric_tolerance(ring) * max(1.0, s.norm()):
        raise NonDivisible(residual, norm, form)
    if norm > 0:
        warnings.warn(f"division by {form} leaves residual {norm:.3e}",
                      LatticeSumWarning, stacklevel=3)


def common_denominator(forms):
    """
    Distinct denominators of the given rational forms, each with the
    largest multiplicity it has in any single form.
    """
    needed = {}
    for rf in forms:
        counts = defaultdict(int)
        for form in rf.denominators:
            counts[form] += 1
        for form, m in counts.items():
            needed[form] = max(needed.get(form, 0), m)
    ordered = sorted(needed, key=lambda f: f.coefficients)
    out = []
    for form in ordered:
        out.extend([form] * needed[form])
    return out


def choose_caps(nvars, denominators, weights):
    """
    Per-variable caps for extracting coefficients up to the given weights:
    every pivot of a denominator stays uncapped, every other variable is
    capped at its weight.

    Args:
        nvars (int)
        denominators (iterable of LinearForm)
        weights (sequence of int): largest exponent needed per variable
    """
    pivots = {form.pivot() for form in denominators}
    return tuple(None if i in pivots else weights[i] for i in range(nvars))


def sum_rational_forms(forms):
    """
    Brings rational forms over their common denominator, sums the
    numerators and divides once per denominator factor.

    Returns:
        TruncatedSeries, the holomorphic total
    """
    forms = list(forms)
    if not forms:
        raise ValueError("no rational forms to sum")
    common = common_denominator(forms)
    total = None
    for rf in forms:
        remaining = list(rf.denominators)
        numerator = rf.numerator
        for form in common:
            if form in remaining:
                remaining.remove(form)
            else:
                numerator = numerator.mul_linear(form)
        total = numerator if total is None else total + numerator
    for form in common:
        total = divide_exact(total, form)
    return total


def dump_series(s):
    """
    Golden-file format: one "exponent-tuple : scalar" line per term, sorted
    by exponent.
    """
    lines = []
    for e in sorted(s.terms):
        c = s.terms[e]
        if isinstance(c, ExactScalar):
            text = format_exact(c)
        else:
            digits = max(15, int(s.ring.precision * 0.3))
            text = (f"{mpmath.nstr(c.real, digits)} "
                    f"{mpmath.nstr(c.imag, digits)}")
        lines.append(f"({', '.join(str(x) for x in e)}) : {text}")
    return "\n".join(lines) + "\n"


def load_series(text, ring, nvars, order):
    """Reads the text written by dump_series back into a series."""
    terms = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        head, _, value = line.partition(' : ')
        e = tuple(int(x) for x in head.strip().strip('()').split(',')
                  if x.strip())
        if ring.exact:
            terms[e] = parse_exact(value, ring.order)
        else:
            re, im = value.split()
            terms[e] = ring.ctx.mpc(ring.ctx.mpf(re), ring.ctx.mpf(im))
    return TruncatedSeries(ring, nvars, order, terms)
