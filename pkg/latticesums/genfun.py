"""
genfun

A module to assemble the generating function F(t,y;Λ) of the lattice sums
S(k,y;Λ) as a sum over bases, extract its Taylor coefficients C(k,y;Λ) and
turn them into the special values S(k,y;Λ)
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
import time
import warnings

import mpmath
import pandas as pd

from latticesums import lattice, lookup
from latticesums.errors import ArrangementError, ExcludedPoint, \
    LatticeSumWarning, UnknownFamily
from latticesums.kernel import KernelParams, kernel_series, place
from latticesums.scalar import DEFAULT_PRECISION, ExactRing, NumericRing, \
    cyclotomic_order, format_exact
from latticesums.series import LinearForm, RationalForm, TruncatedSeries, \
    choose_caps, common_denominator, invert_unit, sum_rational_forms

_GUARD_DEGREES = 1
_DEGENERATE_TOLERANCE = 1e-20


@dataclass
class EvaluationReport:
    """
    Outcome of one evaluation of S(k,y;Λ).
    """
    value: object
    C: object
    mode: str
    order: int
    basis_count: int
    degenerate_divisions: int
    N_cyclotomic: int = None
    timing_ms: float = None

    def to_record(self):
        """The JSON result record."""
        return {'S': scalar_to_text(self.value),
                'C': scalar_to_text(self.C),
                'mode': self.mode, 'order': self.order,
                'N_cyclotomic': self.N_cyclotomic,
                'field': {'N': self.N_cyclotomic},
                'basis_count': self.basis_count,
                'degenerate_divisions': self.degenerate_divisions,
                'timing_ms': self.timing_ms}


def scalar_to_text(x, digits=None):
    """Exact values as text, numeric values as {'re', 'im'} strings."""
    if hasattr(x, 'terms'):
        return format_exact(x)
    digits = digits or 40
    return {'re': mpmath.nstr(x.real, digits), 'im': mpmath.nstr(x.imag,
                                                                 digits)}


def make_ring_for(arr, y, mode, precision=DEFAULT_PRECISION, phi=None):
    """
    The scalar ring of an evaluation: Q(zeta_N)(pi) with N from
    cyclotomic_order in exact mode, mpmath complex floats otherwise.
    """
    if mode == 'exact':
        if not arr.is_rational:
            raise ArrangementError(
                "exact mode needs rational constants; use mode='numeric'")
        return ExactRing(cyclotomic_order(arr, y, phi=phi))
    if mode == 'numeric':
        return NumericRing(precision)
    raise ArrangementError(f"mode must be 'exact' or 'numeric', got {mode!r}")


def _check_y(arr, y, mode):
    y = tuple(y)
    if len(y) != arr.rank:
        raise ArrangementError(f"y has {len(y)} entries, expected {arr.rank}")
    if mode == 'exact':
        if any(isinstance(v, float) for v in y):
            raise ArrangementError("exact mode needs a rational y")
        return tuple(Fraction(v) for v in y)
    return tuple(v if isinstance(v, float) else Fraction(v) for v in y)


def check_excluded(arr, y, subset=None):
    """
    Raises ExcludedPoint if y lies on 𝔥_{Λ∖{f}} + Z^r for an
    indispensable f in subset; only warns for float y.
    """
    found = lattice.excluded_functionals(y, arr, subset)
    if not found:
        return
    if any(isinstance(v, float) for v in y):
        warnings.warn(
            f"y is within {lattice._EPSILON} of an excluded hyperplane for "
            f"{arr[found[0]].name}", LatticeSumWarning, stacklevel=3)
        return
    raise ExcludedPoint(arr[found[0]].name,
                        lattice.describe_hyperplane(arr, found[0]))


@dataclass(frozen=True)
class GFactor:
    """
    The factor t_g / (t_g - 2 pi i c_g - sum_f (t_f - 2 pi i c_f)<g,f^B>)
    of a basis summand. For a degenerate factor, form is the normalised
    constant-free denominator and scale its normalising coefficient.
    """
    g: int
    form: LinearForm
    degenerate: bool
    scale: Fraction = Fraction(1)


def _constant_offset(arr, g, basis, ring):
    # c_g - sum_f c_f <g, f^B>, exactly when all constants are rational
    pairings = [lattice.inner(arr[g].direction, d) for d in basis.dual]
    if arr.is_rational:
        return sum((-arr[f].constant * a for f, a in
                    zip(basis.members, pairings)), arr[g].constant)
    value = ring.from_rational(arr[g].constant)
    for f, a in zip(basis.members, pairings):
        value = value - ring.from_rational(arr[f].constant) * \
            ring.from_rational(a)
    return value


def basis_factors(arr, basis, ring):
    """
    The g-factors of the summand of basis B, one per g not in B.
    """
    out = []
    n = len(arr)
    for g in range(n):
        if g in basis.members:
            continue
        coefficients = [Fraction(0)] * n
        coefficients[g] = Fraction(1)
        for f, d in zip(basis.members, basis.dual):
            coefficients[f] = -lattice.inner(arr[g].direction, d)
        offset = _constant_offset(arr, g, basis, ring)
        if isinstance(offset, Fraction):
            degenerate = offset == 0
        else:
            size = max(abs(a) for a in coefficients)
            degenerate = ring.magnitude(offset) < \
                _DEGENERATE_TOLERANCE * float(size)
        if degenerate:
            scale, form = LinearForm(coefficients).normalised()
            out.append(GFactor(g, form, True, scale))
        else:
            constant = -ring.two_pi_i() * (
                ring.from_rational(offset) if isinstance(offset, Fraction)
                else offset)
            out.append(GFactor(g, LinearForm(coefficients, constant), False))
    return out


def _g_product(arr, factors, ring, order, caps):
    n = len(arr)
    result = TruncatedSeries.constant(ring, n, order, ring.one(), caps)
    denominators = []
    for factor in factors:
        t_g = TruncatedSeries.variable(ring, n, order, factor.g, caps)
        if factor.degenerate:
            result = result * t_g.scale(Fraction(1) / factor.scale)
            denominators.append(factor.form)
        else:
            result = result * t_g * invert_unit(
                factor.form.series(ring, order, caps))
    return result, denominators


def kernel_product(arr, y, w, basis, phi, ring, order, caps=None):
    """
    prod_{f in B} F(t_f, {y+w}_{B,f}; c_f) as a series in all variables.
    """
    n = len(arr)
    result = TruncatedSeries.constant(ring, n, order, ring.one(), caps)
    for f in basis.members:
        x = lattice.frac_part(y, w, basis, f, phi)
        one = kernel_series(KernelParams(arr[f].constant, x), order, ring)
        result = result * place(one, n, f, caps)
    return result


def summand(arr, y, basis, w, phi, ring, order, caps=None, factors=None):
    """
    F_{B,w}: the g-factors of B times the kernel product at coset rep w,
    as a RationalForm whose numerator is known to order + d_B.
    """
    factors = factors if factors is not None else \
        basis_factors(arr, basis, ring)
    d = sum(1 for f in factors if f.degenerate)
    g_part, denominators = _g_product(arr, factors, ring, order + d, caps)
    k_part = kernel_product(arr, y, w, basis, phi, ring, order + d, caps)
    return RationalForm(g_part * k_part, denominators)


def basis_summand(arr, y, basis, phi, ring, order, caps=None, factors=None):
    """
    The B-summand of F: g-factors times the coset average of the kernel
    products, as a RationalForm.
    """
    factors = factors if factors is not None else \
        basis_factors(arr, basis, ring)
    d = sum(1 for f in factors if f.degenerate)
    g_part, denominators = _g_product(arr, factors, ring, order + d, caps)
    average = None
    for w in basis.coset_reps:
        k_part = kernel_product(arr, y, w, basis, phi, ring, order + d, caps)
        average = k_part if average is None else average + k_part
    if basis.index != 1:
        average = average.scale(Fraction(1, basis.index))
    return RationalForm(g_part * average, denominators)


def basis_summands(arr, y, phi, order, ring, caps=None):
    """
    Yields (B, w, F_{B,w}) for every basis B and coset representative w.
    F is the sum over B of the averages of these summands over w.
    """
    for basis, factors in plan(arr, ring):
        for w in basis.coset_reps:
            yield basis, w, summand(arr, y, basis, w, phi, ring, order, caps,
                                    factors)


def plan(arr, ring):
    """Pairs each basis with its kernel factors."""
    return [(basis, basis_factors(arr, basis, ring)) for basis in arr.bases]


def assemble(arr, y, phi, order, ring, caps=None, workers=None):
    """
    Sums the basis summands of F through total degree order.

    Returns:
        (TruncatedSeries, number of distinct degenerate denominators)
    """
    steps = plan(arr, ring)

    def build(step):
        basis, factors = step
        return basis_summand(arr, y, basis, phi, ring, order, caps, factors)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            forms = list(pool.map(build, steps))
    else:
        forms = [build(step) for step in steps]
    common = common_denominator(forms)
    return sum_rational_forms(forms), len(common)


def generating_function(arr, y, phi=None, order=4, mode='exact',
                        precision=DEFAULT_PRECISION, ring=None, caps=None,
                        workers=None, excluded=None):
    """
    The Taylor expansion of F(t,y;Λ) through total degree order.

    Args:
        arr (Arrangement)
        y (sequence of Fraction): rational in exact mode
        phi (GenericDirection): defaults to lattice.choose_phi(arr)
        order (int): K
        mode (str): 'exact' or 'numeric'
        precision (int): bits, numeric mode
        ring: overrides the ring derived from mode
        caps (tuple): optional per-variable cutoffs
        workers (int): threads for the basis summands
        excluded (iterable): indispensable functionals whose hyperplanes y
            must avoid, default all of them

    Returns:
        TruncatedSeries in one variable t_f per functional

    Raises:
        ExcludedPoint, NonDivisible
    """
    y = _check_y(arr, y, mode)
    phi = phi or lattice.choose_phi(arr)
    check_excluded(arr, y, excluded)
    ring = ring or make_ring_for(arr, y, mode, precision, phi)
    series, _ = assemble(arr, y, phi, order, ring, caps, workers)
    return series


def _weights(arr, k):
    k = tuple(int(x) for x in k)
    if len(k) != len(arr):
        raise ArrangementError(
            f"weight vector has {len(k)} entries, arrangement has {len(arr)}")
    if any(x < 0 for x in k):
        raise ArrangementError(f"weights must be nonnegative: {k}")
    return k


def partition(arr, k):
    """
    Λ_0, Λ_+ and Λ_1 of a weight vector, as lists of positions.
    """
    k = _weights(arr, k)
    zero = [i for i, x in enumerate(k) if x == 0]
    plus = [i for i, x in enumerate(k) if x > 0]
    one = [i for i, x in enumerate(k) if x == 1]
    return zero, plus, one


def prefactor(k, ring):
    """prod_f -(2 pi i)^(k_f) / k_f!."""
    out = ring.one()
    two_pi_i = ring.two_pi_i()
    for x in k:
        out = out * (-(two_pi_i ** x)) * ring.from_rational(
            Fraction(1, factorial(x)))
    return out


def evaluate(arr, y, k, mode='exact', precision=DEFAULT_PRECISION, phi=None,
             order=None, workers=None):
    """
    Computes S(k,y;Λ) and C(k,y;Λ) with the evaluation metadata.

    Args:
        arr (Arrangement)
        y (sequence): target point
        k (sequence of int): weights
        mode (str): 'exact' or 'numeric'
        precision (int): bits, numeric mode
        phi (GenericDirection)
        order (int): series order, default sum(k) + 1
        workers (int): threads for the basis summands

    Returns:
        EvaluationReport
    """
    start = time.perf_counter()
    k = _weights(arr, k)
    y = _check_y(arr, y, mode)
    phi = phi or lattice.choose_phi(arr)
    _, _, ones = partition(arr, k)
    check_excluded(arr, y, ones)
    ring = make_ring_for(arr, y, mode, precision, phi)
    order = order if order is not None else sum(k) + _GUARD_DEGREES
    if order < sum(k):
        raise ArrangementError(f"order {order} is below |k| = {sum(k)}")
    steps = plan(arr, ring)
    denominators = [f.form for _, fs in steps for f in fs if f.degenerate]
    caps = choose_caps(len(arr), denominators, k)
    series, divisions = assemble(arr, y, phi, order, ring, caps, workers)
    coef = series.coefficient(k)
    C = coef * ring.from_rational(
        Fraction(_multifactorial(k)))
    value = prefactor(k, ring) * C
    worst = max((sum(1 for f in fs if f.degenerate) for _, fs in steps),
                default=0)
    return EvaluationReport(
        value=value, C=C, mode=mode, order=order + worst,
        basis_count=len(steps), degenerate_divisions=divisions,
        N_cyclotomic=ring.order if ring.exact else None,
        timing_ms=round((time.perf_counter() - start) * 1000, 3))


def _multifactorial(k):
    out = 1
    for x in k:
        out *= factorial(x)
    return out


def coefficient(arr, y, k, mode='exact', **kwargs):
    """
    C(k,y;Λ) = k! times the coefficient of t^k in F(t,y;Λ).
    """
    return evaluate(arr, y, k, mode, **kwargs).C


def lattice_sum_value(arr, y, k, mode='exact', **kwargs):
    """
    S(k,y;Λ) = prod_f(-(2 pi i)^(k_f)/k_f!) C(k,y;Λ).

    Examples:
        lattice_sum_value(a1_alpha(1), (0,), (2, 2, 2)) -> pi^2/2 - 39/8
    """
    return evaluate(arr, y, k, mode, **kwargs).value


def coefficient_table(arr, y, ks, mode='exact', precision=DEFAULT_PRECISION,
                      phi=None, workers=None):
    """
    C and S for many weight vectors from a single series.

    Returns:
        pd.DataFrame with columns k, C, S, C_text, S_text
    """
    ks = [_weights(arr, k) for k in ks]
    y = _check_y(arr, y, mode)
    phi = phi or lattice.choose_phi(arr)
    ones = sorted({i for k in ks for i, x in enumerate(k) if x == 1})
    check_excluded(arr, y, ones)
    ring = make_ring_for(arr, y, mode, precision, phi)
    tops = [max(k[i] for k in ks) for i in range(len(arr))]
    order = max(sum(k) for k in ks) + _GUARD_DEGREES
    steps = plan(arr, ring)
    denominators = [f.form for _, fs in steps for f in fs if f.degenerate]
    caps = choose_caps(len(arr), denominators, tops)
    series, _ = assemble(arr, y, phi, order, ring, caps, workers)
    rows = []
    for k in ks:
        C = series.coefficient(k) * ring.from_rational(
            Fraction(_multifactorial(k)))
        S = prefactor(k, ring) * C
        rows.append({'k': k, 'C': C, 'S': S, 'C_text': scalar_to_text(C),
                     'S_text': scalar_to_text(S)})
    return pd.DataFrame(rows)


def zeta_from_S(arr, k, symmetry_factor=None, mode='exact', **kwargs):
    """
    The zeta value of a documented symmetric family, S(k,0;Λ) divided by
    the family's symmetry factor (2 for A1_alpha, 6 for A2 and A2_alpha).

    Args:
        arr (Arrangement)
        k (sequence of int): equal even weights
        symmetry_factor (int): checked against the family when given

    Raises:
        UnknownFamily: arrangement or weights outside the documented
            families
    """
    family = lookup.lookup_family(arr)
    if family is None:
        raise UnknownFamily("no documented symmetry factor for this "
                            "arrangement")
    name, factor = family
    k = _weights(arr, k)
    if len(set(k)) != 1 or k[0] == 0 or k[0] % 2:
        raise UnknownFamily(
            f"{name} needs equal positive even weights, got {k}")
    if symmetry_factor is not None and symmetry_factor != factor:
        raise UnknownFamily(
            f"{name} has symmetry factor {factor}, not {symmetry_factor}")
    value = lattice_sum_value(arr, (0,) * arr.rank, k, mode, **kwargs)
    return value * Fraction(1, factor) if mode == 'exact' else value / factor
