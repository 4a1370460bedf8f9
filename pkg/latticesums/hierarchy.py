"""
hierarchy

A module to apply the differential operators
D_g = (t_g - 2 pi i c_g)/t_g - (1/t_g) d/dy along g
to the generating function and to check the hierarchy identity
(prod_{g in Λ∖Λ'} D_g) F(t,y;Λ) = F(t',y;Λ')
"""
from dataclasses import dataclass
from fractions import Fraction

from latticesums import genfun, lattice
from latticesums.errors import ArrangementError, VerificationFailure
from latticesums.scalar import DEFAULT_PRECISION
from latticesums.series import LinearForm, RationalForm, TruncatedSeries, \
    _numeric_tolerance, divide_exact, sum_rational_forms


@dataclass(frozen=True)
class HierarchyStep:
    """
    One operator D_g: its constant part T_g / t_g with
    T_g = t_g - 2 pi i c_g, and the derivative along g, which on the
    summand of a basis B multiplies by sum_{f in B} <g, f^B> T_f.

    Args:
        arr (Arrangement)
        g (int): position of the removed functional
    """
    arr: object
    g: int

    @property
    def name(self):
        return self.arr[self.g].name

    def _form(self, weights, ring):
        coefficients = [Fraction(0)] * len(self.arr)
        constant = ring.zero()
        for f, a in weights.items():
            if not a:
                continue
            coefficients[f] += a
            constant = constant - ring.two_pi_i() * ring.from_rational(a) * \
                ring.from_rational(self.arr[f].constant)
        if not any(coefficients):
            return None
        return LinearForm(coefficients, constant)

    def constant_part(self, ring):
        """T_g as a linear form with constant."""
        return self._form({self.g: Fraction(1)}, ring)

    def gradient(self, basis, ring):
        """
        sum_{f in B} <g, f^B> T_f, the factor produced by differentiating
        the kernels of the B-summand along g.
        """
        weights = {f: lattice.inner(self.arr[self.g].direction, d)
                   for f, d in zip(basis.members, basis.dual)}
        return self._form(weights, ring)

    def divisor(self):
        """t_g."""
        return LinearForm(lattice_unit(len(self.arr), self.g))


def lattice_unit(n, i):
    """The i-th standard basis vector of Q^n."""
    v = [Fraction(0)] * n
    v[i] = Fraction(1)
    return tuple(v)


def _times(series, form, ring):
    if form is None:
        return series._like({})
    return series * form.series(ring, series.order, series.caps)


def _insert_variable(form, g):
    # lift a form of Λ∖{g} to the variables of Λ
    numerator = form.numerator
    out = TruncatedSeries(numerator.ring, numerator.nvars + 1,
                          numerator.order)
    out.terms = {e[:g] + (0,) + e[g:]: c for e, c in numerator.terms.items()}
    denominators = [LinearForm(d.coefficients[:g] + (Fraction(0),)
                               + d.coefficients[g:])
                    for d in form.denominators]
    return RationalForm(out, denominators)


def _sub_basis(sub, arr, basis):
    names = [arr[f].name for f in basis.members]
    members = tuple(sub.index_of(name) for name in names)
    return next(b for b in sub.bases if b.members == members)


def _definition(step, basis, form, ring):
    # (T_g F - d_g F) / t_g
    numerator = form.numerator
    left = _times(numerator, step.constant_part(ring), ring)
    right = _times(numerator, step.gradient(basis, ring), ring)
    return RationalForm(divide_exact(left - right, step.divisor()),
                        form.denominators)


def apply_Dg_summand(arr, y, basis, g, phi, ring, order, w=None):
    """
    D_g applied to the summand F_{B,w} (the coset average when w is None),
    computed from the operator's definition and checked against
    K(t,g) F_{B,w}: zero when g is in B, otherwise the summand of
    Λ∖{g} for the same basis, in which t_g no longer occurs.

    Returns:
        RationalForm in the variables of arr

    Raises:
        VerificationFailure: the two computations disagree
        NonDivisible: the numerator is not divisible by t_g
    """
    step = HierarchyStep(arr, g)
    if w is None:
        form = genfun.basis_summand(arr, y, basis, phi, ring, order + 1)
    else:
        form = genfun.summand(arr, y, basis, w, phi, ring, order + 1)
    result = _definition(step, basis, form, ring)
    if g in basis.members:
        if not result.numerator.equals(result.numerator._like({})):
            raise VerificationFailure(
                f"D_{step.name} does not annihilate the summand of "
                f"{[arr[f].name for f in basis.members]}")
        return result
    sub = arr.without([g])
    sub_basis = _sub_basis(sub, arr, basis)
    if w is None:
        expected = genfun.basis_summand(sub, y, sub_basis, phi, ring, order)
    else:
        expected = genfun.summand(sub, y, sub_basis, w, phi, ring, order)
    expected = _insert_variable(expected, g)
    if not result.equals(expected):
        raise VerificationFailure(
            f"D_{step.name} F_B differs from K(t,{step.name}) F_B for "
            f"B = {[arr[f].name for f in basis.members]}")
    return result


def apply_Dg(arr, y, g, order=4, mode='exact', precision=DEFAULT_PRECISION,
             phi=None, ring=None):
    """
    D_g F(t,y;Λ) as a series in the variables of Λ∖{g}.

    Args:
        arr (Arrangement)
        y (sequence of Fraction): off every wall
        g (int or str): the functional
        order (int): K

    Returns:
        TruncatedSeries
    """
    g = arr.index_of(g)
    y = genfun._check_y(arr, y, mode)
    phi = phi or lattice.choose_phi(arr)
    if not any(isinstance(v, float) for v in y):
        y = lattice.nudge_off_walls(y, arr, phi)
    ring = ring or genfun.make_ring_for(arr, y, mode, precision, phi)
    arr.without([g])  # raises RankDrop
    forms = [apply_Dg_summand(arr, y, basis, g, phi, ring, order)
             for basis in arr.bases]
    return _without_variable(sum_rational_forms(forms), g)


@dataclass
class HierarchyReport:
    """Outcome of check_hierarchy over every removed functional."""
    removed: list
    y: tuple
    order: int
    max_discrepancy: float
    equal: bool


def check_hierarchy(arr, sub, y, order=4, mode='exact',
                    precision=DEFAULT_PRECISION, phi=None):
    """
    Compares (prod_{g in Λ∖Λ'} D_g) F(t,y;Λ) with F(t',y;Λ') as truncated
    series. A y on a wall is replaced by nudge_off_walls(y).

    Args:
        arr (Arrangement)
        sub (Arrangement or iterable): Λ', or the functionals to remove
        y (sequence of Fraction)
        order (int): K

    Returns:
        HierarchyReport

    Raises:
        RankDrop: Λ' has rank below r
    """
    if isinstance(sub, lattice.Arrangement):
        missing = [n for n in sub.names if n not in arr.names]
        if missing:
            raise ArrangementError(f"{missing} are not functionals of Λ")
        removed = [i for i, n in enumerate(arr.names) if n not in sub.names]
    else:
        removed = sorted({arr.index_of(k) for k in sub})
    reduced = arr.without(removed)
    phi = phi or lattice.choose_phi(arr)
    y = genfun._check_y(arr, y, mode)
    if not any(isinstance(v, float) for v in y):
        y = lattice.nudge_off_walls(y, arr, phi)
    ring = genfun.make_ring_for(arr, y, mode, precision, phi)
    right = genfun.generating_function(reduced, y, phi=phi, order=order,
                                       mode=mode, precision=precision,
                                       ring=ring)
    if not removed:
        left = genfun.generating_function(arr, y, phi=phi, order=order,
                                          mode=mode, ring=ring)
    else:
        left = _apply_all(arr, y, removed, phi, ring, order)
    return HierarchyReport(removed=[arr[g].name for g in removed], y=y,
                           order=order,
                           max_discrepancy=left.max_discrepancy(right),
                           equal=left.equals(right))


def _apply_all(arr, y, removed, phi, ring, order):
    extra = len(removed)
    steps = [HierarchyStep(arr, g) for g in removed]
    forms = []
    for basis in arr.bases:
        # D_g annihilates the summands of bases containing g
        if any(g in basis.members for g in removed):
            continue
        form = genfun.basis_summand(arr, y, basis, phi, ring, order + extra)
        for step in steps:
            form = _definition(step, basis, form, ring)
        forms.append(form)
    total = sum_rational_forms(forms)
    for g in sorted(removed, reverse=True):
        total = _without_variable(total, g)
    return total


def _without_variable(series, g):
    # numeric rounding may leave negligible t_g terms behind
    if not series.ring.exact:
        stray = [e for e in series.terms if e[g]]
        worst = max((series.ring.magnitude(series.terms[e]) for e in stray),
                    default=0.0)
        if worst > _numeric_tolerance(series.ring) * max(1.0, series.norm()):
            raise VerificationFailure(
                f"t_{g} survives with coefficient {worst:.3e}")
        series = series._like({e: c for e, c in series.terms.items()
                               if not e[g]})
    return series.drop_variable(g)
