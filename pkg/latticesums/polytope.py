"""
polytope

A module to rebuild the generating function from exponential integrals
over the convex polytopes P(m;y): half-space construction, vertex
enumeration with witnesses, the simple-polytope vertex formula and the
assembly of F~(t,y;Λ) as an independent check of the basis expansion
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import ceil, floor

import pandas as pd
import sympy
from tqdm import tqdm

from latticesums import lattice
from latticesums.errors import ArrangementError, DegenerateExponent, \
    NotSimple, VerificationFailure
from latticesums.genfun import generating_function, make_ring_for, _check_y
from latticesums.kernel import KernelParams, kernel_series, place
from latticesums.scalar import DEFAULT_PRECISION
from latticesums.series import LinearForm, RationalForm, TruncatedSeries, \
    exp_linear, invert_unit, sum_rational_forms

_DEGENERATE_TOLERANCE = 1e-20


def _solve(rows, rhs):
    # exact solution of rows * x = rhs, None when singular
    n = len(rows)
    if n == 0:
        return ()
    m = sympy.Matrix([[sympy.Rational(a.numerator, a.denominator) for a in r]
                      for r in rows])
    if m.det() == 0:
        return None
    b = sympy.Matrix([sympy.Rational(a.numerator, a.denominator)
                      for a in rhs])
    x = m.LUsolve(b)
    return tuple(Fraction(int(v.p), int(v.q)) for v in x)


def _det(rows):
    if not rows:
        return Fraction(1)
    m = sympy.Matrix([[sympy.Rational(a.numerator, a.denominator) for a in r]
                      for r in rows])
    d = m.det()
    return Fraction(int(d.p), int(d.q))


def _dot(u, v):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


@dataclass(frozen=True)
class HPolytope:
    """
    P(m;y) as an H-polytope in the coordinates x = (x_g) for g in L_0.

    Every functional f of the arrangement has an affine coordinate
    X_f(x) = grad_f . x + base_f, and the polytope is 0 <= X_f <= 1 for all
    f. The half-space (f, a) is (-1)^a X_f >= -a, its boundary X_f = a.

    Args:
        m (tuple of int): the label
        dimension (int): n = #Λ - r
        coordinates (dict): f -> (grad tuple, base Fraction)
    """
    m: tuple
    dimension: int
    coordinates: dict = field(repr=False)

    def value(self, f, x):
        grad, base = self.coordinates[f]
        return _dot(grad, x) + base

    def half_space(self, f, a):
        """(normal, offset) with normal . x >= offset."""
        grad, base = self.coordinates[f]
        sign = -1 if a else 1
        return tuple(sign * g for g in grad), -a - sign * base

    @property
    def half_spaces(self):
        return {(f, a): self.half_space(f, a)
                for f in sorted(self.coordinates) for a in (0, 1)}

    def contains(self, x):
        return all(0 <= self.value(f, x) <= 1 for f in self.coordinates)

    def incident(self, x):
        """Keys (f, a) of the bounding hyperplanes through x."""
        return frozenset((f, a) for f in self.coordinates for a in (0, 1)
                         if self.value(f, x) == a)


@dataclass(frozen=True)
class VertexWitness:
    """
    A vertex p(m;y;W) of P(m;y) with its witness W = (B, A): the point is
    cut out by X_h = a_h for the functionals h outside the basis B.
    """
    basis: object
    assignment: tuple
    point: tuple
    incident: frozenset

    @property
    def hyperplanes(self):
        return tuple(self.assignment)


@dataclass(frozen=True)
class PolytopeSetup:
    """
    The data of P(m;y) shared by every label m: the reference basis B_0
    (first basis in enumeration order), the complement L_0 and the
    pairings <g, f^{B_0}>.
    """
    arr: object
    y: tuple
    basis: object
    free: tuple
    pairings: dict = field(repr=False)

    @classmethod
    def build(cls, arr, y):
        """Chooses the first basis and its free functionals for target y."""
        y = tuple(Fraction(v) for v in y)
        if len(y) != arr.rank:
            raise ArrangementError(
                f"y has {len(y)} entries, expected {arr.rank}")
        basis = arr.bases[0]
        free = tuple(g for g in range(len(arr)) if g not in basis.members)
        pairings = {g: tuple(lattice.inner(arr[g].direction, d)
                             for d in basis.dual) for g in free}
        return cls(arr, y, basis, free, pairings)

    @property
    def dimension(self):
        return len(self.free)

    def level(self, m, i):
        """<y+m, f^{B_0}> for the i-th member of B_0."""
        v = tuple(a + b for a, b in zip(self.y, m))
        return lattice.inner(v, self.basis.dual[i])

    def polytope(self, m):
        """The polytope P(m) in the coordinates of the free functionals."""
        n = self.dimension
        coordinates = {}
        for i, g in enumerate(self.free):
            grad = [Fraction(0)] * n
            grad[i] = Fraction(1)
            coordinates[g] = (tuple(grad), Fraction(0))
        for i, f in enumerate(self.basis.members):
            grad = tuple(-self.pairings[g][i] for g in self.free)
            coordinates[f] = (grad, self.level(m, i))
        return HPolytope(tuple(m), n, coordinates)

    def t_star(self):
        """
        t*_g = T_g - sum_{f in B_0} <g, f^{B_0}> T_f as rational vectors
        over T_f = t_f - 2 pi i c_f, one per g in L_0.
        """
        out = []
        for g in self.free:
            v = [Fraction(0)] * len(self.arr)
            v[g] = Fraction(1)
            for i, f in enumerate(self.basis.members):
                v[f] -= self.pairings[g][i]
            out.append(tuple(v))
        return out


def enumerate_m(setup, progress=False):
    """
    The labels m in Z^r with P(m;y) nonempty, in lexicographic order.

    Each <y+m, f^{B_0}> must meet the range of sum_g x_g <g, f^{B_0}> over
    the unit cube widened by one; the labels inside that window are kept
    when their polytope has a vertex.
    """
    arr = setup.arr
    ranges = []
    for i in range(arr.rank):
        column = [setup.pairings[g][i] for g in setup.free]
        low = sum((a for a in column if a < 0), Fraction(0))
        high = sum((a for a in column if a > 0), Fraction(0)) + 1
        ranges.append((low, high))
    # m = sum_f s_f f - y with s_f in its range
    box = []
    for j in range(arr.rank):
        low = high = -setup.y[j]
        for (lo, hi), f in zip(ranges, setup.basis.members):
            d = arr[f].direction[j]
            low += min(lo * d, hi * d)
            high += max(lo * d, hi * d)
        box.append(range(floor(low), ceil(high) + 1))
    out = []
    for m in tqdm(list(product(*box)), disable=not progress,
                  desc="polytope labels"):
        if not all(lo <= setup.level(m, i) <= hi
                   for i, (lo, hi) in enumerate(ranges)):
            continue
        if vertices(setup.polytope(m), setup):
            out.append(m)
    return out


def vertices(P, setup):
    """
    All vertices of P with their witnesses: for every basis B and every
    A in {0,1}^(Λ∖B), the solution of X_h = a_h (h not in B) is a vertex
    iff 0 <= X_f <= 1 at it for every f in B.

    Returns:
        list of VertexWitness
    """
    arr = setup.arr
    out = []
    for basis in arr.bases:
        outside = [h for h in range(len(arr)) if h not in basis.members]
        for a in product((0, 1), repeat=len(outside)):
            rows, rhs = [], []
            for h, ah in zip(outside, a):
                grad, base = P.coordinates[h]
                rows.append(grad)
                rhs.append(ah - base)
            x = _solve(rows, rhs)
            if x is None:
                raise VerificationFailure(
                    f"basis {basis.members} gives a singular vertex system")
            if all(0 <= P.value(f, x) <= 1 for f in basis.members):
                out.append(VertexWitness(basis, tuple(zip(outside, a)), x,
                                         P.incident(x)))
    return out


def brute_force_vertices(P):
    """
    Vertices by the generic H-to-V conversion: every n-subset of the
    bounding hyperplanes with a unique feasible intersection point.

    Returns:
        sorted list of points
    """
    keys = sorted(P.half_spaces)
    found = set()
    for subset in combinations(keys, P.dimension):
        rows, rhs = [], []
        for f, a in subset:
            grad, base = P.coordinates[f]
            rows.append(grad)
            rhs.append(a - base)
        x = _solve(rows, rhs)
        if x is not None and P.contains(x):
            found.add(x)
    return sorted(found)


def is_simple(P, verts):
    """True iff every vertex lies on exactly dim P bounding hyperplanes."""
    return all(len(w.incident) == P.dimension for w in verts)


def _adjacent(verts, n):
    edges = {}
    for i, w in enumerate(verts):
        edges[i] = [j for j, v in enumerate(verts)
                    if j != i and len(w.incident & v.incident) == n - 1]
    return edges


def exp_integral_simple(P, verts, a, ring):
    """
    int_P e^(a.x) dx by the vertex formula
    sum_k |det(p_k - p_j)_{j in E_k}| e^(a.p_k) / prod_j a.(p_k - p_j),
    with E_k the neighbours of p_k along edges.

    Args:
        P (HPolytope): simple
        verts (list of VertexWitness)
        a (sequence): complex exponents in a numeric ring; in an exact
            ring, rationals q with a = 2 pi i q
        ring (ExactRing or NumericRing)

    Raises:
        NotSimple, DegenerateExponent
    """
    if not is_simple(P, verts):
        raise NotSimple(f"P{P.m} is not simple")
    n = P.dimension
    edges = _adjacent(verts, n)
    total = ring.zero()
    for k, w in enumerate(verts):
        diffs = [tuple(x - y for x, y in zip(w.point, verts[j].point))
                 for j in edges[k]]
        if len(diffs) != n:
            raise NotSimple(f"vertex {w.point} has {len(diffs)} edges")
        volume = abs(_det([list(col) for col in zip(*diffs)])) if n else \
            Fraction(1)
        if ring.exact:
            qs = [Fraction(x) for x in a]
            term = ring.exp_two_pi_i(_dot(qs, w.point))
            for d in diffs:
                s = _dot(qs, d)
                if s == 0:
                    raise DegenerateExponent(
                        f"exponent vanishes along the edge {d}")
                term = term * ring.inverse(ring.two_pi_i() *
                                           ring.from_rational(s))
        else:
            avec = [ring.from_rational(x) for x in a]
            ap = sum((x * ring.from_rational(p) for x, p in
                      zip(avec, w.point)), ring.zero())
            term = ring.ctx.exp(ap)
            for d in diffs:
                s = sum((x * ring.from_rational(y) for x, y in
                         zip(avec, d)), ring.zero())
                if ring.magnitude(s) < _DEGENERATE_TOLERANCE:
                    raise DegenerateExponent(
                        f"exponent vanishes along the edge {d}")
                term = term / s
        total = total + term * ring.from_rational(volume)
    return total


def _t_vector(arr, key):
    v = [Fraction(0)] * len(arr)
    v[key] = Fraction(1)
    return v


def expected_cramer_form(setup, basis, h):
    """
    K_h = T_h - sum_{f in B} <h, f^B> T_f as a rational vector over T.
    """
    v = _t_vector(setup.arr, h)
    for f, d in zip(basis.members, basis.dual):
        v[f] -= lattice.inner(setup.arr[h].direction, d)
    return tuple(v)


def cramer_forms(P, w, setup):
    """
    det U and the forms kappa_h = (U^-T t*)_h of a vertex, U having the
    normals of the hyperplanes X_h = a_h as rows. Checks |det U| against
    #(Z^r/<B>)/#(Z^r/<B_0>) and kappa_h against (-1)^(a_h) K_h.

    Returns:
        (det U, {h: rational vector over T})

    Raises:
        VerificationFailure
    """
    rows = [P.half_space(h, a)[0] for h, a in w.assignment]
    det = _det(rows)
    ratio = Fraction(w.basis.index, setup.basis.index)
    if abs(det) != ratio:
        raise VerificationFailure(
            f"|det U| = {abs(det)} differs from the index ratio {ratio}")
    n = P.dimension
    forms = {}
    if n:
        u = sympy.Matrix([[sympy.Rational(a.numerator, a.denominator)
                           for a in r] for r in rows])
        inv_t = u.T.inv()
        stars = setup.t_star()
        for i, (h, a) in enumerate(w.assignment):
            v = [Fraction(0)] * len(setup.arr)
            for j in range(n):
                c = inv_t[i, j]
                c = Fraction(int(c.p), int(c.q))
                if c:
                    for f, x in enumerate(stars[j]):
                        v[f] += c * x
            expected = expected_cramer_form(setup, w.basis, h)
            if a:
                expected = tuple(-x for x in expected)
            if tuple(v) != expected:
                raise VerificationFailure(
                    f"Cramer form of {setup.arr[h].name} at {w.point} does "
                    f"not match")
            forms[h] = tuple(v)
    return det, forms


def vertex_exponent(P, w, setup):
    """
    sum_{f in B_0} <y+m, f^{B_0}> T_f + t*.p as a rational vector over T,
    checked against sum_f X_f(p) T_f with X_h = a_h off the basis.

    Raises:
        VerificationFailure
    """
    arr = setup.arr
    v = [Fraction(0)] * len(arr)
    for i, f in enumerate(setup.basis.members):
        v[f] += setup.level(P.m, i)
    for x, star in zip(w.point, setup.t_star()):
        for f, c in enumerate(star):
            v[f] += x * c
    direct = [P.value(f, w.point) for f in range(len(arr))]
    for h, a in w.assignment:
        if direct[h] != a:
            raise VerificationFailure(f"vertex {w.point} is off X_h = a_h")
    if v != direct:
        raise VerificationFailure(
            f"exponent identity fails at vertex {w.point} of P{P.m}")
    return tuple(v)


def _constant_turns(arr, v, ring):
    # sum_f v_f c_f, the constant of the form is -2 pi i times it
    if arr.is_rational:
        return sum((x * arr[f].constant for f, x in enumerate(v) if x),
                   Fraction(0))
    total = ring.zero()
    for f, x in enumerate(v):
        if x:
            total = total + ring.from_rational(x) * \
                ring.from_rational(arr[f].constant)
    return total


def _linear_form(arr, v, ring):
    q = _constant_turns(arr, v, ring)
    if isinstance(q, Fraction):
        if q == 0:
            return LinearForm(v), True
        return LinearForm(v, -ring.two_pi_i() * ring.from_rational(q)), False
    size = max(abs(x) for x in v)
    if ring.magnitude(q) < _DEGENERATE_TOLERANCE * float(size):
        return LinearForm(v), True
    return LinearForm(v, -ring.two_pi_i() * q), False


def _exp_form(arr, v, ring, order):
    q = _constant_turns(arr, v, ring)
    if isinstance(q, Fraction):
        scale = ring.exp_two_pi_i(-q)
    else:
        scale = ring.ctx.exp(-ring.two_pi_i() * q)
    coefficients = {f: ring.from_rational(x) for f, x in enumerate(v) if x}
    return exp_linear(ring, len(arr), order, coefficients).scale(scale)


def vertex_term(P, w, setup, ring, order):
    """
    The contribution e^(exponent) / (|det U| prod_h (-kappa_h)) of one
    vertex, as a RationalForm whose numerator is known to order + d.
    """
    arr = setup.arr
    det, forms = cramer_forms(P, w, setup)
    exponent = vertex_exponent(P, w, setup)
    linear = [_linear_form(arr, tuple(-x for x in forms[h]), ring)
              for h, _ in w.assignment]
    d = sum(1 for _, degenerate in linear if degenerate)
    numerator = _exp_form(arr, exponent, ring, order + d)
    denominators = []
    for form, degenerate in linear:
        if degenerate:
            scale, normal = form.normalised()
            numerator = numerator.scale(Fraction(1) / scale)
            denominators.append(normal)
        else:
            numerator = numerator * invert_unit(form.series(ring, order + d))
    numerator = numerator.scale(Fraction(1) / abs(det))
    return RationalForm(numerator, denominators)


def kernel_prefactor(arr, ring, order):
    """prod_f t_f / (e^(t_f - 2 pi i c_f) - 1) as a series."""
    n = len(arr)
    out = TruncatedSeries.constant(ring, n, order, ring.one())
    for f in range(n):
        one = kernel_series(KernelParams(arr[f].constant, Fraction(0)),
                            order, ring)
        out = out * place(one, n, f)
    return out


def genfun_via_polytopes(arr, y, order=4, mode='exact',
                         precision=DEFAULT_PRECISION, phi=None,
                         progress=False):
    """
    F~(t,y;Λ): the kernel prefactor times (1/#(Z^r/<B_0>)) times the sum
    over labels m and vertices of the vertex terms.

    Args:
        arr (Arrangement)
        y (sequence of Fraction): off every wall
        order (int): K
        mode (str): 'exact' or 'numeric'

    Returns:
        TruncatedSeries

    Raises:
        NotSimple: y lies on a wall or a polytope is not simple
    """
    y = _check_y(arr, y, 'exact')
    if lattice.on_walls(y, arr):
        raise NotSimple(f"y = {y} lies on a wall; use nudge_off_walls")
    setup = PolytopeSetup.build(arr, y)
    ring = make_ring_for(arr, y, mode, precision, phi)
    forms = []
    for m in enumerate_m(setup, progress):
        P = setup.polytope(m)
        verts = vertices(P, setup)
        if not is_simple(P, verts):
            raise NotSimple(f"P{m} is not simple at y = {y}")
        for w in verts:
            forms.append(vertex_term(P, w, setup, ring, order))
    total = sum_rational_forms(forms)
    return (total * kernel_prefactor(arr, ring, order)).scale(
        Fraction(1, setup.basis.index))


def polytope_report(arr, y, order=4, mode='exact',
                    precision=DEFAULT_PRECISION):
    """
    Per-label vertex counts and simplicity, and the largest coefficient
    discrepancy between F~ and the basis expansion of F, at
    nudge_off_walls(y).

    Returns:
        dict with keys y, basis, polytopes (pd.DataFrame), max_discrepancy,
        equal
    """
    y = lattice.nudge_off_walls(_check_y(arr, y, 'exact'), arr)
    setup = PolytopeSetup.build(arr, y)
    rows = []
    for m in enumerate_m(setup):
        P = setup.polytope(m)
        verts = vertices(P, setup)
        rows.append({'m': m, 'vertices': len({w.point for w in verts}),
                     'brute_force': len(brute_force_vertices(P)),
                     'simple': is_simple(P, verts)})
    tilde = genfun_via_polytopes(arr, y, order, mode, precision)
    direct = generating_function(arr, y, order=order, mode=mode,
                                 precision=precision, excluded=())
    return {'y': y, 'basis': [arr[f].name for f in setup.basis.members],
            'polytopes': pd.DataFrame(rows),
            'max_discrepancy': tilde.max_discrepancy(direct),
            'equal': tilde.equals(direct)}
