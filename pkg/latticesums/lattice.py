"""
lattice

A module to handle the integer-lattice side of a hyperplane arrangement:
bases and their dual vectors, coset representatives of Z^r / <B>, the
generic direction phi and the multi-dimensional fractional part
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from itertools import combinations, product
from math import floor, gcd, lcm
import json
import warnings

import sympy
from sympy.matrices.normalforms import smith_normal_decomp, \
    hermite_normal_form
from sympy.polys.domains import ZZ

from latticesums import parse_utils
from latticesums.errors import ArrangementError, LatticeSumWarning, RankDrop
from latticesums.scalar import GaussianRational, cyclotomic_field

_EPSILON = 1e-9


def inner(u, v):
    """Exact dot product."""
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def _rank(vectors):
    if not vectors:
        return 0
    return sympy.Matrix([list(v) for v in vectors]).rank()


@dataclass(frozen=True)
class Functional:
    """
    An affine functional f(v) = <direction, v> + constant.

    Args:
        direction (tuple of int): nonzero integer vector
        constant (Fraction, GaussianRational or complex)
        name (str): stable identifier, e.g. "f1"
    """
    direction: tuple
    constant: object = Fraction(0)
    name: str = None

    def __post_init__(self):
        direction = tuple(int(d) for d in self.direction)
        object.__setattr__(self, 'direction', direction)
        if not any(direction):
            raise ArrangementError(f"functional {self.name} has zero direction")
        c = self.constant
        if isinstance(c, (int, str)):
            c = Fraction(c)
        if isinstance(c, GaussianRational) and c.im == 0:
            c = c.re
        object.__setattr__(self, 'constant', c)

    @property
    def rational(self):
        return isinstance(self.constant, Fraction)

    def __call__(self, v):
        return inner(self.direction, v) + self.constant


@dataclass(frozen=True)
class GenericDirection:
    """The vector phi fixing the branch of the fractional parts."""
    phi: tuple


@dataclass(frozen=True)
class Basis:
    """
    An r-subset B of an arrangement whose directions form a basis.

    members are positions in the arrangement; dual[i] is f_i^B, the dual
    vector of members[i].
    """
    members: tuple
    matrix: tuple
    dual: tuple
    index: int
    coset_reps: tuple = field(repr=False)

    def position(self, f):
        return self.members.index(f)

    def dual_of(self, f):
        return self.dual[self.members.index(f)]

    def contains(self, v):
        """True iff the integer vector v lies in the span <B> over Z."""
        return all(inner(v, d).denominator == 1 for d in self.dual)

    def coordinates(self, v):
        """Coefficients of v on the directions of B."""
        return tuple(inner(v, d) for d in self.dual)


def make_basis(members, directions):
    """
    Builds a Basis: dual vectors are the columns of the inverse direction
    matrix, coset representatives come from the Smith normal form.

    Args:
        members (tuple of int): positions in the arrangement
        directions (list of tuple): the direction of each member

    Returns:
        Basis, or None when the directions are dependent
    """
    m = sympy.Matrix([list(d) for d in directions])
    det = m.det()
    if det == 0:
        return None
    inv = m.inv()
    r = m.shape[0]
    dual = tuple(
        tuple(Fraction(int(inv[i, j].p), int(inv[i, j].q)) for i in range(r))
        for j in range(r))
    # <B> is the column lattice of m^T; s * m^T * t = snf
    snf, s, _ = smith_normal_decomp(m.T, domain=ZZ)
    diag = [abs(int(snf[i, i])) for i in range(r)]
    s_inv = s.inv()
    reps = []
    for box in product(*(range(d) for d in diag)):
        v = s_inv * sympy.Matrix(box)
        reps.append(tuple(int(x) for x in v))
    reps.sort(key=lambda w: (sum(abs(x) for x in w), w))
    return Basis(members=tuple(members),
                 matrix=tuple(tuple(d) for d in directions),
                 dual=dual, index=abs(int(det)), coset_reps=tuple(reps))


@dataclass(frozen=True)
class Arrangement:
    """
    A finite ordered list of affine functionals on Z^r whose directions
    span R^r. Functionals are identified by position; names are labels.
    """
    rank: int
    functionals: tuple

    def __post_init__(self):
        fs = []
        for i, f in enumerate(self.functionals):
            if not isinstance(f, Functional):
                f = Functional(*f)
            if f.name is None:
                f = Functional(f.direction, f.constant, f"f{i + 1}")
            if len(f.direction) != self.rank:
                raise ArrangementError(
                    f"{f.name} has direction of length {len(f.direction)}, "
                    f"expected {self.rank}")
            fs.append(f)
        object.__setattr__(self, 'functionals', tuple(fs))
        if self.rank < 1:
            raise ArrangementError(f"rank must be positive: {self.rank}")
        if _rank([f.direction for f in fs]) != self.rank:
            raise ArrangementError(
                f"directions do not span a space of rank {self.rank}")

    def __len__(self):
        return len(self.functionals)

    def __getitem__(self, i):
        return self.functionals[i]

    def __iter__(self):
        return iter(self.functionals)

    @property
    def names(self):
        return [f.name for f in self.functionals]

    def index_of(self, key):
        """Position of a functional given by name or position."""
        if isinstance(key, int):
            if not 0 <= key < len(self):
                raise ArrangementError(f"no functional at position {key}")
            return key
        try:
            return self.names.index(key)
        except ValueError:
            raise ArrangementError(
                f"unknown functional {key!r}; have {self.names}") from None

    @property
    def is_rational(self):
        return all(f.rational for f in self.functionals)

    @cached_property
    def indispensable(self):
        """The functionals contained in every basis."""
        return indispensable_set(self)

    @cached_property
    def bases(self):
        return enumerate_bases(self)

    def without(self, keys):
        """
        Sub-arrangement with the given functionals removed.

        Raises:
            RankDrop: if the remaining directions lose rank
        """
        drop = {self.index_of(k) for k in keys}
        kept = tuple(f for i, f in enumerate(self.functionals)
                     if i not in drop)
        if _rank([f.direction for f in kept]) != self.rank:
            raise RankDrop(
                f"removing {sorted(self[i].name for i in drop)} leaves "
                f"rank below {self.rank}")
        return Arrangement(self.rank, kept)

    def permuted(self, order):
        """The same arrangement with functionals reordered by order."""
        return Arrangement(self.rank, tuple(self.functionals[i]
                                            for i in order))

    @classmethod
    def from_json(cls, data):
        """
        Reads {"rank": r, "functionals": [{"direction": [...],
        "constant": "p/q" | {"re": .., "im": ..}, "name": ..}]}.
        """
        if isinstance(data, str):
            data = json.loads(data)
        try:
            rank = int(data['rank'])
            raw = data['functionals']
        except (KeyError, TypeError, ValueError) as e:
            raise ArrangementError(f"malformed arrangement: {e}") from e
        fs = []
        for i, item in enumerate(raw):
            if 'direction' not in item:
                raise ArrangementError(f"functional {i} has no direction")
            fs.append(Functional(
                tuple(item['direction']),
                parse_utils.parse_constant(item.get('constant', 0)),
                item.get('name', f"f{i + 1}")))
        return cls(rank, tuple(fs))

    def to_json(self):
        """The JSON form read by from_json."""
        out = []
        for f in self.functionals:
            c = f.constant
            if isinstance(c, Fraction):
                c = str(c)
            elif isinstance(c, GaussianRational):
                c = {'re': str(c.re), 'im': str(c.im)}
            else:
                c = {'re': repr(complex(c).real), 'im': repr(complex(c).imag)}
            out.append({'name': f.name, 'direction': list(f.direction),
                        'constant': c})
        return {'rank': self.rank, 'functionals': out}


def enumerate_bases(arr):
    """
    Lists every r-subset of arr whose directions are linearly independent.

    Args:
        arr (Arrangement)

    Returns:
        list of Basis, ordered by member positions
    """
    out = []
    for members in combinations(range(len(arr)), arr.rank):
        b = make_basis(members, [arr[i].direction for i in members])
        if b is not None:
            out.append(b)
    return out


def indispensable_set(arr):
    """
    Returns the positions of the functionals whose removal drops the
    direction rank below r.
    """
    out = []
    for i in range(len(arr)):
        rest = [f.direction for j, f in enumerate(arr) if j != i]
        if _rank(rest) != arr.rank:
            out.append(i)
    return out


def choose_phi(arr):
    """
    Returns the first phi = (1, M, ..., M^(r-1)), M = 1, 2, ..., with
    <phi, f^B> != 0 for every basis B and f in B.
    """
    m = 1
    while True:
        phi = tuple(m ** j for j in range(arr.rank))
        if is_generic(phi, arr):
            return GenericDirection(phi)
        m += 1


def is_generic(phi, arr):
    """True iff phi pairs non-trivially with every dual vector."""
    phi = getattr(phi, 'phi', phi)
    return all(inner(phi, d) != 0 for b in arr.bases for d in b.dual)


def _vector_sum(y, w):
    return tuple(a + b for a, b in zip(y, w))


def frac_part(y, w, B, f, phi):
    """
    The multi-dimensional fractional part {y+w}_{B,f}.

    Args:
        y (sequence of Fraction or float)
        w (sequence of int)
        B (Basis)
        f (int): position of a member of B
        phi (GenericDirection)

    Returns:
        Fraction in [0, 1] for rational y, float otherwise
    """
    d = B.dual_of(f)
    a = inner(_vector_sum(y, w), d)
    sign = inner(getattr(phi, 'phi', phi), d)
    if isinstance(a, float):
        nearest = round(a)
        if abs(a - nearest) < _EPSILON:
            warnings.warn(
                f"<y+w, f^B> = {a} treated as the integer {nearest}",
                LatticeSumWarning, stacklevel=2)
            a = float(nearest)
        if sign > 0:
            return a - floor(a)
        return 1.0 - (-a - floor(-a))
    if sign > 0:
        return a - floor(a)
    return 1 - (-a - floor(-a))


def lattice_step(d):
    """
    g with <Z^r, d> = g Z for a rational vector d.
    """
    nums = [Fraction(x).numerator for x in d]
    dens = [Fraction(x).denominator for x in d]
    return Fraction(reduce(gcd, nums), reduce(lcm, dens))


def _in_subgroup(a, d):
    g = lattice_step(d)
    if isinstance(a, float):
        q = a / float(g)
        return abs(q - round(q)) < _EPSILON
    return (a / g).denominator == 1


def excluded_functionals(y, arr, subset=None):
    """
    Positions f in subset (default: the indispensable set) such that y lies
    on 𝔥_{Λ∖{f}} + Z^r.
    """
    tilde = set(arr.indispensable)
    subset = tilde if subset is None else \
        {arr.index_of(s) for s in subset} & tilde
    out = []
    for f in sorted(subset):
        basis = next(b for b in arr.bases if f in b.members)
        if _in_subgroup(inner(y, basis.dual_of(f)), basis.dual_of(f)):
            out.append(f)
    return out


def on_excluded_hyperplanes(y, arr, subset=None):
    """
    True iff y lies on a translated hyperplane 𝔥_{Λ∖{f}} + Z^r for some
    indispensable f in subset. Decided exactly for rational y: the test is
    <y, f^B> in <Z^r, f^B> = gZ.
    """
    found = excluded_functionals(y, arr, subset)
    if found and any(isinstance(v, float) for v in y):
        warnings.warn(f"y is within {_EPSILON} of an excluded hyperplane "
                      f"for {[arr[f].name for f in found]}",
                      LatticeSumWarning, stacklevel=2)
    return bool(found)


def describe_hyperplane(arr, f):
    rest = [g.name for i, g in enumerate(arr) if i != f]
    return f"h_{{{', '.join(rest)}}} + Z^{arr.rank}"


def on_walls(y, arr):
    """
    True iff y lies on some translated hyperplane 𝔥_R + Z^r with R a
    ridge, i.e. <y, f^B> in <Z^r, f^B> for some basis B and f in B.
    """
    for basis in arr.bases:
        for d in basis.dual:
            if _in_subgroup(inner(y, d), d):
                return True
    return False


def nudge_off_walls(y, arr, phi=None):
    """
    Returns y + c*phi with c = 1/2^j the largest such value that lies off
    every wall and leaves every fractional part affine in c, realising the
    one-sided limit along phi.

    Args:
        y (sequence of Fraction)
        arr (Arrangement)
        phi (GenericDirection): defaults to choose_phi(arr)

    Returns:
        tuple of Fraction
    """
    phi = phi or choose_phi(arr)
    y = tuple(Fraction(v) for v in y)
    if not on_walls(y, arr):
        return y
    c = Fraction(1)
    while True:
        c /= 2
        z = tuple(a + c * p for a, p in zip(y, phi.phi))
        if on_walls(z, arr):
            continue
        if all(frac_part(z, w, b, f, phi) - frac_part(y, w, b, f, phi) ==
               c * inner(phi.phi, b.dual_of(f))
               for b in arr.bases for w in b.coset_reps for f in b.members):
            return z


def coset_character_sum(B, lam):
    """
    (1/#(Z^r/<B>)) * sum over coset reps w of e^(2 pi i <w, lam>),
    evaluated exactly in a cyclotomic field.

    Args:
        B (Basis)
        lam (sequence of Fraction): must pair integrally with each
            direction of B

    Returns:
        Fraction, 1 if lam is integral and 0 otherwise
    """
    lam = tuple(Fraction(x) for x in lam)
    if any(inner(row, lam).denominator != 1 for row in B.matrix):
        raise ArrangementError(f"{lam} is not in the dual lattice of B")
    order = reduce(lcm, (x.denominator for x in lam), 1)
    ring = cyclotomic_field(order)
    total = ring.zero()
    for w in B.coset_reps:
        total = total + ring.root(inner(w, lam))
    return total.rational_value() / B.index


def in_lattice(v, generators):
    """
    Membership of an integer vector in the lattice spanned by the given
    vectors, decided with the Hermite normal form. The generators must
    span a lattice of full rank.
    """
    a = sympy.Matrix([list(g) for g in generators]).T
    h = hermite_normal_form(a)
    x = h.LUsolve(sympy.Matrix(list(v)))
    return all(c.is_integer for c in x)
