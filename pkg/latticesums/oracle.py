"""
oracle

A module to evaluate the truncated lattice sums Z(N;k,y;Λ) by brute force,
the definitional counterpart of the generating-function values
"""
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import ceil, fsum
import warnings

import numpy as np
import pandas as pd
import sympy
from sympy.matrices.normalforms import smith_normal_decomp
from sympy.polys.domains import ZZ
from tqdm import tqdm

from latticesums.errors import ArrangementError, LatticeSumError, \
    LatticeSumWarning
from latticesums.lattice import inner
from latticesums.scalar import DEFAULT_PRECISION, NumericRing, embed

_CHUNK_SIZE = 4096
_SHAPES = ('box', 'parallelotope')


@dataclass(frozen=True)
class TruncationWindow:
    """
    The region of a truncated sum: the coordinate box |v_j| <= N, or the
    parallelotope |Re f(v)| <= N over the members of a basis.

    Args:
        N (int): half-width, at least 1
        shape (str): 'box' or 'parallelotope'
        basis (Basis): required for the parallelotope
    """
    N: int
    shape: str = 'box'
    basis: object = None

    def __post_init__(self):
        if int(self.N) < 1:
            raise ArrangementError(f"window half-width must be >= 1: {self.N}")
        if self.shape not in _SHAPES:
            raise ArrangementError(f"unknown window shape {self.shape!r}")
        if self.shape == 'parallelotope' and self.basis is None:
            raise ArrangementError("a parallelotope window needs a basis")

    def bounds(self, arr):
        """Half-widths of a coordinate box containing the window."""
        if self.shape == 'box':
            return (self.N,) * arr.rank
        out = []
        for j in range(arr.rank):
            width = sum(abs(d[j]) * (self.N + abs(_real(arr[f].constant)))
                        for f, d in zip(self.basis.members, self.basis.dual))
            out.append(ceil(width))
        return tuple(out)

    def contains(self, arr, v):
        """True iff the lattice point v lies in the window."""
        if self.shape == 'box':
            return all(abs(x) <= self.N for x in v)
        return all(abs(inner(arr[f].direction, v) + _real(arr[f].constant))
                   <= self.N for f in self.basis.members)


def _real(c):
    if isinstance(c, Fraction):
        return c
    if hasattr(c, 're'):
        return c.re
    return complex(c).real


def _zero_system(arr, zero):
    # integer solutions of f(v) = 0 for f in Λ_0: (v0, kernel columns),
    # or None when the system has none
    if any(not arr[f].rational for f in zero):
        warnings.warn("non-rational constant in Λ_0: the constrained sum "
                      "is empty", LatticeSumWarning, stacklevel=3)
        return None
    r = arr.rank
    a = sympy.Matrix([list(arr[f].direction) for f in zero])
    b = sympy.Matrix([-sympy.Rational(arr[f].constant.numerator,
                                      arr[f].constant.denominator)
                      for f in zero])
    # s * a * t = d
    d, s, t = smith_normal_decomp(a, domain=ZZ)
    sb = s * b
    u = [0] * r
    rank = 0
    for i in range(min(d.shape)):
        if d[i, i] != 0:
            rank += 1
    for i in range(d.shape[0]):
        if i < rank:
            q = sb[i] / d[i, i]
            if not q.is_integer:
                return None
            u[i] = int(q)
        elif sb[i] != 0:
            return None
    v0 = t * sympy.Matrix(u)
    kernel = [tuple(int(x) for x in t[:, j]) for j in range(rank, r)]
    return tuple(int(x) for x in v0), kernel


def _weights(arr, k):
    k = tuple(int(x) for x in k)
    if len(k) != len(arr):
        raise ArrangementError(
            f"weight vector has {len(k)} entries, arrangement has {len(arr)}")
    return k


def constrained_points(arr, k, window):
    """
    The integer points v of the window with f(v) = 0 for f in Λ_0 and
    f(v) != 0 for f in Λ_+, in lexicographic order.

    Args:
        arr (Arrangement)
        k (sequence of int): weights; k_f = 0 puts f in Λ_0
        window (TruncationWindow)

    Returns:
        iterator of tuples of int
    """
    k = _weights(arr, k)
    zero = [i for i, x in enumerate(k) if x == 0]
    plus = [i for i, x in enumerate(k) if x > 0]
    bounds = window.bounds(arr)
    if not zero:
        candidates = product(*(range(-n, n + 1) for n in bounds))
    else:
        system = _zero_system(arr, zero)
        if system is None:
            return iter(())
        v0, kernel = system
        candidates = sorted(_affine_points(v0, kernel, bounds))
    return (v for v in candidates if window.contains(arr, v)
            and not any(_vanishes(arr[f], v) for f in plus))


def _vanishes(f, v):
    c = f.constant
    if hasattr(c, 're'):
        return c.im == 0 and inner(f.direction, v) + c.re == 0
    return inner(f.direction, v) + c == 0


def _affine_points(v0, kernel, bounds):
    r = len(v0)
    if not kernel:
        if all(abs(x) <= n for x, n in zip(v0, bounds)):
            yield v0
        return
    m = sympy.Matrix([list(c) for c in kernel]).T
    # left inverse of the kernel matrix bounds each parameter
    left = (m.T * m).inv() * m.T
    widths = []
    for i in range(len(kernel)):
        widths.append(int(sympy.ceiling(sum(
            abs(left[i, j]) * (bounds[j] + abs(v0[j])) for j in range(r)))))
    for lam in product(*(range(-w, w + 1) for w in widths)):
        v = tuple(v0[j] + sum(c[j] * x for c, x in zip(kernel, lam))
                  for j in range(r))
        if all(abs(x) <= n for x, n in zip(v, bounds)):
            yield v


def _chunks(iterable, size):
    chunk = []
    for item in iterable:
        chunk.append(item)
        if len(chunk) == size:
            yield chunk
            chunk = []
    if chunk:
        yield chunk


def truncated_sum(arr, k, y, window, precision=DEFAULT_PRECISION,
                  progress=False):
    """
    Z(N;k,y;Λ) = (-1)^#Λ_0 sum_v e^(2 pi i <y,v>) prod_{f in Λ_+} f(v)^(-k_f)
    over constrained_points, summed chunk by chunk with mpmath.fsum.

    Args:
        arr (Arrangement)
        k (sequence of int)
        y (sequence of Fraction or float)
        window (TruncationWindow or int): an int N means the box
        precision (int): bits; at most 53 selects the numpy path
        progress (bool): show a tqdm bar over chunks

    Returns:
        mpmath mpc
    """
    if not isinstance(window, TruncationWindow):
        window = TruncationWindow(int(window))
    k = _weights(arr, k)
    y = tuple(y)
    if len(y) != arr.rank:
        raise ArrangementError(f"y has {len(y)} entries, expected {arr.rank}")
    if precision <= 53:
        return _truncated_sum_numpy(arr, k, y, window, progress)
    ring = NumericRing(precision)
    ctx = ring.ctx
    sign = -1 if sum(1 for x in k if x == 0) % 2 else 1
    plus = [(arr[f], x) for f, x in enumerate(k) if x > 0]
    constants = {f.name: ring.from_rational(f.constant) for f, _ in plus}
    ys = [ring.from_rational(v if isinstance(v, float) else Fraction(v))
          for v in y]
    partials = []
    points = constrained_points(arr, k, window)
    for chunk in tqdm(_chunks(points, _CHUNK_SIZE), disable=not progress,
                      desc="truncated sum"):
        terms = []
        for v in chunk:
            term = ctx.expjpi(2 * ctx.fsum(a * x for a, x in zip(ys, v)))
            for f, x in plus:
                dot = sum(a * b for a, b in zip(f.direction, v))
                term = term / (dot + constants[f.name]) ** x
            terms.append(term)
        partials.append(ctx.fsum(terms))
    return sign * ctx.fsum(partials)


def _point_array(arr, k, window):
    zero = [i for i, x in enumerate(k) if x == 0]
    if zero or window.shape != 'box':
        pts = list(constrained_points(arr, k, window))
        return np.array(pts, dtype=np.int64).reshape(len(pts), arr.rank)
    axes = [np.arange(-window.N, window.N + 1, dtype=np.int64)] * arr.rank
    grid = np.stack(np.meshgrid(*axes, indexing='ij'), axis=-1)
    pts = grid.reshape(-1, arr.rank)
    mask = np.ones(len(pts), dtype=bool)
    for f, x in enumerate(k):
        if x > 0:
            values = pts @ np.array(arr[f].direction, dtype=np.int64)
            mask &= values + complex(_as_float(arr[f].constant)) != 0
    return pts[mask]


def _as_float(c):
    if isinstance(c, Fraction):
        return float(c)
    if hasattr(c, 're'):
        return complex(float(c.re), float(c.im))
    return complex(c)


def _truncated_sum_numpy(arr, k, y, window, progress):
    pts = _point_array(arr, k, window)
    sign = -1 if sum(1 for x in k if x == 0) % 2 else 1
    if len(pts) == 0:
        return NumericRing(53).zero()
    yv = np.array([float(v) for v in y])
    real, imag = [], []
    starts = range(0, len(pts), _CHUNK_SIZE)
    for start in tqdm(starts, disable=not progress, desc="truncated sum"):
        block = pts[start:start + _CHUNK_SIZE]
        terms = np.exp(2j * np.pi * (block @ yv))
        for f, x in enumerate(k):
            if x > 0:
                values = block @ np.array(arr[f].direction, dtype=np.float64)
                terms = terms / (values + _as_float(arr[f].constant)) ** x
        real.extend(terms.real.tolist())
        imag.extend(terms.imag.tolist())
    return NumericRing(53).ctx.mpc(sign * fsum(real), sign * fsum(imag))


def convergence_scan(arr, k, y, Ns, target=None, precision=DEFAULT_PRECISION,
                     shape='box', basis=None, progress=False):
    """
    Z(N) for an increasing list of N with successive differences.

    Args:
        arr (Arrangement)
        k (sequence of int)
        y (sequence)
        Ns (list of int): increasing
        target: optional exact or numeric limit value
        precision (int): bits
        shape (str): window shape
        basis (Basis): for the parallelotope

    Returns:
        pd.DataFrame with columns N, re, im, diff, status and, when a
        target is given, error and monotone
    """
    Ns = [int(n) for n in Ns]
    if any(b <= a for a, b in zip(Ns, Ns[1:])):
        raise ArrangementError(f"Ns must be increasing: {Ns}")
    goal = None if target is None else embed(target, precision)
    rows = []
    for n in tqdm(Ns, disable=not progress, desc="convergence scan"):
        try:
            z = truncated_sum(arr, k, y, TruncationWindow(n, shape, basis),
                              precision)
            rows.append({'N': n, 'value': z, 'status': 'ok'})
        except LatticeSumError as e:
            rows.append({'N': n, 'value': None, 'status': str(e)})
    out = []
    for i, row in enumerate(rows):
        z = row['value']
        record = {'N': row['N'],
                  're': float(z.real) if z is not None else np.nan,
                  'im': float(z.imag) if z is not None else np.nan,
                  'diff': np.nan, 'status': row['status']}
        if z is not None and i + 1 < len(rows) and rows[i + 1]['value'] \
                is not None:
            record['diff'] = float(abs(z - rows[i + 1]['value']))
        if goal is not None:
            error = float(abs(z - goal)) if z is not None else np.nan
            monotone = i == 0 or (out[-1]['monotone'] and
                                  error <= out[-1]['error'])
            record['error'] = error
            record['monotone'] = bool(monotone)
        out.append(record)
    return pd.DataFrame(out)
