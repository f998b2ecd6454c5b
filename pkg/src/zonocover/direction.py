"""Direction vectors and the lattice data attached to them.

A coordinate of a direction is a :class:`FormalReal`: a rational combination
``q_0 + q_1 xi_1 + ... + q_d xi_d`` of 1 and d abstract symbols that are
assumed linearly independent over Q. Integer relations among coordinates are
then plain rational linear algebra on the coefficient matrix.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations

from . import linalg
from .errors import (CrossCheckFailure, DegenerateDimension, LengthMismatch,
                     ZeroCoordinate, ZeroDirection)
from .zonotope import LatticeZonotope


class FormalReal:
    """Exact real number ``coeffs[0] + sum coeffs[k] * xi_k``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = tuple(Fraction(c) for c in coeffs)
        if not self.coeffs:
            raise ValueError("a FormalReal needs at least the rational coordinate")

    @classmethod
    def rational(cls, q, symbols=0):
        return cls((q,) + (0,) * symbols)

    @classmethod
    def symbol(cls, k, symbols):
        """The basis symbol xi_k (1-based) in a basis of ``symbols`` symbols."""
        return cls(tuple(int(j == k) for j in range(symbols + 1)))

    @property
    def symbols(self):
        return len(self.coeffs) - 1

    def is_rational(self):
        return not any(self.coeffs[1:])

    def is_zero(self):
        return not any(self.coeffs)

    def _coerce(self, other):
        if isinstance(other, FormalReal):
            if other.symbols != self.symbols:
                raise LengthMismatch("FormalReals use different symbol bases")
            return other
        return FormalReal.rational(other, self.symbols)

    def __add__(self, other):
        other = self._coerce(other)
        return FormalReal(a + b for a, b in zip(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return FormalReal(-a for a in self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, q):
        q = Fraction(q)
        return FormalReal(a * q for a in self.coeffs)

    __rmul__ = __mul__

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"FormalReal({[str(c) for c in self.coeffs]})"


def as_direction(alpha):
    """Normalise a sequence of rationals and/or FormalReals to a common symbol basis."""
    alpha = list(alpha)
    d = max((a.symbols for a in alpha if isinstance(a, FormalReal)), default=0)
    out = []
    for a in alpha:
        if isinstance(a, FormalReal):
            out.append(FormalReal(a.coeffs + (0,) * (d - a.symbols)))
        else:
            out.append(FormalReal.rational(a, d))
    return tuple(out)


def coefficient_matrix(alpha):
    """The m x (d+1) matrix whose row i holds the coefficients of alpha_i."""
    return tuple(a.coeffs for a in as_direction(alpha))


def dim_q(alpha):
    """Dimension of the Q-span of the coordinates."""
    C = coefficient_matrix(alpha)
    return linalg.rank(C) if C else 0


@dataclass(frozen=True)
class DirectionSystem:
    """A direction together with its kernel lattice data.

    ``A`` holds a basis of the integer vectors orthogonal to alpha (HNF, n rows),
    ``completion`` is a unimodular matrix whose first n rows are ``A``, and
    ``Aperp`` are the last m - n rows of its dual basis. ``dual_star`` holds the
    duals of the rows of ``A`` inside their span.
    """

    alpha: tuple
    A: tuple
    completion: tuple
    Aperp: tuple
    dual_star: tuple

    @property
    def m(self):
        return len(self.alpha)

    @property
    def n(self):
        return len(self.A)

    def project(self, u):
        """Coordinates of the projection of u onto V_alpha in the basis a_i*.

        Since ``a_i . a_j* = delta_ij`` these are just ``A u``.
        """
        u = tuple(u)
        if len(u) != self.m:
            raise LengthMismatch(f"vector has length {len(u)}, expected {self.m}")
        return linalg.matvec(self.A, tuple(Fraction(x) for x in u))


def build_direction_system(alpha):
    alpha = as_direction(alpha)
    m = len(alpha)
    if m == 0 or all(a.is_zero() for a in alpha):
        raise ZeroDirection("direction vector is zero")
    C = coefficient_matrix(alpha)
    A = linalg.integer_kernel_basis(linalg.transpose(C), m)
    full = linalg.extend_to_unimodular(A, m)
    dual_full = linalg.dual_basis(full)
    n = len(A)
    Aperp = linalg.to_int_matrix(dual_full[n:])
    star = linalg.dual_basis(A) if A else ()
    return DirectionSystem(alpha, A, full, Aperp, star)


def uniformity_witness(alpha):
    """First coordinate subset (0-based) of size dim_Q that is Q-dependent, or None."""
    alpha = as_direction(alpha)
    if not alpha or all(a.is_zero() for a in alpha):
        raise ZeroDirection("direction vector is zero")
    C = coefficient_matrix(alpha)
    d = linalg.rank(C)
    for idx in combinations(range(len(alpha)), d):
        if linalg.rank(tuple(C[i] for i in idx)) < d:
            return idx
    return None


def uniformity_witness_minors(ds):
    """The same test through the kernel basis: some n x n minor of A vanishes.

    Returns the complement of the first vanishing column set, which is a
    dependent coordinate subset of size m - n.
    """
    m, n = ds.m, ds.n
    if n == 0:
        return None
    for cols in combinations(range(m), n):
        if linalg.minor(ds.A, range(n), cols) == 0:
            return tuple(i for i in range(m) if i not in cols)
    return None


def is_rationally_uniform(alpha):
    """Whether every dim_Q coordinates are Q-independent.

    Both the direct rank test and the minor test are run; they must agree.
    """
    direct = uniformity_witness(alpha)
    via_minors = uniformity_witness_minors(build_direction_system(alpha))
    if (direct is None) != (via_minors is None):
        raise CrossCheckFailure(
            f"uniformity tests disagree: rank route {direct}, minor route {via_minors}")
    return direct is None


def zonotope_pair(ds, strict=True):
    """``(Z_alpha, Z_perp)``: zonotopes generated by the columns of A and of Aperp.

    When n = 0 or n = m one member lives in dimension 0. With ``strict`` this
    raises; otherwise that member is returned as None.
    """
    n, m = ds.n, ds.m
    if strict and not 0 < n < m:
        raise DegenerateDimension(f"kernel dimension {n} leaves an empty member (m={m})")
    za = LatticeZonotope(linalg.transpose(ds.A)) if n else None
    zp = LatticeZonotope(linalg.transpose(ds.Aperp)) if n < m else None
    return za, zp


def e_alpha_contains(ds, xi):
    """Whether ``l . xi`` is an integer for every l in the kernel lattice."""
    return all(c.denominator == 1 for c in ds.project(xi))


def e_alpha_decompose(ds, xi):
    """Split xi as ``sum c_i a_i* + w`` with w orthogonal to V_alpha.

    Returns ``(c, w)``; xi lies in E_alpha exactly when every c_i is an integer.
    """
    c = ds.project(xi)
    xi = tuple(Fraction(x) for x in xi)
    part = [sum(ci * s[k] for ci, s in zip(c, ds.dual_star)) for k in range(ds.m)]
    w = tuple(a - b for a, b in zip(xi, part))
    return c, w


def integer_direction_reduction(ds):
    """A nonzero integer vector beta orthogonal to V_alpha with no zero coordinate.

    Walks a basis of the integer vectors orthogonal to V_alpha, adding each
    basis vector with weight ``2 sum |beta_i|`` whenever it fixes a zero
    coordinate. The weight exceeds every existing entry, so nonzero entries
    stay nonzero.
    """
    if any(a.is_zero() for a in ds.alpha):
        i = next(i for i, a in enumerate(ds.alpha) if a.is_zero())
        raise ZeroCoordinate(f"coordinate {i} of the direction is zero")
    basis = linalg.integer_kernel_basis(ds.A, ds.m) if ds.A else linalg.identity(ds.m)
    beta = [0] * ds.m
    for b in basis:
        if any(x == 0 and y != 0 for x, y in zip(beta, b)):
            weight = 2 * sum(abs(x) for x in beta) or 1
            beta = [x + weight * y for x, y in zip(beta, b)]
    if any(x == 0 for x in beta):
        raise ZeroCoordinate("no integer vector orthogonal to the kernel avoids zero")
    return linalg.sign_normalized(linalg.primitive(beta))
