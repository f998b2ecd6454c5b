"""Lattice zonotopes: Minkowski sums of integer segments [0, z_i].

The centered body Z - x (x the center) is cut out by its facet slabs
``|u . y| <= W_u / 2``, one per primitive facet normal ``u``, where
``W_u = sum |u . z_i|`` is the width of Z in direction ``u``. So the gauge is
a maximum of finitely many linear forms and everything stays rational.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from math import ceil, floor, prod

from . import linalg
from .errors import (BadIndexSet, BadParameters, DimensionMismatch, RankDeficient,
                     ZeroDirection)
from .lp import linprog


def _int_vector(v):
    out = []
    for x in v:
        if isinstance(x, int):
            out.append(x)
            continue
        f = Fraction(x)
        if f.denominator != 1:
            raise BadParameters(f"generator entry {x} is not an integer")
        out.append(int(f))
    return tuple(out)


def _generators(gens):
    if isinstance(gens, LatticeZonotope):
        return gens.generators
    gens = tuple(_int_vector(g) for g in gens)
    if not gens:
        raise BadParameters("at least one generator is required")
    if any(len(g) != len(gens[0]) for g in gens):
        raise DimensionMismatch("generators have different lengths")
    return gens


def cross_normal(vectors, n):
    """Primitive normal of the hyperplane spanned by ``n - 1`` integer vectors.

    Returns ``None`` if the vectors are dependent.
    """
    if n == 1:
        return (1,)
    rows = tuple(vectors)
    u = []
    for k in range(n):
        cols = [j for j in range(n) if j != k]
        u.append((-1) ** k * linalg.det(tuple(tuple(r[j] for j in cols) for r in rows)))
    if not any(u):
        return None
    return linalg.sign_normalized(linalg.primitive(u))


@dataclass(frozen=True)
class Facet:
    normal: tuple
    width: int


class LatticeZonotope:
    """Zonotope ``sum [0, z_i]`` with integer generators spanning R^n."""

    def __init__(self, generators):
        gens = _generators(generators)
        self.generators = gens
        self.m = len(gens)
        self.n = len(gens[0])
        if self.n < 1:
            raise BadParameters("dimension must be at least 1")
        if linalg.rank(gens) < self.n:
            raise RankDeficient("generators do not span the ambient space")

    def __repr__(self):
        return f"LatticeZonotope({[list(g) for g in self.generators]})"

    def __eq__(self, other):
        return isinstance(other, LatticeZonotope) and self.generators == other.generators

    def __hash__(self):
        return hash(self.generators)

    @cached_property
    def center(self):
        return tuple(Fraction(sum(g[k] for g in self.generators), 2) for k in range(self.n))

    @cached_property
    def facets(self):
        """Distinct facet normals (primitive, first nonzero entry positive) with widths."""
        seen = {}
        for sub in combinations(self.generators, self.n - 1):
            u = cross_normal(sub, self.n)
            if u is not None and u not in seen:
                seen[u] = width_in_direction(self, u)
        return tuple(Facet(u, w) for u, w in sorted(seen.items()))

    @cached_property
    def _box_normals(self):
        """Pick n independent facet normals giving the smallest enumeration box.

        Returns ``(rows, widths, V, L)`` with ``rows . V = L`` lower triangular.
        """
        best = None
        fs = self.facets
        for idx in combinations(range(len(fs)), self.n):
            rows = tuple(fs[i].normal for i in idx)
            d = abs(linalg.det(rows))
            if d == 0:
                continue
            cost = Fraction(prod(fs[i].width for i in idx), d)
            if best is None or cost < best[0]:
                best = (cost, idx)
        rows = tuple(fs[i].normal for i in best[1])
        widths = tuple(fs[i].width for i in best[1])
        H, W = linalg.hermite_normal_form(linalg.transpose(rows))
        return rows, widths, linalg.transpose(W), linalg.transpose(H)


def as_zonotope(Z):
    return Z if isinstance(Z, LatticeZonotope) else LatticeZonotope(Z)


def lgp_witness(generators):
    """First n-subset (0-based, lexicographic) whose determinant vanishes, or None."""
    gens = _generators(generators)
    n = len(gens[0])
    if len(gens) < n:
        raise BadParameters("fewer generators than the dimension")
    if linalg.rank(gens) < n:
        raise RankDeficient("generators do not span the ambient space")
    for idx in combinations(range(len(gens)), n):
        if linalg.det(tuple(gens[i] for i in idx)) == 0:
            return idx
    return None


def is_lgp(generators):
    return lgp_witness(generators) is None


def _check_point(Z, y):
    y = tuple(y)
    if len(y) != Z.n:
        raise DimensionMismatch(f"point has length {len(y)}, expected {Z.n}")
    return y


def gauge(Z, y):
    """Gauge of ``y`` for the centered body ``Z - x``: the least rho with y in rho (Z - x)."""
    Z = as_zonotope(Z)
    y = _check_point(Z, y)
    best = Fraction(0)
    for f in Z.facets:
        val = Fraction(2 * abs(linalg.dot(f.normal, y))) / f.width
        if val > best:
            best = val
    return best


def gauge_lp(Z, y):
    """Same gauge, via the LP  min rho  s.t.  y = sum c_i z_i,  2|c_i| <= rho."""
    Z = as_zonotope(Z)
    y = _check_point(Z, y)
    m = Z.m
    # variables: p_1..p_m, q_1..q_m (c = p - q), rho
    A_eq = [[g[k] for g in Z.generators] + [-g[k] for g in Z.generators] + [0]
            for k in range(Z.n)]
    A_ub = []
    for i in range(m):
        row = [0] * (2 * m + 1)
        row[i] = row[m + i] = 2
        row[-1] = -1
        A_ub.append(row)
    value, _ = linprog([0] * (2 * m) + [1], A_eq=A_eq, b_eq=list(y),
                       A_ub=A_ub, b_ub=[0] * m)
    return value


def width_in_direction(Z, v):
    """Width ``max_Z v.x - min_Z v.x = sum |v . z_i|``."""
    gens = _generators(Z)
    v = tuple(v)
    if len(v) != len(gens[0]):
        raise DimensionMismatch("direction has the wrong length")
    if not any(v):
        raise ZeroDirection("direction must be nonzero")
    return sum(abs(linalg.dot(v, g)) for g in gens)


@dataclass(frozen=True)
class WidthResult:
    value: int
    direction: tuple


def _width_key(v):
    return (sum(abs(x) for x in v), v)


def lattice_width(Z):
    """Lattice width with a witness direction.

    Every direction v with width at most W satisfies ``|z_i . v| <= W`` on any
    n independent generators, so v lies in a bounded box. We walk that box in
    triangular coordinates, keeping only partial sums that fit under the
    current best. Ties go to the smallest L1 norm, then lexicographic order,
    with the first nonzero entry positive.
    """
    Z = as_zonotope(Z)
    gens, n = Z.generators, Z.n
    best_sub, best_det = None, 0
    for idx in combinations(range(Z.m), n):
        d = abs(linalg.det(tuple(gens[i] for i in idx)))
        if d > best_det:
            best_sub, best_det = idx, d
    M = tuple(gens[i] for i in best_sub)
    # M^T rows -> H = W M^T upper triangular, so M W^T = H^T is lower triangular
    H, W = linalg.hermite_normal_form(linalg.transpose(M))
    L, U = linalg.transpose(H), linalg.transpose(W)

    best_v, best_w = None, None
    for j in range(n):
        e = tuple(int(i == j) for i in range(n))
        w = width_in_direction(Z, e)
        if best_w is None or (w, _width_key(e)) < (best_w, _width_key(best_v)):
            best_v, best_w = e, w

    k = [0] * n

    def walk(depth, used):
        nonlocal best_v, best_w
        if depth == n:
            if not any(k):
                return
            v = linalg.sign_normalized(linalg.matvec(U, k))
            w = width_in_direction(Z, v)
            if (w, _width_key(v)) < (best_w, _width_key(best_v)):
                best_v, best_w = v, w
            return
        row = L[depth]
        partial = sum(row[j] * k[j] for j in range(depth))
        piv = row[depth]
        room = best_w - used
        lo = ceil(Fraction(-room - partial, piv))
        hi = floor(Fraction(room - partial, piv))
        for q in range(lo, hi + 1):
            k[depth] = q
            walk(depth + 1, used + abs(partial + piv * q))
        k[depth] = 0

    walk(0, 0)
    return WidthResult(best_w, best_v)


def parallelepiped_volume(Z, I):
    """``|det(z_i : i in I)|`` for an n-subset I of 0-based generator indices."""
    gens = _generators(Z)
    n = len(gens[0])
    I = tuple(I)
    if len(I) != n or len(set(I)) != n or any(not 0 <= i < len(gens) for i in I):
        raise BadIndexSet(f"need {n} distinct indices in range, got {I}")
    return abs(linalg.det(tuple(gens[i] for i in I)))


def volume(Z):
    """Volume by dissection into the parallelepipeds over all n-subsets."""
    gens = _generators(Z)
    n = len(gens[0])
    return sum(parallelepiped_volume(gens, I) for I in combinations(range(len(gens)), n))


def vertices(Z):
    """Vertices of the centered body ``Z - x`` by brute force over sign vectors.

    Only meant for small m (tests and plotting).
    """
    Z = as_zonotope(Z)
    pts = set()
    for signs in product((-1, 1), repeat=Z.m):
        pts.add(tuple(Fraction(sum(s * g[k] for s, g in zip(signs, Z.generators)), 2)
                      for k in range(Z.n)))
    if Z.n == 2:
        return _hull_2d(sorted(pts))
    return sorted(pts)


def _hull_2d(pts):
    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def coset_points(Z, s, radius):
    """All integer p with ``gauge(s + p) <= radius`` (a superset filter, then exact check)."""
    Z = as_zonotope(Z)
    s = tuple(Fraction(x) for x in _check_point(Z, s))
    out = []
    for p in _box_walk(Z, s, lambda: radius):
        if gauge(Z, tuple(a + b for a, b in zip(s, p))) <= radius:
            out.append(p)
    return out


def _box_walk(Z, s, radius):
    """Integer points p with ``|u_k . (s + p)| <= radius() W_k / 2`` for the box normals.

    ``radius`` is a callable so the caller can shrink it while walking.
    """
    rows, widths, V, L = Z._box_normals
    n = Z.n
    c = [linalg.dot(u, s) for u in rows]
    q = [0] * n

    def walk(depth):
        if depth == n:
            yield linalg.matvec(V, q)
            return
        row = L[depth]
        partial = c[depth] + sum(row[j] * q[j] for j in range(depth))
        b = radius() * widths[depth] / 2
        piv = row[depth]
        lo = ceil((-b - partial) / piv)
        hi = floor((b - partial) / piv)
        for val in range(lo, hi + 1):
            q[depth] = val
            yield from walk(depth + 1)
        q[depth] = 0

    yield from walk(0)


def nearest_coset_point(Z, s):
    """Minimise ``gauge(s + p)`` over integer p.

    Returns ``(value, point)`` where ``point = s + p`` is the minimiser; ties go
    to the lexicographically smallest point. The search starts from the rounded
    point and shrinks its radius as better points turn up.
    """
    Z = as_zonotope(Z)
    s = tuple(Fraction(x) for x in _check_point(Z, s))
    seed = tuple(x + floor(Fraction(1, 2) - x) for x in s)
    best = [gauge(Z, seed), seed]
    for p in _box_walk(Z, s, lambda: best[0]):
        y = tuple(a + b for a, b in zip(s, p))
        g = gauge(Z, y)
        if (g, y) < tuple(best):
            best = [g, y]
    return best[0], best[1]
