"""Covering radius of lattice zonotopes with respect to Z^n.

All work is done on the centered body ``Z - x``; covering by lattice
translates does not care about translations of Z, so the covering radius is

    mu = max_t min_lambda g(t - lambda)

where g is the gauge of ``Z - x`` and lambda runs over Z^n. Witness points
are reported in these centered coordinates, reduced into [0, 1)^n.
"""

import heapq
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from math import floor, lcm

from . import linalg
from .errors import BadParameters, CrossCheckFailure, DimensionMismatch
from .zonotope import (LatticeZonotope, as_zonotope, coset_points, gauge,
                       lattice_width, nearest_coset_point)


@dataclass(frozen=True)
class CoveringResult:
    kind: str  # "exact" or "interval"
    lower: Fraction
    upper: Fraction
    witness: tuple
    budget_exceeded: bool = False

    @property
    def value(self):
        if self.kind != "exact":
            raise AttributeError("interval results have no single value")
        return self.lower

    def contains(self, q):
        return self.lower <= q <= self.upper


def covering_radius_1d(Z):
    """An interval of length l covers the line with integer translates at scale 1/l."""
    Z = as_zonotope(Z)
    if Z.n != 1:
        raise DimensionMismatch(f"expected a 1-dimensional zonotope, got n={Z.n}")
    length = sum(abs(g[0]) for g in Z.generators)
    v = Fraction(1, length)
    return CoveringResult("exact", v, v, (Fraction(1, 2),))


class _GaugeKernel:
    """Integer form of the gauge for a fixed zonotope.

    With ``omega_k = L / W_k`` (L the lcm of the facet widths) and a point
    ``t = N / D``, ``g(t - lam) = 2 G(N, D, lam) / (L D)`` where
    ``G = max_k omega_k |u_k . N - D u_k . lam|`` is an integer.
    """

    def __init__(self, Z):
        self.Z = Z
        self.normals = tuple(f.normal for f in Z.facets)
        widths = tuple(f.width for f in Z.facets)
        self.L = lcm(*widths)
        self.omega = tuple(self.L // w for w in widths)
        # half of the gauge's maximum on the cube corners, scaled: Gi = L G / 2
        self.Gi = max(max(w * abs(linalg.dot(u, s)) for u, w in zip(self.normals, self.omega))
                      for s in product((-1, 1), repeat=Z.n))

    def images(self, lam):
        return tuple(linalg.dot(u, lam) for u in self.normals)

    def scaled(self, t):
        D = lcm(*(Fraction(x).denominator for x in t))
        N = tuple(int(Fraction(x) * D) for x in t)
        return D, tuple(linalg.dot(u, N) for u in self.normals)

    def values(self, a, D, lams):
        om = self.omega
        return [max(w * abs(x - D * y) for w, x, y in zip(om, a, b)) for _, b in lams]


@dataclass(order=True)
class _Cell:
    key: tuple
    center: tuple = field(compare=False)
    depth: int = field(compare=False)
    lams: list = field(compare=False)
    F: int = field(compare=False)
    D: int = field(compare=False)
    r_int: int = field(compare=False)

    @property
    def ub(self):
        return -self.key[0]


class _Search:
    """Branch and bound over dyadic subcells of ``anchor + [0, 1)^n``.

    A cell of side h and center c satisfies ``|f(y) - f(c)| <= g(y - c) <= r``
    for y in the cell, where ``r = (h / 2) max_s g(s)`` over sign vectors s
    (the gauge is convex, so its max over the cube is at a corner). The
    lambda list of a cell holds every lattice point that can be the minimiser
    for some point of the cell; children filter their parent's list.
    """

    def __init__(self, Z, anchor=None):
        self.Z = Z
        self.K = _GaugeKernel(Z)
        n = Z.n
        self.anchor = tuple(Fraction(a) for a in anchor) if anchor else (Fraction(0),) * n
        c0 = tuple(a + Fraction(1, 2) for a in self.anchor)
        # f <= G / 2 everywhere, so f(y) + r covers every minimiser at the root
        G = Fraction(2 * self.K.Gi, self.K.L)
        pts = coset_points(Z, tuple(-x for x in c0), G)
        lams = sorted(pts)  # g is even, so g(p - c0) = g(c0 - p)
        self.root_lams = [(lam, self.K.images(lam)) for lam in lams]
        self.lower = Fraction(-1)
        self.witness = None
        self.heap = []
        self.cells = 0
        root = self._make(c0, 0, self.root_lams)
        self._offer(root)
        heapq.heappush(self.heap, root)

    def _make(self, c, depth, parent_lams):
        K = self.K
        D, a = K.scaled(c)
        vals = K.values(a, D, parent_lams)
        F = min(vals)
        # r in kernel units: (h/2) G L D / 2 = h D Gi / 2, h = 2^-depth
        r_int = K.Gi * D // (2 ** (depth + 1))
        lams = [lb for lb, v in zip(parent_lams, vals) if v <= F + 2 * r_int]
        ub = Fraction(2 * (F + r_int), K.L * D)
        self.cells += 1
        return _Cell((-ub, c), c, depth, lams, F, D, r_int)

    def _offer(self, cell):
        val = Fraction(2 * cell.F, self.K.L * cell.D)
        t = tuple(x - floor(x) for x in cell.center)
        if val > self.lower or (val == self.lower and t < self.witness):
            self.lower, self.witness = val, t

    def upper(self):
        return max(self.lower, self.heap[0].ub) if self.heap else self.lower

    def run(self, tol, max_cells=None, deadline=None):
        n = self.Z.n
        while self.heap:
            top = self.heap[0]
            if top.ub < self.lower:
                heapq.heappop(self.heap)
                continue
            if top.ub - self.lower <= tol:
                return False
            if (max_cells is not None and self.cells >= max_cells) or \
                    (deadline is not None and time.monotonic() > deadline):
                return True
            heapq.heappop(self.heap)
            q = Fraction(1, 2 ** (top.depth + 2))
            for signs in product((-1, 1), repeat=n):
                c = tuple(x + s * q for x, s in zip(top.center, signs))
                child = self._make(c, top.depth + 1, top.lams)
                self._offer(child)
                if child.ub >= self.lower:
                    heapq.heappush(self.heap, child)
        return False

    def survivors(self):
        return [c for c in self.heap if c.ub >= self.lower]


def certified_covering_bounds(Z, tol=Fraction(1, 100), anchor=None, max_cells=None,
                              time_budget=None):
    """Certified interval for mu(Z) of width at most ``tol``.

    ``anchor`` shifts the searched fundamental cell to ``anchor + [0, 1)^n``;
    the answer does not depend on it. When a budget runs out the best interval
    so far is returned with ``budget_exceeded`` set.
    """
    Z = as_zonotope(Z)
    tol = Fraction(tol)
    if tol <= 0:
        raise BadParameters("tolerance must be positive")
    deadline = time.monotonic() + time_budget if time_budget else None
    S = _Search(Z, anchor)
    flagged = S.run(tol, max_cells, deadline)
    return CoveringResult("interval", S.lower, S.upper(), S.witness, flagged)


def covering_radius_2d_exact(Z, coarse_tol=Fraction(1, 128)):
    """Exact covering radius of a planar lattice zonotope.

    f(t) = min_lambda g(t - lambda) is piecewise linear with pieces
    ``2 s u . (t - lambda) / W_u`` (s = +-1, u a facet normal). Its maximum
    is attained at a vertex of its graph: otherwise the maximiser set would
    contain a segment on which all active pieces change at the same rate,
    which a bounded periodic function cannot do without being constant, and
    no piece is constant. A vertex is where three pieces with independent
    gradients meet, so we solve every 3x3 system built from pieces that can
    be active in a cell where the maximum can live, and keep solutions with
    f(t) equal to the solved value.
    """
    Z = as_zonotope(Z)
    if Z.n != 2:
        raise DimensionMismatch(f"expected a 2-dimensional zonotope, got n={Z.n}")
    S = _Search(Z)
    S.run(Fraction(coarse_tol))
    K = S.K
    lb = S.lower
    best, best_t = lb, S.witness
    widths = tuple(f.width for f in Z.facets)
    for cell in S.survivors():
        c = cell.center
        D, a = K.scaled(c)
        # corners sit D * half = D / 2^(depth+1) kernel steps from the center
        step = D // 2 ** (cell.depth + 1)
        pieces = []
        for lam, b in cell.lams:
            vals = [w * (x - D * y) for w, x, y in zip(K.omega, a, b)]
            floor_g = max(abs(v) for v in vals) - cell.r_int
            for u, w, wv, v in zip(K.normals, widths, K.omega, vals):
                spread = wv * step * (abs(u[0]) + abs(u[1]))
                for sg in (1, -1):
                    if sg * v + spread >= floor_g:
                        pieces.append(((2 * sg * u[0], 2 * sg * u[1], -w),
                                       2 * sg * linalg.dot(u, lam)))
        # the cell is [(N - 1) / Dc, (N + 1) / Dc] coordinate-wise
        Dc = 2 ** (cell.depth + 1) * lcm(*(x.denominator for x in S.anchor))
        Nc = [int(x * Dc) for x in c]
        ub_n, ub_d = cell.ub.numerator, cell.ub.denominator
        for i1, i2 in combinations(range(len(pieces)), 2):
            (a, b, cc), p = pieces[i1]
            (d, e, f), q = pieces[i2]
            m1, m2, m3 = b * f - cc * e, a * f - cc * d, a * e - b * d
            n1, n2, n3 = p * f - cc * q, p * e - b * q, a * q - p * d
            for i3 in range(i2 + 1, len(pieces)):
                (g, h, i), r = pieces[i3]
                det = g * m1 - h * m2 + i * m3
                if det == 0:
                    continue
                dx = r * m1 - h * n1 + i * n2
                dy = g * n1 - r * m2 + i * n3
                dz = -g * n2 - h * n3 + r * m3
                if det < 0:
                    det, dx, dy, dz = -det, -dx, -dy, -dz
                # rho = dz / det must lie in [best, cell ub]
                if dz * best.denominator < best.numerator * det or dz * ub_d > ub_n * det:
                    continue
                if abs(Dc * dx - Nc[0] * det) > det or abs(Dc * dy - Nc[1] * det) > det:
                    continue
                t = (Fraction(dx, det), Fraction(dy, det))
                rho = Fraction(dz, det)
                D, av = K.scaled(t)
                F = min(K.values(av, D, cell.lams))
                if Fraction(2 * F, K.L * D) != rho:
                    continue
                tm = tuple(x - floor(x) for x in t)
                if rho > best or tm < best_t:
                    best, best_t = rho, tm
    upper = S.upper()
    if not lb <= best <= upper:
        raise CrossCheckFailure(f"exact value {best} outside certified [{lb}, {upper}]")
    return CoveringResult("exact", best, best, best_t)


def covering_radius(Z, tol=Fraction(1, 100), **kw):
    """Exact value for n <= 2, certified interval otherwise."""
    Z = as_zonotope(Z)
    if Z.n == 1:
        return covering_radius_1d(Z)
    if Z.n == 2:
        return covering_radius_2d_exact(Z)
    return certified_covering_bounds(Z, tol, **kw)


def min_distance_to_lattice(Z, t):
    """``min_lambda g(t - lambda)`` for the centered gauge."""
    Z = as_zonotope(Z)
    return nearest_coset_point(Z, tuple(Fraction(x) for x in t))[0]


@dataclass(frozen=True)
class FlatnessConfig:
    """Flatness surrogate ``Flt(n) = c n log2(n + 1)``.

    The logarithm is replaced by the rational upper approximation
    ``ceil(1024 log2(n + 1)) / 1024`` so the bound stays exact.
    """

    c: Fraction = Fraction(3)

    def __post_init__(self):
        if Fraction(self.c) <= 0:
            raise BadParameters("flatness constant must be positive")

    def flt(self, n):
        k = ((n + 1) ** 1024 - 1).bit_length()
        return Fraction(self.c) * n * Fraction(k, 1024)


@dataclass(frozen=True)
class BoundChain:
    width: int
    direction: tuple
    mu_lower: Fraction
    mu_upper_flatness: Fraction
    informative: bool
    flt_constant: Fraction


def flatness_bound_chain(Z, cfg=FlatnessConfig()):
    """Sandwich ``1/w <= mu <= Flt(n)/w``.

    ``informative`` says whether the flatness side beats the trivial bound 1
    (n independent generators already give a fundamental domain).
    """
    Z = as_zonotope(Z)
    w = lattice_width(Z)
    up = cfg.flt(Z.n) / w.value
    return BoundChain(w.value, w.direction, Fraction(1, w.value), up, up < 1, Fraction(cfg.c))


@dataclass(frozen=True)
class RestrictedMinimumResult:
    value: Fraction
    witness: tuple
    trivial: bool = False


def restricted_successive_minimum(Z, shift=None):
    """Least gauge over the coset ``shift + Z^n`` (default shift: the center of Z)."""
    Z = as_zonotope(Z)
    x = tuple(Fraction(v) for v in (shift if shift is not None else Z.center))
    if len(x) != Z.n:
        raise DimensionMismatch("shift has the wrong length")
    if all(v.denominator == 1 for v in x):
        return RestrictedMinimumResult(Fraction(0), (Fraction(0),) * Z.n, True)
    val, pt = nearest_coset_point(Z, x)
    return RestrictedMinimumResult(val, pt)


# catalogs of generator sets

def _signed_perms(n):
    for perm in permutations(range(n)):
        for signs in product((1, -1), repeat=n):
            yield perm, signs


def canonical_form(generators):
    """Representative of a generator set up to generator signs and order and
    signed coordinate permutations."""
    gens = [tuple(g) for g in generators]
    n = len(gens[0])
    best = None
    for perm, signs in _signed_perms(n):
        img = sorted(linalg.sign_normalized(tuple(s * g[p] for p, s in zip(perm, signs)))
                     for g in gens)
        img = tuple(img)
        if best is None or img < best:
            best = img
    return best


def lgp_catalog(n, m, bound):
    """Canonical LGP sets of m integer vectors in [-bound, bound]^n, lexicographic."""
    if n < 1 or m < n or bound < 1:
        raise BadParameters("need n >= 1, m >= n, bound >= 1")
    vecs = sorted(v for v in product(range(-bound, bound + 1), repeat=n)
                  if any(v) and linalg.sign_normalized(v) == v)
    out = []
    for combo in combinations(vecs, m):
        if any(linalg.det(sub) == 0 for sub in combinations(combo, n)):
            continue
        if canonical_form(combo) == combo:
            out.append(combo)
    return out


@dataclass(frozen=True)
class ScanRecord:
    generators: tuple
    n: int
    m: int
    result: CoveringResult
    bound: Fraction
    margin: Fraction
    violation: bool

    def to_json(self):
        from .io import frac
        r = self.result
        d = {"generators": [list(g) for g in self.generators], "n": self.n, "m": self.m}
        if r.kind == "exact":
            d["mu"] = frac(r.value)
        else:
            d["interval"] = [frac(r.lower), frac(r.upper)]
        d.update(bound=frac(self.bound), margin=frac(self.margin), violation=self.violation)
        return d


def _scan_one(args):
    gens, tol = args
    Z = LatticeZonotope(gens)
    res = covering_radius(Z, tol)
    bound = Fraction(Z.n, Z.m)
    margin = bound - res.upper
    return ScanRecord(tuple(gens), Z.n, Z.m, res, bound, margin, res.lower > bound)


def scan_conjecture_mu(catalog, tol=Fraction(1, 50), report_path=None, threads=1):
    """Compare mu(Z) with n/m on every set of the catalog; report only.

    A violation means the certified lower bound exceeds n/m. Records come
    back in catalog order whatever the thread count, and are appended to
    ``report_path`` as JSON lines when given.
    """
    jobs = [(tuple(tuple(g) for g in gens), tol) for gens in catalog]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(threads) as ex:
            records = list(ex.map(_scan_one, jobs, chunksize=8))
    else:
        records = [_scan_one(j) for j in jobs]
    if report_path:
        with open(report_path, "a") as fh:
            for rec in records:
                fh.write(json.dumps(rec.to_json(), sort_keys=True) + "\n")
    return records
