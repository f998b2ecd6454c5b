"""Time-domain view of the same quantities: billiard motion in the unit cube,
view-obstruction thresholds, lonely runner gaps and the epsilon explorer.

For a straight line ``u0 + t alpha`` on the torus, the folded billiard path
meets the shrunken cube [eps, 1 - eps]^m exactly when some t has every
coordinate at distance at least eps from the integers. So the threshold is

    eps* = max_t min_i ||u0_i + t alpha_i||

with ||.|| the distance to the nearest integer.
"""

import json
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor, gcd, lcm

from . import linalg
from .covering import FlatnessConfig, covering_radius, lgp_catalog, restricted_successive_minimum
from .direction import FormalReal, as_direction, build_direction_system, zonotope_pair
from .errors import (BadParameters, CrossCheckFailure, DegenerateVelocities,
                     IrrationalDirection, LengthMismatch, NonPositiveVelocity,
                     ZeroCoordinate)
from .zonotope import LatticeZonotope, nearest_coset_point


def _dist(y):
    y = Fraction(y)
    return min(y - floor(y), ceil(y) - y)


def _tri(y):
    return 1 - abs(1 - Fraction(y) % 2)


def fold_position(u0, alpha, t):
    """Position at time t of the billiard ball started at u0 with velocity alpha."""
    if len(u0) != len(alpha):
        raise LengthMismatch("u0 and alpha differ in length")
    t = Fraction(t)
    return tuple(_tri(Fraction(u) + t * Fraction(a)) for u, a in zip(u0, alpha))


def _rational(x):
    if isinstance(x, FormalReal):
        if not x.is_rational():
            raise IrrationalDirection("direction has irrational components")
        return x.coeffs[0]
    return Fraction(x)


@dataclass(frozen=True)
class MotionInstance:
    u0: tuple
    alpha: tuple

    def __post_init__(self):
        if len(self.u0) != len(self.alpha):
            raise LengthMismatch("u0 and alpha differ in length")
        alpha = tuple(_rational(a) for a in self.alpha)
        if not alpha:
            raise BadParameters("empty instance")
        for i, a in enumerate(alpha):
            if a == 0:
                raise ZeroCoordinate(f"alpha[{i}] is zero")
        # the torus picture only sees u0 modulo 1
        u0 = tuple(Fraction(u) % 1 for u in self.u0)
        object.__setattr__(self, "u0", u0)
        object.__setattr__(self, "alpha", alpha)

    @property
    def m(self):
        return len(self.alpha)

    @property
    def period(self):
        """Least P > 0 with P alpha integral."""
        Q = lcm(*(a.denominator for a in self.alpha))
        return Fraction(Q, gcd(*(int(a * Q) for a in self.alpha)))


@dataclass(frozen=True)
class GapResult:
    epsilon_star: Fraction
    witness_t: Fraction
    active_indices: tuple
    degenerate: bool = False


def _min_dist(inst, t):
    return min(_dist(u + t * a) for u, a in zip(inst.u0, inst.alpha))


def _active(inst, t, eps):
    return tuple(i for i, (u, a) in enumerate(zip(inst.u0, inst.alpha)) if _dist(u + t * a) == eps)


def _candidate_families(U, A):
    """(C, B) pairs, B > 0, for candidate times t = (kQ - C) / B.

    The envelope min_i ||y_i(t)|| is a minimum of triangle waves, so a local
    maximum sits either on a peak of one wave (2 y_i in Z) or where two waves
    cross (y_i - y_j or y_i + y_j in Z). Waves with identical or opposite
    slopes never cross transversally and contribute nothing new.
    """
    fams = set()
    m = len(U)
    for i in range(m):
        fams.add((2 * U[i], 2 * A[i]))
        for j in range(i + 1, m):
            fams.add((U[i] - U[j], A[i] - A[j]))
            fams.add((U[i] + U[j], A[i] + A[j]))
    out = set()
    for C, B in fams:
        if B < 0:
            C, B = -C, -B
        if B:
            out.add((C, B))
    return sorted(out)


def obstruction_threshold_time_domain(inst):
    """Exact eps* over one period by scanning the complete candidate set."""
    if not isinstance(inst, MotionInstance):
        inst = MotionInstance(*inst)
    Q = lcm(*(x.denominator for x in inst.u0 + inst.alpha))
    U = [int(u * Q) for u in inst.u0]
    A = [int(a * Q) for a in inst.alpha]
    g = gcd(*A)
    # best value kept as num/den
    best_num, best_den, best_t = -1, 1, None
    for C, B in _candidate_families(U, A):
        M = Q * B
        k0 = -((-C) // Q)  # ceil(C / Q)
        k1 = -((-(C * g + B * Q)) // (Q * g)) - 1  # ceil(C/Q + B/g) - 1
        if k1 < k0:
            continue
        steps = [Q * a % M for a in A]
        res = [(u * B + (k0 * Q - C) * a) % M for u, a in zip(U, A)]
        for k in range(k0, k1 + 1):
            v = M
            for r in res:
                d = r if 2 * r <= M else M - r
                if d < v:
                    v = d
                    if v * best_den < best_num * M:
                        break
            c = v * best_den - best_num * M
            if c >= 0:
                t = Fraction(k * Q - C, B)
                if c > 0 or t < best_t:
                    best_num, best_den, best_t = v, M, t
            res = [(r + s) % M for r, s in zip(res, steps)]
    eps = Fraction(best_num, best_den)
    return GapResult(eps, best_t, _active(inst, best_t, eps))


def obstruction_threshold_zonotope(ds_or_alpha, u0):
    """eps* = (1 - min over Z^n of g(lam + A u0 - x)) / 2, g the centered gauge of Z_alpha.

    The witness time is not recovered from the lattice side and is None.
    """
    ds = ds_or_alpha if hasattr(ds_or_alpha, "A") else build_direction_system(ds_or_alpha)
    if len(u0) != ds.m:
        raise LengthMismatch("u0 and alpha differ in length")
    if ds.n == 0:
        return GapResult(Fraction(1, 2), None, (), degenerate=True)
    Z, _ = zonotope_pair(ds, strict=False)
    u0 = tuple(Fraction(u) % 1 for u in u0)
    s = tuple(a - x for a, x in zip(ds.project(u0), Z.center))
    val, _ = nearest_coset_point(Z, s)
    return GapResult((1 - val) / 2, None, ())


def random_instances(count, m_max=5, den_max=12, seed=0):
    """Deterministic random rational instances.

    m is uniform in 1..m_max, u0_i = a/q with 0 <= a < q <= den_max and
    alpha_i = +-p/q with 1 <= p <= 2q, q <= den_max.
    """
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        m = rng.randint(1, m_max)
        u0 = []
        alpha = []
        for _ in range(m):
            q = rng.randint(1, den_max)
            u0.append(Fraction(rng.randrange(q), q))
            q = rng.randint(1, den_max)
            alpha.append(Fraction(rng.choice((1, -1)) * rng.randint(1, 2 * q), q))
        out.append(MotionInstance(tuple(u0), tuple(alpha)))
    return out


@dataclass(frozen=True)
class EquivalenceRecord:
    instance: MotionInstance
    time_domain: GapResult
    zonotope: GapResult

    @property
    def agree(self):
        return self.time_domain.epsilon_star == self.zonotope.epsilon_star


def _compare(inst):
    return EquivalenceRecord(inst, obstruction_threshold_time_domain(inst),
                             obstruction_threshold_zonotope(inst.alpha, inst.u0))


def equivalence_harness(instances, threads=1):
    """Run both routes on every instance; returns (records, discrepancies)."""
    insts = [i if isinstance(i, MotionInstance) else MotionInstance(*i) for i in instances]
    if threads > 1 and len(insts) > 1:
        with ProcessPoolExecutor(threads) as ex:
            records = list(ex.map(_compare, insts, chunksize=4))
    else:
        records = [_compare(i) for i in insts]
    return records, [r for r in records if not r.agree]


def _velocities(v):
    v = tuple(int(x) for x in v)
    if not v:
        raise BadParameters("no velocities given")
    for i, x in enumerate(v):
        if x == 0:
            raise NonPositiveVelocity(f"velocity {i} is zero")
    # a runner with velocity -v sees the same distances as one with v
    return tuple(abs(x) for x in v)


def lonely_runner_gap(v):
    """max_t min_i ||t v_i|| for integer velocities (runners start together at 0)."""
    v = _velocities(v)
    return obstruction_threshold_time_domain(MotionInstance((0,) * len(v), v))


@dataclass(frozen=True)
class LrcRecord:
    velocities: tuple
    n: int
    lambda1: Fraction
    witness: tuple
    gap: Fraction
    bound_schoenberg: Fraction
    bound_conjectured: Fraction
    schoenberg_ok: bool
    conjecture_ok: bool


def zonotopal_lrc_check(v):
    """The lattice form of the lonely runner question for integer velocities v.

    With Z_v the zonotope of the kernel lattice of v and x its center,
    lambda_1 is the least gauge on ``x + Z^n`` and ``gap(v) = (1 - lambda_1) / 2``;
    this identity is checked against the time-domain gap.
    """
    try:
        v = _velocities(v)
    except NonPositiveVelocity as e:
        raise DegenerateVelocities(str(e)) from None
    if len(v) < 2:
        raise DegenerateVelocities("need at least two velocities")
    g = gcd(*v)
    v = tuple(x // g for x in v)
    ds = build_direction_system(v)
    Z, _ = zonotope_pair(ds)
    n = ds.n
    rm = restricted_successive_minimum(Z, Z.center)
    gap = lonely_runner_gap(v).epsilon_star
    if gap != (1 - rm.value) / 2:
        raise CrossCheckFailure(f"gap {gap} != (1 - {rm.value}) / 2 for v={v}")
    bs, bc = Fraction(n, n + 1), Fraction(n, n + 2)
    return LrcRecord(v, n, rm.value, rm.witness, gap, bs, bc, rm.value <= bs, rm.value <= bc)


# epsilon explorer

CANONICAL_VERSION = "signed-perm-v1"


@dataclass
class CellResult:
    """Running supremum of mu over LGP sets of m vectors in Z^k."""

    k: int
    m: int
    count: int
    mu_lower: Fraction
    mu_upper: Fraction
    argmax: tuple
    partial: bool = False

    def to_json(self):
        from .io import frac
        return {"type": "cell", "k": self.k, "m": self.m, "count": self.count,
                "mu_lower": frac(self.mu_lower), "mu_upper": frac(self.mu_upper),
                "argmax": [list(g) for g in self.argmax], "partial": self.partial}

    @classmethod
    def from_json(cls, d):
        return cls(d["k"], d["m"], d["count"], Fraction(d["mu_lower"]), Fraction(d["mu_upper"]),
                   tuple(tuple(g) for g in d["argmax"]), d["partial"])


@dataclass
class EpsilonEntry:
    n: int
    m: int
    eps_lower: Fraction
    eps_upper: Fraction
    proven_upper: Fraction
    flatness_lower: Fraction
    conjectured: Fraction
    partial: bool


@dataclass
class EpsilonTable:
    cells: dict = field(default_factory=dict)
    entries: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)

    @property
    def partial(self):
        return any(c.partial for c in self.cells.values())


def _catalog(k, m, bound):
    """LGP catalog for one cell, seeded with the Vandermonde set so the
    extremal width m - k + 1 is always present."""
    if k == 1:
        # in one dimension repeated generators are allowed (LGP only needs z != 0)
        from itertools import combinations_with_replacement
        cat = [tuple((x,) for x in c) for c in combinations_with_replacement(range(1, bound + 1), m)]
    else:
        cat = lgp_catalog(k, m, bound)
    from .covering import canonical_form
    seed = canonical_form(linalg.vandermonde_generators(k, m))
    if seed not in cat:
        cat = [seed] + cat
    return cat


def _mu_of(args):
    gens, tol = args
    r = covering_radius(LatticeZonotope(gens), tol)
    return r.lower, r.upper


def explore_cell(k, m, bound, tol=Fraction(1, 50), max_instances=None, threads=1):
    cat = _catalog(k, m, bound)
    partial = max_instances is not None and len(cat) > max_instances
    if partial:
        cat = cat[:max_instances]
    jobs = [(g, tol) for g in cat]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(threads) as ex:
            res = list(ex.map(_mu_of, jobs, chunksize=8))
    else:
        res = [_mu_of(j) for j in jobs]
    lo, hi, arg = Fraction(0), Fraction(0), ()
    for g, (a, b) in zip(cat, res):
        if a > lo:
            lo, arg = a, g
        hi = max(hi, b)
    return CellResult(k, m, len(cat), lo, hi, arg, partial)


def _read_checkpoint(path, header):
    cells = {}
    if not path or not os.path.exists(path):
        return cells, False
    with open(path) as fh:
        lines = [json.loads(line) for line in fh if line.strip()]
    if not lines:
        return cells, False
    if lines[0] != header:
        raise BadParameters(f"checkpoint header {lines[0]} does not match {header}")
    for d in lines[1:]:
        c = CellResult.from_json(d)
        cells[(c.k, c.m)] = c
    return cells, True


def epsilon_explorer(n_max, m_max, bound, tol=Fraction(1, 50), max_instances=None,
                     checkpoint=None, threads=1, cfg=FlatnessConfig()):
    """Explore eps(n, m) for 1 <= n < m <= m_max, n <= n_max.

    Cells (k, m) hold the supremum of mu over the LGP catalog in Z^k; eps(n, m)
    takes the best cell with k <= n. The proven facts
    eps(n, m) <= eps(n - 1, m), eps(n, m) <= eps(n, m + 1) and
    eps(n, m) <= (m - n) / (2 (m - n + 1)) are checked; a definite violation
    raises CrossCheckFailure. Cells are appended to ``checkpoint`` as they
    finish, and cells already there are reused.
    """
    if not 1 <= n_max < m_max or bound < 1:
        raise BadParameters("need 1 <= n_max < m_max and bound >= 1")
    header = {"type": "header", "canonical_form": CANONICAL_VERSION, "bound": bound,
              "tol": str(Fraction(tol)), "max_instances": max_instances}
    cells, have_header = _read_checkpoint(checkpoint, header)
    if checkpoint and not have_header:
        with open(checkpoint, "w") as fh:
            fh.write(json.dumps(header, sort_keys=True) + "\n")
    table = EpsilonTable(cells)
    for m in range(2, m_max + 1):
        for k in range(1, min(n_max, m - 1) + 1):
            if (k, m) in cells:
                continue
            cell = explore_cell(k, m, bound, tol, max_instances, threads)
            cells[(k, m)] = cell
            if checkpoint:
                with open(checkpoint, "a") as fh:
                    fh.write(json.dumps(cell.to_json(), sort_keys=True) + "\n")
    for m in range(2, m_max + 1):
        table.entries[(0, m)] = EpsilonEntry(0, m, Fraction(1, 2), Fraction(1, 2), Fraction(1, 2),
                                             Fraction(1, 2), Fraction(1, 2), False)
        for n in range(1, min(n_max, m - 1) + 1):
            cs = [cells[(k, m)] for k in range(1, n + 1)]
            lo = max(c.mu_lower for c in cs)
            hi = max(c.mu_upper for c in cs)
            w = m - n + 1
            table.entries[(n, m)] = EpsilonEntry(
                n, m, (1 - hi) / 2, (1 - lo) / 2, Fraction(m - n, 2 * w),
                (w - cfg.flt(n)) / (2 * w), Fraction(m - n, 2 * m), any(c.partial for c in cs))
    _check_table(table)
    if table.violations:
        raise CrossCheckFailure("; ".join(table.violations))
    return table


def _check_table(table):
    E = table.entries
    for (n, m), e in sorted(E.items()):
        if e.partial:
            continue
        if e.eps_lower > e.proven_upper:
            table.violations.append(f"eps({n},{m}) >= {e.eps_lower} exceeds {e.proven_upper}")
        prev = E.get((n - 1, m))
        if prev is not None and not prev.partial and e.eps_lower > prev.eps_upper:
            table.violations.append(f"eps({n},{m}) > eps({n - 1},{m})")
        nxt = E.get((n, m + 1))
        if nxt is not None and not nxt.partial and e.eps_lower > nxt.eps_upper:
            table.violations.append(f"eps({n},{m}) > eps({n},{m + 1})")


def candidate_times(inst):
    """Sorted candidate times in one period (peaks and crossings); for plotting."""
    if not isinstance(inst, MotionInstance):
        inst = MotionInstance(*inst)
    Q = lcm(*(x.denominator for x in inst.u0 + inst.alpha))
    U = [int(u * Q) for u in inst.u0]
    A = [int(a * Q) for a in inst.alpha]
    g = gcd(*A)
    P = inst.period
    out = set()
    for C, B in _candidate_families(U, A):
        k0 = -((-C) // Q)
        k1 = -((-(C * g + B * Q)) // (Q * g)) - 1
        out.update(Fraction(k * Q - C, B) for k in range(k0, k1 + 1))
    return sorted(t for t in out if 0 <= t < P)


def envelope_rows(inst):
    """(t, min distance) at every candidate time and the midpoints between them."""
    if not isinstance(inst, MotionInstance):
        inst = MotionInstance(*inst)
    ts = candidate_times(inst)
    pts = set(ts)
    ends = ts + [ts[0] + inst.period] if ts else []
    pts.update((a + b) / 2 for a, b in zip(ends, ends[1:]))
    return [(t, _min_dist(inst, t)) for t in sorted(pts)]


def trajectory_rows(inst):
    if not isinstance(inst, MotionInstance):
        inst = MotionInstance(*inst)
    return [(t,) + fold_position(inst.u0, inst.alpha, t) for t in candidate_times(inst)]
