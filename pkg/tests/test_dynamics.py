import json
import random
from fractions import Fraction
from itertools import combinations_with_replacement, permutations
from math import lcm

import pytest

from zonocover.covering import covering_radius
from zonocover.direction import FormalReal, build_direction_system, zonotope_pair
from zonocover.dynamics import (MotionInstance, candidate_times, envelope_rows,
                                epsilon_explorer, equivalence_harness, explore_cell,
                                fold_position, lonely_runner_gap, obstruction_threshold_time_domain,
                                obstruction_threshold_zonotope, random_instances,
                                trajectory_rows, zonotopal_lrc_check)
from zonocover.errors import (BadParameters, DegenerateVelocities, IrrationalDirection,
                              LengthMismatch, NonPositiveVelocity, ZeroCoordinate)

from helpers import brute_threshold, dist_to_int

F = Fraction


def test_fold_examples():
    assert fold_position((0,), (1,), F(1, 2)) == (F(1, 2),)
    assert fold_position((0,), (1,), F(3, 2)) == (F(1, 2),)
    assert fold_position((F(1, 4), F(3, 4)), (1, -1), 1) == (F(3, 4), F(1, 4))
    with pytest.raises(LengthMismatch):
        fold_position((0,), (1, 2), 0)


def test_fold_stays_in_cube_and_tracks_distance():
    rng = random.Random(41)
    for _ in range(200):
        u, a = F(rng.randint(0, 9), 7), F(rng.randint(-9, 9), 5)
        t = F(rng.randint(-50, 50), 11)
        (x,) = fold_position((u,), (a,), t)
        assert 0 <= x <= 1
        # distance of the folded point to the cube boundary is the torus distance to Z
        assert min(x, 1 - x) == dist_to_int(u + t * a)


def test_threshold_examples():
    for m in range(2, 7):
        u0 = tuple(F(i, m) for i in range(m))
        r = obstruction_threshold_time_domain(MotionInstance(u0, (1,) * m))
        assert r.epsilon_star == F(1, 2 * m)
    r = obstruction_threshold_time_domain(MotionInstance((0, 0), (1, 2)))
    assert r.epsilon_star == F(1, 3) and r.witness_t == F(1, 3)
    r = obstruction_threshold_time_domain(MotionInstance((0,), (1,)))
    assert r.epsilon_star == F(1, 2) and r.witness_t == F(1, 2)
    assert r.active_indices == (0,)


def test_instance_validation():
    inst = MotionInstance((F(5, 2), -1), (1, 2))
    assert inst.u0 == (F(1, 2), 0)
    with pytest.raises(ZeroCoordinate):
        MotionInstance((0, 0), (1, 0))
    with pytest.raises(IrrationalDirection):
        MotionInstance((0, 0), (1, FormalReal.symbol(1, 1)))
    assert MotionInstance((0, 0), (F(2, 3), F(1, 2))).period == 6


def test_zonotope_route_examples():
    assert obstruction_threshold_zonotope((1, 2), (0, 0)).epsilon_star == F(1, 3)
    X = [FormalReal.symbol(k, 2) for k in (1, 2)]
    r = obstruction_threshold_zonotope(tuple(X), (0, 0))
    assert r.degenerate and r.epsilon_star == F(1, 2)
    r = obstruction_threshold_zonotope((1, 2, 1), (F(1, 6), F(1, 2), F(5, 6)))
    assert r.epsilon_star == F(1, 3)
    assert obstruction_threshold_time_domain(
        MotionInstance((F(1, 6), F(1, 2), F(5, 6)), (1, 2, 1))).epsilon_star == F(1, 3)


def test_zonotope_route_with_a_rational_and_symbolic_mix():
    # alpha = (xi, xi, 1): only e1 - e2 is orthogonal; u0 shifts the coset
    xi = FormalReal.symbol(1, 1)
    r = obstruction_threshold_zonotope((xi, xi, 1), (0, F(1, 2), 0))
    # the first two coordinates are locked at offset 1/2 so their min distance is at most 1/4
    assert r.epsilon_star == F(1, 4)


def test_routes_agree_on_random_instances():
    recs, bad = equivalence_harness(random_instances(200, m_max=5, den_max=12, seed=7))
    assert len(recs) == 200 and not bad
    for n in range(1, 6):
        inst = MotionInstance((0,) * n, tuple(range(1, n + 1)))
        r, bad = equivalence_harness([inst])
        assert not bad and r[0].time_domain.epsilon_star == F(1, n + 1)


def fast_grid_max(inst, steps):
    Q = lcm(*(x.denominator for x in inst.u0 + inst.alpha)) * steps
    U = [int(u * Q) for u in inst.u0]
    A = [int(a * Q) // steps for a in inst.alpha]
    # position at t = k / steps is (U_i + k A_i) / Q
    best = -1
    for k in range(int(inst.period * steps)):
        v = Q
        for u, a in zip(U, A):
            r = (u + k * a) % Q
            v = min(v, r, Q - r)
        best = max(best, v)
    return F(best, Q)


def test_dense_grid_never_beats_the_candidate_set():
    insts = [i for i in random_instances(600, m_max=5, den_max=6, seed=3) if i.period <= 6][:100]
    assert len(insts) == 100
    for inst in insts:
        eps = obstruction_threshold_time_domain(inst).epsilon_star
        assert fast_grid_max(inst, 1024) <= eps
    # the slow Fraction oracle on a couple of them as a check on the fast one
    for inst in insts[:3]:
        assert brute_threshold(inst.u0, inst.alpha, 64) == fast_grid_max(inst, 64)


def test_candidate_times_attain_the_maximum():
    for inst in random_instances(40, seed=9):
        r = obstruction_threshold_time_domain(inst)
        assert r.witness_t in candidate_times(inst)
        assert min(dist_to_int(u + r.witness_t * a) for u, a in zip(inst.u0, inst.alpha)) == r.epsilon_star


def test_gap_examples():
    assert lonely_runner_gap((1, 2)).epsilon_star == F(1, 3)
    assert lonely_runner_gap((1, 2, 3, 4, 5)).epsilon_star == F(1, 6)
    assert lonely_runner_gap((1,)).epsilon_star == F(1, 2)
    assert lonely_runner_gap((1, 2, 3)).epsilon_star == F(1, 4)
    with pytest.raises(NonPositiveVelocity):
        lonely_runner_gap((1, 0))
    assert lonely_runner_gap((-1, 2)).epsilon_star == F(1, 3)


def test_gap_scaling_and_permutation():
    rng = random.Random(44)
    for _ in range(30):
        v = tuple(rng.randint(1, 7) for _ in range(rng.randint(1, 4)))
        g = lonely_runner_gap(v).epsilon_star
        assert lonely_runner_gap(tuple(3 * x for x in v)).epsilon_star == g
        for p in permutations(v):
            assert lonely_runner_gap(p).epsilon_star == g
    for inst in random_instances(20, m_max=4, seed=5):
        e = obstruction_threshold_time_domain(inst).epsilon_star
        idx = list(range(inst.m))
        rng.shuffle(idx)
        perm = MotionInstance(tuple(inst.u0[i] for i in idx), tuple(inst.alpha[i] for i in idx))
        assert obstruction_threshold_time_domain(perm).epsilon_star == e


def test_lrc_sweep():
    for m in range(1, 5):
        for v in combinations_with_replacement(range(1, 7), m):
            assert lonely_runner_gap(v).epsilon_star >= F(1, m + 1)


def test_zonotopal_lrc_examples():
    r = zonotopal_lrc_check((1, 2))
    assert r.n == 1 and r.lambda1 == F(1, 3) and r.gap == F(1, 3)
    assert r.schoenberg_ok and r.conjecture_ok and r.lambda1 == r.bound_conjectured
    r = zonotopal_lrc_check((1, 2, 3))
    assert r.n == 2 and r.lambda1 == F(1, 2) and r.bound_conjectured == F(1, 2)
    r = zonotopal_lrc_check((1, 1))
    assert r.lambda1 == 0 and r.gap == F(1, 2)
    with pytest.raises(DegenerateVelocities):
        zonotopal_lrc_check((1, 0, 2))
    with pytest.raises(DegenerateVelocities):
        zonotopal_lrc_check((3,))


def test_zonotopal_lrc_sweep():
    for m in range(2, 5):
        for v in combinations_with_replacement(range(1, 6), m):
            r = zonotopal_lrc_check(v)
            assert r.schoenberg_ok


def test_eps_bar_family():
    # alpha = (xi_1, .., xi_{m-n}, xi_1, .., xi_1) gives mu(Z_alpha) = n / (n + 1)
    for n in (1, 2):
        for m in range(n + 2, n + 4):
            d = m - n
            X = [FormalReal.symbol(k, d) for k in range(1, d + 1)]
            alpha = tuple(X) + (X[0],) * n
            ds = build_direction_system(alpha)
            assert ds.n == n
            za, _ = zonotope_pair(ds)
            mu = covering_radius(za).value
            assert mu == F(n, n + 1)
            assert (1 - mu) / 2 == F(1, 2 * (n + 1))


def test_independent_symbols_threshold_is_half():
    for m in range(1, 5):
        X = tuple(FormalReal.symbol(k, m) for k in range(1, m + 1))
        assert obstruction_threshold_zonotope(X, (F(1, 3),) * m).epsilon_star == F(1, 2)


def test_explorer_examples(tmp_path):
    t = epsilon_explorer(2, 4, 2)
    for m in (2, 3, 4):
        e = t.entries[(1, m)]
        assert e.eps_lower == e.eps_upper == F(m - 1, 2 * m)
        assert t.entries[(0, m)].eps_lower == F(1, 2)
    e = t.entries[(2, 3)]
    assert e.eps_lower == e.eps_upper == F(1, 6)
    assert not t.violations and not t.partial
    assert explore_cell(1, 3, 3).mu_lower == F(1, 3)
    with pytest.raises(BadParameters):
        epsilon_explorer(3, 3, 2)


def test_explorer_checkpoint_resume(tmp_path):
    ck = tmp_path / "ck.jsonl"
    full = epsilon_explorer(2, 4, 2, checkpoint=str(ck))
    lines = ck.read_text().splitlines()
    assert json.loads(lines[0])["type"] == "header"
    # drop the last two cells and resume
    ck.write_text("\n".join(lines[:-2]) + "\n")
    resumed = epsilon_explorer(2, 4, 2, checkpoint=str(ck))
    assert resumed.entries == full.entries
    assert sorted(ck.read_text().splitlines()[1:]) == sorted(lines[1:])
    # a header for another bound is refused
    with pytest.raises(BadParameters):
        epsilon_explorer(2, 4, 3, checkpoint=str(ck))


def test_explorer_budget_flags_partial():
    t = epsilon_explorer(2, 4, 2, max_instances=3)
    assert t.partial
    assert any(e.partial for e in t.entries.values())


def test_plot_rows():
    inst = MotionInstance((0, 0), (1, 2))
    rows = envelope_rows(inst)
    assert (F(1, 3), F(1, 3)) in rows
    assert all(v <= F(1, 3) for _, v in rows)
    tr = trajectory_rows(inst)
    assert all(len(r) == 3 for r in tr) and tr[0][0] == 0
