import random
import time
from fractions import Fraction
from itertools import product

import pytest

from zonocover import linalg
from zonocover.covering import (FlatnessConfig, canonical_form, certified_covering_bounds,
                                covering_radius, covering_radius_1d, covering_radius_2d_exact,
                                flatness_bound_chain, lgp_catalog, min_distance_to_lattice,
                                restricted_successive_minimum, scan_conjecture_mu)
from zonocover.errors import BadParameters, DimensionMismatch
from zonocover.zonotope import LatticeZonotope, gauge, lattice_width

F = Fraction
SCH2 = [[1, 0], [0, 1], [1, 1]]
SCH3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]]


def test_1d_examples():
    for m in range(1, 7):
        assert covering_radius_1d([[m]]).value == F(1, m)
    assert covering_radius_1d([[1]]).value == 1
    assert covering_radius_1d([[3], [-2]]).value == F(1, 5)
    with pytest.raises(DimensionMismatch):
        covering_radius_1d(SCH2)


def test_2d_examples():
    r = covering_radius_2d_exact(SCH2)
    assert r.kind == "exact" and r.value == F(2, 3)
    assert covering_radius_2d_exact([[1, 0], [0, 1]]).value == 1
    v = covering_radius_2d_exact(linalg.vandermonde_generators(2, 4)).value
    assert F(1, 3) <= v <= F(1, 2)
    assert v == F(1, 2)


def test_certified_examples():
    r = certified_covering_bounds(SCH2, F(1, 100))
    assert r.contains(F(2, 3)) and r.upper - r.lower <= F(1, 100)
    r = certified_covering_bounds([[4]], F(1, 1000))
    assert r.contains(F(1, 4))
    t = time.monotonic()
    r = certified_covering_bounds(SCH3, F(1, 50))
    assert r.contains(F(3, 4)) and r.upper - r.lower <= F(1, 50)
    assert time.monotonic() - t < 10
    with pytest.raises(BadParameters):
        certified_covering_bounds(SCH2, 0)


def test_deep_hole_witness_is_exact():
    rng = random.Random(31)
    for _ in range(25):
        Z = random_2d(rng)
        r = covering_radius_2d_exact(Z)
        assert min_distance_to_lattice(Z, r.witness) == r.value
        assert all(0 <= x < 1 for x in r.witness)


def random_2d(rng, lim=3):
    while True:
        m = rng.randint(2, 5)
        gens = [(rng.randint(-lim, lim), rng.randint(-lim, lim)) for _ in range(m)]
        if linalg.rank(gens) == 2:
            return LatticeZonotope(gens)


def test_intervals_contain_exact_values_and_anchor_is_irrelevant():
    rng = random.Random(32)
    for _ in range(20):
        Z = random_2d(rng)
        exact = covering_radius_2d_exact(Z).value
        for anchor in (None, (F(-1, 2), F(-1, 2)), (F(1, 3), F(-2, 7))):
            r = certified_covering_bounds(Z, F(1, 64), anchor=anchor)
            assert r.contains(exact)
    for m in (1, 2, 5):
        assert certified_covering_bounds([[m], [1]], F(1, 200)).contains(F(1, m + 1))


def test_grid_oracle_never_exceeds_mu():
    rng = random.Random(33)
    for _ in range(10):
        Z = random_2d(rng)
        mu = covering_radius_2d_exact(Z).value
        N = 12
        grid = max(min_distance_to_lattice(Z, (F(i, N), F(j, N)))
                   for i in range(N) for j in range(N))
        assert grid <= mu


def test_adding_a_generator_never_increases_mu():
    rng = random.Random(34)
    for _ in range(25):
        Z = random_2d(rng)
        g = (rng.randint(-3, 3), rng.randint(-3, 3))
        Z2 = LatticeZonotope(Z.generators + (g,))
        assert covering_radius_2d_exact(Z2).value <= covering_radius_2d_exact(Z).value


def test_sandwich_and_flatness_chain():
    ch = flatness_bound_chain(linalg.vandermonde_generators(2, 5))
    assert ch.width == 4 and ch.mu_lower == F(1, 4)
    assert ch.flt_constant == 3
    cfg = FlatnessConfig(1)
    assert cfg.flt(1) == 1
    # Flt(n) / n = k / 1024 with k the least integer such that (n + 1)^1024 <= 2^k
    for n in range(1, 6):
        k = cfg.flt(n) / n * 1024
        assert k.denominator == 1
        assert 2 ** (k - 1) < (n + 1) ** 1024 <= 2 ** k
    with pytest.raises(BadParameters):
        FlatnessConfig(0)
    rng = random.Random(35)
    for _ in range(20):
        Z = random_2d(rng)
        mu = covering_radius_2d_exact(Z).value
        ch = flatness_bound_chain(Z, cfg)
        assert ch.mu_lower <= mu <= ch.mu_upper_flatness


def test_lgp_sets_with_one_extra_generator_stay_below_n_over_n_plus_1():
    # m = n + 1 in LGP: mu <= n / (n + 1)
    for gens in lgp_catalog(2, 3, 2):
        mu = covering_radius_2d_exact(gens).value
        assert F(1, lattice_width(gens).value) <= mu <= F(2, 3)


def test_restricted_minimum_examples():
    # coset (1/2, 1/2) + Z^2; (1/2, 1/2) = (e1 + e2 + (1, 1)) / 4 gives 1/2
    r = restricted_successive_minimum(SCH2, (F(3, 2), F(3, 2)))
    assert r.value == F(1, 2)
    assert gauge(LatticeZonotope(SCH2), r.witness) == F(1, 2)
    box = LatticeZonotope([[2, 0], [0, 2]])
    assert restricted_successive_minimum(box, (F(1, 2), F(1, 2))).value == F(1, 2)
    # kernel zonotope of v = (1, 2) is a length-3 segment
    r = restricted_successive_minimum([[2], [-1]])
    assert r.value == F(1, 3)
    assert restricted_successive_minimum(SCH2).trivial  # center (1, 1) is a lattice point
    r = restricted_successive_minimum([[1], [1]])
    assert r.trivial and r.value == 0


def test_restricted_minimum_brute_force():
    rng = random.Random(36)
    for _ in range(20):
        Z = random_2d(rng)
        val = restricted_successive_minimum(Z).value
        x = Z.center
        brute = min(gauge(Z, (x[0] + a, x[1] + b)) for a, b in product(range(-8, 9), repeat=2))
        assert val == brute


def test_canonical_form():
    assert canonical_form([[1, 1], [0, 1], [1, 0]]) == canonical_form([[0, -1], [-1, 0], [1, 1]])
    assert canonical_form([[1, 2]]) == canonical_form([[2, 1]])


def test_scan_examples(tmp_path):
    out = tmp_path / "scan.jsonl"
    cat = [tuple(map(tuple, SCH2)), tuple(map(tuple, linalg.vandermonde_generators(2, 4))),
           ((1,),) * 3, ((1,),) * 2]
    recs = scan_conjecture_mu(cat, report_path=str(out))
    assert [r.violation for r in recs] == [False] * 4
    assert recs[0].result.value == F(2, 3) and recs[0].margin == 0
    assert recs[1].bound == F(1, 2) and recs[1].result.value <= F(1, 2)
    assert recs[2].margin == 0 and recs[3].margin == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 4 and '"mu": "2/3"' in lines[0]


def test_scan_threads_agree():
    cat = lgp_catalog(2, 3, 2)[:12]
    a = [r.to_json() for r in scan_conjecture_mu(cat)]
    b = [r.to_json() for r in scan_conjecture_mu(cat, threads=2)]
    assert a == b


def test_catalog_is_lgp_and_canonical():
    cat = lgp_catalog(2, 3, 2)
    assert len(cat) == len(set(cat))
    for gens in cat:
        assert canonical_form(gens) == gens
    assert canonical_form(SCH2) in cat
