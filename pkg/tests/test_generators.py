from __future__ import annotations

import itertools

import pytest

from qselect.generators import (
    FAMILIES,
    ProblemSpec,
    SpecError,
    canonical_family,
    generate,
    generate_suite,
)
from qselect.qubo import brute_force, evaluate


def assignments(n):
    return itertools.product((0, 1), repeat=n)


def test_triangle_maxcut():
    p = generate(ProblemSpec("max_cut", 3, density=1.0, coeff_range=(1, 1)))
    assert p.quadratic == {(0, 1): 2.0, (0, 2): 2.0, (1, 2): 2.0}
    assert brute_force(p).min_value == -2


def test_maxcut_counts_cut_edges():
    spec = ProblemSpec("max_cut", 6, density=0.6, coeff_range=(1, 1), seed=4)
    p = generate(spec)
    edges = list(p.quadratic)
    for x in assignments(6):
        cut = sum(x[i] != x[j] for i, j in edges)
        assert evaluate(p, x) == -cut


def test_number_partitioning_pair():
    p = generate(ProblemSpec("number_partitioning", 2, coeff_range=(1, 1)))
    bf = brute_force(p)
    assert bf.min_value == 0
    assert bf.minimizers == ((0, 1), (1, 0))


def test_number_partitioning_is_squared_difference():
    p = generate(ProblemSpec("npp", 5, coeff_range=(1, 9), seed=3))
    # recover s from the linear terms: a_i = 4 s_i (s_i - S) and c = S^2
    total = p.offset ** 0.5
    s = [next(v for v in range(1, 10) if 4 * v * (v - total) == p.linear[i]) for i in range(5)]
    for x in assignments(5):
        diff = sum(si if xi else -si for si, xi in zip(s, x))
        assert evaluate(p, x) == pytest.approx(diff * diff)


def test_random_degenerate_range():
    p = generate(ProblemSpec("random", 4, density=1.0, coeff_range=(1, 1)))
    assert set(p.linear.values()) == {1.0} and len(p.linear) == 4
    assert set(p.quadratic.values()) == {1.0} and len(p.quadratic) == 6


def test_vertex_cover_minimum_is_min_cover():
    for seed in range(5):
        p = generate(ProblemSpec("mvc", 6, density=0.5, seed=seed))
        edges = p.constraints[0].pairs
        best = min(sum(x) for x in assignments(6) if all(x[i] or x[j] for i, j in edges))
        bf = brute_force(p)
        assert bf.min_value == best
        assert all(p.is_feasible(x) for x in bf.minimizers)


def test_set_packing_minimum_is_best_packing():
    for seed in range(5):
        p = generate(ProblemSpec("set_packing", 6, density=0.5, seed=seed))
        pairs = p.constraints[0].pairs
        w = [-p.linear[i] for i in range(6)]
        best = max(sum(wi for wi, xi in zip(w, x) if xi) for x in assignments(6)
                   if not any(x[i] and x[j] for i, j in pairs))
        assert brute_force(p).min_value == pytest.approx(-best)


@pytest.mark.parametrize("family", ["k_clique", "portfolio"])
def test_cardinality_families_feasible_at_optimum(family):
    for seed in range(4):
        p = generate(ProblemSpec(family, 6, density=0.7, seed=seed))
        card = next(c for c in p.constraints if c.kind == "cardinality")
        assert all(sum(x) == card.k for x in brute_force(p).minimizers)


@pytest.mark.parametrize("family", FAMILIES)
def test_every_family_is_valid_and_reproducible(family):
    spec = ProblemSpec(family, 5, seed=9)
    assert generate(spec) == generate(spec)
    assert ProblemSpec.from_json(spec.to_json()).weights_range == spec.weights_range


class TestSpecValidation:
    @pytest.mark.parametrize("kwargs", [
        {"family": "nope", "size": 3},
        {"family": "max_cut", "size": 0},
        {"family": "max_cut", "size": 3, "density": 0.0},
        {"family": "max_cut", "size": 3, "coeff_range": (2, 1)},
        {"family": "k_clique", "size": 3, "k": 4},
        {"family": "set_packing", "size": 3, "penalty": -1.0},
    ])
    def test_rejected(self, kwargs):
        with pytest.raises(SpecError):
            ProblemSpec(**kwargs)

    def test_aliases(self):
        assert canonical_family("MaxCut") == "max_cut"
        assert canonical_family("partition") == "number_partitioning"


class TestSuite:
    def test_empty(self):
        assert generate_suite(0) == []

    def test_deterministic(self):
        a = generate_suite(10, (3, 6), seed=5)
        b = generate_suite(10, (3, 6), seed=5)
        assert a == b

    def test_hundred_problems(self):
        suite = generate_suite(100, (3, 8), seed=1)
        assert len(suite) == 100
        for spec, p in suite:
            assert 3 <= p.num_vars <= 8 and p.num_vars == spec.size
            assert p.reference_optimum == brute_force(p).min_value
        assert {s.family for s, _ in suite} == set(FAMILIES)

    def test_bad_range(self):
        with pytest.raises(SpecError):
            generate_suite(2, (5, 3))
        with pytest.raises(SpecError):
            generate_suite(2, (3, 30))
