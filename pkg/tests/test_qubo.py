from __future__ import annotations

import itertools
import json
import math
import statistics

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_problem
from qselect.qubo import (
    CapacityError,
    Constraint,
    DegenerateProblemError,
    DimensionError,
    QuboError,
    QuboProblem,
    bits_to_index,
    brute_force,
    energy_table,
    evaluate,
    extract_features,
    index_to_bits,
    integer_scaled,
    load_problem,
    num_value_qubits,
    posiform_bounds,
    round_and_normalize,
    save_problem,
    twos_complement_bits,
)


def naive_value(problem: QuboProblem, x) -> float:
    # dense upper-triangular form, summed term by term
    n = problem.num_vars
    Q = np.zeros((n, n))
    for i, v in problem.linear.items():
        Q[i, i] = v
    for (i, j), v in problem.quadratic.items():
        Q[i, j] = v
    total = problem.offset
    for i in range(n):
        for j in range(i, n):
            total += Q[i, j] * x[i] * x[j]
    return total


def naive_extrema(problem: QuboProblem):
    vals = {x: naive_value(problem, x) for x in itertools.product((0, 1), repeat=problem.num_vars)}
    lo, hi = min(vals.values()), max(vals.values())
    return lo, sorted(x for x, v in vals.items() if abs(v - lo) <= 1e-9 * max(1, abs(lo))), hi


class TestEvaluate:
    def test_examples(self, small_problem):
        assert evaluate(small_problem, (0, 0, 0)) == 0
        assert evaluate(small_problem, (1, 1, 0)) == 3
        assert evaluate(small_problem, (0, 1, 0)) == -3

    def test_wrong_length(self, small_problem):
        with pytest.raises(DimensionError):
            evaluate(small_problem, (0, 1))

    def test_matches_dense_oracle(self, rng):
        for _ in range(200):
            p = random_problem(rng, int(rng.integers(1, 9)))
            x = tuple(int(v) for v in rng.integers(0, 2, p.num_vars))
            assert evaluate(p, x) == pytest.approx(naive_value(p, x), abs=1e-9)

    def test_energy_table_little_endian(self, small_problem):
        table = energy_table(small_problem)
        for k in range(8):
            assert table[k] == pytest.approx(evaluate(small_problem, index_to_bits(k, 3)))
        assert bits_to_index((0, 1, 0)) == 2

    def test_energy_table_capacity(self):
        with pytest.raises(CapacityError):
            energy_table(QuboProblem(25))


class TestBruteForce:
    def test_small_example(self, small_problem):
        bf = brute_force(small_problem)
        assert bf.min_value == -3
        assert bf.minimizers == ((0, 1, 0), (0, 1, 1))
        assert bf.max_value == 3

    def test_empty_problem(self):
        bf = brute_force(QuboProblem(2, offset=5.0))
        assert bf.min_value == bf.max_value == 5
        assert len(bf.minimizers) == 4

    def test_matches_itertools_oracle(self, rng):
        for _ in range(60):
            p = random_problem(rng, int(rng.integers(1, 9)), integer=bool(rng.integers(2)))
            lo, argmins, hi = naive_extrema(p)
            bf = brute_force(p)
            assert bf.min_value == pytest.approx(lo, abs=1e-9)
            assert bf.max_value == pytest.approx(hi, abs=1e-9)
            assert list(bf.minimizers) == argmins

    def test_capacity(self):
        with pytest.raises(CapacityError):
            brute_force(QuboProblem(25))


class TestCanonicalForm:
    def test_from_terms_merges_and_orders(self):
        p = QuboProblem.from_terms(3, [(0, 1.0), (0, 2.0)], [(2, 1, 3.0), (1, 2, -1.0), (1, 1, 4.0)])
        assert p.linear == {0: 3.0, 1: 4.0}
        assert p.quadratic == {(1, 2): 2.0}

    def test_zero_terms_dropped(self):
        p = QuboProblem.from_terms(2, {0: 0.0}, {(0, 1): 1.0, (1, 0): -1.0})
        assert p.linear == {} and p.quadratic == {}

    @pytest.mark.parametrize("kwargs", [
        {"num_vars": 0},
        {"num_vars": 2, "linear": {2: 1.0}},
        {"num_vars": 2, "quadratic": {(1, 0): 1.0}},
        {"num_vars": 2, "quadratic": {(0, 0): 1.0}},
        {"num_vars": 2, "linear": {0: 0.0}},
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(QuboError):
            QuboProblem(**kwargs)

    def test_json_roundtrip(self, tmp_path, small_problem):
        p = small_problem.with_offset(1.5).with_reference(-1.5)
        p = QuboProblem.from_terms(3, p.linear, p.quadratic, p.offset, p.reference_optimum,
                                   [Constraint("cardinality", (0, 1), k=1)])
        save_problem(p, tmp_path / "p.json")
        q = load_problem(tmp_path / "p.json")
        assert q == p
        assert q.constraints[0].satisfied((1, 0, 0))

    def test_json_rejects_duplicates(self):
        obj = {"num_vars": 2, "offset": 0, "linear": [[0, 1.0], [0, 2.0]], "quadratic": []}
        with pytest.raises(QuboError):
            QuboProblem.from_json(obj)

    def test_json_rejects_unordered_pair(self):
        obj = {"num_vars": 2, "offset": 0, "linear": [], "quadratic": [[1, 0, 1.0]]}
        with pytest.raises(QuboError):
            QuboProblem.from_json(json.loads(json.dumps(obj)))

    def test_invalid_json_file(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{nope")
        with pytest.raises(QuboError):
            load_problem(path)


class TestFeatures:
    def test_small_example(self, small_problem):
        f = extract_features(small_problem)
        assert (f.n_vars, f.n_lin, f.n_quad) == (3, 2, 1)
        assert f.mean_lin == -0.5 and f.var_lin == 6.25
        assert f.mean_quad == 4 and f.var_quad == 0
        assert f.mean_all == 1.0
        assert f.var_all == pytest.approx(26 / 3, abs=1e-12)

    def test_zero_problem(self):
        f = extract_features(QuboProblem(4, offset=2.0))
        assert f.as_tuple() == (4, 0, 0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)

    def test_matches_statistics_module(self, rng):
        for _ in range(100):
            p = random_problem(rng, int(rng.integers(1, 10)))
            lin, quad = list(p.linear.values()), list(p.quadratic.values())
            f = extract_features(p)

            def mv(vals):
                return (statistics.fmean(vals), statistics.pvariance(vals)) if vals else (0.0, 0.0)

            expect = (p.num_vars, len(lin), len(quad), *mv(lin), *mv(quad), *mv(lin + quad))
            assert f.as_tuple() == pytest.approx(expect, abs=1e-9)


class TestBounds:
    def test_small_example(self, small_problem):
        b = posiform_bounds(small_problem)
        assert (b.lower, b.upper) == (-3, 6)
        assert num_value_qubits(small_problem) == 4

    def test_nonnegative(self):
        assert posiform_bounds(QuboProblem.from_terms(2, {0: 1}, {(0, 1): 2})).lower == 0

    @pytest.mark.parametrize("lo,hi,m", [(-3, 6, 4), (-1, 0, 1), (-8, 7, 4), (0, 0, 1), (-9, 0, 5), (0, 8, 5)])
    def test_twos_complement(self, lo, hi, m):
        assert twos_complement_bits(lo, hi) == m

    def test_contains_true_range(self, rng):
        for _ in range(100):
            p = random_problem(rng, int(rng.integers(1, 11)))
            b, bf = posiform_bounds(p), brute_force(p)
            assert b.lower <= bf.min_value + 1e-9
            assert bf.max_value <= b.upper + 1e-9

    @given(st.integers(-1000, 1000), st.integers(0, 1000))
    def test_twos_complement_minimal(self, lo, extra):
        hi = lo + extra
        m = twos_complement_bits(lo, hi)
        assert -(2 ** (m - 1)) <= lo and hi <= 2 ** (m - 1) - 1
        if m > 1:
            assert -(2 ** (m - 2)) > lo or hi > 2 ** (m - 2) - 1


class TestRounding:
    def test_example(self):
        p = QuboProblem.from_terms(2, {0: 0.5}, {(0, 1): -1.0})
        r = round_and_normalize(p, 0.5)
        assert r.linear == {0: 1.0} and r.quadratic == {(0, 1): -2.0}

    def test_identity_on_unit_integers(self, small_problem):
        p = QuboProblem.from_terms(3, {0: 1, 1: -3}, {(0, 1): 4})
        assert round_and_normalize(p, 1.0) == p

    def test_degenerate(self):
        with pytest.raises(DegenerateProblemError):
            round_and_normalize(QuboProblem.from_terms(2, {0: 0.2}), 1.0)
        with pytest.raises(ValueError):
            round_and_normalize(QuboProblem.from_terms(2, {0: 1.0}), 0.0)

    def test_integer_scaled_preserves_argmin(self, rng):
        for _ in range(50):
            p = random_problem(rng, int(rng.integers(1, 7)), integer=True, scale=6)
            if p.max_abs_coefficient == 0:
                continue
            q, scale = integer_scaled(p, 1.0)
            assert all(float(v).is_integer() for v in list(q.linear.values()) + list(q.quadratic.values()))
            assert brute_force(q).minimizers == brute_force(p).minimizers
            g = math.gcd(*[int(abs(v)) for v in list(p.linear.values()) + list(p.quadratic.values())])
            assert scale == g


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2 ** 32 - 1))
def test_brute_force_is_minimum_of_table(n, seed):
    p = random_problem(np.random.default_rng(seed), n)
    table = energy_table(p)
    assert brute_force(p).min_value == pytest.approx(table.min(), abs=1e-9)
