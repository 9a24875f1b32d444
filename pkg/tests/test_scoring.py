from __future__ import annotations

import pytest

from qselect.qubo import BoundPair, DegenerateProblemError, QuboProblem
from qselect.scoring import (
    RunDistribution,
    ScoreWeights,
    best_solver,
    matches_reference,
    problem_score,
    rank_solvers,
    score,
)
from qselect.solvers import PRIORITY, RunResult, SolverKind

UNIT = BoundPair(-3.0, 6.0)


def kinds(**vals):
    return {k: vals.get(k.value, -1.0) for k in PRIORITY}


class TestScore:
    def test_perfect_solver(self):
        d = RunDistribution((-3.0,) * 10, -3.0, (True,) * 10)
        assert score(d, bounds=UNIT) == pytest.approx(-2.0, abs=1e-12)

    def test_never_optimal_but_feasible(self):
        # zero gaps force p_s = 1 in a real distribution, so alpha = 0 stands in for p_s = 0
        d = RunDistribution((1.0,) * 4, 1.0, (True,) * 4)
        assert score(d, bounds=UNIT, weights=ScoreWeights(alpha=0.0)) == pytest.approx(-1.0, abs=1e-12)

    def test_constructed_distribution(self):
        # half the runs at E_ref, half at E_ref + W
        w = UNIT.width
        d = RunDistribution((-3.0, -3.0 + w), -3.0, (True, True))
        assert d.p_s == 0.5 and d.e_var == pytest.approx(w * w / 4)
        # -0.5 alpha + 0 beta + 0.5 gamma + 0.25 delta - 1 eta at unit weights
        assert score(d, bounds=UNIT) == pytest.approx(-0.5 + 0.0 + 0.5 + 0.25 - 1.0, abs=1e-12)

    def test_weights_are_linear(self):
        d = RunDistribution((-3.0, 0.0, 6.0), -3.0, (True, False, True))
        terms = {
            "alpha": -d.p_s, "beta": (d.e_opt + 3) / 9, "gamma": (d.e_avg + 3) / 9,
            "delta": d.e_var / 81, "eta": -d.p_v,
        }
        for name, value in terms.items():
            w = ScoreWeights(**{k: float(k == name) for k in terms})
            assert score(d, bounds=UNIT, weights=w) == pytest.approx(value, abs=1e-12)

    def test_raw_mode(self):
        d = RunDistribution((0.0, 2.0), 0.0)
        assert score(d, normalize=False) == pytest.approx(-0.5 + 0 + 1 + 1 - 1)

    def test_zero_width(self):
        flat = BoundPair(2.0, 2.0)
        assert score(RunDistribution((2.0,), 2.0), bounds=flat) == -2.0
        with pytest.raises(DegenerateProblemError):
            score(RunDistribution((2.0, 3.0), 2.0), bounds=flat)

    def test_normalized_needs_bounds(self):
        with pytest.raises(ValueError):
            score(RunDistribution((0.0,), 0.0))

    def test_negative_weight(self):
        with pytest.raises(ValueError):
            ScoreWeights(alpha=-1)

    def test_tolerance(self):
        assert matches_reference(-3.0 + 1e-12, -3.0)
        assert not matches_reference(-3.0 + 1e-6, -3.0)

    def test_problem_score_uses_posiform_width(self, small_problem):
        d = RunDistribution((-3.0, 6.0), -3.0)
        assert problem_score(small_problem, d) == score(d, bounds=UNIT)


class TestDistribution:
    def test_from_results(self, small_problem):
        res = [RunResult((0, 1, 0), -3.0, SolverKind.SA, 0), RunResult((1, 1, 0), 3.0, SolverKind.SA, 1)]
        d = RunDistribution.from_results(small_problem, res)
        assert d.reference == -3.0 and d.p_s == 0.5 and d.p_v == 1.0
        assert d.e_avg == 0.0 and d.e_var == 9.0

    def test_feasibility(self):
        from qselect.qubo import Constraint

        p = QuboProblem.from_terms(2, {0: -1, 1: -1}, constraints=[Constraint("exclusion", pairs=((0, 1),))])
        res = [RunResult((1, 1), -2.0, SolverKind.SA, 0), RunResult((1, 0), -1.0, SolverKind.SA, 1)]
        assert RunDistribution.from_results(p, res).p_v == 0.5

    def test_empty(self):
        with pytest.raises(ValueError):
            RunDistribution((), 0.0)


class TestTieBreak:
    def test_priority_wins_ties(self):
        assert best_solver(kinds(qaoa=-2.0, sa=-2.0)) is SolverKind.QAOA
        assert best_solver(kinds()) is SolverKind.QAOA
        assert best_solver(kinds(gas=-1.5, qa=-1.5)) is SolverKind.GAS

    def test_unique_minimum(self):
        assert best_solver(kinds(vqe=-3.0)) is SolverKind.VQE

    def test_ranking(self):
        order = rank_solvers(kinds(sa=-3.0, vqe=-2.0, qaoa=0.0))
        assert order == [SolverKind.SA, SolverKind.VQE, SolverKind.GAS, SolverKind.QA_PROXY, SolverKind.QAOA]

    def test_missing(self):
        with pytest.raises(KeyError):
            rank_solvers({SolverKind.SA: 0.0})
