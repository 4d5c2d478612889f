import itertools

import numpy as np
import pytest

from ewlgame.payoff import (
    BimatrixGame,
    MatrixClass,
    OrderingViolation,
    classify,
    decompose,
    extend_symmetric,
    make_payoff_matrix,
    mixed_payoff_classical,
    solve_classical,
)

from conftest import random_valid_matrix


def brute_force(A, B):
    """Independent 4-cell enumeration: Nash cells, Pareto cells, dominant rows/cols."""
    cells = list(itertools.product(range(2), range(2)))
    nash = []
    for i, j in cells:
        row_ok = all(A[i][j] >= A[k][j] for k in range(2))
        col_ok = all(B[i][j] >= B[i][l] for l in range(2))
        if row_ok and col_ok:
            nash.append((i, j))
    pareto = []
    for c in cells:
        beaten = False
        for o in cells:
            if o == c:
                continue
            ge = A[o[0]][o[1]] >= A[c[0]][c[1]] and B[o[0]][o[1]] >= B[c[0]][c[1]]
            gt = A[o[0]][o[1]] > A[c[0]][c[1]] or B[o[0]][o[1]] > B[c[0]][c[1]]
            beaten = beaten or (ge and gt)
        if not beaten:
            pareto.append(c)
    dom_row = next((i for i in range(2) if all(A[i][j] >= A[1 - i][j] for j in range(2))), None)
    dom_col = next((j for j in range(2) if all(B[i][j] >= B[i][1 - j] for i in range(2))), None)
    return nash, pareto, dom_row, dom_col


class TestMakePayoffMatrix:
    def test_prisoners_dilemma(self):
        m = make_payoff_matrix(3, 5, 1, 0, legacy=True)
        assert m.as_tuple() == (3, 5, 1, 0)

    def test_newcomb(self):
        m = make_payoff_matrix(1000000, 1001000, 1000, 0, legacy=True)
        assert m.as_tuple() == (1000000, 1001000, 1000, 0)

    def test_strict_accepts_zero_delta(self):
        assert make_payoff_matrix(3, 5, 1, 0).delta == 0

    @pytest.mark.parametrize(
        "vals, broken",
        [
            ((5, 3, 1, 0), "beta > alpha"),
            ((3, 5, 4, 0), "alpha > gamma"),
            ((3, 5, 1, 1), "gamma > delta"),
            ((3, 5, 2, 1), "delta <= 0"),
        ],
    )
    def test_first_violation_named(self, vals, broken):
        with pytest.raises(OrderingViolation) as info:
            make_payoff_matrix(*vals)
        assert info.value.inequality == broken
        assert broken in str(info.value)

    def test_legacy_allows_positive_delta_only(self):
        assert make_payoff_matrix(3, 5, 2, 1, legacy=True).delta == 1
        with pytest.raises(OrderingViolation):
            make_payoff_matrix(3, 5, 1, 1, legacy=True)

    @pytest.mark.parametrize("bad", [float("nan"), float("inf")])
    def test_non_finite(self, bad):
        with pytest.raises(ValueError):
            make_payoff_matrix(3, bad, 1, 0)


class TestDecompose:
    def test_newcomb(self, np_table):
        d = decompose(np_table)
        np.testing.assert_array_equal(d.diagonal_part, [[1000000, 0], [0, 1000]])
        np.testing.assert_array_equal(d.offdiagonal_part, [[0, 0], [1001000, 0]])

    def test_quasi_skew(self):
        d = decompose(make_payoff_matrix(2, 3, 1, -3))
        np.testing.assert_array_equal(d.diagonal_part, np.diag([2, 1]))
        np.testing.assert_array_equal(d.offdiagonal_part, [[0, -3], [3, 0]])

    def test_reconstruction_bitwise(self, rng):
        for _ in range(1000):
            m = random_valid_matrix(rng)
            assert np.array_equal(decompose(m).reconstruct(), m.as_array())


class TestClassify:
    def test_table_one(self, pd):
        assert classify(pd) is MatrixClass.ASYMMETRIC

    def test_quasi_skew(self):
        m = make_payoff_matrix(2, 3, 1, -3)
        assert classify(m) is MatrixClass.QUASI_SKEW_SYMMETRIC
        off = decompose(m).offdiagonal_part
        np.testing.assert_array_equal(off.T, -off)

    def test_asymmetric(self):
        assert classify(make_payoff_matrix(2, 3, 1, -1)) is MatrixClass.ASYMMETRIC

    def test_general(self):
        assert classify(make_payoff_matrix(2, 3, 1, -4)) is MatrixClass.GENERAL_OFF_DIAGONAL

    def test_quasi_skew_construction(self, rng):
        for _ in range(200):
            m = random_valid_matrix(rng)
            if m.gamma <= -m.beta:
                continue
            skew = make_payoff_matrix(m.alpha, m.beta, m.gamma, -m.beta)
            assert classify(skew) is MatrixClass.QUASI_SKEW_SYMMETRIC


class TestExtendSymmetric:
    def test_table_one_cells(self, pd):
        g = extend_symmetric(pd)
        assert g.cell(0, 0) == (3, 3)
        assert g.cell(0, 1) == (0, 5)
        assert g.cell(1, 0) == (5, 0)
        assert g.cell(1, 1) == (1, 1)

    def test_off_diagonal_cell(self):
        m = make_payoff_matrix(2, 3, 1, -1)
        assert extend_symmetric(m).cell(0, 1) == (-1, 3)

    def test_transpose_and_diagonal_symmetry(self, rng):
        for _ in range(100):
            g = extend_symmetric(random_valid_matrix(rng))
            np.testing.assert_array_equal(g.col_payoffs, g.row_payoffs.T)
            for s in (0, 1):
                a, b = g.cell(s, s)
                assert a == b


class TestSolveClassical:
    def test_prisoners_dilemma(self, pd):
        sol = solve_classical(extend_symmetric(pd))
        assert (sol.dominant_row, sol.dominant_col) == (1, 1)
        assert sol.dominant_row_strict and sol.dominant_col_strict
        assert sol.pure_nash == [(1, 1)]
        pareto = dict(sol.pareto_optimal)
        assert pareto[(0, 0)] == (3, 3)
        assert (1, 1) not in pareto

    def test_newcomb_dominant_box2(self, np_table):
        sol = solve_classical(extend_symmetric(np_table, ("Box1", "Box2")))
        assert sol.dominant_row == 1

    def test_matching_pennies(self):
        a = np.array([[1, -1], [-1, 1]])
        sol = solve_classical(BimatrixGame(a, -a))
        assert sol.pure_nash == []
        assert sol.dominant_row is None and sol.dominant_col is None

    def test_weak_dominance_reported_non_strict(self):
        a = np.array([[1, 1], [1, 0]])
        sol = solve_classical(BimatrixGame(a, a.T))
        assert sol.dominant_row == 0 and not sol.dominant_row_strict

    def test_agrees_with_brute_force(self, rng):
        for _ in range(1000):
            # small integers make ties common
            A = rng.integers(-3, 4, size=(2, 2))
            B = rng.integers(-3, 4, size=(2, 2))
            sol = solve_classical(BimatrixGame(A, B))
            nash, pareto, dom_row, dom_col = brute_force(A.tolist(), B.tolist())
            assert sol.pure_nash == nash
            assert [c for c, _ in sol.pareto_optimal] == pareto
            assert sol.dominant_row == dom_row
            assert sol.dominant_col == dom_col


class TestMixedPayoffClassical:
    def test_pure_corners(self, pd):
        g = extend_symmetric(pd)
        assert mixed_payoff_classical(g, 1, 1) == (3, 3)
        assert mixed_payoff_classical(g, 0, 0) == (1, 1)

    def test_uniform(self, pd):
        assert mixed_payoff_classical(extend_symmetric(pd), 0.5, 0.5) == (2.25, 2.25)

    @pytest.mark.parametrize("p, q", [(-0.1, 0.5), (0.5, 1.5)])
    def test_out_of_range(self, pd, p, q):
        with pytest.raises(ValueError):
            mixed_payoff_classical(extend_symmetric(pd), p, q)

    def test_bilinear(self, rng):
        for _ in range(100):
            g = extend_symmetric(random_valid_matrix(rng))
            p, q = rng.uniform(0.1, 0.9, size=2)
            h = 1e-3
            f = lambda p, q: np.array(mixed_payoff_classical(g, p, q))
            # affine in each argument: second differences vanish
            assert np.max(np.abs(f(p + h, q) - 2 * f(p, q) + f(p - h, q))) < 1e-12
            assert np.max(np.abs(f(p, q + h) - 2 * f(p, q) + f(p, q - h))) < 1e-12
            # mixed partial is constant: the (C,C)-(C,D)-(D,C)+(D,D) combination
            cross = (f(p + h, q + h) - f(p + h, q - h) - f(p - h, q + h) + f(p - h, q - h)) / (4 * h * h)
            A, B = g.row_payoffs, g.col_payoffs
            expect = np.array([A[0, 0] - A[0, 1] - A[1, 0] + A[1, 1], B[0, 0] - B[0, 1] - B[1, 0] + B[1, 1]])
            np.testing.assert_allclose(cross, expect, atol=1e-6)
