"""Numerical kernel tests: LU solves, spectral radius, simplex, RNG."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ggfmdp.errors import BadDistribution, SingularMatrix
from ggfmdp.numkit import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    LinearProgram,
    Rng,
    lu_solve,
    simplex_solve,
    spectral_radius,
)


class TestLu:
    def test_solve_2x2(self):
        A = np.array([[2.0, 1.0], [1.0, 3.0]])
        b = np.array([1.75, 1.5])
        x = lu_solve(A, b)
        np.testing.assert_allclose(x, [0.75, 0.25], atol=1e-12)

    def test_matrix_rhs(self):
        A = np.array([[4.0, 1.0], [2.0, 3.0]])
        X = lu_solve(A, np.eye(2))
        np.testing.assert_allclose(A @ X, np.eye(2), atol=1e-12)

    def test_singular_raises(self):
        with pytest.raises(SingularMatrix):
            lu_solve(np.ones((2, 2)), np.ones(2))

    @given(st.integers(1, 8), st.integers(0, 2**31))
    @settings(max_examples=50, deadline=None)
    def test_residual_small(self, n, seed):
        rng = np.random.default_rng(seed)
        A = rng.normal(size=(n, n)) + n * np.eye(n)
        b = rng.normal(size=n)
        x = lu_solve(A, b)
        assert np.linalg.norm(A @ x - b) < 1e-8 * (1 + np.linalg.norm(b))


class TestSpectralRadius:
    def test_diagonal(self):
        assert spectral_radius(np.diag([0.5, -0.2])) == pytest.approx(0.5, abs=1e-9)

    def test_rotation_complex_pair(self):
        c, s = np.cos(1.0), np.sin(1.0)
        A = 0.7 * np.array([[c, -s], [s, c]])
        assert spectral_radius(A) == pytest.approx(0.7, abs=1e-8)

    def test_nilpotent_zero(self):
        A = np.array([[0.0, 1.0], [0.0, 0.0]])
        assert spectral_radius(A) == 0.0

    @given(st.integers(1, 6), st.integers(0, 2**31))
    @settings(max_examples=40, deadline=None)
    def test_matches_eigvals(self, n, seed):
        rng = np.random.default_rng(seed)
        A = rng.normal(size=(n, n))
        truth = np.abs(np.linalg.eigvals(A)).max()
        if truth < 1e-8:
            return
        assert spectral_radius(A) == pytest.approx(truth, rel=1e-6, abs=1e-8)


def _vertex_enumeration_optimum(lp: LinearProgram):
    """Brute-force LP oracle: check every basic point of Ax<=b, x>=0."""
    m, n = lp.A.shape
    rows = [(lp.A[i], lp.b[i]) for i in range(m)]
    rows += [(e, 0.0) for e in -np.eye(n)]
    best = None
    for combo in itertools.combinations(range(len(rows)), n):
        M = np.array([rows[i][0] for i in combo])
        rhs = np.array([rows[i][1] for i in combo])
        try:
            x = np.linalg.solve(M, rhs)
        except np.linalg.LinAlgError:
            continue
        if np.all(lp.A @ x <= lp.b + 1e-9) and np.all(x >= -1e-9):
            v = lp.c @ x
            if best is None or v > best:
                best = v
    return best


class TestSimplex:
    def test_basic_optimum(self):
        lp = LinearProgram(
            c=np.array([3.0, 2.0]),
            A=np.array([[1.0, 1.0], [2.0, 1.0]]),
            rel=["<=", "<="],
            b=np.array([4.0, 6.0]),
        )
        res = simplex_solve(lp)
        assert res.status == OPTIMAL
        assert res.value == pytest.approx(10.0, abs=1e-9)
        np.testing.assert_allclose(res.x, [2.0, 2.0], atol=1e-9)

    def test_infeasible(self):
        lp = LinearProgram(
            c=np.array([1.0]),
            A=np.array([[1.0], [-1.0]]),
            rel=["<=", "<="],
            b=np.array([1.0, -2.0]),
        )
        assert simplex_solve(lp).status == INFEASIBLE

    def test_unbounded(self):
        lp = LinearProgram(
            c=np.array([1.0]), A=np.array([[-1.0]]), rel=["<="], b=np.array([0.0])
        )
        assert simplex_solve(lp).status == UNBOUNDED

    def test_equality_and_free_variable(self):
        # max x0 - x1 with x0 + x1 = 1, x1 free, x1 >= -2 via explicit bound
        lp = LinearProgram(
            c=np.array([1.0, -1.0]),
            A=np.array([[1.0, 1.0]]),
            rel=["="],
            b=np.array([1.0]),
            lb=np.array([0.0, -2.0]),
        )
        res = simplex_solve(lp)
        assert res.status == OPTIMAL
        assert res.value == pytest.approx(5.0, abs=1e-9)
        np.testing.assert_allclose(res.x, [3.0, -2.0], atol=1e-9)

    @given(st.integers(1, 4), st.integers(1, 5), st.integers(0, 2**31))
    @settings(max_examples=60, deadline=None)
    def test_matches_vertex_enumeration(self, n, m, seed):
        rng = np.random.default_rng(seed)
        lp = LinearProgram(
            c=rng.normal(size=n),
            A=rng.normal(size=(m, n)),
            rel=["<="] * m,
            b=rng.uniform(0.5, 2.0, size=m),  # origin feasible
        )
        res = simplex_solve(lp)
        truth = _vertex_enumeration_optimum(lp)
        if res.status == OPTIMAL:
            assert truth is not None
            assert res.value == pytest.approx(truth, rel=1e-7, abs=1e-7)
            assert np.all(lp.A @ res.x <= lp.b + 1e-8)
            assert np.all(res.x >= -1e-8)
        else:
            assert res.status == UNBOUNDED  # origin is feasible by construction


class TestRng:
    def test_reproducible(self):
        a, b = Rng(42), Rng(42)
        xs = [a.next_float() for _ in range(100)]
        ys = [b.next_float() for _ in range(100)]
        assert xs == ys

    def test_seed_sensitivity(self):
        assert Rng(1).next_float() != Rng(2).next_float()

    def test_uniform_range_and_moments(self):
        r = Rng(7)
        xs = np.array([r.next_float() for _ in range(20000)])
        assert np.all((xs >= 0) & (xs < 1))
        assert abs(xs.mean() - 0.5) < 0.01

    def test_choice_distribution(self):
        r = Rng(3)
        p = np.array([0.2, 0.5, 0.3])
        counts = np.bincount([r.choice(p) for _ in range(30000)], minlength=3)
        np.testing.assert_allclose(counts / 30000, p, atol=0.02)

    def test_choice_bad_probs(self):
        with pytest.raises(BadDistribution):
            Rng(0).choice(np.array([0.5, 0.6]))

    def test_spawn_streams_differ_and_are_stable(self):
        r = Rng(9)
        s1, s2 = r.spawn(1), r.spawn(2)
        assert s1.next_float() != s2.next_float()
        assert Rng(9).spawn(1).next_float() == Rng(9).spawn(1).next_float()
