import numpy as np
import pytest

from paritybounds.simplex import simplex_max


def test_textbook_lp():
    # max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), value 36
    res = simplex_max(
        c=[3.0, 5.0],
        a=[[1.0, 0.0], [0.0, 2.0], [3.0, 2.0]],
        b=[4.0, 12.0, 18.0],
    )
    assert res.value == pytest.approx(36.0)
    assert res.x == pytest.approx([2.0, 6.0])


def test_duals_are_shadow_prices():
    res = simplex_max(
        c=[3.0, 5.0],
        a=[[1.0, 0.0], [0.0, 2.0], [3.0, 2.0]],
        b=[4.0, 12.0, 18.0],
    )
    # strong duality: b . duals == value; duals nonnegative
    assert float(np.dot(res.duals, [4.0, 12.0, 18.0])) == pytest.approx(res.value)
    assert (res.duals >= -1e-12).all()


def test_degenerate_problem_terminates():
    # classic cycling-prone example (Beale); Bland's rule must terminate
    res = simplex_max(
        c=[0.75, -150.0, 0.02, -6.0],
        a=[[0.25, -60.0, -0.04, 9.0],
           [0.5, -90.0, -0.02, 3.0],
           [0.0, 0.0, 1.0, 0.0]],
        b=[0.0, 0.0, 1.0],
    )
    assert res.value == pytest.approx(0.05)


def test_unbounded_raises():
    with pytest.raises(ArithmeticError):
        simplex_max(c=[1.0, 0.0], a=[[0.0, 1.0]], b=[1.0])


def test_negative_rhs_rejected():
    with pytest.raises(ValueError):
        simplex_max(c=[1.0], a=[[1.0]], b=[-1.0])


def test_zero_objective():
    res = simplex_max(c=[0.0, 0.0], a=[[1.0, 1.0]], b=[5.0])
    assert res.value == 0.0
    assert res.iterations == 0


def test_random_lps_against_vertex_enumeration():
    # brute-force oracle: optimum of a bounded LP sits at a vertex; enumerate
    # all basis intersections of {A y <= b, y >= 0} in 2D
    rng = np.random.default_rng(5)
    for _ in range(25):
        a = rng.uniform(0.2, 1.5, size=(3, 2))
        b = rng.uniform(0.5, 2.0, size=3)
        c = rng.uniform(0.1, 1.0, size=2)
        rows = np.vstack([a, -np.eye(2)])
        rhs = np.concatenate([b, np.zeros(2)])
        best = 0.0
        for i in range(len(rows)):
            for j in range(i + 1, len(rows)):
                mat = rows[[i, j]]
                if abs(np.linalg.det(mat)) < 1e-12:
                    continue
                v = np.linalg.solve(mat, rhs[[i, j]])
                if (rows @ v <= rhs + 1e-9).all():
                    best = max(best, float(c @ v))
        res = simplex_max(c, a, b)
        assert res.value == pytest.approx(best, abs=1e-9)
