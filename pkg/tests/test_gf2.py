import numpy as np
import pytest

from gdsbp import gf2


def test_rref_transform(rng):
    for _ in range(30):
        a = rng.integers(0, 2, size=(rng.integers(1, 9), rng.integers(1, 9)))
        red, piv, t = gf2.rref(a, track=True)
        assert np.array_equal(gf2.matmul(t, a), red)
        assert len(piv) == gf2.rank(a)


def test_solve_left(rng):
    a = rng.integers(0, 2, size=(6, 10))
    r = rng.integers(0, 2, size=(4, 6))
    b = gf2.matmul(r, a)
    sol = gf2.solve_left(a, b)
    assert np.array_equal(gf2.matmul(sol, a), b)


def test_solve_left_outside_row_space():
    with pytest.raises(ValueError):
        gf2.solve_left([[1, 0]], [[0, 1]])


def test_matmul_vector():
    assert np.array_equal(gf2.matmul([[1, 1], [0, 1]], [1, 1]), [0, 1])
