import numpy as np
import pytest

from algebra.exact_linalg import (
    FpMatrix,
    check_prime,
    hstack,
    image_basis,
    nullspace_basis,
    quotient_projection,
    rref,
    LinearSolver,
    solve,
    solve_vector,
)
from constants import MAX_PRIME

P = 5


def test_rref_of_empty_matrix():
    R, pivots = rref(FpMatrix.zeros(0, 0, P))
    assert R.shape == (0, 0)
    assert pivots == []


def test_rref_of_identity():
    I = FpMatrix.identity(2, P)
    R, pivots = rref(I)
    assert R == I
    assert pivots == [0, 1]


def test_rref_of_rank_one_matrix():
    R, pivots = rref(FpMatrix([[2, 4], [1, 2]], P))
    assert pivots == [0]
    assert R == FpMatrix([[1, 2], [0, 0]], P)


def test_entries_are_reduced():
    M = FpMatrix([[7, -1]], P)
    assert M.tolist() == [[2, 4]]


def test_nullspace_of_injective_map_is_empty():
    N = nullspace_basis(FpMatrix.identity(3, P))
    assert N.shape == (3, 0)


def test_nullspace_of_zero_map_is_everything():
    N = nullspace_basis(FpMatrix.zeros(2, 3, P))
    assert N.shape == (3, 3)
    assert N.rank() == 3


def test_nullspace_of_single_equation():
    M = FpMatrix([[2, 4]], P)
    N = nullspace_basis(M)
    assert N.cols == 1
    assert (M @ N).is_zero()
    # proportional to (1, 2)
    assert (N.data[1, 0] - 2 * N.data[0, 0]) % P == 0


def test_solve_identity_returns_rhs():
    B = FpMatrix([[1, 2], [3, 4]], P)
    assert solve(FpMatrix.identity(2, P), B) == B


def test_solve_zero_system_is_deterministic():
    A, B = FpMatrix.zeros(2, 2, P), FpMatrix.zeros(2, 1, P)
    X = solve(A, B)
    assert X is not None and X.is_zero()
    assert solve(A, B) == X


def test_solve_reports_no_solution():
    assert solve(FpMatrix([[1], [0]], P), FpMatrix([[0], [1]], P)) is None


def test_solve_rejects_row_mismatch():
    with pytest.raises(ValueError):
        solve(FpMatrix.identity(2, P), FpMatrix.zeros(3, 1, P))


def test_inverse():
    M = FpMatrix([[2, 1], [0, 3]], P)
    assert M @ M.inverse() == FpMatrix.identity(2, P)
    with pytest.raises(ValueError):
        FpMatrix([[1, 2], [2, 4]], P).inverse()


def test_image_basis_spans_column_space():
    M = FpMatrix([[1, 2, 3], [2, 4, 1]], P)
    basis = image_basis(M)
    assert basis.cols == M.rank()
    assert hstack([basis, M], 2, P).rank() == basis.cols


def test_quotient_projection_kills_subspace():
    S = FpMatrix([[1], [1], [0]], P)
    pi, section = quotient_projection(S, 3)
    assert (pi @ S).is_zero()
    assert pi @ section == FpMatrix.identity(2, P)


def test_products_stay_exact_for_large_primes():
    p = 65521
    M = FpMatrix(np.full((4, 4), p - 1), p)
    assert (M @ M).tolist()[0][0] == 4


def test_check_prime():
    assert check_prime(7) == 7
    with pytest.raises(ValueError):
        check_prime(4)
    with pytest.raises(ValueError):
        check_prime(65537)
    assert 65537 > MAX_PRIME


def test_mixed_moduli_are_rejected():
    with pytest.raises(ValueError):
        FpMatrix.identity(2, 5) @ FpMatrix.identity(2, 7)


def test_linear_solver_agrees_with_solve_vector():
    rng = np.random.default_rng(3)
    A = FpMatrix(rng.integers(0, P, size=(4, 3)), P)
    A = hstack([A, FpMatrix.from_columns([A.data[:, 0] + A.data[:, 1]], 4, P)], 4, P)
    solver = LinearSolver(A)
    for _ in range(6):
        b = (A.data @ rng.integers(0, P, size=A.cols)) % P
        x = solver.solve_vector(b)
        assert np.array_equal(x, solve_vector(A, b))
        assert np.array_equal((A.data @ x) % P, b)


def test_linear_solver_reports_inconsistent_rows():
    solver = LinearSolver(FpMatrix([[1, 0], [2, 0], [0, 0]], P))
    assert solver.solve_vector([1, 2, 0]) is not None
    assert solver.solve_vector([1, 3, 0]) is None
    assert solver.solve_vector([0, 0, 1]) is None
    assert np.array_equal(solver.solve_vector([3, 1, 0]), [3, 0])
