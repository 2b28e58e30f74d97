import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exangulate.linalg import (
    Matrix,
    block_diag,
    block_matrix,
    column_space_basis,
    enumerate_vectors,
    hstack,
    in_column_space,
    inverse,
    is_invertible,
    kernel_basis,
    quotient_with_section,
    rank,
    rref,
    rref_solve,
    same_column_space,
    solve_unique,
    vstack,
)


def test_constructor_rejects_bad_shapes():
    with pytest.raises(ValueError):
        Matrix(2, 2, 2, (1, 0, 1))
    with pytest.raises(ValueError):
        Matrix(4, 1, 1, (1,))  # modulus not prime
    with pytest.raises(ValueError):
        Matrix(2, 1, 1, (2,))  # unreduced entry


def test_zero_dimensional_shapes_are_legal():
    z = Matrix.zeros(2, 0, 3)
    assert z.rows == 0 and z.cols == 3
    assert rank(z) == 0
    assert kernel_basis(z) and len(kernel_basis(z)) == 3
    zt = z.transpose()
    assert zt.rows == 3 and zt.cols == 0
    assert (z @ zt).rows == 0
    # 3x0 times 0x3 is the zero 3x3 matrix
    assert (zt @ z) == Matrix.zeros(2, 3, 3)


def test_from_rows_reduces_mod_p():
    m = Matrix.from_rows(3, [[4, -1], [9, 5]])
    assert m.entries == (1, 2, 0, 2)


def test_matmul_small_example():
    a = Matrix.from_rows(5, [[1, 2], [3, 4]])
    b = Matrix.from_rows(5, [[0, 1], [1, 1]])
    assert (a @ b).to_rows() == [[2, 3], [4, 2]]


def test_rref_leftmost_pivots_fixed_example():
    m = Matrix.from_rows(2, [[0, 1, 1], [1, 1, 0], [1, 0, 1]])
    r, pivots = rref(m)
    assert pivots == (0, 1)
    assert r.to_rows() == [[1, 0, 1], [0, 1, 1], [0, 0, 0]]


def test_kernel_basis_unit_in_free_coordinate():
    m = Matrix.from_rows(2, [[1, 0, 1], [0, 1, 1]])
    (k,) = kernel_basis(m)
    assert k.col_list(0) == [1, 1, 1]
    assert (m @ k).is_zero


def test_rref_solve_particular_solution_has_zero_free_coords():
    a = Matrix.from_rows(3, [[1, 1, 1]])
    b = Matrix.column(3, [2])
    x = rref_solve(a, b)
    assert x.col_list(0) == [2, 0, 0]


def test_rref_solve_inconsistent_returns_none():
    a = Matrix.from_rows(2, [[1, 0], [1, 0]])
    b = Matrix.column(2, [1, 0])
    assert rref_solve(a, b) is None
    with pytest.raises(ValueError):
        solve_unique(a, b)


def test_quotient_with_section_mod_diagonal():
    p = 2
    sub = [Matrix.column(p, [1, 1])]
    proj, sect = quotient_with_section(p, 2, sub)
    assert proj.rows == 1 and sect.cols == 1
    assert (proj @ sect) == Matrix.identity(p, 1)
    assert (proj @ sub[0]).is_zero


def test_quotient_with_section_trivial_subspace():
    proj, sect = quotient_with_section(2, 3, [])
    assert proj == Matrix.identity(2, 3)
    assert sect == Matrix.identity(2, 3)


def test_quotient_with_section_full_subspace():
    sub = [Matrix.column(2, [1, 0]), Matrix.column(2, [0, 1])]
    proj, sect = quotient_with_section(2, 2, sub)
    assert proj.rows == 0
    assert sect.cols == 0


def test_enumerate_vectors_order_and_count():
    vs = list(enumerate_vectors(2, 2))
    assert len(vs) == 4
    assert [v.col_list(0) for v in vs] == [[0, 0], [1, 0], [0, 1], [1, 1]]


def test_block_helpers():
    i2 = Matrix.identity(2, 2)
    z = Matrix.zeros(2, 2, 1)
    m = block_matrix([[i2, z]])
    assert m.rows == 2 and m.cols == 3
    d = block_diag(2, [i2, Matrix.identity(2, 1)])
    assert d == Matrix.from_rows(2, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert hstack([i2, i2]).cols == 4
    assert vstack([i2, i2]).rows == 4


def test_inverse_round_trip():
    m = Matrix.from_rows(5, [[1, 2], [3, 4]])
    assert is_invertible(m)
    assert (inverse(m) @ m) == Matrix.identity(5, 2)
    singular = Matrix.from_rows(5, [[1, 2], [2, 4]])
    assert not is_invertible(singular)
    with pytest.raises(ValueError):
        inverse(singular)


def test_column_space_predicates():
    a = Matrix.from_rows(2, [[1, 1], [0, 0], [1, 1]])
    b = Matrix.from_rows(2, [[1], [0], [1]])
    assert same_column_space(a, b)
    assert in_column_space(a, Matrix.column(2, [1, 0, 1]))
    assert not in_column_space(a, Matrix.column(2, [1, 1, 0]))
    basis = column_space_basis(a)
    assert len(basis) == 1 and basis[0].col_list(0) == [1, 0, 1]


def _random_matrix(rng, p, rows, cols):
    return Matrix(p, rows, cols, tuple(rng.randrange(p) for _ in range(rows * cols)))


def test_randomized_kernel_and_rank_consistency():
    rng = random.Random(20260815)
    for _ in range(300):
        p = rng.choice([2, 3, 5])
        rows = rng.randrange(0, 5)
        cols = rng.randrange(0, 5)
        m = _random_matrix(rng, p, rows, cols)
        ker = kernel_basis(m)
        assert rank(m) + len(ker) == cols
        for v in ker:
            assert (m @ v).is_zero
        if ker:
            assert rank(hstack(ker)) == len(ker)


def test_randomized_solve_agrees_with_enumeration():
    rng = random.Random(7)
    for _ in range(200):
        p = 2
        rows = rng.randrange(1, 4)
        cols = rng.randrange(1, 4)
        m = _random_matrix(rng, p, rows, cols)
        b = _random_matrix(rng, p, rows, 1)
        found = [v for v in enumerate_vectors(p, cols) if (m @ v) == b]
        x = rref_solve(m, b)
        if found:
            assert x is not None and (m @ x) == b
        else:
            assert x is None


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 4), st.integers(0, 4), st.data())
def test_rref_is_idempotent_and_rank_bounded(rows, cols, data):
    entries = data.draw(
        st.lists(st.integers(0, 1), min_size=rows * cols, max_size=rows * cols)
    )
    m = Matrix(2, rows, cols, tuple(entries))
    r, pivots = rref(m)
    r2, pivots2 = rref(r)
    assert r == r2 and pivots == pivots2
    assert len(pivots) <= min(rows, cols)


@settings(max_examples=120, deadline=None)
@given(st.integers(1, 4), st.data())
def test_quotient_projection_section_identity(dim, data):
    p = 2
    nvec = data.draw(st.integers(0, 3))
    sub = []
    for _ in range(nvec):
        sub.append(
            Matrix.column(p, data.draw(st.lists(st.integers(0, 1), min_size=dim, max_size=dim)))
        )
    proj, sect = quotient_with_section(p, dim, sub)
    q = proj.rows
    assert (proj @ sect) == Matrix.identity(p, q)
    for v in sub:
        assert (proj @ v).is_zero
    assert q == dim - rank(hstack(sub)) if sub else q == dim
