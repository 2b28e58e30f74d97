"""Exact dense linear algebra over a prime field F_p.

Everything downstream (quiver representations, Ext groups, axiom checks)
reduces to solving small linear systems over F_p, so this module keeps the
contract strict: matrices are immutable, entries are residues in 0..p-1,
every operation checks shapes and moduli, and row reduction always picks the
leftmost available pivot so that bases and solutions are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _inv_mod(a: int, p: int) -> int:
    # p is prime and a is nonzero mod p.
    return pow(a, p - 2, p)


@dataclass(frozen=True)
class Matrix:
    """Immutable row-major matrix over F_p. 0xN and Nx0 shapes are legal."""

    p: int
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix dimensions")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"entry count {len(self.entries)} != {self.rows}x{self.cols}"
            )
        if any(not (0 <= e < self.p) for e in self.entries):
            raise ValueError("entries must be reduced residues mod p")

    # -- construction -----------------------------------------------------

    @staticmethod
    def from_rows(p: int, rows: Sequence[Sequence[int]], cols: int | None = None) -> "Matrix":
        """Build from nested sequences, reducing entries mod p.

        `cols` is only needed to disambiguate a matrix with zero rows.
        """
        r = len(rows)
        if r == 0:
            if cols is None:
                raise ValueError("zero-row matrix needs an explicit column count")
            return Matrix(p, 0, cols, ())
        c = len(rows[0])
        if any(len(row) != c for row in rows):
            raise ValueError("ragged rows")
        if cols is not None and cols != c:
            raise ValueError("explicit column count disagrees with data")
        return Matrix(p, r, c, tuple(x % p for row in rows for x in row))

    @staticmethod
    def zeros(p: int, rows: int, cols: int) -> "Matrix":
        return Matrix(p, rows, cols, (0,) * (rows * cols))

    @staticmethod
    def identity(p: int, n: int) -> "Matrix":
        return Matrix(p, n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @staticmethod
    def column(p: int, values: Sequence[int]) -> "Matrix":
        return Matrix(p, len(values), 1, tuple(v % p for v in values))

    # -- access -----------------------------------------------------------

    def at(self, i: int, j: int) -> int:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError((i, j))
        return self.entries[i * self.cols + j]

    def row_list(self, i: int) -> list[int]:
        return list(self.entries[i * self.cols : (i + 1) * self.cols])

    def to_rows(self) -> list[list[int]]:
        return [self.row_list(i) for i in range(self.rows)]

    def col_list(self, j: int) -> list[int]:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def column_at(self, j: int) -> "Matrix":
        return Matrix(self.p, self.rows, 1, tuple(self.col_list(j)))

    @property
    def is_zero(self) -> bool:
        return all(e == 0 for e in self.entries)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    # -- arithmetic -------------------------------------------------------

    def _check_same_shape(self, other: "Matrix") -> None:
        if self.p != other.p:
            raise ValueError("modulus mismatch")
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} vs {other.rows}x{other.cols}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        p = self.p
        return Matrix(p, self.rows, self.cols,
                      tuple((a + b) % p for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        p = self.p
        return Matrix(p, self.rows, self.cols,
                      tuple((a - b) % p for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "Matrix":
        p = self.p
        return Matrix(p, self.rows, self.cols, tuple((-a) % p for a in self.entries))

    def scale(self, c: int) -> "Matrix":
        p = self.p
        c %= p
        return Matrix(p, self.rows, self.cols, tuple((c * a) % p for a in self.entries))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.p != other.p:
            raise ValueError("modulus mismatch")
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        p = self.p
        n, k, m = self.rows, self.cols, other.cols
        a, b = self.entries, other.entries
        out = [0] * (n * m)
        for i in range(n):
            arow = a[i * k : (i + 1) * k]
            orow = out
            base = i * m
            for t in range(k):
                av = arow[t]
                if av:
                    brow = b[t * m : (t + 1) * m]
                    for j in range(m):
                        orow[base + j] = (orow[base + j] + av * brow[j]) % p
        return Matrix(p, n, m, tuple(out))

    def transpose(self) -> "Matrix":
        return Matrix(self.p, self.cols, self.rows,
                      tuple(self.entries[i * self.cols + j]
                            for j in range(self.cols) for i in range(self.rows)))


def hstack(blocks: Sequence[Matrix]) -> Matrix:
    """Concatenate matrices side by side (all with the same row count)."""
    if not blocks:
        raise ValueError("hstack of nothing")
    p, rows = blocks[0].p, blocks[0].rows
    if any(b.p != p or b.rows != rows for b in blocks):
        raise ValueError("hstack blocks disagree in modulus or row count")
    out: list[int] = []
    for i in range(rows):
        for b in blocks:
            out.extend(b.entries[i * b.cols : (i + 1) * b.cols])
    return Matrix(p, rows, sum(b.cols for b in blocks), tuple(out))


def vstack(blocks: Sequence[Matrix]) -> Matrix:
    if not blocks:
        raise ValueError("vstack of nothing")
    p, cols = blocks[0].p, blocks[0].cols
    if any(b.p != p or b.cols != cols for b in blocks):
        raise ValueError("vstack blocks disagree in modulus or column count")
    out: list[int] = []
    for b in blocks:
        out.extend(b.entries)
    return Matrix(p, sum(b.rows for b in blocks), cols, tuple(out))


def block_matrix(grid: Sequence[Sequence[Matrix]]) -> Matrix:
    return vstack([hstack(row) for row in grid])


def block_diag(p: int, blocks: Sequence[Matrix]) -> Matrix:
    if not blocks:
        return Matrix.zeros(p, 0, 0)
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    grid = []
    for i, b in enumerate(blocks):
        row = []
        for j, c in enumerate(blocks):
            row.append(b if i == j else Matrix.zeros(p, b.rows, c.cols))
        grid.append(row)
    return block_matrix(grid)


# -- row reduction ---------------------------------------------------------


def rref(m: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form with leftmost pivots.

    Returns (R, pivot_columns).  Deterministic: scanning left to right, the
    first row with a nonzero entry in the current column becomes the pivot
    row.
    """
    p = m.p
    rows = [m.row_list(i) for i in range(m.rows)]
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        pivot_row = None
        for i in range(r, m.rows):
            if rows[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = _inv_mod(rows[r][c], p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(m.rows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m.rows:
            break
    flat = tuple(x for row in rows for x in row)
    return Matrix(p, m.rows, m.cols, flat), tuple(pivots)


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def kernel_basis(m: Matrix) -> list[Matrix]:
    """Basis of the right null space, as column vectors.

    One basis vector per free column, with a 1 in the free column's slot;
    enumerated in increasing column order (leftmost-pivot convention).
    """
    r, pivots = rref(m)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    basis: list[Matrix] = []
    p = m.p
    for fc in free:
        v = [0] * m.cols
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-r.at(i, fc)) % p
        basis.append(Matrix.column(p, v))
    return basis


def rref_solve(a: Matrix, b: Matrix) -> Matrix | None:
    """One solution x of a @ x = b (b may have several columns), or None.

    The particular solution has zeros in all free coordinates, so it is the
    unique reproducible representative of the solution coset.
    """
    if a.p != b.p:
        raise ValueError("modulus mismatch")
    if a.rows != b.rows:
        raise ValueError("incompatible right-hand side")
    aug = hstack([a, b])
    r, pivots = rref(aug)
    for pc in pivots:
        if pc >= a.cols:
            return None
    sol_rows = [[0] * b.cols for _ in range(a.cols)]
    for i, pc in enumerate(pivots):
        for j in range(b.cols):
            sol_rows[pc][j] = r.at(i, a.cols + j)
    return Matrix.from_rows(a.p, sol_rows, cols=b.cols)


def solve_unique(a: Matrix, b: Matrix) -> Matrix:
    x = rref_solve(a, b)
    if x is None:
        raise ValueError("inconsistent linear system")
    return x


def column_space_basis(m: Matrix) -> list[Matrix]:
    """Columns of m indexed by the pivot columns of its rref."""
    _, pivots = rref(m)
    return [m.column_at(j) for j in pivots]


def in_column_space(m: Matrix, v: Matrix) -> bool:
    return rref_solve(m, v) is not None


def same_column_space(a: Matrix, b: Matrix) -> bool:
    if a.p != b.p or a.rows != b.rows:
        raise ValueError("incomparable column spaces")
    ra = rank(a)
    rb = rank(b)
    return ra == rb == rank(hstack([a, b]))


def quotient_with_section(p: int, dim: int, subspace: Sequence[Matrix]) -> tuple[Matrix, Matrix]:
    """Coordinates on F_p^dim / span(subspace).

    Returns (proj, sect): proj is q x dim, sect is dim x q with
    proj @ sect = identity, and proj kills exactly the subspace.  The chosen
    complement is spanned by the standard basis vectors at the non-pivot
    coordinates of the subspace matrix, so representatives are reproducible.
    """
    for v in subspace:
        if v.p != p or v.rows != dim or v.cols != 1:
            raise ValueError("subspace vectors must be dim x 1 columns over F_p")
    if subspace:
        w = hstack(list(subspace))
    else:
        w = Matrix.zeros(p, dim, 0)
    # Row-reduce the transpose: pivot coordinates belong to the subspace's
    # echelon support, the free coordinates index a complement.
    rt, pivots = rref(w.transpose())
    sub_rank = len(pivots)
    q = dim - sub_rank
    free = [c for c in range(dim) if c not in set(pivots)]
    # Section: complement basis vectors.
    sect = Matrix.from_rows(
        p, [[1 if free[j] == i else 0 for j in range(q)] for i in range(dim)], cols=q
    )
    # Projection: for each coordinate, express e_i mod subspace in the
    # complement coordinates.  Using the reduced rows: e_{pivot_k} ==
    # -sum_{free j} rt[k][j] e_j (mod subspace).
    proj_cols: list[list[int]] = []
    for i in range(dim):
        if i in set(pivots):
            k = list(pivots).index(i)
            col = [(-rt.at(k, fj)) % p for fj in free]
        else:
            col = [1 if fj == i else 0 for fj in free]
        proj_cols.append(col)
    proj = Matrix.from_rows(p, [[proj_cols[i][r_] for i in range(dim)] for r_ in range(q)], cols=dim)
    return proj, sect


def enumerate_vectors(p: int, dim: int) -> Iterator[Matrix]:
    """All column vectors of F_p^dim in lexicographic coordinate order."""
    total = p ** dim
    for idx in range(total):
        v = []
        t = idx
        for _ in range(dim):
            v.append(t % p)
            t //= p
        yield Matrix.column(p, v)


def is_invertible(m: Matrix) -> bool:
    return m.is_square and rank(m) == m.rows


def inverse(m: Matrix) -> Matrix:
    if not m.is_square:
        raise ValueError("only square matrices invert")
    x = rref_solve(m, Matrix.identity(m.p, m.rows))
    if x is None:
        raise ValueError("matrix is singular")
    return x
