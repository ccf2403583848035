"""Exact integer Smith normal form and abelianized presentations.

Everything here runs over Python's arbitrary-precision integers; no
floating point is involved anywhere, because the torsion coefficients
feed equality checks between independently computed homology groups and
a single rounding error would void that comparison.
"""

from __future__ import annotations

from .signature import Presentation

Matrix = list[list[int]]


def _identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _swap_rows(mat: Matrix, i: int, j: int) -> None:
    mat[i], mat[j] = mat[j], mat[i]


def _swap_cols(mat: Matrix, i: int, j: int) -> None:
    for row in mat:
        row[i], row[j] = row[j], row[i]


def _add_row(mat: Matrix, src: int, dst: int, factor: int) -> None:
    if factor:
        row_s, row_d = mat[src], mat[dst]
        for k in range(len(row_d)):
            row_d[k] += factor * row_s[k]


def _add_col(mat: Matrix, src: int, dst: int, factor: int) -> None:
    if factor:
        for row in mat:
            row[dst] += factor * row[src]


def _smith(matrix: list[list[int]], track_u: bool, track_v: bool):
    """Elimination core; transform matrices are maintained on demand."""
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    d = [list(map(int, row)) for row in matrix]
    if any(len(row) != cols for row in d):
        raise ValueError("ragged matrix")
    u = _identity(rows) if track_u else None
    v = _identity(cols) if track_v else None

    t = 0
    while t < min(rows, cols):
        # Smallest nonzero entry of the trailing block; a unit entry is
        # taken immediately since nothing can beat it.
        pivot = None
        best = 0
        for i in range(t, rows):
            row = d[i]
            for j in range(t, cols):
                e = row[j]
                if e:
                    if e < 0:
                        e = -e
                    if e == 1:
                        pivot = (i, j)
                        best = 1
                        break
                    if pivot is None or e < best:
                        pivot = (i, j)
                        best = e
            if best == 1:
                break
        if pivot is None:
            break
        _swap_rows(d, t, pivot[0])
        if u:
            _swap_rows(u, t, pivot[0])
        _swap_cols(d, t, pivot[1])
        if v:
            _swap_cols(v, t, pivot[1])

        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, rows):
                if d[i][t]:
                    q = d[i][t] // d[t][t]
                    _add_row(d, t, i, -q)
                    if u:
                        _add_row(u, t, i, -q)
                    if d[i][t]:
                        # Remainder became the new smallest entry.
                        _swap_rows(d, t, i)
                        if u:
                            _swap_rows(u, t, i)
                        dirty = True
            for j in range(t + 1, cols):
                if d[t][j]:
                    q = d[t][j] // d[t][t]
                    _add_col(d, t, j, -q)
                    if v:
                        _add_col(v, t, j, -q)
                    if d[t][j]:
                        _swap_cols(d, t, j)
                        if v:
                            _swap_cols(v, t, j)
                        dirty = True
            if not dirty:
                # Pivot must divide the whole trailing block for the
                # divisibility chain; fold an offending row in and redo.
                for i in range(t + 1, rows):
                    bad = next((j for j in range(t + 1, cols) if d[i][j] % d[t][t]), None)
                    if bad is not None:
                        _add_row(d, i, t, 1)
                        if u:
                            _add_row(u, i, t, 1)
                        dirty = True
                        break
        if d[t][t] < 0:
            for k in range(cols):
                d[t][k] = -d[t][k]
            if u:
                for k in range(rows):
                    u[t][k] = -u[t][k]
        t += 1

    return d, u, v


def smith_normal_form(matrix: list[list[int]], with_transforms: bool = False):
    """Diagonalize an integer matrix by unimodular row/column operations.

    Returns the diagonal matrix D with d_i >= 0 and d_i | d_{i+1}.  With
    ``with_transforms`` also returns unimodular U, V with U A V = D; V
    is what lattice-membership tests below consume.
    """
    d, u, v = _smith(matrix, with_transforms, with_transforms)
    if with_transforms:
        return d, u, v
    return d


def diagonal(matrix: Matrix) -> list[int]:
    return [matrix[i][i] for i in range(min(len(matrix), len(matrix[0]) if matrix else 0))]


def abelian_invariants(matrix: list[list[int]]) -> tuple[int, tuple[int, ...]]:
    """Invariants of Z^cols / (row lattice of ``matrix``).

    Returns ``(free_rank, torsion)`` with the torsion coefficients in
    divisibility order, entries equal to 1 dropped.
    """
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    if rows == 0 or cols == 0:
        return cols, ()
    diag = diagonal(smith_normal_form(matrix))
    rank = sum(1 for d in diag if d != 0)
    torsion = tuple(d for d in diag if d > 1)
    return cols - rank, torsion


class RowLatticeSolver:
    """One Smith reduction of a matrix, reused across queries.

    Membership tests and quotient invariants both read the same
    diagonalization, so callers with several questions about one row
    lattice pay for the elimination once.
    """

    def __init__(self, matrix: list[list[int]]) -> None:
        self.rows = len(matrix)
        self.cols = len(matrix[0]) if self.rows else 0
        if self.rows:
            d, _, v = _smith(matrix, False, True)
            self._diag = diagonal(d)
            self._v = v
        else:
            self._diag = []
            self._v = None

    def contains(self, vector: list[int]) -> bool:
        if len(vector) != self.cols:
            raise ValueError("vector length does not match matrix width")
        if self.rows == 0:
            return all(x == 0 for x in vector)
        v = self._v
        transformed = [0] * self.cols
        for i, x in enumerate(vector):
            if x:
                row = v[i]
                for j in range(self.cols):
                    transformed[j] += x * row[j]
        diag = self._diag
        known = len(diag)
        for j, value in enumerate(transformed):
            dj = diag[j] if j < known else 0
            if dj == 0:
                if value:
                    return False
            elif value % dj:
                return False
        return True

    def invariants(self) -> tuple[int, tuple[int, ...]]:
        """Free rank and torsion of Z^cols modulo the row lattice."""
        if self.rows == 0 or self.cols == 0:
            return self.cols, ()
        rank = sum(1 for d in self._diag if d != 0)
        torsion = tuple(d for d in self._diag if d > 1)
        return self.cols - rank, torsion


def in_row_lattice(matrix: list[list[int]], vector: list[int]) -> bool:
    """Decide whether ``vector`` lies in the integer row span of ``matrix``."""
    return RowLatticeSolver(matrix).contains(vector)


def exponent_matrix(pres: Presentation) -> list[list[int]]:
    """Relation-by-generator exponent sums of a presentation."""
    names = pres.generator_names
    index = {name: k for k, name in enumerate(names)}
    rows = []
    for rel in pres.relations:
        row = [0] * len(names)
        for name, exp in rel:
            row[index[name]] += exp
        rows.append(row)
    return rows


def presentation_abelianization(pres: Presentation) -> tuple[int, tuple[int, ...]]:
    """Free rank and torsion of the abelianized presentation."""
    matrix = exponent_matrix(pres)
    if not matrix:
        return len(pres.generators), ()
    return abelian_invariants(matrix)
