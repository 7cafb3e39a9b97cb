"""Exact integer and rational matrix algebra.

Everything here runs on Python's arbitrary-precision integers and
``fractions.Fraction``; no floating point enters any computation.  Entry
magnitudes around 10**18 are routine (products of minors far exceed
machine words, which is why exactness is non-negotiable).

Hermite normal form convention (column style): for an n x m matrix A we
return H = A @ U with U in GL_m(Z) such that

* the r pivot columns come first, the remaining columns are zero,
* pivot rows strictly increase left to right and each pivot is positive,
* in a pivot's row, entries in earlier columns are reduced into
  [0, pivot).

Columns of A generate Z^n exactly when the pivot block of H is the n x n
identity.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence


class ExactMatrix:
    """Immutable integer matrix, entries stored row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Sequence[int]):
        if rows < 0 or cols < 0:
            raise ValueError("negative dimensions")
        entries = tuple(int(e) for e in entries)
        if len(entries) != rows * cols:
            raise ValueError(
                f"expected {rows * cols} entries, got {len(entries)}"
            )
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "ExactMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        if any(len(row) != c for row in rows):
            raise ValueError("ragged rows")
        return cls(r, c, [e for row in rows for e in row])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]]) -> "ExactMatrix":
        m = len(columns)
        n = len(columns[0]) if m else 0
        if any(len(col) != n for col in columns):
            raise ValueError("ragged columns")
        return cls(n, m, [columns[j][i] for i in range(n) for j in range(m)])

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    def entry(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c : (i + 1) * c]) for i in range(self.rows)]

    def columns(self) -> list[list[int]]:
        return [
            [self.entries[i * self.cols + j] for i in range(self.rows)]
            for j in range(self.cols)
        ]

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix.from_rows(self.columns())

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        rows_a = self.to_rows()
        cols_b = other.columns()
        out = [
            sum(a * b for a, b in zip(row, col)) for row in rows_a for col in cols_b
        ]
        return ExactMatrix(self.rows, other.cols, out)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ExactMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        return f"ExactMatrix.from_rows({self.to_rows()!r})"

    # JSON carries entries as decimal strings so arbitrary magnitudes
    # survive any parser.
    def to_json(self) -> str:
        return json.dumps(
            {
                "rows": self.rows,
                "cols": self.cols,
                "entries": [str(e) for e in self.entries],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "ExactMatrix":
        obj = json.loads(text)
        return cls(obj["rows"], obj["cols"], [int(e) for e in obj["entries"]])


# ---------------------------------------------------------------------------
# Hermite normal form
# ---------------------------------------------------------------------------


def _hnf_columns(cols: list[list[int]], n: int, ucols: Optional[list[list[int]]]):
    """In-place column HNF on a list of columns; ucols mirrors the ops.

    Returns the list of pivot rows (one per pivot column 0..r-1).
    """
    m = len(cols)
    r = 0
    pivot_rows = []
    for i in range(n):
        if r == m:
            break
        # gcd-eliminate row i across columns r..m-1
        while True:
            nz = [j for j in range(r, m) if cols[j][i]]
            if len(nz) <= 1:
                break
            j0 = min(nz, key=lambda j: abs(cols[j][i]))
            a = cols[j0][i]
            for j in nz:
                if j == j0:
                    continue
                q = cols[j][i] // a
                if q:
                    cj, c0 = cols[j], cols[j0]
                    for t in range(i, n):
                        cj[t] -= q * c0[t]
                    if ucols is not None:
                        uj, u0 = ucols[j], ucols[j0]
                        for t in range(m):
                            uj[t] -= q * u0[t]
        nz = [j for j in range(r, m) if cols[j][i]]
        if not nz:
            continue
        j0 = nz[0]
        if j0 != r:
            cols[r], cols[j0] = cols[j0], cols[r]
            if ucols is not None:
                ucols[r], ucols[j0] = ucols[j0], ucols[r]
        if cols[r][i] < 0:
            cols[r] = [-x for x in cols[r]]
            if ucols is not None:
                ucols[r] = [-x for x in ucols[r]]
        pivot = cols[r][i]
        # reduce row i of the earlier pivot columns into [0, pivot)
        for k in range(r):
            q = cols[k][i] // pivot
            if q:
                ck, cr = cols[k], cols[r]
                for t in range(i, n):
                    ck[t] -= q * cr[t]
                if ucols is not None:
                    uk, ur = ucols[k], ucols[r]
                    for t in range(m):
                        uk[t] -= q * ur[t]
        pivot_rows.append(i)
        r += 1
    return pivot_rows


def hnf(a: ExactMatrix) -> tuple[ExactMatrix, ExactMatrix]:
    """Column Hermite normal form: returns (H, U) with A @ U = H.

    U is m x m with determinant +-1; zero columns of H sit at the right.
    Any integer matrix has an HNF, so this never fails for m >= 1.
    """
    if a.cols < 1:
        raise ValueError("need at least one column")
    cols = a.columns()
    ucols = [[1 if i == j else 0 for i in range(a.cols)] for j in range(a.cols)]
    _hnf_columns(cols, a.rows, ucols)
    return ExactMatrix.from_columns(cols), ExactMatrix.from_columns(ucols)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with g = gcd(a, b) >= 0 and x a + y b = g.

    Half-extended: only the x sequence is carried, y is recovered at the
    end (requires b != 0).
    """
    x, next_x = 1, 0
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        g, next_g = next_g, g - q * next_g
    if g < 0:
        g, x = -g, -x
    return g, x, (g - x * a) // b


def unimodular_columns(cols: Sequence[Sequence[int]], n: int) -> bool:
    """True iff the given columns (length n each) generate Z^n.

    Decides the HNF-pivots-all-one condition row by row: a Bezout
    combination of the active columns realizes the row gcd as a new
    pivot column (anything but 1 fails immediately), after which the row
    is eliminated from the rest.  Equivalent to inspecting the pivot
    block of hnf(), but one pass per row and no transform bookkeeping.
    """
    m = len(cols)
    if m < n:
        return False
    if n == 1:
        g = 0
        for col in cols:
            g = gcd(g, col[0])
            if g == 1:
                return True
        return False
    work = [list(c) for c in cols]
    for i in range(n):
        # cheap necessary condition first: the row gcd is the HNF pivot
        g = 0
        for j in range(i, len(work)):
            v = work[j][i]
            if v:
                g = gcd(g, v)
                if g == 1:
                    break
        if g != 1:
            return False
        g = 0
        combo = None
        for j in range(i, len(work)):
            a = work[j][i]
            if not a:
                continue
            if combo is None:
                combo = work[j][i:]
                g = -a if a < 0 else a
                if g != a:
                    combo = [-u for u in combo]
                if g == 1:
                    break
                continue
            if a % g == 0:
                continue
            g, x, y = _xgcd(g, a)
            cj = work[j]
            combo = [x * u + y * cj[i + t] for t, u in enumerate(combo)]
            if g == 1:
                break
        if combo is None or g != 1:
            return False
        # row i of every active column dies; the combo becomes the pivot
        for j in range(i, len(work)):
            cj = work[j]
            q = cj[i]
            if q:
                for t in range(i, n):
                    cj[t] -= q * combo[t - i]
        work.insert(i, [0] * i + combo)
    return True


def is_unimodular(a: ExactMatrix) -> bool:
    """True iff the columns of a generate Z^n (n = a.rows)."""
    return unimodular_columns(a.columns(), a.rows)


# ---------------------------------------------------------------------------
# Determinant (Bareiss fraction-free elimination)
# ---------------------------------------------------------------------------


def det(a: ExactMatrix) -> int:
    if a.rows != a.cols:
        raise ValueError("determinant requires a square matrix")
    return _det_rows(a.to_rows())


def _det_rows(m: list[list[int]]) -> int:
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            row_i = m[i]
            row_k = m[k]
            mik = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


def snf(a: ExactMatrix) -> list[int]:
    """Invariant factors d_1 | d_2 | ... | d_r of a (zeros dropped).

    The zero matrix yields an empty list.  prod(d_i over i <= k) equals
    the gcd of all k x k minors.
    """
    d, _, _ = snf_with_transforms(a, want_transforms=False)
    return d


def snf_with_transforms(
    a: ExactMatrix, want_transforms: bool = True
) -> tuple[list[int], Optional[ExactMatrix], Optional[ExactMatrix]]:
    """Diagonalize: U @ A @ V = diag(d_1..d_r, 0...).

    Returns (divisors, U, V); U is rows x rows, V is cols x cols, both
    unimodular.  Transforms are skipped when not requested.
    """
    n, m = a.rows, a.cols
    mat = a.to_rows()
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)] if want_transforms else None
    v = [[1 if i == j else 0 for j in range(m)] for i in range(m)] if want_transforms else None

    def row_op(i, k, q):  # row_i -= q * row_k
        mi, mk = mat[i], mat[k]
        for t in range(m):
            mi[t] -= q * mk[t]
        if u is not None:
            ui, uk = u[i], u[k]
            for t in range(n):
                ui[t] -= q * uk[t]

    def col_op(j, k, q):  # col_j -= q * col_k
        for row in mat:
            row[j] -= q * row[k]
        if v is not None:
            for row in v:
                row[j] -= q * row[k]

    def swap_rows(i, k):
        mat[i], mat[k] = mat[k], mat[i]
        if u is not None:
            u[i], u[k] = u[k], u[i]

    def swap_cols(j, k):
        for row in mat:
            row[j], row[k] = row[k], row[j]
        if v is not None:
            for row in v:
                row[j], row[k] = row[k], row[j]

    def select_pivot(t) -> bool:
        """Swap a minimal-magnitude nonzero of the trailing block into
        (t, t) and make it positive; False when the block is zero."""
        best = None
        pos = None
        for i in range(t, n):
            for j in range(t, m):
                e = mat[i][j]
                if e and (best is None or -best < e < best):
                    best = abs(e)
                    pos = (i, j)
        if pos is None:
            return False
        swap_rows(t, pos[0])
        swap_cols(t, pos[1])
        if mat[t][t] < 0:
            for j in range(m):
                mat[t][j] = -mat[t][j]
            if u is not None:
                for j in range(n):
                    u[t][j] = -u[t][j]
        return True

    t = 0
    limit = min(n, m)
    while t < limit:
        if not select_pivot(t):
            break
        while True:
            # one reduction sweep with symmetric quotients: remainders end
            # up in [-p/2, p/2], so re-selecting the global minimum at
            # least halves the pivot and entry growth stays tame
            p = mat[t][t]
            half = p // 2
            for i in range(t + 1, n):
                val = mat[i][t]
                if val:
                    q = (val + half) // p
                    if q:
                        row_op(i, t, q)
            for j in range(t + 1, m):
                val = mat[t][j]
                if val:
                    q = (val + half) // p
                    if q:
                        col_op(j, t, q)
            if any(mat[i][t] for i in range(t + 1, n)) or any(
                mat[t][j] for j in range(t + 1, m)
            ):
                select_pivot(t)
                continue
            # enforce divisibility of the trailing block by the pivot
            p = mat[t][t]
            culprit = None
            for i in range(t + 1, n):
                for j in range(t + 1, m):
                    if mat[i][j] % p:
                        culprit = i
                        break
                if culprit is not None:
                    break
            if culprit is None:
                break
            row_op(t, culprit, -1)  # add the offending row to row t
        t += 1

    divisors = [mat[i][i] for i in range(limit) if i < t and mat[i][i]]
    u_m = ExactMatrix.from_rows(u) if u is not None else None
    v_m = ExactMatrix.from_rows(v) if v is not None else None
    return divisors, u_m, v_m


# ---------------------------------------------------------------------------
# Exact linear solves
# ---------------------------------------------------------------------------


def solve_integral(b: ExactMatrix, v: Sequence[int]) -> Optional[list[int]]:
    """Solve B x = v over the integers; None when x is not integral.

    B must be square and nonsingular (singular raises).  The solve runs
    in exact rational arithmetic, then checks integrality.
    """
    if b.rows != b.cols:
        raise ValueError("solve_integral requires a square matrix")
    if len(v) != b.rows:
        raise ValueError("dimension mismatch")
    x = _solve_fractions([[Fraction(e) for e in row] for row in b.to_rows()],
                         [Fraction(int(c)) for c in v])
    if x is None:
        raise ValueError("singular matrix")
    if all(c.denominator == 1 for c in x):
        return [c.numerator for c in x]
    return None


def _solve_fractions(
    rows: list[list[Fraction]], rhs: list[Fraction]
) -> Optional[list[Fraction]]:
    """Gaussian elimination over Fractions; None when singular."""
    n = len(rows)
    aug = [rows[i] + [rhs[i]] for i in range(n)]
    for k in range(n):
        pivot_row = next((i for i in range(k, n) if aug[i][k]), None)
        if pivot_row is None:
            return None
        aug[k], aug[pivot_row] = aug[pivot_row], aug[k]
        pk = aug[k][k]
        for i in range(k + 1, n):
            if aug[i][k]:
                factor = aug[i][k] / pk
                for j in range(k, n + 1):
                    aug[i][j] -= factor * aug[k][j]
    x = [Fraction(0)] * n
    for k in range(n - 1, -1, -1):
        s = aug[k][n] - sum(aug[k][j] * x[j] for j in range(k + 1, n))
        x[k] = s / aug[k][k]
    return x


# ---------------------------------------------------------------------------
# Rational matrices
# ---------------------------------------------------------------------------


class RationalMatrix:
    """Immutable matrix of exact rationals (Fraction keeps entries reduced
    with positive denominators, which is exactly the canonical form we
    need)."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Sequence[Fraction]):
        entries = tuple(Fraction(e) for e in entries)
        if len(entries) != rows * cols:
            raise ValueError("entry count mismatch")
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RationalMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        if any(len(row) != c for row in rows):
            raise ValueError("ragged rows")
        return cls(r, c, [Fraction(e) for row in rows for e in row])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> "RationalMatrix":
        m = len(columns)
        n = len(columns[0]) if m else 0
        return cls(n, m, [Fraction(columns[j][i]) for i in range(n) for j in range(m)])

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, [Fraction(int(i == j)) for i in range(n) for j in range(n)])

    def entry(self, i: int, j: int) -> Fraction:
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[Fraction]]:
        c = self.cols
        return [list(self.entries[i * c : (i + 1) * c]) for i in range(self.rows)]

    def columns(self) -> list[list[Fraction]]:
        return [
            [self.entries[i * self.cols + j] for i in range(self.rows)]
            for j in range(self.cols)
        ]

    def column(self, j: int) -> list[Fraction]:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RationalMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        return f"RationalMatrix.from_rows({[[str(e) for e in row] for row in self.to_rows()]!r})"

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        rows_a = self.to_rows()
        cols_b = other.columns()
        out = [
            sum(a * b for a, b in zip(row, col)) for row in rows_a for col in cols_b
        ]
        return RationalMatrix(self.rows, other.cols, out)

    def apply(self, vec: Sequence) -> list[Fraction]:
        if len(vec) != self.cols:
            raise ValueError("dimension mismatch")
        vec = [Fraction(x) for x in vec]
        return [
            sum(self.entry(i, j) * vec[j] for j in range(self.cols))
            for i in range(self.rows)
        ]

    def det(self) -> Fraction:
        if self.rows != self.cols:
            raise ValueError("determinant requires a square matrix")
        # clear denominators, run integer Bareiss, divide back out
        rows = self.to_rows()
        scale = Fraction(1)
        int_rows = []
        for row in rows:
            denom = 1
            for e in row:
                denom = denom * e.denominator // gcd(denom, e.denominator)
            scale /= denom
            int_rows.append([int(e * denom) for e in row])
        return scale * _det_rows(int_rows)

    def solve(self, rhs: Sequence) -> Optional[list[Fraction]]:
        """Solve self @ x = rhs exactly; None when singular."""
        if self.rows != self.cols or len(rhs) != self.rows:
            raise ValueError("solve requires square matrix and matching rhs")
        return _solve_fractions(self.to_rows(), [Fraction(x) for x in rhs])

    def inverse(self) -> "RationalMatrix":
        n = self.rows
        if n != self.cols:
            raise ValueError("inverse requires a square matrix")
        cols = []
        for j in range(n):
            e_j = [Fraction(int(i == j)) for i in range(n)]
            x = self.solve(e_j)
            if x is None:
                raise ValueError("singular matrix")
            cols.append(x)
        return RationalMatrix.from_columns(cols)

    def rank(self) -> int:
        return rank_of_rows(self.to_rows())

    def to_json(self) -> str:
        return json.dumps(
            {
                "rows": self.rows,
                "cols": self.cols,
                "entries": [str(e) for e in self.entries],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "RationalMatrix":
        obj = json.loads(text)
        return cls(obj["rows"], obj["cols"], [Fraction(e) for e in obj["entries"]])


def rank_of_rows(rows: list[list[Fraction]]) -> int:
    """Exact rank by fraction-free elimination on a copy."""
    work = [[Fraction(e) for e in row] for row in rows]
    if not work:
        return 0
    ncols = len(work[0])
    rank = 0
    col = 0
    while rank < len(work) and col < ncols:
        pivot_row = next((i for i in range(rank, len(work)) if work[i][col]), None)
        if pivot_row is None:
            col += 1
            continue
        work[rank], work[pivot_row] = work[pivot_row], work[rank]
        pv = work[rank][col]
        for i in range(rank + 1, len(work)):
            if work[i][col]:
                f = work[i][col] / pv
                for j in range(col, ncols):
                    work[i][j] -= f * work[rank][j]
        rank += 1
        col += 1
    return rank
