"""Exact linear algebra over Scalars (and hence over K at evaluation points)."""

from __future__ import annotations

from typing import Sequence

from .scalar import PoleError, Scalar

Matrix = list[list[Scalar]]


def _cost(s: Scalar) -> int:
    return s.nterms()


def identity(n: int) -> Matrix:
    return [[Scalar.one() if i == j else Scalar.zero() for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[Scalar]], b: Sequence[Sequence[Scalar]]) -> Matrix:
    n, m, k = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(k):
            acc = Scalar.zero()
            for r in range(m):
                if a[i][r] and b[r][j]:
                    acc = acc + a[i][r] * b[r][j]
            row.append(acc)
        out.append(row)
    return out


def transpose(a: Sequence[Sequence[Scalar]]) -> Matrix:
    return [list(col) for col in zip(*a)]


def inverse(a: Sequence[Sequence[Scalar]]) -> Matrix:
    """Gauss-Jordan inverse preferring the sparsest available pivot."""
    n = len(a)
    m = [list(row) + [Scalar.one() if i == j else Scalar.zero() for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        cands = [r for r in range(col, n) if m[r][col]]
        if not cands:
            raise PoleError("singular matrix")
        piv = min(cands, key=lambda r: (_cost(m[r][col]), r))
        m[col], m[piv] = m[piv], m[col]
        inv = m[col][col].inverse()
        m[col] = [v * inv if v else v for v in m[col]]
        for r in range(n):
            f = m[r][col]
            if r != col and f:
                m[r] = [x - f * y if y else x for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def det(a: Sequence[Sequence[Scalar]]) -> Scalar:
    n = len(a)
    m = [list(r) for r in a]
    d = Scalar.one()
    for col in range(n):
        cands = [r for r in range(col, n) if m[r][col]]
        if not cands:
            return Scalar.zero()
        piv = min(cands, key=lambda r: (_cost(m[r][col]), r))
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            d = -d
        p = m[col][col]
        d = d * p
        inv = p.inverse()
        for r in range(col + 1, n):
            f = m[r][col]
            if f:
                f = f * inv
                m[r] = [x - f * y if y else x for x, y in zip(m[r], m[col])]
    return d


def row_reduce(rows: Sequence[Sequence[Scalar]]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        cands = [i for i in range(r, len(m)) if m[i][c]]
        if not cands:
            continue
        piv = min(cands, key=lambda i: (_cost(m[i][c]), i))
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c].inverse()
        m[r] = [v * inv if v else v for v in m[r]]
        for i in range(len(m)):
            f = m[i][c]
            if i != r and f:
                m[i] = [x - f * y if y else x for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence[Scalar]]) -> int:
    return len(row_reduce(rows)[1])


def nullspace(rows: Sequence[Sequence[Scalar]], ncols: int | None = None) -> list[list[Scalar]]:
    """Basis of {v : rows . v = 0}."""
    if ncols is None:
        ncols = len(rows[0])
    red, pivots = row_reduce(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Scalar.zero()] * ncols
        v[f] = Scalar.one()
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def solve_affine(rows: Sequence[Sequence[Scalar]], rhs: Sequence[Scalar]):
    """Solve ``rows . v = rhs``.

    Returns ``(particular, kernel_basis)`` or ``None`` when inconsistent.
    """
    n = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = row_reduce(aug)
    if n in pivots:
        return None
    part = [Scalar.zero()] * n
    for row, pc in zip(red, pivots):
        part[pc] = row[n]
    return part, nullspace([r[:n] for r in red], n) if red else nullspace([[Scalar.zero()] * n], n)


class IncrementalSpan:
    """Row space grown one vector at a time; reports whether each vector was new."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: list[tuple[int, list[Scalar]]] = []  # (pivot, normalized row)

    def reduce(self, v: Sequence[Scalar]) -> list[Scalar]:
        v = list(v)
        for pc, row in self.rows:
            f = v[pc]
            if f:
                v = [x - f * y if y else x for x, y in zip(v, row)]
        return v

    def add(self, v: Sequence[Scalar]) -> bool:
        v = self.reduce(v)
        nz = [i for i, x in enumerate(v) if x]
        if not nz:
            return False
        pc = min(nz, key=lambda i: (_cost(v[i]), i))
        inv = v[pc].inverse()
        v = [x * inv if x else x for x in v]
        new_rows = []
        for opc, row in self.rows:
            f = row[pc]
            if f:
                row = [x - f * y if y else x for x, y in zip(row, v)]
            new_rows.append((opc, row))
        new_rows.append((pc, v))
        self.rows = new_rows
        return True

    def __len__(self) -> int:
        return len(self.rows)
