"""Exact linear algebra over Q(zeta_m) by Gauss-Jordan elimination."""

import typing as typ

from lgorbifold.core.errors import DimensionMismatchError
from lgorbifold.core.scalars import CycNum, CyclotomicField

Vector = typ.List[CycNum]
Matrix = typ.List[typ.List[CycNum]]


def zeros(field: CyclotomicField, rows: int, cols: int) -> Matrix:
    return [[field.zero] * cols for _ in range(rows)]


def identity(field: CyclotomicField, size: int) -> Matrix:
    return [[field.one if i == j else field.zero for j in range(size)] for i in range(size)]


def transpose(m: typ.Sequence[typ.Sequence[CycNum]]) -> Matrix:
    return [list(col) for col in zip(*m)] if m else []


def matmul(a: typ.Sequence[typ.Sequence[CycNum]], b: typ.Sequence[typ.Sequence[CycNum]]) -> Matrix:
    if a and len(a[0]) != len(b):
        raise DimensionMismatchError(
            f"cannot multiply {len(a)}x{len(a[0])} by {len(b)}x{len(b[0]) if b else 0}",
            module="linalg",
        )
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        new_row = []
        for j in range(cols):
            acc = None
            for k, x in enumerate(row):
                if x and b[k][j]:
                    term = x * b[k][j]
                    acc = term if acc is None else acc + term
            new_row.append(acc if acc is not None else _zero_like(a, b))
        out.append(new_row)
    return out


def _zero_like(*mats) -> CycNum:
    for m in mats:
        for row in m:
            for x in row:
                return x.field.zero
    raise DimensionMismatchError("empty matrices carry no field", module="linalg")


def matvec(a: typ.Sequence[typ.Sequence[CycNum]], v: typ.Sequence[CycNum]) -> Vector:
    out = []
    for row in a:
        acc = v[0].field.zero if v else row[0].field.zero
        for x, y in zip(row, v):
            if x and y:
                acc = acc + x * y
        out.append(acc)
    return out


def row_reduce(m: typ.Sequence[typ.Sequence[CycNum]]) -> typ.Tuple[Matrix, typ.List[int]]:
    """Reduced row echelon form and the pivot columns."""
    rows = [list(r) for r in m]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots: typ.List[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                factor = rows[i][c]
                rows[i] = [x - factor * y if y else x for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(m: typ.Sequence[typ.Sequence[CycNum]]) -> int:
    return len(row_reduce(m)[1])


def nullspace(m: typ.Sequence[typ.Sequence[CycNum]], ncols: int, field: CyclotomicField) -> typ.List[Vector]:
    """Basis of {x : m x = 0} for an r x ncols matrix (r may be 0)."""
    if not m:
        return [[field.one if i == j else field.zero for i in range(ncols)] for j in range(ncols)]
    reduced, pivots = row_reduce(m)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [field.zero] * ncols
        vec[f] = field.one
        for row_idx, pc in enumerate(pivots):
            vec[pc] = -reduced[row_idx][f]
        basis.append(vec)
    return basis


def solve(m: typ.Sequence[typ.Sequence[CycNum]], rhs: typ.Sequence[CycNum]) -> typ.Optional[Vector]:
    """Some x with m x = rhs, or None when inconsistent."""
    if not m:
        return [] if all(not x for x in rhs) else None
    ncols = len(m[0])
    field = rhs[0].field if rhs else m[0][0].field
    augmented = [list(row) + [b] for row, b in zip(m, rhs)]
    reduced, pivots = row_reduce(augmented)
    if ncols in pivots:
        return None
    x = [field.zero] * ncols
    for row_idx, pc in enumerate(pivots):
        x[pc] = reduced[row_idx][ncols]
    return x


def inverse(m: typ.Sequence[typ.Sequence[CycNum]]) -> Matrix:
    size = len(m)
    if size == 0:
        return []
    field = m[0][0].field
    augmented = [list(row) + e for row, e in zip(m, identity(field, size))]
    reduced, pivots = row_reduce(augmented)
    if pivots[:size] != list(range(size)):
        raise DimensionMismatchError("matrix is singular", module="linalg", invariant="invertible")
    return [row[size:] for row in reduced]


def determinant(m: typ.Sequence[typ.Sequence[CycNum]], field: CyclotomicField) -> CycNum:
    rows = [list(r) for r in m]
    det = field.one
    for c in range(len(rows)):
        pivot = next((i for i in range(c, len(rows)) if rows[i][c]), None)
        if pivot is None:
            return field.zero
        if pivot != c:
            rows[c], rows[pivot] = rows[pivot], rows[c]
            det = -det
        det = det * rows[c][c]
        inv = rows[c][c].inverse()
        for i in range(c + 1, len(rows)):
            if rows[i][c]:
                factor = rows[i][c] * inv
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[c])]
    return det


def independent_columns(vectors: typ.Sequence[Vector]) -> typ.List[int]:
    """Indices of a maximal linearly independent subset, earliest first."""
    if not vectors:
        return []
    _, pivots = row_reduce(transpose(vectors))
    return pivots


def equal(a: typ.Sequence[typ.Sequence[CycNum]], b: typ.Sequence[typ.Sequence[CycNum]]) -> bool:
    return len(a) == len(b) and all(
        len(ra) == len(rb) and all(x == y for x, y in zip(ra, rb)) for ra, rb in zip(a, b)
    )
