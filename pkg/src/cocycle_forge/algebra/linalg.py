"""Exact linear algebra: row reduction over any field object, Smith normal form over Z.

Matrices over a field are lists of rows; entries are whatever the field object
manipulates (ints for finite fields, ``RatFunc`` for function fields).  Integer
matrices are numpy object arrays so entries stay arbitrary precision.
"""
from __future__ import annotations

import numpy as np


def row_reduce(M, field):
    """Reduced row echelon form.  Returns (rref rows, pivot column list)."""
    rows = [list(r) for r in M]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if not field.is_zero(rows[i][col])), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = field.inv(rows[r][col])
        rows[r] = [field.mul(inv, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not field.is_zero(rows[i][col]):
                fac = rows[i][col]
                rows[i] = [field.sub(x, field.mul(fac, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(M, field) -> int:
    return len(row_reduce(M, field)[1])


def kernel_over_field(M, field, ncols: int | None = None):
    """Basis of the right kernel {x : M x = 0}.

    ``ncols`` is required when M has no rows.
    """
    if not M:
        n = ncols or 0
        return [[field.one if i == j else field.zero for i in range(n)] for j in range(n)]
    n = len(M[0])
    rref, pivots = row_reduce(M, field)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for fc in free:
        v = [field.zero] * n
        v[fc] = field.one
        for row, pc in zip(rref, pivots):
            v[pc] = field.neg(row[fc])
        basis.append(v)
    return basis


def mat_vec(M, v, field):
    out = []
    for row in M:
        acc = field.zero
        for x, y in zip(row, v):
            if not field.is_zero(x) and not field.is_zero(y):
                acc = field.add(acc, field.mul(x, y))
        out.append(acc)
    return out


def in_span(vectors, v, field) -> bool:
    if not vectors:
        return all(field.is_zero(x) for x in v)
    return rank(list(vectors) + [list(v)], field) == rank(vectors, field)


class SpanBuilder:
    """Incrementally maintained echelon basis of a subspace."""

    def __init__(self, field, dim: int):
        self.field = field
        self.dim = dim
        self.rows = []      # echelon rows, each normalized at its pivot
        self.pivots = []
        self.originals = []  # the vectors that were accepted, in order

    def reduce(self, v):
        F = self.field
        v = list(v)
        for row, pc in zip(self.rows, self.pivots):
            if not F.is_zero(v[pc]):
                fac = v[pc]
                v = [F.sub(x, F.mul(fac, y)) for x, y in zip(v, row)]
        return v

    def add(self, v) -> bool:
        F = self.field
        w = self.reduce(v)
        pc = next((i for i, x in enumerate(w) if not F.is_zero(x)), None)
        if pc is None:
            return False
        inv = F.inv(w[pc])
        w = [F.mul(inv, x) for x in w]
        for i, row in enumerate(self.rows):
            if not F.is_zero(row[pc]):
                fac = row[pc]
                self.rows[i] = [F.sub(x, F.mul(fac, y)) for x, y in zip(row, w)]
        self.rows.append(w)
        self.pivots.append(pc)
        self.originals.append(list(v))
        return True

    def __len__(self):
        return len(self.rows)

    def contains(self, v) -> bool:
        return all(self.field.is_zero(x) for x in self.reduce(v))


# ---------------------------------------------------------------------------
# integers

def integer_matrix(rows) -> np.ndarray:
    arr = np.array([[int(x) for x in r] for r in rows], dtype=object)
    if arr.ndim == 1:
        arr = arr.reshape(0, 0) if arr.size == 0 else arr.reshape(1, -1)
    return arr


def _identity(n):
    m = np.zeros((n, n), dtype=object)
    for i in range(n):
        m[i, i] = 1
    return m


def smith_normal_form(M):
    """Smith normal form of an integer matrix.

    Returns (U, D, V) with U @ M @ V == D, U and V unimodular, D diagonal with
    nonnegative entries d_1 | d_2 | ... .
    """
    A = integer_matrix(M) if not isinstance(M, np.ndarray) else M.astype(object).copy()
    m, n = A.shape
    U, V = _identity(m), _identity(n)
    t = 0
    while t < min(m, n):
        nz = [(abs(A[i, j]), i, j) for i in range(t, m) for j in range(t, n) if A[i, j] != 0]
        if not nz:
            break
        _, i, j = min(nz)
        A[[t, i]] = A[[i, t]]
        U[[t, i]] = U[[i, t]]
        A[:, [t, j]] = A[:, [j, t]]
        V[:, [t, j]] = V[:, [j, t]]
        clean = True
        for i in range(t + 1, m):
            qt = A[i, t] // A[t, t]
            if qt:
                A[i] -= qt * A[t]
                U[i] -= qt * U[t]
            if A[i, t] != 0:
                clean = False
        for j in range(t + 1, n):
            qt = A[t, j] // A[t, t]
            if qt:
                A[:, j] -= qt * A[:, t]
                V[:, j] -= qt * V[:, t]
            if A[t, j] != 0:
                clean = False
        if not clean:
            continue
        # divisibility: fold an offending row into row t and redo this pivot
        bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                    if A[i, j] % A[t, t] != 0), None)
        if bad is not None:
            A[t] += A[bad[0]]
            U[t] += U[bad[0]]
            continue
        if A[t, t] < 0:
            A[t] = -A[t]
            U[t] = -U[t]
        t += 1
    return U, A, V


def invariant_factors(D) -> list[int]:
    k = min(D.shape) if D.size else 0
    return [int(D[i, i]) for i in range(k) if D[i, i] != 0]


def integer_det(M) -> int:
    """Exact determinant via fraction-free (Bareiss) elimination."""
    A = [list(map(int, r)) for r in M]
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if sw is None:
                return 0
            A[k], A[sw] = A[sw], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def integer_kernel(M, ncols: int | None = None):
    """Z-basis of {x in Z^n : M x = 0} from the Smith form: columns of V past the rank."""
    A = integer_matrix(M) if len(M) else np.zeros((0, ncols or 0), dtype=object)
    if A.shape[0] == 0:
        return [[1 if i == j else 0 for i in range(A.shape[1])] for j in range(A.shape[1])], []
    U, D, V = smith_normal_form(A)
    factors = invariant_factors(D)
    r = len(factors)
    basis = [[int(x) for x in V[:, j]] for j in range(r, A.shape[1])]
    return basis, factors


# ---------------------------------------------------------------------------
# Galois rings GR(p^k, f): local principal ideal rings, every element p^v * unit

def gr_valuation(R, a) -> int:
    """p-adic valuation of a in R (k for zero)."""
    if a == 0:
        return R.k
    vec = R.to_vector(a)
    v = R.k
    for c in vec:
        if c:
            w = 0
            while c % R.p == 0:
                c //= R.p
                w += 1
            v = min(v, w)
    return v


def _gr_unit_part(R, a, v):
    """u with p^v * u = a (u a unit when v = gr_valuation(a))."""
    pv = R.p ** v
    return R.from_vector([c // pv for c in R.to_vector(a)])


def gr_kernel(M, R, ncols: int | None = None):
    """Generators of {x in R^n : M x = 0} over a Galois ring.

    Elimination with pivots of least valuation yields M = U^-1 D V^-1 with D
    diagonal, d_i = p^(v_i) * unit; the kernel is generated by V e_j for free
    columns and p^(k - v_i) V e_i for the others.
    """
    rows = [list(r) for r in M]
    n = len(rows[0]) if rows else (ncols or 0)
    V = [[R.one if i == j else R.zero for j in range(n)] for i in range(n)]
    vals = []
    t = 0
    m = len(rows)
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if rows[i][j] != 0:
                    v = gr_valuation(R, rows[i][j])
                    if best is None or v < best[0]:
                        best = (v, i, j)
        if best is None:
            break
        v, i, j = best
        rows[t], rows[i] = rows[i], rows[t]
        for r in rows:
            r[t], r[j] = r[j], r[t]
        for r in V:
            r[t], r[j] = r[j], r[t]
        uinv = R.inv(_gr_unit_part(R, rows[t][t], v))
        for i in range(t + 1, m):
            x = rows[i][t]
            if x:
                fac = R.mul(_gr_unit_part(R, x, v), uinv)
                rows[i] = [R.sub(a, R.mul(fac, b)) for a, b in zip(rows[i], rows[t])]
        for j in range(t + 1, n):
            x = rows[t][j]
            if x:
                fac = R.mul(_gr_unit_part(R, x, v), uinv)
                for r in rows:
                    r[j] = R.sub(r[j], R.mul(fac, r[t]))
                for r in V:
                    r[j] = R.sub(r[j], R.mul(fac, r[t]))
        vals.append(v)
        t += 1
    gens = []
    for j in range(n):
        col = [V[i][j] for i in range(n)]
        if j >= len(vals):
            gens.append(col)
        elif vals[j] > 0:
            s = R.from_int(R.p ** (R.k - vals[j]))
            gens.append([R.mul(s, x) for x in col])
    return gens, vals
