"""Matrix and vector helpers over a FieldDescriptor.

Matrices are tuples of row tuples of integer field indices; row i is the image
of basis vector i, and vectors multiply on the right: (v @ M)_k = sum_i v_i M[i][k].
Everything here is exact.
"""

from __future__ import annotations


def identity(field, n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def _pack2(row):
    x = 0
    for j, c in enumerate(row):
        if c:
            x |= 1 << j
    return x


def _unpack2(x, m):
    return tuple((x >> j) & 1 for j in range(m))


def mat_mul(field, A, B):
    n = len(A)
    m = len(B[0])
    k = len(B)
    if field.p == 2 and field.f == 1:
        Bp = [_pack2(row) for row in B]
        out = []
        for i in range(n):
            acc = 0
            Ai = A[i]
            for t in range(k):
                if Ai[t]:
                    acc ^= Bp[t]
            out.append(_unpack2(acc, m))
        return tuple(out)
    add, mul = field.add, field.mul
    out = []
    for i in range(n):
        row = [0] * m
        Ai = A[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                if a == 1:
                    for j in range(m):
                        if Bt[j]:
                            row[j] = add(row[j], Bt[j])
                else:
                    for j in range(m):
                        if Bt[j]:
                            row[j] = add(row[j], mul(a, Bt[j]))
        out.append(tuple(row))
    return tuple(out)


def vec_mat(field, v, M):
    n = len(v)
    m = len(M[0])
    if field.p == 2 and field.f == 1:
        acc = 0
        for i in range(n):
            if v[i]:
                acc ^= _pack2(M[i])
        return _unpack2(acc, m)
    add, mul = field.add, field.mul
    row = [0] * m
    for i in range(n):
        a = v[i]
        if a:
            Mi = M[i]
            if a == 1:
                for j in range(m):
                    if Mi[j]:
                        row[j] = add(row[j], Mi[j])
            else:
                for j in range(m):
                    if Mi[j]:
                        row[j] = add(row[j], mul(a, Mi[j]))
    return tuple(row)


def mat_frob(field, M, j):
    if j % field.f == 0:
        return M
    fr = field.frob
    return tuple(tuple(fr(a, j) for a in row) for row in M)


def transpose(M):
    return tuple(zip(*M))


def mat_inv(field, M):
    n = len(M)
    if field.p == 2 and field.f == 1:
        rows = [_pack2(M[i]) | (1 << (n + i)) for i in range(n)]
        r = 0
        for col in range(n):
            piv = None
            bit = 1 << col
            for i in range(r, n):
                if rows[i] & bit:
                    piv = i
                    break
            if piv is None:
                raise ValueError("matrix is singular")
            rows[r], rows[piv] = rows[piv], rows[r]
            pr = rows[r]
            for i in range(n):
                if i != r and rows[i] & bit:
                    rows[i] ^= pr
            r += 1
        return tuple(_unpack2(rows[i] >> n, n) for i in range(n))
    aug = [list(M[i]) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    add, mul, inv, neg = field.add, field.mul, field.inv, field.neg
    row = 0
    for col in range(n):
        piv = None
        for r in range(row, n):
            if aug[r][col]:
                piv = r
                break
        if piv is None:
            raise ValueError("matrix is singular")
        aug[row], aug[piv] = aug[piv], aug[row]
        pe = inv(aug[row][col])
        if pe != 1:
            aug[row] = [mul(pe, a) for a in aug[row]]
        for r in range(n):
            if r != row and aug[r][col]:
                c = neg(aug[r][col])
                ar, arow = aug[r], aug[row]
                for j in range(col, 2 * n):
                    if arow[j]:
                        ar[j] = add(ar[j], mul(c, arow[j]))
        row += 1
    return tuple(tuple(aug[i][n:]) for i in range(n))


def mat_det(field, M):
    n = len(M)
    rows = [list(r) for r in M]
    det = 1
    mul, add, inv, neg = field.mul, field.add, field.inv, field.neg
    for col in range(n):
        piv = None
        for r in range(col, n):
            if rows[r][col]:
                piv = r
                break
        if piv is None:
            return 0
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = neg(det)
        det = mul(det, rows[col][col])
        pe = inv(rows[col][col])
        for r in range(col + 1, n):
            if rows[r][col]:
                c = neg(mul(pe, rows[r][col]))
                for j in range(col, n):
                    if rows[col][j]:
                        rows[r][j] = add(rows[r][j], mul(c, rows[col][j]))
    return det


def rref(field, rows):
    """Reduced row echelon form; returns (list of row tuples, pivot columns)."""
    rows = [list(r) for r in rows if any(r)]
    n_cols = len(rows[0]) if rows else 0
    add, mul, inv, neg = field.add, field.mul, field.inv, field.neg
    pivots = []
    r = 0
    for col in range(n_cols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][col]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pe = inv(rows[r][col])
        if pe != 1:
            rows[r] = [mul(pe, a) for a in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                c = neg(rows[i][col])
                ri, rr = rows[i], rows[r]
                for j in range(col, n_cols):
                    if rr[j]:
                        ri[j] = add(ri[j], mul(c, rr[j]))
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return [tuple(row) for row in rows[:r]], pivots


def kernel_basis(field, M, n_rows=None):
    """Basis of the left null space {v : v @ M = 0} is not what we want;
    this returns the right kernel {x : M @ x^T = 0} as row vectors, i.e.
    solutions x with sum_j M[i][j] x_j = 0 for all i."""
    if not M:
        raise ValueError("empty system")
    n = len(M[0])
    reduced, pivots = rref(field, M)
    free = [j for j in range(n) if j not in pivots]
    basis = []
    neg = field.neg
    for fcol in free:
        x = [0] * n
        x[fcol] = 1
        for r, pcol in enumerate(pivots):
            # pivot row: x_pcol = -sum(free coeffs)
            x[pcol] = neg(reduced[r][fcol])
        basis.append(tuple(x))
    return basis


def solve_linear(field, M, rhs):
    """One solution x of M x = rhs (columns are unknowns), or None."""
    n = len(M[0])
    aug = [list(M[i]) + [rhs[i]] for i in range(len(M))]
    reduced, pivots = rref(field, aug)
    x = [0] * n
    for r, row in enumerate(reduced):
        if r < len(pivots) and pivots[r] < n:
            x[pivots[r]] = row[n]
        elif row[n] != 0:
            return None  # inconsistent
    # rows past pivots with nonzero rhs mean inconsistency
    for r in range(len(pivots), len(reduced)):
        if reduced[r][n] != 0:
            return None
    for r, pcol in enumerate(pivots):
        if pcol == n:
            return None
    return tuple(x)


def span_rref_key(field, vectors):
    """Canonical key for the span of the given vectors (tuple of rref rows)."""
    reduced, _ = rref(field, vectors)
    return tuple(reduced)
