"""Exact dense linear algebra over a field and over k[T].

Two matrix flavors: ScalarMatrix (field entries) and PolyMatrix (Poly
entries).  Rank/kernel work over the field; determinants are fraction-free
(Bareiss) so polynomial matrices never leave the coefficient ring.  Over QQ
rows and columns are rescaled to primitive integer vectors internally; the
exact value is restored at the end, so results are not "up to unit" here.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

from .arith import ArithError, Poly, QQ

__all__ = [
    "ScalarMatrix",
    "PolyMatrix",
    "LinalgError",
    "rank_and_kernel",
    "det_fraction_free",
    "nonsingular_minor_select",
    "specialize",
]

DEFAULT_SEED = 20020101


class LinalgError(ArithError):
    pass


# ---------------------------------------------------------------------------
# scalar matrices


class ScalarMatrix:
    """Dense field-entry matrix (row major)."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field, data, cols=None):
        self.field = field
        self.data = [list(r) for r in data]
        self.rows = len(self.data)
        if self.rows:
            self.cols = len(self.data[0])
            if any(len(r) != self.cols for r in self.data):
                raise LinalgError("ragged rows")
        else:
            self.cols = 0 if cols is None else cols

    @classmethod
    def zero(cls, field, rows, cols):
        return cls(field, [[0] * cols for _ in range(rows)], cols)

    def entry(self, i, j):
        return self.data[i][j]

    def column(self, j):
        return [r[j] for r in self.data]

    def submatrix(self, row_idx, col_idx):
        return ScalarMatrix(
            self.field, [[self.data[i][j] for j in col_idx] for i in row_idx], len(col_idx)
        )

    def mul_vector(self, v):
        out = []
        for row in self.data:
            s = 0
            for a, b in zip(row, v):
                if a and b:
                    s += a * b
            out.append(self.field.canon(s))
        return out

    def __repr__(self):
        return "ScalarMatrix(%dx%d over %s)" % (self.rows, self.cols, self.field)


def _int_rows(field, data):
    """Copy rows; over QQ clear denominators so every entry is int."""
    if field.char != 0:
        p = field.char
        return [[int(x) % p for x in row] for row in data]
    out = []
    for row in data:
        if all(type(x) is int for x in row):
            out.append(list(row))
            continue
        den = 1
        for x in row:
            if type(x) is not int:
                den = den * x.denominator // math.gcd(den, x.denominator)
        out.append([int(x * den) for x in row])
    return out


def _primitive_int_row(row):
    g = 0
    for x in row:
        g = math.gcd(g, x)
        if g == 1:
            return row
    if g > 1:
        return [x // g for x in row]
    return row


def _rref(field, data):
    """Row reduce; returns (rank, rows, pivot_cols).

    Over QQ the rows stay integer (cross-multiplication with gcd trimming),
    reduced above and below pivots.  Over GF(p) pivots are normalized to 1.
    """
    rows = _int_rows(field, data)
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    pivots = []
    r = 0
    if field.char == 0:
        for c in range(ncols):
            sel = None
            for i in range(r, nrows):
                if rows[i][c]:
                    sel = i
                    break
            if sel is None:
                continue
            rows[r], rows[sel] = rows[sel], rows[r]
            prow = _primitive_int_row(rows[r])
            rows[r] = prow
            pc = prow[c]
            for i in range(nrows):
                if i == r:
                    continue
                ic = rows[i][c]
                if ic:
                    ri = rows[i]
                    rows[i] = _primitive_int_row(
                        [pc * a - ic * b for a, b in zip(ri, prow)]
                    )
            pivots.append(c)
            r += 1
            if r == nrows:
                break
    else:
        p = field.char
        for c in range(ncols):
            sel = None
            for i in range(r, nrows):
                if rows[i][c] % p:
                    sel = i
                    break
            if sel is None:
                continue
            rows[r], rows[sel] = rows[sel], rows[r]
            inv = pow(rows[r][c], p - 2, p)
            rows[r] = [a * inv % p for a in rows[r]]
            prow = rows[r]
            for i in range(nrows):
                if i != r and rows[i][c] % p:
                    f = rows[i][c]
                    rows[i] = [(a - f * b) % p for a, b in zip(rows[i], prow)]
            pivots.append(c)
            r += 1
            if r == nrows:
                break
    return len(pivots), rows, pivots


def rank_and_kernel(m):
    """(rank, kernel basis) with deterministic reduced-echelon kernel vectors.

    Over QQ kernel vectors are primitive integer vectors, positive at their
    own free coordinate; over GF(p) that coordinate is 1.
    """
    rank, basis, _ = rref_kernel_data(m)
    return rank, basis


def rref_kernel_data(m):
    """(rank, kernel basis, free columns) from one row-reduction pass."""
    field = m.field
    rank, rows, pivots = _rref(field, m.data)
    free = [c for c in range(m.cols) if c not in set(pivots)]
    basis = []
    if field.char == 0:
        for f in free:
            vec = [Fraction(0)] * m.cols
            vec[f] = Fraction(1)
            for r, c in enumerate(pivots):
                if rows[r][f]:
                    vec[c] = Fraction(-rows[r][f], rows[r][c])
            den = 1
            for x in vec:
                den = den * x.denominator // math.gcd(den, x.denominator)
            ivec = [int(x * den) for x in vec]
            g = 0
            for x in ivec:
                g = math.gcd(g, x)
            if g > 1:
                ivec = [x // g for x in ivec]
            basis.append(ivec)
    else:
        p = field.char
        for f in free:
            vec = [0] * m.cols
            vec[f] = 1
            for r, c in enumerate(pivots):
                if rows[r][f]:
                    vec[c] = -rows[r][f] % p
            basis.append(vec)
    for v in basis:
        assert _vec_is_in_kernel(m, v), "kernel vector fails A*v = 0"
    return rank, basis, free


def _vec_is_in_kernel(m, v):
    p = m.field.char
    for row in m.data:
        s = 0
        for a, b in zip(row, v):
            if a and b:
                s += a * b
        if p:
            s %= p
        if s:
            return False
    return True


def kernel_free_columns(m):
    """Free (non-pivot) columns matching rank_and_kernel's basis order."""
    return rref_kernel_data(m)[2]


def scalar_rank(field, data):
    rank, _, _ = _rref(field, data)
    return rank


def det_scalar(m):
    """Exact determinant of a square ScalarMatrix."""
    if m.rows != m.cols:
        raise LinalgError("determinant of non-square matrix")
    n = m.rows
    if n == 0:
        return 1
    field = m.field
    if field.char:
        p = field.char
        a = [[x % p for x in row] for row in m.data]
        det = 1
        for k in range(n):
            sel = None
            for i in range(k, n):
                if a[i][k]:
                    sel = i
                    break
            if sel is None:
                return 0
            if sel != k:
                a[k], a[sel] = a[sel], a[k]
                det = -det % p
            det = det * a[k][k] % p
            inv = pow(a[k][k], p - 2, p)
            for i in range(k + 1, n):
                if a[i][k]:
                    f = a[i][k] * inv % p
                    a[i] = [(x - f * y) % p for x, y in zip(a[i], a[k])]
        return det % p
    # QQ: Bareiss on integers after clearing row denominators
    a = []
    scale = Fraction(1)
    for row in m.data:
        if all(type(x) is int for x in row):
            a.append(list(row))
            continue
        den = 1
        for x in row:
            if type(x) is not int:
                den = den * x.denominator // math.gcd(den, x.denominator)
        scale /= den
        a.append([int(x * den) for x in row])
    sign = 1
    prev = 1
    for k in range(n - 1):
        sel = None
        for i in range(k, n):
            if a[i][k]:
                sel = i
                break
        if sel is None:
            return 0
        if sel != k:
            a[k], a[sel] = a[sel], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            a[i] = [(akk * row_i[j] - aik * row_k[j]) // prev for j in range(k + 1, n)]
            a[i] = [0] * (k + 1) + a[i]
        prev = akk
    val = sign * a[n - 1][n - 1] * scale
    return QQ.canon(val)


# ---------------------------------------------------------------------------
# polynomial matrices


class PolyMatrix:
    """Dense matrix with Poly entries sharing one ring."""

    __slots__ = ("ring", "rows", "cols", "data")

    def __init__(self, ring, data, cols=None):
        self.ring = ring
        self.data = [list(r) for r in data]
        self.rows = len(self.data)
        if self.rows:
            self.cols = len(self.data[0])
            if any(len(r) != self.cols for r in self.data):
                raise LinalgError("ragged rows")
        else:
            self.cols = 0 if cols is None else cols

    @classmethod
    def zero(cls, ring, rows, cols):
        return cls(ring, [[ring.zero] * cols for _ in range(rows)], cols)

    def entry(self, i, j):
        return self.data[i][j]

    def submatrix(self, row_idx, col_idx):
        return PolyMatrix(
            self.ring, [[self.data[i][j] for j in col_idx] for i in row_idx], len(col_idx)
        )

    def require_t_linear(self):
        """Every entry must be zero or a k-linear form in the T bank."""
        nx, nv = self.ring.nx, self.ring.nv
        for row in self.data:
            for e in row:
                if e.terms and (
                    e.homogeneous_degree(nx, nv) != 1 or e.x_degree() > 0
                ):
                    raise LinalgError("entry %r is not a linear form in T" % e)

    def matmul(self, other):
        if self.cols != other.rows:
            raise LinalgError("shape mismatch %dx%d * %dx%d"
                              % (self.rows, self.cols, other.rows, other.cols))
        ring = self.ring
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = ring.zero
                for k in range(self.cols):
                    a = self.data[i][k]
                    b = other.data[k][j]
                    if a.terms and b.terms:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(ring, out, other.cols)

    def is_zero(self):
        return all(not e.terms for row in self.data for e in row)

    def __repr__(self):
        return "PolyMatrix(%dx%d over %s)" % (self.rows, self.cols, self.ring)


def specialize(m, point):
    """Evaluate every entry at T values in `point` (variable name -> scalar)."""
    field = m.ring.field
    out = []
    for row in m.data:
        orow = []
        for e in row:
            v = e.evaluate(point)
            if not v.is_constant():
                raise LinalgError("specialization left variables in %r" % v)
            orow.append(v.terms.get(m.ring.one_mono, 0))
        out.append(orow)
    return ScalarMatrix(field, out, m.cols)


def _column_primitive_scales(m):
    """Over QQ: per-column rational c_j with column*c_j primitive integer.

    Returns (scaled int-coefficient data as term dicts, product of the c_j).
    Over GF(p) it is the identity transform.
    """
    ring = m.ring
    if ring.field.char != 0:
        return [[dict(m.data[i][j].terms) for j in range(m.cols)] for i in range(m.rows)], 1
    data = [[None] * m.cols for _ in range(m.rows)]
    total = Fraction(1)
    for j in range(m.cols):
        den = 1
        num_gcd = 0
        for i in range(m.rows):
            for c in m.data[i][j].terms.values():
                if type(c) is int:
                    num_gcd = math.gcd(num_gcd, c)
                else:
                    num_gcd = math.gcd(num_gcd, c.numerator)
                    den = den * c.denominator // math.gcd(den, c.denominator)
        if num_gcd == 0:
            for i in range(m.rows):
                data[i][j] = {}
            continue
        cj = Fraction(den, num_gcd)
        total *= cj
        for i in range(m.rows):
            data[i][j] = {mm: int(c * cj) for mm, c in m.data[i][j].terms.items()}
    return data, total


def _dict_mul(A, B, one_mono):
    if not A or not B:
        return {}
    if len(A) > len(B):
        A, B = B, A
    out = {}
    get = out.get
    for ma, ca in A.items():
        off = ma - one_mono
        for mb, cb in B.items():
            k = off + mb
            prev = get(k)
            out[k] = ca * cb if prev is None else prev + ca * cb
    return {m: c for m, c in out.items() if c}


def _dict_mul_mod(A, B, one_mono, p):
    if not A or not B:
        return {}
    if len(A) > len(B):
        A, B = B, A
    out = {}
    get = out.get
    for ma, ca in A.items():
        off = ma - one_mono
        for mb, cb in B.items():
            k = off + mb
            prev = get(k)
            out[k] = ca * cb if prev is None else prev + ca * cb
    return {m: c % p for m, c in out.items() if c % p}


def _dict_sub(A, B):
    out = dict(A)
    for m, c in B.items():
        v = out.get(m, 0) - c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _dict_exact_div(A, B, ring):
    """Exact division of term dicts (int or GF coefficients)."""
    if not B:
        raise LinalgError("internal division by zero in elimination")
    if not A:
        return {}
    p = ring.field.char
    lt_b = max(B)
    cb = B[lt_b]
    if p:
        cb_inv = pow(cb, p - 2, p)
    rem = dict(A)
    q = {}
    mono_div = ring.mono_div
    one = ring.one_mono
    while rem:
        lt_r = max(rem)
        qm = mono_div(lt_r, lt_b)
        if qm is None:
            raise LinalgError("internal exact division failed (non-divisible)")
        if p:
            qc = rem[lt_r] * cb_inv % p
        else:
            qc, rr = divmod(rem[lt_r], cb)
            if rr:
                raise LinalgError("internal exact division failed (coefficient)")
        q[qm] = qc
        off = qm - one
        if p:
            for m, c in B.items():
                k = off + m
                v = (rem.get(k, 0) - qc * c) % p
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        else:
            for m, c in B.items():
                k = off + m
                v = rem.get(k, 0) - qc * c
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
    return q


def det_fraction_free(m):
    """Exact determinant of a square matrix (PolyMatrix or ScalarMatrix).

    Bareiss elimination with exact divisions; polynomial entries never leave
    the coefficient ring.  Internal rescaling over QQ is undone at the end.
    """
    if isinstance(m, ScalarMatrix):
        return det_scalar(m)
    if m.rows != m.cols:
        raise LinalgError("determinant of non-square matrix")
    ring = m.ring
    n = m.rows
    if n == 0:
        return ring.one
    if n == 1:
        return m.data[0][0]
    a, scale = _column_primitive_scales(m)
    field = ring.field
    p = field.char
    mul = (lambda A, B: _dict_mul_mod(A, B, ring.one_mono, p)) if p else (
        lambda A, B: _dict_mul(A, B, ring.one_mono)
    )
    sign = 1
    prev = None
    for k in range(n - 1):
        # sparsest nonzero pivot in column k (fewest terms, then lowest row)
        sel = None
        best = None
        for i in range(k, n):
            e = a[i][k]
            if e:
                key = (len(e), i)
                if best is None or key < best:
                    best = key
                    sel = i
        if sel is None:
            return ring.zero
        if sel != k:
            a[k], a[sel] = a[sel], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            new_row = [{}] * (k + 1)
            if aik:
                for j in range(k + 1, n):
                    t = _dict_sub(mul(akk, row_i[j]), mul(aik, row_k[j]))
                    if prev is not None and t:
                        t = _dict_exact_div(t, prev, ring)
                    new_row.append(t)
            else:
                for j in range(k + 1, n):
                    t = mul(akk, row_i[j])
                    if prev is not None and t:
                        t = _dict_exact_div(t, prev, ring)
                    new_row.append(t)
            a[i] = new_row
        prev = akk
    final = a[n - 1][n - 1]
    if sign < 0:
        final = {mm: -c for mm, c in final.items()}
        if p:
            final = {mm: c % p for mm, c in final.items()}
    det = Poly(ring, field.reduce_terms(final))
    if p or scale == 1:
        return det
    return det * QQ.canon(Fraction(1) / scale)


# ---------------------------------------------------------------------------
# minor selection


def _random_point(ring, rng):
    field = ring.field
    names = ring.names[ring.nx:]
    if not names:
        names = ring.names
    if field.char:
        return {nm: rng.randrange(1, field.char) for nm in names}
    return {nm: rng.randint(-997, 997) for nm in names}


def _full_pivot_select(spec, target_rank, allowed_rows=None, allowed_cols=None):
    """Greedy full-pivot Gaussian pass; returns (row_idx, col_idx) or None."""
    field = spec.field
    p = field.char
    rows = list(range(spec.rows)) if allowed_rows is None else list(allowed_rows)
    cols = list(range(spec.cols)) if allowed_cols is None else list(allowed_cols)
    a = [[Fraction(spec.data[i][j]) if not p else spec.data[i][j] % p for j in cols] for i in rows]
    nr, nc = len(rows), len(cols)
    sel_rows, sel_cols = [], []
    used_r = [False] * nr
    used_c = [False] * nc
    for _ in range(target_rank):
        pi = pj = None
        for i in range(nr):
            if used_r[i]:
                continue
            for j in range(nc):
                if used_c[j]:
                    continue
                if a[i][j]:
                    pi, pj = i, j
                    break
            if pi is not None:
                break
        if pi is None:
            return None
        used_r[pi] = True
        used_c[pj] = True
        sel_rows.append(rows[pi])
        sel_cols.append(cols[pj])
        inv = field.invert(a[pi][pj]) if p else 1 / a[pi][pj]
        for i in range(nr):
            if used_r[i] or not a[i][pj]:
                continue
            f = a[i][pj] * inv
            if p:
                f %= p
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[pi])]
            else:
                a[i] = [x - f * y for x, y in zip(a[i], a[pi])]
    return sorted(sel_rows), sorted(sel_cols)


def nonsingular_minor_select(m, target_rank, seed=DEFAULT_SEED, allowed_rows=None, max_tries=8):
    """Row/column index sets of a verified nonsingular target_rank minor.

    Candidate indices come from a seeded random specialization of the T
    variables; the chosen submatrix is then verified symbolically, retrying
    with fresh specializations a bounded number of times.
    """
    if target_rank == 0:
        return [], []
    if target_rank > min(m.rows if allowed_rows is None else len(allowed_rows), m.cols):
        raise LinalgError("target rank %d exceeds matrix size" % target_rank)
    rng = random.Random(seed)
    last = None
    for _ in range(max_tries):
        spec = specialize(m, _random_point(m.ring, rng))
        picked = _full_pivot_select(spec, target_rank, allowed_rows=allowed_rows)
        if picked is None:
            last = "specialized rank below %d" % target_rank
            continue
        rows_idx, cols_idx = picked
        sub = m.submatrix(rows_idx, cols_idx)
        if det_fraction_free(sub).terms:
            return rows_idx, cols_idx
        last = "candidate minor was singular symbolically"
    raise LinalgError(
        "no nonsingular %dx%d minor found (%s)" % (target_rank, target_rank, last)
    )


def generic_rank(m, rng):
    """Rank of a PolyMatrix over k(T), estimated by one random specialization."""
    if m.rows == 0 or m.cols == 0:
        return 0
    spec = specialize(m, _random_point(m.ring, rng))
    return scalar_rank(spec.field, spec.data)
