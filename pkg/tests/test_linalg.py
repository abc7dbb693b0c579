"""Rank/kernel, fraction-free determinants, minor selection, specialization."""

import random
from fractions import Fraction

import pytest

from implicax.arith import GF, QQ, Poly, Ring
from implicax.linalg import (
    LinalgError,
    PolyMatrix,
    ScalarMatrix,
    det_fraction_free,
    det_scalar,
    generic_rank,
    nonsingular_minor_select,
    rank_and_kernel,
    scalar_rank,
    specialize,
)

T_RING = Ring(QQ, [], ["T1", "T2", "T3", "T4"])


def pm(rows, ring=T_RING):
    return PolyMatrix(ring, [[ring.poly(e) if isinstance(e, str) else ring.const(e) for e in r] for r in rows])


# ---------------------------------------------------------------------------
# rank and kernel


def test_identity_has_no_kernel():
    m = ScalarMatrix(QQ, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    rank, ker = rank_and_kernel(m)
    assert rank == 3 and ker == []


def test_zero_matrix_kernel():
    m = ScalarMatrix(QQ, [[0, 0], [0, 0]])
    rank, ker = rank_and_kernel(m)
    assert rank == 0 and len(ker) == 2


def brute_multiplication_matrix():
    """Koszul map (A_1)^3 -> A_3 for f = (X1^2, X1*X2, X2^2), by direct
    monomial expansion independent of any library matrix builder.

    Columns: (g1, g2, g3) basis pairs (component i, monomial X1 or X2);
    rows: monomials X1^3, X1^2 X2, X1 X2^2, X2^3 of A_3.
    """
    # f_i as exponent dicts {(e1, e2): coeff}
    fs = [{(2, 0): 1}, {(1, 1): 1}, {(0, 2): 1}]
    col_basis = [(i, g) for i in range(3) for g in [(1, 0), (0, 1)]]
    row_basis = [(3, 0), (2, 1), (1, 2), (0, 3)]
    data = [[0] * 6 for _ in range(4)]
    for c, (i, g) in enumerate(col_basis):
        for mono, coeff in fs[i].items():
            prod = (mono[0] + g[0], mono[1] + g[1])
            data[row_basis.index(prod)][c] += coeff
    return ScalarMatrix(QQ, data)


def test_koszul_multiplication_matrix_rank_and_kernel():
    m = brute_multiplication_matrix()
    rank, ker = rank_and_kernel(m)
    assert rank == 4
    assert len(ker) == 2
    # kernel should span the two linear syzygies (X2, -X1, 0), (0, X2, -X1)
    # in the (component, monomial) coordinates used above
    syz1 = [0, 1, -1, 0, 0, 0]   # X2*f1 - X1*f2
    syz2 = [0, 0, 0, 1, -1, 0]   # X2*f2 - X1*f3
    for target in (syz1, syz2):
        aug = ScalarMatrix(QQ, [list(col) for col in zip(*ker)])
        assert scalar_rank(QQ, [list(r) for r in zip(*(ker + [target]))]) == 2


def test_kernel_vectors_annihilate_randomized():
    rng = random.Random(42)
    for field in (QQ, GF(65521)):
        for _ in range(25):
            rows = rng.randint(1, 6)
            cols = rng.randint(1, 6)
            data = [[field.random(rng) for _ in range(cols)] for _ in range(rows)]
            m = ScalarMatrix(field, data)
            rank, ker = rank_and_kernel(m)
            assert rank + len(ker) == cols


def test_rank_invariance_random():
    rng = random.Random(7)
    field = GF(65521)
    for _ in range(20):
        n = rng.randint(2, 5)
        data = [[field.random(rng) for _ in range(n + 1)] for _ in range(n)]
        m = ScalarMatrix(field, data)
        r0 = scalar_rank(field, m.data)
        perm = list(range(n))
        rng.shuffle(perm)
        assert scalar_rank(field, [m.data[i] for i in perm]) == r0
        # multiply by a random invertible matrix on the left
        while True:
            g = [[field.random(rng) for _ in range(n)] for _ in range(n)]
            if det_scalar(ScalarMatrix(field, g)):
                break
        prod = [[sum(g[i][k] * m.data[k][j] for k in range(n)) % 65521
                 for j in range(n + 1)] for i in range(n)]
        assert scalar_rank(field, prod) == r0


# ---------------------------------------------------------------------------
# determinants


def test_det_diag():
    m = pm([["T1", 0], [0, "T2"]])
    assert det_fraction_free(m) == T_RING.poly("T1*T2")


def test_det_2x2_generic():
    m = pm([["T1", "T2"], ["T3", "T4"]])
    assert det_fraction_free(m) == T_RING.poly("T1*T4 - T2*T3")


def test_det_moving_lines_matrix():
    ring = Ring(QQ, [], ["T1", "T2", "T3"])
    m = pm([["-T2", "-T3"], ["T1", "T2"]], ring)
    assert det_fraction_free(m) == ring.poly("T1*T3 - T2^2")


def cofactor_det(m):
    """Cofactor-expansion determinant; independent oracle for small sizes."""
    n = m.rows
    if n == 0:
        return m.ring.one if isinstance(m, PolyMatrix) else 1
    if n == 1:
        return m.data[0][0]
    if isinstance(m, PolyMatrix):
        total = m.ring.zero
    else:
        total = 0
    for j in range(n):
        a = m.data[0][j]
        rest = m.submatrix(range(1, n), [c for c in range(n) if c != j])
        sub = cofactor_det(rest)
        term = a * sub
        total = total + term if j % 2 == 0 else total - term
    return total


def test_det_matches_cofactor_randomized():
    rng = random.Random(13)
    for field in (QQ, GF(65521)):
        ring = Ring(field, [], ["T1", "T2", "T3"])
        for _ in range(100):
            n = rng.randint(1, 4)
            if rng.random() < 0.5:
                data = [[field.random(rng) for _ in range(n)] for _ in range(n)]
                m = ScalarMatrix(field, data)
                assert det_fraction_free(m) == field.canon(cofactor_det(m))
            else:
                data = []
                for _ in range(n):
                    row = []
                    for _ in range(n):
                        terms = {}
                        for _ in range(rng.randint(0, 2)):
                            v = rng.randrange(3)
                            exps = [0, 0, 0]
                            exps[v] = 1
                            key = ring.pack(tuple(exps))
                            terms[key] = terms.get(key, 0) + field.random_nonzero(rng)
                        row.append(Poly(ring, field.reduce_terms(terms)))
                    data.append(row)
                m = PolyMatrix(ring, data)
                assert det_fraction_free(m) == cofactor_det(m)


def test_det_fraction_entries():
    m = ScalarMatrix(QQ, [[Fraction(1, 2), 1], [1, Fraction(2, 3)]])
    assert det_scalar(m) == Fraction(1, 3) - 1


def test_det_poly_with_fraction_coeffs():
    ring = T_RING
    m = PolyMatrix(ring, [[ring.poly("1/2*T1"), ring.poly("T2")],
                          [ring.poly("T3"), ring.poly("2*T4")]])
    assert det_fraction_free(m) == ring.poly("T1*T4 - T2*T3")


def test_det_singular_poly_matrix():
    m = pm([["T1", "T2"], ["T1", "T2"]])
    assert det_fraction_free(m).is_zero()


# ---------------------------------------------------------------------------
# minor selection and specialization


def test_minor_select_full_rank():
    m = pm([[1, 0], [0, 1]])
    rows, cols = nonsingular_minor_select(m, 2, seed=1)
    assert rows == [0, 1] and cols == [0, 1]


def test_minor_select_rank_deficient_errors():
    m = pm([["T1", "T1"], ["T1", "T1"]])
    with pytest.raises(LinalgError):
        nonsingular_minor_select(m, 2, seed=1)


def test_minor_select_seed_independent_property():
    m = pm([["T1", "T2", "T1"], ["T3", "T4", "T3"], [0, "T1", "T2"]])
    for seed in (1, 2, 20020101):
        rows, cols = nonsingular_minor_select(m, 3, seed=seed)
        sub = m.submatrix(rows, cols)
        assert det_fraction_free(sub).terms


def test_specialize():
    m = pm([["T1", 0], [0, "T2"]])
    s = specialize(m, {"T1": 2, "T2": 3, "T3": 0, "T4": 0})
    assert s.data == [[2, 0], [0, 3]]
    z = PolyMatrix(T_RING, [[T_RING.zero, T_RING.zero]])
    assert specialize(z, {}).data == [[0, 0]]


def test_specialize_missing_variable_errors():
    m = pm([["T1 + T2", 0], [0, 1]])
    with pytest.raises(LinalgError):
        specialize(m, {"T1": 1})


def test_specialize_commutes_with_det():
    rng = random.Random(99)
    ring = T_RING
    for _ in range(20):
        n = rng.randint(1, 3)
        data = []
        for _ in range(n):
            row = []
            for _ in range(n):
                terms = {}
                for _ in range(rng.randint(0, 3)):
                    exps = [0] * 4
                    exps[rng.randrange(4)] = 1
                    key = ring.pack(tuple(exps))
                    terms[key] = terms.get(key, 0) + rng.randint(-3, 3)
                row.append(Poly(ring, QQ.reduce_terms(terms)))
            data.append(row)
        m = PolyMatrix(ring, data)
        point = {nm: rng.randint(-5, 5) for nm in ring.names}
        d1 = det_scalar(specialize(m, point))
        d2 = det_fraction_free(m).evaluate(point)
        assert d2.is_constant()
        assert d2.terms.get(ring.one_mono, 0) == d1


def test_generic_rank():
    rng = random.Random(5)
    m = pm([["T1", "T2"], ["2*T1", "2*T2"]])
    assert generic_rank(m, rng) == 1


def test_require_t_linear():
    ring = Ring(QQ, ["X1"], ["T1", "T2"])
    good = PolyMatrix(ring, [[ring.poly("T1 - 2*T2"), ring.zero]])
    good.require_t_linear()
    bad = PolyMatrix(ring, [[ring.poly("T1^2"), ring.zero]])
    with pytest.raises(LinalgError):
        bad.require_t_linear()
    bad2 = PolyMatrix(ring, [[ring.poly("T1 + 1"), ring.zero]])
    with pytest.raises(LinalgError):
        bad2.require_t_linear()
