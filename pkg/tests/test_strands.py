"""Koszul differentials, cycle/boundary bases, strand determinants."""

import random

import pytest

from implicax.arith import (
    GF,
    QQ,
    make_parameterization,
    unit_multiple_of,
)
from implicax.errors import HypothesisViolation
from implicax.linalg import scalar_rank
from implicax.strands import (
    boundary_basis,
    complex_determinant,
    cycle_basis,
    gcd_of_maximal_minors,
    koszul_differential_matrix,
    polys_to_vector,
    z_strand,
)

CONIC = make_parameterization(QQ, ["X1", "X2"], ["X1^2", "X1*X2", "X2^2"])
CONIC_FAT = make_parameterization(QQ, ["X1", "X2"], ["X1^3", "X1^2*X2", "X1*X2^2"])
QUADRIC = make_parameterization(
    QQ, ["X1", "X2", "X3"], ["X1^2", "X2^2", "X3^2", "X1^2+X2^2+X3^2"]
)
CUBIC_SURF = make_parameterization(
    QQ, ["X1", "X2", "X3"], ["X1^2*X2", "X2^2*X3", "X1*X3^2", "X1^3+X2^3+X3^3"]
)
LCI_SURF = make_parameterization(
    QQ,
    ["X1", "X2", "X3"],
    [
        "X1*X3^2",
        "X1*X2^2 + X2^2*X3",
        "X1^2*X2 + X1*X2*X3",
        "X1*X2*X3 + X2*X3^2",
    ],
)

LCI_EQUATION = "T1*T2*T3 + T1*T2*T4 - T3*T4^2"


def spans_equal(vectors_a, vectors_b, field):
    if not vectors_a and not vectors_b:
        return True
    ra = scalar_rank(field, vectors_a) if vectors_a else 0
    rb = scalar_rank(field, vectors_b) if vectors_b else 0
    rboth = scalar_rank(field, list(vectors_a) + list(vectors_b))
    return ra == rb == rboth


# ---------------------------------------------------------------------------
# differentials


def test_koszul_matrix_shape_and_rank():
    m = koszul_differential_matrix(CONIC, 1, 1)
    assert (m.rows, m.cols) == (4, 6)
    assert scalar_rank(QQ, m.data) == 4


def test_koszul_composition_is_zero():
    for param, nu in ((CONIC, 1), (CONIC, 2), (QUADRIC, 2), (LCI_SURF, 3)):
        for i in range(2, param.n + 1):
            m_low = koszul_differential_matrix(param, i - 1, nu + param.d)
            m_high = koszul_differential_matrix(param, i, nu)
            prod = [
                [
                    sum(m_low.data[r][k] * m_high.data[k][c] for k in range(m_high.rows))
                    for c in range(m_high.cols)
                ]
                for r in range(m_low.rows)
            ]
            assert all(not x for row in prod for x in row)


def test_top_exterior_power_single_column():
    m = koszul_differential_matrix(CONIC, 3, 0)
    assert m.cols == 1


# ---------------------------------------------------------------------------
# cycles and boundaries


def test_conic_linear_syzygies():
    vecs = cycle_basis(CONIC, 1, 1)
    assert len(vecs) == 2
    # expected span: (X2, -X1, 0) and (0, X2, -X1)
    expected = [
        polys_to_vector(CONIC, 1, (
            CONIC.ring.poly("X2"), CONIC.ring.poly("-X1"), CONIC.ring.zero)),
        polys_to_vector(CONIC, 1, (
            CONIC.ring.zero, CONIC.ring.poly("X2"), CONIC.ring.poly("-X1"))),
    ]
    assert spans_equal(vecs, expected, QQ)


def test_z2_vanishes_below_d_without_base_points():
    for nu in range(CONIC.d):
        assert cycle_basis(CONIC, 2, nu) == []


def test_quadric_z3_dimension_one():
    assert len(cycle_basis(QUADRIC, 3, 2)) == 1


def test_cycles_annihilate_f():
    ring = CONIC.ring
    for i, nu in ((1, 1), (1, 2), (2, 2)):
        vecs = cycle_basis(CONIC, i, nu)
        m = koszul_differential_matrix(CONIC, i, nu)
        for v in vecs:
            assert all(s == 0 for s in m.mul_vector(v))


def test_boundary_basis_cases():
    assert boundary_basis(CONIC, 1) == []
    fat = make_parameterization(QQ, ["X1", "X2", "X3"], ["X1^2", "X1*X2", "X2^2"])
    basis = boundary_basis(fat, 2)
    assert len(basis) == 3
    ring = fat.ring
    expected = [
        polys_to_vector(fat, 2, (ring.poly("X1*X2"), ring.poly("-X1^2"), ring.zero)),
        polys_to_vector(fat, 2, (ring.poly("X2^2"), ring.zero, ring.poly("-X1^2"))),
        polys_to_vector(fat, 2, (ring.zero, ring.poly("X2^2"), ring.poly("-X1*X2"))),
    ]
    assert spans_equal(basis, expected, QQ)
    # boundaries are cycles in every degree
    for nu in (2, 3):
        z1 = cycle_basis(fat, 1, nu)
        b1 = boundary_basis(fat, nu)
        assert scalar_rank(QQ, z1 + b1) == len(z1)


# ---------------------------------------------------------------------------
# strands


def test_quadric_strand_dims_and_shapes():
    st = z_strand(QUADRIC, 2)
    assert st.dims == [6, 9, 4, 1]
    assert st.map_shapes() == [(6, 9), (9, 4), (4, 1)]


def test_conic_strand_is_square_moving_lines_matrix():
    st = z_strand(CONIC, 1)
    assert st.dims == [2, 2, 0]
    assert st.map_shapes()[0] == (2, 2)
    for m in st.maps:
        m.require_t_linear()


def test_strand_differentials_compose_to_zero():
    for param, nu in ((CONIC, 1), (CONIC, 2), (CONIC_FAT, 2), (QUADRIC, 2), (LCI_SURF, 4)):
        st = z_strand(param, nu)
        for i in range(len(st.maps) - 1):
            if st.maps[i].cols and st.maps[i + 1].cols:
                assert st.maps[i].matmul(st.maps[i + 1]).is_zero()


def test_strand_over_prime_field():
    conic_p = make_parameterization(GF(65521), ["X1", "X2"], ["X1^2", "X1*X2", "X2^2"])
    st = z_strand(conic_p, 1)
    cd = complex_determinant(st)
    assert unit_multiple_of(cd.value, conic_p.ring.poly("T2^2 - T1*T3"))


# ---------------------------------------------------------------------------
# determinants


def test_conic_determinant():
    cd = complex_determinant(z_strand(CONIC, 1))
    assert unit_multiple_of(cd.value, CONIC.ring.poly("T2^2 - T1*T3"))


def test_quadric_determinant_and_minor_sizes():
    cd = complex_determinant(z_strand(QUADRIC, 2))
    ring = QUADRIC.ring
    assert unit_multiple_of(cd.value, ring.poly("T1+T2+T3-T4") ** 4)
    assert sorted(cd.minor_sizes()) == [1, 3, 6]


def test_lci_determinant():
    cd = complex_determinant(z_strand(LCI_SURF, 4))
    assert unit_multiple_of(cd.value, LCI_SURF.ring.poly(LCI_EQUATION))
    assert cd.minor_sizes() == [15, 15, 3]


def test_fat_conic_quotient():
    cd = complex_determinant(z_strand(CONIC_FAT, 2))
    assert cd.minor_sizes() == [3, 1]
    assert unit_multiple_of(cd.value, CONIC_FAT.ring.poly("T1*T3 - T2^2"))


def test_determinant_seed_independent_up_to_unit():
    a = complex_determinant(z_strand(CONIC_FAT, 2), seed=1)
    b = complex_determinant(z_strand(CONIC_FAT, 2), seed=987654321)
    assert unit_multiple_of(a.value, b.value)
    qa = complex_determinant(z_strand(QUADRIC, 2), seed=5)
    qb = complex_determinant(z_strand(QUADRIC, 2), seed=77)
    assert unit_multiple_of(qa.value, qb.value)


def test_determinant_chain_consistency():
    cd = complex_determinant(z_strand(QUADRIC, 2))
    num = QUADRIC.ring.one
    den = QUADRIC.ring.one
    for (_, _, _, det, sign) in cd.chain:
        if sign > 0:
            num = num * det
        else:
            den = den * det
    assert num == cd.value * den


def test_nu_stability():
    base = complex_determinant(z_strand(CONIC, 1)).value
    nxt = complex_determinant(z_strand(CONIC, 2)).value
    assert unit_multiple_of(base, nxt)


def test_evaluation_oracle_on_determinant():
    rng = random.Random(123)
    cd = complex_determinant(z_strand(QUADRIC, 2))
    names = QUADRIC.t_names()
    for _ in range(20):
        while True:
            pt = {nm: rng.randint(-9, 9) for nm in QUADRIC.ring.names[: QUADRIC.ring.nx]}
            vals = [p.evaluate(pt) for p in QUADRIC.polys]
            if any(v.terms for v in vals):
                break
        sub = {nm: v for nm, v in zip(names, vals)}
        assert cd.value.evaluate(sub).is_zero()


def test_rank_profile_violation_below_viable_degree():
    with pytest.raises(HypothesisViolation):
        complex_determinant(z_strand(CONIC, 0))
    with pytest.raises(HypothesisViolation):
        complex_determinant(z_strand(CUBIC_SURF, 3))


def test_degenerate_parameterization_gives_degree_zero():
    # a map that is not generically finite: the strand is still exact and its
    # determinant is a unit (degree 0); rejecting such input is the analyze
    # gate's job, not the strand's
    squares = make_parameterization(QQ, ["X1", "X2"], ["X1^2", "X1^2", "X1^2"])
    cd = complex_determinant(z_strand(squares, 1))
    assert cd.value.total_degree() == 0


# ---------------------------------------------------------------------------
# gcd of maximal minors


def test_gcd_minors_square_case():
    st = z_strand(CONIC, 1)
    g = gcd_of_maximal_minors(st)
    assert unit_multiple_of(g, CONIC.ring.poly("T2^2 - T1*T3"))


def test_gcd_minors_fat_conic():
    st = z_strand(CONIC_FAT, 2)
    g = gcd_of_maximal_minors(st)
    assert unit_multiple_of(g, CONIC_FAT.ring.poly("T1*T3 - T2^2"))


def test_gcd_minors_matches_determinant_on_lci():
    st = z_strand(LCI_SURF, 4)
    g = gcd_of_maximal_minors(st)
    cd = complex_determinant(st)
    assert unit_multiple_of(g, cd.value)


def test_gcd_minors_matches_determinant_on_surfaces():
    for param, nu in ((QUADRIC, 2), (CUBIC_SURF, 4)):
        st = z_strand(param, nu)
        g = gcd_of_maximal_minors(st)
        assert unit_multiple_of(g, complex_determinant(st).value)


def test_degree_bookkeeping():
    for param, nu, expected in ((CONIC, 1, 2), (CONIC_FAT, 2, 2), (QUADRIC, 2, 4), (LCI_SURF, 4, 3)):
        cd = complex_determinant(z_strand(param, nu))
        total = 0
        for (_, rows, _, det, sign) in cd.chain:
            total += sign * det.total_degree()
        assert total == expected == cd.value.total_degree()
