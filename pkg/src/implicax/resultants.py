"""Classical resultant matrices for binary forms: Sylvester, Bezout, and the
three-form Bezout pencil (Kravitsky), used both as a standalone curve
implicitizer and as an independent cross-check on the strand determinant.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import Poly, multivariate_gcd, normalize
from .errors import HypothesisViolation, ImplicaxError
from .linalg import PolyMatrix, det_fraction_free

__all__ = [
    "BinaryForm",
    "binary_form",
    "sylvester_matrix",
    "sylvester_resultant",
    "bezout_matrix",
    "kravitsky_pencil",
    "curve_implicitize_resultant",
    "CurveResultant",
]


class BinaryForm:
    """Homogeneous binary form: coefficients c_0..c_d of X1^(d-j) X2^j.

    Coefficients are polynomials in the T bank (constants for plain forms),
    so combinations like f1 - T1*f3 stay in one type.
    """

    def __init__(self, ring, coeffs):
        self.ring = ring
        self.coeffs = list(coeffs)
        if not self.coeffs:
            raise ImplicaxError("empty coefficient list")
        self.degree = len(self.coeffs) - 1

    def is_zero(self):
        return all(not c.terms for c in self.coeffs)

    def shifted(self, s):
        """Coefficient of S^m in the dehomogenization, m descending."""
        # p(S,1) = sum_j c_j S^(d-j): row [c_0, c_1, ..., c_d] already lists
        # coefficients by descending S power
        return self.coeffs

    def __repr__(self):
        return "BinaryForm(deg %d; %s)" % (
            self.degree,
            ", ".join(str(c) for c in self.coeffs),
        )


def binary_form(param_or_ring, p):
    """Extract the coefficient list of a binary X-form as a BinaryForm."""
    ring = getattr(param_or_ring, "ring", param_or_ring)
    if ring.nx != 2:
        raise ImplicaxError("binary forms need exactly two X variables")
    if not p.terms:
        raise ImplicaxError("zero form")
    d = p.homogeneous_degree(0, 2)
    if d is None:
        raise ImplicaxError("form %r is not homogeneous" % p)
    coeffs = []
    for j in range(d + 1):
        mono = ring.pack(tuple([d - j, j] + [0] * (ring.nv - 2)))
        c = p.terms.get(mono, 0)
        coeffs.append(ring.const(c))
    return BinaryForm(ring, coeffs)


def _combine(form_a, t_name, form_b):
    """Coefficientwise a - T*b for two equal-degree forms."""
    ring = form_a.ring
    t = ring.var(t_name)
    return BinaryForm(
        ring, [ca - t * cb for ca, cb in zip(form_a.coeffs, form_b.coeffs)]
    )


def sylvester_matrix(p, q):
    """The (dp+dq) x (dp+dq) Sylvester matrix of two binary forms."""
    if p.is_zero() or q.is_zero():
        raise ImplicaxError("Sylvester matrix of a zero form")
    dp, dq = p.degree, q.degree
    if dp < 1 or dq < 1:
        raise ImplicaxError("forms must have degree >= 1")
    ring = p.ring
    n = dp + dq
    zero = ring.zero
    rows = []
    for i in range(dq):
        rows.append([zero] * i + list(p.coeffs) + [zero] * (n - dp - 1 - i))
    for i in range(dp):
        rows.append([zero] * i + list(q.coeffs) + [zero] * (n - dq - 1 - i))
    return PolyMatrix(ring, rows, n)


def sylvester_resultant(p, q):
    """Resultant of two binary forms as the Sylvester determinant."""
    return det_fraction_free(sylvester_matrix(p, q))


def bezout_matrix(p, q):
    """Bezout matrix (c_ij) from (p(S,1)q(T,1) - p(T,1)q(S,1)) / (S - T).

    Rows are indexed by the S exponent, columns by the T exponent; the
    matrix is symmetric.
    """
    if p.degree != q.degree:
        raise ImplicaxError(
            "Bezout matrix needs equal degrees, got %d and %d" % (p.degree, q.degree)
        )
    d = p.degree
    if d < 1:
        raise ImplicaxError("forms must have degree >= 1")
    ring = p.ring
    # a_m, b_m = coefficients of S^m
    a = [p.coeffs[d - m] for m in range(d + 1)]
    b = [q.coeffs[d - m] for m in range(d + 1)]
    num = {}
    for i in range(d + 1):
        for j in range(d + 1):
            if i == j:
                continue
            c = a[i] * b[j]
            if c.terms:
                key = (i, j)
                num[key] = num.get(key, ring.zero) + c
                key2 = (j, i)
                num[key2] = num.get(key2, ring.zero) - c
    num = {k: v for k, v in num.items() if v.terms}
    # divide by S - T, leading term S under lex S > T
    quot = [[ring.zero] * d for _ in range(d)]
    while num:
        i, j = max(num)
        c = num.pop((i, j))
        if not c.terms:
            continue
        if i == 0:
            raise ImplicaxError("Bezout numerator not divisible by S - T")
        quot[i - 1][j] = quot[i - 1][j] + c
        key = (i - 1, j + 1)
        prev = num.get(key, ring.zero)
        nv = prev + c
        if nv.terms:
            num[key] = nv
        else:
            num.pop(key, None)
    return PolyMatrix(ring, quot, d)


def kravitsky_pencil(f1, f2, f3):
    """T1*Bez(f2,f3) + T2*Bez(f3,f1) + T3*Bez(f1,f2) as a d x d pencil."""
    if not (f1.degree == f2.degree == f3.degree):
        raise ImplicaxError("pencil needs three forms of one degree")
    ring = f1.ring
    names = ring.names[ring.nx : ring.nx + 3]
    if len(names) < 3:
        raise ImplicaxError("ring carries fewer than three T variables")
    b23 = bezout_matrix(f2, f3)
    b31 = bezout_matrix(f3, f1)
    b12 = bezout_matrix(f1, f2)
    t1, t2, t3 = (ring.var(nm) for nm in names)
    d = f1.degree
    data = [
        [
            t1 * b23.data[i][j] + t2 * b31.data[i][j] + t3 * b12.data[i][j]
            for j in range(d)
        ]
        for i in range(d)
    ]
    return PolyMatrix(ring, data, d)


@dataclass
class CurveResultant:
    """Both resultant-style outputs for a plane curve parameterization."""

    dehomogenized: Poly  # Res(f1 - T1 f3, f2 - T2 f3) in T1, T2
    homogeneous: Poly  # det of the Kravitsky pencil in T1, T2, T3


def curve_implicitize_resultant(param):
    """Implicit power of a plane curve by resultant matrices.

    Requires three polynomials with trivial gcd (resultant methods need no
    base points); returns the dehomogenized Sylvester value together with the
    homogeneous pencil determinant.
    """
    if param.n != 3:
        raise ImplicaxError("resultant implicitization needs exactly 3 polynomials")
    param.require_map_shape()
    if any(not p.terms for p in param.polys):
        raise ImplicaxError("zero entry in the parameterization")
    g = multivariate_gcd(multivariate_gcd(param.polys[0], param.polys[1]), param.polys[2])
    if not g.is_constant():
        raise HypothesisViolation(
            "common factor %s present; divide it out before using resultants" % g
        )
    forms = [binary_form(param, p) for p in param.polys]
    t_names = param.t_names()
    p = _combine(forms[0], t_names[0], forms[2])
    q = _combine(forms[1], t_names[1], forms[2])
    res = sylvester_resultant(p, q)
    if not res.terms:
        raise HypothesisViolation("resultant vanished identically")
    kr = det_fraction_free(kravitsky_pencil(*forms))
    return CurveResultant(dehomogenized=normalize(res), homogeneous=normalize(kr))
