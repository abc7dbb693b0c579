"""Base-point analysis and degree prediction.

Everything here is exact linear algebra on graded pieces: Hilbert values of
A/I, the eventual (stable) value as the total multiplicity of the base
locus, the predicted implicit degree d^(n-2) - e, degreewise saturation, and
the Koszul-syzygy comparison B_1 vs Z_1 intersected with the (saturated)
ideal times A^n.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import Poly, gcd_many
from .errors import HypothesisViolation, ImplicaxError
from .linalg import ScalarMatrix, _rref, rank_and_kernel, scalar_rank
from .strands import (
    boundary_basis,
    cycle_basis,
    koszul_differential_matrix,
    vector_to_polys,
)

__all__ = [
    "hilbert_value",
    "base_locus_profile",
    "predicted_degree",
    "nu_bound",
    "saturation_piece",
    "ideal_piece",
    "syzygetic_test",
    "SyzygeticReport",
    "BasePointReport",
]


def hilbert_value(param, nu):
    """dim of (A/I)_nu: monomial count minus the rank of multiplication by f."""
    if nu < 0:
        return 0
    dim_a = len(param.ring.x_monomials(nu))
    if nu < param.d:
        return dim_a
    mult = koszul_differential_matrix(param, 1, nu - param.d)
    return dim_a - scalar_rank(param.ring.field, mult.data)


def base_locus_profile(param):
    """(dim flag, total multiplicity): -1 empty, 0 finite, 1 positive-dimensional.

    Reads the Hilbert value of A/I over a stabilization window starting past
    the classical regularity bound; a constant nonzero plateau is the total
    multiplicity e of the base locus, a non-plateau signals dimension >= 1.
    """
    n, d = param.n, param.d
    start = (n - 1) * (d - 1) + 1
    window = max(n, d)
    values = [hilbert_value(param, nu) for nu in range(start, start + window + 1)]
    if all(v == 0 for v in values):
        return -1, 0
    if all(v == values[0] for v in values):
        return 0, values[0]
    return 1, None


def predicted_degree(param):
    """d^(n-2) - e; zero means the map is not generically finite."""
    dim, e = base_locus_profile(param)
    if dim > 0:
        raise HypothesisViolation(
            "positive-dimensional base locus: Hilbert values keep growing"
        )
    return param.d ** (param.n - 2) - e


def nu_bound(n, d):
    """Smallest strand degree the implicitization theorems guarantee."""
    if n < 3 or d < 1:
        raise ImplicaxError("need n >= 3 and d >= 1")
    return (n - 2) * (d - 1)


# ---------------------------------------------------------------------------
# graded pieces and reduction helpers


class _SpanReducer:
    """Reduce vectors modulo the row span of a set of vectors."""

    def __init__(self, field, vectors, width):
        self.field = field
        self.width = width
        if vectors:
            rank, rows, pivots = _rref(field, vectors)
            self.rows = rows[:rank]
            self.pivots = pivots
        else:
            self.rows = []
            self.pivots = []

    def reduce(self, vec):
        field = self.field
        p = field.char
        v = list(vec)
        for row, c in zip(self.rows, self.pivots):
            x = v[c]
            if not x:
                continue
            if p:
                f = x * pow(row[c], p - 2, p) % p
                v = [(a - f * b) % p for a, b in zip(v, row)]
            else:
                f = Fraction(x, row[c])
                v = [a - f * b for a, b in zip(v, row)]
        return v

    def contains(self, vec):
        return all(not x for x in self.reduce(vec))

    @property
    def dim(self):
        return len(self.rows)


def ideal_piece(param, nu):
    """Echelon basis (coefficient rows over the A_nu monomials) of I_nu."""
    ring = param.ring
    if nu < param.d:
        return []
    mult = koszul_differential_matrix(param, 1, nu - param.d)
    cols = [[mult.data[r][c] for r in range(mult.rows)] for c in range(mult.cols)]
    rank, rows, _ = _rref(ring.field, cols)
    return rows[:rank]


def saturation_piece(param, nu):
    """Basis of the degree-nu piece of the saturation of I.

    {g in A_nu : g * A_s is contained in I_(nu+s)} for s grown until two
    consecutive rounds agree in dimension; always contains I_nu.
    """
    ring = param.ring
    field = ring.field
    monos_nu = ring.x_monomials(nu)
    width = len(monos_nu)
    if width == 0:
        return []
    prev = None
    s = 1
    cap = nu + 2 * param.d + param.n + 4
    while True:
        target_monos = ring.x_monomials(nu + s)
        index = {m: k for k, m in enumerate(target_monos)}
        red = _SpanReducer(field, ideal_piece(param, nu + s), len(target_monos))
        constraints = []
        for u in ring.x_monomials(s):
            # matrix of g -> residue of g*u mod I_(nu+s), row per residue coord
            images = []
            for g in monos_nu:
                vec = [0] * len(target_monos)
                vec[index[ring.mono_mul(g, u)]] = 1
                images.append(red.reduce(vec))
            for coord in range(len(target_monos)):
                row = [images[gi][coord] for gi in range(width)]
                if any(row):
                    constraints.append(row)
        if constraints:
            _, kernel = rank_and_kernel(ScalarMatrix(field, constraints, width))
        else:
            kernel = [[1 if i == j else 0 for i in range(width)] for j in range(width)]
        dim = len(kernel)
        if prev is not None and dim == prev[0]:
            rank, rows, _ = _rref(field, kernel) if kernel else (0, [], [])
            return rows[:rank]
        prev = (dim, kernel)
        s += 1
        if s > cap:
            rank, rows, _ = _rref(field, prev[1]) if prev[1] else (0, [], [])
            return rows[:rank]


# ---------------------------------------------------------------------------
# the Koszul-syzygy comparison


@dataclass
class SyzygeticDegree:
    nu: int
    boundary_dim: int
    saturated_dim: int
    plain_dim: int

    @property
    def saturated_equal(self):
        return self.boundary_dim == self.saturated_dim

    @property
    def plain_equal(self):
        return self.boundary_dim == self.plain_dim


@dataclass
class SyzygeticReport:
    nu_max: int
    degrees: list
    witness: tuple | None  # (nu, component polys) for the first saturated failure

    @property
    def verdict(self):
        return "pass" if all(d.saturated_equal for d in self.degrees) else "fail"

    @property
    def plain_verdict(self):
        return "pass" if all(d.plain_equal for d in self.degrees) else "fail"

    def summary(self):
        return "%s (tested degrees 1..%d)" % (self.verdict, self.nu_max)


def _restricted_syzygies(param, nu, z1_vectors, piece_rows):
    """Basis of Z_1 vectors whose components all lie in the given piece."""
    ring = param.ring
    field = ring.field
    monos = ring.x_monomials(nu)
    width = len(monos)
    red = _SpanReducer(field, piece_rows, width)
    if not z1_vectors:
        return []
    constraints = []
    ncols = len(z1_vectors)
    reduced_blocks = []
    for vec in z1_vectors:
        blocks = []
        for j in range(param.n):
            blocks.append(red.reduce(vec[j * width : (j + 1) * width]))
        reduced_blocks.append(blocks)
    for j in range(param.n):
        for coord in range(width):
            row = [reduced_blocks[s][j][coord] for s in range(ncols)]
            if any(row):
                constraints.append(row)
    if not constraints:
        coeff_basis = [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    else:
        _, coeff_basis = rank_and_kernel(ScalarMatrix(field, constraints, ncols))
    out = []
    for coeffs in coeff_basis:
        vec = [0] * (param.n * width)
        for c, zv in zip(coeffs, z1_vectors):
            if c:
                for k, x in enumerate(zv):
                    if x:
                        vec[k] += c * x
        if field.char:
            vec = [x % field.char for x in vec]
        out.append(vec)
    return out


def syzygetic_test(param, nu_max=None):
    """Compare Koszul boundaries with syzygies landing in the (saturated) ideal.

    For each degree nu <= nu_max checks B_1 = Z_1 n (TF(I).A^n) and reports
    the plain-I variant alongside; the verdict is the saturated comparison.
    """
    if nu_max is None:
        nu_max = 2 * param.d
    if nu_max < param.d:
        raise ImplicaxError("nu_max %d below generator degree %d" % (nu_max, param.d))
    field = param.ring.field
    degrees = []
    witness = None
    for nu in range(1, nu_max + 1):
        z1 = cycle_basis(param, 1, nu)
        b1 = boundary_basis(param, nu)
        sat_rows = saturation_piece(param, nu)
        ideal_rows = ideal_piece(param, nu)
        inter_sat = _restricted_syzygies(param, nu, z1, sat_rows)
        inter_plain = _restricted_syzygies(param, nu, z1, ideal_rows)
        entry = SyzygeticDegree(
            nu=nu,
            boundary_dim=len(b1),
            saturated_dim=len(inter_sat),
            plain_dim=len(inter_plain),
        )
        # sanity: boundaries always sit inside both intersections
        if b1:
            assert scalar_rank(field, inter_sat + b1) == len(inter_sat)
            assert scalar_rank(field, inter_plain + b1) == len(inter_plain)
        if witness is None and not entry.saturated_equal:
            bred = _SpanReducer(field, b1, param.n * len(param.ring.x_monomials(nu)))
            for vec in inter_sat:
                if not bred.contains(vec):
                    witness = (nu, vector_to_polys(param, nu, vec))
                    break
        degrees.append(entry)
    return SyzygeticReport(nu_max=nu_max, degrees=degrees, witness=witness)


# ---------------------------------------------------------------------------
# the analysis report


@dataclass
class BasePointReport:
    """Diagnostics bundle for a parameterization."""

    content_gcd: Poly
    base_locus_dim: int
    e_total: int | None
    predicted_degree: int | None
    generically_finite: bool | None
    nu_bound: int
    syzygetic: SyzygeticReport | None = None

    @property
    def syzygetic_verdict(self):
        if self.syzygetic is None:
            return "not-run"
        return self.syzygetic.summary()

    def to_dict(self):
        return {
            "content_gcd": str(self.content_gcd),
            "base_locus_dim": self.base_locus_dim,
            "e_total": self.e_total,
            "predicted_degree": self.predicted_degree,
            "generically_finite": self.generically_finite,
            "nu_bound": self.nu_bound,
            "syzygetic_verdict": self.syzygetic_verdict,
            "syzygetic_plain_verdict": (
                None if self.syzygetic is None else self.syzygetic.plain_verdict
            ),
        }


def analyze_parameterization(param, run_syzygetic=None, syzygetic_nu_max=None):
    """Assemble the BasePointReport; never raises on degenerate input."""
    content = gcd_many(list(param.polys))
    dim, e = base_locus_profile(param)
    if dim > 0:
        pdeg = None
        genfin = None
    else:
        pdeg = param.d ** (param.n - 2) - e
        genfin = pdeg > 0
    if run_syzygetic is None:
        # the comparison theorems live in >= 3 ambient variables; the square
        # (n = 4) surface case is the one worth reporting by default
        run_syzygetic = param.ring.nx >= 3 and param.n <= 4
    syz = None
    if run_syzygetic:
        syz = syzygetic_test(param, syzygetic_nu_max)
    return BasePointReport(
        content_gcd=content,
        base_locus_dim=dim,
        e_total=e,
        predicted_degree=pdeg,
        generically_finite=genfin,
        nu_bound=nu_bound(param.n, param.d),
        syzygetic=syz,
    )
