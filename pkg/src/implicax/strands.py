"""Graded strands of the Koszul syzygy complex and their determinants.

For a parameterization f = (f_1 .. f_n) of degree d, the degree-nu strand is
the finite complex of free k[T]-modules

    0 -> (Z_{n-1})_nu -> ... -> (Z_1)_nu -> A_nu[T]

where (Z_i)_nu is the kernel of the contraction against f on the i-th
exterior power (coefficients in A_nu), and the maps contract against the
T variables.  The strand determinant (alternating product of nested minors)
yields the implicit equation of the closed image raised to the degree of the
map; the same polynomial arises as the gcd of the maximal minors of the
rightmost map.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .arith import (
    NotDivisibleError,
    Poly,
    exact_divide,
    gcd_homogeneous_by_lines,
    multivariate_gcd,
    normalize,
)
from .errors import HypothesisViolation, ImplicaxError
from .linalg import (
    DEFAULT_SEED,
    PolyMatrix,
    ScalarMatrix,
    _full_pivot_select,
    _random_point,
    det_fraction_free,
    rref_kernel_data,
    scalar_rank,
    specialize,
)

__all__ = [
    "KoszulBasis",
    "ZStrand",
    "ComplexDet",
    "koszul_differential_matrix",
    "cycle_basis",
    "boundary_basis",
    "z_strand",
    "complex_determinant",
    "gcd_of_maximal_minors",
]


class KoszulBasis:
    """Ordered basis of the i-th exterior power with A_nu coefficients.

    Basis vectors are pairs (index subset J, monomial m), subsets in
    lexicographic order, monomials grevlex-descending; the flat index is
    subset-major.
    """

    def __init__(self, param, i, nu):
        self.param = param
        self.i = i
        self.nu = nu
        self.subsets = list(itertools.combinations(range(param.n), i))
        self.monos = param.ring.x_monomials(nu)
        self.sub_index = {s: k for k, s in enumerate(self.subsets)}
        self.mono_index = {m: k for k, m in enumerate(self.monos)}
        self.dim = len(self.subsets) * len(self.monos)

    def index(self, subset, mono):
        return self.sub_index[subset] * len(self.monos) + self.mono_index[mono]


def koszul_differential_matrix(param, i, nu):
    """Matrix of contraction against f from exterior degree i to i-1.

    Source has A_nu coefficients, target A_{nu+d}; the usual alternating
    signs apply: e_J -> sum_l (-1)^l f_{J[l]} e_{J minus J[l]}.
    """
    if not 1 <= i <= param.n:
        raise ImplicaxError("exterior degree %d out of range" % i)
    ring = param.ring
    src = KoszulBasis(param, i, nu)
    dst = KoszulBasis(param, i - 1, nu + param.d)
    data = [[0] * src.dim for _ in range(dst.dim)]
    nm_dst = len(dst.monos)
    for sj, J in enumerate(src.subsets):
        for l, j in enumerate(J):
            sign = 1 if l % 2 == 0 else -1
            tgt_sub = dst.sub_index[J[:l] + J[l + 1 :]] * nm_dst
            fpoly = param.polys[j]
            for mi, m in enumerate(src.monos):
                col = sj * len(src.monos) + mi
                for fm, fc in fpoly.terms.items():
                    r = tgt_sub + dst.mono_index[ring.mono_mul(fm, m)]
                    data[r][col] = data[r][col] + (fc if sign > 0 else -fc)
    if ring.field.char:
        p = ring.field.char
        data = [[x % p for x in row] for row in data]
    return ScalarMatrix(ring.field, data, src.dim)


def _cycle_data(param, i, nu):
    """(kernel vectors, free column positions) of the degree-nu cycles."""
    m = koszul_differential_matrix(param, i, nu)
    _, basis, frees = rref_kernel_data(m)
    return basis, frees


def cycle_basis(param, i, nu):
    """Deterministic basis of (Z_i)_nu as coefficient vectors."""
    if not 1 <= i <= param.n - 1:
        raise ImplicaxError("cycle degree %d out of range" % i)
    vectors, _ = _cycle_data(param, i, nu)
    return vectors


def boundary_basis(param, nu):
    """Echelon basis of the degree-nu span of the Koszul syzygies.

    Monomial multiples of f_j e_l - f_l e_j with multiplier degree nu - d;
    empty below degree d.
    """
    ring = param.ring
    if nu < param.d:
        return []
    nm = ring.x_monomials(nu)
    mono_index = {m: k for k, m in enumerate(nm)}
    rows = []
    for j, l in itertools.combinations(range(param.n), 2):
        for u in ring.x_monomials(nu - param.d):
            vec = [0] * (param.n * len(nm))
            for fm, fc in param.polys[j].terms.items():
                vec[l * len(nm) + mono_index[ring.mono_mul(fm, u)]] += fc
            for fm, fc in param.polys[l].terms.items():
                vec[j * len(nm) + mono_index[ring.mono_mul(fm, u)]] -= fc
            rows.append(vec)
    from .linalg import _rref

    rank, red, pivots = _rref(ring.field, rows)
    return [red[r] for r in range(rank)]


def vector_to_polys(param, nu, vec):
    """Split a flat exterior-degree-1 vector into an n-tuple of A_nu polys."""
    ring = param.ring
    nm = ring.x_monomials(nu)
    out = []
    for j in range(param.n):
        terms = {}
        for k, m in enumerate(nm):
            c = vec[j * len(nm) + k]
            if c:
                terms[m] = c
        out.append(Poly(ring, ring.field.reduce_terms(terms)))
    return tuple(out)


def polys_to_vector(param, nu, polys):
    ring = param.ring
    nm = ring.x_monomials(nu)
    mono_index = {m: k for k, m in enumerate(nm)}
    vec = [0] * (param.n * len(nm))
    for j, p in enumerate(polys):
        for m, c in p.terms.items():
            vec[j * len(nm) + mono_index[m]] = c
    return vec


@dataclass
class ZStrand:
    """The degree-nu strand: dims [z_0 .. z_{n-1}] and the T-contraction maps.

    maps[i] sends the chosen basis of (Z_{i+1})_nu into that of (Z_i)_nu
    (with (Z_0)_nu read as A_nu); entries are linear forms in T.
    """

    param: object
    nu: int
    dims: list
    maps: list
    cycle_bases: list = dc_field(default_factory=list)

    @property
    def n(self):
        return self.param.n

    def map_shapes(self):
        return [(m.rows, m.cols) for m in self.maps]


def _dT_components(param, kb_src, kb_dst, vec):
    """Per-T-variable component vectors of the T-contraction of vec."""
    n = param.n
    nm = len(kb_src.monos)
    comps = [[0] * kb_dst.dim for _ in range(n)]
    for sj, J in enumerate(kb_src.subsets):
        base = sj * nm
        for mi in range(nm):
            c = vec[base + mi]
            if not c:
                continue
            for l, j in enumerate(J):
                tgt = kb_dst.sub_index[J[:l] + J[l + 1 :]] * nm + mi
                if l % 2 == 0:
                    comps[j][tgt] += c
                else:
                    comps[j][tgt] -= c
    return comps


def z_strand(param, nu, check=True):
    """Assemble the degree-nu strand with verified differentials."""
    if nu < 0:
        raise ImplicaxError("strand degree must be nonnegative")
    ring = param.ring
    field = ring.field
    n = param.n
    t_names = param.t_names()
    kbs = [KoszulBasis(param, i, nu) for i in range(n)]
    z0 = len(kbs[0].monos)
    bases = []
    frees = []
    for i in range(1, n):
        vecs, fr = _cycle_data(param, i, nu)
        bases.append(vecs)
        frees.append(fr)
    dims = [z0] + [len(b) for b in bases]

    def t_form(coeffs):
        """Poly sum_j coeffs[j] * T_j."""
        terms = {}
        for j, c in enumerate(coeffs):
            if c:
                terms[ring.var_mono(ring.var_index(t_names[j]))] = c
        return Poly(ring, field.reduce_terms(terms))

    maps = []
    # rightmost map: (Z_1)_nu -> A_nu[T], expressed on the monomial basis
    m0 = [[None] * dims[1] for _ in range(z0)]
    for s, vec in enumerate(bases[0]):
        for r in range(z0):
            m0[r][s] = t_form([vec[j * z0 + r] for j in range(n)])
    maps.append(PolyMatrix(ring, m0 if z0 else [], dims[1]))
    # deeper maps: re-express T-contractions in the next cycle basis
    for i in range(1, n - 1):
        src_vecs = bases[i]
        dst_vecs = bases[i - 1]
        dst_free = frees[i - 1]
        pivots = [dst_vecs[r][dst_free[r]] for r in range(len(dst_vecs))]
        rows = len(dst_vecs)
        cols = len(src_vecs)
        data = [[None] * cols for _ in range(rows)]
        for s, vec in enumerate(src_vecs):
            comps = _dT_components(param, kbs[i + 1], kbs[i], vec)
            coords = []
            for j in range(n):
                w = comps[j]
                if field.char:
                    xs = [
                        w[dst_free[r]] * pow(pivots[r], field.char - 2, field.char) % field.char
                        for r in range(rows)
                    ]
                else:
                    xs = [Fraction(w[dst_free[r]], pivots[r]) for r in range(rows)]
                coords.append(xs)
                if check and not _combination_matches(dst_vecs, xs, w, field):
                    raise ImplicaxError(
                        "strand grading error: contraction image left the cycle space"
                    )
            for r in range(rows):
                data[r][s] = t_form(
                    [field.canon(coords[j][r]) if field.char else coords[j][r] for j in range(n)]
                )
        maps.append(PolyMatrix(ring, data if rows else [], cols))
    strand = ZStrand(param, nu, dims, maps, bases)
    if check:
        for m in maps:
            m.require_t_linear()
        for i in range(len(maps) - 1):
            if maps[i].cols and maps[i + 1].cols:
                if not maps[i].matmul(maps[i + 1]).is_zero():
                    raise ImplicaxError("strand differentials do not compose to zero")
    return strand


def _combination_matches(vectors, xs, target, field):
    acc = [0] * len(target)
    for x, v in zip(xs, vectors):
        if x:
            for k, c in enumerate(v):
                if c:
                    acc[k] += x * c
    if field.char:
        return all((a - b) % field.char == 0 for a, b in zip(acc, target))
    return all(a == b for a, b in zip(acc, target))


# ---------------------------------------------------------------------------
# determinants of strands


@dataclass
class ComplexDet:
    """Strand determinant with the nested minor chain that produced it.

    chain entries: (map index, row indices, col indices, minor det, sign)
    where sign +1 contributes to the numerator, -1 to the denominator.
    """

    value: Poly
    chain: list

    def minor_sizes(self):
        return [len(rows) for (_, rows, _, _, _) in self.chain]


def _rank_profile(strand, rng):
    ranks = []
    for m in strand.maps:
        if m.rows == 0 or m.cols == 0:
            ranks.append(0)
            continue
        spec = specialize(m, _random_point(m.ring, rng))
        ranks.append(scalar_rank(spec.field, spec.data))
    return ranks


def _profile_ok(strand, ranks):
    dims = strand.dims
    n = strand.n
    if ranks[0] != dims[0]:
        return False
    for spot in range(1, n - 1):
        r_in = ranks[spot - 1]
        r_out = ranks[spot] if spot < len(ranks) else 0
        if r_in + r_out != dims[spot]:
            return False
    if ranks[n - 2] != dims[n - 1]:
        return False
    return True


def check_rank_profile(strand, seed=DEFAULT_SEED):
    """Verify generic exactness off the zeroth spot; raise otherwise.

    A violation is declared only when two independent specializations agree
    on a failing profile (random points can only underestimate ranks).
    """
    rng = random.Random(seed)
    ranks = _rank_profile(strand, rng)
    if _profile_ok(strand, ranks):
        return ranks
    ranks2 = _rank_profile(strand, rng)
    merged = [max(a, b) for a, b in zip(ranks, ranks2)]
    if _profile_ok(strand, merged):
        return merged
    raise HypothesisViolation(
        "rank profile %s inconsistent with exactness for dims %s "
        "(base locus not finite / not a local complete intersection / "
        "map not generically finite, or the strand degree is too small)"
        % (merged, strand.dims)
    )


def _select_chain_minor(m, row_subset, rng, max_tries=8):
    """Columns making m[row_subset, cols] nonsingular; returns (cols, det)."""
    target = len(row_subset)
    if target == 0:
        return [], m.ring.one
    last = "no candidate"
    for _ in range(max_tries):
        spec = specialize(m, _random_point(m.ring, rng))
        picked = _full_pivot_select(spec, target, allowed_rows=row_subset)
        if picked is None:
            last = "specialized rank below %d" % target
            continue
        _, cols = picked
        det = det_fraction_free(m.submatrix(row_subset, cols))
        if det.terms:
            return cols, det
        last = "singular symbolic minor"
    raise HypothesisViolation(
        "could not complete the minor chain (%s); hypotheses likely violated" % last
    )


def complex_determinant(strand, seed=DEFAULT_SEED):
    """Determinant of the strand: alternating product of nested minors.

    Row indices at each level are forced to the complement of the previous
    column choice; numerator and denominator products are divided once at
    the end, exactly.
    """
    ranks = check_rank_profile(strand, seed)
    ring = strand.param.ring
    for attempt in range(3):
        rng = random.Random("%s:chain:%d" % (seed, attempt))
        try:
            chain = []
            rows = list(range(strand.dims[0]))
            for idx, m in enumerate(strand.maps):
                cols, det = _select_chain_minor(m, rows, rng)
                sign = 1 if idx % 2 == 0 else -1
                chain.append((idx, list(rows), list(cols), det, sign))
                taken = set(cols)
                rows = [c for c in range(m.cols) if c not in taken]
            if rows:
                raise HypothesisViolation(
                    "minor chain left %d unmatched basis elements" % len(rows)
                )
            num = ring.one
            den = ring.one
            for (_, _, _, det, sign) in chain:
                if sign > 0:
                    num = num * det
                else:
                    den = den * det
            try:
                value = exact_divide(num, den, verify=True)
            except NotDivisibleError:
                raise HypothesisViolation(
                    "minor quotient is not exact; the strand is not a "
                    "resolution (hypotheses violated)"
                ) from None
            if not value.terms:
                raise HypothesisViolation("strand determinant vanished")
            return ComplexDet(value, chain)
        except HypothesisViolation:
            if attempt == 2:
                raise
    raise AssertionError("unreachable")


# ---------------------------------------------------------------------------
# gcd of maximal minors


def _pm_times_int_matrix(m, R):
    """PolyMatrix times an integer matrix (columns recombined)."""
    ring = m.ring
    cols = len(R[0])
    out = []
    for i in range(m.rows):
        row = []
        for j in range(cols):
            acc = ring.zero
            for k in range(m.cols):
                r = R[k][j]
                if r and m.data[i][k].terms:
                    acc = acc + m.data[i][k] * r
            row.append(acc)
        out.append(row)
    return PolyMatrix(ring, out, cols)


def _gcd_pair(a, b, seed):
    if a.total_degree() >= 6 and b.total_degree() >= 6 and len(a.terms) * len(b.terms) > 900:
        return gcd_homogeneous_by_lines(a, b, seed=seed)
    return multivariate_gcd(a, b)


def gcd_of_maximal_minors(strand, seed=DEFAULT_SEED, enumerate_cap=220):
    """gcd of the z_0 x z_0 minors of the rightmost strand map.

    Small matrices are enumerated exhaustively.  Otherwise the gcd is taken
    over a seeded sample of column choices until it stabilizes, then verified
    to divide random integer column-recombinations of the map (each such
    determinant is an integer combination of all maximal minors, so it is a
    sound divisibility witness for the whole family).
    """
    m = strand.maps[0]
    z0, z1 = m.rows, m.cols
    if z1 < z0:
        raise HypothesisViolation(
            "rightmost map is %dx%d; need at least as many syzygies as monomials" % (z0, z1)
        )
    import math as _math

    total = _math.comb(z1, z0)
    rng = random.Random("%s:minors" % (seed,))
    g = None
    if total <= enumerate_cap:
        for cols in itertools.combinations(range(z1), z0):
            det = det_fraction_free(m.submatrix(range(z0), cols))
            if not det.terms:
                continue
            g = det if g is None else _gcd_pair(g, det, seed)
            if g.total_degree() == 0:
                break
        if g is None:
            raise HypothesisViolation("all maximal minors vanish")
        return normalize(g)
    # one verified nonsingular minor to seed the gcd
    cols0, det0 = _select_chain_minor(m, list(range(z0)), rng)
    g = det0
    # a few more sampled minors
    for _ in range(4):
        cols = sorted(rng.sample(range(z1), z0))
        if cols == cols0:
            continue
        det = det_fraction_free(m.submatrix(range(z0), cols))
        if not det.terms:
            continue
        try:
            exact_divide(det, g, verify=False)
        except Exception:
            g = _gcd_pair(g, det, seed)
        if g.total_degree() == 0:
            return normalize(g)
    # dense sign recombinations: each determinant below is an integer
    # combination of *all* maximal minors (Cauchy-Binet), so divisibility
    # constrains minors the sample never visited
    clean = 0
    attempts = 0
    while clean < 2 and attempts < 12:
        attempts += 1
        R = [[rng.choice((-1, 1)) for _ in range(z0)] for _ in range(z1)]
        comb = _pm_times_int_matrix(m, R)
        det = det_fraction_free(comb)
        if not det.terms:
            continue
        try:
            exact_divide(det, g, verify=False)
            clean += 1
        except Exception:
            g = _gcd_pair(g, det, seed)
            clean = 0
    return normalize(g)
