"""Exact coefficient fields and sparse multivariate polynomial arithmetic.

Coefficients are either rationals (Python int, promoted to Fraction only when
a denominator appears) or residues mod a prime p (plain ints in [0, p)).

A monomial is a single Python int packing, from most to least significant:
the total degree (24 bits), then one 16-bit field per variable in *reverse*
declared order, each field storing MAXEXP - exponent.  With this layout

  * integer comparison of keys == graded reverse lexicographic order,
  * monomial product == key_a + key_b - ONE,
  * divisibility and quotient are a couple of masked int ops,

so the hot loops (multiplication, exact division, determinants) run on plain
int arithmetic.  Exponents must stay below 2**15 and total degrees below
2**23; far beyond anything this library is used for.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

__all__ = [
    "QQ",
    "GF",
    "Ring",
    "Poly",
    "Parameterization",
    "ArithError",
    "ParseError",
    "NotDivisibleError",
    "SmallCharacteristicError",
]


class ArithError(Exception):
    """Base class for arithmetic failures."""


class ParseError(ArithError):
    """Malformed polynomial text."""


class NotDivisibleError(ArithError):
    """Exact division requested but the divisor does not divide."""


class SmallCharacteristicError(ArithError):
    """Operation needs characteristic 0 or larger than the degree at hand."""


# ---------------------------------------------------------------------------
# coefficient fields


class RationalField:
    """The rationals.  Values are int, or Fraction when non-integral."""

    char = 0
    name = "QQ"

    def canon(self, c):
        if type(c) is int:
            return c
        if c.denominator == 1:
            return int(c)
        return c

    def reduce_terms(self, terms):
        out = {}
        for m, c in terms.items():
            if c:
                if type(c) is not int and c.denominator == 1:
                    c = int(c)
                out[m] = c
        return out

    def div(self, a, b):
        if type(a) is int and type(b) is int:
            q, r = divmod(a, b)
            if r == 0:
                return q
        return self.canon(Fraction(a) / Fraction(b))

    def invert(self, a):
        return self.canon(Fraction(1) / Fraction(a))

    def neg(self, a):
        return -a

    def is_zero(self, a):
        return not a

    def parse(self, text):
        if "/" in text:
            num, den = text.split("/")
            return self.canon(Fraction(int(num), int(den)))
        return int(text)

    def format(self, c):
        if type(c) is int:
            return str(c)
        return "%d/%d" % (c.numerator, c.denominator)

    def random(self, rng, lo=-9, hi=9):
        return rng.randint(lo, hi)

    def random_nonzero(self, rng, lo=-9, hi=9):
        while True:
            c = rng.randint(lo, hi)
            if c:
                return c

    def nth_root(self, c, e):
        """Exact e-th root of c, or None."""
        fr = Fraction(c)
        num = _int_nth_root(fr.numerator, e)
        den = _int_nth_root(fr.denominator, e)
        if num is None or den is None:
            return None
        return self.canon(Fraction(num, den))

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


def _int_nth_root(n, e):
    """Exact integer e-th root of n (signed), or None."""
    if n < 0:
        if e % 2 == 0:
            return None
        r = _int_nth_root(-n, e)
        return None if r is None else -r
    if n in (0, 1):
        return n
    r = round(n ** (1.0 / e))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**e == n:
            return cand
    # float guess can be off for big n; fall back to bisection
    lo, hi = 0, 1 << (n.bit_length() // e + 1)
    while lo <= hi:
        mid = (lo + hi) // 2
        v = mid**e
        if v == n:
            return mid
        if v < n:
            lo = mid + 1
        else:
            hi = mid - 1
    return None


class PrimeField:
    """GF(p) for prime p.  Values are ints in [0, p)."""

    def __init__(self, p):
        if p < 2 or not _is_prime(p):
            raise ArithError("modulus %d is not prime" % p)
        self.p = p
        self.char = p
        self.name = "GF(%d)" % p
        self._dlog = None

    def canon(self, c):
        return c % self.p

    def reduce_terms(self, terms):
        p = self.p
        out = {}
        for m, c in terms.items():
            c %= p
            if c:
                out[m] = c
        return out

    def div(self, a, b):
        return a * pow(b, self.p - 2, self.p) % self.p

    def invert(self, a):
        return pow(a, self.p - 2, self.p)

    def neg(self, a):
        return -a % self.p

    def is_zero(self, a):
        return a % self.p == 0

    def parse(self, text):
        if "/" in text:
            num, den = text.split("/")
            return self.div(int(num) % self.p, int(den) % self.p)
        return int(text) % self.p

    def format(self, c):
        return str(c % self.p)

    def random(self, rng, lo=None, hi=None):
        return rng.randrange(self.p)

    def random_nonzero(self, rng, lo=None, hi=None):
        return rng.randrange(1, self.p)

    def nth_root(self, c, e):
        """Some e-th root of c in GF(p), or None."""
        c %= self.p
        if c == 0:
            return 0
        g = math.gcd(e, self.p - 1)
        if g == 1:
            return pow(c, pow(e, -1, self.p - 1), self.p)
        if self._dlog is None:
            self._build_dlog()
        gen, table = self._dlog
        k = table[c]
        if k % g:
            return None
        x = (k // g) * pow(e // g, -1, (self.p - 1) // g) % ((self.p - 1) // g)
        return pow(gen, x, self.p)

    def _build_dlog(self):
        # full discrete-log table; p stays small (< 2**17) in practice
        p = self.p
        for gen in range(2, p):
            if all(pow(gen, (p - 1) // q, p) != 1 for q in _prime_factors(p - 1)):
                break
        table = {}
        acc = 1
        for k in range(p - 1):
            table[acc] = k
            acc = acc * gen % p
        self._dlog = (gen, table)

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


def _is_prime(n):
    if n < 4:
        return n > 1
    if n % 2 == 0:
        return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_factors(n):
    out = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


QQ = RationalField()


def GF(p):
    return PrimeField(p)


# ---------------------------------------------------------------------------
# rings and packed monomials

_EXP_BITS = 16
_MAXE = (1 << _EXP_BITS) - 1
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


class Ring:
    """Polynomial ring over an exact field with two variable banks.

    Variables are declared X-bank first, then T-bank; the monomial order is
    graded reverse lexicographic in that declared order.
    """

    def __init__(self, field, x_vars, t_vars=()):
        names = tuple(x_vars) + tuple(t_vars)
        if len(set(names)) != len(names):
            raise ArithError("duplicate variable names: %r" % (names,))
        for nm in names:
            if not _NAME_RE.match(nm):
                raise ArithError("bad variable name %r" % nm)
        self.field = field
        self.names = names
        self.nx = len(tuple(x_vars))
        nv = len(names)
        self.nv = nv
        self._deg_off = _EXP_BITS * nv
        # key of the unit monomial: every field holds MAXE - 0
        one = 0
        for i in range(nv):
            one |= _MAXE << (_EXP_BITS * i)
        self.one_mono = one
        self._guards = sum(1 << (_EXP_BITS * i + 15) for i in range(nv))
        self._negoff = self._guards + (1 << (self._deg_off + 23))
        self._expmask = (1 << self._deg_off) - 1
        self._index = {nm: i for i, nm in enumerate(names)}
        self.zero = Poly(self, {})
        self.one = Poly(self, {one: 1})

    # -- monomial helpers ---------------------------------------------------

    def pack(self, exps):
        """Pack an exponent tuple (one entry per declared variable)."""
        key = 0
        deg = 0
        for i, e in enumerate(exps):
            if not 0 <= e < (1 << 15):
                raise ArithError("exponent %d out of range" % e)
            deg += e
            key |= (_MAXE - e) << (_EXP_BITS * i)
        if deg >= 1 << 23:
            raise ArithError("total degree %d out of range" % deg)
        return key | (deg << self._deg_off)

    def unpack(self, mono):
        return tuple(
            _MAXE - ((mono >> (_EXP_BITS * i)) & _MAXE) for i in range(self.nv)
        )

    def mono_total_deg(self, mono):
        return mono >> self._deg_off

    def mono_bank_deg(self, mono, start, stop):
        deg = 0
        for i in range(start, stop):
            deg += _MAXE - ((mono >> (_EXP_BITS * i)) & _MAXE)
        return deg

    def mono_mul(self, a, b):
        return a + b - self.one_mono

    def mono_div(self, a, b):
        """Quotient monomial a/b, or None when b does not divide a."""
        t = b - a + self._negoff
        if (t & self._guards) != self._guards:
            return None
        return a - b + self.one_mono

    def mono_gcd(self, a, b):
        ea = self.unpack(a)
        eb = self.unpack(b)
        return self.pack(tuple(min(x, y) for x, y in zip(ea, eb)))

    def var_index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise ArithError("unknown variable %r" % name) from None

    def var_mono(self, i):
        return self.pack(tuple(1 if j == i else 0 for j in range(self.nv)))

    # -- construction helpers ------------------------------------------------

    def var(self, name):
        return Poly(self, {self.var_mono(self.var_index(name)): 1})

    def const(self, c):
        c = self.field.canon(c)
        if self.field.is_zero(c):
            return self.zero
        return Poly(self, {self.one_mono: c})

    def poly(self, text):
        return parse_poly(self, text)

    def monomials_of_degree(self, deg, start, stop):
        """All monomials of total degree deg in variables [start, stop),
        grevlex-descending."""
        out = []

        def rec(i, rem, exps):
            if i == stop - 1:
                exps.append(rem)
                out.append(self.pack(tuple([0] * start + exps + [0] * (self.nv - stop))))
                exps.pop()
                return
            for e in range(rem, -1, -1):
                exps.append(e)
                rec(i + 1, rem - e, exps)
                exps.pop()

        if stop <= start:
            if deg == 0:
                return [self.one_mono]
            return []
        rec(start, deg, [])
        out.sort(reverse=True)
        return out

    def x_monomials(self, deg):
        return self.monomials_of_degree(deg, 0, self.nx)

    def __repr__(self):
        return "Ring(%s; %s)" % (self.field, ", ".join(self.names))

    def __eq__(self, other):
        return (
            isinstance(other, Ring)
            and other.field == self.field
            and other.names == self.names
            and other.nx == self.nx
        )

    def __hash__(self):
        return hash((self.field, self.names, self.nx))


def _check_same_ring(a, b):
    if a.ring is not b.ring and a.ring != b.ring:
        raise ArithError("mixed rings: %r vs %r" % (a.ring, b.ring))


class Poly:
    """Immutable sparse polynomial: dict mapping packed monomial -> coefficient."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms

    # -- predicates ----------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and self.ring.one_mono in self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring.names, frozenset(self.terms.items())))

    # -- ring operations -----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        _check_same_ring(self, other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            if m in out:
                out[m] = out[m] + c
            else:
                out[m] = c
        return Poly(self.ring, self.ring.field.reduce_terms(out))

    __radd__ = __add__

    def __neg__(self):
        neg = self.ring.field.neg
        return Poly(self.ring, {m: neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.field.canon(other)
            if self.ring.field.is_zero(other):
                return self.ring.zero
            terms = {m: c * other for m, c in self.terms.items()}
            return Poly(self.ring, self.ring.field.reduce_terms(terms))
        _check_same_ring(self, other)
        A, B = self.terms, other.terms
        if not A or not B:
            return self.ring.zero
        if len(A) > len(B):
            A, B = B, A
        one = self.ring.one_mono
        out = {}
        get = out.get
        for ma, ca in A.items():
            off = ma - one
            for mb, cb in B.items():
                k = off + mb
                prev = get(k)
                out[k] = ca * cb if prev is None else prev + ca * cb
        return Poly(self.ring, self.ring.field.reduce_terms(out))

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ArithError("negative power")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n > 1
            n >>= 1
            if base_needed and n:
                base = base * base
        return result

    # -- structure -----------------------------------------------------------

    def total_degree(self):
        if not self.terms:
            return -1
        return self.ring.mono_total_deg(max(self.terms))

    def bank_degree(self, start, stop):
        if not self.terms:
            return -1
        return max(self.ring.mono_bank_deg(m, start, stop) for m in self.terms)

    def x_degree(self):
        return self.bank_degree(0, self.ring.nx)

    def t_degree(self):
        return self.bank_degree(self.ring.nx, self.ring.nv)

    def homogeneous_degree(self, start=None, stop=None):
        """Common bank-degree of all terms, or None if inhomogeneous.

        Raises on the zero polynomial.  Default bank is all variables.
        """
        if not self.terms:
            raise ArithError("zero polynomial has no homogeneous degree")
        if start is None:
            start, stop = 0, self.ring.nv
        degs = {self.ring.mono_bank_deg(m, start, stop) for m in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return None

    def leading(self):
        """(monomial, coefficient) of the grevlex-leading term."""
        m = max(self.terms)
        return m, self.terms[m]

    def variables(self):
        """Indices of variables that actually occur."""
        seen = set()
        unpack = self.ring.unpack
        for m in self.terms:
            for i, e in enumerate(unpack(m)):
                if e:
                    seen.add(i)
        return sorted(seen)

    def degree_in_var(self, i):
        if not self.terms:
            return -1
        off = _EXP_BITS * i
        return max(_MAXE - ((m >> off) & _MAXE) for m in self.terms)

    def coeff_of_var_power(self, i, e):
        """Coefficient of x_i**e, a polynomial in the remaining variables."""
        off = _EXP_BITS * i
        drop = self.ring.pack(tuple(e if j == i else 0 for j in range(self.ring.nv)))
        out = {}
        for m, c in self.terms.items():
            if _MAXE - ((m >> off) & _MAXE) == e:
                out[self.ring.mono_div(m, drop)] = c
        return Poly(self.ring, out)

    def derivative(self, i):
        """Partial derivative with respect to variable index i."""
        ring = self.ring
        off = _EXP_BITS * i
        vm = ring.var_mono(i)
        out = {}
        for m, c in self.terms.items():
            e = _MAXE - ((m >> off) & _MAXE)
            if e:
                out[m - vm + ring.one_mono] = c * e
        return Poly(ring, ring.field.reduce_terms(out))

    def evaluate(self, assignment):
        """Substitute variables (by name) with polynomials or scalars.

        Unassigned variables remain symbolic.  The result is fully expanded.
        """
        ring = self.ring
        idx_vals = {}
        for name, val in assignment.items():
            i = ring.var_index(name)
            if isinstance(val, Poly):
                _check_same_ring(self, val)
                idx_vals[i] = val
            else:
                idx_vals[i] = ring.const(val)
        pow_cache = {}
        acc = {}
        for m, c in self.terms.items():
            exps = ring.unpack(m)
            rest = [0] * ring.nv
            factor = None
            for i, e in enumerate(exps):
                if i in idx_vals:
                    if e:
                        key = (i, e)
                        pc = pow_cache.get(key)
                        if pc is None:
                            pc = idx_vals[i] ** e
                            pow_cache[key] = pc
                        factor = pc if factor is None else factor * pc
                else:
                    rest[i] = e
            base = ring.pack(tuple(rest))
            if factor is None:
                acc[base] = acc.get(base, 0) + c
            else:
                off = base - ring.one_mono
                for fm, fc in factor.terms.items():
                    k = off + fm
                    acc[k] = acc.get(k, 0) + c * fc
        return Poly(ring, ring.field.reduce_terms(acc))

    def map_coeffs(self, fn):
        out = {m: fn(c) for m, c in self.terms.items()}
        return Poly(self.ring, self.ring.field.reduce_terms(out))

    # -- display -------------------------------------------------------------

    def __repr__(self):
        return format_poly(self)

    __str__ = __repr__


# ---------------------------------------------------------------------------
# text grammar

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<coeff>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*^]))"
)


def parse_poly(ring, text):
    """Parse the polynomial grammar: terms joined by +/-, factors by *."""
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ParseError("cannot tokenize %r at position %d" % (text, pos))
            break
        pos = m.end()
        if m.group("coeff"):
            tokens.append(("coeff", m.group("coeff")))
        elif m.group("name"):
            tokens.append(("name", m.group("name")))
        else:
            tokens.append(("op", m.group("op")))
    if not tokens:
        raise ParseError("empty polynomial text")

    field = ring.field
    result = {}
    i = 0
    first = True
    while i < len(tokens):
        sign = 1
        if tokens[i][0] == "op" and tokens[i][1] in "+-":
            if tokens[i][1] == "-":
                sign = -1
            i += 1
        elif not first:
            raise ParseError("missing +/- between terms in %r" % text)
        first = False
        coeff = None
        exps = [0] * ring.nv
        expect_factor = True
        saw_factor = False
        while i < len(tokens):
            kind, val = tokens[i]
            if kind == "op" and val in "+-":
                break
            if kind == "op" and val == "*":
                if expect_factor:
                    raise ParseError("misplaced '*' in %r" % text)
                expect_factor = True
                i += 1
                continue
            if not expect_factor:
                raise ParseError("missing '*' before %r in %r" % (val, text))
            if kind == "coeff":
                c = field.parse(val)
                coeff = c if coeff is None else coeff * c
                i += 1
            else:
                vi = ring.var_index(val)
                i += 1
                e = 1
                if (
                    i < len(tokens)
                    and tokens[i] == ("op", "^")
                ):
                    if i + 1 >= len(tokens) or tokens[i + 1][0] != "coeff" or "/" in tokens[i + 1][1]:
                        raise ParseError("bad exponent in %r" % text)
                    e = int(tokens[i + 1][1])
                    i += 2
                exps[vi] += e
            expect_factor = False
            saw_factor = True
        if not saw_factor:
            raise ParseError("empty term in %r" % text)
        c = coeff if coeff is not None else 1
        if sign < 0:
            c = -c
        key = ring.pack(tuple(exps))
        result[key] = result.get(key, 0) + c
    return Poly(ring, field.reduce_terms(result))


def format_poly(p):
    """Serialize in grevlex-descending order; round-trips through parse_poly."""
    if not p.terms:
        return "0"
    ring = p.ring
    field = ring.field
    pieces = []
    for m in sorted(p.terms, reverse=True):
        c = p.terms[m]
        neg = isinstance(c, (int, Fraction)) and c < 0
        mag = -c if neg else c
        exps = ring.unpack(m)
        factors = []
        for i, e in enumerate(exps):
            if e == 1:
                factors.append(ring.names[i])
            elif e > 1:
                factors.append("%s^%d" % (ring.names[i], e))
        cs = field.format(mag)
        if not factors:
            body = cs
        elif cs == "1":
            body = "*".join(factors)
        else:
            body = cs + "*" + "*".join(factors)
        pieces.append(("-" if neg else "+", body))
    sign, body = pieces[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in pieces[1:]:
        out += " %s %s" % (sign, body)
    return out


# ---------------------------------------------------------------------------
# exact division, gcd, squarefree machinery


def exact_divide(a, b, verify=True):
    """Quotient q with a == q*b; raises NotDivisibleError otherwise."""
    _check_same_ring(a, b)
    ring = a.ring
    field = ring.field
    if not b.terms:
        raise NotDivisibleError("division by zero polynomial")
    if not a.terms:
        return ring.zero
    bt = b.terms
    lt_b = max(bt)
    cb = bt[lt_b]
    if len(bt) == 1:
        # monomial divisor: divide every term directly
        qterms = {}
        for m, c in a.terms.items():
            q = ring.mono_div(m, lt_b)
            if q is None:
                raise NotDivisibleError("%r does not divide %r" % (b, a))
            qterms[q] = field.div(c, cb)
        return Poly(ring, field.reduce_terms(qterms))
    rem = dict(a.terms)
    qterms = {}
    one = ring.one_mono
    mono_div = ring.mono_div
    div = field.div
    is_zero = field.is_zero
    while rem:
        lt_r = max(rem)
        qm = mono_div(lt_r, lt_b)
        if qm is None:
            raise NotDivisibleError("%r does not divide %r" % (b, a))
        qc = div(rem[lt_r], cb)
        qterms[qm] = qc
        off = qm - one
        for m, c in bt.items():
            k = off + m
            prev = rem.get(k, 0)
            nc = prev - qc * c
            if is_zero(nc):
                rem.pop(k, None)
            else:
                rem[k] = nc
    q = Poly(ring, field.reduce_terms(qterms))
    if verify and q * b != a:
        raise NotDivisibleError("division verification failed")
    return q


def monomial_content(p):
    """gcd of the monomials of p (a packed monomial)."""
    it = iter(p.terms)
    g = next(it)
    for m in it:
        g = p.ring.mono_gcd(g, m)
        if g == p.ring.one_mono:
            break
    return g


def rational_content(p):
    """Positive rational c with p/c integer-primitive (QQ only)."""
    num_gcd = 0
    den_lcm = 1
    for c in p.terms.values():
        if type(c) is int:
            num_gcd = math.gcd(num_gcd, c)
        else:
            num_gcd = math.gcd(num_gcd, c.numerator)
            den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
    return Fraction(num_gcd, den_lcm)


def normalize(p):
    """Canonical unit normalization.

    Over QQ: integer-primitive with positive grevlex-leading coefficient.
    Over GF(p): monic.  Zero maps to zero.
    """
    if not p.terms:
        return p
    field = p.ring.field
    if field.char == 0:
        c = rational_content(p)
        if p.terms[max(p.terms)] < 0:
            c = -c
        inv = 1 / c
        return Poly(p.ring, field.reduce_terms({m: v * inv for m, v in p.terms.items()}))
    lc = p.terms[max(p.terms)]
    inv = field.invert(lc)
    return Poly(p.ring, field.reduce_terms({m: v * inv for m, v in p.terms.items()}))


def unit_multiple_of(a, b):
    """True when a == unit * b for a nonzero field scalar."""
    if a.ring != b.ring:
        return False
    if not a.terms or not b.terms:
        return (not a.terms) == (not b.terms)
    return normalize(a) == normalize(b)


def _as_univariate(p, v):
    """Coefficient list [c_0 .. c_deg] of p seen in variable v; entries are
    polynomials not involving v."""
    ring = p.ring
    deg = p.degree_in_var(v)
    coeffs = [dict() for _ in range(deg + 1)]
    off = _EXP_BITS * v
    for m, c in p.terms.items():
        e = _MAXE - ((m >> off) & _MAXE)
        drop = ring.pack(tuple(e if j == v else 0 for j in range(ring.nv)))
        coeffs[e][ring.mono_div(m, drop)] = c
    return [Poly(ring, t) for t in coeffs]


def _from_univariate(coeffs, v):
    ring = coeffs[0].ring
    out = {}
    for e, ce in enumerate(coeffs):
        if not ce.terms:
            continue
        shift = ring.pack(tuple(e if j == v else 0 for j in range(ring.nv)))
        for m, c in ce.terms.items():
            out[ring.mono_mul(m, shift)] = c
    return Poly(ring, out)


def _uni_deg(coeffs):
    d = len(coeffs) - 1
    while d >= 0 and not coeffs[d].terms:
        d -= 1
    return d


def _uni_pseudo_rem(a, b, ring):
    """Pseudo-remainder of coefficient lists a by b (lc(b)^(da-db+1) * a mod b)."""
    da, db = _uni_deg(a), _uni_deg(b)
    lc_b = b[db]
    r = list(a[: da + 1])
    for k in range(da, db - 1, -1):
        lead = r[k]
        r = [ci * lc_b for ci in r[:k]]
        if lead.terms:
            for j in range(db):
                r[k - db + j] = r[k - db + j] - lead * b[j]
    while r and not r[-1].terms:
        r.pop()
    return r


def multivariate_gcd(a, b):
    """gcd via content/primitive-part recursion + subresultant remainders.

    Result is normalized (primitive, positive leading coefficient over QQ;
    monic over GF(p)).
    """
    _check_same_ring(a, b)
    ring = a.ring
    if not a.terms and not b.terms:
        raise ArithError("gcd(0, 0) undefined")
    if not a.terms:
        return normalize(b)
    if not b.terms:
        return normalize(a)
    mono = ring.mono_gcd(monomial_content(a), monomial_content(b))
    a = exact_divide(a, Poly(ring, {monomial_content(a): 1}), verify=False)
    b = exact_divide(b, Poly(ring, {monomial_content(b): 1}), verify=False)
    g = _gcd_primitive(a, b)
    return normalize(g * Poly(ring, {mono: 1}))


def gcd_many(polys):
    """Iterated pairwise gcd of a non-empty sequence."""
    polys = [p for p in polys if p.terms]
    if not polys:
        raise ArithError("gcd of all-zero collection")
    g = polys[0]
    for p in polys[1:]:
        g = multivariate_gcd(g, p)
        if g.is_constant():
            break
    return normalize(g)


def _gcd_primitive(a, b):
    ring = a.ring
    if a.is_constant() or b.is_constant():
        return ring.one
    avars = set(a.variables())
    bvars = set(b.variables())
    common = avars | bvars
    v = max(common)
    ua = _as_univariate(a, v)
    ub = _as_univariate(b, v)
    if len(ua) == 1 or len(ub) == 1:
        # one input does not involve v after all (can't happen with v chosen
        # from the union unless the poly is v-free): gcd with its content
        if len(ua) == 1:
            return _gcd_content([ua[0]] + ub)
        return _gcd_content([ub[0]] + ua)
    cont_a = _gcd_content(ua)
    cont_b = _gcd_content(ub)
    cont = multivariate_gcd(cont_a, cont_b) if not (cont_a.is_constant() and cont_b.is_constant()) else ring.one
    pa = [exact_divide(c, cont_a, verify=False) for c in ua]
    pb = [exact_divide(c, cont_b, verify=False) for c in ub]
    if _uni_deg(pa) < _uni_deg(pb):
        pa, pb = pb, pa
    g = ring.one
    h = ring.one
    r0, r1 = pa, pb
    while True:
        d0, d1 = _uni_deg(r0), _uni_deg(r1)
        delta = d0 - d1
        rem = _uni_pseudo_rem(r0, r1, ring)
        if _uni_deg(rem) < 0:
            pp = r1
            break
        if _uni_deg(rem) == 0:
            return cont
        divisor = g * h**delta
        r0 = r1
        r1 = [exact_divide(c, divisor, verify=False) for c in rem]
        g = r0[_uni_deg(r0)]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = exact_divide(g**delta, h ** (delta - 1), verify=False)
    pp_cont = _gcd_content(pp)
    pp = [exact_divide(c, pp_cont, verify=False) for c in pp]
    return cont * _from_univariate(pp, v)


def _gcd_content(coeffs):
    nz = [c for c in coeffs if c.terms]
    g = nz[0]
    for c in nz[1:]:
        g = multivariate_gcd(g, c)
        if g.is_constant():
            return g.ring.one
    return normalize(g)


def _check_characteristic(p):
    ch = p.ring.field.char
    if ch and ch <= p.total_degree():
        raise SmallCharacteristicError(
            "characteristic %d too small for degree %d" % (ch, p.total_degree())
        )


def squarefree_part(p):
    """Product of the distinct irreducible factors of p, normalized."""
    if not p.terms:
        raise ArithError("squarefree part of zero")
    _check_characteristic(p)
    if p.is_constant():
        return p.ring.one
    g = p
    for v in p.variables():
        dv = p.derivative(v)
        if dv.terms:
            g = multivariate_gcd(g, dv)
        if g.is_constant():
            break
    return normalize(exact_divide(p, g, verify=False))


def _divisors_desc(n):
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return sorted(small + large, reverse=True)


def _nth_root_poly(q, e):
    """H with H**e == q, by greedy leading-term extraction; None on failure."""
    ring = q.ring
    field = ring.field
    lt_m, lt_c = q.leading()
    exps = ring.unpack(lt_m)
    if any(x % e for x in exps):
        return None
    root_c = field.nth_root(lt_c, e)
    if root_c is None:
        return None
    h1_m = ring.pack(tuple(x // e for x in exps))
    H = Poly(ring, {h1_m: root_c})
    # e * lt(H)^(e-1): the residual q - H^e always leads with this times the
    # next missing term of H
    fm, fc = h1_m, root_c
    for _ in range(e - 2):
        fm = ring.mono_mul(fm, h1_m)
        fc = fc * root_c
    lead_c = field.canon(e * fc)
    prev_qm = None
    for _ in range(20000):
        R = q - H**e
        if not R.terms:
            return H
        lt_r = max(R.terms)
        qm = ring.mono_div(lt_r, fm)
        if qm is None or qm >= h1_m:
            return None
        if prev_qm is not None and qm >= prev_qm:
            return None
        prev_qm = qm
        qc = field.div(R.terms[lt_r], lead_c)
        H = H + Poly(ring, {qm: qc})
    return None


def perfect_power_decompose(p):
    """Largest e with p == unit * H**e; returns (normalized H, e)."""
    if not p.terms:
        raise ArithError("perfect power of zero")
    if p.is_constant():
        raise ArithError("perfect power of a constant")
    _check_characteristic(p)
    q = normalize(p)
    degs = [q.degree_in_var(v) for v in q.variables()]
    d = q.total_degree()
    for dv in degs:
        d = math.gcd(d, dv)
    for e in _divisors_desc(d):
        if e == 1:
            break
        H = _nth_root_poly(q, e)
        if H is not None and H**e == q:
            return normalize(H), e
    return q, 1


# ---------------------------------------------------------------------------
# gcd of large homogeneous polynomials by line evaluation
#
# Subresultant remainders swell badly on dense inputs of degree ~15 in four
# variables.  For homogeneous a, b we instead read off deg(gcd) from
# univariate gcds along random affine lines, reconstruct the dehomogenized
# gcd coefficients from a small linear system, and verify by exact division.
# The division check makes the result a true common divisor; maximality holds
# unless every sampled line was degenerate, and the caller re-verifies against
# independent data anyway.


def _uni_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _uni_gcd_monic(a, b, field):
    """Monic univariate gcd of coefficient lists over the field."""

    def trim(v):
        while v and field.is_zero(v[-1]):
            v.pop()
        return v

    def to_field(v):
        if field.char:
            return [x % field.char for x in v]
        return [Fraction(x) for x in v]

    a = trim(to_field(list(a)))
    b = trim(to_field(list(b)))
    while b:
        # a mod b
        lb = b[-1]
        inv = field.invert(lb) if field.char else 1 / lb
        r = list(a)
        for k in range(len(r) - 1, len(b) - 2, -1):
            c = r[k]
            if field.is_zero(c):
                continue
            f = c * inv
            if field.char:
                f %= field.char
            for j in range(len(b)):
                r[k - len(b) + 1 + j] -= f * b[j]
            if field.char:
                r = [x % field.char for x in r]
            r[k] = 0
        a, b = b, trim(r)
    if not a:
        return []
    inv = field.invert(a[-1]) if field.char else 1 / a[-1]
    out = [x * inv for x in a]
    if field.char:
        out = [x % field.char for x in out]
    return out


_RECON_PRIME = (1 << 62) - 57  # prime; used only to accelerate kernel solves


def _rat_recon(a, q):
    """Balanced rational reconstruction of a mod q; None when out of range."""
    a %= q
    bound = math.isqrt(q // 2)
    r0, r1 = q, a
    s0, s1 = 0, 1
    while r1 > bound:
        qt = r0 // r1
        r0, r1 = r1, r0 - qt * r1
        s0, s1 = s1, s0 - qt * s1
    if s1 == 0 or abs(s1) > bound or math.gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1) if s1 > 0 else Fraction(-r1, -s1)


def _kernel_vector_modular(rows, width):
    """One QQ-kernel vector of an integer matrix via a big prime + lifting.

    Returns a primitive integer vector, or None when the modular image is
    degenerate (caller falls back to the exact solve).
    """
    q = _RECON_PRIME
    a = []
    for row in rows:
        if all(type(x) is int for x in row):
            a.append([x % q for x in row])
            continue
        den = 1
        for x in row:
            if type(x) is not int:
                den = den * x.denominator // math.gcd(den, x.denominator)
        a.append([int(x * den) % q for x in row])
    ncols = width
    pivots = []
    r = 0
    for c in range(ncols):
        sel = None
        for i in range(r, len(a)):
            if a[i][c]:
                sel = i
                break
        if sel is None:
            continue
        a[r], a[sel] = a[sel], a[r]
        inv = pow(a[r][c], q - 2, q)
        a[r] = [x * inv % q for x in a[r]]
        prow = a[r]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % q for x, y in zip(a[i], prow)]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    free = [c for c in range(ncols) if c not in set(pivots)]
    if len(free) != 1:
        return None
    f = free[0]
    w = [0] * ncols
    w[f] = 1
    for rr, c in enumerate(pivots):
        w[c] = -a[rr][f] % q
    fracs = []
    den = 1
    for x in w:
        fr = _rat_recon(x, q)
        if fr is None:
            return None
        fracs.append(fr)
        den = den * fr.denominator // math.gcd(den, fr.denominator)
    ivec = [int(fr * den) for fr in fracs]
    g = 0
    for x in ivec:
        g = math.gcd(g, x)
    if g > 1:
        ivec = [x // g for x in ivec]
    return ivec


def _line_powers_cache(field, alpha, beta, maxdeg):
    """Dense lists for (alpha*t + beta)^e, e = 0..maxdeg."""
    out = [[1]]
    base = [beta, alpha]
    for _ in range(maxdeg):
        nxt = _uni_mul(out[-1], base)
        if field.char:
            nxt = [x % field.char for x in nxt]
        out.append(nxt)
    return out


def _eval_on_line(p, affine_vars, hvar, caches, field):
    """Coefficient list of p(L(t)) with hvar set to 1 and var i -> line i."""
    ring = p.ring
    deg = p.total_degree()
    out = [0] * (deg + 1)
    for m, c in p.terms.items():
        exps = ring.unpack(m)
        term = [c]
        for pos, v in enumerate(affine_vars):
            e = exps[v]
            if e:
                term = _uni_mul(term, caches[pos][e])
        for i, x in enumerate(term):
            out[i] += x
    if field.char:
        out = [x % field.char for x in out]
    return out


def gcd_homogeneous_by_lines(a, b, seed=20020101):
    """gcd of two homogeneous polynomials, reconstructed from line images.

    Falls back to the subresultant route when reconstruction fails.  Result
    normalized like multivariate_gcd.
    """
    import random as _random

    _check_same_ring(a, b)
    ring = a.ring
    field = ring.field
    if not a.terms or not b.terms:
        return multivariate_gcd(a, b)
    if a.homogeneous_degree() is None or b.homogeneous_degree() is None:
        return multivariate_gcd(a, b)
    mono = ring.mono_gcd(monomial_content(a), monomial_content(b))
    a0 = exact_divide(a, Poly(ring, {monomial_content(a): 1}), verify=False)
    b0 = exact_divide(b, Poly(ring, {monomial_content(b): 1}), verify=False)
    allvars = sorted(set(a0.variables()) | set(b0.variables()))
    if len(allvars) <= 2:
        g = _gcd_primitive(a0, b0)
        return normalize(g * Poly(ring, {mono: 1}))
    hvar = allvars[-1]
    affine = [v for v in allvars if v != hvar]
    deg_a = a0.total_degree()
    deg_b = b0.total_degree()
    rng = _random.Random(seed)
    for attempt in range(4):
        lines = []
        images = []
        degs = []
        want = 6 + 2 * attempt
        guard = 0
        while len(lines) < want and guard < 80:
            guard += 1
            if field.char:
                al = [field.random_nonzero(rng) for _ in affine]
                be = [field.random(rng) for _ in affine]
            else:
                al = [rng.randint(-9, 9) or 1 for _ in affine]
                be = [rng.randint(-9, 9) for _ in affine]
            caches = [
                _line_powers_cache(field, al[i], be[i], max(deg_a, deg_b))
                for i in range(len(affine))
            ]
            ia = _eval_on_line(a0, affine, hvar, caches, field)
            ib = _eval_on_line(b0, affine, hvar, caches, field)
            if len(ia) < deg_a + 1 or not ia or not ia[-1]:
                continue
            if len(ib) < deg_b + 1 or not ib or not ib[-1]:
                continue
            g = _uni_gcd_monic(ia, ib, field)
            if not g:
                continue
            lines.append((al, be, caches))
            images.append(g)
            degs.append(len(g) - 1)
        if not degs:
            continue
        delta = min(degs)
        if delta == 0:
            return normalize(Poly(ring, {mono: 1}))
        keep = [i for i, d in enumerate(degs) if d == delta]
        # unknown dehomogenized coefficients: monomials of degree <= delta in
        # the affine variables
        unknown_monos = []
        for dd in range(delta + 1):
            unknown_monos.extend(ring.monomials_of_degree(dd, 0, ring.nv))
        unknown_monos = [
            m
            for m in unknown_monos
            if all(e == 0 or i in affine for i, e in enumerate(ring.unpack(m)))
            and ring.mono_total_deg(m) <= delta
        ]
        # need enough equations: each kept line supplies delta of them
        needed = len(unknown_monos) + 2
        while len(keep) * delta < needed and len(lines) < 60:
            if field.char:
                al = [field.random_nonzero(rng) for _ in affine]
                be = [field.random(rng) for _ in affine]
            else:
                al = [rng.randint(-9, 9) or 1 for _ in affine]
                be = [rng.randint(-9, 9) for _ in affine]
            caches = [
                _line_powers_cache(field, al[i], be[i], max(deg_a, deg_b))
                for i in range(len(affine))
            ]
            ia = _eval_on_line(a0, affine, hvar, caches, field)
            ib = _eval_on_line(b0, affine, hvar, caches, field)
            if len(ia) < deg_a + 1 or len(ib) < deg_b + 1 or not ia or not ib:
                continue
            if not ia[-1] or not ib[-1]:
                continue
            g = _uni_gcd_monic(ia, ib, field)
            if len(g) - 1 != delta:
                if g and len(g) - 1 < delta:
                    delta = len(g) - 1
                    keep = []
                    lines = []
                    images = []
                    break
                continue
            lines.append((al, be, caches))
            images.append(g)
            keep.append(len(lines) - 1)
        if len(keep) * delta < len(unknown_monos):
            continue
        rows = []
        for li in keep:
            al, be, caches = lines[li]
            u = images[li]
            # column c of "g composed with the line": [t^k] prod (a t + b)^mu
            col_polys = []
            for mu in unknown_monos:
                exps = ring.unpack(mu)
                term = [1]
                for pos, v in enumerate(affine):
                    if exps[v]:
                        term = _uni_mul(term, caches[pos][exps[v]])
                if field.char:
                    term = [x % field.char for x in term]
                term += [0] * (delta + 1 - len(term))
                col_polys.append(term)
            for k in range(delta):
                uk = u[k]
                row = []
                for cp in col_polys:
                    val = cp[k] - uk * cp[delta]
                    row.append(val % field.char if field.char else val)
                rows.append(row)
        vec = None
        if not field.char:
            vec = _kernel_vector_modular(rows, len(unknown_monos))
        if vec is None:
            from .linalg import ScalarMatrix, rank_and_kernel

            rank, kernel = rank_and_kernel(ScalarMatrix(field, rows, len(unknown_monos)))
            if len(kernel) != 1:
                continue
            vec = kernel[0]
        terms = {}
        for mu, c in zip(unknown_monos, vec):
            if c:
                exps = list(ring.unpack(mu))
                exps[hvar] = delta - sum(exps)
                terms[ring.pack(tuple(exps))] = c
        cand = Poly(ring, field.reduce_terms(terms))
        if not cand.terms:
            continue
        try:
            exact_divide(a0, cand, verify=False)
            exact_divide(b0, cand, verify=False)
        except NotDivisibleError:
            continue
        return normalize(cand * Poly(ring, {mono: 1}))
    return multivariate_gcd(a, b)


# ---------------------------------------------------------------------------
# parameterizations


class Parameterization:
    """n homogeneous polynomials of one degree d in the X-bank of a ring.

    The rational-map pipeline requires n == nx + 1; the base-point and syzygy
    diagnostics also accept other shapes (e.g. 3 generators in 3 variables).
    """

    def __init__(self, ring, polys):
        polys = tuple(polys)
        if len(polys) < 3:
            raise ArithError("need at least 3 polynomials, got %d" % len(polys))
        degs = set()
        for i, p in enumerate(polys):
            if p.ring != ring:
                raise ArithError("polynomial %d lives in a different ring" % (i + 1))
            if not p.terms:
                raise ArithError("polynomial %d is zero" % (i + 1))
            if p.t_degree() > 0:
                raise ArithError("polynomial %d involves T-variables" % (i + 1))
            d = p.homogeneous_degree(0, ring.nx)
            if d is None:
                raise ArithError("polynomial %d is not homogeneous" % (i + 1))
            degs.add(d)
        if len(degs) != 1:
            raise ArithError("polynomials have mixed degrees %s" % sorted(degs))
        d = degs.pop()
        if d < 1:
            raise ArithError("degree must be >= 1")
        self.ring = ring
        self.polys = polys
        self.n = len(polys)
        self.d = d

    @property
    def field(self):
        return self.ring.field

    def is_map_shape(self):
        """True when this is n polynomials in n-1 variables."""
        return self.ring.nx == self.n - 1

    def require_map_shape(self):
        if not self.is_map_shape():
            raise ArithError(
                "expected %d variables for %d polynomials, got %d"
                % (self.n - 1, self.n, self.ring.nx)
            )

    def t_names(self):
        return self.ring.names[self.ring.nx:]

    def __repr__(self):
        return "Parameterization(d=%d; %s)" % (
            self.d,
            "; ".join(str(p) for p in self.polys),
        )


def make_parameterization(field, x_vars, poly_texts, t_vars=None):
    """Build a Parameterization from polynomial strings."""
    n = len(poly_texts)
    if t_vars is None:
        t_vars = tuple("T%d" % (i + 1) for i in range(n))
    if len(t_vars) != n:
        raise ArithError("need %d T-variables, got %d" % (n, len(t_vars)))
    ring = Ring(field, x_vars, t_vars)
    return Parameterization(ring, [parse_poly(ring, s) for s in poly_texts])
