"""Sparse multivariate polynomials over the rationals.

Exact arithmetic plus the algebraic kernel used by projection: subresultant
resultants, discriminants, primitive-PRS gcd, squarefree parts, and pairwise
coprime squarefree bases. Polynomials are immutable values over a shared
variable order; the order position of a variable is its level (1-based, the
highest level present in a polynomial is its main variable).
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

from .errors import PmcadError, UsageError

Rat = Union[int, Fraction]

# graded-lex key on exponent tuples; used for printing, lead terms and division
def _glex(e: tuple) -> tuple:
    return (sum(e), e)


def _to_frac(x: Rat) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise UsageError("expected a rational, got %r" % (x,))


class VarOrder:
    """An ordered tuple of variable names, lowest level first."""

    __slots__ = ("names", "_pos")

    def __init__(self, names: Iterable[str]):
        ns = tuple(names)
        if not ns:
            raise UsageError("empty variable order")
        if len(set(ns)) != len(ns):
            raise UsageError("duplicate variable in order: %s" % ", ".join(ns))
        for n in ns:
            if not n or not (n[0].isalpha() or n[0] == "_"):
                raise UsageError("bad variable name: %r" % (n,))
        self.names = ns
        self._pos = {v: i for i, v in enumerate(ns)}

    def position(self, name: str) -> int:
        try:
            return self._pos[name]
        except KeyError:
            raise UsageError("unknown variable %r (order: %s)" % (name, ", ".join(self.names))) from None

    def level(self, name: str) -> int:
        return self.position(name) + 1

    def __contains__(self, name: object) -> bool:
        return name in self._pos

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __getitem__(self, i: int) -> str:
        return self.names[i]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, VarOrder) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return "VarOrder(%s)" % ", ".join(self.names)

    def extended(self, *extra: str) -> "VarOrder":
        return VarOrder(self.names + tuple(extra))


class Poly:
    """Immutable sparse polynomial: exponent tuple -> nonzero Fraction."""

    __slots__ = ("order", "terms", "_hash")

    def __init__(self, order: VarOrder, terms: Mapping[tuple, Rat]):
        self.order = order
        n = len(order)
        clean = {}
        for e, c in terms.items():
            c = _to_frac(c)
            if len(e) != n:
                raise UsageError("exponent arity mismatch")
            if c:
                clean[e] = c
        self.terms = clean
        self._hash: Optional[int] = None

    # ---- constructors ----
    @staticmethod
    def zero(order: VarOrder) -> "Poly":
        return Poly(order, {})

    @staticmethod
    def const(order: VarOrder, c: Rat) -> "Poly":
        return Poly(order, {(0,) * len(order): _to_frac(c)})

    @staticmethod
    def var(order: VarOrder, name: str) -> "Poly":
        i = order.position(name)
        e = [0] * len(order)
        e[i] = 1
        return Poly(order, {tuple(e): Fraction(1)})

    # ---- basic queries ----
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(x == 0 for x in e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        if not self.is_constant():
            raise UsageError("not a constant: %s" % self)
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    def degree(self, name: str) -> int:
        i = self.order.position(name)
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def variables(self) -> tuple:
        n = len(self.order)
        seen = [False] * n
        for e in self.terms:
            for i, x in enumerate(e):
                if x:
                    seen[i] = True
        return tuple(self.order.names[i] for i in range(n) if seen[i])

    def main_var(self) -> Optional[str]:
        best = -1
        for e in self.terms:
            for i in range(len(e) - 1, best, -1):
                if e[i]:
                    if i > best:
                        best = i
                    break
        return None if best < 0 else self.order.names[best]

    def level(self) -> int:
        v = self.main_var()
        return 0 if v is None else self.order.level(v)

    # ---- arithmetic ----
    def _coerce(self, other: object) -> Optional["Poly"]:
        if isinstance(other, Poly):
            if other.order != self.order:
                raise UsageError("mixed variable orders")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.order, other)
        return None

    def __add__(self, other: object) -> "Poly":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        t = dict(self.terms)
        for e, c in o.terms.items():
            t[e] = t.get(e, Fraction(0)) + c
        return Poly(self.order, t)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.order, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: object) -> "Poly":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> "Poly":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: object) -> "Poly":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, Fraction(0)) + c1 * c2
        return Poly(self.order, t)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if not isinstance(k, int) or k < 0:
            raise UsageError("polynomial powers take a nonnegative integer")
        out = Poly.const(self.order, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poly):
            if isinstance(other, (int, Fraction)):
                return self.is_constant() and self.constant_value() == other
            return NotImplemented
        return self.order == other.order and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.order, frozenset(self.terms.items())))
        return self._hash

    # ---- structure ----
    def coefficients(self, name: str) -> list:
        """Coefficients of name^d down to name^0, as polynomials without name."""
        i = self.order.position(name)
        d = max((e[i] for e in self.terms), default=0)
        buckets: list = [dict() for _ in range(d + 1)]
        for e, c in self.terms.items():
            k = e[i]
            e2 = e[:i] + (0,) + e[i + 1:]
            buckets[k][e2] = buckets[k].get(e2, Fraction(0)) + c
        return [Poly(self.order, buckets[k]) for k in range(d, -1, -1)]

    def coeff_of(self, name: str, k: int) -> "Poly":
        i = self.order.position(name)
        t = {}
        for e, c in self.terms.items():
            if e[i] == k:
                t[e[:i] + (0,) + e[i + 1:]] = c
        return Poly(self.order, t)

    def lc(self, name: str) -> "Poly":
        return self.coeff_of(name, max((e[self.order.position(name)] for e in self.terms), default=0))

    def derivative(self, name: str) -> "Poly":
        i = self.order.position(name)
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = e[:i] + (e[i] - 1,) + e[i + 1:]
                t[e2] = t.get(e2, Fraction(0)) + c * e[i]
        return Poly(self.order, t)

    def subs(self, assign: Mapping[str, Rat]) -> "Poly":
        """Substitute rationals for some variables; exact, partial is fine."""
        idx = {self.order.position(v): _to_frac(x) for v, x in assign.items()}
        t: dict = {}
        for e, c in self.terms.items():
            val = c
            e2 = list(e)
            for i, x in idx.items():
                if e[i]:
                    val *= x ** e[i]
                e2[i] = 0
            if val:
                k = tuple(e2)
                t[k] = t.get(k, Fraction(0)) + val
        return Poly(self.order, t)

    def eval_frac(self, assign: Mapping[str, Rat]) -> Fraction:
        r = self.subs(assign)
        if not r.is_constant():
            raise UsageError("evaluation left variables %s unassigned" % (r.variables(),))
        return r.constant_value()

    def univariate_coeffs(self, name: Optional[str] = None) -> list:
        """Fraction coefficients low -> high; requires at most one variable."""
        vs = self.variables()
        if len(vs) > 1:
            raise UsageError("not univariate: %s" % self)
        if name is None:
            name = vs[0] if vs else self.order.names[0]
        elif vs and vs[0] != name:
            raise UsageError("univariate in %s, not %s" % (vs[0], name))
        i = self.order.position(name)
        d = max((e[i] for e in self.terms), default=0)
        out = [Fraction(0)] * (d + 1)
        for e, c in self.terms.items():
            out[e[i]] += c
        while len(out) > 1 and not out[-1]:
            out.pop()
        return out

    def leading_coeff_glex(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        e = max(self.terms, key=_glex)
        return self.terms[e]

    def primitive_rat(self) -> tuple:
        """Split into (content, primitive): integer-coprime coefficients, positive
        graded-lex leading coefficient. Zero splits as (0, 0)."""
        if not self.terms:
            return Fraction(0), self
        num = 0
        den = 1
        for c in self.terms.values():
            num = math.gcd(num, abs(c.numerator))
            den = den * c.denominator // math.gcd(den, c.denominator)
        cont = Fraction(num, den)
        if self.leading_coeff_glex() < 0:
            cont = -cont
        pp = Poly(self.order, {e: c / cont for e, c in self.terms.items()})
        return cont, pp

    def sort_key(self) -> tuple:
        """Deterministic total order on polynomials of one variable order."""
        items = sorted(self.terms.items(), key=lambda ec: _glex(ec[0]), reverse=True)
        return (
            self.level(),
            self.total_degree(),
            len(items),
            tuple((e, c.numerator, c.denominator) for e, c in items),
        )

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda ec: _glex(ec[0]), reverse=True)
        parts = []
        for j, (e, c) in enumerate(items):
            mono = []
            for i, k in enumerate(e):
                if k == 1:
                    mono.append(self.order.names[i])
                elif k > 1:
                    mono.append("%s^%d" % (self.order.names[i], k))
            mag = abs(c)
            if mono and mag == 1:
                body = "*".join(mono)
            elif mono:
                body = "*".join([str(mag)] + mono)
            else:
                body = str(mag)
            if j == 0:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    def __repr__(self) -> str:
        return "Poly(%s)" % self


def normalize(p: Poly) -> Poly:
    """Integer-primitive, positive graded-lex lead; zero stays zero."""
    return p.primitive_rat()[1]


# ---- division ----

def try_div(p: Poly, q: Poly) -> Optional[Poly]:
    """p / q when exact, else None. Single-divisor graded-lex division; for a
    single divisor the remainder vanishes iff q divides p."""
    if q.is_zero():
        raise UsageError("division by the zero polynomial")
    if p.is_zero():
        return p
    if p.order != q.order:
        raise UsageError("mixed variable orders")
    qe = max(q.terms, key=_glex)
    qc = q.terms[qe]
    rem = dict(p.terms)
    out: dict = {}
    while rem:
        re = max(rem, key=_glex)
        rc = rem[re]
        de = tuple(a - b for a, b in zip(re, qe))
        if any(x < 0 for x in de):
            return None
        f = rc / qc
        out[de] = out.get(de, Fraction(0)) + f
        for e2, c2 in q.terms.items():
            e = tuple(a + b for a, b in zip(de, e2))
            nc = rem.get(e, Fraction(0)) - f * c2
            if nc:
                rem[e] = nc
            else:
                rem.pop(e, None)
    return Poly(p.order, out)


def exact_div(p: Poly, q: Poly) -> Poly:
    r = try_div(p, q)
    if r is None:
        raise UsageError("inexact polynomial division: (%s) / (%s)" % (p, q))
    return r


# ---- univariate-in-v machinery (coefficient lists of Poly, low -> high) ----

def _uv(p: Poly, v: str) -> list:
    cs = p.coefficients(v)
    cs.reverse()
    while len(cs) > 1 and cs[-1].is_zero():
        cs.pop()
    return cs


def _uv_strip(A: list) -> list:
    while A and A[-1].is_zero():
        A.pop()
    return A


def _prem(A: list, B: list) -> list:
    """Pseudo-remainder lc(B)^(degA-degB+1) * A mod B; coefficient lists."""
    dB = len(B) - 1
    lcB = B[-1]
    R = list(A)
    d = len(A) - 1 - dB
    steps = 0
    while R and len(R) - 1 >= dB:
        dR = len(R) - 1
        lcR = R[-1]
        R = [lcB * c for c in R[:-1]]
        shift = dR - dB
        for i in range(dB):
            R[i + shift] = R[i + shift] - lcR * B[i]
        R = _uv_strip(R)
        steps += 1
    if steps < d + 1 and R:
        f = lcB ** (d + 1 - steps)
        R = [c * f for c in R]
    return R


def resultant(p: Poly, q: Poly, v: str) -> Poly:
    """Subresultant-PRS resultant eliminating v. Both arguments must have
    positive degree in v."""
    if p.order != q.order:
        raise UsageError("mixed variable orders")
    dp, dq = p.degree(v), q.degree(v)
    if dp < 1 or dq < 1:
        raise UsageError("resultant needs positive degree in %s on both sides" % v)
    order = p.order
    A, B = _uv(p, v), _uv(q, v)
    s = 1
    if dp < dq:
        A, B = B, A
        if dp % 2 == 1 and dq % 2 == 1:
            s = -s
    one = Poly.const(order, 1)
    g = one
    h = one
    while True:
        dA, dB = len(A) - 1, len(B) - 1
        delta = dA - dB
        if dA % 2 == 1 and dB % 2 == 1:
            s = -s
        R = _prem(A, B)
        if not R:
            return Poly.zero(order)
        divisor = g * (h ** delta)
        A = B
        B = [exact_div(c, divisor) for c in R]
        g = A[-1]
        if delta == 1:
            h = g
        elif delta > 1:
            h = exact_div(g ** delta, h ** (delta - 1))
        if len(B) - 1 == 0:
            dA2 = len(A) - 1
            num = B[0] ** dA2
            res = num if dA2 <= 1 else exact_div(num, h ** (dA2 - 1))
            return res if s > 0 else -res


def discriminant(p: Poly, v: str) -> Poly:
    d = p.degree(v)
    if d < 2:
        raise UsageError("discriminant needs degree >= 2 in %s" % v)
    r = resultant(p, p.derivative(v), v)
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    out = exact_div(r, p.lc(v))
    return out if sign > 0 else -out


# ---- gcd ----

def _monomial_split(p: Poly) -> tuple:
    """Largest monomial dividing p, as an exponent tuple, plus the cofactor.
    (None, p) when that monomial is 1."""
    it = iter(p.terms)
    mins = list(next(it))
    for expo in it:
        mins = [min(a, b) for a, b in zip(mins, expo)]
        if not any(mins):
            return None, p
    if not any(mins):
        return None, p
    terms = {tuple(e - m for e, m in zip(expo, mins)): c
             for expo, c in p.terms.items()}
    return tuple(mins), Poly(p.order, terms)


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Subresultant-PRS multivariate gcd over the rationals, normalized to an
    integer-primitive polynomial with positive graded-lex lead. Nonzero
    constants are units, so any constant involvement yields 1."""
    if p.order != q.order:
        raise UsageError("mixed variable orders")
    order = p.order
    if p.is_zero():
        return normalize(q)
    if q.is_zero():
        return normalize(p)
    # Common monomial factors are split off up front: they are the cheap
    # part of the gcd, and shrinking the degree in every variable shortens
    # the remainder sequence below.
    mp, p1 = _monomial_split(p)
    mq, q1 = _monomial_split(q)
    core = _gcd_core(p1, q1)
    if mp is not None and mq is not None:
        common = tuple(min(a, b) for a, b in zip(mp, mq))
        if any(common):
            core = core * Poly(order, {common: Fraction(1)})
    return normalize(core)


def _gcd_core(p: Poly, q: Poly) -> Poly:
    order = p.order
    if p.terms == q.terms:
        return p
    lp, lq = p.level(), q.level()
    if lp == 0 or lq == 0:
        return Poly.const(order, 1)
    v = order.names[max(lp, lq) - 1]
    if p.degree(v) == 0:
        return poly_gcd(p, _content_wrt(q, v))
    if q.degree(v) == 0:
        return poly_gcd(_content_wrt(p, v), q)
    cp, pp = _split_content(p, v)
    cq, qq = _split_content(q, v)
    cg = poly_gcd(cp, cq)
    # Subresultant remainder sequence in v.  The g/h divisors keep the
    # coefficient growth determinant-bounded without the recursive content
    # extraction a primitive sequence would need at every step, which is
    # what made deep projection images intractable.
    A, B = _uv(pp, v), _uv(qq, v)
    if len(A) < len(B):
        A, B = B, A
    one = Poly.const(order, 1)
    g = one
    h = one
    G = None
    while True:
        delta = (len(A) - 1) - (len(B) - 1)
        R = _prem(A, B)
        if not R:
            G = B
            break
        if len(R) - 1 == 0:
            break
        divisor = g * (h ** delta)
        A = B
        B = [exact_div(c, divisor) for c in R]
        g = A[-1]
        if delta == 1:
            h = g
        elif delta > 1:
            h = exact_div(g ** delta, h ** (delta - 1))
    if G is None:
        return cg
    return cg * _primitive_poly(_from_uv(G, v, order), v)


def _from_uv(cs: list, v: str, order: VarOrder) -> Poly:
    out = Poly.zero(order)
    xv = Poly.var(order, v)
    for k, c in enumerate(cs):
        if not c.is_zero():
            out = out + c * xv ** k
    return out


def _content_wrt(p: Poly, v: str) -> Poly:
    g = Poly.zero(p.order)
    for c in p.coefficients(v):
        if not c.is_zero():
            g = poly_gcd(g, c)
            if g.is_constant() and not g.is_zero():
                break
    return g


def _split_content(p: Poly, v: str) -> tuple:
    cont = _content_wrt(p, v)
    if cont.is_constant():
        return Poly.const(p.order, 1), p
    return cont, exact_div(p, cont)


def _primitive_poly(p: Poly, v: str) -> Poly:
    return _split_content(p, v)[1]


def _primitive_list(R: list, v: str) -> Poly:
    order = R[0].order
    p = _from_uv(R, v, order)
    return _primitive_poly(p, v)


# ---- squarefree machinery ----

def squarefree_part(p: Poly) -> Poly:
    """p divided by gcd(p, all partial derivatives), normalized."""
    if p.level() == 0:
        raise UsageError("squarefree part of a constant")
    g = p
    for v in p.variables():
        g = poly_gcd(g, p.derivative(v))
        if g.is_constant():
            break
    if g.is_constant():
        return normalize(p)
    return normalize(exact_div(p, g))


def _squarefree_class_factors(p: Poly) -> list:
    """Yun decomposition with respect to the main variable: the nonconstant
    products of irreducible factors sharing one multiplicity.  Inputs must be
    primitive in the main variable; classes with differing multiplicities in
    one input must land in separate basis insertions or the multiplicity
    bookkeeping cannot express that input."""
    v = p.main_var()
    dp = p.derivative(v)
    g = poly_gcd(p, dp)
    if g.is_constant():
        return [normalize(p)]
    out = []
    c = exact_div(p, g)
    d = exact_div(dp, g) - c.derivative(v)
    guard = p.degree(v) + 1
    while not c.is_constant():
        guard -= 1
        if guard < 0:
            raise PmcadError("squarefree class loop failed to terminate")
        a = poly_gcd(c, d) if not d.is_zero() else c
        if not a.is_constant():
            out.append(normalize(a))
            c = exact_div(c, a)
            d = exact_div(d, a) - c.derivative(v) if not d.is_zero() else Poly.zero(p.order)
        else:
            d = d - c.derivative(v)
    return out


class SquarefreeBasis:
    """Pairwise coprime squarefree factors plus input -> factor multiset."""

    __slots__ = ("factors", "multiplicity")

    def __init__(self, factors: tuple, multiplicity: Mapping[Poly, tuple]):
        self.factors = factors
        self.multiplicity = dict(multiplicity)

    def multiplicity_of(self, p: Poly) -> dict:
        return dict(self.multiplicity.get(p, ()))

    def __repr__(self) -> str:
        return "SquarefreeBasis(%s)" % ", ".join(str(f) for f in self.factors)


def _primitive_pieces(p: Poly) -> list:
    # recursive content-vs-primitive split w.r.t. the main variable
    if p.level() == 0:
        return []
    v = p.main_var()
    cont, pp = _split_content(p, v)
    out = [pp] if pp.level() > 0 else []
    if cont.level() > 0:
        out.extend(_primitive_pieces(cont))
    return out


def _divisors(n: int) -> list:
    n = abs(n)
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i != n // i:
                out.append(n // i)
        i += 1
    out.sort()
    return out


_SPLIT_BOUND = 10 ** 6


def _split_rational_roots(f: Poly) -> list:
    """Split rational linear factors off a squarefree primitive univariate
    polynomial; bounded divisor enumeration, no general factorization."""
    vs = f.variables()
    if len(vs) != 1:
        return [f]
    v = vs[0]
    cs = f.univariate_coeffs(v)
    if len(cs) <= 2:
        return [f]
    order = f.order
    factors = []
    if cs[0] == 0:
        factors.append(Poly.var(order, v))
        while len(cs) > 1 and cs[0] == 0:
            cs = cs[1:]
    # coefficients are integers after primitive normalization
    lead = abs(cs[-1].numerator)
    trail = abs(cs[0].numerator)
    if lead > _SPLIT_BOUND or trail > _SPLIT_BOUND:
        rest = _from_uv([Poly.const(order, c) for c in cs], v, order)
        return factors + [normalize(rest)] if factors else [f]
    cands = []
    for pnum in _divisors(trail):
        for qden in _divisors(lead):
            if math.gcd(pnum, qden) == 1:
                cands.append(Fraction(pnum, qden))
                cands.append(Fraction(-pnum, qden))
    changed = True
    while changed and len(cs) > 2:
        changed = False
        for a in cands:
            val = Fraction(0)
            for c in reversed(cs):
                val = val * a + c
            if val == 0:
                # synthetic division by (v - a)
                out = [Fraction(0)] * (len(cs) - 1)
                out[-1] = cs[-1]
                for k in range(len(cs) - 3, -1, -1):
                    out[k] = cs[k + 1] + a * out[k + 1]
                cs = out
                factors.append(normalize(a.denominator * Poly.var(order, v) - a.numerator))
                changed = True
                break
    if len(cs) > 1:
        rest = _from_uv([Poly.const(order, c) for c in cs], v, order)
        factors.append(normalize(rest))
    factors.sort(key=lambda g: g.sort_key())
    return factors


def _refine_basis(basis: list, s: Poly) -> None:
    stack = [s]
    while stack:
        s = normalize(stack.pop())
        if s.level() == 0:
            continue
        placed = False
        i = 0
        while i < len(basis):
            b = basis[i]
            if b == s:
                placed = True
                break
            g = poly_gcd(s, b)
            if g.level() > 0:
                bq = exact_div(b, g)
                repl = [g]
                if bq.level() > 0:
                    repl.append(normalize(bq))
                basis[i:i + 1] = repl
                sq = exact_div(s, g)
                if sq.level() > 0:
                    stack.append(sq)
                placed = True
                break
            i += 1
        if not placed:
            basis.append(s)


def squarefree_coprime_basis(ps: Iterable[Poly]) -> SquarefreeBasis:
    """Pairwise coprime squarefree basis of the nonconstant inputs, with the
    factor multiset of every input. Constants contribute nothing."""
    inputs = list(ps)
    basis: list = []
    for p in inputs:
        if p.is_zero():
            raise UsageError("zero polynomial in basis input")
        for piece in _primitive_pieces(p):
            for cls in _squarefree_class_factors(piece):
                _refine_basis(basis, cls)
    split: list = []
    for b in basis:
        vs = b.variables()
        if len(vs) == 1:
            split.extend(_split_rational_roots(b))
        else:
            split.append(b)
    factors = tuple(sorted(set(split), key=lambda f: f.sort_key()))
    mult = {}
    for p in inputs:
        if p.level() == 0:
            mult[p] = ()
            continue
        rest = p
        ms = []
        for f in factors:
            k = 0
            while True:
                d = try_div(rest, f)
                if d is None:
                    break
                rest = d
                k += 1
            if k:
                ms.append((f, k))
        if not rest.is_constant():
            raise UsageError("basis does not factor input %s (left %s)" % (p, rest))
        mult[p] = tuple(ms)
    return SquarefreeBasis(factors, mult)
