"""Real algebraic numbers and exact sign evaluation.

A real algebraic number is a squarefree integer-primitive defining polynomial
plus an isolating interval. Isolation is bisection with Descartes counting on
the transformed polynomial; comparisons and zero tests never trust numerics
alone, they escalate to gcd or resultant certificates. Roots of polynomials
over partially algebraic sample points are handled lazily (FiberRoot) so the
common rational-sample case stays cheap.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import NullificationError, PmcadError, UsageError
from .polynomial import (
    _SPLIT_BOUND,
    _divisors,
    Poly,
    VarOrder,
    exact_div,
    normalize,
    resultant,
    squarefree_part,
    try_div,
)


class IsolatingInterval:
    """Rational endpoints; kind 'point' means lo == hi is the number itself,
    kind 'open' means the number is strictly inside and endpoints are not
    roots of the defining polynomial."""

    __slots__ = ("lo", "hi", "kind")

    def __init__(self, lo: Fraction, hi: Fraction, kind: str):
        if kind not in ("point", "open"):
            raise UsageError("interval kind must be 'point' or 'open'")
        if kind == "point" and lo != hi:
            raise UsageError("point interval needs lo == hi")
        if kind == "open" and not lo < hi:
            raise UsageError("open interval needs lo < hi")
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)
        self.kind = kind

    def width(self) -> Fraction:
        return self.hi - self.lo

    def __repr__(self) -> str:
        if self.kind == "point":
            return "[%s]" % self.lo
        return "(%s, %s)" % (self.lo, self.hi)


def _horner(cs: Sequence[Fraction], x: Fraction) -> Fraction:
    v = Fraction(0)
    for c in reversed(cs):
        v = v * x + c
    return v


def _sgn(x: Fraction) -> int:
    return (x > 0) - (x < 0)


class RealAlgebraic:
    """Immutable; refine() returns a new value."""

    def __init__(self, defpoly: Poly, interval: IsolatingInterval):
        self.defpoly = defpoly
        self.interval = interval
        self._cs = None

    # ---- construction ----
    @staticmethod
    def from_rational(value, var: str = "u") -> "RealAlgebraic":
        value = Fraction(value)
        order = VarOrder([var])
        p = normalize(value.denominator * Poly.var(order, var) - value.numerator)
        return RealAlgebraic(p, IsolatingInterval(value, value, "point"))

    # ---- queries ----
    def is_rational(self) -> bool:
        return self.interval.kind == "point"

    @property
    def value(self) -> Fraction:
        if not self.is_rational():
            raise UsageError("not (known to be) rational")
        return self.interval.lo

    def bounds(self) -> Tuple[Fraction, Fraction]:
        iv = self.interval
        return iv.lo, iv.hi

    def _coeffs(self) -> list:
        if self._cs is None:
            self._cs = self.defpoly.univariate_coeffs()
        return self._cs

    def var(self) -> str:
        vs = self.defpoly.variables()
        return vs[0] if vs else self.defpoly.order.names[0]

    def _eval_sign(self, x: Fraction) -> int:
        return _sgn(_horner(self._coeffs(), x))

    def is_value(self, r: Fraction) -> bool:
        """Exact test: does this number equal the rational r?"""
        if self.is_rational():
            return self.value == r
        lo, hi = self.bounds()
        return lo < r < hi and self._eval_sign(r) == 0

    # ---- refinement ----
    def refine(self, width: Fraction) -> "RealAlgebraic":
        if self.is_rational():
            return self
        lo, hi = self.bounds()
        if hi - lo <= width:
            return self
        slo = self._eval_sign(lo)
        while hi - lo > width:
            m = (lo + hi) / 2
            sm = self._eval_sign(m)
            if sm == 0:
                return RealAlgebraic.from_rational(m, self.var())
            if sm == slo:
                lo = m
            else:
                hi = m
        out = RealAlgebraic(self.defpoly, IsolatingInterval(lo, hi, "open"))
        out._cs = self._cs
        return out

    def sign(self) -> int:
        if self.is_rational():
            return _sgn(self.value)
        cur = self
        while True:
            lo, hi = cur.bounds()
            if lo >= 0:
                return 1
            if hi <= 0:
                return -1
            if cur.is_value(Fraction(0)):
                return 0
            cur = cur.refine((hi - lo) / 2)

    def approx(self, eps: Fraction = Fraction(1, 10 ** 12)) -> Fraction:
        if self.is_rational():
            return self.value
        r = self.refine(eps)
        lo, hi = r.bounds()
        return (lo + hi) / 2

    def decimal(self, places: int = 10) -> str:
        """Deterministic decimal rendering, truncated toward zero."""
        x = self.approx(Fraction(1, 10 ** (places + 3)))
        neg = x < 0
        x = -x if neg else x
        scaled = x.numerator * 10 ** places // x.denominator
        ip, fp = divmod(scaled, 10 ** places)
        s = "%d.%0*d" % (ip, places, fp)
        return "-" + s if neg else s

    def __repr__(self) -> str:
        if self.is_rational():
            return "RealAlgebraic(%s)" % self.value
        return "RealAlgebraic(%s in %r ~ %s)" % (self.defpoly, self.interval, self.decimal(4))

    # ---- comparisons ----
    def __lt__(self, other):
        return compare(self, _as_ra(other)) < 0

    def __le__(self, other):
        return compare(self, _as_ra(other)) <= 0

    def __gt__(self, other):
        return compare(self, _as_ra(other)) > 0

    def __ge__(self, other):
        return compare(self, _as_ra(other)) >= 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, RealAlgebraic)):
            return compare(self, _as_ra(other)) == 0
        return NotImplemented

    __hash__ = None  # semantic equality crosses representations


def _as_ra(x) -> RealAlgebraic:
    if isinstance(x, RealAlgebraic):
        return x
    if isinstance(x, (int, Fraction)):
        return RealAlgebraic.from_rational(x)
    raise UsageError("cannot compare with %r" % (x,))


def refine(root: RealAlgebraic, width: Fraction) -> RealAlgebraic:
    return root.refine(Fraction(width))


# ---- univariate utilities on Fraction coefficient lists ----

def _strip_list(c: list) -> list:
    while c and not c[-1]:
        c.pop()
    return c


def _uni_gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> list:
    """Monic gcd of univariate rational polynomials as coefficient lists."""
    a = _strip_list([Fraction(x) for x in a])
    b = _strip_list([Fraction(x) for x in b])
    while b:
        # a mod b
        r = list(a)
        while len(r) >= len(b) and r:
            f = r[-1] / b[-1]
            sh = len(r) - len(b)
            for i in range(len(b)):
                r[i + sh] -= f * b[i]
            r.pop()
            r = _strip_list(r)
        a, b = b, r
    if not a:
        return []
    lead = a[-1]
    return [c / lead for c in a]


def _poly_from_coeffs(cs: Sequence[Fraction], var: str) -> Poly:
    order = VarOrder([var])
    t = {}
    for k, c in enumerate(cs):
        if c:
            t[(k,)] = Fraction(c)
    return Poly(order, t)


# ---- integer root isolation (Descartes / bisection) ----

class _RationalRoot(Exception):
    def __init__(self, value: Fraction):
        self.value = value


def _shift1(c: list) -> list:
    c = list(c)
    n = len(c)
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            c[j] += c[j + 1]
    return c


def _variations(c: Sequence[int]) -> int:
    signs = [(x > 0) - (x < 0) for x in c if x]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _var_transformed(q: list) -> int:
    # sign variations of (x+1)^n q(1/(x+1)): reverse then shift by 1
    return _variations(_shift1(list(reversed(q))))


def _vca(q: list, lo: Fraction, hi: Fraction, out: list) -> None:
    v = _var_transformed(q)
    if v == 0:
        return
    if v == 1:
        out.append((lo, hi))
        return
    mid = (lo + hi) / 2
    n = len(q) - 1
    left = [q[i] * (1 << (n - i)) for i in range(n + 1)]
    if sum(left) == 0:
        raise _RationalRoot(mid)
    right = _shift1(list(left))
    _vca(left, lo, mid, out)
    _vca(right, mid, hi, out)


def _int_primitive(cs: Sequence[Fraction]) -> list:
    from math import gcd

    den = 1
    for c in cs:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in cs]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
    if ints and ints[-1] < 0:
        ints = [-x for x in ints]
    return ints


def _deflate_int(h: list, a: Fraction) -> list:
    # h / (x - a), exact; returns integer-primitive list
    out = [Fraction(0)] * (len(h) - 1)
    out[-1] = Fraction(h[-1])
    for k in range(len(h) - 3, -1, -1):
        out[k] = Fraction(h[k + 1]) + a * out[k + 1]
    return _int_primitive(out)


def _root_bound_int(h: Sequence[int]) -> int:
    return 2 + max(abs(c) for c in h[:-1]) // abs(h[-1]) if len(h) > 1 else 1


def _extract_rational_roots(h: list) -> Tuple[list, list]:
    """Detect and deflate rational roots by bounded divisor enumeration, so
    rational values get point representations. Roots whose numerator or
    denominator candidates exceed the bound can only be caught later when a
    bisection point happens to hit them."""
    points: list = []
    if len(h) >= 2 and h[0] == 0:
        points.append(Fraction(0))
        h = _int_primitive([Fraction(c) for c in h[1:]])
    if len(h) < 2:
        return points, h
    if abs(h[0]) > _SPLIT_BOUND or abs(h[-1]) > _SPLIT_BOUND:
        return points, h
    for num in _divisors(abs(h[0])):
        for den in _divisors(abs(h[-1])):
            for r in (Fraction(num, den), Fraction(-num, den)):
                if r.numerator in (num, -num) and len(h) >= 2:
                    if _horner([Fraction(c) for c in h], r) == 0:
                        points.append(r)
                        h = _deflate_int(h, r)
    return points, h


def _vca_run(h: list) -> list:
    """Open isolating intervals for the roots of a squarefree integer
    polynomial; raises _RationalRoot when a bisection point is hit."""
    if len(h) <= 1:
        return []
    if h[0] == 0:
        raise _RationalRoot(Fraction(0))
    B = _root_bound_int(h)
    out_pos: list = []
    qpos = [h[i] * B ** i for i in range(len(h))]
    _vca(qpos, Fraction(0), Fraction(B), out_pos)
    hneg = [(-1) ** i * h[i] for i in range(len(h))]
    qneg = [hneg[i] * B ** i for i in range(len(h))]
    out_neg: list = []
    try:
        _vca(qneg, Fraction(0), Fraction(B), out_neg)
    except _RationalRoot as e:
        raise _RationalRoot(-e.value) from None
    out = [(-b, -a) for (a, b) in reversed(out_neg)] + out_pos
    return out


def _shrink_away(h: list, lo: Fraction, hi: Fraction, r: Fraction):
    """Shrink an open isolating interval of h so the rational r falls outside.
    Returns ('open', lo, hi) or ('point', m) when the root turns out rational."""
    slo = _sgn(_horner([Fraction(c) for c in h], lo))
    while lo <= r <= hi:
        m = (lo + hi) / 2
        if m == r:
            m = (3 * lo + hi) / 4
        hm = _sgn(_horner([Fraction(c) for c in h], m))
        if hm == 0:
            return ("point", m)
        if hm == slo:
            lo = m
        else:
            hi = m
    return ("open", lo, hi)


def isolate_roots(p: Poly) -> List[RealAlgebraic]:
    """Isolating intervals for the distinct real roots, ascending. The input
    must be a nonzero polynomial in at most one variable."""
    if p.is_zero():
        raise UsageError("cannot isolate roots of the zero polynomial")
    vs = p.variables()
    if len(vs) > 1:
        raise UsageError("isolate_roots needs a univariate polynomial, got %s" % (vs,))
    if not vs:
        return []
    v = vs[0]
    sf = squarefree_part(p)
    h = _int_primitive(sf.univariate_coeffs(v))
    points, h = _extract_rational_roots(h)
    while True:
        try:
            ivs = _vca_run(h)
            break
        except _RationalRoot as e:
            points.append(e.value)
            h = _deflate_int(h, e.value)
    hpoly = _poly_from_coeffs([Fraction(c) for c in h], v)
    out: list = []
    for (lo, hi) in ivs:
        shape: tuple = ("open", lo, hi)
        for r in points:
            if shape[0] == "open" and shape[1] <= r <= shape[2]:
                shape = _shrink_away(h, shape[1], shape[2], r)
        if shape[0] == "point":
            out.append(RealAlgebraic.from_rational(shape[1], v))
        else:
            ra = RealAlgebraic(hpoly, IsolatingInterval(shape[1], shape[2], "open"))
            out.append(ra.refine(Fraction(1, 4)))
    out.extend(RealAlgebraic.from_rational(r, v) for r in points)
    out.sort(key=_sort_key_numeric)
    return out


def _sort_key_numeric(r: RealAlgebraic):
    # roots from one isolation are pairwise disjoint, interval lows sort them
    lo, hi = r.bounds()
    return (lo, hi)


# ---- comparison ----

def _disjoint_cmp(a: RealAlgebraic, b: RealAlgebraic) -> Optional[int]:
    alo, ahi = a.bounds()
    blo, bhi = b.bounds()
    a_pt, b_pt = a.is_rational(), b.is_rational()
    if a_pt and b_pt:
        return _sgn(alo - blo)
    if ahi < blo or (ahi == blo and not (a_pt and b_pt)):
        return -1
    if bhi < alo or (bhi == alo and not (a_pt and b_pt)):
        return 1
    if a_pt and blo < alo < bhi:
        return None
    if b_pt and alo < blo < ahi:
        return None
    return None


def _root_in(host: RealAlgebraic, r: RealAlgebraic) -> bool:
    """Is r (a root of host.defpoly) equal to host's root? Decided by interval
    separation: host's other roots lie strictly outside its interval."""
    hlo, hhi = host.bounds()
    if host.is_rational():
        if r.is_rational():
            return r.value == host.value
        cur = r
        while True:
            lo, hi = cur.bounds()
            if lo > hlo or hi < hlo:
                return False
            if cur.is_value(hlo):
                return True
            cur = cur.refine((hi - lo) / 2)
    cur = r
    while True:
        lo, hi = cur.bounds()
        if cur.is_rational():
            return hlo < lo < hhi
        if hi <= hlo or lo >= hhi:
            return False
        if hlo < lo and hi < hhi:
            return True
        cur = cur.refine((hi - lo) / 2)


def compare(a: RealAlgebraic, b: RealAlgebraic, known_distinct: bool = False) -> int:
    """Exact total order; equality certified via a gcd of defining polynomials.
    known_distinct skips the certificate when the caller holds an external
    proof (e.g. a nonzero resultant) that the values differ."""
    a, b = _as_ra(a), _as_ra(b)
    if a is b:
        return 0
    if a.is_rational() and b.is_rational():
        return _sgn(a.value - b.value)
    rounds = 0
    while True:
        c = _disjoint_cmp(a, b)
        if c is not None:
            return c
        if rounds == 3 and not known_distinct:
            g = _uni_gcd(a.defpoly.univariate_coeffs(), b.defpoly.univariate_coeffs())
            if len(g) >= 2:
                gp = _poly_from_coeffs(g, a.var())
                for r in isolate_roots(gp):
                    if _root_in(a, r) and _root_in(b, r):
                        return 0
        rounds += 1
        wa = a.bounds()
        wb = b.bounds()
        a = a.refine((wa[1] - wa[0]) / 2 if wa[1] > wa[0] else Fraction(1))
        b = b.refine((wb[1] - wb[0]) / 2 if wb[1] > wb[0] else Fraction(1))


# ---- sample points ----

class SamplePoint:
    """Coordinates for the first k variables of an order."""

    __slots__ = ("order", "coords")

    def __init__(self, order: VarOrder, coords: Sequence[RealAlgebraic]):
        if len(coords) > len(order):
            raise UsageError("more coordinates than variables")
        self.order = order
        self.coords = tuple(coords)

    @staticmethod
    def of_rationals(order: VarOrder, values: Sequence) -> "SamplePoint":
        ords = order.names
        return SamplePoint(order, tuple(
            RealAlgebraic.from_rational(v, ords[i]) for i, v in enumerate(values)))

    def extended(self, coord: RealAlgebraic) -> "SamplePoint":
        return SamplePoint(self.order, self.coords + (coord,))

    def names(self) -> tuple:
        return self.order.names[: len(self.coords)]

    def split(self) -> Tuple[dict, list]:
        rat = {}
        alg = []
        for name, c in zip(self.order.names, self.coords):
            if c.is_rational():
                rat[name] = c.value
            else:
                alg.append((name, c))
        return rat, alg

    def __len__(self) -> int:
        return len(self.coords)

    def __repr__(self) -> str:
        return "SamplePoint(%s)" % ", ".join(
            "%s=%s" % (n, c.decimal(4)) for n, c in zip(self.order.names, self.coords))


# ---- interval arithmetic (sound outer bounds) ----

def _iv_mul(a: Tuple[Fraction, Fraction], b: Tuple[Fraction, Fraction]):
    ps = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(ps), max(ps))


def _iv_pow(a, k: int):
    out = (Fraction(1), Fraction(1))
    for _ in range(k):
        out = _iv_mul(out, a)
    return out


def _iv_eval(p: Poly, boxes: Mapping[str, Tuple[Fraction, Fraction]]):
    total = (Fraction(0), Fraction(0))
    names = p.order.names
    for e, c in p.terms.items():
        term = (Fraction(c), Fraction(c))
        for i, k in enumerate(e):
            if k:
                term = _iv_mul(term, _iv_pow(boxes[names[i]], k))
        total = (total[0] + term[0], total[1] + term[1])
    return total


# ---- sign evaluation at sample points ----

def sign_at(p: Poly, s: SamplePoint) -> int:
    """Exact sign of p at the sample point; every variable of p must be
    assigned a coordinate."""
    assigned = set(s.names())
    missing = [v for v in p.variables() if v not in assigned]
    if missing:
        raise UsageError("sample point does not cover %s" % ", ".join(missing))
    rat, alg = s.split()
    q = p.subs(rat)
    used = set(q.variables())
    alg_used = [(v, r) for (v, r) in alg if v in used]
    if not alg_used:
        return _sgn(q.constant_value())
    if len(alg_used) == 1:
        v, r = alg_used[0]
        return _sign_one_alg(q, v, r)
    return _sign_multi_alg(q, alg_used)


def _sign_one_alg(q: Poly, v: str, r: RealAlgebraic) -> int:
    cs = q.univariate_coeffs(v)
    if r.is_rational():
        return _sgn(_horner(cs, r.value))
    g = _uni_gcd(cs, r.defpoly.univariate_coeffs())
    if len(g) >= 2:
        gp = _poly_from_coeffs(g, v)
        for root in isolate_roots(gp):
            if _root_in(r, root):
                return 0
    cur = r
    while True:
        lo, hi = cur.bounds()
        vlo, vhi = _iv_eval_uni(cs, lo, hi)
        if vlo > 0:
            return 1
        if vhi < 0:
            return -1
        cur = cur.refine((hi - lo) / 2)


def _iv_eval_uni(cs: Sequence[Fraction], lo: Fraction, hi: Fraction):
    acc = (Fraction(0), Fraction(0))
    x = (lo, hi)
    for c in reversed(cs):
        acc = _iv_mul(acc, x)
        acc = (acc[0] + c, acc[1] + c)
    return acc


def _strip_conjugates(d: Poly, cur: Poly, v: str) -> Poly:
    """Divide out of d the factors whose roots nullify cur (make it vanish
    identically as a polynomial in the remaining variables)."""
    i = cur.order.position(v)
    groups: dict = {}
    for e, c in cur.terms.items():
        key = e[:i] + (0,) + e[i + 1:]
        groups.setdefault(key, {})[e[i]] = c
    content: list = []
    for cmap in groups.values():
        deg = max(cmap)
        cs = [cmap.get(k, Fraction(0)) for k in range(deg + 1)]
        content = _uni_gcd(content, cs) if content else _strip_list(cs)
        if len(content) == 1:
            return d
    g = _uni_gcd(content, d.univariate_coeffs(v) if len(d.variables()) == 1 else _d_coeffs(d, v))
    if len(g) < 2:
        return d
    gp_terms = {}
    for k, c in enumerate(g):
        if c:
            e = [0] * len(d.order)
            e[d.order.position(v)] = k
            gp_terms[tuple(e)] = c
    gp = Poly(d.order, gp_terms)
    dq = try_div(d, gp)
    if dq is None or dq.degree(v) < 1:
        return d
    return dq


def _d_coeffs(d: Poly, v: str) -> list:
    cs = d.coefficients(v)
    cs.reverse()
    return [c.constant_value() for c in cs]


def _sign_multi_alg(q: Poly, alg_used: list) -> int:
    order = q.order
    wname = "_val"
    while wname in order:
        wname += "_"
    ext = order.extended(wname)

    def lift(p: Poly) -> Poly:
        return Poly(ext, {e + (0,): c for e, c in p.terms.items()})

    cur = Poly.var(ext, wname) - lift(q)
    for v, r in alg_used:
        if cur.degree(v) < 1:
            continue
        cs = r.defpoly.univariate_coeffs()
        t = {}
        for k, c in enumerate(cs):
            e = [0] * len(ext)
            e[ext.position(v)] = k
            t[tuple(e)] = c
        d = Poly(ext, t)
        d = _strip_conjugates(d, cur, v)
        cur = resultant(d, cur, v)
        if cur.is_zero():
            raise PmcadError("degenerate sign certificate")
    if cur.degree(wname) < 1:
        raise PmcadError("sign certificate lost its value variable")
    npoly = squarefree_part(cur)
    roots = isolate_roots(npoly)
    coords = list(alg_used)
    while True:
        boxes = {v: r.bounds() for v, r in coords}
        qlo, qhi = _iv_eval(q, boxes)
        cands = []
        for root in roots:
            root = root.refine((qhi - qlo) / 4 if qhi > qlo else Fraction(1, 4))
            rlo, rhi = root.bounds()
            if not (rhi < qlo or rlo > qhi):
                cands.append(root)
        if len(cands) == 1:
            return cands[0].sign()
        coords = [(v, r.refine(_half_width(r))) for v, r in coords]


def _half_width(r: RealAlgebraic) -> Fraction:
    lo, hi = r.bounds()
    return (hi - lo) / 2 if hi > lo else Fraction(1)


# ---- roots over a sample point ----

def roots_over(p: Poly, s: SamplePoint, v: str) -> List[RealAlgebraic]:
    """Real roots of p specialized at the sample point, as a function of v,
    ascending. Raises NullificationError when the specialization vanishes
    identically."""
    assigned = set(s.names())
    extra = [u for u in p.variables() if u not in assigned and u != v]
    if extra:
        raise UsageError("unassigned variables %s" % ", ".join(extra))
    rat, alg = s.split()
    q = p.subs(rat)
    if q.is_zero():
        raise NullificationError("polynomial vanishes identically over the sample")
    alg_used = [(u, r) for (u, r) in alg if u in q.variables()]
    if not alg_used:
        if q.degree(v) <= 0:
            return []
        return isolate_roots(q)
    return _isolate_fiber(q, s, v)


class FiberRoot(RealAlgebraic):
    """A root of poly(base, v) over a (partially algebraic) base sample.

    Kept as a rational bracket with a sign change; the defining polynomial and
    isolating interval are materialized on demand via resultant elimination of
    the base coordinates.
    """

    def __init__(self, base: SamplePoint, poly: Poly, vname: str,
                 blo: Fraction, bhi: Fraction, slo: int):
        self.base = base
        self.poly = poly
        self.vname = vname
        self._blo = Fraction(blo)
        self._bhi = Fraction(bhi)
        self._slo = slo
        self._mat: Optional[RealAlgebraic] = None
        self._cs = None

    # bracket-level operations (no materialization)
    def is_rational(self) -> bool:
        return False

    def bounds(self) -> Tuple[Fraction, Fraction]:
        if self._mat is not None:
            return self._mat.bounds()
        return self._blo, self._bhi

    def _fsign(self, t: Fraction) -> int:
        return sign_at(self.poly.subs({self.vname: t}), self.base)

    def is_value(self, r: Fraction) -> bool:
        lo, hi = self.bounds()
        return lo < r < hi and self._fsign(r) == 0

    def refine(self, width: Fraction) -> RealAlgebraic:
        if self._mat is not None:
            return self._mat.refine(width)
        lo, hi = self._blo, self._bhi
        slo = self._slo
        while hi - lo > width:
            m = (lo + hi) / 2
            sm = self._fsign(m)
            if sm == 0:
                return RealAlgebraic.from_rational(m, self.vname)
            if sm == slo:
                lo = m
            else:
                hi = m
        if lo == self._blo and hi == self._bhi:
            return self
        return FiberRoot(self.base, self.poly, self.vname, lo, hi, slo)

    def narrowed(self, width: Fraction) -> "RealAlgebraic":
        return self.refine(width)

    # materialized view
    @property
    def defpoly(self) -> Poly:
        return self._materialize().defpoly

    @property
    def interval(self) -> IsolatingInterval:
        return self._materialize().interval

    def _materialize(self) -> RealAlgebraic:
        if self._mat is not None:
            return self._mat
        rat, alg = self.base.split()
        q = self.poly.subs(rat)
        used = [(u, r) for (u, r) in alg if u in q.variables()]
        cur = q
        for u, r in used:
            if cur.degree(u) < 1:
                continue
            cs = r.defpoly.univariate_coeffs()
            t = {}
            for k, c in enumerate(cs):
                e = [0] * len(cur.order)
                e[cur.order.position(u)] = k
                t[tuple(e)] = c
            d = Poly(cur.order, t)
            d = _strip_conjugates(d, cur, u)
            cur = resultant(d, cur, u)
            if cur.is_zero():
                raise PmcadError("degenerate fiber materialization")
        if cur.degree(self.vname) < 1:
            raise PmcadError("fiber materialization lost its variable")
        m = squarefree_part(cur)
        mpoly = _poly_from_coeffs(m.univariate_coeffs(self.vname), self.vname)
        mroots = isolate_roots(mpoly)
        mcs = mpoly.univariate_coeffs()
        lo, hi, slo = self._blo, self._bhi, self._slo
        while True:
            inside = []
            for r in mroots:
                rr = r.refine((hi - lo) / 4)
                rlo, rhi = rr.bounds()
                if not (rhi <= lo or rlo >= hi):
                    inside.append(rr)
            ok_ends = _sgn(_horner(mcs, lo)) != 0 and _sgn(_horner(mcs, hi)) != 0
            if len(inside) == 1 and ok_ends:
                self._mat = RealAlgebraic(mpoly, IsolatingInterval(lo, hi, "open"))
                return self._mat
            # shrink the bracket by f-sign bisection, avoiding roots of m
            for cand in ((lo + hi) / 2, (3 * lo + hi) / 4, (lo + 3 * hi) / 4):
                sm = self._fsign(cand)
                if sm == 0:
                    self._mat = RealAlgebraic.from_rational(cand, self.vname)
                    return self._mat
                if _sgn(_horner(mcs, cand)) != 0:
                    if sm == slo:
                        lo = cand
                    else:
                        hi = cand
                    break
            else:
                # every probe hit a root of m; bisect anyway on the midpoint
                m2 = (lo + hi) / 2
                sm = self._fsign(m2)
                if sm == 0:
                    self._mat = RealAlgebraic.from_rational(m2, self.vname)
                    return self._mat
                if sm == slo:
                    lo = m2
                else:
                    hi = m2

    def __repr__(self) -> str:
        lo, hi = self.bounds()
        return "FiberRoot(%s in (%s, %s))" % (self.vname, lo, hi)


def _isolate_fiber(q: Poly, s: SamplePoint, v: str) -> List[RealAlgebraic]:
    k = len(s.coords)
    if k >= len(s.order) or s.order.names[k] != v:
        raise UsageError("fiber variable must be the next unassigned one")
    cs = q.coefficients(v)  # high -> low, polynomials in base variables
    signs = [sign_at(c, s) for c in cs]
    if all(x == 0 for x in signs):
        raise NullificationError("fiber polynomial vanishes identically")
    k = 0
    while signs[k] == 0:
        k += 1
    eff = cs[k:]
    d = len(eff) - 1
    if d == 0:
        return []
    order = q.order
    vv = Poly.var(order, v)
    q_eff = Poly.zero(order)
    for i, c in enumerate(eff):
        q_eff = q_eff + c * vv ** (d - i)

    sub: List[RealAlgebraic] = []
    if d >= 2:
        sub = _isolate_fiber(q_eff.derivative(v), s, v)

    bound = _fiber_root_bound(eff, s, signs[k])
    for t in sub:
        tlo, thi = t.bounds()
        m = max(abs(tlo), abs(thi))
        if m >= bound:
            bound = Fraction(m.numerator // m.denominator + 1)
    breaks: list = [RealAlgebraic.from_rational(-bound, v)] + list(sub) + [
        RealAlgebraic.from_rational(bound, v)]
    bsigns = []
    for t in breaks:
        if t.is_rational():
            bsigns.append(sign_at(q_eff.subs({v: t.value}), s))
        else:
            bsigns.append(_fiber_sign_at_root(q_eff, s, v, t))
    out: List[RealAlgebraic] = []
    for i in range(len(breaks) - 1):
        si, sj = bsigns[i], bsigns[i + 1]
        if si == 0 and i > 0:
            out.append(breaks[i])  # derivative root that is also a root
        if si != 0 and sj != 0 and si != sj:
            lo = _edge_point(q_eff, s, v, breaks[i], si, True)
            if isinstance(lo, RealAlgebraic):
                out.append(lo)
                continue
            hi = _edge_point(q_eff, s, v, breaks[i + 1], sj, False)
            if isinstance(hi, RealAlgebraic):
                out.append(hi)
                continue
            out.append(FiberRoot(s, q_eff, v, lo, hi, si))
    return out


def _fiber_root_bound(eff: list, s: SamplePoint, lead_sign: int) -> Fraction:
    # Cauchy-style bound with interval refinement until the lead is separated
    rat, alg = s.split()
    coords = [(u, r) for u, r in alg]
    while True:
        boxes = {u: r.bounds() for u, r in coords}
        vals = []
        ok = True
        for c in eff:
            cc = c.subs(rat)
            lo, hi = _iv_eval(cc, boxes) if cc.variables() else (
                cc.constant_value(), cc.constant_value())
            vals.append((lo, hi))
        llo, lhi = vals[0]
        if llo <= 0 <= lhi:
            coords = [(u, r.refine(_half_width(r))) for u, r in coords]
            continue
        lead_abs = min(abs(llo), abs(lhi))
        top = max(max(abs(lo), abs(hi)) for lo, hi in vals[1:]) if len(vals) > 1 else Fraction(0)
        b = Fraction(2) + top / lead_abs
        num = b.numerator // b.denominator + 1
        return Fraction(num)


def _fiber_sign_at_root(q_eff: Poly, s: SamplePoint, v: str, t: RealAlgebraic) -> int:
    """Sign of the fiber polynomial at a breakpoint that is itself a fiber
    root of the derivative; numeric refinement first, exact certificate after."""
    rat, alg = s.split()
    qs = q_eff.subs(rat)
    cur = t
    for _ in range(14):
        boxes = {u: r.bounds() for u, r in alg}
        boxes[v] = cur.bounds()
        lo, hi = _iv_eval(qs, boxes)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        cur = cur.refine(_half_width(cur))
    return sign_at(q_eff, s.extended(cur))


def _edge_point(q_eff: Poly, s: SamplePoint, v: str, t: RealAlgebraic, st: int, is_lower: bool):
    """A rational point strictly between the breakpoint t and the adjacent
    root, carrying the breakpoint's sign. Returns the root itself when a probe
    hits it exactly."""
    if t.is_rational():
        return t.value
    cur = t
    while True:
        lo, hi = cur.bounds()
        probe = hi if is_lower else lo
        sp = sign_at(q_eff.subs({v: probe}), s)
        if sp == st:
            return probe
        if sp == 0:
            return RealAlgebraic.from_rational(probe, v)
        cur = cur.refine((hi - lo) / 2)
