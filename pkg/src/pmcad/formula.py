"""Tarski formulas: AST, parser, canonical printer, normal forms, and a
rational-point evaluation oracle.

Atoms are kept in the shape p sigma 0 with p integer-primitive and a positive
leading coefficient; building an atom from a constant polynomial folds to
TRUE/FALSE. Indexed-root atoms (RootCmp) carry quantifier-elimination output
that plain sign conditions cannot express.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import UsageError
from .polynomial import Poly, VarOrder, normalize
from .realalg import RealAlgebraic, compare, isolate_roots


class Formula:
    """Base class; all nodes immutable with structural equality."""

    def __and__(self, other: "Formula") -> "Formula":
        return conj([self, other])

    def __or__(self, other: "Formula") -> "Formula":
        return disj([self, other])

    def __invert__(self) -> "Formula":
        return Not(self)


class _TrueF(Formula):
    def __repr__(self):
        return "TRUE"

    def __eq__(self, other):
        return isinstance(other, _TrueF)

    def __hash__(self):
        return hash("TRUE")


class _FalseF(Formula):
    def __repr__(self):
        return "FALSE"

    def __eq__(self, other):
        return isinstance(other, _FalseF)

    def __hash__(self):
        return hash("FALSE")


TRUE = _TrueF()
FALSE = _FalseF()

_RELOPS = ("=", "/=", "<", "<=", ">", ">=")

_NEGATE = {"=": "/=", "/=": "=", "<": ">=", "<=": ">", ">": "<=", ">=": "<"}
# relop for -p sigma 0 given p sigma 0
_MIRROR = {"=": "=", "/=": "/=", "<": ">", "<=": ">=", ">": "<", ">=": "<="}


def _sign_ok(s: int, op: str) -> bool:
    if op == "=":
        return s == 0
    if op == "/=":
        return s != 0
    if op == "<":
        return s < 0
    if op == "<=":
        return s <= 0
    if op == ">":
        return s > 0
    return s >= 0


class Atom(Formula):
    __slots__ = ("poly", "op")

    def __init__(self, poly: Poly, op: str):
        if op not in _RELOPS:
            raise UsageError("unknown relop %r" % op)
        self.poly = poly
        self.op = op

    def __eq__(self, other):
        return isinstance(other, Atom) and self.op == other.op and self.poly == other.poly

    def __hash__(self):
        return hash((self.op, self.poly))

    def __repr__(self):
        return "Atom(%s %s 0)" % (self.poly, self.op)


def atom(poly: Poly, op: str) -> Formula:
    """Canonical atom; constants fold to TRUE/FALSE, negative leads mirror."""
    if op not in _RELOPS:
        raise UsageError("unknown relop %r" % op)
    if poly.is_constant():
        s = (poly.constant_value() > 0) - (poly.constant_value() < 0)
        return TRUE if _sign_ok(s, op) else FALSE
    content, prim = poly.primitive_rat()
    if content < 0:
        op = _MIRROR[op]
    return Atom(prim, op)


class RootCmp(Formula):
    """var relop (the index-th real root of poly in var over the other
    variables); false when that root does not exist."""

    __slots__ = ("var", "op", "index", "poly")

    def __init__(self, var: str, op: str, index: int, poly: Poly):
        if op not in _RELOPS:
            raise UsageError("unknown relop %r" % op)
        if index < 1:
            raise UsageError("root index is 1-based")
        if poly.degree(var) < 1:
            raise UsageError("root atom polynomial must involve %s" % var)
        self.var = var
        self.op = op
        self.index = index
        self.poly = normalize(poly)

    def __eq__(self, other):
        return (isinstance(other, RootCmp) and self.var == other.var
                and self.op == other.op and self.index == other.index
                and self.poly == other.poly)

    def __hash__(self):
        return hash((self.var, self.op, self.index, self.poly))

    def __repr__(self):
        return "RootCmp(%s %s root_%d)" % (self.var, self.op, self.index)


class And(Formula):
    __slots__ = ("args",)

    def __init__(self, args: Sequence[Formula]):
        self.args = tuple(args)

    def __eq__(self, other):
        return isinstance(other, And) and self.args == other.args

    def __hash__(self):
        return hash(("And", self.args))

    def __repr__(self):
        return "And(%s)" % ", ".join(map(repr, self.args))


class Or(Formula):
    __slots__ = ("args",)

    def __init__(self, args: Sequence[Formula]):
        self.args = tuple(args)

    def __eq__(self, other):
        return isinstance(other, Or) and self.args == other.args

    def __hash__(self):
        return hash(("Or", self.args))

    def __repr__(self):
        return "Or(%s)" % ", ".join(map(repr, self.args))


class Not(Formula):
    __slots__ = ("arg",)

    def __init__(self, arg: Formula):
        self.arg = arg

    def __eq__(self, other):
        return isinstance(other, Not) and self.arg == other.arg

    def __hash__(self):
        return hash(("Not", self.arg))

    def __repr__(self):
        return "Not(%r)" % (self.arg,)


class Exists(Formula):
    __slots__ = ("var", "body")

    def __init__(self, var: str, body: Formula):
        self.var = var
        self.body = body

    def __eq__(self, other):
        return isinstance(other, Exists) and self.var == other.var and self.body == other.body

    def __hash__(self):
        return hash(("E", self.var, self.body))

    def __repr__(self):
        return "Exists(%s, %r)" % (self.var, self.body)


class Forall(Formula):
    __slots__ = ("var", "body")

    def __init__(self, var: str, body: Formula):
        self.var = var
        self.body = body

    def __eq__(self, other):
        return isinstance(other, Forall) and self.var == other.var and self.body == other.body

    def __hash__(self):
        return hash(("A", self.var, self.body))

    def __repr__(self):
        return "Forall(%s, %r)" % (self.var, self.body)


def conj(parts: Iterable[Formula]) -> Formula:
    out: List[Formula] = []
    for p in parts:
        if p is TRUE:
            continue
        if p is FALSE:
            return FALSE
        if isinstance(p, And):
            out.extend(p.args)
        else:
            out.append(p)
    if not out:
        return TRUE
    if len(out) == 1:
        return out[0]
    return And(out)


def disj(parts: Iterable[Formula]) -> Formula:
    out: List[Formula] = []
    for p in parts:
        if p is FALSE:
            continue
        if p is TRUE:
            return TRUE
        if isinstance(p, Or):
            out.extend(p.args)
        else:
            out.append(p)
    if not out:
        return FALSE
    if len(out) == 1:
        return out[0]
    return Or(out)


def free_vars(f: Formula) -> tuple:
    """Free variables in the order of the underlying VarOrder."""
    order: Optional[VarOrder] = formula_order(f)
    if order is None:
        return ()
    bound: set = set()
    free: set = set()

    def walk(g: Formula, bnd: frozenset):
        if isinstance(g, Atom):
            free.update(v for v in g.poly.variables() if v not in bnd)
        elif isinstance(g, RootCmp):
            vs = set(g.poly.variables())
            vs.add(g.var)
            free.update(v for v in vs if v not in bnd)
        elif isinstance(g, (And, Or)):
            for a in g.args:
                walk(a, bnd)
        elif isinstance(g, Not):
            walk(g.arg, bnd)
        elif isinstance(g, (Exists, Forall)):
            bound.add(g.var)
            walk(g.body, bnd | {g.var})

    walk(f, frozenset())
    return tuple(v for v in order.names if v in free)


def formula_order(f: Formula) -> Optional[VarOrder]:
    if isinstance(f, Atom) or isinstance(f, RootCmp):
        return f.poly.order
    if isinstance(f, (And, Or)):
        for a in f.args:
            o = formula_order(a)
            if o is not None:
                return o
        return None
    if isinstance(f, Not):
        return formula_order(f.arg)
    if isinstance(f, (Exists, Forall)):
        return formula_order(f.body)
    return None


def is_quantifier_free(f: Formula) -> bool:
    if isinstance(f, (Exists, Forall)):
        return False
    if isinstance(f, (And, Or)):
        return all(is_quantifier_free(a) for a in f.args)
    if isinstance(f, Not):
        return is_quantifier_free(f.arg)
    return True


def negate_nnf(f: Formula) -> Formula:
    """Negation in negation normal form; quantifier-free input only."""
    if isinstance(f, (Exists, Forall)):
        raise UsageError("negate_nnf needs a quantifier-free formula")
    if f is TRUE:
        return FALSE
    if f is FALSE:
        return TRUE
    if isinstance(f, Atom):
        return Atom(f.poly, _NEGATE[f.op])
    if isinstance(f, RootCmp):
        # the root may not exist, in which case both the atom and its pointwise
        # flip are false; keep the flip guarded by existence via Not
        return Not(f)
    if isinstance(f, Not):
        return _push_nnf(f.arg)
    if isinstance(f, And):
        return disj([negate_nnf(a) for a in f.args])
    if isinstance(f, Or):
        return conj([negate_nnf(a) for a in f.args])
    raise UsageError("cannot negate %r" % (f,))


def _push_nnf(f: Formula) -> Formula:
    if isinstance(f, Not):
        return negate_nnf(f.arg)
    if isinstance(f, And):
        return conj([_push_nnf(a) for a in f.args])
    if isinstance(f, Or):
        return disj([_push_nnf(a) for a in f.args])
    return f


@dataclass(frozen=True)
class PrenexForm:
    prefix: tuple  # of (quantifier "E"/"A", variable)
    matrix: Formula

    def formula(self) -> Formula:
        f = self.matrix
        for q, v in reversed(self.prefix):
            f = Exists(v, f) if q == "E" else Forall(v, f)
        return f


def _rename_var(p: Poly, old: str, new: str) -> Poly:
    order = p.order
    if new in order:
        raise UsageError("rename target %s already in order" % new)
    ext = order.extended(new)
    i = order.position(old)
    j = len(order)
    t = {}
    for e, c in p.terms.items():
        ee = list(e) + [0]
        ee[j] = ee[i]
        ee[i] = 0
        t[tuple(ee)] = c
    return Poly(ext, t)


def _substitute_var(f: Formula, old: str, new: str) -> Formula:
    if isinstance(f, Atom):
        if old not in f.poly.variables():
            return f
        return atom(_rename_var(f.poly, old, new), f.op)
    if isinstance(f, RootCmp):
        if old not in f.poly.variables() and f.var != old:
            return f
        var = new if f.var == old else f.var
        p = _rename_var(f.poly, old, new) if old in f.poly.variables() else f.poly
        return RootCmp(var, f.op, f.index, p)
    if isinstance(f, And):
        return And([_substitute_var(a, old, new) for a in f.args])
    if isinstance(f, Or):
        return Or([_substitute_var(a, old, new) for a in f.args])
    if isinstance(f, Not):
        return Not(_substitute_var(f.arg, old, new))
    if isinstance(f, (Exists, Forall)):
        if f.var == old:
            return f
        body = _substitute_var(f.body, old, new)
        return Exists(f.var, body) if isinstance(f, Exists) else Forall(f.var, body)
    return f


def to_prenex(f: Formula) -> PrenexForm:
    """Equivalent prenex form; clashing bound variables are renamed apart
    before quantifiers are hoisted, so no capture can occur."""
    taken: set = set()

    def note(g):
        if isinstance(g, (Atom, RootCmp)):
            taken.update(g.poly.order.names)
        elif isinstance(g, (And, Or)):
            for a in g.args:
                note(a)
        elif isinstance(g, Not):
            note(g.arg)
        elif isinstance(g, (Exists, Forall)):
            taken.add(g.var)
            note(g.body)

    note(f)

    def fresh(v: str) -> str:
        cand = v + "_"
        while cand in taken:
            cand += "_"
        taken.add(cand)
        return cand

    bound_seen: set = set()

    def rename_apart(g: Formula) -> Formula:
        if isinstance(g, (Exists, Forall)):
            v, body = g.var, g.body
            if v in bound_seen:
                nv = fresh(v)
                body = _substitute_var(body, v, nv)
                v = nv
            bound_seen.add(v)
            body = rename_apart(body)
            return Exists(v, body) if isinstance(g, Exists) else Forall(v, body)
        if isinstance(g, And):
            return And([rename_apart(a) for a in g.args])
        if isinstance(g, Or):
            return Or([rename_apart(a) for a in g.args])
        if isinstance(g, Not):
            return Not(rename_apart(g.arg))
        return g

    bound_seen.update(free_vars(f))
    g = rename_apart(f)

    def hoist(g: Formula) -> Tuple[list, Formula]:
        if isinstance(g, Exists):
            pre, mat = hoist(g.body)
            return [("E", g.var)] + pre, mat
        if isinstance(g, Forall):
            pre, mat = hoist(g.body)
            return [("A", g.var)] + pre, mat
        if isinstance(g, Not):
            pre, mat = hoist(g.arg)
            flipped = [("A" if q == "E" else "E", v) for q, v in pre]
            return flipped, Not(mat)
        if isinstance(g, (And, Or)):
            prefix: list = []
            mats: list = []
            for a in g.args:
                pre, mat = hoist(a)
                prefix.extend(pre)
                mats.append(mat)
            node = And(mats) if isinstance(g, And) else Or(mats)
            return prefix, node
        return [], g

    pre, mat = hoist(g)
    names = [v for _, v in pre]
    if len(names) != len(set(names)):
        raise UsageError("prenex prefix has duplicate variables")
    return PrenexForm(tuple(pre), mat)


# ---- evaluation ----

@dataclass(frozen=True)
class GridSpec:
    """Bounded search grid for quantifier evaluation: lo + k*step up to hi."""
    lo: Fraction
    hi: Fraction
    step: Fraction

    def points(self):
        x = Fraction(self.lo)
        while x <= self.hi:
            yield x
            x += self.step


def eval_at(f: Formula, point: Mapping[str, Fraction],
            grid: Optional[GridSpec] = None) -> bool:
    """Exact truth at a rational point. Quantifier-free input is decided
    exactly; quantifiers need a grid and are only a bounded search (a
    semi-decision, documented as such)."""
    pt = {k: Fraction(v) for k, v in point.items()}
    return _eval(f, pt, grid)


def _eval(f: Formula, pt: dict, grid: Optional[GridSpec]) -> bool:
    if f is TRUE:
        return True
    if f is FALSE:
        return False
    if isinstance(f, Atom):
        need = f.poly.variables()
        missing = [v for v in need if v not in pt]
        if missing:
            raise UsageError("unassigned variables %s" % ", ".join(missing))
        val = f.poly.eval_frac({v: pt[v] for v in need})
        return _sign_ok((val > 0) - (val < 0), f.op)
    if isinstance(f, RootCmp):
        return _eval_rootcmp(f, pt)
    if isinstance(f, And):
        return all(_eval(a, pt, grid) for a in f.args)
    if isinstance(f, Or):
        return any(_eval(a, pt, grid) for a in f.args)
    if isinstance(f, Not):
        return not _eval(f.arg, pt, grid)
    if isinstance(f, (Exists, Forall)):
        if grid is None:
            raise UsageError("quantified evaluation needs a search grid")
        vals = []
        for x in grid.points():
            sub = dict(pt)
            sub[f.var] = x
            vals.append(_eval(f.body, sub, grid))
            if isinstance(f, Exists) and vals[-1]:
                return True
            if isinstance(f, Forall) and not vals[-1]:
                return False
        return False if isinstance(f, Exists) else True
    raise UsageError("cannot evaluate %r" % (f,))


def _eval_rootcmp(f: RootCmp, pt: dict) -> bool:
    missing = [v for v in f.poly.variables() if v != f.var and v not in pt]
    if missing:
        raise UsageError("unassigned variables %s" % ", ".join(missing))
    if f.var not in pt:
        raise UsageError("unassigned variable %s" % f.var)
    others = {v: pt[v] for v in f.poly.variables() if v != f.var}
    q = f.poly.subs(others)
    if q.is_zero() or q.degree(f.var) < 1:
        return False
    roots = isolate_roots(q)
    if len(roots) < f.index:
        return False
    target = roots[f.index - 1]
    c = compare(RealAlgebraic.from_rational(pt[f.var]), target)
    return _sign_ok(c, f.op)


# ---- sampling oracle ----

def mixed_sampler(names: Sequence[str], seed: int, lo: Fraction = Fraction(-10),
                  hi: Fraction = Fraction(10),
                  bias_formulas: Sequence[Formula] = ()) -> Callable[[], dict]:
    """Seeded point sampler: 70% uniform rationals in the box, 30% points
    within 1/100 of some atom's zero set (boundary bias)."""
    rng = random.Random(seed)
    lo = Fraction(lo)
    hi = Fraction(hi)
    atoms: List[Poly] = []
    for f in bias_formulas:
        atoms.extend(_collect_polys(f))

    def uniform() -> Fraction:
        den = rng.choice((16, 64, 256, 1024))
        span = (hi - lo) * den
        k = rng.randint(0, span.numerator // span.denominator)
        return lo + Fraction(k, den)

    def sample() -> dict:
        pt = {v: uniform() for v in names}
        if atoms and rng.random() < 0.3:
            p = rng.choice(atoms)
            cand = [v for v in p.variables() if v in names]
            if cand:
                v = rng.choice(cand)
                others = {u: pt[u] for u in p.variables() if u != v}
                q = p.subs(others)
                if not q.is_zero() and q.degree(v) >= 1:
                    roots = isolate_roots(q)
                    if roots:
                        r = rng.choice(roots)
                        off = Fraction(rng.randint(-100, 100), 10000)
                        pt[v] = r.approx(Fraction(1, 1000)) + off
        return pt

    return sample


def _collect_polys(f: Formula) -> List[Poly]:
    if isinstance(f, (Atom, RootCmp)):
        return [f.poly]
    if isinstance(f, (And, Or)):
        out: List[Poly] = []
        for a in f.args:
            out.extend(_collect_polys(a))
        return out
    if isinstance(f, Not):
        return _collect_polys(f.arg)
    if isinstance(f, (Exists, Forall)):
        return _collect_polys(f.body)
    return []


def sample_equivalent(f: Formula, g: Formula, sampler: Callable[[], dict],
                      n: int) -> tuple:
    """Draw n points; report ('counterexample', point) at the first
    disagreement, else ('no-counterexample', n)."""
    if not is_quantifier_free(f) or not is_quantifier_free(g):
        raise UsageError("sample_equivalent needs quantifier-free formulas")
    if set(free_vars(f)) != set(free_vars(g)):
        raise UsageError("free variables differ: %s vs %s" % (free_vars(f), free_vars(g)))
    for _ in range(n):
        pt = sampler()
        if _eval(f, pt, None) != _eval(g, pt, None):
            return ("counterexample", pt)
    return ("no-counterexample", n)


# ---- canonical printer ----

def _frac_text(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d" % (x.numerator, x.denominator)


def _atom_text(f: Atom) -> str:
    return "%s %s 0" % (f.poly, f.op)


def _root_term_text(f: RootCmp) -> str:
    bases = [v for v in f.poly.variables() if v != f.var]
    inside = "%s, %s" % (f.poly, ", ".join(bases)) if bases else str(f.poly)
    return "root_%d(%s)" % (f.index, inside)


def _rootcmp_text(f: RootCmp) -> str:
    if f.op in (">", ">="):
        flipped = _MIRROR[f.op]
        return "%s %s %s" % (_root_term_text(f), flipped, f.var)
    return "%s %s %s" % (f.var, f.op, _root_term_text(f))


def _body_text(f: Formula) -> str:
    if f is TRUE:
        return "true"
    if f is FALSE:
        return "false"
    if isinstance(f, Atom):
        return _atom_text(f)
    if isinstance(f, RootCmp):
        return _rootcmp_text(f)
    if isinstance(f, And):
        return " /\\ ".join(_wrap(a) for a in f.args)
    if isinstance(f, Or):
        return " \\/ ".join(_wrap(a) for a in f.args)
    if isinstance(f, Not):
        return "~%s" % _always_wrap(f.arg)
    if isinstance(f, Exists):
        return "(E %s)%s" % (f.var, _always_wrap(f.body))
    if isinstance(f, Forall):
        return "(A %s)%s" % (f.var, _always_wrap(f.body))
    raise UsageError("cannot print %r" % (f,))


def _wrap(f: Formula) -> str:
    if isinstance(f, (And, Or, Not, Exists, Forall)):
        return "[%s]" % _body_text(f)
    return _body_text(f)


def _always_wrap(f: Formula) -> str:
    return "[%s]" % _body_text(f)


def formula_text(f: Formula, order: Optional[VarOrder] = None) -> str:
    """Canonical text with a variable declaration header; bit-stable."""
    if order is None:
        order = formula_order(f)
    if order is None:
        return "vars . %s" % _body_text(f)
    return "vars %s. %s" % (", ".join(order.names), _body_text(f))


# ---- parser ----

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<imp>==>)
  | (?P<and>/\\)
  | (?P<or>\\/)
  | (?P<neq>/=)
  | (?P<le><=)
  | (?P<ge>>=)
  | (?P<num>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<ch>[().,\[\]~=<>+\-*^/])
""", re.VERBOSE)

_KEYWORDS = {"vars", "true", "false", "E", "A"}


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.toks: List[Tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if m is None:
                raise UsageError("syntax error at offset %d: %r" % (pos, text[pos:pos + 10]))
            kind = m.lastgroup
            if kind != "ws":
                val = m.group()
                if kind == "ch":
                    kind = val
                self.toks.append((kind, val, pos))
            pos = m.end()
        self.toks.append(("eof", "", len(text)))
        self.i = 0

    def peek(self, ahead: int = 0) -> Tuple[str, str, int]:
        j = min(self.i + ahead, len(self.toks) - 1)
        return self.toks[j]

    def next(self) -> Tuple[str, str, int]:
        t = self.toks[self.i]
        if t[0] != "eof":
            self.i += 1
        return t

    def expect(self, kind: str) -> Tuple[str, str, int]:
        t = self.next()
        if t[0] != kind:
            raise UsageError("expected %r at offset %d, got %r" % (kind, t[2], t[1]))
        return t

    def accept(self, kind: str) -> bool:
        if self.peek()[0] == kind:
            self.next()
            return True
        return False


class _RootTerm:
    def __init__(self, index: int, poly: Poly):
        self.index = index
        self.poly = poly


class _Parser:
    def __init__(self, text: str, order: Optional[VarOrder]):
        self.ts = _Tokens(text)
        self.order = order
        if self.ts.peek()[0] == "name" and self.ts.peek()[1] == "vars":
            self.ts.next()
            names = []
            if self.ts.peek()[0] == "name":
                names.append(self.ts.expect("name")[1])
                while self.ts.accept(","):
                    names.append(self.ts.expect("name")[1])
            self.ts.expect(".")
            self.order = VarOrder(names)
        if self.order is None:
            raise UsageError("no variable declaration and no explicit order")

    def parse(self) -> Formula:
        f = self.implication()
        t = self.ts.peek()
        if t[0] != "eof":
            raise UsageError("trailing input at offset %d: %r" % (t[2], t[1]))
        return f

    def implication(self) -> Formula:
        lhs = self.disjunction()
        if self.ts.accept("imp"):
            rhs = self.implication()
            return disj([negate_nnf(lhs) if is_quantifier_free(lhs) else Not(lhs), rhs])
        return lhs

    def disjunction(self) -> Formula:
        parts = [self.conjunction()]
        while self.ts.accept("or"):
            parts.append(self.conjunction())
        return disj(parts) if len(parts) > 1 else parts[0]

    def conjunction(self) -> Formula:
        parts = [self.unary()]
        while self.ts.accept("and"):
            parts.append(self.unary())
        return conj(parts) if len(parts) > 1 else parts[0]

    def unary(self) -> Formula:
        t = self.ts.peek()
        if t[0] == "~":
            self.ts.next()
            return Not(self.unary())
        if t[0] == "(" and self.ts.peek(1)[1] in ("E", "A") and self.ts.peek(2)[0] == "name" \
                and self.ts.peek(3)[0] == ")":
            self.ts.next()
            q = self.ts.next()[1]
            v = self.ts.expect("name")[1]
            self.ts.expect(")")
            body = self.unary()
            return Exists(v, body) if q == "E" else Forall(v, body)
        if t[0] == "[":
            self.ts.next()
            f = self.implication()
            self.ts.expect("]")
            return f
        if t[0] == "name" and t[1] == "true":
            self.ts.next()
            return TRUE
        if t[0] == "name" and t[1] == "false":
            self.ts.next()
            return FALSE
        return self.atom()

    def atom(self) -> Formula:
        lhs = self.side()
        t = self.ts.next()
        if t[0] not in ("=", "neq", "<", "le", ">", "ge"):
            raise UsageError("expected a relational operator at offset %d, got %r" % (t[2], t[1]))
        op = {"=": "=", "neq": "/=", "<": "<", "le": "<=", ">": ">", "ge": ">="}[t[0]]
        rhs = self.side()
        if isinstance(lhs, _RootTerm) and isinstance(rhs, _RootTerm):
            raise UsageError("cannot compare two root terms")
        if isinstance(lhs, _RootTerm):
            var = self._plain_var(rhs)
            return RootCmp(var, _MIRROR[op], lhs.index, lhs.poly)
        if isinstance(rhs, _RootTerm):
            var = self._plain_var(lhs)
            return RootCmp(var, op, rhs.index, rhs.poly)
        return atom(lhs - rhs, op)

    def _plain_var(self, p) -> str:
        if isinstance(p, _RootTerm) or len(p.variables()) != 1:
            raise UsageError("a root term compares against a plain variable")
        v = p.variables()[0]
        if p != Poly.var(self.order, v):
            raise UsageError("a root term compares against a plain variable")
        return v

    def side(self):
        t = self.ts.peek()
        if t[0] == "name" and re.fullmatch(r"root_\d+", t[1]) and self.ts.peek(1)[0] == "(":
            self.ts.next()
            index = int(t[1][5:])
            self.ts.expect("(")
            p = self.expr()
            while self.ts.accept(","):
                self.ts.expect("name")  # base variables, informational
            self.ts.expect(")")
            return _RootTerm(index, p)
        return self.expr()

    def expr(self) -> Poly:
        p = self.term()
        while True:
            t = self.ts.peek()
            if t[0] == "+":
                self.ts.next()
                p = p + self.term()
            elif t[0] == "-":
                self.ts.next()
                p = p - self.term()
            else:
                return p

    def term(self) -> Poly:
        p = self.factor()
        while self.ts.peek()[0] == "*":
            self.ts.next()
            p = p * self.factor()
        return p

    def factor(self) -> Poly:
        neg = False
        while self.ts.peek()[0] == "-":
            self.ts.next()
            neg = not neg
        p = self.primary()
        if self.ts.peek()[0] == "^":
            self.ts.next()
            e = int(self.ts.expect("num")[1])
            p = p ** e
        return -p if neg else p

    def primary(self) -> Poly:
        t = self.ts.next()
        if t[0] == "num":
            num = int(t[1])
            if self.ts.peek()[0] == "/" and self.ts.peek(1)[0] == "num":
                self.ts.next()
                den = int(self.ts.expect("num")[1])
                return Poly.const(self.order, Fraction(num, den))
            return Poly.const(self.order, num)
        if t[0] == "name":
            if t[1] in _KEYWORDS:
                raise UsageError("unexpected keyword %r at offset %d" % (t[1], t[2]))
            if t[1] not in self.order:
                raise UsageError("unknown variable %r at offset %d" % (t[1], t[2]))
            return Poly.var(self.order, t[1])
        if t[0] == "(":
            p = self.expr()
            self.ts.expect(")")
            return p
        raise UsageError("unexpected token %r at offset %d" % (t[1], t[2]))


def parse(text: str, order: Optional[VarOrder] = None) -> Formula:
    """Parse a formula document; a `vars ...` header declares the variable
    order, otherwise an explicit order is required."""
    return _Parser(text, order).parse()
