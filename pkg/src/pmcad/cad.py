"""Lifting phase: full, layered, manifold, and partial CADs, truth
evaluation, and quantifier elimination.

A cell is addressed by its Collins index: one positive integer per lifted
level, odd for sectors and even for sections, so the index prefix of length
k names the base cell in the induced lower CAD and the dimension is the
number of odd entries.
"""

import functools
import math
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .errors import (
    NullificationError,
    PmcadError,
    ResourceLimitError,
    UsageError,
    WellOrientednessError,
)
from .formula import (
    FALSE,
    TRUE,
    And,
    Atom,
    Formula,
    Not,
    Or,
    PrenexForm,
    RootCmp,
    atom,
    conj,
    disj,
    is_quantifier_free,
    to_prenex,
)
from .polynomial import Poly, VarOrder, try_div
from .projection import ProjectionSequence, project_all
from .realalg import RealAlgebraic, SamplePoint, compare, roots_over, sign_at

__all__ = [
    "CADOptions",
    "QEOptions",
    "Cell",
    "CADTree",
    "build_cad",
    "truth_evaluate",
    "partial_truth_lift",
    "qe",
    "qe_detailed",
]


@dataclass
class CADOptions:
    """Lifting controls.  layered keeps only cells whose dimension can still
    reach the threshold; manifold keeps only top-level sections of the
    projection's equational constraint."""

    layered: Optional[int] = None
    manifold: bool = False
    max_cells: Optional[int] = 1_000_000
    max_seconds: Optional[float] = 600.0
    threads: int = 1
    tolerate_nullification: bool = False


@dataclass
class QEOptions(CADOptions):
    """ec: "auto" picks a conjoined equation in the top variable when the
    innermost quantifier is existential; None disables the reduced route; an
    explicit Poly forces it.  partial short-circuits quantified stacks."""

    ec: Union[str, Poly, None] = "auto"
    partial: bool = True


@dataclass
class Cell:
    index: tuple
    dim: int
    sample: SamplePoint
    signs: dict
    defining: tuple
    truth: Optional[bool] = None
    children: tuple = ()

    def level(self) -> int:
        return len(self.index)


@dataclass
class CADTree:
    order: VarOrder
    seq: ProjectionSequence
    options: CADOptions
    root: Cell
    notes: tuple = ()

    def all_cells(self):
        stack = list(reversed(self.root.children))
        while stack:
            c = stack.pop()
            yield c
            stack.extend(reversed(c.children))

    def leaves(self) -> list:
        return [c for c in self.all_cells() if not c.children]

    def cells_at_level(self, k: int) -> list:
        return [c for c in self.all_cells() if len(c.index) == k]

    @property
    def cell_count(self) -> int:
        return len(self.leaves())

    def cell_at(self, index: tuple) -> Cell:
        cur = self.root
        for pos in index:
            found = None
            for ch in cur.children:
                if ch.index[-1] == pos:
                    found = ch
                    break
            if found is None:
                raise UsageError("no cell with index %s" % (index,))
            cur = found
        return cur

    def locate(self, values) -> Cell:
        """Cell containing a point with the given rational coordinates;
        descends as far as the tree was lifted.

        Stack samples are roots over the base cell's own sample, so the
        query's stack position is recomputed from the level factors over the
        query prefix: delineability keeps section counts and order constant
        across each cell."""
        vals = [Fraction(v) for v in values]
        if len(vals) > len(self.order):
            raise UsageError("more coordinates than variables")
        levels = self.seq.bottom_up()
        cur = self.root
        for k, q in enumerate(vals):
            if not cur.children:
                break
            v = self.order.names[k]
            pt = SamplePoint.of_rationals(self.order, vals[:k])
            roots: list = []
            for f in levels[k].factors:
                try:
                    roots.extend(roots_over(f, pt, v))
                except NullificationError:
                    continue
            roots.sort(key=_RootKey)
            qr = RealAlgebraic.from_rational(q, v)
            pos = None
            rank = 0
            prev = None
            for r in roots:
                if prev is not None and compare(prev, r) == 0:
                    continue
                prev = r
                c = compare(qr, r)
                if c == 0:
                    pos = 2 * (rank + 1)
                    break
                if c < 0:
                    break
                rank += 1
            if pos is None:
                pos = 2 * rank + 1
            nxt = None
            for ch in cur.children:
                if ch.index[-1] == pos:
                    nxt = ch
                    break
            if nxt is None:
                raise UsageError(
                    "point %s falls in a cell pruned from this tree" % (vals,)
                )
            cur = nxt
        return cur


_RootKey = functools.cmp_to_key(compare)


def _op_ok(s: int, op: str) -> bool:
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


class _Lift:
    """Stack construction engine with budgets, merge hints, and a shared
    factor-sign memo; safe for concurrent stacks over distinct bases."""

    def __init__(self, seq: ProjectionSequence, opts: CADOptions):
        self.seq = seq
        self.order = seq.order
        self.n = len(seq.order)
        self.opts = opts
        self.levels = seq.bottom_up()
        self.count = 0
        self.lock = threading.Lock()
        self.deadline = (
            time.monotonic() + opts.max_seconds if opts.max_seconds is not None else None
        )
        self.ec_sections_top = False
        self._pairmaps = [
            {(i, j): r for i, j, r in lev.pair_res} for lev in self.levels
        ]
        self._hints: dict = {}
        self.notes: list = []

    def _budget(self, added: int) -> None:
        with self.lock:
            self.count += added
            cur = self.count
        if self.opts.max_cells is not None and cur > self.opts.max_cells:
            raise ResourceLimitError("cell budget exceeded", cells=cur)
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise ResourceLimitError(
                "time budget exceeded", seconds=self.opts.max_seconds
            )

    def _hint_distinct(self, base: Cell, li: int, fi: int, fj: int) -> bool:
        a, b = (fi, fj) if fi < fj else (fj, fi)
        res = self._pairmaps[li - 1].get((a, b))
        if res is None:
            return False
        key = (li, base.index, a, b)
        with self.lock:
            if key in self._hints:
                return self._hints[key]
        val = sign_at(res, base.sample) != 0
        with self.lock:
            self._hints[key] = val
        return val

    def _merge(self, entries: list, base: Cell, li: int) -> list:
        """Sort roots of all level factors into sections, grouping equal
        values; nonzero pairwise resultants certify distinctness cheaply."""
        merged: list = []
        for r, fi, ki in entries:
            lo, hi = 0, len(merged)
            hit = None
            while lo < hi:
                mid = (lo + hi) // 2
                distinct = False
                for fj, _ in merged[mid][1]:
                    if fj == fi or self._hint_distinct(base, li, fi, fj):
                        distinct = True
                        break
                c = compare(r, merged[mid][0], known_distinct=distinct)
                if c == 0:
                    hit = mid
                    break
                if c < 0:
                    hi = mid
                else:
                    lo = mid + 1
            if hit is None:
                merged.insert(lo, [r, [(fi, ki)]])
            else:
                merged[hit][1].append((fi, ki))
        for slot in merged:
            slot[1].sort()
        return merged

    def _sector_samples(self, sections: list) -> list:
        refined = separate_roots([slot[0] for slot in sections])
        for slot, r in zip(sections, refined):
            slot[0] = r
        return gap_points(refined)

    def stack(self, base: Cell, li: int, ec_only: bool = False) -> list:
        lev = self.levels[li - 1]
        v = lev.var
        factors = lev.factors
        nullified = set()
        entries = []
        for fi, f in enumerate(factors):
            try:
                rs = roots_over(f, base.sample, v)
            except NullificationError:
                if base.dim > 0:
                    # With every coefficient in the lower-level factor pool
                    # and the base sign-invariant, a specialization that is
                    # the zero polynomial at the sample is zero over the
                    # whole cell, so the factor has sign 0 on the cylinder
                    # and contributes no sections.  Delineability of deeper
                    # levels is no longer certified, which is why this path
                    # is opt-in; callers must validate the result.
                    if not self.opts.tolerate_nullification:
                        raise WellOrientednessError(
                            "factor %s vanishes identically over the "
                            "positive-dimensional cell %s; a different "
                            "variable order may avoid this"
                            % (f, base.index)
                        )
                    with self.lock:
                        self.notes.append(
                            "level %d factor %s treated as identically zero "
                            "over cell %s" % (li, f, base.index)
                        )
                nullified.add(fi)
                rs = []
            for ki, r in enumerate(rs, 1):
                entries.append((r, fi, ki))
        if ec_only and lev.ec_index in nullified:
            # The constraint vanishes on the whole fiber line, so its
            # sections are the full stack.
            ec_only = False
        sections = self._merge(entries, base, li)
        gaps = self._sector_samples(sections)
        sec_signs = []
        for g in gaps:
            pt = base.sample.extended(RealAlgebraic.from_rational(g, v))
            row = {}
            for fi, f in enumerate(factors):
                row[fi] = 0 if fi in nullified else sign_at(f, pt)
            sec_signs.append(row)
        m = len(sections)
        out = []
        for pos in range(1, 2 * m + 2):
            if pos % 2 == 1:
                si = (pos - 1) // 2
                dim = base.dim + 1
                if self.opts.layered is not None and dim + (self.n - li) < self.opts.layered:
                    continue
                if ec_only:
                    continue
                coord = RealAlgebraic.from_rational(gaps[si], v)
                below = sections[si - 1][1][0] if si > 0 else None
                above = sections[si][1][0] if si < m else None
                desc = ("sector", below, above)
                signs = dict(base.signs)
                for fi, f in enumerate(factors):
                    signs[f] = sec_signs[si][fi]
            else:
                si = pos // 2 - 1
                dim = base.dim
                if self.opts.layered is not None and dim + (self.n - li) < self.opts.layered:
                    continue
                attrs = tuple(sections[si][1])
                if ec_only and lev.ec_index not in {fi for fi, _ in attrs}:
                    continue
                coord = sections[si][0]
                desc = ("section", attrs)
                att = {fi for fi, _ in attrs}
                signs = dict(base.signs)
                for fi, f in enumerate(factors):
                    signs[f] = 0 if (fi in att or fi in nullified) else sec_signs[si][fi]
            out.append(
                Cell(
                    index=base.index + (pos,),
                    dim=dim,
                    sample=base.sample.extended(coord),
                    signs=signs,
                    defining=base.defining + (desc,),
                )
            )
        self._budget(len(out))
        return out

    def lift_level(self, frontier: list, li: int, ec_only: bool = False) -> list:
        def work(b):
            return self.stack(b, li, ec_only=ec_only)

        if self.opts.threads > 1 and len(frontier) > 1:
            with ThreadPoolExecutor(max_workers=self.opts.threads) as ex:
                results = list(ex.map(work, frontier))
        else:
            results = [work(b) for b in frontier]
        nxt = []
        for b, cs in zip(frontier, results):
            b.children = tuple(cs)
            nxt.extend(cs)
        return nxt


def _half_width(r: RealAlgebraic) -> Fraction:
    lo, hi = r.bounds()
    return (hi - lo) / 2 if hi > lo else Fraction(1, 4)


def separate_roots(roots: list) -> list:
    """Refine an ascending list of roots until consecutive isolating
    brackets are disjoint (touching endpoints allowed when neither root sits
    on the shared endpoint).  Returns the refined roots."""
    out = list(roots)
    for i in range(len(out) - 1):
        a = out[i]
        b = out[i + 1]
        while True:
            ahi = a.bounds()[1]
            blo = b.bounds()[0]
            if ahi < blo:
                break
            if ahi == blo and not a.is_value(ahi) and not b.is_value(blo):
                break
            a = a.refine(_half_width(a))
            b = b.refine(_half_width(b))
        out[i] = a
        out[i + 1] = b
    return out


def gap_points(roots: list) -> list:
    """One rational strictly inside each gap of a separated ascending root
    list, including the unbounded outer gaps; len(roots) + 1 entries."""
    if not roots:
        return [Fraction(0)]
    bound = Fraction(0)
    for r in roots:
        lo, hi = r.bounds()
        bound = max(bound, abs(lo), abs(hi))
    big = 1 + math.ceil(bound)
    out = [Fraction(-big)]
    for a, b in zip(roots, roots[1:]):
        out.append(Fraction(a.bounds()[1] + b.bounds()[0]) / 2)
    out.append(Fraction(big))
    return out


def _root_cell(order: VarOrder) -> Cell:
    return Cell(index=(), dim=0, sample=SamplePoint(order, ()), signs={}, defining=())


def build_cad(seq: ProjectionSequence, opts: Optional[CADOptions] = None) -> CADTree:
    """Lift a projection sequence into a sign-invariant CAD."""
    opts = opts if opts is not None else CADOptions()
    if opts.manifold and seq.levels[0].ec_index is None:
        raise UsageError(
            "manifold lifting requires a projection built with an equational constraint"
        )
    lift = _Lift(seq, opts)
    root = _root_cell(seq.order)
    frontier = [root]
    for li in range(1, lift.n + 1):
        ec_only = opts.manifold and li == lift.n
        frontier = lift.lift_level(frontier, li, ec_only=ec_only)
    return CADTree(order=seq.order, seq=seq, options=opts, root=root,
                   notes=tuple(lift.notes))


# ---- truth evaluation ----

def _check_atoms_only(f: Formula) -> None:
    if f is TRUE or f is FALSE or isinstance(f, Atom):
        return
    if isinstance(f, (And, Or)):
        for a in f.args:
            _check_atoms_only(a)
        return
    if isinstance(f, Not):
        _check_atoms_only(f.arg)
        return
    raise UsageError("truth evaluation handles sign atoms only, got %r" % (f,))


def _atom_sign(p: Poly, cell: Cell, memo: dict) -> int:
    """Sign of p on the cell: factor out recorded projection factors, fall
    back to exact evaluation at the sample."""
    key = (p, cell.index)
    if key in memo:
        return memo[key]
    c, rem = p.primitive_rat()
    s = 1 if c > 0 else -1
    zero = False
    for f, fs in cell.signs.items():
        while True:
            q = try_div(rem, f)
            if q is None:
                break
            rem = q
            if fs == 0:
                zero = True
            else:
                s *= fs
        if rem.is_constant():
            break
    if rem.is_constant():
        cv = rem.constant_value()
        s *= 1 if cv > 0 else -1
        val = 0 if zero else s
    else:
        if not set(p.variables()) <= set(cell.sample.names()):
            raise UsageError(
                "cell sample does not cover the variables of %s" % p
            )
        val = sign_at(p, cell.sample)
    memo[key] = val
    return val


def _eval_qf(f: Formula, cell: Cell, memo: dict) -> bool:
    if f is TRUE:
        return True
    if f is FALSE:
        return False
    if isinstance(f, Atom):
        return _op_ok(_atom_sign(f.poly, cell, memo), f.op)
    if isinstance(f, And):
        return all(_eval_qf(a, cell, memo) for a in f.args)
    if isinstance(f, Or):
        return any(_eval_qf(a, cell, memo) for a in f.args)
    if isinstance(f, Not):
        return not _eval_qf(f.arg, cell, memo)
    raise UsageError("not a sign-atom formula: %r" % (f,))


def truth_evaluate(cad: CADTree, matrix: Formula) -> CADTree:
    """Assign the matrix truth value to every leaf; sign-invariance makes
    the sample's answer valid cell-wide."""
    if not is_quantifier_free(matrix):
        raise UsageError("matrix must be quantifier-free")
    _check_atoms_only(matrix)
    memo: dict = {}
    for leaf in cad.leaves():
        leaf.truth = _eval_qf(matrix, leaf, memo)
    return cad


# ---- partial lifting and quantifier elimination ----

def _validate_block(prenex: PrenexForm, order: VarOrder) -> int:
    qvars = [v for _, v in prenex.prefix]
    n = len(order)
    n_free = n - len(qvars)
    if n_free < 0 or list(order.names[n_free:]) != qvars:
        raise UsageError(
            "quantified variables must form the innermost block of the order, "
            "outermost quantifier lowest: expected %s, got %s"
            % (", ".join(order.names), ", ".join(qvars))
        )
    return n_free


def _lift_prenex(lift: _Lift, prenex: PrenexForm) -> CADTree:
    if not is_quantifier_free(prenex.matrix):
        raise UsageError("prenex matrix must be quantifier-free")
    _check_atoms_only(prenex.matrix)
    order = lift.order
    n = lift.n
    n_free = _validate_block(prenex, order)
    matrix = prenex.matrix
    root = _root_cell(order)
    frontier = [root]
    for li in range(1, n_free + 1):
        frontier = lift.lift_level(frontier, li)

    def decide(base: Cell, li: int, memo: dict) -> bool:
        if li > n:
            return _eval_qf(matrix, base, memo)
        quant = prenex.prefix[li - n_free - 1][0]
        ec_only = li == n and lift.ec_sections_top and quant == "E"
        children = lift.stack(base, li, ec_only=ec_only)
        base.children = tuple(children)
        if quant == "E":
            result = False
            for c in children:
                t = decide(c, li + 1, memo)
                c.truth = t
                if t:
                    result = True
                    break
        else:
            result = True
            for c in children:
                t = decide(c, li + 1, memo)
                c.truth = t
                if not t:
                    result = False
                    break
        return result

    def run(leaf: Cell) -> bool:
        return decide(leaf, n_free + 1, {})

    if n_free == 0:
        root.truth = run(root)
    elif lift.opts.threads > 1 and len(frontier) > 1:
        with ThreadPoolExecutor(max_workers=lift.opts.threads) as ex:
            for leaf, t in zip(frontier, ex.map(run, frontier)):
                leaf.truth = t
    else:
        for leaf in frontier:
            leaf.truth = run(leaf)
    return CADTree(order=order, seq=lift.seq, options=lift.opts, root=root,
                   notes=tuple(lift.notes))


def partial_truth_lift(
    seq: ProjectionSequence, prenex: PrenexForm, opts: Optional[CADOptions] = None
) -> CADTree:
    """Lift with quantifier short-circuiting: below the free block, a stack
    stops as soon as its block's truth is decided."""
    opts = opts if opts is not None else CADOptions()
    return _lift_prenex(_Lift(seq, opts), prenex)


def _fold_quantifiers(tree: CADTree, prenex: PrenexForm, n_free: int) -> None:
    n = len(tree.order)

    def fold(cell: Cell, li: int) -> bool:
        if li > n:
            return bool(cell.truth)
        vals = []
        for c in cell.children:
            t = fold(c, li + 1)
            c.truth = t
            vals.append(t)
        quant = prenex.prefix[li - n_free - 1][0]
        return any(vals) if quant == "E" else all(vals)

    if n_free == 0:
        tree.root.truth = fold(tree.root, 1)
    else:
        for cell in tree.cells_at_level(n_free):
            cell.truth = fold(cell, n_free + 1)


def _conjuncts(f: Formula) -> list:
    if isinstance(f, And):
        return list(f.args)
    return [f]


def _collect_polys(f: Formula, out: list) -> None:
    if f is TRUE or f is FALSE:
        return
    if isinstance(f, Atom):
        if f.poly not in out:
            out.append(f.poly)
        return
    if isinstance(f, (And, Or)):
        for a in f.args:
            _collect_polys(a, out)
        return
    if isinstance(f, Not):
        _collect_polys(f.arg, out)
        return
    raise UsageError("quantifier elimination input must use sign atoms only")


def _section_attr(cell: Cell) -> tuple:
    desc = cell.defining[-1]
    return desc[1][0]


def _run_condition(children: list, a: int, b: int, lev, order: VarOrder) -> Formula:
    """Condition selecting stack positions a..b: a validated factor sign
    atom when one matches exactly, else root-index bounds."""
    run = set(range(a, b + 1))
    factors = lev.factors
    cands = [(f, (i,)) for i, f in enumerate(factors)]
    for i in range(len(factors)):
        for j in range(i + 1, len(factors)):
            cands.append((factors[i] * factors[j], (i, j)))
    for p, idxs in cands:
        per = {}
        for c in children:
            s = 1
            for i in idxs:
                s *= c.signs[factors[i]]
            per[c.index[-1]] = s
        for op in ("=", "<=", ">=", "<", ">", "/="):
            if {pos for pos, s in per.items() if _op_ok(s, op)} == run:
                return atom(p, op)
    v = lev.var
    total = len(children)
    if a == b and a % 2 == 0:
        fi, ki = _section_attr(children[a - 1])
        return RootCmp(v, "=", ki, factors[fi])
    parts = []
    if a > 1:
        sp = a if a % 2 == 0 else a - 1
        fi, ki = _section_attr(children[sp - 1])
        parts.append(RootCmp(v, ">=" if a % 2 == 0 else ">", ki, factors[fi]))
    if b < total:
        sp = b if b % 2 == 0 else b + 1
        fi, ki = _section_attr(children[sp - 1])
        parts.append(RootCmp(v, "<=" if b % 2 == 0 else "<", ki, factors[fi]))
    return conj(parts)


def _emit_qff(tree: CADTree, n_free: int) -> Formula:
    levels = tree.seq.bottom_up()
    order = tree.order

    def emit(base: Cell, li: int) -> Formula:
        if li > n_free:
            return TRUE if base.truth else FALSE
        children = list(base.children)
        runs: list = []
        for c in children:
            phi = emit(c, li + 1)
            pos = c.index[-1]
            if runs and runs[-1][1] == pos - 1 and runs[-1][2] == phi:
                runs[-1][1] = pos
            else:
                runs.append([pos, pos, phi])
        live = [r for r in runs if r[2] is not FALSE]
        if not live:
            return FALSE
        if len(runs) == 1:
            return runs[0][2]
        parts = []
        for a, b, phi in live:
            parts.append(conj([_run_condition(children, a, b, levels[li - 1], order), phi]))
        return disj(parts)

    return emit(tree.root, 1)


def _rootcmp_holds(rc: RootCmp, leaf: Cell, tree: CADTree) -> bool:
    li = tree.order.position(rc.var) + 1
    base = tree.cell_at(leaf.index[: li - 1])
    lev = tree.seq.bottom_up()[li - 1]
    try:
        fi = lev.factors.index(rc.poly)
    except ValueError:
        raise UsageError("root atom polynomial %s is not a level factor" % rc.poly)
    sec_pos = None
    for c in base.children:
        if c.index[-1] % 2 == 0 and (fi, rc.index) in c.defining[-1][1]:
            sec_pos = c.index[-1]
            break
    if sec_pos is None:
        return False
    p = leaf.index[li - 1]
    return _op_ok((p > sec_pos) - (p < sec_pos), rc.op)


def _eval_emitted(f: Formula, leaf: Cell, tree: CADTree, memo: dict) -> bool:
    if f is TRUE:
        return True
    if f is FALSE:
        return False
    if isinstance(f, Atom):
        return _op_ok(_atom_sign(f.poly, leaf, memo), f.op)
    if isinstance(f, RootCmp):
        return _rootcmp_holds(f, leaf, tree)
    if isinstance(f, And):
        return all(_eval_emitted(a, leaf, tree, memo) for a in f.args)
    if isinstance(f, Or):
        return any(_eval_emitted(a, leaf, tree, memo) for a in f.args)
    if isinstance(f, Not):
        return not _eval_emitted(f.arg, leaf, tree, memo)
    raise PmcadError("unexpected node in emitted formula: %r" % (f,))


def _variants(f: Formula):
    """All formulas obtained by deleting one argument of one And/Or node."""
    if isinstance(f, (And, Or)):
        ctor = conj if isinstance(f, And) else disj
        args = list(f.args)
        for i in range(len(args)):
            yield ctor(args[:i] + args[i + 1 :])
        for i in range(len(args)):
            for sub in _variants(args[i]):
                yield ctor(args[:i] + [sub] + args[i + 1 :])
    elif isinstance(f, Not):
        for sub in _variants(f.arg):
            yield Not(sub) if sub not in (TRUE, FALSE) else (FALSE if sub is TRUE else TRUE)


def _greedy_drop(f: Formula, tree: CADTree, n_free: int) -> Formula:
    leaves = tree.cells_at_level(n_free)
    memo: dict = {}

    def matches(g: Formula) -> bool:
        return all(
            _eval_emitted(g, leaf, tree, memo) == bool(leaf.truth) for leaf in leaves
        )

    changed = True
    while changed:
        changed = False
        for g in _variants(f):
            if _size(g) < _size(f) and matches(g):
                f = g
                changed = True
                break
    return f


def _size(f: Formula) -> int:
    if isinstance(f, (And, Or)):
        return 1 + sum(_size(a) for a in f.args)
    if isinstance(f, Not):
        return 1 + _size(f.arg)
    return 1


def _restrict_formula(f: Formula, sub: VarOrder) -> Formula:
    """Rebuild the emitted formula over the free-variable order; emission only
    ever uses polynomials free of the quantified block, so truncating the
    exponent tuples is exact."""
    k = len(sub)

    def rp(p: Poly) -> Poly:
        terms = {}
        for e, c in p.terms.items():
            if any(e[k:]):
                raise PmcadError("free-variable restriction hit %s" % p)
            terms[e[:k]] = c
        return Poly(sub, terms)

    if f is TRUE or f is FALSE:
        return f
    if isinstance(f, Atom):
        return Atom(rp(f.poly), f.op)
    if isinstance(f, RootCmp):
        return RootCmp(f.var, f.op, f.index, rp(f.poly))
    if isinstance(f, And):
        return conj([_restrict_formula(a, sub) for a in f.args])
    if isinstance(f, Or):
        return disj([_restrict_formula(a, sub) for a in f.args])
    if isinstance(f, Not):
        return Not(_restrict_formula(f.arg, sub))
    raise PmcadError("unexpected node in emitted formula: %r" % (f,))


def qe_detailed(
    f: Formula, order: VarOrder, opts: Optional[QEOptions] = None
) -> tuple:
    """Eliminate quantifiers; returns (quantifier-free formula, CADTree).
    The tree is None when the input had nothing to eliminate."""
    opts = opts if opts is not None else QEOptions()
    pf = to_prenex(f)
    if not pf.prefix:
        return pf.matrix, None
    n_free = _validate_block(pf, order)
    polys: list = []
    _collect_polys(pf.matrix, polys)
    if not polys:
        tv = pf.matrix
        if tv is TRUE or tv is FALSE:
            return tv, None
        raise UsageError("matrix without atoms must be a constant formula")

    top = order.names[-1]
    inner_quant = pf.prefix[-1][0]
    ec = None
    if isinstance(opts.ec, Poly):
        if inner_quant != "E":
            raise UsageError(
                "an equational constraint needs an innermost existential quantifier"
            )
        ec = opts.ec
    elif opts.ec == "auto" and inner_quant == "E":
        for part in _conjuncts(pf.matrix):
            if isinstance(part, Atom) and part.op == "=" and part.poly.degree(top) >= 1:
                ec = part.poly
                break

    seq = None
    if ec is not None:
        try:
            seq = project_all(polys, order, ec=ec)
        except UsageError:
            if isinstance(opts.ec, Poly):
                raise
            ec = None
    if seq is None:
        seq = project_all(polys, order)
        ec = None

    lift = _Lift(seq, opts)
    lift.ec_sections_top = ec is not None and inner_quant == "E"
    if opts.partial:
        tree = _lift_prenex(lift, pf)
    else:
        root = _root_cell(order)
        frontier = [root]
        for li in range(1, lift.n + 1):
            frontier = lift.lift_level(frontier, li)
        tree = CADTree(order=order, seq=seq, options=opts, root=root,
                       notes=tuple(lift.notes))
        truth_evaluate(tree, pf.matrix)
        _fold_quantifiers(tree, pf, n_free)

    if n_free == 0:
        return (TRUE if tree.root.truth else FALSE), tree
    out = _emit_qff(tree, n_free)
    out = _greedy_drop(out, tree, n_free)
    out = _restrict_formula(out, VarOrder(order.names[:n_free]))
    return out, tree


def qe(f: Formula, order: VarOrder, opts: Optional[QEOptions] = None) -> Formula:
    """Quantifier elimination over the rationals via cylindrical algebraic
    decomposition; quantified variables must be innermost in the order."""
    return qe_detailed(f, order, opts)[0]
