"""Cell adjacency for plane decompositions, and path extraction.

Within one stack, consecutive cells are adjacent.  Across stacks the
boundary behaviour of the curve sections decides everything: each section
over a base sector has a limit on the neighbouring vertical line, and that
limit is matched against the sections of the stack over the line.  All
matching is exact; the only tool is root isolation plus the fact that
projection factors cannot vanish inside a cell.
"""

import functools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .cad import CADTree, gap_points, separate_roots, truth_evaluate, _half_width
from .errors import PathQueryError, PmcadError, UsageError
from .formula import Formula
from .polynomial import Poly, VarOrder
from .realalg import RealAlgebraic, compare, isolate_roots

__all__ = [
    "AdjacencyEdge",
    "AdjacencyGraph2D",
    "PathResult",
    "adjacency_2d",
    "path_query",
]


@dataclass(frozen=True)
class AdjacencyEdge:
    a: tuple
    b: tuple
    boundary: tuple  # the lower-dimensional cell of the pair


@dataclass
class AdjacencyGraph2D:
    tree: CADTree
    edges: tuple

    def __post_init__(self):
        nb: dict = {}
        for e in self.edges:
            nb.setdefault(e.a, []).append(e.b)
            nb.setdefault(e.b, []).append(e.a)
        self._nb = {k: tuple(sorted(v)) for k, v in nb.items()}

    def neighbors(self, index) -> tuple:
        return self._nb.get(tuple(index), ())

    def are_adjacent(self, a, b) -> bool:
        return tuple(b) in self._nb.get(tuple(a), ())


def _rat(r) -> Fraction:
    lo, hi = r.bounds()
    if lo != hi:
        raise PmcadError("expected a rational sample coordinate")
    return lo


def _check_full(cell) -> None:
    poss = [c.index[-1] for c in cell.children]
    if not poss or poss != list(range(1, len(poss) + 1)):
        raise UsageError("adjacency needs a fully lifted tree")


def _clear_of_crossings(
    factors, threads, boundary_x, from_x: Fraction, side: int, xname: str, yname: str
) -> Fraction:
    """Rational x between from_x and the boundary line past every point
    where a factor curve meets one of the horizontal threads; from_x itself
    when no curve does."""
    cross = []
    from_r = RealAlgebraic.from_rational(from_x, xname)
    for f in factors:
        for g in threads:
            q = f.subs({yname: g})
            if q.is_constant():
                continue
            for z in isolate_roots(q):
                if side < 0:
                    if compare(z, from_r) >= 0 and compare(z, boundary_x) < 0:
                        cross.append(z)
                else:
                    if compare(z, boundary_x) > 0 and compare(z, from_r) <= 0:
                        cross.append(z)
    if not cross:
        return from_x
    al = boundary_x
    while True:
        if side < 0:
            m = max(z.bounds()[1] for z in cross)
            lo = al.bounds()[0]
            if m < lo:
                return (m + lo) / 2
        else:
            m = min(z.bounds()[0] for z in cross)
            hi = al.bounds()[1]
            if hi < m:
                return (hi + m) / 2
        cross = [z.refine(_half_width(z)) for z in cross]
        al = al.refine(_half_width(al))


def _limit_positions(tree: CADTree, sector, section) -> tuple:
    """Extended boundary position of every curve section over the base
    sector as its graph approaches the neighbouring vertical line: 0 below
    all sections of the line's stack, 2j at the j-th, 2r+2 above all.

    Sound because no thread between the line's sections is crossed between
    the chosen abscissa and the line, which pins every curve into one band;
    a bounded band forces the limit onto the band's single section."""
    lev2 = tree.seq.bottom_up()[1]
    xname, yname = tree.order.names
    alpha = section.sample.coords[0]
    psecs = [c for c in section.children if c.index[-1] % 2 == 0]
    betas = separate_roots([c.sample.coords[1] for c in psecs])
    threads = gap_points(betas)
    xt = _rat(sector.sample.coords[0])
    side = -1 if sector.index[0] < section.index[0] else 1
    xprime = _clear_of_crossings(
        lev2.factors, threads, alpha, xt, side, xname, yname
    )
    out = {}
    cache: dict = {}
    for c in sector.children:
        if c.index[-1] % 2 == 1:
            continue
        fi, ki = c.defining[-1][1][0]
        if fi not in cache:
            cache[fi] = isolate_roots(lev2.factors[fi].subs({xname: xprime}))
        rs = cache[fi]
        if ki > len(rs):
            raise PmcadError("root count changed inside a sector")
        val = rs[ki - 1]
        pos = 0
        for g in threads:
            cg = compare(val, RealAlgebraic.from_rational(g, yname))
            if cg == 0:
                raise PmcadError("curve meets a separating thread")
            if cg < 0:
                break
            pos += 2
        out[c.index] = pos
    return out, len(betas)


def adjacency_2d(tree: CADTree) -> AdjacencyGraph2D:
    """Adjacency between the plane cells of a fully lifted 2-variable CAD.
    Edges join cells whose dimensions differ by one; the shared boundary is
    always the lower-dimensional cell itself."""
    if len(tree.order) != 2:
        raise UsageError("adjacency needs a 2-variable tree")
    _check_full(tree.root)
    base = sorted(tree.root.children, key=lambda c: c.index[-1])
    for b in base:
        _check_full(b)
    edges: dict = {}

    def add(hi, lo) -> None:
        key = tuple(sorted((hi.index, lo.index)))
        edges[key] = AdjacencyEdge(a=key[0], b=key[1], boundary=lo.index)

    for b in base:
        cs = sorted(b.children, key=lambda c: c.index[-1])
        for c1, c2 in zip(cs, cs[1:]):
            if c2.index[-1] % 2 == 0:
                add(c1, c2)
            else:
                add(c2, c1)
    for b in base:
        if b.index[-1] % 2 == 1:
            continue
        smap = {c.index[-1]: c for c in b.children}
        r = sum(1 for p in smap if p % 2 == 0)
        for side in (-1, 1):
            nb = next(
                (c for c in base if c.index[-1] == b.index[-1] + side), None
            )
            if nb is None:
                continue
            limits, _ = _limit_positions(tree, nb, b)
            nmap = {c.index[-1]: c for c in nb.children}
            m = (len(nmap) - 1) // 2
            for cidx, pos in limits.items():
                if 2 <= pos <= 2 * r:
                    add(nmap[cidx[-1]], smap[pos])
            for t in range(m + 1):
                lb = limits[nmap[2 * t].index] if t >= 1 else 0
                ub = limits[nmap[2 * t + 2].index] if t < m else 2 * r + 2
                for s in range(r + 1):
                    if lb < 2 * s + 2 and 2 * s < ub:
                        add(nmap[2 * t + 1], smap[2 * s + 1])
    ordered = tuple(edges[k] for k in sorted(edges))
    return AdjacencyGraph2D(tree=tree, edges=ordered)


# ---- path extraction ----

@dataclass(frozen=True)
class PathResult:
    cells: tuple  # cell indices in traversal order
    polyline: tuple  # rational (x, y) witness vertices


_T_ORDER = VarOrder(["t"])


def _compose_line(p: Poly, a, b) -> Poly:
    """p restricted to the segment a -> b as a polynomial in the segment
    parameter t in [0, 1]."""
    t = Poly.var(_T_ORDER, "t")
    axes = [
        Poly.const(_T_ORDER, a[i]) + t * (b[i] - a[i]) for i in range(2)
    ]
    pows: list = [{0: Poly.const(_T_ORDER, 1)}, {0: Poly.const(_T_ORDER, 1)}]

    def pw(i, e):
        if e not in pows[i]:
            pows[i][e] = pw(i, e - 1) * axes[i]
        return pows[i][e]

    acc = Poly.zero(_T_ORDER)
    for e, c in p.terms.items():
        acc = acc + Poly.const(_T_ORDER, c) * pw(0, e[0]) * pw(1, e[1])
    return acc


_ZERO_T = RealAlgebraic.from_rational(Fraction(0), "t")
_ONE_T = RealAlgebraic.from_rational(Fraction(1), "t")


def _interior_roots(q: Poly) -> list:
    return [
        z
        for z in isolate_roots(q)
        if compare(z, _ZERO_T) > 0 and compare(z, _ONE_T) < 0
    ]


def _all_factors(tree: CADTree) -> list:
    out = []
    for lev in tree.seq.bottom_up():
        out.extend(lev.factors)
    return out


def _segment_clean(tree: CADTree, a, b) -> bool:
    """No factor curve meets the open segment; riding a curve does not
    count as clean."""
    for f in _all_factors(tree):
        q = _compose_line(f, a, b)
        if q.is_zero():
            return False
        if q.is_constant():
            continue
        if _interior_roots(q):
            return False
    return True


_cmp_key = functools.cmp_to_key(compare)


def _fiber_gaps(tree: CADTree, x0: Fraction) -> list:
    """Sector gap rationals of the level-2 fiber over a rational abscissa,
    in stack order."""
    xname = tree.order.names[0]
    roots = []
    for f in tree.seq.bottom_up()[1].factors:
        q = f.subs({xname: x0})
        if q.is_zero():
            raise PmcadError("fiber degenerated at %s" % x0)
        if q.is_constant():
            continue
        roots.extend(isolate_roots(q))
    merged: list = []
    for z in sorted(roots, key=_cmp_key):
        if merged and compare(merged[-1], z) == 0:
            continue
        merged.append(z)
    return gap_points(separate_roots(merged))


def _route_within(tree: CADTree, cell, p, q) -> list:
    """Vertices of a certified polyline from p to q inside one full-dim
    cell; subdivides along the fiber gaps until every segment is clean."""
    if p == q:
        return [p]
    if p[0] == q[0] or _segment_clean(tree, p, q):
        return [p, q]
    t = (cell.index[-1] - 1) // 2
    n = 2
    while n <= 256:
        xs = [p[0] + Fraction(i, n) * (q[0] - p[0]) for i in range(n + 1)]
        verts = [p]
        for i in range(1, n):
            gaps = _fiber_gaps(tree, xs[i])
            if t >= len(gaps):
                raise PmcadError("fiber shape changed inside cell %s" % (cell.index,))
            verts.append((xs[i], gaps[t]))
        verts.append(q)
        if all(
            a[0] == b[0] or _segment_clean(tree, a, b)
            for a, b in zip(verts, verts[1:])
        ):
            return verts
        n *= 2
    raise PathQueryError(
        "could not certify a witness inside cell %s" % (cell.index,)
    )


def _cross_vertical(tree: CADTree, station, alpha, y_star: Fraction) -> Fraction:
    """Rational abscissa inside the station band from which the horizontal
    thread at y_star runs clear to the vertical boundary line."""
    lev2 = tree.seq.bottom_up()[1]
    xname, yname = tree.order.names
    base = tree.cell_at(station.index[:1])
    xfrom = _rat(base.sample.coords[0])
    side = -1 if compare(RealAlgebraic.from_rational(xfrom, xname), alpha) < 0 else 1
    x = _clear_of_crossings(lev2.factors, [y_star], alpha, xfrom, side, xname, yname)
    if tree.locate((x, y_star)).index != station.index:
        raise PmcadError("crossing construction left the target cell")
    return x


def _hop(tree: CADTree, a_cell, mid, b_cell, a_anchor, b_anchor) -> tuple:
    """Exit and entry points for the move a_cell -> [mid ->] b_cell, plus
    the boundary actually traversed.  Anchors pin endpoint cells to the
    query points."""
    if mid is not None:
        if a_cell.dim != 2 or b_cell.dim != 2:
            raise PathQueryError(
                "witness construction needs full-dimensional cells around %s"
                % (mid.index,)
            )
        if mid.index[0] == a_cell.index[0]:
            # same stack: cross the curve section vertically at the base
            # sample abscissa; the flanking sector samples are already a
            # certified bracket of the section's root there
            base = tree.cell_at(mid.index[:1])
            x0 = _rat(base.sample.coords[0])
            exitp = (x0, _rat(a_cell.sample.coords[1]))
            entry = (x0, _rat(b_cell.sample.coords[1]))
            return exitp, entry
        # crossing a vertical line through one of its sector segments
        y_star = _rat(mid.sample.coords[1])
        alpha = tree.cell_at(mid.index[:1]).sample.coords[0]
        xa = _cross_vertical(tree, a_cell, alpha, y_star)
        xb = _cross_vertical(tree, b_cell, alpha, y_star)
        return (xa, y_star), (xb, y_star)

    # direct hop: one side is an endpoint cell sitting on the boundary
    if a_cell.dim == 2 or b_cell.dim == 2:
        band, low, anchor, entering = (
            (a_cell, b_cell, b_anchor, True)
            if a_cell.dim == 2
            else (b_cell, a_cell, a_anchor, False)
        )
        if anchor is None:
            raise PathQueryError(
                "cannot route through the lower-dimensional cell %s" % (low.index,)
            )
        if low.level() == 2 and low.index[0] % 2 == 0 and low.index[-1] % 2 == 1:
            # segment of a vertical line at a rational abscissa
            alpha = tree.cell_at(low.index[:1]).sample.coords[0]
            x = _cross_vertical(tree, band, alpha, anchor[1])
            pt = (x, anchor[1])
        elif low.level() == 2 and low.index[-1] % 2 == 0 and low.index[0] % 2 == 1:
            # curve section: step off vertically at the anchor abscissa
            gaps = _fiber_gaps(tree, anchor[0])
            j = low.index[-1] // 2
            lower = band.index[-1] < low.index[-1]
            pt = (anchor[0], gaps[j - 1] if lower else gaps[j])
        else:
            raise PathQueryError(
                "no witness construction for endpoint cell %s" % (low.index,)
            )
        return ((pt, anchor) if entering else (anchor, pt))

    # both cells lower-dimensional: a single certified segment or nothing
    if a_anchor is None or b_anchor is None:
        raise PathQueryError(
            "cannot route between boundary cells %s and %s"
            % (a_cell.index, b_cell.index)
        )
    for f in _all_factors(tree):
        q = _compose_line(f, a_anchor, b_anchor)
        if q.is_zero() or q.is_constant():
            continue
        if _interior_roots(q):
            raise PathQueryError(
                "no straight witness between %s and %s"
                % (a_cell.index, b_cell.index)
            )
    midpoint = (
        (a_anchor[0] + b_anchor[0]) / 2,
        (a_anchor[1] + b_anchor[1]) / 2,
    )
    if a_anchor != b_anchor and not tree.locate(midpoint).truth:
        raise PathQueryError(
            "segment between %s and %s leaves the true region"
            % (a_cell.index, b_cell.index)
        )
    return a_anchor, b_anchor


def path_query(
    tree: CADTree,
    graph: AdjacencyGraph2D,
    f: Formula,
    start,
    goal,
) -> Optional[PathResult]:
    """Connected route between two points through cells where f holds.

    Returns the cell sequence and a rational polyline witness, or None when
    the true cells containing start and goal are disconnected.  The witness
    moves through full-dimensional cells and crosses boundaries
    transversally; every segment is certified against the whole factor
    basis, so the polyline never leaves the closed true region.
    """
    if len(tree.order) != 2:
        raise UsageError("path queries need a 2-variable tree")
    truth_evaluate(tree, f)
    sp = (Fraction(start[0]), Fraction(start[1]))
    gp = (Fraction(goal[0]), Fraction(goal[1]))
    cs = tree.locate(sp)
    cg = tree.locate(gp)
    if not cs.truth:
        raise PathQueryError("start point lies in a cell where the formula is false")
    if not cg.truth:
        raise PathQueryError("goal point lies in a cell where the formula is false")
    if cs is cg:
        if cs.dim == 2:
            verts = _route_within(tree, cs, sp, gp)
        elif sp == gp:
            verts = [sp]
        elif sp[0] == gp[0]:
            verts = [sp, gp]
        elif _segment_clean_riding(tree, sp, gp) and tree.locate(
            ((sp[0] + gp[0]) / 2, (sp[1] + gp[1]) / 2)
        ).truth:
            verts = [sp, gp]
        else:
            raise PathQueryError(
                "no straight witness inside the boundary cell %s" % (cs.index,)
            )
        return PathResult(cells=(cs.index,), polyline=tuple(verts))

    prev: dict = {cs.index: None}
    queue = deque([cs.index])
    found = False
    while queue:
        u = queue.popleft()
        if u == cg.index:
            found = True
            break
        ud = tree.cell_at(u).dim
        for v in graph.neighbors(u):
            if v in prev:
                continue
            vcell = tree.cell_at(v)
            if not vcell.truth:
                continue
            if ud != 2 and vcell.dim != 2 and u != cs.index and v != cg.index:
                continue
            prev[v] = u
            queue.append(v)
    if not found:
        return None
    chain = []
    node = cg.index
    while node is not None:
        chain.append(node)
        node = prev[node]
    chain.reverse()

    cells = [tree.cell_at(i) for i in chain]
    last = len(cells) - 1
    anchors = {0: sp, last: gp}
    stations = [
        k for k, c in enumerate(cells) if c.dim == 2 or k in (0, last)
    ]
    verts = [sp]
    pos = sp
    for si in range(len(stations) - 1):
        ai, bi = stations[si], stations[si + 1]
        if bi - ai > 2:
            raise PmcadError("path chain stacked boundary cells")
        mid = cells[ai + 1] if bi - ai == 2 else None
        exitp, entry = _hop(
            tree, cells[ai], mid, cells[bi], anchors.get(ai), anchors.get(bi)
        )
        if cells[ai].dim == 2:
            for v in _route_within(tree, cells[ai], pos, exitp)[1:]:
                verts.append(v)
        elif exitp != pos:
            verts.append(exitp)
        if entry != exitp:
            verts.append(entry)
        pos = entry
    if cells[-1].dim == 2:
        for v in _route_within(tree, cells[-1], pos, gp)[1:]:
            verts.append(v)
    elif gp != pos:
        verts.append(gp)
    return PathResult(cells=tuple(chain), polyline=tuple(verts))


def _segment_clean_riding(tree: CADTree, a, b) -> bool:
    """Clean apart from factors that vanish along the whole segment."""
    for f in _all_factors(tree):
        q = _compose_line(f, a, b)
        if q.is_zero() or q.is_constant():
            continue
        if _interior_roots(q):
            return False
    return True
