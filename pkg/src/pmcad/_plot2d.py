"""Raster renderings of plane decompositions.

Every pixel is classified exactly: the level-1 roots fix its column's
stack position, the level-2 roots over the column's abscissa fix the row
position, so the colour is the pixel's true cell identity rather than a
floating-point estimate.  Trees in more than two variables are rendered as
slices: the remaining coordinates are fixed to rationals and pixels are
coloured by the sign vector of the specialised factor basis.
"""

import functools
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Tuple

from .cad import CADTree, gap_points, separate_roots
from .errors import PmcadError, UsageError
from .polynomial import Poly, VarOrder
from .realalg import RealAlgebraic, SamplePoint, compare, roots_over, NullificationError

__all__ = ["plot_2d"]

_cmp_key = functools.cmp_to_key(compare)


class _Breaks:
    """Ascending separated roots along one line, refined below a pixel,
    with an exact tie-break for pixels landing inside a bracket."""

    def __init__(self, roots: list, res: Fraction, var: str):
        merged: list = []
        for z in sorted(roots, key=_cmp_key):
            if merged and compare(merged[-1], z) == 0:
                continue
            merged.append(z)
        self.roots = [r.refine(res) for r in separate_roots(merged)]
        self.var = var

    def classify_all(self, vals: Sequence[Fraction]) -> list:
        """Collins stack position of each value; vals must ascend."""
        out = []
        k = 0
        for v in vals:
            while k < len(self.roots) and self.roots[k].bounds()[1] < v:
                k += 1
            if k == len(self.roots):
                out.append(2 * k + 1)
                continue
            lo, _ = self.roots[k].bounds()
            if v < lo:
                out.append(2 * k + 1)
                continue
            c = compare(RealAlgebraic.from_rational(v, self.var), self.roots[k])
            if c == 0:
                out.append(2 * k + 2)
            elif c < 0:
                out.append(2 * k + 1)
            else:
                out.append(2 * k + 3)
        return out


def _axis(lo: Fraction, hi: Fraction, step: Fraction) -> list:
    out = []
    v = lo
    while v <= hi:
        out.append(v)
        v += step
    return out


def _sgn(v: Fraction) -> int:
    return (v > 0) - (v < 0)


def _restrict_pair(p: Poly, pair: VarOrder, xi: int, yi: int) -> Poly:
    t: dict = {}
    for e, c in p.terms.items():
        if any(x and k not in (xi, yi) for k, x in enumerate(e)):
            raise PmcadError("slice substitution left a third variable")
        k = (e[xi], e[yi])
        t[k] = t.get(k, 0) + c
    return Poly(pair, t)


def _shade(rgb: Tuple[int, int, int], truth) -> Tuple[int, int, int]:
    if truth is True:
        return rgb
    if truth is False:
        return tuple(c * 2 // 5 for c in rgb)
    return tuple(c * 4 // 5 for c in rgb)


def _mix(a: int, b: int) -> Tuple[int, int, int]:
    return (
        70 + (47 * a + 91 * b) % 160,
        70 + (83 * a + 37 * b) % 160,
        70 + (29 * a + 71 * b) % 160,
    )


def plot_2d(
    tree: CADTree,
    xrange: Sequence = (Fraction(-7), Fraction(2)),
    yrange: Sequence = (Fraction(-2), Fraction(7)),
    step=Fraction(1, 40),
    fmt: str = "ppm",
    fixed: Optional[Mapping[str, Fraction]] = None,
) -> bytes:
    """Render the decomposition over a window of the plane.

    Pixels are coloured by cell identity, shaded by recorded truth when a
    truth evaluation has marked the tree, and darkened where the identity
    changes between neighbouring pixels so cell boundaries stay visible.
    Returns the image bytes; deterministic for a given tree and window.
    """
    step = Fraction(step)
    if step <= 0:
        raise UsageError("plot step must be positive")
    if fmt not in ("ppm", "svg"):
        raise UsageError("plot format must be 'ppm' or 'svg'")
    xlo, xhi = (Fraction(v) for v in xrange)
    ylo, yhi = (Fraction(v) for v in yrange)
    if xlo >= xhi or ylo >= yhi:
        raise UsageError("plot ranges must be nonempty intervals")
    n = len(tree.order)
    if n < 2:
        raise UsageError("plotting needs a tree in at least 2 variables")
    rest = set(tree.order.names[2:])
    given = {k: Fraction(v) for k, v in (fixed or {}).items()}
    if set(given) != rest:
        raise UsageError(
            "a slice must fix exactly the variables beyond the first two: %s"
            % sorted(rest)
        )

    xs = _axis(xlo, xhi, step)
    ys = _axis(ylo, yhi, step)
    res = step / 4
    xname, yname = tree.order.names[0], tree.order.names[1]
    levels = tree.seq.bottom_up()

    if n == 2:
        grid, colors = _classify_cells(tree, levels, xs, ys, res, xname, yname)
    else:
        grid, colors = _classify_slice(
            tree, levels, given, xs, ys, res, xname, yname
        )

    w, h = len(xs), len(ys)
    if fmt == "ppm":
        body = bytearray(b"P6\n%d %d\n255\n" % (w, h))
        for j in range(h - 1, -1, -1):
            for i in range(w):
                body.extend(_pixel(grid, colors, i, j, w))
        return bytes(body)
    rows = [
        '<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" '
        'viewBox="0 0 %d %d" shape-rendering="crispEdges">' % (w, h, w, h)
    ]
    for j in range(h - 1, -1, -1):
        yimg = h - 1 - j
        i = 0
        while i < w:
            px = _pixel(grid, colors, i, j, w)
            run = 1
            while i + run < w and _pixel(grid, colors, i + run, j, w) == px:
                run += 1
            rows.append(
                '<rect x="%d" y="%d" width="%d" height="1" fill="#%02x%02x%02x"/>'
                % (i, yimg, run, px[0], px[1], px[2])
            )
            i += run
    rows.append("</svg>")
    return "\n".join(rows).encode("ascii")


def _pixel(grid, colors, i, j, w) -> Tuple[int, int, int]:
    ident = grid[i][j]
    if (i + 1 < w and grid[i + 1][j] != ident) or (j > 0 and grid[i][j - 1] != ident):
        return (0, 0, 0)
    return colors[ident]


def _classify_cells(tree, levels, xs, ys, res, xname, yname):
    order = tree.order
    base_roots: list = []
    empty = SamplePoint.of_rationals(order, [])
    for f in levels[0].factors:
        try:
            base_roots.extend(roots_over(f, empty, xname))
        except NullificationError:
            raise PmcadError("level-1 factor vanished identically")
    cols = _Breaks(base_roots, res, xname).classify_all(xs)
    grid = []
    colors: dict = {}
    for i, x0 in enumerate(xs):
        pt = SamplePoint.of_rationals(order, [x0])
        roots: list = []
        for f in levels[1].factors:
            try:
                roots.extend(roots_over(f, pt, yname))
            except NullificationError:
                raise PmcadError("fiber factor vanished over %s" % x0)
        fps = _Breaks(roots, res, yname).classify_all(ys)
        col = [(cols[i], fp) for fp in fps]
        grid.append(col)
        for ident in col:
            if ident not in colors:
                try:
                    truth = tree.cell_at(ident).truth
                except UsageError:
                    truth = None
                colors[ident] = _shade(_mix(ident[0], ident[1]), truth)
    return grid, colors


def _classify_slice(tree, levels, given, xs, ys, res, xname, yname):
    pair = VarOrder([xname, yname])
    xi = tree.order.position(xname)
    yi = tree.order.position(yname)
    polys = []
    for lev in levels:
        for f in lev.factors:
            g = _restrict_pair(f.subs(given), pair, xi, yi)
            if not g.is_constant():
                polys.append(g)
    grid = []
    colors: dict = {}
    for x0 in xs:
        pt = SamplePoint.of_rationals(pair, [x0])
        roots: list = []
        for g in polys:
            q = g.subs({xname: x0})
            if q.is_constant():
                continue
            try:
                roots.extend(roots_over(g, pt, yname))
            except NullificationError:
                raise PmcadError("slice factor vanished over %s" % x0)
        br = _Breaks(roots, res, yname)
        gaps = gap_points(br.roots)
        gap_vec = [
            tuple(_sgn(g.eval_frac({xname: x0, yname: gy})) for g in polys)
            for gy in gaps
        ]
        col = []
        for pos, y0 in zip(br.classify_all(ys), ys):
            if pos % 2 == 1:
                ident = gap_vec[(pos - 1) // 2]
            else:
                ident = tuple(
                    _sgn(g.eval_frac({xname: x0, yname: y0})) for g in polys
                )
            col.append(ident)
            if ident not in colors:
                a = sum((s + 1) * 3 ** k for k, s in enumerate(ident)) % 997
                b = sum((s + 1) * (k + 7) for k, s in enumerate(ident))
                colors[ident] = _shade(_mix(a, b), None)
        grid.append(col)
    return grid, colors
