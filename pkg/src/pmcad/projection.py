"""McCallum projection and projection sequences.

Elimination works one variable at a time, top down.  Each step maps a
pairwise coprime squarefree basis in k variables to a basis in k - 1
variables whose zero sets carry enough information to keep the higher
level factors sign-invariant over the cells built below.
"""

from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import UsageError
from .polynomial import (
    Poly,
    SquarefreeBasis,
    VarOrder,
    discriminant,
    resultant,
    squarefree_coprime_basis,
    try_div,
)

__all__ = [
    "ProjectionLevel",
    "ProjectionSequence",
    "mccallum_project",
    "ec_reduced_project",
    "pairwise_resultants",
    "project_all",
]


def _contribute(out: list, p: Poly) -> None:
    # Projection images of a coprime squarefree basis are never the zero
    # polynomial; constants carry no zero set and are dropped.
    if p.is_zero():
        raise UsageError("projection produced the zero polynomial")
    if not p.is_constant():
        out.append(p)


def _coefficient_polys(p: Poly, v: str) -> list:
    """All coefficients of p as a polynomial in v, high to low."""
    return [c for c in p.coefficients(v) if not c.is_zero()]


def pairwise_resultants(ps: Iterable[Poly], v: str) -> tuple:
    """res_v for every unordered pair with positive degree in v.

    Returns (i, j, res) triples indexed into the input sequence, i < j.
    Kept as raw polynomials: the lifting phase evaluates their signs to tell
    whether two factors can share a root over a base cell.
    """
    seq = list(ps)
    out = []
    for i in range(len(seq)):
        if seq[i].degree(v) < 1:
            continue
        for j in range(i + 1, len(seq)):
            if seq[j].degree(v) < 1:
                continue
            out.append((i, j, resultant(seq[i], seq[j], v)))
    return tuple(out)


def mccallum_project(ps: Iterable[Poly], v: str, pairs: Optional[tuple] = None) -> tuple:
    """One McCallum projection step, eliminating v.

    Input must be a pairwise coprime squarefree basis.  The image collects,
    for every factor of positive degree in v, all of its coefficients with
    respect to v, its discriminant when the degree is at least 2, and the
    pairwise resultants; factors free of v pass through as their own sole
    coefficient.  The result is rebased to a coprime squarefree basis and
    returned as a sorted tuple of factors.
    """
    seq = list(ps)
    out: list = []
    for p in seq:
        if p.is_zero():
            raise UsageError("zero polynomial in projection input")
        if p.degree(v) < 1:
            _contribute(out, p)
            continue
        for c in _coefficient_polys(p, v):
            _contribute(out, c)
        if p.degree(v) >= 2:
            _contribute(out, discriminant(p, v))
    if pairs is None:
        pairs = pairwise_resultants(seq, v)
    for _, _, r in pairs:
        _contribute(out, r)
    return squarefree_coprime_basis(out).factors


def ec_reduced_project(ps: Iterable[Poly], ec: Poly, v: str) -> tuple:
    """Reduced projection for an equational constraint, eliminating v.

    Only the constraint itself contributes coefficients and a discriminant;
    every other factor meets the image through res_v(ec, .) alone.  Factors
    free of v pass through unchanged.  Sound only for the topmost level:
    below the constraint's sections the full operator is still required.
    """
    if ec.degree(v) < 1:
        raise UsageError("equational constraint is constant in %s" % v)
    out: list = []
    for c in _coefficient_polys(ec, v):
        _contribute(out, c)
    if ec.degree(v) >= 2:
        _contribute(out, discriminant(ec, v))
    for p in ps:
        if p.is_zero():
            raise UsageError("zero polynomial in projection input")
        if p == ec:
            continue
        if p.degree(v) < 1:
            _contribute(out, p)
        else:
            _contribute(out, resultant(ec, p, v))
    return squarefree_coprime_basis(out).factors


@dataclass(frozen=True)
class ProjectionLevel:
    """Factors lifted at one variable, with merge hints for its stacks.

    pair_res holds (i, j, res_v) triples over factor indices; a nonzero sign
    of res_v at a base sample certifies that factors i and j have disjoint
    root sets over that cell.  ec_index marks the equational constraint's
    factor when the level was projected in reduced form.
    """

    var: str
    factors: tuple
    pair_res: tuple = ()
    ec_index: Optional[int] = None

    def basis(self) -> SquarefreeBasis:
        return squarefree_coprime_basis(self.factors)


@dataclass(frozen=True)
class ProjectionSequence:
    """Projection levels from the top variable down to the univariate one."""

    order: VarOrder
    levels: tuple

    def __post_init__(self) -> None:
        if len(self.levels) != len(self.order):
            raise UsageError("one projection level per variable required")
        for k, lev in enumerate(self.levels):
            want = self.order.names[len(self.order) - 1 - k]
            if lev.var != want:
                raise UsageError("projection level %d is for %s, expected %s" % (k, lev.var, want))
            top = len(self.order) - k
            for f in lev.factors:
                if f.level() > top:
                    raise UsageError("factor %s too high for level %s" % (f, lev.var))

    def bottom_up(self) -> tuple:
        return tuple(reversed(self.levels))

    def level_for(self, v: str) -> ProjectionLevel:
        for lev in self.levels:
            if lev.var == v:
                return lev
        raise UsageError("no projection level for %s" % v)


def _split_by_level(pool: list, k: int) -> tuple:
    """Partition a basis into factors whose main variable sits at level k
    and the rest."""
    active = [p for p in pool if p.level() == k]
    rest = [p for p in pool if p.level() != k]
    return active, rest


def _locate_ec(active: list, ec: Poly, v: str) -> int:
    if ec.degree(v) < 1:
        raise UsageError("equational constraint is constant in the top variable")
    hits = []
    for i, f in enumerate(active):
        if f == ec or try_div(ec, f) is not None:
            hits.append(i)
    if len(hits) != 1:
        raise UsageError("equational constraint is not a single top-level basis factor")
    return hits[0]


def project_all(ps: Iterable[Poly], order: VarOrder, ec: Optional[Poly] = None) -> ProjectionSequence:
    """Full projection sequence for a polynomial set under a variable order.

    Rebases the input, then eliminates from the top variable down.  When an
    equational constraint is supplied the topmost step uses the reduced
    operator and the top level records which factor it was; every later step
    is plain McCallum.  Each level keeps the pairwise resultants of its own
    factors as merge hints for lifting.
    """
    n = len(order)
    if n == 0:
        raise UsageError("empty variable order")
    pool = list(squarefree_coprime_basis(ps).factors)
    levels = []
    for k in range(n, 0, -1):
        v = order.names[k - 1]
        active, rest = _split_by_level(pool, k)
        ec_index = None
        if k == n and ec is not None:
            ec_prim = ec.primitive_rat()[1]
            ec_index = _locate_ec(active, ec_prim, v)
            pairs = tuple(
                (i, j, r)
                for i, j, r in pairwise_resultants(active, v)
                if ec_index in (i, j)
            )
        else:
            pairs = pairwise_resultants(active, v)
        levels.append(ProjectionLevel(var=v, factors=tuple(active), pair_res=pairs, ec_index=ec_index))
        if k > 1:
            if ec_index is not None:
                image = ec_reduced_project(active, active[ec_index], v)
            else:
                image = mccallum_project(active, v, pairs=pairs)
            pool = list(squarefree_coprime_basis(list(rest) + list(image)).factors)
    return ProjectionSequence(order=order, levels=tuple(levels))
