"""Order and formulation scoring for decomposition planning.

Degree-based scores predict how hard a polynomial set will be to decompose
long before a full decomposition is attempted.  sotd sums total degrees of
monomials.  sowtd weights each variable occurrence by its position in the
order, halved when the variable is quantified, so it rewards keeping heavy
variables low and quantifying the ones that sit high.  ndrr counts distinct
real roots at the base of a projection, a proxy for the width of the
induced decomposition of the line.

suggest_order ranks candidate variable orders by the sotd of their full
projection sequences with ndrr as tie-break.  Exhaustive enumeration is
capped at six variables.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Iterable, Optional, Sequence, Tuple, Union

from .formula import Formula, _collect_polys
from .polynomial import Poly, UsageError, VarOrder, squarefree_coprime_basis
from .projection import ProjectionSequence, project_all
from .realalg import isolate_roots

__all__ = [
    "HeuristicReport",
    "ndrr",
    "score",
    "sotd",
    "sowtd",
    "suggest_order",
]

Scoreable = Union[Formula, ProjectionSequence, Iterable[Poly]]


def _distinct_polys(obj: Scoreable) -> list:
    """Nonconstant polynomials of obj, sign-normalized and deduplicated.

    Formulas contribute every atom polynomial, including those under
    quantifiers and inside indexed-root bounds; projection sequences
    contribute every level's factors.  A plain iterable is taken as is.
    """
    if isinstance(obj, Formula):
        polys = _collect_polys(obj)
    elif isinstance(obj, ProjectionSequence):
        polys = [f for lev in obj.levels for f in lev.factors]
    else:
        polys = list(obj)
    seen = {}
    for p in polys:
        if not isinstance(p, Poly):
            raise UsageError("cannot score %r" % (p,))
        if p.is_constant():
            continue
        prim = p.primitive_rat()[1]
        key = (prim.order.names, tuple(sorted(prim.terms.items())))
        seen.setdefault(key, prim)
    return list(seen.values())


def sotd(obj: Scoreable) -> int:
    """Sum of total degrees of all monomials over the distinct polynomials
    of obj.  Constants score zero."""
    total = 0
    for p in _distinct_polys(obj):
        for expo in p.terms:
            total += sum(expo)
    return total


def ndrr(obj: Union[ProjectionSequence, Iterable[Poly]]) -> int:
    """Number of distinct real roots of the base of a projection.

    For a projection sequence this reads the bottom level, whose factors
    are already a coprime squarefree basis, so root sets are disjoint and
    counts add.  A plain collection of univariate polynomials is rebased
    the same way first.
    """
    if isinstance(obj, ProjectionSequence):
        base = list(obj.levels[-1].factors)
    else:
        base = list(squarefree_coprime_basis(obj).factors)
    count = 0
    for p in base:
        if p.level() > 1:
            raise UsageError("ndrr needs univariate polynomials, got %s" % p)
        count += len(isolate_roots(p))
    return count


def _weights(order: VarOrder, quantified: Iterable[str]) -> dict:
    qset = frozenset(quantified)
    for q in qset:
        if q not in order:
            raise UsageError("quantified variable %s not in order" % q)
    w = {}
    for i, name in enumerate(order.names, start=1):
        w[name] = Fraction(i, 2) if name in qset else Fraction(i)
    return w


def sowtd(obj: Scoreable, order: VarOrder, quantified: Iterable[str] = ()) -> Fraction:
    """Sum of weighted total degrees.

    Each occurrence of a variable at position i (1-based) in the order
    weighs i, halved to i/2 when the variable is quantified, and a
    monomial scores the weighted sum of its exponents.  Variables used by
    obj but absent from the order are a usage error.
    """
    w = _weights(order, quantified)
    total = Fraction(0)
    for p in _distinct_polys(obj):
        for expo in p.terms:
            for e, name in zip(expo, p.order.names):
                if not e:
                    continue
                if name not in w:
                    raise UsageError("variable %s not in order" % name)
                total += e * w[name]
    return total


@dataclass(frozen=True)
class HeuristicReport:
    """Scores of one polynomial set under one order.

    sotd_full_projection and ndrr are None when the projection was not
    computed; both require running the full projection operator, which can
    dwarf the cost of the scores themselves on wide input sets.
    """

    order: VarOrder
    quantified: frozenset
    sotd_input: int
    sowtd: Fraction
    sotd_full_projection: Optional[int] = None
    ndrr: Optional[int] = None

    def __post_init__(self) -> None:
        if self.sotd_input < 0:
            raise UsageError("negative sotd")
        if self.sowtd < 0:
            raise UsageError("negative sowtd")


def _aligned(polys: Iterable[Poly], order: VarOrder) -> list:
    out = []
    for p in polys:
        if p.order.names == order.names:
            out.append(p)
            continue
        width = len(order.names)
        terms = {}
        for expo, coeff in p.terms.items():
            key = [0] * width
            for e, name in zip(expo, p.order.names):
                if not e:
                    continue
                if name not in order:
                    raise UsageError("variable %s not in order" % name)
                key[order.position(name)] = e
            k = tuple(key)
            terms[k] = terms.get(k, 0) + coeff
        out.append(Poly(order, terms))
    return out


def score(obj: Scoreable, order: VarOrder, quantified: Iterable[str] = (),
          full_projection: bool = True, ec: Optional[Poly] = None) -> HeuristicReport:
    """Build a HeuristicReport for obj under the given order.

    With full_projection the set is projected all the way down and the
    projection's sotd and base root count are recorded; otherwise those
    fields stay None and only the input scores are computed.
    """
    polys = _distinct_polys(obj)
    s_in = sotd(polys)
    s_w = sowtd(polys, order, quantified)
    s_proj = None
    roots = None
    if full_projection:
        seq = project_all(_aligned(polys, order), order,
                          ec=None if ec is None else _aligned([ec], order)[0])
        s_proj = sotd(seq)
        roots = ndrr(seq)
    return HeuristicReport(order=order, quantified=frozenset(quantified),
                           sotd_input=s_in, sowtd=s_w,
                           sotd_full_projection=s_proj, ndrr=roots)


def suggest_order(ps: Scoreable,
                  candidates: Optional[Sequence[VarOrder]] = None) -> Tuple[VarOrder, ...]:
    """Candidate orders ranked best first.

    The key is (sotd of the full projection under the order, ndrr of that
    projection), ties broken by the lexicographic order of the variable
    names.  Without an explicit candidate list every permutation of the
    variables in ps is tried, which is capped at six variables.
    """
    polys = _distinct_polys(ps)
    names = set()
    for p in polys:
        for expo in p.terms:
            for e, name in zip(expo, p.order.names):
                if e:
                    names.add(name)
    if len(names) > 6:
        raise UsageError("order search over %d variables; six is the cap"
                         % len(names))
    if not names:
        raise UsageError("no variables to order")
    if candidates is None:
        candidates = [VarOrder(perm) for perm in permutations(sorted(names))]
    elif not candidates:
        raise UsageError("empty candidate list")
    ranked = []
    for cand in candidates:
        for name in names:
            if name not in cand:
                raise UsageError("candidate order drops variable %s" % name)
        seq = project_all(_aligned(polys, cand), cand)
        ranked.append((sotd(seq), ndrr(seq), cand.names, cand))
    ranked.sort(key=lambda t: t[:3])
    return tuple(t[3] for t in ranked)
