from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from pmcad import (
    And,
    Atom,
    Exists,
    Forall,
    GridSpec,
    LENGTH_PRESETS,
    Or,
    ProblemSpec,
    QEOptions,
    REVERSE_LENGTH_SQUARED,
    TRAVERSE_LENGTH_SQUARED,
    UsageError,
    VarOrder,
    WellOrientednessError,
    eval_at,
    free_vars,
    gen_acute_invalid,
    gen_angled_wang,
    gen_davenport,
    gen_invalid,
    gen_obtuse_invalid,
    gen_single_endpoint,
    gen_valid,
    gen_wang,
    gen_yangzeng,
    generate,
    isolate_roots,
    mixed_sampler,
    qe,
    reference_acute_length_condition,
    reference_corridor,
    reference_invalid_region,
    reference_obtuse_length_condition,
    reference_obtuse_length_condition_variant,
    reference_solution_length3,
    reference_valid_full,
    reference_valid_region,
    refine,
    sample_equivalent,
    to_prenex,
)
from pmcad.polynomial import Poly

F = Fraction
RA3 = ProblemSpec.right_angle(3)
T_GRID = GridSpec(F(0), F(1), F(1, 256))


def matrix_of(form):
    return to_prenex(form.formula).matrix


# ---------------------------------------------------------------------------
# problem specs


def test_spec_validation():
    with pytest.raises(UsageError):
        ProblemSpec.right_angle(0)
    with pytest.raises(UsageError):
        ProblemSpec.right_angle(-2)
    with pytest.raises(UsageError):
        ProblemSpec.obtuse(3, 0)
    with pytest.raises(UsageError):
        ProblemSpec.acute(3, F(-1, 2))
    with pytest.raises(UsageError):
        ProblemSpec(F(3), "bent")
    with pytest.raises(UsageError):
        ProblemSpec(F(3), "right-angle", tangent=F(1))
    s = ProblemSpec.obtuse("3", "2/3")
    assert s.length == 3 and s.tangent == F(2, 3)


def test_length_presets_bracket_the_thresholds():
    vals = list(LENGTH_PRESETS.values())
    assert vals == [F(3), F(2), F(5, 4), F(3, 4)]
    blocked, traverse, corner, anywhere = vals
    assert blocked ** 2 > TRAVERSE_LENGTH_SQUARED
    assert REVERSE_LENGTH_SQUARED < traverse ** 2 < TRAVERSE_LENGTH_SQUARED
    assert 1 < corner ** 2 < REVERSE_LENGTH_SQUARED
    assert anywhere ** 2 < 1


def test_straight_pose_is_valid_at_every_preset():
    # ladder lying along the middle of the horizontal arm
    for length in LENGTH_PRESETS.values():
        vf = reference_valid_full(length)
        pose = {"x": F(-2), "y": F(1, 2), "w": F(-2) - length, "z": F(1, 2)}
        assert eval_at(vf.formula, pose) is True


# ---------------------------------------------------------------------------
# endpoint-space formulation


def test_davenport_structure():
    d = gen_davenport(RA3)
    assert d.kind == "davenport"
    assert d.order.names == ("x", "y", "w", "z")
    assert d.quantified == frozenset()
    f = d.formula
    assert isinstance(f, And) and len(f.args) == 5
    head = f.args[0]
    assert isinstance(head, Atom) and head.op == "="
    assert head.poly.total_degree() == 2
    for pair in f.args[1:]:
        assert isinstance(pair, Or) and len(pair.args) == 2


def test_davenport_pose_with_wrong_length_fails():
    # endpoints (-1, 3/10) and (-14/5, 3/5): squared span 333/100, not 9
    d = gen_davenport(RA3)
    pose = {"x": F(-1), "y": F(3, 10), "w": F(-14, 5), "z": F(3, 5)}
    head = d.formula.args[0]
    assert eval_at(head, pose) is False
    assert eval_at(d.formula, pose) is False
    dx = pose["x"] - pose["w"]
    dy = pose["y"] - pose["z"]
    assert dx ** 2 + dy ** 2 == F(333, 100)


def test_davenport_rejects_angled_corridor():
    with pytest.raises(UsageError):
        gen_davenport(ProblemSpec.obtuse(3, 1))


# ---------------------------------------------------------------------------
# sliding-pose formulation


def test_wang_structure():
    w = gen_wang(RA3)
    assert w.order.names == ("r", "a", "b", "c", "d")
    assert w.quantified == frozenset({"a", "b", "c", "d"})
    assert free_vars(w.formula) == ("r",)
    assert isinstance(matrix_of(w), And) and len(matrix_of(w).args) == 8
    ws = gen_wang(RA3, simplified=True)
    assert ws.kind == "wang_simplified"
    assert ws.order.names == ("r", "a", "b", "c")
    assert len(matrix_of(ws).args) == 6


def test_wang_witness_at_length_five():
    # a = 3, b = -4 gives crossings c = 9/4 and d = -8/3
    body = matrix_of(gen_wang(RA3))
    pt = {"r": F(5), "a": F(3), "b": F(-4), "c": F(9, 4), "d": F(-8, 3)}
    assert eval_at(body, pt) is True
    assert F(9, 4) - (1 + pt["b"]) * (F(9, 4) - pt["a"]) == 0
    assert F(-8, 3) - (1 - pt["a"]) * (F(-8, 3) - pt["b"]) == 0
    pt["c"] = F(2)
    assert eval_at(body, pt) is False


def test_wang_unit_length_has_no_crossing_past_one():
    # on the unit circle b lies in (-1, 0), so the solved crossing
    # c = a(1+b)/b is nonpositive and the c >= 1 conjunct cannot hold
    body = matrix_of(gen_wang(RA3))
    for a, b in [(F(3, 5), F(-4, 5)), (F(4, 5), F(-3, 5)),
                 (F(5, 13), F(-12, 13)), (F(12, 13), F(-5, 13)),
                 (F(8, 17), F(-15, 17)), (F(15, 17), F(-8, 17))]:
        assert a ** 2 + b ** 2 == 1
        c = a * (1 + b) / b
        assert c <= 0
        d = b * (a - 1) / a
        assert eval_at(body, {"r": F(1), "a": a, "b": b, "c": c, "d": d}) is False


# ---------------------------------------------------------------------------
# universal octic formulation


def test_yangzeng_structure_and_truth():
    yz = gen_yangzeng(RA3)
    assert isinstance(yz.formula, Forall) and yz.formula.var == "x"
    assert free_vars(yz.formula) == ("L",)
    p = yz.formula.body.poly
    assert p.degree("x") == 8 and p.degree("L") == 1
    # L = 2: every coefficient of the specialized octic is nonnegative with
    # constant term 1, so positivity holds outright
    p2 = p.subs({"L": F(2)})
    coeffs = p2.univariate_coeffs("x")
    assert all(c >= 0 for c in coeffs) and coeffs[0] == 1
    grid = GridSpec(F(-2), F(2), F(1, 100))
    assert eval_at(yz.formula, {"L": F(2)}, grid) is True
    # L = 3: the octic dips negative near x^4 = 3/4
    p3 = p.subs({"L": F(3)})
    assert p3.eval_frac({"x": F(93, 100)}) < 0
    assert eval_at(yz.formula, {"L": F(3)}, grid) is False


# ---------------------------------------------------------------------------
# segment-escape formulation and its stored references


INSIDE = {"x": F(-2), "y": F(1, 2), "w": F(-1, 2), "z": F(1, 2)}
WEDGE_ENDPOINT = {"x": F(-2), "y": F(2), "w": F(-3), "z": F(2)}
WEDGE_INTERIOR = {"x": F(-2), "y": F(1, 2), "w": F(-1, 2), "z": F(2)}


def test_invalid_structure():
    inv = gen_invalid(RA3)
    assert inv.order.names == ("x", "y", "w", "z", "t")
    assert inv.quantified == frozenset({"t"})
    assert set(free_vars(inv.formula)) == {"x", "y", "w", "z"}
    assert isinstance(inv.formula, Or) and len(inv.formula.args) == 7
    assert isinstance(inv.formula.args[-1], Exists)


def test_invalid_poses():
    inv = gen_invalid(RA3)
    assert eval_at(inv.formula, WEDGE_ENDPOINT, T_GRID) is True
    assert eval_at(inv.formula, INSIDE, T_GRID) is False
    assert eval_at(inv.formula, WEDGE_INTERIOR, T_GRID) is True
    # the interior-crossing pose is caught only by the quantified clause
    endpoint_only = Or(list(inv.formula.args[:-1]))
    assert eval_at(endpoint_only, WEDGE_INTERIOR) is False


def test_stored_references_agree_on_poses():
    eq5 = reference_invalid_region()
    eq6 = reference_valid_region()
    for pose in (WEDGE_ENDPOINT, INSIDE, WEDGE_INTERIOR):
        inval = eval_at(eq5, pose)
        assert eval_at(eq6, pose) is (not inval)
    assert eval_at(eq5, WEDGE_INTERIOR) is True


def test_negated_invalid_matches_valid_reference():
    from pmcad import negate_nnf
    eq5 = reference_invalid_region()
    eq6 = reference_valid_region()
    samp = mixed_sampler(["x", "y", "w", "z"], seed=23, lo=F(-4), hi=F(4),
                         bias_formulas=(eq5,))
    verdict, n = sample_equivalent(negate_nnf(eq5), eq6, samp, 1500)
    assert verdict == "no-counterexample" and n == 1500


@settings(max_examples=60, deadline=None, derandomize=True)
@given(st.tuples(*[st.integers(min_value=-5, max_value=5)] * 4))
def test_invalid_and_valid_are_complementary(pose_vals):
    # integer poses keep every segment crossing window wider than the search
    # step: window endpoints are ratios of integers in [-10, 10], so distinct
    # endpoints differ by at least 1/100; the 1/256 grid always hits the
    # interior, making the bounded existential search exact here
    x, y, w, z = map(Fraction, pose_vals)
    pose = {"x": x, "y": y, "w": w, "z": z}
    boundary = [x, w, y, z, x + 1, w + 1, y - 1, z - 1,
                y * w - w + y + x, x * z + z - y * w + w - y - x]
    assume(all(v != 0 for v in boundary))
    eq5 = reference_invalid_region()
    eq6 = reference_valid_region()
    inval = eval_at(eq5, pose)
    assert eval_at(eq6, pose) is (not inval)
    inv = gen_invalid(RA3)
    assert eval_at(inv.formula, pose, T_GRID) is inval


# ---------------------------------------------------------------------------
# elimination pipeline


def test_valid_pipeline_needs_nullification_tolerance():
    inv = gen_invalid(RA3)
    with pytest.raises(WellOrientednessError):
        qe(inv.formula, inv.order, QEOptions())


def test_valid_pipeline_matches_stored_reference():
    vf = gen_valid(RA3)
    assert vf.kind == "valid_full"
    assert vf.order.names == ("x", "y", "w", "z")
    assert vf.quantified == frozenset()
    ref = reference_valid_full(3)
    samp = mixed_sampler(["x", "y", "w", "z"], seed=7, lo=F(-5), hi=F(5),
                         bias_formulas=(ref.formula,))
    verdict, n = sample_equivalent(vf.formula, ref.formula, samp, 800)
    assert verdict == "no-counterexample" and n == 800


# ---------------------------------------------------------------------------
# one-endpoint projection


def test_corridor_reference_poses():
    eq9 = reference_corridor()
    assert eval_at(eq9, {"x": F(-1, 2), "y": F(5)}) is True
    assert eval_at(eq9, {"x": F(-2), "y": F(2)}) is False
    assert eval_at(eq9, {"x": F(-3), "y": F(1, 2)}) is True
    assert eval_at(eq9, {"x": F(1), "y": F(1, 2)}) is False


def test_single_endpoint_structure():
    se = gen_single_endpoint(RA3)
    assert se.quantified == frozenset({"w", "z"})
    assert set(free_vars(se.formula)) == {"x", "y"}
    assert isinstance(se.formula, Exists)


WZ_GRID = GridSpec(F(-6), F(6), F(1, 8))

REACH_POINTS = [
    (F(-3), F(1, 2), True),
    (F(-1, 2), F(1, 2), True),
    (F(-1, 2), F(3), True),
    (F(0), F(1, 8), True),
    (F(-9, 8), F(7, 8), True),
    (F(1, 2), F(1, 2), False),
    (F(-2), F(3, 2), False),
    (F(-1, 4), F(-1, 2), False),
    (F(-6), F(9, 8), False),
]


@pytest.mark.parametrize("length", [F(3, 4), F(5, 4), F(2)])
def test_single_endpoint_matches_corridor(length):
    # bounded two-variable search over the far endpoint: sound on this grid
    # because straight poses give on-grid witnesses at these lengths
    se = gen_single_endpoint(ProblemSpec.right_angle(length))
    eq9 = reference_corridor()
    for x, y, expect in REACH_POINTS:
        pose = {"x": x, "y": y}
        assert eval_at(eq9, pose) is expect
        assert eval_at(se.formula, pose, WZ_GRID) is expect


def test_solution_reference_poses():
    sol = reference_solution_length3()
    straight = {"x": F(-2), "y": F(1, 2), "w": F(-5), "z": F(1, 2)}
    hug_wall = {"x": F(0), "y": F(0), "w": F(-3), "z": F(0)}
    through_corner = {"x": F(0), "y": F(12, 5), "w": F(-9, 5), "z": F(0)}
    assert eval_at(sol, straight) is True
    assert eval_at(sol, hug_wall) is True
    # crosses x = -1 at height 16/15 > 1: pierces the inner corner
    assert eval_at(sol, through_corner) is False


# ---------------------------------------------------------------------------
# angled corridors


def test_obtuse_invalid_poses_and_atoms():
    oi = gen_obtuse_invalid(ProblemSpec.obtuse(3, 1))
    texts = {str(a.poly) for a in _atoms(oi.formula)}
    assert "x - y" in texts        # wall line y = T x at tangent 1, mirrored
    inside_low = {"x": F(-3), "y": F(1, 2), "w": F(-2), "z": F(1, 2)}
    inside_high = {"x": F(2), "y": F(5, 2), "w": F(2), "z": F(5, 2)}
    poking_out = {"x": F(2), "y": F(7, 2), "w": F(2), "z": F(7, 2)}
    assert eval_at(oi.formula, inside_low, T_GRID) is False
    assert eval_at(oi.formula, inside_high, T_GRID) is False
    assert eval_at(oi.formula, poking_out, T_GRID) is True
    with pytest.raises(UsageError):
        gen_obtuse_invalid(RA3)


def test_acute_invalid_poses_and_atoms():
    ai = gen_acute_invalid(ProblemSpec.acute(3, 1))
    texts = {str(a.poly) for a in _atoms(ai.formula)}
    assert "x + 2" in texts        # cleared threshold T x + T + 1 at tangent 1
    inside = {"x": F(-3), "y": F(1, 2), "w": F(-2), "z": F(1, 2)}
    below = {"x": F(-3), "y": F(-1, 2), "w": F(-2), "z": F(1, 2)}
    assert eval_at(ai.formula, inside, T_GRID) is False
    assert eval_at(ai.formula, below, T_GRID) is True
    with pytest.raises(UsageError):
        gen_acute_invalid(ProblemSpec.obtuse(3, 1))


def test_acute_corner_pose_fits_root_five():
    # endpoints (0,0) and (-2,1): squared length 5, yet no escape clause
    # fires, so a ladder longer than the sliding threshold still fits
    ai = gen_acute_invalid(ProblemSpec.acute(3, 1))
    pose = {"x": F(0), "y": F(0), "w": F(-2), "z": F(1)}
    assert pose["x"] - pose["w"] == 2 and pose["y"] - pose["z"] == -1
    assert (pose["x"] - pose["w"]) ** 2 + (pose["y"] - pose["z"]) ** 2 == 5
    assert eval_at(ai.formula, pose, T_GRID) is False


def _atoms(f):
    out = []
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            out.append(g)
        elif isinstance(g, (And, Or)):
            stack.extend(g.args)
        elif isinstance(g, Exists) or isinstance(g, Forall):
            stack.append(g.body)
    return out


def test_angled_wang_structure():
    ow = gen_angled_wang(ProblemSpec.obtuse(3, 1))
    assert ow.kind == "obtuse_wang"
    assert ow.order.names == ("r", "b", "p", "d", "e")
    assert ow.quantified == frozenset({"b", "p", "d", "e"})
    assert free_vars(ow.formula) == ("r",)
    aw = gen_angled_wang(ProblemSpec.acute(3, 1))
    assert aw.kind == "acute_wang"
    with pytest.raises(UsageError):
        gen_angled_wang(RA3)


def test_obtuse_wang_witnesses():
    body = matrix_of(gen_angled_wang(ProblemSpec.obtuse(3, 1)))
    # degenerate zero-length pose at the wall intersection
    assert eval_at(body, {"r": F(0), "b": F(0), "p": F(0),
                          "d": F(0), "e": F(1)}) is True
    # blocked pose found by hand at tangent 1
    assert eval_at(body, {"r": F(187, 28), "b": F(-11, 4), "p": F(22, 7),
                          "d": F(-7, 8), "e": F(1)}) is True
    # family along slope 8/15 through (1, 2): for any c >= 22/15 the pose
    # with b = -15c/8, p = 15c/7 crosses both inner lines past the bounds,
    # giving a rational witness for every rational length 255c/56
    s = F(8, 15)
    for c in (F(22, 15), F(2), F(392, 255)):
        b = -c / s
        p = c / (1 - s)
        d = (1 - c) / s
        e = (c - 1) / (1 - s)
        r = abs(p - b) * _hyp(s)
        pt = {"r": r, "b": b, "p": p, "d": d, "e": e}
        assert eval_at(body, pt) is True
    # negated length fails the sign-free matrix only via the equation
    assert eval_at(body, {"r": F(-187, 28), "b": F(-11, 4), "p": F(22, 7),
                          "d": F(-7, 8), "e": F(1)}) is True


def _hyp(s):
    # |(1, s)| for the slope-s family below is rational by construction
    h2 = 1 + s ** 2
    from math import isqrt
    num = isqrt(h2.numerator)
    den = isqrt(h2.denominator)
    assert num * num == h2.numerator and den * den == h2.denominator
    return Fraction(num, den)


def test_acute_wang_witnesses():
    body = matrix_of(gen_angled_wang(ProblemSpec.acute(3, 1)))
    assert eval_at(body, {"r": F(0), "b": F(0), "p": F(0),
                          "d": F(-2), "e": F(-2)}) is True
    assert eval_at(body, {"r": F(377, 204), "b": F(-29, 12), "p": F(-29, 17),
                          "d": F(-2), "e": F(-2)}) is True
    assert eval_at(body, {"r": F(2), "b": F(-34, 13), "p": F(-24, 13),
                          "d": F(-343, 156), "e": F(-473, 221)}) is True
    # moving one crossing inside the corner pocket violates its bound
    assert eval_at(body, {"r": F(377, 204), "b": F(-29, 12), "p": F(-29, 17),
                          "d": F(-3, 2), "e": F(-2)}) is False


def test_length_condition_roots_sit_at_the_anchors():
    # positive flip of the primary obtuse sextic: near 6.6786
    assert _largest_root_near(reference_obtuse_length_condition(), F(66786, 10000))
    # the negated-quadratic variant flips elsewhere
    assert not _largest_root_near(reference_obtuse_length_condition_variant(),
                                  F(66786, 10000))
    assert _largest_root_near(reference_acute_length_condition(), F(18443, 10000))


def _largest_root_near(cond, anchor):
    sextic = None
    for a in _atoms(cond):
        if a.poly.total_degree() == 6:
            sextic = a.poly
    roots = isolate_roots(sextic)
    top = refine(roots[-1], F(1, 1000))
    lo, hi = top.bounds()
    return abs((lo + hi) / 2 - anchor) < F(1, 100)


# ---------------------------------------------------------------------------
# dispatch


def test_generate_dispatch():
    assert generate("davenport", RA3).kind == "davenport"
    assert generate("wang_simplified", RA3).kind == "wang_simplified"
    assert generate("obtuse_wang", ProblemSpec.obtuse(3, 1)).kind == "obtuse_wang"
    with pytest.raises(UsageError):
        generate("escher", RA3)
    with pytest.raises(UsageError):
        generate("acute_wang", RA3)


def test_formulation_validation():
    from pmcad import Formulation, atom
    order = VarOrder(["x", "y"])
    x = Poly.var(order, "x")
    f = atom(x, ">")
    with pytest.raises(UsageError):
        Formulation("davenport", f, VarOrder(["y"]), frozenset())
    with pytest.raises(UsageError):
        Formulation("nonsense", f, order, frozenset())
    with pytest.raises(UsageError):
        Formulation("davenport", f, order, frozenset({"q"}))
    good = Formulation("davenport", f, order, frozenset({"y"}))
    assert good.free == ("x",)
