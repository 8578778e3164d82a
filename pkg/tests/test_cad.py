"""Lifting, truth evaluation, and quantifier elimination."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pmcad import (
    Atom,
    CADOptions,
    Exists,
    Forall,
    NullificationError,
    Poly,
    QEOptions,
    ResourceLimitError,
    RootCmp,
    TRUE,
    UsageError,
    VarOrder,
    WellOrientednessError,
    build_cad,
    partial_truth_lift,
    project_all,
    qe,
    qe_detailed,
    sign_at,
    to_prenex,
    truth_evaluate,
)
from pmcad.projection import ProjectionLevel, ProjectionSequence

X = VarOrder(["x"])
XY = VarOrder(["x", "y"])
XYZ = VarOrder(["x", "y", "z"])


def _p(order, build):
    vs = {n: Poly.var(order, n) for n in order.names}
    return build(vs)


CIRCLE = _p(XY, lambda v: v["x"] * v["x"] + v["y"] * v["y"] - 1)


def _circle_seq():
    return project_all([CIRCLE], XY)


def test_circle_full_cad_has_thirteen_cells():
    tree = build_cad(_circle_seq())
    assert tree.cell_count == 13
    profile = []
    for base in tree.root.children:
        profile.append(len(base.children))
    assert profile == [1, 3, 5, 3, 1]


def test_cell_count_identity_per_stack():
    tree = build_cad(_circle_seq())
    for base in [tree.root] + list(tree.root.children):
        if not base.children:
            continue
        m = sum(1 for c in base.children if c.index[-1] % 2 == 0)
        assert len(base.children) == 2 * m + 1


def test_dimension_counts_odd_index_entries():
    tree = build_cad(_circle_seq())
    for cell in tree.all_cells():
        assert cell.dim == sum(1 for p in cell.index if p % 2 == 1)
        assert len(cell.sample.coords) == len(cell.index)


def test_cells_are_cylindrical():
    tree = build_cad(_circle_seq())
    for cell in tree.all_cells():
        for ch in cell.children:
            assert ch.index[:-1] == cell.index


def test_recorded_signs_match_samples():
    tree = build_cad(_circle_seq())
    for leaf in tree.leaves():
        for f, s in leaf.signs.items():
            assert sign_at(f, leaf.sample) == s


def test_sector_sections_alternate_in_y():
    tree = build_cad(_circle_seq())
    mid = tree.root.children[2]
    ys = [c.sample.coords[-1] for c in mid.children]
    for a, b in zip(ys, ys[1:]):
        from pmcad import compare

        assert compare(a, b) < 0


def test_layered_two_keeps_full_dimensional_cells():
    seq = _circle_seq()
    full = build_cad(seq)
    lay = build_cad(seq, CADOptions(layered=2))
    leaves = lay.leaves()
    assert len(leaves) == 5
    assert all(c.dim == 2 for c in leaves)
    want = {c.index for c in full.leaves() if c.dim == 2}
    assert {c.index for c in leaves} == want


def test_manifold_circle_has_six_cells():
    seq = project_all([CIRCLE], XY, ec=CIRCLE)
    tree = build_cad(seq, CADOptions(manifold=True))
    leaves = tree.leaves()
    assert len(leaves) == 6
    secs = [c for c in leaves if len(c.index) == 2]
    outer = [c for c in leaves if len(c.index) == 1]
    assert {c.index for c in secs} == {(2, 2), (3, 2), (3, 4), (4, 2)}
    assert {c.index for c in outer} == {(1,), (5,)}
    for c in secs:
        assert sign_at(CIRCLE, c.sample) == 0


def test_manifold_needs_equational_projection():
    with pytest.raises(UsageError):
        build_cad(_circle_seq(), CADOptions(manifold=True))


def test_truth_marks_open_disk_interior():
    tree = build_cad(_circle_seq())
    truth_evaluate(tree, Atom(CIRCLE, "<"))
    true_cells = [c.index for c in tree.leaves() if c.truth]
    assert true_cells == [(3, 3)]


def test_truth_constant_formulas():
    tree = build_cad(_circle_seq())
    truth_evaluate(tree, Atom(CIRCLE * CIRCLE + 1, ">"))
    assert all(c.truth for c in tree.leaves())
    truth_evaluate(tree, Atom(CIRCLE * CIRCLE + 1, "<"))
    assert not any(c.truth for c in tree.leaves())


def test_truth_rejects_root_atoms():
    tree = build_cad(_circle_seq())
    rc = RootCmp("y", "<", 1, CIRCLE)
    with pytest.raises(UsageError):
        truth_evaluate(tree, rc)


def test_locate_descends_to_leaves():
    tree = build_cad(_circle_seq())
    assert tree.locate((0, 0)).index == (3, 3)
    assert tree.locate((2, 0)).index == (5, 1)
    assert tree.locate((1, 0)).index == (4, 2)
    assert tree.locate((Fraction(1, 2), Fraction(7, 8))).index == (3, 5)
    assert tree.locate((0,)).index == (3,)


def test_locate_on_pruned_trees():
    seq = _circle_seq()
    lay = build_cad(seq, CADOptions(layered=2))
    with pytest.raises(UsageError):
        lay.locate((1, 0))
    mseq = project_all([CIRCLE], XY, ec=CIRCLE)
    man = build_cad(mseq, CADOptions(manifold=True))
    assert man.locate((1, 0)).index == (4, 2)
    with pytest.raises(UsageError):
        man.locate((0, 0))


@settings(max_examples=80, derandomize=True)
@given(st.integers(-40, 40), st.integers(-40, 40))
def test_locate_agrees_with_direct_sign(nx, ny):
    qx = Fraction(nx, 20)
    qy = Fraction(ny, 20)
    leaf = _LOCATE_TREE.locate((qx, qy))
    val = qx * qx + qy * qy - 1
    want = (val > 0) - (val < 0)
    assert leaf.signs[CIRCLE] == want


_LOCATE_TREE = build_cad(_circle_seq())


def test_qe_exists_circle_projects_to_interval():
    f = Exists("y", Atom(CIRCLE, "="))
    got = qe(f, XY)
    x = Poly.var(X, "x")
    assert got == Atom(x * x - 1, "<=")


def test_qe_forall_parabola():
    f = _p(XY, lambda v: v["y"] * v["y"] + v["x"])
    got = qe(Forall("y", Atom(f, ">")), XY)
    assert got == Atom(Poly.var(X, "x"), ">")


def test_qe_closed_sentences():
    y = Poly.var(VarOrder(["y"]), "y")
    assert qe(Exists("y", Atom(y, ">")), VarOrder(["y"])) is TRUE
    assert qe(Forall("y", Atom(y * y, "<")), VarOrder(["y"])) is not TRUE


def test_qe_quantifier_free_passthrough():
    f = Atom(CIRCLE, "<")
    assert qe(f, XY) == f


def test_qe_matrix_without_top_variable():
    f = Exists("y", Atom(_p(XY, lambda v: v["x"]), ">"))
    assert qe(f, XY) == Atom(Poly.var(X, "x"), ">")


def test_qe_block_must_be_innermost():
    f = Exists("x", Atom(CIRCLE, "="))
    with pytest.raises(UsageError):
        qe(f, XY)


def test_qe_rejects_root_atom_input():
    f = Exists("y", RootCmp("y", "=", 1, CIRCLE))
    with pytest.raises(UsageError):
        qe(f, XY)


def test_qe_explicit_constraint_needs_existential():
    f = Forall("y", Atom(CIRCLE, "="))
    with pytest.raises(UsageError):
        qe(f, XY, QEOptions(ec=CIRCLE))


def test_qe_full_route_matches_partial():
    f = Exists("y", Atom(CIRCLE, "="))
    assert qe(f, XY, QEOptions(partial=False)) == qe(f, XY)
    g = Forall("y", Atom(_p(XY, lambda v: v["y"] * v["y"] + v["x"]), ">"))
    assert qe(g, XY, QEOptions(partial=False)) == qe(g, XY)


def test_qe_partial_short_circuits():
    f = Exists("y", Atom(CIRCLE, "="))
    _, tree = qe_detailed(f, XY, QEOptions(ec=None))
    mid = tree.cell_at((3,))
    truths = [c.truth for c in mid.children]
    assert truths == [False, True, None, None, None]


def test_qe_constraint_route_lifts_sections_only():
    f = Exists("y", Atom(CIRCLE, "="))
    _, tree = qe_detailed(f, XY)
    mid = tree.cell_at((3,))
    assert [c.index for c in mid.children] == [(3, 2), (3, 4)]
    assert [c.truth for c in mid.children] == [True, None]


def test_qe_without_constraint_route():
    f = Exists("y", Atom(CIRCLE, "="))
    assert qe(f, XY, QEOptions(ec=None)) == qe(f, XY)


def test_benign_nullification_over_point_base():
    f = _p(XYZ, lambda v: v["x"] * v["z"] - v["y"])
    tree = build_cad(project_all([f], XYZ))
    assert tree.cell_count == 21
    pinch = tree.cell_at((2, 2))
    assert len(pinch.children) == 1
    only = pinch.children[0]
    assert only.index == (2, 2, 1)
    assert only.signs[f] == 0


def test_positive_dimensional_nullification_fails():
    g = _p(XYZ, lambda v: (v["y"] - v["x"]) * (v["z"] + v["x"] + 1))
    line = _p(XYZ, lambda v: v["y"] - v["x"])
    seq = ProjectionSequence(
        order=XYZ,
        levels=(
            ProjectionLevel(var="z", factors=(g,)),
            ProjectionLevel(var="y", factors=(line,)),
            ProjectionLevel(var="x", factors=()),
        ),
    )
    with pytest.raises(WellOrientednessError) as ei:
        build_cad(seq)
    assert "variable order" in str(ei.value)


def test_cell_budget_enforced():
    with pytest.raises(ResourceLimitError) as ei:
        build_cad(_circle_seq(), CADOptions(max_cells=3))
    assert ei.value.cells is not None and ei.value.cells > 3


def test_time_budget_enforced():
    with pytest.raises(ResourceLimitError) as ei:
        build_cad(_circle_seq(), CADOptions(max_seconds=0.0))
    assert ei.value.seconds == 0.0


def test_threaded_build_matches_serial():
    seq = _circle_seq()
    a = build_cad(seq)
    b = build_cad(seq, CADOptions(threads=3))
    assert [c.index for c in a.all_cells()] == [c.index for c in b.all_cells()]
    assert [c.signs for c in a.leaves()] == [c.signs for c in b.leaves()]


def test_threaded_qe_matches_serial():
    f = Exists("y", Atom(CIRCLE, "="))
    assert qe(f, XY, QEOptions(threads=3)) == qe(f, XY)


def test_partial_truth_lift_entry_point():
    pf = to_prenex(Exists("y", Atom(CIRCLE, "=")))
    tree = partial_truth_lift(_circle_seq(), pf)
    truths = [c.truth for c in tree.cells_at_level(1)]
    assert truths == [False, True, True, True, False]
