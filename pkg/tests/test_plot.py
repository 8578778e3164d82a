"""Exact-classification raster plots of plane decompositions."""

import hashlib
from fractions import Fraction

import pytest

from pmcad import Poly, VarOrder, build_cad, plot_2d, project_all, truth_evaluate
from pmcad.errors import UsageError
from pmcad.formula import atom

XY = VarOrder(["x", "y"])
X_ = Poly.var(XY, "x")
Y_ = Poly.var(XY, "y")
CIRCLE = X_ * X_ + Y_ * Y_ - 1

# sha256 of renders checked structurally once (boundary ring present,
# expected color classes, exact window) and frozen as regression anchors
CIRCLE_SHA = "7c129ee0e2900d607b91b7653b661a1085d79746614e954e1df785d3cbd58543"
CIRCLE_TRUTH_SHA = "2667d7fea9d373a96441b0181886fbe2d0244ef89ccd54b626ac8f9a33315c18"


def _circle_tree():
    return build_cad(project_all([CIRCLE], XY))


def _pixels(img: bytes) -> list:
    body = img[img.index(b"255\n") + 4:]
    return [bytes(body[k:k + 3]) for k in range(0, len(body), 3)]


def test_default_window_matches_reference_figure():
    img = plot_2d(_circle_tree())
    # [-7,2] x [-2,7] at step 1/40 is a 361x361 grid
    assert img.startswith(b"P6\n361 361\n255\n")


def test_circle_render_is_frozen():
    tree = _circle_tree()
    img = plot_2d(tree, xrange=(-2, 2), yrange=(-2, 2), step=Fraction(1, 20))
    assert img == plot_2d(tree, xrange=(-2, 2), yrange=(-2, 2), step=Fraction(1, 20))
    assert hashlib.sha256(img).hexdigest() == CIRCLE_SHA
    px = _pixels(img)
    assert px.count(b"\x00\x00\x00") > 100  # boundary ring is drawn
    assert len(set(px)) >= 5


def test_truth_marks_change_the_shading():
    tree = _circle_tree()
    truth_evaluate(tree, atom(CIRCLE, "<"))
    img = plot_2d(tree, xrange=(-2, 2), yrange=(-2, 2), step=Fraction(1, 20))
    assert hashlib.sha256(img).hexdigest() == CIRCLE_TRUTH_SHA
    assert CIRCLE_TRUTH_SHA != CIRCLE_SHA


def test_svg_output():
    tree = _circle_tree()
    svg = plot_2d(tree, xrange=(-1, 1), yrange=(-1, 1), step=Fraction(1, 4), fmt="svg")
    text = svg.decode("ascii")
    assert text.startswith("<svg ") and text.endswith("</svg>")
    assert "<rect " in text
    assert svg == plot_2d(tree, xrange=(-1, 1), yrange=(-1, 1), step=Fraction(1, 4), fmt="svg")


def test_empty_basis_renders_single_color():
    tree = build_cad(project_all([], XY))
    img = plot_2d(tree, xrange=(-1, 1), yrange=(-1, 1), step=Fraction(1, 10))
    assert len(set(_pixels(img))) == 1


def test_slice_of_three_variable_tree():
    xyz = VarOrder(["x", "y", "z"])
    x, y, z = (Poly.var(xyz, v) for v in "xyz")
    tree = build_cad(project_all([x * z - y], xyz))
    img = plot_2d(tree, xrange=(-2, 2), yrange=(-2, 2), step=Fraction(1, 10), fixed={"z": 1})
    px = set(_pixels(img))
    assert b"\x00\x00\x00" in px  # the line x = y shows up
    assert len(px) >= 3
    with pytest.raises(UsageError):
        plot_2d(tree, step=Fraction(1, 10))
    with pytest.raises(UsageError):
        plot_2d(tree, step=Fraction(1, 10), fixed={"w": 0})


def test_plot_argument_validation():
    tree = _circle_tree()
    with pytest.raises(UsageError):
        plot_2d(tree, step=0)
    with pytest.raises(UsageError):
        plot_2d(tree, step=Fraction(-1, 4))
    with pytest.raises(UsageError):
        plot_2d(tree, step=Fraction(1, 4), fmt="png")
    with pytest.raises(UsageError):
        plot_2d(tree, xrange=(2, -2), step=Fraction(1, 4))
    with pytest.raises(UsageError):
        plot_2d(tree, step=Fraction(1, 4), fixed={"z": 0})
    xo = VarOrder(["x"])
    uni = build_cad(project_all([Poly.var(xo, "x")], xo))
    with pytest.raises(UsageError):
        plot_2d(uni, step=Fraction(1, 4))
