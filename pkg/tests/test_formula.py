from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pmcad.errors import UsageError
from pmcad.formula import (
    FALSE,
    TRUE,
    And,
    Atom,
    Exists,
    Forall,
    GridSpec,
    Not,
    Or,
    RootCmp,
    atom,
    conj,
    disj,
    eval_at,
    formula_text,
    free_vars,
    is_quantifier_free,
    mixed_sampler,
    negate_nnf,
    parse,
    sample_equivalent,
    to_prenex,
)
from pmcad.polynomial import Poly, VarOrder


ORDER = VarOrder(["x", "y"])
X = Poly.var(ORDER, "x")
Y = Poly.var(ORDER, "y")


def test_atom_canonicalization():
    a = atom(-2 * X + 2, "<")          # -2x + 2 < 0  ->  x - 1 > 0
    assert isinstance(a, Atom)
    assert str(a.poly) == "x - 1" and a.op == ">"
    assert atom(Poly.const(ORDER, 3), "<") is FALSE
    assert atom(Poly.const(ORDER, 0), "<=") is TRUE
    assert atom(X - X, "/=") is FALSE


def test_conj_disj_folding():
    a = atom(X, ">")
    b = atom(Y, "<")
    assert conj([a, TRUE, b]) == And([a, b])
    assert conj([a, FALSE]) is FALSE
    assert disj([FALSE, a]) == a
    assert disj([a, TRUE, b]) is TRUE
    assert conj([a, conj([b, a])]) == And([a, b, a])


def test_parse_spec_examples():
    f = parse(r"vars t. (E t)[0 < t /\ t < 1]")
    assert isinstance(f, Exists) and f.var == "t"
    assert isinstance(f.body, And) and len(f.body.args) == 2
    g = parse("vars y. ~[y < 0]")
    assert isinstance(g, Not)
    assert isinstance(g.arg, Atom) and g.arg.op == "<"


def test_parse_rationals_powers_and_errors():
    f = parse("vars x. 1/2 * x^2 - 3 >= 0")
    assert isinstance(f, Atom)
    assert str(f.poly) == "x^2 - 6"
    with pytest.raises(UsageError):
        parse("vars x. x + ")
    with pytest.raises(UsageError):
        parse("vars x. z > 0")
    with pytest.raises(UsageError):
        parse("x > 0")  # no header and no order
    assert isinstance(parse("x > 0", VarOrder(["x"])), Atom)


def test_parse_implication_desugar():
    f = parse(r"vars x, y. x > 0 ==> y > 0")
    assert isinstance(f, Or)
    assert eval_at(f, {"x": -1, "y": -5})
    assert not eval_at(f, {"x": 1, "y": -5})
    assert eval_at(f, {"x": 1, "y": 5})


def test_print_parse_round_trip():
    cases = [
        atom(X ** 2 + Y ** 2 - 1, "<"),
        conj([atom(X, ">"), atom(Y - 1, "<=")]),
        disj([atom(X + Y, "="), conj([atom(X, "/="), atom(Y, ">=")])]),
        Not(atom(X * Y - Fraction(1, 2), ">")),
        Exists("y", conj([atom(Y - X, ">"), atom(Y + X, "<")])),
        Forall("x", disj([atom(X, ">="), atom(X + 1, "<")])),
        TRUE,
        FALSE,
        RootCmp("y", "<", 2, Y ** 2 - X),
        RootCmp("y", ">=", 1, Y ** 3 - X * Y + 1),
        conj([RootCmp("y", ">", 1, Y ** 2 - X), RootCmp("y", "<", 2, Y ** 2 - X)]),
    ]
    for f in cases:
        text = formula_text(f, ORDER)
        g = parse(text)
        assert g == f, text
        assert formula_text(g, ORDER) == text


def test_negate_nnf_de_morgan():
    f = conj([atom(X, "<"), atom(Y, "=")])
    n = negate_nnf(f)
    assert n == disj([atom(X, ">="), atom(Y, "/=")])
    with pytest.raises(UsageError):
        negate_nnf(Exists("x", atom(X, ">")))


@settings(max_examples=80, deadline=None, derandomize=True)
@given(st.integers(min_value=-8, max_value=8), st.integers(min_value=-8, max_value=8))
def test_negate_nnf_complements_off_boundary(a, b):
    f = disj([conj([atom(X - 2, "<"), atom(Y + 1, ">")]),
              atom(X * Y - 3, ">="),
              Not(atom(X + Y, "<="))])
    n = negate_nnf(f)
    pt = {"x": Fraction(2 * a + 1, 2), "y": Fraction(2 * b + 1, 2)}
    vanish = any(p.eval_frac(pt) == 0 for p in (X - 2, Y + 1, X * Y - 3, X + Y))
    got_f = eval_at(f, pt)
    got_n = eval_at(n, pt)
    assert got_f != got_n or vanish
    # double negation restores truth everywhere
    assert eval_at(negate_nnf(n), pt) == got_f


def test_to_prenex_hoist():
    f = disj([atom(X, ">"), Exists("y", atom(Y - X, "<"))])
    p = to_prenex(f)
    assert p.prefix == (("E", "y"),)
    assert is_quantifier_free(p.matrix)
    g = Exists("x", Forall("y", atom(X - Y, "<")))
    q = to_prenex(g)
    assert q.prefix == (("E", "x"), ("A", "y"))
    assert q.matrix == atom(X - Y, "<")
    assert q.formula() == g


def test_to_prenex_negation_flips():
    f = Not(Exists("y", atom(Y - X, ">")))
    p = to_prenex(f)
    assert p.prefix == (("A", "y"),)
    assert p.matrix == Not(atom(Y - X, ">"))


def test_to_prenex_renames_clashes():
    f = conj([Exists("y", atom(Y - X, ">")), Exists("y", atom(Y + X, "<"))])
    p = to_prenex(f)
    assert len(p.prefix) == 2
    names = [v for _, v in p.prefix]
    assert len(set(names)) == 2
    # semantics preserved: both say "some y above x" and "some y below -x"
    grid = GridSpec(Fraction(-4), Fraction(4), Fraction(1, 2))
    for xv in (Fraction(-2), Fraction(0), Fraction(2)):
        assert eval_at(p.formula(), {"x": xv}, grid) == eval_at(f, {"x": xv}, grid)


def test_eval_quantifier_needs_grid():
    f = Exists("y", atom(Y - X, ">"))
    with pytest.raises(UsageError):
        eval_at(f, {"x": 0})
    grid = GridSpec(Fraction(-2), Fraction(2), Fraction(1, 4))
    assert eval_at(f, {"x": 0}, grid)
    assert not eval_at(Forall("y", atom(Y - X, ">")), {"x": 0}, grid)


def test_eval_rootcmp():
    # y between the two roots of y^2 - x at x = 4: roots -2, 2
    lowcut = RootCmp("y", ">", 1, Y ** 2 - X)
    highcut = RootCmp("y", "<", 2, Y ** 2 - X)
    band = conj([lowcut, highcut])
    assert eval_at(band, {"x": 4, "y": 0})
    assert not eval_at(band, {"x": 4, "y": 3})
    assert not eval_at(band, {"x": 4, "y": -2})
    # no real roots at x = -1: atom is false
    assert not eval_at(lowcut, {"x": -1, "y": 0})


def test_free_vars_and_qf():
    f = Exists("y", conj([atom(Y - X, ">"), atom(X, "<")]))
    assert free_vars(f) == ("x",)
    assert not is_quantifier_free(f)
    assert is_quantifier_free(f.body)


def test_sample_equivalent_self_and_boundary():
    f = atom(X, ">")
    g = atom(X, ">=")
    sampler = mixed_sampler(("x",), seed=7, bias_formulas=(f, g))
    verdict = sample_equivalent(f, f, sampler, 50)
    assert verdict == ("no-counterexample", 50)
    verdict = sample_equivalent(f, g, mixed_sampler(("x",), seed=7, bias_formulas=(f, g)), 10000)
    assert verdict[0] == "counterexample"
    assert verdict[1]["x"] == 0


def test_sample_equivalent_checks_vars():
    with pytest.raises(UsageError):
        sample_equivalent(atom(X, ">"), atom(Y, ">"), mixed_sampler(("x",), 1), 5)
    with pytest.raises(UsageError):
        sample_equivalent(Exists("y", atom(Y, ">")), TRUE, mixed_sampler((), 1), 5)


def test_formula_text_stability():
    f = conj([atom(X ** 2 + Y ** 2 - 1, "<"), disj([atom(X, ">"), atom(Y, ">")])])
    text = formula_text(f)
    assert text == r"vars x, y. x^2 + y^2 - 1 < 0 /\ [x > 0 \/ y > 0]"
    assert parse(text) == f
