import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from diffwedge import symexpr
from diffwedge.symexpr import (Const, ExprSyntaxError, ZERO, ONE, X,
                               differentiate, evaluate, parse_expr, simplify,
                               to_str)


def test_parse_and_exact_eval():
    e = parse_expr("(x^2+1)/3 - 2*x")
    assert evaluate(e, Fraction(1, 2)) == Fraction(5, 12) - 1
    assert isinstance(evaluate(e, Fraction(2)), Fraction)


def test_decimal_literals():
    assert evaluate(parse_expr("0.25*x"), 4) == 1


def test_precedence():
    assert evaluate(parse_expr("2+3*4"), 0) == 14
    assert evaluate(parse_expr("2*3^2"), 0) == 18
    assert evaluate(parse_expr("-x^2"), 3) == -9
    assert evaluate(parse_expr("(2+3)*4"), 0) == 20


def test_unary_minus_chain():
    assert evaluate(parse_expr("--x"), 5) == 5
    assert evaluate(parse_expr("2--3"), 0) == 5


def test_functions():
    assert evaluate(parse_expr("exp(0)"), 0) == pytest.approx(1.0)
    assert evaluate(parse_expr("sin(x)+cos(x)"), 0.0) == pytest.approx(1.0)


def test_syntax_error_column():
    with pytest.raises(ExprSyntaxError) as exc:
        parse_expr("x^^2")
    assert exc.value.column == 3


def test_unknown_identifier():
    with pytest.raises(ExprSyntaxError):
        parse_expr("x + y")


def test_function_needs_parens():
    with pytest.raises(ExprSyntaxError):
        parse_expr("exp x")


def test_zero_division():
    with pytest.raises(ZeroDivisionError):
        evaluate(parse_expr("1/x"), 0)
    with pytest.raises(ZeroDivisionError):
        evaluate(parse_expr("x^-1"), 0)


CASES = [
    "x^3 - 2*x + 5",
    "exp(2*x)",
    "sin(x)*cos(x)",
    "(x^2+1)/(x-3)",
    "exp(sin(x))",
    "x*exp(x) - cos(x^2)",
    "1/(x^2+1)",
    "-x^4/2 + sin(2*x+1)",
]


@pytest.mark.parametrize("text", CASES)
def test_derivative_against_sympy(text):
    e = parse_expr(text)
    de = differentiate(e)
    xs = sympy.Symbol("x")
    ref = sympy.diff(sympy.sympify(text.replace("^", "**")), xs)
    for pt in [-1.5, -0.5, 0.1, 1.0, 2.5]:
        got = float(evaluate(de, pt))
        want = float(ref.subs(xs, pt))
        assert got == pytest.approx(want, rel=1e-10, abs=1e-12)


exprs = st.deferred(lambda: st.one_of(
    st.integers(-5, 5).map(lambda v: Const(Fraction(v))),
    st.just(X),
    st.tuples(exprs, exprs).map(lambda t: t[0] + t[1]),
    st.tuples(exprs, exprs).map(lambda t: t[0] * t[1]),
    exprs.map(lambda e: -e),
))


@given(exprs)
def test_print_parse_round_trip(e):
    text = to_str(e)
    again = parse_expr(text)
    for pt in [Fraction(-2), Fraction(1, 3), Fraction(5)]:
        assert evaluate(e, pt) == evaluate(again, pt)


@given(exprs)
def test_simplify_preserves_value(e):
    s = simplify(e)
    for pt in [Fraction(-1), Fraction(0), Fraction(7, 2)]:
        assert evaluate(e, pt) == evaluate(s, pt)


def test_simplify_identities():
    assert simplify(ZERO + X) == X
    assert simplify(X * ONE) == X
    assert simplify(X * ZERO) == ZERO
    assert simplify(Const(2) + Const(3)) == Const(5)


def test_operator_overloading():
    e = (X + 1) * (X - 1)
    assert evaluate(e, Fraction(3)) == 8
    assert evaluate(X ** 3, Fraction(2)) == 8
    assert evaluate(X / 2, Fraction(5)) == Fraction(5, 2)
