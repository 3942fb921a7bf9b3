import random
from fractions import Fraction

import pytest

from diffwedge.bundle import eval_vector
from diffwedge.connection import Connection, levi_civita
from diffwedge.dirac import (CliffordModule, apply_dirac, apply_dirac_chart,
                             check_action_compatibility,
                             check_algebra_morphism, check_clifford_connection,
                             check_unitarity, clifford_algebra_map,
                             clifford_connection, dirac, dirac_value_at,
                             exterior_module, glue_dirac,
                             single_chart_module, verify_splitting)
from diffwedge.forms import lambda1
from diffwedge.symexpr import ZERO, evaluate, parse_expr
from diffwedge.wedge import line

GRID = [Fraction(t, 5) for t in range(-10, 11)]


def leg(cid, h):
    return lambda1(line(cid), {cid: h})


def wedge_module(h1="exp(x)", h2="exp(-x)", scale=1):
    return exterior_module(leg("a", h1), leg("b", h2),
                           [(("a", 0), ("b", 0))], scale)


def rnd_poly(rng, shift=0):
    c = [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(3)]
    return f"({c[0] + shift})+({c[1]})*x+({c[2]})*x^2"


def compatible_sections(rng, scale=1):
    # constant shifts so u1(0) = u2(0) and a w1(0) = w2(0)
    u1, w1 = rnd_poly(rng), rnd_poly(rng)
    u2, w2 = rnd_poly(rng), rnd_poly(rng)
    du = evaluate(parse_expr(u1), 0) - evaluate(parse_expr(u2), 0)
    dw = Fraction(scale) * evaluate(parse_expr(w1), 0) \
        - evaluate(parse_expr(w2), 0)
    s1 = {"a": [u1, w1]}
    s2 = {"b": [f"({du})+{u2}", f"({dw})+{w2}"]}
    return s1, s2


def test_module_fibres_and_metric():
    m = wedge_module()
    assert m.bundle.fibres["a"].dim == 2
    assert m.bundle.metric_at(("a", 1))[1][1] == pytest.approx(2.718281828459045)
    assert m.bundle.metric_at(("a", 1))[0][0] == 1


def test_action_matrix_examples():
    m = single_chart_module(leg("a", "1"))
    c = m.action_matrix("a", Fraction(0), 1)
    # c(dx) 1 = dx, c(dx) dx = -h 1
    assert [c[0][0], c[1][0]] == [0, 1]
    assert [c[0][1], c[1][1]] == [-1, 0]
    m2 = single_chart_module(leg("a", "x^2+1"))
    c2 = m2.action_matrix("a", Fraction(2), 1)
    assert c2[0][1] == -5


def test_action_squares_to_minus_h():
    m = single_chart_module(leg("a", "exp(x)"))
    for x in [Fraction(0), Fraction(1), Fraction(-3, 2)]:
        c = m.action_matrix("a", x, 1)
        sq = [[sum(c[i][k] * c[k][j] for k in range(2)) for j in range(2)]
              for i in range(2)]
        h = m.lam.h_at("a", x)
        assert sq[0][1] == 0 and sq[1][0] == 0
        assert sq[0][0] == pytest.approx(-h)
        assert sq[1][1] == pytest.approx(-h)


def test_metric_gate_rejects_scale_two_with_unit_metrics():
    with pytest.raises(ValueError, match="incompatible"):
        wedge_module("1", "1", scale=2)


def test_metric_gate_accepts_matched_scale():
    # h1(0) = 4 = a^2 h2(0) with a = 2
    m = wedge_module("x^2+4", "1", scale=2)
    ok, witness = check_action_compatibility(m)
    assert ok, witness
    assert clifford_algebra_map(m, ("a", 0)) == [[1, 0], [0, 2]]


def test_action_compatibility_and_morphism():
    m = wedge_module()
    ok, witness = check_action_compatibility(m)
    assert ok, witness
    ok, witness = check_algebra_morphism(m, ("a", 0))
    assert ok, witness
    m2 = wedge_module("x^2+4", "1", scale=2)
    ok, witness = check_algebra_morphism(m2, ("a", 0))
    assert ok, witness


def test_clifford_connection_leibniz_pass_and_flat_fail():
    m = wedge_module()
    lam_lc = levi_civita(m.lam)
    conn = clifford_connection(m, lam_lc)
    batteries = [({"a": "x", "b": "1"}, {"a": "x^2+1", "b": "cos(x)"},
                  {"a": ["x", "exp(x)"], "b": ["1", "x^2"]}),
                 ({"a": "1", "b": "x^2"}, {"a": "exp(x)", "b": "x"},
                  {"a": ["x^2+1", "x"], "b": ["sin(x)", "x+1"]})]
    pts = {c: GRID for c in ("a", "b")}
    ok, worst = check_clifford_connection(m, conn, lam_lc, batteries, pts,
                                          1e-9)
    assert ok, worst
    flat = Connection(m.bundle, {c: [[ZERO, ZERO], [ZERO, ZERO]]
                                 for c in ("a", "b")}, "generic")
    ok, worst = check_clifford_connection(m, flat, lam_lc, batteries, pts,
                                          1e-9)
    assert not ok and worst > 1.0


def test_unitarity():
    m = wedge_module()
    ok, worst = check_unitarity(m, {c: GRID for c in ("a", "b")}, glue=True,
                                tol=1e-9)
    assert ok, worst


def test_apply_dirac_flat_unit_metric():
    m = single_chart_module(leg("a", "1"))
    flat = Connection(m.bundle, {"a": [[ZERO, ZERO], [ZERO, ZERO]]},
                      "generic")
    d = dirac(m, flat)
    # D(u + w dx) = -h w' + u' dx
    out = apply_dirac_chart(d, {"a": ["x", "0"]}, "a")
    assert evaluate(out[0], 1) == 0 and evaluate(out[1], 1) == 1
    out = apply_dirac_chart(d, {"a": ["0", "x"]}, "a")
    assert evaluate(out[0], 1) == -1 and evaluate(out[1], 1) == 0
    out = apply_dirac_chart(d, {"a": ["0", "0"]}, "a")
    assert all(evaluate(e, 1) == 0 for e in out)


def test_dirac_squares_against_laplacian_flat_case():
    # with h = 1 and zero connection, D^2 = -d^2/dx^2 on both slots
    m = single_chart_module(leg("a", "1"))
    flat = Connection(m.bundle, {"a": [[ZERO, ZERO], [ZERO, ZERO]]},
                      "generic")
    d = dirac(m, flat)
    s = {"a": ["x^3", "cos(x)"]}
    once = apply_dirac(d, s)
    twice = apply_dirac_chart(d, {"a": once["a"]}, "a")
    import math
    for x in GRID:
        assert abs(evaluate(twice[0], x) + 6 * float(x)) < 1e-12
        assert abs(evaluate(twice[1], x) - math.cos(float(x))) < 1e-12


def test_dirac_value_at_wedge_hand_checked():
    m = wedge_module()
    d = glue_dirac(dirac_leg(m, "a"), dirac_leg(m, "b"), m)
    s1 = {"a": ["x+3", "x+1"]}
    s2 = {"b": ["x+3", "exp(x)"]}
    val = dirac_value_at(d, {**s1, **s2}, ("a", 0))
    # D2 s2 at 0 with h2 = exp(-x), Gamma2 = -1/2: (-1/2, 1)
    assert val[0] == pytest.approx(-0.5, abs=1e-12)
    assert val[1] == pytest.approx(1.0, abs=1e-12)


def dirac_leg(m, cid):
    lam = leg(cid, next(h for c, h in {"a": "exp(x)", "b": "exp(-x)",
                                       }.items() if c == cid))
    mm = single_chart_module(lam)
    return dirac(mm, clifford_connection(mm))


def test_splitting_random_battery():
    m = wedge_module()
    d1 = dirac_leg(m, "a")
    d2 = dirac_leg(m, "b")
    d = glue_dirac(d1, d2, m)
    rng = random.Random(13)
    points = [("a", x) for x in GRID] + [("b", x) for x in GRID if x != 0]
    for _ in range(5):
        s1, s2 = compatible_sections(rng)
        ok, worst = verify_splitting(d, s1, s2, points, 1e-10)
        assert ok, worst


def test_splitting_leg_restriction():
    # away from the wedge the glued operator is the leg operator
    m = wedge_module()
    d = glue_dirac(dirac_leg(m, "a"), dirac_leg(m, "b"), m)
    s = {"a": ["x^2+1", "x+2"], "b": ["x+1", "2*x+2"]}
    leg_a = apply_dirac_chart(dirac_leg(m, "a"), {"a": s["a"]}, "a")
    for x in [Fraction(1), Fraction(-2), Fraction(1, 3)]:
        got = dirac_value_at(d, s, ("a", x))
        want = eval_vector(leg_a, x)
        assert all(abs(g - w) < 1e-12 for g, w in zip(got, want))


def test_glue_dirac_rejects_incompatible_actions():
    # bypass the constructor gate to hit the action check directly
    m = wedge_module()
    bad = CliffordModule(m.bundle, m.lam,
                         {p: Fraction(3) for p in m.scales})
    with pytest.raises(ValueError, match="not compatible"):
        glue_dirac(dirac_leg(m, "a"), dirac_leg(m, "b"), bad)
