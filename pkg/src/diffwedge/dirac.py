"""Clifford modules and Dirac operators over wedges of lines.

On a single chart the module is the exterior algebra of the one-form
line, with basis (1, dx) and action c(a dx) = a dx wedge . minus a h
contraction; the Dirac operator of a connection is the action applied
to the one-form slot of the connection value.  Gluing two such modules
uses the multiplicative extension of the one-form glue map dx -> a dy,
which is an isometry exactly when h1 = a^2 h2 at the glue point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import symexpr
from .symexpr import ZERO, ONE, simplify
from .bundle import PseudoBundle, as_expr, eval_vector, glue_bundles, \
    make_section, trivial_bundle
from .connection import Connection, apply_connection, connection_value_at, \
    glue_connections, levi_civita
from .forms import OneFormBundle, g_lambda
from .linalg import mat_mul, mat_vec
from .wedge import WedgeComplex, _as_point


@dataclass(frozen=True)
class CliffordModule:
    """Exterior module of a one-form bundle: per-chart fibre (1, dx)."""

    bundle: PseudoBundle     # total module bundle, metric diag(1, h)
    lam: OneFormBundle       # the one-form bundle it is built over
    scales: dict             # glue point -> scalar of the one-form glue map

    def action_matrix(self, cid, x, alpha):
        """c(alpha dx) on the fibre over x of one chart, on basis (1, dx)."""
        h = self.lam.h_at(cid, x)
        return [[0, -alpha * h], [alpha, 0]]


def exterior_module(lam1, lam2, glue_points, scale=1):
    """Glue the exterior modules of two one-form bundles.

    ``glue_points`` pairs points of the first base with points of the
    second; ``scale`` is the coefficient a of the one-form glue map
    dx -> a dy (its multiplicative extension glues the modules).  The
    metric gate h1 = a^2 h2 at each glue point is enforced by the bundle
    gluing itself.
    """
    a = Fraction(scale)
    if a == 0:
        raise ValueError("one-form glue map must be invertible")
    b1 = _leg_module(lam1)
    b2 = _leg_module(lam2)
    fprime = [[Fraction(1), Fraction(0)], [Fraction(0), a]]
    glued = glue_bundles(b1, b2, glue_points, fprime)
    h = {**lam1.h, **lam2.h}
    lam = OneFormBundle(glued.base, h, glued.gluing)
    scales = {_as_point(p): a for p, _ in glue_points}
    return CliffordModule(glued, lam, scales)


def single_chart_module(lam):
    """Exterior module of a one-chart one-form bundle (no gluing)."""
    return CliffordModule(_leg_module(lam), lam, {})


def _leg_module(lam):
    fibres = {}
    metrics = {}
    for c in lam.base.charts:
        from .dvspace import standard_model
        fibres[c.id] = standard_model(2)
        metrics[c.id] = [[ONE, ZERO], [ZERO, lam.h[c.id]]]
    return trivial_bundle(lam.base, fibres, metrics)


def check_action_compatibility(module):
    """Equivariance of the leg actions through the paired glue maps.

    For each glue class and each paired one-form (dx, a dy) the identity
    c2(a dy) o f' = f' o c1(dx) must hold on the module basis; returns
    (verdict, witness).
    """
    bundle = module.bundle
    for i, cls in enumerate(bundle.base.glue_classes):
        rep = bundle.rep_point(i)
        for p in cls:
            if p == rep:
                continue
            fpr = bundle.glue_map(i, p)
            a = module.scales.get(p, Fraction(1))
            c1 = module.action_matrix(p[0], p[1], 1)
            c2 = module.action_matrix(rep[0], rep[1], a)
            lhs = mat_mul(c2, fpr)
            rhs = mat_mul(fpr, c1)
            if any(abs(u - v) > 1e-12 for ru, rv in zip(lhs, rhs)
                   for u, v in zip(ru, rv)):
                return False, (f"glue point {p}: c2(a dy) f' = {lhs} but "
                               f"f' c1(dx) = {rhs}")
    return True, ""


def induced_action(module, class_index, lam_value, e):
    """Action of a glue-fibre one-form on the representative module fibre.

    ``lam_value`` maps branches to coefficients; only the representative
    branch acts (the projection to the second leg), which is what makes
    the glued action well defined.
    """
    rep = module.bundle.rep_point(class_index)
    alpha = lam_value[rep]
    return mat_vec(module.action_matrix(rep[0], rep[1], alpha), e)


def clifford_algebra_map(module, glue_point):
    """Multiplicative extension of the one-form glue map on (1, e) blades."""
    a = module.scales[_as_point(glue_point)]
    return [[Fraction(1), Fraction(0)], [Fraction(0), a]]


def check_algebra_morphism(module, glue_point, tol=1e-12):
    """Does the extended map preserve Clifford products of the glue fibres?

    Products taken in the rank-1 algebras with forms h1 and h2 at the
    glue coordinates: (z1 + w1 e)(z2 + w2 e) = z1z2 - h w1w2 + (z1w2 +
    z2w1) e.
    """
    p = _as_point(glue_point)
    i = module.bundle.base.class_of(p)
    rep = module.bundle.rep_point(i)
    a = module.scales[p]
    h1 = module.lam.h_at(p[0], p[1])
    h2 = module.lam.h_at(rep[0], rep[1])

    def mul(h, u, v):
        return (u[0] * v[0] - h * u[1] * v[1], u[0] * v[1] + u[1] * v[0])

    basis = [(1, 0), (0, 1), (1, 1), (2, -3)]
    for u in basis:
        for v in basis:
            fu = (u[0], a * u[1])
            fv = (v[0], a * v[1])
            lhs = mul(h2, fu, fv)
            prod = mul(h1, u, v)
            rhs = (prod[0], a * prod[1])
            if any(abs(l - r) > tol for l, r in zip(lhs, rhs)):
                return False, f"products differ on {u}, {v}: {lhs} != {rhs}"
    return True, ""


def check_unitarity(module, points_per_chart, glue=True, tol=1e-10):
    """g_E(c(alpha)e, c(alpha)e') = g_E(e, e') for unit one-forms alpha.

    On charts alpha = dx / sqrt(h); at glue fibres alpha is the paired
    unit form (components related by the glue scale, normalized in the
    weighted glue metric).
    """
    worst = 0.0
    basis = [[1, 0], [0, 1], [1, 1]]
    for cid, pts in points_per_chart.items():
        for x in pts:
            h = module.lam.h_at(cid, x)
            alpha = 1 / float(h) ** 0.5
            c = module.action_matrix(cid, x, alpha)
            gE = [[1, 0], [0, h]]
            for e1 in basis:
                for e2 in basis:
                    u, v = mat_vec(c, e1), mat_vec(c, e2)
                    lhs = sum(u[i] * gE[i][j] * v[j] for i in range(2) for j in range(2))
                    rhs = sum(e1[i] * gE[i][j] * e2[j] for i in range(2) for j in range(2))
                    worst = max(worst, abs(float(lhs - rhs)))
    if glue:
        for i, cls in enumerate(module.bundle.base.glue_classes):
            rep = module.bundle.rep_point(i)
            g = g_lambda(module.lam, rep)
            branches = module.lam.fibre_branches(rep)
            # paired form: source components scaled so each maps onto the
            # representative's, then normalized in the weighted glue metric
            comp = {}
            for br in branches:
                comp[br] = 1 / float(module.scales.get(br, Fraction(1)))
            norm = sum(g[k][k] * comp[br] ** 2
                       for k, br in enumerate(branches)) ** 0.5
            value = {br: comp[br] / norm for br in branches}
            h2 = module.lam.h_at(rep[0], rep[1])
            gE = [[1, 0], [0, h2]]
            for e1 in basis:
                for e2 in basis:
                    u = induced_action(module, i, value, e1)
                    v = induced_action(module, i, value, e2)
                    lhs = sum(u[a_] * gE[a_][b_] * v[b_]
                              for a_ in range(2) for b_ in range(2))
                    rhs = sum(e1[a_] * gE[a_][b_] * e2[b_]
                              for a_ in range(2) for b_ in range(2))
                    worst = max(worst, abs(float(lhs - rhs)))
    return worst <= tol, worst


def clifford_connection(module, lam_conn=None):
    """Connection on the module induced by the one-form connection.

    For the exterior module the Christoffel matrix is diag(0, Gamma),
    where Gamma is the one-form Christoffel symbol (by default the
    metric connection h'/(2h)).
    """
    if lam_conn is None:
        lam_conn = levi_civita(module.lam)
    gamma = {cid: [[ZERO, ZERO], [ZERO, g[0][0]]]
             for cid, g in lam_conn.gamma.items()}
    return Connection(module.bundle, gamma, "generic")


def check_clifford_connection(module, conn_e, lam_conn, batteries, points,
                              tol=1e-9):
    """The derivation identity of the module connection against the action.

    For each (t, alpha, r) in ``batteries`` (vector field coefficient,
    one-form coefficient, module section components, all chartwise
    expressions) check
        nabla^E_t(c(alpha dx) r)
          = c((nabla^Lambda_t alpha) dx) r + c(alpha dx) nabla^E_t r
    at the sampled points.
    """
    worst = 0.0
    for t, alpha, r in batteries:
        for cid in t:
            al = as_expr(alpha[cid])
            u, w = as_expr(r[cid][0]), as_expr(r[cid][1])
            h = module.lam.h[cid]
            gam_e = conn_e.gamma[cid]
            gam_l = lam_conn.gamma[cid][0][0]
            b = as_expr(t[cid])
            # c(alpha dx) r = (-h alpha w, alpha u)
            cu = simplify(ZERO - h * al * w)
            cw = simplify(al * u)
            lhs = [b * (_dx(cu) + gam_e[0][0] * cu + gam_e[0][1] * cw),
                   b * (_dx(cw) + gam_e[1][0] * cu + gam_e[1][1] * cw)]
            nal = b * (_dx(al) + gam_l * al)
            nu = b * (_dx(u) + gam_e[0][0] * u + gam_e[0][1] * w)
            nw = b * (_dx(w) + gam_e[1][0] * u + gam_e[1][1] * w)
            rhs = [ZERO - h * nal * w + (ZERO - h * al * nw),
                   nal * u + al * nu]
            for x in points.get(cid, []):
                for l, rr in zip(lhs, rhs):
                    d = abs(symexpr.evaluate(simplify(l), x)
                            - symexpr.evaluate(simplify(rr), x))
                    worst = max(worst, float(d))
    return worst <= tol, worst


def _dx(e):
    return simplify(symexpr.differentiate(e))


@dataclass(frozen=True)
class DiracOperator:
    module: CliffordModule
    connection: Connection


def dirac(module, conn_e=None):
    if conn_e is None:
        conn_e = clifford_connection(module)
    return DiracOperator(module, conn_e)


def apply_dirac_chart(d, comps, cid):
    """D s on one chart, as expression components (u, w) of u + w dx.

    D s = c(dx)(s' + Gamma s): the one-form slot of the connection value
    fed back through the action.
    """
    gam = d.connection.gamma[cid]
    u, w = as_expr(comps[cid][0]), as_expr(comps[cid][1])
    h = d.module.lam.h[cid]
    du = _dx(u) + gam[0][0] * u + gam[0][1] * w
    dw = _dx(w) + gam[1][0] * u + gam[1][1] * w
    return [simplify(ZERO - h * dw), simplify(du)]


def apply_dirac(d, comps):
    return {cid: apply_dirac_chart(d, comps, cid) for cid in comps}


def dirac_value_at(d, comps, p):
    """Value of D s at a point, through the glue-fibre assembly.

    At a glue class the connection value is the branch sum of pushed
    one-form slots; the induced action projects to the representative
    branch, so the result lives in the representative module fibre.
    """
    p = _as_point(p)
    base = d.module.bundle.base
    i = base.class_of(p)
    if i is None:
        return eval_vector(apply_dirac_chart(d, comps, p[0]), p[1])
    nabla = connection_value_at(d.connection, comps, p)
    rep = d.module.bundle.rep_point(i)
    # c~ = action of the representative branch on its slot of the value
    return mat_vec(d.module.action_matrix(rep[0], rep[1], 1), nabla[rep])


def glue_dirac(d1, d2, module):
    """Dirac operator of the glued module from the leg operators.

    Preconditions (metric gate, action equivariance) are enforced or
    checkable via the module constructor and check_action_compatibility;
    the glued connection is the chart union with generic glue assembly.
    """
    ok, witness = check_action_compatibility(module)
    if not ok:
        raise ValueError(f"leg actions not compatible: {witness}")
    conn = glue_connections(d1.connection, d2.connection, module.bundle,
                            "generic")
    return DiracOperator(module, conn)


def verify_splitting(d, s1_comps, s2_comps, points, tol=1e-10):
    """Glued-operator value versus glued leg values at the given points.

    Both sides are representative-fibre values; at glue classes the
    right side is the second leg's Dirac value, the left side is the
    full glue-fibre assembly.
    """
    module = d.module
    comps = {**s1_comps, **s2_comps}
    worst = 0.0
    leg1 = apply_dirac(d, s1_comps)
    leg2 = apply_dirac(d, s2_comps)
    legs = {**leg1, **leg2}
    for p in points:
        p = _as_point(p)
        lhs = dirac_value_at(d, comps, p)
        i = module.bundle.base.class_of(p)
        q = module.bundle.rep_point(i) if i is not None else p
        rhs = eval_vector(legs[q[0]], q[1])
        for l, r in zip(lhs, rhs):
            worst = max(worst, abs(float(l - r)))
    return worst <= tol, worst
