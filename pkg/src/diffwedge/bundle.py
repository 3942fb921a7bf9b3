"""Pseudo-bundles over wedge complexes.

A bundle stores, per chart, a fibre model and a metric matrix with
expression entries in the chart coordinate; per glue class it stores a
representative fibre (the second leg's, by convention) and linear glue
maps from every other incident fibre into it.  Fibre operations (sum,
tensor, dual) act chartwise; the commutativity maps between "operate
then glue" and "glue then operate" are produced explicitly so their
defining identities can be checked on bases.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from . import symexpr
from .symexpr import Const, Expr, ZERO, ONE, simplify
from .dvspace import DvsModel, check_map_compatibility, dual_metric, standard_model
from .linalg import frac_matrix, identity, inverse, mat_mul, mat_vec, transpose
from .wedge import Gluing, WedgeComplex, _as_point


def as_expr(v):
    if isinstance(v, Expr):
        return v
    if isinstance(v, str):
        return symexpr.parse_expr(v)
    return Const(Fraction(v))


def expr_matrix(rows):
    return [[as_expr(v) for v in row] for row in rows]


def eval_matrix(m, x):
    return [[symexpr.evaluate(v, x) for v in row] for row in m]


def eval_vector(v, x):
    return [symexpr.evaluate(e, x) for e in v]


def emat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    out = [[ZERO for _ in range(m)] for _ in range(n)]
    for i in range(n):
        for t in range(k):
            for j in range(m):
                out[i][j] = out[i][j] + a[i][t] * b[t][j]
    return [[simplify(v) for v in row] for row in out]


def emat_block_sum(a, b):
    n, m = len(a), len(b)
    out = [[ZERO] * (n + m) for _ in range(n + m)]
    for i in range(n):
        for j in range(n):
            out[i][j] = a[i][j]
    for i in range(m):
        for j in range(m):
            out[n + i][n + j] = b[i][j]
    return out


def emat_kron(a, b):
    n, m = len(a), len(b)
    return [[a[i][j] * b[k][l] for j in range(n) for l in range(m)]
            for i in range(n) for k in range(m)]


def _minor(m, i, j):
    return [[m[r][c] for c in range(len(m)) if c != j]
            for r in range(len(m)) if r != i]


def emat_det(m):
    if not m:
        return ONE
    if len(m) == 1:
        return m[0][0]
    out = ZERO
    for j in range(len(m)):
        term = m[0][j] * emat_det(_minor(m, 0, j))
        out = out + term if j % 2 == 0 else out - term
    return simplify(out)


def emat_inverse(m):
    """Inverse by adjugate over expression entries (small fibres only)."""
    n = len(m)
    det = emat_det(m)
    adj = [[emat_det(_minor(m, j, i)) * Const(Fraction((-1) ** (i + j)))
            for j in range(n)] for i in range(n)]
    return [[simplify(adj[i][j] / det) for j in range(n)] for i in range(n)]


@dataclass(frozen=True)
class PseudoBundle:
    base: WedgeComplex
    fibres: dict            # chart id -> DvsModel
    metrics: dict           # chart id -> Expr matrix
    gluing: Gluing | None = None
    glue_maps: tuple = ()   # per glue class: (rep point, {point: matrix})

    def fibre(self, cid):
        return self.fibres[cid]

    def rep_point(self, class_index):
        return self.glue_maps[class_index][0]

    def glue_map(self, class_index, point):
        """Linear map from the fibre at ``point`` into the representative."""
        point = _as_point(point)
        rep, maps = self.glue_maps[class_index]
        if point == rep:
            return identity(self.fibres[rep[0]].dim)
        return maps[point]

    def metric_at(self, p):
        """Fibre metric value: the representative's at glue classes."""
        p = _as_point(p)
        i = self.base.class_of(p)
        if i is not None:
            p = self.rep_point(i)
        return eval_matrix(self.metrics[p[0]], p[1])


def trivial_bundle(base, fibres, metrics):
    fibres = dict(fibres)
    metrics = {c: expr_matrix(m) for c, m in metrics.items()}
    glue = []
    for cls in base.glue_classes:
        rep = cls[-1]
        maps = {p: identity(fibres[p[0]].dim) for p in cls if p != rep}
        glue.append((rep, maps))
    return PseudoBundle(base, fibres, metrics, None, tuple(glue))


def glue_bundles(b1, b2, f, ftilde):
    """Glue two bundles along a point bijection ``f`` and fibre maps.

    ``ftilde`` maps each glue point of the first base to an invertible
    matrix into the corresponding fibre of the second bundle (a single
    matrix is broadcast).  Metric compatibility through each map is
    checked exactly at the glue coordinates.
    """
    from .wedge import glue_complexes

    gluing = glue_complexes(b1.base, b2.base, f)
    pairs = gluing.pairs
    if not isinstance(ftilde, dict):
        ftilde = {a: ftilde for a, _ in pairs}
    fibres = {**b1.fibres, **b2.fibres}
    metrics = {**b1.metrics, **b2.metrics}
    glue = []
    for cls in gluing.result.glue_classes:
        leg2 = [p for p in cls if gluing.leg_of_chart(p[0]) == 2]
        rep = leg2[-1]
        maps = {}
        for p in cls:
            if p == rep:
                continue
            fm = frac_matrix(ftilde[p]) if p in ftilde else identity(fibres[p[0]].dim)
            try:
                inverse([row[:] for row in fm])
            except ValueError:
                raise ValueError(f"glue map at {p} is not invertible")
            g1 = eval_matrix(metrics[p[0]], p[1])
            g2 = eval_matrix(metrics[rep[0]], rep[1])
            verdict = check_map_compatibility(fibres[p[0]], g1,
                                              fibres[rep[0]], g2, fm)
            if not verdict:
                raise ValueError(
                    f"incompatible metrics at glue point {p} -> {rep}: "
                    f"{verdict.witness}")
            maps[p] = fm
        glue.append((rep, maps))
    return PseudoBundle(gluing.result, fibres, metrics, gluing, tuple(glue))


# ---------------------------------------------------------------------------
# sections

@dataclass(frozen=True)
class Section:
    """Per-chart expression vectors; glue compatibility held by construction."""

    bundle: PseudoBundle
    components: dict  # chart id -> list of Expr

    def chart_value(self, cid, x):
        return eval_vector(self.components[cid], x)

    def value_at(self, p):
        """Representative fibre value (glue maps applied at glue classes)."""
        p = _as_point(p)
        i = self.bundle.base.class_of(p)
        if i is None:
            return self.chart_value(p[0], p[1])
        rep = self.bundle.rep_point(i)
        return self.chart_value(rep[0], rep[1])


def make_section(bundle, components, check=True):
    comps = {c: [as_expr(e) for e in v] for c, v in components.items()}
    s = Section(bundle, comps)
    if check:
        _check_section(s)
    return s


def _check_section(s):
    b = s.bundle
    for i, cls in enumerate(b.base.glue_classes):
        rep = b.rep_point(i)
        target = s.chart_value(rep[0], rep[1])
        for p in cls:
            if p == rep:
                continue
            pushed = mat_vec(b.glue_map(i, p), s.chart_value(p[0], p[1]))
            if any(abs(u - v) > 1e-12 for u, v in zip(pushed, target)):
                raise ValueError(
                    f"section incompatible at glue point {p}: "
                    f"{pushed} != {target}")


def glue_sections(bundle, s1_components, s2_components):
    """Join per-leg component maps into one section of the glued bundle."""
    comps = {**s1_components, **s2_components}
    return make_section(bundle, comps, check=True)


def split_section(s):
    """Per-leg components; a two-sided inverse of glue_sections here."""
    g = s.bundle.gluing
    if g is None:
        raise ValueError("bundle was not built by gluing")
    ids1 = {c.id for c in g.x1.charts}
    s1 = {c: v for c, v in s.components.items() if c in ids1}
    s2 = {c: v for c, v in s.components.items() if c not in ids1}
    return s1, s2


def section_add(s, t):
    comps = {c: [simplify(a + b) for a, b in zip(s.components[c], t.components[c])]
             for c in s.components}
    return Section(s.bundle, comps)


def section_fn_mul(h, s):
    """Multiply by a glued function: per-chart expression map ``h``."""
    comps = {c: [simplify(as_expr(h[c]) * e) for e in v]
             for c, v in s.components.items()}
    return Section(s.bundle, comps)


# ---------------------------------------------------------------------------
# fibrewise operations

def _sum_model(m1, m2):
    gens = [list(g) + [0] * m2.dim for g in m1.nonsmooth_generators]
    gens += [[0] * m1.dim + list(g) for g in m2.nonsmooth_generators]
    return DvsModel(m1.dim + m2.dim, tuple(tuple(g) for g in gens))


def _tensor_model(m1, m2):
    n1, n2 = m1.dim, m2.dim
    gens = []
    for k in m1.nonsmooth_generators:
        for j in range(n2):
            e = [Fraction(0)] * n2
            e[j] = Fraction(1)
            gens.append([k[i] * e[t] for i in range(n1) for t in range(n2)])
    for k in m2.nonsmooth_generators:
        for i in range(n1):
            e = [Fraction(0)] * n1
            e[i] = Fraction(1)
            gens.append([e[t] * k[j] for t in range(n1) for j in range(n2)])
    return DvsModel(n1 * n2, tuple(tuple(g) for g in gens))


def _kron(a, b):
    n, m = len(a), len(b)
    return [[a[i][j] * b[k][l] for j in range(len(a[0])) for l in range(len(b[0]))]
            for i in range(n) for k in range(m)]


def _blocksum(a, b):
    n, m = len(a), len(b)
    out = [[Fraction(0)] * (n + m) for _ in range(n + m)]
    for i in range(n):
        for j in range(n):
            out[i][j] = a[i][j]
    for i in range(m):
        for j in range(m):
            out[n + i][n + j] = b[i][j]
    return out


def direct_sum(v, w):
    if v.base is not w.base and v.base != w.base:
        raise ValueError("bundles live over different bases")
    fibres = {c: _sum_model(v.fibres[c], w.fibres[c]) for c in v.fibres}
    metrics = {c: emat_block_sum(v.metrics[c], w.metrics[c]) for c in v.metrics}
    glue = []
    for i, (rep, _) in enumerate(v.glue_maps):
        maps = {}
        for p in v.base.glue_classes[i]:
            if p != rep:
                maps[p] = _blocksum(v.glue_map(i, p), w.glue_map(i, p))
        glue.append((rep, maps))
    return PseudoBundle(v.base, fibres, metrics, v.gluing, tuple(glue))


def tensor_product(v, w):
    if v.base is not w.base and v.base != w.base:
        raise ValueError("bundles live over different bases")
    fibres = {c: _tensor_model(v.fibres[c], w.fibres[c]) for c in v.fibres}
    metrics = {c: emat_kron(v.metrics[c], w.metrics[c]) for c in v.metrics}
    glue = []
    for i, (rep, _) in enumerate(v.glue_maps):
        maps = {}
        for p in v.base.glue_classes[i]:
            if p != rep:
                maps[p] = _kron(v.glue_map(i, p), w.glue_map(i, p))
        glue.append((rep, maps))
    return PseudoBundle(v.base, fibres, metrics, v.gluing, tuple(glue))


def dual_bundle(v):
    """Fibrewise dual; the glued dual is glued in the opposite order.

    For standard fibres the dual metric is the inverse matrix (symbolic
    adjugate); for a marked non-smooth subspace the metric must be
    constant and is dualized exactly on the annihilator basis.
    """
    fibres = {}
    metrics = {}
    for c, m in v.fibres.items():
        fibres[c] = standard_model(m.dim - m.k_dim)
        if m.k_dim == 0:
            metrics[c] = emat_inverse(v.metrics[c])
        else:
            g0 = eval_matrix(v.metrics[c], 0)
            if any(not isinstance(x, Fraction) for row in g0 for x in row):
                raise ValueError("dual of a non-standard fibre needs a "
                                 "constant rational metric")
            metrics[c] = expr_matrix(dual_metric(m, g0))
    gluing = v.gluing
    if gluing is not None:
        from .wedge import glue_complexes
        rev = glue_complexes(gluing.x2, gluing.x1,
                             [(b, a) for a, b in gluing.pairs])
        glue = []
        for cls in rev.result.glue_classes:
            # representative of the reversed gluing is the original leg 1
            leg2 = [p for p in cls if rev.leg_of_chart(p[0]) == 2]
            rep = leg2[-1]
            maps = {}
            i_orig = v.base.class_of(rep)
            for p in cls:
                if p != rep:
                    # the original map sent the (now representative) first-leg
                    # fibre into the second leg's; its transpose goes back
                    # between the duals
                    maps[p] = transpose(v.glue_map(i_orig, rep))
            glue.append((rep, maps))
        return PseudoBundle(rev.result, fibres, metrics, rev, tuple(glue))
    glue = []
    for i, (rep, _) in enumerate(v.glue_maps):
        maps = {p: transpose(inverse([r[:] for r in v.glue_map(i, p)]))
                for p in v.base.glue_classes[i] if p != rep}
        glue.append((rep, maps))
    return PseudoBundle(v.base, fibres, metrics, v.gluing, tuple(glue))


# ---------------------------------------------------------------------------
# commutativity maps between "operate then glue" and "glue then operate"

def phi_sum(glued_of_sums, sum_of_glued, point):
    """Fibrewise map with Phi o (j1 + j1') = j1 of the sum, and same for j2.

    Under the shared labelling conventions both sides present a fibre
    vector in identical block coordinates, so the map is the identity of
    the correct size; the defining identities are what tests verify.
    """
    p = _as_point(point)
    i = glued_of_sums.base.class_of(p)
    cid = glued_of_sums.rep_point(i)[0] if i is not None else p[0]
    return identity(glued_of_sums.fibres[cid].dim)


def phi_tensor(glued_of_tensors, tensor_of_glued, point):
    p = _as_point(point)
    i = glued_of_tensors.base.class_of(p)
    cid = glued_of_tensors.rep_point(i)[0] if i is not None else p[0]
    return identity(glued_of_tensors.fibres[cid].dim)


def phi_dual(glued, point):
    """Map from the dual of a glued bundle to the oppositely-glued duals.

    Three cases: identity away from the glue locus on either leg; the
    transpose of the fibre glue map over a glue class (source fibre is
    the second leg's dual, target representative the first leg's dual).
    """
    p = _as_point(point)
    i = glued.base.class_of(p)
    if i is None:
        cid = p[0]
        return identity(glued.fibres[cid].dim - glued.fibres[cid].k_dim)
    rep, maps = glued.glue_maps[i]
    (src, fm), = maps.items()
    return transpose(fm)
