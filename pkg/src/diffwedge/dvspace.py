"""Finite-dimensional vector spaces with a marked non-smooth subspace.

A fibre is R^n together with a subspace K of "non-smooth directions";
the smooth structure is the one generated by the curves x |-> |x| k for
k in K.  Consequences used throughout:

* the smooth dual is the annihilator of K;
* smooth symmetric bilinear forms are the symmetric A with A K = 0;
* a pseudo-metric is such an A that is moreover positive semidefinite
  with kernel exactly K (so its rank is the dual dimension).

All verdicts here are exact (rational arithmetic).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .linalg import (
    frac_matrix,
    identity,
    in_span,
    inverse,
    is_psd,
    is_symmetric,
    mat_mul,
    mat_vec,
    nullspace,
    rank,
    row_space_basis,
    rref,
    solve,
    span_equal,
    transpose,
    zeros,
)


@dataclass(frozen=True)
class DvsModel:
    """R^dim with non-smooth directions spanned by ``nonsmooth_generators``."""

    dim: int
    nonsmooth_generators: tuple = ()

    def __post_init__(self):
        if self.dim <= 0:
            raise ValueError("dimension must be positive")
        gens = [
            [Fraction(v) for v in g]
            for g in self.nonsmooth_generators
            if any(Fraction(v) != 0 for v in g)
        ]
        for g in gens:
            if len(g) != self.dim:
                raise ValueError("generator length does not match dimension")
        basis = row_space_basis(gens) if gens else []
        object.__setattr__(self, "nonsmooth_generators",
                           tuple(tuple(v) for v in basis))

    @property
    def k_basis(self):
        return [list(g) for g in self.nonsmooth_generators]

    @property
    def k_dim(self):
        return len(self.nonsmooth_generators)


def standard_model(n):
    return DvsModel(n, ())


def dual_space(model):
    """Basis of the smooth dual: covectors vanishing on K."""
    k = model.k_basis
    if not k:
        return [row for row in identity(model.dim)]
    return nullspace(k)


def smooth_form_basis(model):
    """Basis of the symmetric bilinear forms A with A K = 0.

    Unknowns are the upper-triangle entries; each generator k imposes
    A k = 0.
    """
    n = model.dim
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    index = {p: t for t, p in enumerate(pairs)}
    constraints = []
    for k in model.k_basis:
        for i in range(n):
            row = [Fraction(0)] * len(pairs)
            for j in range(n):
                p = (i, j) if i <= j else (j, i)
                row[index[p]] += Fraction(k[j])
            constraints.append(row)
    if constraints:
        sols = nullspace(constraints)
    else:
        sols = [row for row in identity(len(pairs))]
    basis = []
    for s in sols:
        a = zeros(n, n)
        for (i, j), t in index.items():
            a[i][j] = s[t]
            a[j][i] = s[t]
        basis.append(a)
    return basis


@dataclass
class MetricVerdict:
    ok: bool
    reason: str = ""
    rank: int = 0

    def __bool__(self):
        return self.ok


def is_pseudo_metric(model, a):
    """Symmetric, PSD, kernel exactly K; reports the first failure."""
    a = frac_matrix(a)
    if len(a) != model.dim or any(len(r) != model.dim for r in a):
        raise ValueError("matrix size does not match the fibre dimension")
    if not is_symmetric(a):
        return MetricVerdict(False, "not symmetric")
    if not is_psd(a):
        return MetricVerdict(False, "not positive semidefinite")
    ker = nullspace(a)
    if not span_equal(ker, model.k_basis):
        if len(ker) < model.k_dim:
            return MetricVerdict(False, "kernel too small (does not contain K)")
        if len(ker) > model.k_dim:
            return MetricVerdict(False, "kernel too large (degenerate beyond K)")
        return MetricVerdict(False, "kernel differs from K")
    return MetricVerdict(True, "", rank(a))


def make_pseudo_metric(model):
    """A canonical pseudo-metric: P^T P for P projecting out K."""
    dual = dual_space(model)
    if not dual:
        raise ValueError("no pseudo-metric exists when K is everything")
    p = [list(row) for row in dual]
    return mat_mul(transpose(p), p)


def characteristic_subspace(model, a):
    """Basis of the span of the non-degenerate directions of ``a``."""
    a = frac_matrix(a)
    verdict = is_pseudo_metric(model, a)
    if not verdict:
        raise ValueError(f"invalid pseudo-metric: {verdict.reason}")
    return row_space_basis(a)


def pairing_map(model, a, v):
    """Coordinates of a(v, .) with respect to the dual_space basis."""
    a = frac_matrix(a)
    cov = mat_vec(a, [Fraction(x) for x in v])
    dual = dual_space(model)
    coords = solve(transpose(dual), cov) if dual else []
    if coords is None:
        raise ValueError("pairing image is outside the smooth dual")
    return coords


def dual_metric(model, a):
    """Matrix B on the dual basis with B(phi(u), phi(v)) = a(u, v).

    ``phi`` is the pairing map.  B is computed by pushing a basis of the
    characteristic subspace through phi and solving the defining
    identity exactly; the identity is what callers should check.
    """
    a = frac_matrix(a)
    v0 = characteristic_subspace(model, a)
    d = len(v0)
    # columns: coordinates of phi(v0_i) in the dual basis
    p = transpose([pairing_map(model, a, v) for v in v0])
    g = [[_form(a, v0[i], v0[j]) for j in range(d)] for i in range(d)]
    p_inv = inverse(p)
    return mat_mul(transpose(p_inv), mat_mul(g, p_inv))


def _form(a, u, v):
    return sum(Fraction(u[i]) * a[i][j] * Fraction(v[j])
               for i in range(len(u)) for j in range(len(v)))


def apply_form(a, u, v):
    """Evaluate the bilinear form with matrix ``a`` on vectors u, v."""
    return sum(u[i] * a[i][j] * v[j] for i in range(len(u)) for j in range(len(v)))


@dataclass
class CompatibilityVerdict:
    isometry: bool
    kernel_misses_v0: bool
    maps_v0_into_w0: bool
    witness: str = ""

    @property
    def compatible(self):
        return self.isometry

    def __bool__(self):
        return self.compatible


def check_map_compatibility(model1, g1, model2, g2, f):
    """Is g1(u, v) = g2(F u, F v)?  Also reports the structural conditions."""
    g1 = frac_matrix(g1)
    g2 = frac_matrix(g2)
    f = frac_matrix(f)
    if len(f) != model2.dim or len(f[0]) != model1.dim:
        raise ValueError("map shape does not match the fibre dimensions")
    pulled = mat_mul(transpose(f), mat_mul(g2, f))
    isometry = pulled == g1
    witness = ""
    if not isometry:
        n = model1.dim
        for i in range(n):
            for j in range(n):
                if pulled[i][j] != g1[i][j]:
                    witness = (f"g1[e{i + 1},e{j + 1}]={g1[i][j]} but "
                               f"g2[Fe{i + 1},Fe{j + 1}]={pulled[i][j]}")
                    break
            if witness:
                break
    v0 = characteristic_subspace(model1, g1)
    w0 = characteristic_subspace(model2, g2)
    ker = nullspace(f)
    kernel_ok = not any(in_span(v0, k) and any(x != 0 for x in k) for k in _span_meet(ker, v0))
    image_ok = all(in_span(w0, mat_vec(f, v)) for v in v0)
    return CompatibilityVerdict(isometry, kernel_ok, image_ok, witness)


def _span_meet(basis_a, basis_b):
    """Basis of the intersection of two spans."""
    if not basis_a or not basis_b:
        return []
    n = len(basis_a[0])
    # v in meet iff v = sum x_i a_i = sum y_j b_j
    cols = [list(v) for v in basis_a] + [[-x for x in v] for v in basis_b]
    sols = nullspace(transpose(cols))
    meet = []
    for s in sols:
        v = [sum(s[i] * basis_a[i][t] for i in range(len(basis_a))) for t in range(n)]
        if any(x != 0 for x in v):
            meet.append(v)
    return row_space_basis(meet)


def dual_map(model1, model2, f):
    """Matrix of F^* between the smooth duals (dual_space bases).

    F^*(beta) = beta o F; requires F to map K_1 into K_2 so that the
    pullback of a smooth covector is again smooth.
    """
    f = frac_matrix(f)
    dual1 = dual_space(model1)
    dual2 = dual_space(model2)
    cols = []
    for beta in dual2:
        pulled = mat_vec(transpose(f), beta)
        coords = solve(transpose(dual1), pulled) if dual1 else ([] if all(x == 0 for x in pulled) else None)
        if coords is None:
            raise ValueError("map does not send non-smooth directions into K; "
                             "its dual does not preserve smooth covectors")
        cols.append(coords)
    return transpose(cols) if cols else []


def check_dual_compatibility(model1, g1, model2, g2, f):
    """Are the induced dual metrics compatible with F^*?

    The check is the isometry identity g1^*(F^* b1, F^* b2) = g2^*(b1, b2)
    on the dual bases; it holds exactly when F^* is an isomorphism of
    the duals.
    """
    b1 = dual_metric(model1, frac_matrix(g1))
    b2 = dual_metric(model2, frac_matrix(g2))
    fs = dual_map(model1, model2, f)
    d2 = len(b2)
    if not fs and d2 == 0:
        return True
    pulled = mat_mul(transpose(fs), mat_mul(b1, fs)) if fs else []
    return pulled == b2
