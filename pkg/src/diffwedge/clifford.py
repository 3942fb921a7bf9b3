"""Clifford and exterior algebras of a fibre with a (possibly degenerate)
symmetric form.

Basis blades are indexed by bitmasks over a q-orthogonal frame; the sign
convention is v.v = -q(v,v).  With q = 0 the construction degenerates to
the exterior algebra, so wedge products and contractions reuse the same
blade arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import congruent_diagonal, frac_matrix, inverse, mat_vec, transpose
from .dvspace import is_pseudo_metric


@dataclass(frozen=True)
class CliffordAlgebra:
    """2^n-dimensional algebra over a q-orthogonal frame.

    frame: columns are the orthogonal basis vectors b_i (standard coords);
    diag:  d_i = q(b_i, b_i), zero on degenerate directions.
    """

    n: int
    frame: tuple
    diag: tuple

    @property
    def dim(self):
        return 1 << self.n

    def blade_name(self, mask):
        if mask == 0:
            return "1"
        return "^".join(f"e{i + 1}" for i in range(self.n) if mask >> i & 1)


def build_algebra(model, g):
    """Clifford algebra of the fibre with form ``g`` (zero matrix allowed)."""
    g = frac_matrix(g)
    if any(any(v != 0 for v in row) for row in g):
        verdict = is_pseudo_metric(model, g)
        if not verdict:
            raise ValueError(f"invalid metric: {verdict.reason}")
    p, diag = congruent_diagonal(g)
    frame = tuple(tuple(row) for row in p)
    return CliffordAlgebra(model.dim, frame, tuple(diag))


def exterior_algebra(n):
    """The q = 0 case on a standard fibre."""
    zero = [[Fraction(0)] * n for _ in range(n)]
    p, diag = congruent_diagonal(zero)
    return CliffordAlgebra(n, tuple(tuple(r) for r in p), tuple(diag))


def blade_mul(mask_a, mask_b, diag):
    """Product of two basis blades: (result mask, signed coefficient)."""
    coeff = 1
    out = mask_a
    for i in range(len(diag)):
        if not mask_b >> i & 1:
            continue
        if (out >> (i + 1)).bit_count() % 2:
            coeff = -coeff
        if out >> i & 1:
            out &= ~(1 << i)
            coeff = coeff * -diag[i]
        else:
            out |= 1 << i
    return out, coeff


def _combine(alg, a, b, diag):
    out = {}
    for sa, ca in a.items():
        for sb, cb in b.items():
            mask, coeff = blade_mul(sa, sb, diag)
            val = out.get(mask, 0) + ca * cb * coeff
            if val == 0:
                out.pop(mask, None)
            else:
                out[mask] = val
    return out


def cl_mul(alg, a, b):
    """Clifford product of multivectors (sparse mask -> coefficient maps)."""
    return _combine(alg, a, b, alg.diag)


def wedge(alg, a, b):
    """Exterior product: the q = 0 specialization of the same blade rule."""
    return _combine(alg, a, b, (0,) * alg.n)


def mv_add(a, b):
    out = dict(a)
    for mask, c in b.items():
        val = out.get(mask, 0) + c
        if val == 0:
            out.pop(mask, None)
        else:
            out[mask] = val
    return out


def mv_scale(c, a):
    if c == 0:
        return {}
    return {mask: c * v for mask, v in a.items()}


def scalar(c):
    return {0: c} if c != 0 else {}


def to_frame_coords(alg, v):
    """Coordinates of a standard-basis vector in the orthogonal frame."""
    return mat_vec(inverse([list(r) for r in alg.frame]), [Fraction(x) for x in v])


def vector_mv(alg, v, standard=True):
    coords = to_frame_coords(alg, v) if standard else v
    return {1 << i: c for i, c in enumerate(coords) if c != 0}


def contract(alg, coords, a):
    """Interior product i(v) with v given in frame coordinates.

    i(v)(b_{i_1}^...^b_{i_l}) = sum_j (-1)^{j+1} q(v,b_{i_j}) drop j.
    """
    out = {}
    for mask, c in a.items():
        pos = 0
        for i in range(alg.n):
            if not mask >> i & 1:
                continue
            q = coords[i] * alg.diag[i]
            if q != 0:
                sub = mask & ~(1 << i)
                sign = -1 if pos % 2 else 1
                val = out.get(sub, 0) + sign * q * c
                if val == 0:
                    out.pop(sub, None)
                else:
                    out[sub] = val
            pos += 1
    return out


def cl_action(alg, coords, a):
    """c(v) = wedge by v minus contraction by v, v in frame coordinates."""
    v = {1 << i: c for i, c in enumerate(coords) if c != 0}
    ext = _combine(alg, v, a, (0,) * alg.n)
    return mv_add(ext, mv_scale(-1, contract(alg, coords, a)))


def quantize(alg, a):
    """Exterior blade (in the frame) reread as a Clifford element.

    In an orthogonal frame the Clifford product of distinct generators
    equals their wedge, so this is a relabelling.
    """
    return dict(a)


def symbol(alg, a):
    """sigma(a) = c(a)(1): apply the quantized action to the unit."""
    out = {}
    for mask, c in a.items():
        term = scalar(c)
        for i in reversed(range(alg.n)):
            if mask >> i & 1:
                coords = [Fraction(0)] * alg.n
                coords[i] = Fraction(1)
                term = cl_action(alg, coords, term)
        out = mv_add(out, term)
    return out


def parity(mask):
    return mask.bit_count() % 2


def filtration_degree(a):
    return max((m.bit_count() for m in a), default=0)


def multiplication_table(alg):
    """All blade products as {(name_a, name_b): multivector-as-name-map}."""
    table = {}
    for sa in range(alg.dim):
        for sb in range(alg.dim):
            mask, coeff = blade_mul(sa, sb, alg.diag)
            table[(alg.blade_name(sa), alg.blade_name(sb))] = {
                alg.blade_name(mask): coeff}
    return table
