"""Wedge complexes: finitely many 1-D charts glued along finite point sets.

Points are chart-local pairs (chart id, coordinate); a glue class is a
set of such pairs identified to a single point of the quotient.  Gluing
two complexes along a finite bijection of points merges classes, so the
construction iterates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


@dataclass(frozen=True)
class Chart:
    """One coordinate line; ``lo``/``hi`` bound an optional closed interval."""

    id: str
    lo: Fraction | None = None
    hi: Fraction | None = None

    def contains(self, x):
        if self.lo is not None and x < self.lo:
            return False
        if self.hi is not None and x > self.hi:
            return False
        return True


def _as_point(p):
    chart, coord = p
    return (chart, Fraction(coord))


@dataclass(frozen=True)
class WedgeComplex:
    charts: tuple
    glue_classes: tuple = ()

    def __post_init__(self):
        ids = [c.id for c in self.charts]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate chart ids")
        seen = set()
        classes = []
        for cls in self.glue_classes:
            pts = tuple(sorted(_as_point(p) for p in cls))
            for p in pts:
                if p in seen:
                    raise ValueError(f"point {p} appears in two glue classes")
                if p[0] not in ids:
                    raise ValueError(f"glue point on unknown chart {p[0]!r}")
                seen.add(p)
            classes.append(pts)
        object.__setattr__(self, "glue_classes", tuple(classes))

    def chart(self, cid):
        for c in self.charts:
            if c.id == cid:
                return c
        raise KeyError(cid)

    def class_of(self, p):
        p = _as_point(p)
        for i, cls in enumerate(self.glue_classes):
            if p in cls:
                return i
        return None

    def same_point(self, p, q):
        p, q = _as_point(p), _as_point(q)
        if p == q:
            return True
        i = self.class_of(p)
        return i is not None and q in self.glue_classes[i]

    def glue_coordinate(self, class_index, chart_id):
        for c, x in self.glue_classes[class_index]:
            if c == chart_id:
                return x
        raise KeyError(chart_id)


def line(cid="x"):
    return WedgeComplex((Chart(cid),))


def branches_at(x, p):
    """All chart-incidences of the point: length 1 away from the gluing."""
    p = _as_point(p)
    if not x.chart(p[0]).contains(p[1]):
        raise ValueError(f"point {p} not in complex")
    i = x.class_of(p)
    if i is None:
        return [p]
    return list(x.glue_classes[i])


@dataclass(frozen=True)
class Gluing:
    """Two complexes and a finite bijection of points of the first into
    the second, plus the resulting quotient complex."""

    x1: WedgeComplex
    x2: WedgeComplex
    pairs: tuple  # ((chart1, coord1), (chart2, coord2)), ...
    result: WedgeComplex

    def i1(self, p):
        """Injection of X1 minus the glue locus."""
        p = _as_point(p)
        if any(p == a for a, _ in self.pairs):
            raise ValueError(f"{p} is a glue point; use i1_tilde")
        return p

    def i1_tilde(self, p):
        """Extension of i1 to all of X1: glue points land on their class."""
        p = _as_point(p)
        for a, b in self.pairs:
            if p == a:
                return b
        return p

    def i2(self, p):
        return _as_point(p)

    def glue_image(self, p1):
        """f(p1) for p1 in the glue locus."""
        p1 = _as_point(p1)
        for a, b in self.pairs:
            if a == p1:
                return b
        raise KeyError(p1)

    def leg_of_chart(self, cid):
        if any(c.id == cid for c in self.x1.charts):
            return 1
        if any(c.id == cid for c in self.x2.charts):
            return 2
        raise KeyError(cid)


def glue_complexes(x1, x2, f):
    """Quotient of the disjoint union identifying p with f(p).

    ``f`` is a list of ((chart1, coord1), (chart2, coord2)) pairs; it
    must be injective and chart ids of the two complexes disjoint.
    """
    ids1 = {c.id for c in x1.charts}
    ids2 = {c.id for c in x2.charts}
    if ids1 & ids2:
        raise ValueError("chart ids of the two complexes must be disjoint")
    pairs = tuple((_as_point(a), _as_point(b)) for a, b in f)
    dom = [a for a, _ in pairs]
    img = [b for _, b in pairs]
    if len(set(dom)) != len(dom) or len(set(img)) != len(img):
        raise ValueError("glue map must be a bijection of points")
    for a, b in pairs:
        if not x1.chart(a[0]).contains(a[1]) or not x2.chart(b[0]).contains(b[1]):
            raise ValueError("glue point outside its chart domain")

    # start from existing classes (as merge sets), then merge across the map
    groups = [set(cls) for cls in x1.glue_classes]
    groups += [set(cls) for cls in x2.glue_classes]
    for a, b in pairs:
        hit_a = next((g for g in groups if a in g), None)
        hit_b = next((g for g in groups if b in g), None)
        if hit_a is None and hit_b is None:
            groups.append({a, b})
        elif hit_a is None:
            hit_b.add(a)
        elif hit_b is None:
            hit_a.add(b)
        elif hit_a is not hit_b:
            hit_a |= hit_b
            groups.remove(hit_b)
    classes = tuple(tuple(sorted(g)) for g in groups if len(g) >= 2)
    result = WedgeComplex(x1.charts + x2.charts, classes)
    return Gluing(x1, x2, pairs, result)


def switch_map(gluing):
    """Point map to the reversed gluing X2 cup X1; an involution.

    Returns (reversed gluing, map).  In chart-local coordinates the map
    is the identity on representatives: i1(x) goes to i2(x), i2(y) to
    i1(y) or its class, and glue classes to the matching classes.
    """
    rev = glue_complexes(gluing.x2, gluing.x1,
                         [(b, a) for a, b in gluing.pairs])

    def phi(p):
        p = _as_point(p)
        return p

    return rev, phi
