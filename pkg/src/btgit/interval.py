"""Intervals of torus semistability in the apartment, with walls and shifts."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction as Q
from typing import Dict, Optional, Sequence, Tuple

from .apartment import ApartmentPoint, InfinityPoint
from .polyhedra import QPolyhedron, cone_generators, minimax_face, polar_cone
from .qvec import Vector, dot, is_zero, primitive, qvec
from .rootdata import RelativeDatum, weyl_orbit
from .torusgit import WeightedPoint, mu_K, stability_status
from .valfield import INF


@dataclass(frozen=True)
class IntervalResult:
    """Semistable locus of the apartment for one point: a face of an LP optimum."""

    polyhedron: Optional[QPolyhedron]
    c_star: object  # rational, or INF when the locus is empty
    bounded: bool
    singleton: Optional[ApartmentPoint]
    wall_bounds: Dict[Vector, object] = field(default_factory=dict)

    def is_empty(self) -> bool:
        return self.polyhedron is None

    def contains(self, z: Sequence) -> bool:
        return self.polyhedron is not None and self.polyhedron.contains(qvec(z))


def _support_forms(x: WeightedPoint, rel: RelativeDatum):
    """Minimal coordinate valuation per restricted support weight."""
    forms: Dict[Vector, object] = {}
    for w, _, c in x.entries:
        if not c:
            continue
        rw = rel.restrict(w)
        v = c.valuation()
        if rw not in forms or v < forms[rw]:
            forms[rw] = v
    return [(rw, n) for rw, n in sorted(forms.items())]


def interval_A(x: WeightedPoint, rel: RelativeDatum) -> IntervalResult:
    """Apartment points where the reduction of x stays semistable."""
    res = minimax_face(_support_forms(x, rel))
    if res.value == INF:
        return IntervalResult(None, INF, False, None, {})
    face = res.face
    point = face.single_point()
    singleton = ApartmentPoint(point) if point is not None else None
    bounds = {a: face.sup_linear(a) for a in rel.relative_roots}
    return IntervalResult(face, res.value, face.is_bounded(), singleton, bounds)


def wall_bounds(res: IntervalResult, rel: RelativeDatum) -> Dict[Vector, object]:
    """Supremum of each relative root over the interval (+inf if unbounded)."""
    if res.is_empty():
        raise ValueError("the interval is empty")
    return {a: res.polyhedron.sup_linear(a) for a in rel.relative_roots}


def wall_h_rep(bounds: Dict[Vector, object]) -> QPolyhedron:
    """Polyhedron cut out by the finite wall bounds alone."""
    halves = []
    for a, n in bounds.items():
        if n != INF:
            halves.append((tuple(-c for c in a), -n))
    return QPolyhedron(tuple(halves))


def lambda_A(x: WeightedPoint, rel: RelativeDatum) -> Tuple[InfinityPoint, ...]:
    """Directions at infinity along which every support weight is nonpositive."""
    cone = polar_cone(mu_K(x, rel).points)
    gens = [g for g in cone_generators(cone) if not is_zero(g)]
    return tuple(InfinityPoint(g) for g in sorted(set(primitive(g) for g in gens)))


def interval_A_chi(x: WeightedPoint, rel: RelativeDatum, chi: Sequence):
    """Optimal character value over the interval and the face attaining it."""
    base = interval_A(x, rel)
    if base.is_empty():
        raise ValueError("the interval is empty")
    chiv = qvec(chi)
    n = base.polyhedron.sup_linear(chiv)
    if n == INF:
        return INF, None
    return n, base.polyhedron.with_equality(chiv, n)


def fixed_locus_possible(lam: Sequence, rel: RelativeDatum) -> bool:
    """Whether some Weyl translate of the weight restricts to zero."""
    lamv = qvec(lam)
    return any(is_zero(rel.restrict(w)) for w in weyl_orbit(rel.datum, lamv))


def destabilizing_1ps(x: WeightedPoint, rel: RelativeDatum) -> Optional[Vector]:
    """A cocharacter nonpositive on every support weight, or none when stable."""
    status = stability_status(x, rel)
    if status == "stable":
        return None
    verts = mu_K(x, rel).points
    gens = [g for g in cone_generators(polar_cone(verts)) if not is_zero(g)]
    if status == "unstable":
        for g in gens:
            if any(dot(v, g) < 0 for v in verts):
                return primitive(g)
        raise AssertionError("no strictly destabilizing direction found")
    return primitive(gens[0])
