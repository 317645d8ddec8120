"""Rank-one tree computations and finite apartment families for bigger groups."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q
from itertools import combinations, product
from typing import List, Optional, Sequence, Tuple

from .apartment import ApartmentPoint
from .models import (ModelPoint, adjugate, model_relative, p_epsilon_member,
                     weighted_coordinates)
from .polyhedra import (QPolyhedron, cone_generators, min_enclosing_ball,
                        polyhedron_vertices, solve_lp)
from .qvec import Vector, dot, is_zero, qvec
from .rootdata import RelativeDatum
from .torusgit import WeightedPoint
from .valfield import INF, ONE, PuiseuxElement, ZERO


@dataclass(frozen=True)
class TreePoint:
    """Point of the rank-one tree: a branch coordinate and a height."""

    b: PuiseuxElement
    u: Q

    def __init__(self, b: PuiseuxElement, u):
        u = u if isinstance(u, Q) else Q(u)
        # points at height u only remember the branch coordinate above 2u
        object.__setattr__(self, "b", b.truncate(2 * u))
        object.__setattr__(self, "u", u)

    def is_vertex(self) -> bool:
        return (2 * self.u).denominator == 1

    def to_json(self) -> dict:
        from .valfield import format_rational
        return {"b": self.b.to_json(), "u": format_rational(self.u)}


def tree_canonicalize(b: PuiseuxElement, u) -> TreePoint:
    return TreePoint(b, u)


@dataclass(frozen=True)
class ApartmentChart:
    """A group element carrying the standard apartment onto another one."""

    g: Tuple[Tuple[PuiseuxElement, ...], ...]

    @staticmethod
    def identity(n: int = 2) -> "ApartmentChart":
        return ApartmentChart(tuple(tuple(ONE if i == j else ZERO
                                          for j in range(n)) for i in range(n)))

    @staticmethod
    def branch(b: PuiseuxElement) -> "ApartmentChart":
        """Lower-unipotent chart whose apartment runs to the end over b."""
        return ApartmentChart(((ONE, ZERO), (b, ONE)))

    @staticmethod
    def swap() -> "ApartmentChart":
        return ApartmentChart(((ZERO, ONE), (-ONE, ZERO)))


@dataclass(frozen=True)
class TreeInterval:
    """Semistable locus on the tree, with a certificate of how it was closed."""

    points: Tuple[TreePoint, ...]
    certificate: str  # "exact" or "radius_limited"
    witness: Optional[ApartmentChart] = None
    radius: Optional[Q] = None

    def is_empty(self) -> bool:
        return not self.points


def _proj2_coords(x: ModelPoint) -> Tuple[PuiseuxElement, PuiseuxElement]:
    if x.model != "proj(2)":
        raise ValueError("tree operations need a point of proj(2)")
    return x.data[0][0], x.data[0][1]


def ss_at(x: ModelPoint, z: TreePoint) -> bool:
    """Semistability of the reduction of x at a tree point."""
    if z.is_vertex():
        # reductions of representable coordinates are always rational over the
        # residue field, and rational reductions are destabilized at vertices
        return False
    x0, x1 = _proj2_coords(x)
    if not x0:
        return False
    return (x1 - z.b * x0).valuation() - x0.valuation() == 2 * z.u


def interval_tree(x: ModelPoint, R=Q(4)) -> TreeInterval:
    """Walk the tree toward x, splitting one residue digit per vertex."""
    R = R if isinstance(R, Q) else Q(R)
    x0, x1 = _proj2_coords(x)
    if not x0:
        return TreeInterval((), "exact", witness=ApartmentChart.swap())
    b = ZERO
    while True:
        rem = x1 - b * x0
        e = rem.valuation() - x0.valuation()
        if e == INF:
            return TreeInterval((), "exact", witness=ApartmentChart.branch(b))
        if e.denominator != 1:
            return TreeInterval((TreePoint(b, e / 2),), "exact")
        if e / 2 > R:
            return TreeInterval((), "radius_limited", radius=R,
                                witness=ApartmentChart.branch(b))
        q0, c0 = rem.terms[0]
        b = b + PuiseuxElement.monomial(c0 / x0.leading_coefficient(),
                                        q0 - x0.valuation())


def act_tree(g, z: TreePoint) -> TreePoint:
    """Image of a tree point under a fractional-linear chart matrix."""
    m = tuple(tuple(c if isinstance(c, PuiseuxElement) else PuiseuxElement.const(c)
                    for c in row) for row in g)
    (p, q2), (r, s) = m
    det = p * s - q2 * r
    if not det:
        raise ValueError("chart matrix is singular")
    den = p + q2 * z.b
    if not den:
        raise ValueError("the chart pole sits on the branch coordinate")
    vden = den.valuation()
    if q2 and vden >= q2.valuation() + 2 * z.u:
        raise ValueError("the chart pole lies inside the point's disc")
    u2 = z.u + Q(det.valuation() - 2 * vden, 2)
    num = r + s * z.b
    if not num:
        return TreePoint(ZERO, u2)
    prec = 2 * u2 - num.valuation() + 2 * vden
    b2 = (num * den.truncated_inverse(prec)).truncate(2 * u2)
    return TreePoint(b2, u2)


def tree_distance(z1: TreePoint, z2: TreePoint) -> Q:
    """Path length between two tree points in apartment units."""
    split = (z1.b - z2.b).valuation()
    branch = min(z1.u, z2.u) if split == INF else min(z1.u, z2.u, split / 2)
    return (z1.u - branch) + (z2.u - branch)


def tree_midpoint(z1: TreePoint, z2: TreePoint) -> TreePoint:
    """Midpoint of the geodesic between two tree points."""
    split = (z1.b - z2.b).valuation()
    branch = min(z1.u, z2.u) if split == INF else min(z1.u, z2.u, split / 2)
    half = ((z1.u - branch) + (z2.u - branch)) / 2
    if half <= z1.u - branch:
        return TreePoint(z1.b, z1.u - half)
    return TreePoint(z2.b, branch + (half - (z1.u - branch)))


def circumcenter_tree(points: Sequence[TreePoint]) -> TreePoint:
    """Midpoint of a diameter of a finite set of tree points."""
    if not points:
        raise ValueError("empty set of tree points")
    best = (Q(0), points[0], points[0])
    for a, b in combinations(points, 2):
        d = tree_distance(a, b)
        if d > best[0]:
            best = (d, a, b)
    return tree_midpoint(best[1], best[2])


def circumcenter(region, gram: Optional[Sequence[Vector]] = None):
    """Center of the smallest ball around a tree interval or apartment polyhedron."""
    if isinstance(region, TreeInterval):
        if region.is_empty():
            raise ValueError("empty interval")
        return circumcenter_tree(region.points)
    if isinstance(region, QPolyhedron):
        if not region.is_bounded():
            raise ValueError("unbounded region")
        verts = polyhedron_vertices(region)
        center, _ = min_enclosing_ball(verts, gram=gram)
        return ApartmentPoint(center)
    raise ValueError("unsupported region type")


_INVARIANT_MONOMIALS = {}


def invariant_monomials(model: str, degree: Optional[int] = None):
    """Exponent vectors of the weight-zero coordinate monomials of a degree."""
    rel = model_relative(model)
    wp_weights = [rel.restrict(w) for w, _ in _model_weight_list(model)]
    n = len(wp_weights)
    degrees = [degree] if degree is not None else range(1, n + 1)
    for d in degrees:
        found = []
        for expo in _compositions(d, n):
            total = tuple(sum(e * w[k] for e, w in zip(expo, wp_weights))
                          for k in range(rel.rank))
            if is_zero(total):
                found.append(expo)
        if found:
            return d, found
    raise ValueError(f"no invariant monomials for {model} at the given degree")


def _model_weight_list(model: str):
    from .models import _factor_views, make_point
    if model.startswith("proj("):
        n = int(model[5:-1])
        probe = make_point(model, [ONE] * n)
    elif model == "grass(2,4)":
        probe = make_point(model, [(1, 0, 0, 0), (0, 1, 0, 0)])
    else:
        raise ValueError(f"invariants are only tabulated for proj(n) and grass(2,4)")
    (weights, coords) = _factor_views(probe)[0]
    return list(zip(weights, range(len(coords))))


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _eval_monomials(coords, monomials):
    vals = []
    for expo in monomials:
        term = ONE
        for c, e in zip(coords, expo):
            for _ in range(e):
                term = term * c
        vals.append(term.valuation() if term else INF)
    return vals


def r_log(x: ModelPoint, chart: ApartmentChart, degree: Optional[int] = None) -> Q:
    """Valuation-scale comparison of invariant sizes between two apartments."""
    d, monomials = invariant_monomials(x.model, degree)
    m = chart.g
    if _pdet(m) != ONE:
        raise ValueError("chart determinant must be 1")
    inv = adjugate(m)
    moved = _act_coords(inv, x)
    here = min(_eval_monomials(x.data[0], monomials))
    there = min(_eval_monomials(moved, monomials))
    if here == INF or there == INF:
        raise ValueError("point is unstable in one of the two apartments")
    return here - there


def _pdet(m) -> PuiseuxElement:
    from .models import _det
    return _det(m)


def _act_coords(m, x: ModelPoint):
    from .models import act
    return act(m, x).data[0]


def r_tilde_estimate(x: ModelPoint, family: Sequence[ApartmentChart],
                     degree: Optional[int] = None):
    """Family minimum of the apartment comparison, with the minimizing charts."""
    if not family:
        raise ValueError("empty chart family")
    values = [r_log(x, g, degree) for g in family]
    best = min(values)
    argmin = tuple(g for g, v in zip(family, values) if v == best)
    return best, argmin


def f_chi_tree(z: TreePoint, chi) -> Q:
    """Character height of a tree point, folded onto the standard apartment."""
    c = chi[0] if isinstance(chi, (tuple, list)) else chi
    c = c if isinstance(c, Q) else Q(c)
    if not z.b:
        return c * z.u
    u_b = Q(z.b.valuation(), 1) / 2
    return c * u_b - abs(c) * (z.u - u_b)


def interval_chi(x: ModelPoint, chi, R=Q(4), rel: Optional[RelativeDatum] = None):
    """Argmax of the character height over the semistable locus."""
    if x.model == "proj(2)":
        res = interval_tree(x, R)
        if res.is_empty():
            raise ValueError("the point has no semistable locus within the radius")
        z = res.points[0]
        return f_chi_tree(z, chi), res.points
    from .interval import interval_A_chi
    rel = rel or model_relative(x.model)
    wp = weighted_coordinates(x)
    n, face = interval_A_chi(wp, rel, chi)
    if n == INF:
        return INF, None
    return n, face


def _weyl_chambers(rel: RelativeDatum):
    """Full-dimensional sign cones of the relative root arrangement."""
    lines = []
    for a in rel.relative_roots:
        if a not in lines and tuple(-c for c in a) not in lines:
            lines.append(a)
    chambers = []
    for signs in product((1, -1), repeat=len(lines)):
        halves = tuple((tuple(s * c for c in a), Q(0))
                       for s, a in zip(signs, lines))
        cone = QPolyhedron(halves)
        ub = [(tuple(-s * c for c in a), Q(-1)) for s, a in zip(signs, lines)]
        res = solve_lp((Q(0),) * rel.rank, ub=ub, maximize=True)
        if res.status != "infeasible":
            chambers.append((signs, cone))
    return lines, chambers


@dataclass(frozen=True)
class PChiData:
    """Parabolic subgroup attached to a character: chambers, face, test direction."""

    chambers: Tuple[Tuple[int, ...], ...]
    tau: QPolyhedron
    delta: Vector


def p_chi_data(chi: Sequence, rel: RelativeDatum) -> PChiData:
    """Chambers at infinity where the character stays nonnegative, and their face."""
    chiv = qvec(chi) if isinstance(chi, (tuple, list)) else (Q(chi),)
    if is_zero(chiv):
        raise ValueError("the character must be nonzero")
    _, chambers = _weyl_chambers(rel)
    kept = []
    halves: List = []
    for signs, cone in chambers:
        gens = cone_generators(cone)
        if all(dot(chiv, g) >= 0 for g in gens):
            kept.append(signs)
            halves.extend(cone.halfspaces)
    if not kept:
        raise AssertionError("the character is negative on every chamber")
    tau = QPolyhedron(tuple(sorted(set(halves))))
    delta = tuple(sum(g[i] for g in cone_generators(tau)) or Q(0)
                  for i in range(rel.rank))
    return PChiData(tuple(kept), tau, delta)


def chi_parabolic_member(data: PChiData, g, model: str,
                         rel: RelativeDatum) -> bool:
    """Membership in the character's parabolic, via its generic direction."""
    return p_epsilon_member(g, data.delta, model, rel)
