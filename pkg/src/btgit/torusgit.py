"""Weight polytopes, torus stability criteria, and GIT chamber combinatorics."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q
from itertools import combinations
from math import gcd
from typing import List, Optional, Sequence, Tuple

from .polyhedra import (QPolytope, cone_contains, cone_h_rep,
                        cone_interior_contains, hull_member, matrix_rank,
                        nullspace, tangent_cone)
from .qvec import Vector, dot, is_zero, line_rep, neg, qvec, scale, add
from .rootdata import (RelativeDatum, RootDatum, build_root_system,
                       preset_relative, reflect)
from .valfield import PuiseuxElement, parse_rational, format_rational


@dataclass(frozen=True)
class WeightedPoint:
    """Projective coordinates labeled by torus weights, scaled to min valuation 0."""

    entries: Tuple[Tuple[Vector, int, PuiseuxElement], ...]

    def __init__(self, entries):
        cleaned = tuple((qvec(w), int(i), c) for w, i, c in entries)
        vals = [c.valuation() for _, _, c in cleaned if c]
        if not vals:
            raise ValueError("all coordinates are zero")
        m = min(vals)
        if m != 0:
            shift = PuiseuxElement.t_power(-m)
            cleaned = tuple((w, i, c * shift) for w, i, c in cleaned)
        object.__setattr__(self, "entries", cleaned)

    def support(self) -> Tuple[Vector, ...]:
        """Weights carrying a nonzero coordinate, deduplicated."""
        out: List[Vector] = []
        for w, _, c in self.entries:
            if c and w not in out:
                out.append(w)
        return tuple(out)

    def to_json(self) -> dict:
        return {"entries": [{"weight": [format_rational(a) for a in w],
                             "index": i, "coord": c.to_json()}
                            for w, i, c in self.entries]}

    @staticmethod
    def from_json(data: dict) -> "WeightedPoint":
        return WeightedPoint([
            (tuple(parse_rational(a) for a in e["weight"]), e["index"],
             PuiseuxElement.from_json(e["coord"]))
            for e in data["entries"]])


def translate(x: WeightedPoint, vals: Sequence) -> WeightedPoint:
    """Act by a diagonal torus element with the given entry valuations."""
    v = qvec(vals)
    return WeightedPoint([(w, i, c * PuiseuxElement.t_power(dot(w, v)))
                          for w, i, c in x.entries])


def mu_K(x: WeightedPoint, rel: RelativeDatum) -> QPolytope:
    """Hull of the restricted weights of all nonzero coordinates."""
    return QPolytope([rel.restrict(w) for w in x.support()])


def mu_residue(x: WeightedPoint, rel: RelativeDatum, z: Sequence) -> QPolytope:
    """Hull of the restricted weights whose shifted valuation is minimal."""
    zc = qvec(z)
    shifted = []
    for w, _, c in x.entries:
        if c:
            shifted.append((c.valuation() + dot(rel.restrict(w), zc), w))
    m = min(v for v, _ in shifted)
    verts: List[Vector] = []
    for v, w in shifted:
        rw = rel.restrict(w)
        if v == m and rw not in verts:
            verts.append(rw)
    return QPolytope(verts)


def stability_status(x: WeightedPoint, rel: RelativeDatum) -> str:
    P = mu_K(x, rel)
    origin = (Q(0),) * rel.rank
    if hull_member(P, origin, "interior"):
        return "stable"
    if hull_member(P, origin, "closure"):
        return "strictly_semistable"
    return "unstable"


def chi_status(x: WeightedPoint, rel: RelativeDatum, chi: Sequence) -> str:
    """Stability after shifting the reference point by a rational character."""
    P = mu_K(x, rel)
    origin = (Q(0),) * rel.rank
    if not hull_member(P, origin, "closure"):
        return "unstable"
    cone = tangent_cone(P)
    target = neg(qvec(chi))
    if not cone_contains(cone, target):
        return "unstable"
    if cone_interior_contains(cone, target):
        return "stable"
    return "semistable"


def root_hyperplanes(rel: RelativeDatum) -> Tuple[Vector, ...]:
    """Primitive normals of all hyperplanes through 0 spanned by relative roots."""
    rank = rel.rank
    if rank == 1:
        return ((Q(1),),)
    lines = sorted({line_rep(a) for a in rel.relative_roots})
    normals = set()
    for sub in combinations(lines, rank - 1):
        rows = [list(a) for a in sub]
        if matrix_rank(rows) != rank - 1:
            continue
        normals.add(line_rep(nullspace(rows, rank)[0]))
    return tuple(sorted(normals))


@dataclass(frozen=True)
class ChamberId:
    """Cell of a weight in a hyperplane arrangement: zeros and side signs."""

    signs: Tuple[int, ...]

    def containing(self) -> Tuple[int, ...]:
        return tuple(i for i, s in enumerate(self.signs) if s == 0)


def chamber_of(lam: Sequence, hyperplanes: Sequence[Vector],
               cone: Optional[Sequence[Vector]] = None) -> ChamberId:
    """Arrangement cell of a weight, optionally checked against an ample cone."""
    lamv = qvec(lam)
    if cone is not None:
        H = cone_h_rep([qvec(g) for g in cone], len(lamv))
        if not H.contains(lamv):
            raise ValueError("weight outside the closed ample cone")
    signs = []
    for h in hyperplanes:
        v = dot(h, lamv)
        signs.append(0 if v == 0 else (1 if v > 0 else -1))
    return ChamberId(tuple(signs))


def chamber_leq(lam_fine: Sequence, lam: Sequence,
                hyperplanes: Sequence[Vector]) -> bool:
    """Whether the cell of the first weight lies in the closure of the second's."""
    a = chamber_of(lam_fine, hyperplanes).signs
    b = chamber_of(lam, hyperplanes).signs
    return all(sa == 0 or sa == sb for sa, sb in zip(a, b))


def _joint_orbit(datum: RootDatum, vectors: Sequence[Vector]):
    """Orbit of a tuple of weights under simultaneous simple reflections."""
    start = tuple(qvec(v) for v in vectors)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for tup in frontier:
            for a in datum.simple_roots:
                img = tuple(reflect(v, a) for v in tup)
                if img not in seen:
                    seen.add(img)
                    nxt.append(img)
        frontier = nxt
    return seen


def classify_regular_weights(family: Optional[str] = None,
                             rank: Optional[int] = None,
                             J: Sequence[int] = (),
                             preset: str = "split",
                             s: Optional[int] = None,
                             d: Optional[int] = None) -> Tuple[bool, bool]:
    """Decide if some ample weight keeps its whole orbit off every root hyperplane.

    Returns (table_answer, scan_answer): a closed-form case table, and an
    independent search over chamber representatives of the pulled-back
    arrangement; the two must agree.
    """
    J = sorted(set(int(j) for j in J))
    if preset == "split":
        if family is None or rank is None:
            raise ValueError("split classification needs family and rank")
        datum = build_root_system(family, rank)
        rel = preset_relative("split", datum=datum)
        node_count, step = rank, 1
    elif preset == "su3":
        rel = preset_relative("su3")
        datum = rel.datum
        node_count, step = 2, 1
    elif preset == "nonsplit_C":
        if rank is None:
            raise ValueError("nonsplit_C classification needs a rank")
        rel = preset_relative("nonsplit_C", rank=rank)
        datum = rel.datum
        node_count, step = rank, 1
    elif preset == "sl_skew":
        if s is None or d is None:
            raise ValueError("sl_skew classification needs s and d")
        rel = preset_relative("sl_skew", s=s, d=d)
        datum = rel.datum
        node_count, step = s, d
    else:
        raise ValueError(f"unsupported preset {preset!r}")
    if not J or any(j < 1 or j > node_count for j in J):
        raise ValueError("J must be a nonempty subset of the node range")

    full = J == list(range(1, node_count + 1))
    if full:
        table = True
    elif preset == "nonsplit_C" and J == list(range(1, rank)):
        table = True
    elif preset == "sl_skew" or (preset == "split" and family == "A"):
        g = node_count + 1
        for j in J:
            g = gcd(g, j)
        table = g == 1
    else:
        table = False

    omegas = [datum.fundamental_weights[j * step - 1] for j in J]
    hyps = root_hyperplanes(rel)
    max_num = 1
    for tup in _joint_orbit(datum, omegas):
        imgs = [rel.restrict(v) for v in tup]
        for h in hyps:
            coeffs = [dot(h, img) for img in imgs]
            if all(c == 0 for c in coeffs):
                return table, False
            den = 1
            for c in coeffs:
                den = den * c.denominator // gcd(den, c.denominator)
            max_num = max(max_num, max(abs(int(c * den)) for c in coeffs))
    # powers of a base exceeding every coefficient give a regular representative
    base = max_num + 1
    lam = (Q(0),) * datum.ambient_dim
    for k, w in enumerate(omegas):
        lam = add(lam, scale(Q(base) ** k, w))
    scan = True
    for (v,) in _joint_orbit(datum, [lam]):
        rv = rel.restrict(v)
        if any(dot(h, rv) == 0 for h in hyps):
            scan = False
            break
    return table, scan
