"""Exact rational convex geometry: hull membership, cones, minimax LP, balls.

Everything is computed with Fraction arithmetic; no floating point is used
anywhere.  The linear programs are solved by a two-phase simplex with Bland's
rule, so termination is guaranteed; the environment variable
BTGIT_LP_PIVOT_LIMIT caps the pivot count (default: unlimited).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction as Q
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from .qvec import Vector, add, dot, is_zero, neg, primitive, qvec, scale, sub, zero
from .valfield import INF


class PivotLimitExceeded(RuntimeError):
    pass


def _pivot_limit() -> Optional[int]:
    raw = os.environ.get("BTGIT_LP_PIVOT_LIMIT")
    return int(raw) if raw else None


# ---------------------------------------------------------------------------
# linear algebra over Q


def rref(rows: Sequence[Sequence[Q]]) -> Tuple[List[List[Q]], List[int]]:
    """Reduced row echelon form and pivot column indices."""
    m = [list(r) for r in rows]
    pivots: List[int] = []
    r = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][col]
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def matrix_rank(rows: Sequence[Sequence[Q]]) -> int:
    return len(rref(rows)[0])


def nullspace(rows: Sequence[Sequence[Q]], dim: int) -> List[Vector]:
    """Basis of the kernel of the linear map given by the rows."""
    if not rows:
        return [tuple(Q(1) if i == j else Q(0) for j in range(dim)) for i in range(dim)]
    red, pivots = rref(rows)
    free = [j for j in range(dim) if j not in pivots]
    basis = []
    for j in free:
        v = [Q(0)] * dim
        v[j] = Q(1)
        for i, col in enumerate(pivots):
            v[col] = -red[i][j]
        basis.append(tuple(v))
    return basis


def in_span(rows: Sequence[Vector], v: Vector) -> bool:
    if is_zero(v):
        return True
    base = [list(r) for r in rows]
    return matrix_rank(base + [list(v)]) == matrix_rank(base)


# ---------------------------------------------------------------------------
# exact simplex


@dataclass
class LPResult:
    status: str  # optimal | unbounded | infeasible
    value: Optional[Q] = None
    x: Optional[Vector] = None
    ray: Optional[Vector] = None  # an improving direction when unbounded


def solve_lp(objective: Sequence[Q], eq=(), ub=(), maximize: bool = True) -> LPResult:
    """Optimize a linear functional of free rational variables.

    eq: pairs (row, rhs) with row . x == rhs
    ub: pairs (row, rhs) with row . x <= rhs
    """
    n = len(objective)
    obj = [x if isinstance(x, Q) else Q(x) for x in objective]
    if not maximize:
        obj = [-x for x in obj]
    n_slack = len(ub)
    m = len(eq) + len(ub)
    width = 2 * n + n_slack + m  # +/- split, slacks, artificials
    rows: List[List[Q]] = []
    all_rows = [(list(r), Q(rhs) if not isinstance(rhs, Q) else rhs, False) for r, rhs in eq]
    all_rows += [(list(r), Q(rhs) if not isinstance(rhs, Q) else rhs, True) for r, rhs in ub]
    for k, (r, rhs, slack) in enumerate(all_rows):
        row = [Q(0)] * (width + 1)
        for j, a in enumerate(r):
            a = a if isinstance(a, Q) else Q(a)
            row[j] = a
            row[n + j] = -a
        if slack:
            row[2 * n + (k - len(eq))] = Q(1)
        row[-1] = rhs
        if rhs < 0:
            row = [-x for x in row]
        rows.append(row)
    art0 = 2 * n + n_slack
    basis = []
    for i in range(m):
        rows[i][art0 + i] = Q(1)
        basis.append(art0 + i)

    limit = _pivot_limit()

    def run(costs: List[Q], banned: set) -> Tuple[str, Optional[int]]:
        pivots = 0
        while True:
            if limit is not None and pivots > limit:
                raise PivotLimitExceeded("LP pivot limit exceeded")
            dual = [costs[b] for b in basis]
            entering = None
            for j in range(width):
                if j in banned or j in basis:
                    continue
                rc = costs[j] - sum(dual[i] * rows[i][j] for i in range(len(rows)))
                if rc > 0:
                    entering = j
                    break
            if entering is None:
                return "optimal", None
            leaving = None
            best = None
            for i in range(len(rows)):
                if rows[i][entering] > 0:
                    ratio = rows[i][-1] / rows[i][entering]
                    if best is None or ratio < best or (ratio == best and basis[i] < basis[leaving]):
                        best = ratio
                        leaving = i
            if leaving is None:
                return "unbounded", entering
            p = rows[leaving][entering]
            rows[leaving] = [x / p for x in rows[leaving]]
            for i in range(len(rows)):
                if i != leaving and rows[i][entering] != 0:
                    f = rows[i][entering]
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[leaving])]
            basis[leaving] = entering
            pivots += 1

    # phase 1: drive the artificials to zero
    costs1 = [Q(0)] * width
    for j in range(art0, art0 + m):
        costs1[j] = Q(-1)
    run(costs1, banned=set())
    if sum(rows[i][-1] for i in range(len(rows)) if basis[i] >= art0) != 0:
        return LPResult("infeasible")
    # pivot remaining artificials out of the basis; drop redundant rows
    keep = []
    for i in range(len(rows)):
        if basis[i] >= art0:
            col = next((j for j in range(art0) if rows[i][j] != 0), None)
            if col is None:
                continue  # redundant constraint
            p = rows[i][col]
            rows[i] = [x / p for x in rows[i]]
            for k2 in range(len(rows)):
                if k2 != i and rows[k2][col] != 0:
                    f = rows[k2][col]
                    rows[k2] = [x - f * y for x, y in zip(rows[k2], rows[i])]
            basis[i] = col
        keep.append(i)
    rows[:] = [rows[i] for i in keep]
    basis[:] = [basis[i] for i in keep]

    costs2 = [Q(0)] * width
    for j in range(n):
        costs2[j] = obj[j]
        costs2[n + j] = -obj[j]
    status, entering = run(costs2, banned=set(range(art0, art0 + m)))

    def extract(vals_from_col) -> Vector:
        full = [Q(0)] * width
        for i, b in enumerate(basis):
            full[b] = vals_from_col(i)
        return tuple(full[j] - full[n + j] for j in range(n))

    if status == "unbounded":
        ray_full = [Q(0)] * width
        ray_full[entering] = Q(1)
        for i, b in enumerate(basis):
            ray_full[b] = -rows[i][entering]
        ray = tuple(ray_full[j] - ray_full[n + j] for j in range(n))
        return LPResult("unbounded", ray=ray)
    x = extract(lambda i: rows[i][-1])
    value = sum(o * xi for o, xi in zip(obj, x))
    return LPResult("optimal", value=value if maximize else -value, x=x)


# ---------------------------------------------------------------------------
# convex bodies


@dataclass(frozen=True)
class QPolytope:
    """V-representation: the convex hull of finitely many rational points."""

    points: Tuple[Vector, ...]

    def __init__(self, points: Sequence[Sequence]):
        pts = sorted({qvec(p) for p in points})
        if not pts:
            raise ValueError("a polytope needs at least one point")
        dims = {len(p) for p in pts}
        if len(dims) != 1:
            raise ValueError("points of mixed dimension")
        object.__setattr__(self, "points", tuple(pts))

    @property
    def dim(self) -> int:
        return len(self.points[0])


@dataclass(frozen=True)
class QPolyhedron:
    """H-representation: halfspaces (normal, offset) meaning normal . z >= offset."""

    halfspaces: Tuple[Tuple[Vector, Q], ...]
    dim: int

    def __init__(self, halfspaces: Sequence[Tuple[Sequence, object]], dim: Optional[int] = None):
        hs = tuple((qvec(nrm), off if isinstance(off, Q) else Q(off)) for nrm, off in halfspaces)
        if dim is None:
            if not hs:
                raise ValueError("dimension needed for an unconstrained polyhedron")
            dim = len(hs[0][0])
        object.__setattr__(self, "halfspaces", hs)
        object.__setattr__(self, "dim", dim)

    def contains(self, z: Sequence) -> bool:
        z = qvec(z)
        return all(dot(nrm, z) >= off for nrm, off in self.halfspaces)

    def contains_strictly(self, z: Sequence) -> bool:
        z = qvec(z)
        return all(dot(nrm, z) > off for nrm, off in self.halfspaces)

    def with_equality(self, normal: Sequence, value) -> "QPolyhedron":
        normal = qvec(normal)
        value = value if isinstance(value, Q) else Q(value)
        return QPolyhedron(
            list(self.halfspaces) + [(normal, value), (neg(normal), -value)], self.dim
        )

    def sup_linear(self, c: Sequence):
        """sup of c . z over the polyhedron; INF if unbounded, None if empty."""
        c = qvec(c)
        res = solve_lp(c, ub=[(neg(nrm), -off) for nrm, off in self.halfspaces])
        if res.status == "infeasible":
            return None
        if res.status == "unbounded":
            return INF
        return res.value

    def feasible_point(self) -> Optional[Vector]:
        res = solve_lp([Q(0)] * self.dim,
                       ub=[(neg(nrm), -off) for nrm, off in self.halfspaces])
        return res.x if res.status == "optimal" else None

    def is_empty(self) -> bool:
        return self.feasible_point() is None

    def is_bounded(self) -> bool:
        for i in range(self.dim):
            e = tuple(Q(1) if j == i else Q(0) for j in range(self.dim))
            if self.sup_linear(e) == INF or self.sup_linear(neg(e)) == INF:
                return False
        return True

    def single_point(self) -> Optional[Vector]:
        """The unique point of the polyhedron, or None."""
        coords = []
        for i in range(self.dim):
            e = tuple(Q(1) if j == i else Q(0) for j in range(self.dim))
            hi = self.sup_linear(e)
            lo = self.sup_linear(neg(e))
            if hi is None or lo is None:
                return None
            if hi == INF or lo == INF or hi != -lo:
                return None
            coords.append(hi)
        return tuple(coords)

    def to_json(self):
        from .valfield import format_rational
        return [
            {"normal": [format_rational(x) for x in nrm], "offset": format_rational(off)}
            for nrm, off in self.halfspaces
        ]


# ---------------------------------------------------------------------------
# hull membership


def hull_member(p: QPolytope, q: Sequence, mode: str = "closure") -> bool:
    """Exact membership of q in conv(points), in the closure or the interior.

    Interior means interior relative to the full ambient space, so a
    lower-dimensional hull has empty interior.
    """
    q = qvec(q)
    if len(q) != p.dim:
        raise ValueError("dimension mismatch")
    if mode not in ("closure", "interior"):
        raise ValueError(f"unknown mode {mode!r}")
    pts = p.points
    k = len(pts)
    if mode == "closure":
        # feasibility: lambda >= 0, sum lambda = 1, sum lambda p = q
        eq = [(tuple(pt[i] for pt in pts), q[i]) for i in range(p.dim)]
        eq.append((tuple(Q(1) for _ in pts), Q(1)))
        ub = [(tuple(Q(-1) if j == i else Q(0) for j in range(k)), Q(0)) for i in range(k)]
        res = solve_lp([Q(0)] * k, eq=eq, ub=ub)
        return res.status == "optimal"
    # interior: q + eps*d must stay in the hull for both signs of each axis
    for axis in range(p.dim):
        for sign in (1, -1):
            d = tuple(Q(sign) if j == axis else Q(0) for j in range(p.dim))
            # vars: lambda_1..k, eps; maximize eps
            eq = [
                (tuple(pt[i] for pt in pts) + (-d[i],), q[i]) for i in range(p.dim)
            ]
            eq.append((tuple(Q(1) for _ in pts) + (Q(0),), Q(1)))
            ub = [
                (tuple(Q(-1) if j == i else Q(0) for j in range(k)) + (Q(0),), Q(0))
                for i in range(k)
            ]
            obj = [Q(0)] * k + [Q(1)]
            res = solve_lp(obj, eq=eq, ub=ub)
            if res.status != "optimal" or res.value <= 0:
                return False
    return True


def hull_member_bruteforce(points: Sequence[Sequence], q: Sequence) -> bool:
    """Oracle: Caratheodory search over affinely independent subsets."""
    pts = [qvec(p) for p in points]
    q = qvec(q)
    d = len(q)
    for size in range(1, d + 2):
        for sub_pts in combinations(pts, size):
            # solve sum mu_i p_i = q, sum mu = 1 exactly, then check mu >= 0
            rows = [[pt[i] for pt in sub_pts] for i in range(d)]
            rows.append([Q(1)] * size)
            rhs = list(q) + [Q(1)]
            aug = [row + [rhs[i]] for i, row in enumerate(rows)]
            red, pivots = rref(aug)
            if size in pivots:
                continue  # inconsistent
            if len(pivots) < size:
                continue  # underdetermined; a smaller subset will witness it
            mu = [Q(0)] * size
            for r, col in enumerate(pivots):
                mu[col] = red[r][size]
            if all(x >= 0 for x in mu):
                return True
    return False


# ---------------------------------------------------------------------------
# cones


def cone_h_rep(generators: Sequence[Sequence], dim: int) -> QPolyhedron:
    """H-representation of the conic hull of finitely many generators.

    Facets are found by brute force over subsets spanning hyperplanes of the
    linear span; directions orthogonal to the span become equality pairs.
    """
    gens = [qvec(g) for g in generators if not is_zero(qvec(g))]
    halfspaces: List[Tuple[Vector, Q]] = []
    comp = nullspace(gens, dim) if gens else nullspace([], dim)
    for v in comp:
        halfspaces.append((v, Q(0)))
        halfspaces.append((neg(v), Q(0)))
    if not gens:
        return QPolyhedron(halfspaces, dim)
    span_basis = [tuple(r) for r in rref(gens)[0]]
    s = len(span_basis)
    normals = set()
    for subset in combinations(range(len(gens)), s - 1):
        m = [[dot(span_basis[i], gens[j]) for i in range(s)] for j in subset]
        ker = nullspace(m, s)
        if len(ker) != 1:
            continue
        nrm = zero(dim)
        for c, b in zip(ker[0], span_basis):
            nrm = add(nrm, scale(c, b))
        if is_zero(nrm):
            continue
        vals = [dot(nrm, g) for g in gens]
        if all(v <= 0 for v in vals):
            normals.add(primitive(neg(nrm)))
        elif all(v >= 0 for v in vals):
            normals.add(primitive(nrm))
    for nrm in sorted(normals):
        halfspaces.append((nrm, Q(0)))
    return QPolyhedron(halfspaces, dim)


def tangent_cone(p: QPolytope, at: Optional[Sequence] = None) -> QPolyhedron:
    """Tangent cone of the hull at a point of it (default: the origin)."""
    base = qvec(at) if at is not None else zero(p.dim)
    if not hull_member(p, base, "closure"):
        raise ValueError("tangent cone requested at a point outside the hull")
    return cone_h_rep([sub(pt, base) for pt in p.points], p.dim)


def polar_cone(generators: Sequence[Sequence], dim: Optional[int] = None) -> QPolyhedron:
    """The cone of directions nonpositive against every generator."""
    gens = [qvec(g) for g in generators]
    if dim is None:
        if not gens:
            raise ValueError("dimension needed for an empty generator list")
        dim = len(gens[0])
    return QPolyhedron([(neg(g), Q(0)) for g in gens if not is_zero(g)], dim)


def cone_generators(cone: QPolyhedron) -> List[Vector]:
    """Generators (extreme rays plus a lineality basis with both signs).

    Assumes every offset is zero.  Returns [] exactly when the cone is {0}.
    """
    dim = cone.dim
    rows = []
    seen_rows = set()
    for nrm, off in cone.halfspaces:
        if off != 0:
            raise ValueError("not a cone")
        if not is_zero(nrm):
            key = primitive(nrm)
            if key not in seen_rows:
                seen_rows.add(key)
                rows.append(list(key))
    lin = nullspace(rows, dim) if rows else nullspace([], dim)
    gens: List[Vector] = []
    seen = set()
    for v in lin:
        for w in (v, neg(v)):
            pv = primitive(w)
            if pv not in seen:
                seen.add(pv)
                gens.append(pv)
    lin_rank = len(lin)
    target = lin_rank + 1
    if rows:
        max_size = min(len(rows), dim)
        for size in range(0, max_size + 1):
            for subset in combinations(range(len(rows)), size):
                ker = nullspace([rows[i] for i in subset], dim)
                if len(ker) != target:
                    continue
                for v in ker:
                    if lin and in_span(lin, v):
                        continue
                    for w in (v, neg(v)):
                        if all(dot(qvec(r), w) >= 0 for r in rows):
                            pv = primitive(w)
                            if pv not in seen:
                                seen.add(pv)
                                gens.append(pv)
    else:
        pass  # whole space: lineality basis already added
    return sorted(gens)


def cone_contains(cone: QPolyhedron, v: Sequence) -> bool:
    return cone.contains(qvec(v))


def cone_interior_contains(cone: QPolyhedron, v: Sequence) -> bool:
    """Membership in the ambient-space interior of a cone given by halfspaces."""
    v = qvec(v)
    dirs = {primitive(nrm) for nrm, _ in cone.halfspaces if not is_zero(nrm)}
    if any(primitive(neg(d)) in dirs for d in dirs):
        return False  # an equality pair flattens the cone: no ambient interior
    return all(dot(nrm, v) > off for nrm, off in cone.halfspaces)


# ---------------------------------------------------------------------------
# minimax


@dataclass
class MinimaxResult:
    value: object  # Q or INF
    face: Optional[QPolyhedron]  # argmax set; None when value is INF
    ray: Optional[Vector] = None  # an improving direction when value is INF


def minimax_face(affine_forms: Sequence[Tuple[Sequence, object]]) -> MinimaxResult:
    """sup_z min_i (offset_i + normal_i . z) with its exact argmax face.

    The affine forms are (normal, offset) pairs.  When the sup is infinite the
    result carries a witness direction along which every form increases.
    """
    forms = [(qvec(nrm), off if isinstance(off, Q) else Q(off)) for nrm, off in affine_forms]
    if not forms:
        raise ValueError("need at least one affine form")
    d = len(forms[0][0])
    # vars: z (d), s; maximize s subject to s <= off_i + n_i . z
    obj = [Q(0)] * d + [Q(1)]
    ub = [(tuple(neg(nrm)) + (Q(1),), off) for nrm, off in forms]
    res = solve_lp(obj, ub=ub)
    if res.status == "unbounded":
        ray = res.ray[:d]
        return MinimaxResult(INF, None, ray=tuple(ray))
    cstar = res.value
    face = QPolyhedron([(nrm, cstar - off) for nrm, off in forms], d)
    return MinimaxResult(cstar, face)


# ---------------------------------------------------------------------------
# minimal enclosing balls


def min_enclosing_ball(points: Sequence[Sequence], gram=None) -> Tuple[Vector, Q]:
    """Exact minimal enclosing ball; returns (center, squared radius).

    The metric may be twisted by a symmetric positive-definite rational Gram
    matrix.  Candidates are circumcenters of affinely independent support
    subsets; the smallest covering candidate is the minimum ball.
    """
    pts = sorted({qvec(p) for p in points})
    if not pts:
        raise ValueError("need at least one point")
    d = len(pts[0])
    if gram is None:
        gram = [[Q(1) if i == j else Q(0) for j in range(d)] for i in range(d)]

    def gdot(x: Vector, y: Vector) -> Q:
        return sum(x[i] * gram[i][j] * y[j] for i in range(d) for j in range(d))

    best: Optional[Tuple[Q, Vector]] = None
    for size in range(1, min(len(pts), d + 1) + 1):
        for subset in combinations(pts, size):
            p0 = subset[0]
            ds = [sub(p, p0) for p in subset[1:]]
            if ds:
                m = [[2 * gdot(a, b) for b in ds] for a in ds]
                rhs = [gdot(a, a) for a in ds]
                aug = [row + [rhs[i]] for i, row in enumerate(m)]
                red, pivots = rref(aug)
                if len(pivots) < len(ds) or len(ds) in pivots:
                    continue  # affinely dependent subset
                mu = [red[r][len(ds)] for r in range(len(ds))]
                x = zero(d)
                for c, a in zip(mu, ds):
                    x = add(x, scale(c, a))
                center = add(p0, x)
                r2 = gdot(x, x)
            else:
                center, r2 = p0, Q(0)
            if all(gdot(sub(p, center), sub(p, center)) <= r2 for p in pts):
                if best is None or r2 < best[0]:
                    best = (r2, center)
    assert best is not None
    return best[1], best[0]


# ---------------------------------------------------------------------------
# hull skeleton


def hull_skeleton(p: QPolytope):
    """Vertices and edges (with primitive directions) of the hull; dim <= 4."""
    if p.dim > 4:
        raise ValueError("hull skeleton supported up to ambient dimension 4")
    pts = list(p.points)
    vertices = []
    for i, pt in enumerate(pts):
        others = [q for j, q in enumerate(pts) if j != i]
        if not others or not hull_member(QPolytope(others), pt, "closure"):
            vertices.append(pt)
    if len(vertices) <= 1:
        return vertices, []
    edges = []
    d = p.dim
    for a in range(len(vertices)):
        for b in range(a + 1, len(vertices)):
            va, vb = vertices[a], vertices[b]
            others = [v for k, v in enumerate(vertices) if k not in (a, b)]
            if not others:
                edges.append((va, vb, primitive(sub(vb, va))))
                continue
            # is conv{va, vb} a face? need c with c.va = c.vb > c.r for others
            # vars: c (d), delta; maximize delta with box -1 <= c_i <= 1
            obj = [Q(0)] * d + [Q(1)]
            eq = [(tuple(sub(va, vb)) + (Q(0),), Q(0))]
            ub = []
            for r in others:
                ub.append((tuple(sub(r, va)) + (Q(1),), Q(0)))
            for i in range(d):
                e = tuple(Q(1) if j == i else Q(0) for j in range(d))
                ub.append((e + (Q(0),), Q(1)))
                ub.append((tuple(neg(e)) + (Q(0),), Q(1)))
            res = solve_lp(obj, eq=eq, ub=ub)
            if res.status == "optimal" and res.value > 0:
                edges.append((va, vb, primitive(sub(vb, va))))
    return vertices, edges


# ---------------------------------------------------------------------------
# vertex enumeration for bounded H-polyhedra (small dimension)


def polyhedron_vertices(poly: QPolyhedron) -> List[Vector]:
    """Vertices of a bounded polyhedron by brute force over active subsets."""
    dim = poly.dim
    hs = list(poly.halfspaces)
    out = set()
    for subset in combinations(range(len(hs)), dim):
        rows = [list(hs[i][0]) for i in subset]
        rhs = [hs[i][1] for i in subset]
        aug = [r + [rhs[k]] for k, r in enumerate(rows)]
        red, pivots = rref(aug)
        if len(pivots) != dim or dim in pivots:
            continue
        v = [Q(0)] * dim
        for r, col in enumerate(pivots):
            v[col] = red[r][dim]
        v = tuple(v)
        if poly.contains(v):
            out.add(v)
    return sorted(out)
