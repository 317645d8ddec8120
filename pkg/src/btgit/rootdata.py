"""Root systems of classical families with Weyl groups and restricted data.

Absolute data lives in the standard ambient coordinates: family A_l in the
sum-zero subspace of Q^{l+1}, families B/C/D in Q^l, with the ambient dot
product as the invariant inner product.  Restricted (relative) data is
shipped as validated presets; apartment-facing quantities are expressed in
reduced coordinates of dimension equal to the relative rank.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction as Q
from typing import Dict, List, Optional, Tuple

from .qvec import Vector, add, dot, is_zero, neg, qvec, scale, sub, zero

ROOT_COUNTS = {"A": lambda l: l * (l + 1), "B": lambda l: 2 * l * l,
               "C": lambda l: 2 * l * l, "D": lambda l: 2 * l * (l - 1)}

WEYL_ORDERS = {
    "A": lambda l: _factorial(l + 1),
    "B": lambda l: 2 ** l * _factorial(l),
    "C": lambda l: 2 ** l * _factorial(l),
    "D": lambda l: 2 ** (l - 1) * _factorial(l),
}


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def reflect(v: Vector, alpha: Vector) -> Vector:
    """Reflection of v in the hyperplane orthogonal to alpha."""
    return sub(v, scale(2 * dot(v, alpha) / dot(alpha, alpha), alpha))


@dataclass(frozen=True)
class RootDatum:
    family: str
    rank: int
    ambient_dim: int
    simple_roots: Tuple[Vector, ...]
    all_roots: Tuple[Vector, ...]
    fundamental_weights: Tuple[Vector, ...]

    def positive_roots(self) -> Tuple[Vector, ...]:
        pos = []
        for a in self.all_roots:
            for x in a:
                if x > 0:
                    pos.append(a)
                    break
                if x < 0:
                    break
        return tuple(pos)


def _simple_basis(family: str, rank: int) -> List[Vector]:
    if family == "A":
        n = rank + 1
        basis = []
        for i in range(rank):
            v = [Q(0)] * n
            v[i], v[i + 1] = Q(1), Q(-1)
            basis.append(tuple(v))
        return basis
    basis = []
    for i in range(rank - 1):
        v = [Q(0)] * rank
        v[i], v[i + 1] = Q(1), Q(-1)
        basis.append(tuple(v))
    last = [Q(0)] * rank
    if family == "B":
        last[rank - 1] = Q(1)
    elif family == "C":
        last[rank - 1] = Q(2)
    elif family == "D":
        if rank < 2:
            raise ValueError("family D needs rank >= 2")
        last[rank - 2], last[rank - 1] = Q(1), Q(1)
    else:
        raise ValueError(f"unsupported family {family!r}")
    basis.append(tuple(last))
    return basis


def build_root_system(family: str, rank: int) -> RootDatum:
    """Build the full root datum by reflection closure of a simple basis."""
    if family not in ROOT_COUNTS:
        raise ValueError(f"unsupported family {family!r}")
    if rank < 1 or (family in ("B", "C") and rank < 2) or (family == "D" and rank < 2):
        raise ValueError(f"unsupported rank {rank} for family {family}")
    simple = _simple_basis(family, rank)
    roots = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for r in frontier:
            for a in simple:
                img = reflect(r, a)
                if img not in roots:
                    roots.add(img)
                    nxt.append(img)
        frontier = nxt
    all_roots = tuple(sorted(roots))
    expected = ROOT_COUNTS[family](rank)
    if len(all_roots) != expected:
        raise AssertionError(f"{family}{rank}: {len(all_roots)} roots, expected {expected}")

    # Fundamental weights: solve 2(w_i, a_j)/(a_j, a_j) = delta_ij inside the
    # span of the simple roots (for family A that span is the sum-zero space).
    coeff_rows = [
        [2 * dot(ak, aj) / dot(aj, aj) for ak in simple] for aj in simple
    ]
    weights = []
    for i in range(rank):
        rhs = [Q(1) if j == i else Q(0) for j in range(rank)]
        sol = _solve(coeff_rows, rhs)
        w = zero(len(simple[0]))
        for c, a in zip(sol, simple):
            w = add(w, scale(c, a))
        weights.append(w)
    return RootDatum(family, rank, len(simple[0]), tuple(simple), all_roots, tuple(weights))


def _solve(rows: List[List[Q]], rhs: List[Q]) -> List[Q]:
    """Solve a square nonsingular rational system by Gaussian elimination."""
    n = len(rows)
    m = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def weyl_orbit(datum: RootDatum, weight: Vector) -> Tuple[Vector, ...]:
    """Full Weyl-group orbit of a weight, by closure under simple reflections."""
    if len(weight) != datum.ambient_dim:
        raise ValueError("weight has wrong ambient dimension")
    orbit = {tuple(weight)}
    frontier = [tuple(weight)]
    while frontier:
        nxt = []
        for v in frontier:
            for a in datum.simple_roots:
                img = reflect(v, a)
                if img not in orbit:
                    orbit.add(img)
                    nxt.append(img)
        frontier = nxt
    return tuple(sorted(orbit))


Matrix = Tuple[Vector, ...]


def _reflection_matrix(alpha: Vector, dim: int) -> Matrix:
    cols = []
    for j in range(dim):
        e = tuple(Q(1) if k == j else Q(0) for k in range(dim))
        cols.append(reflect(e, alpha))
    # store rows: row i of the matrix sending e_j to cols[j]
    return tuple(tuple(cols[j][i] for j in range(dim)) for i in range(dim))


def _mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


def _mat_apply(a: Matrix, v: Vector) -> Vector:
    return tuple(dot(row, v) for row in a)


def weyl_elements(datum: RootDatum) -> Tuple[Matrix, ...]:
    """Every Weyl-group element as an ambient matrix (closure under generators)."""
    dim = datum.ambient_dim
    gens = [_reflection_matrix(a, dim) for a in datum.simple_roots]
    ident = tuple(tuple(Q(1) if i == j else Q(0) for j in range(dim)) for i in range(dim))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for w in frontier:
            for g in gens:
                img = _mat_mul(g, w)
                if img not in seen:
                    seen.add(img)
                    nxt.append(img)
        frontier = nxt
    return tuple(seen)


def weyl_order(datum: RootDatum) -> int:
    """Order of the Weyl group, via the orbit of a regular weight."""
    rho = zero(datum.ambient_dim)
    for w in datum.fundamental_weights:
        rho = add(rho, w)
    return len(weyl_orbit(datum, rho))


@dataclass(frozen=True)
class RelativeDatum:
    """Restriction data of a (possibly non-split) group in reduced coordinates.

    dual_matrix maps an absolute weight (ambient coordinates) to its reduced
    dual coordinates; apartment points use the paired primal coordinates, so
    that the natural pairing is the plain dot product.  gram is the
    W_K-invariant metric on primal coordinates, used for squared distances.
    """

    name: str
    datum: RootDatum
    rank: int
    dual_matrix: Tuple[Vector, ...]
    relative_roots: Tuple[Vector, ...]
    relative_simple: Tuple[Vector, ...]
    gamma: Tuple[Tuple[Vector, Q], ...]
    gram: Tuple[Vector, ...]

    def restrict(self, beta: Vector) -> Vector:
        """Reduced dual coordinates of the restriction of an absolute weight."""
        return tuple(dot(row, beta) for row in self.dual_matrix)

    def gamma_of(self, alpha: Vector) -> Q:
        for root, step in self.gamma:
            if root == alpha:
                return step
        raise ValueError(f"{alpha} is not a relative root")

    def is_split(self) -> bool:
        return self.name.startswith("split")


def _split_relative(datum: RootDatum) -> RelativeDatum:
    if datum.family == "A":
        n = datum.rank + 1
        rows = []
        for k in range(datum.rank):
            row = [Q(0)] * n
            row[k], row[k + 1] = Q(1), Q(-1)
            rows.append(tuple(row))
        dual = tuple(rows)
        gram = tuple(
            tuple(dot(rows[i], rows[j]) / 2 for j in range(datum.rank))
            for i in range(datum.rank)
        )
    else:
        dual = tuple(
            tuple(Q(1) if i == j else Q(0) for j in range(datum.rank))
            for i in range(datum.rank)
        )
        gram = dual
    rel_roots = tuple(sorted({tuple(dot(r, a) for r in dual) for a in datum.all_roots}))
    rel_simple = tuple(tuple(dot(r, a) for r in dual) for a in datum.simple_roots)
    gamma = tuple((a, Q(1)) for a in rel_roots)
    return RelativeDatum(f"split_{datum.family}{datum.rank}", datum, datum.rank,
                         dual, rel_roots, rel_simple, gamma, gram)


def _su3_relative() -> RelativeDatum:
    datum = build_root_system("A", 2)
    dual = (qvec([1, 0, -1]),)
    rel_roots = tuple(sorted({(dot(dual[0], a),) for a in datum.all_roots}))
    assert rel_roots == ((Q(-2),), (Q(-1),), (Q(1),), (Q(2),))
    gamma = []
    for a in rel_roots:
        doubled = (2 * a[0],)
        gamma.append((a, Q(1, 2) if doubled in rel_roots else Q(1)))
    return RelativeDatum("su3", datum, 1, dual, rel_roots, ((Q(1),),),
                         tuple(gamma), ((Q(1),),))


def _nonsplit_c_relative(rank: int) -> RelativeDatum:
    if rank < 2:
        raise ValueError("nonsplit_C needs rank >= 2")
    datum = build_root_system("C", rank)
    m = rank // 2
    rows = []
    for i in range(m):
        row = [Q(0)] * rank
        row[2 * i], row[2 * i + 1] = Q(1), Q(1)
        rows.append(tuple(row))
    dual = tuple(rows)
    images = {tuple(dot(r, a) for r in dual) for a in datum.all_roots}
    rel_roots = tuple(sorted(v for v in images if not is_zero(v)))
    # simple relative roots: f_i - f_{i+1} and the last one (2f_m, or f_m in
    # the odd case where f_m is multipliable)
    simple = []
    for i in range(m - 1):
        v = [Q(0)] * m
        v[i], v[i + 1] = Q(1), Q(-1)
        simple.append(tuple(v))
    last = [Q(0)] * m
    last[m - 1] = Q(1) if rank % 2 else Q(2)
    simple.append(tuple(last))
    gamma = []
    for a in rel_roots:
        doubled = tuple(2 * x for x in a)
        gamma.append((a, Q(1, 2) if doubled in rel_roots else Q(1)))
    gram = tuple(tuple(Q(1) if i == j else Q(0) for j in range(m)) for i in range(m))
    return RelativeDatum(f"nonsplit_C{rank}", datum, m, dual, rel_roots,
                         tuple(simple), tuple(gamma), gram)


def _sl_skew_relative(s: int, d: int) -> RelativeDatum:
    """Restriction data of the special linear group of a degree-d skew field."""
    if s < 1 or d < 1:
        raise ValueError("need s >= 1 and d >= 1")
    n = (s + 1) * d
    datum = build_root_system("A", n - 1)
    if d == 1:
        return _split_relative(datum)
    rows = []
    for k in range(s):
        row = [Q(0)] * n
        for j in range(d):
            row[k * d + j] = Q(1)
            row[(k + 1) * d + j] = Q(-1)
        rows.append(tuple(row))
    dual = tuple(rows)
    images = {tuple(dot(r, a) for r in dual) for a in datum.all_roots}
    rel_roots = tuple(sorted(v for v in images if not is_zero(v)))
    small = build_root_system("A", s)
    small_split = _split_relative(small)
    gamma = tuple((a, Q(1)) for a in rel_roots)
    return RelativeDatum(f"sl_skew_{s}_{d}", datum, s, dual, rel_roots,
                         small_split.relative_simple, gamma, small_split.gram)


def preset_relative(name: str, datum: Optional[RootDatum] = None,
                    rank: Optional[int] = None, s: Optional[int] = None,
                    d: Optional[int] = None) -> RelativeDatum:
    """Validated restriction presets: split, su3, nonsplit_C, sl_skew."""
    if name == "split":
        if datum is None:
            raise ValueError("split preset needs a root datum")
        return _split_relative(datum)
    if name == "su3":
        return _su3_relative()
    if name == "nonsplit_C":
        if rank is None:
            raise ValueError("nonsplit_C preset needs a rank")
        return _nonsplit_c_relative(rank)
    if name == "sl_skew":
        if s is None or d is None:
            raise ValueError("sl_skew preset needs s and d")
        return _sl_skew_relative(s, d)
    raise ValueError(f"unsupported preset {name!r}")


def dominant_weight(datum: RootDatum, J, coeffs) -> Tuple[Vector, bool]:
    """Weight sum over J of n_j * w_j; returns (weight, lies in the open cone).

    Coefficients must be nonnegative with at least one positive; the weight is
    in the open ample cone C(X) exactly when every listed coefficient is
    positive.
    """
    J = list(J)
    coeffs = [c if isinstance(c, Q) else Q(c) for c in coeffs]
    if not J or len(J) != len(coeffs):
        raise ValueError("J and coefficients must be nonempty and aligned")
    if any(j < 1 or j > datum.rank for j in J):
        raise ValueError("J out of range")
    if any(c < 0 for c in coeffs):
        raise ValueError("coefficients must be nonnegative")
    if all(c == 0 for c in coeffs):
        raise ValueError("all coefficients are zero")
    w = zero(datum.ambient_dim)
    for j, c in zip(J, coeffs):
        w = add(w, scale(c, datum.fundamental_weights[j - 1]))
    return w, all(c > 0 for c in coeffs)
