"""Deterministic samplers shared across the test modules."""

from __future__ import annotations

import random
from fractions import Fraction as Q
from typing import List, Optional

from btgit.models import make_point, symplectic_form
from btgit.valfield import ONE, ZERO, PuiseuxElement


def rng(seed: int) -> random.Random:
    return random.Random(seed)


def random_rational(r: random.Random, den: int = 6) -> Q:
    return Q(r.randint(-8, 8), r.randint(1, den))


def random_element(r: random.Random, max_terms: int = 3, denom: int = 2,
                   nonzero: bool = False, lo: int = -2, hi: int = 3
                   ) -> PuiseuxElement:
    """Random finite sum of terms c * t^q with exponents in (1/denom) * Z."""
    while True:
        k = r.randint(1 if nonzero else 0, max_terms)
        exps = r.sample([Q(n, denom) for n in range(lo * denom, hi * denom + 1)],
                        k) if k else []
        out = ZERO
        for q in exps:
            c = 0
            while c == 0:
                c = r.randint(-4, 4)
            out = out + PuiseuxElement.monomial(c, q)
        if out or not nonzero:
            return out


def random_monomial(r: random.Random, denom: int = 2) -> PuiseuxElement:
    c = 0
    while c == 0:
        c = r.randint(-4, 4)
    return PuiseuxElement.monomial(c, Q(r.randint(-2, 4), denom))


def random_proj_point(r: random.Random, n: int, denom: int = 2):
    while True:
        coords = [random_element(r, denom=denom) for _ in range(n)]
        if any(bool(c) for c in coords):
            return make_point(f"proj({n})", coords)


def random_grass24_point(r: random.Random, denom: int = 2):
    while True:
        rows = [[random_element(r, max_terms=2, denom=denom) for _ in range(4)]
                for _ in range(2)]
        try:
            return make_point("grass(2,4)", rows)
        except ValueError:
            continue


def random_sp4_flag(r: random.Random):
    """Isotropic plane through a basis with one pivot coordinate kept monomial."""
    while True:
        u = [random_element(r, max_terms=2, denom=1) for _ in range(3)]
        u.append(random_monomial(r, denom=1))
        q4, c4 = u[3].terms[0]
        v = [ZERO] + [random_element(r, max_terms=2, denom=1) for _ in range(3)]
        # solve u1*v4 - u4*v1 + u2*v3 - u3*v2 = 0 for v1
        v[0] = (u[0] * v[3] + u[1] * v[2] - u[2] * v[1]).monomial_div(c4, q4)
        try:
            p = make_point("sp4_flag", (tuple(u), tuple(v)))
        except ValueError:
            continue
        assert not symplectic_form(p.data[0], p.data[1])
        return p


def random_su3_pair(r: random.Random, all_nonzero: bool = False):
    """Pair with x_1 tau(y_1) + x_2 tau(y_2) + x_3 tau(y_3) = 0 by construction."""
    while True:
        x = [random_element(r, max_terms=2, denom=2, nonzero=True)
             for _ in range(2)]
        x.append(random_monomial(r, denom=2))
        y = [random_element(r, max_terms=2, denom=2, nonzero=all_nonzero)
             for _ in range(2)]
        s = x[0] * y[0].tau_twist() + x[1] * y[1].tau_twist()
        q3, c3 = x[2].terms[0]
        y3 = (-s).monomial_div(c3, q3).tau_twist()
        if all_nonzero and not y3:
            continue
        if not (any(bool(c) for c in y[:2]) or y3):
            continue
        try:
            return make_point("su3_pair", (tuple(x), (y[0], y[1], y3)))
        except ValueError:
            continue


def random_sl3_flag(r: random.Random, denom: int = 1):
    """Vector-covector pair with a monomial pivot to keep the pairing zero."""
    while True:
        v = [random_element(r, max_terms=2, denom=denom, nonzero=True),
             random_element(r, max_terms=2, denom=denom),
             random_monomial(r, denom=denom)]
        phi = [random_element(r, max_terms=2, denom=denom) for _ in range(2)]
        q3, c3 = v[2].terms[0]
        phi3 = (-(v[0] * phi[0] + v[1] * phi[1])).monomial_div(c3, q3)
        if not (any(bool(c) for c in phi) or phi3):
            continue
        return make_point("sl3_flag", (tuple(v), (phi[0], phi[1], phi3)))


def random_p1_point(r: random.Random, rational_over_base: Optional[bool] = None):
    """Point of the projective line; optionally force (non-)integer exponents."""
    while True:
        denom = 1 if rational_over_base else r.choice((2, 3, 4))
        x0 = ONE
        x1 = random_element(r, max_terms=3, denom=denom, nonzero=True)
        if rational_over_base is True and not x1.is_base():
            continue
        if rational_over_base is False and x1.is_base():
            continue
        return make_point("proj(2)", (x0, x1))


def grid_points(rank: int, step: Q = Q(1, 2), radius: int = 2) -> List[tuple]:
    """Rational grid around the origin of a rank-dimensional apartment."""
    ticks = [step * k for k in range(-int(radius / step), int(radius / step) + 1)]
    out = [()]
    for _ in range(rank):
        out = [p + (t,) for p in out for t in ticks]
    return out
