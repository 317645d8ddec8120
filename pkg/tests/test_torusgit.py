"""Weight polytopes, stability statuses, chambers, and the regular-weight table."""

from fractions import Fraction as Q
from itertools import permutations

import pytest
from helpers import random_proj_point, rng

from btgit.models import make_point, model_relative, weighted_coordinates
from btgit.polyhedra import hull_member
from btgit.qvec import dot, is_zero, qvec
from btgit.rootdata import build_root_system, preset_relative
from btgit.torusgit import (WeightedPoint, chamber_leq, chamber_of, chi_status,
                            classify_regular_weights, mu_K, mu_residue,
                            root_hyperplanes, stability_status, translate)
from btgit.valfield import ONE, ZERO, PuiseuxElement

P = PuiseuxElement
REL_A1 = preset_relative("split", datum=build_root_system("A", 1))
REL_A2 = preset_relative("split", datum=build_root_system("A", 2))
REL_C2 = preset_relative("split", datum=build_root_system("C", 2))


def _p1(x0, x1) -> WeightedPoint:
    return weighted_coordinates(make_point("proj(2)", (x0, x1)))


GR24_LINE = weighted_coordinates(make_point(
    "grass(2,4)", [ONE, ONE, ZERO, ZERO, -ONE, -ONE]))
GR24_REL = model_relative("grass(2,4)")


def test_weighted_point_scales_to_min_valuation_zero():
    x = WeightedPoint([((Q(1),), 0, P.t_power(2)), ((Q(-1),), 1, P.t_power(3))])
    assert min(c.valuation() for _, _, c in x.entries) == 0
    with pytest.raises(ValueError):
        WeightedPoint([((Q(1),), 0, ZERO)])


def test_weighted_point_json_round_trip():
    x = _p1(ONE, P.t_power(Q(1, 2)))
    assert WeightedPoint.from_json(x.to_json()) == x


def test_translate_shifts_valuations_by_weight_pairing():
    x = _p1(ONE, ONE)
    y = translate(x, (Q(1), Q(-1)))
    vals = {i: c.valuation() for _, i, c in y.entries}
    assert vals[1] - vals[0] == -2  # weights e1, e2 pair to +1 and -1


def test_mu_k_examples():
    hull = mu_K(_p1(ONE, ONE), REL_A1)
    assert set(hull.points) == {(Q(1),), (Q(-1),)}
    assert mu_K(_p1(ONE, ZERO), REL_A1).points == ((Q(1),),)
    pts = set(mu_K(GR24_LINE, GR24_REL).points)
    assert len(pts) == 4
    for v in pts:
        assert tuple(-a for a in v) in pts  # vertex pairs sum to zero


def test_mu_residue_examples():
    x = _p1(ONE, P.t_power(Q(1, 2)))
    assert mu_residue(x, REL_A1, (Q(0),)).points == ((Q(1),),)
    at_quarter = mu_residue(x, REL_A1, (Q(1, 4),))
    assert set(at_quarter.points) == {(Q(1),), (Q(-1),)}
    y = _p1(ONE, ONE)
    assert set(mu_residue(y, REL_A1, (Q(0),)).points) == set(mu_K(y, REL_A1).points)


def test_stability_status_examples():
    assert stability_status(_p1(ONE, ONE), REL_A1) == "stable"
    assert stability_status(_p1(ONE, ZERO), REL_A1) == "unstable"
    assert stability_status(GR24_LINE, GR24_REL) == "strictly_semistable"


def test_chi_status_examples():
    chi_plus = GR24_REL.restrict((1, 1, 0, 0))
    chi_minus = GR24_REL.restrict((1, -1, 0, 0))
    assert chi_status(GR24_LINE, GR24_REL, chi_plus) == "semistable"
    assert chi_status(GR24_LINE, GR24_REL, chi_minus) == "unstable"
    stable = _p1(ONE, ONE)
    for chi in ((Q(1),), (Q(-2),)):
        assert chi_status(stable, REL_A1, chi) == "stable"


def test_root_hyperplanes_counts():
    assert len(root_hyperplanes(REL_A2)) == 3
    assert len(root_hyperplanes(REL_C2)) == 4
    assert root_hyperplanes(REL_A1) == ((Q(1),),)


def test_chamber_of_examples():
    hyps = root_hyperplanes(REL_A2)
    w12 = REL_A2.restrict(qvec([1, 0, -1]))  # omega1 + omega2
    on_wall = chamber_of(w12, hyps)
    assert len(on_wall.containing()) == 1
    w21 = REL_A2.restrict(qvec([Q(5, 3), Q(-1, 3), Q(-4, 3)]))  # 2*omega1+omega2
    assert chamber_of(w21, hyps).containing() == ()
    c_hyps = root_hyperplanes(REL_C2)
    e1 = REL_C2.restrict((1, 0))
    assert len(chamber_of(e1, c_hyps).containing()) == 1


def test_chamber_of_respects_ample_cone():
    hyps = root_hyperplanes(REL_A2)
    cone = [REL_A2.restrict(w) for w in
            (build_root_system("A", 2).fundamental_weights)]
    chamber_of(REL_A2.restrict(qvec([1, 0, -1])), hyps, cone=cone)
    with pytest.raises(ValueError):
        chamber_of((Q(-5), Q(0)), hyps, cone=cone)


def test_chamber_leq_examples():
    hyps = root_hyperplanes(REL_A2)
    wall = REL_A2.restrict(qvec([1, 0, -1]))
    up = REL_A2.restrict(qvec([Q(5, 3), Q(-1, 3), Q(-4, 3)]))
    down = REL_A2.restrict(qvec([Q(4, 3), Q(1, 3), Q(-5, 3)]))
    assert chamber_leq(wall, up, hyps)
    assert not chamber_leq(up, down, hyps)
    for lam in (wall, up, down):
        assert chamber_leq(lam, lam, hyps)


def test_classify_examples():
    assert classify_regular_weights("A", 3, [2]) == (False, False)
    assert classify_regular_weights("A", 3, [1]) == (True, True)
    assert classify_regular_weights("C", 2, [1]) == (False, False)
    assert classify_regular_weights(preset="su3", J=[1, 2]) == (True, True)
    assert classify_regular_weights(preset="nonsplit_C", rank=2, J=[1]) == \
        (True, True)


def test_classify_rejects_bad_j():
    with pytest.raises(ValueError):
        classify_regular_weights("A", 2, [])
    with pytest.raises(ValueError):
        classify_regular_weights("A", 2, [5])


def test_status_invariant_under_coordinate_permutation():
    r = rng(37)
    for _ in range(40):
        p = random_proj_point(r, 3)
        rel = model_relative("proj(3)")
        base = stability_status(weighted_coordinates(p), rel)
        for perm in permutations(range(3)):
            q = make_point("proj(3)", tuple(p.data[0][i] for i in perm))
            assert stability_status(weighted_coordinates(q), rel) == base


def test_status_matches_origin_membership():
    r = rng(41)
    rel = model_relative("proj(3)")
    for _ in range(60):
        wp = weighted_coordinates(random_proj_point(r, 3))
        hull = mu_K(wp, rel)
        origin = (Q(0),) * rel.rank
        status = stability_status(wp, rel)
        assert (status != "unstable") == hull_member(hull, origin, "closure")
        assert (status == "stable") == hull_member(hull, origin, "interior")
