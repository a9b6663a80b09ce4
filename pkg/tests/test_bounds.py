import json
import math
from fractions import Fraction

import pytest

from codebounds.bounds import (
    ball_sdp_bound,
    delsarte_equivalence_gap,
    delsarte_lp_bound,
    projective_sdp_bound,
    reduced_theta_prime,
    theta_bound,
    triple_sdp_bound,
    triple_translation_oracle,
    unsymmetrized_theta_prime,
)
from codebounds.schemes import Graph, SpaceSpec


def c5() -> Graph:
    return Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])


# -- exact LP ---------------------------------------------------------------

@pytest.mark.parametrize("n,d,value", [
    (5, 5, Fraction(2)),
    (3, 2, Fraction(4)),
    (5, 3, Fraction(4)),
    (6, 3, Fraction(8)),
    (12, 5, Fraction(40)),
    (8, 3, Fraction(128, 5)),   # LP optimum sits strictly above A(8,3) = 20
    (9, 3, Fraction(128, 3)),
])
def test_delsarte_known_values(n, d, value):
    res = delsarte_lp_bound(n, d)
    assert res.status == "optimal"
    assert res.certified == value
    assert res.bound == math.floor(value)


def test_delsarte_trivial_distance():
    res = delsarte_lp_bound(6, 1)
    assert res.certified == 64  # every pair allowed


def test_delsarte_result_record():
    rec = delsarte_lp_bound(5, 3).to_record()
    assert set(rec) == {"request", "primal", "dual", "gap", "bound", "status",
                        "certified", "wall_time_ms", "kernel_cache_hit",
                        "warnings"}
    json.dumps(rec)  # serializable as-is


# -- theta ------------------------------------------------------------------

def test_theta_pentagon_both_variants():
    plain = theta_bound(c5(), "theta")
    prime = theta_bound(c5(), "theta_prime")
    assert abs(plain.dual - math.sqrt(5)) < 1e-6
    assert abs(prime.dual - math.sqrt(5)) < 1e-6
    assert plain.bound == prime.bound == 2


def test_theta_extremes():
    comp = Graph(4, [(u, v) for u in range(4) for v in range(u + 1, 4)])
    assert abs(theta_bound(comp, "theta").dual - 1.0) < 1e-6
    empty = Graph(4, [])
    assert abs(theta_bound(empty, "theta").dual - 4.0) < 1e-6


def test_theta_prime_below_theta():
    g = Graph(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)])
    tp = theta_bound(g, "theta_prime").dual
    t = theta_bound(g, "theta").dual
    assert tp <= t + 1e-6


# -- pair sdp ---------------------------------------------------------------

def test_ball_full_cube_matches_lp():
    res = ball_sdp_bound(5, 3)
    assert res.bound == 4
    assert abs(res.dual - 4.0) < 1e-6
    assert res.certified is not None and res.certified >= 4


def test_ball_weight_restricted():
    res = ball_sdp_bound(6, 3, range(4))
    assert res.bound == 7
    assert res.primal <= float(res.certified) + 1e-6


def test_ball_weak_duality_and_certificate():
    res = ball_sdp_bound(7, 3)
    lp = delsarte_lp_bound(7, 3)
    assert abs(res.dual - float(lp.certified)) < 1e-6 * max(1.0, float(lp.certified))
    # the rational certificate really is an upper bound for the primal
    assert Fraction(res.primal).limit_denominator(10 ** 12) <= res.certified + Fraction(1, 10 ** 6)


def test_ball_kernel_cache(tmp_path):
    first = ball_sdp_bound(5, 3, cache_dir=str(tmp_path))
    second = ball_sdp_bound(5, 3, cache_dir=str(tmp_path))
    assert not first.kernel_cache_hit and second.kernel_cache_hit
    a, b = first.to_record(), second.to_record()
    for rec in (a, b):
        rec.pop("wall_time_ms")
        rec.pop("kernel_cache_hit")
    assert a == b


def test_projective_bounds():
    res = projective_sdp_bound(3, 2, 2)
    assert res.bound == 8  # seven lines plus the whole space meet distance 2
    res = projective_sdp_bound(4, 2, 3)
    assert res.bound == 6
    assert abs(res.dual - 6.2) < 1e-5


def test_reduced_theta_prime_direct():
    val = reduced_theta_prime(SpaceSpec.hamming(6), 3)
    assert abs(val - 8.0) < 1e-6


def test_unsymmetrized_agreement():
    spec = SpaceSpec.hamming(4)
    sym = reduced_theta_prime(spec, 3)
    unsym = unsymmetrized_theta_prime(spec, 3)
    assert abs(sym - unsym) < 1e-6


def test_equivalence_gap_helper():
    assert delsarte_equivalence_gap(7, 4) <= 1e-6


# -- triple sdp -------------------------------------------------------------

def test_triple_vacuous_threshold():
    res = triple_sdp_bound(4, "ghd", 2)  # every distinct triple has ghd >= 2
    assert abs(res.dual - 16.0) < 1e-5
    assert res.bound == 16


@pytest.mark.parametrize("n,f,m,want", [
    (4, "ghd", 3, 8),
    (4, "ghd", 4, 4),
    (4, "radial", 2, 5),
])
def test_triple_known_bounds(n, f, m, want):
    res = triple_sdp_bound(n, f, m)
    assert res.bound == want
    assert res.certified is not None
    assert res.primal <= float(res.certified) + 1e-6


def test_triple_fractional_threshold():
    res = triple_sdp_bound(5, "avg_radial", Fraction(4, 3))
    assert res.bound == 8


def test_triple_matches_translation_oracle():
    sym = triple_sdp_bound(4, "ghd", 3)
    unsym = triple_translation_oracle(4, "ghd", 3)
    assert abs(float(sym.dual) - unsym) < 1e-5


def test_bound_result_json_stable():
    res = triple_sdp_bound(4, "ghd", 4)
    data = json.loads(res.to_json())
    assert data["request"]["kind"] == "triple"
    assert isinstance(data["certified"], str)
    assert data["bound"] == 4
