from fractions import Fraction

import pytest

import heightlab as hl

E37 = [0, 0, 1, -1, 0]
ESPLIT = [1, 0, 0, 0, -4]


def test_canonical_height_anchor():
    v, err = hl.canonical_height(E37, (0, 0))
    assert err < 1e-9
    assert abs(v - 0.0255557041199844) < 1e-10


def test_quadratic_scaling():
    v1, _ = hl.canonical_height(E37, (0, 0))
    v4, _ = hl.canonical_height(E37, (2, -3))
    assert abs(v4 - 16 * v1) < 1e-9


def test_fraction_inputs_and_float_rejection():
    v, _ = hl.canonical_height(E37, (Fraction(1, 4), "-5/8"))
    v1, _ = hl.canonical_height(E37, (0, 0))
    assert abs(v - 25 * v1) < 1e-9
    with pytest.raises(ValueError):
        hl.canonical_height(E37, (0.5, 1.0))


def test_curve_info():
    info = hl.curve_info(E37)
    assert info["j"] == Fraction(110592, 37)
    assert info["torsion_order"] == 1
    assert info["bad_primes"][0]["p"] == 37
    assert info["bad_primes"][0]["type"] == "multiplicative_nonsplit"


def test_lattes_height_doubles():
    hE, _ = hl.canonical_height([0, 0, 0, -2, 0], (-1, 1))
    hf, err = hl.lattes_height(-2, 0, -1)
    assert err < 1e-8
    assert abs(hf - 2 * hE) < 1e-8
    orb = hl.lattes_orbit(-2, 0, 0)
    assert orb["preperiodic"]


def test_bound_variants():
    b41 = hl.bound(E37, 37, variant=41)
    b42 = hl.bound(E37, 37, variant=42)
    assert b41["result"]["height_floor"][0] > 0
    assert b42["result"]["height_floor"][0] == b41["result"]["height_floor"][0] / 2
    v, _ = hl.canonical_height(E37, (0, 0))
    assert b41["result"]["height_floor"][0] <= v


def test_tower():
    seq = hl.small_height_tower(5, levels=3)
    assert [l["field_degree"] for l in seq["levels"]] == [4, 16, 64]
    base = seq["base_height"][0]
    for k, l in enumerate(seq["levels"], start=1):
        assert l["height"][0] == base / 4**k
        assert l["certificate"]["verdict"] == "unramified"


def test_construct_point():
    up = hl.construct_unramified_point([0, 0, 0, 0, 1], 5)
    assert up["non_torsion_certified"]
    assert up["x"] == Fraction(5)
    assert up["y_certificate"]["verdict"] == "unramified"


def test_sweeps():
    assert hl.pairing_weight_identity(20)
    rep = hl.dynamical_match(E37, (0, 0), mmax=2)
    assert rep["all_hold"]
    sweep = hl.multiple_sum_sweep(ESPLIT, (4, 6), 2, smax=8)
    assert sweep["all_hold"]


def test_lambert_and_minpoly():
    w, err = hl.lambert_w(-1, -0.2)
    import math

    assert abs(w * math.exp(w) - (-0.2)) < 1e-12
    h, _ = hl.height_from_minpoly([-2, 0, 0, 1])
    assert abs(h - math.log(2) / 3) < 1e-9
