import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kdonaldson.acceptance import _class, random_wall, wall_cross_compare
from kdonaldson.toric import blowup_p2
from kdonaldson.wallcross import (ToricWallData, UnsupportedRank, WallInput, degree_window, delta_localization,
                                  delta_modular, parity_flip_check, residue_check, vanishing_and_degree_check)

X = blowup_p2()


def wall(xi, v):
    return ToricWallData(X, _class(X, *xi), _class(X, *v))


def test_wall_input_numbers():
    w = wall((2, -3), (-1, 0)).wall_input
    assert (w.xi_sq, w.xi_K, w.xi_w, w.w_sq, w.parity_class) == (-5, -3, -5, 15, 0)
    assert degree_window(w) == (2, 6)


def test_wall_parity_condition():
    with pytest.raises(ValueError):
        WallInput(xi_sq=-4, xi_K=1, xi_w=0, w_sq=0)


def test_rank_nonzero_is_unsupported():
    with pytest.raises(UnsupportedRank):
        delta_modular(WallInput(-5, 1, 0, 0, rk_v=1), 4)


def test_modular_values_known_wall():
    assert delta_modular(wall((2, -3), (-2, 0)).wall_input, 10) == {2: 6, 6: -189, 10: 595}


def test_odd_parity_gives_zero():
    td = wall((2, -3), (-1, 1))
    assert td.wall_input.parity_class == 1
    assert set(delta_modular(td.wall_input, 8).values()) == {0}
    assert set(delta_localization(td, 1).degrees.values()) == {0}


@pytest.mark.parametrize("xi", [(2, -3), (1, -2)])
@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_sides_agree(xi, n):
    ok, msg, _ = wall_cross_compare(xi, n)
    assert ok, msg


def test_sides_agree_at_l2():
    ok, msg, data = wall_cross_compare((2, -3), 2, l_max=2)
    assert ok, msg
    assert data["localization"] == {2: 6, 6: -189, 10: 595}


def test_residue_form_of_extraction():
    res = residue_check(wall((2, -3), (-1, 0)), 1)
    assert res["ok"] and res["direct"] == -22 and not res["other_poles"]


def test_two_rays_required():
    with pytest.raises(ValueError):
        delta_localization(wall((2, -3), (-1, 0)), 0, rays=((1, 3),))


_WALLS = []


def _walls():
    if not _WALLS:
        rng = random.Random(11)
        while len(_WALLS) < 100:
            xi, v = random_wall(rng)
            w = wall(xi, v).wall_input
            if max(degree_window(w)) <= 20:
                _WALLS.append((xi, v))
    return _WALLS


@given(st.integers(0, 99))
@settings(max_examples=100, deadline=None)
def test_degree_window(i):
    xi, v = _walls()[i]
    w = wall(xi, v).wall_input
    lo, hi = degree_window(w)
    assert vanishing_and_degree_check(w, delta_modular(w, max(lo, hi) + 4))["ok"]


@given(st.integers(0, 99), st.integers(0, 1))
@settings(max_examples=100, deadline=None)
def test_parity_flip(i, l):
    xi, v = _walls()[i]
    if -X.pairing(_class(X, *xi), _class(X, *xi)) > 9 and l:
        l = 0  # keeps the fixed-point sums small
    assert parity_flip_check(wall(xi, v), l)["ok"]
