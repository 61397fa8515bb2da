"""Coordinate-plane and Bruck-Bose-model tests.

The two models are checked separately (projective axioms each) and then
against each other through the point dictionaries; the phi-bar shuffle
that aligns their coordinates gets its order pinned here too, since the
dictionary silently depends on it.
"""

import numpy as np
import pytest

from eggplane.catalog import d9_semifield
from eggplane.field import FieldError, FiniteField
from eggplane.plane import (
    BruckBosePlane,
    CoordinatePlane,
    FieldAlgebra,
    check_dictionary,
    dickson_dictionary,
    phi_bar_apply,
    phi_bar_matrix,
    phi_bar_order_certificate,
    regular_dictionary,
    verify_bb_axioms,
    verify_plane_axioms,
)
from eggplane.spread import SpreadSet, spread_from_spread_set, spread_from_tau


# ---------------------------------------------------------------------------
# coordinate model
# ---------------------------------------------------------------------------


def test_field_plane_axioms_gf9():
    plane = CoordinatePlane(FieldAlgebra(FiniteField(3, 2)))
    cert = verify_plane_axioms(plane, seed=0, samples=500)
    assert cert.ok, cert.failures[:3]
    assert cert.details["points"] == 91


def test_dickson_plane_axioms_order81(d9_sf):
    plane = CoordinatePlane(d9_sf)
    cert = verify_plane_axioms(plane, seed=0, samples=500)
    assert cert.ok, cert.failures[:3]
    assert cert.details["points"] == 81 * 81 + 81 + 1


def test_plane_closure_exhaustive_order3():
    # small enough to close the incidence structure by hand: every point
    # pair determines one line containing both, every line pair meets
    plane = CoordinatePlane(FieldAlgebra(FiniteField(3, 1)))
    pts = list(plane.all_points())
    lines = list(plane.all_lines())
    for i, P in enumerate(pts):
        for Q in pts[i + 1 :]:
            ln = plane.line_through(P, Q)
            assert plane.incident(P, ln) and plane.incident(Q, ln)
            assert sum(plane.incident(P, l) and plane.incident(Q, l) for l in lines) == 1
    for i, l1 in enumerate(lines):
        for l2 in lines[i + 1 :]:
            X = plane.meet(l1, l2)
            assert plane.incident(X, l1) and plane.incident(X, l2)


def test_incidence_conventions(d9_sf):
    plane = CoordinatePlane(d9_sf)
    # slope point sits on the affine lines of its slope and on linf
    assert plane.incident(("s", 7), ("a", 7, 3))
    assert not plane.incident(("s", 7), ("a", 8, 3))
    assert plane.incident(("s", 7), ("linf",))
    assert not plane.incident(("s", 7), ("v", 0))
    # the infinite point is on verticals and linf only
    assert plane.incident(("inf",), ("v", 5))
    assert plane.incident(("inf",), ("linf",))
    assert not plane.incident(("inf",), ("a", 0, 0))
    # affine incidence is m*x + y = k with the slope as left factor
    m, x, y = 13, 27, 40
    k = d9_sf.add(d9_sf.mul(m, x), y)
    assert plane.incident(("a", y, x), ("a", m, k))


def test_points_of_line_matches_incident(d9_sf):
    plane = CoordinatePlane(d9_sf)
    for line in [("a", 5, 62), ("v", 3), ("linf",)]:
        pts = plane.points_of_line(line)
        assert len(pts) == 82
        assert all(plane.incident(P, line) for P in pts)


# ---------------------------------------------------------------------------
# Bruck-Bose model
# ---------------------------------------------------------------------------


def test_bb_axioms_f9(f9_bb):
    cert = verify_bb_axioms(f9_bb, seed=0)
    assert cert.ok, cert.failures[:3]
    assert f9_bb.num_points() == 91


def test_bb_axioms_gate_rejects_big_planes(pw_spread):
    bb = BruckBosePlane(pw_spread)
    with pytest.raises(FieldError):
        verify_bb_axioms(bb)


def test_element_through_and_coset_rep(f9_bb):
    rng = np.random.default_rng(5)
    for _ in range(50):
        w = rng.integers(0, 3, f9_bb.dim)
        d = rng.integers(0, 3, f9_bb.dim)
        if not d.any():
            continue
        el = f9_bb.element_through(d)
        rows = f9_bb.spread.el_arr[el].astype(np.int64)
        # the direction really lies in that element
        from eggplane.linalg import gf3_rows_in_subspace

        assert gf3_rows_in_subspace(d[None, :], rows).all()
        # the coset representative ignores motion along the element
        shift = (w + rng.integers(0, 3, f9_bb.t) @ rows) % 3
        assert (f9_bb.coset_rep(el, w) == f9_bb.coset_rep(el, shift)).all()


def test_bb_line_through_points(f9_bb):
    rng = np.random.default_rng(6)
    for _ in range(50):
        w1 = rng.integers(0, 3, f9_bb.dim)
        w2 = rng.integers(0, 3, f9_bb.dim)
        if (w1 == w2).all():
            continue
        line = f9_bb.line_through_points(w1, w2)
        pts = f9_bb.affine_points_of_line(line)
        have = {tuple(int(c) for c in p) for p in pts}
        assert tuple(int(c) for c in w1) in have
        assert tuple(int(c) for c in w2) in have
        assert len(have) == 9


# ---------------------------------------------------------------------------
# phi-bar and the model dictionaries
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("m", [1, 5])
def test_phi_bar_has_projective_order_four(m):
    cert = phi_bar_order_certificate(m)
    assert cert.ok
    assert cert.details["projective_order"] == 4
    assert cert.details["square_is_scalar"] is False


def test_phi_bar_apply_matches_matrix():
    rng = np.random.default_rng(7)
    for m in (1, 2, 5):
        M = phi_bar_matrix(m)
        w = rng.integers(0, 3, (20, 4 * m + 1))
        assert (phi_bar_apply(w, m) == w @ M % 3).all()
        # squaring negates the v and t blocks and fixes the rest
        twice = phi_bar_apply(phi_bar_apply(w, m), m)
        assert (twice[:, 0] == w[:, 0]).all()
        assert (twice[:, 1 : 2 * m + 1] == (-w[:, 1 : 2 * m + 1]) % 3).all()
        assert (twice[:, 2 * m + 1 :] == w[:, 2 * m + 1 :]).all()


def test_dictionary_f9_exhaustive(m1_sf, f9_bb):
    plane = CoordinatePlane(m1_sf)
    pm, em = dickson_dictionary(m1_sf, f9_bb.spread)
    cert = check_dictionary(f9_bb, plane, pm, em)
    assert cert.ok, cert.failures[:3]
    assert cert.mode == "exhaustive"
    assert cert.checks_run == 91  # every line of the order-9 plane


def test_dictionary_d9_sampled(d9_sf):
    # order 81 is past the exhaustive line-walk gate, so auto goes sampled
    spread = spread_from_tau(d9_sf)
    cert = check_dictionary(
        BruckBosePlane(spread), CoordinatePlane(d9_sf), *dickson_dictionary(d9_sf, spread)
    )
    assert cert.ok, cert.failures[:3]
    assert cert.mode == "sampled"
    assert cert.checks_run > 5000


def test_dictionary_regular_spread_gf9():
    F = FiniteField(3, 2)
    spread = spread_from_spread_set(SpreadSet.regular(F))
    plane = CoordinatePlane(FieldAlgebra(F))
    cert = check_dictionary(BruckBosePlane(spread), plane, *regular_dictionary(F, spread))
    assert cert.ok, cert.failures[:3]


def test_dictionary_pw_sampled(pw_sf, pw_spread):
    plane = CoordinatePlane(pw_sf)
    bb = BruckBosePlane(pw_spread)
    cert = check_dictionary(bb, plane, *dickson_dictionary(pw_sf, pw_spread), seed=1, trials=2000)
    assert cert.ok, cert.failures[:3]
    assert cert.mode == "sampled"
