"""Semifield axioms, nuclei structure, the tau spread and its two
independent construction routes."""

import numpy as np
import pytest

from eggplane.catalog import d9_semifield, f9_semifield, pw_semifield
from eggplane.field import FieldError
from eggplane.spread import (
    DicksonSemifield,
    SpreadSet,
    nuclei,
    nucleus_membership,
    spread_from_spread_set,
    spread_from_tau,
    tau_matrices,
    verify_semifield,
    verify_spread,
    verify_spread_set,
    verify_tau_correspondence,
)


@pytest.mark.parametrize("make", [f9_semifield, d9_semifield])
def test_small_semifields_exhaustive(make):
    cert = verify_semifield(make(), mode="exhaustive")
    assert cert.ok, cert.failures[:2]


def test_pw_semifield_sampled(pw_sf):
    cert = verify_semifield(pw_sf, mode="sampled", seed=0, samples=1_000_000)
    assert cert.ok, cert.failures[:2]


def test_dickson_multiplication_is_commutative(pw_sf):
    rng = np.random.default_rng(0)
    u = rng.integers(0, pw_sf.order, 5000)
    v = rng.integers(0, pw_sf.order, 5000)
    assert (pw_sf.mul_v(u, v) == pw_sf.mul_v(v, u)).all()


def test_f9_degenerate_member_is_a_field():
    # alpha = 0 over the prime field: the pair product is plain GF(9)
    sf = f9_semifield()
    info = nuclei(sf)
    assert info["sizes"] == {"left": 9, "middle": 9, "right": 9, "center": 9}


def test_d9_nuclei_structure(d9_sf):
    info = nuclei(d9_sf)
    assert info["sizes"] == {"left": 3, "middle": 9, "right": 3, "center": 3}
    # the middle nucleus is exactly the first-component embedding of GF(9)
    assert sorted(info["middle"]) == sorted(d9_sf.encode(a, 0) for a in range(9))
    # and left = right = center = the prime field
    assert info["left"] == info["right"] == info["center"] == [0, 1, 2]


def test_pw_nuclei_membership_sampled(pw_sf):
    F, n = pw_sf.field, pw_sf.half
    rng = np.random.default_rng(1)
    mids = [pw_sf.encode(int(a), 0) for a in rng.integers(0, n, 12)]
    ok = nucleus_membership(pw_sf, mids, which="middle", seed=0, samples=30_000)
    assert ok.ok, ok.failures[:2]
    # a (a, 0) with a outside the twist's fixed field fails left-association:
    # certified non-membership, so the middle nucleus is strictly bigger
    loose = next(a for a in range(2, n) if F.frob_i(a, pw_sf.alpha) != a)
    refute = nucleus_membership(pw_sf, [pw_sf.encode(loose, 0)], which="left", seed=0)
    assert not refute.ok and refute.failures


def test_alpha_guard_rejects_trivial_twist():
    from eggplane.field import GF

    with pytest.raises(FieldError):
        DicksonSemifield(field=GF(3, 2), xi=2, alpha=2, name="bad")  # sigma = id, xi square-free fails


@pytest.mark.parametrize("make", [f9_semifield, d9_semifield])
def test_small_spreads_exhaustive(make):
    spread = spread_from_tau(make())
    cert = verify_spread(spread, mode="exhaustive")
    assert cert.ok, cert.failures[:2]
    n = spread.p**spread.t
    assert spread.size == n + 1


def test_pw_spread_symmetry_reduced(pw_spread):
    cert = verify_spread(pw_spread, mode="symmetry_reduced", seed=0, pair_samples=10_000)
    assert cert.ok, cert.failures[:2]
    assert cert.checks_run > 59_048  # at least one check per nonzero difference


@pytest.mark.parametrize("make", [f9_semifield, d9_semifield, pw_semifield])
def test_tau_correspondence(make):
    cert = verify_tau_correspondence(make())
    assert cert.ok, cert.failures[:2]


def test_spread_set_route_and_tau_route_both_tile(d9_sf):
    # multiplication graphs and tau graphs are different spreads of the
    # same PG(7,3) (they share only the zero graph and the vertical);
    # both must satisfy the axioms, and only the tau one feeds the unital
    ss = SpreadSet.from_semifield(d9_sf)
    assert verify_spread_set(ss).ok
    s1 = spread_from_spread_set(ss)
    s2 = spread_from_tau(d9_sf)
    assert verify_spread(s1, mode="exhaustive").ok
    assert verify_spread(s2, mode="exhaustive").ok
    k1 = {bytes(s1.el_arr[i].tobytes()) for i in range(s1.size)}
    k2 = {bytes(s2.el_arr[i].tobytes()) for i in range(s2.size)}
    assert len(k1) == len(k2) == s1.size
    assert len(k1 & k2) == 2


def test_tau_matrices_shape_and_kernel_freedom(pw_sf):
    mats = tau_matrices(pw_sf)
    t = 2 * pw_sf.field.m
    assert mats.shape == (pw_sf.order, t, t)
    # tau is additive in its index: spot check
    rng = np.random.default_rng(2)
    for _ in range(20):
        i, j = (int(v) for v in rng.integers(0, pw_sf.order, 2))
        k = pw_sf.add(i, j)
        assert ((mats[i].astype(int) + mats[j]) % 3 == mats[k]).all()
