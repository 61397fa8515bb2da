"""Egg axioms at both scales, the shear symmetry they rest on, goodness
(including where it must fail), the elementary construction, and flocks."""

import numpy as np
import pytest

from eggplane.catalog import classical9_egg, kk9_egg, m1_egg
from eggplane.egg import (
    Flock,
    build_egg,
    element_subspace,
    elementary_egg,
    elliptic_quadric_points,
    infinity_subspace,
    shear_matrix,
    tangent_subspace,
    verify_egg,
    verify_flock,
    verify_goodness,
    verify_shears,
)
from eggplane.linalg import Subspace


def test_m1_egg_exhaustive():
    egg = build_egg(m1_egg())
    assert egg.size == 3**2 + 1 and egg.ambient == 4
    cert = verify_egg(egg, mode="exhaustive")
    assert cert.ok, cert.failures[:2]


@pytest.mark.parametrize("make", [classical9_egg, kk9_egg])
def test_order9_eggs_both_modes_agree(make):
    # the symmetry-reduced verifier must reproduce the exhaustive verdict
    egg = build_egg(make())
    exh = verify_egg(egg, mode="exhaustive")
    sym = verify_egg(egg, mode="symmetry_reduced")
    assert exh.ok and sym.ok
    assert egg.size == 3**4 + 1


def test_pw_egg_symmetry_reduced_quick(pw_built):
    cert = verify_egg(pw_built, mode="symmetry_reduced", triple_samples=3000, pair_samples=2000)
    assert cert.ok, cert.failures[:2]
    assert pw_built.size == 3**10 + 1 and pw_built.ambient == 20


def test_element_tangent_geometry_small():
    spec = m1_egg()
    E = element_subspace(spec, 1, 2)
    T = tangent_subspace(spec, 1, 2)
    I = infinity_subspace(spec)
    # vector dims m and 3m: a point of PG(3, 3) with its tangent plane
    assert E.dim == 1 and T.dim == 3 and I.dim == 1
    assert T.contains(E)
    assert E.intersect(I).dim == 0


def test_shear_matrix_translates_elements():
    spec = kk9_egg()
    F = spec.field
    rng = np.random.default_rng(5)
    for _ in range(10):
        a, x, a2, x2 = (int(v) for v in rng.integers(0, F.order, 4))
        sig = shear_matrix(spec, a2, x2).astype(np.int64)
        src = element_subspace(spec, a, x)
        moved = Subspace(3, 4 * spec.m, (src.basis_array().astype(np.int64) @ sig) % 3)
        assert moved == element_subspace(spec, F.add_i(a, a2), F.add_i(x, x2))


def test_shear_certificates():
    for make in (m1_egg, kk9_egg):
        cert = verify_shears(build_egg(make()))
        assert cert.ok, cert.failures[:2]


def test_goodness_split_is_sharp():
    # the elliptic-quadric egg is good at every element; the sporadic
    # order-81 egg is good at infinity and at no affine element
    cl = build_egg(classical9_egg())
    kk = build_egg(kk9_egg())
    assert verify_goodness(cl, at="infinity", mode="exhaustive").ok
    assert verify_goodness(cl, at=7, mode="exhaustive").ok
    assert verify_goodness(kk, at="infinity", mode="exhaustive").ok
    bad = verify_goodness(kk, at=0, mode="exhaustive")
    assert not bad.ok
    assert bad.details["histogram"] == {"3": 768, "4": 2112, "10": 360}


def test_elementary_egg_from_elliptic_quadric():
    from eggplane.field import GF

    F9 = GF(3, 2)
    pts = elliptic_quadric_points(F9)
    assert len(pts) == 9**2 + 1
    egg = elementary_egg(F9, pts, 3)
    assert egg.size == 82
    assert verify_egg(egg, mode="exhaustive").ok


@pytest.mark.parametrize("make", [m1_egg, kk9_egg, classical9_egg])
def test_flocks_partition_the_cone(make):
    cert = verify_flock(Flock.from_egg_coefficients(make()))
    assert cert.ok, cert.failures[:2]


def test_pw_flock_closed_form(pw_spec):
    # coefficient data (b, c) packs g(t) = t^3 and f(t) = -t^27
    F = pw_spec.field
    fl = Flock.from_egg_coefficients(pw_spec)
    assert verify_flock(fl).ok
    rng = np.random.default_rng(6)
    for t in rng.integers(0, F.order, 50):
        t = int(t)
        assert fl.g(F(t)).i == F.pow_i(t, 3)
        assert fl.f(F(t)).i == F.neg_i(F.pow_i(t, 27))
    assert fl.plane(0) == (0, 0, 0, 1)


def test_egg_ids_and_infinity_layout(pw_built):
    # elements are indexed a + order * x with the infinity element last
    egg = pw_built
    n = egg.spec.field.order
    assert egg.size == n * n + 1
    assert egg.el_arr.shape[0] == egg.size
