"""The rho_lam correlation family: involution, incidence reversal,
absolute points, and the non-polarity separation from the unital.

The absolute set and the unital have the SAME cardinality (|F|^3 + 1),
which is exactly why the separating witness matters; these tests pin
both counts and the witness behaviour at both scales.
"""

import numpy as np
import pytest

from eggplane.plane import CoordinatePlane
from eggplane.polarity import (
    Duality,
    absolute_points_certificate,
    non_polarity_certificate,
    verify_duality,
)


# ---------------------------------------------------------------------------
# the correlation itself
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("lam", [1, 5])
def test_duality_exhaustive_small(d9_sf, lam):
    cert = verify_duality(d9_sf, lam)
    assert cert.ok, cert.failures[:3]
    assert cert.mode == "exhaustive"


def test_duality_exhaustive_f9(m1_sf):
    cert = verify_duality(m1_sf, 2)
    assert cert.ok, cert.failures[:3]


def test_duality_pw_sampled(pw_sf):
    cert = verify_duality(pw_sf, 7, seed=1, samples=3000)
    assert cert.ok, cert.failures[:3]
    assert cert.mode == "sampled"


def test_involution_by_hand(d9_sf):
    rho = Duality(d9_sf, 4)
    plane = CoordinatePlane(d9_sf)
    pts = [("a", 17, 60), ("a", 0, 0), ("s", 3), ("inf",)]
    lns = [("a", 5, 44), ("v", 2), ("linf",)]
    for P in pts:
        assert rho.line_image(rho.point_image(P)) == P
    for l in lns:
        assert rho.point_image(rho.line_image(l)) == l
    # reversal on a concrete incident pair
    for P in pts:
        for l in lns:
            assert plane.incident(P, l) == plane.incident(rho.line_image(l), rho.point_image(P))


def test_special_kind_images(pw_sf):
    rho = Duality(pw_sf, 1)
    assert rho.point_image(("inf",)) == ("linf",)
    assert rho.line_image(("linf",)) == ("inf",)
    assert rho.point_image(("s", 9))[0] == "v"
    assert rho.line_image(("v", 9))[0] == "s"


def test_closed_form_matches_incidence(pw_sf):
    rho = Duality(pw_sf, 11)
    plane = CoordinatePlane(pw_sf)
    F, nf = pw_sf.field, pw_sf.half
    rng = np.random.default_rng(2)
    x1 = rng.integers(0, nf, 60)
    x2 = rng.integers(0, nf, 60)
    y1 = rho.absolute_y1_v(x1, x2)
    y2 = rng.integers(0, nf, 60)
    for i in range(60):
        P = ("a", pw_sf.encode(int(y1[i]), int(y2[i])), pw_sf.encode(int(x1[i]), int(x2[i])))
        assert rho.is_absolute(P, plane)
        # moving y1 off the closed-form value breaks absoluteness
        Q = ("a", pw_sf.encode(F.add_i(int(y1[i]), 1), int(y2[i])), P[2])
        assert not rho.is_absolute(Q, plane)


# ---------------------------------------------------------------------------
# absolute point counts
# ---------------------------------------------------------------------------


def test_absolutes_f9_exhaustive(m1_sf):
    cert = absolute_points_certificate(m1_sf, 1)
    assert cert.ok, cert.failures[:3]
    assert cert.mode == "exhaustive"
    assert cert.details["total"] == 28  # 3^3 + 1, same size as the unital


def test_absolutes_d9_exhaustive(d9_sf):
    cert = absolute_points_certificate(d9_sf, 2)
    assert cert.ok, cert.failures[:3]
    assert cert.details["total"] == 9**3 + 1 == 730


def test_absolutes_pw_streamed(pw_sf):
    cert = absolute_points_certificate(pw_sf, 1, mode="streamed", seed=0)
    assert cert.ok, cert.failures[:3]
    assert cert.details["total"] == 3**15 + 1 == 14_348_908


def test_absolutes_pw_sampled(pw_sf):
    cert = absolute_points_certificate(pw_sf, 3, mode="sampled", seed=0, samples=5000)
    assert cert.ok, cert.failures[:3]
    assert cert.details["affine_count_derived"] == 3**15


# ---------------------------------------------------------------------------
# non-polarity of the unital
# ---------------------------------------------------------------------------


def test_non_polarity_pw(pw_sf, pw_unital):
    cert = non_polarity_certificate(pw_sf, pw_unital, seed=0)
    assert cert.ok, cert.failures[:3]
    assert cert.details["witness_in_unital"] == {"y_first": True, "x_first": False}
    assert cert.details["absolute_lams_y_first"] == []
    assert cert.details["lams_checked"] == 242
    assert cert.details["unital_size"] == cert.details["absolute_set_size"] == 14_348_908


def test_non_polarity_m1(m1_sf, m1_unital):
    cert = non_polarity_certificate(m1_sf, m1_unital, seed=0)
    assert cert.ok, cert.failures[:3]
    assert cert.details["witness_in_unital"] == {"y_first": True, "x_first": False}
    assert cert.details["absolute_lams_y_first"] == []
    assert cert.details["lams_checked"] == 2  # lam lives in GF(3) when m = 1


def test_witness_really_is_a_unital_point(pw_sf, pw_unital):
    # independent of the certificate: (1,1,0,0) read y-first satisfies the
    # membership equation because g1(0,0) = 0 and 1 = 1^(q^4)
    P = ("a", pw_sf.encode(1, 1), pw_sf.encode(0, 0))
    assert pw_unital.contains(P)
    # and it is off the closed-form absolute locus for a spot-checked lam:
    # x = 0 forces y1 = 0, but the witness has y1 = 1
    for lam in (1, 100, 242):
        rho = Duality(pw_sf, lam)
        assert int(rho.absolute_y1_v(np.array([0]), np.array([0]))[0]) == 0
        assert not rho.is_absolute(P)
