"""Trace families, blocking sets, and the unital itself.

The frozen numbers here (histograms, root counts, sizes) were computed
once with independent scripts and pinned; the tests fail loudly if any
refactor moves them.
"""

import numpy as np
import pytest

from eggplane.linalg import solve_right
from eggplane.spread import spread_from_tau
from eggplane.unital import (
    affine_base_points,
    blocking_certificate,
    f_member_rows,
    gamma_prime_subspace,
    gamma_subspace,
    solvability_certificate,
    unital_model,
    v_line_rows,
    verify_trace_match,
    verify_unital,
)


# ---------------------------------------------------------------------------
# trace families
# ---------------------------------------------------------------------------


def test_gamma_dimensions():
    for m in (1, 5):
        assert gamma_subspace(m).dim == 3 * m
        assert gamma_prime_subspace(m).dim == 3 * m + 1


def test_v_line_rows_shape(pw_sf):
    rows = v_line_rows(pw_sf.field)
    assert rows.shape == (5, 20)
    # t-block is the identity in the power basis, so rank is full
    assert np.linalg.matrix_rank(rows[:, :5].astype(float)) == 5


def test_trace_match_pw_indexed(pw_spec, pw_spread):
    cert = verify_trace_match(pw_spec, pw_spread, match="indexed", seed=0)
    assert cert.ok, cert.failures[:3]
    assert cert.checks_run >= 3**10 - 1  # one per affine parameter


def test_trace_match_wrong_twist_is_refuted(pw_spec, pw_spread):
    # k = 2 instead of m - 1 = 4: the pencil traces no longer match the
    # egg traces, and the negative-control certificate must notice
    cert = verify_trace_match(pw_spec, pw_spread, frob_k=2, expect_equal=False, seed=0)
    assert cert.ok, cert.failures[:3]


def test_trace_match_m1_set_but_not_indexed(m1_spec, m1_sf):
    spread = spread_from_tau(m1_sf)
    assert verify_trace_match(m1_spec, spread, match="set").ok
    # at m = 1 the id-by-id pairing differs even though the families agree
    assert verify_trace_match(m1_spec, spread, match="indexed", expect_equal=False).ok
    assert not verify_trace_match(m1_spec, spread, match="indexed").ok


# ---------------------------------------------------------------------------
# solvability and blocking
# ---------------------------------------------------------------------------


def test_solvability_pw(pw_spec):
    cert = solvability_certificate(pw_spec)
    assert cert.ok, cert.failures[:3]
    # g1 is onto with a unique zero: one value hit once, 242 hit 244 times
    assert cert.details["root_count_histogram"] == {1: 1, 244: 242}
    # closed-form roots: 242 values contribute 2 each, zero contributes 1
    assert cert.details["closed_form_roots_checked"] == 485


def test_solvability_m1(m1_spec):
    cert = solvability_certificate(m1_spec)
    assert cert.ok, cert.failures[:3]
    assert cert.details["root_count_histogram"] == {1: 1, 4: 2}
    assert cert.details["closed_form_roots_checked"] is None


def test_blocking_m1_exhaustive(m1_spec):
    cert = blocking_certificate(m1_spec)
    assert cert.ok, cert.failures[:3]
    assert cert.mode == "exhaustive"
    assert cert.details["meet_count_histogram"] == {"1": 9, "4": 18}
    assert cert.details["family_size"] == 27


def test_blocking_pw_symmetry_reduced(pw_spec):
    cert = blocking_certificate(pw_spec, seed=0)
    assert cert.ok, cert.failures[:3]
    assert cert.mode == "symmetry_reduced"
    hist = cert.details["meet_count_histogram"]
    assert set(hist) <= {"1", "244"}
    assert hist.get("1", 0) >= 1  # the tangent members do show up


def test_base_points_satisfy_member_equation(m1_spec):
    # P(x, y) lies on F(a, b, c) exactly when H_{a,b,c}(x, y) = 0; cross-check
    # the linear-algebra membership against the forms on the full m=1 grid
    F = m1_spec.field
    forms = m1_spec.forms()
    bp = affine_base_points(m1_spec)
    for a in range(3):
        for b in range(3):
            for c in range(3):
                rows = f_member_rows(m1_spec, a, b, c)
                for xy in range(9):
                    x, y = xy % 3, xy // 3
                    h = forms.h_v(np.array([a]), np.array([b]), np.array([x]), np.array([y]))
                    val = F.add_i(F.sub_i(int(forms.g1_grid()[x, y]), int(h[0])), c)
                    member = solve_right(rows, bp[xy].tolist(), 3) is not None
                    assert member == (val == 0)


# ---------------------------------------------------------------------------
# the unital
# ---------------------------------------------------------------------------


def test_unital_m1_exhaustive(m1_unital):
    cert = verify_unital(m1_unital, seed=0)
    assert cert.ok, cert.failures[:3]
    assert cert.mode == "exhaustive"
    assert cert.details["size"] == 28
    assert cert.details["line_histogram"] == {"1": 28, "4": 63}
    assert cert.details["ambient_histogram"] == {"1": 28, "4": 63}


def test_unital_pw_sampled(pw_unital):
    cert = verify_unital(pw_unital, mode="sampled", seed=0, lines=300, predicate_samples=50_000)
    assert cert.ok, cert.failures[:3]
    assert cert.details["size"] == 3**15 + 1 == 14_348_908
    for stratum, hist in cert.details["line_histograms"].items():
        assert set(hist) <= {"1", "244"}, (stratum, hist)
    assert cert.details["line_histograms"]["vertical"] == {"244": 54}
    assert cert.details["line_histograms"]["special"].get("1", 0) >= 2


def test_membership_edges(pw_unital, m1_unital):
    for model in (pw_unital, m1_unital):
        n = model.sf.half
        assert model.contains(("inf",))
        assert not model.contains(("s", 1))
        assert model.infinity_id == n**4
        ids = model.point_ids()
        assert ids.shape[0] == model.size
        assert int(ids[-1]) == model.infinity_id
        # a constructed point is in; nudging y1 by one bumps it out
        F = model.sf.field
        a, b, c = 1 % n, 2 % n, 0
        y1 = F.add_i(int(model._grid[a, b]), F.frob_i(c, model.frob_k))
        P = ("a", model.sf.encode(y1, c), model.sf.encode(F.neg_i(a), F.neg_i(b)))
        assert model.contains(P)
        Q = ("a", model.sf.encode(F.add_i(y1, 1), c), P[2])
        assert not model.contains(Q)
        assert int(ids[np.searchsorted(ids, model.point_id(P))]) == model.point_id(P)


def test_cone_rows_decode_to_members(pw_unital):
    # decode the digit rows by slot (not via the plane dictionary) and
    # feed them back through the membership predicate
    F, m = pw_unital.sf.field, pw_unital.spec.m
    rng = np.random.default_rng(3)
    A = rng.integers(0, 243, 100)
    B = rng.integers(0, 243, 100)
    C = rng.integers(0, 243, 100)
    rows = pw_unital.cone_rows(A, B, C)
    assert rows.shape == (100, 4 * m)
    for i in range(100):
        w = rows[i].astype(np.int64)
        y2 = int(F.undigits(w[0:m]))
        y1 = F.neg_i(int(F.undigits(w[m : 2 * m])))
        x1 = int(F.undigits(w[2 * m : 3 * m]))
        x2 = int(F.undigits(w[3 * m : 4 * m]))
        assert y2 == int(C[i])
        assert x1 == F.neg_i(int(A[i])) and x2 == F.neg_i(int(B[i]))
        assert bool(pw_unital.membership_v(y1, y2, x1, x2))


def test_unital_model_rejects_mismatched_field(m1_spec, pw_sf):
    from eggplane.field import FieldError

    with pytest.raises(FieldError):
        unital_model(m1_spec, pw_sf)
