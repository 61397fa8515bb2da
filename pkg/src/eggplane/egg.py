"""Eggs of PG(4m-1, q): construction and verification.

An egg is a family of q^(2m) + 1 pairwise disjoint (m-1)-dimensional
projective subspaces of PG(4m-1, q) such that any three span a space of
projective dimension 3m-1, together with, for each element, a tangent
space: a (3m-1)-space containing it and missing every other element.

From coefficient data (b_i, c_i) over GF(q^m) (see linpoly.EggCoefficients)
the family is, writing g and h for the attached forms and working in the
4-dimensional coordinate frame over GF(q^m) that flattens to GF(q)^(4m):

    E(a, x)  = GF(q)-span of (t, -g_{a,x}(t), -a t, -x t),  t in GF(q^m)
    E(inf)   = {(0, t, 0, 0)}
    T(a, x)  = {(t, h_{a,x}(r, s) + g_{a,x}(t), r, s)}
    T(inf)   = {(0, t, r, s)}

Everything is stored flattened: an element is an m x 4m matrix over GF(p)
in reduced row echelon form, an egg is an (N, m, 4m) uint8 array plus an
id scheme (affine pairs (a, x) are a + order * x; infinity is order^2).

Verification modes:

* "exhaustive"        -- every pair, triple and tangent/element pair.
* "symmetry_reduced"  -- uses the shear collineations psi_{a,x} that fix
  E(inf) pointwise and translate the affine index: pairs and tangents are
  checked exhaustively on orbit representatives, triples on a seeded
  sample of representatives, and the shear certificate itself (matrices
  invertible, additive, acting correctly on sampled elements, plus the
  polarization identity on a large random sample) is part of the result.
* "sampled"           -- random pairs/triples only; a smoke test.

The symmetry argument: psi_{a,x}(u, t, r, s) =
(u, t + h_{a,x}(r, s) - g_{a,x}(u), r - u a, s - u x) maps E(a', x') onto
E(a + a', x + x') and T(a', x') onto T(a + a', x + x') exactly, because g
polarizes to h; so every pair of elements is equivalent to one containing
E(0, 0) or E(inf), and likewise for triples and tangents.

A flock of the quadratic cone lives here too, since it is the same
coefficient data viewed through the planes x0 t + x1 f(t) + x2 g(t) + x3
with f(t) = sum c_i t^(q^i), g(t) = sum b_i t^(q^i).
"""

from __future__ import annotations

import dataclasses
import itertools
from typing import Sequence

import numpy as np

from .field import FieldElement, FiniteField, GF, FieldError
from .linalg import (
    Subspace,
    batch_rank_gf3,
    batch_rref_gf3,
    batch_matmul_gf3,
    nullspace,
)
from .linpoly import EggCoefficients, LinearizedPoly
from .report import Certificate, merge_failures, stopwatch, substream, config_hash


# --------------------------------------------------------------- build

class Egg:
    """An egg given by its element (and optionally tangent) matrices.

    el_arr  -- (N, m, 4m) uint8, canonical RREF bases
    tan_arr -- (N, 3m, 4m) uint8 or None
    spec    -- EggCoefficients when the egg came from coefficient data
    """

    def __init__(
        self,
        q: int,
        m: int,
        el_arr: np.ndarray,
        tan_arr: np.ndarray | None = None,
        spec: EggCoefficients | None = None,
    ):
        self.q = q
        self.m = m
        self.ambient = 4 * m
        self.el_arr = el_arr
        self.tan_arr = tan_arr
        self.spec = spec
        self.size = el_arr.shape[0]
        self.order = q**m  # |GF(q^m)|

    @property
    def infinity_id(self) -> int:
        return self.order * self.order

    def id_of(self, a: int, x: int) -> int:
        return a + self.order * x

    def pair_of(self, eid: int) -> tuple[int, int]:
        if eid == self.infinity_id:
            raise ValueError("the infinity element has no (a, x) pair")
        return eid % self.order, eid // self.order

    def element(self, eid: int) -> Subspace:
        return Subspace(self.q, self.ambient, self.el_arr[eid].tolist())

    def tangent(self, eid: int) -> Subspace:
        if self.tan_arr is None:
            raise ValueError("tangent family was not built")
        return Subspace(self.q, self.ambient, self.tan_arr[eid].tolist())

    def config(self) -> dict:
        if self.spec is not None:
            return {"kind": "coefficient_egg", **self.spec.to_dict()}
        import hashlib

        content = hashlib.sha256(self.el_arr.tobytes()).hexdigest()[:16]
        return {"kind": "raw_egg", "q": self.q, "m": self.m, "size": self.size, "content": content}


def element_subspace(spec: EggCoefficients, a: int, x: int) -> Subspace:
    """Scalar-path construction of E(a, x); the reference for build_egg."""
    F = spec.field
    forms = spec.forms()
    ea, ex = F(a), F(x)
    rows = []
    for j in range(F.m):
        t = FieldElement(F, F._powers[j])
        rows.append(F.flatten((t, -forms.g(ea, ex, t), -(ea * t), -(ex * t))))
    return Subspace(spec.q, 4 * spec.m, rows)


def infinity_subspace(spec: EggCoefficients) -> Subspace:
    F = spec.field
    zero = F.zero
    rows = [
        F.flatten((zero, FieldElement(F, F._powers[j]), zero, zero))
        for j in range(F.m)
    ]
    return Subspace(spec.q, 4 * spec.m, rows)


def tangent_subspace(spec: EggCoefficients, a: int, x: int) -> Subspace:
    F = spec.field
    forms = spec.forms()
    ea, ex = F(a), F(x)
    zero = F.zero
    rows = []
    for j in range(F.m):
        t = FieldElement(F, F._powers[j])
        rows.append(F.flatten((t, forms.g(ea, ex, t), zero, zero)))
        rows.append(F.flatten((zero, forms.h(ea, ex, t, zero), t, zero)))
        rows.append(F.flatten((zero, forms.h(ea, ex, zero, t), zero, t)))
    return Subspace(spec.q, 4 * spec.m, rows)


def infinity_tangent_subspace(spec: EggCoefficients) -> Subspace:
    F = spec.field
    zero = F.zero
    rows = []
    for j in range(F.m):
        t = FieldElement(F, F._powers[j])
        rows.append(F.flatten((zero, t, zero, zero)))
        rows.append(F.flatten((zero, zero, t, zero)))
        rows.append(F.flatten((zero, zero, zero, t)))
    return Subspace(spec.q, 4 * spec.m, rows)


def build_egg(spec: EggCoefficients, tangents: bool = True) -> Egg:
    """Construct the full element (and tangent) arrays for coefficient data.

    Vectorized through the field tables for q = 3; any other q falls back
    to the scalar path, which is fine at the sizes where it is legal.
    """
    F = spec.field
    q, m = spec.q, spec.m
    n = F.order
    N = n * n + 1
    amb = 4 * m

    if q != 3 or F.mul_table is None:
        el = np.zeros((N, m, amb), dtype=np.uint8)
        tan = np.zeros((N, 3 * m, amb), dtype=np.uint8) if tangents else None
        for x in range(n):
            for a in range(n):
                eid = a + n * x
                el[eid] = element_subspace(spec, a, x).basis_array()
                if tangents:
                    tan[eid] = tangent_subspace(spec, a, x).basis_array()
        el[N - 1] = infinity_subspace(spec).basis_array()
        if tangents:
            tan[N - 1] = infinity_tangent_subspace(spec).basis_array()
        return Egg(q, m, el, tan, spec)

    forms = spec.forms()
    eids = np.arange(n * n)
    a = eids % n
    x = eids // n
    zero = np.zeros(n * n, dtype=np.int64)

    def flat4(c1, c2, c3, c4):
        return np.concatenate(
            [F.digits(c1), F.digits(c2), F.digits(c3), F.digits(c4)], axis=1
        ).astype(np.uint8)

    el = np.zeros((N, m, amb), dtype=np.uint8)
    for j in range(m):
        t = np.full(n * n, F._powers[j], dtype=np.int64)
        el[: n * n, j, :] = flat4(
            t,
            F.neg_v(forms.g_v(a, x, t)),
            F.neg_v(F.mul_v(a, t)),
            F.neg_v(F.mul_v(x, t)),
        )
        basis = np.zeros(m, dtype=np.int64)
        basis[j] = 1
        el[N - 1, j, m : 2 * m] = basis  # (0, t, 0, 0)

    el, ranks = batch_rref_gf3(el)
    if not (ranks == m).all():
        bad = int(np.nonzero(ranks != m)[0][0])
        raise FieldError(f"element {bad} degenerated to rank {int(ranks[bad])}")

    tan = None
    if tangents:
        tan = np.zeros((N, 3 * m, amb), dtype=np.uint8)
        for j in range(m):
            t = np.full(n * n, F._powers[j], dtype=np.int64)
            tan[: n * n, 3 * j, :] = flat4(t, forms.g_v(a, x, t), zero, zero)
            tan[: n * n, 3 * j + 1, :] = flat4(zero, forms.h_v(a, x, t, zero), t, zero)
            tan[: n * n, 3 * j + 2, :] = flat4(zero, forms.h_v(a, x, zero, t), zero, t)
            basis = np.zeros(m, dtype=np.int64)
            basis[j] = 1
            for blk in (1, 2, 3):
                tan[N - 1, 3 * j + blk - 1, blk * m : (blk + 1) * m] = basis
        tan, tranks = batch_rref_gf3(tan)
        if not (tranks == 3 * m).all():
            bad = int(np.nonzero(tranks != 3 * m)[0][0])
            raise FieldError(f"tangent {bad} degenerated to rank {int(tranks[bad])}")

    return Egg(q, m, el, tan, spec)


# --------------------------------------------------------------- shears

def shear_matrix(spec: EggCoefficients, a: int, x: int) -> np.ndarray:
    """Matrix of psi_{a,x} on GF(p)^(4m), acting on row vectors (v @ M).

    psi_{a,x}(u, t, r, s) = (u, t + h_{a,x}(r,s) - g_{a,x}(u), r - ua, s - ux).
    """
    F = spec.field
    m, amb = spec.m, 4 * spec.m
    forms = spec.forms()
    ea, ex = F(a), F(x)
    M = np.zeros((amb, amb), dtype=np.uint8)
    zero = F.zero
    for k in range(amb):
        blk, j = divmod(k, m)
        e = FieldElement(F, F._powers[j])
        u, t, r, s = (e if blk == b else zero for b in range(4))
        img = (
            u,
            t + forms.h(ea, ex, r, s) - forms.g(ea, ex, u),
            r - u * ea,
            s - u * ex,
        )
        M[k, :] = F.flatten(img)
    return M


def verify_shears(
    egg: Egg,
    seed: int | None = 0,
    element_trials: int = 32,
    action_samples: int = 64,
    identity_samples: int = 200_000,
) -> Certificate:
    """Certificate that the shear maps behave as the symmetry reduction needs.

    For sampled (a, x): the matrix is invertible, fixes E(inf) pointwise,
    maps sampled elements E(w) onto E(w + (a,x)) and tangents likewise, and
    the shear matrices compose additively.  Separately, the polarization
    identity behind the exact transport argument is checked on a large
    random sample of argument tuples.
    """
    spec = egg.spec
    if spec is None:
        raise ValueError("shears need coefficient data")
    F = spec.field
    n = F.order
    m = spec.m
    rng = substream(seed or 0, "shears")
    failures: list = []
    checks = 0
    forms = spec.forms()

    with stopwatch() as sw:
        inf_rows = egg.el_arr[egg.infinity_id]
        trials = [(int(rng.integers(n)), int(rng.integers(n))) for _ in range(element_trials)]
        mats = {}
        for (ta, tx) in trials:
            M = shear_matrix(spec, ta, tx)
            mats[(ta, tx)] = M
            checks += 1
            if batch_rank_gf3(M[None, :, :])[0] != 4 * m:
                merge_failures(failures, {"check": "invertible", "a": ta, "x": tx})
            # E(inf) is fixed pointwise
            checks += 1
            if (batch_matmul_gf3(inf_rows, M) != inf_rows).any():
                merge_failures(failures, {"check": "fixes_infinity", "a": ta, "x": tx})
            # action on sampled affine ids, elements and tangents
            ws = rng.integers(n * n, size=action_samples)
            src = egg.el_arr[ws].astype(np.uint8)
            img = batch_matmul_gf3(src.reshape(-1, 4 * m), M).reshape(src.shape)
            img, _ = batch_rref_gf3(img)
            dst_a = F.add_v(ws % n, np.full(action_samples, ta)).astype(np.int64)
            dst_x = F.add_v(ws // n, np.full(action_samples, tx)).astype(np.int64)
            dst = dst_a + n * dst_x
            checks += action_samples
            bad = np.nonzero((img != egg.el_arr[dst]).any(axis=(1, 2)))[0]
            for bidx in bad[:3]:
                merge_failures(
                    failures,
                    {"check": "element_action", "a": ta, "x": tx, "w": int(ws[bidx])},
                )
            if egg.tan_arr is not None:
                tsrc = egg.tan_arr[ws].astype(np.uint8)
                timg = batch_matmul_gf3(tsrc.reshape(-1, 4 * m), M).reshape(tsrc.shape)
                timg, _ = batch_rref_gf3(timg)
                checks += action_samples
                bad = np.nonzero((timg != egg.tan_arr[dst]).any(axis=(1, 2)))[0]
                for bidx in bad[:3]:
                    merge_failures(
                        failures,
                        {"check": "tangent_action", "a": ta, "x": tx, "w": int(ws[bidx])},
                    )
        # additivity of the shear family on sampled pairs of parameters
        for _ in range(min(element_trials, 16)):
            (a1, x1), (a2, x2) = (trials[int(rng.integers(len(trials)))] for _ in range(2))
            M12 = batch_matmul_gf3(mats[(a1, x1)], mats[(a2, x2)])
            Msum = shear_matrix(spec, F.add_i(a1, a2), F.add_i(x1, x2))
            checks += 1
            if (M12 != Msum).any():
                merge_failures(
                    failures, {"check": "additivity", "pair": [[a1, x1], [a2, x2]]}
                )
        # polarization identity on a large vectorized sample
        k = identity_samples
        sa, sx, sa2, sx2, st = (rng.integers(n, size=k) for _ in range(5))
        lhs = forms.g_v(F.add_v(sa, sa2), F.add_v(sx, sx2), st)
        rhs = F.add_v(
            F.add_v(forms.g_v(sa, sx, st), forms.g_v(sa2, sx2, st)),
            forms.h_v(sa, sx, F.mul_v(sa2, st), F.mul_v(sx2, st)),
        )
        checks += k
        bad = np.nonzero(lhs != rhs)[0]
        for bidx in bad[:3]:
            merge_failures(failures, {"check": "polarization", "i": int(bidx)})

    return Certificate(
        object=f"shears({spec.name or 'egg'})",
        mode="sampled",
        ok=not failures,
        checks_run=checks,
        failures=failures,
        details={"element_trials": element_trials, "identity_samples": identity_samples},
        seed=seed,
        config_hash=config_hash(egg.config()),
        wall_ms=sw.ms,
    )


# --------------------------------------------------------------- verify

def _stack_pairs(arr_a: np.ndarray, arr_b: np.ndarray) -> np.ndarray:
    return np.concatenate([arr_a, arr_b], axis=1)


def verify_egg(
    egg: Egg,
    mode: str = "auto",
    seed: int | None = 0,
    triple_samples: int = 100_000,
    pair_samples: int = 20_000,
    shear_kwargs: dict | None = None,
) -> Certificate:
    """Check the egg axioms in the requested mode; see the module docstring."""
    if mode == "auto":
        mode = "exhaustive" if egg.size <= 300 else "symmetry_reduced"
    if mode == "symmetry_reduced" and egg.spec is None:
        raise ValueError("symmetry_reduced mode needs coefficient data")
    if egg.q != 3:
        return _verify_egg_scalar(egg, mode)

    m, amb, N = egg.m, egg.ambient, egg.size
    el = egg.el_arr
    failures: list = []
    checks = 0
    details: dict = {"mode": mode, "size": N}
    rng = substream(seed or 0, "egg", "verify")

    with stopwatch() as sw:
        # ranks and distinctness
        ranks = batch_rank_gf3(el)
        checks += N
        for i in np.nonzero(ranks != m)[0][:5]:
            merge_failures(failures, {"check": "element_rank", "id": int(i)})
        keys = {el[i].tobytes() for i in range(N)}
        checks += 1
        if len(keys) != N:
            merge_failures(failures, {"check": "distinct", "distinct": len(keys)})

        def check_pair_block(ids_a, ids_b, expect, label):
            nonlocal checks
            ids_a = np.asarray(ids_a)
            ids_b = np.asarray(ids_b)
            stacks = _stack_pairs(el[ids_a], el[ids_b])
            rk = batch_rank_gf3(stacks)
            checks += len(rk)
            for i in np.nonzero(rk != expect)[0][:5]:
                merge_failures(
                    failures,
                    {"check": label, "ids": [int(ids_a[i]), int(ids_b[i])], "rank": int(rk[i])},
                )

        if mode == "exhaustive":
            pairs = np.array(list(itertools.combinations(range(N), 2)))
            check_pair_block(pairs[:, 0], pairs[:, 1], 2 * m, "pair_span")
            triples = np.array(list(itertools.combinations(range(N), 3)))
            st = np.concatenate([el[triples[:, 0]], el[triples[:, 1]], el[triples[:, 2]]], axis=1)
            rk = batch_rank_gf3(st)
            checks += len(rk)
            for i in np.nonzero(rk != 3 * m)[0][:5]:
                merge_failures(
                    failures, {"check": "triple_span", "ids": [int(v) for v in triples[i]], "rank": int(rk[i])}
                )
            details["pairs"] = len(pairs)
            details["triples"] = len(triples)
        elif mode == "symmetry_reduced":
            cert = verify_shears(egg, seed=seed, **(shear_kwargs or {}))
            details["shears"] = cert.canonical_dict()
            checks += cert.checks_run
            if not cert.ok:
                merge_failures(failures, {"check": "shears", "failures": cert.failures[:3]})
            n2 = N - 1  # affine count
            zero_id = egg.id_of(0, 0)
            inf_id = egg.infinity_id
            others = np.arange(1, n2)  # all affine ids except (0,0) (id 0)
            check_pair_block(np.full(n2 - 1, zero_id), others, 2 * m, "pair_span")
            check_pair_block(np.full(n2, inf_id), np.arange(n2), 2 * m, "pair_span_inf")
            # triples through E(0,0): sampled representatives
            y = rng.integers(1, n2, size=triple_samples)
            z = rng.integers(1, n2, size=triple_samples)
            keep = y != z
            y, z = y[keep], z[keep]
            st = np.concatenate([np.broadcast_to(el[zero_id], (y.size, m, amb)), el[y], el[z]], axis=1)
            rk = batch_rank_gf3(np.ascontiguousarray(st))
            checks += y.size
            for i in np.nonzero(rk != 3 * m)[0][:5]:
                merge_failures(
                    failures, {"check": "triple_span", "ids": [0, int(y[i]), int(z[i])], "rank": int(rk[i])}
                )
            # triples through E(inf) and E(0,0): exhaustive representatives
            w = np.arange(1, n2)
            st = np.concatenate(
                [np.broadcast_to(el[inf_id], (w.size, m, amb)),
                 np.broadcast_to(el[zero_id], (w.size, m, amb)),
                 el[w]],
                axis=1,
            )
            rk = batch_rank_gf3(np.ascontiguousarray(st))
            checks += w.size
            for i in np.nonzero(rk != 3 * m)[0][:5]:
                merge_failures(
                    failures,
                    {"check": "triple_span_inf", "ids": [int(inf_id), 0, int(w[i])], "rank": int(rk[i])},
                )
            details["triples_sampled"] = int(y.size)
            details["pairs_reduced"] = int(2 * n2 - 1)
        elif mode == "sampled":
            i = rng.integers(N, size=pair_samples)
            j = rng.integers(N, size=pair_samples)
            keep = i != j
            check_pair_block(i[keep], j[keep], 2 * m, "pair_span")
            ids = rng.integers(N, size=(triple_samples, 3))
            keep = (ids[:, 0] != ids[:, 1]) & (ids[:, 0] != ids[:, 2]) & (ids[:, 1] != ids[:, 2])
            ids = ids[keep]
            st = np.concatenate([el[ids[:, 0]], el[ids[:, 1]], el[ids[:, 2]]], axis=1)
            rk = batch_rank_gf3(st)
            checks += ids.shape[0]
            for i in np.nonzero(rk != 3 * m)[0][:5]:
                merge_failures(
                    failures, {"check": "triple_span", "ids": [int(v) for v in ids[i]], "rank": int(rk[i])}
                )
        else:
            raise ValueError(f"unknown mode {mode!r}")

        # tangent checks ride along whenever the family is present
        if egg.tan_arr is not None:
            tranks = batch_rank_gf3(egg.tan_arr)
            checks += N
            for i in np.nonzero(tranks != 3 * m)[0][:5]:
                merge_failures(failures, {"check": "tangent_rank", "id": int(i)})
            st = np.concatenate([egg.tan_arr, el], axis=1)
            rk = batch_rank_gf3(st)
            checks += N
            for i in np.nonzero(rk != 3 * m)[0][:5]:
                merge_failures(failures, {"check": "tangent_contains", "id": int(i)})
            if mode == "exhaustive":
                tids, eids = np.nonzero(~np.eye(N, dtype=bool))
                st = np.concatenate([egg.tan_arr[tids], el[eids]], axis=1)
                rk = batch_rank_gf3(st)
                checks += len(rk)
                for i in np.nonzero(rk != 4 * m)[0][:5]:
                    merge_failures(
                        failures,
                        {"check": "tangent_disjoint", "tangent": int(tids[i]), "element": int(eids[i])},
                    )
            elif mode == "symmetry_reduced":
                zero_id, inf_id, n2 = egg.id_of(0, 0), egg.infinity_id, N - 1
                others = np.arange(1, n2)
                st = np.concatenate(
                    [np.broadcast_to(egg.tan_arr[zero_id], (others.size, 3 * m, amb)), el[others]],
                    axis=1,
                )
                rk = batch_rank_gf3(np.ascontiguousarray(st))
                checks += others.size
                for i in np.nonzero(rk != 4 * m)[0][:5]:
                    merge_failures(
                        failures, {"check": "tangent_disjoint", "tangent": 0, "element": int(others[i])}
                    )
                aff = np.arange(n2)
                st = np.concatenate(
                    [np.broadcast_to(egg.tan_arr[inf_id], (aff.size, 3 * m, amb)), el[aff]],
                    axis=1,
                )
                rk = batch_rank_gf3(np.ascontiguousarray(st))
                checks += aff.size
                for i in np.nonzero(rk != 4 * m)[0][:5]:
                    merge_failures(
                        failures,
                        {"check": "tangent_disjoint_inf", "element": int(aff[i])},
                    )
            else:
                i = rng.integers(N, size=pair_samples)
                j = rng.integers(N, size=pair_samples)
                keep = i != j
                i, j = i[keep], j[keep]
                st = np.concatenate([egg.tan_arr[i], el[j]], axis=1)
                rk = batch_rank_gf3(st)
                checks += i.size
                for k in np.nonzero(rk != 4 * m)[0][:5]:
                    merge_failures(
                        failures,
                        {"check": "tangent_disjoint", "tangent": int(i[k]), "element": int(j[k])},
                    )

    return Certificate(
        object=f"egg({(egg.spec.name if egg.spec else '') or 'raw'})",
        mode=mode,
        ok=not failures,
        checks_run=checks,
        failures=failures,
        details=details,
        seed=seed if mode != "exhaustive" else None,
        config_hash=config_hash(egg.config()),
        wall_ms=sw.ms,
    )


def _verify_egg_scalar(egg: Egg, mode: str) -> Certificate:
    """Reference-path verification for non-GF(3) eggs; exhaustive only."""
    if mode not in ("exhaustive", "auto"):
        raise ValueError("scalar egg verification is exhaustive only")
    if egg.size > 200:
        raise ValueError("scalar egg verification is for small instances")
    m, amb, N = egg.m, egg.ambient, egg.size
    failures: list = []
    checks = 0
    with stopwatch() as sw:
        subs = [egg.element(i) for i in range(N)]
        for s in subs:
            checks += 1
            if s.dim != m:
                merge_failures(failures, {"check": "element_rank"})
        if len({s.key() for s in subs}) != N:
            merge_failures(failures, {"check": "distinct"})
        for i, j in itertools.combinations(range(N), 2):
            checks += 1
            if subs[i].sum(subs[j]).dim != 2 * m:
                merge_failures(failures, {"check": "pair_span", "ids": [i, j]})
        for i, j, k in itertools.combinations(range(N), 3):
            checks += 1
            if subs[i].sum(subs[j]).sum(subs[k]).dim != 3 * m:
                merge_failures(failures, {"check": "triple_span", "ids": [i, j, k]})
        if egg.tan_arr is not None:
            tans = [egg.tangent(i) for i in range(N)]
            for i in range(N):
                checks += 1
                if tans[i].dim != 3 * m or not tans[i].contains(subs[i]):
                    merge_failures(failures, {"check": "tangent_contains", "id": i})
                for j in range(N):
                    if i == j:
                        continue
                    checks += 1
                    if tans[i].intersect(subs[j]).dim != 0:
                        merge_failures(
                            failures, {"check": "tangent_disjoint", "tangent": i, "element": j}
                        )
    return Certificate(
        object=f"egg({(egg.spec.name if egg.spec else '') or 'raw'})",
        mode="exhaustive",
        ok=not failures,
        checks_run=checks,
        failures=failures,
        details={"size": N, "engine": "scalar"},
        config_hash=config_hash(egg.config()),
        wall_ms=sw.ms,
    )


# -------------------------------------------------------------- goodness

def verify_goodness(
    egg: Egg,
    at: int | str = "infinity",
    mode: str = "auto",
    seed: int | None = 0,
    samples: int = 10_000,
    chunk: int = 12,
) -> Certificate:
    """Check that the egg is good at one element.

    Good at X: every span <X, Y, Z> of X with two further elements contains
    exactly q^m + 1 egg elements.  For coefficient eggs checked at the
    infinity element, the shear group reduces the pair (Y, Z) to
    (E(0,0), E(w)), so "exhaustive" here means all q^(2m)-1 representatives
    (the shear certificate is a prerequisite and is re-run by verify_egg);
    at other elements, or for raw eggs, every pair is enumerated, which is
    only feasible for small instances.

    Returns a certificate whose details include the histogram of element
    counts per span; the expected histogram is {q^m + 1: #spans}.
    """
    if egg.q != 3:
        raise ValueError("goodness sweeps are implemented for q = 3")
    m, amb, N = egg.m, egg.ambient, egg.size
    n = egg.order
    at_id = egg.infinity_id if at == "infinity" else int(at)
    reduced = (
        at_id == egg.infinity_id and egg.spec is not None and N > 300
    )
    if mode == "auto":
        mode = "symmetry_reduced" if reduced else "exhaustive"
    rng = substream(seed or 0, "egg", "goodness")
    el = egg.el_arr
    failures: list = []
    checks = 0
    hist: dict[int, int] = {}

    # all element basis rows, stacked once for the membership matmuls
    big = el.reshape(N * m, amb).astype(np.float32)

    def span_counts(stacks: np.ndarray) -> np.ndarray:
        """stacks: (B, 3m, amb). Returns #egg elements inside each span."""
        red, ranks = batch_rref_gf3(stacks)
        counts = np.empty(stacks.shape[0], dtype=np.int64)
        for b0 in range(0, stacks.shape[0], chunk):
            b1 = min(b0 + chunk, stacks.shape[0])
            nulls = []
            for b in range(b0, b1):
                nb = nullspace(red[b, : ranks[b]].tolist(), amb, 3)
                nulls.append(np.asarray(nb, dtype=np.float32).T)  # (amb, k_b)
            widths = [nb.shape[1] for nb in nulls]
            block = np.concatenate(nulls, axis=1)  # (amb, sum k)
            res = np.mod(big @ block, 3.0).astype(bool)  # (N*m, sum k)
            off = 0
            for bi, wd in enumerate(widths):
                inside = ~res[:, off : off + wd].any(axis=1)
                inside = inside.reshape(N, m).all(axis=1)
                counts[b0 + bi] = int(inside.sum())
                off += wd
        return counts

    with stopwatch() as sw:
        if mode == "symmetry_reduced":
            if not reduced:
                raise ValueError("symmetry_reduced goodness needs a coefficient egg at infinity")
            ws = np.arange(1, n * n) if samples >= n * n - 1 else rng.choice(
                np.arange(1, n * n), size=samples, replace=False
            )
            exhaustive_reps = ws.size == n * n - 1
            zero_id = egg.id_of(0, 0)
            stacks = np.concatenate(
                [
                    np.broadcast_to(el[at_id], (ws.size, m, amb)),
                    np.broadcast_to(el[zero_id], (ws.size, m, amb)),
                    el[ws],
                ],
                axis=1,
            )
            counts = span_counts(np.ascontiguousarray(stacks))
            checks += ws.size
            for c in counts:
                hist[int(c)] = hist.get(int(c), 0) + 1
            for i in np.nonzero(counts != n + 1)[0][:5]:
                merge_failures(
                    failures, {"check": "span_count", "w": int(ws[i]), "count": int(counts[i])}
                )
            mode_out = "symmetry_reduced" if exhaustive_reps else "sampled"
        else:
            others = np.array([i for i in range(N) if i != at_id])
            total_pairs = others.size * (others.size - 1) // 2
            if mode == "exhaustive" and total_pairs > 2_000_000:
                raise ValueError(
                    f"{total_pairs} pairs is out of reach for exhaustive goodness; "
                    "use mode='sampled' (or 'symmetry_reduced' at infinity)"
                )
            if mode == "sampled" and total_pairs > samples:
                ii = rng.integers(others.size, size=2 * samples).reshape(-1, 2)
                ii = ii[ii[:, 0] != ii[:, 1]][:samples]
                pairs = others[ii]
                mode_out = "sampled"
            else:
                pairs = np.array(list(itertools.combinations(others.tolist(), 2)))
                mode_out = "exhaustive"
            stacks = np.concatenate(
                [
                    np.broadcast_to(el[at_id], (len(pairs), m, amb)),
                    el[pairs[:, 0]],
                    el[pairs[:, 1]],
                ],
                axis=1,
            )
            counts = span_counts(np.ascontiguousarray(stacks))
            checks += len(pairs)
            for c in counts:
                hist[int(c)] = hist.get(int(c), 0) + 1
            for i in np.nonzero(counts != n + 1)[0][:5]:
                merge_failures(
                    failures,
                    {
                        "check": "span_count",
                        "pair": [int(pairs[i, 0]), int(pairs[i, 1])],
                        "count": int(counts[i]),
                    },
                )

    return Certificate(
        object=f"goodness({(egg.spec.name if egg.spec else '') or 'raw'}@{at})",
        mode=mode_out,
        ok=not failures,
        checks_run=checks,
        failures=failures,
        details={"histogram": {str(k): v for k, v in sorted(hist.items())}, "expected": n + 1},
        seed=seed,
        config_hash=config_hash(egg.config()),
        wall_ms=sw.ms,
    )


# ----------------------------------------------------- elementary eggs

def elliptic_quadric_points(field: FiniteField, nu: int | None = None) -> list[tuple[int, ...]]:
    """Point set of the elliptic quadric x0 x1 + x2^2 - nu x3^2 in PG(3, .).

    nu must be a non-square (default: the first one).  Returns projective
    representatives as 4-tuples of element indices.
    """
    F = field
    if nu is None:
        nu = next(i for i in range(1, F.order) if not F.is_square_i(i))
    if F.is_square_i(nu):
        raise FieldError(f"nu={nu} is a square; the quadric would be hyperbolic")
    pts = [(0, 1, 0, 0)]
    for u in range(F.order):
        for v in range(F.order):
            w = F.neg_i(F.sub_i(F.mul_i(u, u), F.mul_i(nu, F.mul_i(v, v))))
            pts.append((1, w, u, v))
    return pts


def field_reduce_point(field: FiniteField, pt: Sequence[int], q: int) -> list[list[int]]:
    """GF(q)-spread element of one projective point of PG(3, q^m):
    rows flatten(lambda * pt) for lambda over a GF(q)-basis."""
    if q != field.p:
        raise FieldError("field reduction is supported over the prime subfield only")
    rows = []
    for j in range(field.m):
        lam = field._powers[j]
        rows.append(
            [d for c in pt for d in field.coeffs_of(field.mul_i(lam, int(c)))]
        )
    return rows


def elementary_egg(field: FiniteField, points: Sequence[Sequence[int]], q: int) -> Egg:
    """Field-reduce an ovoid of PG(3, q^m) to an egg of PG(4m-1, q).

    `points` are projective 4-tuples of element indices over GF(q^m); the
    tangent planes are found combinatorially (each point must lie on a
    unique plane meeting the point set only there -- that this search
    succeeds is precisely the ovoid tangent-plane property).
    """
    F = field
    m = F.m
    n = F.order
    if len(points) != n * n + 1:
        raise FieldError(f"an ovoid of PG(3, {n}) has {n * n + 1} points, got {len(points)}")
    N = len(points)
    el = np.zeros((N, m, 4 * m), dtype=np.uint8)
    for i, pt in enumerate(points):
        sub = Subspace(q, 4 * m, field_reduce_point(F, pt, q))
        if sub.dim != m:
            raise FieldError(f"point {pt} did not reduce to an m-space")
        el[i] = sub.basis_array()

    # tangent planes: for each point the unique plane meeting the set once
    tan = np.zeros((N, 3 * m, 4 * m), dtype=np.uint8)
    pts_idx = [tuple(int(c) for c in pt) for pt in points]
    for i, pt in enumerate(pts_idx):
        found = None
        for w in _planes_through(F, pt):
            meets = sum(1 for other in pts_idx if _on_plane(F, w, other))
            if meets == 1:
                if found is not None:
                    raise FieldError(f"point {pt}: tangent plane not unique")
                found = w
        if found is None:
            raise FieldError(f"point {pt}: no tangent plane; not an ovoid")
        # plane {x : sum w_i x_i = 0} field-reduces to a 3m-space
        basis = _plane_basis(F, found)
        rows = []
        for bpt in basis:
            rows.extend(field_reduce_point(F, bpt, q))
        sub = Subspace(q, 4 * m, rows)
        if sub.dim != 3 * m:
            raise FieldError("tangent plane did not reduce to a 3m-space")
        tan[i] = sub.basis_array()
    return Egg(q, m, el, tan, spec=None)


def _planes_through(F: FiniteField, pt: tuple[int, ...]):
    """Dual vectors of the planes of PG(3, q^m) through a point."""
    seen = set()
    for w in itertools.product(range(F.order), repeat=4):
        if all(v == 0 for v in w):
            continue
        if _on_plane(F, w, pt):
            key = _proj_key(F, w)
            if key not in seen:
                seen.add(key)
                yield w


def _on_plane(F: FiniteField, w, pt) -> bool:
    acc = 0
    for wi, xi in zip(w, pt):
        acc = F.add_i(acc, F.mul_i(int(wi), int(xi)))
    return acc == 0


def _proj_key(F: FiniteField, v) -> tuple:
    lead = next(int(c) for c in v if c)
    inv = F.inv_i(lead)
    return tuple(F.mul_i(inv, int(c)) for c in v)


def _plane_basis(F: FiniteField, w) -> list[tuple[int, ...]]:
    """Three independent points of the plane with dual vector w, over GF(q^m)."""
    lead = next(i for i, c in enumerate(w) if c)
    basis = []
    for j in range(4):
        if j == lead:
            continue
        vec = [0, 0, 0, 0]
        vec[j] = 1
        vec[lead] = F.neg_i(F.mul_i(F.inv_i(int(w[lead])), int(w[j])))
        basis.append(tuple(vec))
    return basis


# ----------------------------------------------------------------- flocks

@dataclasses.dataclass
class Flock:
    """A candidate flock of the quadratic cone x0 x1 = x2^2 in PG(3, q^m).

    Planes are pi_t : t x0 + f(t) x1 + g(t) x2 + x3 = 0 for t over the
    field, with f and g q-linearized.  For coefficient data (b, c) of an
    egg, f has coefficients c and g has coefficients b.
    """

    field: FiniteField
    f: LinearizedPoly
    g: LinearizedPoly
    name: str = ""

    @staticmethod
    def from_egg_coefficients(spec: EggCoefficients) -> "Flock":
        F = spec.field
        return Flock(F, LinearizedPoly(F, spec.c), LinearizedPoly(F, spec.b), spec.name)

    def plane(self, t: int) -> tuple[int, int, int, int]:
        return (t, self.f(self.field(t)).i, self.g(self.field(t)).i, 1)

    def config(self) -> dict:
        return {
            "kind": "flock",
            "field": self.field.to_dict(),
            "f": list(self.f.coeffs),
            "g": list(self.g.coeffs),
        }


def verify_flock(flock: Flock, mode: str = "exhaustive") -> Certificate:
    """Each non-vertex cone point lies on exactly one plane of the family.

    Exhaustive (vectorized) whenever the field has dense tables; the cone
    has order^2 + order + 1 points including the vertex, so this is cheap
    at every size this package ships.
    """
    F = flock.field
    n = F.order
    if F.mul_table is None:
        raise FieldError("verify_flock needs dense field tables")
    failures: list = []
    with stopwatch() as sw:
        ts = np.arange(n, dtype=np.int64)
        f_t = flock.f.eval_v(ts)
        g_t = flock.g.eval_v(ts)
        # affine cone points (1, u^2, u, w): t + f(t) u^2 + g(t) u + w = 0
        u = np.repeat(np.arange(n, dtype=np.int64), n)
        w = np.tile(np.arange(n, dtype=np.int64), n)
        u2 = F.mul_v(u, u)
        # residual grid: (points, t)
        term = F.add_v(ts[None, :], F.mul_v(f_t[None, :], u2[:, None]))
        term = F.add_v(term, F.mul_v(g_t[None, :], u[:, None]))
        term = F.add_v(term, w[:, None])
        counts = (term == 0).sum(axis=1)
        # points (0, 1, 0, w): f(t) + w = 0
        term2 = F.add_v(f_t[None, :], np.arange(n, dtype=np.int64)[:, None])
        counts2 = (term2 == 0).sum(axis=1)
        checks = int(counts.size + counts2.size)
        bad = np.nonzero(counts != 1)[0]
        for i in bad[:5]:
            merge_failures(
                failures,
                {"check": "cover", "point": [1, int(u2[i]), int(u[i]), int(w[i])], "count": int(counts[i])},
            )
        bad2 = np.nonzero(counts2 != 1)[0]
        for i in bad2[:5]:
            merge_failures(
                failures, {"check": "cover", "point": [0, 1, 0, int(i)], "count": int(counts2[i])}
            )
    return Certificate(
        object=f"flock({flock.name or 'anon'})",
        mode="exhaustive",
        ok=not failures,
        checks_run=checks,
        failures=failures,
        details={"planes": n, "cone_points": int(counts.size + counts2.size)},
        config_hash=config_hash(flock.config()),
        wall_ms=sw.ms,
    )
