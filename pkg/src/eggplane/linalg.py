"""Exact linear algebra over small prime fields GF(p).

Two engines live here.

The *reference engine* (`rref`, `rank`, `nullspace`, `solve_right`, and the
`Subspace` class) works on plain Python lists of ints.  It is deliberately
numpy-free so it can serve as the independent oracle that the fast kernel
is tested against, and it is what user-facing objects route through.

The *batch engine* (`batch_rref_gf3`, `batch_rank_gf3`) handles the one
field that gets hammered, GF(3), by packing whole batches of matrices
into a pair of bit-plane arrays -- entry 0 -> (0,0), 1 -> (1,0),
2 -> (0,1) in (lo, hi) -- one uint64 per matrix row, one bit per column.
Gaussian elimination then runs one column at a time across the entire
batch with ~25 vector ops per column, which turns tens of thousands of
15x20 rank computations into a few hundred numpy passes.

Vectors and matrices are always row-oriented: a subspace is the row space
of its basis matrix, and canonical form is the reduced row echelon form
with zero rows dropped.  Two subspaces are equal iff their canonical
bases are identical, so RREF output doubles as a dict key.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

Row = tuple[int, ...]


# ------------------------------------------------------------ reference

def rref(rows: Iterable[Sequence[int]], ncols: int, p: int) -> tuple[tuple[Row, ...], tuple[int, ...]]:
    """Reduced row echelon form over GF(p).

    Returns (rows, pivot_columns); zero rows are dropped, so the result is
    the canonical basis of the row space.
    """
    mat = [[int(v) % p for v in row] for row in rows]
    for row in mat:
        if len(row) != ncols:
            raise ValueError(f"row of length {len(row)}, expected {ncols}")
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        src = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if src is None:
            continue
        mat[r], mat[src] = mat[src], mat[r]
        inv = pow(mat[r][c], p - 2, p)
        mat[r] = [v * inv % p for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [(v - f * w) % p for v, w in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return tuple(tuple(row) for row in mat[:r]), tuple(pivots)


def rank(rows: Iterable[Sequence[int]], ncols: int, p: int) -> int:
    return len(rref(rows, ncols, p)[0])


def nullspace(rows: Iterable[Sequence[int]], ncols: int, p: int) -> tuple[Row, ...]:
    """A basis of {v : M v^T = 0} for the row matrix M (free-variable form)."""
    red, pivots = rref(rows, ncols, p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = (-red[r][fc]) % p
        basis.append(tuple(v))
    # already in RREF up to row order; sort by pivot (= free column) position
    return tuple(sorted(basis, key=lambda v: next(i for i, x in enumerate(v) if x)))


def solve_right(rows: Sequence[Sequence[int]], target: Sequence[int], p: int) -> Row | None:
    """One x with x . M = target for the row matrix M, or None.

    Row convention: we are asking whether `target` lies in the row space;
    the certificate x gives the combination.
    """
    m = len(rows)
    ncols = len(target)
    # augment each column-vector equation: transpose and do standard solve
    aug = [[rows[i][c] for i in range(m)] + [int(target[c]) % p] for c in range(ncols)]
    red, pivots = rref(aug, m + 1, p)
    if any(pc == m for pc in pivots):
        return None  # inconsistent: pivot in the augmented column
    x = [0] * m
    for r, pc in enumerate(pivots):
        x[pc] = red[r][m]
    return tuple(x)


class Subspace:
    """A subspace of GF(p)^n, stored as its canonical RREF basis."""

    __slots__ = ("p", "ambient", "rows", "pivots")

    def __init__(self, p: int, ambient: int, rows: Iterable[Sequence[int]] = ()):
        self.p = p
        self.ambient = ambient
        self.rows, self.pivots = rref(rows, ambient, p)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def contains_vector(self, v: Sequence[int]) -> bool:
        v = [int(x) % self.p for x in v]
        for row, pc in zip(self.rows, self.pivots):
            f = v[pc]
            if f:
                v = [(a - f * b) % self.p for a, b in zip(v, row)]
        return not any(v)

    def contains(self, other: "Subspace") -> bool:
        return all(self.contains_vector(r) for r in other.rows)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and (self.p, self.ambient, self.rows) == (other.p, other.ambient, other.rows)
        )

    def __hash__(self) -> int:
        return hash((self.p, self.ambient, self.rows))

    def __repr__(self) -> str:
        return f"Subspace(GF({self.p})^{self.ambient}, dim={self.dim})"

    def key(self) -> bytes:
        """Compact canonical key, handy for building big dict/set indexes."""
        return np.asarray(self.rows, dtype=np.uint8).tobytes() if self.rows else b""

    def sum(self, other: "Subspace") -> "Subspace":
        self._check_peer(other)
        return Subspace(self.p, self.ambient, list(self.rows) + list(other.rows))

    def intersect(self, other: "Subspace") -> "Subspace":
        """Via duality: (U meet W)^perp = U^perp + W^perp."""
        self._check_peer(other)
        perps = list(nullspace(self.rows, self.ambient, self.p))
        perps += list(nullspace(other.rows, self.ambient, self.p))
        return Subspace(self.p, self.ambient, nullspace(perps, self.ambient, self.p))

    def perp(self) -> "Subspace":
        return Subspace(self.p, self.ambient, nullspace(self.rows, self.ambient, self.p))

    def _check_peer(self, other: "Subspace") -> None:
        if (self.p, self.ambient) != (other.p, other.ambient):
            raise ValueError(f"mixing {self!r} and {other!r}")

    def basis_array(self) -> np.ndarray:
        return np.asarray(self.rows, dtype=np.uint8).reshape(self.dim, self.ambient)

    def to_dict(self) -> dict:
        return {"p": self.p, "ambient": self.ambient, "rows": [list(r) for r in self.rows]}

    @staticmethod
    def from_dict(d: dict) -> "Subspace":
        return Subspace(int(d["p"]), int(d["ambient"]), d["rows"])


def span(p: int, ambient: int, *parts: "Subspace | Sequence[Sequence[int]]") -> Subspace:
    rows: list[Sequence[int]] = []
    for part in parts:
        rows.extend(part.rows if isinstance(part, Subspace) else part)
    return Subspace(p, ambient, rows)


def normalize_point(v: Sequence[int], p: int) -> Row | None:
    """Projective representative with leading nonzero = 1; None for zero."""
    v = [int(x) % p for x in v]
    lead = next((x for x in v if x), None)
    if lead is None:
        return None
    inv = pow(lead, p - 2, p)
    return tuple(x * inv % p for x in v)


# ---------------------------------------------------------- GF(3) batch

def _pack3(mats: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(B, R, C) uint8 entries in {0,1,2} -> two (B, R) uint64 bit planes."""
    B, R, C = mats.shape
    if C > 63:
        raise ValueError(f"batch kernel supports at most 63 columns, got {C}")
    lo = np.zeros((B, R), dtype=np.uint64)
    hi = np.zeros((B, R), dtype=np.uint64)
    for c in range(C):
        col = mats[:, :, c]
        lo |= (col == 1).astype(np.uint64) << np.uint64(c)
        hi |= (col == 2).astype(np.uint64) << np.uint64(c)
    return lo, hi


def _unpack3(lo: np.ndarray, hi: np.ndarray, C: int) -> np.ndarray:
    B, R = lo.shape
    out = np.zeros((B, R, C), dtype=np.uint8)
    for c in range(C):
        bit = np.uint64(1 << c)
        out[:, :, c] = ((lo & bit) != 0) + 2 * ((hi & bit) != 0)
    return out


def _gf3_add_planes(alo, ahi, blo, bhi):
    """Entrywise GF(3) addition on bit planes."""
    clo = ((alo ^ blo) & ~(ahi | bhi)) | (ahi & bhi)
    chi = ((ahi ^ bhi) & ~(alo | blo)) | (alo & blo)
    return clo, chi


def batch_rref_gf3(mats: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Reduced row echelon form of every matrix in a (B, R, C) uint8 batch.

    Returns (rref, ranks): rref has the same shape with zero rows pushed to
    the bottom, rows sorted by pivot column -- i.e. rref[b, :ranks[b]] is
    the canonical basis of matrix b's row space.
    """
    mats = np.ascontiguousarray(mats, dtype=np.uint8)
    if mats.ndim != 3:
        raise ValueError(f"expected (B, R, C) batch, got shape {mats.shape}")
    B, R, C = mats.shape
    if B == 0:
        return mats.copy(), np.zeros(0, dtype=np.int64)
    lo, hi = _pack3(mats)
    pivrow = np.zeros(B, dtype=np.int64)
    rowidx = np.arange(R)
    for c in range(C):
        bit = np.uint64(1 << c)
        nz = ((lo & bit) | (hi & bit)) != 0
        cand = nz & (rowidx[None, :] >= pivrow[:, None])
        has = cand.any(axis=1)
        bsel = np.nonzero(has)[0]
        if not bsel.size:
            continue
        src = np.argmax(cand[bsel], axis=1)
        pr = pivrow[bsel]
        # swap the found row up into the pivot slot
        tlo = lo[bsel, src].copy()
        thi = hi[bsel, src].copy()
        lo[bsel, src] = lo[bsel, pr]
        hi[bsel, src] = hi[bsel, pr]
        lo[bsel, pr] = tlo
        hi[bsel, pr] = thi
        # normalize pivot to 1: entry 2 means multiply row by 2 = swap planes
        piv2 = (hi[bsel, pr] & bit) != 0
        n2 = bsel[piv2]
        if n2.size:
            pr2 = pivrow[n2]
            t = lo[n2, pr2].copy()
            lo[n2, pr2] = hi[n2, pr2]
            hi[n2, pr2] = t
        # eliminate column c from every other row of the selected matrices
        slo, shi = lo[bsel], hi[bsel]                       # (S, R)
        plo = slo[np.arange(bsel.size), pr][:, None]        # (S, 1) pivot rows
        phi = shi[np.arange(bsel.size), pr][:, None]
        d1 = (slo & bit) != 0                               # entry 1 at col c
        d2 = (shi & bit) != 0                               # entry 2 at col c
        d1[np.arange(bsel.size), pr] = False
        d2[np.arange(bsel.size), pr] = False
        f1 = np.where(d1, ~np.uint64(0), np.uint64(0))
        f2 = np.where(d2, ~np.uint64(0), np.uint64(0))
        # row += (3 - d) * pivot: d=1 adds 2*pivot (planes swapped), d=2 adds pivot
        adlo = (f1 & phi) | (f2 & plo)
        adhi = (f1 & plo) | (f2 & phi)
        nlo, nhi = _gf3_add_planes(slo, shi, adlo, adhi)
        lo[bsel] = nlo
        hi[bsel] = nhi
        pivrow[bsel] = pr + 1
    return _unpack3(lo, hi, C), pivrow


def batch_rank_gf3(mats: np.ndarray) -> np.ndarray:
    return batch_rref_gf3(mats)[1]


def batch_matmul_gf3(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact (a @ b) mod 3 via float32 matmul (safe: entries < 2^24)."""
    prod = a.astype(np.float32) @ b.astype(np.float32)
    return np.mod(prod, 3.0).astype(np.uint8)


def gf3_rows_in_subspace(vectors: np.ndarray, basis_rows: Sequence[Sequence[int]]) -> np.ndarray:
    """Boolean mask: which rows of `vectors` lie in the given row space.

    Uses the dual test v in rowspace(W)  <=>  v . N^T = 0 where N spans the
    null space of W, so a million memberships is one matmul.
    """
    amb = vectors.shape[-1]
    null = nullspace(basis_rows, amb, 3)
    if not null:
        return np.ones(vectors.shape[0], dtype=bool)
    n = np.asarray(null, dtype=np.uint8).T  # (amb, nullity)
    residual = batch_matmul_gf3(vectors.astype(np.float32, copy=False), n)
    return ~residual.any(axis=1)
