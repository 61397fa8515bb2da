"""q-linearized polynomials and the quadratic/bilinear form pair of a good egg.

A q-linearized polynomial over F = GF(q^m) is sum_i c_i X^(q^i); as a map
F -> F it is GF(q)-linear, so everything about it reduces to linear algebra
over the small field.  `LinearizedPoly` keeps the coefficient vector and
evaluates through the field's frobenius tables.

`EggCoefficients` packages the data (b_i, c_i)_{i<m} defining a candidate
good egg of PG(4m-1, q) in odd characteristic, together with the two forms
everything downstream is built from:

    g_{a,x}(t) = a^2 t + sum_i (b_i a x + c_i x^2)^(1/q^i) t^(1/q^i)
    h_{a,x}(r, s) = 2 a r + sum_i (b_i (a s + x r) + 2 c_i x s)^(1/q^i)

g is GF(q)-quadratic in (a, x) for each fixed t and h is its polarization:
g evaluated at a sum of arguments expands by the identity

    g_{(a+a', x+x')}(t) = g_{a,x}(t) + g_{a',x'}(t) + h_{a,x}(a' t, x' t),

which the test suite checks and the shear collineations rely on.  Fractional
powers mean inverse frobenius: y^(1/q^i) = y^(q^(m-i)), well defined on F.

Only prime q is supported: the coordinate flattening used everywhere else
identifies GF(q)-subspaces of F^4 with subsets of GF(p)^(4m) by coefficient
expansion, which matches the q-linear structure only when q = p.  All the
instances this package ships are over q = 3.
"""

from __future__ import annotations

import dataclasses
from typing import Sequence

import numpy as np

from .field import FieldElement, FiniteField, GF, FieldError, _is_prime


class LinearizedPoly:
    """sum_i coeffs[i] * X^(q^i) over GF(q^m), q = p prime here."""

    def __init__(self, field: FiniteField, coeffs: Sequence[int | FieldElement]):
        self.field = field
        idx = []
        for c in coeffs:
            idx.append(c.i if isinstance(c, FieldElement) else int(c))
        # pad/trim to exactly m coefficients; exponents are mod q^m anyway
        m = field.m
        if len(idx) > m:
            folded = [0] * m
            for i, c in enumerate(idx):
                folded[i % m] = field.add_i(folded[i % m], c)
            idx = folded
        self.coeffs = tuple(idx) + (0,) * (m - len(idx))

    def __call__(self, x: FieldElement | int) -> FieldElement:
        F = self.field
        xi = x.i if isinstance(x, FieldElement) else int(x)
        acc = 0
        for i, c in enumerate(self.coeffs):
            if c:
                acc = F.add_i(acc, F.mul_i(c, F.frob_i(xi, i)))
        return FieldElement(F, acc)

    def eval_v(self, x: np.ndarray) -> np.ndarray:
        """Vectorized evaluation on an index array."""
        F = self.field
        acc = np.zeros_like(np.asarray(x))
        for i, c in enumerate(self.coeffs):
            if c:
                cc = np.full_like(acc, c)
                acc = F.add_v(acc, F.mul_v(cc, F.frob_v(x, i)))
        return acc

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def kernel_size(self) -> int:
        """|ker| by exhaustive evaluation (table fields only)."""
        xs = np.arange(self.field.order)
        return int((self.eval_v(xs) == 0).sum())

    def is_bijective(self) -> bool:
        return self.kernel_size() == 1

    def matrix(self) -> list[list[int]]:
        """Matrix over GF(p) in the coefficient basis; row i = image of x^i."""
        F = self.field
        return [list(F.coeffs_of(self(F(int(F._powers[i]))).i)) for i in range(F.m)]

    def __repr__(self) -> str:
        return f"LinearizedPoly({self.field!r}, {self.coeffs})"


@dataclasses.dataclass(frozen=True)
class EggCoefficients:
    """Defining data of a candidate good egg: prime q, degree m, (b_i), (c_i).

    b and c are length-m tuples of element indices of GF(q^m).  The egg is
    elementary iff all b_i, c_i with i > 0 vanish; the two shipped sporadic
    instances have a single nonzero higher coefficient each.
    """

    q: int
    m: int
    b: tuple[int, ...]
    c: tuple[int, ...]
    name: str = ""
    modulus: tuple[int, ...] | None = None

    def __post_init__(self):
        if not _is_prime(self.q) or self.q == 2:
            raise FieldError(f"q must be an odd prime, got {self.q}")
        if len(self.b) != self.m or len(self.c) != self.m:
            raise FieldError(
                f"need m={self.m} coefficients, got |b|={len(self.b)}, |c|={len(self.c)}"
            )
        order = self.q**self.m
        if not all(0 <= v < order for v in self.b + self.c):
            raise FieldError("coefficient index out of range")

    @property
    def field(self) -> FiniteField:
        return GF(self.q, self.m, self.modulus)

    def forms(self) -> "EggForms":
        return EggForms(self)

    def is_elementary(self) -> bool:
        return not any(self.b[1:]) and not any(self.c[1:])

    def to_dict(self) -> dict:
        d = {"q": self.q, "m": self.m, "b": list(self.b), "c": list(self.c)}
        if self.name:
            d["name"] = self.name
        if self.modulus is not None:
            d["modulus"] = list(self.modulus)
        return d

    @staticmethod
    def from_dict(d: dict) -> "EggCoefficients":
        return EggCoefficients(
            q=int(d["q"]),
            m=int(d["m"]),
            b=tuple(int(v) for v in d["b"]),
            c=tuple(int(v) for v in d["c"]),
            name=d.get("name", ""),
            modulus=tuple(d["modulus"]) if d.get("modulus") is not None else None,
        )


class EggForms:
    """Scalar and vectorized evaluators for the g/h form pair of an egg.

    The scalar paths work element-by-element through FieldElement and are
    the reference; the *_v paths run on numpy index arrays via the field's
    dense tables and are what the big sweeps call.  Their agreement is a
    test, not an assumption.
    """

    def __init__(self, spec: EggCoefficients):
        self.spec = spec
        self.F = spec.field
        self._g1_grid: np.ndarray | None = None

    # scalar reference ------------------------------------------------

    def g(self, a: FieldElement, x: FieldElement, t: FieldElement) -> FieldElement:
        F, m = self.F, self.spec.m
        acc = a * a * t
        for i in range(m):
            bi, ci = self.spec.b[i], self.spec.c[i]
            if bi == 0 and ci == 0:
                continue
            w = FieldElement(F, bi) * a * x + FieldElement(F, ci) * x * x
            acc = acc + (w * t).frobenius(m - i)
        return acc

    def h(self, a: FieldElement, x: FieldElement, r: FieldElement, s: FieldElement) -> FieldElement:
        F, m = self.F, self.spec.m
        acc = 2 * a * r
        for i in range(m):
            bi, ci = self.spec.b[i], self.spec.c[i]
            if bi == 0 and ci == 0:
                continue
            w = FieldElement(F, bi) * (a * s + x * r) + 2 * FieldElement(F, ci) * x * s
            acc = acc + w.frobenius(m - i)
        return acc

    def g1(self, a: FieldElement, x: FieldElement) -> FieldElement:
        return self.g(a, x, self.F.one)

    # vectorized ------------------------------------------------------

    def g_v(self, a: np.ndarray, x: np.ndarray, t: np.ndarray) -> np.ndarray:
        F, m = self.F, self.spec.m
        a, x, t = np.broadcast_arrays(np.asarray(a), np.asarray(x), np.asarray(t))
        acc = F.mul_v(F.mul_v(a, a), t)
        for i in range(m):
            bi, ci = self.spec.b[i], self.spec.c[i]
            if bi == 0 and ci == 0:
                continue
            w = np.zeros_like(acc)
            if bi:
                w = F.mul_v(np.full_like(acc, bi), F.mul_v(a, x))
            if ci:
                w = F.add_v(w, F.mul_v(np.full_like(acc, ci), F.mul_v(x, x)))
            acc = F.add_v(acc, F.frob_v(F.mul_v(w, t), m - i))
        return acc

    def h_v(self, a: np.ndarray, x: np.ndarray, r: np.ndarray, s: np.ndarray) -> np.ndarray:
        F, m = self.F, self.spec.m
        a, x, r, s = np.broadcast_arrays(
            np.asarray(a), np.asarray(x), np.asarray(r), np.asarray(s)
        )
        two = 2 % F.p
        acc = F.mul_v(np.full_like(a, two), F.mul_v(a, r)) if two != 1 else F.mul_v(a, r)
        for i in range(m):
            bi, ci = self.spec.b[i], self.spec.c[i]
            if bi == 0 and ci == 0:
                continue
            w = np.zeros_like(acc)
            if bi:
                w = F.mul_v(np.full_like(acc, bi), F.add_v(F.mul_v(a, s), F.mul_v(x, r)))
            if ci:
                c2 = F.mul_i(ci, two)
                w = F.add_v(w, F.mul_v(np.full_like(acc, c2), F.mul_v(x, s)))
            acc = F.add_v(acc, F.frob_v(w, m - i))
        return acc

    def g1_grid(self) -> np.ndarray:
        """(order, order) table of g_{a,x}(1), indexed [a, x]."""
        if self._g1_grid is None:
            n = self.F.order
            a = np.repeat(np.arange(n), n)
            x = np.tile(np.arange(n), n)
            one = np.ones(n * n, dtype=np.int64)
            self._g1_grid = self.g_v(a, x, one).reshape(n, n)
        return self._g1_grid

    def polarization_defect(
        self, a, x, a2, x2, t
    ) -> FieldElement:
        """g_{(a+a2, x+x2)}(t) - g_{a,x}(t) - g_{a2,x2}(t) - h_{a,x}(a2 t, x2 t).

        Zero for every argument tuple iff h really is the polar form of g in
        the sense the shear maps need.
        """
        lhs = self.g(a + a2, x + x2, t)
        rhs = self.g(a, x, t) + self.g(a2, x2, t) + self.h(a, x, a2 * t, x2 * t)
        return lhs - rhs
