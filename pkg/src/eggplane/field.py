"""Arithmetic in GF(p^m) for odd primes p, with a pinned polynomial basis.

An element of GF(p^m) is a residue class of GF(p)[x] modulo a fixed monic
irreducible polynomial of degree m.  Internally an element is just an
integer in [0, p^m): its base-p digits, least significant first, are the
coefficients of the residue polynomial.  That makes serialization trivial
and lets bulk sweeps run directly on numpy arrays of indices.

Fields of order <= TABLE_LIMIT precompute log/exp and frobenius tables;
below DENSE_LIMIT they additionally get full addition/multiplication
tables, so that a sweep over millions of field operations is a handful of
numpy gathers.  Every field this package actually iterates over (orders
3, 9, 27, 81, 243) sits comfortably below DENSE_LIMIT.  Larger fields
fall back to polynomial arithmetic: correct, not fast, and that is fine.

The modulus is part of a field's identity: two FiniteField objects are
interchangeable iff (p, m, modulus) agree.  Default moduli for small
p = 3 extensions are pinned below so that serialized data is stable
across versions; they are the classical Conway polynomials, though
nothing here depends on that beyond irreducibility (primitivity of x is
asserted in the test suite to guard against typos).
"""

from __future__ import annotations

import dataclasses
from typing import Iterable, Iterator, Sequence

import numpy as np

TABLE_LIMIT = 1 << 16  # log/exp + digit tables up to here
DENSE_LIMIT = 1 << 12  # full order x order add/mul tables up to here

# Pinned default moduli, coefficients low-to-high (last entry is the monic
# leading 1).  These are the standard compatible choices for p = 3.
DEFAULT_MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (3, 1): (1, 1),                # x + 1
    (3, 2): (2, 2, 1),             # x^2 + 2x + 2
    (3, 3): (1, 2, 0, 1),          # x^3 + 2x + 1
    (3, 4): (2, 0, 0, 2, 1),       # x^4 + 2x^3 + 2
    (3, 5): (1, 2, 0, 0, 0, 1),    # x^5 + 2x + 1
    (5, 1): (3, 1),                # x + 3
    (5, 2): (2, 4, 1),             # x^2 + 4x + 2
    (7, 1): (4, 1),                # x + 4
}


class FieldError(ValueError):
    """Bad field construction or an operation outside a field's domain."""


# ----------------------------------------------------------------- gf(p)[x]
# Plain-list polynomial helpers, coefficients low-to-high, used for modulus
# validation and as the arithmetic fallback for non-table fields.

def _ptrim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmulmod(f: list[int], g: list[int], mod: Sequence[int], p: int) -> list[int]:
    out = [0] * (len(f) + len(g) - 1) if f and g else []
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _pmodred(out, mod, p)


def _pmodred(f: list[int], mod: Sequence[int], p: int) -> list[int]:
    f = list(f)
    dm = len(mod) - 1
    inv_lead = pow(mod[-1], p - 2, p)
    for i in range(len(f) - 1, dm - 1, -1):
        c = f[i] % p
        if c:
            scale = c * inv_lead % p
            for j in range(dm + 1):
                f[i - dm + j] = (f[i - dm + j] - scale * mod[j]) % p
    del f[dm:]
    return f


def _ppowmod(f: list[int], e: int, mod: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _pmodred(f, mod, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, mod, p)
        base = _pmulmod(base, base, mod, p)
        e >>= 1
    return result


def _pgcd(f: list[int], g: list[int], p: int) -> list[int]:
    f, g = _ptrim(list(f)), _ptrim(list(g))
    while g:
        # f mod g
        inv_lead = pow(g[-1], p - 2, p)
        while len(f) >= len(g):
            c = f[-1] * inv_lead % p
            shift = len(f) - len(g)
            for j in range(len(g)):
                f[shift + j] = (f[shift + j] - c * g[j]) % p
            _ptrim(f)
            if not f:
                break
        f, g = g, f
    return f


def is_irreducible(mod: Sequence[int], p: int) -> bool:
    """Rabin test: f of degree m is irreducible over GF(p) iff
    x^(p^m) = x (mod f) and gcd(f, x^(p^(m/k)) - x) = 1 for prime k | m."""
    m = len(mod) - 1
    if m < 1 or mod[-1] % p == 0:
        return False
    if m == 1:
        return True
    x = [0, 1]
    for k in _prime_divisors(m):
        t = _ppowmod(x, p ** (m // k), mod, p)
        # gcd(f, t - x)
        diff = list(t) + [0] * max(0, 2 - len(t))
        diff[1] = (diff[1] - 1) % p
        if len(_pgcd(list(mod), diff, p)) != 1:
            return False
    t = _ppowmod(x, p**m, mod, p)
    diff = list(t) + [0] * max(0, 2 - len(t))
    diff[1] = (diff[1] - 1) % p
    return not _ptrim(diff)


def _prime_divisors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def find_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Smallest (by index-encoding) monic irreducible of degree m over GF(p)."""
    for low in range(p**m):
        coeffs = _digits_of(low, p, m) + [1]
        if is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise FieldError(f"no irreducible polynomial of degree {m} over GF({p})??")


def _digits_of(n: int, p: int, m: int) -> list[int]:
    out = []
    for _ in range(m):
        out.append(n % p)
        n //= p
    return out


# ------------------------------------------------------------------- field

class FiniteField:
    """GF(p^m) with elements encoded as integers in [0, p^m).

    Scalar arithmetic lives in the *_i methods (int in, int out); the
    FieldElement wrapper adds operator sugar on top.  Vectorized callers
    use the public tables directly (add_table, mul_table, frob_table, ...)
    -- for every field of order < DENSE_LIMIT these are plain numpy
    fancy-indexing fodder.
    """

    def __init__(self, p: int, m: int, modulus: Sequence[int] | None = None):
        if not _is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if p == 2:
            raise FieldError("even characteristic is out of scope here")
        if m < 1:
            raise FieldError(f"extension degree must be positive, got {m}")
        if modulus is None:
            mod = DEFAULT_MODULI.get((p, m)) or find_irreducible(p, m)
        else:
            mod = tuple(int(c) % p for c in modulus)
            if len(mod) != m + 1 or mod[-1] != 1:
                raise FieldError(f"modulus must be monic of degree {m}, got {list(modulus)}")
            if not is_irreducible(mod, p):
                raise FieldError(f"modulus {list(mod)} is reducible over GF({p})")
        self.p = p
        self.m = m
        self.modulus = tuple(mod)
        self.order = p**m
        self._powers = tuple(p**i for i in range(m))
        self._digit_table = None
        self.add_table = self.neg_table = self.mul_table = self.inv_table = None
        self.exp_table = self.log_table = None
        self._frob_tables: dict[int, np.ndarray] = {}
        if self.order <= TABLE_LIMIT:
            self._build_tables()

    # -- identity / serialization ------------------------------------

    @property
    def signature(self) -> tuple:
        return (self.p, self.m, self.modulus)

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteField) and self.signature == other.signature

    def __hash__(self) -> int:
        return hash(self.signature)

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.m})" if self.m > 1 else f"GF({self.p})"

    def to_dict(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    @staticmethod
    def from_dict(d: dict) -> "FiniteField":
        return FiniteField(int(d["p"]), int(d["m"]), d.get("modulus"))

    # -- element construction ----------------------------------------

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field.signature != self.signature:
                raise FieldError(f"element of {value.field!r} used in {self!r}")
            return value
        if isinstance(value, (int, np.integer)):
            if self.m == 1:
                return FieldElement(self, int(value) % self.p)
            if not 0 <= value < self.order:
                raise FieldError(f"index {value} out of range for {self!r}")
            return FieldElement(self, int(value))
        if isinstance(value, (list, tuple)):
            return self.from_coeffs(value)
        raise FieldError(f"cannot coerce {value!r} into {self!r}")

    def from_coeffs(self, coeffs: Sequence[int]) -> "FieldElement":
        if len(coeffs) > self.m:
            raise FieldError(f"{len(coeffs)} coefficients for degree-{self.m} extension")
        return FieldElement(self, self._coeffs_to_index(coeffs))

    def _coeffs_to_index(self, coeffs: Sequence[int]) -> int:
        return sum((int(c) % self.p) * self._powers[i] for i, c in enumerate(coeffs))

    def coeffs_of(self, a: int) -> tuple[int, ...]:
        return tuple(_digits_of(int(a), self.p, self.m))

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1 % self.order)

    @property
    def x(self) -> "FieldElement":
        """The residue class of the basis variable itself."""
        if self.m == 1:
            raise FieldError("prime field has no basis variable")
        return FieldElement(self, self.p)

    def elements(self) -> Iterator["FieldElement"]:
        for i in range(self.order):
            yield FieldElement(self, i)

    def random(self, rng: np.random.Generator) -> "FieldElement":
        return FieldElement(self, int(rng.integers(self.order)))

    # -- scalar arithmetic on indices ---------------------------------

    def add_i(self, a: int, b: int) -> int:
        if self.add_table is not None:
            return int(self.add_table[a, b])
        return self._add_slow(a, b)

    def _add_slow(self, a: int, b: int) -> int:
        p = self.p
        out = 0
        for pw in self._powers:
            out += ((a // pw + b // pw) % p) * pw
        return out

    def neg_i(self, a: int) -> int:
        p = self.p
        out = 0
        for pw in self._powers:
            out += (-(a // pw) % p) * pw
        return out

    def sub_i(self, a: int, b: int) -> int:
        return self.add_i(a, self.neg_i(b))

    def mul_i(self, a: int, b: int) -> int:
        if self.order <= DENSE_LIMIT:
            return int(self.mul_table[a, b])
        if self._digit_table is not None:
            if a == 0 or b == 0:
                return 0
            return int(self.exp_table[(int(self.log_table[a]) + int(self.log_table[b])) % (self.order - 1)])
        return self._mul_slow(a, b)

    def _mul_slow(self, a: int, b: int) -> int:
        fa = list(self.coeffs_of(a))
        fb = list(self.coeffs_of(b))
        prod = _pmulmod(fa, fb, self.modulus, self.p)
        return self._coeffs_to_index(prod)

    def inv_i(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"inverse of zero in {self!r}")
        if self._digit_table is not None:
            return int(self.exp_table[(self.order - 1 - int(self.log_table[a])) % (self.order - 1)])
        return self.pow_i(a, self.order - 2)

    def pow_i(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow_i(self.inv_i(a), -e)
        if a == 0:
            return 0 if e else 1
        if self._digit_table is not None:
            return int(self.exp_table[int(self.log_table[a]) * (e % (self.order - 1)) % (self.order - 1)])
        result, base = 1, a
        while e:
            if e & 1:
                result = self._mul_slow(result, base)
            base = self._mul_slow(base, base)
            e >>= 1
        return result

    def frob_i(self, a: int, k: int = 1) -> int:
        """a^(p^k); k may be any integer, reduced mod m."""
        k %= self.m
        if k == 0:
            return int(a)
        if self._digit_table is not None:
            return int(self.frob_table(k)[a])
        return self.pow_i(a, self.p**k)

    # -- squares -------------------------------------------------------

    def is_square_i(self, a: int) -> bool:
        if a == 0:
            return True
        if self._digit_table is not None:
            return int(self.log_table[a]) % 2 == 0
        return self.pow_i(a, (self.order - 1) // 2) == 1

    def sqrt_i(self, a: int) -> tuple[int, ...]:
        """All square roots of a: () if none, (0,) for zero, else a pair."""
        if a == 0:
            return (0,)
        if not self.is_square_i(a):
            return ()
        if self._digit_table is not None:
            r = int(self.exp_table[int(self.log_table[a]) // 2])
        else:
            r = self._tonelli_shanks(a)
        return tuple(sorted((r, self.neg_i(r))))

    def _tonelli_shanks(self, a: int) -> int:
        q, s = self.order - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2 % self.order
        while self.is_square_i(z):
            z = self.add_i(z, 1)
        mexp, c, t, r = s, self.pow_i(z, q), self.pow_i(a, q), self.pow_i(a, (q + 1) // 2)
        while t != 1:
            i, t2i = 1, self.mul_i(t, t)
            while t2i != 1:
                t2i = self.mul_i(t2i, t2i)
                i += 1
            b = self.pow_i(c, 1 << (mexp - i - 1))
            mexp, c = i, self.mul_i(b, b)
            t, r = self.mul_i(t, c), self.mul_i(r, b)
        return r

    # -- flatten: GF(p^m)^r  <->  GF(p)^(rm) ----------------------------

    def flatten(self, vec: Iterable["FieldElement | int"]) -> tuple[int, ...]:
        """Coefficient expansion of each entry, concatenated low-to-high."""
        out: list[int] = []
        for v in vec:
            idx = v.i if isinstance(v, FieldElement) else int(v)
            out.extend(self.coeffs_of(idx))
        return tuple(out)

    def unflatten(self, flat: Sequence[int]) -> tuple["FieldElement", ...]:
        if len(flat) % self.m:
            raise FieldError(f"flat length {len(flat)} is not a multiple of m={self.m}")
        m = self.m
        return tuple(
            self.from_coeffs(flat[i * m : (i + 1) * m]) for i in range(len(flat) // m)
        )

    def digits(self, idx: np.ndarray) -> np.ndarray:
        """Vectorized flatten of one coordinate: (...,) indices -> (..., m) digits."""
        if self._digit_table is not None:
            # widen: callers do integer arithmetic on these and a narrow
            # table dtype would silently wrap (243 * uint8 stays uint8)
            return self._digit_table[idx].astype(np.int64)
        idx = np.asarray(idx)
        out = np.empty(idx.shape + (self.m,), dtype=np.int64)
        rest = idx.astype(np.int64)
        for j in range(self.m):
            out[..., j] = rest % self.p
            rest = rest // self.p
        return out

    def undigits(self, dig: np.ndarray) -> np.ndarray:
        """Inverse of digits() on the last axis."""
        pw = np.asarray(self._powers, dtype=np.int64)
        return (np.asarray(dig, dtype=np.int64) % self.p) @ pw

    # -- tables ---------------------------------------------------------

    def _build_tables(self) -> None:
        n, p, m = self.order, self.p, self.m
        idx_dtype = np.uint8 if n <= 256 else np.uint32
        idx = np.arange(n, dtype=np.int64)
        digit_cols = []
        rest = idx.copy()
        for _ in range(m):
            digit_cols.append(rest % p)
            rest //= p
        self._digit_table = np.stack(digit_cols, axis=1).astype(np.uint8 if p <= 255 else np.int64)

        # exp/log via a multiplicative generator
        gen = self._find_generator()
        exp = np.empty(n - 1, dtype=idx_dtype)
        log = np.zeros(n, dtype=np.int64)
        acc = 1
        for e in range(n - 1):
            exp[e] = acc
            log[acc] = e
            acc = self._mul_slow(acc, gen)
        if acc != 1:
            raise FieldError("generator search produced a non-generator (bug)")
        self.exp_table = exp
        self.log_table = log
        self.generator = gen

        if n <= DENSE_LIMIT:
            digits = self._digit_table.astype(np.int64)
            pw = np.asarray(self._powers, dtype=np.int64)
            summed = (digits[:, None, :] + digits[None, :, :]) % p
            self.add_table = (summed @ pw).astype(idx_dtype)
            self.neg_table = (((-digits) % p) @ pw).astype(idx_dtype)
            # mul via logs, fixing up the zero row/column
            lg = log[:, None] + log[None, :]
            self.mul_table = exp[(lg % (n - 1))].astype(idx_dtype)
            self.mul_table[0, :] = 0
            self.mul_table[:, 0] = 0
            inv = np.zeros(n, dtype=idx_dtype)
            inv[exp] = exp[(-(np.arange(n - 1))) % (n - 1)]
            self.inv_table = inv  # inv_table[0] stays 0; scalar path raises first
        else:
            self.add_table = None
            self.neg_table = None
            self.mul_table = None
            self.inv_table = None

    def _find_generator(self) -> int:
        n1 = self.order - 1
        prime_parts = _prime_divisors(n1)
        for g in range(2, self.order):
            if all(self.pow_slow_nolog(g, n1 // pp) != 1 for pp in prime_parts):
                return g
        raise FieldError("no multiplicative generator found (bug)")

    def pow_slow_nolog(self, a: int, e: int) -> int:
        result, base = 1, a
        while e:
            if e & 1:
                result = self._mul_slow(result, base)
            base = self._mul_slow(base, base)
            e >>= 1
        return result

    def frob_table(self, k: int) -> np.ndarray:
        """Index table for a -> a^(p^k), cached per k (mod m)."""
        k %= self.m
        if k not in self._frob_tables:
            if k == 0:
                tab = np.arange(self.order, dtype=np.int64)
            elif k == 1:
                tab = np.fromiter(
                    (self.pow_slow_nolog(a, self.p) for a in range(self.order)),
                    dtype=np.int64, count=self.order,
                )
            else:
                tab = self.frob_table(1)[self.frob_table(k - 1)]
            self._frob_tables[k] = tab
        return self._frob_tables[k]

    # -- vectorized arithmetic on index arrays ---------------------------

    def add_v(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.add_table is not None:
            return self.add_table[a, b].astype(np.int64)
        return self.undigits((self.digits(a) + self.digits(b)) % self.p)

    def neg_v(self, a: np.ndarray) -> np.ndarray:
        if self.neg_table is not None:
            return self.neg_table[a].astype(np.int64)
        return self.undigits((-self.digits(a)) % self.p)

    def sub_v(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.add_v(a, self.neg_v(b))

    def mul_v(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.mul_table is not None:
            return self.mul_table[a, b].astype(np.int64)
        raise FieldError(f"vectorized multiply needs dense tables (order {self.order})")

    def frob_v(self, a: np.ndarray, k: int) -> np.ndarray:
        if self._digit_table is None:
            raise FieldError(f"vectorized frobenius needs tables (order {self.order})")
        return self.frob_table(k)[a]


@dataclasses.dataclass(frozen=True)
class FieldElement:
    """One element: a field reference plus its integer index."""

    field: FiniteField
    i: int

    def _peer(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field.signature != self.field.signature:
                raise FieldError(f"mixing {self.field!r} and {other.field!r}")
            return other.i
        if isinstance(other, (int, np.integer)):
            # bare ints act as GF(p) scalars (possibly negative), not indices
            return int(other) % self.field.p
        raise FieldError(f"cannot combine {other!r} with a field element")

    def __add__(self, other):
        j = self._peer(other)
        return FieldElement(self.field, self.field.add_i(self.i, j))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, self.field.neg_i(self.i))

    def __sub__(self, other):
        j = self._peer(other)
        return FieldElement(self.field, self.field.sub_i(self.i, j))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        j = self._peer(other)
        return FieldElement(self.field, self.field.mul_i(self.i, j))

    __rmul__ = __mul__

    def __truediv__(self, other):
        j = self._peer(other)
        return FieldElement(self.field, self.field.mul_i(self.i, self.field.inv_i(j)))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow_i(self.i, int(e)))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv_i(self.i))

    def frobenius(self, k: int = 1) -> "FieldElement":
        return FieldElement(self.field, self.field.frob_i(self.i, k))

    def is_square(self) -> bool:
        return self.field.is_square_i(self.i)

    def sqrts(self) -> tuple["FieldElement", ...]:
        return tuple(FieldElement(self.field, r) for r in self.field.sqrt_i(self.i))

    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs_of(self.i)

    def __int__(self) -> int:
        return self.i

    def __bool__(self) -> bool:
        return self.i != 0

    def __repr__(self) -> str:
        return f"{self.field!r}[{self.i}]"

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field.signature == other.field.signature and self.i == other.i
        if isinstance(other, (int, np.integer)):
            # scalar comparison: matches only prime-subfield elements
            return self.i < self.field.p and self.i == int(other) % self.field.p
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.signature, self.i))


def GF(p: int, m: int = 1, modulus: Sequence[int] | None = None) -> FiniteField:
    """Convenience factory, memoized on the signature."""
    key = (p, m, tuple(modulus) if modulus is not None else None)
    if key not in _FIELD_CACHE:
        _FIELD_CACHE[key] = FiniteField(p, m, modulus)
    return _FIELD_CACHE[key]


_FIELD_CACHE: dict = {}
