"""Named instances: the specific fields, eggs, semifields and planes shipped.

Everything downstream is parametrized; this module pins the handful of
concrete configurations the verification campaigns and the test suite talk
about, so they can be requested by name from the CLI.

* "pw"        -- the sporadic good egg of PG(19, 3) found by Penttila and
                 Williams, with forms (over GF(3^5), modulus x^5 + 2x + 1)

                     g_{a,x}(t) = a^2 t - (x^2)^9 t^9 + (a x)^81 t^81,

                 i.e. coefficients b = (0, 1, 0, 0, 0), c = (0, 0, 0, -1, 0);
                 its flock has f(t) = -t^27, g(t) = t^3.  This is the only
                 known good egg that is not elementary and does not come
                 from a Kantor-Knuth / classical family, and it underlies
                 the order-3^10 Dickson semifield plane and its unital.

* "kk9"       -- the Kantor-Knuth type egg of PG(7, 3) built from the flock
                 f(t) = n t^3 over GF(9) (n a fixed non-square), g = 0.
                 Small enough for every exhaustive sweep; good at infinity
                 but (computably) not good at its affine elements, which
                 makes it the negative control for goodness detection.

* "classical9" -- the elementary egg of PG(7, 3) obtained by field
                 reduction of the elliptic quadric of PG(3, 9); good
                 everywhere.

* "m1"        -- the m = 1 degenerate case: the egg *is* an elliptic
                 quadric ovoid of PG(3, 3), the spread is regular, the
                 plane is PG(2, 9) and the unital construction collapses
                 to a 28-point unital -- every step exhaustively checkable.

* Dickson semifields "d9" (order 81, over GF(9) with alpha = 3) and
  "d243" (order 3^10, over GF(3^5) with alpha = 9, xi = -1), the latter
  being the coordinate semifield of the plane the unital lives in.
"""

from __future__ import annotations

from .field import GF, FiniteField
from .linpoly import EggCoefficients
from .spread import DicksonSemifield


def pw_egg() -> EggCoefficients:
    """The sporadic good egg over GF(3^5): b = (0,1,0,0,0), c = (0,0,0,-1,0)."""
    return EggCoefficients(q=3, m=5, b=(0, 1, 0, 0, 0), c=(0, 0, 0, 2, 0), name="pw")


def kk9_egg() -> EggCoefficients:
    """Kantor-Knuth type egg over GF(9): f(t) = n t^3 with n the first non-square."""
    F = GF(3, 2)
    n = next(i for i in range(1, 9) if not F.is_square_i(i))
    return EggCoefficients(q=3, m=2, b=(0, 0), c=(0, n), name="kk9")


def classical9_egg() -> EggCoefficients:
    """Elementary egg over GF(9): g = (a^2 + n x^2) t for a non-square n.

    Elementary because only the i = 0 coefficients are nonzero; it is the
    field reduction of a conic-based elliptic quadric and is good at every
    element.
    """
    F = GF(3, 2)
    n = next(i for i in range(1, 9) if not F.is_square_i(i))
    return EggCoefficients(q=3, m=2, b=(0, 0), c=(n, 0), name="classical9")


def m1_egg() -> EggCoefficients:
    """m = 1: points (t, -(a^2+x^2)t, -at, -xt) form an elliptic quadric ovoid."""
    return EggCoefficients(q=3, m=1, b=(0,), c=(1,), name="m1")


def f9_semifield() -> DicksonSemifield:
    """The degenerate order-9 member: K = GF(3) forces sigma = id, so the
    pair algebra (x, y)*(a, b) = (ax + xi by, bx + ay) with xi = -1 is just
    GF(9) -- but written in the pair coordinates the m = 1 unital fixture
    needs."""
    return DicksonSemifield(field=GF(3, 1), xi=2, alpha=0, name="f9")


def d9_semifield() -> DicksonSemifield:
    """Dickson semifield of order 81 over GF(9); exhaustively checkable."""
    F = GF(3, 2)
    xi = next(i for i in range(1, 9) if not F.is_square_i(i))
    return DicksonSemifield(field=F, xi=xi, alpha=1, name="d9")


def pw_semifield() -> DicksonSemifield:
    """The Dickson semifield of order 3^10 coordinatizing the big plane.

    Multiplication on GF(3^5)^2:
        (x, y) * (a, b) = (a x + xi b^sigma y^sigma, b x + a y)
    with sigma: z -> z^9 and xi = -1 (a non-square of GF(3^5)).
    """
    F = GF(3, 5)
    return DicksonSemifield(field=F, xi=F.neg_i(1), alpha=2, name="d243")


EGGS = {
    "pw": pw_egg,
    "kk9": kk9_egg,
    "classical9": classical9_egg,
    "m1": m1_egg,
}

SEMIFIELDS = {
    "f9": f9_semifield,
    "d9": d9_semifield,
    "d243": pw_semifield,
}


def egg_by_name(name: str) -> EggCoefficients:
    if name not in EGGS:
        raise KeyError(f"unknown egg {name!r}; have {sorted(EGGS)}")
    return EGGS[name]()


def semifield_by_name(name: str) -> DicksonSemifield:
    if name not in SEMIFIELDS:
        raise KeyError(f"unknown semifield {name!r}; have {sorted(SEMIFIELDS)}")
    return SEMIFIELDS[name]()
