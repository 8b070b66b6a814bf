"""Exact rationals, univariate polynomials, Sturm chains and real roots.

The low-level routines (``poly_*``, ``sturm_sequence``, ``count_roots`` ...)
operate on coefficient tuples, lowest degree first, over an arbitrary
*ordered field domain* ``K``.  A domain is any object exposing

    zero, one, add, sub, neg, mul, inv, is_zero, sign, from_fraction

The rational field :data:`QQ` is the base case; :class:`hermsig.etale.Place`
provides the same interface for the residue field at an ordering, which is
how real roots of polynomials with algebraic coefficients are handled.

The public, rational-only API mirrors the usual textbook operations:
:class:`UniPoly`, :func:`squarefree_check`, :func:`sturm_chain`,
:func:`count_real_roots`, :func:`isolate_real_roots`, :func:`refine`
and :func:`sign_at`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

__all__ = [
    "QQ",
    "RationalField",
    "NotAUnit",
    "DomainError",
    "as_fraction",
    "UniPoly",
    "SturmChain",
    "RealAlgebraic",
    "squarefree_check",
    "sturm_chain",
    "count_real_roots",
    "isolate_real_roots",
    "refine",
    "sign_at",
]


class DomainError(ValueError):
    """An operation was called outside its mathematical domain."""


class NotAUnit(ArithmeticError):
    """Raised when inverting an element that is not a unit.

    ``split`` optionally carries a nontrivial factorisation ``(g1, g2)`` of
    the modulus witnessed by the zero divisor; callers doing dynamic
    evaluation use it to split the ring.
    """

    def __init__(self, message: str = "not a unit", split=None):
        super().__init__(message)
        self.split = split


def as_fraction(value) -> Fraction:
    """Parse ints, Fractions and ``"p/q"`` strings into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a rational number")


class RationalField:
    """The field of rational numbers as a domain object."""

    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise NotAUnit("division by zero in QQ")
        return 1 / a

    def is_zero(self, a) -> bool:
        return a == 0

    def is_unit(self, a) -> bool:
        return a != 0

    def sign(self, a) -> int:
        return (a > 0) - (a < 0)

    def from_fraction(self, r):
        return Fraction(r)

    def to_fraction(self, a) -> Fraction:
        return a

    def __repr__(self) -> str:
        return "QQ"


QQ = RationalField()


# ---------------------------------------------------------------------------
# generic dense polynomial arithmetic over a domain


def poly_strip(p: Sequence, K) -> tuple:
    p = list(p)
    while p and K.is_zero(p[-1]):
        p.pop()
    return tuple(p)


def poly_add(p, q, K) -> tuple:
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, c in enumerate(q):
        out[i] = K.add(out[i], c)
    return poly_strip(out, K)


def poly_neg(p, K) -> tuple:
    return tuple(K.neg(c) for c in p)


def poly_sub(p, q, K) -> tuple:
    return poly_add(p, poly_neg(q, K), K)


def poly_scale(p, c, K) -> tuple:
    return poly_strip([K.mul(c, a) for a in p], K)


def poly_mul(p, q, K) -> tuple:
    if not p or not q:
        return ()
    out = [K.zero] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if K.is_zero(a):
            continue
        for j, b in enumerate(q):
            out[i + j] = K.add(out[i + j], K.mul(a, b))
    return poly_strip(out, K)


def poly_divmod(a, b, K) -> tuple[tuple, tuple]:
    b = poly_strip(b, K)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(poly_strip(a, K))
    lead_inv = K.inv(b[-1])
    db = len(b) - 1
    if len(a) - 1 < db:
        return (), tuple(a)
    quot = [K.zero] * (len(a) - db)
    while len(a) - 1 >= db and a:
        c = K.mul(a[-1], lead_inv)
        shift = len(a) - 1 - db
        quot[shift] = c
        for i, bc in enumerate(b):
            a[shift + i] = K.sub(a[shift + i], K.mul(c, bc))
        a.pop()
        a = list(poly_strip(a, K))
    return poly_strip(quot, K), tuple(a)


def poly_rem(a, b, K) -> tuple:
    return poly_divmod(a, b, K)[1]


def poly_monic(p, K) -> tuple:
    p = poly_strip(p, K)
    if not p:
        return p
    return poly_scale(p, K.inv(p[-1]), K)


def poly_gcd(a, b, K) -> tuple:
    """Monic gcd (the zero polynomial if both inputs vanish)."""
    a, b = poly_strip(a, K), poly_strip(b, K)
    while b:
        a, b = b, poly_rem(a, b, K)
    return poly_monic(a, K)


def poly_xgcd(a, b, K):
    """Return ``(g, s, t)`` with ``g = s*a + t*b`` monic."""
    r0, r1 = poly_strip(a, K), poly_strip(b, K)
    s0, s1 = (K.one,), ()
    t0, t1 = (), (K.one,)
    while r1:
        q, r = poly_divmod(r0, r1, K)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(s0, poly_mul(q, s1, K), K)
        t0, t1 = t1, poly_sub(t0, poly_mul(q, t1, K), K)
    if not r0:
        return (), (), ()
    c = K.inv(r0[-1])
    return poly_scale(r0, c, K), poly_scale(s0, c, K), poly_scale(t0, c, K)


def poly_deriv(p, K) -> tuple:
    return poly_strip(
        [K.mul(K.from_fraction(Fraction(i)), c) for i, c in enumerate(p)][1:], K
    )


def poly_eval(p, x: Fraction, K):
    """Value of ``p`` at the rational point ``x`` (an element of K)."""
    acc = K.zero
    xk = K.from_fraction(x)
    for c in reversed(p):
        acc = K.add(K.mul(acc, xk), c)
    return acc


def poly_squarefree_part(p, K) -> tuple:
    p = poly_strip(p, K)
    g = poly_gcd(p, poly_deriv(p, K), K)
    if len(g) <= 1:
        return poly_monic(p, K)
    return poly_monic(poly_divmod(p, g, K)[0], K)


# ---------------------------------------------------------------------------
# Sturm machinery


def sturm_sequence(p, K) -> list[tuple]:
    """Signed remainder sequence ``p, p', -rem(p, p'), ...``."""
    p = poly_strip(p, K)
    if not p:
        raise DomainError("Sturm sequence of the zero polynomial")
    seq = [p]
    d = poly_deriv(p, K)
    if not d:
        return seq
    seq.append(d)
    while True:
        r = poly_rem(seq[-2], seq[-1], K)
        if not r:
            return seq
        seq.append(poly_neg(r, K))


def _sign_at_infinity(p, K, positive: bool) -> int:
    s = K.sign(p[-1])
    if not positive and (len(p) - 1) % 2 == 1:
        s = -s
    return s


def _variations(signs: Iterable[int]) -> int:
    last = 0
    count = 0
    for s in signs:
        if s == 0:
            continue
        if last and s != last:
            count += 1
        last = s
    return count


def sign_variations(seq, x: Optional[Fraction], K, *, positive: bool = True) -> int:
    """Sign variations of ``seq`` at ``x``; ``x=None`` means +inf or -inf."""
    if x is None:
        return _variations(_sign_at_infinity(p, K, positive) for p in seq)
    return _variations(K.sign(poly_eval(p, x, K)) for p in seq)


def count_roots(seq, lo: Optional[Fraction], hi: Optional[Fraction], K) -> int:
    """Number of distinct real roots in ``(lo, hi]`` given a Sturm sequence."""
    return sign_variations(seq, lo, K, positive=False) - sign_variations(
        seq, hi, K, positive=True
    )


def _count_open(seq, lo, hi, K) -> int:
    n = count_roots(seq, lo, hi, K)
    if hi is not None and K.is_zero(poly_eval(seq[0], hi, K)):
        n -= 1
    return n


def root_bound(p, K) -> Fraction:
    """A rational B with every real root of ``p`` in ``(-B, B)``."""
    if isinstance(K, RationalField):
        lead = abs(p[-1])
        return 1 + max((abs(c) / lead for c in p[:-1]), default=Fraction(0))
    seq = sturm_sequence(poly_squarefree_part(p, K), K)
    total = count_roots(seq, None, None, K)
    bound = Fraction(1)
    while _count_open(seq, -bound, bound, K) != total:
        bound *= 2
    return bound


def isolate_roots(p, K) -> list[tuple[Fraction, Fraction]]:
    """Isolating intervals of the real roots of a squarefree ``p``.

    Each result ``(lo, hi)`` is either a degenerate exact root ``lo == hi``
    or an open interval whose endpoints are not roots and on which ``p``
    changes sign exactly once.  Intervals are sorted and disjoint.
    """
    p = poly_strip(p, K)
    if len(p) <= 1:
        return []
    seq = sturm_sequence(p, K)
    bound = root_bound(p, K)
    out: list[tuple[Fraction, Fraction]] = []
    stack = [(-bound, bound)]
    while stack:
        lo, hi = stack.pop()
        n = _count_open(seq, lo, hi, K)
        if n == 0:
            continue
        if n == 1:
            out.append(_tighten(p, lo, hi, K))
            continue
        mid = (lo + hi) / 2
        if K.is_zero(poly_eval(p, mid, K)):
            out.append((mid, mid))
        stack.append((mid, hi))
        stack.append((lo, mid))
    out.sort(key=lambda iv: iv[0])
    return out


def _tighten(p, lo, hi, K) -> tuple[Fraction, Fraction]:
    """Shrink an interval with one root until its endpoints are not roots."""
    seq = None
    while True:
        slo = K.sign(poly_eval(p, lo, K))
        shi = K.sign(poly_eval(p, hi, K))
        if slo and shi:
            return lo, hi
        if seq is None:
            seq = sturm_sequence(p, K)
        mid = (lo + hi) / 2
        if K.is_zero(poly_eval(p, mid, K)):
            return mid, mid
        if _count_open(seq, lo, mid, K) == 1:
            hi = mid
        else:
            lo = mid


def refine_root(p, lo, hi, width: Fraction, K) -> tuple[Fraction, Fraction]:
    """Bisect an isolating interval of ``p`` down to ``hi - lo <= width``."""
    if width <= 0:
        raise DomainError("refinement width must be positive")
    if lo == hi:
        return lo, hi
    slo = K.sign(poly_eval(p, lo, K))
    while hi - lo > width:
        mid = (lo + hi) / 2
        sm = K.sign(poly_eval(p, mid, K))
        if sm == 0:
            return mid, mid
        if sm == slo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def sign_at_root(g, p, lo, hi, K) -> int:
    """Sign of ``g(psi)`` where psi is the unique root of ``p`` in ``(lo, hi)``.

    Zero is decided symbolically (``gcd(g, p)`` vanishing at psi) before any
    bisection, so the refinement loop always terminates.
    """
    g = poly_strip(g, K)
    if not g:
        return 0
    if lo == hi:
        return K.sign(poly_eval(g, lo, K))
    if len(g) == 1:
        return K.sign(g[0])
    h = poly_gcd(g, p, K)
    if len(h) > 1:
        if K.sign(poly_eval(h, lo, K)) * K.sign(poly_eval(h, hi, K)) < 0:
            return 0
    gs = poly_squarefree_part(g, K)
    seq = sturm_sequence(gs, K)
    slo = K.sign(poly_eval(p, lo, K))
    while True:
        glo = K.sign(poly_eval(gs, lo, K))
        if glo != 0 and count_roots(seq, lo, hi, K) == 0:
            return K.sign(poly_eval(g, lo, K))
        mid = (lo + hi) / 2
        sm = K.sign(poly_eval(p, mid, K))
        if sm == 0:
            return K.sign(poly_eval(g, mid, K))
        if sm == slo:
            lo = mid
        else:
            hi = mid


# ---------------------------------------------------------------------------
# public rational API


@dataclass(frozen=True)
class UniPoly:
    """Polynomial with rational coefficients, lowest degree first."""

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(
            self, "coeffs", poly_strip([as_fraction(c) for c in coeffs], QQ)
        )

    @classmethod
    def x(cls) -> "UniPoly":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1]

    def __call__(self, x) -> Fraction:
        return poly_eval(self.coeffs, as_fraction(x), QQ)

    def __add__(self, other: "UniPoly") -> "UniPoly":
        return UniPoly(poly_add(self.coeffs, _coerce(other).coeffs, QQ))

    __radd__ = __add__

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return UniPoly(poly_sub(self.coeffs, _coerce(other).coeffs, QQ))

    def __rsub__(self, other) -> "UniPoly":
        return _coerce(other) - self

    def __neg__(self) -> "UniPoly":
        return UniPoly(poly_neg(self.coeffs, QQ))

    def __mul__(self, other) -> "UniPoly":
        return UniPoly(poly_mul(self.coeffs, _coerce(other).coeffs, QQ))

    __rmul__ = __mul__

    def __divmod__(self, other: "UniPoly"):
        q, r = poly_divmod(self.coeffs, _coerce(other).coeffs, QQ)
        return UniPoly(q), UniPoly(r)

    def __mod__(self, other: "UniPoly") -> "UniPoly":
        return divmod(self, other)[1]

    def __floordiv__(self, other: "UniPoly") -> "UniPoly":
        return divmod(self, other)[0]

    def derivative(self) -> "UniPoly":
        return UniPoly(poly_deriv(self.coeffs, QQ))

    def gcd(self, other: "UniPoly") -> "UniPoly":
        return UniPoly(poly_gcd(self.coeffs, _coerce(other).coeffs, QQ))

    def monic(self) -> "UniPoly":
        return UniPoly(poly_monic(self.coeffs, QQ))

    def to_list(self) -> list:
        return [_plain(c) for c in self.coeffs]

    def __repr__(self) -> str:
        return f"UniPoly({self.to_list()})"


def _plain(c: Fraction):
    return int(c) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _coerce(p) -> UniPoly:
    if isinstance(p, UniPoly):
        return p
    return UniPoly([p])


@dataclass(frozen=True)
class SturmChain:
    polys: tuple[UniPoly, ...]

    def variations(self, x: Optional[Fraction], *, positive: bool = True) -> int:
        return sign_variations([p.coeffs for p in self.polys], x, QQ, positive=positive)


@dataclass(frozen=True)
class RealAlgebraic:
    """A real root of a squarefree rational polynomial, by isolating interval."""

    defining: UniPoly
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise DomainError("isolating interval with lo > hi")

    @property
    def is_rational(self) -> bool:
        return self.lo == self.hi

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __float__(self) -> float:
        r = refine(self, Fraction(1, 2**60))
        return float(r.midpoint())

    def __repr__(self) -> str:
        return f"RealAlgebraic({self.defining.to_list()}, ~{float(self):.6g})"


def _require_squarefree(p: UniPoly) -> None:
    if not squarefree_check(p):
        raise DomainError(f"{p!r} is not squarefree")


def squarefree_check(p: UniPoly) -> bool:
    """True iff ``gcd(p, p')`` is constant."""
    if p.is_zero():
        raise DomainError("squarefree_check of the zero polynomial")
    return poly_gcd(p.coeffs, poly_deriv(p.coeffs, QQ), QQ) == (Fraction(1),)


def sturm_chain(p: UniPoly) -> SturmChain:
    _require_squarefree(p)
    return SturmChain(tuple(UniPoly(q) for q in sturm_sequence(p.coeffs, QQ)))


def count_real_roots(p: UniPoly, lo=None, hi=None) -> int:
    """Real roots of a squarefree ``p`` in ``(lo, hi]``; ``None`` is infinite."""
    _require_squarefree(p)
    lo = None if lo is None else as_fraction(lo)
    hi = None if hi is None else as_fraction(hi)
    if lo is not None and hi is not None and lo >= hi:
        raise DomainError("count_real_roots needs lo < hi")
    return count_roots(sturm_sequence(p.coeffs, QQ), lo, hi, QQ)


def isolate_real_roots(p: UniPoly) -> list[RealAlgebraic]:
    _require_squarefree(p)
    return [RealAlgebraic(p, lo, hi) for lo, hi in isolate_roots(p.coeffs, QQ)]


def refine(r: RealAlgebraic, width) -> RealAlgebraic:
    lo, hi = refine_root(r.defining.coeffs, r.lo, r.hi, as_fraction(width), QQ)
    return RealAlgebraic(r.defining, lo, hi)


def sign_at(g: UniPoly, theta: RealAlgebraic) -> int:
    """Exact sign of ``g(theta)``."""
    return sign_at_root(g.coeffs, theta.defining.coeffs, theta.lo, theta.hi, QQ)
