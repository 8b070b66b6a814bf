"""Finite étale algebras over QQ (and over one another), traces and orderings.

An :class:`EtaleAlgebra` is a finite product of monogenic rings
``F_i[y]/(g_i)``.  For an absolute algebra every ``F_i`` is QQ; for the total
algebra of a :class:`RelativeEtale` extension ``F_i`` is the i-th factor of the
base, so towers ``QQ -> K -> T`` are represented without primitive elements.

Orderings are real roots of the factor moduli, computed over the residue
field of the ordering below.  Each ordering owns a :class:`Place`, a domain
with ring operations of its factor and with zero tests, inverses and signs
*evaluated at the root*; every signature in the package is computed there.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

from .numerics import (
    QQ,
    DomainError,
    NotAUnit,
    RealAlgebraic,
    UniPoly,
    as_fraction,
    isolate_roots,
    poly_deriv,
    poly_divmod,
    poly_gcd,
    poly_mul,
    poly_rem,
    poly_strip,
    poly_xgcd,
    refine_root,
    sign_at_root,
)

__all__ = [
    "SimpleExtension",
    "EtaleAlgebra",
    "Ordering",
    "Place",
    "RelativeEtale",
    "RATIONALS",
    "rationals",
    "trace",
    "trace_form",
    "orderings",
    "extensions_of_ordering",
    "pullback_check",
]


class SimpleExtension:
    """The ring ``F[y]/(g)`` for a monic ``g`` over a ring domain ``F``.

    Elements are tuples of length ``deg g``.  Arithmetic is structural; ``inv``
    treats ``F`` as a field and raises :class:`NotAUnit` (carrying the split of
    ``g``) on zero divisors.
    """

    def __init__(self, base, modulus: Sequence):
        modulus = poly_strip(modulus, base)
        if len(modulus) < 2:
            raise DomainError("modulus must have positive degree")
        if modulus[-1] != base.one:
            raise DomainError("modulus must be monic")
        self.base = base
        self.modulus = tuple(modulus)
        self.degree = len(modulus) - 1
        self.zero = (base.zero,) * self.degree
        self.one = (base.one,) + (base.zero,) * (self.degree - 1)

    def __eq__(self, other):
        return (
            isinstance(other, SimpleExtension)
            and self.base == other.base
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash(self.modulus)

    def __repr__(self):
        return f"SimpleExtension({self.base!r}, deg={self.degree})"

    # -- conversions
    def reduce(self, p: Sequence) -> tuple:
        F = self.base
        p = poly_strip(p, F)
        if len(p) > self.degree:
            p = poly_rem(p, self.modulus, F)
        return tuple(p) + (F.zero,) * (self.degree - len(p))

    def from_base(self, c) -> tuple:
        return (c,) + (self.base.zero,) * (self.degree - 1)

    def from_fraction(self, r) -> tuple:
        return self.from_base(self.base.from_fraction(r))

    def gen(self) -> tuple:
        if self.degree == 1:
            return self.reduce((self.base.zero, self.base.one))
        return (self.base.zero, self.base.one) + (self.base.zero,) * (self.degree - 2)

    # -- ring operations
    def add(self, a, b):
        F = self.base
        return tuple(F.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        F = self.base
        return tuple(F.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        F = self.base
        return tuple(F.neg(x) for x in a)

    def mul(self, a, b):
        F = self.base
        if self.degree == 1:
            # y = -g0, and products of constants stay constant
            return (F.mul(a[0], b[0]),)
        return self.reduce(poly_mul(a, b, F))

    def is_zero(self, a) -> bool:
        return all(self.base.is_zero(x) for x in a)

    def split_on(self, a):
        """Nontrivial factorisation ``(g1, g2)`` of the modulus if ``a`` is a
        zero divisor, else None."""
        F = self.base
        g = poly_gcd(a, self.modulus, F)
        if len(g) <= 1:
            return None
        if len(g) == len(self.modulus):
            return (self.modulus, (F.one,))
        cof = poly_divmod(self.modulus, g, F)[0]
        return (g, cof)

    def inv(self, a):
        F = self.base
        g, s, _ = poly_xgcd(a, self.modulus, F)
        if len(g) != 1:
            raise NotAUnit(
                "element is a zero divisor in F[y]/(g)", split=self.split_on(a)
            )
        return self.reduce(s)

    def is_unit(self, a) -> bool:
        try:
            self.inv(a)
        except NotAUnit:
            return False
        return True

    def trace(self, a):
        """Trace of multiplication by ``a`` on the power basis."""
        F = self.base
        acc = F.zero
        basis = self.one
        y = self.gen()
        for j in range(self.degree):
            acc = F.add(acc, self.mul(a, basis)[j])
            basis = self.mul(basis, y)
        return acc

    def project(self, modulus) -> "SimpleExtension":
        """The quotient ring by a monic divisor of the modulus."""
        return SimpleExtension(self.base, modulus)


class EtaleAlgebra:
    """A finite product of :class:`SimpleExtension` factors.

    ``base`` is None for an absolute QQ-algebra; otherwise factor ``i`` lies
    over factor ``i`` of ``base``.  Elements are tuples of factor elements.
    """

    def __init__(self, factors: Sequence[SimpleExtension], base: "EtaleAlgebra | None" = None):
        if not factors:
            raise DomainError("an étale algebra needs at least one factor")
        self.factors = tuple(factors)
        self.base = base
        if base is not None and len(base.factors) != len(self.factors):
            raise DomainError("relative algebra must have one factor per base factor")
        self.zero = tuple(F.zero for F in self.factors)
        self.one = tuple(F.one for F in self.factors)

    @classmethod
    def from_polys(cls, polys: Sequence) -> "EtaleAlgebra":
        """Absolute algebra ``prod QQ[x]/(f_i)``; each f must be monic squarefree."""
        factors = []
        for f in polys:
            p = f if isinstance(f, UniPoly) else UniPoly(f)
            if p.degree < 1:
                raise DomainError("factor polynomials must have positive degree")
            if p.lead != 1:
                raise DomainError(f"factor {p.to_list()} is not monic")
            from .numerics import squarefree_check

            if not squarefree_check(p):
                raise DomainError(f"factor {p.to_list()} is not squarefree")
            factors.append(SimpleExtension(QQ, p.coeffs))
        return cls(factors)

    def __eq__(self, other):
        return (
            isinstance(other, EtaleAlgebra)
            and self.factors == other.factors
            and self.base == other.base
        )

    def __hash__(self):
        return hash(self.factors)

    def __repr__(self):
        if self.base is None:
            polys = [UniPoly(F.modulus).to_list() for F in self.factors]
            return f"EtaleAlgebra({polys})"
        return f"EtaleAlgebra(relative, degree={self.factors[0].degree} over {self.base!r})"

    @property
    def rank(self) -> int:
        """Rank over QQ (absolute) or over the base (relative)."""
        if self.base is None:
            return sum(F.degree for F in self.factors)
        return self.factors[0].degree

    @property
    def is_rationals(self) -> bool:
        return self.base is None and len(self.factors) == 1 and self.factors[0].degree == 1

    # -- construction of elements
    def element(self, parts) -> tuple:
        """Build an element from per-factor coefficient data."""
        if len(parts) != len(self.factors):
            raise DomainError("wrong number of factor components")
        return tuple(F.reduce(tuple(p)) for F, p in zip(self.factors, parts))

    def from_fraction(self, r) -> tuple:
        r = as_fraction(r)
        return tuple(F.from_fraction(r) for F in self.factors)

    def gen(self) -> tuple:
        return tuple(F.gen() for F in self.factors)

    def embed(self, b) -> tuple:
        """Image of a base element (relative algebras only)."""
        if self.base is None:
            raise DomainError("absolute algebra has no base to embed")
        return tuple(F.from_base(c) for F, c in zip(self.factors, b))

    def to_fraction(self, a) -> Fraction:
        """Interpret an element of QQ (one factor of degree 1) as a Fraction."""
        if not self.is_rationals:
            raise DomainError("element is not in QQ")
        (part,) = a
        F = self.factors[0]
        return poly_eval_at_root(F, part)

    # -- ring operations
    def add(self, a, b):
        return tuple(F.add(x, y) for F, x, y in zip(self.factors, a, b))

    def sub(self, a, b):
        return tuple(F.sub(x, y) for F, x, y in zip(self.factors, a, b))

    def neg(self, a):
        return tuple(F.neg(x) for F, x in zip(self.factors, a))

    def mul(self, a, b):
        return tuple(F.mul(x, y) for F, x, y in zip(self.factors, a, b))

    def inv(self, a):
        out = []
        for i, (F, x) in enumerate(zip(self.factors, a)):
            try:
                out.append(F.inv(x))
            except NotAUnit as exc:
                raise NotAUnit(f"not a unit (zero divisor in factor {i})", exc.split) from None
        return tuple(out)

    def is_zero(self, a) -> bool:
        return all(F.is_zero(x) for F, x in zip(self.factors, a))

    def is_unit(self, a) -> bool:
        return all(F.is_unit(x) for F, x in zip(self.factors, a))

    def scale(self, r, a):
        return self.mul(self.from_fraction(r), a)

    def power_basis(self) -> list[tuple]:
        """Concatenated power bases of the factors (as elements)."""
        out = []
        for i, F in enumerate(self.factors):
            b = F.one
            y = F.gen()
            for _ in range(F.degree):
                out.append(tuple(b if j == i else G.zero for j, G in enumerate(self.factors)))
                b = F.mul(b, y)
        return out

    # -- traces
    def trace(self, a):
        """Tr to QQ (a Fraction) for absolute algebras, to the base otherwise."""
        if self.base is None:
            return sum((F.trace(x) for F, x in zip(self.factors, a)), Fraction(0))
        return tuple(F.trace(x) for F, x in zip(self.factors, a))

    # -- orderings
    @cached_property
    def orderings(self) -> tuple["Ordering", ...]:
        out: list[Ordering] = []
        if self.base is None:
            for i, F in enumerate(self.factors):
                for j, (lo, hi) in enumerate(isolate_roots(F.modulus, QQ)):
                    out.append(Ordering(self, i, j, lo, hi, None))
            return tuple(out)
        for alpha in self.base.orderings:
            out.extend(self.orderings_over(alpha))
        return tuple(out)

    def orderings_over(self, alpha: "Ordering") -> tuple["Ordering", ...]:
        """Orderings of this relative algebra restricting to ``alpha``."""
        if self.base is None:
            raise DomainError("absolute algebra has no orderings over a base")
        i = alpha.factor_index
        F = self.factors[i]
        P = alpha.place
        g = F.modulus
        if len(poly_gcd(g, poly_deriv(g, P), P)) > 1:
            raise DomainError(
                f"relative polynomial is not squarefree at the base ordering {alpha}"
            )
        return tuple(
            Ordering(self, i, j, lo, hi, alpha)
            for j, (lo, hi) in enumerate(isolate_roots(g, P))
        )


def poly_eval_at_root(F: SimpleExtension, part) -> Fraction:
    # degree-one factor y + c: the element is its constant term
    return part[0]


def rationals() -> EtaleAlgebra:
    """QQ presented as QQ[x]/(x)."""
    return EtaleAlgebra.from_polys([[0, 1]])


RATIONALS = rationals()


@dataclass(frozen=True, eq=False)
class Ordering:
    """A point of the real spectrum: a real root of one factor's modulus.

    ``index`` is the position of the root among the real roots of that factor
    (over ``below`` for relative algebras), so it identifies the ordering.
    """

    algebra: EtaleAlgebra = field(repr=False)
    factor_index: int
    index: int
    lo: Fraction = field(repr=False)
    hi: Fraction = field(repr=False)
    below: Optional["Ordering"] = field(default=None, repr=False)

    @property
    def key(self) -> tuple:
        return (self.factor_index, self.index) + (self.below.key if self.below else ())

    def __eq__(self, other):
        return isinstance(other, Ordering) and self.key == other.key and (
            self.algebra is other.algebra or self.algebra == other.algebra
        )

    def __hash__(self):
        return hash(self.key)

    @property
    def modulus(self):
        return self.algebra.factors[self.factor_index].modulus

    @property
    def root(self) -> RealAlgebraic:
        """The root as a RealAlgebraic (absolute algebras only)."""
        if self.below is not None:
            raise DomainError("relative roots have algebraic defining polynomials")
        return RealAlgebraic(UniPoly(self.modulus), self.lo, self.hi)

    @cached_property
    def place(self) -> "Place":
        below = QQ if self.below is None else self.below.place
        return Place(self.algebra.factors[self.factor_index], below, self.lo, self.hi)

    def project(self, a):
        """Component of an algebra element in this ordering's factor."""
        return a[self.factor_index]

    def sign(self, a) -> int:
        return self.place.sign(self.project(a))

    def approx(self) -> float:
        lo, hi = self.place.refined(Fraction(1, 2**40))
        return float((lo + hi) / 2)

    def label(self) -> str:
        head = f"f{self.factor_index}:r{self.index}"
        if self.below is not None:
            return f"{self.below.label()}/{head}"
        return head

    def __repr__(self):
        return f"Ordering({self.label()}~{self.approx():.6g})"


class Place:
    """Residue field at a real root, as an ordered field domain.

    Ring operations are those of ``ring`` (a :class:`SimpleExtension`).  Zero
    tests, signs and inverses are evaluated at the root ``psi`` of its modulus
    isolated by ``(lo, hi)``, with coefficient arithmetic interpreted through
    the place ``below``.  Inverses are computed modulo ``g / gcd(a, g)``, which
    is exact at psi and needs no factorisation of ``g``.
    """

    def __init__(self, ring: SimpleExtension, below, lo: Fraction, hi: Fraction):
        self.ring = ring
        self.below = below
        self.lo = lo
        self.hi = hi
        self.zero = ring.zero
        self.one = ring.one
        self._signs: dict = {}

    def __repr__(self):
        return f"Place(deg={self.ring.degree}, [{float(self.lo):.6g}, {float(self.hi):.6g}])"

    def add(self, a, b):
        return self.ring.add(a, b)

    def sub(self, a, b):
        return self.ring.sub(a, b)

    def neg(self, a):
        return self.ring.neg(a)

    def mul(self, a, b):
        return self.ring.mul(a, b)

    def from_fraction(self, r):
        return self.ring.from_fraction(r)

    def from_base(self, c):
        return self.ring.from_base(c)

    def sign(self, a) -> int:
        cached = self._signs.get(a)
        if cached is not None:
            return cached
        s = sign_at_root(a, self.ring.modulus, self.lo, self.hi, self.below)
        self._signs[a] = s
        return s

    def is_zero(self, a) -> bool:
        return self.sign(a) == 0

    def is_unit(self, a) -> bool:
        return self.sign(a) != 0

    def inv(self, a):
        if self.sign(a) == 0:
            raise NotAUnit("element vanishes at this ordering")
        K = self.below
        g = self.ring.modulus
        h = poly_gcd(a, g, K)
        if len(h) > 1:
            g = poly_divmod(g, h, K)[0]
        d, s, _ = poly_xgcd(a, g, K)
        if len(d) != 1:
            raise NotAUnit("local inverse failed")  # pragma: no cover
        return self.ring.reduce(s)

    def refined(self, width: Fraction) -> tuple[Fraction, Fraction]:
        return refine_root(self.ring.modulus, self.lo, self.hi, width, self.below)


# ---------------------------------------------------------------------------
# relative extensions


class RelativeEtale:
    """``T = K[y]/(f)`` for an étale base ``K`` and ``f`` with unit leading
    coefficient; ``total`` is the algebra T with ``total.base is K``."""

    def __init__(self, base: EtaleAlgebra, rel_poly: Sequence):
        coeffs = [tuple(c) for c in rel_poly]
        while coeffs and base.is_zero(coeffs[-1]):
            coeffs.pop()
        if len(coeffs) < 2:
            raise DomainError("relative polynomial must have positive degree")
        if not base.is_unit(coeffs[-1]):
            raise DomainError("leading coefficient of the relative polynomial must be a unit")
        lead_inv = base.inv(coeffs[-1])
        monic = [base.mul(lead_inv, c) for c in coeffs]
        self.base = base
        self.rel_poly = tuple(monic)
        factors = [
            SimpleExtension(Fi, tuple(c[i] for c in monic))
            for i, Fi in enumerate(base.factors)
        ]
        self.total = EtaleAlgebra(factors, base=base)
        # squarefree at every ordering of the base
        for alpha in base.orderings:
            self.total.orderings_over(alpha)

    def __repr__(self):
        return f"RelativeEtale(degree {self.degree} over {self.base!r})"

    @property
    def degree(self) -> int:
        return len(self.rel_poly) - 1

    def trace(self, a):
        return self.total.trace(a)

    def embed(self, b):
        return self.total.embed(b)


# ---------------------------------------------------------------------------
# spec-level functional API


def trace(T: EtaleAlgebra, a) -> Fraction:
    return T.trace(a)


def trace_form(T: EtaleAlgebra):
    """Gram matrix ``Tr(b_u b_v)`` on the concatenated power basis, over QQ
    (absolute T) or over T's base (relative T)."""
    from .quadratic import QuadForm

    basis = T.power_basis()
    target = RATIONALS if T.base is None else T.base
    gram = []
    for bu in basis:
        row = []
        for bv in basis:
            t = T.trace(T.mul(bu, bv))
            row.append(target.from_fraction(t) if T.base is None else t)
        gram.append(tuple(row))
    return QuadForm(target, tuple(gram))


def orderings(T: EtaleAlgebra) -> tuple[Ordering, ...]:
    return T.orderings


def extensions_of_ordering(E: RelativeEtale, alpha: Ordering) -> tuple[Ordering, ...]:
    if alpha.algebra != E.base:
        raise DomainError("ordering does not belong to the base of the extension")
    return E.total.orderings_over(alpha)


def pullback_check(E: RelativeEtale, gamma: Ordering, alpha: Ordering) -> bool:
    """True iff gamma restricts to alpha: same support and matching signs on
    the base generators."""
    if gamma.below is None or alpha.algebra != E.base:
        return False
    if gamma.below != alpha:
        return False
    x = E.base.gen()
    return gamma.sign(E.embed(x)) == alpha.sign(x)
