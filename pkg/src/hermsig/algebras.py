"""Matrix algebras ``M_n(D)`` with involution over an étale base.

``D`` is the base itself, a quadratic extension ``R[s]/(s^2 - d)`` or a
quaternion algebra ``(a, b)_R``.  The involution is the twist
``sigma(X) = u^{-1} theta(X)^T u`` of the standard one, where ``theta`` is the
identity (base kind) or the canonical conjugation of ``D``, and the twist
unit satisfies ``theta(u)^T = s u`` with ``s = +1`` or ``-1``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from . import linalg
from .etale import EtaleAlgebra, Ordering, RelativeEtale
from .numerics import DomainError, NotAUnit

__all__ = [
    "BASE",
    "QUADRATIC",
    "QUATERNION",
    "TRANSPOSE",
    "CONJ_TRANSPOSE",
    "InvolutionType",
    "DivisionSpec",
    "DivisionRing",
    "InvolutiveAlgebra",
    "mat_inverse",
    "type_at",
    "nil_set",
    "degree",
    "center",
]

BASE = "base"
QUADRATIC = "quadratic"
QUATERNION = "quaternion"
TRANSPOSE = "transpose"
CONJ_TRANSPOSE = "conj-transpose"

_DIMS = {BASE: 1, QUADRATIC: 2, QUATERNION: 4}


class InvolutionType(str, enum.Enum):
    ORTHOGONAL = "orthogonal"
    SYMPLECTIC = "symplectic"
    UNITARY = "unitary"
    UNITARY_SPLIT = "unitary-split"


@dataclass(frozen=True)
class DivisionSpec:
    """Kind of ``D`` with its parameters (base-algebra elements)."""

    kind: str
    params: tuple = ()

    def __post_init__(self):
        if self.kind not in _DIMS:
            raise DomainError(f"unknown division kind {self.kind!r}")
        want = {BASE: 0, QUADRATIC: 1, QUATERNION: 2}[self.kind]
        if len(self.params) != want:
            raise DomainError(f"{self.kind} needs {want} parameter(s)")

    @classmethod
    def base(cls) -> "DivisionSpec":
        return cls(BASE)

    @classmethod
    def quadratic(cls, d) -> "DivisionSpec":
        return cls(QUADRATIC, (d,))

    @classmethod
    def quaternion(cls, a, b) -> "DivisionSpec":
        return cls(QUATERNION, (a, b))

    @property
    def dim(self) -> int:
        return _DIMS[self.kind]


class DivisionRing:
    """Arithmetic of ``D`` with coordinates in a domain ``K``.

    ``K`` is an :class:`EtaleAlgebra` for global computations or a
    :class:`~hermsig.etale.Place` for computations at an ordering.
    Coordinates: ``(x0,)``, ``x0 + x1 s`` or ``x0 + x1 i + x2 j + x3 k``.
    """

    def __init__(self, kind: str, K, params: Sequence = ()):
        self.kind = kind
        self.K = K
        self.params = tuple(params)
        self.dim = _DIMS[kind]
        self.zero = (K.zero,) * self.dim
        self.one = (K.one,) + (K.zero,) * (self.dim - 1)
        if kind == QUATERNION:
            a, b = self.params
            self._ab = K.mul(a, b)

    def __eq__(self, other):
        return (
            isinstance(other, DivisionRing)
            and self.kind == other.kind
            and self.K == other.K
            and self.params == other.params
        )

    def __hash__(self):
        return hash((self.kind, self.params))

    def scalar(self, c) -> tuple:
        return (c,) + (self.K.zero,) * (self.dim - 1)

    def basis(self) -> list[tuple]:
        K = self.K
        return [
            tuple(K.one if i == j else K.zero for j in range(self.dim))
            for i in range(self.dim)
        ]

    def add(self, x, y):
        K = self.K
        return tuple(K.add(p, q) for p, q in zip(x, y))

    def sub(self, x, y):
        K = self.K
        return tuple(K.sub(p, q) for p, q in zip(x, y))

    def neg(self, x):
        K = self.K
        return tuple(K.neg(p) for p in x)

    def is_zero(self, x) -> bool:
        return all(self.K.is_zero(p) for p in x)

    def scale(self, c, x):
        K = self.K
        return tuple(K.mul(c, p) for p in x)

    def mul(self, x, y):
        K = self.K
        if self.kind == BASE:
            return (K.mul(x[0], y[0]),)
        if self.kind == QUADRATIC:
            (d,) = self.params
            x0, x1 = x
            y0, y1 = y
            return (
                K.add(K.mul(x0, y0), K.mul(d, K.mul(x1, y1))),
                K.add(K.mul(x0, y1), K.mul(x1, y0)),
            )
        a, b = self.params
        ab = self._ab
        x0, x1, x2, x3 = x
        y0, y1, y2, y3 = y
        m = K.mul
        z0 = K.sub(
            K.add(K.add(m(x0, y0), m(a, m(x1, y1))), m(b, m(x2, y2))), m(ab, m(x3, y3))
        )
        z1 = K.add(K.add(m(x0, y1), m(x1, y0)), m(b, K.sub(m(x3, y2), m(x2, y3))))
        z2 = K.add(K.add(m(x0, y2), m(x2, y0)), m(a, K.sub(m(x1, y3), m(x3, y1))))
        z3 = K.add(K.add(m(x0, y3), m(x3, y0)), K.sub(m(x1, y2), m(x2, y1)))
        return (z0, z1, z2, z3)

    def conj(self, x):
        if self.kind == BASE:
            return x
        K = self.K
        return (x[0],) + tuple(K.neg(p) for p in x[1:])

    def norm(self, x):
        """Reduced norm ``x * conj(x)`` as a ``K`` element."""
        if self.kind == BASE:
            return x[0]
        return self.mul(x, self.conj(x))[0]

    def inv(self, x):
        if self.kind == BASE:
            return (self.K.inv(x[0]),)
        n = self.norm(x)
        return self.scale(self.K.inv(n), self.conj(x))

    def is_unit(self, x) -> bool:
        try:
            self.inv(x)
        except NotAUnit:
            return False
        return True

    def left_regular(self, x) -> tuple:
        """Matrix of ``y -> x y`` on the coordinate basis (columns = images)."""
        cols = [self.mul(x, e) for e in self.basis()]
        return tuple(tuple(cols[c][r] for c in range(self.dim)) for r in range(self.dim))


def mat_inverse(M, D: DivisionRing):
    """Gauss-Jordan inverse over ``D``; pivots must be units of ``D``."""
    n = len(M)
    a = [list(row) + [D.one if i == j else D.zero for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        piv = None
        for r in range(c, n):
            if D.is_zero(a[r][c]):
                continue
            try:
                pinv = D.inv(a[r][c])
            except NotAUnit:
                continue
            piv = r
            break
        if piv is None:
            raise NotAUnit("matrix is not invertible (no unit pivot)")
        a[c], a[piv] = a[piv], a[c]
        a[c] = [D.mul(pinv, x) for x in a[c]]
        for r in range(n):
            if r == c or D.is_zero(a[r][c]):
                continue
            f = a[r][c]
            a[r] = [D.sub(x, D.mul(f, y)) for x, y in zip(a[r], a[c])]
    return tuple(tuple(row[n:]) for row in a)


def theta_transpose(M, D: DivisionRing):
    return tuple(tuple(D.conj(M[j][i]) for j in range(len(M))) for i in range(len(M)))


class InvolutiveAlgebra:
    """``(M_n(D), sigma)`` over an étale base with ``sigma = Int(u^{-1}) o theta^T``."""

    def __init__(
        self,
        base: EtaleAlgebra,
        n: int,
        div: DivisionSpec,
        standard: str,
        twist=None,
    ):
        if n < 1:
            raise DomainError("matrix size must be positive")
        if standard not in (TRANSPOSE, CONJ_TRANSPOSE):
            raise DomainError(f"unknown standard involution {standard!r}")
        if (div.kind == BASE) != (standard == TRANSPOSE):
            raise DomainError(
                "transpose goes with the base kind, conjugate-transpose with "
                "quadratic and quaternion kinds"
            )
        for p in div.params:
            if not base.is_unit(p):
                raise NotAUnit("division-algebra parameters must be units")
        self.base = base
        self.n = n
        self.div = div
        self.standard = standard
        self.D = DivisionRing(div.kind, base, div.params)
        D = self.D
        if twist is None:
            twist = linalg.identity(n, D)
        twist = tuple(tuple(tuple(x) for x in row) for row in twist)
        if len(twist) != n or any(len(r) != n for r in twist):
            raise DomainError("twist must be an n x n matrix over D")
        self.twist = twist
        tu = theta_transpose(twist, D)
        if self._mat_eq(tu, twist):
            self.twist_sign = 1
        elif self._mat_eq(tu, self.mat_neg(twist)):
            self.twist_sign = -1
        else:
            raise DomainError("twist must satisfy theta(u)^T = +u or -u")
        self.twist_inv = mat_inverse(twist, D)
        self.zero = linalg.zeros(n, n, D)
        self.one = linalg.identity(n, D)

    def __eq__(self, other):
        return (
            isinstance(other, InvolutiveAlgebra)
            and self.base == other.base
            and self.n == other.n
            and self.div == other.div
            and self.standard == other.standard
            and self.twist == other.twist
        )

    def __hash__(self):
        return hash((self.n, self.div.kind, self.standard))

    def __repr__(self):
        return (
            f"InvolutiveAlgebra(n={self.n}, {self.div.kind}, {self.standard}, "
            f"twist_sign={self.twist_sign:+d}, base={self.base!r})"
        )

    # -- matrix arithmetic over D
    def _mat_eq(self, X, Y) -> bool:
        D = self.D
        return all(D.is_zero(D.sub(x, y)) for rx, ry in zip(X, Y) for x, y in zip(rx, ry))

    def mat_neg(self, X):
        return linalg.mat_map(self.D.neg, X)

    def add(self, X, Y):
        return linalg.mat_add(X, Y, self.D)

    def sub(self, X, Y):
        D = self.D
        return tuple(tuple(D.sub(x, y) for x, y in zip(r, s)) for r, s in zip(X, Y))

    def neg(self, X):
        return self.mat_neg(X)

    def mul(self, X, Y):
        return linalg.mat_mul(X, Y, self.D)

    def is_zero(self, X) -> bool:
        D = self.D
        return all(D.is_zero(x) for row in X for x in row)

    def eq(self, X, Y) -> bool:
        return self._mat_eq(X, Y)

    def scalar(self, c):
        """Image of a base element (central)."""
        D = self.D
        return tuple(
            tuple(D.scalar(c) if i == j else D.zero for j in range(self.n))
            for i in range(self.n)
        )

    def from_fraction(self, r):
        return self.scalar(self.base.from_fraction(r))

    def scale(self, c, X):
        """Multiply by a base element ``c``."""
        D = self.D
        return linalg.mat_map(lambda x: D.scale(c, x), X)

    def from_d(self, x):
        """``x * I`` for a ``D`` element ``x``."""
        D = self.D
        return tuple(
            tuple(x if i == j else D.zero for j in range(self.n)) for i in range(self.n)
        )

    def involution(self, X):
        D = self.D
        return self.mul(self.twist_inv, self.mul(theta_transpose(X, D), self.twist))

    def is_symmetric(self, X) -> bool:
        """``sigma(X) == X``, tested as ``theta(X)^T u == u X``."""
        D = self.D
        return self._mat_eq(self.mul(theta_transpose(X, D), self.twist), self.mul(self.twist, X))

    def inv(self, X):
        return mat_inverse(X, self.D)

    def is_unit(self, X) -> bool:
        return linalg.is_invertible(self.regular_matrix([[X]]), self.base)

    def regular_matrix(self, blocks) -> tuple:
        """Regular representation over the base of a block matrix with
        algebra-element entries, as a base-algebra matrix."""
        D = self.D
        rows = []
        for brow in blocks:
            for i in range(self.n):
                for r in range(D.dim):
                    row = []
                    for X in brow:
                        for j in range(self.n):
                            L = D.left_regular(X[i][j])
                            row.extend(L[r])
                    rows.append(tuple(row))
        return tuple(rows)

    # -- symmetric elements
    @cached_property
    def theta_hermitian_basis(self) -> tuple:
        """Base-basis of ``{Y : theta(Y)^T = s Y}`` for the twist sign s."""
        D, n, s = self.D, self.n, self.twist_sign
        basis = D.basis()
        diag_gens = [e for e in basis if D.conj(e) == (e if s == 1 else D.neg(e))]
        out = []
        for i in range(n):
            for e in diag_gens:
                out.append(self._matrix_with({(i, i): e}))
        for i in range(n):
            for j in range(i + 1, n):
                for e in basis:
                    te = D.conj(e)
                    out.append(self._matrix_with({(i, j): e, (j, i): te if s == 1 else D.neg(te)}))
        return tuple(out)

    @cached_property
    def sym_basis(self) -> tuple:
        """Base-basis of ``Sym(A, sigma) = u^{-1} {Y : theta(Y)^T = s Y}``."""
        return tuple(self.mul(self.twist_inv, Y) for Y in self.theta_hermitian_basis)

    def _matrix_with(self, entries: dict):
        D = self.D
        return tuple(
            tuple(entries.get((i, j), D.zero) for j in range(self.n)) for i in range(self.n)
        )

    def sym_element(self, coeffs: Sequence):
        """Base-linear combination of :attr:`sym_basis`."""
        acc = self.zero
        for c, B in zip(coeffs, self.sym_basis):
            acc = self.add(acc, self.scale(c, B))
        return acc

    # -- classification
    def is_split_at(self, alpha: Ordering) -> bool:
        """Whether ``D`` becomes a matrix algebra over the real closure."""
        if self.div.kind == BASE:
            return True
        if self.div.kind == QUADRATIC:
            return alpha.sign(self.div.params[0]) > 0
        a, b = self.div.params
        return alpha.sign(a) > 0 or alpha.sign(b) > 0

    def type_at(self, alpha: Ordering) -> InvolutionType:
        self._check_ordering(alpha)
        kind = self.div.kind
        if kind == QUADRATIC:
            d = self.div.params[0]
            if alpha.sign(d) < 0:
                return InvolutionType.UNITARY
            return InvolutionType.UNITARY_SPLIT
        if kind == BASE:
            return InvolutionType.ORTHOGONAL if self.twist_sign == 1 else InvolutionType.SYMPLECTIC
        # the canonical quaternion involution is symplectic; a skew twist flips it
        return InvolutionType.SYMPLECTIC if self.twist_sign == 1 else InvolutionType.ORTHOGONAL

    def is_nil(self, alpha: Ordering) -> bool:
        t = self.type_at(alpha)
        if t is InvolutionType.UNITARY_SPLIT:
            return True
        split = self.is_split_at(alpha)
        if t is InvolutionType.SYMPLECTIC:
            return split
        if t is InvolutionType.ORTHOGONAL:
            return not split
        return False

    def nil_set(self) -> tuple[Ordering, ...]:
        return tuple(a for a in self.base.orderings if self.is_nil(a))

    def n_alpha(self, alpha: Ordering) -> int:
        """Matrix size of ``A`` over the residue division algebra at alpha."""
        if self.div.kind == QUATERNION and self.is_split_at(alpha):
            return 2 * self.n
        return self.n

    @property
    def degree(self) -> int:
        return 2 * self.n if self.div.kind == QUATERNION else self.n

    @property
    def center_kind(self) -> str:
        return "quadratic" if self.div.kind == QUADRATIC else "base"

    def _check_ordering(self, alpha: Ordering):
        if alpha.algebra != self.base:
            raise DomainError("ordering does not belong to the algebra's base")

    # -- base change
    def extend(self, E: RelativeEtale) -> "InvolutiveAlgebra":
        """``A (x) T`` with involution ``sigma (x) id`` over ``T = E.total``."""
        if E.base != self.base:
            raise DomainError("extension is over a different base")
        params = tuple(E.embed(p) for p in self.div.params)
        twist = self.embed_matrix(self.twist, E)
        return InvolutiveAlgebra(
            E.total, self.n, DivisionSpec(self.div.kind, params), self.standard, twist
        )

    def embed_matrix(self, X, E: RelativeEtale):
        return tuple(tuple(tuple(E.embed(c) for c in x) for x in row) for row in X)

    def same_shape(self, other: "InvolutiveAlgebra") -> bool:
        return (
            self.n == other.n
            and self.div.kind == other.div.kind
            and self.standard == other.standard
        )


def type_at(A: InvolutiveAlgebra, alpha: Ordering) -> InvolutionType:
    return A.type_at(alpha)


def nil_set(A: InvolutiveAlgebra) -> tuple[Ordering, ...]:
    return A.nil_set()


def degree(A: InvolutiveAlgebra) -> int:
    return A.degree


def center(A: InvolutiveAlgebra) -> str:
    if A.div.kind == QUADRATIC:
        return f"quadratic extension of the base by sqrt(d), d = {A.div.params[0]!r}"
    return "base"


def product_algebra(components: Sequence[InvolutiveAlgebra]) -> InvolutiveAlgebra:
    """Direct product of same-shape algebras over absolute bases: the base is
    the product of the component bases and every coordinate is concatenated."""
    first = components[0]
    for A in components[1:]:
        if not A.same_shape(first):
            raise DomainError("component algebras must share n, kind and standard")
    for A in components:
        if A.base.base is not None:
            raise DomainError("direct products are built over absolute bases")
    base = EtaleAlgebra([F for A in components for F in A.base.factors])
    params = tuple(
        _concat([A.div.params[k] for A in components]) for k in range(len(first.div.params))
    )
    n, dim = first.n, first.D.dim
    twist = tuple(
        tuple(
            tuple(_concat([A.twist[i][j][c] for A in components]) for c in range(dim))
            for j in range(n)
        )
        for i in range(n)
    )
    return InvolutiveAlgebra(base, n, DivisionSpec(first.div.kind, params), first.standard, twist)


def _concat(parts) -> tuple:
    return tuple(x for p in parts for x in p)
