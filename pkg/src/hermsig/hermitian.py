"""Epsilon-hermitian forms on free modules over an involutive algebra."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from . import linalg
from .algebras import InvolutiveAlgebra, product_algebra, _concat
from .numerics import DomainError
from .quadratic import QuadForm

__all__ = [
    "HermForm",
    "diagonal_form",
    "orth_sum",
    "q_tensor_h",
    "hyperbolic_herm",
    "nonsingular",
    "direct_product",
    "lagrangian_witness",
    "find_lagrangian",
    "is_hyperbolic",
]


@dataclass(frozen=True, eq=False)
class HermForm:
    """Gram matrix ``H`` with ``sigma(H[j][i]) == epsilon * H[i][j]``."""

    algebra: InvolutiveAlgebra
    epsilon: int
    gram: tuple

    def __post_init__(self):
        if self.epsilon not in (1, -1):
            raise DomainError("epsilon must be +1 or -1")
        gram = tuple(tuple(row) for row in self.gram)
        if any(len(row) != len(gram) for row in gram):
            raise DomainError("Gram matrix must be square")
        object.__setattr__(self, "gram", gram)
        A = self.algebra
        for i in range(len(gram)):
            for j in range(i, len(gram)):
                lhs = A.involution(gram[j][i])
                rhs = gram[i][j] if self.epsilon == 1 else A.neg(gram[i][j])
                if not A.eq(lhs, rhs):
                    raise DomainError(
                        f"entry ({i},{j}) breaks the {self.epsilon:+d}-hermitian symmetry"
                    )

    @property
    def dim(self) -> int:
        return len(self.gram)

    def __eq__(self, other):
        return (
            isinstance(other, HermForm)
            and self.algebra == other.algebra
            and self.epsilon == other.epsilon
            and self.gram == other.gram
        )

    def __add__(self, other: "HermForm") -> "HermForm":
        return orth_sum(self, other)

    def __neg__(self) -> "HermForm":
        A = self.algebra
        return HermForm(A, self.epsilon, linalg.mat_map(A.neg, self.gram))

    def __rmul__(self, q: QuadForm) -> "HermForm":
        return q_tensor_h(q, self)


def diagonal_form(A: InvolutiveAlgebra, entries: Sequence, epsilon: int = 1) -> HermForm:
    for k, a in enumerate(entries):
        target = a if epsilon == 1 else A.neg(a)
        if not A.eq(A.involution(a), target):
            raise DomainError(f"diagonal entry {k} is not {'symmetric' if epsilon == 1 else 'skew'}")
    m = len(entries)
    gram = tuple(
        tuple(entries[i] if i == j else A.zero for j in range(m)) for i in range(m)
    )
    return HermForm(A, epsilon, gram)


def _same(*forms: HermForm) -> tuple[InvolutiveAlgebra, int]:
    A, eps = forms[0].algebra, forms[0].epsilon
    for h in forms[1:]:
        if h.algebra != A:
            raise DomainError("forms live over different algebras")
        if h.epsilon != eps:
            raise DomainError("forms have different epsilon")
    return A, eps


def orth_sum(*forms: HermForm) -> HermForm:
    A, eps = _same(*forms)
    zero = A.zero
    n = sum(h.dim for h in forms)
    out = [[zero] * n for _ in range(n)]
    off = 0
    for h in forms:
        for i, row in enumerate(h.gram):
            for j, x in enumerate(row):
                out[off + i][off + j] = x
        off += h.dim
    return HermForm(A, eps, tuple(tuple(r) for r in out))


def q_tensor_h(q: QuadForm, h: HermForm) -> HermForm:
    """Kronecker product with base scalars acting centrally."""
    A = h.algebra
    if q.base != A.base:
        raise DomainError("quadratic form and algebra live over different bases")
    gram = linalg.kron(q.gram, h.gram, A.scale)
    return HermForm(A, h.epsilon, gram)


def hyperbolic_herm(m: int, A: InvolutiveAlgebra, epsilon: int = 1) -> HermForm:
    if m < 1:
        raise DomainError("hyperbolic rank must be positive")
    plane_low = A.one if epsilon == 1 else A.neg(A.one)
    n = 2 * m
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i // 2 == j // 2 and i != j:
                row.append(A.one if i % 2 == 0 else plane_low)
            else:
                row.append(A.zero)
        rows.append(tuple(row))
    return HermForm(A, epsilon, tuple(rows))


def nonsingular(h: HermForm) -> bool:
    """Invertibility of the Gram matrix over ``A``, via the regular
    representation of ``D`` over each base factor."""
    if h.dim == 0:
        return True
    A = h.algebra
    return linalg.is_invertible(A.regular_matrix(h.gram), A.base)


def direct_product(forms: Sequence[HermForm]) -> HermForm:
    """The form over the product algebra whose components are ``forms``."""
    if not forms:
        raise DomainError("direct product of no forms")
    m, eps = forms[0].dim, forms[0].epsilon
    for h in forms:
        if h.dim != m or h.epsilon != eps:
            raise DomainError("component forms must share rank and epsilon")
    P = product_algebra([h.algebra for h in forms])
    n, dim = P.n, P.D.dim
    gram = tuple(
        tuple(
            tuple(
                tuple(
                    tuple(_concat([h.gram[r][c][i][j][k] for h in forms]) for k in range(dim))
                    for j in range(n)
                )
                for i in range(n)
            )
            for c in range(m)
        )
        for r in range(m)
    )
    return HermForm(P, eps, gram)


def lagrangian_witness(h: HermForm, indices: Sequence[int]) -> bool:
    """True iff ``h`` is nonsingular and the coordinate submodule spanned by
    ``indices`` (half the rank) is totally isotropic; then ``h`` is
    hyperbolic since 2 is invertible."""
    idx = list(indices)
    if 2 * len(idx) != h.dim or len(set(idx)) != len(idx):
        return False
    A = h.algebra
    if not all(A.is_zero(h.gram[i][j]) for i in idx for j in idx):
        return False
    return nonsingular(h)


def find_lagrangian(h: HermForm) -> Optional[tuple[int, ...]]:
    """Search for a totally isotropic coordinate submodule of half rank."""
    if h.dim % 2:
        return None
    A = h.algebra
    m = h.dim
    zero_diag = [i for i in range(m) if A.is_zero(h.gram[i][i])]
    compatible = {
        i: {j for j in zero_diag if A.is_zero(h.gram[i][j])} for i in zero_diag
    }
    want = m // 2
    chosen: list[int] = []

    def extend(start: int) -> bool:
        if len(chosen) == want:
            return True
        for pos in range(start, len(zero_diag)):
            i = zero_diag[pos]
            if all(i in compatible[j] for j in chosen):
                chosen.append(i)
                if extend(pos + 1):
                    return True
                chosen.pop()
            if len(zero_diag) - pos < want - len(chosen):
                break
        return False

    if not extend(0):
        return None
    found = tuple(chosen)
    return found if nonsingular(h) else None


def is_hyperbolic(h: HermForm) -> bool:
    """Constructive hyperbolicity: a coordinate Lagrangian exists."""
    return find_lagrangian(h) is not None
