"""Symmetric bilinear forms over an étale base and their signatures."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from . import linalg
from .etale import EtaleAlgebra, Ordering, RelativeEtale
from .numerics import DomainError, NotAUnit

__all__ = [
    "QuadForm",
    "diagonal",
    "diagonalize",
    "signature_at",
    "signature_via_diagonal",
    "pfister",
    "hyperbolic",
    "orth_sum",
    "tensor",
    "scale",
    "transfer_quadratic",
    "nonsingular",
]


@dataclass(frozen=True, eq=False)
class QuadForm:
    base: EtaleAlgebra
    gram: tuple

    def __post_init__(self):
        gram = tuple(tuple(row) for row in self.gram)
        if any(len(row) != len(gram) for row in gram):
            raise DomainError("Gram matrix must be square")
        if not linalg.is_symmetric(gram, self.base):
            raise DomainError("Gram matrix is not symmetric")
        object.__setattr__(self, "gram", gram)

    @property
    def dim(self) -> int:
        return len(self.gram)

    def __eq__(self, other):
        return (
            isinstance(other, QuadForm)
            and self.base == other.base
            and self.gram == other.gram
        )

    def __add__(self, other: "QuadForm") -> "QuadForm":
        return orth_sum(self, other)

    def __mul__(self, other: "QuadForm") -> "QuadForm":
        if not isinstance(other, QuadForm):
            return NotImplemented  # q * h is handled by HermForm.__rmul__
        return tensor(self, other)

    def __neg__(self) -> "QuadForm":
        R = self.base
        return QuadForm(R, linalg.mat_map(R.neg, self.gram))

    def is_diagonal(self) -> bool:
        R = self.base
        return all(
            R.is_zero(x) for i, row in enumerate(self.gram) for j, x in enumerate(row) if i != j
        )

    def signature(self, alpha: Ordering) -> int:
        return signature_at(self, alpha)


def diagonal(base: EtaleAlgebra, entries: Sequence) -> QuadForm:
    n = len(entries)
    gram = tuple(
        tuple(entries[i] if i == j else base.zero for j in range(n)) for i in range(n)
    )
    return QuadForm(base, gram)


def _check_same_base(*forms: QuadForm) -> EtaleAlgebra:
    base = forms[0].base
    for q in forms[1:]:
        if q.base != base:
            raise DomainError("quadratic forms live over different bases")
    return base


def diagonalize(q: QuadForm):
    """Diagonal form ``D`` and witness ``P`` with ``P^T q P = D``, computed in
    each factor (treated as a field, per the irreducibility assertion)."""
    R = q.base
    n = q.dim
    diags, Ps = [], []
    for i, F in enumerate(R.factors):
        Gi = tuple(tuple(x[i] for x in row) for row in q.gram)
        try:
            d, P = linalg.diagonalize_symmetric(Gi, F)
        except NotAUnit as exc:
            raise NotAUnit(
                f"factor {i} is not a field (zero-divisor pivot); "
                "it was asserted irreducible",
                exc.split,
            ) from None
        diags.append(d)
        Ps.append(P)
    D = diagonal(R, [tuple(diags[i][k] for i in range(len(R.factors))) for k in range(n)])
    P = tuple(
        tuple(tuple(Ps[i][r][c] for i in range(len(R.factors))) for c in range(n))
        for r in range(n)
    )
    return D, P


def _local_gram(q: QuadForm, alpha: Ordering):
    if alpha.algebra != q.base:
        raise DomainError("ordering does not belong to the base of the form")
    return tuple(tuple(alpha.project(x) for x in row) for row in q.gram)


def signature_at(q: QuadForm, alpha: Ordering) -> int:
    """Sylvester signature at ``alpha``; zero diagonal entries count 0."""
    return linalg.sylvester(_local_gram(q, alpha), alpha.place)


def signature_via_diagonal(q: QuadForm, alpha: Ordering) -> int:
    """Signature read off the global diagonalisation: sum of signs of the
    diagonal entries at ``alpha``."""
    D, _ = diagonalize(q)
    return sum(alpha.sign(D.gram[k][k]) for k in range(D.dim))


def nonsingular(q: QuadForm) -> bool:
    return linalg.is_invertible(q.gram, q.base)


def orth_sum(*forms: QuadForm) -> QuadForm:
    R = _check_same_base(*forms)
    return QuadForm(R, linalg.block_diag([q.gram for q in forms], R))


def tensor(q1: QuadForm, q2: QuadForm) -> QuadForm:
    R = _check_same_base(q1, q2)
    return QuadForm(R, linalg.kron(q1.gram, q2.gram, R.mul))


def scale(q: QuadForm, lam) -> QuadForm:
    R = q.base
    if not R.is_unit(lam):
        raise NotAUnit("scaling factor must be a unit")
    return QuadForm(R, linalg.mat_map(lambda x: R.mul(lam, x), q.gram))


def hyperbolic(base: EtaleAlgebra, n: int = 1) -> QuadForm:
    """``n`` copies of the hyperbolic plane ``<1, -1>``."""
    return diagonal(base, [base.one, base.neg(base.one)] * n)


def pfister(base: EtaleAlgebra, bs: Sequence) -> QuadForm:
    """``<<b_1, ..., b_k>> = <1, b_1> x ... x <1, b_k>`` as a diagonal form.

    Entries are listed by subsets in binary order, so the form equals the
    iterated tensor product entrywise.
    """
    for b in bs:
        if not base.is_unit(b):
            raise NotAUnit("Pfister slots must be units")
    entries = [base.one]
    for b in bs:
        entries = [e for x in entries for e in (x, base.mul(x, b))]
    return diagonal(base, entries)


def pfister_subsets(base: EtaleAlgebra, bs: Sequence) -> list:
    """Products over all subsets (the same multiset as :func:`pfister`)."""
    out = []
    for k in range(len(bs) + 1):
        for sub in combinations(bs, k):
            acc = base.one
            for b in sub:
                acc = base.mul(acc, b)
            out.append(acc)
    return out


def transfer_quadratic(E: RelativeEtale, q: QuadForm) -> QuadForm:
    """Scharlau transfer along ``Tr_{T/K}``: Gram indexed by (module index,
    power-basis index), entry ``Tr(y^u q_kl y^v)``."""
    T, K = E.total, E.base
    if q.base != T:
        raise DomainError("form does not live over the extension's total algebra")
    powers = [T.one]
    y = T.gen()
    for _ in range(E.degree - 1):
        powers.append(T.mul(powers[-1], y))
    m = q.dim
    gram = []
    for k in range(m):
        for u in range(E.degree):
            row = []
            for l in range(m):
                left = T.mul(powers[u], q.gram[k][l])
                for v in range(E.degree):
                    row.append(T.trace(T.mul(left, powers[v])))
            gram.append(tuple(row))
    return QuadForm(K, tuple(gram))
