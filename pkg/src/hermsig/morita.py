"""Hermitian Morita equivalence at desk scale.

Forms over ``(M_n(D), Int(u^{-1}) o theta^T)`` are flattened to forms over
``(D, theta)`` by multiplying every block by ``u``; the inverse step inflates
a form over ``D`` into ``M_l(D)`` with another twist.  A Morita context
between two matrix algebras over the same ``D`` composes the two steps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .algebras import QUADRATIC, InvolutiveAlgebra
from .etale import RelativeEtale
from .hermitian import HermForm
from .numerics import DomainError

__all__ = [
    "division_algebra",
    "reduced_gram",
    "reduce_to_division",
    "inflate",
    "MoritaContext",
    "functor_F",
    "product_of_forms",
    "AdmittanceError",
    "scalar_extend",
    "amplify",
    "transportable",
    "BrcomReport",
    "check_brcom_square",
]


class AdmittanceError(DomainError):
    """The left form does not admit the algebra acting on its module."""


def division_algebra(A: InvolutiveAlgebra) -> InvolutiveAlgebra:
    """``(D, theta)`` as an involutive algebra with ``n = 1`` and no twist."""
    return InvolutiveAlgebra(A.base, 1, A.div, A.standard)


def reduced_gram(h: HermForm) -> tuple[tuple, int]:
    """Flattened Gram over ``D`` (block ``(p, q)`` is ``u H_pq``) and the
    resulting sign ``epsilon * s``."""
    A = h.algebra
    n = A.n
    rows = []
    for p in range(h.dim):
        blocks = [A.mul(A.twist, h.gram[p][q]) for q in range(h.dim)]
        for i in range(n):
            rows.append(tuple(B[i][j] for B in blocks for j in range(n)))
    return tuple(rows), h.epsilon * A.twist_sign


def reduce_to_division(h: HermForm) -> HermForm:
    G, eps = reduced_gram(h)
    Dalg = division_algebra(h.algebra)
    return HermForm(Dalg, eps, tuple(tuple(((x,),) for x in row) for row in G))


def inflate(g: HermForm, target: InvolutiveAlgebra) -> HermForm:
    """Inverse of :func:`reduce_to_division` into ``target``: blocks of size
    ``l`` become ``v^{-1} B_IJ``; needs ``l`` to divide the rank of ``g``."""
    if g.algebra.n != 1:
        raise DomainError("inflate expects a form over the division algebra")
    if target.div != g.algebra.div or target.base != g.algebra.base:
        raise DomainError("target algebra has a different division algebra")
    ell = target.n
    N = g.dim
    if N % ell:
        raise DomainError(f"rank {N} is not divisible by the target size {ell}")
    flat = [[g.gram[r][c][0][0] for c in range(N)] for r in range(N)]
    m = N // ell
    gram = []
    for I in range(m):
        row = []
        for J in range(m):
            B = tuple(
                tuple(flat[I * ell + i][J * ell + j] for j in range(ell)) for i in range(ell)
            )
            row.append(target.mul(target.twist_inv, B))
        gram.append(tuple(row))
    return HermForm(target, g.epsilon * target.twist_sign, tuple(gram))


@dataclass(frozen=True, eq=False)
class MoritaContext:
    """Equivalence between forms over ``source`` and over ``target``.

    ``delta`` multiplies epsilon.  For the first kind it is the product of the
    twist signs, so it is +1 exactly when both involutions have the same
    type.  For unitary algebras it is fixed to +1; when the twist signs
    differ the flattened Gram is multiplied by the skew central scalar
    ``scalar`` (``sqrt d``, or its inverse for a reversed context) to keep
    epsilon.
    """

    source: InvolutiveAlgebra
    target: InvolutiveAlgebra
    inverted: bool = False
    delta: int = field(init=False)
    scalar: Optional[tuple] = field(init=False)

    def __post_init__(self):
        s, t = self.source, self.target
        if s.base != t.base or s.div != t.div or s.standard != t.standard:
            raise DomainError("Morita contexts need a common base and division algebra")
        flip = s.twist_sign * t.twist_sign
        if s.div.kind == QUADRATIC:
            object.__setattr__(self, "delta", 1)
            sqrt_d = None
            if flip == -1:
                R = s.base
                c = R.inv(s.div.params[0]) if self.inverted else R.one
                sqrt_d = (R.zero, c)
            object.__setattr__(self, "scalar", sqrt_d)
        else:
            object.__setattr__(self, "delta", flip)
            object.__setattr__(self, "scalar", None)

    def reverse(self) -> "MoritaContext":
        return MoritaContext(self.target, self.source, not self.inverted)

    def type_rule_holds(self) -> bool:
        """delta = +1 iff the first-kind types agree at every ordering."""
        if self.source.div.kind == QUADRATIC:
            return self.delta == 1
        for alpha in self.source.base.orderings:
            same = self.source.type_at(alpha) == self.target.type_at(alpha)
            if same != (self.delta == 1):
                return False
        return True

    def extend(self, E: RelativeEtale) -> "MoritaContext":
        return MoritaContext(self.source.extend(E), self.target.extend(E), self.inverted)


def functor_F(ctx: MoritaContext, h: HermForm) -> HermForm:
    if h.algebra != ctx.source:
        raise DomainError("form does not live over the context's source algebra")
    g = reduce_to_division(h)
    if ctx.scalar is not None:
        Dalg = g.algebra
        c = Dalg.from_d(ctx.scalar)
        g = HermForm(
            Dalg,
            -g.epsilon,
            tuple(tuple(Dalg.mul(c, x) for x in row) for row in g.gram),
        )
    out = inflate(g, ctx.target)
    if out.epsilon != h.epsilon * ctx.delta:
        raise DomainError("epsilon bookkeeping failed")  # pragma: no cover
    return out


def amplify(h: HermForm, k: int) -> HermForm:
    """Orthogonal sum of ``k`` copies of ``h``."""
    from .hermitian import orth_sum

    return orth_sum(*([h] * k)) if k > 1 else h


def transportable(ctx: MoritaContext, h: HermForm) -> HermForm:
    """``h`` amplified so that its flattened rank is divisible by the target
    size (copies of a reference form keep its signs)."""
    from math import gcd

    N = h.dim * ctx.source.n
    ell = ctx.target.n
    return amplify(h, ell // gcd(N, ell))


def _scalar_times(b, X, A: InvolutiveAlgebra):
    """``b X`` for ``b`` an r x r base matrix and ``X`` an r x r matrix of
    algebra elements."""
    r = len(b)
    out = []
    for i in range(r):
        row = []
        for j in range(r):
            acc = A.zero
            for k in range(r):
                acc = A.add(acc, A.scale(b[i][k], X[k][j]))
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def _times_scalar(X, b, A: InvolutiveAlgebra):
    r = len(b)
    out = []
    for i in range(r):
        row = []
        for j in range(r):
            acc = A.zero
            for k in range(r):
                acc = A.add(acc, A.scale(b[k][j], X[i][k]))
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def _base_matrix(X) -> tuple:
    """Base-field matrix of an element of ``M_r(R)`` (base kind)."""
    return tuple(tuple(x[0] for x in row) for row in X)


def product_of_forms(phi: HermForm, psi: HermForm) -> HermForm:
    """The product of ``phi`` (over ``(A, sigma)`` on ``A^r``) and ``psi``
    (over ``B = (M_r(R), tau)`` on ``B^p``), a form on ``A^{rp}``.

    ``B`` acts on ``A^r`` by matrices; ``phi`` must admit it, i.e.
    ``b^T Phi = Phi tau(b)`` for the matrix units ``b``.  Block ``(a, b)`` of
    the product is ``Phi * Psi_ab``.
    """
    A, B = phi.algebra, psi.algebra
    r = phi.dim
    if B.div.kind != "base" or B.n != r or B.base != A.base:
        raise DomainError("psi must live over M_r of the common base, r = rank of phi")
    R = A.base
    Phi = phi.gram
    for i in range(r):
        for j in range(r):
            unit = tuple(
                tuple((R.one if (k, l) == (i, j) else R.zero,) for l in range(r))
                for k in range(r)
            )
            tau_unit = _base_matrix(B.involution(unit))
            unit_t = tuple(tuple(unit[l][k][0] for l in range(r)) for k in range(r))
            lhs = _scalar_times(unit_t, Phi, A)
            rhs = _times_scalar(Phi, tau_unit, A)
            if any(not A.eq(x, y) for rx, ry in zip(lhs, rhs) for x, y in zip(rx, ry)):
                raise AdmittanceError(f"admittance fails on the matrix unit E_{i}{j}")
    p = psi.dim
    gram = [[None] * (p * r) for _ in range(p * r)]
    for a in range(p):
        for b in range(p):
            blk = _times_scalar(Phi, _base_matrix(psi.gram[a][b]), A)
            for i in range(r):
                for j in range(r):
                    gram[a * r + i][b * r + j] = blk[i][j]
    return HermForm(A, phi.epsilon * psi.epsilon, tuple(tuple(row) for row in gram))


def scalar_extend(h: HermForm, E: RelativeEtale) -> HermForm:
    """The same Gram viewed over ``A (x) T``."""
    A = h.algebra
    AT = A.extend(E)
    gram = tuple(tuple(A.embed_matrix(x, E) for x in row) for row in h.gram)
    return HermForm(AT, h.epsilon, gram)


@dataclass
class BrcomReport:
    rows: list  # (ordering label, path-1 signature, path-2 signature)

    @property
    def ok(self) -> bool:
        return all(a == b for _, a, b in self.rows)

    @property
    def disagreements(self) -> list:
        return [row for row in self.rows if row[1] != row[2]]


def check_brcom_square(ctx: MoritaContext, E: RelativeEtale, h: HermForm, eta) -> BrcomReport:
    """Signatures of ``F(h) (x) T`` and ``F_T(h (x) T)`` at every ordering of
    T, each measured against the reference form transported the same way."""
    from .signatures import ReferenceForm, eta_signature

    ref = transportable(ctx, eta.form)
    h1 = scalar_extend(functor_F(ctx, h), E)
    eta1 = ReferenceForm(scalar_extend(functor_F(ctx, ref), E))
    ctx_t = ctx.extend(E)
    h2 = functor_F(ctx_t, scalar_extend(h, E))
    eta2 = ReferenceForm(functor_F(ctx_t, scalar_extend(ref, E)))
    rows = []
    for gamma in E.total.orderings:
        rows.append(
            (gamma.label(), eta_signature(h1, gamma, eta1), eta_signature(h2, gamma, eta2))
        )
    return BrcomReport(rows)

