"""Trace transfer of hermitian forms along étale extensions and the
Knebusch trace formula checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

from .algebras import InvolutiveAlgebra
from .etale import Ordering, RelativeEtale, extensions_of_ordering, pullback_check
from .hermitian import HermForm, diagonal_form
from .morita import scalar_extend
from .numerics import DomainError
from .quadratic import QuadForm, diagonal, signature_at, transfer_quadratic
from .signatures import ReferenceForm, eta_signature

__all__ = [
    "TransferContext",
    "SplitReport",
    "KTFReport",
    "ExtendNilReport",
    "transfer_hermitian",
    "split_at",
    "verify_ktf_commutative",
    "verify_ktf_hermitian",
    "verify_extend_nil",
    "zero_plus_weakly_hyperbolic_check",
]


class TransferContext:
    """An algebra over ``K``, an étale extension ``T`` of ``K`` and ``A (x) T``."""

    def __init__(self, algebra: InvolutiveAlgebra, extension: RelativeEtale):
        if extension.base != algebra.base:
            raise DomainError("extension is over a different base than the algebra")
        self.algebra = algebra
        self.extension = extension
        self.extended_algebra = algebra.extend(extension)

    def __repr__(self):
        return f"TransferContext({self.algebra!r}, {self.extension!r})"

    @cached_property
    def powers(self) -> list:
        T = self.extension.total
        out = [T.one]
        y = T.gen()
        for _ in range(2 * self.extension.degree - 2):
            out.append(T.mul(out[-1], y))
        return out

    def extended_reference(self, eta: ReferenceForm) -> ReferenceForm:
        return ReferenceForm(scalar_extend(eta.form, self.extension))


def transfer_hermitian(ctx: TransferContext, h: HermForm) -> HermForm:
    """Gram over ``A`` indexed by (module index, power of y); each entry
    applies ``Tr_{T/K}`` to the coordinates of ``y^u H_kl y^v``."""
    if h.algebra != ctx.extended_algebra:
        raise DomainError("form does not live over the context's extended algebra")
    A = ctx.algebra
    T = ctx.extension.total
    deg = ctx.extension.degree
    pw = ctx.powers

    def tr_entry(X, e):
        return tuple(
            tuple(tuple(T.trace(T.mul(pw[e], c)) for c in x) for x in row) for row in X
        )

    m = h.dim
    gram = []
    for k in range(m):
        for u in range(deg):
            row = []
            for l in range(m):
                for v in range(deg):
                    row.append(tr_entry(h.gram[k][l], u + v))
            gram.append(tuple(row))
    return HermForm(A, h.epsilon, tuple(gram))


@dataclass
class SplitReport:
    alpha: Ordering
    r: int
    t: int
    extensions: tuple

    def __post_init__(self):
        if not (self.r <= self.t and self.r == len(self.extensions)):
            raise ValueError("inconsistent split report")  # pragma: no cover


def split_at(ctx_or_ext, alpha: Ordering) -> SplitReport:
    E = ctx_or_ext.extension if isinstance(ctx_or_ext, TransferContext) else ctx_or_ext
    gammas = extensions_of_ordering(E, alpha)
    return SplitReport(alpha, len(gammas), E.degree, tuple(gammas))


@dataclass
class KTFReport:
    alpha: str
    lhs: int
    rhs: int
    r: int
    t: int
    per_gamma: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs

    def as_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "r": self.r,
            "t": self.t,
            "per_gamma": self.per_gamma,
            "ok": self.ok,
        }


def verify_ktf_commutative(E: RelativeEtale, q: QuadForm, alpha: Ordering) -> KTFReport:
    """``sign_alpha(Tr* q) == sum over gamma above alpha of sign_gamma(q)``."""
    lhs = signature_at(transfer_quadratic(E, q), alpha)
    split = split_at(E, alpha)
    per = [(g.label(), signature_at(q, g)) for g in split.extensions]
    return KTFReport(alpha.label(), lhs, sum(v for _, v in per), split.r, split.t, per)


def verify_ktf_hermitian(
    ctx: TransferContext,
    h: HermForm,
    alpha: Ordering,
    eta: ReferenceForm,
    eta_t: Optional[ReferenceForm] = None,
) -> KTFReport:
    """``sign^eta_alpha(Tr* h) == sum_gamma sign^{eta (x) T}_gamma(h)``."""
    if eta_t is None:
        eta_t = ctx.extended_reference(eta)
    lhs = eta_signature(transfer_hermitian(ctx, h), alpha, eta)
    split = split_at(ctx, alpha)
    per = [(g.label(), eta_signature(h, g, eta_t)) for g in split.extensions]
    return KTFReport(alpha.label(), lhs, sum(v for _, v in per), split.r, split.t, per)


@dataclass
class ExtendNilReport:
    alpha: str
    r: int
    trace_signature: int
    nil_below: bool
    nil_above: list
    restriction_pairs: list = field(default_factory=list)

    @property
    def counting_ok(self) -> bool:
        return self.r == self.trace_signature

    @property
    def nil_ok(self) -> bool:
        return all(x == self.nil_below for x in self.nil_above)

    @property
    def restriction_ok(self) -> bool:
        return all(a == b for a, b in self.restriction_pairs)

    @property
    def ok(self) -> bool:
        return self.counting_ok and self.nil_ok and self.restriction_ok


def verify_extend_nil(
    ctx: TransferContext,
    alpha: Ordering,
    eta: Optional[ReferenceForm] = None,
    forms: Sequence[HermForm] = (),
) -> ExtendNilReport:
    """Extension counting, Nil correspondence and, for each given form,
    ``sign^eta_alpha h == sign^{eta (x) T}_gamma (h (x) T)`` at every gamma."""
    E = ctx.extension
    T = E.total
    split = split_at(ctx, alpha)
    tr_sig = signature_at(transfer_quadratic(E, diagonal(T, [T.one])), alpha)
    AT = ctx.extended_algebra
    nil_above = [AT.is_nil(g) for g in split.extensions]
    pairs = []
    if eta is not None:
        eta_t = ctx.extended_reference(eta)
        for h in forms:
            below = eta_signature(h, alpha, eta)
            ht = scalar_extend(h, E)
            for g in split.extensions:
                pairs.append((below, eta_signature(ht, g, eta_t)))
    return ExtendNilReport(
        alpha.label(), split.r, tr_sig, ctx.algebra.is_nil(alpha), nil_above, pairs
    )


def zero_plus_weakly_hyperbolic_check(
    ctx: TransferContext, h: HermForm, alpha: Ordering, eta: ReferenceForm
) -> bool:
    """Non-real roots contribute nothing: the trace formula already matches
    summing over the ``r`` real extensions alone, and for a totally complex
    extension the transferred form has signature 0."""
    rep = verify_ktf_hermitian(ctx, h, alpha, eta)
    if not rep.ok:
        return False
    if rep.r == 0 and rep.lhs != 0:
        return False
    return all(pullback_check(ctx.extension, g, alpha) for g in split_at(ctx, alpha).extensions)


def unit_form(A: InvolutiveAlgebra) -> HermForm:
    return diagonal_form(A, [A.one])
