"""M-signatures, eta-signatures, reference forms and 2-power constructions.

The M-signature at an ordering is computed after flattening the form to
``(D, theta)``.  At the ordering the form is brought to a hermitian form for
a *positive* involution of the residue division algebra (one whose trace form
``x -> Trd(theta(x) x)`` is positive definite); its signature is then the
signature of the quadratic form ``x -> Trd(theta(x)^T G x)`` divided by
``dim D / (matrix size of D at the ordering)``.  When no such reformulation
exists every signature vanishes: those orderings make up Nil.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from . import linalg
from .algebras import BASE, QUADRATIC, QUATERNION, DivisionRing, InvolutiveAlgebra
from .etale import EtaleAlgebra, Ordering
from .hermitian import HermForm, diagonal_form, nonsingular, orth_sum, q_tensor_h
from .morita import reduced_gram
from .numerics import DomainError, isolate_roots, refine_root
from .quadratic import pfister

__all__ = [
    "Budget",
    "SearchExhausted",
    "local_case",
    "is_nil_for",
    "m_signature",
    "ReferenceForm",
    "eta_signature",
    "TotalSignature",
    "total_signature",
    "find_reference_form",
    "localizer",
    "find_two_power_form",
    "TwoPowerMatch",
    "two_power_multiple_match",
    "integer_solve",
]


@dataclass(frozen=True)
class Budget:
    """Search limits; enumeration order is deterministic."""

    height: int = 8
    pfister_length: int = 3
    max_m: int = 6
    max_candidates: int = 400


DEFAULT_BUDGET = Budget()


class SearchExhausted(RuntimeError):
    """A search ran out of budget without finding a witness."""


# ---------------------------------------------------------------------------
# local computation


def local_case(A: InvolutiveAlgebra, alpha: Ordering, epsilon: int = 1):
    """How ``epsilon``-hermitian forms over ``A`` are measured at ``alpha``.

    Returns None when all their signatures vanish, else ``(w, flip)``: left
    multiplication of the flattened Gram by the ``D`` element ``w`` (None for
    no change) yields a hermitian form for the positive involution
    ``x -> w theta(x) w^{-1}``, whose coordinate signs relative to ``theta``
    are ``flip``.
    """
    eps = epsilon * A.twist_sign
    kind = A.div.kind
    if kind == BASE:
        return (None, (1,)) if eps == 1 else None
    if kind == QUADRATIC:
        if alpha.sign(A.div.params[0]) > 0:
            return None
        if eps == 1:
            return (None, (1, -1))
        return ((0, 1), (1, -1))
    a, b = (alpha.sign(p) for p in A.div.params)
    if a < 0 and b < 0:
        return (None, (1, -1, -1, -1)) if eps == 1 else None
    if eps == 1:
        return None
    # split: twisting by the pure unit w whose conjugation is positive
    w = 1 if b > 0 and a < 0 else (2 if a > 0 and b < 0 else 3)
    flip = tuple(1 if c == 0 or c != w else -1 for c in range(4))
    return (tuple(1 if c == w else 0 for c in range(4)), flip)


def is_nil_for(A: InvolutiveAlgebra, alpha: Ordering, epsilon: int = 1) -> bool:
    return local_case(A, alpha, epsilon) is None


def _normaliser(A: InvolutiveAlgebra, alpha: Ordering) -> int:
    dim = A.D.dim
    if A.div.kind == QUATERNION and A.is_split_at(alpha):
        return dim // 2
    return dim


def m_signature(h: HermForm, alpha: Ordering) -> int:
    A = h.algebra
    A._check_ordering(alpha)
    case = local_case(A, alpha, h.epsilon)
    if case is None or h.dim == 0:
        return 0
    w, flip = case
    G, _ = reduced_gram(h)
    P = alpha.place
    Dl = DivisionRing(A.div.kind, P, tuple(alpha.project(p) for p in A.div.params))
    loc = [[tuple(alpha.project(c) for c in x) for x in row] for row in G]
    if w is not None:
        wl = tuple(P.one if c else P.zero for c in w)
        loc = [[Dl.mul(wl, x) for x in row] for row in loc]
    N = len(loc)
    dim = Dl.dim
    basis = Dl.basis()
    # theta'(e_r) = flip[r] e_r for the coordinate basis
    gram = [[None] * (N * dim) for _ in range(N * dim)]
    for p in range(N):
        for q in range(p, N):
            g = loc[p][q]
            for r in range(dim):
                left = Dl.mul(basis[r], g)
                if flip[r] < 0:
                    left = Dl.neg(left)
                for t in range(dim):
                    v = Dl.mul(left, basis[t])[0]
                    gram[p * dim + r][q * dim + t] = v
                    gram[q * dim + t][p * dim + r] = v
    total = linalg.sylvester(gram, P)
    c = _normaliser(A, alpha)
    if total % c:
        raise ArithmeticError("trace-form signature is not divisible by the normaliser")
    return total // c


# ---------------------------------------------------------------------------
# reference forms and eta-signatures


@dataclass(eq=False)
class ReferenceForm:
    """A form with nonzero M-signature at every ordering outside Nil."""

    form: HermForm
    signs: dict = field(init=False, repr=False)

    def __post_init__(self):
        A = self.form.algebra
        signs = {}
        for alpha in A.base.orderings:
            if is_nil_for(A, alpha, self.form.epsilon):
                signs[alpha] = 0
                continue
            s = m_signature(self.form, alpha)
            if s == 0:
                raise DomainError(f"reference form has signature 0 at {alpha!r}")
            signs[alpha] = 1 if s > 0 else -1
        self.signs = signs

    @property
    def algebra(self) -> InvolutiveAlgebra:
        return self.form.algebra

    def sign(self, alpha: Ordering) -> int:
        return self.signs[alpha]


def eta_signature(h: HermForm, alpha: Ordering, eta: ReferenceForm) -> int:
    if h.algebra != eta.algebra:
        raise DomainError("reference form lives over a different algebra")
    s = eta.sign(alpha)
    if s == 0:
        return 0
    return s * m_signature(h, alpha)


@dataclass(frozen=True)
class TotalSignature:
    orderings: tuple
    values: tuple

    def as_dict(self) -> dict:
        return dict(zip(self.orderings, self.values))

    def __getitem__(self, alpha: Ordering) -> int:
        return self.as_dict()[alpha]

    def __add__(self, other: "TotalSignature") -> "TotalSignature":
        return TotalSignature(self.orderings, tuple(a + b for a, b in zip(self.values, other.values)))

    def scaled(self, k: int) -> "TotalSignature":
        return TotalSignature(self.orderings, tuple(k * v for v in self.values))


def total_signature(h: HermForm, eta: ReferenceForm) -> TotalSignature:
    orderings = h.algebra.base.orderings
    return TotalSignature(orderings, tuple(eta_signature(h, a, eta) for a in orderings))


# ---------------------------------------------------------------------------
# searches


def small_base_elements(R: EtaleAlgebra, height: int) -> Iterator:
    """Nonzero base elements with small integer coordinates, lowest height
    first: integers, then integer polynomials in the generator (same
    coefficients in every factor), then factor sign patterns."""
    yield from (R.from_fraction(k) for k in _signed_range(height))
    degree = max(F.degree for F in R.factors)
    x = R.gen()
    powers = [R.one]
    for _ in range(1, degree):
        powers.append(R.mul(powers[-1], x))
    seen = set()
    for h in range(1, height + 1):
        for coeffs in itertools.product(range(-h, h + 1), repeat=degree):
            if max(abs(c) for c in coeffs) != h or all(c == 0 for c in coeffs[1:]):
                continue
            acc = R.zero
            for c, p in zip(coeffs, powers):
                acc = R.add(acc, R.scale(c, p))
            if acc not in seen and not R.is_zero(acc):
                seen.add(acc)
                yield acc
    k = len(R.factors)
    if k > 1:
        for pattern in itertools.product((1, -1), repeat=k):
            if pattern[0] == 1 and len(set(pattern)) > 1:
                yield tuple(F.from_fraction(s) for F, s in zip(R.factors, pattern))


def _signed_range(h: int) -> list[int]:
    out = []
    for k in range(1, h + 1):
        out.extend((k, -k))
    return out


def symmetric_candidates(A: InvolutiveAlgebra, budget: Budget = DEFAULT_BUDGET) -> Iterator:
    """Symmetric units of ``A``: the identity, then base multiples of
    single symmetric basis elements, then signed sums of two and three."""
    count = 0
    seen = set()

    def emit(x):
        nonlocal count
        if x in seen:
            return None
        seen.add(x)
        if not A.is_unit(x):
            return None
        count += 1
        return x

    if emit(A.one) is not None:
        yield A.one
    basis = A.sym_basis
    scalars = list(itertools.islice(small_base_elements(A.base, min(budget.height, 2)), 24))
    for size in (1, 2, 3):
        for combo in itertools.combinations(range(len(basis)), size):
            for coeffs in itertools.product(scalars, repeat=size):
                if count >= budget.max_candidates:
                    return
                x = A.zero
                for k, c in zip(combo, coeffs):
                    x = A.add(x, A.scale(c, basis[k]))
                if emit(x) is not None:
                    yield x


def _non_nil(A: InvolutiveAlgebra) -> list[Ordering]:
    return [a for a in A.base.orderings if not A.is_nil(a)]


def find_reference_form(
    A: InvolutiveAlgebra, budget: Budget = DEFAULT_BUDGET
) -> ReferenceForm:
    targets = _non_nil(A)
    if not targets:
        return ReferenceForm(diagonal_form(A, [A.one]))
    best: dict = {}
    for c in symmetric_candidates(A, budget):
        h = diagonal_form(A, [c])
        sig = {a: m_signature(h, a) for a in targets}
        if all(sig.values()):
            return ReferenceForm(h)
        for a, v in sig.items():
            if v and a not in best:
                best[a] = h
        if len(best) == len(targets):
            break
    missing = [a for a in targets if a not in best]
    if missing:
        raise SearchExhausted(f"no symmetric unit with nonzero signature at {missing!r}")
    pieces = [q_tensor_h(localizer(A.base, a), best[a]) for a in targets]
    return ReferenceForm(orth_sum(*pieces))


def _gap_point(p, lo1, hi1, lo2, hi2, K) -> Fraction:
    """A rational strictly between two consecutive isolated roots."""
    width = hi2 - lo1
    while not hi1 < lo2:
        width /= 2
        lo1, hi1 = refine_root(p, lo1, hi1, width, K)
        lo2, hi2 = refine_root(p, lo2, hi2, width, K)
    return (hi1 + lo2) / 2


def localizer(R: EtaleAlgebra, alpha: Ordering):
    """Pfister form of length at most 2 with signature ``2^k`` at ``alpha``
    and 0 at every other ordering of the absolute base ``R``."""
    if R.base is not None:
        raise DomainError("localizers are built over absolute bases")
    i = alpha.factor_index
    F = R.factors[i]
    roots = isolate_roots(F.modulus, F.base)
    j = alpha.index
    others_elsewhere = any(b.factor_index != i for b in R.orderings)
    slots = []

    def with_outside(part):
        return tuple(
            part if k == i else G.from_fraction(-1) for k, G in enumerate(R.factors)
        )

    x = F.gen()
    if j > 0:
        c = _gap_point(F.modulus, *roots[j - 1], *roots[j], F.base)
        slots.append(with_outside(F.sub(x, F.from_fraction(c))))
    if j + 1 < len(roots):
        c = _gap_point(F.modulus, *roots[j], *roots[j + 1], F.base)
        slots.append(with_outside(F.sub(F.from_fraction(c), x)))
    if not slots and others_elsewhere:
        slots.append(with_outside(F.one))
    return pfister(R, slots)


def _is_two_power(v: int) -> bool:
    return v > 0 and v & (v - 1) == 0


def _exponent(v: int) -> int:
    return v.bit_length() - 1


def find_two_power_form(
    A: InvolutiveAlgebra, eta: ReferenceForm, budget: Budget = DEFAULT_BUDGET
) -> tuple[HermForm, int]:
    """A nonsingular form whose eta-signature has absolute value ``2^m`` at
    every ordering outside Nil."""
    targets = _non_nil(A)
    if not targets:
        return diagonal_form(A, [A.one]), 0
    per_ordering: dict = {}
    pool = [eta.form]
    pool.extend(diagonal_form(A, [c]) for c in symmetric_candidates(A, budget))
    singles = list(pool)
    for h in singles:
        vals = [abs(eta_signature(h, a, eta)) for a in targets]
        if len(set(vals)) == 1 and _is_two_power(vals[0]) and nonsingular(h):
            return h, _exponent(vals[0])
        for a, v in zip(targets, vals):
            if _is_two_power(v) and a not in per_ordering:
                per_ordering[a] = h
    if len(per_ordering) < len(targets):
        for h1, h2 in itertools.combinations(singles[: 40], 2):
            h = orth_sum(h1, h2)
            for a in targets:
                if a not in per_ordering and _is_two_power(abs(eta_signature(h, a, eta))):
                    per_ordering[a] = h
            if len(per_ordering) == len(targets):
                break
    missing = [a for a in targets if a not in per_ordering]
    if missing:
        raise SearchExhausted(f"no 2-power signature found at {missing!r}")
    pieces = []
    exps = {}
    for a in targets:
        q = localizer(A.base, a)
        h = q_tensor_h(q, per_ordering[a])
        exps[a] = _exponent(abs(eta_signature(h, a, eta)))
        pieces.append((a, h))
    m = max(exps.values())
    if m > budget.max_m + budget.pfister_length:
        raise SearchExhausted(f"exponent {m} exceeds the budget")
    padded = []
    for a, h in pieces:
        pad = m - exps[a]
        if pad:
            h = q_tensor_h(pfister(A.base, [A.base.one] * pad), h)
        padded.append(h)
    return orth_sum(*padded), m


# ---------------------------------------------------------------------------
# integer lattices


def integer_solve(columns: Sequence[Sequence[int]], target: Sequence[int]):
    """Integer ``x`` with ``sum x_j columns[j] == target``, or None.

    Column-style Hermite reduction with a tracked unimodular transform.
    """
    k = len(target)
    cols = [list(c) for c in columns]
    ncols = len(cols)
    U = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]  # U[j] = combo of col j
    pivots = []
    col_start = 0
    for r in range(k):
        if col_start >= ncols:
            break
        # gcd-reduce entries in row r among columns col_start..
        while True:
            nz = [j for j in range(col_start, ncols) if cols[j][r] != 0]
            if len(nz) <= 1:
                break
            jmin = min(nz, key=lambda j: abs(cols[j][r]))
            for j in nz:
                if j == jmin:
                    continue
                f = cols[j][r] // cols[jmin][r]
                cols[j] = [a - f * b for a, b in zip(cols[j], cols[jmin])]
                U[j] = [a - f * b for a, b in zip(U[j], U[jmin])]
        nz = [j for j in range(col_start, ncols) if cols[j][r] != 0]
        if not nz:
            continue
        j = nz[0]
        cols[col_start], cols[j] = cols[j], cols[col_start]
        U[col_start], U[j] = U[j], U[col_start]
        pivots.append((r, col_start))
        col_start += 1
    residual = list(target)
    y = [0] * ncols
    for r, c in pivots:
        v = residual[r]
        piv = cols[c][r]
        if v % piv:
            return None
        y[c] = v // piv
        residual = [a - y[c] * b for a, b in zip(residual, cols[c])]
    if any(residual):
        return None
    x = [0] * ncols
    for c in range(ncols):
        if y[c]:
            for j in range(ncols):
                x[j] += y[c] * U[c][j]
    return x


@dataclass
class TwoPowerMatch:
    ok: bool
    m: Optional[int]
    form: Optional[HermForm]
    residual: Optional[tuple] = None
    detail: str = ""


def _realize(coeffs, gens: Sequence[HermForm], A: InvolutiveAlgebra, epsilon: int = 1) -> HermForm:
    pieces = []
    for c, g in zip(coeffs, gens):
        if c == 0:
            continue
        part = g if c > 0 else -g
        pieces.extend([part] * abs(c))
    if not pieces:
        from .hermitian import hyperbolic_herm

        return hyperbolic_herm(1, A, epsilon)
    return orth_sum(*pieces)


def two_power_multiple_match(
    f, eta: ReferenceForm, budget: Budget = DEFAULT_BUDGET, extra_generators: Sequence[HermForm] = ()
) -> TwoPowerMatch:
    """Smallest ``m <= budget.max_m`` and a form ``h`` with total signature
    ``2^m f``.  ``f`` maps orderings of the base to integers (a dict or a
    :class:`TotalSignature`); it must vanish on Nil."""
    A = eta.algebra
    values = f.as_dict() if isinstance(f, TotalSignature) else dict(f)
    orderings = A.base.orderings
    for a in orderings:
        if A.is_nil(a) and values.get(a, 0) != 0:
            return TwoPowerMatch(False, None, None, detail=f"f is nonzero on Nil at {a!r}")
    targets = _non_nil(A)
    vec = [values.get(a, 0) for a in targets]
    if not any(vec):
        from .hermitian import hyperbolic_herm

        return TwoPowerMatch(True, 0, hyperbolic_herm(1, A))
    gens: list[HermForm] = list(extra_generators) + [eta.form]
    gens.extend(diagonal_form(A, [c]) for c in symmetric_candidates(A, budget))
    if A.base.base is None:
        for a in targets:
            q = localizer(A.base, a)
            gens.append(q_tensor_h(q, eta.form))
    columns = []
    kept = []
    seen = set()
    for g in gens:
        col = tuple(eta_signature(g, a, eta) for a in targets)
        if any(col) and col not in seen:
            seen.add(col)
            columns.append(col)
            kept.append(g)
    best_residual = None
    for m in range(budget.max_m + 1):
        t = [v << m for v in vec]
        x = integer_solve(columns, t)
        if x is not None:
            h = _realize(x, kept, A)
            got = tuple(eta_signature(h, a, eta) for a in targets)
            if list(got) != t:
                raise ArithmeticError("lattice solution does not realise the target")  # pragma: no cover
            return TwoPowerMatch(True, m, h)
        residual = _min_residual(columns, t)
        if best_residual is None or sum(map(abs, residual)) < sum(map(abs, best_residual)):
            best_residual = residual
    return TwoPowerMatch(
        False, None, None, residual=tuple(best_residual or ()), detail="no m within budget"
    )


def _min_residual(columns, target) -> tuple:
    """Smallest residual over rational least-norm combinations rounded to
    integers (a diagnostic, not an optimum)."""
    best = tuple(target)
    for col in columns:
        dot = sum(a * b for a, b in zip(col, target))
        nn = sum(a * a for a in col)
        if nn == 0:
            continue
        c = round(Fraction(dot, nn))
        res = tuple(t - c * a for t, a in zip(target, col))
        if sum(map(abs, res)) < sum(map(abs, best)):
            best = res
    return best
