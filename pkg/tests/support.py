"""Shared builders for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

from hermsig.algebras import CONJ_TRANSPOSE, TRANSPOSE, DivisionSpec, InvolutiveAlgebra
from hermsig.corpus import random_diagonal_form
from hermsig.etale import RATIONALS, EtaleAlgebra, RelativeEtale
from hermsig.morita import MoritaContext, transportable

Q = RATIONALS
SQRT2 = EtaleAlgebra.from_polys([[-2, 0, 1]])


def ext(coeffs, base=Q) -> RelativeEtale:
    return RelativeEtale(base, [base.from_fraction(c) for c in coeffs])


def d_elem(A_or_D, coords):
    """A D-element from rational coordinates."""
    D = A_or_D.D if hasattr(A_or_D, "D") else A_or_D
    R = D.base if hasattr(D, "base") else None
    R = R or A_or_D.base
    return tuple(R.from_fraction(c) for c in coords)


def diag_twist(R, dim, rows):
    """Diagonal twist whose entries are given as coordinate lists."""
    n = len(rows)
    zero = tuple(R.zero for _ in range(dim))
    out = []
    for i in range(n):
        out.append(tuple(tuple(R.from_fraction(c) for c in rows[i]) if j == i else zero for j in range(n)))
    return tuple(out)


def symplectic_twist(R):
    one, zero, m1 = R.one, R.zero, R.from_fraction(-1)
    return (((zero,), (one,)), ((m1,), (zero,)))


def algebra_family(R=Q):
    """Matrix algebras grouped by common ``(D, theta)``, each with several
    twists of both signs."""
    m1 = R.from_fraction(-1)
    base = DivisionSpec.base()
    quat = DivisionSpec.quaternion(m1, m1)
    unit = DivisionSpec.quadratic(m1)
    fam = {
        "base": [
            InvolutiveAlgebra(R, 1, base, TRANSPOSE),
            InvolutiveAlgebra(R, 1, base, TRANSPOSE, diag_twist(R, 1, [[3]])),
            InvolutiveAlgebra(R, 2, base, TRANSPOSE),
            InvolutiveAlgebra(R, 2, base, TRANSPOSE, diag_twist(R, 1, [[1], [-2]])),
            InvolutiveAlgebra(R, 2, base, TRANSPOSE, symplectic_twist(R)),
            InvolutiveAlgebra(R, 3, base, TRANSPOSE, diag_twist(R, 1, [[1], [1], [-1]])),
        ],
        "quaternion": [
            InvolutiveAlgebra(R, 1, quat, CONJ_TRANSPOSE),
            InvolutiveAlgebra(R, 1, quat, CONJ_TRANSPOSE, diag_twist(R, 4, [[0, 1, 0, 0]])),
            InvolutiveAlgebra(R, 2, quat, CONJ_TRANSPOSE, diag_twist(R, 4, [[1, 0, 0, 0], [2, 0, 0, 0]])),
            InvolutiveAlgebra(R, 2, quat, CONJ_TRANSPOSE, diag_twist(R, 4, [[0, 1, 0, 0], [0, 0, 1, 0]])),
        ],
        "unitary": [
            InvolutiveAlgebra(R, 1, unit, CONJ_TRANSPOSE),
            InvolutiveAlgebra(R, 1, unit, CONJ_TRANSPOSE, diag_twist(R, 2, [[0, 1]])),
            InvolutiveAlgebra(R, 2, unit, CONJ_TRANSPOSE, diag_twist(R, 2, [[1, 0], [-1, 0]])),
            InvolutiveAlgebra(R, 2, unit, CONJ_TRANSPOSE, diag_twist(R, 2, [[0, 1], [0, 1]])),
        ],
    }
    return fam


def morita_triples(count: int, seed: int = 0, bases=(Q,)):
    """``(ctx, h)`` pairs; ``h`` is amplified so that it can be transported."""
    rng = random.Random(seed)
    fams = [(R, algebra_family(R)) for R in bases]
    out = []
    while len(out) < count:
        R, fam = fams[rng.randrange(len(fams))]
        group = fam[rng.choice(sorted(fam))]
        src, tgt = rng.choice(group), rng.choice(group)
        ctx = MoritaContext(src, tgt)
        h = random_diagonal_form(rng, src, rng.randint(1, 2), 2)
        out.append((ctx, transportable(ctx, h)))
    return out


# acceptance results: criterion number -> (ok, detail)
CRITERIA: dict = {}


def record(n: int, ok: bool, detail: str) -> None:
    CRITERIA[n] = (ok, detail)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")


def _peval(coeffs, x):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _sgn(v) -> int:
    return (v > 0) - (v < 0)


def bisection_roots(coeffs, iterations: int = 90) -> list:
    """Approximate distinct real roots of an integer polynomial (ascending
    coefficients) by recursion on the derivative: between consecutive sign
    changes of ``p'`` the polynomial is monotone, so bisection brackets at
    most one root per piece.  Independent of any Sturm machinery."""
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    deg = len(coeffs) - 1
    if deg <= 0:
        return []
    if deg == 1:
        return [Fraction(-coeffs[0], coeffs[1])]
    bound = 1 + max(abs(Fraction(c, coeffs[-1])) for c in coeffs[:-1])
    crit = bisection_roots([k * coeffs[k] for k in range(1, deg + 1)], iterations)
    points = [-bound] + [c for c in crit if -bound < c < bound] + [bound]
    roots = []
    for a, b in zip(points, points[1:]):
        sa, sb = _sgn(_peval(coeffs, a)), _sgn(_peval(coeffs, b))
        if sa == 0:
            roots.append(a)
            continue
        if sa * sb >= 0:
            continue
        lo, hi = a, b
        for _ in range(iterations):
            mid = (lo + hi) / 2
            sm = _sgn(_peval(coeffs, mid))
            if sm == 0:
                lo = hi = mid
                break
            if sm == sa:
                lo = mid
            else:
                hi = mid
        roots.append((lo + hi) / 2)
    if _sgn(_peval(coeffs, points[-1])) == 0:
        roots.append(points[-1])
    out = []
    for r in sorted(roots):
        if not out or r - out[-1] > Fraction(1, 2**60):
            out.append(r)
    return out


def random_algebra_element(rng, A, height: int = 3):
    from hermsig.corpus import random_element

    return tuple(
        tuple(tuple(random_element(rng, A.base, height) for _ in range(A.D.dim)) for _ in range(A.n))
        for _ in range(A.n)
    )


def all_templates(bases=(None,)):
    from hermsig.corpus import TEMPLATES, template

    out = []
    for R in bases:
        for name in TEMPLATES:
            out.append(template(name) if R is None else template(name, R))
    return out
