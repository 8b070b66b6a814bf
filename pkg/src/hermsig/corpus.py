"""Named algebra templates and seeded random instances.

All randomness goes through a ``random.Random`` seeded by the caller.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .algebras import (
    CONJ_TRANSPOSE,
    TRANSPOSE,
    DivisionSpec,
    InvolutiveAlgebra,
)
from .etale import RATIONALS, EtaleAlgebra, RelativeEtale
from .hermitian import HermForm, diagonal_form
from .numerics import UniPoly, squarefree_check
from .quadratic import QuadForm, diagonal

__all__ = [
    "TEMPLATES",
    "template",
    "random_squarefree",
    "random_extension",
    "random_element",
    "random_unit",
    "random_symmetric_unit",
    "random_diagonal_form",
    "random_quadform",
]

TEMPLATES = ("q-id", "m2-transpose", "m2-symplectic", "quaternion-conj", "unitary-i")


def template(name: str, base: EtaleAlgebra = RATIONALS) -> InvolutiveAlgebra:
    R = base
    one, zero, m1 = R.one, R.zero, R.from_fraction(-1)
    if name == "q-id":
        return InvolutiveAlgebra(R, 1, DivisionSpec.base(), TRANSPOSE)
    if name == "m2-transpose":
        return InvolutiveAlgebra(R, 2, DivisionSpec.base(), TRANSPOSE)
    if name == "m2-symplectic":
        J = (((zero,), (one,)), ((m1,), (zero,)))
        return InvolutiveAlgebra(R, 2, DivisionSpec.base(), TRANSPOSE, J)
    if name == "quaternion-conj":
        return InvolutiveAlgebra(R, 1, DivisionSpec.quaternion(m1, m1), CONJ_TRANSPOSE)
    if name == "unitary-i":
        return InvolutiveAlgebra(R, 1, DivisionSpec.quadratic(m1), CONJ_TRANSPOSE)
    raise KeyError(f"unknown template {name!r}")


def random_squarefree(rng: random.Random, max_degree: int = 4, coeff: int = 9) -> UniPoly:
    """Monic squarefree integer polynomial of degree 1..max_degree."""
    while True:
        d = rng.randint(1, max_degree)
        p = UniPoly([rng.randint(-coeff, coeff) for _ in range(d)] + [1])
        if squarefree_check(p):
            return p


def random_extension(rng: random.Random, base: EtaleAlgebra = RATIONALS, max_degree: int = 4) -> RelativeEtale:
    if base.is_rationals:
        p = random_squarefree(rng, max_degree, 5)
        return RelativeEtale(base, [base.from_fraction(c) for c in p.coeffs])
    while True:
        d = rng.randint(1, max_degree)
        coeffs = [random_element(rng, base, 3) for _ in range(d)] + [base.one]
        try:
            return RelativeEtale(base, coeffs)
        except ValueError:
            continue


def random_element(rng: random.Random, R: EtaleAlgebra, height: int = 3):
    parts = []
    for F in R.factors:
        parts.append(tuple(_random_coord(rng, F.base, height) for _ in range(F.degree)))
    return R.element(parts)


def _random_coord(rng, K, height):
    if isinstance(K, EtaleAlgebra):
        return random_element(rng, K, height)
    if hasattr(K, "factors"):
        return random_element(rng, K, height)
    if hasattr(K, "modulus"):
        return tuple(_random_coord(rng, K.base, height) for _ in range(K.degree))
    return Fraction(rng.randint(-height, height))


def random_unit(rng: random.Random, R: EtaleAlgebra, height: int = 3):
    while True:
        x = random_element(rng, R, height)
        if R.is_unit(x):
            return x


def random_symmetric_unit(rng: random.Random, A: InvolutiveAlgebra, height: int = 3):
    R = A.base
    basis = A.sym_basis
    while True:
        coeffs = [random_element(rng, R, height) if rng.random() < 0.7 else R.zero for _ in basis]
        x = A.sym_element(coeffs)
        if A.is_unit(x):
            return x


def random_diagonal_form(rng: random.Random, A: InvolutiveAlgebra, rank: int = 2, height: int = 3) -> HermForm:
    return diagonal_form(A, [random_symmetric_unit(rng, A, height) for _ in range(rank)])


def random_quadform(rng: random.Random, R: EtaleAlgebra, rank: int = 2, height: int = 3) -> QuadForm:
    return diagonal(R, [random_unit(rng, R, height) for _ in range(rank)])


def pick(rng: random.Random, items: Sequence):
    return items[rng.randrange(len(items))]
