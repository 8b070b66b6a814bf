import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from support import SQRT2, Q, ext

from hermsig.corpus import random_quadform, random_unit
from hermsig.etale import EtaleAlgebra
from hermsig.numerics import DomainError
from hermsig.quadratic import (
    QuadForm,
    diagonal,
    diagonalize,
    hyperbolic,
    nonsingular,
    orth_sum,
    pfister,
    pfister_subsets,
    scale,
    signature_at,
    signature_via_diagonal,
    tensor,
    transfer_quadratic,
)


def _q(rows):
    return QuadForm(Q, tuple(tuple(Q.from_fraction(c) for c in r) for r in rows))


def test_hyperbolic_plane_diagonalises():
    D, P = diagonalize(_q([[0, 1], [1, 0]]))
    assert [Q.to_fraction(D.gram[k][k]) for k in range(2)] == [2, Fraction(-1, 2)]
    assert signature_at(_q([[0, 1], [1, 0]]), Q.orderings[0]) == 0


def test_congruence_witness():
    rng = random.Random(1)
    for R in (Q, SQRT2):
        for _ in range(20):
            n = rng.randint(1, 3)
            rows = [[None] * n for _ in range(n)]
            for i in range(n):
                for j in range(i, n):
                    rows[i][j] = rows[j][i] = tuple(
                        R.from_fraction(rng.randint(-3, 3))[k] for k in range(len(R.factors))
                    )
            q = QuadForm(R, tuple(tuple(r) for r in rows))
            if not nonsingular(q):
                continue
            D, P = diagonalize(q)
            # P^T q P == D
            for a in range(n):
                for b in range(n):
                    acc = R.zero
                    for i in range(n):
                        for j in range(n):
                            acc = R.add(acc, R.mul(R.mul(P[i][a], q.gram[i][j]), P[j][b]))
                    assert acc == D.gram[a][b]
            for alpha in R.orderings:
                assert signature_at(q, alpha) == signature_via_diagonal(q, alpha)


def test_signature_of_1_sqrt2():
    q = diagonal(SQRT2, [SQRT2.one, SQRT2.gen()])
    by_sign = {a.sign(SQRT2.gen()): signature_at(q, a) for a in SQRT2.orderings}
    assert by_sign == {-1: 0, 1: 2}


def test_signature_is_a_ring_morphism():
    rng = random.Random(2)
    T = EtaleAlgebra.from_polys([[-1, 1], [-3, 0, 1]])
    for _ in range(500):
        R = rng.choice((Q, SQRT2, T))
        q1 = random_quadform(rng, R, rng.randint(1, 3))
        q2 = random_quadform(rng, R, rng.randint(1, 3))
        for a in R.orderings:
            s1, s2 = signature_at(q1, a), signature_at(q2, a)
            assert signature_at(orth_sum(q1, q2), a) == s1 + s2
            assert signature_at(tensor(q1, q2), a) == s1 * s2
            assert signature_at(q1 + q2, a) == s1 + s2 and signature_at(q1 * q2, a) == s1 * s2


def test_hyperbolic_and_scaling():
    for R in (Q, SQRT2):
        for a in R.orderings:
            assert signature_at(hyperbolic(R, 3), a) == 0
            q = diagonal(R, [R.one, R.gen()])
            assert signature_at(scale(q, R.from_fraction(-1)), a) == -signature_at(q, a)
            assert signature_at(q + (-q), a) == 0


def test_pfister_entries_and_signature():
    x = SQRT2.gen()
    bs = [x, SQRT2.from_fraction(3)]
    q = pfister(SQRT2, bs)
    assert sorted(q.gram[k][k] for k in range(4)) == sorted(pfister_subsets(SQRT2, bs))
    for a in SQRT2.orderings:
        assert signature_at(q, a) == (4 if a.sign(x) > 0 else 0)
    rng = random.Random(4)
    for _ in range(20):
        b = [random_unit(rng, SQRT2) for _ in range(2)]
        assert pfister(SQRT2, b) == tensor(pfister(SQRT2, b[:1]), pfister(SQRT2, b[1:]))


def test_transfer_of_sqrt2():
    E = ext([-2, 0, 1])
    T = E.total
    q = diagonal(T, [T.gen()])
    gram = [[Q.to_fraction(v) for v in row] for row in transfer_quadratic(E, q).gram]
    assert gram == [[0, 4], [4, 0]]


def test_form_validation():
    with pytest.raises(DomainError):
        _q([[1, 2], [3, 4]])
    with pytest.raises(DomainError):
        orth_sum(_q([[1]]), diagonal(SQRT2, [SQRT2.one]))


_units = st.tuples(st.integers(-5, 5), st.integers(-5, 5)).filter(lambda t: t != (0, 0))


@settings(max_examples=80, deadline=None)
@given(st.lists(_units, min_size=1, max_size=4), st.lists(_units, min_size=1, max_size=3))
def test_signature_counts_entry_signs(e1, e2):
    # a + b sqrt2 with (a, b) != (0, 0) is a unit; the signature of a
    # diagonal form is the sum of the entry signs at each embedding
    def elems(es):
        return [SQRT2.element([(Fraction(a), Fraction(b))]) for a, b in es]

    q1, q2 = diagonal(SQRT2, elems(e1)), diagonal(SQRT2, elems(e2))
    for alpha in SQRT2.orderings:
        r = alpha.sign(SQRT2.gen()) * 2**0.5
        want = sum((a + b * r > 0) - (a + b * r < 0) for a, b in e1)
        assert signature_at(q1, alpha) == want
        assert signature_at(tensor(q1, q2), alpha) == want * signature_at(q2, alpha)
