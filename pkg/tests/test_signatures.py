import random

import pytest
from support import SQRT2, Q, algebra_family, all_templates

from hermsig.algebras import CONJ_TRANSPOSE, DivisionSpec, InvolutiveAlgebra
from hermsig.corpus import random_diagonal_form, template
from hermsig.hermitian import diagonal_form, hyperbolic_herm, nonsingular, orth_sum
from hermsig.numerics import DomainError
from hermsig.signatures import (
    Budget,
    ReferenceForm,
    TotalSignature,
    eta_signature,
    find_reference_form,
    find_two_power_form,
    integer_solve,
    m_signature,
    total_signature,
    two_power_multiple_match,
)

A_QUAT_SQRT2 = InvolutiveAlgebra(
    SQRT2, 1, DivisionSpec.quaternion(SQRT2.from_fraction(-1), SQRT2.gen()), CONJ_TRANSPOSE
)


def _algebras():
    out = all_templates((None, SQRT2)) + [A_QUAT_SQRT2]
    for group in algebra_family(Q).values():
        out.extend(group)
    return out


def test_unit_form_signatures_over_q():
    a = Q.orderings[0]
    got = {name: m_signature(diagonal_form(template(name), [template(name).one]), a)
           for name in ("q-id", "m2-transpose", "m2-symplectic", "quaternion-conj", "unitary-i")}
    assert got == {"q-id": 1, "m2-transpose": 2, "m2-symplectic": 0, "quaternion-conj": 1, "unitary-i": 1}


def test_signature_vanishes_on_nil():
    rng = random.Random(41)
    for A in _algebras():
        for a in A.nil_set():
            for _ in range(3):
                h = random_diagonal_form(rng, A, 2, 3)
                assert m_signature(h, a) == 0


def test_bound_by_local_matrix_size():
    rng = random.Random(42)
    for A in _algebras():
        for _ in range(5):
            h = random_diagonal_form(rng, A, rng.randint(1, 3), 3)
            for a in A.base.orderings:
                s = m_signature(h, a)
                assert abs(s) <= A.n_alpha(a) * h.dim
                assert (s - A.n_alpha(a) * h.dim) % 2 == 0 or A.is_nil(a)


def test_reference_independence():
    # two reference forms give signatures that agree up to a sign at each
    # ordering, and that sign is the ratio of their mutual signatures
    rng = random.Random(43)
    for A in _algebras():
        eta1 = find_reference_form(A)
        eta2 = ReferenceForm(orth_sum(eta1.form, eta1.form, eta1.form))
        neg = ReferenceForm(-eta1.form)
        for _ in range(3):
            h = random_diagonal_form(rng, A, 2, 3)
            for a in A.base.orderings:
                assert eta_signature(h, a, eta1) == eta_signature(h, a, eta2)
                assert eta_signature(h, a, eta1) == -eta_signature(h, a, neg)


def test_change_of_reference_formula():
    # sign^eta h = sgn(sign^eta' eta) * sign^eta' h for unrelated references
    rng = random.Random(45)
    A = template("q-id", SQRT2)
    x = SQRT2.gen()
    refs = [
        find_reference_form(A),
        ReferenceForm(diagonal_form(A, [A.scalar(SQRT2.neg(x))])),
        ReferenceForm(diagonal_form(A, [A.scalar(SQRT2.add(x, SQRT2.from_fraction(1)))])),
    ]
    for eta in refs:
        for eta2 in refs:
            for _ in range(5):
                h = random_diagonal_form(rng, A, 2, 3)
                for a in SQRT2.orderings:
                    s = eta_signature(eta.form, a, eta2)
                    sgn = (s > 0) - (s < 0)
                    assert eta_signature(h, a, eta) == sgn * eta_signature(h, a, eta2)


def test_reference_form_rejects_zero_signature():
    A = template("q-id")
    with pytest.raises(DomainError):
        ReferenceForm(hyperbolic_herm(1, A))


def test_reference_form_over_sqrt2_needs_localizers():
    A = template("q-id", SQRT2)
    eta = find_reference_form(A)
    assert all(eta.sign(a) != 0 for a in SQRT2.orderings)


def test_two_power_form_over_sqrt2():
    for A in (template("q-id", SQRT2), template("unitary-i", SQRT2), A_QUAT_SQRT2):
        eta = find_reference_form(A)
        h0, m = find_two_power_form(A, eta)
        assert nonsingular(h0)
        for a in SQRT2.orderings:
            v = eta_signature(h0, a, eta)
            assert v == 0 if A.is_nil(a) else abs(v) == 2**m


def test_total_signature_algebra():
    A = template("q-id", SQRT2)
    eta = find_reference_form(A)
    h = diagonal_form(A, [A.one, A.scalar(SQRT2.gen())])
    t = total_signature(h, eta)
    assert isinstance(t, TotalSignature)
    assert (t + t).values == t.scaled(2).values
    assert sorted(t.values) == [0, 2] or sorted(t.values) == [-2, 0]
    assert t[SQRT2.orderings[0]] == t.as_dict()[SQRT2.orderings[0]]


def test_integer_solve():
    assert integer_solve([[2, 0], [0, 3]], [4, 9]) == [2, 3]
    assert integer_solve([[2, 2]], [1, 1]) is None
    x = integer_solve([[1, 1], [1, -1]], [2, 0])
    assert [x[0] + x[1], x[0] - x[1]] == [2, 0]
    assert integer_solve([[1, 1], [1, -1]], [1, 0]) is None
    rng = random.Random(44)
    for _ in range(100):
        cols = [[rng.randint(-4, 4) for _ in range(3)] for _ in range(rng.randint(1, 4))]
        coeffs = [rng.randint(-3, 3) for _ in cols]
        target = [sum(c * col[i] for c, col in zip(coeffs, cols)) for i in range(3)]
        x = integer_solve(cols, target)
        assert x is not None
        assert [sum(c * col[i] for c, col in zip(x, cols)) for i in range(3)] == target


def test_two_power_match_needs_a_multiple():
    A = template("q-id", SQRT2)
    eta = find_reference_form(A)
    lo, hi = SQRT2.orderings
    res = two_power_multiple_match({lo: 0, hi: 1}, eta)
    assert res.ok and res.m == 1
    assert total_signature(res.form, eta).values == (0, 2)
    # nonzero on Nil is refused
    Aq = A_QUAT_SQRT2
    nil = Aq.nil_set()[0]
    assert not two_power_multiple_match({nil: 1}, find_reference_form(Aq)).ok


def test_budget_exhaustion_is_reported():
    A = template("q-id", SQRT2)
    eta = find_reference_form(A)
    lo, hi = SQRT2.orderings
    res = two_power_multiple_match({lo: 0, hi: 1}, eta, Budget(max_m=0))
    assert not res.ok and res.residual is not None
    # <1> is always a candidate, so a tiny budget still finds a reference
    eta0 = find_reference_form(A, Budget(height=0, max_candidates=1))
    assert eta0.form.dim == 1
