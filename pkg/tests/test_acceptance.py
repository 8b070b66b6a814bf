"""The ten acceptance criteria, one test each.

Every test records a PASS/FAIL line that is repeated in the terminal summary.
"""

import random
import time

from support import SQRT2, Q, bisection_roots, ext, morita_triples, record

from hermsig.corpus import (
    TEMPLATES,
    random_diagonal_form,
    random_extension,
    random_quadform,
    random_squarefree,
    random_unit,
    template,
)
from hermsig.etale import EtaleAlgebra, extensions_of_ordering
from hermsig.hermitian import (
    HermForm,
    direct_product,
    hyperbolic_herm,
    is_hyperbolic,
    nonsingular,
    orth_sum,
    q_tensor_h,
)
from hermsig.knebusch import TransferContext, verify_ktf_commutative, verify_ktf_hermitian
from hermsig.morita import check_brcom_square, functor_F, transportable
from hermsig.numerics import UniPoly, count_real_roots, squarefree_check
from hermsig.quadratic import diagonal, pfister, signature_at, transfer_quadratic
from hermsig.signatures import (
    ReferenceForm,
    eta_signature,
    find_reference_form,
    find_two_power_form,
    m_signature,
    total_signature,
    two_power_multiple_match,
)


def test_criterion_01_hermitian_trace_formula():
    rng = random.Random(101)
    start = time.perf_counter()
    cases = bad = 0
    etas = {name: find_reference_form(template(name)) for name in TEMPLATES}
    for k in range(100):
        name = TEMPLATES[k % len(TEMPLATES)]
        A = template(name)
        ctx = TransferContext(A, random_extension(rng, Q, 4))
        h = random_diagonal_form(rng, ctx.extended_algebra, rng.randint(1, 2), 2)
        for alpha in Q.orderings:
            rep = verify_ktf_hermitian(ctx, h, alpha, etas[name])
            cases += 1
            bad += not rep.ok
    elapsed = time.perf_counter() - start
    ok = cases >= 100 and bad == 0 and elapsed < 120
    record(1, ok, f"{cases} instances, {bad} mismatches, {elapsed:.1f}s")
    assert ok


def test_criterion_02_commutative_trace_formula():
    rng = random.Random(202)
    start = time.perf_counter()
    cases = bad = 0
    while cases < 120:
        R = Q if cases % 3 else SQRT2
        E = random_extension(rng, R, 3 if R is Q else 2)
        q = random_quadform(rng, E.total, rng.randint(1, 3), 3)
        for alpha in R.orderings:
            rep = verify_ktf_commutative(E, q, alpha)
            cases += 1
            bad += not rep.ok
    elapsed = time.perf_counter() - start
    ok = bad == 0 and elapsed < 30
    record(2, ok, f"{cases} instances, {bad} mismatches, {elapsed:.1f}s")
    assert ok


def test_criterion_03_extension_counting():
    fixed = {(-2, 0, 1): 2, (1, 0, 1): 0, (0, -1, 0, 1): 3, (-2, 0, -1, 0, 1): 2}
    polys = [list(p) for p in fixed]
    rng = random.Random(303)
    while len(polys) < 30:
        polys.append([int(c) for c in random_squarefree(rng, 4, 6).coeffs])
    alpha = Q.orderings[0]
    bad = []
    for coeffs in polys:
        E = ext(coeffs)
        T = E.total
        sig = signature_at(transfer_quadratic(E, diagonal(T, [T.one])), alpha)
        r = len(extensions_of_ordering(E, alpha))
        want = fixed.get(tuple(coeffs), len(bisection_roots([int(c) for c in coeffs])))
        if not (sig == r == want):
            bad.append((coeffs, sig, r, want))
    ok = not bad
    record(3, ok, f"{len(polys)} extensions, mismatches {bad}")
    assert ok


def test_criterion_04_pfister_signatures():
    rng = random.Random(404)
    bases = [Q, SQRT2, EtaleAlgebra.from_polys([[0, -3, 0, 1]]), EtaleAlgebra.from_polys([[-1, 1], [-2, 0, 1]])]
    cases = bad = 0
    for R in bases:
        for _ in range(15):
            k = rng.randint(1, 3)
            bs = [random_unit(rng, R, 3) for _ in range(k)]
            q = pfister(R, bs)
            for alpha in R.orderings:
                want = 2**k if all(alpha.sign(b) > 0 for b in bs) else 0
                cases += 1
                bad += signature_at(q, alpha) != want
    ok = bad == 0
    record(4, ok, f"{cases} (form, ordering) cases, {bad} mismatches")
    assert ok


def test_criterion_05_morita_invariance_and_square():
    triples = morita_triples(50, seed=505, bases=(Q, SQRT2))
    cases = bad = 0
    for ctx, h in triples:
        eta = find_reference_form(ctx.source)
        eta_f = ReferenceForm(functor_F(ctx, transportable(ctx, eta.form)))
        fh = functor_F(ctx, h)
        for alpha in ctx.source.base.orderings:
            cases += 1
            bad += eta_signature(h, alpha, eta) != eta_signature(fh, alpha, eta_f)
    rng = random.Random(5050)
    square_bad = 0
    for ctx, h in morita_triples(20, seed=5051):
        E = random_extension(rng, Q, 3)
        rep = check_brcom_square(ctx, E, h, find_reference_form(ctx.source))
        square_bad += not rep.ok
    ok = len(triples) == 50 and bad == 0 and square_bad == 0
    record(5, ok, f"50 triples ({cases} orderings) {bad} mismatches; 20 squares, {square_bad} fail")
    assert ok


def test_criterion_06_ring_morphism():
    rng = random.Random(606)
    names = ("q-id", "m2-transpose", "quaternion-conj", "unitary-i")
    algebras = [template(n) for n in names] + [template(n, SQRT2) for n in names]
    etas = [find_reference_form(A) for A in algebras]
    bad = []
    for k in range(300):
        i = k % len(algebras)
        A, eta = algebras[i], etas[i]
        h1 = random_diagonal_form(rng, A, rng.randint(1, 2), 3)
        h2 = random_diagonal_form(rng, A, rng.randint(1, 2), 3)
        q = random_quadform(rng, A.base, rng.randint(1, 2), 3)
        for alpha in A.base.orderings:
            s1, s2 = eta_signature(h1, alpha, eta), eta_signature(h2, alpha, eta)
            if eta_signature(orth_sum(h1, h2), alpha, eta) != s1 + s2:
                bad.append(("additivity", k))
            if eta_signature(q_tensor_h(q, h1), alpha, eta) != signature_at(q, alpha) * s1:
                bad.append(("product", k))
    for A, eta in zip(algebras, etas):
        for m in (1, 2):
            for eps in (1, -1):
                H = hyperbolic_herm(m, A, eps)
                if any(m_signature(H, a) for a in A.base.orderings):
                    bad.append(("hyperbolic", A, m))
    ok = not bad
    record(6, ok, f"300 random cases plus hyperbolic checks, failures {bad[:5]}")
    assert ok


def _product_corpus():
    """20 lists of component forms with shared rank, epsilon and shape."""
    rng = random.Random(707)
    shapes = ("q-id", "m2-transpose", "quaternion-conj", "unitary-i")
    bases = [Q, SQRT2, EtaleAlgebra.from_polys([[-3, 0, 1]])]
    corpus = []
    for k in range(20):
        name = shapes[k % len(shapes)]
        comps = []
        for j in range(rng.randint(2, 3)):
            A = template(name, bases[(k + j) % len(bases)])
            kind = rng.choice(("hyperbolic", "diagonal", "singular"))
            if k % 5 == 0:
                kind = "hyperbolic"
            if kind == "hyperbolic":
                comps.append(hyperbolic_herm(1, A))
            elif kind == "diagonal":
                comps.append(random_diagonal_form(rng, A, 2, 2))
            else:
                u = random_diagonal_form(rng, A, 1, 2).gram[0][0]
                comps.append(HermForm(A, 1, ((u, u), (u, u))))
        corpus.append(comps)
    return corpus


def test_criterion_07_direct_products():
    corpus = _product_corpus()
    bad = []
    hyper_cases = 0
    for k, comps in enumerate(corpus):
        h = direct_product(comps)
        if nonsingular(h) != all(nonsingular(c) for c in comps):
            bad.append(("nonsingular", k))
        if all(is_hyperbolic(c) for c in comps):
            hyper_cases += 1
            if not is_hyperbolic(h):
                bad.append(("hyperbolic", k))
    ok = len(corpus) == 20 and not bad and hyper_cases > 0
    record(7, ok, f"20 products ({hyper_cases} all-hyperbolic), failures {bad}")
    assert ok


def test_criterion_08_two_power_reference():
    start = time.perf_counter()
    instances = [
        ("q-id", template("q-id")),
        ("quaternion-conj", template("quaternion-conj")),
        ("m2-transpose", template("m2-transpose")),
        ("quaternion-conj over Q(sqrt2)", template("quaternion-conj", SQRT2)),
    ]
    bad = []
    ms = []
    for label, A in instances:
        eta = find_reference_form(A)
        h0, m = find_two_power_form(A, eta)
        ms.append(m)
        tot = total_signature(h0, eta)
        off_nil = [v for a, v in zip(tot.orderings, tot.values) if not A.is_nil(a)]
        if not (nonsingular(h0) and off_nil and all(abs(v) == 2**m for v in off_nil)):
            bad.append((label, m, tot.values))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 60
    record(8, ok, f"4 instances, exponents {ms}, failures {bad}, {elapsed:.1f}s")
    assert ok


def test_criterion_09_sturm_vs_bisection():
    rng = random.Random(909)
    bad = []
    for _ in range(200):
        while True:
            d = rng.randint(1, 6)
            coeffs = [rng.randint(-9, 9) for _ in range(d)] + [rng.choice([c for c in range(-9, 10) if c])]
            p = UniPoly(coeffs)
            if squarefree_check(p):
                break
        if count_real_roots(p) != len(bisection_roots(coeffs)):
            bad.append(coeffs)
    ok = not bad
    record(9, ok, f"200 polynomials, mismatches {bad}")
    assert ok


def _achievable_totals():
    """(label, algebra, f) with f a total that some 2^m multiple realises."""
    cases = []
    qid, quat, m2 = template("q-id"), template("quaternion-conj"), template("m2-transpose")
    cases += [("q-id", qid, [3]), ("q-id", qid, [-2]), ("quaternion", quat, [1]), ("m2", m2, [-1])]
    for name in ("q-id", "quaternion-conj", "m2-transpose", "unitary-i"):
        A = template(name, SQRT2)
        for f in ([1, 0], [0, 1], [2, -1]) if name == "q-id" else ([1, 0],):
            cases.append((name + "/sqrt2", A, f))
    return cases


def test_criterion_10_two_power_multiple():
    cases = _achievable_totals()
    bad = []
    found = []
    for label, A, f in cases:
        eta = find_reference_form(A)
        target = dict(zip(A.base.orderings, f))
        res = two_power_multiple_match(target, eta)
        if not res.ok or res.m > 6:
            bad.append((label, f, res.detail))
            continue
        got = total_signature(res.form, eta).values
        if list(got) != [v << res.m for v in f]:
            bad.append((label, f, got))
        found.append(res.m)
    ok = len(cases) == 10 and not bad
    record(10, ok, f"10 totals, exponents {found}, failures {bad}")
    assert ok
