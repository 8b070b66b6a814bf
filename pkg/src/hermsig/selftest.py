"""Small fixed corpus run by ``hermsig selftest``."""

from __future__ import annotations

import random
from typing import Iterator

from .corpus import TEMPLATES, random_diagonal_form, random_extension, template
from .etale import RATIONALS, EtaleAlgebra, RelativeEtale
from .hermitian import nonsingular
from .knebusch import TransferContext, split_at, verify_ktf_hermitian
from .numerics import UniPoly, count_real_roots
from .quadratic import pfister, signature_at
from .signatures import find_reference_form, find_two_power_form, total_signature


def _extension(coeffs) -> RelativeEtale:
    Q = RATIONALS
    return RelativeEtale(Q, [Q.from_fraction(c) for c in coeffs])


def run_selftest(seed: int = 0) -> Iterator[dict]:
    rng = random.Random(seed)
    alpha = RATIONALS.orderings[0]
    for coeffs, want in (([-2, 0, 1], 2), ([1, 0, 1], 0), ([0, -1, 0, 1], 3), ([-2, 0, -1, 0, 1], 2)):
        r = split_at(_extension(coeffs), alpha).r
        yield {"check": "extension-count", "poly": coeffs, "lhs": r, "rhs": want, "ok": r == want}
    for k in range(10):
        name = TEMPLATES[k % len(TEMPLATES)]
        A = template(name)
        ctx = TransferContext(A, random_extension(rng))
        eta = find_reference_form(A)
        h = random_diagonal_form(rng, ctx.extended_algebra, 1, 2)
        rep = verify_ktf_hermitian(ctx, h, alpha, eta)
        yield {"check": "ktf", "template": name, "lhs": rep.lhs, "rhs": rep.rhs, "ok": rep.ok}
    K = EtaleAlgebra.from_polys([[-2, 0, 1]])
    x = K.gen()
    for bs in ([x], [x, x], [K.from_fraction(2), x, K.from_fraction(3)]):
        q = pfister(K, bs)
        for a in K.orderings:
            want = 2 ** len(bs) if all(a.sign(b) > 0 for b in bs) else 0
            got = signature_at(q, a)
            yield {"check": "pfister", "k": len(bs), "lhs": got, "rhs": want, "ok": got == want}
    for name in ("q-id", "quaternion-conj", "m2-transpose"):
        A = template(name)
        eta = find_reference_form(A)
        h0, m = find_two_power_form(A, eta)
        vals = total_signature(h0, eta).values
        ok = nonsingular(h0) and all(abs(v) == 2**m for v in vals)
        yield {"check": "two-power", "template": name, "m": m, "ok": ok}
    p = UniPoly([-2, 0, 1])
    yield {"check": "sturm", "lhs": count_real_roots(p), "rhs": 2, "ok": count_real_roots(p) == 2}
