"""Dense matrix helpers over a domain (tuples of rows)."""

from __future__ import annotations

from typing import Sequence

from .numerics import NotAUnit

Matrix = tuple  # tuple of row tuples


def identity(n: int, K) -> Matrix:
    return tuple(tuple(K.one if i == j else K.zero for j in range(n)) for i in range(n))


def zeros(r: int, c: int, K) -> Matrix:
    return tuple(tuple(K.zero for _ in range(c)) for _ in range(r))


def transpose(M: Sequence[Sequence]) -> Matrix:
    return tuple(zip(*M)) if M else ()


def mat_map(f, M) -> Matrix:
    return tuple(tuple(f(x) for x in row) for row in M)


def mat_add(A, B, K) -> Matrix:
    return tuple(tuple(K.add(x, y) for x, y in zip(r, s)) for r, s in zip(A, B))


def mat_mul(A, B, K) -> Matrix:
    Bt = transpose(B)
    out = []
    for row in A:
        new = []
        for col in Bt:
            acc = K.zero
            for x, y in zip(row, col):
                if K.is_zero(x) or K.is_zero(y):
                    continue
                acc = K.add(acc, K.mul(x, y))
            new.append(acc)
        out.append(tuple(new))
    return tuple(out)


def block_diag(blocks: Sequence[Matrix], K) -> Matrix:
    n = sum(len(b) for b in blocks)
    out = [[K.zero] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[off + i][off + j] = x
        off += len(b)
    return tuple(tuple(r) for r in out)


def kron(A, B, mul) -> Matrix:
    """Kronecker product with entry product ``mul(a, b)``."""
    rows = []
    for ra in A:
        for rb in B:
            rows.append(tuple(mul(a, b) for a in ra for b in rb))
    return tuple(rows)


def is_symmetric(M, K) -> bool:
    n = len(M)
    return all(
        K.is_zero(K.sub(M[i][j], M[j][i])) for i in range(n) for j in range(i + 1, n)
    )


def diagonalize_symmetric(G, K, *, track: bool = True):
    """Symmetric Gaussian elimination over a field-like domain.

    Returns ``(diag, P)`` with ``P^T G P = diag(diag)`` (``P`` is None when
    ``track`` is false).  Pivot: the first active index with nonzero diagonal
    entry; if none, the smallest pair (i, j) with ``g_ij != 0`` and the basis
    move ``e_i <- e_i + e_j`` (2 is a unit).  Zero tests and inverses come
    from ``K``, so a :class:`~hermsig.etale.Place` yields the elimination in
    the residue field at an ordering.
    """
    n = len(G)
    a = [list(row) for row in G]
    P = [list(row) for row in identity(n, K)] if track else None
    active = list(range(n))
    diag = [K.zero] * n
    zero_cache: dict = {}

    def nz(i, j):
        key = (i, j) if i <= j else (j, i)
        v = zero_cache.get(key)
        if v is None:
            v = not K.is_zero(a[i][j])
            zero_cache[key] = v
        return v

    while active:
        piv = next((i for i in active if nz(i, i)), None)
        if piv is None:
            pair = next(
                ((i, j) for x, i in enumerate(active) for j in active[x + 1:] if nz(i, j)),
                None,
            )
            if pair is None:
                break
            i, j = pair
            for r in range(n):
                a[i][r] = K.add(a[i][r], a[j][r])
            for r in range(n):
                a[r][i] = K.add(a[r][i], a[r][j])
            if track:
                for r in range(n):
                    P[r][i] = K.add(P[r][i], P[r][j])
            for key in [k for k in zero_cache if i in k]:
                del zero_cache[key]
            piv = i
        p = a[piv][piv]
        pinv = K.inv(p)
        active.remove(piv)
        diag[piv] = p
        for k in active:
            if not nz(k, piv):
                continue
            f = K.mul(a[k][piv], pinv)
            for j in active:
                if nz(piv, j):
                    a[k][j] = K.sub(a[k][j], K.mul(f, a[piv][j]))
            a[k][piv] = K.zero
            if track:
                for r in range(n):
                    P[r][k] = K.sub(P[r][k], K.mul(f, P[r][piv]))
        for key in [k for k in zero_cache if k[0] in active and k[1] in active]:
            del zero_cache[key]
        for k in active:
            zero_cache[(min(k, piv), max(k, piv))] = False
    return diag, (tuple(tuple(r) for r in P) if track else None)


def sylvester_counts(G, K) -> tuple[int, int, int]:
    """``(positive, negative, zero)`` inertia of a symmetric matrix at K."""
    diag, _ = diagonalize_symmetric(G, K, track=False)
    pos = neg = 0
    for d in diag:
        s = K.sign(d)
        if s > 0:
            pos += 1
        elif s < 0:
            neg += 1
    return pos, neg, len(G) - pos - neg


def sylvester(G, K) -> int:
    pos, neg, _ = sylvester_counts(G, K)
    return pos - neg


def is_invertible_over(M, F) -> bool:
    """Invertibility of a square matrix over a :class:`SimpleExtension` (or
    any field domain), splitting the ring on zero-divisor pivots."""
    n = len(M)
    a = [list(r) for r in M]
    for c in range(n):
        piv = None
        for r in range(c, n):
            x = a[r][c]
            if F.is_zero(x):
                continue
            try:
                xinv = F.inv(x)
            except NotAUnit as exc:
                if exc.split is None:
                    raise
                g1, g2 = exc.split
                parts = [F.project(g) for g in (g1, g2) if len(g) > 1]
                return all(
                    is_invertible_over(tuple(tuple(G.reduce(y) for y in row) for row in a), G)
                    for G in parts
                )
            piv = r
            break
        if piv is None:
            return False
        a[c], a[piv] = a[piv], a[c]
        for r in range(c + 1, n):
            if F.is_zero(a[r][c]):
                continue
            f = F.mul(a[r][c], xinv)
            for j in range(c, n):
                a[r][j] = F.sub(a[r][j], F.mul(f, a[c][j]))
    return True


def is_invertible(M, R) -> bool:
    """Invertibility over an :class:`~hermsig.etale.EtaleAlgebra` (per factor)."""
    if not M:
        return True
    for i, F in enumerate(R.factors):
        Mi = tuple(tuple(x[i] for x in row) for row in M)
        if not is_invertible_over(Mi, F):
            return False
    return True
