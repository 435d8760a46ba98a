"""Dense polynomial arithmetic over a FieldDescriptor.

Coefficient lists run low degree to high and are kept normalized (no trailing
zeros).  Just enough machinery for minimal polynomials and finding one
irreducible factor (squarefree part, distinct-degree sieve, Cantor-Zassenhaus
equal-degree splitting).
"""

from __future__ import annotations

import random


def pnormalize(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def padd(F, a, b):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = F.add(out[i], c)
    return pnormalize(out)


def psub(F, a, b):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = F.sub(out[i], c)
    return pnormalize(out)


def pscale(F, c, a):
    if c == 0:
        return []
    return [F.mul(c, x) for x in a]


def pmul(F, a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return pnormalize(out)


def pdivmod(F, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    inv_lead = F.inv(b[-1])
    q = [0] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b) and a:
        c = F.mul(a[-1], inv_lead)
        d = len(a) - len(b)
        q[d] = c
        for i, y in enumerate(b):
            a[d + i] = F.sub(a[d + i], F.mul(c, y))
        pnormalize(a)
    return pnormalize(q), a


def pmod(F, a, b):
    return pdivmod(F, a, b)[1]


def pmonic(F, a):
    if not a:
        return a
    if a[-1] == 1:
        return list(a)
    inv = F.inv(a[-1])
    return [F.mul(inv, c) for c in a]


def pgcd(F, a, b):
    a, b = list(a), list(b)
    while b:
        a, b = b, pmod(F, a, b)
    return pmonic(F, a)


def ppowmod(F, a, e, m):
    r = [1]
    a = pmod(F, a, m)
    while e:
        if e & 1:
            r = pmod(F, pmul(F, r, a), m)
        a = pmod(F, pmul(F, a, a), m)
        e >>= 1
    return r


def pderiv(F, a):
    out = []
    for i in range(1, len(a)):
        c = 0
        for _ in range(i % F.p):
            c = F.add(c, a[i])
        out.append(c)
    return pnormalize(out)


def squarefree_part(F, a):
    a = pmonic(F, a)
    d = pderiv(F, a)
    if not d:
        # a = g(x^p); take the p-th root and recurse
        p = F.p
        root = []
        for i in range(0, len(a), p):
            # p-th root of each coefficient: c^(p^(f-1))
            root.append(F.pow(a[i], F.p ** (F.f - 1)))
        return squarefree_part(F, pnormalize(root))
    g = pgcd(F, a, d)
    if len(g) <= 1:
        return a
    q, r = pdivmod(F, a, g)
    assert not r
    return q


def some_irreducible_factor(F, a, rng=None):
    """One irreducible factor of a (monic), smallest available degree."""
    rng = rng or random.Random(0xFAC7)
    a = squarefree_part(F, a)
    if len(a) == 2:
        return pmonic(F, a)
    q = F.q
    x = [0, 1]
    h = list(x)
    deg = len(a) - 1
    for d in range(1, deg + 1):
        h = ppowmod(F, h, q, a)  # x^(q^d) mod a
        g = pgcd(F, psub(F, h, x), a)
        if len(g) > 1:
            return _equal_degree_split(F, g, d, rng)
        if 2 * (d + 1) > deg:
            return pmonic(F, a)  # a itself is irreducible
    return pmonic(F, a)


def _equal_degree_split(F, g, d, rng):
    """g = product of irreducibles of degree d; return one of them."""
    while len(g) - 1 > d:
        r = [rng.randrange(F.q) for _ in range(len(g) - 1)]
        rlist = pnormalize(r)
        if not rlist:
            continue
        if F.p == 2:
            # absolute trace map sum r^(2^i), i < d*f
            s = list(rlist)
            acc = list(rlist)
            for _ in range(d * F.f - 1):
                acc = pmod(F, pmul(F, acc, acc), g)
                s = padd(F, s, acc)
            t = pgcd(F, s, g)
        else:
            e = (F.q ** d - 1) // 2
            s = ppowmod(F, rlist, e, g)
            t = pgcd(F, psub(F, s, [1]), g)
        if 1 < len(t) < len(g):
            g = t if len(t) - 1 <= (len(g) - 1) // 2 else pdivmod(F, g, t)[0]
    return pmonic(F, g)
