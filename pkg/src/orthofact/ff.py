"""Exact arithmetic in GF(p^f) for small fields.

Elements of GF(p^f) are integer indices in [0, q).  The index is the base-p
encoding of the element written as a polynomial in the generator of the field
over GF(p): the element sum(c_t * x^t) has index sum(c_t * p^t).  For prime
fields this is ordinary arithmetic mod p.  Multiplication goes through
discrete log/antilog tables built from a primitive element, so it is a pair of
lookups in every inner loop.

The module also supplies the special constants the orthogonal-group
constructions need: an element mu with x^2 + x + mu irreducible, an element
lambda of trace one in a quadratic extension, and ring embeddings of a field
into its extensions.
"""

from __future__ import annotations


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# polynomials over GF(p), encoded as base-p integers (coefficient c_t at p^t)
# ---------------------------------------------------------------------------

def _poly_degree(a, p):
    d = -1
    while a:
        a //= p
        d += 1
    return d


def _poly_coeffs(a, p):
    out = []
    while a:
        out.append(a % p)
        a //= p
    return out


def _poly_mul(a, b, p):
    ca = _poly_coeffs(a, p)
    cb = _poly_coeffs(b, p)
    if not ca or not cb:
        return 0
    cc = [0] * (len(ca) + len(cb) - 1)
    for i, x in enumerate(ca):
        if x:
            for j, y in enumerate(cb):
                cc[i + j] = (cc[i + j] + x * y) % p
    out = 0
    for c in reversed(cc):
        out = out * p + c
    return out


def _poly_mod(a, m, p):
    dm = _poly_degree(m, p)
    cm = _poly_coeffs(m, p)
    inv_lead = pow(cm[-1], p - 2, p)
    ca = _poly_coeffs(a, p)
    while len(ca) - 1 >= dm and any(ca):
        da = len(ca) - 1
        if ca[da] == 0:
            ca.pop()
            continue
        factor = (ca[da] * inv_lead) % p
        shift = da - dm
        for t, c in enumerate(cm):
            ca[shift + t] = (ca[shift + t] - factor * c) % p
        while ca and ca[-1] == 0:
            ca.pop()
    out = 0
    for c in reversed(ca):
        out = out * p + c
    return out


def _poly_mulmod(a, b, m, p):
    return _poly_mod(_poly_mul(a, b, p), m, p)


def _poly_powmod(a, e, m, p):
    r = 1
    a = _poly_mod(a, m, p)
    while e:
        if e & 1:
            r = _poly_mulmod(r, a, m, p)
        a = _poly_mulmod(a, a, m, p)
        e >>= 1
    return r


def _poly_gcd(a, b, p):
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def _is_irreducible(m, p, f):
    # x^(p^f) == x mod m, and x^(p^(f/l)) != x for every prime l | f
    x = p  # the polynomial "x"
    if _poly_powmod(x, p ** f, m, p) != x:
        return False
    for ell in _prime_factors(f):
        xq = _poly_powmod(x, p ** (f // ell), m, p)
        # gcd(x^(p^(f/l)) - x, m) must be 1
        diff = _poly_sub(xq, x, p)
        if _poly_degree(_poly_gcd(m, diff, p), p) > 0:
            return False
    return True


def _poly_sub(a, b, p):
    ca = _poly_coeffs(a, p)
    cb = _poly_coeffs(b, p)
    n = max(len(ca), len(cb))
    ca += [0] * (n - len(ca))
    cb += [0] * (n - len(cb))
    out = 0
    for x, y in zip(reversed(ca), reversed(cb)):
        out = out * p + (x - y) % p
    return out


def _least_irreducible(p, f):
    """Lexicographically least monic irreducible of degree f over GF(p).

    "Least" means smallest base-p encoding of the low coefficients; Conway
    polynomials are deliberately not required.
    """
    if f == 1:
        return p  # the polynomial x
    lead = p ** f
    for low in range(p ** f):
        m = lead + low
        if _is_irreducible(m, p, f):
            return m
    raise AssertionError("no irreducible polynomial found (internal invariant)")


# ---------------------------------------------------------------------------
# field descriptors
# ---------------------------------------------------------------------------

class FieldDescriptor:
    """GF(p^f) with log/antilog tables; immutable and shareable.

    Do not instantiate directly, use make_field (which caches): identity of
    descriptors is relied on for compatibility checks.
    """

    def __init__(self, p: int, f: int):
        if not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if not 1 <= f <= 16:
            raise ValueError(f"exponent f = {f} out of range [1, 16]")
        q = p ** f
        if q > 2 ** 16:
            raise ValueError(f"field order {q} exceeds the table limit 2^16")
        self.p = p
        self.f = f
        self.q = q
        self.modulus = _least_irreducible(p, f)

        # multiplication before tables exist
        def raw_mul(a, b):
            if p == 2 and f == 1:
                return a & b
            return _poly_mulmod(a, b, self.modulus, p) if f > 1 else (a * b) % p

        # find a primitive element (smallest index of multiplicative order q-1)
        fac = _prime_factors(q - 1)

        def order_ok(g):
            for ell in fac:
                e = (q - 1) // ell
                r = 1
                for bit in bin(e)[2:]:
                    r = raw_mul(r, r)
                    if bit == '1':
                        r = raw_mul(r, g)
                if r == 1:
                    return False
            return True

        gen = None
        for g in range(2, q):
            if order_ok(g):
                gen = g
                break
        if gen is None:
            gen = 1  # q = 2
        self.generator = gen

        exp = [0] * (2 * (q - 1) if q > 2 else 2)
        log = [0] * q
        v = 1
        for k in range(q - 1):
            exp[k] = v
            log[v] = k
            v = raw_mul(v, gen)
        for k in range(q - 1, len(exp)):
            exp[k] = exp[k - (q - 1)]
        self._exp = exp
        self._log = log

        # addition: XOR for p = 2, a full table for small odd q, digits otherwise
        if p == 2:
            self._add_table = None
        elif q <= 512:
            tbl = [[0] * q for _ in range(q)]
            for a in range(q):
                for b in range(q):
                    tbl[a][b] = self._add_digits(a, b)
            self._add_table = tbl
        else:
            self._add_table = None

    def _add_digits(self, a, b):
        p = self.p
        out = 0
        mult = 1
        while a or b:
            out += ((a % p + b % p) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    # -- ring operations on integer indices --------------------------------

    def add(self, a, b):
        if self.p == 2:
            return a ^ b
        if self._add_table is not None:
            return self._add_table[a][b]
        return self._add_digits(a, b)

    def neg(self, a):
        if self.p == 2:
            return a
        p = self.p
        out = 0
        mult = 1
        while a:
            out += (-a % p) * mult
            a //= p
            mult *= p
        return out

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self._exp[(self.q - 1) - self._log[a]] if a != 1 else 1

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("0 to a negative power")
            return 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def frob(self, a, j=1):
        """a^(p^j), the j-th power of the absolute Frobenius."""
        return self.pow(a, self.p ** (j % self.f))

    def conj(self, a):
        """a^q0 where q0^2 = q; the nontrivial automorphism of a square field."""
        if self.f % 2 != 0:
            raise ValueError("conj needs a quadratic extension (even f)")
        return self.pow(a, self.p ** (self.f // 2))

    def elements(self):
        return range(self.q)

    def nonzero(self):
        return range(1, self.q)

    def is_square(self, a):
        if a == 0 or self.p == 2:
            return True
        return self._log[a] % 2 == 0

    def sqrt(self, a):
        if a == 0:
            return 0
        if self.p == 2:
            return self.pow(a, self.q // 2)
        k = self._log[a]
        if k % 2 != 0:
            raise ValueError("not a square")
        return self._exp[k // 2]

    def elt(self, value):
        return FieldElt(value, self)

    def __repr__(self):
        return f"GF({self.q})"


_FIELD_CACHE: dict = {}


def make_field(p: int, f: int) -> FieldDescriptor:
    """Build (and cache) GF(p^f) with a verified-irreducible modulus."""
    key = (p, f)
    fd = _FIELD_CACHE.get(key)
    if fd is None:
        fd = FieldDescriptor(p, f)
        _FIELD_CACHE[key] = fd
    return fd


class FieldElt:
    """A field element as (integer index, descriptor), with operator sugar.

    Hot paths use raw indices; this wrapper exists for readable formulas in
    constructions and tests.
    """

    __slots__ = ("value", "field")

    def __init__(self, value: int, field: FieldDescriptor):
        self.value = value
        self.field = field

    def _coerce(self, other):
        if isinstance(other, FieldElt):
            if other.field is not self.field:
                raise ValueError("mixed fields")
            return other.value
        return int(other)

    def __add__(self, other):
        return FieldElt(self.field.add(self.value, self._coerce(other)), self.field)

    def __sub__(self, other):
        return FieldElt(self.field.sub(self.value, self._coerce(other)), self.field)

    def __mul__(self, other):
        return FieldElt(self.field.mul(self.value, self._coerce(other)), self.field)

    def __truediv__(self, other):
        return FieldElt(self.field.div(self.value, self._coerce(other)), self.field)

    def __pow__(self, e):
        return FieldElt(self.field.pow(self.value, e), self.field)

    def __neg__(self):
        return FieldElt(self.field.neg(self.value), self.field)

    def __eq__(self, other):
        if isinstance(other, FieldElt):
            return self.field is other.field and self.value == other.value
        return self.value == other

    def __hash__(self):
        return hash((id(self.field), self.value))

    def __repr__(self):
        return f"{self.value}@GF({self.field.q})"


# ---------------------------------------------------------------------------
# subfield embeddings and trace
# ---------------------------------------------------------------------------

_EMBED_CACHE: dict = {}


def subfield_embedding(src: FieldDescriptor, target: FieldDescriptor):
    """Return the embedding table GF(q) -> GF(q^b) as a list of length q.

    The image of the source generator g is the least y in the target with the
    same order and satisfying the minimal polynomial of g, which pins the map
    uniquely enough for reproducibility; the result is checked to be a ring
    homomorphism on the whole (small) source field.
    """
    key = (id(src), id(target))
    table = _EMBED_CACHE.get(key)
    if table is not None:
        return table
    if src.p != target.p:
        raise ValueError("incompatible characteristic")
    if target.f % src.f != 0:
        raise ValueError(f"GF({target.q}) is not an extension of GF({src.q})")
    if src.q == target.q:
        table = list(range(src.q))
        _EMBED_CACHE[key] = table
        return table
    # minimal polynomial of the source generator over GF(p): prod (x - g^(p^i))
    g = src.generator
    conjugates = sorted({src.frob(g, i) for i in range(src.f)})
    # coefficients of prod(x - c) over the SOURCE field
    coeffs = [1]
    for c in conjugates:
        nxt = [0] * (len(coeffs) + 1)
        for i, a in enumerate(coeffs):
            nxt[i + 1] = src.add(nxt[i + 1], a)
            nxt[i] = src.sub(nxt[i], src.mul(a, c))
        coeffs = nxt
    # coefficients lie in GF(p): indices < p
    if any(c >= src.p for c in coeffs):
        raise AssertionError("minimal polynomial not over the prime field")

    def eval_at(y):
        acc = 0
        for c in reversed(coeffs):
            acc = target.mul(acc, y)
            acc = target.add(acc, c % target.p)
        return acc

    image_g = None
    step = (target.q - 1) // (src.q - 1)
    for k in range(0, target.q - 1, step):
        y = target._exp[k]
        if eval_at(y) == 0:
            if image_g is None or y < image_g:
                image_g = y
    if image_g is None:
        raise AssertionError("no root of the minimal polynomial in the target")
    table = [0] * src.q
    table[0] = 0
    v_src, v_tgt = 1, 1
    for _ in range(src.q - 1):
        table[v_src] = v_tgt
        v_src = src.mul(v_src, g)
        v_tgt = target.mul(v_tgt, image_g)
    # homomorphism check (source fields are tiny)
    for a in range(src.q):
        for b in range(src.q):
            if table[src.add(a, b)] != target.add(table[a], table[b]):
                raise AssertionError("embedding is not additive")
    _EMBED_CACHE[key] = table
    return table


def embed_subfield(x, target: FieldDescriptor):
    """Embed a FieldElt of GF(q) into GF(q^b)."""
    table = subfield_embedding(x.field, target)
    return FieldElt(table[x.value], target)


def trace_to_subfield(x, base: FieldDescriptor | None = None):
    """Trace of GF(q^2)/GF(q): x + x^q, returned in the base field.

    x is a FieldElt of the square field; base defaults to the field of order
    sqrt(q^2) with the same characteristic.
    """
    ext = x.field
    if ext.f % 2 != 0:
        raise ValueError("source is not a quadratic extension")
    if base is None:
        base = make_field(ext.p, ext.f // 2)
    if base.p != ext.p or base.f * 2 != ext.f:
        raise ValueError("target is not the index-2 subfield")
    t = ext.add(x.value, ext.conj(x.value))
    table = subfield_embedding(base, ext)
    # invert the embedding on the image
    back = {img: idx for idx, img in enumerate(table)}
    if t not in back:
        raise AssertionError("trace landed outside the subfield image")
    return FieldElt(back[t], base)


def find_mu(field: FieldDescriptor) -> FieldElt:
    """Least mu != 0 with x^2 + x + mu irreducible over GF(q)."""
    for mu in range(1, field.q):
        if all(field.add(field.add(field.mul(t, t), t), mu) != 0
               for t in range(field.q)):
            return FieldElt(mu, field)
    raise AssertionError("no irreducible x^2+x+mu (internal invariant violation)")


def find_lambda(ext: FieldDescriptor) -> FieldElt:
    """Least lambda in GF(q^2) with lambda + lambda^q = 1."""
    if ext.f % 2 != 0:
        raise ValueError("need a quadratic extension")
    for lam in range(ext.q):
        if ext.add(lam, ext.conj(lam)) == 1:
            return FieldElt(lam, ext)
    raise AssertionError("trace is surjective; unreachable")
