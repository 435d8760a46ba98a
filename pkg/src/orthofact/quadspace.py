"""Quadratic spaces over small finite fields.

The central object is the standard plus-type space of dimension 2m with basis
ordered e1, f1, ..., em, fm and Q(sum a_i e_i + b_i f_i) = sum a_i b_i.  The
same class also carries arbitrary quadratic forms (given by an upper
triangular coefficient matrix) because subgroup constructions need minus-type
and odd-dimensional spaces as auxiliary objects.

All isometries are produced as explicit matrices (rows = images of basis
vectors, vectors act on the right).  Reflection factorizations drive both the
Dickson/spinor membership test for Omega and the constructive Witt extension.
"""

from __future__ import annotations

import random

from . import linalg
from .ff import find_mu


class QuadSpace:
    """A finite quadratic space: field, dimension, and form coefficients.

    qmat is upper triangular; Q(v) = sum_{i<=j} qmat[i][j] v_i v_j.  The polar
    form beta(x, y) = Q(x+y) - Q(x) - Q(y) is precomputed as a symmetric
    matrix (with zero diagonal in characteristic 2).
    """

    def __init__(self, field, qmat, standard_m=None):
        self.field = field
        self.qmat = tuple(tuple(row) for row in qmat)
        self.dim = len(self.qmat)
        self.standard_m = standard_m  # half-dimension when standard plus layout
        F = field
        n = self.dim
        polar = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                if i < j:
                    polar[i][j] = self.qmat[i][j]
                elif i > j:
                    polar[i][j] = self.qmat[j][i]
                else:
                    polar[i][j] = F.add(self.qmat[i][i], self.qmat[i][i])
        self.polar = tuple(tuple(row) for row in polar)

    # -- constructors -------------------------------------------------------

    @classmethod
    def plus_type(cls, field, m):
        """Standard hyperbolic space of dimension 2m, basis e1,f1,...,em,fm."""
        n = 2 * m
        qmat = [[0] * n for _ in range(n)]
        for k in range(m):
            qmat[2 * k][2 * k + 1] = 1
        return cls(field, qmat, standard_m=m)

    @classmethod
    def odd_radical(cls, field, m):
        """Dimension 2m+1: m hyperbolic pairs plus a last vector z, Q(z) = 1.

        In characteristic 2 the polar form has radical <z>; this is the source
        space for the spin constructions.
        """
        n = 2 * m + 1
        qmat = [[0] * n for _ in range(n)]
        for k in range(m):
            qmat[2 * k][2 * k + 1] = 1
        qmat[n - 1][n - 1] = 1
        return cls(field, qmat)

    # -- vectors ------------------------------------------------------------

    def zero(self):
        return (0,) * self.dim

    def basis(self, i):
        return tuple(1 if j == i else 0 for j in range(self.dim))

    def e(self, i):
        """Paper-numbered e_i (1-based)."""
        return self.basis(2 * (i - 1))

    def f(self, i):
        return self.basis(2 * (i - 1) + 1)

    def vec(self, coeffs):
        """Vector from {basis index: coefficient} or a full coordinate list."""
        if isinstance(coeffs, dict):
            v = [0] * self.dim
            for i, c in coeffs.items():
                v[i] = c
            return tuple(v)
        return tuple(coeffs)

    def add(self, x, y):
        add = self.field.add
        return tuple(add(a, b) for a, b in zip(x, y))

    def sub(self, x, y):
        sub = self.field.sub
        return tuple(sub(a, b) for a, b in zip(x, y))

    def scale(self, c, x):
        mul = self.field.mul
        return tuple(mul(c, a) for a in x)

    def all_vectors(self):
        q, n = self.field.q, self.dim
        for code in range(q ** n):
            v = []
            for _ in range(n):
                v.append(code % q)
                code //= q
            yield tuple(v)

    # -- form evaluation ----------------------------------------------------

    def eval_Q(self, v):
        if len(v) != self.dim:
            raise ValueError("dimension mismatch")
        F = self.field
        if self.standard_m is not None:
            acc = 0
            for k in range(self.standard_m):
                a, b = v[2 * k], v[2 * k + 1]
                if a and b:
                    acc = F.add(acc, F.mul(a, b))
            return acc
        acc = 0
        for i in range(self.dim):
            vi = v[i]
            if not vi:
                continue
            row = self.qmat[i]
            for j in range(i, self.dim):
                if row[j] and v[j]:
                    acc = F.add(acc, F.mul(row[j], F.mul(vi, v[j])))
        return acc

    def eval_beta(self, x, y):
        if len(x) != self.dim or len(y) != self.dim:
            raise ValueError("dimension mismatch")
        F = self.field
        acc = 0
        for i in range(self.dim):
            xi = x[i]
            if not xi:
                continue
            row = self.polar[i]
            for j in range(self.dim):
                if row[j] and y[j]:
                    acc = F.add(acc, F.mul(row[j], F.mul(xi, y[j])))
        return acc

    def is_isometry(self, M):
        """Check Q(b_i^M) = Q(b_i) and beta(b_i^M, b_j^M) = beta(b_i, b_j)."""
        n = self.dim
        for i in range(n):
            if self.eval_Q(M[i]) != self.qmat[i][i]:
                return False
            for j in range(i + 1, n):
                if self.eval_beta(M[i], M[j]) != self.polar[i][j]:
                    return False
        return True

    # -- isometries ---------------------------------------------------------

    def reflection(self, w):
        """The reflection r_w: v -> v - (beta(v, w)/Q(w)) w; needs Q(w) != 0."""
        qw = self.eval_Q(w)
        if qw == 0:
            raise ValueError("reflection in a singular vector")
        F = self.field
        inv_qw = F.inv(qw)
        rows = []
        for i in range(self.dim):
            b = self.basis(i)
            c = F.mul(self.eval_beta(b, w), inv_qw)
            rows.append(self.sub(b, self.scale(c, w)))
        return tuple(rows)

    def eichler(self, a, b):
        """Siegel/Eichler map x -> x + beta(x,a)b - beta(x,b)a - Q(b)beta(x,a)a.

        Preconditions Q(a) = 0 and beta(a, b) = 0; always lands in Omega.
        """
        if self.eval_Q(a) != 0:
            raise ValueError("eichler: a must be singular")
        if self.eval_beta(a, b) != 0:
            raise ValueError("eichler: b must be perpendicular to a")
        F = self.field
        qb = self.eval_Q(b)
        rows = []
        for i in range(self.dim):
            x = self.basis(i)
            ba = self.eval_beta(x, a)
            bb = self.eval_beta(x, b)
            img = x
            if ba:
                img = self.add(img, self.scale(ba, b))
                img = self.sub(img, self.scale(F.mul(qb, ba), a))
            if bb:
                img = self.sub(img, self.scale(bb, a))
            rows.append(img)
        return tuple(rows)

    # -- reflection factorization ------------------------------------------

    def _nonsingular_pool(self, rng):
        pool = []
        for i in range(self.dim):
            b = self.basis(i)
            if self.eval_Q(b) != 0:
                pool.append(b)
        for i in range(0, self.dim - 1, 2):
            v = self.add(self.basis(i), self.basis(i + 1))
            if self.eval_Q(v) != 0:
                pool.append(v)
        q = self.field.q
        for _ in range(60):
            v = tuple(rng.randrange(q) for _ in range(self.dim))
            if self.eval_Q(v) != 0:
                pool.append(v)
        return pool

    def reflection_factors(self, M, max_restarts=60):
        """Write the isometry M as a list of vectors [w1, ..., wk] with
        M = r_w1 ... r_wk (empty list for the identity).

        Greedy basis-fixing (constructive Cartan-Dieudonne); a stuck state is
        escaped by scrambling with random reflections and restarting, and the
        result is post-checked exactly.
        """
        if not self.is_isometry(M):
            raise ValueError("not an isometry of the form")
        F = self.field
        rng = random.Random(0xD1C5)
        pool = self._nonsingular_pool(rng)
        ident = linalg.identity(F, self.dim)

        for restart in range(max_restarts):
            factors = []
            g = M
            if restart:
                for _ in range(1 + restart % 2):
                    w = pool[rng.randrange(len(pool))]
                    g = linalg.mat_mul(F, g, self.reflection(w))
                    factors.append(w)
            stuck = False
            for i in range(self.dim):
                v = self.basis(i)
                y = g[i]
                if y == v:
                    continue
                w = self.sub(y, v)
                if self.eval_Q(w) != 0:
                    g = linalg.mat_mul(F, g, self.reflection(w))
                    factors.append(w)
                    continue
                # two-step correction: z perpendicular to the fixed prefix
                done = False
                for z in self._prefix_perp_candidates(i, rng):
                    y2 = linalg.vec_mat(F, y, self.reflection(z))
                    w2 = self.sub(y2, v)
                    if self.eval_Q(w2) != 0:
                        rz = self.reflection(z)
                        g = linalg.mat_mul(F, g, rz)
                        factors.append(z)
                        g = linalg.mat_mul(F, g, self.reflection(w2))
                        factors.append(w2)
                        done = True
                        break
                if not done:
                    stuck = True
                    break
            if stuck or g != ident:
                continue
            # M * r_w1 * ... * r_wk = I, reflections are involutions
            factors.reverse()
            check = ident
            for w in factors:
                check = linalg.mat_mul(F, check, self.reflection(w))
            if check != M:
                raise AssertionError("reflection factorization post-check failed")
            return factors
        raise RuntimeError("reflection factorization did not terminate")

    def _prefix_perp_candidates(self, i, rng):
        """Nonsingular vectors perpendicular to basis vectors 0..i-1."""
        F = self.field
        if i == 0:
            yield from (v for v in self._nonsingular_pool(rng))
            return
        rows = [tuple(self.polar[j]) for j in range(i)]
        basis = linalg.kernel_basis(F, rows)
        for z in basis:
            if self.eval_Q(z) != 0:
                yield z
        q = F.q
        for _ in range(200):
            v = self.zero()
            for b in basis:
                c = rng.randrange(q)
                if c:
                    v = self.add(v, self.scale(c, b))
            if self.eval_Q(v) != 0:
                yield v

    # -- Dickson invariant and Omega membership -----------------------------

    def dickson_invariant(self, M):
        """Parity of the reflection count of M; defined when the polar form is
        nondegenerate (even dimension here).  For odd q the spinor-norm class
        is returned alongside: (parity, spinor_is_square)."""
        if self.dim % 2 != 0:
            raise ValueError("Dickson invariant needs nondegenerate polar form")
        factors = self.reflection_factors(M)
        parity = len(factors) % 2
        if self.field.p == 2:
            return parity, True
        F = self.field
        prod = 1
        for w in factors:
            prod = F.mul(prod, self.eval_Q(w))
        return parity, F.is_square(prod)

    def in_omega(self, M):
        parity, square = self.dickson_invariant(M)
        return parity == 0 and square

    # -- constructive Witt extension ----------------------------------------

    def witt_extend(self, pairs, coset="omega", max_restarts=60):
        """An isometry g with source^g = target for every (source, target)
        pair, in the requested coset ("omega" or "complement").

        Preconditions: equal Gram data on sources and targets, independent
        sources.  Raises ValueError when the coset is unachievable (no
        nonsingular vector perpendicular to all targets).
        """
        F = self.field
        sources = [p[0] for p in pairs]
        targets = [p[1] for p in pairs]
        if sources:
            _, piv = linalg.rref(F, sources)
            if len(piv) != len(sources):
                raise ValueError("sources are linearly dependent")
        for i, (s, t) in enumerate(pairs):
            if self.eval_Q(s) != self.eval_Q(t):
                raise ValueError("Gram mismatch: Q values differ")
            for j in range(i):
                if self.eval_beta(s, sources[j]) != self.eval_beta(t, targets[j]):
                    raise ValueError("Gram mismatch: beta values differ")

        rng = random.Random(0x817A)
        pool = self._nonsingular_pool(rng)
        ident = linalg.identity(F, self.dim)
        result = None
        for restart in range(max_restarts):
            g = ident
            factors = []
            if restart:
                w = pool[rng.randrange(len(pool))]
                g = self.reflection(w)
                factors.append(w)
            ok = True
            for idx, (s, t) in enumerate(pairs):
                cur = linalg.vec_mat(F, s, g)
                if cur == t:
                    continue
                w = self.sub(cur, t)
                if self.eval_Q(w) != 0:
                    g = linalg.mat_mul(F, g, self.reflection(w))
                    factors.append(w)
                    continue
                done = False
                for z in self._target_perp_candidates(targets[:idx], rng):
                    cur2 = linalg.vec_mat(F, cur, self.reflection(z))
                    w2 = self.sub(cur2, t)
                    if self.eval_Q(w2) != 0:
                        g = linalg.mat_mul(F, g, self.reflection(z))
                        factors.append(z)
                        g = linalg.mat_mul(F, g, self.reflection(w2))
                        factors.append(w2)
                        done = True
                        break
                if not done:
                    ok = False
                    break
            if ok:
                result = (g, factors)
                break
        if result is None:
            raise RuntimeError("witt_extend did not terminate")
        g, factors = result

        g = self._fix_coset(g, factors, targets, coset)
        for s, t in pairs:
            if linalg.vec_mat(F, s, g) != t:
                raise AssertionError("witt_extend post-check failed")
        if not self.is_isometry(g):
            raise AssertionError("witt_extend produced a non-isometry")
        return g

    def _target_perp_candidates(self, targets, rng):
        F = self.field
        if not targets:
            yield from self._nonsingular_pool(rng)
            return
        basis = linalg.kernel_basis(F, self._perp_system(targets))
        for z in basis:
            if self.eval_Q(z) != 0:
                yield z
        q = F.q
        for _ in range(200):
            v = self.zero()
            for b in basis:
                c = rng.randrange(q)
                if c:
                    v = self.add(v, self.scale(c, b))
            if self.eval_Q(v) != 0:
                yield v

    def _perp_system(self, targets):
        """Rows M with M x = 0 iff x is beta-perpendicular to all targets."""
        return [tuple(self.eval_beta(t, self.basis(j)) for j in range(self.dim))
                for t in targets]

    def _fix_coset(self, g, factors, targets, coset):
        F = self.field
        parity = len(factors) % 2
        if F.p == 2:
            in_om = parity == 0
        else:
            prod = 1
            for w in factors:
                prod = F.mul(prod, self.eval_Q(w))
            in_om = parity == 0 and F.is_square(prod)
        want_omega = (coset == "omega")
        if in_om == want_omega:
            return g
        # correcting reflections must fix every constrained target
        rng = random.Random(0xC05E)
        cands = []
        for z in self._target_perp_candidates(targets, rng):
            cands.append(z)
            if len(cands) >= 120:
                break
        if not cands:
            raise ValueError("requested coset unachievable")
        if F.p == 2 or not want_omega:
            # flipping the Dickson parity suffices to toggle Omega membership
            # (p = 2), or to leave Omega (any p)
            return linalg.mat_mul(F, g, self.reflection(cands[0]))
        # odd q, want Omega: repair parity and spinor norm together
        prod = 1
        for w in factors:
            prod = F.mul(prod, self.eval_Q(w))
        if parity == 1:
            for z in cands:
                if F.is_square(F.mul(prod, self.eval_Q(z))):
                    return linalg.mat_mul(F, g, self.reflection(z))
        else:
            for z1 in cands:
                for z2 in cands:
                    if z1 == z2:
                        continue
                    if F.is_square(F.mul(prod, F.mul(self.eval_Q(z1),
                                                     self.eval_Q(z2)))):
                        g1 = linalg.mat_mul(F, g, self.reflection(z1))
                        return linalg.mat_mul(F, g1, self.reflection(z2))
        raise ValueError("requested coset unachievable")

    # -- hyperbolic bases ----------------------------------------------------

    def hyperbolic_basis(self, max_tries=4000, seed=0x4B, first_pairs=None):
        """For an even-dimensional plus-type form: vectors b1,...,b_2m whose
        Gram data matches the standard interleaved layout.  Raises if the form
        runs out of singular vectors (not plus type).

        first_pairs prescribes leading hyperbolic pairs (already satisfying
        Q(s) = Q(t) = 0, beta(s, t) = 1, pairwise orthogonal); extraction
        continues inside their common perp.
        """
        F = self.field
        rng = random.Random(seed)
        n = self.dim
        if n % 2 != 0:
            raise ValueError("hyperbolic basis needs even dimension")
        space_basis = [self.basis(i) for i in range(n)]
        out = []
        current = space_basis
        for s, t in (first_pairs or []):
            if self.eval_Q(s) != 0 or self.eval_Q(t) != 0 \
                    or self.eval_beta(s, t) != 1:
                raise ValueError("prescribed pair is not hyperbolic")
            out.append((s, t))
            current = self._restrict_to_perp(current, s, t)
        while current:
            s = self._find_singular(current, rng, max_tries)
            if s is None:
                raise ValueError("no singular vector: form is not plus type")
            # t with beta(s, t) = 1 among current span
            t = None
            for cand in current:
                b = self.eval_beta(s, cand)
                if b:
                    t = self.scale(F.inv(b), cand)
                    break
            if t is None:
                raise ValueError("degenerate restriction")
            # make Q(t) = 0: t += c*s with c = -Q(t)
            c = F.neg(self.eval_Q(t))
            if c:
                t = self.add(t, self.scale(c, s))
            out.append((s, t))
            current = self._restrict_to_perp(current, s, t)
        basis = []
        for s, t in out:
            basis.append(s)
            basis.append(t)
        return basis

    def _restrict_to_perp(self, current, s, t):
        """Basis of the beta-perp of <s, t> inside span(current)."""
        F = self.field
        rows = []
        for v in current:
            rows.append((self.eval_beta(v, s), self.eval_beta(v, t)))
        # unknowns are the coefficients over `current`: transpose the system
        ker = linalg.kernel_basis(F, [tuple(r) for r in zip(*rows)])
        new_basis = []
        for coeffs in ker:
            v = self.zero()
            for cv, bv in zip(coeffs, current):
                if cv:
                    v = self.add(v, self.scale(cv, bv))
            new_basis.append(v)
        if not new_basis:
            return []
        reduced, _ = linalg.rref(F, new_basis)
        return [tuple(r) for r in reduced]

    def _find_singular(self, span_basis, rng, max_tries):
        F = self.field
        if len(span_basis) < 2:
            return None
        for v in span_basis:
            if self.eval_Q(v) == 0 and any(v):
                return v
        for a in span_basis:
            for b in span_basis:
                if a is b:
                    continue
                for c in range(1, F.q):
                    v = self.add(a, self.scale(c, b))
                    if any(v) and self.eval_Q(v) == 0:
                        return v
        q = F.q
        for _ in range(max_tries):
            v = self.zero()
            for b in span_basis:
                c = rng.randrange(q)
                if c:
                    v = self.add(v, self.scale(c, b))
            if any(v) and self.eval_Q(v) == 0:
                return v
        return None


class DistinguishedVectors:
    """The vectors u, u' of the notation section, with mu pinned by find_mu.

    u = e1 + e2 + mu f2
    u' = (1 - mu^2) e1 + (mu^2 - 1 + mu^-1) e2 + mu^2 f1 + mu^2 f2
    Gram identities are asserted at construction.
    """

    def __init__(self, space: QuadSpace):
        if space.standard_m is None or space.standard_m < 2:
            raise ValueError("need the standard space with m >= 2")
        F = space.field
        mu = find_mu(F).value
        self.mu = mu
        one = 1
        mu2 = F.mul(mu, mu)
        self.u = space.vec({0: one, 2: one, 3: mu})
        self.u_prime = space.vec({
            0: F.sub(one, mu2),
            2: F.add(F.sub(mu2, one), F.inv(mu)),
            1: mu2,
            3: mu2,
        })
        ef = space.add(space.e(1), space.f(1))
        assert space.eval_Q(ef) == 1
        assert space.eval_Q(self.u) == mu
        assert space.eval_Q(self.u_prime) == mu
        assert space.eval_beta(ef, self.u) == 1
        assert space.eval_beta(ef, self.u_prime) == 1
        self.space = space

    def minus_plane_is_anisotropic(self):
        """<e1+f1, u> contains no nonzero singular vector (minus type check)."""
        sp = self.space
        F = sp.field
        ef = sp.add(sp.e(1), sp.f(1))
        for a in range(F.q):
            for b in range(F.q):
                if a == 0 and b == 0:
                    continue
                v = sp.add(sp.scale(a, ef), sp.scale(b, self.u))
                if sp.eval_Q(v) == 0:
                    return False
        return True


def singular_vector_count(space):
    """Brute-force count of singular vectors, zero included (test oracle)."""
    return sum(1 for v in space.all_vectors() if space.eval_Q(v) == 0)
