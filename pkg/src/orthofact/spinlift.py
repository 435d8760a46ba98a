"""Even Clifford algebras and spin lifts.

The source space is the odd-dimensional quadratic space V_n (n = 7 or 9):
(n-1)/2 hyperbolic pairs plus a vector z with Q(z) = 1.  The even Clifford
algebra has the 2^(n-1) even monomials as a basis and is a full matrix
algebra; an irreducible right module of dimension 2^((n-1)/2) (the spin
module) is split off by minimal-polynomial kernels and module spinning.

An isometry of V_n is lifted by factoring it into reflections r_w and mapping
the factor list to the product of the corresponding vectors inside the
algebra (appending z when the count is odd, which acts as a scalar on the
spin module).  The lifted matrices preserve a unique plus-type quadratic form
on the spin module; a hyperbolic basis of that form conjugates the copy into
the standard frame.
"""

from __future__ import annotations

import random

from . import linalg, oracles, polys
from .ff import make_field
from .grpcore import GroupElt, GroupHandle
from .quadspace import QuadSpace
from .constructions import assemble, omega_supply


# ---------------------------------------------------------------------------
# even Clifford algebra on a bitmask monomial basis
# ---------------------------------------------------------------------------

class CliffordEven:
    """Even subalgebra of the Clifford algebra of a quadratic space.

    Monomials are bitmasks over the basis indices with even popcount; products
    are straightened with x_i x_j + x_j x_i = beta(i, j), x_i^2 = Q(x_i).
    """

    def __init__(self, space: QuadSpace):
        self.space = space
        self.field = space.field
        self.n = space.dim
        self.masks = [m for m in range(1 << self.n)
                      if bin(m).count("1") % 2 == 0]
        self.index = {m: i for i, m in enumerate(self.masks)}
        self.dim = len(self.masks)
        self._mono_cache = {}
        F = self.field
        self._qdiag = [space.eval_Q(space.basis(i)) for i in range(self.n)]
        self._beta = [[space.eval_beta(space.basis(i), space.basis(j))
                       for j in range(self.n)] for i in range(self.n)]

    def unit(self):
        return {0: 1}

    def straighten(self, seq, coeff=1):
        """Normal-order a generator sequence into {mask: coeff}."""
        F = self.field
        out = {}
        stack = [(coeff, tuple(seq))]
        while stack:
            c, s = stack.pop()
            if c == 0:
                continue
            # find the first inversion or repeat
            pos = -1
            for i in range(len(s) - 1):
                if s[i] >= s[i + 1]:
                    pos = i
                    break
            if pos < 0:
                mask = 0
                for i in s:
                    mask |= 1 << i
                out[mask] = F.add(out.get(mask, 0), c)
                if out[mask] == 0:
                    del out[mask]
                continue
            a, b = s[pos], s[pos + 1]
            rest = s[:pos] + s[pos + 2:]
            if a == b:
                q = self._qdiag[a]
                if q:
                    stack.append((F.mul(c, q), rest))
            else:
                bval = self._beta[a][b]
                if bval:
                    stack.append((F.mul(c, bval), rest))
                swapped = s[:pos] + (b, a) + s[pos + 2:]
                stack.append((F.neg(c), swapped))
        return out

    def mono_mul(self, I, J):
        key = (I, J)
        got = self._mono_cache.get(key)
        if got is None:
            seq = [i for i in range(self.n) if (I >> i) & 1] + \
                  [j for j in range(self.n) if (J >> j) & 1]
            got = self.straighten(seq)
            self._mono_cache[key] = got
        return got

    def elt_mul(self, A, B):
        F = self.field
        out = {}
        for I, a in A.items():
            for J, b in B.items():
                c = F.mul(a, b)
                for K, s in self.mono_mul(I, J).items():
                    v = F.add(out.get(K, 0), F.mul(c, s))
                    if v:
                        out[K] = v
                    elif K in out:
                        del out[K]
        return out

    def vector_pair(self, v, w):
        """The algebra element v * w for vectors v, w of the space."""
        F = self.field
        out = {}
        for i, ci in enumerate(v):
            if not ci:
                continue
            for j, cj in enumerate(w):
                if not cj:
                    continue
                c = F.mul(ci, cj)
                for K, s in self.mono_mul(1 << i, 1 << j).items():
                    val = F.add(out.get(K, 0), F.mul(c, s))
                    if val:
                        out[K] = val
                    elif K in out:
                        del out[K]
        return out

    def right_mult_matrix(self, elt):
        """Matrix of x -> x * elt on the even-monomial coordinate rows."""
        rows = []
        for J in self.masks:
            img = self.elt_mul({J: 1}, elt)
            row = [0] * self.dim
            for K, c in img.items():
                row[self.index[K]] = c
            rows.append(tuple(row))
        return tuple(rows)

    def algebra_generators(self):
        """z * x_k for k < n-1 generate the even subalgebra."""
        z = self.n - 1
        out = []
        for k in range(self.n - 1):
            out.append(self.mono_mul(1 << z, 1 << k))
        return out

    def check_relations(self):
        """x_i^2 = Q(x_i), x_i x_j + x_j x_i = beta(i, j), exhaustively."""
        F = self.field
        for i in range(self.n):
            sq = self.straighten((i, i))
            expected = {0: self._qdiag[i]} if self._qdiag[i] else {}
            if sq != expected:
                return False
            for j in range(i + 1, self.n):
                anti = self.straighten((i, j))
                anti2 = self.straighten((j, i))
                s = dict(anti)
                for K, c in anti2.items():
                    v = F.add(s.get(K, 0), c)
                    if v:
                        s[K] = v
                    elif K in s:
                        del s[K]
                expected = {0: self._beta[i][j]} if self._beta[i][j] else {}
                if s != expected:
                    return False
        return True


def build_clifford(n, q) -> CliffordEven:
    if n not in (7, 9):
        raise ValueError("supported source dimensions: 7 and 9")
    if q not in (2, 3, 4):
        raise ValueError("desk-scale fields: q in {2, 3, 4}")
    p = 2 if q % 2 == 0 else 3
    f = {2: 1, 3: 1, 4: 2}[q]
    space = QuadSpace.odd_radical(make_field(p, f), (n - 1) // 2)
    return CliffordEven(space)


# ---------------------------------------------------------------------------
# module machinery (incremental rref bases, spinning, restriction)
# ---------------------------------------------------------------------------

class ModuleBasis:
    """Incremental reduced basis with pivot bookkeeping."""

    def __init__(self, field, width):
        self.field = field
        self.width = width
        self.rows = []
        self.pivots = []

    def reduce(self, vec):
        F = self.field
        v = list(vec)
        coeffs = []
        for row, piv in zip(self.rows, self.pivots):
            c = v[piv]
            if c:
                for j in range(self.width):
                    if row[j]:
                        v[j] = F.sub(v[j], F.mul(c, row[j]))
            coeffs.append(c)
        return tuple(v), coeffs

    def insert(self, vec):
        """Reduce and insert; returns True if the vector was new."""
        F = self.field
        v, _ = self.reduce(vec)
        piv = None
        for j in range(self.width):
            if v[j]:
                piv = j
                break
        if piv is None:
            return False
        inv = F.inv(v[piv])
        if inv != 1:
            v = tuple(F.mul(inv, c) for c in v)
        # back-substitute into existing rows
        new_rows = []
        for row in self.rows:
            c = row[piv]
            if c:
                row = tuple(F.sub(a, F.mul(c, b)) for a, b in zip(row, v))
            new_rows.append(row)
        self.rows = new_rows
        self.rows.append(tuple(v))
        self.pivots.append(piv)
        order = sorted(range(len(self.pivots)), key=lambda i: self.pivots[i])
        self.rows = [self.rows[i] for i in order]
        self.pivots = [self.pivots[i] for i in order]
        return True

    def coordinatize(self, vec):
        residue, coeffs = self.reduce(vec)
        if any(residue):
            raise AssertionError("vector escapes the module")
        return tuple(coeffs)

    def dim(self):
        return len(self.rows)


def module_spin(field, seeds, mats, width):
    """Smallest subspace containing seeds and closed under the matrices."""
    basis = ModuleBasis(field, width)
    queue = []
    for s in seeds:
        if basis.insert(s):
            queue.append(s)
    while queue:
        v = queue.pop()
        for M in mats:
            img = linalg.vec_mat(field, v, M)
            if basis.insert(img):
                queue.append(img)
    return basis


def local_minpoly(field, A, v):
    """Minimal polynomial of A relative to the vector v."""
    rows = [tuple(v)]
    basis = ModuleBasis(field, len(v))
    basis.insert(v)
    w = tuple(v)
    while True:
        w = linalg.vec_mat(field, w, A)
        rows.append(tuple(w))
        if not basis.insert(w):
            break
    # dependence among rows: kernel of the transposed system
    ker = linalg.kernel_basis(field, [tuple(col) for col in zip(*rows)])
    best = None
    for k in ker:
        deg = max(i for i, c in enumerate(k) if c)
        if best is None or deg < best[0]:
            best = (deg, k)
    coeffs = list(best[1][:best[0] + 1])
    return polys.pmonic(field, coeffs)


def restrict_matrix(field, basis: ModuleBasis, M):
    rows = []
    for b in basis.rows:
        img = linalg.vec_mat(field, b, M)
        rows.append(basis.coordinatize(img))
    return tuple(rows)


def split_spin_module(alg: CliffordEven, seed=0):
    """Find the spin module: returns (basis rows in algebra coordinates,
    restricted matrices of the algebra generators)."""
    F = alg.field
    D = alg.dim
    target = 2 ** ((alg.n - 1) // 2)
    gen_mats = [alg.right_mult_matrix(g) for g in alg.algebra_generators()]
    rng = random.Random(0x5917 + seed)

    ambient_basis = ModuleBasis(F, D)
    for i in range(D):
        ambient_basis.insert(tuple(1 if j == i else 0 for j in range(D)))
    cur_mats = gen_mats
    cur_dim = D
    # basis of the current module in ORIGINAL algebra coordinates
    cur_rows = [tuple(1 if j == i else 0 for j in range(D))
                for i in range(D)]

    while cur_dim > target:
        found = None
        for _ in range(80):
            A = _random_algebra_matrix(F, cur_mats, rng)
            v = tuple(rng.randrange(F.q) for _ in range(cur_dim))
            if not any(v):
                continue
            mp = local_minpoly(F, A, v)
            if len(mp) <= 1:
                continue
            p_fac = polys.some_irreducible_factor(F, mp, rng)
            quot, rem = polys.pdivmod(F, mp, p_fac)
            if rem:
                continue
            w = _apply_poly(F, quot, A, v)
            if not any(w):
                continue
            sub = module_spin(F, [w], cur_mats, cur_dim)
            if 0 < sub.dim() < cur_dim:
                found = sub
                break
        if found is None:
            raise RuntimeError("spin module splitting stalled")
        new_mats = [restrict_matrix(F, found, M) for M in cur_mats]
        new_rows = []
        for b in found.rows:
            amb = [0] * D
            for c, row in zip(b, cur_rows):
                if c:
                    for j in range(D):
                        if row[j]:
                            amb[j] = F.add(amb[j], F.mul(c, row[j]))
            new_rows.append(tuple(amb))
        cur_mats = new_mats
        cur_rows = new_rows
        cur_dim = found.dim()
    if cur_dim != target:
        raise AssertionError(f"split ended at dimension {cur_dim}")
    # light irreducibility check: random vectors spin to everything
    for _ in range(3):
        v = tuple(rng.randrange(F.q) for _ in range(cur_dim))
        if not any(v):
            continue
        if module_spin(F, [v], cur_mats, cur_dim).dim() != cur_dim:
            raise AssertionError("split module is not irreducible")
    basis = ModuleBasis(F, D)
    for r in cur_rows:
        basis.insert(r)
    # re-restrict the generators against the final (rref) basis so the two
    # returned objects share one coordinate system
    final_mats = [restrict_matrix(F, basis, M) for M in gen_mats]
    return basis, final_mats


def _random_algebra_matrix(F, mats, rng):
    a = mats[rng.randrange(len(mats))]
    b = mats[rng.randrange(len(mats))]
    out = linalg.mat_mul(F, a, b)
    if rng.randrange(2):
        c = mats[rng.randrange(len(mats))]
        n = len(out)
        out = tuple(tuple(F.add(out[i][j], c[i][j]) for j in range(n))
                    for i in range(n))
    return out


def _apply_poly(F, poly, A, v):
    """v . poly(A) by Horner iteration on the vector."""
    acc = tuple(0 for _ in v)
    for c in reversed(poly):
        acc = linalg.vec_mat(F, acc, A)
        if c:
            acc = tuple(F.add(a, F.mul(c, x)) for a, x in zip(acc, v))
    return acc


# ---------------------------------------------------------------------------
# invariant quadratic forms
# ---------------------------------------------------------------------------

def invariant_quadratic_form(field, mats, dim):
    """The (projectively unique) quadratic form preserved by all mats,
    as an upper-triangular coefficient matrix; asserts a 1-dim solution
    space."""
    F = field
    unknowns = []
    for i in range(dim):
        unknowns.append((i, i))
    for i in range(dim):
        for j in range(i + 1, dim):
            unknowns.append((i, j))
    uidx = {u: k for k, u in enumerate(unknowns)}
    rows = []
    for G in mats:
        # Q(vG) - Q(v) = 0 identically: match coefficients of v_i v_j
        for (i, j) in unknowns:
            row = [0] * len(unknowns)
            for (k, l) in unknowns:
                # coefficient of v_i v_j in (vG)_k (vG)_l
                if i == j:
                    contrib = F.mul(G[i][k], G[i][l])
                    if k == l:
                        contrib = F.mul(G[i][k], G[i][k])
                else:
                    if k == l:
                        c1 = F.mul(G[i][k], G[j][k])
                        contrib = F.add(c1, c1)
                    else:
                        contrib = F.add(F.mul(G[i][k], G[j][l]),
                                        F.mul(G[j][k], G[i][l]))
                if (k, l) == (i, j):
                    contrib = F.sub(contrib, 1)
                if contrib:
                    row[uidx[(k, l)]] = contrib
            if any(row):
                rows.append(tuple(row))
    ker = linalg.kernel_basis(F, rows)
    if len(ker) != 1:
        raise AssertionError(
            f"invariant form space has dimension {len(ker)}, expected 1")
    sol = ker[0]
    qmat = [[0] * dim for _ in range(dim)]
    for (i, j), k in uidx.items():
        qmat[i][j] = sol[k]
    return tuple(tuple(row) for row in qmat)


# ---------------------------------------------------------------------------
# the spin machine
# ---------------------------------------------------------------------------

_MACHINE_CACHE = {}


class SpinMachine:
    """Lifts isometries of V_n (n = 7 or 9) to the 2^((n-1)/2)-dimensional
    spin module and aligns the lifted copy with the standard plus-type frame."""

    def __init__(self, n, q, seed=0):
        self.n = n
        self.q = q
        self.alg = build_clifford(n, q)
        self.space = self.alg.space        # V_n
        self.field = self.alg.field
        self.module_dim = 2 ** ((n - 1) // 2)
        self.basis, self.gen_mats = split_spin_module(self.alg, seed=seed)
        self._align = None
        self.seed = seed

    # -- source group --------------------------------------------------------

    def source_group(self) -> GroupHandle:
        """Omega(V_n): for q even this is the whole isometry group,
        isomorphic to Sp_{n-1}(q); for q odd the Eichler-generated kernel."""
        F = self.field
        sp = self.space
        supply = omega_supply(sp)
        if F.p == 2:
            target = oracles.sp_order(self.q, self.n - 1)
            # reflections live in the full isometry group = Sp copy
            for i in range(sp.dim):
                b = sp.basis(i)
                if sp.eval_Q(b) != 0:
                    supply.append(GroupElt(F, sp.reflection(b)))
            for i in range(0, sp.dim - 1, 2):
                v = sp.add(sp.basis(i), sp.basis(i + 1))
                if sp.eval_Q(v) != 0:
                    supply.append(GroupElt(F, sp.reflection(v)))
        else:
            target = oracles.omega_odd_order(self.q, self.n)
        return assemble(F, sp.dim, supply, target,
                        f"source(O{self.n}({self.q}))", seed=self.seed)

    # -- lifting ---------------------------------------------------------------

    def lift_matrix(self, M_source):
        """Spin-module matrix of a source isometry.

        The Clifford lift is defined up to scalars; dividing by a square root
        of its norm (the product of the Q-values of the reflection factors)
        makes it an exact isometry of the invariant spin form.  For the
        Omega-sources used here that norm is always a square.
        """
        F = self.field
        factors = self.space.reflection_factors(M_source)
        elt = self.alg.unit()
        norm = 1
        pending = None
        for w in factors:
            norm = F.mul(norm, self.space.eval_Q(w))
            if pending is None:
                pending = w
            else:
                elt = self.alg.elt_mul(elt, self.alg.vector_pair(pending, w))
                pending = None
        if pending is not None:
            z = self.space.basis(self.n - 1)
            norm = F.mul(norm, self.space.eval_Q(z))
            elt = self.alg.elt_mul(elt, self.alg.vector_pair(pending, z))
        big = self.alg.right_mult_matrix(elt)
        mat = restrict_matrix(F, self.basis, big)
        mu = F.inv(F.sqrt(norm))
        if mu != 1:
            mat = tuple(tuple(F.mul(mu, c) for c in row) for row in mat)
        return mat

    def _alignment(self, lifted_gens):
        if self._align is None:
            qmat = invariant_quadratic_form(self.field, lifted_gens,
                                            self.module_dim)
            mod_space = QuadSpace(self.field, qmat)
            hyp = mod_space.hyperbolic_basis()
            P = tuple(hyp)
            self._align = (P, linalg.mat_inv(self.field, P))
        return self._align

    def aligned_handle(self, source_gens, target_order, name,
                       projective=False) -> GroupHandle:
        """Lift source generators and conjugate into the standard frame.

        target_order may be a tuple of candidates (the projective image of a
        lifted copy can drop a factor 2 when it contains -1); the realized
        order must match one of them exactly.
        """
        F = self.field
        lifted = [self.lift_matrix(m) for m in source_gens]
        P, Pinv = self._alignment(lifted)
        std_space = QuadSpace.plus_type(F, self.module_dim // 2)
        gens = []
        for mat in lifted:
            std = linalg.mat_mul(F, linalg.mat_mul(F, P, mat), Pinv)
            if not std_space.is_isometry(std):
                raise AssertionError("aligned spin generator breaks Q")
            gens.append(GroupElt(F, std))
        targets = target_order if isinstance(target_order, tuple) \
            else (target_order,)
        h = GroupHandle(F, self.module_dim, gens, name=name,
                        projective=projective, seed=self.seed)
        got = h.order()
        if got not in targets:
            raise AssertionError(
                f"{name}: lifted order {got} not among {targets}")
        return h.freeze()


def symplectic_to_source(mach: SpinMachine, M6):
    """Unique isometry of V_n inducing the given symplectic map on the
    quotient V_n / <z> (q even only): each basis image picks up the z-component
    that repairs its Q-value (squaring is bijective in characteristic 2)."""
    F = mach.field
    if F.p != 2:
        raise ValueError("the quotient lift is a characteristic-2 device")
    sp = mach.space
    n = mach.n
    rows = []
    sqrt_exp = F.p ** (F.f - 1)
    for i in range(n - 1):
        padded = tuple(M6[i]) + (0,)
        want = sp.eval_Q(sp.basis(i))
        got = sp.eval_Q(padded)
        lam = F.pow(F.add(got, want), sqrt_exp)  # sqrt of the defect
        rows.append(padded[:-1] + (lam,))
    rows.append(sp.basis(n - 1))
    if not sp.is_isometry(tuple(rows)):
        raise AssertionError("quotient lift is not an isometry")
    return tuple(rows)


def _normalize_scalar(F, mat):
    for row in mat:
        for c in row:
            if c:
                if c == 1:
                    return mat
                inv = F.inv(c)
                return tuple(tuple(F.mul(inv, x) for x in row2)
                             for row2 in mat)
    raise AssertionError("zero matrix")


def spin_machine(n, q, seed=0) -> SpinMachine:
    key = (n, q)
    m = _MACHINE_CACHE.get(key)
    if m is None:
        m = SpinMachine(n, q, seed=seed)
        _MACHINE_CACHE[key] = m
    return m


def spin_copy(group_dim, q, seed=0, projective=None) -> GroupHandle:
    """The spin image of Omega_{group_dim}(q) (q even: Sp_{group_dim-1}(q))
    inside the standard plus-type space of dimension 2^((group_dim-1)/2),
    aligned with the standard form."""
    mach = spin_machine(group_dim, q, seed=seed)
    src = mach.source_group()
    if projective is None:
        projective = (q % 2 == 1)
    if q % 2 == 0:
        target = oracles.sp_order(q, group_dim - 1)
    else:
        target = oracles.omega_odd_order(q, group_dim)
    name = f"spin(Omega{group_dim}({q}))"
    return mach.aligned_handle([g.matrix for g in src.gens], target, name,
                               projective=projective)
