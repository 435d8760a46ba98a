"""Builders for the subgroup families living inside the plus-type groups.

Everything follows one pattern: emit a generous supply of elements that
provably satisfy the family's defining predicate (form preservation, block
shape, stabilized structure), assemble a handle, and assert its chain order
against the closed-form oracle.  A build that cannot hit its oracle raises
instead of shipping a wrong group.
"""

from __future__ import annotations

import random

from . import linalg, oracles
from .ff import make_field, find_lambda, subfield_embedding
from .grpcore import GroupElt, GroupHandle
from .quadspace import QuadSpace


# ---------------------------------------------------------------------------
# assembled-handle helper
# ---------------------------------------------------------------------------

def assemble(field, dim, gens, target_order, name, projective=False, seed=0,
             slim=True):
    """Handle from gens with exact order check.

    Large supplies are first condensed to a few random words (a chain over 3
    generators is an order of magnitude cheaper than one over 100); if the
    condensed set undershoots, the full supply is used.  Either way the order
    must hit the oracle exactly.
    """
    gens = [g for g in gens if not g.is_identity()]
    if len(gens) > 6:
        rng = random.Random(0xA55E ^ seed)
        for count in (3, 4, 6):
            cand = []
            for _ in range(count):
                w = gens[rng.randrange(len(gens))]
                for _ in range(5):
                    w = w * gens[rng.randrange(len(gens))]
                cand.append(w)
            h = GroupHandle(field, dim, cand, name=name, seed=seed,
                            projective=projective)
            if h.order() == target_order:
                return h.freeze()
    h = GroupHandle(field, dim, gens, name=name, seed=seed,
                    projective=projective)
    got = h.order()
    if got != target_order:
        raise AssertionError(
            f"{name}: built order {got}, oracle {target_order}")
    if slim and len(gens) > 4:
        rng = random.Random(0x51E0 + seed)
        for _ in range(6):
            cand = [h.random_element(rng) for _ in range(2)]
            h2 = GroupHandle(field, dim, cand, name=name, seed=seed,
                             projective=projective)
            if h2.order() == target_order:
                return h2.freeze()
            cand.append(h.random_element(rng))
            h3 = GroupHandle(field, dim, cand, name=name, seed=seed,
                             projective=projective)
            if h3.order() == target_order:
                return h3.freeze()
    return h.freeze()


# ---------------------------------------------------------------------------
# generator supplies
# ---------------------------------------------------------------------------

def sl_supply(field, n):
    """Elementary transvections I + c E_ij."""
    out = []
    coeffs = [1]
    if field.q > 2:
        coeffs.append(field.generator)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            for c in coeffs:
                m = [list(row) for row in linalg.identity(field, n)]
                m[i][j] = c
                out.append(GroupElt(field, m))
    return out


def sp_supply(field, n):
    """Symplectic transvections for the standard alternating form with
    pairs (0,1), (2,3), ...: t_{v,c}: x -> x + c*B(x,v)v."""
    def B(x, y):
        acc = 0
        for k in range(0, n, 2):
            acc = field.add(acc, field.sub(field.mul(x[k], y[k + 1]),
                                           field.mul(x[k + 1], y[k])))
        return acc

    units = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    vecs = list(units)
    for i in range(n):
        for j in range(i + 1, n):
            vecs.append(tuple(field.add(a, b)
                              for a, b in zip(units[i], units[j])))
    coeffs = [1]
    if field.q > 2:
        coeffs.append(field.generator)
    out = []
    for v in vecs:
        for c in coeffs:
            rows = []
            for i in range(n):
                x = units[i]
                coef = field.mul(c, B(x, v))
                rows.append(tuple(field.add(a, field.mul(coef, b))
                                  for a, b in zip(x, v)))
            out.append(GroupElt(field, rows))
    return out


def sp_standard_form(field, n):
    """B(x, y) for the alternating form with pairs (0,1),(2,3),..."""
    def B(x, y):
        acc = 0
        for k in range(0, n, 2):
            acc = field.add(acc, field.sub(field.mul(x[k], y[k + 1]),
                                           field.mul(x[k + 1], y[k])))
        return acc
    return B


def omega_supply(space: QuadSpace, rng_seed=0xE1C, extra_singular=24):
    """Eichler/Siegel maps of a quadratic space: a singular, b in a-perp.

    Generates Omega for Witt index >= 2 (all the spaces built here)."""
    F = space.field
    n = space.dim
    singulars = []
    for i in range(n):
        b = space.basis(i)
        if space.eval_Q(b) == 0:
            singulars.append(b)
    rng = random.Random(rng_seed)
    tries = 0
    while len(singulars) < extra_singular and tries < 4000:
        tries += 1
        v = tuple(rng.randrange(F.q) for _ in range(n))
        if any(v) and space.eval_Q(v) == 0 and v not in singulars:
            singulars.append(v)
    coeffs = [1]
    if F.q > 2:
        coeffs.append(F.generator)
    out = []
    for a in singulars:
        # perp of a: kernel of the single linear condition beta(a, .) = 0
        row = tuple(space.eval_beta(a, space.basis(j)) for j in range(n))
        perp = linalg.kernel_basis(F, [row])
        for b in perp:
            for c in coeffs:
                out.append(GroupElt(F, space.eichler(a, space.scale(c, b))))
    return out


def build_sl_handle(field, n, seed=0):
    return assemble(field, n, sl_supply(field, n), oracles.sl_order(field.q, n),
                    f"SL{n}({field.q})", seed=seed)


def build_sp_handle(field, n, seed=0):
    return assemble(field, n, sp_supply(field, n), oracles.sp_order(field.q, n),
                    f"Sp{n}({field.q})", seed=seed)


def build_omega_handle(space: QuadSpace, target_order, name, seed=0):
    return assemble(space.field, space.dim, omega_supply(space), target_order,
                    name, seed=seed)


# ---------------------------------------------------------------------------
# the ambient group and the parabolic pieces of the notation section
# ---------------------------------------------------------------------------

_AMBIENT_CACHE = {}


def standard_space(q, m) -> QuadSpace:
    p, f = _pf(q)
    return QuadSpace.plus_type(make_field(p, f), m)


def _pf(q):
    for p in (2, 3, 5, 7, 11, 13):
        f = 0
        n = q
        while n % p == 0:
            n //= p
            f += 1
        if n == 1 and f:
            return p, f
    raise ValueError(f"q = {q} is not a prime power in range")


def build_omega_plus(space: QuadSpace, seed=0) -> GroupHandle:
    """Omega(V) for the standard plus-type space, oracle-checked."""
    key = (id(space.field), space.dim)
    h = _AMBIENT_CACHE.get(key)
    if h is None:
        target = oracles.omega_plus_order(space.field.q, space.dim)
        h = build_omega_handle(space, target, f"Omega{space.dim}+({space.field.q})",
                               seed=seed)
        _AMBIENT_CACHE[key] = h
    return h


def build_T(space: QuadSpace, seed=0) -> GroupHandle:
    """T = SL_m(q) on U = <e_1..e_m> with the inverse-transpose action on W."""
    F = space.field
    m = space.standard_m
    gens = [embed_gl_block(space, g.matrix) for g in
            assemble(F, m, sl_supply(F, m), oracles.sl_order(F.q, m),
                     f"SLU{m}", seed=seed, slim=True).gens]
    h = assemble(F, space.dim, gens, oracles.sl_order(F.q, m),
                 f"T=SL{m}({F.q})", seed=seed, slim=False)
    for g in h.gens:
        if not space.is_isometry(g.matrix):
            raise AssertionError("T generator does not preserve Q")
    return h


def embed_gl_block(space: QuadSpace, A) -> GroupElt:
    """U-block A, W-block (A^-1)^T, in the interleaved e,f basis."""
    F = space.field
    m = space.standard_m
    Ainvt = linalg.transpose(linalg.mat_inv(F, A))
    n = space.dim
    rows = [[0] * n for _ in range(n)]
    for i in range(m):
        for j in range(m):
            rows[2 * i][2 * j] = A[i][j]
            rows[2 * i + 1][2 * j + 1] = Ainvt[i][j]
    return GroupElt(F, rows)


def build_R(space: QuadSpace, seed=0) -> GroupHandle:
    """The unipotent radical piece: kernel of Stab(U) on U, order q^(m(m-1)/2),
    generated by eichler(e_i, c e_j)."""
    F = space.field
    m = space.standard_m
    gens = []
    fp_basis = [F.p ** t for t in range(F.f)]
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            for c in fp_basis:
                gens.append(GroupElt(
                    F, space.eichler(space.e(i), space.scale(c, space.e(j)))))
    target = F.q ** (m * (m - 1) // 2)
    h = assemble(F, space.dim, gens, target, f"R(q^{m * (m - 1) // 2})",
                 seed=seed, slim=False)
    for g in h.gens:
        for i in range(1, m + 1):
            if g.apply(space.e(i)) != space.e(i):
                raise AssertionError("R generator moves U")
    return h


def build_gamma(space: QuadSpace) -> GroupElt:
    """The involution swapping e_i and f_i for all i."""
    return GroupElt(space.field,
                    tuple(space.basis(i ^ 1) for i in range(space.dim)))


def build_phi(space: QuadSpace) -> GroupElt:
    """Coordinate p-power map as a semilinear element (identity matrix)."""
    return GroupElt(space.field, linalg.identity(space.field, space.dim),
                    frob=1)


def parabolic_RS(space: QuadSpace, s_handle_on_U: GroupHandle, s_order,
                 name, seed=0) -> GroupHandle:
    """R:S for a subgroup S <= SL_m(q) given by its m x m U-action."""
    F = space.field
    m = space.standard_m
    r = build_R(space, seed=seed)
    gens = list(r.gens)
    for g in s_handle_on_U.gens:
        gens.append(embed_gl_block(space, g.matrix))
    target = F.q ** (m * (m - 1) // 2) * s_order
    return assemble(F, space.dim, gens, target, name, seed=seed, slim=False)


# ---------------------------------------------------------------------------
# field-extension frames (the V-sharp structures)
# ---------------------------------------------------------------------------

class ExtensionFrame:
    """Identification of V = GF(q)^(2m) with a GF(q^2)-space V_sharp carrying
    a Hermitian form (kind="hermitian", Q(v) = bsharp(v, v)) or a plus-type
    quadratic form (kind="quadratic", Q(v) = Tr(Qsharp(v))), aligned so that
    e1 = lambda*E1 and f1 = F1.

    `restrict` turns GF(q^2)-(semi)linear maps on V_sharp into GroupElts on
    the standard space.
    """

    def __init__(self, space: QuadSpace, kind: str):
        if space.standard_m is None or space.standard_m % 2 != 0:
            raise ValueError("frames need the standard space with even m")
        self.space = space
        self.kind = kind
        F = space.field
        self.base = F
        E = make_field(F.p, 2 * F.f)
        self.ext = E
        self.m = space.standard_m          # dim of V_sharp over GF(q^2)
        self.ell = self.m // 2             # hyperbolic pairs in V_sharp
        self.emb = subfield_embedding(F, E)
        self.emb_inv = {img: idx for idx, img in enumerate(self.emb)}
        self.theta = E.generator
        # decompose z in GF(q^2) as x + y*theta with x, y in GF(q)
        self.decomp = {}
        for x in range(F.q):
            ex = self.emb[x]
            for y in range(F.q):
                z = E.add(ex, E.mul(self.emb[y], self.theta))
                self.decomp[z] = (x, y)
        self.lam = find_lambda(E).value
        self._build_alignment()

    # -- V_sharp arithmetic --------------------------------------------------

    def sharp_unit(self, i):
        return tuple(1 if j == i else 0 for j in range(self.m))

    def bsharp(self, x, y):
        """Hermitian form, linear in x, conjugate-linear in y."""
        E = self.ext
        acc = 0
        for k in range(self.ell):
            a, b = x[2 * k], x[2 * k + 1]
            c, d = y[2 * k], y[2 * k + 1]
            acc = E.add(acc, E.mul(a, E.conj(d)))
            acc = E.add(acc, E.mul(b, E.conj(c)))
        return acc

    def qsharp(self, x):
        """Plus-type quadratic form on V_sharp over GF(q^2)."""
        E = self.ext
        acc = 0
        for k in range(self.ell):
            acc = E.add(acc, E.mul(x[2 * k], x[2 * k + 1]))
        return acc

    def base_Q_of_sharp(self, x):
        """Q(v) computed through the frame identity, as a base-field index."""
        E = self.ext
        if self.kind == "hermitian":
            val = self.bsharp(x, x)
        else:
            q = self.qsharp(x)
            val = E.add(q, E.conj(q))  # trace
        out = self.emb_inv.get(val)
        if out is None:
            raise AssertionError("frame form value escaped the base field")
        return out

    # -- raw restriction -----------------------------------------------------

    def sharp_to_raw(self, x):
        """GF(q)-coordinates of a V_sharp vector in the raw basis
        (E1, theta E1, F1, theta F1, E2, ...)."""
        out = []
        for z in x:
            a, b = self.decomp[z]
            out.append(a)
            out.append(b)
        return tuple(out)

    def raw_to_sharp(self, v):
        E = self.ext
        out = []
        for i in range(self.m):
            a, b = v[2 * i], v[2 * i + 1]
            out.append(E.add(self.emb[a], E.mul(self.emb[b], self.theta)))
        return tuple(out)

    def _build_alignment(self):
        """Raw-coordinate quadratic space and the change of basis P taking the
        standard space onto it with e1 -> lambda E1, f1 -> F1."""
        F = self.base
        n = 2 * self.m
        vals = {}

        def rawQ(v):
            return self.base_Q_of_sharp(self.raw_to_sharp(v))

        qmat = [[0] * n for _ in range(n)]
        units = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
        for i in range(n):
            qmat[i][i] = rawQ(units[i])
        for i in range(n):
            for j in range(i + 1, n):
                both = tuple(F.add(a, b) for a, b in zip(units[i], units[j]))
                qij = F.sub(F.sub(rawQ(both), qmat[i][i]), qmat[j][j])
                qmat[i][j] = qij
        self.rawspace = QuadSpace(F, qmat)
        lamE1 = self.sharp_to_raw(tuple(
            self.lam if i == 0 else 0 for i in range(self.m)))
        F1 = self.sharp_to_raw(self.sharp_unit(1))
        basis = self.rawspace.hyperbolic_basis(first_pairs=[(lamE1, F1)])
        self.P = tuple(basis)              # rows: std basis images in raw coords
        self.Pinv = linalg.mat_inv(F, self.P)

    def raw_elt_to_std(self, M_raw, frob=0) -> GroupElt:
        F = self.base
        Pf = linalg.mat_frob(F, self.P, frob)
        mat = linalg.mat_mul(F, linalg.mat_mul(F, Pf, M_raw), self.Pinv)
        return GroupElt(F, mat, frob=frob)

    def restrict(self, sharp_rows, frob_p_steps=0) -> GroupElt:
        """GroupElt on the standard space from a map on V_sharp given by the
        images of the sharp basis vectors (a p^frob_p_steps-semilinear map).

        T(theta E_i) = theta^(p^j) T(E_i) for a p^j-semilinear T.
        """
        E = self.ext
        tp = E.pow(self.theta, E.p ** frob_p_steps)
        full = []
        for i in range(self.m):
            img = sharp_rows[i]
            full.append(self.sharp_to_raw(img))
            full.append(self.sharp_to_raw(tuple(E.mul(tp, z) for z in img)))
        return self.raw_elt_to_std(tuple(full), frob=frob_p_steps)

    def restrict_linear(self, sharp_matrix) -> GroupElt:
        """Restrict a GF(q^2)-linear map given as an m x m matrix."""
        E = self.ext
        rows = [linalg.vec_mat(E, self.sharp_unit(i), sharp_matrix)
                for i in range(self.m)]
        return self.restrict(rows, frob_p_steps=0)

    def frobenius_sharp(self) -> GroupElt:
        """xi (hermitian) or psi (quadratic): the coordinate p-power map of
        V_sharp, as a GroupElt on the standard space."""
        units = [self.sharp_unit(i) for i in range(self.m)]
        return self.restrict(units, frob_p_steps=1)

    def reflection_sharp(self, w_sharp) -> GroupElt:
        """r'_w for the quadratic frame: reflection of V_sharp over GF(q^2)."""
        if self.kind != "quadratic":
            raise ValueError("r'_w lives in the quadratic frame")
        E = self.ext
        qw = self.qsharp(w_sharp)
        if qw == 0:
            raise ValueError("singular w")
        inv_qw = E.inv(qw)
        rows = []
        for i in range(self.m):
            x = self.sharp_unit(i)
            bxw = E.sub(E.sub(self.qsharp(tuple(E.add(a, b) for a, b in
                                                zip(x, w_sharp))),
                              self.qsharp(x)), qw)
            c = E.mul(bxw, inv_qw)
            rows.append(tuple(E.sub(a, E.mul(c, b))
                              for a, b in zip(x, w_sharp)))
        return self.restrict(rows)


def hermitian_frame(space) -> ExtensionFrame:
    return ExtensionFrame(space, "hermitian")


def quadratic_frame(space) -> ExtensionFrame:
    return ExtensionFrame(space, "quadratic")


# ---------------------------------------------------------------------------
# unitary and extension-orthogonal handles through the frames
# ---------------------------------------------------------------------------

def su_supply_sharp(frame: ExtensionFrame):
    """Unitary transvections and Siegel elements on V_sharp (as sharp-row
    matrices), filtered to exact bsharp-preservation and det 1."""
    E = frame.ext
    m = frame.m
    units = [frame.sharp_unit(i) for i in range(m)]
    trace_zero = [a for a in range(E.q) if E.add(a, E.conj(a)) == 0]
    isotropic = list(units)
    for i in range(m):
        for j in range(i + 1, m):
            v = tuple(E.add(a, b) for a, b in zip(units[i], units[j]))
            if frame.bsharp(v, v) == 0:
                isotropic.append(v)

    def transvection(u, a):
        rows = []
        for i in range(m):
            x = units[i]
            c = E.mul(a, frame.bsharp(x, u))
            rows.append(tuple(E.add(p_, E.mul(c, q_)) for p_, q_ in zip(x, u)))
        return tuple(rows)

    out = []
    for u in isotropic:
        if frame.bsharp(u, u) != 0:
            continue
        for a in trace_zero:
            if a == 0:
                continue
            out.append(transvection(u, a))
    # Siegel elements between isotropic units: x += c b(x,Ej) Ei - c^q b(x,Ei) Ej
    for ii in range(m):
        for jj in range(m):
            if ii == jj:
                continue
            u, v = units[ii], units[jj]
            if frame.bsharp(u, u) or frame.bsharp(v, v) or frame.bsharp(u, v):
                continue
            for c in range(1, E.q):
                rows = []
                for i in range(m):
                    x = units[i]
                    t1 = E.mul(c, frame.bsharp(x, v))
                    t2 = E.neg(E.mul(E.conj(c), frame.bsharp(x, u)))
                    row = tuple(E.add(xk, E.add(E.mul(t1, uk), E.mul(t2, vk)))
                                for xk, uk, vk in zip(x, u, v))
                    rows.append(row)
                out.append(tuple(rows))
    # filter exactly
    good = []
    for rows in out:
        if linalg.mat_det(E, rows) != 1:
            continue
        ok = True
        for i in range(m):
            for j in range(m):
                if frame.bsharp(rows[i], rows[j]) != frame.bsharp(units[i],
                                                                  units[j]):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            good.append(rows)
    return good


def build_su(frame: ExtensionFrame, seed=0) -> GroupHandle:
    """SU(V_sharp) restricted into the standard space, oracle-checked."""
    if frame.kind != "hermitian":
        raise ValueError("SU needs the hermitian frame")
    F = frame.base
    gens = [frame.restrict_linear(rows) for rows in su_supply_sharp(frame)]
    target = oracles.su_order(F.q, frame.m)
    h = assemble(F, frame.space.dim, gens, target,
                 f"SU{frame.m}({F.q})", seed=seed)
    sp = frame.space
    for g in h.gens:
        if not sp.is_isometry(g.matrix):
            raise AssertionError("SU generator does not preserve Q")
    return h


def build_omega_ext(frame: ExtensionFrame, seed=0) -> GroupHandle:
    """Omega(V_sharp) (plus type over GF(q^2)) restricted into the standard
    space."""
    if frame.kind != "quadratic":
        raise ValueError("Omega(V_sharp) needs the quadratic frame")
    E = frame.ext
    sharp_space = QuadSpace.plus_type(E, frame.ell)
    target = oracles.omega_plus_order(E.q, frame.m)
    small = build_omega_handle(sharp_space, target,
                               f"Omega{frame.m}+({E.q})", seed=seed)
    gens = [frame.restrict_linear(g.matrix) for g in small.gens]
    h = assemble(frame.base, frame.space.dim, gens, target,
                 f"Omega{frame.m}+({E.q})<Omega", seed=seed, slim=False)
    for g in h.gens:
        if not frame.space.is_isometry(g.matrix):
            raise AssertionError("extension Omega generator breaks Q")
    return h


# ---------------------------------------------------------------------------
# subfield subgroups
# ---------------------------------------------------------------------------

def subfield_minus_basis(space: QuadSpace):
    """Ambient coordinates of the GF(q0)-lattice basis whose form is minus."""
    F = space.field
    m = space.standard_m
    w = F.generator
    wq = F.conj(w)
    basis = []
    for i in range(1, m):
        basis.append(space.e(i))
        basis.append(space.f(i))
    basis.append(space.add(space.e(m), space.f(m)))
    basis.append(space.add(space.scale(w, space.e(m)),
                           space.scale(wq, space.f(m))))
    return basis


def build_subfield_minus(space: QuadSpace, seed=0) -> GroupHandle:
    """Omega_2m^-(q0) < Omega_2m^+(q0^2): the GF(q0)-structure spanned by
    e_1,f_1,...,e_{m-1},f_{m-1} and the twisted last pair
    (e_m + f_m, w e_m + w^q0 f_m), whose GF(q0)-form is of minus type."""
    F = space.field
    if F.f % 2 != 0:
        raise ValueError("ambient field must be a square")
    F0 = make_field(F.p, F.f // 2)
    emb = subfield_embedding(F0, F)
    m = space.standard_m
    n = space.dim
    basis = subfield_minus_basis(space)
    # GF(q0) form on the span
    emb_inv = {img: idx for idx, img in enumerate(emb)}

    def q0_of(v):
        val = space.eval_Q(v)
        out = emb_inv.get(val)
        if out is None:
            raise AssertionError("subfield form value outside GF(q0)")
        return out

    qmat = [[0] * n for _ in range(n)]
    for i in range(n):
        qmat[i][i] = q0_of(basis[i])
    for i in range(n):
        for j in range(i + 1, n):
            both = space.add(basis[i], basis[j])
            qmat[i][j] = F0.sub(F0.sub(q0_of(both), qmat[i][i]), qmat[j][j])
    sub_space = QuadSpace(F0, qmat)
    target = oracles.omega_minus_order(F0.q, n)
    small = build_omega_handle(sub_space, target,
                               f"Omega{n}-({F0.q})", seed=seed)
    # push into the ambient coordinates
    P = tuple(basis)
    Pinv = linalg.mat_inv(F, P)
    gens = []
    for g in small.gens:
        G_amb = tuple(tuple(emb[c] for c in row) for row in g.matrix)
        # g is written in B0-coordinates; ambient matrix is P^-1 g P
        mat = linalg.mat_mul(F, linalg.mat_mul(F, Pinv, G_amb), P)
        gens.append(GroupElt(F, mat))
    h = assemble(F, n, gens, target, f"Omega{n}-({F0.q})<plus", seed=seed,
                 slim=False)
    for g in h.gens:
        if not space.is_isometry(g.matrix):
            raise AssertionError("subfield generator breaks Q")
    return h


def build_subfield_plus(space: QuadSpace, seed=0) -> GroupHandle:
    """Omega_2m^+(q0) < Omega_2m^+(q0^r) on the same standard basis."""
    F = space.field
    if F.f % 2 != 0:
        raise ValueError("ambient field must be a square")
    F0 = make_field(F.p, F.f // 2)
    emb = subfield_embedding(F0, F)
    space0 = QuadSpace.plus_type(F0, space.standard_m)
    target = oracles.omega_plus_order(F0.q, space.dim)
    small = build_omega_handle(space0, target,
                               f"Omega{space.dim}+({F0.q})", seed=seed)
    gens = [GroupElt(F, tuple(tuple(emb[c] for c in row) for row in g.matrix))
            for g in small.gens]
    return assemble(F, space.dim, gens, target,
                    f"Omega{space.dim}+({F0.q})<plus", seed=seed, slim=False)


# ---------------------------------------------------------------------------
# linear-frame helpers (extension subgroups inside T)
# ---------------------------------------------------------------------------

def restrict_scalars_linear(field, b, a, sharp_matrix, ext=None):
    """GF(q^b)-matrix (a x a) to a GF(q)-matrix (ab x ab), basis
    E1, theta E1, ..., theta^(b-1) E1, E2, ..."""
    F = field
    E = ext or make_field(F.p, F.f * b)
    emb = subfield_embedding(F, E)
    theta = E.generator
    # decompose in the power basis of theta over GF(q)
    pows = [E.pow(theta, t) for t in range(b)]
    table = {}
    idx = [0] * b

    def rec(t, acc):
        if t == b:
            table[acc] = tuple(idx)
            return
        for c in range(F.q):
            idx[t] = c
            rec(t + 1, E.add(acc, E.mul(emb[c], pows[t])))
    rec(0, 0)
    rows = []
    for i in range(a):
        for t in range(b):
            # image of theta^t E_i
            img = [E.mul(pows[t], sharp_matrix[i][j]) for j in range(a)]
            row = []
            for z in img:
                row.extend(table[z])
            rows.append(tuple(row))
    return tuple(rows)


def build_ext_in_T(space: QuadSpace, kind, a, b, seed=0,
                   custom=None) -> GroupHandle:
    """SL_a(q^b) or Sp_a(q^b) (or a custom GF(q^b) matrix group) acting on
    U through scalar restriction, embedded with the inverse-transpose W-block."""
    F = space.field
    m = space.standard_m
    if a * b != m:
        raise ValueError("need m = a*b")
    E = make_field(F.p, F.f * b)
    if custom is not None:
        small_gens, target = custom
    elif kind == "SL":
        small_gens = [g.matrix for g in build_sl_handle(E, a, seed=seed).gens]
        target = oracles.sl_order(E.q, a)
    elif kind == "Sp":
        small_gens = [g.matrix for g in build_sp_handle(E, a, seed=seed).gens]
        target = oracles.sp_order(E.q, a)
    else:
        raise ValueError(kind)
    gens = []
    for sm in small_gens:
        U_block = restrict_scalars_linear(F, b, a, sm, ext=E)
        gens.append(embed_gl_block(space, U_block))
    return assemble(F, space.dim, gens, target,
                    f"{kind}{a}({E.q})<T", seed=seed, slim=False)


def build_sp_in_T(space: QuadSpace, seed=0) -> GroupHandle:
    """Sp_m(q) < SL_m(q) = T (standard alternating form on the U coordinates)."""
    F = space.field
    m = space.standard_m
    small = build_sp_handle(F, m, seed=seed)
    gens = [embed_gl_block(space, g.matrix) for g in small.gens]
    return assemble(F, space.dim, gens, oracles.sp_order(F.q, m),
                    f"Sp{m}({F.q})<T", seed=seed, slim=False)
