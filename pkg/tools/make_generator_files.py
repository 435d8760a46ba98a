#!/usr/bin/env python3
"""Derive the shipped generator files from first principles.

Everything here is reproducible machinery, not copied data:

* alternating-group subgroups of the dimension-8 plus-type group over GF(2)
  come from the even-weight permutation module of A9 (Q = half the weight),
  aligned to the standard frame by a hyperbolic basis;
* the exotic A7 inside SL4(2) is found by seeded random 2-generation with an
  exact order target (every order-2520 subgroup of SL4(2) = A8 is a point
  stabilizer, i.e. the irreducible A7);
* the 2^4:A5 and 2^5:A6 subgroups are P:S with P an S-invariant submodule of
  the unipotent radical R, S = SL2(4) resp. Sp4(2)';
* the subgroups of the plus-type group over GF(3) (rows about the field-3
  sporadic table) are Weyl groups of root subsystems of E8 acting on the
  root lattice mod 3 (reflections from the Cartan matrix), rotation parts
  only, aligned to the standard frame.

Every file gets a declared order; ingest re-verifies it with a fresh chain.
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from orthofact import linalg, oracles
from orthofact.ff import make_field
from orthofact.grpcore import GroupElt, GroupHandle
from orthofact.quadspace import QuadSpace
from orthofact.constructions import (
    standard_space, build_omega_plus, build_T, build_R, parabolic_RS,
    build_sl_handle, build_sp_handle, restrict_scalars_linear, assemble,
    embed_gl_block,
)
from orthofact.grpcore import commutator_closure
from orthofact.spinlift import (
    module_spin, restrict_matrix, local_minpoly, ModuleBasis,
)
from orthofact import polys
from orthofact.genfile import write_generator_file, ingest

OUT = os.path.join(os.path.dirname(__file__), "..", "src", "orthofact",
                   "data", "generators")


# ---------------------------------------------------------------------------
# permutations -> matrices on the even-weight module of A9
# ---------------------------------------------------------------------------

def perm_cycles(n, cycles):
    p = list(range(n))
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:]):
            p[a - 1] = b - 1
        p[cyc[-1] - 1] = cyc[0] - 1
    return p


def a9_matrix(space, perm):
    """Action of a permutation of {1..9} on basis b_i = e_i + e_9 (GF(2))."""
    F = space.field
    rows = []
    for i in range(8):
        img_i = perm[i]        # image of point i+1, 0-based
        img_9 = perm[8]
        cols = [0] * 8
        if img_9 == 8:
            cols[img_i] = 1
        elif img_i == 8:
            cols[img_9] = 1
        else:
            cols[img_i] ^= 1
            cols[img_9] ^= 1
        rows.append(tuple(cols))
    return tuple(rows)


def permutation_module_frame():
    """The GF(2) space of b_i = e_i + e_9 with Q = weight/2 and the change of
    basis onto the standard plus-type frame."""
    F = make_field(2, 1)
    qmat = [[0] * 8 for _ in range(8)]
    for i in range(8):
        qmat[i][i] = 1          # Q(b_i) = wt(2)/2 = 1
        for j in range(i + 1, 8):
            qmat[i][j] = 1      # beta(b_i, b_j) = |{i,9} cap {j,9}| = 1
    raw = QuadSpace(F, qmat)
    basis = raw.hyperbolic_basis()
    P = tuple(basis)
    Pinv = linalg.mat_inv(F, P)
    std = standard_space(2, 4)
    return raw, P, Pinv, std


def perm_group_handle(perms, name, order):
    raw, P, Pinv, std = permutation_module_frame()
    F = raw.field
    gens = []
    for perm in perms:
        M = a9_matrix(raw, perm)
        if not raw.is_isometry(M):
            raise AssertionError("permutation action broke the raw form")
        mat = linalg.mat_mul(F, linalg.mat_mul(F, P, M), Pinv)
        if not std.is_isometry(mat):
            raise AssertionError("aligned permutation matrix broke Q")
        gens.append(GroupElt(F, mat))
    return assemble(F, 8, gens, order, name, slim=False)


def make_alternating_files():
    std = standard_space(2, 4)
    omega = build_omega_plus(std)
    specs = {
        "a9_o8p2.gen": ([[(1, 2, 3)], [(1, 2, 3, 4, 5, 6, 7, 8, 9)]],
                        oracles.alternating_order(9), "A9"),
        "a8_point_o8p2.gen": ([[(1, 2, 3)], [(2, 3, 4, 5, 6, 7, 8)]],
                              oracles.alternating_order(8), "A8 (point class)"),
        "a7_o8p2.gen": ([[(1, 2, 3)], [(1, 2, 3, 4, 5, 6, 7)]],
                        oracles.alternating_order(7), "A7"),
        "a6_o8p2.gen": ([[(1, 2, 3)], [(2, 3, 4, 5, 6)]],
                       oracles.alternating_order(6), "A6"),
        "s5_o8p2.gen": ([[(1, 2, 3, 4, 5)], [(1, 2), (8, 9)]],
                       120, "S5 (odd part doubled by a far transposition)"),
    }
    for fname, (cycle_lists, order, doc) in specs.items():
        perms = [perm_cycles(9, [tuple(c) for c in cycles] if
                             isinstance(cycles[0], tuple) else cycles)
                 for cycles in cycle_lists]
        h = perm_group_handle(perms, fname, order)
        for g in h.gens:
            if not omega.is_member(g):
                raise AssertionError(f"{fname}: generator escaped Omega")
        write_generator_file(os.path.join(OUT, fname), h,
                             declared_order=order, form=("plus", 4),
                             comment=f"{doc}, even-weight permutation module")
        print("wrote", fname, order)


def make_a8_levi_file():
    std = standard_space(2, 4)
    t = build_T(std)
    write_generator_file(os.path.join(OUT, "a8_levi_o8p2.gen"), t,
                         declared_order=20160, form=("plus", 4),
                         comment="SL4(2) Levi copy (A8, second class)")
    print("wrote a8_levi_o8p2.gen")


# ---------------------------------------------------------------------------
# the exotic A7 < SL4(2) by chopping Lambda^2 of the 6-dim A8-module
# ---------------------------------------------------------------------------

def make_p_semidirect_files():
    """2^6:A7, 2^4:A5 and 2^5:A6 inside the dimension-8 group over GF(2)."""
    F = make_field(2, 1)
    std = standard_space(2, 4)
    omega = build_omega_plus(std)

    # --- exotic A7 < SL4(2) ------------------------------------------------
    # any subgroup of order 2520 in SL4(2) = A8 is a point stabilizer, i.e.
    # the irreducible A7; find one by seeded random 2-generation
    a7_handle = _find_a7_in_sl42(F)
    rs = parabolic_RS(std, a7_handle, 2520, "R:A7")
    write_generator_file(os.path.join(OUT, "p2e6a7_o8p2.gen"), rs,
                         declared_order=64 * 2520, form=("plus", 4),
                         comment="2^6:A7 = R:A7, A7 by random 2-generation in SL4(2)")
    print("wrote p2e6a7_o8p2.gen")
    # the second class (swapped by a reflection), the partner of the unitary
    # factor rather than the vector stabilizer
    refl = GroupElt(F, std.reflection(std.add(std.e(1), std.f(1))))
    twin = rs.conjugate(refl)
    twin_h = assemble(F, 8, twin.gens, 64 * 2520, "R:A7 twin", slim=False)
    write_generator_file(os.path.join(OUT, "p2e6a7b_o8p2.gen"), twin_h,
                         declared_order=64 * 2520, form=("plus", 4),
                         comment="2^6:A7, second class (reflection conjugate)")
    print("wrote p2e6a7b_o8p2.gen")

    # --- 2^4:A5 = P:SL2(4) ---------------------------------------------------
    sl24_u = [restrict_scalars_linear(F, 2, 2, g.matrix)
              for g in build_sl_handle(make_field(2, 2), 2).gens]
    p_basis, s_handle = _radical_submodule(std, sl24_u, 4)
    _write_psemi(std, omega, p_basis, s_handle, 60, 16,
                 "p2e4a5_o8p2.gen", "2^4:A5 = P:SL2(4)")

    # --- 2^5:A6 = P:Sp4(2)' ---------------------------------------------------
    sp4 = build_sp_handle(F, 4)
    a6 = commutator_closure(sp4, 360, rng_seed=2)
    p_basis, s_handle = _radical_submodule(std, [g.matrix for g in a6.gens],
                                           5)
    _write_psemi(std, omega, p_basis, s_handle, 360, 32,
                 "p2e5a6_o8p2.gen", "2^5:A6 = P:Sp4(2)'")


def _find_a7_in_sl42(F, seed=31):
    import random
    rng = random.Random(seed)
    sl42 = build_sl_handle(F, 4)
    for _ in range(4000):
        a = sl42.random_element(rng)
        b = sl42.random_element(rng)
        h = GroupHandle(F, 4, [a, b])
        if h.order() == 2520:
            return h
    raise RuntimeError("no A7 found in SL4(2)")


def _radical_coords(space, relt):
    """Coordinates of an element of R: x[(i,k)] = coeff of e_i in f_k image."""
    m = space.standard_m
    out = []
    for i in range(1, m + 1):
        for k in range(i + 1, m + 1):
            out.append(relt[2 * (k - 1) + 1][2 * (i - 1)])
    return tuple(out)


def _radical_element(space, coords):
    F = space.field
    m = space.standard_m
    mat = linalg.identity(F, space.dim)
    idx = 0
    for i in range(1, m + 1):
        for k in range(i + 1, m + 1):
            c = coords[idx]
            idx += 1
            if c:
                mat = linalg.mat_mul(F, mat,
                                     space.eichler(space.e(i),
                                                   space.scale(c, space.e(k))))
    return mat


def _radical_submodule(space, s_gens_u, want_dim):
    """S-invariant GF(2)-submodule of R of the given dimension; S given by
    m x m U-blocks."""
    F = space.field
    m = space.standard_m
    dimR = m * (m - 1) // 2
    embedded = [embed_gl_block(space, g) for g in s_gens_u]
    act_mats = []
    for g in embedded:
        gi = g.inverse()
        rows = []
        for t in range(dimR):
            coords = tuple(1 if j == t else 0 for j in range(dimR))
            relt = _radical_element(space, coords)
            conj = linalg.mat_mul(F, linalg.mat_mul(F, gi.matrix, relt),
                                  g.matrix)
            rows.append(_radical_coords(space, conj))
        act_mats.append(tuple(rows))
    # invariant submodules by spinning each unit vector
    best = None
    for t in range(dimR):
        seed = tuple(1 if j == t else 0 for j in range(dimR))
        sub = module_spin(F, [seed], act_mats, dimR)
        if sub.dim() == want_dim:
            best = sub
            break
    if best is None:
        # try sums of pairs
        for t1 in range(dimR):
            for t2 in range(t1 + 1, dimR):
                seed = tuple(1 if j in (t1, t2) else 0 for j in range(dimR))
                sub = module_spin(F, [seed], act_mats, dimR)
                if sub.dim() == want_dim:
                    best = sub
                    break
            if best:
                break
    if best is None:
        raise RuntimeError(f"no {want_dim}-dim submodule of R found")
    p_gens = [GroupElt(F, _radical_element(space, row)) for row in best.rows]
    s_handle = embedded
    return p_gens, s_handle


def _write_psemi(space, omega, p_gens, s_embedded, s_order, p_order, fname,
                 doc):
    F = space.field
    target = p_order * s_order
    h = assemble(F, space.dim, p_gens + s_embedded, target, fname, slim=False)
    for g in h.gens:
        if not omega.is_member(g):
            raise AssertionError(f"{fname}: generator escaped Omega")
    write_generator_file(os.path.join(OUT, fname), h, declared_order=target,
                         form=("plus", 4), comment=doc)
    print("wrote", fname, target)


# ---------------------------------------------------------------------------
# Weyl subgroups of E8 on the root lattice mod 3
# ---------------------------------------------------------------------------

E8_ADJ = [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)]
E8_THETA = (2, 3, 4, 6, 5, 4, 3, 2)   # highest root in the simple-root basis


def e8_data():
    F = make_field(3, 1)
    G = [[0] * 8 for _ in range(8)]
    for i in range(8):
        G[i][i] = 2
    for a, b in E8_ADJ:
        G[a - 1][b - 1] = -1 % 3
        G[b - 1][a - 1] = -1 % 3
    qmat = [[0] * 8 for _ in range(8)]
    for i in range(8):
        qmat[i][i] = 1
        for j in range(i + 1, 8):
            qmat[i][j] = G[i][j]
    space = QuadSpace(F, qmat)
    basis = space.hyperbolic_basis()
    P = tuple(basis)
    Pinv = linalg.mat_inv(F, P)
    return F, G, space, P, Pinv


def reflection_in_root(F, G, space, root):
    """r_root(v) = v - (v, root) root over GF(3) in the simple-root basis."""
    rows = []
    for i in range(8):
        unit = tuple(1 if j == i else 0 for j in range(8))
        inner = 0
        for k in range(8):
            if root[k]:
                inner = F.add(inner, F.mul(G[i][k] % 3, root[k]))
        row = tuple(F.sub(unit[j], F.mul(inner, root[j])) for j in range(8))
        rows.append(row)
    mat = tuple(rows)
    if not space.is_isometry(mat):
        raise AssertionError("root reflection broke the E8 form mod 3")
    return mat


def make_weyl_files():
    F, G, space, P, Pinv = e8_data()
    std = standard_space(3, 4)

    def align(mat):
        out = linalg.mat_mul(F, linalg.mat_mul(F, P, mat), Pinv)
        if not std.is_isometry(out):
            raise AssertionError("aligned Weyl matrix broke Q")
        return out

    simples = []
    for i in range(8):
        root = tuple(1 if j == i else 0 for j in range(8))
        simples.append(reflection_in_root(F, G, space, root))
    theta = tuple(c % 3 for c in E8_THETA)
    r_theta = reflection_in_root(F, G, space, theta)

    def rotations(reflections):
        first = reflections[0]
        return [linalg.mat_mul(F, first, r) for r in reflections[1:]]

    jobs = [
        ("w_o8p2_po8p3.gen", simples, 348364800,
         "rotation part of W(E8) mod 3 (Omega8+(2) copy, contains -1)"),
        ("w_sp62_po8p3.gen", [simples[i] for i in range(7)], 1451520,
         "rotation part of W(E7) mod 3 (Sp6(2) copy)"),
        ("w_su42_po8p3.gen", [simples[i] for i in range(6)], 25920,
         "rotation part of W(E6) mod 3 (SU4(2) copy)"),
        ("w_a9_po8p3.gen",
         [simples[0], simples[2], simples[3], simples[4], simples[5],
          simples[6], simples[7], r_theta], 181440,
         "rotation part of W(A8 subsystem) mod 3 (A9 copy)"),
    ]
    for fname, refl, order, doc in jobs:
        gens = [GroupElt(F, align(m)) for m in rotations(refl)]
        h = assemble(F, 8, gens, order, fname, slim=False)
        for g in h.gens:
            if not std.in_omega(g.matrix):
                raise AssertionError(f"{fname}: generator outside Omega")
        write_generator_file(os.path.join(OUT, fname), h,
                             declared_order=order, form=("plus", 4),
                             comment=doc)
        print("wrote", fname, order)


def main():
    os.makedirs(OUT, exist_ok=True)
    make_alternating_files()
    make_a8_levi_file()
    make_p_semidirect_files()
    make_weyl_files()
    # ingest round-trip sanity
    for fname in sorted(os.listdir(OUT)):
        ingest(os.path.join(OUT, fname))
    print("all files ingest cleanly")


if __name__ == "__main__":
    main()
