import random

import pytest

from orthofact import linalg, oracles
from orthofact.ff import make_field
from orthofact.grpcore import GroupElt, GroupHandle
from orthofact.quadspace import QuadSpace, DistinguishedVectors
from orthofact.constructions import (
    standard_space, build_omega_plus, build_T, build_R, build_gamma,
    build_phi, parabolic_RS, hermitian_frame, quadratic_frame, build_su,
    build_omega_ext, build_subfield_minus, build_ext_in_T, build_sp_in_T,
    build_sl_handle, build_sp_handle, embed_gl_block,
)


@pytest.fixture(scope="module")
def sp42():
    return standard_space(2, 4)


@pytest.fixture(scope="module")
def omega842(sp42):
    return build_omega_plus(sp42)


def test_omega_plus_order_m4_q2(sp42, omega842):
    assert omega842.order() == 174182400


def test_omega_orbit_nonsingular(sp42, omega842):
    ef = sp42.add(sp42.e(1), sp42.f(1))
    assert len(omega842.orbit(ef)) == 120


def test_omega_orbit_singular(sp42, omega842):
    assert len(omega842.orbit(sp42.e(1))) == 135


def test_stab_e1f1_is_sp6(sp42, omega842):
    ef = sp42.add(sp42.e(1), sp42.f(1))
    stab = omega842.stabilizer(ef)
    assert stab.order() == 1451520


def test_stab_e1_order(sp42, omega842):
    stab = omega842.stabilizer(sp42.e(1))
    assert stab.order() == 174182400 // 135


def test_T_order_and_blocks(sp42):
    t = build_T(sp42)
    assert t.order() == 20160
    # W-block is the inverse transpose of the U-block
    F = sp42.field
    m = sp42.standard_m
    for g in t.gens:
        A = tuple(tuple(g.matrix[2 * i][2 * j] for j in range(m))
                  for i in range(m))
        B = tuple(tuple(g.matrix[2 * i + 1][2 * j + 1] for j in range(m))
                  for i in range(m))
        assert B == linalg.transpose(linalg.mat_inv(F, A))
    # T fixes U setwise
    orb = t.orbit(sp42.e(1))
    for pt in orb.points():
        v = t.ctx.decode(pt)
        assert all(v[2 * i + 1] == 0 for i in range(m))


def test_T_inside_omega(sp42, omega842):
    t = build_T(sp42)
    for g in t.gens:
        assert omega842.is_member(g)
        assert sp42.in_omega(g.matrix)


@pytest.mark.parametrize("q,expected", [(2, 64), (3, 729)])
def test_R_order(q, expected):
    sp = standard_space(q, 4)
    r = build_R(sp)
    assert r.order() == expected


def test_R_fixes_U_pointwise():
    sp = standard_space(2, 4)
    r = build_R(sp)
    for g in r.gens:
        for i in range(1, 5):
            assert g.apply(sp.e(i)) == sp.e(i)


def test_R_cap_K_order(sp42, omega842):
    # kernel invariant: |R cap Stab(e1+f1)| = q^((m-1)(m-2)/2)
    ef = sp42.add(sp42.e(1), sp42.f(1))
    k = omega842.stabilizer(ef)
    r = build_R(sp42)
    count = sum(1 for elt in r.elements() if k.is_member(elt))
    assert count == 2 ** 3


def test_projective_vector_order_ratio_q3():
    # |vector handle| = |projective handle| * |scalar kernel| for the
    # dimension-8 group over GF(3) (kernel = {+-1})
    sp = standard_space(3, 4)
    g = build_omega_plus(sp)
    vec_order = g.order()
    proj = GroupHandle(sp.field, 8, g.gens, projective=True)
    assert vec_order == proj.order() * 2
    assert vec_order == oracles.omega_plus_order(3, 8)


@pytest.mark.parametrize("q", [2, 3])
def test_R_cap_K_q(q):
    sp = standard_space(q, 4)
    g = build_omega_plus(sp)
    ef = sp.add(sp.e(1), sp.f(1))
    k = g.stabilizer(ef)
    r = build_R(sp)
    count = sum(1 for elt in r.elements() if k.is_member(elt))
    assert count == q ** 3


@pytest.mark.parametrize("q", [2, 3])
def test_T_cap_K_is_SLm1(q):
    sp = standard_space(q, 4)
    g = build_omega_plus(sp)
    ef = sp.add(sp.e(1), sp.f(1))
    k = g.stabilizer(ef)
    t = build_T(sp)
    orb = t.orbit(ef)
    assert t.order() // len(orb) == oracles.sl_order(q, 3)


def test_R_cap_K_m5_q2():
    sp = standard_space(2, 5)
    g = build_omega_plus(sp)
    assert g.order() == oracles.omega_plus_order(2, 10)
    r = build_R(sp)
    assert r.order() == 2 ** 10
    ef = sp.add(sp.e(1), sp.f(1))
    k = g.stabilizer(ef)
    count = sum(1 for elt in r.elements() if k.is_member(elt))
    assert count == 2 ** 6


def test_gamma_phi(sp42):
    gam = build_gamma(sp42)
    assert (gam * gam).is_identity()
    assert gam.apply(sp42.e(1)) == sp42.f(1)
    phi = build_phi(sp42)
    assert phi.is_identity()  # q = 2: Frobenius trivial
    sp44 = standard_space(4, 4)
    phi4 = build_phi(sp44)
    assert not phi4.is_identity()
    assert (phi4 * phi4).is_identity()


@pytest.mark.parametrize("m,expected", [(4, 0), (5, 1)])
def test_gamma_dickson(m, expected):
    sp = standard_space(2, m)
    gam = build_gamma(sp)
    assert sp.dickson_invariant(gam.matrix)[0] == expected


def test_parabolic_RS_full(sp42):
    t = build_sl_handle(sp42.field, 4)
    h = parabolic_RS(sp42, t, 20160, "R:SL4(2)")
    assert h.order() == 64 * 20160


def test_parabolic_RS_sp_derived(sp42):
    from orthofact.grpcore import commutator_closure
    spq = build_sp_handle(sp42.field, 4)
    assert spq.order() == 720
    dsp = commutator_closure(spq, 360, rng_seed=3)
    h = parabolic_RS(sp42, dsp, 360, "R:Sp4(2)'")
    assert h.order() == 64 * 360


# -- frames -------------------------------------------------------------------


@pytest.mark.parametrize("q,m", [(2, 4), (4, 4), (2, 6)])
def test_hermitian_frame_identities(q, m):
    sp = standard_space(q, m)
    fr = hermitian_frame(sp)
    E = fr.ext
    # (3.1)-(3.3): Q(lam E1) = 0, Q(F1) = 0, beta(lam E1, F1) = 1
    lamE1 = fr.sharp_to_raw(tuple(fr.lam if i == 0 else 0 for i in range(m)))
    F1 = fr.sharp_to_raw(fr.sharp_unit(1))
    assert fr.rawspace.eval_Q(lamE1) == 0
    assert fr.rawspace.eval_Q(F1) == 0
    assert fr.rawspace.eval_beta(lamE1, F1) == 1
    # frame alignment sends them to e1, f1
    P, Pinv = fr.P, fr.Pinv
    e1 = linalg.vec_mat(fr.base, lamE1, Pinv)
    f1 = linalg.vec_mat(fr.base, F1, Pinv)
    assert e1 == sp.e(1)
    assert f1 == sp.f(1)
    # Q(v) = bsharp(v, v) for all v (exhaustive when small, sampled otherwise)
    rng = random.Random(0)
    total = fr.base.q ** (2 * m)
    count = 0
    for v in sp.all_vectors():
        if total > 65536:
            v = tuple(rng.randrange(fr.base.q) for _ in range(2 * m))
        raw = linalg.vec_mat(fr.base, v, P)
        sharp = fr.raw_to_sharp(raw)
        assert sp.eval_Q(v) == fr.emb_inv[fr.bsharp(sharp, sharp)]
        count += 1
        if count > 3000 and total > 65536:
            break


@pytest.mark.parametrize("q,m", [(2, 4), (4, 4), (2, 6)])
def test_quadratic_frame_identities(q, m):
    sp = standard_space(q, m)
    fr = quadratic_frame(sp)
    E = fr.ext
    lamE1 = fr.sharp_to_raw(tuple(fr.lam if i == 0 else 0 for i in range(m)))
    F1 = fr.sharp_to_raw(fr.sharp_unit(1))
    # (3.4)-(3.6)
    assert fr.rawspace.eval_Q(lamE1) == 0
    assert fr.rawspace.eval_Q(F1) == 0
    assert fr.rawspace.eval_beta(lamE1, F1) == 1
    # Q(v) = Tr(Qsharp(v)) spot check via the raw space construction
    rng = random.Random(1)
    for _ in range(500):
        sharp = tuple(rng.randrange(E.q) for _ in range(m))
        raw = fr.sharp_to_raw(sharp)
        qs = fr.qsharp(sharp)
        tr = E.add(qs, E.conj(qs))
        assert fr.rawspace.eval_Q(raw) == fr.emb_inv[tr]


def test_su4_2_order_and_isometry(sp42):
    fr = hermitian_frame(sp42)
    su = build_su(fr)
    assert su.order() == 25920
    for g in su.gens:
        assert sp42.is_isometry(g.matrix)
        assert sp42.in_omega(g.matrix)


def test_restrict_scalars_multiplicative(sp42):
    fr = hermitian_frame(sp42)
    E = fr.ext
    rng = random.Random(2)
    # random invertible sharp matrices
    def rand_mat():
        while True:
            mtx = tuple(tuple(rng.randrange(E.q) for _ in range(fr.m))
                        for _ in range(fr.m))
            try:
                linalg.mat_inv(E, mtx)
                return mtx
            except ValueError:
                continue
    for _ in range(10):
        A, B = rand_mat(), rand_mat()
        ra = fr.restrict_linear(A)
        rb = fr.restrict_linear(B)
        rab = fr.restrict_linear(linalg.mat_mul(E, A, B))
        assert (ra * rb).matrix == rab.matrix


def test_omega_ext_m4_q2(sp42, omega842):
    fr = quadratic_frame(sp42)
    h = build_omega_ext(fr)
    assert h.order() == 3600  # Omega4+(4)
    for g in h.gens:
        assert omega842.is_member(g)
    psi = fr.frobenius_sharp()
    assert sp42.is_isometry(psi.matrix)  # psi in O(V) at q = 2 (frob trivial)


def test_xi_hermitian_frame(sp42):
    fr = hermitian_frame(sp42)
    xi = fr.frobenius_sharp()
    # at q = 2 the map is GF(2)-linear of order 2
    assert xi.frob == 0
    assert not xi.is_identity()
    assert (xi * xi).is_identity()
    assert sp42.is_isometry(xi.matrix)


def test_subfield_minus_in_omega8_4():
    sp = standard_space(4, 4)
    h = build_subfield_minus(sp)
    assert h.order() == 197406720  # Omega8-(2)
    for g in h.gens:
        assert sp.is_isometry(g.matrix)


def test_ext_in_T_sl2_4(sp42):
    h = build_ext_in_T(sp42, "SL", 2, 2)
    assert h.order() == 60  # SL2(4)
    for g in h.gens:
        assert sp42.is_isometry(g.matrix)


def test_sp_in_T(sp42):
    h = build_sp_in_T(sp42)
    assert h.order() == 720
    for g in h.gens:
        assert sp42.is_isometry(g.matrix)
