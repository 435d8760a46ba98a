import random

import pytest

from orthofact import linalg, oracles
from orthofact.ff import make_field
from orthofact.quadspace import QuadSpace
from orthofact.spinlift import (
    build_clifford, split_spin_module, spin_machine, spin_copy,
    invariant_quadratic_form, local_minpoly, module_spin, ModuleBasis,
)
from orthofact.constructions import standard_space, build_omega_plus
from orthofact import polys


def test_clifford_dimensions():
    assert build_clifford(7, 2).dim == 64
    assert build_clifford(9, 2).dim == 256


def test_clifford_relations_exhaustive():
    for n, q in [(7, 2), (7, 3)]:
        alg = build_clifford(n, q)
        assert alg.check_relations()


def test_clifford_associative_random():
    alg = build_clifford(7, 2)
    rng = random.Random(3)
    def rand_elt():
        out = {}
        for _ in range(4):
            out[alg.masks[rng.randrange(alg.dim)]] = 1
        return out
    for _ in range(20):
        a, b, c = rand_elt(), rand_elt(), rand_elt()
        assert alg.elt_mul(alg.elt_mul(a, b), c) == alg.elt_mul(a, alg.elt_mul(b, c))


def test_split_spin_dimensions():
    m7 = spin_machine(7, 2)
    assert m7.basis.dim() == 8
    m9 = spin_machine(9, 2)
    assert m9.basis.dim() == 16


def test_action_map_is_multiplicative():
    # right-multiplication matrices compose like the algebra elements
    alg = build_clifford(7, 2)
    rng = random.Random(5)
    for _ in range(10):
        a = {alg.masks[rng.randrange(alg.dim)]: 1}
        b = {alg.masks[rng.randrange(alg.dim)]: 1}
        Ra = alg.right_mult_matrix(a)
        Rb = alg.right_mult_matrix(b)
        Rab = alg.right_mult_matrix(alg.elt_mul(a, b))
        assert linalg.mat_mul(alg.field, Ra, Rb) == Rab


def test_local_minpoly_and_poly_helpers():
    F = make_field(2, 1)
    # companion-like matrix of x^3 + x + 1
    A = ((0, 1, 0), (0, 0, 1), (1, 1, 0))
    mp = local_minpoly(F, A, (1, 0, 0))
    assert mp == [1, 1, 0, 1]  # x^3 + x + 1
    fac = polys.some_irreducible_factor(F, mp)
    assert fac == [1, 1, 0, 1]


def test_spin_copy_7_2_properties():
    x = spin_copy(7, 2)
    assert x.order() == 1451520
    sp = standard_space(2, 4)
    ef = sp.add(sp.e(1), sp.f(1))
    orb = x.orbit(ef)
    assert len(orb) == 120  # transitive on nonsingular vectors
    assert x.order() // len(orb) == 12096  # G2(2)
    for g in x.gens:
        assert sp.is_isometry(g.matrix)
        assert sp.in_omega(g.matrix)


def test_spin_copy_is_not_the_stabilizer():
    sp = standard_space(2, 4)
    g = build_omega_plus(sp)
    ef = sp.add(sp.e(1), sp.f(1))
    k = g.stabilizer(ef)
    x = spin_copy(7, 2)
    assert any(not k.is_member(t) for t in x.gens)
    assert all(g.is_member(t) for t in x.gens)


def test_lift_consistency_projective():
    # lifting g then h agrees with lifting gh up to the normalization scalar
    mach = spin_machine(7, 2)
    src = mach.source_group()
    rng = random.Random(7)
    F = mach.field
    for _ in range(6):
        a = src.random_element(rng)
        b = src.random_element(rng)
        la = mach.lift_matrix(a.matrix)
        lb = mach.lift_matrix(b.matrix)
        lab = mach.lift_matrix((a * b).matrix)
        prod = linalg.mat_mul(F, la, lb)
        # compare projectively
        from orthofact.spinlift import _normalize_scalar
        assert _normalize_scalar(F, prod) == _normalize_scalar(F, lab)


def test_invariant_form_unique_and_plus():
    mach = spin_machine(7, 2)
    src = mach.source_group()
    lifted = [mach.lift_matrix(g.matrix) for g in src.gens]
    qmat = invariant_quadratic_form(mach.field, lifted, 8)
    spq = QuadSpace(mach.field, qmat)
    basis = spq.hyperbolic_basis()  # plus type: full hyperbolic basis exists
    assert len(basis) == 8


def test_spin_copy_7_3_projective_order():
    x = spin_copy(7, 3)
    assert x.projective
    assert x.order() == oracles.omega_odd_order(3, 7)


def test_module_spin_helper():
    F = make_field(2, 1)
    # the permutation module of a 3-cycle on GF(2)^3: spinning a unit vector
    A = ((0, 1, 0), (0, 0, 1), (1, 0, 0))
    basis = module_spin(F, [(1, 0, 0)], [A], 3)
    assert basis.dim() == 3
    basis2 = module_spin(F, [(1, 1, 1)], [A], 3)
    assert basis2.dim() == 1


def test_build_clifford_rejects():
    with pytest.raises(ValueError):
        build_clifford(5, 2)
    with pytest.raises(ValueError):
        build_clifford(7, 8)
