import random

import pytest

from orthofact.ff import make_field
from orthofact.grpcore import (
    GroupElt, GroupHandle, ActionContext, product_contains,
    enumerate_intersection_order, commutator_closure, commutator,
)


def sl2_gens(field):
    # transvections for 1 and a field generator, plus the Weyl element
    t1 = GroupElt(field, ((1, 1), (0, 1)))
    tg = GroupElt(field, ((1, field.generator), (0, 1)))
    s = GroupElt(field, ((0, 1), (field.neg(1), 0)))
    return [t1, tg, s] if field.f > 1 else [t1, s]


@pytest.mark.parametrize("p,f", [(2, 1), (3, 1), (2, 2), (5, 1), (3, 2)])
def test_sl2_order(p, f):
    F = make_field(p, f)
    q = F.q
    h = GroupHandle(F, 2, sl2_gens(F))
    assert h.order() == q * (q * q - 1)


@pytest.mark.parametrize("p,f", [(2, 1), (3, 1), (2, 2)])
def test_semilinear_composition_associative(p, f):
    F = make_field(p, f)
    rng = random.Random(4)
    h = GroupHandle(F, 2, sl2_gens(F))
    elts = [h.random_element(rng) for _ in range(6)]
    frob = GroupElt(F, ((1, 0), (0, 1)), frob=1)
    elts.append(frob)
    for _ in range(300):
        a, b, c = (elts[rng.randrange(len(elts))] for _ in range(3))
        assert (a * b) * c == a * (b * c)
        v = tuple(rng.randrange(F.q) for _ in range(2))
        assert (a * b).apply(v) == b.apply(a.apply(v))


@pytest.mark.parametrize("p,f", [(2, 1), (3, 1), (2, 2), (3, 2)])
def test_inverse(p, f):
    F = make_field(p, f)
    rng = random.Random(9)
    h = GroupHandle(F, 2, sl2_gens(F))
    frob = GroupElt(F, ((1, 1), (0, 1)), frob=1)
    for x in [h.random_element(rng) for _ in range(10)] + [frob]:
        assert (x * x.inverse()).is_identity()
        assert (x.inverse() * x).is_identity()


def test_action_encodings_roundtrip():
    for p, f, n in [(2, 1, 8), (2, 2, 4), (3, 1, 5), (3, 2, 3), (5, 1, 3)]:
        F = make_field(p, f)
        ctx = ActionContext(F, n)
        rng = random.Random(2)
        for _ in range(200):
            v = tuple(rng.randrange(F.q) for _ in range(n))
            assert ctx.decode(ctx.encode(v)) == v


def test_compiled_action_matches_apply():
    for p, f in [(2, 1), (2, 2), (3, 1), (3, 2), (5, 1)]:
        F = make_field(p, f)
        ctx = ActionContext(F, 2)
        rng = random.Random(6)
        h = GroupHandle(F, 2, sl2_gens(F))
        g = h.random_element(rng)
        gf = GroupElt(F, g.matrix, frob=1)
        for elt in (g, gf):
            act = ctx.closure(elt)
            for _ in range(150):
                v = tuple(rng.randrange(F.q) for _ in range(2))
                assert ctx.decode(act(ctx.encode(v))) == elt.apply(v)


def test_trivial_group():
    F = make_field(2, 1)
    h = GroupHandle(F, 3, [GroupElt.identity(F, 3)])
    assert h.order() == 1
    assert h.orbit_size((1, 0, 0)) == 1
    assert h.is_member(GroupElt.identity(F, 3))


def test_orbit_stabilizer_sl2():
    F = make_field(3, 1)
    h = GroupHandle(F, 2, sl2_gens(F))
    v = (1, 0)
    orb = h.orbit(v)
    assert len(orb) == 8  # SL2(3) transitive on the 8 nonzero vectors
    stab = h.stabilizer(v)
    assert stab.order() * 8 == h.order()


def test_stabilizer_two_points():
    F = make_field(2, 1)
    # GL3(2) = SL3(2) acting on 7 nonzero vectors
    a = GroupElt(F, ((0, 1, 0), (0, 0, 1), (1, 0, 0)))
    b = GroupElt(F, ((1, 1, 0), (0, 1, 0), (0, 0, 1)))
    h = GroupHandle(F, 3, [a, b])
    assert h.order() == 168
    stab = h.stabilizer([(1, 0, 0), (0, 1, 0)])
    # two-point stabilizer of GL3(2): order 168 / (7*6) = 4
    assert stab.order() == 4


def test_is_member_and_sift():
    F = make_field(2, 1)
    a = GroupElt(F, ((0, 1, 0), (0, 0, 1), (1, 0, 0)))
    b = GroupElt(F, ((1, 1, 0), (0, 1, 0), (0, 0, 1)))
    h = GroupHandle(F, 3, [a, b])
    rng = random.Random(1)
    for _ in range(20):
        assert h.is_member(h.random_element(rng))
    # an element with a different Frobenius layer is not a member
    outside = GroupElt(F, ((1, 0, 0), (1, 1, 0), (0, 0, 1)))
    assert h.is_member(outside)  # it's in GL3(2)
    swap12 = GroupElt(F, ((0, 1, 0), (1, 0, 0), (0, 0, 1)))
    assert h.is_member(swap12)


def test_membership_of_non_member():
    F = make_field(3, 1)
    h = GroupHandle(F, 2, [GroupElt(F, ((1, 1), (0, 1)))])  # order 3
    assert h.order() == 3
    assert not h.is_member(GroupElt(F, ((2, 0), (0, 2))))


def test_base_change_order_check():
    F = make_field(2, 1)
    a = GroupElt(F, ((0, 1, 0), (0, 0, 1), (1, 0, 0)))
    b = GroupElt(F, ((1, 1, 0), (0, 1, 0), (0, 0, 1)))
    h = GroupHandle(F, 3, [a, b])
    assert h.order_base_change_check() == 168


def test_elements_enumeration():
    F = make_field(3, 1)
    h = GroupHandle(F, 2, sl2_gens(F))
    elts = list(h.elements())
    assert len(elts) == 24
    assert len(set(elts)) == 24
    for e in elts[:8]:
        assert h.is_member(e)


def test_enumerate_intersection():
    F = make_field(3, 1)
    h = GroupHandle(F, 2, sl2_gens(F))            # SL2(3), order 24
    t = GroupHandle(F, 2, [GroupElt(F, ((1, 1), (0, 1)))])  # order 3
    assert enumerate_intersection_order(t, h) == 3
    s = GroupHandle(F, 2, [GroupElt(F, ((2, 0), (0, 2)))])  # -I, order 2
    assert enumerate_intersection_order(s, h) == 2


def test_product_contains_stabilizer_logic():
    F = make_field(2, 1)
    a = GroupElt(F, ((0, 1, 0), (0, 0, 1), (1, 0, 0)))
    b = GroupElt(F, ((1, 1, 0), (0, 1, 0), (0, 0, 1)))
    g = GroupHandle(F, 3, [a, b])  # GL3(2)
    v = (1, 0, 0)
    k = g.stabilizer(v)
    # H = K: x in KK iff x fixes v's orbit point, i.e. x in K
    rng = random.Random(8)
    for _ in range(10):
        x = g.random_element(rng)
        expected = k.is_member(x)
        assert product_contains(k, v, k, x) == expected
    # H = G: G = GK always
    for _ in range(5):
        x = g.random_element(rng)
        assert product_contains(g, v, k, x)


def test_projective_action_psl2_7():
    F = make_field(7, 1)
    h = GroupHandle(F, 2, sl2_gens(F))
    assert h.order() == 336  # SL2(7)
    hp = GroupHandle(F, 2, sl2_gens(F), projective=True)
    assert hp.order() == 168  # PSL2(7) on 8 projective points


def test_projective_action_gf3():
    F = make_field(3, 1)
    hp = GroupHandle(F, 2, sl2_gens(F), projective=True)
    assert hp.order() == 12  # PSL2(3) = A4
    orb = hp.orbit((1, 0))
    assert len(orb) == 4  # 4 projective points


def test_commutator_closure_sl23():
    F = make_field(3, 1)
    h = GroupHandle(F, 2, sl2_gens(F))
    # derived subgroup of SL2(3) is Q8
    d = commutator_closure(h, 8, rng_seed=5)
    assert d.order() == 8


def test_conjugate_handle():
    F = make_field(3, 1)
    h = GroupHandle(F, 2, [GroupElt(F, ((1, 1), (0, 1)))])
    x = GroupElt(F, ((0, 1), (2, 0)))
    hc = h.conjugate(x)
    assert hc.order() == h.order()


def test_elt_order():
    F = make_field(2, 1)
    a = GroupElt(F, ((0, 1, 0), (0, 0, 1), (1, 0, 0)))
    assert a.elt_order() == 3
    assert commutator(a, a).is_identity()
