import random

import pytest

from orthofact.catalog import VerifierEnv, load_desk_catalog, parse_claims_text
from orthofact.verifier import ClaimRecord, check_factorization, run_claim_suite
from orthofact.grpcore import GroupHandle


@pytest.fixture(scope="module")
def env():
    return VerifierEnv()


@pytest.fixture(scope="module")
def catalog():
    return load_desk_catalog()


def claim_by_id(catalog, cid):
    return next(c for c in catalog if c.id == cid)


def test_catalog_parses(catalog):
    assert len(catalog) > 60
    ids = [c.id for c in catalog]
    assert len(ids) == len(set(ids))


def test_parse_claims_text_roundtrip():
    text = """
    [claim]
    id = t.example
    z = omega_plus m=4 q=2
    x = tfull
    y = stab v=e1+f1
    method = transitivity
    omega = e1+f1
    index = 120
    intersection = 168,42
    expect = confirmed
    """
    claims = parse_claims_text(text)
    assert len(claims) == 1
    c = claims[0]
    assert c.expected_intersection == (168, 42)
    assert c.expected_index == 120


def test_empty_catalog():
    reports, summary = run_claim_suite([], VerifierEnv())
    assert reports == []
    assert summary["confirmed"] == 0


def test_basic_claim(env, catalog):
    rep = check_factorization(claim_by_id(catalog, "r01.sl4.m4q2"), env)
    assert rep.verdict == "confirmed" and rep.ok
    assert rep.intersection == 10752
    assert rep.x_order * rep.y_order == rep.z_order * rep.intersection


def test_negative_control(env, catalog):
    rep = check_factorization(claim_by_id(catalog, "ctrl.stabstab.m4q2"), env)
    assert rep.verdict == "refuted" and rep.ok


def test_skip_reasons(env, catalog):
    rep = check_factorization(claim_by_id(catalog, "r01.sl213.m6q3"), env)
    assert rep.verdict == "skipped" and rep.ok and "SL2(13)" in rep.notes


def test_missing_file_skips(env):
    claim = ClaimRecord(id="t.missing", z="omega_plus m=4 q=2",
                        x="ingest file=nonexistent.gen", y="stab v=e1+f1",
                        method="transitivity", omega="e1+f1")
    rep = check_factorization(claim, env)
    assert rep.verdict == "skipped"
    assert "not present" in rep.notes


def test_mismatched_expectation_reported(env):
    claim = ClaimRecord(id="t.wrong", z="omega_plus m=4 q=2", x="tfull",
                        y="stab v=e1+f1", method="transitivity",
                        omega="e1+f1", expected_intersection=(999,))
    rep = check_factorization(claim, env)
    assert rep.verdict == "confirmed"
    assert not rep.ok  # the expectation does not match the exact value


def test_conjugation_invariance_of_verdicts(env, catalog):
    # conjugation invariance: replacing X by a conjugate and the stabilized
    # vector by its image leaves verdict and intersection order unchanged
    rng = random.Random(17)
    world = env.world("omega_plus m=4 q=2")
    for cid in ("r01.sl4.m4q2", "r01.su.m4q2", "r04.spin7.m4q2"):
        claim = claim_by_id(catalog, cid)
        x_handle, _ = env.group(claim.x, world)
        g = world.handle.random_element(rng)
        h = world.handle.random_element(rng)
        xg = x_handle.conjugate(g)
        omega_h = h.apply(world.vector(claim.omega))
        zorb = world.ambient_orbit_size(claim.omega)
        xorb = len(xg.orbit(omega_h))
        assert (xorb == zorb) == (claim.expect == "confirmed")
        assert xg.order() // xorb == claim.expected_intersection[0]


def test_order_and_transitivity_methods_agree(env, catalog):
    # the same claim verified through both routes gives the same verdict and
    # the same intersection order
    world = env.world("omega_plus m=4 q=2")
    for cid, inter in (("r01.tfull.m4q2", 168), ("r01.su.m4q2", 216)):
        claim = claim_by_id(catalog, cid)
        rep_t = check_factorization(claim, env)
        order_claim = ClaimRecord(
            id=cid + ".order", z=claim.z, x=claim.x, y=claim.y,
            method="order", omega=claim.omega, intersect="stab_vectors",
            expected_intersection=(inter,))
        rep_o = check_factorization(order_claim, env)
        assert rep_t.verdict == rep_o.verdict == "confirmed"
        assert rep_t.intersection == rep_o.intersection == inter


def test_swap_compatibility(env, catalog):
    # r07: X stabilizes U, Y stabilizes the vector pair; checking
    # X-transitivity on Y's object and Y-transitivity on X's object gives
    # the same verdict and intersection order
    world = env.world("omega_plus m=4 q=2")
    rep_pair = check_factorization(claim_by_id(catalog, "r07.rt.m4q2"), env)
    swap = ClaimRecord(id="r07.swapped", z="omega_plus m=4 q=2",
                       x="stab v=e1+f1,u", y="rt", method="u_transitivity",
                       expected_intersection=(192,))
    rep_u = check_factorization(swap, env)
    assert rep_pair.verdict == rep_u.verdict == "confirmed"
    assert rep_pair.intersection == rep_u.intersection == 192


def test_report_dict_shape(env, catalog):
    rep = check_factorization(claim_by_id(catalog, "r01.spint.m4q2"), env)
    d = rep.to_dict()
    assert d["claim"] == "r01.spint.m4q2"
    assert d["verdict"] == "confirmed"
    assert isinstance(d["seconds"], float)


def test_id_filter(env, catalog):
    reports, summary = run_claim_suite(catalog, env, id_filter="ctrl.*")
    assert len(reports) == 1
    assert summary["refuted"] == 1
