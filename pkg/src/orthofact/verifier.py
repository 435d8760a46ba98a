"""The claim engine: encode factorization assertions and verify them exactly.

A ClaimRecord names the ambient group Z, constructors for the two factors X
and Y, a verification method, and the expected integers.  Three method
families exist:

* transitivity (vector, ordered pair, or unordered pair): when Y is the full
  stabilizer of the object, Z = XY iff the X-orbit equals the Z-orbit; the
  intersection order |X cap Y| = |X| / |orbit| comes for free.
* order: Z = XY iff |X| |Y| = |Z| |X cap Y| with the intersection computed
  exactly by a named recipe (stabilizer chain, exhaustive enumeration through
  a membership sift, parabolic compression, form-stabilizer orbit, or the
  pointwise+swap coset scan).
* product_coverage: HK contains a full enumerated normal subgroup, element by
  element, via the coset correspondence.

Verdicts are compared against the claim's expectation, so refutations are
first-class results, not failures.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from . import linalg
from .grpcore import (
    GenericOrbit, BudgetExceeded, enumerate_intersection_order,
)


@dataclass
class ClaimRecord:
    id: str
    z: str
    x: str
    y: str
    method: str
    doc: str = ""
    omega: str = ""
    n: str = ""
    intersect: str = "auto"
    expected_index: int | None = None
    expected_intersection: tuple = ()
    expect: str = "confirmed"
    skip: str = ""

    def key(self):
        return self.id


@dataclass
class VerificationReport:
    claim_id: str
    verdict: str                  # confirmed | refuted | skipped | error
    ok: bool                      # verdict matches the claim's expectation
    method: str = ""
    x_order: int | None = None
    y_order: int | None = None
    z_order: int | None = None
    intersection: int | None = None
    index: int | None = None
    matched_expected: int | None = None
    seconds: float = 0.0
    seed: int = 0
    notes: str = ""

    def to_dict(self):
        return {
            "claim": self.claim_id,
            "verdict": self.verdict,
            "ok": self.ok,
            "method": self.method,
            "x_order": self.x_order,
            "y_order": self.y_order,
            "z_order": self.z_order,
            "intersection": self.intersection,
            "index": self.index,
            "matched_expected": self.matched_expected,
            "seconds": round(self.seconds, 3),
            "seed": self.seed,
            "notes": self.notes,
        }


def _pair_key(pts):
    return tuple(pts)


def _setpair_key(pts):
    return tuple(sorted(pts))


def _generic_point_act(world):
    ctx = world.handle.ctx

    def act(g, pt):
        v = g.apply(ctx.decode(pt))
        if ctx.projective:
            v = ctx.normalize(v)
        return ctx.encode(v)
    return act


def _tuple_act(world, key_fn):
    act1 = _generic_point_act(world)

    def act(g, pts):
        return key_fn([act1(g, p) for p in pts])
    return act


def check_factorization(claim: ClaimRecord, env) -> VerificationReport:
    t0 = time.time()
    rep = VerificationReport(claim_id=claim.id, verdict="error", ok=False,
                             method=claim.method, seed=env.seed)
    if claim.skip:
        rep.verdict = "skipped"
        rep.ok = True
        rep.notes = claim.skip
        rep.seconds = time.time() - t0
        return rep
    missing = env.missing_files(claim)
    if missing:
        rep.verdict = "skipped"
        rep.ok = True
        rep.notes = f"generator file not present: {', '.join(missing)}"
        rep.seconds = time.time() - t0
        return rep
    try:
        world = env.world(claim.z)
        x_handle, x_meta = env.group(claim.x, world)
        y_handle, y_meta = env.group(claim.y, world)
        rep.z_order = world.order()
        rep.x_order = x_handle.order()
        rep.y_order = y_handle.order()
        if claim.method == "transitivity":
            _run_transitivity(claim, env, world, x_handle, y_handle, y_meta,
                              rep)
        elif claim.method in ("pair_transitivity", "setpair_transitivity"):
            _run_pair_transitivity(claim, env, world, x_handle, y_handle,
                                   y_meta, rep)
        elif claim.method == "u_transitivity":
            _run_u_transitivity(claim, env, world, x_handle, y_handle,
                                y_meta, rep)
        elif claim.method == "order":
            _run_order(claim, env, world, x_handle, x_meta, y_handle, y_meta,
                       rep)
        elif claim.method == "product_coverage":
            _run_product_coverage(claim, env, world, x_handle, y_handle,
                                  y_meta, rep)
        else:
            raise ValueError(f"unknown method {claim.method}")
        rep.ok = (rep.verdict == claim.expect)
        _match_expected(claim, rep)
    except BudgetExceeded as exc:
        rep.verdict = "skipped"
        rep.ok = True
        rep.notes = f"budget: {exc}"
    rep.seconds = time.time() - t0
    return rep


def _match_expected(claim, rep):
    if claim.expected_index is not None and rep.index is not None:
        if rep.index != claim.expected_index and rep.verdict == "confirmed":
            rep.ok = False
            rep.notes += f" index {rep.index} != expected {claim.expected_index};"
    if claim.expected_intersection and rep.intersection is not None \
            and rep.verdict == "confirmed":
        if rep.intersection in claim.expected_intersection:
            rep.matched_expected = rep.intersection
        else:
            rep.ok = False
            rep.notes += (f" intersection {rep.intersection} not among "
                          f"{claim.expected_intersection};")


def _require_full_stab(world, y_handle, y_meta, orb_size, what):
    if y_meta.get("stab_order_check", True):
        if y_handle.order() * orb_size != world.order():
            raise AssertionError(
                f"{what}: Y is not the full stabilizer "
                f"({y_handle.order()} * {orb_size} != {world.order()})")


def _run_transitivity(claim, env, world, x_handle, y_handle, y_meta, rep):
    vec = world.vector(claim.omega)
    zorb = world.ambient_orbit_size(claim.omega)
    _require_full_stab(world, y_handle, y_meta, zorb, claim.id)
    xorb = len(x_handle.orbit(vec))
    rep.index = zorb
    rep.intersection = rep.x_order // xorb
    rep.verdict = "confirmed" if xorb == zorb else "refuted"
    if xorb != zorb:
        rep.notes += f" X-orbit {xorb} vs Z-orbit {zorb};"


def _run_pair_transitivity(claim, env, world, x_handle, y_handle, y_meta,
                           rep):
    names = claim.omega.split(",")
    vecs = [world.vector(n) for n in names]
    ctx = world.handle.ctx
    pts = [ctx.encode(v) for v in vecs]
    key_fn = _setpair_key if claim.method == "setpair_transitivity" \
        else _pair_key
    act = _tuple_act(world, key_fn)
    seed_key = key_fn(pts)
    zorb = env.cached_generic_orbit(world, claim.method + ":" + claim.omega,
                                    seed_key, act)
    _require_full_stab(world, y_handle, y_meta, len(zorb), claim.id)
    xorb = GenericOrbit(x_handle.gens, seed_key, act,
                        max_points=env.max_points)
    rep.index = len(zorb)
    rep.intersection = rep.x_order // len(xorb)
    rep.verdict = "confirmed" if len(xorb) == len(zorb) else "refuted"


def _run_u_transitivity(claim, env, world, x_handle, y_handle, y_meta, rep):
    """Y is the full stabilizer of the maximal totally singular U; Z = XY iff
    the X-orbit of U equals its Z-orbit (subspaces keyed by rref rows)."""
    space = world.space
    F = space.field
    m = space.standard_m

    def act(g, key):
        rows = [g.apply(v) for v in key]
        reduced, _ = linalg.rref(F, rows)
        return tuple(reduced)

    seed = act(world.handle.identity(),
               tuple(space.e(i) for i in range(1, m + 1)))
    zorb = env.cached_generic_orbit(world, "u_orbit", seed, act)
    _require_full_stab(world, y_handle, y_meta, len(zorb), claim.id)
    xorb = GenericOrbit(x_handle.gens, seed, act, max_points=env.max_points)
    rep.index = len(zorb)
    rep.intersection = rep.x_order // len(xorb)
    rep.verdict = "confirmed" if len(xorb) == len(zorb) else "refuted"


def _run_order(claim, env, world, x_handle, x_meta, y_handle, y_meta, rep):
    inter = _intersection_order(claim, env, world, x_handle, x_meta, y_handle,
                                y_meta, rep)
    rep.intersection = inter
    lhs = rep.x_order * rep.y_order
    rhs = rep.z_order * inter
    rep.verdict = "confirmed" if lhs == rhs else "refuted"
    if rep.z_order and rep.y_order:
        rep.index = rep.z_order // rep.y_order if rep.z_order % rep.y_order == 0 \
            else None


def _intersection_order(claim, env, world, x_handle, x_meta, y_handle, y_meta,
                        rep):
    recipe = claim.intersect
    if recipe == "auto":
        recipe = "enumerate"
    if recipe == "enumerate":
        small, big = (x_handle, y_handle) \
            if x_handle.order() <= y_handle.order() else (y_handle, x_handle)
        return enumerate_intersection_order(small, big)
    if recipe == "stab_vectors":
        # Y is the pointwise stabilizer of claim.omega; |X cap Y| from the
        # orbit of the vector tuple under X
        names = claim.omega.split(",")
        vecs = [world.vector(n) for n in names]
        ctx = world.handle.ctx
        pts = [ctx.encode(v) for v in vecs]
        act = _tuple_act(world, _pair_key)
        orb = GenericOrbit(x_handle.gens, _pair_key(pts), act,
                           max_points=env.max_points)
        return x_handle.order() // len(orb)
    if recipe == "via_parabolic":
        return _via_parabolic(claim, env, world, x_handle, y_handle)
    if recipe.startswith("form_orbit"):
        eps = recipe.split("=", 1)[1]
        return _form_orbit_intersection(env, world, x_handle, y_handle, eps)
    if recipe == "pair_swap":
        return _pair_swap_scan(claim, env, world, x_handle, x_meta, y_handle)
    if recipe == "sublattice":
        return _sublattice_count(env, world, x_meta, y_handle)
    raise ValueError(f"unknown intersection recipe {recipe}")


def _sublattice_count(env, world, x_meta, y_handle):
    """|X cap Y| when X is the full stabilizer of a subfield lattice V0:
    count elements of Y carrying the lattice into itself by a depth-first
    walk over Y's transversals with pullback pruning.

    A Y-element factors (deepest transversal leftmost) over a chain whose
    leading base points are the lattice basis vectors; the image condition on
    the 8 basis vectors pins the whole lattice.
    """
    basis = x_meta["lattice_basis"]
    F = world.space.field
    ctx = world.handle.ctx
    k = len(basis)
    # nonzero lattice points, encoded
    lattice = set()
    for code in range(1, 1 << k):
        v = world.space.zero()
        for i in range(k):
            if (code >> i) & 1:
                v = world.space.add(v, basis[i])
        lattice.add(ctx.encode(v))
    ch = y_handle.chain(base_hint=[ctx.encode(b) for b in basis])
    p0 = 1
    for lvl in ch.levels[k:]:
        p0 *= len(lvl.orbit)
    leaves = 0

    def dfs(level, outer):
        nonlocal leaves
        if level == k:
            leaves += 1
            return
        lvl = ch.levels[level]
        if outer is None:
            candidates = [pt for pt in lvl.orbit.points() if pt in lattice]
            for pt in candidates:
                dfs(level + 1, lvl.orbit.rep(pt))
            return
        inv = outer.inverse()
        for target in lattice:
            pulled = ctx.encode(inv.apply(ctx.decode(target)))
            if pulled in lvl.orbit:
                u = lvl.orbit.rep(pulled)
                dfs(level + 1, u * outer)
    dfs(0, None)
    return leaves * p0


def _via_parabolic(claim, env, world, x_handle, y_handle):
    """X <= Stab_Z(U): compress Y against the U-orbit, then enumerate
    D = Y cap Stab_Z(U) through X's membership sift."""
    space = world.space
    F = space.field
    m = space.standard_m
    u_rows = [space.e(i) for i in range(1, m + 1)]

    def act(g, key):
        rows = [g.apply(v) for v in key]
        reduced, _ = linalg.rref(F, rows)
        return tuple(reduced)

    seed = act(world.handle.identity(), tuple(u_rows))
    orb = GenericOrbit(y_handle.gens, seed, act, max_points=env.max_points)
    d_gens = orb.schreier_generators()
    d = env.handle_from_gens(world, d_gens, f"{claim.id}.D")
    d_order = y_handle.order() // len(orb)
    got = d.order()
    if got != d_order:
        raise AssertionError(
            f"{claim.id}: parabolic compression order {got} != {d_order}")
    count = 0
    xch = x_handle.chain()
    for elt in d.elements():
        if xch.is_member(elt):
            count += 1
    return count


def _form_orbit_intersection(env, world, x_handle, y_handle, eps):
    """6-dimensional symplectic world: X = Omega(Q_eps); |X cap Y| is the
    Dickson-kernel part of the Q_eps-stabilizer in Y."""
    qspace = world.form_space(eps)
    F = qspace.field
    n = qspace.dim

    def form_key(space_qmat):
        return tuple(tuple(row) for row in space_qmat)

    def pullback(g, qmat):
        gi = g.inverse()
        units = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
        imgs = [gi.apply(u) for u in units]

        def qval(v):
            acc = 0
            for i in range(n):
                if v[i]:
                    row = qmat[i]
                    for j in range(i, n):
                        if row[j] and v[j]:
                            acc = F.add(acc, F.mul(row[j],
                                                   F.mul(v[i], v[j])))
            return acc
        new = [[0] * n for _ in range(n)]
        for i in range(n):
            new[i][i] = qval(imgs[i])
        for i in range(n):
            for j in range(i + 1, n):
                both = tuple(F.add(a, b) for a, b in zip(imgs[i], imgs[j]))
                new[i][j] = F.sub(F.sub(qval(both), new[i][i]), new[j][j])
        return form_key(new)

    seed = form_key(qspace.qmat)
    orb = GenericOrbit(y_handle.gens, seed, pullback,
                       max_points=env.max_points)
    stab_order = y_handle.order() // len(orb)
    stab_gens = orb.schreier_generators()
    stab = env.handle_from_gens(world, stab_gens, "formstab")
    if stab.order() != stab_order:
        raise AssertionError("form stabilizer order mismatch")
    # Dickson filter: the image of the parity map on the stabilizer
    nontrivial = any(qspace.dickson_invariant(g.matrix)[0] == 1
                     for g in stab_gens if not g.is_identity())
    return stab_order // (2 if nontrivial else 1)


def _pair_swap_scan(claim, env, world, x_handle, x_meta, y_handle):
    """|X cap Y| where X = (pointwise stab of v1, v2).<coset elt swapping
    them> and Y is arbitrary: the pointwise part of Y is computed by a chain,
    and the swap coset is scanned exactly through X-membership."""
    names = claim.omega.split(",")
    v1 = world.vector(names[0])
    v2 = world.vector(names[1])
    c = y_handle.stabilizer([v1, v2])
    xch = x_handle.chain()
    total = sum(1 for elt in c.elements() if xch.is_member(elt))
    # swap part: y in Y with v1^y = v2 and v2^y = v1 form the coset y0*C
    ctx = world.handle.ctx
    orb1 = y_handle.orbit(v1)
    pt2 = ctx.encode(v2)
    if pt2 in orb1:
        u = orb1.rep(pt2)          # v1^u = v2
        stab2 = y_handle.stabilizer(v2)
        o2 = stab2.orbit(u.apply(v2))
        target = ctx.encode(v1)
        if target in o2:
            c2 = o2.rep(target)    # fixes v2, sends v2^u to v1
            y0 = u * c2
            for elt in c.elements():
                if xch.is_member(y0 * elt):
                    total += 1
    return total


def _run_product_coverage(claim, env, world, x_handle, y_handle, y_meta, rep):
    vec = world.vector(claim.omega)
    zorb = world.ambient_orbit_size(claim.omega)
    _require_full_stab(world, y_handle, y_meta, zorb, claim.id)
    n_handle, _ = env.group(claim.n, world)
    orb = x_handle.orbit(vec)
    ctx = x_handle.ctx
    ok = True
    checked = 0
    for elt in n_handle.elements():
        target = elt.inverse().apply(vec)
        if ctx.projective:
            target = ctx.normalize(target)
        if ctx.encode(target) not in orb:
            ok = False
            break
        checked += 1
    rep.index = zorb
    rep.intersection = None
    rep.notes += f" coverage checked {checked} elements;"
    rep.verdict = "confirmed" if ok else "refuted"


def run_claim_suite(claims, env, id_filter=None):
    """Deterministic report list (ordered by claim id) plus summary counts."""
    reports = []
    for claim in sorted(claims, key=lambda c: c.id):
        if id_filter and not _glob_match(claim.id, id_filter):
            continue
        reports.append(check_factorization(claim, env))
    summary = {
        "confirmed": sum(1 for r in reports if r.verdict == "confirmed"),
        "refuted": sum(1 for r in reports if r.verdict == "refuted"),
        "skipped": sum(1 for r in reports if r.verdict == "skipped"),
        "error": sum(1 for r in reports if r.verdict == "error"),
        "mismatched": sum(1 for r in reports if not r.ok),
    }
    return reports, summary


def _glob_match(s, pattern):
    import fnmatch
    return fnmatch.fnmatch(s, pattern)
