"""Ambient worlds, the constructor registry, and the shipped claim catalog.

A World resolves an ambient specification string ("omega_plus m=4 q=2",
"omega_plus_phi m=4 q=4", "pomega_plus m=4 q=3", "sp6 q=2") to a concrete
handle with named distinguished vectors.  Constructor specifications for the
factors ("rs kind=SL a=4 b=1", "stab v=e1+f1", "spin n=7", "ingest
file=a9_o8p2.gen", ...) are resolved by the registry below; every builder
post-checks its result against a closed-form order before it is used in a
claim.
"""

from __future__ import annotations

import os

from . import linalg, oracles
from .ff import make_field
from .grpcore import GroupElt, GroupHandle, GenericOrbit, commutator_closure
from .quadspace import DistinguishedVectors
from .constructions import (
    standard_space, build_omega_plus, build_T, build_R, build_gamma,
    build_phi, hermitian_frame, quadratic_frame, build_su,
    build_omega_ext, build_subfield_minus, build_ext_in_T, build_sp_in_T,
    build_sl_handle, build_sp_handle, embed_gl_block, assemble,
)
from .verifier import ClaimRecord
from . import genfile


DATA_DIR = os.path.join(os.path.dirname(__file__), "data")


def _parse_kv(spec):
    parts = spec.split()
    name = parts[0]
    kv = {}
    for tok in parts[1:]:
        k, _, v = tok.partition("=")
        kv[k] = v
    return name, kv


# ---------------------------------------------------------------------------
# worlds
# ---------------------------------------------------------------------------

class World:
    def __init__(self, spec, env):
        self.spec = spec
        name, kv = _parse_kv(spec)
        self.kind = name
        self.env = env
        q = int(kv.get("q", "2"))
        self.q = q
        if name in ("omega_plus", "omega_plus_phi", "pomega_plus"):
            m = int(kv["m"])
            self.m = m
            self.space = standard_space(q, m)
            self.projective = (name == "pomega_plus")
            base = build_omega_plus(self.space, seed=env.seed)
            if name == "omega_plus":
                self.handle = base
            elif name == "pomega_plus":
                target = oracles.pomega_plus_order(q, 2 * m)
                self.handle = assemble(self.space.field, 2 * m, base.gens,
                                       target, f"POmega{2*m}+({q})",
                                       projective=True, seed=env.seed,
                                       slim=False)
            else:
                phi = build_phi(self.space)
                f = self.space.field.f
                target = oracles.omega_plus_order(q, 2 * m) * f
                self.handle = assemble(self.space.field, 2 * m,
                                       base.gens + [phi], target,
                                       f"Omega{2*m}+({q}):{f}",
                                       seed=env.seed, slim=False)
            self.dv = DistinguishedVectors(self.space)
        elif name == "sp6":
            from .octonions import sp6_handle
            self.m = 3
            self.space = None
            self.projective = False
            self.handle = sp6_handle(q, seed=env.seed)
        else:
            raise ValueError(f"unknown world {name}")
        self._orbit_sizes = {}
        self._order = None

    def order(self):
        if self._order is None:
            self._order = self.handle.order()
        return self._order

    def vector(self, name):
        """Named vectors: e1..em, f1..fm, u, uprime, and '+'-sums thereof."""
        sp = self.space
        if sp is None:
            raise ValueError("the symplectic world has no named vectors")
        out = sp.zero()
        for part in name.split("+"):
            part = part.strip()
            if part == "u":
                v = self.dv.u
            elif part == "uprime":
                v = self.dv.u_prime
            elif part.startswith("e"):
                v = sp.e(int(part[1:]))
            elif part.startswith("f"):
                v = sp.f(int(part[1:]))
            else:
                raise ValueError(f"unknown vector name {part}")
            out = sp.add(out, v)
        return out

    def ambient_orbit_size(self, name):
        got = self._orbit_sizes.get(name)
        if got is None:
            got = len(self.handle.orbit(self.vector(name)))
            self._orbit_sizes[name] = got
        return got

    def form_space(self, eps):
        from .octonions import omega6_in_sp6
        return omega6_in_sp6(self.q, eps, seed=self.env.seed)[1]


# ---------------------------------------------------------------------------
# constructor registry
# ---------------------------------------------------------------------------

def _scalar_kernel_order(world, contains_minus_one):
    if world.projective and contains_minus_one:
        return 2
    return 1


def _ctor_stab(world, kv, env):
    vecs = [world.vector(v) for v in kv["v"].split(",")]
    h = world.handle.stabilizer(vecs)
    return h, {"stab_vecs": kv["v"]}


def _ctor_stabset(world, kv, env):
    names = kv["v"].split(",")
    v1, v2 = (world.vector(n) for n in names)
    stab = world.handle.stabilizer([v1, v2])
    swap = world.space.witt_extend([(v1, v2), (v2, v1)], coset="omega")
    swap_elt = GroupElt(world.space.field, swap)
    if not world.handle.is_member(swap_elt):
        raise AssertionError("swap element escaped the ambient group")
    target = stab.order() * 2
    h = assemble(world.space.field, world.space.dim,
                 stab.gens + [swap_elt], target, "stabset",
                 projective=world.projective, seed=env.seed, slim=False)
    return h, {}


def _ctor_rs(world, kv, env):
    sp = world.space
    F = sp.field
    m = sp.standard_m
    kind = kv["kind"]
    a = int(kv.get("a", m))
    b = int(kv.get("b", 1))
    derived = kv.get("derived") == "1"
    if kind == "SL" and b == 1:
        s_small = build_sl_handle(F, m, seed=env.seed)
        s_order = oracles.sl_order(F.q, m)
        embedded = [embed_gl_block(sp, g.matrix) for g in s_small.gens]
        minus_one = (F.q % 2 == 1 and m % 2 == 0)
    elif kind == "SL":
        ext_handle = build_ext_in_T(sp, "SL", a, b, seed=env.seed)
        embedded = list(ext_handle.gens)
        s_order = oracles.sl_order(F.q ** b, a)
        minus_one = (F.q % 2 == 1 and a % 2 == 0)
    elif kind == "Sp" and b == 1:
        s_small = build_sp_handle(F, a, seed=env.seed)
        s_order = oracles.sp_order(F.q, a)
        if derived:
            # Sp4(2)' has index 2; other desk cases are perfect already
            s_order //= 2
            s_small = commutator_closure(s_small, s_order, rng_seed=env.seed)
        embedded = [embed_gl_block(sp, g.matrix) for g in s_small.gens]
        minus_one = (F.q % 2 == 1)
    elif kind == "G2p":
        from .octonions import g2_derived
        g2p = g2_derived(F.q, seed=env.seed)
        s_order = g2p.order()
        embedded = [embed_gl_block(sp, g.matrix) for g in g2p.gens]
        minus_one = False
    else:
        raise ValueError(f"unknown rs kind {kind}")
    r = build_R(sp, seed=env.seed)
    target = (F.q ** (m * (m - 1) // 2)) * s_order
    target //= _scalar_kernel_order(world, minus_one)
    h = assemble(F, sp.dim, r.gens + embedded, target,
                 f"R:{kind}{a}(q^{b})", projective=world.projective,
                 seed=env.seed, slim=False)
    return h, {}


def _ctor_rt(world, kv, env):
    sp = world.space
    F = sp.field
    m = sp.standard_m
    t = build_T(sp, seed=env.seed)
    r = build_R(sp, seed=env.seed)
    minus_one = (F.q % 2 == 1 and m % 2 == 0)
    target = (F.q ** (m * (m - 1) // 2)) * oracles.sl_order(F.q, m)
    target //= _scalar_kernel_order(world, minus_one)
    h = assemble(F, sp.dim, r.gens + t.gens, target, "R:T",
                 projective=world.projective, seed=env.seed, slim=False)
    return h, {"stab_structure": "U"}


def _ctor_rgroup(world, kv, env):
    return build_R(world.space, seed=env.seed), {}


def _ctor_tfull(world, kv, env):
    sp = world.space
    t = build_T(sp, seed=env.seed)
    if world.projective:
        F = sp.field
        m = sp.standard_m
        minus_one = (F.q % 2 == 1 and m % 2 == 0)
        target = oracles.sl_order(F.q, m) // (2 if minus_one else 1)
        t = assemble(F, sp.dim, t.gens, target, "lefthatT",
                     projective=True, seed=env.seed, slim=False)
    return t, {}


def _ctor_tgamma(world, kv, env):
    sp = world.space
    F = sp.field
    t = build_T(sp, seed=env.seed)
    gam = build_gamma(sp)
    target = 2 * oracles.sl_order(F.q, sp.standard_m)
    h = assemble(F, sp.dim, t.gens + [gam], target, "T:gamma",
                 projective=world.projective, seed=env.seed, slim=False)
    return h, {}


def _ctor_su(world, kv, env):
    fr = hermitian_frame(world.space)
    return build_su(fr, seed=env.seed), {}


def _ctor_suxi(world, kv, env):
    sp = world.space
    F = sp.field
    fr = hermitian_frame(sp)
    su = build_su(fr, seed=env.seed)
    xi = fr.frobenius_sharp()
    target = oracles.su_order(F.q, sp.standard_m) * 2 * F.f
    h = assemble(F, sp.dim, su.gens + [xi], target, "SU:xi",
                 projective=world.projective, seed=env.seed, slim=False)
    return h, {}


def _ctor_spint(world, kv, env):
    return build_sp_in_T(world.space, seed=env.seed), {}


def _ctor_slext(world, kv, env):
    return build_ext_in_T(world.space, "SL", int(kv["a"]), int(kv["b"]),
                          seed=env.seed), {}


def _ctor_omegaext(world, kv, env):
    sp = world.space
    F = sp.field
    fr = quadratic_frame(sp)
    base = build_omega_ext(fr, seed=env.seed)
    rho = kv.get("rho", "none")
    if rho == "none":
        return base, {}
    psi = fr.frobenius_sharp()
    if rho == "psirp":
        e1f1_sharp = tuple(1 if i in (0, 1) else 0 for i in range(fr.m))
        psi = psi * fr.reflection_sharp(e1f1_sharp)
    target = base.order() * 2 * F.f
    h = assemble(F, sp.dim, base.gens + [psi], target, f"OmegaExt:{rho}",
                 projective=world.projective, seed=env.seed, slim=False)
    return h, {}


def _ctor_spin(world, kv, env):
    from .spinlift import spin_copy
    n = int(kv["n"])
    h = spin_copy(n, world.q, seed=env.seed,
                  projective=world.projective)
    if h.dim != world.space.dim:
        raise AssertionError("spin copy dimension mismatch")
    return h, {"via": "spin"}


def _ctor_spinsub(world, kv, env):
    from .spinlift import spin_machine, symplectic_to_source
    from .octonions import omega6_in_sp6
    kind = kv["kind"]
    q = world.q
    mach = spin_machine(7, q, seed=env.seed)
    F = mach.field
    if F.p == 2:
        eps = "+" if kind in ("o6p", "o5p") else "-"
        small, small_space = omega6_in_sp6(q, eps, seed=env.seed)
        if kind in ("o5p", "o5m"):
            w = _nonsingular_vector(small_space)
            small = small.stabilizer(w)
            if small.order() != oracles.sp_order(q, 4):
                raise AssertionError("Omega5 copy has wrong order")
        source_gens = [symplectic_to_source(mach, g.matrix)
                       for g in small.gens]
        targets = (small.order(),)
    else:
        source_gens, target = _odd_spin_source(mach, kind, env)
        # the projective image may or may not retain a central -1
        targets = (target, target // 2) if target % 2 == 0 else (target,)
    name = f"spinsub:{kind}"
    h = mach.aligned_handle(source_gens, targets, name,
                            projective=world.projective)
    return h, {"via": "spin"}


def _nonsingular_vector(space):
    for i in range(space.dim):
        b = space.basis(i)
        if space.eval_Q(b) != 0:
            return b
    for i in range(0, space.dim - 1, 2):
        v = space.add(space.basis(i), space.basis(i + 1))
        if space.eval_Q(v) != 0:
            return v
    raise AssertionError("no nonsingular basis-ish vector")


def _odd_spin_source(mach, kind, env):
    """Source subgroups of Omega7(3): Omega6^eps and Omega5 as derived
    subgroups of nonsingular-vector stabilizers (commutator closure with an
    exact order target); 3^5:Omega5 and 3^4:Omega4- as singular-vector
    stabilizers (their orders pin them)."""
    src = mach.source_group()
    sp = mach.space
    F = mach.field
    q = F.q
    if kind == "q5o5":
        s = sp.basis(0)  # singular: first hyperbolic basis vector
        stab = src.stabilizer(s)
        target = q ** 5 * oracles.omega_odd_order(q, 5)
        if stab.order() != target:
            raise AssertionError("singular stabilizer order off")
        return [g.matrix for g in stab.gens], target
    want_plus = kind in ("o6p", "o5p")
    candidates = [sp.basis(sp.dim - 1)]
    for i in range(0, sp.dim - 1, 2):
        candidates.append(sp.add(sp.basis(i), sp.basis(i + 1)))
        candidates.append(sp.sub(sp.basis(i), sp.basis(i + 1)))
    if kind == "q4o4m":
        want_plus = False
    target6 = oracles.omega_plus_order(q, 6) if want_plus \
        else oracles.omega_minus_order(q, 6)
    for w in candidates:
        if sp.eval_Q(w) == 0:
            continue
        stab = src.stabilizer(w)
        if stab.order() % target6 != 0 or stab.order() // target6 > 4:
            continue
        try:
            om6 = commutator_closure(stab, target6, rng_seed=env.seed)
        except AssertionError:
            continue
        if kind in ("o6p", "o6m"):
            return [g.matrix for g in om6.gens], target6
        if kind == "q4o4m":
            # stabilizer of a singular vector inside the minus copy
            target = q ** 4 * oracles.omega_minus_order(q, 4)
            for i in range(sp.dim):
                s = sp.basis(i)
                if sp.eval_Q(s) != 0 or sp.eval_beta(s, w) != 0 or not any(s):
                    continue
                stab4 = om6.stabilizer(s)
                if stab4.order() == target:
                    return [g.matrix for g in stab4.gens], target
            raise AssertionError("no singular vector yields 3^4:Omega4-")
        # descend once more for Omega5
        target5 = oracles.omega_odd_order(q, 5)
        w2 = _moved_nonsingular(sp, om6, w)
        stab5 = om6.stabilizer(w2)
        om5 = commutator_closure(stab5, target5, rng_seed=env.seed)
        return [g.matrix for g in om5.gens], target5
    raise AssertionError(f"no vector yields the requested {kind} copy")


def _moved_nonsingular(sp, handle, avoid):
    for i in range(sp.dim):
        for j in range(sp.dim):
            v = sp.add(sp.basis(i), sp.basis(j)) if i != j else sp.basis(i)
            if v == avoid or sp.eval_Q(v) == 0:
                continue
            if len(handle.orbit(v)) > 1:
                return v
    raise AssertionError("no moved nonsingular vector")


def _ctor_n2plusext(world, kv, env):
    """Pointwise stabilizer of (e1, f1) in the Omega part, extended by
    r_{e1+f1} r_{e2+f2} phi (which swaps the pair); lives in the
    phi-extended world at q = 4."""
    sp = world.space
    F = sp.field
    omega = build_omega_plus(sp, seed=env.seed)
    stab = omega.stabilizer([sp.e(1), sp.f(1)])
    r1 = sp.reflection(sp.add(sp.e(1), sp.f(1)))
    r2 = sp.reflection(sp.add(sp.e(2), sp.f(2)))
    phi = build_phi(sp)
    twist = GroupElt(F, linalg.mat_mul(F, r1, r2)) * phi
    target = stab.order() * 2
    h = assemble(F, sp.dim, stab.gens + [twist], target, "N2plusExt",
                 projective=world.projective, seed=env.seed, slim=False)
    return h, {}


def _ctor_g2t(world, kv, env):
    """G2(q) (q even) in its 6-dimensional symplectic representation,
    embedded in T = SL_6(q) with the inverse-transpose W-block."""
    from .octonions import g2_symplectic, g2_derived
    sp = world.space
    if sp.standard_m != 6:
        raise ValueError("G2 < T needs m = 6")
    small = g2_derived(world.q, seed=env.seed) if kv.get("derived") == "1" \
        else g2_symplectic(world.q, seed=env.seed)
    gens = [embed_gl_block(sp, g.matrix) for g in small.gens]
    return assemble(sp.field, sp.dim, gens, small.order(),
                    f"G2({world.q})<T", projective=world.projective,
                    seed=env.seed, slim=False), {}


def _ctor_subfieldminus(world, kv, env):
    from .constructions import subfield_minus_basis
    h = build_subfield_minus(world.space, seed=env.seed)
    return h, {"lattice_basis": subfield_minus_basis(world.space)}


def _ctor_ingest(world, kv, env):
    path = os.path.join(env.data_dir, kv["file"])
    h = genfile.ingest(path, projective=world.projective, seed=env.seed)
    if h.dim != (world.space.dim if world.space else 6):
        raise AssertionError("ingested dimension mismatch")
    if world.space is not None and h.field is not world.space.field:
        raise AssertionError("ingested field mismatch")
    return h, {}


def _ctor_g2sp6(world, kv, env):
    from .octonions import g2_symplectic
    return g2_symplectic(world.q, seed=env.seed), {}


def _ctor_g2psp6(world, kv, env):
    from .octonions import g2_derived
    return g2_derived(world.q, seed=env.seed), {}


def _ctor_omega6sp6(world, kv, env):
    from .octonions import omega6_in_sp6
    return omega6_in_sp6(world.q, kv["eps"], seed=env.seed)[0], {}


def _ctor_omega5sp6(world, kv, env):
    from .octonions import omega6_in_sp6
    h, space = omega6_in_sp6(world.q, kv["eps"], seed=env.seed)
    w = _nonsingular_vector(space)
    stab = h.stabilizer(w)
    if stab.order() != oracles.sp_order(world.q, 4):
        raise AssertionError("Omega5 copy inside Sp6 has wrong order")
    return stab, {}


CTOR_REGISTRY = {
    "stab": _ctor_stab,
    "stabset": _ctor_stabset,
    "rs": _ctor_rs,
    "rt": _ctor_rt,
    "rgroup": _ctor_rgroup,
    "tfull": _ctor_tfull,
    "tgamma": _ctor_tgamma,
    "su": _ctor_su,
    "suxi": _ctor_suxi,
    "spint": _ctor_spint,
    "slext": _ctor_slext,
    "omegaext": _ctor_omegaext,
    "spin": _ctor_spin,
    "spinsub": _ctor_spinsub,
    "g2t": _ctor_g2t,
    "n2plusext": _ctor_n2plusext,
    "subfieldminus": _ctor_subfieldminus,
    "ingest": _ctor_ingest,
    "g2sp6": _ctor_g2sp6,
    "g2psp6": _ctor_g2psp6,
    "omega6sp6": _ctor_omega6sp6,
    "omega5sp6": _ctor_omega5sp6,
}


# ---------------------------------------------------------------------------
# the verification environment
# ---------------------------------------------------------------------------

class VerifierEnv:
    """Shared state for a verification run: data directory, seed, and the
    memory budget (default 8 GiB, at roughly 100 bytes per stored orbit
    point; exceeding it raises BudgetExceeded and the claim reports
    skipped, never an approximation)."""

    def __init__(self, data_dir=None, seed=0, max_points=8 * 10 ** 7):
        self.data_dir = data_dir or os.path.join(DATA_DIR, "generators")
        self.seed = seed
        self.max_points = max_points
        self._worlds = {}
        self._groups = {}
        self._zorbits = {}

    def world(self, spec) -> World:
        w = self._worlds.get(spec)
        if w is None:
            w = World(spec, self)
            self._worlds[spec] = w
        return w

    def group(self, spec, world):
        key = (world.spec, spec)
        got = self._groups.get(key)
        if got is None:
            name, kv = _parse_kv(spec)
            fn = CTOR_REGISTRY.get(name)
            if fn is None:
                raise ValueError(f"unknown constructor {name}")
            got = fn(world, kv, self)
            self._groups[key] = got
        return got

    def missing_files(self, claim):
        missing = []
        for spec in (claim.x, claim.y, claim.n):
            if not spec:
                continue
            name, kv = _parse_kv(spec)
            if name == "ingest":
                path = os.path.join(self.data_dir, kv["file"])
                if not os.path.exists(path):
                    missing.append(kv["file"])
        return missing

    def cached_generic_orbit(self, world, tag, seed_key, act):
        key = (world.spec, tag)
        got = self._zorbits.get(key)
        if got is None:
            got = GenericOrbit(world.handle.gens, seed_key, act,
                               max_points=self.max_points)
            self._zorbits[key] = got
        return got

    def handle_from_gens(self, world, gens, name):
        field = gens[0].field if gens else (
            world.space.field if world.space else make_field(2, 1))
        dim = gens[0].dim if gens else (world.space.dim if world.space else 6)
        return GroupHandle(field, dim, gens, name=name, seed=self.seed,
                           projective=world.projective,
                           max_points=self.max_points)


# ---------------------------------------------------------------------------
# claims file parsing
# ---------------------------------------------------------------------------

def parse_claims_text(text):
    claims = []
    block = {}

    def flush():
        if not block:
            return
        claims.append(ClaimRecord(
            id=block["id"],
            doc=block.get("doc", ""),
            z=block["z"],
            x=block.get("x", ""),
            y=block.get("y", ""),
            n=block.get("n", ""),
            method=block.get("method", "transitivity"),
            omega=block.get("omega", ""),
            intersect=block.get("intersect", "auto"),
            expected_index=int(block["index"]) if "index" in block else None,
            expected_intersection=tuple(
                int(t) for t in block["intersection"].split(","))
            if "intersection" in block else (),
            expect=block.get("expect", "confirmed"),
            skip=block.get("skip", ""),
        ))

    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "[claim]":
            flush()
            block = {}
            continue
        key, _, value = line.partition("=")
        block[key.strip()] = value.strip()
    flush()
    return claims


def load_desk_catalog():
    path = os.path.join(DATA_DIR, "desk.claims")
    with open(path, "r", encoding="utf-8") as fh:
        return parse_claims_text(fh.read())
