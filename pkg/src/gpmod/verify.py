"""Seeded verification suites.

Each suite draws random instances from a case seed and checks one exact
statement about them; a failing case records its seed so it can be
replayed with ``--seed <case_seed> --cases 1``.  Case seeds are
``base_seed + index``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from . import graded as gr
from . import invariants as inv
from . import linalg
from .errors import GpmodError
from .kan import canonical_mu, induce, restrict
from .linalg import FieldSpec
from .modules import (
    free_module,
    hom_space_dim,
    interval_module,
    is_epi,
    is_iso,
    random_module,
    random_morphism,
)
from .posets import Poset, build_poset, grid_poset, hat, up_set, _bits


def random_poset(rng, n_min: int = 2, n_max: int = 6) -> Poset:
    n = int(rng.integers(n_min, n_max + 1))
    q = float(rng.uniform(0.15, 0.55))
    ids = [f"e{i}" for i in range(n)]
    rels = [(ids[i], ids[j]) for i in range(n) for j in range(i + 1, n)
            if rng.random() < q]
    return build_poset(ids, rels, name=f"random{n}")


def random_subset_mask(rng, p: Poset) -> int:
    return int(rng.integers(0, p.full_mask + 1)) if len(p) else 0


def _draw_module(rng, poset, field, max_dim):
    generator = "solve" if rng.integers(0, 2) else "intervals"
    return random_module(poset, max_dim, field, seed=int(rng.integers(2**32)),
                         generator=generator)


def _subsets_to_try(rng, p: Poset, sample: int = 12):
    if len(p) <= 5:
        return list(range(p.full_mask + 1))
    return sorted({int(rng.integers(0, p.full_mask + 1)) for _ in range(sample)})


# ---------------------------------------------------------------------------
# suite case bodies (raise AssertionError on failure)


def _case_fsp_apu(rng, field, caps):
    p = random_poset(rng, 2, caps["max_poset"])
    m = _draw_module(rng, p, field, caps["max_dim"])
    for mask in _subsets_to_try(rng, p):
        s = p.subset_from_mask(mask)
        gen_bd = inv.is_generated(m, s, via="births")
        pres_bd = inv.is_presented(m, s, via="births")
        gen_mu = inv.is_generated(m, s, via="mu")
        pres_mu = inv.is_presented(m, s, via="mu")
        assert gen_bd == gen_mu, f"generation mismatch at S={s.ids()}"
        assert pres_bd == pres_mu, f"presentation mismatch at S={s.ids()}"


def _case_syntyma_minimi(rng, field, caps):
    p = random_poset(rng, 2, min(5, caps["max_poset"]))
    m = _draw_module(rng, p, field, caps["max_dim"])
    s = p.subset_from_mask(random_subset_mask(rng, p))
    if not inv.is_generated(m, s):
        s = p.whole()
    b = inv.minimal_generating_degrees(m, s)
    assert inv.is_generated(m, b), "birth set does not generate"
    for mask in range(s.mask + 1):
        t_mask = mask & s.mask
        t = p.subset_from_mask(t_mask)
        if inv.is_generated(m, t):
            assert b.mask & ~t_mask == 0, \
                f"smaller generating set {t.ids()} misses births {b.ids()}"


def _case_esitys_minimi(rng, field, caps):
    p = random_poset(rng, 2, min(5, caps["max_poset"]))
    m = _draw_module(rng, p, field, caps["max_dim"])
    s = p.subset_from_mask(random_subset_mask(rng, p))
    if not inv.is_presented(m, s):
        s = p.whole()
    bd = inv.minimal_presentation_support(m, s)
    assert inv.is_presented(m, bd), "birth/death set does not present"
    for mask in range(s.mask + 1):
        t_mask = mask & s.mask
        t = p.subset_from_mask(t_mask)
        if inv.is_presented(m, t):
            assert bd.mask & ~t_mask == 0, \
                f"smaller presenting set {t.ids()} misses {bd.ids()}"


def _case_verho(rng, field, caps):
    p = random_poset(rng, 2, caps["max_poset"])
    m = _draw_module(rng, p, field, caps["max_dim"])
    s = p.subset_from_mask(random_subset_mask(rng, p))
    if not inv.is_presented(m, s):
        s = p.whole()
    pres = inv.minimal_presentation(m, s)
    assert pres.verho_equal, \
        f"kernel births {sorted(pres.rels)} != deaths {pres.death_set.ids()}"
    assert pres.exact, "two-step sequence is not exact"
    assert set(pres.gens) == set(inv.births(m, s).ids()), "gens set mismatch"


def _case_tuplahattu(rng, field, caps):
    p = random_poset(rng, 2, caps["max_poset"])
    m0 = _draw_module(rng, p, field, caps["max_dim"])
    s = p.subset_from_mask(random_subset_mask(rng, p))
    m = induce(restrict(m0, s), p)
    assert inv.is_determined(m, s), "induced module is not determined"
    t = hat(p, hat(p, s))
    assert inv.is_presented(m, t), \
        f"double-hat {t.ids()} fails to present (S={s.ids()})"


def _case_syntyma_vertailu(rng, field, caps):
    p = random_poset(rng, 2, caps["max_poset"])
    m0 = _draw_module(rng, p, field, caps["max_dim"])
    s = p.subset_from_mask(random_subset_mask(rng, p))
    m = induce(restrict(m0, s), p)
    assert inv.is_generated(m, s), "induced module is not generated"
    whole = inv.births(m, p.whole())
    relative = inv.births(m, s)
    assert whole.mask == relative.mask, \
        f"births differ: {whole.ids()} vs {relative.ids()}"


def _case_tchernev(rng, field, caps):
    p = random_poset(rng, 2, min(5, caps["max_poset"]))
    m = _draw_module(rng, p, field, caps["max_dim"])
    s = p.subset_from_mask(random_subset_mask(rng, p))
    if not inv.is_generated(m, s):
        s = p.whole()
    if rng.integers(0, 2):
        _, f = inv.projective_cover(m, s)
    else:
        src = _draw_module(rng, p, field, caps["max_dim"])
        f = random_morphism(src, m, rng)
    antecedent = True
    for c in inv.births(m, s):
        sm = inv.splitting_map(f, s, c)
        target_dim = inv.splitting(m, s, c).dim
        if linalg.rank(sm, field.p) != target_dim:
            antecedent = False
            break
    if antecedent:
        assert is_epi(f), "splitting-surjective map fails to be surjective"


def _case_phi_psi(rng, field, caps):
    alg, act = _draw_graded_setting(rng, field, caps)
    fm = gr.random_functor_module(alg, act, rng)
    assert gr.validate_functor_module(fm) is None, "generator produced bad module"
    q = gr.phi(fm)
    assert gr.validate_graded_module(q) is None, "phi image fails validation"
    assert gr.psi(q) == fm, "psi(phi(F)) != F"
    assert gr.phi(gr.psi(q)) == q, "phi(psi(Q)) != Q"


def _case_gamma_lambda(rng, field, caps):
    alg, act = _draw_graded_setting(rng, field, caps)
    fm = gr.random_functor_module(alg, act, rng)
    q = gr.gamma(fm)
    assert gr.validate_smash_module(q) is None, "gamma image fails validation"
    assert gr.is_unital(q), "gamma image is not unital"
    lam, _ = gr.lambda_functor(q)
    assert lam == fm, "lambda(gamma(F)) != F"
    assert gr.gamma(lam, q.smash) == q, "gamma(lambda(Q)) != Q"
    if q.dim:
        padded = {t: np.pad(mat, ((0, 1), (0, 1))) for t, mat in q.action.items()}
        bigger = gr.SmashModule(q.smash, q.dim + 1, padded, validate=False)
        assert not gr.is_unital(bigger), "dead vector went unnoticed"


def _case_smash_iso(rng, field, caps):
    mon = _draw_monoid(rng, caps)
    act = _draw_act(rng, mon, caps)
    rep = gr.category_algebra_iso(field, mon, act)
    assert rep["ring_hom"], f"table mismatch at {rep['witness']}"
    assert rep["sum_pa_is_unit"], "sum of point idempotents is not a unit"
    sm = gr.smash_product(gr.monoid_algebra(mon, field), act)
    picks = [sm.basis_vector(int(rng.integers(0, len(mon))),
                             int(rng.integers(0, len(act))))
             for _ in range(int(rng.integers(1, 4)))]
    gr.local_unit(sm, picks)


def _case_split_esim(rng, field, caps):
    shapes = [(2, 2), (3, 3), (2, 3), (2, 2, 2), (4, 2)]
    shape = shapes[int(rng.integers(0, len(shapes)))]
    p = grid_poset(shape)
    m = _draw_module(rng, p, field, min(2, caps["max_dim"]))
    s = p.subset_from_mask(random_subset_mask(rng, p))
    rep = inv.verify_split_esim(m, s)
    assert rep.equal, f"{rep.quotient_dim} != {rep.splitting_sum} (S={s.ids()})"


def _case_interval_ex(rng, field, caps):
    p = random_poset(rng, 2, caps["max_poset"] + 1)
    a = p.elements[int(rng.integers(0, len(p)))]
    ups = list(up_set(p, [a]))
    b = ups[int(rng.integers(0, len(ups)))]
    members = [c for c in p.elements if p.leq(a, c) and p.leq(c, b)]
    m = interval_module(p, members, field)
    i_set = p.subset(members)
    minimal = p.minimal_of_mask(i_set.mask)
    got_b = inv.births(m, p.whole())
    assert got_b.mask == minimal, \
        f"births {got_b.ids()} != minimal {p.subset_from_mask(minimal).ids()}"
    s1 = up_set(p, i_set).mask & ~i_set.mask
    s1_min = p.minimal_of_mask(s1)
    s2 = 0
    for c in i_set:
        ci = p.index(c)
        below = (p.down_mask(c) & i_set.mask) & ~(1 << ci)
        if below and not _connected_mask(p, below):
            s2 |= 1 << ci
    got_d = inv.deaths(m, p.whole())
    assert got_d.mask == s1_min | s2, \
        f"deaths {got_d.ids()} != closed form"


def _connected_mask(p: Poset, mask: int) -> bool:
    members = list(_bits(mask))
    if not members:
        return False
    seen = 1 << members[0]
    frontier = [members[0]]
    while frontier:
        x = frontier.pop()
        reach = (p._up[x] | p._down[x]) & mask & ~seen
        for y in _bits(reach):
            seen |= 1 << y
            frontier.append(y)
    return seen == mask


def _case_induktio_apu(rng, field, caps):
    p = random_poset(rng, 2, caps["max_poset"])
    s_mask = random_subset_mask(rng, p)
    e = p.elements[int(rng.integers(0, len(p)))]
    s_mask |= 1 << p.index(e)
    s = p.subset_from_mask(s_mask)
    mult = int(rng.integers(1, 3))
    fm = free_module(p, e, mult, field)
    mu = canonical_mu(fm, s)
    assert is_iso(mu), f"counit not iso for free at {e!r}, S={s.ids()}"
    # adjunction: Hom(ind N, M) and Hom(N, res M) have equal dimension
    m = _draw_module(rng, p, field, 2)
    n0 = _draw_module(rng, p, field, 2)
    n = restrict(n0, s)
    if n.total_dim + m.total_dim <= 40:
        ind_n = induce(n, p)
        res_m = restrict(m, s)
        assert hom_space_dim(ind_n, m) == hom_space_dim(n, res_m), \
            "adjunction dimension mismatch"


def _draw_monoid(rng, caps) -> gr.Monoid:
    mons = gr.enumerate_monoids(caps["max_monoid"])
    return mons[int(rng.integers(0, len(mons)))]


def _draw_act(rng, mon, caps) -> gr.GAct:
    acts = gr.enumerate_acts(mon, caps["max_act"])
    return acts[int(rng.integers(0, len(acts)))]


def _draw_graded_setting(rng, field, caps):
    roll = int(rng.integers(0, 4))
    if roll == 0:
        alg = gr.dual_numbers_algebra(field)
        mon = alg.monoid
        act = [gr.regular_act(mon), gr.trivial_act(mon, 1),
               gr.trivial_act(mon, 2)][int(rng.integers(0, 3))]
    elif roll == 1:
        alg = gr.matrix_units_algebra(field)
        mon = alg.monoid
        act = gr.regular_act(mon) if rng.integers(0, 2) else gr.trivial_act(mon, 2)
    else:
        mon = _draw_monoid(rng, caps)
        act = _draw_act(rng, mon, caps)
        alg = gr.monoid_algebra(mon, field)
    return alg, act


SUITES = {
    "fsp-apu": _case_fsp_apu,
    "syntyma-minimi": _case_syntyma_minimi,
    "esitys-minimi": _case_esitys_minimi,
    "verho": _case_verho,
    "tuplahattu": _case_tuplahattu,
    "syntyma-vertailu": _case_syntyma_vertailu,
    "tchernev": _case_tchernev,
    "phi-psi": _case_phi_psi,
    "gamma-lambda": _case_gamma_lambda,
    "smash-iso": _case_smash_iso,
    "split-esim": _case_split_esim,
    "interval-ex": _case_interval_ex,
    "induktio-apu": _case_induktio_apu,
}

DEFAULT_CAPS = {"max_poset": 6, "max_dim": 3, "max_monoid": 4, "max_act": 4}
HARD_CAPS = {"max_poset": 10, "max_dim": 5, "max_monoid": 4, "max_act": 4}


@dataclass(frozen=True)
class VerifyConfig:
    """A suite run request: name, seed, case count and size caps."""

    suite: str
    seed: int = 0
    cases: int = 100
    field: int = 101
    caps: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.suite not in SUITES:
            raise GpmodError(f"unknown suite {self.suite!r}; "
                             f"known: {sorted(SUITES)}")
        if self.cases < 1:
            raise GpmodError("cases must be at least 1")
        for key, value in self.caps.items():
            if key not in HARD_CAPS:
                raise GpmodError(f"unknown size cap {key!r}")
            if not 1 <= value <= HARD_CAPS[key]:
                raise GpmodError(f"{key} must lie in [1, {HARD_CAPS[key]}]")

    def merged_caps(self) -> dict:
        merged = dict(DEFAULT_CAPS)
        merged.update(self.caps)
        return merged


def run_config(config: VerifyConfig) -> dict:
    """Run a configured suite; the report is a deterministic function of the
    configuration."""
    field = FieldSpec(config.field)
    body = SUITES[config.suite]
    caps = config.merged_caps()
    failures = []
    messages = {}
    for i in range(config.cases):
        case_seed = config.seed + i
        rng = np.random.default_rng(case_seed)
        try:
            body(rng, field, caps)
        except AssertionError as exc:
            failures.append(case_seed)
            messages[str(case_seed)] = str(exc)
        except GpmodError as exc:
            failures.append(case_seed)
            messages[str(case_seed)] = f"{type(exc).__name__}: {exc}"
    return {"suite": config.suite, "cases": config.cases, "seed": config.seed,
            "field": config.field, "failures": failures, "messages": messages}


def run_suite(name: str, cases: int, seed: int, field_p: int = 101,
              caps: dict | None = None) -> dict:
    return run_config(VerifyConfig(suite=name, seed=seed, cases=cases,
                                   field=field_p, caps=caps or {}))
