import numpy as np
import pytest

from gpmod.errors import ArityMismatch, NotComparable, NotUnital, ValidationError
from gpmod.graded import (
    GAct,
    Monoid,
    SmashModule,
    act_preorder,
    act_properties,
    category_algebra_iso,
    cyclic_monoid,
    dual_numbers_algebra,
    enumerate_acts,
    enumerate_monoids,
    fm_direct_sum,
    free_functor_module,
    gamma,
    is_unital,
    ker_phi,
    lambda_functor,
    local_unit,
    matrix_units_algebra,
    mcd_grid,
    monoid_algebra,
    mub_grid,
    pers_from_functor_module,
    phi,
    psi,
    random_functor_module,
    regular_act,
    smash_product,
    trivial_act,
    trivial_monoid,
    validate_act,
    validate_functor_module,
    validate_graded_algebra,
    validate_graded_module,
    validate_monoid,
    validate_smash_module,
    witness_map,
)
from gpmod.invariants import births, deaths
from gpmod.posets import chain


def test_validate_monoid():
    assert validate_monoid(cyclic_monoid(2)) is None
    bad = Monoid(["1", "a", "b"], [[0, 1, 2], [1, 2, 1], [2, 1, 1]],
                 validate=False)
    v = validate_monoid(bad)
    assert v is not None and v[0] == "associativity"
    with pytest.raises(ValidationError):
        Monoid(["a", "b"], [[1, 1], [1, 1]])  # no unit


def test_validate_act():
    z2 = cyclic_monoid(2)
    assert validate_act(regular_act(z2)) is None
    bad = GAct(z2, ["x", "y"], [[0, 1], [1, 0]], validate=False)
    assert validate_act(bad) is None  # the swap act is lawful
    broken = GAct(z2, ["x", "y"], [[1, 1], [0, 0]], validate=False)
    assert validate_act(broken) is not None


def test_monoid_algebra_valid(field):
    for mon in enumerate_monoids(3):
        assert validate_graded_algebra(monoid_algebra(mon, field)) is None


def test_fixture_algebras_valid(field):
    assert validate_graded_algebra(dual_numbers_algebra(field)) is None
    assert validate_graded_algebra(matrix_units_algebra(field)) is None


def test_act_properties():
    z2 = cyclic_monoid(2)
    assert act_properties(regular_act(z2)) == {
        "free": True, "faithful": True, "order_preserving": True}
    z3 = cyclic_monoid(3)
    props = act_properties(trivial_act(z3, 1))
    assert not props["free"] and not props["faithful"]
    assert props["order_preserving"]


def test_commutative_acts_order_preserving(field):
    for mon in enumerate_monoids(3):
        commutative = np.array_equal(mon.table, mon.table.T)
        if not commutative:
            continue
        for act in enumerate_acts(mon, 3):
            assert act_properties(act)["order_preserving"]


def test_act_preorder_reflexive_transitive():
    for mon in enumerate_monoids(3):
        for act in enumerate_acts(mon, 3):
            pre = act_preorder(act)
            assert pre.is_reflexive() and pre.is_transitive()


def test_ker_phi_trivial_for_faithful():
    z2 = cyclic_monoid(2)
    assert ker_phi(regular_act(z2)) == frozenset({("1", "1"), ("g", "g")})
    z3 = cyclic_monoid(3)
    k = ker_phi(trivial_act(z3, 1))
    assert len(k) == 9  # every pair acts identically on one point


def test_action_category_morphism_count_iff_free():
    # the action category collapses onto the thin order category exactly
    # when distinct monoid elements never agree on a point
    for mon in enumerate_monoids(3):
        for act in enumerate_acts(mon, 3):
            free = act_properties(act)["free"]
            collapses = all(
                len({g for g in range(len(mon)) if act.act(g, a) == b}) <= 1
                for a in range(len(act)) for b in range(len(act)))
            assert collapses == free


def test_witness_map():
    c2 = chain(2)
    g = witness_map(c2, "0", "1")
    assert g == {"0": "1", "1": "1"}
    assert witness_map(c2, "1", "1") == {"0": "0", "1": "1"}
    with pytest.raises(NotComparable):
        witness_map(c2, "1", "0")


def test_mcd_mub_grid():
    assert mcd_grid((2, 0), (1, 1)) == (1, 0)
    assert mub_grid((2, 0), (1, 1)) == (2, 1)
    assert mcd_grid((3, 2), (3, 2)) == (3, 2) == mub_grid((3, 2), (3, 2))
    assert mcd_grid((0, 0), (4, 7)) == (0, 0)
    assert mub_grid((0, 0), (4, 7)) == (4, 7)
    with pytest.raises(ArityMismatch):
        mcd_grid((1,), (1, 2))


def test_smash_product_rule(field):
    z2 = cyclic_monoid(2)
    sm = smash_product(monoid_algebra(z2, field), regular_act(z2))
    assert sm.dim == 4
    # (e_g p_1)(e_g p_g) lands on e_1 p_g since g.g = 1
    prod = sm.product(sm.basis_vector(1, 0), sm.basis_vector(1, 1))
    assert [sm.pair_name(t) for t in np.nonzero(prod)[0]] == ["1@g"]
    # gate closed: acting element does not move the right point correctly
    assert not np.any(sm.product(sm.basis_vector(1, 0), sm.basis_vector(1, 0)))
    # point idempotents are orthogonal
    p0, p1 = sm.point_idempotent(0), sm.point_idempotent(1)
    assert np.array_equal(sm.product(p0, p0), p0)
    assert not np.any(sm.product(p0, p1))


def test_local_unit(field):
    z2 = cyclic_monoid(2)
    sm = smash_product(monoid_algebra(z2, field), regular_act(z2))
    w = local_unit(sm, [sm.basis_vector(1, 0)])  # e_g p_1, with g.1 != 1
    assert [sm.pair_name(t) for t in np.nonzero(w)[0]] == ["1@1", "1@g"]
    w = local_unit(sm, [sm.point_idempotent(0)])
    assert np.array_equal(w, sm.point_idempotent(0))


def _setting(field, kind):
    if kind == "dual":
        alg = dual_numbers_algebra(field)
        return alg, regular_act(alg.monoid)
    if kind == "m2":
        alg = matrix_units_algebra(field)
        return alg, trivial_act(alg.monoid, 2)
    mon = cyclic_monoid(3)
    return monoid_algebra(mon, field), regular_act(mon)


@pytest.mark.parametrize("kind", ["dual", "m2", "z3"])
def test_phi_psi_round_trip(field, kind):
    alg, act = _setting(field, kind)
    rng = np.random.default_rng(61)
    for _ in range(10):
        fm = random_functor_module(alg, act, rng)
        assert validate_functor_module(fm) is None
        q = phi(fm)
        assert validate_graded_module(q) is None
        assert psi(q) == fm
        assert phi(psi(q)) == q


@pytest.mark.parametrize("kind", ["dual", "m2", "z3"])
def test_gamma_lambda_round_trip(field, kind):
    alg, act = _setting(field, kind)
    rng = np.random.default_rng(62)
    for _ in range(10):
        fm = random_functor_module(alg, act, rng)
        q = gamma(fm)
        assert validate_smash_module(q) is None
        assert is_unital(q)
        lam, bases = lambda_functor(q)
        assert lam == fm
        assert gamma(lam, q.smash) == q


def test_non_unital_detection(field):
    alg, act = _setting(field, "z3")
    rng = np.random.default_rng(63)
    fm = random_functor_module(alg, act, rng)
    q = gamma(fm)
    padded = {t: np.pad(m, ((0, 1), (0, 1))) for t, m in q.action.items()}
    bigger = SmashModule(q.smash, q.dim + 1, padded)
    assert validate_smash_module(bigger) is None
    assert not is_unital(bigger)
    with pytest.raises(NotUnital):
        lambda_functor(bigger)


def test_one_point_act_is_plain_module(field):
    # over a one point act the smash algebra is the algebra itself and a
    # functor module is one space with one matrix per basis element
    alg = monoid_algebra(cyclic_monoid(2), field)
    act = trivial_act(alg.monoid, 1)
    sm = smash_product(alg, act)
    assert sm.dim == alg.dim
    for i in range(alg.dim):
        for j in range(alg.dim):
            assert np.array_equal(
                sm.product(sm.basis_vector(i, 0), sm.basis_vector(j, 0)),
                alg.product(*(np.eye(alg.dim, dtype=np.int64)[k]
                              for k in (i, j))))
    rng = np.random.default_rng(64)
    fm = random_functor_module(alg, act, rng)
    q = gamma(fm)
    assert q.dim == fm.spaces[0]


def test_category_algebra_iso_trivial_monoid(field):
    mon = trivial_monoid()
    act = trivial_act(mon, 3)
    rep = category_algebra_iso(field, mon, act)
    assert rep["ring_hom"] and rep["dim"] == 3 and rep["sum_pa_is_unit"]


def test_category_algebra_iso_z2_regular(field):
    z2 = cyclic_monoid(2)
    rep = category_algebra_iso(field, z2, regular_act(z2))
    assert rep["ring_hom"] and rep["dim"] == 4 and rep["sum_pa_is_unit"]


def test_monoid_catalog_counts():
    mons = enumerate_monoids(4)
    by_order = [sum(1 for m in mons if len(m) == k) for k in (1, 2, 3, 4)]
    assert by_order == [1, 2, 7, 35]
    for m in mons:
        assert validate_monoid(m) is None


def test_act_catalog_is_lawful():
    for mon in enumerate_monoids(3):
        acts = enumerate_acts(mon, 3)
        assert acts, mon.name
        for act in acts:
            assert validate_act(act) is None
    # the trivial monoid admits exactly one act per size
    assert len(enumerate_acts(trivial_monoid(), 4)) == 4


def test_free_functor_module_spaces(field):
    z2 = cyclic_monoid(2)
    alg = monoid_algebra(z2, field)
    act = regular_act(z2)
    fm = free_functor_module(alg, act, 0, 1)
    assert fm.spaces == (1, 1)
    assert validate_functor_module(fm) is None
    two = fm_direct_sum(fm, free_functor_module(alg, act, 1, 2))
    assert two.spaces == (3, 3)
    assert validate_functor_module(two) is None


def test_transport_preserves_births_deaths(field):
    # idempotent monoid moving a chain: transport the functor module to a
    # persistence module directly and through the graded round trip
    mon = Monoid(["1", "t"], [[0, 1], [1, 1]], name="idem")
    act = GAct(mon, ["a", "b"], [[0, 1], [1, 1]])
    alg = monoid_algebra(mon, field)
    rng = np.random.default_rng(65)
    transported = 0
    for _ in range(25):
        fm = random_functor_module(alg, act, rng)
        try:
            pm = pers_from_functor_module(fm)
        except ValidationError:
            continue
        round_trip = pers_from_functor_module(psi(phi(fm)))
        assert pm == round_trip
        whole = pm.poset.whole()
        assert births(pm, whole).mask == births(round_trip, whole).mask
        assert deaths(pm, whole).mask == deaths(round_trip, whole).mask
        transported += 1
    assert transported >= 10


def test_trivial_group_transport(field):
    mon = trivial_monoid()
    act = trivial_act(mon, 3)
    alg = monoid_algebra(mon, field)
    rng = np.random.default_rng(66)
    fm = random_functor_module(alg, act, rng)
    pm = pers_from_functor_module(fm)
    assert len(pm.poset.covers) == 0
    assert pm.total_dim == fm.total_dim
