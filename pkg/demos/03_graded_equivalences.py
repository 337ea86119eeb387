#!/usr/bin/env python3
"""Walkthrough: monoid acts, smash products, and the module equivalences.

One set of data, three layouts: per-arrow matrices (functor module), one
total matrix per algebra basis element (graded module), one total matrix
per smash basis pair (smash module).  The conversions are exact inverses.
"""

import numpy as np

from gpmod import (
    FieldSpec,
    GAct,
    Monoid,
    act_preorder,
    act_properties,
    births,
    category_algebra_iso,
    cyclic_monoid,
    gamma,
    is_unital,
    lambda_functor,
    local_unit,
    monoid_algebra,
    phi,
    psi,
    smash_product,
)
from gpmod.graded import pers_from_functor_module, random_functor_module, regular_act

F = FieldSpec(101)

# The order-2 group acting on itself.
z2 = cyclic_monoid(2)
act = regular_act(z2)
print("act properties:", act_properties(act))

alg = monoid_algebra(z2, F)
sm = smash_product(alg, act)
print("smash dim:", sm.dim, "basis:", [sm.pair_name(t) for t in range(sm.dim)])

# The multiplication gate: (e_g p_1)(e_g p_g) passes because g.g = 1.
prod = sm.product(sm.basis_vector(1, 0), sm.basis_vector(1, 1))
print("(g@1)(g@g) =", [sm.pair_name(t) for t in np.nonzero(prod)[0]])
print("(g@1)(g@1) =", sm.product(sm.basis_vector(1, 0), sm.basis_vector(1, 0)).tolist())

# No global unit, but every finite set of elements has a local one.
w = local_unit(sm, [sm.basis_vector(1, 0)])
print("local unit support:", [sm.pair_name(t) for t in np.nonzero(w)[0]])

# The linearized action category has the same multiplication table.
print("category algebra matches smash:", category_algebra_iso(F, z2, act)["ring_hom"])

# Round trips between the three layouts are exact identities.
rng = np.random.default_rng(1)
fm = random_functor_module(alg, act, rng)
print("\nfunctor module spaces:", fm.spaces)
q = phi(fm)
print("graded total dim:", q.total_dim, " psi(phi(F)) == F:", psi(q) == fm)
sq = gamma(fm)
print("smash module unital:", is_unital(sq))
back, _ = lambda_functor(sq)
print("lambda(gamma(F)) == F:", back == fm)

# A monoid whose action order is a genuine poset: t is idempotent and
# pushes a to b, so the points form the chain a < b and the functor module
# rereads as a persistence module with the same births.
idem = Monoid(["1", "t"], [[0, 1], [1, 1]], name="idem")
chain_act = GAct(idem, ["a", "b"], [[0, 1], [1, 1]])
pre = act_preorder(chain_act)
print("\naction order antisymmetric:", pre.is_antisymmetric())
fm2 = random_functor_module(monoid_algebra(idem, F), chain_act,
                            np.random.default_rng(2))
pm = pers_from_functor_module(fm2)
print("transported dims:", pm.dims)
print("births over the point poset:", births(pm, pm.poset.whole()).ids())
