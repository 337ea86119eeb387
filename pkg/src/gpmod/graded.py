"""Finite monoids, acts, graded algebras, and the module-category bridges.

Three data layouts carry the same mathematics on finite instances:

* FunctorModule: one small matrix per (algebra basis element, point) arrow,
  i.e. an additive functor on the action category of the act.
* GradedModule: one total-space matrix per algebra basis element, with the
  grading recorded as a block-support condition.
* SmashModule: one total-space matrix per basis element of the smash
  product, a module over a ring without identity.

phi/psi convert between the first two and gamma/lambda_functor between the
first and third; all four are data transformations whose round trips are
exact identities, which the validators and test suites check exhaustively.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from . import linalg
from .errors import (
    ArityMismatch,
    InternalError,
    NotComparable,
    NotUnital,
    ValidationError,
)
from .linalg import FieldSpec
from .modules import PersModule
from .posets import Poset, build_poset


# ---------------------------------------------------------------------------
# monoids and acts


class Monoid:
    """A finite monoid given by its full multiplication table."""

    __slots__ = ("names", "table", "unit", "name")

    def __init__(self, names, table, *, name="G", validate=True):
        self.names = tuple(names)
        self.table = np.asarray(table, dtype=np.int64)
        self.name = name
        n = len(self.names)
        if self.table.shape != (n, n):
            raise ValidationError(f"monoid table must be {n}x{n}")
        unit = None
        for e in range(n):
            if all(self.table[e, x] == x == self.table[x, e] for x in range(n)):
                unit = e
                break
        if unit is None:
            raise ValidationError("monoid table has no two-sided unit")
        self.unit = unit
        if validate:
            bad = validate_monoid(self)
            if bad is not None:
                raise ValidationError(f"monoid axiom violated at {bad}")

    def __len__(self):
        return len(self.names)

    def mul(self, g: int, h: int) -> int:
        return int(self.table[g, h])

    def __eq__(self, other):
        return (isinstance(other, Monoid) and self.names == other.names
                and np.array_equal(self.table, other.table))

    def __hash__(self):
        return hash((self.names, self.table.tobytes()))

    def __repr__(self):
        return f"Monoid({self.name!r}, order {len(self)})"


def validate_monoid(mon: Monoid):
    """None if associative with the recorded unit, else the first bad tuple."""
    n = len(mon)
    t = mon.table
    for g in range(n):
        if t[mon.unit, g] != g or t[g, mon.unit] != g:
            return ("unit", mon.names[g])
    for g in range(n):
        for h in range(n):
            for k in range(n):
                if t[t[g, h], k] != t[g, t[h, k]]:
                    return ("associativity", mon.names[g], mon.names[h], mon.names[k])
    return None


def cyclic_monoid(n: int) -> Monoid:
    names = ["1"] + [f"g{i}" if n > 2 else "g" for i in range(1, n)]
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return Monoid(names, table, name=f"Z{n}", validate=False)


def trivial_monoid() -> Monoid:
    return Monoid(["1"], [[0]], name="1", validate=False)


class GAct:
    """A left action of a monoid on a finite set of points."""

    __slots__ = ("monoid", "points", "table", "name")

    def __init__(self, monoid: Monoid, points, table, *, name="A", validate=True):
        self.monoid = monoid
        self.points = tuple(points)
        self.table = np.asarray(table, dtype=np.int64)
        self.name = name
        if self.table.shape != (len(monoid), len(self.points)):
            raise ValidationError("act table must be |G| x |A|")
        if validate:
            bad = validate_act(self)
            if bad is not None:
                raise ValidationError(f"act axiom violated at {bad}")

    def __len__(self):
        return len(self.points)

    def act(self, g: int, a: int) -> int:
        return int(self.table[g, a])

    def __eq__(self, other):
        return (isinstance(other, GAct) and self.monoid == other.monoid
                and self.points == other.points
                and np.array_equal(self.table, other.table))

    def __repr__(self):
        return f"GAct({self.name!r}, {len(self)} points over {self.monoid.name})"


def validate_act(act: GAct):
    g_n = len(act.monoid)
    for a in range(len(act)):
        if act.table[act.monoid.unit, a] != a:
            return ("unit", act.points[a])
    for g in range(g_n):
        for h in range(g_n):
            gh = act.monoid.mul(g, h)
            for a in range(len(act)):
                if act.table[gh, a] != act.table[g, act.table[h, a]]:
                    return ("compatibility", act.monoid.names[g],
                            act.monoid.names[h], act.points[a])
    return None


def regular_act(mon: Monoid) -> GAct:
    return GAct(mon, mon.names, mon.table.copy(), name=f"{mon.name}-regular",
                validate=False)


def trivial_act(mon: Monoid, k: int = 1) -> GAct:
    points = [f"p{i}" for i in range(k)]
    table = [[a for a in range(k)] for _ in range(len(mon))]
    return GAct(mon, points, table, name="trivial", validate=False)


class PreorderRelation:
    """A reflexive transitive relation on named points."""

    __slots__ = ("elements", "pairs")

    def __init__(self, elements, pairs):
        self.elements = tuple(elements)
        self.pairs = frozenset(pairs)

    def leq(self, a, b) -> bool:
        return (a, b) in self.pairs

    def is_reflexive(self) -> bool:
        return all((a, a) in self.pairs for a in self.elements)

    def is_transitive(self) -> bool:
        return all((a, d) in self.pairs
                   for a, b in self.pairs for c, d in self.pairs if b == c)

    def is_antisymmetric(self) -> bool:
        return not any(a != b and (b, a) in self.pairs for a, b in self.pairs)

    def quotient_to_poset(self):
        """Collapse mutual-leq classes; returns (poset, point -> class id)."""
        classes = {}
        for a in self.elements:
            cls = tuple(sorted(b for b in self.elements
                               if self.leq(a, b) and self.leq(b, a)))
            classes[a] = cls
        reps = sorted(set(classes.values()))
        class_id = {cls: "|".join(cls) for cls in reps}
        rels = []
        for a, b in self.pairs:
            rels.append((class_id[classes[a]], class_id[classes[b]]))
        poset = build_poset([class_id[c] for c in reps], rels, name="act-order")
        return poset, {a: class_id[classes[a]] for a in self.elements}


def act_preorder(act: GAct) -> PreorderRelation:
    """a <= b when some monoid element moves a to b."""
    pairs = set()
    for a in range(len(act)):
        for g in range(len(act.monoid)):
            pairs.add((act.points[a], act.points[act.act(g, a)]))
    return PreorderRelation(act.points, pairs)


def act_properties(act: GAct) -> dict:
    """Exhaustive freeness, faithfulness and order-preservation checks."""
    g_n, a_n = len(act.monoid), len(act)
    free = all(act.act(g, a) != act.act(h, a)
               for a in range(a_n) for g in range(g_n) for h in range(g_n)
               if g != h)
    faithful = all(any(act.act(g, a) != act.act(h, a) for a in range(a_n))
                   for g in range(g_n) for h in range(g_n) if g != h)
    pre = act_preorder(act)
    order_preserving = all(
        pre.leq(act.points[act.act(g, a)], act.points[act.act(g, b)])
        for a, b in itertools.product(range(a_n), repeat=2)
        if pre.leq(act.points[a], act.points[b])
        for g in range(g_n))
    return {"free": free, "faithful": faithful,
            "order_preserving": order_preserving}


def ker_phi(act: GAct) -> frozenset:
    """Pairs of monoid elements acting identically on every point."""
    out = set()
    g_n = len(act.monoid)
    for g in range(g_n):
        for h in range(g_n):
            if all(act.act(g, a) == act.act(h, a) for a in range(len(act))):
                out.add((act.monoid.names[g], act.monoid.names[h]))
    return frozenset(out)


def witness_map(order, a, b) -> dict:
    """The inflationary endofunction sending a to b and fixing the rest."""
    if isinstance(order, Poset):
        elements, leq = order.elements, order.leq
    else:
        elements, leq = order.elements, order.leq
    if not leq(a, b):
        raise NotComparable(f"{a!r} is not below {b!r}")
    g = {x: (b if x == a else x) for x in elements}
    for x in elements:
        if not leq(x, g[x]):
            raise InternalError("witness map is not inflationary")
    if g[a] != b:
        raise InternalError("witness map misses its target")
    return g


def mcd_grid(g, h):
    """Componentwise min of two nonnegative integer tuples."""
    g, h = tuple(g), tuple(h)
    if len(g) != len(h):
        raise ArityMismatch(f"{g} vs {h}")
    lo = tuple(min(x, y) for x, y in zip(g, h))
    hi = tuple(max(x, y) for x, y in zip(g, h))
    if tuple(x + y for x, y in zip(lo, hi)) != tuple(x + y for x, y in zip(g, h)):
        raise InternalError("min/max identity failed")
    return lo


def mub_grid(g, h):
    """Componentwise max; the unique minimal upper bound in a grid."""
    g, h = tuple(g), tuple(h)
    if len(g) != len(h):
        raise ArityMismatch(f"{g} vs {h}")
    return tuple(max(x, y) for x, y in zip(g, h))


# ---------------------------------------------------------------------------
# graded algebras


def _trilinear(x: np.ndarray, y: np.ndarray, table: np.ndarray, p: int) -> np.ndarray:
    """sum_{i,j} x_i y_j table[i,j,:] mod p, intermediate sums kept exact."""
    outer = np.mod(np.asarray(x, dtype=np.int64)[:, None]
                   * np.asarray(y, dtype=np.int64)[None, :], p)
    if p < 2**20:
        return np.mod(np.tensordot(outer, table, axes=([0, 1], [0, 1])), p)
    flat = outer.reshape(1, -1)
    return linalg.matmul(flat, table.reshape(flat.shape[1], -1), p)[0]


class GradedAlgebra:
    """A finite-dimensional algebra graded by a monoid.

    ``mult[i, j, k]`` is the coefficient of basis element k in the product
    of basis elements i and j; ``degs[i]`` indexes the monoid element
    grading basis element i.  The unit vector must be supported in degree
    one so that graded free modules have a well-placed generator.
    """

    __slots__ = ("field", "monoid", "syms", "degs", "mult", "unit",
                 "is_monoid_algebra", "name")

    def __init__(self, field: FieldSpec, monoid: Monoid, syms, degs, mult,
                 unit, *, name="S", is_monoid_algebra=False, validate=True):
        self.field = field
        self.monoid = monoid
        self.syms = tuple(syms)
        self.degs = tuple(int(d) for d in degs)
        d = len(self.syms)
        self.mult = np.mod(np.asarray(mult, dtype=np.int64), field.p)
        self.unit = np.mod(np.asarray(unit, dtype=np.int64), field.p)
        self.is_monoid_algebra = is_monoid_algebra
        self.name = name
        if self.mult.shape != (d, d, d) or self.unit.shape != (d,):
            raise ValidationError("structure constant shapes are wrong")
        if any(not 0 <= g < len(monoid) for g in self.degs):
            raise ValidationError("degree indexes outside the monoid")
        if validate:
            bad = validate_graded_algebra(self)
            if bad is not None:
                raise ValidationError(f"algebra axiom violated at {bad}")

    @property
    def dim(self) -> int:
        return len(self.syms)

    def product(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return _trilinear(x, y, self.mult, self.field.p)

    def __eq__(self, other):
        return (isinstance(other, GradedAlgebra) and self.field == other.field
                and self.monoid == other.monoid and self.syms == other.syms
                and self.degs == other.degs
                and np.array_equal(self.mult, other.mult)
                and np.array_equal(self.unit, other.unit))

    def __repr__(self):
        return f"GradedAlgebra({self.name!r}, dim {self.dim} over {self.monoid.name})"


def validate_graded_algebra(alg: GradedAlgebra):
    p = alg.field.p
    d = alg.dim
    unit_deg = alg.monoid.unit
    for i in range(d):
        if alg.unit[i] and alg.degs[i] != unit_deg:
            return ("unit_degree", alg.syms[i])
    for i in range(d):
        for j in range(d):
            deg = alg.monoid.mul(alg.degs[i], alg.degs[j])
            for k in range(d):
                if alg.mult[i, j, k] and alg.degs[k] != deg:
                    return ("grading", alg.syms[i], alg.syms[j], alg.syms[k])
    for j in range(d):
        e_j = np.zeros(d, dtype=np.int64)
        e_j[j] = 1
        if not np.array_equal(alg.product(alg.unit, e_j), e_j):
            return ("left_unit", alg.syms[j])
        if not np.array_equal(alg.product(e_j, alg.unit), e_j):
            return ("right_unit", alg.syms[j])
    for i in range(d):
        for j in range(d):
            for k in range(d):
                left = np.einsum("x,xy->y", alg.mult[i, j], alg.mult[:, k, :]) % p
                right = np.einsum("y,yz->z", alg.mult[j, k], alg.mult[i]) % p
                if not np.array_equal(left, right):
                    return ("associativity", alg.syms[i], alg.syms[j], alg.syms[k])
    return None


def monoid_algebra(mon: Monoid, field: FieldSpec) -> GradedAlgebra:
    """The monoid algebra with one basis element per monoid element."""
    n = len(mon)
    mult = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            mult[i, j, mon.mul(i, j)] = 1
    unit = np.zeros(n, dtype=np.int64)
    unit[mon.unit] = 1
    return GradedAlgebra(field, mon, mon.names, list(range(n)), mult, unit,
                         name=f"k[{mon.name}]", is_monoid_algebra=True,
                         validate=False)


def dual_numbers_algebra(field: FieldSpec) -> GradedAlgebra:
    """k[x]/(x^2) graded over the order-2 cyclic monoid with x in the
    nontrivial degree; the smallest graded algebra that is not a monoid
    algebra."""
    mon = cyclic_monoid(2)
    mult = np.zeros((2, 2, 2), dtype=np.int64)
    mult[0, 0, 0] = 1
    mult[0, 1, 1] = 1
    mult[1, 0, 1] = 1
    unit = np.array([1, 0], dtype=np.int64)
    return GradedAlgebra(field, mon, ("u", "x"), (0, 1), mult, unit,
                         name="k[x]/(x^2)")


def matrix_units_algebra(field: FieldSpec) -> GradedAlgebra:
    """The 2x2 matrix algebra graded over the order-2 group by parity of the
    off-diagonal position; noncommutative test fixture."""
    mon = cyclic_monoid(2)
    syms = ("e11", "e22", "e12", "e21")
    degs = (0, 0, 1, 1)
    mult = np.zeros((4, 4, 4), dtype=np.int64)
    pos = {"e11": (0, 0), "e22": (1, 1), "e12": (0, 1), "e21": (1, 0)}
    rev = {v: k for k, v in pos.items()}
    idx = {s: i for i, s in enumerate(syms)}
    for a in syms:
        for b in syms:
            (i1, j1), (i2, j2) = pos[a], pos[b]
            if j1 == i2:
                mult[idx[a], idx[b], idx[rev[(i1, j2)]]] = 1
    unit = np.array([1, 1, 0, 0], dtype=np.int64)
    return GradedAlgebra(field, mon, syms, degs, mult, unit, name="M2")


# ---------------------------------------------------------------------------
# the three module layouts


class FunctorModule:
    """Per-arrow matrices: arrows[(i, a)] maps the space at point a to the
    space at point deg(i) . a."""

    __slots__ = ("algebra", "act", "spaces", "arrows")

    def __init__(self, algebra: GradedAlgebra, act: GAct, spaces, arrows,
                 *, validate=True):
        if act.monoid != algebra.monoid:
            raise ValidationError("act and algebra are over different monoids")
        self.algebra = algebra
        self.act = act
        self.spaces = tuple(int(s) for s in spaces)
        p = algebra.field.p
        fixed = {}
        for i in range(algebra.dim):
            g = algebra.degs[i]
            for a in range(len(act)):
                b = act.act(g, a)
                m = arrows.get((i, a))
                shape = (self.spaces[b], self.spaces[a])
                if m is None:
                    m = linalg.zeros(*shape)
                else:
                    m = np.mod(np.asarray(m, dtype=np.int64), p)
                    if m.shape != shape:
                        raise ValidationError(
                            f"arrow ({algebra.syms[i]}, {act.points[a]}) has shape "
                            f"{m.shape}, expected {shape}")
                fixed[(i, a)] = m
        self.arrows = fixed
        if validate:
            bad = validate_functor_module(self)
            if bad is not None:
                raise ValidationError(f"functor module axiom violated at {bad}")

    @property
    def total_dim(self) -> int:
        return sum(self.spaces)

    def __eq__(self, other):
        return (isinstance(other, FunctorModule) and self.algebra == other.algebra
                and self.act == other.act and self.spaces == other.spaces
                and all(np.array_equal(self.arrows[k], other.arrows[k])
                        for k in self.arrows))

    def __repr__(self):
        return f"FunctorModule(spaces={self.spaces})"


def validate_functor_module(f: FunctorModule):
    alg, act = f.algebra, f.act
    p = alg.field.p
    for a in range(len(act)):
        ident = sum((int(alg.unit[i]) * f.arrows[(i, a)]
                     for i in range(alg.dim) if alg.unit[i]),
                    linalg.zeros(f.spaces[a], f.spaces[a])) % p
        if not np.array_equal(ident, linalg.identity(f.spaces[a])):
            return ("unit", act.points[a])
    for i in range(alg.dim):
        for j in range(alg.dim):
            for a in range(len(act)):
                b = act.act(alg.degs[j], a)
                composite = linalg.matmul(f.arrows[(i, b)], f.arrows[(j, a)], p)
                target = act.act(alg.monoid.mul(alg.degs[i], alg.degs[j]), a)
                combo = linalg.zeros(f.spaces[target], f.spaces[a])
                for k in range(alg.dim):
                    coeff = int(alg.mult[i, j, k])
                    if coeff:
                        combo = (combo + coeff * f.arrows[(k, a)]) % p
                if not np.array_equal(composite, combo):
                    return ("composition", alg.syms[i], alg.syms[j], act.points[a])
    return None


class GradedModule:
    """One total-space matrix per algebra basis element; the grading is the
    block-support condition linking point components."""

    __slots__ = ("algebra", "act", "components", "offsets", "action")

    def __init__(self, algebra: GradedAlgebra, act: GAct, components, action,
                 *, validate=True):
        if act.monoid != algebra.monoid:
            raise ValidationError("act and algebra are over different monoids")
        self.algebra = algebra
        self.act = act
        self.components = tuple(int(c) for c in components)
        offsets = []
        total = 0
        for c in self.components:
            offsets.append(total)
            total += c
        self.offsets = tuple(offsets)
        p = algebra.field.p
        mats = []
        for i in range(algebra.dim):
            m = np.mod(np.asarray(action[i], dtype=np.int64), p)
            if m.shape != (total, total):
                raise ValidationError(f"action of {algebra.syms[i]} must be "
                                      f"{total}x{total}")
            mats.append(m)
        self.action = tuple(mats)
        if validate:
            bad = validate_graded_module(self)
            if bad is not None:
                raise ValidationError(f"graded module axiom violated at {bad}")

    @property
    def total_dim(self) -> int:
        return sum(self.components)

    def block(self, mat: np.ndarray, row_pt: int, col_pt: int) -> np.ndarray:
        r0 = self.offsets[row_pt]
        c0 = self.offsets[col_pt]
        return mat[r0:r0 + self.components[row_pt], c0:c0 + self.components[col_pt]]

    def __eq__(self, other):
        return (isinstance(other, GradedModule) and self.algebra == other.algebra
                and self.act == other.act and self.components == other.components
                and all(np.array_equal(a, b)
                        for a, b in zip(self.action, other.action)))

    def __repr__(self):
        return f"GradedModule(components={self.components})"


def validate_graded_module(q: GradedModule):
    alg, act = q.algebra, q.act
    p = alg.field.p
    n_pts = len(act)
    for i in range(alg.dim):
        g = alg.degs[i]
        for a in range(n_pts):
            target = act.act(g, a)
            for b in range(n_pts):
                if b != target and np.any(q.block(q.action[i], b, a)):
                    return ("grading", alg.syms[i], act.points[a])
    total = q.total_dim
    unit_total = sum((int(alg.unit[i]) * q.action[i]
                      for i in range(alg.dim) if alg.unit[i]),
                     linalg.zeros(total, total)) % p
    if not np.array_equal(unit_total, linalg.identity(total)):
        return ("unit",)
    for i in range(alg.dim):
        for j in range(alg.dim):
            composite = linalg.matmul(q.action[i], q.action[j], p)
            combo = linalg.zeros(total, total)
            for k in range(alg.dim):
                coeff = int(alg.mult[i, j, k])
                if coeff:
                    combo = (combo + coeff * q.action[k]) % p
            if not np.array_equal(composite, combo):
                return ("associativity", alg.syms[i], alg.syms[j])
    return None


def phi(f: FunctorModule) -> GradedModule:
    """Assemble per-arrow matrices into total graded action matrices."""
    alg, act = f.algebra, f.act
    components = f.spaces
    offsets = []
    total = 0
    for c in components:
        offsets.append(total)
        total += c
    action = []
    for i in range(alg.dim):
        g = alg.degs[i]
        m = linalg.zeros(total, total)
        for a in range(len(act)):
            b = act.act(g, a)
            m[offsets[b]:offsets[b] + components[b],
              offsets[a]:offsets[a] + components[a]] = f.arrows[(i, a)]
        action.append(m)
    return GradedModule(alg, act, components, action, validate=False)


def psi(q: GradedModule) -> FunctorModule:
    """Slice total graded action matrices into per-arrow matrices."""
    alg, act = q.algebra, q.act
    arrows = {}
    for i in range(alg.dim):
        g = alg.degs[i]
        for a in range(len(act)):
            b = act.act(g, a)
            arrows[(i, a)] = q.block(q.action[i], b, a).copy()
    return FunctorModule(alg, act, q.components, arrows, validate=False)


# ---------------------------------------------------------------------------
# smash products


class SmashAlgebra:
    """The smash product of a graded algebra with an act: a ring without
    identity on basis pairs (algebra basis element, point projection)."""

    __slots__ = ("algebra", "act", "pairs", "index", "table")

    def __init__(self, algebra: GradedAlgebra, act: GAct, *, validate=True):
        self.algebra = algebra
        self.act = act
        d, n_pts = algebra.dim, len(act)
        self.pairs = tuple((i, a) for i in range(d) for a in range(n_pts))
        self.index = {pair: t for t, pair in enumerate(self.pairs)}
        n = len(self.pairs)
        table = np.zeros((n, n, n), dtype=np.int64)
        for u, (i, a) in enumerate(self.pairs):
            for v, (j, b) in enumerate(self.pairs):
                if act.act(algebra.degs[j], b) == a:
                    for k in range(d):
                        coeff = int(algebra.mult[i, j, k])
                        if coeff:
                            table[u, v, self.index[(k, b)]] = coeff
        self.table = table
        if validate and not self._associative():
            raise InternalError("smash product table is not associative")

    @property
    def dim(self) -> int:
        return len(self.pairs)

    def __eq__(self, other):
        return (isinstance(other, SmashAlgebra) and self.algebra == other.algebra
                and self.act == other.act
                and np.array_equal(self.table, other.table))

    def product(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return _trilinear(x, y, self.table, self.algebra.field.p)

    def basis_vector(self, i: int, a: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[self.index[(i, a)]] = 1
        return v

    def point_idempotent(self, a: int) -> np.ndarray:
        """p_a: the unit of the algebra times the projection at a."""
        v = np.zeros(self.dim, dtype=np.int64)
        for i in range(self.algebra.dim):
            if self.algebra.unit[i]:
                v[self.index[(i, a)]] = int(self.algebra.unit[i])
        return v

    def _associative(self) -> bool:
        p = self.algebra.field.p
        n = self.dim
        # (e_u e_v) e_w vs e_u (e_v e_w), bilinearly extended
        for u in range(n):
            for v in range(n):
                uv = self.table[u, v].reshape(1, -1)
                for w in range(n):
                    left = linalg.matmul(uv, self.table[:, w, :], p)
                    right = linalg.matmul(self.table[v, w].reshape(1, -1),
                                          self.table[u], p)
                    if not np.array_equal(left, right):
                        return False
        return True

    def pair_name(self, t: int) -> str:
        i, a = self.pairs[t]
        return f"{self.algebra.syms[i]}@{self.act.points[a]}"


def smash_product(algebra: GradedAlgebra, act: GAct) -> SmashAlgebra:
    return SmashAlgebra(algebra, act)


def local_unit(sm: SmashAlgebra, elements) -> np.ndarray:
    """An idempotent w with w t = t and w t w = w t for every listed t.

    ``elements`` is a nonempty list of smash algebra vectors; the point set
    B collects, for every nonzero basis component, the source point and its
    image under the component's degree.
    """
    elements = [np.mod(np.asarray(t, dtype=np.int64), sm.algebra.field.p)
                for t in elements]
    if not elements:
        raise ValidationError("local_unit needs a nonempty element list")
    points = set()
    for t in elements:
        for flat in np.nonzero(t)[0]:
            i, a = sm.pairs[int(flat)]
            points.add(a)
            points.add(sm.act.act(sm.algebra.degs[i], a))
    w = np.zeros(sm.dim, dtype=np.int64)
    for a in sorted(points):
        w = (w + sm.point_idempotent(a)) % sm.algebra.field.p
    if not np.array_equal(sm.product(w, w), w):
        raise InternalError("local unit is not idempotent")
    for t in elements:
        wt = sm.product(w, t)
        if not np.array_equal(wt, t):
            raise InternalError("local unit fails to absorb on the left")
        if not np.array_equal(sm.product(wt, w), wt):
            raise InternalError("local unit fails w t w = w t")
    return w


class SmashModule:
    """A module over the smash product: one total matrix per basis pair."""

    __slots__ = ("smash", "dim", "action")

    def __init__(self, smash: SmashAlgebra, dim: int, action, *, validate=True):
        self.smash = smash
        self.dim = int(dim)
        p = smash.algebra.field.p
        fixed = {}
        for t in range(smash.dim):
            m = np.mod(np.asarray(action[t], dtype=np.int64), p)
            if m.shape != (self.dim, self.dim):
                raise ValidationError("smash module action shape mismatch")
            fixed[t] = m
        self.action = fixed
        if validate:
            bad = validate_smash_module(self)
            if bad is not None:
                raise ValidationError(f"smash module axiom violated at {bad}")

    def act_vector(self, x: np.ndarray) -> np.ndarray:
        p = self.smash.algebra.field.p
        out = linalg.zeros(self.dim, self.dim)
        for t in range(self.smash.dim):
            if x[t]:
                out = (out + int(x[t]) * self.action[t]) % p
        return out

    def __eq__(self, other):
        return (isinstance(other, SmashModule) and self.smash == other.smash
                and self.dim == other.dim
                and all(np.array_equal(self.action[t], other.action[t])
                        for t in self.action))

    def __repr__(self):
        return f"SmashModule(dim={self.dim})"


def validate_smash_module(q: SmashModule):
    sm = q.smash
    p = sm.algebra.field.p
    for u in range(sm.dim):
        for v in range(sm.dim):
            composite = linalg.matmul(q.action[u], q.action[v], p)
            combo = linalg.zeros(q.dim, q.dim)
            for w in np.nonzero(sm.table[u, v])[0]:
                combo = (combo + int(sm.table[u, v, w]) * q.action[int(w)]) % p
            if not np.array_equal(composite, combo):
                return ("product", sm.pair_name(u), sm.pair_name(v))
    return None


def gamma(f: FunctorModule, sm: SmashAlgebra | None = None) -> SmashModule:
    """Total space is the sum of the point spaces; the basis pair (i, a)
    acts through the arrow at (i, a) on the a-block."""
    if sm is None:
        sm = SmashAlgebra(f.algebra, f.act, validate=False)
    offsets = []
    total = 0
    for c in f.spaces:
        offsets.append(total)
        total += c
    action = {}
    for t, (i, a) in enumerate(sm.pairs):
        b = f.act.act(f.algebra.degs[i], a)
        m = linalg.zeros(total, total)
        m[offsets[b]:offsets[b] + f.spaces[b],
          offsets[a]:offsets[a] + f.spaces[a]] = f.arrows[(i, a)]
        action[t] = m
    return SmashModule(sm, total, action, validate=False)


def point_projectors(q: SmashModule) -> list[np.ndarray]:
    p = q.smash.algebra.field.p
    return [np.mod(q.act_vector(q.smash.point_idempotent(a)), p)
            for a in range(len(q.smash.act))]


def is_unital(q: SmashModule) -> bool:
    """The point idempotents must decompose the total space: idempotent,
    pairwise orthogonal images, ranks summing to the dimension."""
    p = q.smash.algebra.field.p
    projs = point_projectors(q)
    for i, pi in enumerate(projs):
        if not np.array_equal(linalg.matmul(pi, pi, p), pi):
            return False
        for j, pj in enumerate(projs):
            if i != j and np.any(linalg.matmul(pi, pj, p)):
                return False
    return sum(linalg.rank(pi, p) for pi in projs) == q.dim


def lambda_functor(q: SmashModule):
    """Split a unital smash module into per-point spaces and arrows.

    Returns (FunctorModule, inclusion matrices per point).  Point spaces
    are the images of the point idempotents with deterministic bases.
    """
    if not is_unital(q):
        raise NotUnital("smash module is not unital")
    sm = q.smash
    p = sm.algebra.field.p
    projs = point_projectors(q)
    bases = [linalg.image_basis(pi, p).basis for pi in projs]
    spaces = [b.shape[1] for b in bases]
    arrows = {}
    for i in range(sm.algebra.dim):
        g = sm.algebra.degs[i]
        for a in range(len(sm.act)):
            b = sm.act.act(g, a)
            moved = linalg.matmul(q.action[sm.index[(i, a)]], bases[a], p)
            try:
                arrows[(i, a)] = linalg.solve(bases[b], moved, p)
            except linalg.NoSolution as exc:  # pragma: no cover
                raise InternalError("graded piece escapes its block") from exc
    fm = FunctorModule(sm.algebra, sm.act, spaces, arrows, validate=False)
    return fm, bases


# ---------------------------------------------------------------------------
# category algebra vs smash product


def category_algebra_iso(field: FieldSpec, mon: Monoid, act: GAct) -> dict:
    """Compare the linearized action-category algebra with the smash product
    of the monoid algebra, under the basis swap (a, g) -> (g, a)."""
    sm = SmashAlgebra(monoid_algebra(mon, field), act, validate=False)
    n_g, n_a = len(mon), len(act)
    dim = n_g * n_a

    def cat_index(a: int, g: int) -> int:
        return a * n_g + g

    def to_smash(ci: int) -> int:
        a, g = divmod(ci, n_g)
        return sm.index[(g, a)]

    ring_hom = True
    witness = None
    for b in range(n_a):
        for h in range(n_g):
            for a in range(n_a):
                for g in range(n_g):
                    # e_(b,h) . e_(a,g): composable when b = g a
                    if act.act(g, a) == b:
                        cat_product = cat_index(a, mon.mul(h, g))
                    else:
                        cat_product = None
                    left = sm.table[to_smash(cat_index(b, h)),
                                    to_smash(cat_index(a, g))]
                    if cat_product is None:
                        ok = not np.any(left)
                    else:
                        expected = np.zeros(dim, dtype=np.int64)
                        expected[to_smash(cat_product)] = 1
                        ok = np.array_equal(left, expected)
                    if not ok and witness is None:
                        ring_hom = False
                        witness = (act.points[b], mon.names[h],
                                   act.points[a], mon.names[g])
    total = np.zeros(dim, dtype=np.int64)
    for a in range(n_a):
        total = (total + sm.point_idempotent(a)) % field.p
    unit_ok = all(
        np.array_equal(sm.product(total, sm.basis_vector(i, a)),
                       sm.basis_vector(i, a))
        and np.array_equal(sm.product(sm.basis_vector(i, a), total),
                           sm.basis_vector(i, a))
        for i in range(n_g) for a in range(n_a))
    return {"dim": dim, "ring_hom": ring_hom, "bijective": True,
            "sum_pa_is_unit": unit_ok, "witness": witness}


# ---------------------------------------------------------------------------
# free functor modules, cokernels, random instances


def free_functor_module(alg: GradedAlgebra, act: GAct, a0: int,
                        mult: int = 1) -> FunctorModule:
    """The representable functor module generated at the point a0.

    The space at b is spanned by pairs (copy, algebra basis element i) with
    deg(i) . a0 = b; arrows act by left multiplication through the
    structure constants.
    """
    d = alg.dim
    basis_at = [[] for _ in range(len(act))]
    for i in range(d):
        basis_at[act.act(alg.degs[i], a0)].append(i)
    spaces = [mult * len(basis_at[b]) for b in range(len(act))]
    pos = {}
    for b in range(len(act)):
        for t in range(mult):
            for r, i in enumerate(basis_at[b]):
                pos[(b, t, i)] = t * len(basis_at[b]) + r
    arrows = {}
    for j in range(d):
        g = alg.degs[j]
        for b in range(len(act)):
            target = act.act(g, b)
            m = linalg.zeros(spaces[target], spaces[b])
            for t in range(mult):
                for i in basis_at[b]:
                    col = pos[(b, t, i)]
                    for k in np.nonzero(alg.mult[j, i])[0]:
                        m[pos[(target, t, int(k))], col] = alg.mult[j, i, k]
            arrows[(j, b)] = m % alg.field.p
    return FunctorModule(alg, act, spaces, arrows, validate=False)


def fm_direct_sum(f1: FunctorModule, f2: FunctorModule) -> FunctorModule:
    spaces = [a + b for a, b in zip(f1.spaces, f2.spaces)]
    arrows = {k: linalg.block_diag([f1.arrows[k], f2.arrows[k]])
              for k in f1.arrows}
    return FunctorModule(f1.algebra, f1.act, spaces, arrows, validate=False)


def fm_zero(alg: GradedAlgebra, act: GAct) -> FunctorModule:
    return FunctorModule(alg, act, [0] * len(act), {}, validate=False)


def free_generator_vector(alg: GradedAlgebra, act: GAct, a0: int, mult: int,
                          copy: int) -> np.ndarray:
    """Coordinates of the unit generator of the given copy inside the space
    of ``free_functor_module(alg, act, a0, mult)`` at the point a0."""
    basis = [i for i in range(alg.dim) if act.act(alg.degs[i], a0) == a0]
    v = np.zeros(mult * len(basis), dtype=np.int64)
    for r, i in enumerate(basis):
        v[copy * len(basis) + r] = int(alg.unit[i])
    return v


def free_morphism_components(free: FunctorModule, a0: int, mult: int,
                             target: FunctorModule, images) -> dict:
    """Components of the morphism free -> target sending the copy-t
    generator to images[t] (a vector in the target space at a0)."""
    alg, act = free.algebra, free.act
    p = alg.field.p
    basis_at = [[] for _ in range(len(act))]
    for i in range(alg.dim):
        basis_at[act.act(alg.degs[i], a0)].append(i)
    comps = {}
    for b in range(len(act)):
        m = linalg.zeros(target.spaces[b], free.spaces[b])
        width = len(basis_at[b])
        for t in range(mult):
            for r, i in enumerate(basis_at[b]):
                col = t * width + r
                m[:, col] = linalg.matmul(
                    target.arrows[(i, a0)],
                    images[t].reshape(-1, 1), p)[:, 0]
        comps[b] = m
    return comps


def fm_cokernel(target: FunctorModule, components: dict) -> FunctorModule:
    """Pointwise cokernel of a morphism into ``target`` given by per-point
    component matrices; arrows are induced on the quotients."""
    alg, act = target.algebra, target.act
    p = alg.field.p
    projs = {}
    spaces = []
    for a in range(len(act)):
        _, proj = linalg.cokernel(components[a], p)
        projs[a] = proj
        spaces.append(proj.shape[0])
    arrows = {}
    for i in range(alg.dim):
        for a in range(len(act)):
            b = act.act(alg.degs[i], a)
            rhs = linalg.matmul(projs[b], target.arrows[(i, a)], p)
            try:
                arrows[(i, a)] = linalg.solve_left(projs[a], rhs, p)
            except linalg.NoSolution as exc:  # pragma: no cover
                raise InternalError("cokernel arrow is not induced") from exc
    return FunctorModule(alg, act, spaces, arrows, validate=False)


def random_functor_module(alg: GradedAlgebra, act: GAct, rng,
                          max_gens: int = 2, max_rels: int = 2) -> FunctorModule:
    """A random quotient of a random sum of representable modules."""
    n_pts = len(act)
    gens = [(int(rng.integers(0, n_pts)), 1)
            for _ in range(int(rng.integers(1, max_gens + 1)))]
    total = fm_zero(alg, act)
    for a0, mult in gens:
        total = fm_direct_sum(total, free_functor_module(alg, act, a0, mult))
    n_rels = int(rng.integers(0, max_rels + 1))
    if n_rels == 0:
        return total
    rel_sources = [int(rng.integers(0, n_pts)) for _ in range(n_rels)]
    comps = {b: linalg.zeros(total.spaces[b], 0) for b in range(n_pts)}
    for b0 in rel_sources:
        free = free_functor_module(alg, act, b0, 1)
        image = rng.integers(0, alg.field.p, size=total.spaces[b0]).astype(np.int64)
        part = free_morphism_components(free, b0, 1, total, [image])
        for b in range(n_pts):
            comps[b] = np.hstack([comps[b], part[b]])
    return fm_cokernel(total, comps)


# ---------------------------------------------------------------------------
# bridge to persistence modules


def pers_from_functor_module(f: FunctorModule, field: FieldSpec | None = None,
                             *, name="transported") -> PersModule:
    """Reread a functor module over a monoid algebra as a persistence module
    over the act's order.

    Needs an antisymmetric action preorder, so the points form a poset.
    Along each cover the acting element must be determined: either unique,
    or all elements moving the lower point to the upper one act through
    equal arrows in this module.  (Over a finite monoid a genuinely free
    act only exists for the trivial group, since some power of every
    element is an idempotent and idempotents pin points; the per-cover
    condition is the finite-scale version of freeness.)
    """
    alg, act = f.algebra, f.act
    if not alg.is_monoid_algebra:
        raise ValidationError("transport needs a monoid algebra")
    pre = act_preorder(act)
    if not pre.is_antisymmetric():
        raise ValidationError("act preorder is not antisymmetric")
    poset, _ = pre.quotient_to_poset()
    dims = {act.points[a]: f.spaces[a] for a in range(len(act))}
    maps = {}
    for a_name, b_name in poset.covers:
        a = act.points.index(a_name)
        b = act.points.index(b_name)
        movers = [g for g in range(len(act.monoid)) if act.act(g, a) == b]
        arrows = [f.arrows[(g, a)] for g in movers]
        if any(not np.array_equal(arrows[0], m) for m in arrows[1:]):
            raise ValidationError(
                f"ambiguous transport along {a_name!r} -> {b_name!r}")
        maps[(a_name, b_name)] = arrows[0]
    return PersModule(poset, field or alg.field, dims, maps, name=name,
                      validate=True)


# ---------------------------------------------------------------------------
# exhaustive catalogs of small monoids and acts


@lru_cache(maxsize=None)
def enumerate_monoids(max_order: int = 4) -> tuple[Monoid, ...]:
    """All monoids of order at most max_order, one per isomorphism class,
    with the unit normalized to index 0."""
    out = []
    for n in range(1, max_order + 1):
        tables = _associative_tables(n)
        seen = {}
        for t in tables:
            canon = _canonical_monoid_bytes(t, n)
            if canon not in seen:
                seen[canon] = t
        for i, t in enumerate(sorted(seen, key=lambda b: b)):
            table = np.frombuffer(t, dtype=np.int8).reshape(n, n).astype(np.int64)
            names = ["1", "a", "b", "c"][:n]
            out.append(Monoid(names, table, name=f"G{n}.{i}", validate=False))
    return tuple(out)


def _associative_tables(n: int) -> list[bytes]:
    if n == 1:
        return [np.zeros((1, 1), dtype=np.int8).tobytes()]
    free = n - 1
    cells = free * free
    grids = np.array(list(itertools.product(range(n), repeat=cells)),
                     dtype=np.int8)
    batch = grids.shape[0]
    tables = np.zeros((batch, n, n), dtype=np.int8)
    tables[:, 0, :] = np.arange(n, dtype=np.int8)
    tables[:, :, 0] = np.arange(n, dtype=np.int8)
    tables[:, 1:, 1:] = grids.reshape(batch, free, free)
    ok = np.ones(batch, dtype=bool)
    rows = np.arange(batch)
    for g in range(1, n):
        for h in range(1, n):
            gh = tables[rows, g, h]
            for k in range(1, n):
                left = tables[rows, gh, k]
                right = tables[rows, g, tables[rows, h, k]]
                ok &= left == right
    return [tables[i].tobytes() for i in np.nonzero(ok)[0]]


def _canonical_monoid_bytes(table_bytes: bytes, n: int) -> bytes:
    t = np.frombuffer(table_bytes, dtype=np.int8).reshape(n, n)
    best = None
    for perm in itertools.permutations(range(1, n)):
        sigma = np.array((0,) + perm, dtype=np.int8)
        inv = np.empty(n, dtype=np.int8)
        inv[sigma] = np.arange(n, dtype=np.int8)
        permuted = sigma[t[np.ix_(inv, inv)]].tobytes()
        if best is None or permuted < best:
            best = permuted
    return best


_ACT_CACHE: dict = {}


def enumerate_acts(mon: Monoid, max_size: int = 4) -> tuple[GAct, ...]:
    """All acts of the monoid on at most max_size points, one per act
    isomorphism class (bijections of the point set)."""
    key = (mon.table.tobytes(), len(mon), max_size)
    if key in _ACT_CACHE:
        return _ACT_CACHE[key]
    out = []
    n = len(mon)
    for m in range(1, max_size + 1):
        funcs = np.array(list(itertools.product(range(m), repeat=m)),
                         dtype=np.int16)
        n_funcs = funcs.shape[0]
        # comp[i, j] = index of f_i o f_j (apply f_j first); tuple encoding
        # matches the lexicographic order of itertools.product.
        encode = m ** np.arange(m - 1, -1, -1, dtype=np.int64)
        comp = np.empty((n_funcs, n_funcs), dtype=np.int32)
        for i in range(n_funcs):
            composed = funcs[i][funcs]  # row j holds f_i(f_j(x)) for all x
            comp[i] = (composed.astype(np.int64) @ encode).astype(np.int32)
        id_idx = int(np.arange(m, dtype=np.int64) @ encode)
        assign = np.full((1, n), -1, dtype=np.int32)
        assign[0, mon.unit] = id_idx
        order = [g for g in range(n) if g != mon.unit]
        for g in order:
            assign = _extend_assignments(assign, g, mon, comp, n_funcs)
            if assign.shape[0] == 0:
                break
        seen = {}
        for row in assign:
            table = funcs[row]  # (n, m)
            canon = _canonical_act_bytes(table, m)
            if canon not in seen:
                seen[canon] = table
        for canon in sorted(seen):
            table = np.frombuffer(canon, dtype=np.int8).reshape(n, m)
            points = [f"p{i}" for i in range(m)]
            out.append(GAct(mon, points, table.astype(np.int64),
                            name=f"act{m}", validate=False))
    result = tuple(out)
    _ACT_CACHE[key] = result
    return result


def _extend_assignments(assign: np.ndarray, g: int, mon: Monoid,
                        comp: np.ndarray, n_funcs: int) -> np.ndarray:
    """Extend partial hom assignments by all choices for element g, keeping
    rows consistent with every fully determined product constraint.  Works
    in chunks so the intermediate blow-up stays bounded."""
    if assign.shape[0] == 0:
        return assign
    determined = [int(x) for x in np.nonzero(assign[0] >= 0)[0]] + [g]
    constraints = []
    for x in determined:
        for y in determined:
            prod = mon.mul(x, y)
            if prod in determined or prod == g:
                constraints.append((x, y, prod))
    survivors = []
    chunk = max(1, 2**20 // n_funcs)
    candidates = np.arange(n_funcs, dtype=np.int32)
    for start in range(0, assign.shape[0], chunk):
        part = assign[start:start + chunk]
        reps = np.repeat(part, n_funcs, axis=0)
        reps[:, g] = np.tile(candidates, part.shape[0])
        keep = np.ones(reps.shape[0], dtype=bool)
        for x, y, prod in constraints:
            expected = comp[reps[:, x], reps[:, y]]
            keep &= reps[:, prod] == expected
        survivors.append(reps[keep])
    return np.concatenate(survivors, axis=0)


def _canonical_act_bytes(table: np.ndarray, m: int) -> bytes:
    best = None
    t8 = table.astype(np.int8)
    for perm in itertools.permutations(range(m)):
        sigma = np.array(perm, dtype=np.int8)
        permuted = sigma[t8[:, np.argsort(sigma)]].tobytes()
        if best is None or permuted < best:
            best = permuted
    return best
