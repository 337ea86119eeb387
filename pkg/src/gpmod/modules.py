"""Persistence modules over a finite poset and their morphisms.

A module assigns a finite-dimensional F_p vector space to every poset
element and a matrix to every cover; composites along covers must be
path-independent, which is validated at construction by propagating, for
every source element, the composite map to every element above it and
comparing whenever two routes meet.  Structure maps between arbitrary
comparable pairs are composed on demand and memoized.
"""

from __future__ import annotations

import numpy as np

from . import linalg
from .errors import (
    FunctorialityError,
    InternalError,
    MismatchedBase,
    NotAnInterval,
    NotComparable,
    ShapeError,
    ValidationError,
)
from .linalg import FieldSpec
from .posets import ElementSet, Poset, is_interval, up_set


class PersModule:
    """A functor from a finite poset to F_p vector spaces.

    Args:
        poset: the index poset.
        field: FieldSpec with the prime modulus.
        dims: mapping element id -> dimension; missing ids mean 0.
        cover_maps: mapping (lower, upper) cover pair -> matrix of shape
            (dims[upper], dims[lower]); missing covers default to zero.
        name: label used in reports.
        validate: run the functoriality check (skip only for modules that
            are path-independent by construction).
    """

    __slots__ = ("poset", "field", "dims", "cover_maps", "name", "_eval_cache")

    def __init__(self, poset: Poset, field: FieldSpec, dims, cover_maps,
                 *, name="M", validate=True):
        self.poset = poset
        self.field = field
        self.name = name
        p = field.p
        full = {}
        for e, d in dict(dims).items():
            poset.index(e)
            if d < 0:
                raise ShapeError(f"negative dimension at {e!r}")
            full[e] = int(d)
        self.dims = {e: full.get(e, 0) for e in poset.elements}
        maps = {}
        cover_maps = dict(cover_maps)
        cover_set = set(poset.covers)
        for pair in cover_maps:
            if pair not in cover_set:
                raise ValidationError(f"{pair!r} is not a cover of {poset.name!r}")
        for a, b in poset.covers:
            m = cover_maps.get((a, b))
            shape = (self.dims[b], self.dims[a])
            if m is None:
                m = linalg.zeros(*shape)
            else:
                m = linalg.as_matrix(m, p) if not isinstance(m, np.ndarray) else np.mod(
                    m.astype(np.int64, copy=False), p)
                if m.shape != shape:
                    raise ShapeError(
                        f"map {a!r}->{b!r} has shape {m.shape}, expected {shape}")
            maps[(a, b)] = m
        self.cover_maps = maps
        self._eval_cache = {}
        if validate:
            self._check_functoriality()

    # -- validation ------------------------------------------------------

    def _check_functoriality(self):
        poset = self.poset
        for a in poset.elements:
            if self.dims[a] == 0:
                continue
            reached = {a: linalg.identity(self.dims[a])}
            for c in poset.elements:
                if c not in reached:
                    continue
                base = reached[c]
                for d in poset.covers_above(c):
                    m = linalg.matmul(self.cover_maps[(c, d)], base, self.field.p)
                    if d in reached:
                        if not np.array_equal(reached[d], m):
                            raise FunctorialityError(a, d)
                    else:
                        reached[d] = m

    # -- basic queries ---------------------------------------------------

    def dim(self, e: str) -> int:
        return self.dims[e]

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def eval_map(self, a: str, b: str) -> np.ndarray:
        """The composite structure map a -> b (identity when a == b)."""
        if not self.poset.leq(a, b):
            raise NotComparable(f"{a!r} is not below {b!r}")
        if a == b:
            return linalg.identity(self.dims[a])
        key = (a, b)
        cached = self._eval_cache.get(key)
        if cached is not None:
            return cached
        for c in self.poset.covers_below(b):
            if self.poset.leq(a, c):
                m = linalg.matmul(self.cover_maps[(c, b)], self.eval_map(a, c),
                                  self.field.p)
                self._eval_cache[key] = m
                return m
        raise InternalError(f"no cover path from {a!r} to {b!r}")

    def support(self) -> ElementSet:
        return self.poset.subset([e for e in self.poset.elements if self.dims[e] > 0])

    def __eq__(self, other):
        if not isinstance(other, PersModule):
            return NotImplemented
        return (self.poset == other.poset and self.field == other.field
                and self.dims == other.dims
                and all(np.array_equal(self.cover_maps[c], other.cover_maps[c])
                        for c in self.poset.covers))

    def __repr__(self):
        return f"PersModule({self.name!r} over {self.poset.name!r}, dims={self.dims})"


class ModuleMorphism:
    """A natural transformation between two modules over the same poset."""

    __slots__ = ("source", "target", "components")

    def __init__(self, source: PersModule, target: PersModule, components,
                 *, validate=True):
        if source.poset != target.poset or source.field != target.field:
            raise MismatchedBase("morphism endpoints live over different bases")
        self.source = source
        self.target = target
        p = source.field.p
        comps = {}
        components = dict(components)
        for e in source.poset.elements:
            m = components.get(e)
            shape = (target.dims[e], source.dims[e])
            if m is None:
                m = linalg.zeros(*shape)
            else:
                m = linalg.as_matrix(m, p) if not isinstance(m, np.ndarray) else np.mod(
                    m.astype(np.int64, copy=False), p)
                if m.shape != shape:
                    raise ShapeError(f"component at {e!r} has shape {m.shape}, "
                                     f"expected {shape}")
            comps[e] = m
        self.components = comps
        if validate:
            self._check_naturality()

    def _check_naturality(self):
        p = self.source.field.p
        for a, b in self.source.poset.covers:
            left = linalg.matmul(self.target.cover_maps[(a, b)], self.components[a], p)
            right = linalg.matmul(self.components[b], self.source.cover_maps[(a, b)], p)
            if not np.array_equal(left, right):
                raise ValidationError(f"naturality fails on cover {(a, b)!r}")

    def component(self, e: str) -> np.ndarray:
        return self.components[e]

    def __eq__(self, other):
        if not isinstance(other, ModuleMorphism):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and all(np.array_equal(self.components[e], other.components[e])
                        for e in self.source.poset.elements))

    def compose(self, inner: "ModuleMorphism") -> "ModuleMorphism":
        """self after inner."""
        if inner.target is not self.source and inner.target != self.source:
            raise MismatchedBase("composition endpoints do not match")
        p = self.source.field.p
        comps = {e: linalg.matmul(self.components[e], inner.components[e], p)
                 for e in self.source.poset.elements}
        return ModuleMorphism(inner.source, self.target, comps, validate=False)

    @staticmethod
    def identity(m: PersModule) -> "ModuleMorphism":
        return ModuleMorphism(m, m, {e: linalg.identity(m.dims[e])
                                     for e in m.poset.elements}, validate=False)

    @staticmethod
    def zero(source: PersModule, target: PersModule) -> "ModuleMorphism":
        return ModuleMorphism(source, target, {}, validate=False)


def new_module(poset, field, dims, cover_maps, *, name="M") -> PersModule:
    """Validated module constructor (alias of the PersModule initializer)."""
    return PersModule(poset, field, dims, cover_maps, name=name)


def is_epi(f: ModuleMorphism) -> bool:
    p = f.source.field.p
    return all(linalg.rank(f.components[e], p) == f.target.dims[e]
               for e in f.source.poset.elements)


def is_mono(f: ModuleMorphism) -> bool:
    p = f.source.field.p
    return all(linalg.rank(f.components[e], p) == f.source.dims[e]
               for e in f.source.poset.elements)


def is_iso(f: ModuleMorphism) -> bool:
    p = f.source.field.p
    return all(linalg.is_isomorphism(f.components[e], p)
               for e in f.source.poset.elements)


def interval_module(poset: Poset, interval, field: FieldSpec, *, name=None) -> PersModule:
    """Dimension 1 on the interval, identity maps inside, zero elsewhere."""
    i = poset.subset(interval)
    if not is_interval(poset, i):
        raise NotAnInterval(f"{sorted(i.ids())} is not betweenness-closed")
    dims = {e: 1 for e in i}
    maps = {}
    one = linalg.identity(1)
    for a, b in poset.covers:
        if a in i and b in i:
            maps[(a, b)] = one
    return PersModule(poset, field, dims, maps, name=name or "interval", validate=False)


def free_module(poset: Poset, c: str, multiplicity: int, field: FieldSpec,
                *, name=None) -> PersModule:
    """The representable module at c with the given multiplicity: dimension
    ``multiplicity`` on the upset of c, identity maps inside."""
    if multiplicity < 0:
        raise ShapeError("multiplicity must be nonnegative")
    up = up_set(poset, [c])
    dims = {e: multiplicity for e in up}
    ident = linalg.identity(multiplicity)
    maps = {}
    for a, b in poset.covers:
        if a in up and b in up:
            maps[(a, b)] = ident
    return PersModule(poset, field, dims, maps,
                      name=name or f"free({c},{multiplicity})", validate=False)


def direct_sum(m: PersModule, n: PersModule, *, name=None) -> PersModule:
    if m.poset != n.poset or m.field != n.field:
        raise MismatchedBase("direct sum over different bases")
    dims = {e: m.dims[e] + n.dims[e] for e in m.poset.elements}
    maps = {c: linalg.block_diag([m.cover_maps[c], n.cover_maps[c]])
            for c in m.poset.covers}
    return PersModule(m.poset, m.field, dims, maps,
                      name=name or f"{m.name}+{n.name}", validate=False)


def summand_inclusions(m: PersModule, n: PersModule, total: PersModule):
    """Inclusions of the two summands of ``direct_sum(m, n)`` into it."""
    p = m.field.p
    inc_m, inc_n = {}, {}
    for e in m.poset.elements:
        dm, dn = m.dims[e], n.dims[e]
        block = linalg.zeros(dm + dn, dm)
        block[:dm, :] = linalg.identity(dm)
        inc_m[e] = block
        block = linalg.zeros(dm + dn, dn)
        block[dm:, :] = linalg.identity(dn)
        inc_n[e] = block
    return (ModuleMorphism(m, total, inc_m, validate=False),
            ModuleMorphism(n, total, inc_n, validate=False))


def zero_module(poset: Poset, field: FieldSpec) -> PersModule:
    return PersModule(poset, field, {}, {}, name="0", validate=False)


def kernel_module(f: ModuleMorphism) -> tuple[PersModule, ModuleMorphism]:
    """Pointwise kernel with induced structure maps and its inclusion."""
    p = f.source.field.p
    src = f.source
    bases = {e: linalg.kernel_basis(f.components[e], p).basis
             for e in src.poset.elements}
    dims = {e: bases[e].shape[1] for e in src.poset.elements}
    maps = {}
    for a, b in src.poset.covers:
        moved = linalg.matmul(src.cover_maps[(a, b)], bases[a], p)
        try:
            maps[(a, b)] = linalg.solve(bases[b], moved, p)
        except linalg.NoSolution as exc:  # pragma: no cover - naturality guards this
            raise InternalError(f"kernel map at cover {(a, b)!r}") from exc
    ker = PersModule(src.poset, src.field, dims, maps,
                     name=f"ker({f.source.name})", validate=False)
    incl = ModuleMorphism(ker, src, bases, validate=False)
    return ker, incl


def cokernel_module(f: ModuleMorphism) -> tuple[PersModule, ModuleMorphism]:
    """Pointwise cokernel with induced structure maps and its projection."""
    p = f.source.field.p
    tgt = f.target
    projs = {}
    dims = {}
    for e in tgt.poset.elements:
        d, proj = linalg.cokernel(f.components[e], p)
        dims[e] = d
        projs[e] = proj
    maps = {}
    for a, b in tgt.poset.covers:
        rhs = linalg.matmul(projs[b], tgt.cover_maps[(a, b)], p)
        try:
            maps[(a, b)] = linalg.solve_left(projs[a], rhs, p)
        except linalg.NoSolution as exc:  # pragma: no cover
            raise InternalError(f"cokernel map at cover {(a, b)!r}") from exc
    cok = PersModule(tgt.poset, tgt.field, dims, maps,
                     name=f"coker({f.source.name})", validate=False)
    proj = ModuleMorphism(tgt, cok, projs, validate=False)
    return cok, proj


def hom_basis(m: PersModule, n: PersModule) -> list[ModuleMorphism]:
    """A basis of the space of morphisms m -> n.

    Solves the naturality constraints over all covers as one linear system;
    each kernel vector is reshaped into per-element component matrices.
    """
    if m.poset != n.poset or m.field != n.field:
        raise MismatchedBase("hom over different bases")
    p = m.field.p
    poset = m.poset
    offsets = {}
    total = 0
    for e in poset.elements:
        offsets[e] = total
        total += n.dims[e] * m.dims[e]
    rows = []
    for a, b in poset.covers:
        block_rows = n.dims[b] * m.dims[a]
        if block_rows == 0:
            continue
        row = linalg.zeros(block_rows, total)
        # vec(f_b @ M_ab) = (I kron M_ab^T) vec(f_b), row-major vec
        if n.dims[b] and m.dims[b]:
            row[:, offsets[b]:offsets[b] + n.dims[b] * m.dims[b]] = np.kron(
                linalg.identity(n.dims[b]), m.cover_maps[(a, b)].T) % p
        if n.dims[a] and m.dims[a]:
            row[:, offsets[a]:offsets[a] + n.dims[a] * m.dims[a]] = (
                row[:, offsets[a]:offsets[a] + n.dims[a] * m.dims[a]]
                - np.kron(n.cover_maps[(a, b)], linalg.identity(m.dims[a]))) % p
        rows.append(row)
    system = linalg.vstack(rows, total)
    null = linalg.kernel_basis(system, p)
    out = []
    for k in range(null.dim):
        vec = null.basis[:, k]
        comps = {}
        for e in poset.elements:
            size = n.dims[e] * m.dims[e]
            comps[e] = vec[offsets[e]:offsets[e] + size].reshape(n.dims[e], m.dims[e])
        out.append(ModuleMorphism(m, n, comps, validate=False))
    return out


def hom_space_dim(m: PersModule, n: PersModule) -> int:
    return len(hom_basis(m, n))


def random_morphism(m: PersModule, n: PersModule, rng) -> ModuleMorphism:
    """A random point of the morphism space (zero if the space is zero)."""
    basis = hom_basis(m, n)
    p = m.field.p
    comps = {e: linalg.zeros(n.dims[e], m.dims[e]) for e in m.poset.elements}
    for f in basis:
        c = int(rng.integers(0, p))
        if c == 0:
            continue
        for e in m.poset.elements:
            comps[e] = (comps[e] + c * f.components[e]) % p
    return ModuleMorphism(m, n, comps, validate=False)


def _random_interval(poset: Poset, rng):
    a = poset.elements[int(rng.integers(0, len(poset)))]
    ups = list(up_set(poset, [a]))
    b = ups[int(rng.integers(0, len(ups)))]
    members = [c for c in poset.elements if poset.leq(a, c) and poset.leq(c, b)]
    return members


def random_module(poset: Poset, max_dim: int, field: FieldSpec, seed,
                  generator: str = "solve") -> PersModule:
    """Deterministic random module.

    generator="intervals": a direct sum of a few interval and free modules.
    generator="solve": random dimensions, random maps on a spanning forest
        of the covers, remaining maps derived by solving the
        path-independence constraints; resamples on failure.
    """
    rng = np.random.default_rng(seed)
    if generator == "intervals":
        return _random_interval_sum(poset, max_dim, field, rng)
    if generator != "solve":
        raise ValidationError(f"unknown generator {generator!r}")
    for _ in range(50):
        m = _random_solved(poset, max_dim, field, rng)
        if m is not None:
            return m
    return _random_interval_sum(poset, max_dim, field, rng)


def _random_interval_sum(poset, max_dim, field, rng) -> PersModule:
    pieces = max(1, int(rng.integers(1, max(2, max_dim + 1))))
    total = zero_module(poset, field)
    for _ in range(pieces):
        if rng.integers(0, 2) == 0:
            piece = interval_module(poset, _random_interval(poset, rng), field)
        else:
            c = poset.elements[int(rng.integers(0, len(poset)))]
            piece = free_module(poset, c, 1, field)
        total = direct_sum(total, piece)
    total.name = "random"
    return total


def _random_solved(poset, max_dim, field, rng) -> PersModule | None:
    p = field.p
    dims = {e: int(rng.integers(0, max_dim + 1)) for e in poset.elements}
    maps = {}
    # composites[(s, c)] = structure map s -> c fixed so far
    composites = {(e, e): linalg.identity(dims[e]) for e in poset.elements}
    for c in poset.elements:
        below = poset.covers_below(c)
        fixed_into_c = {}
        for b in below:
            sources = [s for s in poset.elements if poset.leq(s, b)]
            constrained = [s for s in sources if s in fixed_into_c]
            a_blocks = [composites[(s, b)].T for s in constrained]
            b_blocks = [fixed_into_c[s].T for s in constrained]
            if constrained:
                a_sys = linalg.vstack(a_blocks, dims[b])
                b_sys = linalg.vstack(b_blocks, dims[c])
                try:
                    xt = linalg.solve(a_sys, b_sys, p)
                except linalg.NoSolution:
                    return None
                null = linalg.kernel_basis(a_sys, p)
                if null.dim and dims[c]:
                    coeffs = rng.integers(0, p, size=(null.dim, dims[c]))
                    xt = (xt + linalg.matmul(null.basis, coeffs, p)) % p
                x = xt.T.copy()
            else:
                x = rng.integers(0, p, size=(dims[c], dims[b])).astype(np.int64)
            maps[(b, c)] = x
            for s in sources:
                if s not in fixed_into_c:
                    fixed_into_c[s] = linalg.matmul(x, composites[(s, b)], p)
        for s, m in fixed_into_c.items():
            composites[(s, c)] = m
    return PersModule(poset, field, dims, maps, name="random", validate=False)
