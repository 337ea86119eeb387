"""Colimits of vector-space diagrams over poset windows, restriction and
induction along a subset inclusion, and the canonical comparison maps.

A window colimit is presented as the cokernel of a relation matrix on the
direct sum of the window spaces; relations are generated only by the covers
of the order induced on the window, which suffices because covers generate
the order.  All bases come from the deterministic cokernel convention in
``linalg``, so injections and induced maps are byte-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import InternalError
from .modules import ModuleMorphism, PersModule
from .posets import ElementSet, Poset, build_poset, _bits


@dataclass(frozen=True)
class IndexWindow:
    """The diagram index {d in S : d < c} (strict) or {d in S : d <= c}."""

    S: ElementSet
    c: str
    strict: bool = True

    def mask(self) -> int:
        p = self.S.poset
        m = p.down_mask(self.c) & self.S.mask
        if self.strict:
            m &= ~(1 << p.index(self.c))
        return m


@dataclass
class ColimitResult:
    """A presented colimit of the diagram on a window.

    ``projection`` maps the direct sum of the window spaces onto the
    colimit; ``injections[d]`` is the structure injection of the summand at
    d, and ``presentation`` is the relation matrix whose cokernel was taken.
    """

    dim: int
    window: tuple[str, ...]
    offsets: dict[str, int]
    injections: dict[str, np.ndarray]
    presentation: np.ndarray
    projection: np.ndarray


def _window_elements(m: PersModule, mask: int) -> list[str]:
    return [m.poset.elements[i] for i in _bits(mask)]


def colim_over_mask(m: PersModule, mask: int) -> ColimitResult:
    """Colimit of m restricted to the subset given as a bitmask."""
    poset = m.poset
    p = m.field.p
    window = _window_elements(m, mask)
    offsets = {}
    total = 0
    for d in window:
        offsets[d] = total
        total += m.dims[d]
    blocks = []
    for d, d2 in poset.cover_pairs_within(mask):
        block = linalg.zeros(total, m.dims[d])
        block[offsets[d]:offsets[d] + m.dims[d]] = linalg.identity(m.dims[d])
        ev = m.eval_map(d, d2)
        block[offsets[d2]:offsets[d2] + m.dims[d2]] = (-ev) % p
        blocks.append(block)
    presentation = linalg.hstack(blocks, total)
    dim, projection = linalg.cokernel(presentation, p)
    injections = {d: projection[:, offsets[d]:offsets[d] + m.dims[d]].copy()
                  for d in window}
    return ColimitResult(dim=dim, window=tuple(window), offsets=offsets,
                         injections=injections, presentation=presentation,
                         projection=projection)


def colim_window(m: PersModule, w: IndexWindow) -> ColimitResult:
    return colim_over_mask(m, w.mask())


def restrict(m: PersModule, s) -> PersModule:
    """The module over the full subposet on s, structure maps composed."""
    s = m.poset.subset(s)
    sub_rels = m.poset.cover_pairs_within(s.mask)
    sub = build_poset(s.ids(), sub_rels, name=f"{m.poset.name}|{len(s)}")
    dims = {e: m.dims[e] for e in s}
    maps = {(a, b): m.eval_map(a, b) for a, b in sub.covers}
    return PersModule(sub, m.field, dims, maps,
                      name=f"res({m.name})", validate=False)


def _embeds_as_full_subposet(sub: Poset, ambient: Poset) -> bool:
    for a in sub.elements:
        ambient.index(a)
    for a in sub.elements:
        for b in sub.elements:
            if sub.leq(a, b) != ambient.leq(a, b):
                return False
    return True


def induce_with_data(n: PersModule, ambient: Poset):
    """Left Kan extension along the subset inclusion, with colimit data.

    Returns (module over ambient, {element: ColimitResult}).  The colimit
    at c indexes over {t in S : t <= c}; the structure map along a cover
    c <= c' is solved from the compatibility of the two projections.
    """
    sub = n.poset
    if not _embeds_as_full_subposet(sub, ambient):
        raise InternalError("subposet does not embed fully in the ambient poset")
    p = n.field.p
    s_mask_ambient = 0
    for e in sub.elements:
        s_mask_ambient |= 1 << ambient.index(e)

    # Window masks are expressed inside the subposet so colimits can be
    # shared between ambient elements with equal windows.
    def sub_mask_of(c: str) -> int:
        mask = 0
        for i in _bits(ambient.down_mask(c) & s_mask_ambient):
            mask |= 1 << sub.index(ambient.elements[i])
        return mask

    cache: dict[int, ColimitResult] = {}
    data = {}
    dims = {}
    for c in ambient.elements:
        mask = sub_mask_of(c)
        if mask not in cache:
            cache[mask] = colim_over_mask(n, mask)
        data[c] = cache[mask]
        dims[c] = data[c].dim
    maps = {}
    for a, b in ambient.covers:
        da, db = data[a], data[b]
        total_a = sum(n.dims[d] for d in da.window)
        incl = linalg.zeros(sum(n.dims[d] for d in db.window), total_a)
        for d in da.window:
            incl[db.offsets[d]:db.offsets[d] + n.dims[d],
                 da.offsets[d]:da.offsets[d] + n.dims[d]] = linalg.identity(n.dims[d])
        rhs = linalg.matmul(db.projection, incl, p)
        try:
            maps[(a, b)] = linalg.solve_left(da.projection, rhs, p)
        except linalg.NoSolution as exc:  # pragma: no cover - cocone property
            raise InternalError(f"induced map at cover {(a, b)!r}") from exc
    mod = PersModule(ambient, n.field, dims, maps,
                     name=f"ind({n.name})", validate=False)
    return mod, data


def induce(n: PersModule, ambient: Poset) -> PersModule:
    return induce_with_data(n, ambient)[0]


def canonical_mu(m: PersModule, s, *, validate=True) -> ModuleMorphism:
    """The counit ind(res(m)) -> m of the restriction/induction adjunction.

    The component at c sends the class of x in m(d), d in the window, to
    the structure map m(d <= c) applied to x; well-definedness is certified
    by checking that the component annihilates the colimit relations.
    """
    s = m.poset.subset(s)
    res = restrict(m, s)
    ind, data = induce_with_data(res, m.poset)
    p = m.field.p
    comps = {}
    for c in m.poset.elements:
        cr = data[c]
        total = sum(m.dims[d] for d in cr.window)
        cocone = linalg.hstack([m.eval_map(d, c) for d in cr.window], m.dims[c]) \
            if cr.window else linalg.zeros(m.dims[c], 0)
        if cr.presentation.shape[1] and cocone.shape[1]:
            killed = linalg.matmul(cocone, cr.presentation, p)
            if np.any(killed):
                raise InternalError(f"mu component at {c!r} does not kill relations")
        try:
            comps[c] = linalg.solve_left(cr.projection, cocone, p)
        except linalg.NoSolution as exc:  # pragma: no cover
            raise InternalError(f"mu component at {c!r}") from exc
    return ModuleMorphism(ind, m, comps, validate=validate)


def lambda_with_window(m: PersModule, s, c: str):
    """The natural map from the strict-window colimit into m(c).

    Returns (matrix of shape dims(c) x colim_dim, ColimitResult).
    """
    s = m.poset.subset(s)
    cr = colim_window(m, IndexWindow(s, c, strict=True))
    p = m.field.p
    cocone = linalg.hstack([m.eval_map(d, c) for d in cr.window], m.dims[c]) \
        if cr.window else linalg.zeros(m.dims[c], 0)
    if cr.presentation.shape[1] and cocone.shape[1]:
        killed = linalg.matmul(cocone, cr.presentation, p)
        if np.any(killed):
            raise InternalError(f"lambda at {c!r} does not kill relations")
    try:
        lam = linalg.solve_left(cr.projection, cocone, p)
    except linalg.NoSolution as exc:  # pragma: no cover
        raise InternalError(f"lambda at {c!r}") from exc
    return lam, cr


def lambda_map(m: PersModule, s, c: str) -> np.ndarray:
    return lambda_with_window(m, s, c)[0]


def window_ranks(m: PersModule, s, c: str) -> tuple[int, int, int]:
    """(rank of lambda, colimit dimension, dims(c)) for the strict window.

    rank(lambda) equals the rank of the stacked structure maps because the
    colimit projection is surjective; this avoids solving for lambda when
    only epi/mono tests are needed.
    """
    s = m.poset.subset(s)
    mask = IndexWindow(s, c, strict=True).mask()
    poset = m.poset
    p = m.field.p
    window = _window_elements(m, mask)
    total = sum(m.dims[d] for d in window)
    offsets = {}
    off = 0
    for d in window:
        offsets[d] = off
        off += m.dims[d]
    blocks = []
    for d, d2 in poset.cover_pairs_within(mask):
        block = linalg.zeros(total, m.dims[d])
        block[offsets[d]:offsets[d] + m.dims[d]] = linalg.identity(m.dims[d])
        block[offsets[d2]:offsets[d2] + m.dims[d2]] = (-m.eval_map(d, d2)) % p
        blocks.append(block)
    presentation = linalg.hstack(blocks, total)
    colim_dim = total - linalg.rank(presentation, p)
    cocone = linalg.hstack([m.eval_map(d, c) for d in window], m.dims[c]) \
        if window else linalg.zeros(m.dims[c], 0)
    return linalg.rank(cocone, p), colim_dim, m.dims[c]
