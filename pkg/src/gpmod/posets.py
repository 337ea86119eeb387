"""Finite posets: construction, order queries, minimal upper bounds, closures.

Elements are opaque strings.  After construction a poset fixes one canonical
element order, (topological rank, identifier), and every derived object
(subsets, matrices, reports) is expressed in that order so results are
byte-reproducible.  Reachability is cached as one bitmask per element;
subsets are bitmasks too, so order queries are integer arithmetic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import (
    CycleError,
    EmptySetError,
    TooLargeError,
    UnknownElement,
    ValidationError,
)

HAT_SIZE_LIMIT = 20
GRID_SIZE_LIMIT = 10**5


def _bits(mask: int):
    """Indices of the set bits of mask, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Poset:
    """An immutable finite poset.

    Attributes:
        elements: element ids in canonical order (topo rank, then id).
        covers: the transitive reduction as (lower, upper) id pairs,
            sorted canonically.
        topo_rank: longest-chain-below rank per element, aligned with
            ``elements``.
    """

    __slots__ = ("elements", "covers", "topo_rank", "name", "grid_shape",
                 "_index", "_up", "_down", "_covers_above", "_covers_below")

    def __init__(self, elements, up_masks, name="poset", grid_shape=None):
        # Internal constructor: ``up_masks[i]`` is the reachability bitmask
        # of elements[i] in the *given* element order.  Use build_poset().
        n = len(elements)
        # Longest-chain rank, by relaxation over strict comparable pairs.
        rank = [0] * n
        strict = [(i, j) for i in range(n) for j in _bits(up_masks[i]) if j != i]
        changed = True
        while changed:
            changed = False
            for i, j in strict:
                if rank[j] < rank[i] + 1:
                    rank[j] = rank[i] + 1
                    changed = True
        order = sorted(range(n), key=lambda i: (rank[i], elements[i]))
        pos = {old: new for new, old in enumerate(order)}
        self.elements = tuple(elements[i] for i in order)
        self.topo_rank = tuple(rank[i] for i in order)
        self.name = name
        self.grid_shape = grid_shape
        self._index = {e: i for i, e in enumerate(self.elements)}
        up = [0] * n
        for old in range(n):
            m = 0
            for j in _bits(up_masks[old]):
                m |= 1 << pos[j]
            up[pos[old]] = m
        self._up = tuple(up)
        down = [0] * n
        for i in range(n):
            for j in _bits(up[i]):
                down[j] |= 1 << i
        self._down = tuple(down)
        covers = []
        for a in range(n):
            stricta = up[a] & ~(1 << a)
            for b in _bits(stricta):
                between = stricta & (down[b] & ~(1 << b))
                if between == 0:
                    covers.append((self.elements[a], self.elements[b]))
        covers.sort(key=lambda ab: (self._index[ab[0]], self._index[ab[1]]))
        self.covers = tuple(covers)
        above = {e: [] for e in self.elements}
        below = {e: [] for e in self.elements}
        for a, b in self.covers:
            above[a].append(b)
            below[b].append(a)
        self._covers_above = {e: tuple(v) for e, v in above.items()}
        self._covers_below = {e: tuple(v) for e, v in below.items()}

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"Poset({self.name!r}, {len(self)} elements, {len(self.covers)} covers)"

    def __eq__(self, other):
        return (isinstance(other, Poset) and self.elements == other.elements
                and self._up == other._up)

    def __hash__(self):
        return hash((self.elements, self._up))

    def index(self, e: str) -> int:
        try:
            return self._index[e]
        except KeyError:
            raise UnknownElement(f"unknown element {e!r} in poset {self.name!r}") from None

    def leq(self, a: str, b: str) -> bool:
        return bool(self._up[self.index(a)] >> self.index(b) & 1)

    def lt(self, a: str, b: str) -> bool:
        return a != b and self.leq(a, b)

    def comparable(self, a: str, b: str) -> bool:
        return self.leq(a, b) or self.leq(b, a)

    def up_mask(self, e: str) -> int:
        return self._up[self.index(e)]

    def down_mask(self, e: str) -> int:
        return self._down[self.index(e)]

    @property
    def full_mask(self) -> int:
        return (1 << len(self.elements)) - 1

    def covers_above(self, e: str) -> tuple[str, ...]:
        return self._covers_above[e]

    def covers_below(self, e: str) -> tuple[str, ...]:
        return self._covers_below[e]

    def subset(self, ids) -> "ElementSet":
        if isinstance(ids, ElementSet):
            if ids.poset is self:
                return ids
            if ids.poset == self:
                # equal posets share the canonical order, so masks carry over
                return ElementSet(self, ids.mask)
            raise MismatchedSubset(ids, self)
        mask = 0
        for e in ids:
            mask |= 1 << self.index(e)
        return ElementSet(self, mask)

    def subset_from_mask(self, mask: int) -> "ElementSet":
        return ElementSet(self, mask)

    def whole(self) -> "ElementSet":
        return ElementSet(self, self.full_mask)

    def empty(self) -> "ElementSet":
        return ElementSet(self, 0)

    def minimal_of_mask(self, mask: int) -> int:
        """Bitmask of the minimal elements of the given subset mask."""
        out = 0
        for i in _bits(mask):
            if mask & self._down[i] & ~(1 << i) == 0:
                out |= 1 << i
        return out

    def cover_pairs_within(self, mask: int) -> list[tuple[str, str]]:
        """Transitive reduction of the order induced on the subset mask."""
        out = []
        for a in _bits(mask):
            reach = self._up[a] & mask & ~(1 << a)
            for b in _bits(reach):
                if reach & self._down[b] & ~(1 << b) == 0:
                    out.append((self.elements[a], self.elements[b]))
        return out


def MismatchedSubset(es, poset):
    return UnknownElement(f"subset belongs to poset {es.poset.name!r}, not {poset.name!r}")


class ElementSet:
    """A subset of a poset's elements, iterated in canonical order."""

    __slots__ = ("poset", "mask", "_members")

    def __init__(self, poset: Poset, mask: int):
        self.poset = poset
        self.mask = mask
        self._members = None

    @property
    def members(self) -> tuple[str, ...]:
        if self._members is None:
            self._members = tuple(self.poset.elements[i] for i in _bits(self.mask))
        return self._members

    def ids(self) -> list[str]:
        return list(self.members)

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return self.mask.bit_count()

    def __contains__(self, e: str) -> bool:
        i = self.poset._index.get(e)
        return i is not None and bool(self.mask >> i & 1)

    def __eq__(self, other):
        if isinstance(other, ElementSet):
            return self.poset == other.poset and self.mask == other.mask
        return NotImplemented

    def __hash__(self):
        return hash((self.poset, self.mask))

    def __repr__(self):
        return f"ElementSet({{{', '.join(self.members)}}})"

    def union(self, other: "ElementSet") -> "ElementSet":
        return ElementSet(self.poset, self.mask | other.mask)

    def intersection(self, other: "ElementSet") -> "ElementSet":
        return ElementSet(self.poset, self.mask & other.mask)

    def difference(self, other: "ElementSet") -> "ElementSet":
        return ElementSet(self.poset, self.mask & ~other.mask)


def build_poset(elements, relations, name="poset") -> Poset:
    """Build a poset from element ids and 'first <= second' pairs.

    The reflexive-transitive closure of the pairs becomes the order; the
    stored cover relation is its transitive reduction.  Raises CycleError
    if the closure is not antisymmetric and UnknownElement for dangling
    references.
    """
    ids = list(elements)
    if len(set(ids)) != len(ids):
        raise ValidationError("duplicate element identifiers")
    index = {e: i for i, e in enumerate(ids)}
    n = len(ids)
    adj = [set() for _ in range(n)]
    for a, b in relations:
        if a not in index:
            raise UnknownElement(f"relation references unknown element {a!r}")
        if b not in index:
            raise UnknownElement(f"relation references unknown element {b!r}")
        if a != b:
            adj[index[a]].add(index[b])
    indeg = [0] * n
    for i in range(n):
        for j in adj[i]:
            indeg[j] += 1
    queue = [i for i in range(n) if indeg[i] == 0]
    topo = []
    while queue:
        i = queue.pop()
        topo.append(i)
        for j in adj[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                queue.append(j)
    if len(topo) != n:
        cyclic = [ids[i] for i in range(n) if indeg[i] > 0]
        raise CycleError(f"relation closure is cyclic through {cyclic[:4]}")
    up = [0] * n
    for i in reversed(topo):
        m = 1 << i
        for j in adj[i]:
            m |= up[j]
        up[i] = m
    return Poset(ids, up, name=name)


def up_set(p: Poset, s) -> ElementSet:
    """The upset generated by s: all c with some member below c."""
    s = p.subset(s)
    mask = 0
    for i in _bits(s.mask):
        mask |= p._up[i]
    return ElementSet(p, mask)


def down_set(p: Poset, s) -> ElementSet:
    """The downset cogenerated by s."""
    s = p.subset(s)
    mask = 0
    for i in _bits(s.mask):
        mask |= p._down[i]
    return ElementSet(p, mask)


def upper_bound_mask(p: Poset, mask: int) -> int:
    out = p.full_mask
    for i in _bits(mask):
        out &= p._up[i]
    return out


def mub(p: Poset, s) -> ElementSet:
    """Minimal upper bounds of a nonempty subset."""
    s = p.subset(s)
    if s.mask == 0:
        raise EmptySetError("mub of the empty set")
    ub = upper_bound_mask(p, s.mask)
    return ElementSet(p, p.minimal_of_mask(ub))


def hat(p: Poset, s) -> ElementSet:
    """Union of mub over every nonempty subset of s (the singleton subsets
    put s itself inside the result)."""
    s = p.subset(s)
    k = len(s)
    if k > HAT_SIZE_LIMIT:
        raise TooLargeError(f"hat() guard: |S| = {k} > {HAT_SIZE_LIMIT}")
    out = 0
    members = list(_bits(s.mask))
    for size in range(1, k + 1):
        for combo in itertools.combinations(members, size):
            ub = p.full_mask
            for i in combo:
                ub &= p._up[i]
            out |= p.minimal_of_mask(ub)
    return ElementSet(p, out)


@dataclass(frozen=True)
class PropertyMReport:
    weakly_bounded: bool
    mub_complete: bool
    exhaustive: bool
    max_subset_size: int
    subsets_checked: int

    def as_dict(self):
        return {
            "weakly_bounded": self.weakly_bounded,
            "mub_complete": self.mub_complete,
            "exhaustive": self.exhaustive,
            "max_subset_size": self.max_subset_size,
            "subsets_checked": self.subsets_checked,
        }


def check_property_m(p: Poset, max_subset_size: int | None = None) -> PropertyMReport:
    """Check weak boundedness and mub-completeness by direct enumeration.

    Both hold for every finite poset; the report records that this was
    established by enumeration (exhaustive when every subset size was
    covered, which is the default for posets of at most 15 elements).
    """
    n = len(p)
    if max_subset_size is None:
        max_subset_size = n if n <= 15 else min(3, n)
    max_subset_size = min(max_subset_size, n)
    weakly_bounded = True
    mub_complete = True
    checked = 0
    universe = list(range(n))
    for size in range(1, max_subset_size + 1):
        for combo in itertools.combinations(universe, size):
            checked += 1
            ub = p.full_mask
            for i in combo:
                ub &= p._up[i]
            mubs = p.minimal_of_mask(ub)
            if mubs.bit_count() > n:
                weakly_bounded = False
            for c in _bits(ub):
                if p._down[c] & mubs == 0:
                    mub_complete = False
    return PropertyMReport(
        weakly_bounded=weakly_bounded,
        mub_complete=mub_complete,
        exhaustive=max_subset_size == n,
        max_subset_size=max_subset_size,
        subsets_checked=checked,
    )


def is_interval(p: Poset, i) -> bool:
    """Betweenness closure: a, b in I and a <= c <= b imply c in I."""
    i = p.subset(i)
    if i.mask == 0:
        raise EmptySetError("is_interval of the empty set")
    for c in range(len(p)):
        if i.mask >> c & 1:
            continue
        if (p._down[c] & i.mask) and (p._up[c] & i.mask):
            return False
    return True


def is_connected(p: Poset, s) -> bool:
    """Connectivity of the comparability graph induced on the subset.

    The empty subset counts as not connected.
    """
    s = p.subset(s)
    if s.mask == 0:
        return False
    members = list(_bits(s.mask))
    start = members[0]
    seen = 1 << start
    frontier = [start]
    while frontier:
        a = frontier.pop()
        reach = (p._up[a] | p._down[a]) & s.mask & ~seen
        for b in _bits(reach):
            seen |= 1 << b
            frontier.append(b)
    return seen == s.mask


def grid_id(coord) -> str:
    return "(" + ",".join(str(c) for c in coord) + ")"


def grid_coord(e: str) -> tuple[int, ...]:
    return tuple(int(t) for t in e.strip("()").split(","))


def grid_poset(dims) -> Poset:
    """Product of chains with the componentwise order.

    Element ids are coordinate tuples rendered as "(i,j,...)".
    """
    dims = list(dims)
    if not dims or any(d < 1 for d in dims):
        raise ValidationError("grid dimensions must be positive")
    total = 1
    for d in dims:
        total *= d
    if total > GRID_SIZE_LIMIT:
        raise TooLargeError(f"grid size {total} exceeds {GRID_SIZE_LIMIT}")
    coords = list(itertools.product(*(range(d) for d in dims)))
    ids = [grid_id(c) for c in coords]
    rels = []
    for c in coords:
        for axis in range(len(dims)):
            if c[axis] + 1 < dims[axis]:
                d = list(c)
                d[axis] += 1
                rels.append((grid_id(c), grid_id(tuple(d))))
    p = build_poset(ids, rels, name="grid" + "x".join(str(d) for d in dims))
    return Poset(list(p.elements), list(p._up), name=p.name, grid_shape=tuple(dims))


def chain(n: int) -> Poset:
    """The chain 0 < 1 < ... < n-1."""
    if n < 1:
        raise ValidationError("chain length must be positive")
    ids = [str(i) for i in range(n)]
    rels = [(str(i), str(i + 1)) for i in range(n - 1)]
    return build_poset(ids, rels, name=f"chain{n}")


def as_grid_shape(p: Poset) -> tuple[int, ...] | None:
    """Recognize a grid poset structurally; returns its shape or None."""
    if p.grid_shape is not None:
        return p.grid_shape
    try:
        coords = [grid_coord(e) for e in p.elements]
    except (ValueError, AttributeError):
        return None
    if not coords:
        return None
    arity = len(coords[0])
    if any(len(c) != arity or any(x < 0 for x in c) for c in coords):
        return None
    dims = tuple(max(c[a] for c in coords) + 1 for a in range(arity))
    total = 1
    for d in dims:
        total *= d
    if total != len(p.elements) or len(set(coords)) != len(coords):
        return None
    reference = grid_poset(dims)
    if set(p.covers) != set(reference.covers):
        return None
    return dims
