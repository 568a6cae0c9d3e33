"""Finite posets, meet-semilattices, bounded lattices and their filters.

Elements are dense indices ``0..n-1``; labels are only kept for I/O.
Subsets of a carrier are plain ``int`` bit masks (bit ``i`` set iff element
``i`` is a member).  All structures are immutable once built.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, reduce
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "OrderError", "DuplicateLabel", "AntisymmetryViolation", "NoMeet", "NoJoin",
    "NoTop", "NoBottom", "NotTotal",
    "Poset", "MeetSemilattice", "BoundedLattice", "Filter", "ComplexAlgebra",
    "LatticeProps",
    "bits", "popcount", "to_mask",
    "validate_poset", "poset_from_up", "meet_structure", "lattice_structure",
    "generated_filter", "is_filter", "filter_join", "all_filters",
    "principal_filters", "complex_algebra", "lattice_props",
    "is_L_morphism", "inverse_image_is_lattice_hom",
]


class OrderError(ValueError):
    pass


class DuplicateLabel(OrderError):
    def __init__(self, label):
        super().__init__(f"duplicate label {label!r}")
        self.label = label


class AntisymmetryViolation(OrderError):
    def __init__(self, cycle):
        super().__init__(f"order closure is not antisymmetric: {cycle[0]!r} <= {cycle[1]!r} <= {cycle[0]!r}")
        self.cycle = cycle


class NoMeet(OrderError):
    def __init__(self, i, j, reason):
        super().__init__(f"no meet for ({i}, {j}): {reason}")
        self.i, self.j, self.reason = i, j, reason


class NoJoin(OrderError):
    def __init__(self, i, j, reason):
        super().__init__(f"no join for ({i}, {j}): {reason}")
        self.i, self.j, self.reason = i, j, reason


class NoTop(OrderError):
    pass


class NoBottom(OrderError):
    pass


class NotTotal(OrderError):
    pass


def bits(mask: int) -> list[int]:
    """Indices of the set bits of ``mask``, ascending."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def to_mask(s) -> int:
    """Accept a mask, a Filter or an iterable of indices."""
    if isinstance(s, Filter):
        return s.mask
    if isinstance(s, (int, np.integer)):
        return int(s)
    m = 0
    for i in s:
        m |= 1 << i
    return m


@dataclass(frozen=True)
class Poset:
    """A finite partial order.

    ``up[i]`` is the mask of all ``j`` with ``i <= j``.
    """

    labels: tuple
    up: tuple

    @property
    def n(self) -> int:
        return len(self.up)

    @cached_property
    def down(self) -> tuple:
        d = [0] * self.n
        for i, u in enumerate(self.up):
            for j in bits(u):
                d[j] |= 1 << i
        return tuple(d)

    def leq(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    @cached_property
    def leq_matrix(self) -> np.ndarray:
        m = np.zeros((self.n, self.n), dtype=bool)
        for i, u in enumerate(self.up):
            for j in bits(u):
                m[i, j] = True
        m.flags.writeable = False
        return m

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def upclose(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= self.up[i]
        return out

    def downclose(self, mask: int) -> int:
        out = 0
        dn = self.down
        for i in bits(mask):
            out |= dn[i]
        return out

    def index(self, label) -> int:
        return self.labels.index(label)

    def code(self) -> int:
        """Integer encoding of the order matrix, bit ``i*n+j`` for ``i <= j``."""
        n = self.n
        c = 0
        for i, u in enumerate(self.up):
            c |= u << (i * n)
        return c

    def leq_pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in bits(self.up[i]) if i != j]


def poset_from_up(up: Sequence[int], labels=None) -> Poset:
    """Build a poset from already-closed up-sets (no validation beyond shape)."""
    n = len(up)
    if labels is None:
        labels = tuple(str(i) for i in range(n))
    return Poset(tuple(labels), tuple(int(u) for u in up))


def validate_poset(labels, leq_pairs) -> Poset:
    """Reflexive-transitive closure of ``leq_pairs`` over ``labels``.

    >>> validate_poset(["0", "1"], [("0", "1")]).leq(0, 1)
    True
    """
    labels = tuple(labels)
    seen = set()
    for lab in labels:
        if lab in seen:
            raise DuplicateLabel(lab)
        seen.add(lab)
    idx = {lab: i for i, lab in enumerate(labels)}
    n = len(labels)
    up = [1 << i for i in range(n)]
    for a, b in leq_pairs:
        if a not in idx or b not in idx:
            raise OrderError(f"unknown label in pair ({a!r}, {b!r})")
        up[idx[a]] |= 1 << idx[b]
    # Warshall on bit rows
    for k in range(n):
        for i in range(n):
            if up[i] >> k & 1:
                up[i] |= up[k]
    for i in range(n):
        for j in range(i + 1, n):
            if up[i] >> j & 1 and up[j] >> i & 1:
                raise AntisymmetryViolation((labels[i], labels[j]))
    return Poset(labels, tuple(up))


def _greatest(p: Poset, cand: int):
    """The greatest element of ``cand`` or None."""
    for i in bits(cand):
        if p.down[i] & cand == cand:
            return i
    return None


def _least(p: Poset, cand: int):
    for i in bits(cand):
        if p.up[i] & cand == cand:
            return i
    return None


@dataclass(frozen=True)
class MeetSemilattice:
    poset: Poset
    meet: tuple

    @property
    def n(self) -> int:
        return self.poset.n

    @property
    def labels(self) -> tuple:
        return self.poset.labels

    @property
    def full(self) -> int:
        return self.poset.full

    def leq(self, i, j) -> bool:
        return self.poset.leq(i, j)

    @cached_property
    def _upclose_table(self):
        if self.n > 12:
            return None
        up = self.poset.up
        t = [0] * (1 << self.n)
        for m in range(1, 1 << self.n):
            low = m & -m
            t[m] = t[m ^ low] | up[low.bit_length() - 1]
        return t

    def upclose(self, mask: int) -> int:
        t = self._upclose_table
        return t[mask] if t is not None else self.poset.upclose(mask)

    @cached_property
    def bottom(self):
        """Least element (always exists for a nonempty finite semilattice)."""
        if self.n == 0:
            return None
        return reduce(lambda a, b: self.meet[a][b], range(self.n))

    @cached_property
    def top(self):
        return _greatest(self.poset, self.full)

    def meet_all(self, mask: int):
        """Meet of a nonempty subset."""
        it = bits(mask)
        return reduce(lambda a, b: self.meet[a][b], it)

    def meetset(self, a: int, b: int) -> int:
        """Mask of ``{x & y : x in a, y in b}``."""
        out = 0
        mt = self.meet
        bb = bits(b)
        for i in bits(a):
            row = mt[i]
            for j in bb:
                out |= 1 << row[j]
        return out

    def join2(self, a: int, b: int) -> int:
        """Binary filter join on masks (both assumed filters)."""
        if not a:
            return b
        if not b:
            return a
        return self.upclose(self.meetset(a, b))

    def principal(self, i: int) -> int:
        return self.poset.up[i]


@dataclass(frozen=True)
class BoundedLattice:
    sl: MeetSemilattice
    join: tuple
    top: int
    bottom: int

    @property
    def n(self) -> int:
        return self.sl.n

    @property
    def meet(self) -> tuple:
        return self.sl.meet

    @property
    def poset(self) -> Poset:
        return self.sl.poset

    @property
    def labels(self) -> tuple:
        return self.sl.poset.labels

    def leq(self, i, j) -> bool:
        return self.sl.poset.leq(i, j)


def meet_structure(p: Poset) -> MeetSemilattice:
    """Fill the glb table of ``p``; raise :class:`NoMeet` if some pair lacks one."""
    n = p.n
    meet = [[0] * n for _ in range(n)]
    dn = p.down
    for i in range(n):
        meet[i][i] = i
        for j in range(i + 1, n):
            lower = dn[i] & dn[j]
            if not lower:
                raise NoMeet(p.labels[i], p.labels[j], "no lower bound")
            g = _greatest(p, lower)
            if g is None:
                raise NoMeet(p.labels[i], p.labels[j], "incomparable maximal lower bounds")
            meet[i][j] = meet[j][i] = g
    return MeetSemilattice(p, tuple(tuple(r) for r in meet))


def lattice_structure(p: Poset) -> BoundedLattice:
    if p.n == 0:
        raise NoTop("empty poset")
    sl = meet_structure(p)
    n = p.n
    join = [[0] * n for _ in range(n)]
    for i in range(n):
        join[i][i] = i
        for j in range(i + 1, n):
            upper = p.up[i] & p.up[j]
            if not upper:
                raise NoJoin(p.labels[i], p.labels[j], "no upper bound")
            l = _least(p, upper)
            if l is None:
                raise NoJoin(p.labels[i], p.labels[j], "incomparable minimal upper bounds")
            join[i][j] = join[j][i] = l
    top = _greatest(p, p.full)
    if top is None:
        raise NoTop("no top element")
    bottom = _least(p, p.full)
    if bottom is None:
        raise NoBottom("no bottom element")
    return BoundedLattice(sl, tuple(tuple(r) for r in join), top, bottom)


@dataclass(frozen=True)
class Filter:
    """An up-closed, meet-closed subset of ``carrier`` stored as a bit mask."""

    mask: int
    carrier: MeetSemilattice = field(compare=False, repr=False, hash=False)

    @property
    def members(self) -> list[int]:
        return bits(self.mask)

    def __contains__(self, i) -> bool:
        return bool(self.mask >> i & 1)

    def __len__(self) -> int:
        return popcount(self.mask)

    def __le__(self, other: "Filter") -> bool:
        return self.mask & ~other.mask == 0

    @cached_property
    def generator(self):
        """Least element ``x`` with ``self == up(x)``, or None (also None when empty)."""
        if not self.mask:
            return None
        x = self.carrier.meet_all(self.mask)
        return x if self.carrier.principal(x) == self.mask else None

    @property
    def is_principal(self) -> bool:
        return self.mask == 0 or self.generator is not None

    def labels(self) -> list:
        return [self.carrier.labels[i] for i in self.members]


def generated_filter(sl: MeetSemilattice, seed) -> Filter:
    """Least filter containing ``seed``: alternate meet-closure and up-closure to a fixpoint."""
    m = to_mask(seed)
    while True:
        nxt = sl.upclose(m | sl.meetset(m, m))
        if nxt == m:
            return Filter(m, sl)
        m = nxt


def is_filter(sl: MeetSemilattice, s) -> bool:
    m = to_mask(s)
    if sl.upclose(m) != m:
        return False
    return sl.meetset(m, m) & ~m == 0


def filter_join(sl: MeetSemilattice, fs: Iterable) -> Filter:
    m = 0
    for f in fs:
        m |= to_mask(f)
    return generated_filter(sl, m)


def _all_filter_masks(sl: MeetSemilattice) -> list[int]:
    if sl.n > 20:
        raise OrderError("all_filters is limited to 20 elements")
    return [m for m in range(1 << sl.n) if is_filter(sl, m)]


def all_filters(sl: MeetSemilattice) -> list[Filter]:
    """Every filter of ``sl`` once, ascending by mask (so the empty filter first)."""
    return [Filter(m, sl) for m in _all_filter_masks(sl)]


def principal_filters(sl: MeetSemilattice) -> list[Filter]:
    return [f for f in all_filters(sl) if f.is_principal]


@dataclass(frozen=True)
class ComplexAlgebra:
    """The lattice of (a family of) filters of ``frame``.

    ``filters[k]`` is the filter represented by lattice element ``k``.
    """

    lattice: BoundedLattice
    filters: tuple
    frame: MeetSemilattice

    @cached_property
    def index(self) -> dict:
        return {m: k for k, m in enumerate(self.filters)}

    def element(self, f) -> int:
        return self.index[to_mask(f)]

    def filter(self, k: int) -> Filter:
        return Filter(self.filters[k], self.frame)


def _lattice_from_sets(masks: Sequence[int], meet_op, join_op, labels) -> BoundedLattice:
    idx = {m: k for k, m in enumerate(masks)}
    up = []
    for a in masks:
        u = 0
        for k, b in enumerate(masks):
            if a & ~b == 0:
                u |= 1 << k
        up.append(u)
    poset = Poset(tuple(labels), tuple(up))
    meet = tuple(tuple(idx[meet_op(a, b)] for b in masks) for a in masks)
    join = tuple(tuple(idx[join_op(a, b)] for b in masks) for a in masks)
    top = idx[max(masks, key=popcount)]
    bottom = idx[min(masks, key=popcount)]
    return BoundedLattice(MeetSemilattice(poset, meet), join, top, bottom)


def complex_algebra(sl: MeetSemilattice, masks: Sequence[int] | None = None) -> ComplexAlgebra:
    """Lattice of all filters with meet = intersection, join = filter join.

    ``masks`` restricts to a sub-family (e.g. principal filters); it must be
    closed under both operations.
    """
    if masks is None:
        masks = _all_filter_masks(sl)
    masks = tuple(sorted(masks))
    labels = ["{" + ",".join(str(sl.labels[i]) for i in bits(m)) + "}" for m in masks]
    lat = _lattice_from_sets(masks, lambda a, b: a & b, sl.join2, labels)
    return ComplexAlgebra(lat, masks, sl)


@dataclass(frozen=True)
class LatticeProps:
    distributive: bool
    modular: bool


def lattice_props(l: BoundedLattice) -> LatticeProps:
    n = l.n
    mt, jn = l.meet, l.join
    dist = all(mt[x][jn[y][z]] == jn[mt[x][y]][mt[x][z]]
               for x in range(n) for y in range(n) for z in range(n))
    mod = all(jn[x][mt[y][z]] == mt[jn[x][y]][z]
              for x in range(n) for z in range(n) if l.leq(x, z) for y in range(n))
    return LatticeProps(dist, mod)


def _check_total(f, X: MeetSemilattice, Y: MeetSemilattice):
    if len(f) != X.n or any(not (0 <= f[i] < Y.n) for i in range(X.n)):
        raise NotTotal("map must send every element of the source into the target")


def is_L_morphism(f: Sequence[int], X: MeetSemilattice, Y: MeetSemilattice) -> bool:
    """Meet-preserving map with the back condition on split meets below an image."""
    _check_total(f, X, Y)
    n = X.n
    for i in range(n):
        for j in range(n):
            if f[X.meet[i][j]] != Y.meet[f[i]][f[j]]:
                return False
    for x in range(n):
        fx = f[x]
        for y2 in range(Y.n):
            for z2 in range(Y.n):
                if not Y.leq(Y.meet[y2][z2], fx):
                    continue
                if not any(Y.leq(y2, f[y]) and Y.leq(z2, f[z]) and X.leq(X.meet[y][z], x)
                           for y in range(n) for z in range(n)):
                    return False
    return True


def inverse_image_is_lattice_hom(f: Sequence[int], X: MeetSemilattice, Y: MeetSemilattice) -> bool:
    """Does preimage along ``f`` map filters of Y to filters of X, preserving meets and joins?"""
    _check_total(f, X, Y)

    def pre(m):
        out = 0
        for i in range(X.n):
            if m >> f[i] & 1:
                out |= 1 << i
        return out

    fy = _all_filter_masks(Y)
    for a in fy:
        if not is_filter(X, pre(a)):
            return False
    if pre(Y.full) != X.full or pre(0) != 0:
        return False
    for a, b in combinations(fy, 2):
        if pre(a & b) != pre(a) & pre(b):
            return False
        if pre(Y.join2(a, b)) != X.join2(pre(a), pre(b)):
            return False
    return True
