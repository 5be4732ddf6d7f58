"""Subgroup lattices of small permutation groups.

Every subgroup is stored by its full element set (a bitmask over the parent's
Cayley table). Enumeration works bottom-up: starting from the trivial group,
each known subgroup is joined with every cyclic subgroup until nothing new
appears. Only one representative per conjugacy class is expanded; its
conjugates are added directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .perm import CapExceeded, Perm, PermGroup
from .table import GroupTable

DEFAULT_LATTICE_CAP = 50000


@dataclass(frozen=True, eq=False)
class Subgroup:
    """A subgroup of a parent group, held as an element mask of the parent's table."""

    table: GroupTable
    mask: int

    @property
    def order(self) -> int:
        return self.mask.bit_count()

    @property
    def index(self) -> int | None:
        lat = self.table.cache.get("lattice")
        if lat is None:
            return None
        return lat.by_mask.get(self.mask)

    def elements(self) -> list[Perm]:
        return self.table.perms(self.mask)

    def __contains__(self, g: Perm) -> bool:
        i = self.table.index.get(g)
        return i is not None and bool((self.mask >> i) & 1)

    def __le__(self, other: "Subgroup") -> bool:
        return self.mask & ~other.mask == 0

    def __lt__(self, other: "Subgroup") -> bool:
        return self.mask != other.mask and self <= other

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, Subgroup) and other.table is self.table
                and other.mask == self.mask)

    def __hash__(self) -> int:
        return hash(self.mask)

    def sub(self, mask: int) -> "Subgroup":
        return Subgroup(self.table, mask)

    @property
    def is_trivial(self) -> bool:
        return self.mask == 1

    def generators(self) -> list[Perm]:
        return [self.table.elems[i] for i in self.table.generators(self.mask)]

    def as_group(self, name: str | None = None) -> PermGroup:
        """Standalone permutation group on the parent's points."""
        gens = self.generators()
        return PermGroup(self.table.elems[0].degree, gens, name)

    def regular_group(self, name: str | None = None) -> PermGroup:
        """Standalone copy acting on its own elements by right multiplication."""
        idx = [int(i) for i in self.table.members(self.mask)]
        pos = {x: k for k, x in enumerate(idx)}
        gens = []
        for g in self.table.generators(self.mask):
            gens.append(Perm([pos[int(self.table.mul[x, g])] for x in idx], zero_based=True))
        return PermGroup(len(idx), gens, name)

    def __repr__(self) -> str:
        i = self.index
        tag = f"#{i}" if i is not None else "?"
        return f"<Subgroup {tag} order={self.order}>"


def whole(G: PermGroup | Subgroup) -> Subgroup:
    if isinstance(G, Subgroup):
        return G
    return Subgroup(G.table, G.table.full)


def trivial(G: PermGroup | Subgroup) -> Subgroup:
    return Subgroup(whole(G).table, 1)


def subgroup_from_gens(G: PermGroup | Subgroup, gens: list[Perm]) -> Subgroup:
    t = whole(G).table
    missing = [g for g in gens if g not in t.index]
    if missing:
        raise ValueError(f"not in the group: {', '.join(map(str, missing))}")
    return Subgroup(t, t.closure(t.index[g] for g in gens))


@dataclass(frozen=True)
class MaximalChain:
    members: tuple[Subgroup, ...]  # M_0 = G > M_1 > ... > M_n

    @property
    def length(self) -> int:
        return len(self.members) - 1


class SubgroupLattice:
    def __init__(self, table: GroupTable, masks: list[int]):
        self.table = table
        masks = sorted(masks, key=lambda m: (m.bit_count(), m))
        self.masks = masks
        self.by_mask = {m: i for i, m in enumerate(masks)}
        self.subgroups = [Subgroup(table, m) for m in masks]
        self._bits = np.array([table.flags(m) for m in masks], dtype=np.float32)
        self._below: dict[int, list[int]] = {}
        self._maximal: dict[int, list[int]] = {}

    def __len__(self) -> int:
        return len(self.masks)

    def __iter__(self) -> Iterator[Subgroup]:
        return iter(self.subgroups)

    def __getitem__(self, i: int) -> Subgroup:
        return self.subgroups[i]

    @property
    def top(self) -> Subgroup:
        return self.subgroups[-1]

    @property
    def bottom(self) -> Subgroup:
        return self.subgroups[0]

    def find(self, mask: int) -> Subgroup:
        if mask not in self.by_mask:
            raise KeyError("element set is not a subgroup in this lattice")
        return self.subgroups[self.by_mask[mask]]

    def below(self, i: int) -> list[int]:
        """Indices of all subgroups contained in subgroup ``i`` (itself included)."""
        hit = self._below.get(i)
        if hit is None:
            outside = 1.0 - self._bits[i]
            hit = [int(j) for j in np.flatnonzero(self._bits @ outside == 0)]
            self._below[i] = hit
        return hit

    def contained_masks(self, mask: int) -> list[int]:
        return [self.masks[j] for j in self.below(self.by_mask[mask])]

    def maximal_in(self, i: int) -> list[int]:
        """Indices of the maximal subgroups of subgroup ``i``."""
        hit = self._maximal.get(i)
        if hit is None:
            hit = []
            found: list[int] = []
            for j in sorted(self.below(i), key=lambda j: -self.masks[j].bit_count()):
                if j == i:
                    continue
                m = self.masks[j]
                if any(m & ~f == 0 for f in found):
                    continue
                found.append(m)
                hit.append(j)
            hit.sort()
            self._maximal[i] = hit
        return hit

    def is_normal(self, a: Subgroup, b: Subgroup) -> bool:
        return self.table.is_normal(a.mask, b.mask)


def _cyclic_masks(table: GroupTable) -> list[int]:
    n = table.n
    flags = np.zeros((n, n), dtype=bool)
    cur = np.arange(n)
    rows = np.arange(n)
    flags[rows, 0] = True
    for _ in range(int(table.orders.max())):
        cur = table.mul[cur, rows]
        flags[rows, cur] = True
    seen = set()
    out = []
    for r in flags:
        m = table.mask_from_flags(r)
        if m not in seen:
            seen.add(m)
            out.append(m)
    return sorted(out, key=lambda m: (m.bit_count(), m))


def _conjugates(table: GroupTable, mask: int) -> set[int]:
    idx = table.members(mask)
    rows = table.conj[:, idx]
    flags = np.zeros((table.n, table._nbytes * 8), dtype=bool)
    flags[np.arange(table.n)[:, None], rows] = True
    packed = np.packbits(flags, axis=1, bitorder="little")
    return {int.from_bytes(r.tobytes(), "little") for r in np.unique(packed, axis=0)}


def all_subgroups(G: PermGroup | GroupTable, cap: int = DEFAULT_LATTICE_CAP) -> SubgroupLattice:
    table = G if isinstance(G, GroupTable) else G.table
    lat = table.cache.get("lattice")
    if lat is not None:
        return lat
    cyclic = _cyclic_masks(table)
    known: set[int] = set()
    reps = [1]
    known.add(1)
    for h in reps:
        for c in cyclic:
            if c & ~h == 0:
                continue
            k = table.closure(table.generators(c), start=h)
            if k in known:
                continue
            cls = _conjugates(table, k)
            known |= cls
            reps.append(k)
            if len(known) > cap:
                raise CapExceeded(
                    f"subgroup lattice (partial: {len(known)} subgroups in "
                    f"{len(reps)} classes found)", len(known), cap)
    lat = SubgroupLattice(table, list(known))
    table.cache["lattice"] = lat
    return lat


def lattice_of(x: PermGroup | Subgroup) -> SubgroupLattice:
    return all_subgroups(whole(x).table)


def maximal_subgroups(G: PermGroup | Subgroup) -> list[Subgroup]:
    H = whole(G)
    lat = lattice_of(H)
    return [lat[j] for j in lat.maximal_in(lat.by_mask[H.mask])]


def subgroups_of(H: PermGroup | Subgroup) -> list[Subgroup]:
    H = whole(H)
    lat = lattice_of(H)
    return [lat[j] for j in lat.below(lat.by_mask[H.mask])]


def maximal_chains(G: PermGroup | Subgroup, n: int) -> list[MaximalChain]:
    if n < 1:
        raise ValueError("chain length must be at least 1")
    H = whole(G)
    lat = lattice_of(H)
    out: list[MaximalChain] = []

    def walk(path: list[int]) -> None:
        if len(path) == n + 1:
            out.append(MaximalChain(tuple(lat[j] for j in path)))
            return
        for j in lat.maximal_in(path[-1]):
            path.append(j)
            walk(path)
            path.pop()

    walk([lat.by_mask[H.mask]])
    return out


def core(G: PermGroup | Subgroup, H: Subgroup) -> Subgroup:
    G = whole(G)
    return H.sub(G.table.core(H.mask, G.mask))


def normal_closure(G: PermGroup | Subgroup, A: Subgroup) -> Subgroup:
    G = whole(G)
    return A.sub(G.table.normal_closure(A.mask, G.mask))


def join(G: PermGroup | Subgroup, A: Subgroup, B: Subgroup) -> Subgroup:
    t = whole(G).table
    if A <= B:
        return B
    if B <= A:
        return A
    key = ("join", A.mask, B.mask)
    hit = t.cache.get(key)
    if hit is None:
        hit = t.closure(t.generators(B.mask), start=A.mask)
        t.cache[key] = hit
    return A.sub(hit)


def meet(G: PermGroup | Subgroup, A: Subgroup, B: Subgroup) -> Subgroup:
    return A.sub(A.mask & B.mask)


def is_normal(A: Subgroup, G: PermGroup | Subgroup) -> bool:
    G = whole(G)
    return G.table.is_normal(A.mask, G.mask)


def normal_subgroups(G: PermGroup | Subgroup) -> list[Subgroup]:
    G = whole(G)
    return [G.sub(m) for m in G.table.normal_subgroups(G.mask)]


def frattini(G: PermGroup | Subgroup) -> Subgroup:
    G = whole(G)
    m = G.mask
    for M in maximal_subgroups(G):
        m &= M.mask
    return G.sub(m)


def conjugates(G: PermGroup | Subgroup, H: Subgroup) -> list[Subgroup]:
    G = whole(G)
    t = G.table
    found = {t.conjugate_mask(H.mask, int(g)) for g in t.members(G.mask)}
    return [H.sub(m) for m in sorted(found, key=lambda m: (m.bit_count(), m))]


@dataclass(frozen=True, eq=False)
class QuotientHandle:
    """``G/N`` acting on the right cosets of ``N``."""

    parent: Subgroup
    kernel: Subgroup
    quotient: PermGroup
    images: dict[int, int]  # parent element index -> quotient element index

    def project(self, g: Perm) -> Perm:
        i = self.parent.table.index[g]
        if not (self.parent.mask >> i) & 1:
            raise ValueError(f"{g} is not in the parent group")
        return self.quotient.table.elems[self.images[i]]

    def image(self, H: Subgroup) -> Subgroup:
        qt = self.quotient.table
        return Subgroup(qt, qt.mask(self.images[int(i)] for i in self.parent.table.members(H.mask)))

    def preimage(self, Q: Subgroup) -> Subgroup:
        t = self.parent.table
        keep = [i for i, q in self.images.items() if (Q.mask >> q) & 1]
        return self.parent.sub(t.mask(keep))


def quotient(G: PermGroup | Subgroup, N: Subgroup) -> QuotientHandle:
    G = whole(G)
    t = G.table
    if not (N <= G and t.is_normal(N.mask, G.mask)):
        raise ValueError("kernel must be a normal subgroup")
    members = t.members(G.mask)
    in_n = t.members(N.mask)
    label: dict[int, int] = {}
    reps: list[int] = []
    for g in members:
        g = int(g)
        if g in label:
            continue
        coset = t.mul[in_n, g]
        for x in coset:
            label[int(x)] = len(reps)
        reps.append(g)
    k = len(reps)

    def action(x: int) -> Perm:
        return Perm([label[int(t.mul[r, x])] for r in reps], zero_based=True)

    gens = [action(g) for g in t.generators(G.mask)]
    Q = PermGroup(k, gens)
    qt = Q.table
    images = {int(x): qt.index[action(int(x))] for x in members}
    return QuotientHandle(G, N, Q, images)
