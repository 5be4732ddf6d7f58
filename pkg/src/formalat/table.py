"""Cayley-table view of a small group.

Subgroups and other element sets are Python ``int`` bitmasks over element
indices, so inclusion, intersection and equality are integer operations.
Element 0 is always the identity.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .perm import CapExceeded, Perm

TABLE_CAP = 5000


class GroupTable:
    def __init__(self, elems: Sequence[Perm]):
        n = len(elems)
        if n > TABLE_CAP:
            raise CapExceeded("multiplication table", n, TABLE_CAP)
        if not elems[0].is_identity:
            raise ValueError("element 0 must be the identity")
        self.elems: tuple[Perm, ...] = tuple(elems)
        self.n = n
        self.index = {g: i for i, g in enumerate(elems)}
        arr = np.array([g.array for g in elems], dtype=np.int32).reshape(n, -1)
        keys = {row.tobytes(): i for i, row in enumerate(arr)}
        mul = np.empty((n, n), dtype=np.int32)
        for j in range(n):
            # row i of prod is elems[i] * elems[j]
            prod = arr[j][arr]
            mul[:, j] = [keys[r.tobytes()] for r in prod]
        self.mul = mul
        self.inv = np.argmin(mul, axis=1).astype(np.int32)
        self.full = (1 << n) - 1
        self._nbytes = (n + 7) // 8
        self.cache: dict = {}

    # masks ----------------------------------------------------------------

    def mask(self, idx: Iterable[int]) -> int:
        flags = np.zeros(self._nbytes * 8, dtype=bool)
        flags[np.fromiter(idx, dtype=np.int64)] = True
        return int.from_bytes(np.packbits(flags, bitorder="little").tobytes(), "little")

    def mask_from_flags(self, flags: np.ndarray) -> int:
        if len(flags) < self._nbytes * 8:
            flags = np.concatenate([flags, np.zeros(self._nbytes * 8 - len(flags), dtype=bool)])
        return int.from_bytes(np.packbits(flags, bitorder="little").tobytes(), "little")

    def flags(self, mask: int) -> np.ndarray:
        raw = np.frombuffer(mask.to_bytes(self._nbytes, "little"), dtype=np.uint8)
        return np.unpackbits(raw, bitorder="little")[: self.n].astype(bool)

    def members(self, mask: int) -> np.ndarray:
        return np.flatnonzero(self.flags(mask))

    def perms(self, mask: int) -> list[Perm]:
        return [self.elems[i] for i in self.members(mask)]

    def mask_of_perms(self, perms: Iterable[Perm]) -> int:
        return self.mask(self.index[p] for p in perms)

    # elementwise data -----------------------------------------------------

    @cached_property
    def orders(self) -> np.ndarray:
        order = np.zeros(self.n, dtype=np.int64)
        cur = np.arange(self.n)
        k = 1
        while (order == 0).any():
            order[(cur == 0) & (order == 0)] = k
            cur = self.mul[cur, np.arange(self.n)]
            k += 1
        return order

    @cached_property
    def conj(self) -> np.ndarray:
        """``conj[g, x]`` is the index of ``g^-1 x g``."""
        left = self.mul[self.inv]  # left[g, x] = g^-1 x
        return self.mul[left, np.arange(self.n)[:, None]]

    # closures ---------------------------------------------------------------

    def closure(self, gens: Iterable[int], start: int = 1) -> int:
        """Subgroup generated by ``gens`` together with the subgroup ``start``."""
        gens = [int(g) for g in gens]
        if start != 1:
            gens += self.generators(start)
        gens = np.unique(np.array(gens, dtype=np.int64))
        gens = gens[gens != 0]
        if gens.size == 0:
            return 1
        inset = np.zeros(self.n, dtype=bool)
        inset[0] = True
        frontier = np.zeros(1, dtype=np.int64)
        while frontier.size:
            nxt = np.unique(self.mul[np.ix_(frontier, gens)])
            nxt = nxt[~inset[nxt]]
            inset[nxt] = True
            frontier = nxt
        return self.mask_from_flags(inset)

    def generate(self, mask: int) -> int:
        """Subgroup generated by an arbitrary element set."""
        return self.closure(self.members(mask))

    def generators(self, mask: int) -> tuple[int, ...]:
        """A small generating set of the subgroup ``mask`` (greedy, by index)."""
        key = ("gens", mask)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        got = 1
        gens: list[int] = []
        for x in self.members(mask):
            if not (got >> int(x)) & 1:
                gens.append(int(x))
                got = self.closure(gens)
                if got == mask:
                    break
        out = tuple(gens)
        self.cache[key] = out
        return out

    def conjugate_mask(self, mask: int, g: int) -> int:
        return self.mask(self.conj[g, self.members(mask)])

    def is_closed(self, mask: int) -> bool:
        idx = self.members(mask)
        if idx.size == 0 or not mask & 1:
            return False
        flags = self.flags(mask)
        return bool(flags[self.mul[np.ix_(idx, idx)]].all())

    def product_set(self, a: int, b: int) -> int:
        ia, ib = self.members(a), self.members(b)
        return self.mask(np.unique(self.mul[np.ix_(ia, ib)]))

    def commutator(self, a: int, b: int) -> int:
        """``[A, B]``: subgroup generated by all ``x^-1 y^-1 x y``."""
        ia, ib = self.members(a), self.members(b)
        inv, mul = self.inv, self.mul
        left = mul[np.ix_(inv[ia], inv[ib])]
        xy = mul[np.ix_(ia, ib)]
        comm = mul[left, xy]
        return self.closure(comm.ravel())

    # subgroup relations ---------------------------------------------------

    def normalizer(self, x: int, within: int | None = None) -> int:
        """``N_W(X)``; ``W`` defaults to the whole group."""
        key = ("normalizer", x)
        hit = self.cache.get(key)
        if hit is None:
            inx = self.flags(x)
            hit = self.mask_from_flags(inx[self.conj[:, self.members(x)]].all(axis=1))
            self.cache[key] = hit
        return hit if within is None else hit & within

    def is_normal(self, x: int, y: int) -> bool:
        """Whether ``X`` is normal in ``Y`` (``X <= Y`` assumed)."""
        return y & ~self.normalizer(x) == 0

    def core(self, x: int, y: int) -> int:
        """``X_Y``: the largest normal subgroup of ``Y`` inside ``X``."""
        inx = self.flags(x)
        ix = self.members(x)
        keep = inx[self.conj[np.ix_(self.members(y), ix)]].all(axis=0)
        return self.mask(ix[keep])

    def normal_closure(self, x: int, y: int) -> int:
        """``X^Y``: the smallest normal subgroup of ``Y`` containing ``X``."""
        conjugates = self.conj[np.ix_(self.members(y), np.array(self.generators(x) or (0,)))]
        return self.closure(conjugates.ravel())

    def conjugacy_classes(self, y: int) -> list[int]:
        """Conjugacy classes of ``Y`` as masks, ordered by smallest member."""
        iy = self.members(y)
        cls = self.conj[np.ix_(iy, iy)]
        seen = np.zeros(self.n, dtype=bool)
        out = []
        for col, x in enumerate(iy):
            if seen[x]:
                continue
            members = np.unique(cls[:, col])
            seen[members] = True
            out.append(self.mask(members))
        return out

    def normal_subgroups(self, y: int) -> list[int]:
        """All normal subgroups of ``Y``, sorted by (order, mask)."""
        key = ("normals", y)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        lat = self.cache.get("lattice")
        if lat is not None and y in lat.by_mask:
            found = [m for m in lat.contained_masks(y) if self.is_normal(m, y)]
        else:
            blocks = []
            for c in self.conjugacy_classes(y):
                m = self.generate(c)
                if m not in blocks:
                    blocks.append(m)
            known = {1}
            todo = [1]
            while todo:
                nm = todo.pop()
                for b in blocks:
                    if b & ~nm == 0:
                        continue
                    j = self.closure(self.generators(b), start=nm)
                    if j not in known:
                        known.add(j)
                        todo.append(j)
            found = list(known)
        found.sort(key=lambda m: (m.bit_count(), m))
        self.cache[key] = found
        return found
