"""Structural invariants, classical and relative to a prime partition sigma."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Hashable, Iterable

import numpy as np

from .lattice import Subgroup, subgroups_of, whole
from .perm import PermGroup
from .table import GroupTable

Groupish = PermGroup | Subgroup


def prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def is_prime(n: int) -> bool:
    return n > 1 and prime_factors(n) == [n]


def part(n: int, primes: Iterable[int]) -> int:
    """The ``primes``-part of ``n``."""
    out = 1
    for p in primes:
        while n % p == 0:
            n //= p
            out *= p
    return out


@dataclass(frozen=True)
class PrimePartition:
    """A partition of all primes.

    ``blocks`` are the explicit blocks. Unlisted primes fall into one shared
    rest block when ``rest`` is set, or each into its own singleton block when
    ``singletons`` is set. With neither, every prime met must be listed.
    """

    blocks: tuple[frozenset[int], ...] = ()
    rest: bool = True
    singletons: bool = False

    def __post_init__(self):
        seen: set[int] = set()
        for b in self.blocks:
            if not b:
                raise ValueError("empty block in partition")
            for p in b:
                if not is_prime(p):
                    raise ValueError(f"{p} is not prime")
            if seen & b:
                raise ValueError(f"blocks overlap on {sorted(seen & b)}")
            seen |= b
        if self.rest and self.singletons:
            raise ValueError("rest block and singleton rest are exclusive")

    @classmethod
    def finest(cls) -> "PrimePartition":
        return cls((), rest=False, singletons=True)

    @classmethod
    def one_block(cls) -> "PrimePartition":
        return cls((), rest=True)

    @classmethod
    def pi_split(cls, primes: Iterable[int]) -> "PrimePartition":
        """``{pi, pi'}``."""
        return cls((frozenset(primes),), rest=True)

    @classmethod
    def parse(cls, text: str) -> "PrimePartition":
        text = text.strip()
        if text == "finest":
            return cls.finest()
        if text == "one-block":
            return cls.one_block()
        blocks = []
        rest = False
        for chunk in text.split("|"):
            chunk = chunk.strip()
            if chunk == "*":
                if rest:
                    raise ValueError("rest block given twice")
                rest = True
                continue
            try:
                primes = frozenset(int(x) for x in chunk.split(","))
            except ValueError:
                raise ValueError(f"bad partition block {chunk!r}") from None
            blocks.append(primes)
        return cls(tuple(blocks), rest=rest)

    def __str__(self) -> str:
        if not self.blocks and self.singletons:
            return "finest"
        if not self.blocks and self.rest:
            return "one-block"
        parts = [",".join(map(str, sorted(b))) for b in self.blocks]
        if self.rest:
            parts.append("*")
        elif self.singletons:
            parts.append("finest")
        return "|".join(parts)

    @property
    def is_finest(self) -> bool:
        return self.singletons and all(len(b) == 1 for b in self.blocks)

    def block_of(self, p: int) -> Hashable:
        for i, b in enumerate(self.blocks):
            if p in b:
                return i
        if self.rest:
            return "*"
        if self.singletons:
            return ("p", p)
        raise ValueError(f"prime {p} is in no block of {self}")

    def block_primes(self, key: Hashable, primes: Iterable[int]) -> frozenset[int]:
        return frozenset(p for p in primes if self.block_of(p) == key)

    def restrict(self, primes: Iterable[int]) -> list[frozenset[int]]:
        """Nonempty blocks met by ``primes``, ordered by smallest prime."""
        groups: dict[Hashable, set[int]] = {}
        for p in sorted(set(primes)):
            groups.setdefault(self.block_of(p), set()).add(p)
        return [frozenset(v) for v in groups.values()]

    def same_block(self, primes: Iterable[int]) -> bool:
        return len({self.block_of(p) for p in primes}) <= 1


def partition_compare(sigma0: PrimePartition, sigma: PrimePartition, primes: Iterable[int]) -> bool:
    """``sigma0 <= sigma`` restricted to ``primes``."""
    return all(sigma.same_block(b) for b in sigma0.restrict(primes))


@dataclass(frozen=True)
class ChiefFactor:
    order: int
    primes: tuple[int, ...]


@dataclass(frozen=True)
class ChiefSeries:
    members: tuple[Subgroup, ...]  # 1 = N_0 < ... < N_k = G

    @property
    def factors(self) -> list[ChiefFactor]:
        out = []
        for a, b in zip(self.members, self.members[1:]):
            k = b.order // a.order
            out.append(ChiefFactor(k, tuple(prime_factors(k))))
        return out


def pi(G: Groupish) -> list[int]:
    return prime_factors(whole(G).order)


# elementwise tests -----------------------------------------------------------


def orders_mod(t: GroupTable, y: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Members of ``Y`` and the order of each modulo the normal subgroup ``N``."""
    iy = t.members(y)
    in_n = t.flags(n)
    ordm = np.zeros(iy.size, dtype=np.int64)
    cur = iy.copy()
    k = 1
    while True:
        hit = in_n[cur] & (ordm == 0)
        ordm[hit] = k
        if (ordm > 0).all():
            return iy, ordm
        cur = t.mul[cur, iy]
        k += 1


def quotient_sigma_nilpotent(t: GroupTable, y: int, n: int, sigma: PrimePartition) -> bool:
    """Whether ``Y/N`` is sigma-nilpotent.

    For each block the elements of sigma_i-order modulo N must form a subgroup,
    and the indices of N in these subgroups must multiply to ``|Y:N|``.
    """
    index = y.bit_count() // n.bit_count()
    if index == 1:
        return True
    iy, ordm = orders_mod(t, y, n)
    total = 1
    by_order = {k: prime_factors(int(k)) for k in np.unique(ordm)}
    for block in sigma.restrict(prime_factors(index)):
        ok = np.array([set(by_order[int(k)]) <= block for k in ordm])
        members = t.mask(iy[ok])
        if not t.is_closed(members):
            return False
        total *= members.bit_count() // n.bit_count()
    return total == index


def sigma_elements(G: Groupish, sigma: PrimePartition, block: frozenset[int]) -> Subgroup | None:
    """The set of elements whose order involves only ``block``, if it is a subgroup."""
    G = whole(G)
    t = G.table
    iy = t.members(G.mask)
    ok = np.array([set(prime_factors(int(t.orders[x]))) <= block for x in iy])
    m = t.mask(iy[ok])
    return G.sub(m) if t.is_closed(m) else None


# predicates ------------------------------------------------------------------


def is_sigma_primary(G: Groupish, sigma: PrimePartition) -> bool:
    return sigma.same_block(pi(G))


def is_sigma_nilpotent(G: Groupish, sigma: PrimePartition) -> bool:
    G = whole(G)
    return quotient_sigma_nilpotent(G.table, G.mask, 1, sigma)


def lower_central_series(G: Groupish) -> list[Subgroup]:
    G = whole(G)
    t = G.table
    key = ("lcs", G.mask)
    series = t.cache.get(key)
    if series is None:
        series = [G.mask]
        while True:
            nxt = t.commutator(series[-1], G.mask)
            if nxt == series[-1]:
                break
            series.append(nxt)
        t.cache[key] = series
    return [G.sub(m) for m in series]


def derived_series(G: Groupish) -> list[Subgroup]:
    G = whole(G)
    t = G.table
    key = ("derived", G.mask)
    series = t.cache.get(key)
    if series is None:
        series = [G.mask]
        while True:
            nxt = t.commutator(series[-1], series[-1])
            if nxt == series[-1]:
                break
            series.append(nxt)
        t.cache[key] = series
    return [G.sub(m) for m in series]


def is_nilpotent(G: Groupish) -> bool:
    return lower_central_series(G)[-1].is_trivial


def is_soluble(G: Groupish) -> bool:
    return derived_series(G)[-1].is_trivial


def is_abelian(G: Groupish) -> bool:
    G = whole(G)
    t = G.table
    gens = np.array(t.generators(G.mask), dtype=np.int64)
    if gens.size < 2:
        return True
    block = t.mul[np.ix_(gens, gens)]
    return bool((block == block.T).all())


def derived_subgroup(G: Groupish) -> Subgroup:
    G = whole(G)
    return G.sub(G.table.commutator(G.mask, G.mask))


def center(G: Groupish) -> Subgroup:
    G = whole(G)
    t = G.table
    iy = t.members(G.mask)
    gens = np.array(t.generators(G.mask), dtype=np.int64)
    if gens.size == 0:
        return G
    ok = (t.mul[np.ix_(iy, gens)] == t.mul[np.ix_(gens, iy)].T).all(axis=1)
    return G.sub(t.mask(iy[ok]))


def _join_all(G: Subgroup, masks: Iterable[int]) -> Subgroup:
    t = G.table
    acc = 1
    for m in masks:
        if m & ~acc:
            acc = t.closure(t.generators(m), start=acc)
    return G.sub(acc)


def normal_subgroup_masks(G: Groupish) -> list[int]:
    G = whole(G)
    return G.table.normal_subgroups(G.mask)


def fitting(G: Groupish) -> Subgroup:
    G = whole(G)
    key = ("fitting", G.mask)
    hit = G.table.cache.get(key)
    if hit is None:
        F = _join_all(G, (m for m in normal_subgroup_masks(G) if is_nilpotent(G.sub(m))))
        assert is_nilpotent(F), "Fitting subgroup must be nilpotent"
        hit = G.table.cache[key] = F.mask
    return G.sub(hit)


def sigma_fitting(G: Groupish, sigma: PrimePartition) -> Subgroup:
    G = whole(G)
    key = ("sigma_fitting", G.mask, sigma)
    hit = G.table.cache.get(key)
    if hit is None:
        F = _join_all(G, (m for m in normal_subgroup_masks(G)
                          if is_sigma_nilpotent(G.sub(m), sigma)))
        hit = G.table.cache[key] = F.mask
    return G.sub(hit)


def o_sigma(G: Groupish, sigma: PrimePartition, block: Hashable | frozenset[int]) -> Subgroup:
    """``O_{sigma_i}(G)``. ``block`` is a key from ``sigma.block_of`` or a set of primes in it."""
    G = whole(G)
    if isinstance(block, (set, frozenset)):
        keys = {sigma.block_of(p) for p in block}
        if len(keys) != 1:
            raise ValueError("primes span several blocks")
        block = keys.pop()
    return _join_all(G, (m for m in normal_subgroup_masks(G)
                         if all(sigma.block_of(p) == block for p in prime_factors(m.bit_count()))))


def chief_series(G: Groupish, prefer_last: bool = False) -> ChiefSeries:
    """A chief series; ``prefer_last`` flips tie-breaking among minimal choices."""
    G = whole(G)
    normals = normal_subgroup_masks(G)
    cur = 1
    members = [G.sub(1)]
    while cur != G.mask:
        above = [m for m in normals if m != cur and cur & ~m == 0]
        minimal = [m for m in above if not any(o != m and o & ~m == 0 for o in above)]
        cur = minimal[-1] if prefer_last else minimal[0]
        members.append(G.sub(cur))
    return ChiefSeries(tuple(members))


def is_sigma_soluble(G: Groupish, sigma: PrimePartition) -> bool:
    return all(sigma.same_block(f.primes) for f in chief_series(G).factors)


def is_sigma_metanilpotent(G: Groupish, sigma: PrimePartition) -> bool:
    G = whole(G)
    return quotient_sigma_nilpotent(G.table, G.mask, sigma_fitting(G, sigma).mask, sigma)


def sylow(G: Groupish, p: int) -> Subgroup:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    found = hall(G, {p})
    assert found is not None, "Sylow subgroups always exist"
    return found


def hall(G: Groupish, primes: Iterable[int]) -> Subgroup | None:
    """A subgroup whose order is the ``primes``-part of ``|G|``, or ``None``."""
    G = whole(G)
    target = part(G.order, primes)
    for H in subgroups_of(G):
        if H.order == target:
            return H
    return None


def is_sigma_group(G: Groupish, sigma: PrimePartition, block: Hashable) -> bool:
    return all(sigma.block_of(p) == block for p in pi(G))


def meet_all(G: Subgroup, masks: Iterable[int]) -> Subgroup:
    return G.sub(reduce(lambda a, b: a & b, masks, G.mask))
