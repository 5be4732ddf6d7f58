"""Subnormality, K-F-subnormality and the K-lattice test.

A subgroup ``A`` is K-F-subnormal in ``G`` when a chain ``A = A_0 <= ... <= A_n = G``
exists where each step is normal or has ``A_i / core(A_{i-1}) in F``. Since
``Y/K in F`` exactly when ``Y^F <= K``, and ``Y^F`` is normal in ``Y``, the
quotient condition reduces to ``Y^F <= X``.

All K-F-subnormal subgroups of a target are found in one backward pass over
the target's interval in the lattice, largest subgroups first, keeping for
each subgroup the first (lowest-index) larger subgroup it steps into.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from . import formations as fm
from .formations import FormationSpec
from .invariants import PrimePartition, prime_factors
from .lattice import Subgroup, join, lattice_of, whole
from .perm import PermGroup


class Step(enum.Enum):
    NORMAL_STEP = "NORMAL"
    F_QUOTIENT_STEP = "F-QUOTIENT"


class Mode(enum.Enum):
    K = "K"  # normal or F-quotient
    F_ONLY = "F"  # F-quotient at every step
    PRIMARY = "primary"  # normal or sigma-primary quotient (sigma given separately)


@dataclass(frozen=True)
class WitnessChain:
    members: tuple[Subgroup, ...]  # ascending, members[0] = A, members[-1] = G
    steps: tuple[Step, ...]

    @property
    def length(self) -> int:
        return len(self.steps)


def is_subnormal(A: Subgroup, G: PermGroup | Subgroup) -> bool:
    """Descend through ``G >= A^G >= A^(A^G) >= ...`` and see whether ``A`` is reached."""
    G = whole(G)
    t = G.table
    cur = G.mask
    while True:
        nxt = t.normal_closure(A.mask, cur)
        if nxt == cur:
            return cur == A.mask
        cur = nxt


def _step(t, x: int, y: int, F: FormationSpec, mode: Mode, sigma: PrimePartition | None):
    if mode is not Mode.F_ONLY and t.is_normal(x, y):
        return Step.NORMAL_STEP
    if mode is Mode.PRIMARY:
        k = t.core(x, y)
        if sigma.same_block(prime_factors(y.bit_count() // k.bit_count())):
            return Step.F_QUOTIENT_STEP
        return None
    if fm.residual_mask(t, y, F) & ~x == 0:
        return Step.F_QUOTIENT_STEP
    return None


def _reach(G: Subgroup, F: FormationSpec, mode: Mode = Mode.K,
           sigma: PrimePartition | None = None) -> dict[int, tuple[int, Step] | None]:
    """Lattice index -> (next index up the chain, step) for every K-F-subnormal subgroup."""
    t = G.table
    key = ("reach", G.mask, F, mode, sigma)
    hit = t.cache.get(key)
    if hit is not None:
        return hit
    lat = lattice_of(G)
    top = lat.by_mask[G.mask]
    masks = lat.masks
    reach: dict[int, tuple[int, Step] | None] = {top: None}
    up = [top]  # reached so far, kept sorted by index
    for x in sorted(lat.below(top), key=lambda j: (-masks[j].bit_count(), j)):
        if x == top:
            continue
        mx = masks[x]
        for y in up:
            my = masks[y]
            if mx == my or mx & ~my:
                continue
            kind = _step(t, mx, my, F, mode, sigma)
            if kind is not None:
                reach[x] = (y, kind)
                up.append(x)
                up.sort()
                break
    t.cache[key] = reach
    return reach


def _chain(G: Subgroup, A: Subgroup, reach) -> WitnessChain:
    lat = lattice_of(G)
    i = lat.by_mask[A.mask]
    members = [lat[i]]
    steps = []
    while reach[i] is not None:
        i, kind = reach[i]
        members.append(lat[i])
        steps.append(kind)
    return WitnessChain(tuple(members), tuple(steps))


def is_k_f_subnormal(A: Subgroup, G: PermGroup | Subgroup, F: FormationSpec,
                     mode: Mode = Mode.K, sigma: PrimePartition | None = None
                     ) -> tuple[bool, WitnessChain | None]:
    G = whole(G)
    if not A <= G:
        raise ValueError("A must be a subgroup of G")
    reach = _reach(G, F, mode, sigma)
    i = lattice_of(G).by_mask[A.mask]
    if i not in reach:
        return False, None
    return True, _chain(G, A, reach)


def is_f_subnormal(A: Subgroup, G: PermGroup | Subgroup, F: FormationSpec) -> bool:
    """F-subnormality in the non-K sense: every step has an F quotient."""
    return is_k_f_subnormal(A, G, F, Mode.F_ONLY)[0]


def is_sigma_subnormal(A: Subgroup, G: PermGroup | Subgroup, sigma: PrimePartition) -> bool:
    return is_k_f_subnormal(A, G, fm.sigma_nilpotent(sigma))[0]


def is_sigma_subnormal_primary(A: Subgroup, G: PermGroup | Subgroup, sigma: PrimePartition) -> bool:
    """Variant whose non-normal steps need a sigma-primary quotient."""
    return is_k_f_subnormal(A, G, fm.sigma_nilpotent(sigma), Mode.PRIMARY, sigma)[0]


def k_f_subnormal_set(G: PermGroup | Subgroup, F: FormationSpec,
                      mode: Mode = Mode.K, sigma: PrimePartition | None = None) -> list[Subgroup]:
    G = whole(G)
    lat = lattice_of(G)
    return [lat[i] for i in sorted(_reach(G, F, mode, sigma))]


def k_lattice_check(G: PermGroup | Subgroup, F: FormationSpec, meet_only: bool = False
                    ) -> tuple[bool, tuple[Subgroup, Subgroup, str] | None]:
    """Whether the K-F-subnormal subgroups are closed under meet (and join)."""
    G = whole(G)
    lat = lattice_of(G)
    members = k_f_subnormal_set(G, F)
    inside = {s.mask for s in members}
    if len(members) == len(lat.below(lat.by_mask[G.mask])):
        return True, None  # every subgroup qualifies
    for i, a in enumerate(members):
        for b in members[i + 1:]:
            if a <= b or b <= a:
                continue
            if a.mask & b.mask not in inside:
                return False, (a, b, "meet")
            if not meet_only and join(G, a, b).mask not in inside:
                return False, (a, b, "join")
    return True, None


def validate_chain(chain: WitnessChain, F: FormationSpec) -> bool:
    """Re-check every step of a witness chain directly from its definition."""
    if len(chain.members) != len(chain.steps) + 1:
        return False
    for lo, hi, kind in zip(chain.members, chain.members[1:], chain.steps):
        t = hi.table
        if not lo <= hi:
            return False
        if kind is Step.NORMAL_STEP:
            if not t.is_normal(lo.mask, hi.mask):
                return False
        else:
            if not fm.quotient_member(F, t, hi.mask, t.core(lo.mask, hi.mask)):
                return False
    return True
