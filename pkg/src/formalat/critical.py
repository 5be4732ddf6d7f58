"""F-critical, Schmidt and Miller-Moreno groups."""

from __future__ import annotations

from dataclasses import dataclass

from . import formations as fm
from . import invariants as inv
from .formations import FormationSpec
from .lattice import Subgroup, maximal_subgroups, subgroups_of, whole
from .perm import PermGroup


def _member(F: FormationSpec, H: Subgroup) -> bool:
    key = ("member", H.mask, F)
    cache = H.table.cache
    hit = cache.get(key)
    if hit is None:
        hit = cache[key] = fm.member(F, H)
    return hit


def is_f_critical(G: PermGroup | Subgroup, F: FormationSpec, audit: bool = False) -> bool:
    """``G`` is outside ``F`` while every proper subgroup lies in ``F``.

    Checking maximal subgroups suffices for hereditary ``F``; ``audit`` also
    checks every proper subgroup and fails loudly if the two disagree.
    """
    G = whole(G)
    if _member(F, G):
        return False
    if F.hereditary:
        verdict = all(_member(F, M) for M in maximal_subgroups(G))
    else:
        audit = True
        verdict = None
    if audit:
        full = all(_member(F, H) for H in subgroups_of(G) if H != G)
        if verdict is not None and verdict != full:
            raise AssertionError(f"hereditary flag of {F} contradicted by a subgroup of order {G.order}")
        verdict = full
    return verdict


@dataclass(frozen=True)
class SchmidtStructure:
    p: int  # prime of the normal Sylow subgroup P = G^N
    q: int  # prime of the cyclic Sylow complement
    p_abelian: bool
    q_abelian: bool
    P: Subgroup
    Q: Subgroup

    @property
    def abelian_sylows(self) -> bool:
        return self.p_abelian and self.q_abelian

    def violations(self, G: PermGroup | Subgroup) -> list[str]:
        """Departures from the classical structure; empty for a genuine Schmidt group."""
        G = whole(G)
        out = []
        primes = inv.pi(G)
        if len(primes) != 2:
            out.append(f"pi(G) = {primes}, expected two primes")
        if self.p == self.q:
            out.append("p == q")
        if self.P.order != inv.part(G.order, [self.p]):
            out.append("G^N is not a full Sylow p-subgroup")
        if not G.table.is_normal(self.P.mask, G.mask):
            out.append("G^N is not normal")
        if self.P.order * self.Q.order != G.order:
            out.append("|P||Q| != |G|")
        qorder = self.Q.order
        if inv.prime_factors(qorder) != [self.q]:
            out.append("G/P does not have prime-power order")
        if int(G.table.orders[G.table.members(self.Q.mask)].max()) != qorder:
            out.append("G/P is not cyclic")
        return out


def schmidt_structure(G: PermGroup | Subgroup) -> SchmidtStructure:
    G = whole(G)
    P = fm.residual_of(G, fm.NILPOTENT)
    primes = inv.prime_factors(P.order)
    p = primes[0] if primes else 0
    others = [r for r in inv.pi(G) if r != p]
    q = others[0] if others else 0
    Q = inv.sylow(G, q) if q else G.sub(1)
    return SchmidtStructure(p, q, inv.is_abelian(P), inv.is_abelian(Q), P, Q)


def is_schmidt(G: PermGroup | Subgroup) -> tuple[bool, SchmidtStructure | None]:
    G = whole(G)
    if not is_f_critical(G, fm.NILPOTENT):
        return False, None
    return True, schmidt_structure(G)


def is_miller_moreno(G: PermGroup | Subgroup) -> bool:
    G = whole(G)
    return not inv.is_abelian(G) and all(inv.is_abelian(M) for M in maximal_subgroups(G))


def f_critical_subgroups(G: PermGroup | Subgroup, F: FormationSpec,
                         audit: bool = False) -> list[Subgroup]:
    return [H for H in subgroups_of(G) if is_f_critical(H, F, audit)]


def schmidt_subgroups(G: PermGroup | Subgroup) -> list[Subgroup]:
    return f_critical_subgroups(G, fm.NILPOTENT)
