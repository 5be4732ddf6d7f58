"""Brute-force reference implementations, independent of the numpy engine.

Everything here works on frozensets of :class:`Perm` and recomputes from
definitions: closure by repeated multiplication, subgroups by cyclic
extension, quotients by explicit cosets, chains by exhaustive search.
"""

from __future__ import annotations

from formalat.invariants import PrimePartition, prime_factors
from formalat.perm import Perm, PermGroup


def oracle_closure(gens, degree: int) -> frozenset[Perm]:
    e = Perm.identity(degree)
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def oracle_all_subgroups(G: PermGroup) -> set[frozenset[Perm]]:
    """Every subgroup, grown from the trivial one by adjoining single elements."""
    elems = oracle_closure(G.generators, G.degree)
    found = {frozenset([Perm.identity(G.degree)])}
    frontier = list(found)
    while frontier:
        nxt = []
        for H in frontier:
            for g in elems:
                if g in H:
                    continue
                K = oracle_closure(list(H) + [g], G.degree)
                if K not in found:
                    found.add(K)
                    nxt.append(K)
        frontier = nxt
    return found


def is_normal(A: frozenset, B: frozenset) -> bool:
    return all(~b * a * b in A for b in B for a in A)


def core(A: frozenset, B: frozenset) -> frozenset:
    out = set(A)
    for b in B:
        out &= {~b * a * b for a in A}
    return frozenset(out)


def _coset_order(y: Perm, K: frozenset) -> int:
    k, x = 1, y
    while x not in K:
        x = x * y
        k += 1
    return k


def quotient_sigma_nilpotent(Y: frozenset, K: frozenset, sigma: PrimePartition) -> bool:
    """``Y/K`` has a normal Hall subgroup for every block: its block elements are closed and
    number exactly the block part of ``|Y/K|``."""
    cosets = {}
    for y in Y:
        cosets.setdefault(frozenset(y * k for k in K), y)
    reps = list(cosets.values())
    n = len(reps)
    orders = {c: _coset_order(r, K) for c, r in cosets.items()}
    blocks: dict = {}
    for c, o in orders.items():
        ps = prime_factors(o)
        key = sigma.block_of(ps[0]) if ps else None
        if ps and not sigma.same_block(ps):
            continue
        blocks.setdefault(key, set()).add(c)
    for p in prime_factors(n):
        key = sigma.block_of(p)
        members = blocks.get(key, set()) | blocks.get(None, set())
        part = 1
        m = n
        for q in prime_factors(n):
            if sigma.block_of(q) == key:
                while m % q == 0:
                    m //= q
                    part *= q
        if len(members) != part:
            return False
        rep = {c: cosets[c] for c in members}
        for a in rep.values():
            for b in rep.values():
                prod = a * b
                if not any(prod in c for c in members):
                    return False
    return True


def oracle_step(A: frozenset, B: frozenset, sigma: PrimePartition) -> bool:
    return is_normal(A, B) or quotient_sigma_nilpotent(B, core(A, B), sigma)


def oracle_k_f_subnormal(A: frozenset, G: frozenset, subgroups, sigma: PrimePartition) -> bool:
    """Exhaustive search for a chain from ``A`` up to ``G``; no reuse between calls.

    ``sigma`` selects the formation: the finest partition gives the nilpotent one.
    """
    if A == G:
        return True
    seen = {A}
    stack = [A]
    while stack:
        X = stack.pop()
        for Y in subgroups:
            if Y in seen or len(Y) <= len(X) or not X < Y:
                continue
            if oracle_step(X, Y, sigma):
                if Y == G:
                    return True
                seen.add(Y)
                stack.append(Y)
    return False
