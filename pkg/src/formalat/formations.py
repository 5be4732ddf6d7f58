"""Formation descriptors, membership, residuals and radicals."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import invariants as inv
from .invariants import PrimePartition
from .lattice import Subgroup, whole
from .perm import PermGroup
from .table import GroupTable


class Kind(enum.Enum):
    NILPOTENT = "N"
    SIGMA_NILPOTENT = "Nsigma"
    ABELIAN = "A"
    SOLUBLE = "S"
    PI_PRIME = "piprime"
    ALL = "all"


# (hereditary, saturated, contains all nilpotent groups); asserted, not computed
FLAGS = {
    Kind.NILPOTENT: (True, True, True),
    Kind.SIGMA_NILPOTENT: (True, True, True),
    Kind.SOLUBLE: (True, True, True),
    Kind.ABELIAN: (True, False, False),
    Kind.PI_PRIME: (True, True, False),
    Kind.ALL: (True, True, True),
}


class Unsupported(ValueError):
    pass


@dataclass(frozen=True)
class FormationSpec:
    kind: Kind
    sigma: PrimePartition | None = None
    primes: frozenset[int] | None = None

    def __post_init__(self):
        if (self.kind is Kind.SIGMA_NILPOTENT) != (self.sigma is not None):
            raise ValueError("a partition goes with Nsigma and only with Nsigma")
        if (self.kind is Kind.PI_PRIME) != (self.primes is not None):
            raise ValueError("a prime set goes with piprime and only with piprime")
        if self.primes is not None:
            if not self.primes or not all(inv.is_prime(p) for p in self.primes):
                raise ValueError(f"bad prime set {sorted(self.primes)}")

    @classmethod
    def parse(cls, text: str) -> "FormationSpec":
        text = text.strip()
        head, _, arg = text.partition(":")
        if head == "N" and not arg:
            return cls(Kind.NILPOTENT)
        if head == "Nsigma" and arg:
            return cls(Kind.SIGMA_NILPOTENT, sigma=PrimePartition.parse(arg))
        if head == "A" and not arg:
            return cls(Kind.ABELIAN)
        if head == "S" and not arg:
            return cls(Kind.SOLUBLE)
        if head == "piprime" and arg:
            try:
                primes = frozenset(int(p) for p in arg.split(","))
            except ValueError:
                raise ValueError(f"bad prime list {arg!r}") from None
            return cls(Kind.PI_PRIME, primes=primes)
        if head == "all" and not arg:
            return cls(Kind.ALL)
        raise ValueError(f"unknown formation {text!r}")

    def __str__(self) -> str:
        if self.kind is Kind.SIGMA_NILPOTENT:
            return f"Nsigma:{self.sigma}"
        if self.kind is Kind.PI_PRIME:
            return "piprime:" + ",".join(map(str, sorted(self.primes)))
        return self.kind.value

    @property
    def hereditary(self) -> bool:
        return FLAGS[self.kind][0]

    @property
    def saturated(self) -> bool:
        return FLAGS[self.kind][1]

    @property
    def contains_nilpotents(self) -> bool:
        return FLAGS[self.kind][2]

    @property
    def theorem_ready(self) -> bool:
        """Flags required by the main theorems (K-lattice is tested separately)."""
        return self.hereditary and self.saturated and self.contains_nilpotents


NILPOTENT = FormationSpec(Kind.NILPOTENT)
ABELIAN = FormationSpec(Kind.ABELIAN)
SOLUBLE = FormationSpec(Kind.SOLUBLE)
ALL = FormationSpec(Kind.ALL)


def sigma_nilpotent(sigma: PrimePartition | str) -> FormationSpec:
    if isinstance(sigma, str):
        sigma = PrimePartition.parse(sigma)
    return FormationSpec(Kind.SIGMA_NILPOTENT, sigma=sigma)


def pi_prime(primes) -> FormationSpec:
    return FormationSpec(Kind.PI_PRIME, primes=frozenset(primes))


def member(F: FormationSpec, G: PermGroup | Subgroup) -> bool:
    k = F.kind
    if k is Kind.NILPOTENT:
        return inv.is_nilpotent(G)
    if k is Kind.SIGMA_NILPOTENT:
        return inv.is_sigma_nilpotent(G, F.sigma)
    if k is Kind.ABELIAN:
        return inv.is_abelian(G)
    if k is Kind.SOLUBLE:
        return inv.is_soluble(G)
    if k is Kind.PI_PRIME:
        return not set(inv.pi(G)) & F.primes
    return True


def quotient_member(F: FormationSpec, t: GroupTable, y: int, n: int) -> bool:
    """Whether ``Y/N`` lies in ``F`` (``N`` normal in ``Y``), without building the quotient."""
    k = F.kind
    if k is Kind.NILPOTENT:
        return inv.quotient_sigma_nilpotent(t, y, n, PrimePartition.finest())
    if k is Kind.SIGMA_NILPOTENT:
        return inv.quotient_sigma_nilpotent(t, y, n, F.sigma)
    if k is Kind.ABELIAN:
        gens = np.array(t.generators(y) or (0,), dtype=np.int64)
        fwd = t.mul[np.ix_(gens, gens)]
        comm = t.mul[t.mul[np.ix_(t.inv[gens], t.inv[gens])], fwd]
        return bool(t.flags(n)[comm].all())
    if k is Kind.SOLUBLE:
        return residual_mask(t, y, F) & ~n == 0
    if k is Kind.PI_PRIME:
        return not set(inv.prime_factors(y.bit_count() // n.bit_count())) & F.primes
    return True


def residual_mask(t: GroupTable, y: int, F: FormationSpec) -> int:
    """``Y^F`` for the subgroup ``Y`` of the table's group (cached)."""
    key = ("residual", y, F)
    hit = t.cache.get(key)
    if hit is not None:
        return hit
    Y = Subgroup(t, y)
    k = F.kind
    if k is Kind.NILPOTENT:
        hit = inv.lower_central_series(Y)[-1].mask
    elif k is Kind.ABELIAN:
        hit = t.commutator(y, y)
    elif k is Kind.SOLUBLE:
        hit = inv.derived_series(Y)[-1].mask
    elif k is Kind.PI_PRIME:
        iy = t.members(y)
        ok = [x for x in iy if set(inv.prime_factors(int(t.orders[x]))) <= F.primes]
        hit = t.closure(ok)
    elif k is Kind.ALL:
        hit = 1
    else:
        # the residual is the unique smallest normal subgroup with quotient in F
        hit = next(n for n in t.normal_subgroups(y) if quotient_member(F, t, y, n))
    t.cache[key] = hit
    return hit


@dataclass(frozen=True)
class ResidualResult:
    residual: Subgroup
    witnesses: list[Subgroup] = field(default_factory=list)


def residual(G: PermGroup | Subgroup, F: FormationSpec) -> ResidualResult:
    """Intersection of every normal ``N`` with ``G/N`` in ``F``."""
    G = whole(G)
    t = G.table
    witnesses = [n for n in t.normal_subgroups(G.mask) if quotient_member(F, t, G.mask, n)]
    m = G.mask
    for n in witnesses:
        m &= n
    return ResidualResult(G.sub(m), [G.sub(n) for n in witnesses])


def residual_of(G: PermGroup | Subgroup, F: FormationSpec) -> Subgroup:
    G = whole(G)
    return G.sub(residual_mask(G.table, G.mask, F))


def radical(G: PermGroup | Subgroup, F: FormationSpec) -> Subgroup:
    """Join of all normal subgroups that lie in ``F``."""
    G = whole(G)
    t = G.table
    key = ("radical", G.mask, F)
    hit = t.cache.get(key)
    if hit is None:
        acc = 1
        for n in t.normal_subgroups(G.mask):
            if n & ~acc and member(F, G.sub(n)):
                acc = t.closure(t.generators(n), start=acc)
        hit = t.cache[key] = acc
    return G.sub(hit)


@dataclass(frozen=True)
class SigmaBound:
    partition: PrimePartition
    exact: bool

    @property
    def tag(self) -> str:
        return "EXACT" if self.exact else "UPPER_BOUND"


def sigma_n_of(F: FormationSpec) -> PrimePartition:
    if F.kind is Kind.NILPOTENT:
        return PrimePartition.finest()
    if F.kind is Kind.SIGMA_NILPOTENT:
        return F.sigma
    raise Unsupported(f"Sigma_n is not available for {F}")


def sigma_s_of(F: FormationSpec) -> SigmaBound:
    if F.kind is Kind.NILPOTENT:
        return SigmaBound(PrimePartition.finest(), True)
    if F.kind is Kind.SIGMA_NILPOTENT:
        return SigmaBound(F.sigma, False)
    raise Unsupported(f"Sigma_s is not available for {F}")
