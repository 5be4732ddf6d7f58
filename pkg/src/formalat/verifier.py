"""Corpus-wide evaluation of the theorem, corollary and lemma checks.

Every check yields a :class:`CheckOutcome` with a hypothesis status, a
conclusion status and a verdict derived from the two. Work is split per group
so that one lattice and one cache serve every check on that group; results are
merged in ``(group-id, check-id, formation)`` order, so reports do not depend
on the number of worker processes.
"""

from __future__ import annotations

import enum
import json
import multiprocessing
import re
import time
import traceback
import zlib
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable

from . import critical as cr
from . import formations as fm
from . import invariants as inv
from . import subnormality as sn
from .corpus import builtin_corpus, load_corpus
from .formations import FormationSpec, Kind
from .invariants import PrimePartition
from .lattice import (DEFAULT_LATTICE_CAP, Subgroup, all_subgroups, join, lattice_of,
                      maximal_subgroups, normal_closure, quotient, subgroups_of, whole)
from .perm import CapExceeded, PermGroup, element_cap, parse_group
from .table import TABLE_CAP


class Hypothesis(enum.Enum):
    HOLDS = "HOLDS"
    FAILS = "FAILS"
    VACUOUS = "VACUOUS"


class Conclusion(enum.Enum):
    HOLDS = "HOLDS"
    FAILS = "FAILS"
    NOT_EVALUATED = "NOT_EVALUATED"


class Verdict(enum.Enum):
    CONFIRMED = "CONFIRMED"
    VACUOUS = "VACUOUS"
    COUNTEREXAMPLE = "COUNTEREXAMPLE"
    SKIPPED_CAP = "SKIPPED_CAP"


class ConfigError(ValueError):
    """Bad run configuration (exit status 2)."""


@dataclass(frozen=True)
class CheckOutcome:
    check_id: str
    group_id: str
    formation: FormationSpec
    hypothesis: Hypothesis
    conclusion: Conclusion
    verdict: Verdict
    evidence_ref: str = "-"
    evidence: dict | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.verdict is Verdict.SKIPPED_CAP:
            return
        bad = (self.hypothesis is Hypothesis.HOLDS and self.conclusion is Conclusion.FAILS)
        if bad != (self.verdict is Verdict.COUNTEREXAMPLE):
            raise AssertionError(f"inconsistent verdict in {self}")
        if (self.conclusion is Conclusion.NOT_EVALUATED) != (self.hypothesis is Hypothesis.FAILS):
            raise AssertionError(f"conclusion status inconsistent with hypothesis in {self}")

    @property
    def sort_key(self) -> tuple:
        return (self.group_id, self.check_id, str(self.formation))

    def line(self) -> str:
        return "\t".join([self.check_id, self.group_id, str(self.formation), self.hypothesis.value,
                          self.conclusion.value, self.verdict.value, self.evidence_ref])


def make_outcome(check_id: str, group_id: str, F: FormationSpec, hyp: bool | None,
                 concl: Callable[[], bool] | bool, ref: str = "-",
                 evidence: dict | None = None) -> CheckOutcome:
    """Build an outcome; ``hyp`` of ``None`` means vacuous. The conclusion is evaluated
    only when the hypothesis does not fail."""
    if hyp is False:
        return CheckOutcome(check_id, group_id, F, Hypothesis.FAILS, Conclusion.NOT_EVALUATED,
                            Verdict.CONFIRMED, ref)
    c = concl() if callable(concl) else concl
    h = Hypothesis.HOLDS if hyp else Hypothesis.VACUOUS
    if hyp is None:
        verdict = Verdict.VACUOUS
    else:
        verdict = Verdict.CONFIRMED if c else Verdict.COUNTEREXAMPLE
    return CheckOutcome(check_id, group_id, F, h,
                        Conclusion.HOLDS if c else Conclusion.FAILS, verdict, ref,
                        None if c else evidence)


def skipped(check_id: str, group_id: str, F: FormationSpec, reason: str) -> CheckOutcome:
    return CheckOutcome(check_id, group_id, F, Hypothesis.VACUOUS, Conclusion.NOT_EVALUATED,
                        Verdict.SKIPPED_CAP, reason)


# evidence helpers --------------------------------------------------------------


def describe(H: Subgroup) -> dict:
    return {"order": H.order, "elements": [str(g) for g in H.elements()]}


def describe_chain(chain: Iterable[Subgroup]) -> list[dict]:
    return [describe(H) for H in chain]


# shared predicates ----------------------------------------------------------------


def _inside(G: Subgroup, F: FormationSpec, mode=sn.Mode.K, sigma=None) -> set[int]:
    return {H.mask for H in sn.k_f_subnormal_set(G, F, mode, sigma)}


def _subnormal_masks(G: Subgroup) -> set[int]:
    t = G.table
    key = ("subnormal-set", G.mask)
    hit = t.cache.get(key)
    if hit is None:
        hit = t.cache[key] = {H.mask for H in subgroups_of(G) if sn.is_subnormal(H, G)}
    return hit


def chain_avoiding(G: Subgroup, inside: set[int], k: int) -> list[Subgroup] | None:
    """A maximal chain ``G > M_1 > ... > M_k`` with no ``M_i`` in ``inside``, or ``None``."""
    lat = lattice_of(G)
    masks = lat.masks
    memo: dict[tuple[int, int], list[int] | None] = {}

    def bad(i: int, k: int) -> list[int] | None:
        if (i, k) in memo:
            return memo[i, k]
        res = None
        for j in lat.maximal_in(i):
            if masks[j] in inside:
                continue
            if k == 1:
                res = [j]
                break
            sub = bad(j, k - 1)
            if sub is not None:
                res = [j] + sub
                break
        memo[i, k] = res
        return res

    found = bad(lat.by_mask[G.mask], k)
    return None if found is None else [G] + [lat[j] for j in found]


def _schmidt_subgroups(G: Subgroup) -> list[Subgroup]:
    return cr.schmidt_subgroups(G)


def _abelian_quotient(G: Subgroup, n: Subgroup) -> bool:
    return fm.quotient_member(fm.ABELIAN, G.table, G.mask, n.mask)


def _all_in(subs: list[Subgroup], inside: set[int]) -> tuple[bool, Subgroup | None]:
    for H in subs:
        if H.mask not in inside:
            return False, H
    return True, None


# theorems -----------------------------------------------------------------------


def check_theorem_A1(G: Subgroup, F: FormationSpec, gid: str = "G", audit: bool = False) -> CheckOutcome:
    G = whole(G)
    t = G.table
    crit = cr.f_critical_subgroups(G, F, audit)
    inside = _inside(G, F)
    hyp, bad = _all_in(crit, inside)
    reason = "not K-F-subnormal"
    if hyp:
        for H in crit:
            if not fm.quotient_member(F, t, H.mask, inv.fitting(H).mask):
                hyp, bad, reason = False, H, "H/F(H) outside F"
                break
    if audit:
        for H in crit:
            ok, chain = sn.is_k_f_subnormal(H, G, F)
            if ok and not sn.validate_chain(chain, F):
                raise AssertionError(f"invalid witness chain for a subgroup of order {H.order}")
    ref = f"critical={len(crit)}" + ("" if hyp else f";blocked-by-order={bad.order}:{reason}")
    fit = inv.fitting(G)
    return make_outcome("thm-A1", gid, F, hyp,
                        lambda: fm.quotient_member(F, t, G.mask, fit.mask), ref,
                        {"critical": [describe(H) for H in crit], "fitting": describe(fit)})


def check_theorem_A2(G: Subgroup, F: FormationSpec, gid: str = "G") -> CheckOutcome:
    G = whole(G)
    schmidt = _schmidt_subgroups(G)
    inside = _inside(G, F)
    hyp, bad = _all_in(schmidt, inside)
    ref = f"schmidt={len(schmidt)}" + ("" if hyp else f";blocked-by-order={bad.order}")
    rad = fm.radical(G, F)
    return make_outcome("thm-A2", gid, F, hyp, lambda: _abelian_quotient(G, rad), ref,
                        {"schmidt": [describe(H) for H in schmidt], "radical": describe(rad)})


def theorem_B1_sides(G: Subgroup, F: FormationSpec) -> tuple[bool, bool, list[Subgroup] | None]:
    G = whole(G)
    chain = chain_avoiding(G, _inside(G, F), 2)
    lhs = chain is None
    if fm.member(F, G):
        rhs = True
    else:
        ok, st = cr.is_schmidt(G)
        rhs = ok and st.abelian_sylows
    return lhs, rhs, chain


def check_theorem_B1(G: Subgroup, F: FormationSpec, gid: str = "G") -> CheckOutcome:
    """Equivalence check: the conclusion field records whether both sides agree."""
    lhs, rhs, chain = theorem_B1_sides(G, F)
    ref = f"lhs={int(lhs)};rhs={int(rhs)}"
    ev = {"lhs": lhs, "rhs": rhs, "chain_avoiding": describe_chain(chain) if chain else None}
    return make_outcome("thm-B1", gid, F, True, lhs == rhs, ref, ev)


def check_theorem_B2(G: Subgroup, F: FormationSpec, sigma_check: PrimePartition | None = None,
                     gid: str = "G", check_id: str = "thm-B2",
                     inside: set[int] | None = None) -> CheckOutcome:
    G = whole(G)
    if sigma_check is None:
        sigma_check = fm.sigma_s_of(F).partition
    chain = chain_avoiding(G, _inside(G, F) if inside is None else inside, 3)
    ref = f"sigma={sigma_check}" + ("" if chain is None else ";chain-orders="
                                    + ",".join(str(H.order) for H in chain))
    return make_outcome(check_id, gid, F, chain is None,
                        lambda: inv.is_sigma_soluble(G, sigma_check), ref,
                        {"sigma": str(sigma_check),
                         "chief_factors": [f.order for f in inv.chief_series(G).factors]})


# corollaries ----------------------------------------------------------------------

COR_IDS = ("1.1", "1.2", "1.3", "1.4", "1.5", "1.6", "1.7")


def check_corollary(cid: str, G: Subgroup, gid: str = "G", sigma: PrimePartition | None = None,
                    pi: Iterable[int] | None = None) -> CheckOutcome:
    G = whole(G)
    t = G.table
    check_id = f"cor-{cid}"
    if cid in ("1.1", "1.2"):
        sub = _subnormal_masks(G)
        schmidt = _schmidt_subgroups(G)
        hyp, _ = _all_in(schmidt, sub)
        fit = inv.fitting(G)
        target = fm.NILPOTENT if cid == "1.1" else fm.ABELIAN
        return make_outcome(check_id, gid, fm.NILPOTENT, hyp,
                            lambda: fm.quotient_member(target, t, G.mask, fit.mask),
                            f"schmidt={len(schmidt)}", {"fitting": describe(fit)})
    if cid == "1.3":
        if sigma is None:
            raise ConfigError("corollary 1.3 needs a partition")
        F = fm.sigma_nilpotent(sigma)
        schmidt = _schmidt_subgroups(G)
        hyp, _ = _all_in(schmidt, _inside(G, F))
        fs = inv.sigma_fitting(G, sigma)
        return make_outcome(check_id, gid, F, hyp, lambda: _abelian_quotient(G, fs),
                            f"schmidt={len(schmidt)}", {"sigma_fitting": describe(fs)})
    if cid == "1.4":
        chain = chain_avoiding(G, _subnormal_masks(G), 3)
        return make_outcome(check_id, gid, fm.NILPOTENT, chain is None,
                            lambda: inv.is_soluble(G), "-", {})
    if cid == "1.5":
        nilpotent = inv.is_nilpotent(G)
        chain = None if nilpotent else chain_avoiding(G, _subnormal_masks(G), 2)
        hyp = not nilpotent and chain is None

        def concl():
            ok, st = cr.is_schmidt(G)
            return ok and st.abelian_sylows
        return make_outcome(check_id, gid, fm.NILPOTENT, hyp, concl,
                            "nilpotent" if nilpotent else "-", {})
    if cid in ("1.6", "1.7"):
        if not pi:
            raise ConfigError(f"corollary {cid} needs a prime set")
        split = PrimePartition.pi_split(pi)
        F = fm.pi_prime(pi) if cid == "1.6" else fm.sigma_nilpotent(split)
        return check_theorem_B2(G, F, split, gid, check_id)
    raise ConfigError(f"unknown corollary {cid}")


# lemmas ---------------------------------------------------------------------------


def _aggregate(check_id: str, gid: str, F: FormationSpec,
               instances: Iterable[tuple[bool, Callable[[], dict]]]) -> CheckOutcome:
    """Fold per-instance results: vacuous when none apply, failing on the first bad one."""
    n = 0
    for ok, evidence in instances:
        n += 1
        if not ok:
            return make_outcome(check_id, gid, F, True, False, f"instances={n};failed-at={n}",
                                evidence())
    if n == 0:
        return make_outcome(check_id, gid, F, None, True, "instances=0")
    return make_outcome(check_id, gid, F, True, True, f"instances={n}")


def _proper_normals(G: Subgroup) -> list[Subgroup]:
    return [G.sub(m) for m in G.table.normal_subgroups(G.mask) if m not in (1, G.mask)]


LEMMA_21I_QUOTIENT_CAP = 64


def lemma_2_1i(G: Subgroup, F: FormationSpec, gid: str) -> CheckOutcome:
    """Each quotient is built as its own permutation group; at most a fixed number per group."""
    def gen():
        res = fm.residual_of(G, F)
        for N in _proper_normals(G)[:LEMMA_21I_QUOTIENT_CAP]:
            q = quotient(G, N)
            Q = whole(q.quotient)
            lhs = fm.residual_of(Q, F)
            rhs = q.image(res)
            yield lhs.mask == rhs.mask, lambda: {"N": describe(N), "residual": describe(res),
                                                 "quotient_residual_order": lhs.order,
                                                 "image_order": rhs.order}
    return _aggregate("lem-2.1i", gid, F, gen())


def lemma_2_1ii(G: Subgroup, F: FormationSpec, gid: str) -> CheckOutcome:
    t = G.table
    products: dict[tuple[int, int], int] = {}

    def times(r: int, n: int) -> int:
        hit = products.get((r, n))
        if hit is None:
            hit = products[r, n] = t.closure(t.generators(r), start=n)
        return hit

    def gen():
        rg = fm.residual_mask(t, G.mask, F)
        subs = [H for H in subgroups_of(G) if H.mask != G.mask]
        for N in _proper_normals(G):
            for U in subs:
                if N.order * U.order != G.order * (N.mask & U.mask).bit_count():
                    continue
                ru = fm.residual_mask(t, U.mask, F)
                yield times(rg, N.mask) == times(ru, N.mask), \
                    lambda N=N, U=U: {"N": describe(N), "U": describe(U)}
    return _aggregate("lem-2.1ii", gid, F, gen())


def frattini_mask(G: Subgroup) -> int:
    m = G.mask
    for M in maximal_subgroups(G):
        m &= M.mask
    return m


def lemma_2_2(G: Subgroup, F: FormationSpec, gid: str) -> CheckOutcome:
    t = G.table
    phi = frattini_mask(G)

    def gen():
        for e in t.normal_subgroups(G.mask):
            if e == 1:
                continue
            if not fm.quotient_member(F, t, e, e & phi):
                continue
            E = G.sub(e)
            yield fm.member(F, E), lambda E=E: {"E": describe(E), "frattini": describe(G.sub(phi))}
    return _aggregate("lem-2.2", gid, F, gen())


def lemma_2_3(G: Subgroup, F: FormationSpec, gid: str) -> CheckOutcome:
    t = G.table

    def gen():
        for H in cr.f_critical_subgroups(G, F):
            if not fm.quotient_member(F, t, H.mask, inv.fitting(H).mask):
                continue
            yield cr.is_schmidt(H)[0], lambda H=H: {"H": describe(H)}
    return _aggregate("lem-2.3", gid, F, gen())


def lemma_2_4i(G: Subgroup, F: FormationSpec, gid: str) -> CheckOutcome:
    sigma = fm.sigma_n_of(F)

    def gen():
        for H in subgroups_of(G):
            if H.is_trivial or not sigma.same_block(inv.pi(H)) or not inv.is_soluble(H):
                continue
            yield cr._member(F, H), lambda H=H: {"H": describe(H), "sigma": str(sigma)}
    return _aggregate("lem-2.4i", gid, F, gen())


LEMMA_24II_PAIR_CAP = 2000


def lemma_2_4ii(G: Subgroup, F: FormationSpec, gid: str) -> CheckOutcome:
    """Pairs of incomparable K-F-subnormal F-subgroups; capped per group and formation."""
    members = [H for H in sn.k_f_subnormal_set(G, F) if cr._member(F, H)]

    def gen():
        n = 0
        for i, A in enumerate(members):
            for B in members[i + 1:]:
                if A <= B or B <= A:
                    continue
                if n == LEMMA_24II_PAIR_CAP:
                    return
                n += 1
                J = join(G, A, B)
                yield cr._member(F, J), lambda A=A, B=B, J=J: {
                    "A": describe(A), "B": describe(B), "join": describe(J)}
    return _aggregate("lem-2.4ii", gid, F, gen())


def lemma_2_5(G: Subgroup, sigma: PrimePartition, gid: str) -> CheckOutcome:
    F = fm.sigma_nilpotent(sigma)

    def gen():
        if G.order == 1 or not inv.is_sigma_soluble(G, sigma):
            return
        for block in sigma.restrict(inv.pi(G)):
            yield inv.hall(G, block) is not None, lambda block=block: {
                "block": sorted(block), "group_order": G.order}
    return _aggregate("lem-2.5", gid, F, gen())


def lemma_2_6(G: Subgroup, sigma: PrimePartition, gid: str) -> CheckOutcome:
    F = fm.sigma_nilpotent(sigma)

    def gen():
        for A in sn.k_f_subnormal_set(G, F):
            if A.is_trivial:
                continue
            closure = normal_closure(G, A)
            if inv.is_sigma_nilpotent(A, sigma):
                yield inv.is_sigma_nilpotent(closure, sigma), lambda A=A: {
                    "A": describe(A), "variant": "sigma-nilpotent"}
            if inv.is_sigma_metanilpotent(A, sigma):
                yield inv.is_sigma_metanilpotent(closure, sigma), lambda A=A: {
                    "A": describe(A), "variant": "sigma-metanilpotent"}
    return _aggregate("lem-2.6", gid, F, gen())


def lemma_2_7(G: Subgroup, sigma: PrimePartition, gid: str) -> CheckOutcome:
    F = fm.sigma_nilpotent(sigma)

    def gen():
        for A in sn.k_f_subnormal_set(G, F):
            if A.is_trivial:
                continue
            primes = inv.pi(A)
            if not sigma.same_block(primes):
                continue
            O = inv.o_sigma(G, sigma, sigma.block_of(primes[0]))
            yield A <= O, lambda A=A, O=O: {"A": describe(A), "O_sigma_i": describe(O)}
    return _aggregate("lem-2.7", gid, F, gen())


LEMMAS_F = {"lem-2.1i": lemma_2_1i, "lem-2.1ii": lemma_2_1ii, "lem-2.2": lemma_2_2,
            "lem-2.3": lemma_2_3, "lem-2.4i": lemma_2_4i, "lem-2.4ii": lemma_2_4ii}
LEMMAS_SIGMA = {"lem-2.5": lemma_2_5, "lem-2.6": lemma_2_6, "lem-2.7": lemma_2_7}


def _lemma_applies(cid: str, F: FormationSpec) -> bool:
    if cid in ("lem-2.1i", "lem-2.1ii"):
        return True
    if cid == "lem-2.2":
        return F.saturated and F.contains_nilpotents
    if cid == "lem-2.4i":
        return F.theorem_ready and F.kind in (Kind.NILPOTENT, Kind.SIGMA_NILPOTENT)
    return F.theorem_ready


def check_lemma_suite(G: Subgroup, F: FormationSpec, sigma: PrimePartition,
                      gid: str = "G") -> list[CheckOutcome]:
    G = whole(G)
    out = [fn(G, F, gid) for cid, fn in LEMMAS_F.items() if _lemma_applies(cid, F)]
    out += [fn(G, sigma, gid) for fn in LEMMAS_SIGMA.values()]
    return out


# extra consistency checks ------------------------------------------------------------


def check_k_lattice(G: Subgroup, F: FormationSpec, gid: str, meet_only: bool = False) -> CheckOutcome:
    ok, bad = sn.k_lattice_check(G, F, meet_only)
    cid = "k-meet" if meet_only else "k-lattice"
    ev = None if ok else {"A": describe(bad[0]), "B": describe(bad[1]), "operation": bad[2]}
    n = len(sn.k_f_subnormal_set(G, F))
    return make_outcome(cid, gid, F, True, ok, f"members={n}", ev)


def check_cross_subnormal(G: Subgroup, gid: str) -> CheckOutcome:
    """K-N-subnormal, subnormal and finest-sigma-subnormal agree on every subgroup."""
    a = _inside(G, fm.NILPOTENT)
    b = _subnormal_masks(G)
    c = _inside(G, fm.sigma_nilpotent(PrimePartition.finest()))
    diff = sorted((a ^ b) | (a ^ c), key=lambda m: (m.bit_count(), m))
    ev = {"disagreements": [describe(G.sub(m)) for m in diff[:10]]}
    return make_outcome("x-subnormal", gid, fm.NILPOTENT, True, not diff,
                        f"subgroups={len(subgroups_of(G))};subnormal={len(b)}", ev)


def check_cross_sigma(G: Subgroup, sigma: PrimePartition, gid: str) -> CheckOutcome:
    """Sigma-nilpotent and sigma-primary quotient steps give the same subgroups."""
    F = fm.sigma_nilpotent(sigma)
    a = _inside(G, F)
    b = _inside(G, F, sn.Mode.PRIMARY, sigma)
    diff = sorted(a ^ b, key=lambda m: (m.bit_count(), m))
    ev = {"disagreements": [describe(G.sub(m)) for m in diff[:10]]}
    return make_outcome("x-sigma", gid, F, True, not diff, f"members={len(a)}", ev)


# configuration ------------------------------------------------------------------------

THEOREMS = ("thm-A1", "thm-A2", "thm-B1", "thm-B2")
COROLLARIES = tuple(f"cor-{c}" for c in COR_IDS)
LEMMAS = tuple(LEMMAS_F) + tuple(LEMMAS_SIGMA)
EXTRAS = ("k-lattice", "k-meet", "x-subnormal", "x-sigma")
ALL_CHECKS = THEOREMS + COROLLARIES + LEMMAS + EXTRAS
GROUPS = {"all": ALL_CHECKS, "theorems": THEOREMS, "corollaries": COROLLARIES,
          "lemmas": LEMMAS, "extras": EXTRAS}

DEFAULT_FORMATIONS = ("N", "Nsigma:2,3|*", "Nsigma:2|3,5|*")
DEFAULT_SIGMAS = ("2,3|*", "2|3,5|*")
DEFAULT_PIS = ("2", "3")

COR16_NOTE = ("cor-1.6 uses F = piprime, which does not contain every nilpotent group "
              "as the underlying theorem assumes; run under --force")
COR16_EXCLUDED = "cor-1.6 excluded: it needs --force because piprime lacks the nilpotent-closure flag"
UPPER_NOTE = "thm-B2 with Nsigma:s checks s-solubility for s itself, an upper bound on Sigma_s"


@dataclass
class Config:
    corpus: str = "builtin"
    checks: tuple[str, ...] = ("all",)
    formations: tuple[str, ...] = DEFAULT_FORMATIONS
    sigmas: tuple[str, ...] = DEFAULT_SIGMAS
    pis: tuple[str, ...] = DEFAULT_PIS
    jobs: int = 1
    force: bool = False
    audit: bool = True


@dataclass
class Plan:
    """A validated configuration."""
    corpus: str
    checks: tuple[str, ...]
    formations: tuple[FormationSpec, ...]
    sigmas: tuple[PrimePartition, ...]
    pis: tuple[frozenset[int], ...]
    force: bool
    audit: bool
    notes: tuple[str, ...]


def parse_pi(text: str) -> frozenset[int]:
    try:
        primes = frozenset(int(p) for p in text.split(","))
    except ValueError:
        raise ConfigError(f"bad prime set {text!r}") from None
    if not primes or not all(inv.is_prime(p) for p in primes):
        raise ConfigError(f"bad prime set {text!r}")
    return primes


def plan(config: Config) -> Plan:
    notes: list[str] = []
    try:
        formations = tuple(dict.fromkeys(FormationSpec.parse(f) for f in config.formations))
        sigmas = tuple(dict.fromkeys(PrimePartition.parse(s) for s in config.sigmas))
    except ValueError as e:
        raise ConfigError(str(e)) from None
    pis = tuple(dict.fromkeys(parse_pi(p) for p in config.pis))
    requested: list[str] = []
    explicit: set[str] = set()
    for c in config.checks:
        if c in GROUPS:
            requested += GROUPS[c]
        elif c in ALL_CHECKS:
            requested.append(c)
            explicit.add(c)
        else:
            raise ConfigError(f"unknown check {c!r}")
    checks = tuple(c for c in ALL_CHECKS if c in requested)
    if not checks:
        raise ConfigError("no checks selected")
    if "cor-1.6" in checks and not config.force:
        if "cor-1.6" in explicit:
            raise ConfigError("cor-1.6 requires --force")
        checks = tuple(c for c in checks if c != "cor-1.6")
        notes.append(COR16_EXCLUDED)
    elif "cor-1.6" in checks:
        notes.append(COR16_NOTE)
    needs_f = [c for c in checks if c in THEOREMS or c in LEMMAS_F or c == "k-lattice"]
    if needs_f and not formations:
        raise ConfigError("at least one --formation is required")
    needs_sigma = [c for c in checks if c in LEMMAS_SIGMA or c in ("cor-1.3", "x-sigma")]
    if needs_sigma and not sigmas:
        raise ConfigError("at least one --sigma is required")
    if any(c in ("cor-1.6", "cor-1.7", "k-meet") for c in checks) and not pis:
        raise ConfigError("at least one --pi is required")
    if any(c in THEOREMS for c in checks):
        for F in formations:
            if not F.theorem_ready and not config.force:
                raise ConfigError(f"formation {F} lacks the flags the theorems need; use --force")
    if "thm-B2" in checks:
        for F in formations:
            try:
                fm.sigma_s_of(F)
            except fm.Unsupported:
                raise ConfigError(f"thm-B2: no partition is known for {F}") from None
        if any(F.kind is Kind.SIGMA_NILPOTENT for F in formations):
            notes.append(UPPER_NOTE)
    if config.jobs < 1:
        raise ConfigError("--jobs must be positive")
    return Plan(config.corpus, checks, formations, sigmas, pis, config.force, config.audit,
                tuple(notes))


def audited(gid: str) -> bool:
    """About one group in ten gets the slower cross-checked code paths."""
    return zlib.crc32(gid.encode()) % 10 == 0


def _formations_for(p: Plan, cid: str) -> list:
    if cid in THEOREMS or cid in LEMMAS_F or cid == "k-lattice":
        return list(p.formations)
    if cid in LEMMAS_SIGMA or cid in ("cor-1.3", "x-sigma"):
        return [fm.sigma_nilpotent(s) for s in p.sigmas]
    if cid == "cor-1.6":
        return [fm.pi_prime(pi) for pi in p.pis]
    if cid == "cor-1.7":
        return [fm.sigma_nilpotent(PrimePartition.pi_split(pi)) for pi in p.pis]
    if cid == "k-meet":
        return [fm.ABELIAN] + [fm.pi_prime(pi) for pi in p.pis]
    return [fm.NILPOTENT]


def tasks_for(p: Plan) -> list[tuple[str, FormationSpec]]:
    return [(cid, F) for cid in p.checks for F in _formations_for(p, cid)
            if not (cid in LEMMAS_F and not _lemma_applies(cid, F))]


def run_check(cid: str, F: FormationSpec, G: Subgroup, gid: str, audit: bool,
              pis: dict[FormationSpec, frozenset[int]]) -> CheckOutcome:
    if cid == "thm-A1":
        return check_theorem_A1(G, F, gid, audit)
    if cid == "thm-A2":
        return check_theorem_A2(G, F, gid)
    if cid == "thm-B1":
        return check_theorem_B1(G, F, gid)
    if cid == "thm-B2":
        return check_theorem_B2(G, F, None, gid)
    if cid in ("cor-1.1", "cor-1.2", "cor-1.4", "cor-1.5"):
        return check_corollary(cid[4:], G, gid)
    if cid == "cor-1.3":
        return check_corollary("1.3", G, gid, sigma=F.sigma)
    if cid in ("cor-1.6", "cor-1.7"):
        return check_corollary(cid[4:], G, gid, pi=pis[F])
    if cid in LEMMAS_F:
        return LEMMAS_F[cid](G, F, gid)
    if cid in LEMMAS_SIGMA:
        return LEMMAS_SIGMA[cid](G, F.sigma, gid)
    if cid == "k-lattice":
        return check_k_lattice(G, F, gid)
    if cid == "k-meet":
        return check_k_lattice(G, F, gid, meet_only=True)
    if cid == "x-subnormal":
        return check_cross_subnormal(G, gid)
    if cid == "x-sigma":
        return check_cross_sigma(G, F.sigma, gid)
    raise ConfigError(f"unknown check {cid}")


def _pi_lookup(p: Plan) -> dict[FormationSpec, frozenset[int]]:
    out = {}
    for pi in p.pis:
        out[fm.pi_prime(pi)] = pi
        out[fm.sigma_nilpotent(PrimePartition.pi_split(pi))] = pi
    return out


def verify_group(p: Plan, gid: str, text: str) -> tuple[list[CheckOutcome], dict[str, float]]:
    """All selected checks on one group; the unit of parallel work."""
    timing = {"lattice": 0.0, "checks": 0.0}
    tasks = tasks_for(p)
    t0 = time.perf_counter()
    try:
        G = parse_group(text, name=gid)
        if G.order > min(element_cap(), TABLE_CAP):
            raise CapExceeded("elements", G.order, min(element_cap(), TABLE_CAP))
        all_subgroups(G.table, DEFAULT_LATTICE_CAP)
    except CapExceeded as e:
        return [skipped(c, gid, F, f"cap:{e.what}") for c, F in tasks], timing
    W = whole(G)
    t1 = time.perf_counter()
    timing["lattice"] = t1 - t0
    audit = p.audit and audited(gid)
    pis = _pi_lookup(p)
    out = []
    for cid, F in tasks:
        try:
            out.append(run_check(cid, F, W, gid, audit, pis))
        except (ConfigError, fm.Unsupported):
            raise
        except Exception as e:  # an internal failure is reported, never hidden
            out.append(CheckOutcome(cid, gid, F, Hypothesis.HOLDS, Conclusion.FAILS,
                                    Verdict.COUNTEREXAMPLE, f"internal-error:{type(e).__name__}",
                                    {"traceback": traceback.format_exc()}))
    timing["checks"] = time.perf_counter() - t1
    for o in out:
        if o.evidence is not None:
            o.evidence.setdefault("group", text)
    return out, timing


def _worker(args):
    p, gid, text = args
    return verify_group(p, gid, text)


# reports -----------------------------------------------------------------------------


@dataclass
class VerificationReport:
    header: list[str]
    outcomes: list[CheckOutcome]
    load_errors: list[tuple[str, str]]
    timing: dict[str, float]

    @property
    def summary(self) -> dict[str, Counter]:
        out: dict[str, Counter] = {}
        for o in self.outcomes:
            out.setdefault(o.check_id, Counter())[o.verdict] += 1
        return out

    @property
    def counterexamples(self) -> list[CheckOutcome]:
        return [o for o in self.outcomes if o.verdict is Verdict.COUNTEREXAMPLE]

    @property
    def exit_code(self) -> int:
        return 1 if self.counterexamples else 0

    def coverage(self) -> dict[tuple[str, str], int]:
        """Records with a holding hypothesis per (check-id, formation)."""
        c: Counter = Counter()
        for o in self.outcomes:
            if o.hypothesis is Hypothesis.HOLDS:
                c[o.check_id, str(o.formation)] += 1
        return dict(c)

    def body_lines(self) -> list[str]:
        lines = list(self.header)
        lines += [f"# load-error\t{gid}\t{msg}" for gid, msg in self.load_errors]
        lines += [o.line() for o in self.outcomes]
        lines.append("# summary\tcheck-id\t" + "\t".join(v.value for v in Verdict))
        for cid in ALL_CHECKS:
            if cid in self.summary:
                counts = self.summary[cid]
                lines.append(f"# summary\t{cid}\t" + "\t".join(str(counts[v]) for v in Verdict))
        total = Counter(o.verdict for o in self.outcomes)
        lines.append("# summary\ttotal\t" + "\t".join(str(total[v]) for v in Verdict))
        for (cid, F), n in sorted(self.coverage().items()):
            lines.append(f"# coverage\t{cid}\t{F}\thypothesis-holds={n}")
        return lines

    def timing_lines(self) -> list[str]:
        return ["# timing"] + [f"# timing\t{k}\t{v:.3f}s" for k, v in self.timing.items()]

    def text(self) -> str:
        return "".join(l + "\n" for l in self.body_lines() + self.timing_lines())


def strip_timing(text: str) -> str:
    return "".join(l + "\n" for l in text.splitlines() if not l.startswith("# timing"))


def _safe(s: str) -> str:
    return re.sub(r"[^A-Za-z0-9.,_-]+", "_", s)


def evidence_name(o: CheckOutcome) -> str:
    return f"{_safe(o.check_id)}__{_safe(o.group_id)}__{_safe(str(o.formation))}.json"


def load_groups(corpus: str) -> tuple[list[tuple[str, str]], list[tuple[str, str]]]:
    if corpus == "builtin":
        return [(gid, G.to_text()) for gid, G in builtin_corpus()], []
    d = Path(corpus)
    if not d.is_dir():
        raise ConfigError(f"corpus directory {corpus!r} not found")
    groups, errors = load_corpus(d)
    texts = [(gid, (d / f"{gid}.grp").read_text(encoding="utf-8")) for gid, _ in groups]
    return texts, [(e.id, e.message) for e in errors]


def run_corpus(config: Config, groups: list[tuple[str, str]] | None = None) -> VerificationReport:
    p = plan(config)
    t0 = time.perf_counter()
    if groups is None:
        groups, errors = load_groups(p.corpus)
    else:
        errors = []
    t_load = time.perf_counter() - t0
    work = [(p, gid, text) for gid, text in groups]
    if config.jobs > 1 and len(work) > 1:
        with multiprocessing.get_context().Pool(config.jobs) as pool:
            results = pool.map(_worker, work, chunksize=1)
    else:
        results = [_worker(w) for w in work]
    outcomes = sorted((o for r, _ in results for o in r), key=lambda o: o.sort_key)
    timing = {"load": t_load,
              "lattice": sum(t["lattice"] for _, t in results),
              "checks": sum(t["checks"] for _, t in results),
              "wall": time.perf_counter() - t0}
    header = [
        "# formalat verification report",
        f"# corpus\t{p.corpus}\tgroups={len(groups)}\tload-errors={len(errors)}",
        "# checks\t" + ",".join(p.checks),
        "# formations\t" + " ".join(str(F) for F in p.formations),
        "# sigmas\t" + " ".join(str(s) for s in p.sigmas),
        "# pi\t" + " ".join(",".join(map(str, sorted(pi))) for pi in p.pis),
        f"# caps\telements={element_cap()}\ttable={TABLE_CAP}\tlattice={DEFAULT_LATTICE_CAP}",
        f"# force\t{p.force}",
        "# fields\tcheck-id\tgroup-id\tformation\thypothesis\tconclusion\tverdict\tevidence-ref",
    ] + [f"# note\t{n}" for n in p.notes]
    return VerificationReport(header, outcomes, errors, timing)


def write_report(report: VerificationReport, path) -> Path | None:
    """Write the report and one JSON file per counterexample; returns the evidence directory."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    outcomes = []
    ev_dir = path.with_name(path.name + ".evidence")
    for o in report.outcomes:
        if o.verdict is Verdict.COUNTEREXAMPLE:
            name = evidence_name(o)
            ev_dir.mkdir(exist_ok=True)
            (ev_dir / name).write_text(json.dumps({
                "check": o.check_id, "group": o.group_id, "formation": str(o.formation),
                "hypothesis": o.hypothesis.value, "conclusion": o.conclusion.value,
                "ref": o.evidence_ref, "evidence": o.evidence or {}}, indent=2, sort_keys=True))
            o = CheckOutcome(o.check_id, o.group_id, o.formation, o.hypothesis, o.conclusion,
                             o.verdict, f"{o.evidence_ref};evidence={ev_dir.name}/{name}",
                             o.evidence)
        outcomes.append(o)
    final = VerificationReport(report.header, outcomes, report.load_errors, report.timing)
    path.write_text(final.text(), encoding="utf-8")
    return ev_dir if ev_dir.exists() else None
