"""Acceptance criteria 1-11, one test each.

Criteria 1-7 and 11 read a full verification run over the built-in corpus
(all checks, Corollary 1.6 enabled by ``force``). Criteria 8-10 recompute
directly.
"""

import time

import pytest

from formalat import critical as cr
from formalat import formations as fm
from formalat import invariants as inv
from formalat import subnormality as sn
from formalat import verifier as vf
from formalat.invariants import PrimePartition
from formalat.lattice import all_subgroups, frattini, maximal_subgroups, whole
from oracles import oracle_all_subgroups, oracle_k_f_subnormal

FORMATIONS = ["N", "Nsigma:2,3|*", "Nsigma:2|3,5|*"]
BUDGET_SECONDS = 300


@pytest.fixture(scope="module")
def run4():
    t0 = time.perf_counter()
    report = vf.run_corpus(vf.Config(force=True, jobs=4))
    return report, time.perf_counter() - t0


@pytest.fixture(scope="module")
def report(run4):
    return run4[0]


def records(report, check_id, formation=None):
    return [o for o in report.outcomes if o.check_id == check_id
            and (formation is None or str(o.formation) == formation)]


def verdicts(outcomes):
    return {o.verdict for o in outcomes}


def no_counterexample(report, check_id):
    rs = records(report, check_id)
    assert rs, f"no records for {check_id}"
    bad = [o.line() for o in rs if o.verdict is vf.Verdict.COUNTEREXAMPLE]
    assert not bad, bad[:5]
    skipped = [o.line() for o in rs if o.verdict is vf.Verdict.SKIPPED_CAP]
    assert not skipped, skipped[:5]
    return rs


def test_criterion_01_theorem_A_i(run4, corpus):
    report, seconds = run4
    no_counterexample(report, "thm-A1")
    for F in FORMATIONS:
        assert len(records(report, "thm-A1", F)) == len(corpus)
    assert seconds < BUDGET_SECONDS


def test_criterion_02_theorem_A_ii(report, corpus):
    no_counterexample(report, "thm-A2")
    for F in FORMATIONS:
        rs = records(report, "thm-A2", F)
        assert len(rs) == len(corpus)
        holding = {o.group_id for o in rs if o.hypothesis is vf.Hypothesis.HOLDS}
        assert {"sym3", "alt4", "sl2_3", "c7_c3"} <= holding
        assert len(holding) >= 10


def test_criterion_03_theorem_B_i(report, corpus):
    for F in FORMATIONS:
        rs = records(report, "thm-B1", F)
        assert len(rs) == len(corpus)
        assert verdicts(rs) == {vf.Verdict.CONFIRMED}
        assert all(o.conclusion is vf.Conclusion.HOLDS for o in rs)
    sl = next(o for o in records(report, "thm-B1", "N") if o.group_id == "sl2_3")
    assert "rhs=0" in sl.evidence_ref
    ok, st = cr.is_schmidt(whole(corpus["sl2_3"]))
    assert ok and not st.abelian_sylows


def test_criterion_04_theorem_B_ii_and_corollaries_4_to_7(report):
    for cid in ["thm-B2", "cor-1.4", "cor-1.5", "cor-1.6", "cor-1.7"]:
        no_counterexample(report, cid)
    assert vf.COR16_NOTE in report.text()
    assert any(l.startswith("# note\tcor-1.6") for l in report.header)


def test_criterion_05_corollaries_1_to_3(report):
    for cid in ["cor-1.1", "cor-1.2", "cor-1.3"]:
        no_counterexample(report, cid)
    sigmas = {o.formation.sigma for o in records(report, "cor-1.3")}
    assert len([s for s in sigmas if not s.is_finest]) >= 2


def test_criterion_06_k_lattice_sweep(report, corpus):
    for F in FORMATIONS:
        rs = records(report, "k-lattice", F)
        assert len(rs) == len(corpus) and verdicts(rs) == {vf.Verdict.CONFIRMED}
    forms = {str(o.formation) for o in records(report, "k-meet")}
    assert "A" in forms and any(f.startswith("piprime:") for f in forms)
    for F in forms:
        rs = records(report, "k-meet", F)
        assert len(rs) == len(corpus) and verdicts(rs) == {vf.Verdict.CONFIRMED}


def test_criterion_07_lemma_suite(report):
    for cid in vf.LEMMAS:
        rs = no_counterexample(report, cid)
        real = [o for o in rs if o.verdict is vf.Verdict.CONFIRMED
                and o.hypothesis is vf.Hypothesis.HOLDS]
        assert len(real) >= 20, (cid, len(real))


def test_criterion_08_oracle_equivalence(corpus):
    sigmas = [PrimePartition.finest(), PrimePartition.parse("2,3|*"),
              PrimePartition.parse("2|3,5|*")]
    pairs = 0
    for gid, G in corpus.items():
        if G.order > 60:
            continue
        lattice = all_subgroups(G)
        subs = [frozenset(H.elements()) for H in lattice]
        if G.order <= 24:
            assert set(subs) == oracle_all_subgroups(G), gid
        W = whole(G)
        top = frozenset(G.elements())
        for s in sigmas:
            F = fm.NILPOTENT if s.is_finest else fm.sigma_nilpotent(s)
            for H, S in zip(lattice, subs):
                assert sn.is_k_f_subnormal(H, W, F)[0] == oracle_k_f_subnormal(S, top, subs, s), \
                    (gid, str(F), H.order)
                pairs += 1
    assert pairs > 1000


def test_criterion_09_cross_procedure_identity(corpus):
    finest = fm.sigma_nilpotent(PrimePartition.finest())
    for gid, G in corpus.items():
        W = whole(G)
        for H in all_subgroups(G):
            expected = sn.is_subnormal(H, W)
            assert sn.is_k_f_subnormal(H, W, fm.NILPOTENT)[0] == expected, gid
            assert sn.is_k_f_subnormal(H, W, finest)[0] == expected, gid


def test_criterion_10_spot_values(corpus):
    S4 = whole(corpus["sym4"])
    assert len(all_subgroups(corpus["sym4"])) == 30
    F = inv.fitting(S4)
    assert F.order == 4 and inv.is_abelian(F) and S4.table.is_normal(F.mask, S4.mask)
    R = fm.residual_of(S4, fm.NILPOTENT)
    assert R.order == 12 and R == inv.derived_subgroup(S4)
    assert frattini(whole(corpus["cyc04"])).order == 2
    assert len(maximal_subgroups(S4)) == 8
    schmidt = cr.schmidt_subgroups(S4)
    assert sorted(H.order for H in schmidt) == [6, 6, 6, 6, 12]


def test_criterion_11_determinism(report):
    again = vf.run_corpus(vf.Config(force=True, jobs=1))
    wide = vf.run_corpus(vf.Config(force=True, jobs=8))
    base = vf.strip_timing(report.text())
    assert base == vf.strip_timing(again.text())
    assert base == vf.strip_timing(wide.text())
    assert any(l.startswith("# timing") for l in report.text().splitlines())
