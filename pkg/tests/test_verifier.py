import json

import pytest

from formalat import formations as fm
from formalat import verifier as vf
from formalat.corpus import builtin_entries, write_corpus
from formalat.invariants import PrimePartition
from formalat.verifier import Conclusion, Hypothesis, Verdict

SMALL = ["sym3", "alt4", "sym4", "sl2_3", "c7_c3", "alt5", "cyc06", "dic08"]


@pytest.fixture(scope="module")
def small_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("small")
    write_corpus(d, [e for e in builtin_entries() if e.id in SMALL])
    return d


def test_outcome_invariants():
    F = fm.NILPOTENT
    o = vf.make_outcome("x", "g", F, False, lambda: 1 / 0)  # never evaluated
    assert (o.hypothesis, o.conclusion, o.verdict) == (
        Hypothesis.FAILS, Conclusion.NOT_EVALUATED, Verdict.CONFIRMED)
    o = vf.make_outcome("x", "g", F, True, False, evidence={"k": 1})
    assert o.verdict is Verdict.COUNTEREXAMPLE and o.evidence == {"k": 1}
    o = vf.make_outcome("x", "g", F, None, True)
    assert o.verdict is Verdict.VACUOUS
    with pytest.raises(AssertionError):
        vf.CheckOutcome("x", "g", F, Hypothesis.FAILS, Conclusion.FAILS, Verdict.CONFIRMED)


def test_theorem_examples(grp):
    N = fm.NILPOTENT
    o = vf.check_theorem_A1(grp("sym4"), N)
    assert o.hypothesis is Hypothesis.FAILS  # the S3 subgroups are not subnormal
    o = vf.check_theorem_A2(grp("sym3"), N)
    assert o.hypothesis is Hypothesis.HOLDS and o.verdict is Verdict.CONFIRMED
    o = vf.check_theorem_A2(grp("dic08"), N)
    assert o.hypothesis is Hypothesis.HOLDS and o.evidence_ref == "schmidt=0"
    o = vf.check_theorem_A1(grp("cyc06"), N)
    assert o.verdict is Verdict.CONFIRMED


def test_theorem_B_examples(grp):
    N = fm.NILPOTENT
    assert vf.theorem_B1_sides(grp("cyc07"), N)[:2] == (True, True)
    assert vf.theorem_B1_sides(grp("sym3"), N)[:2] == (True, True)
    lhs, rhs, chain = vf.theorem_B1_sides(grp("sl2_3"), N)
    assert (lhs, rhs) == (False, False) and len(chain) == 3
    o = vf.check_theorem_B2(grp("alt5"), N)
    assert o.hypothesis is Hypothesis.FAILS
    o = vf.check_theorem_B2(grp("sym4"), N)
    assert o.verdict is Verdict.CONFIRMED


def test_corollary_examples(grp):
    o = vf.check_corollary("1.1", grp("sym3"))
    assert o.hypothesis is Hypothesis.HOLDS and o.conclusion is Conclusion.HOLDS
    o = vf.check_corollary("1.5", grp("sym3"))
    assert o.hypothesis is Hypothesis.HOLDS and o.conclusion is Conclusion.HOLDS
    o = vf.check_corollary("1.5", grp("cyc04"))
    assert o.hypothesis is Hypothesis.FAILS
    o = vf.check_corollary("1.3", grp("sym4"), sigma=PrimePartition.parse("2|3|*"))
    assert o.verdict is Verdict.CONFIRMED
    with pytest.raises(vf.ConfigError):
        vf.check_corollary("1.3", grp("sym4"))
    o = vf.check_corollary("1.7", grp("alt5"), pi=[2])
    assert o.hypothesis is Hypothesis.FAILS


def test_lemma_suite(grp):
    s = PrimePartition.parse("2|3|*")
    out = {o.check_id: o for o in vf.check_lemma_suite(grp("sym4"), fm.NILPOTENT, s)}
    assert set(out) == set(vf.LEMMAS)
    assert all(o.verdict is not Verdict.COUNTEREXAMPLE for o in out.values())
    assert out["lem-2.5"].hypothesis is Hypothesis.HOLDS
    assert out["lem-2.5"].evidence_ref == "instances=2"
    # nothing is critical inside a nilpotent group
    assert vf.lemma_2_3(grp("dic08"), fm.NILPOTENT, "q").verdict is Verdict.VACUOUS


def test_chain_avoiding(grp):
    S4 = grp("sym4")
    chain = vf.chain_avoiding(S4, set(), 3)
    assert chain is not None and len(chain) == 4
    assert vf.chain_avoiding(S4, {H.mask for H in vf.subgroups_of(S4)}, 1) is None


@pytest.mark.parametrize("kwargs,match", [
    (dict(checks=("nope",)), "unknown check"),
    (dict(checks=("cor-1.6",)), "--force"),
    (dict(checks=("thm-A1",), formations=("A",)), "flags"),
    (dict(checks=("thm-B2",), formations=("S",), force=True), "no partition"),
    (dict(formations=("Q",)), "unknown formation"),
    (dict(pis=("4",)), "prime"),
    (dict(jobs=0), "jobs"),
])
def test_config_errors(kwargs, match):
    with pytest.raises(vf.ConfigError, match=match):
        vf.plan(vf.Config(**kwargs))


def test_cor16_exclusion_note():
    p = vf.plan(vf.Config())
    assert "cor-1.6" not in p.checks and vf.COR16_EXCLUDED in p.notes
    p = vf.plan(vf.Config(force=True))
    assert "cor-1.6" in p.checks and vf.COR16_NOTE in p.notes


def test_report_determinism_and_jobs(small_dir):
    cfg = dict(corpus=str(small_dir), force=True)
    a = vf.run_corpus(vf.Config(**cfg))
    b = vf.run_corpus(vf.Config(**cfg))
    c = vf.run_corpus(vf.Config(jobs=2, **cfg))
    assert vf.strip_timing(a.text()) == vf.strip_timing(b.text()) == vf.strip_timing(c.text())
    assert a.exit_code == 0
    counts = sum(sum(c.values()) for c in a.summary.values())
    assert counts == len(a.outcomes)
    keys = [o.sort_key for o in a.outcomes]
    assert keys == sorted(keys)
    assert {o.group_id for o in a.outcomes} == set(SMALL)


def test_load_errors_are_reported(tmp_path):
    write_corpus(tmp_path, [e for e in builtin_entries() if e.id == "sym3"])
    (tmp_path / "broken.grp").write_text("degree 3\ngen (1 2)(1 3)\n")
    r = vf.run_corpus(vf.Config(corpus=str(tmp_path), checks=("x-subnormal",)))
    assert r.load_errors and r.load_errors[0][0] == "broken"
    assert "# load-error\tbroken\tline 2" in r.text()
    assert len(r.outcomes) == 1


def test_skipped_cap(monkeypatch):
    text = next(e.text for e in builtin_entries() if e.id == "alt5")
    monkeypatch.setenv("FORMALAT_CAP", "50")
    p = vf.plan(vf.Config(checks=("x-subnormal", "k-meet")))
    out, _ = vf.verify_group(p, "alt5", text)
    assert {o.verdict for o in out} == {Verdict.SKIPPED_CAP}
    assert len(out) == 1 + 3


def test_counterexample_evidence(tmp_path, grp):
    bad = vf.make_outcome("thm-A1", "sym3", fm.NILPOTENT, True, False,
                          evidence={"group": "degree 3\n", "note": "synthetic"})
    report = vf.VerificationReport(["# test"], [bad], [], {"wall": 0.0})
    assert report.exit_code == 1
    ev_dir = vf.write_report(report, tmp_path / "r.tsv")
    files = list(ev_dir.iterdir())
    assert len(files) == 1
    data = json.loads(files[0].read_text())
    assert data["check"] == "thm-A1" and data["evidence"]["note"] == "synthetic"
    line = (tmp_path / "r.tsv").read_text().splitlines()[1]
    assert line.split("\t")[5] == "COUNTEREXAMPLE" and "evidence=" in line


def test_internal_errors_surface(monkeypatch):
    def boom(*a, **k):
        raise RuntimeError("boom")
    monkeypatch.setattr(vf, "check_cross_subnormal", boom)
    p = vf.plan(vf.Config(checks=("x-subnormal",)))
    out, _ = vf.verify_group(p, "sym3", next(e.text for e in builtin_entries() if e.id == "sym3"))
    assert out[0].verdict is Verdict.COUNTEREXAMPLE
    assert out[0].evidence_ref == "internal-error:RuntimeError"
