import io

import pytest

from formalat.cli import main
from formalat.corpus import builtin_entries, write_corpus


@pytest.fixture(scope="module")
def cdir(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    write_corpus(d, [e for e in builtin_entries() if e.id in ("sym3", "sym4", "cyc04")])
    return d


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_analyze(cdir):
    code, text = run("analyze", str(cdir / "sym4.grp"), "--formation", "N", "--sigma", "2|3|*")
    assert code == 0
    assert "order: 24" in text and "subgroups: 30" in text
    assert "fitting: order 4" in text and "residual: order 12" in text
    assert "sigma-soluble: True" in text


def test_subnormal_yes_and_no(cdir):
    code, text = run("subnormal", str(cdir / "sym4.grp"), "--gens", "(1 2)(3 4)")
    assert code == 0 and text.startswith("YES") and text.count("[NORMAL]") == 3
    code, text = run("subnormal", str(cdir / "sym4.grp"), "--gens", "(1 2)")
    assert code == 0 and text.startswith("NO")
    code, text = run("subnormal", str(cdir / "sym3.grp"), "--gens", "(1 2)",
                     "--formation", "Nsigma:2,3|*")
    assert "F-QUOTIENT core order 1, quotient order 6" in text


@pytest.mark.parametrize("argv", [
    ("subnormal", "{d}/sym3.grp", "--gens", "(1 4)"),
    ("subnormal", "{d}/sym4.grp", "--gens", "(1 2)", "--formation", "bogus"),
    ("analyze", "{d}/missing.grp"),
    ("verify", "--corpus", "{d}", "--checks", "cor-1.6"),
    ("verify", "--corpus", "{d}/nowhere"),
    ("verify", "--bogus-flag"),
])
def test_errors_exit_2(cdir, argv):
    assert run(*(a.format(d=cdir) for a in argv))[0] == 2


def test_bad_group_file_exit_2(tmp_path):
    (tmp_path / "g.grp").write_text("degree 3\ngen (1 2)(2 3)\n")
    assert run("analyze", str(tmp_path / "g.grp"))[0] == 2


def test_verify_writes_report(cdir, tmp_path):
    report = tmp_path / "out" / "report.tsv"
    code, _ = run("verify", "--corpus", str(cdir), "--checks", "theorems,x-subnormal",
                  "--report", str(report))
    assert code == 0
    lines = report.read_text().splitlines()
    records = [l for l in lines if not l.startswith("#")]
    assert len(records) == 3 * (4 * 3 + 1)
    assert any(l.startswith("# note\tthm-B2") for l in lines)


def test_verify_stdout_with_force(cdir):
    code, text = run("verify", "--corpus", str(cdir), "--checks", "cor-1.6", "--force",
                     "--pi", "3")
    assert code == 0
    assert "# note\tcor-1.6 uses F = piprime" in text
    assert sum(l.startswith("cor-1.6\t") for l in text.splitlines()) == 3
