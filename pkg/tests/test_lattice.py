import pytest

from formalat.corpus import cyclic, dihedral, symmetric
from formalat.lattice import (CapExceeded, all_subgroups, conjugates, core, frattini, join,
                              maximal_chains, maximal_subgroups, meet, normal_closure,
                              normal_subgroups, quotient, whole)
from oracles import oracle_all_subgroups


@pytest.mark.parametrize("gid,count", [("sym3", 6), ("cyc04", 3), ("sym4", 30), ("alt5", 59),
                                       ("sym5", 156), ("alt6", 501), ("q8_x_cyc2", None)])
def test_subgroup_counts(corpus, gid, count):
    L = all_subgroups(corpus[gid])
    if count is not None:
        assert len(L) == count
    assert L.bottom.order == 1 and L.top.order == corpus[gid].order


@pytest.mark.parametrize("gid", ["sym3", "cyc06", "dih08", "alt4", "dic08", "dic12"])
def test_lattice_matches_oracle(corpus, gid):
    G = corpus[gid]
    assert {frozenset(H.elements()) for H in all_subgroups(G)} == oracle_all_subgroups(G)


def test_lattice_cap(corpus):
    with pytest.raises(CapExceeded):
        all_subgroups(symmetric(4).table, cap=10)


def test_maximal_and_frattini(grp):
    S4 = grp("sym4")
    assert len(maximal_subgroups(S4)) == 8
    assert frattini(S4).order == 1
    assert frattini(grp("cyc04")).order == 2
    assert frattini(grp("dic08")).order == 2


def test_normal_subgroups(grp):
    assert [N.order for N in normal_subgroups(grp("sym4"))] == [1, 4, 12, 24]
    assert len(normal_subgroups(grp("alt5"))) == 2


def test_core_closure_join_meet(grp):
    S4 = grp("sym4")
    t = S4.table
    subs = {H.order: H for H in all_subgroups(S4.table)}
    D8 = next(H for H in all_subgroups(S4.table) if H.order == 8)
    assert core(S4, D8).order == 4
    C2 = next(H for H in all_subgroups(S4.table) if H.order == 2 and not t.is_normal(H.mask, D8.mask))
    assert normal_closure(S4, C2).order == 24
    assert len(conjugates(S4, D8)) == 3
    others = [H for H in conjugates(S4, D8) if H != D8]
    assert meet(S4, D8, others[0]).order == 4
    assert join(S4, D8, others[0]).order == 24
    assert subs[24] == S4


def test_maximal_chains(grp):
    chains = maximal_chains(grp("sym3"), 2)
    assert all(c.members[-1].order == 1 for c in chains)
    assert len(chains) == 4  # via C3 and via each of three C2


def test_quotient(grp):
    S4 = grp("sym4")
    V4 = next(N for N in normal_subgroups(S4) if N.order == 4)
    q = quotient(S4, V4)
    assert q.quotient.order == 6
    assert q.image(S4).order == 6
    assert q.preimage(whole(q.quotient)).order == 24
    with pytest.raises(ValueError):
        quotient(S4, next(H for H in all_subgroups(S4.table) if H.order == 8))


def test_family_lattices():
    assert len(all_subgroups(cyclic(12))) == 6
    assert len(all_subgroups(dihedral(8))) == 10
