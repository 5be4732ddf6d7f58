import pytest

from formalat import formations as fm
from formalat import subnormality as sn
from formalat.invariants import PrimePartition
from formalat.lattice import all_subgroups, subgroup_from_gens
from formalat.perm import Perm


def sub(G, *cycles):
    return subgroup_from_gens(G, [Perm.parse(c, G.table.elems[0].degree) for c in cycles])


def test_basic_subnormality(grp):
    S4 = grp("sym4")
    assert not sn.is_subnormal(sub(S4, "(1 2)"), S4)
    assert sn.is_subnormal(sub(S4, "(1 2)(3 4)"), S4)
    assert sn.is_subnormal(S4, S4)


def test_k_n_subnormal_set_of_sym4(grp):
    orders = [H.order for H in sn.k_f_subnormal_set(grp("sym4"), fm.NILPOTENT)]
    assert orders == [1, 2, 2, 2, 4, 12, 24]


def test_witness_chain(grp):
    S4 = grp("sym4")
    ok, chain = sn.is_k_f_subnormal(sub(S4, "(1 2)(3 4)"), S4, fm.NILPOTENT)
    assert ok and [H.order for H in chain.members] == [2, 4, 12, 24]
    assert set(chain.steps) == {sn.Step.NORMAL_STEP}
    assert sn.validate_chain(chain, fm.NILPOTENT)


def test_sigma_step(grp):
    S3 = grp("sym3")
    s = PrimePartition.parse("2,3|*")
    A = sub(S3, "(1 2)")
    ok, chain = sn.is_k_f_subnormal(A, S3, fm.sigma_nilpotent(s))
    assert ok and chain.steps == (sn.Step.F_QUOTIENT_STEP,)
    assert sn.is_sigma_subnormal_primary(A, S3, s)
    assert not sn.is_sigma_subnormal(A, S3, PrimePartition.finest())


def test_f_only_variant(grp):
    S3 = grp("sym3")
    C3 = sub(S3, "(1 2 3)")
    assert sn.is_k_f_subnormal(C3, S3, fm.NILPOTENT)[0]
    assert sn.is_f_subnormal(C3, S3, fm.NILPOTENT)  # S3/C3 is nilpotent
    assert sn.is_f_subnormal(sub(S3, "()"), S3, fm.ABELIAN)  # 1 < C3 < S3
    A5 = grp("alt5")
    assert not sn.is_f_subnormal(sub(A5, "()"), A5, fm.ABELIAN)


def test_rejects_non_subgroup(grp):
    with pytest.raises(ValueError):
        sn.is_k_f_subnormal(grp("sym4"), grp("sym3"), fm.NILPOTENT)


@pytest.mark.parametrize("gid", ["sym4", "alt5", "sl2_3", "dih12", "c5c5_c3"])
def test_every_witness_chain_validates(grp, gid):
    G = grp(gid)
    for F in [fm.NILPOTENT, fm.sigma_nilpotent("2,3|*"), fm.ABELIAN]:
        for H in all_subgroups(G.table):
            ok, chain = sn.is_k_f_subnormal(H, G, F)
            if ok:
                assert chain.members[0] == H and chain.members[-1] == G
                assert sn.validate_chain(chain, F)


def test_nilpotent_groups_have_all_subgroups_subnormal(corpus):
    from formalat.invariants import is_nilpotent
    from formalat.lattice import whole
    for gid, G in corpus.items():
        W = whole(G)
        if G.order <= 64 and is_nilpotent(W):
            assert all(sn.is_subnormal(H, W) for H in all_subgroups(W.table)), gid


def test_k_lattice(grp):
    assert sn.k_lattice_check(grp("sym4"), fm.NILPOTENT) == (True, None)
    assert sn.k_lattice_check(grp("alt5"), fm.sigma_nilpotent("2,3|*"))[0]
    assert sn.k_lattice_check(grp("sym4"), fm.ABELIAN, meet_only=True)[0]
