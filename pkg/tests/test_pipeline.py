from fractions import Fraction

import mpmath
import numpy as np
import pytest

from slicevc.constants import mu_of, theoretical_constants
from slicevc.core import TripartiteThreeGraph
from slicevc.harness.generators import gen_class_based, gen_class_based_general, gen_slice_template
from slicevc.pipeline import (
    RunLog,
    WorkingParams,
    group_slices,
    mainslice_partition,
    slice_reduce,
    slvc_partition,
    slvccor_partition,
)

COARSE = WorkingParams(k=4, eps_slice=Fraction(1, 5), eps_working=Fraction(1, 20), delta_cover=Fraction(1, 4), delta_pack=Fraction(1, 5))


# --- parameters and run log -----------------------------------------------------------


def test_working_params_validation():
    assert WorkingParams().eps_slice == Fraction(1, 20)
    assert WorkingParams(eps_working="1/8").eps_working == Fraction(1, 8)
    for bad in ({"eps_slice": 0}, {"delta_cover": 1}, {"eps_working": Fraction(3, 2)}, {"k": 0}):
        with pytest.raises(ValueError):
            WorkingParams(**bad)
    assert WorkingParams(size_caps=(("slice", 7),)).cap("slice") == 7
    assert WorkingParams().cap("slice") is None


def test_runlog_rows():
    rl = RunLog(strict=False)
    assert rl.add("I", "bound", Fraction(1, 4), True, formula=Fraction(1, 2)) is True
    assert rl.add("II", "other", 3, False) is False
    assert rl.rows[0] == ("I", "bound", "n/a", "0.25", True)
    assert rl.failures == [("II", "other", "n/a", "3", False)]
    strict = RunLog(strict=True)
    strict.add("I", "bound", Fraction(1, 4), True, formula=Fraction(1, 2))
    assert strict.rows[0][2] == "0.5"
    rl.extend(strict, "x:")
    assert rl.rows[-1][0] == "x:I"


# --- slice reduction ------------------------------------------------------------------


def test_slice_reduce_zero_noise_agrees_with_slice():
    cb = gen_class_based(60, 2, 0, seed=0)
    H = cb.graph
    for x in (0, 17, 59):
        red = slice_reduce(H, x, Fraction(1, 5))
        assert (red.F[0] == 2).all() and (red.F[:, 0] == 2).all()
        assert red.irregular == 0 and red.audit_fraction == 1
        E = red.F[red.labels_V[:, None], red.labels_W[None, :]]
        T = H.tensor[x]
        assert ((E == 1) <= T).all() and ((E == 0) <= ~T).all()
        assert (E != 2).sum() == (red.labels_V > 0).sum() * (red.labels_W > 0).sum()


def test_slice_reduce_rejects_bad_vertex():
    with pytest.raises(ValueError):
        slice_reduce(gen_class_based(6, 1, 0).graph, 6, Fraction(1, 5))


def test_slice_reduce_same_class_same_key():
    cb = gen_class_based(60, 2, 0, seed=3)
    lab = cb.classes[0]
    keys = {}
    for x in range(60):
        keys.setdefault(lab[x], set()).add(slice_reduce(cb.graph, x, Fraction(1, 5)).key())
    assert all(len(v) == 1 for v in keys.values())


@pytest.mark.parametrize("d", [1, 2, 3])
def test_group_slices_templates(d):
    st = gen_slice_template(60, d, 0, seed=1, c=2)
    grp = group_slices(st.graph, Fraction(1, 5))
    # vertices sharing a template share a class
    labU = st.classes[0]
    for t in range(d):
        assert sum(1 for m in grp.classes if any(labU[x] == t for x in m)) == 1
    assert len(grp.classes) <= d
    if d == 1:
        assert len(grp.classes) == 1
    assert sorted(x for m in grp.classes for x in m) == list(range(60))
    assert grp.error_classes == [] and grp.U_err == []


def test_group_slices_threads_agree():
    cb = gen_class_based(45, 3, Fraction(1, 100), seed=2)
    a = group_slices(cb.graph, Fraction(1, 5), threads=1)
    b = group_slices(cb.graph, Fraction(1, 5), threads=4)
    assert a.classes == b.classes and a.U_err == b.U_err


def test_mainslice_zero_noise_class():
    cb = gen_class_based(60, 2, 0, seed=0)
    grp = group_slices(cb.graph, COARSE.eps_slice)
    members = grp.good_classes[0]
    sub = cb.graph.restrict([members, range(60), range(60)])
    ms = mainslice_partition(sub, [grp.reductions[x] for x in members], COARSE)
    assert ms.audit.is_good and ms.audit.achieved_eps == 0
    # zero noise: every block lies inside one planted V-class
    assert all(len(set(cb.classes[1][list(b)])) == 1 for b in ms.P_V.blocks)
    with pytest.raises(ValueError):
        mainslice_partition(sub, [grp.reductions[x] for x in members[:-1]], COARSE)


# --- end to end -----------------------------------------------------------------------


@pytest.mark.parametrize("val", [False, True])
def test_slvc_constant_graph_is_trivial(val):
    H = TripartiteThreeGraph(np.full((6, 6, 6), val))
    res = slvc_partition(H)
    assert res.fraction == 1
    assert all(len(P) == 1 for P in res.sides.values())


@pytest.mark.parametrize("n,d", [(30, 2), (48, 3)])
def test_slvc_small_class_based(n, d):
    cb = gen_class_based(n, d, 0, seed=1)
    res = slvc_partition(cb.graph, COARSE)
    assert res.fraction == 1 and res.report.working.passes
    assert set(res.sides) == {"U", "V", "W"}
    assert len(res.partition.support) == 3 * n
    for i, nm in enumerate("UVW"):
        P = res.sides[nm]
        assert all(len(set(cb.classes[i][list(b)])) == 1 for b in P.blocks)


def test_slvc_rejects_unequal_or_empty():
    with pytest.raises(ValueError):
        slvc_partition(TripartiteThreeGraph(np.zeros((3, 4, 3), bool)))
    with pytest.raises(ValueError):
        slvc_partition(TripartiteThreeGraph(np.zeros((0, 0, 0), bool)))


def test_slvc_strict_reports_constants():
    cb = gen_class_based(12, 1, 0, seed=0)
    res = slvc_partition(cb.graph, WorkingParams(strict_mode=True), tau=Fraction(1, 10))
    assert res.constants is not None and res.constants.D == 8
    assert any(r[2] != "n/a" for r in res.runlog.rows)


def test_slvccor_small():
    H, lab = gen_class_based_general(120, 2, 0, seed=0)
    params = WorkingParams(k=4, eps_slice=Fraction(1, 3), eps_working=Fraction(1, 20), delta_cover=Fraction(1, 4), delta_pack=Fraction(1, 5))
    res = slvccor_partition(H, params)
    n = 120
    assert res.diagonal_mass == n**3 - n * (n - 1) * (n - 2)
    assert res.tripartite_audit.extra["cross_good_mass"] == res.audit.good_mass
    assert abs(res.fraction - res.tripartite.fraction) <= Fraction(res.diagonal_mass, n**3)
    assert res.fraction == 1


# --- constants ------------------------------------------------------------------------


def test_constants_spot_values():
    c = theoretical_constants(3, Fraction(1, 2))
    assert c.D == 8 and c.K1 == 8
    assert theoretical_constants(1, Fraction(1, 2)).c4 == 12800000
    with mpmath.workdps(50):
        assert mu_of(mpmath.mpf(2) ** -64, 1, 1) == 8
    with pytest.raises(ValueError):
        theoretical_constants(0, Fraction(1, 2))
    with pytest.raises(ValueError):
        theoretical_constants(2, 1)
