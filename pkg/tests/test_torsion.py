import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fimod import modules as M
from fimod import shift as S
from fimod import torsion as T
from fimod.checks import _box, _element_in_theory, random_ses
from fimod.corpus import DISCRETE, atomic, mixed_z, twisted_z
from fimod.errors import CapabilityError, TruncationExceeded, ValidationError
from fimod.fi import (FIMorphism, direct_sum_fi, free_module, identity_fi, naturality_failures,
                      relation_failures, submodule_generated, sub_fi)
from fimod.generation import hom_basis
from fimod.rings import integers, prime_field

from conftest import small_random

F2, Z = prime_field(2), integers()
ZT = T.IntegerTorsion(Z)


def test_trivial_theories():
    V = small_random(5, "f2")
    assert T.radical_levelwise(V, T.ZeroTheory(F2))[0].is_zero()
    assert T.radical_levelwise(V, T.FullTheory(F2))[0].dims() == V.dims()
    # for the zero theory the radical is the eventually vanishing part
    assert T.torsion_subobject(free_module(F2, 1, 0, 4), T.ZeroTheory(F2)).sub.is_zero()
    assert T.torsion_subobject(atomic(F2, 0, 4), T.ZeroTheory(F2)).sub.dim_list() == [1, 0, 0, 0, 0]
    assert T.torsion_subobject(V, T.FullTheory(F2)).sub.dims() == V.dims()
    assert T.membership_overline_T(V, T.FullTheory(F2))


def test_levelwise_torsion_of_mixed_tower():
    ts = T.torsion_subobject(mixed_z(5), ZT)
    assert ts.stabilized_at == 0
    assert all(M.invariants(L) == (((2,), 0),) for L in ts.sub.levels)
    W, _ = T.radical_levelwise(mixed_z(5), ZT)
    assert all(M.invariants(L) == (((2,), 0),) for L in W.levels)


def test_constant_z_has_no_torsion():
    V = free_module(Z, 0, 0, 5)
    assert T.torsion_subobject(V, ZT).sub.is_zero()
    assert not T.membership_overline_T(V, ZT)


def test_atomic_z_is_eventually_torsion():
    V = atomic(Z, 0, 5)
    ts = T.torsion_subobject(V, ZT)
    assert ts.sub.dim_list() == V.dim_list()
    assert T.radical_levelwise(V, ZT)[0].is_zero()
    assert T.membership_overline_T(V, ZT)


def test_twisted_tower():
    # (x, y) -> (x, x + y): the Z/2 summand is a subfunctor, nothing more is eventually torsion
    ts = T.torsion_subobject(twisted_z(5), ZT)
    assert all(M.invariants(L) == (((2,), 0),) for L in ts.sub.levels)


def test_filtration_trivial():
    V = free_module(F2, 0, 0, 4)
    assert T.filtration_F(V, T.ZeroTheory(F2), 1)[0].is_zero()
    assert T.filtration_F(V, T.FullTheory(F2), 2)[0].dims() == V.dims()


@pytest.mark.parametrize("V", [mixed_z(4), twisted_z(4), atomic(Z, 0, 4)], ids=["mixed", "twisted", "atomic"])
@pytest.mark.parametrize("tau", [ZT, T.PrimaryTorsion(Z, 2), T.PrimaryTorsion(Z, 3)], ids=lambda t: t.name)
@pytest.mark.parametrize("n", range(4))
def test_filtration_matches_enumeration(V, tau, n):
    F, incl = T.filtration_F(V, tau, n)
    one = M.ModObj(Z, [(0,)])
    for d in range(V.N + 1):
        for vec in _box(V.levels[d]):
            col = M.ModMap(one, V.levels[d], [np.array(vec, dtype=object).reshape(-1, 1)])
            expected = all(_element_in_theory(tau, V.levels[m], (V.chain(d, m) @ col).blocks[0][:, 0])
                           for m in range(max(n, d), V.N + 1))
            assert M.contains(incl.maps[d], col) == expected, (d, vec)


@given(st.integers(0, 10**6), st.integers(0, 3))
def test_filtration_increases(seed, n):
    V = small_random(seed, "z", N=4, gdeg=1)
    a, ia = T.filtration_F(V, ZT, n)
    b, ib = T.filtration_F(V, ZT, n + 1)
    assert all(M.contains(y, x) for x, y in zip(ia.maps, ib.maps))
    assert all(ZT.membership(a.levels[m]) for m in range(n, V.N + 1))


def test_envelopes():
    V = small_random(8, "f2")
    E, u = T.envelope_fi(V, T.ZeroTheory(F2))
    assert E.dims() == V.dims() and all(M.is_iso(m) for m in u.maps)
    E, u = T.envelope_fi(V, T.FullTheory(F2))
    assert E.is_zero()
    W = direct_sum_fi([free_module(DISCRETE, 1, "r1", 4), free_module(DISCRETE, 1, "r2", 4)])[0]
    E, u = T.envelope_fi(W, T.SupportTheory(DISCRETE, ["r1"]))
    assert [L.dims() for L in E.levels] == [(0, n) for n in range(5)]
    assert naturality_failures(u) == []
    with pytest.raises(CapabilityError):
        T.envelope_fi(mixed_z(3), ZT)


@pytest.mark.parametrize("a", [1, 2])
def test_envelope_commutes_with_shift(a):
    tau = T.SupportTheory(DISCRETE, ["r2"])
    V = direct_sum_fi([free_module(DISCRETE, 0, "r1", 4), free_module(DISCRETE, 1, "r2", 4)])[0]
    E1 = T.envelope_fi(S.shift(V, a), tau)[0]
    E2 = S.shift(T.envelope_fi(V, tau)[0], a)
    assert E1.levels == E2.levels and E1.inclusions == E2.inclusions
    assert E1.transpositions == E2.transpositions


def test_closedness():
    tau = T.SupportTheory(DISCRETE, ["r1"])
    V = direct_sum_fi([free_module(DISCRETE, 0, "r1", 4), free_module(DISCRETE, 1, "r2", 4)])[0]
    E, _ = T.envelope_fi(V, tau)
    assert T.is_closed(E, tau, "T-hat-a", 0, trials=15, seed=1).passed
    L = small_random(3, "f2")
    assert T.hom_map_bijective(identity_fi(L), L)[0]


def test_closedness_counterexample():
    # the atomic module into two copies of itself: the cokernel is atomic, hence eventually zero
    L = atomic(F2, 0, 3)
    B, injs, _ = direct_sum_fi([L, L])
    ok, hb, ha, _ = T.hom_map_bijective(injs[0], L)
    assert not ok and (hb, ha) == (2, 1)
    v = T.is_closed(L, T.ZeroTheory(F2), sampler=lambda: injs[0], trials=3)
    assert not v.passed and v.counterexample["homB"] == 2
    with pytest.raises(CapabilityError):
        T.is_closed(mixed_z(3), ZT)


def test_l_stages():
    V = free_module(F2, 0, 0, 4)
    zero = T.ZeroTheory(F2)
    st0 = T.l_stage(V, zero, 0)
    assert st0.L.dims() == V.dims() and all(M.is_iso(m) for m in st0.l.maps)
    st1 = T.l_stage(V, zero, 1)
    assert st1.L.dim_list() == [sum(math.comb(d, j) * math.perm(1, j) for j in range(min(1, d) + 1))
                                for d in range(4)]
    rep = T.l_truncated(V, T.FullTheory(F2), 2)
    assert all(all(x == [0] for x in row if x is not None) for row in rep["trajectories"])
    assert rep["stabilizedAt"] == 0


def test_l_trajectory_atomic():
    rep = T.l_truncated(atomic(F2, 0, 4), T.ZeroTheory(F2), 2)
    assert rep["triangle"]
    # level 0 of T^k S^k V is V_k
    assert rep["trajectories"][0] == [[1], [0], [0]]
    assert rep["consecutiveIso"] == [False, True] and rep["stabilizedAt"] == 1


def test_l_support_stages():
    tau = T.SupportTheory(DISCRETE, ["r1"])
    V = direct_sum_fi([free_module(DISCRETE, 0, "r1", 4), free_module(DISCRETE, 0, "r2", 4)])[0]
    rep = T.l_truncated(V, tau, 2)
    assert rep["triangle"]
    # the r1 components are killed at every stage; the r2 ones follow the T^k S^k count
    for d, row in enumerate(rep["trajectories"]):
        for k, x in enumerate(row):
            if x is not None:
                assert x == [0, sum(math.comb(d, j) * math.perm(k, j) for j in range(min(k, d) + 1))]
    only_r1 = T.l_truncated(free_module(DISCRETE, 1, "r1", 4), tau, 2)
    assert only_r1["stabilizedAt"] == 0


@given(st.integers(0, 10**6), st.sampled_from(["zero", "support:r1", "support:r2"]))
def test_l_triangle_random(seed, theory):
    from fimod.fi import random_fg_module
    V = random_fg_module(seed, DISCRETE, 4, 1, 2)
    assert T.l_truncated(V, T.parse_theory(theory, DISCRETE), 2)["triangle"]


@given(st.integers(0, 10**6), st.sampled_from(["ztorsion", "p-primary:2"]))
def test_radical_laws(seed, theory):
    tau = T.parse_theory(theory, Z)
    V = small_random(seed, "z", N=4, gdeg=1)
    try:
        ts = T.torsion_subobject(V, tau)
    except TruncationExceeded:
        return
    W, w = ts.sub, ts.inclusion
    assert relation_failures(W) == [] and naturality_failures(w) == []
    try:
        again = T.torsion_subobject(W, tau)
    except TruncationExceeded:
        return
    assert again.sub.dims() == W.dims()
    # hereditary: the radical of a subobject is its intersection with the radical
    rng = np.random.default_rng(seed)
    n = int(rng.integers(0, V.N + 1))
    if V.levels[n].dim():
        U, u = submodule_generated(V, [(n, 0, [int(x) for x in rng.integers(-2, 3, V.levels[n].dim())])])
        try:
            tu = T.torsion_subobject(U, tau)
        except TruncationExceeded:
            return
        for k in range(V.N + 1):
            _, a, _ = M.pullback(u.maps[k], w.maps[k])
            inter = u.maps[k] @ a
            mine = u.maps[k] @ tu.inclusion.maps[k]
            assert M.contains(inter, mine) and M.contains(mine, inter)


@given(st.integers(0, 10**6))
def test_radical_is_functorial(seed):
    tau = T.SupportTheory(DISCRETE, ["r1"])
    from fimod.fi import random_fg_module
    V = random_fg_module(seed, DISCRETE, 3, 1, 2)
    W = random_fg_module(seed + 1, DISCRETE, 3, 1, 2)
    tv, tw = T.torsion_subobject(V, tau), T.torsion_subobject(W, tau)
    for f in hom_basis(V, W)[:3]:
        for n in range(V.N + 1):
            assert M.contains(tw.inclusion.maps[n], f.maps[n] @ tv.inclusion.maps[n])


@given(st.integers(0, 10**6), st.sampled_from(["zero", "full", "support:r1"]))
def test_closure_laws(seed, theory):
    coeff = DISCRETE if theory.startswith("support") else F2
    tau = T.parse_theory(theory, coeff)
    W, V, Q = random_ses(coeff, np.random.default_rng(seed))
    try:
        mw, mv, mq = (T.membership_overline_T(X, tau) for X in (W, V, Q))
    except TruncationExceeded:
        return
    assert mv == (mw and mq)


def test_theory_registry():
    assert T.parse_theory("p-primary:3", Z).name == "p-primary:3"
    for bad in ("nonsense", "p-primary:x", "support:r9"):
        with pytest.raises((ValidationError, CapabilityError)):
            T.parse_theory(bad, DISCRETE)
