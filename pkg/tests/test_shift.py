import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fimod import modules as M
from fimod import shift as S
from fimod.corpus import atomic
from fimod.fi import (FIMorphism, free_element_map, free_module, identity_fi, kernel_fi, relation_failures,
                      truncate, truncate_morphism, zero_fi, zero_module, naturality_failures)
from fimod.generation import generation_degree, hom_basis
from fimod.rings import prime_field, rationals

from conftest import small_random

F2, F3 = prime_field(2), prime_field(3)


def test_shift_of_constant_and_zero():
    V = free_module(F2, 0, 0, 5)
    for a in range(4):
        W = S.shift(V, a)
        assert W.dim_list() == [1] * (6 - a)
        assert all(f == M.identity(L) for f, L in zip(W.inclusions, W.levels))
        assert S.shift(zero_module(F2, 5), a).is_zero()


def test_shift_free_one():
    W = S.shift(free_module(F2, 1, 0, 5), 1)
    # n + 1 = dim of the degree-1 free module plus the constant one
    assert W.dim_list() == [n + 1 for n in range(5)]


@pytest.mark.parametrize("d,a,n,expected", [(1, 1, 1, 2), (2, 1, 1, 2), (0, 3, 2, 1), (0, 0, 0, 1)])
def test_decomposition_values(d, a, n, expected):
    direct = sum(1 for _ in itertools.permutations(range(n + a), d))
    assert direct == expected
    assert S.shift_decomposition_sum(d, a, n) == expected
    assert S.shift_decomposition_dims(d, a, n) == expected


def test_unweighted_sum_undercounts():
    assert S.shift_decomposition_unweighted(2, 1, 1) == 1
    assert S.shift_decomposition_unweighted(1, 1, 1) == 2


@given(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4))
def test_decomposition_counts(d, a, n):
    assert S.shift_decomposition_sum(d, a, n) == (math.perm(n + a, d) if n + a >= d else 0)


def test_psi():
    V = free_module(F3, 0, 0, 4)
    assert all(M.is_iso(m) for m in S.psi(V, 2).maps)
    assert S.psi(V, 0).maps == identity_fi(V).maps
    A = atomic(F2, 0, 4)
    assert S.psi(A, 1).is_zero()


@given(st.integers(0, 10**6), st.integers(0, 2), st.integers(0, 2))
def test_shift_composes(seed, a, b):
    V = small_random(seed, "f3", N=5)
    X, Y = S.shift(S.shift(V, a), b), S.shift(V, a + b)
    assert X.levels == Y.levels and X.inclusions == Y.inclusions and X.transpositions == Y.transpositions


@given(st.integers(0, 10**6), st.integers(1, 2))
def test_shift_is_exact(seed, a):
    V = small_random(seed, "f2", N=4)
    W = small_random(seed + 7, "f2", N=4)
    basis = hom_basis(V, W)
    f = basis[0] if basis else zero_fi(V, W)
    K1, _ = kernel_fi(S.shift_morphism(f, a))
    K2 = S.shift(kernel_fi(f)[0], a)
    assert K1.dims() == K2.dims()


@given(st.integers(0, 10**6), st.integers(1, 2))
def test_shift_generation_degrees(seed, a):
    V = small_random(seed, "f3", N=5, gdeg=2)
    g = generation_degree(V).gen_degree
    gs = generation_degree(S.shift(V, a)).gen_degree
    if isinstance(g, int) and g < V.N - a:
        assert gs is None or (isinstance(gs, int) and gs <= g)
    if isinstance(gs, int) and isinstance(g, int):
        assert g <= a + gs


def test_t_adjoint_dims_formula():
    for d_mod in range(3):
        V = free_module(F2, d_mod, 0, 4)
        for a in range(3):
            T = S.t_adjoint(V, a)
            for d in range(T.N + 1):
                expect = sum(math.comb(d, j) * math.perm(a, j) * V.levels[d - j].dim()
                             for j in range(min(a, d) + 1))
                assert T.levels[d].dim() == expect
            assert relation_failures(T) == []


def test_t_adjoint_zero_is_identity():
    V = small_random(3, "f2")
    T = S.t_adjoint(V, 0)
    assert T.dims() == V.dims()
    emb, ret = S.t_adjoint_split(V, 0)
    assert all(r @ e == M.identity(L) for e, r, L in zip(emb, ret, V.levels))


@given(st.integers(0, 10**6), st.integers(1, 2))
def test_split(seed, a):
    V = small_random(seed, "f3")
    emb, ret = S.t_adjoint_split(V, a)
    assert all(r @ e == M.identity(L) for e, r, L in zip(emb, ret, V.levels))


@given(st.integers(0, 10**6), st.integers(1, 2), st.integers(0, 2))
def test_round_trips_over_f3(seed, a, d):
    rng = np.random.default_rng(seed)
    V = small_random(seed, "f3", N=5)
    A = free_module(F3, d, 0, 5)
    SA = S.shift(A, a)
    Vt = truncate(V, SA.N)
    for f in hom_basis(SA, Vt)[:2]:
        h = S.transpose(A, f, a)
        g = S.untranspose(h, f.cod, a)
        assert g.maps == truncate_morphism(f, g.N).maps
    W = free_module(F3, 1, 0, 5)
    unit = S.unit(W, a)
    assert naturality_failures(unit) == []


def test_transpose_of_zero_and_unit():
    A = free_module(F2, 1, 0, 4)
    V = free_module(F2, 0, 0, 4)
    SA = S.shift(A, 1)
    z = zero_fi(SA, truncate(V, SA.N))
    assert S.transpose(A, z, 1).is_zero()
    eta = S.transpose(A, identity_fi(SA), 1)
    assert naturality_failures(eta) == []
    assert S.untranspose(eta, SA, 1).maps == truncate_morphism(identity_fi(SA), SA.N - 1).maps


def test_transpose_from_free_is_the_element_map():
    # a morphism out of a shifted free module is classified by one element
    A = free_module(F3, 1, 0, 5)
    V = small_random(11, "f3", N=5)
    a = 1
    SA = S.shift(A, a)
    Vt = truncate(V, SA.N)
    TV = S.t_adjoint(Vt, a)
    for f in hom_basis(SA, Vt)[:3]:
        h = S.transpose(A, f, a)
        vec = h.maps[1].blocks[0][:, 0]
        direct = free_element_map(TV, 1, 0, vec)
        assert h.maps == truncate_morphism(direct, h.N).maps
