import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fimod import modules as M
from fimod.fi import (cokernel_fi, direct_sum_fi, free_module, identity_fi, submodule_generated,
                      zero_fi, zero_module)
from fimod.generation import (cover, epi_iff_h0_epi, generation_degree, h0, h0_morphism, hom_basis,
                              hom_space_direct, presentation)
from fimod.rings import prime_field, rationals

from conftest import small_random

F2, F3 = prime_field(2), prime_field(3)


@pytest.mark.parametrize("d", range(4))
def test_h0_of_free(d):
    H = h0(free_module(F3, d, 0, 5))
    assert H.dim_list() == [math.factorial(d) if n == d else 0 for n in range(6)]   # the regular S_d-rep
    assert generation_degree(free_module(F3, d, 0, 5)).gen_degree == d


def test_h0_small_cases():
    assert h0(zero_module(F2, 4)).is_zero()
    assert h0(free_module(F2, 1, 0, 4)).dim_list() == [0, 1, 0, 0, 0]
    assert generation_degree(zero_module(F2, 4)).gen_degree is None


def test_quotient_killing_top_generators():
    F, _, _ = direct_sum_fi([free_module(F2, 1, 0, 5), free_module(F2, 2, 0, 5)])
    dim2 = F.levels[2].dim()
    gen2 = [0] * dim2
    gen2[2] = 1        # the identity injection of the degree-2 summand (after the two from degree 1)
    W, w = submodule_generated(F, [(2, 0, gen2)])
    V, _ = cokernel_fi(w)
    assert generation_degree(V).gen_degree == 1
    low = [(n, 0, list(col)) for n in range(2) for col in np.eye(V.levels[n].dim(), dtype=int)]
    assert submodule_generated(V, low)[0].dims() == V.dims()


def test_epi_certificates():
    V = small_random(4, "f3")
    assert epi_iff_h0_epi(identity_fi(V)) == (True, True)
    W = free_module(F3, 0, 0, V.N)
    assert epi_iff_h0_epi(zero_fi(V, W)) == (False, False)
    pi, _ = cover(V)
    assert epi_iff_h0_epi(pi) == (True, True)


@given(st.integers(0, 10**6))
def test_h0_additive(seed):
    A, B = small_random(seed, "f2"), small_random(seed + 1, "f2")
    S = direct_sum_fi([A, B])[0]
    assert h0(S).dim_list() == [x + y for x, y in zip(h0(A).dim_list(), h0(B).dim_list())]


@given(st.integers(0, 10**6))
def test_h0_preserves_cokernels(seed):
    V = small_random(seed, "f3")
    W = small_random(seed + 3, "f3")
    basis = hom_basis(V, W)
    if not basis:
        return
    f = basis[0]
    Q, _ = cokernel_fi(f)
    Hf = h0_morphism(f)
    assert h0(Q).dim_list() == [M.cokernel(m)[0].dim() for m in Hf.maps]


@given(st.integers(0, 10**6), st.sampled_from(["f2", "f5", "q", "z"]))
def test_h0_detects_zero(seed, tag):
    V = small_random(seed, tag)
    assert h0(V).is_zero() == V.is_zero()


@given(st.integers(0, 10**6), st.sampled_from(["f2", "f3", "z"]))
def test_finite_generation_certificates_agree(seed, tag):
    rep = generation_degree(small_random(seed, tag, N=5, gdeg=2))
    assert rep.gr_finitely_generated == (rep.gen_degree != "exceeds-truncation")
    assert rep.gr_finitely_generated


@given(st.integers(0, 10**6))
def test_generated_by_low_levels(seed):
    V = small_random(seed, "f3", N=5, gdeg=2)
    g = generation_degree(V).gen_degree
    if g is None:
        return
    low = [(n, 0, list(col)) for n in range(g + 1) for col in np.eye(V.levels[n].dim(), dtype=int)]
    W = submodule_generated(V, low)[0]
    assert W.dims() == V.dims()


@given(st.integers(0, 10**6), st.sampled_from(["f2", "f3"]))
def test_hom_two_routes(seed, tag):
    A, B = small_random(seed, tag, N=3), small_random(seed + 5, tag, N=3)
    assert len(hom_basis(A, B)) == len(hom_space_direct(A, B))


def test_hom_two_routes_over_q():
    A = free_module(rationals(), 1, 0, 3)
    B = free_module(rationals(), 0, 0, 3)
    assert len(hom_basis(A, B)) == len(hom_space_direct(A, B)) == 1


def test_hom_direct_sees_empty_levels():
    # a morphism from the constant module into something born at level 1 must vanish
    from fimod.corpus import atomic
    assert hom_space_direct(free_module(F3, 0, 0, 3), atomic(F3, 1, 3)) == []


def test_presentation_relations_map_to_zero():
    V = small_random(21, "f3", N=4)
    P = presentation(V)
    for n in range(V.N + 1):
        assert M.is_zero(P.cover.maps[n] @ P.relation_inclusion.maps[n])
