"""The shift functor S^a, the natural map psi_a, and the right adjoint T^a.

S^a V at level n is V at level n + a; the adjoined points are n+1..n+a, so
the inclusion of S^a V at level n is V applied to the injection [n+a] -> [n+a+1]
fixing 1..n and moving n+1..n+a up by one.

T^a V at level d is a direct sum of blocks indexed by pairs (A, psi) with
A a subset of [d] and psi: A -> [a] injective; block (A, psi) is a copy of
V at level d - |A| (the complement of A relabeled in order).  A block is the
value of a morphism S^a(free on [d]) -> V on the summand of injections
[d] -> [n] + [a] that send exactly A into [a], via psi.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

from . import modules as M
from .errors import TruncationExceeded
from .fi import FIMorphism, Injection, TruncatedFIModule, restricted_injection, truncate


def shift(V: TruncatedFIModule, a: int) -> TruncatedFIModule:
    if a < 0:
        raise ValueError("shift amount must be non-negative")
    if a > V.N:
        raise TruncationExceeded(f"shift by {a} exceeds truncation {V.N}", needed=a, truncation=V.N)
    N = V.N - a
    if a == 0:
        return V
    trans = [[V.t(n + a, i) for i in range(1, n)] for n in range(N + 1)]
    # [n] + [a] -> [n+1] + [a]: fix [n], move each new point up by one
    incl = [V.evaluate(Injection(n + a, n + a + 1, tuple(range(1, n + 1)) + tuple(range(n + 2, n + a + 2))))
            for n in range(N)]
    return TruncatedFIModule(V.coeff, N, V.levels[a:], incl, trans, check=False)


def shift_morphism(f: FIMorphism, a: int) -> FIMorphism:
    return FIMorphism(shift(f.dom, a), shift(f.cod, a), f.maps[a:], check=False)


def psi(V: TruncatedFIModule, a: int) -> FIMorphism:
    """V -> S^a V given by the standard inclusions [n] -> [n+a]; both truncated at N - a."""
    S = shift(V, a)
    return FIMorphism(truncate(V, S.N), S, [V.chain(n, n + a) for n in range(S.N + 1)], check=False)


def falling(x: int, k: int) -> int:
    return math.perm(x, k) if 0 <= k <= x else 0


def shift_decomposition_dims(d: int, a: int, n: int) -> int:
    """dim S^a(free on [d])(n) by direct count of injections [d] -> [n+a]."""
    return falling(n + a, d)


def shift_decomposition_sum(d: int, a: int, n: int) -> int:
    """Summand count: which j of the d points land among the a new points."""
    return sum(math.comb(d, j) * falling(a, j) * falling(n, d - j) for j in range(min(a, d) + 1))


def shift_decomposition_unweighted(d: int, a: int, n: int) -> int:
    """The same sum without the binomial multiplicity (kept for comparison)."""
    return sum(falling(a, j) * falling(n, d - j) for j in range(min(a, d) + 1))


@lru_cache(maxsize=None)
def t_blocks(d: int, a: int):
    """Block labels (A, psi) of T^a at level d, in storage order."""
    out = []
    for j in range(min(a, d) + 1):
        for A in itertools.combinations(range(1, d + 1), j):
            for p in itertools.permutations(range(1, a + 1), j):
                out.append((A, p))
    return tuple(out)


def _t_structure_map(V: TruncatedFIModule, a: int, g: Injection, src, dst):
    d, d2 = g.m, g.n
    sb, db = t_blocks(d, a), t_blocks(d2, a)
    sidx = {b: k for k, b in enumerate(sb)}
    entries = {}
    for k2, (A2, p2) in enumerate(db):
        pos = {x: p2[k] for k, x in enumerate(A2)}
        A = tuple(x for x in range(1, d + 1) if g(x) in pos)
        p = tuple(pos[g(x)] for x in A)
        entries[(k2, sidx[(A, p)])] = V.evaluate(restricted_injection(g, A, A2))
    return M.block_map(src, dst, [V.levels[d - len(A)] for A, _ in sb],
                       [V.levels[d2 - len(A)] for A, _ in db], entries)


def t_adjoint(V: TruncatedFIModule, a: int) -> TruncatedFIModule:
    """T^a V, same truncation as V."""
    if a < 0:
        raise ValueError("a must be non-negative")
    if a == 0:
        return V
    N = V.N
    levels = [M.direct_sum([V.levels[d - len(A)] for A, _ in t_blocks(d, a)], V.coeff)[0]
              for d in range(N + 1)]
    incl = [_t_structure_map(V, a, Injection.standard(d, d + 1), levels[d], levels[d + 1]) for d in range(N)]
    trans = []
    for d in range(N + 1):
        ts = []
        for i in range(1, d):
            imgs = list(range(1, d + 1))
            imgs[i - 1], imgs[i] = i + 1, i
            ts.append(_t_structure_map(V, a, Injection(d, d, tuple(imgs)), levels[d], levels[d]))
        trans.append(ts)
    return TruncatedFIModule(V.coeff, N, levels, incl, trans, check=False)


def t_adjoint_morphism(f: FIMorphism, a: int, dom=None, cod=None) -> FIMorphism:
    """T^a f, acting blockwise."""
    if a == 0:
        return f
    dom = dom or t_adjoint(f.dom, a)
    cod = cod or t_adjoint(f.cod, a)
    maps = []
    for d in range(f.N + 1):
        blocks = t_blocks(d, a)
        maps.append(M.block_map(dom.levels[d], cod.levels[d],
                                [f.dom.levels[d - len(A)] for A, _ in blocks],
                                [f.cod.levels[d - len(A)] for A, _ in blocks],
                                {(k, k): f.maps[d - len(A)] for k, (A, _) in enumerate(blocks)}))
    return FIMorphism(dom, cod, maps, check=False)


def t_adjoint_split(V: TruncatedFIModule, a: int, TV=None):
    """Per level d the split embedding V_d -> (T^a V)_d onto the block A = {}
    and its retraction."""
    TV = TV or t_adjoint(V, a)
    emb, ret = [], []
    for d in range(V.N + 1):
        blocks = t_blocks(d, a)
        S, injs, projs = M.direct_sum([V.levels[d - len(A)] for A, _ in blocks], V.coeff)
        emb.append(M.ModMap(V.levels[d], TV.levels[d], injs[0].blocks, check=False))
        ret.append(M.ModMap(TV.levels[d], V.levels[d], projs[0].blocks, check=False))
    return emb, ret


def _unit_injection(d, A, p, a):
    """[d] -> [d - |A| + a]: complement of A in order, then A onto the new points via p."""
    j = len(A)
    pos = dict(zip(A, p))
    C = [x for x in range(1, d + 1) if x not in pos]
    rank = {x: k + 1 for k, x in enumerate(C)}
    return Injection(d, d - j + a, tuple(d - j + pos[x] if x in pos else rank[x] for x in range(1, d + 1)))


def unit(A: TruncatedFIModule, a: int, TSA=None) -> FIMorphism:
    """A -> T^a S^a A, truncated at A.N - a."""
    SA = shift(A, a)
    TSA = TSA or t_adjoint(SA, a)
    maps = []
    for d in range(SA.N + 1):
        blocks = t_blocks(d, a)
        pieces = [A.evaluate(_unit_injection(d, B, p, a)) for B, p in blocks]
        maps.append(M.vstack_maps(pieces, TSA.levels[d]) if pieces else M.zero_map(A.levels[d], TSA.levels[d]))
    return FIMorphism(truncate(A, SA.N), TSA, maps, check=False)


def counit(V: TruncatedFIModule, a: int, TV=None) -> FIMorphism:
    """S^a T^a V -> V, truncated at V.N - a: projection onto the block
    A = {n+1..n+a}, psi = identity."""
    TV = TV or t_adjoint(V, a)
    STV = shift(TV, a)
    maps = []
    for n in range(STV.N + 1):
        d = n + a
        blocks = t_blocks(d, a)
        key = (tuple(range(n + 1, d + 1)), tuple(range(1, a + 1)))
        k = blocks.index(key)
        _, _, projs = M.direct_sum([V.levels[d - len(B)] for B, _ in blocks], V.coeff)
        maps.append(M.ModMap(STV.levels[n], V.levels[n], projs[k].blocks, check=False))
    return FIMorphism(STV, truncate(V, STV.N), maps, check=False)


def transpose(A: TruncatedFIModule, f: FIMorphism, a: int) -> FIMorphism:
    """For f: S^a A -> V (truncation A.N - a), the adjoint A -> T^a V."""
    if f.dom.N != A.N - a or f.dom.levels != A.levels[a:]:
        raise ValueError("f must start at the a-fold shift of A")
    eta = unit(A, a)
    Tf = t_adjoint_morphism(f, a, dom=eta.cod)
    return FIMorphism(eta.dom, Tf.cod, [y @ x for x, y in zip(eta.maps, Tf.maps)], check=False)


def untranspose(h: FIMorphism, V: TruncatedFIModule, a: int) -> FIMorphism:
    """For h: A -> T^a V, the adjoint S^a A -> V (truncation h.N - a)."""
    eps = counit(V, a, h.cod)
    Sh = shift_morphism(h, a)
    return FIMorphism(Sh.dom, eps.cod, [y @ x for x, y in zip(Sh.maps, eps.maps)], check=False)


def shift_t_iso_blocks(d: int, k: int):
    """Relabeling of blocks of T^k(T^1 W) at level d as blocks of T^{k+1} W.

    A block of the outer T^k is (A, psi); inside it, the T^1 block (B, beta)
    lives on the relabeled complement of A.  The composite label is
    C = A + B', gamma = 1 on B' and psi + 1 on A."""
    out = {}
    for A, p in t_blocks(d, k):
        comp = [x for x in range(1, d + 1) if x not in A]
        for B, b in t_blocks(d - len(A), 1):
            Bp = tuple(comp[x - 1] for x in B)
            gamma = {x: v + 1 for x, v in zip(A, p)}
            gamma.update({x: 1 for x in Bp})
            C = tuple(sorted(gamma))
            out[((A, p), (B, b))] = (C, tuple(gamma[x] for x in C))
    return out
