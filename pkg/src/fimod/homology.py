"""The complexes B^-a and B~^-a, the homology functors H_a, and stable ranges.

Level n of B~^-a(V) is a sum of copies of V at level n - a, one block for each
removed set A of size a in [n] (lexicographic order); the block carries V of
the complement of A, relabeled in order.  The differential drops one point
x_j of A = {x_1 < ... < x_a} with sign (-1)^j.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import modules as M
from .errors import TruncationExceeded, ValidationError
from .fi import (FIMorphism, Injection, TruncatedFIModule, cokernel_fi, descend_fi, identity_fi,
                 kernel_fi, lift_fi, quotient_fi, restricted_injection)
from .generation import h0_with_projection
from .modules import ModMap, ModObj
from .shift import psi


def _sort_sign(seq):
    """Sign of the permutation sorting ``seq`` (distinct entries)."""
    inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return -1 if inv % 2 else 1


def _block_module(V: TruncatedFIModule, labels, act) -> TruncatedFIModule:
    """An FI-module whose level n is a sum of blocks V_{deg}, one per label.

    ``labels(n)`` lists (label, degree); ``act(g, label)`` returns
    (target label, sign, injection between degrees) for a structure injection g."""
    N = V.N
    lab = [labels(n) for n in range(N + 1)]
    pieces = [[V.levels[d] for _, d in ls] for ls in lab]
    levels = [M.direct_sum(p, V.coeff)[0] for p in pieces]
    index = [{L: k for k, (L, _) in enumerate(ls)} for ls in lab]

    def structure(g: Injection):
        n, n2 = g.m, g.n
        entries = {}
        for k, (L, _) in enumerate(lab[n]):
            L2, sign, h = act(g, L)
            f = V.evaluate(h)
            entries[(index[n2][L2], k)] = f if sign == 1 else M.neg(f)
        return M.block_map(levels[n], levels[n2], pieces[n], pieces[n2], entries)

    incl = [structure(Injection.standard(n, n + 1)) for n in range(N)]
    trans = []
    for n in range(N + 1):
        ts = []
        for i in range(1, n):
            imgs = list(range(1, n + 1))
            imgs[i - 1], imgs[i] = i + 1, i
            ts.append(structure(Injection(n, n, tuple(imgs))))
        trans.append(ts)
    return TruncatedFIModule(V.coeff, N, levels, incl, trans, check=False)


def _require(cond, msg, needed=None, truncation=None):
    if not cond:
        raise TruncationExceeded(msg, needed=needed, truncation=truncation)


# ------------------------------------------------------------------ B^-a

def b_term(V: TruncatedFIModule, a: int) -> TruncatedFIModule:
    """Level n: one block V([n] - phi[a]) for each injection phi: [a] -> [n]."""
    _require(0 <= a <= V.N, f"B^-{a} needs a <= {V.N}", a, V.N)
    if a == 0:
        return V

    def labels(n):
        return [(phi, n - a) for phi in itertools.permutations(range(1, n + 1), a)]

    def act(g, phi):
        img = tuple(g(x) for x in phi)
        return img, 1, restricted_injection(g, phi, img)

    return _block_module(V, labels, act)


# ------------------------------------------------------------------ B~^-a

def btilde_term(V: TruncatedFIModule, a: int) -> TruncatedFIModule:
    """Level n: one block per removed set A of size a (signed action)."""
    _require(0 <= a <= V.N, f"B~^-{a} needs a <= {V.N}", a, V.N)
    if a == 0:
        return V

    def labels(n):
        return [(A, n - a) for A in itertools.combinations(range(1, n + 1), a)]

    def act(g, A):
        img = [g(x) for x in A]
        A2 = tuple(sorted(img))
        return A2, _sort_sign(img), restricted_injection(g, A, A2)

    return _block_module(V, labels, act)


def btilde_differential(V: TruncatedFIModule, a: int, dom=None, cod=None) -> FIMorphism:
    """B~^-a -> B~^-(a-1)."""
    _require(1 <= a <= V.N, f"differential out of B~^-{a} needs 1 <= a <= {V.N}", a, V.N)
    dom = dom or btilde_term(V, a)
    cod = cod or btilde_term(V, a - 1)
    maps = []
    for n in range(V.N + 1):
        src = list(itertools.combinations(range(1, n + 1), a))
        dst = list(itertools.combinations(range(1, n + 1), a - 1))
        didx = {A: k for k, A in enumerate(dst)}
        entries = {}
        ident = Injection.identity(n)
        for k, A in enumerate(src):
            for j, x in enumerate(A, start=1):
                A2 = tuple(y for y in A if y != x)
                f = V.evaluate(restricted_injection(ident, A, A2))
                entries[(didx[A2], k)] = f if j % 2 == 0 else M.neg(f)
        maps.append(M.block_map(dom.levels[n], cod.levels[n], [V.levels[n - a]] * len(src),
                                [V.levels[n - a + 1]] * len(dst), entries))
    return FIMorphism(dom, cod, maps, check=False)


@dataclass
class FIChainComplex:
    terms: list           # terms[a] is the term in homological degree -a
    differentials: list   # differentials[a-1]: terms[a] -> terms[a-1]

    def dd_failures(self):
        """(a, level) pairs where d o d is nonzero."""
        out = []
        for a in range(2, len(self.terms)):
            d1, d2 = self.differentials[a - 2], self.differentials[a - 1]
            for n, (x, y) in enumerate(zip(d2.maps, d1.maps)):
                if not M.is_zero(y @ x):
                    out.append((a, n))
        return out


def btilde_complex(V: TruncatedFIModule, A: int) -> FIChainComplex:
    _require(0 <= A <= V.N, f"complex of length {A} exceeds truncation {V.N}", A, V.N)
    terms = [btilde_term(V, a) for a in range(A + 1)]
    diffs = [btilde_differential(V, a, terms[a], terms[a - 1]) for a in range(1, A + 1)]
    return FIChainComplex(terms, diffs)


# ------------------------------------------------------------------ H_a

@dataclass
class HomologyData:
    H: TruncatedFIModule
    cycles: TruncatedFIModule
    cycle_inclusion: FIMorphism   # cycles -> B~^-a
    projection: FIMorphism        # cycles -> H


def homology_data(V: TruncatedFIModule, a: int, strict=True) -> HomologyData:
    if strict:
        _require(a + 1 <= V.N, f"H_{a} needs truncation at least {a + 1}", a + 1, V.N)
    top = min(a + 1, V.N)
    terms = [btilde_term(V, b) for b in range(a - 1 if a else 0, top + 1)]
    base = a - 1 if a else 0
    T = terms[a - base]
    if a == 0:
        Z, zi = T, identity_fi(T)
    else:
        Z, zi = kernel_fi(btilde_differential(V, a, T, terms[a - 1 - base]))
    if a + 1 <= V.N:
        d = btilde_differential(V, a + 1, terms[a + 1 - base], T)
        H, p = cokernel_fi(lift_fi(zi, d))
    else:
        H, p = Z, identity_fi(Z)
    return HomologyData(H, Z, zi, p)


def homology_a(V: TruncatedFIModule, a: int) -> TruncatedFIModule:
    return homology_data(V, a).H


def h0_comparison(V: TruncatedFIModule) -> FIMorphism:
    """H_0 from the complex -> H_0 as the cokernel of the lower images,
    induced by the identity of V."""
    hd = homology_data(V, 0, strict=False)
    _, q = h0_with_projection(V)
    return descend_fi(hd.projection, q)


# ------------------------------------------- H_1 through the proper-subset colimit

def _subset_map(g: Injection, T, T2):
    """g restricted to T -> T2, both relabeled in order."""
    rank = {x: k + 1 for k, x in enumerate(sorted(T2))}
    return Injection(len(T), len(T2), tuple(rank[g(x)] for x in sorted(T)))


@dataclass
class ColimitH1:
    K: TruncatedFIModule          # kernel of the colimit map
    kernel_inclusion: FIMorphism  # K -> C
    colimit: TruncatedFIModule    # C: proper-subset colimit
    projection: FIMorphism        # P -> C, P the sum over codimension-one subsets
    to_V: FIMorphism              # C -> V


def _codim_one_subsets(n):
    return list(itertools.combinations(range(1, n + 1), n - 1)) if n >= 1 else []


def h1_colim_data(V: TruncatedFIModule) -> ColimitH1:
    N, coeff = V.N, V.coeff
    subsets = [_codim_one_subsets(n) for n in range(N + 1)]
    pieces = [[V.levels[n - 1]] * len(subsets[n]) if n else [] for n in range(N + 1)]
    P_levels = [M.direct_sum(p, coeff)[0] for p in pieces]
    sidx = [{T: k for k, T in enumerate(ss)} for ss in subsets]

    def move(g: Injection, n, n2, target):
        entries = {}
        for k, T in enumerate(subsets[n]):
            T2 = target(T)
            entries[(sidx[n2][T2], k)] = V.evaluate(_subset_map(g, T, T2))
        return M.block_map(P_levels[n], P_levels[n2], pieces[n], pieces[n2], entries)

    incl = [move(Injection.standard(n, n + 1), n, n + 1, lambda T, n=n: T + (n + 1,)) for n in range(N)]
    trans = []
    for n in range(N + 1):
        ts = []
        for i in range(1, n):
            imgs = list(range(1, n + 1))
            imgs[i - 1], imgs[i] = i + 1, i
            g = Injection(n, n, tuple(imgs))
            ts.append(move(g, n, n, lambda T, g=g: tuple(sorted(g(x) for x in T))))
        trans.append(ts)
    P = TruncatedFIModule(coeff, N, P_levels, incl, trans, check=False)

    # coequalizer: for U of size n-2 the two restrictions into U + {y}, U + {z}
    projs, secs, sums = [], [], []
    for n in range(N + 1):
        rels = []
        if n >= 2:
            for U in itertools.combinations(range(1, n + 1), n - 2):
                y, z = [x for x in range(1, n + 1) if x not in U]
                T1, T2 = tuple(sorted(U + (y,))), tuple(sorted(U + (z,)))
                ident = Injection.identity(n)
                f1 = V.evaluate(_subset_map(ident, U, T1))
                f2 = V.evaluate(_subset_map(ident, U, T2))
                rels.append({sidx[n][T1]: f1, sidx[n][T2]: M.neg(f2)})
        R = M.direct_sum([V.levels[n - 2]] * len(rels), coeff)[0] if rels else ModObj.zero(coeff)
        rel = M.block_map(R, P_levels[n], [V.levels[n - 2]] * len(rels), pieces[n],
                          {(t, k): f for k, r in enumerate(rels) for t, f in r.items()})
        _, p, s = M.cokernel_with_section(rel)
        projs.append(p)
        secs.append(s)
        ident = Injection.identity(n)
        if subsets[n]:
            sums.append(M.hstack_maps([V.evaluate(_subset_map(ident, T, tuple(range(1, n + 1))))
                                       for T in subsets[n]], P_levels[n]))
        else:
            sums.append(M.zero_map(P_levels[n], V.levels[n]))
    C, cp = quotient_fi(P, projs, secs)
    to_V = descend_fi(cp, FIMorphism(P, V, sums, check=False))
    K, ki = kernel_fi(to_V)
    return ColimitH1(K, ki, C, cp, to_V)


def h1_via_colim(V: TruncatedFIModule) -> TruncatedFIModule:
    return h1_colim_data(V).K


def h1_comparison(V: TruncatedFIModule) -> FIMorphism:
    """H_1 from the complex -> H_1 through the colimit.

    A removed point x in the complex corresponds to the subset [n] - {x}."""
    hd = homology_data(V, 1, strict=False)
    cd = h1_colim_data(V)
    maps = []
    for n in range(V.N + 1):
        P = cd.projection.dom.levels[n]
        B = hd.cycle_inclusion.cod.levels[n]
        entries = {}
        if n >= 1:
            pos = {T: k for k, T in enumerate(_codim_one_subsets(n))}
            for x in range(1, n + 1):
                T = tuple(y for y in range(1, n + 1) if y != x)
                entries[(pos[T], x - 1)] = M.identity(V.levels[n - 1])
        perm = M.block_map(B, P, [V.levels[n - 1]] * n if n else [], [V.levels[n - 1]] * n if n else [], entries)
        g = cd.projection.maps[n] @ perm @ hd.cycle_inclusion.maps[n]
        maps.append(M.descend(hd.projection.maps[n], M.lift(cd.kernel_inclusion.maps[n], g)))
    return FIMorphism(hd.H, cd.K, maps, check=False)


# ------------------------------------------------------------ zero shift map

def shift_zero_check(V: TruncatedFIModule, a: int):
    """The map H_a -> S^1 H_a induced by the standard inclusions is zero."""
    _require(a + 1 <= V.N - 1, f"zero-shift check for H_{a} needs truncation at least {a + 2}", a + 2, V.N)
    H = homology_a(V, a)
    f = psi(H, 1)
    for n, m in enumerate(f.maps):
        if not M.is_zero(m):
            return {"pass": False, "a": a, "witness": {"level": n, "matrix": [b.tolist() for b in m.blocks]}}
    return {"pass": True, "a": a, "levels": f.N + 1}


# ------------------------------------------------------------- stable range

@dataclass
class BoundedColimit:
    """colim over T in [n] with |T| <= k of V(T), presented on the subsets of size min(k, n)."""
    n: int
    k: int
    subsets: list
    block_sum: ModObj
    obj: ModObj
    projection: ModMap
    section: ModMap


def bounded_colimit(V: TruncatedFIModule, k: int, n: int) -> BoundedColimit:
    """Needs V up to level min(k, n) only."""
    coeff = V.coeff
    s = min(k, n)
    subsets = list(itertools.combinations(range(1, n + 1), s))
    pieces = [V.levels[s]] * len(subsets)
    S = M.direct_sum(pieces, coeff)[0]
    sidx = {T: j for j, T in enumerate(subsets)}
    ident = Injection.identity(n)
    cols = []
    if s >= 1:
        for U in itertools.combinations(range(1, n + 1), s - 1):
            sup = [tuple(sorted(U + (x,))) for x in range(1, n + 1) if x not in U]
            for T1, T2 in zip(sup, sup[1:]):
                cols.append({sidx[T1]: V.evaluate(_subset_map(ident, U, T1)),
                             sidx[T2]: M.neg(V.evaluate(_subset_map(ident, U, T2)))})
    R = M.direct_sum([V.levels[max(s - 1, 0)]] * len(cols), coeff)[0] if cols else ModObj.zero(coeff)
    rel = M.block_map(R, S, [V.levels[max(s - 1, 0)]] * len(cols), pieces,
                      {(t, j): f for j, c in enumerate(cols) for t, f in c.items()})
    C, p, sec = M.cokernel_with_section(rel)
    return BoundedColimit(n, k, subsets, S, C, p, sec)


def colimit_comparison(V: TruncatedFIModule, bc: BoundedColimit) -> ModMap:
    """The canonical map colim -> V_n (n within the truncation)."""
    n = bc.n
    ident = Injection.identity(n)
    full = tuple(range(1, n + 1))
    parts = [V.evaluate(_subset_map(ident, T, full)) for T in bc.subsets]
    total = M.hstack_maps(parts, bc.block_sum) if parts else M.zero_map(bc.block_sum, V.levels[n])
    return M.descend(bc.projection, total, bc.section)


def colimit_identity_holds(V: TruncatedFIModule, k: int) -> bool:
    return all(M.is_iso(colimit_comparison(V, bounded_colimit(V, k, n))) for n in range(k + 1, V.N + 1))


@dataclass
class StableRange:
    n_bound: int
    n_min: int
    verified: bool
    status: str
    window: int
    h0_dims: list = field(default_factory=list)
    h1_dims: list = field(default_factory=list)

    def to_json(self):
        return {"Nbound": self.n_bound, "Nmin": self.n_min, "verified": self.verified,
                "status": self.status, "window": self.window,
                "h0LevelDims": self.h0_dims, "h1LevelDims": self.h1_dims}


def _h01_data(V: TruncatedFIModule):
    H0 = homology_data(V, 0, strict=False).H
    H1 = homology_data(V, 1, strict=False).H if V.N >= 1 else None
    nonzero = [n for n in range(V.N + 1)
               if not H0.levels[n].is_zero() or (H1 is not None and not H1.levels[n].is_zero())]
    return H0, H1, (nonzero[-1] + 1 if nonzero else 0)


def stable_bound(V: TruncatedFIModule):
    """(Nbound, verified, status) without the search for the smallest bound."""
    _, _, n_bound = _h01_data(V)
    if n_bound > V.N:
        return n_bound, False, "exceeds-truncation"
    ok = colimit_identity_holds(V, n_bound)
    return n_bound, ok, "verified" if ok else "identity-fails"


def stable_range(V: TruncatedFIModule) -> StableRange:
    H0, H1, n_bound = _h01_data(V)
    h0d = [list(L.dims()) for L in H0.levels]
    h1d = [list(L.dims()) for L in H1.levels] if H1 else [[0] * len(V.coeff.objects)]
    n_min = next(k for k in range(V.N + 1) if colimit_identity_holds(V, k))
    if n_bound > V.N:
        return StableRange(n_bound, n_min, False, "exceeds-truncation", V.N, h0d, h1d)
    ok = colimit_identity_holds(V, n_bound)
    return StableRange(n_bound, n_min, ok, "verified" if ok else "identity-fails", V.N, h0d, h1d)


def extend(V: TruncatedFIModule, N2: int, bound: int | None = None, check=False,
           trusted=False) -> TruncatedFIModule:
    """Extend V to levels up to N2 by bounded-subset colimits over |T| <= bound.

    ``trusted`` skips re-verifying a bound the caller has already verified."""
    if N2 < V.N:
        raise ValueError("target truncation below the current one")
    if bound is None:
        bound, ok, status = stable_bound(V)
        if status == "exceeds-truncation":
            raise TruncationExceeded(f"H0/H1 do not vanish inside the window [0, {V.N}]",
                                     needed=bound, truncation=V.N)
        if not ok:
            raise ValidationError(f"stable range not verified ({status})")
    elif not trusted and (bound > V.N or not colimit_identity_holds(V, bound)):
        raise ValidationError(f"colimit identity with bound {bound} is not verified")
    if N2 == V.N:
        return V
    N, k = V.N, bound
    bcs = {n: bounded_colimit(V, k, n) for n in range(N, N2 + 1)}
    piece = V.levels[min(k, N)]

    def blockwise(g: Injection, src: BoundedColimit, dst: BoundedColimit):
        """The map of colimits induced by g on subsets."""
        idx = {T: j for j, T in enumerate(dst.subsets)}
        entries = {}
        for j, T in enumerate(src.subsets):
            T2 = tuple(sorted(g(x) for x in T))
            entries[(idx[T2], j)] = V.evaluate(_subset_map(g, T, T2))
        pieces_src = [piece] * len(src.subsets)
        pieces_dst = [piece] * len(dst.subsets)
        f = M.block_map(src.block_sum, dst.block_sum, pieces_src, pieces_dst, entries)
        return M.descend(src.projection, dst.projection @ f, src.section)

    levels = list(V.levels) + [bcs[n].obj for n in range(N + 1, N2 + 1)]
    kappa = colimit_comparison(V, bcs[N])
    incl = list(V.inclusions)
    incl.append(blockwise(Injection.standard(N, N + 1), bcs[N], bcs[N + 1]) @ M.inverse(kappa))
    for n in range(N + 1, N2):
        incl.append(blockwise(Injection.standard(n, n + 1), bcs[n], bcs[n + 1]))
    trans = [list(ts) for ts in V.transpositions]
    for n in range(N + 1, N2 + 1):
        ts = []
        for i in range(1, n):
            imgs = list(range(1, n + 1))
            imgs[i - 1], imgs[i] = i + 1, i
            ts.append(blockwise(Injection(n, n, tuple(imgs)), bcs[n], bcs[n]))
        trans.append(ts)
    return TruncatedFIModule(V.coeff, N2, levels, incl, trans, check=check)
