"""H_0, generation degree, presentations and Hom spaces."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from . import modules as M
from .errors import CapabilityError
from .fi import (FIMorphism, Injection, TruncatedFIModule, direct_sum_fi, free_element_map,
                 injection_basis, kernel_fi, quotient_fi)
from .modules import ModMap, ModObj


def _codim_one(n):
    """The n order-preserving injections [n-1] -> [n], one per omitted point."""
    return [Injection(n - 1, n, tuple(y for y in range(1, n + 1) if y != x)) for x in range(1, n + 1)]


def lower_images(V: TruncatedFIModule, n: int) -> ModMap:
    """The combined map (+) V_{n-1} -> V_n over the n codimension-one subsets."""
    if n == 0:
        return M.zero_map(ModObj.zero(V.coeff), V.levels[0])
    maps = [V.evaluate(phi) for phi in _codim_one(n)]
    return M.hstack_maps(maps)


def h0_with_projection(V: TruncatedFIModule):
    data = [M.cokernel_with_section(lower_images(V, n)) for n in range(V.N + 1)]
    return quotient_fi(V, [d[1] for d in data], [d[2] for d in data])


def h0(V: TruncatedFIModule) -> TruncatedFIModule:
    return h0_with_projection(V)[0]


def h0_morphism(f: FIMorphism, pV=None, pW=None) -> FIMorphism:
    pV = pV or h0_with_projection(f.dom)[1]
    pW = pW or h0_with_projection(f.cod)[1]
    maps = [M.descend(a, b @ g) for a, b, g in zip(pV.maps, pW.maps, f.maps)]
    return FIMorphism(pV.cod, pW.cod, maps, check=False)


@dataclass
class GenerationReport:
    gen_degree: object  # int, None (zero module) or "exceeds-truncation"
    h0_level_dims: list
    gr_finitely_generated: bool
    window: int
    h0_invariants: list = field(default_factory=list)

    def to_json(self):
        return {"genDegree": self.gen_degree, "h0LevelDims": self.h0_level_dims,
                "grFinitelyGenerated": self.gr_finitely_generated, "window": self.window,
                "h0Invariants": self.h0_invariants}


def _level_invariants(L: ModObj):
    return [{"torsion": list(t), "rank": r} for t, r in M.invariants(L)]


def generation_degree(V: TruncatedFIModule) -> GenerationReport:
    H = h0(V)
    nonzero = [n for n, L in enumerate(H.levels) if not L.is_zero()]
    if not nonzero:
        deg = None
    elif nonzero[-1] == V.N:
        deg = "exceeds-truncation"
    else:
        deg = nonzero[-1]
    fg = deg != "exceeds-truncation"
    return GenerationReport(deg, [list(L.dims()) for L in H.levels], fg, V.N,
                            [_level_invariants(L) for L in H.levels])


def epi_iff_h0_epi(f: FIMorphism):
    epi = all(M.is_epi(a) for a in f.maps)
    h = h0_morphism(f)
    return epi, all(M.is_epi(a) for a in h.maps)


# ------------------------------------------------------------ presentations

@dataclass
class Presentation:
    """Generators (degree, object index, vector) of V and of the relations
    module, with the free cover F0 -> V."""

    generators: list
    relations: list
    cover: FIMorphism          # F0 -> V
    relation_inclusion: FIMorphism  # K -> F0


def generators(V: TruncatedFIModule):
    """Lifts of generators of each H_0 level: a generating set of V."""
    _, p = h0_with_projection(V)
    out = []
    for n, pn in enumerate(p.maps):
        s = M.section(pn)
        for i in range(len(V.coeff.objects)):
            cols = s.blocks[i]
            for k in range(cols.shape[1]):
                out.append((n, i, cols[:, k].copy()))
    return out


def cover(V: TruncatedFIModule, gens=None):
    """The morphism from a sum of free modules onto V given by generators."""
    gens = generators(V) if gens is None else gens
    maps = [free_element_map(V, d, r, vec) for d, r, vec in gens]
    F, _, projs = direct_sum_fi([m.dom for m in maps], V.coeff, V.N)
    if not maps:
        return FIMorphism(F, V, [M.zero_map(a, b) for a, b in zip(F.levels, V.levels)], check=False), gens
    levels = [M.hstack_maps([m.maps[n] for m in maps], F.levels[n]) for n in range(V.N + 1)]
    return FIMorphism(F, V, levels, check=False), gens


def presentation(V: TruncatedFIModule) -> Presentation:
    pi, gens = cover(V)
    K, incl = kernel_fi(pi)
    rel_gens = generators(K)
    rels = [(d, r, (incl.maps[d] @ M.element_map(K.levels[d], r, vec)).blocks[r][:, 0].copy())
            for d, r, vec in rel_gens]
    return Presentation(gens, rels, pi, incl)


def _free_coordinates(gens, e, r):
    """Index of the (generator, injection) coordinates of F0_e at object r."""
    out = []
    for g, (d, gr, _) in enumerate(gens):
        if gr == r:
            for f in injection_basis(d, e):
                out.append((g, f))
    return out


def _require_field(coeff):
    if not coeff.is_field:
        raise CapabilityError("Hom spaces are computed over fields only")


def hom_generator_space(P: Presentation, L: TruncatedFIModule):
    """Basis (columns) of Hom(V, L) in the coordinates (+)_g L_{d_g}(r_g)."""
    _require_field(L.coeff)
    ring = L.coeff.ring
    gens, rels = P.generators, P.relations
    offs = [0]
    for d, r, _ in gens:
        offs.append(offs[-1] + L.levels[d].dim(r))
    rows = []
    for e, r, vec in rels:
        coords = _free_coordinates(gens, e, r)
        block = ring.zeros(L.levels[e].dim(r), offs[-1])
        for (g, f), c in zip(coords, vec):
            if c:
                d = gens[g][0]
                block[:, offs[g]:offs[g + 1]] += L.evaluate(Injection(d, e, f)).blocks[r] * c
        rows.append(ring.reduce(block))
    if not rows:
        return ring.eye(offs[-1]), offs
    return linalg.nullspace(ring, np.vstack(rows)), offs


def morphism_from_generator_values(P: Presentation, L: TruncatedFIModule, vals) -> FIMorphism:
    """The morphism V -> L sending generator g to ``vals[g]``."""
    V = P.cover.cod
    maps = [free_element_map(L, d, r, v) for (d, r, _), v in zip(P.generators, vals)]
    F = P.cover.dom
    if maps:
        fm = [M.hstack_maps([m.maps[n] for m in maps], F.levels[n]) for n in range(V.N + 1)]
    else:
        fm = [M.zero_map(a, b) for a, b in zip(F.levels, L.levels)]
    return FIMorphism(V, L, [M.descend(p, g) for p, g in zip(P.cover.maps, fm)], check=False)


def generator_values(P: Presentation, h: FIMorphism):
    """Values of a morphism out of V on the generators of P."""
    return [(h.maps[d] @ M.element_map(P.cover.cod.levels[d], r, vec)).blocks[r][:, 0].copy()
            for d, r, vec in P.generators]


def hom_basis(V: TruncatedFIModule, L: TruncatedFIModule, P: Presentation | None = None):
    """A basis of Hom(V, L) as morphisms."""
    P = P or presentation(V)
    H, offs = hom_generator_space(P, L)
    out = []
    for k in range(H.shape[1]):
        vals = [H[offs[g]:offs[g + 1], k] for g in range(len(P.generators))]
        out.append(morphism_from_generator_values(P, L, vals))
    return out


def hom_precompose_matrix(u: FIMorphism, PA: Presentation, PB: Presentation, L: TruncatedFIModule):
    """Matrix of h -> h o u from generator coordinates of B to those of A."""
    ring = L.coeff.ring
    offsB = [0]
    for d, r, _ in PB.generators:
        offsB.append(offsB[-1] + L.levels[d].dim(r))
    offsA = [0]
    for d, r, _ in PA.generators:
        offsA.append(offsA[-1] + L.levels[d].dim(r))
    out = ring.zeros(offsA[-1], offsB[-1])
    for a, (d, r, vec) in enumerate(PA.generators):
        image = (u.maps[d] @ M.element_map(u.dom.levels[d], r, vec))
        pre = M.lift(PB.cover.maps[d], image).blocks[r][:, 0]
        coords = _free_coordinates(PB.generators, d, r)
        for (g, f), c in zip(coords, pre):
            if c:
                dg = PB.generators[g][0]
                out[offsA[a]:offsA[a + 1], offsB[g]:offsB[g + 1]] += L.evaluate(Injection(dg, d, f)).blocks[r] * c
    return ring.reduce(out)


def hom_space_direct(A: TruncatedFIModule, B: TruncatedFIModule):
    """Hom(A, B) by solving the intertwining equations for all levels at once.

    Independent of presentations; returns a list of morphisms (a basis)."""
    _require_field(A.coeff)
    ring = A.coeff.ring
    nobj = len(A.coeff.objects)
    slots = {}
    off = 0
    for n in range(A.N + 1):
        for i in range(nobj):
            slots[(n, i)] = (off, B.levels[n].dim(i), A.levels[n].dim(i))
            off += B.levels[n].dim(i) * A.levels[n].dim(i)
    # column-major vec: vec(L X R) = (R^T kron L) vec(X)
    eqs = []
    for n in range(A.N + 1):
        for i in range(nobj):
            o, b, a = slots[(n, i)]
            for k in range(1, n if a * b else 0):
                TA, TB = A.t(n, k).blocks[i], B.t(n, k).blocks[i]
                row = ring.zeros(a * b, off)
                row[:, o:o + a * b] = np.kron(TA.T, ring.eye(b)) - np.kron(ring.eye(a), TB)
                eqs.append(row)
            o2, b2, a2 = slots[(n + 1, i)] if n < A.N else (0, 0, 0)
            if n < A.N and b2 * a:
                IA, IB = A.inclusions[n].blocks[i], B.inclusions[n].blocks[i]
                row = ring.zeros(b2 * a, off)
                if a2 * b2:
                    row[:, o2:o2 + a2 * b2] = np.kron(IA.T, ring.eye(b2))
                if a * b:
                    row[:, o:o + a * b] -= np.kron(ring.eye(a), IB)
                eqs.append(row)
    if off == 0:
        return []
    Msys = ring.reduce(np.vstack(eqs)) if eqs else ring.zeros(0, off)
    Nsp = linalg.nullspace(ring, Msys) if eqs else ring.eye(off)
    out = []
    for k in range(Nsp.shape[1]):
        maps = []
        for n in range(A.N + 1):
            blocks = []
            for i in range(nobj):
                o, b, a = slots[(n, i)]
                blocks.append(Nsp[o:o + a * b, k].reshape((b, a), order="F") if a * b else ring.zeros(b, a))
            maps.append(ModMap(A.levels[n], B.levels[n], blocks))
        out.append(FIMorphism(A, B, maps, check=False))
    return out
