"""Truncated FI-modules stored by generators.

Level ``n`` carries a module ``V_n``; the generators are the inclusions
``iota_n: V_n -> V_{n+1}`` and the adjacent transpositions ``t_{n,i}`` acting on
``V_n``.  Any injection ``[m] -> [n]`` is evaluated by writing it as a
permutation of ``[n]`` after the standard inclusion ``[m] -> [n]``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import modules as M
from .errors import TruncationExceeded, ValidationError
from .modules import ModMap, ModObj
from .rings import CoeffCategory


@dataclass(frozen=True)
class Injection:
    """An injection [m] -> [n]; ``images[i-1]`` is the image of i."""

    m: int
    n: int
    images: tuple

    def __post_init__(self):
        imgs = tuple(int(x) for x in self.images)
        object.__setattr__(self, "images", imgs)
        if len(imgs) != self.m or self.m > self.n:
            raise ValueError("injection needs m <= n and m images")
        if len(set(imgs)) != len(imgs) or any(x < 1 or x > self.n for x in imgs):
            raise ValueError(f"{imgs} is not an injection into [{self.n}]")

    @classmethod
    def standard(cls, m, n):
        return cls(m, n, tuple(range(1, m + 1)))

    @classmethod
    def identity(cls, n):
        return cls.standard(n, n)

    def then(self, other: "Injection") -> "Injection":
        """other o self."""
        if other.m != self.n:
            raise ValueError("injections are not composable")
        return Injection(self.m, other.n, tuple(other.images[x - 1] for x in self.images))

    def __call__(self, x):
        return self.images[x - 1]

    def complement(self):
        s = set(self.images)
        return [x for x in range(1, self.n + 1) if x not in s]


def restricted_injection(g: Injection, A, A2) -> Injection:
    """g restricted to [m] - A -> [n] - A2, both complements relabeled in order."""
    A, A2 = set(A), set(A2)
    C = [x for x in range(1, g.m + 1) if x not in A]
    C2 = [x for x in range(1, g.n + 1) if x not in A2]
    rank = {x: k + 1 for k, x in enumerate(C2)}
    return Injection(len(C), len(C2), tuple(rank[g(x)] for x in C))


def subset_injection(T, n) -> Injection:
    """The order-preserving injection [|T|] -> [n] with image T."""
    return Injection(len(T), n, tuple(sorted(T)))


def sorting_word(perm):
    """Adjacent transpositions (1-based) whose product, applied right to left
    from the first entry, gives ``perm``: perm = s_{w[-1]} ... s_{w[0]}.

    Computed by insertion sort on positions, so V(perm) is the product of the
    generator matrices with ``w[0]`` applied first."""
    w = list(perm)
    word = []
    for k in range(1, len(w)):
        j = k
        while j > 0 and w[j - 1] > w[j]:
            w[j - 1], w[j] = w[j], w[j - 1]
            word.append(j)
            j -= 1
    return word


def canonical_permutation(phi: Injection):
    """The permutation of [n] sending i to phi(i) for i <= m and filling the
    remaining slots with the complement in ascending order."""
    return tuple(phi.images) + tuple(phi.complement())


class TruncatedFIModule:
    """An FI-module known in degrees 0..N."""

    __slots__ = ("coeff", "N", "levels", "inclusions", "transpositions", "_cache")

    def __init__(self, coeff: CoeffCategory, N: int, levels, inclusions, transpositions, check=True):
        self.coeff = coeff
        self.N = int(N)
        self.levels = tuple(levels)
        self.inclusions = tuple(inclusions)
        self.transpositions = tuple(tuple(ts) for ts in transpositions)
        self._cache = {}
        if len(self.levels) != self.N + 1 or len(self.inclusions) != self.N:
            raise ValidationError("wrong number of levels or inclusions")
        if len(self.transpositions) != self.N + 1:
            raise ValidationError("wrong number of transposition lists")
        for n, L in enumerate(self.levels):
            if L.coeff != coeff:
                raise ValidationError("level with foreign coefficients")
            if len(self.transpositions[n]) != max(n - 1, 0):
                raise ValidationError(f"level {n} needs {max(n - 1, 0)} transpositions")
            for t in self.transpositions[n]:
                if t.dom != L or t.cod != L:
                    raise ValidationError(f"transposition at level {n} has the wrong shape")
        for n, f in enumerate(self.inclusions):
            if f.dom != self.levels[n] or f.cod != self.levels[n + 1]:
                raise ValidationError(f"inclusion at level {n} has the wrong shape")
        if check:
            bad = relation_failures(self)
            if bad:
                raise ValidationError(f"FI relations fail: {bad[:3]}")

    def t(self, n, i) -> ModMap:
        return self.transpositions[n][i - 1]

    def dims(self):
        return [L.dims() for L in self.levels]

    def dim_list(self, obj=0):
        return [L.dim(obj) for L in self.levels]

    def is_zero(self):
        return all(L.is_zero() for L in self.levels)

    def perm_map(self, n, perm) -> ModMap:
        """V(sigma) for a permutation of [n] given as its image tuple."""
        key = ("perm", n, tuple(perm))
        if key not in self._cache:
            f = M.identity(self.levels[n])
            for j in sorting_word(perm):
                f = M.compose(self.t(n, j), f)
            self._cache[key] = f
        return self._cache[key]

    def chain(self, m, n) -> ModMap:
        """iota_{n-1} o ... o iota_m."""
        key = ("chain", m, n)
        if key not in self._cache:
            f = M.identity(self.levels[m])
            for k in range(m, n):
                f = M.compose(self.inclusions[k], f)
            self._cache[key] = f
        return self._cache[key]

    def evaluate(self, phi: Injection) -> ModMap:
        if phi.n > self.N:
            raise TruncationExceeded(f"injection into [{phi.n}] beyond truncation {self.N}",
                                     needed=phi.n, truncation=self.N)
        key = ("inj", phi.m, phi.n, phi.images)
        if key not in self._cache:
            sigma = canonical_permutation(phi)
            self._cache[key] = M.compose(self.perm_map(phi.n, sigma), self.chain(phi.m, phi.n))
        return self._cache[key]

    def __repr__(self):
        return f"TruncatedFIModule(N={self.N}, dims={self.dims()})"


def evaluate_injection(V: TruncatedFIModule, phi: Injection) -> ModMap:
    return V.evaluate(phi)


def relation_failures(V: TruncatedFIModule):
    """List of violated FI relations (empty when V is a valid module)."""
    bad = []
    for n in range(V.N + 1):
        L = V.levels[n]
        I = M.identity(L)
        ts = V.transpositions[n]
        for i in range(1, n):
            ti = ts[i - 1]
            if ti @ ti != I:
                bad.append(("involution", n, i))
            for j in range(i + 2, n):
                tj = ts[j - 1]
                if ti @ tj != tj @ ti:
                    bad.append(("commute", n, i, j))
            if i + 1 < n:
                tj = ts[i]
                if ti @ tj @ ti != tj @ ti @ tj:
                    bad.append(("braid", n, i))
            if n < V.N and V.inclusions[n] @ ti != V.t(n + 1, i) @ V.inclusions[n]:
                bad.append(("compat", n, i))
        if n + 2 <= V.N:
            two = V.inclusions[n + 1] @ V.inclusions[n]
            if V.t(n + 2, n + 1) @ two != two:
                bad.append(("added-points", n))
    return bad


class FIMorphism:
    __slots__ = ("dom", "cod", "maps")

    def __init__(self, dom: TruncatedFIModule, cod: TruncatedFIModule, maps, check=True):
        if dom.coeff != cod.coeff or dom.N != cod.N:
            raise ValidationError("morphism between modules of different shape")
        maps = tuple(maps)
        if len(maps) != dom.N + 1:
            raise ValidationError("one map per level is required")
        for n, f in enumerate(maps):
            if f.dom != dom.levels[n] or f.cod != cod.levels[n]:
                raise ValidationError(f"map at level {n} has the wrong shape")
        self.dom = dom
        self.cod = cod
        self.maps = maps
        if check:
            bad = naturality_failures(self)
            if bad:
                raise ValidationError(f"not natural: {bad[:3]}")

    @property
    def N(self):
        return self.dom.N

    def __matmul__(self, other):
        return compose_fi(self, other)

    def __eq__(self, other):
        return (isinstance(other, FIMorphism) and self.dom.N == other.dom.N
                and all(a == b for a, b in zip(self.maps, other.maps)))

    __hash__ = None

    def is_zero(self):
        return all(M.is_zero(f) for f in self.maps)

    def __repr__(self):
        return f"FIMorphism({self.dom!r} -> {self.cod!r})"


def naturality_failures(f: FIMorphism):
    bad = []
    V, W = f.dom, f.cod
    for n in range(V.N + 1):
        for i in range(1, n):
            if f.maps[n] @ V.t(n, i) != W.t(n, i) @ f.maps[n]:
                bad.append(("t", n, i))
        if n < V.N and f.maps[n + 1] @ V.inclusions[n] != W.inclusions[n] @ f.maps[n]:
            bad.append(("iota", n))
    return bad


# ------------------------------------------------------------ constructors

def zero_module(coeff: CoeffCategory, N: int) -> TruncatedFIModule:
    Z = ModObj.zero(coeff)
    return TruncatedFIModule(coeff, N, [Z] * (N + 1), [M.identity(Z)] * N,
                             [[M.identity(Z)] * max(n - 1, 0) for n in range(N + 1)], check=False)


def injection_basis(d, n):
    """Injections [d] -> [n] as image tuples, in lexicographic order."""
    return list(itertools.permutations(range(1, n + 1), d))


def free_module(coeff: CoeffCategory, d: int, r=None, N: int = 0) -> TruncatedFIModule:
    """The free module on one generator of degree d at object r."""
    if d < 0 or N < 0:
        raise ValueError("degree and truncation must be non-negative")
    ri = 0 if r is None else (r if isinstance(r, int) else coeff.index(r))
    if not 0 <= ri < len(coeff.objects):
        raise ValueError(f"object {r!r} not in {coeff.label()}")
    ring = coeff.ring
    nobj = len(coeff.objects)
    bases = [injection_basis(d, n) for n in range(N + 1)]
    index = [{f: k for k, f in enumerate(b)} for b in bases]

    def obj(n):
        return ModObj.from_dims(coeff, [len(bases[n]) if i == ri else 0 for i in range(nobj)])

    def perm_matrix(src, dst, fn):
        A = ring.zeros(len(index[dst]), len(bases[src]))
        for k, f in enumerate(bases[src]):
            A[index[dst][fn(f)], k] = 1
        return A

    def mapping(src, dst, fn):
        blocks = [ring.zeros(0, 0)] * nobj
        blocks = [perm_matrix(src, dst, fn) if i == ri else ring.zeros(0, 0) for i in range(nobj)]
        return ModMap(obj(src), obj(dst), blocks, check=False)

    levels = [obj(n) for n in range(N + 1)]
    incl = [mapping(n, n + 1, lambda f: f) for n in range(N)]

    def swap(i):
        return lambda f: tuple(i + 1 if x == i else i if x == i + 1 else x for x in f)

    trans = [[mapping(n, n, swap(i)) for i in range(1, n)] for n in range(N + 1)]
    return TruncatedFIModule(coeff, N, levels, incl, trans, check=False)


def truncate(V: TruncatedFIModule, N: int) -> TruncatedFIModule:
    if N > V.N:
        raise TruncationExceeded(f"cannot truncate at {N} > {V.N}")
    return TruncatedFIModule(V.coeff, N, V.levels[:N + 1], V.inclusions[:N], V.transpositions[:N + 1],
                             check=False)


def truncate_morphism(f: FIMorphism, N: int) -> FIMorphism:
    return FIMorphism(truncate(f.dom, N), truncate(f.cod, N), f.maps[:N + 1], check=False)


# ------------------------------------------------------------ morphism algebra

def identity_fi(V):
    return FIMorphism(V, V, [M.identity(L) for L in V.levels], check=False)


def zero_fi(V, W):
    return FIMorphism(V, W, [M.zero_map(a, b) for a, b in zip(V.levels, W.levels)], check=False)


def compose_fi(g: FIMorphism, f: FIMorphism) -> FIMorphism:
    """g o f."""
    return FIMorphism(f.dom, g.cod, [b @ a for a, b in zip(f.maps, g.maps)], check=False)


def add_fi(f: FIMorphism, g: FIMorphism) -> FIMorphism:
    return FIMorphism(f.dom, f.cod, [a + b for a, b in zip(f.maps, g.maps)], check=False)


def scale_fi(c, f: FIMorphism) -> FIMorphism:
    return FIMorphism(f.dom, f.cod, [M.scale(c, a) for a in f.maps], check=False)


def is_iso_fi(f: FIMorphism) -> bool:
    return all(M.is_iso(a) for a in f.maps)


def direct_sum_fi(mods, coeff=None, N=None):
    """Direct sum with injection and projection morphisms."""
    mods = list(mods)
    if not mods:
        return zero_module(coeff, N), [], []
    coeff, N = mods[0].coeff, mods[0].N
    if any(V.coeff != coeff or V.N != N for V in mods):
        raise ValidationError("direct sum of modules with different shapes")
    sums = [M.direct_sum([V.levels[n] for V in mods]) for n in range(N + 1)]
    levels = [s[0] for s in sums]

    def diag(n0, n1, maps):
        return M.block_map(levels[n0], levels[n1], [V.levels[n0] for V in mods],
                           [V.levels[n1] for V in mods], {(k, k): f for k, f in enumerate(maps)})

    incl = [diag(n, n + 1, [V.inclusions[n] for V in mods]) for n in range(N)]
    trans = [[diag(n, n, [V.t(n, i) for V in mods]) for i in range(1, n)] for n in range(N + 1)]
    S = TruncatedFIModule(coeff, N, levels, incl, trans, check=False)
    injs = [FIMorphism(V, S, [sums[n][1][k] for n in range(N + 1)], check=False) for k, V in enumerate(mods)]
    projs = [FIMorphism(S, V, [sums[n][2][k] for n in range(N + 1)], check=False) for k, V in enumerate(mods)]
    return S, injs, projs


def sub_fi(V: TruncatedFIModule, incls, check=False):
    """The subfunctor with levelwise inclusions ``incls`` (monos), with its inclusion morphism."""
    N = V.N
    levels = [i.dom for i in incls]
    up = []
    trans = []
    for n in range(N + 1):
        gs = [V.t(n, i) @ incls[n] for i in range(1, n)]
        trans.append(M.lift_many(incls[n], gs))
        if n < N:
            up.append(M.lift(incls[n + 1], V.inclusions[n] @ incls[n]))
    K = TruncatedFIModule(V.coeff, N, levels, up, trans, check=check)
    return K, FIMorphism(K, V, incls, check=False)


def quotient_fi(V: TruncatedFIModule, projs, secs=None, check=False):
    """The quotient functor with levelwise projections ``projs`` (epis)."""
    N = V.N
    if secs is None:
        secs = [M.section(p) for p in projs]
    levels = [p.cod for p in projs]
    up = [M.descend(projs[n], projs[n + 1] @ V.inclusions[n], secs[n]) for n in range(N)]
    trans = [[M.descend(projs[n], projs[n] @ V.t(n, i), secs[n]) for i in range(1, n)] for n in range(N + 1)]
    C = TruncatedFIModule(V.coeff, N, levels, up, trans, check=check)
    return C, FIMorphism(V, C, projs, check=False)


def kernel_fi(f: FIMorphism):
    return sub_fi(f.dom, [M.kernel(a)[1] for a in f.maps])


def cokernel_fi(f: FIMorphism):
    data = [M.cokernel_with_section(a) for a in f.maps]
    return quotient_fi(f.cod, [d[1] for d in data], [d[2] for d in data])


def image_fi(f: FIMorphism):
    return sub_fi(f.cod, [M.image(a)[1] for a in f.maps])


def lift_fi(mono: FIMorphism, g: FIMorphism) -> FIMorphism:
    """h with mono o h = g."""
    return FIMorphism(g.dom, mono.dom, [M.lift(a, b) for a, b in zip(mono.maps, g.maps)], check=False)


def descend_fi(epi: FIMorphism, g: FIMorphism) -> FIMorphism:
    """h with h o epi = g."""
    return FIMorphism(epi.cod, g.cod, [M.descend(a, b) for a, b in zip(epi.maps, g.maps)], check=False)


def _span(L: ModObj, cols):
    """Inclusion of the submodule of L spanned by the columns (per object)."""
    F = ModObj(L.coeff, [(0,) * c.shape[1] for c in cols])
    return M.image(ModMap(F, L, cols))[1]


def submodule_generated(V: TruncatedFIModule, gens):
    """Smallest subfunctor containing the given elements.

    ``gens`` holds triples (degree, object, vector)."""
    coeff = V.coeff
    ring = coeff.ring
    nobj = len(coeff.objects)
    by_level = [[[] for _ in range(nobj)] for _ in range(V.N + 1)]
    for d, r, vec in gens:
        if not 0 <= d <= V.N:
            raise TruncationExceeded(f"generator in degree {d} beyond truncation {V.N}")
        ri = r if isinstance(r, int) else coeff.index(r)
        col = np.array([ring.coerce(x) for x in vec], dtype=ring.dtype).reshape(-1, 1)
        if col.shape[0] != V.levels[d].dim(ri):
            raise ValidationError(f"element of length {col.shape[0]} does not fit level {d}")
        by_level[d][ri].append(col)
    incls = []
    prev = None
    for n in range(V.N + 1):
        L = V.levels[n]
        cols = []
        for i in range(nobj):
            parts = list(by_level[n][i])
            if prev is not None:
                parts.append((V.inclusions[n - 1] @ prev).blocks[i])
            cols.append(np.hstack(parts) if parts else ring.zeros(L.dim(i), 0))
        cur = _span(L, cols)
        while n >= 2:
            moved = [V.t(n, i) @ cur for i in range(1, n)]
            cols = [np.hstack([cur.blocks[k]] + [g.blocks[k] for g in moved]) for k in range(nobj)]
            nxt = _span(L, cols)
            if nxt.dom.total_dim() == cur.dom.total_dim() and M.contains(cur, nxt):
                break
            cur = nxt
        incls.append(cur)
        prev = cur
    return sub_fi(V, incls)


def random_fg_module(seed, coeff: CoeffCategory, N: int, max_gen_degree: int, max_gens: int,
                     max_relations: int = 2, entry_bound: int = 2, relation_support: int = 3):
    """A seeded random finitely generated module: a quotient of a sum of free
    modules by the subfunctor generated by a few sparse random elements."""
    rng = np.random.default_rng(seed)
    ring = coeff.ring
    if max_gens <= 0:
        return zero_module(coeff, N)
    k = int(rng.integers(1, max_gens + 1))
    frees = []
    for _ in range(k):
        d = int(rng.integers(0, min(max_gen_degree, N) + 1))
        r = int(rng.integers(0, len(coeff.objects)))
        frees.append(free_module(coeff, d, r, N))
    F = direct_sum_fi(frees)[0]
    rels = []
    for _ in range(int(rng.integers(0, max_relations + 1))):
        e = int(rng.integers(0, min(max_gen_degree + 1, N) + 1))
        r = int(rng.integers(0, len(coeff.objects)))
        dim = F.levels[e].dim(r)
        if dim == 0:
            continue
        vec = [0] * dim
        for pos in rng.choice(dim, size=min(dim, int(rng.integers(1, relation_support + 1))), replace=False):
            c = int(rng.integers(-entry_bound, entry_bound + 1))
            vec[int(pos)] = c if c else 1
        rels.append((e, r, vec))
    if not rels:
        return F
    _, incl = submodule_generated(F, rels)
    return cokernel_fi(incl)[0]


def free_element_map(V: TruncatedFIModule, d: int, r, vec) -> FIMorphism:
    """The morphism from the free module on a degree-d generator at object r
    sending the generator to ``vec`` in V_d(r)."""
    coeff = V.coeff
    ring = coeff.ring
    ri = r if isinstance(r, int) else coeff.index(r)
    F = free_module(coeff, d, ri, V.N)
    col = np.array([ring.coerce(x) for x in vec], dtype=ring.dtype).reshape(-1, 1)
    if d > V.N or col.shape[0] != V.levels[d].dim(ri):
        raise ValidationError("element does not fit the stated level")
    maps = []
    for n in range(V.N + 1):
        L = V.levels[n]
        blocks = [ring.zeros(L.dim(i), F.levels[n].dim(i)) for i in range(len(coeff.objects))]
        cols = [V.evaluate(Injection(d, n, f)).blocks[ri] @ col for f in injection_basis(d, n)]
        if cols:
            blocks[ri] = np.hstack(cols)
        maps.append(ModMap(F.levels[n], L, blocks))
    return FIMorphism(F, V, maps, check=False)


def generator_element(f: FIMorphism, d: int, r):
    """Image of the generator under a morphism out of a free module (inverse of
    ``free_element_map``): column of the identity injection [d] -> [d]."""
    ri = r if isinstance(r, int) else f.dom.coeff.index(r)
    return f.maps[d].blocks[ri][:, 0].copy()
