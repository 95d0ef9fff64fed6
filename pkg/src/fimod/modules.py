"""Finitely presented modules over a coefficient category and maps between them.

Over a field (or a discrete category over a field) a module is a tuple of
dimensions, one per object.  Over Z a module is a diagonal presentation
``Z/d_1 + ... + Z/d_g`` where ``d_i = 0`` means a free summand and otherwise
``d_i >= 2``.  Kernels, cokernels and images come back in Smith form (torsion
invariant factors in divisibility order, then the free part); direct sums
simply concatenate.  Element coordinates are kept reduced modulo ``d_i``.
"""

from __future__ import annotations

import numpy as np

from . import linalg
from .rings import CoeffCategory


class ModObj:
    __slots__ = ("coeff", "parts")

    def __init__(self, coeff: CoeffCategory, parts):
        self.coeff = coeff
        self.parts = tuple(tuple(int(d) for d in p) for p in parts)
        if len(self.parts) != len(coeff.objects):
            raise ValueError("one order list per object is required")
        for p in self.parts:
            for d in p:
                if d == 1 or d < 0 or (d and coeff.is_field):
                    raise ValueError(f"bad cyclic order {d}")

    @classmethod
    def from_dims(cls, coeff, dims):
        if isinstance(dims, int):
            dims = [dims]
        return cls(coeff, [(0,) * d for d in dims])

    @classmethod
    def zero(cls, coeff):
        return cls(coeff, [()] * len(coeff.objects))

    def dim(self, i: int = 0) -> int:
        return len(self.parts[i])

    def dims(self):
        return tuple(len(p) for p in self.parts)

    def total_dim(self) -> int:
        return sum(self.dims())

    def is_zero(self) -> bool:
        return self.total_dim() == 0

    def __eq__(self, other):
        return isinstance(other, ModObj) and self.coeff == other.coeff and self.parts == other.parts

    def __hash__(self):
        return hash((self.coeff, self.parts))

    def __repr__(self):
        if self.coeff.is_field:
            return f"ModObj(dims={self.dims()})"
        return f"ModObj(orders={self.parts})"


def _rel(ring, ords):
    tors = [i for i, d in enumerate(ords) if d]
    R = ring.zeros(len(ords), len(tors))
    for k, i in enumerate(tors):
        R[i, k] = ords[i]
    return R


def _reduce(ring, M, ords):
    M = ring.reduce(M)
    if ring.is_field or not any(ords):
        return M
    M = M.copy()
    for i, d in enumerate(ords):
        if d:
            M[i] = M[i] % d
    return M


class ModMap:
    __slots__ = ("dom", "cod", "blocks")

    def __init__(self, dom: ModObj, cod: ModObj, blocks, check=True):
        if dom.coeff != cod.coeff:
            raise ValueError("domain and codomain have different coefficients")
        ring = dom.coeff.ring
        blocks = list(blocks)
        if len(blocks) != len(dom.parts):
            raise ValueError("one block per object is required")
        out = []
        for i, b in enumerate(blocks):
            shape = (cod.dim(i), dom.dim(i))
            b = np.array(b, dtype=ring.dtype)
            if b.size == 0:
                b = ring.zeros(*shape)
            if b.shape != shape:
                raise ValueError(f"block {i} has shape {b.shape}, expected {shape}")
            b = _reduce(ring, b, cod.parts[i])
            if check and not ring.is_field:
                for j, d in enumerate(dom.parts[i]):
                    if d and any(_reduce(ring, b[:, j:j + 1] * d, cod.parts[i]).ravel()):
                        raise ValueError("integer matrix does not respect relations")
            b.flags.writeable = False
            out.append(b)
        self.dom = dom
        self.cod = cod
        self.blocks = tuple(out)

    @property
    def coeff(self):
        return self.dom.coeff

    def __matmul__(self, other: "ModMap") -> "ModMap":
        return compose(self, other)

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, neg(other))

    def __neg__(self):
        return neg(self)

    def __eq__(self, other):
        return (isinstance(other, ModMap) and self.dom == other.dom and self.cod == other.cod
                and all(np.array_equal(a, b) for a, b in zip(self.blocks, other.blocks)))

    __hash__ = None

    def __repr__(self):
        return f"ModMap({self.dom!r} -> {self.cod!r})"


# ------------------------------------------------------------ basic maps

def identity(A: ModObj) -> ModMap:
    ring = A.coeff.ring
    return ModMap(A, A, [ring.eye(A.dim(i)) for i in range(len(A.parts))], check=False)


def zero_map(A: ModObj, B: ModObj) -> ModMap:
    ring = A.coeff.ring
    return ModMap(A, B, [ring.zeros(B.dim(i), A.dim(i)) for i in range(len(A.parts))], check=False)


def compose(g: ModMap, f: ModMap) -> ModMap:
    """g o f."""
    if f.cod != g.dom:
        raise ValueError("maps are not composable")
    ring = f.coeff.ring
    return ModMap(f.dom, g.cod, [ring.matmul(b, a) for a, b in zip(f.blocks, g.blocks)], check=False)


def add(f: ModMap, g: ModMap) -> ModMap:
    if f.dom != g.dom or f.cod != g.cod:
        raise ValueError("maps have different shapes")
    return ModMap(f.dom, f.cod, [a + b for a, b in zip(f.blocks, g.blocks)], check=False)


def neg(f: ModMap) -> ModMap:
    return ModMap(f.dom, f.cod, [-a for a in f.blocks], check=False)


def scale(c, f: ModMap) -> ModMap:
    c = f.coeff.ring.coerce(c)
    return ModMap(f.dom, f.cod, [a * c for a in f.blocks], check=False)


def is_zero(f: ModMap) -> bool:
    return all(not np.any(b != 0) for b in f.blocks)


# ------------------------------------------------------------ direct sums

def direct_sum(objs, coeff: CoeffCategory | None = None):
    """Direct sum with injections and projections."""
    objs = list(objs)
    if not objs:
        if coeff is None:
            raise ValueError("empty direct sum needs a coefficient category")
        return ModObj.zero(coeff), [], []
    coeff = objs[0].coeff
    if any(o.coeff != coeff for o in objs):
        raise ValueError("mixed coefficient categories")
    ring = coeff.ring
    nobj = len(coeff.objects)
    S = ModObj(coeff, [sum((o.parts[i] for o in objs), ()) for i in range(nobj)])
    injs, projs = [], []
    offs = [0] * nobj
    for o in objs:
        ib, pb = [], []
        for i in range(nobj):
            e = ring.zeros(S.dim(i), o.dim(i))
            for k in range(o.dim(i)):
                e[offs[i] + k, k] = 1
            ib.append(e)
            pb.append(e.T.copy())
            offs[i] += o.dim(i)
        injs.append(ModMap(o, S, ib, check=False))
        projs.append(ModMap(S, o, pb, check=False))
    return S, injs, projs


def hstack_maps(maps, dom: ModObj | None = None) -> ModMap:
    """[f_1 ... f_k]: (+) A_i -> B."""
    maps = list(maps)
    if dom is None:
        dom = direct_sum([f.dom for f in maps], maps[0].coeff)[0] if maps else None
    cod = maps[0].cod
    ring = cod.coeff.ring
    blocks = []
    for i in range(len(cod.parts)):
        cols = [f.blocks[i] for f in maps]
        blocks.append(np.hstack(cols) if cols else ring.zeros(cod.dim(i), 0))
    return ModMap(dom, cod, blocks, check=False)


def vstack_maps(maps, cod: ModObj | None = None) -> ModMap:
    """[g_1; ...; g_k]: A -> (+) B_i."""
    maps = list(maps)
    if cod is None:
        cod = direct_sum([g.cod for g in maps], maps[0].coeff)[0]
    dom = maps[0].dom
    blocks = [np.vstack([g.blocks[i] for g in maps]) for i in range(len(dom.parts))]
    return ModMap(dom, cod, blocks, check=False)


def block_map(dom: ModObj, cod: ModObj, dom_pieces, cod_pieces, entries) -> ModMap:
    """Map between direct sums given by ``entries[(row, col)]: dom_pieces[col] -> cod_pieces[row]``.

    ``dom`` and ``cod`` must be the direct sums of the pieces in order."""
    ring = dom.coeff.ring
    nobj = len(dom.parts)
    roff = [[0] * nobj]
    for o in cod_pieces:
        roff.append([roff[-1][i] + o.dim(i) for i in range(nobj)])
    coff = [[0] * nobj]
    for o in dom_pieces:
        coff.append([coff[-1][i] + o.dim(i) for i in range(nobj)])
    blocks = [ring.zeros(cod.dim(i), dom.dim(i)) for i in range(nobj)]
    for (r, c), f in entries.items():
        for i in range(nobj):
            b = f.blocks[i]
            if b.size:
                blocks[i][roff[r][i]:roff[r + 1][i], coff[c][i]:coff[c + 1][i]] += b
    return ModMap(dom, cod, blocks, check=False)


# ------------------------------------------------------------ kernels etc.

def _field_kernel(ring, F):
    return linalg.nullspace(ring, F)


def _field_cokernel(ring, F):
    m = F.shape[0]
    if F.shape[1] == 0:
        return ring.eye(m), ring.eye(m)
    _, piv = linalg.rref(ring, F.T)
    free = [c for c in range(m) if c not in set(piv)]
    P = linalg.nullspace(ring, F.T).T.copy()
    S = ring.zeros(m, len(free))
    for k, f in enumerate(free):
        S[f, k] = 1
    return P, S


def _z_image_of(ring, G, ordsB, ordsA=None):
    """Image of G: Z^m -> B.  Returns (orders, inclusion, corestriction)."""
    m = G.shape[1]
    K = linalg.int_kernel(np.hstack([G, _rel(ring, ordsB)]))
    Kx = K[:m, :]
    U, Ui, D, _ = linalg.smith_full(Kx)
    diag = linalg.diagonal(D)
    ords = [diag[i] if i < len(diag) else 0 for i in range(m)]
    keep = [i for i in range(m) if ords[i] != 1]
    new = [ords[i] for i in keep]
    incl = _reduce(ring, ring.matmul(G, Ui[:, keep]), ordsB)
    core = _reduce(ring, U[keep, :], new)
    return new, incl, core


def _z_cokernel(ring, F, ordsB):
    g = len(ordsB)
    M = linalg.distinct_columns(np.hstack([F, _rel(ring, ordsB)]))
    U, Ui, D, _ = linalg.smith_full(M, track_v=False)
    diag = linalg.diagonal(D)
    ords = [diag[i] if i < len(diag) else 0 for i in range(g)]
    keep = [i for i in range(g) if ords[i] != 1]
    new = [ords[i] for i in keep]
    P = _reduce(ring, U[keep, :], new)
    S = _reduce(ring, Ui[:, keep].copy(), ordsB)
    return new, P, S


def _z_kernel(ring, F, ordsA, ordsB):
    gA = len(ordsA)
    K = linalg.int_kernel(np.hstack([F, _rel(ring, ordsB)]))
    X = K[:gA, :]
    new, incl, _ = _z_image_of(ring, X, ordsA)
    return new, incl


def kernel(f: ModMap):
    """(K, inclusion K -> dom f)."""
    coeff = f.coeff
    ring = coeff.ring
    parts, blocks = [], []
    for i, F in enumerate(f.blocks):
        if coeff.is_field:
            N = _field_kernel(ring, F)
            parts.append((0,) * N.shape[1])
            blocks.append(N)
        else:
            new, incl = _z_kernel(ring, F, f.dom.parts[i], f.cod.parts[i])
            parts.append(new)
            blocks.append(incl)
    K = ModObj(coeff, parts)
    return K, ModMap(K, f.dom, blocks, check=False)


def cokernel_with_section(f: ModMap):
    """(C, projection cod f -> C, a set-theoretic linear section C -> cod f)."""
    coeff = f.coeff
    ring = coeff.ring
    parts, projs, secs = [], [], []
    for i, F in enumerate(f.blocks):
        if coeff.is_field:
            P, S = _field_cokernel(ring, F)
            parts.append((0,) * P.shape[0])
        else:
            new, P, S = _z_cokernel(ring, F, f.cod.parts[i])
            parts.append(new)
        projs.append(P)
        secs.append(S)
    C = ModObj(coeff, parts)
    return C, ModMap(f.cod, C, projs, check=False), ModMap(C, f.cod, secs, check=False)


def cokernel(f: ModMap):
    """(C, projection cod f -> C)."""
    C, p, _ = cokernel_with_section(f)
    return C, p


def image(f: ModMap):
    """(I, inclusion I -> cod f, corestriction dom f -> I)."""
    coeff = f.coeff
    ring = coeff.ring
    parts, incls, cores = [], [], []
    for i, F in enumerate(f.blocks):
        if coeff.is_field:
            R, piv = linalg.rref(ring, F)
            parts.append((0,) * len(piv))
            incls.append(F[:, piv].copy())
            cores.append(R[:len(piv), :].copy())
        else:
            new, incl, core = _z_image_of(ring, F, f.cod.parts[i])
            parts.append(new)
            incls.append(incl)
            cores.append(core)
    I = ModObj(coeff, parts)
    return I, ModMap(I, f.cod, incls, check=False), ModMap(f.dom, I, cores)


def solve_blocks(f: ModMap, Y_blocks):
    """Blockwise X with f X = Y (Y given as matrices into cod f), or None."""
    ring = f.coeff.ring
    out = []
    for i, (F, Y) in enumerate(zip(f.blocks, Y_blocks)):
        if Y.shape[1] == 0:
            out.append(ring.zeros(F.shape[1], 0))
            continue
        if f.coeff.is_field:
            X = linalg.solve(ring, F, Y)
        else:
            ordsB = f.cod.parts[i]
            X = linalg.int_solve(np.hstack([F, _rel(ring, ordsB)]), Y)
            if X is not None:
                X = X[:F.shape[1], :]
        if X is None:
            return None
        out.append(X)
    return out


def lift(mono: ModMap, g: ModMap) -> ModMap:
    """h with mono o h = g.  Raises NotFactorable if g does not land in the image."""
    from .errors import NotFactorable
    if mono.cod != g.cod:
        raise ValueError("lift needs a common codomain")
    X = solve_blocks(mono, g.blocks)
    if X is None:
        raise NotFactorable("map does not factor through the subobject")
    return ModMap(g.dom, mono.dom, X)


def lift_many(mono: ModMap, gs) -> list:
    """Lift several maps through the same mono with one solve per object."""
    from .errors import NotFactorable
    gs = list(gs)
    if not gs:
        return []
    ring = mono.coeff.ring
    Y = [np.hstack([g.blocks[i] for g in gs]) if gs else None for i in range(len(mono.cod.parts))]
    X = solve_blocks(mono, Y)
    if X is None:
        raise NotFactorable("map does not factor through the subobject")
    out = []
    offs = [0] * len(Y)
    for g in gs:
        blocks = []
        for i in range(len(Y)):
            w = g.dom.dim(i)
            blocks.append(X[i][:, offs[i]:offs[i] + w] if w else ring.zeros(mono.dom.dim(i), 0))
            offs[i] += w
        out.append(ModMap(g.dom, mono.dom, blocks))
    return out


def section(epi: ModMap) -> ModMap:
    """A linear section s with epi o s = id (epi must be surjective)."""
    from .errors import NotFactorable
    ring = epi.coeff.ring
    X = solve_blocks(epi, [ring.eye(epi.cod.dim(i)) for i in range(len(epi.cod.parts))])
    if X is None:
        raise NotFactorable("map is not an epimorphism")
    return ModMap(epi.cod, epi.dom, X, check=False)


def descend(epi: ModMap, g: ModMap, sec: ModMap | None = None) -> ModMap:
    """h with h o epi = g.  Raises NotFactorable if g does not kill ker(epi)."""
    from .errors import NotFactorable
    if epi.dom != g.dom:
        raise ValueError("descend needs a common domain")
    if sec is None:
        sec = section(epi)
    h = compose(g, sec)
    try:
        # a section over Z need not be a homomorphism; h must be
        h = ModMap(epi.cod, g.cod, h.blocks)
    except ValueError:
        raise NotFactorable("map does not vanish on the kernel") from None
    if compose(h, epi) != g:
        raise NotFactorable("map does not vanish on the kernel")
    return h


def pullback(f: ModMap, g: ModMap):
    """(P, toA, toB) with f o toA = g o toB."""
    if f.cod != g.cod:
        raise ValueError("malformed diagram: pullback needs a common codomain")
    S, injs, projs = direct_sum([f.dom, g.dom])
    h = hstack_maps([f, neg(g)], S)
    P, incl = kernel(h)
    return P, compose(projs[0], incl), compose(projs[1], incl)


def is_mono(f: ModMap) -> bool:
    return kernel(f)[0].is_zero()


def is_epi(f: ModMap) -> bool:
    return cokernel(f)[0].is_zero()


def is_iso(f: ModMap) -> bool:
    return is_mono(f) and is_epi(f)


def inverse(f: ModMap) -> ModMap:
    if not is_iso(f):
        raise ValueError("map is not invertible")
    return lift(f, identity(f.cod))


def contains(big: ModMap, small: ModMap) -> bool:
    """Whether im(small) is inside im(big) (both maps into the same object)."""
    _, p = cokernel(big)
    return is_zero(compose(p, small))


def invariants(A: ModObj):
    """Isomorphism invariants: per object, (torsion invariant factors, free rank)."""
    ring = A.coeff.ring
    out = []
    for p in A.parts:
        if A.coeff.is_field:
            out.append(((), len(p)))
            continue
        tors = [d for d in p if d]
        free = len(p) - len(tors)
        if tors:
            _, D, _ = linalg.smith_normal_form(_rel(ring, tors))
            fac = tuple(d for d in linalg.diagonal(D) if d != 1)
        else:
            fac = ()
        out.append((fac, free))
    return tuple(out)


def isomorphic(A: ModObj, B: ModObj) -> bool:
    return A.coeff == B.coeff and invariants(A) == invariants(B)


def element_map(A: ModObj, i: int, vec) -> ModMap:
    """The map from the free rank-one module at object i sending 1 to ``vec``."""
    coeff = A.coeff
    ring = coeff.ring
    one = ModObj(coeff, [(0,) if k == i else () for k in range(len(coeff.objects))])
    blocks = [ring.zeros(A.dim(k), 1 if k == i else 0) for k in range(len(coeff.objects))]
    col = np.asarray(vec, dtype=ring.dtype).reshape(-1, 1)
    blocks[i] = col
    return ModMap(one, A, blocks)
