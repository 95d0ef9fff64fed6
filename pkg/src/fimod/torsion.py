"""Hereditary torsion theories on coefficient modules and what they induce on
FI-modules: levelwise radicals, the torsion subobject, the filtration F^n,
envelopes, closedness tests and the localization stages L^k."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from . import modules as M
from .errors import CapabilityError, NotFactorable, PluginContractError, TruncationExceeded, ValidationError
from .fi import (FIMorphism, TruncatedFIModule, compose_fi, direct_sum_fi, identity_fi, quotient_fi,
                 random_fg_module, sub_fi, submodule_generated, truncate, truncate_morphism)
from .generation import generation_degree, hom_generator_space, hom_precompose_matrix, presentation
from .homology import extend, stable_bound
from .modules import ModMap, ModObj
from .rings import CoeffCategory, is_prime
from .shift import shift, shift_t_iso_blocks, t_adjoint, t_adjoint_morphism, t_blocks, unit


# ------------------------------------------------------------------ theories

class TorsionTheory:
    """A hereditary torsion theory on modules over one coefficient category.

    Subclasses implement ``radical``; ``envelope`` is optional."""

    name = "abstract"
    hereditary = True
    has_envelope = False

    def __init__(self, coeff: CoeffCategory):
        self.coeff = coeff

    def radical(self, A: ModObj):
        """(T(A), inclusion)."""
        raise NotImplementedError

    def membership(self, A: ModObj) -> bool:
        return M.is_epi(self.radical(A)[1])

    def envelope(self, A: ModObj):
        """(E(A), unit A -> E(A))."""
        raise CapabilityError(f"theory {self.name} has no envelope")

    def envelope_map(self, f: ModMap, uA: ModMap, uB: ModMap) -> ModMap:
        """E(f); the built-in envelopes have surjective units."""
        return M.descend(uA, uB @ f)

    def __repr__(self):
        return f"<torsion theory {self.name} over {self.coeff.label()}>"


def _selection(A: ModObj, keep):
    """Inclusion of the summand spanned by coordinates keep[i] (per object)."""
    ring = A.coeff.ring
    parts, blocks = [], []
    for i, ks in enumerate(keep):
        parts.append(tuple(A.parts[i][j] for j in ks))
        b = ring.zeros(A.dim(i), len(ks))
        for c, j in enumerate(ks):
            b[j, c] = 1
        blocks.append(b)
    S = ModObj(A.coeff, parts)
    return S, ModMap(S, A, blocks, check=False)


class ZeroTheory(TorsionTheory):
    name = "zero"
    has_envelope = True

    def radical(self, A):
        Z = ModObj.zero(A.coeff)
        return Z, M.zero_map(Z, A)

    def envelope(self, A):
        return A, M.identity(A)


class FullTheory(TorsionTheory):
    name = "full"
    has_envelope = True

    def radical(self, A):
        return A, M.identity(A)

    def envelope(self, A):
        Z = ModObj.zero(A.coeff)
        return Z, M.zero_map(A, Z)


class IntegerTorsion(TorsionTheory):
    """Finite abelian groups: the radical is the torsion subgroup."""
    name = "ztorsion"

    def __init__(self, coeff):
        if coeff.kind != "integers":
            raise CapabilityError("integer torsion needs integer coefficients")
        super().__init__(coeff)

    def radical(self, A):
        return _selection(A, [[j for j, d in enumerate(p) if d] for p in A.parts])


def _valuation(d, p):
    k = 0
    while d % p == 0:
        d //= p
        k += 1
    return k


class PrimaryTorsion(TorsionTheory):
    """Finite abelian p-groups."""

    def __init__(self, coeff, p):
        if coeff.kind != "integers":
            raise CapabilityError("p-primary torsion needs integer coefficients")
        if not is_prime(p):
            raise ValidationError(f"{p} is not prime")
        super().__init__(coeff)
        self.p = p
        self.name = f"p-primary:{p}"

    def radical(self, A):
        ring = A.coeff.ring
        parts, blocks = [], []
        for i, ords in enumerate(A.parts):
            cols, orders = [], []
            for j, d in enumerate(ords):
                k = _valuation(d, self.p) if d else 0
                if k:
                    c = ring.zeros(len(ords), 1)
                    c[j, 0] = d // self.p ** k
                    cols.append(c)
                    orders.append(self.p ** k)
            parts.append(tuple(orders))
            blocks.append(np.hstack(cols) if cols else ring.zeros(len(ords), 0))
        T = ModObj(A.coeff, parts)
        return T, ModMap(T, A, blocks, check=False)


class SupportTheory(TorsionTheory):
    """Over a discrete category: modules vanishing outside the objects in sigma."""

    has_envelope = True

    def __init__(self, coeff, sigma):
        if coeff.kind != "discrete":
            raise CapabilityError("support theories need a discrete coefficient category")
        super().__init__(coeff)
        self.sigma = tuple(sigma)
        self.idx = {coeff.index(r) for r in self.sigma}
        self.name = "support:" + ",".join(self.sigma)

    def radical(self, A):
        return _selection(A, [list(range(A.dim(i))) if i in self.idx else [] for i in range(len(A.parts))])

    def envelope(self, A):
        S, incl = _selection(A, [[] if i in self.idx else list(range(A.dim(i))) for i in range(len(A.parts))])
        proj = ModMap(A, S, [b.T.copy() for b in incl.blocks], check=False)
        return S, proj


def parse_theory(text: str, coeff: CoeffCategory) -> TorsionTheory:
    """Registry lookup: zero, full, ztorsion, p-primary:<p>, support:<objs>."""
    if text == "zero":
        return ZeroTheory(coeff)
    if text == "full":
        return FullTheory(coeff)
    if text == "ztorsion":
        return IntegerTorsion(coeff)
    if text.startswith("p-primary:"):
        try:
            p = int(text.split(":", 1)[1])
        except ValueError:
            raise ValidationError(f"bad prime in {text!r}") from None
        return PrimaryTorsion(coeff, p)
    if text.startswith("support:"):
        objs = [r for r in text.split(":", 1)[1].split(",") if r]
        try:
            return SupportTheory(coeff, objs)
        except ValueError as e:
            raise ValidationError(str(e)) from None
    raise ValidationError(f"unknown torsion theory {text!r}")


# ------------------------------------------------------------ levelwise radical

def radical_levelwise(V: TruncatedFIModule, tau: TorsionTheory):
    incls = [tau.radical(L)[1] for L in V.levels]
    try:
        return sub_fi(V, incls)
    except NotFactorable:
        raise PluginContractError(f"radical of {tau.name} is not functorial") from None


def _preimage(f: ModMap, sub: ModMap) -> ModMap:
    """Inclusion of f^-1(im sub) into dom f."""
    _, toA, _ = M.pullback(f, sub)
    return M.image(toA)[1]


def _sub_or_contract(V, incls, tau):
    try:
        return sub_fi(V, incls)
    except NotFactorable:
        raise PluginContractError(f"radical of {tau.name} is not functorial") from None


def filtration_F(V: TruncatedFIModule, tau: TorsionTheory, n: int):
    """F^n V: elements all of whose images in levels m >= n (within the
    window) are torsion.  Functoriality reduces this to the single chain map
    to level max(n, d)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    incls = []
    for d in range(V.N + 1):
        m = max(n, d)
        if m > V.N:
            incls.append(M.identity(V.levels[d]))
        else:
            incls.append(_preimage(V.chain(d, m), tau.radical(V.levels[m])[1]))
    return _sub_or_contract(V, incls, tau)


# ------------------------------------------------------------ torsion subobject

@dataclass
class TorsionSubobject:
    sub: TruncatedFIModule
    inclusion: FIMorphism
    stabilized_at: int
    certificate_level: object   # levels >= this are torsion, or None
    chain_dims: list = field(default_factory=list)

    def to_json(self):
        return {"stabilizedAt": self.stabilized_at, "certificateLevel": self.certificate_level,
                "chainDims": self.chain_dims, "levelDims": [list(L.dims()) for L in self.sub.levels]}


def _same_sub(a: ModMap, b: ModMap) -> bool:
    return M.contains(a, b) and M.contains(b, a)


def torsion_subobject(V: TruncatedFIModule, tau: TorsionTheory, max_shift: int = 6) -> TorsionSubobject:
    """Stage a at level n is the preimage of T(V_{n+a}) under the standard
    map V_n -> V_{n+a}; the stages increase with a.  Levels beyond the
    window come from the stable-range extension of V."""
    bound, verified, status = stable_bound(V)
    N = V.N
    chain_dims = []
    E = V
    stages = []
    for a in range(max_shift + 1):
        if N + a > E.N:
            if not verified:
                raise TruncationExceeded(
                    f"stable range not verified ({status}); torsion stages need levels beyond {N}",
                    needed=N + a, truncation=N, partial_chain=chain_dims)
            E = extend(E, N + a, bound=bound, trusted=True)
        incls = [_preimage(E.chain(n, n + a), tau.radical(E.levels[n + a])[1]) for n in range(N + 1)]
        stages.append(incls)
        chain_dims.append([list(i.dom.dims()) for i in incls])
        if a and all(_same_sub(x, y) for x, y in zip(stages[-2], stages[-1])):
            W, inc = _sub_or_contract(V, stages[-2], tau)
            # levels above stabilizedAt + genDegree are torsion
            gd = generation_degree(V).gen_degree
            cert = 0 if gd is None else (a + gd if isinstance(gd, int) else None)
            return TorsionSubobject(W, inc, a - 1, cert, chain_dims)
    raise TruncationExceeded(f"torsion stages did not stabilize within shift {max_shift}",
                             needed=max_shift + 1, truncation=N, partial_chain=chain_dims)


def membership_overline_T(V: TruncatedFIModule, tau: TorsionTheory, max_shift: int = 6) -> bool:
    ts = torsion_subobject(V, tau, max_shift)
    return all(M.is_epi(m) for m in ts.inclusion.maps)


def eventually_torsion_levels(V: TruncatedFIModule, tau: TorsionTheory):
    """Levels n with V_n not torsion (for reports)."""
    return [n for n, L in enumerate(V.levels) if not tau.membership(L)]


# ------------------------------------------------------------ envelopes

def envelope_fi(V: TruncatedFIModule, tau: TorsionTheory):
    if not tau.has_envelope:
        raise CapabilityError(f"theory {tau.name} has no envelope")
    data = [tau.envelope(L) for L in V.levels]
    units = [u for _, u in data]
    incl = [tau.envelope_map(V.inclusions[n], units[n], units[n + 1]) for n in range(V.N)]
    trans = [[tau.envelope_map(V.t(n, i), units[n], units[n]) for i in range(1, n)] for n in range(V.N + 1)]
    E = TruncatedFIModule(V.coeff, V.N, [e for e, _ in data], incl, trans, check=False)
    return E, FIMorphism(V, E, units, check=False)


# ------------------------------------------------------------ closedness

@dataclass
class ClosedVerdict:
    passed: bool
    trials: int
    counterexample: dict | None = None
    note: str = "no counterexample found (semi-decision)"

    def to_json(self):
        return {"pass": self.passed, "trials": self.trials, "counterexample": self.counterexample,
                "note": self.note if self.passed else "counterexample found"}


def hom_map_bijective(u: FIMorphism, L: TruncatedFIModule):
    """(bijective, dim Hom(B, L), dim Hom(A, L), rank of Hom(u, L))."""
    ring = L.coeff.ring
    PA, PB = presentation(u.dom), presentation(u.cod)
    HA, _ = hom_generator_space(PA, L)
    HB, _ = hom_generator_space(PB, L)
    X = ring.reduce(hom_precompose_matrix(u, PA, PB, L) @ HB) if HB.shape[1] else HB
    r = linalg.rank(ring, X) if X.size else 0
    return r == HB.shape[1] == HA.shape[1], HB.shape[1], HA.shape[1], r


def _random_elements(W: TruncatedFIModule, incl: FIMorphism, rng, count):
    """Images in the ambient module of random elements of W."""
    ring = W.coeff.ring
    out = []
    cands = [(n, i) for n in range(W.N + 1) for i in range(len(W.coeff.objects)) if W.levels[n].dim(i)]
    if not cands:
        return out
    for _ in range(count):
        n, i = cands[int(rng.integers(len(cands)))]
        vec = [int(x) for x in rng.integers(-2, 3, size=W.levels[n].dim(i))]
        img = (incl.maps[n] @ M.element_map(W.levels[n], i, np.array(vec, dtype=ring.dtype))).blocks[i][:, 0]
        out.append((n, i, img.copy()))
    return out


def _class_part(X: TruncatedFIModule, tau, cls, a, rng):
    if cls == "T-tilde":
        ts = torsion_subobject(X, tau)
        return ts.sub, ts.inclusion
    level = a if cls == "T-hat-a" else int(rng.integers(0, X.N + 1))
    return filtration_F(X, tau, level)


def sample_class_iso(tau: TorsionTheory, cls: str, a: int, N: int, rng, max_gen_degree=2, max_gens=2):
    """A random u: A -> A/K + T1 with K and T1 in the requested class; u has
    kernel K and cokernel T1."""
    coeff = tau.coeff
    A = random_fg_module(int(rng.integers(1 << 30)), coeff, N, max_gen_degree, max_gens)
    X = random_fg_module(int(rng.integers(1 << 30)), coeff, N, max_gen_degree, max_gens)
    W, wi = _class_part(A, tau, cls, a, rng)
    gens = _random_elements(W, wi, rng, int(rng.integers(0, 3)))
    K, ki = submodule_generated(A, gens)
    data = [M.cokernel_with_section(m) for m in ki.maps]
    Q, q = quotient_fi(A, [d[1] for d in data], [d[2] for d in data])
    T1, _ = _class_part(X, tau, cls, a, rng)
    B, injs, _ = direct_sum_fi([Q, T1])
    u = compose_fi(injs[0], q)
    return u


def is_closed(L: TruncatedFIModule, tau: TorsionTheory, cls: str = "T-hat-a", a: int = 0,
              trials: int = 20, seed: int = 0, sampler=None) -> ClosedVerdict:
    """Randomized test of Hom(u, L) bijective for sampled u whose kernel and
    cokernel lie in the class (T-hat-a, T-hat or T-tilde)."""
    if not L.coeff.is_field:
        raise CapabilityError("closedness tests solve Hom systems over fields only")
    if cls not in ("T-hat-a", "T-hat", "T-tilde"):
        raise ValidationError(f"unknown class {cls!r}")
    rng = np.random.default_rng(seed)
    sampler = sampler or (lambda: sample_class_iso(tau, cls, a, L.N, rng))
    for k in range(trials):
        u = sampler()
        if u.N != L.N:
            u = truncate_morphism(u, L.N)
        ok, hb, ha, r = hom_map_bijective(u, L)
        if not ok:
            return ClosedVerdict(False, k + 1, {
                "trial": k, "domainDims": u.dom.dim_list(), "codomainDims": u.cod.dim_list(),
                "homB": hb, "homA": ha, "rank": r})
    return ClosedVerdict(True, trials)


# ------------------------------------------------------------ localization stages

def theta(W: TruncatedFIModule, k: int, dom=None, cod=None) -> FIMorphism:
    """The identification T^k T^1 W -> T^{k+1} W."""
    dom = dom or t_adjoint(t_adjoint(W, 1), k)
    cod = cod or t_adjoint(W, k + 1)
    maps = []
    for d in range(W.N + 1):
        rel = shift_t_iso_blocks(d, k)
        src, dst = [], []
        for A, p in t_blocks(d, k):
            for B, b in t_blocks(d - len(A), 1):
                src.append(((A, p), (B, b)))
        dblocks = t_blocks(d, k + 1)
        didx = {lab: j for j, lab in enumerate(dblocks)}
        dom_pieces = [W.levels[d - len(A) - len(B)] for (A, _), (B, _) in src]
        cod_pieces = [W.levels[d - len(C)] for C, _ in dblocks]
        entries = {(didx[rel[s]], j): M.identity(dom_pieces[j]) for j, s in enumerate(src)}
        maps.append(M.block_map(dom.levels[d], cod.levels[d], dom_pieces, cod_pieces, entries))
    return FIMorphism(dom, cod, maps, check=False)


@dataclass
class LStage:
    L: TruncatedFIModule      # T^k S^k E V, truncated at N - k
    l: FIMorphism             # V -> L^k
    c: FIMorphism | None      # L^k -> L^{k+1} (window N - k - 1)


def l_stage(V: TruncatedFIModule, tau: TorsionTheory, k: int) -> LStage:
    if k < 0:
        raise ValueError("k must be non-negative")
    if k > V.N:
        raise TruncationExceeded(f"stage {k} exceeds truncation {V.N}", needed=k, truncation=V.N)
    E, e = envelope_fi(V, tau)
    eta = unit(E, k) if k else identity_fi(E)
    L = eta.cod
    l = compose_fi(eta, truncate_morphism(e, L.N))
    c = None
    if k + 1 <= V.N:
        SkE = shift(E, k)
        eta1 = unit(SkE, 1)                              # S^k E -> T^1 S^{k+1} E, window N-k-1
        Tk = t_adjoint_morphism(eta1, k)                 # T^k S^k E -> T^k T^1 S^{k+1} E
        th = theta(shift(E, k + 1), k, dom=Tk.cod)
        c = compose_fi(th, Tk)
        c = FIMorphism(truncate(L, c.N), c.cod, c.maps, check=False)
    return LStage(L, l, c)


def l_truncated(V: TruncatedFIModule, tau: TorsionTheory, kmax: int):
    """The chain L^0 -> L^1 -> ... -> L^kmax with dimension trajectories."""
    if kmax > V.N:
        raise TruncationExceeded(f"kmax {kmax} exceeds truncation {V.N}", needed=kmax, truncation=V.N)
    stages = [l_stage(V, tau, k) for k in range(kmax + 1)]
    traj = [[list(s.L.levels[d].dims()) if d <= s.L.N else None for s in stages] for d in range(V.N + 1)]
    iso = [s.c is not None and all(M.is_iso(m) for m in s.c.maps) for s in stages[:-1]]
    stabilized = None
    for k0 in range(len(iso)):
        if all(iso[k0:]):
            stabilized = k0
            break
    triangle = all(
        stages[k + 1].l.maps[n] == stages[k].c.maps[n] @ stages[k].l.maps[n]
        for k in range(kmax) for n in range(stages[k].c.N + 1))
    return {"theory": tau.name, "kmax": kmax, "trajectories": traj, "consecutiveIso": iso,
            "stabilizedAt": stabilized, "triangle": triangle}
