"""Named example modules."""

from __future__ import annotations

import numpy as np

from . import modules as M
from .fi import TruncatedFIModule, direct_sum_fi, free_module, random_fg_module, zero_module
from .modules import ModMap, ModObj
from .rings import discrete, integers, parse_coeff, prime_field, rationals

_FIELDS = {"f2": prime_field(2), "f3": prime_field(3), "q": rationals(), "z": integers()}
DISCRETE = discrete(prime_field(2), ["r1", "r2"])


def constant_module(coeff, N, L: ModObj, iota: ModMap | None = None) -> TruncatedFIModule:
    """Every level L, all transpositions trivial, inclusions ``iota`` (identity by default)."""
    iota = iota or M.identity(L)
    return TruncatedFIModule(coeff, N, [L] * (N + 1), [iota] * N,
                             [[M.identity(L)] * max(n - 1, 0) for n in range(N + 1)])


def atomic(coeff, degree, N, parts=None) -> TruncatedFIModule:
    """The module that is k (or the given presentation) at one level and zero elsewhere.

    Only degrees 0 and 1 carry trivially well-defined transpositions."""
    if degree > 1:
        raise ValueError("atomic modules are provided in degrees 0 and 1")
    A = ModObj(coeff, parts) if parts is not None else ModObj.from_dims(coeff, [1] * len(coeff.objects))
    O = ModObj.zero(coeff)
    levels = [A if n == degree else O for n in range(N + 1)]
    incl = [M.zero_map(levels[n], levels[n + 1]) for n in range(N)]
    trans = [[M.identity(levels[n])] * max(n - 1, 0) for n in range(N + 1)]
    return TruncatedFIModule(coeff, N, levels, incl, trans)


def mixed_z(N=5) -> TruncatedFIModule:
    """Z + Z/2 at every level with identity structure maps."""
    Z = integers()
    return constant_module(Z, N, ModObj(Z, [(0, 2)]))


def twisted_z(N=5) -> TruncatedFIModule:
    """Z + Z/2 at every level, inclusions (x, y) -> (x, x + y)."""
    Z = integers()
    L = ModObj(Z, [(0, 2)])
    iota = ModMap(L, L, [np.array([[1, 0], [1, 1]], dtype=object)])
    return constant_module(Z, N, L, iota)


def doubling_z(N=5) -> TruncatedFIModule:
    """Z at every level, inclusions multiply by 2."""
    Z = integers()
    L = ModObj(Z, [(0,)])
    return constant_module(Z, N, L, ModMap(L, L, [np.array([[2]], dtype=object)]))


def _build():
    out = {}
    for tag, K in _FIELDS.items():
        for d in range(4):
            out[f"free-{d}-{tag}"] = (lambda d=d, K=K: free_module(K, d, 0, 5 if d < 3 else 4),
                                      f"free module on one generator in degree {d} over {K.label()}")
    out["zero-f2"] = (lambda: zero_module(prime_field(2), 5), "the zero module")
    out["atomic-0-f2"] = (lambda: atomic(prime_field(2), 0, 5), "k in degree 0, zero above")
    out["atomic-0-z"] = (lambda: atomic(integers(), 0, 5), "Z in degree 0, zero above")
    out["atomic-1-f3"] = (lambda: atomic(prime_field(3), 1, 5), "k in degree 1, zero elsewhere")
    out["atomic-0-z2"] = (lambda: atomic(integers(), 0, 5, [(2,)]), "Z/2 in degree 0, zero above")
    out["mixed-z"] = (lambda: mixed_z(5), "Z + Z/2 tower with identity maps")
    out["twisted-z"] = (lambda: twisted_z(5), "Z + Z/2 tower, inclusions (x, y) -> (x, x + y)")
    out["doubling-z"] = (lambda: doubling_z(5), "Z tower, inclusions multiply by 2")
    out["free-1-r1-disc"] = (lambda: free_module(DISCRETE, 1, "r1", 4),
                             "free module of degree 1 at object r1 of a two-object discrete category")
    out["disc-mixed"] = (lambda: direct_sum_fi([free_module(DISCRETE, 0, "r1", 4),
                                                free_module(DISCRETE, 1, "r2", 4)])[0],
                         "free degree 0 at r1 plus free degree 1 at r2")
    out["disc-random"] = (lambda: random_fg_module(3, DISCRETE, 4, 2, 3),
                          "seeded quotient of free modules over the discrete category")
    out["atomic-0-disc"] = (lambda: atomic(DISCRETE, 0, 4), "k at both objects in degree 0")
    return out


_CORPUS = _build()


def names():
    return sorted(_CORPUS)


def describe(name):
    return _CORPUS[name][1]


def get(name) -> TruncatedFIModule:
    try:
        return _CORPUS[name][0]()
    except KeyError:
        raise KeyError(f"unknown corpus entry {name!r}") from None


def corpus():
    """All entries as (name, module)."""
    return [(n, get(n)) for n in names()]


def random_modules(count, seed=0):
    """Seeded random finitely generated modules over F2, F3, F5, Q and Z.

    Sizes are kept small enough for exhaustive checks: truncation 5 over
    finite fields, 4 over Q and Z."""
    rng = np.random.default_rng(seed)
    kinds = ["f2", "f3", "f5", "q", "z"]
    out = []
    for k in range(count):
        tag = kinds[k % len(kinds)]
        K = parse_coeff(tag)
        N = 5 if tag.startswith("f") else 4
        gdeg = int(rng.integers(0, 3))
        V = random_fg_module(int(rng.integers(1 << 30)), K, N, gdeg, 2 if gdeg < 2 else 1)
        out.append((f"random-{seed}-{k}-{tag}", V))
    return out
