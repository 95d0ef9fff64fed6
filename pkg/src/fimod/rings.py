"""Scalar rings and coefficient categories.

A coefficient category is a prime field, the rationals, the integers, or a
discrete multi-object category over a field (no morphisms between distinct
objects).  Matrices are numpy arrays: ``int64`` for prime fields and object
arrays holding ``Fraction`` or ``int`` otherwise, so arithmetic stays exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import ParseError


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class Ring:
    is_field = True
    dtype = object
    name = "ring"

    def zeros(self, r, c):
        a = np.empty((r, c), dtype=object)
        a.fill(0)
        return a

    def eye(self, n):
        a = self.zeros(n, n)
        for i in range(n):
            a[i, i] = 1
        return a

    def array(self, rows, shape=None):
        if shape is not None and (shape[0] == 0 or shape[1] == 0):
            return self.zeros(*shape)
        a = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
        for i, row in enumerate(rows):
            for j, x in enumerate(row):
                a[i, j] = self.coerce(x)
        if shape is not None and a.shape != tuple(shape):
            raise ValueError(f"matrix has shape {a.shape}, expected {shape}")
        return a

    def reduce(self, a):
        return a

    def matmul(self, a, b):
        if a.shape[1] == 0:
            return self.zeros(a.shape[0], b.shape[1])
        return self.reduce(a @ b)

    def coerce(self, x):
        raise NotImplementedError

    def parse(self, s: str):
        raise NotImplementedError

    def format(self, x) -> str:
        return str(x)

    def random_matrix(self, rng, r, c, bound=2):
        raise NotImplementedError


class PrimeField(Ring):
    dtype = np.int64

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if p >= 1 << 16:
            raise ValueError("prime fields are limited to p < 65536")
        self.p = p
        self.name = f"F{p}"

    def zeros(self, r, c):
        return np.zeros((r, c), dtype=np.int64)

    def eye(self, n):
        return np.eye(n, dtype=np.int64)

    def array(self, rows, shape=None):
        if shape is not None and (shape[0] == 0 or shape[1] == 0):
            return self.zeros(*shape)
        a = np.array([[self.coerce(x) for x in row] for row in rows], dtype=np.int64)
        if a.ndim != 2:
            a = a.reshape(len(rows), -1)
        if shape is not None and a.shape != tuple(shape):
            raise ValueError(f"matrix has shape {a.shape}, expected {shape}")
        return a

    def reduce(self, a):
        return np.mod(a, self.p)

    def matmul(self, a, b):
        # entries < p < 2**16, so a row of products stays far below 2**63
        return np.mod(a @ b, self.p)

    def coerce(self, x):
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def inv(self, x):
        return pow(int(x), -1, self.p)

    def parse(self, s: str):
        try:
            return self.coerce(Fraction(s))
        except (ValueError, ZeroDivisionError) as e:
            raise ParseError(f"bad entry {s!r}") from e

    def random_matrix(self, rng, r, c, bound=2):
        return rng.integers(0, self.p, size=(r, c)).astype(np.int64)


class Rationals(Ring):
    name = "Q"

    def coerce(self, x):
        return Fraction(x)

    def inv(self, x):
        return 1 / Fraction(x)

    def parse(self, s: str):
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as e:
            raise ParseError(f"bad entry {s!r}") from e

    def format(self, x) -> str:
        return str(Fraction(x))

    def random_matrix(self, rng, r, c, bound=2):
        a = self.zeros(r, c)
        vals = rng.integers(-bound, bound + 1, size=(r, c))
        for i in range(r):
            for j in range(c):
                a[i, j] = Fraction(int(vals[i, j]))
        return a


class Integers(Ring):
    is_field = False
    name = "Z"

    def coerce(self, x):
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"{x} is not an integer")
            return x.numerator
        return int(x)

    def parse(self, s: str):
        try:
            return int(s)
        except ValueError as e:
            raise ParseError(f"bad integer entry {s!r}") from e

    def random_matrix(self, rng, r, c, bound=2):
        a = self.zeros(r, c)
        vals = rng.integers(-bound, bound + 1, size=(r, c))
        for i in range(r):
            for j in range(c):
                a[i, j] = int(vals[i, j])
        return a


@lru_cache(maxsize=None)
def _prime_field(p):
    return PrimeField(p)


_Q = Rationals()
_Z = Integers()


@dataclass(frozen=True)
class CoeffCategory:
    """Coefficient category: ``kind`` is ``prime_field``, ``rationals``,
    ``integers`` or ``discrete``."""

    kind: str
    p: int | None = None
    base: "CoeffCategory | None" = None
    objects: tuple[str, ...] = field(default=("*",))

    def __post_init__(self):
        if self.kind == "prime_field":
            if self.p is None or not is_prime(self.p):
                raise ValueError(f"{self.p} is not prime")
        elif self.kind == "discrete":
            if self.base is None or self.base.kind not in ("prime_field", "rationals"):
                raise ValueError("discrete categories need a prime field or Q as base")
            if not self.objects or len(set(self.objects)) != len(self.objects):
                raise ValueError("discrete categories need distinct object names")
        elif self.kind not in ("rationals", "integers"):
            raise ValueError(f"unknown coefficient kind {self.kind!r}")

    @property
    def ring(self) -> Ring:
        if self.kind == "prime_field":
            return _prime_field(self.p)
        if self.kind == "rationals":
            return _Q
        if self.kind == "integers":
            return _Z
        return self.base.ring

    @property
    def is_field(self) -> bool:
        return self.kind != "integers"

    def index(self, r: str) -> int:
        try:
            return self.objects.index(r)
        except ValueError:
            raise ValueError(f"{r!r} is not an object of {self.label()}") from None

    def label(self) -> str:
        if self.kind == "prime_field":
            return f"f{self.p}"
        if self.kind == "rationals":
            return "q"
        if self.kind == "integers":
            return "z"
        return f"discrete:{self.base.label()}:{','.join(self.objects)}"


def prime_field(p: int) -> CoeffCategory:
    return CoeffCategory("prime_field", p=p)


def rationals() -> CoeffCategory:
    return CoeffCategory("rationals")


def integers() -> CoeffCategory:
    return CoeffCategory("integers")


def discrete(base: CoeffCategory, objects) -> CoeffCategory:
    return CoeffCategory("discrete", base=base, objects=tuple(objects))


def parse_coeff(s: str) -> CoeffCategory:
    """Parse ``f<p>``, ``q``, ``z`` or ``discrete:<field>:<obj,obj,...>``."""
    s = s.strip()
    try:
        if s.startswith("discrete:"):
            _, fld, objs = s.split(":", 2)
            base = parse_coeff(fld)
            return discrete(base, [o for o in objs.split(",") if o])
        if s in ("q", "Q"):
            return rationals()
        if s in ("z", "Z"):
            return integers()
        if s[:1] in ("f", "F"):
            return prime_field(int(s[1:]))
    except ValueError as e:
        raise ParseError(f"bad coefficient string {s!r}: {e}") from e
    raise ParseError(f"bad coefficient string {s!r}")
