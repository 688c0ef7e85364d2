"""Factored polynomial expressions.

Atoms normally hold an expanded :class:`Polynomial`.  Products whose expansion
would be large (the S2VD controller is a product of 18 cubes) are kept as
:class:`Prod`/:class:`Sum` trees over polynomials and only expanded inside a
Gröbner round, where every partial product can be reduced modulo the round's
univariate constraints and field polynomials.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Union

from .polynomial import Polynomial, Ring, mul_reduced

EXPAND_LIMIT = 4096

Reducer = Callable[[Polynomial], Polynomial]


@dataclass(frozen=True)
class Prod:
    factors: tuple

    def __str__(self) -> str:
        return "*".join(_paren(f) for f in self.factors)


@dataclass(frozen=True)
class Sum:
    items: tuple

    def __str__(self) -> str:
        out = str(self.items[0])
        for i in self.items[1:]:
            s = str(i)
            out += " - " + s[1:] if s.startswith("-") else " + " + s
        return out


PolyLike = Union[Polynomial, Prod, Sum]


def _paren(f: PolyLike) -> str:
    s = str(f)
    if isinstance(f, Polynomial) and len(f) == 1 and not s.startswith("-") and "+" not in s:
        return s
    if isinstance(f, Prod):
        return s
    return f"({s})"


def size_estimate(f: PolyLike) -> int:
    if isinstance(f, Polynomial):
        return max(len(f), 1)
    if isinstance(f, Prod):
        n = 1
        for g in f.factors:
            n *= size_estimate(g)
        return n
    return sum(size_estimate(g) for g in f.items)


def ring_of(f: PolyLike) -> Ring:
    if isinstance(f, Polynomial):
        return f.ring
    return ring_of((f.factors if isinstance(f, Prod) else f.items)[0])


def _children(f: PolyLike) -> tuple:
    return f.factors if isinstance(f, Prod) else f.items


def expand(f: PolyLike, reduce: Reducer | None = None) -> Polynomial:
    """Expand to a single polynomial, reducing after every product step."""
    if isinstance(f, Polynomial):
        return reduce(f) if reduce else f
    if isinstance(f, Sum):
        out = None
        for g in f.items:
            e = expand(g, reduce)
            out = e if out is None else out + e
        return reduce(out) if reduce else out
    parts = [expand(g, reduce) for g in f.factors]
    if any(p.is_zero() for p in parts):
        return parts[0].ring.zero
    parts.sort(key=len)
    out = parts[0]
    for p in parts[1:]:
        out = reduce(mul_reduced(out, p)) if reduce else out * p
        if out.is_zero():
            break
    return out


def evaluate_code(f: PolyLike, point: Mapping[str, int]) -> int:
    if isinstance(f, Polynomial):
        return f.evaluate_code(point)
    F = ring_of(f).field
    if isinstance(f, Sum):
        v = 0
        for g in f.items:
            v = F.add(v, evaluate_code(g, point))
        return v
    v = 1
    for g in f.factors:
        v = F.mul(v, evaluate_code(g, point))
        if not v:
            return 0
    return v


def variables(f: PolyLike) -> list[str]:
    if isinstance(f, Polynomial):
        return f.variables()
    seen: dict[str, None] = {}
    for g in _children(f):
        for n in variables(g):
            seen.setdefault(n)
    return list(seen)


def to_ring(f: PolyLike, ring: Ring) -> PolyLike:
    if isinstance(f, Polynomial):
        return f.to_ring(ring)
    return type(f)(tuple(to_ring(g, ring) for g in _children(f)))


def rename(f: PolyLike, mapping: Mapping[str, str]) -> PolyLike:
    if isinstance(f, Polynomial):
        if not any(n in mapping for n in f.variables()):
            return f
        return f.rename(mapping)
    return type(f)(tuple(rename(g, mapping) for g in _children(f)))


def unify(fs: list[PolyLike], ring: Ring) -> list[PolyLike]:
    return [to_ring(f, ring) for f in fs]


def multiply(a: PolyLike, b: PolyLike) -> PolyLike:
    """Product, expanded only when small; operands must share a ring."""
    if isinstance(a, Polynomial) and isinstance(b, Polynomial) and len(a) * len(b) <= EXPAND_LIMIT:
        return a * b
    fa = a.factors if isinstance(a, Prod) else (a,)
    fb = b.factors if isinstance(b, Prod) else (b,)
    return Prod(fa + fb)


def add(a: PolyLike, b: PolyLike) -> PolyLike:
    if isinstance(a, Polynomial) and isinstance(b, Polynomial):
        return a + b
    ia = a.items if isinstance(a, Sum) else (a,)
    ib = b.items if isinstance(b, Sum) else (b,)
    return Sum(ia + ib)


def negate(a: PolyLike) -> PolyLike:
    if isinstance(a, Polynomial):
        return -a
    if isinstance(a, Sum):
        return Sum(tuple(negate(i) for i in a.items))
    return Prod((negate(a.factors[0]),) + a.factors[1:])


def power(a: PolyLike, e: int) -> PolyLike:
    if isinstance(a, Polynomial) and len(a) ** e <= EXPAND_LIMIT:
        return a**e
    if e == 0:
        return ring_of(a).one
    out = a
    for _ in range(e - 1):
        out = multiply(out, a)
    return out
