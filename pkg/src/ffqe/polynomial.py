"""Sparse multivariate polynomials over a finite field.

A polynomial is a dict from exponent tuples to nonzero field codes.  Variable
``i`` of the :class:`VarTable` sits at tuple position ``i``; lower index means
higher rank, so plain tuple comparison is the lexicographic order.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

from .field import FieldElement, FieldError, FieldSpec
from .syntax import Add, Mul, Name, Neg, Num, ParseError, Pow, Term, TokenStream, parse_term, tokenize

Monomial = tuple[int, ...]


class RingError(ValueError):
    pass


@dataclass(frozen=True)
class VarTable:
    """Ordered distinct variable names; position 0 ranks highest."""

    names: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(set(self.names)) != len(self.names):
            raise RingError(f"duplicate variable names in {self.names}")

    @cached_property
    def index(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.names)}

    def rank(self, name: str) -> int:
        return self.index[name]

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, name: object) -> bool:
        return name in self.index


@dataclass(frozen=True)
class MonomialOrder:
    """Pure lex (default) or block lex with graded lex inside each block.

    ``blocks`` gives block sizes in rank order.  Any block order keeps the
    elimination property for eliminating a prefix of whole blocks.
    """

    kind: str = "lex"
    blocks: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in ("lex", "blocklex"):
            raise RingError(f"unknown monomial order {self.kind!r}")

    def key(self, m: Monomial) -> tuple[int, ...]:
        if self.kind == "lex":
            return m
        out: list[int] = []
        start = 0
        for size in self.blocks:
            part = m[start:start + size]
            out.append(sum(part))
            out.extend(part)
            start += size
        if start < len(m):
            rest = m[start:]
            out.append(sum(rest))
            out.extend(rest)
        return tuple(out)

    @property
    def is_lex(self) -> bool:
        return self.kind == "lex"


LEX = MonomialOrder()


@dataclass(frozen=True)
class Ring:
    field: FieldSpec
    vars: VarTable
    order: MonomialOrder = LEX

    @classmethod
    def of(cls, field: FieldSpec, names: Iterable[str], order: MonomialOrder = LEX) -> Ring:
        names = tuple(names)
        if field.r > 1 and field.generator_name in names:
            raise RingError(f"variable name {field.generator_name!r} clashes with the field generator")
        return cls(field, VarTable(names), order)

    @property
    def nvars(self) -> int:
        return len(self.vars)

    @property
    def names(self) -> tuple[str, ...]:
        return self.vars.names

    @cached_property
    def one_mono(self) -> Monomial:
        return (0,) * len(self.vars)

    @property
    def zero(self) -> Polynomial:
        return Polynomial(self, {})

    @property
    def one(self) -> Polynomial:
        return self.const(1)

    def const(self, c: int | FieldElement) -> Polynomial:
        code = _code(self.field, c)
        return Polynomial(self, {self.one_mono: code} if code else {})

    def const_code(self, code: int) -> Polynomial:
        return Polynomial(self, {self.one_mono: code} if code else {})

    def var(self, name: str) -> Polynomial:
        try:
            i = self.vars.index[name]
        except KeyError:
            raise RingError(f"unknown variable {name!r}") from None
        m = [0] * len(self.vars)
        m[i] = 1
        return Polynomial(self, {tuple(m): 1})

    def gens(self) -> list[Polynomial]:
        return [self.var(n) for n in self.names]

    def field_polynomial(self, name: str) -> Polynomial:
        """x^q - x."""
        i = self.vars.index[name]
        q = self.field.q
        m = [0] * len(self.vars)
        m[i] = q
        hi = tuple(m)
        m[i] = 1
        return Polynomial(self, {hi: 1, tuple(m): self.field.neg(1)})

    def with_order(self, order: MonomialOrder) -> Ring:
        return Ring(self.field, self.vars, order)

    def parse(self, text: str) -> Polynomial:
        return parse_polynomial(text, self)


def _code(F: FieldSpec, c: int | FieldElement) -> int:
    if isinstance(c, FieldElement):
        if c.field != F:
            raise FieldError("constant from a different field")
        return c.code
    return F.from_int(c)


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps monomials to nonzero codes."""

    __slots__ = ("ring", "terms", "_lead")

    def __init__(self, ring: Ring, terms: Mapping[Monomial, int]):
        self.ring = ring
        self.terms = {m: c for m, c in terms.items() if c}
        self._lead = None

    @classmethod
    def _raw(cls, ring: Ring, terms: dict[Monomial, int]) -> Polynomial:
        # caller guarantees no zero coefficients
        p = cls.__new__(cls)
        p.ring, p.terms, p._lead = ring, terms, None
        return p

    # -- structure
    @property
    def field(self) -> FieldSpec:
        return self.ring.field

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.ring.one_mono in self.terms)

    def constant_value(self) -> int:
        return self.terms.get(self.ring.one_mono, 0)

    def lm(self) -> Monomial:
        if self._lead is None:
            if not self.terms:
                raise RingError("zero polynomial has no leading term")
            order = self.ring.order
            self._lead = max(self.terms) if order.is_lex else max(self.terms, key=order.key)
        return self._lead

    def lc(self) -> int:
        return self.terms[self.lm()]

    def sorted_terms(self, order: MonomialOrder | None = None) -> list[tuple[Monomial, int]]:
        order = order or self.ring.order
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def variables(self) -> list[str]:
        """Names of variables that actually occur, in rank order."""
        used = [False] * self.ring.nvars
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used[i] = True
        return [n for n, u in zip(self.ring.names, used) if u]

    def degree(self, name: str | None = None) -> int:
        if not self.terms:
            return -1
        if name is None:
            return max(sum(m) for m in self.terms)
        i = self.ring.vars.index[name]
        return max(m[i] for m in self.terms)

    # -- arithmetic
    def _check(self, other: Polynomial) -> None:
        if self.ring.field != other.ring.field or self.ring.vars != other.ring.vars:
            raise RingError("polynomials from different rings")

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, FieldElement)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other) -> Polynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = F.add(out.get(m, 0), c)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        F = self.field
        return Polynomial._raw(self.ring, {m: F.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other) -> Polynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> Polynomial:
        return (-self) + other

    def __mul__(self, other) -> Polynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial._raw(self.ring, _mul_terms(self.field, self.terms, other.terms))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> Polynomial:
        if e < 0:
            raise RingError("negative polynomial power")
        result = self.ring.one
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def scale(self, c: int | FieldElement) -> Polynomial:
        F = self.field
        code = _code(F, c)
        if not code:
            return self.ring.zero
        return Polynomial._raw(self.ring, {m: F.mul(v, code) for m, v in self.terms.items()})

    def monic(self) -> Polynomial:
        if not self.terms:
            return self
        return self.scale_code(self.field.inv(self.lc()))

    def scale_code(self, code: int) -> Polynomial:
        F = self.field
        return Polynomial._raw(self.ring, {m: F.mul(v, code) for m, v in self.terms.items()})

    def mul_term(self, mono: Monomial, code: int) -> Polynomial:
        F = self.field
        return Polynomial._raw(self.ring, {
            tuple(a + b for a, b in zip(m, mono)): F.mul(v, code) for m, v in self.terms.items()})

    # -- equality / hashing
    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.ring.field == other.ring.field and self.ring.vars == other.ring.vars \
                and self.terms == other.terms
        if isinstance(other, int):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.ring.vars, frozenset(self.terms.items())))

    # -- conversions
    def to_ring(self, ring: Ring) -> Polynomial:
        """Re-index into ``ring`` by variable name."""
        if ring.vars == self.ring.vars:
            return self if ring == self.ring else Polynomial._raw(ring, dict(self.terms))
        if ring.field != self.field:
            raise RingError("cannot move a polynomial between fields")
        used = self.variables()
        try:
            pos = [(self.ring.vars.index[n], ring.vars.index[n]) for n in used]
        except KeyError as exc:
            raise RingError(f"variable {exc.args[0]!r} missing from target ring") from None
        n = ring.nvars
        out = {}
        for m, c in self.terms.items():
            t = [0] * n
            for i, j in pos:
                t[j] = m[i]
            out[tuple(t)] = c
        return Polynomial._raw(ring, out)

    def rename(self, mapping: Mapping[str, str]) -> Polynomial:
        """Rename variables; the result lives in a ring with the renamed table."""
        names = [mapping.get(n, n) for n in self.ring.names]
        return Polynomial._raw(Ring.of(self.field, names, self.ring.order), dict(self.terms))

    def evaluate(self, point: Mapping[str, int | FieldElement]) -> FieldElement:
        return self.field.element(self.evaluate_code(point))

    def evaluate_code(self, point: Mapping[str, int | FieldElement]) -> int:
        F = self.field
        values: list[int | None] = []
        for n in self.ring.names:
            v = point.get(n)
            values.append(v if v is None or isinstance(v, int) else _code(F, v))
        total = 0
        for m, c in self.terms.items():
            v = c
            for i, e in enumerate(m):
                if e:
                    x = values[i]
                    if x is None:
                        raise RingError(f"missing binding for variable {self.ring.names[i]!r}")
                    v = F.mul(v, F.pow(x, e))
            total = F.add(total, v)
        return total

    def reduce_exponents(self) -> Polynomial:
        return reduce_exponents_by_field_polys(self)

    def __repr__(self) -> str:
        return f"Polynomial({self})"

    def __str__(self) -> str:
        return render(self)


def _mul_terms(F: FieldSpec, a: Mapping[Monomial, int], b: Mapping[Monomial, int],
               reduce_q: int = 0) -> dict[Monomial, int]:
    out: dict[Monomial, int] = {}
    if len(a) < len(b):
        a, b = b, a
    add, mul = F.add, F.mul
    for mb, cb in b.items():
        for ma, ca in a.items():
            m = tuple([x + y for x, y in zip(ma, mb)])
            if reduce_q:
                m = _reduce_mono(m, reduce_q)
            v = add(out.get(m, 0), mul(ca, cb))
            if v:
                out[m] = v
            else:
                del out[m]
    return out


def _reduce_mono(m: Monomial, q: int) -> Monomial:
    if all(e < q for e in m):
        return m
    return tuple(((e - 1) % (q - 1)) + 1 if e >= q else e for e in m)


# --- spec-level operations ----------------------------------------------------

def poly_add(f: Polynomial, g: Polynomial) -> Polynomial:
    return f + g


def poly_mul(f: Polynomial, g: Polynomial) -> Polynomial:
    return f * g


def poly_scale(f: Polynomial, c: int | FieldElement) -> Polynomial:
    return f.scale(c)


def leading_term(f: Polynomial, order: MonomialOrder | None = None) -> tuple[Monomial, FieldElement]:
    if f.is_zero():
        raise RingError("zero polynomial has no leading term")
    if order is None or order == f.ring.order:
        m = f.lm()
    else:
        m = max(f.terms, key=order.key)
    return m, f.field.element(f.terms[m])


def reduce_exponents_by_field_polys(f: Polynomial) -> Polynomial:
    """Rewrite with x^q = x so every per-variable degree is below q."""
    q = f.field.q
    F = f.field
    out: dict[Monomial, int] = {}
    for m, c in f.terms.items():
        m2 = _reduce_mono(m, q)
        v = F.add(out.get(m2, 0), c)
        if v:
            out[m2] = v
        else:
            out.pop(m2, None)
    return Polynomial._raw(f.ring, out)


def mul_reduced(f: Polynomial, g: Polynomial) -> Polynomial:
    """Product with exponents reduced modulo the field polynomials on the fly."""
    f._check(g)
    return Polynomial._raw(f.ring, _mul_terms(f.field, f.terms, g.terms, f.field.q))


def divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple([x if x > y else y for x, y in zip(a, b)])


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple([x - y for x, y in zip(a, b)])


def normal_form(f: Polynomial, G: Sequence[Polynomial], order: MonomialOrder | None = None) -> Polynomial:
    """Full reduction of ``f`` by ``G``.

    The reducer for each monomial is the first element of ``G`` (in list order)
    whose leading monomial divides it.
    """
    ring = f.ring
    order = order or ring.order
    G = [g for g in G if g]
    for g in G:
        f._check(g)
    if order != ring.order:
        ring = ring.with_order(order)
        f = f.to_ring(ring)
        G = [g.to_ring(ring) for g in G]
    leads = [(g.lm(), g.lc(), g.terms) for g in G]
    return Polynomial._raw(f.ring, _nf_terms(f.field, f.terms, leads, order))


def _nf_terms(F: FieldSpec, terms: Mapping[Monomial, int],
              leads: Sequence[tuple[Monomial, int, Mapping[Monomial, int]]],
              order: MonomialOrder, full: bool = True) -> dict[Monomial, int]:
    """Reduce a term dict; ``leads`` holds (LM, LC, terms) of each reducer."""
    p = dict(terms)
    rem: dict[Monomial, int] = {}
    if order.is_lex:
        keyf = None
        heap = [tuple([-e for e in m]) for m in p]
    else:
        keyf = order.key
        heap = [(tuple([-e for e in keyf(m)]), m) for m in p]
    heapq.heapify(heap)
    add, mul, neg, inv = F.add, F.mul, F.neg, F.inv
    push = heapq.heappush
    pop = heapq.heappop
    while heap:
        item = pop(heap)
        m = tuple([-e for e in item]) if keyf is None else item[1]
        c = p.pop(m, 0)
        if not c:
            continue
        for lm_, lc_, gterms in leads:
            if all(x <= y for x, y in zip(lm_, m)):
                shift = tuple([x - y for x, y in zip(m, lm_)])
                factor = neg(mul(c, inv(lc_)))
                for gm, gc in gterms.items():
                    if gm == lm_:
                        continue
                    t = tuple([x + y for x, y in zip(gm, shift)])
                    old = p.get(t, 0)
                    v = add(old, mul(gc, factor))
                    if v:
                        p[t] = v
                        if not old:
                            push(heap, tuple([-e for e in t]) if keyf is None
                                 else (tuple([-e for e in keyf(t)]), t))
                    elif old:
                        del p[t]
                break
        else:
            rem[m] = c
            if not full:
                rem.update(p)
                return rem
    return rem


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder | None = None) -> Polynomial:
    """(L/LT(f)) f - (L/LT(g)) g with L = lcm(LM f, LM g)."""
    f._check(g)
    if f.is_zero() or g.is_zero():
        raise RingError("S-polynomial of a zero polynomial")
    if order is not None and order != f.ring.order:
        ring = f.ring.with_order(order)
        f, g = f.to_ring(ring), g.to_ring(ring)
    F = f.field
    mf, mg = f.lm(), g.lm()
    L = mono_lcm(mf, mg)
    a = f.mul_term(mono_div(L, mf), F.inv(f.lc()))
    b = g.mul_term(mono_div(L, mg), F.inv(g.lc()))
    return a - b


def evaluate(f: Polynomial, point: Mapping[str, int | FieldElement]) -> FieldElement:
    return f.evaluate(point)


# --- text -----------------------------------------------------------------------

def render_monomial(m: Monomial, names: Sequence[str]) -> str:
    parts = []
    for n, e in zip(names, m):
        if e == 1:
            parts.append(n)
        elif e > 1:
            parts.append(f"{n}^{e}")
    return "*".join(parts)


def render(f: Polynomial) -> str:
    """``a*b*c + a*c^2 - c`` style; -1 coefficients print as subtraction."""
    if f.is_zero():
        return "0"
    F = f.field
    minus_one = F.neg(1)
    names = f.ring.names
    out = []
    for m, c in f.sorted_terms():
        mono = render_monomial(m, names)
        sign = "+"
        if F.p != 2 and c != 1 and c == minus_one:
            sign, c = "-", 1
        if not mono:
            body = F.render(c)
        elif c == 1:
            body = mono
        else:
            cs = F.render(c)
            body = f"({cs})*{mono}" if F.is_compound(c) else f"{cs}*{mono}"
        if not out:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def term_to_poly(t: Term, ring: Ring, reduce: bool = False) -> Polynomial:
    """Expand a parsed term.  Identifiers not in the ring must be the field generator."""
    F = ring.field
    if isinstance(t, Num):
        return ring.const(F.from_int(t.value))
    if isinstance(t, Name):
        if t.name in ring.vars:
            return ring.var(t.name)
        if F.r > 1 and t.name == F.generator_name:
            return ring.const_code(F.code_of([0, 1]))
        raise ParseError(f"unknown variable {t.name!r}", t.line, t.col)
    if isinstance(t, Add):
        out = ring.zero
        for i in t.items:
            out = out + term_to_poly(i, ring, reduce)
        return out
    if isinstance(t, Neg):
        return -term_to_poly(t.item, ring, reduce)
    if isinstance(t, Mul):
        out = ring.one
        for i in t.items:
            p = term_to_poly(i, ring, reduce)
            out = mul_reduced(out, p) if reduce else out * p
        return out
    if isinstance(t, Pow):
        base = term_to_poly(t.base, ring, reduce)
        if not reduce:
            return base**t.exp
        out = ring.one
        for _ in range(t.exp):
            out = mul_reduced(out, base)
        return out
    raise TypeError(f"not a term: {t!r}")


def parse_polynomial(text: str, ring: Ring) -> Polynomial:
    ts = TokenStream(tokenize(text))
    t = parse_term(ts)
    if ts.cur.kind != "eof":
        ts.fail("unexpected trailing input")
    return term_to_poly(t, ring)


def polys_from_strings(texts: Iterable[str], ring: Ring) -> list[Polynomial]:
    return [parse_polynomial(t, ring) for t in texts]


Reducer = Callable[[Polynomial], Polynomial]
