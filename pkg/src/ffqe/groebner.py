"""Reduced Gröbner bases by Buchberger's algorithm.

Pairs are pruned with the Gebauer-Möller installation of Buchberger's product
and chain criteria and processed by the normal strategy (smallest lcm first).
"""
from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .polynomial import (
    Monomial,
    MonomialOrder,
    Polynomial,
    Ring,
    RingError,
    _nf_terms,
    normal_form,
)


class BudgetExhausted(RuntimeError):
    """A computation exceeded its wall-clock or basis-size budget."""


@dataclass
class Budget:
    """Resource caps shared by every Gröbner computation of one QE run."""

    seconds: float | None = None
    max_basis: int | None = None
    started: float = field(default_factory=time.monotonic)

    def check(self, basis_size: int = 0) -> None:
        if self.seconds is not None and time.monotonic() - self.started > self.seconds:
            raise BudgetExhausted(f"time budget of {self.seconds:g}s exhausted")
        if self.max_basis is not None and basis_size > self.max_basis:
            raise BudgetExhausted(f"basis size exceeded {self.max_basis}")


@dataclass
class GBStats:
    pairs: int = 0
    pruned: int = 0
    zero_reductions: int = 0
    max_basis: int = 0
    seconds: float = 0.0


@dataclass(frozen=True)
class Ideal:
    ring: Ring
    generators: tuple[Polynomial, ...]

    @classmethod
    def of(cls, ring: Ring, gens: Iterable[Polynomial]) -> Ideal:
        out = []
        seen = set()
        for g in gens:
            g = g.to_ring(ring)
            if g and g not in seen:
                seen.add(g)
                out.append(g)
        return cls(ring, tuple(out))


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced, monic basis sorted by descending leading monomial."""

    ring: Ring
    polys: tuple[Polynomial, ...]

    @property
    def order(self) -> MonomialOrder:
        return self.ring.order

    def __iter__(self):
        return iter(self.polys)

    def __len__(self) -> int:
        return len(self.polys)

    def is_unit(self) -> bool:
        return len(self.polys) == 1 and self.polys[0].is_constant() and bool(self.polys[0])

    def is_zero_ideal(self) -> bool:
        return not self.polys

    def reduce(self, f: Polynomial) -> Polynomial:
        return normal_form(f.to_ring(self.ring), list(self.polys))

    def __str__(self) -> str:
        return "\n".join(str(g) for g in self.polys)


def add_field_polynomials(J: Ideal, names: Iterable[str]) -> Ideal:
    extra = []
    for n in names:
        if n not in J.ring.vars:
            raise RingError(f"unknown variable {n!r}")
        extra.append(J.ring.field_polynomial(n))
    return Ideal.of(J.ring, list(J.generators) + extra)


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple([x if x > y else y for x, y in zip(a, b)])


def _divides(a: Monomial, b: Monomial) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _coprime(a: Monomial, b: Monomial) -> bool:
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


class _Overflow(Exception):
    pass


class _TupleMonos:
    """Monomials as exponent tuples; works for any order."""

    packed = False

    def __init__(self, ring: Ring):
        self.n = ring.nvars
        self.order = ring.order
        self.key = (lambda m: m) if ring.order.is_lex else ring.order.key
        self.one = (0,) * self.n

    def encode(self, m: Monomial):
        return m

    def decode(self, m) -> Monomial:
        return m

    lcm = staticmethod(_lcm)
    divides = staticmethod(_divides)
    coprime = staticmethod(_coprime)

    def shift(self, a, b):
        return tuple([x + y for x, y in zip(a, b)])

    def quo(self, a, b):
        return tuple([x - y for x, y in zip(a, b)])


class _PackedMonos:
    """Lex monomials packed into one int, highest variable in the top slot.

    Each slot carries a guard bit, so integer comparison is lex comparison,
    multiplication is addition, and divisibility is one subtraction.
    """

    packed = True

    def __init__(self, ring: Ring, bits: int):
        self.n = ring.nvars
        self.bits = bits  # value bits per slot; the guard bit sits above them
        w = bits + 1
        self.width = w
        self.G = sum(1 << (w * i + bits) for i in range(self.n))
        self.ONES = sum(1 << (w * i) for i in range(self.n))
        self.one = 0
        self.key = None
        self.slot = (1 << bits) - 1

    def encode(self, m: Monomial) -> int:
        out = 0
        for e in m:
            if e > self.slot:
                raise _Overflow
            out = (out << self.width) | e
        return out

    def decode(self, m: int) -> Monomial:
        out = []
        for _ in range(self.n):
            out.append(m & self.slot)
            m >>= self.width
        return tuple(reversed(out))

    def divides(self, a: int, b: int) -> bool:
        G = self.G
        return ((b | G) - a) & G == G

    def lcm(self, a: int, b: int) -> int:
        G = self.G
        d = ((a | G) - b) & G  # guard set where a >= b
        M = d - (d >> self.bits)
        return (a & M) | (b & ~M)

    def coprime(self, a: int, b: int) -> bool:
        G, ONES = self.G, self.ONES
        return ((a | G) - ONES) & ((b | G) - ONES) & G == 0

    def shift(self, a: int, b: int) -> int:
        t = a + b
        if t & self.G:
            raise _Overflow
        return t

    def quo(self, a: int, b: int) -> int:
        return a - b


def _arith(F):
    tables = F.op_tables
    if tables is not None:
        return tables
    q = F.q

    class _Row:
        __slots__ = ("c",)

        def __init__(self, c):
            self.c = c

        def __getitem__(self, x):
            return F.mul(self.c, x)

    class _Mul:
        def __getitem__(self, c):
            return _Row(c)

    class _AddRow:
        __slots__ = ("a",)

        def __init__(self, a):
            self.a = a

        def __getitem__(self, b):
            return F.add(self.a, b)

    class _Add:
        def __getitem__(self, a):
            return _AddRow(a)

    assert q > 256
    return _Add(), _Mul()


def _nf_packed(terms: dict, leads: Sequence[tuple], G: int, at, mt, negs, full: bool = True) -> dict:
    """Normal form over packed lex monomials; ``leads`` holds monic (LM, tail) pairs."""
    p = dict(terms)
    rem: dict = {}
    heap = [-m for m in p]
    heapq.heapify(heap)
    push, pop = heapq.heappush, heapq.heappop
    while heap:
        m = -pop(heap)
        c = p.pop(m, 0)
        if not c:
            continue
        mG = m | G
        for lm, tail in leads:
            if (mG - lm) & G == G:
                s = m - lm
                row = mt[negs[c]]
                for gm, gc in tail:
                    t = gm + s
                    if t & G:
                        raise _Overflow
                    old = p.get(t, 0)
                    if old:
                        v = at[old][row[gc]]
                        if v:
                            p[t] = v
                        else:
                            del p[t]
                    else:
                        p[t] = row[gc]
                        push(heap, -t)
                break
        else:
            rem[m] = c
            if not full:
                rem.update(p)
                return rem
    return rem


def _nf_cached(terms: dict, B: "_Basis") -> dict:
    """Packed normal form modulo the whole active basis, memoizing reducer lookups.

    ``B.cache`` maps a monomial to (index of its first active divisor or -1,
    basis length when checked); the basis only grows, so entries stay valid
    up to a rescan of the newer elements.
    """
    G, at, mt, negs = B.M.G, B.at, B.mt, B.negs
    lms, tails, active, cache = B.lms, B.tails, B.active, B.cache
    n = len(lms)
    p = dict(terms)
    rem: dict = {}
    heap = [-m for m in p]
    heapq.heapify(heap)
    push, pop = heapq.heappush, heapq.heappop
    while heap:
        m = -pop(heap)
        c = p.pop(m, 0)
        if not c:
            continue
        ent = cache.get(m)
        j = -1
        if ent is not None:
            j, start = ent
            if j >= 0:
                if active[j]:
                    start = n
                else:
                    start, j = j + 1, -1
        else:
            start = 0
        if start < n:
            mG = m | G
            for i in range(start, n):
                if active[i] and (mG - lms[i]) & G == G:
                    j = i
                    break
            cache[m] = (j, n)
        if j < 0:
            rem[m] = c
            continue
        s = m - lms[j]
        row = mt[negs[c]]
        for gm, gc in tails[j]:
            t = gm + s
            if t & G:
                raise _Overflow
            old = p.get(t, 0)
            if old:
                v = at[old][row[gc]]
                if v:
                    p[t] = v
                else:
                    del p[t]
            else:
                p[t] = row[gc]
                push(heap, -t)
    return rem


class _Basis:
    """Working state of one Buchberger run (term dicts, leading data)."""

    def __init__(self, ring: Ring, monos):
        self.ring = ring
        self.F = ring.field
        self.order = ring.order
        self.M = monos
        self.polys: list[dict] = []
        self.lms: list = []
        self.tails: list[tuple] = []
        self.active: list[bool] = []
        self.cache: dict = {}
        if monos.packed:
            self.at, self.mt = _arith(self.F)
            self.negs = [self.F.neg(c) for c in range(self.F.q)] if self.F.q <= 1 << 16 else None

    def leads(self, idx: Iterable[int] | None = None):
        idx = [i for i in range(len(self.polys)) if self.active[i]] if idx is None else idx
        if self.M.packed:
            return [(self.lms[i], self.tails[i]) for i in idx]
        return [(self.lms[i], 1, self.polys[i]) for i in idx]

    def nf_basis(self, terms: dict) -> dict:
        if self.M.packed:
            return _nf_cached(terms, self)
        return self.nf(terms, self.leads())

    def nf(self, terms: dict, leads, full: bool = True) -> dict:
        if self.M.packed:
            return _nf_packed(terms, leads, self.M.G, self.at, self.mt, self.negs, full)
        return _nf_terms(self.F, terms, leads, self.order, full)

    def lead_of(self, terms: dict):
        return max(terms) if self.M.key is None or self.order.is_lex else max(terms, key=self.M.key)

    def monic(self, terms: dict) -> tuple:
        lm = self.lead_of(terms)
        c = terms[lm]
        if c != 1:
            inv = self.F.inv(c)
            mul = self.F.mul
            terms = {m: mul(v, inv) for m, v in terms.items()}
        return lm, terms

    def add(self, terms: dict) -> int:
        lm, terms = self.monic(terms)
        self.polys.append(terms)
        self.lms.append(lm)
        self.tails.append(tuple((m, c) for m, c in terms.items() if m != lm))
        self.active.append(True)
        return len(self.polys) - 1

    def spoly(self, i: int, j: int) -> dict:
        F, M = self.F, self.M
        lmi, lmj = self.lms[i], self.lms[j]
        L = M.lcm(lmi, lmj)
        si = M.quo(L, lmi)
        sj = M.quo(L, lmj)
        shift = M.shift
        out: dict = {}
        for m, c in self.tails[i]:
            out[shift(m, si)] = c
        for m, c in self.tails[j]:
            t = shift(m, sj)
            v = F.sub(out.get(t, 0), c)
            if v:
                out[t] = v
            else:
                out.pop(t, None)
        return out


def _monos_for(ring: Ring, gens: Sequence[Polynomial], bits: int | None):
    if not ring.order.is_lex:
        return _TupleMonos(ring)
    if bits is None:
        top = max((e for g in gens for m in g.terms for e in m), default=1)
        bits = max(4, (2 * top + 1).bit_length() + 1)
    return _PackedMonos(ring, bits)


def buchberger(J: Ideal | Sequence[Polynomial], order: MonomialOrder | None = None,
               budget: Budget | None = None, stats: GBStats | None = None) -> GroebnerBasis:
    """Reduced Gröbner basis of ``J`` (empty basis for the zero ideal)."""
    t0 = time.monotonic()
    if not isinstance(J, Ideal):
        gens = list(J)
        if not gens:
            raise RingError("buchberger needs a ring; pass an Ideal for empty input")
        J = Ideal.of(gens[0].ring, gens)
    ring = J.ring if order is None else J.ring.with_order(order)
    gens = [g.to_ring(ring) for g in J.generators if g]
    st = stats if stats is not None else GBStats()
    bits = None
    while True:
        monos = _monos_for(ring, gens, bits)
        try:
            result = _buchberger(ring, gens, monos, budget, st)
            break
        except _Overflow:
            bits = monos.bits * 2
    st.seconds += time.monotonic() - t0
    return GroebnerBasis(ring, tuple(result))


def _buchberger(ring: Ring, gens: list[Polynomial], M, budget: Budget | None,
                st: GBStats) -> list[Polynomial]:
    B = _Basis(ring, M)
    key = M.key
    lcm_, divides, coprime = M.lcm, M.divides, M.coprime
    pairs: list[tuple] = []
    counter = 0

    def update(h: int) -> None:
        nonlocal counter, pairs
        lmh = B.lms[h]
        cand = [g for g in range(h) if B.active[g]]
        lcms = {g: lcm_(lmh, B.lms[g]) for g in cand}
        # chain criterion among new pairs, product criterion applied afterwards
        keep: list[int] = []
        for idx, g in enumerate(cand):
            L = lcms[g]
            if coprime(lmh, B.lms[g]):
                keep.append(g)
                continue
            redundant = False
            for g2 in cand[idx + 1:]:
                if divides(lcms[g2], L):
                    redundant = True
                    break
            if not redundant:
                for g2 in keep:
                    if divides(lcms[g2], L):
                        redundant = True
                        break
            if not redundant:
                keep.append(g)
            else:
                st.pruned += 1
        new = []
        for g in keep:
            if coprime(lmh, B.lms[g]):
                st.pruned += 1
            else:
                new.append(g)
        # prune old pairs whose lcm is properly divisible by LM(h)
        kept_pairs = []
        for item in pairs:
            _, _, i, j, L = item
            if divides(lmh, L) and lcm_(B.lms[i], lmh) != L and lcm_(B.lms[j], lmh) != L:
                st.pruned += 1
                continue
            kept_pairs.append(item)
        if len(kept_pairs) != len(pairs):
            heapq.heapify(kept_pairs)
            pairs = kept_pairs
        for g in new:
            L = lcms[g]
            counter += 1
            heapq.heappush(pairs, (L if key is None else key(L), counter, g, h, L))
        for g in cand:
            if B.active[g] and divides(lmh, B.lms[g]):
                B.active[g] = False

    enc = M.encode
    inputs = [{enc(m): c for m, c in g.terms.items()} for g in gens]
    inputs.sort(key=lambda t: max(t) if key is None else max(key(m) for m in t))
    one = M.one
    unit = False
    for t in inputs:
        r = B.nf_basis(t)
        if r:
            update(B.add(r))
            if budget:
                budget.check(len(B.polys))
            if len(r) == 1 and one in r:
                unit = True
                break
    while pairs and not unit:
        _, _, i, j, _ = heapq.heappop(pairs)
        st.pairs += 1
        if budget:
            budget.check(sum(B.active))
        s = B.spoly(i, j)
        r = B.nf_basis(s) if s else s
        if not r:
            st.zero_reductions += 1
            continue
        update(B.add(r))
        st.max_basis = max(st.max_basis, sum(B.active))
        if len(r) == 1 and one in r:
            unit = True
    if unit:
        return [ring.one]
    return _reduce_basis(B)


def _reduce_basis(B: _Basis) -> list[Polynomial]:
    ring, M = B.ring, B.M
    idx = [i for i in range(len(B.polys)) if B.active[i]]
    # minimal basis: drop elements whose LM is divisible by another's
    minimal = []
    for i in idx:
        if any(j != i and M.divides(B.lms[j], B.lms[i]) and (B.lms[j] != B.lms[i] or j < i)
               for j in idx):
            continue
        minimal.append(i)
    out = []
    for i in minimal:
        others = B.leads([j for j in minimal if j != i])
        tail = dict(B.tails[i])
        red = B.nf(tail, others) if others and tail else tail
        dec = M.decode
        terms = {dec(m): c for m, c in red.items()}
        terms[dec(B.lms[i])] = 1
        out.append(Polynomial._raw(ring, terms))
    key = (lambda m: m) if ring.order.is_lex else ring.order.key
    out.sort(key=lambda p: key(p.lm()), reverse=True)
    return out


def groebner_basis(polys: Sequence[Polynomial], ring: Ring | None = None, **kw) -> GroebnerBasis:
    ring = ring or polys[0].ring
    return buchberger(Ideal.of(ring, polys), **kw)


def eliminate(G: GroebnerBasis, keep_vars: Iterable[str]) -> list[Polynomial]:
    """Basis elements lying in the subring of ``keep_vars``.

    ``keep_vars`` must be exactly a trailing segment of the variable order, so
    that every eliminated variable ranks above every kept one.
    """
    keep = list(keep_vars)
    names = G.ring.names
    n = len(names)
    if set(keep) != set(names[n - len(keep):]) or len(set(keep)) != len(keep):
        raise RingError(f"{keep} is not a rank-order suffix of {list(names)}")
    if not G.order.is_lex:
        blocks = G.order.blocks
        cuts = {0}
        acc = 0
        for b in blocks:
            acc += b
            cuts.add(acc)
        if (n - len(keep)) not in cuts:
            raise RingError("elimination must cut between blocks of the block order")
    cut = n - len(keep)
    return [g for g in G.polys if all(not any(m[:cut]) for m in g.terms)]


def ideal_membership(f: Polynomial, G: GroebnerBasis) -> bool:
    if f.ring.field != G.ring.field or f.ring.vars != G.ring.vars:
        raise RingError("polynomial and basis live in different rings")
    if G.is_zero_ideal():
        return f.is_zero()
    return normal_form(f.to_ring(G.ring), list(G.polys)).is_zero()


def is_groebner_basis(G: Sequence[Polynomial]) -> bool:
    """Every S-pair reduces to zero (exhaustive check, used by tests)."""
    from .polynomial import s_polynomial

    G = [g for g in G if g]
    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            if normal_form(s_polynomial(G[i], G[j]), G):
                return False
    return True


def is_reduced(G: Sequence[Polynomial]) -> bool:
    for i, g in enumerate(G):
        if g.lc() != 1:
            return False
        for j, h in enumerate(G):
            if i != j and any(all(a <= b for a, b in zip(h.lm(), m)) for m in g.terms):
                return False
    return True
