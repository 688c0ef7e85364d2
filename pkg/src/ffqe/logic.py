"""First-order formulas over <0, 1, +, *, =>: AST, parser, NNF and prenex form."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from . import expr as E
from .expr import PolyLike
from .field import FieldError, FieldSpec
from .polynomial import Polynomial, Ring
from .syntax import (
    Add,
    Mul,
    Name,
    Neg,
    Num,
    ParseError,
    Pow,
    Term,
    TokenStream,
    parse_term,
    term_names,
    tokenize,
)

EXISTS = "exists"
FORALL = "forall"


# --- AST ----------------------------------------------------------------------

class Formula:
    __slots__ = ()

    def __and__(self, other: Formula) -> Formula:
        return And((self, other))

    def __or__(self, other: Formula) -> Formula:
        return Or((self, other))

    def __invert__(self) -> Formula:
        return Not(self)

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Atom(Formula):
    """``poly = 0``."""

    poly: PolyLike


@dataclass(frozen=True)
class NegAtom(Formula):
    """``poly != 0``."""

    poly: PolyLike


@dataclass(frozen=True)
class _Const(Formula):
    value: bool


TRUE = _Const(True)
FALSE = _Const(False)


@dataclass(frozen=True)
class And(Formula):
    args: tuple[Formula, ...]


@dataclass(frozen=True)
class Or(Formula):
    args: tuple[Formula, ...]


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class Exists(Formula):
    vars: tuple[str, ...]
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    vars: tuple[str, ...]
    body: Formula


Quantifier = Exists | Forall


def quantifier(kind: str, vars: Iterable[str], body: Formula) -> Formula:
    vars = tuple(vars)
    if not vars:
        return body
    return Exists(vars, body) if kind == EXISTS else Forall(vars, body)


def conj(args: Iterable[Formula]) -> Formula:
    """Flattening conjunction with constant folding."""
    out: list[Formula] = []
    for a in args:
        if a == TRUE:
            continue
        if a == FALSE:
            return FALSE
        out.extend(a.args if isinstance(a, And) else (a,))
    if not out:
        return TRUE
    return out[0] if len(out) == 1 else And(tuple(out))


def disj(args: Iterable[Formula]) -> Formula:
    out: list[Formula] = []
    for a in args:
        if a == FALSE:
            continue
        if a == TRUE:
            return TRUE
        out.extend(a.args if isinstance(a, Or) else (a,))
    if not out:
        return FALSE
    return out[0] if len(out) == 1 else Or(tuple(out))


# --- traversal -------------------------------------------------------------------

def atoms(phi: Formula) -> Iterator[Formula]:
    if isinstance(phi, (Atom, NegAtom)):
        yield phi
    elif isinstance(phi, (And, Or)):
        for a in phi.args:
            yield from atoms(a)
    elif isinstance(phi, Not):
        yield from atoms(phi.arg)
    elif isinstance(phi, (Exists, Forall)):
        yield from atoms(phi.body)


def free_variables(phi: Formula) -> list[str]:
    """Free variables in order of first occurrence."""
    seen: dict[str, None] = {}

    def walk(f: Formula, bound: frozenset[str]) -> None:
        if isinstance(f, (Atom, NegAtom)):
            for n in E.variables(f.poly):
                if n not in bound:
                    seen.setdefault(n)
        elif isinstance(f, (And, Or)):
            for a in f.args:
                walk(a, bound)
        elif isinstance(f, Not):
            walk(f.arg, bound)
        elif isinstance(f, (Exists, Forall)):
            walk(f.body, bound | set(f.vars))

    walk(phi, frozenset())
    return list(seen)


def all_variables(phi: Formula) -> list[str]:
    """Free and bound variable names, first occurrence order."""
    seen: dict[str, None] = {}

    def walk(f: Formula) -> None:
        if isinstance(f, (Atom, NegAtom)):
            for n in E.variables(f.poly):
                seen.setdefault(n)
        elif isinstance(f, (And, Or)):
            for a in f.args:
                walk(a)
        elif isinstance(f, Not):
            walk(f.arg)
        elif isinstance(f, (Exists, Forall)):
            for v in f.vars:
                seen.setdefault(v)
            walk(f.body)

    walk(phi)
    return list(seen)


def is_quantifier_free(phi: Formula) -> bool:
    if isinstance(phi, (Exists, Forall)):
        return False
    if isinstance(phi, (And, Or)):
        return all(is_quantifier_free(a) for a in phi.args)
    if isinstance(phi, Not):
        return is_quantifier_free(phi.arg)
    return True


def is_nnf(phi: Formula) -> bool:
    if isinstance(phi, Not):
        return False
    if isinstance(phi, (And, Or)):
        return all(is_nnf(a) for a in phi.args)
    if isinstance(phi, (Exists, Forall)):
        return is_nnf(phi.body)
    return True


def field_of(phi: Formula) -> FieldSpec | None:
    for a in atoms(phi):
        return E.ring_of(a.poly).field
    return None


def rename(phi: Formula, mapping: dict[str, str]) -> Formula:
    """Rename free occurrences."""
    if not mapping:
        return phi
    if isinstance(phi, Atom):
        return Atom(E.rename(phi.poly, mapping))
    if isinstance(phi, NegAtom):
        return NegAtom(E.rename(phi.poly, mapping))
    if isinstance(phi, (And, Or)):
        return type(phi)(tuple(rename(a, mapping) for a in phi.args))
    if isinstance(phi, Not):
        return Not(rename(phi.arg, mapping))
    if isinstance(phi, (Exists, Forall)):
        inner = {k: v for k, v in mapping.items() if k not in phi.vars}
        return type(phi)(phi.vars, rename(phi.body, inner))
    return phi


def map_polys(phi: Formula, fn) -> Formula:
    if isinstance(phi, Atom):
        return Atom(fn(phi.poly))
    if isinstance(phi, NegAtom):
        return NegAtom(fn(phi.poly))
    if isinstance(phi, (And, Or)):
        return type(phi)(tuple(map_polys(a, fn) for a in phi.args))
    if isinstance(phi, Not):
        return Not(map_polys(phi.arg, fn))
    if isinstance(phi, (Exists, Forall)):
        return type(phi)(phi.vars, map_polys(phi.body, fn))
    return phi


# --- normal forms -------------------------------------------------------------------

def to_nnf(phi: Formula) -> Formula:
    return _nnf(phi, False)


def _nnf(phi: Formula, neg: bool) -> Formula:
    if isinstance(phi, Atom):
        return NegAtom(phi.poly) if neg else phi
    if isinstance(phi, NegAtom):
        return Atom(phi.poly) if neg else phi
    if isinstance(phi, _Const):
        return _Const(phi.value != neg)
    if isinstance(phi, Not):
        return _nnf(phi.arg, not neg)
    if isinstance(phi, And):
        args = tuple(_nnf(a, neg) for a in phi.args)
        return Or(args) if neg else And(args)
    if isinstance(phi, Or):
        args = tuple(_nnf(a, neg) for a in phi.args)
        return And(args) if neg else Or(args)
    if isinstance(phi, Exists):
        return (Forall if neg else Exists)(phi.vars, _nnf(phi.body, neg))
    if isinstance(phi, Forall):
        return (Exists if neg else Forall)(phi.vars, _nnf(phi.body, neg))
    raise TypeError(f"not a formula: {phi!r}")


@dataclass(frozen=True)
class PrenexFormula:
    """Alternating quantifier blocks (outermost first) over an NNF matrix."""

    blocks: tuple[tuple[str, tuple[str, ...]], ...]
    matrix: Formula

    def __post_init__(self) -> None:
        for (k1, _), (k2, _) in zip(self.blocks, self.blocks[1:]):
            if k1 == k2:
                raise ValueError("adjacent quantifier blocks must alternate")
        for _, vs in self.blocks:
            if not vs:
                raise ValueError("empty quantifier block")

    def to_formula(self) -> Formula:
        out = self.matrix
        for kind, vs in reversed(self.blocks):
            out = quantifier(kind, vs, out)
        return out

    def bound_variables(self) -> list[str]:
        return [v for _, vs in self.blocks for v in vs]

    def __str__(self) -> str:
        return render(self.to_formula())


def _prime(name: str, taken: set[str]) -> str:
    new = name + "'"
    while new in taken:
        new += "'"
    return new


def to_prenex(phi: Formula) -> PrenexFormula:
    """Prenex form with capture-avoiding renaming.

    Quantifiers are pulled out left to right.  Prefixes of sibling subformulas
    are interleaved greedily so that same-kind quantifiers share a block.
    Quantifiers over variables absent from their scope are dropped.
    """
    phi = to_nnf(phi)
    taken = set(all_variables(phi))
    used_bound: set[str] = set()
    prefix, matrix = _pull(phi, taken, used_bound, set(free_variables(phi)))
    blocks: list[tuple[str, list[str]]] = []
    for kind, v in prefix:
        if blocks and blocks[-1][0] == kind:
            blocks[-1][1].append(v)
        else:
            blocks.append((kind, [v]))
    return PrenexFormula(tuple((k, tuple(vs)) for k, vs in blocks), matrix)


def _pull(phi: Formula, taken: set[str], used_bound: set[str],
          reserved: set[str]) -> tuple[list[tuple[str, str]], Formula]:
    if isinstance(phi, (Exists, Forall)):
        kind = EXISTS if isinstance(phi, Exists) else FORALL
        body = phi.body
        body_free = set(free_variables(body))
        mapping = {}
        keep = []
        for v in phi.vars:
            if v not in body_free:
                continue
            if v in used_bound or v in reserved:
                new = _prime(v, taken)
                taken.add(new)
                mapping[v] = new
                v = new
            used_bound.add(v)
            keep.append(v)
        body = rename(body, mapping)
        pre, mat = _pull(body, taken, used_bound, reserved)
        return [(kind, v) for v in keep] + pre, mat
    if isinstance(phi, (And, Or)):
        prefixes = []
        mats = []
        for a in phi.args:
            pre, mat = _pull(a, taken, used_bound, reserved)
            prefixes.append(pre)
            mats.append(mat)
        return _interleave(prefixes), type(phi)(tuple(mats))
    return [], phi


def _interleave(prefixes: list[list[tuple[str, str]]]) -> list[tuple[str, str]]:
    prefixes = [p for p in prefixes if p]
    if len(prefixes) <= 1:
        return prefixes[0] if prefixes else []

    def merge(start: str) -> list[tuple[str, str]]:
        queues = [list(p) for p in prefixes]
        out = []
        kind = start
        while any(queues):
            for q in queues:
                while q and q[0][0] == kind:
                    out.append(q.pop(0))
            kind = FORALL if kind == EXISTS else EXISTS
        return out

    def nblocks(pre):
        return sum(1 for i, (k, _) in enumerate(pre) if i == 0 or pre[i - 1][0] != k)

    first = prefixes[0][0][0]
    other = FORALL if first == EXISTS else EXISTS
    a, b = merge(first), merge(other)
    if nblocks(b) < nblocks(a) or (nblocks(b) == nblocks(a) and b[-1][0] == EXISTS != a[-1][0]):
        return b
    return a


def is_prenex_valid(pf: PrenexFormula) -> bool:
    return is_quantifier_free(pf.matrix) and is_nnf(pf.matrix)


# --- rendering ------------------------------------------------------------------------

def _prec(phi: Formula) -> int:
    if isinstance(phi, (Exists, Forall)):
        return 0
    if isinstance(phi, Or):
        return 1
    if isinstance(phi, And):
        return 2
    return 3


def render(phi: Formula) -> str:
    if isinstance(phi, Atom):
        return f"{phi.poly} = 0"
    if isinstance(phi, NegAtom):
        return f"{phi.poly} != 0"
    if isinstance(phi, _Const):
        return "true" if phi.value else "false"
    if isinstance(phi, Not):
        inner = render(phi.arg)
        return f"~{inner}" if _prec(phi.arg) == 3 and not isinstance(phi.arg, (Atom, NegAtom)) \
            else f"~({inner})"
    if isinstance(phi, (And, Or)):
        op = " /\\ " if isinstance(phi, And) else " \\/ "
        me = _prec(phi)
        parts = []
        for a in phi.args:
            s = render(a)
            parts.append(f"({s})" if _prec(a) <= me and not isinstance(a, type(phi)) or _prec(a) == 0
                         else s)
        return op.join(parts)
    if isinstance(phi, (Exists, Forall)):
        kw = "exists" if isinstance(phi, Exists) else "forall"
        return f"{kw} {' '.join(phi.vars)}. {render(phi.body)}"
    raise TypeError(f"not a formula: {phi!r}")


# --- parser ----------------------------------------------------------------------------

class _RawAtom:
    __slots__ = ("lhs", "rhs", "neg")

    def __init__(self, lhs: Term, rhs: Term, neg: bool):
        self.lhs, self.rhs, self.neg = lhs, rhs, neg


def parse(text: str, field: FieldSpec) -> Formula:
    """Parse the ``.fol`` grammar into a formula whose atoms are ``p = 0``/``p != 0``."""
    ts = TokenStream(tokenize(text))
    p = _FormulaParser(ts, field)
    raw = p.formula(frozenset())
    if ts.cur.kind != "eof":
        ts.fail("unexpected trailing input")
    ring = Ring.of(field, p.order)
    return _build(raw, ring)


class _FormulaParser:
    def __init__(self, ts: TokenStream, field: FieldSpec):
        self.ts = ts
        self.field = field
        self.order: list[str] = []
        self._seen: set[str] = set()

    def _note(self, name: str, line: int, col: int) -> None:
        if name.startswith("_"):
            raise ParseError(f"identifier {name!r} uses the reserved '_' prefix", line, col)
        if name in ("exists", "forall", "true", "false"):
            raise ParseError(f"{name!r} is a keyword", line, col)
        if self.field.r > 1 and name == self.field.generator_name:
            return
        if name not in self._seen:
            self._seen.add(name)
            self.order.append(name)

    def formula(self, bound: frozenset[str]):
        ts = self.ts
        if ts.at("exists", "forall"):
            kind = ts.next().text
            names = []
            while ts.cur.kind == "ident":
                t = ts.next()
                if t.text in bound or t.text in names:
                    raise ParseError(f"variable {t.text!r} is already bound", t.line, t.col)
                if self.field.r > 1 and t.text == self.field.generator_name:
                    raise ParseError(f"cannot quantify over the field generator {t.text!r}",
                                     t.line, t.col)
                self._note(t.text, t.line, t.col)
                names.append(t.text)
            if not names:
                ts.fail("expected a variable after quantifier")
            ts.expect(".")
            body = self.formula(bound | set(names))
            return (kind, tuple(names), body)
        return self.iff(bound)

    def iff(self, bound):
        left = self.imp(bound)
        while self.ts.at("<->"):
            self.ts.next()
            right = self.imp(bound)
            left = ("iff", left, right)
        return left

    def imp(self, bound):
        left = self.disj(bound)
        if self.ts.at("->"):
            self.ts.next()
            right = self.imp(bound)  # right associative
            return ("imp", left, right)
        return left

    def disj(self, bound):
        items = [self.conj(bound)]
        while self.ts.at("\\/"):
            self.ts.next()
            items.append(self.conj(bound))
        return items[0] if len(items) == 1 else ("or", tuple(items))

    def conj(self, bound):
        items = [self.neg(bound)]
        while self.ts.at("/\\"):
            self.ts.next()
            items.append(self.neg(bound))
        return items[0] if len(items) == 1 else ("and", tuple(items))

    def neg(self, bound):
        ts = self.ts
        if ts.at("~"):
            ts.next()
            return ("not", self.neg(bound))
        if ts.at("exists", "forall"):
            return self.formula(bound)
        if ts.at("true", "false"):
            return ("const", ts.next().text == "true")
        if ts.at("("):
            save = ts.pos
            order_len = len(self.order)
            try:
                return self.atom()
            except ParseError:
                ts.pos = save
                for n in self.order[order_len:]:
                    self._seen.discard(n)
                del self.order[order_len:]
            ts.next()
            inner = self.formula(bound)
            ts.expect(")")
            return inner
        return self.atom()

    def atom(self):
        ts = self.ts
        lhs = parse_term(ts)
        if not ts.at("=", "!="):
            ts.fail("expected '=' or '!='")
        neg = ts.next().text == "!="
        rhs = parse_term(ts)
        for n in term_names(lhs) + term_names(rhs):
            self._note(n.name, n.line, n.col)
        return _RawAtom(lhs, rhs, neg)


def _build(raw, ring: Ring) -> Formula:
    if isinstance(raw, _RawAtom):
        poly = E.add(_term(raw.lhs, ring), E.negate(_term(raw.rhs, ring)))
        return NegAtom(poly) if raw.neg else Atom(poly)
    tag = raw[0]
    if tag == "const":
        return TRUE if raw[1] else FALSE
    if tag == "not":
        return Not(_build(raw[1], ring))
    if tag == "and":
        return And(tuple(_build(a, ring) for a in raw[1]))
    if tag == "or":
        return Or(tuple(_build(a, ring) for a in raw[1]))
    if tag == "imp":
        return Or((Not(_build(raw[1], ring)), _build(raw[2], ring)))
    if tag == "iff":
        a, b = _build(raw[1], ring), _build(raw[2], ring)
        return And((Or((Not(a), b)), Or((a, Not(b)))))
    kind, names, body = raw
    return quantifier(kind, names, _build(body, ring))


def _term(t: Term, ring: Ring) -> PolyLike:
    F = ring.field
    if isinstance(t, Num):
        if t.value >= F.p:
            raise ParseError(f"constant {t.value} is not a residue of {F!r}", t.line, t.col)
        return ring.const(t.value)
    if isinstance(t, Name):
        if t.name in ring.vars:
            return ring.var(t.name)
        if F.r > 1 and t.name == F.generator_name:
            return ring.const_code(F.code_of([0, 1]))
        raise ParseError(f"unknown identifier {t.name!r}", t.line, t.col)  # pragma: no cover
    if isinstance(t, Add):
        out = _term(t.items[0], ring)
        for i in t.items[1:]:
            out = E.add(out, _term(i, ring))
        return out
    if isinstance(t, Neg):
        return E.negate(_term(t.item, ring))
    if isinstance(t, Mul):
        out = _term(t.items[0], ring)
        for i in t.items[1:]:
            out = E.multiply(out, _term(i, ring))
        return out
    if isinstance(t, Pow):
        return E.power(_term(t.base, ring), t.exp)
    raise TypeError(f"not a term: {t!r}")  # pragma: no cover


def parse_file(path: str, field: FieldSpec) -> Formula:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read(), field)


__all__ = [
    "Atom", "NegAtom", "TRUE", "FALSE", "And", "Or", "Not", "Exists", "Forall", "Formula",
    "PrenexFormula", "parse", "parse_file", "free_variables", "to_nnf", "to_prenex", "render",
    "conj", "disj", "EXISTS", "FORALL", "ParseError", "FieldError",
]
