"""Tokenizer and arithmetic-term grammar shared by polynomial and formula parsing."""
from __future__ import annotations

import re
from dataclasses import dataclass


class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        self.msg, self.line, self.col = msg, line, col
        super().__init__(f"{line}:{col}: {msg}" if line else msg)


KEYWORDS = {"exists", "forall", "true", "false"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op><->|->|/\\|\\/|!=|[-+*^()=~.,])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # num | ident | kw | op | eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        col = pos - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind in ("num", "op"):
            out.append(Token(kind, m.group(), line, col))
        elif kind == "ident":
            word = m.group()
            out.append(Token("kw" if word in KEYWORDS else "ident", word, line, col))
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


# --- term AST ----------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: int
    line: int = 0
    col: int = 0


@dataclass(frozen=True)
class Name:
    name: str
    line: int = 0
    col: int = 0


@dataclass(frozen=True)
class Add:
    items: tuple


@dataclass(frozen=True)
class Mul:
    items: tuple


@dataclass(frozen=True)
class Neg:
    item: object


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int


Term = Num | Name | Add | Mul | Neg | Pow


def term_names(t: Term) -> list[Name]:
    """Name leaves in left-to-right order."""
    if isinstance(t, Name):
        return [t]
    if isinstance(t, (Add, Mul)):
        return [n for i in t.items for n in term_names(i)]
    if isinstance(t, Neg):
        return term_names(t.item)
    if isinstance(t, Pow):
        return term_names(t.base)
    return []


class TokenStream:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def cur(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def at(self, *texts: str) -> bool:
        t = self.cur
        return t.kind in ("op", "kw") and t.text in texts

    def next(self) -> Token:
        t = self.cur
        self.pos += 1
        return t

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}")
        return self.next()

    def fail(self, msg: str) -> None:
        t = self.cur
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(f"{msg}, found {found}", t.line, t.col)


def parse_term(ts: TokenStream) -> Term:
    items = []
    if ts.at("-"):
        ts.next()
        items.append(Neg(_product(ts)))
    else:
        items.append(_product(ts))
    while ts.at("+", "-"):
        op = ts.next().text
        p = _product(ts)
        items.append(p if op == "+" else Neg(p))
    return items[0] if len(items) == 1 else Add(tuple(items))


def _product(ts: TokenStream) -> Term:
    items = [_unary(ts)]
    while ts.at("*"):
        ts.next()
        items.append(_unary(ts))
    return items[0] if len(items) == 1 else Mul(tuple(items))


def _unary(ts: TokenStream) -> Term:
    if ts.at("-"):
        ts.next()
        return Neg(_unary(ts))
    base = _primary(ts)
    if ts.at("^"):
        ts.next()
        if ts.cur.kind != "num":
            ts.fail("expected a non-negative integer exponent")
        return Pow(base, int(ts.next().text))
    return base


def _primary(ts: TokenStream) -> Term:
    t = ts.cur
    if t.kind == "num":
        ts.next()
        return Num(int(t.text), t.line, t.col)
    if t.kind == "ident":
        ts.next()
        return Name(t.text, t.line, t.col)
    if ts.at("("):
        ts.next()
        inner = parse_term(ts)
        ts.expect(")")
        return inner
    ts.fail("expected a term")
    raise AssertionError  # pragma: no cover
