"""Exact arithmetic in GF(p^r).

Elements are encoded as integers ``c_0 + c_1 p + ... + c_{r-1} p^{r-1}`` where
``c_i`` are the coefficients (low to high) of the residue class polynomial in the
generator.  The hot paths (polynomial arithmetic, Buchberger) work directly on
those codes through :class:`FieldSpec` methods; :class:`FieldElement` is the
public value object.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterator, Sequence

MAX_ORDER = 1 << 16
_ADD_TABLE_LIMIT = 729


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# --- polynomials over F_p as coefficient lists, low to high -------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    """Remainder of ``a`` modulo the monic polynomial ``m`` over F_p."""
    a = _trim(list(a))
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        c = a[-1]
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _trim(a)
    return a


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Brute-force irreducibility test for a monic polynomial over F_p.

    Every monic polynomial of degree 1..r//2 is tried as a divisor; for r <= 3
    this is exactly the "no root in F_p" test.
    """
    r = len(modulus) - 1
    if r < 1 or modulus[-1] != 1:
        return False
    if r == 1:
        return True
    for d in range(1, r // 2 + 1):
        for low in product(range(p), repeat=d):
            if not _pmod(modulus, list(low) + [1], p):
                return False
    return True


def default_modulus(p: int, r: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree ``r`` over F_p.

    Coefficients are compared from degree ``r-1`` down to the constant term.
    """
    for high_to_low in product(range(p), repeat=r):
        cand = tuple(reversed(high_to_low)) + (1,)
        if cand[0] != 0 and is_irreducible(cand, p):
            return cand
    raise FieldError(f"no irreducible polynomial of degree {r} over F_{p}")  # pragma: no cover


# --- field specification -------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    """The field F_q, q = p^r, with a fixed defining modulus.

    ``modulus`` is the coefficient vector of the defining polynomial, low to
    high.  For prime fields it is the placeholder ``(0, 1)``.
    """

    p: int
    r: int
    modulus: tuple[int, ...]
    generator_name: str = "w"
    q: int = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "q", self.p**self.r)

    def __repr__(self) -> str:
        if self.r == 1:
            return f"F_{self.q}"
        return f"F_{self.q}[{self.render_modulus()}]"

    # cached tables live outside the dataclass fields so equality stays structural
    @cached_property
    def _tables(self) -> tuple[list[int], list[int], list[list[int]] | None]:
        q, p, r = self.q, self.p, self.r
        if r == 1:
            return [], [], None
        # find a primitive element by brute force and build exp/log tables
        for g in range(2, q):
            exp = [1]
            x = 1
            for _ in range(q - 2):
                x = self._slow_mul(x, g)
                if x == 1:
                    break
                exp.append(x)
            if len(exp) == q - 1:
                break
        else:  # pragma: no cover - F_q^* is always cyclic
            raise FieldError("no primitive element found")
        log = [0] * q
        for i, v in enumerate(exp):
            log[v] = i
        add = None
        if p != 2 and q <= _ADD_TABLE_LIMIT:
            add = [[self._slow_add(a, b) for b in range(q)] for a in range(q)]
        return exp, log, add

    @cached_property
    def op_tables(self) -> tuple[list[list[int]], list[list[int]]] | None:
        """Full (add, mul) tables indexed by codes, for q <= 256; else None."""
        if self.q > 256:
            return None
        rng = range(self.q)
        return ([[self.add(a, b) for b in rng] for a in rng],
                [[self.mul(a, b) for b in rng] for a in rng])

    # -- code <-> coefficient vectors
    def coeffs_of(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.r):
            code, c = divmod(code, self.p)
            out.append(c)
        return tuple(out)

    def code_of(self, coeffs: Sequence[int]) -> int:
        code = 0
        for c in reversed(coeffs):
            code = code * self.p + c % self.p
        return code

    def _slow_add(self, a: int, b: int) -> int:
        return self.code_of([(x + y) % self.p for x, y in zip(self.coeffs_of(a), self.coeffs_of(b))])

    def _slow_mul(self, a: int, b: int) -> int:
        prod = _pmul(self.coeffs_of(a), self.coeffs_of(b), self.p)
        rem = _pmod(prod, self.modulus, self.p)
        return self.code_of(rem + [0] * (self.r - len(rem)))

    # -- arithmetic on codes
    def add(self, a: int, b: int) -> int:
        if self.r == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        table = self._tables[2]
        if table is not None:
            return table[a][b]
        return self._slow_add(a, b)

    def neg(self, a: int) -> int:
        if self.r == 1:
            return -a % self.p
        if self.p == 2:
            return a
        return self.code_of([-c for c in self.coeffs_of(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.r == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        exp, log, _ = self._tables
        return exp[(log[a] + log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        if self.r == 1:
            return pow(a, self.p - 2, self.p)
        exp, log, _ = self._tables
        return exp[-log[a] % (self.q - 1)]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if e == 0:
            return 1
        if a == 0:
            return 0
        if self.r == 1:
            return pow(a, e, self.p)
        exp, log, _ = self._tables
        return exp[log[a] * e % (self.q - 1)]

    def from_int(self, n: int) -> int:
        """Image of the integer ``n`` under Z -> F_q."""
        return n % self.p

    # -- public element API
    def __call__(self, value: int | Sequence[int] | str) -> FieldElement:
        if isinstance(value, str):
            return self.parse_element(value)
        if isinstance(value, int):
            return FieldElement(self.coeffs_of(self.from_int(value)), self)
        coeffs = tuple(c % self.p for c in value) + (0,) * (self.r - len(value))
        if len(coeffs) != self.r:
            raise FieldError(f"too many coefficients for {self!r}")
        return FieldElement(coeffs, self)

    def element(self, code: int) -> FieldElement:
        return FieldElement(self.coeffs_of(code), self)

    @property
    def zero(self) -> FieldElement:
        return self.element(0)

    @property
    def one(self) -> FieldElement:
        return self.element(1)

    def codes(self) -> range:
        return range(self.q)

    def elements(self) -> list[FieldElement]:
        return [self.element(c) for c in range(self.q)]

    # -- text
    def render(self, code: int) -> str:
        if self.r == 1:
            return str(code)
        g = self.generator_name
        parts = []
        for i, c in reversed(list(enumerate(self.coeffs_of(code)))):
            if c == 0:
                continue
            mono = "" if i == 0 else (g if i == 1 else f"{g}^{i}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return "+".join(parts) if parts else "0"

    def is_compound(self, code: int) -> bool:
        """True when the rendering of ``code`` needs parentheses as a factor."""
        return "+" in self.render(code)

    def render_modulus(self) -> str:
        g = self.generator_name
        parts = []
        for i, c in reversed(list(enumerate(self.modulus))):
            if c == 0:
                continue
            mono = "1" if i == 0 else (g if i == 1 else f"{g}^{i}")
            parts.append(mono if c == 1 else (f"{c}*{mono}" if i else str(c)))
        return "+".join(parts)

    def parse_element(self, text: str) -> FieldElement:
        """Parse ``w^2+2*w+1`` style renderings (or plain residues)."""
        s = text.replace(" ", "")
        if not s:
            raise FieldError("empty field constant")
        g = re.escape(self.generator_name)
        coeffs = [0] * max(self.r, 1)
        term_re = re.compile(rf"^(?:(\d+)\*?)?(?:({g})(?:\^(\d+))?)?$")
        for tok in s.split("+"):
            m = term_re.match(tok)
            if not tok or not m or (m.group(1) is None and m.group(2) is None):
                raise FieldError(f"bad field constant {text!r}")
            c = int(m.group(1)) if m.group(1) is not None else 1
            if m.group(2) is None:
                deg = 0
            else:
                if self.r == 1:
                    raise FieldError(f"{self!r} has no generator {self.generator_name!r}")
                deg = int(m.group(3)) if m.group(3) else 1
            if deg >= self.r:
                raise FieldError(f"generator power {deg} not reduced in {self!r}")
            coeffs[deg] += c
        return self(coeffs)


@dataclass(frozen=True)
class FieldElement:
    """A canonical element of F_q: ``r`` residues mod ``p``, low to high."""

    coeffs: tuple[int, ...]
    field: FieldSpec = field(repr=False)

    @property
    def code(self) -> int:
        return self.field.code_of(self.coeffs)

    def _check(self, other: FieldElement) -> None:
        if not isinstance(other, FieldElement) or other.field != self.field:
            raise FieldError("field elements from different fields")

    def __add__(self, other: FieldElement) -> FieldElement:
        return ff_add(self, other)

    def __sub__(self, other: FieldElement) -> FieldElement:
        return ff_add(self, ff_neg(other))

    def __mul__(self, other: FieldElement) -> FieldElement:
        return ff_mul(self, other)

    def __neg__(self) -> FieldElement:
        return ff_neg(self)

    def __pow__(self, e: int) -> FieldElement:
        return ff_pow(self, e)

    def __truediv__(self, other: FieldElement) -> FieldElement:
        return ff_mul(self, ff_inv(other))

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __str__(self) -> str:
        return self.field.render(self.code)

    def __repr__(self) -> str:
        return f"FieldElement({self}, {self.field!r})"


def make_field(p: int, r: int = 1, modulus: Sequence[int] | None = None,
               generator_name: str = "w") -> FieldSpec:
    """Build and validate F_{p^r}.

    >>> make_field(2, 2).render_modulus()
    'w^2+w+1'
    """
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if r < 1:
        raise FieldError("extension degree must be >= 1")
    if p**r > MAX_ORDER:
        raise FieldError(f"field order {p}^{r} exceeds supported bound {MAX_ORDER}")
    if r == 1:
        if modulus is not None and tuple(modulus) not in ((0, 1),):
            raise FieldError("prime fields take no modulus")
        return FieldSpec(p, 1, (0, 1), generator_name)
    if modulus is None:
        mod = default_modulus(p, r)
    else:
        mod = tuple(modulus)
        if len(mod) != r + 1 or mod[-1] != 1 or any(not 0 <= c < p for c in mod):
            raise FieldError(f"modulus {mod} is not monic of degree {r} over F_{p}")
        if not is_irreducible(mod, p):
            raise FieldError(f"modulus {mod} is reducible over F_{p}")
    return FieldSpec(p, r, mod, generator_name)


def field_of_order(q: int, modulus: Sequence[int] | None = None,
                   generator_name: str = "w") -> FieldSpec:
    """F_q from its order; ``q`` must be a prime power."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    r, rest = 0, q
    while rest % p == 0:
        rest //= p
        r += 1
    if rest != 1:
        raise FieldError(f"{q} is not a prime power")
    return make_field(p, r, modulus, generator_name)


def parse_modulus(text: str, p: int, generator_name: str = "w") -> tuple[int, ...]:
    """Coefficient vector (low to high) of a modulus written like ``w^2+w+1``."""
    s = text.replace(" ", "")
    g = re.escape(generator_name)
    coeffs: dict[int, int] = {}
    for tok in s.split("+"):
        m = re.fullmatch(rf"(?:(\d+)\*?)?(?:({g})(?:\^(\d+))?)?", tok)
        if not tok or not m or (m.group(1) is None and m.group(2) is None):
            raise FieldError(f"bad modulus {text!r}")
        c = int(m.group(1)) if m.group(1) else 1
        deg = 0 if m.group(2) is None else int(m.group(3) or 1)
        coeffs[deg] = (coeffs.get(deg, 0) + c) % p
    deg = max(coeffs)
    return tuple(coeffs.get(i, 0) for i in range(deg + 1))


def _same(a: FieldElement, b: FieldElement) -> FieldSpec:
    if a.field != b.field:
        raise FieldError("field elements from different fields")
    return a.field


def ff_add(a: FieldElement, b: FieldElement) -> FieldElement:
    F = _same(a, b)
    return F.element(F.add(a.code, b.code))


def ff_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    F = _same(a, b)
    return F.element(F.mul(a.code, b.code))


def ff_neg(a: FieldElement) -> FieldElement:
    return a.field.element(a.field.neg(a.code))


def ff_inv(a: FieldElement) -> FieldElement:
    return a.field.element(a.field.inv(a.code))


def ff_pow(a: FieldElement, e: int) -> FieldElement:
    return a.field.element(a.field.pow(a.code, e))


def enumerate_elements(F: FieldSpec) -> list[FieldElement]:
    """All q elements ordered by code: 0, 1, then increasing coefficient vectors."""
    return F.elements()


def iter_codes(F: FieldSpec) -> Iterator[int]:
    return iter(range(F.q))
