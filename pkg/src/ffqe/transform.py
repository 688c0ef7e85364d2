"""Flattening a quantifier-free NNF matrix into a conjunction of equations.

``f != 0`` becomes ``f*u - 1 = 0`` for a fresh ``u``; a disjunction of
ideals ``J1``, ``J2`` becomes ``v*J1 + (1 - v)*J2`` for a fresh ``v``.  The
original formula's realization is the projection of the resulting variety
that forgets the fresh coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from . import expr as E
from .expr import PolyLike
from .field import FieldSpec
from .logic import FALSE, TRUE, And, Atom, Formula, NegAtom, Not, Or, _Const, all_variables
from .polynomial import Ring


@dataclass
class FreshNames:
    """Counters for system variables; names start with ``_`` so they never clash."""

    u: int = 0
    v: int = 0
    z: int = 0

    def next_u(self) -> str:
        self.u += 1
        return f"_u{self.u}"

    def next_v(self) -> str:
        self.v += 1
        return f"_v{self.v}"

    def next_z(self) -> str:
        self.z += 1
        return f"_z{self.z}"


@dataclass(frozen=True)
class FlattenResult:
    fresh_u: tuple[str, ...]
    fresh_v: tuple[str, ...]
    conjuncts: tuple[PolyLike, ...]
    ring: Ring = field(repr=False)

    @property
    def fresh(self) -> tuple[str, ...]:
        """Fresh variables, highest rank first (disjunction variables, then negation ones)."""
        return self.fresh_v + self.fresh_u


def count_negatoms(phi: Formula) -> int:
    if isinstance(phi, NegAtom):
        return 1
    if isinstance(phi, (And, Or)):
        return sum(count_negatoms(a) for a in phi.args)
    return 0


def count_disjunctions(phi: Formula) -> int:
    """Binary disjunctions after left-folding n-ary Or nodes."""
    if isinstance(phi, Or):
        return len(phi.args) - 1 + sum(count_disjunctions(a) for a in phi.args)
    if isinstance(phi, And):
        return sum(count_disjunctions(a) for a in phi.args)
    return 0


def _check_matrix(phi: Formula) -> None:
    if isinstance(phi, Not):
        raise ValueError("flattening expects a formula in negation normal form")
    if isinstance(phi, (And, Or)):
        for a in phi.args:
            _check_matrix(a)
    elif not isinstance(phi, (Atom, NegAtom, _Const)):
        raise ValueError(f"flattening expects a quantifier-free formula, got {type(phi).__name__}")


def _ring_for(phi: Formula, fresh: list[str], field: FieldSpec | None) -> Ring:
    names = fresh + [n for n in all_variables(phi) if n not in fresh]
    if field is None:
        from .logic import field_of

        field = field_of(phi)
    if field is None:
        raise ValueError("cannot infer the field of a formula without atoms; pass field=")
    return Ring.of(field, names)


def eliminate_negations(psi: Formula, fresh: FreshNames | None = None,
                        field: FieldSpec | None = None) -> tuple[tuple[str, ...], Formula]:
    """Replace each ``f != 0`` by ``f*u - 1 = 0``, fresh ``u`` per occurrence, left to right."""
    _check_matrix(psi)
    fresh = fresh if fresh is not None else FreshNames()
    names = [fresh.next_u() for _ in range(count_negatoms(psi))]
    if not names:
        return (), psi
    ring = _ring_for(psi, names, field)
    it = iter(names)

    def walk(f: Formula) -> Formula:
        if isinstance(f, NegAtom):
            u = ring.var(next(it))
            p = E.to_ring(f.poly, ring)
            return Atom(E.add(E.multiply(p, u), -ring.one))
        if isinstance(f, Atom):
            return Atom(E.to_ring(f.poly, ring))
        if isinstance(f, (And, Or)):
            return type(f)(tuple(walk(a) for a in f.args))
        return f

    return tuple(names), walk(psi)


def flatten_to_ideal(psi: Formula, fresh: FreshNames | None = None,
                     field: FieldSpec | None = None) -> FlattenResult:
    """Generators of an ideal whose variety projects onto the realization of ``psi``.

    ``psi`` must be free of negated atoms.
    """
    _check_matrix(psi)
    if count_negatoms(psi):
        raise ValueError("eliminate negations before flattening")
    fresh = fresh if fresh is not None else FreshNames()
    vs = [fresh.next_v() for _ in range(count_disjunctions(psi))]
    ring = _ring_for(psi, vs, field)
    it = iter(vs)
    one = ring.one

    def walk(f: Formula) -> list[PolyLike]:
        if isinstance(f, Atom):
            return [E.to_ring(f.poly, ring)]
        if f == TRUE:
            return []
        if f == FALSE:
            return [one]
        if isinstance(f, And):
            return [g for a in f.args for g in walk(a)]
        if isinstance(f, Or):
            J = walk(f.args[0])
            for a in f.args[1:]:
                J2 = walk(a)
                v = ring.var(next(it))
                J = [E.multiply(g, v) for g in J] + [E.multiply(g, one - v) for g in J2]
            return J
        raise AssertionError(f)  # pragma: no cover

    return FlattenResult((), tuple(vs), tuple(walk(psi)), ring)


def flatten(psi: Formula, fresh: FreshNames | None = None,
            field: FieldSpec | None = None) -> FlattenResult:
    """Negation removal followed by disjunction removal."""
    fresh = fresh if fresh is not None else FreshNames()
    us, psi2 = eliminate_negations(psi, fresh, field)
    res = flatten_to_ideal(psi2, fresh, field)
    ring = _ring_for(psi, list(res.fresh_v) + list(us), field) if (us or res.fresh_v) else res.ring
    conj = tuple(E.to_ring(g, ring) for g in res.conjuncts)
    return FlattenResult(us, res.fresh_v, conj, ring)


def flattened_formula(res: FlattenResult) -> Formula:
    """The conjunction of equations (fresh variables left free)."""
    from .logic import conj

    return conj(Atom(g) for g in res.conjuncts)


def term_count(phi: Formula | FlattenResult) -> int:
    """Total number of stored terms (products left unexpanded)."""
    if isinstance(phi, FlattenResult):
        return sum(_terms(g) for g in phi.conjuncts)
    if isinstance(phi, (Atom, NegAtom)):
        return _terms(phi.poly)
    if isinstance(phi, (And, Or)):
        return sum(term_count(a) for a in phi.args)
    return 0


def _terms(p: PolyLike) -> int:
    from .polynomial import Polynomial

    if isinstance(p, Polynomial):
        return len(p)
    return sum(_terms(g) for g in (p.factors if isinstance(p, E.Prod) else p.items))
