"""Ground-truth semantics by exhaustive enumeration.

Exponential by design; this is the test baseline and the witness search, not a
production QE path.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, Sequence

from . import expr as E
from .field import FieldElement, FieldSpec
from .logic import Atom, And, Exists, Forall, Formula, NegAtom, Not, Or, _Const, all_variables, field_of, free_variables
from .polynomial import Polynomial, Ring

DEFAULT_BOUND = 1 << 24

Point = tuple[int, ...]


class EnumerationBoundExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Realization:
    """Set of satisfying assignments (field codes) over ``vars``."""

    vars: tuple[str, ...]
    points: frozenset[Point]
    field: FieldSpec

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, point: Point | Mapping[str, int | FieldElement]) -> bool:
        if isinstance(point, Mapping):
            point = tuple(_code(self.field, point[v]) for v in self.vars)
        return tuple(point) in self.points

    def is_full(self) -> bool:
        return len(self.points) == self.field.q ** len(self.vars)

    def assignments(self) -> list[dict[str, FieldElement]]:
        return [{v: self.field.element(c) for v, c in zip(self.vars, p)} for p in sorted(self.points)]


def _code(F: FieldSpec, v: int | FieldElement) -> int:
    return v.code if isinstance(v, FieldElement) else v


def _check_bound(F: FieldSpec, nvars: int, bound: int) -> None:
    if F.q ** nvars > bound:
        raise EnumerationBoundExceeded(f"{F.q}^{nvars} points exceed the enumeration bound {bound}")


def holds(phi: Formula, env: dict[str, int], F: FieldSpec, forall_via_exists: bool = False) -> bool:
    """Truth value of ``phi`` under ``env`` (variable -> field code)."""
    if isinstance(phi, Atom):
        return E.evaluate_code(phi.poly, env) == 0
    if isinstance(phi, NegAtom):
        return E.evaluate_code(phi.poly, env) != 0
    if isinstance(phi, _Const):
        return phi.value
    if isinstance(phi, And):
        return all(holds(a, env, F, forall_via_exists) for a in phi.args)
    if isinstance(phi, Or):
        return any(holds(a, env, F, forall_via_exists) for a in phi.args)
    if isinstance(phi, Not):
        return not holds(phi.arg, env, F, forall_via_exists)
    if isinstance(phi, Exists):
        return _exists(phi.vars, phi.body, env, F, forall_via_exists)
    if isinstance(phi, Forall):
        if forall_via_exists:
            return not _exists(phi.vars, Not(phi.body), env, F, True)
        saved = {v: env.get(v) for v in phi.vars}
        try:
            for vals in product(range(F.q), repeat=len(phi.vars)):
                env.update(zip(phi.vars, vals))
                if not holds(phi.body, env, F, forall_via_exists):
                    return False
            return True
        finally:
            _restore(env, saved)
    raise TypeError(f"not a formula: {phi!r}")


def _exists(vars, body, env, F, fve) -> bool:
    saved = {v: env.get(v) for v in vars}
    try:
        for vals in product(range(F.q), repeat=len(vars)):
            env.update(zip(vars, vals))
            if holds(body, env, F, fve):
                return True
        return False
    finally:
        _restore(env, saved)


def _restore(env: dict, saved: dict) -> None:
    for k, v in saved.items():
        if v is None:
            env.pop(k, None)
        else:
            env[k] = v


def realization(phi: Formula, field: FieldSpec | None = None, vars: Sequence[str] | None = None,
                bound: int = DEFAULT_BOUND, forall_via_exists: bool = False) -> Realization:
    """All assignments to ``vars`` (default: the free variables) satisfying ``phi``."""
    F = field or field_of(phi)
    if F is None:
        raise ValueError("cannot infer the field of a formula without atoms; pass field=")
    free = free_variables(phi)
    vars = tuple(free if vars is None else vars)
    missing = [v for v in free if v not in vars]
    if missing:
        raise ValueError(f"free variables {missing} not among the realization variables")
    _check_bound(F, len(set(all_variables(phi)) | set(vars)), bound)
    pts = set()
    env: dict[str, int] = {}
    for vals in product(range(F.q), repeat=len(vars)):
        env.update(zip(vars, vals))
        if holds(phi, env, F, forall_via_exists):
            pts.add(vals)
    return Realization(vars, frozenset(pts), F)


def project(R: Realization, drop_vars: Iterable[str]) -> Realization:
    drop = set(drop_vars)
    unknown = drop - set(R.vars)
    if unknown:
        raise ValueError(f"unknown variables {sorted(unknown)}")
    keep = [i for i, v in enumerate(R.vars) if v not in drop]
    return Realization(tuple(R.vars[i] for i in keep),
                       frozenset(tuple(p[i] for i in keep) for p in R.points), R.field)


def equivalent(phi: Formula, psi: Formula, field: FieldSpec | None = None,
               bound: int = DEFAULT_BOUND) -> bool:
    """Same realization; variables free on only one side range over F_q on both."""
    F = field or field_of(phi) or field_of(psi)
    if F is None:
        # no atoms on either side: truth does not depend on the (nonempty) domain
        from .field import make_field

        F = make_field(2)
    vars = list(dict.fromkeys(free_variables(phi) + free_variables(psi)))
    return realization(phi, F, vars, bound) == realization(psi, F, vars, bound)


def variety(polys: Sequence[Polynomial], ring: Ring | None = None,
            bound: int = DEFAULT_BOUND) -> Realization:
    """Common zeros of ``polys`` over F_q^n for the ring's variables."""
    ring = ring or polys[0].ring
    F = ring.field
    _check_bound(F, ring.nvars, bound)
    polys = [p.to_ring(ring) for p in polys]
    pts = set()
    names = ring.names
    for vals in product(range(F.q), repeat=len(names)):
        env = dict(zip(names, vals))
        if all(p.evaluate_code(env) == 0 for p in polys):
            pts.add(vals)
    return Realization(names, frozenset(pts), F)


def find_assignment(phi: Formula, vars: Sequence[str], field: FieldSpec,
                    bound: int = DEFAULT_BOUND) -> dict[str, FieldElement] | None:
    """First satisfying assignment in enumeration order, or None."""
    _check_bound(field, len(vars), bound)
    env: dict[str, int] = {}
    for vals in product(range(field.q), repeat=len(vars)):
        env.update(zip(vars, vals))
        if holds(phi, env, field):
            return {v: field.element(c) for v, c in zip(vars, vals)}
    return None


def realization_formula(R: Realization) -> Formula:
    """CNF with one clause ``OR_i x_i - a_i != 0`` per excluded point ``a``."""
    from .logic import FALSE, TRUE, conj, disj

    if not R.vars:
        return TRUE if R.points else FALSE
    ring = Ring.of(R.field, list(R.vars))
    xs = [ring.var(v) for v in R.vars]
    clauses = []
    for pt in product(range(R.field.q), repeat=len(R.vars)):
        if pt not in R.points:
            clauses.append(disj(NegAtom(x - ring.const_code(c)) for x, c in zip(xs, pt)))
    return conj(clauses)
