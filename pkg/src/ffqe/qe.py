"""Blockwise quantifier elimination over F_q with lex Gröbner bases.

Each loop iteration removes the innermost existential block (flatten the
matrix, compute a lex basis with field polynomials for every variable, keep
the elements free of eliminated variables) and then the universal block above
it (eliminate ``exists x. g_i != 0`` for every conjunct ``g_i = 0`` and negate).
The output is a conjunction of clauses when the innermost block is existential.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Sequence

from . import expr as E
from .field import FieldElement, FieldSpec
from .groebner import Budget, BudgetExhausted, GBStats, Ideal, buchberger, eliminate
from .logic import (
    EXISTS,
    FALSE,
    FORALL,
    TRUE,
    And,
    Atom,
    Exists,
    Formula,
    NegAtom,
    Not,
    Or,
    PrenexFormula,
    _Const,
    conj,
    disj,
    field_of,
    free_variables,
    is_quantifier_free,
    to_nnf,
    to_prenex,
)
from .oracle import DEFAULT_BOUND, find_assignment, holds
from .polynomial import MonomialOrder, Polynomial, Ring, normal_form, reduce_exponents_by_field_polys
from .transform import FreshNames, flatten

log = logging.getLogger(__name__)

__all__ = [
    "QEOptions", "QEOutput", "qe", "decide", "witness", "to_cnf", "simplify",
    "eliminate_innermost_existential", "eliminate_innermost_universal", "BudgetExhausted",
]


@dataclass
class QEOptions:
    simplify: bool = False
    cnf: bool = False
    order: Sequence[str] | None = None
    """Optional ranking override; only reorders within eliminated and kept groups."""
    block_order: bool = False
    """Use block lex with graded tie-break instead of pure lex (experimental)."""
    budget_seconds: float | None = None
    max_basis: int | None = None
    trace: bool = False


@dataclass
class QEOutput:
    formula: Formula
    cnf: bool
    trace: list[dict] | None = None
    free_vars: tuple[str, ...] = ()

    def clauses(self) -> list[list[tuple[str, str]]]:
        """CNF view: list of clauses, each a list of (``=`` | ``!=``, polynomial)."""
        return formula_clauses(self.formula)


class _Engine:
    def __init__(self, field: FieldSpec, free: Sequence[str], opts: QEOptions):
        self.field = field
        self.free = list(free)
        self.opts = opts
        self.fresh = FreshNames()
        self.budget = Budget(opts.budget_seconds, opts.max_basis)
        self.trace: list[dict] = []
        self.rank = {n: i for i, n in enumerate(opts.order or ())}

    # -- variable ranking
    def _sorted(self, names: list[str]) -> list[str]:
        if not self.rank:
            return names
        big = len(self.rank)
        return sorted(names, key=lambda n: (self.rank.get(n, big), names.index(n)))

    def _ring(self, fresh: Sequence[str], block: Sequence[str],
              outer: Sequence[tuple[str, Sequence[str]]], occurring: set[str],
              names: Sequence[str] = ()) -> tuple[Ring, int]:
        elim = list(fresh) + self._sorted(list(reversed(block)))
        kept_bound = [v for _, vs in reversed(outer) for v in reversed(vs)]
        kept = self._sorted(kept_bound) + self._sorted(self.free)
        extra = sorted(occurring - set(elim) - set(kept) - set(names))
        kept += extra
        elim = [n for n in elim if n in occurring] + [n for n in names if n in occurring]
        kept = [n for n in kept if n in occurring]
        order = MonomialOrder("blocklex", (len(elim), len(kept))) if self.opts.block_order \
            else MonomialOrder()
        return Ring.of(self.field, elim + kept, order), len(elim)

    # -- one Gröbner elimination
    def eliminate_block(self, matrix: Formula, block: Sequence[str],
                        outer: Sequence[tuple[str, Sequence[str]]], kind: str) -> tuple[list[Polynomial], dict]:
        t0 = time.monotonic()
        res = flatten(matrix, self.fresh, self.field)
        occurring: set[str] = set()
        for g in res.conjuncts:
            occurring.update(E.variables(g))
        slots = [self.fresh.next_z() for _ in range(_factor_count(res.conjuncts))]
        ring, _ = self._ring(res.fresh, block, outer, occurring | set(slots), slots)
        conjuncts = [E.to_ring(g, ring) for g in res.conjuncts]
        polys, named = _expand_all(conjuncts, ring, slots)
        # release unused naming slots and drop them from the ring
        self.fresh.z -= len(slots) - len(named)
        used: set[str] = set()
        for p in polys:
            used.update(p.variables())
        ring, n_elim = self._ring(res.fresh, block, outer, used, named)
        polys = [p.to_ring(ring) for p in polys]
        J = Ideal.of(ring, polys + [ring.field_polynomial(n) for n in ring.names])
        stats = GBStats()
        G = buchberger(J, budget=self.budget, stats=stats)
        keep_names = ring.names[n_elim:]
        kept = eliminate(G, keep_names)
        kept = [g.to_ring(Ring.of(self.field, keep_names)) for g in kept]
        info = {
            "kind": kind,
            "block": list(block),
            "eliminated": list(ring.names[:n_elim]),
            "fresh_u": len(res.fresh_u),
            "fresh_v": len(res.fresh_v),
            "named": len(named),
            "ring": list(ring.names),
            "generators": len(J.generators),
            "basis_size": len(G),
            "kept": [str(g) for g in kept],
            "pairs": stats.pairs,
            "seconds": round(time.monotonic() - t0, 6),
        }
        log.debug("eliminated %s: basis %d, kept %d", info["eliminated"], len(G), len(kept))
        return kept, info

    def existential(self, pf: PrenexFormula) -> PrenexFormula:
        kind, block = pf.blocks[-1]
        if kind != EXISTS:
            raise ValueError("innermost block is not existential")
        outer = pf.blocks[:-1]
        size_in = _formula_size(pf.matrix)
        kept, info = self.eliminate_block(pf.matrix, block, outer, EXISTS)
        info["input_size"] = size_in
        self.trace.append(info)
        return PrenexFormula(outer, _equations(kept))

    def universal(self, pf: PrenexFormula) -> PrenexFormula:
        kind, block = pf.blocks[-1]
        if kind != FORALL:
            raise ValueError("innermost block is not universal")
        outer = pf.blocks[:-1]
        conjuncts = _conjunct_polys(pf.matrix, self.field)
        t0 = time.monotonic()
        clauses: list[Formula] = []
        subs = []
        for g in conjuncts:
            if reduce_exponents_by_field_polys(g).is_zero():
                # g vanishes on all of F_q^n, so "exists x. g != 0" is false
                subs.append({"conjunct": str(g), "kept": ["1"], "skipped": True})
                continue
            kept, info = self.eliminate_block(NegAtom(g), block, outer, FORALL)
            info["conjunct"] = str(g)
            subs.append(info)
            clauses.append(disj(_neg_literal(h) for h in kept))
        matrix = conj(clauses)
        self.trace.append({
            "kind": FORALL,
            "block": list(block),
            "conjuncts": len(conjuncts),
            "subrounds": subs,
            "output_clauses": _clause_count(matrix),
            "output_literals": _literal_count(matrix),
            "seconds": round(time.monotonic() - t0, 6),
        })
        return PrenexFormula(outer, matrix)


NAME_LIMIT = 256
"""Products whose expansion would exceed this many terms get their factors named."""


def _factor_count(conjuncts) -> int:
    def count(g):
        if isinstance(g, Polynomial):
            return 0
        kids = g.factors if isinstance(g, E.Prod) else g.items
        return (len(kids) if isinstance(g, E.Prod) else 0) + sum(count(k) for k in kids)

    return sum(count(g) for g in conjuncts)


def _expand_all(conjuncts: list[E.PolyLike], ring: Ring,
                slots: Sequence[str] = ()) -> tuple[list[Polynomial], list[str]]:
    """Expand conjuncts, reducing modulo univariate conjuncts and field polynomials.

    Replacing generators by their normal forms modulo other generators keeps
    the ideal unchanged.  When a lazy product would expand past ``NAME_LIMIT``
    terms, each non-monomial factor ``h`` is replaced by a fresh variable ``z``
    taken from ``slots`` and ``z - h`` is added as a generator.  This is a
    definitional extension: ``z`` is eliminated with the block, so the
    elimination ideal does not change.
    """
    plain = [reduce_exponents_by_field_polys(g) for g in conjuncts if isinstance(g, Polynomial)]
    lazy = [g for g in conjuncts if not isinstance(g, Polynomial)]
    by_var: dict[str, list[Polynomial]] = {}
    for p in plain:
        vs = p.variables()
        if len(vs) == 1:
            by_var.setdefault(vs[0], []).append(p)
    reducers = []
    for n in ring.names:
        gens = by_var.get(n, []) + [ring.field_polynomial(n)]
        if len(gens) == 1:
            reducers.append(gens[0])
        else:
            reducers.extend(buchberger(Ideal.of(ring, gens)).polys)
    if any(r.is_constant() for r in reducers):
        return [ring.one], []

    def reduce(p: Polynomial) -> Polynomial:
        return normal_form(p, reducers)

    free_slots = list(slots)
    named: list[str] = []
    defs: list[Polynomial] = []

    def expand(g: E.PolyLike) -> Polynomial:
        if isinstance(g, Polynomial):
            return reduce(g)
        if isinstance(g, E.Sum):
            out = ring.zero
            for item in g.items:
                out = out + expand(item)
            return out
        parts = [expand(f) for f in g.factors]
        est = 1
        for p in parts:
            est *= max(len(p), 1)
        if est > NAME_LIMIT and free_slots:
            renamed = []
            for p in parts:
                if len(p) > 1 and free_slots:
                    z = free_slots.pop(0)
                    named.append(z)
                    defs.append(ring.var(z) - p)
                    p = ring.var(z)
                renamed.append(p)
            parts = renamed
        return E.expand(E.Prod(tuple(parts)), reduce) if len(parts) > 1 else parts[0]

    out = list(plain) + [expand(g) for g in lazy]
    if lazy:
        out = [reduce(p) if len(p.variables()) > 1 else p for p in out]
    return out + defs, named


def _equations(polys: Sequence[Polynomial]) -> Formula:
    return conj(_eq_literal(g) for g in polys)


def _eq_literal(g: E.PolyLike) -> Formula:
    if isinstance(g, Polynomial) and g.is_constant():
        return TRUE if g.is_zero() else FALSE
    return Atom(g)


def _neg_literal(g: E.PolyLike) -> Formula:
    if isinstance(g, Polynomial) and g.is_constant():
        return FALSE if g.is_zero() else TRUE
    return NegAtom(g)


def _conjunct_polys(matrix: Formula, F: FieldSpec) -> list[Polynomial]:
    if matrix == TRUE:
        return []
    if matrix == FALSE:
        return [Ring.of(F, ()).one]
    items = matrix.args if isinstance(matrix, And) else (matrix,)
    out = []
    for a in items:
        if not isinstance(a, Atom):
            raise ValueError("universal elimination needs a conjunction of equations")
        out.append(E.expand(a.poly))
    return out


def _clause_count(phi: Formula) -> int:
    if isinstance(phi, And):
        return len(phi.args)
    return 0 if isinstance(phi, _Const) else 1


def _literal_count(phi: Formula) -> int:
    if isinstance(phi, (Atom, NegAtom)):
        return 1
    if isinstance(phi, (And, Or)):
        return sum(_literal_count(a) for a in phi.args)
    return 0


def _formula_size(phi: Formula) -> int:
    """Literal plus connective count."""
    if isinstance(phi, (And, Or)):
        return 1 + sum(_formula_size(a) for a in phi.args)
    if isinstance(phi, Not):
        return 1 + _formula_size(phi.arg)
    return 1


def fold_constants(phi: Formula) -> Formula:
    """Evaluate literals over constant polynomials and propagate true/false."""
    if isinstance(phi, Atom):
        return _eq_literal(phi.poly)
    if isinstance(phi, NegAtom):
        return _neg_literal(phi.poly)
    if isinstance(phi, And):
        return conj(fold_constants(a) for a in phi.args)
    if isinstance(phi, Or):
        return disj(fold_constants(a) for a in phi.args)
    return phi


def simplify(phi: Formula) -> Formula:
    """Reduce polynomials modulo field polynomials, then fold constants."""
    def red(p):
        return reduce_exponents_by_field_polys(E.expand(p, reduce_exponents_by_field_polys))

    if isinstance(phi, Atom):
        return _eq_literal(red(phi.poly))
    if isinstance(phi, NegAtom):
        return _neg_literal(red(phi.poly))
    if isinstance(phi, And):
        return conj(simplify(a) for a in phi.args)
    if isinstance(phi, Or):
        return disj(simplify(a) for a in phi.args)
    return phi


def eliminate_innermost_existential(pf: PrenexFormula, field: FieldSpec | None = None,
                                    free: Sequence[str] | None = None,
                                    opts: QEOptions | None = None) -> PrenexFormula:
    F = field or field_of(pf.matrix)
    free = free if free is not None else free_variables(pf.to_formula())
    return _Engine(F, free, opts or QEOptions()).existential(pf)


def eliminate_innermost_universal(pf: PrenexFormula, field: FieldSpec | None = None,
                                  free: Sequence[str] | None = None,
                                  opts: QEOptions | None = None) -> PrenexFormula:
    F = field or field_of(pf.matrix)
    free = free if free is not None else free_variables(pf.to_formula())
    return _Engine(F, free, opts or QEOptions()).universal(pf)


def _run(phi: Formula, F: FieldSpec, opts: QEOptions, engine: _Engine | None = None) -> QEOutput:
    pf = to_prenex(phi)
    free = free_variables(phi)
    eng = engine or _Engine(F, free, opts)
    if not pf.blocks:
        return QEOutput(fold_constants(pf.matrix), _is_cnf(pf.matrix), eng.trace, tuple(free))
    if pf.blocks[-1][0] == FORALL:
        inner = _run(Not(phi), F, opts, eng)
        out = fold_constants(to_nnf(Not(inner.formula)))
        return QEOutput(out, _is_cnf(out), eng.trace, tuple(free))
    while pf.blocks:
        pf = eng.existential(pf)
        if pf.blocks:
            pf = eng.universal(pf)
    return QEOutput(fold_constants(pf.matrix), True, eng.trace, tuple(free))


def qe(phi: Formula, field: FieldSpec | None = None, opts: QEOptions | None = None,
       **kw) -> QEOutput:
    """Quantifier-free equivalent of ``phi`` over its free variables."""
    opts = opts or QEOptions(**kw)
    F = field or field_of(phi)
    if F is None:  # no atoms at all
        from .field import make_field

        F = make_field(2)
    eng = _Engine(F, free_variables(phi), opts)
    out = _run(phi, F, opts, eng)
    formula = out.formula
    if opts.cnf and not out.cnf:
        formula = to_cnf(formula, F, eng)
        out = QEOutput(formula, True, eng.trace, out.free_vars)
    if opts.simplify:
        out = QEOutput(simplify(out.formula), out.cnf, out.trace, out.free_vars)
    if not opts.trace:
        out.trace = None
    return out


def to_cnf(psi: Formula, field: FieldSpec, engine: _Engine | None = None) -> Formula:
    """Conjunction of equations equivalent to the quantifier-free ``psi``.

    Flattens ``psi`` and eliminates only the fresh variables.
    """
    if not is_quantifier_free(psi):
        raise ValueError("to_cnf expects a quantifier-free formula")
    psi = fold_constants(to_nnf(psi))
    if isinstance(psi, _Const):
        return psi
    eng = engine or _Engine(field, free_variables(psi), QEOptions())
    kept, info = eng.eliminate_block(psi, (), (), "cnf")
    eng.trace.append(info)
    return _equations(kept)


def _is_cnf(phi: Formula) -> bool:
    def clause(f):
        if isinstance(f, Or):
            return all(isinstance(a, (Atom, NegAtom)) for a in f.args)
        return isinstance(f, (Atom, NegAtom))

    if isinstance(phi, _Const):
        return True
    if isinstance(phi, And):
        return all(clause(a) for a in phi.args)
    return clause(phi)


def formula_clauses(phi: Formula) -> list[list[tuple[str, str]]]:
    """Clause-list view of a CNF formula; ``true`` is ``[]``, ``false`` is ``[[]]``."""
    if phi == TRUE:
        return []
    if phi == FALSE:
        return [[]]
    if not _is_cnf(phi):
        raise ValueError("formula is not in CNF")
    items = phi.args if isinstance(phi, And) else (phi,)
    out = []
    for c in items:
        lits = c.args if isinstance(c, Or) else (c,)
        out.append([("=" if isinstance(lit, Atom) else "!=", str(lit.poly)) for lit in lits])
    return out


def decide(phi: Formula, field: FieldSpec | None = None, opts: QEOptions | None = None) -> bool:
    if free_variables(phi):
        raise ValueError(f"decide needs a closed formula; free: {free_variables(phi)}")
    out = qe(phi, field, opts)
    if isinstance(out.formula, _Const):
        return out.formula.value
    F = field or field_of(phi)
    return holds(out.formula, {}, F)


def witness(phi: Formula, field: FieldSpec | None = None,
            bound: int = DEFAULT_BOUND) -> dict[str, FieldElement] | None:
    """Satisfying assignment for ``exists xs. psi`` by ordered enumeration, or None.

    The assignment covers the bound variables followed by any free variables.
    """
    F = field or field_of(phi)
    bound_vars: list[str] = []
    body = phi
    while isinstance(body, Exists):
        bound_vars.extend(body.vars)
        body = body.body
    if not bound_vars or not is_quantifier_free(body):
        raise ValueError("witness expects 'exists xs. psi' with psi quantifier-free")
    free = [v for v in free_variables(body) if v not in bound_vars]
    found = find_assignment(body, bound_vars + free, F, bound)
    if found is not None:
        env = {k: v.code for k, v in found.items()}
        assert holds(body, env, F), "enumerated witness fails re-evaluation"
    return found
