import importlib
import random

import pytest

from ffqe.cli import _strip_times
from ffqe.field import make_field
from ffqe.logic import (
    EXISTS,
    FALSE,
    FORALL,
    TRUE,
    And,
    Atom,
    Not,
    PrenexFormula,
    free_variables,
    is_quantifier_free,
    parse,
    to_prenex,
)
from ffqe.oracle import equivalent, holds, realization
from ffqe.qe import (
    QEOptions,
    decide,
    eliminate_innermost_existential,
    eliminate_innermost_universal,
    formula_clauses,
    qe,
    simplify,
    to_cnf,
    witness,
)
from ffqe.randgen import FormulaShape, random_formula

qe_mod = importlib.import_module("ffqe.qe")

WALK = "exists b. forall a. exists y x. (y = a*x^2 + b*x + c /\\ y = a*x)"


def test_walkthrough_output(F3):
    out = qe(parse(WALK, F3), trace=True)
    assert formula_clauses(out.formula) == [[("=", "c^3 - c")]]
    assert out.cnf and out.free_vars == ("c",)
    assert equivalent(out.formula, TRUE, F3)
    assert qe(parse(WALK, F3), simplify=True).formula == TRUE


def test_walkthrough_rounds(F3):
    out = qe(parse(WALK, F3), trace=True)
    r1, r2, r3 = out.trace
    assert r1["ring"] == ["x", "y", "a", "b", "c"]
    assert r1["kept"] == ["a^3 - a", "a*b*c + a*c^2 + b^2*c - c", "b^3 - b", "c^3 - c"]
    assert [s["skipped"] for s in r2["subrounds"] if "skipped" in s] == [True, True, True]
    live = [s for s in r2["subrounds"] if not s.get("skipped")]
    assert len(live) == 1 and live[0]["kept"] == ["b^2 - b*c", "c^2 - 1"]
    assert live[0]["ring"] == ["_u1", "a", "b", "c"]
    assert r3["kept"] == ["c^3 - c"]


def test_existential_round_examples(F3):
    pf = to_prenex(parse("exists x. x = 0", F3))
    assert eliminate_innermost_existential(pf).matrix == TRUE
    pf = to_prenex(parse("exists x. (x = 0 /\\ x = 1)", F3))
    assert eliminate_innermost_existential(pf).matrix == FALSE
    pf = to_prenex(parse("exists x y. x*y = 1 /\\ y = z", F3))
    nxt = eliminate_innermost_existential(pf)
    assert nxt.blocks == () and free_variables(nxt.matrix) == ["z"]
    assert equivalent(nxt.matrix, parse("z != 0", F3))


def test_universal_round_examples(F3):
    pf = PrenexFormula(((FORALL, ("x",)),), TRUE)
    assert eliminate_innermost_universal(pf, F3).matrix == TRUE
    pf = PrenexFormula(((FORALL, ("x",)),), parse("x = 0", F3))
    assert eliminate_innermost_universal(pf, F3).matrix == FALSE
    with pytest.raises(ValueError):
        eliminate_innermost_universal(to_prenex(parse("exists x. x = 0", F3)))
    with pytest.raises(ValueError):
        eliminate_innermost_existential(PrenexFormula(((FORALL, ("x",)),), parse("x = 0", F3)))


def test_quantifier_free_input_passes_through(F3):
    phi = parse("(x*y - 1 = 0 /\\ y = 1) \\/ x = 2", F3)
    out = qe(phi)
    assert is_quantifier_free(out.formula) and equivalent(out.formula, phi)
    assert not out.cnf
    cnf = qe(phi, cnf=True)
    assert cnf.cnf and formula_clauses(cnf.formula) and equivalent(cnf.formula, phi)


def test_innermost_universal_uses_negation(F3):
    phi = parse("exists y. forall x. x*y = 0", F3)
    out = qe(phi)
    assert out.formula == TRUE
    phi = parse("forall x. x = c", F3)
    out = qe(phi, cnf=True)
    assert out.cnf and equivalent(out.formula, FALSE, F3)


def test_decide_examples(F3):
    assert decide(parse("exists x. x = 0", F3))
    assert not decide(parse("forall x. x = 0", F3))
    assert decide(parse("forall x. exists y. x + y = 0", F3))
    with pytest.raises(ValueError):
        decide(parse("exists x. x = y", F3))


def test_witness_examples(F3, F4):
    assert witness(parse("exists x. x = 0", F3)) == {"x": F3.element(0)}
    assert witness(parse("exists x. (x = 0 /\\ x = 1)", F3)) is None
    got = witness(parse("exists x y. x*y = w /\\ x != 1", F4))
    assert got["x"] * got["y"] == F4.element(F4.code_of([0, 1])) and got["x"] != F4.element(1)
    with pytest.raises(ValueError):
        witness(parse("forall x. x = 0", F3))
    with pytest.raises(ValueError):
        witness(parse("exists x. forall y. x = y", F3))


def test_to_cnf_rejects_quantifiers(F3):
    with pytest.raises(ValueError):
        to_cnf(parse("exists x. x = 0", F3), F3)


def test_simplify_drops_field_tautologies(F3):
    R = parse("c^3 - c = 0 /\\ c^4 - c^2 != 0", F3)
    assert simplify(R) == FALSE


def test_budget_is_reported(F4):
    from ffqe.groebner import BudgetExhausted

    phi = parse("exists a b c. a*x + b*y^2 + c*x*y = 1 /\\ a*b*c != w", F4)
    with pytest.raises(BudgetExhausted):
        qe(phi, max_basis=1)


def test_factor_naming_does_not_change_output(F4, monkeypatch):
    monkeypatch.setattr(importlib.import_module("ffqe.expr"), "EXPAND_LIMIT", 1)
    phi = parse("exists y1 y2 y3. x = (y1 + y2*y3 + w)*(1 - y1)^3*(1 - y2)^3*(y3 + 1) /\\ y1*(y1 - w) = 0", F4)
    monkeypatch.setattr(qe_mod, "NAME_LIMIT", 10**9)
    plain = qe(phi, trace=True)
    monkeypatch.setattr(qe_mod, "NAME_LIMIT", 1)
    named = qe(phi, trace=True)
    assert named.trace[0]["named"] > 0 and plain.trace[0]["named"] == 0
    assert named.formula == plain.formula
    assert equivalent(named.formula, phi)


def test_order_override(F3):
    phi = parse("exists x. x*y = z", F3)
    a = qe(phi, trace=True)
    b = qe(phi, order=["x", "z", "y"], trace=True)
    assert a.trace[0]["ring"] == ["x", "y", "z"]
    assert b.trace[0]["ring"] == ["x", "z", "y"]
    assert equivalent(a.formula, b.formula)


def _shape_checks(phi, out, F):
    assert is_quantifier_free(out.formula)
    assert set(free_variables(out.formula)) <= set(free_variables(phi))
    pf = to_prenex(phi)
    if pf.blocks and pf.blocks[-1][0] == EXISTS:
        assert out.cnf
        formula_clauses(out.formula)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_oracle_equivalence_sample(q):
    F = make_field(2, 2) if q == 4 else make_field(q)
    rng = random.Random(1000 + q)
    for _ in range(60):
        phi = random_formula(rng, F)
        out = qe(phi, F, trace=True)
        _shape_checks(phi, out, F)
        vars = free_variables(phi)
        assert realization(out.formula, F, vars) == realization(phi, F, vars)
        # each round removes exactly one block
        kinds = [r["kind"] for r in out.trace]
        assert len(kinds) == len(to_prenex(phi).blocks)
        assert all(a != b for a, b in zip(kinds, kinds[1:]))


@pytest.mark.parametrize("q", [2, 3])
def test_double_negation(q):
    F = make_field(q)
    rng = random.Random(77 + q)
    for _ in range(40):
        phi = random_formula(rng, F)
        a = qe(phi, F).formula
        b = qe(Not(Not(phi)), F).formula
        vars = free_variables(phi)
        assert realization(a, F, vars) == realization(b, F, vars)


def test_block_count_monotone(F3):
    phi = parse("exists a. forall b. exists c. a*b + c = d /\\ c != a", F3)
    out = qe(phi, trace=True)
    kinds = [r["kind"] for r in out.trace]
    assert kinds == ["exists", "forall", "exists"]
    assert equivalent(out.formula, phi)


def test_existential_output_mentions_only_remaining(F3):
    phi = parse("forall c. exists x y. x^2 + y^2 = c /\\ x*y = d", F3)
    pf = to_prenex(phi)
    nxt = eliminate_innermost_existential(pf)
    assert set(free_variables(nxt.matrix)) <= {"c", "d"}


def test_deterministic(F4):
    phi = parse("exists y. forall z. (x*y + z = w \\/ y*z = x)", F4)
    a, b = qe(phi, trace=True), qe(phi, trace=True)
    assert a.formula == b.formula
    assert _strip_times(a.trace) == _strip_times(b.trace)
