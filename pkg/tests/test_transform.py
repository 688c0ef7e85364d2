import random

import pytest

from ffqe import expr as E
from ffqe.field import make_field
from ffqe.logic import Atom, Or, atoms, conj, parse, quantifier, to_nnf, EXISTS
from ffqe.oracle import project, realization, equivalent
from ffqe.polynomial import Ring
from ffqe.randgen import FormulaShape, random_matrix
from ffqe.transform import (
    FreshNames,
    count_disjunctions,
    count_negatoms,
    eliminate_negations,
    flatten,
    flatten_to_ideal,
    flattened_formula,
    term_count,
)

G2_NEGATED = "~(b^2 - b*c = 0 /\\ c^2 - 1 = 0)"


def test_rabinowitsch_single(F3):
    us, phi = eliminate_negations(parse("x != 0", F3))
    assert us == ("_u1",)
    assert str(phi.poly) == "_u1*x - 1"


def test_no_negations_is_identity(F3):
    phi = parse("x = 0 \\/ y = 1", F3)
    assert eliminate_negations(phi) == ((), phi)


def test_walkthrough_negations(F3):
    psi = to_nnf(parse(G2_NEGATED, F3))
    us, phi = eliminate_negations(psi)
    assert us == ("_u1", "_u2")
    R = phi.args[0].poly.ring
    assert phi == Or((Atom(R.parse("(b^2 - b*c)*_u1 - 1")), Atom(R.parse("(c^2 - 1)*_u2 - 1"))))


def test_flatten_atom_and_disjunction(F3):
    res = flatten_to_ideal(parse("x = 0", F3))
    assert res.fresh == () and [str(g) for g in res.conjuncts] == ["x"]
    res = flatten_to_ideal(parse("x = 0 \\/ y - 1 = 0", F3))
    R = res.ring
    assert res.fresh_v == ("_v1",)
    assert [E.expand(g) for g in res.conjuncts] == [R.parse("_v1*x"), R.parse("(1 - _v1)*(y - 1)")]


def test_flatten_constants(F3):
    assert flatten_to_ideal(parse("true /\\ x = 0", F3)).conjuncts[-1] == Ring.of(F3, ["x"]).var("x")
    res = flatten_to_ideal(parse("false \\/ x = 0", F3))
    assert equivalent(quantifier(EXISTS, res.fresh, flattened_formula(res)), parse("x = 0", F3))


def test_flatten_rejects_unnormalized(F3):
    with pytest.raises(ValueError):
        flatten_to_ideal(parse("x != 0", F3))
    with pytest.raises(ValueError):
        flatten(parse("~(x = 0)", F3))
    with pytest.raises(ValueError):
        flatten(parse("exists x. x = 0", F3))


def test_walkthrough_flattening(F3):
    psi = to_nnf(parse(G2_NEGATED, F3))
    res = flatten(psi)
    R = res.ring
    assert res.fresh == ("_v1", "_u1", "_u2")
    assert R.names[:3] == res.fresh
    expect = [R.parse("((b^2 - b*c)*_u1 - 1)*_v1"), R.parse("((c^2 - 1)*_u2 - 1)*(1 - _v1)")]
    assert [E.expand(g) for g in res.conjuncts] == expect


def test_printed_asymmetric_form(F3):
    # the printed shortcut drops the -1 of the second Rabinowitsch atom;
    # it agrees with the systematic form once b is projected away, not before
    ours = flattened_formula(flatten(to_nnf(parse(G2_NEGATED, F3))))
    R = Ring.of(F3, ["_v1", "_u1", "_u2", "b", "c"])
    printed = conj([Atom(R.parse("((b^2 - b*c)*_u1 - 1)*_v1")),
                    Atom(R.parse("((c^2 - 1)*_u2)*(1 - _v1)"))])
    fresh = ["_v1", "_u1", "_u2"]
    R_ours = project(realization(ours, F3, fresh + ["b", "c"]), fresh)
    R_printed = project(realization(printed, F3, fresh + ["b", "c"]), fresh)
    assert R_ours == realization(parse(G2_NEGATED, F3), F3, ["b", "c"])
    assert R_ours != R_printed
    assert project(R_ours, ["b"]) == project(R_printed, ["b"])
    assert len(project(R_ours, ["b"])) == 3


def test_fresh_names_are_threaded(F3):
    names = FreshNames()
    a = flatten(parse("x != 0 \\/ x = 1", F3), names)
    b = flatten(parse("y != 0", F3), names)
    assert a.fresh == ("_v1", "_u1") and b.fresh == ("_u2",)


def _check(psi, F):
    res = flatten(psi, field=F)
    assert len(res.fresh_u) == count_negatoms(psi)
    assert len(res.fresh_v) == count_disjunctions(psi)
    orig = [v for v in res.ring.names if v not in res.fresh]
    lifted = realization(flattened_formula(res), F, list(res.fresh) + orig)
    assert project(lifted, res.fresh) == realization(psi, F, orig)
    n_atoms = len(list(atoms(psi)))
    assert term_count(res) <= term_count(psi) + 2 * n_atoms * (1 + count_disjunctions(psi))


@pytest.mark.parametrize("q", [2, 3])
def test_realization_preservation(q):
    F = make_field(q)
    names = ["x", "y", "z"]
    R = Ring.of(F, names)
    rng = random.Random(q)
    shape = FormulaShape(max_atoms=3)
    cases = 0
    while cases < 120:
        psi = to_nnf(random_matrix(rng, R, rng.randint(1, 3), shape, names))
        if count_disjunctions(psi) > 2 or len(set(R.names)) + count_negatoms(psi) + count_disjunctions(psi) > 8:
            continue
        _check(psi, F)
        cases += 1
