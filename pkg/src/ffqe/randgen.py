"""Seeded generators of small random polynomials, ideals and formulas."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .field import FieldSpec
from .logic import EXISTS, FORALL, Atom, Formula, NegAtom, Not, conj, disj, quantifier
from .polynomial import Polynomial, Ring


@dataclass
class FormulaShape:
    max_vars: int = 3
    max_blocks: int = 2
    max_atoms: int = 6
    max_terms: int = 3
    max_degree: int = 2
    names: tuple[str, ...] = ("x", "y", "z")


def random_polynomial(rng: random.Random, ring: Ring, max_terms: int = 3, max_degree: int = 2,
                      names: Sequence[str] | None = None) -> Polynomial:
    names = list(names or ring.names)
    F = ring.field
    out = ring.zero
    for _ in range(rng.randint(1, max_terms)):
        m = ring.const_code(rng.randrange(1, F.q))
        for _ in range(rng.randint(0, max_degree)):
            if names:
                m = m * ring.var(rng.choice(names))
        out = out + m
    return out


def random_ideal(rng: random.Random, ring: Ring, max_gens: int = 3, **kw) -> list[Polynomial]:
    return [random_polynomial(rng, ring, **kw) for _ in range(rng.randint(1, max_gens))]


def random_matrix(rng: random.Random, ring: Ring, n_atoms: int, shape: FormulaShape,
                  names: Sequence[str]) -> Formula:
    """Random and/or/not tree over ``n_atoms`` (dis)equations."""
    if n_atoms == 1:
        p = random_polynomial(rng, ring, shape.max_terms, shape.max_degree, names)
        return Atom(p) if rng.random() < 0.6 else NegAtom(p)
    k = rng.randint(1, n_atoms - 1)
    a = random_matrix(rng, ring, k, shape, names)
    b = random_matrix(rng, ring, n_atoms - k, shape, names)
    r = rng.random()
    node = conj([a, b]) if r < 0.45 else disj([a, b])
    return Not(node) if rng.random() < 0.15 else node


def random_formula(rng: random.Random, field: FieldSpec, shape: FormulaShape | None = None) -> Formula:
    """Prenex-able formula with at most ``max_blocks`` alternating blocks."""
    shape = shape or FormulaShape()
    nvars = rng.randint(1, shape.max_vars)
    names = list(shape.names[:nvars])
    ring = Ring.of(field, names)
    phi = random_matrix(rng, ring, rng.randint(1, shape.max_atoms), shape, names)
    nblocks = rng.randint(0, min(shape.max_blocks, nvars))
    if not nblocks:
        return phi
    bound = rng.sample(names, rng.randint(nblocks, nvars))
    cuts = sorted(rng.sample(range(1, len(bound)), nblocks - 1)) if nblocks > 1 else []
    groups = [bound[i:j] for i, j in zip([0] + cuts, cuts + [len(bound)])]
    kind = rng.choice((EXISTS, FORALL))
    blocks = []
    for g in groups:
        blocks.append((kind, g))
        kind = FORALL if kind == EXISTS else EXISTS
    for kind, g in reversed(blocks):
        phi = quantifier(kind, g, phi)
    return phi
