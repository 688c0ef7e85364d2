"""S2VD virus-competition model over F_4: local dynamics, controller, and checks.

Colors are field elements: 0 green, 1 red, w white, w+1 yellow (``w`` is the
generator, ``w^2 = w + 1``).  A cell's next state is ``F_x = f_x * g_x`` where
``f_x`` depends on the six direct neighbors and the controller ``g_x`` is a
product of ``(1 - y_i)^3`` over the cells it watches.

Formulas are generated as text in the ``.fol`` grammar and parsed, so the
checked-in corpus and the library constructors are the same objects.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .field import FieldSpec, make_field
from .logic import Formula, parse
from .polynomial import Polynomial, Ring

COLORS = {0: "green", 1: "red", 2: "white", 3: "yellow"}  # by field code


@dataclass(frozen=True)
class S2VDConfig:
    neighbor_count: int = 18
    generator_name: str = "w"

    def __post_init__(self):
        if self.neighbor_count not in (6, 18):
            raise ValueError("neighbor_count must be 6 or 18")

    @property
    def field(self) -> FieldSpec:
        return make_field(2, 2, generator_name=self.generator_name)

    def cells(self) -> list[str]:
        return [f"y{i}" for i in range(1, self.neighbor_count + 1)]


def _check_arity(names: Sequence[str], allowed: tuple[int, ...]) -> None:
    if len(names) not in allowed or len(set(names)) != len(names):
        raise ValueError(f"expected {' or '.join(map(str, allowed))} distinct variables, got {list(names)}")


def dynamics_fx(neighbors: Sequence[str] | Ring, field: FieldSpec | None = None) -> Polynomial:
    """``g2^2 + g2*g1^3 + w^2*(g1^3 + g1^2 + g1)``, expanded and exponent-reduced.

    ``g1`` is the sum of the six neighbors and ``g2`` the sum of their pairwise
    products over unordered pairs.
    """
    if isinstance(neighbors, Ring):
        ring = neighbors
        names = list(ring.names[:6])
    else:
        names = list(neighbors)
        ring = Ring.of(field or S2VDConfig().field, names)
    _check_arity(names, (6,))
    ys = [ring.var(n) for n in names]
    g1 = sum(ys[1:], ys[0])
    g2 = ring.zero
    for a, b in itertools.combinations(ys, 2):
        g2 = g2 + a * b
    w = ring.const_code(ring.field.code_of([0, 1]))
    g1_2 = (g1 * g1).reduce_exponents()
    g1_3 = (g1_2 * g1).reduce_exponents()
    f = (g2 * g2).reduce_exponents() + (g2 * g1_3).reduce_exponents() + w * w * (g1_3 + g1_2 + g1)
    return f.reduce_exponents()


def controller_factor_text(name: str) -> str:
    return f"(1 - {name})^3"


def controller_gx(cells: Sequence[str], field: FieldSpec | None = None):
    """Lazy product of ``(1 - y)^3`` over the given cells."""
    from . import expr as E

    _check_arity(cells, (6, 18))
    ring = Ring.of(field or S2VDConfig().field, list(cells))
    factors = tuple((ring.one - ring.var(c)) ** 3 for c in cells)
    return E.Prod(factors)


def nonred_text(y: str, g: str = "w") -> str:
    """``y*(y - w)*(y - w^2)``, vanishing exactly off the red color 1."""
    return f"{y}*({y} - {g})*({y} - {g}^2)"


def _fx_text(cfg: S2VDConfig, cells: Sequence[str]) -> str:
    f = dynamics_fx(cells[:6], cfg.field)
    return f"({f})*" + "*".join(controller_factor_text(c) for c in cells)


def _join(lits: Sequence[str], indent: str = "    ") -> str:
    return (" /\\\n" + indent).join(lits)


def phi1_text(cfg: S2VDConfig | None = None) -> str:
    """Safe configurations with white cells around the center: next state."""
    cfg = cfg or S2VDConfig()
    g = cfg.generator_name
    ys = cfg.cells()
    fixed = [i for i in (2, 3, 8, 9, 10, 11, 12) if i <= len(ys)]
    safe = [i for i in (1, 4, 7, 13) if i <= len(ys)]
    lits = [f"y{i} = {g}" for i in fixed]
    lits += [f"y{i}*(y{i} - {g}) = 0" for i in safe]
    lits.append(f"x = {_fx_text(cfg, ys)}")
    return f"exists {' '.join(ys)}.\n  (  {_join(lits)})\n"


def phi2_text(cfg: S2VDConfig | None = None) -> str:
    """All neighbors non-red: next state."""
    cfg = cfg or S2VDConfig()
    ys = cfg.cells()
    lits = [f"{nonred_text(y, cfg.generator_name)} = 0" for y in ys]
    lits.append(f"x = {_fx_text(cfg, ys)}")
    return f"exists {' '.join(ys)}.\n  (  {_join(lits)})\n"


def phi3_text(cfg: S2VDConfig | None = None) -> str:
    """Some non-red direct neighborhood turns the center red (6-cell controller)."""
    cfg = cfg or S2VDConfig()
    ys = [f"y{i}" for i in range(1, 7)]
    lits = ["x = 1"] + [f"{nonred_text(y, cfg.generator_name)} = 0" for y in ys]
    lits.append(f"x = {_fx_text(cfg, ys)}")
    return f"exists {' '.join(ys)} x.\n  (  {_join(lits)})\n"


def property1_text(cfg: S2VDConfig | None = None) -> str:
    g = (cfg or S2VDConfig()).generator_name
    body = phi1_text(cfg).strip()
    return f"forall x. (({body}) -> x*(x - {g}) = 0)\n"


def property2_text(cfg: S2VDConfig | None = None) -> str:
    body = phi2_text(cfg).strip()
    return f"forall x. (({body}) -> ~(x = 1))\n"


def _parse(text: str, cfg: S2VDConfig | None) -> Formula:
    return parse(text, (cfg or S2VDConfig()).field)


def build_phi1(cfg: S2VDConfig | None = None) -> Formula:
    return _parse(phi1_text(cfg), cfg)


def build_phi2(cfg: S2VDConfig | None = None) -> Formula:
    return _parse(phi2_text(cfg), cfg)


def build_phi3(cfg: S2VDConfig | None = None) -> Formula:
    return _parse(phi3_text(cfg), cfg)


def build_property1(cfg: S2VDConfig | None = None) -> Formula:
    return _parse(property1_text(cfg), cfg)


def build_property2(cfg: S2VDConfig | None = None) -> Formula:
    return _parse(property2_text(cfg), cfg)


CORPUS = {
    "phi1.fol": phi1_text,
    "phi2.fol": phi2_text,
    "phi3.fol": phi3_text,
    "property1.fol": property1_text,
    "property2.fol": property2_text,
}


def dump_corpus(directory: str | Path, cfg: S2VDConfig | None = None) -> list[Path]:
    """Write the S2VD formulas as ``.fol`` files; returns the written paths."""
    cfg = cfg or S2VDConfig()
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    out = []
    header = f"# S2VD over F_4 (generator {cfg.generator_name}), {cfg.neighbor_count} controlled cells\n"
    for name, fn in CORPUS.items():
        p = d / name
        p.write_text(header + fn(cfg))
        out.append(p)
    return out
