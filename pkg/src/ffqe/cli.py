"""Command-line front end: ``ffqe {qe,decide,witness,gb,corpus} ...``.

Exit codes: 0 success, 1 usage or parse error, 2 semantic error (field,
variables, formula shape), 3 resource budget exhausted.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Sequence

from .field import FieldError, FieldSpec, field_of_order, parse_modulus
from .groebner import BudgetExhausted, Ideal, buchberger, eliminate
from .logic import Formula, free_variables, parse, render
from .oracle import EnumerationBoundExceeded, holds, realization, realization_formula
from .polynomial import Ring, RingError, parse_polynomial
from .qe import QEOptions, decide, formula_clauses, qe, witness
from .syntax import ParseError

EXIT_OK, EXIT_USAGE, EXIT_SEMANTIC, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits with 2 by default
        raise UsageError(message)


@dataclass
class CliConfig:
    q: int
    modulus: str | None = None
    order: tuple[str, ...] | None = None
    engine: str = "groebner"
    simplify: bool = False
    cnf: bool = False
    budget_seconds: float | None = None
    max_basis: int | None = None
    json: bool = False
    timings: bool = False
    generator: str = "w"

    def field(self) -> FieldSpec:
        F = field_of_order(self.q, generator_name=self.generator)
        if self.modulus:
            F = field_of_order(self.q, parse_modulus(self.modulus, F.p, self.generator), self.generator)
        return F

    def options(self, trace: bool = True) -> QEOptions:
        return QEOptions(simplify=self.simplify, cnf=self.cnf, order=self.order,
                         budget_seconds=self.budget_seconds, max_basis=self.max_basis, trace=trace)


def _order(text: str | None) -> tuple[str, ...] | None:
    if not text:
        return None
    names = tuple(text.replace(",", " ").split())
    dup = sorted({n for n in names if names.count(n) > 1})
    if dup:
        raise UsageError(f"variable order mentions {', '.join(dup)} more than once")
    return names


def build_parser() -> argparse.ArgumentParser:
    env_budget = os.environ.get("FFQE_BUDGET_SECS")
    common = _Parser(add_help=False)
    common.add_argument("--field", type=int, required=True, metavar="Q", help="field order q = p^r")
    common.add_argument("--modulus", help="defining polynomial of F_q, e.g. 'w^2+w+1'")
    common.add_argument("--generator", default="w", help="name of the field generator (default w)")
    common.add_argument("--order", help="variable ranking, highest first (overrides the default)")
    common.add_argument("--engine", choices=("groebner", "oracle"), default="groebner")
    common.add_argument("--simplify", action="store_true", help="drop field-polynomial tautologies")
    common.add_argument("--cnf", action="store_true", help="force CNF output")
    common.add_argument("--budget-secs", type=float,
                        default=float(env_budget) if env_budget else None)
    common.add_argument("--max-basis", type=int)
    common.add_argument("--json", action="store_true")
    common.add_argument("--timings", action="store_true", help="include wall-clock times in JSON stats")

    p = _Parser(prog="ffqe", description="Quantifier elimination over finite fields.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    for name, hlp in (("qe", "print a quantifier-free equivalent"),
                      ("decide", "print true/false for a closed formula"),
                      ("witness", "print a satisfying assignment of exists xs. psi")):
        sp = sub.add_parser(name, parents=[common], help=hlp)
        sp.add_argument("file")
    gb = sub.add_parser("gb", parents=[common], help="reduced lex Groebner basis")
    gb.add_argument("--polys", required=True, help="generators separated by ';' or ','")
    gb.add_argument("--vars", required=True, help="variables, highest rank first")
    gb.add_argument("--field-polys", action="store_true", help="add x^q - x for every variable")
    gb.add_argument("--keep", help="print only the elimination ideal in these trailing variables")
    corpus = sub.add_parser("corpus", help="write formula corpora")
    corpus.add_argument("name", choices=("s2vd",))
    corpus.add_argument("dir")
    corpus.add_argument("--neighbors", type=int, choices=(6, 18), default=18)
    return p


def _config(a: argparse.Namespace) -> CliConfig:
    return CliConfig(q=a.field, modulus=a.modulus, order=_order(a.order), engine=a.engine,
                     simplify=a.simplify, cnf=a.cnf, budget_seconds=a.budget_secs,
                     max_basis=a.max_basis, json=a.json, timings=a.timings, generator=a.generator)


def _strip_times(trace):
    if isinstance(trace, list):
        return [_strip_times(t) for t in trace]
    if isinstance(trace, dict):
        return {k: _strip_times(v) for k, v in trace.items() if k != "seconds"}
    return trace


def _emit(cfg: CliConfig, out, text: str, payload: dict) -> None:
    if cfg.json:
        out.write(json.dumps({"status": "ok", **payload}, sort_keys=True) + "\n")
    else:
        out.write(text + "\n")


def _formula_payload(phi: Formula) -> dict:
    try:
        clauses = [[f"{p} {rel} 0" for rel, p in c] for c in formula_clauses(phi)]
    except ValueError:
        clauses = None
    return {"formula": clauses, "text": render(phi)}


def _cmd_qe(cfg: CliConfig, phi: Formula, F: FieldSpec, out) -> None:
    if cfg.engine == "oracle":
        free = free_variables(phi)
        if cfg.order:
            rank = {n: i for i, n in enumerate(cfg.order)}
            free.sort(key=lambda n: rank.get(n, len(rank)))
        R = realization(phi, F, free)
        psi = realization_formula(R)
        stats = {"engine": "oracle", "points": len(R)}
    else:
        res = qe(phi, F, cfg.options())
        psi = res.formula
        trace = res.trace if cfg.timings else _strip_times(res.trace)
        stats = {"engine": "groebner", "rounds": trace}
    _emit(cfg, out, render(psi), {**_formula_payload(psi), "stats": stats})


def _cmd_decide(cfg: CliConfig, phi: Formula, F: FieldSpec, out) -> None:
    if free_variables(phi):
        raise ValueError(f"decide needs a closed formula; free variables: {', '.join(free_variables(phi))}")
    if cfg.engine == "oracle":
        val = holds(phi, {}, F)
    else:
        val = decide(phi, F, cfg.options(trace=False))
    _emit(cfg, out, "true" if val else "false", {"result": val, "stats": {"engine": cfg.engine}})


def _cmd_witness(cfg: CliConfig, phi: Formula, F: FieldSpec, out) -> None:
    found = witness(phi, F)
    if found is None:
        _emit(cfg, out, "none", {"result": None, "stats": {}})
        return
    text = "\n".join(f"{k} = {v}" for k, v in found.items())
    _emit(cfg, out, text, {"result": {k: str(v) for k, v in found.items()}, "stats": {}})


def _cmd_gb(cfg: CliConfig, a: argparse.Namespace, F: FieldSpec, out) -> None:
    names = list(_order(a.vars) or ())
    ring = Ring.of(F, names)
    texts = [t for t in a.polys.replace(";", ",").split(",") if t.strip()]
    polys = [parse_polynomial(t, ring) for t in texts]
    if a.field_polys:
        polys += [ring.field_polynomial(n) for n in names]
    from .groebner import Budget

    G = buchberger(Ideal.of(ring, polys), budget=Budget(cfg.budget_seconds, cfg.max_basis))
    basis = list(G.polys)
    if a.keep:
        basis = eliminate(G, list(_order(a.keep)))
    lines = [str(g) for g in basis]
    _emit(cfg, out, "\n".join(lines) if lines else "0", {"basis": lines, "stats": {"size": len(lines)}})


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        a = build_parser().parse_args(argv)
        if a.cmd == "corpus":
            from .s2vd import S2VDConfig, dump_corpus

            for p in dump_corpus(a.dir, S2VDConfig(neighbor_count=a.neighbors)):
                out.write(f"{p}\n")
            return EXIT_OK
        cfg = _config(a)
        F = cfg.field()
        if a.cmd == "gb":
            _cmd_gb(cfg, a, F, out)
            return EXIT_OK
        try:
            with open(a.file) as fh:
                text = fh.read()
        except OSError as e:
            raise UsageError(f"cannot read {a.file}: {e.strerror}")
        phi = parse(text, F)
        {"qe": _cmd_qe, "decide": _cmd_decide, "witness": _cmd_witness}[a.cmd](cfg, phi, F, out)
        return EXIT_OK
    except UsageError as e:
        err.write(f"ffqe: usage error: {e}\n")
        return EXIT_USAGE
    except ParseError as e:
        err.write(f"ffqe: parse error: {e}\n")
        return EXIT_USAGE
    except (BudgetExhausted, EnumerationBoundExceeded) as e:
        err.write(f"ffqe: budget exhausted: {e}\n")
        return EXIT_BUDGET
    except (FieldError, RingError, ValueError) as e:
        err.write(f"ffqe: error: {e}\n")
        return EXIT_SEMANTIC


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
