"""Compare qe against brute-force enumeration on random formulas."""
import argparse
import random
import time

from ffqe.field import field_of_order
from ffqe.logic import free_variables, render
from ffqe.oracle import realization
from ffqe.qe import qe
from ffqe.randgen import FormulaShape, random_formula


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("-n", type=int, default=500, help="formulas per field")
    ap.add_argument("--fields", type=int, nargs="+", default=[2, 3, 4])
    ap.add_argument("--max-vars", type=int, default=3)
    ap.add_argument("--max-blocks", type=int, default=2)
    ap.add_argument("--max-atoms", type=int, default=6)
    args = ap.parse_args()

    shape = FormulaShape(max_vars=args.max_vars, max_blocks=args.max_blocks, max_atoms=args.max_atoms)
    bad = 0
    for q in args.fields:
        F = field_of_order(q)
        rng = random.Random(args.seed * 10 + q)
        t0 = time.monotonic()
        worst = (0.0, "")
        ok = 0
        for _ in range(args.n):
            phi = random_formula(rng, F, shape)
            t = time.monotonic()
            psi = qe(phi, F).formula
            dt = time.monotonic() - t
            worst = max(worst, (dt, render(phi)))
            vs = free_variables(phi)
            if realization(psi, F, vs) == realization(phi, F, vs):
                ok += 1
            else:
                bad += 1
                print(f"MISMATCH q={q}: {render(phi)}\n  qe gave {render(psi)}")
        print(f"q={q}: {ok}/{args.n} agree in {time.monotonic() - t0:.1f}s; slowest {worst[0]:.2f}s")
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
