"""Check the S2VD controller formulas over F_4 and report timings."""
import argparse
import time

from ffqe.groebner import BudgetExhausted
from ffqe.logic import parse
from ffqe.oracle import holds, realization
from ffqe.qe import QEOptions, decide, qe
from ffqe.s2vd import (
    S2VDConfig,
    build_phi1,
    build_phi2,
    build_phi3,
    build_property1,
    build_property2,
)


def timed(fn):
    t0 = time.monotonic()
    try:
        return fn(), time.monotonic() - t0
    except BudgetExhausted as e:
        return f"budget exhausted ({e})", time.monotonic() - t0


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--neighbors", type=int, choices=(6, 18), default=18)
    ap.add_argument("--budget-secs", type=float, default=600.0)
    ap.add_argument("--only", nargs="*", default=["phi3", "phi1", "phi2", "property1", "property2"])
    args = ap.parse_args()

    cfg = S2VDConfig(neighbor_count=args.neighbors)
    F = cfg.field
    opts = QEOptions(budget_seconds=args.budget_secs)
    target = realization(parse("x^4 - x = 0", F), F, ["x"])

    if "phi3" in args.only:
        val, dt = timed(lambda: decide(build_phi3(cfg), F, opts))
        w = F.code_of([0, 1])
        env = {"x": 1, **{f"y{i}": c for i, c in enumerate([w, w, w, 0, 0, 0], 1)}}
        print(f"phi3: decide -> {val} ({dt:.1f}s); witness x=1, y=(w,w,w,0,0,0) holds:",
              holds(build_phi3(cfg).body, env, F))
    for name, build in (("phi1", build_phi1), ("phi2", build_phi2)):
        if name in args.only:
            out, dt = timed(lambda: qe(build(cfg), F, opts))
            if isinstance(out, str):
                print(f"{name}: {out} after {dt:.0f}s")
                continue
            same = realization(out.formula, F, ["x"]) == target
            print(f"{name}: {out.formula} ({dt:.1f}s); equivalent to x^4 - x = 0: {same}")
    for name, build in (("property1", build_property1), ("property2", build_property2)):
        if name in args.only:
            val, dt = timed(lambda: decide(build(cfg), F, opts))
            print(f"{name}: decide -> {val} ({dt:.1f}s)")


if __name__ == "__main__":
    main()
