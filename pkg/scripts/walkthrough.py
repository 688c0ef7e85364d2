"""Run the parabola/line example over F_3 and print every elimination round."""
import argparse
import json

from ffqe.field import make_field
from ffqe.logic import TRUE, parse
from ffqe.oracle import equivalent
from ffqe.qe import qe

TEXT = "exists b. forall a. exists y x. (y = a*x^2 + b*x + c /\\ y = a*x)"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--json", action="store_true", help="dump the raw trace")
    args = ap.parse_args()

    F = make_field(3)
    out = qe(parse(TEXT, F), F, trace=True)
    if args.json:
        print(json.dumps(out.trace, indent=2))
        return
    for i, r in enumerate(out.trace, 1):
        if r["kind"] == "forall":
            print(f"round {i}: forall {' '.join(r['block'])}")
            for s in r["subrounds"]:
                tag = "skipped (zero modulo field polynomials)" if s.get("skipped") else s["kept"]
                print(f"  {s['conjunct']} != 0  ->  {tag}")
        else:
            print(f"round {i}: exists {' '.join(r['block']) or '-'} over {r['ring']}")
            for g in r["kept"]:
                print(f"  {g}")
    print("result:", out.formula)
    print("oracle-equivalent to true:", equivalent(out.formula, TRUE, F))


if __name__ == "__main__":
    main()
