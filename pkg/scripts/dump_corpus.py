"""Regenerate the checked-in S2VD corpus (same as ``ffqe corpus s2vd DIR``)."""
import argparse
from pathlib import Path

from ffqe.s2vd import S2VDConfig, dump_corpus

ROOT = Path(__file__).resolve().parent.parent


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=ROOT / "corpus" / "s2vd")
    ap.add_argument("--neighbors", type=int, choices=(6, 18), default=18)
    args = ap.parse_args()
    for p in dump_corpus(args.out, S2VDConfig(neighbor_count=args.neighbors)):
        print(p)


if __name__ == "__main__":
    main()
