"""Show how the running sum of person-level differences depends on the
enumeration of the union population (default: the Depletion pair)."""
import argparse
from pathlib import Path

from utilstreams import load_world
from utilstreams.criteria import wpc, wpc_difference
from utilstreams.oracle import wpc_witness

CORPUS = Path(__file__).resolve().parents[1] / "corpus"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--first", default=str(CORPUS / "depletion_wC.ws"))
    ap.add_argument("--second", default=str(CORPUS / "depletion_wD.ws"))
    ap.add_argument("--length", type=int, default=100)
    ap.add_argument("--every", type=int, default=10, help="print every n-th position")
    args = ap.parse_args()

    w1, w2 = load_world(args.first), load_world(args.second)
    print(f"wpc {w1.name} {w2.name}: {wpc(w1, w2)} ({wpc(w1, w2).witness})")
    parts = wpc_difference(w1, w2)
    for kind in ("FrontLoadNegatives", "FrontLoadPositives"):
        enum = wpc_witness(parts, kind, length=args.length)
        print(f"\n{kind}")
        print("pos\tperson\tdiff\trunning")
        for line in enum.lines()[args.every - 1 :: args.every]:
            print(line)


if __name__ == "__main__":
    main()
