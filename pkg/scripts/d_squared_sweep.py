"""Sweep d^s o d^s = 0 over the Hom-Lie representation battery.

    python3 scripts/d_squared_sweep.py --seed 7 --max-k 3 --s 0 1 2
"""
import argparse
import random
import time

from homalgebroid.fixtures import homlie_battery
from homalgebroid.homlie import check_d_squared_vec


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--max-k", type=int, default=3)
    ap.add_argument("--s", type=int, nargs="+", default=[0, 1, 2])
    args = ap.parse_args()

    battery = homlie_battery(random.Random(args.seed))
    t0 = time.perf_counter()
    bad = 0
    for name, r in battery:
        row = []
        for s in args.s:
            rep = check_d_squared_vec(r, s, args.max_k)
            row.append("ok" if rep.passed else "FAIL")
            bad += not rep.passed
        print(f"{name:36s} dim g={r.algebra.dim} dim V={r.dimV}  " + " ".join(f"s={s}:{v}" for s, v in zip(args.s, row)))
    print(f"{len(battery)} representations, {bad} failures, {time.perf_counter() - t0:.1f}s")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
