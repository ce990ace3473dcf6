"""Build the complete MUB system for every prime power up to a bound and verify it
in both backends, with timings."""

from __future__ import annotations

import argparse
import time

from mubkit.constructions import prime_power_mub
from mubkit.field import prime_power
from mubkit.flatmat import EXACT, FLOAT, VectorSystem
from mubkit.mubcheck import glavnaja_check, is_mub_system
from mubkit.welch import welch_report


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max", type=int, default=27, help="largest dimension to try")
    args = ap.parse_args()

    print(f"{'n':>4} {'bases':>5} {'exact':>6} {'float':>6} {'schur':>6} {'welch2':>8} {'build':>8} {'verify':>8}")
    for n in range(2, args.max + 1):
        if prime_power(n) is None:
            continue
        t0 = time.perf_counter()
        S = prime_power_mub(n, verify=False)
        t1 = time.perf_counter()
        exact = is_mub_system(S, EXACT).is_complete
        t2 = time.perf_counter()
        fl = is_mub_system(S, FLOAT)
        schur = glavnaja_check(S.bases[1:]).ok
        w = welch_report(VectorSystem.from_bases(S.bases), 2)
        print(
            f"{n:>4} {len(S):>5} {exact!s:>6} {fl.is_complete!s:>6} {schur!s:>6} "
            f"{w.attained!s:>8} {t1 - t0:>7.3f}s {t2 - t1:>7.3f}s"
        )


if __name__ == "__main__":
    main()
