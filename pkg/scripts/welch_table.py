"""Both k=2 Welch sides for r hypothetical MUBs in C^n, and the largest r they allow."""

from __future__ import annotations

import argparse

from mubkit.welch import hypothetical_mub_sides, max_mub_bound


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max", type=int, default=12)
    args = ap.parse_args()

    print(f"{'n':>4} {'lhs(n+1)':>12} {'rhs(n+1)':>12} {'lhs(n+2)':>12} {'rhs(n+2)':>12} {'max r':>6}")
    for n in range(2, args.max + 1):
        l1, r1 = hypothetical_mub_sides(n, n + 1)
        l2, r2 = hypothetical_mub_sides(n, n + 2)
        assert l1 == r1 and l2 < r2
        print(f"{n:>4} {str(l1):>12} {str(r1):>12} {str(l2):>12} {str(r2):>12} {max_mub_bound(n):>6}")


if __name__ == "__main__":
    main()
