"""Planar functions to relative difference sets and back.

Also searches Z_4 for a function that is planar in the most general sense;
there is none.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from mubkit.constructions import GENERAL, MOST_GENERAL, TorusFunction, check_planarity, half_square_function, square_function
from mubkit.field import FiniteField
from mubkit.group import AbelianGroup
from mubkit.rds import is_splitting, planar_to_rds, present, rds_to_planar, verify_rds


def round_trips() -> None:
    print(f"{'function':<20} {'K':<22} {'params':<14} {'valid':>5} {'split':>5} {'back':>5}")
    for p, k in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1), (3, 3)]:
        F = FiniteField(p, k)
        f = half_square_function(F) if p == 2 else square_function(F)
        D = planar_to_rds(f)
        P = present(D.K, D.N)
        g = rds_to_planar(D)
        name = f"{'x^2/2' if p == 2 else 'x^2'} on GF({p**k})"
        print(
            f"{name:<20} {str(P.G.moduli) + '+' + str(P.N.moduli):<22} {str(D.params):<14} "
            f"{verify_rds(D).ok!s:>5} {is_splitting(D)!s:>5} {check_planarity(g, GENERAL).ok!s:>5}"
        )


def z4_search(denominators=(2, 4, 8)) -> None:
    G = AbelianGroup((4,))
    for den in denominators:
        values = [Fraction(a, den) for a in range(4 * den)]
        hits = general = 0
        for rest in itertools.product(values, repeat=3):
            f = TorusFunction(G, G, dict(zip(G.elements(), [(Fraction(0),)] + [(v,) for v in rest])))
            general += check_planarity(f, GENERAL).ok
            hits += check_planarity(f, MOST_GENERAL).ok
        print(f"Z4, values in (1/{den})Z: {general} general-planar, {hits} most-general planar")


if __name__ == "__main__":
    round_trips()
    z4_search()
