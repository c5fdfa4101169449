"""Rank torus-invariant candidates on the blow-up of P^2 (q = 1/2), worst first."""

from fractions import Fraction

from slopestab import catalog
from slopestab.toric import destabilizer_scan

for hit in destabilizer_scan(catalog.blp2_polytope(Fraction(1, 2)), budget=2)[:5]:
    print(f"{str(hit.key):32} c = {str(hit.c):>5}  F1 = {str(hit.futaki):>11}  {hit.verdict.describe()}")
