"""The exceptional curve of the blow-up of P^2 at a point destabilises every polarisation H - qE.

Prints the two slopes side by side and the exact instability window.
"""

from fractions import Fraction

from slopestab import catalog
from slopestab.engine import margin_polynomial, verdict
from slopestab.geometry import surface_curve

print(f"{'q':>6} {'mu(X)':>12} {'mu_eps(O_E)':>14}  verdict")
for q in (Fraction(1, 10), Fraction(1, 3), Fraction(1, 2), Fraction(3, 4), Fraction(9, 10)):
    mu_x, mu_q = surface_curve(catalog.blp2_exceptional_data(q), 1 - q)
    print(f"{str(q):>6} {str(mu_x):>12} {str(mu_q):>14}  {verdict(catalog.blp2_exceptional(q)).describe()}")

prof = catalog.blp2_exceptional(Fraction(1, 2))
print("\nmargin N(c) for q = 1/2:", margin_polynomial(prof).render("c"))
