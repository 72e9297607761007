"""The quadratic first-order equation and its linear second-order twin.

dy/dx = y^2 + b y + a turns into z'' - b z' + a z = 0 through
y = -z'/z; the bridge demo pushes witnesses both ways and checks the
exact residual relation between the two equations symbolically.
"""

from fractions import Fraction as F

from puiseux import Tower, riccati_bridge
from puiseux.ratfunc import RatFunc

# ----------------------------------------------------------------------
# a = b = 0: dy/dx = y^2.  Any affine z = 1 + c x solves z'' = 0, so
# y = -z'/z = -c/(1 + c x) must solve the quadratic equation.
t = Tower()
x = t.x()
z = t.one() + 3 * x
res = riccati_bridge(t.zero(), t.zero(), z)
print("a = b = 0, z = 1 + 3x")
print("  linear residual zero:", res.linear_residual.is_zero)
print("  quadratic residual zero:", res.riccati_residual.is_zero)
print("  exact relation residual == -linear/z:", res.identity_holds)

# The second independent witness z = x gives y = -1/x, the pole branch
# that the series solver finds for dy/dx = y^2.
res_x = riccati_bridge(t.zero(), t.zero(), t.x())
print("z = x gives a solution too:", res_x.riccati_solves)

# ----------------------------------------------------------------------
# Build coefficient data backwards: pick any rational r and b, set
# a := b r - r' - r^2.  Then z = exp(int r) solves the linear equation
# by construction, and the bridge must confirm it.
t2 = Tower()
x2 = t2.x()
r = t2.rational(RatFunc([F(1), F(2)], [F(1), F(1)]))  # (1 + 2x)/(1 + x)
b = t2.rational(RatFunc([F(0), F(1)]))  # b = x
a = b * r - r.differentiate() - r * r
z2 = t2.exp_integral(r)
res2 = riccati_bridge(a, b, z2)
print("\nconstructed witness z = exp(int (1+2x)/(1+x)), b = x")
print("  solves the linear equation:", res2.is_solution)
print("  y = -z'/z solves the quadratic one:", res2.riccati_solves)

# Perturbing the witness breaks both sides at once - the equivalence is
# exact, not statistical.
res_bad = riccati_bridge(a, b, z2 + 1)
print("  perturbed witness solves linear:", res_bad.is_solution,
      "| solves quadratic:", res_bad.riccati_solves,
      "| relation still exact:", res_bad.identity_holds)
