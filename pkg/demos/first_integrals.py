"""First integrals, level by level, over an expression tower.

A function w(x, y) with dw/dx * Q + dw/dy * P = 0 is constant along
solutions of dy/dx = P/Q.  The level recurrences build w coefficient by
coefficient; every step is solved by adjoining at most an integral or an
exponential of an integral, and every level identity is re-checked by
symbolic differentiation (integrals are never evaluated).
"""

from fractions import Fraction as F

from puiseux import (
    FirstIntegralCandidate,
    IntegralFactorProblem,
    MonomialODE,
    PuiseuxSeries,
    Tower,
    YSeries,
    closedness_defect,
    ghost_roots,
    integrating_factor_equation,
    solve_w,
    verify_constant,
)

# ----------------------------------------------------------------------
# When is an integrating factor needed at all?  P = y, Q = -x is closed:
P = YSeries(1, [1])
from puiseux.ratfunc import RatFunc
Q = YSeries(0, [RatFunc([F(0), F(-1)])])
print("P = y, Q = -x: closedness defect =", closedness_defect(P, Q))

# P = y^2, Q = 1 is not; the factor satisfies df/dx = -2y * f.
P2, Q2 = YSeries(2, [1]), YSeries(0, [1])
eq = integrating_factor_equation(P2, Q2)
print("P = y^2, Q = 1: factor coefficient =", eq.numerator, "/", eq.denominator)

# ----------------------------------------------------------------------
# Case A (deg Q + 1 <= deg P): w = 1/y + x for dy/dx = y^2.
problem = IntegralFactorProblem(P2, Q2)
w = solve_w(problem, mu0=-1, levels=2)
print(f"\ncase {w.case}: w = {w.as_text()}")
print("   every level verified symbolically:", all(w.verified_levels))
# Along y = -1/(x + c): w = x + 1/y = x - (x + c) = -c. Constant indeed.

# Case B (deg Q + 1 > deg P): w = y^2/2 - x for dy/dx = 1/y.
problem_b = IntegralFactorProblem(YSeries(0, [1]), YSeries(1, [1]))
wb = solve_w(problem_b, mu0=0, levels=2)
print(f"case {wb.case}: w = {wb.as_text()}")
print("   new tower generators beyond the seed:", wb.new_generators_after_seed)

# ----------------------------------------------------------------------
# Multiplicative candidates alpha * prod (y - y_l)^(k_l): checked as an
# exact polynomial identity in y over the tower.
t = Tower()
x = t.x()
alpha = 1 / (t.one() - x)
candidate = FirstIntegralCandidate(alpha, [x, x / (t.one() - x)], [1, -1])
ode_p = [t.zero(), t.zero(), 1 / (x * x)]
verdict = verify_constant(candidate, ode_p, [t.one()])
print("\ndy/dx = x^-2 y^2, candidate from the solutions x and x/(1-x):")
print("   verdict:", verdict.verdict)

flipped = FirstIntegralCandidate(alpha, [x, x / (t.one() - x)], [-1, 1])
print("   sign-flipped mutation:",
      verify_constant(flipped, ode_p, [t.one()]).verdict)

# ----------------------------------------------------------------------
# Ghost solutions: roots of sum k_l/(y - y_l) = 0 satisfy the candidate's
# level-set equations without solving the ODE.
ghosts = ghost_roots(
    [PuiseuxSeries.zero(), PuiseuxSeries.x_power(1)], [1, 1],
    ode=MonomialODE([(-2, 2, 1)]),
)
for rec in ghosts.records:
    kind = "ghost" if rec.is_ghost else "actual solution"
    print(f"   level-set root y = {rec.root}: {kind} "
          f"(residual valuation {rec.residual_valuation})")
