"""Formal series branches of first-order ODEs: the full classification.

Each equation is reduced to its contour; breaking points propose leading
terms; each admissible term is continued as proper (linear recurrences,
with the resonance dichotomy decided exactly) or algebraic-type (iterated
algebraic solves).  Free constants stay symbolic.
"""

from fractions import Fraction as F

from puiseux import (
    MonomialODE,
    classify,
    continue_proper,
    initial_terms,
    ode_contour,
    solve_algebraic_type,
    solve_all,
    verify_branch,
)

# ----------------------------------------------------------------------
# dy/dx = y^2: one pole-like branch and a one-parameter family.
e = MonomialODE([(0, 2, 1)])
print("dy/dx = y^2")
print("  contour:", ode_contour(e))
for t in initial_terms(e).terms:
    print(f"  initial term: c0 = {t.coefficient} at x^{t.exponent} "
          f"(case {t.case}) -> {classify(e, t)}")

report = solve_all(e, bound=3)
for b in report.branches:
    print(f"  branch: y = {b.series}   [{b.status}]")
# -x^(-1) is y = -1/x, the exact pole solution; the family is the
# geometric series of y = C/(1 - C x).

# ----------------------------------------------------------------------
# dy/dx = y/x + x: general solution y = C x + x^2, visible symbolically.
e2 = MonomialODE([(-1, 1, 1), (1, 0, 1)])
print("\ndy/dx = y/x + x")
for b in solve_all(e2, bound=4).branches:
    v = verify_branch(e2, b)
    print(f"  y = {b.series}   [{b.status}; residual valuation "
          f"{v.valuation}]")

# ----------------------------------------------------------------------
# dy/dx = x^-2 y^2: resonance with a free constant at x^2.
e3 = MonomialODE([(-2, 2, 1)])
t3 = initial_terms(e3).terms[0]
print("\ndy/dx = x^-2 y^2")
print(f"  initial term (mu0, c0) = ({t3.exponent}, {t3.coefficient}), "
      f"resonant index mu_r = {t3.resonant_index}")
symbolic = continue_proper(e3, t3, 4)
print(f"  symbolic family: y = {symbolic.series}")
for c in (5, 7):
    numeric = continue_proper(e3, t3, 4, c_r=F(c))
    print(f"  with c_r = {c}: y = {numeric.series}  "
          f"(= x/(1 - {c}x) truncated)")

# Two instantiations differ first at exactly the resonant exponent:
b5 = continue_proper(e3, t3, 4, c_r=F(5))
b7 = continue_proper(e3, t3, 4, c_r=F(7))
print(f"  difference valuation: {(b5.series - b7.series).valuation()} "
      f"(= mu_r)")

# ----------------------------------------------------------------------
# Negative resonance: perturbing the equation blocks the branch.
e4 = MonomialODE([(-2, 2, 1), (1, 0, 1)])
t4 = [t for t in initial_terms(e4).terms if t.exponent == 1][0]
blocked = continue_proper(e4, t4, 4)
print("\ndy/dx = x^-2 y^2 + x, branch at x^1:")
print(f"  status: {blocked.status}, obstruction {blocked.obstruction} at "
      f"x^{blocked.resonant_index}")

# ----------------------------------------------------------------------
# dy/dx = x^-2 y^2 - x^-1: the derivative never participates in the
# first solving step, so the branches are algebraic-type; each round of
# the iteration extends the trusted prefix by exactly 1/2.
e5 = MonomialODE([(-2, 2, 1), (-1, 0, -1)])
print("\ndy/dx = x^-2 y^2 - x^-1")
for t in initial_terms(e5).terms:
    for b in solve_algebraic_type(e5, t, bound=3):
        print(f"  y = {b.series}")
        print(f"     coincidence orders per round: "
              f"{[str(c) for c in b.coincidence_orders]}")
        v = verify_branch(e5, b)
        print(f"     residual valuation {v.valuation} "
              f"(guaranteed >= {b.residual_guarantee})")
