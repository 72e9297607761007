"""First integrals, integrating factors and the Riccati bridge.

``solve_w`` builds, level by level, a series ``w = w_0 y^mu_0 + w_1
y^{mu_0+1} + ...`` solving ``dw/dx * Q + dw/dy * P = 0`` with coefficients
in a Liouville tower: such a ``w`` is constant along solutions of
``dy/dx = P/Q``.  Case A (deg Q + 1 <= deg P at the bottom) solves each
level by adjoining an integral, or an exponential of an integral when the
level equation is genuinely affine; case B needs no new tower nodes past
the seed.  Every computed level is re-verified by symbolic
differentiation, never numerically.

``verify_constant`` checks a multiplicative first-integral candidate
``alpha * prod (y - y_l)^{k_l}`` exactly; ``ghost_roots`` finds the
finitely many roots of ``sum k_l/(y - y_l) = 0`` and flags the ones that
fail the substitution oracle.  ``riccati_bridge`` maps witnesses of the
associated second-order linear equation to solutions of the quadratic
first-order equation and back.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebraic import SeriesPolynomial, solve_algebraic
from .liouville import Element, LiouvilleError, Tower
from .ode import MonomialODE, verify_series
from .ratfunc import RatFunc
from .series import INF, PuiseuxSeries


class CaseError(ValueError):
    """The (mu_p, mu_q, mu_0) combination does not match the case rules."""


@dataclass(frozen=True)
class YSeries:
    """c_0 y^mu + c_1 y^{mu+1} + ...: a y-series over the base field."""

    mu: int
    coeffs: tuple  # RatFunc entries

    def __init__(self, mu, coeffs):
        coeffs = [_as_ratfunc(c) for c in coeffs]
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        shift = 0
        while coeffs and not coeffs[0]:
            coeffs.pop(0)
            shift += 1
        object.__setattr__(self, "mu", int(mu) + shift)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @property
    def is_zero(self):
        return not self.coeffs

    def coefficient(self, power):
        i = power - self.mu
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return RatFunc.const(0)

    def y_derivative(self):
        return YSeries(
            self.mu - 1,
            [self.coefficient(self.mu + i) * Fraction(self.mu + i)
             for i in range(len(self.coeffs) + 1)],
        )

    def x_derivative(self):
        return YSeries(self.mu, [c.derivative() for c in self.coeffs])

    def __add__(self, other):
        if not isinstance(other, YSeries):
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        lo = min(self.mu, other.mu)
        hi = max(self.mu + len(self.coeffs), other.mu + len(other.coeffs))
        return YSeries(
            lo,
            [self.coefficient(p) + other.coefficient(p) for p in range(lo, hi)],
        )

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            p = self.mu + i
            ypow = "" if p == 0 else ("*y" if p == 1 else f"*y^{p}")
            parts.append(f"({c}){ypow}" if ypow else f"({c})")
        return " + ".join(parts)


def _as_ratfunc(c):
    if isinstance(c, RatFunc):
        return c
    return RatFunc.const(c)


def closedness_defect(P: YSeries, Q: YSeries) -> YSeries:
    """dP/dy + dQ/dx; identically zero iff no integrating factor is needed."""
    return P.y_derivative() + Q.x_derivative()


@dataclass
class IntegratingFactorEquation:
    """The coefficient of f in df/dx = -(dP/dy + dQ/dx)/Q * f."""

    numerator: YSeries
    denominator: YSeries
    note: str = "the integrating factor is unique up to a constant of K(y)"


def integrating_factor_equation(P: YSeries, Q: YSeries) -> IntegratingFactorEquation:
    if Q.is_zero:
        raise ZeroDivisionError("Q must be nonzero")
    defect = closedness_defect(P, Q)
    negated = YSeries(defect.mu, [-c for c in defect.coeffs])
    return IntegratingFactorEquation(negated, Q)


@dataclass(frozen=True)
class IntegralFactorProblem:
    """P = p_0 y^mu_p + ..., Q = q_0 y^mu_q + ... with q_0 = 1, p_0 != 0."""

    P: YSeries
    Q: YSeries

    def __init__(self, P, Q):
        if P.is_zero:
            raise ValueError("P must be nonzero")
        if Q.is_zero or Q.coeffs[0] != RatFunc.const(1):
            raise ValueError("Q must be normalized with leading coefficient 1")
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "Q", Q)

    @property
    def mu_p(self):
        return self.P.mu

    @property
    def mu_q(self):
        return self.Q.mu

    @property
    def delta(self):
        return self.mu_p - self.mu_q - 1

    @property
    def gamma(self):
        return self.mu_q + 1 - self.mu_p

    @property
    def case(self):
        return "A" if self.mu_q + 1 <= self.mu_p else "B"


@dataclass
class IntegralFactorSeries:
    """w = w_0 y^mu0 + w_1 y^{mu0+1} + ... with tower coefficients."""

    mu0: int
    case: str
    coefficients: list  # Elements
    tower: Tower
    verified_levels: list = field(default_factory=list)
    new_generators_after_seed: int = 0

    def as_text(self):
        parts = []
        for k, w in enumerate(self.coefficients):
            if w.is_zero:
                continue
            p = self.mu0 + k
            ypow = "" if p == 0 else ("*y" if p == 1 else f"*y^{p}")
            parts.append(f"({w.to_sexpr()}){ypow}" if ypow else f"({w.to_sexpr()})")
        return " + ".join(parts) if parts else "0"


def solve_w(problem: IntegralFactorProblem, mu0: int, levels: int,
            w0=None, tower: Tower = None) -> IntegralFactorSeries:
    """Coefficients w_0..w_levels of the level recurrences, case A or B.

    Case A needs mu0 a nonzero integer and builds each level out of
    integrals (plus exponentials of integrals when the level equation is
    affine in w_k itself, which happens exactly at delta = 0).  Case B
    needs mu0 = 0, a caller seed w_0 (default -x), and solves every later
    level by field operations alone.
    """
    tower = tower or Tower()
    p = [tower.rational(problem.P.coefficient(problem.mu_p + i)) for i in range(levels + 1)]
    q = [tower.rational(problem.Q.coefficient(problem.mu_q + j)) for j in range(levels + 1)]
    if problem.case == "A":
        if mu0 == 0 or not isinstance(mu0, int):
            raise CaseError("case A needs a nonzero integer mu0")
        w = _solve_case_a(problem, mu0, levels, p, q, tower)
        gens_after_seed = 0
    else:
        if mu0 != 0:
            raise CaseError("case B needs mu0 = 0")
        seed = tower._as_element(w0) if w0 is not None else -tower.x()
        base_gens = len(tower.gens)
        w = _solve_case_b(problem, levels, p, q, tower, seed)
        gens_after_seed = len(tower.gens) - base_gens
    out = IntegralFactorSeries(mu0, problem.case, w, tower,
                               new_generators_after_seed=gens_after_seed)
    out.verified_levels = [
        _verify_level(problem, mu0, w, level, p, q, tower)
        for level in range(levels + 1)
    ]
    if not all(out.verified_levels):
        raise LiouvilleError("a level identity failed symbolic verification")
    return out


def _solve_case_a(problem, mu0, levels, p, q, tower):
    delta = problem.delta
    w = []
    for level in range(levels + 1):
        # sum_{k+j=level} dw_k q_j + sum_{k+i=level-delta} (mu0+k) w_k p_i = 0
        b = tower.zero()
        for j in range(1, level + 1):
            if level - j < len(w):
                b = b - q[j] * w[level - j].differentiate()
        a_coef = tower.zero()
        for k in range(0, level - delta + 1):
            i = level - delta - k
            if i < 0:
                continue
            term = tower.rational(mu0 + k) * p[i]
            if k < len(w):
                b = b - term * w[k]
            elif k == level:
                a_coef = a_coef + term
        if level == 0 and delta > 0:
            w.append(tower.one())  # dw_0 = 0: any nonzero constant
            continue
        if a_coef.is_zero:
            w.append(tower.integral(b))
            continue
        # dw + a w = b: w = exp(int -a) * (int(b exp(int a)) + C)
        decay = tower.exp_integral(-a_coef)
        grow = tower.exp_integral(a_coef)
        particular = decay * tower.integral(b * grow)
        if level == 0 and particular.is_zero:
            particular = decay  # the nonzero homogeneous witness
        w.append(particular)
    return w


def _solve_case_b(problem, levels, p, q, tower, seed):
    gamma = problem.gamma
    w = [seed]
    for level in range(1, levels + 1):
        # sum_{k+i=level} k w_k p_i + sum_{k+j=level-gamma} dw_k q_j = 0
        b = tower.zero()
        for k in range(0, level):
            i = level - k
            if i <= len(p) - 1 and k < len(w) and k:
                b = b - tower.rational(k) * p[i] * w[k]
        for k in range(0, level - gamma + 1):
            j = level - gamma - k
            if 0 <= j <= len(q) - 1 and k < len(w):
                b = b - q[j] * w[k].differentiate()
        w.append(b / (tower.rational(level) * p[0]))
    return w


def _verify_level(problem, mu0, w, level, p, q, tower):
    """Re-derive the level identity by symbolic differentiation."""
    if problem.case == "A":
        delta = problem.delta
        total = tower.zero()
        for j in range(0, level + 1):
            k = level - j
            if k < len(w):
                total = total + q[j] * w[k].differentiate()
        for k in range(0, level - delta + 1):
            i = level - delta - k
            if i >= 0 and k < len(w):
                total = total + tower.rational(mu0 + k) * p[i] * w[k]
        return total.is_zero
    gamma = problem.gamma
    total = tower.zero()
    for k in range(0, level + 1):
        i = level - k
        if i <= len(p) - 1 and k < len(w):
            total = total + tower.rational(k) * p[i] * w[k]
    for k in range(0, level - gamma + 1):
        j = level - gamma - k
        if 0 <= j <= len(q) - 1 and k < len(w):
            total = total + q[j] * w[k].differentiate()
    return total.is_zero


# -- multiplicative first-integral candidates -----------------------------------


@dataclass
class FirstIntegralCandidate:
    """alpha * prod (y - y_l)^{k_l}: alpha and the y_l live in a tower."""

    alpha: Element
    roots: list  # Elements
    exponents: list  # nonzero ints

    def __post_init__(self):
        if not self.roots:
            raise ValueError("a candidate needs at least one root")
        if len(self.roots) != len(self.exponents):
            raise ValueError("one exponent per root")
        if any(k == 0 for k in self.exponents):
            raise ValueError("exponents must be nonzero")
        for i in range(len(self.roots)):
            for j in range(i + 1, len(self.roots)):
                if (self.roots[i] - self.roots[j]).is_zero:
                    raise ValueError("roots must be pairwise distinct")


CONSTANT = "constant"
NOT_CONSTANT = "not-constant"
INCONCLUSIVE = "inconclusive"


@dataclass
class ConstantVerdict:
    verdict: str
    residual_coefficients: list  # Elements, by y power
    assumptions: list = field(default_factory=list)

    @property
    def is_constant(self):
        return self.verdict == CONSTANT


def verify_constant(cand: FirstIntegralCandidate, P, Q) -> ConstantVerdict:
    """Decide whether the candidate is a first integral of dy/dx = P/Q.

    P, Q are polynomials in y with tower-element (or rational-function)
    coefficients.  The cleared condition is the polynomial identity

        alpha'/alpha * Q * prod(y - y_l)
          + sum_i k_i (P - y_i' Q) * prod_{j != i}(y - y_j)  =  0,

    read coefficientwise in y over the tower.  A nonzero residual
    coefficient free of tower generators refutes the candidate outright;
    residuals supported on generators are reported inconclusive, since
    structural zero-testing treats distinct integrals as independent.
    """
    tower = cand.alpha.tower
    P = [_as_element(tower, c) for c in P]
    Q = [_as_element(tower, c) for c in Q]
    dlog_alpha = cand.alpha.differentiate() / cand.alpha
    residual = _ypoly_scale(_ypoly_mul_many(
        [_ypoly_from_root(tower, r) for r in cand.roots]
    ), dlog_alpha)
    residual = _ypoly_mul(residual, Q, tower)
    for i, (root, k) in enumerate(zip(cand.roots, cand.exponents)):
        others = [
            _ypoly_from_root(tower, r)
            for j, r in enumerate(cand.roots)
            if j != i
        ]
        prod = _ypoly_mul_many(others) if others else [tower.one()]
        dli = root.differentiate()
        piece = _ypoly_sub(P, _ypoly_scale(Q, dli))
        piece = _ypoly_scale(piece, tower.rational(k))
        residual = _ypoly_add(residual, _ypoly_mul(piece, prod, tower))
    nonzero = [(i, c) for i, c in enumerate(residual) if not c.is_zero]
    if not nonzero:
        return ConstantVerdict(CONSTANT, residual)
    pure = [c.rational_value() is not None for _i, c in nonzero]
    if any(pure):
        return ConstantVerdict(NOT_CONSTANT, residual)
    assumptions = sorted(
        {g for _i, c in nonzero for g in c.generators_used()}
    )
    return ConstantVerdict(
        INCONCLUSIVE,
        residual,
        assumptions=[f"g{i}" for i in assumptions],
    )


def _as_element(tower, c):
    if isinstance(c, Element):
        return c
    return tower.rational(c if isinstance(c, (int, Fraction, RatFunc)) else Fraction(c))


def _ypoly_from_root(tower, r):
    return [-r, tower.one()]


def _ypoly_add(a, b):
    n = max(len(a), len(b))
    tower = a[0].tower if a else b[0].tower
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else tower.zero()
        y = b[i] if i < len(b) else tower.zero()
        out.append(x + y)
    return out


def _ypoly_sub(a, b):
    return _ypoly_add(a, [-c for c in b])


def _ypoly_scale(a, s):
    return [c * s for c in a]


def _ypoly_mul(a, b, tower):
    out = [tower.zero() for _ in range(len(a) + len(b) - 1)]
    for i, x in enumerate(a):
        if x.is_zero:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def _ypoly_mul_many(polys):
    out = polys[0]
    tower = out[0].tower
    for p in polys[1:]:
        out = _ypoly_mul(out, p, tower)
    return out


# -- ghost roots ------------------------------------------------------------------


@dataclass
class GhostRecord:
    root: PuiseuxSeries
    residual_valuation: object
    is_ghost: bool


@dataclass
class GhostSet:
    records: list
    unresolved: list = field(default_factory=list)

    @property
    def ghosts(self):
        return [r.root for r in self.records if r.is_ghost]


def ghost_roots(roots, exponents, ode: MonomialODE = None, bound=4,
                mode="algebraic") -> GhostSet:
    """Roots of sum k_l / (y - y_l) = 0 in cleared-denominator form.

    ``roots`` are Puiseux series; each solution of the cleared equation is
    checked against the substitution oracle of ``ode`` (when given) and
    labeled a ghost exactly when it fails.  Irrational level-set roots are
    adjoined exactly by default (``mode='algebraic'``).
    """
    if len(roots) < 2:
        raise ValueError("ghost analysis needs at least two distinct roots")
    roots = [_as_puiseux(r) for r in roots]
    coeffs = None
    for i, k in enumerate(exponents):
        factors = [
            [-roots[j], PuiseuxSeries.one()]
            for j in range(len(roots))
            if j != i
        ]
        prod = [PuiseuxSeries.constant(k)]
        for f in factors:
            prod = _series_poly_mul(prod, f)
        coeffs = prod if coeffs is None else _series_poly_add(coeffs, prod)
    while coeffs and coeffs[-1].is_exact_zero:
        coeffs.pop()
    if len(coeffs) <= 1:
        return GhostSet([])  # degenerate numerator: no candidate roots
    result = solve_algebraic(SeriesPolynomial(coeffs), bound, mode=mode)
    records = []
    for b in result.branches:
        if ode is None:
            records.append(GhostRecord(b.series, None, True))
            continue
        v = verify_series(ode, b.series)
        records.append(GhostRecord(b.series, v.valuation, v.valuation != INF))
    return GhostSet(records, unresolved=result.unresolved)


def _as_puiseux(r):
    if isinstance(r, PuiseuxSeries):
        return r
    return PuiseuxSeries.constant(r)


def _series_poly_mul(a, b):
    out = [PuiseuxSeries.zero() for _ in range(len(a) + len(b) - 1)]
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def _series_poly_add(a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else PuiseuxSeries.zero()
        y = b[i] if i < len(b) else PuiseuxSeries.zero()
        out.append(x + y)
    return out


# -- the Riccati bridge -------------------------------------------------------------


@dataclass
class RiccatiBridgeResult:
    """Residuals of dy/dx = y^2 + b y + a at y = -z'/z and of the linear
    equation z'' - b z' + a z = 0, with the exact relation between them."""

    riccati_residual: Element
    linear_residual: Element
    identity_holds: bool

    @property
    def is_solution(self):
        return self.linear_residual.is_zero

    @property
    def riccati_solves(self):
        return self.riccati_residual.is_zero


def riccati_bridge(a, b, z: Element) -> RiccatiBridgeResult:
    """Push a witness z through y = -z'/z and report both residuals.

    The construction satisfies riccati_residual == -linear_residual / z
    identically; the returned flag re-checks that by symbolic
    differentiation rather than assuming it.
    """
    tower = z.tower
    a = _as_element(tower, a)
    b = _as_element(tower, b)
    if z.is_zero:
        raise ZeroDivisionError("z must be nonzero")
    dz = z.differentiate()
    y = -(dz / z)
    resid = y.differentiate() - y * y - b * y - a
    linear = dz.differentiate() - b * dz + a * z
    identity = (resid + linear / z).is_zero
    return RiccatiBridgeResult(resid, linear, identity)
