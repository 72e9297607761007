"""Formal Puiseux-series branch analysis of first-order ODEs.

The right-hand side is a finite monomial form ``sum f * x^nu * y^sigma``
(:class:`MonomialODE`); a rational form P(y)/Q(y) reduces to it through
:func:`expand_rational`.  Solving proceeds exactly as the theory
prescribes: the equation contour (monomial lines plus the derivative line
``x - 1``) yields the admissible initial terms; each is classified as
proper (the derivative participates in the first solving step) or
algebraic-type (it does not); proper branches continue through linear
coefficient recurrences over an exponent lattice, with the resonance
dichotomy decided exactly; algebraic-type branches continue by iterated
algebraic solves whose coincidence order grows linearly each round.

Every returned branch carries a residual guarantee that
:func:`verify_branch` re-checks by substitution, independent of the
construction path.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import gcd as _gcd

from .algebraic import SeriesPolynomial, solve_algebraic
from .coefficients import (
    ParamPoly,
    UnsupportedSymbolic,
    as_coefficient,
    coefficient_sort_key,
    has_parameter,
    poly_roots,
    substitute_parameter,
)
from .contour import Contour, Line
from .series import (
    INF,
    BranchError,
    PoleError,
    PuiseuxSeries,
    SeriesError,
    substitute_series,
)

DERIVATIVE = "dy/dx"  # contour key of the derivative line x - 1


class FreeCoefficient:
    """Marker: the coefficient is a free constant of the solution family."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "FREE"


FREE = FreeCoefficient()


class ClassificationError(SeriesError):
    """The requested continuation does not match the branch class."""


@dataclass(frozen=True)
class Monomial:
    x_exp: Fraction
    y_exp: Fraction
    coefficient: object

    def __iter__(self):
        return iter((self.x_exp, self.y_exp, self.coefficient))


@dataclass(frozen=True)
class MonomialODE:
    """dy/dx = sum f * x^nu * y^sigma with finitely many monomials.

    ``y_order_cap`` and the tail/coefficient caps record the exactness
    limits of a rational reduction, so that downstream residual
    certificates never overstate what the data supports.
    """

    monomials: tuple
    y_order_cap: object = None
    tail_base: object = None
    tail_slope: object = None
    coeff_caps: tuple = ()

    def __init__(self, monomials, y_order_cap=None, tail_base=None,
                 tail_slope=None, coeff_caps=()):
        merged = {}
        for m in monomials:
            if isinstance(m, Monomial):
                nu, sigma, f = m.x_exp, m.y_exp, m.coefficient
            else:
                nu, sigma, f = m
            nu, sigma = Fraction(nu), Fraction(sigma)
            f = as_coefficient(f)
            key = (nu, sigma)
            merged[key] = merged[key] + f if key in merged else f
        clean = tuple(
            Monomial(nu, sigma, f)
            for (nu, sigma), f in sorted(merged.items())
            if f
        )
        if not clean:
            raise SeriesError("the right-hand side has no monomials")
        object.__setattr__(self, "monomials", clean)
        object.__setattr__(self, "y_order_cap", y_order_cap)
        object.__setattr__(self, "tail_base", tail_base)
        object.__setattr__(self, "tail_slope", tail_slope)
        object.__setattr__(self, "coeff_caps", tuple(coeff_caps))

    def sigmas(self):
        return sorted({m.y_exp for m in self.monomials})

    def substitute(self, y, prec=None, branches=None):
        return substitute_series(self.monomials, y, prec=prec, branches=branches)


@dataclass(frozen=True)
class RationalODE:
    """dy/dx = P(y)/Q(y), coefficients of P and Q are Puiseux series."""

    numer: tuple  # P coefficients by y power
    denom: tuple  # Q coefficients by y power
    center: PuiseuxSeries = None

    def __init__(self, numer, denom, center=None):
        numer = tuple(_as_series(c) for c in numer)
        denom = tuple(_as_series(c) for c in denom)
        if all(c.is_exact_zero for c in denom):
            raise SeriesError("Q must be nonzero")
        if center is None:
            center = PuiseuxSeries.zero()
        object.__setattr__(self, "numer", numer)
        object.__setattr__(self, "denom", denom)
        object.__setattr__(self, "center", center)


def _as_series(c):
    if isinstance(c, PuiseuxSeries):
        return c
    return PuiseuxSeries.constant(as_coefficient(c))


# -- contours and initial terms ----------------------------------------------


def ode_contour(e: MonomialODE) -> Contour:
    """Envelope of the monomial lines nu + sigma*x and the line x - 1."""
    lines = [
        Line(m.y_exp, m.x_exp, key=(m.x_exp, m.y_exp)) for m in e.monomials
    ]
    lines.append(Line(Fraction(1), Fraction(-1), key=DERIVATIVE))
    return Contour(lines)


def rhs_contour(e: MonomialODE) -> Contour:
    """Envelope of the monomial lines only (the right-hand side)."""
    return Contour(
        [Line(m.y_exp, m.x_exp, key=(m.x_exp, m.y_exp)) for m in e.monomials]
    )


@dataclass(frozen=True)
class InitialTerm:
    """An admissible leading term c0 * x^mu0 of a solution branch."""

    exponent: Fraction
    coefficient: object  # coefficient value or FREE
    case: str  # "a" | "b" | "c"
    resonant_index: object = None  # Fraction (or field element), None for case a
    derivative_active: bool = False
    boundary: bool = False  # mu0 = 0, nu0 + 1 = 0 diagnostic case
    root_scale: int = 1  # s with y^(1/s) the branch variable
    branch_root: object = None  # chosen value of c0^(1/s)

    def branch_map(self):
        """Root branches for fractional powers of series led by c0."""
        if self.root_scale == 1 or self.branch_root is None:
            return None
        s, t = self.root_scale, as_coefficient(self.branch_root)

        def choose(sigma):
            p = Fraction(sigma) * s
            if p.denominator != 1:
                return None
            return t ** int(p)

        return choose


@dataclass
class InitialTermsResult:
    terms: list
    unresolved: list = field(default_factory=list)
    notes: list = field(default_factory=list)


def initial_terms(e: MonomialODE, mode="rational") -> InitialTermsResult:
    """All admissible initial terms of the equation, by case.

    Case (b): nonzero breaking points of the contour, with the vertex
    polynomial in c0 (the derivative contributes -mu0*c0 only when the
    line x-1 is active).  Case (c): the coincident-line point mu0 = f for
    a monomial x^-1*y, with c0 free.  Case (a): mu0 = 0, with c0 free when
    nu0 + 1 > 0 and otherwise the nonzero roots of the lowest-level sum.

    When the equation came out of a truncated rational reduction, initial
    terms outside the reduction's validity window (the dropped y-tail
    would reach down to every level) are discarded with a note instead of
    being solved from unreliable data.
    """
    contour = ode_contour(e)
    result = InitialTermsResult([])
    for x_b in contour.breaking_points():
        if x_b == 0:
            continue
        active = contour.active(x_b)
        keys = [line.key for line in active]
        deriv = DERIVATIVE in keys
        mono_keys = [k for k in keys if k != DERIVATIVE]
        _vertex_terms(e, x_b, mono_keys, deriv, mode, result)
    _coincident_terms(e, contour, result)
    _constant_terms(e, mode, result)
    _drop_outside_validity(e, result)
    result.terms.sort(key=_initial_sort_key)
    return result


def _drop_outside_validity(e, result):
    if e.y_order_cap is None:
        return
    slope = e.tail_slope if e.tail_slope is not None else Fraction(0)
    kept = []
    for t in result.terms:
        if t.exponent + slope <= 0:
            result.notes.append(
                f"initial term at x^{t.exponent} lies outside the validity "
                "window of the truncated rational reduction; re-expand at a "
                "different center to analyze it"
            )
        else:
            kept.append(t)
    result.terms[:] = kept
    result.unresolved[:] = [
        u for u in result.unresolved if u.exponent + slope > 0
    ]


def _initial_sort_key(t: InitialTerm):
    c = t.coefficient
    ckey = (3, "free") if c is FREE else coefficient_sort_key(c)
    bkey = coefficient_sort_key(t.branch_root) if t.branch_root is not None else ()
    return (float(t.exponent), t.case, ckey, bkey)


def _root_scale(e):
    """lcm of the sigma denominators: the s of the y^(1/s) branch choice."""
    s = 1
    for sig in e.sigmas():
        s = s * sig.denominator // _gcd(s, sig.denominator)
    return s


def _vertex_terms(e, mu0, mono_keys, deriv, mode, result):
    monomials = [m for m in e.monomials if (m.x_exp, m.y_exp) in set(mono_keys)]
    sigmas = [m.y_exp for m in monomials]
    if deriv:
        sigmas.append(Fraction(1))
    # the branch variable is t = c0^(1/s) with the EQUATION-wide scale, so
    # that one t value fixes every fractional power the equation contains
    s = _root_scale(e)
    smin = min(sigmas)
    degree = lambda sig: int((sig - smin) * s)
    size = max(degree(sig) for sig in sigmas) + 1
    poly = [as_coefficient(0)] * size
    for m in monomials:
        poly[degree(m.y_exp)] = poly[degree(m.y_exp)] + m.coefficient
    if deriv:
        poly[degree(Fraction(1))] = poly[degree(Fraction(1))] - mu0
    # strip the t^k factor: only nonzero roots t are admissible
    shift = 0
    while shift < len(poly) and not poly[shift]:
        shift += 1
    poly = poly[shift:]
    if len(poly) <= 1:
        return
    roots = poly_roots(poly, mode=mode)
    if roots.unresolved is not None:
        result.unresolved.append(
            UnresolvedInitial(mu0, tuple(roots.unresolved), s)
        )
    for t_root, _mult in roots.roots:
        c0 = t_root**s if s > 1 else t_root
        mu_r = _resonant_index(monomials, t_root, s)
        result.terms.append(
            InitialTerm(
                mu0,
                c0,
                "b",
                resonant_index=mu_r,
                derivative_active=deriv,
                root_scale=s,
                branch_root=t_root if s > 1 else None,
            )
        )


def _resonant_index(monomials, t_root, s):
    """sum f * c0^(sigma-1) * sigma over the active monomials."""
    acc = as_coefficient(0)
    for m in monomials:
        power = int((m.y_exp - 1) * s)
        acc = acc + m.coefficient * (t_root**power) * m.y_exp
    if hasattr(acc, "rational_value"):
        r = acc.rational_value()
        if r is not None:
            return r
    if isinstance(acc, Fraction):
        return acc
    return acc  # non-rational resonant index: carried, never matched


def _coincident_terms(e, contour, result):
    for m in e.monomials:
        if (m.x_exp, m.y_exp) != (Fraction(-1), Fraction(1)):
            continue
        f = m.coefficient
        mu0 = f if isinstance(f, Fraction) else getattr(f, "rational_value", lambda: None)()
        if not mu0:
            return
        active_keys = {line.key for line in contour.active(mu0)}
        if contour.value(mu0) != mu0 - 1:
            return
        if active_keys - {DERIVATIVE, (m.x_exp, m.y_exp)}:
            return  # ties with other lines make mu0 a breaking point instead
        result.terms.append(
            InitialTerm(
                mu0,
                FREE,
                "c",
                resonant_index=mu0,
                derivative_active=True,
            )
        )


def _constant_terms(e, mode, result):
    nu0 = min(m.x_exp for m in e.monomials)
    level = [m for m in e.monomials if m.x_exp == nu0]
    if nu0 + 1 > 0:
        result.terms.append(InitialTerm(Fraction(0), FREE, "a"))
        return
    boundary = nu0 + 1 == 0
    sigmas = [m.y_exp for m in level]
    if len(set(sigmas)) < 2:
        return  # no breaking point of the lowest level at 0: no roots
    s = _root_scale(e)
    smin = min(sigmas)
    size = max(int((sig - smin) * s) for sig in sigmas) + 1
    poly = [as_coefficient(0)] * size
    for m in level:
        d = int((m.y_exp - smin) * s)
        poly[d] = poly[d] + m.coefficient
    shift = 0
    while shift < len(poly) and not poly[shift]:
        shift += 1
    poly = poly[shift:]
    if len(poly) <= 1:
        return
    roots = poly_roots(poly, mode=mode)
    if roots.unresolved is not None:
        result.unresolved.append(
            UnresolvedInitial(Fraction(0), tuple(roots.unresolved), s)
        )
    for t_root, _mult in roots.roots:
        c0 = t_root**s if s > 1 else t_root
        mu_r = _resonant_index(level, t_root, s) if boundary else None
        result.terms.append(
            InitialTerm(
                Fraction(0),
                c0,
                "a",
                resonant_index=mu_r,
                boundary=boundary,
                root_scale=s,
                branch_root=t_root if s > 1 else None,
            )
        )


@dataclass
class UnresolvedInitial:
    """A vertex polynomial whose roots left the coefficient domain."""

    exponent: Fraction
    vertex_poly: tuple
    root_scale: int


# -- classification -----------------------------------------------------------


PROPER = "proper"
ALGEBRAIC_TYPE = "algebraic-type"
NO_CONTINUATION = "no-continuation"


def classify(e: MonomialODE, t: InitialTerm) -> str:
    """Proper, algebraic-type, or no-continuation, per the contour."""
    if t.case == "b":
        return PROPER if t.derivative_active else ALGEBRAIC_TYPE
    if t.case == "c":
        return PROPER
    # case a
    if t.boundary:
        return NO_CONTINUATION
    nu0 = min(m.x_exp for m in e.monomials)
    if nu0 + 1 > 0:
        return PROPER
    if nu0 + 1 < 0 and t.coefficient is not FREE:
        return ALGEBRAIC_TYPE
    return NO_CONTINUATION


# -- the exponent lattice ------------------------------------------------------


@dataclass(frozen=True)
class IndexLattice:
    """Admitted exponents mu0 + (sums of the nonnegative shifts), bounded.

    The generators are nu + 1 + (sigma - 1)*mu0 per monomial; resonance
    widening appends mu_r - mu0.
    """

    mu0: Fraction
    generators: tuple
    elements: tuple
    bound: Fraction
    widened_by: tuple = ()

    def __contains__(self, x):
        return Fraction(x) in set(self.elements)

    def nondecomposable_for(self, target):
        """Generating shifts that are non-decomposable in the shift
        semigroup and occur in some decomposition of ``target - mu0``."""
        target = Fraction(target) - self.mu0
        shifts = sorted({g for g in self.generators if g > 0})
        sums = _semigroup(shifts, target)
        out = []
        for g in shifts:
            decomposable = any(
                a > 0 and (g - a) in sums for a in sums if 0 < a < g
            )
            if decomposable:
                continue
            if target == g or (target - g) in sums or target - g == 0:
                out.append(g)
        return tuple(out)


def _semigroup(generators, bound):
    """All sums of >= 1 generators up to ``bound`` (inclusive)."""
    sums = set()
    frontier = {Fraction(0)}
    while frontier:
        nxt = set()
        for base in frontier:
            for g in generators:
                v = base + g
                if v <= bound and v not in sums:
                    sums.add(v)
                    nxt.add(v)
        frontier = nxt
    return sums


def index_lattice(e: MonomialODE, t: InitialTerm, bound, widen=()) -> IndexLattice:
    mu0 = t.exponent
    gens = []
    for m in e.monomials:
        g = m.x_exp + 1 + (m.y_exp - 1) * mu0
        if g < 0:
            raise ClassificationError(
                f"negative index shift {g}; the branch is algebraic-type"
            )
        gens.append(g)
    gens = sorted(set(gens) | {Fraction(w) for w in widen})
    bound = Fraction(bound)
    positive = [g for g in gens if g > 0]
    sums = _semigroup(positive, bound - mu0)
    elements = sorted({mu0} | {mu0 + s for s in sums})
    return IndexLattice(mu0, tuple(gens), tuple(elements), bound, tuple(widen))


# -- solution branches ---------------------------------------------------------


UNIQUE = "unique"
RESONANT_FREE = "resonant-free"
NEGATIVE_RESONANCE = "negative-resonance"
ALGEBRAIC_BRANCH = "algebraic-type"
NO_CONTINUATION_BRANCH = "no-continuation"
ZERO_BRANCH = "zero"


@dataclass
class SolutionBranch:
    initial: object  # InitialTerm or None for the zero branch
    series: PuiseuxSeries
    status: str
    kind: str  # "proper" | "algebraic-type" | "zero" | "none"
    residual_guarantee: object = None  # Fraction or INF
    resonant_index: object = None
    free_constant: object = None  # chosen value, or the ParamPoly symbol name
    obstruction: object = None
    iterations: int = 0
    coincidence_orders: tuple = ()
    note: str = ""

    def instantiate(self, value):
        """Substitute a numeric value for the branch's free constant."""
        value = as_coefficient(value)
        terms = tuple(
            (ex, substitute_parameter(c, value)) for ex, c in self.series.terms
        )
        series = PuiseuxSeries(terms, self.series.trunc)
        return replace(self, series=series, free_constant=value)

    def sort_key(self):
        mu = float(self.series.val_floor()) if self.series.terms else float(
            self.initial.exponent if self.initial else 0
        )
        case = self.initial.case if self.initial else ""
        return (self.kind, mu, case, str(self.series))


@dataclass
class VerifyResult:
    """Residual valuation of a branch, with its certified window."""

    valuation: object  # Fraction or INF (no nonzero residual term seen)
    certified_below: object

    def meets(self, guarantee):
        if guarantee is None:
            return True
        target = min(guarantee, self.certified_below)
        return self.valuation >= target


def verify_branch(e: MonomialODE, b: SolutionBranch, window=None) -> VerifyResult:
    """Residual valuation of d/dx(series) - rhs(series), by substitution."""
    return verify_series(e, b.series, window=window, branches=_branches_of(b))


def _branches_of(b):
    if b.initial is not None:
        return b.initial.branch_map()
    return None


def verify_series(e: MonomialODE, series: PuiseuxSeries, window=None, branches=None):
    prec = None
    if series.trunc == INF:
        needs_prec = any(
            m.y_exp < 0 or m.y_exp.denominator != 1 for m in e.monomials
        ) and any(series.terms) and not _is_monomial_series(series)
        if needs_prec:
            prec = Fraction(window) if window is not None else _default_window(series)
    rhs = e.substitute(series, prec=prec, branches=branches)
    residual = series.differentiate() - rhs
    certified = residual.trunc
    certified = min(certified, _cap_from_equation(e, series))
    val = residual.valuation()
    if val != INF and val >= certified:
        val = INF  # terms at/after the certified window are not evidence
    return VerifyResult(val, certified)


def _is_monomial_series(s):
    return len(s.terms) == 1


def _default_window(series):
    v = series.val_floor()
    base = Fraction(0) if v == INF else Fraction(v)
    return base + 12


def _cap_from_equation(e, series):
    cap = INF
    v = series.val_floor()
    for y_power, trunc in e.coeff_caps:
        cap = min(cap, trunc + y_power * v)
    if e.y_order_cap is not None and e.tail_slope is not None:
        rate = e.tail_slope + v
        if rate <= 0:
            return -INF  # outside the reduction's validity: nothing certified
        cap = min(cap, e.tail_base + (e.y_order_cap + 1) * rate)
    return cap


# -- proper continuation -------------------------------------------------------


def continue_proper(
    e: MonomialODE, t: InitialTerm, bound, c_r=None, symbol="C"
) -> SolutionBranch:
    """Continue a proper initial term through the linear recurrences.

    At each admitted exponent mu_l the residual coefficient at level
    mu_l - 1 determines c_l through division by mu_l - mu_r; at mu_l =
    mu_r the dichotomy is decided exactly: zero obstruction inserts the
    free constant (``c_r``, or a formal parameter when None), a nonzero
    obstruction terminates the branch.  The resonance decision is never
    left pending: the internal bound extends to mu_r when needed.
    """
    if classify(e, t) != PROPER:
        raise ClassificationError("continue_proper needs a proper initial term")
    bound = Fraction(bound)
    mu0 = t.exponent
    branches = t.branch_map()

    free_value = None
    free_at = None
    status = UNIQUE

    if t.coefficient is FREE:
        c0 = as_coefficient(c_r) if c_r is not None else ParamPoly.parameter(symbol)
        free_value = c0
        free_at = mu0
        # an instantiated case-(a) start has exactly one continuation; the
        # coincident-line start is the resonant value itself
        if t.case == "a" and c_r is not None:
            status = UNIQUE
            free_value = None
            free_at = None
        else:
            status = RESONANT_FREE
        mu_r = t.resonant_index  # mu0 itself for case c, None for case a
        resonance_pending = False
    else:
        c0 = t.coefficient
        mu_r = t.resonant_index
        resonance_pending = isinstance(mu_r, Fraction) and mu_r > mu0

    # the linear term of the level equation is mu_l - mu_r; an absent
    # resonant index (case a) means no zero-shift monomials, so mu_r = 0
    mu_r_div = mu_r if mu_r is not None else Fraction(0)

    internal_bound = bound
    if resonance_pending:
        internal_bound = max(bound, mu_r)

    try:
        lattice = index_lattice(e, t, internal_bound)
    except ClassificationError:
        raise

    series = PuiseuxSeries.x_power(mu0, c0)
    widened = ()
    obstruction = None

    def levels():
        pts = set(x for x in lattice.elements if x > mu0)
        if resonance_pending:
            pts.add(mu_r)
        return sorted(pts)

    needs_prec = any(
        m.y_exp < 0 or m.y_exp.denominator != 1 for m in e.monomials
    )
    data_cap = _cap_from_equation(e, PuiseuxSeries.x_power(mu0, 1))

    try:
        pending = levels()
        processed = mu0
        while pending:
            mu_l = pending.pop(0)
            if mu_l - 1 >= data_cap:
                break  # the reduction's dropped tail reaches this level
            prec = mu_l if needs_prec else None
            residual = series.differentiate() - e.substitute(
                series, prec=prec, branches=branches
            )
            level_coeff = _known_coefficient(residual, mu_l - 1)
            if resonance_pending and mu_l == mu_r:
                if level_coeff:
                    obstruction = level_coeff
                    series = series.truncate(mu_r)
                    return SolutionBranch(
                        t,
                        series,
                        NEGATIVE_RESONANCE,
                        PROPER,
                        residual_guarantee=mu_r - 1,
                        resonant_index=mu_r,
                        obstruction=obstruction,
                    )
                value = (
                    as_coefficient(c_r)
                    if c_r is not None
                    else ParamPoly.parameter(symbol)
                )
                series = series + PuiseuxSeries.x_power(mu_r, value)
                free_value, free_at = value, mu_r
                status = RESONANT_FREE
                widened = (mu_r - mu0,)
                lattice = index_lattice(e, t, internal_bound, widen=widened)
                resonance_pending = False
                pending = [x for x in levels() if x > mu_l]
                processed = mu_l
                continue
            divisor = mu_l - mu_r_div
            if not divisor:
                raise ClassificationError(
                    f"recurrence degenerates at {mu_l} without a resonance plan"
                )
            if level_coeff:
                c_l = level_coeff / divisor
                # residual = d/dx(series) - rhs; adding c_l x^mu_l changes the
                # level by c_l * (mu_l - mu_r), so cancel exactly:
                series = series - PuiseuxSeries.x_power(mu_l, c_l)
            processed = mu_l
            if not resonance_pending and not pending:
                break

        next_level = _next_lattice_exponent(e, t, widened, processed)
        series = series.with_trunc(min(next_level, data_cap + 1))
        prec = next_level if needs_prec else None
        final_res = series.differentiate() - e.substitute(
            series, prec=prec, branches=branches
        )
    except (UnsupportedSymbolic, BranchError) as err:
        symbolic = has_parameter_series(series) or has_parameter(c0)
        if isinstance(err, BranchError) and not symbolic:
            raise  # a genuine missing root branch, not a symbolic limit
        series = series.truncate(free_at if free_at is not None else mu0)
        return SolutionBranch(
            t,
            series,
            RESONANT_FREE,
            PROPER,
            residual_guarantee=series.trunc - 1,
            resonant_index=free_at,
            free_constant=symbol,
            note="continuation past the free constant needs a numeric value",
        )

    if final_res.is_exact_zero and data_cap == INF:
        guarantee = INF
    else:
        guarantee = min(final_res.val_floor(), data_cap)
    return SolutionBranch(
        t,
        series,
        status,
        PROPER,
        residual_guarantee=guarantee,
        resonant_index=free_at if status == RESONANT_FREE else t.resonant_index,
        free_constant=free_value if status == RESONANT_FREE else None,
    )


def _known_coefficient(series, e):
    """Coefficient at e when certified, else the term value if present."""
    for te, tc in series.terms:
        if te == e:
            return tc
    return as_coefficient(0)


def _next_lattice_exponent(e, t, widened, processed):
    """Smallest admitted exponent strictly beyond ``processed``."""
    probe = Fraction(processed) + 1
    while True:
        lat = index_lattice(e, t, probe, widen=widened)
        beyond = [x for x in lat.elements if x > processed]
        if beyond:
            return beyond[0]
        probe += 1
        if probe > Fraction(processed) + 64:
            return INF  # no admitted exponent ahead: the series is complete


# -- algebraic-type continuation ----------------------------------------------


def solve_algebraic_type(e: MonomialODE, t: InitialTerm, bound, mode="rational"):
    """Iterated algebraic solves for an algebraic-type initial term.

    Round k solves rhs(y) - d/dx(y_{k-1}) = 0 and trusts its root below
    the coincidence order mu0 + (k+1)*Delta, Delta = mu0 - 1 - f(mu0);
    the recorded coincidence orders grow by exactly Delta per round.
    """
    if classify(e, t) != ALGEBRAIC_TYPE:
        raise ClassificationError("solve_algebraic_type needs an algebraic-type term")
    bound = Fraction(bound)
    mu0 = t.exponent
    fval = ode_contour(e).value(mu0)
    delta = mu0 - 1 - fval
    if delta <= 0:
        raise ClassificationError("algebraic-type precondition violated")
    s = _root_scale(e)
    shift = min(Fraction(0), min(e.sigmas()))

    t_root = t.branch_root if t.branch_root is not None else t.coefficient
    lead_exp = mu0 / s

    # states track the w = y^(1/s) prefix: the root-branch identity lives
    # in w-space, where conjugate w-roots of the same y stay distinct
    states = [(None, None, 0, ())]
    finished = []
    while states:
        w_prev, prev_bw, k, orders = states.pop()
        c_k = mu0 + (k + 1) * delta
        y_prev = None
        if w_prev is not None:
            y_prev = w_prev.pow_rational(Fraction(s)).truncate(orders[-1])
        poly = _modified_polynomial(e, y_prev, s, shift)
        bound_w = c_k - (s - 1) * mu0 / s
        res = solve_algebraic(poly, bound_w, mode=mode)
        matches = []
        for b in res.branches:
            if not b.series.terms:
                continue
            le, lc = b.series.leading()
            if k == 0:
                if le == lead_exp and lc == t_root:
                    matches.append(b)
            elif b.series.agrees_with(w_prev, prev_bw):
                matches.append(b)
        for b in matches:
            new_orders = orders + (c_k,)
            if b.residual_bound == INF:
                # the algebraic solve closed exactly; if the full series
                # also solves the ODE exactly there is nothing to iterate
                y_exact = b.series.pow_rational(Fraction(s))
                check = verify_series(e, y_exact, branches=t.branch_map())
                if check.valuation == INF and check.certified_below == INF:
                    finished.append((y_exact, k + 1, new_orders, True))
                    continue
            if c_k >= bound:
                y_k = b.series.pow_rational(Fraction(s)).truncate(c_k)
                finished.append((y_k, k + 1, new_orders, False))
            else:
                states.append((b.series, bound_w, k + 1, new_orders))
    data_cap = _cap_from_equation(e, PuiseuxSeries.x_power(mu0, 1))
    out = []
    for y_k, iterations, orders, exact in finished:
        if exact:
            guarantee = INF
        else:
            guarantee = min(mu0 - 1 + (iterations - 1) * delta, data_cap)
        if data_cap != INF and not exact:
            y_k = y_k.truncate(data_cap + 1)
        out.append(
            SolutionBranch(
                t,
                y_k,
                ALGEBRAIC_BRANCH,
                ALGEBRAIC_TYPE,
                residual_guarantee=guarantee,
                resonant_index=t.resonant_index,
                iterations=iterations,
                coincidence_orders=orders,
            )
        )
    out.sort(key=SolutionBranch.sort_key)
    return out


def branch_count_bound(e: MonomialODE) -> int:
    """s * 2^((sigma_max - sigma_min)*s - 1) over the sigma spread."""
    sigmas = e.sigmas()
    s = 1
    for sig in sigmas:
        s = s * sig.denominator // _gcd(s, sig.denominator)
    spread = int((max(sigmas) - min(sigmas)) * s)
    if spread < 1:
        return s
    return s * 2 ** (spread * s - 1) if spread * s >= 1 else s


def _modified_polynomial(e, y_prev, s, shift):
    """rhs(y) - d/dx(y_prev) cleared to a polynomial in w = y^(1/s)."""
    degree = lambda sig: int((sig - shift) * s)
    size = max(degree(sig) for sig in e.sigmas()) + 1
    size = max(size, degree(Fraction(0)) + 1)
    coeffs = [PuiseuxSeries.zero() for _ in range(size)]
    for m in e.monomials:
        coeffs[degree(m.y_exp)] = coeffs[degree(m.y_exp)] + PuiseuxSeries.x_power(
            m.x_exp, m.coefficient
        )
    if y_prev is not None:
        coeffs[degree(Fraction(0))] = coeffs[degree(Fraction(0))] - y_prev.differentiate()
    return SeriesPolynomial(coeffs)


# -- full solve ----------------------------------------------------------------


@dataclass
class SolveAllReport:
    branches: list
    unresolved: list = field(default_factory=list)
    notes: list = field(default_factory=list)


def solve_all(e: MonomialODE, bound, resonance="symbolic", mode="rational"):
    """Expand every admissible initial term per its classification.

    ``resonance`` is either ``"symbolic"`` (free constants carried as
    formal parameters) or a list of numeric values, one branch per value
    at every free constant.
    """
    bound = Fraction(bound)
    init = initial_terms(e, mode=mode)
    report = SolveAllReport([], list(init.unresolved), list(init.notes))
    symbol_counter = 0
    free_family_seen = False
    for t in init.terms:
        cls = classify(e, t)
        if cls == PROPER:
            symbol_counter += 1
            symbol = f"C{symbol_counter}"
            branch = continue_proper(e, t, bound, c_r=None, symbol=symbol)
            if branch.status == RESONANT_FREE and resonance != "symbolic":
                for value in resonance:
                    if has_parameter_series(branch.series):
                        report.branches.append(branch.instantiate(value))
                    else:
                        report.branches.append(
                            continue_proper(e, t, bound, c_r=value)
                        )
            else:
                report.branches.append(branch)
            if t.coefficient is FREE:
                free_family_seen = True  # the c = 0 instance is y = 0
        elif cls == ALGEBRAIC_TYPE:
            report.branches.extend(solve_algebraic_type(e, t, bound, mode=mode))
        else:
            reason = (
                "boundary case mu0 = 0 with nu0 + 1 = 0: resonance at 0, no "
                "continuation algorithm"
                if t.boundary
                else "no Puiseux continuation (a logarithm would be needed)"
            )
            report.branches.append(
                SolutionBranch(
                    t,
                    PuiseuxSeries.zero(Fraction(0)),
                    NO_CONTINUATION_BRANCH,
                    "none",
                    note=reason,
                )
            )
    if all(m.y_exp > 0 for m in e.monomials) and not free_family_seen:
        report.branches.append(
            SolutionBranch(
                None,
                PuiseuxSeries.zero(),
                UNIQUE,
                ZERO_BRANCH,
                residual_guarantee=INF,
                note="y = 0 solves the equation exactly",
            )
        )
    nu0 = min(m.x_exp for m in e.monomials)
    if nu0 + 1 <= 0 and not any(
        b.initial is not None and b.initial.case == "a" for b in report.branches
    ):
        report.notes.append(
            "no branch starts at a nonzero constant (mu0 = 0 has no "
            "admissible leading coefficient)"
        )
    report.branches.sort(key=SolutionBranch.sort_key)
    _renumber_free_constants(report.branches)
    return report


def _renumber_free_constants(branches):
    """Free constants are reported as C1, C2, ... in final branch order."""
    counter = 0
    for i, b in enumerate(branches):
        old = None
        if has_parameter_series(b.series):
            old = next(
                c.symbol for _e, c in b.series.terms if has_parameter(c)
            )
        elif isinstance(b.free_constant, str):
            old = b.free_constant
        if old is None:
            continue
        counter += 1
        new = f"C{counter}"
        if old == new:
            continue
        terms = tuple(
            (ex, ParamPoly(c.coeffs, new) if isinstance(c, ParamPoly) else c)
            for ex, c in b.series.terms
        )
        branches[i] = replace(b, series=PuiseuxSeries(terms, b.series.trunc))
        if isinstance(b.free_constant, str):
            branches[i].free_constant = new
        elif isinstance(branches[i].free_constant, ParamPoly):
            branches[i].free_constant = ParamPoly(
                branches[i].free_constant.coeffs, new
            )


def has_parameter_series(series: PuiseuxSeries) -> bool:
    return any(has_parameter(c) for _e, c in series.terms)


# -- rational right-hand sides --------------------------------------------------


def expand_rational(r: RationalODE, y_order: int) -> MonomialODE:
    """Reduce P(y)/Q(y), recentered at r.center, to a finite monomial form.

    A pure-monomial Q at center 0 divides out exactly (negative powers of
    y, no truncation).  Otherwise Q(center) must be nonzero and 1/Q is
    expanded geometrically to ``y_order``; the returned equation records
    the truncation caps so residual certificates stay honest.
    """
    p_c = _shift_poly(r.numer, r.center)
    q_c = _shift_poly(r.denom, r.center)
    q_support = [i for i, c in enumerate(q_c) if c.terms]
    if not q_support:
        raise PoleError("Q vanishes identically at the expansion center")
    if len(q_support) == 1 and all(
        c.is_exact_zero or i == q_support[0] for i, c in enumerate(q_c)
    ):
        m = q_support[0]
        qm = q_c[m]
        monomials = []
        caps = []
        for i, c in enumerate(p_c):
            if c.is_exact_zero:
                continue
            quotient = c * qm.invert(prec=None if qm.terms and len(qm.terms) == 1 else 20)
            for nu, f in quotient.terms:
                monomials.append((nu, Fraction(i - m), f))
            if quotient.trunc != INF:
                caps.append((Fraction(i - m), quotient.trunc))
        return MonomialODE(monomials, coeff_caps=caps)
    if not q_c[0].terms:
        raise PoleError("Q(center) = 0: pick a different expansion center")
    q0 = q_c[0]
    u = [PuiseuxSeries.zero()] + [c * q0.invert(prec=_inv_prec(q0)) for c in q_c[1:]]
    inv = [PuiseuxSeries.one()] + [PuiseuxSeries.zero() for _ in range(y_order)]
    power = list(inv)
    for _ in range(y_order):
        power = _ymul(power, [-c for c in u], y_order)
        inv = _yadd(inv, power)
    inv = [c * q0.invert(prec=_inv_prec(q0)) for c in inv]
    full = _ymul([c for c in p_c], inv, y_order)
    monomials = []
    caps = []
    for i, c in enumerate(full):
        if c.is_exact_zero:
            continue
        for nu, f in c.terms:
            monomials.append((nu, Fraction(i), f))
        if c.trunc != INF:
            caps.append((Fraction(i), c.trunc))
    tail_slope = Fraction(0)
    vq0 = q0.val_floor()
    for j, c in enumerate(q_c[1:], start=1):
        if c.terms:
            tail_slope = min(tail_slope, Fraction(c.valuation() - vq0, j))
    tail_base = min(
        (c.val_floor() - j * tail_slope for j, c in enumerate(full) if c.terms),
        default=Fraction(0),
    )
    return MonomialODE(
        monomials,
        y_order_cap=y_order,
        tail_base=tail_base,
        tail_slope=tail_slope,
        coeff_caps=caps,
    )


def _inv_prec(q0):
    if len(q0.terms) == 1 and q0.trunc == INF:
        return None
    return q0.val_floor() + 20


def _shift_poly(coeffs, center):
    coeffs = [_as_series(c) for c in coeffs]
    if center.is_exact_zero:
        return coeffs
    n = len(coeffs) - 1
    powers = [PuiseuxSeries.one()]
    for _ in range(n):
        powers.append(powers[-1] * center)
    binom = [[0] * (n + 1) for _ in range(n + 1)]
    for l in range(n + 1):
        binom[l][0] = 1
        for i in range(1, l + 1):
            binom[l][i] = binom[l - 1][i - 1] + (binom[l - 1][i] if i <= l - 1 else 0)
    out = []
    for i in range(n + 1):
        acc = PuiseuxSeries.zero()
        for l in range(i, n + 1):
            acc = acc + coeffs[l].scale(Fraction(binom[l][i])) * powers[l - i]
        out.append(acc)
    return out


def _ymul(a, b, order):
    out = [PuiseuxSeries.zero() for _ in range(order + 1)]
    for i, ca in enumerate(a):
        if ca.is_exact_zero or i > order:
            continue
        for j, cb in enumerate(b):
            if i + j > order:
                break
            out[i + j] = out[i + j] + ca * cb
    return out


def _yadd(a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else PuiseuxSeries.zero()
        y = b[i] if i < len(b) else PuiseuxSeries.zero()
        out.append(x + y)
    return out
