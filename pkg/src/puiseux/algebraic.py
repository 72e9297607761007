"""Roots of polynomials with Puiseux-series coefficients.

The solver follows the constructive closure argument: build the contour
(lower envelope) of the lines ``leading_exponent(alpha_i) + i*x``, read the
admissible leading exponents off its breaking points, solve each vertex
polynomial for the admissible leading coefficients, recenter, and repeat.
Each appended term strictly raises the valuation of the constant
coefficient, which is the residual of the current prefix; a branch stops
once that valuation and the next admissible exponent both reach the
requested bound.

``closed_form_root`` implements the explicit one-root formula available
under the generic normalization (monic, single negative leading index) and
serves as an independent cross-check of the constructive route.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .coefficients import as_coefficient, coefficient_sort_key, poly_roots
from .contour import Contour, Line
from .series import INF, PuiseuxSeries, SeriesError

_MAX_STEPS = 4000


class NormalizationError(SeriesError):
    """closed_form_root precondition (generic normalization) violated."""


@dataclass(frozen=True)
class SeriesPolynomial:
    """sum alpha_i * y^i with PuiseuxSeries coefficients, alpha_N nonzero."""

    coeffs: tuple

    def __init__(self, coeffs):
        coeffs = [_as_series(c) for c in coeffs]
        while len(coeffs) > 1 and coeffs[-1].is_exact_zero:
            coeffs.pop()
        if len(coeffs) < 2:
            raise SeriesError("series polynomial needs degree >= 1")
        if coeffs[-1].is_zero:
            raise SeriesError("leading coefficient must have a known term")
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def evaluate(self, y, prec=None):
        acc = PuiseuxSeries.zero()
        for c in reversed(self.coeffs):
            acc = acc * y + c
        return acc

    def derivative_in_y(self):
        coeffs = [
            self.coeffs[i].scale(Fraction(i)) for i in range(1, len(self.coeffs))
        ]
        return SeriesPolynomial(coeffs)

    def __repr__(self):
        body = ", ".join(str(c) for c in self.coeffs)
        return f"SeriesPolynomial([{body}])"


def _as_series(c):
    if isinstance(c, PuiseuxSeries):
        return c
    return PuiseuxSeries.constant(as_coefficient(c))


def contour_of(p: SeriesPolynomial) -> Contour:
    """Envelope of the lines (leading exponent of alpha_i) + i*x."""
    lines = []
    for i, alpha in enumerate(p.coeffs):
        if alpha.terms:
            lines.append(Line(Fraction(i), alpha.valuation(), key=i))
    return Contour(lines)


@dataclass(frozen=True)
class VertexData:
    """A breaking point with its vertex polynomial in the leading coefficient."""

    x: Fraction
    active_indices: tuple
    vertex_coeffs: tuple  # coefficient of c^i for i in active_indices


def breaking_data(p: SeriesPolynomial):
    """All breaking points of the contour with their vertex polynomials."""
    contour = contour_of(p)
    out = []
    for x in contour.breaking_points():
        active = contour.active(x)
        indices = tuple(sorted(line.key for line in active))
        coeffs = tuple(p.coeffs[i].leading()[1] for i in indices)
        out.append(VertexData(x, indices, coeffs))
    return out


def recenter(p: SeriesPolynomial, y0) -> SeriesPolynomial:
    """Coefficients of p(y0 + ybar) as a polynomial in ybar."""
    y0 = _as_series(y0)
    n = p.degree
    y0_pow = [PuiseuxSeries.one()]
    for _ in range(n):
        y0_pow.append(y0_pow[-1] * y0)
    binom = [[0] * (n + 1) for _ in range(n + 1)]
    for l in range(n + 1):
        binom[l][0] = 1
        for i in range(1, l + 1):
            binom[l][i] = binom[l - 1][i - 1] + (binom[l - 1][i] if i <= l - 1 else 0)
    new_coeffs = []
    for i in range(n + 1):
        acc = PuiseuxSeries.zero()
        for l in range(i, n + 1):
            acc = acc + p.coeffs[l].scale(Fraction(binom[l][i])) * y0_pow[l - i]
        new_coeffs.append(acc)
    return SeriesPolynomial(new_coeffs)


@dataclass
class PartialSolution:
    """An exact root prefix with its certified residual valuation."""

    series: PuiseuxSeries
    multiplicity: int
    residual_bound: object  # Fraction or INF

    def sort_key(self):
        key = [(float(e), coefficient_sort_key(c)) for e, c in self.series.terms]
        return (float(self.series.val_floor()), key)


@dataclass
class UnresolvedBranch:
    """A vertex polynomial whose roots are not representable in the mode."""

    prefix: PuiseuxSeries
    at_exponent: Fraction
    vertex_poly: tuple
    multiplicity: int


@dataclass
class AlgebraicSolveResult:
    branches: list = field(default_factory=list)
    unresolved: list = field(default_factory=list)

    @property
    def total_multiplicity(self):
        return sum(b.multiplicity for b in self.branches) + sum(
            u.multiplicity for u in self.unresolved
        )


def solve_algebraic(p: SeriesPolynomial, bound, mode="rational") -> AlgebraicSolveResult:
    """All root prefixes of ``p`` with residual valuation >= ``bound``.

    Every returned prefix is an exact initial segment of a genuine root;
    prefixes that stop early (trunc caps of the input data, unresolved
    vertex roots) carry their actual certified residual bound instead.
    With ``mode='algebraic'`` irrational vertex roots are adjoined as exact
    algebraic numbers where certifiable; with ``mode='rational'`` they are
    reported in ``unresolved``.
    """
    bound = Fraction(bound)
    result = AlgebraicSolveResult()
    steps = 0
    stack = [(p, PuiseuxSeries.zero(), p.degree, None)]
    while stack:
        q, prefix, mult, last = stack.pop()
        steps += 1
        if steps > _MAX_STEPS:
            raise RuntimeError("algebraic solve exceeded the step limit")
        beta0 = q.coeffs[0]
        remaining = mult
        if beta0.is_exact_zero:
            m = _zero_root_multiplicity(q)
            result.branches.append(PartialSolution(prefix, m, INF))
            remaining = mult - m
            if remaining <= 0:
                continue
        elif beta0.is_zero:
            # the constant coefficient is only known to vanish below its
            # trunc; no further exact progress is possible on this branch
            result.branches.append(
                PartialSolution(prefix, remaining, beta0.val_floor())
            )
            continue
        residual = beta0.val_floor()
        vertices = [
            v
            for v in breaking_data(q)
            if (last is None or v.x > last) and _phantom_safe(q, v.x)
        ]
        if not vertices:
            result.branches.append(PartialSolution(prefix, remaining, residual))
            continue
        if residual >= bound:
            below = [v for v in vertices if v.x < bound]
            above_mult = sum(
                v.active_indices[-1] - v.active_indices[0]
                for v in vertices
                if v.x >= bound
            )
            if above_mult:
                result.branches.append(
                    PartialSolution(prefix, above_mult, residual)
                )
            vertices = below
        for v in vertices:
            _branch_at_vertex(q, prefix, v, mode, stack, result)
    merged = {}
    for b in result.branches:
        key = (b.series, b.residual_bound)
        if key in merged:
            merged[key].multiplicity += b.multiplicity
        else:
            merged[key] = b
    result.branches = sorted(merged.values(), key=PartialSolution.sort_key)
    return result


def _ambient_field(q):
    """The number field the polynomial's coefficients already live in."""
    from .coefficients import AlgebraicNumber

    for alpha in q.coeffs:
        for _e, c in alpha.terms:
            if isinstance(c, AlgebraicNumber):
                return c.field
    return None


def _zero_root_multiplicity(q):
    for i in range(1, len(q.coeffs)):
        if q.coeffs[i].terms:
            return i
    raise SeriesError("polynomial is identically zero")


def _phantom_safe(q, x):
    """True when no unknown coefficient (empty support, finite trunc) could
    reach down to the envelope at ``x``."""
    env = contour_of(q).value(x)
    for i, alpha in enumerate(q.coeffs):
        if not alpha.terms and alpha.trunc != INF:
            if alpha.trunc + i * x <= env:
                return False
    return True


def _branch_at_vertex(q, prefix, v, mode, stack, result):
    lo = v.active_indices[0]
    degree_span = v.active_indices[-1] - lo
    poly = [as_coefficient(0)] * (degree_span + 1)
    for idx, c in zip(v.active_indices, v.vertex_coeffs):
        poly[idx - lo] = c
    ambient = _ambient_field(q)
    if ambient is not None:
        # keep the whole branch inside one embedding: roots of a rational
        # vertex polynomial may already lie in the current field
        poly = [
            c if not isinstance(c, Fraction) else ambient.lift(c)
            for c in poly
        ]
    roots = poly_roots(poly, mode=mode)
    for root, m in roots.roots:
        term = PuiseuxSeries.x_power(v.x, root)
        stack.append((recenter(q, term), prefix + term, m, v.x))
    if roots.unresolved is not None:
        from .polyutils import pdeg

        result.unresolved.append(
            UnresolvedBranch(prefix, v.x, tuple(roots.unresolved), pdeg(roots.unresolved))
        )


# -- the explicit generic-normalization root ---------------------------------


@dataclass(frozen=True)
class ClosedFormInput:
    """Normalized coefficients a_i (a_0 = 1) with the distinguished index k.

    The generic normalization requires a monic polynomial whose reversed
    coefficient list has exactly one entry of negative valuation, at
    position k; all other entries have nonnegative valuation.
    """

    a: tuple
    k: int
    branch: object = None

    @classmethod
    def from_polynomial(cls, p: SeriesPolynomial, branch=None):
        n = p.degree
        if not p.coeffs[n] == PuiseuxSeries.one():
            raise NormalizationError("leading coefficient must be exactly 1")
        a = tuple(p.coeffs[n - i] for i in range(n + 1))
        negative = [
            i
            for i in range(1, n + 1)
            if a[i].terms and a[i].valuation() < 0
        ]
        if len(negative) != 1:
            raise NormalizationError(
                "generic normalization needs exactly one negative leading index"
            )
        return cls(a, negative[0], branch)


def closed_form_root(inp: ClosedFormInput, n_terms: int) -> PuiseuxSeries:
    """The explicit root series under the generic normalization.

    Ordered compositions with parts in {1..N}-{k} feed the correction sum;
    the i-th correction multiplies ``(-a_k)^(-i/k)``, so truncating after
    ``n_terms`` corrections leaves a tail of valuation at least
    ``n_terms/k`` times the (positive) magnitude of the leading index.
    """
    a, k = inp.a, inp.k
    n = len(a) - 1
    neg_ak = -a[k]
    if not neg_ak.terms or neg_ak.valuation() >= 0:
        raise NormalizationError("a_k must have negative valuation")
    depth = Fraction(-neg_ak.valuation())
    final_trunc = Fraction(n_terms) * depth / k
    work = final_trunc + depth
    root_k = neg_ak.pow_rational(Fraction(1, k), branch=inp.branch, prec=work)
    branch_inv = None
    if inp.branch is not None:
        branch_inv = as_coefficient(inp.branch) ** -1
    r_inv = neg_ak.pow_rational(Fraction(-1, k), branch=branch_inv, prec=work)
    allowed = [i for i in range(1, n + 1) if i != k and a[i].terms]

    comp_cache = {}

    def comp_sum(target, parts):
        """sum over ordered compositions of ``target`` into ``parts`` parts
        from ``allowed`` of the product of the matching a-coefficients."""
        if parts == 1:
            if target in allowed:
                return a[target]
            return None
        key = (target, parts)
        if key in comp_cache:
            return comp_cache[key]
        acc = None
        for first in allowed:
            rest = target - first
            if rest < parts - 1:
                continue
            tail = comp_sum(rest, parts - 1)
            if tail is None:
                continue
            piece = (a[first] * tail).truncate(work)
            acc = piece if acc is None else acc + piece
        comp_cache[key] = acc
        return acc

    correction = PuiseuxSeries.zero()
    r_pow = PuiseuxSeries.one()
    for i in range(n_terms):
        if i:
            r_pow = (r_pow * r_inv).truncate(work)
        coeff_i = PuiseuxSeries.zero()
        for p_count in range(1, i + 2):
            scalar = Fraction(1)
            for j in range(1, p_count):
                scalar *= i - j * k
            if not scalar:
                continue
            scalar /= Fraction(k) ** p_count
            for j in range(2, p_count + 1):
                scalar /= j
            inner = comp_sum(i + 1, p_count)
            if inner is None:
                continue
            coeff_i = coeff_i + inner.scale(scalar)
        if not coeff_i.is_zero or coeff_i.trunc != INF:
            correction = correction + (coeff_i * r_pow).truncate(work)
    return (root_k - correction).truncate(final_trunc)
