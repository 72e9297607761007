"""Truncated generalized Puiseux series with exact rational exponents.

A series is a finite, strictly increasing list of ``(exponent, coefficient)``
terms together with a truncation exponent ``trunc``: every term with exponent
below ``trunc`` is exactly known, everything at or above it is unknown.  An
exact series (a Puiseux polynomial) has ``trunc == INF``.

Exponents are ``fractions.Fraction``; coefficients live in one of the exact
domains of :mod:`puiseux.coefficients`.  All values are immutable and all
operations are pure, so series can be shared freely between threads.

The canonical text form is ``c0*x^(p0/q0) + ... + O(x^(pt/qt))`` and
round-trips bit-exactly through :func:`parse_series`.
"""

from __future__ import annotations

from fractions import Fraction

from .coefficients import as_coefficient
from .polyutils import fraction_nth_root

INF = float("inf")


class SeriesError(ValueError):
    pass


class PoleError(SeriesError):
    """A zero series was raised to a nonpositive power."""


class BranchError(SeriesError):
    """No valid root branch for a fractional power."""


class PrecisionError(SeriesError):
    """The requested data lies at or beyond the truncation bound."""


def _as_exponent(e):
    if isinstance(e, Fraction):
        return e
    if isinstance(e, int):
        return Fraction(e)
    if e == INF:
        return INF
    return Fraction(e)


class PuiseuxSeries:
    """An exactly truncated generalized Puiseux series."""

    __slots__ = ("terms", "trunc")

    def __init__(self, terms=(), trunc=INF):
        trunc = _as_exponent(trunc)
        merged = {}
        for e, c in terms:
            e = _as_exponent(e)
            c = as_coefficient(c)
            if e in merged:
                merged[e] = merged[e] + c
            else:
                merged[e] = c
        clean = tuple(
            (e, merged[e]) for e in sorted(merged) if merged[e] and e < trunc
        )
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "trunc", trunc)

    def __setattr__(self, *args):
        raise AttributeError("PuiseuxSeries is immutable")

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls, trunc=INF):
        return cls((), trunc)

    @classmethod
    def one(cls):
        return cls(((Fraction(0), Fraction(1)),))

    @classmethod
    def constant(cls, c):
        return cls(((Fraction(0), as_coefficient(c)),))

    @classmethod
    def x_power(cls, e, c=1):
        return cls(((_as_exponent(e), as_coefficient(c)),))

    # -- structure -----------------------------------------------------

    @property
    def is_zero(self):
        """No known terms (there may still be unknown terms past trunc)."""
        return not self.terms

    @property
    def is_exact(self):
        return self.trunc == INF

    @property
    def is_exact_zero(self):
        return not self.terms and self.trunc == INF

    def valuation(self):
        """Least exponent of the support; INF for an empty support."""
        return self.terms[0][0] if self.terms else INF

    def val_floor(self):
        """Certified lower bound on the true valuation."""
        return self.terms[0][0] if self.terms else self.trunc

    def leading(self):
        if not self.terms:
            raise SeriesError("zero series has no leading term")
        return self.terms[0]

    def coefficient(self, e):
        """Exact coefficient at exponent ``e``; PrecisionError past trunc."""
        e = _as_exponent(e)
        if e >= self.trunc:
            raise PrecisionError(f"coefficient at {e} is beyond trunc {self.trunc}")
        for te, tc in self.terms:
            if te == e:
                return tc
        return Fraction(0)

    def truncate(self, t):
        t = _as_exponent(t)
        if t >= self.trunc:
            return self
        return PuiseuxSeries(self.terms, t)

    def with_trunc(self, t):
        return PuiseuxSeries(self.terms, t)

    # -- ring operations -------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PuiseuxSeries.constant(other)
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return PuiseuxSeries(
            self.terms + other.terms, min(self.trunc, other.trunc)
        )

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxSeries(tuple((e, -c) for e, c in self.terms), self.trunc)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PuiseuxSeries.constant(other)
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, PuiseuxSeries):
            return self.scale(other)
        trunc = min(self.val_floor() + other.trunc, other.val_floor() + self.trunc)
        acc = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = e1 + e2
                if e >= trunc:
                    continue
                if e in acc:
                    acc[e] = acc[e] + c1 * c2
                else:
                    acc[e] = c1 * c2
        return PuiseuxSeries(tuple(acc.items()), trunc)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c):
        c = as_coefficient(c)
        if not c:
            return PuiseuxSeries.zero()
        return PuiseuxSeries(tuple((e, c * tc) for e, tc in self.terms), self.trunc)

    def shift(self, e):
        """Multiply by x^e."""
        e = _as_exponent(e)
        t = self.trunc if self.trunc == INF else self.trunc + e
        return PuiseuxSeries(tuple((te + e, tc) for te, tc in self.terms), t)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PuiseuxSeries.constant(other)
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return self.terms == other.terms and self.trunc == other.trunc

    def __hash__(self):
        return hash((self.terms, self.trunc))

    def agrees_with(self, other, below):
        """Termwise equality of the two series strictly below ``below``."""
        below = min(_as_exponent(below), self.trunc, other.trunc)
        a = [(e, c) for e, c in self.terms if e < below]
        b = [(e, c) for e, c in other.terms if e < below]
        return a == b

    # -- calculus ---------------------------------------------------------

    def differentiate(self):
        """Termwise d/dx; constants vanish and trunc drops by one."""
        t = self.trunc if self.trunc == INF else self.trunc - 1
        terms = tuple((e - 1, c * e) for e, c in self.terms if e)
        return PuiseuxSeries(terms, t)

    # -- multiplicative structure ----------------------------------------

    def invert(self, prec=None):
        """Geometric-series expansion of the reciprocal.

        ``prec`` (a target truncation exponent for the result) is required
        whenever the reciprocal of an exact series does not terminate.
        """
        return self.pow_rational(Fraction(-1), prec=prec)

    def pow_rational(self, sigma, branch=None, prec=None):
        """The power ``self**sigma`` for rational ``sigma``.

        For fractional powers the leading coefficient needs a root: the
        caller may pass the chosen ``branch`` (any b with b^q = c^p for
        sigma = p/q); by default the canonical exact rational root is used
        when it exists.
        """
        sigma = Fraction(sigma)
        if not self.terms:
            if sigma > 0:
                if self.trunc == INF:
                    return PuiseuxSeries.zero()
                return PuiseuxSeries.zero(self.trunc * sigma)
            raise PoleError("zero series raised to a nonpositive power")
        if sigma == 0:
            return PuiseuxSeries.one()
        if sigma.denominator == 1 and sigma > 0:
            # plain ring power: no leading-coefficient root or inverse needed
            result = PuiseuxSeries.one()
            base = self
            n = sigma.numerator
            while n:
                if n & 1:
                    result = result * base
                base = base * base if n > 1 else base
                n >>= 1
            if prec is not None:
                result = result.truncate(prec)
            return result
        m, c = self.leading()
        if branch is None:
            branch = default_branch(c, sigma)
        else:
            branch = as_coefficient(branch)
            if branch ** sigma.denominator != c**sigma.numerator:
                raise BranchError(
                    f"branch {branch} is not a {sigma.denominator}-th root "
                    f"of {c}^{sigma.numerator}"
                )
        u = self.shift(-m).scale(c**-1) - 1
        bound = u.trunc
        if prec is not None:
            bound = min(bound, _as_exponent(prec) - sigma * m)
        integral = sigma.denominator == 1 and sigma >= 0
        if bound == INF and u.terms and not integral:
            raise PrecisionError(
                "prec is required for a non-terminating power expansion"
            )
        acc = PuiseuxSeries.one().truncate(bound)
        upow = PuiseuxSeries.one()
        k = 0
        step = u.val_floor()
        while True:
            k += 1
            coef = _binomial(sigma, k)
            if not coef:
                break
            if bound != INF and k * step >= bound:
                break
            upow = (upow * u).truncate(bound)
            if upow.is_zero and upow.trunc == INF:
                break
            acc = acc + upow.scale(coef)
        return acc.shift(sigma * m).scale(branch)

    # -- text form --------------------------------------------------------

    def __str__(self):
        return format_series(self)

    def __repr__(self):
        return f"PuiseuxSeries({format_series(self)})"


def _binomial(sigma, k):
    """Generalized binomial coefficient C(sigma, k) for rational sigma."""
    num = Fraction(1)
    for j in range(k):
        num *= sigma - j
    den = 1
    for j in range(2, k + 1):
        den *= j
    return num / den


def default_branch(c, sigma):
    """Canonical root branch for ``c**sigma``; BranchError when absent."""
    sigma = Fraction(sigma)
    q, p = sigma.denominator, sigma.numerator
    if q == 1:
        return as_coefficient(c) ** p
    if isinstance(c, Fraction):
        r = fraction_nth_root(c, q)
        if r is not None:
            return r**p
    raise BranchError(
        f"no canonical rational branch for ({c})^({sigma}); pass one explicitly"
    )


# -- substitution into a finite monomial right-hand side ---------------------


def substitute_series(monomials, y, prec=None, branches=None):
    """Evaluate ``sum f * x^nu * y^sigma`` at a series ``y``.

    ``monomials`` is any iterable of ``(nu, sigma, f)`` triples (objects with
    ``x_exp``/``y_exp``/``coefficient`` attributes work too).  ``branches``
    optionally maps sigma to the root branch used for ``y**sigma``.
    """
    triples = []
    for m in monomials:
        if hasattr(m, "x_exp"):
            triples.append((m.x_exp, m.y_exp, m.coefficient))
        else:
            nu, sigma, f = m
            triples.append((Fraction(nu), Fraction(sigma), as_coefficient(f)))
    by_sigma = {}
    for nu, sigma, f in triples:
        by_sigma.setdefault(sigma, []).append((nu, f))
    total = PuiseuxSeries.zero()
    for sigma, terms in sorted(by_sigma.items()):
        xpart = PuiseuxSeries(tuple((nu, f) for nu, f in terms))
        if sigma == 0:
            total = total + xpart
            continue
        if not y.terms and sigma < 0:
            raise PoleError("negative power of the zero series in substitution")
        branch = None
        if branches is not None:
            branch = branches.get(sigma) if hasattr(branches, "get") else branches(sigma)
        ypow = y.pow_rational(sigma, branch=branch, prec=prec)
        total = total + xpart * ypow
    return total


# -- fractional-power expansion bookkeeping ----------------------------------


class PowerExpansion:
    """Expansion table for ``(1 + sum d_i x^(delta_i))**sigma``.

    For every reachable composite shift ``delta`` below ``bound`` the table
    lists the contributing count vectors ``n`` over the base shifts, each
    with its multinomial weight and monomial value, so that the composite
    coefficient is ``sum weight * prod d_i^(n_i)``.  This is the slow,
    independently checkable route; :meth:`PuiseuxSeries.pow_rational` is the
    fast one, and the two are compared in tests.
    """

    def __init__(self, tail_terms, sigma, bound):
        self.sigma = Fraction(sigma)
        self.bound = _as_exponent(bound)
        self.base = [(Fraction(e), as_coefficient(d)) for e, d in tail_terms]
        if any(e <= 0 for e, _ in self.base):
            raise SeriesError("tail shifts must be positive")
        self.entries = {}
        counts = [0] * len(self.base)
        self._collect(0, Fraction(0), counts)

    def _collect(self, idx, total, counts):
        if total >= self.bound:
            return
        if idx == len(self.base):
            if any(counts):
                weight = multinomial_weight(self.sigma, counts)
                value = Fraction(1)
                for (e, d), n in zip(self.base, counts):
                    if n:
                        value = value * d**n
                entry = (tuple(counts), weight, value)
                self.entries.setdefault(total, []).append(entry)
            return
        step = self.base[idx][0]
        n = 0
        while total + n * step < self.bound:
            counts[idx] = n
            self._collect(idx + 1, total + n * step, counts)
            n += 1
        counts[idx] = 0

    def composite_coefficient(self, delta):
        """d_k for the shift ``delta``: the summed weighted monomials."""
        total = Fraction(0)
        for _counts, weight, value in self.entries.get(Fraction(delta), ()):
            total = total + weight * value
        return total

    def as_series(self):
        terms = [(Fraction(0), Fraction(1))]
        for delta in self.entries:
            terms.append((delta, self.composite_coefficient(delta)))
        return PuiseuxSeries(terms, self.bound)


def multinomial_weight(sigma, counts):
    """Weight of the monomial with count vector ``counts`` in the expansion
    of ``(1 + sum d_i z_i)**sigma``: C(sigma, n) * n! / prod(n_i!), n = sum."""
    n = sum(counts)
    w = _binomial(Fraction(sigma), n)
    rest = 1
    for k in range(2, n + 1):
        rest *= k
    for c in counts:
        for k in range(2, c + 1):
            rest /= Fraction(k)
    return w * rest


# -- canonical text form ------------------------------------------------------


def _format_exponent(e):
    if e.denominator == 1:
        if e >= 0:
            return f"x^{e.numerator}" if e != 1 else "x"
        return f"x^({e.numerator})"
    return f"x^({e.numerator}/{e.denominator})"


def _format_coefficient(c):
    if isinstance(c, Fraction):
        return str(c)
    text = str(c)
    if text.startswith("(") or (" " not in text and not text.startswith("-")):
        return text
    return f"({text})"


def format_series(s: PuiseuxSeries) -> str:
    parts = []
    for e, c in s.terms:
        neg = isinstance(c, Fraction) and c < 0
        mag = -c if neg else c
        if e == 0:
            body = _format_coefficient(mag)
        elif mag == 1 and isinstance(mag, Fraction):
            body = _format_exponent(e)
        else:
            body = f"{_format_coefficient(mag)}*{_format_exponent(e)}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"- {body}" if neg else f"+ {body}")
    if s.trunc != INF:
        t = Fraction(s.trunc)
        if t.denominator == 1 and t >= 0:
            otext = f"O(x^{t.numerator})" if t != 1 else "O(x)"
        else:
            otext = f"O(x^({t.numerator}{'/' + str(t.denominator) if t.denominator != 1 else ''}))"
        parts.append(f"+ {otext}" if parts else otext)
    if not parts:
        return "0"
    return " ".join(parts)


def parse_series(text: str) -> PuiseuxSeries:
    """Parse the canonical series text form back into a series."""
    from .parsing import parse_series_text

    return parse_series_text(text)
