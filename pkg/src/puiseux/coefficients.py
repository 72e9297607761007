"""Coefficient domains for series arithmetic.

Three exact domains are supported:

* plain ``fractions.Fraction`` (the fast common path),
* :class:`AlgebraicNumber` -- an element of a number field Q(theta), where
  theta is pinned down by an irreducible monic minimal polynomial over Q
  together with an exact isolating interval (real root) or rectangle
  (complex root).  Arithmetic is polynomial arithmetic modulo the minimal
  polynomial; the isolating region is only ever refined to *select* or
  order roots, never to compute with them.
* :class:`ParamPoly` -- a polynomial in one formal free constant over Q,
  used to carry a free parameter through a series computation exactly.

All domains are immutable values and support ``+ - * / **`` with ints and
Fractions mixed in.
"""

from __future__ import annotations

from fractions import Fraction

from .polyutils import (
    FactorizationLimit,
    _fraction_sqrt,
    irreducible_factors,
    isolate_real_roots,
    pdeg,
    pdivmod,
    peval,
    pmonic,
    pmul,
    pstrip,
    refine_interval,
    squarefree_part,
)


class CoefficientError(TypeError):
    """Unsupported mix of coefficient domains."""


class UnsupportedSymbolic(CoefficientError):
    """An operation would need to divide by a free constant."""


def as_coefficient(value):
    if isinstance(value, (AlgebraicNumber, ParamPoly, Fraction)):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise CoefficientError(f"not a coefficient: {value!r}")


def coefficient_sort_key(c):
    """Deterministic order: rationals by value, then algebraics, then params."""
    c = as_coefficient(c)
    if isinstance(c, Fraction):
        return (0, float(c), str(c))
    if isinstance(c, AlgebraicNumber):
        a = c.approx()
        if isinstance(a, complex):
            return (1, a.real, a.imag, repr(c))
        return (1, float(a), 0.0, repr(c))
    return (2, str(c))


# -- number fields ----------------------------------------------------------


class NumberField:
    """Q(theta), theta the root of ``minpoly`` inside ``region``.

    ``minpoly`` is monic and irreducible over Q (caller-certified; the
    constructors in this module only build certified fields).  ``region``
    is either ``(lo, hi)`` -- exact rationals isolating one real root on
    (lo, hi] -- or ``((re_lo, re_hi), (im_lo, im_hi))`` for a complex root.
    """

    def __init__(self, minpoly, region, label="theta"):
        minpoly = tuple(Fraction(c) for c in pmonic(pstrip(list(minpoly))))
        if len(minpoly) < 3:
            raise ValueError("number field needs degree >= 2")
        self.minpoly = minpoly
        self.region = region
        self.label = label
        self._approx = None

    @property
    def degree(self):
        return len(self.minpoly) - 1

    @property
    def is_real(self):
        return not isinstance(self.region[0], tuple)

    def element(self, vec):
        vec = [Fraction(v) for v in vec]
        if len(vec) > self.degree:
            vec = list(pdivmod(vec, list(self.minpoly))[1])
        vec += [Fraction(0)] * (self.degree - len(vec))
        return AlgebraicNumber(self, tuple(vec[: self.degree]))

    def generator(self):
        return self.element([0, 1])

    def lift(self, q):
        return self.element([Fraction(q)])

    def refine(self):
        """Halve the real isolating interval (no-op for complex regions)."""
        if self.is_real:
            p = squarefree_part(list(self.minpoly))
            self.region = refine_interval(p, *self.region)
            self._approx = None

    def approx(self):
        if self._approx is None:
            if self.is_real:
                for _ in range(40):
                    lo, hi = self.region
                    if hi - lo < Fraction(1, 10**12):
                        break
                    self.refine()
                lo, hi = self.region
                self._approx = (float(lo) + float(hi)) / 2.0
            else:
                (rl, rh), (il, ih) = self.region
                self._approx = complex(
                    (float(rl) + float(rh)) / 2.0, (float(il) + float(ih)) / 2.0
                )
        return self._approx

    def __eq__(self, other):
        """Same field means same minimal polynomial and same root.

        Isolating regions are only a means of pinning the root down, and
        they shrink as approximations are requested, so two fields compare
        equal exactly when their regions isolate the same root.
        """
        if not isinstance(other, NumberField) or self.minpoly != other.minpoly:
            return False
        if self.is_real != other.is_real:
            return False
        if self.is_real:
            lo = max(self.region[0], other.region[0])
            hi = min(self.region[1], other.region[1])
            if hi <= lo:
                return False
            from .polyutils import count_real_roots

            return count_real_roots(list(self.minpoly), lo, hi) == 1
        (rl1, rh1), (il1, ih1) = self.region
        (rl2, rh2), (il2, ih2) = other.region
        same_half_plane = (il1 + ih1 > 0) == (il2 + ih2 > 0)
        real_overlap = min(rh1, rh2) >= max(rl1, rl2)
        return same_half_plane and real_overlap

    def __hash__(self):
        sign = 0
        if not self.is_real:
            (_, _), (il, ih) = self.region
            sign = 1 if il + ih > 0 else -1
        return hash((self.minpoly, self.is_real, sign))

    def __repr__(self):
        return f"NumberField({self.label}: deg {self.degree})"


def _squarefree_core(n: int):
    """(s, core) with n = s^2 * core and core squarefree."""
    s, core = 1, 1
    d = 2
    m = n
    while d * d <= m:
        exp = 0
        while m % d == 0:
            m //= d
            exp += 1
        if exp:
            s *= d ** (exp // 2)
            if exp % 2:
                core *= d
        d += 1
    core *= m
    return s, core


def canonical_sqrt(radicand):
    """sqrt(radicand) as an exact coefficient, in the canonical field of
    the squarefree core (so sqrt(8) and sqrt(2) share one field)."""
    radicand = Fraction(radicand)
    if not radicand:
        return Fraction(0)
    sign = 1 if radicand > 0 else -1
    # sqrt(p/q) = sqrt(p*q)/q
    n = abs(radicand.numerator) * radicand.denominator
    s, core = _squarefree_core(n)
    scale = Fraction(s, radicand.denominator)
    if core == 1 and sign > 0:
        return scale
    field = sqrt_field(sign * core)
    return field.generator() * scale


def sqrt_field(radicand, label=None):
    """Q(sqrt(radicand)) with its positive (or upper-half-plane) root.

    Prefer :func:`canonical_sqrt` unless the radicand is already a
    squarefree integer; distinct radicands give distinct fields.
    """
    radicand = Fraction(radicand)
    if not radicand:
        raise ValueError("radicand must be nonzero")
    if radicand > 0 and _fraction_sqrt(radicand) is not None:
        raise ValueError("radicand is a rational square; no field needed")
    minpoly = [-radicand, Fraction(0), Fraction(1)]
    if radicand > 0:
        hi = radicand if radicand >= 1 else Fraction(1)
        region = (Fraction(0), hi)
    else:
        mag = -radicand
        hi = mag if mag >= 1 else Fraction(1)
        region = ((Fraction(0), Fraction(0)), (Fraction(0), hi))
    name = label or f"sqrt({radicand})"
    return NumberField(minpoly, region, label=name)


class AlgebraicNumber:
    """An element of a :class:`NumberField`, as a coefficient vector."""

    __slots__ = ("field", "vec")

    def __init__(self, field, vec):
        self.field = field
        self.vec = vec

    def __bool__(self):
        return any(self.vec)

    def _coerce(self, other):
        if isinstance(other, AlgebraicNumber):
            if other.field == self.field:
                return other
            raise CoefficientError("mixed number fields")
        if isinstance(other, (int, Fraction)):
            return self.field.lift(other)
        if isinstance(other, ParamPoly):
            raise UnsupportedSymbolic(
                "free constants over algebraic coefficients are not supported"
            )
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return AlgebraicNumber(self.field, tuple(a + b for a, b in zip(self.vec, o.vec)))

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicNumber(self.field, tuple(-a for a in self.vec))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        prod = pmul(list(self.vec), list(o.vec))
        return self.field.element(prod)

    __rmul__ = __mul__

    def inverse(self):
        if not self:
            raise ZeroDivisionError("inverse of zero algebraic number")
        # extended Euclid: u*vec + v*minpoly = 1 (gcd is 1, minpoly irreducible)
        a, b = list(self.field.minpoly), pstrip(list(self.vec))
        r0, r1 = a, b
        s0, s1 = [], [Fraction(1)]
        while pdeg(r1) > 0:
            q, r = pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, pmul(q, s1))
        lead = r1[0]
        inv = [c / lead for c in s1]
        return self.field.element(inv)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.lift(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.vec[0] == other and not any(self.vec[1:])
        if isinstance(other, AlgebraicNumber):
            return self.field == other.field and self.vec == other.vec
        return NotImplemented

    def __hash__(self):
        if not any(self.vec[1:]):
            return hash(self.vec[0])
        return hash((self.field, self.vec))

    def rational_value(self):
        """The element as a Fraction if it lies in Q, else None."""
        if any(self.vec[1:]):
            return None
        return self.vec[0]

    def approx(self):
        t = self.field.approx()
        acc = 0.0 if not isinstance(t, complex) else complex(0)
        for c in reversed(self.vec):
            acc = acc * t + float(c)
        return acc

    def __repr__(self):
        parts = []
        g = self.field.label
        for i, c in enumerate(self.vec):
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
                continue
            power = g if i == 1 else f"{g}^{i}"
            if c == 1:
                parts.append(power)
            elif c == -1:
                parts.append(f"-{power}")
            else:
                parts.append(f"{c}*{power}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"

    __str__ = __repr__


def _poly_sub(a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else Fraction(0)
        y = b[i] if i < len(b) else Fraction(0)
        out.append(x - y)
    return pstrip(out)


# -- free-constant polynomials ----------------------------------------------


class ParamPoly:
    """Polynomial in one formal free constant over Q.

    Carries a free parameter (a resonance constant) through otherwise
    numeric series computations.  Division is only defined by units.
    """

    __slots__ = ("coeffs", "symbol")

    def __init__(self, coeffs, symbol="C"):
        coeffs = [Fraction(c) for c in coeffs]
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        self.coeffs = tuple(coeffs)
        self.symbol = symbol

    @classmethod
    def parameter(cls, symbol="C"):
        return cls([0, 1], symbol)

    def __bool__(self):
        return bool(self.coeffs)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def _coerce(self, other):
        if isinstance(other, ParamPoly):
            if other.coeffs and self.coeffs and other.symbol != self.symbol:
                raise CoefficientError("mixed free-constant symbols")
            return other
        if isinstance(other, (int, Fraction)):
            return ParamPoly([Fraction(other)], self.symbol)
        if isinstance(other, AlgebraicNumber):
            raise UnsupportedSymbolic(
                "free constants over algebraic coefficients are not supported"
            )
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        c = [
            (self.coeffs[i] if i < len(self.coeffs) else 0)
            + (o.coeffs[i] if i < len(o.coeffs) else 0)
            for i in range(n)
        ]
        return ParamPoly(c, self.symbol if self.coeffs else o.symbol)

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly([-c for c in self.coeffs], self.symbol)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.coeffs or not o.coeffs:
            return ParamPoly([], self.symbol)
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(o.coeffs):
                out[i + j] += a * b
        return ParamPoly(out, self.symbol if self.coeffs else o.symbol)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError
            return ParamPoly([c / other for c in self.coeffs], self.symbol)
        if isinstance(other, ParamPoly):
            if other.degree == 0 and other.coeffs:
                return self / other.coeffs[0]
            raise UnsupportedSymbolic(
                "division by a free-constant polynomial of positive degree"
            )
        return NotImplemented

    def __rtruediv__(self, other):
        if self.degree == 0 and self.coeffs:
            return ParamPoly([Fraction(other) / self.coeffs[0]], self.symbol)
        raise UnsupportedSymbolic("inverse of a free constant")

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if self.degree == 0 and self.coeffs:
                return ParamPoly([self.coeffs[0] ** n], self.symbol)
            raise UnsupportedSymbolic("negative power of a free constant")
        result = ParamPoly([1], self.symbol)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            if not self.coeffs:
                return other == 0
            return self.degree == 0 and self.coeffs[0] == other
        if isinstance(other, ParamPoly):
            return self.coeffs == other.coeffs and (
                not self.coeffs or not other.coeffs or self.symbol == other.symbol
            )
        return NotImplemented

    def __hash__(self):
        if len(self.coeffs) <= 1:
            return hash(self.coeffs[0] if self.coeffs else Fraction(0))
        return hash((self.coeffs, self.symbol))

    def substitute(self, value):
        acc = as_coefficient(0)
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                power = self.symbol if i == 1 else f"{self.symbol}^{i}"
                if c == 1:
                    parts.append(power)
                elif c == -1:
                    parts.append(f"-{power}")
                else:
                    parts.append(f"{c}*{power}")
        body = " + ".join(parts).replace("+ -", "- ")
        return body if len(parts) == 1 else f"({body})"

    __str__ = __repr__


def substitute_parameter(c, value):
    """Replace the free constant in a coefficient by ``value``."""
    if isinstance(c, ParamPoly):
        return c.substitute(as_coefficient(value))
    return c


def has_parameter(c) -> bool:
    return isinstance(c, ParamPoly) and c.degree >= 1


# -- root finding over the supported domains --------------------------------


class RootSearchResult:
    """Roots of a univariate polynomial found inside a coefficient domain.

    ``roots`` is a list of ``(root, multiplicity)``; ``unresolved`` is the
    rational-root-free (or otherwise unreachable) cofactor, None when the
    polynomial split completely.
    """

    def __init__(self, roots, unresolved=None):
        self.roots = roots
        self.unresolved = unresolved

    @property
    def complete(self):
        return self.unresolved is None


def poly_roots(coeffs, mode="rational"):
    """Roots of ``sum coeffs[i]*t^i`` inside the coefficient domain.

    ``mode='rational'`` keeps the search in the current field (Q or the
    common number field of the coefficients); ``mode='algebraic'`` adjoins
    roots of certified irreducible factors over Q, and linear/quadratic
    factors over an existing quadratic field.
    """
    coeffs = [as_coefficient(c) for c in pstrip(list(coeffs))]
    if any(has_parameter(c) for c in coeffs):
        raise UnsupportedSymbolic("root search with free-constant coefficients")
    if pdeg(coeffs) < 1:
        return RootSearchResult([])
    field = None
    for c in coeffs:
        if isinstance(c, AlgebraicNumber):
            if field is not None and c.field != field:
                raise CoefficientError("mixed number fields in one polynomial")
            field = c.field
    if field is None:
        return _roots_over_q([Fraction(c) for c in coeffs], mode)
    return _roots_over_field(coeffs, field, mode)


def _roots_over_q(coeffs, mode):
    from .polyutils import rational_roots

    roots, remainder = rational_roots(coeffs)
    roots = [(Fraction(r), m) for r, m in roots]
    if pdeg(remainder) < 1:
        return RootSearchResult(roots)
    if mode != "algebraic":
        return RootSearchResult(roots, unresolved=remainder)
    try:
        factors = irreducible_factors(remainder)
    except FactorizationLimit:
        return RootSearchResult(roots, unresolved=remainder)
    leftover = []
    for factor, mult in factors:
        if pdeg(factor) == 1:
            roots.append((-factor[0] / factor[1], mult))
            continue
        adjoined = _adjoin_roots(factor)
        if adjoined is None:
            leftover.append((factor, mult))
            continue
        for r in adjoined:
            roots.append((r, mult))
    unresolved = None
    if leftover:
        unresolved = [Fraction(1)]
        for factor, mult in leftover:
            for _ in range(mult):
                unresolved = pmul(unresolved, factor)
    return RootSearchResult(roots, unresolved=unresolved)


def _adjoin_roots(factor):
    """All roots of an irreducible monic factor over Q as AlgebraicNumbers.

    Quadratics express both roots inside the canonical field of their
    discriminant's square root, so conjugates share one field; real roots
    of higher degree get one embedding each by Sturm isolation.  Returns
    None when some root cannot be represented.
    """
    deg = pdeg(factor)
    if deg == 2:
        p, q = factor[1], factor[0]
        disc = p * p - 4 * q
        s = canonical_sqrt(disc)
        return [(-p + s) / 2, (-p - s) / 2]
    intervals = isolate_real_roots(factor)
    roots = []
    for k, (lo, hi) in enumerate(intervals):
        field = NumberField(factor, (lo, hi), label=f"r{k}_deg{deg}")
        roots.append(field.generator())
    if len(intervals) == deg:
        return roots
    return None


def _roots_over_field(coeffs, field, mode):
    lifted = [c if isinstance(c, AlgebraicNumber) else field.lift(c) for c in coeffs]
    roots = []
    poly = lifted
    # peel linear factors by direct search: rational candidates embed in
    # the field, and in-field roots show up through exact division tests
    changed = True
    while pdeg(poly) >= 1 and changed:
        changed = False
        root = _linear_root_in_field(poly, field)
        if root is not None:
            mult = 0
            while pdeg(poly) >= 1 and not peval(poly, root):
                poly = pdivmod(poly, [-root, field.lift(1)])[0]
                mult += 1
            roots.append((root, mult))
            changed = True
    if pdeg(poly) < 1:
        return RootSearchResult(roots)
    if pdeg(poly) == 2:
        found = _quadratic_roots_in_field(poly, field, mode)
        if found is not None:
            return RootSearchResult(roots + [(r, 1) for r in found])
    return RootSearchResult(roots, unresolved=poly)


def _linear_root_in_field(poly, field):
    """One root of ``poly`` lying in the field, found through the rational
    roots of the norm-like rational polynomial obtained by zero-testing
    candidates; degree-1 polynomials are solved directly."""
    poly = pstrip(poly)
    if pdeg(poly) == 1:
        return -poly[0] / poly[1]
    # rational candidates: roots of the polynomial of rational parts when
    # all coefficients are rational-valued
    rational = []
    for c in poly:
        r = c.rational_value()
        if r is None:
            return _field_root_via_quadratic(poly, field)
        rational.append(r)
    from .polyutils import rational_roots

    roots, _rem = rational_roots(rational)
    if roots:
        return field.lift(roots[0][0])
    return _field_root_via_quadratic(poly, field)


def _field_root_via_quadratic(poly, field):
    if pdeg(poly) != 2:
        return None
    roots = _quadratic_roots_in_field(poly, field, mode="rational")
    if roots:
        return roots[0]
    return None


def _quadratic_roots_in_field(poly, field, mode):
    a, b, c = poly[2], poly[1], poly[0]
    disc = b * b - 4 * a * c
    s = _field_sqrt(disc, field)
    if s is None:
        return None
    two_a = 2 * a
    return [(-b + s) / two_a, (-b - s) / two_a]


def _field_sqrt(d, field):
    """sqrt of a field element inside the field, or None.

    Exact for rational-valued elements and for quadratic fields; deeper
    cases return None (the caller reports the branch unresolved).
    """
    if not d:
        return field.lift(0)
    r = d.rational_value()
    if r is not None:
        s = _fraction_sqrt(r)
        if s is not None:
            return field.lift(s)
        if field.degree == 2:
            # does sqrt(r) live in Q(theta) with theta^2 = m - p*theta ...?
            cand = _quadratic_sqrt(field, Fraction(r), Fraction(0))
            return cand
        return None
    if field.degree == 2:
        return _quadratic_sqrt(field, d.vec[0], d.vec[1])
    return None


def _quadratic_sqrt(field, a, b):
    """sqrt(a + b*theta) in a quadratic field, if it exists there.

    With theta^2 = -p*theta - q (minpoly t^2+pt+q), write the square root
    as u + v*theta and solve the two rational equations exactly.
    """
    q, p = field.minpoly[0], field.minpoly[1]
    # (u + v t)^2 = u^2 + 2uv t + v^2 t^2 = (u^2 - q v^2) + (2uv - p v^2) t
    # need: u^2 - q v^2 = a  and  2uv - p v^2 = b
    # case v = 0: u^2 = a
    s = _fraction_sqrt(a) if b == 0 else None
    if s is not None:
        return field.lift(s)
    # case v != 0: u = (b + p v^2) / (2 v); substitute into the first eq:
    # (b + p v^2)^2 / (4 v^2) - q v^2 = a
    # let w = v^2: (b + p w)^2 - 4 q w^2 - 4 a w = 0
    # (p^2 - 4q) w^2 + (2bp - 4a) w + b^2 = 0
    A = p * p - 4 * q
    B = 2 * b * p - 4 * a
    C = b * b
    for w in _rational_quadratic_roots(A, B, C):
        if w <= 0:
            continue
        v = _fraction_sqrt(w)
        if v is None:
            continue
        for vv in (v, -v):
            u = (b + p * w) / (2 * vv)
            cand = field.element([u, vv])
            if cand * cand == field.element([a, b]):
                return cand
    return None


def _rational_quadratic_roots(A, B, C):
    if not A:
        if not B:
            return []
        return [-C / B]
    disc = B * B - 4 * A * C
    s = _fraction_sqrt(disc)
    if s is None:
        return []
    return [(-B + s) / (2 * A), (-B - s) / (2 * A)]
