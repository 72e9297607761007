"""Differential expression towers over Q(x).

A :class:`Tower` holds an ordered list of generators, each a formal
integral ``(int f)``, an exponential of an integral ``(exp (int f))`` or an
algebraic root ``(root p k)``; arguments live over the earlier part of the
tower.  Elements are fractions of polynomials in the generators with
Q(x)-coefficients.  Differentiation is total and closed by construction:
``d(int f) = f`` and ``d(exp (int f)) = f * exp (int f)`` hold exactly.

Integrals are never evaluated (``int`` of a rational *constant* folds to
``c*x``, which differentiation verifies trivially); zero-testing is
structural on the normal form, with generators treated as independent.
An element reports which generators it involves so callers can flag
verdicts that silently rely on that independence.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .ratfunc import RatFunc


class LiouvilleError(ValueError):
    pass


INT, EXPINT, ROOT = "int", "expint", "root"


@dataclass
class Generator:
    kind: str
    arg: object = None  # Element (int/expint)
    minpoly: tuple = None  # monic tuple of Elements, low->high (root)
    branch: int = 0

    def label(self, index):
        return f"g{index}"


class Tower:
    """An ordered registry of generators; grows as expressions are built.

    Elements are immutable and their verification is pure, so built
    expressions can be checked in parallel; construction itself appends
    generators and is meant for a single thread (use one tower per
    independent candidate).
    """

    def __init__(self):
        self.gens = []

    # -- element constructors -------------------------------------------

    def rational(self, f):
        if isinstance(f, (int, Fraction)):
            f = RatFunc.const(f)
        return Element(self, {(): f} if f else {}, {(): RatFunc.const(1)})

    def x(self):
        return self.rational(RatFunc.x())

    def zero(self):
        return self.rational(0)

    def one(self):
        return self.rational(1)

    def _gen_element(self, index, power=1):
        key = tuple([0] * index + [power])
        return Element(self, {key: RatFunc.const(1)}, {(): RatFunc.const(1)})

    def integral(self, f):
        """The formal integral of ``f`` as an element.

        Rational multiples fold (int(q*f) = q*int(f)), integrals of
        rational constants evaluate to c*x, and the zero integrand gives 0.
        """
        f = self._as_element(f)
        if f.is_zero:
            return self.zero()
        c = f.rational_constant()
        if c is not None:
            return self.rational(RatFunc([Fraction(0), c]))
        scale, base = f._scalar_normal_form()
        for i, g in enumerate(self.gens):
            if g.kind == INT and g.arg == base:
                return self._gen_element(i) * self.rational(scale)
        self.gens.append(Generator(INT, arg=base))
        return self._gen_element(len(self.gens) - 1) * self.rational(scale)

    def exp_integral(self, f):
        """exp(int f) as an element; exp(int(-f)) reuses the inverse."""
        f = self._as_element(f)
        if f.is_zero:
            return self.one()
        for i, g in enumerate(self.gens):
            if g.kind == EXPINT:
                if g.arg == f:
                    return self._gen_element(i)
                if (g.arg + f).is_zero:
                    return self._gen_element(i, power=-1)
        self.gens.append(Generator(EXPINT, arg=f))
        return self._gen_element(len(self.gens) - 1)

    def algebraic_root(self, minpoly, branch=0):
        """A root of the monic polynomial with element coefficients."""
        coeffs = [self._as_element(c) for c in minpoly]
        while coeffs and coeffs[-1].is_zero:
            coeffs.pop()
        if len(coeffs) < 3:
            raise LiouvilleError("algebraic root needs degree >= 2")
        lead = coeffs[-1]
        coeffs = [c / lead for c in coeffs]
        key = tuple(coeffs)
        for i, g in enumerate(self.gens):
            if g.kind == ROOT and g.minpoly == key and g.branch == branch:
                return self._gen_element(i)
        self.gens.append(Generator(ROOT, minpoly=key, branch=branch))
        return self._gen_element(len(self.gens) - 1)

    def _as_element(self, v):
        if isinstance(v, Element):
            if v.tower is not self:
                raise LiouvilleError("elements of different towers")
            return v
        if isinstance(v, (int, Fraction, RatFunc)):
            return self.rational(v)
        raise LiouvilleError(f"not a tower element: {v!r}")

    def _derivative_of_gen(self, index):
        g = self.gens[index]
        if g.kind == INT:
            return g.arg
        if g.kind == EXPINT:
            return g.arg * self._gen_element(index)
        theta = self._gen_element(index)
        num = self.zero()
        dpoly = self.zero()
        for i, c in enumerate(g.minpoly):
            num = num + c.differentiate() * theta**i
            if i >= 1:
                dpoly = dpoly + self.rational(i) * c * theta ** (i - 1)
        return -(num / dpoly)


def _pad(key, n):
    return tuple(key) + (0,) * (n - len(key))


def _trim(key):
    key = list(key)
    while key and key[-1] == 0:
        key.pop()
    return tuple(key)


def _dict_add(a, b):
    out = dict(a)
    for k, v in b.items():
        if k in out:
            s = out[k] + v
            if s:
                out[k] = s
            else:
                del out[k]
        else:
            out[k] = v
    return out


def _dict_neg(a):
    return {k: -v for k, v in a.items()}


def _dict_mul(a, b):
    out = {}
    for k1, v1 in a.items():
        for k2, v2 in b.items():
            n = max(len(k1), len(k2))
            key = _trim(
                tuple(x + y for x, y in zip(_pad(k1, n), _pad(k2, n)))
            )
            prod = v1 * v2
            if key in out:
                s = out[key] + prod
                if s:
                    out[key] = s
                else:
                    del out[key]
            elif prod:
                out[key] = prod
    return out


class Element:
    """A fraction of generator-polynomials with Q(x) coefficients."""

    __slots__ = ("tower", "num", "den")

    def __init__(self, tower, num, den):
        if not den:
            raise ZeroDivisionError("zero denominator in tower element")
        self.tower = tower
        self.num = {k: v for k, v in num.items() if v}
        self.den = den
        self._normalize()

    def _normalize(self):
        num, den = self.num, self.den
        num = _reduce_roots(self.tower, num)
        den = _reduce_roots(self.tower, den)
        if not den:
            raise ZeroDivisionError("denominator reduced to zero")
        # cancel a common pure-monomial denominator where legal
        if len(den) == 1:
            (dkey, dval), = den.items()
            if dkey and all(self._laurent_ok(dkey, nkey) for nkey in num):
                num = {
                    _trim(
                        tuple(
                            a - b
                            for a, b in zip(
                                _pad(k, max(len(k), len(dkey))),
                                _pad(dkey, max(len(k), len(dkey))),
                            )
                        )
                    ): v / dval
                    for k, v in num.items()
                }
                den = {(): RatFunc.const(1)}
            elif not dkey:
                num = {k: v / dval for k, v in num.items()}
                den = {(): RatFunc.const(1)}
        self.num = num
        self.den = den

    def _laurent_ok(self, dkey, nkey):
        """Monomial division is allowed when no int/root generator would
        end up with a negative exponent (expint generators are units)."""
        n = max(len(dkey), len(nkey))
        for i, (d, m) in enumerate(zip(_pad(dkey, n), _pad(nkey, n))):
            if m - d < 0 and self.tower.gens[i].kind != EXPINT:
                return False
        return True

    # -- structure ----------------------------------------------------------

    @property
    def is_zero(self):
        return not self.num

    def rational_constant(self):
        """The value as a plain Fraction when the element is one."""
        r = self.rational_value()
        if r is None:
            return None
        return r.constant_value()

    def rational_value(self):
        """The element as a RatFunc when it involves no generators."""
        if any(k for k in self.num) or any(k for k in self.den):
            return None
        if not self.num:
            return RatFunc.const(0)
        return self.num.get((), RatFunc.const(0)) / self.den[()]

    def generators_used(self):
        used = set()
        for d in (self.num, self.den):
            for k in d:
                for i, e in enumerate(k):
                    if e:
                        used.add(i)
        return sorted(used)

    def _scalar_normal_form(self):
        """(q, base) with self = q * base, q in Q, base canonically scaled."""
        if not self.num:
            return Fraction(1), self
        key = min(self.num)
        lead = self.num[key]
        q = lead.num[-1] if lead.num else Fraction(1)
        if q == 1:
            return Fraction(1), self
        inv = self.tower.rational(Fraction(1) / q)
        return q, self * inv

    # -- arithmetic ------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Element):
            if other.tower is not self.tower:
                raise LiouvilleError("elements of different towers")
            return other
        if isinstance(other, (int, Fraction, RatFunc)):
            return self.tower.rational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        num = _dict_add(
            _dict_mul(self.num, o.den), _dict_mul(o.num, self.den)
        )
        return Element(self.tower, num, _dict_mul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return Element(self.tower, _dict_neg(self.num), self.den)

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
        return Element(
            self.tower,
            _dict_mul(self.num, o.num),
            _dict_mul(self.den, o.den),
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero:
            raise ZeroDivisionError("division by a zero tower element")
        return Element(
            self.tower,
            _dict_mul(self.num, o.den),
            _dict_mul(self.den, o.num),
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (self.tower.one() / self) ** (-n)
        out = self.tower.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).is_zero

    __hash__ = None  # value equality crosses structural forms

    # -- calculus -----------------------------------------------------------

    def differentiate(self):
        n = _dict_derivative(self.tower, self.num)
        d = _dict_derivative(self.tower, self.den)
        den_e = Element(self.tower, self.den, {(): RatFunc.const(1)})
        num_e = Element(self.tower, self.num, {(): RatFunc.const(1)})
        return (n * den_e - num_e * d) / (den_e * den_e)

    # -- text ----------------------------------------------------------------

    def to_sexpr(self):
        return element_sexpr(self)

    def __str__(self):
        return element_sexpr(self)

    def __repr__(self):
        return f"Element({element_sexpr(self)})"


def _dict_derivative(tower, d):
    total = tower.zero()
    for key, coeff in d.items():
        mono = Element(tower, {key: RatFunc.const(1)}, {(): RatFunc.const(1)})
        total = total + Element(
            tower, {key: coeff.derivative()}, {(): RatFunc.const(1)}
        )
        for i, e in enumerate(key):
            if not e:
                continue
            lowered = list(_pad(key, len(tower.gens)))
            lowered[i] -= 1
            lower_mono = Element(
                tower,
                {_trim(tuple(lowered)): coeff * Fraction(e)},
                {(): RatFunc.const(1)},
            )
            total = total + lower_mono * tower._derivative_of_gen(i)
    return total


def _reduce_roots(tower, d):
    """Rewrite root-generator powers past their degree via the minimal
    polynomial; returns a plain dict (the rewrite never adds denominators
    because minimal polynomials are stored monic)."""
    pending = dict(d)
    out = {}
    guard = 0
    while pending:
        guard += 1
        if guard > 10000:
            raise LiouvilleError("root reduction did not terminate")
        key, coeff = pending.popitem()
        if not coeff:
            continue
        bad = None
        for i, e in enumerate(key):
            if e and i < len(tower.gens) and tower.gens[i].kind == ROOT:
                deg = len(tower.gens[i].minpoly) - 1
                if e >= deg:
                    bad = (i, deg)
                    break
        if bad is None:
            if key in out:
                s = out[key] + coeff
                if s:
                    out[key] = s
                else:
                    del out[key]
            else:
                out[key] = coeff
            continue
        i, deg = bad
        rest = list(_pad(key, max(len(key), i + 1)))
        rest[i] -= deg
        rest_key = _trim(tuple(rest))
        # g^deg = -(m_0 + ... + m_{deg-1} g^{deg-1}); minpoly coefficients
        # are elements with trivial denominators by construction here
        for j, m in enumerate(tower.gens[i].minpoly[:-1]):
            if m.is_zero:
                continue
            mval = m.rational_value()
            if mval is None:
                raise LiouvilleError(
                    "root reduction needs rational-function minimal polynomials"
                )
            up = list(_pad(rest_key, max(len(rest_key), i + 1)))
            up[i] += j
            piece_key = _trim(tuple(up))
            piece = -(coeff * mval)
            if piece_key in pending:
                s = pending[piece_key] + piece
                if s:
                    pending[piece_key] = s
                else:
                    del pending[piece_key]
            elif piece:
                pending[piece_key] = piece
    return out


# -- serialization --------------------------------------------------------------


def gen_sexpr(tower, index):
    g = tower.gens[index]
    if g.kind == INT:
        return f"(int {element_sexpr(g.arg)})"
    if g.kind == EXPINT:
        return f"(exp (int {element_sexpr(g.arg)}))"
    coeffs = " ".join(element_sexpr(c) for c in g.minpoly)
    return f"(root (poly {coeffs}) {g.branch})"


def _ratfunc_sexpr(r: RatFunc):
    def poly(coeffs):
        parts = []
        for i, c in enumerate(coeffs):
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            elif c == 1:
                parts.append("x" if i == 1 else f"(^ x {i})")
            else:
                base = "x" if i == 1 else f"(^ x {i})"
                parts.append(f"(* {c} {base})")
        if not parts:
            return "0"
        if len(parts) == 1:
            return parts[0]
        return "(+ " + " ".join(parts) + ")"

    if r.den == (Fraction(1),):
        return poly(r.num)
    return f"(/ {poly(r.num)} {poly(r.den)})"


def _dict_sexpr(tower, d):
    if not d:
        return "0"
    parts = []
    for key in sorted(d, key=lambda k: (len(k), k)):
        coeff = d[key]
        factors = []
        ctext = _ratfunc_sexpr(coeff)
        if ctext != "1" or not any(key):
            factors.append(ctext)
        for i, e in enumerate(key):
            if not e:
                continue
            g = gen_sexpr(tower, i)
            factors.append(g if e == 1 else f"(^ {g} {e})")
        if len(factors) == 1:
            parts.append(factors[0])
        else:
            parts.append("(* " + " ".join(factors) + ")")
    if len(parts) == 1:
        return parts[0]
    return "(+ " + " ".join(parts) + ")"


def element_sexpr(e: Element) -> str:
    num = _dict_sexpr(e.tower, e.num)
    if len(e.den) == 1 and () in e.den and e.den[()] == RatFunc.const(1):
        return num
    return f"(/ {num} {_dict_sexpr(e.tower, e.den)})"


# -- parsing ----------------------------------------------------------------------


def parse_sexpr(text: str, tower: Tower = None) -> Element:
    """Parse the prefix text form back into a tower element."""
    if tower is None:
        tower = Tower()
    tokens = _tokenize(text)
    expr, rest = _parse_tokens(tokens, tower)
    if rest:
        raise LiouvilleError(f"trailing tokens: {rest!r}")
    return expr


def _tokenize(text):
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "()":
            out.append(ch)
            i += 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in "()":
                j += 1
            out.append(text[i:j])
            i = j
    return out


def _parse_tokens(tokens, tower):
    if not tokens:
        raise LiouvilleError("empty expression")
    tok = tokens[0]
    if tok != "(":
        rest = tokens[1:]
        if tok == "x":
            return tower.x(), rest
        try:
            return tower.rational(Fraction(tok)), rest
        except ValueError:
            raise LiouvilleError(f"unknown atom {tok!r}")
    op = tokens[1]
    if op == "root":
        return _parse_root(tokens[2:], tower)
    args = []
    rest = tokens[2:]
    while rest and rest[0] != ")":
        arg, rest = _parse_tokens(rest, tower)
        args.append(arg)
    if not rest:
        raise LiouvilleError("unbalanced parentheses")
    rest = rest[1:]
    if op == "+":
        out = tower.zero()
        for a in args:
            out = out + a
        return out, rest
    if op == "*":
        out = tower.one()
        for a in args:
            out = out * a
        return out, rest
    if op == "-":
        if len(args) == 1:
            return -args[0], rest
        out = args[0]
        for a in args[1:]:
            out = out - a
        return out, rest
    if op == "/":
        if len(args) != 2:
            raise LiouvilleError("(/ a b) takes two arguments")
        return args[0] / args[1], rest
    if op == "^":
        base, power = args
        n = power.rational_constant()
        if n is None or n.denominator != 1:
            raise LiouvilleError("(^ a n) needs an integer power")
        return base ** int(n), rest
    if op == "int":
        (arg,) = args
        return tower.integral(arg), rest
    if op == "exp":
        (arg,) = args
        # (exp (int f)) only: recover the integrand
        return _exp_of(arg, tower), rest
    if op == "poly":
        raise LiouvilleError("(poly ...) is only valid inside (root ...)")
    raise LiouvilleError(f"unknown operator {op!r}")


def _parse_root(tokens, tower):
    if tokens[:2] != ["(", "poly"]:
        raise LiouvilleError("(root ...) needs a (poly ...) coefficient list")
    rest = tokens[2:]
    coeffs = []
    while rest and rest[0] != ")":
        c, rest = _parse_tokens(rest, tower)
        coeffs.append(c)
    if not rest:
        raise LiouvilleError("unbalanced parentheses in (poly ...)")
    rest = rest[1:]
    if not rest or rest[0] in "()":
        raise LiouvilleError("(root ...) needs a branch index")
    branch = int(rest[0])
    rest = rest[1:]
    if not rest or rest[0] != ")":
        raise LiouvilleError("unbalanced parentheses in (root ...)")
    return tower.algebraic_root(coeffs, branch=branch), rest[1:]


def _exp_of(arg, tower):
    """exp is only closed over integrals: match (exp (int f))."""
    # the argument element must be a pure integral generator combination
    if not arg.num or arg.den != {(): RatFunc.const(1)}:
        raise LiouvilleError("exp only applies to (int f) forms")
    if len(arg.num) != 1:
        raise LiouvilleError("exp only applies to a single (int f) form")
    (key, coeff), = arg.num.items()
    idxs = [i for i, e in enumerate(key) if e]
    if len(idxs) != 1 or key[idxs[0]] != 1:
        raise LiouvilleError("exp only applies to (int f) forms")
    i = idxs[0]
    if tower.gens[i].kind != INT:
        raise LiouvilleError("exp only applies to (int f) forms")
    c = coeff.constant_value()
    if c is None:
        raise LiouvilleError("exp of a non-constant multiple of an integral")
    return tower.exp_integral(tower.gens[i].arg * tower.rational(c))
