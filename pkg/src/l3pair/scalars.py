"""Exact scalar arithmetic: rationals and one-variable truncated polynomials.

Every computation in this package happens over the rationals (stdlib
``fractions.Fraction``, which keeps values in lowest terms with a positive
denominator) or over the local ring Q[t]/(t^(N+1)) used as deformation
coefficients.  Elements of the maximal ideal (t) of that ring are the
coefficients of Maurer-Cartan elements; products of N+1 of them vanish,
which is what makes all gauge series below finite.
"""

from __future__ import annotations

from fractions import Fraction

Rational = Fraction  # canonical exact scalar

DEFAULT_ORDER = 4  # default truncation for gauge experiments


def parse_rational(s: str) -> Fraction:
    """Parse "p/q" or "p" into an exact rational."""
    s = s.strip()
    if "/" in s:
        p, q = s.split("/", 1)
        return Fraction(int(p), int(q))
    return Fraction(int(s))


def format_rational(x) -> str:
    """Canonical string form: "p/q", or "p" when the denominator is 1."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d" % (x.numerator, x.denominator)


def rational_arith(a: Fraction, b: Fraction, op: str) -> Fraction:
    """Field operation on rationals; division by zero raises ZeroDivisionError."""
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        if b == 0:
            raise ZeroDivisionError("division of %s by zero" % (a,))
        return a / b
    raise ValueError("unknown operation %r" % (op,))


class TruncatedPoly:
    """Element of Q[t]/(t^(order+1)), stored as order+1 rational coefficients.

    Immutable.  Arithmetic truncates everything above t^order.  Rationals and
    ints mix in freely as constants of the same order.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs=()):
        if order < 0:
            raise ValueError("truncation order must be >= 0")
        cs = [Fraction(c) for c in coeffs]
        if len(cs) > order + 1:
            raise ValueError("got %d coefficients for order %d" % (len(cs), order))
        cs += [Fraction(0)] * (order + 1 - len(cs))
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):
        raise AttributeError("TruncatedPoly is immutable")

    @classmethod
    def zero(cls, order: int) -> "TruncatedPoly":
        return cls(order)

    @classmethod
    def const(cls, order: int, c) -> "TruncatedPoly":
        return cls(order, [Fraction(c)])

    @classmethod
    def gen(cls, order: int) -> "TruncatedPoly":
        """The generator t (zero when order is 0)."""
        if order == 0:
            return cls(0)
        return cls(order, [0, 1])

    def _coerce(self, other):
        if isinstance(other, TruncatedPoly):
            if other.order != self.order:
                raise ValueError(
                    "truncation orders differ: %d vs %d" % (self.order, other.order)
                )
            return other
        if isinstance(other, (int, Fraction)):
            return TruncatedPoly.const(self.order, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return TruncatedPoly(self.order, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return TruncatedPoly(self.order, [-a for a in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return TruncatedPoly(self.order, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = self.order
        out = [Fraction(0)] * (n + 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j in range(0, n + 1 - i):
                b = o.coeffs[j]
                if b:
                    out[i + j] += a * b
        return TruncatedPoly(n, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, TruncatedPoly) else other
        if not isinstance(o, TruncatedPoly) or o.order != self.order:
            return NotImplemented if not isinstance(other, (int, Fraction)) else False
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                terms.append(format_rational(c))
            else:
                tk = "t" if k == 1 else "t^%d" % k
                terms.append(tk if c == 1 else "%s*%s" % (format_rational(c), tk))
        body = " + ".join(terms) if terms else "0"
        return "TruncatedPoly(%d, %s)" % (self.order, body)

    def valuation(self) -> int:
        """Smallest k with a nonzero t^k coefficient; order+1 for the zero element."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return self.order + 1

    def in_ideal(self) -> bool:
        """Membership in the maximal ideal (t): no constant term."""
        return not self.coeffs[0]

    def coefficient(self, k: int) -> Fraction:
        return self.coeffs[k]

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [format_rational(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "TruncatedPoly":
        return cls(int(data["order"]), [parse_rational(c) for c in data["coeffs"]])


def poly_mul(a: TruncatedPoly, b: TruncatedPoly) -> TruncatedPoly:
    """Truncated Cauchy product; the operands must share one truncation order."""
    return a * b


def ideal_valuation(a: TruncatedPoly) -> int:
    return a.valuation()


def ideal_element(a: TruncatedPoly) -> TruncatedPoly:
    """Assert membership in the maximal ideal and return the element."""
    if not a.in_ideal():
        raise ValueError("constant term %s is nonzero" % (a.coeffs[0],))
    return a


def scalar_is_zero(c) -> bool:
    """Zero test uniform over Fraction / int / TruncatedPoly coefficients."""
    return not c


def format_scalar(c) -> object:
    """JSON form of a coefficient: rational string or truncated-poly dict."""
    if isinstance(c, TruncatedPoly):
        return c.to_json()
    return format_rational(c)
