"""Univariate polynomials over Q and reduced rational functions."""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]


class PoleError(ZeroDivisionError):
    """A rational function was evaluated at a zero of its denominator."""

    def __init__(self, point, message: str | None = None):
        self.point = point
        super().__init__(message or f"pole at {point}")


def _frac(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class UniPolynomial:
    """Dense polynomial with Fraction coefficients, ascending degree.

    The zero polynomial has an empty coefficient tuple.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def _raw(cls, cs: list) -> UniPolynomial:
        while cs and cs[-1] == 0:
            cs.pop()
        obj = object.__new__(cls)
        obj.coeffs = tuple(cs)
        return obj

    @classmethod
    def constant(cls, c: Scalar) -> UniPolynomial:
        return cls((c,))

    @classmethod
    def x(cls) -> UniPolynomial:
        return cls((0, 1))

    @classmethod
    def monomial(cls, k: int, c: Scalar = 1) -> UniPolynomial:
        return cls([0] * k + [c])

    @classmethod
    def from_roots(cls, roots: Iterable[Scalar]) -> UniPolynomial:
        """Monic polynomial with the given roots: prod (x - r)."""
        out = cls.constant(1)
        for r in roots:
            out = out * cls((-_frac(r), 1))
        return out

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = UniPolynomial.constant(other)
        if not isinstance(other, UniPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"UniPolynomial({[str(c) for c in self.coeffs]})"

    def __neg__(self):
        return UniPolynomial._raw([-c for c in self.coeffs])

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = UniPolynomial.constant(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] += c
        return UniPolynomial._raw(out)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = UniPolynomial.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return UniPolynomial()
            return UniPolynomial._raw([c * other for c in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPolynomial()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return UniPolynomial._raw(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = UniPolynomial.constant(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def divmod(self, other: UniPolynomial) -> tuple[UniPolynomial, UniPolynomial]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        lead = other.leading
        if len(rem) - 1 < db:
            return UniPolynomial(), self
        quot = [Fraction(0)] * (len(rem) - db)
        bc = other.coeffs
        for k in range(len(rem) - 1 - db, -1, -1):
            c = rem[k + db] / lead
            quot[k] = c
            if c:
                for j in range(db + 1):
                    rem[k + j] -= c * bc[j]
        return UniPolynomial._raw(quot), UniPolynomial._raw(rem[:db])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other: UniPolynomial) -> UniPolynomial:
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self) -> UniPolynomial:
        if self.is_zero():
            return self
        lead = self.leading
        return UniPolynomial._raw([c / lead for c in self.coeffs])

    def __call__(self, x):
        acc = Fraction(0) if isinstance(x, (int, Fraction)) else 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose_linear(self, a: Scalar, b: Scalar) -> UniPolynomial:
        """Substitute x -> a*x + b."""
        lin = UniPolynomial((b, a))
        out = UniPolynomial()
        for c in reversed(self.coeffs):
            out = out * lin + c
        return out

    def content(self) -> Fraction:
        """Positive rational c with self/c primitive in Z[x]."""
        if not self.coeffs:
            return Fraction(0)
        from math import gcd, lcm

        num = reduce(gcd, (c.numerator for c in self.coeffs))
        den = reduce(lcm, (c.denominator for c in self.coeffs))
        return Fraction(abs(num), den)

    def format(self, var: str = "N") -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            neg = c < 0
            a = -c if neg else c
            if k == 0:
                body = str(a)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                if a == 1:
                    body = mono
                elif a.denominator == 1:
                    body = f"{a}{mono}"
                else:
                    body = f"({a}){mono}"
            terms.append((neg, body))
        out = ("-" if terms[0][0] else "") + terms[0][1]
        for neg, body in terms[1:]:
            out += (" - " if neg else " + ") + body
        return out

    def __str__(self):
        return self.format()


def poly_gcd(a: UniPolynomial, b: UniPolynomial) -> UniPolynomial:
    """Monic gcd (zero if both are zero)."""
    a, b = a.monic(), b.monic()
    while not b.is_zero():
        a, b = b, (a % b).monic()
    return a.monic()


class RationalFunction:
    """num/den in lowest terms with a monic denominator.

    Structural equality of the canonical form is mathematical equality.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if not isinstance(num, UniPolynomial):
            num = UniPolynomial.constant(num)
        if den is None:
            den = UniPolynomial.constant(1)
        elif not isinstance(den, UniPolynomial):
            den = UniPolynomial.constant(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = num, UniPolynomial.constant(1)
            return
        if den.degree > 0:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num.exact_div(g), den.exact_div(g)
        lead = den.leading
        if lead != 1:
            num, den = num * (1 / lead), den * (1 / lead)
        self.num, self.den = num, den

    @classmethod
    def _reduced(cls, num: UniPolynomial, den: UniPolynomial) -> RationalFunction:
        obj = object.__new__(cls)
        obj.num, obj.den = num, den
        return obj

    @classmethod
    def x(cls) -> RationalFunction:
        return cls(UniPolynomial.x())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalFunction(other)
        if isinstance(other, UniPolynomial):
            other = RationalFunction(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num.coeffs, self.den.coeffs))

    def __repr__(self):
        return f"RationalFunction({self})"

    @staticmethod
    def _coerce(other) -> RationalFunction:
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (int, Fraction, UniPolynomial)):
            return RationalFunction(other)
        return NotImplemented

    def __neg__(self):
        return RationalFunction._reduced(-self.num, self.den)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        g = poly_gcd(self.den, other.den)
        a = self.den.exact_div(g)
        b = other.den.exact_div(g)
        return RationalFunction(self.num * b + other.num * a, a * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return RationalFunction(0)
            return RationalFunction._reduced(self.num * other, self.den)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return RationalFunction(0)
        # cross-cancel first to keep intermediate degrees small
        g1 = poly_gcd(self.num, other.den)
        g2 = poly_gcd(other.num, self.den)
        n = self.num.exact_div(g1) * other.num.exact_div(g2)
        d = self.den.exact_div(g2) * other.den.exact_div(g1)
        return RationalFunction(n, d)

    __rmul__ = __mul__

    def inverse(self) -> RationalFunction:
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return RationalFunction._reduced(self.num * (1 / Fraction(other)), self.den)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RationalFunction._reduced(self.num ** k, self.den ** k)

    def evaluate(self, at: Scalar) -> Fraction:
        at = _frac(at)
        d = self.den(at)
        if d == 0:
            raise PoleError(at)
        return self.num(at) / d

    __call__ = evaluate

    def compose_linear(self, a: Scalar, b: Scalar) -> RationalFunction:
        """Substitute x -> a*x + b (a nonzero)."""
        return RationalFunction(self.num.compose_linear(a, b), self.den.compose_linear(a, b))

    def format(self, var: str = "N") -> str:
        """Display form with integer coefficients where possible.

        The canonical form keeps a monic denominator; for display both parts
        are scaled by the positive constant that makes them coprime integer
        polynomials.
        """
        if self.den.degree == 0:
            return self.num.format(var)
        from math import gcd, lcm

        coeffs = self.num.coeffs + self.den.coeffs
        scale = Fraction(reduce(lcm, (c.denominator for c in coeffs), 1),
                         reduce(gcd, (c.numerator for c in coeffs), 0) or 1)
        scale = abs(scale)
        num = (self.num * scale).format(var)
        den = (self.den * scale).format(var)
        if len([c for c in self.num.coeffs if c]) > 1:
            num = f"({num})"
        return f"{num}/({den})"

    def __str__(self):
        return self.format()

    def to_json(self) -> dict:
        return {
            "num": [f"{c.numerator}/{c.denominator}" for c in self.num.coeffs] or ["0/1"],
            "den": [f"{c.numerator}/{c.denominator}" for c in self.den.coeffs],
        }

    @classmethod
    def from_json(cls, obj: dict) -> RationalFunction:
        return cls(UniPolynomial(Fraction(s) for s in obj["num"]),
                   UniPolynomial(Fraction(s) for s in obj["den"]))


def rf_normalize(num: UniPolynomial, den: UniPolynomial) -> RationalFunction:
    """The unique reduced representative with monic denominator."""
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    return RationalFunction(num, den)


def evaluate(rf: RationalFunction | Scalar, at: Scalar) -> Fraction:
    if isinstance(rf, (int, Fraction)):
        return Fraction(rf)
    return rf.evaluate(at)


def expand_at_infinity(rf: RationalFunction, n_terms: int) -> tuple[int, list[Fraction]]:
    """Laurent expansion in 1/x: ``rf = x**lead * sum_k c_k x**(-k)``.

    Returns ``(lead, [c_0, ..., c_{n_terms-1}])`` with ``c_0 != 0`` unless rf is 0.
    """
    if rf.is_zero():
        return 0, [Fraction(0)] * n_terms
    lead = rf.num.degree - rf.den.degree
    # work with reversed coefficient lists: t = 1/x
    p = list(reversed(rf.num.coeffs))
    q = list(reversed(rf.den.coeffs))
    out = []
    rem = p + [Fraction(0)] * (n_terms + len(q))
    for k in range(n_terms):
        c = rem[k] / q[0]
        out.append(c)
        if c:
            for j, qc in enumerate(q):
                rem[k + j] -= c * qc
    return lead, out


def poly_from_points(xs: Sequence[Fraction], ys: Sequence[Fraction]) -> UniPolynomial:
    """Newton interpolation through (xs[k], ys[k])."""
    n = len(xs)
    coef = [_frac(y) for y in ys]
    for level in range(1, n):
        for k in range(n - 1, level - 1, -1):
            coef[k] = (coef[k] - coef[k - 1]) / (xs[k] - xs[k - level])
    out = UniPolynomial.constant(coef[-1]) if n else UniPolynomial()
    for k in range(n - 2, -1, -1):
        out = out * UniPolynomial((-_frac(xs[k]), 1)) + coef[k]
    return out


def rational_interpolate(xs: Sequence[int], ys: Sequence[Fraction], slack: int = 1):
    """Lowest-degree rational function through the points, or None.

    Runs the extended Euclidean algorithm on ``(prod(x - xs), interpolant)``
    and keeps the candidate of least total degree.  The candidate is only
    accepted when it leaves at least ``slack`` points unconstrained, i.e.
    ``deg num + deg den <= len(xs) - 1 - slack``.
    """
    n = len(xs)
    xs = [_frac(x) for x in xs]
    modulus = UniPolynomial.from_roots(xs)
    interp = poly_from_points(xs, ys)
    r0, r1 = modulus, interp
    t0, t1 = UniPolynomial(), UniPolynomial.constant(1)
    best = None
    while True:
        if not t1.is_zero() and all(t1(x) != 0 for x in xs):
            total = max(r1.degree, 0) + t1.degree
            if best is None or total < best[0]:
                best = (total, r1, t1)
        if r1.is_zero():
            break
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        t0, t1 = t1, t0 - q * t1
    if best is None or best[0] > n - 1 - slack:
        return None
    cand = RationalFunction(best[1], best[2])
    for x, y in zip(xs, ys):
        if cand.evaluate(x) != y:
            return None
    return cand
