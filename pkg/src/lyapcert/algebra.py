"""Exact sparse bivariate polynomials over the rationals.

Coefficients are :class:`fractions.Fraction`; nothing here ever rounds.
A polynomial is a mapping ``(i, j) -> c`` meaning ``c * x^i * y^j`` with no
zero coefficients stored, so structural equality is mathematical equality.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple, Union

Rational = Fraction
Exponent = Tuple[int, int]
Scalar = Union[int, Fraction]


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"refusing inexact/boolean coefficient {value!r}")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot convert {type(value).__name__} to Fraction")


def format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class GaussianRational:
    """Complex number with rational real and imaginary parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", as_rational(self.re))
        object.__setattr__(self, "im", as_rational(self.im))

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        return cls(as_rational(value), Fraction(0))

    def __add__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GaussianRational.coerce(other))

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        result, base = GaussianRational(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            o = GaussianRational.coerce(other)
            return self.re == o.re and self.im == o.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __str__(self):
        return f"{format_rational(self.re)} + {format_rational(self.im)}*i"


I = GaussianRational(0, 1)


class Poly:
    """Immutable sparse polynomial in ``x`` and ``y`` with rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Exponent, Scalar]] = None):
        clean: Dict[Exponent, Fraction] = {}
        for (i, j), c in (terms or {}).items():
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent ({i}, {j})")
            c = as_rational(c)
            if c:
                clean[(int(i), int(j))] = clean.get((i, j), Fraction(0)) + c
        self._terms = {e: c for e, c in clean.items() if c}
        self._hash = None

    # construction helpers
    @classmethod
    def const(cls, c: Scalar) -> "Poly":
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, i: int, j: int, c: Scalar = 1) -> "Poly":
        return cls({(i, j): c})

    @classmethod
    def _raw(cls, terms: Dict[Exponent, Fraction]) -> "Poly":
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @property
    def terms(self) -> Mapping[Exponent, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Exponent, Fraction]]:
        return iter(self._terms.items())

    def coeff(self, i: int, j: int) -> Fraction:
        return self._terms.get((i, j), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    @property
    def degree(self) -> Optional[int]:
        """Total degree, or ``None`` for the zero polynomial."""
        if not self._terms:
            return None
        return max(i + j for i, j in self._terms)

    @property
    def min_degree(self) -> Optional[int]:
        if not self._terms:
            return None
        return min(i + j for i, j in self._terms)

    def is_homogeneous(self) -> bool:
        return len({i + j for i, j in self._terms}) <= 1

    # arithmetic
    def __add__(self, other):
        other = _coerce_poly(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = _coerce_poly(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce_poly(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _coerce_poly(other)
        if other is None:
            return NotImplemented
        out: Dict[Exponent, Fraction] = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                e = (i1 + i2, j1 + j2)
                out[e] = out.get(e, 0) + c1 * c2
        return Poly._raw({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result, base = Poly.const(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c: Scalar) -> "Poly":
        c = as_rational(c)
        if not c:
            return Poly()
        return Poly._raw({e: c * v for e, v in self._terms.items()})

    def __eq__(self, other):
        other = _coerce_poly(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # calculus
    def diff_x(self) -> "Poly":
        return Poly._raw({(i - 1, j): c * i for (i, j), c in self._terms.items() if i})

    def diff_y(self) -> "Poly":
        return Poly._raw({(i, j - 1): c * j for (i, j), c in self._terms.items() if j})

    # evaluation
    def __call__(self, x, y):
        return evaluate(self, (x, y))

    def substitute_line(self, t_is_y: bool = True) -> Tuple[Fraction, ...]:
        """Coefficients (ascending in ``t``) of ``p(1, t)``, or of ``p(t, 1)``."""
        if not self._terms:
            return ()
        idx = 1 if t_is_y else 0
        n = max(e[idx] for e in self._terms)
        out = [Fraction(0)] * (n + 1)
        for e, c in self._terms.items():
            out[e[idx]] += c
        return tuple(out)

    def to_float_terms(self):
        return [(float(c), i, j) for (i, j), c in self._terms.items()]

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda t: (-(t[0][0] + t[0][1]), -t[0][0]))

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)!r})"


def _coerce_poly(value) -> Optional[Poly]:
    if isinstance(value, Poly):
        return value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return Poly.const(value)
    return None


X = Poly.monomial(1, 0)
Y = Poly.monomial(0, 1)
ONE = Poly.const(1)
ZERO = Poly()


def poly_arith(lhs: Poly, rhs: Poly, op: str) -> Poly:
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    raise ValueError(f"unknown operation {op!r}")


def _power_table(value, n: int) -> list:
    table = [1]
    for _ in range(n):
        table.append(table[-1] * value)
    return table


def evaluate(p: Poly, point):
    """Exact value of ``p`` at ``point``.

    Accepts rationals, Gaussian rationals or plain floats; the result type
    follows the inputs.
    """
    x, y = point
    if p.is_zero():
        return GaussianRational(0) if isinstance(x, GaussianRational) or isinstance(y, GaussianRational) else Fraction(0)
    if isinstance(x, GaussianRational) or isinstance(y, GaussianRational):
        x, y = GaussianRational.coerce(x), GaussianRational.coerce(y)
        total = GaussianRational(0)
    elif isinstance(x, float) or isinstance(y, float):
        total = 0.0
    else:
        x, y = as_rational(x), as_rational(y)
        total = Fraction(0)
    dx = max(i for i, _ in p._terms)
    dy = max(j for _, j in p._terms)
    px, py = _power_table(x, dx), _power_table(y, dy)
    if isinstance(total, float):
        for (i, j), c in p._terms.items():
            total += float(c) * px[i] * py[j]
        return total
    for (i, j), c in p._terms.items():
        total = total + c * px[i] * py[j]
    return total


def gradient(p: Poly) -> Tuple[Poly, Poly]:
    return p.diff_x(), p.diff_y()


def homogeneous_decompose(p: Poly) -> Dict[int, Poly]:
    parts: Dict[int, Dict[Exponent, Fraction]] = {}
    for (i, j), c in p.items():
        parts.setdefault(i + j, {})[(i, j)] = c
    return {d: Poly._raw(t) for d, t in sorted(parts.items())}


def lowest_part(p: Poly) -> Poly:
    parts = homogeneous_decompose(p)
    return parts[min(parts)] if parts else Poly()


def lie_derivative(V: Poly, field: Tuple[Poly, Poly]) -> Poly:
    gx, gy = gradient(V)
    return gx * field[0] + gy * field[1]


@dataclass(frozen=True)
class RationalFunction:
    """``num / den``; equality is decided by cross-multiplication."""

    num: Poly
    den: Poly = ONE

    def __post_init__(self):
        if self.den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")

    def __eq__(self, other):
        if isinstance(other, Poly):
            other = RationalFunction(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        raise TypeError("RationalFunction equality is not canonical; unhashable")

    def __add__(self, other):
        if isinstance(other, Poly):
            other = RationalFunction(other)
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den,
                                self.den * other.den)

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def evaluate(self, point):
        d = evaluate(self.den, point)
        return evaluate(self.num, point) / d

    def __str__(self):
        if self.den == ONE:
            return format_poly(self.num)
        return f"({format_poly(self.num)})/({format_poly(self.den)})"


def gradient_rational(W: RationalFunction) -> Tuple[RationalFunction, RationalFunction]:
    """Quotient rule with the shared denominator ``den**2``."""
    n, d = W.num, W.den
    den2 = d * d
    return (RationalFunction(n.diff_x() * d - n * d.diff_x(), den2),
            RationalFunction(n.diff_y() * d - n * d.diff_y(), den2))


def gradient_numerators(W: RationalFunction) -> Tuple[Poly, Poly]:
    gx, gy = gradient_rational(W)
    return gx.num, gy.num


def lie_derivative_rational(W: RationalFunction, field: Tuple[Poly, Poly]) -> RationalFunction:
    a, b = gradient_numerators(W)
    return RationalFunction(a * field[0] + b * field[1], W.den * W.den)


# ---------------------------------------------------------------------------
# text format: ``c*x^i*y^j`` terms joined by + / -

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_]\w*)|(\^)|(\*)|([+-]))")


def parse_poly(text: str) -> Poly:
    """Parse e.g. ``"1*x^4 + 1*y^4"`` or ``"-3/2*x*y^2 + 7"``."""
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial text")
    pos, tokens = 0, []
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"unexpected character {s[pos]!r} at {pos} in {text!r}")
        kind = m.lastindex
        tokens.append((kind, m.group(kind)))
        pos = m.end()
        while pos < len(s) and s[pos].isspace():
            pos += 1

    terms: Dict[Exponent, Fraction] = {}
    k = 0
    first = True
    while k < len(tokens):
        sign = 1
        if tokens[k][0] == 5:
            sign = -1 if tokens[k][1] == "-" else 1
            k += 1
        elif not first:
            raise ValueError(f"expected '+' or '-' between terms in {text!r}")
        first = False
        coeff, ex, ey = Fraction(sign), 0, 0
        expect_factor = True
        while k < len(tokens) and tokens[k][0] != 5:
            if not expect_factor:
                if tokens[k][0] != 4:
                    raise ValueError(f"expected '*' in {text!r}")
                k += 1
                expect_factor = True
                continue
            kind, val = tokens[k]
            if kind == 1:
                coeff *= Fraction(val)
                k += 1
            elif kind == 2:
                if val not in ("x", "y"):
                    raise ValueError(f"unknown variable {val!r}; only x and y are allowed")
                k += 1
                power = 1
                if k < len(tokens) and tokens[k][0] == 3:
                    if k + 1 >= len(tokens) or tokens[k + 1][0] != 1 or "/" in tokens[k + 1][1]:
                        raise ValueError(f"bad exponent in {text!r}")
                    power = int(tokens[k + 1][1])
                    k += 2
                if val == "x":
                    ex += power
                else:
                    ey += power
            else:
                raise ValueError(f"unexpected token {val!r} in {text!r}")
            expect_factor = False
        if expect_factor:
            raise ValueError(f"dangling operator in {text!r}")
        terms[(ex, ey)] = terms.get((ex, ey), 0) + coeff
    return Poly(terms)


def format_poly(p: Poly) -> str:
    if p.is_zero():
        return "0"
    out = []
    for n, ((i, j), c) in enumerate(p.sorted_terms()):
        factors = [format_rational(abs(c))]
        if i:
            factors.append(f"x^{i}")
        if j:
            factors.append(f"y^{j}")
        body = "*".join(factors)
        if n == 0:
            out.append(body if c > 0 else f"-{body}")
        else:
            out.append(("+ " if c > 0 else "- ") + body)
    return " ".join(out)


_RATFUN = re.compile(r"^\s*\((.*)\)\s*/\s*\((.*)\)\s*$", re.S)


def parse_rational_function(text: str) -> RationalFunction:
    """``(num)/(den)`` or a bare polynomial (denominator 1)."""
    m = _RATFUN.match(text)
    if m and m.group(1).count("(") == 0 and m.group(2).count("(") == 0:
        return RationalFunction(parse_poly(m.group(1)), parse_poly(m.group(2)))
    return RationalFunction(parse_poly(text))


def poly_sum(polys: Iterable[Poly]) -> Poly:
    total = Poly()
    for p in polys:
        total = total + p
    return total
