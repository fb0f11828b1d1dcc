"""Catalog of planar polynomial vector fields with exact coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

from .algebra import ONE, Poly, RationalFunction, X, Y, evaluate, format_poly

Field = Tuple[Poly, Poly]


@dataclass(frozen=True)
class DecomposedField:
    """``f = f0 + f1`` stored as its two summands."""

    f0: Field
    f1: Field
    name: str = ""

    @property
    def full(self) -> Field:
        return (self.f0[0] + self.f1[0], self.f0[1] + self.f1[1])

    def swapped(self) -> "DecomposedField":
        return DecomposedField(self.f1, self.f0, f"{self.name} (swapped)")

    def evaluate(self, point, part: str = "full"):
        comps = {"full": self.full, "f0": self.f0, "f1": self.f1}[part]
        return tuple(evaluate(c, point) for c in comps)

    def to_dict(self):
        return {"name": self.name,
                "f0": [format_poly(c) for c in self.f0],
                "f1": [format_poly(c) for c in self.f1]}


@dataclass(frozen=True)
class SystemCatalogEntry:
    field: DecomposedField
    known_certificate: Optional[RationalFunction]
    provenance: str
    # "rational": the f0/f1 tangency-plus-descent checks apply;
    # "global" / "local": polynomial certificate checked at that scope
    certificate_kind: str = "global"
    float_lyapunov: Optional[object] = None
    description: str = ""


def paper_gradient_parts() -> Tuple[Poly, Poly]:
    """``a`` and ``b``: the numerators of the gradient of (x^4+y^4)/(x^2+y^2)."""
    a = 2 * X * (X**4 + 2 * X**2 * Y**2 - Y**4)
    b = 2 * Y * (-(X**4) + 2 * X**2 * Y**2 + Y**4)
    return a, b


def paper_lyapunov() -> RationalFunction:
    return RationalFunction(X**4 + Y**4, X**2 + Y**2)


def paper_system() -> DecomposedField:
    a, b = paper_gradient_parts()
    r2 = X**2 + Y**2
    return DecomposedField((-b, a), (-(r2 * a), -(r2 * b)), "paper")


def simple_system() -> DecomposedField:
    return DecomposedField((-X + X * Y, -Y), (Poly(), Poly()), "simple")


def linear_system() -> DecomposedField:
    return DecomposedField((-X, -Y), (Poly(), Poly()), "linear")


def bacciotti_rosier(lam, printed: bool = False) -> Tuple[DecomposedField, Poly]:
    """Rotation-plus-descent field parametrised by ``lam >= 0``.

    Returns the field and the polynomial candidate ``(x^2+y^2)^q (2x^2+y^2)^p``
    for ``lam = p/q``.  With ``printed=True`` the descent term keeps the sign
    pattern as typeset in the literature, ``2 lam y r - 2 y s`` in its second
    component; the default uses ``+ 2 y s``, which is minus ``r`` times the
    gradient direction of ``r * s^lam`` and is what makes the candidate work.
    """
    lam = Fraction(lam)
    if lam < 0:
        raise ValueError("lambda must be non-negative")
    r = X**2 + Y**2
    s = 2 * X**2 + Y**2
    gx = 4 * lam * X * r + 2 * X * s
    gy = 2 * lam * Y * r + (-2 if printed else 2) * Y * s
    f0 = (-2 * lam * Y * r - 2 * Y * s, 4 * lam * X * r + 2 * X * s)
    f1 = (-(r * gx), -(r * gy))
    p, q = lam.numerator, lam.denominator
    candidate = r**q * s**p
    label = f"br-{lam}" + ("-printed" if printed else "")
    return DecomposedField(f0, f1, label), candidate


def field_degree(field: DecomposedField):
    """``(deg f0, deg f1, deg f)``; ``None`` marks an identically zero part."""
    def deg(pair):
        ds = [c.degree for c in pair if not c.is_zero()]
        return max(ds) if ds else None
    return deg(field.f0), deg(field.f1), deg(field.full)


def _float_paper_w(x: float, y: float) -> float:
    r2 = x * x + y * y
    return 0.0 if r2 == 0.0 else (x**4 + y**4) / r2


def _float_simple_v(x: float, y: float) -> float:
    import math
    return math.log1p(x * x) + y * y


def _br_entry(lam) -> SystemCatalogEntry:
    field, cand = bacciotti_rosier(lam)
    return SystemCatalogEntry(field, RationalFunction(cand), "Bacciotti-Rosier family",
                              "global", description=f"Bacciotti-Rosier field, lambda = {Fraction(lam)}")


def get_system(name: str) -> SystemCatalogEntry:
    if name == "paper":
        return SystemCatalogEntry(paper_system(), paper_lyapunov(), "degree-7 counterexample",
                                  "rational", _float_paper_w,
                                  "degree-7 GAS field with no local analytic Lyapunov function")
    if name == "simple":
        return SystemCatalogEntry(simple_system(), RationalFunction(X**2 + Y**2),
                                  "xdot = -x + xy, ydot = -y", "local", _float_simple_v,
                                  "quadratic field, GAS via log(1+x^2)+y^2; x^2+y^2 is only local")
    if name == "linear":
        return SystemCatalogEntry(linear_system(), RationalFunction(X**2 + Y**2),
                                  "linear contraction", "global",
                                  description="stable linear control system")
    if name.startswith("br-"):
        try:
            lam = Fraction(name[3:])
        except (ValueError, ZeroDivisionError):
            raise KeyError(name) from None
        if lam < 0:
            raise KeyError(name)
        return _br_entry(lam)
    raise KeyError(name)


CATALOG_NAMES = ("paper", "simple", "linear", "br-0", "br-1", "br-1/2")


def catalog() -> Dict[str, SystemCatalogEntry]:
    return {n: get_system(n) for n in CATALOG_NAMES}


def float_field(field: Field):
    """Compile a polynomial field to a fast float callable ``(x, y) -> (u, v)``."""
    tu, tv = field[0].to_float_terms(), field[1].to_float_terms()

    def f(x: float, y: float):
        u = 0.0
        for c, i, j in tu:
            u += c * x**i * y**j
        v = 0.0
        for c, i, j in tv:
            v += c * x**i * y**j
        return u, v

    return f


def float_function(rf: RationalFunction):
    tn, td = rf.num.to_float_terms(), rf.den.to_float_terms()

    def w(x: float, y: float) -> float:
        n = sum(c * x**i * y**j for c, i, j in tn)
        d = sum(c * x**i * y**j for c, i, j in td)
        return 0.0 if d == 0.0 else n / d

    return w
