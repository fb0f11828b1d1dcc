"""Exact verification of Lyapunov certificates.

Every passing check carries evidence that can be re-verified without the
inputs: either a residual polynomial that must be identically zero, or a
form together with a Sturm chain proving its sign.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .algebra import (Poly, RationalFunction, X, Y, evaluate, format_poly, format_rational,
                      gradient_numerators, homogeneous_decompose, lie_derivative,
                      lie_derivative_rational, lowest_part, parse_poly)
from .sturm import (SturmReport, homogeneous_nonnegative, homogeneous_positive_definite,
                    negative_directions, recheck_sturm, trim)
from .systems import DecomposedField, Field

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


@dataclass
class Evidence:
    """One machine-recheckable fact.

    kind ``zero``: ``poly`` must be the zero polynomial.
    kind ``positive_definite`` / ``nonnegative``: ``poly`` is a form with that
    sign; ``sturm`` holds the chain for ``poly(1, t)``.
    kind ``negative_at``: ``poly`` evaluates negative at ``point`` (a refutation).
    kind ``note``: free text, carries no proof obligation.
    """

    label: str
    kind: str
    poly: Optional[Poly] = None
    sturm: Optional[SturmReport] = None
    point: Optional[Tuple[Fraction, Fraction]] = None
    holds: bool = True
    text: str = ""

    def to_dict(self):
        d = {"label": self.label, "kind": self.kind, "holds": self.holds}
        if self.poly is not None:
            d["poly"] = format_poly(self.poly)
        if self.sturm is not None:
            d["sturm"] = self.sturm.to_dict()
        if self.point is not None:
            d["point"] = [format_rational(c) for c in self.point]
        if self.text:
            d["text"] = self.text
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(d["label"], d["kind"],
                   parse_poly(d["poly"]) if "poly" in d else None,
                   SturmReport.from_dict(d["sturm"]) if "sturm" in d else None,
                   tuple(Fraction(c) for c in d["point"]) if "point" in d else None,
                   d.get("holds", True), d.get("text", ""))


@dataclass
class Check:
    name: str
    verdict: str
    evidence: List[Evidence] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_dict(self):
        return {"name": self.name, "verdict": self.verdict,
                "evidence": [e.to_dict() for e in self.evidence]}

    @classmethod
    def from_dict(cls, d):
        return cls(d["name"], d["verdict"], [Evidence.from_dict(e) for e in d["evidence"]])


@dataclass
class CertificateReport:
    checks: List[Check]
    subject: str = ""

    @property
    def verdict(self) -> str:
        verdicts = [c.verdict for c in self.checks]
        if FAIL in verdicts:
            return FAIL
        if INCONCLUSIVE in verdicts:
            return INCONCLUSIVE
        return PASS

    @property
    def overall(self) -> bool:
        return self.verdict == PASS

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self):
        return {"subject": self.subject, "verdict": self.verdict,
                "checks": [c.to_dict() for c in self.checks]}

    @classmethod
    def from_dict(cls, d):
        return cls([Check.from_dict(c) for c in d["checks"]], d.get("subject", ""))

    def summary(self) -> str:
        lines = [f"{self.subject}: {self.verdict.upper()}"]
        for c in self.checks:
            lines.append(f"  [{c.verdict:>12}] {c.name}")
        return "\n".join(lines)


def _combine(verdicts: Sequence[str]) -> str:
    if FAIL in verdicts:
        return FAIL
    if INCONCLUSIVE in verdicts:
        return INCONCLUSIVE
    return PASS


def _zero_check(label: str, residual: Poly) -> Evidence:
    return Evidence(label, "zero", residual, holds=residual.is_zero())


def classify_form(p: Poly, label: str) -> Tuple[str, Evidence]:
    """Sign class of a form: positive_definite, semidefinite, indefinite or zero."""
    if p.is_zero():
        return "zero", Evidence(label, "zero", p, holds=True)
    if p.degree % 2:
        # an odd form takes both signs; pick the direction where it is negative
        u = trim(p.substitute_line())
        t = next(Fraction(k) for k in range(len(u) + 1) if sum(c * k**i for i, c in enumerate(u)) != 0)
        pt = (Fraction(1), t)
        if evaluate(p, pt) > 0:
            pt = (-pt[0], -pt[1])
        return "indefinite", Evidence(label, "negative_at", p, point=pt, holds=True)
    pd, report = homogeneous_positive_definite(p)
    if pd:
        return "positive_definite", Evidence(label, "positive_definite", p, report)
    nonneg, report = homogeneous_nonnegative(p)
    if nonneg:
        return "semidefinite", Evidence(label, "nonnegative", p, report)
    d = negative_directions(p)[0]
    pt = (Fraction(0), Fraction(1)) if d is None else (Fraction(1), d)
    return "indefinite", Evidence(label, "negative_at", p, point=pt, holds=True)


# ---------------------------------------------------------------------------

def verify_rational_lyapunov(W: RationalFunction, field: DecomposedField) -> CertificateReport:
    """The five exact checks behind a rational Lyapunov function ``W`` for ``f0 + f1``.

    ``f0`` must be tangent to the level sets of ``W`` and ``f1`` must carry
    the descent ``-(a^2 + b^2) / den`` where ``(a, b)/den^2`` is the gradient.
    """
    if not W.den.is_homogeneous():
        raise ValueError("the denominator of W must be a homogeneous form")
    checks = []
    a, b = gradient_numerators(W)
    den = W.den

    # (1) positivity of numerator and denominator
    ev = []
    verdicts = []
    for label, part in (("numerator", W.num), ("denominator", den)):
        if not part.is_homogeneous():
            ev.append(Evidence(label, "note", part, holds=False, text="not homogeneous"))
            verdicts.append(INCONCLUSIVE)
            continue
        cls, e = classify_form(part, label)
        ev.append(e)
        verdicts.append(PASS if cls == "positive_definite" else FAIL)
    if W.num.degree == 0 and PASS in verdicts[:1]:
        # a positive constant does not vanish at the origin
        verdicts[0] = FAIL
    checks.append(Check("positivity", _combine(verdicts), ev))

    # (2) tangency: <grad W, f0> == 0
    tangency = lie_derivative_rational(W, field.f0).num
    e = _zero_check("<grad W, f0> numerator", tangency)
    checks.append(Check("tangency", PASS if e.holds else FAIL, [e]))

    # (3) descent identity after clearing denominators
    s = a * a + b * b
    r_split = lie_derivative_rational(W, field.f1).num + s * den
    r_full = lie_derivative_rational(W, field.full).num + s * den
    e1 = _zero_check("<grad W, f1> * den^2 + (a^2+b^2) * den", r_split)
    e2 = _zero_check("<grad W, f> * den^2 + (a^2+b^2) * den", r_full)
    checks.append(Check("decrease_identity", PASS if e1.holds and e2.holds else FAIL, [e1, e2]))

    # (4) a and b have no common real zero besides the origin
    ev = []
    if s.is_homogeneous() and not s.is_zero():
        cls, e = classify_form(s, "a^2 + b^2")
        ev.append(e)
        verdict = PASS if cls == "positive_definite" else FAIL
    else:
        ev.append(Evidence("a^2 + b^2", "note", s, holds=False, text="not a nonzero form"))
        verdict = FAIL if s.is_zero() else INCONCLUSIVE
    aux = Y * a + X * b - 8 * (X * Y) ** 3
    ev.append(Evidence("y*a + x*b - 8*(x*y)^3", "zero", aux, holds=aux.is_zero(),
                       text="auxiliary identity; informational"))
    checks.append(Check("no_common_zero", verdict, ev))

    # (5) W >= (x^2+y^2)/2, i.e. 2*num - den*(x^2+y^2) >= 0
    radial = 2 * W.num - den * (X**2 + Y**2)
    if radial.is_homogeneous():
        cls, e = classify_form(radial, "2*num - den*(x^2+y^2)")
        verdict = PASS if cls in ("positive_definite", "semidefinite", "zero") else FAIL
    else:
        e = Evidence("2*num - den*(x^2+y^2)", "note", radial, holds=False, text="not homogeneous")
        verdict = INCONCLUSIVE
    checks.append(Check("radial_unboundedness", verdict, [e]))

    return CertificateReport(checks, f"W = {W} on {field.name or 'field'}")


def verify_polynomial_lyapunov(V: Poly, field: Field, scope: str = "global_homogeneous") -> CertificateReport:
    """Polynomial certificate ``V`` for the full field ``field``.

    ``global_homogeneous``: ``V`` must be a form; the derivative is analysed
    part by part.  ``local``: only the lowest-order parts are decided, which
    is sufficient when they are definite.
    """
    D = -lie_derivative(V, field)
    checks = []
    if scope == "global_homogeneous":
        if not V.is_homogeneous():
            raise ValueError("global_homogeneous scope needs a homogeneous V")
        cls, e = classify_form(V, "V")
        if V.degree == 0:
            cls = "indefinite"
            e = Evidence("V", "note", V, holds=False, text="V(0,0) != 0")
        checks.append(Check("positivity", PASS if cls == "positive_definite" else FAIL, [e]))
        checks.append(_decrease_by_parts(D))
        checks.append(Check("radial_unboundedness", checks[0].verdict,
                            [Evidence("V", "note", text="positive definite form of positive degree")]))
    elif scope == "local":
        if evaluate(V, (0, 0)) != 0:
            raise ValueError("local scope needs V(0, 0) = 0")
        ev = []
        for name, poly in (("positivity", V), ("decrease", D)):
            low = lowest_part(poly)
            cls, e = classify_form(low, f"lowest part of {'V' if name == 'positivity' else '-<grad V, f>'}")
            verdict = {"positive_definite": PASS, "semidefinite": INCONCLUSIVE}.get(cls, FAIL)
            if cls == "zero":
                verdict = FAIL
            checks.append(Check(name, verdict, [e]))
        if checks[0].passed and checks[1].passed:
            checks.append(Check("local_lowest_order", PASS,
                                [Evidence("scope", "note", text="local pass (lowest-order)")]))
    else:
        raise ValueError(f"unknown scope {scope!r}")
    return CertificateReport(checks, f"V = {format_poly(V)} ({scope})")


def _decrease_by_parts(D: Poly) -> Check:
    parts = homogeneous_decompose(D)
    if not parts:
        return Check("decrease", FAIL, [Evidence("-<grad V, f>", "zero", D, holds=True,
                                                 text="derivative vanishes identically")])
    classes = {}
    ev = []
    for d, part in parts.items():
        cls, e = classify_form(part, f"-<grad V, f> degree {d}")
        classes[d] = cls
        ev.append(e)
    lo, hi = min(parts), max(parts)
    if all(c in ("positive_definite", "semidefinite") for c in classes.values()) and \
            "positive_definite" in classes.values():
        return Check("decrease", PASS, ev)
    if classes[lo] == "indefinite" or classes[hi] == "indefinite":
        return Check("decrease", FAIL, ev)
    return Check("decrease", INCONCLUSIVE, ev)


@dataclass
class Counterexample:
    point: Tuple[Fraction, Fraction]
    condition: str
    value: Fraction
    derivative: Fraction


def falsify_by_sampling(V: Union[Poly, RationalFunction], field: Field, samples) -> Optional[Counterexample]:
    """First sample at which ``V > 0`` or ``<grad V, f> < 0`` fails, exactly."""
    if isinstance(V, RationalFunction):
        value = V.evaluate
        deriv = lie_derivative_rational(V, field).evaluate
    else:
        value = lambda pt: evaluate(V, pt)  # noqa: E731
        lie = lie_derivative(V, field)
        deriv = lambda pt: evaluate(lie, pt)  # noqa: E731
    for s in samples:
        pt = (Fraction(s[0]), Fraction(s[1]))
        if pt == (0, 0):
            continue
        v, dv = value(pt), deriv(pt)
        if v <= 0:
            return Counterexample(pt, "positivity", v, dv)
        if dv >= 0:
            return Counterexample(pt, "decrease", v, dv)
    return None


def recheck_evidence(e: Evidence) -> bool:
    if e.kind == "zero":
        return e.poly is not None and e.poly.is_zero() == e.holds
    if e.kind == "positive_definite":
        p, rep = e.poly, e.sturm
        if p is None or rep is None or not recheck_sturm(rep):
            return False
        u = trim(p.substitute_line())
        return (rep.chain[0] == u and rep.real_root_count == 0 and u[-1] > 0 and u[0] > 0
                and p.degree % 2 == 0 and p.coeff(0, p.degree) > 0)
    if e.kind == "nonnegative":
        return e.poly is not None and homogeneous_nonnegative(e.poly)[0]
    if e.kind == "negative_at":
        return e.poly is not None and evaluate(e.poly, e.point) < 0
    return True


def recheck_report(report: CertificateReport) -> bool:
    """Re-verify every passing check from its stored evidence only."""
    for c in report.checks:
        if not c.passed:
            continue
        for e in c.evidence:
            if e.kind == "note":
                continue
            if e.text.startswith("auxiliary"):
                continue
            if not e.holds or not recheck_evidence(e):
                return False
    return True
