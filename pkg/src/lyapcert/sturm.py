"""Univariate exact polynomials, Sturm chains and sign decisions.

Univariate polynomials are tuples of Fractions in ascending order of power,
trimmed so the last entry is nonzero; ``()`` is the zero polynomial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .algebra import Poly

UPoly = Tuple[Fraction, ...]


def trim(coeffs: Sequence) -> UPoly:
    c = [Fraction(v) for v in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def udeg(q: UPoly) -> Optional[int]:
    return len(q) - 1 if q else None


def uderiv(q: UPoly) -> UPoly:
    return trim(i * q[i] for i in range(1, len(q)))


def ueval(q: UPoly, t) -> Fraction:
    acc = Fraction(0)
    for c in reversed(q):
        acc = acc * t + c
    return acc


def uscale(q: UPoly, c) -> UPoly:
    return trim(v * c for v in q)


def usub(p: UPoly, q: UPoly) -> UPoly:
    n = max(len(p), len(q))
    return trim((p[i] if i < len(p) else 0) - (q[i] if i < len(q) else 0) for i in range(n))


def umul(p: UPoly, q: UPoly) -> UPoly:
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return trim(out)


def udivmod(p: UPoly, q: UPoly) -> Tuple[UPoly, UPoly]:
    if not q:
        raise ZeroDivisionError("division by the zero polynomial")
    rem = list(p)
    quo = [Fraction(0)] * max(len(p) - len(q) + 1, 0)
    lead = q[-1]
    while len(rem) >= len(q) and rem:
        shift = len(rem) - len(q)
        factor = rem[-1] / lead
        quo[shift] = factor
        for i, c in enumerate(q):
            rem[shift + i] -= factor * c
        rem.pop()
        while rem and rem[-1] == 0:
            rem.pop()
    return trim(quo), tuple(rem)


def monic(q: UPoly) -> UPoly:
    return uscale(q, 1 / q[-1]) if q else q


def ugcd(p: UPoly, q: UPoly) -> UPoly:
    while q:
        p, q = q, udivmod(p, q)[1]
    return monic(p)


def positive_normalize(q: UPoly) -> UPoly:
    """Scale by a positive rational so the coefficients are coprime integers.

    Signs are untouched, which is all a Sturm chain cares about; this keeps
    the bit-length of the remainders in check.
    """
    if not q:
        return q
    den = math.lcm(*(c.denominator for c in q))
    ints = [c.numerator * (den // c.denominator) for c in q]
    g = math.gcd(*ints)
    return tuple(Fraction(v // g) for v in ints)


def sign(v) -> int:
    return (v > 0) - (v < 0)


def sign_at(q: UPoly, t) -> int:
    """Sign of ``q`` at rational ``t``; ``t`` may be ``math.inf`` / ``-math.inf``."""
    if not q:
        return 0
    if t == math.inf:
        return sign(q[-1])
    if t == -math.inf:
        return sign(q[-1]) * (-1 if (len(q) - 1) % 2 else 1)
    return sign(ueval(q, t))


def sturm_chain(q: UPoly) -> List[UPoly]:
    q = trim(q)
    if not q:
        return []
    chain = [q]
    d = positive_normalize(uderiv(q))
    if not d:
        return chain
    chain.append(d)
    while True:
        r = udivmod(chain[-2], chain[-1])[1]
        if not r:
            return chain
        chain.append(positive_normalize(uscale(r, -1)))


def variations(chain: Sequence[UPoly], t) -> int:
    signs = [s for s in (sign_at(q, t) for q in chain) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(chain: Sequence[UPoly], lo=-math.inf, hi=math.inf) -> int:
    """Distinct real roots of ``chain[0]`` in ``(lo, hi]``."""
    if not chain:
        raise ValueError("zero polynomial has infinitely many roots")
    return variations(chain, lo) - variations(chain, hi)


@dataclass
class SturmReport:
    chain: List[UPoly]
    real_root_count: int
    interval: Optional[Tuple[Optional[Fraction], Optional[Fraction]]] = None

    def to_dict(self):
        from .algebra import format_rational
        return {
            "chain": [[format_rational(c) for c in q] for q in self.chain],
            "real_root_count": self.real_root_count,
            "interval": None if self.interval is None else [
                None if e is None else format_rational(e) for e in self.interval],
        }

    @classmethod
    def from_dict(cls, d):
        chain = [tuple(Fraction(c) for c in q) for q in d["chain"]]
        interval = d.get("interval")
        if interval is not None:
            interval = tuple(None if e is None else Fraction(e) for e in interval)
        return cls(chain, d["real_root_count"], interval)


def sturm_report(q: UPoly, lo=None, hi=None) -> SturmReport:
    chain = sturm_chain(q)
    a = -math.inf if lo is None else lo
    b = math.inf if hi is None else hi
    interval = None if lo is None and hi is None else (lo, hi)
    return SturmReport(chain, count_roots(chain, a, b), interval)


def recheck_sturm(report: SturmReport) -> bool:
    """Validate a stored chain step by step and recount its variations."""
    chain = [trim(q) for q in report.chain]
    if not chain:
        return False

    def proportional(p: UPoly, q: UPoly) -> bool:
        # p = c*q with c > 0
        if len(p) != len(q):
            return False
        if not p:
            return True
        ratio = p[-1] / q[-1]
        return ratio > 0 and all(a == ratio * b for a, b in zip(p, q))

    if len(chain) == 1:
        if uderiv(chain[0]):
            return False
    else:
        if not proportional(chain[1], uderiv(chain[0])):
            return False
        for k in range(2, len(chain)):
            r = udivmod(chain[k - 2], chain[k - 1])[1]
            if not proportional(chain[k], uscale(r, -1)):
                return False
        if udivmod(chain[-2], chain[-1])[1]:
            return False
    lo, hi = report.interval if report.interval else (None, None)
    a = -math.inf if lo is None else lo
    b = math.inf if hi is None else hi
    return count_roots(chain, a, b) == report.real_root_count


def squarefree_factors(q: UPoly) -> List[UPoly]:
    """Yun's algorithm: monic ``a_1, a_2, ...`` with ``q = lc * prod a_i**i``."""
    q = trim(q)
    if udeg(q) in (None, 0):
        return []
    dq = uderiv(q)
    a0 = ugcd(q, dq)
    b = udivmod(q, a0)[0]
    c = udivmod(dq, a0)[0]
    d = usub(c, uderiv(b))
    out = []
    while udeg(b) and udeg(b) > 0:
        a = ugcd(b, d)
        out.append(a)
        b = udivmod(b, a)[0]
        c = udivmod(d, a)[0]
        d = usub(c, uderiv(b))
    return out


def sturm_positivity(q: Sequence, mode: str = "positive_on_R") -> Tuple[SturmReport, bool]:
    q = trim(q)
    if mode == "positive_on_R":
        if not q:
            raise ValueError("the zero polynomial is not a valid query for positive_on_R")
        report = sturm_report(q)
        return report, report.real_root_count == 0 and q[-1] > 0 and q[0] > 0
    if mode == "nonnegative_on_R":
        if not q:
            return SturmReport([], 0), True
        report = sturm_report(q)
        if q[-1] < 0:
            return report, False
        odd: UPoly = (Fraction(1),)
        for mult, a in enumerate(squarefree_factors(q), start=1):
            if mult % 2:
                odd = umul(odd, a)
        return report, count_roots(sturm_chain(odd)) == 0
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# root isolation and cut selection

def _perturbed_midpoint(q: UPoly, lo: Fraction, hi: Fraction) -> Fraction:
    k = 2
    mid = (lo + hi) / 2
    while ueval(q, mid) == 0:
        k += 1
        mid = lo + (hi - lo) / k
    return mid


def root_bound(q: UPoly) -> Fraction:
    lead = abs(q[-1])
    return 1 + max((abs(c) / lead for c in q[:-1]), default=Fraction(0))


def isolate_real_roots(q: UPoly) -> List[Tuple[Fraction, Fraction]]:
    """Disjoint intervals ``(lo, hi]`` each holding exactly one distinct root.

    Endpoints are never roots.
    """
    q = trim(q)
    if udeg(q) in (None, 0):
        return []
    chain = sturm_chain(q)
    B = root_bound(q)
    out = []
    stack = [(-B, B)]
    while stack:
        lo, hi = stack.pop()
        n = count_roots(chain, lo, hi)
        if n == 0:
            continue
        if n == 1:
            out.append((lo, hi))
            continue
        mid = _perturbed_midpoint(q, lo, hi)
        stack.append((mid, hi))
        stack.append((lo, mid))
    out.sort()
    return out


def simplest_rational(lo: Optional[Fraction], hi: Optional[Fraction]) -> Fraction:
    """Rational of least denominator (then least magnitude) in ``[lo, hi]``.

    ``None`` stands for an infinite end.
    """
    if lo is not None and hi is not None and lo > hi:
        raise ValueError("empty interval")
    if (lo is None or lo <= 0) and (hi is None or hi >= 0):
        return Fraction(0)
    if hi is not None and hi < 0:
        return -simplest_rational(None if hi is None else -hi, None if lo is None else -lo)
    if hi is None:
        return Fraction(math.ceil(lo))
    return _simplest_positive(lo, hi)


def _simplest_positive(lo: Fraction, hi: Fraction) -> Fraction:
    fl = math.floor(lo)
    if fl == lo or fl + 1 <= hi:
        return Fraction(fl if fl == lo else fl + 1)
    return fl + 1 / _simplest_positive(1 / (hi - fl), 1 / (lo - fl))


def negative_points(q: UPoly) -> List[Fraction]:
    """One rational point per maximal interval on which ``q`` is negative."""
    q = trim(q)
    if not q:
        return []
    roots = isolate_real_roots(q)
    gaps: List[Tuple[Optional[Fraction], Optional[Fraction]]] = []
    edges: List[Optional[Fraction]] = [None]
    for lo, hi in roots:
        edges.extend([lo, hi])
    edges.append(None)
    for k in range(0, len(edges), 2):
        gaps.append((edges[k], edges[k + 1]))
    out = []
    for lo, hi in gaps:
        t = simplest_rational(lo, hi)
        if ueval(q, t) < 0:
            out.append(t)
    return out


# ---------------------------------------------------------------------------
# homogeneous bivariate forms

def _require_homogeneous(p: Poly):
    if not p.is_homogeneous():
        raise ValueError(f"polynomial is not homogeneous: {p}")


def homogeneous_positive_definite(p: Poly) -> Tuple[bool, SturmReport]:
    """Is the form ``p`` strictly positive away from the origin?

    Decided on the chart ``p(1, t)`` by Sturm plus the point ``(0, 1)``.
    """
    _require_homogeneous(p)
    if p.is_zero():
        return False, SturmReport([], 0)
    u = trim(p.substitute_line())
    report = sturm_report(u)
    if p.degree % 2:
        return False, report
    ok = report.real_root_count == 0 and u[-1] > 0 and u[0] > 0 and p.coeff(0, p.degree) > 0
    return ok, report


def homogeneous_nonnegative(p: Poly) -> Tuple[bool, SturmReport]:
    _require_homogeneous(p)
    if p.is_zero():
        return True, SturmReport([], 0)
    u = trim(p.substitute_line())
    report, ok = sturm_positivity(u, "nonnegative_on_R")
    if p.degree % 2:
        return False, report
    return ok and p.coeff(0, p.degree) >= 0, report


def negative_directions(p: Poly) -> List[Optional[Fraction]]:
    """Slopes ``t`` with ``p(1, t) < 0``, plus ``None`` if ``p(0, 1) < 0``.

    ``p`` must be a form of even degree, so the sign at ``(1, t)`` is the
    sign on the whole line through the origin.
    """
    _require_homogeneous(p)
    if p.is_zero():
        return []
    if p.degree % 2:
        raise ValueError("negative_directions expects an even-degree form")
    out: List[Optional[Fraction]] = list(negative_points(trim(p.substitute_line())))
    if p.coeff(0, p.degree) < 0:
        out.append(None)
    return out
