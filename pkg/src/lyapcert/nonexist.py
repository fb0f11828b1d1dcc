"""Degree-by-degree exclusion of the lowest-order term of a local Lyapunov function.

If ``p`` is a local analytic Lyapunov function for ``f0 + f1`` (``f1`` of
higher order) and ``p_k`` its first nonzero homogeneous part, then
``p_k >= 0`` and ``<grad p_k, f0> <= 0`` on the whole plane.  Sampling those
two conditions on finitely many directions gives an LP in the coefficients
of ``p_k``; an exact Farkas certificate of its infeasibility rules degree
``k`` out.  Feasible candidates are checked globally with Sturm chains and,
when they fail, the offending directions are added as cuts.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import (GaussianRational, Poly, X, Y, evaluate, format_poly, format_rational,
                      lie_derivative, parse_poly)
from .lp import FarkasCertificate, LinearProgram, simplex_solve, verify_farkas
from .sturm import homogeneous_nonnegative, negative_directions
from .systems import DecomposedField, Field, paper_system

log = logging.getLogger(__name__)

Slope = Optional[Fraction]  # None is the vertical direction (0, 1)

INFEASIBLE = "infeasible_certified"
SURVIVED = "candidate_survived"
CAPPED = "iteration_cap_reached"


def direction(slope: Slope) -> Tuple[Fraction, Fraction]:
    return (Fraction(0), Fraction(1)) if slope is None else (Fraction(1), Fraction(slope))


def format_slope(slope: Slope) -> str:
    return "inf" if slope is None else format_rational(slope)


def parse_slope(text: str) -> Slope:
    return None if text == "inf" else Fraction(text)


def stern_brocot_levels():
    """Positive rationals by Stern-Brocot depth, each level in decreasing order."""
    seq = [(0, 1), (1, 0)]
    while True:
        new, merged = [], [seq[0]]
        for (a, b), (c, d) in zip(seq, seq[1:]):
            med = (a + c, b + d)
            new.append(Fraction(*med))
            merged.extend([med, (c, d)])
        seq = merged
        yield sorted(new, reverse=True)


def seed_slopes(n: int) -> List[Slope]:
    """``0, inf, 1, -1, 2, -2, 1/2, -1/2, 3, ...`` truncated to ``n``."""
    out: List[Slope] = [Fraction(0), None]
    for level in stern_brocot_levels():
        if len(out) >= n:
            break
        for q in level:
            out.extend([q, -q])
    return out[:n]


@dataclass
class SampleSet:
    slopes: List[Slope] = field(default_factory=list)

    def __post_init__(self):
        seen = set()
        for s in self.slopes:
            key = "inf" if s is None else s
            if key in seen:
                raise ValueError(f"duplicate direction {format_slope(s)}")
            seen.add(key)

    @classmethod
    def seed(cls, n: int) -> "SampleSet":
        return cls(seed_slopes(n))

    @classmethod
    def from_points(cls, points) -> "SampleSet":
        """Canonicalise ``(x, y)`` pairs to slopes; ``(2, 1)`` becomes ``1/2``."""
        slopes = []
        for x, y in points:
            x, y = Fraction(x), Fraction(y)
            if x == 0 and y == 0:
                raise ValueError("the origin is not a direction")
            slopes.append(None if x == 0 else y / x)
        return cls(slopes)

    def __contains__(self, slope: Slope) -> bool:
        return any(s == slope and (s is None) == (slope is None) for s in self.slopes)

    def __len__(self):
        return len(self.slopes)

    def directions(self):
        return [direction(s) for s in self.slopes]


def _monomials(k: int) -> List[Poly]:
    # coefficient c_i multiplies x^(k-i) y^i
    return [Poly.monomial(k - i, i) for i in range(k + 1)]


def check_f0(f0: Field) -> int:
    """Degree of ``f0``; it must be a homogeneous field of odd degree."""
    degs = {c.degree for c in f0 if not c.is_zero()}
    if len(degs) != 1 or not all(c.is_homogeneous() for c in f0):
        raise ValueError("f0 must be homogeneous, both components of one degree")
    d = degs.pop()
    if d % 2 == 0:
        raise ValueError("f0 must have odd degree so that sampled constraints are even forms")
    return d


def build_lp(k: int, samples: SampleSet, f0: Optional[Field] = None) -> LinearProgram:
    """Rows ``p(s) >= 0`` and ``<grad p, f0>(s) <= 0`` per direction, plus ``sum_s p(s) = 1``."""
    if f0 is None:
        f0 = paper_system().f0
    if k < 1:
        raise ValueError("degree must be positive")
    if len(samples) < k + 1:
        raise ValueError(f"need at least {k + 1} directions for degree {k}, got {len(samples)}")
    monos = _monomials(k)
    lies = [lie_derivative(m, f0) for m in monos]
    lp = LinearProgram(k + 1)
    norm = [Fraction(0)] * (k + 1)
    for slope, pt in zip(samples.slopes, samples.directions()):
        vals = [evaluate(m, pt) for m in monos]
        lp.add(vals, ">=", 0, f"positivity@{format_slope(slope)}")
        lp.add([evaluate(q, pt) for q in lies], "<=", 0, f"decrease@{format_slope(slope)}")
        norm = [a + b for a, b in zip(norm, vals)]
    lp.add(norm, "==", 1, "normalization")
    return lp


def _radial_weight(pt, degree: int) -> Fraction:
    # (x^2 + y^2)^(degree/2) at (1, s) or (0, 1); degree is even
    return (pt[0] ** 2 + pt[1] ** 2) ** (degree // 2)


def centered_lp(k: int, samples: SampleSet, f0: Field) -> Tuple[LinearProgram, List[Fraction]]:
    """Sampled LP with an extra margin variable ``t`` and the objective ``max t``.

    Each sampled value must exceed ``t`` times ``(x^2+y^2)^(deg/2)``.  When the
    rotation-invariant form ``(x^2+y^2)^(k/2)`` is feasible it is the unique
    optimum, since the minimum margin never exceeds the weighted average.
    """
    d = check_f0(f0)
    monos = _monomials(k)
    lies = [lie_derivative(m, f0) for m in monos]
    lp = LinearProgram(k + 2)
    norm = [Fraction(0)] * (k + 1)
    for pt in samples.directions():
        vals = [evaluate(m, pt) for m in monos]
        lp.add(vals + [-_radial_weight(pt, k)], ">=", 0)
        lp.add([-evaluate(q, pt) for q in lies] + [-_radial_weight(pt, k + d - 1)], ">=", 0)
        norm = [a + b for a, b in zip(norm, vals)]
    lp.add(norm + [Fraction(0)], "==", 1)
    return lp, [Fraction(0)] * (k + 1) + [Fraction(1)]


def candidate_poly(k: int, coeffs: Sequence[Fraction]) -> Poly:
    return Poly({(k - i, i): c for i, c in enumerate(coeffs)})


def primitive_form(p: Poly) -> Poly:
    """Positive rescaling of ``p`` with coprime integer coefficients."""
    cs = [c for _, c in p.items()]
    if not cs:
        return p
    den = math.lcm(*(c.denominator for c in cs))
    g = math.gcd(*(int(c * den) for c in cs))
    return p.scale(Fraction(den, g))


@dataclass
class NonexistenceReport:
    degree: int
    outcome: str
    samples: SampleSet
    certificate: Optional[FarkasCertificate] = None
    candidate: Optional[Poly] = None
    history: List[dict] = field(default_factory=list)

    def to_dict(self):
        return {
            "degree": self.degree,
            "outcome": self.outcome,
            "samples": [format_slope(s) for s in self.samples.slopes],
            "farkas_multipliers": None if self.certificate is None else
            [format_rational(m) for m in self.certificate.multipliers],
            "candidate": None if self.candidate is None else format_poly(self.candidate),
            "rounds": len(self.history),
            "cuts": self.history,
        }

    @classmethod
    def from_dict(cls, d):
        cert = d.get("farkas_multipliers")
        cand = d.get("candidate")
        return cls(d["degree"], d["outcome"],
                   SampleSet([parse_slope(s) for s in d["samples"]]),
                   None if cert is None else FarkasCertificate(tuple(Fraction(m) for m in cert)),
                   None if cand is None else parse_poly(cand),
                   list(d.get("cuts", [])))


def exclude_degree(f0: Field, k: int, iteration_cap: int = 200,
                   samples: Optional[SampleSet] = None) -> NonexistenceReport:
    check_f0(f0)
    samples = SampleSet(list((samples or SampleSet.seed(k + 3)).slopes))
    history: List[dict] = []
    for rnd in range(iteration_cap):
        lp = build_lp(k, samples, f0)
        res = simplex_solve(lp)
        if not res.feasible:
            if not verify_farkas(lp, res.certificate):
                raise RuntimeError(f"simplex produced an invalid Farkas certificate at degree {k}")
            log.info("degree %d: infeasible after %d rounds, %d directions", k, rnd + 1, len(samples))
            return NonexistenceReport(k, INFEASIBLE, samples, res.certificate, history=history)
        centre, gain = centered_lp(k, samples, f0)
        p = candidate_poly(k, simplex_solve(centre, maximize=gain).point[:k + 1])
        descent = -lie_derivative(p, f0)
        cuts = []
        for cond, form in (("positivity", p), ("decrease", descent)):
            if not homogeneous_nonnegative(form)[0]:
                cuts.extend((cond, s) for s in negative_directions(form))
        if not cuts:
            history.append({"round": rnd, "candidate": format_poly(p), "cuts": []})
            return NonexistenceReport(k, SURVIVED, samples, candidate=primitive_form(p),
                                      history=history)
        added = []
        for cond, s in cuts:
            if s in samples:
                raise RuntimeError(f"LP solution violates a sampled direction {format_slope(s)}")
            if s not in [a for _, a in added]:
                samples.slopes.append(s)
                added.append((cond, s))
        history.append({"round": rnd, "candidate": format_poly(p),
                        "cuts": [[c, format_slope(s)] for c, s in added]})
    return NonexistenceReport(k, CAPPED, samples, history=history)


def cutting_plane_sweep(field: DecomposedField, k_max: int,
                        iteration_cap: int = 200) -> List[NonexistenceReport]:
    """Run :func:`exclude_degree` for every even ``k`` in ``2..k_max``.

    Odd degrees are skipped: a nonzero form of odd degree changes sign, so it
    cannot be the lowest-order part of a nonnegative function.
    """
    if k_max < 2 or k_max % 2:
        raise ValueError("k_max must be an even integer >= 2")
    if iteration_cap < 1:
        raise ValueError("iteration_cap must be positive")
    return [exclude_degree(field.f0, k, iteration_cap) for k in range(2, k_max + 1, 2)]


def recheck_reports(f0: Field, reports: Sequence[NonexistenceReport]) -> bool:
    """Re-verify every claimed infeasibility from the stored directions and multipliers."""
    for rep in reports:
        if rep.outcome == INFEASIBLE:
            if rep.certificate is None:
                return False
            lp = build_lp(rep.degree, rep.samples, f0)
            try:
                if not verify_farkas(lp, rep.certificate):
                    return False
            except ValueError:
                return False
        elif rep.outcome == SURVIVED:
            p = rep.candidate
            if p is None or not homogeneous_nonnegative(p)[0]:
                return False
            if not homogeneous_nonnegative(-lie_derivative(p, f0))[0]:
                return False
    return True


def regression_lp() -> LinearProgram:
    """Degree-2 LP on the five directions (1,0), (0,1), (1,1), (1,-1), (2,1)."""
    samples = SampleSet.from_points([(1, 0), (0, 1), (1, 1), (1, -1), (2, 1)])
    return build_lp(2, samples)


@dataclass(frozen=True)
class IdentityWitness:
    degree: int
    c: Fraction
    left: GaussianRational
    right: GaussianRational

    @property
    def contradiction(self) -> bool:
        return self.left != self.right


def final_identity_check(p: Poly, c, k0: Optional[int] = None) -> IdentityWitness:
    """Evaluate ``(x^2+y^2)^k0 p^2`` and ``c^2 (x^4+y^4)^k0`` at ``(i, 1)``.

    The left side always vanishes there while the right side is ``c^2 2^k0``,
    so no form ``p`` can satisfy the identity with ``c != 0``.
    """
    c = Fraction(c)
    if c == 0:
        raise ValueError("c must be nonzero")
    if not p.is_homogeneous() or p.is_zero():
        raise ValueError("p must be a nonzero form")
    if k0 is None:
        k0 = p.degree
    if p.degree != k0:
        raise ValueError(f"p has degree {p.degree}, expected {k0}")
    pt = (GaussianRational(0, 1), GaussianRational(1))
    lhs = (X**2 + Y**2) ** k0 * p * p
    rhs = (c * c) * (X**4 + Y**4) ** k0
    return IdentityWitness(k0, c, evaluate(lhs, pt), evaluate(rhs, pt))
