"""Gauss and generalized hypergeometric series over rational parameters.

Terminating series are summed exactly over rationals.  Non-terminating
series are summed numerically with a rigorous tail bound attached:

* for |z| < 1 the term-ratio factors (u+L)/(w+L) are monotone in L once
  all of them are positive, so sup over the tail is bounded by pairing
  each upper with a lower and taking max(1, ratio at L); the tail is then
  dominated by a geometric series;
* for z = 1 (Gauss-summable case, c-a-b > 0) the terms are compared
  against L^(-p) with p = 1 + (c-a-b)/2, which dominates the term ratio
  beyond an explicitly computable index.

All numeric results are returned as :class:`ApproxValue` so downstream
identity checks can assert |lhs - rhs| <= bound_lhs + bound_rhs + tol
instead of guessing tolerances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional, Union

from .errors import DivergenceError, DomainError, UndefinedSeriesError, UrnsumsError
from .exact import (EPS, ApproxValue, RationalLike, gamma_numeric,
                    pow_of_rational)

HypValue = Union[Fraction, ApproxValue]

#: safety caps on series length; generous for every workload in this package
MAX_TERMS_EXACT = 50_000
MAX_TERMS_UNIT = 150_000


@dataclass(frozen=True)
class HypSeriesSpec:
    """A 2F1 or 3F2 series: upper/lower parameter lists, argument, tolerance."""

    upper: tuple[Fraction, ...]
    lower: tuple[Fraction, ...]
    z: Fraction
    tol: float = 1e-12

    def __post_init__(self) -> None:
        object.__setattr__(self, "upper", tuple(Fraction(u) for u in self.upper))
        object.__setattr__(self, "lower", tuple(Fraction(w) for w in self.lower))
        object.__setattr__(self, "z", Fraction(self.z))
        if len(self.upper) not in (2, 3) or len(self.lower) != len(self.upper) - 1:
            raise DomainError(
                f"expected 2F1 or 3F2 shape, got {len(self.upper)} upper / "
                f"{len(self.lower)} lower parameters")
        if not self.tol > 0:
            raise DomainError(f"tolerance must be positive, got {self.tol}")


def _nonpositive_int(q: Fraction) -> Optional[int]:
    if q.denominator == 1 and q.numerator <= 0:
        return q.numerator
    return None


def termination_index(spec: HypSeriesSpec) -> Optional[int]:
    """Index of the last nonzero term, or None for a non-terminating series."""
    cuts = [-u.numerator for u in spec.upper if _nonpositive_int(u) is not None]
    return min(cuts) if cuts else None


def is_terminating(spec: HypSeriesSpec) -> bool:
    return termination_index(spec) is not None


def _check_lower_poles(spec: HypSeriesSpec, cut: Optional[int]) -> None:
    for w in spec.lower:
        wi = _nonpositive_int(w)
        if wi is None:
            continue
        # the factor (w)_l vanishes first at l = -w + 1; an upper parameter
        # must terminate the series strictly before that
        if cut is None or cut > -wi - 1:
            raise UndefinedSeriesError(
                f"lower parameter {w} is a nonpositive integer not shielded "
                f"by an earlier-terminating upper parameter")


def hyp_eval(spec: HypSeriesSpec) -> HypValue:
    """Evaluate the series: exactly when terminating, else with bounds."""
    cut = termination_index(spec)
    _check_lower_poles(spec, cut)
    if cut is not None:
        return _sum_terminating(spec, cut)
    z = spec.z
    if abs(z) < 1:
        return _sum_inside_disk(spec)
    if z == 1 and len(spec.upper) == 2:
        a, b = spec.upper
        c = spec.lower[0]
        sigma = c - a - b
        if sigma > 0:
            return _sum_at_unit(a, b, c, spec.tol)
        raise DivergenceError(
            f"2F1 at z=1 requires c-a-b > 0, got {sigma}")
    if len(spec.upper) == 2:
        via_image = _eval_via_terminating_image(spec)
        if via_image is not None:
            return via_image
    raise DivergenceError(
        f"non-terminating series with |z| = {abs(spec.z)} >= 1")


def hyp2f1(a: RationalLike, b: RationalLike, c: RationalLike,
           z: RationalLike, tol: float = 1e-12) -> HypValue:
    return hyp_eval(HypSeriesSpec((Fraction(a), Fraction(b)), (Fraction(c),),
                                  Fraction(z), tol))


def hyp3f2(a1: RationalLike, a2: RationalLike, a3: RationalLike,
           b1: RationalLike, b2: RationalLike,
           z: RationalLike, tol: float = 1e-12) -> HypValue:
    return hyp_eval(HypSeriesSpec((Fraction(a1), Fraction(a2), Fraction(a3)),
                                  (Fraction(b1), Fraction(b2)), Fraction(z), tol))


def _sum_terminating(spec: HypSeriesSpec, cut: int) -> Fraction:
    term = Fraction(1)
    total = Fraction(1)
    for ell in range(cut):
        for u in spec.upper:
            term *= u + ell
        for w in spec.lower:
            term /= w + ell
        term *= spec.z
        term /= ell + 1
        total += term
    return total


def _tail_ratio_bound(upper: tuple[Fraction, ...], lower_full: list[Fraction],
                      abs_z: Fraction, ell: int) -> Optional[Fraction]:
    """Upper bound on sup_{l >= ell} |t_{l+1}/t_l|, or None if not yet valid.

    Valid once every shifted parameter is positive: each paired factor
    (u+l)/(w+l) is then monotone in l with limit 1, so its sup on
    [ell, inf) is max(1, value at ell).
    """
    ups = sorted(upper, reverse=True)
    lows = sorted(lower_full, reverse=True)
    bound = abs_z
    for u, w in zip(ups, lows):
        if u + ell <= 0 or w + ell <= 0:
            return None
        bound *= max(Fraction(1), (u + ell) / (w + ell))
    return bound


def _sum_inside_disk(spec: HypSeriesSpec) -> ApproxValue:
    """Exact partial sums plus a geometric tail bound, for |z| < 1."""
    lower_full = list(spec.lower) + [Fraction(1)]
    abs_z = abs(spec.z)
    total = Fraction(0)
    term = Fraction(1)
    ell = 0
    while True:
        total += term
        # next term
        for u in spec.upper:
            term *= u + ell
        for w in spec.lower:
            term /= w + ell
        term *= spec.z
        term /= ell + 1
        ell += 1
        ratio = _tail_ratio_bound(spec.upper, lower_full, abs_z, ell)
        if ratio is not None and ratio < 1:
            tail = abs(term) / (1 - ratio)
            if tail <= spec.tol:
                value = float(total)
                bound = float(tail) * (1 + 4 * EPS) + EPS * abs(value)
                return ApproxValue(value, bound)
        if ell > MAX_TERMS_EXACT:
            raise UrnsumsError(
                f"series at z={spec.z} did not reach tolerance {spec.tol} "
                f"within {MAX_TERMS_EXACT} terms")


def _sum_at_unit(a: Fraction, b: Fraction, c: Fraction, tol: float) -> ApproxValue:
    """2F1 at z = 1 with sigma = c-a-b > 0, by float summation.

    Terms are eventually dominated by l^(-p) with p = 1 + sigma/2; beyond
    the explicit index below, t_{l+1}/t_l <= 1 - p/(l+1) <= (l/(l+1))^p,
    which yields the tail bound |t_{L+1}| (L+1)^p L^(1-p) / (p-1).
    """
    sigma = c - a - b
    p = 1 + sigma / 2
    # ratio domination threshold: (a+l)(b+l) <= (c+l)(1+l-p) for l >= this
    threshold = 2 * a * b / sigma + c
    start = max(0, math.ceil(-float(a)), math.ceil(-float(b)), math.ceil(-float(c)))
    l_star = max(1, start + 1, math.floor(float(threshold)) + 2)

    af, bf, cf = float(a), float(b), float(c)
    pf = float(p)
    total = 0.0
    term = 1.0
    rounding = 0.0
    ell = 0
    while True:
        total += term
        rounding += EPS * abs(total)
        term *= (af + ell) * (bf + ell) / ((cf + ell) * (1.0 + ell))
        ell += 1
        rounding_scale = 1.0 + 8.0 * EPS * ell
        if ell >= l_star:
            infl = ((ell + 0.0) / (ell - 1.0)) ** (pf - 1.0) if ell > 1 else 2.0
            tail = abs(term) * rounding_scale * ell * infl / (pf - 1.0)
            if tail <= tol or ell >= MAX_TERMS_UNIT:
                bound = tail * (1 + 1e-9) + rounding + 8.0 * EPS * ell * abs(total)
                return ApproxValue(total, bound)


class PfaffImage(NamedTuple):
    factor: HypValue
    spec: HypSeriesSpec


def pfaff_transform(spec: HypSeriesSpec) -> PfaffImage:
    """Argument transformation z -> z/(z-1) for a 2F1.

    Returns the prefactor (1-z)^(-a) and the transformed series
    (a, c-b; c; z/(z-1)).  The factor is exact when a is an integer,
    numeric (with bound) otherwise.
    """
    if len(spec.upper) != 2:
        raise DomainError("the argument transformation applies to 2F1 only")
    if spec.z == 1:
        raise DomainError("the argument transformation has a pole at z = 1")
    a, b = spec.upper
    c = spec.lower[0]
    new_z = spec.z / (spec.z - 1)
    image = HypSeriesSpec((a, c - b), (c,), new_z, spec.tol)
    base = 1 - spec.z
    if a.denominator == 1:
        factor: HypValue = Fraction(base) ** (-a.numerator)
    else:
        factor = pow_of_rational(base, -a)
    return PfaffImage(factor, image)


def _eval_via_terminating_image(spec: HypSeriesSpec) -> Optional[HypValue]:
    """Evaluate a 2F1 outside the disk through a terminating transform image.

    When c-b (or, swapping the upper parameters, c-a) is a nonpositive
    integer, the transformed series is a finite sum and the function is a
    rational-power multiple of it at any argument.
    """
    a, b = spec.upper
    c = spec.lower[0]
    for kept, other in ((a, b), (b, a)):
        if _nonpositive_int(c - other) is not None:
            base_spec = HypSeriesSpec((kept, other), (c,), spec.z, spec.tol)
            factor, image = pfaff_transform(base_spec)
            value = hyp_eval(image)
            return factor * value
    return None


def gauss_value(a: RationalLike, b: RationalLike, c: RationalLike) -> ApproxValue:
    """Closed form for 2F1(a, b; c; 1) as a ratio of gamma values."""
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    sigma = c - a - b
    if sigma <= 0:
        raise DomainError(f"closed form needs c-a-b > 0, got {sigma}")
    for arg in (c, sigma, c - a, c - b):
        if arg <= 0:
            raise DomainError(f"gamma argument {arg} <= 0")
    return (gamma_numeric(c) * gamma_numeric(sigma)
            / (gamma_numeric(c - a) * gamma_numeric(c - b)))


def contiguous_2f1_residual(beta: RationalLike, gamma: RationalLike,
                            tol: float = 1e-12) -> HypValue:
    """Residual of the index-shift relation used to collapse a 2F1(2, .; .; 1/2).

    Checks 2F1(2, beta+1; gamma+1; 1/2) against
    (2 gamma / beta) ((beta - 2 gamma + 2) 2F1(1, beta; gamma; 1/2) + 2 gamma - 2);
    the contract is a zero residual (exactly zero when both sides terminate).
    """
    beta, gamma = Fraction(beta), Fraction(gamma)
    if beta == 0:
        raise DomainError("beta must be nonzero")
    if _nonpositive_int(gamma) is not None:
        raise DomainError(f"gamma must avoid nonpositive integers, got {gamma}")
    half = Fraction(1, 2)
    lhs = hyp2f1(2, beta + 1, gamma + 1, half, tol)
    inner = hyp2f1(1, beta, gamma, half, tol)
    rhs = (2 * gamma / beta) * ((beta - 2 * gamma + 2) * inner + (2 * gamma - 2))
    return lhs - rhs


def contiguous_3f2_residual(n: int, x: RationalLike,
                            tol: float = 1e-12) -> HypValue:
    """Residual of the telescoping relation between neighbouring 3F2's.

    Checks (n+2) 3F2(1,1,n+3; 2,2; x) - (n+1) 3F2(1,1,n+2; 2,2; x)
    against 2F1(1, n+2; 2; x) for |x| < 1.
    """
    if n < 0:
        raise DomainError(f"need n >= 0, got {n}")
    x = Fraction(x)
    if abs(x) >= 1:
        raise DomainError(f"need |x| < 1, got {x}")
    lhs = ((n + 2) * hyp3f2(1, 1, n + 3, 2, 2, x, tol)
           - (n + 1) * hyp3f2(1, 1, n + 2, 2, 2, x, tol))
    rhs = hyp2f1(1, n + 2, 2, x, tol)
    return lhs - rhs
