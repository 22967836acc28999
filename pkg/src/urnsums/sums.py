"""Brute-force exact evaluation of binomial-ratio double sums.

The central object is

    sum_{j=0}^{n} sum_{i=0}^{j} binom(top, i) / binom(bottom, j) * u^i * v^j

evaluated over exact rationals.  The weight pair (u, v) covers all the
geometric weights that occur in practice:

    c^(i-j)   ->  (c, 1/c)
    c^(j-i)   ->  (1/c, c)
    (-1)^i    ->  (-1, 1)
    (-1)^j    ->  (1, -1)
    (-2)^(j-i)->  (-1/2, -2)

Global prefactors such as (-1)^n or a stray power of c are applied by the
caller.  This module is the universal left-hand-side oracle for the
identity registry.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, PoleError, ZeroDenominatorError
from .exact import RationalLike, gamma_ratio, pochhammer


@dataclass(frozen=True)
class DoubleSumSpec:
    """One double sum: outer limit n, binomial upper arguments, weights."""

    n: int
    top: Fraction
    bottom: Fraction
    u: Fraction = Fraction(1)
    v: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise DomainError(f"outer limit must be >= 0, got {self.n}")
        object.__setattr__(self, "top", Fraction(self.top))
        object.__setattr__(self, "bottom", Fraction(self.bottom))
        object.__setattr__(self, "u", Fraction(self.u))
        object.__setattr__(self, "v", Fraction(self.v))
        b = self.bottom
        if b.denominator == 1 and 0 <= b.numerator <= self.n - 1:
            raise ZeroDenominatorError(
                f"binom({b}, j) vanishes for j = {b.numerator + 1} <= {self.n}")


def ratio_weight(c: RationalLike) -> tuple[Fraction, Fraction]:
    """Weight pair encoding c^(i-j)."""
    c = Fraction(c)
    if c == 0:
        raise DomainError("weight c^(i-j) requires c != 0")
    return c, 1 / c


def inverse_ratio_weight(c: RationalLike) -> tuple[Fraction, Fraction]:
    """Weight pair encoding c^(j-i)."""
    c = Fraction(c)
    if c == 0:
        raise DomainError("weight c^(j-i) requires c != 0")
    return 1 / c, c


def eval_double_sum(spec: DoubleSumSpec) -> Fraction:
    """Exact value of the double sum described by ``spec``.

    Uses a running inner prefix sum_{i<=j} binom(top, i) u^i, updated with
    one new term per j, so the whole evaluation costs O(n) rational
    operations.
    """
    top, bottom, u, v = spec.top, spec.bottom, spec.u, spec.v
    total = Fraction(0)
    prefix = Fraction(0)
    num_term = Fraction(1)      # binom(top, j) * u^j
    den_term = Fraction(1)      # binom(bottom, j)
    v_pow = Fraction(1)
    for j in range(spec.n + 1):
        if j > 0:
            num_term *= (top - j + 1) * u / j
            den_term *= (bottom - j + 1) / j
            v_pow *= v
        prefix += num_term
        if den_term == 0:
            raise ZeroDenominatorError(f"binom({bottom}, {j}) = 0 inside the sum")
        total += prefix * v_pow / den_term
    return total


def eval_inner_prefix(top: RationalLike, j: int, u: RationalLike) -> Fraction:
    """Exact inner sum sum_{i=0}^{j} binom(top, i) u^i."""
    if j < 0:
        raise DomainError(f"prefix limit must be >= 0, got {j}")
    top = Fraction(top)
    u = Fraction(u)
    term = Fraction(1)
    total = Fraction(1)
    for i in range(1, j + 1):
        term *= (top - i + 1) * u / i
        total += term
    return total


@dataclass(frozen=True)
class GammaRatioSumSpec:
    """Finite sum of Gamma(j+a)/Gamma(j+b+1) over m <= j <= n, normalized
    by its first term so that everything stays rational."""

    m: int
    n: int
    a: Fraction
    b: Fraction

    def __post_init__(self) -> None:
        if self.n < self.m:
            raise DomainError(f"need n >= m, got m={self.m}, n={self.n}")
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.a == self.b:
            raise DomainError("gamma-ratio sum requires a != b")


def check_gamma_ratio_sum(spec: GammaRatioSumSpec) -> tuple[Fraction, Fraction]:
    """Both sides of the telescoped gamma-ratio sum, as exact rationals.

    The left side is term-by-term summation; the right side is the closed
    form.  Both are divided by Gamma(m+a)/Gamma(m+b+1), so they are exact
    rationals whenever defined, and they must be equal.
    """
    m, n, a, b = spec.m, spec.n, spec.a, spec.b
    lhs = Fraction(0)
    term = Fraction(1)
    for j in range(m, n + 1):
        if j > m:
            denom = m + b + 1 + (j - m - 1)
            if denom == 0:
                raise PoleError(f"gamma pole in term chain at j={j}")
            term *= (m + a + (j - m - 1)) / denom
        lhs += term
    tail_num = pochhammer(m + a, n - m + 1)
    tail_den = pochhammer(m + b + 1, n - m)
    if tail_den == 0:
        raise PoleError("gamma pole in the closed-form tail")
    rhs = ((m + b) - tail_num / tail_den) / (b - a)
    return lhs, rhs


def naive_double_sum(n: int, top: RationalLike, bottom: RationalLike,
                     u: RationalLike, v: RationalLike) -> Fraction:
    """Triple-loop reference evaluation, used as an independent oracle."""
    from .exact import binom

    top, bottom, u, v = Fraction(top), Fraction(bottom), Fraction(u), Fraction(v)
    total = Fraction(0)
    for j in range(n + 1):
        d = binom(bottom, j)
        if d == 0:
            raise ZeroDenominatorError(f"binom({bottom}, {j}) = 0")
        inner = Fraction(0)
        for i in range(j + 1):
            inner += binom(top, i) * u ** i
        total += inner * v ** j / d
    return total
