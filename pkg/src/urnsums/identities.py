"""Registry of binomial-ratio sum identities with verification drivers.

Each :class:`IdentityRecord` pairs a left-hand side (usually a double sum
evaluated exactly by :mod:`urnsums.sums`) with an independent closed-form
right-hand side built from the exact kernels and, where needed, the
hypergeometric evaluator.  ``verify`` demands bit-exact equality for
exact-rational identities and bound-respecting agreement for numeric
ones; ``sweep`` runs parameter grids and reports domain-rejected points
as skipped rather than failed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Optional, Sequence, Union

from .errors import DomainError, UrnsumsError
from .exact import (ApproxValue, binom, digamma_diff, format_rational,
                    harmonic, log_of_rational, pochhammer)
from .hypergeom import HypValue, hyp2f1, hyp3f2
from .sums import DoubleSumSpec, eval_double_sum, eval_inner_prefix

F = Fraction
Value = Union[Fraction, ApproxValue]

A_GRID = (F(-5, 2), F(-1, 3), F(1, 4), F(1), F(7, 2))
B_GRID = (F(-5, 2), F(-1, 3), F(1, 4), F(1), F(7, 2))
C_GRID = (F(-3), F(-1, 2), F(1, 3), F(1), F(2))
M_GRID = (0, 1, 2, 5, 10)


@dataclass(frozen=True)
class IdentityParams:
    """Parameter tuple for one identity evaluation."""

    n: int
    a: Optional[Fraction] = None
    b: Optional[Fraction] = None
    c: Optional[Fraction] = None
    m: Optional[int] = None

    def __post_init__(self) -> None:
        if self.n < 0:
            raise DomainError(f"n must be >= 0, got {self.n}")
        for name in ("a", "b", "c"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, Fraction(v))

    def as_dict(self) -> dict:
        out = {"n": self.n}
        for name in ("a", "b", "c", "m"):
            v = getattr(self, name)
            if v is not None:
                out[name] = v
        return out


@dataclass(frozen=True)
class VerifyReport:
    """Outcome of checking one identity at one parameter tuple."""

    id: str
    params: dict
    lhs: Optional[Value]
    rhs: Optional[Value]
    status: str                      # exact-equal | within-bounds | FAIL | skipped
    residual: Optional[float] = None
    bound: Optional[float] = None
    reason: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.status in ("exact-equal", "within-bounds")

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "params": {k: format_rational(Fraction(v)) for k, v in self.params.items()},
            "lhs": _value_str(self.lhs),
            "rhs": _value_str(self.rhs),
            "status": self.status,
            "residual": self.residual,
            "bound": self.bound,
        }


def _value_str(v: Optional[Value]) -> Optional[str]:
    if v is None:
        return None
    if isinstance(v, Fraction):
        return format_rational(v)
    return f"{v.value:.17g}"


Predicate = Callable[[IdentityParams], Optional[str]]
Builder = Callable[[IdentityParams], Value]
Extra = Callable[[IdentityParams], Optional[str]]


@dataclass(frozen=True)
class IdentityRecord:
    """One verifiable identity: domain, LHS builder, RHS closed form."""

    id: str
    description: str
    exactness: str                   # exact-rational | numeric
    param_names: tuple[str, ...]
    domain: str
    predicate: Predicate
    lhs: Builder
    rhs: Builder
    grid: dict = field(default_factory=dict)
    extra: Optional[Extra] = None


REGISTRY: dict[str, IdentityRecord] = {}


def _register(record: IdentityRecord) -> None:
    if record.id in REGISTRY:
        raise UrnsumsError(f"duplicate identity id {record.id}")
    REGISTRY[record.id] = record


def registry_list() -> list[IdentityRecord]:
    """All registered identities, in registration order."""
    return list(REGISTRY.values())


def lookup(identity_id: str) -> IdentityRecord:
    try:
        return REGISTRY[identity_id]
    except KeyError:
        raise DomainError(f"unknown identity id {identity_id!r}") from None


def verify(identity_id: str, params: IdentityParams, tol: float = 1e-9) -> VerifyReport:
    """Evaluate both sides of one identity and compare.

    Raises :class:`DomainError` (naming the violated predicate) when the
    parameters are outside the identity's domain.
    """
    rec = lookup(identity_id)
    for name in rec.param_names:
        if getattr(params, name) is None:
            raise DomainError(f"{identity_id}: missing required parameter {name!r}")
    reason = rec.predicate(params)
    if reason is not None:
        raise DomainError(f"{identity_id}: {reason}")
    lhs = rec.lhs(params)
    rhs = rec.rhs(params)
    report = _compare(rec, params, lhs, rhs, tol)
    if report.passed and rec.extra is not None:
        extra_reason = rec.extra(params)
        if extra_reason is not None:
            report = VerifyReport(rec.id, params.as_dict(), lhs, rhs, "FAIL",
                                  residual=report.residual, bound=report.bound,
                                  reason=extra_reason)
    return report


def _compare(rec: IdentityRecord, params: IdentityParams,
             lhs: Value, rhs: Value, tol: float) -> VerifyReport:
    if isinstance(lhs, Fraction) and isinstance(rhs, Fraction):
        if lhs == rhs:
            return VerifyReport(rec.id, params.as_dict(), lhs, rhs, "exact-equal",
                                residual=0.0, bound=0.0)
        return VerifyReport(rec.id, params.as_dict(), lhs, rhs, "FAIL",
                            residual=abs(float(lhs - rhs)), bound=0.0)
    if rec.exactness == "exact-rational":
        raise UrnsumsError(f"{rec.id}: exact identity produced a numeric side")
    la = lhs if isinstance(lhs, ApproxValue) else ApproxValue.exact(lhs)
    ra = rhs if isinstance(rhs, ApproxValue) else ApproxValue.exact(rhs)
    residual = abs(la.value - ra.value)
    bound = la.error_bound + ra.error_bound
    status = "within-bounds" if residual <= bound + tol else "FAIL"
    return VerifyReport(rec.id, params.as_dict(), lhs, rhs, status,
                        residual=residual, bound=bound)


def sweep(identity_id: str, n_range: Iterable[int],
          param_grid: Optional[dict] = None, tol: float = 1e-9) -> list[VerifyReport]:
    """Verify an identity across a grid; domain-rejected points are skipped."""
    rec = lookup(identity_id)
    names = [p for p in rec.param_names]
    grid = dict(rec.grid)
    if param_grid:
        for key, values in param_grid.items():
            grid[key] = tuple(values)
    axes = [tuple(grid.get(name, ())) for name in names]
    for name, axis in zip(names, axes):
        if not axis:
            raise DomainError(f"{identity_id}: no grid values for parameter {name!r}")
    reports = []
    for n in n_range:
        for combo in itertools.product(*axes):
            kwargs = dict(zip(names, combo))
            params = IdentityParams(n=n, **kwargs)
            reason = rec.predicate(params)
            if reason is not None:
                reports.append(VerifyReport(rec.id, params.as_dict(), None, None,
                                            "skipped", reason=reason))
                continue
            reports.append(verify(identity_id, params, tol=tol))
    return reports


# ---------------------------------------------------------------------------
# shared building blocks

def S(n: int, top, bottom, u=1, v=1) -> Fraction:
    return eval_double_sum(DoubleSumSpec(n, F(top), F(bottom), F(u), F(v)))


_harm = lru_cache(maxsize=None)(harmonic)


def _odd_harmonic(n: int) -> Fraction:
    """sum_{k=0}^{n} 1/(2k+1) = H_{2n+1} - H_n / 2."""
    return _harm(2 * n + 1) - _harm(n) / 2


@lru_cache(maxsize=None)
def _central(n: int) -> Fraction:
    return binom(2 * n, n)


@lru_cache(maxsize=None)
def _two_pow_over_k(n: int) -> Fraction:
    """sum_{k=1}^{n} 2^k / k."""
    total = F(0)
    p = F(1)
    for k in range(1, n + 1):
        p *= 2
        total += p / k
    return total


def _is_negative_integer(q: Fraction) -> bool:
    return q.denominator == 1 and q.numerator < 0


def _is_nonpositive_integer(q: Fraction) -> bool:
    return q.denominator == 1 and q.numerator <= 0


def _ok(_: IdentityParams) -> Optional[str]:
    return None


def _need_b_not_negint(p: IdentityParams) -> Optional[str]:
    if _is_negative_integer(p.b):
        return f"b = {p.b} is a negative integer, excluded by the parameter domain"
    return None


def _need_a_not_negint(p: IdentityParams) -> Optional[str]:
    if _is_negative_integer(p.a):
        return f"a = {p.a} is a negative integer, excluded by the parameter domain"
    return None


def _need_c_nonzero(p: IdentityParams) -> Optional[str]:
    if p.c == 0:
        return "c = 0 cannot carry a geometric weight in the exponent difference"
    return None


def _series_argument_ok(c: Fraction) -> Optional[str]:
    if c == 0 or c == -1:
        return f"c = {c} is excluded (weight or series argument degenerates)"
    if abs(c + 1) <= 1:
        return (f"series argument 1/(c+1) with c = {c} lies outside the open "
                f"unit disk, so the numeric route does not converge")
    return None


# ---------------------------------------------------------------------------
# closed-form term caches for the two heavyweight right-hand sides

@lru_cache(maxsize=None)
def _general_sum_term(k: int, a: Fraction, b: Fraction) -> Fraction:
    inner = eval_inner_prefix(2 * k + a, k - 1, 1) if k >= 1 else F(0)
    bracket = binom(2 * k + a, k) + b * inner / (k + b + 1)
    return bracket / ((k + 1) * binom(2 * k + b + 2, k + 1))


@lru_cache(maxsize=None)
def _nested_sum_term(k: int, a: Fraction, b: Fraction, c: Fraction) -> Fraction:
    inner = eval_inner_prefix(k + a, k, c)
    return inner * c ** (-k) / binom(k + b + 1, k)


@lru_cache(maxsize=None)
def _three_n_term(k: int) -> Fraction:
    ratio = binom(3 * k + 2, k) / binom(2 * k + 1, k)
    return (1 - F(5 * k + 12, 8 * k + 12) * ratio) / (F(2) ** k * k)


@lru_cache(maxsize=None)
def _halved_ratio_sum(k: int) -> Fraction:
    """C(k) = double sum over (k+1, 2k+1) divided by k+1."""
    return S(k, k + 1, 2 * k + 1) / (k + 1)


@lru_cache(maxsize=None)
def _three_n_ratio_sum(k: int) -> Fraction:
    """D(k) = double sum over (3k+2, 2k+1) divided by k+1."""
    return S(k, 3 * k + 2, 2 * k + 1) / (k + 1)


# ---------------------------------------------------------------------------
# registrations

def _reg(id: str, description: str, exactness: str, param_names: Sequence[str],
         domain: str, predicate: Predicate, lhs: Builder, rhs: Builder,
         grid: Optional[dict] = None, extra: Optional[Extra] = None) -> None:
    _register(IdentityRecord(id, description, exactness, tuple(param_names),
                             domain, predicate, lhs, rhs, grid or {}, extra))


_reg(
    "wansum",
    "double sum over (2n+2, 2n+1) as (n+1) times the odd harmonic sum",
    "exact-rational", (), "n >= 0", _ok,
    lambda p: S(p.n, 2 * p.n + 2, 2 * p.n + 1),
    lambda p: (p.n + 1) * _odd_harmonic(p.n),
)

_reg(
    "wansum_b",
    "double sum over (2n+1, 2n) as odd harmonic sum plus a central-binomial term",
    "exact-rational", (), "n >= 0", _ok,
    lambda p: S(p.n, 2 * p.n + 1, 2 * p.n),
    lambda p: (F(4) ** p.n) / (2 * _central(p.n)) + (p.n + F(1, 2)) * _odd_harmonic(p.n),
)

_reg(
    "thm1_general",
    "two-parameter double sum over (2n+a+2, 2n+b+1) as a single k-sum",
    "exact-rational", ("a", "b"), "b not a negative integer", _need_b_not_negint,
    lambda p: S(p.n, 2 * p.n + p.a + 2, 2 * p.n + p.b + 1) / (2 * p.n + p.b + 2),
    lambda p: sum((_general_sum_term(k, p.a, p.b) for k in range(p.n + 1)), F(0)),
    grid={"a": A_GRID, "b": B_GRID},
)

_reg(
    "thm2_sum_form",
    "weighted double sum over (n+a+1, n+b) re-expressed as a nested k-sum",
    "exact-rational", ("a", "b", "c"),
    "b not a negative integer, c != 0",
    lambda p: _need_b_not_negint(p) or _need_c_nonzero(p),
    lambda p: S(p.n, p.n + p.a + 1, p.n + p.b, p.c, 1 / p.c) / (p.n + p.b + 1),
    lambda p: sum((_nested_sum_term(k, p.a, p.b, p.c) for k in range(p.n + 1)),
                  F(0)) / (p.b + 1),
    grid={"a": A_GRID, "b": B_GRID, "c": C_GRID},
)


def _thm2_generic_predicate(p: IdentityParams) -> Optional[str]:
    base = _need_b_not_negint(p) or _series_argument_ok(p.c)
    if base:
        return base
    if _is_nonpositive_integer(p.a - p.b):
        return f"a-b = {p.a - p.b} is a nonpositive integer (use the degenerate form)"
    if p.a.denominator == 1 and -p.n - 1 <= p.a <= -1:
        return f"a = {p.a} places an unshielded pole in a lower series parameter"
    return None


def _thm2_generic_rhs(p: IdentityParams) -> Value:
    x = 1 / (p.c + 1)
    scale = pochhammer(p.a + 1, p.n + 1) / pochhammer(p.b + 1, p.n + 1)
    f32 = hyp3f2(1, p.a - p.b, p.n + p.a + 2, p.a - p.b + 1, p.a + 1, x)
    f21 = hyp2f1(1, p.a - p.b, p.a - p.b + 1, x)
    return scale * f32 - f21


_reg(
    "thm2_hyp_generic",
    "weighted double sum over (n+a+1, n+b) in hypergeometric closed form",
    "numeric", ("a", "b", "c"),
    "b not a negative integer, a-b not a nonpositive integer, |c+1| > 1",
    _thm2_generic_predicate,
    lambda p: (p.a - p.b) * (p.c + 1) / ((p.n + p.b + 1) * p.c)
    * S(p.n, p.n + p.a + 1, p.n + p.b, p.c, 1 / p.c),
    _thm2_generic_rhs,
    grid={"a": A_GRID, "b": B_GRID, "c": C_GRID},
)


def _thm2_degenerate_predicate(p: IdentityParams) -> Optional[str]:
    base = _need_b_not_negint(p) or _series_argument_ok(p.c)
    if base:
        return base
    d = p.b - p.a
    if not _is_nonpositive_integer(p.a - p.b):
        return f"a-b = {p.a - p.b} is not a nonpositive integer (use the generic form)"
    if p.b.denominator == 1 and d >= p.n + p.b + 2:
        return "the closed form hits a gamma pole for this (n, a, b)"
    return None


def _thm2_degenerate_rhs(p: IdentityParams) -> Value:
    d = int(p.b - p.a)
    x = 1 / (p.c + 1)
    f32 = hyp3f2(1, 1, p.n + p.b + 3, 2, p.b + 2, x)
    head = (p.n + p.b + 2) / ((p.b + 1) * (p.c + 1)) * f32
    ell_sum = F(0)
    for ell in range(1, d + 1):
        bracket = pochhammer(p.b + 1 - ell, ell) / pochhammer(p.n + p.b + 2 - ell, ell) - 1
        ell_sum += (p.c + 1) ** ell / ell * bracket
    return (head + digamma_diff(p.b + 1, p.n + 1)
            + log_of_rational(p.c / (p.c + 1)) - ell_sum)


_reg(
    "thm2_hyp_degenerate",
    "degenerate-parameter form of the weighted double sum, with digamma terms",
    "numeric", ("a", "b", "c"),
    "b not a negative integer, a-b a nonpositive integer, |c+1| > 1",
    _thm2_degenerate_predicate,
    lambda p: (p.c + 1) ** (int(p.b - p.a) + 1) / ((p.n + p.b + 1) * p.c)
    * S(p.n, p.n + p.a + 1, p.n + p.b, p.c, 1 / p.c),
    _thm2_degenerate_rhs,
    grid={"a": A_GRID, "b": B_GRID, "c": C_GRID},
)

_reg(
    "mabinogion_3n",
    "double sum over (3n+1, 3n) up to 2n, tied to an urn absorption time",
    "numeric", (), "n >= 0", _ok,
    lambda p: F(2, 3 * p.n + 1) * S(2 * p.n, 3 * p.n + 1, 3 * p.n),
    lambda p: (digamma_diff(p.n + 1, 2 * p.n + 1) - log_of_rational(2)
               + F(3 * p.n + 2, 2 * p.n + 2)
               * hyp3f2(1, 1, 3 * p.n + 3, 2, p.n + 2, F(1, 2))),
)


@lru_cache(maxsize=None)
def _cor3_b0_term(k: int, a: Fraction) -> Fraction:
    return binom(2 * k + a, k) / ((2 * k + 1) * _central(k))


def _cor3_b0_rhs(p: IdentityParams) -> Fraction:
    return (p.n + 1) * sum((_cor3_b0_term(k, p.a) for k in range(p.n + 1)), F(0))


_reg(
    "cor3_b0",
    "double sum over (2n+a+2, 2n+1) as a central-binomial-ratio k-sum",
    "exact-rational", ("a",), "any rational a", _ok,
    lambda p: S(p.n, 2 * p.n + p.a + 2, 2 * p.n + 1),
    _cor3_b0_rhs,
    grid={"a": A_GRID},
)


def _cor3_a1_rhs(p: IdentityParams) -> Fraction:
    total = F(0)
    four_k = F(1)
    for k in range(p.n + 1):
        bracket = binom(2 * k + 1, k) + four_k * p.b / (k + 1)
        total += bracket / ((k + p.b + 1) * binom(2 * k + p.b + 2, k + 1))
        four_k *= 4
    return (2 * p.n + p.b + 2) * total


_reg(
    "cor3_a1",
    "double sum over (2n+3, 2n+b+1) as a k-sum with a 4^k correction",
    "exact-rational", ("b",), "b not a negative integer", _need_b_not_negint,
    lambda p: S(p.n, 2 * p.n + 3, 2 * p.n + p.b + 1),
    _cor3_a1_rhs,
    grid={"b": B_GRID},
)


def _cor3_a0_rhs(p: IdentityParams) -> Fraction:
    total = F(0)
    power = F(1)   # (c+1)^k
    den = F(1)     # binom(k+b+1, k)
    for k in range(p.n + 1):
        if k > 0:
            power *= p.c + 1
            den *= (p.b + 1 + k) / k
        total += power / den
    return (p.n + p.b + 1) / (p.b + 1) * total


_reg(
    "cor3_a0",
    "inverse-weighted double sum over (n+1, n+b) as a geometric k-sum",
    "exact-rational", ("b", "c"),
    "b not a negative integer, c != 0",
    lambda p: _need_b_not_negint(p) or _need_c_nonzero(p),
    lambda p: S(p.n, p.n + 1, p.n + p.b, 1 / p.c, p.c),
    _cor3_a0_rhs,
    grid={"b": B_GRID, "c": C_GRID},
)

_reg(
    "cor3_a1b0",
    "inverse-weighted double sum over (n+2, n) as a telescoped geometric k-sum",
    "exact-rational", ("c",), "c != 0", _need_c_nonzero,
    lambda p: p.c * S(p.n, p.n + 2, p.n, 1 / p.c, p.c),
    lambda p: sum((F(p.n + 1, k + 1) * ((p.c + 1) ** (k + 1) - 1)
                   for k in range(p.n + 1)), F(0)),
    grid={"c": C_GRID},
)

_reg(
    "cor4_odd",
    "double sum over (2n+2, 2n+1) in harmonic-number form",
    "exact-rational", (), "n >= 0", _ok,
    lambda p: S(p.n, 2 * p.n + 2, 2 * p.n + 1),
    lambda p: (p.n + 1) * (_harm(2 * p.n + 1) - _harm(p.n) / 2),
)

_reg(
    "cor4_odd2",
    "double sum over (2n+3, 2n+1) as (n+1) H_{n+1}",
    "exact-rational", (), "n >= 0", _ok,
    lambda p: S(p.n, 2 * p.n + 3, 2 * p.n + 1),
    lambda p: (p.n + 1) * _harm(p.n + 1),
)

_reg(
    "cor4_even",
    "double sum over (2n+1, 2n) in harmonic plus central-binomial form",
    "exact-rational", (), "n >= 0", _ok,
    lambda p: S(p.n, 2 * p.n + 1, 2 * p.n),
    lambda p: F(4) ** p.n / (2 * _central(p.n))
    + (p.n + F(1, 2)) * (_harm(2 * p.n + 1) - _harm(p.n) / 2),
)

_reg(
    "cor4_even2",
    "double sum over (2n+2, 2n) in harmonic plus central-binomial form",
    "exact-rational", (), "n >= 0", _ok,
    lambda p: S(p.n, 2 * p.n + 2, 2 * p.n),
    lambda p: F(4) ** p.n / _central(p.n) + (p.n + F(1, 2)) * _harm(p.n),
)

_reg(
    "h2log2_remark",
    "a 3F2 at 1/2 evaluating to H_n + 2 log 2",
    "numeric", (), "n >= 0", _ok,
    lambda p: F(2 * p.n + 1, p.n + 1) * hyp3f2(1, 1, 2 * p.n + 2, 2, p.n + 2, F(1, 2)),
    lambda p: _harm(p.n) + 2 * log_of_rational(2),
)

_reg(
    "rem_fast",
    "the 2^k/k partial sum as a fast-converging 3F2 plus harmonic terms",
    "numeric", (), "n >= 0", _ok,
    lambda p: _two_pow_over_k(p.n + 1),
    lambda p: (F(p.n + 2, 2) * hyp3f2(1, 1, p.n + 3, 2, 2, F(1, 2))
               + _harm(p.n + 1) - log_of_rational(2)),
)


def _shift_up_rhs(p: IdentityParams) -> Fraction:
    corr = F(0)
    ref = binom(2 * p.n + 2, p.n + 1)
    num = ref
    pow2 = F(1)
    for k in range(1, p.m + 1):
        num *= F(2 * p.n + 2 + k, p.n + 1 + k)
        corr += (num / ref - 1) / (pow2 * k)
        pow2 *= 2
    return F(2) ** p.m * (p.n + 1) * (_harm(p.n + 1) - corr)


_reg(
    "shift_up",
    "double sum over (2n+3+m, 2n+1) after raising the numerator index m times",
    "exact-rational", ("m",), "m >= 0",
    lambda p: None if p.m >= 0 else f"m = {p.m} must be >= 0",
    lambda p: S(p.n, 2 * p.n + 3 + p.m, 2 * p.n + 1),
    _shift_up_rhs,
    grid={"m": M_GRID},
)


def _shift_down_rhs(p: IdentityParams) -> Fraction:
    corr = F(0)
    ref = binom(2 * p.n + 2, p.n + 1)
    num = ref
    pow2 = F(2)
    for k in range(1, p.m + 1):
        num *= F(2 * p.n + 3 - k - (p.n + 1), 2 * p.n + 3 - k)  # = (n+2-k)/(2n+3-k)
        corr += pow2 * 2 * (num / ref - 1) / k
        pow2 *= 2
    return (p.n + 1) / F(2) ** (p.m + 1) * (2 * _harm(2 * p.n + 1) - _harm(p.n) - corr)


_reg(
    "shift_down",
    "double sum over (2n+2-m, 2n+1) after lowering the numerator index m times",
    "exact-rational", ("m",), "m >= 0",
    lambda p: None if p.m >= 0 else f"m = {p.m} must be >= 0",
    lambda p: S(p.n, 2 * p.n + 2 - p.m, 2 * p.n + 1),
    _shift_down_rhs,
    grid={"m": M_GRID},
)


def _shift_denominator_rhs(p: IdentityParams) -> Fraction:
    n, m = p.n, p.m
    big = F(2) ** (2 * n + 2)
    ref = binom(2 * n + 2, n + 1)
    corr = F(0)
    den = binom(2 * n + 1, n + 1)
    pow2 = F(1)
    for k in range(1, m + 1):
        den *= F(n + 1 - k, 2 * n + 2 - k)    # binom(2n+1-k, n+1) update
        corr += ((big * k / (2 * n + 2 - k) - ref) / (2 * den) + 1) / (pow2 * k)
        pow2 *= 2
    head = _harm(n) + F(2) ** (2 * n + 1) / ((n + 1) * binom(2 * n + 1, n + 1))
    return F(2) ** (m - 1) * (2 * n + 1 - m) * (head + corr)


_reg(
    "shift_denominator",
    "double sum over (2n+2, 2n-m) after lowering the denominator index m times",
    "exact-rational", ("m",), "0 <= m <= n",
    lambda p: None if 0 <= p.m <= p.n else f"m = {p.m} must lie in [0, n]",
    lambda p: S(p.n, 2 * p.n + 2, 2 * p.n - p.m),
    _shift_denominator_rhs,
    grid={"m": M_GRID},
)

_reg(
    "recip_single",
    "single sum of reciprocal binomials as a scaled 2^k/k sum",
    "exact-rational", (), "n >= 0", _ok,
    lambda p: sum((1 / binom(p.n, j) for j in range(p.n + 1)), F(0)),
    lambda p: F(p.n + 1) / F(2) ** (p.n + 1) * _two_pow_over_k(p.n + 1),
)

_reg(
    "symmetry_lemma",
    "fold-symmetry evaluation of the (n+1)-prefix sum against 1/binom(n, j)",
    "exact-rational", (), "n >= 0", _ok,
    lambda p: S(p.n, p.n + 1, p.n),
    lambda p: F(2) ** p.n * sum((1 / binom(p.n, j) for j in range(p.n + 1)), F(0)),
)

_reg(
    "recip_shift",
    "double sum over (n+1-m, n) as a 2^k/k sum with a shift correction",
    "exact-rational", ("m",), "0 <= m <= n+1",
    lambda p: None if 0 <= p.m <= p.n + 1 else f"m = {p.m} must lie in [0, n+1]",
    lambda p: S(p.n, p.n + 1 - p.m, p.n),
    lambda p: F(p.n + 1) / F(2) ** (p.m + 1)
    * (_two_pow_over_k(p.n + 1) + _two_pow_over_k(p.m)),
    grid={"m": M_GRID},
)

_reg(
    "recip_whole",
    "double sum over (n+1, n) as a scaled 2^k/k sum",
    "exact-rational", (), "n >= 0", _ok,
    lambda p: S(p.n, p.n + 1, p.n),
    lambda p: F(p.n + 1, 2) * _two_pow_over_k(p.n + 1),
)


def _many_faces_forms(p: IdentityParams) -> list[Fraction]:
    n = p.n
    f1 = S(n, n + 1, 2 * n + 1)
    f2 = sum((F(-1) ** k * binom(n + 1, 2 * k + 1) / binom(n, k)
              for k in range(n // 2 + 1)), F(0))
    f3 = (n + 1) * sum((F(2) ** k / (k * binom(n + 1 + k, k))
                        for k in range(1, n + 2)), F(0))
    f4 = F(n + 1) / F(2) ** (n + 1) * _two_pow_over_k(n + 1)
    f5 = S(n, n + 1, n) / F(2) ** n
    return [f1, f2, f3, f4, f5]


def _many_faces_extra(p: IdentityParams) -> Optional[str]:
    forms = _many_faces_forms(p)
    for i, value in enumerate(forms[1:], start=2):
        if value != forms[0]:
            return f"form {i} disagrees: {forms[0]} vs {value}"
    return None


_reg(
    "many_faces",
    "double sum over (n+1, 2n+1) and its four equivalent single-sum shapes",
    "exact-rational", (), "n >= 0", _ok,
    lambda p: _many_faces_forms(p)[0],
    lambda p: _many_faces_forms(p)[3],
    extra=_many_faces_extra,
)

_reg(
    "ck_recurrence",
    "two-term recurrence satisfied by the normalized (k+1, 2k+1) double sum",
    "exact-rational", (), "n >= 1",
    lambda p: None if p.n >= 1 else "the recurrence needs n >= 1",
    lambda p: 2 * _halved_ratio_sum(p.n) - _halved_ratio_sum(p.n - 1),
    lambda p: F(2, p.n + 1),
)

_reg(
    "three_n",
    "normalized double sum over (3n+2, 2n+1) from its solved step recurrence",
    "exact-rational", (), "n >= 1 (the closed form starts at the n = 1 base case)",
    lambda p: None if p.n >= 1 else "closed form valid for n >= 1 only",
    lambda p: _three_n_ratio_sum(p.n),
    lambda p: F(2) ** p.n * (F(3, 4) + sum((_three_n_term(k) for k in range(1, p.n)),
                                           F(0))),
)

_reg(
    "alt_inner",
    "alternating prefix of a binomial row collapsing to one signed binomial",
    "exact-rational", ("m",), "m >= 0",
    lambda p: None if p.m >= 0 else f"m = {p.m} must be >= 0",
    lambda p: eval_inner_prefix(p.n, p.m, -1),
    lambda p: F(-1) ** p.m * binom(p.n - 1, p.m),
    grid={"m": M_GRID},
)


def _alt_recip_inner_extra(p: IdentityParams) -> Optional[str]:
    n, m = p.n, p.m
    scale = F(n + 1, n + 2)
    tail = F(-1) ** m / binom(n + 1, m + 1)
    running = F(0)
    for i in range(m, -1, -1):
        running += F(-1) ** i / binom(n, i)
        expected = scale * (tail + F(-1) ** i / binom(n + 1, i))
        if running != expected:
            return f"window starting at i = {i} disagrees"
    return None


_reg(
    "alt_recip_inner",
    "alternating window of reciprocal binomials in two-endpoint closed form",
    "exact-rational", ("m",), "0 <= m <= n",
    lambda p: None if 0 <= p.m <= p.n else f"m = {p.m} must lie in [0, n]",
    lambda p: sum((F(-1) ** j / binom(p.n, j) for j in range(p.m + 1)), F(0)),
    lambda p: F(p.n + 1, p.n + 2)
    * (F(-1) ** p.m / binom(p.n + 1, p.m + 1) + 1 / binom(p.n + 1, 0)),
    grid={"m": M_GRID},
    extra=_alt_recip_inner_extra,
)

_reg(
    "alt_plain",
    "inner-alternating double sum over (n+a+1, n+a) collapsing to a parity bit",
    "exact-rational", ("a",), "a not a negative integer", _need_a_not_negint,
    lambda p: S(p.n, p.n + p.a + 1, p.n + p.a, -1, 1),
    lambda p: (F(-1) ** p.n + 1) / 2,
    grid={"a": (F(0), F(1), F(1, 2), F(-1, 2))},
)

_reg(
    "alt_shift_n",
    "sign-flipped inner-alternating double sum over (n+2, n) in harmonic form",
    "exact-rational", (), "n >= 0", _ok,
    lambda p: F(-1) ** p.n * S(p.n, p.n + 2, p.n, -1, 1),
    lambda p: (p.n + 1) * (_harm(p.n + 1) - _harm((p.n + 1) // 2)),
)

_reg(
    "alt_c2",
    "double sum over (n+2, n) with weight (-2)^(j-i) in harmonic form",
    "exact-rational", (), "n >= 0", _ok,
    lambda p: S(p.n, p.n + 2, p.n, F(-1, 2), -2),
    lambda p: (p.n + 1) * (_harm(p.n + 1) - _harm((p.n + 1) // 2) / 2),
)


def _alt_general_predicate(p: IdentityParams) -> Optional[str]:
    base = _need_b_not_negint(p)
    if base:
        return base
    if p.a - p.b == 1:
        return "a = b + 1 is the digamma limit case (see alt_abp1)"
    return None


_reg(
    "alt_general",
    "fully alternating double sum over (n+a+1, n+b) as a gamma-ratio expression",
    "exact-rational", ("a", "b"),
    "b not a negative integer, a != b + 1",
    _alt_general_predicate,
    lambda p: S(p.n, p.n + p.a + 1, p.n + p.b, -1, -1),
    lambda p: (pochhammer(p.a, p.n + 1) / pochhammer(p.b + 1, p.n)
               - p.n - p.b - 1) / (p.a - p.b - 1),
    grid={"a": A_GRID, "b": B_GRID},
)

_reg(
    "alt_ab",
    "fully alternating double sum over (n+a+1, n+a) collapsing to n+1",
    "exact-rational", ("a",), "a not a negative integer", _need_a_not_negint,
    lambda p: S(p.n, p.n + p.a + 1, p.n + p.a, -1, -1),
    lambda p: F(p.n + 1),
    grid={"a": A_GRID},
)

_reg(
    "alt_abp1",
    "fully alternating double sum over (n+b+2, n+b) as a digamma difference",
    "exact-rational", ("b",), "b not a negative integer", _need_b_not_negint,
    lambda p: S(p.n, p.n + p.b + 2, p.n + p.b, -1, -1),
    lambda p: (p.n + p.b + 1) * digamma_diff(p.b + 1, p.n + 1),
    grid={"b": B_GRID},
)

_reg(
    "alt_whole",
    "outer-alternating double sum over (n+1, n) in closed form",
    "exact-rational", (), "n >= 0", _ok,
    lambda p: S(p.n, p.n + 1, p.n, 1, -1),
    lambda p: F(p.n + 1, 2 * p.n + 4) * (1 + F(-1) ** p.n * (F(2) ** (p.n + 2) - 1)),
)

_reg(
    "alt_even",
    "outer-alternating double sum over (2n+1, 2n) in closed form",
    "exact-rational", (), "n >= 0", _ok,
    lambda p: S(p.n, 2 * p.n + 1, 2 * p.n, 1, -1),
    lambda p: F(-1) ** p.n * F(4) ** p.n / (2 * _central(p.n))
    + F(2 * p.n + 1, p.n + 1) * (F(-1) ** p.n + 1) / 4,
)


# ---------------------------------------------------------------------------
# recurrence checks

RECURRENCE_KINDS = ("ck", "d3n", "iterative_up", "iterative_recip")


def check_recurrences(kind: str, k_max: int = 50, n_max: int = 40,
                      m_max: int = 10) -> list[VerifyReport]:
    """Exact checks of the step recurrences behind the closed forms.

    kind "ck":   2 C(k) - C(k-1) = 2/(k+1),      k in [1, k_max]
    kind "d3n":  D(k+1) - 2 D(k) = explicit term, k in [1, k_max]
    kind "iterative_up":    numerator-index shift, n <= n_max, m <= m_max
    kind "iterative_recip": reciprocal-row shift,  n <= n_max, m <= m_max
    """
    if kind == "ck":
        return [_recurrence_report("ck", {"k": k},
                                   2 * _halved_ratio_sum(k) - _halved_ratio_sum(k - 1),
                                   F(2, k + 1))
                for k in range(1, k_max + 1)]
    if kind == "d3n":
        out = []
        for k in range(1, k_max + 1):
            step = F(2, k) - F(5 * k + 12) / (2 * k * (2 * k + 3)) \
                * binom(3 * k + 2, k) / binom(2 * k + 1, k)
            out.append(_recurrence_report(
                "d3n", {"k": k},
                _three_n_ratio_sum(k + 1) - 2 * _three_n_ratio_sum(k), step))
        return out
    if kind == "iterative_up":
        return _check_iterative_up(n_max, m_max)
    if kind == "iterative_recip":
        return _check_iterative_recip(n_max, m_max)
    raise DomainError(f"unknown recurrence kind {kind!r}; "
                      f"expected one of {RECURRENCE_KINDS}")


def _recurrence_report(kind: str, params: dict, lhs: Fraction,
                       rhs: Fraction) -> VerifyReport:
    status = "exact-equal" if lhs == rhs else "FAIL"
    residual = 0.0 if status == "exact-equal" else abs(float(lhs - rhs))
    return VerifyReport(kind, params, lhs, rhs, status, residual=residual, bound=0.0)


def _check_iterative_up(n_max: int, m_max: int) -> list[VerifyReport]:
    tops = range(-m_max, n_max + 1)
    prefix = {x: [eval_inner_prefix(x, j, 1) for j in range(n_max + 1)] for x in tops}
    row = {x: [binom(x, j) for j in range(n_max + 1)] for x in tops}
    out = []
    for n in range(n_max + 1):
        for m in range(m_max + 1):
            for j in range(n + 1):
                rhs = F(2) ** m * prefix[n - m][j] \
                    - sum((F(2) ** (k - 1) * row[n - k][j] for k in range(1, m + 1)),
                          F(0))
                out.append(_recurrence_report("iterative_up",
                                              {"n": n, "m": m, "j": j},
                                              prefix[n][j], rhs))
    return out


def _check_iterative_recip(n_max: int, m_max: int) -> list[VerifyReport]:
    limit = n_max + m_max
    recip_prefix: dict[int, list[Fraction]] = {}
    recip_row: dict[int, list[Fraction]] = {}
    for x in range(limit + 1):
        rows = [1 / binom(x, i) for i in range(x + 1)]
        recip_row[x] = rows
        acc, prefixes = F(0), []
        for r in rows:
            acc += r
            prefixes.append(acc)
        recip_prefix[x] = prefixes
    out = []
    for n in range(n_max + 1):
        for m in range(m_max + 1):
            for k in range(n + 1):
                rhs = F(2) ** m * (n + 1) / (n + m + 1) * recip_prefix[n + m][k]
                for j in range(1, m + 1):
                    rhs += F(2) ** (j - 1) * (n + 1) / (n + j + 1) \
                        * (recip_row[n + j][k + 1] - 1)
                out.append(_recurrence_report("iterative_recip",
                                              {"n": n, "m": m, "k": k},
                                              recip_prefix[n][k], rhs))
    return out
