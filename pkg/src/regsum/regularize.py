"""Finite evaluation of divergent operator series against polynomials.

The central reduction: for a series sum a_n T^n P(x) with T translation
invariant, split T = c + R (c the constant term, R degree lowering) and
collapse the whole series to the finite combination

    sum_{k=0}^{deg P} v_k / k! * (R^k P)(x),

where v_k is the regularized k-th derivative value sum_n a_n [n]_k c^(n-k).
The v_k come from exact closed-form tables where a series carries one, and
from the numeric engines in `summation` otherwise, so the two routes check
each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .algebra import Polynomial, RationalLike, as_rational
from .operators import OperatorSpec
from .power_series import PowerSeries, cosh_series, working_order
from .summation import (
    ConvergenceReport,
    SeriesSpec,
    SummationMethod,
    cauchy_product,
    evaluate,
    falling_factorial_value,
)

PROV_EXACT = "exact-closed-form"
PROV_CESARO = "numeric-cesaro"
PROV_ABEL = "numeric-abel"


class NotRegularError(RuntimeError):
    """A required regularized derivative failed to settle within budget."""

    def __init__(self, message: str, report: Optional[ConvergenceReport] = None):
        super().__init__(message)
        self.report = report


class InexactDataError(TypeError):
    """An exact-only construction was fed numerically obtained values."""


@dataclass
class RegularizedDerivatives:
    """Derivative values v_k of a series' generating function at a point c,
    in the regularized sense, for k = 0..k_max; exact entries are Fraction,
    numeric ones float, with per-entry provenance strings."""

    c: Fraction
    values: list[Union[Fraction, float]]
    provenance: list[str]
    method: SummationMethod
    reports: list[Optional[ConvergenceReport]]

    @property
    def k_max(self) -> int:
        return len(self.values) - 1

    @property
    def is_exact(self) -> bool:
        return all(isinstance(v, Fraction) for v in self.values)


@dataclass(frozen=True)
class EulerTable:
    """Zigzag integers E_0..E_n from the reciprocal cosh expansion."""

    values: tuple[int, ...]

    def __getitem__(self, k: int) -> int:
        return self.values[k]

    def __len__(self) -> int:
        return len(self.values)

    def to_json_list(self) -> list[str]:
        return [str(v) for v in self.values]


def reg_derivatives(
    f: SeriesSpec,
    c: RationalLike,
    method: SummationMethod,
    k_max: int,
) -> RegularizedDerivatives:
    """Compute v_k = sum_n a_n [n]_k c^(n-k) for k = 0..k_max.

    Routes, per k: the series' own closed-form table when it has one for
    (k, c, method); at c = 0 the sum collapses to k! a_k exactly; otherwise
    the numeric engine named by the method.  Terms with n < k vanish with
    [n]_k, so no negative power of c is ever formed; for |c| < 1 the numeric
    series decays and the order-0 mean (plain classical summation) already
    converges, which the auto escalation finds on its own.

    Raises NotRegularError when a numeric entry fails to converge within the
    method's budget, and for method tag "exact" when no closed form exists.
    """
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")
    c = as_rational(c)
    values: list[Union[Fraction, float]] = []
    provenance: list[str] = []
    reports: list[Optional[ConvergenceReport]] = []
    for k in range(k_max + 1):
        if f.exact_reg_deriv is not None:
            closed = f.exact_reg_deriv(k, c, method)
            if closed is not None:
                values.append(closed)
                provenance.append(PROV_EXACT)
                reports.append(None)
                continue
        if c == 0:
            values.append(Fraction(math.factorial(k)) * f.term(k))
            provenance.append(PROV_EXACT)
            reports.append(None)
            continue
        if method.tag == "exact":
            raise NotRegularError(
                f"no closed form for derivative order {k} of {f.label or f.kind} "
                f"at c={c}; use a numeric method"
            )
        derived = _derivative_series(f, c, k)
        report = evaluate(derived, method)
        if not report.converged:
            raise NotRegularError(
                f"derivative order {k} of {f.label or f.kind} at c={c} did not "
                f"converge under {method.describe()} "
                f"(residual {report.residual:.3g}, tol {method.tol:g})",
                report,
            )
        values.append(report.value)
        provenance.append(PROV_ABEL if method.tag == "abel" else PROV_CESARO)
        reports.append(report)
    return RegularizedDerivatives(c, values, provenance, method, reports)


def _derivative_series(f: SeriesSpec, c: Fraction, k: int) -> SeriesSpec:
    def term(n: int) -> Fraction:
        if n < k:
            return Fraction(0)
        return f.term(n) * falling_factorial_value(n, k) * c ** (n - k)

    return SeriesSpec(term, kind="custom", label=f"d^{k}[{f.label or f.kind}]@{c}")


def reg_operator(
    f: SeriesSpec,
    T: OperatorSpec,
    method: SummationMethod,
    degree_cap: int,
) -> OperatorSpec:
    """The finite operator sum_{k=0}^{degree_cap} v_k/k! (T - c)^k, built by
    symbol arithmetic from exact derivative data.

    Numeric float entries cannot enter the exact symbol ring; when any
    needed v_k is not a Fraction this raises InexactDataError (evaluate
    through reg_sum instead, which combines floats scalar-wise).
    """
    if degree_cap < 0:
        raise ValueError("degree_cap must be nonnegative")
    c, _ = T.remainder()
    derivs = reg_derivatives(f, c, method, degree_cap)
    if not derivs.is_exact:
        raise InexactDataError(
            "derivative data contains numeric entries; the exact operator form "
            "needs closed-form values"
        )
    order = max(T.symbol.order, working_order(degree_cap))
    base = T.symbol
    if base.order < order:
        base = PowerSeries(list(base.coeffs) + [Fraction(0)] * (order - base.order))
    r_symbol = base - PowerSeries.constant(c, order)
    acc = PowerSeries.constant(0, order)
    power = PowerSeries.constant(1, order)
    for k in range(degree_cap + 1):
        v = derivs.values[k]
        if v != 0:
            acc = acc + power * (v / math.factorial(k))
        power = power * r_symbol
    return OperatorSpec(acc, label=f"regularized[{f.label or f.kind}]")


def reg_sum(
    f: SeriesSpec,
    T: OperatorSpec,
    P: Polynomial,
    x: RationalLike,
    method: SummationMethod,
) -> tuple[Union[Fraction, float], ConvergenceReport]:
    """Value of the regularized series sum a_n (T^n P)(x).

    Collapses to sum_{k<=deg P} v_k/k! (R^k P)(x) with (c, R) = T split at
    its constant.  With fully exact derivative data the value is an exact
    Fraction; otherwise a float combined from the numeric v_k.  The report
    aggregates the numeric legs: order_used is the deepest summation order
    (or the reduction degree on the all-exact route), terms_used the total
    terms consumed, residual the worst gap.
    """
    x = as_rational(x)
    if P.is_zero:
        report = ConvergenceReport(
            value=0.0, exact=Fraction(0), method_used=method, order_used=0,
            terms_used=0, converged=True, residual=0.0, provenance=PROV_EXACT,
        )
        return Fraction(0), report
    cap = len(P.coeffs) - 1
    c, R = T.remainder()
    derivs = reg_derivatives(f, c, method, cap)

    applied: list[Fraction] = []
    current = P
    for _ in range(cap + 1):
        applied.append(current(x))
        current = R.apply(current)

    if derivs.is_exact:
        total = Fraction(0)
        for k in range(cap + 1):
            total += derivs.values[k] * applied[k] / math.factorial(k)
        report = ConvergenceReport(
            value=float(total), exact=total, method_used=method, order_used=cap,
            terms_used=cap + 1, converged=True, residual=0.0, provenance=PROV_EXACT,
        )
        return total, report

    total_f = 0.0
    for k in range(cap + 1):
        total_f += float(derivs.values[k]) * float(applied[k]) / math.factorial(k)
    numeric = [r for r in derivs.reports if r is not None]
    provenance = "+".join(sorted(set(derivs.provenance)))
    report = ConvergenceReport(
        value=total_f,
        exact=None,
        method_used=method,
        order_used=max((r.order_used for r in numeric), default=0),
        terms_used=sum(r.terms_used for r in numeric),
        converged=all(r.converged for r in numeric),
        residual=max((r.residual for r in numeric), default=0.0),
        provenance=provenance,
    )
    return total_f, report


def euler_numbers(n_max: int) -> EulerTable:
    """E_k = k! times the t^k coefficient of 1/cosh t, exact integers."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    inv = cosh_series(n_max).inverse()
    values = []
    for k in range(n_max + 1):
        v = inv.coeffs[k] * math.factorial(k)
        if v.denominator != 1:
            raise ArithmeticError(f"zigzag coefficient {k} is not an integer: {v}")
        values.append(v.numerator)
    return EulerTable(tuple(values))


def euler_alt_sum(P: Polynomial, h: RationalLike, x: RationalLike) -> Fraction:
    """Closed form for the alternating shifted sum of a polynomial:
    (1/2) sum_k E_k h^k/(2^k k!) P^(k)(x - h/2), a finite exact sum."""
    h = as_rational(h)
    x = as_rational(x)
    if P.is_zero:
        return Fraction(0)
    deg = len(P.coeffs) - 1
    table = euler_numbers(deg)
    point = x - h / 2
    total = Fraction(0)
    current = P
    for k in range(deg + 1):
        ek = table[k]
        if ek != 0:
            total += ek * h ** k * current(point) / (2 ** k * math.factorial(k))
        current = current.derivative()
    return total / 2


def alt_power_sum(m: int) -> Fraction:
    """Regularized alternating power sum over n of (-1)^n n^m, in closed
    form: 2^-(m+1) sum_k (-1)^(m-k) E_k binom(m,k)."""
    if m < 0:
        raise ValueError("power must be nonnegative")
    table = euler_numbers(m)
    total = 0
    for k in range(m + 1):
        sign = -1 if (m - k) % 2 else 1
        total += sign * table[k] * math.comb(m, k)
    return Fraction(total, 2 ** (m + 1))


def alt_binom_sum(m: int) -> Fraction:
    """Regularized alternating sum over n of (-1)^n binom(n,m): equals
    (-1)^m / 2^(m+1)."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    return Fraction((-1) ** m, 2 ** (m + 1))


def alt_binom_sum_telescoped(m: int) -> Fraction:
    """The same value through the intermediate collapsing sum
    (1/2) sum_k (-1)^k/2^k binom(0,m-k); only the k = m term survives.
    The k = 0 term is included so the empty case m = 0 yields 1/2."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    total = Fraction(0)
    for k in range(m + 1):
        b = math.comb(0, m - k) if m - k == 0 else 0
        if b:
            total += Fraction((-1) ** k, 2 ** k) * b
    return total / 2


def product_rule_check(
    f: SeriesSpec,
    g: SeriesSpec,
    n: int,
    method: SummationMethod,
) -> tuple[float, float]:
    """Both sides of the derivative product rule at the boundary point 1:
    left, the n-th regularized derivative of the coefficientwise product
    series; right, the binomial convolution of the factors' derivative
    values.  Returned as floats for tolerance assertion; non-convergence
    raises NotRegularError."""
    if n < 0:
        raise ValueError("derivative order must be nonnegative")
    one = Fraction(1)
    prod = cauchy_product(f, g)
    lhs = float(reg_derivatives(prod, one, method, n).values[n])
    left_tab = reg_derivatives(f, one, method, n).values
    right_tab = reg_derivatives(g, one, method, n).values
    rhs = 0.0
    for k in range(n + 1):
        rhs += math.comb(n, k) * float(left_tab[k]) * float(right_tab[n - k])
    return lhs, rhs
