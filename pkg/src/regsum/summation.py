"""Numeric summation of (possibly divergent) series.

Three methods share one report shape: classical partial sums, iterated-mean
summation of integer order k (ratio of k+1-fold prefix sums to binom(n+k,k)),
and power-boundary summation (evaluate sum a_n t^n inside the unit interval,
extrapolate t -> 1).  Prefix sums are kept in exact rationals and converted
to float only at the final ratio, because the alternating cancellation these
series live on makes float accumulation untrustworthy.  This engine is the
independent cross-check for the exact closed forms elsewhere in the package.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Sequence

from .algebra import ParseError, RationalLike, as_rational

DEFAULT_TERMS = 4000
DEFAULT_TOL = 1e-3
DEFAULT_ORDER_CAP = 8
MAX_ORDER_CAP = 12

# Per-point truncation so the dropped geometric tail is below e^-60.
ABEL_TAIL_EXPONENT = 60.0


class NotConvergedError(RuntimeError):
    """A required numeric limit did not settle within its budget."""

    def __init__(self, message: str, report: "ConvergenceReport | None" = None):
        super().__init__(message)
        self.report = report


def falling_factorial_value(n: int, k: int) -> int:
    """n(n-1)...(n-k+1) as an integer; 1 for k = 0, 0 once k > n >= 0."""
    out = 1
    for i in range(k):
        out *= n - i
    return out


@dataclass(frozen=True)
class SeriesSpec:
    """A series given by its coefficient sequence n -> a_n (exact rationals).

    ``exact_reg_deriv(k, c, method)`` optionally returns the closed-form value
    of sum_n a_n * [n]_k * c^(n-k) under the given method, or None when no
    closed form applies at that (k, c); builtins carry one where a formula
    exists.
    """

    term: Callable[[int], Fraction]
    kind: str = "custom"
    label: str = ""
    exact_reg_deriv: Optional[
        Callable[[int, Fraction, "SummationMethod"], Optional[Fraction]]
    ] = None

    def terms(self, count: int) -> list[Fraction]:
        return [self.term(n) for n in range(count)]


@dataclass(frozen=True)
class SummationMethod:
    """Which limit notion to use and its working budget.

    tag: "classical", "cesaro", "abel", or "exact" (closed forms only).
    order: iterated-mean order k for "cesaro", or "auto" to escalate.
    """

    tag: str = "cesaro"
    order: int | str = "auto"
    n_max: int = DEFAULT_TERMS
    tol: float = DEFAULT_TOL
    k_max: int = DEFAULT_ORDER_CAP

    def __post_init__(self):
        if self.tag not in ("classical", "cesaro", "abel", "exact"):
            raise ValueError(f"unknown summation method tag {self.tag!r}")
        if self.tag == "cesaro" and self.order != "auto":
            if not isinstance(self.order, int) or self.order < 0:
                raise ValueError("iterated-mean order must be a nonnegative int or 'auto'")

    def describe(self) -> str:
        if self.tag == "cesaro":
            return f"cesaro:{self.order}"
        return self.tag


@dataclass
class ConvergenceReport:
    value: float
    exact: Optional[Fraction]
    method_used: SummationMethod
    order_used: int
    terms_used: int
    converged: bool
    residual: float
    provenance: Optional[str] = None

    def to_json_dict(self) -> dict:
        """Plain-data form; floats rounded to 12 significant digits."""
        out = {
            "value": _sig12(self.value),
            "exact": str(self.exact) if self.exact is not None else None,
            "method": self.method_used.describe(),
            "order_used": self.order_used,
            "terms_used": self.terms_used,
            "converged": self.converged,
            "residual": _sig12(self.residual),
        }
        if self.provenance is not None:
            out["provenance"] = self.provenance
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


def _sig12(x: float) -> float:
    if not math.isfinite(x):
        return x
    return float(f"{x:.12g}")


# ---------------------------------------------------------------------------
# Built-in series


def series_alt() -> SeriesSpec:
    """a_n = (-1)^n, the alternating unit series."""

    def term(n: int) -> Fraction:
        return Fraction(1 if n % 2 == 0 else -1)

    def exact(k: int, c: Fraction, method: SummationMethod) -> Optional[Fraction]:
        # Closed form only at the boundary point c = 1, where the k-th
        # derivative series of 1/(1+t) sums to (-1)^k k!/2^(k+1) under the
        # iterated-mean and power-boundary methods (not classically).  Every
        # other expansion point is left to the numeric engines.
        if c == 1 and method.tag != "classical":
            sign = -1 if k % 2 else 1
            return Fraction(sign * math.factorial(k), 2 ** (k + 1))
        return None

    return SeriesSpec(term, kind="alt_geometric", label="alt", exact_reg_deriv=exact)


def series_alt_log() -> SeriesSpec:
    """a_0 = 0, a_n = (-1)^(n+1)/n: the log(1+t) coefficient sequence."""

    def term(n: int) -> Fraction:
        if n == 0:
            return Fraction(0)
        return Fraction(1 if n % 2 == 1 else -1, n)

    def exact(k: int, c: Fraction, method: SummationMethod) -> Optional[Fraction]:
        # Closed form only at c = 1: derivatives of log(1+t) there are
        # (-1)^(k-1) (k-1)!/2^k for k >= 1.  The k = 0 value log 2 is
        # irrational, so it has no entry and falls back to numerics.
        if k >= 1 and c == 1 and method.tag != "classical":
            sign = -1 if (k - 1) % 2 else 1
            return Fraction(sign * math.factorial(k - 1), 2 ** k)
        return None

    return SeriesSpec(term, kind="alt_log", label="altlog", exact_reg_deriv=exact)


def series_geometric(ratio: RationalLike) -> SeriesSpec:
    """a_n = r^n for a rational ratio r."""
    r = as_rational(ratio)

    def term(n: int) -> Fraction:
        return r ** n

    return SeriesSpec(term, kind="geometric", label=f"geom:{r}")


def series_table(values: Sequence[RationalLike]) -> SeriesSpec:
    """Finite coefficient list; zero beyond its length."""
    vals = tuple(as_rational(v) for v in values)

    def term(n: int) -> Fraction:
        return vals[n] if 0 <= n < len(vals) else Fraction(0)

    return SeriesSpec(term, kind="table", label=f"table[{len(vals)}]")


def series_custom(term: Callable[[int], Fraction], label: str = "custom") -> SeriesSpec:
    return SeriesSpec(term, kind="custom", label=label)


def parse_series(text: str) -> SeriesSpec:
    """Parse a series literal: alt | altlog | geom:p/q | table:@file.json."""
    text = text.strip()
    if text == "alt":
        return series_alt()
    if text == "altlog":
        return series_alt_log()
    if text.startswith("geom:"):
        body = text[5:].strip()
        try:
            return series_geometric(Fraction(body))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad ratio {body!r} in series literal: {exc}", 5) from None
    if text.startswith("table:@"):
        path = text[7:].strip()
        if not path:
            raise ParseError("table literal needs a file path after '@'", 7)
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ParseError(f"cannot read table file {path!r}: {exc}", 7) from None
        except json.JSONDecodeError as exc:
            raise ParseError(f"table file {path!r} is not valid JSON: {exc}", 7) from None
        if not isinstance(data, list):
            raise ParseError(f"table file {path!r} must hold a JSON array", 7)
        try:
            values = [Fraction(str(v)) for v in data]
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad entry in table file {path!r}: {exc}", 7) from None
        return series_table(values)
    raise ParseError(f"unknown series literal {text!r}", 0)


# ---------------------------------------------------------------------------
# Sequence combinators


def _memoized(term: Callable[[int], Fraction]) -> Callable[[int], Fraction]:
    cache: list[Fraction] = []

    def cached(n: int) -> Fraction:
        if n < 0:
            raise IndexError("series index must be nonnegative")
        while len(cache) <= n:
            cache.append(term(len(cache)))
        return cache[n]

    return cached


def partial_sums(a: SeriesSpec) -> SeriesSpec:
    """The running-total sequence of a, exact, memoized for sequential use."""
    base = _memoized(a.term)
    sums: list[Fraction] = []

    def term(n: int) -> Fraction:
        if n < 0:
            raise IndexError("series index must be nonnegative")
        while len(sums) <= n:
            i = len(sums)
            prev = sums[-1] if sums else Fraction(0)
            sums.append(prev + base(i))
        return sums[n]

    return SeriesSpec(term, kind="custom", label=f"sums({a.label})")


@lru_cache(maxsize=64)
def cauchy_product(a: SeriesSpec, b: SeriesSpec) -> SeriesSpec:
    """Coefficientwise product series: c_n = sum_i a_(n-i) b_i, exact.

    The convolution triangle is quadratic in the number of terms, so results
    are cached per input pair and the returned series memoizes its terms;
    repeated evaluations at increasing depth pay the triangle once.
    """
    ta = _memoized(a.term)
    tb = _memoized(b.term)

    def term(n: int) -> Fraction:
        total = Fraction(0)
        for i in range(n + 1):
            total += ta(n - i) * tb(i)
        return total

    return SeriesSpec(
        _memoized(term), kind="custom", label=f"product({a.label},{b.label})"
    )


# ---------------------------------------------------------------------------
# Iterated-mean (Cesaro-type) engine


def _prefix_pass(values: list[Fraction]) -> None:
    acc = Fraction(0)
    for i, v in enumerate(values):
        acc += v
        values[i] = acc


def _checkpoint_report(
    sums: list[Fraction], k: int, method: SummationMethod
) -> ConvergenceReport:
    # Alternating series one mean short of their summability order produce
    # ratio estimates with a non-decaying even/odd oscillation; checkpoints
    # at N/4, N/2, N can all share a parity, so the neighbor estimate at N-1
    # joins the gap test to rule that false agreement out.
    n_last = len(sums) - 1
    points = sorted({max(1, n_last // 4), max(1, n_last // 2), n_last})
    estimates = [float(sums[n] / math.comb(n + k, k)) for n in points]
    gaps = [abs(b - a) for a, b in zip(estimates, estimates[1:])]
    neighbor = float(sums[n_last - 1] / math.comb(n_last - 1 + k, k))
    gaps.append(abs(estimates[-1] - neighbor))
    residual = max(gaps)
    return ConvergenceReport(
        value=estimates[-1],
        exact=None,
        method_used=method,
        order_used=k,
        terms_used=n_last + 1,
        converged=residual <= method.tol,
        residual=residual,
    )


def cesaro_limit(a: SeriesSpec, k: int, N: int = DEFAULT_TERMS, tol: float = DEFAULT_TOL) -> ConvergenceReport:
    """Order-k iterated-mean sum of the series: lim of the (k+1)-fold prefix
    sum at n divided by binom(n+k, k).

    Prefix sums are exact; estimates are compared at the n = N/4, N/2, N
    checkpoints and the run counts as converged when successive estimates
    agree within tol.  Budget exhaustion is reported as converged=False,
    never raised.
    """
    if N < 16:
        raise ValueError("need at least 16 terms for the checkpoint scheme")
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if k < 0:
        raise ValueError("iterated-mean order must be nonnegative")
    method = SummationMethod("cesaro", order=k, n_max=N, tol=tol)
    values = a.terms(N + 1)
    for _ in range(k + 1):
        _prefix_pass(values)
    return _checkpoint_report(values, k, method)


def cesaro_auto(
    a: SeriesSpec,
    k_max: int = DEFAULT_ORDER_CAP,
    N: int = DEFAULT_TERMS,
    tol: float = DEFAULT_TOL,
) -> ConvergenceReport:
    """Escalate the iterated-mean order 0..k_max, return the first converged
    report; when none converge, the attempt with the smallest residual is
    returned with converged=False.

    Each escalation adds one more prefix pass to the same array, so the whole
    scan costs the same as a single run at k_max.
    """
    if k_max > MAX_ORDER_CAP:
        raise ValueError(f"order cap is {MAX_ORDER_CAP}")
    if N < 16:
        raise ValueError("need at least 16 terms for the checkpoint scheme")
    values = a.terms(N + 1)
    best: ConvergenceReport | None = None
    for k in range(k_max + 1):
        _prefix_pass(values)
        method = SummationMethod("cesaro", order=k, n_max=N, tol=tol, k_max=k_max)
        report = _checkpoint_report(values, k, method)
        if report.converged:
            return report
        if best is None or report.residual < best.residual:
            best = report
    return best


# ---------------------------------------------------------------------------
# Power-boundary (Abel-type) engine


def default_abel_schedule() -> list[float]:
    return [1.0 - 2.0 ** (-j) for j in range(3, 15)]


def default_abel_budget(t: float) -> int:
    return math.ceil(ABEL_TAIL_EXPONENT / (1.0 - t))


def _quadratic_at_zero(hs: Sequence[float], ys: Sequence[float]) -> float:
    (h0, h1, h2), (y0, y1, y2) = hs, ys
    l0 = (h1 * h2) / ((h0 - h1) * (h0 - h2))
    l1 = (h0 * h2) / ((h1 - h0) * (h1 - h2))
    l2 = (h0 * h1) / ((h2 - h0) * (h2 - h1))
    return y0 * l0 + y1 * l1 + y2 * l2


def abel_limit(
    a: SeriesSpec,
    schedule: Sequence[float] | None = None,
    term_budget_per_point: Callable[[float], int] | None = None,
    tol: float = DEFAULT_TOL,
) -> ConvergenceReport:
    """Sum by the power-boundary method: evaluate g(t) = sum a_n t^n at an
    increasing schedule of t in (0,1) and extrapolate to t = 1.

    Extrapolation is quadratic in h = 1 - t over a sliding window of three
    points.  Two guards end the scan early: agreement of successive
    extrapolants well inside tol, and an estimate of float cancellation noise
    (machine epsilon times sum |a_n| t^n) crossing tol/10, beyond which
    deeper points only add noise.
    """
    schedule = list(default_abel_schedule() if schedule is None else schedule)
    if not schedule:
        raise ValueError("empty evaluation schedule")
    if any(not (0.0 < t < 1.0) for t in schedule):
        raise ValueError("schedule points must lie strictly inside (0,1)")
    if any(b <= a_ for a_, b in zip(schedule, schedule[1:])):
        raise ValueError("schedule must increase strictly toward 1")
    budget = term_budget_per_point or default_abel_budget
    method = SummationMethod("abel", order=2, tol=tol)

    eps = math.ulp(1.0)
    fvals: list[float] = []
    hs: list[float] = []
    gs: list[float] = []
    extrapolants: list[float] = []
    residual = math.inf
    max_terms = 0

    for t in schedule:
        n_terms = max(4, budget(t))
        while len(fvals) < n_terms + 1:
            fvals.append(float(a.term(len(fvals))))
        total = 0.0
        magnitude = 0.0
        tn = 1.0
        for n in range(n_terms + 1):
            term = fvals[n] * tn
            total += term
            magnitude += abs(term)
            tn *= t
        noise = magnitude * eps
        if not math.isfinite(total) or noise > tol / 10.0:
            break
        max_terms = max(max_terms, n_terms + 1)
        hs.append(1.0 - t)
        gs.append(total)
        if len(gs) >= 3:
            ext = _quadratic_at_zero(hs[-3:], gs[-3:])
            if extrapolants:
                residual = abs(ext - extrapolants[-1])
            extrapolants.append(ext)
            if residual <= tol * 0.05:
                break

    if extrapolants:
        value = extrapolants[-1]
    elif gs:
        value = gs[-1]
    else:
        value = math.nan
    converged = bool(extrapolants) and residual <= tol
    return ConvergenceReport(
        value=value,
        exact=None,
        method_used=method,
        order_used=2,
        terms_used=max_terms,
        converged=converged,
        residual=residual,
    )


# ---------------------------------------------------------------------------
# Dispatch and consistency checks


def evaluate(a: SeriesSpec, method: SummationMethod) -> ConvergenceReport:
    """Run the numeric method the tag names.  Classical summation is the
    order-0 iterated mean (plain partial sums at the same checkpoints)."""
    if method.tag == "classical":
        return cesaro_limit(a, 0, method.n_max, method.tol)
    if method.tag == "cesaro":
        if method.order == "auto":
            return cesaro_auto(a, method.k_max, method.n_max, method.tol)
        return cesaro_limit(a, method.order, method.n_max, method.tol)
    if method.tag == "abel":
        return abel_limit(a, tol=method.tol)
    raise ValueError(f"method {method.tag!r} has no numeric engine")


def shift_check(a: SeriesSpec, method: SummationMethod) -> tuple[float, float]:
    """Evaluate both sides of: sum over n>=0 equals a_0 plus the sum of the
    sequence shifted by one.  Raises NotConvergedError when either side's
    numeric limit fails, so disagreement is never silently averaged away.
    """
    left = evaluate(a, method)
    if not left.converged:
        raise NotConvergedError(f"left side did not converge under {method.describe()}", left)
    base = _memoized(a.term)
    shifted = SeriesSpec(lambda n: base(n + 1), kind="custom", label=f"shift({a.label})")
    right = evaluate(shifted, method)
    if not right.converged:
        raise NotConvergedError(f"shifted side did not converge under {method.describe()}", right)
    return left.value, float(base(0)) + right.value
