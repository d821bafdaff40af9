"""Truncated formal power series over exact rationals.

A series carries its coefficients for t^0..t^order plus the explicit
truncation order; nothing beyond the order is known or claimed.  Arithmetic
propagates orders pessimistically (the min of the operands), and this module
never touches floats: numeric evaluation lives elsewhere.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .algebra import RationalLike, as_rational, format_rational

DEFAULT_PADDING = 4


def working_order(*sizes: int) -> int:
    """Default truncation order: the largest relevant size plus padding."""
    base = max([s for s in sizes if s >= 0], default=0)
    return base + DEFAULT_PADDING


class NonUnitError(ZeroDivisionError):
    """Inverse of a series whose constant term is zero."""


class DomainError(ValueError):
    """Series operation applied outside its exactly-representable domain."""


class OrderExceededError(IndexError):
    """Coefficient requested beyond the truncation order."""


class PowerSeries:
    """Formal power series truncated at an explicit inclusive order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RationalLike]):
        cs = tuple(as_rational(c) for c in coeffs)
        if not cs:
            raise ValueError("a truncated series needs at least the t^0 term")
        self.coeffs = cs

    @classmethod
    def constant(cls, c: RationalLike, order: int) -> "PowerSeries":
        return cls([as_rational(c)] + [0] * order)

    @classmethod
    def t(cls, order: int) -> "PowerSeries":
        """The series t (requires order >= 1)."""
        if order < 1:
            raise ValueError("order must be at least 1 to represent t")
        return cls([0, 1] + [0] * (order - 1))

    @classmethod
    def from_function(cls, term: Callable[[int], RationalLike], order: int) -> "PowerSeries":
        return cls([term(n) for n in range(order + 1)])

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, n: int) -> Fraction:
        if n < 0:
            raise OrderExceededError(f"negative power t^{n}")
        if n > self.order:
            raise OrderExceededError(f"coefficient t^{n} beyond truncation order {self.order}")
        return self.coeffs[n]

    def constant_term(self) -> Fraction:
        return self.coeffs[0]

    def truncate(self, order: int) -> "PowerSeries":
        if order > self.order:
            raise OrderExceededError(f"cannot extend order {self.order} to {order}")
        return PowerSeries(self.coeffs[: order + 1])

    # Equality is coefficient-wise up to the common (min) order.
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PowerSeries):
            return NotImplemented
        n = min(self.order, other.order)
        return self.coeffs[: n + 1] == other.coeffs[: n + 1]

    __hash__ = None  # equality ignores tails, so hashing would be unsound

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        if not isinstance(other, PowerSeries):
            return NotImplemented
        n = min(self.order, other.order)
        return PowerSeries([self.coeffs[i] + other.coeffs[i] for i in range(n + 1)])

    def __sub__(self, other: "PowerSeries") -> "PowerSeries":
        if not isinstance(other, PowerSeries):
            return NotImplemented
        n = min(self.order, other.order)
        return PowerSeries([self.coeffs[i] - other.coeffs[i] for i in range(n + 1)])

    def __neg__(self) -> "PowerSeries":
        return PowerSeries([-c for c in self.coeffs])

    def __mul__(self, other) -> "PowerSeries":
        if isinstance(other, PowerSeries):
            n = min(self.order, other.order)
            out = [Fraction(0)] * (n + 1)
            for i in range(n + 1):
                a = self.coeffs[i]
                if a == 0:
                    continue
                for j in range(n + 1 - i):
                    b = other.coeffs[j]
                    if b != 0:
                        out[i + j] += a * b
            return PowerSeries(out)
        c = as_rational(other)
        return PowerSeries([c * a for a in self.coeffs])

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "PowerSeries":
        if n < 0:
            raise ValueError("negative series power; use inverse() first")
        result = PowerSeries.constant(1, self.order)
        for _ in range(n):
            result = result * self
        return result

    def scale(self, c: RationalLike) -> "PowerSeries":
        return self * as_rational(c)

    def inverse(self) -> "PowerSeries":
        """Multiplicative inverse up to the truncation order."""
        f0 = self.coeffs[0]
        if f0 == 0:
            raise NonUnitError("series with zero constant term has no inverse")
        inv0 = 1 / f0
        out = [inv0] + [Fraction(0)] * self.order
        for n in range(1, self.order + 1):
            acc = Fraction(0)
            for j in range(1, n + 1):
                fj = self.coeffs[j]
                if fj != 0:
                    acc += fj * out[n - j]
            out[n] = -inv0 * acc
        return PowerSeries(out)

    def derivative(self) -> "PowerSeries":
        """Term-wise d/dt; the truncation order drops by one."""
        if self.order == 0:
            return PowerSeries([0])
        return PowerSeries([i * self.coeffs[i] for i in range(1, self.order + 1)])

    def integral(self) -> "PowerSeries":
        """Term-wise antiderivative with zero constant; order grows by one."""
        return PowerSeries([Fraction(0)] + [c / (i + 1) for i, c in enumerate(self.coeffs)])

    def exp(self) -> "PowerSeries":
        """Formal exponential; requires a zero constant term to stay rational."""
        if self.coeffs[0] != 0:
            raise DomainError("exp needs constant term 0; e^c is not rational otherwise")
        n = self.order
        out = [Fraction(1)] + [Fraction(0)] * n
        # E' = f' E  =>  k e_k = sum_{j=1..k} j f_j e_{k-j}
        for k in range(1, n + 1):
            acc = Fraction(0)
            for j in range(1, k + 1):
                fj = self.coeffs[j]
                if fj != 0:
                    acc += j * fj * out[k - j]
            out[k] = acc / k
        return PowerSeries(out)

    def log(self) -> "PowerSeries":
        """Formal logarithm; requires constant term 1."""
        if self.coeffs[0] != 1:
            raise DomainError("log needs constant term 1; log c is not rational otherwise")
        n = self.order
        out = [Fraction(0)] * (n + 1)
        # L' = f'/f  =>  k l_k = k f_k - sum_{j=1..k-1} j l_j f_{k-j}
        for k in range(1, n + 1):
            acc = k * self.coeffs[k]
            for j in range(1, k):
                lj = out[j]
                if lj != 0:
                    acc -= j * lj * self.coeffs[k - j]
            out[k] = acc / k
        return PowerSeries(out)

    def compose(self, inner: "PowerSeries") -> "PowerSeries":
        """Substitute ``inner`` (which must vanish at 0) for t."""
        if inner.coeffs[0] != 0:
            raise DomainError("composition needs inner constant term 0")
        n = min(self.order, inner.order)
        g = inner if inner.order == n else inner.truncate(n)
        acc = PowerSeries.constant(self.coeffs[n], n)
        for k in range(n - 1, -1, -1):
            acc = acc * g + PowerSeries.constant(self.coeffs[k], n)
        return acc

    def partial_sums(self) -> "PowerSeries":
        """Multiply by 1/(1-t): coefficient n becomes the n-th prefix sum."""
        out = []
        acc = Fraction(0)
        for c in self.coeffs:
            acc += c
            out.append(acc)
        return PowerSeries(out)

    def to_strings(self) -> list[str]:
        """Machine form: ``p/q`` strings by ascending power."""
        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_strings(cls, items: Sequence[str]) -> "PowerSeries":
        return cls([Fraction(s) for s in items])

    def __repr__(self) -> str:
        return f"PowerSeries({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                body = format_rational(c)
            else:
                tpart = "t" if i == 1 else f"t^{i}"
                if abs(c) == 1:
                    body = tpart
                else:
                    body = f"{format_rational(abs(c))}*{tpart}"
            if not parts:
                parts.append(body if c > 0 or i == 0 else f"-{body}")
            else:
                parts.append(f" + {body}" if c > 0 else f" - {body}")
        if not parts:
            parts.append("0")
        parts.append(f" + O(t^{self.order + 1})")
        return "".join(parts)


def geometric_series(ratio: RationalLike, order: int) -> PowerSeries:
    """Sum of (ratio*t)^n up to the order: 1/(1 - ratio*t)."""
    r = as_rational(ratio)
    out = [Fraction(1)]
    for _ in range(order):
        out.append(out[-1] * r)
    return PowerSeries(out)


def exp_series(scale: RationalLike, order: int) -> PowerSeries:
    """The series with coefficients scale^n / n! (the exponential of scale*t)."""
    s = as_rational(scale)
    out = [Fraction(1)]
    for n in range(1, order + 1):
        out.append(out[-1] * s / n)
    return PowerSeries(out)


def log1p_series(order: int) -> PowerSeries:
    """Alternating harmonic-coefficient series: the logarithm of 1+t."""
    return PowerSeries([Fraction(0)] + [Fraction((-1) ** (n + 1), n) for n in range(1, order + 1)])


def cosh_series(order: int) -> PowerSeries:
    """Even series with coefficients 1/(2m)! at t^(2m)."""
    out = [Fraction(0)] * (order + 1)
    fact = 1
    for n in range(order + 1):
        if n:
            fact *= n
        if n % 2 == 0:
            out[n] = Fraction(1, fact)
    return PowerSeries(out)
