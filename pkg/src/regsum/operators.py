"""Translation-invariant operators on polynomials, stored by symbol.

An operator commuting with d/dx is determined by the series sum_n c_n/n! D^n;
we keep exactly that coefficient list (c_n/n! by ascending n) as a truncated
power series and apply it term by term.  Because the remainder part (operator
minus its constant) raises the minimum power of D, only the first deg P + 1
symbol coefficients can act on a polynomial P, so a sufficiently deep
truncation is lossless.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .algebra import ParseError, Polynomial, RationalLike, as_rational
from .power_series import (
    OrderExceededError,
    PowerSeries,
    exp_series,
    working_order,
)

DEFAULT_SYMBOL_ORDER = 16


class OperatorSpec:
    """A translation-invariant operator, identified by its symbol series."""

    __slots__ = ("symbol", "label")

    def __init__(self, symbol: PowerSeries, label: str | None = None):
        self.symbol = symbol
        self.label = label

    @property
    def constant(self) -> Fraction:
        """The image of 1, i.e. the symbol's constant term."""
        return self.symbol.constant_term()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OperatorSpec):
            return NotImplemented
        return self.symbol == other.symbol

    __hash__ = None

    def apply(self, p: Polynomial) -> Polynomial:
        """Apply to a polynomial: sum of symbol coefficients times derivatives."""
        if p.is_zero:
            return Polynomial()
        deg = len(p.coeffs) - 1
        if self.symbol.order < deg:
            raise OrderExceededError(
                f"symbol truncated at order {self.symbol.order} cannot act on degree {deg}; "
                "rebuild the operator with a deeper symbol"
            )
        acc = Polynomial()
        term = p
        for n in range(deg + 1):
            c = self.symbol.coeffs[n]
            if c != 0:
                acc = acc + c * term
            term = term.derivative()
        return acc

    def compose(self, other: "OperatorSpec") -> "OperatorSpec":
        """Operator composition; symbols multiply."""
        return OperatorSpec(self.symbol * other.symbol)

    def __add__(self, other: "OperatorSpec") -> "OperatorSpec":
        if not isinstance(other, OperatorSpec):
            return NotImplemented
        return OperatorSpec(self.symbol + other.symbol)

    def __sub__(self, other: "OperatorSpec") -> "OperatorSpec":
        if not isinstance(other, OperatorSpec):
            return NotImplemented
        return OperatorSpec(self.symbol - other.symbol)

    def scale(self, c: RationalLike) -> "OperatorSpec":
        return OperatorSpec(self.symbol * as_rational(c))

    def remainder(self) -> tuple[Fraction, "OperatorSpec"]:
        """Split off the constant: returns (c, T - c) with a zero-constant rest."""
        c = self.constant
        rest = PowerSeries([self.symbol.coeffs[0] - c, *self.symbol.coeffs[1:]])
        return c, OperatorSpec(rest)

    def __repr__(self) -> str:
        name = self.label or "operator"
        return f"<{name}: {self.symbol}>"


def op_from_symbol(symbol: PowerSeries, label: str | None = None) -> OperatorSpec:
    return OperatorSpec(symbol, label)


def op_symbol(op: OperatorSpec) -> PowerSeries:
    return op.symbol


def op_apply(op: OperatorSpec, p: Polynomial) -> Polynomial:
    return op.apply(p)


def op_compose(outer: OperatorSpec, inner: OperatorSpec) -> OperatorSpec:
    return outer.compose(inner)


def op_remainder(op: OperatorSpec) -> tuple[Fraction, OperatorSpec]:
    return op.remainder()


def op_identity(order: int = DEFAULT_SYMBOL_ORDER) -> OperatorSpec:
    return OperatorSpec(PowerSeries.constant(1, order), "identity")


def op_diff(order: int = DEFAULT_SYMBOL_ORDER) -> OperatorSpec:
    return OperatorSpec(PowerSeries.t(order), "diff")


def op_shift(h: RationalLike, order: int = DEFAULT_SYMBOL_ORDER) -> OperatorSpec:
    """Translation by h: the exponential symbol, acting as P(x) -> P(x+h)."""
    h = as_rational(h)
    return OperatorSpec(exp_series(h, order), f"shift:{h}")


def op_delta(h: RationalLike, order: int = DEFAULT_SYMBOL_ORDER) -> OperatorSpec:
    """Forward difference: shift by h minus the identity."""
    h = as_rational(h)
    sym = exp_series(h, order) - PowerSeries.constant(1, order)
    return OperatorSpec(sym, f"delta:{h}")


def op_scaled_sum(terms: Sequence[tuple[RationalLike, OperatorSpec]]) -> OperatorSpec:
    """Rational linear combination of operators."""
    if not terms:
        raise ValueError("empty linear combination")
    acc = None
    for c, op in terms:
        piece = op.symbol * as_rational(c)
        acc = piece if acc is None else acc + piece
    return OperatorSpec(acc)


def op_power(op: OperatorSpec, k: int) -> OperatorSpec:
    """k-fold composition, by repeated symbol multiplication."""
    if k < 0:
        raise ValueError("negative operator power")
    return OperatorSpec(op.symbol ** k)


def symbol_coefficient_probe(op: OperatorSpec, n: int) -> Fraction:
    """Recover symbol coefficient n extensionally: apply to x^n, read at 0, /n!.

    Independent of the stored list; used to cross-check symbol storage.
    """
    image = op.apply(Polynomial.monomial(n))
    value = image(0)
    fact = 1
    for i in range(2, n + 1):
        fact *= i
    return value / fact


def parse_operator(text: str, order: int | None = None) -> OperatorSpec:
    """Parse an operator literal.

    Forms: ``identity``, ``diff``, ``shift:h``, ``delta:h``, and
    ``symbol:[c0,c1,...]`` with rational entries (the symbol coefficients,
    i.e. already divided by the factorials).
    """
    order = DEFAULT_SYMBOL_ORDER if order is None else order
    text = text.strip()
    if text == "identity":
        return op_identity(order)
    if text == "diff":
        return op_diff(order)
    if text.startswith("shift:"):
        return op_shift(_parse_rational(text[6:], text), order)
    if text.startswith("delta:"):
        return op_delta(_parse_rational(text[6:], text), order)
    if text.startswith("symbol:"):
        body = text[7:].strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise ParseError(f"symbol literal needs [c0,c1,...], got {body!r}", 7)
        items = [s.strip() for s in body[1:-1].split(",") if s.strip()]
        if not items:
            raise ParseError("empty symbol coefficient list", 8)
        coeffs = [_parse_rational(s, text) for s in items]
        if len(coeffs) < order + 1:
            coeffs += [Fraction(0)] * (order + 1 - len(coeffs))
        return OperatorSpec(PowerSeries(coeffs), "symbol")
    raise ParseError(f"unknown operator literal {text!r}", 0)


def _parse_rational(s: str, context: str) -> Fraction:
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {s!r} in {context!r}: {exc}", context.find(s)) from None


def operator_order_for(p: Polynomial, extra: int = 0) -> int:
    """Symbol order deep enough to act on p (with the default padding)."""
    deg = len(p.coeffs) - 1 if p.coeffs else 0
    return working_order(deg + extra)
