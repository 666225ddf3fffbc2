"""Exact bit quantities: finite sums of `coeff * log2(arg)` with rational coeff/arg.

Probabilities stay exact rationals all the way through the engine; the only
irrational values we ever report are logs of them.  `Bits` keeps those logs
symbolic so brackets and bounds can be compared exactly, and only turns them
into floats when a report is rendered.
"""
from __future__ import annotations

import ast
import functools
import logging
import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from ic_engine.errors import InstanceValidationError

logger = logging.getLogger(__name__)

# Above this many bits in an exact power comparison we fall back to floats.
_EXACT_COMPARE_BIT_LIMIT = 1 << 20


def as_fraction(value: int | Fraction | str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise InstanceValidationError(f"expected an exact rational, got {value!r}")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise InstanceValidationError(f"not a rational number: {value!r}") from exc


def format_fraction(value: Fraction | int) -> str:
    """Render as "num/den" (denominator always present)."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def format_float(value: float) -> str:
    return f"{value:.12f}"


def _canonical(terms) -> tuple[tuple[Fraction, Fraction], ...]:
    """Merge terms; integer coefficients fold into a single log2 term."""
    merged: dict[Fraction, Fraction] = {}
    for coeff, arg in terms:
        coeff, arg = Fraction(coeff), Fraction(arg)
        if arg <= 0:
            raise InstanceValidationError(f"log2 of a non-positive value: {arg}")
        if coeff == 0 or arg == 1:
            continue
        if coeff.denominator == 1:
            coeff, arg = Fraction(1), arg ** int(coeff)
        merged[coeff] = merged.get(coeff, Fraction(1)) * arg
    return tuple(
        (coeff, arg) for coeff, arg in sorted(merged.items(), key=lambda item: (-item[0], item[1])) if arg != 1
    )


@functools.total_ordering
@dataclass(frozen=True, eq=False)
class Bits:
    terms: tuple[tuple[Fraction, Fraction], ...] = ()

    @classmethod
    def log2(cls, argument: int | Fraction, coeff: int | Fraction = 1) -> Bits:
        return cls(_canonical([(coeff, argument)]))

    @classmethod
    def constant(cls, value: int | Fraction) -> Bits:
        """`value` bits, i.e. value * log2(2)."""
        return cls(_canonical([(value, 2)]))

    @classmethod
    def zero(cls) -> Bits:
        return cls(())

    @property
    def value(self) -> float:
        return float(sum(float(coeff) * math.log2(arg) for coeff, arg in self.terms))

    def __add__(self, other: Bits) -> Bits:
        if not isinstance(other, Bits):
            return NotImplemented
        return Bits(_canonical(self.terms + other.terms))

    def __neg__(self) -> Bits:
        return Bits(_canonical((-coeff, arg) for coeff, arg in self.terms))

    def __sub__(self, other: Bits) -> Bits:
        if not isinstance(other, Bits):
            return NotImplemented
        return self + (-other)

    def scale(self, factor: int | Fraction) -> Bits:
        factor = Fraction(factor)
        return Bits(_canonical((coeff * factor, arg) for coeff, arg in self.terms))

    def sign(self) -> int:
        """Exact sign of the value: compare prod(arg ** (coeff * D)) against 1."""
        if not self.terms:
            return 0
        denominator = lcm(*(coeff.denominator for coeff, _ in self.terms))
        cost = sum(
            abs(coeff * denominator) * max(arg.numerator.bit_length(), arg.denominator.bit_length())
            for coeff, arg in self.terms
        )
        if cost > _EXACT_COMPARE_BIT_LIMIT:
            logger.warning("exact log comparison too large (%s bits); using float sign", cost)
            value = self.value
            return (value > 0) - (value < 0)
        num, den = 1, 1
        for coeff, arg in self.terms:
            exponent = int(coeff * denominator)
            if exponent >= 0:
                num *= arg.numerator**exponent
                den *= arg.denominator**exponent
            else:
                num *= arg.denominator ** (-exponent)
                den *= arg.numerator ** (-exponent)
        return (num > den) - (num < den)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Bits):
            return NotImplemented
        return (self - other).sign() == 0

    def __lt__(self, other: Bits) -> bool:
        if not isinstance(other, Bits):
            return NotImplemented
        return (self - other).sign() < 0

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts: list[str] = []
        for coeff, arg in self.terms:
            magnitude = abs(coeff)
            body = f"log2({arg})" if magnitude == 1 else f"{magnitude}*log2({arg})"
            if not parts:
                parts.append(body if coeff > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(parts)

    def to_payload(self) -> dict[str, str]:
        return {"bits": format_float(self.value), "exact": str(self)}


# ---------------------------
# Known (externally supplied) rates
# ---------------------------
_BINARY_OPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_FUNCTIONS = {"log2": math.log2, "log": math.log2}


def _evaluate(node: ast.AST) -> float:
    if isinstance(node, ast.Expression):
        return _evaluate(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
        return float(node.value)
    if isinstance(node, ast.BinOp) and type(node.op) in _BINARY_OPS:
        return _BINARY_OPS[type(node.op)](_evaluate(node.left), _evaluate(node.right))
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        inner = _evaluate(node.operand)
        return -inner if isinstance(node.op, ast.USub) else inner
    if (
        isinstance(node, ast.Call)
        and isinstance(node.func, ast.Name)
        and node.func.id in _FUNCTIONS
        and len(node.args) == 1
        and not node.keywords
    ):
        return _FUNCTIONS[node.func.id](_evaluate(node.args[0]))
    raise InstanceValidationError(f"unsupported element in rate expression: {ast.dump(node)}")


def evaluate_rate_expression(expression: str) -> float:
    """Evaluate arithmetic over numbers with log2()/log() (both base 2)."""
    try:
        tree = ast.parse(expression.strip(), mode="eval")
    except SyntaxError as exc:
        raise InstanceValidationError(f"cannot parse rate expression {expression!r}: {exc.msg}") from exc
    try:
        return float(_evaluate(tree))
    except (ValueError, ZeroDivisionError, OverflowError) as exc:
        raise InstanceValidationError(f"cannot evaluate rate expression {expression!r}: {exc}") from exc


@dataclass(frozen=True)
class KnownRate:
    """A rate imported from the literature; stored verbatim, never recomputed."""

    expression: str
    citation: str = ""

    @property
    def value(self) -> float:
        return evaluate_rate_expression(self.expression)

    def __str__(self) -> str:
        return self.expression

    def to_payload(self) -> dict[str, str]:
        return {"bits": format_float(self.value), "exact": self.expression, "citation": self.citation}
