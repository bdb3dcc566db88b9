"""Exact scalars, truncated sample spaces, and bounded random variables.

Every number in this package is an arbitrary-precision rational
(`fractions.Fraction`); nothing ever rounds.  Countable sample spaces are
represented by N explicit states plus one optional ideal *tail* state that
carries the limit value of eventually constant functions, which keeps
essential suprema and expectations exact instead of approximate.

The tail state participates in essential suprema exactly when the
reference measure charges it (``p0_tail > 0``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Iterable, Sequence, Union

if TYPE_CHECKING:  # pragma: no cover - import cycle guard, typing only
    from .fap import Fap

RationalLike = Union[Fraction, int, str]

ZERO = Fraction(0)
ONE = Fraction(1)

#: Coordinate id of the tail state in support enumerations and event sets.
TAIL = -1


class InvalidInput(ValueError):
    """An argument violates a documented precondition or invariant."""


def rat(x: RationalLike) -> Fraction:
    """Coerce an int, Fraction, or ``"num/den"`` string to an exact Fraction.

    Floats are rejected: they would smuggle rounding into an exact pipeline.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise InvalidInput(f"not an exact rational: {x!r}")
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInput(f"not an exact rational: {x!r}") from exc


def rat_str(q: RationalLike) -> str:
    """Canonical ``"num/den"`` rendering; the denominator is always explicit."""
    q = rat(q)
    return f"{q.numerator}/{q.denominator}"


def _rat_tuple(xs: Iterable[RationalLike]) -> tuple[Fraction, ...]:
    return tuple(rat(x) for x in xs)


@dataclass(frozen=True)
class Model:
    """Truncated sample space with an exact reference probability.

    ``p0_mass[i]`` is the reference mass of explicit state ``i``;
    ``p0_tail`` is present iff the model has a tail state and holds the
    residual reference mass beyond the truncation.  Masses are
    nonnegative and sum to one exactly.  Zero-mass explicit states are
    legal; they are needed to express non-equivalent measures.
    """

    p0_mass: tuple[Fraction, ...]
    p0_tail: Fraction | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "p0_mass", _rat_tuple(self.p0_mass))
        if self.p0_tail is not None:
            object.__setattr__(self, "p0_tail", rat(self.p0_tail))
        if not self.p0_mass:
            raise InvalidInput("a model needs at least one explicit state")
        if any(x < 0 for x in self.p0_mass):
            raise InvalidInput("reference masses must be nonnegative")
        if self.p0_tail is not None and self.p0_tail < 0:
            raise InvalidInput("tail reference mass must be nonnegative")
        total = sum(self.p0_mass, ZERO)
        if self.p0_tail is not None:
            total += self.p0_tail
        if total != 1:
            raise InvalidInput(f"reference masses must sum to 1, got {total}")

    @property
    def n_states(self) -> int:
        return len(self.p0_mass)

    @property
    def has_tail(self) -> bool:
        return self.p0_tail is not None

    @property
    def tail_charged(self) -> bool:
        return self.p0_tail is not None and self.p0_tail > 0

    def charged_states(self) -> tuple[int, ...]:
        return tuple(i for i, x in enumerate(self.p0_mass) if x > 0)

    def support(self) -> tuple[int, ...]:
        """Essential support coordinates: charged states, then TAIL if charged."""
        coords = list(self.charged_states())
        if self.tail_charged:
            coords.append(TAIL)
        return tuple(coords)

    def all_coords(self) -> tuple[int, ...]:
        """Every coordinate of the model: explicit states, then TAIL if present."""
        coords = list(range(self.n_states))
        if self.has_tail:
            coords.append(TAIL)
        return tuple(coords)


@dataclass(frozen=True)
class RandVar:
    """Bounded, eventually constant random variable on a truncated space.

    ``values[i]`` is the value at explicit state ``i``; ``tail_value`` is
    the constant the function takes beyond the truncation and is required
    exactly when the model has a tail state.
    """

    values: tuple[Fraction, ...]
    tail_value: Fraction | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _rat_tuple(self.values))
        if self.tail_value is not None:
            object.__setattr__(self, "tail_value", rat(self.tail_value))

    def check_conforms(self, m: Model) -> None:
        if len(self.values) != m.n_states:
            raise InvalidInput(
                f"random variable has {len(self.values)} values, "
                f"model has {m.n_states} states"
            )
        if m.has_tail and self.tail_value is None:
            raise InvalidInput("random variable lacks a tail value on a tail model")
        if not m.has_tail and self.tail_value is not None:
            raise InvalidInput("random variable has a tail value on a tail-less model")

    def at(self, coord: int) -> Fraction:
        """Value at a coordinate: a state index, or TAIL for the tail state."""
        if coord == TAIL:
            if self.tail_value is None:
                raise InvalidInput("no tail value on this random variable")
            return self.tail_value
        return self.values[coord]

    def scaled(self, a: RationalLike) -> "RandVar":
        a = rat(a)
        tail = None if self.tail_value is None else a * self.tail_value
        return RandVar(tuple(a * v for v in self.values), tail)

    def plus(self, other: "RandVar") -> "RandVar":
        if len(self.values) != len(other.values):
            raise InvalidInput("dimension mismatch")
        if (self.tail_value is None) != (other.tail_value is None):
            raise InvalidInput("tail mismatch")
        tail = None
        if self.tail_value is not None:
            tail = self.tail_value + other.tail_value
        return RandVar(
            tuple(a + b for a, b in zip(self.values, other.values)), tail
        )

    def minus(self, other: "RandVar") -> "RandVar":
        return self.plus(other.scaled(-1))

    def negated(self) -> "RandVar":
        return self.scaled(-1)

    def is_zero(self) -> bool:
        if any(v != 0 for v in self.values):
            return False
        return self.tail_value is None or self.tail_value == 0


def constant(c: RationalLike, m: Model) -> RandVar:
    """The constant random variable ``c`` on model ``m``."""
    c = rat(c)
    return RandVar((c,) * m.n_states, c if m.has_tail else None)


@dataclass(frozen=True)
class LinSpace:
    """Trading space given by a finite generating list of random variables.

    The basis may be empty (the space is then {0}) and need not be
    linearly independent.  All members must share one model's dimension
    and tail flag; that is validated against a model on use.
    """

    basis: tuple[RandVar, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "basis", tuple(self.basis))

    def check_conforms(self, m: Model) -> None:
        for k, x in enumerate(self.basis):
            try:
                x.check_conforms(m)
            except InvalidInput as exc:
                raise InvalidInput(f"basis element {k}: {exc}") from exc

    def combine(self, coefficients: Sequence[RationalLike]) -> RandVar:
        """The element with the given coordinates in the generating list."""
        coeffs = _rat_tuple(coefficients)
        if len(coeffs) != len(self.basis):
            raise InvalidInput(
                f"{len(coeffs)} coefficients for {len(self.basis)} basis elements"
            )
        if not self.basis:
            raise InvalidInput("cannot combine over an empty basis without a model")
        n = len(self.basis[0].values)
        values = [ZERO] * n
        tail = ZERO if self.basis[0].tail_value is not None else None
        for b, x in zip(coeffs, self.basis):
            if b == 0:
                continue
            for i, v in enumerate(x.values):
                if v:
                    values[i] += b * v
            if tail is not None and x.tail_value:
                tail += b * x.tail_value
        return RandVar(tuple(values), tail)


def ess_sup(x: RandVar, m: Model) -> Fraction:
    """Essential supremum of ``x`` under the model's reference measure.

    The maximum of ``x`` over charged explicit states, including the tail
    value when the tail state is charged.  Zero-mass states are excluded
    by definition.
    """
    x.check_conforms(m)
    best: Fraction | None = None
    for i in m.charged_states():
        v = x.values[i]
        if best is None or v > best:
            best = v
    if m.tail_charged:
        v = x.tail_value
        if best is None or v > best:
            best = v
    if best is None:  # unreachable: masses sum to 1, so something is charged
        raise InvalidInput("model has empty essential support")
    return best


def sup_norm(x: RandVar, m: Model) -> Fraction:
    """Essential sup-norm: max(ess_sup(x), ess_sup(-x)); always nonnegative."""
    return max(ess_sup(x, m), ess_sup(x.negated(), m))


def expect(p: "Fap", x: RandVar) -> Fraction:
    """Expectation of ``x`` under a finitely additive probability.

    The pure part acts as the tail functional (evaluation at the tail
    value), the countably additive part as an ordinary weighted sum.  For
    eventually constant ``x`` this equals the integral on the untruncated
    space.
    """
    if len(x.values) != len(p.ca_mass):
        raise InvalidInput("random variable and probability dimensions differ")
    if (p.ca_tail is None) != (x.tail_value is None):
        if x.tail_value is None:
            raise InvalidInput("random variable lacks a tail value on a tail model")
        raise InvalidInput("random variable has a tail value on a tail-less model")
    ca = ZERO
    for q, v in zip(p.ca_mass, x.values):
        if q and v:
            ca += q * v
    if p.ca_tail is not None and p.ca_tail and x.tail_value:
        ca += p.ca_tail * x.tail_value
    if p.alpha == 0:
        return ca
    return p.alpha * x.tail_value + (1 - p.alpha) * ca
