"""Trading-space generation and exact generators for the built-in models.

A filtration is a list of partitions of the coordinates (explicit states
plus the tail state, which must sit inside exactly one block per time),
each refining the previous one.  The trading space of an adapted process
is spanned by the one-step gains ``I_B * (S_{t+1} - S_t)`` over the
time-t blocks; consecutive increments span the whole space of simple
strategy gains by telescoping.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    TAIL,
    ZERO,
    InvalidInput,
    LinSpace,
    Model,
    RandVar,
    RationalLike,
    rat,
)
from .fap import Fap

Block = frozenset  # of state indices; TAIL marks the tail state


@dataclass(frozen=True)
class Filtration:
    """Per time index, a partition of the model's coordinates.

    ``partitions[t]`` is a tuple of blocks (frozensets of coordinate ids).
    Time 0 must be the trivial partition and each later partition must
    refine its predecessor.
    """

    partitions: tuple[tuple[Block, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "partitions",
            tuple(tuple(frozenset(b) for b in part) for part in self.partitions),
        )
        if not self.partitions:
            raise InvalidInput("a filtration needs at least one time index")

    def check_conforms(self, m: Model) -> None:
        coords = frozenset(m.all_coords())
        for t, part in enumerate(self.partitions):
            seen: set[int] = set()
            for block in part:
                if not block:
                    raise InvalidInput(f"time {t}: empty partition block")
                if not block <= coords:
                    raise InvalidInput(
                        f"time {t}: block {sorted(block)} leaves the model"
                    )
                if seen & block:
                    raise InvalidInput(f"time {t}: blocks overlap")
                seen |= block
            if seen != coords:
                raise InvalidInput(f"time {t}: partition does not cover the model")
        if len(self.partitions[0]) != 1:
            raise InvalidInput("time 0 must carry the trivial partition")
        for t in range(1, len(self.partitions)):
            prev = self.partitions[t - 1]
            for block in self.partitions[t]:
                if not any(block <= coarse for coarse in prev):
                    raise InvalidInput(
                        f"time {t}: block {sorted(block)} does not refine time {t - 1}"
                    )

    @property
    def horizon(self) -> int:
        return len(self.partitions) - 1


@dataclass(frozen=True)
class AdaptedProcess:
    """One random variable per time index, constant on that time's blocks."""

    steps: tuple[RandVar, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "steps", tuple(self.steps))

    def check_adapted(self, f: Filtration, m: Model) -> None:
        if len(self.steps) != len(f.partitions):
            raise InvalidInput(
                f"process has {len(self.steps)} time points, "
                f"filtration has {len(f.partitions)}"
            )
        for t, (s, part) in enumerate(zip(self.steps, f.partitions)):
            s.check_conforms(m)
            for block in part:
                vals = {s.at(c) for c in block}
                if len(vals) > 1:
                    raise InvalidInput(
                        f"process not adapted: time {t}, block "
                        f"{sorted(block)} takes values {sorted(vals)}"
                    )


def trading_space(f: Filtration, s: AdaptedProcess, m: Model) -> LinSpace:
    """Basis ``I_B (S_{t+1} - S_t)`` over consecutive times and time-t blocks.

    Identically zero gains are omitted; a constant process yields the
    empty basis (the space {0}).
    """
    f.check_conforms(m)
    s.check_adapted(f, m)
    basis: list[RandVar] = []
    for t in range(f.horizon):
        inc = s.steps[t + 1].minus(s.steps[t])
        for block in f.partitions[t]:
            values = tuple(
                inc.values[i] if i in block else ZERO for i in range(m.n_states)
            )
            tail = None
            if m.has_tail:
                tail = inc.tail_value if TAIL in block else ZERO
            x = RandVar(values, tail)
            if not x.is_zero():
                basis.append(x)
    return LinSpace(tuple(basis))


# --------------------------------------------------------------------------
# Built-in example models
# --------------------------------------------------------------------------


def example_dmw(
    p: RationalLike, n: int
) -> tuple[Model, Filtration, AdaptedProcess]:
    """Coin-path market with a downward-biased reference coin.

    2^n explicit path states, no tail.  A path with heads probability
    ``p`` in (0, 1/2) gets mass p^h (1-p)^(n-h); the process is the
    running sum of the +-1 steps and the filtration is generated by the
    observed prefix.
    """
    p = rat(p)
    if not (0 < p < Fraction(1, 2)):
        raise InvalidInput(f"heads probability must lie in (0, 1/2), got {p}")
    if n < 1:
        raise InvalidInput("horizon must be at least 1")
    paths = list(itertools.product((1, -1), repeat=n))
    masses = []
    for path in paths:
        mass = Fraction(1)
        for step in path:
            mass *= p if step == 1 else (1 - p)
        masses.append(mass)
    m = Model(tuple(masses))

    partitions = []
    for t in range(n + 1):
        groups: dict[tuple[int, ...], set[int]] = {}
        for i, path in enumerate(paths):
            groups.setdefault(path[:t], set()).add(i)
        partitions.append(tuple(frozenset(g) for g in groups.values()))
    f = Filtration(tuple(partitions))

    steps = []
    for t in range(n + 1):
        steps.append(RandVar(tuple(Fraction(sum(path[:t])) for path in paths)))
    s = AdaptedProcess(tuple(steps))
    return m, f, s


def dmw_martingale_fap(n: int) -> Fap:
    """The fair-coin path measure: mass 2^-n on each of the 2^n paths."""
    if n < 1:
        raise InvalidInput("horizon must be at least 1")
    return Fap(ZERO, (Fraction(1, 2**n),) * 2**n)


def example_bp(
    n_states: int, k: int
) -> tuple[Model, Filtration, AdaptedProcess, Fap]:
    """Geometric-reference market whose martingale functional needs a tail.

    States are 1..N (serialised as indices 0..N-1) plus a tail state;
    the reference mass of state w is 2^-w with residual 2^-N.  The
    process starts at 1 and after step t is frozen at 2^-t on the
    surviving set {w > t}; the filtration reveals one state per step.
    Also returns the countably additive comparison measure with masses
    1/w - 1/(w+1) and residual 1/(N+1).
    """
    if n_states < 2:
        raise InvalidInput("need at least two explicit states")
    if k < 0 or k + 1 >= n_states:
        raise InvalidInput(
            "basis size must satisfy k + 1 < N so every gain is "
            "eventually constant within the truncation"
        )
    masses = tuple(Fraction(1, 2 ** (w + 1)) for w in range(n_states))
    m = Model(masses, Fraction(1, 2**n_states))

    def s_t(t: int) -> RandVar:
        values = []
        for idx in range(n_states):
            w = idx + 1
            if w > t:
                values.append(Fraction(1, 2**t))
            else:
                values.append(Fraction(w * w + 2 * w + 2, 2**w))
        return RandVar(tuple(values), Fraction(1, 2**t))

    steps = AdaptedProcess(tuple(s_t(t) for t in range(k + 2)))

    parts = []
    all_coords = frozenset(range(n_states)) | {TAIL}
    for t in range(k + 2):
        singletons = [frozenset({i}) for i in range(min(t, n_states))]
        rest = all_coords - frozenset(range(min(t, n_states)))
        parts.append(tuple(singletons + [frozenset(rest)]))
    f = Filtration(tuple(parts))

    q_masses = tuple(
        Fraction(1, w) - Fraction(1, w + 1) for w in range(1, n_states + 1)
    )
    q_ref = Fap(ZERO, q_masses, Fraction(1, n_states + 1))
    return m, f, steps, q_ref


def example_harmonic(n_states: int) -> tuple[Model, LinSpace]:
    """Geometric reference with the span of w -> 1/w (tail value 0).

    The single generator is nonnegative with positive mass somewhere, so
    arbitrage exists, while its essential supremum reaches 0 only through
    the charged tail.
    """
    if n_states < 2:
        raise InvalidInput("need at least two explicit states")
    masses = tuple(Fraction(1, 2 ** (w + 1)) for w in range(n_states))
    m = Model(masses, Fraction(1, 2**n_states))
    x = RandVar(tuple(Fraction(1, w) for w in range(1, n_states + 1)), ZERO)
    return m, LinSpace((x,))


def binomial_pmf(n: int, p: RationalLike) -> tuple[Fraction, ...]:
    """Exact Binomial(n, p) masses by head count, k = 0..n."""
    p = rat(p)
    if n < 0:
        raise InvalidInput("n must be nonnegative")
    if not (0 <= p <= 1):
        raise InvalidInput("p must lie in [0, 1]")
    q = 1 - p
    return tuple(
        Fraction(math.comb(n, k)) * p**k * q ** (n - k) for k in range(n + 1)
    )


def random_finite_model(
    seed: int, max_states: int = 6, max_basis: int = 4
) -> tuple[Model, LinSpace]:
    """Reproducible random finite market for fuzz pipelines.

    No tail state.  Null explicit states may occur, but every generator
    takes a nonzero value at some charged state and every charged state
    is touched by some generator; the fully degenerate shapes (empty
    basis, zero generators) have their own dedicated tests.
    """
    rng = random.Random(seed)
    n = rng.randint(1, max_states)
    weights = [rng.randint(0, 6) for _ in range(n)]
    if not any(weights):
        weights[rng.randrange(n)] = 1
    total = sum(weights)
    masses = tuple(Fraction(w, total) for w in weights)
    model = Model(masses)
    charged = model.charged_states()

    def nonzero_entry() -> Fraction:
        return Fraction(rng.choice((-3, -2, -1, 1, 2, 3)), rng.randint(1, 3))

    k = rng.randint(1, max_basis)
    basis = []
    for _ in range(k):
        vals = [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(n)]
        if all(vals[i] == 0 for i in charged):
            vals[rng.choice(charged)] = nonzero_entry()
        basis.append(RandVar(tuple(vals)))
    for i in charged:
        if all(x.values[i] == 0 for x in basis):
            j = rng.randrange(k)
            vals = list(basis[j].values)
            vals[i] = nonzero_entry()
            basis[j] = RandVar(tuple(vals))
    return model, LinSpace(tuple(basis))
