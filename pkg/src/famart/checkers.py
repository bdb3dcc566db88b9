"""One decision procedure per no-arbitrage-style condition.

Every checker returns a :class:`Verdict` whose certificate re-validates
against the model by plain arithmetic (see :mod:`famart.certificates`),
never by re-running the solver.  The linear programs behind the verdicts
are built by the ``*_lp`` functions below; their construction is
deterministic, so a certificate that refers to one of them can be
re-checked by rebuilding the same program.

Checked conditions, by their report labels:

``(6)``  no-arbitrage: no gain that is nonnegative with positive mass.
``(4)``  every gain has nonnegative essential supremum; equivalent to the
         existence of an absolutely continuous martingale functional.
``(3)``  existence of an equivalent martingale functional; equivalently a
         scaled expectation bound ``c E_Q(X) <= ess sup(-X)`` for some
         equivalent pmf Q and c > 0.
``(5)``  a uniform two-sided ratio bound ``ess sup(X) <= c* ess sup(-X)``
         on the unit sphere; ``(5*)`` is its weighted variant.
``(7)``  event-wise dominance ``sup_A X >= E(X)`` over an
         intersection-closed family of events.
``(8)``  all generators vanish at the tail.
``(10)`` the cone of dominated gains meets the nonnegative cone only at
         zero; polyhedral here, hence decided like (6).
``coherence``  previsions admit a representing finitely additive
         probability; otherwise a sure-loss bet exists.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from . import certificates as certs
from .core import (
    TAIL,
    ZERO,
    InvalidInput,
    LinSpace,
    Model,
    RandVar,
    RationalLike,
    ess_sup,
    expect,
    rat,
    sup_norm,
)
from .fap import Fap, from_p0, is_equivalent
from .lp import (
    EQ,
    GE,
    LE,
    Infeasible,
    LinearProgram,
    Optimal,
    Unbounded,
    solve,
)
from .spaces import binomial_pmf

Certificate = dict[str, Any]


@dataclass(frozen=True)
class Verdict:
    condition: str
    holds: bool
    certificate: Certificate
    narrative: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "condition": self.condition,
            "holds": self.holds,
            "certificate": self.certificate,
            "narrative": self.narrative,
        }


def _values_at(x: RandVar, coords: Sequence[int]) -> list[Fraction]:
    return [x.at(c) for c in coords]


def _combo_row(basis: Sequence[RandVar], coord: int) -> tuple[Fraction, ...]:
    return tuple(x.at(coord) for x in basis)


# --------------------------------------------------------------------------
# Deterministic program builders (shared with certificate validation)
# --------------------------------------------------------------------------


def arbitrage_lp(m: Model, ls: LinSpace) -> LinearProgram:
    """Feasibility: a combination nonnegative on the essential support whose
    support values sum to at least one.

    By positive homogeneity this is feasible exactly when some nonzero
    nonnegative gain exists, i.e. when there is arbitrage.
    """
    support = m.support()
    k = len(ls.basis)
    rows = [(_combo_row(ls.basis, c), GE, ZERO) for c in support]
    total = tuple(
        sum((x.at(c) for c in support), ZERO) for x in ls.basis
    )
    rows.append((total, GE, Fraction(1)))
    return LinearProgram(objective=(ZERO,) * k, maximize=True, constraints=rows)


def negative_gain_lp(m: Model, ls: LinSpace) -> LinearProgram:
    """Feasibility: a combination at most -1 everywhere on the support,
    i.e. a gain with strictly negative essential supremum (rescaled)."""
    support = m.support()
    k = len(ls.basis)
    rows = [(_combo_row(ls.basis, c), LE, Fraction(-1)) for c in support]
    return LinearProgram(objective=(ZERO,) * k, maximize=True, constraints=rows)


def martingale_mass_lp(m: Model, ls: LinSpace, strict: bool) -> LinearProgram:
    """Weights on the essential support that kill every generator.

    Strict form: weights ``w_c = s_c + t`` with slack variables
    ``s_c >= 0`` and the common floor ``t`` maximized, so the optimum is
    the largest attainable minimum weight; it is positive exactly when a
    strictly positive (equivalent) solution exists.  Relaxed form: plain
    nonnegative weights, feasibility only.

    Variables are ordered support-first (charged states, then the tail
    when charged), with ``t`` last in the strict form.
    """
    support = m.support()
    ns = len(support)
    k = len(ls.basis)
    nvars = ns + (1 if strict else 0)
    lower: list[Fraction | None] = [ZERO] * ns + ([None] if strict else [])
    rows = []
    # Total mass one.
    coeffs = [Fraction(1)] * ns + ([Fraction(ns)] if strict else [])
    rows.append((tuple(coeffs), EQ, Fraction(1)))
    # Zero expectation per generator.
    for x in ls.basis:
        vals = _values_at(x, support)
        coeffs = list(vals) + ([sum(vals, ZERO)] if strict else [])
        rows.append((tuple(coeffs), EQ, ZERO))
    objective = [ZERO] * ns + ([Fraction(1)] if strict else [])
    return LinearProgram(
        objective=tuple(objective),
        maximize=True,
        constraints=rows,
        lower=tuple(lower),
        upper=(None,) * nvars,
    )


def expectation_bound_lp(
    m: Model, ls: LinSpace, q: Fap, c: Fraction
) -> LinearProgram:
    """Minimize ``ess sup(-X_b) - c E_Q(X_b)`` over the unit ball.

    Variables: the combination coefficients, then the epigraph variable
    for the essential supremum of the negated gain.
    """
    support = m.support()
    k = len(ls.basis)
    rows = []
    for coord in support:
        row = list(_combo_row(ls.basis, coord))
        rows.append((tuple(row + [Fraction(1)]), GE, ZERO))  # u >= -X_b
        rows.append((tuple(row + [ZERO]), LE, Fraction(1)))
        rows.append((tuple(row + [ZERO]), GE, Fraction(-1)))
    objective = [-c * expect(q, x) for x in ls.basis] + [Fraction(1)]
    return LinearProgram(
        objective=tuple(objective), maximize=False, constraints=rows
    )


def ratio_bound_lp(m: Model, ls: LinSpace, coord: int) -> LinearProgram:
    """Maximize the gain at one support coordinate subject to the gain
    being at least -1 everywhere on the support."""
    support = m.support()
    rows = [(_combo_row(ls.basis, c), GE, Fraction(-1)) for c in support]
    return LinearProgram(
        objective=_combo_row(ls.basis, coord), maximize=True, constraints=rows
    )


def event_dominance_lp(
    m: Model, ls: LinSpace, previsions: Sequence[Fraction], event: frozenset[int]
) -> LinearProgram:
    """Minimize ``sup_A X_b - E(X_b)`` over the unit ball, for one event A.

    The event supremum is pointwise over the event's coordinates (charged
    or not); the ball is the essential unit ball.
    """
    support = m.support()
    k = len(ls.basis)
    rows = []
    for coord in sorted(event):
        row = list(_combo_row(ls.basis, coord))
        rows.append((tuple(row + [Fraction(-1)]), LE, ZERO))  # X_b <= u
    for coord in support:
        row = list(_combo_row(ls.basis, coord))
        rows.append((tuple(row + [ZERO]), LE, Fraction(1)))
        rows.append((tuple(row + [ZERO]), GE, Fraction(-1)))
    objective = [-e for e in previsions] + [Fraction(1)]
    return LinearProgram(
        objective=tuple(objective), maximize=False, constraints=rows
    )


def coherence_coords(m: Model) -> tuple[int, ...]:
    """Weighting coordinates for coherence: charged states plus the tail
    state whenever the model has one."""
    coords = list(m.charged_states())
    if m.has_tail:
        coords.append(TAIL)
    return tuple(coords)


def coherence_lp(
    m: Model, gambles: Sequence[RandVar], previsions: Sequence[Fraction]
) -> LinearProgram:
    """Feasibility: a probability weighting over the coherence coordinates
    reproducing every prevision."""
    coords = coherence_coords(m)
    n = len(coords)
    rows = [((Fraction(1),) * n, EQ, Fraction(1))]
    for x, e in zip(gambles, previsions):
        rows.append((tuple(x.at(c) for c in coords), EQ, e))
    return LinearProgram(
        objective=(ZERO,) * n,
        maximize=True,
        constraints=rows,
        lower=(ZERO,) * n,
        upper=(None,) * n,
    )


# --------------------------------------------------------------------------
# Shared construction helpers
# --------------------------------------------------------------------------


def _fap_from_weights(m: Model, weights: dict[int, Fraction]) -> Fap:
    """Build a Fap from support weights, splitting any tail weight evenly
    between the pure part and the countably additive residual.

    Either half alone would do; the even split keeps both the pure part
    and the equivalence of the countably additive part visible.
    """
    tau = weights.get(TAIL, ZERO)
    alpha = tau / 2
    masses = [weights.get(i, ZERO) for i in range(m.n_states)]
    if alpha > 0:
        scale = 1 - alpha
        ca_mass = tuple(x / scale for x in masses)
        ca_tail = (tau / 2) / scale
        return Fap(alpha, ca_mass, ca_tail)
    return Fap(ZERO, tuple(masses), tau if m.has_tail else None)


def _arbitrage_like(m: Model, ls: LinSpace, condition: str, narrative: dict[str, str]) -> Verdict:
    ls.check_conforms(m)
    lp = arbitrage_lp(m, ls)
    out = solve(lp)
    if isinstance(out, Optimal):
        x = ls.combine(out.primal)
        norm = sup_norm(x, m)
        coeffs = tuple(b / norm for b in out.primal)
        x = ls.combine(coeffs)
        return Verdict(
            condition,
            False,
            certs.arbitrage_vector(coeffs, x),
            narrative["fails"],
        )
    assert isinstance(out, Infeasible)
    return Verdict(
        condition,
        True,
        certs.farkas_witness(lp, "arbitrage", out.farkas, claim="infeasible"),
        narrative["holds"],
    )


# --------------------------------------------------------------------------
# Checkers
# --------------------------------------------------------------------------


def check_no_arbitrage(m: Model, ls: LinSpace) -> Verdict:
    """Condition (6): no gain is nonnegative with strictly positive mass."""
    return _arbitrage_like(
        m,
        ls,
        "(6)",
        {
            "holds": "no-arbitrage: the search for a nonnegative gain with "
            "positive essential supremum is infeasible (Farkas witness).",
            "fails": "arbitrage: the attached gain is nonnegative on the "
            "essential support with positive essential supremum.",
        },
    )


def check_norm_closure(m: Model, ls: LinSpace) -> Verdict:
    """Condition (10): the norm closure of (gains minus nonnegative
    functions) meets the nonnegative cone only at zero.

    On these finite-coordinate models that set is a polyhedral cone and
    hence already norm-closed, so the condition reduces to the
    no-arbitrage search.
    """
    verdict = _arbitrage_like(
        m,
        ls,
        "(10)",
        {
            "holds": "the polyhedral cone of dominated gains is closed and "
            "meets the nonnegative cone only at zero (no-arbitrage "
            "reduction; Farkas witness).",
            "fails": "a nonzero nonnegative function lies in the cone of "
            "dominated gains; the attached gain witnesses it.",
        },
    )
    return verdict


def check_acmfap(m: Model, ls: LinSpace) -> Verdict:
    """Condition (4): every gain has nonnegative essential supremum.

    When it holds, an absolutely continuous martingale functional is
    constructed outright (nonnegative weights on the support killing all
    generators; such weights exist by exact duality against the searched
    negative gain).
    """
    ls.check_conforms(m)
    lp = negative_gain_lp(m, ls)
    out = solve(lp)
    if isinstance(out, Optimal):
        x = ls.combine(out.primal)
        value = ess_sup(x, m)
        return Verdict(
            "(4)",
            False,
            certs.witness(
                coefficients=out.primal,
                x=x,
                claim="negative_ess_sup",
                amount=value,
            ),
            "a gain with strictly negative essential supremum exists; "
            "no absolutely continuous martingale functional can price it.",
        )
    assert isinstance(out, Infeasible)
    relaxed = martingale_mass_lp(m, ls, strict=False)
    relaxed_out = solve(relaxed)
    if not isinstance(relaxed_out, Optimal):  # pragma: no cover - duality
        raise AssertionError("mass program must be feasible when (4) holds")
    support = m.support()
    weights = dict(zip(support, relaxed_out.primal))
    fap = _fap_from_weights(m, weights)
    return Verdict(
        "(4)",
        True,
        certs.martingale_fap(m, fap, equivalent=is_equivalent(fap, m)),
        "every gain has nonnegative essential supremum; the attached "
        "absolutely continuous functional kills every generator.",
    )


def find_emfap(m: Model, ls: LinSpace) -> Verdict:
    """Condition (3)/(1): existence of an equivalent martingale functional.

    Maximizes the minimum support weight among weightings that kill every
    generator; strict positivity of the optimum is exactly equivalence.
    The emitted functional splits the tail weight evenly between the pure
    tail part and the countably additive residual, and induces the open
    convex separation witness ``{X : E_P(X) > 0}``.
    """
    ls.check_conforms(m)
    if not ls.basis:
        fap = from_p0(m)
        weights = {c: (m.p0_tail if c == TAIL else m.p0_mass[c]) for c in m.support()}
        return Verdict(
            "(3)",
            True,
            certs.separating_functional(m, fap, min(weights.values())),
            "the space of gains is trivial; the reference measure itself "
            "is an equivalent martingale functional.",
        )
    lp = martingale_mass_lp(m, ls, strict=True)
    out = solve(lp)
    if isinstance(out, Infeasible):
        return Verdict(
            "(3)",
            False,
            certs.farkas_witness(lp, "min-mass", out.farkas, claim="infeasible"),
            "no signed weighting kills every generator; the scaled "
            "expectation bound fails for every representable (Q, c).",
        )
    assert isinstance(out, Optimal)
    t_star = out.value
    if t_star <= 0:
        return Verdict(
            "(3)",
            False,
            certs.farkas_witness(
                lp, "min-mass", out.dual, claim="max_at_most", bound_value=t_star
            ),
            "weightings killing every generator exist but none is strictly "
            "positive (the attached dual bounds the best minimum weight by "
            "zero); the scaled expectation bound fails for every "
            "representable (Q, c).",
        )
    support = m.support()
    slacks = out.primal[: len(support)]
    weights = {c: s + t_star for c, s in zip(support, slacks)}
    fap = _fap_from_weights(m, weights)
    return Verdict(
        "(3)",
        True,
        certs.separating_functional(m, fap, t_star),
        "an equivalent martingale functional exists; it separates the "
        "dominated-gain cone via the open convex set of bounded functions "
        "with strictly positive expectation.",
    )


def verify_condition3(
    m: Model, ls: LinSpace, q: Fap, c: RationalLike
) -> Verdict:
    """Condition (3) for an explicitly supplied pmf Q and constant c > 0:
    ``c E_Q(X) <= ess sup(-X)`` for every gain X.

    Decided by one exact program over the unit ball; positive homogeneity
    extends the verdict to the whole space.
    """
    c = rat(c)
    ls.check_conforms(m)
    q.check_conforms(m)
    if q.alpha != 0:
        raise InvalidInput("Q must be countably additive (alpha = 0)")
    if not is_equivalent(q, m):
        raise InvalidInput("Q must be equivalent to the reference measure")
    if c <= 0:
        raise InvalidInput("the constant c must be positive")
    params = {"q": certs.fap_payload(q), "c": certs.rat_str(c)}
    lp = expectation_bound_lp(m, ls, q, c)
    out = solve(lp)
    assert isinstance(out, Optimal)  # ball-constrained, always attained
    if out.value >= 0:
        return Verdict(
            "(3)",
            True,
            certs.farkas_witness(
                lp,
                "expectation-bound",
                out.dual,
                claim="min_at_least",
                bound_value=out.value,
                extras=params,
            ),
            "the scaled expectation of every gain stays below the "
            "essential supremum of its negation (dual bound attached).",
        )
    coeffs = out.primal[: len(ls.basis)]
    x = ls.combine(coeffs)
    return Verdict(
        "(3)",
        False,
        certs.witness(
            coefficients=coeffs,
            x=x,
            claim="expectation_bound_violated",
            amount=out.value,
            extras=params,
        ),
        "a unit-ball gain violates the scaled expectation bound.",
    )


def compute_cstar(m: Model, ls: LinSpace) -> Fraction | None:
    """Least uniform ratio bound ``ess sup(X) <= c* ess sup(-X)`` on the
    unit sphere; None when no finite bound exists (equivalently, the
    space contains a nonzero nonnegative gain)."""
    value, _ = _cstar_with_certificate(m, ls)
    return value


def _cstar_with_certificate(
    m: Model, ls: LinSpace
) -> tuple[Fraction | None, Certificate]:
    ls.check_conforms(m)
    support = m.support()
    if not ls.basis:
        return ZERO, certs.cstar_bound(ZERO, attaining=None, duals={})
    best: Fraction | None = None
    best_coord: int | None = None
    best_primal: tuple[Fraction, ...] | None = None
    duals: dict[int, tuple[tuple[Fraction, ...], Fraction]] = {}
    for coord in support:
        lp = ratio_bound_lp(m, ls, coord)
        out = solve(lp)
        if isinstance(out, Unbounded):
            ray_gain = ls.combine(out.ray)
            total = sum((ray_gain.at(c) for c in support), ZERO)
            return None, certs.witness(
                coefficients=out.ray,
                x=ray_gain,
                claim="nonnegative_direction",
                amount=total,
            )
        assert isinstance(out, Optimal)
        duals[coord] = (out.dual, out.value)
        if best is None or out.value > best:
            best = out.value
            best_coord = coord
            best_primal = out.primal
    attaining = {
        "coefficients": best_primal,
        "x": ls.combine(best_primal),
        "coord": best_coord,
    }
    return best, certs.cstar_bound(best, attaining=attaining, duals=duals)


def cstar_verdict(m: Model, ls: LinSpace) -> Verdict:
    """Condition (5) as a verdict: holds iff a finite ratio bound exists."""
    value, certificate = _cstar_with_certificate(m, ls)
    if value is None:
        return Verdict(
            "(5)",
            False,
            certificate,
            "no finite ratio bound: the attached direction is a nonzero "
            "nonnegative gain.",
        )
    return Verdict(
        "(5)",
        True,
        certificate,
        f"finite ratio bound c* = {value} (attained; per-coordinate dual "
        "bounds attached).",
    )


def qstar_from_weight(m: Model, q: Fap, y: RandVar) -> Fap:
    """Reweighting ``Q*(A) = E_Q(Y I_A) / E_Q(Y)`` of a pmf by a positive
    bounded weight; a probability by construction."""
    q.check_conforms(m)
    y.check_conforms(m)
    if q.alpha != 0:
        raise InvalidInput("Q must be countably additive (alpha = 0)")
    total = expect(q, y)
    if total <= 0:
        raise InvalidInput(f"E_Q(Y) must be positive, got {total}")
    masses = tuple(qi * vi / total for qi, vi in zip(q.ca_mass, y.values))
    tail = None
    if m.has_tail:
        tail = q.ca_tail * y.tail_value / total
    return Fap(ZERO, masses, tail)


def verify_condition5star(m: Model, ls: LinSpace, y: RandVar) -> Verdict:
    """Condition (5*): the ratio bound for the weighted family {X Y}.

    The weight must be strictly positive at every charged explicit state
    and vanish at the tail on tail models (it is the limit along the
    exhausting sequence).  When the weighted bound is finite, the states
    being atoms lets the martingale functional of the weighted family be
    reweighted into a countably additive martingale measure Q* for the
    original family, which is attached.
    """
    ls.check_conforms(m)
    y.check_conforms(m)
    charged = m.charged_states()
    if not charged:
        raise InvalidInput("degenerate model: no charged explicit state")
    for i in charged:
        if y.values[i] <= 0:
            raise InvalidInput(
                f"weight must be positive on the support; state {i} has "
                f"value {y.values[i]}"
            )
    if m.has_tail and y.tail_value != 0:
        raise InvalidInput(
            "on tail models the weight must vanish at the tail, got "
            f"{y.tail_value}"
        )
    weighted = LinSpace(
        tuple(
            RandVar(
                tuple(a * b for a, b in zip(x.values, y.values)),
                (x.tail_value * y.tail_value) if m.has_tail else None,
            )
            for x in ls.basis
        )
    )
    value, certificate = _cstar_with_certificate(m, weighted)
    if value is None:
        return Verdict(
            "(5*)",
            False,
            {
                "kind": "weighted_ratio_bound",
                "cstar": certificate,
                "weight": certs.randvar_payload(y),
            },
            "no finite weighted ratio bound: the attached direction is a "
            "nonzero nonnegative weighted gain.",
        )
    emfap = find_emfap(m, weighted)
    if not emfap.holds:  # pragma: no cover - excluded by exact duality
        raise AssertionError(
            "a finite weighted ratio bound implies an equivalent "
            "martingale functional for the weighted family"
        )
    weighted_fap = certs.fap_from_payload(m, emfap.certificate["fap"])
    q_ca = Fap(ZERO, weighted_fap.ca_mass, weighted_fap.ca_tail)
    qstar = qstar_from_weight(m, q_ca, y)
    certificate = {
        "kind": "weighted_ratio_bound",
        "cstar": certificate,
        "weight": certs.randvar_payload(y),
        "qstar": certs.martingale_fap(m, qstar, equivalent=is_equivalent(qstar, m)),
    }
    return Verdict(
        "(5*)",
        True,
        certificate,
        f"finite weighted ratio bound c* = {value}; since every explicit "
        "state is an atom, the reweighted functional Q* attached is a "
        "countably additive martingale measure for the original family.",
    )


def check_condition8(m: Model, ls: LinSpace) -> Verdict:
    """Condition (8): every generator vanishes at the tail state.

    Eventual constancy makes the limit along the exhausting sequence
    exact, so this is a finite check of the stored tail values.
    """
    if not m.has_tail:
        raise InvalidInput("the vanishing-tail condition needs a tail state")
    ls.check_conforms(m)
    tails = tuple(x.tail_value for x in ls.basis)
    holds = all(t == 0 for t in tails)
    if holds:
        narrative = "every generator has tail value zero."
    else:
        bad = next(i for i, t in enumerate(tails) if t != 0)
        narrative = (
            f"generator {bad} has tail value {tails[bad]}; the limit along "
            "the exhausting sequence does not vanish."
        )
    return Verdict("(8)", holds, certs.tail_values(tails), narrative)


def check_coherence(
    gambles: Sequence[RandVar],
    previsions: Sequence[RationalLike],
    m: Model,
) -> Verdict:
    """de Finetti coherence of previsions on a finite list of gambles.

    Coherent means representable: some probability weighting over the
    coherence coordinates reproduces every prevision.  Incoherent means a
    sure-loss bet exists: stakes under which the bettor's gain
    ``sum c_d (X_d - E_d)`` is strictly positive at every coordinate.
    """
    gambles = tuple(gambles)
    previsions = tuple(rat(e) for e in previsions)
    if not gambles:
        raise InvalidInput("coherence needs at least one gamble")
    if len(gambles) != len(previsions):
        raise InvalidInput("one prevision per gamble is required")
    for x in gambles:
        x.check_conforms(m)
    lp = coherence_lp(m, gambles, previsions)
    out = solve(lp)
    if isinstance(out, Optimal):
        coords = coherence_coords(m)
        weights = dict(zip(coords, out.primal))
        masses = tuple(weights.get(i, ZERO) for i in range(m.n_states))
        fap = Fap(ZERO, masses, weights.get(TAIL) if m.has_tail else None)
        return Verdict(
            "coherence",
            True,
            certs.representing_fap(fap, previsions),
            "coherent: the attached probability reproduces every prevision.",
        )
    assert isinstance(out, Infeasible)
    stakes = tuple(out.farkas[1:])
    coords = coherence_coords(m)
    win = min(
        sum(
            (c * (x.at(coord) - e) for c, x, e in zip(stakes, gambles, previsions)),
            ZERO,
        )
        for coord in coords
    )
    return Verdict(
        "coherence",
        False,
        certs.sure_loss_bet(stakes, win, previsions),
        "incoherent: the attached stakes win at least "
        f"{win} at every coordinate.",
    )


def check_event_dominance(
    d: LinSpace,
    previsions: Sequence[RationalLike],
    events: Sequence[Sequence[int]],
    m: Model,
) -> Verdict:
    """Event-wise dominance (7): ``sup_A X >= E(X)`` for every gain and
    every event of an intersection-closed family.

    When it holds, the family's least event (the intersection of all of
    them, present by closure) carries a representing probability with
    total mass on that event, which certifies the condition for the whole
    family.
    """
    previsions = tuple(rat(e) for e in previsions)
    d.check_conforms(m)
    if len(previsions) != len(d.basis):
        raise InvalidInput("one prevision per generator is required")
    coords = frozenset(m.all_coords())
    family = []
    for a in events:
        ev = frozenset(a)
        if not ev:
            raise InvalidInput("events must be nonempty")
        if not ev <= coords:
            raise InvalidInput(f"event {sorted(ev)} leaves the model")
        family.append(ev)
    if not family:
        raise InvalidInput("the event family must be nonempty")
    as_set = set(family)
    for a in family:
        for b in family:
            if (a & b) not in as_set:
                raise InvalidInput(
                    "events are not closed under intersection: "
                    f"{sorted(a)} and {sorted(b)}"
                )
    for a in family:
        lp = event_dominance_lp(m, d, previsions, a)
        out = solve(lp)
        if isinstance(out, Unbounded):
            coeffs = tuple(out.ray[: len(d.basis)])
            x = d.combine(coeffs) if d.basis else None
            amount = (max(x.at(c) for c in sorted(a)) if x else ZERO) - sum(
                (b * e for b, e in zip(coeffs, previsions)), ZERO
            )
            return Verdict(
                "(7)",
                False,
                certs.witness(
                    coefficients=coeffs,
                    x=x,
                    claim="event_dominance_violated",
                    amount=amount,
                    event=a,
                    extras={"previsions": [certs.rat_str(e) for e in previsions]},
                ),
                "dominance fails along an unbounded direction on event "
                f"{sorted(a)}.",
            )
        assert isinstance(out, Optimal)
        if out.value < 0:
            coeffs = tuple(out.primal[: len(d.basis)])
            x = d.combine(coeffs)
            return Verdict(
                "(7)",
                False,
                certs.witness(
                    coefficients=coeffs,
                    x=x,
                    claim="event_dominance_violated",
                    amount=out.value,
                    event=a,
                    extras={"previsions": [certs.rat_str(e) for e in previsions]},
                ),
                f"a unit-ball gain has supremum over {sorted(a)} below its "
                "prevision.",
            )
    least = family[0]
    for a in family[1:]:
        least = least & a
    # Closure puts the intersection of the whole family in it.
    rep_lp_coords = sorted(least)
    rows = [((Fraction(1),) * len(rep_lp_coords), EQ, Fraction(1))]
    for x, e in zip(d.basis, previsions):
        rows.append((tuple(x.at(c) for c in rep_lp_coords), EQ, e))
    rep_lp = LinearProgram(
        objective=(ZERO,) * len(rep_lp_coords),
        maximize=True,
        constraints=rows,
        lower=(ZERO,) * len(rep_lp_coords),
        upper=(None,) * len(rep_lp_coords),
    )
    rep_out = solve(rep_lp)
    if not isinstance(rep_out, Optimal):  # pragma: no cover - exact duality
        raise AssertionError(
            "dominance on the least event implies a representation on it"
        )
    weights = dict(zip(rep_lp_coords, rep_out.primal))
    masses = tuple(weights.get(i, ZERO) for i in range(m.n_states))
    fap = Fap(ZERO, masses, weights.get(TAIL, ZERO) if m.has_tail else None)
    return Verdict(
        "(7)",
        True,
        certs.representing_fap(fap, previsions, event=least),
        "dominance holds for every event; the attached probability sits "
        "on the least event, reproduces the previsions, and gives every "
        "event total mass.",
    )


@dataclass(frozen=True)
class DivergenceRow:
    horizon: int
    tv_distance: Fraction
    min_likelihood_ratio: Fraction
    max_likelihood_ratio: Fraction


def divergence_study(
    p: RationalLike, horizons: Sequence[int]
) -> tuple[DivergenceRow, ...]:
    """Exact separation trend between the biased and fair coin laws.

    For each horizon: the total variation distance between Binomial(n, p)
    and Binomial(n, 1/2) by head-count aggregation, plus the extreme
    likelihood ratios.  The increasing trend is the finite-scale witness
    of their mutual singularity in the limit.
    """
    p = rat(p)
    if not (0 < p < Fraction(1, 2)):
        raise InvalidInput(f"bias must lie in (0, 1/2), got {p}")
    half = Fraction(1, 2)
    rows = []
    for n in horizons:
        biased = binomial_pmf(n, p)
        fair = binomial_pmf(n, half)
        tv = sum((abs(a - b) for a, b in zip(biased, fair)), ZERO) / 2
        ratios = [a / b for a, b in zip(biased, fair)]
        rows.append(DivergenceRow(n, tv, min(ratios), max(ratios)))
    return tuple(rows)
