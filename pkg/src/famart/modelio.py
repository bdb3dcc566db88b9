"""Model file parsing, serialization, and report assembly.

The model file is a JSON document with every rational written as a
``"num/den"`` string (plain integers are accepted on input), so files
round-trip bit-exactly across platforms:

```
{
  "states": 3,
  "tail": true,
  "p0": ["1/2", "1/4", "1/8"],
  "p0_tail": "1/8",
  "basis": [{"values": ["1/1", "1/2", "1/3"], "tail": "0/1"}]
}
```

Instead of ``basis`` a file may carry ``filtration`` and ``process``
blocks (partitions as lists of coordinate lists, with ``"tail"`` naming
the tail state; the process as one value block per time index); the
basis is then derived from the one-step gains, and a simultaneous
explicit ``basis`` key is rejected so the file has a single source of
truth.  Optional ``previsions`` (one per generator, default zero) and
``events`` (default: the essential support) feed the coherence and
event-dominance checks.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .core import (
    TAIL,
    ZERO,
    InvalidInput,
    LinSpace,
    Model,
    RandVar,
    rat,
    rat_str,
)
from . import checkers
from .certificates import validate_verdict
from .checkers import Verdict
from .spaces import AdaptedProcess, Filtration, trading_space

#: Report row order for conditions.
CONDITION_ORDER = ("(3)", "(4)", "(5)", "(5*)", "(6)", "(7)", "(8)", "(10)", "coherence")


@dataclass(frozen=True)
class ModelDoc:
    """A parsed model file: the model, its trading space, and check inputs."""

    model: Model
    lin_space: LinSpace
    previsions: tuple[Fraction, ...]
    events: tuple[frozenset[int], ...]
    filtration: Filtration | None = None
    process: AdaptedProcess | None = None

    def extras(self) -> dict[str, Any]:
        return {"previsions": self.previsions, "events": self.events}


def _coord_to_json(c: int) -> Any:
    return "tail" if c == TAIL else c


def _coord_from_json(v: Any, m: Model) -> int:
    if v == "tail":
        if not m.has_tail:
            raise InvalidInput("file references the tail state of a tail-less model")
        return TAIL
    if isinstance(v, int) and not isinstance(v, bool) and 0 <= v < m.n_states:
        return v
    raise InvalidInput(f"bad coordinate {v!r}")


def _randvar_to_json(x: RandVar) -> dict[str, Any]:
    out: dict[str, Any] = {"values": [rat_str(v) for v in x.values]}
    if x.tail_value is not None:
        out["tail"] = rat_str(x.tail_value)
    return out


def _randvar_from_json(d: Any, m: Model, what: str) -> RandVar:
    if not isinstance(d, Mapping) or "values" not in d:
        raise InvalidInput(f"{what} must be an object with a 'values' list")
    values = d["values"]
    if not isinstance(values, list):
        raise InvalidInput(f"{what}: 'values' must be a list")
    tail = None
    if m.has_tail:
        if "tail" not in d:
            raise InvalidInput(f"{what} lacks a tail value on a tail model")
        tail = rat(d["tail"])
    elif "tail" in d:
        raise InvalidInput(f"{what} carries a tail value on a tail-less model")
    x = RandVar(tuple(rat(v) for v in values), tail)
    x.check_conforms(m)
    return x


def parse_model(doc: Mapping[str, Any]) -> ModelDoc:
    """Validate and load a model-file JSON object."""
    if not isinstance(doc, Mapping):
        raise InvalidInput("model file must be a JSON object")
    try:
        n = doc["states"]
        tail_flag = doc["tail"]
        p0 = doc["p0"]
    except KeyError as exc:
        raise InvalidInput(f"model file lacks key {exc.args[0]!r}") from exc
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InvalidInput("'states' must be a positive integer")
    if not isinstance(tail_flag, bool):
        raise InvalidInput("'tail' must be a boolean")
    if not isinstance(p0, list) or len(p0) != n:
        raise InvalidInput("'p0' must list one mass per state")
    p0_tail = None
    if tail_flag:
        if "p0_tail" not in doc:
            raise InvalidInput("tail models need 'p0_tail'")
        p0_tail = rat(doc["p0_tail"])
    elif "p0_tail" in doc:
        raise InvalidInput("'p0_tail' is only allowed on tail models")
    model = Model(tuple(rat(x) for x in p0), p0_tail)

    has_basis = "basis" in doc
    has_dynamics = "filtration" in doc or "process" in doc
    filtration = process = None
    if has_basis and has_dynamics:
        raise InvalidInput(
            "'basis' and 'filtration'/'process' are mutually exclusive; "
            "the basis is derived from the dynamics when they are present"
        )
    if has_dynamics:
        if "filtration" not in doc or "process" not in doc:
            raise InvalidInput("'filtration' and 'process' must come together")
        raw_f = doc["filtration"]
        if not isinstance(raw_f, list) or not all(
            isinstance(part, list) for part in raw_f
        ):
            raise InvalidInput("'filtration' must be a list of partitions")
        partitions = tuple(
            tuple(
                frozenset(_coord_from_json(c, model) for c in block)
                for block in part
            )
            for part in raw_f
        )
        filtration = Filtration(partitions)
        raw_s = doc["process"]
        if not isinstance(raw_s, list):
            raise InvalidInput("'process' must be a list of value blocks")
        process = AdaptedProcess(
            tuple(
                _randvar_from_json(d, model, f"process step {t}")
                for t, d in enumerate(raw_s)
            )
        )
        lin_space = trading_space(filtration, process, model)
    elif has_basis:
        raw_b = doc["basis"]
        if not isinstance(raw_b, list):
            raise InvalidInput("'basis' must be a list")
        lin_space = LinSpace(
            tuple(
                _randvar_from_json(d, model, f"basis element {k}")
                for k, d in enumerate(raw_b)
            )
        )
    else:
        raise InvalidInput("model file needs either 'basis' or dynamics blocks")

    previsions: tuple[Fraction, ...]
    if "previsions" in doc:
        raw_e = doc["previsions"]
        if not isinstance(raw_e, list) or len(raw_e) != len(lin_space.basis):
            raise InvalidInput("'previsions' must list one value per generator")
        previsions = tuple(rat(e) for e in raw_e)
    else:
        previsions = (ZERO,) * len(lin_space.basis)

    if "events" in doc:
        raw_ev = doc["events"]
        if not isinstance(raw_ev, list) or not raw_ev:
            raise InvalidInput("'events' must be a nonempty list of coordinate lists")
        events = tuple(
            frozenset(_coord_from_json(c, model) for c in block)
            for block in raw_ev
        )
    else:
        events = (frozenset(model.support()),)

    return ModelDoc(model, lin_space, previsions, events, filtration, process)


def serialize_model(
    model: Model,
    lin_space: LinSpace | None = None,
    filtration: Filtration | None = None,
    process: AdaptedProcess | None = None,
    previsions: Sequence[Fraction] | None = None,
    events: Sequence[frozenset[int]] | None = None,
) -> dict[str, Any]:
    """Build the JSON object for a model plus either a basis or dynamics."""
    out: dict[str, Any] = {
        "states": model.n_states,
        "tail": model.has_tail,
        "p0": [rat_str(x) for x in model.p0_mass],
    }
    if model.has_tail:
        out["p0_tail"] = rat_str(model.p0_tail)
    if filtration is not None or process is not None:
        if filtration is None or process is None:
            raise InvalidInput("'filtration' and 'process' must come together")
        out["filtration"] = [
            [
                [_coord_to_json(c) for c in sorted(block, key=lambda v: (v == TAIL, v))]
                for block in part
            ]
            for part in filtration.partitions
        ]
        out["process"] = [_randvar_to_json(s) for s in process.steps]
    elif lin_space is not None:
        out["basis"] = [_randvar_to_json(x) for x in lin_space.basis]
    else:
        raise InvalidInput("nothing to serialize: no basis and no dynamics")
    if previsions is not None:
        out["previsions"] = [rat_str(e) for e in previsions]
    if events is not None:
        out["events"] = [
            [_coord_to_json(c) for c in sorted(ev, key=lambda v: (v == TAIL, v))]
            for ev in events
        ]
    return out


def load_model_file(path: str) -> ModelDoc:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path} is not valid JSON: {exc}") from exc
    return parse_model(doc)


def model_digest(model: Model, lin_space: LinSpace) -> str:
    """Canonical digest of the model and its derived basis."""
    payload = {
        "states": model.n_states,
        "tail": model.has_tail,
        "p0": [rat_str(x) for x in model.p0_mass],
        "p0_tail": rat_str(model.p0_tail) if model.has_tail else None,
        "basis": [_randvar_to_json(x) for x in lin_space.basis],
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


class AuditError(RuntimeError):
    """The cross-condition self-audit of a report failed."""


def build_report(doc: ModelDoc) -> dict[str, Any]:
    """Run every applicable checker, self-audit the implication chain, and
    re-validate each certificate before assembly."""
    m, ls = doc.model, doc.lin_space
    verdicts: dict[str, Verdict] = {}
    verdicts["(3)"] = checkers.find_emfap(m, ls)
    verdicts["(4)"] = checkers.check_acmfap(m, ls)
    verdicts["(5)"] = checkers.cstar_verdict(m, ls)
    weight = None
    if not m.has_tail:
        from .core import constant

        weight = constant(1, m)
        verdicts["(5*)"] = checkers.verify_condition5star(m, ls, weight)
    verdicts["(6)"] = checkers.check_no_arbitrage(m, ls)
    verdicts["(7)"] = checkers.check_event_dominance(
        ls, doc.previsions, doc.events, m
    )
    if m.has_tail:
        verdicts["(8)"] = checkers.check_condition8(m, ls)
    verdicts["(10)"] = checkers.check_norm_closure(m, ls)
    if ls.basis:
        verdicts["coherence"] = checkers.check_coherence(
            ls.basis, doc.previsions, m
        )

    emfap, na, acm = verdicts["(3)"], verdicts["(6)"], verdicts["(4)"]
    if emfap.holds and not na.holds:
        raise AuditError("implication audit failed: equivalent martingale "
                         "functional without no-arbitrage")
    if na.holds and not acm.holds:
        raise AuditError("implication audit failed: no-arbitrage without a "
                         "nonnegative-essential-supremum verdict")
    if verdicts["(10)"].holds != na.holds:
        raise AuditError("implication audit failed: norm-closure and "
                         "no-arbitrage verdicts disagree")

    extras = doc.extras()
    if weight is not None:
        extras["weight"] = weight
    rows = []
    for cond in CONDITION_ORDER:
        if cond not in verdicts:
            continue
        v = verdicts[cond]
        if not validate_verdict(m, ls, v.to_dict(), extras):
            raise AuditError(
                f"certificate for condition {cond} failed re-validation"
            )
        rows.append(v.to_dict())

    return {
        "model_digest": model_digest(m, ls),
        "verdicts": rows,
        "implications": {
            "emfap_implies_no_arbitrage": (not emfap.holds) or na.holds,
            "no_arbitrage_implies_acmfap": (not na.holds) or acm.holds,
            "norm_closure_equals_no_arbitrage": verdicts["(10)"].holds == na.holds,
        },
    }
