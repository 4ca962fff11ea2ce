"""Checks, faults, configurations and syndromes.

A :class:`FaultModel` is a finite list of independent faults over a declared
universe of ``check_count`` checks and ``observable_count`` logical
observables. A fault's id is its position in ``FaultModel.faults``.

Syndromes, observable sets and fault configurations are all plain
``frozenset[int]`` values; their binary sum is the symmetric difference
(``a ^ b``).

The text interchange format is a strict subset of the detector-error-model
style::

    # comment
    checks 3
    observables 1
    error(0.01) D0 L0
    error(0.01) D0 D1
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from functools import reduce
from pathlib import Path
from typing import Iterable

from hypersplit.errors import (
    ModelError,
    ParseError,
    ProbabilityRangeError,
    UnknownFaultError,
)

logger = logging.getLogger(__name__)

Syndrome = frozenset
FaultConfiguration = frozenset

EMPTY: frozenset[int] = frozenset()


def _check_probability(p: float) -> float:
    p = float(p)
    if not 0.0 < p <= 0.5:
        raise ProbabilityRangeError(f"probability {p!r} outside (0, 0.5]")
    return p


@dataclass(frozen=True)
class Fault:
    """One independent fault mechanism.

    The label is diagnostic only and takes no part in equality.
    """

    probability: float
    checks: frozenset[int]
    observables: frozenset[int] = EMPTY
    label: str | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "probability", _check_probability(self.probability))
        object.__setattr__(self, "checks", frozenset(self.checks))
        object.__setattr__(self, "observables", frozenset(self.observables))
        if not self.checks:
            raise ModelError("a fault must trigger at least one check")

    @property
    def weight(self) -> int:
        """Number of checks the fault triggers."""
        return len(self.checks)

    @property
    def key(self) -> tuple[frozenset[int], frozenset[int]]:
        return self.checks, self.observables


@dataclass(frozen=True)
class FaultModel:
    check_count: int
    observable_count: int
    faults: tuple[Fault, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "faults", tuple(self.faults))
        if self.check_count < 0 or self.observable_count < 0:
            raise ModelError("check and observable counts must be non-negative")
        for i, f in enumerate(self.faults):
            if max(f.checks) >= self.check_count or min(f.checks) < 0:
                raise ModelError(f"fault {i} refers to a check outside "
                                 f"[0, {self.check_count})")
            if f.observables and (max(f.observables) >= self.observable_count
                                  or min(f.observables) < 0):
                raise ModelError(f"fault {i} refers to an observable outside "
                                 f"[0, {self.observable_count})")

    def __len__(self) -> int:
        return len(self.faults)

    def __getitem__(self, fault_id: int) -> Fault:
        return self.faults[fault_id]

    @property
    def max_weight(self) -> int:
        return max((f.weight for f in self.faults), default=0)

    def is_graph_like(self) -> bool:
        return self.max_weight <= 2

    def with_faults(self, faults: Iterable[Fault]) -> FaultModel:
        return FaultModel(self.check_count, self.observable_count, tuple(faults))

    def canonical(self) -> FaultModel:
        """The same model with faults sorted by (checks, observables, p)."""
        return self.with_faults(sorted(self.faults, key=_sort_key))

    def equivalent(self, other: FaultModel) -> bool:
        """Equality up to fault ordering (labels ignored)."""
        return self.canonical() == other.canonical()


def _sort_key(f: Fault):
    return sorted(f.checks), sorted(f.observables), f.probability


def disjoint_union(*models: FaultModel) -> FaultModel:
    """Place models side by side, renumbering checks and observables."""
    faults = []
    c_off = o_off = 0
    for m in models:
        for f in m.faults:
            faults.append(Fault(f.probability,
                                {c + c_off for c in f.checks},
                                {o + o_off for o in f.observables},
                                f.label))
        c_off += m.check_count
        o_off += m.observable_count
    return FaultModel(c_off, o_off, tuple(faults))


def _members(model: FaultModel, config: Iterable[int]) -> list[Fault]:
    out = []
    for i in config:
        if not 0 <= i < len(model.faults):
            raise UnknownFaultError(f"unknown fault id {i}")
        out.append(model.faults[i])
    return out


def syndrome_of(model: FaultModel, config: Iterable[int]) -> frozenset[int]:
    """Symmetric difference of the syndromes of the faults in ``config``."""
    return reduce(frozenset.symmetric_difference,
                  (f.checks for f in _members(model, config)), EMPTY)


def observables_of(model: FaultModel, config: Iterable[int]) -> frozenset[int]:
    """Symmetric difference of the observable sets of the faults in ``config``."""
    return reduce(frozenset.symmetric_difference,
                  (f.observables for f in _members(model, config)), EMPTY)


def combine_probabilities(*ps: float) -> float:
    """Fold ``p + q - p*q`` over ``ps``, i.e. ``1 - prod(1 - p)``."""
    q = 1.0
    for p in ps:
        q *= 1.0 - p
    return 1.0 - q


def ambiguous_syndromes(model: FaultModel) -> dict[frozenset[int], list[int]]:
    """Syndromes shared by faults that flip different observable sets."""
    by_syndrome: dict[frozenset[int], dict[frozenset[int], int]] = {}
    for i, f in enumerate(model.faults):
        by_syndrome.setdefault(f.checks, {}).setdefault(f.observables, i)
    return {s: sorted(obs.values()) for s, obs in by_syndrome.items()
            if len(obs) > 1}


def merge_duplicates_map(model: FaultModel) -> tuple[FaultModel, list[int]]:
    """Merge faults with identical syndrome and observables.

    Returns the merged model and, for every input fault id, the id of the
    fault that represents it in the merged model. Merged faults keep the
    position and label of their first occurrence.

    Raises
    ------
    ProbabilityRangeError
        If a merged probability reaches 0.5.
    """
    index: dict[tuple, int] = {}
    probs: list[list[float]] = []
    firsts: list[Fault] = []
    mapping = []
    for f in model.faults:
        j = index.get(f.key)
        if j is None:
            j = index[f.key] = len(firsts)
            firsts.append(f)
            probs.append([])
        probs[j].append(f.probability)
        mapping.append(j)
    merged = []
    for f, ps in zip(firsts, probs):
        if len(ps) == 1:
            merged.append(f)
            continue
        p = combine_probabilities(*ps)
        if p >= 0.5:
            raise ProbabilityRangeError(
                f"merging {len(ps)} copies of fault {sorted(f.checks)} gives "
                f"probability {p!r} >= 0.5")
        merged.append(Fault(p, f.checks, f.observables, f.label))
    out = model.with_faults(merged)
    for s, ids in ambiguous_syndromes(out).items():
        logger.warning("faults %s share syndrome %s but flip different "
                       "observables; kept distinct", ids, sorted(s))
    return out, mapping


def merge_duplicates(model: FaultModel) -> FaultModel:
    return merge_duplicates_map(model)[0]


# -- text format -----------------------------------------------------------

_ERROR_RE = re.compile(r"^error\(\s*([^)]*?)\s*\)(.*)$")
_TOKEN_RE = re.compile(r"^([DL])(\d+)$")


def read_model(text: str) -> FaultModel:
    """Parse the line-oriented fault-model format."""
    header: dict[str, int] = {}
    faults: list[Fault] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head = line.split()
        if head[0] in ("checks", "observables"):
            if head[0] in header:
                raise ParseError(f"duplicate '{head[0]}' header", lineno)
            if faults:
                raise ParseError(f"'{head[0]}' header after error lines", lineno)
            if len(head) != 2 or not head[1].isdigit():
                raise ParseError(f"malformed '{head[0]}' header", lineno)
            header[head[0]] = int(head[1])
            continue
        m = _ERROR_RE.match(line)
        if m is None:
            raise ParseError(f"unrecognized line {line!r}", lineno)
        if len(header) != 2:
            raise ParseError("error line before both 'checks' and "
                             "'observables' headers", lineno)
        try:
            p = float(m.group(1))
        except ValueError:
            raise ParseError(f"bad probability {m.group(1)!r}", lineno) from None
        checks: set[int] = set()
        obs: set[int] = set()
        for tok in m.group(2).split():
            t = _TOKEN_RE.match(tok)
            if t is None:
                raise ParseError(f"bad token {tok!r}", lineno)
            target = checks if t.group(1) == "D" else obs
            k = int(t.group(2))
            if k in target:
                raise ParseError(f"duplicate token {tok!r}", lineno)
            target.add(k)
        if not checks:
            raise ParseError("error line triggers no check", lineno)
        if max(checks) >= header["checks"]:
            raise ModelError(f"line {lineno}: check index {max(checks)} out of "
                             f"range for 'checks {header['checks']}'")
        if obs and max(obs) >= header["observables"]:
            raise ModelError(f"line {lineno}: observable index {max(obs)} out "
                             f"of range for 'observables {header['observables']}'")
        try:
            faults.append(Fault(p, checks, obs))
        except ProbabilityRangeError as exc:
            raise ProbabilityRangeError(f"line {lineno}: {exc}") from None
    if len(header) != 2:
        raise ParseError("missing 'checks' or 'observables' header")
    return FaultModel(header["checks"], header["observables"], tuple(faults))


def write_model(model: FaultModel) -> str:
    lines = [f"checks {model.check_count}", f"observables {model.observable_count}"]
    for f in model.faults:
        toks = [f"D{c}" for c in sorted(f.checks)]
        toks += [f"L{o}" for o in sorted(f.observables)]
        lines.append(f"error({f.probability!r}) " + " ".join(toks))
    return "\n".join(lines) + "\n"


def load_model(path: str | Path) -> FaultModel:
    return read_model(Path(path).read_text(encoding="utf-8"))


def save_model(model: FaultModel, path: str | Path) -> None:
    Path(path).write_text(write_model(model), encoding="utf-8")
