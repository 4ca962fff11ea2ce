"""Exhaustive model distance and decoder effective distance.

The model distance is the smallest number of faults whose combined syndrome
is empty while some observable flips. The effective distance of a decoder is
the smallest number of faults on which it predicts the wrong observables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

from hypersplit.decoders import get_decoder
from hypersplit.decoding_graph import DecodingGraph
from hypersplit.errors import OddComponentError, SearchBoundError
from hypersplit.fault_model import FaultModel, observables_of, syndrome_of
from hypersplit.splitting import SplitReport

CONFIG_GUARD = 10**8


def _guard(count: int, guard: int, what: str) -> None:
    if count > guard:
        raise SearchBoundError(f"{what} would enumerate {count} fault subsets "
                               f"(guard {guard})")


@dataclass
class DistanceReport:
    """Model and effective distance results.

    A ``None`` distance means no witness exists up to the corresponding
    search bound.
    """

    max_weight: int
    model_distance: int | None = None
    model_witness: tuple[int, ...] | None = None
    distance_max_weight: int | None = None
    effective_distance: int | None = None
    effective_witness: tuple[int, ...] | None = None
    decoder: str | None = None

    @property
    def achieves_full_distance(self) -> bool | None:
        """Whether the decoder corrects every configuration of weight below
        ``ceil(d / 2)``; None when either distance is unknown."""
        if self.model_distance is None:
            return None
        if self.effective_distance is None:
            # no failure found up to the bound
            return True if self.max_weight >= math.ceil(self.model_distance / 2) - 1 else None
        return self.effective_distance >= math.ceil(self.model_distance / 2)

    def to_dict(self) -> dict:
        def wit(w):
            return None if w is None else list(w)
        return {
            "model_distance": self.model_distance,
            "model_distance_status": "found" if self.model_distance is not None
            else "exceeds search bound",
            "model_witness": wit(self.model_witness),
            "distance_max_weight": self.distance_max_weight,
            "effective_distance": self.effective_distance,
            "effective_distance_status": "found" if self.effective_distance is not None
            else "exceeds search bound",
            "effective_witness": wit(self.effective_witness),
            "max_weight": self.max_weight,
            "decoder": self.decoder,
            "achieves_full_distance": self.achieves_full_distance,
        }


def _subset_tables(model: FaultModel, size: int):
    """Map syndrome -> {observables: first subset} for subsets of ``size``."""
    table: dict[frozenset[int], dict[frozenset[int], tuple[int, ...]]] = {}
    faults = model.faults
    for combo in combinations(range(len(faults)), size):
        s: frozenset[int] = frozenset()
        o: frozenset[int] = frozenset()
        for i in combo:
            s ^= faults[i].checks
            o ^= faults[i].observables
        table.setdefault(s, {}).setdefault(o, combo)
    return table


def model_distance(model: FaultModel, max_weight: int,
                   guard: int = CONFIG_GUARD) -> DistanceReport:
    """Minimum-weight logical fault configuration by meet-in-the-middle.

    A configuration of weight ``w`` is split into halves of sizes
    ``ceil(w/2)`` and ``floor(w/2)`` with equal syndromes and different
    observables. Weights are tried in increasing order, so the first
    collision found is minimal (an overlapping pair would reveal a lighter
    witness at an earlier weight). Only subsets of size up to
    ``ceil(max_weight / 2)`` are enumerated; their count is checked against
    ``guard``.
    """
    m = len(model)
    half = (max_weight + 1) // 2
    _guard(sum(math.comb(m, k) for k in range(half + 1)), guard, "model distance")
    tables = {0: {frozenset(): {frozenset(): ()}}}
    report = DistanceReport(max_weight=max_weight, distance_max_weight=max_weight)
    for w in range(1, max_weight + 1):
        a, b = (w + 1) // 2, w // 2
        for k in (a, b):
            if k not in tables:
                tables[k] = _subset_tables(model, k)
        ta, tb = tables[a], tables[b]
        best = None
        for s, obs_a in ta.items():
            obs_b = tb.get(s)
            if obs_b is None:
                continue
            for oa, ca in obs_a.items():
                for ob, cb in obs_b.items():
                    if oa != ob:
                        wit = tuple(sorted(set(ca) ^ set(cb)))
                        if best is None or wit < best:
                            best = wit
        if best is not None:
            report.model_distance = len(best)
            report.model_witness = best
            return report
    return report


def model_distance_brute(model: FaultModel, max_weight: int,
                         guard: int = CONFIG_GUARD) -> int | None:
    """Plain enumeration of all subsets by weight (reference for tests)."""
    m = len(model)
    _guard(sum(math.comb(m, k) for k in range(1, max_weight + 1)), guard, "model distance")
    for w in range(1, max_weight + 1):
        for combo in combinations(range(m), w):
            if not syndrome_of(model, combo) and observables_of(model, combo):
                return w
    return None


def configurations(m: int, max_weight: int) -> Iterator[tuple[int, ...]]:
    """All fault subsets by increasing weight, lexicographic within a weight."""
    for w in range(1, max_weight + 1):
        yield from combinations(range(m), w)


def effective_distance(model: FaultModel, report: SplitReport, decoder: str = "mwpm",
                       max_weight: int = 2, guard: int = CONFIG_GUARD,
                       distance: DistanceReport | None = None) -> DistanceReport:
    """Smallest configuration of ``model`` the split decoder gets wrong.

    Configurations are decoded in weight order and the search stops at the
    first failure; decodes are memoized by syndrome. A syndrome the split
    decoding graph cannot absorb counts as a failure. ``distance`` supplies
    an already computed model distance to the returned report.
    """
    m = len(model)
    _guard(sum(math.comb(m, k) for k in range(1, max_weight + 1)), guard,
           "effective distance")
    graph = DecodingGraph(report.split_model)
    decode = get_decoder(decoder)
    memo: dict[frozenset[int], frozenset[int] | None] = {}
    out = DistanceReport(max_weight=max_weight, decoder=decoder)
    if distance is not None:
        out.model_distance = distance.model_distance
        out.model_witness = distance.model_witness
        out.distance_max_weight = distance.distance_max_weight
    faults = model.faults
    for combo in configurations(m, max_weight):
        s: frozenset[int] = frozenset()
        o: frozenset[int] = frozenset()
        for i in combo:
            s ^= faults[i].checks
            o ^= faults[i].observables
        if s not in memo:
            try:
                memo[s] = decode(graph, s).predicted_observables
            except OddComponentError:
                memo[s] = None
        if memo[s] != o:
            out.effective_distance = len(combo)
            out.effective_witness = combo
            return out
    return out


def verify_model_witness(model: FaultModel, witness) -> bool:
    return not syndrome_of(model, witness) and bool(observables_of(model, witness))


def verify_effective_witness(model: FaultModel, report: SplitReport, decoder: str,
                             witness) -> bool:
    graph = DecodingGraph(report.split_model)
    s = syndrome_of(model, witness)
    try:
        predicted = get_decoder(decoder)(graph, s).predicted_observables
    except OddComponentError:
        return True
    return predicted != observables_of(model, witness)
