"""Splitting hyperedge faults into graph-like faults.

Two strategies produce a graph-like model F'' from an arbitrary model F:

* decoder-based splitting (:func:`split_decoder_based`): decode the syndrome
  of every non-primitive fault with a matching or Union-Find decoder built
  on the primitive faults, and turn each path of the correction into one
  1-fault or 2-fault;
* recursive splitting (:func:`split_recursive`): repeatedly peel graph-like
  faults whose syndrome is a proper subset of a larger fault's syndrome.

:func:`split_combined` chains the two. Each returns a :class:`SplitReport`.
"""

from __future__ import annotations

import heapq
import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from hypersplit.decoders import mwpm_decode, uf_decode
from hypersplit.decoding_graph import DecodingGraph
from hypersplit.errors import (
    HypersplitError,
    OddComponentError,
    SplitFailure,
    UnsplittableFaultError,
)
from hypersplit.fault_model import (
    EMPTY,
    Fault,
    FaultModel,
    ambiguous_syndromes,
    merge_duplicates_map,
)

METHODS = ("decoder", "recursive", "combined-rd", "combined-dr")
COMBINED_ORDERS = ("recursive_then_decoder", "decoder_then_recursive")


@dataclass
class SplitReport:
    """A graph-like approximation of a model and how it was obtained.

    ``decomposition[i]`` lists the ids in ``split_model`` of the faults whose
    sum reproduces fault ``i`` of the input model. Faults that could not be
    split appear in ``unsplittable`` as ``(fault id, reason)`` pairs and have
    no decomposition entry.
    """

    split_model: FaultModel
    decomposition: dict[int, list[int]]
    unsplittable: list[tuple[int, str]]
    warnings: list[str] = field(default_factory=list)
    method: str = ""
    decoder: str | None = None

    @property
    def unsplittable_ids(self) -> list[int]:
        return [i for i, _ in self.unsplittable]

    def to_json(self, split_model_path: str | None = None) -> str:
        doc = {
            "method": self.method,
            "decoder": self.decoder,
            "split_model_path": split_model_path,
            "split_fault_count": len(self.split_model),
            "decomposition": {str(k): v for k, v in sorted(self.decomposition.items())},
            "unsplittable": [{"fault": i, "reason": r} for i, r in self.unsplittable],
            "warnings": self.warnings,
        }
        return json.dumps(doc, indent=2, sort_keys=True)

    @staticmethod
    def from_json(text: str, split_model: FaultModel) -> SplitReport:
        doc = json.loads(text)
        return SplitReport(
            split_model,
            {int(k): list(v) for k, v in doc["decomposition"].items()},
            [(d["fault"], d["reason"]) for d in doc["unsplittable"]],
            list(doc.get("warnings", [])),
            doc.get("method", ""),
            doc.get("decoder"),
        )


def one_fault_checks(faults: Iterable[Fault]) -> set[int]:
    return {next(iter(f.checks)) for f in faults if f.weight == 1}


def primitive_faults(model: FaultModel) -> list[int]:
    """Ids of the 1-faults, and of the 2-faults whose syndrome is not the sum
    of two 1-fault syndromes of the same model."""
    ones = one_fault_checks(model.faults)
    out = []
    for i, f in enumerate(model.faults):
        if f.weight == 1 or (f.weight == 2 and not f.checks <= ones):
            out.append(i)
    return out


# -- decoder-based splitting -------------------------------------------------

def _forest_paths(graph: DecodingGraph, correction: Iterable[int]) -> list[tuple[int, int, list[int]]]:
    """Partition an edge set into paths joining its odd-degree vertices."""
    adj: dict[int, list[int]] = {}
    for eid in sorted(correction):
        e = graph.edges[eid]
        adj.setdefault(e.u, []).append(eid)
        adj.setdefault(e.v, []).append(eid)
    remaining = set(correction)
    odd = sorted(v for v, es in adj.items() if len(es) % 2)
    odd_set = set(odd)
    paths = []
    for a in odd:
        if a not in odd_set:
            continue
        prev = {a: -1}
        queue = deque([a])
        end = None
        while queue and end is None:
            x = queue.popleft()
            for eid in adj[x]:
                if eid not in remaining:
                    continue
                y = graph.edges[eid].other(x)
                if y in prev:
                    continue
                prev[y] = eid
                if y in odd_set:
                    end = y
                    break
                queue.append(y)
        path = []
        x = end
        while x != a:
            eid = prev[x]
            path.append(eid)
            x = graph.edges[eid].other(x)
        path.reverse()
        remaining.difference_update(path)
        odd_set.discard(a)
        odd_set.discard(end)
        paths.append((a, end, path))
    return paths


def split_fault(fault: Fault, graph: DecodingGraph, decoder: str = "mwpm",
                warnings: list[str] | None = None) -> list[Fault]:
    """Decompose one fault along the paths of a decoder correction.

    ``graph`` is the decoding graph of the graph-like faults available as
    building blocks. Every derived fault carries the probability of
    ``fault``. If the constituents' observables do not add up to those of
    ``fault``, the difference is folded into the first derived fault and a
    message is appended to ``warnings``.

    Raises
    ------
    SplitFailure
        If a check of ``fault`` is touched by no building block, or a
        component cannot absorb the syndrome parity.
    """
    uncovered = sorted(c for c in fault.checks if not graph.adjacency[c])
    if uncovered:
        raise SplitFailure(f"uncovered checks {uncovered}")
    try:
        if decoder == "mwpm":
            result = mwpm_decode(graph, fault.checks)
            paths = [(u, v, list(p)) for u, v, p in result.paths]
        elif decoder == "uf":
            result = uf_decode(graph, fault.checks)
            paths = _forest_paths(graph, result.correction)
        else:
            raise ValueError(f"unknown decoder {decoder!r}")
    except OddComponentError as exc:
        raise SplitFailure(f"odd component {exc.component} without boundary") from None

    model = graph.model
    derived = []
    for u, v, path in paths:
        checks = frozenset(x for x in (u, v) if not graph.is_boundary(x))
        obs: frozenset[int] = EMPTY
        for eid in path:
            obs = obs ^ model.faults[eid].observables
        derived.append(Fault(fault.probability, checks, obs, fault.label))
    total_obs: frozenset[int] = EMPTY
    total_checks: frozenset[int] = EMPTY
    for d in derived:
        total_obs ^= d.observables
        total_checks ^= d.checks
    if total_checks != fault.checks:
        raise HypersplitError("internal error: split does not conserve the syndrome")
    residual = total_obs ^ fault.observables
    if residual:
        first = derived[0]
        derived[0] = Fault(first.probability, first.checks,
                           first.observables ^ residual, first.label)
        if warnings is not None:
            warnings.append(f"fault {sorted(fault.checks)}: observable residual "
                            f"{sorted(residual)} folded into derived fault "
                            f"{sorted(first.checks)}")
    return derived


class _Assembly:
    """Collects derived faults and per-fault decompositions before merging."""

    def __init__(self, model: FaultModel):
        self.model = model
        self.merged, self.merge_map = merge_duplicates_map(model)
        self.work: list[Fault] = []
        self.pieces: dict[int, list[int]] = {}
        self.failed: dict[int, str] = {}
        self.warnings: list[str] = []

    def add(self, fault: Fault) -> int:
        self.work.append(fault)
        return len(self.work) - 1

    def finish(self, method: str, decoder: str | None, strict: bool) -> SplitReport:
        out, fmap = merge_duplicates_map(self.merged.with_faults(self.work))
        decomposition = {}
        unsplittable = []
        for orig, j in enumerate(self.merge_map):
            if j in self.pieces:
                decomposition[orig] = [fmap[k] for k in self.pieces[j]]
            else:
                unsplittable.append((orig, self.failed.get(j, "not split")))
        warnings = list(self.warnings)
        for s, ids in ambiguous_syndromes(out).items():
            warnings.append(f"split faults {ids} share syndrome {sorted(s)} "
                            "with different observables")
        report = SplitReport(out, decomposition, unsplittable, warnings, method, decoder)
        if strict and unsplittable:
            raise UnsplittableFaultError(report.unsplittable_ids)
        return report


def _decoder_pass(asm: _Assembly, graph: DecodingGraph, todo: Sequence[int],
                  decoder: str) -> None:
    for j in todo:
        f = asm.merged.faults[j]
        try:
            derived = split_fault(f, graph, decoder, asm.warnings)
        except SplitFailure as exc:
            asm.failed[j] = exc.reason
            continue
        asm.pieces[j] = [asm.add(d) for d in derived]


def split_decoder_based(model: FaultModel, decoder: str = "mwpm",
                        strict: bool = False) -> SplitReport:
    """Primitive faults plus the decoder-derived pieces of all others.

    Duplicates are merged before the primitive set is computed and again
    once every fault has been processed.
    """
    asm = _Assembly(model)
    prim = primitive_faults(asm.merged)
    for j in prim:
        asm.pieces[j] = [asm.add(asm.merged.faults[j])]
    graph = DecodingGraph(asm.merged.with_faults(asm.work))
    prim_set = set(prim)
    todo = [j for j in range(len(asm.merged)) if j not in prim_set]
    if not prim:
        for j in todo:
            asm.failed[j] = "empty primitive set"
    else:
        _decoder_pass(asm, graph, todo, decoder)
    return asm.finish("decoder", decoder, strict)


# -- recursive splitting -----------------------------------------------------

@dataclass
class _Item:
    seq: int
    checks: frozenset[int]
    observables: frozenset[int]
    probability: float
    chain: list[int]


class _Target:
    """The growing graph-like model F'' with a check -> fault index."""

    def __init__(self, asm: _Assembly, indexed: bool):
        self.asm = asm
        self.indexed = indexed
        self.ids: list[int] = []
        self.ones: set[int] = set()
        self.by_check: dict[int, list[int]] = {}

    def add(self, fault: Fault) -> int:
        k = self.asm.add(fault)
        self.ids.append(k)
        if fault.weight == 1:
            self.ones |= fault.checks
        for c in fault.checks:
            self.by_check.setdefault(c, []).append(k)
        return k

    def proper_subset(self, checks: frozenset[int]) -> int | None:
        """Lowest (weight, id) fault whose syndrome is a proper subset."""
        work = self.asm.work
        if self.indexed:
            cands = {k for c in checks for k in self.by_check.get(c, ())}
        else:
            cands = self.ids
        best = None
        for k in cands:
            g = work[k].checks
            if len(g) < len(checks) and g <= checks:
                key = (len(g), k)
                if best is None or key < best:
                    best = key
        return None if best is None else best[1]


def _step(item: _Item, target: _Target) -> str:
    """Apply one visit of the inner loop; returns 'moved', 'reduced' or 'stuck'."""
    w = len(item.checks)
    if w == 1 or (w == 2 and not item.checks <= target.ones):
        item.chain.append(target.add(Fault(item.probability, item.checks, item.observables)))
        return "moved"
    k = target.proper_subset(item.checks)
    if k is None:
        return "stuck"
    g = target.asm.work[k]
    item.checks = item.checks - g.checks
    item.observables = item.observables ^ g.observables
    item.chain.append(k)
    return "reduced"


def _recursive_nested(items: list[_Item], target: _Target) -> tuple[list[_Item], int]:
    passes = 0
    changed = True
    while items and changed:
        changed = False
        passes += 1
        top = max(len(it.checks) for it in items)
        for w in range(1, top + 1):
            for it in [x for x in items if len(x.checks) == w]:
                outcome = _step(it, target)
                if outcome != "stuck":
                    changed = True
                if outcome == "moved":
                    items.remove(it)
    return items, passes


def _recursive_heap(items: list[_Item], target: _Target) -> tuple[list[_Item], int]:
    # A heap keyed by (pass, weight, seq) replays the nested sweep order:
    # a fault reduced during a pass is revisited in the next one.
    heap = [(1, len(it.checks), it.seq, it) for it in items]
    heapq.heapify(heap)
    current, changed, passes = 0, False, 0
    while heap:
        p, _, seq, it = heap[0]
        if p != current:
            if current and not changed:
                break
            current, changed, passes = p, False, p
        heapq.heappop(heap)
        outcome = _step(it, target)
        if outcome != "stuck":
            changed = True
        if outcome != "moved":
            heapq.heappush(heap, (p + 1, len(it.checks), seq, it))
    return sorted((it for _, _, _, it in heap), key=lambda it: it.seq), passes


def _run_recursive(asm: _Assembly, todo: Sequence[int], seed: Sequence[int],
                   variant: str) -> int:
    target = _Target(asm, indexed=variant == "heap")
    for k in seed:
        target.ids.append(k)
        f = asm.work[k]
        if f.weight == 1:
            target.ones |= f.checks
        for c in f.checks:
            target.by_check.setdefault(c, []).append(k)
    items = []
    for j in todo:
        f = asm.merged.faults[j]
        items.append(_Item(j, f.checks, f.observables, f.probability, []))
    budget = sum(len(it.checks) for it in items)
    run = _recursive_heap if variant == "heap" else _recursive_nested
    left, passes = run(list(items), target)
    if passes > max(budget, 1):
        raise HypersplitError(f"internal error: recursive splitting ran {passes} passes")
    stuck = {it.seq for it in left}
    for it in items:
        if it.seq in stuck:
            asm.failed[it.seq] = "no graph-like fault with a proper-subset syndrome"
        else:
            asm.pieces[it.seq] = it.chain
    return passes


def split_recursive(model: FaultModel, strict: bool = False,
                    variant: str = "heap") -> SplitReport:
    """Recursive splitting without a decoder.

    ``variant`` selects the heap-driven sweep backed by a check -> fault
    index (``"heap"``) or the plain nested-loop sweep (``"nested"``); both
    visit faults in the same order and give the same result.
    """
    if variant not in ("heap", "nested"):
        raise ValueError(f"unknown variant {variant!r}")
    asm = _Assembly(model)
    _run_recursive(asm, range(len(asm.merged)), (), variant)
    return asm.finish("recursive", None, strict)


def split_combined(model: FaultModel, order: str = "recursive_then_decoder",
                   decoder: str = "mwpm", strict: bool = False) -> SplitReport:
    """Run one splitting method, then hand its leftovers to the other.

    The second method works on top of every graph-like fault produced by
    the first: the decoder is built on all of them, or recursive splitting
    starts with all of them already in F''.
    """
    if order not in COMBINED_ORDERS:
        raise ValueError(f"order must be one of {COMBINED_ORDERS}")
    asm = _Assembly(model)
    everything = range(len(asm.merged))
    if order == "recursive_then_decoder":
        _run_recursive(asm, everything, (), "heap")
        left = sorted(asm.failed)
        if left:
            for j in left:
                del asm.failed[j]
            graph = DecodingGraph(asm.merged.with_faults(asm.work))
            _decoder_pass(asm, graph, left, decoder)
        method = "combined-rd"
    else:
        prim = primitive_faults(asm.merged)
        for j in prim:
            asm.pieces[j] = [asm.add(asm.merged.faults[j])]
        prim_set = set(prim)
        rest = [j for j in everything if j not in prim_set]
        if prim:
            graph = DecodingGraph(asm.merged.with_faults(asm.work))
            _decoder_pass(asm, graph, rest, decoder)
        else:
            for j in rest:
                asm.failed[j] = "empty primitive set"
        left = sorted(asm.failed)
        for j in left:
            del asm.failed[j]
        _run_recursive(asm, left, range(len(asm.work)), "heap")
        method = "combined-dr"
    return asm.finish(method, decoder, strict)


def split(model: FaultModel, method: str, decoder: str = "mwpm",
          strict: bool = False) -> SplitReport:
    """Dispatch on the CLI method names in :data:`METHODS`."""
    if method == "decoder":
        return split_decoder_based(model, decoder, strict)
    if method == "recursive":
        return split_recursive(model, strict)
    if method == "combined-rd":
        return split_combined(model, "recursive_then_decoder", decoder, strict)
    if method == "combined-dr":
        return split_combined(model, "decoder_then_recursive", decoder, strict)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


def verify_report(model: FaultModel, report: SplitReport) -> list[int]:
    """Ids of faults whose decomposition does not reproduce their syndrome
    and observables; empty when the report is consistent."""
    bad = []
    sm = report.split_model
    for i, ids in report.decomposition.items():
        s: frozenset[int] = EMPTY
        o: frozenset[int] = EMPTY
        for k in ids:
            s ^= sm.faults[k].checks
            o ^= sm.faults[k].observables
        f = model.faults[i]
        if s != f.checks or o != f.observables:
            bad.append(i)
    return bad
