"""Monte-Carlo estimation of logical failure rates.

Each shot draws every fault of the original model independently, computes
the true syndrome and observable flips, decodes the syndrome with a decoder
built on the split (graph-like) model, and counts a failure when the
predicted observables differ from the true ones.
"""

from __future__ import annotations

import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from statistics import NormalDist

import numpy as np

from hypersplit.decoders import get_decoder
from hypersplit.decoding_graph import DecodingGraph
from hypersplit.errors import HypersplitError, OddComponentError, ParameterError
from hypersplit.fault_model import FaultModel
from hypersplit.harness.rng import BLOCK_SHOTS, block_faults
from hypersplit.splitting import SplitReport

logger = logging.getLogger(__name__)

WORKERS_ENV = "HYPERSPLIT_WORKERS"


def wilson_interval(k: int, n: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for ``k`` successes in ``n`` trials."""
    if n <= 0:
        raise ParameterError("Wilson interval needs n >= 1")
    z = NormalDist().inv_cdf(0.5 + confidence / 2.0)
    phat = k / n
    denom = 1.0 + z * z / n
    centre = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


def default_workers() -> int:
    """Worker count from the environment; 0 means one per CPU, unset means 1."""
    raw = os.environ.get(WORKERS_ENV, "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ParameterError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None
    if n < 0:
        raise ParameterError(f"{WORKERS_ENV} must be >= 0")
    return n or (os.cpu_count() or 1)


@dataclass
class SampleStats:
    """Aggregated outcome of a sampling run.

    ``undecodable`` counts shots whose syndrome the split decoder could not
    handle (they are also failures); ``leaked`` counts shots in which some
    unsplittable fault occurred, regardless of the decoding outcome.
    """

    shots: int
    failures: int
    failures_per_observable: list[int]
    seed: int
    decoder: str
    undecodable: int = 0
    leaked: int = 0
    wall_time: float = field(default=0.0, compare=False)

    @property
    def failure_rate(self) -> float:
        return self.failures / self.shots

    @property
    def interval(self) -> tuple[float, float]:
        return wilson_interval(self.failures, self.shots)

    def to_dict(self, include_time: bool = False) -> dict:
        d = asdict(self)
        if not include_time:
            d.pop("wall_time")
        d["failure_rate"] = self.failure_rate
        lo, hi = self.interval
        d["wilson_95"] = [lo, hi]
        return d


class _ShotDecoder:
    """Per-process decoding state: graph, decoder and syndrome memo."""

    def __init__(self, model: FaultModel, split_model: FaultModel,
                 unsplittable: list[int], decoder: str):
        self.model = model
        self.graph = DecodingGraph(split_model)
        self.decode = get_decoder(decoder)
        self.probs = np.array([f.probability for f in model.faults])
        self.unsplittable = np.zeros(len(model), dtype=bool)
        self.unsplittable[list(unsplittable)] = True
        self.checks = [np.fromiter(sorted(f.checks), dtype=np.int64) for f in model.faults]
        self.obs = [sorted(f.observables) for f in model.faults]
        self.memo: dict[frozenset[int], frozenset[int] | None] = {}

    def predict(self, syndrome: frozenset[int]) -> frozenset[int] | None:
        if syndrome in self.memo:
            return self.memo[syndrome]
        try:
            out = self.decode(self.graph, syndrome).predicted_observables
        except OddComponentError:
            out = None
        self.memo[syndrome] = out
        return out

    def run_block(self, seed: int, block: int, shots: int) -> tuple[int, list[int], int, int]:
        k = self.model.observable_count
        occurred = block_faults(seed, block, self.probs, shots)
        failures, per_obs, undecodable, leaked = 0, [0] * k, 0, 0
        for row in occurred:
            ids = np.flatnonzero(row)
            if ids.size == 0:
                continue
            if self.unsplittable[ids].any():
                leaked += 1
            syn: set[int] = set()
            obs: set[int] = set()
            for i in ids:
                syn.symmetric_difference_update(self.checks[i].tolist())
                obs.symmetric_difference_update(self.obs[i])
            predicted = self.predict(frozenset(syn))
            if predicted is None:
                undecodable += 1
                failures += 1
                for o in range(k):
                    per_obs[o] += 1
                continue
            diff = predicted ^ frozenset(obs)
            if diff:
                failures += 1
                for o in diff:
                    per_obs[o] += 1
        return failures, per_obs, undecodable, leaked


_WORKER: _ShotDecoder | None = None


def _init_worker(args) -> None:
    global _WORKER
    _WORKER = _ShotDecoder(*args)


def _worker_block(task):
    seed, block, shots = task
    return _WORKER.run_block(seed, block, shots)


def _blocks(shots: int) -> list[tuple[int, int]]:
    full, rest = divmod(shots, BLOCK_SHOTS)
    out = [(b, BLOCK_SHOTS) for b in range(full)]
    if rest:
        out.append((full, rest))
    return out


def sample(model: FaultModel, report: SplitReport, decoder: str = "mwpm",
           shots: int = 1000, seed: int = 0, workers: int | None = None) -> SampleStats:
    """Estimate the logical failure rate of the split decoder on ``model``.

    Results depend only on ``(model, report, decoder, shots, seed)``; the
    worker count (argument, or the ``HYPERSPLIT_WORKERS`` environment
    variable) changes only the wall time.
    """
    if shots < 1:
        raise ParameterError("shots must be >= 1")
    if report.split_model.check_count != model.check_count:
        raise HypersplitError("split model and model disagree on the number of checks")
    get_decoder(decoder)
    workers = default_workers() if workers is None else (workers or (os.cpu_count() or 1))
    start = time.perf_counter()
    init = (model, report.split_model, report.unsplittable_ids, decoder)
    tasks = [(seed, b, n) for b, n in _blocks(shots)]
    if workers <= 1 or len(tasks) == 1:
        state = _ShotDecoder(*init)
        results = [state.run_block(*t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker,
                                 initargs=(init,)) as pool:
            results = list(pool.map(_worker_block, tasks))
    k = model.observable_count
    failures, per_obs, undecodable, leaked = 0, [0] * k, 0, 0
    for f, po, u, lk in results:
        failures += f
        undecodable += u
        leaked += lk
        for o in range(k):
            per_obs[o] += po[o]
    stats = SampleStats(shots, failures, per_obs, seed, decoder, undecodable, leaked,
                        time.perf_counter() - start)
    logger.info("sampled %d shots: %d failures", shots, failures)
    return stats
