import math

import numpy as np
import pytest

from conftest import two_path_fixture, uncovered_fixture
from oracles import brute_distance

from hypersplit.errors import ParameterError, SearchBoundError
from hypersplit.fault_model import Fault, FaultModel
from hypersplit.generators import (
    gen_expander_petersen,
    gen_repetition,
    gen_surface_perfect,
    gen_surface_phenom,
    gen_three_check,
)
from hypersplit.harness.distance import (
    DistanceReport,
    effective_distance,
    model_distance,
    model_distance_brute,
    verify_effective_witness,
    verify_model_witness,
)
from hypersplit.harness.rng import BLOCK_SHOTS, block_faults, block_uniforms, shot_uniforms
from hypersplit.harness.sampling import (
    WORKERS_ENV,
    SampleStats,
    default_workers,
    sample,
    wilson_interval,
)
from hypersplit.splitting import split_combined, split_decoder_based

Z95 = 1.959963984540054


class TestRng:
    def test_prefix_property(self):
        full = block_uniforms(3, 2, 7)
        assert np.array_equal(block_uniforms(3, 2, 7, 10), full[:10])

    def test_shot_row(self):
        full = block_uniforms(5, 1, 4)
        assert np.array_equal(shot_uniforms(5, BLOCK_SHOTS + 17, 4), full[17])

    def test_blocks_and_seeds_differ(self):
        a = block_uniforms(0, 0, 5)
        assert not np.array_equal(a, block_uniforms(0, 1, 5))
        assert not np.array_equal(a, block_uniforms(1, 0, 5))

    def test_range_and_shape(self):
        u = block_uniforms(9, 0, 3)
        assert u.shape == (BLOCK_SHOTS, 3) and (u >= 0).all() and (u < 1).all()

    def test_block_limit(self):
        with pytest.raises(ValueError):
            block_uniforms(0, 0, 2, BLOCK_SHOTS + 1)

    def test_fault_frequency(self):
        occ = block_faults(11, 0, np.array([0.5, 0.1]))
        assert abs(occ[:, 0].mean() - 0.5) < 0.06 and abs(occ[:, 1].mean() - 0.1) < 0.04


class TestWilson:
    @staticmethod
    def textbook(k, n):
        p = k / n
        c = (p + Z95 ** 2 / (2 * n)) / (1 + Z95 ** 2 / n)
        h = Z95 * math.sqrt(p * (1 - p) / n + Z95 ** 2 / (4 * n * n)) / (1 + Z95 ** 2 / n)
        return c - h, c + h

    @pytest.mark.parametrize("k, n", [(0, 10), (5, 10), (10, 10), (139, 100000), (1, 3)])
    def test_against_formula(self, k, n):
        lo, hi = wilson_interval(k, n)
        rlo, rhi = self.textbook(k, n)
        assert lo == pytest.approx(max(rlo, 0.0), abs=1e-12)
        assert hi == pytest.approx(min(rhi, 1.0), abs=1e-12)

    def test_zero_failures_upper(self):
        assert wilson_interval(0, 10)[1] == pytest.approx(Z95 ** 2 / (10 + Z95 ** 2), rel=1e-12)

    def test_rejects_empty(self):
        with pytest.raises(ParameterError):
            wilson_interval(0, 0)


class TestWorkersEnv:
    def test_unset(self, monkeypatch):
        monkeypatch.delenv(WORKERS_ENV, raising=False)
        assert default_workers() == 1

    def test_values(self, monkeypatch):
        monkeypatch.setenv(WORKERS_ENV, "3")
        assert default_workers() == 3
        monkeypatch.setenv(WORKERS_ENV, "0")
        assert default_workers() >= 1

    @pytest.mark.parametrize("raw", ["x", "-2"])
    def test_invalid(self, monkeypatch, raw):
        monkeypatch.setenv(WORKERS_ENV, raw)
        with pytest.raises(ParameterError):
            default_workers()


def _majority_reference(n, p, shots, seed):
    """Failures of majority vote on the n-bit repetition code, drawn from the
    same counter-based stream as the sampler."""
    model = gen_repetition(n, p)
    probs = np.array([f.probability for f in model.faults])
    failures = 0
    for b in range(math.ceil(shots / BLOCK_SHOTS)):
        k = min(BLOCK_SHOTS, shots - b * BLOCK_SHOTS)
        occ = block_uniforms(seed, b, len(probs), k) < probs[None, :]
        failures += int((occ.sum(axis=1) > n // 2).sum())
    return failures


class TestSample:
    @pytest.mark.parametrize("n", [5, 7])
    def test_repetition_counts_exact(self, n):
        # (n = 3 is excluded: its bit 1 is non-primitive and is replaced by
        # the two end bits, whose observables differ from it)
        m = gen_repetition(n, 0.1)
        stats = sample(m, split_decoder_based(m), shots=5000, seed=4, workers=1)
        assert stats.failures == _majority_reference(n, 0.1, 5000, 4)
        assert stats.failures_per_observable == [stats.failures]
        assert stats.undecodable == 0 and stats.leaked == 0

    def test_worker_count_irrelevant(self):
        m = gen_surface_perfect(3, 0.02, 0.01, 0.02)
        rep = split_decoder_based(m)
        a = sample(m, rep, shots=6000, seed=9, workers=1)
        b = sample(m, rep, shots=6000, seed=9, workers=8)
        assert a == b and a.to_dict() == b.to_dict()

    def test_seed_changes_result(self):
        m = gen_repetition(5, 0.2)
        rep = split_decoder_based(m)
        assert sample(m, rep, shots=3000, seed=0) != sample(m, rep, shots=3000, seed=1)

    def test_vanishing_noise(self):
        m = gen_surface_perfect(3, 1e-9, 1e-9, 1e-9)
        stats = sample(m, split_decoder_based(m), shots=20000, seed=0)
        assert stats.failures <= 1

    def test_monotone_in_p(self):
        rates = []
        for p in (0.01, 0.03, 0.08):
            m = gen_surface_phenom(3, 3, p, p)
            rates.append(sample(m, split_decoder_based(m), shots=4000, seed=2).failures)
        assert rates[0] < rates[1] < rates[2]

    def test_uf_decoder(self):
        m = gen_repetition(5, 0.1)
        stats = sample(m, split_decoder_based(m, "uf"), decoder="uf", shots=2000, seed=3)
        assert stats.decoder == "uf" and stats.failures == _majority_reference(5, 0.1, 2000, 3)

    def test_leaks_counted(self):
        m = uncovered_fixture()
        rep = split_decoder_based(m)
        stats = sample(m, rep, shots=3000, seed=1)
        assert stats.leaked > 0 and stats.undecodable > 0

    def test_unsplittable_only_model(self):
        m = gen_three_check(3, 0.3)
        stats = sample(m, split_decoder_based(m), shots=500, seed=0)
        assert stats.undecodable == stats.failures > 0

    def test_to_dict(self):
        m = gen_repetition(3, 0.1)
        d = sample(m, split_decoder_based(m), shots=100, seed=0).to_dict()
        assert "wall_time" not in d and d["shots"] == 100
        assert d["wilson_95"][0] <= d["failure_rate"] <= d["wilson_95"][1]

    def test_parameter_checks(self):
        m = gen_repetition(3, 0.1)
        rep = split_decoder_based(m)
        with pytest.raises(ParameterError):
            sample(m, rep, shots=0)
        with pytest.raises(ValueError):
            sample(m, rep, decoder="bp", shots=10)

    def test_stats_interval(self):
        s = SampleStats(100, 5, [5], 0, "mwpm")
        assert s.failure_rate == 0.05 and s.interval == wilson_interval(5, 100)


class TestModelDistance:
    @pytest.mark.parametrize("model, d", [
        (gen_repetition(5, 0.1), 5),
        (gen_repetition(4, 0.1), None),  # total parity is not a logical for even n
        (gen_surface_perfect(3, 0.01, 0.01, 0.01), 3),
        (gen_three_check(3), None),
        (gen_expander_petersen(0.1), None),
        (gen_repetition(2, 0.1), None),
        (two_path_fixture(), None),
        (uncovered_fixture(), None),
        (FaultModel(2, 1, (Fault(0.1, {0}, {0}), Fault(0.1, {0}), Fault(0.1, {1}))), 2),
    ])
    def test_against_brute_force(self, model, d):
        assert brute_distance(model, 5) == d
        rep = model_distance(model, 5)
        assert rep.model_distance == d == model_distance_brute(model, 5)
        if d is not None:
            assert len(rep.model_witness) == d
            assert verify_model_witness(model, rep.model_witness)

    def test_bound(self):
        assert model_distance(gen_repetition(7, 0.1), 5).model_distance is None

    def test_guard(self):
        with pytest.raises(SearchBoundError):
            model_distance(gen_surface_perfect(5, 0.01, 0.01, 0.01), 8, guard=1000)
        with pytest.raises(SearchBoundError):
            model_distance_brute(gen_surface_perfect(5, 0.01, 0.01, 0.01), 4, guard=1000)

    def test_witness_is_rejected_when_wrong(self):
        m = gen_repetition(3, 0.1)
        assert not verify_model_witness(m, (0,))
        assert not verify_model_witness(m, (0, 1))


class TestEffectiveDistance:
    def test_repetition(self):
        m = gen_repetition(5, 0.1)
        rep = effective_distance(m, split_decoder_based(m), max_weight=4,
                                 distance=model_distance(m, 5))
        assert rep.effective_distance == 3
        assert rep.achieves_full_distance is True
        assert verify_effective_witness(m, split_decoder_based(m), "mwpm", rep.effective_witness)

    def test_no_failure_within_bound(self):
        m = gen_repetition(5, 0.1)
        rep = effective_distance(m, split_decoder_based(m), max_weight=2,
                                 distance=model_distance(m, 5))
        assert rep.effective_distance is None and rep.achieves_full_distance is True
        short = effective_distance(m, split_decoder_based(m), max_weight=1,
                                   distance=model_distance(m, 5))
        assert short.achieves_full_distance is None

    def test_three_check(self):
        m = gen_three_check(3)
        rep = effective_distance(m, split_decoder_based(m), max_weight=2,
                                 distance=DistanceReport(max_weight=3, model_distance=3))
        assert rep.effective_distance == 1 and rep.effective_witness == (0,)
        assert rep.achieves_full_distance is False

    def test_uf_repetition(self):
        m = gen_repetition(5, 0.1)
        rep = effective_distance(m, split_decoder_based(m, "uf"), "uf", max_weight=3)
        assert rep.effective_distance == 3

    def test_combined_on_fixture(self):
        # the 4-fault alone decodes as the two path pieces, which is exact
        m = two_path_fixture()
        rep = effective_distance(m, split_combined(m), max_weight=1)
        assert rep.effective_distance is None

    def test_guard(self):
        m = gen_surface_perfect(5, 0.01, 0.01, 0.01)
        with pytest.raises(SearchBoundError):
            effective_distance(m, split_decoder_based(m), max_weight=4, guard=100)

    def test_to_dict_keys(self):
        m = gen_repetition(5, 0.1)
        d = effective_distance(m, split_decoder_based(m), max_weight=3,
                               distance=model_distance(m, 5)).to_dict()
        assert d["model_distance"] == 5 and d["effective_distance"] == 3
        assert d["achieves_full_distance"] is True
        assert d["effective_witness"] == [0, 1, 2]
        assert d["model_distance_status"] == "found"

    def test_full_distance_verdict_table(self):
        assert DistanceReport(2, model_distance=5, effective_distance=3).achieves_full_distance
        assert not DistanceReport(2, model_distance=5, effective_distance=2).achieves_full_distance
        assert DistanceReport(2, model_distance=4, effective_distance=2).achieves_full_distance
        assert DistanceReport(2).achieves_full_distance is None


def test_undecodable_witness_verified():
    m = FaultModel(2, 1, (Fault(0.1, {0, 1}, {0}),))
    from hypersplit.splitting import SplitReport
    empty = SplitReport(FaultModel(2, 1, ()), {}, [(0, "x")])
    assert verify_effective_witness(m, empty, "mwpm", (0,))
