import itertools

import numpy as np
import pytest
from scipy import stats
from scipy.stats import unitary_group

from gbskit import gaussian
from gbskit.errors import CostGuardError, ValidationError
from gbskit.generators import random_complex_symmetric
from gbskit.matfn import hafnian
from gbskit.sampler import (
    SamplePool,
    _ChainRuleSampler,
    load_pool,
    postselect,
    sample,
    save_pool,
)

from oracles import all_patterns


def random_state(m, seed, r_max=0.8):
    rng = np.random.default_rng(seed)
    r = rng.uniform(0.2, r_max, m)
    u = unitary_group.rvs(m, random_state=rng)
    return gaussian.state_from_device(r, u)


class TestSample:
    def test_vacuum_all_zero(self):
        state = gaussian.GaussianState(modes=3, husimi=np.eye(6, dtype=complex))
        pool = sample(state, 50, seed=1)
        assert all(p == (0, 0, 0) for p in pool.samples)

    def test_seed_determinism(self):
        state = random_state(4, 7)
        assert sample(state, 200, seed=3).samples == sample(state, 200, seed=3).samples

    def test_different_seeds_differ(self):
        state = random_state(4, 7)
        assert sample(state, 200, seed=3).samples != sample(state, 200, seed=4).samples

    def test_chain_rule_matches_pattern_probability(self):
        # marginal of a full-length prefix is the exact pattern probability
        state = random_state(5, 12)
        chain = _ChainRuleSampler(state)
        for bits in itertools.product([0, 1], repeat=5):
            assert chain.prefix_probability(bits) == pytest.approx(
                gaussian.pattern_probability(state, bits), abs=1e-8
            )

    def test_empirical_distribution_m3(self):
        state = random_state(3, 5)
        pool = sample(state, 20000, seed=9)
        counts = {p: 0 for p in all_patterns(3)}
        for p in pool.samples:
            counts[p] += 1
        tvd = 0.5 * sum(
            abs(counts[p] / 20000 - gaussian.pattern_probability(state, p))
            for p in all_patterns(3)
        )
        assert tvd < 0.03

    def test_proportional_to_hafnian_squared(self):
        # click patterns of even size are ranked consistently with |Haf(A_S)|^2
        a = random_complex_symmetric(4, seed=31, spectral_norm=0.7)
        state = gaussian.pure_state_from_a(a)
        probs, hafs = [], []
        for bits in all_patterns(4):
            k = sum(bits)
            if k == 0 or k % 2:
                continue
            sub = [i for i, b in enumerate(bits) if b]
            probs.append(gaussian.pattern_probability(state, bits))
            hafs.append(abs(hafnian(a[np.ix_(sub, sub)])) ** 2)
        rho, _ = stats.spearmanr(probs, hafs)
        assert rho > 0

    def test_mode_cost_guard(self):
        state = gaussian.GaussianState(modes=25, husimi=np.eye(50, dtype=complex))
        with pytest.raises(CostGuardError):
            sample(state, 1, seed=0)

    def test_click_cost_guard(self):
        state = gaussian.state_from_device([2.5] * 20, np.eye(20))
        with pytest.raises(CostGuardError):
            sample(state, 1, seed=0)

    def test_rejects_negative_count(self):
        state = random_state(2, 0)
        with pytest.raises(ValidationError):
            sample(state, -1, seed=0)


class TestPostselect:
    def test_popcount_filter(self):
        state = random_state(4, 2)
        pool = sample(state, 500, seed=5)
        kept = postselect(pool, 2)
        assert all(sum(p) == 2 for p in kept.samples)
        assert len(kept) == sum(1 for p in pool.samples if sum(p) == 2)

    def test_order_preserved(self):
        pool = SamplePool(modes=2, samples=((1, 0), (0, 1), (1, 0)))
        kept = postselect(pool, 1)
        assert kept.samples == ((1, 0), (0, 1), (1, 0))

    def test_k_zero_on_vacuum_pool(self):
        pool = SamplePool(modes=3, samples=((0, 0, 0),) * 4)
        assert len(postselect(pool, 0)) == 4

    def test_rejects_out_of_range(self):
        pool = SamplePool(modes=3, samples=())
        with pytest.raises(ValidationError):
            postselect(pool, 4)


class TestPoolIO:
    def test_roundtrip(self, tmp_path):
        state = random_state(4, 8)
        pool = sample(state, 300, seed=17)
        path = tmp_path / "pool.txt"
        save_pool(pool, path)
        loaded = load_pool(path)
        assert loaded.samples == pool.samples
        assert loaded.modes == pool.modes
        assert loaded.seed == pool.seed
        assert loaded.provenance == pool.provenance

    def test_save_is_byte_stable(self, tmp_path):
        pool = SamplePool(modes=2, samples=((0, 1), (1, 1)), seed=3)
        p1, p2 = tmp_path / "a.txt", tmp_path / "b.txt"
        save_pool(pool, p1)
        save_pool(pool, p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_header_only_gives_empty_pool(self, tmp_path):
        path = tmp_path / "empty.txt"
        path.write_text("modes=4\n")
        assert len(load_pool(path)) == 0

    def test_single_pattern(self, tmp_path):
        path = tmp_path / "one.txt"
        path.write_text("modes=4\n0101\n")
        pool = load_pool(path)
        assert pool.samples == ((0, 1, 0, 1),)

    def test_comments_ignored(self, tmp_path):
        path = tmp_path / "c.txt"
        path.write_text("# a comment\nmodes=2\n# another\n10\n")
        assert load_pool(path).samples == ((1, 0),)

    def test_missing_header_rejected(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("0101\n")
        with pytest.raises(ValidationError, match="modes"):
            load_pool(path)

    def test_bad_line_reports_line_number(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("modes=4\n0101\n012\n")
        with pytest.raises(ValidationError, match=":3:"):
            load_pool(path)

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "none.txt"
        path.write_text("")
        with pytest.raises(ValidationError):
            load_pool(path)


class TestSamplePool:
    def test_rejects_wrong_length_pattern(self):
        with pytest.raises(ValidationError):
            SamplePool(modes=3, samples=((0, 1),))

    def test_click_counts(self):
        pool = SamplePool(modes=3, samples=((1, 1, 0), (0, 0, 0)))
        assert pool.click_counts().tolist() == [2, 0]
