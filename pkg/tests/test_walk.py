import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semiwalk import _kernels
from semiwalk.rewriting import RewriteSystem
from semiwalk.seeding import mix64
from semiwalk.sequences import (InvalidParameter, SequenceCapExceeded,
                                make_explicit_sequence, parse_sequence)
from semiwalk.walk import (BlockCurve, SpeedCurve, WalkConfig, class_table,
                           estimate_block_stats, estimate_exponent,
                           estimate_speed, peak_points, simulate_walk,
                           walk_block_stats, walk_letters)

SEQ_SPECS = ("identity", "beta:0.5", "explicit:1,3,4,9:frozen")


# -- seeding -----------------------------------------------------------------

def test_mix64_known_values():
    # splitmix64 reference outputs for state 0: the stream mix64(0, i)
    assert mix64(0, 0) == 0xE220A8397B1DCDAF
    assert mix64(0, 1) == 0x6E789E6AA1B965F4
    assert mix64(0, 2) == 0x06C45D188009454F


def test_mix64_matches_kernel_twin(warm):
    for seed in (0, 1, 42, 2**63 - 1, 2**64 - 1):
        for index in (0, 1, 7, 10**6):
            assert mix64(seed, index) == \
                int(_kernels.mix64_u64(np.uint64(seed), np.uint64(index)))


@given(st.integers(0, 2**64 - 1), st.integers(0, 2**32))
@settings(max_examples=50, deadline=None)
def test_mix64_matches_kernel_twin_property(seed, index):
    assert mix64(seed, index) == \
        int(_kernels.mix64_u64(np.uint64(seed), np.uint64(index)))


def test_walk_letters():
    a = walk_letters(100, 9)
    b = walk_letters(100, 9)
    assert np.array_equal(a, b)
    assert a.dtype == np.uint8
    assert set(np.unique(a)) <= {0, 1}
    assert walk_letters(100, 10).tolist() != a.tolist()


# -- class table ---------------------------------------------------------------

@pytest.mark.parametrize("spec", SEQ_SPECS)
def test_class_table_matches_class_of(spec):
    seq = parse_sequence(spec)
    table = class_table(seq, 300)
    assert table.shape == (301,)
    for j in range(1, 301):
        assert table[j] == seq.class_of(j)


def test_class_table_respects_stop_tail():
    seq = make_explicit_sequence((1, 3, 4, 9))
    assert class_table(seq, 8)[8] == 3
    with pytest.raises(SequenceCapExceeded):
        class_table(make_explicit_sequence((1, 3, 4, 9)), 9)


def test_class_table_rejects_bad_range():
    with pytest.raises(InvalidParameter):
        class_table(parse_sequence("identity"), 0)


# -- single walks ----------------------------------------------------------------

@pytest.mark.parametrize("spec", SEQ_SPECS)
@pytest.mark.parametrize("variant", ["strict", "weak"])
def test_kernel_walk_matches_pure_fold(spec, variant, warm):
    seq = parse_sequence(spec)
    for seed in range(3):
        kernel = simulate_walk(seq, variant, 1500, seed)
        fold, words = simulate_walk(seq, variant, 1500, seed, return_words=True)
        assert np.array_equal(kernel, fold)
        assert words[0].length() == 0
        assert words[-1].length() == kernel[-1]


def test_y_steps_always_lengthen(warm):
    seq = parse_sequence("beta:0.5")
    for seed in range(5):
        letters = walk_letters(800, seed)
        lengths = simulate_walk(seq, "strict", 800, seed)
        deltas = np.diff(lengths)
        assert np.all(deltas[letters == 1] == 1)
        # x steps: idempotent (0), fresh x (+1), or block absorbed (<= -1)
        xd = deltas[letters == 0]
        assert np.all((xd == 0) | (xd == 1) | (xd <= -1))


def test_simulate_walk_validation():
    seq = parse_sequence("identity")
    with pytest.raises(InvalidParameter):
        simulate_walk(seq, "strict", 0, 1)
    with pytest.raises(InvalidParameter):
        simulate_walk(seq, "loose", 10, 1)
    with pytest.raises(InvalidParameter):
        simulate_walk(seq, "strict", 20_000, 1, return_words=True)


def test_walk_block_stats_matches_final_word():
    seq = parse_sequence("identity")
    stats = walk_block_stats(seq, "strict", 200, seed=4)
    _, words = simulate_walk(seq, "strict", 200, 4, return_words=True)
    sys_ = RewriteSystem(seq, "strict")
    assert stats == sys_.block_stats(words[-1])


# -- aggregation ------------------------------------------------------------------

def test_walk_config_validation():
    seq = parse_sequence("identity")
    WalkConfig(seq, "strict", (4, 16), 10, 0)
    with pytest.raises(InvalidParameter):
        WalkConfig(seq, "strict", (16, 4), 10, 0)
    with pytest.raises(InvalidParameter):
        WalkConfig(seq, "strict", (4, 4), 10, 0)
    with pytest.raises(InvalidParameter):
        WalkConfig(seq, "strict", (), 10, 0)
    with pytest.raises(InvalidParameter):
        WalkConfig(seq, "strict", (0, 4), 10, 0)
    with pytest.raises(InvalidParameter):
        WalkConfig(seq, "strict", (4, 16), 0, 0)
    with pytest.raises(InvalidParameter):
        WalkConfig(seq, "loose", (4, 16), 10, 0)


def test_walk_config_fingerprint():
    cfg = WalkConfig(parse_sequence("beta:0.5"), "weak", (16, 64), 7, 3)
    assert cfg.fingerprint() == \
        "seq=beta:0.5;variant=weak;grid=16,64;trials=7;master_seed=3"


def test_estimate_speed_reproducible(warm):
    cfg = WalkConfig(parse_sequence("identity"), "strict", (16, 64), 50, 21)
    c1 = estimate_speed(cfg)
    c2 = estimate_speed(cfg)
    assert np.array_equal(c1.mean, c2.mean)
    assert np.array_equal(c1.stderr, c2.stderr)


def test_estimate_speed_matches_manual_trials(warm):
    # per-trial seeds are mix64(master, trial): the aggregate must equal a
    # hand-rolled loop over simulate_walk
    seq = parse_sequence("beta:0.5")
    cfg = WalkConfig(seq, "weak", (8, 32, 128), 40, 5)
    curve = estimate_speed(cfg)
    finals = np.array([
        [simulate_walk(seq, "weak", 128, mix64(5, t))[n] for n in (8, 32, 128)]
        for t in range(40)
    ])
    assert np.allclose(curve.mean, finals.mean(axis=0))
    expected_stderr = finals.std(axis=0, ddof=1) / np.sqrt(40)
    assert np.allclose(curve.stderr, expected_stderr)


def test_single_trial_has_zero_stderr(warm):
    cfg = WalkConfig(parse_sequence("identity"), "strict", (16,), 1, 2)
    assert estimate_speed(cfg).stderr[0] == 0.0


def test_block_curve_matches_pure_python(warm):
    # the block kernel aggregates must equal averaging walk_block_stats
    seq = parse_sequence("explicit:1,3,4,9:frozen")
    cfg = WalkConfig(seq, "strict", (25, 90), 12, 13)
    bc = estimate_block_stats(cfg)
    per_trial = [walk_block_stats(seq, "strict", n, mix64(13, t))
                 for n in (25, 90) for t in range(12)]
    for gi, n in enumerate((25, 90)):
        batch = per_trial[gi * 12:(gi + 1) * 12]
        assert np.isclose(bc.n0_mean[gi], np.mean([s.n0 for s in batch]))
        assert np.isclose(bc.ninf_mean[gi], np.mean([s.n_inf for s in batch]))
        assert np.isclose(bc.delta_mean[gi], np.mean([s.delta for s in batch]))
        assert np.isclose(bc.length_mean[gi],
                          np.mean([s.total_length() for s in batch]))
        for k in range(1, bc.num_classes + 1):
            counts = [s.per_class.get(k).count if k in s.per_class else 0
                      for s in batch]
            lens = [s.per_class.get(k).total_len if k in s.per_class else 0
                    for s in batch]
            assert np.isclose(bc.count_mean[gi, k], np.mean(counts)), (n, k)
            assert np.isclose(bc.len_mean[gi, k], np.mean(lens)), (n, k)


def test_speed_and_block_kernels_agree(warm):
    cfg = WalkConfig(parse_sequence("beta:0.5"), "weak", (16, 64, 256), 30, 8)
    curve = estimate_speed(cfg)
    bc = estimate_block_stats(cfg)
    assert np.allclose(curve.mean, bc.length_mean)
    assert np.allclose(curve.stderr, bc.length_stderr)


# -- serialization -----------------------------------------------------------------

def test_speed_curve_csv_and_json(tmp_path, warm):
    cfg = WalkConfig(parse_sequence("identity"), "strict", (4, 8), 5, 1)
    curve = estimate_speed(cfg)
    text = curve.to_csv()
    lines = text.strip().split("\n")
    assert lines[1] == f"# {cfg.fingerprint()}"
    assert lines[2] == "n,mean,stderr,trials"
    n, mean, stderr, trials = lines[3].split(",")
    assert (int(n), int(trials)) == (4, 5)
    assert float(mean) == curve.mean[0]

    path = tmp_path / "curve.csv"
    curve.to_csv(path)
    assert path.read_text() == text

    obj = json.loads(curve.to_json())
    assert obj["kind"] == "speed_curve"
    assert obj["fingerprint"] == cfg.fingerprint()
    assert obj["points"][1]["n"] == 8
    jpath = tmp_path / "curve.json"
    curve.to_json(jpath)
    assert json.loads(jpath.read_text()) == obj


# -- exponent estimation -------------------------------------------------------------

def _fake_curve(grid, means):
    cfg = WalkConfig(parse_sequence("beta:0.5"), "strict", tuple(grid), 2, 0)
    g = np.asarray(grid, dtype=np.int64)
    return SpeedCurve(cfg, g, np.asarray(means, float), np.zeros(len(grid)))


def test_peak_points():
    seq = parse_sequence("beta:0.5")  # terms 1, 3, 7, 15, ...
    assert peak_points(seq, (2**4, 2**7, 2**15, 100)) == (2**7, 2**15)
    ident = parse_sequence("identity")
    assert peak_points(ident, (4, 6, 16)) == (4, 16)


def test_estimate_exponent_uses_peaks():
    curve = _fake_curve((2**4, 2**7, 2**15), (3.0, 52.0, 1844.0))
    est = estimate_exponent(curve)
    assert est.points == (2**7, 2**15)
    assert est.proxies == pytest.approx(
        (np.log(52.0) / np.log(2**7), np.log(1844.0) / np.log(2**15)))
    assert est.value == max(est.proxies)


def test_estimate_exponent_skips_uninformative_points():
    curve = _fake_curve((2, 2**7), (0.9, 52.0))
    est = estimate_exponent(curve, points=(2, 2**7))
    assert est.points == (2**7,)


def test_estimate_exponent_errors():
    curve = _fake_curve((2**7,), (52.0,))
    with pytest.raises(InvalidParameter):
        estimate_exponent(curve, points=(64,))  # not on the grid
    low = _fake_curve((2**7,), (0.5,))
    with pytest.raises(InvalidParameter):
        estimate_exponent(low, points=(2**7,))  # nothing usable
