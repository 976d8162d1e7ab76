import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semiwalk.rewriting import (ReducedWord, RewriteSystem,
                                check_confluence_sample, random_word)
from semiwalk.sequences import (InvalidParameter, make_explicit_sequence,
                                make_identity_sequence, parse_sequence)

SEQ_SPECS = ("identity", "beta:0.5", "explicit:1,3,4,9:frozen")

words = st.text(alphabet="xy", max_size=60)


def system(spec="identity", variant="strict"):
    return RewriteSystem(parse_sequence(spec), variant)


# -- ReducedWord ------------------------------------------------------------

def test_reduced_word_basics():
    w = ReducedWord(1, (1, 2), 3, True)
    assert w.t == 3
    assert w.length() == 3 + 1 + 3 + 3
    assert w.expand() == "yxyxyyxyyy"
    assert ReducedWord().expand() == ""
    assert ReducedWord(3).expand() == "yyy"
    assert ReducedWord(0, (), 0, True).expand() == "x"


def test_reduced_word_validation():
    with pytest.raises(InvalidParameter):
        ReducedWord(-1)
    with pytest.raises(InvalidParameter):
        ReducedWord(0, (1,), 0, False)  # interior without x
    with pytest.raises(InvalidParameter):
        ReducedWord(0, (0,), 0, True)  # empty interior run


def test_reduced_word_json_round_trip():
    w = ReducedWord(2, (1, 5), 0, True)
    assert ReducedWord.from_json(w.to_json()) == w


# -- hand-worked normal forms ----------------------------------------------

@pytest.mark.parametrize("word, expected", [
    ("", ""),
    ("yyy", "yyy"),
    ("xx", "x"),
    ("xxxx", "x"),
    ("xyxyyx", "xyxyyx"),   # classes rise, nothing absorbs
    ("xyyxyx", "xyyx"),     # trailing lower-class block absorbed
    ("yxyyxyxx", "yxyyx"),  # absorb y-run, then xx -> x
])
def test_strict_identity_normal_forms(word, expected):
    assert system().normalize(word).expand() == expected


def test_weak_absorbs_equal_class():
    assert system(variant="weak").normalize("xyxyx").expand() == "xyx"
    assert system(variant="strict").normalize("xyxyx").expand() == "xyxyx"


def test_interior_class_order_invariant():
    # strict: nondecreasing classes; weak: strictly increasing classes
    rng = random.Random(1234)
    for spec in SEQ_SPECS:
        strict = system(spec, "strict")
        weak = system(spec, "weak")
        for _ in range(300):
            w = random_word(rng, 50)
            cs = [strict.class_of(j) for j in strict.normalize(w).interior]
            assert all(a <= b for a, b in zip(cs, cs[1:])), (spec, w)
            cw = [weak.class_of(j) for j in weak.normalize(w).interior]
            assert all(a < b for a, b in zip(cw, cw[1:])), (spec, w)


def test_normalize_rejects_bad_letters():
    with pytest.raises(InvalidParameter):
        system().normalize("xyz")
    with pytest.raises(InvalidParameter):
        system().append_generator(ReducedWord(), "q")


# -- agreement between the three reduction routes ---------------------------

@settings(max_examples=200, deadline=None)
@given(words, st.integers(0, 2**32), st.sampled_from(SEQ_SPECS),
       st.sampled_from(("strict", "weak")))
def test_normalize_agrees_with_reference(word, seed, spec, variant):
    sys_ = system(spec, variant)
    folded = sys_.normalize(word)
    ref = sys_.normalize_reference(word, random.Random(seed))
    assert folded == ref


@settings(max_examples=100, deadline=None)
@given(words, st.sampled_from(SEQ_SPECS), st.sampled_from(("strict", "weak")))
def test_normalize_agrees_with_append_fold(word, spec, variant):
    sys_ = system(spec, variant)
    w = sys_.identity()
    for g in word:
        w = sys_.append_generator(w, g)
    assert sys_.normalize(word) == w


@settings(max_examples=150, deadline=None)
@given(words, st.sampled_from(SEQ_SPECS), st.sampled_from(("strict", "weak")))
def test_step_deltas(word, spec, variant):
    # appending y always adds 1; appending x adds 1, does nothing (x*x = x),
    # or absorbs a whole block: delta -j for the dropped run j >= 1
    sys_ = system(spec, variant)
    w = sys_.identity()
    for g in word:
        nxt = sys_.append_generator(w, g)
        delta = nxt.length() - w.length()
        if g == "y":
            assert delta == 1
        else:
            assert delta in (0, 1) or delta <= -1
        w = nxt


@settings(max_examples=100, deadline=None)
@given(st.text(alphabet="xy", max_size=20), st.text(alphabet="xy", max_size=20),
       st.text(alphabet="xy", max_size=20))
def test_multiply_associative_and_consistent(a, b, c):
    sys_ = system("beta:0.5", "strict")
    wa, wb, wc = (sys_.normalize(t) for t in (a, b, c))
    left = sys_.multiply(sys_.multiply(wa, wb), wc)
    right = sys_.multiply(wa, sys_.multiply(wb, wc))
    assert left == right
    assert sys_.multiply(wa, wb) == sys_.normalize(a + b)
    assert sys_.multiply(sys_.identity(), wa) == wa
    assert sys_.multiply(wa, sys_.identity()) == wa


# -- block statistics --------------------------------------------------------

def test_block_stats_hand_example():
    sys_ = system()
    w = sys_.normalize("yxyxyyxyyy")
    stats = sys_.block_stats(w)
    assert (stats.n0, stats.n_inf, stats.delta) == (1, 3, 1)
    assert {k: (v.count, v.total_len) for k, v in stats.per_class.items()} \
        == {1: (1, 2), 2: (1, 3)}
    assert stats.total_length() == w.length() == 10


def test_block_stats_delta_iff_x():
    sys_ = system()
    assert sys_.block_stats(sys_.normalize("yyy")).delta == 0
    assert sys_.block_stats(sys_.normalize("x")).delta == 1
    assert sys_.block_stats(sys_.identity()).delta == 0


@settings(max_examples=100, deadline=None)
@given(words, st.sampled_from(SEQ_SPECS))
def test_block_stats_lengths_add_up(word, spec):
    sys_ = system(spec, "strict")
    w = sys_.normalize(word)
    stats = sys_.block_stats(w)
    assert stats.total_length() == w.length() == len(w.expand())
    assert stats.delta == (1 if w.has_x else 0)


# -- confluence sampling ------------------------------------------------------

def test_random_word_is_seed_deterministic():
    a = random_word(random.Random(5), 30)
    b = random_word(random.Random(5), 30)
    assert a == b
    assert set(a) <= {"x", "y"}
    assert len(a) <= 30


def test_check_confluence_sample_report():
    rep = check_confluence_sample(system("identity", "strict"), 200, seed=11)
    assert rep.samples == 200
    assert rep.all_agree
    assert rep.disagreements == 0
    assert rep.length_failures == 0
    assert rep.counterexample is None
    assert rep.elapsed_s >= 0.0


def test_check_confluence_sample_is_deterministic():
    sys_ = system("beta:0.5", "weak")
    r1 = check_confluence_sample(sys_, 100, seed=3)
    r2 = check_confluence_sample(sys_, 100, seed=3)
    assert (r1.disagreements, r1.length_failures) == \
        (r2.disagreements, r2.length_failures)


def test_word_label():
    sys_ = system()
    assert sys_.word_label(sys_.identity()) == "1"
    assert sys_.word_label(sys_.normalize("xy")) == "xy"


def test_variant_validation():
    with pytest.raises(InvalidParameter):
        RewriteSystem(make_identity_sequence(), "loose")


def test_stop_tail_sequences_limit_run_lengths():
    # runs beyond the last class of a stop-tail sequence have no class
    sys_ = RewriteSystem(make_explicit_sequence((1, 3)), "strict")
    assert sys_.normalize("xyyx").expand() == "xyyx"
    with pytest.raises(Exception):
        sys_.normalize("x" + "y" * 3 + "x" + "y" * 3 + "x")
