from fractions import Fraction as F

import pytest

from aivf import SourceModel, load_probability_file
from aivf.errors import (
    NonPositiveError,
    ProbabilityFileError,
    SumNotOneError,
    TooSmallError,
)


def test_sorted_descending_with_stable_names():
    src = SourceModel.from_probs([F(1, 10), F(3, 5), F(3, 10)], ["z", "x", "y"])
    assert src.symbols == ("x", "y", "z")
    assert src.probs == (F(3, 5), F(3, 10), F(1, 10))


def test_tail_sums(fig_source):
    assert fig_source.tail_sums == (F(1), F(2, 5), F(1, 10))


def test_equal_probs_keep_input_order():
    src = SourceModel.from_probs([F(1, 4), F(1, 2), F(1, 4)], ["b", "a", "c"])
    # stable sort: the two 1/4 entries stay as b before c
    assert src.symbols == ("a", "b", "c")


def test_default_names():
    src = SourceModel.from_probs([F(1, 2), F(1, 2)])
    assert src.symbols == ("a0", "a1")


def test_cond_prob(fig_source):
    assert fig_source.cond_prob(0) == F(3, 5)
    assert fig_source.cond_prob(1) == F(3, 4)
    with pytest.raises(IndexError):
        fig_source.cond_prob(2)
    with pytest.raises(IndexError):
        fig_source.cond_prob(-1)


def test_min_prob_and_len(fig_source):
    assert len(fig_source) == 3
    assert fig_source.min_prob == F(1, 10)


def test_bits_bound(fig_source):
    # largest numerator/denominator is 10 -> 4 bits
    assert fig_source.bits_b == 4


def test_index_of(fig_source):
    assert fig_source.index_of("a1") == 1
    with pytest.raises(KeyError):
        fig_source.index_of("nope")


def test_rejects_single_symbol():
    with pytest.raises(TooSmallError):
        SourceModel.from_probs([F(1)])


def test_rejects_nonpositive():
    with pytest.raises(NonPositiveError):
        SourceModel.from_probs([F(1), F(0)])
    with pytest.raises(NonPositiveError):
        SourceModel.from_probs([F(3, 2), F(-1, 2)])


def test_rejects_bad_sum():
    with pytest.raises(SumNotOneError):
        SourceModel.from_probs([F(1, 2), F(1, 3)])


def test_rejects_duplicate_names():
    with pytest.raises(ProbabilityFileError):
        SourceModel.from_probs([F(1, 2), F(1, 2)], ["a", "a"])


def test_load_probability_file(tmp_path):
    path = tmp_path / "probs.txt"
    path.write_text("# comment\na0 0.6\n\na1 3/10\na2 1/10\n")
    src = load_probability_file(path)
    assert src.probs == (F(3, 5), F(3, 10), F(1, 10))
    assert src.symbols == ("a0", "a1", "a2")


def test_load_decimal_is_exact(tmp_path):
    path = tmp_path / "probs.txt"
    path.write_text("a 0.1\nb 0.9\n")
    src = load_probability_file(path)
    # 0.1 parses as the rational 1/10, not the nearest binary float
    assert src.probs == (F(9, 10), F(1, 10))


@pytest.mark.parametrize(
    "body",
    [
        "a0 0.6 extra\na1 0.4\n",
        "a0 not-a-number\na1 0.4\n",
        "a0 1/0\na1 1\n",
        "# only comments\n",
    ],
)
def test_load_rejects_malformed(tmp_path, body):
    path = tmp_path / "probs.txt"
    path.write_text(body)
    with pytest.raises(ProbabilityFileError):
        load_probability_file(path)
