from fractions import Fraction as F
import random

import pytest

from aivf import build_tunstall, coding_rate, validate_tree
from aivf.tunstall import tunstall_expected_length

from conftest import assert_conservation, dyadic_source


def test_worked_dictionary_after_two_expansions(fig_source):
    code = build_tunstall(fig_source, 2)
    assert code.dict_size == 7
    rows = [(e.index, e.word, e.occurrence_prob) for e in code.entries]
    assert rows == [
        (1, (0, 0, 0), F(27, 125)),
        (2, (0, 0, 1), F(27, 250)),
        (3, (0, 0, 2), F(9, 250)),
        (4, (0, 1), F(9, 50)),
        (5, (0, 2), F(3, 50)),
        (6, (1,), F(3, 10)),
        (7, (2,), F(1, 10)),
    ]
    assert code.expected_length == F(49, 25)


def test_zero_expansions_is_the_bare_alphabet(fig_source):
    code = build_tunstall(fig_source, 0)
    assert [e.word for e in code.entries] == [(0,), (1,), (2,)]
    assert code.expected_length == 1


def test_rejects_negative_expansions(fig_source):
    with pytest.raises(ValueError):
        build_tunstall(fig_source, -1)


def test_dict_size_identity():
    rng = random.Random(3)
    for n in (2, 3, 5):
        src = dyadic_source(rng, n)
        for k in range(4):
            code = build_tunstall(src, k)
            assert code.dict_size == n + (n - 1) * k
            assert code.tree.codeword_count == code.dict_size


def test_expansion_trace_is_greedy(fig_source):
    # each expanded node had the best probability among the leaves of its time;
    # every later expansion's probability can only be <= the earlier one
    code = build_tunstall(fig_source, 4)
    probs = [p for _, p in code.trace]
    assert probs == sorted(probs, reverse=True)
    assert probs[0] == F(3, 5)


def test_prefix_free():
    rng = random.Random(4)
    for n in (2, 3, 4):
        src = dyadic_source(rng, n)
        code = build_tunstall(src, rng.randrange(1, 5))
        words = [e.word for e in code.entries]
        for a in words:
            for b in words:
                if a is not b:
                    assert b[: len(a)] != a


def test_lexicographic_tie_break():
    # uniform source: every leaf ties, the smallest word must be expanded
    src_probs = [F(1, 3)] * 3
    from aivf import SourceModel

    src = SourceModel.from_probs(src_probs)
    code = build_tunstall(src, 1)
    assert code.trace[0][0] == (0,)
    # after expanding (0,), the remaining depth-1 leaves still tie at 1/3
    code = build_tunstall(src, 2)
    assert code.trace[1][0] == (1,)


def test_trees_validate_and_conserve(fig_source):
    rng = random.Random(6)
    for k in range(4):
        code = build_tunstall(fig_source, k)
        assert validate_tree(code.tree, fig_source) == []
        assert_conservation(code.tree, fig_source, code.dict_size)
    src = dyadic_source(rng, 4)
    code = build_tunstall(src, 3)
    assert_conservation(code.tree, src, code.dict_size)


def test_expected_length_grows_with_expansions(fig_source):
    lengths = [tunstall_expected_length(fig_source, k) for k in range(6)]
    assert all(a < b for a, b in zip(lengths, lengths[1:]))


def test_rate_report(fig_source):
    rate = coding_rate(7, F(49, 25))
    assert rate.dict_size == 7
    assert rate.expected_length == F(49, 25)
    assert str(rate.decimal) == "1.43232393983"


def test_two_symbol_source():
    from aivf import SourceModel

    src = SourceModel.from_probs([F(3, 4), F(1, 4)])
    code = build_tunstall(src, 2)
    # expansions always follow the all-a0 spine
    assert [e.word for e in code.entries] == [(0, 0, 0), (0, 0, 1), (0, 1), (1,)]
    assert code.expected_length == F(1) + F(3, 4) + F(9, 16)
