import pytest
from hypothesis import given, strategies as st

from selfsim.errors import MalformedWord
from selfsim.words import format_word, invert_word, parse_expression, reduce_word


@pytest.mark.parametrize(
    "text, expected",
    [
        ("1", ()),
        ("a", (("a", 1),)),
        ("a*a^-1", ()),
        ("a^2*b", (("a", 2), ("b", 1))),
        ("(a*b)^2", (("a", 1), ("b", 1), ("a", 1), ("b", 1))),
        ("[a,b]", (("a", -1), ("b", -1), ("a", 1), ("b", 1))),
        ("(a*b)^-1", (("b", -1), ("a", -1))),
    ],
)
def test_parse_expression(text, expected):
    assert reduce_word(parse_expression(text)) == expected


@pytest.mark.parametrize("text", ["", "a*", "a^", "(a", "[a]", "a^-x", "2a", "a**b"])
def test_malformed(text):
    with pytest.raises(MalformedWord):
        parse_expression(text)


def test_expansion_limit():
    with pytest.raises(MalformedWord):
        parse_expression("((a*b)^1000)^1000")


words = st.lists(
    st.tuples(st.sampled_from("abc"), st.integers(-3, 3).filter(bool)), max_size=8
).map(tuple)


@given(words)
def test_format_parse_round_trip(w):
    r = reduce_word(w)
    assert reduce_word(parse_expression(format_word(r))) == r


@given(words)
def test_inverse_cancels(w):
    assert reduce_word(tuple(w) + tuple(invert_word(w))) == ()
