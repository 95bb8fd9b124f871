from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ncwick import core
from ncwick.core import ONE, ZERO, Alphabet, Element, Scalar, Tensor, letter, word

SYMS = [("phi", (0,)), ("phi", (1,)), ("phi", (0, 1)), ("psi", (0,)), ("t", ())]

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def scalars(draw):
    out = ZERO
    for _ in range(draw(st.integers(0, 3))):
        term = Scalar.const(draw(rationals))
        for sym in draw(st.lists(st.sampled_from(SYMS), max_size=2)):
            term = term * Scalar.var(sym)
        out = out + term
    return out


@given(scalars(), scalars(), scalars())
def test_scalar_ring_axioms(x, y, z):
    assert x + y == y + x
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == ZERO
    assert x * ONE == x


@given(scalars(), scalars())
def test_no_zero_coefficients_are_stored(x, y):
    assert all(c != 0 for c in (x * y - y).terms.values())


def test_integral_coefficients_hash_like_fractions():
    a = Scalar.const(Fraction(4, 2))
    b = Scalar.const(2)
    assert a == b and hash(a) == hash(b)
    assert type(a.terms[()]) is int
    assert (Scalar.const(Fraction(1, 3)) * 3).terms[()] == 1


def test_scalar_powers_and_substitution():
    p = Scalar.var(("phi", (0,)))
    q = (p + 1) ** 2
    assert q == p * p + p * 2 + ONE
    assert q.substitute(("phi", (0,)), 2) == Scalar.const(9)
    assert q.coefficients_in(("phi", (0,))) == [ONE, Scalar.const(2), ONE]


def test_alphabet_names():
    a = Alphabet(["x", "y"])
    assert a.index("y") == 1
    assert a.name(0) == "x"
    assert a.name(5) == "a6"
    with pytest.raises(ValueError):
        a.add("x")
    with pytest.raises(KeyError):
        a.index("z")


def test_letters_and_evaluation():
    assert letter(1, 0) == (1, 0)
    assert letter(1, 0, commutative=True) == (0, 1)
    w = ((0,), (1, 2), (0,))
    assert core.evaluate_in_A(w) == (0, 1, 2, 0)
    assert core.evaluate_in_A(w, commutative=True) == (0, 0, 1, 2)
    with pytest.raises(ValueError):
        core.evaluate_in_A(())


def test_moment_symbol_collision():
    # a.b followed by c has the same moment as a followed by b.c
    assert core.moment_symbol(((0, 1), (2,))) == core.moment_symbol(((0,), (1, 2)))
    assert core.moment_symbol(word(1, 0), commutative=True) == ("phi", (0, 1))


def test_element_bar_product_and_normal_form():
    x = Element.of_word(word(0)) + Element.of_word(word(1), 2)
    y = Element.of_word(word(1, 0))
    prod = x * y
    assert prod.coefficient((word(0), word(1, 0))) == ONE
    assert prod.coefficient((word(1), word(1, 0))) == Scalar.const(2)
    assert (x - x).is_zero()
    assert Element.unit() * x == x
    assert not prod.is_bar_free()
    assert prod.degree() == 3


def test_concat_elements_and_evaluation_in_A():
    x = Element.of_word(word(0)) + Element.unit()
    y = Element.of_word(word(1))
    assert core.concat_elements(x, y) == Element.of_word(word(0, 1)) + y
    ev = core.evaluate_element_in_A(Element.of_word(word(1, 0)), commutative=True)
    assert ev == Element.of_word((((0, 1)),))


def test_tensor_legs():
    t = Tensor.from_terms([((core.as_bar(word(0)), ()), 1), (((), core.as_bar(word(0))), 1)])
    assert t.arity() == 2
    assert t.swap() == t
    assert t.contract(lambda k: Element.of_bar(k[0] + k[1])) == Element.of_word(word(0), 2)


@pytest.mark.parametrize("n,count", [(0, 1), (1, 3), (2, 7), (3, 15)])
def test_words_up_to_counts(n, count):
    assert len(core.words_up_to(2, n)) == count


def test_distinct_word_and_bar_products():
    assert core.distinct_word(3) == word(0, 1, 2)
    bars = core.bar_products([word(0), word(1)], 3, 3)
    assert all(len(b) >= 2 and core.degree(b) <= 3 for b in bars)
    assert (word(0), word(1), word(0)) in bars


@settings(max_examples=50)
@given(st.lists(st.tuples(st.sampled_from([(), (word(0),), (word(0, 1),), (word(1), word(0))]), scalars()), max_size=5))
def test_from_terms_matches_repeated_addition(pairs):
    total = Element()
    for b, c in pairs:
        total = total + Element.of_bar(b, c)
    assert Element.from_terms(pairs) == total
    assert total.normalize() == total
