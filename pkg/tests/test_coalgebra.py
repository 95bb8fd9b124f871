from hypothesis import given, settings, strategies as st

from ncwick import coalgebra as co
from ncwick import core
from ncwick.core import Element, Tensor, as_bar, word


def T(*pairs):
    """Tensor from ``(left words, right words, coefficient)`` triples."""
    return Tensor.from_terms([((tuple(l), tuple(r)), c) for l, r, c in pairs])


a1, a2, a3 = word(0), word(1), word(2)

words = st.lists(st.integers(0, 2), max_size=5).map(lambda gs: word(*gs))
nonempty = st.lists(st.integers(0, 2), min_size=1, max_size=5).map(lambda gs: word(*gs))


def test_subset_splits_components():
    splits = co.subset_splits(4)
    assert len(splits) == 16
    s = next(x for x in splits if x.S == (1, 2))
    assert s.components == ((0,), (3,))


def test_unshuffle_of_two_letters():
    assert co.delta_shuffle(word(0, 1)) == T(
        ([], [word(0, 1)], 1), ([a1], [a2], 1), ([a2], [a1], 1), ([word(0, 1)], [], 1)
    )
    assert co.reduced_delta_shuffle(word(0, 0)) == T(([a1], [a1], 2))


def test_extraction_coproduct_of_three_letters():
    # the only bar product comes from extracting the middle letter
    d = co.delta(word(0, 1, 2))
    assert len(d.terms) == 8
    assert d.terms[(as_bar(a2), (a1, a3))] == 1
    assert (as_bar(word(0, 2)), as_bar(a2)) in d.terms


def test_half_coproducts_split_on_the_first_letter():
    w = word(0, 1, 2)
    prec = co.delta_prec_plus(w)
    succ = co.delta_succ_plus(w)
    assert all(k[0] and k[0][0][0] == (0,) for k in prec.terms)
    assert all(not k[0] or k[0][0][0] != (0,) for k in succ.terms)
    assert prec + succ == co.delta(w)


def test_iterated_unshuffle_counts_surjections():
    t = co.delta_shuffle_iterated(2, word(0, 1, 2))
    assert sum(c.constant() for c in t.terms.values()) == 6
    assert co.delta_shuffle_iterated(1, word(0, 1)) == Tensor({(as_bar(word(0, 1)),): 1})


def test_linearized_coproduct():
    assert co.delta_hat(word(0, 1)) == T(([], [word(0, 1)], 1), ([a2], [a1], 1), ([a1], [a2], 1))


def test_antipode_of_two_letters():
    # S(a1 a2) = -a1 a2 + a1|a2 + a2|a1
    expected = Element({as_bar(word(0, 1)): -1, (a1, a2): 1, (a2, a1): 1})
    assert co.antipode_shuffle(word(0, 1)) == expected


@settings(max_examples=40, deadline=None)
@given(words)
def test_unshuffle_counit_and_cocommutativity(w):
    d = co.delta_shuffle(w)
    assert d.swap() == d
    assert d.contract(lambda k: Element.of_bar(k[0]) if not k[1] else Element()) == Element.of_word(w)


@settings(max_examples=40, deadline=None)
@given(nonempty, nonempty)
def test_delta_is_multiplicative_on_bar_products(w, v):
    b = (w, v)
    assert co.delta_on_barword(b) == co.delta_on_barword((w,)) * co.delta_on_barword((v,))


@settings(max_examples=30, deadline=None)
@given(nonempty)
def test_delta_coassociative(w):
    b = as_bar(w)
    d = co.delta_on_barword(b)
    assert d.apply_leg(0, co.delta_on_barword) == d.apply_leg(1, co.delta_on_barword)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=1, max_size=4).map(lambda gs: word(*gs)))
def test_antipode_convolution(w):
    left = co.delta_shuffle(w).contract(lambda k: co.antipode_shuffle(k[0], bar=True) * Element.of_bar(k[1]))
    assert left.is_zero()


def test_unshuffle_axioms_on_all_short_words():
    for w in core.words_up_to(2, 4, 1):
        b = as_bar(w)
        assert co.delta_prec(b).apply_leg(0, co.delta_prec) == co.delta_prec(b).apply_leg(1, co.delta_bar)
        assert co.delta_prec(b).apply_leg(0, co.delta_succ) == co.delta_succ(b).apply_leg(1, co.delta_prec)
        assert co.delta_succ(b).apply_leg(0, co.delta_bar) == co.delta_succ(b).apply_leg(1, co.delta_succ)


def test_clear_caches_is_idempotent():
    co.delta(word(0, 1))
    co.clear_caches()
    co.clear_caches()
    assert co.delta(word(0)) == T(([], [a1], 1), ([a1], [], 1))
