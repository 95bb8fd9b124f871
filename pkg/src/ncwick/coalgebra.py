"""Coproducts on T(A) and on the double tensor algebra T(T(A)).

Two coalgebra structures live here:

* the unshuffle coproduct, which makes every letter primitive,
* the extraction coproduct ``delta``, which sends a word to the sum over
  subsets S of ``a_S (x) a_J1 | ... | a_Jk`` where the J's are the connected
  components of the complement of S; it is extended multiplicatively to
  bar-words, and splits into the left/right half-coproducts.

The ``_*_terms`` functions return tuples of ``(left, right, multiplicity)``
and are memoized per word; they are the hot path of every convolution.  The
public functions wrap them into :class:`~ncwick.core.Tensor` values.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, permutations, product

from .core import (
    UNIT_BAR,
    UNIT_WORD,
    BarWord,
    Element,
    Tensor,
    Word,
    as_bar,
)

__all__ = [
    "SubsetSplit",
    "subset_splits",
    "delta_shuffle",
    "delta_shuffle_iterated",
    "reduced_delta_shuffle",
    "delta",
    "delta_on_barword",
    "delta_prec_plus",
    "delta_succ_plus",
    "delta_prec",
    "delta_succ",
    "delta_bar",
    "delta_hat",
    "antipode_shuffle",
    "clear_caches",
]


class SubsetSplit:
    """A subset S of {0..n-1} with the connected components of its complement."""

    __slots__ = ("S", "components")

    def __init__(self, S: tuple[int, ...], n: int):
        self.S = S
        chosen = set(S)
        comps: list[tuple[int, ...]] = []
        run: list[int] = []
        for i in range(n):
            if i in chosen:
                if run:
                    comps.append(tuple(run))
                    run = []
            else:
                run.append(i)
        if run:
            comps.append(tuple(run))
        self.components = tuple(comps)

    def __repr__(self) -> str:
        return f"SubsetSplit(S={self.S}, components={self.components})"


@lru_cache(maxsize=None)
def subset_splits(n: int) -> tuple[SubsetSplit, ...]:
    return tuple(
        SubsetSplit(S, n) for k in range(n + 1) for S in combinations(range(n), k)
    )


def _merge(terms) -> tuple:
    acc: dict = {}
    for left, right, m in terms:
        acc[(left, right)] = acc.get((left, right), 0) + m
    return tuple((l, r, m) for (l, r), m in acc.items() if m)


def _as_tensor(terms, left_is_word: bool, right_is_word: bool = False) -> Tensor:
    return Tensor.from_terms(
        (
            (
                as_bar(l) if left_is_word else l,
                as_bar(r) if right_is_word else r,
            ),
            m,
        )
        for l, r, m in terms
    )


# ----------------------------------------------------------------------------
# unshuffle coproduct on T(A)


@lru_cache(maxsize=None)
def _delta_shuffle_terms(w: Word) -> tuple:
    n = len(w)
    out = []
    for split in subset_splits(n):
        chosen = set(split.S)
        out.append(
            (
                tuple(w[i] for i in split.S),
                tuple(w[i] for i in range(n) if i not in chosen),
                1,
            )
        )
    return _merge(out)


def delta_shuffle(w: Word) -> Tensor:
    """Unshuffle coproduct: sum over subsets S of ``a_S (x) a_{[n]-S}``."""
    return _as_tensor(_delta_shuffle_terms(w), True, True)


def reduced_delta_shuffle(w: Word) -> Tensor:
    return delta_shuffle(w) - Tensor({(as_bar(w), UNIT_BAR): 1, (UNIT_BAR, as_bar(w)): 1})


def delta_shuffle_iterated(j: int, w: Word) -> Tensor:
    """Iterated reduced unshuffle coproduct with ``j`` legs.

    Sums ``a_{B_1} (x) ... (x) a_{B_j}`` over ordered set partitions of the
    letter positions into ``j`` nonempty blocks; ``j = 1`` returns ``w``.
    """
    if j < 1:
        raise ValueError("the iterated coproduct needs j >= 1")
    if not w:
        raise ValueError("the reduced coproduct is defined on nonempty words")
    n = len(w)
    acc: dict = {}
    # ordered partitions into j blocks are exactly the surjections [n] -> [j]
    for labels in product(range(j), repeat=n):
        if len(set(labels)) != j:
            continue
        key = tuple(
            as_bar(tuple(w[i] for i in range(n) if labels[i] == b)) for b in range(j)
        )
        acc[key] = acc.get(key, 0) + 1
    return Tensor(acc)


# ----------------------------------------------------------------------------
# extraction coproduct on T(T(A))


@lru_cache(maxsize=None)
def _delta_word_terms(w: Word) -> tuple:
    out = []
    for split in subset_splits(len(w)):
        left = tuple(w[i] for i in split.S)
        right = tuple(tuple(w[i] for i in comp) for comp in split.components)
        out.append((left, right, 1))
    return _merge(out)


@lru_cache(maxsize=None)
def _delta_prec_word_terms(w: Word) -> tuple:
    if not w:
        raise ValueError("the half-coproducts are not defined on the unit")
    return _merge(
        (tuple(w[i] for i in s.S), tuple(tuple(w[i] for i in c) for c in s.components), 1)
        for s in subset_splits(len(w))
        if s.S and s.S[0] == 0
    )


@lru_cache(maxsize=None)
def _delta_succ_word_terms(w: Word) -> tuple:
    if not w:
        raise ValueError("the half-coproducts are not defined on the unit")
    return _merge(
        (tuple(w[i] for i in s.S), tuple(tuple(w[i] for i in c) for c in s.components), 1)
        for s in subset_splits(len(w))
        if not (s.S and s.S[0] == 0)
    )


def _product_terms(first: tuple, rest: BarWord) -> tuple:
    """Multiply word-level terms (left is a word) by delta of further words."""
    terms = [(as_bar(l), r, m) for l, r, m in first]
    for w in rest:
        nxt = []
        for l1, r1, m1 in terms:
            for l2, r2, m2 in _delta_word_terms(w):
                nxt.append((l1 + as_bar(l2), r1 + r2, m1 * m2))
        terms = nxt
    return _merge(terms)


@lru_cache(maxsize=None)
def _delta_bar_terms(b: BarWord) -> tuple:
    if not b:
        return ((UNIT_BAR, UNIT_BAR, 1),)
    return _product_terms(_delta_word_terms(b[0]), b[1:])


@lru_cache(maxsize=None)
def _delta_prec_bar_terms(b: BarWord) -> tuple:
    if not b:
        raise ValueError("the half-coproducts are not defined on the unit")
    return _product_terms(_delta_prec_word_terms(b[0]), b[1:])


@lru_cache(maxsize=None)
def _delta_succ_bar_terms(b: BarWord) -> tuple:
    if not b:
        raise ValueError("the half-coproducts are not defined on the unit")
    return _product_terms(_delta_succ_word_terms(b[0]), b[1:])


def delta(w: Word) -> Tensor:
    """Extraction coproduct of a word: ``sum_S a_S (x) a_J1 | ... | a_Jk``."""
    return _as_tensor(_delta_word_terms(w), True)


def delta_on_barword(b: BarWord) -> Tensor:
    """Multiplicative extension of :func:`delta`; ``delta(1) = 1 (x) 1``."""
    return _as_tensor(_delta_bar_terms(b), False)


def delta_prec_plus(x: Word | BarWord, *, bar: bool = False) -> Tensor:
    """Left half-coproduct (the subsets that contain the first letter).

    With ``bar=True`` the argument is a bar-word ``w1|...|wm`` and the result
    is ``delta_prec_plus(w1) delta(w2) ... delta(wm)``.
    """
    if bar:
        return _as_tensor(_delta_prec_bar_terms(x), False)
    return _as_tensor(_delta_prec_word_terms(x), True)


def delta_succ_plus(x: Word | BarWord, *, bar: bool = False) -> Tensor:
    """Right half-coproduct (the subsets that avoid the first letter)."""
    if bar:
        return _as_tensor(_delta_succ_bar_terms(x), False)
    return _as_tensor(_delta_succ_word_terms(x), True)


def delta_prec(b: BarWord) -> Tensor:
    """Reduced left half-unshuffle ``delta_prec_plus(b) - b (x) 1``."""
    return delta_prec_plus(b, bar=True) - Tensor({(b, UNIT_BAR): 1})


def delta_succ(b: BarWord) -> Tensor:
    """Reduced right half-unshuffle ``delta_succ_plus(b) - 1 (x) b``."""
    return delta_succ_plus(b, bar=True) - Tensor({(UNIT_BAR, b): 1})


def delta_bar(b: BarWord) -> Tensor:
    """Reduced coproduct ``delta(b) - b (x) 1 - 1 (x) b`` on nonempty bar-words."""
    if not b:
        raise ValueError("the reduced coproduct is defined on nonempty bar-words")
    return delta_prec(b) + delta_succ(b)


@lru_cache(maxsize=None)
def _delta_hat_terms(w: Word) -> tuple:
    n = len(w)
    out = []
    for i in range(n):
        for j in range(i + 1, n + 1):
            out.append((w[:i] + w[j:], w[i:j], 1))
    return _merge(out)


def delta_hat(w: Word) -> Tensor:
    """Linearized coproduct: ``sum_{w = w1 w2 w3, w2 != 1} w1 w3 (x) w2``."""
    if not w:
        raise ValueError("the linearized coproduct is defined on nonempty words")
    return _as_tensor(_delta_hat_terms(w), True, True)


# ----------------------------------------------------------------------------
# antipode of the unshuffle extension to T(T(A))


def _set_partitions(items: tuple[int, ...]):
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield ((first,),) + part
        for i in range(len(part)):
            yield part[:i] + ((first,) + part[i],) + part[i + 1:]


@lru_cache(maxsize=None)
def _antipode_word(w: Word) -> Element:
    if not w:
        return Element.unit()
    acc: dict = {}
    for blocks in _set_partitions(tuple(range(len(w)))):
        sign = (-1) ** len(blocks)
        for order in permutations(blocks):
            key = tuple(tuple(w[i] for i in sorted(B)) for B in order)
            acc[key] = acc.get(key, 0) + sign
    return Element(acc)


def antipode_shuffle(b: Word | BarWord, *, bar: bool = False) -> Element:
    """Antipode of T(T(A)) with the multiplicatively extended unshuffle coproduct.

    On a word it is the signed sum over set partitions and block orderings;
    on bar-words it is extended as an algebra anti-morphism.
    """
    if not bar:
        return _antipode_word(b)
    out = Element.unit()
    for w in b:
        out = _antipode_word(w) * out
    return out


def clear_caches() -> None:
    for fn in (
        subset_splits,
        _delta_shuffle_terms,
        _delta_word_terms,
        _delta_prec_word_terms,
        _delta_succ_word_terms,
        _delta_bar_terms,
        _delta_prec_bar_terms,
        _delta_succ_bar_terms,
        _delta_hat_terms,
        _antipode_word,
    ):
        # tolerate functions that were swapped out for uncached ones
        getattr(fn, "cache_clear", lambda: None)()
