"""Linear functionals on T(T(A)) and T(A) and their convolution calculus.

A :class:`Functional` is a lazily evaluated, memoized map to scalars.  Its
``kind`` fixes how values on bar-words are obtained:

``character``      value on ``w1|...|wm`` is the product of the word values
``infinitesimal``  zero on the unit and on every bar-word with two or more
                   components
``general``        the rule is given directly on bar-words
``word``           a functional on T(A) only (the shuffle side); it has no
                   values on proper bar products

Every series of the calculus terminates on a fixed word by graded
nilpotency, so all values are exact.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import factorial
from typing import Callable, Mapping

from . import coalgebra as co
from .core import (
    ONE,
    PHI,
    UNIT_BAR,
    UNIT_WORD,
    ZERO,
    BarWord,
    Element,
    Scalar,
    Word,
    as_bar,
    degree,
    flatten,
)

CHARACTER = "character"
INFINITESIMAL = "infinitesimal"
GENERAL = "general"
WORD = "word"
KINDS = (CHARACTER, INFINITESIMAL, GENERAL, WORD)


class KindError(ValueError):
    """A functional of the wrong kind was passed to an operation."""


class DegreeError(ValueError):
    """A value was requested beyond the degree a functional is defined to."""


class UndefinedHalfShuffle(ValueError):
    """The half-shuffle products 1 < 1 and 1 > 1 have no value."""


class MissingMomentError(KeyError):
    """A table-mode state was queried for a moment it does not contain."""


class State:
    """A unital linear map on A, given by symbols or by a finite moment table.

    In symbolic mode ``phi(a_1 ... a_n)`` is the moment symbol keyed by the
    flattened generator string; in table mode the same key is looked up in
    ``table`` (a mapping from generator-index tuples to rationals).
    """

    def __init__(
        self,
        tag: str = PHI,
        table: Mapping[tuple[int, ...], object] | None = None,
        commutative: bool = False,
    ):
        self.tag = tag
        self.commutative = commutative
        if table is None:
            self.table = None
        else:
            self.table = {}
            for key, value in table.items():
                key = tuple(sorted(key)) if commutative else tuple(key)
                self.table[key] = Fraction(value)
        self._character: Functional | None = None
        self._moments: Functional | None = None

    @property
    def mode(self) -> str:
        return "symbolic" if self.table is None else "table"

    def moment(self, key: tuple[int, ...]) -> Scalar:
        if not key:
            return ONE
        if self.commutative:
            key = tuple(sorted(key))
        if self.table is None:
            return Scalar.var((self.tag, key))
        try:
            return Scalar.const(self.table[key])
        except KeyError:
            raise MissingMomentError(f"state {self.tag} has no moment for key {key}") from None

    def of_word(self, w: Word) -> Scalar:
        return self.moment(flatten(w, self.commutative))

    def __repr__(self) -> str:
        return f"State({self.tag!r}, mode={self.mode!r})"


class Functional:
    """Linear functional on T(T(A)) (or on T(A) for ``kind='word'``)."""

    def __init__(
        self,
        rule: Callable,
        kind: str = GENERAL,
        max_degree: int | None = None,
        name: str = "",
    ):
        if kind not in KINDS:
            raise ValueError(f"unknown kind {kind!r}")
        self.rule = rule
        self.kind = kind
        self.max_degree = max_degree
        self.name = name
        self._cache: dict = {}
        self._inverse: Functional | None = None
        # for declared kinds, the general functional that produced the values
        self.general: Functional | None = None

    # -- evaluation -------------------------------------------------------
    def _check_degree(self, d: int) -> None:
        if self.max_degree is not None and d > self.max_degree:
            raise DegreeError(
                f"{self.name or 'functional'} is only defined up to degree {self.max_degree}, asked for {d}"
            )

    def on_word(self, w: Word) -> Scalar:
        if self.kind == GENERAL:
            return self.on_bar(as_bar(w))
        val = self._cache.get(w)
        if val is None:
            if not w:
                if self.kind == CHARACTER:
                    return ONE
                if self.kind == INFINITESIMAL:
                    return ZERO
            self._check_degree(len(w))
            val = Scalar.coerce(self.rule(w))
            self._cache[w] = val
        return val

    def on_bar(self, b: BarWord) -> Scalar:
        kind = self.kind
        if kind == GENERAL:
            val = self._cache.get(b)
            if val is None:
                self._check_degree(degree(b))
                val = Scalar.coerce(self.rule(b))
                self._cache[b] = val
            return val
        if len(b) <= 1:
            return self.on_word(b[0] if b else UNIT_WORD)
        if kind == INFINITESIMAL:
            return ZERO
        if kind == CHARACTER:
            out = ONE
            for w in b:
                out = out * self.on_word(w)
                if not out:
                    return ZERO
            return out
        raise KindError("a functional on T(A) has no value on bar products")

    def __call__(self, x) -> Scalar:
        """Evaluate on an Element (linearly), a word, or a bar-word."""
        if isinstance(x, Element):
            total = ZERO
            for b, c in x.terms.items():
                total = total + c * self.on_bar(b)
            return total
        if x and isinstance(x[0][0], int):
            return self.on_word(x)
        return self.on_bar(x)

    def table(self, words) -> dict[Word, Scalar]:
        return {w: self.on_word(w) for w in words}

    # -- linear structure -------------------------------------------------
    def _combine(self, other: Functional, op: Callable[[Scalar, Scalar], Scalar], name: str) -> Functional:
        if self.kind == WORD or other.kind == WORD:
            if self.kind != other.kind:
                raise KindError("cannot combine functionals on T(A) and on T(T(A))")
            return Functional(
                lambda w: op(self.on_word(w), other.on_word(w)),
                WORD,
                _min_degree(self, other),
                name,
            )
        if self.kind == INFINITESIMAL and other.kind == INFINITESIMAL:
            return Functional(
                lambda w: op(self.on_word(w), other.on_word(w)),
                INFINITESIMAL,
                _min_degree(self, other),
                name,
            )
        return Functional(
            lambda b: op(self.on_bar(b), other.on_bar(b)),
            GENERAL,
            _min_degree(self, other),
            name,
        )

    def __add__(self, other: Functional) -> Functional:
        return self._combine(other, lambda x, y: x + y, f"({self.name}+{other.name})")

    def __sub__(self, other: Functional) -> Functional:
        return self._combine(other, lambda x, y: x - y, f"({self.name}-{other.name})")

    def scale(self, c) -> Functional:
        c = Scalar.coerce(c)
        kind = self.kind if self.kind in (INFINITESIMAL, WORD) else GENERAL
        if kind == GENERAL:
            return Functional(lambda b: c * self.on_bar(b), GENERAL, self.max_degree, f"{c}*{self.name}")
        return Functional(lambda w: c * self.on_word(w), kind, self.max_degree, f"{c}*{self.name}")

    def __neg__(self) -> Functional:
        return self.scale(-1)

    def __rmul__(self, c) -> Functional:
        return self.scale(c)

    def as_general(self) -> Functional:
        """The same values, evaluated without the kind's bar-word shortcut.

        For a functional whose kind was declared from a computation (e.g. a
        half-shuffle logarithm) this is that computation itself, so
        ``f.as_general().on_bar(b)`` checks the declared kind honestly.
        """
        if self.general is not None:
            return self.general
        if self.kind == GENERAL:
            return self
        return Functional(self.on_bar, GENERAL, self.max_degree, self.name)

    def __repr__(self) -> str:
        return f"Functional({self.name or '?'}, kind={self.kind})"


def _min_degree(*fs: Functional) -> int | None:
    ds = [f.max_degree for f in fs if f.max_degree is not None]
    return min(ds) if ds else None


def _declare(general: Functional, kind: str, name: str) -> Functional:
    f = Functional(general.on_word, kind, general.max_degree, name)
    f.general = general
    return f


# ----------------------------------------------------------------------------
# basic functionals


def epsilon(max_degree: int | None = None) -> Functional:
    """The counit: 1 on the unit, 0 elsewhere; the unit of convolution."""
    return Functional(lambda w: ZERO, CHARACTER, max_degree, "eps")


def character(values: Callable[[Word], object] | Mapping[Word, object], max_degree=None, name="") -> Functional:
    get = values if callable(values) else _table_getter(values)
    return Functional(get, CHARACTER, max_degree, name)


def infinitesimal(values: Callable[[Word], object] | Mapping[Word, object], max_degree=None, name="") -> Functional:
    get = values if callable(values) else _table_getter(values)
    return Functional(get, INFINITESIMAL, max_degree, name)


def _table_getter(table: Mapping[Word, object]):
    def get(w: Word):
        try:
            return table[w]
        except KeyError:
            raise MissingMomentError(f"no table value for word {w}") from None

    return get


def extend_state(s: State) -> Functional:
    """The character extension of a state to T(T(A))."""
    if s._character is None:
        s._character = Functional(s.of_word, CHARACTER, None, s.tag.upper())
    return s._character


def moment_map(s: State) -> Functional:
    """The state as a linear functional on T(A): ``w -> phi(ev(w))``."""
    if s._moments is None:
        s._moments = Functional(s.of_word, WORD, None, s.tag)
    return s._moments


def random_infinitesimal(seed, max_degree: int | None = None, bound: int = 5, name: str = "") -> Functional:
    """Infinitesimal character with seeded small rational values on words.

    The value on a word depends only on ``(seed, word)``, so the functional
    is reproducible however it is traversed.
    """

    def rule(w: Word):
        rng = random.Random(f"{seed}:{w!r}")
        num = rng.randint(-bound, bound)
        den = rng.randint(1, 3)
        return Fraction(num, den)

    return Functional(rule, INFINITESIMAL, max_degree, name or f"rand[{seed}]")


def random_character(seed, max_degree: int | None = None, bound: int = 5) -> Functional:
    inf = random_infinitesimal(seed, max_degree, bound)
    return Functional(inf.rule, CHARACTER, max_degree, f"randchar[{seed}]")


# ----------------------------------------------------------------------------
# convolution and half-shuffles on T(T(A))


def _require_bar_side(*fs: Functional) -> None:
    for f in fs:
        if f.kind == WORD:
            raise KindError("use the shuffle operations for functionals on T(A)")


def convolve(mu: Functional, nu: Functional) -> Functional:
    """``(mu (x) nu) delta``; characters convolve to characters."""
    _require_bar_side(mu, nu)
    terms = co._delta_bar_terms
    word_terms = co._delta_word_terms

    if mu.kind == CHARACTER and nu.kind == CHARACTER:

        def rule_word(w: Word):
            total = ZERO
            for left, right, m in word_terms(w):
                total = total + mu.on_word(left) * nu.on_bar(right) * m
            return total

        return Functional(rule_word, CHARACTER, _min_degree(mu, nu), f"({mu.name}*{nu.name})")

    def rule(b: BarWord):
        total = ZERO
        for left, right, m in terms(b):
            x = mu.on_bar(left)
            if x:
                total = total + x * nu.on_bar(right) * m
        return total

    return Functional(rule, GENERAL, _min_degree(mu, nu), f"({mu.name}*{nu.name})")


def _half(mu: Functional, nu: Functional, terms, symbol: str) -> Functional:
    _require_bar_side(mu, nu)

    def rule(b: BarWord):
        if not b:
            if mu.on_bar(UNIT_BAR) * nu.on_bar(UNIT_BAR):
                raise UndefinedHalfShuffle(f"1 {symbol} 1 is not defined")
            return ZERO
        total = ZERO
        for left, right, m in terms(b):
            x = mu.on_bar(left)
            if x:
                total = total + x * nu.on_bar(right) * m
        return total

    return Functional(rule, GENERAL, _min_degree(mu, nu), f"({mu.name}{symbol}{nu.name})")


def half_prec(mu: Functional, nu: Functional) -> Functional:
    """Left half-shuffle ``(mu (x) nu) delta_prec_plus``."""
    return _half(mu, nu, co._delta_prec_bar_terms, "<")


def half_succ(mu: Functional, nu: Functional) -> Functional:
    """Right half-shuffle ``(mu (x) nu) delta_succ_plus``."""
    return _half(mu, nu, co._delta_succ_bar_terms, ">")


def conv_inverse(Phi: Functional) -> Functional:
    """Convolution inverse of a unital functional, by degree recursion.

    Solves ``X * Phi = eps``: the value of X on a degree-d input depends only
    on values of X in degrees below d.  The inverse of a character is a
    character and is cached on ``Phi``.
    """
    _require_bar_side(Phi)
    if Phi._inverse is not None:
        return Phi._inverse
    if Phi.on_bar(UNIT_BAR) != ONE:
        raise ValueError("only unital functionals are invertible here")
    if Phi.kind == CHARACTER:
        word_terms = co._delta_word_terms

        def rule_word(w: Word):
            total = ZERO
            for left, right, m in word_terms(w):
                if not right:
                    continue
                total = total - inv.on_word(left) * Phi.on_bar(right) * m
            return total

        inv = Functional(rule_word, CHARACTER, Phi.max_degree, f"{Phi.name}^-1")
    else:
        terms = co._delta_bar_terms

        def rule(b: BarWord):
            total = ONE if not b else ZERO
            for left, right, m in terms(b):
                if not right:
                    continue
                total = total - inv.on_bar(left) * Phi.on_bar(right) * m
            return total

        inv = Functional(rule, GENERAL, Phi.max_degree, f"{Phi.name}^-1")
    Phi._inverse = inv
    return inv


def _powers(f: Functional, conv=convolve):
    """Lazily growing list ``[f^0, f^1, ...]`` under the given convolution."""
    cache = [None, f]

    def power(j: int) -> Functional:
        while len(cache) <= j:
            cache.append(conv(cache[-1], f))
        return cache[j]

    return power


def exp_star(lam: Functional) -> Functional:
    """Convolution exponential ``sum_j lam^{*j} / j!`` of an infinitesimal character."""
    if lam.kind != INFINITESIMAL:
        raise KindError("exp_star needs an infinitesimal character")
    power = _powers(lam)

    def rule(w: Word):
        total = ZERO
        for j in range(1, len(w) + 1):
            total = total + power(j).on_word(w) * Fraction(1, factorial(j))
        return total

    return Functional(rule, CHARACTER, lam.max_degree, f"exp*({lam.name})")


def exp_star_t(lam: Functional, t) -> Functional:
    """``exp_star(t * lam)``; ``t`` may be a rational or a scalar such as a symbol."""
    return exp_star(lam.scale(t))


def log_star(Phi: Functional) -> Functional:
    """Convolution logarithm ``sum_j (-1)^{j+1} (Phi - eps)^{*j} / j``."""
    _require_bar_side(Phi)
    if Phi.on_bar(UNIT_BAR) != ONE:
        raise ValueError("log_star needs a unital functional")
    power = _powers(Phi - epsilon())
    gen = Functional(lambda b: _series_on_bar(power, b), GENERAL, Phi.max_degree, "")
    return _declare(gen, INFINITESIMAL, f"log*({Phi.name})")


def _series_on_bar(power, b: BarWord) -> Scalar:
    total = ZERO
    for j in range(1, degree(b) + 1):
        total = total + power(j).on_bar(b) * Fraction((-1) ** (j + 1), j)
    return total


def E_prec(kappa: Functional) -> Functional:
    """Left half-shuffle exponential: the solution of ``Phi = eps + kappa < Phi``."""
    if kappa.kind != INFINITESIMAL:
        raise KindError("E_prec needs an infinitesimal character")
    terms = co._delta_prec_word_terms

    def rule(w: Word):
        total = ZERO
        for left, right, m in terms(w):
            x = kappa.on_word(left)
            if x:
                total = total + x * Phi.on_bar(right) * m
        return total

    Phi = Functional(rule, CHARACTER, kappa.max_degree, f"E<({kappa.name})")
    return Phi


def E_succ(beta: Functional) -> Functional:
    """Right half-shuffle exponential: the solution of ``Phi = eps + Phi > beta``."""
    if beta.kind != INFINITESIMAL:
        raise KindError("E_succ needs an infinitesimal character")
    terms = co._delta_succ_word_terms

    def rule(w: Word):
        total = ZERO
        for left, right, m in terms(w):
            y = beta.on_bar(right)
            if y:
                total = total + Phi.on_word(left) * y * m
        return total

    Phi = Functional(rule, CHARACTER, beta.max_degree, f"E>({beta.name})")
    return Phi


def L_prec(Phi: Functional) -> Functional:
    """Left half-shuffle logarithm ``(Phi - eps) < Phi^-1`` (free cumulants)."""
    gen = half_prec(Phi - epsilon(), conv_inverse(Phi))
    return _declare(gen, INFINITESIMAL, f"L<({Phi.name})")


def L_succ(Phi: Functional) -> Functional:
    """Right half-shuffle logarithm ``Phi^-1 > (Phi - eps)`` (boolean cumulants)."""
    gen = half_succ(conv_inverse(Phi), Phi - epsilon())
    return _declare(gen, INFINITESIMAL, f"L>({Phi.name})")


def theta_adjoint(Phi: Functional, alpha: Functional) -> Functional:
    """Shuffle adjoint action ``Phi^-1 > alpha < Phi``."""
    if alpha.kind != INFINITESIMAL:
        raise KindError("the adjoint action acts on infinitesimal characters")
    gen = half_prec(half_succ(conv_inverse(Phi), alpha), Phi)
    return _declare(gen, INFINITESIMAL, f"Theta[{Phi.name}]({alpha.name})")


# ----------------------------------------------------------------------------
# the commutative shuffle side on T(A)


def _require_word_side(*fs: Functional) -> None:
    for f in fs:
        if f.kind != WORD:
            raise KindError("shuffle operations act on functionals on T(A)")


def word_functional(values: Callable[[Word], object], max_degree=None, name="") -> Functional:
    return Functional(values, WORD, max_degree, name)


def word_epsilon() -> Functional:
    return Functional(lambda w: ONE if not w else ZERO, WORD, None, "eps")


def shuffle_convolve(mu: Functional, nu: Functional) -> Functional:
    """``(mu (x) nu) delta_shuffle`` on T(A)."""
    _require_word_side(mu, nu)
    terms = co._delta_shuffle_terms

    def rule(w: Word):
        total = ZERO
        for left, right, m in terms(w):
            x = mu.on_word(left)
            if x:
                total = total + x * nu.on_word(right) * m
        return total

    return Functional(rule, WORD, _min_degree(mu, nu), f"({mu.name} sh {nu.name})")


def exp_shuffle(c: Functional) -> Functional:
    _require_word_side(c)
    if c.on_word(UNIT_WORD):
        raise ValueError("exp_shuffle needs a functional vanishing on the unit")
    power = _powers(c, shuffle_convolve)

    def rule(w: Word):
        if not w:
            return ONE
        total = ZERO
        for j in range(1, len(w) + 1):
            total = total + power(j).on_word(w) * Fraction(1, factorial(j))
        return total

    return Functional(rule, WORD, c.max_degree, f"exp_sh({c.name})")


def log_shuffle(phi: Functional) -> Functional:
    """Tensor cumulants ``log_shuffle(phi)``."""
    _require_word_side(phi)
    if phi.on_word(UNIT_WORD) != ONE:
        raise ValueError("log_shuffle needs a unital functional")
    power = _powers(phi - word_epsilon(), shuffle_convolve)

    def rule(w: Word):
        total = ZERO
        for j in range(1, len(w) + 1):
            total = total + power(j).on_word(w) * Fraction((-1) ** (j + 1), j)
        return total

    return Functional(rule, WORD, phi.max_degree, f"log_sh({phi.name})")


def shuffle_inverse(phi: Functional) -> Functional:
    """Shuffle inverse of a unital functional on T(A).

    Same values as the Neumann series ``eps + sum_n (-1)^n phi^{(x)n} reduced-delta_{n-1}``
    (see :func:`shuffle_inverse_neumann`), evaluated recursively.
    """
    _require_word_side(phi)
    if phi.on_word(UNIT_WORD) != ONE:
        raise ValueError("shuffle_inverse needs a unital functional")

    # The Neumann sum runs over ordered set partitions of the letters with
    # sign (-1)^(number of blocks); factoring out the first block gives a
    # recursion over subwords.
    terms = co._delta_shuffle_terms

    def rule(w: Word):
        if not w:
            return ONE
        total = ZERO
        for left, right, m in terms(w):
            if not left:
                continue
            x = phi.on_word(left)
            if x:
                total = total - x * inv.on_word(right) * m
        return total

    inv = Functional(rule, WORD, phi.max_degree, f"{phi.name}^-1")
    return inv


def shuffle_inverse_neumann(phi: Functional, w: Word) -> Scalar:
    """One value of the shuffle inverse from the iterated reduced coproduct, term by term."""
    if not w:
        return ONE
    total = ZERO
    for n in range(1, len(w) + 1):
        for legs, c in co.delta_shuffle_iterated(n, w).terms.items():
            term = c
            for leg in legs:
                term = term * phi.on_word(leg[0])
            total = total + term * (-1) ** n
    return total


def functionals_agree(f: Functional, g: Functional, inputs, on_bar: bool = False):
    """First input where ``f`` and ``g`` differ as ``(input, f_value, g_value)``, else None."""
    for x in inputs:
        a = f.on_bar(x) if on_bar else f.on_word(x)
        b = g.on_bar(x) if on_bar else g.on_word(x)
        if a != b:
            return (x, a, b)
    return None
