"""Term representation for A, T(A) and the double tensor algebra T(T(A)).

Terms are plain tuples so that they hash fast and can be shared freely:

* a *letter* is a nonempty tuple of generator indices (a monomial of A),
* a *word* is a tuple of letters (the empty word is the unit of T(A)),
* a *bar-word* is a tuple of nonempty words (the empty bar-word is the unit
  of T(T(A))).

Scalars are exact polynomials with rational coefficients in commuting
symbols such as the moment symbols ``phi[a.b]``.  Elements are finite
linear combinations of bar-words with scalar coefficients.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as _cartesian
from typing import Callable, Iterable, Iterator, Mapping, Sequence, Tuple, Union

Letter = Tuple[int, ...]
Word = Tuple[Letter, ...]
BarWord = Tuple[Word, ...]
Symbol = Tuple[str, Tuple[int, ...]]
Monomial = Tuple[Tuple[Symbol, int], ...]
Rational = Union[int, Fraction]

UNIT_WORD: Word = ()
UNIT_BAR: BarWord = ()

PHI = "phi"
PSI = "psi"


class Alphabet:
    """Generator names, indexed densely from 0."""

    def __init__(self, names: Iterable[str] = ()):
        self.names: list[str] = []
        self._index: dict[str, int] = {}
        for name in names:
            self.add(name)

    def add(self, name: str) -> int:
        if name in self._index:
            raise ValueError(f"duplicate generator {name!r}")
        self._index[name] = len(self.names)
        self.names.append(name)
        return self._index[name]

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown generator {name!r}") from None

    def name(self, index: int) -> str:
        if 0 <= index < len(self.names):
            return self.names[index]
        return f"a{index + 1}"

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return len(self.names)

    def __repr__(self) -> str:
        return f"Alphabet({self.names!r})"


# ----------------------------------------------------------------------------
# words and bar-words


def letter(*generators: int, commutative: bool = False) -> Letter:
    if not generators:
        raise ValueError("a letter needs at least one generator")
    return tuple(sorted(generators)) if commutative else tuple(generators)


def word(*generators: int) -> Word:
    """Word of single-generator letters, ``word(0, 1) == a1 a2``."""
    return tuple((g,) for g in generators)


def as_bar(w: Word) -> BarWord:
    return (w,) if w else UNIT_BAR


def concat(w: Word, w2: Word) -> Word:
    return w + w2


def bar_concat(b: BarWord, b2: BarWord) -> BarWord:
    return b + b2


def subword(w: Word, positions: Iterable[int]) -> Word:
    return tuple(w[i] for i in positions)


def degree(b: BarWord) -> int:
    return sum(len(w) for w in b)


def evaluate_in_A(w: Word, commutative: bool = False) -> Letter:
    """Multiply the letters of ``w`` inside A, giving a single letter."""
    if not w:
        raise ValueError("cannot evaluate the empty word in A")
    factors = tuple(g for lt in w for g in lt)
    return tuple(sorted(factors)) if commutative else factors


def flatten(w: Word, commutative: bool = False) -> Tuple[int, ...]:
    """Moment key of a word: the generator string of its product in A."""
    factors = tuple(g for lt in w for g in lt)
    return tuple(sorted(factors)) if commutative else factors


def term_order(b: BarWord):
    return (degree(b), len(b), b)


def moment_symbol(w: Word, tag: str = PHI, commutative: bool = False) -> Symbol:
    if not w:
        raise ValueError("the unit has no moment symbol")
    return (tag, flatten(w, commutative))


# ----------------------------------------------------------------------------
# scalars


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    powers = dict(m1)
    for s, k in m2:
        powers[s] = powers.get(s, 0) + k
    return tuple(sorted(powers.items()))


def _q(c) -> Rational:
    """Canonical exact coefficient: ``int`` when integral, else ``Fraction``."""
    if type(c) is Fraction:
        return c.numerator if c.denominator == 1 else c
    if type(c) is int:
        return c
    return _q(Fraction(c))


class Scalar:
    """Exact polynomial with rational coefficients in commuting symbols.

    Integral coefficients are stored as ``int`` and the others as
    ``Fraction``; the two compare and hash alike, ints are just faster.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Rational] | None = None):
        # callers hand over ownership; zero coefficients are dropped here
        if terms:
            self.terms = {m: _q(c) for m, c in terms.items() if c}
        else:
            self.terms = {}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> Scalar:
        s = cls.__new__(cls)
        s.terms = terms
        s._hash = None
        return s

    @classmethod
    def const(cls, q: Rational) -> Scalar:
        return cls._raw({(): _q(q)} if q else {})

    @classmethod
    def var(cls, sym: Symbol, power: int = 1) -> Scalar:
        return cls._raw({((sym, power),): 1})

    # -- coercion helpers ---------------------------------------------------
    @staticmethod
    def coerce(x) -> Scalar:
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, Fraction)):
            return Scalar.const(x)
        raise TypeError(f"cannot use {type(x).__name__} as a scalar")

    # -- queries ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def constant(self) -> Fraction:
        return Fraction(self.terms.get((), 0))

    def symbols(self) -> set[Symbol]:
        return {s for m in self.terms for s, _ in m}

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: (sum(k for _, k in kv[0]), kv[0]))

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other) -> Scalar:
        other = _scalar_or_none(other)
        if other is None:
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = _q(v) if type(v) is Fraction else v
            else:
                out.pop(m, None)
        return Scalar._raw(out)

    __radd__ = __add__

    def __neg__(self) -> Scalar:
        return Scalar._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> Scalar:
        other = _scalar_or_none(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> Scalar:
        return (-self) + other

    def __mul__(self, other) -> Scalar:
        if isinstance(other, (int, Fraction)):
            if not other:
                return ZERO
            return Scalar._raw({m: _q(c * other) for m, c in self.terms.items()})
        if not isinstance(other, Scalar):
            return NotImplemented
        if not self.terms or not other.terms:
            return ZERO
        if len(other.terms) == 1 and () in other.terms:
            return self * other.terms[()]
        if len(self.terms) == 1 and () in self.terms:
            return other * self.terms[()]
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = _q(v) if type(v) is Fraction else v
                else:
                    del out[m]
        return Scalar._raw(out)

    __rmul__ = __mul__

    def __truediv__(self, q: Rational) -> Scalar:
        return self * (Fraction(1) / Fraction(q))

    def __pow__(self, k: int) -> Scalar:
        out = ONE
        for _ in range(k):
            out = out * self
        return out

    def substitute(self, sym: Symbol, value) -> Scalar:
        """Replace a symbol by a scalar value."""
        value = Scalar.coerce(value)
        out = ZERO
        for m, c in self.terms.items():
            rest = tuple(p for p in m if p[0] != sym)
            k = sum(e for s, e in m if s == sym)
            out = out + Scalar._raw({rest: c}) * value ** k
        return out

    def coefficients_in(self, sym: Symbol) -> list[Scalar]:
        """Coefficients of the powers of ``sym`` (index = power)."""
        coeffs: dict[int, dict] = {}
        for m, c in self.terms.items():
            k = sum(e for s, e in m if s == sym)
            rest = tuple(p for p in m if p[0] != sym)
            coeffs.setdefault(k, {})[rest] = c
        top = max(coeffs, default=-1)
        return [Scalar._raw(coeffs.get(k, {})) for k in range(top + 1)]

    # -- comparison -------------------------------------------------------
    def __eq__(self, other) -> bool:
        other = _scalar_or_none(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        from .cli.formatting import format_scalar

        return f"Scalar({format_scalar(self)})"


def _scalar_or_none(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)):
        return Scalar.const(x)
    return None


ZERO = Scalar._raw({})
ONE = Scalar._raw({(): 1})


def phi(*generators: int, tag: str = PHI) -> Scalar:
    """Moment symbol ``phi[a_i1 . ... . a_ik]`` as a scalar."""
    return Scalar.var((tag, tuple(generators)))


# ----------------------------------------------------------------------------
# elements of T(T(A)) and tensors


class Element:
    """Finite linear combination of bar-words with scalar coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[BarWord, object] | None = None):
        out = {}
        if terms:
            for b, c in terms.items():
                c = Scalar.coerce(c)
                if c:
                    out[b] = c
        self.terms: dict[BarWord, Scalar] = out

    @classmethod
    def _raw(cls, terms: dict) -> Element:
        e = cls.__new__(cls)
        e.terms = terms
        return e

    @classmethod
    def of_word(cls, w: Word, coeff=1) -> Element:
        return cls({as_bar(w): coeff})

    @classmethod
    def of_bar(cls, b: BarWord, coeff=1) -> Element:
        return cls({b: coeff})

    @classmethod
    def unit(cls) -> Element:
        return cls({UNIT_BAR: 1})

    @classmethod
    def from_terms(cls, pairs: Iterable[tuple[BarWord, object]]) -> Element:
        acc: dict[BarWord, Scalar] = {}
        for b, c in pairs:
            _accumulate(acc, b, Scalar.coerce(c))
        return cls._raw(acc)

    # -- queries ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_bar_free(self) -> bool:
        return all(len(b) <= 1 for b in self.terms)

    def degree(self) -> int:
        return max((degree(b) for b in self.terms), default=-1)

    def coefficient(self, b: BarWord) -> Scalar:
        return self.terms.get(b, ZERO)

    def word_coefficient(self, w: Word) -> Scalar:
        return self.terms.get(as_bar(w), ZERO)

    def sorted_terms(self) -> list[tuple[BarWord, Scalar]]:
        return sorted(self.terms.items(), key=lambda kv: term_order(kv[0]))

    def __iter__(self) -> Iterator[tuple[BarWord, Scalar]]:
        return iter(self.sorted_terms())

    def __len__(self) -> int:
        return len(self.terms)

    def normalize(self) -> Element:
        return Element(self.terms)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other: Element) -> Element:
        if not isinstance(other, Element):
            return NotImplemented
        out = dict(self.terms)
        for b, c in other.terms.items():
            _accumulate(out, b, c)
        return Element._raw(out)

    def __neg__(self) -> Element:
        return Element._raw({b: -c for b, c in self.terms.items()})

    def __sub__(self, other: Element) -> Element:
        if not isinstance(other, Element):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> Element:
        c = Scalar.coerce(c)
        if not c:
            return Element._raw({})
        return Element._raw({b: v * c for b, v in self.terms.items() if v * c})

    def __mul__(self, other):
        """Scalar multiple, or the bar product of T(T(A)) for two elements."""
        if isinstance(other, Element):
            out: dict[BarWord, Scalar] = {}
            for b1, c1 in self.terms.items():
                for b2, c2 in other.terms.items():
                    _accumulate(out, b1 + b2, c1 * c2)
            return Element._raw(out)
        if isinstance(other, (Scalar, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        from .cli.formatting import format_element

        return f"Element({format_element(self)})"


def _accumulate(acc: dict, key, c: Scalar) -> None:
    if not c:
        return
    old = acc.get(key)
    if old is None:
        acc[key] = c
        return
    v = old + c
    if v:
        acc[key] = v
    else:
        del acc[key]


def concat_elements(x: Element, y: Element) -> Element:
    """Concatenation product of two bar-free elements of T(A)."""
    out: dict[BarWord, Scalar] = {}
    for b1, c1 in x.terms.items():
        if len(b1) > 1:
            raise ValueError("concatenation needs bar-free elements")
        w1 = b1[0] if b1 else UNIT_WORD
        for b2, c2 in y.terms.items():
            if len(b2) > 1:
                raise ValueError("concatenation needs bar-free elements")
            w2 = b2[0] if b2 else UNIT_WORD
            _accumulate(out, as_bar(w1 + w2), c1 * c2)
    return Element._raw(out)


def map_words(x: Element, fn: Callable[[Word], Element]) -> Element:
    """Extend a word-level linear map to bar-free elements."""
    out: dict[BarWord, Scalar] = {}
    for b, c in x.terms.items():
        if len(b) > 1:
            raise ValueError("expected a bar-free element")
        for b2, c2 in fn(b[0] if b else UNIT_WORD).terms.items():
            _accumulate(out, b2, c * c2)
    return Element._raw(out)


def evaluate_element_in_A(x: Element, commutative: bool = False) -> Element:
    """Apply ev: a_1...a_n -> a_1 . ... . a_n termwise to a bar-free element."""
    out: dict[BarWord, Scalar] = {}
    for b, c in x.terms.items():
        if len(b) > 1:
            raise ValueError("expected a bar-free element")
        w = b[0] if b else UNIT_WORD
        image = ((evaluate_in_A(w, commutative),),) if w else UNIT_BAR
        _accumulate(out, image, c)
    return Element._raw(out)


class Tensor:
    """Linear combination of k-fold tensors of bar-words.

    Keys are tuples ``(b_1, ..., b_k)``; every coproduct returns a ``Tensor``
    of arity two (a *tensor pair*).
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple, object] | None = None):
        out = {}
        if terms:
            for k, c in terms.items():
                c = Scalar.coerce(c)
                if c:
                    out[k] = c
        self.terms: dict[tuple, Scalar] = out

    @classmethod
    def _raw(cls, terms: dict) -> Tensor:
        t = cls.__new__(cls)
        t.terms = terms
        return t

    @classmethod
    def from_terms(cls, pairs: Iterable[tuple[tuple, object]]) -> Tensor:
        acc: dict = {}
        for k, c in pairs:
            _accumulate(acc, k, Scalar.coerce(c))
        return cls._raw(acc)

    def arity(self) -> int | None:
        for k in self.terms:
            return len(k)
        return None

    def __add__(self, other: Tensor) -> Tensor:
        out = dict(self.terms)
        for k, c in other.terms.items():
            _accumulate(out, k, c)
        return Tensor._raw(out)

    def __neg__(self) -> Tensor:
        return Tensor._raw({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: Tensor) -> Tensor:
        return self + (-other)

    def __mul__(self, other):
        """Legwise bar product, or scalar multiple."""
        if isinstance(other, Tensor):
            out: dict = {}
            for k1, c1 in self.terms.items():
                for k2, c2 in other.terms.items():
                    key = tuple(x + y for x, y in zip(k1, k2))
                    _accumulate(out, key, c1 * c2)
            return Tensor._raw(out)
        c = Scalar.coerce(other)
        return Tensor._raw({k: v * c for k, v in self.terms.items() if v * c})

    __rmul__ = __mul__

    def swap(self) -> Tensor:
        return Tensor._raw({tuple(reversed(k)): c for k, c in self.terms.items()})

    def apply_leg(self, i: int, fn: Callable[[BarWord], Tensor]) -> Tensor:
        """Replace leg ``i`` by the tensor ``fn(leg)``, raising the arity."""
        out: dict = {}
        for k, c in self.terms.items():
            for k2, c2 in fn(k[i]).terms.items():
                _accumulate(out, k[:i] + k2 + k[i + 1:], c * c2)
        return Tensor._raw(out)

    def contract(self, fn: Callable[[tuple], Element]) -> Element:
        """Apply a multilinear map legwise and sum, e.g. a multiplication."""
        out: dict[BarWord, Scalar] = {}
        for k, c in self.terms.items():
            for b, c2 in fn(k).terms.items():
                _accumulate(out, b, c * c2)
        return Element._raw(out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tensor):
            return NotImplemented
        return self.terms == other.terms

    def __len__(self) -> int:
        return len(self.terms)

    def sorted_terms(self) -> list[tuple[tuple, Scalar]]:
        return sorted(self.terms.items(), key=lambda kv: tuple(term_order(b) for b in kv[0]))

    def __repr__(self) -> str:
        from .cli.formatting import format_tensor

        return f"Tensor({format_tensor(self)})"


TensorPair = Tensor


def words_up_to(n_generators: int, max_degree: int, min_degree: int = 0) -> list[Word]:
    """All words in single-generator letters with degree in the given range."""
    out: list[Word] = []
    for d in range(min_degree, max_degree + 1):
        for gens in _cartesian(range(n_generators), repeat=d):
            out.append(word(*gens))
    return out


def distinct_word(n: int) -> Word:
    """The generic word a1 a2 ... an with pairwise distinct letters."""
    return word(*range(n))


def bar_products(words: Sequence[Word], max_degree: int, max_parts: int = 3) -> list[BarWord]:
    """Bar-words assembled from the given nonempty words up to a total degree."""
    pool = [w for w in words if w]
    out: list[BarWord] = []
    for k in range(2, max_parts + 1):
        for combo in _cartesian(pool, repeat=k):
            if sum(len(w) for w in combo) <= max_degree:
                out.append(tuple(combo))
    return out
