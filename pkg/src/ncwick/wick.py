"""Wick maps, their inverses, group actions and Wick products.

Linear maps of T(A) and T(T(A)) are :class:`EndoTable` objects: lazily
evaluated, memoized maps from bar-words (or words) to elements.  All four
Wick maps are built from the functional calculus in :mod:`ncwick.functionals`
and can be compared with each other as tables.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial
from typing import Callable, Sequence

from . import coalgebra as co
from . import partitions as parts
from .core import (
    UNIT_BAR,
    UNIT_WORD,
    ZERO,
    BarWord,
    Element,
    Scalar,
    Word,
    _accumulate,
    as_bar,
    concat_elements,
    degree,
)
from .functionals import (
    CHARACTER,
    WORD,
    Functional,
    KindError,
    UndefinedHalfShuffle,
    E_prec,
    L_prec,
    L_succ,
    conv_inverse,
    convolve,
    half_prec,
    half_succ,
    shuffle_inverse,
    word_functional,
)

WICK_KINDS = ("tensor", "free", "boolean", "cfree")


class EndoTable:
    """Linear map into T(T(A)) given by its values on basis elements.

    ``rule`` always receives a bar-word.  With ``domain="word"`` the map is an
    endomorphism of T(A): bar products are rejected, unless
    ``multiplicative=True``, in which case they are sent to the bar product
    of the images of their components.
    """

    def __init__(
        self,
        rule: Callable[[BarWord], Element],
        domain: str = "bar",
        multiplicative: bool = False,
        name: str = "",
    ):
        if domain not in ("word", "bar"):
            raise ValueError("domain must be 'word' or 'bar'")
        self.rule = rule
        self.domain = domain
        self.multiplicative = multiplicative
        self.name = name
        self._cache: dict = {}

    @classmethod
    def from_words(cls, rule: Callable[[Word], Element], multiplicative: bool = False, name: str = "") -> EndoTable:
        return cls(lambda b: rule(b[0] if b else UNIT_WORD), "word", multiplicative, name)

    def on_bar(self, b: BarWord) -> Element:
        val = self._cache.get(b)
        if val is not None:
            return val
        if self.domain == "word" and len(b) > 1:
            if not self.multiplicative:
                raise ValueError(f"{self.name or 'map'} is only defined on T(A)")
            val = Element.unit()
            for w in b:
                val = val * self.on_bar((w,))
        else:
            val = self.rule(b)
        self._cache[b] = val
        return val

    def on_word(self, w: Word) -> Element:
        return self.on_bar(as_bar(w))

    def __call__(self, x) -> Element:
        """Apply to an Element (linearly), a word, or a bar-word."""
        if isinstance(x, Element):
            out: dict = {}
            for b, c in x.terms.items():
                for b2, c2 in self.on_bar(b).terms.items():
                    _accumulate(out, b2, c * c2)
            return Element._raw(out)
        if x and isinstance(x[0][0], int):
            return self.on_word(x)
        return self.on_bar(x)

    # -- linear structure -------------------------------------------------
    def _domain_with(self, other: EndoTable) -> str:
        return "bar" if self.domain == "bar" and other.domain == "bar" else "word"

    def __add__(self, other: EndoTable) -> EndoTable:
        return EndoTable(
            lambda b: self.on_bar(b) + other.on_bar(b),
            self._domain_with(other),
            name=f"({self.name}+{other.name})",
        )

    def __sub__(self, other: EndoTable) -> EndoTable:
        return EndoTable(
            lambda b: self.on_bar(b) - other.on_bar(b),
            self._domain_with(other),
            name=f"({self.name}-{other.name})",
        )

    def scale(self, c) -> EndoTable:
        return EndoTable(lambda b: self.on_bar(b).scale(c), self.domain, name=f"{c}*{self.name}")

    def compose(self, other: EndoTable) -> EndoTable:
        """``self o other``."""
        return EndoTable(lambda b: self(other.on_bar(b)), other.domain, name=f"{self.name}o{other.name}")

    def restricted(self, name: str | None = None) -> EndoTable:
        """The same map, restricted to T(A)."""
        return EndoTable(self.on_bar, "word", name=name or self.name)

    def renamed(self, name: str) -> EndoTable:
        self.name = name
        return self

    def __repr__(self) -> str:
        return f"EndoTable({self.name or '?'}, domain={self.domain})"


def identity() -> EndoTable:
    return EndoTable(lambda b: Element.of_bar(b), name="id")


def unit_counit() -> EndoTable:
    """``e = eta o eps``: the unit goes to 1, everything else to 0."""
    return EndoTable(lambda b: Element.unit() if not b else Element(), name="e")


def maps_agree(f: EndoTable, g: EndoTable, inputs, on_bar: bool = False):
    """First input where the maps differ as ``(input, f(x), g(x))``, else None."""
    for x in inputs:
        a = f.on_bar(x) if on_bar else f.on_word(x)
        b = g.on_bar(x) if on_bar else g.on_word(x)
        if a != b:
            return (x, a, b)
    return None


# ----------------------------------------------------------------------------
# comodule actions


def _coaction(L: EndoTable, Psi: Functional, terms_fn, symbol: str, half: bool) -> EndoTable:
    def rule(b: BarWord) -> Element:
        if half and not b:
            if not L.on_bar(UNIT_BAR).is_zero() and Psi.on_bar(UNIT_BAR):
                raise UndefinedHalfShuffle(f"1 {symbol} 1 is not defined")
            return Element()
        out: dict = {}
        for left, right, m in terms_fn(b):
            c = Psi.on_bar(right)
            if not c:
                continue
            c = c * m
            for b2, c2 in L.on_bar(left).terms.items():
                _accumulate(out, b2, c2 * c)
        return Element._raw(out)

    return EndoTable(rule, L.domain, name=f"({L.name}{symbol}{Psi.name})")


def act(L: EndoTable, Psi: Functional) -> EndoTable:
    """Right action ``L.Psi = (L (x) Psi) delta`` (also the convolution L * Psi)."""
    return _coaction(L, Psi, co._delta_bar_terms, ".", half=False)


def act_prec(L: EndoTable, Psi: Functional) -> EndoTable:
    """``L^Psi = (L (x) Psi) delta_prec_plus``; equals the half-shuffle ``L < Psi``."""
    return _coaction(L, Psi, co._delta_prec_bar_terms, "<", half=True)


def half_succ_map(L: EndoTable, beta: Functional) -> EndoTable:
    """``L > beta = (L (x) beta) delta_succ_plus``."""
    return _coaction(L, beta, co._delta_succ_bar_terms, ">", half=True)


half_prec_map = act_prec


# ----------------------------------------------------------------------------
# the four Wick maps


def wick_tensor(phi: Functional) -> EndoTable:
    """Tensor Wick map ``(id (x) phi^-1) delta_shuffle`` on T(A).

    ``phi`` is the state as a functional on T(A) (see ``moment_map``); its
    shuffle inverse comes from the Neumann series.
    """
    if phi.kind != WORD:
        phi = word_functional(phi.on_word, name=phi.name)
    inv = shuffle_inverse(phi)

    def rule(w: Word) -> Element:
        out: dict = {}
        for left, right, m in co._delta_shuffle_terms(w):
            _accumulate(out, as_bar(left), inv.on_word(right) * m)
        return Element._raw(out)

    return EndoTable.from_words(rule, name="W_T")


def wick_tensor_inverse(phi: Functional) -> EndoTable:
    if phi.kind != WORD:
        phi = word_functional(phi.on_word, name=phi.name)

    def rule(w: Word) -> Element:
        out: dict = {}
        for left, right, m in co._delta_shuffle_terms(w):
            _accumulate(out, as_bar(left), phi.on_word(right) * m)
        return Element._raw(out)

    return EndoTable.from_words(rule, name="W_T^-1")


def tensor_wick_expansion(phi: Functional, w: Word) -> Element:
    """Explicit expansion ``sum_S a_S sum_{pi in P([n]-S)} (-1)^|pi| |pi|! prod phi(a_B)``."""
    n = len(w)
    out: dict = {}
    for split in co.subset_splits(n):
        chosen = set(split.S)
        rest = [i for i in range(n) if i not in chosen]
        coeff = ZERO
        for pi in parts.set_partitions_of(rest):
            term = Scalar.const((-1) ** len(pi) * factorial(len(pi)))
            for B in pi:
                term = term * phi.on_word(tuple(w[i] for i in B))
            coeff = coeff + term
        _accumulate(out, as_bar(tuple(w[i] for i in split.S)), coeff)
    return Element._raw(out)


def wick_free(Phi: Functional) -> EndoTable:
    """Free Wick map ``W = (id (x) Phi^-1) delta`` on all of T(T(A))."""
    inv = conv_inverse(Phi)
    return act(identity(), inv).renamed("W")


def wick_free_inverse(Phi: Functional) -> EndoTable:
    """Compositional inverse ``(id (x) Phi) delta``."""
    return act(identity(), Phi).renamed("W^-1")


def wick_free_from_free_cumulants(kappa: Functional, w: Word) -> Element:
    """Free Wick polynomial from free cumulants.

    ``sum_S a_S sum_pi (-1)^|pi| prod kappa(a_B)`` with pi running over the
    partitions of the complement of S into runs of consecutive positions such
    that pi together with the block S is non-crossing.
    """
    n = len(w)
    out: dict = {}
    for split in co.subset_splits(n):
        chosen = set(split.S)
        rest = [i for i in range(n) if i not in chosen]
        coeff = ZERO
        for pi in parts.interval_partitions_of(rest):
            full = tuple(sorted(pi + ((split.S,) if split.S else ())))
            if not parts.is_noncrossing(full):
                continue
            term = Scalar.const((-1) ** len(pi))
            for B in pi:
                term = term * kappa.on_word(tuple(w[i] for i in B))
            coeff = coeff + term
        _accumulate(out, as_bar(tuple(w[i] for i in split.S)), coeff)
    return Element._raw(out)


def wick_boolean(Phi: Functional) -> EndoTable:
    """Boolean Wick map ``W' = id - id > beta`` with beta the boolean cumulants."""
    beta = L_succ(Phi)
    ident = identity()
    return (ident - half_succ_map(ident, beta)).restricted("W'")


def wick_boolean_explicit(beta: Functional, w: Word) -> Element:
    """``a_1...a_n - sum_j beta(a_1...a_j) a_{j+1}...a_n``."""
    out = Element.of_word(w)
    for j in range(1, len(w) + 1):
        out = out - Element.of_word(w[j:], beta.on_word(w[:j]))
    return out


def wick_cfree(Phi: Functional, Psi: Functional | None) -> EndoTable:
    """Conditionally free Wick map ``e + (W - e) < (Phi * Psi^-1)``."""
    if Psi is None:
        raise ValueError("second state required for the conditionally free Wick map")
    e = unit_counit()
    W = wick_free(Phi)
    twist = convolve(Phi, conv_inverse(Psi))
    return (e + act_prec(W - e, twist)).restricted("W^c")


def cfree_cumulants(Phi: Functional, Psi: Functional | None) -> Functional:
    """Conditionally free cumulants ``R = Psi > beta^phi < Psi^-1``."""
    if Psi is None:
        raise ValueError("second state required for conditionally free cumulants")
    from .functionals import INFINITESIMAL, _declare

    beta = L_succ(Phi)
    gen = half_prec(half_succ(Psi, beta), conv_inverse(Psi))
    return _declare(gen, INFINITESIMAL, f"R[{Phi.name},{Psi.name}]")


def wick_map(kind: str, Phi: Functional, Psi: Functional | None = None) -> EndoTable:
    """The Wick map of the given kind, restricted to T(A)."""
    if kind == "tensor":
        return wick_tensor(Phi)
    if kind == "free":
        return wick_free(Phi)
    if kind == "boolean":
        return wick_boolean(Phi)
    if kind == "cfree":
        return wick_cfree(Phi, Psi)
    raise ValueError(f"unknown Wick kind {kind!r}; expected one of {WICK_KINDS}")


def boolean_telescope(W_prime: EndoTable, beta: Functional, w: Word) -> Element:
    """``sum_{i=0}^{|w|} R^(i)(W')(w)`` with R^(i) the i-fold ``> beta``; equals ``w``.

    The last term ``R^(|w|)(W')(w) = Phi(w) 1`` is the degree-zero part; all
    later terms vanish because beta is infinitesimal.
    """
    total = W_prime.on_word(w)
    current = W_prime
    for _ in range(len(w)):
        current = half_succ_map(current, beta)
        total = total + current.on_word(w)
    return total


def boolean_inverse_expansion(W_prime: EndoTable, Phi: Functional, w: Word) -> Element:
    """``W'(w) + sum_{j=1}^{n} Phi(a_1...a_j) W'(a_{j+1}...a_n)``; equals ``w``."""
    out = W_prime.on_word(w)
    for j in range(1, len(w) + 1):
        out = out + W_prime.on_word(w[j:]).scale(Phi.on_word(w[:j]))
    return out


# ----------------------------------------------------------------------------
# derivations


def zeta(a: int) -> Functional:
    """Infinitesimal character with value 1 on the letter a and 0 on every other word."""
    from .functionals import infinitesimal

    target = ((a,),)
    return infinitesimal(lambda w: 1 if w == target else 0, name=f"zeta_{a}")


def derivation(a: int, x: Element) -> Element:
    """``d_a(x) = (zeta_a (x) id) delta(x)``.

    On a word it removes one occurrence of the letter a at a time and puts a
    bar between the two remaining pieces.
    """
    target = (((a,),),)
    out: dict = {}
    for b, c in x.terms.items():
        for left, right, m in co._delta_bar_terms(b):
            if left == target:
                _accumulate(out, right, c * m)
    return Element._raw(out)


def derivation_map(a: int) -> EndoTable:
    return EndoTable(lambda b: derivation(a, Element.of_bar(b)), name=f"d_{a}")


# ----------------------------------------------------------------------------
# inverses and Wick products


def inverse_map(F: EndoTable) -> EndoTable:
    """Compositional inverse of a unitriangular map on T(A).

    ``F(w) = w + (terms of lower degree)``; the inverse is solved degree by
    degree from ``G(w) = w - G(F(w) - w)``.
    """

    def rule(w: Word) -> Element:
        image = F.on_word(w)
        rest = image - Element.of_word(w)
        if any(degree(b) >= len(w) for b in rest.terms):
            raise ValueError(f"{F.name} is not unitriangular at {w}")
        return Element.of_word(w) - G(rest)

    G = EndoTable.from_words(rule, name=f"{F.name}^-1")
    return G


def wick_product(F: EndoTable, x: Element, y: Element, F_inv: EndoTable | None = None) -> Element:
    """Product transported by F: ``F(F^-1(x) F^-1(y))`` with concatenation in between."""
    if not (x.is_bar_free() and y.is_bar_free()):
        raise ValueError("Wick products are defined on T(A)")
    G = F_inv if F_inv is not None else inverse_map(F)
    return F(concat_elements(G(x), G(y)))


def free_product_closed_form(Phi: Functional, w: Word, w2: Word) -> Element:
    """Closed form of the free Wick product of two words.

    ``w . w2 = sum_{S subset [n+m]} W(a_S) prod Phi(a_K)`` where the K's are the
    connected components of the complement of S taken separately inside the
    two halves.
    """
    W = wick_free(Phi)
    n = len(w)
    full = w + w2
    out = Element()
    for split in co.subset_splits(len(full)):
        chosen = set(split.S)
        coeff = Scalar.const(1)
        for lo, hi in ((0, n), (n, len(full))):
            for comp in _components([i for i in range(lo, hi) if i not in chosen]):
                coeff = coeff * Phi.on_word(tuple(full[i] for i in comp))
        if coeff:
            out = out + W.on_word(tuple(full[i] for i in split.S)).scale(coeff)
    return out


def _components(positions: Sequence[int]) -> list[tuple[int, ...]]:
    comps: list[list[int]] = []
    for i in positions:
        if comps and comps[-1][-1] == i - 1:
            comps[-1].append(i)
        else:
            comps.append([i])
    return [tuple(c) for c in comps]


# ----------------------------------------------------------------------------
# classical univariate oracle


def classical_wick(moments: Sequence, n: int) -> list[list[Fraction]]:
    """Coefficient lists of the classical Wick polynomials W_0..W_n.

    ``moments[k]`` is m_k for k >= 1 (``moments[0]`` is ignored, m_0 = 1).
    Solves ``x^n = sum_j C(n, j) W_j(x) m_{n-j}`` for W_n; entry i of each
    list is the coefficient of x^i.
    """
    m = [Fraction(1)] + [Fraction(v) for v in list(moments)[1:]]
    if len(m) <= n:
        raise ValueError(f"need moments up to order {n}")
    polys: list[list[Fraction]] = []
    for k in range(n + 1):
        p = [Fraction(0)] * (k + 1)
        p[k] = Fraction(1)
        for j in range(k):
            c = comb(k, j) * m[k - j]
            for i, a in enumerate(polys[j]):
                p[i] -= c * a
        polys.append(p)
    return polys
