"""Identity suites behind ``ncwick verify``.

Every suite compares two independently computed sides of an identity on a
finite set of inputs and records the first input where they differ.  All
modules are reached through their module objects, so a monkeypatched
implementation is what gets verified.
"""

from __future__ import annotations

import random
import traceback
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable, Iterable

from .. import coalgebra as co
from .. import core
from .. import functionals as fn
from .. import partitions as parts
from .. import wick as wk
from ..core import ONE, ZERO, Alphabet, Element, Scalar, Tensor, as_bar, word, words_up_to
from . import formatting as fmt

GENERATORS = 2


@dataclass
class Failure:
    suite: str
    check: str
    input: str
    left: str
    right: str

    def render(self, seed: int, max_degree: int) -> str:
        return "\n".join(
            [
                f"FAIL {self.suite} / {self.check}",
                f"  input: {self.input}",
                f"  left:  {self.left}",
                f"  right: {self.right}",
                f"  replay: ncwick verify --suite {self.suite} --max-degree {max_degree} --seed {seed}",
            ]
        )


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: list[Failure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


class Context:
    """Inputs, states and the failure log shared by the checks of one suite."""

    def __init__(self, suite: str, max_degree: int, seed: int):
        self.suite = suite
        self.max_degree = max_degree
        self.seed = seed
        self.alphabet = Alphabet()
        self.result = SuiteResult(suite)
        self.phi_state = fn.State("phi")
        self.psi_state = fn.State("psi")
        self.Phi = fn.extend_state(self.phi_state)
        self.Psi = fn.extend_state(self.psi_state)
        self.phi_word = fn.moment_map(self.phi_state)

    # -- inputs -----------------------------------------------------------
    def words(self, max_degree: int | None = None, min_degree: int = 1, cap: int | None = None) -> list:
        """Words over two generators plus the generic word with distinct letters."""
        d = self.max_degree if max_degree is None else max_degree
        if cap is not None:
            d = min(d, cap)
        out = words_up_to(GENERATORS, d, min_degree)
        for n in range(max(3, min_degree), d + 1):
            out.append(core.distinct_word(n))
        return out

    def bars(self, max_degree: int | None = None, cap: int | None = None, word_degree: int = 2) -> list:
        d = self.max_degree if max_degree is None else max_degree
        if cap is not None:
            d = min(d, cap)
        return core.bar_products(words_up_to(GENERATORS, min(word_degree, d), 1), d, 3)

    def rng(self, tag: str) -> random.Random:
        return random.Random(f"{self.seed}:{self.suite}:{tag}")

    # -- rendering --------------------------------------------------------
    def show(self, x) -> str:
        a = self.alphabet
        if isinstance(x, Element):
            return fmt.format_element(x, a)
        if isinstance(x, Scalar):
            return fmt.format_scalar(x, a)
        if isinstance(x, Tensor):
            return fmt.format_tensor(x, a)
        if isinstance(x, tuple) and x and isinstance(x[0], tuple) and x[0] and isinstance(x[0][0], int):
            return fmt.format_word(x, a)
        if isinstance(x, tuple) and x and isinstance(x[0], tuple) and x[0] and isinstance(x[0][0], tuple):
            return fmt.format_barword(x, a)
        if x == ():
            return "1"
        if isinstance(x, tuple):
            return ", ".join(self.show(y) for y in x)
        return repr(x)

    # -- checks -----------------------------------------------------------
    def compare(self, check: str, inputs: Iterable, left: Callable, right: Callable) -> bool:
        """``left(x) == right(x)`` for every input; logs the first counterexample."""
        self.result.checks += 1
        for x in inputs:
            try:
                a = left(x)
                b = right(x)
            except Exception as exc:  # a crash is a counterexample too
                self._fail(check, x, f"raised {type(exc).__name__}: {exc}", _last_frame(exc))
                return False
            if a != b:
                self._fail(check, x, self.show(a), self.show(b))
                return False
        return True

    def expect(self, check: str, x, condition: Callable[[], bool], detail: Callable[[], str] = lambda: "") -> bool:
        self.result.checks += 1
        try:
            ok = condition()
        except Exception as exc:
            self._fail(check, x, f"raised {type(exc).__name__}: {exc}", _last_frame(exc))
            return False
        if not ok:
            self._fail(check, x, "condition violated", detail())
        return ok

    def _fail(self, check: str, x, left: str, right: str) -> None:
        self.result.failures.append(Failure(self.suite, check, self.show(x), left, right))


def _last_frame(exc: Exception) -> str:
    tb = traceback.extract_tb(exc.__traceback__)
    if not tb:
        return ""
    f = tb[-1]
    return f"at {f.filename.rsplit('/', 1)[-1]}:{f.lineno} in {f.name}"


SUITES: dict[str, tuple[str, Callable[[Context], None]]] = {}


def suite(name: str, description: str):
    def register(f: Callable[[Context], None]):
        SUITES[name] = (description, f)
        return f

    return register


# ----------------------------------------------------------------------------
# core


def _random_scalar(rng: random.Random) -> Scalar:
    syms = [("phi", (0,)), ("phi", (1,)), ("phi", (0, 1)), ("psi", (0,))]
    out = ZERO
    for _ in range(rng.randint(0, 3)):
        c = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        mono = Scalar.const(c)
        for _ in range(rng.randint(0, 2)):
            mono = mono * Scalar.var(rng.choice(syms))
        out = out + mono
    return out


@suite("core", "normal forms, moment-symbol collisions and the scalar ring")
def _core(ctx: Context) -> None:
    rng = ctx.rng("elements")
    pool = ctx.words(cap=4, min_degree=0)
    elems = []
    for _ in range(30):
        e = Element()
        for _ in range(rng.randint(0, 4)):
            b = tuple(w for w in (rng.choice(pool), rng.choice(pool)) if w)
            e = e + Element.of_bar(b, _random_scalar(rng))
        elems.append(e)
    ctx.compare("normalize idempotent", elems, lambda e: e.normalize().normalize(), lambda e: e.normalize())
    ctx.compare("normalize keeps values", elems, lambda e: e.normalize(), lambda e: e)

    letters = [(0,), (1,), (0, 1), (1, 0, 1)]
    mixed = []
    for n in range(1, min(ctx.max_degree, 3) + 1):
        for combo in core._cartesian(letters, repeat=n):
            mixed.append(tuple(combo))
    ctx.compare(
        "moment symbol of a word equals that of its evaluation",
        mixed,
        lambda w: core.moment_symbol(w),
        lambda w: core.moment_symbol((core.evaluate_in_A(w),)),
    )

    srng = ctx.rng("scalars")
    triples = [tuple(_random_scalar(srng) for _ in range(3)) for _ in range(40)]
    ctx.compare("addition commutes", triples, lambda t: t[0] + t[1], lambda t: t[1] + t[0])
    ctx.compare("multiplication commutes", triples, lambda t: t[0] * t[1], lambda t: t[1] * t[0])
    ctx.compare("addition associates", triples, lambda t: (t[0] + t[1]) + t[2], lambda t: t[0] + (t[1] + t[2]))
    ctx.compare("multiplication associates", triples, lambda t: (t[0] * t[1]) * t[2], lambda t: t[0] * (t[1] * t[2]))
    ctx.compare("distributivity", triples, lambda t: t[0] * (t[1] + t[2]), lambda t: t[0] * t[1] + t[0] * t[2])
    ctx.compare("additive inverse", triples, lambda t: t[0] - t[0], lambda t: ZERO)
    ctx.compare("multiplicative unit", triples, lambda t: t[0] * ONE, lambda t: t[0])
    ctx.expect(
        "no stored zero coefficients",
        "random products",
        lambda: all(c != 0 for t in triples for c in (t[0] * t[1] - t[2]).terms.values()),
    )


# ----------------------------------------------------------------------------
# coalgebra


@suite("coalgebra", "coassociativity, splitting, compatibility, antipode and grading")
def _coalgebra(ctx: Context) -> None:
    words = ctx.words()
    nonempty_bars = [as_bar(w) for w in words] + ctx.bars()
    bars = [()] + nonempty_bars

    ctx.compare(
        "coassociativity of delta",
        bars,
        lambda b: co.delta_on_barword(b).apply_leg(0, co.delta_on_barword),
        lambda b: co.delta_on_barword(b).apply_leg(1, co.delta_on_barword),
    )
    ctx.compare(
        "delta = delta_prec_plus + delta_succ_plus",
        nonempty_bars,
        lambda b: co.delta_on_barword(b),
        lambda b: co.delta_prec_plus(b, bar=True) + co.delta_succ_plus(b, bar=True),
    )
    pairs = [(x, y) for x in nonempty_bars for y in nonempty_bars if core.degree(x) + core.degree(y) <= min(ctx.max_degree, 5)]
    pairs = pairs[:: max(1, len(pairs) // 200)]
    ctx.compare(
        "compatibility of delta_succ_plus with the bar product",
        pairs,
        lambda p: co.delta_succ_plus(p[0] + p[1], bar=True),
        lambda p: co.delta_succ_plus(p[0], bar=True) * co.delta_on_barword(p[1]),
    )
    ctx.compare(
        "compatibility of delta_prec_plus with the bar product",
        pairs,
        lambda p: co.delta_prec_plus(p[0] + p[1], bar=True),
        lambda p: co.delta_prec_plus(p[0], bar=True) * co.delta_on_barword(p[1]),
    )
    all_words = ctx.words(min_degree=0)
    ctx.compare("unshuffle coproduct is cocommutative", all_words, lambda w: co.delta_shuffle(w).swap(), co.delta_shuffle)

    def counit_unit(w):
        return Element.unit() if not w else Element()

    def left_antipode(w):
        return co.delta_shuffle(w).contract(lambda k: co.antipode_shuffle(k[0], bar=True) * Element.of_bar(k[1]))

    def right_antipode(w):
        return co.delta_shuffle(w).contract(lambda k: Element.of_bar(k[0]) * co.antipode_shuffle(k[1], bar=True))

    small = ctx.words(min_degree=0, cap=5)
    ctx.compare("m(S (x) id) unshuffle = unit counit", small, left_antipode, counit_unit)
    ctx.compare("m(id (x) S) unshuffle = unit counit", small, right_antipode, counit_unit)

    def graded(t: Tensor, d: int) -> bool:
        return all(sum(core.degree(b) for b in k) == d for k in t.terms)

    ctx.expect(
        "coproducts preserve degree",
        "all inputs",
        lambda: all(
            graded(co.delta_on_barword(b), core.degree(b))
            and graded(co.delta_prec_plus(b, bar=True), core.degree(b))
            and graded(co.delta_succ_plus(b, bar=True), core.degree(b))
            for b in nonempty_bars
        )
        and all(graded(co.delta_shuffle(w), len(w)) for w in all_words),
    )


@suite("unshuffle-axioms", "the three unshuffle coalgebra axioms and the splitting of delta")
def _unshuffle(ctx: Context) -> None:
    words = [as_bar(w) for w in ctx.words()]
    ctx.compare(
        "(D< (x) id) D< = (id (x) Dbar) D<",
        words,
        lambda b: co.delta_prec(b).apply_leg(0, co.delta_prec),
        lambda b: co.delta_prec(b).apply_leg(1, co.delta_bar),
    )
    ctx.compare(
        "(D> (x) id) D< = (id (x) D<) D>",
        words,
        lambda b: co.delta_prec(b).apply_leg(0, co.delta_succ),
        lambda b: co.delta_succ(b).apply_leg(1, co.delta_prec),
    )
    ctx.compare(
        "(Dbar (x) id) D> = (id (x) D>) D>",
        words,
        lambda b: co.delta_succ(b).apply_leg(0, co.delta_bar),
        lambda b: co.delta_succ(b).apply_leg(1, co.delta_succ),
    )
    ctx.compare(
        "delta = delta_prec_plus + delta_succ_plus on words",
        [w[0] for w in words],
        co.delta,
        lambda w: co.delta_prec_plus(w) + co.delta_succ_plus(w),
    )


# ----------------------------------------------------------------------------
# functionals


def shuffle_axiom_inputs(ctx: Context, cap: int = 5) -> list:
    return [as_bar(w) for w in ctx.words(cap=cap)] + ctx.bars(cap=min(cap, 4))


def random_triples(ctx: Context, count: int, cap: int = 5):
    return [
        tuple(fn.random_infinitesimal(f"{ctx.seed}:{i}:{k}", cap) for k in "abc") for i in range(count)
    ]


@suite("shuffle-axioms", "half-shuffle axioms on seeded random infinitesimal characters")
def _shuffle_axioms(ctx: Context) -> None:
    cap = min(ctx.max_degree, 5)
    inputs = shuffle_axiom_inputs(ctx, cap)
    for i, (a, b, c) in enumerate(random_triples(ctx, 50, cap)):
        tag = f"triple {i}"
        ctx.compare(
            f"(a<b)<c = a<(b*c) [{tag}]",
            inputs,
            fn.half_prec(fn.half_prec(a, b), c).on_bar,
            fn.half_prec(a, fn.convolve(b, c)).on_bar,
        )
        ctx.compare(
            f"(a>b)<c = a>(b<c) [{tag}]",
            inputs,
            fn.half_prec(fn.half_succ(a, b), c).on_bar,
            fn.half_succ(a, fn.half_prec(b, c)).on_bar,
        )
        ctx.compare(
            f"a>(b>c) = (a*b)>c [{tag}]",
            inputs,
            fn.half_succ(a, fn.half_succ(b, c)).on_bar,
            fn.half_succ(fn.convolve(a, b), c).on_bar,
        )
        if ctx.result.failures:
            return


@suite("exponentials", "exponentials, logarithms, inverses and the adjoint action")
def _exponentials(ctx: Context) -> None:
    Phi = ctx.Phi
    words = ctx.words(min_degree=0)
    rho = fn.log_star(Phi)
    kappa = fn.L_prec(Phi)
    beta = fn.L_succ(Phi)
    inv = fn.conv_inverse(Phi)
    eps = fn.epsilon()

    ctx.compare("Phi = exp*(rho)", words, Phi.on_word, fn.exp_star(rho).on_word)
    ctx.compare("Phi = E<(kappa)", words, Phi.on_word, fn.E_prec(kappa).on_word)
    ctx.compare("Phi = E>(beta)", words, Phi.on_word, fn.E_succ(beta).on_word)
    ctx.compare("Phi^-1 = exp*(-rho)", words, inv.on_word, fn.exp_star(-rho).on_word)
    ctx.compare("Phi^-1 = E>(-kappa)", words, inv.on_word, fn.E_succ(-kappa).on_word)
    ctx.compare("Phi^-1 = E<(-beta)", words, inv.on_word, fn.E_prec(-beta).on_word)
    ctx.compare(
        "Phi^-1 * Phi = eps",
        words,
        fn.convolve(inv, Phi).on_word,
        eps.on_word,
    )
    ctx.compare("Phi^-1 = eps - Phi^-1 > kappa", words, inv.on_word, (eps - fn.half_succ(inv, kappa)).on_word)
    ctx.compare("Phi^-1 = eps - beta < Phi^-1", words, inv.on_word, (eps - fn.half_prec(beta, inv)).on_word)
    ctx.compare("beta = Theta_Phi(kappa)", words, beta.on_word, fn.theta_adjoint(Phi, kappa).on_word)
    ctx.compare("kappa = Phi > beta < Phi^-1", words, kappa.on_word, fn.half_prec(fn.half_succ(Phi, beta), inv).on_word)

    bars = ctx.bars(cap=min(ctx.max_degree, 4))
    for label, f in (("log*", rho), ("L<", kappa), ("L>", beta), ("Theta", fn.theta_adjoint(Phi, kappa))):
        ctx.compare(
            f"{label} of a character is infinitesimal",
            [()] + bars,
            f.as_general().on_bar,
            lambda b: ZERO,
        )
    conv = fn.convolve(Phi, ctx.Psi)
    general = fn.convolve(Phi.as_general(), ctx.Psi.as_general())
    ctx.expect("characters convolve to a character", "Phi * Psi", lambda: conv.kind == fn.CHARACTER)
    ctx.compare("convolution of characters is multiplicative", bars, general.on_bar, conv.on_bar)


@suite("bch", "right half-shuffle Baker-Campbell-Hausdorff formula")
def _bch(ctx: Context) -> None:
    cap = min(ctx.max_degree, 5)
    inputs = ctx.words(cap=cap)
    for i in range(20):
        a1 = fn.random_infinitesimal(f"{ctx.seed}:bch:{i}:1", cap)
        a2 = fn.random_infinitesimal(f"{ctx.seed}:bch:{i}:2", cap)
        X, Y = fn.E_succ(a1), fn.E_succ(a2)
        left = fn.L_succ(fn.convolve(X, Y))
        right = a2 + fn.half_prec(fn.half_succ(fn.conv_inverse(Y), a1), Y)
        if not ctx.compare(f"L>(E>(a1) * E>(a2)) = a2 + Theta(a1) [pair {i}]", inputs, left.on_word, right.on_word):
            return


# ----------------------------------------------------------------------------
# partitions


@suite("partitions", "lattice sizes and the four moment-cumulant oracles")
def _partitions(ctx: Context) -> None:
    n_max = 8
    ns = list(range(n_max + 1))
    ctx.compare("|P(n)| = Bell(n)", ns, lambda n: len(parts.enumerate_P(n)), parts.bell)
    ctx.compare("|NC(n)| = Catalan(n)", ns, lambda n: len(parts.enumerate_NC(n)), parts.catalan)
    ctx.compare("|Int(n)| = 2^(n-1)", ns[1:], lambda n: len(parts.enumerate_Int(n)), lambda n: 2 ** (n - 1))
    ctx.compare(
        "interval partitions = non-crossing partitions without inner blocks",
        ns,
        lambda n: set(parts.enumerate_Int(n)),
        lambda n: {p for p in parts.enumerate_NC(n) if not parts.inner_outer(p)[1]},
    )

    Phi = ctx.Phi
    words = ctx.words()
    ctx.compare(
        "free moment-cumulant sum",
        words,
        Phi.on_word,
        lambda w: parts.moments_from_cumulants("free", fn.L_prec(Phi).on_word, w),
    )
    beta = fn.L_succ(Phi)
    ctx.compare("boolean moment-cumulant sum", words, Phi.on_word, lambda w: parts.moments_from_cumulants("boolean", beta.on_word, w))
    rho = fn.log_star(Phi)
    ctx.compare("monotone moment-cumulant sum", words, Phi.on_word, lambda w: parts.moments_from_cumulants("monotone", rho.on_word, w))
    c = fn.log_shuffle(ctx.phi_word)
    ctx.compare("tensor moment-cumulant sum", words, ctx.phi_word.on_word, lambda w: parts.moments_from_cumulants("set", c.on_word, w))
    ctx.compare(
        "boolean recursion agrees with L>",
        ctx.words(),
        beta.on_word,
        lambda w: parts.boolean_recursion(ctx.phi_word.on_word, w)[w],
    )


@suite("cfree", "conditionally free cumulants and their degenerations")
def _cfree(ctx: Context) -> None:
    Phi, Psi = ctx.Phi, ctx.Psi
    words = ctx.words(cap=5)
    R = wk.cfree_cumulants(Phi, Psi)
    kpsi = fn.L_prec(Psi)
    ctx.compare(
        "moments from outer R and inner kappa^psi",
        words,
        Phi.on_word,
        lambda w: parts.moments_from_cfree(R.on_word, kpsi.on_word, w),
    )
    ctx.compare("R[phi,phi] = kappa", words, wk.cfree_cumulants(Phi, Phi).on_word, fn.L_prec(Phi).on_word)
    ctx.compare("R[phi,eps] = beta", words, wk.cfree_cumulants(Phi, fn.epsilon()).on_word, fn.L_succ(Phi).on_word)
    ctx.compare(
        "c-free sum with psi = phi is the free sum",
        words,
        lambda w: parts.moments_from_cfree(fn.L_prec(Phi).on_word, fn.L_prec(Phi).on_word, w),
        lambda w: parts.moments_from_cumulants("free", fn.L_prec(Phi).on_word, w),
    )
    ctx.compare(
        "c-free sum with psi = eps is the boolean sum",
        words,
        lambda w: parts.moments_from_cfree(fn.L_succ(Phi).on_word, lambda v: ZERO, w),
        lambda w: parts.moments_from_cumulants("boolean", fn.L_succ(Phi).on_word, w),
    )
    ctx.compare(
        "R is infinitesimal",
        [()] + ctx.bars(cap=4),
        R.as_general().on_bar,
        lambda b: ZERO,
    )


@suite("monotone-t", "univariate monotone moments as polynomials in time")
def _monotone_t(ctx: Context) -> None:
    n_max = ctx.max_degree
    a = word(0)

    def power(n):
        return a * n

    semicircle = fn.State("phi", {(0,) * n: (parts.catalan(n // 2) if n % 2 == 0 else 0) for n in range(1, n_max + 1)})
    symbolic = fn.State("phi")
    t = Scalar.var(("t", ()))
    for label, state in (("semicircle", semicircle), ("symbolic", symbolic)):
        Phi = fn.extend_state(state)
        rho = fn.log_star(Phi)
        r = lambda q, rho=rho: rho.on_word(power(q))
        ns = list(range(n_max + 1))
        ctx.compare(
            f"closed formula = integral equation [{label}]",
            ns,
            lambda n, r=r: parts.monotone_mt(r, n),
            lambda n, r=r: parts.monotone_mt_integral(r, n),
        )
        for tv in (Fraction(0), Fraction(1), Fraction(2), Fraction(1, 2)):
            ex = fn.exp_star_t(rho, tv)
            ctx.compare(
                f"m_n(t) = exp*(t rho) at t = {tv} [{label}]",
                ns,
                lambda n, r=r, tv=tv: parts.evaluate_poly(parts.monotone_mt(r, n), tv),
                lambda n, ex=ex: ex.on_word(power(n)),
            )
        ex_t = fn.exp_star_t(rho, t)

        def coeffs(n, ex_t=ex_t):
            cs = ex_t.on_word(power(n)).coefficients_in(("t", ()))
            return cs + [ZERO] * (n + 1 - len(cs))

        ctx.compare(f"m_n(t) coefficients with symbolic t [{label}]", ns, lambda n, r=r: parts.monotone_mt(r, n), coeffs)
        ctx.compare(
            f"m_n(1) is the monotone moment-cumulant relation [{label}]",
            ns[1:],
            lambda n, r=r: parts.evaluate_poly(parts.monotone_mt(r, n), 1),
            lambda n, rho=rho: parts.moments_from_cumulants("monotone", rho.on_word, power(n)),
        )


# ----------------------------------------------------------------------------
# Wick maps


@suite("wick-centred", "all four Wick maps are centred")
def _wick_centred(ctx: Context) -> None:
    words = ctx.words()
    Phi = ctx.Phi
    unit = lambda w: ONE if not w else ZERO
    W = wk.wick_free(Phi)
    ctx.compare("Phi o W = eps", [()] + words, lambda w: Phi(W.on_word(w)), unit)
    Wb = wk.wick_boolean(Phi)
    ctx.compare("Phi o W' = eps", [()] + words, lambda w: Phi(Wb.on_word(w)), unit)
    Wc = wk.wick_cfree(Phi, ctx.Psi)
    ctx.compare("Phi o W^c = eps", [()] + ctx.words(cap=5), lambda w: Phi(Wc.on_word(w)), unit)
    WT = wk.wick_tensor(ctx.phi_word)
    ctx.compare("phi o W_T = eps", words, lambda w: ctx.phi_word(WT.on_word(w)), unit)


@suite("wick-structure", "reconstruction, inverse and multiplicativity of the free Wick map")
def _wick_structure(ctx: Context) -> None:
    Phi = ctx.Phi
    words = ctx.words(min_degree=0)
    W = wk.wick_free(Phi)
    ident = lambda w: Element.of_word(w)
    ctx.compare("(W (x) Phi) delta = id", words, wk.act(W, Phi).on_word, ident)
    ctx.compare("W o W^-1 = id", words, W.compose(wk.wick_free_inverse(Phi)).on_word, ident)
    ctx.compare("id . Phi^-1 = W", words, W.on_word, wk.act(wk.identity(), fn.conv_inverse(Phi)).on_word)

    WT = wk.wick_tensor(ctx.phi_word)

    def tensor_reconstruction(w):
        out = Element()
        for left, right, m in co._delta_shuffle_terms(w):
            out = out + WT.on_word(left).scale(ctx.phi_word.on_word(right) * m)
        return out

    ctx.compare("(W_T (x) phi) unshuffle = id", words, tensor_reconstruction, ident)

    rng = ctx.rng("pairs")
    pool = ctx.words()
    pairs = []
    while len(pairs) < 40:
        x, y = rng.choice(pool), rng.choice(pool)
        if len(x) + len(y) <= ctx.max_degree:
            pairs.append((x, y))
    ctx.compare(
        "W(w | w') = W(w) | W(w')",
        pairs,
        lambda p: W.on_bar((p[0], p[1])),
        lambda p: W.on_word(p[0]) * W.on_word(p[1]),
    )


@suite("wick-derivation", "the derivations d_a commute with the free Wick map")
def _wick_derivation(ctx: Context) -> None:
    W = wk.wick_free(ctx.Phi)
    words = ctx.words(cap=5)
    for a in range(GENERATORS):
        d = wk.derivation_map(a)
        ctx.compare(f"d_{a + 1} o W = W o d_{a + 1}", words, lambda w, d=d: d(W.on_word(w)), lambda w, d=d: W(d.on_word(w)))
    cases = [(n, i) for n in range(1, min(ctx.max_degree, 5) + 1) for i in range(n)]
    ctx.compare(
        "d_{a_i} W(a_1...a_n) = W(a_1...a_{i-1}) | W(a_{i+1}...a_n)",
        cases,
        lambda c: wk.derivation(c[1], W.on_word(core.distinct_word(c[0]))),
        lambda c: W.on_word(core.distinct_word(c[0])[: c[1]]) * W.on_word(core.distinct_word(c[0])[c[1] + 1:]),
    )


def corrected_recursion(W, kappa, w) -> Element:
    """``a_1 W(a_2...a_n) - sum_j kappa(a_1...a_j) W(a_{j+1}...a_n)``."""
    out = core.concat_elements(Element.of_word(w[:1]), W.on_word(w[1:]))
    for j in range(1, len(w) + 1):
        out = out - W.on_word(w[j:]).scale(kappa.on_word(w[:j]))
    return out


def wickprime_sum(W, Phi, w) -> Element:
    """``sum_{S containing the first letter} W(a_S) prod Phi(a_J)``."""
    out = Element()
    for split in co.subset_splits(len(w)):
        if not split.S or split.S[0] != 0:
            continue
        c = ONE
        for comp in split.components:
            c = c * Phi.on_word(tuple(w[i] for i in comp))
        out = out + W.on_word(tuple(w[i] for i in split.S)).scale(c)
    return out


@suite("wick-recursions", "recursions and boolean forms relating W and W'")
def _wick_recursions(ctx: Context) -> None:
    Phi = ctx.Phi
    words = ctx.words(cap=5)
    inv = fn.conv_inverse(Phi)
    kappa, beta = fn.L_prec(Phi), fn.L_succ(Phi)
    ident, e = wk.identity(), wk.unit_counit()
    W = wk.wick_free(Phi)
    Wb = wk.wick_boolean(Phi)
    all_words = [()] + words

    rec = e + wk.act_prec(ident - e, inv) - wk.half_succ_map(W, kappa)
    ctx.compare("W = e + (id - e) < Phi^-1 - W > kappa", all_words, W.on_word, rec.on_word)
    ctx.compare("polynomial form of the recursion", words, W.on_word, lambda w: corrected_recursion(W, kappa, w))
    bf = e + wk.act_prec(ident - e - wk.half_succ_map(ident, beta), inv)
    ctx.compare("W = e + (id - e - id > beta) < Phi^-1", all_words, W.on_word, bf.on_word)
    ctx.compare("W' = e + (W - e) < Phi", all_words, Wb.on_word, (e + wk.act_prec(W - e, Phi)).on_word)
    ctx.compare("W' as a sum over subsets containing 1", words, Wb.on_word, lambda w: wickprime_sum(W, Phi, w))
    ctx.compare("explicit boolean Wick polynomials", all_words, Wb.on_word, lambda w: wk.wick_boolean_explicit(beta, w))

    ctx.compare(
        "w = W'(w) + sum_{j<=n} Phi(a_1...a_j) W'(a_{j+1}...a_n)",
        words,
        lambda w: wk.boolean_inverse_expansion(Wb, Phi, w),
        Element.of_word,
    )
    ctx.compare("boolean telescoping terminates", words, lambda w: wk.boolean_telescope(Wb, beta, w), Element.of_word)
    ctx.compare(
        "free Wick polynomials from free cumulants",
        all_words,
        W.on_word,
        lambda w: wk.wick_free_from_free_cumulants(kappa, w),
    )


@suite("wick-cfree", "conditionally free Wick map: specializations, composite action, factorization")
def _wick_cfree(ctx: Context) -> None:
    Phi, Psi = ctx.Phi, ctx.Psi
    words = [()] + ctx.words(cap=5)
    W = wk.wick_free(Phi)
    Wb = wk.wick_boolean(Phi)
    ctx.compare("psi = phi gives W", words, wk.wick_cfree(Phi, Phi).on_word, W.on_word)
    ctx.compare("psi = eps gives W'", words, wk.wick_cfree(Phi, fn.epsilon()).on_word, Wb.on_word)
    e = wk.unit_counit()
    Wc = wk.wick_cfree(Phi, Psi)
    composite = e + wk.act_prec(wk.act_prec(wk.act(wk.identity(), fn.conv_inverse(Phi)) - e, Phi), fn.conv_inverse(Psi))
    ctx.compare("W^c = e + [(id . Phi^-1 - e)^Phi]^(Psi^-1)", words, Wc.on_word, composite.on_word)
    R = wk.cfree_cumulants(Phi, Psi)
    W_psi = wk.wick_free(Psi)
    factor = fn.E_prec(fn.L_prec(Psi) - R)
    ctx.compare("W = W^psi . E<(kappa^psi - R)", words, W.on_word, wk.act(W_psi, factor).on_word)
    ctx.compare("W = W^psi . (Psi * Phi^-1)", words, W.on_word, wk.act(W_psi, fn.convolve(Psi, fn.conv_inverse(Phi))).on_word)


@suite("wick-actions", "group actions on endomorphisms and the id -> W -> W' -> W^c diagram")
def _wick_actions(ctx: Context) -> None:
    Phi, Psi = ctx.Phi, ctx.Psi
    words = ctx.words(cap=5)
    ident, e = wk.identity(), wk.unit_counit()
    P1 = fn.random_character(f"{ctx.seed}:act:1", 5)
    P2 = fn.random_character(f"{ctx.seed}:act:2", 5)
    P12 = fn.convolve(P1, P2)
    Wb = wk.wick_boolean(Phi)
    for label, L in (("id", ident), ("W'", Wb)):
        ctx.compare(
            f"(L . P1) . P2 = L . (P1 * P2) [L = {label}]",
            [()] + words,
            wk.act(wk.act(L, P1), P2).on_word,
            wk.act(L, P12).on_word,
        )
    for label, L in (("id - e", ident - e), ("W' - e", Wb - e)):
        ctx.compare(
            f"(L^P1)^P2 = L^(P1 * P2) [L = {label}]",
            words,
            wk.act_prec(wk.act_prec(L, P1), P2).on_word,
            wk.act_prec(L, P12).on_word,
        )
    ctx.compare("id . eps = id", [()] + words, wk.act(ident, fn.epsilon()).on_word, Element.of_word)
    ctx.compare(
        "(id . P1)^-1 = id . P1^-1",
        [()] + words,
        wk.act(ident, P1).compose(wk.act(ident, fn.conv_inverse(P1))).on_word,
        Element.of_word,
    )
    W = wk.act(ident, fn.conv_inverse(Phi))
    ctx.compare("id . Phi^-1 = W", [()] + words, W.on_word, wk.wick_free(Phi).on_word)
    ctx.compare("W' = e + (id . Phi^-1 - e)^Phi", [()] + words, Wb.on_word, (e + wk.act_prec(W - e, Phi)).on_word)
    ctx.compare(
        "W^c = e + (W' - e)^(Psi^-1)",
        [()] + words,
        wk.wick_cfree(Phi, Psi).on_word,
        (e + wk.act_prec(Wb - e, fn.conv_inverse(Psi))).on_word,
    )


@suite("wick-tensor", "tensor Wick map: explicit expansion, Neumann series, classical bridge")
def _wick_tensor(ctx: Context) -> None:
    phi = ctx.phi_word
    WT = wk.wick_tensor(phi)
    words = [()] + ctx.words(cap=5)
    ctx.compare("W_T = explicit expansion", words, WT.on_word, lambda w: wk.tensor_wick_expansion(phi, w))
    inv = fn.shuffle_inverse(phi)
    ctx.compare("shuffle inverse = Neumann series", words, inv.on_word, lambda w: fn.shuffle_inverse_neumann(phi, w))
    ctx.compare("phi sh phi^-1 = eps", words, fn.shuffle_convolve(phi, inv).on_word, fn.word_epsilon().on_word)
    ctx.compare("W_T^-1 o W_T = id", words, wk.wick_tensor_inverse(phi).compose(WT).on_word, Element.of_word)

    n_max = ctx.max_degree
    tables = {
        "gaussian": [0 if k % 2 else _double_factorial(k - 1) for k in range(n_max + 1)],
        "exponential": [factorial(k) for k in range(n_max + 1)],
    }
    for label, moments in tables.items():
        state = fn.State("phi", {(0,) * k: moments[k] for k in range(1, n_max + 1)}, commutative=True)
        WT1 = wk.wick_tensor(fn.moment_map(state))
        classical = wk.classical_wick(moments, n_max)

        def evaluated(n, WT1=WT1):
            image = core.evaluate_element_in_A(WT1.on_word(word(*([0] * n))), commutative=True)
            coeffs = [Fraction(0)] * (n + 1)
            for b, c in image.terms.items():
                coeffs[len(b[0][0]) if b else 0] = c.constant()
            return coeffs

        ctx.compare(
            f"ev o W_T(a^n) = classical Wick polynomial [{label}]",
            list(range(n_max + 1)),
            evaluated,
            lambda n, classical=classical: classical[n],
        )


def _double_factorial(n: int) -> int:
    return 1 if n <= 0 else n * _double_factorial(n - 2)


def _random_words(rng: random.Random, pool, count: int, max_total: int) -> list:
    out = []
    while len(out) < count:
        t = tuple(rng.choice(pool) for _ in range(3))
        if sum(len(w) for w in t) <= max_total:
            out.append(t)
    return out


@suite("wick-products", "associativity of the Wick products and the closed form of the free one")
def _wick_products(ctx: Context) -> None:
    Phi = ctx.Phi
    cap = min(ctx.max_degree, 4)
    W = wk.wick_free(Phi)
    Winv = wk.wick_free_inverse(Phi)
    Wb = wk.wick_boolean(Phi)
    Wc = wk.wick_cfree(Phi, ctx.Psi)
    maps = {"free": (W, Winv), "boolean": (Wb, wk.inverse_map(Wb)), "cfree": (Wc, wk.inverse_map(Wc))}
    rng = ctx.rng("triples")
    pool = ctx.words(cap=2)
    triples = _random_words(rng, pool, 8, cap)
    for label, (F, G) in maps.items():

        def prod(x, y, F=F, G=G):
            return wk.wick_product(F, x, y, G)

        ctx.compare(
            f"associativity of the {label} Wick product",
            triples,
            lambda t, prod=prod: prod(prod(Element.of_word(t[0]), Element.of_word(t[1])), Element.of_word(t[2])),
            lambda t, prod=prod: prod(Element.of_word(t[0]), prod(Element.of_word(t[1]), Element.of_word(t[2]))),
        )
        ctx.compare(
            f"{label} Wick map is a morphism: F(a^n) = F(a)^n",
            list(range(1, cap + 1)),
            lambda n, F=F: F.on_word(word(*([0] * n))),
            lambda n, F=F, prod=prod: _power(prod, F.on_word(word(0)), n),
        )
        ctx.compare(
            f"{label} inverse map is a two-sided inverse",
            [()] + ctx.words(cap=cap),
            lambda w, F=F, G=G: F(G.on_word(w)),
            Element.of_word,
        )
    pairs = [(x, y) for x in ctx.words(cap=3, min_degree=0) for y in ctx.words(cap=3, min_degree=0) if len(x) + len(y) <= cap]
    ctx.compare(
        "closed form of the free Wick product",
        pairs,
        lambda p: wk.free_product_closed_form(Phi, p[0], p[1]),
        lambda p: wk.wick_product(W, Element.of_word(p[0]), Element.of_word(p[1]), Winv),
    )


def _power(prod, x: Element, n: int) -> Element:
    out = x
    for _ in range(n - 1):
        out = prod(out, x)
    return out


@suite("cli", "printing and parsing round-trip; outputs are deterministic")
def _cli(ctx: Context) -> None:
    from . import main as cli_main
    from .parse import parse_expression, parse_json_element

    alphabet = Alphabet("abcdefgh")
    W = wk.wick_free(ctx.Phi)
    Wc = wk.wick_cfree(ctx.Phi, ctx.Psi)
    samples = [W.on_word(w) for w in ctx.words(cap=4)] + [Wc.on_word(core.distinct_word(3))]
    samples += [W.on_bar(b) for b in ctx.bars(cap=3)]
    ctx.compare("text round-trip", samples, lambda e: parse_expression(fmt.format_element(e, alphabet), alphabet, register=False), lambda e: e)
    ctx.compare(
        "json round-trip",
        samples,
        lambda e: parse_json_element(fmt.dumps({"terms": fmt.element_records(e, alphabet)}), alphabet, register=False),
        lambda e: e,
    )
    commands = [
        ["wick", "free", "a b c"],
        ["--format", "json", "wick", "cfree", "a b"],
        ["cumulants", "free", "--up-to", "3"],
        ["--format", "latex", "product", "boolean", "a", "b a"],
        ["coproduct", "prec", "a b | c"],
    ]
    ctx.compare(
        "identical invocations print identical bytes",
        [tuple(c) for c in commands],
        lambda c: cli_main.run_captured(list(c)),
        lambda c: cli_main.run_captured(list(c)),
    )


# ----------------------------------------------------------------------------
# runner


def run_suites(names: Iterable[str] | None = None, max_degree: int = 6, seed: int = 0) -> list[SuiteResult]:
    """Run the named suites (all by default) on fresh caches."""
    selected = list(SUITES) if names is None else list(names)
    unknown = [n for n in selected if n not in SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s): {', '.join(unknown)}; available: {', '.join(SUITES)}")
    results = []
    for name in selected:
        co.clear_caches()
        parts.clear_caches()
        ctx = Context(name, max_degree, seed)
        _, body = SUITES[name]
        try:
            body(ctx)
        except Exception as exc:
            ctx._fail("suite setup", "-", f"raised {type(exc).__name__}: {exc}", _last_frame(exc))
        results.append(ctx.result)
    co.clear_caches()
    parts.clear_caches()
    return results


def render_report(results: list[SuiteResult], max_degree: int, seed: int) -> str:
    lines = []
    for r in results:
        status = "ok  " if r.ok else "FAIL"
        lines.append(f"{status} {r.name:<18} {r.checks} checks")
    failures = [f for r in results for f in r.failures]
    if failures:
        lines.append("")
        lines.append(f"{len(failures)} counterexample(s):")
        for f in failures:
            lines.append(f.render(seed, max_degree))
    else:
        lines.append(f"all {sum(r.checks for r in results)} checks passed (max degree {max_degree}, seed {seed})")
    return "\n".join(lines)
