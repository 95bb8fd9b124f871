"""One test per acceptance criterion.

The identity suites themselves run once through ``ncwick verify
--max-degree 6`` (the ``verify_output`` fixture); each criterion checks the
verdict of its suites and adds direct checks that do not go through the
verify runner.
"""

import re
from fractions import Fraction

from ncwick import coalgebra as co
from ncwick import core
from ncwick import functionals as fn
from ncwick import partitions as parts
from ncwick import wick as wk
from ncwick.cli import formatting as fmt
from ncwick.cli.main import run_captured
from ncwick.cli.parse import parse_expression, parse_json_element
from ncwick.core import Alphabet, Element, Scalar, word

NAMES = Alphabet(["a1", "a2", "a3"])


def E(text):
    return parse_expression(text, NAMES, register=False)


def show(x):
    return fmt.format_element(x, NAMES)


def checks_in(output, suite):
    m = re.search(rf"^(?:ok  |FAIL) {re.escape(suite)}\s+(\d+) checks$", output, re.M)
    return int(m.group(1))


def assert_suites_ok(status, *names):
    bad = {n: status.get(n) for n in names if status.get(n) != "ok"}
    assert not bad, f"suites not passing: {bad}"


# transcriptions of the printed low-degree expansions
PRINTED_WT = {
    1: "a1 - phi[a1]",
    2: "a1 a2 - phi[a1] a2 - phi[a2] a1 + (-phi[a1.a2] + 2 phi[a1] phi[a2])",
    3: "a1 a1 a3 - phi[a1] a2 a3 - phi[a2] a1 a3 - phi[a3] a1 a2"
    " + (-phi[a2.a3] + 2 phi[a2] phi[a3]) a1 + (-phi[a1.a3] + 2 phi[a1] phi[a3]) a2"
    " + (-phi[a1.a2] + 2 phi[a1] phi[a2]) a3"
    " + (-phi[a1.a2.a3] + phi[a1] phi[a2.a3] + phi[a2] phi[a1.a3] + phi[a3] phi[a1.a2]"
    " - 6 phi[a1] phi[a2] phi[a3])",
}
PRINTED_W = {
    1: "a1 - phi[a1]",
    2: "a1 a2 - phi[a2] a1 - phi[a1] a2 - (phi[a1.a2] - 2 phi[a1] phi[a2])",
    3: "a1 a2 a3 - phi[a3] a1 a2 - phi[a2] a1 a3 - phi[a1] a2 a3"
    " - (phi[a2.a3] - 2 phi[a2] phi[a3]) a1 + phi[a1] phi[a3] a2 - (phi[a1.a2] - 2 phi[a1] phi[a2]) a3"
    " - (phi[a1.a2.a3] - 2 phi[a1] phi[a2.a3] - 2 phi[a3] phi[a1.a2] - phi[a2] phi[a1.a3]"
    " + 5 phi[a1] phi[a2] phi[a3])",
}


def tensor_wick_by_neumann(phi, w):
    """``(id (x) phi^-1) unshuffle`` with phi^-1 from the Neumann series."""
    out = Element()
    for left, right, m in co._delta_shuffle_terms(w):
        out = out + Element.of_word(left).scale(fn.shuffle_inverse_neumann(phi, right) * m)
    return out


def free_wick_by_definition(Phi, w):
    """``(id (x) Phi^-1) delta`` with Phi^-1 = E>(-kappa)."""
    inv = fn.E_succ(-fn.L_prec(Phi))
    out = Element()
    for left, right, m in co._delta_word_terms(w):
        out = out + Element.of_word(left).scale(inv.on_bar(right) * m)
    return out


def test_criterion_1_display_reproduction(report):
    phi_state = fn.State("phi")
    phi, Phi = fn.moment_map(phi_state), fn.extend_state(phi_state)
    WT, W = wk.wick_tensor(phi), wk.wick_free(Phi)

    for n in (1, 2):
        assert WT.on_word(core.distinct_word(n)) == E(PRINTED_WT[n])
    for n in (1, 2, 3):
        assert W.on_word(core.distinct_word(n)) == E(PRINTED_W[n])

    # normative comparison: the defining formulas, through independent oracles
    for n in (1, 2, 3):
        w = core.distinct_word(n)
        assert WT.on_word(w) == tensor_wick_by_neumann(phi, w)
        assert W.on_word(w) == free_wick_by_definition(Phi, w)
        assert W.on_word(w).coefficient(()) == fn.conv_inverse(Phi).on_word(w)

    w3 = core.distinct_word(3)
    diff = E(PRINTED_WT[3]) - WT.on_word(w3)
    if not diff.is_zero():
        report(f"W_T(a1 a2 a3): printed - computed = {show(diff)}")
        report(f"W_T(a1 a2 a3) computed: {show(WT.on_word(w3))}")
    # the known misprints: leading word a1 a1 a3, and coefficient 1 instead of 2
    # on the three phi(a_i) phi(a_j.a_k) terms of the constant
    assert diff == E(
        "a1 a1 a3 - a1 a2 a3 - phi[a1] phi[a2.a3] - phi[a2] phi[a1.a3] - phi[a3] phi[a1.a2]"
    )
    free_diff = E(PRINTED_W[3]) - W.on_word(w3)
    report("W(a1 a2 a3): " + ("matches the printed expansion" if free_diff.is_zero() else f"printed - computed = {show(free_diff)}"))
    assert free_diff.is_zero()


def test_criterion_2_partition_oracles(verify_status):
    assert_suites_ok(verify_status, "partitions", "cfree")

    # the opposite direction: build the moments from random cumulants
    words = [core.distinct_word(6), word(0, 1, 1, 0, 1, 0), word(0, 0, 1, 0, 0, 1)]
    for seed in range(3):
        k = fn.random_infinitesimal(f"acc2:{seed}")
        pairs = {
            "free": fn.E_prec(k),
            "boolean": fn.E_succ(k),
            "monotone": fn.exp_star(k),
        }
        for family, Phi in pairs.items():
            for w in words:
                assert Phi.on_word(w) == parts.moments_from_cumulants(family, k.on_word, w), (family, w)
        c = fn.word_functional(k.on_word)
        for w in words:
            assert fn.exp_shuffle(c).on_word(w) == parts.moments_from_cumulants("set", k.on_word, w)

    # two states, n <= 5
    Phi = fn.random_character("acc2:phi")
    Psi = fn.random_character("acc2:psi")
    R, kpsi = wk.cfree_cumulants(Phi, Psi), fn.L_prec(Psi)
    for w in core.words_up_to(2, 5, 1) + [core.distinct_word(5)]:
        assert Phi.on_word(w) == parts.moments_from_cfree(R.on_word, kpsi.on_word, w)


def test_criterion_3_shuffle_axioms(verify_output, verify_status):
    assert_suites_ok(verify_status, "shuffle-axioms", "unshuffle-axioms", "coalgebra")
    # three axioms per triple, at least 50 triples
    assert checks_in(verify_output, "shuffle-axioms") >= 150
    for w in core.words_up_to(2, 6, 1) + [core.distinct_word(6)]:
        assert co.delta(w) == co.delta_prec_plus(w) + co.delta_succ_plus(w)


def test_criterion_4_exponential_coherence(verify_output, verify_status):
    assert_suites_ok(verify_status, "exponentials", "bch")
    assert checks_in(verify_output, "bch") >= 20
    Phi = fn.random_character("acc4")
    rho, kappa, beta = fn.log_star(Phi), fn.L_prec(Phi), fn.L_succ(Phi)
    inv = fn.conv_inverse(Phi)
    for w in [core.distinct_word(6), word(0, 1, 0, 0, 1, 1)]:
        v = Phi.on_word(w)
        assert v == fn.exp_star(rho).on_word(w) == fn.E_prec(kappa).on_word(w) == fn.E_succ(beta).on_word(w)
        assert inv.on_word(w) == fn.E_succ(-kappa).on_word(w) == fn.E_prec(-beta).on_word(w)
        assert beta.on_word(w) == fn.theta_adjoint(Phi, kappa).on_word(w)


def test_criterion_5_wick_identities(verify_status):
    assert_suites_ok(
        verify_status,
        "wick-centred", "wick-structure", "wick-derivation", "wick-recursions",
        "wick-cfree", "wick-actions", "wick-tensor", "wick-products",
    )
    # c-free specializations and centredness on a degree-5 word with distinct letters
    Phi, Psi = fn.random_character("acc5:phi"), fn.random_character("acc5:psi")
    w = core.distinct_word(5)
    W, Wb, Wc = wk.wick_free(Phi), wk.wick_boolean(Phi), wk.wick_cfree(Phi, Psi)
    assert wk.wick_cfree(Phi, Phi).on_word(w) == W.on_word(w)
    assert wk.wick_cfree(Phi, fn.epsilon()).on_word(w) == Wb.on_word(w)
    for F in (W, Wb, Wc):
        assert Phi(F.on_word(w)).is_zero()
    phi = fn.word_functional(Phi.on_word)
    assert phi(wk.wick_tensor(phi).on_word(w)).is_zero()


def test_criterion_6_monotone_t(verify_status):
    assert_suites_ok(verify_status, "monotone-t")
    semicircle = fn.State("phi", {(0,) * n: (parts.catalan(n // 2) if n % 2 == 0 else 0) for n in range(1, 7)})
    rho = fn.log_star(fn.extend_state(semicircle))
    r = lambda q: rho.on_word(word(*[0] * q))
    for n in range(7):
        coeffs = parts.monotone_mt(r, n)
        for t in (0, 1, 2, Fraction(1, 2)):
            assert parts.evaluate_poly(coeffs, t) == fn.exp_star_t(rho, t).on_word(word(*[0] * n))
        expected = parts.catalan(n // 2) if n % 2 == 0 else 0
        assert parts.evaluate_poly(coeffs, 1) == Scalar.const(expected)


def _double_factorial(n):
    return 1 if n <= 0 else n * _double_factorial(n - 2)


def test_criterion_7_classical_bridge():
    gauss = [0 if k % 2 else _double_factorial(k - 1) for k in range(7)]
    state = fn.State("phi", {(0,) * k: gauss[k] for k in range(1, 7)}, commutative=True)
    WT = wk.wick_tensor(fn.moment_map(state))
    classical = wk.classical_wick(gauss, 6)
    for n in range(7):
        image = core.evaluate_element_in_A(WT.on_word(word(*[0] * n)), commutative=True)
        coeffs = [Fraction(0)] * (n + 1)
        for b, c in image.terms.items():
            coeffs[len(b[0][0]) if b else 0] = c.constant()
        assert coeffs == classical[n]
    assert classical[3] == [0, -3, 0, 1]
    assert classical[4] == [3, 0, -6, 0, 1]

    semicircle = fn.State("phi", {(0,) * n: (parts.catalan(n // 2) if n % 2 == 0 else 0) for n in range(1, 9)})
    kappa = fn.L_prec(fn.extend_state(semicircle))
    assert [kappa.on_word(word(*[0] * n)).constant() for n in range(1, 9)] == [0, 1, 0, 0, 0, 0, 0, 0]


def test_criterion_8_cli_contract(verify_output, verify_status, mutation_outputs):
    assert verify_output.startswith("exit 0\n")
    assert_suites_ok(verify_status, "cli")

    alphabet = Alphabet(["a", "b", "c"])
    Phi, Psi = fn.extend_state(fn.State("phi")), fn.extend_state(fn.State("psi"))
    for x in [wk.wick_free(Phi).on_word(core.distinct_word(3)), wk.wick_cfree(Phi, Psi).on_word(word(0, 1, 0))]:
        assert parse_expression(fmt.format_element(x, alphabet), alphabet, register=False) == x
        assert parse_json_element(fmt.dumps({"terms": fmt.element_records(x, alphabet)}), alphabet, register=False) == x
    for argv in (["--format", "json", "wick", "cfree", "a b c"], ["verify", "--suite", "bch", "--seed", "5", "--max-degree", "4"]):
        assert run_captured(argv) == run_captured(argv)

    assert len(mutation_outputs) >= 3
    for label, out in mutation_outputs.items():
        assert out.startswith("exit 1\n"), label
        assert re.search(r"^FAIL \S+ / .+\n  input: .+\n  left: .+\n  right: .+\n  replay: ", out, re.M), label
