import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ncwick import functionals as fn
from ncwick import wick as wk
from ncwick.cli import formatting as fmt
from ncwick.cli.main import run, run_captured
from ncwick.cli.parse import (
    ParseError,
    StateFileError,
    UnknownGeneratorError,
    load_state,
    parse_expression,
    parse_json_element,
)
from ncwick.core import Alphabet, Element, Scalar, word


def cli(*argv):
    code, _, rest = run_captured(list(argv)).partition("\n")
    return int(code.split()[1]), rest


# -- grammar ---------------------------------------------------------------


def test_grammar_examples():
    a = Alphabet()
    assert parse_expression("a b", a) == Element.of_word(word(0, 1))
    a = Alphabet()
    assert parse_expression("a.b c", a) == Element.of_word(((0, 1), (2,)))
    a = Alphabet()
    x = parse_expression("2/3 a | b + 1", a)
    assert x == Element.of_bar((word(0), word(1)), Fraction(2, 3)) + Element.unit()


def test_symbols_powers_and_parentheses():
    a = Alphabet(["a", "b"])
    x = parse_expression("(phi[a] - 1/2) phi[a.b]^2 a", a)
    p = Scalar.var(("phi", (0,)))
    q = Scalar.var(("phi", (0, 1)))
    assert x == Element.of_word(word(0), (p - Fraction(1, 2)) * q * q)
    assert parse_expression("t[]", a).coefficient(()) == Scalar.var(("t", ()))


def test_commutative_letters_are_sorted():
    a = Alphabet(["a", "b"])
    assert parse_expression("b.a", a, commutative=True) == Element.of_word(((0, 1),))


@pytest.mark.parametrize(
    "src,pos",
    [("a +", 3), ("a | ", 4), ("(a) b", 0), ("a $ b", 2), ("", 0), ("phi[a", 5), ("a b )", 4)],
)
def test_syntax_errors_report_positions(src, pos):
    with pytest.raises(ParseError) as info:
        parse_expression(src, Alphabet(["a", "b"]), register=True)
    assert info.value.position == pos
    assert f"position {pos}" in str(info.value)


def test_unknown_generator():
    with pytest.raises(UnknownGeneratorError, match="unknown generator 'z' at position 2"):
        parse_expression("a z", Alphabet(["a"]), register=False)


# -- formatting and round-trips ----------------------------------------------

AB = Alphabet(["a", "b", "c"])
PHI = fn.extend_state(fn.State("phi"))
PSI = fn.extend_state(fn.State("psi"))
SAMPLES = [wk.wick_free(PHI).on_word(word(*g)) for g in [(0,), (0, 1), (0, 1, 2), (1, 1, 0)]]
SAMPLES += [wk.wick_cfree(PHI, PSI).on_word(word(0, 1)), Element.of_bar((word(0), word(1, 2)), Fraction(-2, 3))]


@pytest.mark.parametrize("x", SAMPLES)
def test_text_and_json_round_trip(x):
    assert parse_expression(fmt.format_element(x, AB), AB, register=False) == x
    doc = fmt.dumps({"terms": fmt.element_records(x, AB)})
    assert parse_json_element(doc, AB, register=False) == x


letters = st.sampled_from([(0,), (1,), (2,), (0, 1)])
barwords = st.lists(st.lists(letters, min_size=1, max_size=3).map(tuple), max_size=3).map(tuple)
coeffs = st.fractions(min_value=-4, max_value=4, max_denominator=5)


@settings(max_examples=60)
@given(st.lists(st.tuples(barwords, coeffs, st.sampled_from([None, ("phi", (0,)), ("psi", (1, 2))])), max_size=4))
def test_round_trip_property(terms):
    x = Element()
    for b, q, sym in terms:
        c = Scalar.const(q) * (Scalar.var(sym) if sym else 1)
        x = x + Element.of_bar(b, c)
    assert parse_expression(fmt.format_element(x, AB), AB, register=False) == x
    assert parse_json_element(fmt.dumps({"terms": fmt.element_records(x, AB)}), AB, register=False) == x


def test_json_record_schema():
    code, out = cli("--format", "json", "wick", "free", "a b")
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "element"
    rec = next(r for r in doc["terms"] if r["barword"] == [])
    assert set(rec) == {"barword", "coeff"}
    assert set(rec["coeff"]) == {"monomial", "rat"}
    pairs = {(tuple(map(tuple, r["coeff"]["monomial"])), r["coeff"]["rat"]) for r in doc["terms"] if r["barword"] == []}
    assert pairs == {((("phi", "a.b"),), "-1"), ((("phi", "a"), ("phi", "b")), "2")}


def test_latex_uses_state_notation():
    code, out = cli("--format", "latex", "wick", "free", "a b")
    assert code == 0
    assert r"\varphi(ab)" in out
    assert r"\varphi(a)\varphi(b)" in out


# -- commands ----------------------------------------------------------------


def test_wick_free_expansion():
    code, out = cli("wick", "free", "a b")
    assert code == 0
    assert out.strip() == "(-phi[a.b] + 2 phi[a] phi[b]) - phi[b] a - phi[a] b + a b"


def test_coproduct_and_cumulants_commands():
    code, out = cli("coproduct", "shuffle", "a b")
    assert code == 0 and out.strip() == "1 (x) a b + a (x) b + b (x) a + a b (x) 1"
    code, out = cli("cumulants", "boolean", "--word", "a b")
    assert code == 0 and out.strip() == "boolean[a b] = phi[a.b] - phi[a] phi[b]"
    code, out = cli("cumulants", "free", "--up-to", "2")
    assert code == 0 and len(out.strip().splitlines()) == 2


def test_verify_list_and_single_suite():
    code, out = cli("verify", "--list")
    assert code == 0 and "shuffle-axioms" in out
    code, out = cli("verify", "--suite", "shuffle-axioms", "--max-degree", "5", "--seed", "7")
    assert code == 0 and "all 150 checks passed" in out


@pytest.mark.parametrize(
    "argv,message",
    [
        (["verify", "--suite", "nope"], "unknown suite"),
        (["--degree", "3", "wick", "free", "a b c d"], "above the session cap"),
        (["--degree", "4", "verify", "--max-degree", "6"], "above the session cap"),
        (["wick", "boolean", "a | b"], "remove the bars"),
        (["wick", "free", "a +"], "syntax error at position 3"),
        (["product", "free", "a b", "a | b"], "defined on T(A)"),
    ],
)
def test_usage_errors_exit_2(argv, message):
    code, out = cli(*argv)
    assert code == 2
    assert message in out
    assert out.startswith("ncwick: error:")


def test_argparse_errors_exit_2(capsys):
    assert run(["wick", "nonsense", "a"]) == 2


# -- state files -------------------------------------------------------------


def write(tmp_path, doc):
    p = tmp_path / "state.json"
    p.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
    return str(p)


SEMICIRCLE = {
    "generators": ["a"],
    "mode": "noncommutative",
    "states": {"phi": {"mode": "table", "moments": {"a": "0", "a.a": "1", "a.a.a": "0", "a.a.a.a": "2"}}},
}


def test_semicircle_state(tmp_path):
    session = load_state(write(tmp_path, SEMICIRCLE))
    Phi = fn.extend_state(session.phi)
    assert Phi.on_word(word(0, 0, 0, 0)) == Scalar.const(2)
    assert session.psi is None
    code, out = cli("--state", write(tmp_path, SEMICIRCLE), "cumulants", "free", "--up-to", "4")
    assert code == 0
    assert out.split() == "free[a] = 0 free[a a] = 1 free[a a a] = 0 free[a a a a] = 0".split()


def test_missing_moment_is_reported(tmp_path):
    code, out = cli("--state", write(tmp_path, SEMICIRCLE), "wick", "free", "a a a a a")
    assert code == 2 and "no moment" in out


def test_symbolic_state_emits_symbols(tmp_path):
    doc = {"generators": ["a", "b"], "states": {"phi": {"mode": "symbolic"}}}
    code, out = cli("--state", write(tmp_path, doc), "wick", "free", "a b")
    assert code == 0 and "phi[a.b]" in out


def test_cfree_requires_psi(tmp_path):
    code, out = cli("--state", write(tmp_path, SEMICIRCLE), "wick", "cfree", "a")
    assert code == 2 and "second state required" in out


def test_state_file_unknown_generator_in_expression(tmp_path):
    code, out = cli("--state", write(tmp_path, SEMICIRCLE), "wick", "free", "a b")
    assert code == 2 and "unknown generator 'b'" in out


@pytest.mark.parametrize(
    "doc,message",
    [
        ("{not json", "malformed JSON"),
        ({"generators": ["a", "a"]}, "duplicate generator"),
        ({"generators": ["a"], "states": {"phi": {"moments": {"a": 0.5}}}}, "non-rational"),
        ({"generators": ["a"], "states": {"phi": {"moments": {"a": "x"}}}}, "non-rational"),
        ({"generators": ["a"], "states": {"phi": {"moments": {"a": True}}}}, "non-rational"),
        ({"generators": ["a"], "states": {"phi": {"moments": {"b": "1"}}}}, "unknown generator"),
        ({"generators": ["a"], "states": {"chi": {}}}, "only 'phi' and 'psi'"),
        ({"generators": ["a"], "states": {"psi": {}}}, "'phi' is required"),
        ({"generators": ["a"], "mode": "graded"}, "unknown mode"),
    ],
)
def test_state_file_errors(tmp_path, doc, message):
    with pytest.raises(StateFileError, match=message):
        load_state(write(tmp_path, doc))


def test_commutative_state_conflict(tmp_path):
    doc = {"generators": ["a", "b"], "mode": "commutative", "states": {"phi": {"moments": {"a.b": "1", "b.a": "2"}}}}
    with pytest.raises(StateFileError, match="conflicting"):
        load_state(write(tmp_path, doc))


def test_output_is_deterministic():
    argv = ["--format", "json", "product", "cfree", "a b", "c"]
    assert run_captured(argv) == run_captured(argv)
