"""Text, LaTeX and JSON renderings of scalars, elements and tensors.

The text form is the input grammar of :mod:`ncwick.cli.parse`, so printing
and parsing round-trip.  Generator names come from an
:class:`~ncwick.core.Alphabet`; without one the fallback names ``a1, a2, ...``
are used.
"""

from __future__ import annotations

import json
from fractions import Fraction

from ..core import Alphabet, BarWord, Element, Letter, Monomial, Scalar, Symbol, Tensor, Word

_DEFAULT = Alphabet()

LATEX_TAGS = {"phi": r"\varphi", "psi": r"\psi"}


def _alpha(alphabet: Alphabet | None) -> Alphabet:
    return alphabet if alphabet is not None else _DEFAULT


# ----------------------------------------------------------------------------
# text


def format_letter(x: Letter, alphabet: Alphabet | None = None) -> str:
    a = _alpha(alphabet)
    return ".".join(a.name(i) for i in x)


def format_word(w: Word, alphabet: Alphabet | None = None) -> str:
    if not w:
        return "1"
    return " ".join(format_letter(x, alphabet) for x in w)


def format_barword(b: BarWord, alphabet: Alphabet | None = None) -> str:
    if not b:
        return "1"
    return " | ".join(format_word(w, alphabet) for w in b)


def format_symbol(sym: Symbol, alphabet: Alphabet | None = None) -> str:
    tag, key = sym
    return f"{tag}[{format_letter(key, alphabet)}]"


def _format_monomial(m: Monomial, alphabet: Alphabet | None) -> str:
    parts = []
    for sym, k in m:
        s = format_symbol(sym, alphabet)
        parts.append(s if k == 1 else f"{s}^{k}")
    return " ".join(parts)


def _format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _signed_terms(s: Scalar, alphabet: Alphabet | None) -> list[tuple[bool, str]]:
    """``(negative, magnitude text)`` per monomial, in canonical order."""
    out = []
    for m, q in s.sorted_terms():
        neg = q < 0
        q = abs(q)
        mono = _format_monomial(m, alphabet)
        if not mono:
            out.append((neg, _format_rational(q)))
        elif q == 1:
            out.append((neg, mono))
        else:
            out.append((neg, f"{_format_rational(q)} {mono}"))
    return out


def _join(terms: list[tuple[bool, str]]) -> str:
    if not terms:
        return "0"
    pieces = []
    for i, (neg, text) in enumerate(terms):
        if i == 0:
            pieces.append(f"-{text}" if neg else text)
        else:
            pieces.append(f" - {text}" if neg else f" + {text}")
    return "".join(pieces)


def format_scalar(s: Scalar, alphabet: Alphabet | None = None) -> str:
    return _join(_signed_terms(s, alphabet))


def _coefficient_term(c: Scalar, body: str | None, alphabet: Alphabet | None) -> tuple[bool, str]:
    """One signed term ``c * body``; ``body=None`` stands for the unit."""
    terms = _signed_terms(c, alphabet)
    if len(terms) == 1:
        neg, text = terms[0]
        if body is None:
            return neg, text
        if text == "1":
            return neg, body
        return neg, f"{text} {body}"
    inner = _join(terms)
    return False, f"({inner})" if body is None else f"({inner}) {body}"


def format_element(e: Element, alphabet: Alphabet | None = None) -> str:
    terms = [
        _coefficient_term(c, format_barword(b, alphabet) if b else None, alphabet)
        for b, c in e.sorted_terms()
    ]
    return _join(terms)


def format_tensor(t: Tensor, alphabet: Alphabet | None = None) -> str:
    terms = [
        _coefficient_term(c, " (x) ".join(format_barword(b, alphabet) for b in key), alphabet)
        for key, c in t.sorted_terms()
    ]
    return _join(terms)


# ----------------------------------------------------------------------------
# LaTeX


def _latex_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return rf"\tfrac{{{q.numerator}}}{{{q.denominator}}}"


def _latex_symbol(sym: Symbol, alphabet: Alphabet | None) -> str:
    tag, key = sym
    a = _alpha(alphabet)
    arg = "".join(a.name(i) for i in key)
    if tag in LATEX_TAGS:
        return rf"{LATEX_TAGS[tag]}({arg})"
    return tag if not key else rf"\mathrm{{{tag}}}({arg})"


def _latex_scalar_terms(s: Scalar, alphabet: Alphabet | None) -> list[tuple[bool, str]]:
    out = []
    for m, q in s.sorted_terms():
        neg = q < 0
        q = abs(q)
        mono = "".join(
            _latex_symbol(sym, alphabet) + (f"^{{{k}}}" if k > 1 else "") for sym, k in m
        )
        if not mono:
            out.append((neg, _latex_rational(q)))
        elif q == 1:
            out.append((neg, mono))
        else:
            out.append((neg, _latex_rational(q) + mono))
    return out


def _latex_barword(b: BarWord, alphabet: Alphabet | None) -> str:
    a = _alpha(alphabet)
    return r" \,|\, ".join(
        " ".join("".join(a.name(i) for i in x) if len(x) == 1 else "(" + r"\cdot ".join(a.name(i) for i in x) + ")" for x in w)
        for w in b
    )


def latex_scalar(s: Scalar, alphabet: Alphabet | None = None) -> str:
    return _join(_latex_scalar_terms(s, alphabet))


def latex_element(e: Element, alphabet: Alphabet | None = None) -> str:
    terms = []
    for b, c in e.sorted_terms():
        sc = _latex_scalar_terms(c, alphabet)
        body = _latex_barword(b, alphabet) if b else r"\mathbf{1}"
        if len(sc) == 1:
            neg, text = sc[0]
            terms.append((neg, body if text == "1" else f"{text}\\,{body}"))
        else:
            terms.append((False, rf"\big({_join(sc)}\big){body}"))
    return _join(terms)


def latex_tensor(t: Tensor, alphabet: Alphabet | None = None) -> str:
    terms = []
    for key, c in t.sorted_terms():
        body = r" \otimes ".join(_latex_barword(b, alphabet) if b else r"\mathbf{1}" for b in key)
        sc = _latex_scalar_terms(c, alphabet)
        if len(sc) == 1:
            neg, text = sc[0]
            terms.append((neg, body if text == "1" else f"{text}\\,{body}"))
        else:
            terms.append((False, rf"\big({_join(sc)}\big){body}"))
    return _join(terms)


# ----------------------------------------------------------------------------
# JSON


def barword_json(b: BarWord, alphabet: Alphabet | None = None) -> list[list[str]]:
    return [[format_letter(x, alphabet) for x in w] for w in b]


def _coeff_records(c: Scalar, alphabet: Alphabet | None) -> list[dict]:
    out = []
    for m, q in c.sorted_terms():
        mono = []
        for (tag, key), k in m:
            mono.extend([[tag, format_letter(key, alphabet)]] * k)
        out.append({"monomial": mono, "rat": _format_rational(q)})
    return out


def element_records(e: Element, alphabet: Alphabet | None = None) -> list[dict]:
    """One record per (bar-word, monomial) pair."""
    return [
        {"barword": barword_json(b, alphabet), "coeff": rec}
        for b, c in e.sorted_terms()
        for rec in _coeff_records(c, alphabet)
    ]


def tensor_records(t: Tensor, alphabet: Alphabet | None = None) -> list[dict]:
    return [
        {"legs": [barword_json(b, alphabet) for b in key], "coeff": rec}
        for key, c in t.sorted_terms()
        for rec in _coeff_records(c, alphabet)
    ]


def scalar_records(s: Scalar, alphabet: Alphabet | None = None) -> list[dict]:
    return _coeff_records(s, alphabet)


def dumps(obj) -> str:
    return json.dumps(obj, indent=None, sort_keys=True, ensure_ascii=False)
