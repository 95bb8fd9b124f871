"""Expression parser and state-file loader.

Grammar (whitespace separates tokens)::

    expr     := [sign] term (sign term)*
    term     := factor* [barword]          at least one of the two
    factor   := RATIONAL | symbol ['^' INT] | '(' expr ')'
    symbol   := NAME '[' [letter] ']'       e.g. phi[a.b], t[]
    barword  := word ('|' word)*
    word     := letter+
    letter   := NAME ('.' NAME)*

A parenthesized factor must be a scalar (an expression without letters).
A term without a bar-word is a multiple of the unit; ``1`` on its own is
the unit.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from ..core import ONE, Alphabet, BarWord, Element, Scalar, letter
from ..functionals import State

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:/\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op>[.|+\-()\[\]^])
    """,
    re.VERBOSE,
)


class ParseError(ValueError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"syntax error at position {position}: {message}"
        super().__init__(message)


class UnknownGeneratorError(ParseError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} at position {position}"
        ValueError.__init__(self, message)


class StateFileError(ValueError):
    pass


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("end", "", len(src)))
    return out


class _Parser:
    def __init__(self, src: str, alphabet: Alphabet, commutative: bool, register: bool):
        self.toks = _tokenize(src)
        self.i = 0
        self.alphabet = alphabet
        self.commutative = commutative
        self.register = register

    # -- token helpers ----------------------------------------------------
    def peek(self, k: int = 0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, text, pos = self.take()
        if text != value:
            raise ParseError(f"expected {value!r}, found {text or 'end of input'!r}", pos)

    def generator(self, name: str, pos: int) -> int:
        if name in self.alphabet:
            return self.alphabet.index(name)
        if self.register:
            return self.alphabet.add(name)
        raise UnknownGeneratorError(f"unknown generator {name!r}", pos)

    def at_symbol(self) -> bool:
        return self.peek()[0] == "name" and self.peek(1)[1] == "["

    def at_letter(self) -> bool:
        return self.peek()[0] == "name" and not self.at_symbol()

    def at_factor(self) -> bool:
        kind, text, _ = self.peek()
        return kind == "num" or text == "(" or self.at_symbol()

    # -- grammar ----------------------------------------------------------
    def expr(self) -> Element:
        total = Element()
        sign = 1
        kind, text, pos = self.peek()
        if text in "+-" and kind == "op":
            self.take()
            sign = -1 if text == "-" else 1
        while True:
            total = total + self.term().scale(sign)
            kind, text, _ = self.peek()
            if kind == "op" and text in ("+", "-"):
                self.take()
                sign = -1 if text == "-" else 1
                continue
            return total

    def term(self) -> Element:
        coeff = ONE
        seen = False
        while self.at_factor():
            coeff = coeff * self.factor()
            seen = True
        if self.at_letter():
            return Element.of_bar(self.barword(), coeff)
        if not seen:
            kind, text, pos = self.peek()
            raise ParseError(f"expected a term, found {text or 'end of input'!r}", pos)
        return Element.of_bar((), coeff)

    def factor(self) -> Scalar:
        kind, text, pos = self.take()
        if kind == "num":
            return Scalar.const(Fraction(text))
        if text == "(":
            inner = self.expr()
            self.expect(")")
            if any(inner.terms.keys() - {()}):
                raise ParseError("parentheses may only contain scalars", pos)
            return inner.coefficient(())
        # symbol
        tag = text
        self.expect("[")
        key: tuple[int, ...] = ()
        if self.peek()[1] != "]":
            key = self.letter()
        self.expect("]")
        if self.commutative:
            key = tuple(sorted(key))
        val = Scalar.var((tag, key))
        if self.peek()[1] == "^":
            self.take()
            kind, text, pos = self.take()
            if kind != "num" or "/" in text:
                raise ParseError("exponent must be a non-negative integer", pos)
            val = val ** int(text)
        return val

    def barword(self) -> BarWord:
        words = [self.word()]
        while self.peek()[1] == "|":
            self.take()
            if not self.at_letter():
                kind, text, pos = self.peek()
                raise ParseError(f"expected a word after '|', found {text or 'end of input'!r}", pos)
            words.append(self.word())
        return tuple(words)

    def word(self):
        letters = [self.letter()]
        while self.at_letter():
            letters.append(self.letter())
        return tuple(letters)

    def letter(self):
        kind, text, pos = self.take()
        if kind != "name":
            raise ParseError(f"expected a generator name, found {text or 'end of input'!r}", pos)
        gens = [self.generator(text, pos)]
        while self.peek()[1] == ".":
            self.take()
            kind, text, pos = self.take()
            if kind != "name":
                raise ParseError(f"expected a generator name after '.', found {text or 'end of input'!r}", pos)
            gens.append(self.generator(text, pos))
        return letter(*gens, commutative=self.commutative)


def parse_expression(
    src: str,
    alphabet: Alphabet | None = None,
    *,
    commutative: bool = False,
    register: bool = True,
) -> Element:
    """Parse the text form of an element of T(T(A)).

    Unknown generator names are added to ``alphabet`` when ``register`` is
    true and rejected otherwise.
    """
    alphabet = alphabet if alphabet is not None else Alphabet()
    p = _Parser(src, alphabet, commutative, register)
    if p.peek()[0] == "end":
        raise ParseError("empty expression", 0)
    out = p.expr()
    kind, text, pos = p.peek()
    if kind != "end":
        raise ParseError(f"unexpected {text!r}", pos)
    return out


def _letter_from_text(text: str, alphabet: Alphabet, commutative: bool, register: bool):
    gens = []
    for name in text.split("."):
        if name not in alphabet:
            if not register:
                raise UnknownGeneratorError(f"unknown generator {name!r}")
            alphabet.add(name)
        gens.append(alphabet.index(name))
    return letter(*gens, commutative=commutative)


def parse_json_element(
    text: str,
    alphabet: Alphabet | None = None,
    *,
    commutative: bool = False,
    register: bool = True,
) -> Element:
    """Inverse of the JSON element output (a document with a ``terms`` list)."""
    alphabet = alphabet if alphabet is not None else Alphabet()
    doc = json.loads(text)
    records = doc["terms"] if isinstance(doc, dict) else doc
    out = Element()
    for rec in records:
        b = tuple(
            tuple(_letter_from_text(x, alphabet, commutative, register) for x in w)
            for w in rec["barword"]
        )
        c = Scalar.const(Fraction(rec["coeff"]["rat"]))
        for tag, key in rec["coeff"]["monomial"]:
            k = _letter_from_text(key, alphabet, commutative, register) if key else ()
            c = c * Scalar.var((tag, k))
        out = out + Element.of_bar(b, c)
    return out


# ----------------------------------------------------------------------------
# state files


@dataclass
class Session:
    """Generators, states and evaluation mode for one CLI invocation."""

    alphabet: Alphabet = field(default_factory=Alphabet)
    phi: State = field(default_factory=State)
    psi: State | None = None
    commutative: bool = False
    from_file: bool = False


def _rational(value, where: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise StateFileError(f"non-rational value {value!r} for {where}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str) and re.fullmatch(r"\s*-?\d+(/\d+)?\s*", value):
        return Fraction(value.strip())
    raise StateFileError(f"non-rational value {value!r} for {where}")


def load_state(path: str | Path, commutative: bool | None = None) -> Session:
    """Read a state file.

    Layout::

        {"generators": ["a", "b"], "mode": "noncommutative",
         "states": {"phi": {"mode": "table", "moments": {"a": "0", "a.a": "1"}},
                    "psi": {"mode": "symbolic"}}}
    """
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise StateFileError(f"malformed JSON in {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise StateFileError("the state file must contain a JSON object")
    names = doc.get("generators", [])
    if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
        raise StateFileError("'generators' must be a list of names")
    alphabet = Alphabet()
    for n in names:
        if n in alphabet:
            raise StateFileError(f"duplicate generator {n!r}")
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", n):
            raise StateFileError(f"invalid generator name {n!r}")
        alphabet.add(n)
    mode = doc.get("mode", "noncommutative")
    if mode not in ("noncommutative", "commutative"):
        raise StateFileError(f"unknown mode {mode!r}")
    comm = (mode == "commutative") if commutative is None else (commutative or mode == "commutative")
    states = doc.get("states", {"phi": {"mode": "symbolic"}})
    if not isinstance(states, dict):
        raise StateFileError("'states' must be an object")
    unknown = set(states) - {"phi", "psi"}
    if unknown:
        raise StateFileError(f"unknown state(s) {sorted(unknown)}; only 'phi' and 'psi' are allowed")
    if "phi" not in states:
        raise StateFileError("the state 'phi' is required")
    built = {}
    for tag, spec in states.items():
        if not isinstance(spec, dict):
            raise StateFileError(f"state {tag!r} must be an object")
        smode = spec.get("mode", "table" if "moments" in spec else "symbolic")
        if smode == "symbolic":
            built[tag] = State(tag, None, comm)
            continue
        if smode != "table":
            raise StateFileError(f"unknown mode {smode!r} for state {tag!r}")
        moments = spec.get("moments", {})
        if not isinstance(moments, dict):
            raise StateFileError(f"moments of {tag!r} must be an object")
        table = {}
        for key, value in moments.items():
            try:
                gens = tuple(alphabet.index(n) for n in key.split("."))
            except KeyError as exc:
                raise StateFileError(f"moment key {key!r} of {tag!r}: {exc.args[0]}") from None
            if comm:
                gens = tuple(sorted(gens))
            q = _rational(value, f"{tag}[{key}]")
            if gens in table and table[gens] != q:
                raise StateFileError(f"conflicting values for {tag}[{key}]")
            table[gens] = q
        built[tag] = State(tag, table, comm)
    return Session(alphabet, built["phi"], built.get("psi"), comm, True)
