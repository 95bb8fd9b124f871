"""``ncwick`` command line.

Exit codes: 0 success, 1 identity failure in ``verify``, 2 usage, parse or
state-file errors.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import sys

from .. import coalgebra as co
from .. import functionals as fn
from .. import wick as wk
from ..core import Element, Tensor, Word, words_up_to
from . import formatting as fmt
from .parse import ParseError, Session, StateFileError, load_state, parse_expression
from .verify import SUITES, render_report, run_suites

DEFAULT_DEGREE_CAP = 8


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ncwick", description="Exact non-commutative Wick polynomials and cumulants.")
    p.add_argument("--state", metavar="FILE", help="JSON state file (default: symbolic phi and psi)")
    p.add_argument("--format", choices=("text", "latex", "json"), default="text")
    p.add_argument("--degree", type=int, default=DEFAULT_DEGREE_CAP, metavar="N", help="session degree cap")
    p.add_argument("--commutative", action="store_true", help="treat A as commutative")
    sub = p.add_subparsers(dest="command", required=True)

    w = sub.add_parser("wick", help="Wick image of an expression")
    w.add_argument("kind", choices=wk.WICK_KINDS)
    w.add_argument("expr")

    c = sub.add_parser("cumulants", help="cumulant tables")
    c.add_argument("family", choices=("free", "boolean", "monotone", "tensor", "cfree"))
    g = c.add_mutually_exclusive_group()
    g.add_argument("--word", metavar="EXPR")
    g.add_argument("--up-to", type=int, metavar="N", default=None)

    pr = sub.add_parser("product", help="Wick product of two expressions")
    pr.add_argument("kind", choices=("free", "boolean", "cfree"))
    pr.add_argument("left")
    pr.add_argument("right")

    cp = sub.add_parser("coproduct", help="coproducts of an expression")
    cp.add_argument("kind", choices=("delta", "shuffle", "prec", "succ"))
    cp.add_argument("expr")

    v = sub.add_parser("verify", help="run the identity suites")
    v.add_argument("--suite", action="append", metavar="NAME", help="suite to run (repeatable; default all)")
    v.add_argument("--max-degree", type=int, default=6, metavar="N")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--list", action="store_true", help="list the suites and exit")
    return p


# ----------------------------------------------------------------------------
# session helpers


def _session(args) -> Session:
    if args.degree < 1:
        raise UsageError("--degree must be at least 1")
    if args.state:
        return load_state(args.state, commutative=args.commutative or None)
    s = Session(commutative=args.commutative)
    s.phi = fn.State("phi", None, args.commutative)
    s.psi = fn.State("psi", None, args.commutative)
    return s


def _parse(session: Session, src: str, cap: int) -> Element:
    e = parse_expression(
        src, session.alphabet, commutative=session.commutative, register=not session.from_file
    )
    if e.degree() > cap:
        raise UsageError(f"expression has degree {e.degree()}, above the session cap {cap}")
    return e


def _single_word(e: Element) -> Word:
    if len(e.terms) != 1:
        raise UsageError("expected a single word")
    (b, c), = e.terms.items()
    if len(b) > 1 or c != 1:
        raise UsageError("expected a single word with coefficient 1")
    return b[0] if b else ()


def _require_psi(session: Session) -> fn.State:
    if session.psi is None:
        raise UsageError("second state required: the state file defines no 'psi'")
    return session.psi


def _emit_element(e: Element, session: Session, fmt_name: str) -> str:
    if fmt_name == "json":
        return fmt.dumps({"kind": "element", "terms": fmt.element_records(e, session.alphabet)})
    if fmt_name == "latex":
        return fmt.latex_element(e, session.alphabet)
    return fmt.format_element(e, session.alphabet)


def _emit_tensor(t: Tensor, session: Session, fmt_name: str) -> str:
    if fmt_name == "json":
        return fmt.dumps({"kind": "tensor", "terms": fmt.tensor_records(t, session.alphabet)})
    if fmt_name == "latex":
        return fmt.latex_tensor(t, session.alphabet)
    return fmt.format_tensor(t, session.alphabet)


# ----------------------------------------------------------------------------
# commands


def _cmd_wick(args, session: Session) -> str:
    x = _parse(session, args.expr, args.degree)
    Phi = fn.extend_state(session.phi)
    if args.kind == "tensor":
        F = wk.wick_tensor(fn.moment_map(session.phi))
    elif args.kind == "cfree":
        F = wk.wick_cfree(Phi, fn.extend_state(_require_psi(session)))
    else:
        F = wk.wick_map(args.kind, Phi)
    if args.kind != "free" and not x.is_bar_free():
        raise UsageError(f"the {args.kind} Wick map acts on T(A); remove the bars")
    return _emit_element(F(x), session, args.format)


def _cumulant_functional(family: str, session: Session):
    Phi = fn.extend_state(session.phi)
    if family == "free":
        return fn.L_prec(Phi)
    if family == "boolean":
        return fn.L_succ(Phi)
    if family == "monotone":
        return fn.log_star(Phi)
    if family == "tensor":
        return fn.log_shuffle(fn.moment_map(session.phi))
    return wk.cfree_cumulants(Phi, fn.extend_state(_require_psi(session)))


def _cmd_cumulants(args, session: Session) -> str:
    f = _cumulant_functional(args.family, session)
    if args.word is not None:
        words = [_single_word(_parse(session, args.word, args.degree))]
    else:
        n = args.up_to if args.up_to is not None else 3
        if n > args.degree:
            raise UsageError(f"--up-to {n} is above the session cap {args.degree}")
        if not len(session.alphabet):
            session.alphabet.add("a")
        words = words_up_to(len(session.alphabet), n, 1)
    rows = [(w, f.on_word(w)) for w in words]
    a = session.alphabet
    if args.format == "json":
        return fmt.dumps(
            {
                "kind": "table",
                "family": args.family,
                "rows": [{"word": [fmt.format_letter(x, a) for x in w], "value": fmt.scalar_records(v, a)} for w, v in rows],
            }
        )
    if args.format == "latex":
        return "\n".join(
            rf"{args.family}({fmt._latex_barword((w,), a)}) &= {fmt.latex_scalar(v, a)} \\" for w, v in rows
        )
    return "\n".join(f"{args.family}[{fmt.format_word(w, a)}] = {fmt.format_scalar(v, a)}" for w, v in rows)


def _cmd_product(args, session: Session) -> str:
    x = _parse(session, args.left, args.degree)
    y = _parse(session, args.right, args.degree)
    if x.degree() + y.degree() > args.degree:
        raise UsageError(f"the product has degree above the session cap {args.degree}")
    Phi = fn.extend_state(session.phi)
    if args.kind == "free":
        F, G = wk.wick_free(Phi), wk.wick_free_inverse(Phi)
    elif args.kind == "boolean":
        F = wk.wick_boolean(Phi)
        G = wk.inverse_map(F)
    else:
        F = wk.wick_cfree(Phi, fn.extend_state(_require_psi(session)))
        G = wk.inverse_map(F)
    try:
        return _emit_element(wk.wick_product(F, x, y, G), session, args.format)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _cmd_coproduct(args, session: Session) -> str:
    x = _parse(session, args.expr, args.degree)
    out = Tensor()
    for b, c in x.terms.items():
        if args.kind == "delta":
            t = co.delta_on_barword(b)
        elif args.kind == "shuffle":
            if len(b) > 1:
                raise UsageError("the unshuffle coproduct acts on T(A); remove the bars")
            t = co.delta_shuffle(b[0] if b else ())
        else:
            if not b:
                raise UsageError("the half-coproducts are not defined on the unit")
            t = co.delta_prec_plus(b, bar=True) if args.kind == "prec" else co.delta_succ_plus(b, bar=True)
        out = out + t * c
    return _emit_tensor(out, session, args.format)


def _cmd_verify(args) -> tuple[int, str]:
    if args.list:
        return 0, "\n".join(f"{name:<18} {desc}" for name, (desc, _) in SUITES.items())
    if args.max_degree < 1:
        raise UsageError("--max-degree must be at least 1")
    if args.max_degree > args.degree:
        raise UsageError(f"--max-degree {args.max_degree} is above the session cap {args.degree}")
    try:
        results = run_suites(args.suite, args.max_degree, args.seed)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    code = 0 if all(r.ok for r in results) else 1
    return code, render_report(results, args.max_degree, args.seed)


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "verify":
            code, text = _cmd_verify(args)
            print(text, file=out)
            return code
        session = _session(args)
        handler = {
            "wick": _cmd_wick,
            "cumulants": _cmd_cumulants,
            "product": _cmd_product,
            "coproduct": _cmd_coproduct,
        }[args.command]
        print(handler(args, session), file=out)
        return 0
    except (UsageError, ParseError, StateFileError, fn.MissingMomentError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) else str(exc)
        print(f"ncwick: error: {msg}", file=err)
        return 2
    except OSError as exc:
        print(f"ncwick: error: {exc}", file=err)
        return 2


def run_captured(argv: list[str]) -> str:
    """Exit code and combined output of one invocation, as text."""
    buf_out, buf_err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(buf_out), contextlib.redirect_stderr(buf_err):
        code = run(argv, buf_out, buf_err)
    return f"exit {code}\n{buf_out.getvalue()}{buf_err.getvalue()}"


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
