"""Concrete syntax for poly-infix terms.

Grammar::

    term  := chain
    chain := atom { KERNEL atom }
    atom  := IDENT | NUMBER
           | IDENT "(" term { "," term } ")"        fixed operator
           | KERNEL "(" [ term { "," term } ] ")"   explicit short form, unit kernels only
           | "(" term ")"

An unbracketed run of one kernel symbol is one ``PolyApp``: ``2+2+3`` has
arity three.  Distinct kernels may share a level only when both declare a
precedence and the precedences differ.

The printer emits the canonical text: one space around kernel symbols, none
inside parentheses, ``", "`` between call arguments, and every ``PolyApp``
argument of a ``PolyApp`` in parentheses.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

from polyinfix.errors import PolyInfixError
from polyinfix.terms import (
    IDENT_RE,
    NUMBER_RE,
    Const,
    FixedApp,
    OperatorTable,
    PolyApp,
    Term,
    Var,
    default_table,
)

MIXED_KERNELS = "MixedKernels"
ARITY_MISMATCH = "ArityMismatch"
UNKNOWN_SYMBOL = "UnknownSymbol"
UNBALANCED_BRACKETS = "UnbalancedBrackets"
EMPTY_INPUT = "EmptyInput"
BAD_TOKEN = "BadToken"

DIAGNOSTIC_KINDS = (
    MIXED_KERNELS, ARITY_MISMATCH, UNKNOWN_SYMBOL, UNBALANCED_BRACKETS, EMPTY_INPUT, BAD_TOKEN,
)


@dataclass(frozen=True)
class ParseDiagnostic:
    kind: str
    offset: int
    line: int
    column: int
    message: str

    def __str__(self):
        return f"{self.line}:{self.column}: {self.kind}: {self.message}"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "offset": self.offset,
            "line": self.line,
            "column": self.column,
            "message": self.message,
        }


class ParseError(PolyInfixError):
    kind = "ParseError"

    def __init__(self, diagnostic: ParseDiagnostic):
        super().__init__(str(diagnostic))
        self.diagnostic = diagnostic


def _diagnostic(text: str, offset: int, kind: str, message: str) -> ParseDiagnostic:
    if text:
        offset = max(0, min(offset, len(text) - 1))
    else:
        offset = 0
    # byte offset into the UTF-8 encoding
    byte_offset = len(text[:offset].encode("utf-8"))
    line = text.count("\n", 0, offset) + 1
    column = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return ParseDiagnostic(kind, byte_offset, line, column, message)


# ---------------------------------------------------------------------------
# lexer

# token kinds
IDENT, NUMBER, KERNEL, LPAREN, RPAREN, COMMA, END = (
    "IDENT", "NUMBER", "KERNEL", "(", ")", ",", "END",
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int
    kernel: Optional[str] = None  # canonical symbol for KERNEL tokens


def _is_ident_char(ch: str) -> bool:
    return ch.isalnum() or ch in "_'"


def tokenize(text: str, table: OperatorTable) -> List[Token]:
    symbols = table.kernel_symbols
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "(),":
            tokens.append(Token(ch, ch, i))
            i += 1
            continue
        matched = None
        for s in symbols:
            if text.startswith(s, i):
                end = i + len(s)
                if _is_ident_char(s[-1]) and end < n and _is_ident_char(text[end]):
                    continue
                matched = s
                break
        if matched is not None:
            tokens.append(Token(KERNEL, matched, i, table.canonical_kernel(matched)))
            i += len(matched)
            continue
        m = NUMBER_RE.match(text, i)
        if m:
            if m.end() < n and _is_ident_char(text[m.end()]):
                raise ParseError(_diagnostic(
                    text, m.end(), BAD_TOKEN, "numerals must not run into identifiers"))
            tokens.append(Token(NUMBER, m.group(), i))
            i = m.end()
            continue
        m = IDENT_RE.match(text, i)
        if m:
            tokens.append(Token(IDENT, m.group(), i))
            i = m.end()
            continue
        # an operator-looking run that matches no declared kernel
        j = i
        while j < n and not text[j].isspace() and text[j] not in "()," and not _is_ident_char(text[j]):
            j += 1
        if j > i:
            raise ParseError(_diagnostic(
                text, i, UNKNOWN_SYMBOL, f"unknown operator symbol {text[i:j]!r}"))
        raise ParseError(_diagnostic(text, i, BAD_TOKEN, f"unexpected character {ch!r}"))
    tokens.append(Token(END, "", n))
    return tokens


# ---------------------------------------------------------------------------
# parser

class _Parser:
    def __init__(self, text: str, table: OperatorTable):
        self.text = text
        self.table = table
        self.tokens = tokenize(text, table)
        self.i = 0
        self.depth = 0

    def error(self, pos, kind, message):
        raise ParseError(_diagnostic(self.text, pos, kind, message))

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def parse(self) -> Term:
        if self.tok.kind == END:
            self.error(0, EMPTY_INPUT, "empty input")
        t = self.term()
        if self.tok.kind == RPAREN:
            self.error(self.tok.pos, UNBALANCED_BRACKETS, "unmatched ')'")
        if self.tok.kind != END:
            self.error(self.tok.pos, BAD_TOKEN, f"unexpected {self.tok.text!r}")
        return t

    def term(self) -> Term:
        operands = [self.atom()]
        ops = []
        while self.tok.kind == KERNEL:
            ops.append(self.advance())
            operands.append(self.atom())
        return self.build(operands, ops)

    def build(self, operands, ops) -> Term:
        if not ops:
            return operands[0]
        kernels = {o.kernel for o in ops}
        if len(kernels) == 1:
            return PolyApp(ops[0].kernel, operands)
        prec = {k: self.table.kernel(k).precedence for k in kernels}
        for o in ops:
            if prec[o.kernel] is None:
                self.error(
                    o.pos, MIXED_KERNELS,
                    f"kernels {', '.join(sorted(kernels))} mixed without brackets "
                    f"and {o.kernel!r} declares no precedence",
                )
        lowest = min(prec.values())
        at_lowest = sorted(k for k in kernels if prec[k] == lowest)
        if len(at_lowest) > 1:
            o = next(o for o in ops if o.kernel == at_lowest[1])
            self.error(
                o.pos, MIXED_KERNELS,
                f"kernels {' and '.join(repr(k) for k in at_lowest)} share precedence {lowest}",
            )
        kernel = at_lowest[0]
        segments = []
        seg_operands, seg_ops = [operands[0]], []
        for o, rhs in zip(ops, operands[1:]):
            if o.kernel == kernel:
                segments.append(self.build(seg_operands, seg_ops))
                seg_operands, seg_ops = [rhs], []
            else:
                seg_ops.append(o)
                seg_operands.append(rhs)
        segments.append(self.build(seg_operands, seg_ops))
        return PolyApp(kernel, segments)

    def arguments(self, open_tok: Token, allow_empty: bool) -> list:
        args = []
        if self.tok.kind == RPAREN and allow_empty:
            self.advance()
            return args
        while True:
            args.append(self.term())
            if self.tok.kind == COMMA:
                self.advance()
                continue
            if self.tok.kind == RPAREN:
                self.advance()
                return args
            if self.tok.kind == END:
                self.error(open_tok.pos, UNBALANCED_BRACKETS, "'(' is never closed")
            self.error(self.tok.pos, BAD_TOKEN, f"expected ',' or ')', got {self.tok.text!r}")

    def atom(self) -> Term:
        tok = self.tok
        if tok.kind == NUMBER:
            self.advance()
            return Const(tok.text)
        if tok.kind == IDENT:
            self.advance()
            name = tok.text
            if self.tok.kind == LPAREN:
                open_tok = self.advance()
                arity = self.table.fixed_ops.get(name)
                if arity is None:
                    self.error(tok.pos, UNKNOWN_SYMBOL, f"unknown operator {name!r}")
                args = self.arguments(open_tok, allow_empty=False)
                if len(args) != arity:
                    self.error(
                        tok.pos, ARITY_MISMATCH,
                        f"{name} takes {arity} argument{'s' if arity != 1 else ''}, got {len(args)}",
                    )
                return FixedApp(name, args)
            if name in self.table.fixed_ops:
                self.error(
                    tok.pos, ARITY_MISMATCH,
                    f"{name} takes {self.table.fixed_ops[name]} arguments, got none",
                )
            if name in self.table.constants:
                return Const(name)
            return Var(name)
        if tok.kind == LPAREN:
            self.advance()
            if self.tok.kind == RPAREN:
                self.error(self.tok.pos, BAD_TOKEN, "empty brackets")
            t = self.term()
            if self.tok.kind == RPAREN:
                self.advance()
                return t
            if self.tok.kind == END:
                self.error(tok.pos, UNBALANCED_BRACKETS, "'(' is never closed")
            self.error(self.tok.pos, BAD_TOKEN, f"expected ')', got {self.tok.text!r}")
        if tok.kind == KERNEL and self.tokens[self.i + 1].kind == LPAREN:
            spec = self.table.kernel(tok.kernel)
            self.advance()
            open_tok = self.advance()
            args = self.arguments(open_tok, allow_empty=True)
            if spec.unit is None:
                self.error(
                    tok.pos, ARITY_MISMATCH,
                    f"kernel {tok.kernel!r} has no unit, so explicit short applications are not allowed",
                )
            if len(args) > 1:
                self.error(
                    tok.pos, ARITY_MISMATCH,
                    f"explicit {tok.kernel}-application takes at most one argument; use infix",
                )
            return PolyApp(tok.kernel, args)
        if tok.kind == END:
            if self.i > 0 and self.tokens[self.i - 1].kind == LPAREN:
                self.error(self.tokens[self.i - 1].pos, UNBALANCED_BRACKETS, "'(' is never closed")
            self.error(tok.pos, BAD_TOKEN, "unexpected end of input")
        if tok.kind == RPAREN:
            self.error(tok.pos, BAD_TOKEN, "expected an operand before ')'")
        self.error(tok.pos, BAD_TOKEN, f"expected an operand, got {tok.text!r}")


def parse(text: str, table: Optional[OperatorTable] = None) -> Term:
    """Parse ``text`` into a term; raises :class:`ParseError` carrying a :class:`ParseDiagnostic`."""
    return _Parser(text, table or default_table()).parse()


def try_parse(text: str, table: Optional[OperatorTable] = None):
    """Return a term, or the :class:`ParseDiagnostic` describing why there is none."""
    try:
        return parse(text, table)
    except ParseError as exc:
        return exc.diagnostic


# ---------------------------------------------------------------------------
# printer

def print_term(t: Term, table: Optional[OperatorTable] = None) -> str:
    # table is accepted for symmetry with parse; the canonical form needs no lookups
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        return t.literal
    if isinstance(t, FixedApp):
        return f"{t.symbol}({', '.join(print_term(a) for a in t.args)})"
    if isinstance(t, PolyApp):
        if len(t.args) < 2:
            return f"{t.kernel}({', '.join(print_term(a) for a in t.args)})"
        parts = []
        for a in t.args:
            s = print_term(a)
            parts.append(f"({s})" if isinstance(a, PolyApp) else s)
        return f" {t.kernel} ".join(parts)
    raise TypeError(f"not a term: {t!r}")


def to_json(t: Term) -> object:
    """Plain-data form of a term, used in the CLI's JSON output."""
    if isinstance(t, Var):
        return {"var": t.name}
    if isinstance(t, Const):
        return {"const": t.literal}
    if isinstance(t, FixedApp):
        return {"op": t.symbol, "args": [to_json(a) for a in t.args]}
    return {"kernel": t.kernel, "args": [to_json(a) for a in t.args]}
