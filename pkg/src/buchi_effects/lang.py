"""Syntax of the procedure language.

    e ::= o(a) | f | e1 ; e2 | e1 ? e2

``;`` is right-associative and binds tighter than ``?``; ``?`` is parsed
left-associative. A program is one ``name = expr`` definition per line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple, Union

from .automaton import Automaton


class ProgramError(ValueError):
    """Syntax or well-formedness error in a program."""


@dataclass(frozen=True)
class Emit:
    symbol: str


@dataclass(frozen=True)
class Call:
    name: str


@dataclass(frozen=True)
class Seq:
    first: "Expr"
    second: "Expr"


@dataclass(frozen=True)
class Choice:
    left: "Expr"
    right: "Expr"


Expr = Union[Emit, Call, Seq, Choice]


@dataclass(frozen=True)
class Program:
    procedures: Dict[str, Expr]

    @property
    def names(self) -> List[str]:
        return list(self.procedures)

    def body(self, name: str) -> Expr:
        return self.procedures[name]

    def __str__(self) -> str:
        return "".join(f"{name} = {pretty(e)}\n" for name, e in self.procedures.items())


_TOKEN = re.compile(r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[();?=])|(?P<bad>\S))")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def _tokenize(text: str, line: int) -> List[Tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        if m.group("bad") is not None:
            raise ProgramError(f"line {line}, column {m.start('bad') + 1}: unexpected character {m.group('bad')!r}")
        kind = "ident" if m.group("ident") is not None else "punct"
        start = m.start(kind)
        toks.append((kind, m.group(kind), start + 1))
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, toks, line: int, width: int):
        self.toks = toks
        self.i = 0
        self.line = line
        self.width = width

    def error(self, msg: str) -> ProgramError:
        col = self.toks[self.i][2] if self.i < len(self.toks) else self.width + 1
        return ProgramError(f"line {self.line}, column {col}: {msg}")

    def peek(self) -> Optional[str]:
        return self.toks[self.i][1] if self.i < len(self.toks) else None

    def take(self, value: Optional[str] = None, kind: Optional[str] = None) -> str:
        if self.i >= len(self.toks):
            raise self.error(f"expected {value or kind}, found end of line")
        k, v, _ = self.toks[self.i]
        if (value is not None and v != value) or (kind is not None and k != kind):
            raise self.error(f"expected {value or kind}, found {v!r}")
        self.i += 1
        return v

    def expr(self) -> Expr:
        e = self.seq()
        while self.peek() == "?":
            self.i += 1
            e = Choice(e, self.seq())
        return e

    def seq(self) -> Expr:
        first = self.atom()
        if self.peek() == ";":
            self.i += 1
            return Seq(first, self.seq())
        return first

    def atom(self) -> Expr:
        tok = self.peek()
        if tok == "(":
            self.i += 1
            e = self.expr()
            self.take(")")
            return e
        if tok == "o":
            self.i += 1
            self.take("(")
            sym = self.take(kind="ident")
            if sym == "o":
                raise ProgramError(f"line {self.line}: 'o' is reserved and cannot be an event")
            self.take(")")
            return Emit(sym)
        if self.i < len(self.toks) and self.toks[self.i][0] == "ident":
            self.i += 1
            return Call(tok)
        raise self.error("expected o(...), a procedure name or '('")


def _logical_lines(text: str) -> Iterator[Tuple[int, str]]:
    buf, start = "", None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if start is None:
            start = lineno
        if line.endswith("\\"):
            buf += line[:-1] + " "
            continue
        buf += line
        if buf.strip():
            yield start, buf
        buf, start = "", None
    if buf.strip():
        yield start, buf


def parse_expr(text: str, line: int = 1) -> Expr:
    toks = _tokenize(text, line)
    p = _Parser(toks, line, len(text))
    e = p.expr()
    if p.i != len(toks):
        raise p.error(f"unexpected {p.peek()!r} (missing operator?)")
    return e


def parse_program(text: str) -> Program:
    """Parse ``.rec`` source.

    >>> str(parse_program("f = o(b) ? o(a) ; g\\ng = f"))
    'f = o(b) ? o(a); g\\ng = f\\n'
    """
    procs: Dict[str, Expr] = {}
    for lineno, line in _logical_lines(text):
        toks = _tokenize(line, lineno)
        if len(toks) < 2 or toks[0][0] != "ident" or toks[1][1] != "=":
            col = toks[0][2] if toks else 1
            raise ProgramError(f"line {lineno}, column {col}: expected 'name = expression'")
        name = toks[0][1]
        if name == "o":
            raise ProgramError(f"line {lineno}, column {toks[0][2]}: 'o' is reserved")
        if name in procs:
            raise ProgramError(f"line {lineno}: duplicate procedure name {name!r}")
        p = _Parser(toks, lineno, len(line))
        p.i = 2
        body = p.expr()
        if p.i != len(toks):
            raise p.error(f"unexpected {p.peek()!r} (missing operator?)")
        procs[name] = body
    if not procs:
        raise ProgramError("program defines no procedures")
    return Program(procs)


def pretty(e: Expr) -> str:
    if isinstance(e, Emit):
        return f"o({e.symbol})"
    if isinstance(e, Call):
        return e.name
    if isinstance(e, Seq):
        first = pretty(e.first)
        if not isinstance(e.first, (Emit, Call)):
            first = f"({first})"
        second = pretty(e.second)
        if isinstance(e.second, Choice):
            second = f"({second})"
        return f"{first}; {second}"
    right = pretty(e.right)
    if isinstance(e.right, Choice):
        right = f"({right})"
    return f"{pretty(e.left)} ? {right}"


def subexpressions(e: Expr) -> Iterator[Expr]:
    stack = [e]
    while stack:
        x = stack.pop()
        yield x
        if isinstance(x, Seq):
            stack += [x.second, x.first]
        elif isinstance(x, Choice):
            stack += [x.right, x.left]


def validate(program: Program, aut: Optional[Automaton] = None) -> None:
    """Check call targets are declared and events belong to the policy alphabet."""
    alphabet = set(aut.alphabet) if aut is not None else None
    for name, body in program.procedures.items():
        for x in subexpressions(body):
            if isinstance(x, Call) and x.name not in program.procedures:
                raise ProgramError(f"undefined procedure {x.name} (called from {name})")
            if alphabet is not None and isinstance(x, Emit) and x.symbol not in alphabet:
                raise ProgramError(f"unknown event {x.symbol} (not in policy alphabet)")
