"""Tiny expression language for model coefficient functions.

Supports real literals, named symbols, ``+ - * /``, unary minus, ``sin`` and
``cos``, and integer powers written ``base^exponent``.  The language is kept
deliberately small so that parity checks of the parsed functions stay
meaningful.

Parsing produces an immutable AST; ``to_text`` prints a canonical form whose
re-parse yields the identical tree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArityError, ModelSyntaxError, UnknownSymbol

FUNCTIONS = {"sin": np.sin, "cos": np.cos}


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Sym:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Bin:
    op: str  # + - * /
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


@dataclass(frozen=True)
class Call:
    fn: str
    arg: object


@dataclass(frozen=True)
class _Token:
    kind: str  # num | name | op | lparen | rparen | comma | end
    text: str
    column: int


def _tokenize(text):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        col = i + 1
        if ch.isdigit() or (ch == "." and i + 1 < len(text) and text[i + 1].isdigit()):
            j = i
            seen_dot = False
            while j < len(text) and (text[j].isdigit() or (text[j] == "." and not seen_dot)):
                seen_dot = seen_dot or text[j] == "."
                j += 1
            if j < len(text) and text[j] in "eE":
                k = j + 1
                if k < len(text) and text[k] in "+-":
                    k += 1
                if k < len(text) and text[k].isdigit():
                    while k < len(text) and text[k].isdigit():
                        k += 1
                    j = k
            tokens.append(_Token("num", text[i:j], col))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("name", text[i:j], col))
            i = j
        elif ch in "+-*/^":
            tokens.append(_Token("op", ch, col))
            i += 1
        elif ch == "(":
            tokens.append(_Token("lparen", ch, col))
            i += 1
        elif ch == ")":
            tokens.append(_Token("rparen", ch, col))
            i += 1
        elif ch == ",":
            tokens.append(_Token("comma", ch, col))
            i += 1
        else:
            raise ModelSyntaxError(f"unexpected character {ch!r}", column=col)
    tokens.append(_Token("end", "", len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind, what):
        tok = self.next()
        if tok.kind != kind:
            raise ModelSyntaxError(
                f"expected {what}, found {tok.text or 'end of input'!r}", column=tok.column
            )
        return tok

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ModelSyntaxError(f"unexpected {tok.text!r}", column=tok.column)
        return node

    def expr(self):
        node = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.next().text
            node = Bin(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.next().text
            node = Bin(op, node, self.unary())
        return node

    def unary(self):
        tok = self.peek()
        if tok.kind == "op" and tok.text in "+-":
            self.next()
            arg = self.unary()
            return arg if tok.text == "+" else Neg(arg)
        return self.power()

    def power(self):
        node = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.next()
            sign = 1
            tok = self.peek()
            if tok.kind == "op" and tok.text in "+-":
                sign = -1 if tok.text == "-" else 1
                self.next()
            tok = self.expect("num", "an integer exponent")
            try:
                exponent = int(tok.text)
            except ValueError:
                raise ModelSyntaxError(
                    f"exponent must be an integer, found {tok.text!r}", column=tok.column
                ) from None
            return Pow(node, sign * exponent)
        return node

    def atom(self):
        tok = self.next()
        if tok.kind == "num":
            return Num(float(tok.text))
        if tok.kind == "name":
            if self.peek().kind == "lparen":
                self.next()
                args = [self.expr()]
                while self.peek().kind == "comma":
                    self.next()
                    args.append(self.expr())
                closing = self.next()
                if closing.kind != "rparen":
                    raise ModelSyntaxError(
                        "unbalanced parenthesis in function call", column=closing.column
                    )
                if tok.text not in FUNCTIONS:
                    raise UnknownSymbol(f"unknown function {tok.text!r}", column=tok.column)
                if len(args) != 1:
                    raise ArityError(
                        f"{tok.text} takes 1 argument, got {len(args)}", column=tok.column
                    )
                return Call(tok.text, args[0])
            return Sym(tok.text)
        if tok.kind == "lparen":
            node = self.expr()
            closing = self.next()
            if closing.kind != "rparen":
                raise ModelSyntaxError("unbalanced parenthesis", column=closing.column)
            return node
        raise ModelSyntaxError(
            f"expected a value, found {tok.text or 'end of input'!r}", column=tok.column
        )


def parse(text: str):
    """Parse an expression string into an AST."""
    return _Parser(_tokenize(text)).parse()


def free_symbols(node) -> set:
    if isinstance(node, Sym):
        return {node.name}
    if isinstance(node, Neg):
        return free_symbols(node.arg)
    if isinstance(node, Bin):
        return free_symbols(node.left) | free_symbols(node.right)
    if isinstance(node, Pow):
        return free_symbols(node.base)
    if isinstance(node, Call):
        return free_symbols(node.arg)
    return set()


def evaluate(node, env):
    """Evaluate at a point; ``env`` values may be scalars or numpy arrays."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Sym):
        try:
            return env[node.name]
        except KeyError:
            raise UnknownSymbol(f"symbol {node.name!r} has no value") from None
    if isinstance(node, Neg):
        return -evaluate(node.arg, env)
    if isinstance(node, Bin):
        left = evaluate(node.left, env)
        right = evaluate(node.right, env)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        return left / right
    if isinstance(node, Pow):
        return evaluate(node.base, env) ** node.exponent
    return FUNCTIONS[node.fn](evaluate(node.arg, env))


def compile_fn(node):
    """Close the AST over into nested callables (cheaper than re-dispatching
    on every grid point)."""
    if isinstance(node, Num):
        value = node.value
        return lambda env: value
    if isinstance(node, Sym):
        name = node.name
        return lambda env: env[name]
    if isinstance(node, Neg):
        inner = compile_fn(node.arg)
        return lambda env: -inner(env)
    if isinstance(node, Bin):
        left, right = compile_fn(node.left), compile_fn(node.right)
        op = node.op
        if op == "+":
            return lambda env: left(env) + right(env)
        if op == "-":
            return lambda env: left(env) - right(env)
        if op == "*":
            return lambda env: left(env) * right(env)
        return lambda env: left(env) / right(env)
    if isinstance(node, Pow):
        base = compile_fn(node.base)
        exponent = node.exponent
        return lambda env: base(env) ** exponent
    fn = FUNCTIONS[node.fn]
    inner = compile_fn(node.arg)
    return lambda env: fn(inner(env))


_LEVEL_ADD, _LEVEL_MUL, _LEVEL_UNARY, _LEVEL_POW, _LEVEL_ATOM = 1, 2, 3, 4, 5


def _level(node):
    if isinstance(node, Bin):
        return _LEVEL_ADD if node.op in "+-" else _LEVEL_MUL
    if isinstance(node, Neg):
        return _LEVEL_UNARY
    if isinstance(node, Pow):
        return _LEVEL_POW
    return _LEVEL_ATOM


def _wrap(node, minimum):
    text = to_text(node)
    return f"({text})" if _level(node) < minimum else text


def to_text(node) -> str:
    """Canonical rendering; ``parse(to_text(e)) == e``."""
    if isinstance(node, Num):
        value = node.value
        if value == int(value) and abs(value) < 1e15:
            return str(int(value))
        return repr(value)
    if isinstance(node, Sym):
        return node.name
    if isinstance(node, Neg):
        return "-" + _wrap(node.arg, _LEVEL_UNARY)
    if isinstance(node, Bin):
        if node.op in "+-":
            # Operators are left-associative, so an add-level right child
            # must be parenthesized for the tree shape to survive a re-parse.
            left = _wrap(node.left, _LEVEL_ADD)
            right = _wrap(node.right, _LEVEL_MUL)
            return f"{left} {node.op} {right}"
        left = _wrap(node.left, _LEVEL_MUL)
        right = _wrap(node.right, _LEVEL_UNARY)
        return f"{left}{node.op}{right}"
    if isinstance(node, Pow):
        base = _wrap(node.base, _LEVEL_ATOM)
        return f"{base}^{node.exponent}"
    return f"{node.fn}({to_text(node.arg)})"
