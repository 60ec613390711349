"""Recursive-descent parser and evaluator for the field-expression language.

Grammar (standard precedence, ^ binds tightest and associates right):

    expr    := term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*
    factor  := '-' factor | power
    power   := atom ('^' factor)?
    atom    := NUMBER | IDENT | FUNC '(' expr ')' | '(' expr ')'

Functions: exp, sin, cos, sqrt, conj.  Identifiers are free names resolved
against the evaluation environment (the field machinery provides x1..xN,
y1..yN plus the per-model Q/P/z aliases).  ``conj`` exists so that
anti-holomorphic inputs can be written down and rejected by the numerical
validators; it has no symbolic derivative.

Parse errors carry the exact byte offset of the first byte at which no
grammar continuation exists, plus the set of acceptable token classes.
"""

import numpy as np

from .errors import ParseError

FUNCTIONS = {
    "exp": np.exp,
    "sin": np.sin,
    "cos": np.cos,
    "sqrt": np.sqrt,
    "conj": np.conj,
}

_OPS = set("+-*/^()")


class _Token:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind, text, pos):
        self.kind = kind
        self.text = text
        self.pos = pos

    def __repr__(self):
        return f"Token({self.kind}, {self.text!r}, {self.pos})"


def _tokenize(src):
    tokens = []
    i = 0
    n = len(src)
    while i < n:
        c = src[i]
        if c.isspace():
            i += 1
            continue
        if c in _OPS:
            tokens.append(_Token(c, c, i))
            i += 1
            continue
        if c.isdigit() or (c == "." and i + 1 < n and src[i + 1].isdigit()):
            j = i
            seen_dot = False
            while j < n and (src[j].isdigit() or (src[j] == "." and not seen_dot)):
                seen_dot = seen_dot or src[j] == "."
                j += 1
            if j < n and src[j] in "eE":
                k = j + 1
                if k < n and src[k] in "+-":
                    k += 1
                if k < n and src[k].isdigit():
                    j = k
                    while j < n and src[j].isdigit():
                        j += 1
            tokens.append(_Token("number", src[i:j], i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            tokens.append(_Token("ident", src[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character {c!r}", i, {"number", "identifier", "operator"})
    tokens.append(_Token("end", "", n))
    return tokens


# AST nodes are plain tuples: ("num", v) | ("var", name) | ("neg", e)
# | ("bin", op, l, r) | ("call", fname, e)


class _Parser:
    def __init__(self, src):
        self.src = src
        self.tokens = _tokenize(src)
        self.i = 0

    @property
    def cur(self):
        return self.tokens[self.i]

    def advance(self):
        self.i += 1

    def expect(self, kind):
        if self.cur.kind != kind:
            raise ParseError(f"unexpected {self.cur.kind}", self.cur.pos, {kind})
        tok = self.cur
        self.advance()
        return tok

    def parse(self):
        e = self.expr()
        if self.cur.kind != "end":
            raise ParseError("trailing input", self.cur.pos, {"+", "-", "*", "/", "^", "end"})
        return e

    def expr(self):
        e = self.term()
        while self.cur.kind in ("+", "-"):
            op = self.cur.kind
            self.advance()
            e = ("bin", op, e, self.term())
        return e

    def term(self):
        e = self.factor()
        while self.cur.kind in ("*", "/"):
            op = self.cur.kind
            self.advance()
            e = ("bin", op, e, self.factor())
        return e

    def factor(self):
        if self.cur.kind == "-":
            self.advance()
            return ("neg", self.factor())
        return self.power()

    def power(self):
        base = self.atom()
        if self.cur.kind == "^":
            self.advance()
            return ("bin", "^", base, self.factor())
        return base

    def atom(self):
        tok = self.cur
        if tok.kind == "number":
            self.advance()
            return ("num", float(tok.text))
        if tok.kind == "ident":
            self.advance()
            if tok.text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return ("call", tok.text, arg)
            if self.cur.kind == "(":
                raise ParseError(f"unknown function {tok.text!r}", tok.pos, set(FUNCTIONS))
            return ("var", tok.text)
        if tok.kind == "(":
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        raise ParseError(
            f"unexpected {tok.kind}", tok.pos, {"number", "identifier", "function", "("}
        )


def _evaluate(node, env):
    kind = node[0]
    if kind == "num":
        return node[1]
    if kind == "var":
        name = node[1]
        if name not in env:
            raise ValueError(f"unknown identifier {name!r}")
        return env[name]
    if kind == "neg":
        return -_evaluate(node[1], env)
    if kind == "call":
        return FUNCTIONS[node[1]](_evaluate(node[2], env))
    op, l, r = node[1], node[2], node[3]
    a = _evaluate(l, env)
    b = _evaluate(r, env)
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        return a / b
    return a ** b


def _diff(node, var):
    kind = node[0]
    if kind == "num":
        return ("num", 0.0)
    if kind == "var":
        return ("num", 1.0 if node[1] == var else 0.0)
    if kind == "neg":
        return ("neg", _diff(node[1], var))
    if kind == "call":
        fname, arg = node[1], node[2]
        da = _diff(arg, var)
        if fname == "exp":
            return ("bin", "*", node, da)
        if fname == "sin":
            return ("bin", "*", ("call", "cos", arg), da)
        if fname == "cos":
            return ("neg", ("bin", "*", ("call", "sin", arg), da))
        if fname == "sqrt":
            return ("bin", "/", da, ("bin", "*", ("num", 2.0), node))
        raise ValueError(f"{fname} has no symbolic derivative")
    op, l, r = node[1], node[2], node[3]
    dl = _diff(l, var)
    dr = _diff(r, var)
    if op == "+":
        return ("bin", "+", dl, dr)
    if op == "-":
        return ("bin", "-", dl, dr)
    if op == "*":
        return ("bin", "+", ("bin", "*", dl, r), ("bin", "*", l, dr))
    if op == "/":
        num = ("bin", "-", ("bin", "*", dl, r), ("bin", "*", l, dr))
        return ("bin", "/", num, ("bin", "*", r, r))
    # d(l^r) with constant exponent r: r * l^(r-1) * dl; general case via log.
    if r[0] == "num":
        return (
            "bin",
            "*",
            ("bin", "*", r, ("bin", "^", l, ("num", r[1] - 1.0))),
            dl,
        )
    raise ValueError("power with a non-constant exponent has no symbolic derivative here")


def _simplify(node):
    kind = node[0]
    if kind in ("num", "var"):
        return node
    if kind == "neg":
        inner = _simplify(node[1])
        if inner[0] == "num":
            return ("num", -inner[1])
        return ("neg", inner)
    if kind == "call":
        arg = _simplify(node[2])
        if arg[0] == "num":
            return ("num", float(FUNCTIONS[node[1]](arg[1])))
        return ("call", node[1], arg)
    op, l, r = node[1], _simplify(node[2]), _simplify(node[3])
    if l[0] == "num" and r[0] == "num":
        return ("num", _evaluate(("bin", op, l, r), {}))
    if op == "*":
        if (l[0] == "num" and l[1] == 0.0) or (r[0] == "num" and r[1] == 0.0):
            return ("num", 0.0)
        if l[0] == "num" and l[1] == 1.0:
            return r
        if r[0] == "num" and r[1] == 1.0:
            return l
    if op == "+":
        if l[0] == "num" and l[1] == 0.0:
            return r
        if r[0] == "num" and r[1] == 0.0:
            return l
    if op == "-" and r[0] == "num" and r[1] == 0.0:
        return l
    if op == "^" and r[0] == "num" and r[1] == 1.0:
        return l
    return ("bin", op, l, r)


def _variables(node, out):
    kind = node[0]
    if kind == "var":
        out.add(node[1])
    elif kind == "neg":
        _variables(node[1], out)
    elif kind == "call":
        _variables(node[2], out)
    elif kind == "bin":
        _variables(node[2], out)
        _variables(node[3], out)


class Expression:
    """A parsed expression: evaluable, differentiable, hashable by source."""

    def __init__(self, ast, source=""):
        self.ast = ast
        self.source = source

    def evaluate(self, env):
        return _evaluate(self.ast, env)

    __call__ = evaluate

    def diff(self, var):
        return Expression(_simplify(_diff(self.ast, var)), f"d({self.source})/d{var}")

    def variables(self):
        out = set()
        _variables(self.ast, out)
        return out

    def __add__(self, other):
        return Expression(("bin", "+", self.ast, other.ast), f"({self.source})+({other.source})")

    def __repr__(self):
        return f"Expression({self.source!r})"


def parse_expression(src):
    """Parse source text into an :class:`Expression`; raises ParseError."""
    return Expression(_Parser(src).parse(), src)
