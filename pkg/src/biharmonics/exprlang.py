"""A small arithmetic expression language for defining scalar fields.

Grammar (usual precedence, ^ is right-associative power):

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := unary ("^" factor)?
    unary  := "-" unary | atom
    atom   := NUMBER | NAME | NAME "(" expr ")" | "(" expr ")"

Names: variables ``x1..xn``, ``r`` (the radius, or the radial coordinate
for radial fields), ``theta`` (the plane polar angle, dimension 2 only),
constants ``pi`` and ``e``, and the elementary functions of the jets
module.  Compiled expressions evaluate identically on plain floats and
on jets, so every parsed field supports the derivative operators.
"""

import math
import re

from . import jets
from .errors import DomainError
from .jets import ScalarField

__all__ = ["parse_expression", "Expression", "ambient_field",
           "radial_field"]

_FUNCTIONS = {
    "sin": jets.sin, "cos": jets.cos, "tan": jets.tan,
    "sinh": jets.sinh, "cosh": jets.cosh, "tanh": jets.tanh,
    "exp": jets.exp, "ln": jets.log, "log": jets.log,
    "sqrt": jets.sqrt, "atan": jets.atan, "arctan": jets.atan,
}

_CONSTANTS = {"pi": math.pi, "e": math.e}

_TOKEN = re.compile(r"\s*(?:(\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?"
                    r"|\d+(?:[eE][+-]?\d+)?)|([A-Za-z_][A-Za-z_0-9]*)"
                    r"|(\*\*)|([()+\-*/^,]))")


class ExpressionSyntaxError(DomainError):
    pass


def _tokenize(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            rest = text[pos:].strip()
            if not rest:
                break
            raise ExpressionSyntaxError("cannot tokenize %r" % rest[:12])
        num, name, power, op = m.groups()
        if num is not None:
            out.append(("num", float(num)))
        elif name is not None:
            out.append(("name", name))
        elif power is not None:
            out.append(("op", "^"))
        else:
            out.append(("op", op))
        pos = m.end()
    out.append(("end", None))
    return out


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, op):
        kind, val = self.next()
        if kind != "op" or val != op:
            raise ExpressionSyntaxError("expected %r, got %r" % (op, val))

    def expr(self):
        node = self.term()
        while self.peek() == ("op", "+") or self.peek() == ("op", "-"):
            _, op = self.next()
            rhs = self.term()
            node = ("+", node, rhs) if op == "+" else ("-", node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek() == ("op", "*") or self.peek() == ("op", "/"):
            _, op = self.next()
            rhs = self.factor()
            node = ("*", node, rhs) if op == "*" else ("/", node, rhs)
        return node

    def factor(self):
        base = self.unary()
        if self.peek() == ("op", "^"):
            self.next()
            return ("^", base, self.factor())
        return base

    def unary(self):
        if self.peek() == ("op", "-"):
            self.next()
            return ("neg", self.unary())
        return self.atom()

    def atom(self):
        kind, val = self.next()
        if kind == "num":
            return ("num", val)
        if kind == "name":
            if self.peek() == ("op", "("):
                if val not in _FUNCTIONS:
                    raise ExpressionSyntaxError("unknown function %r" % val)
                self.next()
                arg = self.expr()
                self.expect(")")
                return ("call", val, arg)
            return ("var", val)
        if (kind, val) == ("op", "("):
            node = self.expr()
            self.expect(")")
            return node
        raise ExpressionSyntaxError("unexpected token %r" % (val,))


def _variables(node, out):
    tag = node[0]
    if tag == "var":
        if node[1] not in _CONSTANTS:
            out.add(node[1])
    elif tag == "call":
        _variables(node[2], out)
    elif tag in ("+", "-", "*", "/", "^"):
        _variables(node[1], out)
        _variables(node[2], out)
    elif tag == "neg":
        _variables(node[1], out)
    return out


def _evaluate(node, env):
    tag = node[0]
    if tag == "num":
        return node[1]
    if tag == "var":
        name = node[1]
        if name in env:
            return env[name]
        if name in _CONSTANTS:
            return _CONSTANTS[name]
        raise DomainError("unbound variable %r" % name)
    if tag == "neg":
        return -_evaluate(node[1], env)
    if tag == "call":
        return _FUNCTIONS[node[1]](_evaluate(node[2], env))
    a = _evaluate(node[1], env)
    b = _evaluate(node[2], env)
    if tag == "+":
        return a + b
    if tag == "-":
        return a - b
    if tag == "*":
        return a * b
    if tag == "/":
        return a / b
    if tag == "^":
        if isinstance(b, float) and b.is_integer():
            b = int(b)
        elif not isinstance(b, (int, float)):
            raise DomainError("exponents must be constants")
        return a ** b
    raise ExpressionSyntaxError("bad node %r" % (tag,))


def _polar_angle(x, y):
    """atan2(y, x) valid for jets: locally it differs from an atan
    composition by a constant, so the derivative parts carry over."""
    xv = x.value if hasattr(x, "value") else x
    yv = y.value if hasattr(y, "value") else y
    if xv == 0.0 and yv == 0.0:
        raise DomainError("polar angle undefined at the origin")
    if abs(xv) >= abs(yv):
        base = jets.atan(y / x)
        base_v = math.atan(yv / xv)
    else:
        base = -jets.atan(x / y)
        base_v = -math.atan(xv / yv)
    return base + (math.atan2(yv, xv) - base_v)


class Expression:
    """A parsed field expression with its free variables."""

    def __init__(self, text):
        self.text = text
        p = _Parser(_tokenize(text))
        self.root = p.expr()
        if p.peek()[0] != "end":
            raise ExpressionSyntaxError("trailing input after expression")
        self.variables = sorted(_variables(self.root, set()))

    def evaluate(self, env):
        return _evaluate(self.root, env)

    def __repr__(self):
        return "Expression(%r)" % self.text


def parse_expression(text):
    return Expression(text)


def _env_for_point(expr, xs):
    env = {}
    need_r = "r" in expr.variables
    need_theta = "theta" in expr.variables
    for i, x in enumerate(xs):
        env["x%d" % (i + 1)] = x
    if need_r:
        r2 = xs[0] * xs[0]
        for t in xs[1:]:
            r2 = r2 + t * t
        env["r"] = jets.sqrt(r2)
    if need_theta:
        if len(xs) != 2:
            raise DomainError("theta is only defined for dimension 2")
        env["theta"] = _polar_angle(xs[0], xs[1])
    return env


def ambient_field(expr, n, name=None):
    """Compile an expression over x1..xn (plus r, theta) into a
    ScalarField on R^n."""
    if isinstance(expr, str):
        expr = parse_expression(expr)
    for v in expr.variables:
        if v in ("r", "theta"):
            continue
        if re.fullmatch(r"x\d+", v):
            if not 1 <= int(v[1:]) <= n:
                raise DomainError("variable %r out of range for dimension %d"
                                  % (v, n))
            continue
        raise DomainError("unknown variable %r" % v)

    def fn(xs):
        return expr.evaluate(_env_for_point(expr, xs))

    return ScalarField(fn, n, name=name or expr.text)


def radial_field(expr, name=None):
    """Compile an expression in the single variable r into a radial
    field evaluable at floats or jets."""
    if isinstance(expr, str):
        expr = parse_expression(expr)
    bad = [v for v in expr.variables if v != "r"]
    if bad:
        raise DomainError("radial fields may use only r; got %r" % bad)

    def fn(r):
        out = expr.evaluate({"r": r})
        if not hasattr(out, "c") and hasattr(r, "c"):
            out = r * 0.0 + out
        return out

    fn.__name__ = name or ("radial(%s)" % expr.text)
    return fn
