"""Formula expression trees: parsing, evaluation, dimension inference.

Node kinds: variable references, literals with an optional unit, the four
arithmetic operators, power, n-ary min/max, and a ">= threshold" conditional
(ifge).  Formulas in catalog documents may be written either as strings
("E_total / E_IT") or as JSON trees; both forms round-trip.

Evaluation happens over canonical-scale floats.  Division by zero is a
SingularInputError naming the denominator subexpression, never an IEEE inf:
these are metric definitions, not general arithmetic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

from .errors import (
    DimensionError,
    EvaluationError,
    ExpressionError,
    SingularInputError,
)
from .units import DIMENSIONLESS, Dimension, Quantity, Unit, parse_unit

Expr = Union["Var", "Lit", "Add", "Sub", "Mul", "Div", "Pow", "Min", "Max", "IfGe"]


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Lit:
    value: float
    unit: Unit = Unit()


@dataclass(frozen=True)
class Add:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow:
    base: Expr
    exponent: Expr  # must be dimensionless; rational literals keep dimensions exact


@dataclass(frozen=True)
class Min:
    args: tuple[Expr, ...]


@dataclass(frozen=True)
class Max:
    args: tuple[Expr, ...]


@dataclass(frozen=True)
class IfGe:
    """if subject >= threshold then `then` else `orelse`."""

    subject: Expr
    threshold: Expr
    then: Expr
    orelse: Expr


def variables(expr: Expr) -> set[str]:
    """All variable names referenced anywhere in the tree."""
    out: set[str] = set()

    def walk(e: Expr) -> None:
        if isinstance(e, Var):
            out.add(e.name)
        elif isinstance(e, Lit):
            pass
        elif isinstance(e, (Add, Sub, Mul, Div)):
            walk(e.left)
            walk(e.right)
        elif isinstance(e, Pow):
            walk(e.base)
            walk(e.exponent)
        elif isinstance(e, (Min, Max)):
            for a in e.args:
                walk(a)
        elif isinstance(e, IfGe):
            for a in (e.subject, e.threshold, e.then, e.orelse):
                walk(a)
        else:
            raise ExpressionError(f"unknown expression node {e!r}")

    walk(expr)
    return out


def _rational_exponent(expr: Expr) -> Fraction | None:
    """The exponent as an exact rational if it is a constant, else None."""
    if isinstance(expr, Lit) and expr.unit.dimension.is_dimensionless:
        return Fraction(expr.value).limit_denominator(10 ** 9)
    if isinstance(expr, Div):
        num = _rational_exponent(expr.left)
        den = _rational_exponent(expr.right)
        if num is not None and den is not None and den != 0:
            return num / den
    if isinstance(expr, Sub):
        a, b = _rational_exponent(expr.left), _rational_exponent(expr.right)
        if a is not None and b is not None:
            return a - b
    return None


def infer_dimension(expr: Expr, input_dims: Mapping[str, Dimension]) -> Dimension:
    """Dimension of the expression given the dimensions of its inputs.

    Raises DimensionError on incompatible operands or an undeclared variable.
    """
    if isinstance(expr, Var):
        if expr.name not in input_dims:
            raise DimensionError(f"variable {expr.name!r} is not a declared input")
        return input_dims[expr.name]
    if isinstance(expr, Lit):
        return expr.unit.dimension
    if isinstance(expr, (Add, Sub)):
        a = infer_dimension(expr.left, input_dims)
        b = infer_dimension(expr.right, input_dims)
        if a != b:
            raise DimensionError(
                f"cannot {'add' if isinstance(expr, Add) else 'subtract'} "
                f"{a} and {b}"
            )
        return a
    if isinstance(expr, Mul):
        return infer_dimension(expr.left, input_dims) * infer_dimension(
            expr.right, input_dims
        )
    if isinstance(expr, Div):
        return infer_dimension(expr.left, input_dims) / infer_dimension(
            expr.right, input_dims
        )
    if isinstance(expr, Pow):
        base = infer_dimension(expr.base, input_dims)
        exp_dim = infer_dimension(expr.exponent, input_dims)
        if not exp_dim.is_dimensionless:
            raise DimensionError("exponents must be dimensionless")
        rat = _rational_exponent(expr.exponent)
        if rat is not None:
            return base.pow_rational(rat)
        if not base.is_dimensionless:
            raise DimensionError(
                "non-constant exponent requires a dimensionless base"
            )
        return DIMENSIONLESS
    if isinstance(expr, (Min, Max)):
        dims = [infer_dimension(a, input_dims) for a in expr.args]
        if any(d != dims[0] for d in dims):
            raise DimensionError("min/max operands must share a dimension")
        return dims[0]
    if isinstance(expr, IfGe):
        subj = infer_dimension(expr.subject, input_dims)
        thr = infer_dimension(expr.threshold, input_dims)
        if subj != thr:
            raise DimensionError("conditional subject and threshold differ in dimension")
        then = infer_dimension(expr.then, input_dims)
        orelse = infer_dimension(expr.orelse, input_dims)
        if then != orelse:
            raise DimensionError("conditional branches differ in dimension")
        return then
    raise ExpressionError(f"unknown expression node {expr!r}")


def evaluate_expr(expr: Expr, env: Mapping[str, float]) -> float:
    """Evaluate over canonical-scale float bindings."""
    if isinstance(expr, Var):
        try:
            return env[expr.name]
        except KeyError:
            raise EvaluationError(f"missing variable {expr.name!r}") from None
    if isinstance(expr, Lit):
        return float(Quantity(expr.value, expr.unit).canonical())
    if isinstance(expr, Add):
        return evaluate_expr(expr.left, env) + evaluate_expr(expr.right, env)
    if isinstance(expr, Sub):
        return evaluate_expr(expr.left, env) - evaluate_expr(expr.right, env)
    if isinstance(expr, Mul):
        return evaluate_expr(expr.left, env) * evaluate_expr(expr.right, env)
    if isinstance(expr, Div):
        denom = evaluate_expr(expr.right, env)
        if denom == 0.0:
            raise SingularInputError(
                f"division by zero: denominator {to_string(expr.right)!r} is 0"
            )
        return evaluate_expr(expr.left, env) / denom
    if isinstance(expr, Pow):
        base = evaluate_expr(expr.base, env)
        exponent = evaluate_expr(expr.exponent, env)
        try:
            result = base ** exponent
        except (OverflowError, ZeroDivisionError) as exc:
            raise EvaluationError(f"power evaluation failed: {exc}") from None
        if isinstance(result, complex):
            raise EvaluationError(
                f"power of negative base {base} to fractional exponent {exponent}"
            )
        return float(result)
    if isinstance(expr, Min):
        return min(evaluate_expr(a, env) for a in expr.args)
    if isinstance(expr, Max):
        return max(evaluate_expr(a, env) for a in expr.args)
    if isinstance(expr, IfGe):
        if evaluate_expr(expr.subject, env) >= evaluate_expr(expr.threshold, env):
            return evaluate_expr(expr.then, env)
        return evaluate_expr(expr.orelse, env)
    raise ExpressionError(f"unknown expression node {expr!r}")


# --------------------------------------------------------------------------
# string form
# --------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)(?:\[(?P<unit>[^\]]*)\])?"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^(),]))"
)

_FUNCTIONS = {"min", "max", "ifge"}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = self._tokenize(text)
        self.pos = 0

    @staticmethod
    def _tokenize(text: str):
        tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if not m or m.end() == pos:
                if text[pos:].strip():
                    raise ExpressionError(
                        f"cannot tokenize formula at {text[pos:pos + 10]!r}"
                    )
                break
            if m.group("num") is not None:
                tokens.append(("num", (float(m.group("num")), m.group("unit"))))
            elif m.group("name") is not None:
                tokens.append(("name", m.group("name")))
            else:
                tokens.append(("op", m.group("op")))
            pos = m.end()
        return tokens

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def next(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, op: str) -> None:
        kind, val = self.next()
        if kind != "op" or val != op:
            raise ExpressionError(f"expected {op!r} in formula {self.text!r}")

    def parse(self) -> Expr:
        expr = self.additive()
        if self.pos != len(self.tokens):
            raise ExpressionError(f"trailing tokens in formula {self.text!r}")
        return expr

    def additive(self) -> Expr:
        node = self.multiplicative()
        while self.peek() == ("op", "+") or self.peek() == ("op", "-"):
            _, op = self.next()
            rhs = self.multiplicative()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def multiplicative(self) -> Expr:
        node = self.unary()
        while self.peek() == ("op", "*") or self.peek() == ("op", "/"):
            _, op = self.next()
            rhs = self.unary()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def unary(self) -> Expr:
        if self.peek() == ("op", "-"):
            self.next()
            # no dedicated negation node: fold into a dimension-safe product
            return Mul(Lit(-1.0), self.unary())
        if self.peek() == ("op", "+"):
            self.next()
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.next()
            return Pow(base, self.unary())
        return base

    def atom(self) -> Expr:
        kind, val = self.next()
        if kind == "num":
            value, unit_text = val
            return Lit(value, parse_unit(unit_text) if unit_text else Unit())
        if kind == "name":
            if self.peek() == ("op", "("):
                if val not in _FUNCTIONS:
                    raise ExpressionError(f"unknown function {val!r}")
                self.next()
                args = [self.additive()]
                while self.peek() == ("op", ","):
                    self.next()
                    args.append(self.additive())
                self.expect(")")
                if val == "min":
                    return Min(tuple(args))
                if val == "max":
                    return Max(tuple(args))
                if len(args) != 4:
                    raise ExpressionError("ifge takes (subject, threshold, then, else)")
                return IfGe(*args)
            return Var(val)
        if kind == "op" and val == "(":
            node = self.additive()
            self.expect(")")
            return node
        raise ExpressionError(f"unexpected token in formula {self.text!r}")


def parse_formula(text: str) -> Expr:
    """Parse a formula string into an expression tree."""
    return _Parser(text).parse()


def to_string(expr: Expr) -> str:
    """Readable, re-parseable rendering (fully parenthesized where needed)."""
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, Lit):
        text = repr(expr.value)
        if text.endswith(".0"):
            text = text[:-2]
        if expr.unit.symbol:
            text += f"[{expr.unit.symbol}]"
        return text
    if isinstance(expr, (Add, Sub)):
        op = "+" if isinstance(expr, Add) else "-"
        return f"({to_string(expr.left)} {op} {to_string(expr.right)})"
    if isinstance(expr, (Mul, Div)):
        op = "*" if isinstance(expr, Mul) else "/"
        return f"({to_string(expr.left)} {op} {to_string(expr.right)})"
    if isinstance(expr, Pow):
        return f"({to_string(expr.base)} ^ {to_string(expr.exponent)})"
    if isinstance(expr, Min):
        return "min(" + ", ".join(to_string(a) for a in expr.args) + ")"
    if isinstance(expr, Max):
        return "max(" + ", ".join(to_string(a) for a in expr.args) + ")"
    if isinstance(expr, IfGe):
        return (
            f"ifge({to_string(expr.subject)}, {to_string(expr.threshold)}, "
            f"{to_string(expr.then)}, {to_string(expr.orelse)})"
        )
    raise ExpressionError(f"unknown expression node {expr!r}")


# --------------------------------------------------------------------------
# JSON form
# --------------------------------------------------------------------------

def to_json(expr: Expr):
    if isinstance(expr, Var):
        return {"var": expr.name}
    if isinstance(expr, Lit):
        node = {"lit": expr.value}
        if expr.unit.symbol:
            node["unit"] = expr.unit.symbol
        return node
    if isinstance(expr, (Add, Sub, Mul, Div)):
        op = {Add: "add", Sub: "sub", Mul: "mul", Div: "div"}[type(expr)]
        return {"op": op, "args": [to_json(expr.left), to_json(expr.right)]}
    if isinstance(expr, Pow):
        return {"op": "pow", "args": [to_json(expr.base), to_json(expr.exponent)]}
    if isinstance(expr, (Min, Max)):
        op = "min" if isinstance(expr, Min) else "max"
        return {"op": op, "args": [to_json(a) for a in expr.args]}
    if isinstance(expr, IfGe):
        return {
            "op": "ifge",
            "args": [
                to_json(expr.subject),
                to_json(expr.threshold),
                to_json(expr.then),
                to_json(expr.orelse),
            ],
        }
    raise ExpressionError(f"unknown expression node {expr!r}")


def from_json(node) -> Expr:
    if isinstance(node, str):
        return parse_formula(node)
    if not isinstance(node, dict):
        raise ExpressionError(f"malformed expression node {node!r}")
    if "var" in node:
        return Var(str(node["var"]))
    if "lit" in node:
        unit = parse_unit(node.get("unit", ""))
        return Lit(float(node["lit"]), unit)
    op = node.get("op")
    args = [from_json(a) for a in node.get("args", [])]
    if op in ("add", "sub", "mul", "div"):
        if len(args) != 2:
            raise ExpressionError(f"{op} takes two operands")
        cls = {"add": Add, "sub": Sub, "mul": Mul, "div": Div}[op]
        return cls(*args)
    if op == "pow":
        if len(args) != 2:
            raise ExpressionError("pow takes two operands")
        return Pow(*args)
    if op == "min":
        return Min(tuple(args))
    if op == "max":
        return Max(tuple(args))
    if op == "ifge":
        if len(args) != 4:
            raise ExpressionError("ifge takes four operands")
        return IfGe(*args)
    raise ExpressionError(f"unknown expression op {op!r}")
