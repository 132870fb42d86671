"""
Cochain expression language.

  expr   := term (('+' | '-') term)*
  term   := unary (('*' | '/') unary)*
  unary  := '-'* factor
  factor := base ('^' uint)?
  base   := number | var | func '(' expr ')' | '(' expr ')'
  var    := ident ('[' uint ']')*

Variables: g1..gp (group elements, matrices), t1..tp (torus angle charts,
vectors), xi (base point), eta (fiber coordinate of a VB arrow).
Functions: sin, cos, exp on scalars; trace, det on square matrices.
"""

import logging
import re
from dataclasses import dataclass, field

import numpy as np

from cli.constants import EXPR_FUNCTIONS, MAX_EXPR_DEPTH, MAX_EXPR_POWER, MAX_LITERAL_DIGITS
from groupworld.cochains import Cochain
from groupworld.groupoids import Groupoid, NervePoint
from tensorcore import jets
from tensorcore.errors import ExprNameError, ExprSyntaxError
from tensorcore.permutations import permutations_with_sign

LOGGER = logging.getLogger(__name__)

_TOKEN = re.compile(r"""
    (?P<number>[0-9]+(?:\.[0-9]*)?(?:[eE][+-]?[0-9]+)?|\.[0-9]+(?:[eE][+-]?[0-9]+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^])
  | (?P<punct>[()\[\]])
  | (?P<space>[ \t\r\n]+)
""", re.VERBOSE)
_GROUP_VAR = re.compile(r"([gt])([0-9]+)$")


@dataclass(frozen=True)
class Token:
    kind: str  # number, ident, op, punct, eof
    text: str
    line: int
    column: int


def tokenize(src: str) -> list:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {src[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "space":
            for i, ch in enumerate(m.group(), start=pos):
                if ch == "\n":
                    line, line_start = line + 1, i + 1
        else:
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# AST. Positions do not take part in equality, so a reparsed tree equals the original.

@dataclass(frozen=True)
class Num:
    value: object
    line: int = field(default=1, compare=False)
    column: int = field(default=1, compare=False)


@dataclass(frozen=True)
class Var:
    name: str
    indices: tuple = ()
    line: int = field(default=1, compare=False)
    column: int = field(default=1, compare=False)


@dataclass(frozen=True)
class Call:
    func: str
    arg: object
    line: int = field(default=1, compare=False)
    column: int = field(default=1, compare=False)


@dataclass(frozen=True)
class Neg:
    operand: object
    line: int = field(default=1, compare=False)
    column: int = field(default=1, compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object
    line: int = field(default=1, compare=False)
    column: int = field(default=1, compare=False)


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int
    line: int = field(default=1, compare=False)
    column: int = field(default=1, compare=False)


class Parser:
    def __init__(self, src: str):
        self.tokens = tokenize(src)
        self.index = 0
        self.depth = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        tok = self.current
        if tok.kind != "eof":
            self.index += 1
        return tok

    def fail(self, message: str, expected=()):
        tok = self.current
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ExprSyntaxError(f"{message}, found {found}", tok.line, tok.column, expected)

    def expect(self, text: str) -> Token:
        if self.current.text != text or self.current.kind == "eof":
            self.fail(f"expected {text!r}", (text,))
        return self.advance()

    def uint(self) -> int:
        tok = self.current
        if tok.kind != "number" or not tok.text.isdigit():
            self.fail("expected a non-negative integer", ("uint",))
        self.advance()
        if len(tok.text) > MAX_LITERAL_DIGITS:
            raise ExprSyntaxError(f"integer {tok.text[:8]}.. is too long", tok.line, tok.column)
        return int(tok.text)

    def parse(self):
        node = self.expr()
        if self.current.kind != "eof":
            self.fail("unexpected trailing input", ("+", "-", "*", "/", "^", "end of input"))
        return node

    def expr(self):
        self.depth += 1
        if self.depth > MAX_EXPR_DEPTH:
            self.fail(f"expression nested deeper than {MAX_EXPR_DEPTH}")
        node = self.term()
        while self.current.kind == "op" and self.current.text in "+-":
            tok = self.advance()
            node = BinOp(tok.text, node, self.term(), tok.line, tok.column)
        self.depth -= 1
        return node

    def term(self):
        node = self.unary()
        while self.current.kind == "op" and self.current.text in "*/":
            tok = self.advance()
            node = BinOp(tok.text, node, self.unary(), tok.line, tok.column)
        return node

    def unary(self):
        signs = []
        while self.current.kind == "op" and self.current.text == "-":
            signs.append(self.advance())
        node = self.factor()
        for tok in reversed(signs):
            node = Neg(node, tok.line, tok.column)
        return node

    def factor(self):
        node = self.base()
        if self.current.kind == "op" and self.current.text == "^":
            tok = self.advance()
            exponent = self.uint()
            if exponent > MAX_EXPR_POWER:
                raise ExprSyntaxError(f"exponent {exponent} above {MAX_EXPR_POWER}", tok.line, tok.column)
            node = Pow(node, exponent, tok.line, tok.column)
        return node

    def base(self):
        tok = self.current
        if tok.kind == "number":
            self.advance()
            if len(tok.text) > MAX_LITERAL_DIGITS:
                raise ExprSyntaxError(f"number {tok.text[:8]}.. is too long", tok.line, tok.column)
            value = int(tok.text) if tok.text.isdigit() else float(tok.text)
            if not np.isfinite(float(value)):
                raise ExprSyntaxError(f"number {tok.text} is not finite", tok.line, tok.column)
            return Num(value, tok.line, tok.column)
        if tok.kind == "ident":
            self.advance()
            if self.current.text == "(" and self.current.kind == "punct":
                self.advance()
                arg = self.expr()
                self.expect(")")
                return Call(tok.text, arg, tok.line, tok.column)
            indices = []
            while self.current.text == "[" and self.current.kind == "punct":
                self.advance()
                indices.append(self.uint())
                self.expect("]")
            return Var(tok.text, tuple(indices), tok.line, tok.column)
        if tok.text == "(" and tok.kind == "punct":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        self.fail("expected an operand", ("number", "identifier", "("))


def parse_expr(src: str):
    """AST of src; ExprSyntaxError carries line, column and the expected token set."""
    if not isinstance(src, str):
        raise ExprSyntaxError(f"expression must be a string, got {type(src).__name__}")
    return Parser(src).parse()


_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2}


def _precedence(node) -> int:
    if isinstance(node, BinOp):
        return _PRECEDENCE[node.op]
    if isinstance(node, Neg):
        return 3
    if isinstance(node, Pow):
        return 4
    return 5


def _wrap(node, paren: bool) -> str:
    text = to_source(node)
    return f"({text})" if paren else text


def to_source(node) -> str:
    """Canonical text with the fewest parentheses that reparse to the same tree."""
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return node.name + "".join(f"[{i}]" for i in node.indices)
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.arg)})"
    if isinstance(node, Neg):
        return "-" + _wrap(node.operand, _precedence(node.operand) < 3)
    if isinstance(node, Pow):
        return _wrap(node.base, _precedence(node.base) < 5) + f"^{node.exponent}"
    prec = _PRECEDENCE[node.op]
    left = _wrap(node.left, _precedence(node.left) < prec)
    right = _wrap(node.right, _precedence(node.right) <= prec)
    return f"{left} {node.op} {right}"


@dataclass(frozen=True)
class Scope:
    """Declared dimensions the variables of an expression are checked against."""

    p: int
    matrix_size: int
    xi_dim: int = 0
    eta_dim: int = 0
    angles: int = 0  # torus rank, 0 when the group has no angle chart


SCALAR = ()


def _var_shape(node: Var, scope: Scope) -> tuple:
    m = _GROUP_VAR.match(node.name)
    if m:
        kind, k = m.group(1), int(m.group(2))
        if not 1 <= k <= scope.p:
            raise ExprNameError(f"{node.name} outside g1..g{scope.p}", node.line, node.column)
        if kind == "g":
            return (scope.matrix_size, scope.matrix_size)
        if scope.angles == 0:
            raise ExprNameError(f"{node.name}: angle charts exist on torus groups only", node.line, node.column)
        return (scope.angles,)
    if node.name == "xi" and scope.xi_dim:
        return (scope.xi_dim,)
    if node.name == "eta" and scope.eta_dim:
        return (scope.eta_dim,)
    raise ExprNameError(f"unknown identifier {node.name!r}", node.line, node.column)


def check_expr(node, scope: Scope) -> tuple:
    """Shape of node under scope: () scalar, (n,) vector, (n, n) matrix."""
    if isinstance(node, Num):
        return SCALAR
    if isinstance(node, Var):
        shape = _var_shape(node, scope)
        for i in node.indices:
            if not shape:
                raise ExprSyntaxError(f"{node.name} has too many indices", node.line, node.column)
            if i >= shape[0]:
                raise ExprNameError(f"index {i} of {node.name} outside 0..{shape[0] - 1}", node.line, node.column)
            shape = shape[1:]
        return shape
    if isinstance(node, Call):
        if node.func not in EXPR_FUNCTIONS:
            raise ExprNameError(f"unknown function {node.func!r}", node.line, node.column)
        shape = check_expr(node.arg, scope)
        wants_matrix = node.func in ("trace", "det")
        if wants_matrix != (len(shape) == 2):
            kind = "a square matrix" if wants_matrix else "a scalar"
            raise ExprSyntaxError(f"{node.func} takes {kind}", node.line, node.column)
        return SCALAR
    if isinstance(node, Neg):
        return check_expr(node.operand, scope)
    if isinstance(node, Pow):
        shape = check_expr(node.base, scope)
        if len(shape) == 1:
            raise ExprSyntaxError("cannot raise a vector to a power", node.line, node.column)
        return shape
    left, right = check_expr(node.left, scope), check_expr(node.right, scope)
    if node.op in "+-":
        if left != right:
            raise ExprSyntaxError(f"cannot {'add' if node.op == '+' else 'subtract'} shapes {left} and {right}",
                                  node.line, node.column)
        return left
    if node.op == "/":
        if right != SCALAR:
            raise ExprSyntaxError("division by a non-scalar", node.line, node.column)
        return left
    if left == SCALAR or right == SCALAR:
        return left or right
    if len(left) == 2 and left[1] == right[0]:
        return left[:1] + right[1:]
    raise ExprSyntaxError(f"cannot multiply shapes {left} and {right}", node.line, node.column)


def _det(m) -> object:
    n = m.shape[0]
    total = 0
    for perm in permutations_with_sign(n):
        term = perm.sign
        for i, j in enumerate(perm.sigma):
            term = term * m[i, j]
        total = total + term
    return total


_FUNCTIONS = {
    "sin": jets.sin,
    "cos": jets.cos,
    "exp": jets.exp,
    "trace": lambda m: sum(m[i, i] for i in range(m.shape[0])),
    "det": _det,
}


def _power(value, n: int):
    if isinstance(value, np.ndarray):
        out = np.eye(value.shape[0], dtype=object)
        for _ in range(n):
            out = out @ value
        return out
    return value ** n


def evaluate(node, env: dict):
    """Value of a checked expression; env maps variable names to scalars and object arrays."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        value = env[node.name]
        for i in node.indices:
            value = value[i]
        return value
    if isinstance(node, Call):
        return _FUNCTIONS[node.func](evaluate(node.arg, env))
    if isinstance(node, Neg):
        return -evaluate(node.operand, env)
    if isinstance(node, Pow):
        return _power(evaluate(node.base, env), node.exponent)
    left, right = evaluate(node.left, env), evaluate(node.right, env)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "/":
        return left / right
    if isinstance(left, np.ndarray) and isinstance(right, np.ndarray):
        return left @ right
    return left * right


def groupoid_scope(groupoid: Groupoid, p: int) -> Scope:
    group = groupoid.group
    angles = group.dim if group.name.startswith("torus:") else 0
    xi_dim = len(np.atleast_1d(groupoid.origin()))
    return Scope(p, group.size, xi_dim, getattr(groupoid, "dim_e", 0), angles)


def _environment(groupoid: Groupoid, pt: NervePoint, scope: Scope) -> dict:
    env = {}
    for k, a in enumerate(pt.arrows, start=1):
        g = np.asarray(a.g, dtype=object)
        env[f"g{k}"] = g
        if scope.angles:
            env[f"t{k}"] = np.array(groupoid.group.angles(g), dtype=object)
    if scope.xi_dim:
        env["xi"] = np.asarray(pt.base, dtype=object)
    if scope.eta_dim:
        env["eta"] = np.asarray(pt.arrows[0].eta, dtype=object) if pt.arrows else np.zeros(scope.eta_dim)
    return env


def expression_cochain(src: str, groupoid: Groupoid, p: int, name: str | None = None) -> Cochain:
    """Scalar p-cochain on groupoid given by an expression; checked once, evaluated per point."""
    ast = parse_expr(src)
    scope = groupoid_scope(groupoid, p)
    shape = check_expr(ast, scope)
    if shape != SCALAR:
        raise ExprSyntaxError(f"a cochain expression must be scalar, got shape {shape}", ast.line, ast.column)
    LOGGER.debug("cochain %s := %s on %s", name or src, to_source(ast), groupoid.name)
    return Cochain(groupoid, p, lambda pt: [evaluate(ast, _environment(groupoid, pt, scope))], 1, None,
                   name or to_source(ast))
