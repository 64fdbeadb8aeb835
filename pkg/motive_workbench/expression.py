"""
Cycle Expression Language

A small LL(1) language for Chow classes and correspondences:

    expr    := compose (('+' | '-') compose)*
    compose := cross ('o' cross)*
    cross   := product ('x' product)*
    product := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' INT)?
    atom    := INT | NAME | 'S[' INT (',' INT)* ']' | '(' expr ')'
             | 't(' expr ')' | 'mod(' expr ',' INT ')'

Whitespace is insignificant; '∘' and '×' are accepted for 'o' and 'x'.
"""

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple, Union

from .chow_ring import (
    INTEGERS,
    ChowClass,
    CoefficientRing,
    GrassmannSpace,
    basis_class,
    cast,
    chern_tautological,
    named_generator,
    unit,
)
from .correspondence import (
    ProductClass,
    cast_product,
    compose,
    external_product,
    product_unit,
    reduce_mod,
    reduce_mod_local,
    tensor_line_chern,
    transpose,
)
from .errors import ExpressionSyntaxError, ExpressionTypeError, WorkbenchError

logger = logging.getLogger(__name__)

Value = Union[int, Fraction, ChowClass, ProductClass]

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^(),\[\]∘×])"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> List[Token]:
    """
    切分記號

    Raises:
        ExpressionSyntaxError: 遇到無法辨識的字元
    """
    tokens: List[Token] = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise ExpressionSyntaxError(f"無法辨識的字元 {text[pos]!r}", _byte_offset(text, pos))
        kind = match.lastgroup
        value = match.group()
        if kind == "op" and value == "∘":
            kind, value = "name", "o"
        elif kind == "op" and value == "×":
            kind, value = "name", "x"
        if kind != "ws":
            tokens.append(Token(kind, value, pos))
        pos = match.end()
    tokens.append(Token("eof", "", len(text)))
    return tokens


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


# AST 節點；pos 不參與比較
@dataclass(frozen=True)
class IntLit:
    value: int
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Name:
    name: str
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class PartitionLit:
    parts: Tuple[int, ...]
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Neg:
    operand: "Node"
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Power:
    base: "Node"
    exponent: int
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Transpose:
    operand: "Node"
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Mod:
    operand: "Node"
    modulus: int
    pos: int = field(default=0, compare=False)


Node = Union[IntLit, Name, PartitionLit, BinOp, Neg, Power, Transpose, Mod]

RESERVED = {"o", "x", "t", "mod", "S"}


class Parser:
    """遞迴下降剖析器，每個文法規則一個方法"""

    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _error(self, message: str, token: Optional[Token] = None) -> ExpressionSyntaxError:
        token = token or self.current
        found = "end of input" if token.kind == "eof" else repr(token.text)
        return ExpressionSyntaxError(f"{message}，卻遇到 {found}", _byte_offset(self.text, token.pos))

    def _advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def _accept(self, text: str) -> Optional[Token]:
        if self.current.text == text and self.current.kind in ("op", "name"):
            return self._advance()
        return None

    def _expect(self, text: str) -> Token:
        token = self._accept(text)
        if token is None:
            raise self._error(f"預期 {text!r}")
        return token

    def _expect_int(self) -> int:
        if self.current.kind != "int":
            raise self._error("預期整數")
        return int(self._advance().text)

    def parse(self) -> Node:
        node = self.expr()
        if self.current.kind != "eof":
            raise self._error("預期運算子或結尾")
        return node

    def expr(self) -> Node:
        node = self.compose()
        while self.current.text in ("+", "-") and self.current.kind == "op":
            token = self._advance()
            node = BinOp(token.text, node, self.compose(), token.pos)
        return node

    def compose(self) -> Node:
        node = self.cross()
        while self.current.kind == "name" and self.current.text == "o":
            token = self._advance()
            node = BinOp("o", node, self.cross(), token.pos)
        return node

    def cross(self) -> Node:
        node = self.product()
        while self.current.kind == "name" and self.current.text == "x":
            token = self._advance()
            node = BinOp("x", node, self.product(), token.pos)
        return node

    def product(self) -> Node:
        node = self.unary()
        while self.current.text in ("*", "/") and self.current.kind == "op":
            token = self._advance()
            node = BinOp(token.text, node, self.unary(), token.pos)
        return node

    def unary(self) -> Node:
        if self.current.kind == "op" and self.current.text == "-":
            token = self._advance()
            return Neg(self.unary(), token.pos)
        return self.power()

    def power(self) -> Node:
        node = self.atom()
        if self.current.kind == "op" and self.current.text == "^":
            token = self._advance()
            node = Power(node, self._expect_int(), token.pos)
        return node

    def atom(self) -> Node:
        token = self.current
        if token.kind == "int":
            self._advance()
            return IntLit(int(token.text), token.pos)
        if token.kind == "op" and token.text == "(":
            self._advance()
            node = self.expr()
            self._expect(")")
            return node
        if token.kind == "name":
            following = self.tokens[self.index + 1]
            if token.text == "S" and following.text == "[":
                self.index += 2
                parts = [self._expect_int()]
                while self._accept(","):
                    parts.append(self._expect_int())
                self._expect("]")
                return PartitionLit(tuple(parts), token.pos)
            if token.text == "t" and following.text == "(":
                self.index += 2
                node = self.expr()
                self._expect(")")
                return Transpose(node, token.pos)
            if token.text == "mod" and following.text == "(":
                self.index += 2
                node = self.expr()
                self._expect(",")
                modulus = self._expect_int()
                self._expect(")")
                return Mod(node, modulus, token.pos)
            if token.text in RESERVED:
                raise self._error("預期運算元")
            self._advance()
            return Name(token.text, token.pos)
        raise self._error("預期運算元")


def parse(text: str) -> Node:
    """
    剖析表達式

    Raises:
        ExpressionSyntaxError: 語法錯誤（帶位元組位置）
    """
    return Parser(text).parse()


def render(node: Node) -> str:
    """完全加括號的表示，parse(render(node)) == node"""
    if isinstance(node, IntLit):
        return str(node.value)
    if isinstance(node, Name):
        return node.name
    if isinstance(node, PartitionLit):
        return "S[" + ",".join(str(part) for part in node.parts) + "]"
    if isinstance(node, BinOp):
        return f"({render(node.left)} {node.op} {render(node.right)})"
    if isinstance(node, Neg):
        return f"(-{render(node.operand)})"
    if isinstance(node, Power):
        return f"({render(node.base)}^{node.exponent})"
    if isinstance(node, Transpose):
        return f"t({render(node.operand)})"
    if isinstance(node, Mod):
        return f"mod({render(node.operand)}, {node.modulus})"
    raise TypeError(f"未知的節點: {node!r}")


@dataclass
class EvalContext:
    """
    求值環境

    Schubert 名稱與 S[...] 放在 primary 上（primary 為射影空間而 secondary 不是時改放 secondary），
    H 放在射影因子上；x 的整數運算元是另一個因子空間的單位元。
    """

    primary: GrassmannSpace
    secondary: GrassmannSpace
    ring: CoefficientRing = INTEGERS
    bindings: Dict[str, Value] = field(default_factory=dict)

    def __post_init__(self):
        self.bindings = {name: self._in_ring(value) for name, value in self.bindings.items()}

    def _in_ring(self, value: Value) -> Value:
        if isinstance(value, ChowClass) and value.ring != self.ring:
            return cast(value, self.ring)
        if isinstance(value, ProductClass) and value.ring != self.ring:
            return cast_product(value, self.ring)
        return value

    @property
    def schubert_space(self) -> GrassmannSpace:
        if self.primary.is_projective and not self.secondary.is_projective:
            return self.secondary
        return self.primary

    @property
    def hyperplane_space(self) -> Optional[GrassmannSpace]:
        for space in (self.secondary, self.primary):
            if space.is_projective:
                return space
        return None

    def other_space(self, space: GrassmannSpace, left: bool) -> GrassmannSpace:
        """x 的整數運算元所在空間：left 表示整數在左邊"""
        if left:
            return self.primary if space == self.secondary else self.secondary
        return self.secondary if space == self.primary else self.primary


def tautological_context(primary: GrassmannSpace, secondary: GrassmannSpace,
                         ring: CoefficientRing = INTEGERS,
                         bindings: Optional[Mapping[str, Value]] = None) -> EvalContext:
    """
    secondary 為射影空間且秩相同時，綁定 r = c₁(τ_d ⊠ τ₁) 與 rho = c_d(τ_d ⊠ τ₁)
    """
    names: Dict[str, Value] = {}
    if secondary.is_projective and secondary.n == primary.n and not primary.is_projective:
        e_total = chern_tautological(primary)
        l_c1 = chern_tautological(secondary).homogeneous_part(1)
        names["r"] = tensor_line_chern(e_total, primary.d, l_c1, 1)
        names["rho"] = tensor_line_chern(e_total, primary.d, l_c1, primary.d)
    names.update(bindings or {})
    return EvalContext(primary, secondary, ring, names)


def _label(node: Node) -> str:
    if isinstance(node, BinOp):
        return f"{node.op}@{node.pos}"
    if isinstance(node, Name):
        return f"{node.name}@{node.pos}"
    return f"{type(node).__name__}@{node.pos}"


def _is_scalar(value: Value) -> bool:
    return isinstance(value, (int, Fraction))


def _scalar(value: Fraction) -> Union[int, Fraction]:
    return value.numerator if isinstance(value, Fraction) and value.denominator == 1 else value


class Evaluator:
    """AST 求值器：代數錯誤會附上節點路徑後以 ExpressionTypeError 拋出"""

    def __init__(self, context: EvalContext):
        self.context = context

    def evaluate(self, node: Node, path: Tuple[str, ...] = ()) -> Value:
        path = path + (_label(node),)
        try:
            return self._dispatch(node, path)
        except ExpressionTypeError:
            raise
        except (WorkbenchError, TypeError, ZeroDivisionError) as e:
            raise ExpressionTypeError(str(e), path) from e

    def _dispatch(self, node: Node, path: Tuple[str, ...]) -> Value:
        ctx = self.context
        if isinstance(node, IntLit):
            return node.value
        if isinstance(node, Name):
            return self._name(node, path)
        if isinstance(node, PartitionLit):
            return basis_class(ctx.schubert_space, node.parts, ctx.ring)
        if isinstance(node, Neg):
            return -self.evaluate(node.operand, path)
        if isinstance(node, Power):
            return self.evaluate(node.base, path) ** node.exponent
        if isinstance(node, Transpose):
            value = self.evaluate(node.operand, path)
            if not isinstance(value, ProductClass):
                raise ExpressionTypeError("t() 需要乘積類別", path)
            return transpose(value)
        if isinstance(node, Mod):
            value = self.evaluate(node.operand, path)
            if _is_scalar(value):
                if isinstance(value, Fraction):
                    raise ExpressionTypeError("mod() 不接受分數純量", path)
                return value % node.modulus
            if value.ring.is_rational:
                return reduce_mod_local(value, node.modulus)
            return reduce_mod(value, node.modulus)
        if isinstance(node, BinOp):
            left = self.evaluate(node.left, path)
            right = self.evaluate(node.right, path)
            return self._binary(node.op, left, right, path)
        raise ExpressionTypeError(f"未知的節點 {node!r}", path)

    def _name(self, node: Name, path: Tuple[str, ...]) -> Value:
        ctx = self.context
        if node.name in ctx.bindings:
            return ctx.bindings[node.name]
        if node.name == "H":
            space = ctx.hyperplane_space
            if space is None:
                raise ExpressionTypeError("此環境沒有射影因子，H 無定義", path)
            return named_generator(space, "H", ctx.ring)
        return named_generator(ctx.schubert_space, node.name, ctx.ring)

    def _promote(self, scalar: Value, like: Value) -> Value:
        if isinstance(like, ChowClass):
            return unit(like.space, like.ring).scale(scalar)
        return product_unit(like.left, like.right, like.ring).scale(scalar)

    def _binary(self, op: str, left: Value, right: Value, path: Tuple[str, ...]) -> Value:
        ctx = self.context
        if op in ("+", "-"):
            if _is_scalar(left) and not _is_scalar(right):
                left = self._promote(left, right)
            elif _is_scalar(right) and not _is_scalar(left):
                right = self._promote(right, left)
            if type(left) is not type(right) and not (_is_scalar(left) and _is_scalar(right)):
                raise ExpressionTypeError(f"無法相加 {type(left).__name__} 與 {type(right).__name__}", path)
            return left + right if op == "+" else left - right
        if op == "*":
            if _is_scalar(left) and _is_scalar(right):
                return left * right
            if _is_scalar(left):
                return right.scale(left)
            if _is_scalar(right):
                return left.scale(right)
            if type(left) is not type(right):
                raise ExpressionTypeError("* 需要同一種類別（環乘積）", path)
            return left * right
        if op == "/":
            if not _is_scalar(right):
                raise ExpressionTypeError("/ 的除數必須是整數純量", path)
            if right == 0:
                raise ExpressionTypeError("除以 0", path)
            if _is_scalar(left):
                return _scalar(Fraction(left) / Fraction(right))
            return left.scale(Fraction(1) / Fraction(right))
        if op == "x":
            if isinstance(left, ProductClass) or isinstance(right, ProductClass):
                raise ExpressionTypeError("x 的運算元必須是 Chow 類別或整數", path)
            if _is_scalar(left) and _is_scalar(right):
                return product_unit(ctx.primary, ctx.secondary, ctx.ring).scale(left * right)
            if _is_scalar(left):
                left = unit(ctx.other_space(right.space, left=True), ctx.ring).scale(left)
            elif _is_scalar(right):
                right = unit(ctx.other_space(left.space, left=False), ctx.ring).scale(right)
            return external_product(left, right)
        if op == "o":
            if not isinstance(left, ProductClass) or not isinstance(right, ProductClass):
                raise ExpressionTypeError("o 的運算元必須是乘積類別", path)
            return compose(left, right)
        raise ExpressionTypeError(f"未知的運算子 {op}", path)


def evaluate(expr: Union[str, Node], context: EvalContext) -> Value:
    """
    剖析（若為字串）並求值

    Raises:
        ExpressionSyntaxError: 語法錯誤
        ExpressionTypeError: 型別錯誤或代數錯誤（帶節點路徑）
    """
    node = parse(expr) if isinstance(expr, str) else expr
    value = Evaluator(context).evaluate(node)
    logger.debug("evaluated %s", render(node))
    return value


def render_value(value: Value) -> str:
    if isinstance(value, (ChowClass, ProductClass)):
        return value.render()
    return str(value)
