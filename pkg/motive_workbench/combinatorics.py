"""
Partition Combinatorics

Partitions in a box, complements, and the twist generating polynomials
(Gaussian binomials, φ_n, ψ_n and the generalized Severi-Brauer quotient).
Polynomials in the twist variable z are backed by sympy.
"""

import logging
from functools import reduce
from typing import Dict, Iterable, Iterator, List, Mapping, Sequence, Tuple

import sympy

from .errors import NonDivisible, PartitionError

logger = logging.getLogger(__name__)

z = sympy.Symbol("z")

_SUPERSCRIPT = str.maketrans("0123456789-", "⁰¹²³⁴⁵⁶⁷⁸⁹⁻")


class Partition(tuple):
    """弱遞減的非負整數序列（尾端的 0 會被去除）"""

    def __new__(cls, parts: Iterable[int] = ()):
        values = []
        for part in parts:
            if isinstance(part, bool) or not isinstance(part, int):
                raise PartitionError(f"分割的各部分必須是整數: {part!r}")
            if part < 0:
                raise PartitionError(f"分割的各部分必須非負: {part}")
            values.append(part)
        for left, right in zip(values, values[1:]):
            if left < right:
                raise PartitionError(f"分割必須弱遞減: {tuple(values)}")
        while values and values[-1] == 0:
            values.pop()
        return super().__new__(cls, values)

    @property
    def weight(self) -> int:
        return sum(self)

    @property
    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        """依權重遞增，同權重時較大的分割在前"""
        return (self.weight, tuple(-part for part in self))

    def part(self, i: int) -> int:
        """第 i 個部分（超出長度時為 0）"""
        return self[i] if i < len(self) else 0

    def fits_box(self, rows: int, cols: int) -> bool:
        return len(self) <= rows and (not self or self[0] <= cols)

    def conjugate(self) -> "Partition":
        if not self:
            return self
        return Partition(sum(1 for part in self if part > j) for j in range(self[0]))

    def contains(self, other: "Partition") -> bool:
        return all(self.part(i) >= other.part(i) for i in range(len(other)))

    def render(self) -> str:
        return "(" + ",".join(str(part) for part in self) + ")"

    def __repr__(self) -> str:
        return f"Partition({tuple(self)!r})"


def _require_box(rows: int, cols: int) -> None:
    if rows < 0 or cols < 0:
        raise PartitionError(f"盒子的尺寸必須非負: {rows}×{cols}")


def _iter_box(rows: int, cols: int, prefix: Tuple[int, ...]) -> Iterator[Tuple[int, ...]]:
    if len(prefix) == rows:
        yield prefix
        return
    upper = prefix[-1] if prefix else cols
    for part in range(upper + 1):
        yield from _iter_box(rows, cols, prefix + (part,))


def partitions_in_box(rows: int, cols: int) -> List[Partition]:
    """
    列舉 rows×cols 盒子中的所有分割

    Args:
        rows: 最多幾列
        cols: 每列最多幾格

    Returns:
        依權重遞增（同權重較大者在前）排序的分割列表，長度為 C(rows+cols, rows)
    """
    _require_box(rows, cols)
    found = {Partition(parts) for parts in _iter_box(rows, cols, ())}
    return sorted(found, key=lambda lam: lam.sort_key)


def complement(lam: Partition, rows: int, cols: int) -> Partition:
    """
    盒子中的補分割 λ^op，其中 λ^op_i = cols − λ_{rows+1−i}

    Raises:
        PartitionError: λ 不在盒子內
    """
    _require_box(rows, cols)
    lam = Partition(lam)
    if not lam.fits_box(rows, cols):
        raise PartitionError(f"分割 {lam.render()} 不在 {rows}×{cols} 盒子內")
    return Partition(cols - lam.part(rows - 1 - i) for i in range(rows))


def add_box_neighbours(lam: Partition, rows: int, cols: int) -> List[Partition]:
    """在盒子內加上一格所得的分割（Hasse 圖的覆蓋邊）"""
    lam = Partition(lam)
    result = []
    for i in range(rows):
        grown = [lam.part(j) for j in range(rows)]
        grown[i] += 1
        if grown[i] > cols or (i > 0 and grown[i] > grown[i - 1]):
            continue
        result.append(Partition(grown))
    return sorted(result, key=lambda mu: mu.sort_key)


class IntPolynomial:
    """整數係數的 z 多項式，不存放 0 係數"""

    __slots__ = ("_terms",)

    def __init__(self, coefficients: Mapping[int, int] = None):
        collected: Dict[int, int] = {}
        for degree, coefficient in dict(coefficients or {}).items():
            degree = int(degree)
            if degree < 0:
                raise ValueError(f"多項式的次數必須非負: {degree}")
            if int(coefficient) != coefficient:
                raise ValueError(f"多項式的係數必須是整數: {coefficient}")
            collected[degree] = collected.get(degree, 0) + int(coefficient)
        self._terms = tuple(sorted((d, c) for d, c in collected.items() if c != 0))

    @classmethod
    def from_poly(cls, poly: sympy.Poly) -> "IntPolynomial":
        coefficients = {}
        for (degree,), coefficient in poly.terms():
            if not coefficient.is_integer:
                raise NonDivisible(f"係數不是整數: {coefficient}")
            coefficients[degree] = int(coefficient)
        return cls(coefficients)

    @classmethod
    def monomial(cls, degree: int, coefficient: int = 1) -> "IntPolynomial":
        return cls({degree: coefficient})

    @classmethod
    def constant(cls, value: int) -> "IntPolynomial":
        return cls({0: value})

    def to_expr(self) -> sympy.Expr:
        return sympy.Add(*[c * z ** d for d, c in self._terms])

    def to_poly(self) -> sympy.Poly:
        return sympy.Poly(self.to_expr(), z, domain="ZZ")

    @property
    def coefficients(self) -> Dict[int, int]:
        return dict(self._terms)

    def coefficient(self, degree: int) -> int:
        return dict(self._terms).get(degree, 0)

    @property
    def degree(self) -> int:
        """最高次數（零多項式為 -1）"""
        return self._terms[-1][0] if self._terms else -1

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        other = _as_polynomial(other)
        return IntPolynomial.from_poly(self.to_poly() + other.to_poly())

    __radd__ = __add__

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial({d: -c for d, c in self._terms})

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-_as_polynomial(other))

    def __rsub__(self, other) -> "IntPolynomial":
        return _as_polynomial(other) - self

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        other = _as_polynomial(other)
        return IntPolynomial.from_poly(self.to_poly() * other.to_poly())

    __rmul__ = __mul__

    def exact_div(self, other: "IntPolynomial") -> "IntPolynomial":
        """
        精確多項式除法

        Raises:
            ZeroDivisionError: 除數為零多項式
            NonDivisible: 有餘式或商不是整係數
        """
        other = _as_polynomial(other)
        if other.is_zero():
            raise ZeroDivisionError("除以零多項式")
        quotient, remainder = self.to_poly().div(other.to_poly())
        if not remainder.is_zero:
            raise NonDivisible(f"{self.render()} 不能被 {other.render()} 整除")
        return IntPolynomial.from_poly(quotient)

    def evaluate(self, value: int) -> int:
        return sum(c * value ** d for d, c in self._terms)

    def is_palindromic(self) -> bool:
        if not self._terms:
            return True
        low = self._terms[0][0]
        high = self.degree
        table = dict(self._terms)
        return all(table.get(low + high - d, 0) == c for d, c in self._terms)

    def render(self) -> str:
        """人類可讀形式，例如 "1 + 2z + z^3" """
        if not self._terms:
            return "0"
        pieces = []
        for degree, coefficient in self._terms:
            if degree == 0:
                body = str(abs(coefficient))
            else:
                power = "z" if degree == 1 else f"z^{degree}"
                body = power if abs(coefficient) == 1 else f"{abs(coefficient)}{power}"
            if not pieces:
                pieces.append(body if coefficient > 0 else f"-{body}")
            else:
                pieces.append(("+ " if coefficient > 0 else "- ") + body)
        return " ".join(pieces)

    def to_json(self) -> Dict[str, int]:
        return {str(d): c for d, c in self._terms}

    @classmethod
    def from_json(cls, data: Mapping[str, int]) -> "IntPolynomial":
        return cls({int(d): int(c) for d, c in data.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = IntPolynomial.constant(other)
        return isinstance(other, IntPolynomial) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(self._terms)

    def __repr__(self) -> str:
        return f"IntPolynomial({self.render()})"

    def __str__(self) -> str:
        return self.render()


def _as_polynomial(value) -> IntPolynomial:
    if isinstance(value, IntPolynomial):
        return value
    if isinstance(value, int):
        return IntPolynomial.constant(value)
    raise TypeError(f"無法轉換為多項式: {value!r}")


ONE = IntPolynomial.constant(1)


def q_integer(k: int) -> IntPolynomial:
    """[k]_z = 1 + z + … + z^{k−1}"""
    if k < 0:
        raise ValueError(f"k 必須非負: {k}")
    return IntPolynomial({i: 1 for i in range(k)})


def _product(factors: Iterable[IntPolynomial]) -> IntPolynomial:
    return reduce(lambda acc, factor: acc * factor, factors, ONE)


def q_factorial(k: int) -> IntPolynomial:
    return _product(q_integer(i) for i in range(1, k + 1))


def gaussian_binomial(a: int, b: int) -> IntPolynomial:
    """
    Gaussian 二項式 [a choose b]_z，以乘積公式精確計算

    Raises:
        ValueError: b > a 或有負數
    """
    if a < 0 or b < 0 or b > a:
        raise ValueError(f"需要 0 ≤ b ≤ a，收到 a={a}, b={b}")
    numerator = _product(q_integer(a - b + i) for i in range(1, b + 1))
    return numerator.exact_div(q_factorial(b))


def box_generating_polynomial(rows: int, cols: int, complemented: bool = False) -> IntPolynomial:
    """Σ_λ z^{|λ|}（或 z^{rows·cols−|λ|}）對盒子中所有分割求和"""
    coefficients: Dict[int, int] = {}
    for lam in partitions_in_box(rows, cols):
        degree = rows * cols - lam.weight if complemented else lam.weight
        coefficients[degree] = coefficients.get(degree, 0) + 1
    return IntPolynomial(coefficients)


def q_multinomial(parts: Sequence[int]) -> IntPolynomial:
    """[Σ parts]_z! / ∏ [part]_z!，即 A 型旗簇的 Poincaré 多項式"""
    if any(part < 0 for part in parts):
        raise ValueError(f"各部分必須非負: {tuple(parts)}")
    denominator = _product(q_factorial(part) for part in parts)
    return q_factorial(sum(parts)).exact_div(denominator)


def phi(n: int) -> IntPolynomial:
    """φ_n(z) = ∏_{k=2}^{n} (z^k − 1)/(z − 1)，φ_1 = 1"""
    if n < 1:
        raise ValueError(f"n 必須 ≥ 1: {n}")
    return _product(q_integer(k) for k in range(2, n + 1))


def psi(n: int) -> IntPolynomial:
    """ψ_n(z) = ∏_{k=1}^{n−1} (z^{2k} − 1)/(z − 1)"""
    if n < 1:
        raise ValueError(f"n 必須 ≥ 1: {n}")
    return _product(q_integer(2 * k) for k in range(1, n))


def gensb_polynomial(n: int, d: int) -> IntPolynomial:
    """
    φ_n / (φ_d · φ_{n+1−d})

    Args:
        n: 代數的次數減一之外的秩參數
        d: 子空間維數，需 1 < d < n

    Raises:
        ValueError: 參數範圍錯誤
        NonDivisible: 商不是多項式
    """
    if not 1 < d < n:
        raise ValueError(f"需要 1 < d < n，收到 n={n}, d={d}")
    quotient = phi(n).exact_div(phi(d) * phi(n + 1 - d))
    if any(c < 0 for c in quotient.coefficients.values()):
        raise NonDivisible(f"商有負係數: {quotient.render()}")
    return quotient


def proofgensb_identity(n: int, d: int) -> bool:
    """檢查 φ_n/(φ_{d−1}φ_{n+1−d}) = [d]_z · φ_n/(φ_dφ_{n+1−d})"""
    try:
        left = phi(n).exact_div(phi(d - 1) * phi(n + 1 - d))
        right = (q_integer(d) * phi(n)).exact_div(phi(d) * phi(n + 1 - d))
    except (NonDivisible, ValueError) as e:
        logger.debug("proofgensb_identity(%d, %d) failed: %s", n, d, e)
        return False
    return left == right


def superscript(value: int) -> str:
    return str(value).translate(_SUPERSCRIPT)
