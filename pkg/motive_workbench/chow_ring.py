"""
Chow Ring of a Split Grassmannian

Schubert basis, Pieri and Littlewood-Richardson multiplication, the degree
map and total Chern classes for Gr(d, n). Projective space is Gr(1, n).
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

from sympy.combinatorics import Permutation

from .combinatorics import Partition, add_box_neighbours, complement, partitions_in_box, superscript
from .config import get_workbench_config
from .errors import (
    CodimMismatch,
    NotAUnit,
    PartitionError,
    RankLimitExceeded,
    RingMismatch,
    SpaceMismatch,
    UnknownName,
)

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]

_SUBSCRIPT = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


@dataclass(frozen=True)
class CoefficientRing:
    """係數環：Integers、IntegersMod(m) 或 Rationals"""

    kind: str
    modulus: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("Z", "Z/m", "Q"):
            raise ValueError(f"未知的係數環: {self.kind}")
        if self.kind == "Z/m":
            if not isinstance(self.modulus, int) or self.modulus < 2:
                raise ValueError(f"模數必須是 ≥ 2 的整數: {self.modulus}")
        elif self.modulus is not None:
            raise ValueError(f"{self.kind} 不接受模數")

    @property
    def is_integral(self) -> bool:
        return self.kind == "Z"

    @property
    def is_modular(self) -> bool:
        return self.kind == "Z/m"

    @property
    def is_rational(self) -> bool:
        return self.kind == "Q"

    def normalize(self, value: Scalar) -> Scalar:
        """把純量轉成此環的標準代表"""
        if isinstance(value, bool):
            raise RingMismatch(f"布林值不是係數: {value!r}")
        if isinstance(value, Fraction):
            if self.kind == "Q":
                return value
            if value.denominator != 1:
                raise RingMismatch(f"非整數係數 {value} 不屬於 {self.render()}")
            value = value.numerator
        if not isinstance(value, int):
            raise RingMismatch(f"無法作為係數: {value!r}")
        if self.kind == "Z/m":
            return value % self.modulus
        if self.kind == "Q":
            return Fraction(value)
        return value

    def render(self) -> str:
        if self.kind == "Z/m":
            return f"Z/{self.modulus}"
        return self.kind

    @classmethod
    def parse(cls, text: str) -> "CoefficientRing":
        """解析 "Z"、"Z/m" 或 "Q" """
        text = text.strip()
        if text == "Z":
            return INTEGERS
        if text == "Q":
            return RATIONALS
        if text.startswith("Z/"):
            try:
                return integers_mod(int(text[2:]))
            except ValueError:
                pass
        raise ValueError(f"無法解析係數環: {text!r}（可用 Z、Z/m、Q）")

    def __str__(self) -> str:
        return self.render()


INTEGERS = CoefficientRing("Z")
RATIONALS = CoefficientRing("Q")


def integers_mod(m: int) -> CoefficientRing:
    return CoefficientRing("Z/m", m)


@dataclass(frozen=True)
class GrassmannSpace:
    """Gr(d, n)：n 維空間中的 d 維子空間，維數 d(n−d)"""

    d: int
    n: int

    def __post_init__(self):
        if not 1 <= self.d <= self.n - 1:
            raise PartitionError(f"需要 1 ≤ d ≤ n−1，收到 Gr({self.d},{self.n})")
        max_rank = get_workbench_config().max_rank
        if self.n > max_rank:
            raise RankLimitExceeded(f"Gr({self.d},{self.n}) 的秩 {self.n} 超過上限 {max_rank}")

    @property
    def rows(self) -> int:
        return self.d

    @property
    def cols(self) -> int:
        return self.n - self.d

    @property
    def dimension(self) -> int:
        return self.d * (self.n - self.d)

    @property
    def basis(self) -> List[Partition]:
        return _basis(self.d, self.n)

    @property
    def point(self) -> Partition:
        return Partition((self.cols,) * self.rows)

    @property
    def is_projective(self) -> bool:
        return self.d == 1

    def contains(self, lam: Partition) -> bool:
        return Partition(lam).fits_box(self.rows, self.cols)

    def complement(self, lam: Partition) -> Partition:
        return complement(lam, self.rows, self.cols)

    def render(self) -> str:
        if self.is_projective:
            return f"P^{self.n - 1}"
        return f"Gr({self.d},{self.n})"

    def __str__(self) -> str:
        return self.render()


@lru_cache(maxsize=None)
def _basis(d: int, n: int) -> List[Partition]:
    return partitions_in_box(d, n - d)


def projective_space(n: int) -> GrassmannSpace:
    """P^n = Gr(1, n+1)"""
    return GrassmannSpace(1, n + 1)


# Gr(2,5) 上的生成元名稱
GR25_NAMES: Dict[str, Tuple[int, ...]] = {
    "sigma1": (1,),
    "sigma2": (2,),
    "sigma3": (3,),
    "g2": (1, 1),
    "g3": (2, 1),
    "h4": (3, 1),
    "g4": (2, 2),
    "g5": (3, 2),
    "pt": (3, 3),
}

_GR25_DISPLAY = {
    (): "1",
    (1,): "σ₁",
    (2,): "σ₂",
    (3,): "σ₃",
    (1, 1): "g₂",
    (2, 1): "g₃",
    (3, 1): "h₄",
    (2, 2): "g₄",
    (3, 2): "g₅",
    (3, 3): "pt",
}


def basis_name(space: GrassmannSpace, lam: Partition) -> str:
    """基底類別的顯示名稱"""
    lam = Partition(lam)
    if not lam:
        return "1"
    if (space.d, space.n) == (2, 5):
        return _GR25_DISPLAY[tuple(lam)]
    if space.is_projective:
        return "H" if lam[0] == 1 else f"H{superscript(lam[0])}"
    if len(lam) == 1:
        return "σ" + str(lam[0]).translate(_SUBSCRIPT)
    return "Δ" + lam.render()


class ChowClass:
    """單一 Grassmannian 上 Schubert 類別的有限線性組合"""

    __slots__ = ("space", "ring", "_terms")

    def __init__(self, space: GrassmannSpace, ring: CoefficientRing,
                 terms: Optional[Mapping[Partition, Scalar]] = None):
        collected: Dict[Partition, Scalar] = {}
        for lam, coefficient in dict(terms or {}).items():
            lam = Partition(lam)
            if not space.contains(lam):
                raise PartitionError(f"分割 {lam.render()} 不在 {space} 的盒子內")
            collected[lam] = ring.normalize(collected.get(lam, 0) + ring.normalize(coefficient))
        self.space = space
        self.ring = ring
        self._terms = tuple(sorted(((lam, c) for lam, c in collected.items() if c != 0),
                                   key=lambda item: item[0].sort_key))

    @property
    def terms(self) -> Dict[Partition, Scalar]:
        return dict(self._terms)

    def items(self):
        return iter(self._terms)

    def coefficient(self, lam: Partition) -> Scalar:
        return self.terms.get(Partition(lam), self.ring.normalize(0))

    def is_zero(self) -> bool:
        return not self._terms

    def codimensions(self) -> List[int]:
        return sorted({lam.weight for lam, _ in self._terms})

    def is_homogeneous(self) -> bool:
        return len(self.codimensions()) <= 1

    def homogeneous_part(self, codim: int) -> "ChowClass":
        return ChowClass(self.space, self.ring, {lam: c for lam, c in self._terms if lam.weight == codim})

    def _check_compatible(self, other: "ChowClass") -> None:
        if not isinstance(other, ChowClass):
            raise TypeError(f"無法與 {type(other).__name__} 運算")
        if self.space != other.space:
            raise SpaceMismatch(f"空間不一致: {self.space} 與 {other.space}")
        if self.ring != other.ring:
            raise RingMismatch(f"係數環不一致: {self.ring} 與 {other.ring}")

    def __add__(self, other: "ChowClass") -> "ChowClass":
        self._check_compatible(other)
        merged = self.terms
        for lam, c in other.items():
            merged[lam] = merged.get(lam, 0) + c
        return ChowClass(self.space, self.ring, merged)

    def __neg__(self) -> "ChowClass":
        return ChowClass(self.space, self.ring, {lam: -c for lam, c in self._terms})

    def __sub__(self, other: "ChowClass") -> "ChowClass":
        return self + (-other)

    def scale(self, scalar: Scalar) -> "ChowClass":
        factor = self.ring.normalize(scalar)
        return ChowClass(self.space, self.ring, {lam: c * factor for lam, c in self._terms})

    def __mul__(self, other):
        if isinstance(other, ChowClass):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, exponent: int) -> "ChowClass":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError(f"指數必須是非負整數: {exponent}")
        result = unit(self.space, self.ring)
        for _ in range(exponent):
            result = multiply(result, self)
        return result

    def __eq__(self, other) -> bool:
        return (isinstance(other, ChowClass) and self.space == other.space
                and self.ring == other.ring and self._terms == other._terms)

    def __hash__(self) -> int:
        return hash((self.space, self.ring, self._terms))

    def render(self) -> str:
        return render_terms([(basis_name(self.space, lam), c) for lam, c in self._terms])

    def to_json(self) -> dict:
        return {
            "space": [self.space.d, self.space.n],
            "ring": self.ring.render(),
            "terms": [{"partition": list(lam), "coefficient": str(c)} for lam, c in self._terms],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ChowClass":
        ring = CoefficientRing.parse(data["ring"])
        space = GrassmannSpace(*data["space"])
        return cls(space, ring, {Partition(t["partition"]): Fraction(t["coefficient"])
                                 for t in data["terms"]})

    def __repr__(self) -> str:
        return f"ChowClass({self.space}, {self.ring}: {self.render()})"

    def __str__(self) -> str:
        return self.render()


def format_coefficient(coefficient: Scalar, name: str) -> str:
    """單一項的顯示（不含正負號）"""
    magnitude = abs(coefficient)
    if name == "1":
        return str(magnitude)
    if magnitude == 1:
        return name
    if isinstance(magnitude, Fraction) and magnitude.denominator != 1:
        return f"({magnitude}){name}"
    return f"{magnitude}{name}"


def render_terms(terms: Iterable[Tuple[str, Scalar]]) -> str:
    """把 (名稱, 係數) 串成 "3σ₂ + g₂" 形式"""
    pieces = []
    for name, coefficient in terms:
        body = format_coefficient(coefficient, name)
        if not pieces:
            pieces.append(body if coefficient > 0 else f"-{body}")
        else:
            pieces.append(("+ " if coefficient > 0 else "- ") + body)
    return " ".join(pieces) if pieces else "0"


def zero(space: GrassmannSpace, ring: CoefficientRing = INTEGERS) -> ChowClass:
    return ChowClass(space, ring)


def unit(space: GrassmannSpace, ring: CoefficientRing = INTEGERS) -> ChowClass:
    return ChowClass(space, ring, {Partition(): 1})


def basis_class(space: GrassmannSpace, lam: Iterable[int], ring: CoefficientRing = INTEGERS) -> ChowClass:
    """
    基底類別 Δ_λ

    Raises:
        PartitionError: λ 不在盒子內
    """
    return ChowClass(space, ring, {Partition(lam): 1})


def named_generator(space: GrassmannSpace, name: str, ring: CoefficientRing = INTEGERS) -> ChowClass:
    """
    依名稱取得生成元

    Gr(2,5) 上有 sigma1..sigma3、g2..g5、h4、pt；任何空間都接受 sigmaK、pt 與 1；
    射影空間上 H 是超平面類別。

    Raises:
        UnknownName: 名稱不適用於此空間
    """
    if name == "1":
        return unit(space, ring)
    if name == "pt":
        return basis_class(space, space.point, ring)
    if name == "H":
        if not space.is_projective:
            raise UnknownName(f"H 只存在於射影空間，而不是 {space}")
        return basis_class(space, (1,), ring)
    if name.startswith("sigma") and name[5:].isdigit():
        m = int(name[5:])
        if 1 <= m <= space.cols:
            return basis_class(space, (m,), ring)
        raise UnknownName(f"{name} 不存在於 {space}")
    if (space.d, space.n) == (2, 5) and name in GR25_NAMES:
        return basis_class(space, GR25_NAMES[name], ring)
    raise UnknownName(f"未知的生成元 {name!r}（空間 {space}）")


def cast(x: ChowClass, ring: CoefficientRing) -> ChowClass:
    """
    允許的係數環轉換：恆等、Z → Z/m、Z → Q

    Raises:
        RingMismatch: 其他轉換
    """
    if x.ring == ring:
        return x
    if not x.ring.is_integral:
        raise RingMismatch(f"不支援的轉換: {x.ring} → {ring}")
    return ChowClass(x.space, ring, x.terms)


def _horizontal_strips(lam: Partition, m: int, rows: int, cols: int) -> List[Partition]:
    result = []
    for mu in partitions_in_box(rows, cols):
        if mu.weight != lam.weight + m:
            continue
        # μ_i ≥ λ_i ≥ μ_{i+1} 交錯條件
        if all(mu.part(i) >= lam.part(i) for i in range(rows)) and \
                all(lam.part(i) >= mu.part(i + 1) for i in range(rows)):
            result.append(mu)
    return result


def pieri(space: GrassmannSpace, lam: Iterable[int], m: int, ring: CoefficientRing = INTEGERS) -> ChowClass:
    """
    Pieri 公式 Δ_λ · σ_m = Σ Δ_μ，μ/λ 為盒子內的水平帶

    Raises:
        PartitionError: λ 不在盒子內，或 m 不在 [0, n−d]
    """
    lam = Partition(lam)
    if not space.contains(lam):
        raise PartitionError(f"分割 {lam.render()} 不在 {space} 的盒子內")
    if not 0 <= m <= space.cols:
        raise PartitionError(f"σ_{m} 不存在於 {space}")
    return ChowClass(space, ring, {mu: 1 for mu in _horizontal_strips(lam, m, space.rows, space.cols)})


@lru_cache(maxsize=None)
def lr_coefficient(lam: Partition, mu: Partition, nu: Partition) -> int:
    """
    Littlewood-Richardson 係數 c^ν_{λμ}

    計算 ν/λ 形狀、內容為 μ 的 LR 表（列弱遞增、行嚴格遞增、反向閱讀字為格子字）的個數。
    """
    lam, mu, nu = Partition(lam), Partition(mu), Partition(nu)
    if nu.weight != lam.weight + mu.weight or not nu.contains(lam):
        return 0
    # 閱讀順序：由上而下，每列由右而左
    cells = [(i, j) for i in range(len(nu)) for j in reversed(range(lam.part(i), nu[i]))]
    filling: Dict[Tuple[int, int], int] = {}
    counts = [0] * (len(mu) + 1)

    def place(index: int) -> int:
        if index == len(cells):
            return 1
        i, j = cells[index]
        right = filling.get((i, j + 1))
        above = filling.get((i - 1, j))
        total = 0
        for value in range(1, len(mu) + 1):
            if counts[value] >= mu[value - 1]:
                continue
            if value > 1 and counts[value] + 1 > counts[value - 1]:
                continue
            if right is not None and value > right:
                continue
            if above is not None and value <= above:
                continue
            filling[(i, j)] = value
            counts[value] += 1
            total += place(index + 1)
            counts[value] -= 1
            del filling[(i, j)]
        return total

    return place(0)


@lru_cache(maxsize=None)
def _lr_product(lam: Partition, mu: Partition, rows: int, cols: int) -> Tuple[Tuple[Partition, int], ...]:
    weight = lam.weight + mu.weight
    result = []
    for nu in partitions_in_box(rows, cols):
        if nu.weight != weight:
            continue
        coefficient = lr_coefficient(lam, mu, nu)
        if coefficient:
            result.append((nu, coefficient))
    return tuple(result)


def schubert_product(space: GrassmannSpace, lam: Partition, mu: Partition) -> Tuple[Tuple[Partition, int], ...]:
    """Δ_λ·Δ_μ 在盒子內的結構常數 ((ν, c^ν_{λμ}), …)"""
    return _lr_product(Partition(lam), Partition(mu), space.rows, space.cols)


def multiply(x: ChowClass, y: ChowClass) -> ChowClass:
    """
    環乘法：Δ_λ·Δ_μ = Σ c^ν_{λμ} Δ_ν，盒子外的 ν 貢獻 0

    Raises:
        SpaceMismatch: 空間不同
        RingMismatch: 係數環不同
    """
    x._check_compatible(y)
    space = x.space
    result: Dict[Partition, Scalar] = {}
    for lam, a in x.items():
        for mu, b in y.items():
            for nu, c in _lr_product(lam, mu, space.rows, space.cols):
                result[nu] = result.get(nu, 0) + a * b * c
    return ChowClass(space, x.ring, result)


def _is_special(space: GrassmannSpace, k: int) -> bool:
    return 0 <= k <= space.cols


def _sign(perm: Tuple[int, ...]) -> int:
    return Permutation(list(perm)).signature() if perm else 1


def giambelli_oracle(space: GrassmannSpace, lam: Iterable[int], ring: CoefficientRing = INTEGERS) -> ChowClass:
    """
    以 Giambelli 行列式 det(σ_{λ_i+j−i}) 重算 Δ_λ（只用 Pieri 展開）

    Raises:
        PartitionError: λ 不在盒子內
    """
    lam = Partition(lam)
    if not space.contains(lam):
        raise PartitionError(f"分割 {lam.render()} 不在 {space} 的盒子內")
    size = len(lam)
    result: Dict[Partition, Scalar] = {}
    for perm in itertools.permutations(range(size)):
        indices = [lam[i] + perm[i] - i for i in range(size)]
        if not all(_is_special(space, k) for k in indices):
            continue
        current: Dict[Partition, Scalar] = {Partition(): _sign(perm)}
        for k in indices:
            following: Dict[Partition, Scalar] = {}
            for mu, c in current.items():
                for nu in _horizontal_strips(mu, k, space.rows, space.cols):
                    following[nu] = following.get(nu, 0) + c
            current = following
        for nu, c in current.items():
            result[nu] = result.get(nu, 0) + c
    return ChowClass(space, ring, result)


def iterated_pieri_product(x: ChowClass, y: ChowClass) -> ChowClass:
    """以 Giambelli 展開 y 的每個基底類別後，用 Pieri 乘上 x（multiply 的獨立驗證）"""
    x._check_compatible(y)
    space = x.space
    result = zero(space, x.ring)
    for mu, b in y.items():
        lam_mu = Partition(mu)
        size = len(lam_mu)
        for perm in itertools.permutations(range(size)):
            indices = [lam_mu[i] + perm[i] - i for i in range(size)]
            if not all(_is_special(space, k) for k in indices):
                continue
            current = x.scale(_sign(perm) * b)
            for k in indices:
                following: Dict[Partition, Scalar] = {}
                for nu, c in current.items():
                    for rho in _horizontal_strips(nu, k, space.rows, space.cols):
                        following[rho] = following.get(rho, 0) + c
                current = ChowClass(space, x.ring, following)
            result = result + current
    return result


def degree(x: ChowClass, strict: bool = False) -> Scalar:
    """
    次數映射：點類別的係數

    Args:
        x: Chow 類別
        strict: 為 True 時，非齊次輸入會拋出 CodimMismatch

    Returns:
        點類別 Δ_(box) 的係數
    """
    if strict and not x.is_homogeneous():
        raise CodimMismatch(f"degree 需要齊次類別，收到餘維數 {x.codimensions()}")
    return x.coefficient(x.space.point)


def chern_quotient(space: GrassmannSpace, ring: CoefficientRing = INTEGERS) -> ChowClass:
    """普遍商叢 Q 的總 Chern 類別 1 + σ₁ + … + σ_{n−d}"""
    return ChowClass(space, ring, {Partition((m,)): 1 for m in range(space.cols + 1)})


def invert_total_chern(c: ChowClass) -> ChowClass:
    """
    總 Chern 類別的乘法反元素（在空間維數處截斷）

    Raises:
        NotAUnit: 常數項不是 1
    """
    if c.coefficient(Partition()) != c.ring.normalize(1):
        raise NotAUnit(f"常數項不是 1: {c.render()}")
    nilpotent = c - unit(c.space, c.ring)
    result = unit(c.space, c.ring)
    power = unit(c.space, c.ring)
    for _ in range(c.space.dimension):
        power = multiply(power, -nilpotent)
        if power.is_zero():
            break
        result = result + power
    return result


def chern_tautological(space: GrassmannSpace, ring: CoefficientRing = INTEGERS) -> ChowClass:
    """c(τ_d) = c(Q)^{-1}"""
    return invert_total_chern(chern_quotient(space, ring))


def hasse_diagram(space: GrassmannSpace) -> Tuple[Dict[int, List[Partition]], List[Tuple[Partition, Partition]]]:
    """
    Schubert 基底的 Hasse 圖

    Returns:
        (各餘維數的頂點, 覆蓋邊列表)
    """
    levels: Dict[int, List[Partition]] = {}
    edges: List[Tuple[Partition, Partition]] = []
    for lam in space.basis:
        levels.setdefault(lam.weight, []).append(lam)
        for mu in add_box_neighbours(lam, space.rows, space.cols):
            edges.append((lam, mu))
    return levels, edges


def render_hasse(space: GrassmannSpace) -> str:
    """文字形式的 Hasse 圖，點類別在上"""
    levels, edges = hasse_diagram(space)
    lines = [f"Hasse diagram of {space} ({len(space.basis)} vertices)"]
    for codim in sorted(levels, reverse=True):
        names = "  ".join(basis_name(space, lam) for lam in levels[codim])
        lines.append(f"  codim {codim}: {names}")
    lines.append("  edges:")
    for lam, mu in edges:
        lines.append(f"    {basis_name(space, lam)} -> {basis_name(space, mu)}")
    return "\n".join(lines)
