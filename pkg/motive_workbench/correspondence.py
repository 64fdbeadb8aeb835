"""
Correspondences Between Grassmannians

The algebra CH(X×Y) ≅ CH(X) ⊗ CH(Y) in the product Schubert basis:
external products, transposition, composition through the duality
pairing, projector and isomorphism predicates, modular and localized
reduction.
"""

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd
from typing import Dict, Iterable, List, Mapping, Optional, Set, Tuple, Union

import sympy

from .chow_ring import (
    INTEGERS,
    RATIONALS,
    ChowClass,
    CoefficientRing,
    GrassmannSpace,
    Scalar,
    basis_name,
    cast,
    format_coefficient,
    integers_mod,
    schubert_product,
)
from .combinatorics import Partition
from .errors import CodimMismatch, NotAUnit, PartitionError, RankOutOfRange, RingMismatch, SpaceMismatch

logger = logging.getLogger(__name__)

Pair = Tuple[Partition, Partition]


class ProductClass:
    """CH(X×Y) 中的類別：Σ c·Δ_λ×Δ_μ"""

    __slots__ = ("left", "right", "ring", "_terms")

    def __init__(self, left: GrassmannSpace, right: GrassmannSpace, ring: CoefficientRing,
                 terms: Optional[Mapping[Pair, Scalar]] = None):
        collected: Dict[Pair, Scalar] = {}
        for (lam, mu), coefficient in dict(terms or {}).items():
            lam, mu = Partition(lam), Partition(mu)
            if not left.contains(lam) or not right.contains(mu):
                raise PartitionError(f"{lam.render()}×{mu.render()} 不在 {left}×{right} 的盒子內")
            key = (lam, mu)
            collected[key] = ring.normalize(collected.get(key, 0) + ring.normalize(coefficient))
        self.left = left
        self.right = right
        self.ring = ring
        self._terms = tuple(sorted(((key, c) for key, c in collected.items() if c != 0),
                                   key=lambda item: (item[0][0].sort_key, item[0][1].sort_key)))

    @property
    def terms(self) -> Dict[Pair, Scalar]:
        return dict(self._terms)

    def items(self):
        return iter(self._terms)

    def coefficient(self, lam: Iterable[int], mu: Iterable[int]) -> Scalar:
        return self.terms.get((Partition(lam), Partition(mu)), self.ring.normalize(0))

    def is_zero(self) -> bool:
        return not self._terms

    def codimensions(self) -> List[int]:
        return sorted({lam.weight + mu.weight for (lam, mu), _ in self._terms})

    def is_homogeneous(self) -> bool:
        return len(self.codimensions()) <= 1

    def homogeneous_part(self, codim: int) -> "ProductClass":
        return ProductClass(self.left, self.right, self.ring,
                            {key: c for key, c in self._terms if key[0].weight + key[1].weight == codim})

    def _check_compatible(self, other: "ProductClass") -> None:
        if not isinstance(other, ProductClass):
            raise TypeError(f"無法與 {type(other).__name__} 運算")
        if (self.left, self.right) != (other.left, other.right):
            raise SpaceMismatch(f"空間不一致: {self.left}×{self.right} 與 {other.left}×{other.right}")
        if self.ring != other.ring:
            raise RingMismatch(f"係數環不一致: {self.ring} 與 {other.ring}")

    def __add__(self, other: "ProductClass") -> "ProductClass":
        self._check_compatible(other)
        merged = self.terms
        for key, c in other.items():
            merged[key] = merged.get(key, 0) + c
        return ProductClass(self.left, self.right, self.ring, merged)

    def __neg__(self) -> "ProductClass":
        return ProductClass(self.left, self.right, self.ring, {key: -c for key, c in self._terms})

    def __sub__(self, other: "ProductClass") -> "ProductClass":
        return self + (-other)

    def scale(self, scalar: Scalar) -> "ProductClass":
        factor = self.ring.normalize(scalar)
        return ProductClass(self.left, self.right, self.ring, {key: c * factor for key, c in self._terms})

    def __mul__(self, other):
        if isinstance(other, ProductClass):
            return self.intersect(other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def intersect(self, other: "ProductClass") -> "ProductClass":
        """CH(X×Y) 的環乘法：(a×b)·(c×d) = (a·c)×(b·d)"""
        self._check_compatible(other)
        result: Dict[Pair, Scalar] = {}
        for (lam1, mu1), a in self._terms:
            for (lam2, mu2), b in other.items():
                for nu, c in schubert_product(self.left, lam1, lam2):
                    for kappa, e in schubert_product(self.right, mu1, mu2):
                        key = (nu, kappa)
                        result[key] = result.get(key, 0) + a * b * c * e
        return ProductClass(self.left, self.right, self.ring, result)

    def power(self, exponent: int) -> "ProductClass":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError(f"指數必須是非負整數: {exponent}")
        result = product_unit(self.left, self.right, self.ring)
        for _ in range(exponent):
            result = result.intersect(self)
        return result

    __pow__ = power

    def __eq__(self, other) -> bool:
        return (isinstance(other, ProductClass) and self.left == other.left and self.right == other.right
                and self.ring == other.ring and self._terms == other._terms)

    def __hash__(self) -> int:
        return hash((self.left, self.right, self.ring, self._terms))

    def render(self) -> str:
        """例如 "g₂×1 + σ₁×H + 1×H²" """
        pieces = []
        for (lam, mu), coefficient in self._terms:
            name = f"{basis_name(self.left, lam)}×{basis_name(self.right, mu)}"
            magnitude = abs(coefficient)
            if magnitude == 1:
                body = name
            elif name[0].isdigit():
                text = f"({magnitude})" if isinstance(magnitude, Fraction) and magnitude.denominator != 1 else str(magnitude)
                body = f"{text}·{name}"
            else:
                body = format_coefficient(magnitude, name)
            if not pieces:
                pieces.append(body if coefficient > 0 else f"-{body}")
            else:
                pieces.append(("+ " if coefficient > 0 else "- ") + body)
        return " ".join(pieces) if pieces else "0"

    def to_json(self) -> dict:
        return {
            "left": [self.left.d, self.left.n],
            "right": [self.right.d, self.right.n],
            "ring": self.ring.render(),
            "terms": [
                {"left_partition": list(lam), "right_partition": list(mu), "coefficient": str(c)}
                for (lam, mu), c in self._terms
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ProductClass":
        return cls(
            GrassmannSpace(*data["left"]),
            GrassmannSpace(*data["right"]),
            CoefficientRing.parse(data["ring"]),
            {(Partition(t["left_partition"]), Partition(t["right_partition"])): Fraction(t["coefficient"])
             for t in data["terms"]},
        )

    def __repr__(self) -> str:
        return f"ProductClass({self.left}×{self.right}, {self.ring}: {self.render()})"

    def __str__(self) -> str:
        return self.render()


Cycle = Union[ChowClass, ProductClass]


def product_unit(left: GrassmannSpace, right: GrassmannSpace, ring: CoefficientRing = INTEGERS) -> ProductClass:
    return ProductClass(left, right, ring, {(Partition(), Partition()): 1})


def external_product(x: ChowClass, y: ChowClass) -> ProductClass:
    """
    外積 x×y，項 (λ, μ) 的係數為 x_λ·y_μ

    Raises:
        RingMismatch: 係數環不同
    """
    if x.ring != y.ring:
        raise RingMismatch(f"係數環不一致: {x.ring} 與 {y.ring}")
    return ProductClass(x.space, y.space, x.ring,
                        {(lam, mu): a * b for lam, a in x.items() for mu, b in y.items()})


def transpose(a: ProductClass) -> ProductClass:
    """α ↦ αᵗ：交換兩個因子"""
    return ProductClass(a.right, a.left, a.ring, {(mu, lam): c for (lam, mu), c in a.items()})


def pairing(mu: Partition, nu: Partition, space: GrassmannSpace) -> int:
    """deg(Δ_μ·Δ_ν)：ν = μ^op 時為 1，否則為 0"""
    mu, nu = Partition(mu), Partition(nu)
    if mu.weight + nu.weight != space.dimension:
        return 0
    return 1 if space.complement(mu) == nu else 0


def compose(b: ProductClass, a: ProductClass) -> ProductClass:
    """
    對應的合成 b∘a（a 在 X×Y 上，b 在 Y×Z 上）

    (Δ_ν×Δ_κ)∘(Δ_λ×Δ_μ) = deg(Δ_μ·Δ_ν)·Δ_λ×Δ_κ，雙線性延拓

    Raises:
        SpaceMismatch: 中間空間不同
        RingMismatch: 係數環不同
    """
    if a.right != b.left:
        raise SpaceMismatch(f"無法合成: {a.left}×{a.right} 之後接 {b.left}×{b.right}")
    if a.ring != b.ring:
        raise RingMismatch(f"係數環不一致: {a.ring} 與 {b.ring}")
    middle = a.right
    by_left: Dict[Partition, List[Tuple[Partition, Scalar]]] = {}
    for (nu, kappa), c in b.items():
        by_left.setdefault(nu, []).append((kappa, c))
    result: Dict[Pair, Scalar] = {}
    for (lam, mu), c in a.items():
        for kappa, e in by_left.get(middle.complement(mu), ()):
            key = (lam, kappa)
            result[key] = result.get(key, 0) + c * e
    return ProductClass(a.left, b.right, a.ring, result)


def diagonal(space: GrassmannSpace, ring: CoefficientRing = INTEGERS) -> ProductClass:
    """對角線類別 Δ = Σ_λ Δ_λ×Δ_{λ^op}"""
    return ProductClass(space, space, ring, {(lam, space.complement(lam)): 1 for lam in space.basis})


def subset_diagonal(space: GrassmannSpace, subset: Iterable[Iterable[int]],
                    ring: CoefficientRing = INTEGERS) -> ProductClass:
    """Σ_{λ∈S} Δ_λ×Δ_{λ^op}"""
    return ProductClass(space, space, ring,
                        {(Partition(lam), space.complement(Partition(lam))): 1 for lam in subset})


def random_homogeneous(left: GrassmannSpace, right: GrassmannSpace, codim: int, rng: random.Random,
                       ring: CoefficientRing = INTEGERS, bound: int = 3) -> ProductClass:
    """
    CH^codim(X×Y) 中係數落在 [−bound, bound] 的隨機齊次類別

    Raises:
        CodimMismatch: codim 超出 0..dim X + dim Y
    """
    if not 0 <= codim <= left.dimension + right.dimension:
        raise CodimMismatch(f"{left}×{right} 沒有餘維數 {codim} 的類別")
    terms = {(lam, mu): rng.randint(-bound, bound)
             for lam in left.basis for mu in right.basis if lam.weight + mu.weight == codim}
    return ProductClass(left, right, ring, terms)


def is_projector(p: ProductClass) -> bool:
    """
    p∘p = p

    Raises:
        SpaceMismatch: p 不是同一空間上的自對應
    """
    if p.left != p.right:
        raise SpaceMismatch(f"投影算子必須在 X×X 上，收到 {p.left}×{p.right}")
    return compose(p, p) == p


@dataclass(frozen=True)
class TwistFrame:
    """從扭轉 i 到扭轉 j 的對應，期望餘維數為 dim(left) + i − j"""

    source_twist: int
    target_twist: int

    def expected_codimension(self, left: GrassmannSpace) -> int:
        return left.dimension + self.source_twist - self.target_twist

    def conforms(self, a: ProductClass) -> bool:
        expected = self.expected_codimension(a.left)
        return a.is_homogeneous() and all(codim == expected for codim in a.codimensions())

    def reversed(self) -> "TwistFrame":
        return TwistFrame(self.target_twist, self.source_twist)


def check_iso_pair(j1: ProductClass, j2: ProductClass, p: ProductClass, q: ProductClass,
                   frame: TwistFrame) -> bool:
    """
    檢查 j₁、j₂ 是否在 (X, p) 與 (Y, q) 之間給出同構

    Returns:
        j₁∘j₂ = q、j₂∘j₁ = p、q∘j₁ = j₁∘p、p∘j₂ = j₂∘q 是否全部成立

    Raises:
        SpaceMismatch: 空間不相容
        CodimMismatch: j₁ 或 j₂ 不符合扭轉框架
    """
    x_space, y_space = j1.left, j1.right
    if (j2.left, j2.right) != (y_space, x_space) or (p.left, p.right) != (x_space, x_space) \
            or (q.left, q.right) != (y_space, y_space):
        raise SpaceMismatch("j₁: X×Y、j₂: Y×X、p: X×X、q: Y×Y 的空間不相容")
    if not frame.conforms(j1):
        raise CodimMismatch(f"j₁ 的餘維數 {j1.codimensions()} 不符合期望值 {frame.expected_codimension(j1.left)}")
    reverse = frame.reversed()
    if not reverse.conforms(j2):
        raise CodimMismatch(f"j₂ 的餘維數 {j2.codimensions()} 不符合期望值 {reverse.expected_codimension(j2.left)}")
    checks = {
        "j1∘j2 = q": compose(j1, j2) == q,
        "j2∘j1 = p": compose(j2, j1) == p,
        "q∘j1 = j1∘p": compose(q, j1) == compose(j1, p),
        "p∘j2 = j2∘q": compose(p, j2) == compose(j2, q),
    }
    for name, holds in checks.items():
        logger.debug("iso pair identity %s: %s", name, holds)
    return all(checks.values())


def cast_product(a: ProductClass, ring: CoefficientRing) -> ProductClass:
    """ProductClass 的係數環轉換（規則同 chow_ring.cast）"""
    if a.ring == ring:
        return a
    if not a.ring.is_integral:
        raise RingMismatch(f"不支援的轉換: {a.ring} → {ring}")
    return ProductClass(a.left, a.right, ring, a.terms)


def reduce_mod(a: Cycle, m: int) -> Cycle:
    """
    係數逐項模 m

    Raises:
        RingMismatch: 係數環不是整數環
    """
    if not isinstance(m, int) or m < 2:
        raise ValueError(f"模數必須是 ≥ 2 的整數: {m}")
    target = integers_mod(m)
    if a.ring == target:
        return a
    if not a.ring.is_integral:
        raise RingMismatch(f"reduce_mod 只接受整數環，收到 {a.ring}")
    if isinstance(a, ChowClass):
        return cast(a, target)
    return cast_product(a, target)


def eq_mod(a: Cycle, b: Cycle, m: int) -> bool:
    """a ≡ b (mod m)"""
    return reduce_mod(a - b, m).is_zero()


def _local_residue(value: Fraction, m: int) -> int:
    if gcd(value.denominator, m) != 1:
        raise RingMismatch(f"分母 {value.denominator} 與 {m} 不互質")
    return value.numerator * pow(value.denominator, -1, m) % m


def reduce_mod_local(a: Cycle, m: int) -> Cycle:
    """
    把分母與 m 互質的有理類別送到 Z/m

    Raises:
        RingMismatch: 非有理環，或某個分母與 m 不互質
    """
    if a.ring.is_integral:
        return reduce_mod(a, m)
    if not a.ring.is_rational:
        raise RingMismatch(f"reduce_mod_local 需要有理環，收到 {a.ring}")
    target = integers_mod(m)
    residues = {key: _local_residue(c, m) for key, c in a.items()}
    if isinstance(a, ChowClass):
        return ChowClass(a.space, target, residues)
    return ProductClass(a.left, a.right, target, residues)


def to_rationals(a: Cycle) -> Cycle:
    if isinstance(a, ChowClass):
        return cast(a, RATIONALS)
    return cast_product(a, RATIONALS)


def eq_mod_local(a: Cycle, b: Cycle, m: int) -> bool:
    """在 Z 於 m 處的局部環中比較 a 與 b 後模 m"""
    return reduce_mod_local(to_rationals(a) - to_rationals(b), m).is_zero()


def denominator_support(a: Cycle) -> Set[int]:
    """
    整除任一約分後分母的質數集合

    Raises:
        RingMismatch: 係數環不是有理數
    """
    if not a.ring.is_rational:
        raise RingMismatch(f"denominator_support 需要有理環，收到 {a.ring}")
    primes: Set[int] = set()
    for _, c in a.items():
        primes.update(int(p) for p in sympy.primefactors(c.denominator))
    return primes


def tensor_line_chern(e_total: ChowClass, rank: int, l_c1: ChowClass, i: int) -> ProductClass:
    """
    c_i(pr₁*E ⊗ pr₂*L) = Σ_{j=0}^{i} C(rank−j, i−j)·c_j(E)×c₁(L)^{i−j}

    Args:
        e_total: E 的總 Chern 類別（常數項為 1）
        rank: E 的秩
        l_c1: 線叢 L 的第一 Chern 類別（餘維數 1）
        i: Chern 類別的指標

    Raises:
        RankOutOfRange: i 不在 [0, rank]
        NotAUnit: e_total 的常數項不是 1
        CodimMismatch: l_c1 不是餘維數 1 的齊次類別
        RingMismatch: 係數環不同
    """
    if not 0 <= i <= rank:
        raise RankOutOfRange(f"指標 {i} 不在 [0, {rank}]")
    if e_total.coefficient(Partition()) != e_total.ring.normalize(1):
        raise NotAUnit(f"總 Chern 類別的常數項不是 1: {e_total.render()}")
    if not l_c1.is_zero() and l_c1.codimensions() != [1]:
        raise CodimMismatch(f"c₁(L) 必須是餘維數 1，收到 {l_c1.codimensions()}")
    if e_total.ring != l_c1.ring:
        raise RingMismatch(f"係數環不一致: {e_total.ring} 與 {l_c1.ring}")
    result = ProductClass(e_total.space, l_c1.space, e_total.ring)
    for j in range(i + 1):
        coefficient = comb(rank - j, i - j)
        if coefficient == 0:
            continue
        term = external_product(e_total.homogeneous_part(j), l_c1 ** (i - j))
        result = result + term.scale(coefficient)
    return result
