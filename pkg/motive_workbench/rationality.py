"""
Rationality Witnesses

Derivation trees certifying that a product class is built from cycles
defined over the base field: Chern classes of tensor products of pulled
back tautological bundles and diagonals, closed under sums, scaling,
intersection, composition, transposition and adjustment by m·(cycle).
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache, reduce
from typing import Any, Dict, List, Optional, Sequence, Set, Tuple

import sympy

from .chow_ring import INTEGERS, ChowClass, CoefficientRing, GrassmannSpace, chern_tautological, unit
from .correspondence import (
    ProductClass,
    cast_product,
    compose,
    diagonal,
    external_product,
    transpose,
)
from .errors import RankOutOfRange, RingMismatch, SpaceMismatch

logger = logging.getLogger(__name__)

LEAF_KINDS = ("segre_chern", "diagonal")
NODE_KINDS = ("sum", "negate", "scale", "intersect", "compose", "transpose", "mod_adjust", "ring_cast")


@dataclass(frozen=True)
class RationalWitness:
    """有理性見證樹：kind 為節點種類，conclusion 為此節點所證明的類別"""

    kind: str
    conclusion: ProductClass
    children: Tuple["RationalWitness", ...] = ()
    params: Tuple[Tuple[str, Any], ...] = field(default=())

    def param(self, name: str) -> Any:
        return dict(self.params)[name]

    @property
    def is_leaf(self) -> bool:
        return self.kind in LEAF_KINDS

    @property
    def integral(self) -> bool:
        """沒有 mod_adjust 節點時，見證的是整係數有理性"""
        return not self.moduli

    @property
    def moduli(self) -> Set[int]:
        found = {self.param("modulus")} if self.kind == "mod_adjust" else set()
        for child in self.children:
            found |= child.moduli
        return found

    @property
    def leaves(self) -> List["RationalWitness"]:
        if self.is_leaf:
            return [self]
        return [leaf for child in self.children for leaf in child.leaves]

    def to_json(self) -> dict:
        params: Dict[str, Any] = {}
        for name, value in self.params:
            if isinstance(value, ProductClass):
                params[name] = value.to_json()
            elif isinstance(value, GrassmannSpace):
                params[name] = [value.d, value.n]
            elif isinstance(value, CoefficientRing):
                params[name] = value.render()
            else:
                params[name] = value
        return {
            "kind": self.kind,
            "params": params,
            "children": [child.to_json() for child in self.children],
            "conclusion": self.conclusion.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "RationalWitness":
        kind = data["kind"]
        raw = data.get("params", {})
        params: List[Tuple[str, Any]] = []
        for name, value in raw.items():
            if name == "adjustment":
                value = ProductClass.from_json(value)
            elif name == "space":
                value = GrassmannSpace(*value)
            elif name == "ring":
                value = CoefficientRing.parse(value)
            params.append((name, value))
        return cls(
            kind=kind,
            conclusion=ProductClass.from_json(data["conclusion"]),
            children=tuple(cls.from_json(child) for child in data.get("children", [])),
            params=tuple(params),
        )


def _elementary_symmetric(variables: Sequence[sympy.Symbol]) -> List[sympy.Expr]:
    """e_0, e_1, …, e_len(variables)"""
    t = sympy.Symbol("t")
    generating = sympy.Poly(sympy.Mul(*[1 + t * v for v in variables]), t)
    return [generating.coeff_monomial(t ** k) for k in range(len(variables) + 1)]


def _symmetric_reduction(d: int, d2: int, i: int) -> Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], int]:
    """
    把 ∏_{a,b}(1 + x_a + y_b) 的 i 次部分寫成 e_k(x) 與 e_l(y) 的多項式

    Returns:
        {(x 指數, y 指數): 係數}，x 指數的第 k 項是 e_{k+1}(x) 的次方
    """
    xs = sympy.symbols(f"x1:{d + 1}")
    ys = sympy.symbols(f"y1:{d2 + 1}")
    gens = tuple(xs) + tuple(ys)
    total = sympy.Poly(sympy.Mul(*[1 + x + y for x in xs for y in ys]), *gens)
    part = {monom: coeff for monom, coeff in total.terms() if sum(monom) == i}
    remaining = sympy.Poly.from_dict(part, *gens, domain="ZZ") if part else sympy.Poly(0, *gens, domain="ZZ")
    ex_polys = _elementary_symmetric(xs)
    ey_polys = _elementary_symmetric(ys)

    result: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], int] = {}
    while not remaining.is_zero:
        monom, coeff = remaining.terms()[0]
        a, b = monom[:d], monom[d:]
        ex = tuple(a[k] - (a[k + 1] if k + 1 < d else 0) for k in range(d))
        ey = tuple(b[k] - (b[k + 1] if k + 1 < d2 else 0) for k in range(d2))
        result[(ex, ey)] = int(coeff)
        leading = sympy.Mul(*[ex_polys[k + 1] ** ex[k] for k in range(d)]) * \
            sympy.Mul(*[ey_polys[k + 1] ** ey[k] for k in range(d2)])
        remaining = remaining - sympy.Poly(coeff * leading, *gens, domain="ZZ")
    return result


def _chern_monomial(chern: ChowClass, exponents: Tuple[int, ...]) -> ChowClass:
    factors = [chern.homogeneous_part(k + 1) ** power for k, power in enumerate(exponents) if power]
    return reduce(lambda acc, factor: acc * factor, factors, unit(chern.space, chern.ring))


@lru_cache(maxsize=None)
def segre_chern_class(d: int, d2: int, n: int, i: int) -> ProductClass:
    """
    c_i(pr₁*τ_d ⊗ pr₂*τ_{d2}) 於 Gr(d,n)×Gr(d2,n)

    Raises:
        RankOutOfRange: i 不在 [0, d·d2]
    """
    left = GrassmannSpace(d, n)
    right = GrassmannSpace(d2, n)
    if not 0 <= i <= d * d2:
        raise RankOutOfRange(f"指標 {i} 不在 [0, {d * d2}]")
    c_left = chern_tautological(left)
    c_right = chern_tautological(right)
    result = ProductClass(left, right, INTEGERS)
    for (ex, ey), coeff in sorted(_symmetric_reduction(d, d2, i).items()):
        term = external_product(_chern_monomial(c_left, ex), _chern_monomial(c_right, ey))
        result = result + term.scale(coeff)
    logger.debug("segre_chern(%d, %d, %d, %d) = %s", d, d2, n, i, result.render())
    return result


def segre_chern(d: int, d2: int, n: int, i: int) -> RationalWitness:
    """Segre 拉回的陳類別葉節點"""
    return RationalWitness(
        kind="segre_chern",
        conclusion=segre_chern_class(d, d2, n, i),
        params=(("d", d), ("d2", d2), ("n", n), ("i", i)),
    )


def diagonal_witness(space: GrassmannSpace) -> RationalWitness:
    return RationalWitness(kind="diagonal", conclusion=diagonal(space), params=(("space", space),))


def _adjusted(value: ProductClass, modulus: int, adjustment: ProductClass) -> ProductClass:
    if value.ring.is_rational and adjustment.ring.is_integral:
        adjustment = cast_product(adjustment, value.ring)
    return value - adjustment.scale(modulus)


def _evaluate(kind: str, values: Sequence[ProductClass], params: Dict[str, Any]) -> ProductClass:
    if kind == "sum":
        return reduce(lambda acc, value: acc + value, values[1:], values[0])
    if kind == "negate":
        return -values[0]
    if kind == "scale":
        return values[0].scale(params["factor"])
    if kind == "intersect":
        return values[0].intersect(values[1])
    if kind == "compose":
        return compose(values[0], values[1])
    if kind == "transpose":
        return transpose(values[0])
    if kind == "mod_adjust":
        return _adjusted(values[0], params["modulus"], params["adjustment"])
    if kind == "ring_cast":
        return cast_product(values[0], params["ring"])
    raise ValueError(f"未知的節點種類: {kind}")


_ARITY = {"negate": 1, "scale": 1, "intersect": 2, "compose": 2, "transpose": 1, "mod_adjust": 1, "ring_cast": 1}


def combine(kind: str, inputs: Sequence[RationalWitness], extra: Optional[Any] = None) -> RationalWitness:
    """
    以內部節點組合見證

    Args:
        kind: sum、negate、scale、intersect、compose、transpose、mod_adjust 或 ring_cast
        inputs: 子見證；compose 的順序為 (b, a)，表示 b∘a
        extra: scale 的整數、mod_adjust 的 (m, 調整類別)、ring_cast 的係數環

    Returns:
        新的見證，其結論由子見證的結論計算

    Raises:
        ValueError: 節點種類或參數個數錯誤
        SpaceMismatch / RingMismatch: 來自底層代數運算
    """
    inputs = tuple(inputs)
    if kind not in NODE_KINDS:
        raise ValueError(f"未知的節點種類: {kind}")
    if kind == "sum":
        if not inputs:
            raise ValueError("sum 至少需要一個子見證")
    elif len(inputs) != _ARITY[kind]:
        raise ValueError(f"{kind} 需要 {_ARITY[kind]} 個子見證，收到 {len(inputs)}")

    params: Tuple[Tuple[str, Any], ...] = ()
    if kind == "scale":
        if isinstance(extra, bool) or not isinstance(extra, int):
            raise ValueError(f"scale 需要整數係數，收到 {extra!r}")
        params = (("factor", extra),)
    elif kind == "mod_adjust":
        modulus, adjustment = extra
        if not isinstance(modulus, int) or modulus < 2:
            raise ValueError(f"模數必須是 ≥ 2 的整數: {modulus}")
        child = inputs[0].conclusion
        if (adjustment.left, adjustment.right) != (child.left, child.right):
            raise SpaceMismatch("調整類別必須與子見證位於同一空間")
        if adjustment.ring != child.ring and not (child.ring.is_rational and adjustment.ring.is_integral):
            raise RingMismatch(f"調整類別的係數環 {adjustment.ring} 與 {child.ring} 不一致")
        params = (("modulus", modulus), ("adjustment", adjustment))
    elif kind == "ring_cast":
        if not isinstance(extra, CoefficientRing):
            raise ValueError(f"ring_cast 需要係數環，收到 {extra!r}")
        params = (("ring", extra),)

    conclusion = _evaluate(kind, [w.conclusion for w in inputs], dict(params))
    return RationalWitness(kind=kind, conclusion=conclusion, children=inputs, params=params)


def sum_of(*witnesses: RationalWitness) -> RationalWitness:
    return combine("sum", witnesses)


def negate(w: RationalWitness) -> RationalWitness:
    return combine("negate", [w])


def integer_scale(factor: int, w: RationalWitness) -> RationalWitness:
    return combine("scale", [w], factor)


def intersection_product(a: RationalWitness, b: RationalWitness) -> RationalWitness:
    return combine("intersect", [a, b])


def compose_witness(b: RationalWitness, a: RationalWitness) -> RationalWitness:
    """b∘a"""
    return combine("compose", [b, a])


def transpose_witness(w: RationalWitness) -> RationalWitness:
    return combine("transpose", [w])


def mod_adjust(w: RationalWitness, modulus: int, adjustment: ProductClass) -> RationalWitness:
    """結論改為 x − m·z，並標記為模 m 的有理性"""
    return combine("mod_adjust", [w], (modulus, adjustment))


def ring_cast(w: RationalWitness, ring: CoefficientRing) -> RationalWitness:
    return combine("ring_cast", [w], ring)


def replay(w: RationalWitness) -> ProductClass:
    """從葉節點重新計算整棵樹"""
    if w.kind == "segre_chern":
        return segre_chern_class(w.param("d"), w.param("d2"), w.param("n"), w.param("i"))
    if w.kind == "diagonal":
        return diagonal(w.param("space"))
    return _evaluate(w.kind, [replay(child) for child in w.children], dict(w.params))


def verify(w: RationalWitness) -> bool:
    """
    重播見證並與儲存的結論比較

    Returns:
        每個節點的重播值都等於其結論時為 True（任何錯誤都視為 False）
    """
    try:
        if not all(verify(child) for child in w.children):
            return False
        return replay(w) == w.conclusion
    except Exception as e:
        logger.debug("witness %s failed to replay: %s", w.kind, e)
        return False
