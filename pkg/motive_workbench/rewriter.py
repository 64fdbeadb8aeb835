"""
Motivic Decomposition Rewriter

Flag varieties of inner type A, B, C, F4 and G2 as formal descriptors, the
decomposition theorems as guarded rewrite rules producing twisted sums,
Poincaré polynomial bookkeeping and the Krull-Schmidt failure report.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from math import gcd
from functools import reduce
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .combinatorics import (
    ONE,
    IntPolynomial,
    gaussian_binomial,
    gensb_polynomial,
    partitions_in_box,
    q_integer,
    q_multinomial,
)
from .config import get_workbench_config
from .errors import (
    ChainStepFailed,
    GcdConditionFailed,
    MissingBaseEntry,
    NotApplicable,
    PositionNotAllowed,
    RankLimitExceeded,
    SideConditionFailed,
    WorkbenchError,
)

logger = logging.getLogger(__name__)

SERIES = ("A", "B", "C", "F4", "G2")
F4_DIMENSIONS = (1, 2, 3, 6)

EXTERNAL_CITATIONS = (
    "Rost nilpotence: a projector lifting a split one modulo nilpotents is unique up to isomorphism",
    "Indecomposability: M(SB(A)) is indecomposable with integral coefficients when A is a division algebra of prime degree",
)


@dataclass(frozen=True)
class GroupDescriptor:
    """單純代數群：系列、秩，以及 A、C 系列的代數指數 ind(A)"""

    series: str
    rank: int
    index: int = 1

    def __post_init__(self):
        if self.series not in SERIES:
            raise ValueError(f"未知的系列: {self.series}（可用 {', '.join(SERIES)}）")
        if self.rank < 1:
            raise ValueError(f"秩必須 ≥ 1: {self.rank}")
        if self.series == "G2" and self.rank != 2:
            raise ValueError(f"G2 的秩必須是 2，收到 {self.rank}")
        if self.series == "F4" and self.rank != 4:
            raise ValueError(f"F4 的秩必須是 4，收到 {self.rank}")
        if self.index < 1:
            raise ValueError(f"代數指數必須 ≥ 1: {self.index}")
        max_rank = get_workbench_config().max_rank
        if self.rank > max_rank:
            raise RankLimitExceeded(f"{self.render()} 的秩 {self.rank} 超過上限 {max_rank}")
        if self.series == "C" and (2 * self.rank) % self.index != 0:
            logger.warning("%s: ind(A)=%d does not divide 2n=%d", self.render(), self.index, 2 * self.rank)

    def render(self) -> str:
        if self.series in ("F4", "G2"):
            return self.series
        return f"{self.series}{self.rank}"

    def allowed_dimensions(self) -> Tuple[int, ...]:
        if self.series == "F4":
            return F4_DIMENSIONS
        if self.series == "G2":
            return (1, 2)
        return tuple(range(1, self.rank + 1))


@dataclass(frozen=True)
class FlagDescriptor:
    """旗簇 X(d₁, …, d_k)，d₁ < … < d_k"""

    group: GroupDescriptor
    dims: Tuple[int, ...]

    def __post_init__(self):
        dims = tuple(self.dims)
        object.__setattr__(self, "dims", dims)
        if any(left >= right for left, right in zip(dims, dims[1:])):
            raise ValueError(f"維數必須嚴格遞增: {dims}")
        allowed = self.group.allowed_dimensions()
        for d in dims:
            if d not in allowed:
                raise ValueError(f"維數 {d} 不適用於 {self.group.render()}（可用 {allowed}）")

    @property
    def k(self) -> int:
        return len(self.dims)

    def d(self, i: int) -> int:
        """d_i，含 d₀ = 0 與 d_{k+1} = n+1"""
        if i == 0:
            return 0
        if i == self.k + 1:
            return self.group.rank + 1
        return self.dims[i - 1]

    def delta(self, i: int) -> int:
        """δ_i = d_{i+1} − d_i"""
        return self.d(i + 1) - self.d(i)

    def position(self, value: int) -> int:
        """維數值在旗中的位置（1 起算）"""
        if value not in self.dims:
            raise PositionNotAllowed(f"{value} 不是 {self.render()} 的維數")
        return self.dims.index(value) + 1

    def without(self, m: int) -> "FlagDescriptor":
        return FlagDescriptor(self.group, self.dims[:m - 1] + self.dims[m:])

    def render(self) -> str:
        return "X(" + ",".join(str(d) for d in self.dims) + ")"

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class NamedMotive:
    """具名原子：SB(A)、SB_d(A)、F（SB₂(A) 的不可分解直和項）；degree 是 A 的次數"""

    name: str
    degree: int
    d: int = 1

    def __post_init__(self):
        if self.name not in ("SB", "SB_d", "F"):
            raise ValueError(f"未知的具名動機: {self.name}")

    def render(self) -> str:
        if self.name == "SB_d":
            return f"SB_{self.d}(A)"
        if self.name == "SB":
            return "SB(A)"
        return "F"

    def __str__(self) -> str:
        return self.render()


BaseMotive = Union[FlagDescriptor, NamedMotive]


@dataclass(frozen=True)
class MotiveExpr:
    """扭轉動機的形式多重集合 ⊕ M(i)^{mult}"""

    terms: Tuple[Tuple[BaseMotive, int, int], ...] = ()
    hypotheses: Tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        counts: Counter = Counter()
        for base, twist, multiplicity in self.terms:
            if twist < 0:
                raise ValueError(f"扭轉必須非負: {twist}")
            if multiplicity < 0:
                raise ValueError(f"重數必須非負: {multiplicity}")
            counts[(base, twist)] += multiplicity
        normalized = tuple(sorted(((base, twist, m) for (base, twist), m in counts.items() if m > 0),
                                  key=lambda term: (term[1], term[0].render())))
        object.__setattr__(self, "terms", normalized)

    @classmethod
    def single(cls, base: BaseMotive, twist: int = 0) -> "MotiveExpr":
        return cls(((base, twist, 1),))

    def __add__(self, other: "MotiveExpr") -> "MotiveExpr":
        return MotiveExpr(self.terms + other.terms, self.hypotheses + other.hypotheses)

    def twisted(self, shift: int) -> "MotiveExpr":
        return MotiveExpr(tuple((base, twist + shift, m) for base, twist, m in self.terms), self.hypotheses)

    def scaled(self, factor: int) -> "MotiveExpr":
        return MotiveExpr(tuple((base, twist, m * factor) for base, twist, m in self.terms), self.hypotheses)

    def with_hypotheses(self, *hypotheses: str) -> "MotiveExpr":
        return MotiveExpr(self.terms, self.hypotheses + tuple(hypotheses))

    @property
    def bases(self) -> List[BaseMotive]:
        seen: List[BaseMotive] = []
        for base, _, _ in self.terms:
            if base not in seen:
                seen.append(base)
        return seen

    @property
    def size(self) -> int:
        return sum(m for _, _, m in self.terms)

    def twists(self) -> List[int]:
        return sorted(twist for _, twist, m in self.terms for _ in range(m))

    def render(self) -> str:
        pieces = []
        for base, twist, multiplicity in self.terms:
            body = base.render() + (f"({twist})" if twist else "")
            pieces.append(body if multiplicity == 1 else f"{multiplicity}·{body}")
        return " + ".join(pieces) if pieces else "0"

    def to_json(self) -> List[dict]:
        return [{"base": base.render(), "twist": twist, "multiplicity": m} for base, twist, m in self.terms]

    def __str__(self) -> str:
        return self.render()


def _box_rewrite(flag: FlagDescriptor, m: int) -> MotiveExpr:
    rows = flag.delta(m - 1)
    cols = flag.delta(m)
    reduced = flag.without(m)
    terms = [(reduced, rows * cols - lam.weight, 1) for lam in partitions_in_box(rows, cols)]
    logger.debug("box rewrite %s at m=%d: %d×%d box", flag.render(), m, rows, cols)
    return MotiveExpr(tuple(terms))


def _check_position(flag: FlagDescriptor, m: int) -> None:
    if not 1 <= m <= flag.k:
        raise PositionNotAllowed(f"位置 {m} 不在 1..{flag.k}（{flag.render()}）")


def _require_series(flag: FlagDescriptor, series: str) -> None:
    if flag.group.series != series:
        raise NotApplicable(f"此規則只適用於 {series} 系列，收到 {flag.group.render()}")


def rewrite_A(flag: FlagDescriptor, m: int) -> MotiveExpr:
    """
    移除 A 型旗的第 m 個維數

    Raises:
        GcdConditionFailed: gcd(ind(A), 其餘維數) ≠ 1
        PositionNotAllowed: m 超出範圍
    """
    _require_series(flag, "A")
    _check_position(flag, m)
    remaining = flag.without(m).dims
    common = reduce(gcd, remaining, flag.group.index)
    if common != 1:
        raise GcdConditionFailed(
            f"gcd(ind(A)={flag.group.index}, {', '.join(map(str, remaining))}) = {common} ≠ 1", common)
    return _box_rewrite(flag, m)


def rewrite_B(flag: FlagDescriptor, m: int) -> MotiveExpr:
    """
    移除 B 型旗的第 m 個維數（m < k）

    Raises:
        PositionNotAllowed: m = k 或超出範圍
    """
    _require_series(flag, "B")
    _check_position(flag, m)
    if m == flag.k:
        raise PositionNotAllowed(f"B 系列不可移除最後一個維數 {flag.dims[-1]}")
    return _box_rewrite(flag, m)


def rewrite_C(flag: FlagDescriptor) -> MotiveExpr:
    """
    移除 C 型旗的最後一個維數，得到 2(n − d_{k−1}) 項

    Raises:
        SideConditionFailed: d_k − d_{k−1} ≠ 1 或沒有 i < k 使 d_i 為奇數
    """
    _require_series(flag, "C")
    if flag.k == 0:
        raise SideConditionFailed("空旗無法再移除維數", "k ≥ 1")
    if flag.d(flag.k) - flag.d(flag.k - 1) != 1:
        raise SideConditionFailed(f"{flag.render()} 不滿足 d_k − d_(k−1) = 1", "d_k - d_(k-1) = 1")
    if not any(d % 2 == 1 for d in flag.dims[:-1]):
        raise SideConditionFailed(f"{flag.render()} 沒有 i < k 使 d_i 為奇數", "d_i odd for some i < k")
    reduced = flag.without(flag.k)
    count = 2 * flag.group.rank - 2 * flag.d(flag.k - 1)
    return MotiveExpr(tuple((reduced, twist, 1) for twist in range(count)))


def rewrite_G(flag: FlagDescriptor) -> MotiveExpr:
    """
    G2 完全旗 X(1,2) → X(2) ⊕ X(2)(1)

    Raises:
        NotApplicable: 不是 G2 的 X(1,2)
    """
    if flag.group.series != "G2" or flag.dims != (1, 2):
        raise NotApplicable(f"G2 規則只適用於 G2 的 X(1,2)，收到 {flag.group.render()} {flag.render()}")
    reduced = flag.without(1)
    return MotiveExpr(((reduced, 0, 1), (reduced, 1, 1)))


def rewrite_F(flag: FlagDescriptor, m: int) -> MotiveExpr:
    """
    移除 F4 旗的第 m 個維數（m < k，且 d_{m+1} < 6 或 d_m = 1）

    Raises:
        SideConditionFailed: 條件不成立
    """
    _require_series(flag, "F4")
    _check_position(flag, m)
    if m == flag.k:
        raise SideConditionFailed(f"F4 不可移除最後一個維數 {flag.dims[-1]}", "m < k")
    if not (flag.d(m + 1) < 6 or flag.d(m) == 1):
        raise SideConditionFailed(f"{flag.render()} 在 m={m} 不滿足 d_(m+1) < 6 或 d_m = 1",
                                  "d_(m+1) < 6 or d_m = 1")
    return _box_rewrite(flag, m)


def _rewrite_step(flag: FlagDescriptor, value: int) -> MotiveExpr:
    series = flag.group.series
    m = flag.position(value)
    if series == "A":
        return rewrite_A(flag, m)
    if series == "B":
        return rewrite_B(flag, m)
    if series == "C":
        if m != flag.k:
            raise PositionNotAllowed(f"C 系列只能移除最後一個維數 {flag.dims[-1]}，收到 {value}")
        return rewrite_C(flag)
    if series == "G2":
        if value != 1:
            raise PositionNotAllowed(f"G2 只能移除維數 1，收到 {value}")
        return rewrite_G(flag)
    return rewrite_F(flag, m)


def apply_rewrite(expr: MotiveExpr, value: int) -> MotiveExpr:
    """對每一個含有該維數的旗項套用規則，並分配扭轉"""
    result = MotiveExpr()
    matched = False
    for base, twist, multiplicity in expr.terms:
        if isinstance(base, FlagDescriptor) and value in base.dims:
            matched = True
            result = result + _rewrite_step(base, value).twisted(twist).scaled(multiplicity)
        else:
            result = result + MotiveExpr(((base, twist, multiplicity),))
    if not matched:
        raise PositionNotAllowed(f"{expr.render()} 中沒有含維數 {value} 的旗")
    return MotiveExpr(result.terms, expr.hypotheses)


def decompose_chain(flag: FlagDescriptor, removal_order: Sequence[int]) -> MotiveExpr:
    """
    依序移除維數值（位置會隨每次移除而改變）

    Args:
        flag: 起始旗
        removal_order: 要移除的維數值

    Returns:
        最終的扭轉和

    Raises:
        ChainStepFailed: 第一個失敗的步驟（step 從 0 起算）
    """
    expr = MotiveExpr.single(flag)
    for step, value in enumerate(removal_order):
        try:
            expr = apply_rewrite(expr, value)
        except WorkbenchError as e:
            raise ChainStepFailed(f"第 {step} 步（移除 {value}）失敗: {e}", step, e) from e
        logger.debug("chain step %d remove %d: %s", step, value, expr.render())
    return expr


def relabel_severi_brauer(expr: MotiveExpr) -> MotiveExpr:
    """把 A 型單一維數旗改名為 SB(A)/SB_d(A)，C 型 X(1) 改名為 SB(A)"""
    terms = []
    for base, twist, multiplicity in expr.terms:
        if isinstance(base, FlagDescriptor) and base.k == 1:
            series, rank, d = base.group.series, base.group.rank, base.dims[0]
            if series == "A":
                base = NamedMotive("SB", rank + 1) if d == 1 else NamedMotive("SB_d", rank + 1, d)
            elif series == "C" and d == 1:
                base = NamedMotive("SB", 2 * rank)
        terms.append((base, twist, multiplicity))
    return MotiveExpr(tuple(terms), expr.hypotheses)


def substitute(expr: MotiveExpr, base: BaseMotive, replacement: MotiveExpr) -> MotiveExpr:
    """以 replacement 取代所有 base 項（保留扭轉與重數）"""
    result = MotiveExpr((), expr.hypotheses)
    for term_base, twist, multiplicity in expr.terms:
        if term_base == base:
            result = result + replacement.twisted(twist).scaled(multiplicity)
        else:
            result = result + MotiveExpr(((term_base, twist, multiplicity),))
    return result


class PoincareTable:
    """基本動機 → Poincaré 多項式；內建 A 型旗、B/C 的系列公式與具名原子"""

    def __init__(self, entries: Optional[Mapping[BaseMotive, IntPolynomial]] = None, builtin: bool = True):
        self.entries: Dict[BaseMotive, IntPolynomial] = dict(entries or {})
        self.builtin = builtin

    def __getitem__(self, base: BaseMotive) -> IntPolynomial:
        if base in self.entries:
            return self.entries[base]
        if self.builtin:
            polynomial = self._builtin(base)
            if polynomial is not None:
                return polynomial
        raise MissingBaseEntry(f"Poincaré 表中沒有 {base.render()}")

    def __contains__(self, base: BaseMotive) -> bool:
        try:
            self[base]
        except MissingBaseEntry:
            return False
        return True

    @staticmethod
    def _builtin(base: BaseMotive) -> Optional[IntPolynomial]:
        if isinstance(base, NamedMotive):
            if base.name == "SB_d":
                return gaussian_binomial(base.degree, base.d)
            return q_integer(base.degree)
        if not base.dims:
            return ONE
        series, n = base.group.series, base.group.rank
        if series == "A":
            return q_multinomial([base.delta(i) for i in range(base.k + 1)])
        if series == "B" and base.dims == (1,):
            return q_integer(2 * n)
        if series == "B" and base.dims == (n,):
            return reduce(lambda acc, k: acc * (ONE + IntPolynomial.monomial(k)), range(1, n + 1), ONE)
        if series == "C" and base.dims == (1,):
            return q_integer(2 * n)
        return None


def default_poincare_table() -> PoincareTable:
    return PoincareTable()


def poincare_polynomial(expr: MotiveExpr, table: Union[PoincareTable, Mapping[BaseMotive, IntPolynomial]]) -> IntPolynomial:
    """
    Σ multiplicity · z^twist · P(base)

    Raises:
        MissingBaseEntry: 某個基本動機沒有表項
    """
    total = IntPolynomial()
    for base, twist, multiplicity in expr.terms:
        try:
            polynomial = table[base]
        except KeyError:
            raise MissingBaseEntry(f"Poincaré 表中沒有 {base.render()}")
        total = total + IntPolynomial.monomial(twist, multiplicity) * polynomial
    return total


def poincare_check(exprs: Sequence[MotiveExpr], table: Union[PoincareTable, Mapping] = None) -> bool:
    """所有運算式的 Poincaré 多項式是否一致"""
    table = table if table is not None else default_poincare_table()
    polynomials = [poincare_polynomial(expr, table) for expr in exprs]
    return all(polynomial == polynomials[0] for polynomial in polynomials[1:])


def gensb_expand(n: int, d: int, index: Optional[int] = None) -> MotiveExpr:
    """
    M(SB_d(A)) ≅ ⊕ M(SB(A))(i)^{a_i}，a_i 是 φ_n/(φ_dφ_{n+1−d}) 的係數

    Raises:
        ValueError: 不滿足 1 < d < n
        NonDivisible: 商不是多項式
    """
    polynomial = gensb_polynomial(n, d)
    sb = NamedMotive("SB", n + 1)
    expr = MotiveExpr(tuple((sb, twist, c) for twist, c in polynomial.coefficients.items()))
    hypotheses = [f"gcd(ind(A), {d}) = 1", "Krull-Schmidt holds for the coefficients used"]
    if index is not None:
        hypotheses[0] = f"gcd({index}, {d}) = {gcd(index, d)}"
    return expr.with_hypotheses(*hypotheses)


def index_reduction_obstruction(ind: int, d: int) -> int:
    """ind / gcd(ind, d)"""
    if ind < 1 or d < 1:
        raise ValueError(f"ind 與 d 必須 ≥ 1，收到 ind={ind}, d={d}")
    return ind // gcd(ind, d)


@dataclass(frozen=True)
class GcdObstructionReport:
    """比較經由 SB_d 與 SB 得到的兩個餘核階數"""

    ind: int
    d: int
    gcd: int
    via_sb_d: int
    via_sb: int

    @property
    def consistent(self) -> bool:
        return self.via_sb_d == self.via_sb

    def to_json(self) -> dict:
        return {
            "ind": self.ind,
            "d": self.d,
            "gcd": self.gcd,
            "cokernel_via_sb_d": self.via_sb_d,
            "cokernel_via_sb": self.via_sb,
            "consistent": self.consistent,
        }

    def render_text(self) -> str:
        lines = [
            f"gcd(ind={self.ind}, d={self.d}) = {self.gcd}",
            f"  cokernel order via SB_{self.d}(A): {self.via_sb_d}",
            f"  cokernel order via SB(A):   {self.via_sb}",
        ]
        if self.consistent:
            lines.append("  orders agree: the decomposition without the gcd guard is consistent here")
        else:
            lines.append("  orders differ: dropping the gcd guard would give an inconsistent decomposition")
        return "\n".join(lines)


def gcd_obstruction_report(ind: int, d: int) -> GcdObstructionReport:
    return GcdObstructionReport(
        ind=ind,
        d=d,
        gcd=gcd(ind, d),
        via_sb_d=index_reduction_obstruction(ind, d),
        via_sb=index_reduction_obstruction(ind, 1),
    )


@dataclass(frozen=True)
class KrullSchmidtReport:
    """X(1,2) 的兩種分解與其 Poincaré 比對"""

    flag: FlagDescriptor
    route_sb: MotiveExpr
    route_sb2: MotiveExpr
    substituted: MotiveExpr
    substitution: str
    poincare: Dict[str, IntPolynomial]
    poincare_equal: bool
    citations: Tuple[str, ...] = EXTERNAL_CITATIONS

    @property
    def leaf_multisets_differ(self) -> bool:
        return self.route_sb != self.substituted

    def to_json(self) -> dict:
        return {
            "flag": self.flag.render(),
            "group": self.flag.group.render(),
            "index": self.flag.group.index,
            "route_remove_last": self.route_sb.to_json(),
            "route_remove_first": self.route_sb2.to_json(),
            "substitution": self.substitution,
            "route_remove_first_substituted": self.substituted.to_json(),
            "poincare": {name: p.render() for name, p in self.poincare.items()},
            "poincare_equal": self.poincare_equal,
            "leaf_multisets_differ": self.leaf_multisets_differ,
            "citations": list(self.citations),
        }

    def render_text(self) -> str:
        lines = [
            f"{self.flag.render()} for {self.flag.group.render()}, ind(A) = {self.flag.group.index}",
            f"  route 1: {self.route_sb.render()}",
            f"  route 2: {self.route_sb2.render()}",
            f"  substitute {self.substitution}",
            f"  route 2: {self.substituted.render()}",
        ]
        for name, polynomial in self.poincare.items():
            lines.append(f"  P({name}) = {polynomial.render()}")
        lines.append(f"  Poincaré polynomials equal: {self.poincare_equal}")
        lines.append(f"  leaf multisets differ: {self.leaf_multisets_differ}")
        lines.append("  citations:")
        lines.extend(f"    - {citation}" for citation in self.citations)
        return "\n".join(lines)


def krull_schmidt_report(n: int = 4, ind: int = 5) -> KrullSchmidtReport:
    """
    X(1,2) 經兩條路線分解：移除 2 得 ⊕_{i=0}^{n−1} SB(A)(i)；移除 1 得 SB₂ ⊕ SB₂(1)，
    再以 SB₂ → F ⊕ F(2) 代入得 ⊕ F(i)
    """
    flag = FlagDescriptor(GroupDescriptor("A", n, ind), (1, 2))
    route_sb = relabel_severi_brauer(decompose_chain(flag, [2]))
    route_sb2 = relabel_severi_brauer(decompose_chain(flag, [1]))

    sb2 = NamedMotive("SB_d", n + 1, 2)
    f_atom = NamedMotive("F", n + 1)
    shape = gensb_expand(n, 2)
    replacement = MotiveExpr(tuple((f_atom, twist, m) for _, twist, m in shape.terms))
    substituted = substitute(route_sb2, sb2, replacement)

    table = default_poincare_table()
    poincare = {
        "route 1": poincare_polynomial(route_sb, table),
        "route 2": poincare_polynomial(route_sb2, table),
        "route 2 substituted": poincare_polynomial(substituted, table),
        flag.render(): table[flag],
    }
    equal = len(set(poincare.values())) == 1
    logger.debug("krull-schmidt: %s vs %s (poincaré equal: %s)", route_sb.render(), substituted.render(), equal)
    return KrullSchmidtReport(
        flag=flag,
        route_sb=route_sb,
        route_sb2=route_sb2,
        substituted=substituted,
        substitution=f"{sb2.render()} -> {replacement.render()}",
        poincare=poincare,
        poincare_equal=equal,
    )
