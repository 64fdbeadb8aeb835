"""
Tests for Chow rings of Grassmannians and projective spaces

Covers coefficient rings, the Schubert product (checked against the Giambelli
oracle), named generators, degrees, Chern classes and the Hasse diagram.
"""

from fractions import Fraction

import pytest

from motive_workbench.chow_ring import (
    INTEGERS,
    RATIONALS,
    ChowClass,
    CoefficientRing,
    GrassmannSpace,
    basis_class,
    cast,
    chern_quotient,
    chern_tautological,
    degree,
    giambelli_oracle,
    hasse_diagram,
    integers_mod,
    invert_total_chern,
    iterated_pieri_product,
    lr_coefficient,
    multiply,
    named_generator,
    pieri,
    projective_space,
    render_hasse,
    unit,
)
from motive_workbench.combinatorics import Partition
from motive_workbench.errors import (
    CodimMismatch,
    NotAUnit,
    PartitionError,
    RankLimitExceeded,
    RingMismatch,
    SpaceMismatch,
    UnknownName,
)

GR25 = GrassmannSpace(2, 5)


def gen(name, space=GR25, ring=INTEGERS):
    return named_generator(space, name, ring)


def test_coefficient_ring_parse():
    """測試係數環的解析與顯示"""
    assert CoefficientRing.parse("Z") == INTEGERS
    assert CoefficientRing.parse("Q") == RATIONALS
    assert CoefficientRing.parse(" Z/7 ").modulus == 7
    assert integers_mod(5).render() == "Z/5"
    for text in ("R", "Z/1", "Z/x"):
        with pytest.raises(ValueError):
            CoefficientRing.parse(text)


def test_coefficient_ring_normalize():
    """測試純量正規化"""
    assert integers_mod(5).normalize(12) == 2
    assert integers_mod(5).normalize(-1) == 4
    assert RATIONALS.normalize(3) == Fraction(3)
    assert INTEGERS.normalize(Fraction(4, 1)) == 4
    with pytest.raises(RingMismatch):
        INTEGERS.normalize(Fraction(1, 2))
    with pytest.raises(RingMismatch):
        INTEGERS.normalize(True)


def test_space_properties():
    """測試 Grassmannian 的基本屬性"""
    assert GR25.dimension == 6
    assert len(GR25.basis) == 10
    assert GR25.point == Partition((3, 3))
    assert str(GR25) == "Gr(2,5)"
    p4 = projective_space(4)
    assert p4.is_projective
    assert p4.dimension == 4
    assert str(p4) == "P^4"


def test_space_limits():
    """測試空間參數的限制"""
    with pytest.raises(PartitionError):
        GrassmannSpace(0, 5)
    with pytest.raises(PartitionError):
        GrassmannSpace(5, 5)
    with pytest.raises(RankLimitExceeded):
        GrassmannSpace(2, 9)


def test_named_generators():
    """測試 Gr(2,5) 與射影空間上的生成元名稱"""
    assert gen("g2") == basis_class(GR25, (1, 1))
    assert gen("h4") == basis_class(GR25, (3, 1))
    assert gen("pt") == basis_class(GR25, (3, 3))
    assert gen("1") == unit(GR25)
    p4 = projective_space(4)
    assert gen("H", p4) == basis_class(p4, (1,))
    assert gen("sigma2", p4) == gen("H", p4) ** 2
    for space, name in ((GR25, "H"), (GR25, "sigma4"), (p4, "g2"), (GR25, "foo")):
        with pytest.raises(UnknownName):
            gen(name, space)


def test_basis_class_outside_box():
    """測試盒子外的基底類別"""
    with pytest.raises(PartitionError):
        basis_class(GR25, (4,))
    with pytest.raises(PartitionError):
        basis_class(GR25, (1, 1, 1))


def test_gr25_products():
    """測試 Gr(2,5) 的乘法表"""
    assert (gen("sigma1") * gen("sigma1")).render() == "σ₂ + g₂"
    assert gen("g2") * gen("g2") == gen("g4")
    assert gen("g2") * gen("sigma1") == gen("g3")
    assert gen("g3") * gen("sigma1") == gen("h4") + gen("g4")
    assert gen("sigma2") * gen("sigma1") == gen("sigma3") + gen("g3")
    assert gen("sigma2") * gen("g2") == gen("h4")
    assert gen("g4") * gen("g2") == gen("pt")
    assert gen("sigma3") * gen("sigma3") == gen("pt")
    assert (gen("g4") * gen("sigma2")).is_zero()
    assert (gen("g2") * gen("sigma3")).is_zero()


def test_projective_space_powers():
    """測試射影空間中 H 的冪次"""
    p4 = projective_space(4)
    h = gen("H", p4)
    assert (h ** 2).render() == "H²"
    assert degree(h ** 4) == 1
    assert (h ** 5).is_zero()
    assert (h ** 0) == unit(p4)


def test_pieri_rule():
    """測試 Pieri 公式"""
    assert pieri(GR25, (1,), 2) == gen("sigma3") + gen("g3")
    assert pieri(GR25, (2, 2), 2).is_zero()
    assert pieri(GR25, (1,), 0) == gen("sigma1")
    with pytest.raises(PartitionError):
        pieri(GR25, (1,), 4)


def test_lr_coefficients():
    """測試 Littlewood-Richardson 係數"""
    assert lr_coefficient(Partition((1,)), Partition((1, 1)), Partition((2, 1))) == 1
    assert lr_coefficient(Partition((2, 1)), Partition((2, 1)), Partition((3, 2, 1))) == 2
    assert lr_coefficient(Partition((2,)), Partition((2,)), Partition((2, 2))) == 1
    assert lr_coefficient(Partition((1,)), Partition((1,)), Partition((3,))) == 0


@pytest.mark.parametrize("d,n", [(2, 5), (2, 6), (3, 6), (1, 5)])
def test_giambelli_oracle_matches_basis(d, n):
    """測試 Giambelli 行列式重算每個基底類別"""
    space = GrassmannSpace(d, n)
    for lam in space.basis:
        assert giambelli_oracle(space, lam) == basis_class(space, lam)


def test_multiply_matches_iterated_pieri():
    """測試 LR 乘法與 Pieri 展開一致"""
    for lam in GR25.basis:
        for mu in GR25.basis:
            x, y = basis_class(GR25, lam), basis_class(GR25, mu)
            assert multiply(x, y) == iterated_pieri_product(x, y)


def test_product_is_commutative_and_associative():
    """測試乘法的交換律與結合律"""
    a, b, c = gen("sigma1") + gen("g2"), gen("g3") - gen("sigma2"), 2 * gen("sigma1")
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)


def test_degree_map():
    """測試次數映射"""
    assert degree(gen("sigma1") ** 6) == 5
    assert degree(gen("pt")) == 1
    assert degree(gen("sigma1") + gen("pt")) == 1
    with pytest.raises(CodimMismatch):
        degree(gen("sigma1") + gen("pt"), strict=True)


def test_chern_classes():
    """測試商叢與重言叢的 Chern 類別"""
    c_q = chern_quotient(GR25)
    c_s = chern_tautological(GR25)
    assert c_q.render() == "1 + σ₁ + σ₂ + σ₃"
    assert c_s.render() == "1 - σ₁ + g₂"
    assert c_q * c_s == unit(GR25)
    with pytest.raises(NotAUnit):
        invert_total_chern(2 * unit(GR25))


SMALL_SPACES = [(d, n) for n in range(2, 8) for d in range(1, n)]


@pytest.mark.parametrize("d,n", SMALL_SPACES)
def test_total_chern_inverse(d, n):
    """測試 c(Q)·c(Q)^{-1} = 1 且 c(τ) = Σ (−1)^k Δ_(1^k)，直到 Gr(6,7)"""
    space = GrassmannSpace(d, n)
    c_q = chern_quotient(space)
    assert c_q * invert_total_chern(c_q) == unit(space)
    expected = unit(space)
    for k in range(1, d + 1):
        expected = expected + (-1) ** k * basis_class(space, (1,) * k)
    assert chern_tautological(space) == expected
    assert chern_quotient(space) * expected == unit(space)


def test_modular_and_rational_coefficients():
    """測試 Z/m 與 Q 係數"""
    z5 = integers_mod(5)
    assert (5 * gen("sigma1", ring=z5)).is_zero()
    assert (gen("sigma1", ring=z5) * 6) == gen("sigma1", ring=z5)
    half = gen("g5", ring=RATIONALS).scale(Fraction(5, 2))
    assert half.render() == "(5/2)g₅"
    with pytest.raises(RingMismatch):
        gen("g5").scale(Fraction(1, 2))


def test_mismatched_operands():
    """測試不同空間或不同係數環的運算"""
    with pytest.raises(SpaceMismatch):
        gen("sigma1") + gen("H", projective_space(4))
    with pytest.raises(RingMismatch):
        gen("sigma1") + gen("sigma1", ring=RATIONALS)


def test_cast():
    """測試係數環轉換"""
    x = 7 * gen("g3")
    assert cast(x, integers_mod(5)) == 2 * gen("g3", ring=integers_mod(5))
    assert cast(x, RATIONALS).coefficient((2, 1)) == Fraction(7)
    with pytest.raises(RingMismatch):
        cast(gen("g3", ring=RATIONALS), INTEGERS)


def test_class_json_round_trip():
    """測試類別的 JSON 表示"""
    x = 3 * gen("sigma2") - gen("g2")
    data = x.to_json()
    assert data["space"] == [2, 5]
    assert data["ring"] == "Z"
    assert ChowClass.from_json(data) == x


def test_homogeneous_parts():
    """測試齊次分量"""
    x = unit(GR25) + gen("sigma1") + gen("g2") + gen("sigma2")
    assert x.codimensions() == [0, 1, 2]
    assert not x.is_homogeneous()
    assert x.homogeneous_part(2) == gen("g2") + gen("sigma2")


def test_hasse_diagram():
    """測試 Gr(2,5) 的 Hasse 圖"""
    levels, edges = hasse_diagram(GR25)
    assert [len(levels[c]) for c in range(7)] == [1, 1, 2, 2, 2, 1, 1]
    assert len(edges) == 12
    text = render_hasse(GR25)
    assert text.splitlines()[0] == "Hasse diagram of Gr(2,5) (10 vertices)"
    assert "    1 -> σ₁" in text
    assert "    g₅ -> pt" in text


if __name__ == "__main__":
    print("🧪 Running Chow ring tests...")

    test_coefficient_ring_parse()
    test_coefficient_ring_normalize()
    test_space_properties()
    test_space_limits()
    test_named_generators()
    test_basis_class_outside_box()
    test_gr25_products()
    test_projective_space_powers()
    test_pieri_rule()
    test_lr_coefficients()
    for d, n in [(2, 5), (2, 6), (3, 6), (1, 5)]:
        test_giambelli_oracle_matches_basis(d, n)
    test_multiply_matches_iterated_pieri()
    test_product_is_commutative_and_associative()
    test_degree_map()
    test_chern_classes()
    for d, n in SMALL_SPACES:
        test_total_chern_inverse(d, n)
    test_modular_and_rational_coefficients()
    test_mismatched_operands()
    test_cast()
    test_class_json_round_trip()
    test_homogeneous_parts()
    test_hasse_diagram()

    print("✅ All Chow ring tests passed!")
