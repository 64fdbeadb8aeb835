"""
Tests for correspondences between Grassmannians
"""

import itertools
import random
from fractions import Fraction

import pytest

from motive_workbench.chow_ring import (
    INTEGERS,
    RATIONALS,
    ChowClass,
    GrassmannSpace,
    chern_quotient,
    named_generator,
    projective_space,
    unit,
)
from motive_workbench.correspondence import (
    ProductClass,
    TwistFrame,
    check_iso_pair,
    compose,
    denominator_support,
    diagonal,
    eq_mod,
    eq_mod_local,
    external_product,
    is_projector,
    product_unit,
    random_homogeneous,
    reduce_mod,
    reduce_mod_local,
    subset_diagonal,
    tensor_line_chern,
    transpose,
)
from motive_workbench.errors import (
    CodimMismatch,
    NotAUnit,
    RankOutOfRange,
    RingMismatch,
    SpaceMismatch,
)

GR25 = GrassmannSpace(2, 5)
P2 = projective_space(2)
P4 = projective_space(4)


def x(left, lname, right, rname, ring=INTEGERS):
    """Δ×Δ' 形式的外積"""
    return external_product(named_generator(left, lname, ring), named_generator(right, rname, ring))


def mixed():
    return x(GR25, "g2", P4, "1") + x(GR25, "sigma1", P4, "H") + x(GR25, "1", P4, "H")


def test_external_product_and_render():
    """測試外積與顯示"""
    a = x(GR25, "g2", P4, "1") + x(GR25, "sigma1", P4, "H").scale(2) + x(GR25, "1", P4, "sigma2")
    assert a.render() == "1×H² + 2σ₁×H + g₂×1"
    assert (x(GR25, "1", P4, "H") * 3).render() == "3·1×H"
    assert a.coefficient((1,), (1,)) == 2
    assert a.coefficient((2,), ()) == 0
    assert a.codimensions() == [2]
    with pytest.raises(RingMismatch):
        external_product(named_generator(GR25, "g2"), named_generator(P4, "H", RATIONALS))


def test_product_class_arithmetic():
    """測試加減、純量與相等"""
    a = x(GR25, "g2", P4, "1")
    assert (a - a).is_zero()
    assert a + a == 2 * a
    assert not mixed().is_homogeneous()
    assert mixed().homogeneous_part(2) == x(GR25, "g2", P4, "1") + x(GR25, "sigma1", P4, "H")
    with pytest.raises(SpaceMismatch):
        a + x(GR25, "g2", P2, "1")


def test_intersection_product():
    """測試 CH(X×Y) 的環乘法"""
    a = x(GR25, "sigma1", P4, "1")
    assert a.intersect(a) == x(GR25, "sigma2", P4, "1") + x(GR25, "g2", P4, "1")
    assert (a * 1).power(0) == product_unit(GR25, P4)
    h = x(GR25, "1", P4, "H")
    assert h.power(4) == x(GR25, "1", P4, "pt")
    assert h.power(5).is_zero()


def test_transpose():
    """測試轉置"""
    a = mixed()
    t = transpose(a)
    assert (t.left, t.right) == (P4, GR25)
    assert t.coefficient((1,), (1,)) == 1
    assert transpose(t) == a


def test_diagonal_is_identity_for_composition():
    """測試對角線是合成的單位元"""
    a = mixed()
    assert compose(diagonal(P4), a) == a
    assert compose(a, diagonal(GR25)) == a
    assert compose(diagonal(P2), diagonal(P2)) == diagonal(P2)


def test_compose_basic_rule():
    """測試 (Δ_ν×Δ_κ)∘(Δ_λ×Δ_μ) = deg(Δ_μΔ_ν)·Δ_λ×Δ_κ"""
    a = x(P2, "1", P2, "H")
    b = x(P2, "H", P2, "sigma2")
    assert compose(b, a) == x(P2, "1", P2, "sigma2")
    assert compose(a, b) == x(P2, "H", P2, "H")
    with pytest.raises(SpaceMismatch):
        compose(mixed(), mixed())


def test_transpose_reverses_composition():
    """測試 (b∘a)ᵗ = aᵗ∘bᵗ"""
    a = mixed()
    b = transpose(mixed())
    assert transpose(compose(b, a)) == compose(transpose(a), transpose(b))


SPACE_CHAINS = list(itertools.product((GR25, P4), repeat=4))


def random_chow(space, rng, ring=INTEGERS):
    return ChowClass(space, ring, {lam: rng.randint(-9, 9) for lam in space.basis})


def random_triple(spaces, seed):
    """三個可依序合成的隨機齊次類別與它們的餘維數"""
    rng = random.Random(seed)
    x_, y_, z_, w_ = spaces
    codims = (rng.randint(0, x_.dimension + y_.dimension),
              rng.randint(0, y_.dimension + z_.dimension),
              rng.randint(0, z_.dimension + w_.dimension))
    a = random_homogeneous(x_, y_, codims[0], rng)
    b = random_homogeneous(y_, z_, codims[1], rng)
    c = random_homogeneous(z_, w_, codims[2], rng)
    return (a, b, c), codims


@pytest.mark.parametrize("spaces", SPACE_CHAINS)
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_compose_is_associative(spaces, seed):
    """測試 c∘(b∘a) = (c∘b)∘a"""
    (a, b, c), _ = random_triple(spaces, seed)
    assert compose(c, compose(b, a)) == compose(compose(c, b), a)


@pytest.mark.parametrize("spaces", SPACE_CHAINS)
@pytest.mark.parametrize("seed", [3, 4])
def test_compose_codimension(spaces, seed):
    """測試 codim(b∘a) = codim a + codim b − dim Y"""
    (a, b, _), (i, j, _) = random_triple(spaces, seed)
    middle = spaces[1]
    for codim in compose(b, a).codimensions():
        assert codim == i + j - middle.dimension


def test_random_homogeneous():
    """測試隨機齊次類別的範圍"""
    rng = random.Random(7)
    a = random_homogeneous(GR25, P4, 5, rng, bound=2)
    assert a.codimensions() in ([], [5])
    assert all(-2 <= c <= 2 for _, c in a.items())
    assert random_homogeneous(GR25, P4, 5, random.Random(7), bound=2) == a
    with pytest.raises(CodimMismatch):
        random_homogeneous(GR25, P4, 11, rng)


@pytest.mark.parametrize("m", [2, 3, 5, 7])
@pytest.mark.parametrize("seed", range(4))
def test_reduce_mod_is_a_homomorphism(m, seed):
    """測試 reduce_mod 與 +、外積、合成可交換"""
    rng = random.Random(seed)
    a = random_homogeneous(GR25, P4, rng.randint(0, 10), rng, bound=20)
    b = random_homogeneous(GR25, P4, rng.randint(0, 10), rng, bound=20)
    assert reduce_mod(a + b, m) == reduce_mod(a, m) + reduce_mod(b, m)

    u, v = random_chow(GR25, rng), random_chow(P4, rng)
    assert reduce_mod(external_product(u, v), m) == external_product(reduce_mod(u, m), reduce_mod(v, m))

    c = random_homogeneous(P4, GR25, rng.randint(0, 10), rng, bound=20)
    assert reduce_mod(compose(c, a), m) == compose(reduce_mod(c, m), reduce_mod(a, m))
    assert reduce_mod(compose(a, c), m) == compose(reduce_mod(a, m), reduce_mod(c, m))


def test_projectors():
    """測試投影算子判定"""
    assert is_projector(diagonal(GR25))
    assert not is_projector(diagonal(GR25).scale(2))
    assert is_projector(x(GR25, "pt", GR25, "1"))
    assert is_projector(x(GR25, "1", GR25, "pt"))
    with pytest.raises(SpaceMismatch):
        is_projector(mixed())


def test_subset_diagonals():
    """測試子集對角線的分解"""
    low_weights = [lam for lam in GR25.basis if lam.weight <= 2]
    high_weights = [lam for lam in GR25.basis if lam.weight > 2]
    low, high = subset_diagonal(GR25, low_weights), subset_diagonal(GR25, high_weights)
    assert low + high == diagonal(GR25)
    assert is_projector(low)
    assert is_projector(high)
    assert compose(low, high).is_zero()
    assert subset_diagonal(GR25, GR25.basis) == diagonal(GR25)


def test_twist_frame():
    """測試扭轉框架的期望餘維數"""
    frame = TwistFrame(2, 0)
    assert frame.expected_codimension(GR25) == 8
    assert frame.reversed() == TwistFrame(0, 2)
    assert frame.reversed().expected_codimension(P4) == 2
    assert TwistFrame(0, 0).conforms(diagonal(P2))
    assert not TwistFrame(1, 0).conforms(diagonal(P2))


def test_check_iso_pair():
    """測試同構對的四個恆等式"""
    d = diagonal(P2)
    assert check_iso_pair(d, d, d, d, TwistFrame(0, 0))
    point = x(P2, "pt", P2, "1")
    assert check_iso_pair(point, point, point, point, TwistFrame(0, 0))
    assert not check_iso_pair(d, d.scale(2), d, d, TwistFrame(0, 0))


def test_check_iso_pair_errors():
    """測試同構對的空間與餘維數檢查"""
    d = diagonal(P2)
    with pytest.raises(CodimMismatch):
        check_iso_pair(d, d, d, d, TwistFrame(1, 0))
    with pytest.raises(SpaceMismatch):
        check_iso_pair(d, d, diagonal(P4), d, TwistFrame(0, 0))


def test_reduce_mod():
    """測試模 m 約化"""
    a = diagonal(GR25).scale(5)
    assert reduce_mod(a, 5).is_zero()
    assert eq_mod(diagonal(GR25).scale(6), diagonal(GR25), 5)
    assert not eq_mod(diagonal(GR25).scale(6), diagonal(GR25), 7)
    with pytest.raises(ValueError):
        reduce_mod(a, 1)
    with pytest.raises(RingMismatch):
        reduce_mod(diagonal(GR25, RATIONALS), 5)


def test_local_reduction():
    """測試分母與 m 互質時的局部約化"""
    half = x(GR25, "g5", P4, "H", RATIONALS).scale(Fraction(5, 2))
    zero = ProductClass(GR25, P4, RATIONALS)
    assert eq_mod_local(half, zero, 5)
    assert not eq_mod_local(half, zero, 3)
    assert reduce_mod_local(half, 3).coefficient((3, 2), (1,)) == 1
    with pytest.raises(RingMismatch):
        reduce_mod_local(half, 2)


def test_denominator_support():
    """測試分母的質因數集合"""
    a = x(GR25, "g2", P4, "1", RATIONALS).scale(Fraction(5, 6)) + \
        x(GR25, "g3", P4, "H", RATIONALS).scale(Fraction(1, 4))
    assert denominator_support(a) == {2, 3}
    assert denominator_support(diagonal(GR25, RATIONALS)) == set()
    with pytest.raises(RingMismatch):
        denominator_support(diagonal(GR25))


def test_tensor_line_chern():
    """測試 c_i(pr₁*E ⊗ pr₂*L)"""
    c_q = chern_quotient(GR25)
    h = named_generator(P4, "H")
    assert tensor_line_chern(c_q, 3, h, 0) == product_unit(GR25, P4)
    assert tensor_line_chern(c_q, 3, h, 1) == x(GR25, "1", P4, "H").scale(3) + x(GR25, "sigma1", P4, "1")
    top = tensor_line_chern(c_q, 3, h, 3)
    assert top.coefficient((3,), ()) == 1
    assert top.coefficient((), (3,)) == 1


def test_tensor_line_chern_errors():
    """測試 tensor_line_chern 的參數檢查"""
    c_q = chern_quotient(GR25)
    h = named_generator(P4, "H")
    with pytest.raises(RankOutOfRange):
        tensor_line_chern(c_q, 3, h, 4)
    with pytest.raises(CodimMismatch):
        tensor_line_chern(c_q, 3, h * h, 1)
    with pytest.raises(NotAUnit):
        tensor_line_chern(unit(GR25).scale(2), 3, h, 1)


def test_product_class_json_round_trip():
    """測試 ProductClass 的 JSON 表示"""
    a = x(GR25, "g3", P4, "H", RATIONALS).scale(Fraction(-5, 2))
    data = a.to_json()
    assert data["left"] == [2, 5]
    assert data["right"] == [1, 5]
    assert data["terms"][0]["coefficient"] == "-5/2"
    assert ProductClass.from_json(data) == a


if __name__ == "__main__":
    print("🧪 Running correspondence tests...")

    test_external_product_and_render()
    test_product_class_arithmetic()
    test_intersection_product()
    test_transpose()
    test_diagonal_is_identity_for_composition()
    test_compose_basic_rule()
    test_transpose_reverses_composition()
    for chain in SPACE_CHAINS:
        test_compose_is_associative(chain, 0)
        test_compose_codimension(chain, 3)
    test_random_homogeneous()
    for modulus in [2, 3, 5, 7]:
        test_reduce_mod_is_a_homomorphism(modulus, 0)
    test_projectors()
    test_subset_diagonals()
    test_twist_frame()
    test_check_iso_pair()
    test_check_iso_pair_errors()
    test_reduce_mod()
    test_local_reduction()
    test_denominator_support()
    test_tensor_line_chern()
    test_tensor_line_chern_errors()
    test_product_class_json_round_trip()

    print("✅ All correspondence tests passed!")
