"""
Tests for rationality witnesses
"""

import dataclasses

import pytest

from motive_workbench.chow_ring import INTEGERS, RATIONALS, GrassmannSpace, named_generator, projective_space
from motive_workbench.correspondence import ProductClass, compose, diagonal, external_product, product_unit, transpose
from motive_workbench.errors import RankOutOfRange, SpaceMismatch
from motive_workbench.rationality import (
    RationalWitness,
    combine,
    compose_witness,
    diagonal_witness,
    integer_scale,
    intersection_product,
    mod_adjust,
    negate,
    replay,
    ring_cast,
    segre_chern,
    sum_of,
    transpose_witness,
    verify,
)

GR25 = GrassmannSpace(2, 5)
P2 = projective_space(2)
P4 = projective_space(4)


def x(left, lname, right, rname, ring=INTEGERS):
    return external_product(named_generator(left, lname, ring), named_generator(right, rname, ring))


def test_segre_chern_first_class():
    """測試 c₁(τ₂ ⊗ τ₁) = −σ₁×1 − 2·1×H"""
    r = segre_chern(2, 1, 5, 1)
    assert r.conclusion == -x(GR25, "sigma1", P4, "1") - x(GR25, "1", P4, "H").scale(2)
    assert r.is_leaf
    assert r.integral


def test_segre_chern_second_class():
    """測試 c₂(τ₂ ⊗ τ₁) = g₂×1 + σ₁×H + 1×H²"""
    rho = segre_chern(2, 1, 5, 2).conclusion
    assert rho == x(GR25, "g2", P4, "1") + x(GR25, "sigma1", P4, "H") + x(GR25, "1", P4, "sigma2")


def test_segre_chern_on_projective_planes():
    """測試兩個射影平面上的線叢張量積"""
    c1 = segre_chern(1, 1, 3, 1).conclusion
    assert c1 == -x(P2, "H", P2, "1") - x(P2, "1", P2, "H")
    assert segre_chern(1, 1, 3, 0).conclusion == product_unit(P2, P2)


def test_segre_chern_index_range():
    """測試 Chern 類別指標的範圍"""
    with pytest.raises(RankOutOfRange):
        segre_chern(2, 1, 5, 3)
    with pytest.raises(RankOutOfRange):
        segre_chern(2, 1, 5, -1)


def test_combine_nodes():
    """測試各種內部節點的結論"""
    r = segre_chern(2, 1, 5, 1)
    rho = segre_chern(2, 1, 5, 2)
    assert sum_of(r, r).conclusion == r.conclusion.scale(2)
    assert negate(r).conclusion == -r.conclusion
    assert integer_scale(3, rho).conclusion == rho.conclusion.scale(3)
    assert intersection_product(r, r).conclusion == r.conclusion.intersect(r.conclusion)
    t = transpose_witness(rho)
    assert t.conclusion == transpose(rho.conclusion)
    assert compose_witness(t, rho).conclusion == compose(transpose(rho.conclusion), rho.conclusion)
    assert ring_cast(rho, RATIONALS).conclusion.ring == RATIONALS
    assert len(sum_of(r, rho, t.children[0]).leaves) == 3


def test_combine_argument_errors():
    """測試節點種類與參數的檢查"""
    rho = segre_chern(2, 1, 5, 2)
    with pytest.raises(ValueError):
        combine("divide", [rho])
    with pytest.raises(ValueError):
        combine("sum", [])
    with pytest.raises(ValueError):
        combine("intersect", [rho])
    with pytest.raises(ValueError):
        integer_scale(True, rho)
    with pytest.raises(ValueError):
        combine("ring_cast", [rho], "Q")
    with pytest.raises(ValueError):
        mod_adjust(rho, 1, x(GR25, "g2", P4, "1"))
    with pytest.raises(SpaceMismatch):
        mod_adjust(rho, 5, diagonal(GR25))


def test_mod_adjust():
    """測試 x − m·z 的調整與模數標記"""
    rho = segre_chern(2, 1, 5, 2)
    adjusted = mod_adjust(rho, 5, x(GR25, "g2", P4, "1"))
    assert adjusted.conclusion == rho.conclusion - x(GR25, "g2", P4, "1").scale(5)
    assert adjusted.moduli == {5}
    assert not adjusted.integral
    assert verify(adjusted)


def test_mod_adjust_rational_child():
    """測試有理子見證可以用整係數調整"""
    rho = ring_cast(segre_chern(2, 1, 5, 2), RATIONALS)
    adjusted = mod_adjust(rho, 3, x(GR25, "g2", P4, "1"))
    assert adjusted.conclusion.ring == RATIONALS
    assert adjusted.conclusion.coefficient((1, 1), ()) == -2


def test_verify_accepts_honest_witnesses():
    """測試誠實建構的見證可以重播"""
    rho = segre_chern(2, 1, 5, 2)
    tree = compose_witness(transpose_witness(rho), sum_of(rho, negate(segre_chern(2, 1, 5, 1))))
    assert verify(tree)
    assert replay(tree) == tree.conclusion
    assert verify(diagonal_witness(GR25))


def test_verify_rejects_tampered_witnesses():
    """測試竄改的結論會被偵測"""
    rho = segre_chern(2, 1, 5, 2)
    forged = dataclasses.replace(rho, conclusion=rho.conclusion.scale(2))
    assert not verify(forged)
    tree = sum_of(rho, rho)
    forged_child = dataclasses.replace(tree, children=(forged, rho))
    assert not verify(forged_child)
    broken = RationalWitness(kind="compose", conclusion=rho.conclusion, children=(rho, rho))
    assert not verify(broken)


def test_witness_json_round_trip():
    """測試見證樹的 JSON 表示"""
    rho = segre_chern(2, 1, 5, 2)
    tree = mod_adjust(ring_cast(rho, RATIONALS), 5, x(GR25, "g2", P4, "1"))
    data = tree.to_json()
    assert data["kind"] == "mod_adjust"
    assert data["params"]["modulus"] == 5
    assert data["children"][0]["params"]["ring"] == "Q"
    restored = RationalWitness.from_json(data)
    assert restored == tree
    assert verify(restored)
    diag = RationalWitness.from_json(diagonal_witness(GR25).to_json())
    assert diag.param("space") == GR25
    assert diag.conclusion == diagonal(GR25)
    assert isinstance(restored.param("adjustment"), ProductClass)


if __name__ == "__main__":
    print("🧪 Running rationality witness tests...")

    test_segre_chern_first_class()
    test_segre_chern_second_class()
    test_segre_chern_on_projective_planes()
    test_segre_chern_index_range()
    test_combine_nodes()
    test_combine_argument_errors()
    test_mod_adjust()
    test_mod_adjust_rational_child()
    test_verify_accepts_honest_witnesses()
    test_verify_rejects_tampered_witnesses()
    test_witness_json_round_trip()

    print("✅ All rationality witness tests passed!")
