"""
Tests for the SB₂(A) verification pipeline

The pipeline rebuilds every displayed cycle on Gr(2,5) and P⁴, so the context
and the full report are built once per module.
"""

import dataclasses
import json

import pytest

from motive_workbench.chow_ring import RATIONALS
from motive_workbench.correspondence import ProductClass, compose, diagonal, is_projector, transpose
from motive_workbench.combinatorics import Partition
from motive_workbench.errors import SideConditionFailed
from motive_workbench.rationality import verify
from motive_workbench.sb2_verifier import (
    SIGN_VECTORS,
    CheckResult,
    SignVector,
    VerificationReport,
    build_context,
    check_compose_associativity,
    check_construction,
    check_decomposition_isos,
    check_delta_identity,
    check_localized,
    gram_matrix,
    run_algebra,
    run_all,
    self_compose,
)

pytestmark = pytest.mark.slow

CONSTRUCTION_IDS = ["r_exact", "rho_exact", "rho2_exact", "rho2_mod5", "rho3_mod5", "p_mod5"]


@pytest.fixture(scope="module")
def ctx():
    return build_context()


@pytest.fixture(scope="module")
def report(ctx):
    return run_all(ctx=ctx)


def test_build_context_shapes(ctx):
    """測試所有循環所在的空間與餘維數"""
    assert (ctx.rho.left, ctx.rho.right) == (ctx.gr, ctx.p4)
    assert ctx.rho.codimensions() == [2]
    assert ctx.rho3_display.codimensions() == [6]
    assert (ctx.p.left, ctx.p.right) == (ctx.gr, ctx.gr)
    assert ctx.p.codimensions() == [6]
    assert ctx.j1.codimensions() == [8]
    assert ctx.j2.codimensions() == [4]
    assert ctx.delta_p4 == diagonal(ctx.p4)
    assert set(ctx.witnesses) == {"r", "rho", "rho2", "rho3", "rho3_display", "p", "q", "unit_factor", "j1"}


def test_projector_identities(ctx):
    """測試 p 與 q 是互補的整係數投影算子"""
    assert is_projector(ctx.p)
    assert is_projector(ctx.q)
    assert ctx.p + ctx.q == diagonal(ctx.gr)
    assert compose(ctx.p, ctx.q).is_zero()


def test_gram_matrix_is_identity(ctx):
    """測試 p 因子的次數配對矩陣"""
    assert gram_matrix(ctx) == [[1 if i == j else 0 for j in range(5)] for i in range(5)]


def test_witnesses_replay(ctx):
    """測試每個見證都可重播"""
    for name, witness in ctx.witnesses.items():
        assert verify(witness), name
    assert ctx.witnesses["rho2"].integral
    assert ctx.witnesses["p"].moduli == {5}
    assert ctx.witnesses["q"].conclusion == ctx.q


def test_rho3_display_is_congruent_not_equal(ctx):
    """測試 ρ³ 的顯示式只在模 5 下等於精確乘積"""
    construction = {check.check_id: check for check in check_construction(ctx)}
    assert list(construction) == CONSTRUCTION_IDS
    assert all(check.passed for check in construction.values())
    assert construction["rho3_mod5"].details["exact"] is False
    assert construction["rho2_exact"].passed


def test_delta_identity(ctx):
    """測試 ρ³∘(ρ²)ᵗ ≡ Δ (mod 5)，而模 7 不成立"""
    check = check_delta_identity(ctx)
    assert check.passed
    assert [c % 5 for c in check.details["exact_diagonal_coefficients"]] == [1] * 5
    assert not check_delta_identity(ctx, 7).passed


def test_decomposition_isomorphisms(ctx):
    """測試 j₁、j₂ 同構與 q ≅ pᵗ（模 5）"""
    checks = {check.check_id: check for check in check_decomposition_isos(ctx)}
    assert checks["iso_j1j2"].passed
    assert checks["iso_j1j2"].details["frame"] == [2, 0]
    assert checks["iso_q_pt"].passed
    assert checks["iso_q_pt"].details["exact"] is False
    assert checks["j1_rational"].passed
    assert compose(ctx.j2, ctx.j1) == ctx.p
    assert compose(ctx.j1, ctx.j2) == transpose(ctx.p)


def test_flipped_j1_breaks_isomorphism(ctx):
    """測試把 j₁ 的點類別項變號後同構不再成立"""
    flipped_terms = {(lam, mu): (-c if mu == Partition((3, 3)) else c) for (lam, mu), c in ctx.j1.items()}
    flipped = ProductClass(ctx.gr, ctx.gr, ctx.j1.ring, flipped_terms)
    assert flipped != ctx.j1
    broken = dataclasses.replace(ctx, j1=flipped)
    assert not check_decomposition_isos(broken)[0].passed


def test_perturbed_rho_fails(ctx):
    """測試以 2ρ 取代 ρ 後檢查失敗"""
    perturbed = ctx.with_rho(ctx.rho.scale(2))
    assert not check_delta_identity(perturbed).passed
    construction = {check.check_id: check for check in check_construction(perturbed)}
    assert not construction["rho_exact"].passed


@pytest.mark.parametrize("prime", [2, 3])
def test_localized_isomorphisms(ctx, prime):
    """測試 2 或 3 可逆時的精確同構"""
    check = check_localized(prime, ctx)
    assert check.passed
    assert check.check_id == f"localized_{prime}"
    assert check.ring == "Q"
    assert check.details["support"] == [prime]
    assert check.details["literal_local_at_5"]
    assert check.details["literal_exact"] is False


def test_localized_rejects_other_primes(ctx):
    """測試只接受 2 與 3"""
    with pytest.raises(SideConditionFailed) as exc_info:
        check_localized(5, ctx)
    assert exc_info.value.clause == "prime in {2, 3}"


def test_sign_vectors():
    """測試符號向量"""
    assert len(SIGN_VECTORS) == 16
    vector = SignVector((1, -1, 1, -1))
    assert vector.label == "+-+-"
    assert vector.bindings() == {"e1": 1, "e2": -1, "e3": 1, "e4": -1}
    with pytest.raises(ValueError):
        SignVector((1, 0, 1, 1))
    with pytest.raises(ValueError):
        SignVector((1, 1, 1))


def test_self_compose(ctx):
    """測試重複合成"""
    assert self_compose(ctx.p, 1) == ctx.p
    assert self_compose(ctx.p, 3) == ctx.p
    assert self_compose(diagonal(ctx.p4, RATIONALS), 4) == diagonal(ctx.p4, RATIONALS)


def test_run_all_passes(report):
    """測試完整報告全部通過"""
    assert report.all_passed, [check.check_id for check in report.failed]
    assert report.modulus == 5
    ids = [check.check_id for check in report.checks]
    assert ids[:6] == CONSTRUCTION_IDS
    assert len(ids) == 35
    assert len([i for i in ids if i.startswith("family_eps_")]) == 16
    for expected in ("delta_identity", "projector_integral", "gram_identity", "localized_2", "localized_3",
                     "subset_diagonals", "witness_replay", "gensb_shape", "krull_schmidt", "gcd_guard"):
        assert report.get(expected).passed
    with pytest.raises(KeyError):
        report.get("missing")


def test_run_all_with_other_modulus_fails_only_delta(ctx):
    """測試模數 7 只影響對角線恆等式"""
    other = run_all(modulus=7, ctx=ctx)
    assert [check.check_id for check in other.failed] == ["delta_identity"]
    assert other.modulus == 7


def test_report_json_round_trip(report):
    """測試報告的 JSON 表示"""
    data = json.loads(json.dumps(report.to_json(), ensure_ascii=False))
    assert data["all_passed"] is True
    restored = VerificationReport.from_json(data)
    assert [c.check_id for c in restored.checks] == [c.check_id for c in report.checks]
    assert restored.all_passed
    projector = restored.get("projector_integral")
    assert projector.witness["kind"] == "mod_adjust"


def test_report_text(report):
    """測試文字報告"""
    text = report.render_text()
    assert text.splitlines()[0].startswith("[PASS] r_exact (Z)")
    assert text.endswith("35/35 checks passed")


def test_failed_check_text():
    """測試失敗檢查會列出兩邊"""
    failing = CheckResult("demo", "fail", "a", "b", "Z/5", 5, details={"note": 1})
    text = VerificationReport([failing]).render_text()
    assert "[FAIL] demo (Z/5 mod 5)" in text
    assert "    lhs: a" in text
    assert "    note: 1" in text
    assert text.endswith("0/1 checks passed")
    assert CheckResult.from_json(failing.to_json()) == failing


def test_run_algebra():
    """測試代數與組合的窮舉檢查"""
    algebra = run_algebra(timings=True, seed=11)
    assert algebra.all_passed, [check.check_id for check in algebra.failed]
    assert [check.check_id for check in algebra.checks] == [
        "lr_oracle_gr25", "lr_oracle_gr26", "lr_oracle_gr36", "pairing_degree",
        "gaussian_box", "phi_degree", "full_flag_poincare", "gensb_identity",
        "compose_associativity",
    ]
    assert all(check.duration is not None for check in algebra.checks)
    assert algebra.get("full_flag_poincare").details["C6"]
    assert algebra.get("compose_associativity").details["seed"] == 11


def test_compose_associativity_check():
    """測試隨機合成結合律檢查可由種子重現"""
    first = check_compose_associativity(seed=3, trials=4)
    assert first.passed
    assert first.details == {"seed": 3, "failures": []}
    assert check_compose_associativity(seed=3, trials=4).to_json() == first.to_json()


if __name__ == "__main__":
    print("🧪 Running SB₂ verification tests...")

    context = build_context()
    full_report = run_all(ctx=context)
    test_build_context_shapes(context)
    test_projector_identities(context)
    test_gram_matrix_is_identity(context)
    test_witnesses_replay(context)
    test_rho3_display_is_congruent_not_equal(context)
    test_delta_identity(context)
    test_decomposition_isomorphisms(context)
    test_flipped_j1_breaks_isomorphism(context)
    test_perturbed_rho_fails(context)
    test_localized_isomorphisms(context, 2)
    test_localized_isomorphisms(context, 3)
    test_localized_rejects_other_primes(context)
    test_sign_vectors()
    test_self_compose(context)
    test_run_all_passes(full_report)
    test_run_all_with_other_modulus_fails_only_delta(context)
    test_report_json_round_trip(full_report)
    test_report_text(full_report)
    test_failed_check_text()
    test_run_algebra()
    test_compose_associativity_check()

    print("✅ All SB₂ verification tests passed!")
