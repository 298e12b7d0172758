import random

import numpy as np
import pytest

from engelcalc.engelcheck import (
    DefiningForms,
    PreconditionError,
    VerificationError,
    annihilating_form,
    characteristic_foliation,
    complex_framing,
    defining_forms,
    frac_bracket,
    j_engel_splitting,
    j_invariance_check,
    jofreeb_residual,
    k_engel_check,
    nijenhuis_certificate,
    structure_functions,
    totally_real_check,
    transverse_engel_check,
    verify_engel,
)
from engelcalc.framecalc import (
    ComplexStructure,
    FramedSpace,
    KForm,
    VecField,
    apply_J,
    bracket,
    exterior_derivative,
    minors_of_fields,
    wedge,
)
from engelcalc.catalog import build_family
from engelcalc.trigring import parse

from oracles import numeric_matrix, random_points

J_STD = ComplexStructure.pairing(0, 1, 2, 3)


def family(name, **params):
    return build_family(name, params or None)


# -- verify_engel -----------------------------------------------------------------


def test_verify_engel_inoue_s0_symbolic():
    spec = family("inoue_s0")
    flag = verify_engel(spec.d1, spec.d2, spec.space)
    assert flag.passed
    assert all(c.kind == "SYMBOLIC" for c in flag.certificates.values())


def test_verify_engel_abelian_fails_at_rank_e():
    space = FramedSpace()
    flag = verify_engel(VecField.basis(0), VecField.basis(1), space)
    assert not flag.passed
    assert flag.certificates["rank_d"].passed
    assert flag.certificates["rank_e"].kind == "FAILED"


def test_verify_engel_torus_family_with_random_oracle():
    spec = family("torus_trig")
    flag = verify_engel(spec.d1, spec.d2, spec.space)
    assert flag.passed
    # oracle: the 4x4 determinant with both top generators never degenerates
    b1 = bracket(spec.d1, flag.e3, spec.space)
    b2 = bracket(spec.d2, flag.e3, spec.space)
    rng = random.Random(23)
    for _ in range(200):
        p = {c: rng.uniform(0, 1) for c in spec.space.coords}
        m1 = abs(np.linalg.det(numeric_matrix([spec.d1, spec.d2, flag.e3, b1], p)))
        m2 = abs(np.linalg.det(numeric_matrix([spec.d1, spec.d2, flag.e3, b2], p)))
        assert max(m1, m2) > 1e-6


# -- characteristic foliation -------------------------------------------------------


def test_characteristic_is_inside_distribution():
    for name in ("hopf_s3r", "inoue_s0", "kodaira_primary"):
        spec = family(name)
        flag = verify_engel(spec.d1, spec.d2, spec.space)
        w = characteristic_foliation(flag, spec.space)
        assert all(m.is_zero()
                   for m in minors_of_fields([spec.d1, spec.d2, w])), name


def test_characteristic_inoue_spm_hand_value():
    # with q = 0 the linear system from the constant table gives W along A
    spec = family("inoue_spm")
    flag = verify_engel(spec.d1, spec.d2, spec.space)
    w = characteristic_foliation(flag, spec.space)
    assert all(m.is_zero() for m in minors_of_fields([w, VecField.of(1, 0, 0, 1)]))


def test_characteristic_pointwise_nullspace_oracle():
    # W(p) must span the nullspace of [alpha([D1,E3]), alpha([D2,E3])] at p
    spec = family("torus_bryant")
    flag = verify_engel(spec.d1, spec.d2, spec.space)
    w = characteristic_foliation(flag, spec.space)
    alpha = annihilating_form(spec.d1, spec.d2, flag.e3)
    u1 = alpha(bracket(spec.d1, flag.e3, spec.space))
    u2 = alpha(bracket(spec.d2, flag.e3, spec.space))
    rng = random.Random(4)
    for p in random_points(spec.space, rng, 40):
        lam = np.array([-u2.evaluate(p), u1.evaluate(p)])
        coefs = np.array([[c.evaluate(p) for c in spec.d1.coeffs],
                          [c.evaluate(p) for c in spec.d2.coeffs]])
        expect = lam @ coefs
        got = np.array(w.evaluate(p))
        assert np.max(np.abs(got - expect)) < 1e-9
        # and the defining residual vanishes on the grid point
        assert abs(u1.evaluate(p) * lam[0] + u2.evaluate(p) * lam[1]) < 1e-9


def test_characteristic_requires_certified_flag():
    space = FramedSpace()
    flag = verify_engel(VecField.basis(0), VecField.basis(1), space)
    with pytest.raises(PreconditionError):
        characteristic_foliation(flag, space)


# -- J-invariance / framings ---------------------------------------------------------


def test_j_invariance_of_complex_plane():
    spec = family("hopf_s3r")
    assert j_invariance_check(spec.d1, spec.d2, spec.J, spec.space).passed


def test_j_invariance_fails_for_totally_real_plane():
    space = FramedSpace()
    d1, d2 = VecField.basis(0), VecField.basis(2)
    cert = j_invariance_check(d1, d2, J_STD, space)
    assert not cert.passed
    assert totally_real_check(d1, d2, J_STD, space).passed


def test_complex_framing_families():
    for name in ("hopf_s3r", "hyperelliptic_solv"):
        spec = family(name)
        cert = complex_framing(spec.d1, spec.d2, spec.J, spec.space)
        assert cert.kind == "SYMBOLIC", name


def test_complex_framing_rejects_non_engel():
    space = FramedSpace()
    with pytest.raises(PreconditionError):
        complex_framing(VecField.basis(0), VecField.basis(1), J_STD, space)


def test_totally_real_check_on_j_invariant_plane_fails():
    spec = family("hopf_s3r")
    assert not totally_real_check(spec.d1, spec.d2, spec.J, spec.space).passed


# -- defining forms -------------------------------------------------------------------


def proportional(form: KForm, row) -> bool:
    reference = KForm.one_form(row)
    got = [form.component((i,)) for i in range(4)]
    ref = [reference.component((i,)) for i in range(4)]
    pairs = [(g, r) for g, r in zip(got, ref)]
    # cross-ratio equality g_i r_j = g_j r_i for all pairs
    for i in range(4):
        for j in range(4):
            if not (pairs[i][0] * pairs[j][1] - pairs[j][0] * pairs[i][1]).is_zero():
                return False
    return any(not g.is_zero() for g, _ in pairs)


def test_hopf_forms_match_quoted_class():
    spec = family("hopf_s3r")
    flag = verify_engel(spec.d1, spec.d2, spec.space)
    forms = defining_forms(flag, spec.J, spec.space)
    assert proportional(forms.alpha, [0, -1, 0, 1])    # a4 - a2
    assert proportional(forms.beta, [-1, 0, 1, 0])     # a3 - a1
    # the proportionality factor is positive (same orientation as quoted)
    assert forms.alpha.component((3,)).constant_value().evaluate() > 0


def test_hyperelliptic_forms_match_quoted_class():
    spec = family("hyperelliptic_solv")
    flag = verify_engel(spec.d1, spec.d2, spec.space)
    forms = defining_forms(flag, spec.J, spec.space)
    assert proportional(forms.alpha, [0, 1, 1, 0])     # a2 + a3
    assert proportional(forms.beta, [1, 0, 0, -1])     # a1 - a4


def test_beta_orientation_matches_quoted_pairs():
    # beta(v) = alpha(J v): whatever overall factor alpha carries, beta must
    # carry the same one relative to the quoted pair, never the opposite sign
    for name, alpha_ref, beta_ref in (
            ("hopf_s3r", [0, -1, 0, 1], [-1, 0, 1, 0]),
            ("hyperelliptic_solv", [0, 1, 1, 0], [1, 0, 0, -1])):
        spec = family(name)
        flag = verify_engel(spec.d1, spec.d2, spec.space)
        forms = defining_forms(flag, spec.J, spec.space)
        i = next(k for k, c in enumerate(alpha_ref) if c)
        j = next(k for k, c in enumerate(beta_ref) if c)
        factor_a = forms.alpha.component((i,)).constant_value().evaluate() \
            / alpha_ref[i]
        factor_b = forms.beta.component((j,)).constant_value().evaluate() \
            / beta_ref[j]
        assert factor_a == pytest.approx(factor_b), name


def test_reeb_pair_pairings_are_exact():
    for name in ("hopf_s3r", "hyperelliptic_solv", "inoue_s0", "kodaira_primary"):
        spec = family(name)
        flag = verify_engel(spec.d1, spec.d2, spec.space)
        forms = defining_forms(flag, spec.J, spec.space)
        # beta(T) = 1 and alpha(R) = 1 exactly, alpha(T) = beta(R) = 0
        assert forms.T.pair(forms.beta).num == forms.T.pair(forms.beta).den
        assert forms.R.pair(forms.alpha).num == forms.R.pair(forms.alpha).den
        assert forms.T.pair(forms.alpha).is_zero()
        assert forms.R.pair(forms.beta).is_zero(), name


def test_hopf_reeb_fields_quoted_directions():
    spec = family("hopf_s3r")
    flag = verify_engel(spec.d1, spec.d2, spec.space)
    forms = defining_forms(flag, spec.J, spec.space)
    assert all(m.is_zero()
               for m in minors_of_fields([forms.R.raw, VecField.basis(3)]))
    assert all(m.is_zero()
               for m in minors_of_fields([forms.T.raw, VecField.of(-1, 0, 1, 0)]))


def test_defining_forms_reject_uncertified_flag():
    space = FramedSpace()
    flag = verify_engel(VecField.basis(0), VecField.basis(1), space)
    with pytest.raises(PreconditionError):
        defining_forms(flag, J_STD, space)


# -- structure functions ----------------------------------------------------------------


def test_hopf_c_wx_direct_pairing_oracle():
    # with the quoted forms alpha = a4 - a2, beta = a3 - a1 and the
    # characteristic section W, the pairing beta([W, JW]) equals 2
    spec = family("hopf_s3r")
    beta = KForm.one_form([-1, 0, 1, 0])
    w = VecField.of(0, 1, 0, 1)            # characteristic direction X2 + X4
    x = apply_J(spec.J, w)
    assert beta(bracket(w, x, spec.space)) == parse("2")


def test_structure_functions_pipeline_consistency():
    spec = family("hopf_s3r")
    flag = verify_engel(spec.d1, spec.d2, spec.space)
    forms = defining_forms(flag, spec.J, spec.space)
    w = characteristic_foliation(flag, spec.space)
    sf = structure_functions(forms, w, apply_J(spec.J, w), spec.space)
    assert sf.certificate.kind == "SYMBOLIC"
    assert sf.d_WR.is_zero() and sf.d_XR.is_zero()


def test_structure_functions_reject_abelian():
    space = FramedSpace(coords=("t",), derivation={(0, "t"): 1})
    # fabricate forms for the integrable plane <E2, E3>: c_WX = 0
    alpha = KForm.one_form([1, 0, 0, 0])
    beta = KForm.one_form([0, 0, 0, 1])
    from engelcalc.engelcheck import FracField

    forms = DefiningForms(alpha, beta, FracField(VecField.basis(3)),
                          FracField(VecField.basis(0)), {})
    with pytest.raises(VerificationError):
        structure_functions(forms, VecField.basis(1), VecField.basis(2), space)


# -- J of the Reeb pair --------------------------------------------------------------


def _jofreeb(name):
    spec = family(name)
    flag = verify_engel(spec.d1, spec.d2, spec.space)
    forms = defining_forms(flag, spec.J, spec.space)
    w = characteristic_foliation(flag, spec.space)
    x = apply_J(spec.J, w)
    sf = structure_functions(forms, w, x, spec.space)
    return spec, forms, sf, w, x


@pytest.mark.parametrize("name", ["hopf_s3r", "hyperelliptic_solv"])
def test_jofreeb_residual_symbolically_zero(name):
    spec, forms, sf, w, x = _jofreeb(name)
    res = jofreeb_residual(forms, sf, w, x, spec.J, spec.space)
    assert res.certificate.kind == "SYMBOLIC"
    assert res.residual_T.is_zero() and res.residual_R.is_zero()
    assert res.dalpha_identity.kind == "SYMBOLIC"


def test_jofreeb_residual_numeric_sampling_agreement():
    # the residual numerators must vanish at 100 random points as floats
    spec, forms, sf, w, x = _jofreeb("hopf_s3r")
    res = jofreeb_residual(forms, sf, w, x, spec.J, spec.space)
    rng = random.Random(9)
    for _ in range(100):
        p = {}
        vals = [c.evaluate(p) for c in res.residual_T.raw.coeffs]
        vals += [c.evaluate(p) for c in res.residual_R.raw.coeffs]
        assert max(abs(v) for v in vals) < 1e-12


def test_jofreeb_gate_rejects_non_integrable():
    spec, forms, sf, w, x = _jofreeb("hopf_s3r")
    bad = build_family("elliptic_sl2r")
    with pytest.raises(PreconditionError):
        jofreeb_residual(forms, sf, w, x, bad.J, bad.space)


def test_jofreeb_symbolic_on_every_integrable_family():
    from engelcalc.catalog import FAMILIES

    for name in FAMILIES:
        spec = build_family(name)
        if not spec.j_integrable:
            continue
        s, forms, sf, w, x = _jofreeb(name)
        res = jofreeb_residual(forms, sf, w, x, s.J, s.space)
        assert res.certificate.kind == "SYMBOLIC", name
        assert res.dalpha_identity.kind == "SYMBOLIC", name


def test_jofreeb_gate_rejects_perturbed_pairing():
    # deliberately wrong pairing on the S+- table: squares to -id but its
    # Nijenhuis tensor does not vanish, so the gate must reject it
    spec = build_family("inoue_spm")
    perturbed = ComplexStructure.pairing(0, 3, 1, 2)  # J X1 = X4, J X2 = X3
    assert nijenhuis_certificate(perturbed, spec.space).kind == "FAILED"
    s, forms, sf, w, x = _jofreeb("inoue_spm")
    with pytest.raises(PreconditionError):
        jofreeb_residual(forms, sf, w, x, perturbed, spec.space)


def test_dalpha_identity_abelian_trivial():
    # on the flat space with a closed alpha both sides vanish
    space = FramedSpace(coords=("t",), derivation={(0, "t"): 1})
    alpha = KForm.one_form([1, 0, 0, 0])
    da = exterior_derivative(alpha, space)
    assert wedge(da, da).is_zero()


def test_jofreeb_nonintegrable_gate_via_nijenhuis_cert():
    spec = family("elliptic_sl2r")
    cert = nijenhuis_certificate(spec.J, spec.space)
    assert cert.kind == "FAILED"


# -- splitting, transverse, K-structure ------------------------------------------------


@pytest.mark.parametrize("name", ["hopf_s3r", "hyperelliptic_solv", "inoue_s0",
                                  "kodaira_primary", "torus_trig"])
def test_splitting_invariance(name):
    spec = family(name)
    result = j_engel_splitting(spec.d1, spec.d2, spec.J, spec.space)
    assert result.invariance.passed
    assert result.invariance.kind == "SYMBOLIC"
    if spec.space.coords:
        assert any("cos" in s for s in result.tested_scalings)


def test_splitting_scaling_by_two_matches_half_reeb():
    spec = family("hopf_s3r")
    flag = verify_engel(spec.d1, spec.d2, spec.space)
    forms = defining_forms(flag, spec.J, spec.space)
    scaled_alpha = forms.alpha.scale(2)
    # rebuild R for 2*alpha by hand: beta scales by 2, beta^dbeta by 4
    from engelcalc.engelcheck import _compose_with_J

    beta2 = _compose_with_J(scaled_alpha, spec.J)
    k2 = wedge(beta2, exterior_derivative(beta2, spec.space)).kernel_field()
    assert all(m.is_zero() for m in minors_of_fields([k2, forms.R.raw]))


def test_transverse_engel_hopf_and_hyperelliptic():
    for name, idx in (("hopf_s3r", 3), ("hyperelliptic_solv", 2)):
        spec = family(name)
        flag = verify_engel(spec.d1, spec.d2, spec.space)
        forms = defining_forms(flag, spec.J, spec.space)
        z = VecField.basis(idx)
        rep = transverse_engel_check(z, spec.d1, spec.d2, spec.J, forms,
                                     spec.space)
        assert rep.engel_field.passed and rep.conclusion.passed
        assert rep.reeb_match.passed, name
        # the rescaled forms must have Z itself as their Reeb field
        assert rep.rescaled_alpha is not None
        assert rep.rescaled_alpha(z) == parse("1")
        assert rep.rescaled_beta(z).is_zero()
        k = wedge(rep.rescaled_beta,
                  exterior_derivative(rep.rescaled_beta, spec.space)).kernel_field()
        assert all(m.is_zero() for m in minors_of_fields([k, z])), name


def test_transverse_engel_rejects_tangent_field():
    spec = family("hopf_s3r")
    flag = verify_engel(spec.d1, spec.d2, spec.space)
    forms = defining_forms(flag, spec.J, spec.space)
    with pytest.raises(PreconditionError, match="transverse"):
        transverse_engel_check(spec.d1, spec.d1, spec.d2, spec.J, forms,
                               spec.space)


def test_k_engel_pass_families():
    for name in ("hopf_s3r", "hyperelliptic_solv"):
        spec, forms, sf, w, x = _jofreeb(name)
        rep = k_engel_check(forms, w, x, spec.space)
        assert rep.passed, name
        assert all(c.kind == "SYMBOLIC" for c in rep.commutators.values())
        assert rep.dbeta_squared_zero
        assert rep.rescaling_solvable


def test_k_engel_fail_inoue_s0_with_obstruction():
    spec, forms, sf, w, x = _jofreeb("inoue_s0")
    rep = k_engel_check(forms, w, x, spec.space)
    assert not rep.passed
    assert rep.obstructions  # nonzero coefficients reported


def test_k_engel_pass_implies_transverse_consistency():
    for name in ("hopf_s3r", "hyperelliptic_solv"):
        spec, forms, sf, w, x = _jofreeb(name)
        rep = k_engel_check(forms, w, x, spec.space)
        assert rep.passed
        tr = transverse_engel_check(forms.R.raw, spec.d1, spec.d2, spec.J,
                                    forms, spec.space)
        assert tr.conclusion.passed and tr.reeb_match.passed


def test_beta_annihilates_distribution_on_all_families():
    from engelcalc.catalog import FAMILIES

    for name in FAMILIES:
        spec = family(name)
        flag = verify_engel(spec.d1, spec.d2, spec.space)
        forms = defining_forms(flag, spec.J, spec.space)
        for v in (spec.d1, spec.d2):
            assert forms.beta(v).is_zero(), name
            assert forms.alpha(v).is_zero(), name


def test_totally_real_oscillating_variant_passes():
    # D = <V, JV + (1/n) cos(n^2 t) X + (1/n) sin(n^2 t) JX> with n = 3
    from engelcalc.geiges import build_An, flat_torus_input

    inp = flat_torus_input()
    d1, d2 = build_An(inp, 3, "totally_real")
    cert = totally_real_check(d1, d2, inp.J, inp.space)
    assert cert.passed
    assert not j_invariance_check(d1, d2, inp.J, inp.space).passed


def test_frac_bracket_matches_plain_bracket():
    from engelcalc.engelcheck import FracField

    spec = family("kodaira_primary")
    u = FracField(spec.d1)
    v = FracField(spec.d2)
    assert frac_bracket(u, v, spec.space).raw == bracket(spec.d1, spec.d2,
                                                         spec.space)
