use super::*;
use crate::field::{parse_element, parse_tower, Tower};
use crate::verdict::{Answer, Certificate};

fn t(s: &str) -> Tower {
    parse_tower(s).unwrap()
}

fn form(tw: &Tower, s: &str) -> QuadForm {
    QuadForm::parse(tw, s).unwrap()
}

fn el(tw: &Tower, s: &str) -> crate::field::El {
    parse_element(tw, s).unwrap()
}

#[test]
fn parse_print_roundtrip() {
    let tw = t("F2(t,u,v)");
    for s in ["t*[1,u] + <1,u,v>", "[1,t]", "<1,t,u,t*u>", "[0,0] + <0>", "(t+u)*[1,v]"] {
        let f = form(&tw, s);
        let f2 = form(&tw, &f.to_string());
        assert_eq!(f, f2, "roundtrip failed for {s}");
    }
}

#[test]
fn eval_matches_definition() {
    let tw = t("F2(t,u)");
    // t*[1,u] is realized as the block [t, u/t]
    let f = form(&tw, "t*[1,u] + <1,u>");
    assert_eq!(f.blocks, vec![(el(&tw, "t"), el(&tw, "u/t"))]);
    // q(x,y,z1,z2) = t x² + x y + (u/t) y² + z1² + u z2² at (1, t, u, 1)
    let v = vec![el(&tw, "1"), el(&tw, "t"), el(&tw, "u"), el(&tw, "1")];
    let direct = el(&tw, "t + t + u*t + u^2 + u");
    assert_eq!(f.eval(&v), direct);
}

#[test]
fn normalize_anchored() {
    let tw = t("F2(t)");
    // [1,t] ⊥ ⟨t,t⟩ → type (1,1) plus one ⟨0⟩
    let f = form(&tw, "[1,t] + <t,t>");
    let n = f.normalize();
    assert_eq!((n.r, n.s, n.defect_slots), (1, 1, 1));
    // ⟨1,1,t⟩ → ⟨1,t⟩ ⊥ ⟨0⟩
    let f = form(&tw, "<1,1,t>");
    let n = f.normalize();
    assert_eq!((n.r, n.s, n.defect_slots), (0, 2, 1));
    // [0,0] → type (1,0)
    let f = form(&tw, "[0,0]");
    let n = f.normalize();
    assert_eq!((n.r, n.s, n.defect_slots), (1, 0, 0));
}

fn assert_yes_with_vector(f: &QuadForm, v: &Verdict) {
    assert_eq!(v.answer, Answer::Yes, "expected yes for {f}");
    match &v.certificate {
        Some(Certificate::Vector(vec)) => assert!(f.verify_isotropic_vector(vec)),
        other => panic!("expected vector certificate, got {other:?}"),
    }
}

#[test]
fn isotropy_anchored() {
    let tw = t("F2(t,u)");
    // ⟨1,t,u,tu⟩ → No; oracle: monomial search to degree 4 finds nothing
    let f = form(&tw, "<1,t,u,t*u>");
    assert_eq!(isotropy(&f).answer, Answer::No);
    assert!(search_monomial_vectors(&f, 4, 1 << 21).is_none());
    // ⟨1,t,u,t+u⟩ → Yes with vector (0,1,1,1)
    let f = form(&tw, "<1,t,u,t+u>");
    let v = isotropy(&f);
    assert_yes_with_vector(&f, &v);
    // [1,1] over F2 → No
    let f2 = t("F2");
    let f = form(&f2, "[1,1]");
    assert_eq!(isotropy(&f).answer, Answer::No);
    // [1,1] over F4 is isotropic (trace of 1 vanishes)
    let f4 = t("F2^2");
    let f = form(&f4, "[1,1]");
    assert_yes_with_vector(&f, &isotropy(&f));
}

#[test]
fn isotropy_binary_wp() {
    let tw = t("F2(t)");
    assert_eq!(isotropy(&form(&tw, "[1,t]")).answer, Answer::No);
    let f = form(&tw, "[1,t^2+t]");
    assert_yes_with_vector(&f, &isotropy(&f));
    // [u, v·t²] over F(t): anisotropic over the rationals though isotropic
    // over the completion; the engine must not claim isotropy
    let f = form(&tw, "[1,t^2]");
    assert_eq!(isotropy(&f).answer, Answer::No);
}

#[test]
fn isotropy_residue_recursion() {
    // the Albert form t[1,x] ⊥ v[1,u] ⊥ [1,x+u]: anisotropic by the odd-odd
    // residue split at t, then v, with ℘-leaves
    let tw = t("F2(t,u,v,x)");
    let f = form(&tw, "t*[1,x] + v*[1,u] + [1,x+u]");
    let verdict = isotropy(&f);
    assert_eq!(verdict.answer, Answer::No);
    assert!(matches!(verdict.certificate, Some(Certificate::Trace(_))));
    // norm form of [x,w): [1,x] ⊥ w[1,x] over F2(w,x)
    let tw = t("F2(w,x)");
    let f = form(&tw, "[1,x] + w*[1,x]");
    assert_eq!(isotropy(&f).answer, Answer::No);
    // and its isotropic cousin [1,x] ⊥ [1,x]
    let f = form(&tw, "[1,x] + [1,x]");
    assert_yes_with_vector(&f, &isotropy(&f));
}

#[test]
fn isotropy_mixed_split() {
    let tw = t("F2(t,u)");
    // [1,t] ⊥ ⟨u⟩: first residue [1,t] at u... anisotropic
    let f = form(&tw, "[1,t] + <u>");
    assert_eq!(isotropy(&f).answer, Answer::No);
    // [1,t] ⊥ ⟨1⟩ is isotropic: 1 is represented by the block
    let f = form(&tw, "[1,t] + <1>");
    assert_yes_with_vector(&f, &isotropy(&f));
}

#[test]
fn witt_anchored() {
    let tw = t("F2(t)");
    // q ⊥ q for q = [1,t]: i_W = 2, empty anisotropic part
    let f = form(&tw, "[1,t] + [1,t]");
    let w = witt_decompose(&f).unwrap();
    assert_eq!((w.i_w, w.i_d, w.an_part.dim()), (2, 0, 0));
    // ⟨1,1,t⟩ → i_d = 1, an = ⟨1,t⟩
    let f = form(&tw, "<1,1,t>");
    let w = witt_decompose(&f).unwrap();
    assert_eq!((w.i_w, w.i_d), (0, 1));
    assert!(ts_isometric(&w.an_part, &form(&tw, "<1,t>")).unwrap());
    // [1,t] ⊥ [1,t] ⊥ ⟨1,t⟩ → i_W = 2, an = ⟨1,t⟩
    let f = form(&tw, "[1,t] + [1,t] + <1,t>");
    let w = witt_decompose(&f).unwrap();
    assert_eq!((w.i_w, w.i_d), (2, 0));
    assert!(ts_isometric(&w.an_part, &form(&tw, "<1,t>")).unwrap());
}

#[test]
fn witt_pairs_verify() {
    let tw = t("F2(t,u)");
    let f = form(&tw, "[1,t] + [1,t] + <1,u>");
    let w = witt_decompose(&f).unwrap();
    assert_eq!(w.i_w, 2);
    for (v, u) in &w.pairs {
        assert!(f.eval(v).is_zero());
        assert!(f.polar(v, u).is_one());
    }
}

#[test]
fn isometry_anchored() {
    let tw = t("F2(t)");
    let f = form(&tw, "[1,t] + <1,t>");
    assert_eq!(isometric_check(&f, &f).answer, Answer::Yes);
    let f2 = t("F2");
    assert_eq!(
        isometric_check(&form(&f2, "[1,1]"), &form(&f2, "[0,0]")).answer,
        Answer::No
    );
    // [1,t]⊥⟨1⟩ ≅ [1,t+1]⊥⟨1⟩ (both isotropic with anisotropic part ⟨1⟩)
    let a = form(&tw, "[1,t] + <1>");
    let b = form(&tw, "[1,t+1] + <1>");
    let v = isometric_check(&a, &b);
    assert_eq!(v.answer, Answer::Yes);
    // oracle: substitution search with entries of degree ≤ 1 confirms
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    let found = random_isometry_search(&a, &b, 1 << 20, &mut rng);
    assert!(found.is_some(), "substitution oracle should find an isometry");
    // a negative: [1,t]⊥⟨1⟩ vs [1,t]⊥⟨t⟩
    let c = form(&tw, "[1,t] + <t>");
    assert_eq!(isometric_check(&a, &c).answer, Answer::No);
}

#[test]
fn similarity_anchored() {
    let tw = t("F2(t,u,v)");
    let f = form(&tw, "u*[1,t] + <1,u,v>");
    let g = f.scale_by(&el(&tw, "t"));
    let verdict = similar_check(&f, &g);
    assert_eq!(verdict.answer, Answer::Yes);
    // ⟨1,t⟩ vs ⟨u,tu⟩ similar with c = 1/u
    let a = form(&tw, "<1,t>");
    let b = form(&tw, "<u,t*u>");
    assert_eq!(similar_check(&a, &b).answer, Answer::Yes);
    // ⟨1,t,u⟩ vs ⟨1,t,v⟩ → No (norm fields differ)
    let a = form(&tw, "<1,t,u>");
    let b = form(&tw, "<1,t,v>");
    assert_eq!(similar_check(&a, &b).answer, Answer::No);
}

#[test]
fn dominates_anchored() {
    let tw = t("F2(t,u)");
    // explicit subform
    let psi = form(&tw, "<1,t>");
    let phi = form(&tw, "[t,u] + <1,t>");
    assert_eq!(dominates(&psi, &phi).answer, Answer::Yes);
    // ⟨c⟩ ≼ [c,d]
    let psi = form(&tw, "<t>");
    let phi = form(&tw, "[t,u]");
    assert_eq!(dominates(&psi, &phi).answer, Answer::Yes);
    // ⟨1,u⟩ ⋠ ⟨1,t⟩... dimension blocks it; use ⟨1,u⟩ vs ⟨1,t,t²u… ⟩
    let psi = form(&tw, "<1,u>");
    let phi = form(&tw, "<1,t>");
    assert_eq!(dominates(&psi, &phi).answer, Answer::No);
    let phi = form(&tw, "<1,t,t*u>");
    assert_eq!(dominates(&psi, &phi).answer, Answer::No);
    // any totally singular form of dim ≤ 2 embeds into 2×[0,0]
    let psi = form(&tw, "<t,u>");
    let phi = form(&tw, "[0,0] + [0,0]");
    assert_eq!(dominates(&psi, &phi).answer, Answer::Yes);
}

#[test]
fn weak_domination_scalar() {
    let tw = t("F2(t,u)");
    // u·⟨1,t⟩ = ⟨u,tu⟩ ≼ [u,1] ⊥ ⟨t*u⟩
    let psi = form(&tw, "<1,t>");
    let phi = form(&tw, "[u,1] + <t*u>");
    let v = weakly_dominates(&psi, &phi);
    assert_eq!(v.answer, Answer::Yes);
}

#[test]
fn represents_anchored() {
    let tw = t("F2(t,u)");
    let f = form(&tw, "<1,t>");
    let v = represents(&f, &el(&tw, "1+t"));
    assert_eq!(v.answer, Answer::Yes);
    // [1,1] over F2 represents 0 nontrivially → No
    let f2 = t("F2");
    assert_eq!(represents(&form(&f2, "[1,1]"), &f2.zero()).answer, Answer::No);
    // ⟨1,t⟩ represents u → No
    assert_eq!(represents(&f, &el(&tw, "u")).answer, Answer::No);
}

#[test]
fn completion_anchored() {
    let tw = t("F2(t)");
    let sigma = form(&tw, "<1>");
    let rho = nonsingular_completion(&sigma, &[tw.zero()]).unwrap();
    assert_eq!(rho, form(&tw, "[1,0]"));
    assert!(matches!(
        nonsingular_completion(&sigma, &[tw.zero(), tw.one()]),
        Err(FormError::LengthMismatch)
    ));
    // ρ ⊥ σ ∼ σ
    let sigma = form(&tw, "<1,t>");
    let rho = nonsingular_completion(&sigma, &[el(&tw, "t"), el(&tw, "1+t")]).unwrap();
    let v = witt_equivalent(&rho.orth_sum(&sigma), &sigma, &IsotropyOptions::default());
    assert_eq!(v.answer, Answer::Yes);
}

#[test]
fn function_field_anchored() {
    let tw = t("F2(t,u)");
    // ψ = ⟨1,d⟩ → F(√d)
    let psi = form(&tw, "<1,t>");
    let ff = function_field(&psi).unwrap();
    assert_eq!(ff.tower.generator_vars().len(), 1);
    let lifted = psi.lift_append(&ff.tower).unwrap();
    assert!(lifted.eval(&ff.generic_point).is_zero());
    // ψ = [a,b] anisotropic → separable layer
    let psi = form(&tw, "[1,t]");
    let ff = function_field(&psi).unwrap();
    let lifted = psi.lift_append(&ff.tower).unwrap();
    assert!(lifted.eval(&ff.generic_point).is_zero());
    // ψ = ⟨1,t,u⟩ → inseparable layer over two rational variables
    let psi = form(&tw, "<1,t,u>");
    let ff = function_field(&psi).unwrap();
    let lifted = psi.lift_append(&ff.tower).unwrap();
    assert!(lifted.eval(&ff.generic_point).is_zero());
    // reducible cases rejected
    assert!(matches!(
        function_field(&form(&tw, "<t>")),
        Err(FormError::ReduciblePolynomial)
    ));
    assert!(matches!(
        function_field(&form(&tw, "[0,0]")),
        Err(FormError::ReduciblePolynomial)
    ));
}

#[test]
fn function_field_isotropic_is_rational() {
    let tw = t("F2(t)");
    let psi = form(&tw, "[0,0] + <1,t>");
    let ff = function_field(&psi).unwrap();
    assert!(ff.tower.is_rational_tower());
    let lifted = psi.lift_append(&ff.tower).unwrap();
    assert!(lifted.eval(&ff.generic_point).is_zero());
}

#[test]
fn norm_degree_wrappers() {
    let tw = t("F2(t,u)");
    assert_eq!(norm_degree(&form(&tw, "<1,t,u,t*u>")).unwrap(), 4);
    assert!(norm_degree(&form(&tw, "<1,t,t+1>")).is_err());
}

#[test]
fn schwarz_inequality_holds() {
    // ν(b_q(x,y)²) ≥ ν(q(x)) + ν(q(y)), at the variable of a successful
    // residue split (the split certifies anisotropy over the corresponding
    // complete field, which is the inequality's hypothesis)
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    let cases = [
        ("F2(u,t)", "[1,u] + <t>", "t"),
        ("F2(t,u,v,x)", "t*[1,x] + v*[1,u] + [1,x+u]", "v"),
    ];
    for (tower_s, form_s, var) in cases {
        let tw = t(tower_s);
        let f = form(&tw, form_s);
        assert_eq!(isotropy(&f).answer, Answer::No);
        let tv = tw.var_index(var).unwrap();
        for _ in 0..50 {
            let x: Vec<_> = (0..f.dim())
                .map(|_| crate::field::tests::rand_light_el(&mut rng, &tw, 2, 2))
                .collect();
            let y: Vec<_> = (0..f.dim())
                .map(|_| crate::field::tests::rand_light_el(&mut rng, &tw, 2, 2))
                .collect();
            let b = f.polar(&x, &y);
            let qx = f.eval(&x);
            let qy = f.eval(&y);
            let lhs = b.square().valuation(tv).unwrap();
            let rhs = match (qx.valuation(tv).unwrap(), qy.valuation(tv).unwrap()) {
                (crate::field::Val::Finite(a), crate::field::Val::Finite(b)) => {
                    crate::field::Val::Finite(a + b)
                }
                _ => crate::field::Val::Infinity,
            };
            assert!(lhs >= rhs, "Schwarz inequality failed for {form_s} at {var}");
        }
    }
}
