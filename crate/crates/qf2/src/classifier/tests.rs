use super::*;
use crate::field::{parse_element, parse_tower, Tower};
use crate::quadform::QuadForm;
use crate::verdict::Answer;

fn t(s: &str) -> Tower {
    parse_tower(s).unwrap()
}

fn form(tw: &Tower, s: &str) -> QuadForm {
    QuadForm::parse(tw, s).unwrap()
}

fn opts() -> IsotropyOptions {
    IsotropyOptions::default()
}

/// The running non-neighbor φ over F2(w,x,y,z).
fn phi_wxyz(tw: &Tower) -> QuadForm {
    form(tw, "w*[1,x] + <1,y,z>")
}

#[test]
fn preconditions_enforced() {
    let tw = t("F2(w,x,y,z)");
    let phi = phi_wxyz(&tw);
    // wrong type
    let bad = form(&tw, "[1,x] + [1,y] + <1>");
    assert!(matches!(
        classify(&bad, &form(&tw, "<1,y>")),
        Err(ClassifierError::PreconditionFailed(_))
    ));
    // Pfister neighbor rejected
    let neighbor = form(&tw, "[1,x] + <1,y,z>");
    assert!(matches!(
        classify(&neighbor, &form(&tw, "<1,y>")),
        Err(ClassifierError::PreconditionFailed(_))
    ));
    // isotropic ψ rejected
    assert!(matches!(
        classify(&phi, &form(&tw, "<1,y,1+y>")),
        Err(ClassifierError::PreconditionFailed(_))
    ));
}

#[test]
fn no_go_branches() {
    let tw = t("F2(w,x,y,z)");
    let phi = phi_wxyz(&tw);
    // (0,1)
    let r = classify(&phi, &form(&tw, "<y>")).unwrap();
    assert_eq!(r.verdict.answer, Answer::No);
    assert_eq!(r.branch, Branch::Anisotropy(1));
    // (3,0): ⟨y,z,w⟩-scaled copies of [1,x] stay anisotropic
    let psi = form(&tw, "y*[1,x] + z*[1,x] + w*[1,x]");
    let r = classify(&phi, &psi).unwrap();
    assert_eq!(r.verdict.answer, Answer::No);
    assert_eq!(r.branch, Branch::Anisotropy(6));
    // (2,1)
    let psi = form(&tw, "y*[1,x] + z*[1,x] + <w>");
    let r = classify(&phi, &psi).unwrap();
    assert_eq!(r.verdict.answer, Answer::No);
    assert_eq!(r.branch, Branch::Anisotropy(5));
    // (1,4)
    let psi = form(&tw, "z*[1,x] + <1,w,y,w*y>");
    let r = classify(&phi, &psi).unwrap();
    assert_eq!(r.verdict.answer, Answer::No);
    assert_eq!(r.branch, Branch::Anisotropy(3));
    // (0,5)
    let psi = form(&tw, "<1,w,x,y,z>");
    let r = classify(&phi, &psi).unwrap();
    assert_eq!(r.verdict.answer, Answer::No);
    assert_eq!(r.branch, Branch::Anisotropy(2));
    // (2,0) with nonzero Arf: arf = x + (x+z) = z ∉ ℘
    let psi = form(&tw, "w*[1,x] + y*[1,x+z]");
    let r = classify(&phi, &psi).unwrap();
    assert_eq!(r.verdict.answer, Answer::No);
    assert_eq!(r.branch, Branch::Anisotropy(4));
}

#[test]
fn lemma_branch_anchored() {
    let tw = t("F2(w,x,y,z)");
    let phi = phi_wxyz(&tw);
    // ⟨1,y⟩ ≺ φ explicitly: yes with a verified weak-domination witness
    let psi = form(&tw, "<1,y>");
    let r = classify(&phi, &psi).unwrap();
    assert_eq!(r.verdict.answer, Answer::Yes);
    assert_eq!(r.branch, Branch::Lemma);
    let w = r.witness.as_ref().expect("witness");
    assert_eq!(verify_witness(&phi, &psi, w, &opts()).answer, Answer::Yes);
    // ⟨1, x⟩: φ stays anisotropic over F(√x) (the Artin-Schreier slot is
    // not a represented value pattern)
    let psi = form(&tw, "<1,x>");
    let r = classify(&phi, &psi).unwrap();
    assert_eq!(r.verdict.answer, Answer::No);
    assert_eq!(r.branch, Branch::Lemma);
}

#[test]
fn similarity_branch_anchored() {
    let tw = t("F2(w,x,y,z)");
    let phi = phi_wxyz(&tw);
    // ψ = z·φ: similar
    let psi = phi.scale_by(&parse_element(&tw, "z").unwrap());
    let r = classify(&phi, &psi).unwrap();
    assert_eq!(r.verdict.answer, Answer::Yes);
    assert_eq!(r.branch, Branch::Criterion(3));
    let w = r.witness.as_ref().unwrap();
    assert_eq!(verify_witness(&phi, &psi, w, &opts()).answer, Answer::Yes);
    // a non-similar (1,3) form: different quasilinear norm field
    let psi = form(&tw, "w*[1,x] + <1,y,x>");
    let r = classify(&phi, &psi).unwrap();
    assert_eq!(r.verdict.answer, Answer::No);
    assert_eq!(r.branch, Branch::Criterion(3));
}

#[test]
fn eq1_branch_positive_engineered() {
    // φ = pu[1,u+v] ⊥ ⟨1,u,v⟩ and ψ = p[1,u+v] ⊥ ⟨1⟩ realize the eq-(1)
    // data with π = ⟨⟨p,u; u+v]] and (k,l) = (u+v, 0)
    let tw = t("F2(p,u,v)");
    let phi = form(&tw, "p*u*[1,u+v] + <1,u,v>");
    let psi = form(&tw, "p*[1,u+v] + <1>");
    let r = classify(&phi, &psi).unwrap();
    assert_eq!(r.verdict.answer, Answer::Yes, "transcript: {:?}", r.transcript);
    assert_eq!(r.branch, Branch::Criterion(1));
    let w = r.witness.as_ref().unwrap();
    assert_eq!(verify_witness(&phi, &psi, w, &opts()).answer, Answer::Yes);
}

#[test]
fn eq1_branch_claim1_negative() {
    // ql(ψ) = ⟨1, z⟩ is not similar to a subform of ql(φ) = ⟨1,u,v⟩ when z
    // is independent of u, v
    let tw = t("F2(p,u,v,z)");
    let phi = form(&tw, "p*u*[1,u+v] + <1,u,v>");
    let psi = form(&tw, "p*[1,u+v] + <1,z>");
    let r = classify(&phi, &psi).unwrap();
    assert_eq!(r.verdict.answer, Answer::No, "transcript: {:?}", r.transcript);
    assert_eq!(r.branch, Branch::Criterion(1));
}

#[test]
fn branch_04_positive_engineered() {
    // φ = uw[1,x] ⊥ ⟨1,u,v⟩, ψ = ⟨1,u,w⟩: witness with k=l=m matched slots
    // and π = ⟨⟨u,w; x]]
    let tw = t("F2(u,v,w,x)");
    let phi = form(&tw, "u*w*[1,x] + <1,u,v>");
    let psi = form(&tw, "<1,u,w>");
    let r = classify(&phi, &psi).unwrap();
    assert_eq!(r.verdict.answer, Answer::Yes, "transcript: {:?}", r.transcript);
    assert_eq!(r.branch, Branch::Criterion(4));
    let w = r.witness.as_ref().unwrap();
    assert_eq!(verify_witness(&phi, &psi, w, &opts()).answer, Answer::Yes);
}

#[test]
fn branch_03_negative_certified() {
    // ψ = ⟨1,y,x⟩ against φ = w[1,x] ⊥ ⟨1,y,z⟩: the norm form of [x,w)
    // stays anisotropic over F(√y,√z)(ψ), certifying anisotropy
    let tw = t("F2(w,x,y,z)");
    let phi = phi_wxyz(&tw);
    let psi = form(&tw, "<1,y,x>");
    let r = classify(&phi, &psi).unwrap();
    assert_eq!(r.verdict.answer, Answer::No, "transcript: {:?}", r.transcript);
    assert_eq!(r.branch, Branch::Criterion(4));
}

#[test]
fn branch_03_positive_dominated() {
    // ψ = ⟨1,y,w⟩ is literally dominated by φ = w[1,x] ⊥ ⟨1,y,z⟩ (the block
    // corner represents w), so φ is isotropic over F(ψ); the witness search
    // finds (φ', π) with π hyperbolic-equivalent data
    let tw = t("F2(w,x,y,z)");
    let phi = phi_wxyz(&tw);
    let psi = form(&tw, "<1,y,w>");
    let r = classify(&phi, &psi).unwrap();
    assert_eq!(r.verdict.answer, Answer::Yes, "transcript: {:?}", r.transcript);
    let w = r.witness.as_ref().unwrap();
    assert_eq!(verify_witness(&phi, &psi, w, &opts()).answer, Answer::Yes);
    // the oracle confirms through the generic point
    let (v, _) = oracle_isotropy_over_function_field(&phi, &psi, 2).unwrap();
    assert_eq!(v.answer, Answer::Yes);
}

#[test]
fn branch_03_case_a_similar() {
    // ψ similar to ql(φ): φ' = φ and π hyperbolic
    let tw = t("F2(w,x,y,z)");
    let phi = phi_wxyz(&tw);
    let psi = form(&tw, "<1,y,z>");
    let r = classify(&phi, &psi).unwrap();
    assert_eq!(r.verdict.answer, Answer::Yes, "transcript: {:?}", r.transcript);
    assert_eq!(r.branch, Branch::Criterion(4));
    let w = r.witness.as_ref().unwrap();
    assert_eq!(verify_witness(&phi, &psi, w, &opts()).answer, Answer::Yes);
}

#[test]
fn tampered_witness_rejected() {
    let tw = t("F2(w,x,y,z)");
    let phi = phi_wxyz(&tw);
    let psi = form(&tw, "<1,y,z>");
    let r = classify(&phi, &psi).unwrap();
    let Some(Witness::PhiPrimePi { scalar, phi_prime, phi_weak_scalar, pi_weak_scalar, .. }) =
        r.witness
    else {
        panic!("expected a (φ',π) witness");
    };
    // replace π by a non-GP₃ form
    let fake_pi = form(&tw, "[1,x] + [1,y] + [1,z] + [1,w]");
    let tampered = Witness::PhiPrimePi {
        scalar,
        phi_prime,
        pi: fake_pi,
        phi_weak_scalar,
        pi_weak_scalar,
    };
    assert_eq!(verify_witness(&phi, &psi, &tampered, &opts()).answer, Answer::No);
}

#[test]
fn reduction_branch_two_zero() {
    // ψ of type (2,0) with trivial Arf reduces to a (1,1) neighbor; use a
    // ψ similar to ⟨⟨p; u+v]] so the reduced case is the engineered positive
    let tw = t("F2(p,u,v)");
    let phi = form(&tw, "p*u*[1,u+v] + <1,u,v>");
    // ψ = u·(⟨⟨p; u+v]]) = u[1,u+v] ⊥ up[1,u+v]: arf = (u+v) + (u+v) = 0
    let psi = form(&tw, "u*[1,u+v] + u*p*[1,u+v]");
    let r = classify(&phi, &psi).unwrap();
    assert_eq!(r.branch, Branch::Criterion(2));
    let Some(Witness::Reduction { target, inner }) = &r.witness else {
        panic!("expected a reduction witness; transcript {:?}", r.transcript);
    };
    assert_eq!(target.type_rs(), (1, 1));
    // coherence: the reduced classification matches the wrapped verdict
    let direct = classify(&phi, target).unwrap();
    assert_eq!(direct.verdict.answer, inner.verdict.answer);
    assert_eq!(r.verdict.answer, direct.verdict.answer);
}

#[test]
fn reduction_branch_04_ndeg4() {
    let tw = t("F2(u,v,w,x)");
    let phi = form(&tw, "u*w*[1,x] + <1,u,v>");
    // ψ of type (0,4) with norm degree 4: ⟨1,u,w,uw⟩
    let psi = form(&tw, "<1,u,w,u*w>");
    let r = classify(&phi, &psi).unwrap();
    assert_eq!(r.branch, Branch::Criterion(5));
    let Some(Witness::Reduction { target, inner }) = &r.witness else {
        panic!("expected a reduction witness");
    };
    let direct = classify(&phi, target).unwrap();
    assert_eq!(direct.verdict.answer, inner.verdict.answer);
    assert_eq!(r.verdict.answer, direct.verdict.answer);
}

#[test]
fn oracle_consistency_on_decided_cases() {
    let tw = t("F2(w,x,y,z)");
    let phi = phi_wxyz(&tw);
    // lemma-positive: the oracle finds a certificate
    let psi = form(&tw, "<1,y>");
    let (v, _) = oracle_isotropy_over_function_field(&phi, &psi, 2).unwrap();
    assert_eq!(v.answer, Answer::Yes);
    // no-go branch: the oracle must never contradict with a certificate
    let psi = form(&tw, "<1,w,x,y,z>");
    let (v, _) = oracle_isotropy_over_function_field(&phi, &psi, 2).unwrap();
    assert_ne!(v.answer, Answer::Yes);
}
