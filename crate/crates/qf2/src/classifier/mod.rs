//! The classification engine: given anisotropic φ of type (1,3) that is not
//! a Pfister neighbor, and anisotropic ψ, decide whether φ becomes isotropic
//! over F(ψ), producing structural witnesses that re-verify independently.
//!
//! The dispatch follows the case list: the no-go types return certified No;
//! type (0,2) reduces to isotropy over F(√d); types (1,1)/(1,2) and
//! (0,3)/(0,4) run constructive witness searches assembling a GP₃ form from
//! quaternion data; type (1,3) is similarity; (2,0) with trivial Arf and
//! (0,4) with norm degree 4 reduce to smaller cases.

mod oracle;
#[cfg(test)]
mod tests;
mod witness;

pub use oracle::oracle_isotropy_over_function_field;
pub use witness::{verify_witness, witness_search_03, witness_search_11_12};

use crate::algebra::{self};
use crate::field::El;
use crate::pfister::{self, PfisterError};
use crate::quadform::{
    dominates_with, isotropy_with, norm_degree, similar_check_with, weakly_dominates_with,
    FormError, IsotropyOptions, QuadForm,
};
use crate::verdict::{Answer, Certificate, Verdict};
use thiserror::Error;

#[derive(Error, Debug, Clone)]
pub enum ClassifierError {
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("malformed witness: {0}")]
    MalformedWitness(String),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Pfister(#[from] PfisterError),
}

/// Which clause decided the classification.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Branch {
    /// Prop-style no-go clauses, numbered 1..=6.
    Anisotropy(u8),
    /// Criterion clauses, numbered 1..=5.
    Criterion(u8),
    /// The type-(0,2) clause.
    Lemma,
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Branch::Anisotropy(n) => write!(f, "1.1({n})"),
            Branch::Criterion(n) => write!(f, "1.2({n})"),
            Branch::Lemma => write!(f, "lemma"),
        }
    }
}

pub fn parse_branch(s: &str) -> Option<Branch> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("lemma") {
        return Some(Branch::Lemma);
    }
    let (fam, num) = s.split_once('(')?;
    let num: u8 = num.strip_suffix(')')?.parse().ok()?;
    match fam {
        "1.1" => (1..=6).contains(&num).then_some(Branch::Anisotropy(num)),
        "1.2" => (1..=5).contains(&num).then_some(Branch::Criterion(num)),
        _ => None,
    }
}

/// A structural witness for a positive classification.
#[derive(Clone, Debug)]
pub enum Witness {
    /// Branch (3): φ ≅ c·ψ.
    Similarity { scalar: El },
    /// Lemma branch: the two orthogonal vectors realizing αψ ≺ φ.
    WeakDomination { alpha: El, columns: Vec<Vec<El>> },
    /// Branch (1): the data of R₁ ⊥ R₂ ⊥ ρ ∼ π.
    Eq1 {
        alpha: El,
        beta: El,
        r1: QuadForm,
        r2: QuadForm,
        u: El,
        v: El,
        k: El,
        l: El,
        rho: QuadForm,
        pi: QuadForm,
        psi_weak_scalar: El,
    },
    /// Branch (4): φ ∼ φ' ⊥ π with ψ weakly dominated by both.
    PhiPrimePi {
        scalar: El,
        phi_prime: QuadForm,
        pi: QuadForm,
        phi_weak_scalar: El,
        pi_weak_scalar: El,
    },
    /// Branches (2) and (5): reduction to a smaller ψ'.
    Reduction { target: QuadForm, inner: Box<ClassificationResult> },
}

#[derive(Clone, Debug)]
pub struct ClassificationResult {
    pub verdict: Verdict,
    pub branch: Branch,
    pub witness: Option<Witness>,
    pub transcript: Vec<String>,
}

impl ClassificationResult {
    fn new(verdict: Verdict, branch: Branch) -> Self {
        ClassificationResult { verdict, branch, witness: None, transcript: Vec::new() }
    }

    fn with_note(mut self, s: impl Into<String>) -> Self {
        self.transcript.push(s.into());
        self
    }
}

pub fn classify(phi: &QuadForm, psi: &QuadForm) -> Result<ClassificationResult, ClassifierError> {
    classify_with(phi, psi, &IsotropyOptions::default())
}

pub fn classify_with(
    phi: &QuadForm,
    psi: &QuadForm,
    opts: &IsotropyOptions,
) -> Result<ClassificationResult, ClassifierError> {
    // φ must be anisotropic of type (1,3) and not a Pfister neighbor
    let nphi = phi.normalize();
    if (nphi.r, nphi.s, nphi.defect_slots) != (1, 3, 0) {
        return Err(ClassifierError::PreconditionFailed(format!(
            "φ must have type (1,3); found ({}, {}) with {} defect slots",
            nphi.r, nphi.s, nphi.defect_slots
        )));
    }
    match isotropy_with(phi, opts).answer {
        Answer::Yes => {
            return Err(ClassifierError::PreconditionFailed("φ is isotropic".to_string()))
        }
        Answer::No => {}
        Answer::Unknown => {
            return Ok(ClassificationResult::new(Verdict::unknown(), Branch::Criterion(3))
                .with_note("isotropy of φ undecided"))
        }
    }
    match pfister::pfister_neighbor_13_with(phi, opts) {
        Ok(v) => match v.answer {
            Answer::Yes => {
                return Err(ClassifierError::PreconditionFailed(
                    "φ is a Pfister neighbor; its isotropy over F(ψ) is governed by its ambient Pfister form"
                        .to_string(),
                ))
            }
            Answer::No => {}
            Answer::Unknown => {
                return Ok(ClassificationResult::new(Verdict::unknown(), Branch::Criterion(3))
                    .with_note("Pfister-neighbor test undecided"))
            }
        },
        Err(e) => return Err(ClassifierError::Pfister(e)),
    }
    match isotropy_with(psi, opts).answer {
        Answer::Yes => {
            return Err(ClassifierError::PreconditionFailed("ψ is isotropic".to_string()))
        }
        Answer::No => {}
        Answer::Unknown => {
            return Ok(ClassificationResult::new(Verdict::unknown(), Branch::Criterion(3))
                .with_note("isotropy of ψ undecided"))
        }
    }
    let npsi = psi.normalize();
    let (r, s) = (npsi.r, npsi.s);
    match (r, s) {
        (0, 1) => Ok(ClassificationResult::new(
            Verdict::no(Certificate::Note(
                "F(ψ) is degenerate for type (0,1); φ stays anisotropic".to_string(),
            )),
            Branch::Anisotropy(1),
        )),
        (0, 2) => lemma_branch(phi, psi, opts),
        (0, 3) => witness::witness_search_03(phi, psi, opts),
        (0, 4) => {
            let nd = norm_degree(&psi.ql())
                .map_err(|e| ClassifierError::Form(FormError::Lin(e)))?;
            if nd >= 8 {
                witness::witness_search_03(phi, psi, opts)
            } else {
                // norm degree 4: ψ and a 3-dimensional subform are neighbors
                // of the same quasi-Pfister form
                let coeffs = psi.ql().fold_scale().diag;
                let target = QuadForm::diagonal(&psi.tower, coeffs[..3].to_vec());
                let inner = classify_with(phi, &target, opts)?;
                let verdict = inner.verdict.clone();
                let mut res = ClassificationResult::new(verdict, Branch::Criterion(5));
                res.transcript.push(format!(
                    "norm degree 4: reduced to the subform {target}"
                ));
                res.transcript.extend(inner.transcript.iter().cloned());
                res.witness =
                    Some(Witness::Reduction { target, inner: Box::new(inner) });
                Ok(res)
            }
        }
        (0, _) => Ok(ClassificationResult::new(
            Verdict::no(Certificate::Note(
                "totally singular ψ of dimension ≥ 5 against a form of dimension 2²+1"
                    .to_string(),
            )),
            Branch::Anisotropy(2),
        )),
        (1, 0) => Ok(ClassificationResult::new(Verdict::unknown(), Branch::Criterion(1))
            .with_note("type (1,0) lies outside the classification")),
        (1, 1) | (1, 2) => witness::witness_search_11_12(phi, psi, opts),
        (1, 3) => {
            let v = similar_check_with(phi, psi, opts);
            let mut res = match v.answer {
                Answer::Yes => {
                    let scalar = match &v.certificate {
                        Some(Certificate::Scalar(c)) => c.clone(),
                        _ => psi.tower.one(),
                    };
                    let mut r =
                        ClassificationResult::new(v, Branch::Criterion(3));
                    r.witness = Some(Witness::Similarity { scalar });
                    r
                }
                Answer::No => ClassificationResult::new(
                    Verdict::no(Certificate::Note(
                        "φ is not similar to ψ".to_string(),
                    )),
                    Branch::Criterion(3),
                ),
                Answer::Unknown => {
                    ClassificationResult::new(Verdict::unknown(), Branch::Criterion(3))
                }
            };
            res.transcript.push("type (1,3): isotropy over F(ψ) is similarity".to_string());
            Ok(res)
        }
        (1, _) => Ok(ClassificationResult::new(
            Verdict::no(Certificate::Note(
                "ψ of type (1,s) with s ≥ 4 has dimension > 2²+1".to_string(),
            )),
            Branch::Anisotropy(3),
        )),
        (2, 0) => two_zero_branch(phi, psi, opts),
        (2, _) => Ok(ClassificationResult::new(
            Verdict::no(Certificate::Note(
                "ψ of type (2,s) with s ≥ 1: reduce to a (2,1) subform and the Arf case"
                    .to_string(),
            )),
            Branch::Anisotropy(5),
        )),
        _ => Ok(ClassificationResult::new(
            Verdict::no(Certificate::Note(
                "ψ with at least three binary blocks: reduce to a (2,1) subform".to_string(),
            )),
            Branch::Anisotropy(6),
        )),
    }
}

/// Type (0,2): φ isotropic over F(ψ) iff ψ ≼_w φ, decided through the
/// isotropy of φ over F(√d) for ψ ≅ c⟨1,d⟩.
fn lemma_branch(
    phi: &QuadForm,
    psi: &QuadForm,
    opts: &IsotropyOptions,
) -> Result<ClassificationResult, ClassifierError> {
    let coeffs = psi.ql().fold_scale().diag;
    let c1 = coeffs[0].clone();
    let d = coeffs[1].div_checked(&c1).map_err(FormError::Field)?;
    let ext = phi
        .tower
        .with_insep(&d)
        .map_err(|e| ClassifierError::Form(FormError::Field(e)))?;
    let gen = ext.var(ext.nvars() - 1);
    let lifted = phi.lift_append(&ext)?;
    let v = isotropy_with(&lifted, opts);
    match v.answer {
        Answer::No => {
            let mut res = ClassificationResult::new(
                Verdict::no(Certificate::Note(format!(
                    "φ stays anisotropic over F(√({d})), so ψ is not weakly dominated by φ"
                ))),
                Branch::Lemma,
            );
            res.transcript.push("type (0,2): isotropy over F(ψ) is weak domination".to_string());
            Ok(res)
        }
        Answer::Yes => {
            // split the F(√d)-vector into v0 + √d·v1 over F
            let mut res = ClassificationResult::new(
                Verdict::yes(Certificate::Note(format!("φ isotropic over F(√({d}))"))),
                Branch::Lemma,
            );
            if let Some(Certificate::Vector(w)) = &v.certificate {
                let gv = ext.nvars() - 1;
                let split = |e: &El| -> Result<(El, El), FormError> {
                    let n0 = e.num.coeff_of(gv, 0);
                    let n1 = e.num.coeff_of(gv, 1);
                    let a = crate::field::El::make(ext.clone(), n0, e.den.clone())
                        .map_err(FormError::Field)?;
                    let b = crate::field::El::make(ext.clone(), n1, e.den.clone())
                        .map_err(FormError::Field)?;
                    Ok((a, b))
                };
                let mut v0 = Vec::new();
                let mut v1 = Vec::new();
                for e in w {
                    debug_assert!(!e.den.involves(gv));
                    let (a, b) = split(e)?;
                    v0.push(a);
                    v1.push(b);
                }
                let _ = gen;
                // q(v0) = d·q(v1) and b(v0,v1) = 0; project to the base
                let q0 = lifted.eval(&v0);
                let q1 = lifted.eval(&v1);
                if q0 == &d.lift_append(&ext).map_err(FormError::Field)? * &q1
                    && lifted.polar(&v0, &v1).is_zero()
                    && !q1.is_zero()
                {
                    let proj = |col: &[El]| -> Result<Vec<El>, FormError> {
                        col.iter()
                            .map(|e| e.project_core().map_err(FormError::Field))
                            .collect()
                    };
                    let col1 = proj(&v1)?;
                    let col0 = proj(&v0)?;
                    let alpha = phi
                        .eval(&col1)
                        .div_checked(&c1)
                        .map_err(FormError::Field)?;
                    res.witness = Some(Witness::WeakDomination {
                        alpha,
                        columns: vec![col1, col0],
                    });
                }
            }
            if res.witness.is_none() {
                // fall back to the direct weak-domination search
                let wd = weakly_dominates_with(psi, phi, opts);
                if let (Answer::Yes, Some(Certificate::Scalar(a))) = (wd.answer, &wd.certificate)
                {
                    res.witness =
                        Some(Witness::WeakDomination { alpha: a.clone(), columns: Vec::new() });
                }
            }
            res.transcript.push("type (0,2): isotropy over F(ψ) is weak domination".to_string());
            Ok(res)
        }
        Answer::Unknown => {
            Ok(ClassificationResult::new(Verdict::unknown(), Branch::Lemma)
                .with_note("isotropy over F(√d) undecided"))
        }
    }
}

/// Type (2,0): nonzero Arf stays anisotropic; trivial Arf reduces to the
/// 3-dimensional Pfister neighbor of the similar 2-fold Pfister form.
fn two_zero_branch(
    phi: &QuadForm,
    psi: &QuadForm,
    opts: &IsotropyOptions,
) -> Result<ClassificationResult, ClassifierError> {
    let a = algebra::arf(psi).map_err(|e| ClassifierError::PreconditionFailed(e.to_string()))?;
    match a.is_zero().answer {
        Answer::No => Ok(ClassificationResult::new(
            Verdict::no(Certificate::Note("△(ψ) ≠ 0 certified outside ℘".to_string())),
            Branch::Anisotropy(4),
        )),
        Answer::Unknown => Ok(ClassificationResult::new(Verdict::unknown(), Branch::Criterion(2))
            .with_note("Arf membership undecided")),
        Answer::Yes => {
            // ψ/p ≅ ⟨⟨r/p; pq]] with the second slot shifted into the first
            // block's ℘-class; the 3-dimensional neighbor is [1,pq] ⊥ ⟨r/p⟩
            let f = psi.fold_scale();
            let (p, q) = f.blocks[0].clone();
            let (r, _s2) = f.blocks[1].clone();
            let pq = &p * &q;
            let beta = r.div_checked(&p).map_err(FormError::Field)?;
            let target = QuadForm {
                tower: psi.tower.clone(),
                blocks: vec![(psi.tower.one(), pq.clone())],
                diag: vec![beta.clone()],
                scale: psi.tower.one(),
            };
            // the reduction target is a Pfister neighbor of ψ/p
            let pi2 = psi.scale_by(&p.inv().map_err(FormError::Field)?);
            let dom = dominates_with(&target, &pi2, opts);
            let mut transcript = vec![format!(
                "△(ψ) = 0: ψ is similar to a 2-fold Pfister form; reduced to the neighbor {target}"
            )];
            if dom.answer != Answer::Yes {
                transcript.push("neighbor containment could not be verified".to_string());
                return Ok(ClassificationResult {
                    verdict: Verdict::unknown(),
                    branch: Branch::Criterion(2),
                    witness: None,
                    transcript,
                });
            }
            let inner = classify_with(phi, &target, opts)?;
            let verdict = inner.verdict.clone();
            transcript.extend(inner.transcript.iter().cloned());
            Ok(ClassificationResult {
                verdict,
                branch: Branch::Criterion(2),
                witness: Some(Witness::Reduction { target, inner: Box::new(inner) }),
                transcript,
            })
        }
    }
}

/// Re-check every relation a witness asserts; used by the acceptance sweep
/// and exposed through the CLI.
pub fn classification_self_check(
    phi: &QuadForm,
    psi: &QuadForm,
    result: &ClassificationResult,
    opts: &IsotropyOptions,
) -> Verdict {
    match (&result.verdict.answer, &result.witness) {
        (Answer::Yes, Some(w)) => witness::verify_witness(phi, psi, w, opts),
        (Answer::Yes, None) => Verdict::unknown(),
        _ => Verdict::bare(Answer::Yes),
    }
}


