//! Quadratic forms in characteristic 2: binary blocks [a,b] given by
//! (x,y) ↦ ax² + xy + by², a diagonal (quasilinear) part ⟨c₁,…,c_s⟩, and a
//! global scale. Coordinates are ordered block by block, then the diagonal.

mod function_field;
mod isotropy;
mod parse;
mod relations;
#[cfg(test)]
mod tests;
mod witt;

pub use function_field::{
    function_field, function_field_with, isotropy_over_function_field, FunctionField,
};
pub use isotropy::{
    default_degree_bound, isotropy, isotropy_with, search_monomial_vectors, IsotropyOptions,
};
pub use relations::{
    dominates, dominates_with, isometric_check, isometric_check_with, nonsingular_completion,
    random_isometry_search, represents, represents_with, similar_check, similar_check_with,
    similarity_candidates, weakly_dominates, weakly_dominates_with, witt_equivalent,
};
pub use witt::{witt_decompose, witt_decompose_with, WittData};

use crate::f2linear;
use crate::field::{El, FieldError, RationalRewrite, Tower};
use crate::verdict::Verdict;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("coefficient length mismatch")]
    LengthMismatch,
    #[error("isotropy could not be decided")]
    UnknownIsotropy,
    #[error("the quadric polynomial is reducible")]
    ReduciblePolynomial,
    #[error("form is defined over a different tower")]
    TowerMismatch,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Lin(#[from] crate::f2linear::LinError),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

#[derive(Clone, PartialEq, Eq)]
pub struct QuadForm {
    pub tower: Tower,
    pub blocks: Vec<(El, El)>,
    pub diag: Vec<El>,
    pub scale: El,
}

impl std::fmt::Debug for QuadForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "QuadForm({self})")
    }
}

impl std::fmt::Display for QuadForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", parse::format_form(self))
    }
}

impl QuadForm {
    pub fn new(tower: &Tower, blocks: Vec<(El, El)>, diag: Vec<El>) -> QuadForm {
        QuadForm { tower: tower.clone(), blocks, diag, scale: tower.one() }
    }

    pub fn zero_form(tower: &Tower) -> QuadForm {
        QuadForm::new(tower, Vec::new(), Vec::new())
    }

    pub fn diagonal(tower: &Tower, coeffs: Vec<El>) -> QuadForm {
        QuadForm::new(tower, Vec::new(), coeffs)
    }

    pub fn hyperbolic_plane(tower: &Tower) -> QuadForm {
        QuadForm::new(tower, vec![(tower.zero(), tower.zero())], Vec::new())
    }

    /// The scaled binary block a·[1,b] = [a, b/a].
    pub fn scaled_block(tower: &Tower, a: &El, b: &El) -> Result<QuadForm, FormError> {
        Ok(QuadForm::new(tower, vec![(a.clone(), b.div_checked(a)?)], Vec::new()))
    }

    pub fn dim(&self) -> usize {
        2 * self.blocks.len() + self.diag.len()
    }

    pub fn parse(tower: &Tower, s: &str) -> Result<QuadForm, FormError> {
        parse::parse_form(tower, s)
    }

    /// Fold the global scale into the entries.
    pub fn fold_scale(&self) -> QuadForm {
        if self.scale.is_one() {
            return self.clone();
        }
        let s = &self.scale;
        QuadForm {
            tower: self.tower.clone(),
            blocks: self
                .blocks
                .iter()
                .map(|(a, b)| (a * s, b.div_checked(s).expect("scale nonzero")))
                .collect(),
            diag: self.diag.iter().map(|c| c * s).collect(),
            scale: self.tower.one(),
        }
    }

    pub fn scale_by(&self, c: &El) -> QuadForm {
        QuadForm {
            tower: self.tower.clone(),
            blocks: self.blocks.clone(),
            diag: self.diag.clone(),
            scale: &self.scale * c,
        }
    }

    pub fn orth_sum(&self, other: &QuadForm) -> QuadForm {
        assert_eq!(self.tower, other.tower);
        let a = self.fold_scale();
        let b = other.fold_scale();
        QuadForm {
            tower: self.tower.clone(),
            blocks: a.blocks.into_iter().chain(b.blocks).collect(),
            diag: a.diag.into_iter().chain(b.diag).collect(),
            scale: self.tower.one(),
        }
    }

    pub fn eval(&self, v: &[El]) -> El {
        assert_eq!(v.len(), self.dim());
        let mut acc = self.tower.zero();
        for (i, (a, b)) in self.blocks.iter().enumerate() {
            let x = &v[2 * i];
            let y = &v[2 * i + 1];
            acc = &acc + &(&(a * &x.square()) + &(&(x * y) + &(b * &y.square())));
        }
        for (j, c) in self.diag.iter().enumerate() {
            let z = &v[2 * self.blocks.len() + j];
            acc = &acc + &(c * &z.square());
        }
        &acc * &self.scale
    }

    /// The polar form b_q(u,v) = q(u+v) + q(u) + q(v); it vanishes on the
    /// diagonal part.
    pub fn polar(&self, u: &[El], v: &[El]) -> El {
        assert_eq!(u.len(), self.dim());
        assert_eq!(v.len(), self.dim());
        let mut acc = self.tower.zero();
        for i in 0..self.blocks.len() {
            let (xu, yu) = (&u[2 * i], &u[2 * i + 1]);
            let (xv, yv) = (&v[2 * i], &v[2 * i + 1]);
            acc = &acc + &(&(xu * yv) + &(xv * yu));
        }
        &acc * &self.scale
    }

    /// Standard basis vector.
    pub fn basis_vec(&self, i: usize) -> Vec<El> {
        let mut v = vec![self.tower.zero(); self.dim()];
        v[i] = self.tower.one();
        v
    }

    pub fn coefficients(&self) -> Vec<El> {
        let f = self.fold_scale();
        let mut out = Vec::new();
        for (a, b) in &f.blocks {
            out.push(a.clone());
            out.push(b.clone());
        }
        out.extend(f.diag.iter().cloned());
        out
    }

    /// The quasilinear part ⟨c₁,…,c_s⟩ (with scale folded).
    pub fn ql(&self) -> QuadForm {
        let f = self.fold_scale();
        QuadForm::diagonal(&self.tower, f.diag)
    }

    pub fn nonsingular_part(&self) -> QuadForm {
        let f = self.fold_scale();
        QuadForm { tower: self.tower.clone(), blocks: f.blocks, diag: Vec::new(), scale: self.tower.one() }
    }

    pub fn is_totally_singular(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn is_nonsingular(&self) -> bool {
        self.diag.is_empty()
    }

    /// Lift all coefficients into an extension tower (self's tower must be a
    /// prefix of the target).
    pub fn lift_append(&self, target: &Tower) -> Result<QuadForm, FormError> {
        let lift = |e: &El| e.lift_append(target);
        Ok(QuadForm {
            tower: target.clone(),
            blocks: self
                .blocks
                .iter()
                .map(|(a, b)| Ok::<_, FieldError>((lift(a)?, lift(b)?)))
                .collect::<Result<_, _>>()?,
            diag: self.diag.iter().map(&lift).collect::<Result<_, _>>()?,
            scale: lift(&self.scale)?,
        })
    }

    /// Transport through a rational rewrite of the tower.
    pub fn map_rewrite(&self, rw: &RationalRewrite) -> Result<QuadForm, FormError> {
        let map = |e: &El| rw.map(e);
        Ok(QuadForm {
            tower: rw.target.clone(),
            blocks: self
                .blocks
                .iter()
                .map(|(a, b)| Ok::<_, FieldError>((map(a)?, map(b)?)))
                .collect::<Result<_, _>>()?,
            diag: self.diag.iter().map(&map).collect::<Result<_, _>>()?,
            scale: map(&self.scale)?,
        })
    }

    /// Normal form: scale folded, degenerate binary blocks rewritten to
    /// [0,0], F²-dependencies in the diagonal converted to explicit ⟨0⟩
    /// slots (complete over Base+Rational towers, syntactic elsewhere).
    pub fn normalize(&self) -> Normalized {
        let f = self.fold_scale();
        let mut blocks = Vec::new();
        for (a, b) in &f.blocks {
            if a.is_zero() || b.is_zero() {
                blocks.push((self.tower.zero(), self.tower.zero()));
            } else {
                blocks.push((a.clone(), b.clone()));
            }
        }
        let mut diag = f.diag.clone();
        if self.tower.is_rational_tower() {
            // repeatedly zero out one entry per F²-dependency
            loop {
                let nonzero: Vec<El> =
                    diag.iter().filter(|c| !c.is_zero()).cloned().collect();
                if nonzero.is_empty() {
                    break;
                }
                match f2linear::f2_kernel(&nonzero) {
                    Ok(Some(dep)) => {
                        // replace the last involved entry by q(dep-vector) = 0
                        let mut idx_nonzero = Vec::new();
                        for (i, c) in diag.iter().enumerate() {
                            if !c.is_zero() {
                                idx_nonzero.push(i);
                            }
                        }
                        let j = *idx_nonzero
                            .iter()
                            .zip(&dep)
                            .filter(|(_, d)| !d.is_zero())
                            .map(|(i, _)| i)
                            .last()
                            .expect("nontrivial dependency");
                        diag[j] = self.tower.zero();
                    }
                    _ => break,
                }
            }
        } else {
            // syntactic reduction: ⟨c,c⟩ ≅ ⟨c,0⟩
            for i in 0..diag.len() {
                if diag[i].is_zero() {
                    continue;
                }
                for j in (i + 1)..diag.len() {
                    if diag[j] == diag[i] {
                        diag[j] = self.tower.zero();
                    }
                }
            }
        }
        // move zeros to the end, preserving the order of nonzero entries
        let zeros = diag.iter().filter(|c| c.is_zero()).count();
        let nonzero: Vec<El> = diag.into_iter().filter(|c| !c.is_zero()).collect();
        let r = blocks.len();
        let s = nonzero.len();
        let mut full_diag = nonzero;
        full_diag.extend(std::iter::repeat(self.tower.zero()).take(zeros));
        Normalized {
            form: QuadForm {
                tower: self.tower.clone(),
                blocks,
                diag: full_diag,
                scale: self.tower.one(),
            },
            r,
            s,
            defect_slots: zeros,
        }
    }

    /// Type (r,s) of the normal form.
    pub fn type_rs(&self) -> (usize, usize) {
        let n = self.normalize();
        (n.r, n.s)
    }

    /// Verified evaluation check for an isotropy certificate.
    pub fn verify_isotropic_vector(&self, v: &[El]) -> bool {
        v.len() == self.dim() && v.iter().any(|e| !e.is_zero()) && self.eval(v).is_zero()
    }
}

/// Result of normalization: the normal form plus its recorded type data.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub form: QuadForm,
    pub r: usize,
    pub s: usize,
    pub defect_slots: usize,
}

/// Convenience wrappers with the coefficient-level f2linear machinery.
pub fn norm_degree(sigma: &QuadForm) -> Result<u64, crate::f2linear::LinError> {
    if !sigma.is_totally_singular() {
        return Err(crate::f2linear::LinError::IsotropicInput);
    }
    let coeffs = sigma.fold_scale().diag;
    Ok(f2linear::norm_degree_coeffs(&coeffs)?.0)
}

pub fn ts_isometric(a: &QuadForm, b: &QuadForm) -> Result<bool, crate::f2linear::LinError> {
    if !a.is_totally_singular() || !b.is_totally_singular() {
        return Err(crate::f2linear::LinError::IsotropicInput);
    }
    f2linear::ts_isometric_coeffs(&a.fold_scale().diag, &b.fold_scale().diag)
}

/// Does φ represent d? For anisotropic φ this is the isotropy of φ ⊥ ⟨d⟩;
/// an isotropic nonsingular part makes φ universal; a purely defective
/// isotropic form represents what its anisotropic kernel does.
pub fn represents_scalar(phi: &QuadForm, d: &El) -> Verdict {
    relations::represents(phi, d)
}
