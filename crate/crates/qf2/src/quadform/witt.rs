//! Witt decomposition φ ≅ φ_an ⊥ i_W×[0,0] ⊥ i_d×⟨0⟩ by repeated splitting
//! of verified isotropic vectors, with all split data kept in the original
//! coordinates so the decomposition doubles as an isometry certificate.

use super::isotropy::{isotropy_with, IsotropyOptions};
use super::{FormError, QuadForm};
use crate::field::El;
use crate::verdict::{Answer, Certificate};

#[derive(Clone, Debug)]
pub struct WittData {
    pub i_w: usize,
    pub i_d: usize,
    pub an_part: QuadForm,
    /// Hyperbolic pairs (v, w) with q(v)=0, b(v,w)=1, in original coordinates.
    pub pairs: Vec<(Vec<El>, Vec<El>)>,
    /// Radical isotropic vectors, one per defect slot.
    pub defects: Vec<Vec<El>>,
    /// Basis realizing the anisotropic part, aligned with its coordinates.
    pub an_basis: Vec<Vec<El>>,
}

impl WittData {
    /// The nondefective part φ_an ⊥ i_W×[0,0].
    pub fn nondefective(&self) -> QuadForm {
        let mut f = self.an_part.clone();
        for _ in 0..self.i_w {
            f = f.orth_sum(&QuadForm::hyperbolic_plane(&f.tower));
        }
        f
    }

    /// φ_an ⊥ i_W×[0,0] ⊥ i_d×⟨0⟩, the full reconstruction.
    pub fn reconstruction(&self) -> QuadForm {
        let mut f = self.nondefective();
        let zeros = vec![f.tower.zero(); self.i_d];
        f = f.orth_sum(&QuadForm::diagonal(&f.tower, zeros));
        f
    }
}

pub fn witt_decompose(phi: &QuadForm) -> Result<WittData, FormError> {
    witt_decompose_with(phi, &IsotropyOptions::default())
}

pub fn witt_decompose_with(
    phi: &QuadForm,
    opts: &IsotropyOptions,
) -> Result<WittData, FormError> {
    let f = phi.fold_scale();
    let tower = f.tower.clone();
    let n = f.dim();
    let mut basis: Vec<Vec<El>> = (0..n).map(|i| f.basis_vec(i)).collect();
    let mut pairs = Vec::new();
    let mut defects = Vec::new();
    loop {
        let (reduced, aligned) = symplectic_reduce(&f, &basis);
        let verdict = isotropy_with(&reduced, opts);
        match verdict.answer {
            Answer::No => {
                return Ok(WittData {
                    i_w: pairs.len(),
                    i_d: defects.len(),
                    an_part: reduced,
                    pairs,
                    defects,
                    an_basis: aligned,
                });
            }
            Answer::Unknown => return Err(FormError::UnknownIsotropy),
            Answer::Yes => {
                let Some(Certificate::Vector(w)) = verdict.certificate else {
                    return Err(FormError::UnknownIsotropy);
                };
                // back to original coordinates
                let v = combine(&tower, &aligned, &w, n);
                debug_assert!(f.verify_isotropic_vector(&v));
                let polar_with: Vec<El> =
                    aligned.iter().map(|b| f.polar(&v, b)).collect();
                if polar_with.iter().all(|e| e.is_zero()) {
                    // radical vector: drop one coordinate it occupies
                    let p = w.iter().position(|c| !c.is_zero()).expect("nonzero vector");
                    let mut nb = Vec::with_capacity(aligned.len() - 1);
                    for (i, b) in aligned.iter().enumerate() {
                        if i != p {
                            nb.push(b.clone());
                        }
                    }
                    defects.push(v);
                    basis = nb;
                } else {
                    let j = polar_with.iter().position(|e| !e.is_zero()).unwrap();
                    let c = polar_with[j].inv().expect("nonzero polar value");
                    let wv: Vec<El> = aligned[j].iter().map(|e| e * &c).collect();
                    // a second index where v has support, distinct from j
                    let p = w
                        .iter()
                        .enumerate()
                        .position(|(i, c)| i != j && !c.is_zero())
                        .expect("isotropic vector not proportional to its pivot");
                    let mut nb = Vec::with_capacity(aligned.len() - 2);
                    for (i, u) in aligned.iter().enumerate() {
                        if i == j || i == p {
                            continue;
                        }
                        nb.push(plane_correct(&f, u, &v, &wv));
                    }
                    pairs.push((v, wv));
                    basis = nb;
                }
            }
        }
    }
}

/// u ↦ u + b(u,w)·v + b(u,v)·w, the polar-orthogonal projection away from a
/// plane with b(v,w) = 1.
pub(crate) fn plane_correct(f: &QuadForm, u: &[El], v: &[El], w: &[El]) -> Vec<El> {
    let buw = f.polar(u, w);
    let buv = f.polar(u, v);
    u.iter()
        .zip(v.iter().zip(w))
        .map(|(ue, (ve, we))| &(ue + &(ve * &buw)) + &(we * &buv))
        .collect()
}

fn combine(tower: &crate::field::Tower, basis: &[Vec<El>], coords: &[El], n: usize) -> Vec<El> {
    let mut v = vec![tower.zero(); n];
    for (b, c) in basis.iter().zip(coords) {
        if c.is_zero() {
            continue;
        }
        for (ve, be) in v.iter_mut().zip(b) {
            *ve = &*ve + &(be * c);
        }
    }
    v
}

/// Express q restricted to the span of `basis` in block/diagonal shape:
/// extract polar-nondegenerate pairs first, the leftover is the radical of
/// the polar form and becomes the diagonal. Returns the structured form and
/// the aligned basis vectors (original coordinates).
pub(crate) fn symplectic_reduce(f: &QuadForm, basis: &[Vec<El>]) -> (QuadForm, Vec<Vec<El>>) {
    let mut work: Vec<Vec<El>> = basis.to_vec();
    let mut blocks = Vec::new();
    let mut aligned: Vec<Vec<El>> = Vec::new();
    'outer: loop {
        for i in 0..work.len() {
            for j in (i + 1)..work.len() {
                let c = f.polar(&work[i], &work[j]);
                if c.is_zero() {
                    continue;
                }
                let v = work[i].clone();
                let w: Vec<El> = {
                    let inv = c.inv().expect("nonzero");
                    work[j].iter().map(|e| e * &inv).collect()
                };
                blocks.push((f.eval(&v), f.eval(&w)));
                let rest: Vec<Vec<El>> = work
                    .iter()
                    .enumerate()
                    .filter(|(t, _)| *t != i && *t != j)
                    .map(|(_, u)| plane_correct(f, u, &v, &w))
                    .collect();
                aligned.push(v);
                aligned.push(w);
                work = rest;
                continue 'outer;
            }
        }
        break;
    }
    let diag: Vec<El> = work.iter().map(|u| f.eval(u)).collect();
    aligned.extend(work);
    let reduced = QuadForm::new(&f.tower, blocks, diag);
    (reduced, aligned)
}
