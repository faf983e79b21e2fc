//! Rewriting towers with inseparable quadratic layers over monomial
//! constants into isomorphic purely rational towers.
//!
//! F(...)(√d) with d a Laurent monomial c·∏ wᵢ^eᵢ is rational: pick a pivot
//! variable with odd exponent, adjoin a fresh variable s = √(squarefree part)
//! and substitute the pivot by s²·(rest of the squarefree part)⁻¹. All
//! decisions over such towers reduce to the rational image.

use super::{El, FieldError, GenKind, Layer, Tower};

/// An isomorphism from a tower with (monomial-constant) insep layers onto a
/// purely rational tower, given by images of the source variables.
#[derive(Clone, Debug)]
pub struct RationalRewrite {
    pub source: Tower,
    pub target: Tower,
    images: Vec<El>,
}

impl RationalRewrite {
    /// Identity rewrite for an already rational tower.
    pub fn identity(t: &Tower) -> Option<RationalRewrite> {
        if !t.is_rational_tower() {
            return None;
        }
        Some(RationalRewrite {
            source: t.clone(),
            target: t.clone(),
            images: (0..t.nvars()).map(|v| t.var(v)).collect(),
        })
    }

    /// Build the rewrite, layer by layer. None if the tower has a separable
    /// layer or an insep layer whose constant does not map to a monomial.
    pub fn try_build(src: &Tower) -> Option<RationalRewrite> {
        let mut target = Tower::base(src.k()).ok()?;
        let mut images: Vec<El> = Vec::new();
        for (v, layer) in src.layers().iter().enumerate() {
            match layer {
                Layer::Rational { name } => {
                    let new_target = target.with_rational(name).ok()?;
                    images = images
                        .iter()
                        .map(|e| e.lift_append(&new_target).expect("prefix lift"))
                        .collect();
                    target = new_target;
                    images.push(target.var_named(name).unwrap());
                }
                Layer::Quadratic { kind: GenKind::Sep, .. } => return None,
                Layer::Quadratic { kind: GenKind::Insep, name, rel_num, rel_den } => {
                    // image of the constant in the current target
                    let sub = src.prefix(v);
                    let d = El::make(sub, rel_num.clone(), rel_den.clone()).ok()?;
                    let d_img = d.substitute(&target, &images[..v].to_vec()).ok()?;
                    // must be a Laurent monomial
                    if d_img.num.terms.len() != 1 || d_img.den.terms.len() != 1 {
                        return None;
                    }
                    let (nm, _) = d_img.num.terms.iter().next().unwrap();
                    let (dm, _) = d_img.den.terms.iter().next().unwrap();
                    let exps: Vec<i32> = nm
                        .iter()
                        .zip(dm)
                        .map(|(a, b)| *a as i32 - *b as i32)
                        .collect();
                    let odd: Vec<usize> =
                        (0..exps.len()).filter(|&w| exps[w].rem_euclid(2) == 1).collect();
                    let &pivot = odd.last()?; // empty means d is a square: illegal tower
                    // rebuild target: drop pivot, append s with the generator's name
                    let mut nt = Tower::base(src.k()).ok()?;
                    for (w, l) in target.layers().iter().enumerate() {
                        if w != pivot {
                            nt = nt.with_rational(l.name()).ok()?;
                        }
                    }
                    nt = nt.with_rational(name).ok()?;
                    let s = nt.var_named(name).unwrap();
                    // pivot = s^2 / prod_{w in odd, w != pivot} w
                    let mut pivot_img = s.square();
                    for &w in &odd {
                        if w != pivot {
                            let wv = nt.var_named(target.var_name(w)).unwrap();
                            pivot_img = pivot_img.div_checked(&wv).ok()?;
                        }
                    }
                    // remap: old target vars into nt
                    let remap: Vec<El> = (0..target.nvars())
                        .map(|w| {
                            if w == pivot {
                                pivot_img.clone()
                            } else {
                                nt.var_named(target.var_name(w)).unwrap()
                            }
                        })
                        .collect();
                    images = images
                        .iter()
                        .map(|e| e.substitute(&nt, &remap).expect("remap"))
                        .collect();
                    // image of the generator: sqrt of the (now even) monomial image
                    let d_new = d_img.substitute(&nt, &remap).ok()?;
                    let gen_img = monomial_sqrt(&d_new)?;
                    debug_assert_eq!(gen_img.square(), d_new);
                    target = nt;
                    images.push(gen_img);
                }
            }
        }
        Some(RationalRewrite { source: src.clone(), target, images })
    }

    pub fn map(&self, a: &El) -> Result<El, FieldError> {
        if a.tower != self.source {
            return Err(FieldError::TowerMismatch);
        }
        a.substitute(&self.target, &self.images)
    }

    /// Inverse of `map`: every target variable carries the name of the source
    /// variable (rational or generator) it stands for.
    pub fn unmap(&self, a: &El) -> Result<El, FieldError> {
        if a.tower != self.target {
            return Err(FieldError::TowerMismatch);
        }
        let images: Vec<El> = self
            .target
            .var_names()
            .iter()
            .map(|n| self.source.var_named(n).expect("name-preserving rewrite"))
            .collect();
        a.substitute(&self.source, &images)
    }
}

/// Square root of a Laurent monomial with even exponents.
fn monomial_sqrt(a: &El) -> Option<El> {
    if a.num.terms.len() != 1 || a.den.terms.len() != 1 {
        return None;
    }
    let (nm, nc) = a.num.terms.iter().next().unwrap();
    let (dm, dc) = a.den.terms.iter().next().unwrap();
    if nm.iter().any(|e| e % 2 == 1) || dm.iter().any(|e| e % 2 == 1) {
        return None;
    }
    let num = crate::poly::MPoly::monomial(
        a.num.k,
        a.num.nvars,
        nm.iter().map(|e| e / 2).collect(),
        nc.sqrt(),
    );
    let den = crate::poly::MPoly::monomial(
        a.den.k,
        a.den.nvars,
        dm.iter().map(|e| e / 2).collect(),
        dc.sqrt(),
    );
    El::make(a.tower.clone(), num, den).ok()
}
