//! Linear algebra of F viewed as a vector space over its subfield of
//! squares F².
//!
//! Over F = F_{2^k}(t₁,…,tₙ) the monomials t^ε with ε ∈ {0,1}ⁿ form an
//! F²-basis. Decomposing pulls the ε-components back through the inverse
//! Frobenius, so F²-linear questions become F-linear questions on the
//! coordinate vectors with the sought coefficients carried as their square
//! roots. Powers norm degree, totally singular isometry, and multiquadratic
//! membership.

use crate::field::{El, FieldError, Tower};
use crate::poly::MPoly;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum LinError {
    #[error("operation requires a Base+Rational tower")]
    UnsupportedTower,
    #[error("input form is isotropic")]
    IsotropicInput,
    #[error("product closure cap exceeded")]
    CapExceeded,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Coordinates of an element over the F²-basis {t^ε}: the ε-component pulled
/// back through the inverse Frobenius, so that
/// a = Σ_ε coords[ε]² · t^ε.
#[derive(Clone, Debug)]
pub struct F2Coords {
    pub tower: Tower,
    pub coords: BTreeMap<Vec<u8>, El>,
}

impl F2Coords {
    pub fn reconstruct(&self) -> El {
        let mut acc = self.tower.zero();
        for (eps, c) in &self.coords {
            let exps: Vec<i32> = eps.iter().map(|&e| e as i32).collect();
            let m = self.tower.monomial(&exps);
            acc = &acc + &(&c.square() * &m);
        }
        acc
    }
}

/// Decompose an element over the F²-basis of square-free monomials.
pub fn decompose(a: &El) -> Result<F2Coords, LinError> {
    let tower = &a.tower;
    if !tower.is_rational_tower() {
        return Err(LinError::UnsupportedTower);
    }
    // a = (num·den)/den²; num·den splits exactly over the basis
    let h = a.num.mul(&a.den);
    let nv = tower.nvars();
    let mut polys: BTreeMap<Vec<u8>, MPoly> = BTreeMap::new();
    for (m, c) in &h.terms {
        let eps: Vec<u8> = m.iter().map(|&e| (e % 2) as u8).collect();
        let half: Vec<u16> = m.iter().map(|&e| e / 2).collect();
        let entry = polys.entry(eps).or_insert_with(|| MPoly::zero(tower.k(), nv));
        *entry = entry.add(&MPoly::monomial(tower.k(), nv, half, c.sqrt()));
    }
    let mut coords = BTreeMap::new();
    for (eps, p) in polys {
        if p.is_zero() {
            continue;
        }
        let e = El::make(tower.clone(), p, a.den.clone())?;
        coords.insert(eps, e);
    }
    Ok(F2Coords { tower: tower.clone(), coords })
}

/// Coordinate vectors of a family over a common ε-index set.
fn coord_matrix(elems: &[El]) -> Result<(Vec<Vec<u8>>, Vec<Vec<El>>), LinError> {
    let tower = &elems[0].tower;
    let decs: Vec<F2Coords> = elems.iter().map(decompose).collect::<Result<_, _>>()?;
    let mut index: Vec<Vec<u8>> = Vec::new();
    for d in &decs {
        for eps in d.coords.keys() {
            if !index.contains(eps) {
                index.push(eps.clone());
            }
        }
    }
    index.sort();
    let rows = decs
        .iter()
        .map(|d| {
            index
                .iter()
                .map(|eps| d.coords.get(eps).cloned().unwrap_or_else(|| tower.zero()))
                .collect()
        })
        .collect();
    Ok((index, rows))
}

/// Solve x = Σ dᵢ² · basisᵢ; returns the dᵢ (verified) if solvable.
pub fn f2_solve(x: &El, basis: &[El]) -> Result<Option<Vec<El>>, LinError> {
    if basis.is_empty() {
        return Ok(if x.is_zero() { Some(Vec::new()) } else { None });
    }
    let tower = &x.tower;
    let mut all = basis.to_vec();
    all.push(x.clone());
    let (_, mut rows) = coord_matrix(&all)?;
    let target = rows.pop().unwrap();
    // solve rows^T · d = target over F by Gaussian elimination on columns
    let n = rows.len();
    let width = target.len();
    // augmented system: for each coordinate position, equation Σ dᵢ rows[i][pos] = target[pos]
    let mut mat: Vec<Vec<El>> = (0..width)
        .map(|pos| {
            let mut r: Vec<El> = rows.iter().map(|row| row[pos].clone()).collect();
            r.push(target[pos].clone());
            r
        })
        .collect();
    let mut pivot_of_col = vec![usize::MAX; n];
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..mat.len()).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(rank, p);
        let inv = mat[rank][col].inv()?;
        for e in mat[rank].iter_mut() {
            *e = &*e * &inv;
        }
        for r in 0..mat.len() {
            if r != rank && !mat[r][col].is_zero() {
                let f = mat[r][col].clone();
                for c in 0..=n {
                    let sub = &mat[rank][c] * &f;
                    mat[r][c] = &mat[r][c] + &sub;
                }
            }
        }
        pivot_of_col[col] = rank;
        rank += 1;
    }
    for row in mat[rank..].iter() {
        if !row[n].is_zero() {
            return Ok(None);
        }
    }
    let mut sol = vec![tower.zero(); n];
    for col in 0..n {
        let r = pivot_of_col[col];
        if r != usize::MAX {
            sol[col] = mat[r][n].clone();
        }
    }
    // verify
    let mut acc = tower.zero();
    for (d, b) in sol.iter().zip(basis) {
        acc = &acc + &(&d.square() * b);
    }
    debug_assert_eq!(acc, *x);
    if acc != *x {
        return Ok(None);
    }
    Ok(Some(sol))
}

/// Rank of the F²-span of the family.
pub fn f2_rank(family: &[El]) -> Result<usize, LinError> {
    if family.is_empty() {
        return Ok(0);
    }
    let (_, rows) = coord_matrix(family)?;
    Ok(rank_of(rows)?)
}

fn rank_of(mut rows: Vec<Vec<El>>) -> Result<usize, FieldError> {
    let mut rank = 0;
    let width = rows.first().map(|r| r.len()).unwrap_or(0);
    for col in 0..width {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].inv()?;
        let pivot: Vec<El> = rows[rank].iter().map(|e| e * &inv).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let f = row[col].clone();
                for (c, e) in row.iter_mut().enumerate() {
                    let sub = &pivot[c] * &f;
                    *e = &*e + &sub;
                }
            }
        }
        rows[rank] = pivot;
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    Ok(rank)
}

/// Is x in the F²-span of the family?
pub fn f2_member(x: &El, family: &[El]) -> Result<bool, LinError> {
    Ok(f2_solve(x, family)?.is_some())
}

/// A nontrivial F²-dependency Σ dᵢ² familyᵢ = 0, if one exists.
pub fn f2_kernel(family: &[El]) -> Result<Option<Vec<El>>, LinError> {
    if family.is_empty() {
        return Ok(None);
    }
    let tower = &family[0].tower;
    // find an element dependent on its predecessors, then solve for it
    for i in 0..family.len() {
        if family[i].is_zero() {
            let mut dep = vec![tower.zero(); family.len()];
            dep[i] = tower.one();
            return Ok(Some(dep));
        }
        if let Some(sol) = f2_solve(&family[i], &family[..i])? {
            let mut dep = vec![tower.zero(); family.len()];
            dep[..i].clone_from_slice(&sol);
            dep[i] = tower.one();
            return Ok(Some(dep));
        }
    }
    Ok(None)
}

/// A nonzero element of span(A) ∩ span(B) for two independent families, if
/// one exists: any F²-dependency of the concatenated family must mix the
/// two sides, and its A-side value is a nonzero intersection element.
pub fn f2_intersect_nonzero(a: &[El], b: &[El]) -> Result<Option<El>, LinError> {
    if a.is_empty() || b.is_empty() {
        return Ok(None);
    }
    let tower = &a[0].tower;
    let combined: Vec<El> = a.iter().chain(b).cloned().collect();
    match f2_kernel(&combined)? {
        None => Ok(None),
        Some(k) => {
            let mut x = tower.zero();
            for (d, ai) in k[..a.len()].iter().zip(a) {
                x = &x + &(&d.square() * ai);
            }
            Ok(if x.is_zero() { None } else { Some(x) })
        }
    }
}

/// Solve x = Σ dᵢ² basisᵢ with coefficients in the rational core of a tower
/// with quadratic layers; inputs must be core elements.
pub fn f2_solve_in_core(x: &El, basis: &[El]) -> Result<Option<Vec<El>>, FieldError> {
    let xc = x.project_core()?;
    let bc: Vec<El> = basis.iter().map(|b| b.project_core()).collect::<Result<_, _>>()?;
    match f2_solve(&xc, &bc) {
        Ok(Some(sol)) => {
            let lifted: Vec<El> =
                sol.iter().map(|d| d.lift_from_core(&x.tower)).collect::<Result<_, _>>()?;
            Ok(Some(lifted))
        }
        Ok(None) => Ok(None),
        Err(LinError::Field(e)) => Err(e),
        Err(_) => Err(FieldError::UnsupportedTower),
    }
}

/// Norm degree of an anisotropic totally singular form given by its
/// coefficients: [F²(c₁c₂,…,c₁c_s) : F²] as a power of two, together with
/// the independent multiquadratic generators found.
pub fn norm_degree_coeffs(coeffs: &[El]) -> Result<(u64, Vec<El>), LinError> {
    let nonzero: Vec<&El> = coeffs.iter().filter(|c| !c.is_zero()).collect();
    if nonzero.is_empty() {
        return Err(LinError::IsotropicInput);
    }
    let tower = &nonzero[0].tower;
    if !tower.is_rational_tower() {
        return Err(LinError::UnsupportedTower);
    }
    if f2_rank(&coeffs.iter().cloned().collect::<Vec<_>>())? < coeffs.len() {
        return Err(LinError::IsotropicInput);
    }
    let c1 = nonzero[0];
    let mut gens: Vec<El> = Vec::new();
    for cj in &nonzero[1..] {
        let g = &**cj * c1;
        if gens.len() >= 12 {
            return Err(LinError::CapExceeded);
        }
        let products = closure_products(tower, &gens)?;
        if !f2_member(&g, &products)? {
            gens.push(g);
        }
    }
    Ok((1u64 << gens.len(), gens))
}

/// All subset products of the generators (the F²-basis of F²(gens) over F²).
pub fn closure_products(tower: &Tower, gens: &[El]) -> Result<Vec<El>, LinError> {
    if 1usize << gens.len() > 1 << 12 {
        return Err(LinError::CapExceeded);
    }
    let mut out = vec![tower.one()];
    for g in gens {
        let mut next = out.clone();
        for p in &out {
            next.push(p * g);
        }
        out = next;
    }
    Ok(out)
}

/// Are two anisotropic totally singular forms (given by coefficients)
/// isometric, i.e. do their value sets — the F²-spans — coincide?
pub fn ts_isometric_coeffs(a: &[El], b: &[El]) -> Result<bool, LinError> {
    if a.len() != b.len() {
        return Ok(false);
    }
    for x in a {
        if !f2_member(x, b)? {
            return Ok(false);
        }
    }
    for y in b {
        if !f2_member(y, a)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::parse_tower;

    fn els(t: &Tower, ss: &[&str]) -> Vec<El> {
        ss.iter().map(|s| crate::field::parse_element(t, s).unwrap()).collect()
    }

    #[test]
    fn decompose_reconstruct() {
        let t = parse_tower("F2(t,u)").unwrap();
        for s in ["t", "t^3+u", "1/(t+u)", "(t^2+u^3)/(t*u+1)"] {
            let e = crate::field::parse_element(&t, s).unwrap();
            let d = decompose(&e).unwrap();
            assert_eq!(d.reconstruct(), e, "reconstruction failed for {s}");
        }
    }

    #[test]
    fn decompose_anchored() {
        let t = parse_tower("F2(t,u)").unwrap();
        // t^3+u = (t)^2·t + 1^2·u
        let e = crate::field::parse_element(&t, "t^3+u").unwrap();
        let d = decompose(&e).unwrap();
        assert_eq!(d.coords.len(), 2);
        let ct = &d.coords[&vec![1u8, 0]];
        let cu = &d.coords[&vec![0u8, 1]];
        assert_eq!(*ct, crate::field::parse_element(&t, "t").unwrap());
        assert!(cu.is_one());
    }

    #[test]
    fn rank_anchored() {
        let t = parse_tower("F2(t,u)").unwrap();
        // oracle for independence of {1,t,u,tu}: exhaustive small combinations
        let fam = els(&t, &["1", "t", "u", "t*u"]);
        let small = els(&t, &["0", "1", "t", "u", "t+1", "u+1", "t+u", "t+u+1"]);
        let mut dependent = false;
        for d0 in &small {
            for d1 in &small {
                for d2 in &small {
                    for d3 in &small {
                        if d0.is_zero() && d1.is_zero() && d2.is_zero() && d3.is_zero() {
                            continue;
                        }
                        let mut acc = t.zero();
                        for (d, f) in [d0, d1, d2, d3].iter().zip(&fam) {
                            acc = &acc + &(&d.square() * f);
                        }
                        if acc.is_zero() {
                            dependent = true;
                        }
                    }
                }
            }
        }
        assert!(!dependent, "oracle: {{1,t,u,tu}} must be F²-independent");
        assert_eq!(f2_rank(&fam).unwrap(), 4);

        // {1, t, t^2} has rank 2: t^2 = (t)^2 · 1
        assert_eq!(f2_rank(&els(&t, &["1", "t", "t^2"])).unwrap(), 2);
        // membership: t+u ∈ span{t,u}
        let x = crate::field::parse_element(&t, "t+u").unwrap();
        assert!(f2_member(&x, &els(&t, &["t", "u"])).unwrap());
        // non-membership: u ∉ span{1,t}
        let u = crate::field::parse_element(&t, "u").unwrap();
        assert!(!f2_member(&u, &els(&t, &["1", "t"])).unwrap());
    }

    #[test]
    fn norm_degree_anchored() {
        let t2 = parse_tower("F2(t)").unwrap();
        let (nd, _) = norm_degree_coeffs(&els(&t2, &["1", "t"])).unwrap();
        assert_eq!(nd, 2);

        let t = parse_tower("F2(t,u)").unwrap();
        let (nd, _) = norm_degree_coeffs(&els(&t, &["1", "t", "u", "t*u"])).unwrap();
        assert_eq!(nd, 4);

        let t3 = parse_tower("F2(t,u,v)").unwrap();
        let (nd, _) = norm_degree_coeffs(&els(&t3, &["1", "t", "u", "v"])).unwrap();
        assert_eq!(nd, 8);
    }

    #[test]
    fn ts_isometry_anchored() {
        let t = parse_tower("F2(t,u)").unwrap();
        // <1,t> ≅ <1+t, t>
        assert!(ts_isometric_coeffs(&els(&t, &["1", "t"]), &els(&t, &["1+t", "t"])).unwrap());
        // <1,t> ≇ <1,u>
        assert!(!ts_isometric_coeffs(&els(&t, &["1", "t"]), &els(&t, &["1", "u"])).unwrap());
        // permutation
        assert!(ts_isometric_coeffs(&els(&t, &["t", "u"]), &els(&t, &["u", "t"])).unwrap());
    }

    #[test]
    fn kernel_finds_dependency() {
        let t = parse_tower("F2(t,u)").unwrap();
        let fam = els(&t, &["1", "t", "u", "t+u"]);
        let dep = f2_kernel(&fam).unwrap().expect("dependent family");
        let mut acc = t.zero();
        for (d, f) in dep.iter().zip(&fam) {
            acc = &acc + &(&d.square() * f);
        }
        assert!(acc.is_zero());
        assert!(dep.iter().any(|d| !d.is_zero()));
        assert!(f2_kernel(&els(&t, &["1", "t", "u"])).unwrap().is_none());
    }
}
