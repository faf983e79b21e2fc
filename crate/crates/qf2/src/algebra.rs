//! Arf invariant, quaternion and biquaternion algebras, Clifford
//! descriptors, splitting and division tests, and the index-reduction
//! criterion. Algebra-level questions are routed through quadratic forms:
//! a symbol [a,b) splits iff [1,a] ⊥ ⟨b⟩ is isotropic, and a biquaternion
//! algebra is division iff its Albert form is anisotropic.

use crate::field::{El, RationalRewrite, Tower};
use crate::quadform::{
    similar_check, FormError, IsotropyOptions, QuadForm,
};
use crate::quadform::{isotropy_with, witt_decompose_with};
use crate::verdict::{Answer, Certificate, Verdict};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("operation requires a nonsingular form")]
    SingularInput,
    #[error("dimension exceeds the supported range")]
    DimensionTooLarge,
    #[error("no normal form with a represented 1 in the quasilinear part")]
    NormalFormUnavailable,
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Field(#[from] crate::field::FieldError),
}

/// The quaternion algebra [a,b): i² + i = a, j² = b, jij⁻¹ = i + 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuatSymbol {
    pub a: El,
    pub b: El,
}

impl QuatSymbol {
    pub fn new(a: El, b: El) -> QuatSymbol {
        assert!(!b.is_zero(), "square slot of a quaternion symbol must be nonzero");
        QuatSymbol { a, b }
    }

    /// The norm-related form [1,a] ⊥ ⟨b⟩ whose isotropy decides splitting.
    pub fn split_form(&self) -> QuadForm {
        let t = &self.a.tower;
        QuadForm {
            tower: t.clone(),
            blocks: vec![(t.one(), self.a.clone())],
            diag: vec![self.b.clone()],
            scale: t.one(),
        }
    }

    /// The full norm form [1,a] ⊥ b[1,a].
    pub fn norm_form(&self) -> QuadForm {
        let t = &self.a.tower;
        let one = QuadForm::new(t, vec![(t.one(), self.a.clone())], Vec::new());
        one.orth_sum(&one.scale_by(&self.b).fold_scale())
    }
}

impl std::fmt::Display for QuatSymbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{},{})", self.a, self.b)
    }
}

/// A sum of quaternion classes over an inseparable multiquadratic extension
/// F(√c₁,…,√c_m). No canonical form; triviality is decided through forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrauerClass {
    pub symbols: Vec<QuatSymbol>,
    pub insep_ext: Vec<El>,
}

impl BrauerClass {
    pub fn trivial_class(tower: &Tower) -> BrauerClass {
        let _ = tower;
        BrauerClass { symbols: Vec::new(), insep_ext: Vec::new() }
    }

    pub fn from_symbols(symbols: Vec<QuatSymbol>) -> BrauerClass {
        BrauerClass { symbols, insep_ext: Vec::new() }
    }

    pub fn sum(&self, other: &BrauerClass) -> BrauerClass {
        let mut symbols = self.symbols.clone();
        symbols.extend(other.symbols.iter().cloned());
        let mut insep_ext = self.insep_ext.clone();
        for c in &other.insep_ext {
            if !insep_ext.contains(c) {
                insep_ext.push(c.clone());
            }
        }
        BrauerClass { symbols, insep_ext }
    }
}

impl std::fmt::Display for BrauerClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.symbols.is_empty() {
            write!(f, "0")?;
        } else {
            let ss: Vec<String> = self.symbols.iter().map(|s| s.to_string()).collect();
            write!(f, "{}", ss.join("+"))?;
        }
        if !self.insep_ext.is_empty() {
            let cs: Vec<String> = self.insep_ext.iter().map(|c| format!("sqrt({c})")).collect();
            write!(f, " over F({})", cs.join(","))?;
        }
        Ok(())
    }
}

/// The Arf class Σaᵢbᵢ + ℘(F).
#[derive(Clone, Debug)]
pub struct ArfClass {
    pub representative: El,
    /// Zero when the representative is certified inside ℘; otherwise the
    /// representative itself.
    pub normalized: El,
}

impl ArfClass {
    pub fn is_zero(&self) -> Verdict {
        match self.representative.wp_membership() {
            Ok((true, w)) => Verdict::yes(Certificate::Vector(vec![w.unwrap()])),
            Ok((false, _)) => Verdict::no(Certificate::Note(
                "representative certified outside ℘".to_string(),
            )),
            Err(_) => Verdict::unknown(),
        }
    }

    /// Equality in F/℘(F), decided through ℘-membership of the difference.
    pub fn equal(&self, other: &ArfClass) -> Verdict {
        let diff = &self.representative + &other.representative;
        match diff.wp_membership() {
            Ok((true, _)) => Verdict::bare(Answer::Yes),
            Ok((false, _)) => Verdict::bare(Answer::No),
            Err(_) => Verdict::unknown(),
        }
    }
}

/// Arf invariant of a nonsingular form: Σaᵢbᵢ for blocks [aᵢ,bᵢ].
pub fn arf(phi: &QuadForm) -> Result<ArfClass, AlgebraError> {
    if !phi.is_nonsingular() {
        return Err(AlgebraError::SingularInput);
    }
    let f = phi.fold_scale();
    let mut rep = f.tower.zero();
    for (a, b) in &f.blocks {
        rep = &rep + &(a * b);
    }
    let normalized = match rep.wp_membership() {
        Ok((true, _)) => f.tower.zero(),
        _ => rep.clone(),
    };
    Ok(ArfClass { representative: rep, normalized })
}

/// Clifford invariant as a sum of quaternion symbols: each block scaled to
/// a[1,x] contributes [x,a); hyperbolic planes contribute nothing.
pub fn clifford_class(phi: &QuadForm) -> Result<BrauerClass, AlgebraError> {
    if !phi.is_nonsingular() {
        return Err(AlgebraError::SingularInput);
    }
    let f = phi.fold_scale();
    let mut symbols = Vec::new();
    for (a, b) in &f.blocks {
        if a.is_zero() || b.is_zero() {
            continue; // hyperbolic
        }
        symbols.push(QuatSymbol::new(a * b, a.clone()));
    }
    Ok(BrauerClass::from_symbols(symbols))
}

/// Splitting of a quaternion symbol: [a,b) splits iff [1,a] ⊥ ⟨b⟩ is
/// isotropic (equivalently, iff the 2-fold Pfister norm form is isotropic).
pub fn quat_split(s: &QuatSymbol) -> Verdict {
    quat_split_with(s, &IsotropyOptions::default())
}

pub fn quat_split_with(s: &QuatSymbol, opts: &IsotropyOptions) -> Verdict {
    isotropy_with(&s.split_form(), opts)
}

/// The Albert form of [p₁,q₁) ⊗ [p₂,q₂): q₁[1,p₁] ⊥ q₂[1,p₂] ⊥ [1,p₁+p₂].
pub fn albert_form(s1: &QuatSymbol, s2: &QuatSymbol) -> Result<QuadForm, AlgebraError> {
    let t = &s1.a.tower;
    let b1 = QuadForm::scaled_block(t, &s1.b, &s1.a)?;
    let b2 = QuadForm::scaled_block(t, &s2.b, &s2.a)?;
    let link = QuadForm::new(t, vec![(t.one(), &s1.a + &s2.a)], Vec::new());
    Ok(b1.orth_sum(&b2).orth_sum(&link))
}

/// Division test for a biquaternion algebra: division iff the Albert form is
/// anisotropic.
pub fn biquat_division(s1: &QuatSymbol, s2: &QuatSymbol) -> Result<Verdict, AlgebraError> {
    biquat_division_with(s1, s2, &IsotropyOptions::default())
}

pub fn biquat_division_with(
    s1: &QuatSymbol,
    s2: &QuatSymbol,
    opts: &IsotropyOptions,
) -> Result<Verdict, AlgebraError> {
    let gamma = albert_form(s1, s2)?;
    Ok(isotropy_with(&gamma, opts).flip())
}

/// Isomorphism of biquaternion algebras through similarity of their Albert
/// forms (Jacobson's criterion). Experimental cross-check only.
pub fn biquat_isomorphic(
    p1: (&QuatSymbol, &QuatSymbol),
    p2: (&QuatSymbol, &QuatSymbol),
) -> Result<Verdict, AlgebraError> {
    let g1 = albert_form(p1.0, p1.1)?;
    let g2 = albert_form(p2.0, p2.1)?;
    Ok(similar_check(&g1, &g2))
}

/// Descriptor of the even Clifford algebra for the normal form
/// ψ = a₁[1,b₁] ⊥ … ⊥ a_n[1,b_n] ⊥ ⟨1, c₁, …, c_m⟩: symbols [bᵢ,aᵢ) over
/// the extension F(√c₁,…,√c_m). ψ is rescaled so its quasilinear part
/// represents 1; failing that is an error.
pub fn even_clifford_descriptor(psi: &QuadForm) -> Result<BrauerClass, AlgebraError> {
    let f = psi.fold_scale();
    let scaled = if f.diag.is_empty() {
        f
    } else {
        let mut chosen = None;
        for c in &f.diag {
            if !c.is_zero() {
                chosen = Some(c.clone());
                break;
            }
        }
        let Some(c) = chosen else {
            return Err(AlgebraError::NormalFormUnavailable);
        };
        f.scale_by(&c.inv()?).fold_scale()
    };
    let mut symbols = Vec::new();
    for (p, q) in &scaled.blocks {
        if p.is_zero() || q.is_zero() {
            continue;
        }
        // [p,q] = p[1,pq]: slot pattern a[1,b] with a = p, b = pq
        symbols.push(QuatSymbol::new(p * q, p.clone()));
    }
    let mut insep_ext = Vec::new();
    let mut seen_one = scaled.diag.is_empty();
    for c in &scaled.diag {
        if !seen_one && c.is_one() {
            seen_one = true;
            continue;
        }
        insep_ext.push(c.clone());
    }
    if !seen_one {
        return Err(AlgebraError::NormalFormUnavailable);
    }
    Ok(BrauerClass { symbols, insep_ext })
}

/// Transport a Brauer class into the rational rewrite of the multiquadratic
/// extension F(√c₁,…,√c_m); None when the extension does not rewrite.
fn class_over_extension(b: &BrauerClass, tower: &Tower) -> Option<(Vec<QuatSymbol>, Tower)> {
    if b.insep_ext.is_empty() {
        return Some((b.symbols.clone(), tower.clone()));
    }
    let mut ext = tower.clone();
    for c in &b.insep_ext {
        let lifted = c.lift_append(&ext).ok()?;
        match lifted.is_square() {
            Ok(false) => ext = ext.with_insep(&lifted).ok()?,
            Ok(true) => {} // already a square: the layer is redundant
            Err(_) => return None,
        }
    }
    let rw = RationalRewrite::try_build(&ext)?;
    let mut symbols = Vec::new();
    for s in &b.symbols {
        let a = rw.map(&s.a.lift_append(&ext).ok()?).ok()?;
        let bb = rw.map(&s.b.lift_append(&ext).ok()?).ok()?;
        if bb.is_zero() {
            return None;
        }
        symbols.push(QuatSymbol::new(a, bb));
    }
    Some((symbols, rw.target.clone()))
}

/// Strip square factors from the b-slot (monomial part only): b·s⁻² for the
/// largest monomial s with s² dividing both numerator and denominator parts.
fn normalize_b_slot(b: &El) -> El {
    let num_sq = b.num.monomial_square_part();
    let den_sq = b.den.monomial_square_part();
    if num_sq.iter().all(|&e| e == 0) && den_sq.iter().all(|&e| e == 0) {
        return b.clone();
    }
    let mut exps: Vec<i32> = vec![0; b.tower.nvars()];
    for (i, (n, d)) in num_sq.iter().zip(&den_sq).enumerate() {
        exps[i] = 2 * (*d as i32 - *n as i32);
    }
    b * &b.tower.monomial(&exps)
}

/// Symbol rewriting: merge symbols sharing a ℘-class in the Artin–Schreier
/// slot or a square class in the square slot, and drop certified-split
/// symbols. Sound; not a canonical form.
pub fn brauer_simplify(b: &BrauerClass) -> BrauerClass {
    brauer_simplify_with(b, &IsotropyOptions::default())
}

pub fn brauer_simplify_with(b: &BrauerClass, opts: &IsotropyOptions) -> BrauerClass {
    let mut symbols: Vec<QuatSymbol> = b
        .symbols
        .iter()
        .map(|s| QuatSymbol::new(s.a.clone(), normalize_b_slot(&s.b)))
        .collect();
    loop {
        // drop certified splits
        let mut dropped = false;
        let mut kept = Vec::new();
        for s in symbols.drain(..) {
            if quat_split_with(&s, opts).answer == Answer::Yes {
                dropped = true;
            } else {
                kept.push(s);
            }
        }
        symbols = kept;
        // merge a pair if possible
        let mut merged = None;
        'outer: for i in 0..symbols.len() {
            for j in (i + 1)..symbols.len() {
                let (si, sj) = (&symbols[i], &symbols[j]);
                let same_a = si.a == sj.a
                    || matches!((&si.a + &sj.a).wp_membership(), Ok((true, _)));
                if same_a {
                    merged =
                        Some((i, j, QuatSymbol::new(si.a.clone(), normalize_b_slot(&(&si.b * &sj.b)))));
                    break 'outer;
                }
                let ratio = si.b.div_checked(&sj.b).expect("nonzero");
                if matches!(ratio.is_square(), Ok(true)) {
                    merged = Some((i, j, QuatSymbol::new(&si.a + &sj.a, si.b.clone())));
                    break 'outer;
                }
            }
        }
        match merged {
            Some((i, j, s)) => {
                symbols.remove(j);
                symbols.remove(i);
                if !s.b.is_zero() {
                    symbols.push(s);
                }
            }
            None => {
                if !dropped {
                    break;
                }
            }
        }
    }
    BrauerClass { symbols, insep_ext: b.insep_ext.clone() }
}

/// Is the class trivial (split over its extension)?
pub fn brauer_trivial(b: &BrauerClass) -> Verdict {
    brauer_trivial_with(b, &IsotropyOptions::default())
}

pub fn brauer_trivial_with(b: &BrauerClass, opts: &IsotropyOptions) -> Verdict {
    // simplify over the base first (sound over any extension)
    let base_simplified = brauer_simplify_with(b, opts);
    if base_simplified.symbols.is_empty() {
        return Verdict::yes(Certificate::Note("all symbols cancel".to_string()));
    }
    let tower = base_simplified.symbols[0].a.tower.clone();
    let Some((symbols, ext_tower)) = class_over_extension(&base_simplified, &tower) else {
        return Verdict::unknown();
    };
    let over_ext = BrauerClass::from_symbols(symbols);
    let simplified = brauer_simplify_with(&over_ext, opts);
    decide_trivial_symbols(&simplified.symbols, &ext_tower, opts)
}

fn decide_trivial_symbols(symbols: &[QuatSymbol], _tower: &Tower, opts: &IsotropyOptions) -> Verdict {
    match symbols.len() {
        0 => Verdict::yes(Certificate::Note("all symbols cancel".to_string())),
        1 => quat_split_with(&symbols[0], opts),
        2 => {
            let gamma = match albert_form(&symbols[0], &symbols[1]) {
                Ok(g) => g,
                Err(_) => return Verdict::unknown(),
            };
            match witt_decompose_with(&gamma, opts) {
                Ok(w) => {
                    if w.i_w == 3 {
                        Verdict::yes(Certificate::Note("Albert form hyperbolic".to_string()))
                    } else {
                        Verdict::no(Certificate::Note(format!(
                            "Albert form has Witt index {}, the class has index {}",
                            w.i_w,
                            if w.i_w == 0 { 4 } else { 2 }
                        )))
                    }
                }
                Err(_) => Verdict::unknown(),
            }
        }
        _ => Verdict::unknown(),
    }
}

/// Index reduction over F(ψ) for D a tensor of quaternion symbols (Theorem
/// of Mammone–Tignol–Wadsworth, used as a criterion): Yes means D ⊗ F(ψ) is
/// not division. A dimension count rules most cases; quaternion D against a
/// quadratic extension or a single symbol is decided by splitting tests.
pub fn index_reduction_obstruction(d: &BrauerClass, psi: &QuadForm) -> Verdict {
    index_reduction_obstruction_with(d, psi, &IsotropyOptions::default())
}

pub fn index_reduction_obstruction_with(
    d: &BrauerClass,
    psi: &QuadForm,
    opts: &IsotropyOptions,
) -> Verdict {
    if !d.insep_ext.is_empty() {
        return Verdict::unknown();
    }
    let dd = brauer_simplify_with(d, opts);
    if dd.symbols.is_empty() {
        return Verdict::yes(Certificate::Note(
            "trivial class never stays division".to_string(),
        ));
    }
    if psi.dim() < 2 {
        return Verdict::unknown();
    }
    let n_sym = dd.symbols.len();
    let dim_d = 4usize.pow(n_sym as u32);
    // the subalgebra the theorem requires D to contain
    let (dim_e, efield_dim, e_class) = if psi.is_nonsingular() {
        match arf(psi) {
            Ok(a) => match a.is_zero().answer {
                Answer::No => (1usize << (psi.dim() - 1), 0, None),
                _ => return Verdict::unknown(),
            },
            Err(_) => return Verdict::unknown(),
        }
    } else {
        match even_clifford_descriptor(psi) {
            Ok(e) => {
                let de = 4usize.pow(e.symbols.len() as u32) * (1 << e.insep_ext.len());
                let field_dim =
                    if e.symbols.is_empty() { 1 << e.insep_ext.len() } else { 0 };
                (de, field_dim, Some(e))
            }
            Err(_) => return Verdict::unknown(),
        }
    };
    if dim_e > dim_d {
        return Verdict::no(Certificate::Note(format!(
            "required subalgebra has dimension {dim_e} > {dim_d}"
        )));
    }
    // a purely inseparable field embeds in D only up to the degree
    if efield_dim > (1 << n_sym) {
        return Verdict::no(Certificate::Note(format!(
            "required subfield has dimension {efield_dim} beyond the degree {}",
            1 << n_sym
        )));
    }
    if n_sym == 1 {
        let s = &dd.symbols[0];
        if let Some(e) = &e_class {
            if e.symbols.is_empty() {
                // containment of F(√c…) in a quaternion algebra means it
                // splits there
                let cls = BrauerClass { symbols: vec![s.clone()], insep_ext: e.insep_ext.clone() };
                return brauer_trivial_with(&cls, opts);
            }
            if e.symbols.len() == 1 && e.insep_ext.is_empty() {
                // D must be isomorphic to the symbol algebra
                let sum = BrauerClass::from_symbols(vec![s.clone(), e.symbols[0].clone()]);
                return brauer_trivial_with(&sum, opts);
            }
        } else {
            // nonsingular ψ with nonzero Arf: C₀(ψ) has dimension 2^(dim−1),
            // equal to 4 only for dim 3 — excluded since C₀ is then not a
            // quaternion subalgebra datum we decide; handled by the filter
            return Verdict::unknown();
        }
    }
    Verdict::unknown()
}

/// Membership in I³_q for nonsingular forms of dimension ≤ 10: trivial Arf
/// and trivial Clifford class.
pub fn in_i3q(phi: &QuadForm) -> Result<Verdict, AlgebraError> {
    in_i3q_with(phi, &IsotropyOptions::default())
}

pub fn in_i3q_with(phi: &QuadForm, opts: &IsotropyOptions) -> Result<Verdict, AlgebraError> {
    if !phi.is_nonsingular() {
        return Err(AlgebraError::SingularInput);
    }
    if phi.dim() > 10 {
        return Err(AlgebraError::DimensionTooLarge);
    }
    let a = arf(phi)?;
    match a.is_zero().answer {
        Answer::No => {
            return Ok(Verdict::no(Certificate::Note("Arf invariant nonzero".to_string())))
        }
        Answer::Unknown => return Ok(Verdict::unknown()),
        Answer::Yes => {}
    }
    let c = clifford_class(phi)?;
    Ok(match brauer_trivial_with(&c, opts).answer {
        Answer::Yes => Verdict::yes(Certificate::Note("Arf and Clifford trivial".to_string())),
        Answer::No => Verdict::no(Certificate::Note("Clifford class nontrivial".to_string())),
        Answer::Unknown => Verdict::unknown(),
    })
}

/// For φ ∈ I³_q of dimension ≤ 10: a GP₃ representative π with φ ∼ π. The
/// anisotropic part must have dimension 0 (hyperbolic π) or 8 (π is the
/// part itself); anything else returns None.
pub fn gp3_witness(phi: &QuadForm) -> Result<Option<QuadForm>, AlgebraError> {
    gp3_witness_with(phi, &IsotropyOptions::default())
}

pub fn gp3_witness_with(
    phi: &QuadForm,
    opts: &IsotropyOptions,
) -> Result<Option<QuadForm>, AlgebraError> {
    if !phi.is_nonsingular() {
        return Err(AlgebraError::SingularInput);
    }
    if phi.dim() > 10 {
        return Err(AlgebraError::DimensionTooLarge);
    }
    let w = witt_decompose_with(phi, opts)?;
    match w.an_part.dim() {
        0 => {
            let t = &phi.tower;
            let mut pi = QuadForm::hyperbolic_plane(t);
            for _ in 0..3 {
                pi = pi.orth_sum(&QuadForm::hyperbolic_plane(t));
            }
            Ok(Some(pi))
        }
        8 => Ok(Some(w.an_part)),
        _ => Ok(None),
    }
}

/// Is π in GP₃: dimension 8, nonsingular, trivial Arf and Clifford (in the
/// regime where that certifies similarity to a 3-fold Pfister form).
pub fn is_gp3(pi: &QuadForm) -> Verdict {
    is_gp3_with(pi, &IsotropyOptions::default())
}

pub fn is_gp3_with(pi: &QuadForm, opts: &IsotropyOptions) -> Verdict {
    if pi.dim() != 8 || !pi.is_nonsingular() {
        return Verdict::no(Certificate::Note(
            "GP₃ forms are nonsingular of dimension 8".to_string(),
        ));
    }
    match in_i3q_with(pi, opts) {
        Ok(v) => v,
        Err(_) => Verdict::unknown(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{parse_element, parse_tower};
    use crate::quadform::QuadForm;

    fn t(s: &str) -> Tower {
        parse_tower(s).unwrap()
    }

    fn form(tw: &Tower, s: &str) -> QuadForm {
        QuadForm::parse(tw, s).unwrap()
    }

    fn el(tw: &Tower, s: &str) -> El {
        parse_element(tw, s).unwrap()
    }

    #[test]
    fn arf_anchored() {
        let f2 = t("F2");
        let a = arf(&form(&f2, "[1,1]")).unwrap();
        assert_eq!(a.is_zero().answer, Answer::No);
        let tw = t("F2(t)");
        let a = arf(&form(&tw, "[1,t] + [1,t]")).unwrap();
        assert_eq!(a.is_zero().answer, Answer::Yes);
        let a = arf(&form(&tw, "[1,t]")).unwrap();
        assert_eq!(a.is_zero().answer, Answer::No);
        assert!(matches!(arf(&form(&tw, "<1,t>")), Err(AlgebraError::SingularInput)));
    }

    #[test]
    fn clifford_anchored() {
        let tw = t("F2(t,x)");
        let c = clifford_class(&form(&tw, "[0,0]")).unwrap();
        assert!(c.symbols.is_empty());
        // clifford(t[1,x]) = {[x,t)}
        let c = clifford_class(&form(&tw, "t*[1,x]")).unwrap();
        assert_eq!(c.symbols.len(), 1);
        assert_eq!(c.symbols[0].a, el(&tw, "x"));
        assert_eq!(c.symbols[0].b, el(&tw, "t"));
        // q ⊥ q is trivial
        let c = clifford_class(&form(&tw, "t*[1,x] + t*[1,x]")).unwrap();
        assert_eq!(brauer_trivial(&c).answer, Answer::Yes);
    }

    #[test]
    fn quat_split_anchored() {
        let tw = t("F2(t,u)");
        // [0,b) splits
        let s = QuatSymbol::new(tw.zero(), el(&tw, "t"));
        assert_eq!(quat_split(&s).answer, Answer::Yes);
        // [a,1) splits
        let s = QuatSymbol::new(el(&tw, "t"), tw.one());
        assert_eq!(quat_split(&s).answer, Answer::Yes);
        // [t,u) does not split
        let s = QuatSymbol::new(el(&tw, "t"), el(&tw, "u"));
        assert_eq!(quat_split(&s).answer, Answer::No);
    }

    #[test]
    fn quat_slot_equivalence_invariance() {
        use rand::{Rng, SeedableRng};
        let tw = t("F2(t,u)");
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let base = QuatSymbol::new(el(&tw, "t"), el(&tw, "u"));
        for _ in 0..30 {
            // b ↦ b·s², a ↦ a + ℘(w) for monomial s, w
            let s = tw.monomial(&[rng.gen_range(0..3i32), rng.gen_range(0..3i32)]);
            let w = tw.monomial(&[rng.gen_range(0..3i32), rng.gen_range(0..3i32)]);
            let a2 = &base.a + &(&w.square() + &w);
            let b2 = &base.b * &s.square();
            let tweaked = QuatSymbol::new(a2, b2);
            assert_eq!(
                quat_split(&base).answer,
                quat_split(&tweaked).answer,
                "slot equivalence must preserve splitting (s={s}, w={w})"
            );
        }
    }

    #[test]
    fn biquat_anchored() {
        let tw = t("F2(t,u,v,x)");
        // [x,t) ⊗ [u,v) is division: Albert form anisotropic
        let s1 = QuatSymbol::new(el(&tw, "x"), el(&tw, "t"));
        let s2 = QuatSymbol::new(el(&tw, "u"), el(&tw, "v"));
        let gamma = albert_form(&s1, &s2).unwrap();
        assert_eq!(gamma, form(&tw, "t*[1,x] + v*[1,u] + [1,x+u]"));
        assert_eq!(biquat_division(&s1, &s2).unwrap().answer, Answer::Yes);
        // s ⊗ s is never division
        assert_eq!(biquat_division(&s1, &s1).unwrap().answer, Answer::No);
        // a split factor degenerates the tensor to a matrix algebra over a
        // quaternion, so the 16-dimensional algebra is not division and the
        // Albert form is isotropic
        let split = QuatSymbol::new(tw.zero(), el(&tw, "v"));
        assert_eq!(biquat_division(&s1, &split).unwrap().answer, Answer::No);
        let split2 = QuatSymbol::new(el(&tw, "u"), tw.one());
        assert_eq!(biquat_division(&split, &split2).unwrap().answer, Answer::No);
    }

    #[test]
    fn even_clifford_anchored() {
        let tw = t("F2(a,b,c)");
        let e = even_clifford_descriptor(&form(&tw, "<1,c>")).unwrap();
        assert!(e.symbols.is_empty());
        assert_eq!(e.insep_ext, vec![el(&tw, "c")]);
        let e = even_clifford_descriptor(&form(&tw, "a*[1,b]")).unwrap();
        assert_eq!(e.symbols.len(), 1);
        assert_eq!(e.symbols[0].a, el(&tw, "b"));
        assert_eq!(e.symbols[0].b, el(&tw, "a"));
        assert!(e.insep_ext.is_empty());
        let e = even_clifford_descriptor(&form(&tw, "a*[1,b] + <1,c>")).unwrap();
        assert_eq!(e.symbols.len(), 1);
        assert_eq!(e.insep_ext, vec![el(&tw, "c")]);
    }

    #[test]
    fn brauer_rules_anchored() {
        let tw = t("F2(t,u,v)");
        // [a,b)+[a,b) is trivial
        let s = QuatSymbol::new(el(&tw, "t"), el(&tw, "u"));
        let cls = BrauerClass::from_symbols(vec![s.clone(), s.clone()]);
        assert_eq!(brauer_trivial(&cls).answer, Answer::Yes);
        // [t,u)+[t,u·v²) is trivial
        let s2 = QuatSymbol::new(el(&tw, "t"), el(&tw, "u*v^2"));
        let cls = BrauerClass::from_symbols(vec![s.clone(), s2]);
        assert_eq!(brauer_trivial(&cls).answer, Answer::Yes);
        // [t,u)+[t,v) = [t,uv), not split
        let s3 = QuatSymbol::new(el(&tw, "t"), el(&tw, "v"));
        let cls = BrauerClass::from_symbols(vec![s.clone(), s3]);
        let simplified = brauer_simplify(&cls);
        assert_eq!(simplified.symbols.len(), 1);
        assert_eq!(simplified.symbols[0].b, el(&tw, "u*v"));
        assert_eq!(brauer_trivial(&cls).answer, Answer::No);
    }

    #[test]
    fn brauer_over_extension() {
        let tw = t("F2(t,u,v)");
        // [t,u) splits over F(√u)
        let s = QuatSymbol::new(el(&tw, "t"), el(&tw, "u"));
        let cls = BrauerClass { symbols: vec![s.clone()], insep_ext: vec![el(&tw, "u")] };
        assert_eq!(brauer_trivial(&cls).answer, Answer::Yes);
        // but not over F(√v)
        let cls = BrauerClass { symbols: vec![s], insep_ext: vec![el(&tw, "v")] };
        assert_eq!(brauer_trivial(&cls).answer, Answer::No);
    }

    #[test]
    fn index_reduction_anchored() {
        let tw = t("F2(t,x,c,u)");
        // trivial D always reduces
        let d = BrauerClass::trivial_class(&tw);
        let psi = form(&tw, "<1,c>");
        assert_eq!(index_reduction_obstruction(&d, &psi).answer, Answer::Yes);
        // quaternion D against nonsingular dim-4 ψ with Arf ≠ 0: dimensions
        let d = BrauerClass::from_symbols(vec![QuatSymbol::new(el(&tw, "x"), el(&tw, "t"))]);
        let psi = form(&tw, "[1,u] + [1,c]"); // arf = u + c ∉ ℘
        assert_eq!(index_reduction_obstruction(&d, &psi).answer, Answer::No);
        // D = [x,t), ψ = ⟨1,c⟩: reduction iff [x,t) splits over F(√c): no
        let psi = form(&tw, "<1,c>");
        assert_eq!(index_reduction_obstruction(&d, &psi).answer, Answer::No);
        // and over F(√t) it does split
        let psi = form(&tw, "<1,t>");
        assert_eq!(index_reduction_obstruction(&d, &psi).answer, Answer::Yes);
    }

    #[test]
    fn i3q_anchored() {
        let tw = t("F2(t,u,v,x)");
        // 4×[0,0] lies in I³q with hyperbolic witness
        let mut h = form(&tw, "[0,0]");
        for _ in 0..3 {
            h = h.orth_sum(&form(&tw, "[0,0]"));
        }
        assert_eq!(in_i3q(&h).unwrap().answer, Answer::Yes);
        let pi = gp3_witness(&h).unwrap().unwrap();
        assert_eq!(pi.dim(), 8);
        // an explicit 3-fold Pfister form: ⟨⟨u,v;x]]
        let pf = form(&tw, "[1,x] + u*[1,x] + v*[1,x] + u*v*[1,x]");
        assert_eq!(in_i3q(&pf).unwrap().answer, Answer::Yes);
        assert_eq!(is_gp3(&pf).answer, Answer::Yes);
        let pi = gp3_witness(&pf).unwrap().unwrap();
        assert_eq!(pi.dim(), 8);
        // a 2-fold Pfister form is not Witt equivalent to GP₃ unless trivial
        let p2 = form(&tw, "[1,x] + t*[1,x]");
        assert_eq!(in_i3q(&p2).unwrap().answer, Answer::No);
        // dimension guard
        let mut big = h.clone();
        big = big.orth_sum(&form(&tw, "[0,0]")).orth_sum(&form(&tw, "[0,0]"));
        assert!(matches!(in_i3q(&big), Err(AlgebraError::DimensionTooLarge)));
    }
}
