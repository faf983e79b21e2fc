//! Computable characteristic-2 field towers and exact arithmetic in them.
//!
//! A tower starts at a finite base field F_{2^k} and grows by layers:
//! rational function field layers F(t), separable quadratic layers
//! F[y]/(y^2+y+delta) with delta outside ℘(F), and inseparable quadratic
//! layers F[z]/(z^2+d) with d a non-square. Elements are canonical fractions
//! of multivariate polynomials: numerator and denominator coprime, the
//! denominator monic under the global lex order and free of quadratic-layer
//! generators, and every generator reduced to degree <= 1 via its relation.
//! Equality of elements is equality of representations.

mod parse;
mod rewrite;
#[cfg(test)]
pub(crate) mod tests;
mod wp;

pub use parse::{parse_element, parse_tower};
pub use rewrite::RationalRewrite;

use crate::gf::Gf;
use crate::poly::{self, MPoly, Mono};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("illegal layer: {0}")]
    IllegalLayer(String),
    #[error("duplicate variable {0}")]
    DuplicateVariable(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("tower mismatch")]
    TowerMismatch,
    #[error("not a square")]
    NotASquare,
    #[error("unsupported tower for this operation")]
    UnsupportedTower,
    #[error("residue of a non-unit (valuation {0})")]
    ResidueOfNonUnit(i64),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("solver cap exceeded")]
    CapExceeded,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GenKind {
    Sep,
    Insep,
}

/// A non-base layer. Relation polynomials are stored over the sub-tower's
/// variables (the first `index` variables), zero-padded on use.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Layer {
    Rational { name: String },
    Quadratic { name: String, kind: GenKind, rel_num: MPoly, rel_den: MPoly },
}

impl Layer {
    pub fn name(&self) -> &str {
        match self {
            Layer::Rational { name } => name,
            Layer::Quadratic { name, .. } => name,
        }
    }
}

#[derive(PartialEq, Eq, Debug)]
pub struct TowerData {
    pub k: u8,
    pub layers: Vec<Layer>,
}

/// Shared, immutable field tower descriptor.
#[derive(Clone)]
pub struct Tower(Arc<TowerData>);

impl PartialEq for Tower {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}
impl Eq for Tower {}

impl fmt::Debug for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tower({self})")
    }
}

impl Tower {
    pub fn base(k: u8) -> Result<Tower, FieldError> {
        if k == 0 || k > crate::gf::MAX_K {
            return Err(FieldError::IllegalLayer(format!("base degree {k} out of range")));
        }
        Ok(Tower(Arc::new(TowerData { k, layers: Vec::new() })))
    }

    pub fn k(&self) -> u8 {
        self.0.k
    }

    pub fn nvars(&self) -> usize {
        self.0.layers.len()
    }

    pub fn layers(&self) -> &[Layer] {
        &self.0.layers
    }

    pub fn var_name(&self, v: usize) -> &str {
        self.0.layers[v].name()
    }

    pub fn var_names(&self) -> Vec<String> {
        self.0.layers.iter().map(|l| l.name().to_string()).collect()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.0.layers.iter().position(|l| l.name() == name)
    }

    pub fn is_rational_var(&self, v: usize) -> bool {
        matches!(self.0.layers[v], Layer::Rational { .. })
    }

    pub fn generator_vars(&self) -> Vec<usize> {
        (0..self.nvars()).filter(|&v| !self.is_rational_var(v)).collect()
    }

    /// Base + Rational layers only.
    pub fn is_rational_tower(&self) -> bool {
        self.generator_vars().is_empty()
    }

    fn check_fresh_name(&self, name: &str) -> Result<(), FieldError> {
        if name.is_empty() || !name.chars().next().unwrap().is_ascii_lowercase() {
            return Err(FieldError::IllegalLayer(format!("bad variable name {name:?}")));
        }
        if name == "g" || self.var_index(name).is_some() {
            return Err(FieldError::DuplicateVariable(name.to_string()));
        }
        Ok(())
    }

    pub fn with_rational(&self, name: &str) -> Result<Tower, FieldError> {
        self.check_fresh_name(name)?;
        let mut layers = self.0.layers.clone();
        layers.push(Layer::Rational { name: name.to_string() });
        Ok(Tower(Arc::new(TowerData { k: self.k(), layers })))
    }

    /// Pick a generator name that does not collide with existing variables.
    pub fn fresh_name(&self, stem: &str) -> String {
        if self.var_index(stem).is_none() && stem != "g" {
            return stem.to_string();
        }
        let mut i = 1;
        loop {
            let cand = format!("{stem}{i}");
            if self.var_index(&cand).is_none() {
                return cand;
            }
            i += 1;
        }
    }

    /// Adjoin y with y^2 + y = delta. Legal iff delta is not in ℘ of self.
    pub fn with_sep(&self, delta: &El) -> Result<Tower, FieldError> {
        self.with_sep_named(&self.fresh_name("th"), delta)
    }

    pub fn with_sep_named(&self, name: &str, delta: &El) -> Result<Tower, FieldError> {
        if delta.tower != *self {
            return Err(FieldError::TowerMismatch);
        }
        self.check_fresh_name(name)?;
        match wp::wp_membership(delta) {
            Ok((true, _)) => {
                return Err(FieldError::IllegalLayer(format!(
                    "sep constant {delta} lies in ℘ of the subfield"
                )))
            }
            Ok((false, _)) => {}
            Err(FieldError::UnsupportedTower) => {
                return Err(FieldError::IllegalLayer(
                    "sep legality undecidable over this subfield".to_string(),
                ))
            }
            Err(e) => return Err(e),
        }
        let mut layers = self.0.layers.clone();
        layers.push(Layer::Quadratic {
            name: name.to_string(),
            kind: GenKind::Sep,
            rel_num: delta.num.clone(),
            rel_den: delta.den.clone(),
        });
        Ok(Tower(Arc::new(TowerData { k: self.k(), layers })))
    }

    /// Adjoin z with z^2 = d. Legal iff d is a non-square in self.
    pub fn with_insep(&self, d: &El) -> Result<Tower, FieldError> {
        self.with_insep_named(&self.fresh_name("rt"), d)
    }

    pub fn with_insep_named(&self, name: &str, d: &El) -> Result<Tower, FieldError> {
        if d.tower != *self {
            return Err(FieldError::TowerMismatch);
        }
        self.check_fresh_name(name)?;
        if d.is_zero() {
            return Err(FieldError::IllegalLayer("insep constant is zero".to_string()));
        }
        if d.is_square()? {
            return Err(FieldError::IllegalLayer(format!("insep constant {d} is a square")));
        }
        let mut layers = self.0.layers.clone();
        layers.push(Layer::Quadratic {
            name: name.to_string(),
            kind: GenKind::Insep,
            rel_num: d.num.clone(),
            rel_den: d.den.clone(),
        });
        Ok(Tower(Arc::new(TowerData { k: self.k(), layers })))
    }

    /// The sub-tower consisting of the first `n` layers.
    pub fn prefix(&self, n: usize) -> Tower {
        Tower(Arc::new(TowerData { k: self.k(), layers: self.0.layers[..n].to_vec() }))
    }

    /// Is `self` a prefix of `other`?
    pub fn is_prefix_of(&self, other: &Tower) -> bool {
        self.k() == other.k()
            && self.nvars() <= other.nvars()
            && self.0.layers[..] == other.0.layers[..self.nvars()]
    }

    /// Remove a layer whose variable occurs in no relation; the residue tower
    /// of the var-adic valuation.
    pub fn remove_var(&self, v: usize) -> Result<Tower, FieldError> {
        if self.relation_involves(v) {
            return Err(FieldError::UnsupportedTower);
        }
        let mut layers = Vec::with_capacity(self.nvars() - 1);
        for (i, l) in self.0.layers.iter().enumerate() {
            if i == v {
                continue;
            }
            let fix = |p: &MPoly| {
                let mut q = MPoly::zero(p.k, p.nvars - if p.nvars > v { 1 } else { 0 });
                if p.nvars <= v {
                    return p.clone();
                }
                for (m, c) in &p.terms {
                    let mut mm = m.clone();
                    mm.remove(v);
                    q.terms.insert(mm, *c);
                }
                q
            };
            layers.push(match l {
                Layer::Rational { name } => Layer::Rational { name: name.clone() },
                Layer::Quadratic { name, kind, rel_num, rel_den } => Layer::Quadratic {
                    name: name.clone(),
                    kind: *kind,
                    rel_num: fix(rel_num),
                    rel_den: fix(rel_den),
                },
            });
        }
        Ok(Tower(Arc::new(TowerData { k: self.k(), layers })))
    }

    /// Does any quadratic layer's defining constant involve variable v?
    pub fn relation_involves(&self, v: usize) -> bool {
        self.0.layers.iter().any(|l| match l {
            Layer::Rational { .. } => false,
            Layer::Quadratic { rel_num, rel_den, .. } => {
                (rel_num.nvars > v && rel_num.involves(v))
                    || (rel_den.nvars > v && rel_den.involves(v))
            }
        })
    }

    /// Relation polynomials for a generator var, padded to this tower's width.
    fn relation(&self, v: usize) -> Option<(GenKind, MPoly, MPoly)> {
        match &self.0.layers[v] {
            Layer::Rational { .. } => None,
            Layer::Quadratic { kind, rel_num, rel_den, .. } => {
                Some((*kind, self.pad(rel_num), self.pad(rel_den)))
            }
        }
    }

    fn pad(&self, p: &MPoly) -> MPoly {
        let n = self.nvars();
        debug_assert!(p.nvars <= n);
        if p.nvars == n {
            return p.clone();
        }
        let mut q = MPoly::zero(p.k, n);
        for (m, c) in &p.terms {
            let mut mm = m.clone();
            mm.resize(n, 0);
            q.terms.insert(mm, *c);
        }
        q
    }

    // ---- element constructors ----

    pub fn zero(&self) -> El {
        El { tower: self.clone(), num: MPoly::zero(self.k(), self.nvars()), den: MPoly::one(self.k(), self.nvars()) }
    }

    pub fn one(&self) -> El {
        El { tower: self.clone(), num: MPoly::one(self.k(), self.nvars()), den: MPoly::one(self.k(), self.nvars()) }
    }

    pub fn constant(&self, c: Gf) -> El {
        assert_eq!(c.k(), self.k());
        El {
            tower: self.clone(),
            num: MPoly::constant(self.k(), self.nvars(), c),
            den: MPoly::one(self.k(), self.nvars()),
        }
    }

    pub fn int(&self, n: u64) -> El {
        if n % 2 == 0 {
            self.zero()
        } else {
            self.one()
        }
    }

    pub fn generator_el(&self) -> El {
        self.constant(Gf::generator(self.k()))
    }

    pub fn var(&self, v: usize) -> El {
        El {
            tower: self.clone(),
            num: MPoly::var(self.k(), self.nvars(), v),
            den: MPoly::one(self.k(), self.nvars()),
        }
    }

    pub fn var_named(&self, name: &str) -> Option<El> {
        self.var_index(name).map(|v| self.var(v))
    }

    pub fn from_num_den(&self, num: MPoly, den: MPoly) -> Result<El, FieldError> {
        El::make(self.clone(), num, den)
    }

    /// The rational core (base + rational layers only) and the map from
    /// this tower's variable indices to core indices.
    pub fn core(&self) -> (Tower, Vec<Option<usize>>) {
        let mut layers = Vec::new();
        let mut map = Vec::with_capacity(self.nvars());
        for l in self.0.layers.iter() {
            match l {
                Layer::Rational { name } => {
                    map.push(Some(layers.len()));
                    layers.push(Layer::Rational { name: name.clone() });
                }
                Layer::Quadratic { .. } => map.push(None),
            }
        }
        (Tower(Arc::new(TowerData { k: self.k(), layers })), map)
    }

    /// Monomial element from exponents (may be negative).
    pub fn monomial(&self, exps: &[i32]) -> El {
        assert_eq!(exps.len(), self.nvars());
        let mut num_m = vec![0u16; exps.len()];
        let mut den_m = vec![0u16; exps.len()];
        for (i, &e) in exps.iter().enumerate() {
            if e >= 0 {
                num_m[i] = e as u16;
            } else {
                den_m[i] = (-e) as u16;
            }
        }
        let k = self.k();
        El {
            tower: self.clone(),
            num: MPoly::monomial(k, exps.len(), num_m, Gf::one(k)),
            den: MPoly::monomial(k, exps.len(), den_m, Gf::one(k)),
        }
    }
}

impl fmt::Display for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k() == 1 {
            write!(f, "F2")?;
        } else {
            write!(f, "F2^{}", self.k())?;
        }
        let mut i = 0;
        let layers = self.layers();
        while i < layers.len() {
            match &layers[i] {
                Layer::Rational { name } => {
                    let mut names = vec![name.clone()];
                    while i + 1 < layers.len() {
                        if let Layer::Rational { name } = &layers[i + 1] {
                            names.push(name.clone());
                            i += 1;
                        } else {
                            break;
                        }
                    }
                    write!(f, "({})", names.join(","))?;
                }
                Layer::Quadratic { kind, rel_num, rel_den, .. } => {
                    let sub = self.prefix(i);
                    let e = El {
                        tower: sub.clone(),
                        num: rel_num.clone(),
                        den: rel_den.clone(),
                    };
                    match kind {
                        GenKind::Sep => write!(f, "[sep:{e}]")?,
                        GenKind::Insep => write!(f, "[insep:{e}]")?,
                    }
                }
            }
            i += 1;
        }
        Ok(())
    }
}

/// Valuation value: an integer or +infinity (for 0).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Val {
    Finite(i64),
    Infinity,
}

impl Val {
    pub fn finite(self) -> Option<i64> {
        match self {
            Val::Finite(v) => Some(v),
            Val::Infinity => None,
        }
    }
}

impl PartialOrd for Val {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Val {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (Val::Infinity, Val::Infinity) => std::cmp::Ordering::Equal,
            (Val::Infinity, _) => std::cmp::Ordering::Greater,
            (_, Val::Infinity) => std::cmp::Ordering::Less,
            (Val::Finite(a), Val::Finite(b)) => a.cmp(b),
        }
    }
}

/// Discrete valuation data for a rational variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuationData {
    pub value: Val,
    pub uniformizer_var: String,
}

/// An exact element of a tower field.
#[derive(Clone, PartialEq, Eq)]
pub struct El {
    pub tower: Tower,
    pub num: MPoly,
    pub den: MPoly,
}

impl El {
    /// Canonicalize a fraction: rationalize generator vars out of the
    /// denominator, reduce generator powers, cancel the gcd, make the
    /// denominator monic.
    pub fn make(tower: Tower, mut num: MPoly, mut den: MPoly) -> Result<El, FieldError> {
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(tower.zero());
        }
        // clear generators out of the denominator, outermost first
        loop {
            let gens = tower.generator_vars();
            let Some(&v) = gens.iter().rev().find(|&&v| den.involves(v)) else {
                break;
            };
            let (kind, rn, rd) = tower.relation(v).unwrap();
            let (d2, m) = reduce_gen_powers(&den, v, kind, &rn, &rd);
            num = num.mul(&m);
            den = d2;
            if !den.involves(v) {
                continue;
            }
            // den = d0 + d1*v with d1 != 0: multiply by the conjugate
            let d0 = den.coeff_of(v, 0);
            let d1 = den.coeff_of(v, 1);
            let conj = match kind {
                // conj(d0 + d1 y) = (d0 + d1) + d1 y
                GenKind::Sep => {
                    d0.add(&d1).add(&d1.mul_monomial(&unit_mono(tower.nvars(), v), Gf::one(tower.k())))
                }
                GenKind::Insep => den.clone(),
            };
            num = num.mul(&conj);
            den = den.mul(&conj);
            let (d3, m2) = reduce_gen_powers(&den, v, kind, &rn, &rd);
            num = num.mul(&m2);
            den = d3;
            debug_assert!(!den.involves(v), "conjugate multiplication must clear the generator");
        }
        // reduce generator powers in the numerator, outermost first
        for &v in tower.generator_vars().iter().rev() {
            if num.max_deg(v) >= 2 {
                let (kind, rn, rd) = tower.relation(v).unwrap();
                let (n2, m) = reduce_gen_powers(&num, v, kind, &rn, &rd);
                num = n2;
                den = den.mul(&m);
            }
        }
        // the reductions can put generators back in den's multiplier only via
        // rel_den, which is generator-free by the canonical invariant
        if num.is_zero() {
            return Ok(tower.zero());
        }
        let g = poly::gcd(&num, &den);
        if !g.is_one() {
            num = num.div_exact(&g).expect("gcd divides");
            den = den.div_exact(&g).expect("gcd divides");
        }
        let lc = den.leading_coeff().inv();
        Ok(El { tower, num: num.mul_scalar(lc), den: den.mul_scalar(lc) })
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    fn same_tower(&self, rhs: &El) -> Result<(), FieldError> {
        if self.tower == rhs.tower {
            Ok(())
        } else {
            Err(FieldError::TowerMismatch)
        }
    }

    pub fn add_checked(&self, rhs: &El) -> Result<El, FieldError> {
        self.same_tower(rhs)?;
        let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
        let den = self.den.mul(&rhs.den);
        El::make(self.tower.clone(), num, den)
    }

    pub fn mul_checked(&self, rhs: &El) -> Result<El, FieldError> {
        self.same_tower(rhs)?;
        El::make(self.tower.clone(), self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }

    pub fn div_checked(&self, rhs: &El) -> Result<El, FieldError> {
        self.same_tower(rhs)?;
        if rhs.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        El::make(self.tower.clone(), self.num.mul(&rhs.den), self.den.mul(&rhs.num))
    }

    pub fn inv(&self) -> Result<El, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        El::make(self.tower.clone(), self.den.clone(), self.num.clone())
    }

    pub fn square(&self) -> El {
        El::make(self.tower.clone(), self.num.square(), self.den.square())
            .expect("squaring preserves validity")
    }

    /// The Frobenius endomorphism x -> x^2.
    pub fn frobenius(&self) -> El {
        self.square()
    }

    pub fn pow(&self, e: i64) -> Result<El, FieldError> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let mut out = self.tower.one();
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul_checked(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        Ok(out)
    }

    pub fn is_square(&self) -> Result<bool, FieldError> {
        Ok(self.sqrt_opt()?.is_some())
    }

    pub fn sqrt(&self) -> Result<El, FieldError> {
        self.sqrt_opt()?.ok_or(FieldError::NotASquare)
    }

    /// Exact square root, if one exists in the tower field.
    pub fn sqrt_opt(&self) -> Result<Option<El>, FieldError> {
        if self.is_zero() {
            return Ok(Some(self.clone()));
        }
        // a = (num*den)/den^2, so a is a square iff num*den is
        let h = self.num.mul(&self.den);
        let den2 = self.den.square();
        match sqrt_of_poly(&self.tower, &h)? {
            None => Ok(None),
            Some(s) => {
                let r = El::make(self.tower.clone(), s.num, s.den.mul(&den2.sqrt_exact().unwrap()))?;
                debug_assert_eq!(r.square(), *self);
                Ok(Some(r))
            }
        }
    }

    /// The var-adic valuation. Defined when no quadratic layer's relation
    /// involves var; then min-degree in var is a discrete valuation with
    /// residue field the tower with var removed.
    pub fn valuation(&self, v: usize) -> Result<Val, FieldError> {
        if !self.tower.is_rational_var(v) || self.tower.relation_involves(v) {
            return Err(FieldError::UnsupportedTower);
        }
        if self.is_zero() {
            return Ok(Val::Infinity);
        }
        Ok(Val::Finite(self.num.min_deg(v) as i64 - self.den.min_deg(v) as i64))
    }

    pub fn valuation_data(&self, v: usize) -> Result<ValuationData, FieldError> {
        Ok(ValuationData {
            value: self.valuation(v)?,
            uniformizer_var: self.tower.var_name(v).to_string(),
        })
    }

    /// self * var^-e for e the valuation; a var-adic unit (or zero).
    pub fn unit_part(&self, v: usize) -> Result<El, FieldError> {
        match self.valuation(v)? {
            Val::Infinity => Ok(self.clone()),
            Val::Finite(e) => {
                let mut exps = vec![0i32; self.tower.nvars()];
                exps[v] = -(e as i32);
                self.mul_checked(&self.tower.monomial(&exps))
            }
        }
    }

    /// Residue of a var-adic unit in the tower with var removed.
    pub fn residue(&self, v: usize) -> Result<El, FieldError> {
        match self.valuation(v)? {
            Val::Infinity => Err(FieldError::ResidueOfNonUnit(i64::MAX)),
            Val::Finite(e) if e != 0 => Err(FieldError::ResidueOfNonUnit(e)),
            Val::Finite(_) => {
                let res_tower = self.tower.remove_var(v)?;
                let cut = |p: &MPoly| {
                    let min = p.min_deg(v);
                    let mut q = MPoly::zero(p.k, p.nvars - 1);
                    for (m, c) in &p.terms {
                        if m[v] == min {
                            let mut mm = m.clone();
                            mm.remove(v);
                            q.terms.insert(mm, *c);
                        }
                    }
                    q
                };
                El::make(res_tower, cut(&self.num), cut(&self.den))
            }
        }
    }

    /// Lift into a tower of which self's tower is a prefix.
    pub fn lift_append(&self, target: &Tower) -> Result<El, FieldError> {
        if !self.tower.is_prefix_of(target) {
            return Err(FieldError::TowerMismatch);
        }
        Ok(El { tower: target.clone(), num: target.pad(&self.num), den: target.pad(&self.den) })
    }

    /// Lift from the residue tower (target minus var at `pos`) back into target.
    pub fn lift_reinsert(&self, target: &Tower, pos: usize) -> Result<El, FieldError> {
        if target.remove_var(pos)? != self.tower {
            return Err(FieldError::TowerMismatch);
        }
        let fix = |p: &MPoly| {
            let mut q = MPoly::zero(p.k, p.nvars + 1);
            for (m, c) in &p.terms {
                let mut mm = m.clone();
                mm.insert(pos, 0);
                q.terms.insert(mm, *c);
            }
            q
        };
        Ok(El { tower: target.clone(), num: fix(&self.num), den: fix(&self.den) })
    }

    /// Apply a variable substitution into another tower. `images[v]` is the
    /// image of variable v; base-field constants map identically.
    pub fn substitute(&self, target: &Tower, images: &[El]) -> Result<El, FieldError> {
        assert_eq!(images.len(), self.tower.nvars());
        let eval = |p: &MPoly| -> Result<(MPoly, MPoly), FieldError> {
            // common denominator: product of image dens to per-var max degree
            let mut num_acc = MPoly::zero(target.k(), target.nvars());
            let maxdeg: Vec<u16> = (0..p.nvars).map(|v| p.max_deg(v)).collect();
            let mut den_acc = MPoly::one(target.k(), target.nvars());
            for (v, &d) in maxdeg.iter().enumerate() {
                if d > 0 {
                    den_acc = den_acc.mul(&images[v].den.pow(d as u32));
                }
            }
            for (m, c) in &p.terms {
                let mut t = MPoly::constant(target.k(), target.nvars(), *c);
                for (v, &e) in m.iter().enumerate() {
                    if e > 0 {
                        t = t.mul(&images[v].num.pow(e as u32));
                    }
                    let slack = maxdeg[v] - e;
                    if slack > 0 && maxdeg[v] > 0 {
                        t = t.mul(&images[v].den.pow(slack as u32));
                    }
                }
                num_acc = num_acc.add(&t);
            }
            Ok((num_acc, den_acc))
        };
        let (nn, nd) = eval(&self.num)?;
        let (dn, dd) = eval(&self.den)?;
        // (nn/nd)/(dn/dd) = nn*dd/(nd*dn)
        El::make(target.clone(), nn.mul(&dd), nd.mul(&dn))
    }

    /// ℘-membership: does w^2 + w = self have a solution in the tower field?
    /// Returns a verified witness on success. Complete on Base+Rational towers.
    pub fn wp_membership(&self) -> Result<(bool, Option<El>), FieldError> {
        wp::wp_membership(self)
    }

    /// Project into the rational core; the element must not involve any
    /// generator variable.
    pub fn project_core(&self) -> Result<El, FieldError> {
        let (core, map) = self.tower.core();
        let core_nvars = core.nvars();
        let fix = |p: &MPoly| -> Result<MPoly, FieldError> {
            let mut q = MPoly::zero(p.k, core_nvars);
            for (m, c) in &p.terms {
                let mut mm = vec![0u16; core_nvars];
                for (v, &e) in m.iter().enumerate() {
                    if e > 0 {
                        match map[v] {
                            Some(w) => mm[w] = e,
                            None => return Err(FieldError::UnsupportedTower),
                        }
                    }
                }
                q.terms.insert(mm, *c);
            }
            Ok(q)
        };
        El::make(core, fix(&self.num)?, fix(&self.den)?)
    }

    /// Lift an element of `target.core()` into `target`.
    pub fn lift_from_core(&self, target: &Tower) -> Result<El, FieldError> {
        let (core, map) = target.core();
        if self.tower != core {
            return Err(FieldError::TowerMismatch);
        }
        let positions: Vec<usize> =
            (0..target.nvars()).filter(|&v| map[v].is_some()).collect();
        let fix = |p: &MPoly| {
            let mut q = MPoly::zero(p.k, target.nvars());
            for (m, c) in &p.terms {
                let mut mm = vec![0u16; target.nvars()];
                for (w, &e) in m.iter().enumerate() {
                    mm[positions[w]] = e;
                }
                q.terms.insert(mm, *c);
            }
            q
        };
        Ok(El { tower: target.clone(), num: fix(&self.num), den: fix(&self.den) })
    }
}

fn unit_mono(nvars: usize, v: usize) -> Mono {
    let mut m = vec![0u16; nvars];
    m[v] = 1;
    m
}

/// Reduce powers of generator var v to degree <= 1 using its relation.
/// Returns (p', mult) with p/1 == p'/mult.
fn reduce_gen_powers(
    p: &MPoly,
    v: usize,
    kind: GenKind,
    rel_num: &MPoly,
    rel_den: &MPoly,
) -> (MPoly, MPoly) {
    let mut p = p.clone();
    let mut mult = MPoly::one(p.k, p.nvars);
    while p.max_deg(v) >= 2 {
        let e = p.max_deg(v);
        let a = p.coeff_of(v, e);
        let mono_e = {
            let mut m = vec![0u16; p.nvars];
            m[v] = e;
            m
        };
        let rest = p.add(&a.mul_monomial(&mono_e, Gf::one(p.k)));
        let lower = |d: u16, q: &MPoly| {
            let mut m = vec![0u16; p.nvars];
            m[v] = d;
            q.mul_monomial(&m, Gf::one(p.k))
        };
        p = match kind {
            GenKind::Sep => rest
                .mul(rel_den)
                .add(&lower(e - 1, &a.mul(rel_den)))
                .add(&lower(e - 2, &a.mul(rel_num))),
            GenKind::Insep => rest.mul(rel_den).add(&lower(e - 2, &a.mul(rel_num))),
        };
        mult = mult.mul(rel_den);
    }
    (p, mult)
}

/// Square root of a polynomial value inside the tower field (not merely in
/// the polynomial ring): peel generator layers outermost-first.
fn sqrt_of_poly(tower: &Tower, h: &MPoly) -> Result<Option<El>, FieldError> {
    let gens = tower.generator_vars();
    sqrt_peel(tower, h, &gens)
}

fn sqrt_peel(tower: &Tower, h: &MPoly, gens: &[usize]) -> Result<Option<El>, FieldError> {
    if gens.is_empty() {
        debug_assert!(tower.generator_vars().iter().all(|&g| !h.involves(g)));
        return Ok(h.sqrt_exact().map(|s| El {
            tower: tower.clone(),
            num: s,
            den: MPoly::one(tower.k(), tower.nvars()),
        }));
    }
    let v = *gens.last().unwrap();
    let inner = &gens[..gens.len() - 1];
    let (kind, rel_num, rel_den) = tower.relation(v).unwrap();
    debug_assert!(h.max_deg(v) <= 1);
    let h0 = h.coeff_of(v, 0);
    let h1 = h.coeff_of(v, 1);
    match kind {
        GenKind::Sep => {
            // (y0 + y1 y)^2 = (y0^2 + y1^2 delta) + y1^2 y
            let Some(y1) = sqrt_peel(tower, &h1, inner)? else {
                return Ok(None);
            };
            let delta = El::make(tower.clone(), rel_num, rel_den)?;
            let h0e = El::make(tower.clone(), h0, MPoly::one(tower.k(), tower.nvars()))?;
            let target = h0e.add_checked(&y1.square().mul_checked(&delta)?)?;
            let th = target.num.mul(&target.den);
            let tden = target.den.square();
            match sqrt_peel(tower, &th, inner)? {
                None => Ok(None),
                Some(y0) => {
                    let y0 = El::make(
                        tower.clone(),
                        y0.num,
                        y0.den.mul(&tden.sqrt_exact().unwrap()),
                    )?;
                    let gen = tower.var(v);
                    Ok(Some(y0.add_checked(&y1.mul_checked(&gen)?)?))
                }
            }
        }
        GenKind::Insep => {
            // squares of S(z) lie in S^2 + S^2 d; with only insep layers left
            // they land in the rational core
            if !h1.is_zero() {
                return Ok(None);
            }
            insep_span_sqrt(tower, gens, &h0)
        }
    }
}

/// Square root across a stack of insep layers: h0 is a square iff it lies in
/// the core F^2-span of subset products of the insep constants, and then
/// sqrt(h0) = sum of coefficients times the matching generator products.
/// Requires all remaining generators insep with relations over the core.
fn insep_span_sqrt(tower: &Tower, gens: &[usize], h0: &MPoly) -> Result<Option<El>, FieldError> {
    let mut pairs: Vec<(usize, El)> = Vec::new();
    for &g in gens {
        let (kind, rn, rd) = tower.relation(g).unwrap();
        match kind {
            GenKind::Sep => return Err(FieldError::UnsupportedTower),
            GenKind::Insep => {
                let c = El::make(tower.clone(), rn, rd)?;
                if !c.num.vars_involved().iter().all(|&w| tower.is_rational_var(w))
                    || !c.den.vars_involved().iter().all(|&w| tower.is_rational_var(w))
                {
                    return Err(FieldError::UnsupportedTower);
                }
                pairs.push((g, c));
            }
        }
    }
    // elements with generator coordinates are never squares here
    if tower.generator_vars().iter().any(|&g| h0.involves(g)) {
        return Ok(None);
    }
    if pairs.len() > 12 {
        return Err(FieldError::CapExceeded);
    }
    let h0e = El::make(tower.clone(), h0.clone(), MPoly::one(tower.k(), tower.nvars()))?;
    let mut basis = Vec::new();
    for mask in 0..(1u32 << pairs.len()) {
        let mut p = tower.one();
        for (i, (_, c)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                p = p.mul_checked(c)?;
            }
        }
        basis.push(p);
    }
    match crate::f2linear::f2_solve_in_core(&h0e, &basis)? {
        None => Ok(None),
        Some(coeffs) => {
            let mut out = tower.zero();
            for (mask, d) in coeffs.iter().enumerate() {
                if d.is_zero() {
                    continue;
                }
                let mut root = d.clone();
                for (i, (g, _)) in pairs.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        root = root.mul_checked(&tower.var(*g))?;
                    }
                }
                out = out.add_checked(&root)?;
            }
            Ok(Some(out))
        }
    }
}

impl fmt::Display for El {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.tower.var_names();
        if self.den.is_one() {
            write!(f, "{}", poly::format_poly(&self.num, &names))
        } else {
            write!(
                f,
                "({})/({})",
                poly::format_poly(&self.num, &names),
                poly::format_poly(&self.den, &names)
            )
        }
    }
}

impl fmt::Debug for El {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "El({self})")
    }
}

macro_rules! el_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait<&El> for &El {
            type Output = El;
            fn $method(self, rhs: &El) -> El {
                self.$checked(rhs).expect("field operation failed")
            }
        }
    };
}
el_binop!(Add, add, add_checked);
el_binop!(Sub, sub, add_checked); // char 2: subtraction is addition
el_binop!(Mul, mul, mul_checked);
el_binop!(Div, div, div_checked);
